//! Partial deterministic automata and the action of words on states and sets.
//!
//! States are dense indices `0..n`, letters are indices into the declared
//! alphabet, and an undefined transition is represented by `None`. No sink
//! state is ever added implicitly.

use std::collections::VecDeque;
use std::ops::Deref;

use crate::error::{precondition, Error, Result};
use crate::state_set::StateSet;

pub type State = usize;
pub type Letter = usize;

/// Token reserved for the auxiliary letter of collecting and duplicating automata.
pub const GAMMA: &str = "@g";

/// A finite sequence of letter indices.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn push(&mut self, a: Letter) {
        self.0.push(a);
    }

    pub fn extend_from(&mut self, other: &[Letter]) {
        self.0.extend_from_slice(other);
    }

    pub fn concat(&self, other: &[Letter]) -> Word {
        let mut letters = self.0.clone();
        letters.extend_from_slice(other);
        Word(letters)
    }

    pub fn repeat(a: Letter, times: usize) -> Word {
        Word(vec![a; times])
    }
}

impl std::borrow::Borrow<[Letter]> for Word {
    fn borrow(&self) -> &[Letter] {
        &self.0
    }
}

impl Deref for Word {
    type Target = [Letter];

    fn deref(&self) -> &[Letter] {
        &self.0
    }
}

impl From<Vec<Letter>> for Word {
    fn from(letters: Vec<Letter>) -> Self {
        Word(letters)
    }
}

impl From<&[Letter]> for Word {
    fn from(letters: &[Letter]) -> Self {
        Word(letters.to_vec())
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

/// A partial DFA `(Q, Σ, δ)` without initial or final states.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PartialDfa {
    n: usize,
    alphabet: Vec<String>,
    // row-major: trans[q * |Σ| + a]
    trans: Vec<Option<State>>,
}

impl PartialDfa {
    /// An automaton on `n` states where every transition is undefined.
    pub fn new(n: usize, alphabet: Vec<String>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidAutomaton("an automaton needs at least one state".into()));
        }
        if alphabet.is_empty() {
            return Err(Error::InvalidAutomaton("the alphabet must not be empty".into()));
        }
        for (i, tok) in alphabet.iter().enumerate() {
            if tok.is_empty() || tok.chars().any(char::is_whitespace) {
                return Err(Error::InvalidAutomaton(format!("invalid letter token {tok:?}")));
            }
            if alphabet[..i].contains(tok) {
                return Err(Error::InvalidAutomaton(format!("duplicate letter {tok:?}")));
            }
        }
        let k = alphabet.len();
        Ok(PartialDfa { n, alphabet, trans: vec![None; n * k] })
    }

    /// Builds an automaton from one row of targets per state, in alphabet order.
    pub fn from_rows<S: AsRef<str>>(alphabet: &[S], rows: &[Vec<Option<State>>]) -> Result<Self> {
        let alphabet: Vec<String> = alphabet.iter().map(|s| s.as_ref().to_string()).collect();
        let mut dfa = PartialDfa::new(rows.len(), alphabet)?;
        for (q, row) in rows.iter().enumerate() {
            if row.len() != dfa.alphabet.len() {
                return Err(Error::InvalidAutomaton(format!(
                    "row {q} has {} entries, expected {}",
                    row.len(),
                    dfa.alphabet.len()
                )));
            }
            for (a, &t) in row.iter().enumerate() {
                dfa.set(q, a, t)?;
            }
        }
        Ok(dfa)
    }

    pub fn set(&mut self, q: State, a: Letter, target: Option<State>) -> Result<()> {
        if q >= self.n {
            return Err(Error::InvalidAutomaton(format!("state {q} out of range")));
        }
        if a >= self.alphabet.len() {
            return Err(Error::InvalidAutomaton(format!("letter {a} out of range")));
        }
        if let Some(t) = target {
            if t >= self.n {
                return Err(Error::InvalidAutomaton(format!("target state {t} out of range")));
            }
        }
        let k = self.alphabet.len();
        self.trans[q * k + a] = target;
        Ok(())
    }

    pub fn num_states(&self) -> usize {
        self.n
    }

    pub fn num_letters(&self) -> usize {
        self.alphabet.len()
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn letter_index(&self, token: &str) -> Option<Letter> {
        self.alphabet.iter().position(|t| t == token)
    }

    #[inline]
    pub fn step(&self, q: State, a: Letter) -> Option<State> {
        self.trans[q * self.alphabet.len() + a]
    }

    /// `δ(q, w)`, `None` when the run hits an undefined transition.
    pub fn act(&self, q: State, w: &[Letter]) -> Option<State> {
        w.iter().try_fold(q, |q, &a| self.step(q, a))
    }

    pub fn all_states(&self) -> StateSet {
        StateSet::full(self.n)
    }

    pub fn image(&self, set: &StateSet, w: &[Letter]) -> StateSet {
        let mut cur = set.clone();
        for &a in w {
            cur = self.image_letter(&cur, a);
            if cur.is_empty() {
                break;
            }
        }
        cur
    }

    pub fn image_letter(&self, set: &StateSet, a: Letter) -> StateSet {
        let mut next = StateSet::empty(self.n);
        for q in set.iter() {
            if let Some(t) = self.step(q, a) {
                next.insert(t);
            }
        }
        next
    }

    pub fn preimage(&self, set: &StateSet, w: &[Letter]) -> StateSet {
        StateSet::from_states(
            self.n,
            (0..self.n).filter(|&q| self.act(q, w).is_some_and(|t| set.contains(t))),
        )
    }

    pub fn rank(&self, w: &[Letter]) -> usize {
        self.image(&self.all_states(), w).len()
    }

    pub fn is_mortal(&self, w: &[Letter]) -> bool {
        self.rank(w) == 0
    }

    pub fn is_complete(&self) -> bool {
        self.trans.iter().all(Option::is_some)
    }

    /// Some letter is defined on at least one state and undefined on another.
    pub fn is_properly_incomplete(&self) -> bool {
        (0..self.num_letters()).any(|a| {
            let defined = (0..self.n).filter(|&q| self.step(q, a).is_some()).count();
            defined > 0 && defined < self.n
        })
    }

    /// Letters whose transition is undefined on every state.
    pub fn fully_undefined_letters(&self) -> Vec<Letter> {
        (0..self.num_letters())
            .filter(|&a| (0..self.n).all(|q| self.step(q, a).is_none()))
            .collect()
    }

    fn reachable_from(&self, start: State, reversed: bool) -> StateSet {
        let k = self.num_letters();
        let mut seen = StateSet::singleton(self.n, start);
        let mut stack = vec![start];
        if reversed {
            let preds = self.predecessors();
            while let Some(q) = stack.pop() {
                for &p in &preds[q] {
                    if !seen.contains(p) {
                        seen.insert(p);
                        stack.push(p);
                    }
                }
            }
        } else {
            while let Some(q) = stack.pop() {
                for a in 0..k {
                    if let Some(t) = self.step(q, a) {
                        if !seen.contains(t) {
                            seen.insert(t);
                            stack.push(t);
                        }
                    }
                }
            }
        }
        seen
    }

    /// Predecessor lists over defined transitions (with multiplicity dropped).
    fn predecessors(&self) -> Vec<Vec<State>> {
        let mut preds = vec![Vec::new(); self.n];
        for q in 0..self.n {
            for a in 0..self.num_letters() {
                if let Some(t) = self.step(q, a) {
                    if preds[t].last() != Some(&q) {
                        preds[t].push(q);
                    }
                }
            }
        }
        preds
    }

    /// Strong connectivity of the digraph of defined transitions: state 0 reaches
    /// everything and is reached from everything.
    pub fn is_strongly_connected(&self) -> bool {
        self.reachable_from(0, false).len() == self.n && self.reachable_from(0, true).len() == self.n
    }

    /// Shortest word mapping `p` to `q`; among shortest words the one whose
    /// letters come first in alphabet order.
    pub fn connecting_word(&self, p: State, q: State) -> Result<Word> {
        if p >= self.n || q >= self.n {
            return Err(precondition(format!("states {p}, {q} out of range")));
        }
        if !self.is_strongly_connected() {
            return Err(Error::NotStronglyConnected);
        }
        self.shortest_path(p, q)
            .ok_or_else(|| Error::Internal(format!("no path from {p} to {q} in a strongly connected automaton")))
    }

    /// BFS from `p` to `q`; letters tried in alphabet order so the first
    /// discovered path is the lexicographically least shortest one.
    pub(crate) fn shortest_path(&self, p: State, q: State) -> Option<Word> {
        if p == q {
            return Some(Word::empty());
        }
        let mut parent: Vec<Option<(State, Letter)>> = vec![None; self.n];
        let mut seen = StateSet::singleton(self.n, p);
        let mut queue = VecDeque::from([p]);
        while let Some(s) = queue.pop_front() {
            for a in 0..self.num_letters() {
                let Some(t) = self.step(s, a) else { continue };
                if seen.contains(t) {
                    continue;
                }
                seen.insert(t);
                parent[t] = Some((s, a));
                if t == q {
                    let mut letters = Vec::new();
                    let mut cur = q;
                    while cur != p {
                        let (s, a) = parent[cur].expect("BFS parent");
                        letters.push(a);
                        cur = s;
                    }
                    letters.reverse();
                    return Some(Word::new(letters));
                }
                queue.push_back(t);
            }
        }
        None
    }

    /// Strongly connected and in-degree equals out-degree at every state,
    /// counting defined transitions with multiplicity.
    pub fn is_eulerian(&self) -> bool {
        if !self.is_strongly_connected() {
            return false;
        }
        let mut balance = vec![0i64; self.n];
        for q in 0..self.n {
            for a in 0..self.num_letters() {
                if let Some(t) = self.step(q, a) {
                    balance[q] += 1;
                    balance[t] -= 1;
                }
            }
        }
        balance.iter().all(|&b| b == 0)
    }

    /// Checks that every letter of `w` belongs to this automaton's alphabet.
    pub fn check_word(&self, w: &[Letter]) -> Result<()> {
        match w.iter().find(|&&a| a >= self.num_letters()) {
            Some(a) => Err(Error::InvalidWord(format!("letter index {a} out of range"))),
            None => Ok(()),
        }
    }

    /// Parses space-separated letter tokens; `-` or an empty string is the empty word.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let text = text.trim();
        if text.is_empty() || text == "-" {
            return Ok(Word::empty());
        }
        text.split_whitespace()
            .map(|tok| {
                self.letter_index(tok)
                    .ok_or_else(|| Error::InvalidWord(format!("unknown letter {tok:?}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Word::new)
    }

    /// Space-separated tokens, `-` for the empty word.
    pub fn render_word(&self, w: &[Letter]) -> String {
        render_word(&self.alphabet, w)
    }
}

pub fn render_word(alphabet: &[String], w: &[Letter]) -> String {
    if w.is_empty() {
        return "-".to_string();
    }
    w.iter().map(|&a| alphabet[a].as_str()).collect::<Vec<_>>().join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn q(i: usize) -> State {
        i - 1
    }

    fn set(dfa: &PartialDfa, states: &[usize]) -> StateSet {
        StateSet::from_states(dfa.num_states(), states.iter().map(|&i| q(i)))
    }

    #[test]
    fn one_state_loop() {
        let dfa = PartialDfa::from_rows(&["a"], &[vec![Some(0)]]).unwrap();
        assert!(dfa.is_complete());
        assert!(dfa.is_strongly_connected());
        assert!(dfa.is_eulerian());
        assert_eq!(dfa.rank(&[]), 1);
        assert_eq!(dfa.rank(&[0, 0]), 1);
    }

    #[test]
    fn sample_images_and_preimages() {
        let dfa = fixtures::sample6();
        let w = dfa.parse_word("b").unwrap();
        assert_eq!(dfa.image(&dfa.all_states(), &w), set(&dfa, &[1, 2, 5]));
        assert_eq!(dfa.rank(&w), 3);
        let ba = dfa.parse_word("b a").unwrap();
        assert_eq!(dfa.image(&dfa.all_states(), &ba), set(&dfa, &[2, 3, 6]));
        let bab = dfa.parse_word("b a b").unwrap();
        assert_eq!(dfa.image(&dfa.all_states(), &bab), set(&dfa, &[2]));
        assert_eq!(dfa.rank(&bab), 1);
        assert_eq!(dfa.preimage(&set(&dfa, &[2]), &bab), set(&dfa, &[1, 4]));
        assert_eq!(dfa.image(&dfa.all_states(), &[]), dfa.all_states());
        assert_eq!(dfa.preimage(&dfa.all_states(), &[]), dfa.all_states());
        assert_eq!(dfa.rank(&[]), 6);
    }

    #[test]
    fn sample_predicates() {
        let dfa = fixtures::sample6();
        assert!(dfa.is_strongly_connected());
        assert!(!dfa.is_complete());
        assert!(dfa.is_properly_incomplete());
        // out-degrees 2,2,1,2,2,1; in-degree of q1 is 3 (a from q6, b from q1 and q4)
        assert!(!dfa.is_eulerian());
        let bb = dfa.parse_word("b b").unwrap();
        // δ(Q,b) = {q1,q2,q5}, all fixed by b
        assert_eq!(dfa.image(&dfa.all_states(), &bb), set(&dfa, &[1, 2, 5]));
        assert!(!dfa.is_mortal(&bb));
    }

    #[test]
    fn undefined_letter_is_not_proper_incompleteness() {
        let dfa = PartialDfa::from_rows(&["a", "b"], &[vec![Some(1), None], vec![Some(0), None]]).unwrap();
        assert!(!dfa.is_complete());
        assert!(!dfa.is_properly_incomplete());
        assert_eq!(dfa.fully_undefined_letters(), vec![1]);
    }

    #[test]
    fn not_strongly_connected() {
        let dfa = PartialDfa::from_rows(&["a"], &[vec![Some(1)], vec![None]]).unwrap();
        assert!(!dfa.is_strongly_connected());
        assert_eq!(dfa.connecting_word(0, 1), Err(Error::NotStronglyConnected));
    }

    #[test]
    fn connecting_words() {
        let two = PartialDfa::from_rows(&["a"], &[vec![Some(1)], vec![Some(0)]]).unwrap();
        assert_eq!(two.connecting_word(0, 1).unwrap(), Word::new(vec![0]));
        assert_eq!(two.connecting_word(1, 1).unwrap(), Word::empty());

        let dfa = fixtures::sample6();
        for p in 0..6 {
            for t in 0..6 {
                let w = dfa.connecting_word(p, t).unwrap();
                assert_eq!(dfa.act(p, &w), Some(t));
                assert!(w.len() <= 5);
            }
        }
        // q1 -a-> q2
        assert_eq!(dfa.render_word(&dfa.connecting_word(q(1), q(2)).unwrap()), "a");
    }

    #[test]
    fn cyclic_shift_is_eulerian() {
        let dfa = PartialDfa::from_rows(
            &["a", "b"],
            &[vec![Some(1), Some(0)], vec![Some(2), Some(1)], vec![Some(0), Some(2)]],
        )
        .unwrap();
        assert!(dfa.is_eulerian());
    }

    #[test]
    fn word_parsing() {
        let dfa = fixtures::sample6();
        assert_eq!(dfa.parse_word("-").unwrap(), Word::empty());
        assert!(dfa.parse_word("a c").is_err());
        assert_eq!(dfa.render_word(&[]), "-");
        assert_eq!(dfa.render_word(&[1, 0, 1]), "b a b");
    }

    #[test]
    fn construction_errors() {
        assert!(PartialDfa::new(0, vec!["a".into()]).is_err());
        assert!(PartialDfa::new(1, vec![]).is_err());
        assert!(PartialDfa::new(1, vec!["a".into(), "a".into()]).is_err());
        let mut dfa = PartialDfa::new(2, vec!["a".into()]).unwrap();
        assert!(dfa.set(0, 0, Some(2)).is_err());
    }
}
