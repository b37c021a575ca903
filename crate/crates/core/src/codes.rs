//! Finite prefix codes and their literal automata.
//!
//! The literal automaton of a prefix code `X` has one state per proper prefix
//! of a codeword; reading a letter extends the prefix, returns to the root
//! (the empty prefix) when a codeword is completed, and is undefined
//! otherwise. States are numbered in lexicographic order of their prefixes,
//! so the root is state 0.
//!
//! For codes with at least two words, [`log_rank_word`] builds a word of
//! length at most `2h` whose rank is at most `⌈log₂ hn⌉ + ⌈log₂ h⌉`:
//! a filtered word that routes every surviving state through the root,
//! followed by a word that halves the survivors on the path to the pivot.

use std::collections::{BTreeSet, HashMap};

use crate::automaton::{Letter, PartialDfa, State, Word};
use crate::error::{precondition, Error, Result};
use crate::state_set::StateSet;
use crate::synchronization::{compress_from, pair_table};

/// Enumeration cap for [`all_through_root_word`].
pub const MAX_FILTER_CANDIDATES: u64 = 1 << 22;

/// A non-empty, duplicate-free, prefix-free set of non-empty words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixCode {
    alphabet: Vec<String>,
    words: Vec<Word>,
}

impl PrefixCode {
    /// Validates codewords over an explicit alphabet of single characters.
    pub fn with_alphabet(alphabet: Vec<char>, words: &[&str]) -> Result<Self> {
        let mut sorted = alphabet.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != alphabet.len() || alphabet.is_empty() {
            return Err(Error::InvalidCode("alphabet must be non-empty and duplicate-free".into()));
        }
        let index: HashMap<char, Letter> = alphabet.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let words = words
            .iter()
            .map(|w| {
                w.chars()
                    .map(|c| {
                        index
                            .get(&c)
                            .copied()
                            .ok_or_else(|| Error::InvalidCode(format!("letter {c:?} of `{w}` not in the alphabet")))
                    })
                    .collect::<Result<Vec<_>>>()
                    .map(Word::new)
            })
            .collect::<Result<Vec<_>>>()?;
        PrefixCode::new(alphabet.iter().map(|c| c.to_string()).collect(), words)
    }

    pub fn new(alphabet: Vec<String>, words: Vec<Word>) -> Result<Self> {
        let code = PrefixCode { alphabet, words };
        code.check()?;
        Ok(code)
    }

    fn check(&self) -> Result<()> {
        if self.words.is_empty() {
            return Err(Error::InvalidCode("the code must contain at least one codeword".into()));
        }
        if self.words.iter().any(|w| w.is_empty()) {
            return Err(Error::InvalidCode("the empty word cannot be a codeword".into()));
        }
        if let Some(w) = self.words.iter().flat_map(|w| w.iter()).find(|&&a| a >= self.alphabet.len()) {
            return Err(Error::InvalidCode(format!("letter index {w} out of range")));
        }
        // a prefix of v sorts immediately before v or before another word it prefixes
        let mut sorted: Vec<&Word> = self.words.iter().collect();
        sorted.sort();
        for pair in sorted.windows(2) {
            let (u, v) = (pair[0], pair[1]);
            if u == v {
                return Err(Error::InvalidCode(format!("duplicate codeword `{}`", self.render(u))));
            }
            if v.starts_with(u) {
                return Err(Error::InvalidCode(format!(
                    "`{}` is a prefix of `{}`",
                    self.render(u),
                    self.render(v)
                )));
            }
        }
        Ok(())
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn total_length(&self) -> usize {
        self.words.iter().map(|w| w.len()).sum()
    }

    /// Letters concatenated without separators.
    pub fn render(&self, w: &[Letter]) -> String {
        w.iter().map(|&a| self.alphabet[a].as_str()).collect()
    }

    /// One codeword per line.
    pub fn to_text(&self) -> String {
        self.words.iter().map(|w| self.render(w) + "\n").collect()
    }
}

/// Validates codewords whose letters are single characters; the alphabet is
/// the set of characters used, in character order.
pub fn validate_code<S: AsRef<str>>(words: &[S]) -> Result<PrefixCode> {
    let chars: BTreeSet<char> = words.iter().flat_map(|w| w.as_ref().chars()).collect();
    if chars.is_empty() {
        return Err(Error::InvalidCode(if words.is_empty() {
            "the code must contain at least one codeword".into()
        } else {
            "the empty word cannot be a codeword".into()
        }));
    }
    let refs: Vec<&str> = words.iter().map(AsRef::as_ref).collect();
    PrefixCode::with_alphabet(chars.into_iter().collect(), &refs)
}

/// The literal automaton of a prefix code.
#[derive(Debug, Clone)]
pub struct LiteralAutomaton {
    code: PrefixCode,
    dfa: PartialDfa,
    prefixes: Vec<Word>,
    state_of: HashMap<Word, State>,
    height: usize,
}

impl LiteralAutomaton {
    pub fn code(&self) -> &PrefixCode {
        &self.code
    }

    pub fn dfa(&self) -> &PartialDfa {
        &self.dfa
    }

    pub fn root(&self) -> State {
        0
    }

    /// Length of the longest codeword minus one.
    pub fn height(&self) -> usize {
        self.height
    }

    pub fn num_states(&self) -> usize {
        self.dfa.num_states()
    }

    pub fn prefix(&self, q: State) -> &Word {
        &self.prefixes[q]
    }

    pub fn state_of(&self, prefix: &[Letter]) -> Option<State> {
        self.state_of.get(prefix).copied()
    }

    pub fn state_of_str(&self, prefix: &str) -> Option<State> {
        let letters = prefix
            .chars()
            .map(|c| self.code.alphabet.iter().position(|t| t.starts_with(c) && t.len() == c.len_utf8()))
            .collect::<Option<Vec<_>>>()?;
        self.state_of(&letters)
    }

    /// Number of states on which `w` is defined.
    pub fn defined_count(&self, w: &[Letter]) -> usize {
        (0..self.num_states()).filter(|&q| self.dfa.act(q, w).is_some()).count()
    }
}

pub fn literal_automaton(code: &PrefixCode) -> LiteralAutomaton {
    let mut prefixes: BTreeSet<Word> = BTreeSet::new();
    for w in code.words() {
        for i in 0..w.len() {
            prefixes.insert(Word::from(&w[..i]));
        }
    }
    let prefixes: Vec<Word> = prefixes.into_iter().collect();
    let state_of: HashMap<Word, State> = prefixes.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    let codewords: BTreeSet<&Word> = code.words().iter().collect();
    let mut dfa = PartialDfa::new(prefixes.len(), code.alphabet().to_vec()).expect("code alphabet is valid");
    for (q, p) in prefixes.iter().enumerate() {
        for a in 0..code.alphabet().len() {
            let next = p.concat(&[a]);
            let target = if codewords.contains(&next) { Some(0) } else { state_of.get(&next).copied() };
            dfa.set(q, a, target).expect("states come from the prefix table");
        }
    }
    let height = code.words().iter().map(|w| w.len()).max().unwrap_or(1) - 1;
    LiteralAutomaton { code: code.clone(), dfa, prefixes, state_of, height }
}

/// `(y, k)` with `x = y^k` and `y` primitive, via the smallest period of `x`.
pub fn primitive_root(x: &[Letter]) -> (Word, usize) {
    let m = x.len();
    if m == 0 {
        return (Word::empty(), 0);
    }
    // prefix function: border[i] = longest proper border of x[..=i]
    let mut border = vec![0usize; m];
    for i in 1..m {
        let mut k = border[i - 1];
        while k > 0 && x[i] != x[k] {
            k = border[k - 1];
        }
        if x[i] == x[k] {
            k += 1;
        }
        border[i] = k;
    }
    let period = m - border[m - 1];
    if m % period == 0 {
        (Word::from(&x[..period]), m / period)
    } else {
        (Word::from(x), 1)
    }
}

pub fn is_primitive(x: &[Letter]) -> bool {
    !x.is_empty() && primitive_root(x).1 == 1
}

/// Minimal non-zero rank of the literal automaton of a one-word code `{y^k}`: `k`.
pub fn one_word_rank(code: &PrefixCode) -> Result<usize> {
    match code.words() {
        [x] => Ok(primitive_root(x).1),
        _ => Err(precondition("one_word_rank requires a code with exactly one word")),
    }
}

/// A conjugate `u·v` of the primitive word `x` where both `u` and `v` are
/// defined on exactly one state of the literal automaton of `{x}`.
///
/// All rotations and split points are scanned; the split with the shortest
/// part wins, earliest in scan order on ties.
pub fn weinbaum_conjugate(x: &[Letter], lit: &LiteralAutomaton) -> Result<(Word, Word)> {
    if !is_primitive(x) {
        return Err(precondition("the word is not primitive"));
    }
    if lit.code().words() != [Word::from(x)] {
        return Err(precondition("the automaton is not the literal automaton of {x}"));
    }
    let m = x.len();
    if m == 1 {
        return Ok((Word::from(x), Word::empty()));
    }
    let mut best: Option<(Word, Word)> = None;
    for i in 0..m {
        let rotated: Vec<Letter> = x[i..].iter().chain(&x[..i]).copied().collect();
        for j in 1..m {
            let (u, v) = rotated.split_at(j);
            if lit.defined_count(u) == 1 && lit.defined_count(v) == 1 {
                let shorter = j.min(m - j);
                if best.as_ref().is_none_or(|(bu, bv)| shorter < bu.len().min(bv.len())) {
                    best = Some((Word::from(u), Word::from(v)));
                }
            }
        }
    }
    best.ok_or_else(|| Error::Internal("no conjugate with single-state factors".into()))
}

/// The state with at least two defined letters nearest to the root.
pub fn pivot_state(lit: &LiteralAutomaton) -> Result<State> {
    if lit.code().len() < 2 {
        return Err(precondition("the pivot exists only for codes with at least two words"));
    }
    let dfa = lit.dfa();
    let mut q = lit.root();
    for _ in 0..=lit.num_states() {
        let defined: Vec<Letter> = (0..dfa.num_letters()).filter(|&a| dfa.step(q, a).is_some()).collect();
        match defined[..] {
            [a] => q = dfa.step(q, a).unwrap(),
            [] => return Err(Error::Internal(format!("state {q} has no outgoing transition"))),
            _ => return Ok(q),
        }
    }
    Err(Error::Internal("no branching state on the path from the root".into()))
}

/// The two alphabet-least letters defined at the pivot.
pub fn pivot_letters(lit: &LiteralAutomaton, pivot: State) -> (Letter, Letter) {
    let dfa = lit.dfa();
    let mut defined = (0..dfa.num_letters()).filter(|&a| dfa.step(pivot, a).is_some());
    let a = defined.next().expect("pivot has two defined letters");
    let b = defined.next().expect("pivot has two defined letters");
    (a, b)
}

/// States strictly before the pivot on the path from the root, root first.
pub fn path_to_pivot(lit: &LiteralAutomaton, pivot: State) -> Vec<State> {
    let depth = lit.prefix(pivot).len();
    (0..depth)
        .map(|d| lit.state_of(&lit.prefix(pivot)[..d]).expect("prefixes of states are states"))
        .collect()
}

/// The filtering map `α`: while the pivot is active the next input letter is
/// consumed, otherwise the alphabet-least letter defined somewhere on the
/// active set is applied. Stops when the input is exhausted or the output
/// reaches the height.
pub fn filtering_alpha(lit: &LiteralAutomaton, pivot: State, w: &[Letter]) -> Word {
    let dfa = lit.dfa();
    let h = lit.height();
    let mut out = Word::empty();
    if h == 0 {
        return out;
    }
    let mut active = dfa.all_states();
    let mut rest = w;
    loop {
        let letter = if active.contains(pivot) {
            match rest.split_first() {
                Some((&a, tail)) => {
                    rest = tail;
                    a
                }
                None => break,
            }
        } else {
            match (0..dfa.num_letters()).find(|&y| !dfa.image_letter(&active, y).is_empty()) {
                Some(y) => y,
                None => break,
            }
        };
        active = dfa.image_letter(&active, letter);
        out.push(letter);
        if rest.is_empty() || out.len() >= h {
            break;
        }
    }
    out
}

/// `⌈log₂ x⌉` for `x ≥ 1`, and 0 for `x = 0`.
pub fn ceil_log2(x: usize) -> usize {
    if x <= 1 {
        0
    } else {
        (usize::BITS - (x - 1).leading_zeros()) as usize
    }
}

/// Every state on which `w` is defined is at the root after some prefix of `w`
/// (the empty prefix included), and `w` is non-mortal.
pub fn passes_through_root(lit: &LiteralAutomaton, w: &[Letter]) -> bool {
    let dfa = lit.dfa();
    let mut survivors = 0;
    for q in 0..lit.num_states() {
        let mut cur = Some(q);
        let mut visited_root = q == lit.root();
        for &a in w {
            cur = cur.and_then(|s| dfa.step(s, a));
            match cur {
                None => break,
                Some(s) if s == lit.root() => visited_root = true,
                _ => {}
            }
        }
        if cur.is_some() {
            survivors += 1;
            if !visited_root {
                return false;
            }
        }
    }
    survivors > 0
}

/// Output of [`all_through_root_word`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilteredWord {
    /// Input over the two pivot letters.
    pub input: Word,
    /// Its filtered image `α(input)`.
    pub word: Word,
    pub candidates_tried: u64,
}

/// Runs `visit` on every filtered word that routes all surviving states
/// through the root, over inputs of length `⌈log₂ hn⌉` on the pivot letters in
/// lexicographic order, until `visit` returns a value.
fn search_through_root<T>(lit: &LiteralAutomaton, mut visit: impl FnMut(FilteredWord) -> Option<T>) -> Result<Option<T>> {
    let pivot = pivot_state(lit)?;
    let (a, b) = pivot_letters(lit, pivot);
    let len = ceil_log2(lit.height() * lit.num_states());
    if len >= 63 || (1u64 << len) > MAX_FILTER_CANDIDATES {
        return Err(Error::TooLarge { what: format!("2^{len} filtering candidates"), limit: MAX_FILTER_CANDIDATES as usize });
    }
    for code in 0..(1u64 << len) {
        let input: Word = (0..len).map(|i| if code >> (len - 1 - i) & 1 == 0 { a } else { b }).collect();
        let word = filtering_alpha(lit, pivot, &input);
        if passes_through_root(lit, &word) {
            if let Some(found) = visit(FilteredWord { input, word, candidates_tried: code + 1 }) {
                return Ok(Some(found));
            }
        }
    }
    Ok(None)
}

/// The lexicographically first input whose filtered word routes every
/// surviving state through the root.
pub fn all_through_root_word(lit: &LiteralAutomaton) -> Result<FilteredWord> {
    search_through_root(lit, Some)?.ok_or_else(|| Error::Internal("no filtered word passes through the root".into()))
}

/// Result of [`compress_path_steps`]: the word and the active-set size before
/// each halving step plus the final size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathCompression {
    pub word: Word,
    pub active_sizes: Vec<usize>,
}

/// Compresses the states of `r` lying strictly between the root and the pivot.
pub fn compress_path_word(lit: &LiteralAutomaton, r: &StateSet) -> Result<Word> {
    compress_path_steps(lit, r).map(|c| c.word)
}

/// The halving loop: route the active state nearest to the pivot onto it,
/// drop it from the active set, then apply the pivot letter that kills at
/// least half of the remaining active path states. When no active path state
/// remains after routing, the pivot letter is omitted.
pub fn compress_path_steps(lit: &LiteralAutomaton, r: &StateSet) -> Result<PathCompression> {
    let dfa = lit.dfa();
    if r.universe() != lit.num_states() {
        return Err(precondition("the set does not belong to this automaton"));
    }
    let pivot = pivot_state(lit)?;
    let (a, b) = pivot_letters(lit, pivot);
    let path = path_to_pivot(lit, pivot);
    let on_path = StateSet::from_states(lit.num_states(), path.iter().copied());
    let pivot_prefix = lit.prefix(pivot).clone();
    let depth_of = |q: State| lit.prefix(q).len();

    let mut active = r.intersection(&on_path);
    let mut word = Word::empty();
    let mut sizes = vec![active.len()];
    let h = lit.height();
    while !active.is_empty() {
        let to_pivot: Word = if active.contains(pivot) {
            Word::empty()
        } else {
            let nearest = active.iter().max_by_key(|&q| depth_of(q)).unwrap();
            if !on_path.contains(nearest) {
                return Err(Error::Internal(format!("active state {nearest} left the path")));
            }
            Word::from(&pivot_prefix[depth_of(nearest)..])
        };
        let moved = dfa.image(&active, &to_pivot);
        let mut rest = moved.clone();
        rest.remove(pivot);
        word.extend_from(&to_pivot);
        if rest.is_empty() {
            // nothing left to kill, so no pivot letter is needed
            sizes.push(0);
            break;
        }
        let killed_by_a = rest.iter().filter(|&q| dfa.step(q, a).is_none()).count();
        let kill = if 2 * killed_by_a >= rest.len() { a } else { b };
        active = dfa.image_letter(&rest, kill);
        word.push(kill);
        sizes.push(active.len());
        if word.len() >= h {
            break;
        }
    }
    Ok(PathCompression { word, active_sizes: sizes })
}

/// Output of [`log_rank_word`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogRankWord {
    pub filtered: FilteredWord,
    pub path_word: Word,
    pub word: Word,
}

/// `⌈log₂ hn⌉ + ⌈log₂ h⌉`, or 1 for height 0 where the only automaton is
/// the one-state loop.
pub fn log_rank_bound(lit: &LiteralAutomaton) -> usize {
    let h = lit.height();
    if h == 0 {
        return 1;
    }
    ceil_log2(h * lit.num_states()) + ceil_log2(h)
}

/// A non-mortal word of length at most `2h` and rank at most
/// [`log_rank_bound`], for codes with at least two words.
///
/// Through-root candidates are tried in order and the first `α(w)·v` meeting
/// all three bounds is returned. The first candidate nearly always does; at
/// height 1 the path part keeps one state alive while `⌈log₂ h⌉ = 0`, and a
/// later candidate is needed.
pub fn log_rank_word(lit: &LiteralAutomaton) -> Result<LogRankWord> {
    if lit.code().len() < 2 {
        return Err(precondition("log_rank_word requires at least two codewords; use the one-word route"));
    }
    let dfa = lit.dfa();
    let h = lit.height();
    let bound = log_rank_bound(lit);
    let mut failure: Option<Error> = None;
    let found = search_through_root(lit, |filtered| {
        let r = dfa.image(&dfa.all_states(), &filtered.word);
        let path_word = match compress_path_word(lit, &r) {
            Ok(v) => v,
            Err(e) => {
                failure = Some(e);
                return Some(None);
            }
        };
        let word = filtered.word.concat(&path_word);
        let rank = dfa.rank(&word);
        (rank >= 1 && word.len() <= 2 * h && rank <= bound).then(|| Some(LogRankWord { filtered, path_word, word }))
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    found.flatten().ok_or_else(|| {
        Error::Internal(format!("no through-root candidate yields rank at most {bound} within length {}", 2 * h))
    })
}

/// A reset word of a synchronizing literal automaton.
///
/// One-word codes use the shorter factor of a single-state conjugate; larger
/// codes synchronize the image of [`log_rank_word`] by greedy pair compression.
pub fn literal_reset_word(lit: &LiteralAutomaton) -> Result<Word> {
    let dfa = lit.dfa();
    let table = pair_table(dfa);
    if let Some((p, q)) = table.first_incompressible() {
        return Err(Error::NotSynchronizing { p, q });
    }
    let word = if lit.code().len() == 1 {
        let x = lit.code().words()[0].clone();
        let (u, v) = weinbaum_conjugate(&x, lit)?;
        if u.len() <= v.len() {
            u
        } else {
            v
        }
    } else {
        let prefix = log_rank_word(lit)?.word;
        let r = dfa.image(&dfa.all_states(), &prefix);
        let rest = compress_from(dfa, &table, &r);
        prefix.concat(&rest.word)
    };
    if dfa.rank(&word) != 1 {
        return Err(Error::Internal("constructed word is not a reset word".into()));
    }
    Ok(word)
}
