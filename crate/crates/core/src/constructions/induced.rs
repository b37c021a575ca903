use std::collections::HashMap;

use crate::automaton::{render_word, PartialDfa, State, Word};
use crate::error::{precondition, Error, Result};
use crate::state_set::StateSet;

/// The restriction of a base automaton to `R = ∪_{w ∈ W1} δ(Q, w)` with one
/// composite letter per distinct action of the words in `W2·W1`.
#[derive(Debug, Clone)]
pub struct InducedAutomaton {
    states: Vec<State>,
    letters: Vec<Word>,
    dfa: PartialDfa,
}

impl InducedAutomaton {
    /// Base states forming `R`, in increasing order; state `i` of
    /// [`InducedAutomaton::dfa`] is `states()[i]`.
    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn state_set(&self, n: usize) -> StateSet {
        StateSet::from_states(n, self.states.iter().copied())
    }

    /// Representative base word of each composite letter.
    pub fn letters(&self) -> &[Word] {
        &self.letters
    }

    /// The induced automaton on indices `0..|R|`, with composite letters
    /// rendered as quoted, comma-joined tokens of the base alphabet.
    pub fn dfa(&self) -> &PartialDfa {
        &self.dfa
    }

    /// Expands a word over composite letters into a base word.
    pub fn expand(&self, w: &[usize]) -> Word {
        let mut out = Word::empty();
        for &c in w {
            out.extend_from(&self.letters[c]);
        }
        out
    }
}

fn composite_token(alphabet: &[String], w: &[usize]) -> String {
    if w.is_empty() {
        return "\"-\"".to_string();
    }
    format!("\"{}\"", render_word(alphabet, w).replace(' ', ","))
}

/// Builds the induced automaton for word sets `w1` and `w2`.
///
/// Composite letters `w2·w1` with the same action on `R` are merged, keeping
/// the shortest and then lexicographically least representative.
pub fn induced(dfa: &PartialDfa, w1: &[Word], w2: &[Word]) -> Result<InducedAutomaton> {
    if w1.is_empty() || w2.is_empty() {
        return Err(precondition("both word sets must be non-empty"));
    }
    for w in w1.iter().chain(w2) {
        dfa.check_word(w)?;
    }
    let all = dfa.all_states();
    let mut r = StateSet::empty(dfa.num_states());
    for w in w1 {
        r = r.union(&dfa.image(&all, w));
    }
    if r.is_empty() {
        return Err(precondition("every word of W1 is mortal, so R is empty"));
    }
    let states = r.to_vec();
    let index: HashMap<State, usize> = states.iter().enumerate().map(|(i, &q)| (q, i)).collect();

    let mut best: HashMap<Vec<Option<usize>>, Word> = HashMap::new();
    for u in w2 {
        for v in w1 {
            let word = u.concat(v);
            let action = states
                .iter()
                .map(|&q| match dfa.act(q, &word) {
                    None => Ok(None),
                    Some(t) => index
                        .get(&t)
                        .map(|&i| Some(i))
                        .ok_or_else(|| Error::Internal(format!("composite letter leaves R at state {t}"))),
                })
                .collect::<Result<Vec<_>>>()?;
            let slot = best.entry(action).or_insert_with(|| word.clone());
            if (word.len(), &word) < (slot.len(), &*slot) {
                *slot = word;
            }
        }
    }
    let mut entries: Vec<(Vec<Option<usize>>, Word)> = best.into_iter().collect();
    entries.sort_by(|x, y| (x.1.len(), &x.1).cmp(&(y.1.len(), &y.1)));

    let tokens: Vec<String> = entries.iter().map(|(_, w)| composite_token(dfa.alphabet(), w)).collect();
    let mut out = PartialDfa::new(states.len(), tokens)?;
    for (c, (action, _)) in entries.iter().enumerate() {
        for (i, &t) in action.iter().enumerate() {
            out.set(i, c, t)?;
        }
    }
    let letters = entries.into_iter().map(|(_, w)| w).collect();
    Ok(InducedAutomaton { states, letters, dfa: out })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn sample_example() {
        let dfa = fixtures::sample6();
        let b = dfa.parse_word("b").unwrap();
        let mut w2 = Vec::new();
        for head in ["a b", "a a b"] {
            for j in 0..=5 {
                let mut w = dfa.parse_word(head).unwrap();
                w.extend_from(&Word::repeat(0, j));
                w2.push(w);
            }
        }
        let ind = induced(&dfa, &[b], &w2).unwrap();
        assert_eq!(ind.states(), [0, 1, 4]);
        let abb = dfa.parse_word("a b b").unwrap();
        assert!(ind.letters().contains(&abb));
        let c = ind.letters().iter().position(|w| *w == abb).unwrap();
        let sub = ind.dfa();
        assert_eq!(sub.rank(&[c]), 1);
        assert_eq!(dfa.image(&ind.state_set(6), &ind.expand(&[c])).len(), 1);
        assert!(ind.letters().len() <= w2.len());
    }

    #[test]
    fn trivial_sets_give_the_base_automaton() {
        let dfa = fixtures::sample6();
        let ind = induced(&dfa, &[Word::empty()], &[Word::empty()]).unwrap();
        assert_eq!(ind.states(), [0, 1, 2, 3, 4, 5]);
        assert_eq!(ind.letters(), [Word::empty()]);
        assert_eq!(ind.dfa().rank(&[0]), 6);
    }

    #[test]
    fn empty_r_is_an_error() {
        // b b b is mortal on a 2-state automaton where b dies
        let dfa = PartialDfa::from_rows(&["a", "b"], &[vec![Some(1), None], vec![Some(0), None]]).unwrap();
        assert!(induced(&dfa, &[Word::new(vec![1])], &[Word::empty()]).is_err());
    }
}
