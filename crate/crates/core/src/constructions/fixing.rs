use crate::automaton::{Letter, PartialDfa, Word};
use crate::error::{precondition, Result};
use crate::state_set::StateSet;

/// The complete automaton in which every undefined transition becomes a self-loop.
pub fn fixing(dfa: &PartialDfa) -> PartialDfa {
    let mut out = dfa.clone();
    for q in 0..dfa.num_states() {
        for a in 0..dfa.num_letters() {
            if dfa.step(q, a).is_none() {
                out.set(q, a, Some(q)).expect("indices come from the same automaton");
            }
        }
    }
    out
}

/// Turns a word of the fixing automaton into a word of `dfa` that is not
/// longer and whose image of `set` is non-empty and contained in the fixing
/// automaton's image.
///
/// Letters are scanned left to right; a letter is dropped whenever it is
/// undefined on the whole current image, since the fixing automaton keeps
/// those states in place.
pub fn lift_word_to_partial(dfa: &PartialDfa, set: &StateSet, w: &[Letter]) -> Result<Word> {
    if set.is_empty() {
        return Err(precondition("the set must be non-empty"));
    }
    dfa.check_word(w)?;
    let mut current = set.clone();
    let mut out = Word::empty();
    for &a in w {
        let next = dfa.image_letter(&current, a);
        if !next.is_empty() {
            current = next;
            out.push(a);
        }
    }
    Ok(out)
}
