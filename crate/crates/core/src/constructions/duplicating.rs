use super::alphabet_with_gamma;
use crate::automaton::PartialDfa;
use crate::error::{Error, Result};

/// The `2n`-state duplicating automaton of a complete automaton.
///
/// States `0..n` are the originals, `n..2n` their copies; the extra letter
/// (last index) moves `q` to its copy `q'` and is undefined on copies, every
/// other letter fixes originals and acts on a copy `q'` as on `q`.
pub fn duplicating(dfa: &PartialDfa) -> Result<PartialDfa> {
    if !dfa.is_complete() {
        return Err(Error::NotComplete);
    }
    let n = dfa.num_states();
    let alphabet = alphabet_with_gamma(dfa)?;
    let gamma = alphabet.len() - 1;
    let mut out = PartialDfa::new(2 * n, alphabet)?;
    for q in 0..n {
        for a in 0..dfa.num_letters() {
            out.set(q, a, Some(q))?;
            out.set(n + q, a, dfa.step(q, a))?;
        }
        out.set(q, gamma, Some(n + q))?;
        out.set(n + q, gamma, None)?;
    }
    Ok(out)
}
