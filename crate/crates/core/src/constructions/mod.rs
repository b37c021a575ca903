//! Automaton transformations: fixing, collecting, induced and duplicating.

mod collecting;
mod duplicating;
mod fixing;
mod induced;

pub use collecting::{collecting, collecting_tree, strip_gamma, CollectingTree};
pub use duplicating::duplicating;
pub use fixing::{fixing, lift_word_to_partial};
pub use induced::{induced, InducedAutomaton};

use crate::automaton::{PartialDfa, GAMMA};
use crate::error::{Error, Result};

/// Alphabet of `dfa` extended by the reserved letter, which gets the last index.
pub(crate) fn alphabet_with_gamma(dfa: &PartialDfa) -> Result<Vec<String>> {
    if dfa.letter_index(GAMMA).is_some() {
        return Err(Error::InvalidAutomaton(format!("alphabet already contains `{GAMMA}`")));
    }
    let mut alphabet = dfa.alphabet().to_vec();
    alphabet.push(GAMMA.to_string());
    Ok(alphabet)
}
