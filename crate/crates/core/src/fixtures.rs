//! Reference automata and codes shipped with the crate.

use crate::automaton::PartialDfa;
use crate::format::{parse_code_lines, parse_dfa};

pub const SAMPLE6_DFA: &str = include_str!("../fixtures/sample6.dfa");
pub const SAMPLE_CODE: &str = include_str!("../fixtures/sample.code");

/// The 6-state binary partial automaton with unique shortest reset word `b a b`.
pub fn sample6() -> PartialDfa {
    parse_dfa(SAMPLE6_DFA).expect("bundled fixture parses")
}

/// Codewords `abaaa, abaab, abab, abba`.
pub fn sample_code_words() -> Vec<String> {
    parse_code_lines(SAMPLE_CODE).expect("bundled fixture parses")
}
