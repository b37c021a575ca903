//! The `dfa v1` automaton format and the one-codeword-per-line code format.
//!
//! ```text
//! dfa v1
//! states 3
//! alphabet a b
//! 0 a 1      # src letter dst; omitted pairs are undefined
//! ```

use std::fmt::Write as _;

use crate::automaton::{PartialDfa, GAMMA};
use crate::error::{Error, Result};

/// Controls whether the reserved `@g` token may appear in an alphabet.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ParseOptions {
    pub allow_reserved: bool,
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

/// Parses a `dfa v1` document, rejecting the reserved token `@g`.
pub fn parse_dfa(text: &str) -> Result<PartialDfa> {
    parse_dfa_with(text, ParseOptions::default())
}

pub fn parse_dfa_with(text: &str, opts: ParseOptions) -> Result<PartialDfa> {
    // (line number, content) of non-blank lines after comment removal
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, strip_comment(l).trim()))
        .filter(|(_, l)| !l.is_empty());

    let (ln, header) = lines.next().ok_or_else(|| parse_err(1, "empty document, expected `dfa v1`"))?;
    if header.split_whitespace().collect::<Vec<_>>() != ["dfa", "v1"] {
        return Err(parse_err(ln, format!("expected header `dfa v1`, found `{header}`")));
    }

    let (ln, states_line) = lines.next().ok_or_else(|| parse_err(ln + 1, "missing `states <n>` line"))?;
    let n = match states_line.split_whitespace().collect::<Vec<_>>()[..] {
        ["states", count] => count
            .parse::<usize>()
            .map_err(|_| parse_err(ln, format!("invalid state count `{count}`")))?,
        _ => return Err(parse_err(ln, format!("expected `states <n>`, found `{states_line}`"))),
    };
    if n == 0 {
        return Err(parse_err(ln, "state count must be at least 1"));
    }

    let (ln, alpha_line) = lines.next().ok_or_else(|| parse_err(ln + 1, "missing `alphabet ...` line"))?;
    let mut toks = alpha_line.split_whitespace();
    if toks.next() != Some("alphabet") {
        return Err(parse_err(ln, format!("expected `alphabet <tokens>`, found `{alpha_line}`")));
    }
    let alphabet: Vec<String> = toks.map(str::to_string).collect();
    if alphabet.is_empty() {
        return Err(parse_err(ln, "alphabet must not be empty"));
    }
    for (i, tok) in alphabet.iter().enumerate() {
        if alphabet[..i].contains(tok) {
            return Err(parse_err(ln, format!("duplicate letter `{tok}`")));
        }
        if tok == GAMMA && !opts.allow_reserved {
            return Err(parse_err(ln, format!("letter `{GAMMA}` is reserved")));
        }
    }

    let mut dfa = PartialDfa::new(n, alphabet).map_err(|e| parse_err(ln, e.to_string()))?;
    let mut seen = vec![false; n * dfa.num_letters()];
    for (ln, line) in lines {
        let parts: Vec<&str> = line.split_whitespace().collect();
        let [src, tok, dst] = parts[..] else {
            return Err(parse_err(ln, format!("expected `<src> <letter> <dst>`, found `{line}`")));
        };
        let parse_state = |s: &str| -> Result<usize> {
            let q = s.parse::<usize>().map_err(|_| parse_err(ln, format!("invalid state `{s}`")))?;
            if q >= n {
                return Err(parse_err(ln, format!("state {q} out of range (states {n})")));
            }
            Ok(q)
        };
        let src = parse_state(src)?;
        let dst = parse_state(dst)?;
        let a = dfa
            .letter_index(tok)
            .ok_or_else(|| parse_err(ln, format!("unknown letter `{tok}`")))?;
        let slot = src * dfa.num_letters() + a;
        if seen[slot] {
            return Err(parse_err(ln, format!("duplicate transition for ({src}, {tok})")));
        }
        seen[slot] = true;
        dfa.set(src, a, Some(dst))?;
    }
    Ok(dfa)
}

/// Serializes in `dfa v1`, one line per defined transition in (state, letter) order.
pub fn write_dfa(dfa: &PartialDfa) -> String {
    write_dfa_with_comments(dfa, &[])
}

/// Like [`write_dfa`], with `#` comment lines placed after the header.
pub fn write_dfa_with_comments(dfa: &PartialDfa, comments: &[String]) -> String {
    let mut out = String::from("dfa v1\n");
    for c in comments {
        let _ = writeln!(out, "# {c}");
    }
    let _ = writeln!(out, "states {}", dfa.num_states());
    let _ = writeln!(out, "alphabet {}", dfa.alphabet().join(" "));
    for q in 0..dfa.num_states() {
        for a in 0..dfa.num_letters() {
            if let Some(t) = dfa.step(q, a) {
                let _ = writeln!(out, "{q} {} {t}", dfa.alphabet()[a]);
            }
        }
    }
    out
}

/// Reads a code file: one codeword per line, `#` comments, blank lines ignored.
/// Returns the codewords as strings; validation happens in [`crate::codes`].
pub fn parse_code_lines(text: &str) -> Result<Vec<String>> {
    let mut words = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        if line.chars().any(char::is_whitespace) {
            return Err(parse_err(i + 1, format!("codeword `{line}` contains whitespace")));
        }
        words.push(line.to_string());
    }
    Ok(words)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_state_loop() {
        let dfa = parse_dfa("dfa v1\nstates 1\nalphabet a\n0 a 0\n").unwrap();
        assert_eq!(dfa.num_states(), 1);
        assert_eq!(dfa.step(0, 0), Some(0));
        assert!(dfa.is_complete());
    }

    #[test]
    fn out_of_range_state_names_line() {
        let err = parse_dfa("dfa v1\nstates 3\nalphabet a\n0 a 1\n0 a 5\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 5, .. }), "{err}");
    }

    #[test]
    fn duplicate_transition_rejected() {
        let err = parse_dfa("dfa v1\nstates 2\nalphabet a\n0 a 1\n0 a 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 5, .. }), "{err}");
    }

    #[test]
    fn unknown_letter_and_bad_header() {
        let err = parse_dfa("dfa v1\nstates 2\nalphabet a\n0 b 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 4, .. }));
        let err = parse_dfa("dfa v2\nstates 2\nalphabet a\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        let err = parse_dfa("dfa v1\nstates x\nalphabet a\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = parse_dfa("dfa v1\nstates 2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
    }

    #[test]
    fn reserved_token() {
        let doc = "dfa v1\nstates 1\nalphabet a @g\n0 @g 0\n";
        assert!(parse_dfa(doc).is_err());
        let dfa = parse_dfa_with(doc, ParseOptions { allow_reserved: true }).unwrap();
        assert_eq!(dfa.step(0, 1), Some(0));
        assert_eq!(dfa.step(0, 0), None);
    }

    #[test]
    fn comments_and_roundtrip() {
        let doc = "# leading comment\ndfa v1 # trailing\nstates 2\nalphabet x yy\n\n0 x 1\n1 yy 0 # back\n";
        let dfa = parse_dfa(doc).unwrap();
        assert_eq!(dfa.step(0, 1), None);
        assert_eq!(parse_dfa(&write_dfa(&dfa)).unwrap(), dfa);
    }

    #[test]
    fn code_lines() {
        let words = parse_code_lines("# code\nab\n\nba # second\n").unwrap();
        assert_eq!(words, vec!["ab", "ba"]);
    }
}
