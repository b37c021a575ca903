//! Fixture families: Černý automata, the one-word codes `a^k b a^{k+1} b`,
//! and seeded random partial automata and prefix codes.

use crate::automaton::{PartialDfa, Word};
use crate::codes::PrefixCode;
use crate::error::{Error, Result};
use crate::rng::Lcg64;

/// Attempts made by the random generators before giving up.
pub const MAX_RETRIES: usize = 10_000;

/// Letters `a`, `b`, ... for alphabets of up to 26 letters.
pub fn letters(alpha: usize) -> Result<Vec<String>> {
    if alpha == 0 || alpha > 26 {
        return Err(Error::Generator(format!("alphabet size {alpha} outside 1..=26")));
    }
    Ok((b'a'..b'a' + alpha as u8).map(|c| (c as char).to_string()).collect())
}

/// `a` cycles `i → i+1 mod n`; `b` maps 0 to 1 and fixes every other state.
pub fn gen_cerny(n: usize) -> Result<PartialDfa> {
    if n == 0 {
        return Err(Error::Generator("the Černý automaton needs n ≥ 1".into()));
    }
    let rows: Vec<Vec<Option<usize>>> = (0..n)
        .map(|q| vec![Some((q + 1) % n), Some(if q == 0 { 1 % n } else { q })])
        .collect();
    PartialDfa::from_rows(&["a", "b"], &rows)
}

/// The one-word code `{a^k b a^{k+1} b}`.
pub fn gen_oneword_code(k: usize) -> Result<PrefixCode> {
    if k == 0 {
        return Err(Error::Generator("the one-word family needs k ≥ 1".into()));
    }
    let word = format!("{}b{}b", "a".repeat(k), "a".repeat(k + 1));
    PrefixCode::with_alphabet(vec!['a', 'b'], &[word.as_str()])
}

/// Each transition is defined with probability `density` and then uniform;
/// redrawn until strongly connected.
pub fn gen_random_partial(n: usize, alpha: usize, density: f64, seed: u64) -> Result<PartialDfa> {
    if n == 0 {
        return Err(Error::Generator("n must be at least 1".into()));
    }
    if !(density > 0.0 && density <= 1.0) {
        return Err(Error::Generator(format!("density {density} outside (0, 1]")));
    }
    let alphabet = letters(alpha)?;
    let mut rng = Lcg64::new(seed);
    for _ in 0..MAX_RETRIES {
        let mut dfa = PartialDfa::new(n, alphabet.clone())?;
        for q in 0..n {
            for a in 0..alpha {
                if rng.unit() < density {
                    dfa.set(q, a, Some(rng.below(n)))?;
                }
            }
        }
        if dfa.is_strongly_connected() {
            return Ok(dfa);
        }
    }
    Err(Error::Generator(format!(
        "no strongly connected automaton after {MAX_RETRIES} attempts; try a higher density"
    )))
}

/// A random prefix code with exactly `count` words of length at most `maxlen`.
///
/// Starts from one random letter and repeatedly replaces a random codeword
/// `w` shorter than `maxlen` by `wx` and `wy` for two distinct random letters;
/// finally every codeword is extended by a random suffix, which keeps the set
/// prefix-free.
pub fn gen_random_prefix_code(count: usize, maxlen: usize, alpha: usize, seed: u64) -> Result<PrefixCode> {
    if count == 0 || maxlen == 0 {
        return Err(Error::Generator("count and maxlen must be at least 1".into()));
    }
    if alpha == 1 && count > 1 {
        return Err(Error::Generator("over one letter a prefix code has a single word".into()));
    }
    let alphabet = letters(alpha)?;
    let mut rng = Lcg64::new(seed);
    let mut words: Vec<Word> = vec![Word::new(vec![rng.below(alpha)])];
    while words.len() < count {
        let open: Vec<usize> = (0..words.len()).filter(|&i| words[i].len() < maxlen).collect();
        if open.is_empty() {
            return Err(Error::Generator(format!(
                "no room for {count} codewords of length at most {maxlen}; increase maxlen"
            )));
        }
        let w = words.swap_remove(open[rng.below(open.len())]);
        let x = rng.below(alpha);
        let y = (x + 1 + rng.below(alpha - 1)) % alpha;
        words.push(w.concat(&[x.min(y)]));
        words.push(w.concat(&[x.max(y)]));
    }
    for w in words.iter_mut() {
        let extra = rng.below(maxlen - w.len() + 1);
        for _ in 0..extra {
            w.push(rng.below(alpha));
        }
    }
    words.sort();
    PrefixCode::new(alphabet, words)
}

/// A generator family with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum GenSpec {
    Cerny { n: usize },
    OneWord { k: usize },
    RandomDfa { n: usize, alpha: usize, density: f64, seed: u64 },
    RandomCode { count: usize, maxlen: usize, alpha: usize, seed: u64 },
}

/// Output of [`GenSpec::generate`].
#[derive(Debug, Clone)]
pub enum Generated {
    Dfa(PartialDfa),
    Code(PrefixCode),
}

impl GenSpec {
    pub fn generate(&self) -> Result<Generated> {
        Ok(match *self {
            GenSpec::Cerny { n } => Generated::Dfa(gen_cerny(n)?),
            GenSpec::OneWord { k } => Generated::Code(gen_oneword_code(k)?),
            GenSpec::RandomDfa { n, alpha, density, seed } => {
                Generated::Dfa(gen_random_partial(n, alpha, density, seed)?)
            }
            GenSpec::RandomCode { count, maxlen, alpha, seed } => {
                Generated::Code(gen_random_prefix_code(count, maxlen, alpha, seed)?)
            }
        })
    }
}
