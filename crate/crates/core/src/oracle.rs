//! Exact thresholds by breadth-first search over the subset lattice.
//!
//! Subsets are `u32` bitmasks, so the oracle is limited to
//! [`MAX_ORACLE_STATES`] states. Letters are tried in alphabet order, which
//! makes every witness the lexicographically least among the shortest words.

use std::collections::{HashMap, VecDeque};

use crate::automaton::{PartialDfa, Word};
use crate::constructions::duplicating;
use crate::error::{precondition, Error, Result};
use crate::rng::Lcg64;

pub const MAX_ORACLE_STATES: usize = 24;

/// Shortest word reaching a subset of one particular size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankEntry {
    pub len: usize,
    pub word: Word,
}

/// Shortest words of every exact rank `0..=n` reachable from `Q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    entries: Vec<Option<RankEntry>>,
}

impl OracleReport {
    pub fn num_states(&self) -> usize {
        self.entries.len() - 1
    }

    /// `rt(A, r)`: length of a shortest word of rank exactly `r`.
    pub fn threshold(&self, r: usize) -> Option<usize> {
        self.entries.get(r)?.as_ref().map(|e| e.len)
    }

    pub fn witness(&self, r: usize) -> Option<&Word> {
        self.entries.get(r)?.as_ref().map(|e| &e.word)
    }

    pub fn reachable(&self, r: usize) -> bool {
        self.threshold(r).is_some()
    }

    pub fn reset_threshold(&self) -> Option<usize> {
        self.threshold(1)
    }

    pub fn mortal_threshold(&self) -> Option<usize> {
        self.threshold(0)
    }

    pub fn min_nonzero_rank(&self) -> Option<usize> {
        (1..self.entries.len()).find(|&r| self.reachable(r))
    }

    /// `(rank, entry)` for every reachable rank, ascending.
    pub fn entries(&self) -> impl Iterator<Item = (usize, &RankEntry)> {
        self.entries.iter().enumerate().filter_map(|(r, e)| e.as_ref().map(|e| (r, e)))
    }
}

/// Per-letter successor masks: `succ[a][q]` is `1 << δ(q,a)` or 0.
fn successor_masks(dfa: &PartialDfa) -> Vec<Vec<u32>> {
    (0..dfa.num_letters())
        .map(|a| {
            (0..dfa.num_states())
                .map(|q| dfa.step(q, a).map_or(0, |t| 1u32 << t))
                .collect()
        })
        .collect()
}

fn apply(succ: &[u32], mut mask: u32) -> u32 {
    let mut out = 0;
    while mask != 0 {
        let q = mask.trailing_zeros() as usize;
        out |= succ[q];
        mask &= mask - 1;
    }
    out
}

/// Parent pointers keyed by subset; dense below 2^20 subsets.
enum Parents {
    Dense(Vec<u64>),
    Sparse(HashMap<u32, u64>),
}

const NONE: u64 = u64::MAX;

impl Parents {
    fn new(n: usize) -> Self {
        if n <= 20 {
            Parents::Dense(vec![NONE; 1 << n])
        } else {
            Parents::Sparse(HashMap::new())
        }
    }

    fn get(&self, mask: u32) -> Option<u64> {
        match self {
            Parents::Dense(v) => Some(v[mask as usize]).filter(|&p| p != NONE),
            Parents::Sparse(m) => m.get(&mask).copied(),
        }
    }

    fn insert(&mut self, mask: u32, parent: u64) {
        match self {
            Parents::Dense(v) => v[mask as usize] = parent,
            Parents::Sparse(m) => {
                m.insert(mask, parent);
            }
        }
    }
}

/// Breadth-first search from `Q`; the first subset of size `r` reached fixes `rt(A, r)`.
pub fn subset_bfs(dfa: &PartialDfa) -> Result<OracleReport> {
    let n = dfa.num_states();
    if n > MAX_ORACLE_STATES {
        return Err(Error::TooLarge { what: format!("oracle on {n} states"), limit: MAX_ORACLE_STATES });
    }
    let succ = successor_masks(dfa);
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    // parent encoding: (previous mask << 8) | letter; the start points to itself
    let mut parents = Parents::new(n);
    parents.insert(full, (full as u64) << 8);
    let mut found: Vec<Option<u32>> = vec![None; n + 1];
    let mut missing = n + 1;
    let mut queue = VecDeque::from([full]);
    while let Some(mask) = queue.pop_front() {
        let size = mask.count_ones() as usize;
        if found[size].is_none() {
            found[size] = Some(mask);
            missing -= 1;
            if missing == 0 {
                break;
            }
        }
        if mask == 0 {
            continue;
        }
        for (a, row) in succ.iter().enumerate() {
            let next = apply(row, mask);
            if parents.get(next).is_none() {
                parents.insert(next, ((mask as u64) << 8) | a as u64);
                queue.push_back(next);
            }
        }
    }
    let entries = found
        .into_iter()
        .map(|m| {
            m.map(|mut mask| {
                let mut letters = Vec::new();
                while mask != full {
                    let p = parents.get(mask).unwrap();
                    letters.push((p & 0xff) as usize);
                    mask = (p >> 8) as u32;
                }
                letters.reverse();
                RankEntry { len: letters.len(), word: Word::new(letters) }
            })
        })
        .collect();
    Ok(OracleReport { entries })
}

/// One rank of [`duplicating_identity_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DuplicatingRow {
    pub rank: usize,
    pub base: usize,
    pub duplicated: Option<usize>,
    /// The interleaving `γa₁γa₂…γa_k` of the base witness has rank `r` in `A^D`.
    pub interleaved_ok: bool,
}

impl DuplicatingRow {
    pub fn holds(&self) -> bool {
        self.duplicated == Some(2 * self.base) && self.interleaved_ok
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DuplicatingReport {
    pub rows: Vec<DuplicatingRow>,
}

impl DuplicatingReport {
    pub fn holds(&self) -> bool {
        self.rows.iter().all(DuplicatingRow::holds)
    }
}

/// Compares `rt(A^D, r)` with `2·rt(A, r)` for every `1 ≤ r < n` reachable in `A`.
pub fn duplicating_identity_check(dfa: &PartialDfa) -> Result<DuplicatingReport> {
    if !dfa.is_complete() {
        return Err(Error::NotComplete);
    }
    if !dfa.is_strongly_connected() {
        return Err(Error::NotStronglyConnected);
    }
    let dup = duplicating(dfa)?;
    let gamma = dup.num_letters() - 1;
    let base = subset_bfs(dfa)?;
    let doubled = subset_bfs(&dup)?;
    let n = dfa.num_states();
    let rows = (1..n)
        .filter_map(|r| {
            let t = base.threshold(r)?;
            let interleaved: Word = base.witness(r).unwrap().iter().flat_map(|&a| [gamma, a]).collect();
            Some(DuplicatingRow {
                rank: r,
                base: t,
                duplicated: doubled.threshold(r),
                interleaved_ok: dup.rank(&interleaved) == r,
            })
        })
        .collect();
    Ok(DuplicatingReport { rows })
}

/// Search strategy for [`extremal_search`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchProfile {
    Exhaustive,
    Random { seed: u64, trials: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtremalReport {
    pub n: usize,
    /// `(n² − n) / 2`.
    pub target: usize,
    pub examined: u64,
    /// Strongly connected synchronizing candidates.
    pub synchronizing: u64,
    pub best_rt: Option<usize>,
    pub best: Option<PartialDfa>,
}

impl ExtremalReport {
    pub fn attained(&self) -> bool {
        self.best_rt.is_some_and(|rt| rt >= self.target)
    }
}

pub const MAX_EXHAUSTIVE_STATES: usize = 6;

/// Binary automaton with state 0 the only state having an undefined letter:
/// `trans[2q + a]` is the target of letter `a`, and `missing` is the letter
/// undefined at state 0.
struct Candidate<'a> {
    n: usize,
    trans: &'a [u8],
    missing: usize,
}

impl Candidate<'_> {
    fn target(&self, q: usize, a: usize) -> Option<usize> {
        (q != 0 || a != self.missing).then(|| self.trans[2 * q + a] as usize)
    }

    fn strongly_connected(&self) -> bool {
        let reach = |forward: bool| {
            let mut seen = 1u32;
            let mut stack = vec![0usize];
            while let Some(q) = stack.pop() {
                for p in 0..self.n {
                    for a in 0..2 {
                        let (s, t) = if forward { (q, p) } else { (p, q) };
                        if seen >> p & 1 == 0 && self.target(s, a) == Some(t) {
                            seen |= 1 << p;
                            stack.push(p);
                        }
                    }
                }
            }
            seen.count_ones() as usize == self.n
        };
        reach(true) && reach(false)
    }

    /// Reset threshold by a bounded subset BFS.
    fn reset_threshold(&self, dist: &mut [u16]) -> Option<usize> {
        let full = (1u32 << self.n) - 1;
        dist.iter_mut().for_each(|d| *d = u16::MAX);
        let succ: [Vec<u32>; 2] = std::array::from_fn(|a| {
            (0..self.n).map(|q| self.target(q, a).map_or(0, |t| 1u32 << t)).collect()
        });
        let mut queue = VecDeque::from([full]);
        dist[full as usize] = 0;
        while let Some(mask) = queue.pop_front() {
            let d = dist[mask as usize];
            if mask.count_ones() == 1 {
                return Some(d as usize);
            }
            for row in &succ {
                let next = apply(row, mask);
                if next != 0 && dist[next as usize] == u16::MAX {
                    dist[next as usize] = d + 1;
                    queue.push_back(next);
                }
            }
        }
        None
    }

    fn to_dfa(&self) -> PartialDfa {
        let rows: Vec<Vec<Option<usize>>> =
            (0..self.n).map(|q| (0..2).map(|a| self.target(q, a)).collect()).collect();
        PartialDfa::from_rows(&["a", "b"], &rows).expect("candidate rows are valid")
    }
}

/// Searches binary strongly connected automata whose only deficient state is
/// state 0 for the largest reset threshold.
pub fn extremal_search(n: usize, profile: SearchProfile) -> Result<ExtremalReport> {
    if n == 0 {
        return Err(precondition("n must be at least 1"));
    }
    let limit = match profile {
        SearchProfile::Exhaustive => MAX_EXHAUSTIVE_STATES,
        SearchProfile::Random { .. } => 16,
    };
    if n > limit {
        return Err(Error::TooLarge { what: format!("extremal search on {n} states"), limit });
    }
    let mut report = ExtremalReport {
        n,
        target: (n * n - n) / 2,
        examined: 0,
        synchronizing: 0,
        best_rt: None,
        best: None,
    };
    let mut dist = vec![0u16; 1 << n];
    let mut best_trans: Option<(Vec<u8>, usize)> = None;
    let mut consider = |trans: &[u8], missing: usize, report: &mut ExtremalReport| {
        report.examined += 1;
        let cand = Candidate { n, trans, missing };
        // with one state the missing letter is undefined everywhere
        if n < 2 || !cand.strongly_connected() {
            return;
        }
        if let Some(rt) = cand.reset_threshold(&mut dist) {
            report.synchronizing += 1;
            if report.best_rt.is_none_or(|b| rt > b) {
                report.best_rt = Some(rt);
                best_trans = Some((trans.to_vec(), missing));
            }
        }
    };
    let mut trans = vec![0u8; 2 * n];
    match profile {
        SearchProfile::Exhaustive => {
            for missing in 0..2 {
                // odometer over all 2n entries; the missing entry stays 0
                let free: Vec<usize> = (0..2 * n).filter(|&i| i != missing).collect();
                trans.iter_mut().for_each(|t| *t = 0);
                loop {
                    consider(&trans, missing, &mut report);
                    let mut pos = 0;
                    loop {
                        if pos == free.len() {
                            break;
                        }
                        let i = free[pos];
                        trans[i] += 1;
                        if (trans[i] as usize) < n {
                            break;
                        }
                        trans[i] = 0;
                        pos += 1;
                    }
                    if pos == free.len() {
                        break;
                    }
                }
            }
        }
        SearchProfile::Random { seed, trials } => {
            let mut rng = Lcg64::new(seed);
            for _ in 0..trials {
                let missing = rng.below(2);
                for t in trans.iter_mut() {
                    *t = rng.below(n) as u8;
                }
                trans[missing] = 0;
                consider(&trans, missing, &mut report);
            }
        }
    }
    if let Some((trans, missing)) = best_trans {
        let dfa = Candidate { n, trans: &trans, missing }.to_dfa();
        if subset_bfs(&dfa)?.reset_threshold() != report.best_rt {
            return Err(Error::Internal("extremal candidate disagrees with the oracle".into()));
        }
        report.best = Some(dfa);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::generators::gen_cerny;

    #[test]
    fn sample_reset_threshold() {
        let dfa = fixtures::sample6();
        let report = subset_bfs(&dfa).unwrap();
        assert_eq!(report.reset_threshold(), Some(3));
        assert_eq!(dfa.render_word(report.witness(1).unwrap()), "b a b");
        assert_eq!(report.threshold(6), Some(0));
        for (r, e) in report.entries() {
            assert_eq!(dfa.rank(&e.word), r);
        }
    }

    #[test]
    fn cerny_thresholds() {
        for n in 1..=7 {
            let report = subset_bfs(&gen_cerny(n).unwrap()).unwrap();
            assert_eq!(report.reset_threshold(), Some((n - 1) * (n - 1)));
            assert_eq!(report.mortal_threshold(), None);
        }
    }

    #[test]
    fn mortal_words() {
        let dfa = PartialDfa::from_rows(&["a", "b"], &[vec![Some(1), None], vec![Some(0), Some(0)]]).unwrap();
        let report = subset_bfs(&dfa).unwrap();
        let w = report.witness(0).unwrap();
        assert!(dfa.is_mortal(w));
        assert_eq!(dfa.render_word(w), "b b");
        assert_eq!(report.min_nonzero_rank(), Some(1));
    }

    #[test]
    fn too_large() {
        let rows = vec![vec![Some(0)]; 25];
        let dfa = PartialDfa::from_rows(&["a"], &rows).unwrap();
        assert!(matches!(subset_bfs(&dfa), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn duplicating_cerny4() {
        let report = duplicating_identity_check(&gen_cerny(4).unwrap()).unwrap();
        assert!(report.holds(), "{report:?}");
        let r1 = report.rows.iter().find(|r| r.rank == 1).unwrap();
        assert_eq!((r1.base, r1.duplicated), (9, Some(18)));
        let one = PartialDfa::from_rows(&["a"], &[vec![Some(0)]]).unwrap();
        assert!(duplicating_identity_check(&one).unwrap().rows.is_empty());
        assert!(duplicating_identity_check(&fixtures::sample6()).is_err());
    }

    #[test]
    fn extremal_small() {
        for (n, target) in [(2, 1), (3, 3)] {
            let report = extremal_search(n, SearchProfile::Exhaustive).unwrap();
            assert_eq!(report.target, target);
            assert!(report.attained(), "{report:?}");
            let best = report.best.unwrap();
            assert!(best.is_strongly_connected());
            assert!(best.is_properly_incomplete());
        }
        assert_eq!(extremal_search(1, SearchProfile::Exhaustive).unwrap().best_rt, None);
    }

    #[test]
    fn extremal_random_is_deterministic() {
        let a = extremal_search(4, SearchProfile::Random { seed: 7, trials: 500 }).unwrap();
        let b = extremal_search(4, SearchProfile::Random { seed: 7, trials: 500 }).unwrap();
        assert_eq!(a, b);
    }
}
