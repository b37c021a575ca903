//! Synchronizability and minimum-rank words for strongly connected partial DFAs.
//!
//! A pair `{p, q}` is compressed by a word `w` when `|δ({p,q}, w)| = 1`:
//! either both states meet, or exactly one of them dies. [`pair_table`]
//! finds shortest compressing words for all pairs with one backward BFS over
//! the pair graph, and greedy compression from `Q` then reaches the minimal
//! non-zero rank.

use std::collections::VecDeque;

use crate::automaton::{Letter, PartialDfa, State, Word};
use crate::constructions::{collecting, collecting_tree, fixing, lift_word_to_partial, CollectingTree};
use crate::equivalence::{hopcroft_classes, inseparability_partition, quotient, Classes};
use crate::error::{precondition, Error, Result};
use crate::oracle::subset_bfs;
use crate::state_set::StateSet;

const INF: u32 = u32::MAX;

/// Distances to compression for every unordered pair of distinct states.
#[derive(Debug, Clone)]
pub struct PairTable {
    n: usize,
    dist: Vec<u32>,
    letter: Vec<u32>,
}

impl PairTable {
    fn index(&self, p: State, q: State) -> usize {
        let (p, q) = if p < q { (p, q) } else { (q, p) };
        p * self.n - p * (p + 1) / 2 + (q - p - 1)
    }

    pub fn num_states(&self) -> usize {
        self.n
    }

    /// Length of a shortest compressing word, `None` when the pair is incompressible.
    pub fn distance(&self, p: State, q: State) -> Option<usize> {
        assert_ne!(p, q, "pairs consist of distinct states");
        let d = self.dist[self.index(p, q)];
        (d != INF).then_some(d as usize)
    }

    /// First letter of the alphabet-least shortest compressing word.
    pub fn first_letter(&self, p: State, q: State) -> Option<Letter> {
        self.distance(p, q).map(|_| self.letter[self.index(p, q)] as Letter)
    }

    /// The alphabet-least shortest compressing word of `{p, q}`.
    pub fn compressing_word(&self, dfa: &PartialDfa, p: State, q: State) -> Option<Word> {
        self.distance(p, q)?;
        let (mut p, mut q) = (p, q);
        let mut w = Word::empty();
        loop {
            let a = self.first_letter(p, q).unwrap();
            w.push(a);
            match (dfa.step(p, a), dfa.step(q, a)) {
                (Some(x), Some(y)) if x != y => (p, q) = (x, y),
                _ => return Some(w),
            }
        }
    }

    /// Least incompressible pair in lexicographic order.
    pub fn first_incompressible(&self) -> Option<(State, State)> {
        (0..self.n)
            .flat_map(|p| (p + 1..self.n).map(move |q| (p, q)))
            .find(|&(p, q)| self.dist[self.index(p, q)] == INF)
    }

    pub fn all_compressible(&self) -> bool {
        self.dist.iter().all(|&d| d != INF)
    }
}

fn compresses(dfa: &PartialDfa, p: State, q: State, a: Letter) -> bool {
    match (dfa.step(p, a), dfa.step(q, a)) {
        (Some(x), Some(y)) => x == y,
        (None, None) => false,
        _ => true,
    }
}

/// Backward BFS from the pairs compressed by a single letter.
pub fn pair_table(dfa: &PartialDfa) -> PairTable {
    let n = dfa.num_states();
    let k = dfa.num_letters();
    let pairs = n * n.saturating_sub(1) / 2;
    let mut table = PairTable { n, dist: vec![INF; pairs], letter: vec![0; pairs] };
    let mut inverse: Vec<Vec<Vec<State>>> = vec![vec![Vec::new(); n]; k];
    for q in 0..n {
        for a in 0..k {
            if let Some(t) = dfa.step(q, a) {
                inverse[a][t].push(q);
            }
        }
    }
    let mut queue = VecDeque::new();
    for p in 0..n {
        for q in p + 1..n {
            if (0..k).any(|a| compresses(dfa, p, q, a)) {
                let i = table.index(p, q);
                table.dist[i] = 1;
                queue.push_back((p, q));
            }
        }
    }
    while let Some((x, y)) = queue.pop_front() {
        let d = table.dist[table.index(x, y)];
        for a in 0..k {
            for &p in &inverse[a][x] {
                for &q in &inverse[a][y] {
                    if p == q {
                        continue;
                    }
                    let i = table.index(p, q);
                    if table.dist[i] == INF {
                        table.dist[i] = d + 1;
                        queue.push_back((p, q));
                    }
                }
            }
        }
    }
    // least letter realizing each distance
    for p in 0..n {
        for q in p + 1..n {
            let i = table.index(p, q);
            let d = table.dist[i];
            if d == INF {
                continue;
            }
            let a = (0..k)
                .find(|&a| {
                    if d == 1 {
                        return compresses(dfa, p, q, a);
                    }
                    match (dfa.step(p, a), dfa.step(q, a)) {
                        (Some(x), Some(y)) if x != y => table.dist[table.index(x, y)] == d - 1,
                        _ => false,
                    }
                })
                .expect("a finite distance has a witness letter");
            table.letter[i] = a as u32;
        }
    }
    table
}

/// One greedy step: the active set size before applying `word`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub size: usize,
    pub word: Word,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyncResult {
    pub word: Word,
    pub final_rank: usize,
    pub trace: Vec<TraceStep>,
}

impl SyncResult {
    /// Replays the trace from `start`, checking sizes, the concatenated word
    /// and the final rank.
    pub fn replay(&self, dfa: &PartialDfa, start: &StateSet) -> bool {
        let mut cur = start.clone();
        let mut word = Word::empty();
        for step in &self.trace {
            if cur.len() != step.size {
                return false;
            }
            cur = dfa.image(&cur, &step.word);
            word.extend_from(&step.word);
        }
        word == self.word && cur.len() == self.final_rank && dfa.image(start, &self.word).len() == self.final_rank
    }
}

fn require_strongly_connected(dfa: &PartialDfa) -> Result<()> {
    if dfa.is_strongly_connected() {
        Ok(())
    } else {
        Err(Error::NotStronglyConnected)
    }
}

/// Minimal-distance compressible pair of `set`, lexicographically least on ties.
fn best_pair(table: &PairTable, set: &StateSet) -> Option<(State, State)> {
    let states = set.to_vec();
    let mut best: Option<(usize, State, State)> = None;
    for (i, &p) in states.iter().enumerate() {
        for &q in &states[i + 1..] {
            if let Some(d) = table.distance(p, q) {
                if best.is_none_or(|(bd, _, _)| d < bd) {
                    best = Some((d, p, q));
                }
            }
        }
    }
    best.map(|(_, p, q)| (p, q))
}

/// Greedy pair compression starting from `set`.
pub fn compress_from(dfa: &PartialDfa, table: &PairTable, set: &StateSet) -> SyncResult {
    let mut cur = set.clone();
    let mut word = Word::empty();
    let mut trace = Vec::new();
    while let Some((p, q)) = best_pair(table, &cur) {
        let w = table.compressing_word(dfa, p, q).unwrap();
        trace.push(TraceStep { size: cur.len(), word: w.clone() });
        cur = dfa.image(&cur, &w);
        word.extend_from(&w);
    }
    SyncResult { word, final_rank: cur.len(), trace }
}

pub fn is_synchronizing(dfa: &PartialDfa) -> Result<bool> {
    require_strongly_connected(dfa)?;
    Ok(pair_table(dfa).all_compressible())
}

/// Greedy minimum-rank word from `Q`; a reset word when the final rank is 1.
pub fn greedy_min_rank(dfa: &PartialDfa) -> Result<SyncResult> {
    require_strongly_connected(dfa)?;
    let table = pair_table(dfa);
    Ok(compress_from(dfa, &table, &dfa.all_states()))
}

/// Minimum-rank word through the fixing automaton: greedy on the fixing
/// automaton, lifted back, then class-reducing steps while the image meets
/// two classes, then pair compression inside the last class.
pub fn min_rank_word_via_fixing(dfa: &PartialDfa) -> Result<SyncResult> {
    require_strongly_connected(dfa)?;
    let fixed = fixing(dfa);
    let full = dfa.all_states();
    let on_fixing = compress_from(&fixed, &pair_table(&fixed), &full);
    let lifted = lift_word_to_partial(dfa, &full, &on_fixing.word)?;
    let partition = inseparability_partition(dfa);
    let table = pair_table(dfa);
    let mut trace = vec![TraceStep { size: full.len(), word: lifted.clone() }];
    let mut cur = dfa.image(&full, &lifted);
    let mut word = lifted;
    loop {
        let step = if partition.kappa(&cur) >= 2 {
            partition.class_reducing_word(dfa, &cur)?
        } else if let Some((p, q)) = best_pair(&table, &cur) {
            table.compressing_word(dfa, p, q).unwrap()
        } else {
            break;
        };
        trace.push(TraceStep { size: cur.len(), word: step.clone() });
        cur = dfa.image(&cur, &step);
        word.extend_from(&step);
    }
    if cur.is_empty() {
        return Err(Error::Internal("rank reduction produced a mortal word".into()));
    }
    Ok(SyncResult { word, final_rank: cur.len(), trace })
}

/// The complete automaton equisynchronizable with `dfa`.
#[derive(Debug, Clone)]
pub struct Reduction {
    pub automaton: PartialDfa,
    pub tree: CollectingTree,
    pub classes: Classes,
}

/// Collecting automaton for the breadth-first tree rooted at the smallest
/// inseparability class (least state on ties).
pub fn reduction_to_complete(dfa: &PartialDfa) -> Result<Reduction> {
    require_strongly_connected(dfa)?;
    let classes = hopcroft_classes(dfa);
    // classes are numbered by least member, so the first minimum is the tie-break
    let root = (0..classes.len()).min_by_key(|&c| classes.members(c).len()).unwrap();
    let tree = collecting_tree(dfa, &classes, root)?;
    let automaton = collecting(dfa, &classes, &tree)?;
    Ok(Reduction { automaton, tree, classes })
}

/// Parts of the reset word `v·u·w` built through the collecting automaton.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollectingResetWord {
    pub v: Word,
    pub u: Word,
    pub w: Word,
    pub word: Word,
}

pub fn reset_word_via_collecting(dfa: &PartialDfa) -> Result<CollectingResetWord> {
    require_strongly_connected(dfa)?;
    let table = pair_table(dfa);
    if let Some((p, q)) = table.first_incompressible() {
        return Err(Error::NotSynchronizing { p, q });
    }
    let partition = inseparability_partition(dfa);
    let classes = partition.classes().clone();
    let full = dfa.all_states();
    let v = partition.collapse_to_single_class_word(dfa, &full)?;
    let landed = dfa.image(&full, &v);
    let p_class = classes.class_of(landed.first().ok_or_else(|| Error::Internal("collapse word is mortal".into()))?);

    let root = (0..classes.len()).min_by_key(|&c| classes.members(c).len()).unwrap();
    let tree = collecting_tree(dfa, &classes, root)?;
    let coll = collecting(dfa, &classes, &tree)?;
    let (quot, _) = quotient(dfa, &classes)?;
    let u = quot.connecting_word(p_class, root)?;

    let coll_reset = compress_from(&coll, &pair_table(&coll), &coll.all_states());
    if coll_reset.final_rank != 1 {
        return Err(Error::Internal("collecting automaton of a synchronizing automaton is not synchronizing".into()));
    }
    let w = crate::constructions::strip_gamma(dfa, &classes, &tree, &coll_reset.word)?;
    let word = v.concat(&u).concat(&w);
    if dfa.rank(&word) != 1 {
        return Err(Error::Internal("v·u·w is not a reset word".into()));
    }
    Ok(CollectingResetWord { v, u, w, word })
}

/// How [`rank_target_word`] searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankMode {
    /// Truncate the greedy trace at the first prefix of rank at most `r`.
    Greedy,
    /// Shortest word of non-zero rank at most `r`, by subset BFS.
    Oracle,
}

pub fn rank_target_word(dfa: &PartialDfa, r: usize, mode: RankMode) -> Result<Word> {
    require_strongly_connected(dfa)?;
    let n = dfa.num_states();
    if r == 0 || r > n {
        return Err(precondition(format!("target rank must lie in 1..={n}")));
    }
    if r == n {
        return Ok(Word::empty());
    }
    match mode {
        RankMode::Greedy => {
            let res = greedy_min_rank(dfa)?;
            if res.final_rank > r {
                return Err(Error::RankUnreachable { target: r, min_rank: res.final_rank });
            }
            let mut cur = dfa.all_states();
            let mut word = Word::empty();
            for step in &res.trace {
                if cur.len() <= r {
                    break;
                }
                cur = dfa.image(&cur, &step.word);
                word.extend_from(&step.word);
            }
            Ok(word)
        }
        RankMode::Oracle => {
            let report = subset_bfs(dfa)?;
            (1..=r)
                .filter_map(|k| report.witness(k).map(|w| (w.len(), k, w)))
                .min_by_key(|&(len, k, _)| (len, k))
                .map(|(_, _, w)| w.clone())
                .ok_or_else(|| Error::RankUnreachable {
                    target: r,
                    min_rank: report.min_nonzero_rank().unwrap_or(0),
                })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::generators::gen_cerny;

    #[test]
    fn sample_pairs() {
        let dfa = fixtures::sample6();
        let table = pair_table(&dfa);
        assert!(table.all_compressible());
        // b is undefined on both q3 and q6, so that pair needs a longer word
        assert!(!compresses(&dfa, 2, 5, 1));
        assert!(table.distance(2, 5).unwrap() >= 2);
        for p in 0..6 {
            for q in p + 1..6 {
                let w = table.compressing_word(&dfa, p, q).unwrap();
                assert_eq!(w.len(), table.distance(p, q).unwrap());
                assert_eq!(dfa.image(&StateSet::from_states(6, [p, q]), &w).len(), 1);
            }
        }
    }

    #[test]
    fn complete_pairs_merge() {
        let dfa = gen_cerny(4).unwrap();
        let table = pair_table(&dfa);
        assert!(table.all_compressible());
        for p in 0..4 {
            for q in p + 1..4 {
                if table.distance(p, q) == Some(1) {
                    let a = table.first_letter(p, q).unwrap();
                    assert_eq!(dfa.step(p, a), dfa.step(q, a));
                }
            }
        }
    }

    #[test]
    fn sample_greedy_reset() {
        let dfa = fixtures::sample6();
        let res = greedy_min_rank(&dfa).unwrap();
        assert_eq!(res.final_rank, 1);
        assert!(res.word.len() >= 3);
        assert!(res.replay(&dfa, &dfa.all_states()));
        let sizes: Vec<usize> = res.trace.iter().map(|s| s.size).collect();
        assert!(sizes.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn one_state_is_synchronizing() {
        let dfa = PartialDfa::from_rows(&["a"], &[vec![Some(0)]]).unwrap();
        assert!(is_synchronizing(&dfa).unwrap());
        assert_eq!(greedy_min_rank(&dfa).unwrap().word, Word::empty());
    }

    #[test]
    fn aa_literal_is_not_synchronizing() {
        // literal automaton of {aa}: root -a-> a -a-> root
        let dfa = PartialDfa::from_rows(&["a"], &[vec![Some(1)], vec![Some(0)]]).unwrap();
        assert!(!is_synchronizing(&dfa).unwrap());
        assert_eq!(greedy_min_rank(&dfa).unwrap().final_rank, 2);
        assert_eq!(min_rank_word_via_fixing(&dfa).unwrap().final_rank, 2);
        assert!(matches!(reset_word_via_collecting(&dfa), Err(Error::NotSynchronizing { p: 0, q: 1 })));
    }

    #[test]
    fn rejects_non_strongly_connected() {
        let dfa = PartialDfa::from_rows(&["a"], &[vec![Some(1)], vec![None]]).unwrap();
        assert_eq!(is_synchronizing(&dfa), Err(Error::NotStronglyConnected));
        assert!(greedy_min_rank(&dfa).is_err());
        assert!(reduction_to_complete(&dfa).is_err());
    }

    #[test]
    fn sample_pipelines() {
        let dfa = fixtures::sample6();
        let via = min_rank_word_via_fixing(&dfa).unwrap();
        assert_eq!(via.final_rank, 1);
        assert!(via.replay(&dfa, &dfa.all_states()));
        let red = reduction_to_complete(&dfa).unwrap();
        assert!(red.automaton.is_complete());
        assert_eq!(red.automaton.alphabet(), ["a", "b", "@g"]);
        assert!(is_synchronizing(&red.automaton).unwrap());
        let parts = reset_word_via_collecting(&dfa).unwrap();
        assert_eq!(dfa.rank(&parts.word), 1);
        assert_eq!(parts.word.len(), parts.v.len() + parts.u.len() + parts.w.len());
    }

    #[test]
    fn complete_input_collecting_parts() {
        let dfa = gen_cerny(5).unwrap();
        let parts = reset_word_via_collecting(&dfa).unwrap();
        assert!(parts.v.is_empty());
        assert!(parts.u.is_empty());
        assert_eq!(dfa.rank(&parts.w), 1);
    }

    #[test]
    fn rank_targets() {
        let dfa = fixtures::sample6();
        assert_eq!(rank_target_word(&dfa, 6, RankMode::Greedy).unwrap(), Word::empty());
        let w = rank_target_word(&dfa, 1, RankMode::Greedy).unwrap();
        assert_eq!(dfa.rank(&w), 1);
        let w = rank_target_word(&dfa, 1, RankMode::Oracle).unwrap();
        assert_eq!(dfa.render_word(&w), "b a b");
        assert!(rank_target_word(&dfa, 0, RankMode::Greedy).is_err());
        let two = PartialDfa::from_rows(&["a"], &[vec![Some(1)], vec![Some(0)]]).unwrap();
        assert_eq!(
            rank_target_word(&two, 1, RankMode::Greedy),
            Err(Error::RankUnreachable { target: 1, min_rank: 2 })
        );
    }
}
