//! Brute-force references shared by the integration tests. Nothing here
//! calls the library's search code; only the automaton accessors are used.

#![allow(dead_code)]

use std::collections::{HashMap, VecDeque};

use partial_sync::{PartialDfa, Word};

/// Shortest (then lexicographically least) word of every exact rank, by BFS
/// over explicit state vectors.
pub fn naive_rank_words(dfa: &PartialDfa) -> Vec<Option<Word>> {
    let n = dfa.num_states();
    let start: Vec<usize> = (0..n).collect();
    let mut seen: HashMap<Vec<usize>, Word> = HashMap::new();
    seen.insert(start.clone(), Word::empty());
    let mut best: Vec<Option<Word>> = vec![None; n + 1];
    let mut queue = VecDeque::from([start]);
    while let Some(set) = queue.pop_front() {
        let word = seen[&set].clone();
        if best[set.len()].is_none() {
            best[set.len()] = Some(word.clone());
        }
        for a in 0..dfa.num_letters() {
            let mut next: Vec<usize> = set.iter().filter_map(|&q| dfa.step(q, a)).collect();
            next.sort_unstable();
            next.dedup();
            if !seen.contains_key(&next) {
                seen.insert(next.clone(), word.concat(&[a]));
                queue.push_back(next);
            }
        }
    }
    best
}

pub fn naive_thresholds(dfa: &PartialDfa) -> Vec<Option<usize>> {
    naive_rank_words(dfa).into_iter().map(|w| w.map(|w| w.len())).collect()
}

pub fn naive_min_nonzero_rank(dfa: &PartialDfa) -> Option<usize> {
    naive_thresholds(dfa).iter().enumerate().skip(1).find(|(_, t)| t.is_some()).map(|(r, _)| r)
}

/// `p` and `q` are separable when some word is defined on exactly one of them.
pub fn naive_separable(dfa: &PartialDfa, p: usize, q: usize) -> bool {
    let mut seen = std::collections::HashSet::new();
    let mut stack = vec![(p, q)];
    while let Some((x, y)) = stack.pop() {
        if !seen.insert((x, y)) {
            continue;
        }
        for a in 0..dfa.num_letters() {
            match (dfa.step(x, a), dfa.step(y, a)) {
                (Some(s), Some(t)) => stack.push((s, t)),
                (None, None) => {}
                _ => return true,
            }
        }
    }
    false
}

/// Classes as sorted vectors of states, ordered by least member.
pub fn naive_classes(dfa: &PartialDfa) -> Vec<Vec<usize>> {
    let n = dfa.num_states();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for q in 0..n {
        match classes.iter_mut().find(|c| !naive_separable(dfa, c[0], q)) {
            Some(c) => c.push(q),
            None => classes.push(vec![q]),
        }
    }
    classes
}

pub fn naive_kappa(classes: &[Vec<usize>], set: &[usize]) -> usize {
    classes.iter().filter(|c| c.iter().any(|q| set.contains(q))).count()
}

/// Image of a set by direct letter-by-letter evaluation.
pub fn naive_image(dfa: &PartialDfa, set: &[usize], w: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = set
        .iter()
        .filter_map(|&q| w.iter().try_fold(q, |s, &a| dfa.step(s, a)))
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Smallest `L` with `2^L ≥ x`, for `x ≥ 1`.
pub fn log2_ceil(x: usize) -> usize {
    let mut l = 0;
    while (1usize << l) < x {
        l += 1;
    }
    l
}
