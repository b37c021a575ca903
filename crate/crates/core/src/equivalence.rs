//! Inseparability equivalence: two states are equivalent when no word is
//! defined on exactly one of them.
//!
//! Classes are computed twice. [`hopcroft_classes`] runs Hopcroft's
//! partition refinement on the automaton completed by a single sink that
//! stands in for "undefined" and is the only accepting state. The level-wise
//! refinement `≡_0 ⊇ ≡_1 ⊇ …` is then replayed to build a split tree that
//! records, for every split, one separating letter per pair of sub-blocks;
//! separating words of minimal length are reconstructed from it on demand.

use std::collections::HashMap;

use crate::automaton::{Letter, PartialDfa, State, Word};
use crate::error::{precondition, Error, Result};
use crate::state_set::StateSet;

/// A partition of the states into classes, numbered by their least member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classes {
    class_of: Vec<usize>,
    members: Vec<StateSet>,
}

impl Classes {
    /// Builds canonical classes from arbitrary block labels.
    pub fn from_labels(labels: &[usize]) -> Self {
        let n = labels.len();
        let mut renumber: HashMap<usize, usize> = HashMap::new();
        let mut class_of = Vec::with_capacity(n);
        let mut members: Vec<StateSet> = Vec::new();
        for (q, &label) in labels.iter().enumerate() {
            let next = renumber.len();
            let c = *renumber.entry(label).or_insert(next);
            if c == members.len() {
                members.push(StateSet::empty(n));
            }
            members[c].insert(q);
            class_of.push(c);
        }
        Classes { class_of, members }
    }

    pub fn class_of(&self, q: State) -> usize {
        self.class_of[q]
    }

    pub fn class_map(&self) -> &[usize] {
        &self.class_of
    }

    pub fn members(&self, c: usize) -> &StateSet {
        &self.members[c]
    }

    pub fn iter(&self) -> impl Iterator<Item = &StateSet> {
        self.members.iter()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn num_states(&self) -> usize {
        self.class_of.len()
    }

    /// κ(S): number of classes meeting `set`.
    pub fn kappa(&self, set: &StateSet) -> usize {
        let mut hit = vec![false; self.members.len()];
        let mut count = 0;
        for q in set.iter() {
            let c = self.class_of[q];
            if !hit[c] {
                hit[c] = true;
                count += 1;
            }
        }
        count
    }
}

/// Inseparability classes by Hopcroft's algorithm, `O(|Σ| n log n)`.
pub fn hopcroft_classes(dfa: &PartialDfa) -> Classes {
    let n = dfa.num_states();
    let k = dfa.num_letters();
    let sink = n;
    let total = n + 1;
    let target = |q: usize, a: Letter| -> usize {
        if q == sink {
            sink
        } else {
            dfa.step(q, a).unwrap_or(sink)
        }
    };

    // inverse[a][t] = sources of t under a
    let mut inverse = vec![vec![Vec::new(); total]; k];
    for q in 0..total {
        for (a, inv) in inverse.iter_mut().enumerate() {
            inv[target(q, a)].push(q);
        }
    }

    // elements of block b occupy elems[first[b]..end[b]]
    let mut elems: Vec<usize> = (0..total).collect();
    elems.swap(0, sink);
    let mut pos = vec![0usize; total];
    for (i, &s) in elems.iter().enumerate() {
        pos[s] = i;
    }
    let mut block_of = vec![1usize; total];
    block_of[sink] = 0;
    let mut first = vec![0usize, 1];
    let mut end = vec![1usize, total];
    let mut marked = vec![0usize; 2];
    let mut in_work: Vec<Vec<bool>> = vec![vec![false; k]; 2];
    let mut work: Vec<(usize, Letter)> = Vec::new();
    for a in 0..k {
        // the sink block is the smaller one
        work.push((0, a));
        in_work[0][a] = true;
    }

    let mut splitter = Vec::new();
    let mut touched = Vec::new();
    while let Some((b, a)) = work.pop() {
        in_work[b][a] = false;
        splitter.clear();
        for &t in &elems[first[b]..end[b]] {
            splitter.extend_from_slice(&inverse[a][t]);
        }
        touched.clear();
        for &s in &splitter {
            let y = block_of[s];
            let slot = first[y] + marked[y];
            let other = elems[slot];
            let ps = pos[s];
            elems.swap(slot, ps);
            pos[other] = ps;
            pos[s] = slot;
            if marked[y] == 0 {
                touched.push(y);
            }
            marked[y] += 1;
        }
        for &y in &touched {
            let m = marked[y];
            marked[y] = 0;
            if m == end[y] - first[y] {
                continue;
            }
            let nb = first.len();
            first.push(first[y]);
            end.push(first[y] + m);
            marked.push(0);
            first[y] += m;
            for &s in &elems[first[nb]..end[nb]] {
                block_of[s] = nb;
            }
            in_work.push(vec![false; k]);
            let small = if end[nb] - first[nb] <= end[y] - first[y] { nb } else { y };
            for c in 0..k {
                if in_work[y][c] {
                    in_work[nb][c] = true;
                    work.push((nb, c));
                } else {
                    in_work[small][c] = true;
                    work.push((small, c));
                }
            }
        }
    }
    Classes::from_labels(&block_of[..n])
}

#[derive(Debug, Clone)]
struct Block {
    parent: Option<usize>,
    depth: usize,
    created_at: usize,
    split_at: Option<usize>,
    children: Vec<usize>,
    // separators[(i, j)] for child positions i < j
    separators: HashMap<(usize, usize), Letter>,
}

/// Inseparability classes together with the refinement history needed to
/// produce shortest separating words.
#[derive(Debug, Clone)]
pub struct Partition {
    classes: Classes,
    blocks: Vec<Block>,
    leaf_of: Vec<usize>,
    levels: usize,
}

/// Computes the inseparability partition of `dfa`.
pub fn inseparability_partition(dfa: &PartialDfa) -> Partition {
    let classes = hopcroft_classes(dfa);
    let partition = refine_by_levels(dfa, classes);
    debug_assert_eq!(
        Classes::from_labels(&partition.leaf_of),
        partition.classes,
        "level refinement disagrees with Hopcroft"
    );
    partition
}

const UNDEF_CLASS: usize = usize::MAX;

fn refine_by_levels(dfa: &PartialDfa, classes: Classes) -> Partition {
    let n = dfa.num_states();
    let k = dfa.num_letters();
    let mut blocks = vec![Block {
        parent: None,
        depth: 0,
        created_at: 0,
        split_at: None,
        children: Vec::new(),
        separators: HashMap::new(),
    }];
    let mut leaf_of = vec![0usize; n];
    let mut levels = 0;
    let mut level = 0;
    loop {
        level += 1;
        // signature of each state w.r.t. the previous level's blocks
        let sig = |q: State| -> Vec<usize> {
            (0..k).map(|a| dfa.step(q, a).map_or(UNDEF_CLASS, |t| leaf_of[t])).collect()
        };
        // groups[b] lists (signature, members) of block b in order of first member
        let mut groups: HashMap<usize, Vec<(Vec<usize>, Vec<State>)>> = HashMap::new();
        let mut index: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
        let mut order: Vec<usize> = Vec::new();
        for q in 0..n {
            let b = leaf_of[q];
            let s = sig(q);
            let entry = groups.entry(b).or_insert_with(|| {
                order.push(b);
                Vec::new()
            });
            match index.get(&(b, s.clone())) {
                Some(&i) => entry[i].1.push(q),
                None => {
                    index.insert((b, s.clone()), entry.len());
                    entry.push((s, vec![q]));
                }
            }
        }
        let mut new_leaf = leaf_of.clone();
        let mut split_any = false;
        for b in order {
            let parts = &groups[&b];
            if parts.len() < 2 {
                continue;
            }
            split_any = true;
            let mut children = Vec::with_capacity(parts.len());
            for (_, members) in parts {
                let id = blocks.len();
                blocks.push(Block {
                    parent: Some(b),
                    depth: blocks[b].depth + 1,
                    created_at: level,
                    split_at: None,
                    children: Vec::new(),
                    separators: HashMap::new(),
                });
                for &q in members {
                    new_leaf[q] = id;
                }
                children.push(id);
            }
            let mut separators = HashMap::new();
            for i in 0..parts.len() {
                for j in i + 1..parts.len() {
                    let a = (0..k)
                        .find(|&a| parts[i].0[a] != parts[j].0[a])
                        .expect("distinct signatures differ in some letter");
                    separators.insert((i, j), a);
                }
            }
            blocks[b].split_at = Some(level);
            blocks[b].children = children;
            blocks[b].separators = separators;
        }
        if !split_any {
            break;
        }
        levels = level;
        leaf_of = new_leaf;
    }
    Partition { classes, blocks, leaf_of, levels }
}

impl Partition {
    pub fn classes(&self) -> &Classes {
        &self.classes
    }

    pub fn class_of(&self, q: State) -> usize {
        self.classes.class_of(q)
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn num_states(&self) -> usize {
        self.classes.num_states()
    }

    pub fn kappa(&self, set: &StateSet) -> usize {
        self.classes.kappa(set)
    }

    /// Number of refinement levels before `≡_k` stabilizes; at most κ(Q)−1.
    pub fn levels(&self) -> usize {
        self.levels
    }

    /// Identifier of the `≡_level` block containing `q`; equal identifiers
    /// mean equivalent at that level.
    pub fn level_block(&self, q: State, level: usize) -> usize {
        let mut b = self.leaf_of[q];
        while self.blocks[b].created_at > level {
            b = self.blocks[b].parent.expect("root is created at level 0");
        }
        b
    }

    fn lca(&self, mut x: usize, mut y: usize) -> usize {
        while self.blocks[x].depth > self.blocks[y].depth {
            x = self.blocks[x].parent.unwrap();
        }
        while self.blocks[y].depth > self.blocks[x].depth {
            y = self.blocks[y].parent.unwrap();
        }
        while x != y {
            x = self.blocks[x].parent.unwrap();
            y = self.blocks[y].parent.unwrap();
        }
        x
    }

    // position, among the children of `ancestor`, of the child containing `q`
    fn child_position(&self, ancestor: usize, q: State) -> usize {
        let mut b = self.leaf_of[q];
        while self.blocks[b].parent != Some(ancestor) {
            b = self.blocks[b].parent.expect("ancestor lies above the leaf");
        }
        self.blocks[ancestor].children.iter().position(|&c| c == b).unwrap()
    }

    /// Least `k` with `p ≢_k q`, or `None` when `p ≡ q`.
    pub fn separation_level(&self, p: State, q: State) -> Option<usize> {
        let l = self.lca(self.leaf_of[p], self.leaf_of[q]);
        if self.leaf_of[p] == self.leaf_of[q] {
            return None;
        }
        self.blocks[l].split_at
    }

    /// A word of length [`Partition::separation_level`] defined on exactly one
    /// of `p`, `q`.
    pub fn separating_word(&self, dfa: &PartialDfa, p: State, q: State) -> Option<Word> {
        self.separation_level(p, q)?;
        let (mut p, mut q) = (p, q);
        let mut word = Word::empty();
        loop {
            let l = self.lca(self.leaf_of[p], self.leaf_of[q]);
            let (i, j) = (self.child_position(l, p), self.child_position(l, q));
            let key = if i < j { (i, j) } else { (j, i) };
            let a = self.blocks[l].separators[&key];
            word.push(a);
            match (dfa.step(p, a), dfa.step(q, a)) {
                (Some(p2), Some(q2)) => {
                    p = p2;
                    q = q2;
                }
                (None, None) => unreachable!("separator letter is undefined on both states"),
                _ => return Some(word),
            }
        }
    }

    /// A word `w` with `1 ≤ κ(δ(S,w)) < κ(S)` and `|w| ≤ κ(Q) − κ(S) + 1`.
    ///
    /// Among pairs of `S` lying in distinct classes, picks the lexicographically
    /// least pair separated at the minimal level and returns its witness.
    pub fn class_reducing_word(&self, dfa: &PartialDfa, set: &StateSet) -> Result<Word> {
        if self.kappa(set) < 2 {
            return Err(precondition("the set meets fewer than two inseparability classes"));
        }
        let mut states = set.iter();
        let p = states.next().unwrap();
        let lca = states.fold(self.leaf_of[p], |acc, q| self.lca(acc, self.leaf_of[q]));
        let p_child = self.child_position(lca, p);
        let q = set
            .iter()
            .find(|&q| self.child_position(lca, q) != p_child)
            .ok_or_else(|| Error::Internal("split node does not separate the set".into()))?;
        self.separating_word(dfa, p, q)
            .ok_or_else(|| Error::Internal(format!("states {p} and {q} reported equivalent")))
    }

    /// A word mapping `set` to a non-empty subset of one class, built by
    /// repeated [`Partition::class_reducing_word`]; length at most
    /// `(κ(S)−1)(κ(Q)−κ(S)/2)`.
    pub fn collapse_to_single_class_word(&self, dfa: &PartialDfa, set: &StateSet) -> Result<Word> {
        if set.is_empty() {
            return Err(precondition("the set must be non-empty"));
        }
        let mut word = Word::empty();
        let mut cur = set.clone();
        while self.kappa(&cur) >= 2 {
            let step = self.class_reducing_word(dfa, &cur)?;
            cur = dfa.image(&cur, &step);
            word.extend_from(&step);
        }
        Ok(word)
    }

    /// Representative (least) state of each class.
    pub fn representatives(&self) -> Vec<State> {
        self.classes.iter().map(|c| c.first().unwrap()).collect()
    }
}

/// The quotient automaton by inseparability, with the state-to-class map.
pub fn quotient(dfa: &PartialDfa, classes: &Classes) -> Result<(PartialDfa, Vec<usize>)> {
    let mut out = PartialDfa::new(classes.len(), dfa.alphabet().to_vec())?;
    for (c, members) in classes.iter().enumerate() {
        for a in 0..dfa.num_letters() {
            let mut target: Option<Option<usize>> = None;
            for p in members.iter() {
                let t = dfa.step(p, a).map(|t| classes.class_of(t));
                match target {
                    None => target = Some(t),
                    Some(prev) if prev != t => {
                        return Err(Error::Internal(format!(
                            "quotient not well defined at class {c}, letter {}",
                            dfa.alphabet()[a]
                        )))
                    }
                    _ => {}
                }
            }
            out.set(c, a, target.flatten())?;
        }
    }
    Ok((out, classes.class_map().to_vec()))
}
