use std::collections::VecDeque;

use super::{alphabet_with_gamma, fixing};
use crate::automaton::{Letter, PartialDfa, Word};
use crate::equivalence::{quotient, Classes};
use crate::error::{precondition, Error, Result};

/// A spanning in-tree of the quotient automaton directed toward `root_class`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollectingTree {
    pub root_class: usize,
    /// `parent[c] = Some((a, c'))` when the quotient maps class `c` to `c'` by `a`.
    pub parent: Vec<Option<(Letter, usize)>>,
}

impl CollectingTree {
    pub fn num_classes(&self) -> usize {
        self.parent.len()
    }

    /// Edges `(class, letter, parent class)` in class order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, Letter, usize)> + '_ {
        self.parent
            .iter()
            .enumerate()
            .filter_map(|(c, e)| e.map(|(a, p)| (c, a, p)))
    }

    /// Checks the tree shape against `dfa` and its classes.
    pub fn validate(&self, dfa: &PartialDfa, classes: &Classes) -> Result<()> {
        let k = classes.len();
        if self.parent.len() != k || self.root_class >= k {
            return Err(precondition("tree does not match the number of classes"));
        }
        if self.parent[self.root_class].is_some() {
            return Err(precondition("the root class has an outgoing edge"));
        }
        for (c, a, p) in self.edges() {
            let rep = classes.members(c).first().unwrap();
            if dfa.step(rep, a).map(|t| classes.class_of(t)) != Some(p) {
                return Err(precondition(format!("edge ({c}, {a}, {p}) is not a quotient transition")));
            }
        }
        for c in 0..k {
            let mut cur = c;
            let mut hops = 0;
            while let Some((_, p)) = self.parent[cur] {
                cur = p;
                hops += 1;
                if hops > k {
                    return Err(precondition("tree edges contain a cycle"));
                }
            }
            if cur != self.root_class {
                return Err(precondition(format!("class {c} does not reach the root")));
            }
        }
        Ok(())
    }
}

/// Breadth-first collecting tree rooted at `root_class`, built on the reversed
/// quotient graph with ties broken by letter order, then class order.
pub fn collecting_tree(dfa: &PartialDfa, classes: &Classes, root_class: usize) -> Result<CollectingTree> {
    if root_class >= classes.len() {
        return Err(precondition(format!("root class {root_class} out of range")));
    }
    if !dfa.is_strongly_connected() {
        return Err(Error::NotStronglyConnected);
    }
    let (quot, _) = quotient(dfa, classes)?;
    let k = quot.num_states();
    let mut parent = vec![None; k];
    let mut seen = vec![false; k];
    seen[root_class] = true;
    // incoming[t] lists (letter, class) pairs entering t, in (letter, class) order
    let mut incoming: Vec<Vec<(Letter, usize)>> = vec![Vec::new(); k];
    for a in 0..quot.num_letters() {
        for c in 0..k {
            if let Some(t) = quot.step(c, a) {
                incoming[t].push((a, c));
            }
        }
    }
    let mut queue = VecDeque::from([root_class]);
    while let Some(target) = queue.pop_front() {
        for &(a, c) in &incoming[target] {
            if !seen[c] {
                seen[c] = true;
                parent[c] = Some((a, target));
                queue.push_back(c);
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::Internal("quotient of a strongly connected automaton is not strongly connected".into()));
    }
    Ok(CollectingTree { root_class, parent })
}

/// The complete collecting automaton over `Σ ∪ {@g}`.
///
/// On `Σ` it is the fixing automaton; the extra letter (last index) follows
/// the tree edge of the state's class and is the identity on the root class.
pub fn collecting(dfa: &PartialDfa, classes: &Classes, tree: &CollectingTree) -> Result<PartialDfa> {
    tree.validate(dfa, classes)?;
    let alphabet = alphabet_with_gamma(dfa)?;
    let gamma = alphabet.len() - 1;
    let fixed = fixing(dfa);
    let mut out = PartialDfa::new(dfa.num_states(), alphabet)?;
    for q in 0..dfa.num_states() {
        for a in 0..dfa.num_letters() {
            out.set(q, a, fixed.step(q, a))?;
        }
        let target = match tree.parent[classes.class_of(q)] {
            None => Some(q),
            Some((a, _)) => dfa.step(q, a),
        };
        debug_assert!(target.is_some());
        out.set(q, gamma, target)?;
    }
    Ok(out)
}

/// Rewrites a word over `Σ ∪ {@g}` that synchronizes the root class in the
/// collecting automaton into a word over `Σ`, not longer, that synchronizes
/// the root class in `dfa`.
///
/// The image of the root class always stays inside a single class. Scanning
/// left to right, `@g` becomes the tree letter of that class or is dropped on
/// the root class, and a letter of `Σ` undefined on the class is dropped
/// because the collecting automaton fixes those states.
pub fn strip_gamma(dfa: &PartialDfa, classes: &Classes, tree: &CollectingTree, w: &[Letter]) -> Result<Word> {
    let coll = collecting(dfa, classes, tree)?;
    coll.check_word(w)?;
    let gamma = dfa.num_letters();
    let root = classes.members(tree.root_class);
    if coll.image(root, w).len() != 1 {
        return Err(precondition("the word does not synchronize the root class of the collecting automaton"));
    }
    let mut out = Word::empty();
    let mut class = tree.root_class;
    for &x in w {
        let rep = classes.members(class).first().unwrap();
        let a = if x == gamma {
            match tree.parent[class] {
                Some((a, _)) => a,
                None => continue,
            }
        } else {
            x
        };
        if let Some(t) = dfa.step(rep, a) {
            out.push(a);
            class = classes.class_of(t);
        }
    }
    if dfa.image(root, &out).len() != 1 {
        return Err(Error::Internal("stripped word does not synchronize the root class".into()));
    }
    Ok(out)
}
