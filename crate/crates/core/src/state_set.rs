use std::fmt;

use fixedbitset::FixedBitSet;

use crate::automaton::State;

/// A subset of the states `0..n` of one automaton.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct StateSet {
    bits: FixedBitSet,
}

impl StateSet {
    pub fn empty(n: usize) -> Self {
        StateSet { bits: FixedBitSet::with_capacity(n) }
    }

    pub fn full(n: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(n);
        bits.insert_range(..);
        StateSet { bits }
    }

    /// Panics if a state is outside `0..n`.
    pub fn from_states<I: IntoIterator<Item = State>>(n: usize, states: I) -> Self {
        let mut set = StateSet::empty(n);
        for q in states {
            set.insert(q);
        }
        set
    }

    pub fn singleton(n: usize, q: State) -> Self {
        StateSet::from_states(n, [q])
    }

    /// Size of the universe the set lives in.
    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    pub fn contains(&self, q: State) -> bool {
        self.bits.contains(q)
    }

    pub fn insert(&mut self, q: State) {
        assert!(q < self.bits.len(), "state {q} outside universe of {} states", self.bits.len());
        self.bits.insert(q);
    }

    pub fn remove(&mut self, q: State) {
        if q < self.bits.len() {
            self.bits.set(q, false);
        }
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    /// Members in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = State> + '_ {
        self.bits.ones()
    }

    pub fn first(&self) -> Option<State> {
        self.bits.minimum()
    }

    pub fn is_subset(&self, other: &StateSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn is_disjoint(&self, other: &StateSet) -> bool {
        self.bits.is_disjoint(&other.bits)
    }

    pub fn intersection(&self, other: &StateSet) -> StateSet {
        let mut bits = self.bits.clone();
        bits.intersect_with(&other.bits);
        StateSet { bits }
    }

    pub fn union(&self, other: &StateSet) -> StateSet {
        let mut bits = self.bits.clone();
        bits.union_with(&other.bits);
        StateSet { bits }
    }

    pub fn difference(&self, other: &StateSet) -> StateSet {
        let mut bits = self.bits.clone();
        bits.difference_with(&other.bits);
        StateSet { bits }
    }

    pub fn to_vec(&self) -> Vec<State> {
        self.iter().collect()
    }
}

impl fmt::Debug for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, q) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{q}")?;
        }
        write!(f, "}}")
    }
}
