//! A small, fully specified pseudo-random generator so that seeded outputs
//! are identical on every platform and in any reimplementation.
//!
//! The state advances as `s ← s·6364136223846793005 + 1442695040888963407
//! (mod 2^64)` (Knuth's MMIX constants); each draw returns the high 32 bits
//! of the new state.

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lcg64 {
    state: u64,
}

const MULTIPLIER: u64 = 6364136223846793005;
const INCREMENT: u64 = 1442695040888963407;

impl Lcg64 {
    pub fn new(seed: u64) -> Self {
        Lcg64 { state: seed }
    }

    pub fn next_u32(&mut self) -> u32 {
        self.state = self.state.wrapping_mul(MULTIPLIER).wrapping_add(INCREMENT);
        (self.state >> 32) as u32
    }

    /// Uniform-ish integer in `0..n` by multiply-high; `n` must be at most 2^32.
    pub fn below(&mut self, n: usize) -> usize {
        assert!(n > 0 && n as u64 <= 1 << 32, "range must be in 1..=2^32");
        ((self.next_u32() as u64 * n as u64) >> 32) as usize
    }

    /// A draw in `[0, 1)` with 32 bits of resolution.
    pub fn unit(&mut self) -> f64 {
        self.next_u32() as f64 / 4294967296.0
    }
}
