//! Pairwise (tree) summation.
//!
//! Leaves are blocks of [`BLOCK`] terms summed left to right; blocks are then
//! combined as a balanced binary tree. The rounding error grows like
//! `O(log n)` ulps instead of `O(n)` for a plain fold. The streaming
//! [`PairwiseAccumulator`] produces the same leaf structure so a running total
//! can be read at any prefix without storing the terms.

use std::ops::Add;

use num_traits::Zero;

/// Number of terms summed sequentially at each tree leaf.
pub const BLOCK: usize = 256;

/// Sums a slice with pairwise reduction.
pub fn pairwise_sum<T>(xs: &[T]) -> T
where
    T: Copy + Zero + Add<Output = T>,
{
    if xs.len() <= BLOCK {
        return xs.iter().fold(T::zero(), |acc, &x| acc + x);
    }
    // split on a block boundary so the tree matches the streaming accumulator
    let blocks = xs.len().div_ceil(BLOCK);
    let half = blocks.next_power_of_two() / 2 * BLOCK;
    let (l, r) = xs.split_at(half.min(xs.len()));
    pairwise_sum(l) + pairwise_sum(r)
}

/// Pairwise sum of `f(0), …, f(n-1)` without materializing the terms.
pub fn pairwise_sum_by<T, F>(n: usize, mut f: F) -> T
where
    T: Copy + Zero + Add<Output = T>,
    F: FnMut(usize) -> T,
{
    let mut acc = PairwiseAccumulator::new();
    for k in 0..n {
        acc.push(f(k));
    }
    acc.total()
}

/// Streaming pairwise summation.
///
/// Completed blocks are merged like a binary counter: a stack holds partial
/// sums of `2^level` blocks. Memory is `O(log n)`.
#[derive(Debug, Clone)]
pub struct PairwiseAccumulator<T> {
    block: T,
    block_len: usize,
    // (level, partial sum over 2^level blocks), levels strictly decreasing
    stack: Vec<(u32, T)>,
    count: usize,
}

impl<T> Default for PairwiseAccumulator<T>
where
    T: Copy + Zero + Add<Output = T>,
{
    fn default() -> Self {
        Self::new()
    }
}

impl<T> PairwiseAccumulator<T>
where
    T: Copy + Zero + Add<Output = T>,
{
    pub fn new() -> Self {
        Self {
            block: T::zero(),
            block_len: 0,
            stack: Vec::new(),
            count: 0,
        }
    }

    #[inline]
    pub fn push(&mut self, x: T) {
        self.block = self.block + x;
        self.block_len += 1;
        self.count += 1;
        if self.block_len == BLOCK {
            let mut carry = (0u32, self.block);
            while let Some(&(level, partial)) = self.stack.last() {
                if level != carry.0 {
                    break;
                }
                self.stack.pop();
                carry = (level + 1, partial + carry.1);
            }
            self.stack.push(carry);
            self.block = T::zero();
            self.block_len = 0;
        }
    }

    /// Number of terms pushed so far.
    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    /// Sum of all terms pushed so far. Does not disturb the accumulator.
    pub fn total(&self) -> T {
        // fold from the smallest partial upwards
        let mut acc = self.block;
        for &(_, partial) in self.stack.iter().rev() {
            acc = partial + acc;
        }
        acc
    }
}
