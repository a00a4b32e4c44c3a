//! Set partitions of `{0, .., n-1}` via restricted growth strings.

use alloc::vec;
use alloc::vec::Vec;

/// A set partition; blocks are sorted internally and ordered by their minimum.
pub type Partition = Vec<Vec<usize>>;

/// Iterator over all set partitions of `{0, .., n-1}`, in restricted-growth-string
/// order. The single-block partition comes first.
pub struct SetPartitions {
    n: usize,
    rgs: Vec<usize>,
    // running maxima: max_prefix[i] = max(rgs[0..i])
    max_prefix: Vec<usize>,
    done: bool,
}

impl SetPartitions {
    pub fn new(n: usize) -> Self {
        Self { n, rgs: vec![0; n], max_prefix: vec![0; n], done: false }
    }

    fn current(&self) -> Partition {
        let blocks = self.rgs.iter().copied().max().map_or(0, |m| m + 1);
        let mut out = vec![Vec::new(); blocks];
        for (i, &b) in self.rgs.iter().enumerate() {
            out[b].push(i);
        }
        out
    }

    fn advance(&mut self) {
        // increment the rightmost position that may still grow
        for i in (1..self.n).rev() {
            if self.rgs[i] <= self.max_prefix[i] {
                self.rgs[i] += 1;
                for j in i + 1..self.n {
                    self.rgs[j] = 0;
                    self.max_prefix[j] = self.max_prefix[j - 1].max(self.rgs[j - 1]);
                }
                return;
            }
        }
        self.done = true;
    }
}

impl Iterator for SetPartitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        if self.done {
            return None;
        }
        let out = self.current();
        if self.n <= 1 {
            self.done = true;
        } else {
            self.advance();
        }
        Some(out)
    }
}

/// All set partitions of `{0, .., n-1}`.
pub fn set_partitions(n: usize) -> SetPartitions {
    SetPartitions::new(n)
}

/// Bell numbers `B_0..=B_n` via `B_{n+1} = Σ_i C(n, i) B_i`.
pub fn bell_numbers(n: usize) -> Vec<u128> {
    let mut bell = vec![1u128];
    for m in 0..n {
        let mut binom = 1u128;
        let mut next = 0u128;
        for (i, b) in bell.iter().enumerate().take(m + 1) {
            next += binom * b;
            binom = binom * (m - i) as u128 / (i + 1) as u128;
        }
        bell.push(next);
    }
    bell
}
