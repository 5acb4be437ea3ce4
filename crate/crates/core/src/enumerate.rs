//! Exhaustive enumeration of labelled echeloned spaces on `m` points.
//!
//! A labelled space is an ordered set partition of the `C(m, 2)` pairs: the
//! blocks are the rank classes, listed from rank 1 upward. Partitions are
//! produced in restricted-growth-string order and, for each, the block orders
//! in lexicographic permutation order.

use std::collections::HashSet;

use thiserror::Error;

use crate::canon::canonical_form;
use crate::space::{pair_count, EchelonedSpace, Rank};

/// Largest `m` accepted by [`enumerate_spaces`].
pub const MAX_EXHAUSTIVE_POINTS: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerateError {
    #[error("enumeration needs at least one point")]
    Empty,
    #[error("exhaustive enumeration is capped at {cap} points, asked for {asked}")]
    CapExceeded { asked: usize, cap: usize },
}

impl EnumerateError {
    pub fn code(&self) -> &'static str {
        match self {
            EnumerateError::Empty => "E_EMPTY",
            EnumerateError::CapExceeded { .. } => "E_CAP",
        }
    }
}

/// Every labelled space on `m` points, optionally keeping only the first
/// member of each isomorphism class.
pub fn enumerate_spaces(m: usize, up_to_iso: bool) -> Result<Box<dyn Iterator<Item = EchelonedSpace>>, EnumerateError> {
    if m == 0 {
        return Err(EnumerateError::Empty);
    }
    if m > MAX_EXHAUSTIVE_POINTS {
        return Err(EnumerateError::CapExceeded { asked: m, cap: MAX_EXHAUSTIVE_POINTS });
    }
    let all = LabelledSpaces::new(m);
    if !up_to_iso {
        return Ok(Box::new(all));
    }
    let mut seen = HashSet::new();
    Ok(Box::new(all.filter(move |x| seen.insert(canonical_form(x).space))))
}

/// Iterator over ordered set partitions of the pairs of `m` points.
pub struct LabelledSpaces {
    points: usize,
    rgs: Vec<usize>,
    blocks: usize,
    order: Vec<usize>,
    done: bool,
}

impl LabelledSpaces {
    pub fn new(points: usize) -> Self {
        let k = pair_count(points);
        let blocks = usize::from(k > 0);
        LabelledSpaces { points, rgs: vec![0; k], blocks, order: (0..blocks).collect(), done: false }
    }

    fn advance(&mut self) {
        if next_permutation(&mut self.order) {
            return;
        }
        if !next_rgs(&mut self.rgs) {
            self.done = true;
            return;
        }
        self.blocks = self.rgs.iter().max().map_or(0, |&b| b + 1);
        self.order = (0..self.blocks).collect();
    }
}

impl Iterator for LabelledSpaces {
    type Item = EchelonedSpace;

    fn next(&mut self) -> Option<EchelonedSpace> {
        if self.done {
            return None;
        }
        let eta = self.rgs.iter().map(|&b| self.order[b] as Rank + 1).collect();
        let space = EchelonedSpace::from_parts_unchecked(self.points, self.blocks as Rank, eta);
        self.advance();
        Some(space)
    }
}

/// Next restricted growth string in lexicographic order.
fn next_rgs(a: &mut [usize]) -> bool {
    let mut prefix_max = vec![0; a.len()];
    for i in 1..a.len() {
        prefix_max[i] = prefix_max[i - 1].max(a[i - 1]);
    }
    for i in (1..a.len()).rev() {
        if a[i] <= prefix_max[i] {
            a[i] += 1;
            a[i + 1..].iter_mut().for_each(|x| *x = 0);
            return true;
        }
    }
    false
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("pivot has a successor");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Ordered Bell (Fubini) number: ordered set partitions of `k` elements.
pub fn fubini(k: usize) -> u128 {
    let mut a = vec![1u128; k + 1];
    for n in 1..=k {
        let mut binom = 1u128;
        let mut total = 0u128;
        for i in 1..=n {
            binom = binom * (n - i + 1) as u128 / i as u128;
            total += binom * a[n - i];
        }
        a[n] = total;
    }
    a[k]
}
