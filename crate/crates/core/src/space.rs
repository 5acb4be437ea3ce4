//! Finite echeloned spaces stored as rank tables.
//!
//! A space on `m` points is kept as its quotient map onto the echeloning: every
//! unordered pair of distinct points carries a rank in `1..=n`, the diagonal is
//! rank 0 (the bottom class), and every rank in `1..=n` is attained. Comparing
//! two pairs is comparing their ranks.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

use crate::metrize::Metric;

pub type PointId = usize;
pub type Rank = u32;

/// Index of the unordered pair `{i, j}` (`i != j`) in lower-triangular
/// row-major order: (1,0), (2,0), (2,1), (3,0), …
#[inline]
pub fn pair_index(i: PointId, j: PointId) -> usize {
    let (hi, lo) = if i > j { (i, j) } else { (j, i) };
    hi * (hi - 1) / 2 + lo
}

#[inline]
pub fn pair_count(m: usize) -> usize {
    m * m.saturating_sub(1) / 2
}

/// Inverse of [`pair_index`].
pub fn pair_at(index: usize) -> (PointId, PointId) {
    // Largest hi with hi(hi-1)/2 <= index, corrected for rounding.
    let mut hi = (1 + 8 * index).isqrt().div_ceil(2);
    while hi * (hi - 1) / 2 > index {
        hi -= 1;
    }
    while (hi + 1) * hi / 2 <= index {
        hi += 1;
    }
    (hi, index - hi * (hi - 1) / 2)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpaceError {
    #[error("an echeloned space needs at least one point")]
    Empty,
    #[error("expected {expected} pair ranks for {points} points, got {got}")]
    PairCount { points: usize, expected: usize, got: usize },
    #[error("pair {{{0}, {1}}} has rank 0 but its points are distinct")]
    ZeroOffDiagonal(PointId, PointId),
    #[error("pair {{{0}, {1}}} has rank {2}, above the declared maximum {3}")]
    RankOutOfRange(PointId, PointId, Rank, Rank),
    #[error("rank {0} is never attained (ranks must be dense)")]
    RankGap(Rank),
    #[error("weight of pair {{{0}, {1}}} is missing")]
    MissingWeight(PointId, PointId),
    #[error("weights of pairs {0:?} and {1:?} are not comparable")]
    Incomparable((PointId, PointId), (PointId, PointId)),
    #[error("point {0} is out of range for a space on {1} points")]
    PointOutOfRange(PointId, usize),
    #[error("point {0} occurs twice in the subset")]
    DuplicatePoint(PointId),
    #[error("subset must be nonempty")]
    EmptySubset,
}

impl SpaceError {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            SpaceError::Empty => "E_EMPTY",
            SpaceError::PairCount { .. } => "E_PAIR_COUNT",
            SpaceError::ZeroOffDiagonal(..) => "E_ZERO_OFF_DIAGONAL",
            SpaceError::RankOutOfRange(..) => "E_RANK_RANGE",
            SpaceError::RankGap(_) => "E_RANK_GAP",
            SpaceError::MissingWeight(..) => "E_MISSING_WEIGHT",
            SpaceError::Incomparable(..) => "E_INCOMPARABLE",
            SpaceError::PointOutOfRange(..) => "E_POINT_RANGE",
            SpaceError::DuplicatePoint(_) => "E_DUPLICATE_POINT",
            SpaceError::EmptySubset => "E_EMPTY_SUBSET",
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EchelonedSpace {
    points: usize,
    ranks: Rank,
    eta: Vec<Rank>,
}

impl EchelonedSpace {
    /// Builds a space from lower-triangular pair ranks, checking every
    /// invariant (positivity off the diagonal, range, density).
    pub fn new(points: usize, ranks: Rank, eta: Vec<Rank>) -> Result<Self, SpaceError> {
        let space = EchelonedSpace { points, ranks, eta };
        space.validate()?;
        Ok(space)
    }

    pub(crate) fn from_parts_unchecked(points: usize, ranks: Rank, eta: Vec<Rank>) -> Self {
        let space = EchelonedSpace { points, ranks, eta };
        debug_assert_eq!(space.validate(), Ok(()));
        space
    }

    /// The one-point space.
    pub fn point() -> Self {
        EchelonedSpace { points: 1, ranks: 0, eta: Vec::new() }
    }

    /// Every pair of distinct points in one class.
    pub fn uniform(points: usize) -> Self {
        assert!(points >= 1);
        let ranks = if points >= 2 { 1 } else { 0 };
        EchelonedSpace { points, ranks, eta: vec![1; pair_count(points)] }
    }

    pub fn validate(&self) -> Result<(), SpaceError> {
        if self.points == 0 {
            return Err(SpaceError::Empty);
        }
        let expected = pair_count(self.points);
        if self.eta.len() != expected {
            return Err(SpaceError::PairCount { points: self.points, expected, got: self.eta.len() });
        }
        let mut seen = vec![false; self.ranks as usize + 1];
        let pairs = (0..self.points).flat_map(|i| (0..i).map(move |j| (i, j)));
        for (&r, (i, j)) in self.eta.iter().zip(pairs) {
            if r == 0 {
                return Err(SpaceError::ZeroOffDiagonal(i, j));
            }
            if r > self.ranks {
                return Err(SpaceError::RankOutOfRange(i, j, r, self.ranks));
            }
            seen[r as usize] = true;
        }
        if let Some(gap) = (1..=self.ranks).find(|&r| !seen[r as usize]) {
            return Err(SpaceError::RankGap(gap));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.points
    }

    pub fn is_empty(&self) -> bool {
        self.points == 0
    }

    /// Number of nonbottom classes.
    pub fn rank_count(&self) -> Rank {
        self.ranks
    }

    #[inline]
    pub fn rank(&self, x: PointId, y: PointId) -> Rank {
        if x == y {
            0
        } else {
            self.eta[pair_index(x, y)]
        }
    }

    /// `(x1, y1) ≤ (x2, y2)` in the echelon.
    pub fn le(&self, p: (PointId, PointId), q: (PointId, PointId)) -> bool {
        self.rank(p.0, p.1) <= self.rank(q.0, q.1)
    }

    /// Lower-triangular rank table, pair order as in [`pair_index`].
    pub fn pair_ranks(&self) -> &[Rank] {
        &self.eta
    }

    /// Rows `i = 0..m`, each holding `rank(i, j)` for `j < i`.
    pub fn rows(&self) -> Vec<Vec<Rank>> {
        (0..self.points).map(|i| (0..i).map(|j| self.rank(i, j)).collect()).collect()
    }

    /// Compresses arbitrary comparable pair weights into dense ranks.
    ///
    /// `weights` is lower-triangular in [`pair_index`] order; the diagonal is
    /// implicitly below every weight. Equal weights share a class.
    pub fn from_weights<W: PartialOrd>(points: usize, weights: &[W]) -> Result<Self, SpaceError> {
        if points == 0 {
            return Err(SpaceError::Empty);
        }
        let expected = pair_count(points);
        if weights.len() < expected {
            let (i, j) = pair_at(weights.len());
            return Err(SpaceError::MissingWeight(i, j));
        }
        if weights.len() > expected {
            return Err(SpaceError::PairCount { points, expected, got: weights.len() });
        }
        let mut order: Vec<usize> = (0..expected).collect();
        let mut bad = None;
        order.sort_by(|&a, &b| match weights[a].partial_cmp(&weights[b]) {
            Some(o) => o,
            None => {
                bad.get_or_insert((a, b));
                Ordering::Equal
            }
        });
        // Sorting may skip comparisons; self-comparison catches NaN-like weights.
        for &a in &order {
            if weights[a].partial_cmp(&weights[a]).is_none() {
                bad.get_or_insert((a, a));
            }
        }
        if let Some((a, b)) = bad {
            return Err(SpaceError::Incomparable(pair_at(a), pair_at(b)));
        }
        let mut eta = vec![0; expected];
        let mut rank = 0;
        for (pos, &idx) in order.iter().enumerate() {
            if pos == 0 || weights[order[pos - 1]] != weights[idx] {
                rank += 1;
            }
            eta[idx] = rank;
        }
        Ok(EchelonedSpace { points, ranks: rank, eta })
    }

    /// Same as [`from_weights`](Self::from_weights) with a weight function on
    /// pairs `(i, j)`, `j < i`. `None` marks a missing weight.
    pub fn from_weight_fn<W: PartialOrd>(
        points: usize,
        mut w: impl FnMut(PointId, PointId) -> Option<W>,
    ) -> Result<Self, SpaceError> {
        let mut weights = Vec::with_capacity(pair_count(points));
        for i in 0..points {
            for j in 0..i {
                weights.push(w(i, j).ok_or(SpaceError::MissingWeight(i, j))?);
            }
        }
        Self::from_weights(points, &weights)
    }

    /// The echeloned space induced by comparing distances of a metric.
    pub fn from_metric(d: &Metric) -> Self {
        Self::from_weights(d.len(), d.pair_distances()).expect("validated metric is total")
    }

    /// Restriction to `subset` (in the given order), re-compressed, together
    /// with the rank map of the inclusion.
    pub fn induced_subspace(&self, subset: &[PointId]) -> Result<(Self, RankMap), SpaceError> {
        if subset.is_empty() {
            return Err(SpaceError::EmptySubset);
        }
        let mut seen = vec![false; self.points];
        for &p in subset {
            if p >= self.points {
                return Err(SpaceError::PointOutOfRange(p, self.points));
            }
            if std::mem::replace(&mut seen[p], true) {
                return Err(SpaceError::DuplicatePoint(p));
            }
        }
        let sub =
            Self::from_weight_fn(subset.len(), |i, j| Some(self.rank(subset[i], subset[j]))).expect("ranks are total");
        let mut map = vec![0; sub.ranks as usize + 1];
        for i in 0..subset.len() {
            for j in 0..i {
                map[sub.rank(i, j) as usize] = self.rank(subset[i], subset[j]);
            }
        }
        Ok((sub, RankMap(map)))
    }

    /// Relabels points: point `p` of `self` becomes point `perm[p]`.
    pub fn permuted(&self, perm: &[PointId]) -> Self {
        assert_eq!(perm.len(), self.points);
        let mut eta = vec![0; self.eta.len()];
        for i in 0..self.points {
            for j in 0..i {
                eta[pair_index(perm[i], perm[j])] = self.rank(i, j);
            }
        }
        EchelonedSpace { points: self.points, ranks: self.ranks, eta }
    }

    /// Sorted multiset of ranks from `x` to every other point.
    pub fn rank_profile(&self, x: PointId) -> Vec<Rank> {
        let mut v: Vec<Rank> = (0..self.points).filter(|&y| y != x).map(|y| self.rank(x, y)).collect();
        v.sort_unstable();
        v
    }
}

impl fmt::Debug for EchelonedSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EchelonedSpace(m={}, n={}, {:?})", self.points, self.ranks, self.rows())
    }
}

/// A map between echelonings, stored as `map[source_rank] = target_rank`.
/// Always fixes the bottom rank.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RankMap(pub Vec<Rank>);

impl RankMap {
    pub fn identity(ranks: Rank) -> Self {
        RankMap((0..=ranks).collect())
    }

    #[inline]
    pub fn apply(&self, r: Rank) -> Rank {
        self.0[r as usize]
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &RankMap) -> RankMap {
        RankMap(self.0.iter().map(|&r| other.apply(r)).collect())
    }

    pub fn is_order_embedding(&self) -> bool {
        self.0.first() == Some(&0) && self.0.windows(2).all(|w| w[0] < w[1])
    }

    pub fn is_monotone(&self) -> bool {
        self.0.first() == Some(&0) && self.0.windows(2).all(|w| w[0] <= w[1])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn space(points: usize, rows: &[&[Rank]]) -> EchelonedSpace {
        let eta: Vec<Rank> = rows.iter().flat_map(|r| r.iter().copied()).collect();
        let n = eta.iter().copied().max().unwrap_or(0);
        EchelonedSpace::new(points, n, eta).unwrap()
    }

    #[test]
    fn pair_indexing_roundtrip() {
        for idx in (0..100).chain([123_456, 8_398_000]) {
            let (i, j) = pair_at(idx);
            assert!(j < i);
            assert_eq!(pair_index(i, j), idx);
            assert_eq!(pair_index(j, i), idx);
        }
    }

    #[test]
    fn from_weights_lipschitz_fixture() {
        // d(x1,x2)=2, d(x1,x3)=d(x2,x3)=4 with pairs (1,0), (2,0), (2,1).
        let x = EchelonedSpace::from_weights(3, &[2, 4, 4]).unwrap();
        assert_eq!(x.pair_ranks(), &[1, 2, 2]);
        assert_eq!(x.rank_count(), 2);
    }

    #[test]
    fn from_weights_single_class() {
        let x = EchelonedSpace::from_weights(2, &[7]).unwrap();
        assert_eq!(x.pair_ranks(), &[1]);
    }

    #[test]
    fn from_weights_three_values_on_four_points() {
        let w = [5, 1, 9, 5, 1, 9];
        let x = EchelonedSpace::from_weights(4, &w).unwrap();
        assert_eq!(x.rank_count(), 3);
        // Oracle: rank = 1 + number of distinct smaller weights.
        let mut distinct = w.to_vec();
        distinct.sort();
        distinct.dedup();
        for (idx, wt) in w.iter().enumerate() {
            let expect = 1 + distinct.iter().filter(|d| *d < wt).count() as Rank;
            assert_eq!(x.pair_ranks()[idx], expect);
        }
    }

    #[test]
    fn from_weights_errors() {
        assert_eq!(EchelonedSpace::from_weights(3, &[1, 2]), Err(SpaceError::MissingWeight(2, 1)));
        let err = EchelonedSpace::from_weights(3, &[1.0, f64::NAN, 2.0]).unwrap_err();
        assert_eq!(err.code(), "E_INCOMPARABLE");
        assert_eq!(EchelonedSpace::from_weights::<u8>(0, &[]), Err(SpaceError::Empty));
        assert_eq!(EchelonedSpace::from_weights(1, &[int(3)]).unwrap_err().code(), "E_PAIR_COUNT");
    }

    #[test]
    fn validator_rejects_bad_tables() {
        assert_eq!(EchelonedSpace::new(3, 2, vec![1, 0, 2]), Err(SpaceError::ZeroOffDiagonal(2, 0)));
        assert_eq!(EchelonedSpace::new(3, 3, vec![1, 3, 3]), Err(SpaceError::RankGap(2)));
        assert_eq!(EchelonedSpace::new(2, 1, vec![2]), Err(SpaceError::RankOutOfRange(1, 0, 2, 1)));
        assert_eq!(EchelonedSpace::new(0, 0, vec![]), Err(SpaceError::Empty));
        assert!(EchelonedSpace::new(1, 0, vec![]).is_ok());
    }

    #[test]
    fn induced_subspace_compresses() {
        let x = space(3, &[&[], &[1], &[2, 2]]);
        let (sub, inc) = x.induced_subspace(&[0, 2]).unwrap();
        assert_eq!(sub.pair_ranks(), &[1]);
        assert_eq!(inc, RankMap(vec![0, 2]));
        let (all, inc) = x.induced_subspace(&[0, 1, 2]).unwrap();
        assert_eq!(all, x);
        assert_eq!(inc, RankMap::identity(2));
        assert_eq!(x.induced_subspace(&[]), Err(SpaceError::EmptySubset));
        assert_eq!(x.induced_subspace(&[1, 1]), Err(SpaceError::DuplicatePoint(1)));
        assert_eq!(x.induced_subspace(&[3]), Err(SpaceError::PointOutOfRange(3, 3)));
    }

    #[test]
    fn permutation_moves_ranks() {
        let x = space(3, &[&[], &[1], &[2, 3]]);
        let y = x.permuted(&[2, 0, 1]);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(y.rank([2, 0, 1][i], [2, 0, 1][j]), x.rank(i, j));
            }
        }
    }
}
