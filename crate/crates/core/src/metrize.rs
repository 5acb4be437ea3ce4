//! Exact rational metrics, dullness, and the dull realization of a finite
//! echeloned space.

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::rational::{format_rational, int, Rational};
use crate::space::{pair_at, pair_count, pair_index, EchelonedSpace, PointId};

/// The metric axiom a matrix violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axiom {
    Symmetry,
    Diagonal,
    Positivity,
    Triangle,
}

impl Axiom {
    pub fn name(self) -> &'static str {
        match self {
            Axiom::Symmetry => "symmetry",
            Axiom::Diagonal => "diagonal",
            Axiom::Positivity => "positivity",
            Axiom::Triangle => "triangle",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricError {
    #[error("metric needs at least one point")]
    Empty,
    #[error("row {row} has {got} entries, expected {expected}")]
    Shape { row: usize, expected: usize, got: usize },
    #[error("{} axiom fails at points {points:?}", axiom.name())]
    Axiom { axiom: Axiom, points: Vec<PointId> },
    #[error("metric is not dull: {max} exceeds twice the smallest distance {min}")]
    NotDull { min: String, max: String },
}

impl MetricError {
    pub fn code(&self) -> &'static str {
        match self {
            MetricError::Empty => "E_EMPTY",
            MetricError::Shape { .. } => "E_PAIR_COUNT",
            MetricError::Axiom { axiom: Axiom::Symmetry, .. } => "E_METRIC_SYMMETRY",
            MetricError::Axiom { axiom: Axiom::Diagonal, .. } => "E_METRIC_DIAGONAL",
            MetricError::Axiom { axiom: Axiom::Positivity, .. } => "E_METRIC_POSITIVITY",
            MetricError::Axiom { axiom: Axiom::Triangle, .. } => "E_METRIC_TRIANGLE",
            MetricError::NotDull { .. } => "E_NOT_DULL",
        }
    }
}

/// A validated finite metric with rational values, stored lower-triangular.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Metric {
    points: usize,
    d: Vec<Rational>,
}

impl Metric {
    /// Validates a full square matrix, reporting the first failing axiom.
    pub fn from_matrix(rows: &[Vec<Rational>]) -> Result<Self, MetricError> {
        let m = rows.len();
        if m == 0 {
            return Err(MetricError::Empty);
        }
        for (row, r) in rows.iter().enumerate() {
            if r.len() != m {
                return Err(MetricError::Shape { row, expected: m, got: r.len() });
            }
        }
        for (i, r) in rows.iter().enumerate() {
            if !r[i].is_zero() {
                return Err(MetricError::Axiom { axiom: Axiom::Diagonal, points: vec![i] });
            }
        }
        for (i, r) in rows.iter().enumerate() {
            if let Some(j) = (0..i).find(|&j| r[j] != rows[j][i]) {
                return Err(MetricError::Axiom { axiom: Axiom::Symmetry, points: vec![i, j] });
            }
        }
        let d = (0..m).flat_map(|i| (0..i).map(move |j| (i, j))).map(|(i, j)| rows[i][j].clone()).collect();
        Self::from_lower(m, d)
    }

    /// Validates lower-triangular distances in pair order (1,0), (2,0), (2,1), ….
    pub fn from_lower(points: usize, d: Vec<Rational>) -> Result<Self, MetricError> {
        if points == 0 {
            return Err(MetricError::Empty);
        }
        if d.len() != pair_count(points) {
            return Err(MetricError::Shape { row: 0, expected: pair_count(points), got: d.len() });
        }
        if let Some(idx) = d.iter().position(|v| !v.is_positive()) {
            let (i, j) = pair_at(idx);
            return Err(MetricError::Axiom { axiom: Axiom::Positivity, points: vec![i, j] });
        }
        let metric = Metric { points, d };
        if let Some(bad) = metric.triangle_violation() {
            return Err(MetricError::Axiom { axiom: Axiom::Triangle, points: bad.to_vec() });
        }
        Ok(metric)
    }

    /// First `[x, y, z]` with `d(x, z) > d(x, y) + d(y, z)`.
    fn triangle_violation(&self) -> Option<[PointId; 3]> {
        let m = self.points;
        for x in 0..m {
            for z in 0..x {
                let xz = self.dist(x, z);
                for y in (0..m).filter(|&y| y != x && y != z) {
                    if xz > &(self.dist(x, y) + self.dist(y, z)) {
                        return Some([x, y, z]);
                    }
                }
            }
        }
        None
    }

    pub fn len(&self) -> usize {
        self.points
    }

    pub fn is_empty(&self) -> bool {
        self.points == 0
    }

    pub fn dist(&self, x: PointId, y: PointId) -> &Rational {
        static ZERO: std::sync::OnceLock<Rational> = std::sync::OnceLock::new();
        if x == y {
            ZERO.get_or_init(Rational::zero)
        } else {
            &self.d[pair_index(x, y)]
        }
    }

    pub fn pair_distances(&self) -> &[Rational] {
        &self.d
    }

    pub fn rows(&self) -> Vec<Vec<Rational>> {
        (0..self.points).map(|i| (0..i).map(|j| self.dist(i, j).clone()).collect()).collect()
    }

    /// Smallest and largest nonzero distances, if any pair exists.
    pub fn spread(&self) -> Option<(&Rational, &Rational)> {
        let min = self.d.iter().min()?;
        let max = self.d.iter().max()?;
        Some((min, max))
    }
}

/// Every nonzero distance is at most the sum of any two nonzero distances,
/// which on a finite space means `max ≤ 2 · min`.
pub fn is_dull(d: &Metric) -> bool {
    d.spread().is_none_or(|(min, max)| max <= &(min * int(2)))
}

/// A metric known to be dull.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DullMetric(Metric);

impl DullMetric {
    pub fn new(d: Metric) -> Result<Self, MetricError> {
        match d.spread() {
            Some((min, max)) if max > &(min * int(2)) => {
                Err(MetricError::NotDull { min: format_rational(min), max: format_rational(max) })
            }
            _ => Ok(DullMetric(d)),
        }
    }

    pub fn metric(&self) -> &Metric {
        &self.0
    }

    pub fn into_metric(self) -> Metric {
        self.0
    }
}

/// Realizes `x` by the dull metric sending rank `i` to `1 + i/(n+1)`.
pub fn metrize_dull(x: &EchelonedSpace) -> DullMetric {
    let step = Rational::new(1.into(), (x.rank_count() as i64 + 1).into());
    let d = x.pair_ranks().iter().map(|&r| int(1) + &step * int(r as i64)).collect();
    // Values lie in (1, 2), so positivity, triangle and dullness hold.
    DullMetric(Metric { points: x.len(), d })
}

/// `dN(h x, h y) ≤ dM(x, y)` for every pair.
pub fn is_one_lipschitz(dm: &Metric, dn: &Metric, h: &[PointId]) -> bool {
    h.len() == dm.len()
        && h.iter().all(|&p| p < dn.len())
        && (0..dm.len()).all(|x| (0..x).all(|y| dn.dist(h[x], h[y]) <= dm.dist(x, y)))
}
