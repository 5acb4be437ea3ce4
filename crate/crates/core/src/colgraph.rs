//! Complete edge-coloured graphs, star demands, and the geometric random
//! colouring.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::space::{pair_count, pair_index, EchelonedSpace, PointId, SpaceError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("colour {0:?} is listed twice, so the colour order is not total")]
    DuplicateColour(String),
    #[error("edge colour index {0} is outside the colour list")]
    ColourOutOfRange(usize),
    #[error("expected {expected} edge colours for {vertices} vertices, got {got}")]
    PairCount { vertices: usize, expected: usize, got: usize },
    #[error("vertex {0} is out of range")]
    VertexOutOfRange(PointId),
    #[error("vertex {0} occurs in more than one demand set")]
    Overlap(PointId),
    #[error("demand has {sets} sets but {colours} colours")]
    Arity { sets: usize, colours: usize },
    #[error("graph needs at least one vertex")]
    Empty,
    #[error("geometric parameter must lie strictly between 0 and 1, got {0}")]
    Parameter(f64),
}

impl GraphError {
    pub fn code(&self) -> &'static str {
        match self {
            GraphError::DuplicateColour(_) => "E_COLOUR_ORDER",
            GraphError::ColourOutOfRange(_) => "E_COLOUR_RANGE",
            GraphError::PairCount { .. } => "E_PAIR_COUNT",
            GraphError::VertexOutOfRange(_) => "E_POINT_RANGE",
            GraphError::Overlap(_) => "E_OVERLAP",
            GraphError::Arity { .. } => "E_DEMAND_ARITY",
            GraphError::Empty => "E_EMPTY",
            GraphError::Parameter(_) => "E_PARAMETER",
        }
    }
}

/// A complete graph whose edges carry colours from a totally ordered list.
/// `chi` stores, per unordered pair in [`pair_index`] order, a position in
/// `colours`; earlier positions are smaller colours.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ColouredGraph {
    v: usize,
    colours: Vec<String>,
    chi: Vec<usize>,
}

impl ColouredGraph {
    pub fn new(v: usize, colours: Vec<String>, chi: Vec<usize>) -> Result<Self, GraphError> {
        if v == 0 {
            return Err(GraphError::Empty);
        }
        let mut sorted = colours.clone();
        sorted.sort();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateColour(w[0].clone()));
        }
        if chi.len() != pair_count(v) {
            return Err(GraphError::PairCount { vertices: v, expected: pair_count(v), got: chi.len() });
        }
        if let Some(&c) = chi.iter().find(|&&c| c >= colours.len()) {
            return Err(GraphError::ColourOutOfRange(c));
        }
        Ok(ColouredGraph { v, colours, chi })
    }

    pub fn vertex_count(&self) -> usize {
        self.v
    }

    pub fn colours(&self) -> &[String] {
        &self.colours
    }

    /// Colour position of edge `{x, y}`, `x != y`.
    #[inline]
    pub fn colour(&self, x: PointId, y: PointId) -> usize {
        self.chi[pair_index(x, y)]
    }

    pub fn edge_colours(&self) -> &[usize] {
        &self.chi
    }

    pub fn colour_position(&self, name: &str) -> Option<usize> {
        self.colours.iter().position(|c| c == name)
    }
}

/// Colour `i` of the graph is rank `i`; colours are named `"1"`, `"2"`, ….
pub fn to_coloured_graph(x: &EchelonedSpace) -> ColouredGraph {
    let colours = (1..=x.rank_count()).map(|r| r.to_string()).collect();
    let chi = x.pair_ranks().iter().map(|&r| r as usize - 1).collect();
    ColouredGraph { v: x.len(), colours, chi }
}

/// Compresses the edge colours, in list order, into dense ranks.
pub fn from_coloured_graph(g: &ColouredGraph) -> Result<EchelonedSpace, SpaceError> {
    EchelonedSpace::from_weights(g.v, &g.chi)
}

/// `k` disjoint vertex sets with one required colour position each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarDemand {
    pub sets: Vec<Vec<PointId>>,
    pub colours: Vec<usize>,
}

impl StarDemand {
    pub fn validate(&self, v: usize, colour_count: usize) -> Result<(), GraphError> {
        if self.sets.len() != self.colours.len() {
            return Err(GraphError::Arity { sets: self.sets.len(), colours: self.colours.len() });
        }
        if let Some(&c) = self.colours.iter().find(|&&c| c >= colour_count) {
            return Err(GraphError::ColourOutOfRange(c));
        }
        let mut seen = vec![false; v];
        for &u in self.sets.iter().flatten() {
            if u >= v {
                return Err(GraphError::VertexOutOfRange(u));
            }
            if std::mem::replace(&mut seen[u], true) {
                return Err(GraphError::Overlap(u));
            }
        }
        Ok(())
    }

    fn members(&self, v: usize) -> Vec<bool> {
        let mut inside = vec![false; v];
        for &u in self.sets.iter().flatten() {
            inside[u] = true;
        }
        inside
    }

    /// Whether `z` (outside every set) meets every colour requirement.
    pub fn satisfied_by(&self, z: PointId, colour: impl Fn(PointId, PointId) -> usize) -> bool {
        self.sets.iter().zip(&self.colours).all(|(set, &c)| set.iter().all(|&u| u != z && colour(z, u) == c))
    }
}

/// The least vertex outside the demand sets that realizes the demand.
pub fn check_star(g: &ColouredGraph, d: &StarDemand) -> Result<Option<PointId>, GraphError> {
    d.validate(g.v, g.colours.len())?;
    let inside = d.members(g.v);
    Ok((0..g.v).find(|&z| !inside[z] && d.satisfied_by(z, |a, b| g.colour(a, b))))
}

/// Independent geometric edge colours: index `i ≥ 1` with probability
/// `(1 − p)^(i−1) · p`. Each edge draws from its own ChaCha8 stream, so a
/// colour depends only on `(seed, pair)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometricColouring {
    p: f64,
    seed: u64,
}

impl GeometricColouring {
    pub fn new(p: f64, seed: u64) -> Result<Self, GraphError> {
        if !(p > 0.0 && p < 1.0) {
            return Err(GraphError::Parameter(p));
        }
        Ok(GeometricColouring { p, seed })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// 1-based colour index of edge `{x, y}`.
    pub fn colour_index(&self, x: PointId, y: PointId) -> u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(pair_index(x, y) as u64);
        let u: f64 = rng.gen();
        // Inverse CDF; ln(1 - u) is finite because u < 1.
        ((1.0 - u).ln() / (1.0 - self.p).ln()).floor() as u64 + 1
    }
}

/// A sample on `n` vertices. Colours are named by their indices `"1"` up to
/// the largest index drawn.
pub fn random_coloured_graph(n: usize, g: &GeometricColouring) -> Result<ColouredGraph, GraphError> {
    if n == 0 {
        return Err(GraphError::Empty);
    }
    let idx: Vec<u64> = (0..n).flat_map(|x| (0..x).map(move |y| g.colour_index(x, y))).collect();
    let top = idx.iter().copied().max().unwrap_or(1);
    let colours = (1..=top).map(|i| i.to_string()).collect();
    let chi = idx.into_iter().map(|i| i as usize - 1).collect();
    Ok(ColouredGraph { v: n, colours, chi })
}

/// Probability that none of `n` fresh vertices realizes a demand with the
/// given 1-based colour indices and set sizes.
pub fn witness_failure_probability(p: f64, indices: &[u64], sizes: &[usize], n: u64) -> f64 {
    let miss: f64 = indices.iter().zip(sizes).map(|(&i, &s)| (i - 1) as f64 * s as f64).sum();
    let hit: f64 = sizes.iter().map(|&s| s as f64).sum();
    let success = (1.0 - p).powf(miss) * p.powf(hit);
    (1.0 - success).powf(n as f64)
}

/// An undirected simple graph on `v` vertices, lower-triangular adjacency.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    pub v: usize,
    pub adj: Vec<bool>,
}

impl SimpleGraph {
    pub fn has_edge(&self, x: PointId, y: PointId) -> bool {
        x != y && self.adj[pair_index(x, y)]
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().filter(|&&e| e).count()
    }

    /// Least vertex outside `adjacent ∪ apart` joined to all of `adjacent`
    /// and to none of `apart`.
    pub fn extension_witness(&self, adjacent: &[PointId], apart: &[PointId]) -> Option<PointId> {
        (0..self.v).find(|&z| {
            !adjacent.contains(&z)
                && !apart.contains(&z)
                && adjacent.iter().all(|&u| self.has_edge(z, u))
                && apart.iter().all(|&u| !self.has_edge(z, u))
        })
    }
}

/// Edges of colour position `c`.
pub fn rado_slice(g: &ColouredGraph, c: usize) -> SimpleGraph {
    SimpleGraph { v: g.v, adj: g.chi.iter().map(|&x| x == c).collect() }
}
