//! The Katětov functor on finite echeloned spaces.
//!
//! For `X` with ranks `⊥ < c_1 < … < c_n` and `N = |X|`, the chain `C_X` is
//!
//! ```text
//! ⊥ < b < (1,0) < … < (N,0) < c_1 < (1,1) < … < (N,1) < … < c_n < (1,n) < … < (N,n)
//! ```
//!
//! and `K(X)` has as points `X` followed by all maps `h: X → C_X \ {⊥}`.
//! Chain elements are numbered by position, which is also their rank in
//! `K(X)`: every element of `C_X` is attained, so no compression is needed.

use thiserror::Error;

use crate::morphism::embedding_rank_map;
use crate::space::{pair_count, EchelonedSpace, PointId, Rank, RankMap};

/// Default largest `|X|` for which `K(X)` is built.
pub const DEFAULT_CAP: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KatetovError {
    #[error("K(X) is only built for |X| <= {cap}, got {points}")]
    CapExceeded { points: usize, cap: usize },
    #[error("the point map is not an embedding")]
    NotEmbedding,
    #[error("Y is not a one-point extension of X over the identical inclusion")]
    NotOnePointExtension,
}

impl KatetovError {
    pub fn code(&self) -> &'static str {
        match self {
            KatetovError::CapExceeded { .. } => "E_CAP",
            KatetovError::NotEmbedding => "E_NOT_EMBEDDING",
            KatetovError::NotOnePointExtension => "E_NOT_EXTENSION",
        }
    }
}

/// An element of `C_X`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChainLabel {
    Bottom,
    B,
    /// `c_i`, `i ≥ 1`.
    C(Rank),
    /// `(k, j)` with `k ∈ 1..=N`, `j ∈ 0..=n`.
    K(usize, Rank),
}

/// The chain `C_X`, determined by `N = |X|` and the rank count `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KatetovChain {
    pub points: usize,
    pub ranks: Rank,
}

impl KatetovChain {
    pub fn of(x: &EchelonedSpace) -> Self {
        KatetovChain { points: x.len(), ranks: x.rank_count() }
    }

    pub fn len(&self) -> usize {
        self.ranks as usize + 2 + (self.ranks as usize + 1) * self.points
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn index(&self, label: ChainLabel) -> usize {
        let block = self.points + 1;
        match label {
            ChainLabel::Bottom => 0,
            ChainLabel::B => 1,
            ChainLabel::C(i) => 1 + i as usize * block,
            ChainLabel::K(k, j) => 1 + j as usize * block + k,
        }
    }

    pub fn label(&self, index: usize) -> ChainLabel {
        match index {
            0 => ChainLabel::Bottom,
            1 => ChainLabel::B,
            _ => {
                let block = self.points + 1;
                let (j, k) = ((index - 1) / block, (index - 1) % block);
                if k == 0 {
                    ChainLabel::C(j as Rank)
                } else {
                    ChainLabel::K(k, j as Rank)
                }
            }
        }
    }

    /// Labels in increasing order.
    pub fn labels(&self) -> Vec<ChainLabel> {
        (0..self.len()).map(|i| self.label(i)).collect()
    }
}

/// A map `X → C_X \ {⊥}`, stored as chain positions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FunctionPoint(pub Vec<usize>);

#[derive(Debug, Clone)]
pub struct KatetovSpace {
    pub chain: KatetovChain,
    /// `K(X)`; points `0..N` are `X`, the rest are function points in
    /// lexicographic order of their value tuples.
    pub space: EchelonedSpace,
    /// The identical embedding `X ↪ K(X)`.
    pub lambda: Vec<PointId>,
}

impl KatetovSpace {
    /// Number of points of `K(X)` for `N = |X|` and chain length `c`.
    pub fn size_for(chain: &KatetovChain) -> usize {
        chain.points + (chain.len() - 1).pow(chain.points as u32)
    }

    pub fn function_count(&self) -> usize {
        self.space.len() - self.chain.points
    }

    /// The function point at position `p ≥ N` of `K(X)`.
    pub fn function_at(&self, p: PointId) -> FunctionPoint {
        function_at(&self.chain, p)
    }

    pub fn index_of(&self, h: &FunctionPoint) -> PointId {
        index_of(&self.chain, h)
    }

    /// `η̃` as a chain label.
    pub fn eta_tilde(&self, u: PointId, v: PointId) -> ChainLabel {
        self.chain.label(self.space.rank(u, v) as usize)
    }
}

fn function_at(chain: &KatetovChain, p: PointId) -> FunctionPoint {
    let n = chain.points;
    let base = chain.len() - 1;
    let mut code = p - n;
    let mut values = vec![0; n];
    for slot in values.iter_mut().rev() {
        *slot = code % base + 1;
        code /= base;
    }
    FunctionPoint(values)
}

fn index_of(chain: &KatetovChain, h: &FunctionPoint) -> PointId {
    let base = chain.len() - 1;
    chain.points + h.0.iter().fold(0, |acc, &v| acc * base + (v - 1))
}

pub fn katetov_space(x: &EchelonedSpace) -> Result<KatetovSpace, KatetovError> {
    katetov_space_with_cap(x, DEFAULT_CAP)
}

pub fn katetov_space_with_cap(x: &EchelonedSpace, cap: usize) -> Result<KatetovSpace, KatetovError> {
    let n = x.len();
    if n > cap {
        return Err(KatetovError::CapExceeded { points: n, cap });
    }
    let chain = KatetovChain::of(x);
    let size = KatetovSpace::size_for(&chain);
    let b = chain.index(ChainLabel::B) as Rank;
    let mut eta = Vec::with_capacity(pair_count(size));
    let mut values = Vec::with_capacity(n);
    for u in 0..size {
        if u < n {
            eta.extend((0..u).map(|v| x.rank(u, v)).map(|r| chain.index(ChainLabel::C(r)) as Rank));
            continue;
        }
        values.clear();
        values.extend(function_at(&chain, u).0.iter().map(|&v| v as Rank));
        eta.extend_from_slice(&values);
        eta.extend(std::iter::repeat_n(b, u - n));
    }
    let space = EchelonedSpace::from_parts_unchecked(size, chain.len() as Rank - 1, eta);
    Ok(KatetovSpace { chain, space, lambda: (0..n).collect() })
}

/// `ψ̃: C_X → C_Y` induced by an embedding with rank map `φ̂`.
pub fn psi_tilde(phi_hat: &RankMap, label: ChainLabel) -> ChainLabel {
    match label {
        ChainLabel::Bottom => ChainLabel::Bottom,
        ChainLabel::B => ChainLabel::B,
        ChainLabel::K(k, 0) => ChainLabel::K(k, 0),
        ChainLabel::C(i) => ChainLabel::C(phi_hat.apply(i)),
        ChainLabel::K(k, i) => ChainLabel::K(k, phi_hat.apply(i)),
    }
}

/// `K(φ): K(X) → K(Y)` as a point map. Only index arithmetic is needed, so
/// neither space is built.
pub fn katetov_map(x: &EchelonedSpace, y: &EchelonedSpace, phi: &[PointId]) -> Result<Vec<PointId>, KatetovError> {
    katetov_map_with_cap(x, y, phi, DEFAULT_CAP)
}

pub fn katetov_map_with_cap(
    x: &EchelonedSpace,
    y: &EchelonedSpace,
    phi: &[PointId],
    cap: usize,
) -> Result<Vec<PointId>, KatetovError> {
    for s in [x, y] {
        if s.len() > cap {
            return Err(KatetovError::CapExceeded { points: s.len(), cap });
        }
    }
    let phi_hat = embedding_rank_map(x, y, phi).ok_or(KatetovError::NotEmbedding)?;
    let (cx, cy) = (KatetovChain::of(x), KatetovChain::of(y));
    let size = KatetovSpace::size_for(&cx);
    let b = cy.index(ChainLabel::B);
    let mut out: Vec<PointId> = phi.to_vec();
    out.reserve(size - x.len());
    let mut image = vec![b; y.len()];
    for p in x.len()..size {
        let h = function_at(&cx, p);
        image.iter_mut().for_each(|v| *v = b);
        for (xi, &v) in h.0.iter().enumerate() {
            image[phi[xi]] = cy.index(psi_tilde(&phi_hat, cx.label(v)));
        }
        out.push(index_of(&cy, &FunctionPoint(image.clone())));
    }
    Ok(out)
}

/// For `Y` extending `X` by the single point `|X|` (with `X` on the first
/// points), an embedding `g: Y ↪ K(X)` with `g` the identity on `X`.
pub fn realize_extension(x: &EchelonedSpace, y: &EchelonedSpace) -> Result<Vec<PointId>, KatetovError> {
    realize_extension_with_cap(x, y, DEFAULT_CAP)
}

pub fn realize_extension_with_cap(
    x: &EchelonedSpace,
    y: &EchelonedSpace,
    cap: usize,
) -> Result<Vec<PointId>, KatetovError> {
    let n = x.len();
    if n > cap {
        return Err(KatetovError::CapExceeded { points: n, cap });
    }
    if y.len() != n + 1 {
        return Err(KatetovError::NotOnePointExtension);
    }
    let e: Vec<PointId> = (0..n).collect();
    let e_hat = embedding_rank_map(x, y, &e).ok_or(KatetovError::NotOnePointExtension)?;
    let chain = KatetovChain::of(x);
    let h: Vec<usize> = (0..n)
        .map(|p| {
            let r = y.rank(n, p);
            // Gap j lies above ê(c_j); ê(c_0) = 0.
            let j = (1..=x.rank_count()).take_while(|&i| e_hat.apply(i) <= r).last().unwrap_or(0);
            let base = e_hat.apply(j);
            let label = if j > 0 && base == r { ChainLabel::C(j) } else { ChainLabel::K((r - base) as usize, j) };
            chain.index(label)
        })
        .collect();
    let mut g = e;
    g.push(index_of(&chain, &FunctionPoint(h)));
    Ok(g)
}
