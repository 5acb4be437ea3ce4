//! Finite prefixes of the universal homogeneous echeloned space.
//!
//! Ranks are positive rationals, 0 being the diagonal. Two presentations
//! are offered:
//!
//! * **random**: the pair `{u, v}` gets colour index `i` from a geometric
//!   law and the rank is the `i`-th rational of the Calkin–Wilf sequence.
//!   Ranks are computed on demand, so the prefix can be grown cheaply.
//! * **deterministic**: every new point is built as a witness to a demand,
//!   demands being drawn by a dovetailed schedule over subsets of existing
//!   points. New ranks inside a gap are simplest rationals, new ranks above
//!   everything are `max + 1, max + 2, …`.
//!
//! [`back_and_forth`] matches two models to a given depth.

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::colgraph::{GeometricColouring, GraphError};
use crate::morphism::is_embedding;
use crate::rational::{calkin_wilf_index, calkin_wilf_rational, increasing_between, Rational};
use crate::space::{pair_index, EchelonedSpace, PointId};

/// Default bound on the random model's size during a witness search.
pub const DEFAULT_WITNESS_CAP: usize = 1 << 20;

/// Random-mode growth step during a witness search.
const BLOCK: usize = 64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LimitError {
    #[error("point {0} has not been materialized")]
    Unmaterialized(PointId),
    #[error("malformed demand: {0}")]
    MalformedDemand(String),
    #[error("no witness among the first {cap} points")]
    WitnessCapExceeded { cap: usize },
    #[error(transparent)]
    Parameter(#[from] GraphError),
}

impl LimitError {
    pub fn code(&self) -> &'static str {
        match self {
            LimitError::Unmaterialized(_) => "E_POINT_RANGE",
            LimitError::MalformedDemand(_) => "E_DEMAND",
            LimitError::WitnessCapExceeded { .. } => "E_WITNESS_CAP",
            LimitError::Parameter(e) => e.code(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mode {
    Random { p: f64 },
    Deterministic,
}

/// What a witness `z` must satisfy against one base point `s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Requirement {
    /// `rank(z, s) = q`.
    Exact(Rational),
    /// `lo < rank(z, s) < hi` (`hi = None` is +∞). Base points sharing an
    /// interval are ordered by `slot`: equal slots get equal ranks, a
    /// smaller slot gets a smaller rank.
    Between { lo: Rational, hi: Option<Rational>, slot: u32 },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Demand {
    pub base: Vec<(PointId, Requirement)>,
}

impl Demand {
    pub fn exact(base: PointId, q: Rational) -> Self {
        Demand { base: vec![(base, Requirement::Exact(q))] }
    }

    fn validate(&self, len: usize) -> Result<(), LimitError> {
        let mut seen = BTreeSet::new();
        for (p, req) in &self.base {
            if *p >= len {
                return Err(LimitError::Unmaterialized(*p));
            }
            if !seen.insert(*p) {
                return Err(LimitError::MalformedDemand(format!("point {p} is listed twice")));
            }
            match req {
                Requirement::Exact(q) if *q <= Rational::zero() => {
                    return Err(LimitError::MalformedDemand(format!("exact rank {q} is not positive")));
                }
                Requirement::Between { lo, hi, .. } => {
                    if *lo < Rational::zero() || hi.as_ref().is_some_and(|h| h <= lo) {
                        return Err(LimitError::MalformedDemand(format!("interval ({lo}, {hi:?}) is empty")));
                    }
                }
                Requirement::Exact(_) => {}
            }
        }
        Ok(())
    }

    /// Whether ranks `labels[i]` (against `base[i]`) meet the demand.
    pub fn satisfied_by(&self, labels: &[Rational]) -> bool {
        let each = self.base.iter().zip(labels).all(|((_, req), q)| match req {
            Requirement::Exact(e) => q == e,
            Requirement::Between { lo, hi, .. } => q > lo && hi.as_ref().is_none_or(|h| q < h),
        });
        each && self.slots_consistent(labels)
    }

    fn slots_consistent(&self, labels: &[Rational]) -> bool {
        let between: Vec<(&Rational, &Option<Rational>, u32, &Rational)> = self
            .base
            .iter()
            .zip(labels)
            .filter_map(|((_, req), q)| match req {
                Requirement::Between { lo, hi, slot } => Some((lo, hi, *slot, q)),
                Requirement::Exact(_) => None,
            })
            .collect();
        between
            .iter()
            .enumerate()
            .all(|(i, a)| between[..i].iter().all(|b| a.0 != b.0 || a.1 != b.1 || a.2.cmp(&b.2) == a.3.cmp(b.3)))
    }
}

/// Interval bounds with the `(slot, point)` pairs that share them.
type IntervalGroup = (Rational, Option<Rational>, Vec<(u32, PointId)>);

#[derive(Debug, Clone)]
pub struct LimitModel {
    mode: Mode,
    seed: u64,
    len: usize,
    witness_cap: usize,
    colouring: Option<GeometricColouring>,
    /// Deterministic mode: lower-triangular ranks and the set of all ranks.
    table: Vec<Rational>,
    used: BTreeSet<Rational>,
    /// Deterministic mode: next schedule step.
    step: u64,
}

impl LimitModel {
    pub fn new(mode: Mode, seed: u64) -> Result<Self, LimitError> {
        let colouring = match mode {
            Mode::Random { p } => Some(GeometricColouring::new(p, seed)?),
            Mode::Deterministic => None,
        };
        Ok(LimitModel {
            mode,
            seed,
            len: 0,
            witness_cap: DEFAULT_WITNESS_CAP,
            colouring,
            table: Vec::new(),
            used: BTreeSet::new(),
            step: 0,
        })
    }

    pub fn with_witness_cap(mut self, cap: usize) -> Self {
        self.witness_cap = cap;
        self
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Number of materialized points.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Makes sure the first `n` points exist and returns their ids.
    pub fn points(&mut self, n: usize) -> Vec<PointId> {
        match self.mode {
            Mode::Random { .. } => self.len = self.len.max(n),
            Mode::Deterministic => {
                while self.len < n {
                    self.grow_scheduled();
                }
            }
        }
        (0..n).collect()
    }

    pub fn rank(&self, u: PointId, v: PointId) -> Result<Rational, LimitError> {
        for p in [u, v] {
            if p >= self.len {
                return Err(LimitError::Unmaterialized(p));
            }
        }
        Ok(self.rank_unchecked(u, v))
    }

    fn rank_unchecked(&self, u: PointId, v: PointId) -> Rational {
        if u == v {
            return Rational::zero();
        }
        match &self.colouring {
            Some(c) => calkin_wilf_rational(c.colour_index(u, v)),
            None => self.table[pair_index(u, v)].clone(),
        }
    }

    /// Rank-compressed space on the first `n` points.
    pub fn sample_prefix(&mut self, n: usize) -> EchelonedSpace {
        self.points(n);
        self.induced(&(0..n).collect::<Vec<_>>())
    }

    /// Rank-compressed space on `pts`, in the given order.
    pub fn induced(&self, pts: &[PointId]) -> EchelonedSpace {
        EchelonedSpace::from_weight_fn(pts.len(), |i, j| Some(self.rank_unchecked(pts[i], pts[j])))
            .expect("rational ranks are totally ordered")
    }

    /// Distinct ranks among pairs of `pts`, ascending.
    pub fn labels_on(&self, pts: &[PointId]) -> Vec<Rational> {
        let mut set = BTreeSet::new();
        for (i, &u) in pts.iter().enumerate() {
            for &v in &pts[..i] {
                set.insert(self.rank_unchecked(u, v));
            }
        }
        set.into_iter().collect()
    }

    /// A point realizing `d`. The random model searches its points in
    /// order, growing in blocks of 64 up to the witness cap; the
    /// deterministic model always builds a new point whose ranks to points
    /// outside the demand are fresh and above every existing rank.
    pub fn ensure_witness(&mut self, d: &Demand) -> Result<PointId, LimitError> {
        d.validate(self.len)?;
        match self.mode {
            Mode::Random { .. } => self.search_witness(d),
            Mode::Deterministic => Ok(self.build_witness(d)),
        }
    }

    fn search_witness(&mut self, d: &Demand) -> Result<PointId, LimitError> {
        let colouring = self.colouring.expect("random mode");
        // Exact ranks become colour indices; None means unreachable.
        let mut exact = Vec::new();
        for (p, req) in &d.base {
            if let Requirement::Exact(q) = req {
                match calkin_wilf_index(q) {
                    Some(i) => exact.push((*p, i)),
                    None => return Err(LimitError::WitnessCapExceeded { cap: self.witness_cap }),
                }
            }
        }
        let in_base: BTreeSet<PointId> = d.base.iter().map(|(p, _)| *p).collect();
        let mut z = 0;
        loop {
            if z >= self.len {
                if self.len >= self.witness_cap {
                    return Err(LimitError::WitnessCapExceeded { cap: self.witness_cap });
                }
                self.len = (self.len + BLOCK).min(self.witness_cap);
            }
            if !in_base.contains(&z) && exact.iter().all(|&(p, i)| colouring.colour_index(z, p) == i) {
                let labels: Vec<Rational> = d.base.iter().map(|(p, _)| self.rank_unchecked(z, *p)).collect();
                if d.satisfied_by(&labels) {
                    return Ok(z);
                }
            }
            z += 1;
        }
    }

    fn build_witness(&mut self, d: &Demand) -> PointId {
        let z = self.len;
        let mut row: Vec<Option<Rational>> = vec![None; z];
        for (p, req) in &d.base {
            if let Requirement::Exact(q) = req {
                row[*p] = Some(q.clone());
            }
        }
        // Group interval requirements by interval, then by slot.
        let mut groups: Vec<IntervalGroup> = Vec::new();
        for (p, req) in &d.base {
            if let Requirement::Between { lo, hi, slot } = req {
                match groups.iter_mut().find(|g| &g.0 == lo && &g.1 == hi) {
                    Some(g) => g.2.push((*slot, *p)),
                    None => groups.push((lo.clone(), hi.clone(), vec![(*slot, *p)])),
                }
            }
        }
        for (lo, hi, mut members) in groups {
            members.sort_unstable();
            let slots: Vec<u32> = {
                let mut s: Vec<u32> = members.iter().map(|m| m.0).collect();
                s.dedup();
                s
            };
            // Start above every rank already used inside [lo, hi).
            let floor = match &hi {
                Some(h) => self.used.range(lo.clone()..h.clone()).next_back(),
                None => self.used.range(lo.clone()..).next_back(),
            }
            .cloned()
            .unwrap_or(lo.clone())
            .max(lo.clone());
            let fresh = match &hi {
                Some(h) => increasing_between(&floor, Some(h), slots.len()),
                None => (1..=slots.len()).map(|k| &floor + Rational::from_integer(k.into())).collect(),
            };
            for q in &fresh {
                self.used.insert(q.clone());
            }
            for (slot, p) in members {
                let k = slots.binary_search(&slot).expect("slot listed");
                row[p] = Some(fresh[k].clone());
            }
        }
        for q in row.iter().flatten() {
            self.used.insert(q.clone());
        }
        let mut top = self.used.last().cloned().unwrap_or_else(Rational::zero);
        for cell in row.iter_mut().filter(|c| c.is_none()) {
            top += Rational::one();
            self.used.insert(top.clone());
            *cell = Some(top.clone());
        }
        self.table.extend(row.into_iter().map(|q| q.expect("every rank assigned")));
        self.len += 1;
        z
    }

    /// One step of the deterministic schedule: step `t` is split by the
    /// Cantor pairing into a subset mask of existing points and a visit
    /// count, so every subset is revisited infinitely often. Steps whose
    /// subset is not materialized yet are skipped.
    fn grow_scheduled(&mut self) {
        loop {
            let t = self.step;
            self.step += 1;
            let (mask, _visit) = cantor_unpair(t);
            if self.len < 64 && mask >> self.len != 0 {
                continue;
            }
            let base: Vec<PointId> = (0..64).filter(|&b| mask >> b & 1 == 1).collect();
            let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
            rng.set_stream(t);
            let labels = self.labels_on(&base);
            let r = labels.len();
            let demand = Demand {
                base: base
                    .iter()
                    .map(|&p| {
                        let choice = rng.gen_range(0..2 * r + 1);
                        let req = if choice < r {
                            Requirement::Exact(labels[choice].clone())
                        } else {
                            let g = choice - r;
                            let lo = if g == 0 { Rational::zero() } else { labels[g - 1].clone() };
                            let hi = labels.get(g).cloned();
                            Requirement::Between { lo, hi, slot: rng.gen_range(0..base.len() as u32) }
                        };
                        (p, req)
                    })
                    .collect(),
            };
            self.build_witness(&demand);
            return;
        }
    }
}

fn cantor_unpair(t: u64) -> (u64, u64) {
    let w = ((8 * t as u128 + 1).isqrt() as u64 - 1) / 2;
    let y = t - w * (w + 1) / 2;
    (w - y, y)
}

/// Matched points `(m1 point, m2 point)` in the order they were added.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialIsomorphism {
    pub pairs: Vec<(PointId, PointId)>,
}

impl PartialIsomorphism {
    pub fn domain(&self) -> Vec<PointId> {
        self.pairs.iter().map(|p| p.0).collect()
    }

    pub fn range(&self) -> Vec<PointId> {
        self.pairs.iter().map(|p| p.1).collect()
    }

    /// The induced finite spaces agree, checked as embeddings both ways.
    pub fn verify(&self, m1: &LimitModel, m2: &LimitModel) -> bool {
        let a = m1.induced(&self.domain());
        let b = m2.induced(&self.range());
        let id: Vec<PointId> = (0..a.len()).collect();
        is_embedding(&a, &b, &id) && is_embedding(&b, &a, &id)
    }
}

/// Alternates forth steps (point `i` of `m1`) and back steps (point `i` of
/// `m2`) for `i < depth`, skipping points already matched.
pub fn back_and_forth(
    m1: &mut LimitModel,
    m2: &mut LimitModel,
    depth: usize,
) -> Result<PartialIsomorphism, LimitError> {
    let mut iso = PartialIsomorphism { pairs: Vec::new() };
    for i in 0..depth {
        m1.points(i + 1);
        if !iso.pairs.iter().any(|p| p.0 == i) {
            let d = translate(m1, m2, &iso.domain(), &iso.range(), i);
            let z = m2.ensure_witness(&d)?;
            iso.pairs.push((i, z));
        }
        m2.points(i + 1);
        if !iso.pairs.iter().any(|p| p.1 == i) {
            let d = translate(m2, m1, &iso.range(), &iso.domain(), i);
            let z = m1.ensure_witness(&d)?;
            iso.pairs.push((z, i));
        }
    }
    Ok(iso)
}

/// The demand on `tgt` that a match for `src` point `a` must meet, given
/// matched lists `src_pts[k] ↔ tgt_pts[k]`.
fn translate(src: &LimitModel, tgt: &LimitModel, src_pts: &[PointId], tgt_pts: &[PointId], a: PointId) -> Demand {
    let src_labels = src.labels_on(src_pts);
    let tgt_labels = tgt.labels_on(tgt_pts);
    debug_assert_eq!(src_labels.len(), tgt_labels.len());
    let ranks: Vec<Rational> = src_pts.iter().map(|&p| src.rank_unchecked(a, p)).collect();
    let base = src_pts
        .iter()
        .zip(tgt_pts)
        .zip(&ranks)
        .map(|((_, &t), q)| {
            let req = match src_labels.binary_search(q) {
                Ok(k) => Requirement::Exact(tgt_labels[k].clone()),
                Err(g) => {
                    let lo = if g == 0 { Rational::zero() } else { tgt_labels[g - 1].clone() };
                    let hi = tgt_labels.get(g).cloned();
                    // Slot: position among the distinct new ranks in this gap.
                    let mut in_gap: Vec<&Rational> =
                        ranks.iter().filter(|r| src_labels.binary_search(r) == Err(g)).collect();
                    in_gap.sort();
                    in_gap.dedup();
                    let slot = in_gap.iter().position(|r| *r == q).expect("rank lies in its own gap") as u32;
                    Requirement::Between { lo, hi, slot }
                }
            };
            (t, req)
        })
        .collect();
    Demand { base }
}
