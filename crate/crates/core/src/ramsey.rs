//! Ordered echeloned spaces and brute-force partition arrows.
//!
//! `C → (B)^A_k` holds when every `k`-colouring of the copies of `A` in `C`
//! leaves some copy of `B` whose copies of `A` all share one colour. Copies
//! are point sets; the orders make each copy rigid.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::colgraph::ColouredGraph;
use crate::enumerate::{enumerate_spaces, MAX_EXHAUSTIVE_POINTS};
use crate::morphism::is_embedding;
use crate::random::random_space;
use crate::space::{pair_count, pair_index, EchelonedSpace, PointId};

/// Largest number of colourings `arrow_check` will explore.
pub const COLOURING_BUDGET: u128 = 1 << 20;

/// Random spaces tried per size once `witness_search` leaves exhaustive range.
const SAMPLES_PER_SIZE: usize = 2000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RamseyError {
    #[error("{colourings} colourings exceed the budget of {budget}")]
    BudgetExceeded { colourings: u128, budget: u128 },
    #[error("k must be at least 1")]
    NoColours,
    #[error("order is not a permutation of {points} points")]
    BadOrder { points: usize },
}

impl RamseyError {
    pub fn code(&self) -> &'static str {
        match self {
            RamseyError::BudgetExceeded { .. } => "E_BUDGET",
            RamseyError::NoColours => "E_PARAMETER",
            RamseyError::BadOrder { .. } => "E_ORDER",
        }
    }
}

/// A space with a linear order on its points; `order[i]` is the `i`-th
/// smallest point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderedEchelonedSpace {
    space: EchelonedSpace,
    order: Vec<PointId>,
}

impl OrderedEchelonedSpace {
    pub fn new(space: EchelonedSpace, order: Vec<PointId>) -> Result<Self, RamseyError> {
        let mut seen = vec![false; space.len()];
        let ok = order.len() == space.len()
            && order.iter().all(|&p| p < seen.len() && !std::mem::replace(&mut seen[p], true));
        if !ok {
            return Err(RamseyError::BadOrder { points: space.len() });
        }
        Ok(OrderedEchelonedSpace { space, order })
    }

    /// Points ordered by id.
    pub fn natural(space: EchelonedSpace) -> Self {
        let order = (0..space.len()).collect();
        OrderedEchelonedSpace { space, order }
    }

    pub fn space(&self) -> &EchelonedSpace {
        &self.space
    }

    pub fn order(&self) -> &[PointId] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.space.len()
    }

    pub fn is_empty(&self) -> bool {
        self.space.is_empty()
    }
}

/// All point sets of `c` carrying a copy of `a`, each listed in `c`'s order.
/// Sets come out in lexicographic order of order positions.
pub fn copies(a: &OrderedEchelonedSpace, c: &OrderedEchelonedSpace) -> Vec<Vec<PointId>> {
    let k = a.len();
    let mut out = Vec::new();
    if k > c.len() {
        return out;
    }
    let mut map = vec![0; k];
    let mut pick: Vec<usize> = (0..k).collect();
    loop {
        for (j, &ap) in a.order.iter().enumerate() {
            map[ap] = c.order[pick[j]];
        }
        if is_embedding(&a.space, &c.space, &map) {
            out.push(pick.iter().map(|&i| c.order[i]).collect());
        }
        // Next k-subset of positions.
        let Some(i) = (0..k).rev().find(|&i| pick[i] < c.len() - k + i) else {
            return out;
        };
        pick[i] += 1;
        for j in i + 1..k {
            pick[j] = pick[j - 1] + 1;
        }
    }
}

/// For each copy of `b` in `c`, the indices of the copies of `a` inside it.
fn b_copy_members(a_copies: &[Vec<PointId>], b_copies: &[Vec<PointId>], points: usize) -> Vec<Vec<usize>> {
    b_copies
        .iter()
        .map(|bs| {
            let mut inside = vec![false; points];
            bs.iter().for_each(|&p| inside[p] = true);
            (0..a_copies.len()).filter(|&i| a_copies[i].iter().all(|&p| inside[p])).collect()
        })
        .collect()
}

/// Decides `c → (b)^a_k` by searching for a colouring with no
/// monochromatic copy of `b`.
pub fn arrow_check(
    c: &OrderedEchelonedSpace,
    a: &OrderedEchelonedSpace,
    b: &OrderedEchelonedSpace,
    k: usize,
) -> Result<bool, RamseyError> {
    if k == 0 {
        return Err(RamseyError::NoColours);
    }
    let a_copies = copies(a, c);
    let colourings = (k as u128).checked_pow(a_copies.len() as u32).unwrap_or(u128::MAX);
    if colourings > COLOURING_BUDGET {
        return Err(RamseyError::BudgetExceeded { colourings, budget: COLOURING_BUDGET });
    }
    let b_copies = copies(b, c);
    let members = b_copy_members(&a_copies, &b_copies, c.len());
    // A copy of b is settled once its last member is coloured.
    let mut settles: Vec<Vec<usize>> = vec![Vec::new(); a_copies.len()];
    for (bi, m) in members.iter().enumerate() {
        match m.last() {
            Some(&last) => settles[last].push(bi),
            // No copies of a inside: vacuously monochromatic.
            None => return Ok(true),
        }
    }
    let mut colouring = vec![0; a_copies.len()];
    Ok(!bad_colouring_exists(0, 0, k, &members, &settles, &mut colouring))
}

/// DFS over colourings of copies `i..`; colours are introduced in order, so
/// colourings equal up to renaming are visited once.
fn bad_colouring_exists(
    i: usize,
    used: usize,
    k: usize,
    members: &[Vec<usize>],
    settles: &[Vec<usize>],
    colouring: &mut [usize],
) -> bool {
    if i == colouring.len() {
        return true;
    }
    for col in 0..k.min(used + 1) {
        colouring[i] = col;
        let mono = settles[i].iter().any(|&bi| members[bi].iter().all(|&ai| colouring[ai] == col));
        if !mono && bad_colouring_exists(i + 1, used.max(col + 1), k, members, settles, colouring) {
            return true;
        }
    }
    false
}

/// Searches for `c` with `c → (b)^a_k` and `|b| ≤ |c| ≤ size_cap`. Sizes up
/// to 4 are exhausted in enumeration order with points naturally ordered;
/// larger sizes are sampled with `seed`. `None` only means the cap was too
/// small for the search.
pub fn witness_search(
    a: &OrderedEchelonedSpace,
    b: &OrderedEchelonedSpace,
    k: usize,
    size_cap: usize,
    seed: u64,
) -> Option<OrderedEchelonedSpace> {
    let accepts = |c: &OrderedEchelonedSpace| matches!(arrow_check(c, a, b, k), Ok(true));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for m in b.len().max(1)..=size_cap {
        if m <= MAX_EXHAUSTIVE_POINTS {
            let found = enumerate_spaces(m, false)
                .expect("size within the exhaustive cap")
                .map(OrderedEchelonedSpace::natural)
                .find(|c| accepts(c));
            if found.is_some() {
                return found;
            }
        } else {
            for _ in 0..SAMPLES_PER_SIZE {
                let levels = rng.gen_range(1..=pair_count(m) as u32);
                let c = OrderedEchelonedSpace::natural(random_space(&mut rng, m, levels));
                if accepts(&c) {
                    return Some(c);
                }
            }
        }
    }
    None
}

/// A complete graph whose edges are either absent or carry a colour.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeColouredGraph {
    pub v: usize,
    pub colours: Vec<String>,
    /// Per pair in `pair_index` order: `None` for a non-edge.
    pub chi: Vec<Option<usize>>,
}

impl EdgeColouredGraph {
    pub fn edge(&self, x: PointId, y: PointId) -> Option<&str> {
        self.chi[pair_index(x, y)].map(|c| self.colours[c].as_str())
    }
}

/// Erases colour position `c`: its edges become non-edges.
pub fn phi_translate(g: &ColouredGraph, c: usize) -> EdgeColouredGraph {
    let mut colours = g.colours().to_vec();
    colours.remove(c);
    let chi = g
        .edge_colours()
        .iter()
        .map(|&e| match e.cmp(&c) {
            std::cmp::Ordering::Less => Some(e),
            std::cmp::Ordering::Equal => None,
            std::cmp::Ordering::Greater => Some(e - 1),
        })
        .collect();
    EdgeColouredGraph { v: g.vertex_count(), colours, chi }
}

/// Inverse of [`phi_translate`]: non-edges get colour `name`, inserted at
/// position `c` of the colour list.
pub fn phi_restore(h: &EdgeColouredGraph, name: &str, c: usize) -> ColouredGraph {
    let mut colours = h.colours.clone();
    colours.insert(c, name.to_string());
    let chi = h.chi.iter().map(|e| e.map_or(c, |e| if e >= c { e + 1 } else { e })).collect();
    ColouredGraph::new(h.v, colours, chi).expect("colours stay distinct")
}
