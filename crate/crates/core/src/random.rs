//! Seeded random finite echeloned spaces.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::space::{pair_count, EchelonedSpace, PointId};

/// A space on `m` points whose pair weights are uniform in `1..=levels`,
/// so it has at most `levels` ranks.
pub fn random_space<R: Rng + ?Sized>(rng: &mut R, m: usize, levels: u32) -> EchelonedSpace {
    assert!(levels >= 1);
    let w: Vec<u32> = (0..pair_count(m)).map(|_| rng.gen_range(1..=levels)).collect();
    EchelonedSpace::from_weights(m, &w).expect("total integer weights")
}

/// A random superspace of `a` with `extra` new points, returned together
/// with the embedding of `a`. New pairs may tie with or fall between the
/// ranks of `a`, and points are shuffled so the embedding is not an
/// initial segment.
pub fn random_extension<R: Rng + ?Sized>(
    rng: &mut R,
    a: &EchelonedSpace,
    extra: usize,
) -> (EchelonedSpace, Vec<PointId>) {
    let m = a.len() + extra;
    // Old rank r sits at weight 2r; new pairs pick any weight up to just
    // above the old maximum.
    let top = 2 * a.rank_count() + 1;
    let raw = EchelonedSpace::from_weight_fn(m, |i, j| {
        Some(if i < a.len() { 2 * a.rank(i, j) } else { rng.gen_range(1..=top) })
    })
    .expect("total integer weights");
    let mut perm: Vec<PointId> = (0..m).collect();
    perm.shuffle(rng);
    (raw.permuted(&perm), perm[..a.len()].to_vec())
}
