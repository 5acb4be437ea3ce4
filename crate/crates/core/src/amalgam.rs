//! Strong amalgamation and joint embedding.
//!
//! The echelonings of `B1` and `B2` are first amalgamated as finite chains
//! over that of `A`; the carrier of the amalgam is `B1` followed by the
//! points of `B2` outside `f2[A]`, and every pair that straddles the two
//! sides gets a fresh top rank.

use thiserror::Error;

use crate::morphism::embedding_rank_map;
use crate::space::{EchelonedSpace, PointId, RankMap};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AmalgamError {
    #[error("map f{0} is not an embedding")]
    NotEmbedding(u8),
    #[error("chain map h{0} is not an order embedding fixing the minimum")]
    NotChainEmbedding(u8),
}

impl AmalgamError {
    pub fn code(&self) -> &'static str {
        match self {
            AmalgamError::NotEmbedding(_) => "E_NOT_EMBEDDING",
            AmalgamError::NotChainEmbedding(_) => "E_NOT_CHAIN_EMBEDDING",
        }
    }
}

/// The amalgamated chain `D = {0, …, top}` with the legs of `E(B1)` and
/// `E(B2)`; `top` is fresh, above both images.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainAmalgam {
    pub size: usize,
    pub j1: Vec<usize>,
    pub j2: Vec<usize>,
    pub top: usize,
}

/// Amalgamates chains `0..=n1` and `0..=n2` over `0..=na` along order
/// embeddings `h1`, `h2`. Inside each gap between consecutive images of the
/// base chain, the new elements of the first chain come before those of the
/// second.
pub fn chain_amalgam(na: u32, n1: u32, n2: u32, h1: &RankMap, h2: &RankMap) -> Result<ChainAmalgam, AmalgamError> {
    let check = |h: &RankMap, n: u32, leg: u8| {
        let ok = h.0.len() == na as usize + 1 && h.is_order_embedding() && h.0.last().is_none_or(|&t| t <= n);
        if ok {
            Ok(())
        } else {
            Err(AmalgamError::NotChainEmbedding(leg))
        }
    };
    check(h1, n1, 1)?;
    check(h2, n2, 2)?;
    let mut j1 = vec![usize::MAX; n1 as usize + 1];
    let mut j2 = vec![usize::MAX; n2 as usize + 1];
    let mut next = 0;
    for a in 0..=na as usize {
        j1[h1.0[a] as usize] = next;
        j2[h2.0[a] as usize] = next;
        next += 1;
        let end1 = h1.0.get(a + 1).map_or(n1 + 1, |&t| t);
        let end2 = h2.0.get(a + 1).map_or(n2 + 1, |&t| t);
        for r in h1.0[a] + 1..end1 {
            j1[r as usize] = next;
            next += 1;
        }
        for r in h2.0[a] + 1..end2 {
            j2[r as usize] = next;
            next += 1;
        }
    }
    Ok(ChainAmalgam { size: next + 1, j1, j2, top: next })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AmalgamResult {
    pub c: EchelonedSpace,
    pub g1: Vec<PointId>,
    pub g2: Vec<PointId>,
    pub chain: ChainAmalgam,
}

pub fn amalgamate(
    a: &EchelonedSpace,
    b1: &EchelonedSpace,
    b2: &EchelonedSpace,
    f1: &[PointId],
    f2: &[PointId],
) -> Result<AmalgamResult, AmalgamError> {
    let h1 = embedding_rank_map(a, b1, f1).ok_or(AmalgamError::NotEmbedding(1))?;
    let h2 = embedding_rank_map(a, b2, f2).ok_or(AmalgamError::NotEmbedding(2))?;
    let chain = chain_amalgam(a.rank_count(), b1.rank_count(), b2.rank_count(), &h1, &h2)?;

    let g1: Vec<PointId> = (0..b1.len()).collect();
    let mut g2 = vec![usize::MAX; b2.len()];
    for (i, &p) in f2.iter().enumerate() {
        g2[p] = f1[i];
    }
    let mut next = b1.len();
    for slot in g2.iter_mut().filter(|s| **s == usize::MAX) {
        *slot = next;
        next += 1;
    }
    // Inverse of g2 on C, for looking up B2 ranks.
    let mut from_b2 = vec![None; next];
    for (p, &q) in g2.iter().enumerate() {
        from_b2[q] = Some(p);
    }
    let c = EchelonedSpace::from_weight_fn(next, |x, y| {
        Some(if x < b1.len() && y < b1.len() {
            chain.j1[b1.rank(x, y) as usize]
        } else {
            match (from_b2[x], from_b2[y]) {
                (Some(p), Some(q)) => chain.j2[b2.rank(p, q) as usize],
                _ => chain.top,
            }
        })
    })
    .expect("chain positions are total");
    Ok(AmalgamResult { c, g1, g2, chain })
}

/// Joint embedding: amalgamation over the one-point space sent to point 0
/// of each side.
pub fn jep(b1: &EchelonedSpace, b2: &EchelonedSpace) -> AmalgamResult {
    amalgamate(&EchelonedSpace::point(), b1, b2, &[0], &[0]).expect("a point embeds anywhere")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morphism::{compose, is_embedding};
    use crate::random::{random_extension, random_space};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn check_invariants(a: &EchelonedSpace, b1: &EchelonedSpace, b2: &EchelonedSpace, f1: &[usize], f2: &[usize]) {
        let r = amalgamate(a, b1, b2, f1, f2).unwrap();
        assert!(r.c.validate().is_ok());
        assert_eq!(compose(f1, &r.g1), compose(f2, &r.g2));
        assert!(is_embedding(b1, &r.c, &r.g1));
        assert!(is_embedding(b2, &r.c, &r.g2));
        let img1: std::collections::BTreeSet<_> = r.g1.iter().copied().collect();
        let img2: std::collections::BTreeSet<_> = r.g2.iter().copied().collect();
        let base: std::collections::BTreeSet<_> = compose(f1, &r.g1).into_iter().collect();
        assert_eq!(img1.intersection(&img2).copied().collect::<std::collections::BTreeSet<_>>(), base);
    }

    #[test]
    fn identical_chains_gain_a_top() {
        let id = RankMap::identity(2);
        let d = chain_amalgam(2, 2, 2, &id, &id).unwrap();
        assert_eq!(d, ChainAmalgam { size: 4, j1: vec![0, 1, 2], j2: vec![0, 1, 2], top: 3 });
    }

    #[test]
    fn b1_first_in_gaps() {
        let d = chain_amalgam(0, 1, 1, &RankMap(vec![0]), &RankMap(vec![0])).unwrap();
        assert_eq!(d.j1, [0, 1]);
        assert_eq!(d.j2, [0, 2]);
        assert_eq!(d.top, 3);
        assert!(chain_amalgam(1, 1, 1, &RankMap(vec![1, 1]), &RankMap::identity(1)).is_err());
        assert!(chain_amalgam(1, 1, 1, &RankMap::identity(1), &RankMap(vec![0, 2])).is_err());
    }

    #[test]
    fn chain_legs_commute() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let na = rng.gen_range(0..3u32);
            let pick = |rng: &mut ChaCha8Rng, n: u32| {
                let mut v: Vec<u32> =
                    rand::seq::index::sample(rng, n as usize, na as usize).into_iter().map(|x| x as u32 + 1).collect();
                v.sort();
                v.insert(0, 0);
                RankMap(v)
            };
            let n1 = na + rng.gen_range(0..3);
            let n2 = na + rng.gen_range(0..3);
            let (h1, h2) = (pick(&mut rng, n1), pick(&mut rng, n2));
            let d = chain_amalgam(na, n1, n2, &h1, &h2).unwrap();
            for a in 0..=na as usize {
                assert_eq!(d.j1[h1.0[a] as usize], d.j2[h2.0[a] as usize]);
            }
            assert!(d.j1.windows(2).all(|w| w[0] < w[1]));
            assert!(d.j2.windows(2).all(|w| w[0] < w[1]));
            assert!(d.j1.iter().chain(&d.j2).all(|&x| x < d.top));
        }
    }

    #[test]
    fn point_over_point() {
        let p = EchelonedSpace::point();
        let r = amalgamate(&p, &p, &p, &[0], &[0]).unwrap();
        assert_eq!(r.c, p);
        assert_eq!(jep(&p, &p).c, p);
    }

    #[test]
    fn two_edges_over_a_point() {
        let a = EchelonedSpace::point();
        let b = EchelonedSpace::uniform(2);
        let r = amalgamate(&a, &b, &b, &[0], &[0]).unwrap();
        // a = 0, b = 1, c = 2.
        assert_eq!(r.c.rank(0, 1), 1);
        assert_eq!(r.c.rank(0, 2), 2);
        assert_eq!(r.c.rank(1, 2), 3);
        assert_eq!(r.g2, [0, 2]);
        check_invariants(&a, &b, &b, &[0], &[0]);
    }

    #[test]
    fn jep_of_two_edges() {
        let b = EchelonedSpace::uniform(2);
        let r = jep(&b, &b);
        assert_eq!(r.c.len(), 3);
        assert!(is_embedding(&b, &r.c, &r.g1) && is_embedding(&b, &r.c, &r.g2));
    }

    #[test]
    fn rejects_non_embeddings() {
        let a = EchelonedSpace::uniform(2);
        let b = EchelonedSpace::uniform(3);
        assert_eq!(amalgamate(&a, &b, &b, &[0, 0], &[0, 1]), Err(AmalgamError::NotEmbedding(1)));
        assert_eq!(amalgamate(&a, &b, &b, &[0, 1], &[2]), Err(AmalgamError::NotEmbedding(2)));
    }

    #[test]
    fn random_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..200 {
            let m = rng.gen_range(1..=3);
            let a = random_space(&mut rng, m, 3);
            let (e1, e2) = (rng.gen_range(0..=5 - m), rng.gen_range(0..=5 - m));
            let (b1, f1) = random_extension(&mut rng, &a, e1);
            let (b2, f2) = random_extension(&mut rng, &a, e2);
            check_invariants(&a, &b1, &b2, &f1, &f2);
        }
    }
}
