//! Homomorphisms and embeddings between finite echeloned spaces.
//!
//! A point map `h: X → Y` is a homomorphism exactly when the induced map on
//! ranks, `η_X(x, x′) ↦ η_Y(h x, h x′)`, is well defined and monotone; it is an
//! embedding when `h` is injective and that rank map is a strict order
//! embedding. Both predicates return the rank map as a witness.

use crate::space::{EchelonedSpace, PointId, Rank, RankMap};

/// Collects the induced rank map of `h`, or `None` if two pairs of equal
/// rank in `x` land on different ranks of `y`.
fn induced_rank_map(x: &EchelonedSpace, y: &EchelonedSpace, h: &[PointId]) -> Option<RankMap> {
    if h.len() != x.len() || h.iter().any(|&p| p >= y.len()) {
        return None;
    }
    let mut map: Vec<Option<Rank>> = vec![None; x.rank_count() as usize + 1];
    map[0] = Some(0);
    for i in 0..x.len() {
        for j in 0..i {
            let r = x.rank(i, j) as usize;
            let t = y.rank(h[i], h[j]);
            match map[r] {
                None => map[r] = Some(t),
                Some(prev) if prev != t => return None,
                Some(_) => {}
            }
        }
    }
    // Dense ranks: every slot is filled.
    Some(RankMap(map.into_iter().map(|t| t.expect("ranks are dense")).collect()))
}

/// Witness rank map `ĥ` if `h` is a homomorphism (constant maps included).
pub fn homomorphism_rank_map(x: &EchelonedSpace, y: &EchelonedSpace, h: &[PointId]) -> Option<RankMap> {
    induced_rank_map(x, y, h).filter(RankMap::is_monotone)
}

pub fn is_homomorphism(x: &EchelonedSpace, y: &EchelonedSpace, h: &[PointId]) -> bool {
    homomorphism_rank_map(x, y, h).is_some()
}

/// Witness rank map `ĥ` if `h` is an embedding.
pub fn embedding_rank_map(x: &EchelonedSpace, y: &EchelonedSpace, h: &[PointId]) -> Option<RankMap> {
    if !is_injective(h, y.len()) {
        return None;
    }
    induced_rank_map(x, y, h).filter(RankMap::is_order_embedding)
}

pub fn is_embedding(x: &EchelonedSpace, y: &EchelonedSpace, h: &[PointId]) -> bool {
    embedding_rank_map(x, y, h).is_some()
}

pub fn is_injective(h: &[PointId], codomain: usize) -> bool {
    let mut seen = vec![false; codomain];
    h.iter().all(|&p| p < codomain && !std::mem::replace(&mut seen[p], true))
}

/// `g ∘ h` as point maps.
pub fn compose(h: &[PointId], g: &[PointId]) -> Vec<PointId> {
    h.iter().map(|&p| g[p]).collect()
}

/// All embeddings `X ↪ Y` with their rank maps, in lexicographic order of
/// the point maps.
pub fn enumerate_embeddings(x: &EchelonedSpace, y: &EchelonedSpace) -> Vec<(Vec<PointId>, RankMap)> {
    let mut out = Vec::new();
    if x.len() > y.len() {
        return out;
    }
    let mut search = EmbeddingSearch {
        x,
        y,
        image: Vec::with_capacity(x.len()),
        used: vec![false; y.len()],
        rank_map: vec![None; x.rank_count() as usize + 1],
        out: &mut out,
    };
    search.rank_map[0] = Some(0);
    search.extend();
    out
}

struct EmbeddingSearch<'a> {
    x: &'a EchelonedSpace,
    y: &'a EchelonedSpace,
    image: Vec<PointId>,
    used: Vec<bool>,
    rank_map: Vec<Option<Rank>>,
    out: &'a mut Vec<(Vec<PointId>, RankMap)>,
}

impl EmbeddingSearch<'_> {
    fn extend(&mut self) {
        let next = self.image.len();
        if next == self.x.len() {
            let map = self.rank_map.iter().map(|t| t.expect("all ranks fixed")).collect();
            self.out.push((self.image.clone(), RankMap(map)));
            return;
        }
        for target in 0..self.y.len() {
            if self.used[target] {
                continue;
            }
            let mut fresh: Vec<usize> = Vec::new();
            let ok = (0..next).all(|j| {
                let r = self.x.rank(next, j) as usize;
                let t = self.y.rank(target, self.image[j]);
                match self.rank_map[r] {
                    Some(prev) => prev == t,
                    None => {
                        if self.order_compatible(r, t) {
                            self.rank_map[r] = Some(t);
                            fresh.push(r);
                            true
                        } else {
                            false
                        }
                    }
                }
            });
            if ok {
                self.used[target] = true;
                self.image.push(target);
                self.extend();
                self.image.pop();
                self.used[target] = false;
            }
            for r in fresh {
                self.rank_map[r] = None;
            }
        }
    }

    fn order_compatible(&self, r: usize, t: Rank) -> bool {
        self.rank_map.iter().enumerate().all(|(r2, t2)| match t2 {
            None => true,
            Some(t2) => r2.cmp(&r) == t2.cmp(&t),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::EchelonedSpace;

    fn lipschitz_pair() -> (EchelonedSpace, EchelonedSpace) {
        // Pairs in order (1,0), (2,0), (2,1).
        let m = EchelonedSpace::from_weights(3, &[2, 4, 4]).unwrap();
        let n = EchelonedSpace::from_weights(3, &[2, 1, 1]).unwrap();
        (m, n)
    }

    #[test]
    fn identity_and_constant_maps() {
        let (m, _) = lipschitz_pair();
        assert!(is_homomorphism(&m, &m, &[0, 1, 2]));
        assert!(is_embedding(&m, &m, &[0, 1, 2]));
        assert_eq!(embedding_rank_map(&m, &m, &[0, 1, 2]), Some(RankMap::identity(2)));
        assert!(is_homomorphism(&m, &m, &[1, 1, 1]));
        assert_eq!(homomorphism_rank_map(&m, &m, &[1, 1, 1]), Some(RankMap(vec![0, 0, 0])));
        assert!(!is_embedding(&m, &m, &[1, 1, 1]));
    }

    #[test]
    fn lipschitz_map_is_not_a_homomorphism() {
        let (m, n) = lipschitz_pair();
        assert!(!is_homomorphism(&m, &n, &[0, 1, 2]));
    }

    #[test]
    fn partial_collapse_must_stay_monotone() {
        // Collapsing the rank-1 pair is fine, collapsing a rank-2 pair is not.
        let (m, _) = lipschitz_pair();
        let two = EchelonedSpace::uniform(2);
        assert!(is_homomorphism(&m, &two, &[0, 0, 1]));
        assert!(!is_homomorphism(&m, &two, &[0, 1, 0]));
    }

    #[test]
    fn malformed_maps_are_rejected() {
        let (m, _) = lipschitz_pair();
        assert!(!is_homomorphism(&m, &m, &[0, 1]));
        assert!(!is_homomorphism(&m, &m, &[0, 1, 3]));
    }

    #[test]
    fn embedding_counts() {
        let (m, _) = lipschitz_pair();
        let one = EchelonedSpace::point();
        assert_eq!(enumerate_embeddings(&one, &m).len(), 3);
        let two = EchelonedSpace::uniform(2);
        assert_eq!(enumerate_embeddings(&two, &two).len(), 2);
        let embs = enumerate_embeddings(&two, &m);
        assert_eq!(embs.len(), 6);
        let maps: Vec<_> = embs.iter().map(|(h, _)| h.clone()).collect();
        let mut sorted = maps.clone();
        sorted.sort();
        assert_eq!(maps, sorted);
        assert!(enumerate_embeddings(&m, &two).is_empty());
    }

    #[test]
    fn enumeration_matches_brute_force() {
        let (m, n) = lipschitz_pair();
        let spaces = [m, n, EchelonedSpace::uniform(3), EchelonedSpace::from_weights(4, &[1, 2, 3, 3, 2, 1]).unwrap()];
        for x in &spaces {
            for y in &spaces {
                let found: Vec<_> = enumerate_embeddings(x, y).into_iter().map(|(h, _)| h).collect();
                let mut brute = Vec::new();
                let total = y.len().pow(x.len() as u32);
                for code in 0..total {
                    let mut c = code;
                    let mut h = vec![0; x.len()];
                    for slot in h.iter_mut().rev() {
                        *slot = c % y.len();
                        c /= y.len();
                    }
                    if is_embedding(x, y, &h) {
                        brute.push(h);
                    }
                }
                assert_eq!(found, brute);
            }
        }
    }
}
