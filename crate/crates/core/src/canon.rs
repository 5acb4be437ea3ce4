//! Canonical labelling of echeloned spaces.
//!
//! Colour refinement on the rank-labelled complete graph, followed by an
//! individualization/refinement search. The canonical table is the
//! lexicographically least relabelling reached at a leaf; automorphisms
//! found along the way prune sibling branches.

use crate::space::{EchelonedSpace, PointId, Rank};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalForm {
    pub space: EchelonedSpace,
    /// `perm[old] = new`.
    pub perm: Vec<PointId>,
}

pub fn canonical_form(x: &EchelonedSpace) -> CanonicalForm {
    let m = x.len();
    let mut search = Search { x, best: None, automorphisms: Vec::new() };
    let colours = refine(x, vec![0; m]);
    search.descend(colours, &mut Vec::new());
    let (space, perm) = search.best.expect("search reaches at least one leaf");
    CanonicalForm { space, perm }
}

/// An isomorphism `x → y` (as `map[x_point] = y_point`) if one exists.
pub fn are_isomorphic(x: &EchelonedSpace, y: &EchelonedSpace) -> Option<Vec<PointId>> {
    if x.len() != y.len() || x.rank_count() != y.rank_count() {
        return None;
    }
    if rank_counts(x) != rank_counts(y) {
        return None;
    }
    let cx = canonical_form(x);
    let cy = canonical_form(y);
    if cx.space != cy.space {
        return None;
    }
    let mut inv = vec![0; y.len()];
    for (old, &new) in cy.perm.iter().enumerate() {
        inv[new] = old;
    }
    Some(cx.perm.iter().map(|&c| inv[c]).collect())
}

/// Pairs per rank, a cheap isomorphism invariant.
fn rank_counts(x: &EchelonedSpace) -> Vec<usize> {
    let mut counts = vec![0; x.rank_count() as usize + 1];
    for &r in x.pair_ranks() {
        counts[r as usize] += 1;
    }
    counts
}

/// Own colour, sorted `(rank, colour)` of all other points, point id.
type Signature = (u32, Vec<(Rank, u32)>, PointId);

/// Iterated colour refinement. Colours come back dense in `0..k`, numbered
/// by the sorted order of their signatures, so the result is equivariant.
fn refine(x: &EchelonedSpace, mut colours: Vec<u32>) -> Vec<u32> {
    let m = x.len();
    let mut classes = count_classes(&colours);
    loop {
        let mut sigs: Vec<Signature> = (0..m)
            .map(|v| {
                let mut nb: Vec<(Rank, u32)> = (0..m).filter(|&u| u != v).map(|u| (x.rank(u, v), colours[u])).collect();
                nb.sort_unstable();
                (colours[v], nb, v)
            })
            .collect();
        sigs.sort_unstable();
        let mut next = vec![0u32; m];
        let mut c = 0;
        for k in 0..m {
            if k > 0 && (sigs[k].0 != sigs[k - 1].0 || sigs[k].1 != sigs[k - 1].1) {
                c += 1;
            }
            next[sigs[k].2] = c;
        }
        colours = next;
        let now = c as usize + 1;
        if now == classes {
            return colours;
        }
        classes = now;
    }
}

fn count_classes(colours: &[u32]) -> usize {
    let mut c = colours.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

struct Search<'a> {
    x: &'a EchelonedSpace,
    best: Option<(EchelonedSpace, Vec<PointId>)>,
    automorphisms: Vec<Vec<PointId>>,
}

impl Search<'_> {
    fn descend(&mut self, colours: Vec<u32>, path: &mut Vec<PointId>) {
        let m = colours.len();
        let Some(cell) = first_nonsingleton_cell(&colours) else {
            self.leaf(colours.iter().map(|&c| c as usize).collect());
            return;
        };
        let members: Vec<PointId> = (0..m).filter(|&v| colours[v] == cell).collect();
        let mut tried: Vec<PointId> = Vec::new();
        for &v in &members {
            if !tried.is_empty() && self.in_tried_orbit(v, &tried, path) {
                continue;
            }
            tried.push(v);
            let individualized = (0..m)
                .map(|u| {
                    let c = colours[u] * 2;
                    if colours[u] == cell && u != v {
                        c + 1
                    } else {
                        c
                    }
                })
                .collect();
            path.push(v);
            self.descend(refine(self.x, individualized), path);
            path.pop();
        }
    }

    fn leaf(&mut self, perm: Vec<PointId>) {
        let candidate = self.x.permuted(&perm);
        match &self.best {
            None => self.best = Some((candidate, perm)),
            Some((best, best_perm)) => {
                if candidate < *best {
                    self.best = Some((candidate, perm));
                } else if candidate == *best {
                    let mut inv = vec![0; perm.len()];
                    for (old, &new) in best_perm.iter().enumerate() {
                        inv[new] = old;
                    }
                    let auto: Vec<PointId> = perm.iter().map(|&n| inv[n]).collect();
                    if auto.iter().enumerate().any(|(i, &j)| i != j) {
                        self.automorphisms.push(auto);
                    }
                }
            }
        }
    }

    /// Whether `v` shares an orbit with an already tried vertex under the
    /// stored automorphisms that fix `path` pointwise.
    fn in_tried_orbit(&self, v: PointId, tried: &[PointId], path: &[PointId]) -> bool {
        let m = self.x.len();
        let mut parent: Vec<PointId> = (0..m).collect();
        fn find(parent: &mut [PointId], mut a: PointId) -> PointId {
            while parent[a] != a {
                parent[a] = parent[parent[a]];
                a = parent[a];
            }
            a
        }
        for auto in &self.automorphisms {
            if path.iter().all(|&p| auto[p] == p) {
                for (a, &b) in auto.iter().enumerate() {
                    let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                    parent[ra] = rb;
                }
            }
        }
        let rv = find(&mut parent, v);
        tried.iter().any(|&t| find(&mut parent, t) == rv)
    }
}

fn first_nonsingleton_cell(colours: &[u32]) -> Option<u32> {
    let mut counts = vec![0usize; colours.len()];
    for &c in colours {
        counts[c as usize] += 1;
    }
    counts.iter().position(|&n| n > 1).map(|c| c as u32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morphism::is_embedding;

    fn all_perms(m: usize) -> Vec<Vec<PointId>> {
        if m == 0 {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for p in all_perms(m - 1) {
            for pos in 0..m {
                let mut q: Vec<PointId> = p.clone();
                q.insert(pos, m - 1);
                out.push(q);
            }
        }
        out
    }

    #[test]
    fn invariant_under_relabelling() {
        let x = EchelonedSpace::from_weights(4, &[1, 2, 3, 3, 2, 1]).unwrap();
        let c = canonical_form(&x);
        assert_eq!(x.permuted(&c.perm), c.space);
        for p in all_perms(4) {
            assert_eq!(canonical_form(&x.permuted(&p)).space, c.space);
        }
    }

    #[test]
    fn distinguishes_three_point_types() {
        let a = EchelonedSpace::from_weights(3, &[1, 2, 2]).unwrap();
        let b = EchelonedSpace::from_weights(3, &[1, 1, 2]).unwrap();
        assert_ne!(canonical_form(&a).space, canonical_form(&b).space);
        assert!(are_isomorphic(&a, &b).is_none());
    }

    #[test]
    fn isomorphism_is_certified() {
        let x = EchelonedSpace::from_weights(5, &[1, 2, 3, 4, 5, 1, 2, 3, 4, 5]).unwrap();
        let y = x.permuted(&[3, 1, 4, 0, 2]);
        let iso = are_isomorphic(&x, &y).unwrap();
        assert!(is_embedding(&x, &y, &iso));
        let mut inv = vec![0; 5];
        for (a, &b) in iso.iter().enumerate() {
            inv[b] = a;
        }
        assert!(is_embedding(&y, &x, &inv));
        assert!(are_isomorphic(&x, &EchelonedSpace::uniform(5)).is_none());
        assert!(are_isomorphic(&x, &EchelonedSpace::uniform(4)).is_none());
    }

    #[test]
    fn highly_symmetric_spaces() {
        // Uniform spaces and a regular two-rank pattern (5-cycle vs complement).
        for m in 1..8 {
            let u = EchelonedSpace::uniform(m);
            assert_eq!(canonical_form(&u).space, u);
        }
        let cycle = EchelonedSpace::from_weight_fn(5, |i, j| {
            Some(if (i + 5 - j) % 5 == 1 || (i + 5 - j) % 5 == 4 { 1 } else { 2 })
        })
        .unwrap();
        let shuffled = cycle.permuted(&[2, 4, 1, 3, 0]);
        assert!(are_isomorphic(&cycle, &shuffled).is_some());
    }
}
