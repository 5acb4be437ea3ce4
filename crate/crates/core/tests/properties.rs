use echelon_core::canon::{are_isomorphic, canonical_form};
use echelon_core::colgraph::{check_star, from_coloured_graph, to_coloured_graph, StarDemand};
use echelon_core::enumerate::enumerate_spaces;
use echelon_core::limit::{Demand, LimitModel, Mode, Requirement};
use echelon_core::metrize::{is_dull, metrize_dull};
use echelon_core::morphism::{compose, embedding_rank_map, is_embedding, is_homomorphism};
use echelon_core::random::random_extension;
use echelon_core::space::{pair_count, EchelonedSpace, PointId};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn space(max_points: usize, levels: u32) -> impl Strategy<Value = EchelonedSpace> {
    (1..=max_points).prop_flat_map(move |m| {
        prop::collection::vec(1..=levels, pair_count(m)).prop_map(move |w| EchelonedSpace::from_weights(m, &w).unwrap())
    })
}

fn space_and_perm(max_points: usize) -> impl Strategy<Value = (EchelonedSpace, Vec<PointId>)> {
    space(max_points, 4).prop_flat_map(|x| {
        let ids: Vec<PointId> = (0..x.len()).collect();
        (Just(x), Just(ids).prop_shuffle())
    })
}

fn permutations(n: usize) -> Vec<Vec<PointId>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for slot in 0..n {
            let mut q = p.clone();
            q.insert(slot, n - 1);
            out.push(q);
        }
    }
    out
}

fn brute_isomorphic(x: &EchelonedSpace, y: &EchelonedSpace) -> bool {
    x.len() == y.len() && permutations(x.len()).iter().any(|p| is_embedding(x, y, p))
}

#[test]
fn canonical_form_matches_brute_force_on_three_points() {
    let all: Vec<EchelonedSpace> = enumerate_spaces(3, false).unwrap().collect();
    for x in &all {
        for y in &all {
            let same = canonical_form(x).space == canonical_form(y).space;
            assert_eq!(same, brute_isomorphic(x, y), "{x:?} vs {y:?}");
            assert_eq!(are_isomorphic(x, y).is_some(), same);
        }
    }
}

proptest! {
    #[test]
    fn embeddings_are_homomorphisms(
        x in space(3, 3),
        y in space(3, 3),
        raw in prop::collection::vec(0usize..3, 3),
    ) {
        let h: Vec<PointId> = raw[..x.len()].iter().map(|&p| p % y.len()).collect();
        if is_embedding(&x, &y, &h) {
            prop_assert!(is_homomorphism(&x, &y, &h));
        }
    }

    #[test]
    fn ranks_ignore_monotone_reweighting(m in 1usize..7, w in prop::collection::vec(1u64..6, 15)) {
        let w = &w[..pair_count(m)];
        let x = EchelonedSpace::from_weights(m, w).unwrap();
        let scaled: Vec<u64> = w.iter().map(|v| 3 * v * v + 7).collect();
        prop_assert_eq!(&EchelonedSpace::from_weights(m, &scaled).unwrap(), &x);
        prop_assert_eq!(metrize_dull(&EchelonedSpace::from_weights(m, &scaled).unwrap()), metrize_dull(&x));
    }

    #[test]
    fn canonical_form_is_invariant((x, perm) in space_and_perm(6)) {
        let y = x.permuted(&perm);
        prop_assert_eq!(canonical_form(&x).space, canonical_form(&y).space);
        let iso = are_isomorphic(&x, &y).unwrap();
        prop_assert!(is_embedding(&x, &y, &iso));
    }

    #[test]
    fn embeddings_compose(seed in any::<u64>(), x in space(3, 3), e1 in 0usize..3, e2 in 0usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (y, f) = random_extension(&mut rng, &x, e1);
        let (z, g) = random_extension(&mut rng, &y, e2);
        let fg = compose(&f, &g);
        prop_assert!(is_embedding(&x, &z, &fg));
        let rf = embedding_rank_map(&x, &y, &f).unwrap();
        let rg = embedding_rank_map(&y, &z, &g).unwrap();
        prop_assert_eq!(embedding_rank_map(&x, &z, &fg).unwrap(), rf.then(&rg));
    }

    #[test]
    fn induced_subspaces_embed(x in space(6, 4), mask in 1u32..64) {
        let subset: Vec<PointId> = (0..x.len()).filter(|&i| mask >> i & 1 == 1).collect();
        prop_assume!(!subset.is_empty());
        let (sub, _) = x.induced_subspace(&subset).unwrap();
        prop_assert!(is_embedding(&sub, &x, &subset));
    }

    #[test]
    fn coloured_graph_roundtrip(x in space(7, 5)) {
        prop_assert_eq!(from_coloured_graph(&to_coloured_graph(&x)).unwrap(), x);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn metrization_roundtrips(x in space(8, 28)) {
        let d = metrize_dull(&x);
        prop_assert!(is_dull(d.metric()));
        prop_assert_eq!(EchelonedSpace::from_metric(d.metric()), x);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn limit_prefixes_are_valid_and_dull(seed in any::<u64>(), n in 1usize..24, random in any::<bool>()) {
        let mode = if random { Mode::Random { p: 0.5 } } else { Mode::Deterministic };
        let mut m = LimitModel::new(mode, seed).unwrap();
        let x = m.sample_prefix(n);
        prop_assert!(x.validate().is_ok());
        prop_assert!(is_dull(metrize_dull(&x).metric()));
    }

    #[test]
    fn star_demands_hold_after_ensure_witness(seed in any::<u64>(), picks in prop::collection::vec((0usize..8, 0usize..8), 1..4)) {
        let mut m = LimitModel::new(Mode::Deterministic, seed).unwrap();
        m.points(8);
        let labels = m.labels_on(&(0..8).collect::<Vec<_>>());
        // Disjoint sets, one realized label per set.
        let mut sets: Vec<Vec<PointId>> = Vec::new();
        let mut set_labels = Vec::new();
        let mut used = [false; 8];
        for (i, &(p, l)) in picks.iter().enumerate() {
            if used[p] {
                continue;
            }
            used[p] = true;
            let q = labels[(l + i) % labels.len()].clone();
            match set_labels.iter().position(|s| *s == q) {
                Some(k) => sets[k].push(p),
                None => {
                    sets.push(vec![p]);
                    set_labels.push(q);
                }
            }
        }
        let base = sets
            .iter()
            .zip(&set_labels)
            .flat_map(|(s, q)| s.iter().map(|&p| (p, Requirement::Exact(q.clone()))))
            .collect();
        let z = m.ensure_witness(&Demand { base }).unwrap();
        let prefix = m.sample_prefix(z + 1);
        let g = to_coloured_graph(&prefix);
        let all = m.labels_on(&(0..=z).collect::<Vec<_>>());
        let colours = set_labels.iter().map(|q| all.binary_search(q).unwrap()).collect();
        let found = check_star(&g, &StarDemand { sets, colours }).unwrap();
        prop_assert!(found.is_some());
    }
}
