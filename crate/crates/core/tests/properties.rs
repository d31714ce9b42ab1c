use proptest::prelude::*;
use proptest::sample::select;

use bzquilt::bzdiagram::Sl3Piece;
use bzquilt::gtpattern::enumerate_patterns;
use bzquilt::liealg::{invariant_dim, DominantWeight, WeightVector};
use bzquilt::presentation::Presentation;
use bzquilt::quilt::{Quilt, QuiltWeighting};
use bzquilt::tree::Tree;

fn tree_strategy(min: usize, max: usize) -> impl Strategy<Value = Tree> {
    (min..=max).prop_flat_map(|n| select(Tree::all_labelled(n).unwrap()))
}

fn weight_vector(n: usize, max: u32) -> impl Strategy<Value = WeightVector> {
    proptest::collection::vec((0..=max, 0..=max), n).prop_map(|v| {
        WeightVector::new(v.into_iter().map(|(a, b)| DominantWeight::new(vec![a, b])).collect())
            .unwrap()
    })
}

fn sum_of(p: &Presentation, idx: &[usize]) -> QuiltWeighting {
    idx.iter()
        .fold(p.quilt().zero(), |acc, &i| acc.add(&p.generators()[i].weighting))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn five_leaf_multiplicities_match_oracle(
        t in tree_strategy(5, 5),
        u in tree_strategy(5, 5),
        lam in weight_vector(5, 1),
    ) {
        let oracle = invariant_dim(&lam).unwrap();
        prop_assert_eq!(Quilt::new(t, 3).unwrap().count_fiber(&lam).unwrap(), oracle);
        prop_assert_eq!(Quilt::new(u, 3).unwrap().count_fiber(&lam).unwrap(), oracle);
    }

    #[test]
    fn boundary_and_f_are_additive(
        t in tree_strategy(3, 6),
        picks in proptest::collection::vec(any::<proptest::sample::Index>(), 1..5),
    ) {
        let p = Presentation::new(t).unwrap();
        let q = p.quilt();
        let idx: Vec<usize> = picks.iter().map(|i| i.index(p.generators().len())).collect();
        let w = sum_of(&p, &idx);
        prop_assert!(q.cone().contains(w.values()));
        let mut flat = vec![0i64; q.tree().leaf_count() * 2];
        let mut f = 0;
        for &i in &idx {
            let g = &p.generators()[i].weighting;
            for (a, b) in flat.iter_mut().zip(q.boundary_map(g).flatten()) {
                *a += b;
            }
            f += q.omega2_functional(g).unwrap();
        }
        prop_assert_eq!(q.boundary_map(&w).flatten(), flat);
        prop_assert_eq!(q.omega2_functional(&w).unwrap(), f);
        // F vanishes on a sum only if it vanishes on every summand.
        if f == 0 {
            prop_assert!(idx.iter().all(|&i| p.omega2(&p.generators()[i]) == 0));
        }
        for e in q.tree().internal_edges() {
            let (a, b) = q.glue_duality_check(&w, e).unwrap();
            prop_assert_eq!(a.dual(), b);
        }
    }

    #[test]
    fn restrictions_are_pieces_or_zero(t in tree_strategy(3, 6), k in any::<proptest::sample::Index>()) {
        let p = Presentation::new(t).unwrap();
        let q = p.quilt();
        let g = &p.generators()[k.index(p.generators().len())];
        for v in q.tree().trinodes() {
            let bz = q.restrict_to_trinode(&g.weighting, v).unwrap();
            let in_span = g.subtree.degree(q.tree(), v) >= 2;
            if in_span {
                prop_assert!(Sl3Piece::classify(q.diagram(), &bz).is_some());
            } else {
                prop_assert!(bz.is_zero());
            }
        }
        prop_assert_eq!(q.restrict_to_subtree(&g.weighting, &g.subtree), g.weighting.clone());
    }

    #[test]
    fn disjoint_supports_split(t in tree_strategy(4, 6), k in any::<proptest::sample::Index>()) {
        let p = Presentation::new(t).unwrap();
        let q = p.quilt();
        let gens = p.generators();
        let touches = |a: usize, b: usize| {
            q.tree().trinodes().any(|v| {
                gens[a].subtree.degree(q.tree(), v) > 0 && gens[b].subtree.degree(q.tree(), v) > 0
            })
        };
        let pairs: Vec<(usize, usize)> = (0..gens.len())
            .flat_map(|a| (a + 1..gens.len()).map(move |b| (a, b)))
            .filter(|&(a, b)| !touches(a, b))
            .collect();
        if pairs.is_empty() {
            return Ok(());
        }
        let (a, b) = pairs[k.index(pairs.len())];
        let (ga, gb) = (&gens[a], &gens[b]);
        let w = ga.weighting.add(&gb.weighting);
        prop_assert_eq!(q.support(&w), ga.subtree.edge_mask() | gb.subtree.edge_mask());
        prop_assert_eq!(
            q.restrict_to_subtree(&w, &ga.subtree).add(&q.restrict_to_subtree(&w, &gb.subtree)),
            w
        );
    }

    #[test]
    fn enumerated_points_satisfy_constraints(t in tree_strategy(3, 5), d in 0i64..4) {
        let q = Quilt::new(t, 3).unwrap();
        let cone = q.cone();
        for x in cone.enumerate_at_degree(d).unwrap() {
            prop_assert!(cone.contains(&x));
            prop_assert_eq!(cone.degree(&x), d);
        }
        prop_assert_eq!(cone.count_fiber(&q.boundary_map_rows(), &vec![0; q.boundary_map_rows().len()]).unwrap(), 1);
    }

    #[test]
    fn pattern_sums_are_patterns(n in 3usize..8, l1 in 0u32..3, l2 in 0u32..3, i in any::<proptest::sample::Index>(), j in any::<proptest::sample::Index>()) {
        let a = enumerate_patterns(n, l1).unwrap();
        let b = enumerate_patterns(n, l2).unwrap();
        let s = a[i.index(a.len())].add(&b[j.index(b.len())]);
        prop_assert!(enumerate_patterns(n, l1 + l2).unwrap().contains(&s));
    }
}

#[test]
fn relabelling_preserves_counts() {
    // Swapping leaf labels permutes the boundary weights accordingly.
    let q = Quilt::new("((1,2),(3,4))".parse().unwrap(), 3).unwrap();
    let r = Quilt::new("((2,1),(4,3))".parse().unwrap(), 3).unwrap();
    let lam: WeightVector = "1,0;0,1;1,1;1,1".parse().unwrap();
    let swapped: WeightVector = "0,1;1,0;1,1;1,1".parse().unwrap();
    assert_eq!(q.count_fiber(&lam).unwrap(), r.count_fiber(&swapped).unwrap());
}
