//! Randomized invariant checks: polynomial algebra round trips, then the
//! counting identities on small random multigraphs.

use flowpoly::counting::{modular_flow_poly, tutte, tutte_subset_sum, ModularMethod};
use flowpoly::flowspace::{count_modular_nowhere_zero, enumerate_modular_flows, is_flow, zero_one_flows};
use flowpoly::multigraph::MultiGraph;
use flowpoly::orientation::{eulerian_equivalent, Orientation};
use flowpoly::polyalg::{lagrange_interpolate, rational_int, RationalPoly};
use flowpoly::Caps;

use num::bigint::BigInt;
use proptest::prelude::*;

fn poly_strategy() -> impl Strategy<Value = RationalPoly> {
    proptest::collection::vec(-9i64..=9, 0..=5).prop_map(|c| RationalPoly::from_ints(&c))
}

fn graph_strategy() -> impl Strategy<Value = MultiGraph> {
    (2usize..=4).prop_flat_map(|nv| {
        proptest::collection::vec((0..nv, 0..nv), 1..=5).prop_map(move |edges| {
            let vertices = (0..nv).map(|i| format!("v{i}")).collect();
            MultiGraph::new(vertices, edges).unwrap()
        })
    })
}

fn graph_and_bits() -> impl Strategy<Value = (MultiGraph, Vec<bool>)> {
    graph_strategy().prop_flat_map(|g| {
        let m = g.edge_count();
        proptest::collection::vec(any::<bool>(), m..=m).prop_map(move |bits| (g.clone(), bits))
    })
}

proptest! {
    #[test]
    fn interpolation_recovers_integer_polynomials(p in poly_strategy()) {
        let d = p.degree().unwrap_or(0);
        let samples: Vec<(i64, BigInt)> = (0..=d as i64)
            .map(|x| (x, p.evaluate_int(x).to_integer()))
            .collect();
        prop_assert_eq!(lagrange_interpolate(&samples).unwrap(), p);
    }

    #[test]
    fn reciprocity_transform_is_an_involution(p in poly_strategy(), n in 0usize..=6) {
        prop_assert_eq!(p.reciprocity_transform(n).reciprocity_transform(n), p);
    }

    #[test]
    fn affine_composition_matches_evaluation(
        p in poly_strategy(),
        a in -4i64..=4,
        b in -4i64..=4,
        x in -4i64..=4,
    ) {
        let (a, b) = (rational_int(a), rational_int(b));
        let composed = p.compose_affine(&a, &b);
        let point = rational_int(x);
        // compose_affine(a, b) is p(a + b t).
        let target = a + b * point.clone();
        prop_assert_eq!(composed.evaluate(&point), p.evaluate(&target));
    }

    #[test]
    fn multiplication_distributes_over_addition(
        p in poly_strategy(),
        q in poly_strategy(),
        r in poly_strategy(),
    ) {
        prop_assert_eq!(p.mul(&q.add(&r)), p.mul(&q).add(&p.mul(&r)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_and_cycle_rank_partition_the_edges(g in graph_strategy()) {
        prop_assert_eq!(g.rank() + g.cycle_rank(), g.edge_count());
    }

    #[test]
    fn contraction_and_deletion_move_ranks_as_expected(g in graph_strategy(), e_pick in any::<prop::sample::Index>()) {
        let e = e_pick.index(g.edge_count());
        let s = flowpoly::multigraph::EdgeSubset::from_indices(g.edge_count(), &[e]);
        if g.is_loop(e) {
            prop_assert_eq!(g.delete(&s).cycle_rank(), g.cycle_rank() - 1);
        } else {
            // Contracting a non-loop edge preserves the cycle rank.
            prop_assert_eq!(g.contract(&s).cycle_rank(), g.cycle_rank());
        }
    }

    #[test]
    fn modular_counts_ignore_the_reference_orientation((g, bits) in graph_and_bits()) {
        let eps = Orientation::as_listed(g.edge_count());
        let rho = Orientation::from_bits(bits);
        let caps = Caps::default();
        for q in 1..=3 {
            prop_assert_eq!(
                count_modular_nowhere_zero(&g, &eps, q, &caps).unwrap(),
                count_modular_nowhere_zero(&g, &rho, q, &caps).unwrap()
            );
        }
    }

    #[test]
    fn enumerated_modular_flows_conserve((g, bits) in graph_and_bits()) {
        let rho = Orientation::from_bits(bits);
        let caps = Caps::default();
        for f in enumerate_modular_flows(&g, &rho, 3, false, &caps).unwrap() {
            prop_assert!(is_flow(&g, &rho, &f).unwrap());
        }
    }

    #[test]
    fn zero_one_supports_stay_in_the_class((g, bits) in graph_and_bits()) {
        let rho = Orientation::from_bits(bits);
        let caps = Caps::default();
        for f in zero_one_flows(&g, &rho, &caps).unwrap() {
            let indices: Vec<usize> = f
                .values()
                .iter()
                .enumerate()
                .filter(|(_, &v)| v == 1)
                .map(|(i, _)| i)
                .collect();
            let support = flowpoly::multigraph::EdgeSubset::from_indices(g.edge_count(), &indices);
            let flipped = rho.flip_edges(&support);
            prop_assert!(eulerian_equivalent(&g, &rho, &flipped).unwrap());
        }
    }

    #[test]
    fn eulerian_equivalence_is_reflexive_and_symmetric((g, a_bits) in graph_and_bits(), b_bits in proptest::collection::vec(any::<bool>(), 0..=5)) {
        let a = Orientation::from_bits(a_bits);
        let mut b_bits = b_bits;
        b_bits.resize(g.edge_count(), false);
        let b = Orientation::from_bits(b_bits);
        prop_assert!(eulerian_equivalent(&g, &a, &a).unwrap());
        prop_assert_eq!(
            eulerian_equivalent(&g, &a, &b).unwrap(),
            eulerian_equivalent(&g, &b, &a).unwrap()
        );
    }

    #[test]
    fn tutte_methods_agree_on_random_graphs(g in graph_strategy()) {
        let caps = Caps::default();
        prop_assert_eq!(tutte(&g, &caps).unwrap(), tutte_subset_sum(&g, &caps).unwrap());
    }

    #[test]
    fn modular_polynomial_evaluates_to_the_counts(g in graph_strategy()) {
        let caps = Caps::default();
        let phi = modular_flow_poly(&g, ModularMethod::Tutte, &caps).unwrap().poly;
        let eps = Orientation::as_listed(g.edge_count());
        for q in 1..=3 {
            prop_assert_eq!(
                phi.evaluate_int(q),
                rational_int(count_modular_nowhere_zero(&g, &eps, q, &caps).unwrap() as i64)
            );
        }
    }
}
