use ces_pareto::pareto::{
    dominates, nondominated_filter, oracle_pareto, scalarization, stationary_ray_derived,
    AggregateCoefficients, GridScale, GridSpec, SimplexWeights,
};
use ces_pareto::{
    build_criteria, build_membership, check_natural_compromise, verify_nesting, CesParams,
    Consistency, CriteriaKind, EconomicProblem, FuzzyScenario, PreferencePair, Prices,
    ResourceBundle, Tier,
};
use proptest::prelude::*;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn params() -> impl Strategy<Value = CesParams<f64>> {
    (0.1f64..10.0, 0.05f64..0.95, -0.9f64..5.0)
        .prop_filter("r away from 0", |(_, _, r)| r.abs() > 1e-3)
        .prop_map(|(f, a, r)| CesParams::new(f, a, r).unwrap())
}

fn bundle() -> impl Strategy<Value = ResourceBundle<f64>> {
    (0.1f64..10.0, 0.1f64..10.0).prop_map(|(k, l)| ResourceBundle::new(k, l).unwrap())
}

fn prices() -> impl Strategy<Value = Prices<f64>> {
    (0.2f64..5.0, 0.2f64..5.0, 0.2f64..5.0).prop_map(|(k, l, q)| Prices::new(k, l, q).unwrap())
}

/// Pairs where each quantum's gain weights exceed its loss weight.
fn compromise_pair() -> impl Strategy<Value = PreferencePair<f64>> {
    (
        0.1f64..5.0,
        1.001f64..6.0,
        1.001f64..6.0,
        0.1f64..5.0,
        1.001f64..6.0,
        1.001f64..6.0,
        0.0f64..=1.0,
        0.0f64..=1.0,
    )
        .prop_map(|(w3a, g1, g2, w3b, l1, l2, mu1, mu2)| {
            PreferencePair::new(
                [w3a * g1, w3a * g2, w3a],
                Some(mu1),
                [w3b / l1, w3b / l2, w3b],
                Some(mu2),
            )
            .unwrap()
        })
}

fn weights(dim: usize) -> impl Strategy<Value = SimplexWeights<f64>> {
    prop::collection::vec(0.01f64..1.0, dim).prop_map(|raw| {
        let total: f64 = raw.iter().sum();
        let mut values: Vec<f64> = raw.iter().map(|v| v / total).collect();
        let drift: f64 = 1.0 - values.iter().sum::<f64>();
        values[0] += drift;
        SimplexWeights::new(values).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn output_is_homogeneous_of_degree_one(p in params(), x in bundle(), t in 0.1f64..10.0) {
        let q = p.output(&x).unwrap();
        prop_assert!(rel(p.output(&x.scaled(t)).unwrap(), t * q) < 1e-12);
    }

    #[test]
    fn output_increases_in_each_factor(p in params(), x in bundle(), bump in 1.001f64..3.0) {
        let q = p.output(&x).unwrap();
        let more_k = ResourceBundle::new(x.capital * bump, x.labor).unwrap();
        let more_l = ResourceBundle::new(x.capital, x.labor * bump).unwrap();
        prop_assert!(p.output(&more_k).unwrap() > q);
        prop_assert!(p.output(&more_l).unwrap() > q);
    }

    #[test]
    fn small_r_approaches_cobb_douglas(f in 0.1f64..10.0, a in 0.05f64..0.95, x in bundle()) {
        let p = CesParams::new(f, a, 1e-8).unwrap();
        let limit = p.cobb_douglas_limit(&x).unwrap();
        prop_assert!(rel(p.output(&x).unwrap(), limit) < 1e-5);
    }

    #[test]
    fn marginal_products_satisfy_euler_and_differences(
        f in 0.1f64..10.0, a in 0.2f64..0.8, r in -0.8f64..2.0,
        k in 0.5f64..2.0, l in 0.5f64..2.0,
    ) {
        prop_assume!(r.abs() > 1e-3);
        let p = CesParams::new(f, a, r).unwrap();
        let x = ResourceBundle::new(k, l).unwrap();
        let q = p.output(&x).unwrap();
        let (qk, ql) = p.marginal_products(&x).unwrap();
        prop_assert!(rel(k * qk + l * ql, q) < 1e-10);
        let h = 1e-6;
        let at = |k: f64, l: f64| p.output(&ResourceBundle::new(k, l).unwrap()).unwrap();
        let fd_k = (at(k * (1.0 + h), l) - at(k * (1.0 - h), l)) / (2.0 * h * k);
        let fd_l = (at(k, l * (1.0 + h)) - at(k, l * (1.0 - h))) / (2.0 * h * l);
        prop_assert!(rel(fd_k, qk) < 1e-5, "{fd_k} vs {qk}");
        prop_assert!(rel(fd_l, ql) < 1e-5, "{fd_l} vs {ql}");
    }

    #[test]
    fn output_is_midpoint_concave(p in params(), x in bundle(), y in bundle()) {
        let mid = ResourceBundle::new((x.capital + y.capital) / 2.0, (x.labor + y.labor) / 2.0)
            .unwrap();
        let lhs = p.output(&mid).unwrap();
        let rhs = (p.output(&x).unwrap() + p.output(&y).unwrap()) / 2.0;
        prop_assert!(lhs >= rhs * (1.0 - 1e-12));
    }

    #[test]
    fn derived_criteria_are_homogeneous(
        p in params(), pr in prices(), pair in compromise_pair(), x in bundle(), t in 0.1f64..10.0,
    ) {
        let problem = EconomicProblem::new(p, pr).unwrap();
        for kind in CriteriaKind::ALL {
            let c = build_criteria(kind, &pair, &problem).unwrap();
            let base = c.evaluate(&x).unwrap();
            let scaled = c.evaluate(&x.scaled(t)).unwrap();
            for (s, b) in scaled.iter().zip(&base) {
                prop_assert!((s - t * b).abs() <= 1e-11 * (t * b).abs().max(1.0));
            }
        }
    }

    #[test]
    fn stationary_ratio_is_invariant_under_joint_coefficient_scaling(
        p in params(), ck in 0.01f64..10.0, cl in 0.01f64..10.0, cq in 0.01f64..10.0,
        t in 0.01f64..100.0,
    ) {
        let base = AggregateCoefficients::new(-ck, -cl, cq).unwrap();
        let scaled = AggregateCoefficients::new(-t * ck, -t * cl, cq).unwrap();
        let r1 = stationary_ray_derived(&base, &p).unwrap().ratio;
        let r2 = stationary_ray_derived(&scaled, &p).unwrap().ratio;
        prop_assert!(rel(r2, r1) < 1e-12);
    }

    #[test]
    fn stationary_ratio_is_invariant_under_resource_units(
        p in params(), pr in prices(), pair in compromise_pair(), w in weights(4),
        t in 0.1f64..10.0,
    ) {
        // Measuring both resources in units t times larger divides their
        // prices and the technology level by t.
        let problem = EconomicProblem::new(p, pr).unwrap();
        let rescaled = EconomicProblem::new(
            CesParams::new(p.tfp / t, p.share, p.substitution).unwrap(),
            Prices::new(pr.capital / t, pr.labor / t, pr.output).unwrap(),
        )
        .unwrap();
        for kind in [CriteriaKind::G4, CriteriaKind::FBar4] {
            let c1 = scalarization(kind, &pair, &problem, &w).unwrap().coefficients;
            let c2 = scalarization(kind, &pair, &rescaled, &w).unwrap().coefficients;
            let r1 = stationary_ray_derived(&c1, &problem.params).unwrap().ratio;
            let r2 = stationary_ray_derived(&c2, &rescaled.params).unwrap().ratio;
            prop_assert!(rel(r2, r1) < 1e-12);
        }
    }

    #[test]
    fn stationary_ratio_balances_the_partials(
        p in params(), ck in 0.01f64..10.0, cl in 0.01f64..10.0,
    ) {
        // At the ratio, (∂Q/∂K)/(∂Q/∂L) equals |cK|/|cL|.
        let c = AggregateCoefficients::new(-ck, -cl, 1.0).unwrap();
        let rho = stationary_ray_derived(&c, &p).unwrap().ratio;
        let (qk, ql) = p.marginal_products(&ResourceBundle::new(1.0, rho).unwrap()).unwrap();
        prop_assert!(rel(qk / ql, ck / cl) < 1e-10);
    }

    #[test]
    fn scalarized_objective_is_midpoint_concave(
        p in params(), pr in prices(), pair in compromise_pair(), w in weights(4),
        x in bundle(), y in bundle(),
    ) {
        let problem = EconomicProblem::new(p, pr).unwrap();
        let phi = scalarization(CriteriaKind::G4, &pair, &problem, &w).unwrap();
        let mid = ResourceBundle::new((x.capital + y.capital) / 2.0, (x.labor + y.labor) / 2.0)
            .unwrap();
        let lhs = phi.value(&mid).unwrap();
        let rhs = (phi.value(&x).unwrap() + phi.value(&y).unwrap()) / 2.0;
        let scale = phi.value(&x).unwrap().abs() + phi.value(&y).unwrap().abs();
        prop_assert!(lhs >= rhs - 1e-12 * scale.max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn natural_compromise_implies_both_hold(
        w in prop::array::uniform3(0.01f64..10.0), v in prop::array::uniform3(0.01f64..10.0),
    ) {
        let pair = PreferencePair::new(w, None, v, None).unwrap();
        if check_natural_compromise(&pair).is_empty() {
            prop_assert_eq!(pair.consistency(), Consistency::BothHold);
        }
    }

    #[test]
    fn constructed_compromise_pairs_pass(pair in compromise_pair()) {
        prop_assert!(check_natural_compromise(&pair).is_empty());
        prop_assert_eq!(pair.consistency(), Consistency::BothHold);
    }
}

/// Small-integer criterion vectors so that ties and duplicates are common.
fn point_cloud() -> impl Strategy<Value = Vec<Vec<i32>>> {
    prop::collection::vec(prop::collection::vec(0i32..5, 3), 1..40)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn filter_matches_definition(points in point_cloud()) {
        let kept = nondominated_filter(&points).unwrap();
        for (i, p) in points.iter().enumerate() {
            let dominated = points.iter().any(|q| dominates(q, p).unwrap());
            prop_assert_eq!(kept.contains(&i), !dominated);
        }
    }

    #[test]
    fn filter_is_order_invariant(points in point_cloud(), seed in any::<u64>()) {
        let mut order: Vec<usize> = (0..points.len()).collect();
        // Deterministic shuffle driven by the seed.
        let mut state = seed | 1;
        for i in (1..order.len()).rev() {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            order.swap(i, (state % (i as u64 + 1)) as usize);
        }
        let shuffled: Vec<Vec<i32>> = order.iter().map(|&i| points[i].clone()).collect();
        let mut direct: Vec<usize> = nondominated_filter(&points).unwrap();
        let mut via_shuffle: Vec<usize> = nondominated_filter(&shuffled)
            .unwrap()
            .into_iter()
            .map(|i| order[i])
            .collect();
        direct.sort_unstable();
        via_shuffle.sort_unstable();
        prop_assert_eq!(direct, via_shuffle);
    }

    #[test]
    fn filter_is_idempotent(points in point_cloud()) {
        let kept = nondominated_filter(&points).unwrap();
        let survivors: Vec<Vec<i32>> = kept.iter().map(|&i| points[i].clone()).collect();
        let again = nondominated_filter(&survivors).unwrap();
        prop_assert_eq!(again, (0..survivors.len()).collect::<Vec<_>>());
    }

    #[test]
    fn nearest_node_is_closest(
        k in 0.1f64..10.0, l in 0.1f64..10.0, n in 2usize..12, log in any::<bool>(),
    ) {
        let scale = if log { GridScale::Logarithmic } else { GridScale::Linear };
        let grid = GridSpec::new((0.1, 10.0), (0.1, 10.0), (n, n + 1), scale).unwrap();
        let x = ResourceBundle::new(k, l).unwrap();
        let snap = grid.nearest(&x).unwrap();
        prop_assert_eq!(grid.node(snap.index), snap.node);
        // Log grids snap in log coordinates, linear grids in plain ones.
        let distance = |node: &ResourceBundle<f64>| {
            if log {
                (node.capital.ln() - k.ln()).hypot(node.labor.ln() - l.ln())
            } else {
                (node.capital - k).hypot(node.labor - l)
            }
        };
        let best = grid.nodes().iter().map(distance).fold(f64::INFINITY, f64::min);
        prop_assert!(distance(&snap.node) <= best + 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn nesting_and_partition_hold(p in params(), pr in prices(), pair in compromise_pair()) {
        let problem = EconomicProblem::new(p, pr).unwrap();
        let grid = GridSpec::square_log(0.1, 10.0, 12).unwrap();
        let scenario = FuzzyScenario::new(problem, pair.clone(), grid).unwrap();
        let report = verify_nesting(&scenario).unwrap();
        prop_assert!(report.holds(), "{:?}", report.failures);
        prop_assert!(report.g_in_fbar && report.g_in_fhat);

        let map = build_membership(&scenario).unwrap();
        prop_assert_eq!(map.tiers.len(), grid.len());
        let g = oracle_pareto(CriteriaKind::G4, &pair, &problem, &grid).unwrap();
        let second = oracle_pareto(map.branch.second_stage(), &pair, &problem, &grid).unwrap();
        for i in 0..grid.len() {
            let expected = if g.contains(i) {
                Tier::Core
            } else if second.contains(i) {
                Tier::Mid
            } else {
                Tier::Outer
            };
            prop_assert_eq!(map.tiers[i], expected);
            prop_assert!(map.values[i] <= 1.0 && map.values[i] >= 0.0);
        }
    }
}

#[test]
fn crossing_the_confidence_boundary_swaps_the_second_stage() {
    let problem = EconomicProblem::new(
        CesParams::new(0.7, 0.8, 1.0).unwrap(),
        Prices::new(1.2, 0.8, 0.7).unwrap(),
    )
    .unwrap();
    let grid = GridSpec::square_log(0.1, 10.0, 20).unwrap();
    let build = |mu1: f64, mu2: f64| {
        let pair =
            PreferencePair::new([2.0, 3.0, 1.0], Some(mu1), [1.0, 2.0, 3.0], Some(mu2)).unwrap();
        verify_nesting(&FuzzyScenario::new(problem, pair, grid).unwrap()).unwrap()
    };
    let ge = build(0.8, 0.5);
    let lt = build(0.5, 0.8);
    assert_eq!(ge.tiers.core, lt.tiers.core);
    assert_eq!(ge.tiers.core + ge.tiers.mid, ge.fbar4_size);
    assert_eq!(lt.tiers.core + lt.tiers.mid, lt.fhat3_size);
    assert_ne!(ge.fbar4_size, lt.fhat3_size);
    assert_eq!(
        (lt.tiers.mid as isize) - (ge.tiers.mid as isize),
        (lt.fhat3_size as isize) - (ge.fbar4_size as isize)
    );
}

#[test]
fn degenerate_confidences() {
    let problem = EconomicProblem::new(
        CesParams::new(0.7, 0.8, 1.0).unwrap(),
        Prices::new(1.2, 0.8, 0.7).unwrap(),
    )
    .unwrap();
    let grid = GridSpec::square_log(0.1, 10.0, 15).unwrap();
    let map = |mu: f64| {
        let pair =
            PreferencePair::new([2.0, 3.0, 1.0], Some(mu), [1.0, 2.0, 3.0], Some(mu)).unwrap();
        build_membership(&FuzzyScenario::new(problem, pair, grid).unwrap()).unwrap()
    };
    let zero = map(0.0);
    assert!(zero.values.iter().all(|&v| v == 1.0));
    let one = map(1.0);
    for (&t, &v) in one.tiers.iter().zip(&one.values) {
        assert_eq!(v, if t == Tier::Core { 1.0 } else { 0.0 });
    }
    assert!(one.counts().mid > 0 && one.counts().outer > 0);
}

#[test]
fn f32_instantiation_agrees_with_f64() {
    let p64 = CesParams::new(1.5f64, 0.3, 0.7).unwrap();
    let p32 = CesParams::new(1.5f32, 0.3, 0.7).unwrap();
    let x64 = ResourceBundle::new(2.0f64, 3.0).unwrap();
    let x32 = ResourceBundle::new(2.0f32, 3.0).unwrap();
    let q64 = p64.output(&x64).unwrap();
    let q32 = p32.output(&x32).unwrap();
    assert!(rel(f64::from(q32), q64) < 1e-6);

    let grid = GridSpec::<f32>::square_log(0.1, 10.0, 10).unwrap();
    let problem = EconomicProblem::new(p32, Prices::unit()).unwrap();
    let pair = PreferencePair::new([2.0f32, 2.0, 1.0], None, [1.0, 1.0, 3.0], None).unwrap();
    let f = oracle_pareto(CriteriaKind::F3, &pair, &problem, &grid).unwrap();
    assert!(f.is_full());
}
