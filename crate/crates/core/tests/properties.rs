use bdom_core::formulas::{construct_cycle_towers, construct_path_towers};
use bdom_core::graph::bfs_distance;
use bdom_core::signal::{audit_all, check_broadcast, is_broadcasting, usable_cap_1d, usable_cap_2d, Verdict};
use bdom_core::solver::verify_witness;
use bdom_core::{solve, FormulaInput, GraphSpec, LatticeConfig, Point, SignalParams, TowerSet};
use proptest::prelude::*;

fn spec_strategy() -> impl Strategy<Value = GraphSpec> {
    prop_oneof![
        (1usize..=25, 1usize..=6).prop_map(|(n, k)| GraphSpec::path_power(n, k).unwrap()),
        (1usize..=25, 1usize..=6).prop_map(|(n, k)| GraphSpec::cycle_power(n, k).unwrap()),
        (1usize..=6, 1usize..=6).prop_map(|(r, c)| GraphSpec::grid(r, c).unwrap()),
        (1usize..=6, 1usize..=6).prop_map(|(r, c)| GraphSpec::torus(r, c).unwrap()),
    ]
}

fn small_spec_strategy() -> impl Strategy<Value = GraphSpec> {
    prop_oneof![
        (1usize..=20, 1usize..=4).prop_map(|(n, k)| GraphSpec::path_power(n, k).unwrap()),
        (1usize..=20, 1usize..=4).prop_map(|(n, k)| GraphSpec::cycle_power(n, k).unwrap()),
        (1usize..=4, 1usize..=5).prop_map(|(r, c)| GraphSpec::grid(r, c).unwrap()),
        (1usize..=4, 1usize..=5).prop_map(|(r, c)| GraphSpec::torus(r, c).unwrap()),
    ]
}

fn towers_strategy() -> impl Strategy<Value = TowerSet> {
    spec_strategy().prop_flat_map(|spec| {
        let n = spec.order();
        proptest::collection::btree_set(0..n, 0..=n.min(6))
            .prop_map(move |vs| TowerSet::new(spec, vs.into_iter().collect()).unwrap())
    })
}

fn per_tower_cap(spec: &GraphSpec, params: SignalParams) -> u64 {
    match spec {
        GraphSpec::PathPower { k, .. } | GraphSpec::CyclePower { k, .. } => usable_cap_1d(params, *k as u64).unwrap(),
        GraphSpec::Grid { .. } | GraphSpec::Torus { .. } => usable_cap_2d(params).unwrap(),
    }
}

proptest! {
    #[test]
    fn closed_form_distance_is_bfs_distance(spec in spec_strategy(), a in 0usize..1000, b in 0usize..1000) {
        let (u, v) = (a % spec.order(), b % spec.order());
        prop_assert_eq!(spec.distance(u, v).unwrap(), bfs_distance(&spec, u, v).unwrap());
        prop_assert_eq!(spec.distance(u, v).unwrap(), spec.distance(v, u).unwrap());
    }

    #[test]
    fn ball_is_the_distance_sublevel_set(spec in spec_strategy(), a in 0usize..1000, radius in 0usize..6) {
        let v = a % spec.order();
        let ball = spec.ball(v, radius).unwrap();
        let expected: Vec<usize> = (0..spec.order()).filter(|&u| spec.distance(u, v).unwrap() <= radius).collect();
        prop_assert_eq!(ball, expected);
    }

    #[test]
    fn capped_accounting(towers in towers_strategy(), t in 1u64..=6, dr in 0u64..=5) {
        let params = SignalParams::new(t, (t.saturating_sub(dr)).max(1)).unwrap();
        let audits = audit_all(&towers, params);
        let mut usable = 0;
        for a in &audits {
            prop_assert!(a.capped_signal <= a.raw_signal);
            prop_assert_eq!(a.excess, a.capped_signal as i64 - params.r as i64);
            // capping only bites above r, so deficient vertices lose nothing
            if a.raw_signal < params.r {
                prop_assert_eq!(a.capped_signal, a.raw_signal);
            }
            usable += a.capped_signal;
        }
        prop_assert!(usable <= towers.len() as u64 * per_tower_cap(towers.spec(), params));
        let broadcasting = audits.iter().all(|a| a.raw_signal >= params.r);
        prop_assert_eq!(broadcasting, is_broadcasting(&towers, params));
        if broadcasting {
            // capped signal >= r at every vertex
            prop_assert!(audits.iter().all(|a| a.excess >= 0));
        }
    }

    #[test]
    fn adding_towers_never_lowers_a_signal(towers in towers_strategy(), extra in 0usize..1000, t in 1u64..=6, r in 1u64..=6) {
        let params = SignalParams::new(t, r).unwrap();
        let mut bigger = towers.clone();
        bigger.insert(extra % towers.spec().order()).unwrap();
        for (a, b) in audit_all(&towers, params).iter().zip(audit_all(&bigger, params)) {
            prop_assert!(a.raw_signal <= b.raw_signal);
            prop_assert!(a.capped_signal <= b.capped_signal);
        }
        if is_broadcasting(&towers, params) {
            prop_assert!(is_broadcasting(&bigger, params));
        }
    }

    #[test]
    fn deficiency_is_the_least_short_vertex(towers in towers_strategy(), t in 1u64..=5, r in 1u64..=5) {
        let params = SignalParams::new(t, r).unwrap();
        let audits = audit_all(&towers, params);
        match check_broadcast(&towers, params) {
            Verdict::Broadcasting => prop_assert!(audits.iter().all(|a| a.raw_signal >= r)),
            Verdict::Deficient(d) => {
                prop_assert!(audits[..d.vertex].iter().all(|a| a.raw_signal >= r));
                prop_assert_eq!(audits[d.vertex].raw_signal, d.raw_signal);
                prop_assert_eq!(d.shortfall, r - d.raw_signal);
            }
        }
    }

    #[test]
    fn tower_set_json_round_trip(towers in towers_strategy()) {
        let text = towers.to_json().unwrap();
        prop_assert_eq!(TowerSet::from_json(&text).unwrap(), towers.clone());
        let spec_text = towers.spec().to_string();
        prop_assert_eq!(spec_text.parse::<GraphSpec>().unwrap(), *towers.spec());
    }

    #[test]
    fn lattice_reduction_is_canonical(
        a in (-9i64..=9, -9i64..=9), b in (-9i64..=9, -9i64..=9), p in (-60i64..=60, -60i64..=60),
        m in -4i64..=4, n in -4i64..=4,
    ) {
        let (a, b) = (Point(a.0, a.1), Point(b.0, b.1));
        prop_assume!(a.0 * b.1 - a.1 * b.0 != 0);
        let config = LatticeConfig::from_basis(a, b).unwrap();
        let lattice = config.lattice();
        let p = Point(p.0, p.1);
        let shifted = Point(p.0 + m * a.0 + n * b.0, p.1 + m * a.1 + n * b.1);
        let rep = lattice.reduce(p);
        prop_assert_eq!(rep, lattice.reduce(shifted));
        prop_assert_eq!(lattice.reduce(rep), rep);
        prop_assert!(lattice.contains(Point(p.0 - rep.0, p.1 - rep.1)));
        prop_assert_eq!(lattice.representatives().count() as i64, config.index());
        let (px, py) = config.axis_periods();
        prop_assert!(lattice.contains(Point(px, 0)) && lattice.contains(Point(0, py)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn solver_optimum_is_minimal_and_bounded(spec in small_spec_strategy(), t in 1u64..=4, dr in 0u64..=3) {
        let params = SignalParams::new(t, (t.saturating_sub(dr)).max(1)).unwrap();
        let res = solve(&spec, params, 1 << 26).unwrap().solved().unwrap();
        prop_assert!(verify_witness(&res, &spec, params));
        prop_assert!(res.lower_bound <= res.gamma);
        // no single tower can be dropped from a minimum set
        for &v in res.witness.vertices() {
            let mut smaller = res.witness.clone();
            smaller.remove(v);
            prop_assert!(!is_broadcasting(&smaller, params));
        }
        if let GraphSpec::PathPower { n, k } | GraphSpec::CyclePower { n, k } = spec {
            let input = FormulaInput::new(n as u64, k as u64, params.t, params.r).unwrap();
            let constructed = match spec {
                GraphSpec::PathPower { .. } => construct_path_towers(&input).unwrap().towers,
                _ => construct_cycle_towers(&input).unwrap(),
            };
            prop_assert!(res.gamma <= constructed.len());
        }
    }
}
