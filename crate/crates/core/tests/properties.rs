use proptest::prelude::*;

use patrol_games::discretize::{discretize_hiding, discretize_patrolling_network, hiding_sweep, NetworkOracleConfig};
use patrol_games::geometry::{Norm, NormKind};
use patrol_games::hiding::cantor::cantor_regime;
use patrol_games::hiding::{cantor_value, CantorBranch, disc_value, unit_interval_value, HideGame};
use patrol_games::matrixgame::{ImplicitGame, MatrixGame, LP_TOL};
use patrol_games::patrol::{eulerian_value, three_arc_bounds, value_upper_bound, PatrolGame};
use patrol_games::trajectory::{ElementaryRegion, SimpleSpace};
use patrol_games::{presets, SearchSpace};

fn norm_kind() -> impl Strategy<Value = NormKind> {
    prop_oneof![
        Just(NormKind::Euclidean),
        Just(NormKind::L1),
        Just(NormKind::LInf),
        prop::collection::vec(0.1f64..4.0, 2).prop_map(NormKind::WeightedLInf),
    ]
}

fn point2() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-2.0f64..2.0, 2)
}

fn next_down(x: f64) -> f64 {
    f64::from_bits(x.to_bits() - 1)
}

proptest! {
    #[test]
    fn hiding_payoff_is_symmetric_and_binary(kind in norm_kind(), x in point2(), y in point2(), r in 0.0f64..3.0) {
        let norm = Norm::new(kind, 2).unwrap();
        let g = HideGame::with_norm(SearchSpace::Box { lo: vec![-2.0; 2], hi: vec![2.0; 2] }, r, norm).unwrap();
        let a = g.payoff(&x, &y);
        prop_assert_eq!(a, g.payoff(&y, &x));
        prop_assert!(a <= 1);
        prop_assert_eq!(g.payoff(&x, &x), 1);
    }

    /// For `r` strictly inside `(1/(2(n+1)), 1/(2n))`: the searcher's atoms
    /// cover `[0, 1]`, no ball holds two hider atoms, and the value is
    /// `1/(n+1)`.
    #[test]
    fn unit_interval_spacing(n in 1usize..=50, t in 0.01f64..0.99, y in 0.0f64..=1.0) {
        let (a, b) = (1.0 / (2.0 * (n + 1) as f64), 1.0 / (2.0 * n as f64));
        let r = a + t * (b - a);
        let s = unit_interval_value(r).unwrap();
        prop_assert_eq!(s.n, Some(n));
        prop_assert_eq!(s.value, 1.0 / (n + 1) as f64);
        prop_assert_eq!(s.searcher_atoms.len(), n + 1);
        prop_assert!(s.searcher_atoms.iter().any(|x| (x - y).abs() <= r));
        for w in s.hider_atoms.windows(2) {
            prop_assert!(w[1] - w[0] > 2.0 * r);
        }
        prop_assert!(s.hider_atoms.iter().all(|x| (0.0..=1.0).contains(x)));
    }

    #[test]
    fn values_nondecreasing_in_m(m1 in 0.0f64..8.0, dm in 0.0f64..3.0) {
        let m2 = m1 + dm;
        let (b1, b2) = (three_arc_bounds(m1).unwrap(), three_arc_bounds(m2).unwrap());
        prop_assert!(b1.lower <= b2.lower && b1.upper <= b2.upper);
        prop_assert!(b1.lower <= b1.upper);
        for net in [presets::n1(), presets::circle(3.0)] {
            prop_assert!(eulerian_value(&net, m1).unwrap() <= eulerian_value(&net, m2).unwrap());
        }
        let ub = |m: f64| value_upper_bound(&PatrolGame::new(SearchSpace::Network(presets::n2()), m, 0.0).unwrap()).unwrap();
        prop_assert!(ub(m1) <= ub(m2));
        prop_assert!(b1.upper <= ub(m1) + 1e-15);
    }

    #[test]
    fn values_nondecreasing_in_r(r1 in 0.001f64..1.0, dr in 0.0f64..0.5) {
        let r2 = (r1 + dr).min(1.0);
        prop_assert!(unit_interval_value(r1).unwrap().value <= unit_interval_value(r2).unwrap().value);
        prop_assert!(cantor_value(r1).unwrap() <= cantor_value(r2).unwrap());
        // Disc of radius 1 searched with radius r: s = 1/r, defined for r ≥ 1/√2.
        let (s1, s2) = (1.0 / (0.71 + 0.29 * r1), 1.0 / (0.71 + 0.29 * r2));
        prop_assert!(disc_value(s1).unwrap() <= disc_value(s2).unwrap());
        let sq = SearchSpace::Region(SimpleSpace::single(ElementaryRegion::unit_square()));
        let ub = |r: f64| value_upper_bound(&PatrolGame::new(sq.clone(), 1.0, r).unwrap()).unwrap();
        prop_assert!(ub(r1) <= ub(r2));
    }

    /// Branch endpoints are hit exactly. `4⁻ⁿ` starts the first branch of
    /// level `n` and the float below it lies on the second branch of level
    /// `n + 1`, with the same value; the only jump is at `3·4⁻ⁿ`.
    #[test]
    fn cantor_branch_endpoints(n in 1u32..=12) {
        let unit = 0.25f64.powi(n as i32);
        let half_n = 0.5f64.powi(n as i32);
        prop_assert_eq!(cantor_regime(unit).unwrap(), (n, CantorBranch::Sigma));
        prop_assert_eq!(cantor_regime(next_down(unit)).unwrap(), (n + 1, CantorBranch::SigmaPrime));
        prop_assert_eq!(cantor_regime(3.0 * unit).unwrap(), (n, CantorBranch::SigmaPrime));
        prop_assert_eq!(cantor_regime(next_down(3.0 * unit)).unwrap(), (n, CantorBranch::Sigma));
        prop_assert_eq!(cantor_value(unit).unwrap(), half_n);
        prop_assert_eq!(cantor_value(next_down(unit)).unwrap(), half_n);
        prop_assert_eq!(cantor_value(2.0 * unit).unwrap(), half_n);
        prop_assert_eq!(cantor_value(next_down(3.0 * unit)).unwrap(), half_n);
        prop_assert_eq!(cantor_value(3.0 * unit).unwrap(), 2.0 * half_n);
    }
}

fn small_matrix() -> impl Strategy<Value = (usize, usize, Vec<f64>)> {
    (1usize..=6, 1usize..=6).prop_flat_map(|(r, c)| (Just(r), Just(c), prop::collection::vec(-5.0f64..5.0, r * c)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn matrix_game_invariants((rows, cols, entries) in small_matrix(), a in 0.1f64..4.0, b in -3.0f64..3.0) {
        let g = MatrixGame::new(rows, cols, entries.clone()).unwrap();
        let s = g.solve_lp().unwrap();
        let lo = entries.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = entries.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(lo - 1e-9 <= s.value && s.value <= hi + 1e-9);
        prop_assert!(s.lower <= s.value + 1e-9 && s.value <= s.upper + 1e-9);
        prop_assert!(s.upper - s.lower <= 1e-7);
        for p in [&s.row_strategy, &s.col_strategy] {
            prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-9);
            prop_assert!(p.iter().all(|&x| x >= -1e-12));
        }
        // The row strategy guarantees the value against every column.
        prop_assert!(g.col_payoffs(&s.row_strategy).iter().all(|&v| v >= s.value - 1e-7));
        prop_assert!(g.row_payoffs(&s.col_strategy).iter().all(|&v| v <= s.value + 1e-7));
        let t = g.affine(a, b).unwrap().solve_lp().unwrap();
        prop_assert!((t.value - (a * s.value + b)).abs() <= 1e-7 * (1.0 + a));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// Nested 1-D grids: each bracket end is an exact restricted game, so
    /// refining only helps.
    #[test]
    fn nested_interval_brackets_tighten(r in 0.05f64..0.6) {
        let g = HideGame::new(SearchSpace::Interval { lo: 0.0, hi: 1.0 }, r).unwrap();
        let rep = hiding_sweep(&g, 1.0 / 4.0, 0..=3, Some(unit_interval_value(r).unwrap().value), LP_TOL, 200).unwrap();
        prop_assert!(rep.lower_nondecreasing, "{:?}", rep.rows);
        prop_assert!(rep.upper_nonincreasing, "{:?}", rep.rows);
        prop_assert_eq!(rep.target_in_final, Some(true));
    }

    #[test]
    fn grid_games_are_zero_one(r in 0.05f64..0.5, pitch in 0.05f64..0.25, m in 0.5f64..2.0) {
        let box2 = SearchSpace::Box { lo: vec![0.0; 2], hi: vec![1.0; 2] };
        let d = discretize_hiding(&HideGame::new(box2, r).unwrap(), pitch).unwrap();
        for g in [&d.lower, &d.upper, &d.grid_game] {
            for i in 0..g.rows().min(40) {
                for j in 0..g.cols() {
                    let v = g.payoff(i, j);
                    prop_assert!(v == 0.0 || v == 1.0);
                }
            }
        }
        let cfg = NetworkOracleConfig { edge_pitch: 0.25, time_pitch: Some(m / 4.0), ..Default::default() };
        let p = discretize_patrolling_network(&presets::circle(3.0), m, &cfg).unwrap();
        for i in 0..p.rows().min(40) {
            for j in 0..p.cols() {
                let v = p.payoff(i, j);
                prop_assert!(v == 0.0 || v == 1.0);
            }
        }
    }
}
