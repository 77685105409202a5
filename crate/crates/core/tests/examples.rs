//! Worked examples on small named digraphs.

use forestcalc::access::{accessibility_measures, monotonicity_sweep, Condition};
use forestcalc::fixtures::{path_digraph, transit_digraph, weighted_four_cycle};
use forestcalc::forest::{gershgorin, max_forest_matrix};
use forestcalc::ginv::{group_inverse_limit, inverse_bundle};
use forestcalc::markov::{observation_limit, related_chain, simulate_observation, observation_matrix};
use forestcalc::oracle::knot_factorization_check;
use forestcalc::scalar::{integer, rational};
use forestcalc::{forest_sequence, parse_digraph, Rational, Scalar};

#[test]
fn edge_list_round_trip() {
    let g = parse_digraph("# path\nj i 4\ni k 1\nk t 1\n").unwrap();
    assert_eq!(g.labels(), ["j", "i", "k", "t"]);
    let again = parse_digraph(&g.to_edge_list()).unwrap();
    assert_eq!(again.arcs(), g.arcs());
    let tabs = parse_digraph("vertex x\na\tb\t1/2\n").unwrap();
    assert_eq!(tabs.n(), 3);
    assert_eq!(tabs.weight(1, 2), Some(&rational(1, 2)));
}

#[test]
fn observation_approaches_jbar_as_q_shrinks() {
    let g = path_digraph();
    let chain = related_chain::<Rational>(&g, &rational(1, 4)).unwrap();
    let qs = [rational(1, 10), rational(1, 100), rational(1, 1000)];
    let d: Vec<f64> = observation_limit(&chain, &qs).unwrap().into_iter().map(|x| x.1).collect();
    assert!(d[0] > d[1] && d[1] > d[2], "{d:?}");
}

#[test]
fn simulation_error_shrinks_with_more_trials() {
    let g = transit_digraph();
    let chain = related_chain::<Rational>(&g, &rational(1, 4)).unwrap();
    let exact = observation_matrix(&chain, &rational(1, 5)).unwrap();
    let start = g.index_of("j").unwrap();
    let rms = |trials: u64| -> f64 {
        let mut total = 0.0;
        for seed in 0..8 {
            let row = simulate_observation(&chain, 0.2, start, trials, seed, 2).unwrap();
            total += row
                .frequencies
                .iter()
                .zip(exact.matrix.row(start))
                .map(|(f, p)| (f - p.to_f64()).powi(2))
                .sum::<f64>();
        }
        (total / 8.0).sqrt()
    };
    let (coarse, fine) = (rms(2_000), rms(32_000));
    // 16x the trials should cut the error by about 4x
    assert!(fine < coarse / 2.0, "coarse {coarse}, fine {fine}");
}

#[test]
fn limit_on_path_fixture() {
    let schedule: Vec<Rational> = (0..=8).map(|p| integer(10i64.pow(p))).collect();
    let rep = group_inverse_limit(&path_digraph(), &schedule).unwrap();
    assert!(rep.monotone());
    assert!(rep.final_distance() < 1e-6);
    let bundle = inverse_bundle::<Rational>(&path_digraph(), &integer(1)).unwrap();
    assert_ne!(bundle.group_inverse, bundle.moore_penrose);
}

#[test]
fn gershgorin_and_maximum_forests() {
    let cycle = weighted_four_cycle();
    let report = gershgorin::<Rational>(&cycle);
    assert!(report.all_touch_zero && report.right_half_plane);
    assert!(!report.intersection_is_zero);
    let path = path_digraph();
    assert!(gershgorin::<Rational>(&path).intersection_is_zero);
    let seq = forest_sequence::<Rational>(&path).unwrap();
    let normalized = max_forest_matrix(&seq).unwrap();
    assert_eq!(normalized.jbar.column(0), vec![integer(1); 4]);
}

#[test]
fn knot_factorization_on_path() {
    let g = path_digraph();
    let f = knot_factorization_check(&g, &[0], 0, 3).unwrap();
    assert!(f.holds());
}

#[test]
fn monotonicity_sweep_matches_known_pattern() {
    let g = transit_digraph();
    let forest = accessibility_measures::<Rational>().get("forest").unwrap();
    let rep = monotonicity_sweep(&*forest, &g, &integer(1), true).unwrap();
    let verdict = |m: &str, item: &str| rep.find(m, Condition::Monotonicity, item).unwrap().passed();
    assert!(verdict("P1", "1a") && verdict("P2", "1a"));
    assert!(!verdict("P1", "1b") && !verdict("P2", "1b"));
    assert!(verdict("P1", "2a") && verdict("P1", "2b") && verdict("P1", "3b"));
    assert!(verdict("P2", "3a") && verdict("P2", "3b") && verdict("P2", "2b"));
}
