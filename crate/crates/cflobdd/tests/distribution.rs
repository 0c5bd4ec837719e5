//! Path counting and weighted assignment sampling.

mod common;

use cflobdd::{
    apply_boolean, count_paths, count_paths_grouping, eq_relation, exit_descent_weights, false_,
    parity, path_counts_log, projection, sample_assignment, sample_assignment_with, BoolOp,
    CflobddError, CflobddId, DecisionTree, Grouping, Manager, TerminalValue,
};
use common::*;
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use std::collections::HashMap;

/// (w and x) or (y and z): the worked example used throughout.
fn two_and_pairs(mgr: &mut Manager) -> CflobddId {
    let w = projection(mgr, 2, 0).unwrap();
    let x = projection(mgr, 2, 1).unwrap();
    let y = projection(mgr, 2, 2).unwrap();
    let z = projection(mgr, 2, 3).unwrap();
    let wx = apply_boolean(mgr, w, x, BoolOp::And).unwrap();
    let yz = apply_boolean(mgr, y, z, BoolOp::And).unwrap();
    apply_boolean(mgr, wx, yz, BoolOp::Or).unwrap()
}

fn big(xs: &[u64]) -> Vec<BigUint> {
    xs.iter().map(|&x| BigUint::from(x)).collect()
}

#[test]
fn worked_example_counts_match_at_every_grouping() {
    let mut mgr = Manager::new();
    let f = two_and_pairs(&mut mgr);
    assert_eq!(count_paths(&mut mgr, f), big(&PATHS_EXAMPLE_TOP));

    let top = mgr.grouping_of(f);
    let ig = match mgr.node(top).clone() {
        Grouping::Internal(ig) => ig,
        _ => panic!("expected an internal grouping"),
    };
    // The A-connection is the two-variable AND pattern, shared with the
    // first B-connection; the second B-connection distinguishes nothing.
    assert_eq!(
        *count_paths_grouping(&mut mgr, ig.a_connection),
        big(&PATHS_EXAMPLE_AND)
    );
    assert_eq!(ig.b_connections[0], ig.a_connection);
    assert_eq!(
        *count_paths_grouping(&mut mgr, ig.b_connections[1]),
        big(&PATHS_EXAMPLE_NODIST)
    );
    let fork = mgr.fork();
    let dc = mgr.dont_care();
    assert_eq!(*count_paths_grouping(&mut mgr, fork), big(&PATHS_EXAMPLE_FORK));
    assert_eq!(*count_paths_grouping(&mut mgr, dc), big(&PATHS_EXAMPLE_DONTCARE));
}

#[test]
fn counts_match_exhaustive_enumeration() {
    let mut mgr = Manager::new();
    let mut rng = ChaCha12Rng::seed_from_u64(0xd15c);
    for _ in 0..60 {
        let mask: u16 = rng.gen();
        let leaves = (0..16)
            .map(|i| TerminalValue::Bool(mask >> i & 1 == 1))
            .collect();
        let c = mgr.fold(&DecisionTree { level: 2, leaves }).unwrap();
        let got: Vec<u64> = count_paths(&mut mgr, c)
            .iter()
            .map(|n| u64::try_from(n).unwrap())
            .collect();
        assert_eq!(got, ref_value_counts(&mgr, c), "mask {mask:#06x}");
    }
    // Integer-valued structures count the same way.
    let leaves = (0..16).map(|i| TerminalValue::int(i % 3)).collect();
    let c = mgr.fold(&DecisionTree { level: 2, leaves }).unwrap();
    let got: Vec<u64> = count_paths(&mut mgr, c)
        .iter()
        .map(|n| u64::try_from(n).unwrap())
        .collect();
    assert_eq!(got, ref_value_counts(&mgr, c));
}

#[test]
fn counts_are_exact_at_thirty_two_variables() {
    let mut mgr = Manager::new();
    let p = parity(&mut mgr, 5).unwrap();
    assert_eq!(count_paths(&mut mgr, p), big(&[1 << 31, 1 << 31]));
    let eq = eq_relation(&mut mgr, 5).unwrap();
    assert_eq!(
        count_paths(&mut mgr, eq),
        big(&[1 << 16, (1 << 32) - (1 << 16)])
    );
}

#[test]
fn descent_weights_are_the_advertised_ratio() {
    let mut mgr = Manager::new();
    let f = two_and_pairs(&mut mgr);
    let top = mgr.grouping_of(f);
    // Exit 2 is the true class; the two (middle, B-exit) options carry
    // weights 3 and 4 out of 7.
    let options = exit_descent_weights(&mut mgr, top, 2);
    let weights: Vec<u64> = options
        .iter()
        .map(|(_, w)| u64::try_from(w).unwrap())
        .collect();
    assert_eq!(weights, SAMPLING_EXAMPLE_WEIGHTS);
    assert_eq!(weights.iter().sum::<u64>(), SAMPLING_EXAMPLE_TOTAL);
}

#[test]
fn boolean_sampling_is_uniform_over_satisfying_assignments() {
    let mut mgr = Manager::with_seed(1001);
    let f = two_and_pairs(&mut mgr);
    let mut histogram: HashMap<Vec<bool>, u64> = HashMap::new();
    let draws = 7000;
    for _ in 0..draws {
        let asn = sample_assignment(&mut mgr, f).unwrap();
        assert_eq!(
            mgr.interpret(f, &asn).unwrap(),
            &TerminalValue::Bool(true),
            "sampled a falsifying assignment"
        );
        *histogram.entry(asn).or_default() += 1;
    }
    // All 7 satisfying assignments appear, roughly uniformly.
    assert_eq!(histogram.len(), 7);
    for (asn, n) in &histogram {
        let expected = draws as f64 / 7.0;
        assert!(
            (*n as f64 - expected).abs() < 5.0 * expected.sqrt(),
            "assignment {asn:?} drawn {n} times, expected about {expected}"
        );
    }
}

#[test]
fn integer_sampling_weights_by_the_square() {
    let mut mgr = Manager::with_seed(77);
    // f maps 4 assignments to 1, 4 to 2, 8 to 0; squared weights put
    // 4*1 : 4*4 = 1 : 4 odds on the nonzero classes.
    let leaves = (0..16)
        .map(|i| TerminalValue::int(match i {
            0..=3 => 1,
            4..=7 => 2,
            _ => 0,
        }))
        .collect();
    let c = mgr.fold(&DecisionTree { level: 2, leaves }).unwrap();
    let draws = 4000;
    let mut ones = 0u64;
    for _ in 0..draws {
        let asn = sample_assignment(&mut mgr, c).unwrap();
        match mgr.interpret(c, &asn).unwrap() {
            TerminalValue::Int(v) if *v == 1.into() => ones += 1,
            TerminalValue::Int(v) if *v == 2.into() => {}
            other => panic!("sampled a zero-weight value {other}"),
        }
    }
    let p = ones as f64 / draws as f64;
    assert!((p - 0.2).abs() < 0.03, "P(value 1) was {p}");
}

#[test]
fn custom_weights_redirect_the_sampler() {
    let mut mgr = Manager::with_seed(5);
    let f = two_and_pairs(&mut mgr);
    // Weight the false class instead: only falsifying assignments appear.
    for _ in 0..200 {
        let asn = sample_assignment_with(&mut mgr, f, |v| match v {
            TerminalValue::Bool(b) => (BigUint::from(!b as u8), 0),
            _ => unreachable!(),
        })
        .unwrap();
        assert_eq!(mgr.interpret(f, &asn).unwrap(), &TerminalValue::Bool(false));
    }
    // Dyadic weights: 3/2 vs 1/4 on the two classes of a projection.
    let x = projection(&mut mgr, 1, 0).unwrap();
    let mut hits = 0u64;
    let draws = 4000;
    for _ in 0..draws {
        let asn = sample_assignment_with(&mut mgr, x, |v| match v {
            TerminalValue::Bool(true) => (BigUint::from(3u8), 1),
            _ => (BigUint::from(1u8), 2),
        })
        .unwrap();
        hits += asn[0] as u64;
    }
    // P(true) = (2 * 3/2) / (2 * 3/2 + 2 * 1/4) = 6/7.
    let p = hits as f64 / draws as f64;
    assert!((p - 6.0 / 7.0).abs() < 0.03, "P(x0 = 1) was {p}");
}

#[test]
fn sampling_is_deterministic_under_a_seed() {
    let mut a = Manager::with_seed(99);
    let mut b = Manager::with_seed(99);
    let fa = two_and_pairs(&mut a);
    let fb = two_and_pairs(&mut b);
    let da: Vec<Vec<bool>> = (0..50).map(|_| sample_assignment(&mut a, fa).unwrap()).collect();
    let db: Vec<Vec<bool>> = (0..50).map(|_| sample_assignment(&mut b, fb).unwrap()).collect();
    assert_eq!(da, db);
    a.reseed(99);
    let again: Vec<Vec<bool>> = (0..50).map(|_| sample_assignment(&mut a, fa).unwrap()).collect();
    assert_eq!(da, again);
}

#[test]
fn all_zero_weights_are_an_error() {
    let mut mgr = Manager::new();
    let f = false_(&mut mgr, 2).unwrap();
    assert!(matches!(
        sample_assignment(&mut mgr, f),
        Err(CflobddError::AllZeroWeights)
    ));
    let z = cflobdd::constant(&mut mgr, 1, TerminalValue::int(0)).unwrap();
    assert!(matches!(
        sample_assignment(&mut mgr, z),
        Err(CflobddError::AllZeroWeights)
    ));
}

#[test]
fn log_counts_track_exact_counts() {
    let mut mgr = Manager::new();
    let f = two_and_pairs(&mut mgr);
    let logs = path_counts_log(&mut mgr, f);
    assert!((logs[0] - (9f64).ln()).abs() < 1e-12);
    assert!((logs[1] - (7f64).ln()).abs() < 1e-12);

    // Large counts stay accurate well past what u64 holds: parity of 2^6
    // variables has 2^63 paths per class.
    let p = parity(&mut mgr, 6).unwrap();
    let logs = path_counts_log(&mut mgr, p);
    let want = 63.0 * std::f64::consts::LN_2;
    assert!((logs[0] - want).abs() < 1e-9);
    assert!((logs[1] - want).abs() < 1e-9);

    // A constant function funnels every path to its single class.
    let t = cflobdd::true_(&mut mgr, 3).unwrap();
    let logs = path_counts_log(&mut mgr, t);
    assert_eq!(logs.len(), 1);
    assert!((logs[0] - 8.0 * std::f64::consts::LN_2).abs() < 1e-12);
}
