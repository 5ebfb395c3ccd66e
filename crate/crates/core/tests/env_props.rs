use std::collections::BTreeSet;

use num_rational::Rational64;
use proptest::prelude::*;
use ptmtopo_core::env::{
    build_env, config_distance, distance_spectrum, field_distance, invariant_delta, parse_rational,
    render_rational, vietoris_rips, Payload,
};
use ptmtopo_core::fixtures;
use ptmtopo_core::machine::{Output, Policy, WorkState};
use ptmtopo_core::topo::Simplex;

/// Longest common subsequence by trying every subsequence of the shorter word.
fn brute_lcs(x: &str, y: &str) -> usize {
    let (x, y): (Vec<char>, Vec<char>) = (x.chars().collect(), y.chars().collect());
    let (short, long) = if x.len() <= y.len() { (x, y) } else { (y, x) };
    let is_sub = |sub: &[char]| {
        let mut it = long.iter();
        sub.iter().all(|c| it.any(|d| d == c))
    };
    (0u32..1 << short.len())
        .filter_map(|mask| {
            let sub: Vec<char> = (0..short.len()).filter(|i| mask >> i & 1 == 1).map(|i| short[i]).collect();
            is_sub(&sub).then_some(sub.len())
        })
        .max()
        .unwrap_or(0)
}

fn word(max: usize) -> impl Strategy<Value = String> {
    proptest::collection::vec(proptest::sample::select(vec!['a', 'b', 'c']), 0..=max)
        .prop_map(|v| v.into_iter().collect())
}

fn payload() -> impl Strategy<Value = Payload> {
    (
        prop_oneof![4 => word(4).prop_map(WorkState::Word), 1 => Just(WorkState::Div)],
        word(4),
        prop_oneof![4 => word(4).prop_map(Output::Word), 1 => Just(Output::Mu)],
    )
        .prop_map(|(work, input, output)| Payload { work, input, output })
}

fn r(s: &str) -> Rational64 {
    parse_rational(s).unwrap()
}

#[test]
fn latch_environment_values() {
    let inputs = fixtures::LATCH_INPUTS;
    let trace = build_env(&fixtures::latch(), inputs, fixtures::latch_eps(), 2, 100, Policy::Deterministic).unwrap();
    let summaries: Vec<String> = trace.snapshots.iter().map(|s| s.summary()).collect();
    assert_eq!(summaries.len(), 6);
    assert_eq!(summaries[0], "1 2.5 1 1 0 0");
    assert_eq!(summaries[5], "6 2.5 5 1 1 0");
    let changed: Vec<usize> = invariant_delta(&trace).iter().filter(|d| d.changed()).map(|d| d.time).collect();
    assert!(changed.contains(&5));
    assert_eq!(
        distance_spectrum(&trace.last().points).iter().map(|&x| render_rational(x)).collect::<Vec<_>>(),
        vec!["1", "1.5", "2", "2.5", "3"]
    );
}

#[test]
fn rationals_round_trip() {
    for s in ["0", "3", "2.5", "0.125", "1/3", "7/6"] {
        assert_eq!(render_rational(r(s)), s);
    }
    assert_eq!(r(".5"), Rational64::new(1, 2));
    assert_eq!(r("5/2"), r("2.5"));
    assert!(parse_rational("x").is_none());
    assert!(parse_rational("1/0").is_none());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn field_distance_matches_brute_lcs(x in word(6), y in word(6)) {
        let longest = x.chars().count().max(y.chars().count());
        let expected = if longest == 0 {
            Rational64::from_integer(0)
        } else {
            Rational64::new((longest - brute_lcs(&x, &y)) as i64, longest as i64)
        };
        prop_assert_eq!(field_distance(&x, &y), expected);
    }

    #[test]
    fn config_distance_is_a_metric(a in payload(), b in payload(), c in payload()) {
        let d = config_distance;
        prop_assert_eq!(d(&a, &b), d(&b, &a));
        prop_assert!(d(&a, &b) >= Rational64::from_integer(0));
        prop_assert!(d(&a, &b) <= Rational64::from_integer(3));
        prop_assert_eq!(d(&a, &b) == Rational64::from_integer(0), a == b);
        prop_assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c));
    }

    #[test]
    fn rips_is_the_clique_complex(points in proptest::collection::vec(payload(), 1..7), eps in 0i64..7) {
        let eps = Rational64::new(eps, 2);
        let n = points.len();
        let dist = |i: usize, j: usize| config_distance(&points[i], &points[j]);
        let k = vietoris_rips(n, dist, eps, 3);
        for mask in 1u32..1 << n {
            let verts: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            if verts.len() > 4 {
                continue;
            }
            let clique = verts.iter().all(|&i| verts.iter().all(|&j| i == j || dist(i, j) <= eps));
            prop_assert_eq!(k.contains(&Simplex::new(verts.clone()).unwrap()), clique);
        }
    }

    #[test]
    fn rips_grows_with_scale(points in proptest::collection::vec(payload(), 1..7), lo in 0i64..6, step in 0i64..3) {
        let dist = |i: usize, j: usize| config_distance(&points[i], &points[j]);
        let small = vietoris_rips(points.len(), dist, Rational64::new(lo, 2), 2);
        let big = vietoris_rips(points.len(), dist, Rational64::new(lo + step, 2), 2);
        prop_assert!(small.iter().all(|s| big.contains(s)));
    }

}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn snapshots_are_reproducible_and_injective(
        which in 0usize..9,
        inputs in proptest::collection::vec(word(3), 1..6),
        seed in any::<u64>(),
        eps in 1i64..6,
    ) {
        let (name, m) = fixtures::machines().swap_remove(which);
        // guess adds 2^(k+1) - 2 points per step at fuel k
        let fuel = if name == "guess" { 2 } else { 40 };
        let inputs: Vec<String> = inputs
            .into_iter()
            .map(|w| w.chars().filter(|&c| m.alphabet().contains(c)).collect())
            .collect();
        let eps = Rational64::new(eps, 2);
        let a = build_env(&m, &inputs, eps, 1, fuel, Policy::Seeded(seed)).unwrap();
        let b = build_env(&m, &inputs, eps, 1, fuel, Policy::Seeded(seed)).unwrap();
        prop_assert_eq!(&a, &b);
        let mut previous: Option<BTreeSet<Payload>> = None;
        for snap in &a.snapshots {
            let payloads: BTreeSet<Payload> = snap.points.iter().map(|p| p.payload.clone()).collect();
            prop_assert_eq!(payloads.len(), snap.points.len());
            prop_assert_eq!(snap.complex.count(0), snap.points.len());
            for (i, p) in snap.points.iter().enumerate() {
                prop_assert_eq!(snap.vertex_of(&p.payload), Some(i));
                prop_assert!(p.time <= snap.time);
            }
            if let Some(prev) = &previous {
                prop_assert!(prev.is_subset(&payloads));
            }
            previous = Some(payloads);
        }
    }
}
