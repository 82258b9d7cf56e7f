mod common;

use prime_ratio::oracle::{self, Fixture};
use prime_ratio::strategies::{
    direct_search, direct_stages, targeted_search, ApproxQuery, Mode, ReturnPolicy,
};
use prime_ratio::{approx_error, approximate, sieve, Error, PrimePair, Rational};
use proptest::prelude::*;

fn f(n: i64, d: i64) -> Rational {
    Rational::frac(n, d)
}

fn query(t: &Rational, eps: &Rational) -> ApproxQuery {
    ApproxQuery::new(t.clone(), eps.clone())
        .unwrap()
        .with_q_cap(common::CONFORMANCE_Q_STOP)
        .with_direct_bounds(100, common::CONFORMANCE_N_CAP)
}

#[test]
fn fixed_fixtures_match_oracle_order() {
    for (t, eps) in common::conformance_fixtures() {
        let q = query(&t, &eps);
        let got = targeted_search(&q).unwrap();
        let want = oracle::replay_targeted_order(&t, &eps, 2, common::CONFORMANCE_Q_STOP)
            .unwrap()
            .expect("every fixture has a targeted hit");
        assert_eq!(got.pair, want.pair, "targeted t={t} eps={eps}");
        assert_eq!(got.error, want.error);

        let got = direct_search(&q.clone().with_mode(Mode::Direct))
            .ok()
            .map(|r| r.pair);
        let want = oracle::replay_direct_order(&t, &eps, 100, common::CONFORMANCE_N_CAP)
            .unwrap()
            .map(|a| a.pair);
        assert_eq!(got, want, "direct t={t} eps={eps}");
    }
}

#[test]
fn frozen_oracle_answers() {
    let frozen = include_str!("../fixtures/oracle_answers.txt");
    let fresh = oracle::fixture_table(&oracle::default_fixtures()).unwrap();
    assert_eq!(fresh.trim_end(), frozen.trim_end());
}

#[test]
fn known_first_hits() {
    let r = approximate(&ApproxQuery::new(f(1, 3), f(1, 100)).unwrap()).unwrap();
    assert_eq!(r.pair, PrimePair::new(47, 23).unwrap());
    assert_eq!(r.error, f(1, 105));
    assert_eq!(r.candidates_examined, 17);

    let q = ApproxQuery::new(f(1, 10), f(1, 100))
        .unwrap()
        .with_q_start(151);
    let r = approximate(&q).unwrap();
    assert_eq!(r.pair, PrimePair::new(181, 151).unwrap());
    assert_eq!(r.error, f(4, 415));

    let r = approximate(&ApproxQuery::new(f(999, 1000), f(1, 1000)).unwrap()).unwrap();
    assert_eq!(r.pair, PrimePair::new(4001, 2).unwrap());
    assert_eq!(r.error, f(3, 4_003_000));
}

#[test]
fn exhausted_direct_search_reports_best() {
    let (t, eps) = (f(1, 1000), f(1, 1_000_000));
    let q = ApproxQuery::new(t.clone(), eps.clone())
        .unwrap()
        .with_mode(Mode::Direct)
        .with_direct_bounds(100, 1_000);
    match direct_search(&q) {
        Err(Error::CapExceeded(c)) => {
            assert_eq!(c.max_prime_touched, 997);
            let best = c.best.expect("best pair reported");
            assert!(best.error >= eps);
            assert_eq!(approx_error(&best.pair, &t).unwrap(), best.error);
        }
        other => panic!("expected cap exceeded, got {other:?}"),
    }
    assert_eq!(
        oracle::replay_direct_order(&t, &eps, 100, 1_000).unwrap(),
        None
    );
}

#[test]
fn stages_partition_the_range() {
    assert_eq!(direct_stages(100, 1_000), vec![100, 200, 400, 800, 1_000]);
    assert_eq!(direct_stages(100, 800), vec![100, 200, 400, 800]);
    assert_eq!(direct_stages(100, 100), vec![100]);
    // a nearly-exact target is reached only in the last stage
    let t = f(2, 1_000); // q r = 1.004 q
    let eps = f(1, 200_000);
    let q = ApproxQuery::new(t.clone(), eps.clone())
        .unwrap()
        .with_mode(Mode::Direct)
        .with_direct_bounds(100, 10_000);
    let got = direct_search(&q).ok().map(|r| r.pair);
    let want = oracle::replay_direct_order(&t, &eps, 100, 10_000)
        .unwrap()
        .map(|a| a.pair);
    assert_eq!(got, want);
}

#[test]
fn best_policy_matches_exhaustive_minimum() {
    for (n, t) in [
        (100, f(1, 3)),
        (1_000, f(1, 10)),
        (500, f(7, 9)),
        (300, f(1, 50)),
    ] {
        let best = oracle::best_pair_up_to(n, &t).unwrap();
        let q = ApproxQuery::new(t.clone(), f(1, 1_000_000_000))
            .unwrap()
            .with_mode(Mode::Direct)
            .with_policy(ReturnPolicy::BestWithinCap)
            .with_direct_bounds(n.min(100), n);
        let got = match direct_search(&q) {
            Ok(r) => r.error,
            Err(Error::CapExceeded(c)) => c.best.unwrap().error,
            Err(e) => panic!("{e}"),
        };
        assert_eq!(got, best.error, "N={n} t={t}");
    }
}

#[test]
fn searches_are_deterministic() {
    for (t, eps) in common::conformance_fixtures().into_iter().take(5) {
        let q = ApproxQuery::new(t, eps).unwrap();
        assert_eq!(approximate(&q).unwrap(), approximate(&q).unwrap());
    }
}

#[test]
fn prime_count_small_values() {
    let expect = [
        (10, 4),
        (100, 25),
        (1_000, 168),
        (10_000, 1_229),
        (100_000, 9_592),
    ];
    for (x, pi) in expect {
        assert_eq!(sieve::prime_count(x), pi);
    }
}

fn target() -> impl Strategy<Value = Rational> {
    (1i64..1_000).prop_map(|k| Rational::frac(k, 1_000))
}

fn tolerance() -> impl Strategy<Value = Rational> {
    (10i64..2_000).prop_map(|d| Rational::frac(1, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn random_queries_match_oracle(t in target(), eps in tolerance()) {
        let q = query(&t, &eps);
        let got = targeted_search(&q).ok().map(|r| r.pair);
        let want = oracle::replay_targeted_order(&t, &eps, 2, common::CONFORMANCE_Q_STOP)
            .unwrap()
            .map(|a| a.pair);
        prop_assert_eq!(got, want);

        let got = direct_search(&q.clone().with_mode(Mode::Direct)).ok().map(|r| r.pair);
        let want = oracle::replay_direct_order(&t, &eps, 100, common::CONFORMANCE_N_CAP)
            .unwrap()
            .map(|a| a.pair);
        prop_assert_eq!(got, want);
    }

    #[test]
    fn no_strategy_beats_exhaustive_minimum(t in target(), eps in tolerance()) {
        let q = query(&t, &eps).with_mode(Mode::Direct).with_direct_bounds(100, 1_000);
        if let Ok(r) = direct_search(&q) {
            let best = oracle::best_pair_up_to(1_000, &t).unwrap();
            prop_assert!(best.error <= r.error);
        }
    }
}

proptest! {
    #[test]
    fn error_is_under_three_relative_offsets(
        qi in 0usize..500,
        gap in 1usize..500,
        k in 1i64..1_000,
    ) {
        let primes = sieve::primes_up_to(10_000).unwrap().into_vec();
        let q = primes[qi];
        let p = primes[qi + gap];
        let t = Rational::frac(k, 1_000);
        let r = prime_ratio::target_ratio(&t).unwrap();
        let qr = Rational::from(q) * &r;
        let delta = (Rational::from(p) - &qr).abs() / qr;
        let e = approx_error(&PrimePair::new(p, q).unwrap(), &t).unwrap();
        prop_assert!(e <= Rational::integer(3) * delta);
    }
}

#[test]
fn fixture_enum_covers_all_kinds() {
    let fx = oracle::default_fixtures();
    assert!(fx.iter().any(|f| matches!(f, Fixture::Best { .. })));
    assert!(fx.iter().any(|f| matches!(f, Fixture::Targeted { .. })));
    assert!(fx.iter().any(|f| matches!(f, Fixture::Direct { .. })));
}
