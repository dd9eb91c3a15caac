//! Behaviour of AL and ATD on the synthetic simulation cases.

use simul_latency::policy::{gen_chunk_k, gen_two_segment, gen_wait_k, SweepRow};
use simul_latency::{
    assign_nca_times, atd, average_lagging, derive_chunks, sweep, Case, LatencyRatioMode,
    PolicyKind, Rational, SessionTrace,
};

fn exact_atd(trace: &SessionTrace) -> Rational {
    atd(&assign_nca_times::<Rational>(&derive_chunks(trace))).unwrap().value
}

fn exact_al(trace: &SessionTrace) -> Rational {
    average_lagging(&derive_chunks(trace), LatencyRatioMode::Output).unwrap()
}

fn column(rows: &[SweepRow], policy: &str, pick: fn(&SweepRow) -> f64) -> Vec<f64> {
    rows.iter().filter(|r| r.policy == policy).map(pick).collect()
}

fn non_decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[0] <= w[1] + 1e-12)
}

fn non_increasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[0] + 1e-12 >= w[1])
}

#[test]
fn wait_k_and_chunk_k_have_equal_atd_on_square_pairs() {
    for n in 1..=40 {
        for k in 1..=n {
            let w = exact_atd(&gen_wait_k(n, n, k).unwrap());
            let c = exact_atd(&gen_chunk_k(n, n, k).unwrap());
            assert_eq!(w, c, "n={n} k={k}");
            assert!(w >= Rational::from_integer(k as i64), "n={n} k={k}: {w}");
        }
        assert_eq!(exact_atd(&gen_chunk_k(n, n, n).unwrap()), Rational::from_integer(n as i64));
    }
}

#[test]
fn case1_atd_columns_coincide() {
    let r = sweep(Case::Case1, &[PolicyKind::Wait, PolicyKind::Chunk], 1..=40).unwrap();
    assert_eq!(column(&r.rows, "wait", |r| r.atd), column(&r.rows, "chunk", |r| r.atd));
}

#[test]
fn case2_al_is_discontinuous_while_atd_is_monotone() {
    let r = sweep(Case::Case2, &[PolicyKind::Wait, PolicyKind::Chunk], 1..=40).unwrap();
    let al_chunk = column(&r.rows, "chunk", |r| r.al);
    assert!(!non_decreasing(&al_chunk), "{al_chunk:?}");
    // chunk-19 -> chunk-20 drops by more than four tokens
    assert!(al_chunk[18] - al_chunk[19] > 4.0);
    assert!(non_decreasing(&column(&r.rows, "chunk", |r| r.atd)));
    assert!(non_decreasing(&column(&r.rows, "wait", |r| r.atd)));
    assert!(non_decreasing(&column(&r.rows, "wait", |r| r.al)));
}

#[test]
fn case3_al_goes_negative_but_atd_does_not() {
    let r = sweep(Case::Case3, &[PolicyKind::Wait, PolicyKind::Chunk], 1..=40).unwrap();
    for policy in ["wait", "chunk"] {
        let al = column(&r.rows, policy, |r| r.al);
        assert!(al[0] < 0.0, "{policy}: {al:?}");
        assert!(column(&r.rows, policy, |r| r.atd).iter().all(|&v| v >= 1.0));
    }
}

#[test]
fn case4_closed_form_and_shape() {
    for l1 in 1..=20i64 {
        let got = exact_atd(&gen_two_segment([20, 20], [l1 as usize, 20]).unwrap());
        assert_eq!(got, Rational::new(800, l1 + 20), "L1={l1}");
    }
    let r = sweep(Case::Case4, &[], 1..=60).unwrap();
    let atd: Vec<f64> = r.rows.iter().map(|r| r.atd).collect();
    let al: Vec<f64> = r.rows.iter().map(|r| r.al).collect();
    assert!(non_increasing(&atd[..20]), "{atd:?}");
    assert!(non_decreasing(&atd[19..]), "{atd:?}");
    assert!(non_increasing(&al), "{al:?}");
}

#[test]
fn case5_both_grow_and_al_starts_tiny() {
    let r = sweep(Case::Case5, &[], 1..=60).unwrap();
    assert!(non_decreasing(&r.rows.iter().map(|r| r.al).collect::<Vec<_>>()));
    assert!(non_decreasing(&r.rows.iter().map(|r| r.atd).collect::<Vec<_>>()));
    assert_eq!(exact_al(&gen_two_segment([20, 20], [20, 1]).unwrap()), Rational::new(40, 21));
}

#[test]
fn case1_al_jump() {
    assert_eq!(exact_al(&gen_chunk_k(40, 40, 39).unwrap()), Rational::new(781, 40));
    assert_eq!(exact_al(&gen_chunk_k(40, 40, 40).unwrap()), Rational::from_integer(40));
}
