use floer_core::adjunct::{
    check_thm0, check_thm_a, check_thm_b, check_thm_c, evaluate, reduce, sharpness_case, sweep, AdjunctionCase,
    ParityPolicy, Status,
};

fn case(g: u32, s: i64, k: i64) -> AdjunctionCase {
    AdjunctionCase::new(g, s, s == 0, k)
}

#[test]
fn sweep_is_clean() {
    let rep = sweep(6, 6, 10);
    assert!(rep.pass(), "{rep:?}");
    // 6 genera, 21 values of K.Sigma: both parities at Sigma^2 in 1..=6, only odd at 0.
    assert_eq!(rep.cases, 6 * 21 * (2 * 6 + 1));
}

#[test]
fn theorem_a_examples() {
    let a = |g, k, db| check_thm_a(&AdjunctionCase { d_b: Some(db), ..case(g, 0, k) });
    assert_eq!((a(1, 0, 0).status, a(1, 0, 0).equality), (Status::Pass, true));
    assert_eq!((a(3, 4, 0).status, a(3, 4, 0).equality), (Status::Pass, true));
    let v = a(3, 4, 1);
    assert_eq!((v.status, v.lhs, v.bound), (Status::Fail, Some(5), Some(4)));
}

#[test]
fn theorem_b_examples() {
    let b = |g, k, dk| check_thm_b(&AdjunctionCase { d_k: Some(dk), b1_zero: true, ..case(g, 0, k) });
    assert_eq!((b(1, 0, 0).status, b(1, 0, 0).equality), (Status::Pass, true));
    assert_eq!(b(4, 2, 2).status, Status::Pass);
    assert_eq!(b(2, 2, 1).status, Status::Fail);
    let no_b1 = AdjunctionCase { d_k: Some(0), ..case(1, 0, 0) };
    assert_eq!(check_thm_b(&no_b1).status, Status::NotApplicable);
}

#[test]
fn theorem_c_and_sharpness() {
    let c = |g, l, db, k| check_thm_c(&AdjunctionCase { d_b: Some(db), l: Some(l), ..case(g, 0, k) });
    assert_eq!(c(1, 0, 0, 0).status, Status::Pass);
    assert_eq!(c(2, 0, 2, 0).status, Status::NotApplicable);
    for g in 1..=4 {
        for l in 0..=4 {
            let v = check_thm_c(&sharpness_case(g, l));
            assert_eq!(v.lhs, Some(2 * (g + l) as i64 - 2));
            assert!(v.equality && v.status == Status::Pass);
        }
    }
}

#[test]
fn order_bound() {
    assert_eq!(check_thm0(&case(1, 0, 0)).bound, Some(1));
    let claimed = |n| check_thm0(&AdjunctionCase { claimed_order: Some(n), ..case(3, 0, 0) }).status;
    assert_eq!(claimed(5), Status::Fail);
    assert_eq!(claimed(3), Status::Pass);
}

#[test]
fn preconditions_never_fail() {
    let even_square_zero = AdjunctionCase { d_b: Some(100), ..AdjunctionCase::new(2, 0, false, 50) };
    let rep = evaluate(&even_square_zero, ParityPolicy::Warn);
    assert!(rep.verdicts.iter().all(|v| v.status == Status::NotApplicable));
    assert!(rep.pass());
    assert!(reduce(&AdjunctionCase::new(2, -1, true, 0)).is_err());
}

#[test]
fn odd_pairing_warns_or_rejects() {
    let c = AdjunctionCase { d_b: Some(0), ..AdjunctionCase::new(3, 0, true, 3) };
    let warn = evaluate(&c, ParityPolicy::Warn);
    assert_eq!(warn.warnings.len(), 1);
    assert_eq!(warn.verdicts[1].status, Status::Pass);
    let reject = evaluate(&c, ParityPolicy::Reject);
    assert!(reject.verdicts.iter().all(|v| v.status == Status::NotApplicable));
}
