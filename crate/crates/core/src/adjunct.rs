//! Adjunction-inequality oracle over integer case data, with the blow-up reduction to a
//! square-zero surface in an odd class.
//!
//! One blow-up replaces `Sigma` by its proper transform (`Sigma^2` drops by one) and the basic
//! class `K` by `K - eps E`, `eps` the sign of `K . Sigma`, which moves `K . Sigma` one step
//! away from zero. So `|K . Sigma| + Sigma^2` is invariant.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One surface `Sigma` of genus `g` in a four-manifold with `b+ > 1`, and a candidate basic class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AdjunctionCase {
    pub g: u32,
    pub self_int: i64,
    pub odd_class: bool,
    pub k_dot_sigma: i64,
    /// `d(b)` for the element `b` of the surface algebra.
    #[serde(default)]
    pub d_b: Option<u32>,
    /// Order of finite type `d(K)` of the basic class.
    #[serde(default)]
    pub d_k: Option<u32>,
    /// Number of basis loops `gamma_1..gamma_l` that vanish in `H_1(X)`.
    #[serde(default)]
    pub l: Option<u32>,
    #[serde(default)]
    pub b1_zero: bool,
    /// An order of finite type to test against the genus bound.
    #[serde(default)]
    pub claimed_order: Option<u32>,
}

impl AdjunctionCase {
    pub fn new(g: u32, self_int: i64, odd_class: bool, k_dot_sigma: i64) -> Self {
        AdjunctionCase { g, self_int, odd_class, k_dot_sigma, d_b: None, d_k: None, l: None, b1_zero: false, claimed_order: None }
    }

    /// `|K . Sigma| + Sigma^2`.
    pub fn invariant(&self) -> i64 {
        self.k_dot_sigma.abs() + self.self_int
    }

    fn check_applicable(&self) -> Result<()> {
        if self.g == 0 {
            return Err(Error::NotApplicable("genus must be at least 1".into()));
        }
        if self.self_int < 0 {
            return Err(Error::NotApplicable("negative self-intersection".into()));
        }
        if self.self_int == 0 && !self.odd_class {
            return Err(Error::NotApplicable("square-zero surface in an even class".into()));
        }
        if let Some(l) = self.l {
            if l > 2 * self.g {
                return Err(Error::NotApplicable(format!("l = {l} exceeds 2g = {}", 2 * self.g)));
            }
        }
        Ok(())
    }
}

/// Blow-ups performed by [`reduce`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ReductionTrace {
    pub blow_ups: u32,
    pub proper_transform_genus: u32,
    /// `eps` chosen at each blow-up; `+1` when `K . Sigma = 0`.
    pub signs: Vec<i32>,
    pub k_dot_sigma: i64,
    pub invariant: i64,
}

/// The square-zero odd-class case equivalent to `case`.
pub fn reduce(case: &AdjunctionCase) -> Result<(AdjunctionCase, ReductionTrace)> {
    case.check_applicable()?;
    let mut out = case.clone();
    let mut signs = Vec::new();
    while out.self_int > 0 {
        let eps = if out.k_dot_sigma < 0 { -1 } else { 1 };
        out.k_dot_sigma += eps;
        out.self_int -= 1;
        signs.push(eps as i32);
    }
    out.odd_class = true;
    debug_assert_eq!(out.invariant(), case.invariant());
    let trace = ReductionTrace {
        blow_ups: signs.len() as u32,
        proper_transform_genus: out.g,
        signs,
        k_dot_sigma: out.k_dot_sigma,
        invariant: out.invariant(),
    };
    Ok((out, trace))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Pass,
    Fail,
    NotApplicable,
}

/// `lhs <= bound` for one inequality, or why it does not apply.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Verdict {
    pub theorem: String,
    pub status: Status,
    pub lhs: Option<i64>,
    pub bound: Option<i64>,
    pub equality: bool,
    pub reason: Option<String>,
}

impl Verdict {
    fn compare(theorem: &str, lhs: i64, bound: i64) -> Verdict {
        Verdict {
            theorem: theorem.into(),
            status: if lhs <= bound { Status::Pass } else { Status::Fail },
            lhs: Some(lhs),
            bound: Some(bound),
            equality: lhs == bound,
            reason: None,
        }
    }

    fn not_applicable(theorem: &str, reason: impl Into<String>) -> Verdict {
        Verdict { theorem: theorem.into(), status: Status::NotApplicable, lhs: None, bound: None, equality: false, reason: Some(reason.into()) }
    }

    fn gate(theorem: &str, case: &AdjunctionCase, body: impl FnOnce(&AdjunctionCase) -> Verdict) -> Verdict {
        match reduce(case) {
            Ok((r, _)) => body(&r),
            Err(Error::NotApplicable(why)) => Self::not_applicable(theorem, why),
            Err(e) => Self::not_applicable(theorem, e.to_string()),
        }
    }
}

/// Order of finite type is at most `g`. Passes with the bound alone when no order is claimed.
pub fn check_thm0(case: &AdjunctionCase) -> Verdict {
    Verdict::gate("0", case, |c| match c.claimed_order {
        Some(n) => Verdict::compare("0", n as i64, c.g as i64),
        None => Verdict { lhs: None, equality: false, ..Verdict::compare("0", 0, c.g as i64) },
    })
}

/// `|K . Sigma| + Sigma^2 + d(b) <= 2g - 2`.
pub fn check_thm_a(case: &AdjunctionCase) -> Verdict {
    Verdict::gate("A", case, |c| match c.d_b {
        Some(db) => Verdict::compare("A", c.invariant() + db as i64, 2 * c.g as i64 - 2),
        None => Verdict::not_applicable("A", "d(b) not supplied"),
    })
}

/// `|K . Sigma| + Sigma^2 + 2 d(K) <= 2g - 2`, for `b_1 = 0`.
pub fn check_thm_b(case: &AdjunctionCase) -> Verdict {
    Verdict::gate("B", case, |c| match (c.b1_zero, c.d_k) {
        (false, _) => Verdict::not_applicable("B", "requires b_1 = 0"),
        (true, None) => Verdict::not_applicable("B", "d(K) not supplied"),
        (true, Some(dk)) => Verdict::compare("B", c.invariant() + 2 * dk as i64, 2 * c.g as i64 - 2),
    })
}

/// `|K . Sigma| + Sigma^2 + 2 d(b) <= 2g - 2`, for `d(b) <= l + 1`.
pub fn check_thm_c(case: &AdjunctionCase) -> Verdict {
    Verdict::gate("C", case, |c| match (c.l, c.d_b) {
        (None, _) => Verdict::not_applicable("C", "l not supplied"),
        (_, None) => Verdict::not_applicable("C", "d(b) not supplied"),
        (Some(l), Some(db)) if db > l + 1 => Verdict::not_applicable("C", format!("d(b) = {db} > l + 1 = {}", l + 1)),
        (Some(_), Some(db)) => Verdict::compare("C", c.invariant() + 2 * db as i64, 2 * c.g as i64 - 2),
    })
}

/// Every verdict for one case.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AdjunctionReport {
    pub case: AdjunctionCase,
    pub reduced: Option<AdjunctionCase>,
    pub trace: Option<ReductionTrace>,
    pub warnings: Vec<String>,
    pub verdicts: Vec<Verdict>,
}

impl AdjunctionReport {
    /// No verdict is a failure; not-applicable verdicts do not count against a case.
    pub fn pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.status != Status::Fail)
    }
}

/// Parity handling for `K . Sigma` on the reduced case, where it must be even.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ParityPolicy {
    #[default]
    Warn,
    Reject,
}

pub fn evaluate(case: &AdjunctionCase, parity: ParityPolicy) -> AdjunctionReport {
    let mut warnings = Vec::new();
    let (reduced, trace) = match reduce(case) {
        Ok((r, t)) => (Some(r), Some(t)),
        Err(_) => (None, None),
    };
    if let Some(r) = &reduced {
        if r.k_dot_sigma % 2 != 0 {
            let msg = format!("K.Sigma = {} is odd on the reduced surface; K is then not characteristic", r.k_dot_sigma);
            if parity == ParityPolicy::Reject {
                let verdicts = ["0", "A", "B", "C"].iter().map(|t| Verdict::not_applicable(t, msg.clone())).collect();
                return AdjunctionReport { case: case.clone(), reduced, trace, warnings: vec![msg], verdicts };
            }
            warnings.push(msg);
        }
    }
    let verdicts = vec![check_thm0(case), check_thm_a(case), check_thm_b(case), check_thm_c(case)];
    AdjunctionReport { case: case.clone(), reduced, trace, warnings, verdicts }
}

/// The connected sum with `l` copies of `S^1 x S^3`: genus `g + l`, square zero,
/// `K . Sigma = 2g - 2`, `b = gamma_1 .. gamma_l`.
pub fn sharpness_case(g: u32, l: u32) -> AdjunctionCase {
    AdjunctionCase { d_b: Some(l), l: Some(l), ..AdjunctionCase::new(g + l, 0, true, 2 * g as i64 - 2) }
}

/// Outcome of the exhaustive integer sweep.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SweepReport {
    pub cases: usize,
    pub invariance_failures: Vec<String>,
    pub stability_failures: Vec<String>,
    pub monotonicity_failures: Vec<String>,
    pub implication_failures: Vec<String>,
    pub sharpness_failures: Vec<String>,
}

impl SweepReport {
    pub fn pass(&self) -> bool {
        self.invariance_failures.is_empty()
            && self.stability_failures.is_empty()
            && self.monotonicity_failures.is_empty()
            && self.implication_failures.is_empty()
            && self.sharpness_failures.is_empty()
    }
}

/// All cases with `1 <= g <= g_max`, `0 <= Sigma^2 <= s_max`, `|K . Sigma| <= k_max`, both
/// parities of class and `0 <= d(b) <= 2g`: the reduction preserves `|K . Sigma| + Sigma^2`, the
/// verdict of A is the same on the reduced case, raising `d(b)` never turns FAIL into PASS, and
/// B with `d(K) = n` passing implies A with `d(b) = 2n` passing. Then the sharpness family for
/// `1 <= g <= 4`, `0 <= l <= 4` must meet C with equality.
pub fn sweep(g_max: u32, s_max: i64, k_max: i64) -> SweepReport {
    let mut rep = SweepReport::default();
    for g in 1..=g_max {
        for s in 0..=s_max {
            for k in -k_max..=k_max {
                for odd in [false, true] {
                    let base = AdjunctionCase::new(g, s, odd, k);
                    let Ok((red, trace)) = reduce(&base) else { continue };
                    rep.cases += 1;
                    if trace.invariant != base.invariant() || red.self_int != 0 || !red.odd_class {
                        rep.invariance_failures.push(format!("{base:?}"));
                    }
                    let mut last = Status::Pass;
                    for db in 0..=2 * g {
                        let c = AdjunctionCase { d_b: Some(db), ..base.clone() };
                        let direct = Verdict::compare("A", c.invariant() + db as i64, 2 * g as i64 - 2);
                        let via = check_thm_a(&c);
                        if direct.status != via.status {
                            rep.stability_failures.push(format!("{c:?}"));
                        }
                        if last == Status::Fail && via.status == Status::Pass {
                            rep.monotonicity_failures.push(format!("{c:?}"));
                        }
                        last = via.status;
                        if db % 2 == 0 {
                            let b = AdjunctionCase { d_k: Some(db / 2), b1_zero: true, ..base.clone() };
                            if check_thm_b(&b).status == Status::Pass && via.status != Status::Pass {
                                rep.implication_failures.push(format!("{b:?}"));
                            }
                        }
                    }
                }
            }
        }
    }
    for g in 1..=4 {
        for l in 0..=4 {
            let v = check_thm_c(&sharpness_case(g, l));
            if v.status != Status::Pass || !v.equality {
                rep.sharpness_failures.push(format!("g = {g}, l = {l}: {v:?}"));
            }
        }
    }
    rep
}
