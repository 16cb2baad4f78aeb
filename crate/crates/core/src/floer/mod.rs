//! Floer and Fukaya-Floer rings `T_{g,k} = C[[t]][alpha, beta, gamma] / J_{g-k}` and their
//! two-variable reductions, built from the three-term recursion.

mod atlas;
mod graded;
mod hr;
mod split;

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::polyring::{QuotientAlgebra, QuotientOptions, SuperPolynomial, SuperRing};
use crate::scalar::{Rational, Scalar, TruncatedSeries};

pub use atlas::{
    build_floer, eigenvalue_table, split_atlas, verify_gr_structure, verify_quotient_bounds, verify_ranks,
    verify_rewriting_degrees, ArtinianAtlas, AtlasPiece, Eigenvalues, FloerRing, HrDescriptor, HrShape, PieceReport,
};
pub use graded::{associated_graded, coefficient_pattern, gamma_beta_basis, rewrite_support, ModuleSlice, PatternReport};
pub use hr::{BoundCheck, HrBlock, HrModule};
pub use split::{artinian_split, generalized_eigenspace_dim, LocalPiece};

/// Name of the pseudo-random generator used for perturbation profiles.
pub const PRNG_NAME: &str = "ChaCha8Rng(seed_from_u64, stream = profile index)";

/// Largest genus built without an explicit override.
pub const DEFAULT_GENUS_CEILING: u32 = 5;

/// Which recursion a perturbation entry belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum Family {
    /// `f_ij` in the `(alpha, beta, gamma)` recursion.
    Three,
    /// `fbar_ij` in the `(alpha, beta)` recursion.
    Two,
}

/// One perturbation series `f_ij` used at recursion step `r -> r + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PerturbationEntry {
    pub family: Family,
    pub i: u8,
    pub j: u8,
    pub r: u32,
    pub series: TruncatedSeries,
}

/// Series perturbations of the recursions for a fixed genus. Missing entries are zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PerturbationProfile {
    pub genus: u32,
    pub truncation: usize,
    pub entries: Vec<PerturbationEntry>,
}

const THREE_SLOTS: [(u8, u8); 6] = [(1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (2, 3)];
const TWO_SLOTS: [(u8, u8); 3] = [(1, 2), (2, 2), (2, 1)];

impl PerturbationProfile {
    pub fn zero(genus: u32, truncation: usize) -> Self {
        PerturbationProfile { genus, truncation, entries: Vec::new() }
    }

    /// Random profile: every slot gets `sum_{m=1}^{N-1} c_m t^m` with `c_m = a/b`,
    /// `a` in `-2..=2`, `b` in `1..=3`.
    pub fn random(genus: u32, truncation: usize, rng: &mut ChaCha8Rng) -> Self {
        let mut entries = Vec::new();
        for r in 0..genus {
            for (family, slots) in [(Family::Three, &THREE_SLOTS[..]), (Family::Two, &TWO_SLOTS[..])] {
                for &(i, j) in slots {
                    let mut coeffs = vec![Scalar::ZERO];
                    for _ in 1..truncation {
                        let a: i64 = rng.gen_range(-2..=2);
                        let b: i64 = rng.gen_range(1..=3);
                        coeffs.push(Scalar::ratio(a, b));
                    }
                    entries.push(PerturbationEntry {
                        family,
                        i,
                        j,
                        r,
                        series: TruncatedSeries::from_coeffs(coeffs, truncation),
                    });
                }
            }
        }
        PerturbationProfile { genus, truncation, entries }
    }

    /// The `index`-th profile of the family seeded by `seed`; independent of other indices.
    pub fn seeded(genus: u32, truncation: usize, seed: u64, index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        Self::random(genus, truncation, &mut rng)
    }

    pub fn get(&self, family: Family, i: u8, j: u8, r: u32) -> Option<&TruncatedSeries> {
        self.entries.iter().find(|e| e.family == family && e.i == i && e.j == j && e.r == r).map(|e| &e.series)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.series.is_zero())
    }
}

/// Which presentation a quotient came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum Presentation {
    /// `C[[t]][alpha, beta, gamma] / J_{g-k}`.
    Full,
    /// `C[[t]][alpha, beta] / Jbar_{g-k}`.
    Reduced,
    /// `T_{g,k} / gamma T_{g,k}`.
    GammaQuotient,
}

/// A built Floer-type quotient together with its labels.
#[derive(Clone, Debug)]
pub struct FloerQuotient {
    pub genus: u32,
    pub k: u32,
    pub presentation: Presentation,
    pub algebra: QuotientAlgebra,
}

impl FloerQuotient {
    /// Rank over the series ring (the plain dimension when there is no `t`).
    pub fn rank(&self) -> Result<usize> {
        self.algebra
            .series_rank()
            .ok_or_else(|| Error::StructureMismatch(format!("T_{{{},{}}} is not free over the series ring", self.genus, self.k)))
    }
}

/// Shared ambient ring for the three-variable presentation.
pub fn full_ring(truncation: Option<usize>) -> Arc<SuperRing> {
    let vars = [("alpha", 2), ("beta", 4), ("gamma", 6)];
    match truncation {
        // A perturbation multiplies R^i_r, whose degree is at most 2 above the leading degree
        // of the new relation; t lowering the filtration by 2 keeps the leading form at t = 0.
        Some(n) => SuperRing::new_filtered(&vars, &[], ("t", n), T_DROP),
        None => SuperRing::new(&vars, &[], None),
    }
    .expect("valid ring")
}

const T_DROP: u32 = 2;

/// Shared ambient ring for the two-variable presentation.
pub fn reduced_ring(truncation: Option<usize>) -> Arc<SuperRing> {
    let vars = [("alpha", 2), ("beta", 4)];
    match truncation {
        Some(n) => SuperRing::new_filtered(&vars, &[], ("t", n), T_DROP),
        None => SuperRing::new(&vars, &[], None),
    }
    .expect("valid ring")
}

/// `beta_0 = 8` for even `r`, `-8` for odd `r`.
pub fn beta0(r: i32) -> Scalar {
    Scalar::from_int(if r.rem_euclid(2) == 0 { 8 } else { -8 })
}

/// Eigenvalue of `alpha` on the piece labelled `r`: `4r` for odd `r`, `4ri` for even `r`.
pub fn alpha0(r: i32) -> Scalar {
    let v = Rational::from(4 * r as i64);
    if r.rem_euclid(2) == 0 {
        Scalar::new(Rational::ZERO, v)
    } else {
        Scalar::real(v)
    }
}

/// Inverse of [`alpha0`], if `a` has that shape.
pub fn label_of(a: &Scalar) -> Option<i32> {
    let as_int = |q: &Rational| q.is_integer().then(|| q.numer().try_into().ok()).flatten();
    let (re, im): (i64, i64) = (as_int(&a.re)?, as_int(&a.im)?);
    match (re, im) {
        (0, 0) => Some(0),
        (re, 0) if re % 4 == 0 && (re / 4) % 2 != 0 => Some((re / 4) as i32),
        (0, im) if im % 4 == 0 && (im / 4) % 2 == 0 => Some((im / 4) as i32),
        _ => None,
    }
}

fn pert(ring: &Arc<SuperRing>, p: Option<&PerturbationProfile>, fam: Family, i: u8, j: u8, r: u32) -> Result<SuperPolynomial> {
    match p.and_then(|p| p.get(fam, i, j, r)) {
        Some(s) => SuperPolynomial::series(ring, s),
        None => Ok(SuperPolynomial::zero(ring)),
    }
}

fn check_profile(g: u32, truncation: Option<usize>, p: Option<&PerturbationProfile>) -> Result<()> {
    if let Some(p) = p {
        if p.genus != g {
            return Err(Error::GenusMismatch(p.genus, g));
        }
        if !p.is_zero() && truncation != Some(p.truncation) {
            return Err(Error::InvalidInput("perturbation truncation does not match the ring".into()));
        }
    }
    Ok(())
}

/// `(R^1_r, R^2_r, R^3_r)` in `ring`, from the three-term recursion.
pub fn three_relations(
    ring: &Arc<SuperRing>,
    g: u32,
    r: u32,
    profile: Option<&PerturbationProfile>,
) -> Result<[SuperPolynomial; 3]> {
    let var = |n: &str| SuperPolynomial::var(ring, n);
    let c = |x: Scalar| SuperPolynomial::constant(ring, x);
    let (alpha, beta, gamma) = (var("alpha")?, var("beta")?, var("gamma")?);
    let mut rel = [c(Scalar::ONE), SuperPolynomial::zero(ring), SuperPolynomial::zero(ring)];
    for s in 0..r {
        let f = |i, j| pert(ring, profile, Family::Three, i, j, s);
        let sign8 = Scalar::from_int(if s % 2 == 0 { -8 } else { 8 });
        let r2 = Scalar::from_int((s * s) as i64);
        let two_r = Scalar::ratio(2 * s as i64, s as i64 + 1);
        let n1 = &(&(&(&alpha + &f(1, 1)?) * &rel[0]) + &(&(&c(r2.clone()) + &f(1, 2)?.scale(&r2)) * &rel[1]))
            + &(&f(1, 3)? * &rel[2]);
        let n2 = &(&(&(&(&beta + &c(sign8)) + &f(2, 1)?) * &rel[0]) + &(&f(2, 2)? * &rel[1]))
            + &(&(&c(two_r) + &f(2, 3)?) * &rel[2]);
        let n3 = &gamma * &rel[0];
        rel = [n1, n2, n3];
    }
    let _ = g;
    Ok(rel)
}

/// `(Rbar^1_r, Rbar^2_r)` from the two-variable recursion.
pub fn two_relations(
    ring: &Arc<SuperRing>,
    r: u32,
    profile: Option<&PerturbationProfile>,
) -> Result<[SuperPolynomial; 2]> {
    let var = |n: &str| SuperPolynomial::var(ring, n);
    let c = |x: Scalar| SuperPolynomial::constant(ring, x);
    let (alpha, beta) = (var("alpha")?, var("beta")?);
    let mut rel = [c(Scalar::ONE), SuperPolynomial::zero(ring)];
    for s in 0..r {
        let f = |i, j| pert(ring, profile, Family::Two, i, j, s);
        let sign8 = Scalar::from_int(if s % 2 == 0 { -8 } else { 8 });
        let r2 = Scalar::from_int((s * s) as i64);
        let n1 = &(&(&alpha + &f(1, 2)?) * &rel[0]) + &(&(&c(r2.clone()) + &f(2, 2)?.scale(&r2)) * &rel[1]);
        let n2 = &(&(&(&beta + &c(sign8)) + &f(2, 1)?) * &rel[0]) + &(&f(2, 2)? * &rel[1]);
        rel = [n1, n2];
    }
    Ok(rel)
}

fn options_for(g: u32, k: u32) -> QuotientOptions {
    // Basis degree is at most 6 (g - k - 1); Macaulay degree needs a few weights of slack.
    QuotientOptions { degree_bound: 6 * (g - k) + 24, verify: true }
}

fn check_range(g: u32, k: u32) -> Result<()> {
    if g == 0 {
        return Err(Error::OutOfRange("genus must be at least 1".into()));
    }
    if k >= g {
        return Err(Error::OutOfRange(format!("k = {k} must satisfy 0 <= k < g = {g}")));
    }
    Ok(())
}

/// `T_{g,k}`; without `truncation` this is the `t = 0` (Floer) ring.
pub fn build_full(g: u32, k: u32, truncation: Option<usize>, profile: Option<&PerturbationProfile>) -> Result<FloerQuotient> {
    check_range(g, k)?;
    check_profile(g, truncation, profile)?;
    let ring = full_ring(truncation);
    let rel = three_relations(&ring, g, g - k, profile)?;
    let algebra = QuotientAlgebra::build(&ring, rel.to_vec(), options_for(g, k))?;
    Ok(FloerQuotient { genus: g, k, presentation: Presentation::Full, algebra })
}

/// `Tbar_{g,k}` from the two-variable recursion.
pub fn build_reduced(g: u32, k: u32, truncation: Option<usize>, profile: Option<&PerturbationProfile>) -> Result<FloerQuotient> {
    check_range(g, k)?;
    check_profile(g, truncation, profile)?;
    let ring = reduced_ring(truncation);
    let rel = two_relations(&ring, g - k, profile)?;
    let algebra = QuotientAlgebra::build(&ring, rel.to_vec(), options_for(g, k))?;
    Ok(FloerQuotient { genus: g, k, presentation: Presentation::Reduced, algebra })
}

/// `T_{g,k} / gamma T_{g,k}`, presented as `J_{g-k} + (gamma)`.
pub fn build_gamma_quotient(g: u32, k: u32, truncation: Option<usize>, profile: Option<&PerturbationProfile>) -> Result<FloerQuotient> {
    check_range(g, k)?;
    check_profile(g, truncation, profile)?;
    let ring = full_ring(truncation);
    let mut gens = three_relations(&ring, g, g - k, profile)?.to_vec();
    gens.push(SuperPolynomial::var(&ring, "gamma")?);
    let algebra = QuotientAlgebra::build(&ring, gens, options_for(g, k))?;
    Ok(FloerQuotient { genus: g, k, presentation: Presentation::GammaQuotient, algebra })
}

/// `C(n, 3)` style binomial on small integers.
pub fn binom(n: i64, k: i64) -> usize {
    if k < 0 || n < k {
        return 0;
    }
    (0..k).fold(1i64, |acc, i| acc * (n - i) / (i + 1)) as usize
}

/// Expected rank of `T_{g,k}`: `C(g-k+2, 3)`.
pub fn expected_full_rank(g: u32, k: u32) -> usize {
    binom((g - k + 2) as i64, 3)
}

/// Expected rank of `Tbar_{g,k}`: `C(g-k+1, 2)`.
pub fn expected_reduced_rank(g: u32, k: u32) -> usize {
    binom((g - k + 1) as i64, 2)
}

/// Rank of `R_{g,k,r}`: number of `(a, b)` with `2a + b < g - k - |r|`.
pub fn expected_piece_rank(g: u32, k: u32, r: i32) -> usize {
    let gb = g as i64 - k as i64 - r.abs() as i64;
    if gb <= 0 {
        return 0;
    }
    (0..gb).map(|b| ((gb - b - 1) / 2 + 1) as usize).sum()
}

/// Rank of `Rbar_{g,k,r}`: `[(g - k - 1 - |r|)/2] + 1`, or 0 when `|r| > g - k - 1`.
pub fn expected_reduced_piece_rank(g: u32, k: u32, r: i32) -> usize {
    let gb = g as i64 - k as i64 - r.abs() as i64;
    if gb <= 0 {
        0
    } else {
        ((gb - 1) / 2 + 1) as usize
    }
}

/// Whether the monomials in the even generators of total degree `< g - k` (`alpha^a beta^b gamma^c`
/// for `T`, `alpha^a beta^b` for `Tbar`) are independent and as many as the rank; checked at `t = 0`.
pub fn standard_basis_claim(q: &FloerQuotient) -> Result<bool> {
    let q0 = q.algebra.specialize_t0()?;
    let ring = q0.ring().clone();
    let n = q.genus - q.k;
    let mut vecs = Vec::new();
    let nvars = ring.n_even();
    let mut exps = vec![0u32; nvars];
    fn rec(i: usize, left: u32, exps: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == exps.len() {
            out.push(exps.clone());
            return;
        }
        for e in 0..=left {
            exps[i] = e;
            rec(i + 1, left - e, exps, out);
        }
        exps[i] = 0;
    }
    let mut all = Vec::new();
    rec(0, n.saturating_sub(1), &mut exps, &mut all);
    if n == 0 {
        all.clear();
    }
    for e in all {
        let m = crate::polyring::SuperMonomial { even: e, odd: 0 };
        vecs.push(q0.apply_monomial(&m, q0.unit()));
    }
    let count = vecs.len();
    Ok(count == q0.dim() && crate::linalg::Basis::new(q0.dim(), vecs).is_ok())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_relations() {
        let ring = reduced_ring(None);
        let [r1, r2] = two_relations(&ring, 2, None).unwrap();
        assert_eq!(r1.to_string(), "alpha^2 + beta + (-8)");
        assert_eq!(r2.to_string(), "alpha*beta + (8)*alpha");
        let [r1, r2] = two_relations(&ring, 3, None).unwrap();
        // alpha (alpha^2 + 5 beta + 24) and (beta - 8)(alpha^2 + beta - 8).
        assert_eq!(r1.to_string(), "alpha^3 + (5)*alpha*beta + (24)*alpha");
        assert_eq!(r2.to_string(), "alpha^2*beta + beta^2 + (-8)*alpha^2 + (-16)*beta + (64)");
        let full = full_ring(None);
        let [a, b, c] = three_relations(&full, 3, 2, None).unwrap();
        assert_eq!(a.to_string(), "alpha^2 + beta + (-8)");
        assert_eq!(b.to_string(), "alpha*beta + gamma + (8)*alpha");
        assert_eq!(c.to_string(), "alpha*gamma");
    }

    #[test]
    fn labels_roundtrip() {
        for r in -6..=6 {
            assert_eq!(label_of(&alpha0(r)), Some(r));
        }
        assert_eq!(label_of(&Scalar::from_int(8)), None);
    }

    #[test]
    fn small_ranks() {
        for g in 1..=3 {
            for k in 0..g {
                let t = build_full(g, k, None, None).unwrap();
                assert_eq!(t.rank().unwrap(), expected_full_rank(g, k));
                let tb = build_reduced(g, k, None, None).unwrap();
                assert_eq!(tb.rank().unwrap(), expected_reduced_rank(g, k));
            }
        }
    }

    #[test]
    fn genus_mismatch_in_profile() {
        let p = PerturbationProfile::zero(3, 4);
        assert_eq!(build_full(2, 0, Some(4), Some(&p)).unwrap_err(), Error::GenusMismatch(3, 2));
    }

    #[test]
    fn seeded_profiles_are_reproducible() {
        assert_eq!(PerturbationProfile::seeded(3, 4, 7, 2), PerturbationProfile::seeded(3, 4, 7, 2));
        assert_ne!(PerturbationProfile::seeded(3, 4, 7, 2), PerturbationProfile::seeded(3, 4, 7, 3));
    }
}
