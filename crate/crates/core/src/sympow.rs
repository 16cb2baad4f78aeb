//! Cohomology of the symmetric product `s^d Sigma` as the quotient of
//! `Lambda*(psi_1..psi_2g) (x) C[eta]` by the Macdonald relations, and the presentation
//! `sum_k Lambda^k_0 (x) C[eta, theta] / J_k`.
//!
//! Isotypic data comes from highest-weight vectors: the simple raising operators of
//! `sp(2g)` act on the quotient as even derivations, and the multiplicity space of
//! `Lambda^k_0` is their common kernel on the weight `e_1 + ... + e_k`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exterior::{primitive_dim, ExteriorMonomial};
use crate::floer::{associated_graded, binom, ModuleSlice};
use crate::linalg::{Echelon, SparseMatrix, SparseVec};
use crate::polyring::{QuotientAlgebra, QuotientOptions, SuperMonomial, SuperPolynomial, SuperRing, Var};
use crate::report::Check;
use crate::scalar::Scalar;

/// `eta` of weight 2 and `psi_1..psi_2g` of weight 1.
pub fn sympow_ring(g: u32) -> Arc<SuperRing> {
    let names: Vec<String> = (1..=2 * g).map(|i| format!("psi_{i}")).collect();
    let odd: Vec<(&str, u32)> = names.iter().map(|n| (n.as_str(), 1)).collect();
    SuperRing::new(&[("eta", 2)], &odd, None).expect("fixed variable names")
}

/// `C[eta, theta]`, both of weight 2.
pub fn eta_theta_ring() -> Arc<SuperRing> {
    SuperRing::new(&[("eta", 2), ("theta", 2)], &[], None).expect("fixed variable names")
}

/// `theta = sum_i psi_i psi_(g+i)` in [`sympow_ring`].
pub fn theta(ring: &Arc<SuperRing>, g: u32) -> SuperPolynomial {
    let mut p = SuperPolynomial::zero(ring);
    for i in 0..g {
        p.add_term(SuperMonomial { even: vec![0], odd: 1 << i | 1 << (g + i) }, Scalar::ONE);
    }
    p
}

/// The relations `eta^r prod_I (eta - psi_i psi_(g+i)) prod_J psi_j prod_K psi_(g+k)` over
/// disjoint `I, J, K` with `r + 2|I| + |J| + |K|` in `lo..=hi`.
pub fn macdonald_generators(ring: &Arc<SuperRing>, g: u32, lo: u32, hi: u32) -> Vec<SuperPolynomial> {
    let eta = SuperPolynomial::monomial(ring, SuperMonomial { even: vec![1], odd: 0 }, Scalar::ONE);
    let mut out = Vec::new();
    // Each index goes to none, I, J or K.
    for code in 0..4u64.pow(g) {
        let mut base = SuperPolynomial::constant(ring, Scalar::ONE);
        let mut odd: ExteriorMonomial = 0;
        let mut weight = 0;
        let mut c = code;
        for i in 0..g {
            match c % 4 {
                1 => {
                    let pair = SuperPolynomial::monomial(ring, SuperMonomial { even: vec![0], odd: 1 << i | 1 << (g + i) }, Scalar::ONE);
                    base = &base * &(&eta - &pair);
                    weight += 2;
                }
                2 => {
                    odd |= 1 << i;
                    weight += 1;
                }
                3 => {
                    odd |= 1 << (g + i);
                    weight += 1;
                }
                _ => {}
            }
            c /= 4;
        }
        let odd = SuperPolynomial::monomial(ring, SuperMonomial { even: vec![0], odd }, Scalar::ONE);
        let base = &base * &odd;
        for total in lo.max(weight)..=hi {
            out.push(&base * &eta.pow(total - weight));
        }
    }
    out
}

/// `H*(s^d Sigma)` for a surface of genus `g`.
#[derive(Clone, Debug)]
pub struct SymmetricProductRing {
    pub genus: u32,
    pub d: u32,
    pub quotient: QuotientAlgebra,
    /// `b_0 .. b_2d`.
    pub betti: Vec<usize>,
    /// Whether widening the generator window to `d+3` left the quotient unchanged.
    pub stabilized: bool,
}

fn build_window(g: u32, d: u32, hi: u32) -> Result<QuotientAlgebra> {
    let ring = sympow_ring(g);
    let gens = macdonald_generators(&ring, g, d + 1, hi);
    QuotientAlgebra::build(&ring, gens, QuotientOptions { degree_bound: 2 * d + 8, verify: true })
}

/// Builds the quotient from the window `{d+1, d+2}` and checks it against `{d+1, .., d+3}`.
pub fn macdonald_ideal(g: u32, d: u32) -> Result<SymmetricProductRing> {
    if g == 0 || g > 16 {
        return Err(Error::OutOfRange(format!("genus {g} outside 1..=16")));
    }
    let quotient = build_window(g, d, d + 2)?;
    let wide = build_window(g, d, d + 3)?;
    let stabilized = wide.basis() == quotient.basis()
        && quotient.ring().vars().all(|v| wide.op(v) == quotient.op(v));
    let dims = quotient.graded_dims();
    let top = dims.keys().max().copied().unwrap_or(0);
    let betti = (0..=top.max(2 * d)).map(|n| dims.get(&n).copied().unwrap_or(0)).collect();
    Ok(SymmetricProductRing { genus: g, d, quotient, betti, stabilized })
}

/// `R_k = sum_{i <= a} C(d-k-a+1, i) / C(g-k, i) (-theta)^i / i! eta^(a-i)`, `a = [(d-k)/2] + 1`,
/// and `R_(d+1) = 1`, in [`eta_theta_ring`].
pub fn build_rk(g: u32, d: u32, k: u32) -> Result<SuperPolynomial> {
    let ring = eta_theta_ring();
    if k > d + 1 {
        return Err(Error::OutOfRange(format!("k = {k} > d + 1 = {}", d + 1)));
    }
    if k == d + 1 {
        return Ok(SuperPolynomial::constant(&ring, Scalar::ONE));
    }
    if k >= g {
        return Err(Error::OutOfRange(format!("k = {k} must be below g = {g}")));
    }
    let a = (d - k) / 2 + 1;
    let top = (d - k + 1 - a) as i64;
    let mut p = SuperPolynomial::zero(&ring);
    let mut fact = 1i64;
    for i in 0..=a as i64 {
        if i > 0 {
            fact *= i;
        }
        let num = binom(top, i) as i64;
        if num == 0 {
            continue;
        }
        let den = binom((g - k) as i64, i) as i64 * fact;
        let sign = if i % 2 == 0 { 1 } else { -1 };
        p.add_term(SuperMonomial { even: vec![a - i as u32, i as u32], odd: 0 }, Scalar::ratio(sign * num, den));
    }
    Ok(p)
}

/// `J_k = (R_k, theta R_(k+1), ..., theta^(d+1-k))`.
pub fn jk_generators(g: u32, d: u32, k: u32) -> Result<Vec<SuperPolynomial>> {
    let ring = eta_theta_ring();
    let th = SuperPolynomial::var(&ring, "theta")?;
    (0..=d + 1 - k).map(|j| Ok(&th.pow(j) * &build_rk(g, d, k + j)?)).collect()
}

fn eta_theta_quotient(gens: Vec<SuperPolynomial>, d: u32) -> Result<QuotientAlgebra> {
    QuotientAlgebra::build(&eta_theta_ring(), gens, QuotientOptions { degree_bound: 4 * d + 12, verify: true })
}

/// Multiplicity space of `Lambda^k_0` inside `H*(s^d Sigma)`.
#[derive(Clone, Debug)]
pub struct HighestWeightBlock {
    pub k: u32,
    /// `dim` of the multiplicity space in each cohomological degree `0..=2d`.
    pub by_degree: Vec<usize>,
    pub vectors: Vec<SparseVec>,
}

impl SymmetricProductRing {
    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }

    fn top(&self) -> usize {
        self.betti.len() - 1
    }

    /// Simple raising operators as matrices: `E_i` (`i < g`) sends `psi_(i+1) -> psi_i`,
    /// `psi_(g+i) -> -psi_(g+i+1)`; `E_g` sends `psi_2g -> psi_g`. All fix `eta` and `theta`.
    pub fn raising_operators(&self) -> Vec<SparseMatrix> {
        let g = self.genus;
        let mut subs: Vec<Vec<(u32, u32, i64)>> = (0..g - 1).map(|i| vec![(i + 1, i, 1), (g + i, g + i + 1, -1)]).collect();
        subs.push(vec![(2 * g - 1, g - 1, 1)]);
        subs.iter().map(|s| self.derivation(s)).collect()
    }

    /// Even derivation with `psi_(from+1) -> c psi_(to+1)` for each `(from, to, c)`.
    fn derivation(&self, subs: &[(u32, u32, i64)]) -> SparseMatrix {
        let q = &self.quotient;
        let cols = q
            .basis()
            .iter()
            .map(|m| {
                let mut acc = SparseVec::new();
                for &(from, to, c) in subs {
                    if m.odd >> from & 1 == 0 || m.odd >> to & 1 == 1 {
                        continue;
                    }
                    let (lo, hi) = (from.min(to), from.max(to));
                    let between = (m.odd >> (lo + 1) & ((1u32 << (hi - lo - 1)) - 1)).count_ones();
                    let sign = if between.is_multiple_of(2) { c } else { -c };
                    let img = SuperMonomial { even: m.even.clone(), odd: m.odd & !(1 << from) | 1 << to };
                    acc = acc.add_scaled(&q.apply_monomial(&img, q.unit()), &Scalar::from_int(sign));
                }
                acc
            })
            .collect();
        SparseMatrix::from_columns(q.dim(), cols)
    }

    /// The raising operators are derivations of the quotient: `[E, x] = E(x)` for every
    /// generator `x`, which holds only if `E` preserves the Macdonald ideal.
    pub fn check_raising_operators(&self) -> Check {
        let q = &self.quotient;
        let g = self.genus;
        let ops = self.raising_operators();
        let mut subs: Vec<Vec<(u32, u32, i64)>> = (0..g - 1).map(|i| vec![(i + 1, i, 1), (g + i, g + i + 1, -1)]).collect();
        subs.push(vec![(2 * g - 1, g - 1, 1)]);
        for (e, s) in ops.iter().zip(&subs) {
            for v in q.ring().vars() {
                let x = q.op(v);
                let lhs = e.compose(x).sub(&x.compose(e));
                let mut rhs = SparseMatrix::zero(q.dim(), q.dim());
                if let Var::Odd(i) = v {
                    for &(from, to, c) in s {
                        if from == i as u32 {
                            rhs = rhs.add_scaled(q.op(Var::Odd(to as usize)), &Scalar::from_int(c));
                        }
                    }
                }
                if lhs != rhs {
                    return Check::new("raising operators are derivations of H*", false, || format!("{v:?}"));
                }
            }
        }
        Check::new("raising operators are derivations of H*", true, String::new)
    }

    fn weight(&self, m: ExteriorMonomial) -> Vec<i32> {
        let g = self.genus;
        (0..g).map(|i| (m >> i & 1) as i32 - (m >> (g + i) & 1) as i32).collect()
    }

    /// Highest-weight vectors of weight `e_1 + ... + e_k` for `0 <= k <= g`, degree by degree.
    pub fn highest_weight_blocks(&self) -> Vec<HighestWeightBlock> {
        let q = &self.quotient;
        let ring = q.ring().clone();
        let ops = self.raising_operators();
        let n = q.dim();
        (0..=self.genus)
            .map(|k| {
                let want: Vec<i32> = (0..self.genus).map(|i| i32::from(i < k)).collect();
                let mut by_degree = vec![0; self.top() + 1];
                let mut vectors = Vec::new();
                for deg in 0..=self.top() {
                    let cols: Vec<usize> = (0..n)
                        .filter(|&i| ring.degree(&q.basis()[i]) as usize == deg && self.weight(q.basis()[i].odd) == want)
                        .collect();
                    if cols.is_empty() {
                        continue;
                    }
                    let stacked: Vec<SparseVec> = cols
                        .iter()
                        .map(|&j| {
                            let mut pairs = Vec::new();
                            for (o, e) in ops.iter().enumerate() {
                                pairs.extend(e.col(j).iter().map(|(i, c)| (o * n + i, c.clone())));
                            }
                            SparseVec::from_pairs(pairs)
                        })
                        .collect();
                    let ker = SparseMatrix::from_columns(ops.len() * n, stacked).kernel();
                    by_degree[deg] = ker.len();
                    vectors.extend(ker.iter().map(|x| x.remap(|i| Some(cols[i]))));
                }
                HighestWeightBlock { k, by_degree, vectors }
            })
            .collect()
    }

    /// `Gr_theta` of the multiplicity space of `Lambda^k_0`, with the `eta`-module structure.
    pub fn theta_slices(&self, block: &HighestWeightBlock) -> Result<Vec<ModuleSlice>> {
        let q = &self.quotient;
        let th = q.poly_operator(&theta(q.ring(), self.genus))?;
        let eta = q.op_named("eta")?;
        associated_graded(&block.vectors, q.dim(), &th, eta, None)
    }
}

/// Outcome of the presentation checks for one `(g, d)`.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PresentationReport {
    pub genus: u32,
    pub d: u32,
    pub betti: Vec<usize>,
    /// `by_degree` multiplicity of `Lambda^k_0`, indexed by `k`.
    pub multiplicities: Vec<Vec<usize>>,
    pub relations: Vec<String>,
    pub checks: Vec<Check>,
}

impl PresentationReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

fn into_sympow(p: &SuperPolynomial, ring: &Arc<SuperRing>, g: u32) -> Result<SuperPolynomial> {
    let eta = SuperPolynomial::var(ring, "eta")?;
    p.map_to(ring, &[eta, theta(ring, g)], &[])
}

/// The presentation and its supporting facts for `0 <= k <= d`:
/// `psi_1..psi_k R_k` vanishes in `H*`; the multiplicity of `Lambda^k_0` in degree `n` is
/// `dim (C[eta, theta] / J_k)_(n-k)` and nothing else occurs; `(R_k, theta R_(k+1)) = J_k`;
/// the two-term recurrences for `R_k`; and the ring-level facts (stabilization, duality of
/// Betti numbers, `b_1 = 2g`, `Lambda^k_0 -> 0` for `k > d`, invariants generated by
/// `eta` and `theta`).
pub fn verify_presentation(s: &SymmetricProductRing) -> Result<PresentationReport> {
    let (g, d) = (s.genus, s.d);
    let q = &s.quotient;
    let ring = q.ring().clone();
    let mut checks = Vec::new();
    checks.push(Check::new("window {d+1, d+2} is stable", s.stabilized, || "d+3 generators change the quotient".into()));
    let b = &s.betti;
    let top = b.len() - 1;
    let dual = top == 2 * d as usize && (0..=top).all(|i| b[i] == b[top - i]);
    checks.push(Check::new("b_i = b_(2d-i)", dual, || format!("{b:?}")));
    if d > 0 {
        checks.push(Check::new("b_1 = 2g", b[1] == 2 * g as usize, || format!("b_1 = {}", b[1])));
    }
    checks.push(s.check_raising_operators());
    let mut relations = Vec::new();
    for k in 0..=d.min(g - 1) {
        let rk = build_rk(g, d, k)?;
        relations.push(format!("R_{k} = {rk}"));
        let lead = SuperMonomial { even: vec![0], odd: (1u32 << k) - 1 };
        let member = q.apply_poly(&into_sympow(&rk, &ring, g)?, &q.apply_monomial(&lead, q.unit()))?;
        checks.push(Check::new(format!("psi_1..psi_{k} R_{k} = 0"), member.is_zero(), || format!("k = {k}")));
    }
    let blocks = s.highest_weight_blocks();
    let mut total = vec![0usize; top + 1];
    for blk in &blocks {
        for (n, m) in blk.by_degree.iter().enumerate() {
            total[n] += m * primitive_dim(g, blk.k);
        }
        if blk.k > d {
            let empty = blk.vectors.is_empty();
            checks.push(Check::new(format!("Lambda^{}_0 maps to zero", blk.k), empty, || format!("{:?}", blk.by_degree)));
        }
    }
    checks.push(Check::new("only Lambda^k_0 isotypic components occur", total == *b, || format!("{total:?} != {b:?}")));
    for blk in blocks.iter().filter(|x| x.k <= d && x.k < g) {
        let k = blk.k;
        let jq = eta_theta_quotient(jk_generators(g, d, k)?, d)?;
        let dims = jq.graded_dims();
        let want: Vec<usize> =
            (0..=top).map(|n| if n < k as usize { 0 } else { dims.get(&((n - k as usize) as u32)).copied().unwrap_or(0) }).collect();
        checks.push(Check::new(format!("multiplicity of Lambda^{k}_0 matches C[eta,theta]/J_{k}"), blk.by_degree == want, || {
            format!("{:?} != {want:?}", blk.by_degree)
        }));
        // Ideal equality: the remaining generators of J_k vanish modulo the first two.
        let gens = jk_generators(g, d, k)?;
        let checked = match eta_theta_quotient(gens[..2.min(gens.len())].to_vec(), d) {
            Ok(two) => {
                let bad = gens.iter().position(|p| !two.normal_form(p).map(|v| v.is_zero()).unwrap_or(false));
                Check::new(format!("(R_{k}, theta R_{}) = J_{k}", k + 1), bad.is_none(), || format!("generator {} survives", bad.unwrap()))
            }
            Err(e) => Check::from_error(format!("(R_{k}, theta R_{}) = J_{k}", k + 1), &e),
        };
        checks.push(checked);
    }
    checks.extend(recurrence_checks(g, d)?);
    // Invariants: the multiplicity space of Lambda^0_0 against the span of eta^a theta^b.
    let th = q.poly_operator(&theta(&ring, g))?;
    let eta = q.op_named("eta")?;
    let mut span = Echelon::new(q.dim());
    for a in 0..=d {
        let mut v = (0..a).fold(q.unit().clone(), |v, _| eta.apply(&v));
        while !v.is_zero() {
            span.insert(&v);
            v = th.apply(&v);
        }
    }
    let inv = blocks[0].vectors.len();
    let gen_ok = span.rank() == inv && blocks[0].vectors.iter().all(|v| span.contains(v));
    checks.push(Check::new("invariant part is generated by eta and theta", gen_ok, || format!("{} vs {inv}", span.rank())));
    let multiplicities = blocks.iter().map(|b| b.by_degree.clone()).collect();
    Ok(PresentationReport { genus: g, d, betti: b.clone(), multiplicities, relations, checks })
}

/// For `0 <= k <= d-1`, with `a = [(d-k)/2] + 1`:
/// `R_k = R_(k+1) - (g-k-a) / ((g-k)(g-k-1)) theta R_(k+2)` when `d - k` is odd and
/// `R_k = eta R_(k+1) + (a-1) / ((g-k)(g-k-1)) theta R_(k+2)` when it is even.
pub fn recurrence_checks(g: u32, d: u32) -> Result<Vec<Check>> {
    let ring = eta_theta_ring();
    let eta = SuperPolynomial::var(&ring, "eta")?;
    let th = SuperPolynomial::var(&ring, "theta")?;
    let mut out = Vec::new();
    for k in 0..d.min(g.saturating_sub(1)) {
        let a = ((d - k) / 2 + 1) as i64;
        let den = ((g - k) * (g - k - 1)) as i64;
        let (rk, r1, r2) = (build_rk(g, d, k)?, build_rk(g, d, k + 1)?, build_rk(g, d, k + 2)?);
        let tail = &th * &r2;
        let rhs = if (d - k) % 2 == 1 {
            &r1 - &tail.scale(&Scalar::ratio(g as i64 - k as i64 - a, den))
        } else {
            &(&eta * &r1) + &tail.scale(&Scalar::ratio(a - 1, den))
        };
        let diff = &rk - &rhs;
        out.push(Check::new(format!("recurrence for R_{k}"), diff.is_zero(), || format!("difference {diff}")));
    }
    Ok(out)
}

/// Full rank of `H^i x H^(2d-i) -> H^2d` for every `i`.
pub fn poincare_pairing_check(s: &SymmetricProductRing) -> Result<Vec<Check>> {
    let q = &s.quotient;
    let ring = q.ring();
    let top = s.top();
    let by_deg = |n: usize| -> Vec<usize> { (0..q.dim()).filter(|&i| ring.degree(&q.basis()[i]) as usize == n).collect() };
    let top_idx = by_deg(top);
    if top_idx.len() != 1 {
        return Err(Error::DegeneratePairing(format!("top degree {top} has dimension {}", top_idx.len())));
    }
    let t = top_idx[0];
    let mut out = Vec::new();
    for i in 0..=top {
        let (rows, cols) = (by_deg(i), by_deg(top - i));
        let mut e = Echelon::new(cols.len());
        for &r in &rows {
            let pairs = cols
                .iter()
                .enumerate()
                .map(|(c, &j)| (c, q.apply_monomial(&q.basis()[r], &SparseVec::unit(j)).get(t)))
                .collect();
            e.insert(&SparseVec::from_pairs(pairs));
        }
        let full = rows.len() == cols.len() && e.rank() == rows.len();
        out.push(Check::new(format!("pairing in degree {i} has full rank"), full, || {
            format!("{} x {} of rank {}", rows.len(), cols.len(), e.rank())
        }));
    }
    Ok(out)
}

/// Betti numbers by degree for reporting.
pub fn betti_table(s: &SymmetricProductRing) -> BTreeMap<usize, usize> {
    s.betti.iter().copied().enumerate().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_and_surface() {
        assert_eq!(macdonald_ideal(1, 0).unwrap().betti, vec![1]);
        let s = macdonald_ideal(2, 1).unwrap();
        assert_eq!(s.betti, vec![1, 4, 1]);
        assert!(s.stabilized);
    }

    #[test]
    fn r0_for_surface() {
        // eta - theta/2, which vanishes on H*(Sigma) where theta = 2 eta.
        let r = build_rk(2, 1, 0).unwrap();
        assert_eq!(r.to_string(), "eta + (-1/2)*theta");
        assert_eq!(build_rk(3, 2, 3).unwrap().to_string(), "(1)");
    }

    #[test]
    fn surface_presentation() {
        let s = macdonald_ideal(2, 1).unwrap();
        let rep = verify_presentation(&s).unwrap();
        assert!(rep.pass(), "{rep:?}");
        assert!(poincare_pairing_check(&s).unwrap().iter().all(|c| c.pass));
    }
}
