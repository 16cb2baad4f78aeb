use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{SparseMatrix, SparseVec};
use crate::scalar::{Rational, Scalar};

/// Univariate polynomial over Q(i), coefficients lowest degree first, no trailing zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct UniPoly {
    c: Vec<Scalar>,
}

impl UniPoly {
    pub fn zero() -> Self {
        UniPoly { c: Vec::new() }
    }

    pub fn one() -> Self {
        UniPoly { c: vec![Scalar::ONE] }
    }

    pub fn x() -> Self {
        UniPoly { c: vec![Scalar::ZERO, Scalar::ONE] }
    }

    /// `x - a`.
    pub fn linear(a: &Scalar) -> Self {
        UniPoly { c: vec![-a, Scalar::ONE] }
    }

    pub fn from_coeffs(c: Vec<Scalar>) -> Self {
        let mut p = UniPoly { c };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.c.last().is_some_and(Scalar::is_zero) {
            self.c.pop();
        }
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.c
    }

    pub fn coeff(&self, k: usize) -> Scalar {
        self.c.get(k).cloned().unwrap_or(Scalar::ZERO)
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn lead(&self) -> Option<&Scalar> {
        self.c.last()
    }

    pub fn add(&self, o: &UniPoly) -> UniPoly {
        let n = self.c.len().max(o.c.len());
        UniPoly::from_coeffs((0..n).map(|k| &self.coeff(k) + &o.coeff(k)).collect())
    }

    pub fn sub(&self, o: &UniPoly) -> UniPoly {
        let n = self.c.len().max(o.c.len());
        UniPoly::from_coeffs((0..n).map(|k| &self.coeff(k) - &o.coeff(k)).collect())
    }

    pub fn scale(&self, s: &Scalar) -> UniPoly {
        UniPoly::from_coeffs(self.c.iter().map(|a| a * s).collect())
    }

    pub fn mul(&self, o: &UniPoly) -> UniPoly {
        if self.is_zero() || o.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Scalar::ZERO; self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in o.c.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                out[i + j] += a * b;
            }
        }
        UniPoly::from_coeffs(out)
    }

    pub fn pow(&self, e: u32) -> UniPoly {
        (0..e).fold(UniPoly::one(), |acc, _| acc.mul(self))
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn divrem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        let dd = d.degree().expect("polynomial division by zero");
        let inv = d.c[dd].inv().unwrap();
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (UniPoly::zero(), self.clone());
        }
        let mut q = vec![Scalar::ZERO; r.len() - dd];
        for k in (dd..r.len()).rev() {
            if r[k].is_zero() {
                continue;
            }
            let f = &r[k] * &inv;
            for (j, dj) in d.c.iter().enumerate() {
                if !dj.is_zero() {
                    r[k - dd + j] -= &(&f * dj);
                }
            }
            q[k - dd] = f;
        }
        r.truncate(dd);
        (UniPoly::from_coeffs(q), UniPoly::from_coeffs(r))
    }

    pub fn rem(&self, d: &UniPoly) -> UniPoly {
        self.divrem(d).1
    }

    pub fn monic(&self) -> UniPoly {
        match self.lead() {
            Some(l) => self.scale(&l.inv().unwrap()),
            None => UniPoly::zero(),
        }
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::from_coeffs(self.c.iter().enumerate().skip(1).map(|(k, a)| a * &Scalar::from_int(k as i64)).collect())
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        self.c.iter().rev().fold(Scalar::ZERO, |acc, a| &(&acc * x) + a)
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, o: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, s, t)` with `s*self + t*o = g`, `g` monic.
    pub fn xgcd(&self, o: &UniPoly) -> (UniPoly, UniPoly, UniPoly) {
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (UniPoly::one(), UniPoly::zero());
        let (mut t0, mut t1) = (UniPoly::zero(), UniPoly::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        let inv = r0.lead().map(|l| l.inv().unwrap()).unwrap_or(Scalar::ONE);
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    pub fn squarefree_part(&self) -> UniPoly {
        let g = self.gcd(&self.derivative());
        self.divrem(&g).0.monic()
    }

    /// Multiplicity of `a` as a root.
    pub fn root_multiplicity(&self, a: &Scalar) -> usize {
        let lin = UniPoly::linear(a);
        let mut p = self.clone();
        let mut m = 0;
        while !p.is_zero() {
            let (q, r) = p.divrem(&lin);
            if !r.is_zero() {
                break;
            }
            p = q;
            m += 1;
        }
        m
    }

    /// `p(A)` for a square sparse matrix.
    pub fn eval_matrix(&self, a: &SparseMatrix) -> SparseMatrix {
        let n = a.nrows();
        let mut acc = SparseMatrix::zero(n, n);
        for c in self.c.iter().rev() {
            acc = a.compose(&acc).add(&SparseMatrix::identity(n).scale(c));
        }
        acc
    }

    /// `p(A) v` by Horner's rule, without forming `p(A)`.
    pub fn apply(&self, a: &SparseMatrix, v: &SparseVec) -> SparseVec {
        let mut acc = SparseVec::new();
        for c in self.c.iter().rev() {
            acc = a.apply(&acc).add_scaled(v, c);
        }
        acc
    }

    /// Roots in Q(i) with multiplicities, ordered by (real part, imaginary part).
    ///
    /// The substitution `y = L x` (with `L` clearing denominators) yields a monic polynomial
    /// over Z[i], whose roots in Q(i) are Gaussian integers. Those are found by exhaustive
    /// search inside the Fujiwara disc, filtered by norm divisibility of the constant term.
    pub fn roots(&self) -> Vec<(Scalar, usize)> {
        if self.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let mut sq = self.squarefree_part();
        let mut found = Vec::new();
        if sq.coeff(0).is_zero() {
            found.push(Scalar::ZERO);
            sq = sq.divrem(&UniPoly::x()).0;
        }
        if sq.degree().unwrap_or(0) > 0 {
            found.extend(gaussian_integer_roots(&sq));
        }
        let mut out: Vec<(Scalar, usize)> =
            found.into_iter().map(|z| { let m = self.root_multiplicity(&z); (z, m) }).collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }
}

/// Gaussian integer as a pair of big integers.
type GInt = (BigInt, BigInt);

fn gmul(a: &GInt, b: &GInt) -> GInt {
    (&a.0 * &b.0 - &a.1 * &b.1, &a.0 * &b.1 + &a.1 * &b.0)
}

/// Roots of a monic squarefree polynomial with nonzero constant term.
fn gaussian_integer_roots(p: &UniPoly) -> Vec<Scalar> {
    let n = p.degree().unwrap();
    let l = p
        .coeffs()
        .iter()
        .flat_map(|c| [c.re.denom(), c.im.denom()])
        .fold(BigInt::one(), |acc, d| acc.lcm(&d));
    // q(y) = L^n p(y / L) has coefficients a_k L^(n-k), monic and integral.
    let mut q: Vec<GInt> = Vec::with_capacity(n + 1);
    let mut lp = BigInt::one();
    for k in (0..=n).rev() {
        let c = p.coeff(k);
        let re = c.re.numer() * (&lp / c.re.denom());
        let im = c.im.numer() * (&lp / c.im.denom());
        q.push((re, im));
        lp *= &l;
    }
    q.reverse();
    let norm = |z: &GInt| &z.0 * &z.0 + &z.1 * &z.1;
    let n0 = norm(&q[0]);
    // Fujiwara: |y| <= 2 max_k |q_{n-k}|^(1/k), with the last term halved.
    let mut bound = BigInt::zero();
    for k in 1..=n {
        let mut nk = norm(&q[n - k]);
        if k == n {
            nk = (nk + 3) / 4;
        }
        // Smallest R with R^(2k) >= nk.
        let (mut lo, mut hi) = (BigInt::zero(), BigInt::one());
        while hi.pow(2 * k as u32) < nk {
            hi *= 2;
        }
        while lo < hi {
            let mid: BigInt = (&lo + &hi) / 2;
            if mid.pow(2 * k as u32) >= nk {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        bound = bound.max(lo);
    }
    let b: i64 = i64::try_from(bound * 2).expect("root bound too large for search");
    let mut roots = Vec::new();
    for x in -b..=b {
        for y in -b..=b {
            let nz = x * x + y * y;
            if nz == 0 || nz > b * b || !(&n0 % BigInt::from(nz)).is_zero() {
                continue;
            }
            let z: GInt = (BigInt::from(x), BigInt::from(y));
            let mut acc: GInt = (BigInt::zero(), BigInt::zero());
            for c in q.iter().rev() {
                acc = gmul(&acc, &z);
                acc = (acc.0 + &c.0, acc.1 + &c.1);
            }
            if acc.0.is_zero() && acc.1.is_zero() {
                let lr = Rational::from(l.clone());
                roots.push(Scalar::new(
                    Rational::from(BigInt::from(x)) / &lr,
                    Rational::from(BigInt::from(y)) / &lr,
                ));
            }
        }
    }
    debug_assert!(roots.iter().all(|r| !r.is_zero()) && q[0].0.abs() + q[0].1.abs() > BigInt::zero());
    roots
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    fn from_roots(rs: &[Scalar]) -> UniPoly {
        rs.iter().fold(UniPoly::one(), |acc, r| acc.mul(&UniPoly::linear(r)))
    }

    #[test]
    fn roots_of_eigenvalue_shape() {
        let i = Scalar::I;
        let rs = vec![s(4), s(-4), s(4), &i * &s(8), &i * &s(-8), s(0), s(0), s(0)];
        let p = from_roots(&rs);
        let got = p.roots();
        assert_eq!(got.iter().map(|r| r.1).sum::<usize>(), 8);
        assert!(got.contains(&(s(0), 3)));
        assert!(got.contains(&(s(4), 2)));
        assert!(got.contains(&(&i * &s(8), 1)));
    }

    #[test]
    fn rational_roots_found() {
        let p = from_roots(&[Scalar::ratio(1, 2), Scalar::ratio(-3, 2)]).scale(&s(4));
        let got = p.roots();
        assert_eq!(got, vec![(Scalar::ratio(-3, 2), 1), (Scalar::ratio(1, 2), 1)]);
    }

    #[test]
    fn irreducible_has_no_roots() {
        let p = UniPoly::from_coeffs(vec![s(-2), s(0), s(1)]);
        assert!(p.roots().is_empty());
    }

    proptest! {
        #[test]
        fn xgcd_identity(a in proptest::collection::vec(-4i64..5, 1..6), b in proptest::collection::vec(-4i64..5, 1..6)) {
            let pa = UniPoly::from_coeffs(a.iter().map(|&x| s(x)).collect());
            let pb = UniPoly::from_coeffs(b.iter().map(|&x| s(x)).collect());
            prop_assume!(!pa.is_zero() || !pb.is_zero());
            let (g, u, v) = pa.xgcd(&pb);
            prop_assert_eq!(pa.mul(&u).add(&pb.mul(&v)), g.clone());
            if !pa.is_zero() { prop_assert!(pa.rem(&g).is_zero()); }
            if !pb.is_zero() { prop_assert!(pb.rem(&g).is_zero()); }
        }

        #[test]
        fn finds_planted_roots(rs in proptest::collection::vec((-6i64..7, -6i64..7), 1..6)) {
            let roots: Vec<Scalar> = rs.iter().map(|&(a, b)| Scalar::new(a.into(), b.into())).collect();
            let p = from_roots(&roots);
            let got = p.roots();
            prop_assert_eq!(got.iter().map(|r| r.1).sum::<usize>(), roots.len());
            for r in &roots {
                prop_assert!(got.iter().any(|(z, _)| z == r));
            }
        }
    }
}
