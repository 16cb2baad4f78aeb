use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::gaussian::Scalar;
use crate::error::{Error, Result};

/// Power series in `t` over Q(i), truncated modulo `t^N`. `coeffs.len() == N >= 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    coeffs: Vec<Scalar>,
}

impl TruncatedSeries {
    pub fn zero(n: usize) -> Self {
        assert!(n >= 1, "truncation order must be at least 1");
        TruncatedSeries { coeffs: vec![Scalar::ZERO; n] }
    }

    pub fn constant(c: Scalar, n: usize) -> Self {
        let mut s = Self::zero(n);
        s.coeffs[0] = c;
        s
    }

    /// `t^k` truncated at order `n`.
    pub fn t_power(k: usize, n: usize) -> Self {
        let mut s = Self::zero(n);
        if k < n {
            s.coeffs[k] = Scalar::ONE;
        }
        s
    }

    /// Pads or truncates `coeffs` to length `n`.
    pub fn from_coeffs(mut coeffs: Vec<Scalar>, n: usize) -> Self {
        assert!(n >= 1, "truncation order must be at least 1");
        coeffs.resize(n, Scalar::ZERO);
        TruncatedSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &Scalar {
        &self.coeffs[k]
    }

    pub fn constant_term(&self) -> &Scalar {
        &self.coeffs[0]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    /// Lowest exponent with a nonzero coefficient, `None` for zero.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        TruncatedSeries { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// Multiplicative inverse; fails unless the constant term is nonzero.
    pub fn invert(&self) -> Result<Self> {
        let a0 = self.coeffs[0].inv().map_err(|_| Error::NotAUnit)?;
        let n = self.order();
        let mut b = vec![Scalar::ZERO; n];
        b[0] = a0.clone();
        for k in 1..n {
            let mut acc = Scalar::ZERO;
            for j in 1..=k {
                acc += &self.coeffs[j] * &b[k - j];
            }
            b[k] = -(&acc * &a0);
        }
        Ok(TruncatedSeries { coeffs: b })
    }

    fn check_order(&self, other: &Self) {
        assert_eq!(self.order(), other.order(), "series truncation orders differ");
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        self.check_order(rhs);
        TruncatedSeries { coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        self.check_order(rhs);
        TruncatedSeries { coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        TruncatedSeries { coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        self.check_order(rhs);
        let n = self.order();
        let mut out = vec![Scalar::ZERO; n];
        for (i, a) in self.coeffs.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in rhs.coeffs[..n - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        TruncatedSeries { coeffs: out }
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*t")?,
                _ => write!(f, "({c})*t^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(t^{})", self.order())
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Serialized as the coefficient array, lowest power first.
impl serde::Serialize for TruncatedSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coeffs.serialize(s)
    }
}

impl<'de> serde::Deserialize<'de> for TruncatedSeries {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let coeffs = Vec::<Scalar>::deserialize(d)?;
        if coeffs.is_empty() {
            return Err(serde::de::Error::custom("empty series"));
        }
        let n = coeffs.len();
        Ok(TruncatedSeries::from_coeffs(coeffs, n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn inverse_of_one_minus_t_is_geometric() {
        let one_minus_t = &TruncatedSeries::constant(Scalar::ONE, 4) - &TruncatedSeries::t_power(1, 4);
        let inv = one_minus_t.invert().unwrap();
        assert!(inv.coeffs().iter().all(Scalar::is_one));
    }

    #[test]
    fn non_unit_rejected() {
        assert_eq!(TruncatedSeries::t_power(1, 4).invert(), Err(Error::NotAUnit));
    }

    #[test]
    fn t_is_nilpotent_at_truncation() {
        let t = TruncatedSeries::t_power(1, 3);
        assert!((&(&t * &t) * &t).is_zero());
    }

    fn arb(n: usize) -> impl Strategy<Value = TruncatedSeries> {
        proptest::collection::vec((-5i64..5, 1i64..4), n)
            .prop_map(move |v| TruncatedSeries::from_coeffs(v.into_iter().map(|(a, b)| Scalar::ratio(a, b)).collect(), n))
    }

    proptest! {
        #[test]
        fn unit_inverse(a in arb(4)) {
            prop_assume!(!a.constant_term().is_zero());
            let inv = a.invert().unwrap();
            prop_assert_eq!(&a * &inv, TruncatedSeries::constant(Scalar::ONE, 4));
        }

        #[test]
        fn ring_axioms(a in arb(4), b in arb(4), c in arb(4)) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
        }
    }
}
