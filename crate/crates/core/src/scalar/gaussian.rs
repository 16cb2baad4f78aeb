use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use super::rational::{forward_assign, forward_binop, Rational};
use crate::error::{Error, Result};

/// Element `re + im*i` of Q(i). The working scalar field for every computation.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

pub type Scalar = GaussianRational;

impl GaussianRational {
    pub const ZERO: GaussianRational = GaussianRational { re: Rational::ZERO, im: Rational::ZERO };
    pub const ONE: GaussianRational = GaussianRational { re: Rational::ONE, im: Rational::ZERO };
    pub const I: GaussianRational = GaussianRational { re: Rational::ZERO, im: Rational::ONE };

    pub fn new(re: Rational, im: Rational) -> Self {
        GaussianRational { re, im }
    }

    pub fn real(re: Rational) -> Self {
        GaussianRational { re, im: Rational::ZERO }
    }

    pub fn from_int(n: i64) -> Self {
        Self::real(Rational::from(n))
    }

    /// `n / d` as a real scalar; panics when `d == 0`.
    pub fn ratio(n: i64, d: i64) -> Self {
        Self::real(Rational::new(n, d).expect("zero denominator"))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianRational { re: self.re.clone(), im: -&self.im }
    }

    /// `re^2 + im^2`.
    pub fn norm(&self) -> Rational {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.im.is_zero() {
            return Ok(Self::real(self.re.recip()?));
        }
        let n = self.norm();
        Ok(GaussianRational { re: &self.re / &n, im: -(&self.im / &n) })
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.im.is_zero() {
            if rhs.re.is_zero() {
                return Err(Error::DivisionByZero);
            }
            return Ok(GaussianRational {
                re: self.re.checked_div(&rhs.re)?,
                im: self.im.checked_div(&rhs.re)?,
            });
        }
        Ok(self * &rhs.inv()?)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::ONE;
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn scale(&self, r: &Rational) -> Self {
        GaussianRational { re: &self.re * r, im: &self.im * r }
    }
}

impl From<Rational> for GaussianRational {
    fn from(r: Rational) -> Self {
        Self::real(r)
    }
}

impl From<i64> for GaussianRational {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

fn add_ref(x: &Scalar, y: &Scalar) -> Scalar {
    GaussianRational { re: &x.re + &y.re, im: &x.im + &y.im }
}

fn sub_ref(x: &Scalar, y: &Scalar) -> Scalar {
    GaussianRational { re: &x.re - &y.re, im: &x.im - &y.im }
}

fn mul_ref(x: &Scalar, y: &Scalar) -> Scalar {
    match (x.im.is_zero(), y.im.is_zero()) {
        (true, true) => GaussianRational::real(&x.re * &y.re),
        (true, false) => GaussianRational { re: &x.re * &y.re, im: &x.re * &y.im },
        (false, true) => GaussianRational { re: &x.re * &y.re, im: &x.im * &y.re },
        (false, false) => GaussianRational {
            re: &(&x.re * &y.re) - &(&x.im * &y.im),
            im: &(&x.re * &y.im) + &(&x.im * &y.re),
        },
    }
}

/// Panics on division by zero; use [`GaussianRational::checked_div`] otherwise.
fn div_ref(x: &Scalar, y: &Scalar) -> Scalar {
    x.checked_div(y).expect("gaussian division by zero")
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational { re: -&self.re, im: -&self.im }
    }
}

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        -&self
    }
}

forward_binop!(GaussianRational, Add, add, add_ref);
forward_binop!(GaussianRational, Sub, sub, sub_ref);
forward_binop!(GaussianRational, Mul, mul, mul_ref);
forward_binop!(GaussianRational, Div, div, div_ref);
forward_assign!(GaussianRational, AddAssign, add_assign, add_ref);
forward_assign!(GaussianRational, SubAssign, sub_assign, sub_ref);
forward_assign!(GaussianRational, MulAssign, mul_assign, mul_ref);
forward_assign!(GaussianRational, DivAssign, div_assign, div_ref);

impl fmt::Display for GaussianRational {
    /// `re`, `im*i`, or `re+im*i` / `re-im*i`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        if self.re.is_zero() {
            return write!(f, "{}*i", self.im);
        }
        if self.im.signum() < 0 {
            write!(f, "{}-{}*i", self.re, -&self.im)
        } else {
            write!(f, "{}+{}*i", self.re, self.im)
        }
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for GaussianRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let Some(body) = s.strip_suffix("*i").or_else(|| s.strip_suffix('i')) else {
            return Ok(Self::real(s.parse()?));
        };
        // Split at the last sign that is not the leading one.
        let cut = body
            .char_indices()
            .skip(1)
            .filter(|&(_, c)| c == '+' || c == '-')
            .map(|(i, _)| i)
            .last();
        let parse_im = |t: &str| -> Result<Rational> {
            match t {
                "" | "+" => Ok(Rational::ONE),
                "-" => Ok(-Rational::ONE),
                _ => t.trim_start_matches('+').parse(),
            }
        };
        match cut {
            Some(i) => Ok(GaussianRational {
                re: body[..i].parse()?,
                im: parse_im(&body[i..])?,
            }),
            None => Ok(GaussianRational { re: Rational::ZERO, im: parse_im(body)? }),
        }
    }
}

impl serde::Serialize for GaussianRational {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for GaussianRational {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    #[test]
    fn i_squared() {
        assert_eq!(&Scalar::I * &Scalar::I, -Scalar::ONE);
    }

    #[test]
    fn text_forms() {
        let z = GaussianRational::new(q(1, 2), q(-3, 4));
        assert_eq!(z.to_string(), "1/2-3/4*i");
        assert_eq!("1/2-3/4*i".parse::<Scalar>().unwrap(), z);
        assert_eq!("-8*i".parse::<Scalar>().unwrap(), Scalar::new(q(0, 1), q(-8, 1)));
        assert_eq!("-5".parse::<Scalar>().unwrap(), Scalar::from_int(-5));
        assert_eq!("-1/3+i".parse::<Scalar>().unwrap(), Scalar::new(q(-1, 3), q(1, 1)));
    }

    fn arb() -> impl Strategy<Value = Scalar> {
        (-30i64..30, 1i64..9, -30i64..30, 1i64..9)
            .prop_map(|(a, b, c, d)| Scalar::new(q(a, b), q(c, d)))
    }

    proptest! {
        #[test]
        fn field_axioms(a in arb(), b in arb(), c in arb()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            if !b.is_zero() {
                prop_assert_eq!(&(&a / &b) * &b, a.clone());
            }
            prop_assert_eq!(a.norm(), (&a * &a.conj()).re);
        }

        #[test]
        fn roundtrip_text(a in arb()) {
            prop_assert_eq!(a.to_string().parse::<Scalar>().unwrap(), a);
        }
    }
}
