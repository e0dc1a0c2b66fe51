//! Exact scalars: arbitrary-precision rationals and rational complex numbers.
//!
//! Every quantity in this crate is either a [`Rational`] or a [`Scalar`]
//! (a pair of rationals representing `re + im·i`). There are no floating
//! point values on any verification path.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational, always kept in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

/// Shorthand for `n/d` as an exact rational.
pub fn rat(n: i64, d: i64) -> Rational {
    assert!(d != 0, "rational with zero denominator");
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Shorthand for an integer rational.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p"` or `"p/q"` (q > 0 after normalization).
pub fn parse_rational(s: &str) -> Result<Rational, ScalarParseError> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s, None),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| ScalarParseError::BadRational(s.to_string()))?;
    let d: BigInt = match den {
        Some(d) => d
            .parse()
            .map_err(|_| ScalarParseError::BadRational(s.to_string()))?,
        None => BigInt::one(),
    };
    if d.is_zero() {
        return Err(ScalarParseError::BadRational(s.to_string()));
    }
    Ok(Rational::new(n, d))
}

/// Renders a rational as `"p"` or `"p/q"`; the exact inverse of
/// [`parse_rational`].
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScalarParseError {
    #[error("malformed rational: {0:?}")]
    BadRational(String),
}

/// The ambient field of an instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    Real,
    Complex,
}

impl Field {
    /// Real dimension of the field: 1 for the reals, 2 for the complexes.
    /// This is the multiplier appearing in all rank bounds.
    pub fn real_dim(self) -> usize {
        match self {
            Field::Real => 1,
            Field::Complex => 2,
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Real => write!(f, "R"),
            Field::Complex => write!(f, "C"),
        }
    }
}

/// An exact field element: `re + im·i` with rational parts.
///
/// Real instances simply keep `im = 0`. Arithmetic is done natively on the
/// pairs, so complex elimination does not need to double matrix dimensions.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    pub re: Rational,
    pub im: Rational,
}

impl Scalar {
    pub fn new(re: Rational, im: Rational) -> Self {
        Scalar { re, im }
    }

    pub fn from_rational(re: Rational) -> Self {
        Scalar {
            re,
            im: Rational::zero(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(rat_int(n))
    }

    /// `n/d` as a real scalar.
    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::from_rational(rat(n, d))
    }

    pub fn zero() -> Self {
        Self::from_rational(Rational::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Scalar {
            re: Rational::zero(),
            im: Rational::one(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Scalar {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// `re² + im²`, the squared modulus.
    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Multiplicative inverse; panics on zero (callers guard pivots).
    pub fn inv(&self) -> Self {
        let n = self.norm_sqr();
        assert!(!n.is_zero(), "inverse of zero scalar");
        Scalar {
            re: &self.re / &n,
            im: -(&self.im / &n),
        }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (rational_to_f64(&self.re), rational_to_f64(&self.im))
    }
}

/// Rational point of the unit circle via the tangent half-angle map
/// `t ↦ ((1−t²)/(1+t²), 2t/(1+t²))`; these are dense in the circle and
/// have exactly unit modulus.
pub fn unit_circle_point(t: &Rational) -> Scalar {
    let t2 = t * t;
    let denom = &t2 + Rational::one();
    Scalar::new(
        (Rational::one() - &t2) / denom.clone(),
        (t + t) / denom,
    )
}

/// Best-effort conversion for the float search phase; never used on a
/// verification path.
pub fn rational_to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or_else(|| {
        // fall back to a lossy division for extreme magnitudes
        let n = r.numer().to_f64().unwrap_or(f64::MAX);
        let d = r.denom().to_f64().unwrap_or(f64::MAX);
        n / d
    })
}

/// Continued-fraction rationalization of a float with bounded denominator.
/// Returns the convergent closest to `x` among those with denominator at
/// most `max_den`.
pub fn rationalize(x: f64, max_den: u64) -> Rational {
    assert!(x.is_finite(), "cannot rationalize a non-finite float");
    let negative = x < 0.0;
    let mut x = x.abs();
    // convergents p/q of the continued fraction expansion
    let (mut p0, mut q0, mut p1, mut q1) = (BigInt::zero(), BigInt::one(), BigInt::one(), BigInt::zero());
    let bound = BigInt::from(max_den);
    for _ in 0..64 {
        let a = x.floor();
        if a > 1e17 {
            break;
        }
        let ai = BigInt::from(a as i128);
        let p2 = &ai * &p1 + &p0;
        let q2 = &ai * &q1 + &q0;
        if q2 > bound {
            break;
        }
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
        let frac = x - a;
        if frac < 1e-15 {
            break;
        }
        x = 1.0 / frac;
    }
    if q1.is_zero() {
        return Rational::zero();
    }
    let r = Rational::new(p1, q1);
    if negative {
        -r
    } else {
        r
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", format_rational(&self.re))
        } else if self.re.is_zero() {
            write!(f, "{}i", format_rational(&self.im))
        } else if self.im.is_negative() {
            write!(
                f,
                "{}{}i",
                format_rational(&self.re),
                format_rational(&self.im)
            )
        } else {
            write!(
                f,
                "{}+{}i",
                format_rational(&self.re),
                format_rational(&self.im)
            )
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        Scalar {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        Scalar {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Div for &Scalar {
    type Output = Scalar;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &Scalar) -> Scalar {
        self * &rhs.inv()
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);
forward_owned_binop!(Div, div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_roundtrip_and_lowest_terms() {
        let r = rat(4, -6);
        assert_eq!(r, rat(-2, 3));
        assert_eq!(format_rational(&r), "-2/3");
        assert_eq!(parse_rational("-2/3").unwrap(), r);
        assert_eq!(parse_rational("7").unwrap(), rat_int(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn complex_arithmetic_basics() {
        let a = Scalar::new(rat(1, 2), rat(3, 1));
        let b = Scalar::new(rat(-2, 1), rat(1, 4));
        let prod = &a * &b;
        // (1/2 + 3i)(-2 + i/4) = -1 + i/8 - 6i + 3i²/4 = -7/4 - 47/8 i
        assert_eq!(prod, Scalar::new(rat(-7, 4), rat(-47, 8)));
        let back = &prod / &b;
        assert_eq!(back, a);
        assert_eq!(&a - &a, Scalar::zero());
        assert_eq!(&Scalar::i() * &Scalar::i(), Scalar::from_int(-1));
    }

    #[test]
    fn rationalize_recovers_simple_fractions() {
        assert_eq!(rationalize(0.5, 1000), rat(1, 2));
        assert_eq!(rationalize(-2.25, 1000), rat(-9, 4));
        assert_eq!(rationalize(1.0 / 3.0, 1000000), rat(1, 3));
        assert_eq!(rationalize(0.0, 10), rat_int(0));
    }

    #[test]
    fn circle_points_have_unit_modulus() {
        for (n, d) in [(0, 1), (1, 1), (-1, 2), (3, 5), (7, 2)] {
            let z = unit_circle_point(&rat(n, d));
            assert!(z.norm_sqr().is_one());
        }
        assert_eq!(unit_circle_point(&rat_int(0)), Scalar::one());
        assert_eq!(unit_circle_point(&rat_int(1)), Scalar::i());
    }
}
