//! Exact rational and configurable-precision complex scalar arithmetic.
//!
//! Two scalar types are used throughout the crate:
//!
//! * [`Rational`] (re-exported from `rug`) holds every exact quantity:
//!   polynomial coefficients, recurrence data, exact sum values. It is
//!   always stored in lowest terms with a positive denominator and its
//!   arithmetic never rounds.
//! * [`CNum`] is a complex scalar built on MPFR reals with an explicit
//!   binary precision (at least 53 bits). Every transcendental value
//!   (csc, sec, cos 2πβ, e^{2πiβ}, I_ν(t), τ(χ)) lives here.
//!
//! Comparisons between approximate values go through [`Tolerance`], a mixed
//! absolute/relative criterion. The default budget at 128 bits is 2⁻⁸⁰ and
//! scales as 2^(−p+48) with the working precision p.

use crate::error::{Error, Result};
use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;
pub use rug::{Integer, Rational};
use std::fmt;

/// Default working precision in bits.
pub const DEFAULT_PRECISION_BITS: u32 = 128;

/// Smallest accepted precision (IEEE double mantissa width).
pub const MIN_PRECISION_BITS: u32 = 53;

/// Validate a requested precision.
pub fn check_precision(precision_bits: u32) -> Result<u32> {
    if precision_bits < MIN_PRECISION_BITS {
        return Err(Error::InvalidParameter(format!(
            "precision_bits must be at least {MIN_PRECISION_BITS}, got {precision_bits}"
        )));
    }
    Ok(precision_bits)
}

/// π at the given precision.
pub fn pi(precision_bits: u32) -> Float {
    Float::with_val(precision_bits, Constant::Pi)
}

/// Reduce a rational number modulo `modulus` into [0, modulus).
pub fn reduce_mod(q: &Rational, modulus: u32) -> Rational {
    let m = Rational::from(modulus);
    let div = Rational::from(q / &m).floor();
    q - Rational::from(&div * &m)
}

/// cos(2πq), with q reduced mod 1 before evaluation.
///
/// Reducing first keeps the float argument in [0, 2π) so that large shifts
/// never suffer catastrophic argument reduction.
pub fn cos_2pi(q: &Rational, precision_bits: u32) -> Float {
    let r = reduce_mod(q, 1);
    let angle = Float::with_val(precision_bits, &r) * pi(precision_bits) * 2u32;
    angle.cos()
}

/// sin(2πq), with q reduced mod 1 before evaluation.
pub fn sin_2pi(q: &Rational, precision_bits: u32) -> Float {
    let r = reduce_mod(q, 1);
    let angle = Float::with_val(precision_bits, &r) * pi(precision_bits) * 2u32;
    angle.sin()
}

/// sin(πq) with q reduced mod 2.
pub fn sin_pi(q: &Rational, precision_bits: u32) -> Float {
    let r = reduce_mod(q, 2);
    let angle = Float::with_val(precision_bits, &r) * pi(precision_bits);
    angle.sin()
}

/// cos(πq) with q reduced mod 2.
pub fn cos_pi(q: &Rational, precision_bits: u32) -> Float {
    let r = reduce_mod(q, 2);
    let angle = Float::with_val(precision_bits, &r) * pi(precision_bits);
    angle.cos()
}

/// A complex scalar carried at an explicit binary precision.
///
/// Mixed-precision operands are combined at the larger of the two
/// precisions; precision is never silently downgraded.
#[derive(Clone, Debug)]
pub struct CNum {
    re: Float,
    im: Float,
}

impl CNum {
    pub fn new(re: Float, im: Float) -> Self {
        let p = re.prec().max(im.prec());
        CNum {
            re: Float::with_val(p, re),
            im: Float::with_val(p, im),
        }
    }

    pub fn zero(precision_bits: u32) -> Self {
        CNum {
            re: Float::with_val(precision_bits, 0),
            im: Float::with_val(precision_bits, 0),
        }
    }

    pub fn one(precision_bits: u32) -> Self {
        CNum {
            re: Float::with_val(precision_bits, 1),
            im: Float::with_val(precision_bits, 0),
        }
    }

    pub fn from_real(re: Float) -> Self {
        let p = re.prec();
        CNum {
            re,
            im: Float::with_val(p, 0),
        }
    }

    pub fn from_rational(q: &Rational, precision_bits: u32) -> Self {
        CNum {
            re: Float::with_val(precision_bits, q),
            im: Float::with_val(precision_bits, 0),
        }
    }

    pub fn from_i64(v: i64, precision_bits: u32) -> Self {
        CNum {
            re: Float::with_val(precision_bits, v),
            im: Float::with_val(precision_bits, 0),
        }
    }

    /// e^{2πiq} with the phase q reduced mod 1 exactly before evaluation.
    pub fn unit_phase(q: &Rational, precision_bits: u32) -> Self {
        CNum {
            re: cos_2pi(q, precision_bits),
            im: sin_2pi(q, precision_bits),
        }
    }

    pub fn re(&self) -> &Float {
        &self.re
    }

    pub fn im(&self) -> &Float {
        &self.im
    }

    pub fn precision_bits(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    fn join_prec(&self, other: &CNum) -> u32 {
        self.precision_bits().max(other.precision_bits())
    }

    pub fn conj(&self) -> Self {
        let p = self.precision_bits();
        CNum {
            re: self.re.clone(),
            im: Float::with_val(p, -&self.im),
        }
    }

    pub fn neg(&self) -> Self {
        let p = self.precision_bits();
        CNum {
            re: Float::with_val(p, -&self.re),
            im: Float::with_val(p, -&self.im),
        }
    }

    pub fn add(&self, other: &CNum) -> Self {
        let p = self.join_prec(other);
        CNum {
            re: Float::with_val(p, &self.re + &other.re),
            im: Float::with_val(p, &self.im + &other.im),
        }
    }

    pub fn sub(&self, other: &CNum) -> Self {
        let p = self.join_prec(other);
        CNum {
            re: Float::with_val(p, &self.re - &other.re),
            im: Float::with_val(p, &self.im - &other.im),
        }
    }

    pub fn mul(&self, other: &CNum) -> Self {
        let p = self.join_prec(other);
        let re = Float::with_val(p, &self.re * &other.re) - Float::with_val(p, &self.im * &other.im);
        let im = Float::with_val(p, &self.re * &other.im) + Float::with_val(p, &self.im * &other.re);
        CNum {
            re: Float::with_val(p, re),
            im: Float::with_val(p, im),
        }
    }

    pub fn mul_float(&self, f: &Float) -> Self {
        let p = self.precision_bits().max(f.prec());
        CNum {
            re: Float::with_val(p, &self.re * f),
            im: Float::with_val(p, &self.im * f),
        }
    }

    pub fn mul_rational(&self, q: &Rational) -> Self {
        let p = self.precision_bits();
        let f = Float::with_val(p, q);
        self.mul_float(&f)
    }

    pub fn norm_sqr(&self) -> Float {
        let p = self.precision_bits();
        Float::with_val(p, self.re.clone().square() + self.im.clone().square())
    }

    pub fn abs(&self) -> Float {
        self.norm_sqr().sqrt()
    }

    /// Division with a guard: a divisor whose modulus falls below the
    /// absolute tolerance for the working precision raises
    /// [`Error::DivisionNearZero`] instead of producing a large value.
    pub fn div(&self, other: &CNum) -> Result<Self> {
        let p = self.join_prec(other);
        let denom = other.norm_sqr();
        let guard = Tolerance::default_for(p).abs_eps;
        if denom.clone().sqrt() < guard {
            return Err(Error::DivisionNearZero);
        }
        let num = self.mul(&other.conj());
        Ok(CNum {
            re: Float::with_val(p, &num.re / &denom),
            im: Float::with_val(p, &num.im / &denom),
        })
    }

    pub fn recip(&self) -> Result<Self> {
        CNum::one(self.precision_bits()).div(self)
    }

    /// Integer power by binary exponentiation; negative exponents go
    /// through the guarded reciprocal.
    pub fn powi(&self, n: i64) -> Result<Self> {
        let p = self.precision_bits();
        if n == 0 {
            return Ok(CNum::one(p));
        }
        let mut base = if n < 0 { self.recip()? } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = CNum::one(p);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        Ok(acc)
    }

    /// Complex exponential e^z = e^{re}(cos im + i sin im).
    pub fn exp(&self) -> Self {
        let p = self.precision_bits();
        let mag = self.re.clone().exp();
        let c = self.im.clone().cos();
        let s = self.im.clone().sin();
        CNum {
            re: Float::with_val(p, &mag * &c),
            im: Float::with_val(p, &mag * &s),
        }
    }

    /// Principal-branch complex square root.
    pub fn sqrt(&self) -> Self {
        let p = self.precision_bits();
        let r = self.abs();
        if self.im.is_zero() {
            if self.re >= 0 {
                return CNum {
                    re: self.re.clone().sqrt(),
                    im: Float::with_val(p, 0),
                };
            }
            return CNum {
                re: Float::with_val(p, 0),
                im: Float::with_val(p, -&self.re).sqrt(),
            };
        }
        // sqrt(a+bi) = sqrt((r+a)/2) + i sign(b) sqrt((r-a)/2)
        let half_re = Float::with_val(p, &r + &self.re) / 2u32;
        let half_im = Float::with_val(p, &r - &self.re) / 2u32;
        let sign = if self.im < 0 { -1 } else { 1 };
        CNum {
            re: half_re.sqrt(),
            im: half_im.sqrt() * sign,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// Round to a (possibly lower) target precision; explicit, never silent.
    pub fn round_to(&self, precision_bits: u32) -> Self {
        CNum {
            re: Float::with_val(precision_bits, &self.re),
            im: Float::with_val(precision_bits, &self.im),
        }
    }
}

impl fmt::Display for CNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.im > 0 {
            write!(f, "{}+{}i", self.re, self.im)
        } else {
            write!(f, "{}{}i", self.re, self.im)
        }
    }
}

/// Round a rational to the nearest representable value at the given precision.
pub fn rational_to_cnum(x: &Rational, precision_bits: u32) -> Result<CNum> {
    check_precision(precision_bits)?;
    Ok(CNum::from_rational(x, precision_bits))
}

/// Mixed absolute/relative comparison budget.
///
/// `approx_eq(a, b)` passes iff |a−b| ≤ abs_eps + rel_eps·max(|a|,|b|).
#[derive(Clone, Debug)]
pub struct Tolerance {
    pub abs_eps: Float,
    pub rel_eps: Float,
}

impl Tolerance {
    /// Default budget for a working precision: 2^(−p+48), i.e. 2⁻⁸⁰ at 128 bits.
    pub fn default_for(precision_bits: u32) -> Self {
        let p = precision_bits.max(MIN_PRECISION_BITS);
        let exp = -(p as i32) + 48;
        let eps = Float::with_val(p, 2).pow(exp);
        Tolerance {
            abs_eps: eps.clone(),
            rel_eps: eps,
        }
    }

    /// A budget with both components set to 2^exp at the given precision.
    pub fn pow2(exp: i32, precision_bits: u32) -> Self {
        let eps = Float::with_val(precision_bits, 2).pow(exp);
        Tolerance {
            abs_eps: eps.clone(),
            rel_eps: eps,
        }
    }
}

/// Mixed absolute/relative comparison of two complex values.
pub fn approx_eq(a: &CNum, b: &CNum, tol: &Tolerance) -> bool {
    let diff = a.sub(b).abs();
    let scale = a.abs().max(&b.abs());
    let budget = Float::with_val(
        diff.prec(),
        &tol.abs_eps + Float::with_val(diff.prec(), &tol.rel_eps * &scale),
    );
    diff <= budget
}

/// Mixed absolute/relative comparison of two reals.
pub fn approx_eq_float(a: &Float, b: &Float, tol: &Tolerance) -> bool {
    let p = a.prec().max(b.prec());
    let diff = Float::with_val(p, a - b).abs();
    let scale = Float::with_val(p, a).abs().max(&Float::with_val(p, b).abs());
    let budget = Float::with_val(p, &tol.abs_eps + Float::with_val(p, &tol.rel_eps * &scale));
    diff <= budget
}

/// Parse "p/q" or a decimal string into an exact rational (0.3 means 3/10).
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n: Integer = num
            .trim()
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("bad numerator in '{s}'")))?;
        let d: Integer = den
            .trim()
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("bad denominator in '{s}'")))?;
        if d == 0 {
            return Err(Error::InvalidParameter(format!("zero denominator in '{s}'")));
        }
        return Ok(Rational::from((n, d)));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let sign = if int_part.trim_start().starts_with('-') { -1 } else { 1 };
        let int_digits = if int_part.is_empty() || int_part == "-" || int_part == "+" {
            Integer::from(0)
        } else {
            int_part
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("bad integer part in '{s}'")))?
        };
        if frac_part.is_empty() {
            return Ok(Rational::from(int_digits));
        }
        if !frac_part.chars().all(|c| c.is_ascii_digit()) {
            return Err(Error::InvalidParameter(format!("bad fractional part in '{s}'")));
        }
        let frac: Integer = frac_part
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("bad fractional part in '{s}'")))?;
        let scale = Integer::from(10).pow(frac_part.len() as u32);
        let frac_q = Rational::from((frac, scale));
        let int_q = Rational::from(int_digits);
        return Ok(if sign < 0 { int_q - frac_q } else { int_q + frac_q });
    }
    let n: Integer = s
        .parse()
        .map_err(|_| Error::InvalidParameter(format!("cannot parse rational '{s}'")))?;
    Ok(Rational::from(n))
}
