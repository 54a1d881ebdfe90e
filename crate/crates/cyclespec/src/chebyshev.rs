//! Exact Chebyshev polynomials of the first and second kind.
//!
//! Polynomials are built by the integer recurrences
//! T_{n+1} = 2z·T_n − T_{n−1} and U_{n+1} = 2z·U_n − U_{n−1}, with the
//! convention U_{−1} ≡ 0. The closed-form coefficient formulas
//! ([`shifted_t_coeff`], [`shifted_u_coeff`], [`monomial_t_coeff`],
//! [`monomial_u_coeff`]) answer direct coefficient queries without building
//! the full polynomial and serve as cross-checks of the recurrences.

use crate::error::{Error, Result};
use crate::numeric::{CNum, Integer, Rational};
use std::fmt;

/// Dense univariate polynomial with exact rational coefficients.
///
/// `coeffs[i]` is the coefficient of z^i. Trailing zeros are trimmed; the
/// zero polynomial has an empty coefficient list.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly {
            coeffs: vec![Rational::from(1)],
        }
    }

    pub fn constant(c: Rational) -> Self {
        Poly { coeffs: vec![c] }.trimmed()
    }

    /// The indeterminate z.
    pub fn x() -> Self {
        Poly {
            coeffs: vec![Rational::from(0), Rational::from(1)],
        }
    }

    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        Poly { coeffs }.trimmed()
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Poly {
            coeffs: coeffs.iter().map(|&c| Rational::from(c)).collect(),
        }
        .trimmed()
    }

    fn trimmed(mut self) -> Self {
        while self.coeffs.last().is_some_and(|c| *c == 0) {
            self.coeffs.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    /// Coefficient of z^i (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(|| Rational::from(0))
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) + other.coeff(i));
        }
        Poly { coeffs: out }.trimmed()
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) - other.coeff(i));
        }
        Poly { coeffs: out }.trimmed()
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::from(0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += Rational::from(a * b);
            }
        }
        Poly { coeffs: out }.trimmed()
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if *c == 0 {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|a| Rational::from(a * c)).collect(),
        }
        .trimmed()
    }

    pub fn neg(&self) -> Poly {
        self.scale(&Rational::from(-1))
    }

    /// Multiply by z^k.
    pub fn shift_up(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::from(0); k];
        out.extend(self.coeffs.iter().cloned());
        Poly { coeffs: out }
    }

    /// Exact division by z; errors unless the constant term is exactly zero.
    pub fn div_x(&self) -> Result<Poly> {
        if self.is_zero() {
            return Ok(Poly::zero());
        }
        if self.coeffs[0] != 0 {
            return Err(Error::InvalidParameter(
                "polynomial is not divisible by z (nonzero constant term)".into(),
            ));
        }
        Ok(Poly {
            coeffs: self.coeffs[1..].to_vec(),
        }
        .trimmed())
    }

    /// Coefficients of p(z + a): exact Taylor re-expansion about z = a.
    pub fn taylor_shift(&self, a: &Rational) -> Poly {
        // Repeated synthetic division by (z - a); standard O(n²) shift.
        let mut work = self.coeffs.clone();
        let n = work.len();
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            // Evaluate and reduce: after the pass, work holds the quotient
            // and the final accumulator is the next Taylor coefficient.
            let mut acc = Rational::from(0);
            for c in work.iter().rev() {
                acc = Rational::from(&acc * a) + c;
            }
            out.push(acc.clone());
            // Synthetic quotient of work by (z - a).
            let mut quot = vec![Rational::from(0); work.len().saturating_sub(1)];
            let mut carry = Rational::from(0);
            for i in (1..work.len()).rev() {
                carry = Rational::from(&carry * a) + &work[i];
                quot[i - 1] = carry.clone();
            }
            work = quot;
            if work.is_empty() {
                break;
            }
        }
        Poly { coeffs: out }.trimmed()
    }

    /// p(a + b·z) by Horner over polynomial arithmetic.
    pub fn compose_affine(&self, a: &Rational, b: &Rational) -> Poly {
        let lin = Poly::from_coeffs(vec![a.clone(), b.clone()]);
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&lin).add(&Poly::constant(c.clone()));
        }
        acc
    }

    /// Exact evaluation at a rational point (Horner).
    pub fn eval_exact(&self, z: &Rational) -> Rational {
        let mut acc = Rational::from(0);
        for c in self.coeffs.iter().rev() {
            acc = Rational::from(&acc * z) + c;
        }
        acc
    }

    /// Evaluation at a complex point, at the argument's precision (Horner).
    pub fn eval(&self, z: &CNum) -> CNum {
        let p = z.precision_bits();
        let mut acc = CNum::zero(p);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(z).add(&CNum::from_rational(c, p));
        }
        acc
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0)
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("{c}·z"),
                _ => format!("{c}·z^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// T_n by the exact integer recurrence.
pub fn cheb_t(n: u32) -> Poly {
    if n == 0 {
        return Poly::one();
    }
    let mut prev = Poly::one();
    let mut cur = Poly::x();
    for _ in 1..n {
        let next = cur.mul(&Poly::from_i64(&[0, 2])).sub(&prev);
        prev = cur;
        cur = next;
    }
    cur
}

/// U_n by the exact integer recurrence; n = −1 gives the zero polynomial.
pub fn cheb_u(n: i64) -> Poly {
    if n < 0 {
        return Poly::zero();
    }
    if n == 0 {
        return Poly::one();
    }
    let mut prev = Poly::one();
    let mut cur = Poly::from_i64(&[0, 2]);
    for _ in 1..n {
        let next = cur.mul(&Poly::from_i64(&[0, 2])).sub(&prev);
        prev = cur;
        cur = next;
    }
    cur
}

/// a_n(k): coefficient of (z−1)^k in T_n(z).
///
/// a_n(k) = (1/k!)·∏_{j=0}^{k−1} (n²−j²)/(2j+1) for 1 ≤ k ≤ n, a_n(0) = 1,
/// and 0 for k > n (the product then contains the factor n²−n²).
pub fn shifted_t_coeff(n: u32, k: u32) -> Rational {
    if k == 0 {
        return Rational::from(1);
    }
    if k > n {
        return Rational::from(0);
    }
    let mut acc = Rational::from((1, Integer::from(Integer::factorial(k))));
    let n2 = Integer::from(n) * Integer::from(n);
    for j in 0..k {
        let j2 = Integer::from(j) * Integer::from(j);
        acc *= Rational::from((Integer::from(&n2 - &j2), Integer::from(2 * j + 1)));
    }
    acc
}

/// b_n(k): coefficient of (z−1)^k in U_n(z); n = −1 gives 0.
///
/// b_n(k) = (1/((n+1)·k!))·∏_{j=0}^{k} ((n+1)²−j²)/(2j+1) for 0 ≤ k ≤ n.
pub fn shifted_u_coeff(n: i64, k: u32) -> Rational {
    if n < 0 {
        return Rational::from(0);
    }
    let n = n as u32;
    if k > n {
        return Rational::from(0);
    }
    let np1 = Integer::from(n) + 1;
    let mut acc = Rational::from((
        Integer::from(1),
        (&np1 * Integer::from(Integer::factorial(k))),
    ));
    let v2 = Integer::from(&np1 * &np1);
    for j in 0..=k {
        let j2 = Integer::from(j) * Integer::from(j);
        acc *= Rational::from((Integer::from(&v2 - &j2), Integer::from(2 * j + 1)));
    }
    acc
}

fn monomial_coeff(n: u32, j: u32, first_kind: bool) -> Result<Rational> {
    if j > n {
        return Err(Error::InvalidParameter(format!(
            "monomial index j = {j} exceeds degree n = {n}"
        )));
    }
    if n == 0 {
        return Ok(Rational::from(1));
    }
    if (n - j) % 2 == 1 {
        return Ok(Rational::from(0));
    }
    let half_sum = (n + j) / 2;
    let half_diff = (n - j) / 2;
    let binom = Integer::binomial(Integer::from(half_sum), half_diff);
    let sign = if half_diff.is_multiple_of(2) { 1 } else { -1 };
    let two_j = Integer::from(1) << j;
    let mut val = Rational::from((Integer::from(&binom * &two_j) * sign, Integer::from(1)));
    if first_kind {
        val *= Rational::from((Integer::from(n), Integer::from(n + j)));
    }
    Ok(val)
}

/// t_n(j): coefficient of z^j in T_n(z), by the closed form.
///
/// Vanishes when n−j is odd; t_{2k}(0) = (−1)^k.
pub fn monomial_t_coeff(n: u32, j: u32) -> Result<Rational> {
    monomial_coeff(n, j, true)
}

/// u_n(j): coefficient of z^j in U_n(z), by the closed form.
pub fn monomial_u_coeff(n: u32, j: u32) -> Result<Rational> {
    monomial_coeff(n, j, false)
}
