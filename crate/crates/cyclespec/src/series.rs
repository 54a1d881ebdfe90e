//! Formal power series helpers shared by the generating-function engines.
//!
//! Two coefficient domains are supported: exact rationals (for the β ∈ Z
//! paths, where every quantity is rational) and [`CNum`] (for shifted paths,
//! where cos 2πβ and e^{2πiβ} enter). Division is the plain triangular
//! Cauchy-product solve.

use crate::error::{Error, Result};
use crate::numeric::{CNum, Rational};

/// First `count` coefficients of num/den as exact rationals.
///
/// Requires den[0] ≠ 0. Missing coefficients are treated as zero.
pub fn divide_exact(num: &[Rational], den: &[Rational], count: usize) -> Result<Vec<Rational>> {
    let d0 = den.first().cloned().unwrap_or_else(|| Rational::from(0));
    if d0 == 0 {
        return Err(Error::InvalidParameter(
            "series division by zero constant term".into(),
        ));
    }
    let get = |v: &[Rational], i: usize| v.get(i).cloned().unwrap_or_else(|| Rational::from(0));
    let mut out: Vec<Rational> = Vec::with_capacity(count);
    for n in 0..count {
        let mut acc = get(num, n);
        for (j, prev) in out.iter().enumerate() {
            acc -= Rational::from(prev * &get(den, n - j));
        }
        out.push(acc / &d0);
    }
    Ok(out)
}

/// First `count` coefficients of num/den over complex scalars.
///
/// The leading denominator coefficient must clear the division guard.
pub fn divide_cnum(num: &[CNum], den: &[CNum], count: usize, precision_bits: u32) -> Result<Vec<CNum>> {
    let d0 = den
        .first()
        .cloned()
        .unwrap_or_else(|| CNum::zero(precision_bits));
    let zero = CNum::zero(precision_bits);
    let get = |v: &[CNum], i: usize| v.get(i).cloned().unwrap_or_else(|| zero.clone());
    let mut out: Vec<CNum> = Vec::with_capacity(count);
    for n in 0..count {
        let mut acc = get(num, n);
        for (j, prev) in out.iter().enumerate() {
            acc = acc.sub(&prev.mul(&get(den, n - j)));
        }
        out.push(acc.div(&d0)?);
    }
    Ok(out)
}

/// Lift exact coefficients into complex scalars at a working precision.
pub fn to_cnum_series(coeffs: &[Rational], precision_bits: u32) -> Vec<CNum> {
    coeffs
        .iter()
        .map(|c| CNum::from_rational(c, precision_bits))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{approx_eq, Tolerance};

    #[test]
    fn exact_division_geometric() {
        // 1/(1−x) = 1 + x + x² + ...
        let num = vec![Rational::from(1)];
        let den = vec![Rational::from(1), Rational::from(-1)];
        let series = divide_exact(&num, &den, 5).unwrap();
        assert!(series.iter().all(|c| *c == 1));
    }

    #[test]
    fn exact_division_rejects_zero_lead() {
        let num = vec![Rational::from(1)];
        let den = vec![Rational::from(0), Rational::from(1)];
        assert!(divide_exact(&num, &den, 3).is_err());
    }

    #[test]
    fn cnum_division_matches_exact() {
        let p = 128;
        let num = vec![Rational::from(2), Rational::from((1, 3))];
        let den = vec![Rational::from(1), Rational::from((-1, 2)), Rational::from(5)];
        let exact = divide_exact(&num, &den, 8).unwrap();
        let approx = divide_cnum(&to_cnum_series(&num, p), &to_cnum_series(&den, p), 8, p).unwrap();
        let tol = Tolerance::default_for(p);
        for (e, a) in exact.iter().zip(&approx) {
            assert!(approx_eq(&CNum::from_rational(e, p), a, &tol));
        }
    }
}
