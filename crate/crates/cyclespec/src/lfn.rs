//! Special values of the cycle-graph spectral L-functions.
//!
//! For an even character the value L_{X_m}(n,χ) = Σ_j χ(j)·csc^{2n}(jπ/m)
//! is computed three ways: literal summation, the Gauss-sum route through
//! the exact recurrence coefficients c_{m,r}(n−1), and the closed
//! polynomial form Σ_r χ̄(r)·P_{2n}(r,m)/τ̄(χ) with P_{2n} built
//! symbolically in r. For odd characters the replacement
//! L̃_{X_m}(n,χ) = Σ_j χ(j)·csc^{2n}(jπ/m)·cot(jπ/m) is computed directly
//! and through the analytic β-derivative of the shifted generating
//! function. The double-argument secant variant L̂ runs over sec^n(2jπ/m)
//! for m not divisible by 4.
//!
//! All routes return L itself (unconjugated); conjugations demanded by the
//! cited formulas happen internally. The direct sums are the authority on
//! normalization.

use crate::characters::{gauss_sum, DirichletCharacter};
use crate::chebyshev::{cheb_t, cheb_u, Poly};
use crate::error::{Error, Result};
use crate::numeric::{check_precision, cos_pi, pi, sin_pi, CNum, Integer, Rational};
use crate::series;
use crate::trigsums::recurrence_unshifted;
use rug::ops::Pow;
use rug::Float;

/// Evaluation route of one L-value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LRoute {
    Direct,
    GaussRecurrence,
    Polynomial,
    BetaDerivative,
    BetaDerivativeNumeric,
    SeriesClosed,
}

/// One computed special value.
#[derive(Clone, Debug)]
pub struct LValue {
    pub modulus: u32,
    pub char_index: usize,
    pub n: u32,
    pub value: CNum,
    pub route: LRoute,
    /// Coarse bound on the rounding error of the numeric factors.
    pub error_budget: Float,
    /// Set when the value is structurally zero (parity mismatch), in which
    /// case `value` is an exact zero.
    pub identically_zero: bool,
}

fn check_n(n: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "L-values are defined at positive integers n".into(),
        ));
    }
    Ok(())
}

fn require_primitive(chi: &DirichletCharacter) -> Result<()> {
    if !chi.is_primitive() {
        return Err(Error::NotPrimitive {
            modulus: chi.modulus(),
            conductor: chi.conductor(),
        });
    }
    Ok(())
}

fn zero_value(chi: &DirichletCharacter, n: u32, route: LRoute, p: u32) -> LValue {
    LValue {
        modulus: chi.modulus(),
        char_index: chi.index(),
        n,
        value: CNum::zero(p),
        route,
        error_budget: Float::with_val(p, 0),
        identically_zero: true,
    }
}

fn budget_for(value: &CNum, m: u32, p: u32) -> Float {
    let scale = Float::with_val(p, value.abs() + 1u32);
    Float::with_val(p, 2).pow(-(p as i32) + 8) * scale * Float::with_val(p, m)
}

/// L_{X_m}(n,χ) by direct high-precision summation (even χ; odd characters
/// give a flagged exact zero, since the summand is odd under j ↦ m−j).
pub fn l_direct(chi: &DirichletCharacter, n: u32, precision_bits: u32) -> Result<LValue> {
    check_n(n)?;
    let p = check_precision(precision_bits)?;
    if chi.is_odd() {
        return Ok(zero_value(chi, n, LRoute::Direct, p));
    }
    let m = chi.modulus();
    let mut acc = CNum::zero(p);
    for j in 1..m as i64 {
        if chi.phase(j).is_none() {
            continue;
        }
        let s = sin_pi(&Rational::from((j, m as i64)), p);
        let term = Float::with_val(p, s.pow(2 * n as i32)).recip();
        acc = acc.add(&chi.value(j, p).mul_float(&term));
    }
    Ok(LValue {
        modulus: m,
        char_index: chi.index(),
        n,
        value: acc.clone(),
        route: LRoute::Direct,
        error_budget: budget_for(&acc, m, p),
        identically_zero: false,
    })
}

/// L_{X_m}(n,χ) = (−1)^{n+1}·2^n·(m/τ̄(χ))·Σ_r χ̄(r)·c_{m,r}(n−1) for even
/// primitive χ, with the c-coefficients exact from the linear recurrence.
pub fn l_via_gauss(chi: &DirichletCharacter, n: u32, precision_bits: u32) -> Result<LValue> {
    check_n(n)?;
    require_primitive(chi)?;
    let p = check_precision(precision_bits)?;
    if chi.is_odd() {
        return Ok(zero_value(chi, n, LRoute::GaussRecurrence, p));
    }
    let m = chi.modulus();
    let bar = chi.conjugate();
    let mut acc = CNum::zero(p);
    for r in 0..m as i64 {
        if bar.phase(r).is_none() {
            continue;
        }
        let c = recurrence_unshifted(m, r, n as usize)?;
        acc = acc.add(&bar.value(r, p).mul_rational(&c[n as usize - 1]));
    }
    let tau_bar = gauss_sum(chi, p)?.conj();
    let sign = if n % 2 == 1 { 1 } else { -1 };
    let scale = Rational::from(Integer::from(1) << n) * Rational::from(sign * m as i64);
    let value = acc.mul_rational(&scale).div(&tau_bar)?;
    Ok(LValue {
        modulus: m,
        char_index: chi.index(),
        n,
        value: value.clone(),
        route: LRoute::GaussRecurrence,
        error_budget: budget_for(&value, m, p),
        identically_zero: false,
    })
}

/// c_{m,·}(n) as an exact polynomial in the twist residue r.
///
/// The r-dependence of the recurrence enters only through
/// b_{ℓ−1}(k) and b_{m−ℓ−1}(k), and B_k(ν) := (ν/k!)·∏_{j=1}^{k}(ν²−j²)/(2j+1)
/// interpolates b_{ν−1}(k) for every integer ν ≥ 0 (including the vanishing
/// edge cases), so the whole triangular solve lifts to polynomials in r over ℚ.
pub fn c_polynomial_in_r(m: u32, n: u32) -> Result<Poly> {
    if m < 2 {
        return Err(Error::InvalidParameter("c polynomials need m >= 2".into()));
    }
    let b_poly = |k: u32| -> Poly {
        // B_k(ν) with ν the indeterminate
        let mut acc = Poly::x();
        for j in 1..=k {
            let factor = Poly::from_coeffs(vec![
                Rational::from(-((j * j) as i64)),
                Rational::from(0),
                Rational::from(1),
            ]);
            acc = acc.mul(&factor).scale(&Rational::from((1, 2 * j as i64 + 1)));
        }
        acc.scale(&Rational::from((
            Integer::from(1),
            Integer::from(Integer::factorial(k)),
        )))
    };
    let a = |k: u32| crate::chebyshev::shifted_t_coeff(m, k);

    let mut c: Vec<Poly> = Vec::with_capacity(n as usize + 1);
    for step in 0..=n {
        let b = b_poly(step + 1);
        let reflected = b.compose_affine(&Rational::from(m), &Rational::from(-1));
        let mut rhs = b.add(&reflected).sub(&Poly::constant(a(step + 2) / Rational::from(m)));
        for (j, cj) in c.iter().enumerate() {
            rhs = rhs.sub(&cj.scale(&a((step - j as u32) + 1)));
        }
        c.push(rhs.scale(&Rational::from(a(1).recip_ref())));
    }
    Ok(c.pop().expect("nonempty"))
}

/// P_{2n}(r, m) with L_{X_m}(n,χ) = (1/τ̄(χ))·Σ_r χ̄(r)·P_{2n}(r,m):
/// P_{2n} = (−1)^{n+1}·2^n·m·c_{m,·}(n−1), an exact polynomial of degree
/// exactly 2n in r (enforced).
pub fn l_value_polynomial(m: u32, n: u32) -> Result<Poly> {
    check_n(n)?;
    let c = c_polynomial_in_r(m, n - 1)?;
    let sign = if n % 2 == 1 { 1 } else { -1 };
    let scale = Rational::from(Integer::from(1) << n) * Rational::from(sign * m as i64);
    let poly = c.scale(&scale);
    if poly.degree() != Some(2 * n as usize) {
        return Err(Error::InvalidParameter(format!(
            "degree check failed: P_{{2n}} has degree {:?}, expected {}",
            poly.degree(),
            2 * n
        )));
    }
    Ok(poly)
}

/// L_{X_m}(n,χ) through the closed polynomial form (even primitive χ).
pub fn l_polynomial(chi: &DirichletCharacter, n: u32, precision_bits: u32) -> Result<LValue> {
    check_n(n)?;
    require_primitive(chi)?;
    let p = check_precision(precision_bits)?;
    if chi.is_odd() {
        return Ok(zero_value(chi, n, LRoute::Polynomial, p));
    }
    let m = chi.modulus();
    let poly = l_value_polynomial(m, n)?;
    let bar = chi.conjugate();
    let mut acc = CNum::zero(p);
    for r in 0..m as i64 {
        if bar.phase(r).is_none() {
            continue;
        }
        let val = poly.eval_exact(&Rational::from(r));
        acc = acc.add(&bar.value(r, p).mul_rational(&val));
    }
    let tau_bar = gauss_sum(chi, p)?.conj();
    let value = acc.div(&tau_bar)?;
    Ok(LValue {
        modulus: m,
        char_index: chi.index(),
        n,
        value: value.clone(),
        route: LRoute::Polynomial,
        error_budget: budget_for(&value, m, p),
        identically_zero: false,
    })
}

/// L̃_{X_m}(n,χ) = Σ_j χ(j)·csc^{2n}(jπ/m)·cot(jπ/m) by direct summation
/// (odd χ; even characters give a flagged exact zero by the j ↦ m−j
/// antisymmetry of the cotangent factor).
pub fn l_tilde_direct(chi: &DirichletCharacter, n: u32, precision_bits: u32) -> Result<LValue> {
    check_n(n)?;
    let p = check_precision(precision_bits)?;
    if chi.is_even() {
        return Ok(zero_value(chi, n, LRoute::Direct, p));
    }
    let m = chi.modulus();
    let mut acc = CNum::zero(p);
    for j in 1..m as i64 {
        if chi.phase(j).is_none() {
            continue;
        }
        let s = sin_pi(&Rational::from((j, m as i64)), p);
        let c = cos_pi(&Rational::from((j, m as i64)), p);
        let csc_pow = Float::with_val(p, s.clone().pow(2 * n as i32)).recip();
        let term = Float::with_val(p, &csc_pow * Float::with_val(p, &c / &s));
        acc = acc.add(&chi.value(j, p).mul_float(&term));
    }
    Ok(LValue {
        modulus: m,
        char_index: chi.index(),
        n,
        value: acc.clone(),
        route: LRoute::Direct,
        error_budget: budget_for(&acc, m, p),
        identically_zero: false,
    })
}

/// L̃_{X_m}(n,χ) for odd primitive χ through the analytic β-derivative of
/// the shifted generating function.
///
/// Differentiating F_{m,r}(t,β) in β at β = 0 leaves, per residue r,
///
/// ∂_β F|_{β=0} = 2πi·W_r(t)/(T_m(t+1) − 1),
/// W_r(t) = (1−r/m)·U_{r−1}(t+1) − (r/m)·U_{m−r−1}(t+1),
///
/// and W_r(0) = 0 exactly, so W_r/t is a polynomial and the χ-weighted sum
/// divides by (T_m(t+1)−1)/t as an ordinary power series. The coefficient
/// map back to L̃ is
/// L̃(n,χ) = (−1)^n·2^{n−1}·m/(n·π)·conj(g_{n−1}), g = Σ-series coefficients.
pub fn l_tilde_derivative(
    chi: &DirichletCharacter,
    n: u32,
    precision_bits: u32,
) -> Result<LValue> {
    check_n(n)?;
    require_primitive(chi)?;
    let p = check_precision(precision_bits)?;
    if chi.is_even() {
        return Ok(zero_value(chi, n, LRoute::BetaDerivative, p));
    }
    let m = chi.modulus();
    let one = Rational::from(1);
    let count = n as usize;

    // numerator Σ_r χ(r)·V_r(t) with V_r = W_r/t exact
    let mut num: Vec<CNum> = vec![CNum::zero(p); count + cheb_t(m).coeffs().len()];
    for r in 1..m as i64 {
        if chi.phase(r).is_none() {
            continue;
        }
        let u_r = cheb_u(r - 1).taylor_shift(&one);
        let u_mr = cheb_u(m as i64 - r - 1).taylor_shift(&one);
        let w = u_r
            .scale(&(Rational::from(1) - Rational::from((r, m as i64))))
            .sub(&u_mr.scale(&Rational::from((r, m as i64))));
        let v = w.div_x()?; // exact: W_r(0) = 0
        let weight = chi.value(r, p);
        for (k, coeff) in v.coeffs().iter().enumerate() {
            if k < num.len() {
                num[k] = num[k].add(&weight.mul_rational(coeff));
            }
        }
    }
    // denominator Dp(t) = (T_m(t+1) − 1)/t exact
    let dp = cheb_t(m)
        .taylor_shift(&one)
        .sub(&Poly::one())
        .div_x()?;
    let den = series::to_cnum_series(dp.coeffs(), p);
    let g = series::divide_cnum(&num, &den, count, p)?;

    // L̃(n,χ) = (−1)^n·2^{n−1}·m/(nπ)·conj(g_{n−1})·(2πi factored in here)
    let g_last = g[count - 1].clone();
    // fold in the 2πi from the derivative and the m/τ(χ) prefactor
    let tau = gauss_sum(chi, p)?;
    let two_pi_i = CNum::new(Float::with_val(p, 0), Float::with_val(p, 2) * pi(p));
    let g_full = g_last
        .mul(&two_pi_i)
        .mul_rational(&Rational::from(m))
        .div(&tau)?;
    let sign = if n.is_multiple_of(2) { 1 } else { -1 };
    let scale_num = Rational::from(Integer::from(1) << (n - 1)) * Rational::from(sign * m as i64);
    let scale = CNum::from_rational(&scale_num, p)
        .mul_float(&Float::with_val(p, pi(p) * Float::with_val(p, n)).recip());
    let value = g_full.conj().mul(&scale);
    Ok(LValue {
        modulus: m,
        char_index: chi.index(),
        n,
        value: value.clone(),
        route: LRoute::BetaDerivative,
        error_budget: budget_for(&value, m, p),
        identically_zero: false,
    })
}

/// Numeric central-difference fallback for the β-derivative route:
/// L̃(n,χ) = −(m/(2nπ))·∂_β L(n,χ,β)|_{β=0} + O(h²).
pub fn l_tilde_derivative_numeric(
    chi: &DirichletCharacter,
    n: u32,
    precision_bits: u32,
) -> Result<LValue> {
    check_n(n)?;
    let p = check_precision(precision_bits)?;
    if chi.is_even() {
        return Ok(zero_value(chi, n, LRoute::BetaDerivativeNumeric, p));
    }
    let m = chi.modulus();
    let h = Rational::from((Integer::from(1), Integer::from(1) << 40));
    let shifted_l = |beta: &Rational| -> CNum {
        let mut acc = CNum::zero(p);
        for j in 1..m as i64 {
            if chi.phase(j).is_none() {
                continue;
            }
            let mut ratio = Rational::from(j) + beta.clone();
            ratio /= Rational::from(m);
            let s = sin_pi(&ratio, p);
            let term = Float::with_val(p, s.pow(2 * n as i32)).recip();
            acc = acc.add(&chi.value(j, p).mul_float(&term));
        }
        acc
    };
    let plus = shifted_l(&h);
    let minus = shifted_l(&(-h.clone()));
    let diff = plus
        .sub(&minus)
        .mul_rational(&(Rational::from(1) / (Rational::from(2) * h)));
    let scale = Float::with_val(p, -(m as i64))
        / (Float::with_val(p, 2 * n) * pi(p));
    let value = diff.mul_float(&scale);
    // h² truncation dominates the budget here
    let budget = Float::with_val(p, 2).pow(-78) * Float::with_val(p, value.abs() + 1u32);
    Ok(LValue {
        modulus: m,
        char_index: chi.index(),
        n,
        value,
        route: LRoute::BetaDerivativeNumeric,
        error_budget: budget,
        identically_zero: false,
    })
}

fn check_hat_modulus(m: u32) -> Result<()> {
    if m.is_multiple_of(4) {
        return Err(Error::Domain(
            "the double-argument L-function requires m not divisible by 4 (sec(2jπ/m) is singular at j = m/4)"
                .into(),
        ));
    }
    Ok(())
}

/// L̂_{X_m}(n,χ) = Σ_j χ(j)·sec^n(2jπ/m) by direct summation; m must not be
/// divisible by 4.
pub fn l_hat_direct(chi: &DirichletCharacter, n: u32, precision_bits: u32) -> Result<LValue> {
    check_n(n)?;
    check_hat_modulus(chi.modulus())?;
    let p = check_precision(precision_bits)?;
    let m = chi.modulus();
    let mut acc = CNum::zero(p);
    for j in 1..m as i64 {
        if chi.phase(j).is_none() {
            continue;
        }
        let c = cos_pi(&Rational::from((2 * j, m as i64)), p);
        let term = Float::with_val(p, c.pow(n as i32)).recip();
        acc = acc.add(&chi.value(j, p).mul_float(&term));
    }
    Ok(LValue {
        modulus: m,
        char_index: chi.index(),
        n,
        value: acc.clone(),
        route: LRoute::Direct,
        error_budget: budget_for(&acc, m, p),
        identically_zero: false,
    })
}

/// L̂_{X_m}(n,χ) through the rational generating function
///
/// Σ_{n≥0} L̂(n+1,χ)·z^n = −(m/τ(χ̄))·Σ_r χ̄(r)·(U_{m−r−1}(z)+U_{r−1}(z))/(T_m(z)−1)
///
/// for primitive χ and 4 ∤ m. (The displayed corollary indexes the series
/// by L̂(n); matching against the direct sums fixes the shift to n+1.)
pub fn l_hat_closed(chi: &DirichletCharacter, n: u32, precision_bits: u32) -> Result<LValue> {
    check_n(n)?;
    require_primitive(chi)?;
    check_hat_modulus(chi.modulus())?;
    let p = check_precision(precision_bits)?;
    let m = chi.modulus();
    let bar = chi.conjugate();
    let count = n as usize;

    let mut num: Vec<CNum> = vec![CNum::zero(p); count + m as usize];
    for r in 0..m as i64 {
        if bar.phase(r).is_none() {
            continue;
        }
        let u_sum = cheb_u(m as i64 - r - 1).add(&cheb_u(r - 1));
        let weight = bar.value(r, p);
        for (k, coeff) in u_sum.coeffs().iter().enumerate() {
            if k < num.len() {
                num[k] = num[k].add(&weight.mul_rational(coeff));
            }
        }
    }
    let den_poly = cheb_t(m).sub(&Poly::one());
    let den = series::to_cnum_series(den_poly.coeffs(), p);
    let g = series::divide_cnum(&num, &den, count, p)?;

    let tau_bar_of_bar = gauss_sum(&bar, p)?;
    let value = g[count - 1]
        .mul_rational(&Rational::from(-(m as i64)))
        .div(&tau_bar_of_bar)?;
    Ok(LValue {
        modulus: m,
        char_index: chi.index(),
        n,
        value: value.clone(),
        route: LRoute::SeriesClosed,
        error_budget: budget_for(&value, m, p),
        identically_zero: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::enumerate_characters;
    use crate::numeric::{approx_eq, Tolerance};

    fn quadratic_mod5() -> DirichletCharacter {
        enumerate_characters(5)
            .unwrap()
            .into_iter()
            .find(|c| !c.is_principal() && c.is_real())
            .unwrap()
    }

    fn tol() -> Tolerance {
        Tolerance::default_for(128)
    }

    #[test]
    fn quadratic_mod5_value_at_one() {
        // L_{X_5}(1,χ) = 8/√5 = 2csc²(π/5) − 2csc²(2π/5)
        let chi = quadratic_mod5();
        let direct = l_direct(&chi, 1, 128).unwrap();
        let expect = 8.0 / 5f64.sqrt();
        assert!((direct.value.re().to_f64() - expect).abs() < 1e-15);
        assert!((direct.value.re().to_f64() - 3.5777087639996634).abs() < 1e-14);
        assert!(direct.value.im().clone().abs() < Float::with_val(128, 1e-30));

        let gauss = l_via_gauss(&chi, 1, 128).unwrap();
        assert!(approx_eq(&direct.value, &gauss.value, &tol()));
        let poly = l_polynomial(&chi, 1, 128).unwrap();
        assert!(approx_eq(&direct.value, &poly.value, &tol()));
    }

    #[test]
    fn displayed_polynomial_forms_match() {
        // n=1: (2/τ̄)Σχ̄(r)(r−m)r ; n=2: −(2/3τ̄)Σχ̄(r)·r(r−m)(r²−mr−2).
        // (The quartic factors through r(r−m); the constant in the last
        // factor is −2, fixed against the direct oracle: at m = 5 the value
        // is 32/√5.)
        let p = 128;
        let chi = quadratic_mod5();
        let m = 5i64;
        let bar = chi.conjugate();
        let tau_bar = gauss_sum(&chi, p).unwrap().conj();

        let mut s1 = CNum::zero(p);
        let mut s2 = CNum::zero(p);
        for r in 0..m {
            let w = bar.value(r, p);
            s1 = s1.add(&w.mul_rational(&Rational::from((r - m) * r)));
            s2 = s2.add(&w.mul_rational(&Rational::from(r * (r - m) * (r * r - m * r - 2))));
        }
        let l1 = s1.mul_rational(&Rational::from(2)).div(&tau_bar).unwrap();
        let l2 = s2
            .mul_rational(&Rational::from((-2, 3)))
            .div(&tau_bar)
            .unwrap();
        assert!(approx_eq(&l1, &l_direct(&chi, 1, p).unwrap().value, &tol()));
        assert!(approx_eq(&l2, &l_direct(&chi, 2, p).unwrap().value, &tol()));
        assert!(approx_eq(&l2, &l_polynomial(&chi, 2, p).unwrap().value, &tol()));

        // the n=2 value itself: 32/√5
        let direct = l_direct(&chi, 2, p).unwrap().value;
        let expect = Float::with_val(p, 32) / Float::with_val(p, 5).sqrt();
        assert!((direct.re().to_f64() - expect.to_f64()).abs() < 1e-14);
    }

    #[test]
    fn route_agreement_on_larger_modulus() {
        // m = 13, an even primitive character, n = 3
        let chars = enumerate_characters(13).unwrap();
        let chi = chars
            .iter()
            .find(|c| c.is_even() && c.is_primitive())
            .unwrap();
        for n in 1..=3u32 {
            let d = l_direct(chi, n, 128).unwrap().value;
            let g = l_via_gauss(chi, n, 128).unwrap().value;
            let q = l_polynomial(chi, n, 128).unwrap().value;
            assert!(approx_eq(&d, &g, &tol()), "gauss n={n}");
            assert!(approx_eq(&d, &q, &tol()), "poly n={n}");
        }
    }

    #[test]
    fn odd_character_standard_l_vanishes() {
        let chars3 = enumerate_characters(3).unwrap();
        let odd = chars3.iter().find(|c| c.is_odd()).unwrap();
        let v = l_direct(odd, 2, 128).unwrap();
        assert!(v.identically_zero);
        assert!(v.value.is_zero());
    }

    #[test]
    fn principal_character_reduces_to_spectral_zeta_for_prime_modulus() {
        // for prime m every 1 ≤ j ≤ m−1 is a unit, so L(n, χ₀) is the
        // spectral zeta value m·C_{m,0}(n)
        let p = 128;
        for m in [5u32, 7, 13] {
            let chars = enumerate_characters(m).unwrap();
            let principal = &chars[0];
            for n in 1..=3u32 {
                let direct = l_direct(principal, n, p).unwrap().value;
                let exact = crate::trigsums::unshifted_sum_values(m, 0, n as usize).unwrap()
                    [n as usize - 1]
                    .clone();
                let expect =
                    CNum::from_rational(&(&exact * Rational::from(m)), p);
                assert!(approx_eq(&direct, &expect, &tol()), "m={m} n={n}");
            }
        }
        // (m²−1)/3 at n = 1
        let chars7 = enumerate_characters(7).unwrap();
        let v = l_direct(&chars7[0], 1, p).unwrap().value;
        assert!((v.re().to_f64() - 16.0).abs() < 1e-20);
    }

    #[test]
    fn degree_bound_of_symbolic_polynomial() {
        for m in [5u32, 8, 13] {
            for n in 1..=4u32 {
                let poly = l_value_polynomial(m, n).unwrap();
                assert_eq!(poly.degree(), Some(2 * n as usize), "m={m} n={n}");
            }
        }
    }

    #[test]
    fn symbolic_c_matches_scalar_recurrence() {
        for m in [5u32, 9, 12] {
            for n in 0..=3u32 {
                let poly = c_polynomial_in_r(m, n).unwrap();
                for r in 0..m as i64 {
                    let scalar = recurrence_unshifted(m, r, n as usize + 1).unwrap()
                        [n as usize]
                        .clone();
                    assert_eq!(poly.eval_exact(&Rational::from(r)), scalar, "m={m} n={n} r={r}");
                }
            }
        }
    }

    #[test]
    fn l_tilde_hand_value_mod3() {
        // odd quadratic χ mod 3, n = 1: 8/(3√3)
        let chars3 = enumerate_characters(3).unwrap();
        let odd = chars3.iter().find(|c| c.is_odd()).unwrap();
        let v = l_tilde_direct(odd, 1, 128).unwrap().value;
        let expect = 8.0 / (3.0 * 3f64.sqrt());
        assert!((v.re().to_f64() - expect).abs() < 1e-15, "{v}");
        assert!(v.im().clone().abs() < Float::with_val(128, 1e-30));
    }

    #[test]
    fn l_tilde_even_character_vanishes() {
        let chi = quadratic_mod5();
        let v = l_tilde_direct(&chi, 1, 128).unwrap();
        assert!(v.identically_zero);
    }

    #[test]
    fn l_tilde_derivative_routes_agree() {
        for m in [3u32, 7, 11] {
            let chars = enumerate_characters(m).unwrap();
            let odd = chars
                .iter()
                .find(|c| c.is_odd() && c.is_primitive())
                .unwrap();
            for n in 1..=2u32 {
                let direct = l_tilde_direct(odd, n, 128).unwrap().value;
                let deriv = l_tilde_derivative(odd, n, 128).unwrap().value;
                let numeric = l_tilde_derivative_numeric(odd, n, 128).unwrap().value;
                let delta = direct.sub(&deriv).abs();
                assert!(
                    delta < Float::with_val(128, 2).pow(-50),
                    "m={m} n={n}: analytic delta = {delta}"
                );
                let delta_num = direct.sub(&numeric).abs();
                assert!(
                    delta_num < Float::with_val(128, 2).pow(-40),
                    "m={m} n={n}: numeric delta = {delta_num}"
                );
            }
        }
    }

    #[test]
    fn l_hat_routes_agree() {
        let p = 128;
        for m in [3u32, 5, 6, 7] {
            let chars = enumerate_characters(m).unwrap();
            for chi in chars.iter().filter(|c| c.is_primitive()) {
                for n in 1..=3u32 {
                    let direct = l_hat_direct(chi, n, p).unwrap().value;
                    let closed = l_hat_closed(chi, n, p).unwrap().value;
                    let delta = direct.sub(&closed).abs();
                    assert!(
                        delta < Float::with_val(p, 2).pow(-60),
                        "m={m} χ#{} n={n}: delta = {delta}",
                        chi.index()
                    );
                }
            }
        }
    }

    #[test]
    fn l_hat_rejects_multiples_of_four() {
        let chars8 = enumerate_characters(8).unwrap();
        let prim = chars8.iter().find(|c| c.is_primitive()).unwrap();
        assert!(matches!(l_hat_direct(prim, 1, 128), Err(Error::Domain(_))));
        assert!(matches!(l_hat_closed(prim, 1, 128), Err(Error::Domain(_))));
    }

    #[test]
    fn realness_for_quadratic_characters() {
        let p = 128;
        for m in [5u32, 13, 17] {
            let chars = enumerate_characters(m).unwrap();
            for chi in chars
                .iter()
                .filter(|c| c.is_real() && !c.is_principal() && c.is_even())
            {
                for n in 1..=3u32 {
                    let v = l_direct(chi, n, p).unwrap().value;
                    assert!(
                        v.im().clone().abs() < Float::with_val(p, 1e-28),
                        "m={m} n={n}"
                    );
                }
            }
        }
    }

    #[test]
    fn non_primitive_rejection() {
        let chars6 = enumerate_characters(6).unwrap();
        assert!(matches!(
            l_via_gauss(&chars6[1], 1, 128),
            Err(Error::NotPrimitive { .. })
        ));
    }
}
