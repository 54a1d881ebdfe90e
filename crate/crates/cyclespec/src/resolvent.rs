//! Twisted resolvent kernel G_{X_m,χ_β}(x,y;s) in three independent forms:
//! spectral partial-fraction sum, hyperbolic closed form (Re(s) > 0), and
//! Chebyshev rational function, plus the exact rational function at β = 0
//! and the Laplace-transform route through the heat kernel.
//!
//! Two normalizations are exposed. The spectral expansion carries the
//! factor e^{2πiβ(x−y)/m} with the unreduced difference; the generating-
//! function identities cancel exactly that factor. `Normalization::Cancelled`
//! is the cancelled form (the generating function F_{m,r}), and
//! `Normalization::Full` restores e^{2πiβr/m}. Keeping both explicit
//! prevents off-by-a-phase mistakes between the two conventions.

use crate::chebyshev::{cheb_t, cheb_u, Poly};
use crate::error::{Error, Result};
use crate::heat::CycleParams;
use crate::numeric::{check_precision, cos_2pi, reduce_mod, CNum, Rational, Tolerance};
use crate::series;
use rug::ops::Pow;
use rug::Float;

/// Phase convention for resolvent values; see the module docs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Normalization {
    /// The generating function F_{m,r}(s,β): spectral sum with weights
    /// e^{2πijr/m} only.
    Cancelled,
    /// The kernel value G(x,y;s) for x−y = r: multiplies the cancelled form
    /// by e^{2πiβr/m}.
    Full,
}

fn full_phase(m: u32, beta: &Rational, r: i64, precision_bits: u32) -> CNum {
    let mut q = Rational::from(r) * beta.clone();
    q /= Rational::from(m);
    CNum::unit_phase(&q, precision_bits)
}

/// Spectral partial-fraction form of the resolvent.
///
/// Cancelled: (1/m)·Σ_j e^{2πijr/m} / (s + 2 sin²(π(j+β)/m)).
/// Errors with the offending spectral index when s is within the absolute
/// tolerance of a pole.
pub fn resolvent_spectral(
    m: u32,
    beta: &Rational,
    r: i64,
    s: &CNum,
    norm: Normalization,
    precision_bits: u32,
) -> Result<CNum> {
    let p = check_precision(precision_bits)?;
    let params = CycleParams::new(m, beta.clone(), p)?;
    let guard = Tolerance::default_for(p).abs_eps;
    let mut acc = CNum::zero(p);
    for j in 0..m {
        let lambda = params.eigenvalue(j);
        let denom = s.add(&CNum::from_real(lambda));
        if denom.abs() <= guard {
            return Err(Error::PoleProximity { j: j as usize });
        }
        let mut q = Rational::from(j) * Rational::from(r);
        q /= Rational::from(m);
        let weight = CNum::unit_phase(&q, p);
        acc = acc.add(&weight.div(&denom)?);
    }
    acc = acc.mul_rational(&Rational::from((1, m)));
    Ok(match norm {
        Normalization::Cancelled => acc,
        Normalization::Full => acc.mul(&full_phase(m, beta, r, p)),
    })
}

/// Chebyshev rational form of the resolvent (entire in s apart from
/// denominator zeros):
///
/// e^{−2πiβℓ/m}·(U_{m−ℓ−1}(s+1) + e^{2πiβ}·U_{ℓ−1}(s+1)) / (T_m(s+1) − cos 2πβ).
pub fn resolvent_closed(
    m: u32,
    beta: &Rational,
    r: i64,
    s: &CNum,
    norm: Normalization,
    precision_bits: u32,
) -> Result<CNum> {
    let form = ResolventClosedForm::assemble(m, beta, r, precision_bits)?;
    let value = form.eval(s)?;
    Ok(match norm {
        Normalization::Cancelled => value,
        Normalization::Full => value.mul(&full_phase(m, beta, r, precision_bits)),
    })
}

/// The assembled Chebyshev form of the resolvent for one (m, r, β):
/// prefactor·(U_{m−ℓ−1}(s+1) + e^{2πiβ}·U_{ℓ−1}(s+1)) / (T_m(s+1) − cos 2πβ),
/// in the cancelled normalization.
#[derive(Clone, Debug)]
pub struct ResolventClosedForm {
    pub m: u32,
    /// Residue class of r in {0, …, m−1}.
    pub ell: i64,
    pub beta: Rational,
    /// U_{m−ℓ−1} and U_{ℓ−1} (zero polynomial at ℓ = 0).
    pub numerator_parts: (Poly, Poly),
    /// T_m.
    pub denominator: Poly,
    /// cos 2πβ.
    pub cos_term: Float,
    /// e^{2πiβ}, the weight on the second numerator part.
    pub twist: CNum,
    /// e^{−2πiβℓ/m}.
    pub prefactor: CNum,
}

impl ResolventClosedForm {
    pub fn assemble(m: u32, beta: &Rational, r: i64, precision_bits: u32) -> Result<Self> {
        let p = check_precision(precision_bits)?;
        if m < 2 {
            return Err(Error::InvalidParameter("cycle graph needs m >= 2".into()));
        }
        let ell = r.rem_euclid(m as i64);
        let numerator_parts = (cheb_u(m as i64 - ell - 1), cheb_u(ell - 1));
        let denominator = cheb_t(m);
        debug_assert_eq!(denominator.degree(), Some(m as usize));
        debug_assert_eq!(
            numerator_parts.0.degree(),
            Some((m as i64 - ell - 1) as usize)
        );
        debug_assert_eq!(
            numerator_parts.1.degree(),
            if ell == 0 { None } else { Some(ell as usize - 1) }
        );
        let mut pref_q = Rational::from(-ell) * beta.clone();
        pref_q /= Rational::from(m);
        Ok(ResolventClosedForm {
            m,
            ell,
            beta: beta.clone(),
            numerator_parts,
            denominator,
            cos_term: cos_2pi(beta, p),
            twist: CNum::unit_phase(&reduce_mod(beta, 1), p),
            prefactor: CNum::unit_phase(&pref_q, p),
        })
    }

    /// Evaluate at s (cancelled normalization); errors when the denominator
    /// comes within the absolute tolerance of zero.
    pub fn eval(&self, s: &CNum) -> Result<CNum> {
        let p = s.precision_bits().max(self.cos_term.prec());
        let z = s.add(&CNum::one(p));
        let den = self
            .denominator
            .eval(&z)
            .sub(&CNum::from_real(self.cos_term.clone()));
        let guard = Tolerance::default_for(p).abs_eps;
        if den.abs() <= guard {
            return Err(Error::Domain(format!(
                "T_{}(s+1) − cos 2πβ vanishes at this s (within tolerance)",
                self.m
            )));
        }
        let num = self
            .numerator_parts
            .0
            .eval(&z)
            .add(&self.twist.mul(&self.numerator_parts.1.eval(&z)));
        Ok(self.prefactor.mul(&num.div(&den)?))
    }
}

/// Hyperbolic closed form, valid on Re(s) > 0 with principal branches:
///
/// e^{−2πiβℓ/m}·[sinh((m−ℓ)u) + e^{2πiβ}·sinh(ℓu)] / (√(s²+2s)·(cosh(mu) − cos 2πβ)),
/// where u = cosh⁻¹(s+1). Evaluated through w = s+1+√(s²+2s) and integer
/// powers of w, which is exactly how the underlying geometric series sums.
pub fn resolvent_hyperbolic(
    m: u32,
    beta: &Rational,
    r: i64,
    s: &CNum,
    norm: Normalization,
    precision_bits: u32,
) -> Result<CNum> {
    let p = check_precision(precision_bits)?;
    if *s.re() <= 0 {
        return Err(Error::Domain(
            "hyperbolic resolvent form requires Re(s) > 0".into(),
        ));
    }
    let ell = r.rem_euclid(m as i64);
    let z = s.add(&CNum::one(p));
    // q = sqrt((s+1)² − 1), principal branch
    let q = z.mul(&z).sub(&CNum::one(p)).sqrt();
    let w = z.add(&q);
    let w_m = w.powi(m as i64)?;
    let w_pos = w.powi(m as i64 - ell)?;
    let w_ell = w.powi(ell)?;
    let half = Rational::from((1, 2));
    let sinh_pos = w_pos.sub(&w_pos.recip()?).mul_rational(&half);
    let sinh_ell = w_ell.sub(&w_ell.recip()?).mul_rational(&half);
    let cosh_m = w_m.add(&w_m.recip()?).mul_rational(&half);
    let twist = CNum::unit_phase(&reduce_mod(beta, 1), p);
    let num = sinh_pos.add(&twist.mul(&sinh_ell));
    let den = q.mul(&cosh_m.sub(&CNum::from_real(cos_2pi(beta, p))));
    let mut pref_q = Rational::from(-ell) * beta.clone();
    pref_q /= Rational::from(m);
    let prefactor = CNum::unit_phase(&pref_q, p);
    let value = prefactor.mul(&num.div(&den)?);
    Ok(match norm {
        Normalization::Cancelled => value,
        Normalization::Full => value.mul(&full_phase(m, beta, r, p)),
    })
}

/// Exact rational function of s with rational coefficients.
#[derive(Clone, Debug)]
pub struct RationalFn {
    pub numerator: Poly,
    pub denominator: Poly,
}

impl RationalFn {
    pub fn eval_exact(&self, s: &Rational) -> Result<Rational> {
        let den = self.denominator.eval_exact(s);
        if den == 0 {
            return Err(Error::Domain("rational function evaluated at a pole".into()));
        }
        Ok(self.numerator.eval_exact(s) / den)
    }

    pub fn eval(&self, s: &CNum) -> Result<CNum> {
        self.numerator.eval(s).div(&self.denominator.eval(s))
    }

    /// Exact Taylor coefficients at s = 0 (requires a nonzero constant
    /// denominator term).
    pub fn taylor(&self, count: usize) -> Result<Vec<Rational>> {
        series::divide_exact(self.numerator.coeffs(), self.denominator.coeffs(), count)
    }
}

/// The exact rational function F_{m,r}(s) at β = 0:
///
/// (U_{m−ℓ−1}(s+1) + U_{ℓ−1}(s+1))/(T_m(s+1) − 1) − 1/(ms),
/// combined over a common denominator; the apparent pole at s = 0 cancels
/// exactly and is removed by synthetic division. Its Taylor coefficients at
/// 0 are the c_{m,r}(n).
pub fn resolvent_rational(m: u32, r: i64) -> Result<RationalFn> {
    if m < 2 {
        return Err(Error::InvalidParameter("cycle graph needs m >= 2".into()));
    }
    let ell = r.rem_euclid(m as i64);
    let one = Rational::from(1);
    let u_sum = cheb_u(m as i64 - ell - 1)
        .taylor_shift(&one)
        .add(&cheb_u(ell - 1).taylor_shift(&one));
    // T_m(s+1) − 1 = s·Dp(s) exactly (the constant terms cancel)
    let t_shift = cheb_t(m).taylor_shift(&one);
    let dp = t_shift.sub(&Poly::one()).div_x()?;
    // F = (m·U_sum − Dp)/(m·s·Dp); the numerator vanishes at s = 0
    let combined = u_sum.scale(&Rational::from(m)).sub(&dp);
    let reduced = combined.div_x()?;
    Ok(RationalFn {
        numerator: reduced,
        denominator: dp.scale(&Rational::from(m)),
    })
}

/// The pole set of the resolvent, with exact multiplicity detection.
#[derive(Clone, Debug)]
pub struct PoleSet {
    /// Distinct pole locations −2 sin²(π(j+β)/m), sorted ascending.
    pub values: Vec<Float>,
    /// Multiplicity of each distinct pole (spectral index coincidences).
    pub multiplicities: Vec<u32>,
    /// True iff any distinct pole has multiplicity above one.
    pub has_coincidence: bool,
}

/// Poles of s ↦ G(x,y;s): the negated Laplacian eigenvalues.
///
/// Coincidences λ_j = λ_{j'} happen exactly when j + j' + 2β ≡ 0 (mod m);
/// detection is exact arithmetic on the rational shift.
pub fn resolvent_poles(m: u32, beta: &Rational, precision_bits: u32) -> Result<PoleSet> {
    let p = check_precision(precision_bits)?;
    let params = CycleParams::new(m, beta.clone(), p)?;
    let two_beta = beta * Rational::from(2);
    let mut entries: Vec<(u32, Float)> = Vec::new();
    let mut seen = vec![false; m as usize];
    for j in 0..m {
        if seen[j as usize] {
            continue;
        }
        seen[j as usize] = true;
        let mut mult = 1u32;
        for j2 in (j + 1)..m {
            // λ_j = λ_{j2} iff 2β + j + j2 ≡ 0 (mod m)
            let test = &two_beta + Rational::from(j + j2);
            if reduce_mod(&test, m) == 0
                && !seen[j2 as usize] {
                    seen[j2 as usize] = true;
                    mult += 1;
                }
        }
        let pole = Float::with_val(p, -params.eigenvalue(j));
        entries.push((mult, pole));
    }
    entries.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
    let has_coincidence = entries.iter().any(|(mult, _)| *mult > 1);
    Ok(PoleSet {
        values: entries.iter().map(|(_, v)| v.clone()).collect(),
        multiplicities: entries.iter().map(|(mult, _)| *mult).collect(),
        has_coincidence,
    })
}

/// Result of the Laplace-transform route.
#[derive(Clone, Debug)]
pub struct LaplaceResult {
    pub value: CNum,
    /// Empirical quadrature error (difference of successive refinements).
    pub quad_error: Float,
    /// Truncation bound e^{−Re(s)·T}/Re(s) for the discarded tail [T, ∞).
    pub tail_bound: Float,
}

/// Gauss–Legendre nodes and weights on [−1, 1] at working precision.
fn legendre_nodes(order: u32, precision_bits: u32) -> Vec<(Float, Float)> {
    let p = precision_bits + 16;
    let n = order;
    let mut out = Vec::with_capacity(order as usize);
    let pi = crate::numeric::pi(p);
    for i in 1..=n.div_ceil(2) {
        // Newton iteration from the Chebyshev-angle initial guess.
        let mut x = Float::with_val(
            p,
            Float::with_val(p, &pi * Float::with_val(p, i as f64 - 0.25))
                / Float::with_val(p, n as f64 + 0.5),
        )
        .cos();
        let mut dp_val = Float::with_val(p, 0);
        for _ in 0..64 {
            let (pn, pn1) = legendre_pair(n, &x, p);
            // P'_n(x) = n(x·P_n − P_{n−1})/(x² − 1)
            let x2m1 = Float::with_val(p, x.clone().square() - 1u32);
            dp_val = Float::with_val(
                p,
                Float::with_val(p, &x * &pn) - &pn1,
            ) * Float::with_val(p, n) / x2m1;
            let step = Float::with_val(p, &pn / &dp_val);
            let next = Float::with_val(p, &x - &step);
            let done = step.clone().abs() < Float::with_val(p, 2u32).pow(-(p as i32) + 8);
            x = next;
            if done {
                break;
            }
        }
        let weight = Float::with_val(
            p,
            2 / (Float::with_val(p, 1 - x.clone().square()) * dp_val.clone().square()),
        );
        out.push((x.clone(), weight.clone()));
        // symmetric partner
        if 2 * i <= n {
            out.push((Float::with_val(p, -&x), weight));
        }
    }
    out
}

fn legendre_pair(n: u32, x: &Float, p: u32) -> (Float, Float) {
    let mut p_prev = Float::with_val(p, 1);
    let mut p_cur = Float::with_val(p, x);
    if n == 0 {
        return (p_prev, Float::with_val(p, 0));
    }
    for k in 1..n {
        let a = Float::with_val(p, x * &p_cur) * Float::with_val(p, 2 * k + 1);
        let b = Float::with_val(p, &p_prev * Float::with_val(p, k));
        let next = Float::with_val(p, a - b) / Float::with_val(p, k + 1);
        p_prev = p_cur;
        p_cur = next;
    }
    (p_cur, p_prev)
}

/// Numerically integrates e^{−st}·K_{X_m,χ_β}(x,y;t) over [0, T] with
/// composite Gauss–Legendre panels, refining until two successive levels
/// agree; reports the certified tail bound for [T, ∞).
pub fn resolvent_from_laplace(
    m: u32,
    beta: &Rational,
    x: i64,
    y: i64,
    s: &CNum,
    horizon: &Float,
    precision_bits: u32,
) -> Result<LaplaceResult> {
    let p = check_precision(precision_bits)?;
    if *s.re() <= 0 {
        return Err(Error::Domain(
            "Laplace-transform route requires Re(s) > 0".into(),
        ));
    }
    if !(horizon.is_finite() && *horizon > 0) {
        return Err(Error::InvalidParameter("horizon must be positive".into()));
    }
    let params = CycleParams::new(m, beta.clone(), p)?;

    // Spectral data assembled once; the integrand is then
    // (1/m)·Σ_j phase_j · e^{−(s+λ_j)t}.
    let lambdas: Vec<Float> = (0..m).map(|j| params.eigenvalue(j)).collect();
    let phases: Vec<CNum> = (0..m).map(|j| params.eigenfunction_phase(j, x - y)).collect();
    let integrand = |t: &Float| -> CNum {
        let mut acc = CNum::zero(p);
        for (lambda, phase) in lambdas.iter().zip(&phases) {
            let exponent = s
                .add(&CNum::from_real(lambda.clone()))
                .neg()
                .mul_float(t);
            acc = acc.add(&phase.mul(&exponent.exp()));
        }
        acc.mul_rational(&Rational::from((1, m)))
    };

    let nodes = legendre_nodes(48, p);
    let quad = |panels: u32| -> CNum {
        let width = Float::with_val(p, horizon) / panels;
        let mut total = CNum::zero(p);
        for k in 0..panels {
            let a = Float::with_val(p, &width * k);
            let mid = Float::with_val(p, &a + Float::with_val(p, &width / 2u32));
            let scale = Float::with_val(p, &width / 2u32);
            for (node, weight) in &nodes {
                let t = Float::with_val(p, &mid + Float::with_val(p, node * &scale));
                total = total.add(&integrand(&t).mul_float(&Float::with_val(p, weight * &scale)));
            }
        }
        total
    };

    let target: Float = Float::with_val(p, 2u32).pow(-(p as i32) + 24);
    let mut panels = (horizon.to_f64() / 2.0).ceil().max(1.0) as u32;
    let mut coarse = quad(panels);
    let mut quad_error;
    loop {
        panels *= 2;
        let fine = quad(panels);
        quad_error = fine.sub(&coarse).abs();
        coarse = fine;
        if quad_error < target || panels >= 512 {
            break;
        }
    }

    let re_s = s.re().clone();
    let tail_bound = Float::with_val(p, Float::with_val(p, -Float::with_val(p, &re_s * horizon)).exp() / re_s);
    Ok(LaplaceResult {
        value: coarse,
        quad_error,
        tail_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{approx_eq, sin_pi};

    fn c(re: f64, im: f64) -> CNum {
        CNum::new(Float::with_val(128, re), Float::with_val(128, im))
    }

    #[test]
    fn spectral_equals_closed_on_sample_grid() {
        let cases = [
            (2u32, (1i64, 2i64), 0i64, 1.0, 0.0),
            (5, (1, 3), 2, 0.7, 0.4),
            (7, (3, 10), -4, -0.9, 1.3),
            (9, (1, 4), 11, 2.0, -0.8),
            (12, (2, 5), 5, 0.25, 0.0),
        ];
        let tol = Tolerance::default_for(128);
        for (m, beta, r, sre, sim) in cases {
            let beta = Rational::from(beta);
            let s = c(sre, sim);
            for norm in [Normalization::Cancelled, Normalization::Full] {
                let spec = resolvent_spectral(m, &beta, r, &s, norm, 128).unwrap();
                let closed = resolvent_closed(m, &beta, r, &s, norm, 128).unwrap();
                assert!(
                    approx_eq(&spec, &closed, &tol),
                    "m={m} r={r} norm={norm:?}: {spec} vs {closed}"
                );
            }
        }
    }

    #[test]
    fn hyperbolic_matches_closed_for_positive_real_part() {
        let tol = Tolerance::default_for(128);
        for (m, beta, r, sre, sim) in [
            (3u32, (1i64, 3i64), 1i64, 0.5, 0.0),
            (6, (1, 2), 2, 1.5, 2.0),
            (10, (7, 10), -3, 0.1, -0.7),
        ] {
            let beta = Rational::from(beta);
            let s = c(sre, sim);
            let hyp = resolvent_hyperbolic(m, &beta, r, &s, Normalization::Cancelled, 128).unwrap();
            let closed = resolvent_closed(m, &beta, r, &s, Normalization::Cancelled, 128).unwrap();
            assert!(approx_eq(&hyp, &closed, &tol), "m={m} r={r}");
        }
        assert!(resolvent_hyperbolic(
            4,
            &Rational::from((1, 3)),
            0,
            &c(-1.0, 0.5),
            Normalization::Cancelled,
            128
        )
        .is_err());
    }

    #[test]
    fn large_s_leading_term() {
        // s·F → 1 as s → ∞ for r ≡ 0 (mod m); → 0 otherwise.
        let beta = Rational::from((1, 3));
        let s = c(1e6, 0.0);
        let v = resolvent_spectral(6, &beta, 0, &s, Normalization::Cancelled, 128).unwrap();
        let scaled = v.mul(&s);
        let err = scaled.sub(&CNum::one(128)).abs();
        assert!(err < Float::with_val(128, 1e-5), "err = {err}");

        let v1 = resolvent_spectral(6, &beta, 1, &s, Normalization::Cancelled, 128).unwrap();
        assert!(v1.mul(&s).abs() < Float::with_val(128, 1e-5));
    }

    #[test]
    fn value_at_zero_with_half_shift() {
        // F_{m,0}(0, 1/2) = U_{m−1}(1)/(T_m(1)+1) = m/2
        let beta = Rational::from((1, 2));
        for m in [2u32, 3, 5, 8] {
            let v = resolvent_spectral(m, &beta, 0, &CNum::zero(128), Normalization::Cancelled, 128)
                .unwrap();
            let expect = CNum::from_rational(&Rational::from((m, 2)), 128);
            let tol = Tolerance::default_for(128);
            assert!(approx_eq(&v, &expect, &tol), "m = {m}: {v}");
        }
    }

    #[test]
    fn closed_form_limit_at_zero() {
        // lim_{s→0} of the cancelled form: e^{−2πiβℓ/m}((m−ℓ)+ℓe^{2πiβ})/(1−cos2πβ)
        let m = 7u32;
        let beta = Rational::from((1, 3));
        let r = 3i64;
        let ell = 3i64;
        let p = 128;
        let v = resolvent_closed(m, &beta, r, &CNum::zero(p), Normalization::Cancelled, p).unwrap();
        let twist = CNum::unit_phase(&beta, p);
        let num = CNum::from_i64(m as i64 - ell, p).add(&twist.mul_rational(&Rational::from(ell)));
        let den = CNum::from_real(Float::with_val(p, 1 - cos_2pi(&beta, p)));
        let mut pref_q = Rational::from(-ell) * beta.clone();
        pref_q /= Rational::from(m);
        let expect = CNum::unit_phase(&pref_q, p).mul(&num.div(&den).unwrap());
        assert!(approx_eq(&v, &expect, &Tolerance::default_for(p)));
    }

    #[test]
    fn omega_twist_value_at_zero() {
        // m = 3k, r = k, β = 1/2 at s = 0:
        // e^{−iπ/3}·(U_{2k−1}(1) − U_{k−1}(1))/(T_{3k}(1) + 1) = (k/2)·e^{−iπ/3},
        // consistent with Σ csc²((2j+1)π/6k)·ω^j = 3k²e^{−iπ/3}
        let p = 128;
        let beta = Rational::from((1, 2));
        let tol = Tolerance::default_for(p);
        for k in 1..=4i64 {
            let m = 3 * k as u32;
            let closed =
                resolvent_closed(m, &beta, k, &CNum::zero(p), Normalization::Cancelled, p)
                    .unwrap();
            let expect = CNum::unit_phase(&Rational::from((-1, 6)), p)
                .mul_rational(&Rational::from((k, 2)));
            assert!(approx_eq(&closed, &expect, &tol), "k = {k}: {closed}");
            let spectral =
                resolvent_spectral(m, &beta, k, &CNum::zero(p), Normalization::Cancelled, p)
                    .unwrap();
            assert!(approx_eq(&spectral, &expect, &tol), "spectral k = {k}");
        }
    }

    #[test]
    fn holomorphy_at_zero_for_nonintegral_shift() {
        // |closed form| stays bounded on the circle |s| = 2⁻²⁰.
        let m = 9u32;
        let beta = Rational::from((2, 7));
        let p = 128;
        let radius = Float::with_val(p, 2).pow(-20);
        let limit = resolvent_closed(m, &beta, 4, &CNum::zero(p), Normalization::Cancelled, p)
            .unwrap()
            .abs();
        let bound = Float::with_val(p, &limit * 4u32) + 1u32;
        for k in 0..16u32 {
            let angle = Rational::from((k, 16));
            let point = CNum::unit_phase(&angle, p).mul_float(&radius);
            let v = resolvent_closed(m, &beta, 4, &point, Normalization::Cancelled, p).unwrap();
            assert!(v.abs() < bound, "k = {k}");
        }
    }

    #[test]
    fn rational_function_constant_terms() {
        // c_{m,r}(0) = (m²−6mr+6r²−1)/(6m)
        for m in 2..=20u32 {
            for r in 0..m as i64 {
                let f = resolvent_rational(m, r).unwrap();
                let c0 = f.taylor(1).unwrap()[0].clone();
                let expect = Rational::from((
                    m as i64 * m as i64 - 6 * m as i64 * r + 6 * r * r - 1,
                    6 * m as i64,
                ));
                assert_eq!(c0, expect, "m={m} r={r}");
            }
        }
    }

    #[test]
    fn rational_function_m5_examples() {
        let f = resolvent_rational(5, 0).unwrap();
        let c0 = f.taylor(1).unwrap()[0].clone();
        assert_eq!(c0, Rational::from((4, 5)));
        // C_{5,0}(1) = (−1)⁰·2·c_0 = 8/5, and the direct sum (1/5)Σ csc²(jπ/5)
        let p = 200;
        let mut direct = Float::with_val(p, 0);
        for j in 1..5u32 {
            direct += sin_pi(&Rational::from((j, 5)), p).square().recip();
        }
        direct /= 5u32;
        let closed = Float::with_val(p, &Rational::from((8, 5)));
        let diff = Float::with_val(p, &direct - &closed).abs();
        assert!(diff < Float::with_val(p, 2).pow(-150));

        let f1 = resolvent_rational(5, 1).unwrap();
        assert_eq!(f1.taylor(1).unwrap()[0], Rational::from(0));
    }

    #[test]
    fn rational_matches_spectral_with_pole_folded() {
        // F_{m,r}(s) + 1/(ms) equals the full β = 0 spectral sum.
        let p = 128;
        let tol = Tolerance::default_for(p);
        for (m, r, s_val) in [(4u32, 1i64, (3i64, 2i64)), (7, 3, (1, 5)), (9, 0, (-7, 3))] {
            let s_exact = Rational::from(s_val);
            let f = resolvent_rational(m, r).unwrap();
            let mut pole_term = Rational::from(1);
            pole_term /= Rational::from(m) * s_exact.clone();
            let lhs = f.eval_exact(&s_exact).unwrap() + pole_term;
            let s = CNum::from_rational(&s_exact, p);
            let spec =
                resolvent_spectral(m, &Rational::from(0), r, &s, Normalization::Cancelled, p)
                    .unwrap();
            assert!(
                approx_eq(&CNum::from_rational(&lhs, p), &spec, &tol),
                "m={m} r={r}"
            );
        }
    }

    #[test]
    fn pole_sets_with_exact_multiplicity() {
        let p = 128;
        let poles = resolvent_poles(2, &Rational::from(0), p).unwrap();
        assert_eq!(poles.values.len(), 2);
        assert_eq!(poles.values[0].to_f64(), -2.0);
        assert_eq!(poles.values[1].to_f64(), 0.0);
        assert!(!poles.has_coincidence);

        let poles4 = resolvent_poles(4, &Rational::from(0), p).unwrap();
        assert_eq!(poles4.values.len(), 3);
        assert_eq!(poles4.multiplicities, vec![1, 2, 1]);
        assert!(poles4.has_coincidence);
        assert_eq!(poles4.values[1].to_f64(), -1.0);
    }

    #[test]
    fn poles_match_denominator_roots() {
        // Zeros of T_m(s+1) − cos 2πβ found by exact-rational bisection
        // coincide with the pole list. β = 1/3 keeps every root simple and
        // cos 2πβ = −1/2 exactly rational.
        let p = 128;
        let beta = Rational::from((1, 3));
        for m in 2..=12u32 {
            let shifted = cheb_t(m).taylor_shift(&Rational::from(0)); // T_m(z) itself
            let poly_at = |s: &Rational| -> Rational {
                let z = s + Rational::from(1);
                shifted.eval_exact(&z) + Rational::from((1, 2))
            };
            let mut roots: Vec<Float> = Vec::new();
            let steps = 8 * m;
            let lo = Rational::from(-2);
            let width = Rational::from((2, steps));
            for k in 0..steps {
                let mut a = &lo + &width * Rational::from(k);
                let mut b = Rational::from(&a + &width);
                let fa = poly_at(&a);
                let fb = poly_at(&b);
                if fa == 0 {
                    roots.push(Float::with_val(p, &a));
                    continue;
                }
                if fb == 0 || (fa > 0) == (fb > 0) {
                    // an exact root at b is recorded by the next interval
                    continue;
                }
                for _ in 0..100 {
                    let mid = Rational::from(&a + &b) / Rational::from(2);
                    let fm = poly_at(&mid);
                    if fm == 0 {
                        a = mid.clone();
                        b = mid;
                        break;
                    }
                    if (fm > 0) == (poly_at(&a) > 0) {
                        a = mid;
                    } else {
                        b = mid;
                    }
                }
                roots.push(Float::with_val(p, &a));
            }
            let poles = resolvent_poles(m, &beta, p).unwrap();
            assert_eq!(roots.len(), poles.values.len(), "m = {m}");
            roots.sort_by(|x, y| x.partial_cmp(y).unwrap());
            for (root, pole) in roots.iter().zip(&poles.values) {
                let diff = Float::with_val(p, root - pole).abs();
                assert!(diff < Float::with_val(p, 2).pow(-80), "m = {m}: {diff}");
            }
        }
    }

    #[test]
    fn pole_proximity_is_detected() {
        let beta = Rational::from(0);
        let s = CNum::zero(128); // λ_0 = 0 at β = 0
        assert!(matches!(
            resolvent_spectral(5, &beta, 0, &s, Normalization::Cancelled, 128),
            Err(Error::PoleProximity { j: 0 })
        ));
    }

    #[test]
    fn laplace_route_matches_closed_form() {
        let p = 128;
        let beta0 = Rational::from(0);
        let s = c(1.0, 0.0);
        let horizon = Float::with_val(p, 60);
        let lap = resolvent_from_laplace(3, &beta0, 0, 0, &s, &horizon, p).unwrap();
        let closed = resolvent_closed(3, &beta0, 0, &s, Normalization::Full, p).unwrap();
        let diff = lap.value.sub(&closed).abs();
        assert!(diff < Float::with_val(p, 1e-20), "diff = {diff}");

        // tail bound dominates the budget at T = 30, s = 2
        let lap2 = resolvent_from_laplace(3, &beta0, 0, 0, &c(2.0, 0.0), &Float::with_val(p, 30), p)
            .unwrap();
        let expect_tail = Float::with_val(p, Float::with_val(p, -60).exp() / 2u32);
        let rel = Float::with_val(p, &lap2.tail_bound - &expect_tail).abs();
        assert!(rel < Float::with_val(p, 1e-30));

        // twisted complex case against the closed oracle
        let beta3 = Rational::from((1, 3));
        let s_c = c(1.0, 1.0);
        let lap3 =
            resolvent_from_laplace(6, &beta3, 2, 0, &s_c, &Float::with_val(p, 80), p).unwrap();
        let oracle = resolvent_closed(6, &beta3, 2, &s_c, Normalization::Full, p).unwrap();
        let budget = Float::with_val(
            p,
            &lap3.quad_error + &lap3.tail_bound,
        ) + Float::with_val(p, 1e-25);
        let delta = lap3.value.sub(&oracle).abs();
        assert!(delta < budget, "delta = {delta}, budget = {budget}");
    }

    #[test]
    fn resolvent_identity_spectral() {
        // (s + Δ)G(·, y; s) = δ_y in the Full normalization.
        let p = 128;
        let m = 6u32;
        let beta = Rational::from((2, 5));
        let params = CycleParams::new(m, beta.clone(), p).unwrap();
        let s = c(0.6, 0.9);
        let y = 2i64;
        let column: Vec<CNum> = (0..m as i64)
            .map(|x| {
                resolvent_spectral(m, &beta, x - y, &s, Normalization::Full, p).unwrap()
            })
            .collect();
        let lap = crate::heat::twisted_laplacian_apply(&params, &column).unwrap();
        for x in 0..m as usize {
            let lhs = column[x].mul(&s).add(&lap[x]);
            let expect = if x == y as usize {
                CNum::one(p)
            } else {
                CNum::zero(p)
            };
            let err = lhs.sub(&expect).abs();
            assert!(err < Float::with_val(p, 2).pow(-70), "x = {x}: {err}");
        }
    }
}
