//! Twisted trigonometric sums: every kind carries a literal high-precision
//! summation oracle ([`direct_sum`]) and at least one closed-form or
//! recurrence path, and the two are cross-checked everywhere.
//!
//! Conventions. The averaged sums are
//!
//! * C_{m,r}(β,n)  = (1/m)·Σ_{j=0}^{m−1} csc^{2n}((j+β)π/m)·e^{2πirj/m},
//! * C_{m,r}(n)    = same with β = 0 and the j = 0 term omitted,
//! * S_{m,r}(α,n)  = the secant analogue (exponent 2n),
//! * S̃/C̃          = double-argument variants with exponent n (odd powers
//!   allowed), arguments 2(j+shift)π/m.
//!
//! The standalone sums (no 1/m, r = 0) and the alternating sums (r = m/2)
//! are exposed through [`alternating_sum`] and the Chu–Marini checks.
//!
//! Shifts are exact rationals. Domain conditions are checked exactly on the
//! rational shift; the near-singular guard only matters for parameters that
//! approach (but do not hit) an excluded set.

use crate::chebyshev::{
    cheb_t, cheb_u, monomial_t_coeff, monomial_u_coeff, shifted_t_coeff, shifted_u_coeff, Poly,
};
use crate::error::{Error, Result};
use crate::numeric::{
    check_precision, cos_2pi, cos_pi, sin_pi, CNum, Integer, Rational, Tolerance,
    DEFAULT_PRECISION_BITS,
};
use crate::series;
use rug::ops::Pow;
use rug::Float;

/// The sum families of the generating-function identities.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SumKind {
    /// C_{m,r}(β,n): csc^{2n}((j+β)π/m), β ∉ ℤ.
    Cosecant,
    /// S_{m,r}(α,n): sec^{2n}((j+α)π/m), α − m/2 ∉ ℤ.
    Secant,
    /// C̃_{m,r}(β,n): csc^n(2(j+β)π/m).
    CosecantDouble,
    /// S̃_{m,r}(α,n): sec^n(2(j+α)π/m).
    SecantDouble,
    /// C_{m,r}(n): csc^{2n}(jπ/m), j = 1..m−1.
    CosecantNoShift,
    /// S_{m,r}(n): sec^{2n}(jπ/m), j ≠ m/2 when m is even.
    SecantNoShift,
    /// C̃_{m,r}(n): csc^n(2jπ/m), j = 1..m−1 minus j ≡ m/2 for even m.
    CosecantDoubleNoShift,
    /// cot^{2n}((j+β)π/m) with the cosecant domain conditions.
    Cotangent,
    /// tan^{2n}((j+α)π/m) with the secant domain conditions.
    Tangent,
    /// C_m^alt(β,2n): the standalone alternating sum (no 1/m average).
    AlternatingCosecant,
}

impl SumKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SumKind::Cosecant => "cosecant",
            SumKind::Secant => "secant",
            SumKind::CosecantDouble => "cosecant-double",
            SumKind::SecantDouble => "secant-double",
            SumKind::CosecantNoShift => "cosecant-noshift",
            SumKind::SecantNoShift => "secant-noshift",
            SumKind::CosecantDoubleNoShift => "cosecant-double-noshift",
            SumKind::Cotangent => "cotangent",
            SumKind::Tangent => "tangent",
            SumKind::AlternatingCosecant => "alternating-cosecant",
        }
    }

    pub fn parse(s: &str) -> Result<SumKind> {
        Ok(match s {
            "cosecant" | "csc" => SumKind::Cosecant,
            "secant" | "sec" => SumKind::Secant,
            "cosecant-double" | "csc2" => SumKind::CosecantDouble,
            "secant-double" | "sec2" => SumKind::SecantDouble,
            "cosecant-noshift" => SumKind::CosecantNoShift,
            "secant-noshift" => SumKind::SecantNoShift,
            "cosecant-double-noshift" => SumKind::CosecantDoubleNoShift,
            "cotangent" | "cot" => SumKind::Cotangent,
            "tangent" | "tan" => SumKind::Tangent,
            "alternating-cosecant" | "alt" => SumKind::AlternatingCosecant,
            other => {
                return Err(Error::InvalidParameter(format!("unknown sum kind '{other}'")))
            }
        })
    }
}

/// Full description of one twisted trigonometric sum.
///
/// `power` is the series index n: single-argument kinds use exponent 2n,
/// double-argument kinds use exponent n.
#[derive(Clone, Debug)]
pub struct SumSpec {
    pub kind: SumKind,
    pub m: u32,
    pub r: i64,
    pub shift: Rational,
    pub power: u32,
}

fn is_integer(q: &Rational) -> bool {
    *q.denom() == 1
}

fn is_half_odd_integer(q: &Rational) -> bool {
    // q ∈ ℤ + 1/2  ⟺  2q is an odd integer
    let twice = q * Rational::from(2);
    is_integer(&twice) && twice.numer().is_odd()
}

impl SumSpec {
    pub fn new(kind: SumKind, m: u32, r: i64, shift: Rational, power: u32) -> Result<Self> {
        let spec = SumSpec {
            kind,
            m,
            r,
            shift,
            power,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Residue class of r in {0, …, m−1}.
    pub fn ell(&self) -> i64 {
        self.r.rem_euclid(self.m as i64)
    }

    /// Exact domain checks; the message names the violated condition.
    pub fn validate(&self) -> Result<()> {
        if self.m < 2 {
            return Err(Error::Domain("all sums require m >= 2".into()));
        }
        if self.power == 0 {
            return Err(Error::Domain("the power index n must be positive".into()));
        }
        let m = self.m;
        let shift = &self.shift;
        match self.kind {
            SumKind::Cosecant | SumKind::Cotangent => {
                if is_integer(shift) {
                    return Err(Error::Domain(
                        "shifted cosecant (and cotangent) sums require β ∉ ℤ".into(),
                    ));
                }
            }
            SumKind::Secant | SumKind::Tangent => {
                let q = shift - Rational::from((m, 2));
                if is_integer(&q) {
                    return Err(Error::Domain(
                        "shifted secant (and tangent) sums require α − m/2 ∉ ℤ".into(),
                    ));
                }
            }
            SumKind::SecantDouble => match m % 4 {
                0 => {
                    if is_integer(shift) {
                        return Err(Error::Domain(
                            "secant double-argument sums require α ∉ ℤ when m ≡ 0 (mod 4)".into(),
                        ));
                    }
                }
                2 => {
                    if is_half_odd_integer(shift) {
                        return Err(Error::Domain(
                            "secant double-argument sums require α ∉ ℤ + 1/2 when m ≡ 2 (mod 4)"
                                .into(),
                        ));
                    }
                }
                _ => {
                    let twice = shift * Rational::from(2);
                    if is_half_odd_integer(&twice) {
                        return Err(Error::Domain(
                            "secant double-argument sums require 2α ∉ ℤ + 1/2 when m is odd".into(),
                        ));
                    }
                }
            },
            SumKind::CosecantDouble => {
                if m % 2 == 1 {
                    let twice = shift * Rational::from(2);
                    if is_integer(&twice) {
                        return Err(Error::Domain(
                            "cosecant double-argument sums require 2β ∉ ℤ when m is odd".into(),
                        ));
                    }
                } else if is_integer(shift) {
                    return Err(Error::Domain(
                        "cosecant double-argument sums require β ∉ ℤ when m is even".into(),
                    ));
                }
            }
            SumKind::CosecantNoShift
            | SumKind::SecantNoShift
            | SumKind::CosecantDoubleNoShift => {
                if !is_integer(shift) {
                    return Err(Error::Domain(
                        "no-shift sums take an integer (effectively zero) shift".into(),
                    ));
                }
            }
            SumKind::AlternatingCosecant => {
                // β ∈ ℤ is allowed (δ(β) = 1 drops the singular j = 0 term).
            }
        }
        Ok(())
    }
}

/// Which path produced a sum value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SumMethod {
    Direct,
    GeneratingFunction,
    Recurrence,
}

/// A sum evaluation; `exact` is filled on the β ∈ ℤ paths whose values are
/// provably rational.
#[derive(Clone, Debug)]
pub struct SumResult {
    pub spec: SumSpec,
    pub value: CNum,
    pub exact: Option<Rational>,
    pub method: SumMethod,
}

// ---------------------------------------------------------------------------
// Direct summation oracle
// ---------------------------------------------------------------------------

struct TermPlan {
    /// numerator of the angle as a multiple of π: angle_j = ratio(j)·π
    double_argument: bool,
    /// trig exponent (already doubled for single-argument kinds)
    exponent: u32,
    /// use cos instead of sin in the base (secant/tangent families)
    use_cos: bool,
    /// also multiply by cot or tan (ratio of the two trig values)
    quotient: Option<QuotientKind>,
}

#[derive(Clone, Copy, PartialEq)]
enum QuotientKind {
    Cot,
    Tan,
}

fn plan_for(spec: &SumSpec) -> TermPlan {
    match spec.kind {
        SumKind::Cosecant | SumKind::CosecantNoShift | SumKind::AlternatingCosecant => TermPlan {
            double_argument: false,
            exponent: 2 * spec.power,
            use_cos: false,
            quotient: None,
        },
        SumKind::Secant | SumKind::SecantNoShift => TermPlan {
            double_argument: false,
            exponent: 2 * spec.power,
            use_cos: true,
            quotient: None,
        },
        SumKind::CosecantDouble | SumKind::CosecantDoubleNoShift => TermPlan {
            double_argument: true,
            exponent: spec.power,
            use_cos: false,
            quotient: None,
        },
        SumKind::SecantDouble => TermPlan {
            double_argument: true,
            exponent: spec.power,
            use_cos: true,
            quotient: None,
        },
        SumKind::Cotangent => TermPlan {
            double_argument: false,
            exponent: 2 * spec.power,
            use_cos: false,
            quotient: Some(QuotientKind::Cot),
        },
        SumKind::Tangent => TermPlan {
            double_argument: false,
            exponent: 2 * spec.power,
            use_cos: true,
            quotient: Some(QuotientKind::Tan),
        },
    }
}

/// Indices excluded from the defining sum, and whether the result is the
/// plain (standalone) sum rather than the (1/m)-average.
fn index_set(spec: &SumSpec) -> (Vec<u32>, bool, bool) {
    let m = spec.m;
    let mut skip = Vec::new();
    let mut standalone = false;
    let mut alternating = false;
    match spec.kind {
        SumKind::CosecantNoShift => skip.push(0),
        SumKind::SecantNoShift => {
            if m.is_multiple_of(2) {
                skip.push(m / 2);
            }
        }
        SumKind::CosecantDoubleNoShift => {
            skip.push(0);
            if m.is_multiple_of(2) {
                skip.push(m / 2);
            }
        }
        SumKind::AlternatingCosecant => {
            standalone = true;
            alternating = true;
            if is_integer(&spec.shift) {
                // δ(β) = 1 start index
                skip.push(0);
            }
        }
        _ => {}
    }
    (skip, standalone, alternating)
}

/// Literal evaluation of the defining sum at the requested precision.
///
/// This is the brute-force oracle for every closed path. If any summand's
/// sine/cosine magnitude drops below the near-singular threshold the whole
/// sum is recomputed at doubled precision (up to 4× the default) before
/// giving up with [`Error::NearSingular`]. The threshold scales with the
/// working precision: 2⁻¹⁶ at the 128-bit default.
pub fn direct_sum(spec: &SumSpec, precision_bits: u32) -> Result<SumResult> {
    spec.validate()?;
    let p = check_precision(precision_bits)?;
    let limit = 4 * p.max(DEFAULT_PRECISION_BITS);
    let mut work = p;
    loop {
        match direct_sum_at(spec, work) {
            Ok(value) => {
                return Ok(SumResult {
                    spec: spec.clone(),
                    value: value.round_to(p),
                    exact: None,
                    method: SumMethod::Direct,
                })
            }
            Err(Error::NearSingular(_)) if work < limit => {
                work = (2 * work).min(limit);
            }
            Err(e) => return Err(e),
        }
    }
}

fn direct_sum_at(spec: &SumSpec, work: u32) -> Result<CNum> {
    let plan = plan_for(spec);
    let (skip, standalone, alternating) = index_set(spec);
    let m = spec.m;
    // Threshold 2^(−16·w/128): 2⁻¹⁶ at the default precision.
    let threshold: Float = Float::with_val(work, 2).pow(-((16 * work / 128) as i32));

    let mut acc = CNum::zero(work);
    for j in 0..m {
        if skip.contains(&j) {
            continue;
        }
        let mut ratio = Rational::from(j) + spec.shift.clone();
        if plan.double_argument {
            ratio *= Rational::from(2);
        }
        ratio /= Rational::from(m);
        let s = sin_pi(&ratio, work);
        let c = cos_pi(&ratio, work);
        let base = if plan.use_cos { &c } else { &s };
        if base.clone().abs() < threshold {
            return Err(Error::NearSingular(work));
        }
        let mut term = Float::with_val(work, base.clone().pow(plan.exponent as i32)).recip();
        if let Some(q) = plan.quotient {
            let (num, den) = match q {
                QuotientKind::Cot => (&c, &s),
                QuotientKind::Tan => (&s, &c),
            };
            if den.clone().abs() < threshold {
                return Err(Error::NearSingular(work));
            }
            // quotient^{2n} alongside the already-inverted power:
            // cot^{2n} = cos^{2n}/sin^{2n} = cos^{2n}·csc^{2n}
            term *= Float::with_val(work, num.clone().pow(plan.exponent as i32));
        }
        let weight = if alternating {
            let sign = if j % 2 == 0 { 1 } else { -1 };
            CNum::from_i64(sign, work)
        } else {
            let mut tw = Rational::from(spec.r) * Rational::from(j);
            tw /= Rational::from(m);
            CNum::unit_phase(&tw, work)
        };
        acc = acc.add(&weight.mul_float(&term));
    }
    if !standalone {
        acc = acc.mul_rational(&Rational::from((1, m)));
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// Shifted machinery (β ∉ ℤ): generating function and recurrence
// ---------------------------------------------------------------------------

fn require_nonintegral(beta: &Rational) -> Result<()> {
    if is_integer(beta) {
        return Err(Error::Domain(
            "the shifted machinery requires β ∉ ℤ (cos 2πβ = 1 degenerates the recurrence)".into(),
        ));
    }
    Ok(())
}

/// Map solved series coefficients c_{m,r}(β,n) back to sum values
/// C_{m,r}(β,n+1) = e^{−2πiβℓ/m}·(−1)^n·2^{n+1}·c_n.
fn unmap_shifted(
    c: &[CNum],
    m: u32,
    ell: i64,
    beta: &Rational,
    precision_bits: u32,
) -> Vec<CNum> {
    let mut pref_q = Rational::from(-ell) * beta.clone();
    pref_q /= Rational::from(m);
    let prefactor = CNum::unit_phase(&pref_q, precision_bits);
    c.iter()
        .enumerate()
        .map(|(n, cn)| {
            let sign = if n % 2 == 0 { 1 } else { -1 };
            let scale = Rational::from(Integer::from(1) << (n as u32 + 1)) * Rational::from(sign);
            prefactor.mul(cn).mul_rational(&scale)
        })
        .collect()
}

/// C_{m,r}(β, n+1) for n = 0..count−1 by Taylor-expanding the closed-form
/// generating function: numerator and denominator are re-expanded about 1
/// from the recurrence-built Chebyshev polynomials, then divided as formal
/// power series.
pub fn coeffs_from_generating_function(
    m: u32,
    r: i64,
    beta: &Rational,
    count: usize,
    precision_bits: u32,
) -> Result<Vec<CNum>> {
    require_nonintegral(beta)?;
    let p = check_precision(precision_bits)?;
    if m < 2 {
        return Err(Error::Domain("all sums require m >= 2".into()));
    }
    let ell = r.rem_euclid(m as i64);
    let one = Rational::from(1);
    let u_pos = cheb_u(m as i64 - ell - 1).taylor_shift(&one);
    let u_ell = cheb_u(ell - 1).taylor_shift(&one);
    let t_m = cheb_t(m).taylor_shift(&one);

    let twist = CNum::unit_phase(beta, p);
    let cosb = CNum::from_real(cos_2pi(beta, p));
    let len = count.max(t_m.coeffs().len());
    let mut num: Vec<CNum> = Vec::with_capacity(len);
    let mut den: Vec<CNum> = Vec::with_capacity(len);
    for k in 0..len {
        let n_k = CNum::from_rational(&u_pos.coeff(k), p)
            .add(&twist.mul_rational(&u_ell.coeff(k)));
        num.push(n_k);
        let mut d_k = CNum::from_rational(&t_m.coeff(k), p);
        if k == 0 {
            d_k = d_k.sub(&cosb);
        }
        den.push(d_k);
    }
    let c = series::divide_cnum(&num, &den, count, p)?;
    Ok(unmap_shifted(&c, m, ell, beta, p))
}

/// C_{m,r}(β, n+1) for n = 0..count−1 by the triangular linear recurrence
/// with closed-form coefficients a_m(k), b_ν(k):
///
/// Σ_{j=0}^{n} ã_m(n−j)·c_j = b_{m−ℓ−1}(n) + e^{2πiβ}·b_{ℓ−1}(n),
/// ã_m(0) = 1 − cos 2πβ.
pub fn recurrence_shifted(
    m: u32,
    r: i64,
    beta: &Rational,
    count: usize,
    precision_bits: u32,
) -> Result<Vec<CNum>> {
    require_nonintegral(beta)?;
    let p = check_precision(precision_bits)?;
    if m < 2 {
        return Err(Error::Domain("all sums require m >= 2".into()));
    }
    let ell = r.rem_euclid(m as i64);
    let twist = CNum::unit_phase(beta, p);
    let pivot = CNum::one(p).sub(&CNum::from_real(cos_2pi(beta, p)));

    let mut c: Vec<CNum> = Vec::with_capacity(count);
    for n in 0..count {
        let rhs_exact_pos = shifted_u_coeff(m as i64 - ell - 1, n as u32);
        let rhs_exact_ell = shifted_u_coeff(ell - 1, n as u32);
        let mut acc = CNum::from_rational(&rhs_exact_pos, p)
            .add(&twist.mul_rational(&rhs_exact_ell));
        for (j, cj) in c.iter().enumerate() {
            let a = shifted_t_coeff(m, (n - j) as u32);
            acc = acc.sub(&cj.mul_rational(&a));
        }
        c.push(acc.div(&pivot)?);
    }
    Ok(unmap_shifted(&c, m, ell, beta, p))
}

// ---------------------------------------------------------------------------
// Unshifted machinery (β ∈ ℤ): exact rational recurrence
// ---------------------------------------------------------------------------

/// Exact c_{m,r}(n) for n = 0..count−1 from the β = 0 recurrence
///
/// Σ_{j=0}^{n} a_m(j+1)·c_{n−j} = b_{m−ℓ−1}(n+1) + b_{ℓ−1}(n+1) − a_m(n+2)/m.
pub fn recurrence_unshifted(m: u32, r: i64, count: usize) -> Result<Vec<Rational>> {
    if m < 2 {
        return Err(Error::Domain("all sums require m >= 2".into()));
    }
    let ell = r.rem_euclid(m as i64);
    let pivot = shifted_t_coeff(m, 1); // a_m(1) = m²
    let mut c: Vec<Rational> = Vec::with_capacity(count);
    for n in 0..count {
        let mut rhs = shifted_u_coeff(m as i64 - ell - 1, n as u32 + 1)
            + shifted_u_coeff(ell - 1, n as u32 + 1);
        rhs -= shifted_t_coeff(m, n as u32 + 2) / Rational::from(m);
        for (j, cj) in c.iter().enumerate() {
            rhs -= shifted_t_coeff(m, (n - j) as u32 + 1) * cj;
        }
        c.push(rhs / &pivot);
    }
    Ok(c)
}

/// Exact sum values C_{m,r}(n+1) = (−1)^n·2^{n+1}·c_{m,r}(n), n = 0..count−1.
pub fn unshifted_sum_values(m: u32, r: i64, count: usize) -> Result<Vec<Rational>> {
    let c = recurrence_unshifted(m, r, count)?;
    Ok(c
        .iter()
        .enumerate()
        .map(|(n, cn)| {
            let sign = if n % 2 == 0 { 1 } else { -1 };
            (cn * Rational::from(Integer::from(1) << (n as u32 + 1))) * Rational::from(sign)
        })
        .collect())
}

// ---------------------------------------------------------------------------
// Secant sums via the shift β = α − m/2
// ---------------------------------------------------------------------------

/// S_{m,r}(α, n+1) for n = 0..count−1.
///
/// csc((j+α−m/2)π/m) = −sec((j+α)π/m), so even powers delegate exactly to
/// the cosecant machinery at β = α − m/2.
pub fn secant_coeffs(
    m: u32,
    r: i64,
    alpha: &Rational,
    count: usize,
    precision_bits: u32,
) -> Result<Vec<CNum>> {
    let beta = alpha - Rational::from((m, 2));
    if is_integer(&beta) {
        return Err(Error::Domain(
            "shifted secant sums require α − m/2 ∉ ℤ".into(),
        ));
    }
    recurrence_shifted(m, r, &beta, count, precision_bits)
}

/// The no-shift secant sums S_{m,r}(n+1), n = 0..count−1.
///
/// For even m the index shift j ↦ j + m/2 turns secants into cosecants and
/// gives S_{m,r}(n) = (−1)^r·C_{m,r}(n) exactly; for odd m the shifted
/// machinery at α = 0 applies.
pub fn secant_unshifted(
    m: u32,
    r: i64,
    count: usize,
    precision_bits: u32,
) -> Result<(Vec<CNum>, Option<Vec<Rational>>)> {
    let p = check_precision(precision_bits)?;
    if m.is_multiple_of(2) {
        let c_values = unshifted_sum_values(m, r, count)?;
        let sign = if r.rem_euclid(2) == 0 { 1 } else { -1 };
        let exact: Vec<Rational> = c_values
            .iter()
            .map(|v| v * Rational::from(sign))
            .collect();
        let values = exact.iter().map(|v| CNum::from_rational(v, p)).collect();
        Ok((values, Some(exact)))
    } else {
        let values = secant_coeffs(m, r, &Rational::from(0), count, p)?;
        Ok((values, None))
    }
}

// ---------------------------------------------------------------------------
// Double-argument machinery (§ around s = −1): monomial-coefficient recurrence
// ---------------------------------------------------------------------------

/// S̃_{m,r}(α, n+1) for n = 0..count−1 by the triangular recurrence on the
/// monomial coefficients t_m(k), u_ν(k):
///
/// Σ_{j<n} t_m(n−j)·c̃_j + (t_m(0) − cos 2πα)·c̃_n = u_{m−ℓ−1}(n) + e^{2πiα}·u_{ℓ−1}(n),
/// then S̃(α,n+1) = −e^{−2πiαℓ/m}·c̃_n.
pub fn secant_double_coeffs(
    m: u32,
    r: i64,
    alpha: &Rational,
    count: usize,
    precision_bits: u32,
) -> Result<Vec<CNum>> {
    let p = check_precision(precision_bits)?;
    SumSpec::new(SumKind::SecantDouble, m, r, alpha.clone(), 1)?;
    let ell = r.rem_euclid(m as i64);
    let twist = CNum::unit_phase(alpha, p);
    let t0 = monomial_t_coeff(m, 0).expect("t_m(0)");
    let pivot = CNum::from_rational(&t0, p).sub(&CNum::from_real(cos_2pi(alpha, p)));
    if pivot.abs() <= Tolerance::default_for(p).abs_eps {
        return Err(Error::Domain(
            "t_m(0) − cos 2πα vanishes: the double-argument recurrence degenerates".into(),
        ));
    }

    let u_at = |idx: i64, k: usize| -> Rational {
        if idx < 0 || (k as u32) > idx as u32 {
            Rational::from(0)
        } else {
            monomial_u_coeff(idx as u32, k as u32).expect("u coefficient")
        }
    };
    let t_at = |k: usize| -> Rational {
        if (k as u32) > m {
            Rational::from(0)
        } else {
            monomial_t_coeff(m, k as u32).expect("t coefficient")
        }
    };

    let mut c: Vec<CNum> = Vec::with_capacity(count);
    for n in 0..count {
        let mut acc = CNum::from_rational(&u_at(m as i64 - ell - 1, n), p)
            .add(&twist.mul_rational(&u_at(ell - 1, n)));
        for (j, cj) in c.iter().enumerate() {
            acc = acc.sub(&cj.mul_rational(&t_at(n - j)));
        }
        c.push(acc.div(&pivot)?);
    }

    let mut pref_q = Rational::from(-ell) * alpha.clone();
    pref_q /= Rational::from(m);
    let prefactor = CNum::unit_phase(&pref_q, p);
    Ok(c
        .iter()
        .map(|cn| prefactor.mul(cn).neg())
        .collect())
}

/// C̃_{m,r}(β, n+1) for n = 0..count−1: delegates with α = β − m/4 since
/// sec(2(j+β−m/4)π/m) = csc(2(j+β)π/m).
pub fn cosecant_double_coeffs(
    m: u32,
    r: i64,
    beta: &Rational,
    count: usize,
    precision_bits: u32,
) -> Result<Vec<CNum>> {
    SumSpec::new(SumKind::CosecantDouble, m, r, beta.clone(), 1)?;
    let alpha = beta - Rational::from((m, 4));
    secant_double_coeffs(m, r, &alpha, count, precision_bits)
}

/// Exact Gaussian-rational coefficients (re, im) of C̃_{m,r}(n+1) for the
/// no-shift double-argument cosecant sums,
/// via the generating function
///
/// h̃(z) = e^{−iπℓ/2}·(U_{m−ℓ−1}(z) + e^{iπm/2}·U_{ℓ−1}(z))/(T_m(z) − cos(mπ/2)) − κ/(mz),
///
/// where κ counts the excluded singular spectral terms with their twist
/// weights: κ = 1 for odd m (only j = 0 is excluded) and κ = 1 + (−1)^r for
/// even m (j = 0 and j = m/2, the latter weighted by e^{2πir(m/2)/m} = (−1)^r,
/// so the two residues cancel for odd r); C̃(n+1) = (−1)^n·[z^n] h̃.
/// All constants here are fourth roots of unity, so the whole computation
/// stays in exact rational pairs and the pole cancellation at z = 0 is
/// verified exactly.
pub fn cosecant_double_noshift_exact(
    m: u32,
    r: i64,
    count: usize,
) -> Result<Vec<(Rational, Rational)>> {
    if m < 2 {
        return Err(Error::Domain("all sums require m >= 2".into()));
    }
    let ell = r.rem_euclid(m as i64);

    // fourth roots of unity as exact (re, im) pairs
    let quarter_unit = |q: i64| -> (Rational, Rational) {
        match q.rem_euclid(4) {
            0 => (Rational::from(1), Rational::from(0)),
            1 => (Rational::from(0), Rational::from(1)),
            2 => (Rational::from(-1), Rational::from(0)),
            _ => (Rational::from(0), Rational::from(-1)),
        }
    };
    let (pref_re, pref_im) = quarter_unit(-ell); // e^{−iπℓ/2}
    let (w_re, w_im) = quarter_unit(m as i64); // e^{iπm/2}
    let cos_half_pi_m = match m % 4 {
        0 => Rational::from(1),
        2 => Rational::from(-1),
        _ => Rational::from(0),
    };
    let kappa = if m % 2 == 1 {
        Rational::from(1)
    } else if ell % 2 == 0 {
        Rational::from(2)
    } else {
        Rational::from(0)
    };

    let u_pos = cheb_u(m as i64 - ell - 1);
    let u_ell = cheb_u(ell - 1);
    let den_poly = cheb_t(m).sub(&Poly::constant(cos_half_pi_m));

    // P = U_{m−ℓ−1} + w·U_{ℓ−1} split into exact real/imaginary parts
    let p_re = u_pos.add(&u_ell.scale(&w_re));
    let p_im = u_ell.scale(&w_im);
    // pref·P
    let num_re = p_re.scale(&pref_re).sub(&p_im.scale(&pref_im));
    let num_im = p_re.scale(&pref_im).add(&p_im.scale(&pref_re));

    // factor z^v out of the denominator (v = 1 odd m, 2 even m)
    let mut v = 0usize;
    let mut reduced_den = den_poly.clone();
    while !reduced_den.is_zero() && reduced_den.coeff(0) == 0 {
        reduced_den = reduced_den.div_x()?;
        v += 1;
    }
    if v == 0 || reduced_den.is_zero() {
        return Err(Error::Domain(
            "unexpected denominator shape in the no-shift double-argument series".into(),
        ));
    }

    // h̃ = (pref·P − (κ/m)·z^{v−1}·D_v) / (z^v·D_v); the numerator must be
    // divisible by z^v exactly, which certifies the pole cancellation.
    let subtract = reduced_den
        .scale(&(Rational::from(&kappa) / Rational::from(m)))
        .shift_up(v - 1);
    let mut final_re = num_re.sub(&subtract);
    let mut final_im = num_im;
    for _ in 0..v {
        final_re = final_re.div_x().map_err(|_| {
            Error::Domain("pole at z = 0 failed to cancel in the no-shift double series".into())
        })?;
        final_im = final_im.div_x().map_err(|_| {
            Error::Domain("pole at z = 0 failed to cancel in the no-shift double series".into())
        })?;
    }

    let series_re = series::divide_exact(final_re.coeffs(), reduced_den.coeffs(), count)?;
    let series_im = series::divide_exact(final_im.coeffs(), reduced_den.coeffs(), count)?;
    Ok(series_re
        .into_iter()
        .zip(series_im)
        .enumerate()
        .map(|(n, (re, im))| {
            let sign = Rational::from(if n % 2 == 0 { 1 } else { -1 });
            (Rational::from(&re * &sign), Rational::from(&im * &sign))
        })
        .collect())
}

/// Dispatcher for the double-argument kinds; returns S̃ or C̃ values for
/// n+1 = 1..count.
pub fn double_arg_coeffs(spec: &SumSpec, count: usize, precision_bits: u32) -> Result<Vec<CNum>> {
    spec.validate()?;
    let p = check_precision(precision_bits)?;
    match spec.kind {
        SumKind::SecantDouble => secant_double_coeffs(spec.m, spec.r, &spec.shift, count, p),
        SumKind::CosecantDouble => cosecant_double_coeffs(spec.m, spec.r, &spec.shift, count, p),
        SumKind::CosecantDoubleNoShift => {
            let exact = cosecant_double_noshift_exact(spec.m, spec.r, count)?;
            Ok(exact
                .iter()
                .map(|(re, im)| {
                    CNum::new(Float::with_val(p, re), Float::with_val(p, im))
                })
                .collect())
        }
        _ => Err(Error::InvalidParameter(
            "double_arg_coeffs expects a double-argument kind".into(),
        )),
    }
}

// ---------------------------------------------------------------------------
// Cotangent/tangent reduction and alternating sums
// ---------------------------------------------------------------------------

/// Even cotangent/tangent power sums by binomial reduction:
///
/// (1/m)·Σ_j cot^{2n}((j+β)π/m)·e^{2πirj/m} = Σ_k binom(n,k)·(−1)^{n−k}·C_{m,r}(β,k),
///
/// where the k = 0 term contributes the character average
/// (1/m)·Σ_j e^{2πirj/m} = [m | r] (1 exactly when m divides r, else 0).
/// The tangent case runs over secant sums.
pub fn cot_tan_sum(spec: &SumSpec, precision_bits: u32) -> Result<SumResult> {
    spec.validate()?;
    let p = check_precision(precision_bits)?;
    let n = spec.power as usize;
    let values = match spec.kind {
        SumKind::Cotangent => recurrence_shifted(spec.m, spec.r, &spec.shift, n, p)?,
        SumKind::Tangent => secant_coeffs(spec.m, spec.r, &spec.shift, n, p)?,
        _ => {
            return Err(Error::InvalidParameter(
                "cot_tan_sum expects the cotangent or tangent kind".into(),
            ))
        }
    };
    let zero_term = if spec.r.rem_euclid(spec.m as i64) == 0 {
        CNum::one(p)
    } else {
        CNum::zero(p)
    };
    let mut acc = CNum::zero(p);
    for k in 0..=n {
        let binom = Integer::binomial(Integer::from(n as u32), k as u32);
        let sign = if (n - k).is_multiple_of(2) { 1 } else { -1 };
        let coeff = Rational::from(binom) * Rational::from(sign);
        let base = if k == 0 { &zero_term } else { &values[k - 1] };
        acc = acc.add(&base.mul_rational(&coeff));
    }
    Ok(SumResult {
        spec: spec.clone(),
        value: acc,
        exact: None,
        method: SumMethod::Recurrence,
    })
}

/// The standalone alternating sum C_m^alt(β, 2n) = m·C_{m,m/2}(β,n),
/// using that (−1)^j = e^{2πi(m/2)j/m} for even m.
pub fn alternating_sum(m: u32, beta: &Rational, n: u32, precision_bits: u32) -> Result<CNum> {
    let p = check_precision(precision_bits)?;
    if !m.is_multiple_of(2) {
        return Err(Error::Domain(
            "the alternating-sum reduction r = m/2 requires even m".into(),
        ));
    }
    if n == 0 {
        return Err(Error::Domain("the power index n must be positive".into()));
    }
    let r = m as i64 / 2;
    if is_integer(beta) {
        let values = unshifted_sum_values(m, r, n as usize)?;
        Ok(CNum::from_rational(&values[n as usize - 1], p).mul_rational(&Rational::from(m)))
    } else {
        let values = recurrence_shifted(m, r, beta, n as usize, p)?;
        Ok(values[n as usize - 1].mul_rational(&Rational::from(m)))
    }
}

// ---------------------------------------------------------------------------
// Closed-path dispatcher
// ---------------------------------------------------------------------------

/// Evaluate a sum by its closed-form/recurrence path (the non-oracle side).
pub fn closed_sum(spec: &SumSpec, precision_bits: u32) -> Result<SumResult> {
    spec.validate()?;
    let p = check_precision(precision_bits)?;
    let n = spec.power as usize;
    let (value, exact, method) = match spec.kind {
        SumKind::Cosecant => {
            let v = recurrence_shifted(spec.m, spec.r, &spec.shift, n, p)?;
            (v[n - 1].clone(), None, SumMethod::Recurrence)
        }
        SumKind::Secant => {
            let v = secant_coeffs(spec.m, spec.r, &spec.shift, n, p)?;
            (v[n - 1].clone(), None, SumMethod::Recurrence)
        }
        SumKind::CosecantNoShift => {
            let v = unshifted_sum_values(spec.m, spec.r, n)?;
            let exact = v[n - 1].clone();
            (CNum::from_rational(&exact, p), Some(exact), SumMethod::Recurrence)
        }
        SumKind::SecantNoShift => {
            let (vals, exact) = secant_unshifted(spec.m, spec.r, n, p)?;
            (
                vals[n - 1].clone(),
                exact.map(|e| e[n - 1].clone()),
                SumMethod::Recurrence,
            )
        }
        SumKind::SecantDouble | SumKind::CosecantDouble => {
            let v = double_arg_coeffs(spec, n, p)?;
            (v[n - 1].clone(), None, SumMethod::Recurrence)
        }
        SumKind::CosecantDoubleNoShift => {
            let exact = cosecant_double_noshift_exact(spec.m, spec.r, n)?;
            let (re, im) = exact[n - 1].clone();
            let value = CNum::new(Float::with_val(p, &re), Float::with_val(p, &im));
            let exact_field = if im == 0 { Some(re) } else { None };
            (value, exact_field, SumMethod::GeneratingFunction)
        }
        SumKind::Cotangent | SumKind::Tangent => {
            let res = cot_tan_sum(spec, p)?;
            (res.value, None, SumMethod::Recurrence)
        }
        SumKind::AlternatingCosecant => {
            let v = alternating_sum(spec.m, &spec.shift, spec.power, p)?;
            let exact = if is_integer(&spec.shift) {
                let vals = unshifted_sum_values(spec.m, spec.m as i64 / 2, n)?;
                Some(&vals[n - 1] * Rational::from(spec.m))
            } else {
                None
            };
            (v, exact, SumMethod::Recurrence)
        }
    };
    Ok(SumResult {
        spec: spec.clone(),
        value,
        exact,
        method,
    })
}

// ---------------------------------------------------------------------------
// Chu–Marini generating-function checks
// ---------------------------------------------------------------------------

/// Which classical generating function to check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChuMariniVariant {
    /// Σ C_m(0,2n)·y^{2n} = 1 − (my/√(1−y²))·cot(m·arcsin y)
    Csc,
    /// Σ C_m^alt(0,2n)·y^{2n} = 1 − (my/√(1−y²))·csc(m·arcsin y), m even
    CscAlt,
    /// Σ C_m(β,2n)·y^{2n} = (my/√(1−y²))·sin(2m·arcsin y)/(cos(2m·arcsin y) − cos 2πβ)
    Shifted,
}

/// One coefficient comparison row.
#[derive(Clone, Debug)]
pub struct ChuMariniRow {
    pub n: usize,
    pub series_coeff: CNum,
    pub sum_value: CNum,
    pub delta: Float,
}

#[derive(Clone, Debug)]
pub struct ChuMariniReport {
    pub variant: ChuMariniVariant,
    pub m: u32,
    pub rows: Vec<ChuMariniRow>,
    pub max_delta: Float,
    /// Set on the β = 0 variants, where both sides are exact rationals.
    pub exact_match: Option<bool>,
}

/// Split p(z) = E(z²) + z·O(z²) into the exact even/odd parts E, O.
fn even_odd_split(p: &Poly) -> (Poly, Poly) {
    let mut even = Vec::new();
    let mut odd = Vec::new();
    for (i, c) in p.coeffs().iter().enumerate() {
        if i % 2 == 0 {
            even.push(c.clone());
        } else {
            odd.push(c.clone());
        }
    }
    (Poly::from_coeffs(even), Poly::from_coeffs(odd))
}

/// Substitute x ↦ 1 − w.
fn in_one_minus_w(p: &Poly) -> Poly {
    p.compose_affine(&Rational::from(1), &Rational::from(-1))
}

/// Expand the named classical generating function in w = y² by exact (or
/// hybrid) series composition and compare coefficients against this
/// module's sum values for n = 1..count.
///
/// With c = √(1−y²) and θ = arcsin y one has cos(kθ) = T_k(c) and
/// sin(kθ) = y·U_{k−1}(c); the parity of the Chebyshev polynomials then
/// turns every right-hand side into a rational function of w, with
/// cos 2πβ the only transcendental constant (shifted variant).
pub fn chu_marini_check(
    m: u32,
    count: usize,
    variant: ChuMariniVariant,
    beta: Option<&Rational>,
    precision_bits: u32,
) -> Result<ChuMariniReport> {
    let p = check_precision(precision_bits)?;
    if m < 2 {
        return Err(Error::Domain("all sums require m >= 2".into()));
    }
    let tol = Tolerance::default_for(p);

    let mut rows = Vec::with_capacity(count);
    let mut max_delta = Float::with_val(p, 0);
    let mut exact_match = None;

    match variant {
        ChuMariniVariant::Csc | ChuMariniVariant::CscAlt => {
            if variant == ChuMariniVariant::CscAlt && !m.is_multiple_of(2) {
                return Err(Error::Domain(
                    "the alternating generating function requires even m".into(),
                ));
            }
            let (t_even, t_odd) = even_odd_split(&cheb_t(m));
            let (u_even, u_odd) = even_odd_split(&cheb_u(m as i64 - 1));
            // 1 − m·N(w)/D(w) per the parity discussion in the docs
            let (num, den) = match (variant, m % 2) {
                (ChuMariniVariant::Csc, 0) => (
                    in_one_minus_w(&t_even),
                    in_one_minus_w(&u_odd).mul(&Poly::from_i64(&[1, -1])),
                ),
                (ChuMariniVariant::Csc, _) => (in_one_minus_w(&t_odd), in_one_minus_w(&u_even)),
                (ChuMariniVariant::CscAlt, _) => (
                    Poly::one(),
                    in_one_minus_w(&u_odd).mul(&Poly::from_i64(&[1, -1])),
                ),
                (ChuMariniVariant::Shifted, _) => unreachable!(),
            };
            let series = series::divide_exact(num.coeffs(), den.coeffs(), count + 1)?;
            let sums: Vec<Rational> = match variant {
                ChuMariniVariant::Csc => unshifted_sum_values(m, 0, count)?,
                ChuMariniVariant::CscAlt => unshifted_sum_values(m, m as i64 / 2, count)?,
                ChuMariniVariant::Shifted => unreachable!(),
            };
            let mut all_exact = true;
            for n in 1..=count {
                // RHS coefficient of w^n: −m·series[n]
                let coeff = &series[n] * Rational::from(-(m as i64));
                let expected = &sums[n - 1] * Rational::from(m);
                if coeff != expected {
                    all_exact = false;
                }
                let a = CNum::from_rational(&coeff, p);
                let b = CNum::from_rational(&expected, p);
                let delta = a.sub(&b).abs();
                if delta > max_delta {
                    max_delta = delta.clone();
                }
                rows.push(ChuMariniRow {
                    n,
                    series_coeff: a,
                    sum_value: b,
                    delta,
                });
            }
            // constant term of the RHS must be exactly 1 (empty sum)
            let const_ok = (&series[0] * Rational::from(m)) == 1;
            exact_match = Some(all_exact && const_ok);
        }
        ChuMariniVariant::Shifted => {
            let beta = beta.ok_or_else(|| {
                Error::InvalidParameter("the shifted variant needs a shift β".into())
            })?;
            require_nonintegral(beta)?;
            // m·w·O_U(1−w) / (E_T(1−w) − cos 2πβ) with U_{2m−1}, T_{2m}
            let (_, u_odd) = even_odd_split(&cheb_u(2 * m as i64 - 1));
            let (t_even, _) = even_odd_split(&cheb_t(2 * m));
            let num_poly = in_one_minus_w(&u_odd)
                .scale(&Rational::from(m))
                .shift_up(1);
            let den_poly = in_one_minus_w(&t_even);
            let cosb = CNum::from_real(cos_2pi(beta, p));
            let mut num: Vec<CNum> = series::to_cnum_series(num_poly.coeffs(), p);
            num.resize(count + 1, CNum::zero(p));
            let mut den: Vec<CNum> = series::to_cnum_series(den_poly.coeffs(), p);
            den[0] = den[0].sub(&cosb);
            let series_coeffs = series::divide_cnum(&num, &den, count + 1, p)?;
            let sums = recurrence_shifted(m, 0, beta, count, p)?;
            for n in 1..=count {
                let coeff = series_coeffs[n].clone();
                let expected = sums[n - 1].mul_rational(&Rational::from(m));
                let delta = coeff.sub(&expected).abs();
                if delta > max_delta {
                    max_delta = delta.clone();
                }
                rows.push(ChuMariniRow {
                    n,
                    series_coeff: coeff,
                    sum_value: expected,
                    delta,
                });
            }
        }
    }

    let _ = tol;
    Ok(ChuMariniReport {
        variant,
        m,
        rows,
        max_delta,
        exact_match,
    })
}
