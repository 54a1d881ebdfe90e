//! Twisted heat kernel on the cycle graph X_m by two independent methods.
//!
//! The image method sums the line kernel e^{−t}I_{x−y+km}(t) over the deck
//! group with character weights e^{−2πiβk}, truncated at an index certified
//! by [`crate::bessel::bessel_tail_index`]. The spectral method is the exact
//! finite sum over eigenpairs λ_j = 2 sin²(π(j+β)/m),
//! ψ_j(x) = e^{2πi(j+β)x/m}/√m. The two evaluations agree by uniqueness of
//! the heat kernel, which is what the cross-checks exercise.

use crate::bessel::{bessel_i, bessel_tail_index};
use crate::error::{Error, Result};
use crate::numeric::{check_precision, reduce_mod, sin_pi, CNum, Rational};
use rug::ops::Pow;
use rug::Float;

/// Cycle size, additive shift and working precision for one kernel family.
#[derive(Clone, Debug)]
pub struct CycleParams {
    pub m: u32,
    pub beta: Rational,
    pub precision_bits: u32,
}

impl CycleParams {
    pub fn new(m: u32, beta: Rational, precision_bits: u32) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidParameter(format!(
                "cycle graph needs at least 2 vertices, got {m}"
            )));
        }
        check_precision(precision_bits)?;
        Ok(CycleParams {
            m,
            beta,
            precision_bits,
        })
    }

    /// Eigenvalue λ_j = 2 sin²(π(j+β)/m).
    pub fn eigenvalue(&self, j: u32) -> Float {
        let mut ratio = Rational::from(j) + self.beta.clone();
        ratio /= Rational::from(self.m);
        let s = sin_pi(&ratio, self.precision_bits);
        s.square() * 2u32
    }

    /// Normalized eigenfunction value ψ_j(x)·√m = e^{2πi(j+β)x/m}.
    pub fn eigenfunction_phase(&self, j: u32, x: i64) -> CNum {
        let mut phase = (Rational::from(j) + &self.beta) * Rational::from(x);
        phase /= Rational::from(self.m);
        CNum::unit_phase(&phase, self.precision_bits)
    }
}

/// Which evaluation route produced a kernel value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KernelMethod {
    Image,
    Spectral,
}

/// One kernel evaluation together with its certified truncation bound.
#[derive(Clone, Debug)]
pub struct HeatValue {
    pub params: CycleParams,
    pub x: i64,
    pub y: i64,
    pub t: Float,
    pub value: CNum,
    pub method: KernelMethod,
    /// Bound on |true value − value| from series truncation; the spectral
    /// sum is finite, so there it is zero.
    pub tail_bound: Float,
}

/// Heat kernel on the integer line: K_X(x,y;t) = e^{−t} I_{x−y}(t).
pub fn heat_kernel_line(x: i64, y: i64, t: &Float, precision_bits: u32) -> Result<CNum> {
    check_precision(precision_bits)?;
    if *t < 0 {
        return Err(Error::InvalidParameter("heat kernel requires t >= 0".into()));
    }
    let b = bessel_i(x - y, t, precision_bits)?;
    let decay = Float::with_val(precision_bits, -t).exp();
    Ok(CNum::from_real(Float::with_val(
        precision_bits,
        &decay * &b.value,
    )))
}

/// Twisted heat kernel on X_m by the requested method.
pub fn heat_kernel_cycle(
    params: &CycleParams,
    x: i64,
    y: i64,
    t: &Float,
    method: KernelMethod,
) -> Result<HeatValue> {
    if *t < 0 {
        return Err(Error::InvalidParameter("heat kernel requires t >= 0".into()));
    }
    let p = params.precision_bits;
    let (value, tail_bound) = match method {
        KernelMethod::Spectral => (spectral_value(params, x, y, t), Float::with_val(p, 0)),
        KernelMethod::Image => image_value(params, x, y, t)?,
    };
    Ok(HeatValue {
        params: params.clone(),
        x,
        y,
        t: Float::with_val(p, t),
        value,
        method,
        tail_bound,
    })
}

fn spectral_value(params: &CycleParams, x: i64, y: i64, t: &Float) -> CNum {
    let p = params.precision_bits;
    let mut acc = CNum::zero(p);
    for j in 0..params.m {
        let lambda = params.eigenvalue(j);
        let decay = Float::with_val(p, &lambda * t);
        let decay = Float::with_val(p, -decay).exp();
        let phase = params.eigenfunction_phase(j, x - y);
        acc = acc.add(&phase.mul_float(&decay));
    }
    acc.mul_rational(&Rational::from((1, params.m)))
}

fn image_value(params: &CycleParams, x: i64, y: i64, t: &Float) -> Result<(CNum, Float)> {
    let p = params.precision_bits;
    let m = params.m;
    let diff = x - y;
    let ell = diff.rem_euclid(m as i64);
    // Prefactor e^{−2πiβ(ℓ−(x−y))/m}; the exponent is −β·k₀ with the
    // integer k₀ = (ℓ−(x−y))/m, so the phase reduction stays exact.
    let k0 = (ell - diff) / m as i64;
    let prefactor = CNum::unit_phase(
        &(Rational::from(-k0) * &params.beta),
        p,
    );

    let eps: Float = Float::with_val(p, 2).pow(-(p as i32) - 16);
    let k_max = bessel_tail_index(m, ell as u32, t, &eps);
    let decay = Float::with_val(p, -t).exp();

    let mut acc = CNum::zero(p);
    let mut tails = Float::with_val(p, 0);
    for j in -(k_max as i64)..=(k_max as i64) {
        let order = ell + j * m as i64;
        let bessel = bessel_i(order, t, p)?;
        let weight = CNum::unit_phase(&(Rational::from(-j) * &params.beta), p);
        let term = weight.mul_float(&Float::with_val(p, &decay * &bessel.value));
        acc = acc.add(&term);
        tails += Float::with_val(p, &decay * &bessel.tail_bound);
    }
    let value = prefactor.mul(&acc);
    let tail_bound = Float::with_val(p, &eps + &tails);
    Ok((value, tail_bound))
}

/// Twisted combinatorial Laplacian applied to a vertex vector.
///
/// (Δf)(x) = f(x) − ½(f̃(x+1) + f̃(x−1)), where f̃ extends f to ℤ by the
/// deck transformation rule f̃(x + km) = e^{2πiβk} f(x).
pub fn twisted_laplacian_apply(params: &CycleParams, f: &[CNum]) -> Result<Vec<CNum>> {
    let m = params.m as usize;
    if f.len() != m {
        return Err(Error::LengthMismatch {
            got: f.len(),
            want: m,
        });
    }
    let p = params.precision_bits;
    let twist_up = CNum::unit_phase(&params.beta, p);
    let twist_down = twist_up.conj();
    let half = Rational::from((1, 2));
    let mut out = Vec::with_capacity(m);
    for x in 0..m {
        let right = if x + 1 == m {
            f[0].mul(&twist_up)
        } else {
            f[x + 1].clone()
        };
        let left = if x == 0 {
            f[m - 1].mul(&twist_down)
        } else {
            f[x - 1].clone()
        };
        let avg = right.add(&left).mul_rational(&half);
        out.push(f[x].sub(&avg));
    }
    Ok(out)
}

/// |∂_t K + Δ K| with the time derivative taken by central differences.
pub fn heat_residual(params: &CycleParams, x: i64, y: i64, t: &Float, h: &Float) -> Result<Float> {
    if !(*h > 0 && t > h) {
        return Err(Error::InvalidParameter("heat_residual requires t > h > 0".into()));
    }
    let p = params.precision_bits;
    let tp = Float::with_val(p, t + h);
    let tm = Float::with_val(p, t - h);
    let kp = heat_kernel_cycle(params, x, y, &tp, KernelMethod::Spectral)?.value;
    let km = heat_kernel_cycle(params, x, y, &tm, KernelMethod::Spectral)?.value;
    let dt = kp
        .sub(&km)
        .mul_float(&Float::with_val(p, h).recip())
        .mul_rational(&Rational::from((1, 2)));
    let spatial = laplacian_column(params, y, t)?;
    let x_idx = x.rem_euclid(params.m as i64) as usize;
    Ok(dt.add(&spatial[x_idx]).abs())
}

/// |∂_t K + Δ K| with the exact time derivative of the spectral sum
/// (each term picks up a factor −λ_j).
pub fn heat_residual_analytic(params: &CycleParams, x: i64, y: i64, t: &Float) -> Result<Float> {
    if *t < 0 {
        return Err(Error::InvalidParameter("heat kernel requires t >= 0".into()));
    }
    let p = params.precision_bits;
    let mut dt = CNum::zero(p);
    for j in 0..params.m {
        let lambda = params.eigenvalue(j);
        let decay = Float::with_val(p, -Float::with_val(p, &lambda * t)).exp();
        let phase = params.eigenfunction_phase(j, x - y);
        let coeff = Float::with_val(p, -Float::with_val(p, &lambda * &decay));
        dt = dt.add(&phase.mul_float(&coeff));
    }
    dt = dt.mul_rational(&Rational::from((1, params.m)));
    let spatial = laplacian_column(params, y, t)?;
    let x_idx = x.rem_euclid(params.m as i64) as usize;
    Ok(dt.add(&spatial[x_idx]).abs())
}

fn laplacian_column(params: &CycleParams, y: i64, t: &Float) -> Result<Vec<CNum>> {
    let m = params.m as i64;
    let column: Vec<CNum> = (0..m)
        .map(|xi| Ok(heat_kernel_cycle(params, xi, y, t, KernelMethod::Spectral)?.value))
        .collect::<Result<_>>()?;
    twisted_laplacian_apply(params, &column)
}

/// β reduced into [0, 1); all kernel formulas depend on β only through
/// e^{2πiβ·(integer)} and cos 2πβ, so the reduction is harmless.
pub fn reduced_shift(beta: &Rational) -> Rational {
    reduce_mod(beta, 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{approx_eq, Tolerance};

    fn params(m: u32, beta: (i64, i64)) -> CycleParams {
        CycleParams::new(m, Rational::from(beta), 128).unwrap()
    }

    #[test]
    fn line_kernel_initial_condition() {
        let p = 128;
        let zero = Float::with_val(p, 0);
        assert_eq!(
            heat_kernel_line(0, 0, &zero, p).unwrap().re().to_f64(),
            1.0
        );
        assert!(heat_kernel_line(3, 0, &zero, p).unwrap().re().is_zero());
    }

    #[test]
    fn line_kernel_reference_value() {
        // e^{−2}·I_1(2) ≈ 0.21526928924893765
        let p = 128;
        let t = Float::with_val(p, 2);
        let v = heat_kernel_line(1, 0, &t, p).unwrap();
        assert!((v.re().to_f64() - 0.21526928924893765).abs() < 1e-16);
    }

    #[test]
    fn initial_condition_on_cycle_both_methods() {
        let pr = params(4, (0, 1));
        let zero = Float::with_val(128, 0);
        for method in [KernelMethod::Image, KernelMethod::Spectral] {
            let v = heat_kernel_cycle(&pr, 2, 2, &zero, method).unwrap();
            let err = v.value.sub(&CNum::one(128)).abs();
            assert!(err < Float::with_val(128, 1e-30), "{method:?}");
            let off = heat_kernel_cycle(&pr, 3, 1, &zero, method).unwrap();
            assert!(off.value.abs() < Float::with_val(128, 1e-30), "{method:?}");
        }
    }

    #[test]
    fn untwisted_kernel_rows_sum_to_one() {
        let pr = params(4, (0, 1));
        let t = Float::with_val(128, 1.5);
        let mut total = CNum::zero(128);
        for y in 0..4 {
            total = total.add(
                &heat_kernel_cycle(&pr, 1, y, &t, KernelMethod::Spectral)
                    .unwrap()
                    .value,
            );
        }
        let err = total.sub(&CNum::one(128)).abs();
        assert!(err < Float::with_val(128, 1e-33), "err = {err}");
    }

    #[test]
    fn image_and_spectral_agree_on_twisted_example() {
        let pr = params(6, (1, 3));
        let t = Float::with_val(128, 2);
        let img = heat_kernel_cycle(&pr, 2, 0, &t, KernelMethod::Image).unwrap();
        let spec = heat_kernel_cycle(&pr, 2, 0, &t, KernelMethod::Spectral).unwrap();
        let delta = img.value.sub(&spec.value).abs();
        let budget = Float::with_val(128, &img.tail_bound + &Float::with_val(128, 1e-30));
        assert!(delta < budget, "delta = {delta}");
    }

    #[test]
    fn twist_equivariance_of_image_sum() {
        // K(x+m, y; t) = e^{2πiβ} K(x, y; t)
        let pr = params(5, (1, 4));
        let t = Float::with_val(128, 1.2);
        let base = heat_kernel_cycle(&pr, 2, 1, &t, KernelMethod::Image).unwrap();
        let shifted = heat_kernel_cycle(&pr, 2 + 5, 1, &t, KernelMethod::Image).unwrap();
        let expected = base.value.mul(&CNum::unit_phase(&pr.beta, 128));
        let tol = Tolerance::default_for(128);
        assert!(approx_eq(&shifted.value, &expected, &tol));
    }

    #[test]
    fn hermitian_symmetry_without_twist() {
        let pr = params(7, (0, 1));
        let t = Float::with_val(128, 0.8);
        for (x, y) in [(0i64, 3i64), (2, 6), (1, 4)] {
            let a = heat_kernel_cycle(&pr, x, y, &t, KernelMethod::Spectral).unwrap();
            let b = heat_kernel_cycle(&pr, y, x, &t, KernelMethod::Spectral).unwrap();
            let tol = Tolerance::default_for(128);
            assert!(approx_eq(&a.value, &b.value, &tol));
            assert!(a.value.im().clone().abs() < Float::with_val(128, 1e-36));
            assert!(a.value.re() > &0);
        }
    }

    #[test]
    fn spectral_completeness_at_time_zero() {
        let pr = params(6, (2, 7));
        let zero = Float::with_val(128, 0);
        for x in 0..6i64 {
            for y in 0..6i64 {
                let v = heat_kernel_cycle(&pr, x, y, &zero, KernelMethod::Spectral)
                    .unwrap()
                    .value;
                let expect = if x == y { CNum::one(128) } else { CNum::zero(128) };
                let err = v.sub(&expect).abs();
                assert!(err < Float::with_val(128, 1e-33), "({x},{y}): {err}");
            }
        }
    }

    #[test]
    fn laplacian_examples() {
        // constants are harmonic at β = 0
        let pr = params(5, (0, 1));
        let ones = vec![CNum::one(128); 5];
        let lap = twisted_laplacian_apply(&pr, &ones).unwrap();
        for v in &lap {
            assert!(v.abs() < Float::with_val(128, 1e-35));
        }

        // delta vector stencil on m = 3
        let pr3 = params(3, (0, 1));
        let mut delta = vec![CNum::zero(128); 3];
        delta[0] = CNum::one(128);
        let lap3 = twisted_laplacian_apply(&pr3, &delta).unwrap();
        assert_eq!(lap3[0].re().to_f64(), 1.0);
        assert_eq!(lap3[1].re().to_f64(), -0.5);
        assert_eq!(lap3[2].re().to_f64(), -0.5);

        let short = vec![CNum::one(128); 2];
        assert!(matches!(
            twisted_laplacian_apply(&pr3, &short),
            Err(Error::LengthMismatch { got: 2, want: 3 })
        ));
    }

    #[test]
    fn eigenfunction_equation() {
        // Δψ_j = λ_j ψ_j at m = 8, β = 1/4, j = 3
        let pr = params(8, (1, 4));
        let j = 3u32;
        let psi: Vec<CNum> = (0..8i64).map(|x| pr.eigenfunction_phase(j, x)).collect();
        let lap = twisted_laplacian_apply(&pr, &psi).unwrap();
        let lambda = pr.eigenvalue(j);
        let tol = Tolerance::default_for(128);
        for (x, l) in lap.iter().enumerate() {
            let expect = psi[x].mul_float(&lambda);
            assert!(approx_eq(l, &expect, &tol), "x = {x}");
        }
    }

    #[test]
    fn residual_central_difference() {
        let h: Float = Float::with_val(128, 2).pow(-20);
        let t = Float::with_val(128, 1);
        let r1 = heat_residual(&params(5, (0, 1)), 1, 0, &t, &h).unwrap();
        assert!(r1 < Float::with_val(128, 1e-10), "r1 = {r1}");

        let t2 = Float::with_val(128, 2);
        let r2 = heat_residual(&params(6, (1, 3)), 0, 0, &t2, &h).unwrap();
        assert!(r2 < Float::with_val(128, 1e-10), "r2 = {r2}");
    }

    #[test]
    fn residual_analytic_derivative() {
        let t = Float::with_val(128, 1.5);
        let r = heat_residual_analytic(&params(6, (1, 3)), 2, 1, &t).unwrap();
        assert!(r < Float::with_val(128, 1e-30), "r = {r}");
    }

    #[test]
    fn shift_reduction_mod_one() {
        assert_eq!(reduced_shift(&Rational::from((7, 2))), Rational::from((1, 2)));
        assert_eq!(reduced_shift(&Rational::from((-1, 4))), Rational::from((3, 4)));
    }
}
