//! Twisted trigonometric sums, heat and resolvent kernels on the discrete
//! circle, and spectral L-function values — each quantity computed by at
//! least two independent routes (closed form / recurrence vs. direct
//! high-precision summation) and cross-verified.
//!
//! The discrete circle X_m is the Cayley graph of ℤ/mℤ with generators ±1
//! and uniform weights ½. Everything in this crate ultimately flows from
//! one identity: the resolvent kernel of the twisted Laplacian on X_m is
//! simultaneously
//!
//! * a spectral partial-fraction sum over the eigenvalues
//!   λ_j = 2 sin²(π(j+β)/m), and
//! * a rational function of Chebyshev polynomials, obtained by summing the
//!   heat kernel on ℤ over the covering group and Laplace-transforming.
//!
//! Equating the two evaluations produces generating functions and linear
//! recurrences for twisted cosecant/secant power sums and for the special
//! values of cycle-graph L-functions.
//!
//! ```
//! use cyclespec::numeric::{approx_eq, CNum, Rational, Tolerance};
//! use cyclespec::trigsums::{closed_sum, direct_sum, SumKind, SumSpec};
//!
//! // Σ_{j=0}^{4} csc²((2j+1)π/10) / 5: the averaged half-shift sum is
//! // exactly m = 5, and the recurrence and the literal summation agree.
//! let spec = SumSpec::new(SumKind::Cosecant, 5, 0, Rational::from((1, 2)), 1).unwrap();
//! let closed = closed_sum(&spec, 128).unwrap();
//! let direct = direct_sum(&spec, 128).unwrap();
//! let tol = Tolerance::default_for(128);
//! assert!(approx_eq(&closed.value, &direct.value, &tol));
//! assert!(approx_eq(&closed.value, &CNum::from_i64(5, 128), &tol));
//! ```

pub mod bessel;
pub mod characters;
pub mod chebyshev;
pub mod cli;
pub mod error;
pub mod heat;
pub mod lfn;
pub mod numeric;
pub mod resolvent;
pub(crate) mod series;
pub mod trigsums;
pub mod verify;

pub use error::{Error, Result};
pub use numeric::{CNum, Rational, Tolerance, DEFAULT_PRECISION_BITS};
