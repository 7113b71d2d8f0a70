//! Euler-product models of L-functions with non-negative coefficients and a
//! pole at `s = 1`, together with the machinery around their large values on
//! the line `Re(s) = 1`:
//!
//! * [`primes`]: segmented sieve and the Kronecker symbol;
//! * [`lfamily`]: zeta powers, quadratic Dedekind zeta functions and the
//!   Rankin–Selberg square of `Delta`, with numerically computed residues;
//! * [`mertens`]: truncated products `F_x(1)` against `c_{-m} e^{m gamma} (ln x)^m`;
//! * [`resonator`]: the resonator `R(t)`, the resonance lower-bound product and
//!   the Gaussian-weighted moments `I_1`, `I_2` by two independent routes;
//! * [`evaluate`]: `F(1+it; Y)` and direct oracles for `zeta` and `L(s, chi_d)`;
//! * [`scan`]: grid search for large `|F(1+it; Y)|` with peak refinement.
//!
//! All kernels are generic over [`Real`] (`f32` or `f64`); the aliases below
//! fix the scalar to `f64`, which every tolerance in the test suite assumes.

pub mod error;
pub mod evaluate;
pub mod lfamily;
pub mod mertens;
pub mod primes;
pub mod real;
pub mod resonator;
pub mod scan;
mod special;

pub use error::{Error, Result};
pub use real::{validate_euler_gamma, CompensatedSum, ComplexSum, Real, EULER_GAMMA};

pub type Complex64 = num_complex::Complex<f64>;
pub type Model = lfamily::LFunctionModel<f64>;
pub type Roots = lfamily::LocalRoots<f64>;
pub type MertensReport = mertens::MertensReport<f64>;
pub type ResonanceReport = resonator::ResonanceReport<f64>;
pub type ResonatorConfig = resonator::ResonatorConfig<f64>;
pub type MomentSeries = resonator::moments::MomentSeries<f64>;
pub type MomentQuadrature = resonator::moments::MomentQuadrature<f64>;
pub type CalibrationStats = evaluate::calibrate::CalibrationStats<f64>;
pub type ScanRecord = scan::ScanRecord<f64>;
pub type BoundReport = scan::BoundReport<f64>;
