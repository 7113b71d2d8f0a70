//! Scalar abstraction and compensated accumulation.
//!
//! Every numerical kernel in the crate is written against [`Real`], which is
//! implemented for `f32` and `f64`. The crate root re-exports `f64`
//! instantiations as the default aliases.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

/// Floating point scalar usable by all kernels: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Sum
    + Debug
    + Display
    + LowerExp
    + Default
    + Serialize
    + Send
    + Sync
    + 'static
{
    /// Euler–Mascheroni constant at this precision.
    fn euler_gamma() -> Self;

    /// Lossy conversion from `f64`; total for finite inputs.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    #[inline]
    fn from_u64_lossy(n: u64) -> Self {
        Self::from_u64(n).expect("u64 is representable")
    }
}

/// Stored value of γ; validated by [`validate_euler_gamma`].
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_86;

impl Real for f64 {
    #[inline]
    fn euler_gamma() -> Self {
        EULER_GAMMA
    }
}

impl Real for f32 {
    #[inline]
    fn euler_gamma() -> Self {
        EULER_GAMMA as f32
    }
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum<T> {
    sum: T,
    comp: T,
}

impl<T: Real> CompensatedSum<T> {
    pub fn new() -> Self {
        Self {
            sum: T::zero(),
            comp: T::zero(),
        }
    }

    #[inline]
    pub fn add(&mut self, value: T) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.comp = self.comp + ((self.sum - t) + value);
        } else {
            self.comp = self.comp + ((value - t) + self.sum);
        }
        self.sum = t;
    }

    /// Folds another partial sum in, keeping both compensation terms.
    #[inline]
    pub fn merge(&mut self, other: &Self) {
        self.add(other.sum);
        self.add(other.comp);
    }

    #[inline]
    pub fn value(&self) -> T {
        self.sum + self.comp
    }
}

impl<T: Real> FromIterator<T> for CompensatedSum<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        let mut acc = Self::new();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

/// Compensated sum over complex values (independent real and imaginary lanes).
#[derive(Debug, Clone, Copy, Default)]
pub struct ComplexSum<T> {
    re: CompensatedSum<T>,
    im: CompensatedSum<T>,
}

impl<T: Real> ComplexSum<T> {
    pub fn new() -> Self {
        Self {
            re: CompensatedSum::new(),
            im: CompensatedSum::new(),
        }
    }

    #[inline]
    pub fn add(&mut self, z: Complex<T>) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    #[inline]
    pub fn merge(&mut self, other: &Self) {
        self.re.merge(&other.re);
        self.im.merge(&other.im);
    }

    #[inline]
    pub fn value(&self) -> Complex<T> {
        Complex::new(self.re.value(), self.im.value())
    }
}

/// Number of primes per reduction block in log-space products.
pub const PRODUCT_BLOCK: usize = 1 << 16;

/// Compensated sum of `term(i)` for `i in 0..n`.
///
/// Indices are cut into fixed blocks of [`PRODUCT_BLOCK`]; blocks may run on
/// any worker but are merged in ascending order, so the result is
/// bit-identical for every thread count.
pub fn ordered_block_sum<T, F>(n: usize, term: F) -> crate::Result<T>
where
    T: Real,
    F: Fn(usize) -> crate::Result<T> + Sync,
{
    let blocks: Vec<CompensatedSum<T>> = (0..n.div_ceil(PRODUCT_BLOCK))
        .into_par_iter()
        .map(|b| {
            let mut acc = CompensatedSum::new();
            for i in b * PRODUCT_BLOCK..((b + 1) * PRODUCT_BLOCK).min(n) {
                acc.add(term(i)?);
            }
            Ok(acc)
        })
        .collect::<crate::Result<_>>()?;
    let mut total = CompensatedSum::new();
    for b in &blocks {
        total.merge(b);
    }
    Ok(total.value())
}

/// Complex counterpart of [`ordered_block_sum`].
pub fn ordered_block_sum_complex<T, F>(n: usize, term: F) -> crate::Result<Complex<T>>
where
    T: Real,
    F: Fn(usize) -> crate::Result<Complex<T>> + Sync,
{
    let blocks: Vec<ComplexSum<T>> = (0..n.div_ceil(PRODUCT_BLOCK))
        .into_par_iter()
        .map(|b| {
            let mut acc = ComplexSum::new();
            for i in b * PRODUCT_BLOCK..((b + 1) * PRODUCT_BLOCK).min(n) {
                acc.add(term(i)?);
            }
            Ok(acc)
        })
        .collect::<crate::Result<_>>()?;
    let mut total = ComplexSum::new();
    for b in &blocks {
        total.merge(b);
    }
    Ok(total.value())
}

/// Smallest admissible `|1 - alpha p^{-s}|` before a local factor is
/// treated as degenerate.
pub const DEGENERACY_FLOOR: f64 = 1e-15;

/// `ln(1 - u)` for complex `u` with `|u| < 1`, accurate when `|u|` is small.
#[inline]
pub fn ln_one_minus<T: Real>(u: Complex<T>) -> Complex<T> {
    // |1-u|^2 = 1 - 2 Re u + |u|^2
    let two = T::lit(2.0);
    let modsq_m1 = u.norm_sqr() - two * u.re;
    let re = modsq_m1.ln_1p() / two;
    let im = (-u.im).atan2(T::one() - u.re);
    Complex::new(re, im)
}

/// `(e^z - 1) / z`, continuous through `z = 0`.
pub fn expm1_over<T: Real>(z: Complex<T>) -> Complex<T> {
    if z.norm() < T::lit(1e-3) {
        // Taylor series: 1 + z/2 + z^2/6 + z^3/24 + z^4/120
        let mut term = Complex::new(T::one(), T::zero());
        let mut acc = term;
        for k in 2..=7u32 {
            term = term * z / T::from_u32(k).unwrap();
            acc = acc + term;
        }
        acc
    } else {
        // e^z - 1 = expm1(x) cos y - 2 sin^2(y/2) + i e^x sin y
        let half = (z.im / T::lit(2.0)).sin();
        let re = z.re.exp_m1() * z.im.cos() - T::lit(2.0) * half * half;
        Complex::new(re, z.re.exp() * z.im.sin()) / z
    }
}

/// Checks the stored γ against `H_n - ln n - 1/(2n)` at `n = 10^6`.
///
/// The remaining asymptotic term is `-1/(12 n^2)`, which is included so the
/// comparison is limited only by the compensated harmonic sum.
pub fn validate_euler_gamma() -> Result<f64, crate::Error> {
    let n: u64 = 1_000_000;
    let harmonic: CompensatedSum<f64> = (1..=n).rev().map(|k| 1.0 / k as f64).collect();
    let nf = n as f64;
    let estimate = harmonic.value() - nf.ln() - 1.0 / (2.0 * nf) + 1.0 / (12.0 * nf * nf);
    let deviation = (estimate - EULER_GAMMA).abs();
    if deviation > 1e-10 {
        return Err(crate::Error::NumericFailure(format!(
            "stored Euler-Mascheroni constant disagrees with harmonic oracle by {deviation:e}"
        )));
    }
    Ok(deviation)
}
