//! Truncated Euler products at `s = 1` and the generalized Mertens prediction
//! `F_x(1) ~ c_{-m} e^{m gamma} (ln x)^m`.

use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lfamily::LFunctionModel;
use crate::primes::sieve_primes;
use crate::real::{ordered_block_sum, Real, DEGENERACY_FLOOR};

/// Largest cutoff accepted for products over primes.
pub const MAX_PRODUCT_CUTOFF: u64 = 100_000_000;

/// `Lambda_F(p^r) = (1/r) sum_j alpha_j(p)^r`.
pub fn lambda_coeff<T: Real>(model: &LFunctionModel<T>, p: u64, r: u32) -> Result<Complex<T>> {
    if r == 0 {
        return Err(Error::domain("lambda coefficient needs r >= 1"));
    }
    let roots = model.local_roots(p)?;
    let sum: Complex<T> = roots
        .as_slice()
        .iter()
        .fold(Complex::new(T::zero(), T::zero()), |acc, a| acc + a.powu(r));
    Ok(sum / T::from_u32(r).unwrap())
}

/// `-ln |1 - alpha/p|` with the degeneracy guard.
#[inline]
pub(crate) fn neg_log_local_at_one<T: Real>(alpha: Complex<T>, p: u64) -> Result<T> {
    let u = alpha / T::from_u64_lossy(p);
    // |1-u|^2 - 1 = |u|^2 - 2 Re u
    let delta = u.norm_sqr() - T::lit(2.0) * u.re;
    let modsq = T::one() + delta;
    if !(modsq.sqrt() >= T::lit(DEGENERACY_FLOOR)) {
        return Err(Error::Degenerate {
            p,
            modulus: modsq.sqrt().to_f64().unwrap_or(f64::NAN),
            at: None,
        });
    }
    Ok(-delta.ln_1p() / T::lit(2.0))
}

pub(crate) fn checked_cutoff(x: f64) -> Result<u64> {
    if !(x >= 2.0) || !x.is_finite() {
        return Err(Error::domain(format!("product cutoff x = {x} must be >= 2")));
    }
    if x > MAX_PRODUCT_CUTOFF as f64 {
        return Err(Error::resource("x", x, MAX_PRODUCT_CUTOFF));
    }
    Ok(x.floor() as u64)
}

/// `ln F_x(1)` over an explicit ascending prime list.
pub(crate) fn log_product_at_one<T: Real>(model: &LFunctionModel<T>, primes: &[u32]) -> Result<T> {
    let table = model.root_table(primes)?;
    ordered_block_sum(table.len(), |i| {
        let p = table.primes()[i] as u64;
        let mut acc = T::zero();
        for &a in table.roots(i) {
            acc = acc + neg_log_local_at_one(a, p)?;
        }
        Ok(acc)
    })
}

/// `F_x(1) = prod_{p<=x} prod_j (1 - alpha_j(p)/p)^{-1}`.
pub fn truncated_product_at_1<T: Real>(model: &LFunctionModel<T>, x: f64) -> Result<T> {
    let cutoff = checked_cutoff(x)?;
    model.check_cutoff(cutoff)?;
    let primes = sieve_primes(cutoff)?;
    Ok(log_product_at_one(model, primes.as_slice())?.exp())
}

/// `c_{-m} e^{m gamma} (ln x)^m`.
pub fn mertens_prediction<T: Real>(model: &LFunctionModel<T>, x: T) -> Result<T> {
    if !(x > T::one()) {
        return Err(Error::domain(format!("Mertens prediction needs x > 1, got {x}")));
    }
    let m = model.pole_order() as i32;
    Ok(model.residue() * (T::from_i32(m).unwrap() * T::euler_gamma()).exp() * x.ln().powi(m))
}

/// One row of a [`MertensReport`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MertensRow<T> {
    pub x: T,
    pub product: T,
    pub prediction: T,
    pub ratio: T,
}

/// Truncated products against the Mertens prediction on a grid of cutoffs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MertensReport<T> {
    pub model: String,
    pub rows: Vec<MertensRow<T>>,
}

/// Builds the report; no extrapolation or fitting is applied.
pub fn mertens_report<T: Real>(model: &LFunctionModel<T>, grid: &[f64]) -> Result<MertensReport<T>> {
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::domain("cutoff grid must be strictly increasing"));
    }
    let mut rows = Vec::with_capacity(grid.len());
    if let Some(&largest) = grid.last() {
        let top = checked_cutoff(largest)?;
        model.check_cutoff(top)?;
        let all = sieve_primes(top)?;
        for &x in grid {
            let cutoff = checked_cutoff(x)?;
            let product = log_product_at_one(model, all.up_to(cutoff))?.exp();
            let xt = T::lit(x);
            let prediction = mertens_prediction(model, xt)?;
            rows.push(MertensRow {
                x: xt,
                product,
                prediction,
                ratio: product / prediction,
            });
        }
    }
    Ok(MertensReport {
        model: model.label().to_string(),
        rows,
    })
}
