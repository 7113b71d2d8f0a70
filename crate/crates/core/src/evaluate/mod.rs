//! Values on the line `Re(s) = 1`: the truncated Euler product `F(1+it; Y)`
//! and independent direct evaluations used to calibrate it.

pub mod calibrate;
pub mod dirichlet;
pub mod zeta;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::lfamily::{LFunctionModel, RootTable};
use crate::mertens::checked_cutoff;
use crate::primes::sieve_primes;
use crate::real::{ln_one_minus, ordered_block_sum_complex, Real, DEGENERACY_FLOOR};

pub use calibrate::{calibrate_truncation, sample_points, CalibrationStats};
pub use dirichlet::dirichlet_direct;
pub use zeta::{zeta_em, zeta_eta};

/// Largest `|t|` accepted on the line.
pub const MAX_ABS_T: f64 = 1e8;

/// `F(1+it; Y)` with the prime table built once.
#[derive(Debug, Clone)]
pub struct LineProduct<T: Real> {
    y: f64,
    table: RootTable<T>,
    ln_p: Vec<T>,
}

impl<T: Real> LineProduct<T> {
    pub fn new(model: &LFunctionModel<T>, y: f64) -> Result<Self> {
        let cutoff = checked_cutoff(y)?;
        model.check_cutoff(cutoff)?;
        let primes = sieve_primes(cutoff)?;
        let table = model.root_table(primes.as_slice())?;
        let ln_p = table.primes().iter().map(|&p| T::from_u64_lossy(p as u64).ln()).collect();
        Ok(Self { y, table, ln_p })
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn table(&self) -> &RootTable<T> {
        &self.table
    }

    /// `sum_{p<=Y} sum_j -ln(1 - alpha_j(p) p^{-1-it})`.
    pub fn log_value(&self, t: T) -> Result<Complex<T>> {
        if !(t.abs() <= T::lit(MAX_ABS_T)) {
            return Err(Error::resource("t", t, MAX_ABS_T));
        }
        let floor = T::lit(DEGENERACY_FLOOR);
        let one = Complex::new(T::one(), T::zero());
        ordered_block_sum_complex(self.table.len(), |i| {
            let p = self.table.primes()[i] as u64;
            let theta = t * self.ln_p[i];
            let z = Complex::new(theta.cos(), -theta.sin()) / T::from_u64_lossy(p);
            let mut acc = Complex::new(T::zero(), T::zero());
            for &a in self.table.roots(i) {
                let u = a * z;
                let modulus = (one - u).norm();
                if !(modulus >= floor) {
                    return Err(Error::Degenerate {
                        p,
                        modulus: modulus.to_f64().unwrap_or(f64::NAN),
                        at: t.to_f64(),
                    });
                }
                acc = acc - ln_one_minus(u);
            }
            Ok(acc)
        })
    }

    pub fn value(&self, t: T) -> Result<Complex<T>> {
        Ok(self.log_value(t)?.exp())
    }
}

/// `F(1+it; Y) = prod_{p<=Y} prod_j (1 - alpha_j(p) p^{-1-it})^{-1}`.
pub fn euler_product_on_line<T: Real>(model: &LFunctionModel<T>, t: T, y: f64) -> Result<Complex<T>> {
    LineProduct::new(model, y)?.value(t)
}
