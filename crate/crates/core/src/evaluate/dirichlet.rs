//! Direct evaluation of `L(1+it, chi_d)`.

use num_complex::Complex;

use crate::error::Result;
use crate::lfamily::residue::character_period;
use crate::lfamily::validate_fundamental;
use crate::real::{ComplexSum, Real};
use crate::special::{hurwitz_tail_corrections, power_difference_over};

use super::MAX_ABS_T;
use crate::error::Error;

/// `L(1+it, chi_d)` for a fundamental discriminant `d`.
///
/// The character series is summed over `M` full periods, `M >= max(10, |t|)`.
/// The remainder `|d|^{-s} sum_a chi(a) zeta(s, M + a/|d|)` is evaluated by
/// Euler–Maclaurin; the pole parts cancel because `chi` sums to zero over a
/// period, which is what keeps the evaluation finite at `t = 0`.
pub fn dirichlet_direct<T: Real>(d: i64, t: T) -> Result<Complex<T>> {
    validate_fundamental(d)?;
    if !(t.abs() <= T::lit(MAX_ABS_T)) {
        return Err(Error::resource("t", t, MAX_ABS_T));
    }
    let chi = character_period(d);
    let q = d.unsigned_abs();
    let periods = t.abs().ceil().to_u64().unwrap().max(10);
    let s = Complex::new(T::one(), t);
    let power = |x: T| (-s * x.ln()).exp();
    let mut head = ComplexSum::new();
    for k in 0..periods {
        for (i, &c) in chi.iter().enumerate() {
            if c != 0 {
                let v = power(T::from_u64_lossy(k * q + i as u64 + 1));
                head.add(if c > 0 { v } else { -v });
            }
        }
    }
    let qf = T::from_u64_lossy(q);
    let mf = T::from_u64_lossy(periods);
    let one = Complex::new(T::one(), T::zero());
    let mut tail = ComplexSum::new();
    let m_pow = ((one - s) * mf.ln()).exp();
    for (i, &c) in chi.iter().enumerate() {
        if c != 0 {
            let a = T::from_u64_lossy(i as u64 + 1) / qf;
            let w = mf + a;
            let v = m_pow * power_difference_over(s, w / mf) + hurwitz_tail_corrections(s, w, 8);
            tail.add(if c > 0 { v } else { -v });
        }
    }
    Ok(head.value() + power(qf) * tail.value())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lfamily::dirichlet_l1;
    use crate::evaluate::zeta::borwein_alternating;
    use std::f64::consts::PI;

    #[test]
    fn real_point_values() {
        let v: Complex<f64> = dirichlet_direct(-4, 0.0).unwrap();
        assert!((v.re - PI / 4.0).abs() < 1e-9 && v.im.abs() < 1e-15);
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let v5: Complex<f64> = dirichlet_direct(5, 0.0).unwrap();
        assert!((v5.re - 2.0 / 5f64.sqrt() * phi.ln()).abs() < 1e-6);
        for d in [-3i64, 8, -8, 12, -104] {
            let a: Complex<f64> = dirichlet_direct(d, 0.0).unwrap();
            let b: f64 = dirichlet_l1(d).unwrap();
            assert!((a.re - b).abs() < 1e-11, "d={d}");
        }
    }

    #[test]
    fn conjugate_symmetry() {
        let a: Complex<f64> = dirichlet_direct(-4, 7.0).unwrap();
        let b: Complex<f64> = dirichlet_direct(-4, -7.0).unwrap();
        assert!((a - b.conj()).norm() < 1e-13);
    }

    #[test]
    fn matches_accelerated_beta_series() {
        // chi_{-4}(2k+1) = (-1)^k, so L(s, chi_{-4}) is an alternating series
        for t in [0.0, 2.0, 15.0, 60.0] {
            let s = Complex::new(1.0, t);
            let beta = borwein_alternating(t, |k| Complex::new(2.0 * k as f64 + 1.0, 0.0).powc(-s));
            let v: Complex<f64> = dirichlet_direct(-4, t).unwrap();
            assert!((v - beta).norm() < 1e-11, "t={t}: {v} {beta}");
        }
    }

    #[test]
    fn conjugate_symmetry_many_periods() {
        let a: Complex<f64> = dirichlet_direct(-3, 30.5).unwrap();
        let b: Complex<f64> = dirichlet_direct(-3, -30.5).unwrap();
        assert!((a - b.conj()).norm() < 1e-13);
    }

    #[test]
    fn rejects_bad_discriminant() {
        assert!(dirichlet_direct::<f64>(-12, 1.0).is_err());
    }
}
