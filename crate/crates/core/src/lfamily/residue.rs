//! Residues at `s = 1` computed from the underlying series and products.

use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lfamily::tau::{tau_table, TauTable};
use crate::primes::{kronecker_unchecked, sieve_primes};
use crate::real::{CompensatedSum, Real};
use crate::special::digamma_minus_ln;

/// Largest `|d|` accepted for quadratic models.
pub const MAX_DISCRIMINANT: u64 = 1_000_000;

fn is_squarefree(n: u64) -> bool {
    let mut n = n;
    let mut p = 2u64;
    while p * p <= n {
        if n % (p * p) == 0 {
            return false;
        }
        if n % p == 0 {
            n /= p;
        }
        p += 1;
    }
    true
}

/// Checks that `d` is a fundamental discriminant other than 1.
pub fn validate_fundamental(d: i64) -> Result<()> {
    if d == 0 || d == 1 {
        return Err(Error::domain(format!("discriminant {d} is not a nontrivial fundamental discriminant")));
    }
    if d.unsigned_abs() > MAX_DISCRIMINANT {
        return Err(Error::domain(format!("|d| = {} exceeds {MAX_DISCRIMINANT}", d.unsigned_abs())));
    }
    match d.rem_euclid(4) {
        1 => {
            if !is_squarefree(d.unsigned_abs()) {
                return Err(Error::domain(format!("d = {d} is 1 mod 4 but not squarefree")));
            }
        }
        0 => {
            let m = d / 4;
            let r = m.rem_euclid(4);
            if r != 2 && r != 3 {
                return Err(Error::domain(format!("d = {d} = 4m with m = {m} not 2 or 3 mod 4")));
            }
            if !is_squarefree(m.unsigned_abs()) {
                return Err(Error::domain(format!("d = {d} = 4m with m = {m} not squarefree")));
            }
        }
        _ => {
            return Err(Error::domain(format!("d = {d} is 2 or 3 mod 4")));
        }
    }
    Ok(())
}

/// Values of `chi_d` on one period `1..=|d|`.
pub(crate) fn character_period(d: i64) -> Vec<i8> {
    let q = d.unsigned_abs();
    (1..=q).map(|n| kronecker_unchecked(d, n)).collect()
}

/// Periods summed explicitly before the analytic tail takes over.
const L1_PERIODS: u64 = 10;

/// `L(1, chi_d)` for a fundamental discriminant `d`.
///
/// The character series is summed over whole periods up to `N = 10 |d|`; the
/// remaining tail `sum_a chi(a) sum_{k>=10} 1/(a + k|d|)` is evaluated from the
/// digamma asymptotics, which converge because `chi` sums to zero over a
/// period. The raw Abel bound on the omitted tail, `|d|/N`, is what the
/// correction removes; the corrected value is accurate to ~1e-13.
pub fn dirichlet_l1<T: Real>(d: i64) -> Result<T> {
    validate_fundamental(d)?;
    let chi = character_period(d);
    let q = d.unsigned_abs();
    let mut head = CompensatedSum::<T>::new();
    for k in 0..L1_PERIODS {
        for (i, &c) in chi.iter().enumerate() {
            if c != 0 {
                let n = k * q + i as u64 + 1;
                let term = T::from_u64_lossy(n).recip();
                head.add(if c > 0 { term } else { -term });
            }
        }
    }
    // tail = -(1/q) sum_a chi(a) psi(M + a/q); ln M drops out since sum chi = 0
    let qf = T::from_u64_lossy(q);
    let mf = T::from_u64_lossy(L1_PERIODS);
    let mut tail = CompensatedSum::<T>::new();
    for (i, &c) in chi.iter().enumerate() {
        if c != 0 {
            let x = mf + T::from_u64_lossy(i as u64 + 1) / qf;
            let psi_shift = (x / mf).ln() + digamma_minus_ln(x);
            tail.add(if c > 0 { psi_shift } else { -psi_shift });
        }
    }
    let value = head.value() - tail.value() / qf;
    if !(value > T::zero()) {
        return Err(Error::NumericFailure(format!("L(1, chi_{d}) evaluated to non-positive {value}")));
    }
    Ok(value)
}

/// Partial Euler product for `L(1, sym^2 Delta)` with its truncation estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sym2Residue<T> {
    pub cutoff: u64,
    pub value: T,
    pub tail_estimate: T,
}

/// Normalized Hecke eigenvalue `tau(p) p^{-11/2}`.
pub(crate) fn normalized_lambda<T: Real>(tau_p: i128, p: u64) -> T {
    let pf = T::from_u64_lossy(p);
    let tau = T::from_i128(tau_p).expect("tau fits a float");
    tau / (pf.powi(5) * pf.sqrt())
}

/// Unit-circle root `alpha` with `alpha + conj(alpha) = lambda`.
pub(crate) fn satake_root<T: Real>(lambda: T) -> Result<Complex<T>> {
    let two = T::lit(2.0);
    if lambda.abs() > two {
        return Err(Error::Invariant(format!(
            "|lambda(p)| = {} exceeds the Deligne bound 2",
            lambda.abs()
        )));
    }
    let half = lambda / two;
    Ok(Complex::new(half, (T::one() - half * half).max(T::zero()).sqrt()))
}

/// `L(1, sym^2 Delta)` as the Euler product over `p <= P`.
///
/// `L(s, Delta x Delta) = zeta(s) L(s, sym^2 Delta)`, so this product is the
/// residue of the Rankin–Selberg function once the cutoff is large.
///
/// `tail_estimate = 3/P + ln(P)/sqrt(P)`. The first term bounds every
/// higher-order (`p^{-r}`, `r >= 2`) contribution of the omitted primes, since
/// each local log has those terms bounded by `3/(p(p-1))`. The second is a
/// square-root-cancellation estimate for the oscillating first-order sum
/// `sum_{p>P} (lambda(p)^2 - 1)/p`; that part cannot be bounded rigorously
/// without an explicit prime number theorem for `sym^2 Delta`.
pub fn sym2_residue<T: Real>(p_cutoff: u64) -> Result<Sym2Residue<T>> {
    if p_cutoff < 2 {
        return Err(Error::domain(format!("sym2 residue cutoff {p_cutoff} < 2")));
    }
    let taus = tau_table(p_cutoff as usize)?;
    sym2_residue_with(&taus, p_cutoff)
}

/// As [`sym2_residue`] with a precomputed tau table covering `P`.
pub fn sym2_residue_with<T: Real>(taus: &TauTable, p_cutoff: u64) -> Result<Sym2Residue<T>> {
    if p_cutoff < 2 {
        return Err(Error::domain(format!("sym2 residue cutoff {p_cutoff} < 2")));
    }
    if p_cutoff as usize > taus.len() {
        return Err(Error::Range(format!(
            "sym2 residue cutoff {p_cutoff} beyond tau table size {}",
            taus.len()
        )));
    }
    let primes = sieve_primes(p_cutoff)?;
    let mut log_sum = CompensatedSum::<T>::new();
    for p in primes.iter() {
        let lambda: T = normalized_lambda(taus.get(p as usize).unwrap(), p);
        let alpha = satake_root(lambda)?;
        let pf = T::from_u64_lossy(p);
        // roots alpha^2, 1, beta^2 of the symmetric square
        let a2 = alpha * alpha;
        let pair = T::one() - T::lit(2.0) * a2.re / pf + a2.norm_sqr() / (pf * pf);
        let trivial = T::one() - pf.recip();
        log_sum.add(-(pair.ln() + trivial.ln()));
    }
    let pf = T::from_u64_lossy(p_cutoff);
    let tail_estimate = T::lit(3.0) / pf + pf.ln() / pf.sqrt();
    Ok(Sym2Residue {
        cutoff: p_cutoff,
        value: log_sum.value().exp(),
        tail_estimate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn fundamental_discriminants() {
        for d in [-4, -3, 5, 8, -8, 12, -7, 13, -20, 24, 28, -84] {
            assert!(validate_fundamental(d).is_ok(), "d={d}");
        }
        for d in [0, 1, 2, 3, -1, 9, -12, 16, 20, 18, -36, 50] {
            assert!(validate_fundamental(d).is_err(), "d={d}");
        }
        let msg = validate_fundamental(-16).unwrap_err().to_string();
        assert!(msg.contains("not 2 or 3 mod 4"), "{msg}");
    }

    // Closed forms below come from the class number formula and serve only
    // as oracles.
    #[test]
    fn l1_gaussian() {
        let v: f64 = dirichlet_l1(-4).unwrap();
        assert!((v - PI / 4.0).abs() < 1e-9, "{v}");
    }

    #[test]
    fn l1_eisenstein() {
        let v: f64 = dirichlet_l1(-3).unwrap();
        assert!((v - PI / (3.0 * 3f64.sqrt())).abs() < 1e-9, "{v}");
    }

    #[test]
    fn l1_golden() {
        let v: f64 = dirichlet_l1(5).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((v - 2.0 / 5f64.sqrt() * phi.ln()).abs() < 1e-9, "{v}");
    }

    #[test]
    fn l1_imaginary_class_number_formula() {
        // L(1, chi_d) = 2 pi h / (w sqrt|d|) for d < -4 with w = 2
        for (d, h) in [(-7i64, 1u32), (-23, 3), (-47, 5), (-71, 7), (-104, 6), (-5923, 7), (-3299, 27)] {
            let v: f64 = dirichlet_l1(d).unwrap();
            let expect = PI * h as f64 / (d.unsigned_abs() as f64).sqrt();
            assert!((v - expect).abs() < 1e-9, "d={d}: {v} vs {expect}");
        }
    }

    #[test]
    fn l1_rejects_non_fundamental() {
        assert!(dirichlet_l1::<f64>(12 * 4).is_err());
        assert!(dirichlet_l1::<f64>(1).is_err());
    }

    #[test]
    fn sym2_sanity_band_and_tail() {
        let r100: Sym2Residue<f64> = sym2_residue(100).unwrap();
        assert!(r100.value > 0.5 && r100.value < 2.0, "{r100:?}");
        let r1k: Sym2Residue<f64> = sym2_residue(1000).unwrap();
        let r10k: Sym2Residue<f64> = sym2_residue(10_000).unwrap();
        assert!(r100.tail_estimate > r1k.tail_estimate);
        assert!(r1k.tail_estimate > r10k.tail_estimate);
        let r5k: Sym2Residue<f64> = sym2_residue(5_000).unwrap();
        assert!((r10k.value - r5k.value).abs() <= 0.01, "{} {}", r10k.value, r5k.value);
        assert!(sym2_residue::<f64>(1).is_err());
    }

    #[test]
    fn satake_roots_are_unitary() {
        for lambda in [-2.0f64, -1.3, 0.0, 0.53, 1.99, 2.0] {
            let a = satake_root(lambda).unwrap();
            assert!((a.norm() - 1.0).abs() < 1e-15);
            assert!((2.0 * a.re - lambda).abs() < 1e-15);
        }
        assert!(matches!(satake_root(2.0001f64), Err(Error::Invariant(_))));
    }
}
