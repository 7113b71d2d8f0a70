//! Two independent evaluations of `zeta(s)` off the pole.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::real::{ComplexSum, Real};
use crate::special::hurwitz_tail_corrections;

use super::MAX_ABS_T;

/// Bernoulli correction terms used by [`zeta_em`].
pub const EM_TERMS: usize = 8;

fn check_pole<T: Real>(s: Complex<T>) -> Result<()> {
    if s.re == T::one() && s.im == T::zero() {
        return Err(Error::domain("zeta has a pole at s = 1"));
    }
    if !(s.im.abs() <= T::lit(MAX_ABS_T)) {
        return Err(Error::resource("t", s.im, MAX_ABS_T));
    }
    Ok(())
}

/// Euler–Maclaurin: `sum_{n<N} n^{-s} + N^{1-s}/(s-1) + N^{-s}/2 + corrections`
/// with `N = max(50, ceil(2 |Im s|))`.
pub fn zeta_em<T: Real>(s: Complex<T>) -> Result<Complex<T>> {
    check_pole(s)?;
    if s.re < T::lit(0.5) {
        return Err(Error::domain(format!("zeta_em needs Re(s) >= 1/2, got {s}")));
    }
    let n_terms = (T::lit(2.0) * s.im.abs()).ceil().to_u64().unwrap().max(50);
    let mut head = ComplexSum::new();
    for n in (1..n_terms).rev() {
        head.add((-s * T::from_u64_lossy(n).ln()).exp());
    }
    let nf = T::from_u64_lossy(n_terms);
    let one = Complex::new(T::one(), T::zero());
    let lead = ((one - s) * nf.ln()).exp() / (s - one);
    Ok(head.value() + lead + hurwitz_tail_corrections(s, nf, EM_TERMS))
}

/// `sum_{k>=0} (-1)^k a_k` by Borwein's acceleration, for sequences like
/// `a_k = (k + c)^{-s}` with `|Im s| <= t_abs`.
///
/// With `n` terms the error is below `3 (1 + 2|t|) e^{pi |t|/2} / (3 + sqrt 8)^n`;
/// `n` is chosen to push that under `1e-15`. The weights reach `10^{700}` at
/// large `t`, so they are formed in log space and normalised by their maximum.
pub(crate) fn borwein_alternating<T: Real>(t_abs: f64, term: impl Fn(usize) -> Complex<T>) -> Complex<T> {
    let rate = (3.0 + 8f64.sqrt()).ln();
    let n = ((std::f64::consts::FRAC_PI_2 * t_abs + (1.0 + 2.0 * t_abs).ln() + 35.0) / rate).ceil() as usize;
    // log of n (n+i-1)! 4^i / ((n-i)! (2i)!)
    let mut log_terms = Vec::with_capacity(n + 1);
    let mut lt = 0.0f64;
    log_terms.push(lt);
    for i in 0..n {
        let (fi, fnn) = (i as f64, n as f64);
        lt += (4.0 * (fnn + fi) * (fnn - fi)).ln() - ((2.0 * fi + 1.0) * (2.0 * fi + 2.0)).ln();
        log_terms.push(lt);
    }
    let top = log_terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    // suffix[k] = sum_{i>=k} weight_i
    let mut suffix = vec![0.0f64; n + 2];
    for i in (0..=n).rev() {
        suffix[i] = suffix[i + 1] + (log_terms[i] - top).exp();
    }
    let total = suffix[0];
    let mut acc = ComplexSum::new();
    for k in 0..n {
        let v = term(k) * T::lit(suffix[k + 1] / total);
        acc.add(if k % 2 == 0 { v } else { -v });
    }
    acc.value()
}

/// `zeta(s) = eta(s) / (1 - 2^{1-s})` with the alternating series for `eta`
/// accelerated; valid for `Re(s) > 0`.
pub fn zeta_eta<T: Real>(s: Complex<T>) -> Result<Complex<T>> {
    check_pole(s)?;
    if !(s.re > T::zero()) {
        return Err(Error::domain(format!("zeta_eta needs Re(s) > 0, got {s}")));
    }
    let one = Complex::new(T::one(), T::zero());
    let factor = one - ((one - s) * T::LN_2()).exp();
    if factor.norm() < T::lit(1e-300) {
        return Err(Error::NumericFailure(format!("1 - 2^(1-s) vanishes at s = {s}")));
    }
    let t = s.im.abs().to_f64().unwrap();
    let eta = borwein_alternating(t, |k| (-s * T::from_usize(k + 1).unwrap().ln()).exp());
    Ok(eta / factor)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn even_values() {
        assert!((zeta_em(c(2.0, 0.0)).unwrap().re - PI * PI / 6.0).abs() < 1e-13);
        assert!((zeta_em(c(4.0, 0.0)).unwrap().re - PI.powi(4) / 90.0).abs() < 1e-13);
        assert!((zeta_eta(c(2.0, 0.0)).unwrap().re - PI * PI / 6.0).abs() < 1e-13);
    }

    #[test]
    fn basel_partial_sum_oracle() {
        // sum_{n<=10^6} n^-2 + 1/10^6 - 1/(2 10^12)
        let n = 1_000_000u64;
        let mut s: f64 = (1..=n).rev().map(|k| 1.0 / (k as f64 * k as f64)).sum();
        s += 1.0 / n as f64 - 0.5 / (n as f64 * n as f64);
        assert!((zeta_em(c(2.0, 0.0)).unwrap().re - s).abs() < 1e-13);
    }

    #[test]
    fn one_plus_i() {
        // eta-series value, independently confirmed to 20 digits
        let expect = c(0.582_158_059_752_3, -0.926_848_564_330_9);
        assert!((zeta_em(c(1.0, 1.0)).unwrap() - expect).norm() < 1e-10);
        assert!((zeta_eta(c(1.0, 1.0)).unwrap() - expect).norm() < 1e-10);
    }

    #[test]
    fn oracles_agree_on_the_line() {
        for i in 0..20 {
            let t = 1.0 + 99.0 * i as f64 / 19.0;
            let a = zeta_em(c(1.0, t)).unwrap();
            let b = zeta_eta(c(1.0, t)).unwrap();
            assert!((a - b).norm() <= 1e-10 * (1.0 + a.norm()), "t={t}: {a} {b}");
        }
        for s in [c(2.0, 0.0), c(1.0, 10.0), c(0.5, 30.0)] {
            assert!((zeta_em(s).unwrap() - zeta_eta(s).unwrap()).norm() < 1e-10);
        }
    }

    #[test]
    fn symmetry_and_real_axis() {
        let h = zeta_eta(c(0.5, 0.0)).unwrap();
        assert!(h.im.abs() <= 1e-12);
        assert!((h.re + 1.460_354_508_809_586_8).abs() < 1e-10);
        let a = zeta_eta(c(1.0, 3.0)).unwrap();
        let b = zeta_eta(c(1.0, -3.0)).unwrap();
        assert!((a - b.conj()).norm() < 1e-14);
    }

    #[test]
    fn pole_and_domain() {
        assert!(zeta_em(c(1.0, 0.0)).is_err());
        assert!(zeta_eta(c(1.0, 0.0)).is_err());
        assert!(zeta_eta(c(-1.0, 2.0)).is_err());
        assert!(zeta_em(c(0.25, 2.0)).is_err());
    }
}
