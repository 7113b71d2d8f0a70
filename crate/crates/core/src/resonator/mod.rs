//! The resonance construction at height `T`.
//!
//! With `X = (1/6) ln T ln ln T` the resonator weights are
//! `q_p = max(0, 1 - p/X)`, extended completely multiplicatively, and
//! `R(t) = prod_{p <= X} (1 - q_p p^{it})^{-1}`. The lower bound for the
//! moment ratio `I_1/I_2` is the closed product
//! `prod_{p<=X} prod_j (1 - alpha_j(p) q_p / p)^{-1}`, which splits into the
//! Mertens product over `p <= X` times a defect factor tending to 1.

pub mod moments;

use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lfamily::LFunctionModel;
use crate::mertens::MAX_PRODUCT_CUTOFF;
use crate::primes::sieve_primes;
use crate::real::{ln_one_minus, ordered_block_sum, ordered_block_sum_complex, Real, DEGENERACY_FLOOR};

pub use moments::{moment_audit, moment_quadrature, moment_series, MomentAudit, MomentQuadrature, MomentSeries};

/// Heights must exceed `e^e` so that `ln ln ln T` is positive.
pub fn min_height() -> f64 {
    std::f64::consts::E.exp()
}

/// Resonator parameters derived from the height `T`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResonatorConfig<T> {
    #[serde(rename = "T")]
    pub t_height: T,
    #[serde(rename = "X")]
    pub x: T,
    pub eps: T,
}

fn check_height(t_height: f64) -> Result<()> {
    if !t_height.is_finite() || t_height <= min_height() {
        return Err(Error::domain(format!(
            "T = {t_height} must exceed e^e ~ 15.154 so that ln ln T > 1 and ln ln ln T is defined"
        )));
    }
    Ok(())
}

/// `X = (1/6) ln T ln ln T` and `eps = ln T / T`.
pub fn resonator_config<T: Real>(t_height: f64) -> Result<ResonatorConfig<T>> {
    check_height(t_height)?;
    let th = T::lit(t_height);
    Ok(ResonatorConfig {
        t_height: th,
        x: cutoff_for_height(th),
        eps: th.ln() / th,
    })
}

fn cutoff_for_height<T: Real>(t_height: T) -> T {
    let l = t_height.ln();
    l * l.ln() / T::lit(6.0)
}

/// `q_p = max(0, 1 - p/X)`.
#[inline]
pub fn q_of_prime<T: Real>(p: u64, x: T) -> T {
    (T::one() - T::from_u64_lossy(p) / x).max(T::zero())
}

/// Completely multiplicative extension of [`q_of_prime`]; `q_1 = 1`.
pub fn q_of_int<T: Real>(n: u64, x: T) -> Result<T> {
    if n == 0 {
        return Err(Error::domain("q_n is defined for n >= 1"));
    }
    let mut n = n;
    let mut acc = T::one();
    let mut p = 2u64;
    while p * p <= n {
        while n % p == 0 {
            acc = acc * q_of_prime(p, x);
            n /= p;
        }
        p += 1;
    }
    if n > 1 {
        acc = acc * q_of_prime(n, x);
    }
    Ok(acc)
}

/// `e^{gamma_F} (ln ln T + ln ln ln T)^m`, the large-value bound modulo its
/// unspecified `O(1)` constant.
pub fn asymptotic_bound<T: Real>(model: &LFunctionModel<T>, t_height: f64) -> Result<T> {
    check_height(t_height)?;
    let l2 = T::lit(t_height).ln().ln();
    Ok(model.gamma_f().exp() * (l2 + l2.ln()).powi(model.pole_order() as i32))
}

/// Products over `p <= X` entering the resonance lower bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResonanceReport<T> {
    pub model: String,
    #[serde(rename = "T")]
    pub t_height: Option<T>,
    #[serde(rename = "X")]
    pub x: T,
    /// `sum a_k q_k = prod prod (1 - alpha q_p / p)^{-1}`.
    pub resonance_product: T,
    /// `prod prod (1 - alpha / p)^{-1}`.
    pub mertens_factor: T,
    /// `prod prod (p - alpha) / (p - alpha q_p)`.
    pub defect: T,
    /// Present when `T` is given; excludes the unknown constant.
    pub asymptotic_bound: Option<T>,
    pub note: &'static str,
}

const BOUND_NOTE: &str = "asymptotic bound is stated modulo an unspecified O(1) constant";

fn checked_resonator_cutoff(x: f64) -> Result<u64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("resonator cutoff X = {x} must be positive and finite")));
    }
    if x > MAX_PRODUCT_CUTOFF as f64 {
        return Err(Error::resource("X", x, MAX_PRODUCT_CUTOFF));
    }
    Ok(x.floor() as u64)
}

fn degenerate(p: u64, modulus: f64, at: Option<f64>) -> Error {
    Error::Degenerate { p, modulus, at }
}

/// `-ln |1 - u|`, rejecting factors with `|1 - u|` below the degeneracy floor.
#[inline]
fn neg_log_factor<T: Real>(u: Complex<T>, p: u64) -> Result<T> {
    let modulus = (Complex::new(T::one(), T::zero()) - u).norm();
    if !(modulus >= T::lit(DEGENERACY_FLOOR)) {
        return Err(degenerate(p, modulus.to_f64().unwrap_or(f64::NAN), None));
    }
    Ok(-ln_one_minus(u).re)
}

/// The three products at an explicit resonator cutoff `X`.
///
/// Each is summed in log space on its own; the defect uses
/// `ln |(p - a)/(p - a q)| = ln |1 - a (1 - q)/(p - a q)|` directly, so the
/// factorization identity is a genuine check.
pub fn resonance_at<T: Real>(model: &LFunctionModel<T>, x: T) -> Result<ResonanceReport<T>> {
    let xf = x.to_f64().unwrap_or(f64::NAN);
    let cutoff = checked_resonator_cutoff(xf)?;
    let (primes, table) = if cutoff >= 2 {
        model.check_cutoff(cutoff)?;
        let primes = sieve_primes(cutoff)?;
        let table = model.root_table(primes.as_slice())?;
        (primes.as_slice().to_vec(), Some(table))
    } else {
        (Vec::new(), None)
    };
    let mut logs = [T::zero(); 3];
    if let Some(table) = &table {
        let per_prime = |i: usize, which: usize| -> Result<T> {
            let p = primes[i] as u64;
            let pf = T::from_u64_lossy(p);
            let q = q_of_prime(p, x);
            let mut acc = T::zero();
            for &a in table.roots(i) {
                let u = match which {
                    0 => a * q / pf,
                    1 => a / pf,
                    // (p - a)/(p - a q) = 1 - a (1 - q)/(p - a q)
                    _ => a * (T::one() - q) / (Complex::new(pf, T::zero()) - a * q),
                };
                acc = acc + neg_log_factor(u, p)?;
            }
            Ok(if which == 2 { -acc } else { acc })
        };
        for (which, slot) in logs.iter_mut().enumerate() {
            *slot = ordered_block_sum(primes.len(), |i| per_prime(i, which))?;
        }
    }
    Ok(ResonanceReport {
        model: model.label().to_string(),
        t_height: None,
        x,
        resonance_product: logs[0].exp(),
        mertens_factor: logs[1].exp(),
        defect: logs[2].exp(),
        asymptotic_bound: None,
        note: BOUND_NOTE,
    })
}

/// [`resonance_at`] with `X` taken from [`resonator_config`], plus the
/// asymptotic bound at `T`.
pub fn resonance_product<T: Real>(model: &LFunctionModel<T>, t_height: f64) -> Result<ResonanceReport<T>> {
    let cfg = resonator_config::<T>(t_height)?;
    let mut report = resonance_at(model, cfg.x)?;
    report.t_height = Some(cfg.t_height);
    report.asymptotic_bound = Some(asymptotic_bound(model, t_height)?);
    Ok(report)
}

/// `R(t) = prod_{p<=X} (1 - q_p p^{it})^{-1}`; the empty product for `X < 2`.
#[allow(non_snake_case)]
pub fn R_eval<T: Real>(t: T, x: T) -> Result<Complex<T>> {
    let cutoff = checked_resonator_cutoff(x.to_f64().unwrap_or(f64::NAN))?;
    if cutoff < 2 {
        return Ok(Complex::new(T::one(), T::zero()));
    }
    let primes = sieve_primes(cutoff)?;
    let ps = primes.as_slice();
    let floor = T::lit(DEGENERACY_FLOOR);
    let log = ordered_block_sum_complex(ps.len(), |i| {
        let p = ps[i] as u64;
        let q = q_of_prime(p, x);
        let phase = t * T::from_u64_lossy(p).ln();
        let u = Complex::new(q * phase.cos(), q * phase.sin());
        let modulus = (Complex::new(T::one(), T::zero()) - u).norm();
        if !(modulus >= floor) {
            return Err(degenerate(p, modulus.to_f64().unwrap_or(f64::NAN), t.to_f64()));
        }
        Ok(-ln_one_minus(u))
    })?;
    Ok(log.exp())
}

/// `1 - defect` against `1/ln X` over a set of cutoffs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DefectTrend<T> {
    pub model: String,
    /// `(X, 1 - defect, (1 - defect) ln X)` per cutoff.
    pub points: Vec<(T, T, T)>,
    /// Smallest `c` with `1 - defect <= c / ln X` at every listed cutoff.
    pub constant: T,
}

pub fn defect_trend<T: Real>(model: &LFunctionModel<T>, cutoffs: &[f64]) -> Result<DefectTrend<T>> {
    let mut points = Vec::with_capacity(cutoffs.len());
    let mut constant = T::zero();
    for &x in cutoffs {
        if !(x > 1.0) {
            return Err(Error::domain(format!("defect trend needs X > 1, got {x}")));
        }
        let xt = T::lit(x);
        let rep = resonance_at(model, xt)?;
        let gap = T::one() - rep.defect;
        let scaled = gap * xt.ln();
        constant = constant.max(scaled);
        points.push((xt, gap, scaled));
    }
    Ok(DefectTrend {
        model: model.label().to_string(),
        points,
        constant,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lfamily::{make_dedekind_quadratic, make_zeta_power, ModelSpec};
    use crate::mertens::truncated_product_at_1;
    use proptest::prelude::*;

    fn zeta() -> LFunctionModel<f64> {
        make_zeta_power(1).unwrap()
    }

    #[test]
    fn config_formulae() {
        let t = 600f64.exp();
        let cfg: ResonatorConfig<f64> = resonator_config(t).unwrap();
        assert!((cfg.x - 100.0 * 600f64.ln()).abs() < 1e-9);
        assert!((cfg.x - 639.692).abs() < 1e-3);
        assert!(resonator_config::<f64>(min_height()).is_err());
        assert!(resonator_config::<f64>(2.0).is_err());
        let e: Vec<f64> = [1e3, 1e6, 1e9].iter().map(|&t| resonator_config::<f64>(t).unwrap().eps).collect();
        assert!(e[0] > e[1] && e[1] > e[2] && e[0] < 1.0);
        let again: ResonatorConfig<f64> = resonator_config(1e8).unwrap();
        assert_eq!(again.x, cutoff_for_height(1e8f64));
    }

    #[test]
    fn weights() {
        assert_eq!(q_of_prime(50, 100.0), 0.5);
        assert_eq!(q_of_prime(101, 100.0), 0.0);
        let q: Vec<f64> = [2, 3, 5, 7].iter().map(|&p| q_of_prime(p, 10.0)).collect();
        for (a, b) in q.iter().zip([0.8, 0.7, 0.5, 0.3]) {
            assert!((a - b).abs() < 1e-15);
        }
        assert_eq!(q_of_int(1, 100.0).unwrap(), 1.0);
        assert!((q_of_int(12, 100.0f64).unwrap() - 0.931588).abs() < 1e-12);
        assert_eq!(q_of_int(2 * 103, 100.0).unwrap(), 0.0);
        assert!(q_of_int::<f64>(0, 100.0).is_err());
    }

    #[test]
    fn q_multiplicative_exhaustive() {
        for m in 1..=1000u64 {
            for n in 1..=1000u64 {
                if num_gcd(m, n) == 1 && m * n <= 1_000_000 {
                    let lhs: f64 = q_of_int(m * n, 100.0).unwrap();
                    let rhs = q_of_int(m, 100.0).unwrap() * q_of_int(n, 100.0).unwrap();
                    assert!((lhs - rhs).abs() <= 1e-15 * rhs.abs().max(1e-300), "{m} {n}");
                }
            }
        }
    }

    fn num_gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            num_gcd(b, a % b)
        }
    }

    #[test]
    fn zeta_resonance_at_ten() {
        let r = resonance_at(&zeta(), 10.0).unwrap();
        // prod 1/(1 - q_p/p) with q = 0.8, 0.7, 0.5, 0.3
        let direct: f64 = [(2.0, 0.8), (3.0, 0.7), (5.0, 0.5), (7.0, 0.3)]
            .iter()
            .map(|(p, q)| 1.0 / (1.0 - q / p))
            .product();
        assert!((r.resonance_product - direct).abs() < 1e-14);
        assert!((r.resonance_product - 2.52362).abs() < 1e-5);
        assert!((r.mertens_factor - 4.375).abs() < 1e-14);
        assert!((r.defect - 0.576827).abs() < 1e-6);
    }

    #[test]
    fn factorization_identity_and_domination() {
        for spec in ["zeta", "zeta^2", "dedekind:-4", "dedekind:5", "rs-delta:1000"] {
            let m: LFunctionModel<f64> = spec.parse::<ModelSpec>().unwrap().build().unwrap();
            for x in [10.0, 100.0, 1000.0] {
                let r = resonance_at(&m, x).unwrap();
                let rel = (r.resonance_product / (r.mertens_factor * r.defect) - 1.0).abs();
                assert!(rel < 1e-12, "{spec} X={x}: {rel}");
                assert!(r.resonance_product <= r.mertens_factor);
                assert!(r.defect > 0.0 && r.defect <= 1.0);
            }
        }
    }

    #[test]
    fn zeta_square_doubles_log() {
        let z2: LFunctionModel<f64> = make_zeta_power(2).unwrap();
        for t in [1e4, 1e8, 1e20] {
            let a = resonance_product(&zeta(), t).unwrap().resonance_product;
            let b = resonance_product(&z2, t).unwrap().resonance_product;
            assert!((b / (a * a) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn mertens_factor_matches_truncated_product() {
        let k: LFunctionModel<f64> = make_dedekind_quadratic(-4).unwrap();
        let r = resonance_at(&k, 1000.0).unwrap();
        let direct = truncated_product_at_1(&k, 1000.0).unwrap();
        assert!((r.mertens_factor / direct - 1.0).abs() < 1e-13);
    }

    #[test]
    fn bounds() {
        let ee = std::f64::consts::E.exp().exp();
        // e^gamma (e + 1)
        let expect = crate::real::EULER_GAMMA.exp() * (std::f64::consts::E + 1.0);
        assert!((asymptotic_bound(&zeta(), ee).unwrap() - expect).abs() < 1e-12);
        assert!((expect - 6.6222).abs() < 5e-4);
        assert!((asymptotic_bound(&zeta(), 1e8).unwrap() - 7.094).abs() < 1e-3);
        let z2: LFunctionModel<f64> = make_zeta_power(2).unwrap();
        assert!((asymptotic_bound(&z2, 1e8).unwrap() - 50.33).abs() < 0.01);
        assert!((asymptotic_bound(&zeta(), 1e6).unwrap() - 6.396).abs() < 1e-3);
        assert!(asymptotic_bound(&zeta(), 10.0).is_err());
        let rep = resonance_product(&zeta(), 1e8).unwrap();
        assert!(rep.asymptotic_bound.is_some() && rep.t_height == Some(1e8));
    }

    #[test]
    fn resonator_values() {
        let r0 = R_eval(0.0f64, 10.0).unwrap();
        // 1 - q_p = p/X
        assert!((r0.re - 1e4 / 210.0).abs() < 1e-12 && r0.im.abs() < 1e-14);
        assert_eq!(R_eval(3.7, 1.5).unwrap(), Complex::new(1.0, 0.0));
        for t in [1.0, 10.0, 100.0] {
            let a = R_eval(t, 50.0).unwrap();
            let b = R_eval(-t, 50.0).unwrap();
            assert!((a - b.conj()).norm() <= 1e-12 * a.norm());
        }
    }

    #[test]
    fn defect_trend_constant() {
        let trend = defect_trend(&zeta(), &[1e2, 1e3, 1e4]).unwrap();
        assert_eq!(trend.points.len(), 3);
        for &(x, gap, scaled) in &trend.points {
            assert!(gap > 0.0 && gap < 1.0);
            assert!(gap <= trend.constant / x.ln() + 1e-15);
            assert!(scaled <= trend.constant);
        }
        assert!(trend.constant.is_finite() && trend.constant > 0.0);
    }

    proptest! {
        #[test]
        fn resonator_conjugate_symmetry(t in -500.0f64..500.0, x in 2.0f64..60.0) {
            let a = R_eval(t, x).unwrap();
            let b = R_eval(-t, x).unwrap();
            prop_assert!((a - b.conj()).norm() <= 1e-12 * a.norm());
        }

        #[test]
        fn q_in_unit_interval(n in 1u64..100_000, x in 1.0f64..500.0) {
            let q: f64 = q_of_int(n, x).unwrap();
            prop_assert!((0.0..=1.0).contains(&q));
        }
    }
}
