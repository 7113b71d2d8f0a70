//! Gaussian-weighted moments
//! `I_1 = int F(1+it; X) |R(t)|^2 Phi(eps t) dt` and
//! `I_2 = int |R(t)|^2 Phi(eps t) dt`, `Phi(u) = e^{-u^2}`, by two
//! independent routes.
//!
//! # Series
//!
//! Expanding `|R(t)|^2 = sum q_m q_n (m/n)^{it}` and `F(1+it; X) = sum b_k k^{-it}`
//! and integrating termwise against the Gaussian gives
//! `(sqrt(pi)/eps) sum q_m q_n b_k exp(-ln^2(km/n) / (4 eps^2))`.
//! Every index is `X`-smooth, so each term is a vector `c` of exponents with
//! frequency `L(c) = sum_p c_p ln p`. Summing the part common to `m` and `n`
//! in closed form leaves, per prime,
//!
//! `u_p(c) = sum_{j>=0} b_{p,j} q_p^{|c + j|}`, `b_{p,j} = h_j(alpha(p)) p^{-j}`,
//!
//! and `I = (sqrt(pi)/eps) prod_p (1 - q_p^2)^{-1} sum_c prod_p u_p(c_p) G(L(c))`
//! with `G(L) = exp(-L^2/(4 eps^2))`; `I_2` is the case `b = [1]`.
//!
//! The lattice sum keeps every `c` whose weight is within a factor
//! `1/n_cutoff` of the largest, i.e. cost `sum_p ln(u_p^max / u_p(c_p)) <= ln n_cutoff`.
//! The primes are split in two groups; one side is bucketed by frequency and
//! sorted by cost, the other is streamed, so only pairs with
//! `|L| <~ 12 eps` and admissible joint cost are visited.
//!
//! The omitted mass is estimated from the contributions of the two outermost
//! unit-cost shells, which decay geometrically, plus a strict bound on the
//! pairs left out by the frequency window.
//!
//! # Quadrature
//!
//! Composite trapezoid rule on `|t| <= 6.1/eps`, at steps `h`, `h/2` and
//! `h/4`; the integrands are analytic in a strip, so the rule converges
//! geometrically and the last difference bounds the error.

use num_complex::Complex;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lfamily::LFunctionModel;
use crate::primes::sieve_primes;
use crate::real::{CompensatedSum, ComplexSum, Real, DEGENERACY_FLOOR};

use super::{q_of_prime, resonance_at};

/// Largest resonator cutoff for which the moments are evaluated.
pub const MAX_MOMENT_X: f64 = 50.0;

/// Default weight ratio for the series: terms down to `e^{-30}` of the largest.
pub const DEFAULT_N_CUTOFF: u64 = 10_686_474_581_524;

/// Ceiling on the number of exponent vectors held on either side of the split.
pub const MAX_LATTICE_SIDE: f64 = 2.5e7;

/// Quadrature range in units of `1/eps`; `Phi(6.1) < 1e-16`.
pub const QUADRATURE_TAIL: f64 = 6.1;

/// Frequency window half-width in units of `2 eps`; `G` at the edge is `e^{-36}`.
const WINDOW: f64 = 6.0;

/// Series evaluation of both moments.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentSeries<T> {
    #[serde(rename = "X")]
    pub x: T,
    #[serde(rename = "T")]
    pub t_height: T,
    pub eps: T,
    pub n_cutoff: u64,
    pub i1: T,
    pub i2: T,
    /// Estimated omitted mass of `I_1` plus that of `I_2`.
    pub truncation_bound: T,
    pub i1_truncation: T,
    pub i2_truncation: T,
    /// Lattice pairs visited across both sums.
    pub pairs: u64,
}

/// Quadrature evaluation of both moments.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentQuadrature<T> {
    #[serde(rename = "X")]
    pub x: T,
    #[serde(rename = "T")]
    pub t_height: T,
    pub eps: T,
    /// Finest step actually used (`step / 4`).
    pub step: T,
    pub t_max: T,
    pub i1: T,
    pub i2: T,
    /// Imaginary part of the `I_1` integral; zero up to rounding by symmetry.
    pub i1_imag: T,
    pub i1_error: T,
    pub i2_error: T,
    /// `max(i1_error, i2_error)`.
    pub error_estimate: T,
    pub points: u64,
}

/// Both routes side by side with the moment inequality.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentAudit<T> {
    pub model: String,
    pub series: MomentSeries<T>,
    pub quadrature: MomentQuadrature<T>,
    pub resonance_product: T,
    /// `I_1 / I_2` from the quadrature.
    pub ratio: T,
    pub ratio_series: T,
    /// `(truncation_bound + error_estimate) / I_2`.
    pub allowance: T,
    /// `ratio >= resonance_product - allowance`.
    pub inequality_holds: bool,
    /// `|I_2(quadrature) - I_2(series)| / I_2(quadrature)`.
    pub i2_relative_gap: T,
}

/// Validates `(X, T)` and returns `eps = ln T / T`.
fn check_moment_args(x: f64, t_height: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("X = {x} must be positive and finite")));
    }
    if x > MAX_MOMENT_X {
        return Err(Error::resource("X", x, MAX_MOMENT_X));
    }
    if !(t_height > std::f64::consts::E) || !t_height.is_finite() {
        return Err(Error::domain(format!("T = {t_height} must exceed e for eps = ln T / T to lie in (0, 1/e)")));
    }
    Ok(t_height.ln() / t_height)
}

/// Per-prime data: weights `u_p(c)` and the local roots.
struct PrimeData<T> {
    p: u64,
    q: T,
    roots: Vec<Complex<T>>,
}

fn prime_data<T: Real>(model: &LFunctionModel<T>, x: T) -> Result<Vec<PrimeData<T>>> {
    let cutoff = x.to_f64().unwrap_or(0.0).floor() as u64;
    if cutoff < 2 {
        return Ok(Vec::new());
    }
    model.check_cutoff(cutoff)?;
    let mut out = Vec::new();
    for p in sieve_primes(cutoff)?.iter() {
        let roots = model.local_roots(p)?.as_slice().to_vec();
        out.push(PrimeData {
            p,
            q: q_of_prime(p, x),
            roots,
        });
    }
    Ok(out)
}

/// Frequencies and costs of the admissible exponents at one prime.
struct Axis<T> {
    /// `(c ln p, cost)`, sorted by cost.
    entries: Vec<(T, T)>,
    log_max: T,
    /// `sum_c u_p(c) / u_p^max` over all of `Z`.
    relative_total: T,
}

/// Number of `b_j` kept; `b_j <= C(j+3, 3) 2^{-j}` is below `1e-25` past it.
const B_TERMS: usize = 120;

fn axis<T: Real>(pd: &PrimeData<T>, with_f: bool, budget: T) -> Axis<T> {
    let pf = T::from_u64_lossy(pd.p);
    let b: Vec<T> = if with_f {
        let roots = crate::lfamily::LocalRoots::new(pd.roots.clone()).expect("validated roots");
        let h = roots.inverse_series(B_TERMS);
        let mut scale = T::one();
        h.iter()
            .map(|c| {
                let v = c.re * scale;
                scale = scale / pf;
                v.max(T::zero())
            })
            .collect()
    } else {
        vec![T::one()]
    };
    let q = pd.q;
    let qpow = |e: usize| if e == 0 { T::one() } else { q.powi(e as i32) };
    let u = |c: i64| -> T {
        let mut acc = T::zero();
        for (j, &bj) in b.iter().enumerate() {
            if bj > T::zero() {
                acc = acc + bj * qpow((c + j as i64).unsigned_abs() as usize);
            }
        }
        acc
    };
    let ln_p = pf.ln();
    let mut raw: Vec<(i64, T)> = Vec::new();
    // c >= 0: u(c) = q^c u(0), strictly decreasing unless q = 0
    let u0 = u(0);
    raw.push((0, u0));
    if q > T::zero() {
        let mut c = 1i64;
        loop {
            let v = u0 * qpow(c as usize);
            if !(v > T::zero()) || (u0 / v).ln() > budget + T::one() {
                break;
            }
            raw.push((c, v));
            c += 1;
        }
    }
    // c < 0: past the support of b the weight is q^n times a constant
    let mut n = 1i64;
    loop {
        let v = u(-n);
        let beyond = n as usize >= b.len();
        if v > T::zero() {
            raw.push((-n, v));
        }
        if beyond && (!(v > T::zero()) || (u0 / v).ln() > budget + T::one()) {
            break;
        }
        n += 1;
    }
    let vmax = raw.iter().fold(T::zero(), |m, &(_, v)| m.max(v));
    let log_max = vmax.ln();
    let mut entries: Vec<(T, T)> = raw
        .iter()
        .map(|&(c, v)| (T::from_i64(c).unwrap() * ln_p, log_max - v.ln()))
        .filter(|&(_, cost)| cost <= budget)
        .collect();
    entries.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap().then(a.0.partial_cmp(&b.0).unwrap()));
    let bsum: T = b.iter().copied().sum();
    let relative_total = if q < T::one() {
        bsum * (T::one() + q) / (T::one() - q) / vmax
    } else {
        T::infinity()
    };
    Axis {
        entries,
        log_max,
        relative_total,
    }
}

/// Upper estimate of the number of vectors with total cost at most `budget`.
fn count_vectors<T: Real>(axes: &[&Axis<T>], budget: T) -> f64 {
    const BINS: usize = 2000;
    let width = budget.to_f64().unwrap() / BINS as f64;
    let mut dist = vec![0.0f64; BINS + 1];
    dist[0] = 1.0;
    for ax in axes {
        let mut next = vec![0.0f64; BINS + 1];
        for &(_, cost) in &ax.entries {
            let shift = (cost.to_f64().unwrap() / width).floor() as usize;
            if shift > BINS {
                continue;
            }
            for i in 0..=BINS - shift {
                next[i + shift] += dist[i];
            }
        }
        dist = next;
    }
    dist.iter().sum()
}

fn enumerate<T: Real>(axes: &[&Axis<T>], budget: T) -> Vec<(T, T)> {
    fn rec<T: Real>(axes: &[&Axis<T>], left: T, l: T, cost: T, out: &mut Vec<(T, T)>) {
        match axes.split_first() {
            None => out.push((l, cost)),
            Some((ax, rest)) => {
                for &(lc, c) in &ax.entries {
                    if c > left {
                        break;
                    }
                    rec(rest, left - c, l + lc, cost + c, out);
                }
            }
        }
    }
    let mut out = Vec::new();
    rec(axes, budget, T::zero(), T::zero(), &mut out);
    out
}

struct LatticeSum<T> {
    /// Relative sum (in units of `prod u_p^max`).
    value: T,
    tail: T,
    log_scale: T,
    pairs: u64,
}

const STREAM_BLOCK: usize = 1 << 12;

fn lattice_sum<T: Real>(axes: &[Axis<T>], eps: T, budget: T) -> Result<LatticeSum<T>> {
    let log_scale = axes.iter().fold(T::zero(), |s, a| s + a.log_max);
    if axes.is_empty() {
        return Ok(LatticeSum {
            value: T::one(),
            tail: T::zero(),
            log_scale,
            pairs: 1,
        });
    }
    // balance the two sides
    let refs: Vec<&Axis<T>> = axes.iter().collect();
    let mut best = (f64::INFINITY, 1usize);
    for s in 1..=refs.len() {
        let a = count_vectors(&refs[..s], budget);
        let b = count_vectors(&refs[s..], budget);
        if a.max(b) < best.0 {
            best = (a.max(b), s);
        }
    }
    if best.0 > MAX_LATTICE_SIDE {
        return Err(Error::resource(
            "n_cutoff",
            format!("e^{budget} (about {:.3e} lattice vectors per side)", best.0),
            format!("{MAX_LATTICE_SIDE:e} vectors"),
        ));
    }
    let (side_a, side_b) = refs.split_at(best.1);
    let a = enumerate(side_a, budget);
    let mut b = enumerate(side_b, budget);
    // streaming in frequency order keeps the bucket reads local
    b.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());

    let window = T::lit(2.0 * WINDOW) * eps;
    let (lmin, lmax) = a.iter().fold((T::infinity(), T::neg_infinity()), |(lo, hi), e| (lo.min(e.0), hi.max(e.0)));
    let bucket_w = (window / T::lit(4.0)).max((lmax - lmin) / T::lit(4e6));
    let nb = ((lmax - lmin) / bucket_w).floor().to_usize().unwrap() + 1;
    let bucket_of = |l: T| ((l - lmin) / bucket_w).floor();
    let mut keyed: Vec<(usize, T, T)> = a
        .into_iter()
        .map(|(l, c)| (bucket_of(l).to_usize().unwrap(), c, l))
        .collect();
    keyed.sort_by(|x, y| x.0.cmp(&y.0).then(x.1.partial_cmp(&y.1).unwrap()));
    let mut offsets = vec![0usize; nb + 1];
    for e in &keyed {
        offsets[e.0 + 1] += 1;
    }
    for i in 0..nb {
        offsets[i + 1] += offsets[i];
    }
    let sorted: Vec<(T, T)> = keyed.into_iter().map(|(_, c, l)| (l, c)).collect();

    let inv4 = (T::lit(4.0) * eps * eps).recip();
    let cut = T::lit(WINDOW * WINDOW);
    let outer = budget - T::one();
    let inner = budget - T::lit(2.0);
    let nbf = T::from_usize(nb).unwrap();
    // (sum, outermost shell, next shell, visits)
    let partials: Vec<(CompensatedSum<T>, T, T, u64)> = b
        .par_chunks(STREAM_BLOCK)
        .map(|chunk| {
            let mut acc = CompensatedSum::new();
            let (mut s0, mut s1) = (T::zero(), T::zero());
            let mut visits = 0u64;
            for &(lb, cb) in chunk {
                let y = -lb;
                let lo = bucket_of(y - window);
                let hi = bucket_of(y + window);
                if hi < T::zero() || lo >= nbf {
                    continue;
                }
                let lo = lo.max(T::zero()).to_usize().unwrap();
                let hi = hi.min(nbf - T::one()).to_usize().unwrap();
                let left = budget - cb;
                let mut local = T::zero();
                for bucket in lo..=hi {
                    for &(la, ca) in &sorted[offsets[bucket]..offsets[bucket + 1]] {
                        if ca > left {
                            break;
                        }
                        let d = la - y;
                        let g = d * d * inv4;
                        if g > cut {
                            continue;
                        }
                        visits += 1;
                        let cost = ca + cb;
                        let v = (-cost - g).exp();
                        local = local + v;
                        if cost > inner {
                            if cost > outer {
                                s0 = s0 + v;
                            } else {
                                s1 = s1 + v;
                            }
                        }
                    }
                }
                acc.add(local);
            }
            (acc, s0, s1, visits)
        })
        .collect();
    let mut total = CompensatedSum::new();
    let (mut s0, mut s1) = (T::zero(), T::zero());
    let mut pairs = 0u64;
    for (acc, a0, a1, v) in &partials {
        total.merge(acc);
        s0 = s0 + *a0;
        s1 = s1 + *a1;
        pairs += v;
    }
    // geometric extrapolation from the two outermost unit shells
    let tail = if s0 == T::zero() {
        T::zero()
    } else if !(s1 > s0) {
        T::infinity()
    } else {
        let r = s0 / s1;
        s0 * r / (T::one() - r)
    };
    let full_weight = axes.iter().fold(T::one(), |s, a| s * a.relative_total);
    let window_omitted = full_weight * T::lit(-WINDOW * WINDOW).exp();
    Ok(LatticeSum {
        value: total.value(),
        tail: tail + window_omitted,
        log_scale,
        pairs,
    })
}

fn gaussian_mass<T: Real>(eps: T) -> T {
    T::PI().sqrt() / eps
}

/// `I_1`, `I_2` from the lattice series with weight ratio `n_cutoff`.
pub fn moment_series<T: Real>(model: &LFunctionModel<T>, x: T, t_height: f64, n_cutoff: u64) -> Result<MomentSeries<T>> {
    let xf = x.to_f64().unwrap_or(f64::NAN);
    let eps = T::lit(check_moment_args(xf, t_height)?);
    if n_cutoff < 8 {
        return Err(Error::domain(format!("n_cutoff = {n_cutoff} must be at least 8")));
    }
    let budget = T::from_u64_lossy(n_cutoff).ln();
    let data = prime_data(model, x)?;
    let mut prefactor = gaussian_mass(eps);
    for pd in &data {
        prefactor = prefactor / (T::one() - pd.q * pd.q);
    }
    let mut out = [(T::zero(), T::zero(), 0u64); 2];
    for (slot, with_f) in out.iter_mut().zip([true, false]) {
        let axes: Vec<Axis<T>> = data.iter().map(|pd| axis(pd, with_f, budget)).collect();
        let s = lattice_sum(&axes, eps, budget)?;
        let scale = prefactor * s.log_scale.exp();
        *slot = (s.value * scale, s.tail * scale, s.pairs);
    }
    let [(i1, i1_truncation, p1), (i2, i2_truncation, p2)] = out;
    Ok(MomentSeries {
        x,
        t_height: T::lit(t_height),
        eps,
        n_cutoff,
        i1,
        i2,
        truncation_bound: i1_truncation + i2_truncation,
        i1_truncation,
        i2_truncation,
        pairs: p1 + p2,
    })
}

/// Trapezoid sums at strides 4, 2, 1 of the finest grid.
#[derive(Clone, Copy, Default)]
struct QuadAccum<T> {
    f1: [ComplexSum<T>; 3],
    f2: [CompensatedSum<T>; 3],
}

const QUAD_BLOCK: usize = 1 << 14;

/// `I_1`, `I_2` by the trapezoid rule at `step`, `step/2`, `step/4`.
pub fn moment_quadrature<T: Real>(model: &LFunctionModel<T>, x: T, t_height: f64, step: T) -> Result<MomentQuadrature<T>> {
    let xf = x.to_f64().unwrap_or(f64::NAN);
    let eps = T::lit(check_moment_args(xf, t_height)?);
    if !(step > T::zero()) || !step.is_finite() {
        return Err(Error::domain(format!("quadrature step {step} must be positive")));
    }
    let data = prime_data(model, x)?;
    for pd in &data {
        if !(T::one() - pd.q >= T::lit(DEGENERACY_FLOOR)) {
            return Err(Error::Degenerate {
                p: pd.p,
                modulus: (T::one() - pd.q).to_f64().unwrap_or(f64::NAN),
                at: None,
            });
        }
    }
    let t_max = T::lit(QUADRATURE_TAIL) / eps;
    let h = step / T::lit(4.0);
    let half_points = (t_max / h).ceil().to_u64().unwrap();
    let half_points = half_points.div_ceil(4) * 4;
    let n = 2 * half_points + 1;
    if n > 1 << 32 {
        return Err(Error::resource("step", step, "2^32 quadrature nodes"));
    }
    let ln_p: Vec<T> = data.iter().map(|pd| T::from_u64_lossy(pd.p).ln()).collect();
    let offset = half_points as i64;
    let point = |k: usize| -> (Complex<T>, T) {
        let t = T::from_i64(k as i64 - offset).unwrap() * h;
        let mut r2 = T::one();
        let mut f = Complex::new(T::one(), T::zero());
        for (pd, &lp) in data.iter().zip(&ln_p) {
            let z = Complex::new((t * lp).cos(), (t * lp).sin());
            // |1 - q z|^2
            r2 = r2 / (T::one() - T::lit(2.0) * pd.q * z.re + pd.q * pd.q);
            let zc = z.conj() / T::from_u64_lossy(pd.p);
            for &a in &pd.roots {
                f = f / (Complex::new(T::one(), T::zero()) - a * zc);
            }
        }
        let w = r2 * (-(eps * t) * (eps * t)).exp();
        (f * w, w)
    };
    let blocks: Vec<QuadAccum<T>> = (0..(n as usize).div_ceil(QUAD_BLOCK))
        .into_par_iter()
        .map(|blk| {
            let mut acc = QuadAccum::<T>::default();
            for k in blk * QUAD_BLOCK..((blk + 1) * QUAD_BLOCK).min(n as usize) {
                let (f1, f2) = point(k);
                let (f1, f2) = if k == 0 || k == n as usize - 1 {
                    (f1 / T::lit(2.0), f2 / T::lit(2.0))
                } else {
                    (f1, f2)
                };
                let rel = k as i64 - offset;
                for (lvl, stride) in [4i64, 2, 1].into_iter().enumerate() {
                    if rel % stride == 0 {
                        acc.f1[lvl].add(f1);
                        acc.f2[lvl].add(f2);
                    }
                }
            }
            acc
        })
        .collect();
    let mut total = QuadAccum::<T>::default();
    for b in &blocks {
        for lvl in 0..3 {
            total.f1[lvl].merge(&b.f1[lvl]);
            total.f2[lvl].merge(&b.f2[lvl]);
        }
    }
    let steps = [h * T::lit(4.0), h * T::lit(2.0), h];
    let i1s: Vec<Complex<T>> = (0..3).map(|l| total.f1[l].value() * steps[l]).collect();
    let i2s: Vec<T> = (0..3).map(|l| total.f2[l].value() * steps[l]).collect();
    let check = |vals: [T; 3], what: &str| -> Result<T> {
        let e1 = (vals[1] - vals[0]).abs();
        let e2 = (vals[2] - vals[1]).abs();
        let noise = T::lit(1e-13) * vals[2].abs();
        if e2 > e1 && e2 > noise {
            return Err(Error::NumericFailure(format!(
                "{what} quadrature not converging under step halving: differences {e1:e} then {e2:e} at step {step}"
            )));
        }
        Ok(e2.max(noise))
    };
    let i1_error = check([i1s[0].re, i1s[1].re, i1s[2].re], "I_1")?;
    let i2_error = check([i2s[0], i2s[1], i2s[2]], "I_2")?;
    Ok(MomentQuadrature {
        x,
        t_height: T::lit(t_height),
        eps,
        step: h,
        t_max,
        i1: i1s[2].re,
        i2: i2s[2],
        i1_imag: i1s[2].im,
        i1_error,
        i2_error,
        error_estimate: i1_error.max(i2_error),
        points: n,
    })
}

/// Runs both routes and the moment inequality at one `(X, T)`.
pub fn moment_audit<T: Real>(
    model: &LFunctionModel<T>,
    x: T,
    t_height: f64,
    n_cutoff: u64,
    step: T,
) -> Result<MomentAudit<T>> {
    let series = moment_series(model, x, t_height, n_cutoff)?;
    let quadrature = moment_quadrature(model, x, t_height, step)?;
    let resonance_product = resonance_at(model, x)?.resonance_product;
    let ratio = quadrature.i1 / quadrature.i2;
    let allowance = (series.truncation_bound + quadrature.error_estimate) / quadrature.i2;
    Ok(MomentAudit {
        model: model.label().to_string(),
        ratio_series: series.i1 / series.i2,
        i2_relative_gap: (quadrature.i2 - series.i2).abs() / quadrature.i2,
        inequality_holds: ratio >= resonance_product - allowance,
        series,
        quadrature,
        resonance_product,
        ratio,
        allowance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lfamily::make_zeta_power;

    fn zeta() -> LFunctionModel<f64> {
        make_zeta_power(1).unwrap()
    }

    #[test]
    fn empty_resonator_is_pure_gaussian() {
        let s = moment_series(&zeta(), 1.5, 5000.0, 1000).unwrap();
        let mass = gaussian_mass(5000f64.ln() / 5000.0);
        assert!((s.i1 - mass).abs() < 1e-12 * mass);
        assert!((s.i2 - mass).abs() < 1e-12 * mass);
        assert_eq!(s.truncation_bound, 0.0);
        let q = moment_quadrature(&zeta(), 1.5, 5000.0, 0.5).unwrap();
        assert!((q.i2 - mass).abs() <= q.i2_error.max(1e-12 * mass));
    }

    #[test]
    fn single_prime_diagonal() {
        // X = 3: q_2 = 1/3, q_3 = 0; off-diagonal terms vanish at this eps
        let s = moment_series(&zeta(), 3.0, 5000.0, 1_000_000_000).unwrap();
        let mass = gaussian_mass(5000f64.ln() / 5000.0);
        assert!((s.i2 / mass - 9.0 / 8.0).abs() < 1e-6, "{}", s.i2 / mass);
    }

    #[test]
    fn single_prime_first_moment_closed_form() {
        // diagonal only: I_1/I_2 -> sum a_k q_k / k over 3-smooth k
        let s = moment_series(&zeta(), 3.0, 5000.0, 1_000_000_000).unwrap();
        let expect = 1.0 / (1.0 - (1.0 / 3.0) / 2.0);
        assert!((s.i1 / s.i2 - expect).abs() < 1e-6);
    }

    #[test]
    fn argument_checks() {
        assert!(matches!(moment_series(&zeta(), 60.0, 5000.0, 1000), Err(Error::Resource { .. })));
        assert!(moment_series(&zeta(), 10.0, 2.0, 1000).is_err());
        assert!(moment_series(&zeta(), 10.0, 5000.0, 4).is_err());
        assert!(moment_quadrature(&zeta(), 10.0, 5000.0, 0.0).is_err());
    }

    #[test]
    fn series_and_quadrature_agree_small() {
        let s = moment_series(&zeta(), 8.0, 500.0, 1_000_000_000_000).unwrap();
        let q = moment_quadrature(&zeta(), 8.0, 500.0, 0.1).unwrap();
        assert!((s.i2 / q.i2 - 1.0).abs() < 1e-8, "{} {}", s.i2, q.i2);
        assert!((s.i1 / q.i1 - 1.0).abs() < 1e-8, "{} {}", s.i1, q.i1);
        assert!(q.i1_imag.abs() < 1e-8 * q.i1);
    }
}
