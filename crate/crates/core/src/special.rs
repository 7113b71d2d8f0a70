//! Bernoulli-number tail expansions shared by the residue code and the
//! direct oracles.

use num_complex::Complex;

use crate::real::{expm1_over, Real};

/// `B_{2j} / (2j)!` for `j = 1..=10`.
const BERNOULLI_OVER_FACTORIAL: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30_240.0,
    -1.0 / 1_209_600.0,
    1.0 / 47_900_160.0,
    -691.0 / 1_307_674_368_000.0,
    1.0 / 74_724_249_600.0,
    -3617.0 / 10_670_622_842_880_000.0,
    43_867.0 / 5_109_094_217_170_944_000.0,
    -174_611.0 / 802_857_662_698_291_200_000.0,
];

/// `B_{2j} / (2j)` for `j = 1..=7`, for the digamma expansion.
const BERNOULLI_OVER_INDEX: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32_760.0,
    1.0 / 12.0,
];

/// `psi(x) - ln(x)` by its asymptotic series; accurate to ~1e-15 for `x >= 10`.
pub(crate) fn digamma_minus_ln<T: Real>(x: T) -> T {
    let inv = x.recip();
    let inv2 = inv * inv;
    let mut pow = inv2;
    let mut acc = -inv / T::lit(2.0);
    for c in BERNOULLI_OVER_INDEX {
        acc = acc - T::lit(c) * pow;
        pow = pow * inv2;
    }
    acc
}

/// Euler–Maclaurin evaluation of the Hurwitz tail `sum_{k>=0} (w + k)^{-s}`
/// with the leading `w^{1-s}/(s-1)` term omitted.
///
/// Returns `w^{-s}/2 + sum_j B_{2j}/(2j)! (s)_{2j-1} w^{-s-2j+1}` using
/// `terms` correction terms. The omitted leading term is handled by callers,
/// which need it in a cancellation-free form.
pub(crate) fn hurwitz_tail_corrections<T: Real>(s: Complex<T>, w: T, terms: usize) -> Complex<T> {
    let w_neg_s = (-s * w.ln()).exp();
    let mut acc = w_neg_s / T::lit(2.0);
    // rising factorial (s)_{2j-1} times w^{-s-2j+1}
    let mut rising = s;
    let mut w_factor = w_neg_s / w;
    let inv_w2 = (w * w).recip();
    for (j, c) in BERNOULLI_OVER_FACTORIAL.iter().take(terms).enumerate() {
        acc = acc + rising * w_factor * T::lit(*c);
        let k = T::from_usize(2 * j + 1).unwrap();
        rising = rising * (s + k) * (s + k + T::one());
        w_factor = w_factor * inv_w2;
    }
    acc
}

/// `(w^{1-s} - 1) / (s - 1)`, stable as `s -> 1`.
pub(crate) fn power_difference_over<T: Real>(s: Complex<T>, w: T) -> Complex<T> {
    let lw = w.ln();
    let z = (Complex::new(T::one(), T::zero()) - s) * lw;
    // (e^z - 1)/(s-1) = -ln w (e^z - 1)/z
    expm1_over(z) * (-lw)
}
