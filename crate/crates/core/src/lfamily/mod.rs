//! Concrete members of the family: local roots, pole data and residues.
//!
//! Every model factors completely over primes into degree-`k` local factors
//! `prod_j (1 - alpha_j(p) p^{-s})^{-1}` with `|alpha_j(p)| <= 1`. Three
//! families ship:
//!
//! * `zeta^m`, the `m`-th power of the Riemann zeta function (all roots 1);
//! * `dedekind:<d>`, the Dedekind zeta function of the quadratic field of
//!   discriminant `d`, with roots `[1, chi_d(p)]`;
//! * `rs-delta:<N>`, the Rankin–Selberg square of the discriminant form
//!   `Delta`, with roots `[alpha^2, 1, 1, beta^2]` for `p <= N`.

pub mod residue;
pub mod tau;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::primes::{kronecker_unchecked, sieve_primes};
use crate::real::Real;

pub use residue::{dirichlet_l1, sym2_residue, sym2_residue_with, validate_fundamental, Sym2Residue};
pub use tau::{tau_table, TauTable, MAX_TAU_N};

/// Tolerance on `|alpha| <= 1` for roots computed in floating point.
pub const ROOT_MODULUS_SLACK: f64 = 1e-12;

/// Prime powers up to this bound are checked for non-negative coefficients
/// when a model is built.
pub const COEFF_CHECK_BOUND: u64 = 10_000;

/// Parsed model selector: `zeta`, `zeta^<m>`, `dedekind:<d>`, `rs-delta:<N>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum ModelSpec {
    Zeta { power: u32 },
    Dedekind { d: i64 },
    RsDelta { n: usize },
}

impl FromStr for ModelSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::ModelSpec(s.to_string());
        if s == "zeta" {
            return Ok(ModelSpec::Zeta { power: 1 });
        }
        if let Some(m) = s.strip_prefix("zeta^") {
            let power = m.parse().map_err(|_| bad())?;
            return Ok(ModelSpec::Zeta { power });
        }
        if let Some(d) = s.strip_prefix("dedekind:") {
            let d = d.parse().map_err(|_| bad())?;
            return Ok(ModelSpec::Dedekind { d });
        }
        if let Some(n) = s.strip_prefix("rs-delta:") {
            let n = n.parse().map_err(|_| bad())?;
            return Ok(ModelSpec::RsDelta { n });
        }
        Err(bad())
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelSpec::Zeta { power: 1 } => write!(f, "zeta"),
            ModelSpec::Zeta { power } => write!(f, "zeta^{power}"),
            ModelSpec::Dedekind { d } => write!(f, "dedekind:{d}"),
            ModelSpec::RsDelta { n } => write!(f, "rs-delta:{n}"),
        }
    }
}

impl ModelSpec {
    pub fn build<T: Real>(&self) -> Result<LFunctionModel<T>> {
        match *self {
            ModelSpec::Zeta { power } => make_zeta_power(power),
            ModelSpec::Dedekind { d } => make_dedekind_quadratic(d),
            ModelSpec::RsDelta { n } => make_rankin_selberg_delta(n),
        }
    }
}

/// The multiset `{alpha_j(p)}` at one prime; always exactly `degree` entries.
///
/// A root equal to zero stands for a missing linear factor (ramified primes
/// of quadratic fields).
#[derive(Debug, Clone, PartialEq)]
pub struct LocalRoots<T> {
    roots: Vec<Complex<T>>,
}

impl<T: Real> LocalRoots<T> {
    pub fn new(roots: Vec<Complex<T>>) -> Result<Self> {
        let limit = T::one() + T::lit(ROOT_MODULUS_SLACK);
        if let Some(r) = roots.iter().find(|r| !(r.norm() <= limit)) {
            return Err(Error::Invariant(format!("local root {r} has modulus above 1")));
        }
        Ok(Self { roots })
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.roots
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// Coefficients of `prod_j (1 - alpha_j x)`, constant term first.
    pub fn polynomial(&self) -> Vec<Complex<T>> {
        let mut poly = vec![Complex::new(T::one(), T::zero())];
        for &a in &self.roots {
            let mut next = poly.clone();
            next.push(Complex::new(T::zero(), T::zero()));
            for (i, &c) in poly.iter().enumerate() {
                next[i + 1] = next[i + 1] - a * c;
            }
            poly = next;
        }
        poly
    }

    /// First `order + 1` coefficients of `prod_j (1 - alpha_j x)^{-1}`
    /// (complete homogeneous symmetric polynomials of the roots).
    pub fn inverse_series(&self, order: usize) -> Vec<Complex<T>> {
        let mut series = vec![Complex::new(T::zero(), T::zero()); order + 1];
        series[0] = Complex::new(T::one(), T::zero());
        for &a in &self.roots {
            for r in 1..=order {
                series[r] = series[r] + a * series[r - 1];
            }
        }
        series
    }
}

#[derive(Debug)]
enum RootRule<T> {
    Unit,
    Quadratic { d: i64 },
    /// `alpha(p)` for each prime `p <= N`, parallel to `primes`.
    Satake { primes: Vec<u32>, alphas: Vec<Complex<T>> },
}

/// A member of the family with its pole data and local-roots rule.
#[derive(Debug, Clone)]
pub struct LFunctionModel<T: Real> {
    spec: ModelSpec,
    label: String,
    degree: usize,
    pole_order: u32,
    residue: T,
    gamma_f: T,
    coeff_cutoff: Option<u64>,
    rule: Arc<RootRule<T>>,
}

/// `m * gamma + ln(c_{-m})`.
pub fn gamma_f_of<T: Real>(pole_order: u32, residue: T) -> T {
    T::from_u32(pole_order).unwrap() * T::euler_gamma() + residue.ln()
}

impl<T: Real> LFunctionModel<T> {
    fn assemble(spec: ModelSpec, degree: usize, pole_order: u32, residue: T, coeff_cutoff: Option<u64>, rule: RootRule<T>) -> Result<Self> {
        if pole_order == 0 {
            return Err(Error::domain("pole order must be at least 1"));
        }
        if !(residue > T::zero()) || !residue.is_finite() {
            return Err(Error::Invariant(format!("residue {residue} is not positive")));
        }
        let model = Self {
            spec,
            label: spec.to_string(),
            degree,
            pole_order,
            residue,
            gamma_f: gamma_f_of(pole_order, residue),
            coeff_cutoff,
            rule: Arc::new(rule),
        };
        model.check_nonnegative_coefficients()?;
        Ok(model)
    }

    pub fn spec(&self) -> ModelSpec {
        self.spec
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn pole_order(&self) -> u32 {
        self.pole_order
    }

    /// `c_{-m} = lim_{s->1} (s-1)^m F(s)`.
    pub fn residue(&self) -> T {
        self.residue
    }

    pub fn gamma_f(&self) -> T {
        self.gamma_f
    }

    /// Largest prime with known local roots; `None` means unbounded.
    pub fn coeff_cutoff(&self) -> Option<u64> {
        self.coeff_cutoff
    }

    /// Whether an independent direct evaluation of `F(1+it)` exists.
    pub fn has_direct_oracle(&self) -> bool {
        !matches!(self.spec, ModelSpec::RsDelta { .. })
    }

    /// Fails with a range error when `x` exceeds the coefficient cutoff.
    pub fn check_cutoff(&self, x: u64) -> Result<()> {
        match self.coeff_cutoff {
            Some(n) if x > n => Err(Error::Range(format!(
                "{} has local roots only for p <= {n}, requested {x}",
                self.label
            ))),
            _ => Ok(()),
        }
    }

    /// Writes the roots at prime `p` into `out` (cleared first).
    pub fn roots_into(&self, p: u64, out: &mut Vec<Complex<T>>) -> Result<()> {
        self.check_cutoff(p)?;
        out.clear();
        let one = Complex::new(T::one(), T::zero());
        match &*self.rule {
            RootRule::Unit => out.extend(std::iter::repeat(one).take(self.degree)),
            RootRule::Quadratic { d } => {
                let chi = kronecker_unchecked(*d, p);
                out.push(one);
                out.push(Complex::new(T::from_i8(chi).unwrap(), T::zero()));
            }
            RootRule::Satake { primes, alphas } => {
                let idx = primes
                    .binary_search(&(p as u32))
                    .map_err(|_| Error::domain(format!("{p} is not a prime")))?;
                let a = alphas[idx];
                let a2 = a * a;
                out.extend([a2, one, one, a2.conj()]);
            }
        }
        Ok(())
    }

    pub fn local_roots(&self, p: u64) -> Result<LocalRoots<T>> {
        let mut roots = Vec::with_capacity(self.degree);
        self.roots_into(p, &mut roots)?;
        LocalRoots::new(roots)
    }

    /// Flattened roots for each prime in `primes`.
    pub fn root_table(&self, primes: &[u32]) -> Result<RootTable<T>> {
        if let Some(&last) = primes.last() {
            self.check_cutoff(last as u64)?;
        }
        let mut roots = Vec::with_capacity(primes.len() * self.degree);
        let mut buf = Vec::with_capacity(self.degree);
        for &p in primes {
            self.roots_into(p as u64, &mut buf)?;
            roots.extend_from_slice(&buf);
        }
        Ok(RootTable {
            primes: primes.to_vec(),
            degree: self.degree,
            roots,
        })
    }

    fn check_nonnegative_coefficients(&self) -> Result<()> {
        let bound = self.coeff_cutoff.map_or(COEFF_CHECK_BOUND, |n| n.min(COEFF_CHECK_BOUND));
        if bound < 2 {
            return Ok(());
        }
        let tol = T::lit(1e-10);
        for p in sieve_primes(bound)?.iter() {
            let mut order = 0usize;
            let mut pk = 1u64;
            while pk * p <= COEFF_CHECK_BOUND {
                pk *= p;
                order += 1;
            }
            let roots = self.local_roots(p)?;
            for (r, c) in roots.inverse_series(order).iter().enumerate() {
                if c.re < -tol || c.im.abs() > tol {
                    return Err(Error::Invariant(format!(
                        "{}: Dirichlet coefficient at {p}^{r} is {c}, not a non-negative real",
                        self.label
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Roots for a fixed list of primes, stored contiguously.
#[derive(Debug, Clone)]
pub struct RootTable<T> {
    primes: Vec<u32>,
    degree: usize,
    roots: Vec<Complex<T>>,
}

impl<T: Real> RootTable<T> {
    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// Roots at the `i`-th prime.
    pub fn roots(&self, i: usize) -> &[Complex<T>] {
        &self.roots[i * self.degree..(i + 1) * self.degree]
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, &[Complex<T>])> + '_ {
        self.primes
            .iter()
            .zip(self.roots.chunks_exact(self.degree.max(1)))
            .map(|(&p, r)| (p as u64, r))
    }
}

/// `zeta(s)^m`: degree `m`, pole of order `m`, residue 1.
pub fn make_zeta_power<T: Real>(m: u32) -> Result<LFunctionModel<T>> {
    if m == 0 {
        return Err(Error::domain("zeta power m must be >= 1: the bound needs a pole at s = 1"));
    }
    LFunctionModel::assemble(ModelSpec::Zeta { power: m }, m as usize, m, T::one(), None, RootRule::Unit)
}

/// Dedekind zeta function of the quadratic field with discriminant `d`.
pub fn make_dedekind_quadratic<T: Real>(d: i64) -> Result<LFunctionModel<T>> {
    validate_fundamental(d)?;
    let residue = dirichlet_l1::<T>(d)?;
    LFunctionModel::assemble(ModelSpec::Dedekind { d }, 2, 1, residue, None, RootRule::Quadratic { d })
}

/// `L(s, Delta x Delta)` with local roots for `p <= N`.
pub fn make_rankin_selberg_delta<T: Real>(n: usize) -> Result<LFunctionModel<T>> {
    if n < 2 {
        return Err(Error::domain(format!("rs-delta needs N >= 2, got {n}")));
    }
    let taus = tau_table(n)?;
    let primes = sieve_primes(n as u64)?;
    let mut alphas = Vec::with_capacity(primes.len());
    for p in primes.iter() {
        let lambda: T = residue::normalized_lambda(taus.get(p as usize).unwrap(), p);
        alphas.push(residue::satake_root(lambda)?);
    }
    let rho = sym2_residue_with::<T>(&taus, n as u64)?;
    LFunctionModel::assemble(
        ModelSpec::RsDelta { n },
        4,
        1,
        rho.value,
        Some(n as u64),
        RootRule::Satake {
            primes: primes.as_slice().to_vec(),
            alphas,
        },
    )
}
