//! Prime generation and the Kronecker symbol.

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Largest admissible sieve limit.
pub const MAX_SIEVE_LIMIT: u64 = 1 << 32;

/// Number of integers covered by one sieve segment.
pub const SEGMENT_SIZE: u64 = 1 << 20;

/// All primes up to `limit`, ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u32>,
}

impl PrimeTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.primes
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.primes.iter().map(|&p| p as u64)
    }

    /// Prefix of the table holding the primes `<= x`.
    pub fn up_to(&self, x: u64) -> &[u32] {
        let end = self.primes.partition_point(|&p| (p as u64) <= x);
        &self.primes[..end]
    }
}

/// Primes up to `sqrt(limit)` by a plain sieve.
fn small_primes(limit: u64) -> Vec<u64> {
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Sieves the odd numbers in `[lo, hi)` and returns the primes among them.
fn sieve_segment(lo: u64, hi: u64, base: &[u64]) -> Vec<u32> {
    // index i represents lo_odd + 2i
    let lo_odd = if lo % 2 == 0 { lo + 1 } else { lo };
    if lo_odd >= hi {
        return Vec::new();
    }
    let len = ((hi - lo_odd) as usize).div_ceil(2);
    let mut composite = vec![false; len];
    for &p in base.iter().skip(1) {
        if p * p >= hi {
            break;
        }
        let mut start = p * p;
        if start < lo_odd {
            start = lo_odd.div_ceil(p) * p;
        }
        if start % 2 == 0 {
            start += p;
        }
        let mut idx = ((start - lo_odd) / 2) as usize;
        let stride = p as usize;
        while idx < len {
            composite[idx] = true;
            idx += stride;
        }
    }
    let mut out = Vec::with_capacity(len / 8);
    for (i, &c) in composite.iter().enumerate() {
        let n = lo_odd + 2 * i as u64;
        if !c && n > 1 {
            out.push(n as u32);
        }
    }
    out
}

/// Segmented sieve of Eratosthenes up to and including `limit`.
///
/// Segments are processed in parallel and concatenated in ascending order, so
/// the result does not depend on the worker count.
pub fn sieve_primes(limit: u64) -> Result<PrimeTable> {
    if limit < 2 {
        return Err(Error::domain(format!("sieve limit {limit} < 2")));
    }
    if limit > MAX_SIEVE_LIMIT {
        return Err(Error::domain(format!(
            "sieve limit {limit} exceeds 2^32 = {MAX_SIEVE_LIMIT}"
        )));
    }
    let base = small_primes(isqrt(limit));
    // the table stores u32; 2^32 itself is composite
    let end = limit.min(u32::MAX as u64) + 1;
    let segments = end.div_ceil(SEGMENT_SIZE);
    let chunks: Vec<Vec<u32>> = (0..segments)
        .into_par_iter()
        .map(|s| {
            let lo = s * SEGMENT_SIZE;
            let hi = (lo + SEGMENT_SIZE).min(end);
            sieve_segment(lo, hi, &base)
        })
        .collect();
    let total: usize = chunks.iter().map(Vec::len).sum();
    let mut primes = Vec::with_capacity(total + 1);
    primes.push(2);
    for c in chunks {
        primes.extend(c);
    }
    Ok(PrimeTable { limit, primes })
}

/// Kronecker symbol `(d/n)` for nonzero `d` and `n >= 1`.
///
/// Uses the binary reciprocity algorithm, so `n` is never factored.
pub fn kronecker(d: i64, n: u64) -> Result<i8> {
    if d == 0 {
        return Err(Error::domain("kronecker symbol needs d != 0"));
    }
    if n == 0 {
        return Err(Error::domain("kronecker symbol needs n >= 1"));
    }
    Ok(kronecker_unchecked(d, n))
}

pub(crate) fn kronecker_unchecked(d: i64, n: u64) -> i8 {
    let mut a = d as i128;
    let mut b = n as i128;
    if a % 2 == 0 && b % 2 == 0 {
        return 0;
    }
    let mut v = 0u32;
    while b % 2 == 0 {
        v += 1;
        b /= 2;
    }
    let mut k: i8 = 1;
    // (a/2) = (-1)^((a^2-1)/8) for odd a
    if v % 2 == 1 {
        let r = a.rem_euclid(8);
        if r == 3 || r == 5 {
            k = -k;
        }
    }
    // b is odd and positive; reduce to the Jacobi symbol
    loop {
        if a == 0 {
            return if b == 1 { k } else { 0 };
        }
        let mut w = 0u32;
        while a % 2 == 0 {
            w += 1;
            a /= 2;
        }
        if w % 2 == 1 {
            let r = b.rem_euclid(8);
            if r == 3 || r == 5 {
                k = -k;
            }
        }
        // reciprocity with a possibly negative numerator
        if a < 0 {
            a = -a;
            if b.rem_euclid(4) == 3 {
                k = -k;
            }
        }
        if a.rem_euclid(4) == 3 && b.rem_euclid(4) == 3 {
            k = -k;
        }
        let r = b.rem_euclid(a);
        b = a;
        a = r;
    }
}
