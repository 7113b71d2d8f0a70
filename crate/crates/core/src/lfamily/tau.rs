//! Ramanujan tau by exact expansion of `q * prod_{n>=1} (1 - q^n)^24`.

use crate::error::{Error, Result};

/// Largest `N` accepted by [`tau_table`].
pub const MAX_TAU_N: usize = 20_000;

/// Exact `tau(1..=N)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TauTable {
    // values[n] = tau(n); values[0] is unused and zero
    values: Vec<i128>,
}

impl TauTable {
    pub fn len(&self) -> usize {
        self.values.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `tau(n)` for `1 <= n <= N`.
    pub fn get(&self, n: usize) -> Option<i128> {
        if n == 0 {
            None
        } else {
            self.values.get(n).copied()
        }
    }

    pub fn values(&self) -> &[i128] {
        &self.values[1..]
    }
}

/// Nonzero terms `(exponent, sign)` of the pentagonal series
/// `prod (1 - q^n) = sum_k (-1)^k q^{k(3k-1)/2}` up to `order`.
fn pentagonal_terms(order: usize) -> Vec<(usize, i128)> {
    let mut terms = vec![(0usize, 1i128)];
    let mut k = 1usize;
    loop {
        let sign = if k % 2 == 1 { -1 } else { 1 };
        let a = k * (3 * k - 1) / 2;
        let b = k * (3 * k + 1) / 2;
        if a > order {
            break;
        }
        terms.push((a, sign));
        if b <= order {
            terms.push((b, sign));
        }
        k += 1;
    }
    terms.sort_unstable();
    terms
}

/// `tau(n)` for `n <= N` in exact 128-bit arithmetic.
///
/// The 24th power of the pentagonal series is built by 24 truncated
/// multiplications by the (sparse) series itself. Every intermediate value is
/// a coefficient of `eta^j / q^{j/24}` for `j <= 24`, far inside `i128`, and
/// all arithmetic is checked anyway.
pub fn tau_table(n: usize) -> Result<TauTable> {
    if n == 0 {
        return Err(Error::domain("tau table size must be positive"));
    }
    if n > MAX_TAU_N {
        return Err(Error::resource("tau N", n, MAX_TAU_N));
    }
    // coefficients of prod(1-q^k)^24 up to q^{n-1}
    let order = n - 1;
    let pent = pentagonal_terms(order);
    let mut series = vec![0i128; order + 1];
    series[0] = 1;
    for _ in 0..24 {
        let mut next = vec![0i128; order + 1];
        for (i, &c) in series.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for &(e, sign) in &pent {
                let j = i + e;
                if j > order {
                    break;
                }
                next[j] = next[j]
                    .checked_add(sign * c)
                    .ok_or_else(|| Error::NumericFailure("tau expansion overflowed i128".into()))?;
            }
        }
        series = next;
    }
    let mut values = Vec::with_capacity(n + 1);
    values.push(0);
    values.extend(series);
    Ok(TauTable { values })
}
