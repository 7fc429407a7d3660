//! Series plumbing shared by the theta evaluators: truncation budget,
//! compensated accumulation and a certified 1D Gaussian-series summer.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance and hard term limit for every theta series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesBudget {
    pub rel_tol: f64,
    pub max_terms: usize,
}

impl Default for SeriesBudget {
    fn default() -> Self {
        SeriesBudget {
            rel_tol: 1e-13,
            max_terms: 1_000_000,
        }
    }
}

impl SeriesBudget {
    pub fn new(rel_tol: f64, max_terms: usize) -> Result<Self> {
        if !(rel_tol > 0.0 && rel_tol < 1.0) {
            return Err(Error::InvalidInput(format!(
                "rel_tol must lie in (0, 1), got {rel_tol}"
            )));
        }
        if max_terms == 0 {
            return Err(Error::InvalidInput("max_terms must be positive".into()));
        }
        Ok(SeriesBudget { rel_tol, max_terms })
    }
}

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl std::iter::FromIterator<f64> for KahanSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = KahanSum::new();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

/// Sums `sum_k w(k) exp(-pi t (k + r)^2)` over all integers `k`, where the
/// weight satisfies `|w(k)| <= (1 + |k + r|)^degree` and `|r| <= 1/2`.
///
/// Terms are added in symmetric windows `k = 0, +-1, +-2, ...`; summation stops
/// once the geometric bound on the remaining tail drops below
/// `rel_tol * max|term|`.
pub(crate) fn gaussian_series<W>(
    t: f64,
    r: f64,
    degree: i32,
    budget: &SeriesBudget,
    mut weight: W,
) -> Result<f64>
where
    W: FnMut(i64, f64) -> f64,
{
    debug_assert!(t > 0.0);
    let term = |k: i64, weight: &mut W| {
        let m = k as f64 + r;
        weight(k, m) * (-std::f64::consts::PI * t * m * m).exp()
    };

    let mut acc = KahanSum::new();
    let first = term(0, &mut weight);
    acc.add(first);
    let mut dominant = first.abs();
    let mut used = 1usize;
    let mut k: i64 = 1;
    loop {
        let a = term(k, &mut weight);
        let b = term(-k, &mut weight);
        acc.add(a);
        acc.add(b);
        dominant = dominant.max(a.abs()).max(b.abs());
        used += 2;

        let tail = gaussian_tail_bound(t, k, degree);
        // A zero bound means every remaining term underflows.
        if tail <= budget.rel_tol * dominant || tail == 0.0 {
            return Ok(acc.value());
        }
        if dominant == 0.0 && tail < f64::MIN_POSITIVE {
            return Ok(acc.value());
        }
        if used >= budget.max_terms {
            return Err(Error::BudgetExceeded {
                max_terms: budget.max_terms,
            });
        }
        k += 1;
    }
}

/// Bound on `sum_{|k| > k_done} (1+|k+r|)^d exp(-pi t (k+r)^2)` for `|r| <= 1/2`.
pub(crate) fn gaussian_tail_bound(t: f64, k_done: i64, degree: i32) -> f64 {
    let pi = std::f64::consts::PI;
    // Nearest remaining offset is at least k_done + 1/2.
    let m0 = k_done as f64 + 0.5;
    let lead = (1.0 + m0 + 1.0).powi(degree.max(0)) * (-pi * t * m0 * m0).exp();
    // Ratio of consecutive bounds, maximal at the start of the tail.
    let poly_ratio = ((m0 + 3.0) / (m0 + 2.0)).powi(degree.max(0));
    let ratio = poly_ratio * (-pi * t * (2.0 * m0 + 1.0)).exp();
    if ratio >= 1.0 {
        return f64::INFINITY;
    }
    2.0 * lead / (1.0 - ratio)
}
