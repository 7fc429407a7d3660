//! One-dimensional theta functions.
//!
//! Jacobi nulls `theta2`, `theta3`, `theta4` in the real-width convention
//! `theta3(t) = sum_k exp(-pi t k^2)`, the shifted sums
//!
//! ```text
//! vartheta(b; t)      = sum_k exp(-pi t (k+b)^2)
//! vartheta_hat(b; t)  = sum_k exp(-pi t k^2) cos(2 pi k b)
//! vartheta2(b; t)     = sum_k (-1)^k exp(-pi t (k+b)^2)
//! vartheta2_hat(b; t) = sum_k exp(-pi t (k+1/2)^2) cos(2 pi (k+1/2) b)
//! ```
//!
//! their derivatives in `b`, Montgomery's ratio `Q`, the companion ratio `Q2`
//! and the piecewise bounds `A <= Q <= B`, `A2 <= Q2 <= B2`.
//!
//! Every evaluator routes through the Poisson duality
//! `vartheta_hat(b; t) = t^(-1/2) vartheta(b; 1/t)` (and its alternating
//! counterpart) so that the series actually summed always has width `>= 1`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_positive, Result};
use crate::series::{gaussian_series, gaussian_tail_bound, KahanSum, SeriesBudget};

/// Guard band on `|sin|` below which `Q` and `Q2` switch to their limit formulas.
const SINE_GUARD: f64 = 1e-8;

/// Shift/width pair of a 1D theta evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThetaArg {
    /// Shift as given by the caller.
    pub beta_raw: f64,
    /// Shift reduced into `[0, 1)`.
    pub beta: f64,
    pub t: f64,
}

impl ThetaArg {
    pub fn new(beta: f64, t: f64) -> Result<Self> {
        ensure_positive("t", t)?;
        Ok(ThetaArg {
            beta_raw: beta,
            beta: beta.rem_euclid(1.0),
            t,
        })
    }

    /// Integer part removed by the reduction, i.e. `beta_raw - beta`.
    pub fn period_shift(&self) -> i64 {
        (self.beta_raw - self.beta).round() as i64
    }
}

fn sign(n: i64) -> f64 {
    if n.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Nearest integer and remainder in `[-1/2, 1/2]`.
fn split_shift(beta: f64) -> (i64, f64) {
    let n = beta.round();
    (n as i64, beta - n)
}

// ---------------------------------------------------------------------------
// Direct sums, only called with width >= 1.

fn shift_direct(beta: f64, t: f64, budget: &SeriesBudget) -> Result<f64> {
    let (_, r) = split_shift(beta);
    gaussian_series(t, r, 0, budget, |_, _| 1.0)
}

fn hat_direct(beta: f64, t: f64, budget: &SeriesBudget) -> Result<f64> {
    let (_, r) = split_shift(beta);
    gaussian_series(t, 0.0, 0, budget, |k, _| (2.0 * PI * k as f64 * r).cos())
}

fn alt_shift_direct(beta: f64, t: f64, budget: &SeriesBudget) -> Result<f64> {
    let (n, r) = split_shift(beta);
    Ok(sign(n) * gaussian_series(t, r, 0, budget, |k, _| sign(k))?)
}

fn hat2_direct(beta: f64, t: f64, budget: &SeriesBudget) -> Result<f64> {
    // period 2 in beta
    let r = beta - 2.0 * (beta / 2.0).round();
    gaussian_series(t, 0.5, 0, budget, |_, m| (2.0 * PI * m * r).cos())
}

fn d_shift_direct(beta: f64, t: f64, budget: &SeriesBudget) -> Result<f64> {
    let (_, r) = split_shift(beta);
    Ok(-2.0 * PI * t * gaussian_series(t, r, 1, budget, |_, m| m)?)
}

fn d_hat_direct(beta: f64, t: f64, budget: &SeriesBudget) -> Result<f64> {
    let (_, r) = split_shift(beta);
    Ok(-2.0
        * PI
        * gaussian_series(t, 0.0, 1, budget, |k, _| {
            let k = k as f64;
            k * (2.0 * PI * k * r).sin()
        })?)
}

fn d_alt_shift_direct(beta: f64, t: f64, budget: &SeriesBudget) -> Result<f64> {
    let (n, r) = split_shift(beta);
    Ok(sign(n) * -2.0 * PI * t * gaussian_series(t, r, 1, budget, |k, m| sign(k) * m)?)
}

fn d_hat2_direct(beta: f64, t: f64, budget: &SeriesBudget) -> Result<f64> {
    let r = beta - 2.0 * (beta / 2.0).round();
    Ok(-2.0 * PI * gaussian_series(t, 0.5, 1, budget, |_, m| m * (2.0 * PI * m * r).sin())?)
}

/// Picks the side of a Poisson pair whose width is at least one.
fn dual_route<F, G>(t: f64, direct: F, dual: G) -> Result<f64>
where
    F: FnOnce(f64) -> Result<f64>,
    G: FnOnce(f64) -> Result<f64>,
{
    if t >= 1.0 {
        direct(t)
    } else {
        Ok(dual(1.0 / t)? / t.sqrt())
    }
}

// ---------------------------------------------------------------------------
// Jacobi nulls.

/// `theta2(t) = sum_k exp(-pi t (k+1/2)^2)`.
pub fn theta2(t: f64, budget: &SeriesBudget) -> Result<f64> {
    ensure_positive("t", t)?;
    dual_route(
        t,
        |t| gaussian_series(t, 0.5, 0, budget, |_, _| 1.0),
        |s| gaussian_series(s, 0.0, 0, budget, |k, _| sign(k)),
    )
}

/// `theta3(t) = sum_k exp(-pi t k^2)`.
pub fn theta3(t: f64, budget: &SeriesBudget) -> Result<f64> {
    ensure_positive("t", t)?;
    dual_route(
        t,
        |t| gaussian_series(t, 0.0, 0, budget, |_, _| 1.0),
        |s| gaussian_series(s, 0.0, 0, budget, |_, _| 1.0),
    )
}

/// `theta4(t) = sum_k (-1)^k exp(-pi t k^2)`.
pub fn theta4(t: f64, budget: &SeriesBudget) -> Result<f64> {
    ensure_positive("t", t)?;
    dual_route(
        t,
        |t| gaussian_series(t, 0.0, 0, budget, |k, _| sign(k)),
        |s| gaussian_series(s, 0.5, 0, budget, |_, _| 1.0),
    )
}

/// `d/dt theta2(t)`.
pub fn theta2_dt(t: f64, budget: &SeriesBudget) -> Result<f64> {
    ensure_positive("t", t)?;
    if t >= 1.0 {
        Ok(-PI * gaussian_series(t, 0.5, 2, budget, |_, m| m * m)?)
    } else {
        // theta2(t) = t^(-1/2) theta4(1/t)
        let s = 1.0 / t;
        let th4 = gaussian_series(s, 0.0, 0, budget, |k, _| sign(k))?;
        let d_th4 = -PI * gaussian_series(s, 0.0, 2, budget, |k, m| sign(k) * m * m)?;
        Ok(-0.5 * s.powf(1.5) * th4 - s.powf(2.5) * d_th4)
    }
}

/// `d/dt theta4(t)`.
pub fn theta4_dt(t: f64, budget: &SeriesBudget) -> Result<f64> {
    ensure_positive("t", t)?;
    if t >= 1.0 {
        Ok(-PI * gaussian_series(t, 0.0, 2, budget, |k, m| sign(k) * m * m)?)
    } else {
        let s = 1.0 / t;
        let th2 = gaussian_series(s, 0.5, 0, budget, |_, _| 1.0)?;
        let d_th2 = -PI * gaussian_series(s, 0.5, 2, budget, |_, m| m * m)?;
        Ok(-0.5 * s.powf(1.5) * th2 - s.powf(2.5) * d_th2)
    }
}

/// Truncated product `prod_{k=1}^{n} (1 - e^{-2 pi k t}) (1 - e^{-(2k-1) pi t})^2`.
pub fn theta4_product(t: f64, n_factors: usize) -> Result<f64> {
    ensure_positive("t", t)?;
    if n_factors == 0 {
        return Err(crate::error::Error::InvalidInput(
            "theta4_product needs at least one factor".into(),
        ));
    }
    let one_minus_exp = |a: f64| -(-a).exp_m1();
    let mut prod = 1.0;
    for k in 1..=n_factors {
        let k = k as f64;
        let odd = one_minus_exp((2.0 * k - 1.0) * PI * t);
        prod *= one_minus_exp(2.0 * PI * k * t) * odd * odd;
    }
    Ok(prod)
}

// ---------------------------------------------------------------------------
// Shifted and character sums.

pub fn vartheta(beta: f64, t: f64, budget: &SeriesBudget) -> Result<f64> {
    ThetaArg::new(beta, t)?;
    dual_route(
        t,
        |t| shift_direct(beta, t, budget),
        |s| hat_direct(beta, s, budget),
    )
}

pub fn vartheta_hat(beta: f64, t: f64, budget: &SeriesBudget) -> Result<f64> {
    ThetaArg::new(beta, t)?;
    dual_route(
        t,
        |t| hat_direct(beta, t, budget),
        |s| shift_direct(beta, s, budget),
    )
}

pub fn vartheta2(beta: f64, t: f64, budget: &SeriesBudget) -> Result<f64> {
    ThetaArg::new(beta, t)?;
    dual_route(
        t,
        |t| alt_shift_direct(beta, t, budget),
        |s| hat2_direct(beta, s, budget),
    )
}

pub fn vartheta2_hat(beta: f64, t: f64, budget: &SeriesBudget) -> Result<f64> {
    ThetaArg::new(beta, t)?;
    dual_route(
        t,
        |t| hat2_direct(beta, t, budget),
        |s| alt_shift_direct(beta, s, budget),
    )
}

/// `d/db vartheta(b; t)`; odd and 1-periodic in `b`.
pub fn d_vartheta(beta: f64, t: f64, budget: &SeriesBudget) -> Result<f64> {
    ThetaArg::new(beta, t)?;
    dual_route(
        t,
        |t| d_shift_direct(beta, t, budget),
        |s| d_hat_direct(beta, s, budget),
    )
}

pub fn d_vartheta_hat(beta: f64, t: f64, budget: &SeriesBudget) -> Result<f64> {
    ThetaArg::new(beta, t)?;
    dual_route(
        t,
        |t| d_hat_direct(beta, t, budget),
        |s| d_shift_direct(beta, s, budget),
    )
}

pub fn d_vartheta2(beta: f64, t: f64, budget: &SeriesBudget) -> Result<f64> {
    ThetaArg::new(beta, t)?;
    dual_route(
        t,
        |t| d_alt_shift_direct(beta, t, budget),
        |s| d_hat2_direct(beta, s, budget),
    )
}

pub fn d_vartheta2_hat(beta: f64, t: f64, budget: &SeriesBudget) -> Result<f64> {
    ThetaArg::new(beta, t)?;
    dual_route(
        t,
        |t| d_hat2_direct(beta, t, budget),
        |s| d_alt_shift_direct(beta, s, budget),
    )
}

// ---------------------------------------------------------------------------
// Montgomery's Q and its alternating companion Q2.

/// `(m+d) e^{-pi s (m+d)^2} + (d-m) e^{-pi s (m-d)^2}` without cancellation for small `d`.
fn paired_moment(m: f64, d: f64, s: f64) -> f64 {
    let x = 2.0 * PI * s * m * d;
    if x.abs() < 1.0 {
        (-PI * s * (m * m + d * d)).exp() * (2.0 * d * x.cosh() - 2.0 * m * x.sinh())
    } else {
        (m + d) * (-PI * s * (m + d) * (m + d)).exp()
            + (d - m) * (-PI * s * (m - d) * (m - d)).exp()
    }
}

/// Sum of `weight(j) * paired_moment(j + offset, d, s)` over `j >= 0`, width `s >= 1`.
fn paired_series<W>(offset: f64, d: f64, s: f64, budget: &SeriesBudget, weight: W) -> Result<f64>
where
    W: Fn(i64) -> f64,
{
    let mut acc = KahanSum::new();
    let mut dominant = 0.0f64;
    let start = if offset == 0.0 { 1 } else { 0 };
    for j in start..budget.max_terms as i64 {
        let v = weight(j) * paired_moment(j as f64 + offset, d, s);
        acc.add(v);
        dominant = dominant.max(v.abs());
        let tail = gaussian_tail_bound(s, j, 1);
        if tail <= budget.rel_tol * dominant || tail == 0.0 {
            return Ok(acc.value());
        }
    }
    Err(crate::error::Error::BudgetExceeded {
        max_terms: budget.max_terms,
    })
}

/// One-sided sum `sum_{j >= j0} w_j e^{-pi t m_j^2}` with Chebyshev weights, width `t >= 1`.
fn chebyshev_series<W>(t: f64, offset: f64, budget: &SeriesBudget, mut weight: W) -> Result<f64>
where
    W: FnMut(i64, f64) -> f64,
{
    let mut acc = KahanSum::new();
    let mut dominant = 0.0f64;
    let start = if offset == 0.0 { 1 } else { 0 };
    for j in start..budget.max_terms as i64 {
        let m = j as f64 + offset;
        let v = weight(j, m) * (-PI * t * m * m).exp();
        acc.add(v);
        dominant = dominant.max(v.abs());
        let tail = gaussian_tail_bound(t, j, 2);
        if tail <= budget.rel_tol * dominant || tail == 0.0 {
            return Ok(acc.value());
        }
    }
    Err(crate::error::Error::BudgetExceeded {
        max_terms: budget.max_terms,
    })
}

/// `|b - round(b)|`, the representative of an even 1-periodic argument in `[0, 1/2]`.
fn fold_even(beta: f64) -> f64 {
    (beta - beta.round()).abs()
}

/// Montgomery's ratio `Q(b; t) = -(d/db vartheta_hat(b; t)) / sin(2 pi b)`.
///
/// Even, 1-periodic and strictly positive. The removable singularities at
/// `b in Z/2` are evaluated by the l'Hopital limit.
pub fn q_ratio(beta: f64, t: f64, budget: &SeriesBudget) -> Result<f64> {
    ThetaArg::new(beta, t)?;
    let b = fold_even(beta);
    if t >= 1.0 {
        // sin(2 pi k b) / sin(2 pi b) = U_{k-1}(cos 2 pi b)
        let c = (2.0 * PI * b).cos();
        let (mut u_prev, mut u_cur) = (0.0, 1.0); // U_{-1}, U_0
        let sum = chebyshev_series(t, 0.0, budget, |j, _| {
            if j > 1 {
                let next = 2.0 * c * u_cur - u_prev;
                u_prev = u_cur;
                u_cur = next;
            }
            j as f64 * u_cur
        })?;
        return Ok(4.0 * PI * sum);
    }

    let s = 1.0 / t;
    let (base, d) = if b <= 0.25 { (0.0, b) } else { (0.5, b - 0.5) };
    let orient = if base == 0.0 { 1.0 } else { -1.0 };
    let sin_d = (2.0 * PI * d).sin();
    if sin_d.abs() < SINE_GUARD {
        let lim = gaussian_series(s, base, 2, budget, |_, m| 1.0 - 2.0 * PI * s * m * m)?;
        return Ok(orient * s.powf(1.5) * lim);
    }
    let mut p = paired_series(base, d, s, budget, |_| 1.0)?;
    if base == 0.0 {
        p += d * (-PI * s * d * d).exp();
    }
    Ok(2.0 * PI * s.powf(1.5) * p / (orient * sin_d))
}

/// `Q2(b; t) = -(d/db vartheta2_hat(b; t)) / sin(pi b)`; even, 1-periodic, positive.
pub fn q2_ratio(beta: f64, t: f64, budget: &SeriesBudget) -> Result<f64> {
    ThetaArg::new(beta, t)?;
    let b = fold_even(beta);
    if t >= 1.0 {
        // sin((2k+1) pi b) / sin(pi b) = U_{2k}(cos pi b)
        let c = (PI * b).cos();
        let (mut u_prev, mut u_cur) = (0.0, 1.0); // U_{-1}, U_0
        let sum = chebyshev_series(t, 0.5, budget, |j, m| {
            if j > 0 {
                // advance U_{2j-2} -> U_{2j}
                let u1 = 2.0 * c * u_cur - u_prev; // U_{2j-1}
                let u2 = 2.0 * c * u1 - u_cur; // U_{2j}
                u_prev = u1;
                u_cur = u2;
            }
            m * u_cur
        })?;
        return Ok(4.0 * PI * sum);
    }

    let s = 1.0 / t;
    let sin_b = (PI * b).sin();
    if sin_b.abs() < SINE_GUARD {
        let lim =
            gaussian_series(s, 0.0, 2, budget, |k, m| sign(k) * (1.0 - 2.0 * PI * s * m * m))?;
        return Ok(2.0 * s.powf(1.5) * lim);
    }
    let p = b * (-PI * s * b * b).exp() + paired_series(0.0, b, s, budget, |j| sign(j))?;
    Ok(2.0 * PI * s.powf(1.5) * p / sin_b)
}

// ---------------------------------------------------------------------------
// Piecewise bounds, branch point t = 1.

/// Lower bound `A(t) <= Q(b; t)`.
pub fn bound_a(t: f64) -> f64 {
    if t < 1.0 {
        if t <= 0.0 {
            0.0
        } else {
            t.powf(-1.5) * (-PI / (4.0 * t)).exp()
        }
    } else {
        (1.0 - 1.0 / 3000.0) * 4.0 * PI * (-PI * t).exp()
    }
}

/// Upper bound `Q(b; t) <= B(t)`; the `t < 1` branch carries no exponential factor.
pub fn bound_b(t: f64) -> f64 {
    if t < 1.0 {
        if t <= 0.0 {
            f64::INFINITY
        } else {
            // same rounding as the b = 0 limit of q_ratio, where the bound is attained
            t.recip().powf(1.5)
        }
    } else {
        (1.0 + 1.0 / 3000.0) * 4.0 * PI * (-PI * t).exp()
    }
}

/// Lower bound `A2(t) <= Q2(b; t)`.
pub fn bound_a2(t: f64) -> f64 {
    let c = 2.0 * PI * (1.0 - 1.0 / 175.0);
    if t < 1.0 {
        if t <= 0.0 {
            0.0
        } else {
            c * t.powf(-1.5) * (-PI / (4.0 * t)).exp()
        }
    } else {
        c * (-PI * t / 4.0).exp()
    }
}

/// Upper bound `Q2(b; t) <= B2(t)`.
pub fn bound_b2(t: f64) -> f64 {
    if t < 1.0 {
        if t <= 0.0 {
            f64::INFINITY
        } else {
            PI * t.powf(-1.5)
        }
    } else {
        2.0 * PI * (1.0 + 1.0 / 55.0) * (-PI * t / 4.0).exp()
    }
}
