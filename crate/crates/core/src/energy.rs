//! Lattice energies for completely monotone potentials.
//!
//! Potentials act on squared distances `r = |v|^2`. Each energy is an integral
//! of a theta function against the Laplace measure of the potential; for the
//! inverse powers `r^(-s/2)` this is the Gamma-function representation, split
//! at `alpha = eta` with the lower half mapped by the theta functional equation.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::{gamma, gamma_ur};

use crate::error::{ensure_positive, Error, Result};
use crate::lattice::{gram, lambda_min, LatticeParam};
use crate::series::{KahanSum, SeriesBudget};
use crate::theta1d;
use crate::theta2d::{theta_alternating, theta_centered, theta_excess, theta_plain};

/// A completely monotone interaction `f(r)` of the squared distance `r`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Potential {
    /// `r^(-s/2)`, i.e. distance to the power `-s`.
    InversePower { s: f64 },
    /// `exp(-t r)`.
    Gaussian { t: f64 },
    /// `sum_i w_i exp(-t_i r)`.
    LaplaceMeasure { nodes: Vec<(f64, f64)> },
}

impl Potential {
    pub fn inverse_power(s: f64) -> Result<Self> {
        ensure_positive("s", s)?;
        Ok(Potential::InversePower { s })
    }

    pub fn gaussian(t: f64) -> Result<Self> {
        ensure_positive("t", t)?;
        Ok(Potential::Gaussian { t })
    }

    pub fn laplace_measure(nodes: Vec<(f64, f64)>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::InvalidInput("measure needs at least one node".into()));
        }
        for &(t, w) in &nodes {
            ensure_positive("t", t)?;
            if !(w >= 0.0 && w.is_finite()) {
                return Err(Error::InvalidInput(format!("weights must be non-negative, got {w}")));
            }
        }
        Ok(Potential::LaplaceMeasure { nodes })
    }

    /// Whether `|f(r)| = O(r^(-1-eps))`, so lattice sums converge absolutely.
    pub fn is_summable(&self) -> bool {
        match self {
            Potential::InversePower { s } => *s > 2.0,
            _ => true,
        }
    }

    /// `f(r)` at a squared distance.
    pub fn eval(&self, r: f64) -> f64 {
        match self {
            Potential::InversePower { s } => r.powf(-s / 2.0),
            Potential::Gaussian { t } => (-t * r).exp(),
            Potential::LaplaceMeasure { nodes } => nodes.iter().map(|&(t, w)| w * (-t * r).exp()).sum(),
        }
    }
}

impl fmt::Display for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Potential::InversePower { s } => write!(f, "pow:s={s}"),
            Potential::Gaussian { t } => write!(f, "gauss:t={t}"),
            Potential::LaplaceMeasure { nodes } => {
                let parts: Vec<String> = nodes.iter().map(|(t, w)| format!("({t},{w})")).collect();
                write!(f, "measure:[{}]", parts.join(","))
            }
        }
    }
}

impl FromStr for Potential {
    type Err = Error;

    /// `pow:s=3`, `gauss:t=1.5` or `measure:[(t1,w1),(t2,w2)]`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("cannot parse potential {s:?}"));
        let (kind, rest) = s.trim().split_once(':').ok_or_else(bad)?;
        let num = |key: &str| -> Result<f64> {
            let v = rest.trim().strip_prefix(key).and_then(|r| r.trim_start().strip_prefix('='));
            v.ok_or_else(bad)?.trim().parse::<f64>().map_err(|_| bad())
        };
        match kind.trim() {
            "pow" => Potential::inverse_power(num("s")?),
            "gauss" => Potential::gaussian(num("t")?),
            "measure" => {
                let body = rest
                    .trim()
                    .strip_prefix('[')
                    .and_then(|r| r.strip_suffix(']'))
                    .ok_or_else(bad)?;
                let mut nodes = Vec::new();
                for chunk in body.split(')') {
                    let chunk = chunk.trim().trim_start_matches(',').trim();
                    if chunk.is_empty() {
                        continue;
                    }
                    let inner = chunk.strip_prefix('(').ok_or_else(bad)?;
                    let (t, w) = inner.split_once(',').ok_or_else(bad)?;
                    let t: f64 = t.trim().parse().map_err(|_| bad())?;
                    let w: f64 = w.trim().parse().map_err(|_| bad())?;
                    nodes.push((t, w));
                }
                Potential::laplace_measure(nodes)
            }
            _ => Err(bad()),
        }
    }
}

/// Split point `eta` of the Gamma integral; results do not depend on it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EwaldSplit {
    pub eta: f64,
}

impl Default for EwaldSplit {
    fn default() -> Self {
        EwaldSplit { eta: 1.0 }
    }
}

impl EwaldSplit {
    pub fn new(eta: f64) -> Result<Self> {
        ensure_positive("eta", eta)?;
        Ok(EwaldSplit { eta })
    }
}

const QUAD_TOL: f64 = 1e-14;

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1].
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15<F: FnMut(f64) -> Result<f64>>(f: &mut F, a: f64, b: f64) -> Result<(f64, f64)> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c)?;
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx)? + f(c + dx)?;
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    Ok((kron * h, (kron - gauss).abs() * h))
}

/// Adaptive Gauss-Kronrod on a finite interval, bisecting in a fixed order.
fn integrate<F: FnMut(f64) -> Result<f64>>(f: &mut F, a: f64, b: f64, tol: f64) -> Result<f64> {
    fn rec<F: FnMut(f64) -> Result<f64>>(f: &mut F, a: f64, b: f64, tol: f64, depth: u32) -> Result<f64> {
        let (v, err) = gk15(f, a, b)?;
        if err <= tol || err <= 1e-15 * v.abs() {
            return Ok(v);
        }
        if depth == 0 {
            return Err(Error::QuadratureFailure(format!(
                "panel [{a}, {b}] still has error estimate {err:e}"
            )));
        }
        let m = 0.5 * (a + b);
        Ok(rec(f, a, m, tol / 2.0, depth - 1)? + rec(f, m, b, tol / 2.0, depth - 1)?)
    }
    rec(f, a, b, tol, 30)
}

/// `integral_a^inf alpha^p h(alpha) d alpha`, where `|h(alpha)| <= bound(A) exp(-kappa (alpha - A))`
/// for every `alpha >= A`. Panels double in length until the remaining tail is certified.
fn integrate_to_infinity<F, B>(mut h: F, a: f64, p: f64, kappa: f64, mut bound: B, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
    B: FnMut(f64) -> Result<f64>,
{
    let mut integrand = |alpha: f64| -> Result<f64> { Ok(alpha.powf(p) * h(alpha)?) };
    let mut acc = KahanSum::new();
    let mut lo = a;
    let mut width = 1.0;
    loop {
        let hi = lo + width;
        acc.add(integrate(&mut integrand, lo, hi, tol)?);
        lo = hi;
        width *= 2.0;
        let hb = bound(lo)?;
        let rate = kappa - p.max(0.0) / lo;
        if rate > 0.0 {
            let tail = hb * lo.powf(p) / rate;
            if tail <= tol {
                return Ok(acc.value());
            }
        }
        if lo > 1e5 {
            return Err(Error::QuadratureFailure(format!("tail bound not reached by alpha = {lo}")));
        }
    }
}

struct LatticeSums<'a> {
    l: &'a LatticeParam,
    budget: SeriesBudget,
    lam: f64,
}

impl<'a> LatticeSums<'a> {
    fn new(l: &'a LatticeParam) -> Result<Self> {
        Ok(LatticeSums {
            l,
            budget: SeriesBudget::default(),
            lam: lambda_min(&gram(l)?)?,
        })
    }

    /// `theta(alpha) - 1` or `theta^pm(alpha) - 1`.
    fn excess(&self, alternating: bool, alpha: f64) -> Result<f64> {
        if alpha >= 1.0 {
            theta_excess(self.l, alternating, alpha, &self.budget)
        } else if alternating {
            Ok(theta_alternating(self.l, alpha, &self.budget)? - 1.0)
        } else {
            Ok(theta_plain(self.l, alpha, &self.budget)? - 1.0)
        }
    }

    fn centered(&self, alpha: f64) -> Result<f64> {
        theta_centered(self.l, alpha, &self.budget)
    }

    /// `int_a^inf alpha^p (theta^(pm) - 1)`; the plain excess bounds both.
    fn int_excess(&self, alternating: bool, a: f64, p: f64) -> Result<f64> {
        integrate_to_infinity(
            |al| self.excess(alternating, al),
            a,
            p,
            PI * self.lam,
            |big| self.excess(false, big),
            QUAD_TOL,
        )
    }

    /// `int_a^inf alpha^p theta^c`; centered vectors have `q >= lambda_min / 2`.
    fn int_centered(&self, a: f64, p: f64) -> Result<f64> {
        integrate_to_infinity(|al| self.centered(al), a, p, PI * self.lam / 2.0, |big| self.centered(big), QUAD_TOL)
    }
}

fn prefactor(s: f64) -> f64 {
    PI.powf(s / 2.0) / gamma(s / 2.0)
}

/// Alternating Epstein zeta `sum' (-1)^(k+l) |v|^(-s)`, analytically continued for `0 < s <= 2`.
pub fn epstein_pm(l: &LatticeParam, s: f64) -> Result<f64> {
    epstein_pm_split(l, s, EwaldSplit::default())
}

pub fn epstein_pm_split(l: &LatticeParam, s: f64, split: EwaldSplit) -> Result<f64> {
    ensure_positive("s", s)?;
    let eta = split.eta;
    let sums = LatticeSums::new(l)?;
    let upper = sums.int_excess(true, eta, s / 2.0 - 1.0)?;
    let lower = sums.int_centered(1.0 / eta, -s / 2.0)?;
    Ok(prefactor(s) * (upper + lower - 2.0 / s * eta.powf(s / 2.0)))
}

/// Centered Epstein zeta `sum |v + c|^(-s)` over the lattice shifted by its cell centre,
/// continued to `0 < s < 2`; `s = 2` is a pole.
pub fn epstein_c(l: &LatticeParam, s: f64) -> Result<f64> {
    epstein_c_split(l, s, EwaldSplit::default())
}

pub fn epstein_c_split(l: &LatticeParam, s: f64, split: EwaldSplit) -> Result<f64> {
    ensure_positive("s", s)?;
    if (s - 2.0).abs() < 1e-12 {
        return Err(Error::PoleOrDivergent { s });
    }
    let eta = split.eta;
    let sums = LatticeSums::new(l)?;
    if !l.is_reduced() {
        return Err(Error::NotReduced { x: l.x, y: l.y });
    }
    let upper = sums.int_centered(eta, s / 2.0 - 1.0)?;
    let lower = sums.int_excess(true, 1.0 / eta, -s / 2.0)?;
    Ok(prefactor(s) * (upper + lower + 2.0 * eta.powf(s / 2.0 - 1.0) / (s - 2.0)))
}

/// Epstein zeta `sum' |v|^(-s)` for `s > 2`.
pub fn epstein_plain(l: &LatticeParam, s: f64) -> Result<f64> {
    epstein_plain_split(l, s, EwaldSplit::default())
}

pub fn epstein_plain_split(l: &LatticeParam, s: f64, split: EwaldSplit) -> Result<f64> {
    if !(s > 2.0) {
        return Err(Error::PoleOrDivergent { s });
    }
    let eta = split.eta;
    let sums = LatticeSums::new(l)?;
    let upper = sums.int_excess(false, eta, s / 2.0 - 1.0)?;
    let lower = sums.int_excess(false, 1.0 / eta, -s / 2.0)?;
    Ok(prefactor(s) * (upper + lower + 2.0 * eta.powf(s / 2.0 - 1.0) / (s - 2.0) - 2.0 / s * eta.powf(s / 2.0)))
}

/// `sum' (-1)^(k+l) f(|v|^2)`.
pub fn energy_pm(l: &LatticeParam, f: &Potential) -> Result<f64> {
    let sums = LatticeSums::new(l)?;
    match f {
        Potential::InversePower { s } => {
            if !f.is_summable() {
                return Err(Error::NonSummablePotential(format!(
                    "r^(-s/2) with s = {s} needs s > 2; use the continued Epstein zeta instead"
                )));
            }
            epstein_pm(l, *s)
        }
        Potential::Gaussian { t } => sums.excess(true, t / PI),
        Potential::LaplaceMeasure { nodes } => nodes
            .iter()
            .map(|&(t, w)| Ok(w * sums.excess(true, t / PI)?))
            .sum(),
    }
}

/// `sum f(|v + c|^2)` over the lattice shifted by its cell centre.
pub fn energy_c(l: &LatticeParam, f: &Potential) -> Result<f64> {
    let sums = LatticeSums::new(l)?;
    match f {
        Potential::InversePower { s } => {
            if !f.is_summable() {
                return Err(Error::NonSummablePotential(format!("r^(-s/2) with s = {s} needs s > 2")));
            }
            epstein_c(l, *s)
        }
        Potential::Gaussian { t } => sums.centered(t / PI),
        Potential::LaplaceMeasure { nodes } => nodes
            .iter()
            .map(|&(t, w)| Ok(w * sums.centered(t / PI)?))
            .sum(),
    }
}

/// `zeta(p) + zeta^pm(q) / rho` for `p > q > 2`.
pub fn rocksalt_energy(l: &LatticeParam, p: f64, q: f64, rho: f64) -> Result<f64> {
    ensure_positive("rho", rho)?;
    if !(p > q && q > 2.0) {
        return Err(Error::InvalidInput(format!("need p > q > 2, got p = {p}, q = {q}")));
    }
    Ok(epstein_plain(l, p)? + epstein_pm(l, q)? / rho)
}

/// `theta4(t) - 1 = 2 sum_{k>=1} (-1)^k exp(-pi t k^2)`, for `t >= 1/2`.
fn theta4_excess(t: f64) -> f64 {
    let mut acc = KahanSum::new();
    for k in 1..64 {
        let term = (-PI * t * (k * k) as f64).exp();
        acc.add(if k % 2 == 1 { -2.0 * term } else { 2.0 * term });
        if term < 1e-300 {
            break;
        }
    }
    acc.value()
}

/// `sum' (-1)^(m+n+p) (m^2+n^2+p^2)^(-s/2)` over the cubic lattice, Ewald-regularised.
pub fn madelung_nacl3d(s: f64, split: EwaldSplit) -> Result<f64> {
    ensure_positive("s", s)?;
    let eta = split.eta;
    let budget = SeriesBudget::default();
    let cube_excess = |t: f64| -> Result<f64> {
        if t >= 0.5 {
            let d = theta4_excess(t);
            Ok(d * (3.0 + d * (3.0 + d)))
        } else {
            Ok(theta1d::theta4(t, &budget)?.powi(3) - 1.0)
        }
    };
    let theta3_cube_excess = |t: f64| -> Result<f64> { Ok(theta1d::theta3(t, &budget)?.powi(3) - 1.0) };
    let upper = integrate_to_infinity(cube_excess, eta, s / 2.0 - 1.0, PI, theta3_cube_excess, QUAD_TOL)?;
    let t2cube = |t: f64| -> Result<f64> { Ok(theta1d::theta2(t, &budget)?.powi(3)) };
    let lower = integrate_to_infinity(t2cube, 1.0 / eta, (1.0 - s) / 2.0, 3.0 * PI / 4.0, t2cube, QUAD_TOL)?;
    Ok(prefactor(s) * (upper + lower - 2.0 / s * eta.powf(s / 2.0)))
}

/// Upper incomplete gamma `Gamma(a, x)` for real `a` and `x > 0`.
fn upper_gamma(a: f64, x: f64) -> f64 {
    if a > 0.0 && x < 1.0 + a {
        return gamma_ur(a, x) * gamma(a);
    }
    if x >= 1.0 {
        // Continued fraction, modified Lentz.
        let tiny = 1e-300;
        let mut b = x + 1.0 - a;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..500 {
            let an = -(i as f64) * (i as f64 - a);
            b += 2.0;
            d = an * d + b;
            if d.abs() < tiny {
                d = tiny;
            }
            c = b + an / c;
            if c.abs() < tiny {
                c = tiny;
            }
            d = 1.0 / d;
            let del = d * c;
            h *= del;
            if (del - 1.0).abs() < 1e-16 {
                break;
            }
        }
        return (-x + a * x.ln()).exp() * h;
    }
    // x < 1 with a <= 0: step down from a positive order, or from Gamma(0, x) = E1(x).
    let n = (-a).ceil() as i32;
    let top = a + n as f64;
    let mut g = if top.abs() < 1e-14 {
        exp_integral_e1(x)
    } else {
        gamma_ur(top, x) * gamma(top)
    };
    let mut order = top;
    for _ in 0..n {
        let lower_order = order - 1.0;
        // Gamma(a+1, x) = a Gamma(a, x) + x^a e^-x
        g = (g - x.powf(lower_order) * (-x).exp()) / lower_order;
        order = lower_order;
    }
    g
}

/// `E1(x)` for `0 < x < 1` by its power series.
fn exp_integral_e1(x: f64) -> f64 {
    const EULER: f64 = 0.577_215_664_901_532_9;
    let mut sum = 0.0;
    let mut term = 1.0;
    for k in 1..60 {
        term *= -x / k as f64;
        sum -= term / k as f64;
    }
    -EULER - x.ln() + sum
}

/// Independent Ewald evaluation of the alternating (`centered = false`) or
/// centered Epstein zeta by per-vector incomplete Gamma functions.
pub fn epstein_incomplete_gamma(l: &LatticeParam, s: f64, centered: bool, split: EwaldSplit) -> Result<f64> {
    ensure_positive("s", s)?;
    if centered && (s - 2.0).abs() < 1e-12 {
        return Err(Error::PoleOrDivergent { s });
    }
    let q = gram(l)?;
    let lam = lambda_min(&q)?;
    let eta = split.eta;
    let slow = eta.min(1.0 / eta);
    let radius = ((45.0 / (PI * slow * lam * 0.5)).sqrt()).ceil() as i64 + 2;
    let p = s / 2.0;
    let mut direct = KahanSum::new();
    let mut dual = KahanSum::new();
    for k in -radius..=radius {
        for m in -radius..=radius {
            let (kf, mf) = (k as f64, m as f64);
            let sign = if (k + m) & 1 == 0 { 1.0 } else { -1.0 };
            let r_int = q.eval(kf, mf);
            let r_half = q.eval(kf + 0.5, mf + 0.5);
            if centered {
                // direct side: shifted vectors; dual side: alternating vectors
                direct.add((PI * r_half).powf(-p) * upper_gamma(p, PI * r_half * eta));
                if k != 0 || m != 0 {
                    dual.add(sign * (PI * r_int).powf(p - 1.0) * upper_gamma(1.0 - p, PI * r_int / eta));
                }
            } else {
                if k != 0 || m != 0 {
                    direct.add(sign * (PI * r_int).powf(-p) * upper_gamma(p, PI * r_int * eta));
                }
                dual.add((PI * r_half).powf(p - 1.0) * upper_gamma(1.0 - p, PI * r_half / eta));
            }
        }
    }
    let constant = if centered {
        2.0 * eta.powf(p - 1.0) / (s - 2.0)
    } else {
        -2.0 / s * eta.powf(p)
    };
    Ok(prefactor(s) * (direct.value() + dual.value() + constant))
}
