//! Two-dimensional lattice theta functions.
//!
//! Every flavor is a special case of the shifted sum
//! `Theta(xi, eta; alpha) = sum exp(-pi alpha q(k+xi, l+eta))` or the character sum
//! `Theta^(xi, eta; alpha) = sum exp(-pi alpha q(k, l)) cos(2 pi (k eta - l xi))`.
//! The two are exchanged by `alpha -> 1/alpha` (times `1/alpha`), which is how
//! all evaluations with `alpha < 1` are carried out.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_positive, Error, Result};
use crate::lattice::{gram, lambda_min, reduce_to_fundamental, LatticeParam, UnimodularWord, DOMAIN_TOL};
use crate::series::{KahanSum, SeriesBudget};
use crate::theta1d;

/// Which theta function a query asks for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Plain,
    Centered,
    Alternating,
    Shifted,
    Character,
}

impl std::str::FromStr for Flavor {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "plain" => Ok(Flavor::Plain),
            "centered" | "c" => Ok(Flavor::Centered),
            "alternating" | "pm" => Ok(Flavor::Alternating),
            "shifted" => Ok(Flavor::Shifted),
            "character" => Ok(Flavor::Character),
            _ => Err(Error::InvalidInput(format!("unknown flavor {s:?}"))),
        }
    }
}

impl std::fmt::Display for Flavor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Flavor::Plain => "plain",
            Flavor::Centered => "centered",
            Flavor::Alternating => "alternating",
            Flavor::Shifted => "shifted",
            Flavor::Character => "character",
        })
    }
}

/// Direction of a parameter derivative.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

/// Series actually summed, after normalising the shift.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Kind {
    Plain,
    Centered,
    Alternating,
    Shift(f64, f64),
    Char(f64, f64),
}

fn centre(v: f64) -> f64 {
    v - v.round()
}

impl Kind {
    fn new(shifted: bool, xi: f64, eta: f64) -> Result<Kind> {
        if !(xi.is_finite() && eta.is_finite()) {
            return Err(Error::InvalidInput("shift must be finite".into()));
        }
        let (xi, eta) = (xi.rem_euclid(1.0), eta.rem_euclid(1.0));
        Ok(match (xi, eta, shifted) {
            (0.0, 0.0, _) => Kind::Plain,
            (0.5, 0.5, true) => Kind::Centered,
            (0.5, 0.5, false) => Kind::Alternating,
            (_, _, true) => Kind::Shift(centre(xi), centre(eta)),
            (_, _, false) => Kind::Char(centre(xi), centre(eta)),
        })
    }

    fn dual(self) -> Kind {
        match self {
            Kind::Plain => Kind::Plain,
            Kind::Centered => Kind::Alternating,
            Kind::Alternating => Kind::Centered,
            Kind::Shift(a, b) => Kind::Char(a, b),
            Kind::Char(a, b) => Kind::Shift(a, b),
        }
    }

    fn offsets(self) -> (f64, f64) {
        match self {
            Kind::Centered => (0.5, 0.5),
            Kind::Shift(a, b) => (a, b),
            _ => (0.0, 0.0),
        }
    }
}

/// A value together with the box radius `K` (indices `|k|, |l| <= K`) summed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesValue {
    pub value: f64,
    pub radius: usize,
}

/// Bound on `sum exp(-c (u^2+v^2))` over a shifted grid outside the box
/// `max(|u|, |v|) < m0`.
fn box_tail(c: f64, m0: f64) -> f64 {
    let ratio = (-c * (2.0 * m0 + 1.0)).exp();
    if ratio >= 1.0 {
        return f64::INFINITY;
    }
    let one_dim = 2.0 * (-c * m0 * m0).exp() / (1.0 - ratio);
    let full = 2.0 + (PI / c).sqrt();
    2.0 * one_dim * full
}

struct Engine {
    x: f64,
    y: f64,
    a: f64,
    b: f64,
    c: f64,
    lam: f64,
}

impl Engine {
    fn new(l: &LatticeParam) -> Result<Engine> {
        let q = gram(l)?;
        Ok(Engine {
            x: l.x,
            y: l.y,
            a: q.a,
            b: q.b,
            c: q.c,
            lam: lambda_min(&q)?,
        })
    }

    /// Sum at `alpha >= 1`; `deriv` selects a term-wise x or y derivative.
    fn direct(
        &self,
        kind: Kind,
        alpha: f64,
        deriv: Option<Axis>,
        skip_origin: bool,
        budget: &SeriesBudget,
    ) -> Result<SeriesValue> {
        let (du, dv) = kind.offsets();
        let (x, y) = (self.x, self.y);
        let term = |k: i64, l: i64| -> f64 {
            let (u, v) = (k as f64 + du, l as f64 + dv);
            let q = self.a * u * u + self.b * u * v + self.c * v * v;
            let g = (-PI * alpha * q).exp();
            let w = match kind {
                Kind::Alternating => {
                    if (k + l) & 1 == 0 {
                        1.0
                    } else {
                        -1.0
                    }
                }
                Kind::Char(xi, eta) => (2.0 * PI * (u * eta - v * xi)).cos(),
                _ => 1.0,
            };
            let dq = match deriv {
                None => return w * g,
                Some(Axis::X) => 2.0 * v * (u + x * v) / y,
                Some(Axis::Y) => v * v - (u + x * v).powi(2) / (y * y),
            };
            -PI * alpha * dq * w * g
        };

        let mut lead = 0.0f64;
        for k in -1..=1 {
            for l in -1..=1 {
                if skip_origin && k == 0 && l == 0 {
                    continue;
                }
                lead = lead.max(term(k, l).abs());
            }
        }
        let lead = if lead > 0.0 { lead } else { f64::MIN_POSITIVE };
        let target = budget.rel_tol * lead;

        let cexp = PI * alpha * self.lam;
        let tail = |radius: usize| -> f64 {
            let m0 = radius as f64 + 0.5;
            match deriv {
                None => box_tail(cexp, m0),
                Some(axis) => {
                    let ax = 1.0 + x.abs();
                    let cq = match axis {
                        Axis::X => 2.0 * ax / y,
                        Axis::Y => 1.0 + ax * ax / (y * y),
                    };
                    PI * alpha * cq * 2.0 / (std::f64::consts::E * cexp) * box_tail(cexp / 2.0, m0)
                }
            }
        };

        let mut radius = 1usize;
        while tail(radius) > target {
            radius += 1;
            let n = (2 * radius + 1) * (2 * radius + 1);
            if n > budget.max_terms {
                return Err(Error::BudgetExceeded {
                    max_terms: budget.max_terms,
                });
            }
        }

        let r = radius as i64;
        let mut acc = KahanSum::new();
        for l in -r..=r {
            for k in -r..=r {
                if skip_origin && k == 0 && l == 0 {
                    continue;
                }
                acc.add(term(k, l));
            }
        }
        Ok(SeriesValue {
            value: acc.value(),
            radius,
        })
    }

    fn eval(&self, kind: Kind, alpha: f64, deriv: Option<Axis>, budget: &SeriesBudget) -> Result<SeriesValue> {
        if alpha >= 1.0 {
            self.direct(kind, alpha, deriv, false, budget)
        } else {
            let inv = 1.0 / alpha;
            let mut sv = self.direct(kind.dual(), inv, deriv, false, budget)?;
            sv.value *= inv;
            Ok(sv)
        }
    }
}

fn run(l: &LatticeParam, kind: Kind, alpha: f64, deriv: Option<Axis>, budget: &SeriesBudget) -> Result<SeriesValue> {
    ensure_positive("alpha", alpha)?;
    ensure_positive("y", l.y)?;
    Engine::new(l)?.eval(kind, alpha, deriv, budget)
}

fn require_reduced(l: &LatticeParam) -> Result<()> {
    if l.is_reduced() {
        Ok(())
    } else {
        Err(Error::NotReduced { x: l.x, y: l.y })
    }
}

/// `theta(alpha) = sum exp(-pi alpha q(k,l))`.
pub fn theta_plain(l: &LatticeParam, alpha: f64, budget: &SeriesBudget) -> Result<f64> {
    Ok(run(l, Kind::Plain, alpha, None, budget)?.value)
}

/// Sum over the lattice translated by the cell centre. Requires a reduced parameter.
pub fn theta_centered(l: &LatticeParam, alpha: f64, budget: &SeriesBudget) -> Result<f64> {
    require_reduced(l)?;
    Ok(run(l, Kind::Centered, alpha, None, budget)?.value)
}

/// Sum with alternating signs `(-1)^(k+l)` in the given basis.
pub fn theta_alternating(l: &LatticeParam, alpha: f64, budget: &SeriesBudget) -> Result<f64> {
    Ok(run(l, Kind::Alternating, alpha, None, budget)?.value)
}

pub fn theta_shifted(l: &LatticeParam, xi: f64, eta: f64, alpha: f64, budget: &SeriesBudget) -> Result<f64> {
    Ok(run(l, Kind::new(true, xi, eta)?, alpha, None, budget)?.value)
}

pub fn theta_character(l: &LatticeParam, xi: f64, eta: f64, alpha: f64, budget: &SeriesBudget) -> Result<f64> {
    Ok(run(l, Kind::new(false, xi, eta)?, alpha, None, budget)?.value)
}

/// `sum' exp(-pi alpha q)` (origin removed) for `alpha >= 1`, without the
/// cancellation of `theta - 1`. `alternating` selects the signed sum.
pub(crate) fn theta_excess(l: &LatticeParam, alternating: bool, alpha: f64, budget: &SeriesBudget) -> Result<f64> {
    debug_assert!(alpha >= 1.0);
    let kind = if alternating { Kind::Alternating } else { Kind::Plain };
    Ok(Engine::new(l)?.direct(kind, alpha, None, true, budget)?.value)
}

/// Term-wise derivative along `axis` of the plain, centered or alternating
/// series, with no domain restriction.
pub fn theta_derivative(
    flavor: Flavor,
    l: &LatticeParam,
    alpha: f64,
    axis: Axis,
    budget: &SeriesBudget,
) -> Result<f64> {
    let kind = match flavor {
        Flavor::Plain => Kind::Plain,
        Flavor::Centered => Kind::Centered,
        Flavor::Alternating => Kind::Alternating,
        other => {
            return Err(Error::InvalidInput(format!(
                "derivatives are provided for plain, centered and alternating, not {other}"
            )))
        }
    };
    Ok(run(l, kind, alpha, Some(axis), budget)?.value)
}

fn guard_half_strip(l: &LatticeParam) -> Result<()> {
    let ok = l.x >= -DOMAIN_TOL && l.x <= 0.5 + DOMAIN_TOL && l.y >= std::f64::consts::FRAC_1_SQRT_2 - DOMAIN_TOL;
    if ok {
        Ok(())
    } else {
        Err(Error::DomainViolation { x: l.x, y: l.y })
    }
}

fn guard_edge(l: &LatticeParam) -> Result<()> {
    guard_half_strip(l)?;
    if (l.x - 0.5).abs() > DOMAIN_TOL {
        return Err(Error::DomainViolation { x: l.x, y: l.y });
    }
    Ok(())
}

/// x-derivative of the centered theta on `x in [0, 1/2], y >= 1/sqrt 2`.
pub fn dtheta_c_dx(l: &LatticeParam, alpha: f64, budget: &SeriesBudget) -> Result<f64> {
    guard_half_strip(l)?;
    theta_derivative(Flavor::Centered, l, alpha, Axis::X, budget)
}

/// x-derivative of the alternating theta on `x in [0, 1/2], y >= 1/sqrt 2`.
pub fn dtheta_pm_dx(l: &LatticeParam, alpha: f64, budget: &SeriesBudget) -> Result<f64> {
    guard_half_strip(l)?;
    theta_derivative(Flavor::Alternating, l, alpha, Axis::X, budget)
}

/// y-derivative of `1/2 theta2(alpha y) theta2(alpha / 4y)`.
pub fn dtheta_c_factorized_dy(y: f64, alpha: f64, budget: &SeriesBudget) -> Result<f64> {
    ensure_positive("y", y)?;
    ensure_positive("alpha", alpha)?;
    let (t1, t2) = (alpha * y, alpha / (4.0 * y));
    let (f1, f2) = (theta1d::theta2(t1, budget)?, theta1d::theta2(t2, budget)?);
    let (d1, d2) = (theta1d::theta2_dt(t1, budget)?, theta1d::theta2_dt(t2, budget)?);
    Ok(0.5 * (alpha * d1 * f2 - f1 * d2 * alpha / (4.0 * y * y)))
}

/// y-derivative of the centered theta on the edge `x = 1/2`.
pub fn dtheta_c_dy(l: &LatticeParam, alpha: f64, budget: &SeriesBudget) -> Result<f64> {
    guard_edge(l)?;
    dtheta_c_factorized_dy(l.y, alpha, budget)
}

/// y-derivative of the alternating theta on the edge `x = 1/2`.
pub fn dtheta_pm_dy(l: &LatticeParam, alpha: f64, budget: &SeriesBudget) -> Result<f64> {
    guard_edge(l)?;
    ensure_positive("alpha", alpha)?;
    Ok(dtheta_c_factorized_dy(l.y, 1.0 / alpha, budget)? / alpha)
}

/// Centered theta of the lattice `(1/2, y)` as `1/2 theta2(alpha y) theta2(alpha / 4y)`.
pub fn theta_c_factorized(y: f64, alpha: f64, budget: &SeriesBudget) -> Result<f64> {
    ensure_positive("y", y)?;
    ensure_positive("alpha", alpha)?;
    Ok(0.5 * theta1d::theta2(alpha * y, budget)? * theta1d::theta2(alpha / (4.0 * y), budget)?)
}

/// A full theta request.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThetaQuery {
    pub lattice: LatticeParam,
    pub alpha: f64,
    pub shift: (f64, f64),
    pub flavor: Flavor,
    /// Reduce plain and alternating inputs first. Centered inputs are always reduced.
    pub reduce: bool,
}

impl ThetaQuery {
    pub fn new(flavor: Flavor, lattice: LatticeParam, alpha: f64) -> Self {
        let shift = match flavor {
            Flavor::Centered | Flavor::Alternating => (0.5, 0.5),
            _ => (0.0, 0.0),
        };
        ThetaQuery {
            lattice,
            alpha,
            shift,
            flavor,
            reduce: true,
        }
    }

    pub fn with_shift(mut self, xi: f64, eta: f64) -> Self {
        self.shift = (xi, eta);
        self
    }
}

/// Result of [`evaluate`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThetaReport {
    pub value: f64,
    pub radius: usize,
    /// Parameter the series was summed for.
    pub lattice: LatticeParam,
    /// Set when the input was moved into the fundamental domain.
    pub reduced: bool,
    pub word: UnimodularWord,
}

/// Evaluates a query, moving the parameter into the fundamental domain where
/// the flavor depends on the basis. Shifted and character sums are evaluated
/// in the given basis since their shift is expressed in it.
pub fn evaluate(query: &ThetaQuery, budget: &SeriesBudget) -> Result<ThetaReport> {
    let l = LatticeParam::new(query.lattice.x, query.lattice.y)?;
    let wants_reduction = match query.flavor {
        Flavor::Centered => true,
        Flavor::Plain | Flavor::Alternating => query.reduce,
        Flavor::Shifted | Flavor::Character => false,
    };
    let (param, word) = if wants_reduction && !l.is_reduced() {
        reduce_to_fundamental(&l)?
    } else {
        (l, UnimodularWord::default())
    };
    let kind = match query.flavor {
        Flavor::Plain => Kind::Plain,
        Flavor::Centered => Kind::Centered,
        Flavor::Alternating => Kind::Alternating,
        Flavor::Shifted => Kind::new(true, query.shift.0, query.shift.1)?,
        Flavor::Character => Kind::new(false, query.shift.0, query.shift.1)?,
    };
    let sv = run(&param, kind, query.alpha, None, budget)?;
    Ok(ThetaReport {
        value: sv.value,
        radius: sv.radius,
        lattice: param,
        reduced: !word.is_empty(),
        word,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theta1d::{theta2, theta3, theta4};

    fn b() -> SeriesBudget {
        SeriesBudget::default()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn square_lattice_separates() {
        let sq = LatticeParam::square();
        for alpha in [0.3, 1.0, 2.5] {
            let t3 = theta3(alpha, &b()).unwrap();
            let t4 = theta4(alpha, &b()).unwrap();
            let t2 = theta2(alpha, &b()).unwrap();
            assert!(rel(theta_plain(&sq, alpha, &b()).unwrap(), t3 * t3) < 1e-13);
            assert!(rel(theta_alternating(&sq, alpha, &b()).unwrap(), t4 * t4) < 1e-13);
            assert!(rel(theta_centered(&sq, alpha, &b()).unwrap(), t2 * t2) < 1e-13);
        }
    }

    #[test]
    fn specialisations_are_bit_identical() {
        let l = LatticeParam::new(0.21, 1.3).unwrap();
        for alpha in [0.4, 1.0, 3.0] {
            assert_eq!(
                theta_shifted(&l, 0.0, 0.0, alpha, &b()).unwrap(),
                theta_plain(&l, alpha, &b()).unwrap()
            );
            assert_eq!(
                theta_character(&l, 0.0, 0.0, alpha, &b()).unwrap(),
                theta_plain(&l, alpha, &b()).unwrap()
            );
            assert_eq!(
                theta_character(&l, 0.5, 0.5, alpha, &b()).unwrap(),
                theta_alternating(&l, alpha, &b()).unwrap()
            );
            assert_eq!(
                theta_shifted(&l, 0.5, 0.5, alpha, &b()).unwrap(),
                theta_centered(&l, alpha, &b()).unwrap()
            );
        }
    }

    #[test]
    fn shift_is_periodic() {
        let l = LatticeParam::new(0.1, 1.2).unwrap();
        let a = theta_shifted(&l, 0.3, -0.2, 1.7, &b()).unwrap();
        let c = theta_shifted(&l, 1.3, 0.8, 1.7, &b()).unwrap();
        assert!(rel(a, c) < 1e-13);
    }

    #[test]
    fn centered_needs_reduced_basis() {
        let l = LatticeParam::new(0.0, 0.5).unwrap();
        assert!(matches!(theta_centered(&l, 1.0, &b()), Err(Error::NotReduced { .. })));
        let rep = evaluate(&ThetaQuery::new(Flavor::Centered, l, 1.0), &b()).unwrap();
        assert!(rep.reduced);
        let direct = theta_centered(&LatticeParam::new(0.0, 2.0).unwrap(), 1.0, &b()).unwrap();
        assert!(rel(rep.value, direct) < 1e-14);
    }

    #[test]
    fn hexagonal_factorises() {
        let h = LatticeParam::hexagonal();
        let lhs = theta_centered(&h, 1.0, &b()).unwrap();
        let rhs = theta_c_factorized(h.y, 1.0, &b()).unwrap();
        assert!(rel(lhs, rhs) < 1e-13);
    }

    #[test]
    fn derivative_vanishes_on_symmetry_axis() {
        let l = LatticeParam::new(0.0, 1.3).unwrap();
        assert!(dtheta_c_dx(&l, 1.0, &b()).unwrap().abs() < 1e-14);
        assert!(dtheta_c_dx(&LatticeParam::new(0.25, 1.0).unwrap(), 1.0, &b()).unwrap() > 0.0);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let (x, y, alpha) = (0.3, 1.1, 2.0);
        let h = 1e-6;
        let l = LatticeParam::new(x, y).unwrap();
        for flavor in [Flavor::Plain, Flavor::Centered, Flavor::Alternating] {
            for axis in [Axis::X, Axis::Y] {
                let (lp, lm) = match axis {
                    Axis::X => (LatticeParam::new(x + h, y).unwrap(), LatticeParam::new(x - h, y).unwrap()),
                    Axis::Y => (LatticeParam::new(x, y + h).unwrap(), LatticeParam::new(x, y - h).unwrap()),
                };
                let f = |p: &LatticeParam| run(p, match flavor {
                    Flavor::Plain => Kind::Plain,
                    Flavor::Centered => Kind::Centered,
                    _ => Kind::Alternating,
                }, alpha, None, &b()).unwrap().value;
                let fd = (f(&lp) - f(&lm)) / (2.0 * h);
                let an = theta_derivative(flavor, &l, alpha, axis, &b()).unwrap();
                assert!((an - fd).abs() <= 1e-6 * an.abs().max(1e-3), "{flavor:?} {axis:?}: {an} vs {fd}");
            }
        }
    }

    #[test]
    fn edge_y_derivatives_agree_with_series() {
        let l = LatticeParam::new(0.5, 1.2).unwrap();
        for alpha in [0.5, 1.0, 2.0] {
            let fac = dtheta_c_dy(&l, alpha, &b()).unwrap();
            let ser = theta_derivative(Flavor::Centered, &l, alpha, Axis::Y, &b()).unwrap();
            assert!(rel(fac, ser) < 1e-10, "{fac} {ser}");
            let fac = dtheta_pm_dy(&l, alpha, &b()).unwrap();
            let ser = theta_derivative(Flavor::Alternating, &l, alpha, Axis::Y, &b()).unwrap();
            assert!(rel(fac, ser) < 1e-10, "{fac} {ser}");
        }
        assert!(dtheta_c_dy(&LatticeParam::new(0.4, 1.2).unwrap(), 1.0, &b()).is_err());
        assert!(dtheta_c_factorized_dy(0.5, 1.0, &b()).unwrap().abs() < 1e-14);
    }

    #[test]
    fn excess_matches_difference() {
        let l = LatticeParam::new(0.2, 1.4).unwrap();
        let e = theta_excess(&l, true, 1.5, &b()).unwrap();
        let t = theta_alternating(&l, 1.5, &b()).unwrap();
        assert!((e - (t - 1.0)).abs() < 1e-15);
    }
}
