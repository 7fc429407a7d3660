//! Unit-covolume planar lattices indexed by the upper half-plane.
//!
//! A point `tau = x + iy` stands for the lattice generated by
//! `y^(-1/2) [[1, x], [0, y]]`, modulo rotations. Its Gram form is
//! `q(k, l) = (k^2 + 2xkl + (x^2+y^2) l^2) / y`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_positive, Error, Result};

/// Tolerance used for membership in the fundamental domain.
pub const DOMAIN_TOL: f64 = 1e-12;

/// A point `x + iy` of the upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticeParam {
    pub x: f64,
    pub y: f64,
}

impl LatticeParam {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !x.is_finite() {
            return Err(Error::InvalidInput(format!("x must be finite, got {x}")));
        }
        ensure_positive("y", y)?;
        Ok(LatticeParam { x, y })
    }

    /// `(1/2, sqrt(3)/2)`.
    pub fn hexagonal() -> Self {
        LatticeParam {
            x: 0.5,
            y: 3f64.sqrt() / 2.0,
        }
    }

    /// `(0, 1)`.
    pub fn square() -> Self {
        LatticeParam { x: 0.0, y: 1.0 }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    /// Membership in `D = {|x| <= 1/2, x^2 + y^2 >= 1}` up to [`DOMAIN_TOL`].
    pub fn is_reduced(&self) -> bool {
        self.x.abs() <= 0.5 + DOMAIN_TOL && self.norm_sqr() >= 1.0 - DOMAIN_TOL
    }

    /// Basis vectors `v1 = (1, 0)/sqrt(y)`, `v2 = (x, y)/sqrt(y)`.
    pub fn basis(&self) -> [[f64; 2]; 2] {
        let s = self.y.sqrt().recip();
        [[s, 0.0], [self.x * s, self.y * s]]
    }

    /// Parameter of the lattice spanned by `u1, u2`, rescaled to unit covolume.
    pub fn from_basis(u1: [f64; 2], u2: [f64; 2]) -> Result<Self> {
        // tau = u2 / u1 as complex numbers, oriented into the upper half-plane.
        let den = u1[0] * u1[0] + u1[1] * u1[1];
        if den == 0.0 {
            return Err(Error::DegenerateInput("zero basis vector".into()));
        }
        let re = (u2[0] * u1[0] + u2[1] * u1[1]) / den;
        let im = (u2[1] * u1[0] - u2[0] * u1[1]) / den;
        if im == 0.0 || !im.is_finite() {
            return Err(Error::DegenerateInput("collinear basis vectors".into()));
        }
        if im > 0.0 {
            LatticeParam::new(re, im)
        } else {
            // swapping orientation (u1, u2) -> (u1, -u2)
            LatticeParam::new(-re, -im)
        }
    }

    fn apply(&self, letter: Letter) -> LatticeParam {
        match letter {
            Letter::T => LatticeParam {
                x: self.x + 1.0,
                y: self.y,
            },
            Letter::TInv => LatticeParam {
                x: self.x - 1.0,
                y: self.y,
            },
            Letter::S => {
                let n = self.norm_sqr();
                LatticeParam {
                    x: -self.x / n,
                    y: self.y / n,
                }
            }
        }
    }
}

impl fmt::Display for LatticeParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.x.is_sign_negative() {
            write!(f, "-{}+{}i", -self.x, self.y)
        } else {
            write!(f, "{}+{}i", self.x, self.y)
        }
    }
}

impl FromStr for LatticeParam {
    type Err = Error;

    /// Parses `"x+yi"` (also `"x-yi"` is rejected since y must be positive).
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("expected \"x+yi\", got {s:?}"));
        let body = s.trim().strip_suffix('i').ok_or_else(bad)?;
        // split at the last '+' or '-' that is not a leading sign or exponent sign
        let bytes = body.as_bytes();
        let mut split = None;
        for i in (1..bytes.len()).rev() {
            let c = bytes[i];
            if (c == b'+' || c == b'-') && !matches!(bytes[i - 1], b'e' | b'E') {
                split = Some(i);
                break;
            }
        }
        let i = split.ok_or_else(bad)?;
        let x: f64 = body[..i].trim().parse().map_err(|_| bad())?;
        let y: f64 = body[i..].trim().replace('+', "").parse().map_err(|_| bad())?;
        LatticeParam::new(x, y)
    }
}

/// Coefficients of `q(k, l) = a k^2 + b k l + c l^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadraticForm {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl QuadraticForm {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        let q = QuadraticForm { a, b, c };
        if a > 0.0 && q.determinant() > 0.0 {
            Ok(q)
        } else {
            Err(Error::NotPositiveDefinite { a, b, c })
        }
    }

    #[inline]
    pub fn eval(&self, k: f64, l: f64) -> f64 {
        self.a * k * k + self.b * k * l + self.c * l * l
    }

    /// `b^2/4 - ac`; equals -1 for unit-covolume Gram forms.
    pub fn discriminant(&self) -> f64 {
        self.b * self.b / 4.0 - self.a * self.c
    }

    pub fn determinant(&self) -> f64 {
        -self.discriminant()
    }
}

/// Gram form of the lattice with parameter `l`.
pub fn gram(l: &LatticeParam) -> Result<QuadraticForm> {
    ensure_positive("y", l.y)?;
    let inv = 1.0 / l.y;
    Ok(QuadraticForm {
        a: inv,
        b: 2.0 * l.x * inv,
        c: l.norm_sqr() * inv,
    })
}

/// Smallest eigenvalue of the Gram matrix, so `q(k,l) >= lambda_min (k^2 + l^2)`.
pub fn lambda_min(q: &QuadraticForm) -> Result<f64> {
    if !(q.a > 0.0 && q.determinant() > 0.0) {
        return Err(Error::NotPositiveDefinite {
            a: q.a,
            b: q.b,
            c: q.c,
        });
    }
    let mean = 0.5 * (q.a + q.c);
    let half_diff = 0.5 * (q.a - q.c);
    let rad = (half_diff * half_diff + q.b * q.b / 4.0).sqrt();
    // product of eigenvalues is the determinant; avoid cancellation in mean - rad
    Ok(q.determinant() / (mean + rad))
}

/// Generators of the modular group acting by `S tau = -1/tau`, `T tau = tau + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Letter {
    S,
    T,
    #[serde(rename = "T^-1")]
    TInv,
}

impl Letter {
    pub fn matrix(self) -> [[i64; 2]; 2] {
        match self {
            Letter::S => [[0, 1], [-1, 0]],
            Letter::T => [[1, 1], [0, 1]],
            Letter::TInv => [[1, -1], [0, 1]],
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Letter::S => "S",
            Letter::T => "T",
            Letter::TInv => "T^-1",
        })
    }
}

fn matmul(a: [[i64; 2]; 2], b: [[i64; 2]; 2]) -> [[i64; 2]; 2] {
    [
        [
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
        ],
        [
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        ],
    ]
}

/// Word in `S, T, T^-1` applied left to right; `matrix` is the product
/// `w_n ... w_1` so that `output = matrix . input` as a Moebius map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnimodularWord {
    pub letters: Vec<Letter>,
    pub matrix: [[i64; 2]; 2],
}

impl Default for UnimodularWord {
    fn default() -> Self {
        UnimodularWord {
            letters: Vec::new(),
            matrix: [[1, 0], [0, 1]],
        }
    }
}

impl UnimodularWord {
    pub fn push(&mut self, letter: Letter) {
        self.letters.push(letter);
        self.matrix = matmul(letter.matrix(), self.matrix);
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn determinant(&self) -> i64 {
        let m = self.matrix;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    /// Moebius action `(a tau + b) / (c tau + d)`.
    pub fn act(&self, tau: &LatticeParam) -> LatticeParam {
        let [[a, b], [c, d]] = self.matrix;
        let (a, b, c, d) = (a as f64, b as f64, c as f64, d as f64);
        // (a tau + b)(c conj(tau) + d) / |c tau + d|^2
        let (x, y) = (tau.x, tau.y);
        let den = (c * x + d).powi(2) + (c * y).powi(2);
        let re = ((a * x + b) * (c * x + d) + a * c * y * y) / den;
        let im = (a * d - b * c) * y / den;
        LatticeParam { x: re, y: im }
    }
}

impl fmt::Display for UnimodularWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("(empty)");
        }
        let parts: Vec<String> = self.letters.iter().map(|l| l.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

/// Maps `tau` into the fundamental domain by alternating translations and
/// inversions. Boundary ties are resolved toward `x >= 0`.
pub fn reduce_to_fundamental(tau: &LatticeParam) -> Result<(LatticeParam, UnimodularWord)> {
    ensure_positive("y", tau.y)?;
    let mut cur = *tau;
    let mut word = UnimodularWord::default();
    let step = |cur: &mut LatticeParam, word: &mut UnimodularWord, letter: Letter| {
        *cur = cur.apply(letter);
        word.push(letter);
    };

    // Each inversion strictly increases y, so this terminates; the cap only
    // protects against non-finite input.
    for _ in 0..10_000 {
        if cur.x.abs() > 0.5 + DOMAIN_TOL {
            let n = cur.x.round() as i64;
            let letter = if n > 0 { Letter::TInv } else { Letter::T };
            for _ in 0..n.unsigned_abs() {
                step(&mut cur, &mut word, letter);
            }
        }
        if cur.norm_sqr() < 1.0 - DOMAIN_TOL {
            step(&mut cur, &mut word, Letter::S);
        } else {
            break;
        }
    }

    if cur.x < -0.5 + DOMAIN_TOL {
        step(&mut cur, &mut word, Letter::T);
    }
    if cur.x < 0.0 && cur.norm_sqr() < 1.0 + DOMAIN_TOL {
        step(&mut cur, &mut word, Letter::S);
    }
    Ok((cur, word))
}

/// Reduced parameter of the dual lattice `S^(-T) Z^2`.
pub fn dual(l: &LatticeParam) -> Result<LatticeParam> {
    ensure_positive("y", l.y)?;
    let s = l.y.sqrt().recip();
    // columns of S^{-T} = y^{-1/2} [[y, 0], [-x, 1]]
    let u1 = [l.y * s, -l.x * s];
    let u2 = [0.0, s];
    let p = LatticeParam::from_basis(u1, u2)?;
    Ok(reduce_to_fundamental(&p)?.0)
}

/// Checks that the adjoint lattice `J S^(-T) J^(-1) Z^2` coincides with `S Z^2`,
/// i.e. `S^(-1) J S^(-T) J^(-1)` is an integer matrix of determinant one.
pub fn adjoint_is_self(l: &LatticeParam) -> Result<bool> {
    ensure_positive("y", l.y)?;
    let [v1, v2] = l.basis();
    let s = [[v1[0], v2[0]], [v1[1], v2[1]]];
    let det = s[0][0] * s[1][1] - s[0][1] * s[1][0];
    let inv = [
        [s[1][1] / det, -s[0][1] / det],
        [-s[1][0] / det, s[0][0] / det],
    ];
    let inv_t = [[inv[0][0], inv[1][0]], [inv[0][1], inv[1][1]]];
    let j = [[0.0, 1.0], [-1.0, 0.0]];
    let j_inv = [[0.0, -1.0], [1.0, 0.0]];
    let mul = |a: [[f64; 2]; 2], b: [[f64; 2]; 2]| {
        let mut r = [[0.0; 2]; 2];
        for i in 0..2 {
            for k in 0..2 {
                r[i][k] = a[i][0] * b[0][k] + a[i][1] * b[1][k];
            }
        }
        r
    };
    let adj = mul(mul(j, inv_t), j_inv);
    let change = mul(inv, adj);
    let integral = change
        .iter()
        .flatten()
        .all(|v| (v - v.round()).abs() < 1e-9);
    let cdet = change[0][0] * change[1][1] - change[0][1] * change[1][0];
    Ok(integral && (cdet - 1.0).abs() < 1e-9)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gram_examples() {
        let q = gram(&LatticeParam::square()).unwrap();
        assert_eq!((q.a, q.b, q.c), (1.0, 0.0, 1.0));
        let h = gram(&LatticeParam::hexagonal()).unwrap();
        let w = 2.0 / 3f64.sqrt();
        for v in [h.a, h.b, h.c] {
            assert!((v - w).abs() < 1e-15);
        }
        let r = gram(&LatticeParam::new(0.0, 2.0).unwrap()).unwrap();
        assert_eq!((r.a, r.b, r.c), (0.5, 0.0, 2.0));
        assert!((h.discriminant() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn lambda_min_examples() {
        let q = QuadraticForm::new(1.0, 0.0, 1.0).unwrap();
        assert!((lambda_min(&q).unwrap() - 1.0).abs() < 1e-15);
        let h = gram(&LatticeParam::hexagonal()).unwrap();
        assert!((lambda_min(&h).unwrap() - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        assert!(lambda_min(&QuadraticForm { a: 1.0, b: 3.0, c: 1.0 }).is_err());
    }

    #[test]
    fn reduce_translation() {
        let (r, w) = reduce_to_fundamental(&LatticeParam::new(1.0, 1.0).unwrap()).unwrap();
        assert_eq!(w.letters, vec![Letter::TInv]);
        assert!((r.x - 0.0).abs() < 1e-15 && (r.y - 1.0).abs() < 1e-15);
    }

    #[test]
    fn reduce_fixed_points() {
        for p in [LatticeParam::hexagonal(), LatticeParam::square()] {
            let (r, w) = reduce_to_fundamental(&p).unwrap();
            assert!(w.is_empty());
            assert_eq!(r, p);
        }
    }

    #[test]
    fn boundary_ties_go_right() {
        let (r, _) = reduce_to_fundamental(&LatticeParam::new(-0.5, 1.3).unwrap()).unwrap();
        assert!((r.x - 0.5).abs() < 1e-15);
        let th = 2.0f64;
        let p = LatticeParam::new(th.cos(), th.sin()).unwrap();
        let (r, _) = reduce_to_fundamental(&p).unwrap();
        assert!(r.x >= 0.0 && (r.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn parse_and_format() {
        let p: LatticeParam = "0.5+0.8660254i".parse().unwrap();
        assert_eq!(p.x, 0.5);
        assert_eq!(p.y, 0.8660254);
        let p: LatticeParam = "-1.5e-1+2i".parse().unwrap();
        assert_eq!(p.x, -0.15);
        let back: LatticeParam = p.to_string().parse().unwrap();
        assert_eq!(back, p);
        assert!("0.5-1i".parse::<LatticeParam>().is_err());
        assert!("abc".parse::<LatticeParam>().is_err());
        let js = serde_json::to_string(&LatticeParam::square()).unwrap();
        assert_eq!(js, r#"{"x":0.0,"y":1.0}"#);
    }

    #[test]
    fn self_dual_examples() {
        let d = dual(&LatticeParam::square()).unwrap();
        assert!((d.x).abs() < 1e-12 && (d.y - 1.0).abs() < 1e-12);
        let d = dual(&LatticeParam::hexagonal()).unwrap();
        let h = LatticeParam::hexagonal();
        assert!((d.x - h.x).abs() < 1e-12 && (d.y - h.y).abs() < 1e-12);
        assert!(adjoint_is_self(&LatticeParam::new(0.3, 0.4).unwrap()).unwrap());
    }
}
