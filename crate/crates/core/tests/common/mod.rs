//! Independent reference implementations for the integration tests:
//! double-double arithmetic and brute-force lattice sums.
#![allow(dead_code)]

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Unevaluated sum `hi + lo` with about 32 significant digits.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

pub const PI: Dd = Dd {
    hi: 3.141592653589793,
    lo: 1.2246467991473532e-16,
};
pub const LN2: Dd = Dd {
    hi: 0.6931471805599453,
    lo: 2.3190468138462996e-17,
};

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    pub fn from(v: f64) -> Dd {
        Dd { hi: v, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> Dd {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    pub fn sqrt(self) -> Dd {
        let x = Dd::from(self.hi.sqrt());
        // one Newton step doubles the precision
        x + (self - x * x) / (x * 2.0)
    }

    pub fn powi(self, n: u32) -> Dd {
        let mut r = Dd::ONE;
        for _ in 0..n {
            r = r * self;
        }
        r
    }

    /// `exp(self)` by reduction `x = k ln 2 + r`, `r / 1024`, Taylor, then squaring.
    pub fn exp(self) -> Dd {
        if self.hi < -745.0 {
            return Dd::ZERO;
        }
        let k = (self.hi / LN2.hi).round();
        let r = (self - LN2 * k) / 1024.0;
        let mut term = Dd::ONE;
        let mut sum = Dd::ONE;
        for i in 1..25 {
            term = term * r / i as f64;
            sum = sum + term;
            if term.hi.abs() < 1e-36 {
                break;
            }
        }
        for _ in 0..10 {
            sum = sum * sum;
        }
        let scale = 2f64.powi(k as i32);
        Dd {
            hi: sum.hi * scale,
            lo: sum.lo * scale,
        }
    }

    /// `cos(2 pi f)` for an exactly representable fraction `f`.
    pub fn cos_2pi(f: f64) -> Dd {
        let mut f = f - f.floor();
        let mut sign = 1.0;
        if f > 0.5 {
            f = 1.0 - f;
        }
        if f > 0.25 {
            f = 0.5 - f;
            sign = -1.0;
        }
        // angle in [0, pi/2]
        let x = PI * (2.0 * f);
        let x2 = x * x;
        let mut term = Dd::ONE;
        let mut sum = Dd::ONE;
        for i in 1..30 {
            term = -(term * x2) / ((2 * i - 1) * (2 * i)) as f64;
            sum = sum + term;
            if term.hi.abs() < 1e-36 {
                break;
            }
        }
        sum * sign
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, o: Dd) -> Dd {
        self + (-o)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, o: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, o.hi);
        let e = e + (self.hi * o.lo + self.lo * o.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

impl Mul<f64> for Dd {
    type Output = Dd;
    fn mul(self, o: f64) -> Dd {
        self * Dd::from(o)
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self - o * q1;
        let q2 = r.hi / o.hi;
        let r = r - o * q2;
        let q3 = r.hi / o.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo } + Dd::from(q3)
    }
}

impl Div<f64> for Dd {
    type Output = Dd;
    fn div(self, o: f64) -> Dd {
        self / Dd::from(o)
    }
}

/// `sum_{|k| <= n} w(k) exp(-pi t (k + r)^2)` in double-double.
pub fn dd_series(t: f64, r: f64, n: i64, w: impl Fn(i64) -> Dd) -> Dd {
    let mut acc = Dd::ZERO;
    for k in -n..=n {
        let m = Dd::from(k as f64) + Dd::from(r);
        acc = acc + w(k) * (-(PI * t * m * m)).exp();
    }
    acc
}

fn alt(k: i64) -> Dd {
    if k.rem_euclid(2) == 0 {
        Dd::ONE
    } else {
        -Dd::ONE
    }
}

fn terms(t: f64) -> i64 {
    ((40.0 / t).sqrt()).ceil() as i64 + 3
}

pub fn theta2(t: f64) -> Dd {
    dd_series(t, 0.5, terms(t), |_| Dd::ONE)
}
pub fn theta3(t: f64) -> Dd {
    dd_series(t, 0.0, terms(t), |_| Dd::ONE)
}
pub fn theta4(t: f64) -> Dd {
    dd_series(t, 0.0, terms(t), alt)
}
pub fn vartheta(beta: f64, t: f64) -> Dd {
    dd_series(t, beta, terms(t), |_| Dd::ONE)
}
/// `beta` must be a dyadic fraction so that `k beta` is exact.
pub fn vartheta_hat(beta: f64, t: f64) -> Dd {
    dd_series(t, 0.0, terms(t), |k| Dd::cos_2pi(k as f64 * beta))
}
pub fn vartheta2(beta: f64, t: f64) -> Dd {
    dd_series(t, beta, terms(t), alt)
}
/// `beta` must be a dyadic fraction.
pub fn vartheta2_hat(beta: f64, t: f64) -> Dd {
    dd_series(t, 0.5, terms(t), |k| Dd::cos_2pi((k as f64 + 0.5) * beta))
}

/// Direct sum over a box large enough for `alpha * lambda_min`, no functional equation.
/// `kind`: 0 plain, 1 centered, 2 alternating.
pub fn theta2d_dd(x: f64, y: f64, alpha: f64, kind: u8) -> Dd {
    let (a, b, c) = (1.0 / y, 2.0 * x / y, (x * x + y * y) / y);
    let lam = (a + c) / 2.0 - (((a - c) / 2.0).powi(2) + b * b / 4.0).sqrt();
    let n = ((80.0 / (std::f64::consts::PI * alpha * lam)).sqrt()).ceil() as i64 + 2;
    let off = if kind == 1 { 0.5 } else { 0.0 };
    // coefficients in extended precision so that the form is exactly unimodular
    let (xd, yd) = (Dd::from(x), Dd::from(y));
    let (a, b, c) = (Dd::ONE / yd, xd * 2.0 / yd, (xd * xd + yd * yd) / yd);
    let mut acc = Dd::ZERO;
    for l in -n..=n {
        for k in -n..=n {
            let u = Dd::from(k as f64) + Dd::from(off);
            let v = Dd::from(l as f64) + Dd::from(off);
            let q = (u * u * a) + (u * v * b) + (v * v * c);
            let g = (-(PI * alpha * q)).exp();
            acc = acc + if kind == 2 && (k + l).rem_euclid(2) == 1 { -g } else { g };
        }
    }
    acc
}

/// Same sum in plain binary64 with the generic shift/character weights.
pub fn theta2d_f64(x: f64, y: f64, alpha: f64, shift: (f64, f64), alternating: bool) -> f64 {
    let (a, b, c) = (1.0 / y, 2.0 * x / y, (x * x + y * y) / y);
    let lam = (a + c) / 2.0 - (((a - c) / 2.0).powi(2) + b * b / 4.0).sqrt();
    let n = ((80.0 / (std::f64::consts::PI * alpha * lam)).sqrt()).ceil() as i64 + 2;
    let mut terms = Vec::new();
    for l in -n..=n {
        for k in -n..=n {
            let (u, v) = (k as f64 + shift.0, l as f64 + shift.1);
            let g = (-std::f64::consts::PI * alpha * (a * u * u + b * u * v + c * v * v)).exp();
            terms.push(if alternating && (k + l).rem_euclid(2) == 1 { -g } else { g });
        }
    }
    // sum smallest magnitudes first
    terms.sort_by(|p, q| p.abs().total_cmp(&q.abs()));
    let mut acc = Dd::ZERO;
    for t in terms {
        acc = acc + Dd::from(t);
    }
    acc.to_f64()
}

pub fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs().max(a.abs())
    }
}
