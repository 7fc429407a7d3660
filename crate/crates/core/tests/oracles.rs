mod common;

use common::{rel, Dd};
use maxtheta_core::energy::{self, EwaldSplit};
use maxtheta_core::lattice::{dual, reduce_to_fundamental, LatticeParam, Letter, UnimodularWord};
use maxtheta_core::{gram, lambda_min, theta1d, theta2d, SeriesBudget};

fn b() -> SeriesBudget {
    SeriesBudget::default()
}

#[test]
fn jacobi_nulls_match_extended_precision() {
    let b = b();
    let theta3_1 = 1.08643481121330801457531612151;
    let theta2_2 = 0.415760602596027032314507136285;
    assert!(rel(common::theta3(1.0).to_f64(), theta3_1) < 1e-15);
    assert!(rel(common::theta2(2.0).to_f64(), theta2_2) < 1e-15);
    assert!(rel(theta1d::theta3(1.0, &b).unwrap(), theta3_1) < 1e-14);
    assert!(rel(theta1d::theta2(2.0, &b).unwrap(), theta2_2) < 1e-14);
    for t in [0.07, 0.4, 1.0, 3.3, 15.0] {
        assert!(rel(theta1d::theta4(t, &b).unwrap(), common::theta4(t).to_f64()) < 1e-13, "t={t}");
    }
}

#[test]
fn theta4_product_matches_series() {
    let s = theta1d::theta4(1.0, &b()).unwrap();
    let p = theta1d::theta4_product(1.0, 25).unwrap();
    assert!((s - p).abs() < 1e-14);
}

#[test]
fn vartheta_derivative_matches_difference_quotient() {
    let b = b();
    let (beta, t, h) = (0.3, 2.0, 1e-3);
    let f = |x: f64| theta1d::vartheta(x, t, &b).unwrap();
    let fd = (f(beta - 2.0 * h) - 8.0 * f(beta - h) + 8.0 * f(beta + h) - f(beta + 2.0 * h)) / (12.0 * h);
    let d = theta1d::d_vartheta(beta, t, &b).unwrap();
    assert!((d - fd).abs() < 1e-9, "{d} vs {fd}");
}

#[test]
fn reduction_of_thin_lattice_is_minimal() {
    let tau = LatticeParam::new(0.0, 0.25).unwrap();
    let (r, w) = reduce_to_fundamental(&tau).unwrap();
    assert!((r.x).abs() < 1e-15 && (r.y - 4.0).abs() < 1e-14);
    assert_eq!(w.determinant(), 1);
    // breadth-first search over words: nothing shorter lands in the domain
    let letters = [Letter::S, Letter::T, Letter::TInv];
    let mut frontier = vec![UnimodularWord::default()];
    let mut shortest = None;
    'outer: for len in 0..=12 {
        for word in &frontier {
            if word.act(&tau).is_reduced() {
                shortest = Some(len);
                break 'outer;
            }
        }
        frontier = frontier
            .iter()
            .flat_map(|w| {
                letters.iter().map(move |&l| {
                    let mut n = w.clone();
                    n.push(l);
                    n
                })
            })
            .filter(|w| w.letters.len() < 2 || w.letters[w.letters.len() - 2..] != [Letter::S, Letter::S])
            .collect();
    }
    assert_eq!(shortest, Some(w.letters.len()));
}

#[test]
fn lambda_min_matches_grid_minimum() {
    for (x, y) in [(0.5, 3f64.sqrt() / 2.0), (0.0, 1.0), (0.3, 1.4), (0.1, 3.9)] {
        let l = LatticeParam::new(x, y).unwrap();
        let q = gram(&l).unwrap();
        let lam = lambda_min(&q).unwrap();
        let mut best = f64::INFINITY;
        for k in -50..=50i32 {
            for m in -50..=50i32 {
                let n2 = (k * k + m * m) as f64;
                if n2 > 0.0 {
                    best = best.min(q.eval(k as f64, m as f64) / n2);
                }
            }
        }
        assert!(lam <= best + 1e-13 && best - lam < 1e-3 * lam, "{x},{y}: {lam} vs {best}");
    }
}

#[test]
fn hexagonal_lattice_is_self_dual() {
    let h = LatticeParam::hexagonal();
    let d = dual(&h).unwrap();
    assert!((d.x - h.x).abs() < 1e-12 && (d.y - h.y).abs() < 1e-12);
}

#[test]
fn hexagonal_centered_theta_at_one() {
    let frozen = 0.94680557073602121061193359771;
    let h = LatticeParam::hexagonal();
    let dd = common::theta2d_dd(h.x, h.y, 1.0, 1).to_f64();
    assert!(rel(dd, frozen) < 1e-15);
    let v = theta2d::theta_centered(&h, 1.0, &b()).unwrap();
    assert!(rel(v, frozen) < 1e-13);
    let f = theta2d::theta_c_factorized(h.y, 1.0, &b()).unwrap();
    assert!(rel(f, frozen) < 1e-13);
}

#[test]
fn shifted_and_character_match_direct_sum() {
    let b = b();
    let l = LatticeParam::new(0.23, 1.3).unwrap();
    for (xi, eta) in [(0.1, 0.35), (0.5, 0.0), (0.25, 0.75)] {
        for alpha in [0.6, 1.0, 2.5] {
            let s = theta2d::theta_shifted(&l, xi, eta, alpha, &b).unwrap();
            let direct = common::theta2d_f64(l.x, l.y, alpha, (xi, eta), false);
            assert!(rel(s, direct) < 1e-12, "shifted {xi} {eta} {alpha}");
        }
    }
}

/// Evjen-weighted neutral squares: boundary points carry weight 1/2, corners 1/4.
fn evjen_square(s: f64, n: i64) -> f64 {
    let mut acc = Dd::ZERO;
    for k in -n..=n {
        for l in -n..=n {
            if k == 0 && l == 0 {
                continue;
            }
            let mut w = 1.0;
            if k.abs() == n {
                w *= 0.5;
            }
            if l.abs() == n {
                w *= 0.5;
            }
            let sign = if (k + l).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            let r2 = (k * k + l * l) as f64;
            acc = acc + Dd::from(sign * w * r2.powf(-s / 2.0));
        }
    }
    acc.to_f64()
}

fn evjen_cube(n: i64) -> f64 {
    let mut acc = Dd::ZERO;
    for i in -n..=n {
        for j in -n..=n {
            for k in -n..=n {
                if i == 0 && j == 0 && k == 0 {
                    continue;
                }
                let w = [i, j, k].iter().filter(|c| c.abs() == n).fold(1.0, |w, _| w * 0.5);
                let sign = if (i + j + k).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                acc = acc + Dd::from(sign * w / ((i * i + j * j + k * k) as f64).sqrt());
            }
        }
    }
    acc.to_f64()
}

#[test]
fn square_madelung_matches_evjen_sum() {
    let frozen = -1.61554262671282510091797315106;
    let evjen = evjen_square(1.0, 300);
    assert!((evjen - frozen).abs() < 1e-5, "evjen {evjen}");
    let sq = LatticeParam::square();
    let v = energy::epstein_pm(&sq, 1.0).unwrap();
    assert!((v - frozen).abs() < 1e-10);
    let w = energy::epstein_pm_split(&sq, 1.0, EwaldSplit::new(1.25).unwrap()).unwrap();
    assert!((v - w).abs() < 1e-10);
}

#[test]
fn square_alternating_zeta_closed_form() {
    // -4 beta(s/2) eta(s/2) at s = 4 and 6, evaluated at 30 digits
    let sq = LatticeParam::square();
    let z4 = -3.01340601984597006177313009636;
    let z6 = -3.49418521170288258012084293076;
    assert!((energy::epstein_pm(&sq, 4.0).unwrap() - z4).abs() < 1e-11);
    assert!((energy::epstein_pm(&sq, 6.0).unwrap() - z6).abs() < 1e-11);
    assert!((evjen_square(4.0, 200) - z4).abs() < 1e-7);
    let plain6 = 4.65891361560384344016112390768;
    assert!((energy::epstein_plain(&sq, 6.0).unwrap() - plain6).abs() < 1e-11);
}

#[test]
fn rocksalt_madelung_matches_evjen_cube() {
    let frozen = -1.7475645946331822;
    let e = evjen_cube(40);
    assert!((e - frozen).abs() < 1e-4, "evjen {e}");
    let v = energy::madelung_nacl3d(1.0, EwaldSplit::default()).unwrap();
    assert!((v - frozen).abs() < 1e-10);
}

#[test]
fn nacl_s4_matches_direct_cube_sum() {
    let n = 120i64;
    let mut acc = Dd::ZERO;
    for i in -n..=n {
        for j in -n..=n {
            for k in -n..=n {
                let r2 = i * i + j * j + k * k;
                if r2 == 0 {
                    continue;
                }
                let sign = if (i + j + k).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                acc = acc + Dd::from(sign / (r2 * r2) as f64);
            }
        }
    }
    let v = energy::madelung_nacl3d(4.0, EwaldSplit::default()).unwrap();
    assert!((v - acc.to_f64()).abs() < 1e-8, "{v} vs {}", acc.to_f64());
}
