//! Python bindings for `maxtheta-core`.
//!
//! Lattices are passed as `(x, y)` floats or [`Lattice`] objects, potentials
//! as strings such as `"pow:s=4"` or `"gauss:t=1.5"`, point sets as lists of
//! `(x, y)` pairs.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use maxtheta_core::energy::{self, EwaldSplit};
use maxtheta_core::pointset::{self, ChargeMethod, PointConfig};
use maxtheta_core::theta2d::{self, ThetaQuery};
use maxtheta_core::{lattice, theta1d, verify, Flavor, LatticeParam, PatchKind, Potential, SeriesBudget};

fn py_err(e: maxtheta_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse<T: std::str::FromStr<Err = maxtheta_core::Error>>(s: &str) -> PyResult<T> {
    s.parse().map_err(py_err)
}

fn param(x: f64, y: f64) -> PyResult<LatticeParam> {
    LatticeParam::new(x, y).map_err(py_err)
}

fn split(eta: f64) -> PyResult<EwaldSplit> {
    EwaldSplit::new(eta).map_err(py_err)
}

/// A point `x + iy` of the upper half-plane.
#[pyclass(name = "Lattice", frozen, from_py_object)]
#[derive(Clone)]
pub struct PyLattice {
    inner: LatticeParam,
}

#[pymethods]
impl PyLattice {
    #[new]
    fn new(x: f64, y: f64) -> PyResult<Self> {
        Ok(PyLattice { inner: param(x, y)? })
    }

    #[staticmethod]
    fn hexagonal() -> Self {
        PyLattice {
            inner: LatticeParam::hexagonal(),
        }
    }

    #[staticmethod]
    fn square() -> Self {
        PyLattice {
            inner: LatticeParam::square(),
        }
    }

    #[getter]
    fn x(&self) -> f64 {
        self.inner.x
    }

    #[getter]
    fn y(&self) -> f64 {
        self.inner.y
    }

    fn is_reduced(&self) -> bool {
        self.inner.is_reduced()
    }

    /// Returns `(reduced, word, matrix)`.
    fn reduce(&self) -> PyResult<(PyLattice, String, [[i64; 2]; 2])> {
        let (r, w) = lattice::reduce_to_fundamental(&self.inner).map_err(py_err)?;
        Ok((PyLattice { inner: r }, w.to_string(), w.matrix))
    }

    fn dual(&self) -> PyResult<PyLattice> {
        Ok(PyLattice {
            inner: lattice::dual(&self.inner).map_err(py_err)?,
        })
    }

    /// Basis vectors of the unit-covolume lattice.
    fn basis(&self) -> [[f64; 2]; 2] {
        self.inner.basis()
    }

    fn theta(&self, flavor: &str, alpha: f64) -> PyResult<f64> {
        theta(flavor, self.inner.x, self.inner.y, alpha, 0.0, 0.0, true)
    }

    fn __repr__(&self) -> String {
        format!("Lattice({:?}, {:?})", self.inner.x, self.inner.y)
    }
}

/// Theta function of the given flavor: plain, centered, alternating, shifted or character.
#[pyfunction]
#[pyo3(signature = (flavor, x, y, alpha, xi=0.0, eta=0.0, reduce=true))]
fn theta(flavor: &str, x: f64, y: f64, alpha: f64, xi: f64, eta: f64, reduce: bool) -> PyResult<f64> {
    let flavor: Flavor = parse(flavor)?;
    if !reduce && flavor == Flavor::Centered {
        return Err(PyValueError::new_err("the centered flavor is only defined in a reduced basis"));
    }
    let mut q = ThetaQuery::new(flavor, param(x, y)?, alpha);
    q.reduce = reduce;
    if matches!(flavor, Flavor::Shifted | Flavor::Character) {
        q = q.with_shift(xi, eta);
    }
    Ok(theta2d::evaluate(&q, &SeriesBudget::default()).map_err(py_err)?.value)
}

#[pyfunction]
fn theta_c_factorized(y: f64, alpha: f64) -> PyResult<f64> {
    theta2d::theta_c_factorized(y, alpha, &SeriesBudget::default()).map_err(py_err)
}

/// Jacobi null `theta_k(t)` for `k` in 2, 3, 4.
#[pyfunction]
fn jacobi(k: u8, t: f64) -> PyResult<f64> {
    let b = SeriesBudget::default();
    match k {
        2 => theta1d::theta2(t, &b),
        3 => theta1d::theta3(t, &b),
        4 => theta1d::theta4(t, &b),
        _ => return Err(PyValueError::new_err(format!("no Jacobi theta_{k}"))),
    }
    .map_err(py_err)
}

/// Shifted one-dimensional theta `sum_k exp(-pi t (k + beta)^2)`.
#[pyfunction]
fn vartheta(beta: f64, t: f64) -> PyResult<f64> {
    theta1d::vartheta(beta, t, &SeriesBudget::default()).map_err(py_err)
}

#[pyfunction]
fn vartheta_hat(beta: f64, t: f64) -> PyResult<f64> {
    theta1d::vartheta_hat(beta, t, &SeriesBudget::default()).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (x, y, s, split=1.0))]
fn epstein_pm(x: f64, y: f64, s: f64, split: f64) -> PyResult<f64> {
    energy::epstein_pm_split(&param(x, y)?, s, self::split(split)?).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (x, y, s, split=1.0))]
fn epstein_c(x: f64, y: f64, s: f64, split: f64) -> PyResult<f64> {
    energy::epstein_c_split(&param(x, y)?, s, self::split(split)?).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (x, y, s, split=1.0))]
fn epstein(x: f64, y: f64, s: f64, split: f64) -> PyResult<f64> {
    energy::epstein_plain_split(&param(x, y)?, s, self::split(split)?).map_err(py_err)
}

#[pyfunction]
fn energy_pm(x: f64, y: f64, pot: &str) -> PyResult<f64> {
    energy::energy_pm(&param(x, y)?, &parse::<Potential>(pot)?).map_err(py_err)
}

#[pyfunction]
fn energy_c(x: f64, y: f64, pot: &str) -> PyResult<f64> {
    energy::energy_c(&param(x, y)?, &parse::<Potential>(pot)?).map_err(py_err)
}

#[pyfunction]
fn rocksalt_energy(x: f64, y: f64, p: f64, q: f64, rho: f64) -> PyResult<f64> {
    energy::rocksalt_energy(&param(x, y)?, p, q, rho).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (s=1.0, split=1.0))]
fn madelung_nacl3d(s: f64, split: f64) -> PyResult<f64> {
    energy::madelung_nacl3d(s, self::split(split)?).map_err(py_err)
}

/// Runs a suite and returns `(suite, check, status, detail)` rows.
#[pyfunction]
#[pyo3(name = "verify", signature = (suite, seed=1))]
fn run_verify(suite: &str, seed: u64) -> PyResult<Vec<(String, String, String, String)>> {
    let reports = verify::run_suite(suite, seed).map_err(py_err)?;
    Ok(reports
        .iter()
        .flat_map(|r| {
            r.lines.iter().map(|l| {
                let status = match (l.informational, l.passed) {
                    (true, _) => "INFO",
                    (false, true) => "PASS",
                    (false, false) => "FAIL",
                };
                (r.suite.clone(), l.name.clone(), status.to_string(), l.detail.clone())
            })
        })
        .collect())
}

#[pyfunction]
fn make_patch(kind: &str, radius: f64) -> PyResult<Vec<[f64; 2]>> {
    Ok(pointset::make_patch(parse::<PatchKind>(kind)?, radius).map_err(py_err)?.points)
}

#[pyfunction]
fn delaunay(points: Vec<[f64; 2]>) -> PyResult<Vec<[usize; 3]>> {
    Ok(pointset::delaunay(&points).map_err(py_err)?.triangles)
}

/// Minimal neutral charge assignment; returns `(energy_per_point, charges)`.
#[pyfunction]
#[pyo3(signature = (points, pot, method="exhaustive", seed=1))]
fn charge_energy(points: Vec<[f64; 2]>, pot: &str, method: &str, seed: u64) -> PyResult<(f64, Vec<i8>)> {
    let m = match method {
        "exhaustive" => ChargeMethod::Exhaustive,
        "anneal" => ChargeMethod::Anneal { seed },
        _ => return Err(PyValueError::new_err(format!("unknown method {method:?}"))),
    };
    let r = pointset::charge_energy(&PointConfig::new(points), &parse::<Potential>(pot)?, m).map_err(py_err)?;
    Ok((r.energy_per_point, r.charges))
}

/// Minimal energy over Delaunay edge midpoints; returns `(value, midpoint)`.
#[pyfunction]
fn center_energy(points: Vec<[f64; 2]>, pot: &str) -> PyResult<(f64, [f64; 2])> {
    let e = pointset::center_energy(&PointConfig::new(points), &parse::<Potential>(pot)?).map_err(py_err)?;
    Ok((e.value, e.midpoint))
}

#[pymodule]
fn maxtheta(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyLattice>()?;
    m.add_function(wrap_pyfunction!(theta, m)?)?;
    m.add_function(wrap_pyfunction!(theta_c_factorized, m)?)?;
    m.add_function(wrap_pyfunction!(jacobi, m)?)?;
    m.add_function(wrap_pyfunction!(vartheta, m)?)?;
    m.add_function(wrap_pyfunction!(vartheta_hat, m)?)?;
    m.add_function(wrap_pyfunction!(epstein_pm, m)?)?;
    m.add_function(wrap_pyfunction!(epstein_c, m)?)?;
    m.add_function(wrap_pyfunction!(epstein, m)?)?;
    m.add_function(wrap_pyfunction!(energy_pm, m)?)?;
    m.add_function(wrap_pyfunction!(energy_c, m)?)?;
    m.add_function(wrap_pyfunction!(rocksalt_energy, m)?)?;
    m.add_function(wrap_pyfunction!(madelung_nacl3d, m)?)?;
    m.add_function(wrap_pyfunction!(run_verify, m)?)?;
    m.add_function(wrap_pyfunction!(make_patch, m)?)?;
    m.add_function(wrap_pyfunction!(delaunay, m)?)?;
    m.add_function(wrap_pyfunction!(charge_energy, m)?)?;
    m.add_function(wrap_pyfunction!(center_energy, m)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrappers_forward_to_core() {
        let sq = theta("alternating", 0.0, 1.0, 1.0, 0.0, 0.0, true).unwrap();
        assert!((sq - jacobi(4, 1.0).unwrap().powi(2)).abs() < 1e-15);
        let hex = PyLattice::hexagonal();
        assert!((hex.theta("centered", 1.0).unwrap() - theta_c_factorized(hex.y(), 1.0).unwrap()).abs() < 1e-14);
        let (r, word, _) = PyLattice::new(1.0, 1.0).unwrap().reduce().unwrap();
        assert_eq!((r.x(), r.y(), word.as_str()), (0.0, 1.0, "T^-1"));
    }

    #[test]
    fn bad_input_is_rejected() {
        assert!(PyLattice::new(0.0, -1.0).is_err());
        assert!(jacobi(1, 1.0).is_err());
        assert!(theta("centered", 0.0, 1.0, 1.0, 0.0, 0.0, false).is_err());
        assert!(energy_pm(0.0, 1.0, "nonsense").is_err());
    }

    #[test]
    fn checkerboard_charges() {
        let pts: Vec<[f64; 2]> = (0..16).map(|i| [(i % 4) as f64, (i / 4) as f64]).collect();
        let (_, c) = charge_energy(pts.clone(), "pow:s=4", "exhaustive", 1).unwrap();
        for (p, q) in pts.iter().zip(c) {
            assert_eq!(q, if (p[0] + p[1]) as i64 % 2 == 0 { 1 } else { -1 });
        }
    }
}
