//! Theta functions, lattice energies and verification tools for
//! unit-covolume planar lattices.
//!
//! A lattice is given by a point `x + iy` of the upper half-plane
//! ([`LatticeParam`]). The centered theta sums Gaussians over the lattice
//! translated by half its fundamental cell, the alternating theta puts signs
//! `(-1)^(k+l)` on the lattice points, and both are maximal at the hexagonal
//! lattice. Energies of completely monotone potentials follow by integrating
//! these thetas against a Laplace measure.
//!
//! ```
//! use maxtheta_core::{theta2d, LatticeParam, SeriesBudget};
//!
//! let b = SeriesBudget::default();
//! let hex = LatticeParam::hexagonal();
//! let sq = LatticeParam::square();
//! let c_hex = theta2d::theta_centered(&hex, 1.0, &b).unwrap();
//! let c_sq = theta2d::theta_centered(&sq, 1.0, &b).unwrap();
//! assert!(c_hex > c_sq);
//! ```

pub mod energy;
pub mod error;
pub mod lattice;
pub mod pointset;
pub mod series;
pub mod theta1d;
pub mod theta2d;
pub mod verify;

pub use energy::{EwaldSplit, Potential};
pub use error::{Error, Result};
pub use lattice::{gram, lambda_min, reduce_to_fundamental, LatticeParam, Letter, QuadraticForm, UnimodularWord};
pub use pointset::{ChargeMethod, PatchKind, PointConfig, Triangulation};
pub use series::{KahanSum, SeriesBudget};
pub use theta1d::ThetaArg;
pub use theta2d::{Flavor, ThetaQuery};
pub use verify::{ConstantCheck, ScanSpec, SuiteReport};
