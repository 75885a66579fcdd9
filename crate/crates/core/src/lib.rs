//! Capacities of small holes in planar domains, their asymptotic series in ε and
//! 1/log ε, and the Dirichlet eigenvalue shifts they predict.

pub mod bem;
pub mod asymptotic;
pub mod capacity;
pub mod eigen;
pub mod elliptic;
pub mod harmonic;
pub mod taylor;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod spectra;

pub use error::{Error, Result};
pub use geometry::{ParamCurve, Point};
