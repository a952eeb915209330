//! Numerical laboratory for the identity `Φ = -2 Cal` between the average
//! rotation number of a Hamiltonian isotopy of the unit disc and its Calabi
//! invariant.
//!
//! - [`hamiltonian`]: catalog of compactly supported Hamiltonians and their fields
//! - [`flow`]: RK4 integration of the isotopy, area-preservation checks
//! - [`linking`]: pair windings and the Monte Carlo estimate of `Φ`
//! - [`calabi`]: `Cal` by tensor quadrature
//! - [`cauchy`]: Cauchy–Pompeiu reconstruction and singular-integral bounds
//! - [`report`]: JSON-configured runs producing verification reports

pub mod calabi;
pub mod cauchy;
pub mod error;
pub mod flow;
pub mod geometry;
pub mod hamiltonian;
pub mod linking;
pub mod quadrature;
pub mod report;
pub mod rng;

pub use error::{Error, Result};
pub use geometry::{ComplexPoint, PairConfiguration};
pub use hamiltonian::{Hamiltonian, HamiltonianSpec};
