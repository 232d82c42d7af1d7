//! Continuous-variable bipartite quantum dynamics under central interactions.
//!
//! The crate provides four layers:
//!
//! * exact Gaussian machinery — closed-form Ehrenfest moments, 4x4 covariance
//!   matrices, symplectic spectra, logarithmic negativity, entanglement
//!   entropy, thermal scaling ([`gaussian`], [`frames`], [`potentials`]);
//! * a numeric non-Gaussian pipeline — Cayley/Crank-Nicolson propagation of
//!   the reduced-mass wave packet under order-N central potentials, two-body
//!   assembly and Schmidt-decomposition entropy ([`tdse`], [`nongaussian`]);
//! * head-on Coulomb scattering and tunneling diagnostics ([`scattering`]);
//! * shared plumbing: units, grids, wave functions, statistical moments.

pub mod error;
pub mod frames;
pub mod gaussian;
pub mod grid;
pub mod moments;
pub mod nongaussian;
pub mod potentials;
pub mod scattering;
pub mod tdse;
pub mod units;
pub mod wavefunction;

pub use error::{Error, Result};
pub use grid::Grid;
pub use units::{Constants, Quantity, UnitSystem};
pub use wavefunction::{make_gaussian, GaussianState, WaveFunction};
