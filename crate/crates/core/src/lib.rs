//! Low-energy spectrum and dissipative dynamics of a two-state system (TSS)
//! coupled to a weakly damped harmonic oscillator (HO).
//!
//! The crate is organised bottom-up:
//!
//! * [`numerics`] holds the small dense kernels (Hermitian eigensolver,
//!   principal-value quadrature, 2×2 propagator, spectral peak search).
//! * [`model`] holds the physical parameters, the bath spectral densities and
//!   the self-consistent displacement solve.
//! * [`hamiltonians`] builds the exact truncated, simple-truncation and
//!   displaced-state (DSR) Hamiltonians and the analytic DSR eigensystem.
//! * [`redfield`] evaluates bath rates, Redfield tensors, the secular
//!   three-level reduction and a brute-force non-secular integrator.
//!
//! Units: ℏ = k_B = 1 throughout. Every frequency, energy and temperature is
//! expressed in one user-chosen frequency unit.

pub mod error;
pub mod hamiltonians;
pub mod model;
pub mod numerics;
pub mod redfield;

pub use error::{Error, Result};
pub use hamiltonians::{
    bohr_deviations, build_dsr_general, build_dsr_jc, build_exact, build_simple_truncation,
    dsr_eigensystem, BasisLabel, BohrFrequencies, DeviationMode, DsrEigensystem,
    HermitianMatrix, Representation, Scheme, Spin,
};
pub use model::{
    solve_displacement, DsrParams, ModelParams, SpectralDensity,
};
pub use numerics::{eigh, principal_value, propagate_2x2, Spectrum};
pub use redfield::{
    coupling_elements, secular_dynamics, sigma_z_series, CouplingElements, FullRedfield,
    GammaTensor, InitialState, RateOptions, RatePrefactor, RedfieldTensor, SecularDynamics,
};

pub use nalgebra;
pub use num_complex::Complex64;
