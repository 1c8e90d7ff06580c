//! Strong-field ionization amplitudes in the analytical R-matrix picture.
//!
//! The crate is organised bottom-up:
//!
//! * [`specfun`]: Kummer, Laguerre, Bessel and spherical-harmonic functions.
//! * [`field`]: analytic laser fields at complex time and the saddle-point solver.
//! * [`direct`]: first-order tunnelling amplitudes for hydrogenic orbitals.
//! * [`correlation`]: second-order, correlation-driven amplitudes.
//! * [`spectra`]: configuration, grid scans and CSV/JSON output.
//! * [`verify`]: the oracle-equivalence suite behind `arm-ionize check`.
//!
//! Atomic units are used everywhere.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod correlation;
pub mod direct;
pub mod error;
pub mod field;
pub mod quadrature;
pub mod specfun;
pub mod spectra;
pub mod types;
pub mod verify;

pub use num_complex::Complex64;

pub use correlation::{
    a2_yield, angular_combo, c_constant, cancellation_probe, crude_distribution, int1, int2_closed,
    int2_hypergeometric, int2_oracle, parallel_saddle_factor, xi_peak, AngularCombo, ChannelTransition,
    DampingConvention, MultipoleTerm, XiPeak,
};
pub use direct::{
    direct_yield, k0_constant, r_factor, r_factor_oracle, DirectOptions, OrbitalSpec, SlowFactors,
};
pub use error::{Error, Result};
pub use field::{
    gaussian_identity_check, saddle_solve, volkov_phase, z_s, LaserField, SaddleResult, VectorPotential,
};
pub use spectra::{co2_preset, emit, run_scan, OutputFormat, ScanConfig, SpectrumRecord};
pub use types::{int_pow, ComplexAmplitude, Momentum};
