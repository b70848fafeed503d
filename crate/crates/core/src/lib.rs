//! Exact scattering solutions for two-dimensional delta-function potentials
//! supported on a line.
//!
//! A potential of the form `ζ δ(ax + by) g(bx − ay)` is first reduced to the
//! canonical form `δ(x) g(y)` ([`geometry`]). Three families of profiles `g`
//! are then solved exactly:
//!
//! * finite arrays of point interactions, through a Foldy-type linear system
//!   ([`foldy`]);
//! * finite Fourier series with commensurate frequencies, through a linear
//!   system over the propagating diffraction channels ([`fourier`]);
//! * infinite periodic combs, which reduce to a truncated Fourier series.
//!
//! [`oracle`] holds independent verification paths (Neumann/Born iteration
//! and residual substitution).

pub mod error;
pub mod foldy;
pub mod fourier;
pub mod geometry;
pub mod numerics;
pub mod oracle;
pub mod potential;

pub use error::{Result, ScatterError};
pub use num_complex::Complex64;
pub use potential::{
    DeltaLineArray, FourierLinePotential, GeneralLinePotential, IncidentWave, LineProfile,
    PeriodicComb, Potential, Validate,
};
