//! Vibrational spectroscopy of a diatomic molecule in a uniform vector
//! potential.
//!
//! A diatomic gas placed on the axis of a toroidal coil sits in a region
//! where the magnetic field vanishes while the vector potential A = A₀ẑ does
//! not. Minimal coupling of the relative momentum to A₀ shifts the truncated
//! oscillator levels in an orientation-dependent way, so the sharp 0→1
//! absorption line of an isotropic gas spreads into a band. This crate
//! computes that band and the coil drive needed to make it observable:
//!
//! - [`constants`] — CODATA-2018 values and the unit conventions (energies
//!   in eV, lengths in m, vector potentials in T·m, currents in A).
//! - [`molecule`] — diatomic masses and reduced-mass quantities.
//! - [`oscillator`] — coupling strength α and the truncated N-level
//!   Hamiltonian; two-level closed form.
//! - [`eigensolver`] — implicit-QL eigenvalues of the (phase-reduced)
//!   tridiagonal Hamiltonian, plus independent test oracles.
//! - [`spectrum`] — orientation-averaged line profiles and truncation
//!   convergence studies.
//! - [`coil`] — on-axis vector potential of a toroidal coil and the current
//!   required to reach a target coupling ratio.

pub mod coil;
pub mod constants;
pub mod eigensolver;
pub mod molecule;
pub mod oscillator;
pub mod spectrum;
