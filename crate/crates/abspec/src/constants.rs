//! Physical constants (CODATA 2018) and the unit conventions every other
//! module relies on.
//!
//! Unit conventions, asserted throughout the crate: energies in eV, lengths
//! in m, magnetic vector potentials in T·m, currents in A, masses in atomic
//! mass units. Internal energies are kept in eV so that Hamiltonian entries
//! stay O(10⁻²)–O(10¹) for infrared vibrational quanta.

/// CODATA-2018 physical constants in the crate's unit conventions.
///
/// All values are compile-time data, never read from files, and are stored
/// to at least 9 significant digits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Elementary charge e (C). Exact.
    pub elementary_charge: f64,
    /// Speed of light in vacuum c (m/s). Exact.
    pub speed_of_light: f64,
    /// Reduced Planck constant ħ (eV·s). Exact.
    pub reduced_planck: f64,
    /// Vacuum permeability μ₀ (T·m/A). 2018 recommended value.
    pub vacuum_permeability: f64,
    /// Atomic mass constant energy equivalent u·c² (eV). 2018 recommended
    /// value; converts masses in u directly to rest energies in eV.
    pub atomic_mass_energy: f64,
}

/// The CODATA-2018 constant set.
pub const CODATA_2018: PhysicalConstants = PhysicalConstants {
    elementary_charge: 1.602176634e-19,
    speed_of_light: 2.99792458e8,
    reduced_planck: 6.582119569e-16,
    vacuum_permeability: 1.25663706212e-6,
    atomic_mass_energy: 9.3149410242e8,
};

impl PhysicalConstants {
    /// The CODATA-2018 constant set.
    pub const fn codata2018() -> Self {
        CODATA_2018
    }

    /// Convert an energy in joules to electronvolts (divide by e).
    pub fn energy_ev_from_joule(&self, energy_j: f64) -> f64 {
        energy_j / self.elementary_charge
    }

    /// Convert an energy in electronvolts to joules (multiply by e).
    pub fn energy_joule_from_ev(&self, energy_ev: f64) -> f64 {
        energy_ev * self.elementary_charge
    }
}
