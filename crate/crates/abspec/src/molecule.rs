//! Diatomic molecule data and the reduced-mass quantities entering the
//! coupling strength.

use std::error::Error;
use std::fmt;

use crate::constants::PhysicalConstants;

/// A diatomic molecule: two nuclear masses (u) and the vibrational quantum
/// ħω₀ (eV).
///
/// Invariants enforced at construction: both masses and ħω₀ are finite and
/// strictly positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoleculeSpec {
    mass_1: f64,
    mass_2: f64,
    hbar_omega0: f64,
}

/// Validation failures for [`MoleculeSpec`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MoleculeError {
    /// A nuclear mass was zero, negative, or not finite.
    NonPositiveMass(f64),
    /// The vibrational quantum ħω₀ was zero, negative, or not finite.
    NonPositiveQuantum(f64),
}

impl fmt::Display for MoleculeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MoleculeError::NonPositiveMass(m) => {
                write!(f, "nuclear mass must be positive and finite, got {m} u")
            }
            MoleculeError::NonPositiveQuantum(e) => {
                write!(f, "vibrational quantum must be positive and finite, got {e} eV")
            }
        }
    }
}

impl Error for MoleculeError {}

impl MoleculeSpec {
    /// Build a molecule from masses in u and a vibrational quantum in eV.
    pub fn new(mass_1: f64, mass_2: f64, hbar_omega0: f64) -> Result<Self, MoleculeError> {
        for &m in &[mass_1, mass_2] {
            if !(m.is_finite() && m > 0.0) {
                return Err(MoleculeError::NonPositiveMass(m));
            }
        }
        if !(hbar_omega0.is_finite() && hbar_omega0 > 0.0) {
            return Err(MoleculeError::NonPositiveQuantum(hbar_omega0));
        }
        Ok(Self { mass_1, mass_2, hbar_omega0 })
    }

    /// Built-in HCl preset: 1.00784 u (hydrogen, standard atomic weight),
    /// 34.96885 u (the dominant ³⁵Cl isotope), ħω₀ = 0.05 eV (the infrared
    /// fundamental band scale).
    ///
    /// For other isotopologues supply explicit masses via [`MoleculeSpec::new`].
    pub fn hcl() -> Self {
        Self { mass_1: 1.00784, mass_2: 34.96885, hbar_omega0: 0.05 }
    }

    /// Look up a named molecule preset. Currently only `"HCl"`.
    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "HCl" => Some(Self::hcl()),
            _ => None,
        }
    }

    /// First nuclear mass (u).
    pub fn mass_1(&self) -> f64 {
        self.mass_1
    }

    /// Second nuclear mass (u).
    pub fn mass_2(&self) -> f64 {
        self.mass_2
    }

    /// Vibrational quantum ħω₀ (eV).
    pub fn hbar_omega0(&self) -> f64 {
        self.hbar_omega0
    }

    /// Reduced mass μ = m₁m₂/(m₁+m₂) (u).
    pub fn reduced_mass(&self) -> f64 {
        self.mass_1 * self.mass_2 / (self.mass_1 + self.mass_2)
    }

    /// Reduced-mass rest energy μc² (eV).
    pub fn reduced_rest_energy(&self, k: &PhysicalConstants) -> f64 {
        self.reduced_mass() * k.atomic_mass_energy
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::CODATA_2018;

    fn splitmix64(state: &mut u64) -> f64 {
        *state = state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = *state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^= z >> 31;
        (z >> 11) as f64 / (1u64 << 53) as f64
    }

    #[test]
    fn equal_masses() {
        let m = MoleculeSpec::new(1.0, 1.0, 1.0).unwrap();
        assert_eq!(m.reduced_mass(), 0.5);
        let m = MoleculeSpec::new(2.0, 2.0, 1.0).unwrap();
        assert_eq!(m.reduced_mass(), 1.0);
    }

    #[test]
    fn hcl_reduced_mass() {
        // m1*m2/(m1+m2) recomputed by hand for the preset masses.
        let mu = MoleculeSpec::hcl().reduced_mass();
        assert!((mu - 0.9796066782130318).abs() < 1e-15);
        assert!(mu < 1.00784);
    }

    #[test]
    fn hcl_reduced_rest_energy() {
        // 0.9796066782130318 u × 9.3149410242e8 eV/u
        let e = MoleculeSpec::hcl().reduced_rest_energy(&CODATA_2018);
        assert!((e - 912497843.4466858).abs() < 1e-3);
    }

    #[test]
    fn equal_mass_rest_energies_exact() {
        let k = CODATA_2018;
        let m = MoleculeSpec::new(1.0, 1.0, 1.0).unwrap();
        assert_eq!(m.reduced_rest_energy(&k), 0.5 * k.atomic_mass_energy);
        let m = MoleculeSpec::new(2.0, 2.0, 1.0).unwrap();
        assert_eq!(m.reduced_rest_energy(&k), k.atomic_mass_energy);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(
            MoleculeSpec::new(-1.0, 1.0, 1.0),
            Err(MoleculeError::NonPositiveMass(_))
        ));
        assert!(matches!(
            MoleculeSpec::new(1.0, 0.0, 1.0),
            Err(MoleculeError::NonPositiveMass(_))
        ));
        assert!(matches!(
            MoleculeSpec::new(1.0, f64::NAN, 1.0),
            Err(MoleculeError::NonPositiveMass(_))
        ));
        assert!(matches!(
            MoleculeSpec::new(1.0, 1.0, 0.0),
            Err(MoleculeError::NonPositiveQuantum(_))
        ));
        assert!(matches!(
            MoleculeSpec::new(1.0, 1.0, f64::INFINITY),
            Err(MoleculeError::NonPositiveQuantum(_))
        ));
    }

    #[test]
    fn preset_lookup() {
        assert_eq!(MoleculeSpec::preset("HCl"), Some(MoleculeSpec::hcl()));
        assert_eq!(MoleculeSpec::preset("XYZ"), None);
        assert_eq!(MoleculeSpec::hcl().hbar_omega0(), 0.05);
    }

    #[test]
    fn reduced_mass_symmetry_bound_monotonicity() {
        let mut s = 0x00c0ffee_u64;
        for _ in 0..200 {
            let m1 = 0.1 + 100.0 * splitmix64(&mut s);
            let m2 = 0.1 + 100.0 * splitmix64(&mut s);
            let a = MoleculeSpec::new(m1, m2, 1.0).unwrap().reduced_mass();
            let b = MoleculeSpec::new(m2, m1, 1.0).unwrap().reduced_mass();
            assert_eq!(a, b, "symmetry broken for ({m1}, {m2})");
            assert!(a < m1.min(m2), "bound broken for ({m1}, {m2})");
            // monotone in each argument
            let bigger = MoleculeSpec::new(m1 * 1.5, m2, 1.0).unwrap().reduced_mass();
            assert!(bigger > a, "monotonicity broken for ({m1}, {m2})");
        }
    }
}
