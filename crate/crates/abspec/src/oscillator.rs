//! Coupling strength α and the truncated N-level Hamiltonian of the
//! vibrational mode in a uniform vector potential; two-level closed form.
//!
//! With the molecule axis at angle θ to A = A₀ẑ, minimal coupling of the
//! relative momentum adds −i·α·(a†−a) to the oscillator Hamiltonian
//! ħω₀(a†a+½), with α = e·A₀·c·√(ħω₀/2μc²)·cosθ. In the number basis this
//! is Hermitian tridiagonal: real diagonal ħω₀(n+½), pure-imaginary
//! off-diagonal entries of magnitude |α|√(n+1).
//!
//! The quadratic A² term of the expanded minimal coupling is deliberately
//! not included: the operator implemented here is exactly the linear-in-A
//! coupling above. The exact spectrum of the completed square (a uniform
//! downward shift α²/ħω₀ of every level) is available as a test oracle in
//! [`crate::eigensolver::displaced_spectrum_oracle`].

use std::error::Error;
use std::fmt;

use crate::constants::PhysicalConstants;
use crate::molecule::MoleculeSpec;

/// Coupling of the vibrational coordinate to the vector potential.
///
/// `alpha` may be negative (cosθ < 0); the spectrum is even in α, so
/// spectrum-facing code consumes |α| and the sign is kept as metadata.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingParams {
    a0: f64,
    cos_theta: f64,
    alpha: f64,
    ratio: f64,
}

/// Validation failures for coupling and Hamiltonian construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OscillatorError {
    /// |cosθ| > 1 or cosθ not finite.
    CosThetaOutOfRange(f64),
    /// The vector potential magnitude was NaN or infinite.
    NonFinitePotential(f64),
    /// A Hamiltonian with zero levels was requested.
    ZeroLevels,
}

impl fmt::Display for OscillatorError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OscillatorError::CosThetaOutOfRange(u) => {
                write!(f, "cos(theta) must lie in [-1, 1], got {u}")
            }
            OscillatorError::NonFinitePotential(a) => {
                write!(f, "vector potential must be finite, got {a} T*m")
            }
            OscillatorError::ZeroLevels => write!(f, "level count must be at least 1"),
        }
    }
}

impl Error for OscillatorError {}

/// Coupling strength α = e·A₀·c·√(ħω₀/2μc²)·cosθ and the dimensionless
/// ratio r = α/ħω₀.
///
/// `a0` is in T·m. The factor e·A₀·c in eV is numerically a0 × c: T·m times
/// m/s is volts, and dividing the corresponding energy e·A₀·c (joules) by e
/// cancels the charge.
pub fn coupling_alpha(
    a0: f64,
    cos_theta: f64,
    mol: &MoleculeSpec,
    k: &PhysicalConstants,
) -> Result<CouplingParams, OscillatorError> {
    if !a0.is_finite() {
        return Err(OscillatorError::NonFinitePotential(a0));
    }
    if cos_theta.is_nan() || cos_theta.abs() > 1.0 {
        return Err(OscillatorError::CosThetaOutOfRange(cos_theta));
    }
    let hw = mol.hbar_omega0();
    let mu_c2 = mol.reduced_rest_energy(k);
    let ea0c_ev = a0 * k.speed_of_light;
    let alpha = ea0c_ev * (hw / (2.0 * mu_c2)).sqrt() * cos_theta;
    Ok(CouplingParams { a0, cos_theta, alpha, ratio: alpha / hw })
}

impl CouplingParams {
    /// Coupling along the potential (cosθ = 1) with a prescribed ratio
    /// r = α/ħω₀; the matching potential magnitude √(2ħω₀μc²)·r/c is
    /// recorded so orientation scans can rescale from it.
    pub fn from_ratio(ratio: f64, mol: &MoleculeSpec, k: &PhysicalConstants) -> Self {
        let hw = mol.hbar_omega0();
        let mu_c2 = mol.reduced_rest_energy(k);
        let a0 = ratio * (2.0 * hw * mu_c2).sqrt() / k.speed_of_light;
        Self { a0, cos_theta: 1.0, alpha: ratio * hw, ratio }
    }

    /// Vector potential magnitude A₀ (T·m).
    pub fn a0(&self) -> f64 {
        self.a0
    }

    /// Orientation factor cosθ.
    pub fn cos_theta(&self) -> f64 {
        self.cos_theta
    }

    /// Coupling strength α (eV).
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Dimensionless coupling ratio r = α/ħω₀.
    pub fn ratio(&self) -> f64 {
        self.ratio
    }
}

/// The truncated Hamiltonian in (diagonal, off-diagonal magnitude) form.
///
/// The represented matrix has diag\[n\] on the diagonal, +i·s·offmag\[n\] one
/// place above it and −i·s·offmag\[n\] one below, where s = `alpha_sign`;
/// it is Hermitian by construction. Storing magnitudes plus a sign flag
/// instead of a dense complex matrix costs O(N) and loses nothing: a
/// diagonal-unitary similarity removes both the imaginary unit and the sign
/// (see [`crate::eigensolver::phase_reduce`]).
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianTridiagonal {
    diag: Vec<f64>,
    offmag: Vec<f64>,
    alpha_sign: f64,
}

impl HermitianTridiagonal {
    /// Number of levels N.
    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// Diagonal energies ħω₀(n+½) (eV).
    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    /// Off-diagonal magnitudes |α|√(n+1) (eV); all non-negative.
    pub fn offmag(&self) -> &[f64] {
        &self.offmag
    }

    /// Sign of α recorded at construction (+1.0 or −1.0). Spectrum-irrelevant.
    pub fn alpha_sign(&self) -> f64 {
        self.alpha_sign
    }
}

/// Assemble the N-level truncation: diag\[n\] = ħω₀(n+½) for n = 0..N−1,
/// offmag\[n\] = |α|√(n+1) for n = 0..N−2.
pub fn build_hamiltonian(
    n_levels: usize,
    cp: &CouplingParams,
    mol: &MoleculeSpec,
) -> Result<HermitianTridiagonal, OscillatorError> {
    if n_levels == 0 {
        return Err(OscillatorError::ZeroLevels);
    }
    let hw = mol.hbar_omega0();
    let abs_alpha = cp.alpha.abs();
    let diag = (0..n_levels).map(|n| hw * (n as f64 + 0.5)).collect();
    let offmag = (0..n_levels.saturating_sub(1))
        .map(|n| abs_alpha * ((n + 1) as f64).sqrt())
        .collect();
    let alpha_sign = if cp.alpha < 0.0 { -1.0 } else { 1.0 };
    Ok(HermitianTridiagonal { diag, offmag, alpha_sign })
}

/// Eigenvalues of the two-level truncation in closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoLevelResult {
    /// Lower eigenvalue E₋ = ħω₀[1 − √(¼+r²)] (eV).
    pub e_minus: f64,
    /// Upper eigenvalue E₊ = ħω₀[1 + √(¼+r²)] (eV).
    pub e_plus: f64,
    /// Transition ratio ν = (E₊−E₋)/ħω₀ = 2√(¼+r²); ≥ 1, equal to 1 iff α = 0.
    pub transition_ratio: f64,
}

/// Closed-form two-level spectrum E± = ħω₀[1 ± √(¼ + r²)].
pub fn two_level_energies(cp: &CouplingParams, mol: &MoleculeSpec) -> TwoLevelResult {
    let hw = mol.hbar_omega0();
    let s = (0.25 + cp.ratio * cp.ratio).sqrt();
    TwoLevelResult {
        e_minus: hw * (1.0 - s),
        e_plus: hw * (1.0 + s),
        transition_ratio: 2.0 * s,
    }
}
