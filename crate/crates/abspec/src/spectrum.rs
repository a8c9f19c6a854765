//! Orientation-averaged absorption-line profiles of an isotropic gas and
//! truncation-convergence studies.
//!
//! Isotropy enters through u = cosθ distributed uniformly on [−1, 1] (the
//! solid-angle measure for molecular axes uniform on the sphere). Each
//! orientation u absorbs at the frequency ratio ν(u) = ΔE(u)/ħω₀, so the
//! sharp line spreads over [ν(0), ν(1)]. Every molecule carries equal
//! absorption weight by default; an optional cos²θ dipole weighting is
//! available behind a flag.
//!
//! Sampling is deterministic (uniform grid or Gauss-Legendre), never Monte
//! Carlo. In the grid scheme each of the `n_samples` equal cells in u
//! deposits its weight uniformly over the ν-image of that cell, which keeps
//! the binned profile stable under refinement; the Gauss-Legendre scheme
//! bins quadrature weights at the node values.

use std::error::Error;
use std::fmt;

use crate::constants::PhysicalConstants;
use crate::eigensolver::{self, EigenError, DEFAULT_TOL};
use crate::molecule::MoleculeSpec;
use crate::oscillator::{self, CouplingParams, OscillatorError};

/// How orientation nodes are placed in u = cosθ over [−1, 1].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SamplingScheme {
    /// `n_samples` equal-width cells.
    UniformGrid,
    /// `n_samples` Gauss-Legendre nodes with their quadrature weights.
    GaussLegendre,
}

/// A deterministic orientation ensemble over u = cosθ ∈ [−1, 1].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrientationEnsemble {
    n_samples: usize,
    scheme: SamplingScheme,
}

/// Which transition model supplies ν(u).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileMode {
    /// Closed form of the two-level truncation: ν = 2√(¼ + (r₀u)²).
    TwoLevel,
    /// ν = (E₁−E₀)/ħω₀ from the N-level eigensolve; N ≥ 2.
    FullNLevel(usize),
}

/// A sampled absorption-line profile: normalized weights over uniform
/// frequency-ratio bins spanning [nu_min, nu_max].
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    mode: ProfileMode,
    bins: Vec<(f64, f64)>,
    nu_min: f64,
    nu_max: f64,
}

/// Profile-synthesis failures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpectrumError {
    /// The potential magnitude must be non-negative and finite.
    NegativePotential(f64),
    /// An ensemble needs at least two samples.
    TooFewSamples(usize),
    /// At least one bin is required.
    ZeroBins,
    /// Full-N-level mode needs at least two levels.
    TooFewLevels(usize),
    /// ν outside the analytic-density support (1, ν_max].
    NuOutsideSupport { nu: f64, nu_max: f64 },
    /// The analytic density is defined for r₀ > 0.
    NonPositiveRatio(f64),
    /// Propagated coupling/Hamiltonian failure.
    Oscillator(OscillatorError),
    /// Propagated eigensolver failure.
    Eigen(EigenError),
}

impl fmt::Display for SpectrumError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpectrumError::NegativePotential(a) => {
                write!(f, "vector potential must be non-negative and finite, got {a} T*m")
            }
            SpectrumError::TooFewSamples(n) => {
                write!(f, "orientation ensemble needs at least 2 samples, got {n}")
            }
            SpectrumError::ZeroBins => write!(f, "bin count must be at least 1"),
            SpectrumError::TooFewLevels(n) => {
                write!(f, "full-N-level mode needs at least 2 levels, got {n}")
            }
            SpectrumError::NuOutsideSupport { nu, nu_max } => {
                write!(f, "nu = {nu} outside the density support (1, {nu_max}]")
            }
            SpectrumError::NonPositiveRatio(r) => {
                write!(f, "analytic density requires r0 > 0, got {r}")
            }
            SpectrumError::Oscillator(e) => write!(f, "{e}"),
            SpectrumError::Eigen(e) => write!(f, "{e}"),
        }
    }
}

impl Error for SpectrumError {
    fn source(&self) -> Option<&(dyn Error + 'static)> {
        match self {
            SpectrumError::Oscillator(e) => Some(e),
            SpectrumError::Eigen(e) => Some(e),
            _ => None,
        }
    }
}

impl From<OscillatorError> for SpectrumError {
    fn from(e: OscillatorError) -> Self {
        SpectrumError::Oscillator(e)
    }
}

impl From<EigenError> for SpectrumError {
    fn from(e: EigenError) -> Self {
        SpectrumError::Eigen(e)
    }
}

impl OrientationEnsemble {
    /// Build an ensemble; `n_samples` must be at least 2.
    pub fn new(n_samples: usize, scheme: SamplingScheme) -> Result<Self, SpectrumError> {
        if n_samples < 2 {
            return Err(SpectrumError::TooFewSamples(n_samples));
        }
        Ok(Self { n_samples, scheme })
    }

    /// Uniform-grid ensemble.
    pub fn uniform_grid(n_samples: usize) -> Result<Self, SpectrumError> {
        Self::new(n_samples, SamplingScheme::UniformGrid)
    }

    /// Gauss-Legendre ensemble.
    pub fn gauss_legendre(n_samples: usize) -> Result<Self, SpectrumError> {
        Self::new(n_samples, SamplingScheme::GaussLegendre)
    }

    /// Node count.
    pub fn n_samples(&self) -> usize {
        self.n_samples
    }

    /// Node-placement scheme.
    pub fn scheme(&self) -> SamplingScheme {
        self.scheme
    }
}

impl Spectrum {
    /// Transition model used.
    pub fn mode(&self) -> ProfileMode {
        self.mode
    }

    /// (ν, weight) pairs, ascending in ν; weights sum to 1.
    pub fn bins(&self) -> &[(f64, f64)] {
        &self.bins
    }

    /// Lower support endpoint (ν at u = 0).
    pub fn nu_min(&self) -> f64 {
        self.nu_min
    }

    /// Upper support endpoint (ν at |u| = 1).
    pub fn nu_max(&self) -> f64 {
        self.nu_max
    }

    /// CSV serialization: header `nu,weight`, one row per bin, shortest
    /// round-trip decimal representation (at most 17 significant digits).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("nu,weight\n");
        for &(nu, w) in &self.bins {
            out.push_str(&format!("{nu},{w}\n"));
        }
        out
    }
}

/// ν(u) under the chosen mode, with r(u) = r₀·u.
fn transition_ratio_at(
    u: f64,
    a0: f64,
    mode: ProfileMode,
    mol: &MoleculeSpec,
    k: &PhysicalConstants,
) -> Result<f64, SpectrumError> {
    match mode {
        ProfileMode::TwoLevel => {
            let r = oscillator::coupling_alpha(a0, u, mol, k)?.ratio();
            Ok(2.0 * (0.25 + r * r).sqrt())
        }
        ProfileMode::FullNLevel(n) => {
            let cp = oscillator::coupling_alpha(a0, u, mol, k)?;
            let h = oscillator::build_hamiltonian(n, &cp, mol)?;
            let res = eigensolver::eigenvalues(&eigensolver::phase_reduce(&h), DEFAULT_TOL)?;
            Ok((res.eigenvalues[1] - res.eigenvalues[0]) / mol.hbar_omega0())
        }
    }
}

/// Index of the bin containing ν; endpoints clamp into the edge bins.
fn bin_of(nu: f64, nu_min: f64, width: f64, n_bins: usize) -> usize {
    let idx = ((nu - nu_min) / width * n_bins as f64).floor();
    if idx < 0.0 {
        0
    } else {
        (idx as usize).min(n_bins - 1)
    }
}

/// Deposit `mass` uniformly over the ν-interval [lo, hi] across the bins.
fn deposit_interval(acc: &mut [f64], nu_min: f64, width: f64, lo: f64, hi: f64, mass: f64) {
    let n_bins = acc.len();
    if hi <= lo {
        acc[bin_of(0.5 * (lo + hi), nu_min, width, n_bins)] += mass;
        return;
    }
    let k0 = bin_of(lo, nu_min, width, n_bins);
    let k1 = bin_of(hi, nu_min, width, n_bins);
    if k0 == k1 {
        acc[k0] += mass;
        return;
    }
    let density = mass / (hi - lo);
    let bin_width = width / n_bins as f64;
    let edge = |k: usize| nu_min + width * k as f64 / n_bins as f64;
    acc[k0] += density * (edge(k0 + 1) - lo).max(0.0);
    for slot in acc.iter_mut().take(k1).skip(k0 + 1) {
        *slot += density * bin_width;
    }
    acc[k1] += density * (hi - edge(k1)).max(0.0);
}

/// Grid-scheme binning: `edge_nu` holds ν at the n+1 cell edges in u, and
/// cell j (mass `cell_masses[j]`) deposits over [edge_nu\[j\], edge_nu\[j+1\]].
/// A cell straddling u = 0 is split there, since ν has its minimum `nu_at_zero`
/// inside it. Returns unnormalized bin masses.
fn grid_profile_bins(
    edge_u: &[f64],
    edge_nu: &[f64],
    cell_masses: &[f64],
    nu_at_zero: f64,
    nu_min: f64,
    width: f64,
    n_bins: usize,
) -> Vec<f64> {
    let mut acc = vec![0.0; n_bins];
    for j in 0..cell_masses.len() {
        let (ul, ur) = (edge_u[j], edge_u[j + 1]);
        let mass = cell_masses[j];
        if ul < 0.0 && ur > 0.0 {
            // interior minimum at u = 0: split proportionally in measure
            let frac_left = -ul / (ur - ul);
            let (lo, hi) = order(nu_at_zero, edge_nu[j]);
            deposit_interval(&mut acc, nu_min, width, lo, hi, mass * frac_left);
            let (lo, hi) = order(nu_at_zero, edge_nu[j + 1]);
            deposit_interval(&mut acc, nu_min, width, lo, hi, mass * (1.0 - frac_left));
        } else {
            let (lo, hi) = order(edge_nu[j], edge_nu[j + 1]);
            deposit_interval(&mut acc, nu_min, width, lo, hi, mass);
        }
    }
    acc
}

fn order(a: f64, b: f64) -> (f64, f64) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Orientation-averaged line profile with equal weight per molecule.
pub fn line_profile(
    mol: &MoleculeSpec,
    a0: f64,
    ens: &OrientationEnsemble,
    mode: ProfileMode,
    n_bins: usize,
    k: &PhysicalConstants,
) -> Result<Spectrum, SpectrumError> {
    line_profile_weighted(mol, a0, ens, mode, n_bins, false, k)
}

/// Orientation-averaged line profile; `dipole_weighting` multiplies each
/// orientation's absorption weight by cos²θ instead of weighting molecules
/// equally. Off by default — the modeling baseline assigns no intensities.
pub fn line_profile_weighted(
    mol: &MoleculeSpec,
    a0: f64,
    ens: &OrientationEnsemble,
    mode: ProfileMode,
    n_bins: usize,
    dipole_weighting: bool,
    k: &PhysicalConstants,
) -> Result<Spectrum, SpectrumError> {
    if !(a0.is_finite() && a0 >= 0.0) {
        return Err(SpectrumError::NegativePotential(a0));
    }
    if n_bins == 0 {
        return Err(SpectrumError::ZeroBins);
    }
    if let ProfileMode::FullNLevel(n) = mode {
        if n < 2 {
            return Err(SpectrumError::TooFewLevels(n));
        }
    }

    let (nu_min, nu_max) = match mode {
        ProfileMode::TwoLevel => {
            let r0 = oscillator::coupling_alpha(a0, 1.0, mol, k)?.ratio();
            (1.0, 2.0 * (0.25 + r0 * r0).sqrt())
        }
        ProfileMode::FullNLevel(_) => (
            transition_ratio_at(0.0, a0, mode, mol, k)?,
            transition_ratio_at(1.0, a0, mode, mol, k)?,
        ),
    };
    let width = nu_max - nu_min;
    if width <= 0.0 {
        // unperturbed sharp line: a single bin carries all the weight
        return Ok(Spectrum {
            mode,
            bins: vec![(nu_min, 1.0)],
            nu_min,
            nu_max,
        });
    }

    let raw = match ens.scheme {
        SamplingScheme::UniformGrid => {
            let n = ens.n_samples;
            let mut edge_u = Vec::with_capacity(n + 1);
            let mut edge_nu = Vec::with_capacity(n + 1);
            for j in 0..=n {
                let u = -1.0 + 2.0 * j as f64 / n as f64;
                edge_u.push(u);
                edge_nu.push(transition_ratio_at(u, a0, mode, mol, k)?);
            }
            let masses: Vec<f64> = (0..n)
                .map(|j| {
                    if dipole_weighting {
                        let uc = 0.5 * (edge_u[j] + edge_u[j + 1]);
                        uc * uc
                    } else {
                        1.0
                    }
                })
                .collect();
            grid_profile_bins(&edge_u, &edge_nu, &masses, nu_min, nu_min, width, n_bins)
        }
        SamplingScheme::GaussLegendre => {
            let mut acc = vec![0.0; n_bins];
            for (x, wq) in gauss_legendre(ens.n_samples) {
                let nu = transition_ratio_at(x, a0, mode, mol, k)?;
                let w = if dipole_weighting { wq * x * x } else { wq };
                acc[bin_of(nu, nu_min, width, n_bins)] += w;
            }
            acc
        }
    };

    let total: f64 = raw.iter().sum();
    let bin_width = width / n_bins as f64;
    let bins = raw
        .iter()
        .enumerate()
        .map(|(i, &w)| (nu_min + (i as f64 + 0.5) * bin_width, w / total))
        .collect();
    Ok(Spectrum {
        mode,
        bins,
        nu_min,
        nu_max,
    })
}

/// Normalized density of transition ratios for the two-level model under
/// isotropic averaging: g(ν) = ν / (2r₀√(ν²−1)) on the support (1, ν_max],
/// ν_max = 2√(¼+r₀²).
///
/// Derivation: u uniform on [−1,1] and ν(u) = 2√(¼+r₀²u²) give, by change
/// of variables, |du/dν| = ν/(2r₀√(ν²−1)) on the positive branch. The
/// ν→1⁺ divergence is integrable; the total mass over the support is 1.
pub fn analytic_two_level_density(nu: f64, r0: f64) -> Result<f64, SpectrumError> {
    if r0.is_nan() || r0 <= 0.0 {
        return Err(SpectrumError::NonPositiveRatio(r0));
    }
    let nu_max = 2.0 * (0.25 + r0 * r0).sqrt();
    if !(nu > 1.0 && nu <= nu_max) {
        return Err(SpectrumError::NuOutsideSupport { nu, nu_max });
    }
    Ok(nu / (2.0 * r0 * (nu * nu - 1.0).sqrt()))
}

/// ν(u=1) of the N-level truncation for each requested N, sorted by N.
///
/// Quantifies how fast the two-level broadening prediction decays as more
/// levels participate: the exact untruncated spectrum has uniform spacings,
/// so ν → 1 as N grows.
pub fn convergence_study(
    mol: &MoleculeSpec,
    r0: f64,
    n_levels_list: &[usize],
    k: &PhysicalConstants,
) -> Result<Vec<(usize, f64)>, SpectrumError> {
    let cp = CouplingParams::from_ratio(r0, mol, k);
    let mut ns = n_levels_list.to_vec();
    ns.sort_unstable();
    let mut table = Vec::with_capacity(ns.len());
    for &n in &ns {
        if n < 2 {
            return Err(SpectrumError::TooFewLevels(n));
        }
        let h = oscillator::build_hamiltonian(n, &cp, mol)?;
        let res = eigensolver::eigenvalues(&eigensolver::phase_reduce(&h), DEFAULT_TOL)?;
        table.push((n, (res.eigenvalues[1] - res.eigenvalues[0]) / mol.hbar_omega0()));
    }
    Ok(table)
}

/// Gauss-Legendre nodes and weights on [−1, 1] by Newton iteration on the
/// Legendre recurrence. Nodes ascending; weights sum to 2.
fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    use std::f64::consts::PI;
    let mut out = vec![(0.0, 0.0); n];
    let half = n.div_ceil(2);
    for i in 0..half {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() <= 1e-15 * x.abs().max(1.0) {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out[i] = (-x, w);
        out[n - 1 - i] = (x, w);
    }
    out
}

/// (P_n(x), P_n'(x)) via the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0_f64;
    let mut p = x;
    for j in 2..=n {
        let jf = j as f64;
        let p_next = ((2.0 * jf - 1.0) * x * p - (jf - 1.0) * p_prev) / jf;
        p_prev = p;
        p = p_next;
    }
    let dp = n as f64 * (x * p - p_prev) / (x * x - 1.0);
    (p, dp)
}
