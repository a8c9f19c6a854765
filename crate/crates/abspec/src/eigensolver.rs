//! Eigenvalues of the truncated Hamiltonian.
//!
//! The Hermitian tridiagonal matrix is first phase-reduced to a real
//! symmetric tridiagonal one (a diagonal-unitary similarity, so the spectrum
//! is untouched), then solved with implicit QL using Wilkinson shifts —
//! O(N²) total and robust for this matrix family. Two independent oracles
//! live alongside the production path: Sturm-sequence bisection on the
//! characteristic-polynomial recurrence (test-scale, N ≤ 8) and the
//! closed-form displaced spectrum of the completed square.

use std::error::Error;
use std::fmt;

use crate::molecule::MoleculeSpec;
use crate::oscillator::{CouplingParams, HermitianTridiagonal};

/// Default relative tolerance for the QL iteration.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Iteration cap: QL sweeps allowed per eigenvalue before giving up.
pub const MAX_SWEEPS: usize = 64;

/// Dimension cap for the characteristic-polynomial oracle.
pub const ORACLE_MAX_DIM: usize = 8;

/// A real symmetric tridiagonal matrix (diagonal + one off-diagonal), eV.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricTridiagonal {
    diag: Vec<f64>,
    offdiag: Vec<f64>,
}

/// Eigensolver failures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EigenError {
    /// The QL sweep for one eigenvalue exceeded [`MAX_SWEEPS`].
    NonConvergence { index: usize, sweeps: usize },
    /// Tolerance outside (0, 1e-6].
    InvalidTolerance(f64),
    /// The characteristic-polynomial oracle only handles N ≤ [`ORACLE_MAX_DIM`].
    OracleDimension(usize),
    /// Off-diagonal length must be one less than the diagonal length.
    DimensionMismatch { diag: usize, offdiag: usize },
    /// A matrix needs at least one row.
    EmptyMatrix,
    /// Matrix entries must be finite.
    NonFiniteEntry(f64),
}

impl fmt::Display for EigenError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EigenError::NonConvergence { index, sweeps } => write!(
                f,
                "eigenvalue {index} did not converge within {sweeps} QL sweeps"
            ),
            EigenError::InvalidTolerance(t) => {
                write!(f, "tolerance must lie in (0, 1e-6], got {t}")
            }
            EigenError::OracleDimension(n) => write!(
                f,
                "characteristic-polynomial oracle supports N <= {ORACLE_MAX_DIM}, got {n}"
            ),
            EigenError::DimensionMismatch { diag, offdiag } => write!(
                f,
                "off-diagonal length {offdiag} does not match diagonal length {diag}"
            ),
            EigenError::EmptyMatrix => write!(f, "matrix must have at least one row"),
            EigenError::NonFiniteEntry(x) => write!(f, "matrix entries must be finite, got {x}"),
        }
    }
}

impl Error for EigenError {}

impl SymmetricTridiagonal {
    /// Build from a diagonal of length N and an off-diagonal of length N−1.
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self, EigenError> {
        if diag.is_empty() {
            return Err(EigenError::EmptyMatrix);
        }
        if offdiag.len() + 1 != diag.len() {
            return Err(EigenError::DimensionMismatch {
                diag: diag.len(),
                offdiag: offdiag.len(),
            });
        }
        if let Some(&bad) = diag.iter().chain(offdiag.iter()).find(|x| !x.is_finite()) {
            return Err(EigenError::NonFiniteEntry(bad));
        }
        Ok(Self { diag, offdiag })
    }

    /// Matrix dimension N.
    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// Diagonal entries (eV).
    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    /// Off-diagonal entries (eV).
    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    /// Matrix 1-norm: max over columns of |e₋| + |d| + |e₊|.
    pub fn one_norm(&self) -> f64 {
        let n = self.dim();
        (0..n)
            .map(|j| {
                let left = if j > 0 { self.offdiag[j - 1].abs() } else { 0.0 };
                let right = if j + 1 < n { self.offdiag[j].abs() } else { 0.0 };
                left + self.diag[j].abs() + right
            })
            .fold(0.0, f64::max)
    }
}

/// All eigenvalues of a symmetric tridiagonal matrix, sorted ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenResult {
    /// Eigenvalues in ascending order (eV).
    pub eigenvalues: Vec<f64>,
    /// Total iterations spent (QL sweeps, or bisection steps for the oracle).
    pub iterations: usize,
    /// A-priori accuracy bound on each eigenvalue (eV).
    pub residual_bound: f64,
}

/// Strip the phases from the Hermitian tridiagonal matrix.
///
/// Conjugating by the diagonal unitary with entries (−i·s)ⁿ, s the recorded
/// sign of α, maps the (n, n+1) entry i·s·offmag\[n\] to +offmag\[n\] while
/// leaving the diagonal alone, so the symmetric matrix returned here has
/// exactly the same spectrum.
pub fn phase_reduce(h: &HermitianTridiagonal) -> SymmetricTridiagonal {
    SymmetricTridiagonal {
        diag: h.diag().to_vec(),
        offdiag: h.offmag().to_vec(),
    }
}

/// All eigenvalues by implicit QL with Wilkinson shifts.
///
/// Each returned value lies within `tol`·(matrix 1-norm) of a true
/// eigenvalue. An off-diagonal entry is treated as negligible once
/// |e\[m\]| ≤ tol·(|d\[m\]|+|d\[m+1\]|).
pub fn eigenvalues(t: &SymmetricTridiagonal, tol: f64) -> Result<EigenResult, EigenError> {
    if !(tol > 0.0 && tol <= 1e-6) {
        return Err(EigenError::InvalidTolerance(tol));
    }
    let n = t.dim();
    let mut d = t.diag.clone();
    if n == 1 {
        return Ok(EigenResult {
            eigenvalues: d,
            iterations: 0,
            residual_bound: 0.0,
        });
    }
    let mut e = t.offdiag.clone();
    e.push(0.0);

    let mut total_sweeps = 0usize;
    for l in 0..n {
        let mut sweeps = 0usize;
        loop {
            // locate the first negligible off-diagonal at or after l
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= tol * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            if sweeps >= MAX_SWEEPS {
                return Err(EigenError::NonConvergence { index: l, sweeps });
            }
            sweeps += 1;
            total_sweeps += 1;

            // Wilkinson shift from the leading 2x2 block
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0f64;
            let mut c = 1.0f64;
            let mut p = 0.0f64;
            let mut underflow = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    // rotation annihilated early; restart the sweep
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }

    d.sort_by(|a, b| a.partial_cmp(b).expect("eigenvalues are not NaN"));
    Ok(EigenResult {
        eigenvalues: d,
        iterations: total_sweeps,
        residual_bound: tol * t.one_norm(),
    })
}

/// Number of eigenvalues of `t` strictly below `lambda`.
///
/// Sturm count on the characteristic-polynomial recurrence
/// pₖ = (dₖ₋₁−λ)pₖ₋₁ − e²ₖ₋₂ pₖ₋₂, evaluated in ratio form
/// qₖ = pₖ/pₖ₋₁ = (dₖ₋₁−λ) − e²ₖ₋₂/qₖ₋₁ so the minors can neither overflow
/// nor cascade through exact zeros: the number of negative ratios equals the
/// number of sign changes of the minors. A vanishing ratio is nudged to
/// +MIN_POSITIVE, which keeps exact eigenvalue hits counted consistently.
fn sturm_count_below(diag: &[f64], offdiag: &[f64], lambda: f64) -> usize {
    let mut count = 0usize;
    let mut q = diag[0] - lambda;
    if q < 0.0 {
        count += 1;
    }
    for i in 1..diag.len() {
        if q == 0.0 {
            q = f64::MIN_POSITIVE;
        }
        let off2 = offdiag[i - 1] * offdiag[i - 1];
        q = (diag[i] - lambda) - off2 / q;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Independent oracle: all eigenvalues via Sturm-sequence bisection on the
/// characteristic-polynomial recurrence, bracketed by Gershgorin discs and
/// refined to the last representable bits (well past 1e-13 relative).
///
/// Deliberately restricted to N ≤ [`ORACLE_MAX_DIM`]: this path exists to
/// cross-check [`eigenvalues`] at test scale, not to compete with it.
pub fn oracle_charpoly_eigenvalues(t: &SymmetricTridiagonal) -> Result<EigenResult, EigenError> {
    let n = t.dim();
    if n > ORACLE_MAX_DIM {
        return Err(EigenError::OracleDimension(n));
    }

    // Gershgorin bracket for the whole spectrum
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let left = if i > 0 { t.offdiag[i - 1].abs() } else { 0.0 };
        let right = if i + 1 < n { t.offdiag[i].abs() } else { 0.0 };
        lo = lo.min(t.diag[i] - left - right);
        hi = hi.max(t.diag[i] + left + right);
    }
    let pad = 1.0 + 1e-12 * (hi - lo).abs();
    lo -= pad;
    hi += pad;

    let mut iterations = 0usize;
    let mut residual_bound = 0.0f64;
    let mut eigenvalues = Vec::with_capacity(n);
    for k in 0..n {
        let mut a = lo;
        let mut b = hi;
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break; // interval at floating-point resolution
            }
            iterations += 1;
            if sturm_count_below(&t.diag, &t.offdiag, mid) <= k {
                a = mid;
            } else {
                b = mid;
            }
        }
        residual_bound = residual_bound.max(0.5 * (b - a));
        eigenvalues.push(0.5 * (a + b));
    }
    Ok(EigenResult {
        eigenvalues,
        iterations,
        residual_bound,
    })
}

/// Exact spectrum of the completed square, as a closed-form oracle.
///
/// The linear-in-momentum coupling is removable by a momentum shift: writing
/// (p² − 2eA₀cosθ·p)/2μ = (p − eA₀cosθ)²/2μ − (eA₀cosθ)²/2μ shows the exact
/// (untruncated) spectrum is the oscillator ladder displaced uniformly
/// downward, Eₙ = ħω₀(n+½) − r²ħω₀. Level spacings are unchanged, so any
/// spacing change in a truncated solve is a truncation artifact.
pub fn displaced_spectrum_oracle(
    n_levels: usize,
    cp: &CouplingParams,
    mol: &MoleculeSpec,
) -> Vec<f64> {
    let hw = mol.hbar_omega0();
    let shift = cp.ratio() * cp.ratio();
    (0..n_levels)
        .map(|n| hw * (n as f64 + 0.5 - shift))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::CODATA_2018;
    use crate::oscillator::build_hamiltonian;

    fn unit_mol() -> MoleculeSpec {
        MoleculeSpec::new(1.0, 1.0, 1.0).unwrap()
    }

    fn tridiag(diag: &[f64], off: &[f64]) -> SymmetricTridiagonal {
        SymmetricTridiagonal::new(diag.to_vec(), off.to_vec()).unwrap()
    }

    #[test]
    fn constructor_validates_shapes() {
        assert!(matches!(
            SymmetricTridiagonal::new(vec![], vec![]),
            Err(EigenError::EmptyMatrix)
        ));
        assert!(matches!(
            SymmetricTridiagonal::new(vec![1.0, 2.0], vec![0.1, 0.2]),
            Err(EigenError::DimensionMismatch { .. })
        ));
        assert!(matches!(
            SymmetricTridiagonal::new(vec![1.0, f64::NAN], vec![0.1]),
            Err(EigenError::NonFiniteEntry(_))
        ));
    }

    #[test]
    fn phase_reduce_preserves_entries() {
        let mol = unit_mol();
        let k = CODATA_2018;
        let cp = CouplingParams::from_ratio(1.0, &mol, &k);
        // N=2: diag (1/2, 3/2)·ħω₀, offdiag (α)
        let t = phase_reduce(&build_hamiltonian(2, &cp, &mol).unwrap());
        assert_eq!(t.diag(), &[0.5, 1.5]);
        assert_eq!(t.offdiag(), &[1.0]);
        // N=3, r=1: offdiag (ħω₀, √2 ħω₀)
        let t = phase_reduce(&build_hamiltonian(3, &cp, &mol).unwrap());
        assert_eq!(t.diag(), &[0.5, 1.5, 2.5]);
        assert!((t.offdiag()[0] - 1.0).abs() < 1e-15);
        assert!((t.offdiag()[1] - 2.0_f64.sqrt()).abs() < 1e-15);
        // zero coupling stays diagonal
        let cp0 = CouplingParams::from_ratio(0.0, &mol, &k);
        let t = phase_reduce(&build_hamiltonian(4, &cp0, &mol).unwrap());
        assert!(t.offdiag().iter().all(|&x| x == 0.0));
    }

    #[test]
    fn single_level_returns_diagonal_entry() {
        let t = tridiag(&[0.025], &[]);
        let res = eigenvalues(&t, DEFAULT_TOL).unwrap();
        assert_eq!(res.eigenvalues, vec![0.025]);
        assert_eq!(res.iterations, 0);
    }

    #[test]
    fn diagonal_matrix_solved_exactly() {
        let t = tridiag(&[0.5, 1.5, 2.5, 3.5, 4.5], &[0.0; 4]);
        let res = eigenvalues(&t, DEFAULT_TOL).unwrap();
        assert_eq!(res.eigenvalues, vec![0.5, 1.5, 2.5, 3.5, 4.5]);
    }

    #[test]
    fn two_level_closed_form() {
        // diag (1/2, 3/2), off (1): eigenvalues 1 ± sqrt(1.25)
        let t = tridiag(&[0.5, 1.5], &[1.0]);
        let res = eigenvalues(&t, DEFAULT_TOL).unwrap();
        let s = 1.25_f64.sqrt();
        assert!((res.eigenvalues[0] - (1.0 - s)).abs() < 1e-14);
        assert!((res.eigenvalues[1] - (1.0 + s)).abs() < 1e-14);
    }

    #[test]
    fn three_level_frozen_roots() {
        // Roots of the cubic characteristic polynomial for diag(0.5,1.5,2.5),
        // offdiag(1,√2), computed with an independent bisection before the
        // production solver was written.
        let expected = [
            -0.36080585311170343,
            1.2458983116349476,
            3.6149075414767564,
        ];
        let t = tridiag(&[0.5, 1.5, 2.5], &[1.0, 2.0_f64.sqrt()]);
        let res = eigenvalues(&t, DEFAULT_TOL).unwrap();
        for (got, want) in res.eigenvalues.iter().zip(expected.iter()) {
            assert!(
                (got - want).abs() <= 1e-12 * want.abs(),
                "QL root {got} != frozen {want}"
            );
        }
        let orc = oracle_charpoly_eigenvalues(&t).unwrap();
        for (got, want) in orc.eigenvalues.iter().zip(expected.iter()) {
            assert!(
                (got - want).abs() <= 1e-12 * want.abs(),
                "oracle root {got} != frozen {want}"
            );
        }
    }

    #[test]
    fn rejects_invalid_tolerance() {
        let t = tridiag(&[1.0, 2.0], &[0.5]);
        assert!(matches!(
            eigenvalues(&t, 0.0),
            Err(EigenError::InvalidTolerance(_))
        ));
        assert!(matches!(
            eigenvalues(&t, 1e-5),
            Err(EigenError::InvalidTolerance(_))
        ));
        assert!(matches!(
            eigenvalues(&t, -1e-12),
            Err(EigenError::InvalidTolerance(_))
        ));
    }

    #[test]
    fn oracle_rejects_large_matrices() {
        let t = tridiag(&[0.0; 9], &[1.0; 8]);
        assert!(matches!(
            oracle_charpoly_eigenvalues(&t),
            Err(EigenError::OracleDimension(9))
        ));
    }

    #[test]
    fn oracle_diagonal_input() {
        let t = tridiag(&[3.0, -1.0, 2.0], &[0.0, 0.0]);
        let res = oracle_charpoly_eigenvalues(&t).unwrap();
        let expect = [-1.0, 2.0, 3.0];
        for (got, want) in res.eigenvalues.iter().zip(expect.iter()) {
            assert!((got - want).abs() < 1e-13, "{got} vs {want}");
        }
    }

    #[test]
    fn oracle_matches_two_level_closed_form() {
        let t = tridiag(&[0.5, 1.5], &[1.0]);
        let res = oracle_charpoly_eigenvalues(&t).unwrap();
        let s = 1.25_f64.sqrt();
        assert!((res.eigenvalues[0] - (1.0 - s)).abs() < 1e-12);
        assert!((res.eigenvalues[1] - (1.0 + s)).abs() < 1e-12);
    }

    #[test]
    fn sturm_count_brackets_eigenvalues() {
        // known chain: d=0, e=-1, N=4; eigenvalues 2cos(kπ/5)
        let t = tridiag(&[0.0; 4], &[-1.0; 3]);
        assert_eq!(sturm_count_below(t.diag(), t.offdiag(), -2.0), 0);
        assert_eq!(sturm_count_below(t.diag(), t.offdiag(), 0.0), 2);
        assert_eq!(sturm_count_below(t.diag(), t.offdiag(), 2.0), 4);
    }

    #[test]
    fn production_matches_oracle_n6() {
        let mol = unit_mol();
        let k = CODATA_2018;
        let cp = CouplingParams::from_ratio(0.5, &mol, &k);
        let t = phase_reduce(&build_hamiltonian(6, &cp, &mol).unwrap());
        let ql = eigenvalues(&t, DEFAULT_TOL).unwrap();
        let orc = oracle_charpoly_eigenvalues(&t).unwrap();
        for (a, b) in ql.eigenvalues.iter().zip(orc.eigenvalues.iter()) {
            let scale = a.abs().max(b.abs());
            assert!((a - b).abs() <= 1e-10 * scale, "{a} vs {b}");
        }
    }

    #[test]
    fn displaced_oracle_values() {
        let mol = unit_mol();
        let k = CODATA_2018;
        let cp0 = CouplingParams::from_ratio(0.0, &mol, &k);
        assert_eq!(displaced_spectrum_oracle(3, &cp0, &mol), vec![0.5, 1.5, 2.5]);
        let cp1 = CouplingParams::from_ratio(1.0, &mol, &k);
        let got = displaced_spectrum_oracle(3, &cp1, &mol);
        for (g, w) in got.iter().zip([-0.5, 0.5, 1.5].iter()) {
            assert!((g - w).abs() < 1e-14);
        }
        // uniform spacing for any r
        let cp = CouplingParams::from_ratio(2.7, &mol, &k);
        let e = displaced_spectrum_oracle(6, &cp, &mol);
        for w in e.windows(2) {
            assert!((w[1] - w[0] - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn trace_conserved_by_ql() {
        let mol = MoleculeSpec::hcl();
        let k = CODATA_2018;
        for &r in &[0.0, 0.3, 1.0, 4.0] {
            let cp = CouplingParams::from_ratio(r, &mol, &k);
            for n in [2usize, 5, 16, 48] {
                let t = phase_reduce(&build_hamiltonian(n, &cp, &mol).unwrap());
                let res = eigenvalues(&t, DEFAULT_TOL).unwrap();
                let sum: f64 = res.eigenvalues.iter().sum();
                let trace: f64 = t.diag().iter().sum();
                assert!(
                    (sum - trace).abs() <= 1e-12 * trace.abs(),
                    "trace broken: N={n} r={r} sum={sum} trace={trace}"
                );
            }
        }
    }
}
