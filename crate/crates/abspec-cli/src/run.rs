//! Dispatch a validated [`RunConfig`], build the CSV payload and summary,
//! and write outputs atomically (temp file + rename, so failures never
//! leave partial files).
//!
//! CSV numbers use the shortest round-trip decimal representation (at most
//! 17 significant digits), so identical configs produce byte-identical
//! outputs.

use std::error::Error;
use std::fmt::{self, Write as _};
use std::fs;
use std::path::Path;

use abspec::coil::{a0_gauge_independent, a_z_on_axis, required_current};
use abspec::constants::{PhysicalConstants, CODATA_2018};
use abspec::eigensolver::{eigenvalues, phase_reduce, DEFAULT_TOL};
use abspec::molecule::MoleculeSpec;
use abspec::oscillator::{build_hamiltonian, coupling_alpha, two_level_energies};
use abspec::spectrum::{convergence_study, line_profile_weighted, ProfileMode};

use crate::config::{Command, ConfigError, MoleculeConfig, RunConfig, SchemeConfig};

/// Run failures, mapped onto process exit codes.
#[derive(Debug, Clone, PartialEq)]
pub enum RunError {
    /// Invalid configuration (exit code 2).
    Config(ConfigError),
    /// Computation failure such as eigensolver non-convergence (exit code 3).
    Compute(String),
    /// Filesystem failure (exit code 4).
    Io(String),
}

impl RunError {
    /// Process exit code for this failure class.
    pub fn exit_code(&self) -> u8 {
        match self {
            RunError::Config(_) => 2,
            RunError::Compute(_) => 3,
            RunError::Io(_) => 4,
        }
    }
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::Config(e) => write!(f, "config: {e}"),
            RunError::Compute(m) => write!(f, "compute: {m}"),
            RunError::Io(m) => write!(f, "io: {m}"),
        }
    }
}

impl Error for RunError {}

impl From<ConfigError> for RunError {
    fn from(e: ConfigError) -> Self {
        RunError::Config(e)
    }
}

fn compute_err(e: impl fmt::Display) -> RunError {
    RunError::Compute(e.to_string())
}

/// Everything one invocation produces.
#[derive(Debug, Clone, PartialEq)]
pub struct RunArtifacts {
    /// CSV payload written to `output_path`.
    pub csv: String,
    /// Human-readable summary for standard output, ending with the
    /// `wrote <path>` line.
    pub summary: String,
    /// Destination path of the CSV.
    pub output_path: String,
    /// Advisory messages for standard error.
    pub warnings: Vec<String>,
}

/// Execute the computation and write the CSV atomically.
pub fn run(config: &RunConfig) -> Result<RunArtifacts, RunError> {
    let artifacts = execute(config)?;
    write_atomic(&artifacts.output_path, &artifacts.csv)?;
    Ok(artifacts)
}

/// Execute the computation without touching the filesystem.
pub fn execute(config: &RunConfig) -> Result<RunArtifacts, RunError> {
    match config.command {
        Command::Eigen => run_eigen(config),
        Command::Spectrum => run_spectrum(config),
        Command::Coil => run_coil(config),
        Command::Design => run_design(config),
        Command::Converge => run_converge(config),
    }
}

/// Write `content` to `path` via a temp file in the same directory plus an
/// atomic rename; removes the temp file on failure.
pub fn write_atomic(path: &str, content: &str) -> Result<(), RunError> {
    let path = Path::new(path);
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let name = path
        .file_name()
        .ok_or_else(|| RunError::Io(format!("output path `{}` has no file name", path.display())))?;
    let tmp = dir.join(format!(
        ".{}.{}.tmp",
        name.to_string_lossy(),
        std::process::id()
    ));
    fs::write(&tmp, content)
        .map_err(|e| RunError::Io(format!("writing `{}`: {e}", tmp.display())))?;
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        RunError::Io(format!("renaming into `{}`: {e}", path.display()))
    })?;
    Ok(())
}

fn molecule_name(config: &RunConfig) -> &str {
    match &config.molecule {
        Some(MoleculeConfig::Preset(name)) => name,
        _ => "custom",
    }
}

fn push_molecule_block(out: &mut String, config: &RunConfig, mol: &MoleculeSpec, k: &PhysicalConstants) {
    let _ = writeln!(out, "molecule: {}", molecule_name(config));
    let _ = writeln!(out, "mass_1 = {} u", mol.mass_1());
    let _ = writeln!(out, "mass_2 = {} u", mol.mass_2());
    let _ = writeln!(out, "hbar_omega0 = {} eV", mol.hbar_omega0());
    let _ = writeln!(out, "reduced_mass = {} u", mol.reduced_mass());
    let _ = writeln!(out, "reduced_rest_energy = {} eV", mol.reduced_rest_energy(k));
}

fn run_eigen(config: &RunConfig) -> Result<RunArtifacts, RunError> {
    let k = CODATA_2018;
    let mol = config.molecule_spec()?;
    let n_levels = config.n_levels.expect("validated");
    let a0 = config.coupling_a0(&mol, &k)?;
    let cp = coupling_alpha(a0, 1.0, &mol, &k).map_err(compute_err)?;
    let h = build_hamiltonian(n_levels, &cp, &mol).map_err(compute_err)?;
    let res = eigenvalues(&phase_reduce(&h), DEFAULT_TOL).map_err(compute_err)?;

    let mut csv = String::from("index,energy_ev\n");
    for (i, ev) in res.eigenvalues.iter().enumerate() {
        let _ = writeln!(csv, "{i},{ev}");
    }

    let mut s = String::from("command: eigen\n");
    push_molecule_block(&mut s, config, &mol, &k);
    let _ = writeln!(s, "a0 = {} T*m", cp.a0());
    let _ = writeln!(s, "alpha = {} eV", cp.alpha());
    let _ = writeln!(s, "ratio = {}", cp.ratio());
    let _ = writeln!(s, "n_levels = {n_levels}");
    let two = two_level_energies(&cp, &mol);
    let _ = writeln!(s, "two_level_nu = {}", two.transition_ratio);
    if n_levels >= 2 {
        let nu = (res.eigenvalues[1] - res.eigenvalues[0]) / mol.hbar_omega0();
        let _ = writeln!(s, "n_level_nu = {nu}");
    }
    finish(config, csv, s)
}

fn run_spectrum(config: &RunConfig) -> Result<RunArtifacts, RunError> {
    let k = CODATA_2018;
    let mol = config.molecule_spec()?;
    let a0 = config.coupling_a0(&mol, &k)?;
    let mode = config.profile_mode()?;
    let ens = config.orientation_ensemble()?;
    let n_bins = config.bin_count()?;
    let dipole = config.dipole_weighting.unwrap_or(false);
    let spectrum = line_profile_weighted(&mol, a0, &ens, mode, n_bins, dipole, &k)
        .map_err(compute_err)?;
    let cp = coupling_alpha(a0, 1.0, &mol, &k).map_err(compute_err)?;

    let mut s = String::from("command: spectrum\n");
    push_molecule_block(&mut s, config, &mol, &k);
    let _ = writeln!(s, "a0 = {} T*m", cp.a0());
    let _ = writeln!(s, "alpha = {} eV", cp.alpha());
    let _ = writeln!(s, "ratio = {}", cp.ratio());
    let mode_name = match mode {
        ProfileMode::TwoLevel => "two_level".to_string(),
        ProfileMode::FullNLevel(n) => format!("full_n_level({n})"),
    };
    let _ = writeln!(s, "mode = {mode_name}");
    let scheme = match config.ensemble.map(|e| e.scheme).unwrap_or_default() {
        SchemeConfig::UniformGrid => "uniform_grid",
        SchemeConfig::GaussLegendre => "gauss_legendre",
    };
    let _ = writeln!(s, "scheme = {scheme}");
    let _ = writeln!(s, "n_samples = {}", ens.n_samples());
    let _ = writeln!(s, "n_bins = {n_bins}");
    let _ = writeln!(s, "dipole_weighting = {dipole}");
    let _ = writeln!(s, "nu_min = {}", spectrum.nu_min());
    let _ = writeln!(s, "nu_max = {}", spectrum.nu_max());

    finish(config, spectrum.to_csv(), s)
}

fn run_coil(config: &RunConfig) -> Result<RunArtifacts, RunError> {
    let k = CODATA_2018;
    let toroid = config.toroid_spec(true)?;
    let zs = config.z_samples(&toroid)?;

    let mut csv = String::from("z_m,a_z_tm\n");
    for &z in &zs {
        let az = a_z_on_axis(&toroid, z, &k);
        let _ = writeln!(csv, "{z},{az}");
    }

    let mut s = String::from("command: coil\n");
    let _ = writeln!(s, "inner_radius = {} m", toroid.inner_radius());
    let _ = writeln!(s, "revolution_radius = {} m", toroid.revolution_radius());
    let _ = writeln!(s, "n_loops = {}", toroid.n_loops());
    let _ = writeln!(s, "current = {} A", toroid.current());
    let _ = writeln!(s, "a_z_at_zero = {} T*m", a_z_on_axis(&toroid, 0.0, &k));
    let _ = writeln!(s, "a0_gauge_independent = {} T*m", a0_gauge_independent(&toroid, &k));
    let _ = writeln!(s, "z_min = {} m", zs[0]);
    let _ = writeln!(s, "z_max = {} m", zs[zs.len() - 1]);
    let _ = writeln!(s, "z_points = {}", zs.len());

    let mut warnings = Vec::new();
    if toroid.outside_thin_torus_regime() {
        warnings.push(format!(
            "warning: a/b = {} exceeds 0.5; the on-axis thin-torus formula degrades",
            toroid.inner_radius() / toroid.revolution_radius()
        ));
    }
    finish_with_warnings(config, csv, s, warnings)
}

fn run_design(config: &RunConfig) -> Result<RunArtifacts, RunError> {
    let k = CODATA_2018;
    let mol = config.molecule_spec()?;
    let toroid = config.toroid_spec(false)?;
    let target = config.target_ratio.expect("validated");

    let current = required_current(&toroid, &mol, target, &k).map_err(compute_err)?;
    let driven = toroid.with_current(current).map_err(compute_err)?;
    let a0_driven = a_z_on_axis(&driven, 0.0, &k);
    let unit = toroid.with_current(1.0).map_err(compute_err)?;
    let a0_per_ampere = a_z_on_axis(&unit, 0.0, &k);
    let cp = coupling_alpha(a0_driven, 1.0, &mol, &k).map_err(compute_err)?;
    let two = two_level_energies(&cp, &mol);

    let rows: Vec<(&str, f64, &str)> = vec![
        ("reduced_mass", mol.reduced_mass(), "u"),
        ("reduced_rest_energy", mol.reduced_rest_energy(&k), "eV"),
        ("hbar_omega0", mol.hbar_omega0(), "eV"),
        ("target_ratio", target, "dimensionless"),
        ("a0_per_ampere", a0_per_ampere, "T*m/A"),
        ("required_current", current, "A"),
        ("a0_at_required_current", a0_driven, "T*m"),
        ("alpha_at_target", cp.alpha(), "eV"),
        ("nu_max_at_target", two.transition_ratio, "dimensionless"),
    ];
    let mut csv = String::from("quantity,value,unit\n");
    for (q, v, u) in &rows {
        let _ = writeln!(csv, "{q},{v},{u}");
    }

    let mut s = String::from("command: design\n");
    push_molecule_block(&mut s, config, &mol, &k);
    let _ = writeln!(s, "inner_radius = {} m", toroid.inner_radius());
    let _ = writeln!(s, "revolution_radius = {} m", toroid.revolution_radius());
    let _ = writeln!(s, "n_loops = {}", toroid.n_loops());
    let _ = writeln!(s, "target_ratio = {target}");
    let _ = writeln!(s, "a0_per_ampere = {a0_per_ampere} T*m/A");
    let _ = writeln!(s, "required_current = {current} A");
    let _ = writeln!(s, "a0_at_required_current = {a0_driven} T*m");
    let _ = writeln!(s, "alpha_at_target = {} eV", cp.alpha());
    let _ = writeln!(s, "nu_max_at_target = {}", two.transition_ratio);

    let mut warnings = Vec::new();
    if toroid.outside_thin_torus_regime() {
        warnings.push(format!(
            "warning: a/b = {} exceeds 0.5; the on-axis thin-torus formula degrades",
            toroid.inner_radius() / toroid.revolution_radius()
        ));
    }
    finish_with_warnings(config, csv, s, warnings)
}

fn run_converge(config: &RunConfig) -> Result<RunArtifacts, RunError> {
    let k = CODATA_2018;
    let mol = config.molecule_spec()?;
    let a0 = config.coupling_a0(&mol, &k)?;
    let r0 = coupling_alpha(a0, 1.0, &mol, &k).map_err(compute_err)?.ratio();
    let list = config.n_levels_list.clone().expect("validated");
    let table = convergence_study(&mol, r0, &list, &k).map_err(compute_err)?;

    let mut csv = String::from("n_levels,nu\n");
    for &(n, nu) in &table {
        let _ = writeln!(csv, "{n},{nu}");
    }

    let mut s = String::from("command: converge\n");
    push_molecule_block(&mut s, config, &mol, &k);
    let _ = writeln!(s, "a0 = {a0} T*m");
    let _ = writeln!(s, "ratio = {r0}");
    let ns: Vec<String> = table.iter().map(|&(n, _)| n.to_string()).collect();
    let _ = writeln!(s, "n_levels_list = [{}]", ns.join(", "));
    let _ = writeln!(s, "final_nu = {}", table.last().expect("non-empty").1);

    finish(config, csv, s)
}

fn finish(config: &RunConfig, csv: String, summary: String) -> Result<RunArtifacts, RunError> {
    finish_with_warnings(config, csv, summary, Vec::new())
}

fn finish_with_warnings(
    config: &RunConfig,
    csv: String,
    mut summary: String,
    warnings: Vec<String>,
) -> Result<RunArtifacts, RunError> {
    let output_path = config.output_path();
    let _ = writeln!(summary, "wrote {output_path}");
    Ok(RunArtifacts { csv, summary, output_path, warnings })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    #[test]
    fn exit_codes() {
        assert_eq!(
            RunError::Config(ConfigError::ConflictingCoupling).exit_code(),
            2
        );
        assert_eq!(RunError::Compute("x".into()).exit_code(), 3);
        assert_eq!(RunError::Io("x".into()).exit_code(), 4);
    }

    #[test]
    fn eigen_two_level_matches_closed_form() {
        let cfg = parse_config(
            r#"{"command":"eigen","molecule":"HCl","coupling":{"ratio":1.0},"n_levels":2}"#,
        )
        .unwrap();
        let art = execute(&cfg).unwrap();
        let lines: Vec<&str> = art.csv.lines().collect();
        assert_eq!(lines[0], "index,energy_ev");
        let e0: f64 = lines[1].split(',').nth(1).unwrap().parse().unwrap();
        let e1: f64 = lines[2].split(',').nth(1).unwrap().parse().unwrap();
        let hw = 0.05;
        let s = 1.25_f64.sqrt();
        assert!((e0 - hw * (1.0 - s)).abs() < 1e-15);
        assert!((e1 - hw * (1.0 + s)).abs() < 1e-15);
        assert!(art.summary.contains("two_level_nu = 2.23606797749979"));
    }

    #[test]
    fn spectrum_zero_potential_single_row() {
        let cfg = parse_config(
            r#"{"command":"spectrum","molecule":"HCl","coupling":{"a0":0.0}}"#,
        )
        .unwrap();
        let art = execute(&cfg).unwrap();
        assert_eq!(art.csv, "nu,weight\n1,1\n");
    }

    #[test]
    fn design_emits_quantity_rows() {
        let cfg = parse_config(
            r#"{"command":"design","molecule":"HCl",
                "toroid":{"inner_radius":0.02,"revolution_radius":0.06,"n_loops":1000},
                "target_ratio":1.0}"#,
        )
        .unwrap();
        let art = execute(&cfg).unwrap();
        assert!(art.csv.starts_with("quantity,value,unit\n"));
        let row = art
            .csv
            .lines()
            .find(|l| l.starts_with("required_current,"))
            .unwrap();
        let value: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
        assert!((value - 0.9128256959981745).abs() < 1e-12);
        assert!(row.ends_with(",A"));
    }

    #[test]
    fn coil_csv_is_even_in_z() {
        let cfg = parse_config(
            r#"{"command":"coil",
                "toroid":{"inner_radius":0.02,"revolution_radius":0.06,"n_loops":1000,"current":1.0},
                "z_range":{"min":-0.1,"max":0.1,"points":11}}"#,
        )
        .unwrap();
        let art = execute(&cfg).unwrap();
        let rows: Vec<(f64, f64)> = art
            .csv
            .lines()
            .skip(1)
            .map(|l| {
                let mut it = l.split(',');
                (
                    it.next().unwrap().parse().unwrap(),
                    it.next().unwrap().parse().unwrap(),
                )
            })
            .collect();
        assert_eq!(rows.len(), 11);
        for i in 0..rows.len() {
            let (z, az) = rows[i];
            let (zm, azm) = rows[rows.len() - 1 - i];
            assert!((z + zm).abs() < 1e-15);
            assert!((az - azm).abs() <= 1e-15 * az.abs());
        }
    }

    #[test]
    fn thin_torus_warning_surfaces() {
        let cfg = parse_config(
            r#"{"command":"coil",
                "toroid":{"inner_radius":0.05,"revolution_radius":0.06,"n_loops":10,"current":1.0}}"#,
        )
        .unwrap();
        let art = execute(&cfg).unwrap();
        assert_eq!(art.warnings.len(), 1);
        assert!(art.warnings[0].contains("exceeds 0.5"));
    }

    #[test]
    fn atomic_write_leaves_no_temp_files() {
        let dir = std::env::temp_dir().join(format!("abspec-run-test-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let target = dir.join("out.csv");
        write_atomic(target.to_str().unwrap(), "a,b\n1,2\n").unwrap();
        assert_eq!(fs::read_to_string(&target).unwrap(), "a,b\n1,2\n");
        let leftovers: Vec<_> = fs::read_dir(&dir)
            .unwrap()
            .filter_map(|e| e.ok())
            .filter(|e| e.file_name().to_string_lossy().ends_with(".tmp"))
            .collect();
        assert!(leftovers.is_empty());
        fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn atomic_write_fails_cleanly_on_missing_directory() {
        let dir = std::env::temp_dir().join(format!(
            "abspec-run-missing-{}/nope",
            std::process::id()
        ));
        let target = dir.join("out.csv");
        let err = write_atomic(target.to_str().unwrap(), "x").unwrap_err();
        assert_eq!(err.exit_code(), 4);
    }
}
