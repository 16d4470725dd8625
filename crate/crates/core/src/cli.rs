//! Scenario runner behind the `qcohere` binary.
//!
//! A scenario names a state and an observable, either builtin or from a
//! JSON file (see [`crate::io`]). Subcommands select which analyses run;
//! every artifact is written under `--out-dir`:
//!
//! | file                 | written by                 | content                                   |
//! |----------------------|----------------------------|-------------------------------------------|
//! | `s<i>_coherence.csv` | `coherence`, `all`         | `j,k,re,im` for every coherence term      |
//! | `s<i>_witness.json`  | `witness`, `all`           | negativity certificate or classical verdict |
//! | `s<i>_p_phi.csv`     | `phase`, `all`             | `phi,value` of the single-phase `P(phi)`   |
//! | `s<i>_gamma.csv`     | `phase`, `all`             | `tau,re,im` of `Gamma(tau)`                |
//! | `s<i>_renyi.csv`     | `phase`, `all`             | `∫P² d𝛗`, `1 + C_HS`, Monte-Carlo estimate |
//! | `metrology.csv`      | `resolution`, `all`        | one summary row per scenario              |
//! | `signal.csv`         | `resolution`, `all`        | finite-`λ` distances per scenario          |
//!
//! With `--format json` the tables are written as `.json` arrays instead.
//! Floats in CSV carry 17 significant digits.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::coherence::{
    coherence_profile, commutator_norm, find_coherent_basis, hilbert_schmidt_coherence,
};
use crate::error::Error;
use crate::io::{ObservableFile, StateFile};
use crate::metrology::{
    density_matrix_distance, small_signal_quadratic, statistical_distance, uncertainty_bound_check,
    wiener_kintchine_resolution, Povm,
};
use crate::nonclassicality::witness_search;
use crate::oracle::{phase_state_expectation, torus_average};
use crate::phase::{multi_phase_distribution, renyi_integral, single_phase_distribution};
use crate::state::{random_basis, random_state, BasisObservable, DensityMatrix, UnitarySignal};
use crate::{tolerance, Complex64};

/// Points on the `P(phi)` plot grid.
pub const PHASE_GRID: usize = 256;
/// Worker threads for the Monte-Carlo check; fixed so results depend only on the seed.
pub const MC_WORKERS: usize = 8;

#[derive(Debug, Parser)]
#[command(
    name = "qcohere",
    version,
    about = "Coherence, nonclassicality and resolution analyses"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub overrides: Overrides,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Coherence terms and Hilbert-Schmidt coherence
    Coherence,
    /// Joint-distribution negativity witness
    Witness,
    /// Multi-phase and single-phase distributions
    Phase,
    /// Wiener-Kintchine resolution and small-signal distances
    Resolution,
    /// Every analysis
    All,
}

impl Command {
    fn runs(&self, analysis: Command) -> bool {
        *self == Command::All || *self == analysis
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Command-line values; each one overrides the scenario file.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct Overrides {
    /// Scenario file: a JSON object or array of objects
    #[arg(long, global = true)]
    pub scenario: Option<PathBuf>,
    /// State: file path, `mixed`, `plus` or `random:<seed>:<rank>`
    #[arg(long, global = true)]
    pub state: Option<String>,
    /// Observable: file path, `computational`, `linear`, `hadamard` or `random:<seed>`
    #[arg(long, global = true)]
    pub observable: Option<String>,
    /// Dimension for builtin states and observables (default 2)
    #[arg(long, global = true)]
    pub dim: Option<usize>,
    /// Signal value for the finite-signal distances
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub lambda: Option<f64>,
    /// Seed for the Monte-Carlo check
    #[arg(long, global = true, env = "QCOHERE_SEED")]
    pub seed: Option<u64>,
    /// Torus samples for the Monte-Carlo check of ∫P² (0 disables it)
    #[arg(long, global = true)]
    pub mc_samples: Option<usize>,
    /// Output directory (default `qcohere-out`)
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

/// One analysis target.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Scenario {
    pub state: String,
    pub observable: String,
    pub dim: Option<usize>,
    pub lambda: f64,
    pub seed: u64,
    pub mc_samples: usize,
    pub out_dir: PathBuf,
    pub format: Format,
    pub tol_witness: f64,
    pub eps: f64,
}

impl Default for Scenario {
    fn default() -> Self {
        Self {
            state: "plus".into(),
            observable: "linear".into(),
            dim: None,
            lambda: 1e-3,
            seed: 0,
            mc_samples: 0,
            out_dir: PathBuf::from("qcohere-out"),
            format: Format::Csv,
            tol_witness: tolerance::WITNESS,
            eps: tolerance::COHERENT_BASIS_EPS,
        }
    }
}

impl Scenario {
    fn apply(&mut self, o: &Overrides) {
        if let Some(v) = &o.state {
            self.state = v.clone();
        }
        if let Some(v) = &o.observable {
            self.observable = v.clone();
        }
        if o.dim.is_some() {
            self.dim = o.dim;
        }
        if let Some(v) = o.lambda {
            self.lambda = v;
        }
        if let Some(v) = o.seed {
            self.seed = v;
        }
        if let Some(v) = o.mc_samples {
            self.mc_samples = v;
        }
        if let Some(v) = &o.out_dir {
            self.out_dir = v.clone();
        }
        if let Some(v) = o.format {
            self.format = v;
        }
    }
}

/// Failure of a run, mapped onto the process exit status.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("i/o failure: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Validation(_) => 2,
            Self::Io(_) => 3,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        Self::Validation(e.to_string())
    }
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

/// Resolves the scenario list from the optional file and the overrides.
pub fn load_scenarios(overrides: &Overrides) -> Result<Vec<Scenario>, CliError> {
    let mut scenarios = match &overrides.scenario {
        None => vec![Scenario::default()],
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
            let malformed = |e: serde_json::Error| {
                CliError::Validation(format!("{}: malformed scenario: {e}", path.display()))
            };
            let value: Value = serde_json::from_str(&text).map_err(malformed)?;
            let list = if value.is_array() {
                serde_json::from_value::<Vec<Scenario>>(value).map_err(malformed)?
            } else {
                vec![serde_json::from_value::<Scenario>(value).map_err(malformed)?]
            };
            if list.is_empty() {
                return Err(CliError::Validation("scenario list is empty".into()));
            }
            list
        }
    };
    for s in &mut scenarios {
        s.apply(overrides);
    }
    let out = &scenarios[0].out_dir;
    if scenarios
        .iter()
        .any(|s| &s.out_dir != out || s.format != scenarios[0].format)
    {
        return Err(CliError::Validation(
            "all scenarios in one run must share out_dir and format".into(),
        ));
    }
    Ok(scenarios)
}

fn is_file_source(source: &str) -> bool {
    source.ends_with(".json") || source.contains('/')
}

fn read_json<T: serde::de::DeserializeOwned>(source: &str) -> Result<T, CliError> {
    let path = Path::new(source);
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Validation(format!("{source}: malformed file: {e}")))
}

fn parse_seed(part: Option<&str>, source: &str) -> Result<u64, CliError> {
    part.and_then(|s| s.parse().ok())
        .ok_or_else(|| CliError::Validation(format!("cannot parse builtin `{source}`")))
}

/// Loads the state; returns it with the dimension it fixes.
pub fn resolve_state(source: &str, dim: Option<usize>) -> Result<DensityMatrix, CliError> {
    if is_file_source(source) {
        let rho = read_json::<StateFile>(source)?.to_state()?;
        if let Some(d) = dim {
            if d != rho.dim() {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: rho.dim(),
                }
                .into());
            }
        }
        return Ok(rho);
    }
    let n = dim.unwrap_or(2);
    let mut parts = source.split(':');
    let rho = match parts.next() {
        Some("mixed") => DensityMatrix::maximally_mixed(n)?,
        Some("plus") => DensityMatrix::plus(n)?,
        Some("random") => {
            let seed = parse_seed(parts.next(), source)?;
            let rank = parts
                .next()
                .map_or(Ok(n as u64), |p| parse_seed(Some(p), source))?;
            random_state(n, rank as usize, seed)?
        }
        _ => return Err(CliError::Validation(format!("unknown state `{source}`"))),
    };
    Ok(rho)
}

pub fn resolve_observable(source: &str, dim: usize) -> Result<BasisObservable, CliError> {
    if is_file_source(source) {
        let g = read_json::<ObservableFile>(source)?.to_observable()?;
        if g.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: g.dim(),
            }
            .into());
        }
        return Ok(g);
    }
    let mut parts = source.split(':');
    let g = match parts.next() {
        Some("computational") => {
            BasisObservable::computational((0..dim).map(|j| j as f64).collect())?
        }
        Some("linear") => BasisObservable::linear(dim)?,
        Some("hadamard") => BasisObservable::fourier(dim)?,
        Some("random") => random_basis(dim, parse_seed(parts.next(), source)?)?,
        _ => {
            return Err(CliError::Validation(format!(
                "unknown observable `{source}`"
            )))
        }
    };
    Ok(g)
}

/// 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Output table, rendered as CSV or a JSON array of objects.
struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
}

enum Cell {
    Text(String),
    Int(i64),
    Num(f64),
    Missing,
}

impl Table {
    fn new(header: &[&'static str]) -> Self {
        Self {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => {
                let mut out = self.header.join(",");
                out.push('\n');
                for row in &self.rows {
                    let cells: Vec<String> = row
                        .iter()
                        .map(|c| match c {
                            Cell::Text(s) => s.clone(),
                            Cell::Int(i) => i.to_string(),
                            Cell::Num(x) => fmt_f64(*x),
                            Cell::Missing => String::new(),
                        })
                        .collect();
                    out.push_str(&cells.join(","));
                    out.push('\n');
                }
                out
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let mut obj = serde_json::Map::new();
                        for (key, cell) in self.header.iter().zip(row) {
                            let v = match cell {
                                Cell::Text(s) => json!(s),
                                Cell::Int(i) => json!(i),
                                Cell::Num(x) => json!(x),
                                Cell::Missing => Value::Null,
                            };
                            obj.insert((*key).to_string(), v);
                        }
                        Value::Object(obj)
                    })
                    .collect();
                let mut s = serde_json::to_string_pretty(&rows).expect("table serializes");
                s.push('\n');
                s
            }
        }
    }
}

fn extension(format: Format) -> &'static str {
    match format {
        Format::Csv => "csv",
        Format::Json => "json",
    }
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, CliError> {
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| io_err(&path, e))?;
    Ok(path)
}

/// Paths written and the human-readable summary of a run.
#[derive(Debug, Default)]
pub struct RunOutput {
    pub files: Vec<PathBuf>,
    pub summary: String,
}

/// Runs `command` over every scenario.
pub fn run(command: Command, scenarios: &[Scenario]) -> Result<RunOutput, CliError> {
    let first = scenarios
        .first()
        .ok_or_else(|| CliError::Validation("no scenario".into()))?;
    let out_dir = first.out_dir.clone();
    let format = first.format;
    fs::create_dir_all(&out_dir).map_err(|e| io_err(&out_dir, e))?;
    let ext = extension(format);

    let mut output = RunOutput::default();
    let mut metrology = Table::new(&[
        "state_id",
        "basis_id",
        "C_HS",
        "witness_p_min",
        "delta2_lambda",
        "d2_coeff",
        "D2_coeff",
        "bound_lhs",
        "bound_rhs",
    ]);
    let mut signal = Table::new(&["state_id", "basis_id", "lambda", "d2_exact", "D2_exact"]);

    for (idx, sc) in scenarios.iter().enumerate() {
        let rho = resolve_state(&sc.state, sc.dim)?;
        let n = rho.dim();
        let g = resolve_observable(&sc.observable, n)?;
        let prefix = format!("s{idx}_");
        let summary = &mut output.summary;
        let _ = writeln!(
            summary,
            "[{idx}] state={} observable={} dim={n}",
            sc.state, sc.observable
        );

        let profile = coherence_profile(&rho, &g)?;
        let c_hs = hilbert_schmidt_coherence(&profile);

        if command.runs(Command::Coherence) {
            let mut t = Table::new(&["j", "k", "re", "im"]);
            for p in &profile.pairs {
                t.rows.push(vec![
                    Cell::Int(p.j as i64),
                    Cell::Int(p.k as i64),
                    Cell::Num(p.value.re),
                    Cell::Num(p.value.im),
                ]);
            }
            output.files.push(write_file(
                &out_dir,
                &format!("{prefix}coherence.{ext}"),
                &t.render(format),
            )?);
            let _ = writeln!(summary, "  C_HS = {}", fmt_f64(c_hs));
            let _ = writeln!(
                summary,
                "  |[G, rho]|_F = {}",
                fmt_f64(commutator_norm(&rho, &g)?)
            );
            match find_coherent_basis(&rho, sc.eps)? {
                Some(found) => {
                    let _ = writeln!(
                        summary,
                        "  coherent basis: pair ({}, {}) with |coherence| = {}",
                        found.j,
                        found.k,
                        fmt_f64(found.eps_out)
                    );
                }
                None => {
                    let _ = writeln!(summary, "  coherent basis: none (state is I/N)");
                }
            }
        }

        let certificate = witness_search(&rho, &g, sc.tol_witness)?;
        if command.runs(Command::Witness) {
            let mut text = serde_json::to_string_pretty(&certificate.to_record())
                .expect("certificate serializes");
            text.push('\n');
            output.files.push(write_file(
                &out_dir,
                &format!("{prefix}witness.json"),
                &text,
            )?);
            let verdict = if certificate.is_nonclassical() {
                "nonclassical"
            } else {
                "classical"
            };
            let _ = writeln!(
                summary,
                "  witness: {verdict}, p_min = {}",
                fmt_f64(certificate.min_p())
            );
            if !certificate.is_nonclassical() {
                if let Some(found) = find_coherent_basis(&rho, sc.eps)? {
                    let rotated = witness_search(&rho, &found.basis, sc.tol_witness)?;
                    let _ = writeln!(
                        summary,
                        "  witness in coherent basis: p_min = {}",
                        fmt_f64(rotated.min_p())
                    );
                }
            }
        }

        let single = single_phase_distribution(&rho, &g)?;
        if command.runs(Command::Phase) {
            let mut p = Table::new(&["phi", "value"]);
            for i in 0..PHASE_GRID {
                let phi = std::f64::consts::TAU * i as f64 / PHASE_GRID as f64;
                p.rows
                    .push(vec![Cell::Num(phi), Cell::Num(single.evaluate(phi))]);
            }
            output.files.push(write_file(
                &out_dir,
                &format!("{prefix}p_phi.{ext}"),
                &p.render(format),
            )?);

            let mut gt = Table::new(&["tau", "re", "im"]);
            for (tau, gamma) in single.gammas() {
                gt.rows.push(vec![
                    Cell::Int(tau),
                    Cell::Num(gamma.re),
                    Cell::Num(gamma.im),
                ]);
            }
            output.files.push(write_file(
                &out_dir,
                &format!("{prefix}gamma.{ext}"),
                &gt.render(format),
            )?);

            let multi = multi_phase_distribution(&rho, &g)?;
            let analytic = renyi_integral(&multi);
            let mc = (sc.mc_samples > 0).then(|| {
                let m = rho.in_basis(&g).expect("dimension checked");
                torus_average(n, sc.mc_samples, sc.seed, MC_WORKERS, |phases| {
                    Complex64::new(phase_state_expectation(&m, phases).powi(2), 0.0)
                })
                .re
            });
            let mut rt = Table::new(&[
                "renyi_integral",
                "one_plus_c_hs",
                "mc_estimate",
                "mc_samples",
            ]);
            rt.rows.push(vec![
                Cell::Num(analytic),
                Cell::Num(1.0 + c_hs),
                mc.map_or(Cell::Missing, Cell::Num),
                Cell::Int(sc.mc_samples as i64),
            ]);
            output.files.push(write_file(
                &out_dir,
                &format!("{prefix}renyi.{ext}"),
                &rt.render(format),
            )?);
            let _ = writeln!(summary, "  ∫P² d𝛗 = {}", fmt_f64(analytic));
            if let Some(v) = mc {
                let _ = writeln!(
                    summary,
                    "  Monte-Carlo ∫P² d𝛗 = {} ({} samples)",
                    fmt_f64(v),
                    sc.mc_samples
                );
            }
        }

        if command.runs(Command::Resolution) {
            let report = wiener_kintchine_resolution(&single)?;
            let povm = Povm::shifted_fourier(&g)?;
            let d2_coeff = small_signal_quadratic(&rho, &g, &povm)?;
            let sig = UnitarySignal::new(g.clone(), sc.lambda);
            let distance = density_matrix_distance(&rho, &sig)?;
            let bound = uncertainty_bound_check(&rho, &g, &povm)?;
            metrology.rows.push(vec![
                Cell::Text(sc.state.clone()),
                Cell::Text(sc.observable.clone()),
                Cell::Num(c_hs),
                Cell::Num(certificate.min_p()),
                Cell::Num(report.delta2_lambda),
                Cell::Num(d2_coeff),
                Cell::Num(distance.quadratic_coefficient),
                Cell::Num(bound.lhs),
                bound.rhs.map_or(Cell::Missing, Cell::Num),
            ]);
            signal.rows.push(vec![
                Cell::Text(sc.state.clone()),
                Cell::Text(sc.observable.clone()),
                Cell::Num(sc.lambda),
                Cell::Num(statistical_distance(&rho, &sig, &povm)?),
                Cell::Num(distance.exact),
            ]);
            let flat = if report.flat {
                " (flat distribution)"
            } else {
                ""
            };
            let _ = writeln!(summary, "  Δ²λ = {}{flat}", fmt_f64(report.delta2_lambda));
            let _ = writeln!(
                summary,
                "  Σp'² = {}, D² coefficient = {}",
                fmt_f64(d2_coeff),
                fmt_f64(distance.quadratic_coefficient)
            );
            let _ = writeln!(summary, "  variance bound: {:?}", bound.status);
        }
    }

    if command.runs(Command::Resolution) {
        output.files.push(write_file(
            &out_dir,
            &format!("metrology.{ext}"),
            &metrology.render(format),
        )?);
        output.files.push(write_file(
            &out_dir,
            &format!("signal.{ext}"),
            &signal.render(format),
        )?);
    }
    Ok(output)
}

/// Parses arguments, runs, and returns the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = load_scenarios(&cli.overrides).and_then(|s| run(cli.command, &s));
    match result {
        Ok(out) => {
            print!("{}", out.summary);
            0
        }
        Err(e) => {
            eprintln!("qcohere: {e}");
            e.exit_code()
        }
    }
}
