//! Command-line front end for `nilqi-core`: reads algebra/endomorphism
//! documents, runs one computation and writes a JSON (or, for the oracle,
//! CSV) report to standard output. Diagnostics go to standard error.
//!
//! Exit codes: 0 success, 1 validation or assumption failure, 2 parse or
//! usage error, 3 unsupported eigenvalue or undecided comparison.

pub mod report;
pub mod schema;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{ArgAction, Parser, Subcommand, ValueEnum};
use nilqi_core::classifier::{check_standing_assumptions, classify, Outcome};
use nilqi_core::endomorphism::{tree_valence, Endomorphism};
use nilqi_core::growth::{basis_rates, growth_filtration, Direction};
use nilqi_core::jordan::{absolute_jordan_form, jordan_structure};
use nilqi_core::lie_algebra::{validate, Violation};
use nilqi_core::oracle::{
    default_grid, flow_series, validate_rates_against, BASE_REL_TOL, DEGREE_ABS_TOL, MIN_FIT_POINTS,
};
use nilqi_core::pajf::{adapted_jordan_basis, compute_pajf, WeightOrder};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use report::*;
use schema::Loaded;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown endomorphism {name:?} (available: {available})")]
    UnknownEndomorphism { name: String, available: String },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] nilqi_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Parse(_) | CliError::UnknownEndomorphism { .. } | CliError::Usage(_) => 2,
            CliError::Core(nilqi_core::Error::UnsupportedEigenvalue(_)) => 3,
            CliError::Core(nilqi_core::Error::DimensionMismatch { .. } | nilqi_core::Error::IndexOutOfRange { .. }) => {
                2
            }
            CliError::Core(_) => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Order {
    Asc,
    Desc,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Dir {
    Fwd,
    Bwd,
}

impl Dir {
    fn direction(self) -> Direction {
        match self {
            Dir::Fwd => Direction::Forward,
            Dir::Bwd => Direction::Backward,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Dir::Fwd => "fwd",
            Dir::Bwd => "bwd",
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "nilqi", version, about = "Quasi-isometry invariants of nilpotent-by-cyclic groups")]
struct Cli {
    /// Output format; csv is only available for `oracle`.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Slot order of the permuted absolute Jordan form.
    #[arg(long, global = true, value_enum, default_value_t = Order::Asc)]
    weight_order: Order,
    /// Largest power tried when matching Jordan forms and rate multisets.
    #[arg(long, global = true, default_value_t = nilqi_core::classifier::DEFAULT_POWER_BOUND)]
    power_bound: u32,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the bracket table and every endomorphism in a document.
    Validate { file: PathBuf },
    /// Weights and grading of the algebra.
    Weights { file: PathBuf },
    /// Real Jordan data and absolute Jordan form.
    Jordan {
        file: PathBuf,
        #[arg(long)]
        endo: String,
    },
    /// Permuted absolute Jordan form.
    Pajf {
        file: PathBuf,
        #[arg(long)]
        endo: String,
    },
    /// Divergence rates of the adapted Jordan basis.
    Rates {
        file: PathBuf,
        #[arg(long)]
        endo: String,
        #[arg(long, value_enum, default_value_t = Dir::Fwd)]
        direction: Dir,
    },
    /// Growth-space filtration.
    Growth {
        file: PathBuf,
        #[arg(long)]
        endo: String,
    },
    /// Decide quasi-isometry of two mapping tori: `compare A --endo X B --endo Y`.
    Compare {
        first: PathBuf,
        second: PathBuf,
        /// Endomorphism names, one per file (a single name is used for both).
        #[arg(long, action = ArgAction::Append, required = true)]
        endo: Vec<String>,
    },
    /// Simulate flow lines and check the symbolic rates.
    Oracle {
        file: PathBuf,
        #[arg(long)]
        endo: String,
        #[arg(long, value_enum, default_value_t = Dir::Fwd)]
        direction: Dir,
        #[arg(long, default_value_t = 10)]
        t_min: u32,
        #[arg(long, default_value_t = 40)]
        t_max: u32,
        /// Thin the grid with this seed (at least 8 points are kept).
        #[arg(long)]
        seed: Option<u64>,
    },
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match execute(&cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e);
            e.exit_code()
        }
    }
}

fn read(path: &Path, err: &mut dyn Write) -> Result<Loaded, CliError> {
    let text =
        std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    let loaded = schema::load(schema::parse_document(&text)?)?;
    for w in &loaded.warnings {
        let _ = writeln!(err, "warning: {}: {}", path.display(), w);
    }
    Ok(loaded)
}

fn emit(out: &mut dyn Write, r: &Report) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(r).map_err(|e| CliError::Usage(e.to_string()))?;
    writeln!(out, "{}", text).map_err(|source| CliError::Io { path: "<stdout>".into(), source })
}

/// Standing-assumption failures do not stop single-map commands, but are
/// worth a note.
fn note_assumptions(e: &Endomorphism, name: &str, err: &mut dyn Write) {
    let failures = check_standing_assumptions(e).failures();
    if !failures.is_empty() {
        let _ = writeln!(err, "warning: {} fails standing assumptions: {}", name, failures.join(", "));
    }
}

fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    if cli.format == Format::Csv && !matches!(cli.command, Command::Oracle { .. }) {
        return Err(CliError::Usage("csv output is only available for oracle".into()));
    }
    let order = match cli.weight_order {
        Order::Asc => WeightOrder::Ascending,
        Order::Desc => WeightOrder::Descending,
    };
    match &cli.command {
        Command::Validate { file } => validate_cmd(&read(file, err)?, out, err),
        Command::Weights { file } => {
            let l = read(file, err)?;
            let g = l.algebra()?;
            let cert = g.is_carnot();
            emit(
                out,
                &Report::Weights(WeightsReport {
                    algebra: l.name.clone(),
                    dim: g.dim(),
                    basis_names: l.basis_names.clone(),
                    weights: g.weights().to_vec(),
                    grade_dims: g.grade_dims().to_vec(),
                    nilpotency_class: g.nilpotency_class(),
                    carnot: cert.is_carnot,
                    carnot_failing_grades: cert.failing_grades,
                    weight_sorted_order: g.canonical_permutation().iter().map(|k| k + 1).collect(),
                }),
            )?;
            Ok(0)
        }
        Command::Jordan { file, endo } => {
            let l = read(file, err)?;
            let e = l.endomorphism(endo)?;
            note_assumptions(&e, endo, err);
            let data = jordan_structure(e.matrix())?;
            let abs = absolute_jordan_form(&data);
            emit(out, &Report::Jordan(JordanReport::new(&l.name, endo, &data, &abs)))?;
            Ok(0)
        }
        Command::Pajf { file, endo } => {
            let l = read(file, err)?;
            let e = l.endomorphism(endo)?;
            note_assumptions(&e, endo, err);
            let p = compute_pajf(e.matrix(), e.weights(), order)?;
            emit(out, &Report::Pajf(PajfReport::new(&l.name, endo, &p)))?;
            Ok(0)
        }
        Command::Rates { file, endo, direction } => {
            let l = read(file, err)?;
            let e = l.endomorphism(endo)?;
            note_assumptions(&e, endo, err);
            if *direction == Dir::Bwd && !e.is_injective() {
                return Err(nilqi_core::Error::Singular.into());
            }
            let basis = adapted_jordan_basis(e.matrix(), e.weights())?;
            let rates = basis_rates(&basis, direction.direction());
            let entries = rates
                .entries
                .iter()
                .map(|r| {
                    let comp = &basis.components[r.component];
                    let v = comp.chains[r.chain].vectors[r.position].iter().map(ToString::to_string).collect();
                    RateEntryDoc::new(r, v, comp.factor.to_string())
                })
                .collect();
            emit(
                out,
                &Report::Rates(RatesReport {
                    algebra: l.name.clone(),
                    endomorphism: endo.clone(),
                    direction: direction.name().into(),
                    entries,
                    sorted: rates.sorted().iter().map(ToString::to_string).collect(),
                }),
            )?;
            Ok(0)
        }
        Command::Growth { file, endo } => {
            let l = read(file, err)?;
            let e = l.endomorphism(endo)?;
            note_assumptions(&e, endo, err);
            let f = growth_filtration(&e)?;
            emit(out, &Report::Growth(GrowthReport::new(&l.name, endo, &f)))?;
            Ok(0)
        }
        Command::Compare { first, second, endo } => {
            let names = match endo.as_slice() {
                [a] => [a.clone(), a.clone()],
                [a, b] => [a.clone(), b.clone()],
                _ => return Err(CliError::Usage("compare takes one --endo per file".into())),
            };
            let l1 = read(first, err)?;
            let l2 = read(second, err)?;
            let e1 = l1.endomorphism(&names[0])?;
            let e2 = l2.endomorphism(&names[1])?;
            let verdict = classify(&e1, &e2, cli.power_bound)?;
            let operand = |f: &Path, n: &str| Operand { file: f.display().to_string(), endomorphism: n.to_string() };
            let r =
                CompareReport::new(operand(first, &names[0]), operand(second, &names[1]), cli.power_bound, &verdict);
            emit(out, &Report::Compare(r))?;
            if verdict.outcome == Outcome::Unknown {
                let _ = writeln!(err, "undecided: no invariant separates the groups and no power match was found");
                return Ok(3);
            }
            Ok(0)
        }
        Command::Oracle { file, endo, direction, t_min, t_max, seed } => {
            let l = read(file, err)?;
            let e = l.endomorphism(endo)?;
            note_assumptions(&e, endo, err);
            oracle_cmd(cli.format, &l, endo, &e, *direction, grid(*t_min, *t_max, *seed)?, *seed, out, err)
        }
    }
}

fn grid(t_min: u32, t_max: u32, seed: Option<u64>) -> Result<Vec<u32>, CliError> {
    if t_min < 1 || t_max < t_min {
        return Err(CliError::Usage(format!("need 1 <= t-min <= t-max, got {}..{}", t_min, t_max)));
    }
    let mut g = default_grid(t_min, t_max);
    if let Some(s) = seed {
        let keep = (g.len() * 3 / 4).max(MIN_FIT_POINTS).min(g.len());
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        g = g.choose_multiple(&mut rng, keep).copied().collect();
        g.sort_unstable();
    }
    Ok(g)
}

#[allow(clippy::too_many_arguments)]
fn oracle_cmd(
    format: Format,
    l: &Loaded,
    name: &str,
    e: &Endomorphism,
    dir: Dir,
    grid: Vec<u32>,
    seed: Option<u64>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, CliError> {
    let basis = adapted_jordan_basis(e.matrix(), e.weights())?;
    let rates = basis_rates(&basis, dir.direction());
    let checks = validate_rates_against(e.matrix(), e.weights(), &basis, &rates, dir.direction(), &grid)?;
    let all_pass = checks.iter().all(|c| c.pass);
    for c in checks.iter().filter(|c| !c.pass) {
        let _ = writeln!(
            err,
            "oracle mismatch: vector {} expected {} (base {:.4}, degree {:.3}), estimated base {:.4}, degree {:.3}",
            c.entry + 1,
            c.symbolic,
            c.symbolic.base_f64(),
            c.symbolic.degree_f64(),
            c.estimate.base_est,
            c.estimate.polydeg_est
        );
    }
    match format {
        Format::Json => emit(
            out,
            &Report::Oracle(OracleReport {
                algebra: l.name.clone(),
                endomorphism: name.to_string(),
                direction: dir.name().into(),
                grid,
                seed,
                base_rel_tol: BASE_REL_TOL,
                degree_abs_tol: DEGREE_ABS_TOL,
                all_pass,
                checks: checks.iter().map(OracleCheckDoc::from).collect(),
            }),
        )?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let csv_err = |e: csv::Error| CliError::Usage(e.to_string());
            w.write_record(["vector", "t", "log_norm"]).map_err(csv_err)?;
            for c in &checks {
                for (t, y) in flow_series(e.matrix(), e.weights(), &c.vector, dir.direction(), &grid)? {
                    w.serialize((c.entry + 1, t, y)).map_err(csv_err)?;
                }
            }
            let bytes = w.into_inner().map_err(|e| CliError::Usage(e.to_string()))?;
            out.write_all(&bytes).map_err(|source| CliError::Io { path: "<stdout>".into(), source })?;
        }
    }
    Ok(if all_pass { 0 } else { 1 })
}

fn validate_cmd(l: &Loaded, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let violations: Vec<ViolationDoc> = validate(&l.sc)
        .iter()
        .map(|v| {
            let (kind, i, j, k) = match *v {
                Violation::Jacobi { i, j, k } => ("jacobi", i, j, k),
                Violation::Triangularity { i, j, k } => ("triangularity", i, j, k),
            };
            ViolationDoc { kind: kind.into(), i: i + 1, j: j + 1, k: k + 1, message: v.to_string() }
        })
        .collect();
    let mut errors = Vec::new();
    let mut weights = None;
    let mut endomorphisms = std::collections::BTreeMap::new();
    match l.algebra() {
        Ok(g) => {
            weights = Some(g.weights().to_vec());
            for name in l.endomorphisms.keys() {
                let check = match l.endomorphism(name) {
                    Ok(e) => {
                        let r = check_standing_assumptions(&e);
                        let tv = tree_valence(e.matrix()).ok().map(|v| v.to_string());
                        let doc = AssumptionDoc::new(&r, e.weakly_preserves_grading(), tv);
                        if !doc.failures.is_empty() {
                            errors.push(format!("endomorphism {}: fails {}", name, doc.failures.join(", ")));
                        }
                        EndomorphismCheck::Checked(doc)
                    }
                    Err(e) => {
                        errors.push(format!("endomorphism {}: {}", name, e));
                        EndomorphismCheck::Error(e.to_string())
                    }
                };
                endomorphisms.insert(name.clone(), check);
            }
        }
        Err(e) => errors.push(e.to_string()),
    }
    for v in &violations {
        let _ = writeln!(err, "{}", v.message);
    }
    for e in &errors {
        let _ = writeln!(err, "{}", e);
    }
    let valid = violations.is_empty() && errors.is_empty();
    emit(
        out,
        &Report::Validate(ValidateReport {
            algebra: l.name.clone(),
            dim: l.sc.dim(),
            valid,
            warnings: l.warnings.clone(),
            violations,
            errors,
            weights,
            endomorphisms,
        }),
    )?;
    Ok(if valid { 0 } else { 1 })
}
