use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qg_cli::suite::input_from_values;
use qg_cli::{
    emit_report, emit_spec, emit_state_file, parse_spec_file, parse_state_file, read_file, run_suite, CliError,
    ReportFormat, StateFile, SuiteOptions,
};
use qg_core::boundary::choi_effros_algebra;
use qg_core::builtin::{builtin, named_group, Builtin, GroupTable};
use qg_core::extension::analyze_extension;
use qg_core::quantum_group::{validate_spec, QuantumGroup, DEFAULT_TOL};
use qg_core::spectrum::spectrum_group;
use qg_core::states::{cesaro_limit_state, is_nondegenerate, make_state, DEFAULT_SEED};
use serde::Deserialize;
use serde_json::json;

#[derive(Parser)]
#[command(name = "qg", version, about = "Poisson boundaries of finite quantum groups")]
struct Cli {
    /// Tolerance for axiom and contract residuals.
    #[arg(long, global = true, env = "QG_TOL")]
    tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    FunctionAlgebra,
    GroupAlgebra,
    KacPaljutkin,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Check the Hopf *-algebra axioms, the Haar state and the fundamental unitary.
    Validate { spec: PathBuf },
    /// Print the Haar state.
    Haar { spec: PathBuf },
    /// Write a built-in quantum group as a spec file.
    Builtin {
        kind: Kind,
        /// `s3` or `z<n>`.
        #[arg(long, conflicts_with = "group_table")]
        group: Option<String>,
        /// JSON file `{"name": ..., "table": [[...], ...]}`.
        #[arg(long)]
        group_table: Option<PathBuf>,
        /// Emit the dual quantum group instead.
        #[arg(long)]
        dual: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Poisson boundary of a state.
    Boundary {
        spec: PathBuf,
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Group of characters of the algebra.
    Spectrum { spec: PathBuf },
    /// Crossed product and the main isomorphism for a state.
    Crossed {
        spec: PathBuf,
        #[arg(long)]
        state: PathBuf,
    },
    /// Run every theorem check.
    Suite {
        spec: PathBuf,
        #[arg(long = "state")]
        states: Vec<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Number of seeded random states added to the suite.
        #[arg(long, default_value_t = 2)]
        random: usize,
        /// Write the JSON report here.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Format of the report printed to stdout.
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Record wall-clock time per entry.
        #[arg(long)]
        timings: bool,
    },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupTableFile {
    name: String,
    table: Vec<Vec<usize>>,
}

fn load_qg(path: &Path, tol: f64) -> Result<QuantumGroup, CliError> {
    let spec = parse_spec_file(&read_file(path)?)?;
    Ok(validate_spec(&spec, tol)?)
}

fn label_of(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| path.display().to_string())
}

fn pairs(v: &qg_core::linalg::CVec) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

fn print_json(value: &serde_json::Value) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("json");
    text.push('\n');
    write_output(None, text.as_bytes())
}

fn write_output(path: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        Some(p) => {
            std::fs::write(p, bytes).map_err(|e| CliError::Io { path: p.display().to_string(), message: e.to_string() })
        }
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(bytes)
                .map_err(|e| CliError::Io { path: "<stdout>".into(), message: e.to_string() })
        }
    }
}

fn group_from_args(group: Option<&str>, table: Option<&Path>) -> Result<GroupTable, CliError> {
    match (group, table) {
        (Some(name), _) => named_group(name).ok_or_else(|| CliError::Usage(format!("unknown group `{name}`"))),
        (None, Some(path)) => {
            let doc: GroupTableFile = serde_json::from_slice(&read_file(path)?).map_err(|e| CliError::Parse {
                line: e.line(),
                column: e.column(),
                message: e.to_string(),
            })?;
            Ok(GroupTable::new(doc.name, doc.table)?)
        }
        (None, None) => Err(CliError::Usage("this kind needs --group or --group-table".into())),
    }
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let tol = cli.tol.unwrap_or(DEFAULT_TOL);
    match cli.command {
        Command::Validate { spec } => {
            let qg = load_qg(&spec, tol)?;
            let mut out = format!("{}: valid at tolerance {tol:e}\norientation {:?}\n", qg.name(), qg.orientation);
            for (name, r) in qg.residuals() {
                writeln!(out, "  {name:<36} {r:.3e}").expect("string");
            }
            write_output(None, out.as_bytes())?;
        }
        Command::Haar { spec } => {
            let qg = load_qg(&spec, tol)?;
            write_output(None, emit_state_file(&StateFile::from_values(&qg.haar)).as_bytes())?;
        }
        Command::Builtin { kind, group, group_table, dual, output } => {
            let spec = match kind {
                Kind::KacPaljutkin => builtin(Builtin::KacPaljutkin)?,
                Kind::FunctionAlgebra => {
                    builtin(Builtin::FunctionAlgebra(&group_from_args(group.as_deref(), group_table.as_deref())?))?
                }
                Kind::GroupAlgebra => {
                    builtin(Builtin::GroupAlgebra(&group_from_args(group.as_deref(), group_table.as_deref())?))?
                }
            };
            let spec = if dual { builtin(Builtin::DualOf(&spec))? } else { spec };
            write_output(output.as_deref(), emit_spec(&spec).as_bytes())?;
        }
        Command::Boundary { spec, state, json } => {
            let qg = load_qg(&spec, tol)?;
            let file = parse_state_file(&read_file(&state)?)?;
            let mu = make_state(&qg, file.values())?;
            let boundary = choi_effros_algebra(&qg, &mu)?;
            let nondegenerate = is_nondegenerate(&qg, &mu)?;
            let phi = cesaro_limit_state(&qg, &mu)?;
            let value = json!({
                "name": qg.name(),
                "harmonic_dim": boundary.dim(),
                "blocks": boundary.blocks,
                "nondegenerate": nondegenerate,
                "cesaro_limit": pairs(&phi.values),
                "cesaro_limit_is_haar": qg_core::linalg::max_abs_vec(&(&phi.values - &qg.haar)) <= tol,
                "choi_effros_residuals": {
                    "associativity": boundary.residuals.associativity,
                    "unit": boundary.residuals.unit,
                    "star": boundary.residuals.star,
                },
            });
            if json {
                print_json(&value)?;
            } else {
                let out = format!(
                    "{}: boundary of dimension {}\n  Wedderburn blocks {:?}\n  non-degenerate: {nondegenerate}\n  Cesàro limit is Haar: {}\n",
                    qg.name(),
                    boundary.dim(),
                    boundary.blocks,
                    value["cesaro_limit_is_haar"]
                );
                write_output(None, out.as_bytes())?;
            }
        }
        Command::Spectrum { spec } => {
            let qg = load_qg(&spec, tol)?;
            let sp = spectrum_group(&qg)?;
            print_json(&json!({
                "name": qg.name(),
                "order": sp.order(),
                "abelian": sp.is_abelian(),
                "identity": sp.identity_index,
                "inverse": sp.inverse_map,
                "table": sp.table,
                "characters": sp.characters.iter().map(pairs).collect::<Vec<_>>(),
            }))?;
        }
        Command::Crossed { spec, state } => {
            let qg = load_qg(&spec, tol)?;
            let file = parse_state_file(&read_file(&state)?)?;
            let mu = make_state(&qg, file.values())?;
            let a = analyze_extension(&qg, &mu)?;
            let residuals: serde_json::Map<String, serde_json::Value> =
                a.report.residuals.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
            print_json(&json!({
                "name": qg.name(),
                "boundary_dim": a.crossed.coaction.boundary.dim(),
                "harmonic_operators_dim": a.report.dims.0,
                "crossed_product_dim": a.report.dims.1,
                "beta_fixed_points_dim": a.crossed.beta_fixed_points.dim(),
                "residuals": residuals,
                "tol": a.report.tol,
                "isomorphism": a.report.verdict,
            }))?;
            if !a.report.verdict {
                return Ok(3);
            }
        }
        Command::Suite { spec, states, seed, random, report, format, timings } => {
            let qg = load_qg(&spec, tol)?;
            let mut inputs = Vec::new();
            for path in &states {
                let file = parse_state_file(&read_file(path)?)?;
                let input = input_from_values(
                    &qg,
                    &label_of(path),
                    &path.display().to_string(),
                    file.values(),
                    file.spectrum_weights.clone(),
                )?;
                inputs.push(input);
            }
            let r = run_suite(&qg, &inputs, SuiteOptions { seed, random_count: random, timings });
            if let Some(path) = &report {
                write_output(Some(path), &emit_report(&r, ReportFormat::Json))?;
            }
            let stdout_format = match format {
                Format::Json => ReportFormat::Json,
                Format::Text => ReportFormat::Text,
            };
            write_output(None, &emit_report(&r, stdout_format))?;
            return Ok(r.exit_code());
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
