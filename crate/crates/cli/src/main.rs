//! `itf`: interference traces, scans and direct measure evaluation.

mod output;

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_4;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use itf_core::circuit::{parse, run};
use itf_core::scan::{beamsplitter_scan, decoherence_scan, mz_error_scan, mz_scan};
use itf_core::{
    grover_trace, ibits, interference_kraus, interference_unitary, phase_sensitivity_estimate, shor_trace,
    teleportation_trace, ComplexMatrix, Error, QuantumChannel,
};
use serde::Serialize;

use output::{format_sig, Format, Table};

#[derive(Parser)]
#[command(name = "itf", version, about = "Quantify interference in quantum propagators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a builtin scenario and write its trace or scan.
    Scenario(ScenarioArgs),
    /// Run a circuit file (.iqc).
    Run(RunArgs),
    /// Print the interference and i-bits of a matrix or Kraus set.
    Measure(MeasureArgs),
    /// Write every scenario's data file into a directory.
    Figures(FiguresArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Scenario {
    Teleport,
    Grover,
    GroverUsed,
    Shor,
    ShorUsed,
    BeamsplitterScan,
    MzScan,
    MzErrorScan,
    DecoherenceScan,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output file; standard output when absent.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ScenarioArgs {
    #[arg(value_enum)]
    name: Scenario,
    /// Register width for Grover.
    #[arg(long, default_value_t = 8)]
    qubits: usize,
    /// Marked item for Grover.
    #[arg(long, default_value_t = 0)]
    marked: usize,
    /// Modulus for Shor.
    #[arg(long, default_value_t = 15)]
    r: usize,
    /// Base for Shor.
    #[arg(long, default_value_t = 7)]
    a: usize,
    /// Photon number (largest N for the beam-splitter scan).
    #[arg(long)]
    photons: Option<usize>,
    /// Grid points per scanned parameter.
    #[arg(long, default_value_t = 33)]
    points: usize,
    /// Beam-splitter angle for the Mach-Zehnder error scan.
    #[arg(long, default_value_t = FRAC_PI_4)]
    theta: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also write a JSON manifest of the invocation.
    #[arg(long)]
    manifest: Option<PathBuf>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct RunArgs {
    file: PathBuf,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct MeasureArgs {
    /// Unitary matrix file.
    #[arg(long, conflicts_with = "kraus", required_unless_present = "kraus")]
    matrix: Option<PathBuf>,
    /// Kraus operator files, one operator per file.
    #[arg(long, num_args = 1..)]
    kraus: Vec<PathBuf>,
    /// Also print a Monte-Carlo phase-sensitivity estimate with this many samples.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct FiguresArgs {
    #[arg(long)]
    out_dir: PathBuf,
    #[arg(long, default_value_t = 33)]
    points: usize,
}

/// Record of one scenario invocation.
#[derive(Debug, Serialize)]
struct RunManifest {
    scenario: Scenario,
    parameters: BTreeMap<String, String>,
    output: Option<PathBuf>,
    format: Format,
    seed: u64,
}

/// A failure with its process exit status.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn io(path: &Path, err: impl std::fmt::Display) -> Self {
        Failure {
            code: 4,
            message: format!("{}: {err}", path.display()),
        }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let code = match err {
            Error::Capacity(_) => 3,
            Error::Parse { .. } => 1,
            Error::Consistency(_) => 1,
            Error::Shape(_) | Error::Validation(_) => 2,
        };
        Failure {
            code,
            message: err.to_string(),
        }
    }
}

fn main() -> ExitCode {
    itf_core::configure_threads_from_env();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Scenario(args) => cmd_scenario(&args),
        Command::Run(args) => cmd_run(&args),
        Command::Measure(args) => cmd_measure(&args),
        Command::Figures(args) => cmd_figures(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if !f.message.is_empty() {
                eprintln!("error: {}", f.message);
            }
            ExitCode::from(f.code)
        }
    }
}

fn scenario_table(args: &ScenarioArgs) -> Result<Table, Error> {
    Ok(match args.name {
        Scenario::Teleport => Table::from(teleportation_trace()?),
        Scenario::Grover => Table::from(grover_trace(args.qubits, args.marked, true)?),
        Scenario::GroverUsed => Table::from(grover_trace(args.qubits, args.marked, false)?),
        Scenario::Shor => Table::from(shor_trace(args.r, args.a, true)?),
        Scenario::ShorUsed => Table::from(shor_trace(args.r, args.a, false)?),
        Scenario::BeamsplitterScan => Table::from(beamsplitter_scan(args.photons.unwrap_or(20), args.points)?),
        Scenario::MzScan => Table::from(mz_scan(args.photons.unwrap_or(1), args.points)?),
        Scenario::MzErrorScan => Table::from(mz_error_scan(args.theta, args.points)?),
        Scenario::DecoherenceScan => Table::from(decoherence_scan(args.points)?),
    })
}

fn scenario_parameters(args: &ScenarioArgs) -> BTreeMap<String, String> {
    let mut p = BTreeMap::new();
    let mut put = |k: &str, v: String| {
        p.insert(k.to_string(), v);
    };
    match args.name {
        Scenario::Teleport => {}
        Scenario::Grover | Scenario::GroverUsed => {
            put("qubits", args.qubits.to_string());
            put("marked", args.marked.to_string());
        }
        Scenario::Shor | Scenario::ShorUsed => {
            put("r", args.r.to_string());
            put("a", args.a.to_string());
        }
        Scenario::BeamsplitterScan => {
            put("photons", args.photons.unwrap_or(20).to_string());
            put("points", args.points.to_string());
        }
        Scenario::MzScan => {
            put("photons", args.photons.unwrap_or(1).to_string());
            put("points", args.points.to_string());
        }
        Scenario::MzErrorScan => {
            put("theta", format!("{:?}", args.theta));
            put("points", args.points.to_string());
        }
        Scenario::DecoherenceScan => put("points", args.points.to_string()),
    }
    p
}

fn emit(table: &Table, out: &OutputArgs) -> Result<(), Failure> {
    let text = table.render(out.format);
    match &out.output {
        Some(path) => fs::write(path, text).map_err(|e| Failure::io(path, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_scenario(args: &ScenarioArgs) -> Result<(), Failure> {
    let table = scenario_table(args)?;
    emit(&table, &args.out)?;
    if let Some(path) = &args.manifest {
        let manifest = RunManifest {
            scenario: args.name,
            parameters: scenario_parameters(args),
            output: args.out.output.clone(),
            format: args.out.format,
            seed: args.seed,
        };
        let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        fs::write(path, json + "\n").map_err(|e| Failure::io(path, e))?;
    }
    Ok(())
}

fn cmd_run(args: &RunArgs) -> Result<(), Failure> {
    let source = fs::read_to_string(&args.file).map_err(|e| Failure::io(&args.file, e))?;
    let program = parse(&source).map_err(|diags| {
        for d in &diags {
            eprintln!("{}: {d}", args.file.display());
        }
        Failure {
            code: 1,
            message: String::new(),
        }
    })?;
    emit(&Table::from(run(&program)?), &args.out)
}

fn read_matrix(path: &Path) -> Result<ComplexMatrix, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
    ComplexMatrix::from_text(&text).map_err(|e| Failure {
        code: 1,
        message: format!("{}: {e}", path.display()),
    })
}

fn cmd_measure(args: &MeasureArgs) -> Result<(), Failure> {
    let (channel, value) = match &args.matrix {
        Some(path) => {
            let u = read_matrix(path)?;
            let value = interference_unitary(&u).map_err(|e| match e {
                Error::Validation(m) => Failure {
                    code: 5,
                    message: format!("{}: {m}; pass the operator with --kraus to treat it as a Kraus set", path.display()),
                },
                other => other.into(),
            })?;
            (QuantumChannel::unitary(u)?, value)
        }
        None => {
            let kraus = args.kraus.iter().map(|p| read_matrix(p)).collect::<Result<Vec<_>, _>>()?;
            let channel = QuantumChannel::new(kraus)?;
            let value = interference_kraus(&channel)?;
            (channel, value)
        }
    };
    println!("{} {}", format_sig(value), format_sig(ibits(value)?));
    if let Some(samples) = args.samples {
        let est = phase_sensitivity_estimate(&channel, samples, args.seed)?;
        println!(
            "estimate {} {} {}",
            format_sig(est.interference()),
            format_sig(est.interference_stderr()),
            est.samples
        );
    }
    Ok(())
}

fn cmd_figures(args: &FiguresArgs) -> Result<(), Failure> {
    fs::create_dir_all(&args.out_dir).map_err(|e| Failure::io(&args.out_dir, e))?;
    let points = args.points;
    let mut files: Vec<(String, Table)> = vec![
        ("beamsplitter.csv".into(), Table::from(beamsplitter_scan(20, points)?)),
        ("mz_n1.csv".into(), Table::from(mz_scan(1, points)?)),
        ("mz_n20.csv".into(), Table::from(mz_scan(20, points)?)),
        ("mz_error.csv".into(), Table::from(mz_error_scan(FRAC_PI_4, points)?)),
        ("decoherence.csv".into(), Table::from(decoherence_scan(points)?)),
        ("teleport.csv".into(), Table::from(teleportation_trace()?)),
        ("grover.csv".into(), Table::from(grover_trace(8, 0, true)?)),
        ("grover_used.csv".into(), Table::from(grover_trace(8, 0, false)?)),
    ];
    for a in [2, 4, 7, 8, 11, 13, 14] {
        files.push((format!("shor_a{a}.csv"), Table::from(shor_trace(15, a, true)?)));
        files.push((format!("shor_used_a{a}.csv"), Table::from(shor_trace(15, a, false)?)));
    }
    for (name, table) in files {
        let path = args.out_dir.join(name);
        fs::write(&path, table.render(Format::Csv)).map_err(|e| Failure::io(&path, e))?;
        println!("{}", path.display());
    }
    Ok(())
}
