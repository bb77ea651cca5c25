//! Thin command-line front end over [`ternalg::cli`].

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ternalg::cli::{self, CliResult, ConstructKind};
use ternalg::grid::Chart;

#[derive(Parser)]
#[command(
    name = "ternalg",
    version,
    about = "Ternary para-associative algebras and algebroids"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args, Clone)]
struct Common {
    /// Absolute residual tolerance for all verdicts in this run
    #[arg(long, default_value_t = 1e-9)]
    eps: f64,
    /// Output format for the report on stdout
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Ternary-algebra artifacts
    Algebra {
        #[command(subcommand)]
        action: AlgebraAction,
    },
    /// Sampled structure fields
    Field {
        #[command(subcommand)]
        action: FieldAction,
    },
    /// Connections on sampled bundles
    Connection {
        #[command(subcommand)]
        action: ConnectionAction,
    },
    /// Parallel transport
    Transport {
        #[command(subcommand)]
        action: TransportAction,
    },
    /// Run-report utilities
    Report {
        #[command(subcommand)]
        action: ReportAction,
    },
}

#[derive(Subcommand)]
enum AlgebraAction {
    /// Check the algebraic predicates of an algebra file
    Check {
        file: PathBuf,
        /// Write the report JSON to this path as well
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Build an artifact and write it to --out
    Construct {
        #[arg(long, value_enum)]
        kind: Kind,
        /// Cyclic heap order (kind = cyclic-heap)
        #[arg(long)]
        k: Option<usize>,
        /// Input artifact files, in positional order for the kind
        #[arg(long = "input")]
        inputs: Vec<PathBuf>,
        /// Chart origin per axis (kind = scaled-line)
        #[arg(long, value_delimiter = ',')]
        origin: Vec<f64>,
        /// Chart spacing per axis (kind = scaled-line)
        #[arg(long, value_delimiter = ',')]
        spacing: Vec<f64>,
        /// Chart points per axis (kind = scaled-line)
        #[arg(long, value_delimiter = ',')]
        shape: Vec<usize>,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Star-reduce an algebra at an element into a binary algebra
    Reduce {
        file: PathBuf,
        /// Element components, comma separated
        #[arg(long, value_delimiter = ',')]
        element: Vec<f64>,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Canonical isomorphism between the reductions at two biunits
    Iso {
        file: PathBuf,
        #[arg(long, value_delimiter = ',')]
        element: Vec<f64>,
        #[arg(long = "element-prime", value_delimiter = ',')]
        element_prime: Vec<f64>,
        /// Write the report JSON to this path as well
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    CyclicHeap,
    Heap,
    Bilinear,
    DirectSum,
    Tensor,
    MetricAlgebroid,
    ScaledLine,
    LeviCivita,
}

#[derive(Subcommand)]
enum FieldAction {
    /// Pointwise para-associativity check of a structure field
    Check {
        file: PathBuf,
        /// Write the report JSON to this path as well
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand)]
enum ConnectionAction {
    /// Differential (ternary Leibniz) residual of a connection
    Check {
        field: PathBuf,
        connection: PathBuf,
        /// Metric field for an additional compatibility verdict
        #[arg(long)]
        metric: Option<PathBuf>,
        /// Write the report JSON to this path as well
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand)]
enum TransportAction {
    /// Transport the fibre along a curve and test the algebra isomorphism
    Run {
        field: PathBuf,
        connection: PathBuf,
        curve: PathBuf,
        /// Integration step bound
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
        /// Write the report JSON to this path as well
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand)]
enum ReportAction {
    /// Compare two reports, ignoring timing
    Diff { left: PathBuf, right: PathBuf },
}

fn build_construct_kind(
    kind: Kind,
    k: Option<usize>,
    inputs: &[PathBuf],
    origin: &[f64],
    spacing: &[f64],
    shape: &[usize],
) -> Result<ConstructKind, String> {
    let input = |i: usize| -> Result<PathBuf, String> {
        inputs
            .get(i)
            .cloned()
            .ok_or_else(|| format!("kind needs at least {} --input file(s)", i + 1))
    };
    Ok(match kind {
        Kind::CyclicHeap => ConstructKind::CyclicHeap {
            k: k.ok_or_else(|| "cyclic-heap needs --k".to_string())?,
        },
        Kind::Heap => ConstructKind::Heap { table: input(0)? },
        Kind::Bilinear => ConstructKind::Bilinear { form: input(0)? },
        Kind::DirectSum => ConstructKind::DirectSum {
            left: input(0)?,
            right: input(1)?,
        },
        Kind::Tensor => ConstructKind::Tensor {
            first: input(0)?,
            second: input(1)?,
            third: input(2)?,
        },
        Kind::MetricAlgebroid => ConstructKind::MetricAlgebroid { metric: input(0)? },
        Kind::ScaledLine => ConstructKind::ScaledLine {
            form: input(0)?,
            chart: Chart::new(origin.to_vec(), spacing.to_vec(), shape.to_vec())
                .map_err(|e| e.to_string())?,
        },
        Kind::LeviCivita => ConstructKind::LeviCivita { metric: input(0)? },
    })
}

fn emit(result: CliResult, common: &Common, report_path: Option<&std::path::Path>) -> ExitCode {
    render(result, common.format, report_path)
}

fn render(result: CliResult, format: Format, report_path: Option<&std::path::Path>) -> ExitCode {
    match result {
        Ok(report) => {
            match format {
                Format::Json => print!("{}", report.to_json()),
                Format::Text => print!("{}", report.to_text()),
            }
            if let Some(path) = report_path {
                if let Err(e) = std::fs::write(path, report.to_json()) {
                    eprintln!("error: cannot write report to {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            if report.all_pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn main() -> ExitCode {
    ternalg::init_thread_pool_from_env();
    let cli = Cli::parse();
    match cli.command {
        Command::Algebra { action } => match action {
            AlgebraAction::Check { file, out, common } => emit(
                cli::cmd_algebra_check(&file, common.eps),
                &common,
                out.as_deref(),
            ),
            AlgebraAction::Construct {
                kind,
                k,
                inputs,
                origin,
                spacing,
                shape,
                out,
                common,
            } => match build_construct_kind(kind, k, &inputs, &origin, &spacing, &shape) {
                Ok(kind) => emit(cli::cmd_construct(&kind, &out, common.eps), &common, None),
                Err(message) => {
                    eprintln!("error: {message}");
                    ExitCode::from(2)
                }
            },
            AlgebraAction::Reduce {
                file,
                element,
                out,
                common,
            } => emit(
                cli::cmd_reduce(&file, &element, &out, common.eps),
                &common,
                None,
            ),
            AlgebraAction::Iso {
                file,
                element,
                element_prime,
                out,
                common,
            } => emit(
                cli::cmd_canonical_iso(&file, &element, &element_prime, common.eps),
                &common,
                out.as_deref(),
            ),
        },
        Command::Field { action } => match action {
            FieldAction::Check { file, out, common } => emit(
                cli::cmd_field_check(&file, common.eps),
                &common,
                out.as_deref(),
            ),
        },
        Command::Connection { action } => match action {
            ConnectionAction::Check {
                field,
                connection,
                metric,
                out,
                common,
            } => emit(
                cli::cmd_connection_check(&field, &connection, metric.as_deref(), common.eps),
                &common,
                out.as_deref(),
            ),
        },
        Command::Transport { action } => match action {
            TransportAction::Run {
                field,
                connection,
                curve,
                dt,
                out,
                common,
            } => emit(
                cli::cmd_transport(&field, &connection, &curve, dt, common.eps),
                &common,
                out.as_deref(),
            ),
        },
        Command::Report { action } => match action {
            ReportAction::Diff { left, right } => {
                let result = cli::cmd_report_diff(&left, &right);
                render(result, Format::Text, None)
            }
        },
    }
}
