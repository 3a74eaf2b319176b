//! The `rectpart` command line.
//!
//! Exit codes: 0 success, 1 invalid input, 2 refused (oracle size guard),
//! 3 internal invariant violation.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use rectpart_core::io::{
    parse_instance, parse_layout, serialize_instance, serialize_layout, serialize_report,
    LayoutFile,
};
use rectpart_core::svg::{render_svg, Labels, SvgOptions};
use rectpart_core::{
    generate, optimal_guillotine, partition_dc, partition_mdc, report_rects_with, report_with,
    validate_layout, Error, Family, ForcedMode, GenSpec, Instance, Layout, Rect,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID_INPUT: i32 = 1;
pub const EXIT_REFUSED: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "rectpart",
    version,
    about = "Partition a rectangle into pieces of given areas"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Algo {
    Dc,
    Mdc,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FamilyArg {
    Uniform,
    Geo,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum LabelArg {
    None,
    Index,
    Full,
}

/// Whether a piece's two long edges may be certified by different forced
/// rectangles.
#[derive(Debug, Clone, Copy, ValueEnum)]
enum ForcedModeArg {
    SameRect,
    PerEdge,
}

impl From<ForcedModeArg> for ForcedMode {
    fn from(arg: ForcedModeArg) -> Self {
        match arg {
            ForcedModeArg::SameRect => ForcedMode::SameRect,
            ForcedModeArg::PerEdge => ForcedMode::PerEdge,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Partition an instance and write the layout.
    Partition {
        #[arg(long, value_enum)]
        algo: Algo,
        #[arg(long)]
        input: PathBuf,
        /// Layout JSON destination; stdout when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Rescale the areas to the container area.
        #[arg(long)]
        normalize: bool,
        /// Quality report destination; also adds the cut tree to the layout.
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "index")]
        labels: LabelArg,
        #[arg(long, value_enum, default_value = "same-rect")]
        forced_mode: ForcedModeArg,
    },
    /// Generate a seeded random instance.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum)]
        family: FamilyArg,
        /// Decay rate of the geometric family.
        #[arg(long)]
        q: Option<f64>,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        width: f64,
        #[arg(long)]
        height: f64,
        #[arg(long)]
        output: PathBuf,
    },
    /// Quality report for an existing layout.
    Eval {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        layout: PathBuf,
        #[arg(long)]
        output: PathBuf,
        #[arg(long, value_enum, default_value = "same-rect")]
        forced_mode: ForcedModeArg,
    },
    /// Exact guillotine optimum for a small instance.
    Oracle {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = rectpart_core::oracle::DEFAULT_MAX_N)]
        max_n: usize,
        #[arg(long)]
        output: PathBuf,
    },
    /// Wall-clock timings of the pairwise partitioner as CSV.
    Bench {
        #[arg(long, value_delimiter = ',', required = true)]
        n_list: Vec<usize>,
        #[arg(long, default_value_t = 11)]
        repeats: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Failure {
        Failure {
            code: EXIT_INVALID_INPUT,
            message: message.into(),
        }
    }

    fn internal(message: impl Into<String>) -> Failure {
        Failure {
            code: EXIT_INTERNAL,
            message: message.into(),
        }
    }
}

/// Input errors exit 1 except the oracle's size guard, which exits 2.
impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        match err {
            Error::OracleTooLarge { .. } => Failure {
                code: EXIT_REFUSED,
                message: err.to_string(),
            },
            _ => Failure::invalid(err.to_string()),
        }
    }
}

type CliResult<T = ()> = std::result::Result<T, Failure>;

/// Parses `args` (program name first), runs the command, and returns the
/// process exit code. Diagnostics go to stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return if err.use_stderr() {
                EXIT_INVALID_INPUT
            } else {
                EXIT_OK
            };
        }
    };
    match execute(cli.command) {
        Ok(()) => EXIT_OK,
        Err(failure) => {
            eprintln!("rectpart: {}", failure.message);
            failure.code
        }
    }
}

fn read(path: &Path) -> CliResult<Vec<u8>> {
    fs::read(path).map_err(|e| Failure::invalid(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, bytes: &[u8]) -> CliResult {
    fs::write(path, bytes)
        .map_err(|e| Failure::invalid(format!("cannot write {}: {e}", path.display())))
}

fn load_instance(path: &Path, normalize: bool) -> CliResult<Instance> {
    parse_instance(&read(path)?, normalize)
        .map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))
}

fn execute(command: Command) -> CliResult {
    match command {
        Command::Partition {
            algo,
            input,
            output,
            svg,
            normalize,
            report: report_path,
            labels,
            forced_mode,
        } => partition(
            algo,
            &input,
            Outputs {
                layout: output.as_deref(),
                svg: svg.as_deref(),
                report: report_path.as_deref(),
            },
            normalize,
            labels,
            forced_mode.into(),
        ),
        Command::Gen {
            n,
            family,
            q,
            seed,
            width,
            height,
            output,
        } => {
            let family = match (family, q) {
                (FamilyArg::Uniform, _) => Family::Uniform,
                (FamilyArg::Geo, Some(q)) => Family::Geometric { q },
                (FamilyArg::Geo, None) => {
                    return Err(Failure::invalid("--family geo requires --q"))
                }
            };
            let container = Rect::with_size(width, height)?;
            let inst = generate(&GenSpec::new(n, family, seed, container))?;
            write(&output, &serialize_instance(&inst))
        }
        Command::Eval {
            instance,
            layout,
            output,
            forced_mode,
        } => {
            let inst = load_instance(&instance, false)?;
            let file = parse_layout(&read(&layout)?)
                .map_err(|e| Failure::invalid(format!("{}: {e}", layout.display())))?;
            let rects = file.rects()?;
            let diagnostics = validate_layout(&inst, &rects);
            if !diagnostics.is_ok() {
                return Err(Failure::invalid(format!(
                    "layout does not fit the instance: {diagnostics:?}"
                )));
            }
            let quality = match file.layout()? {
                Some(layout) => report_with(&inst, &layout, forced_mode.into())?,
                None => report_rects_with(&inst, &rects, forced_mode.into())?,
            };
            write(&output, &serialize_report(&quality))
        }
        Command::Oracle {
            input,
            max_n,
            output,
        } => {
            let inst = load_instance(&input, false)?;
            let (value, layout) = optimal_guillotine(&inst, max_n)?;
            let mut file = LayoutFile::from_layout(&layout, false);
            file.total_half_perimeter = value;
            write(&output, &serialize_layout(&file))
        }
        Command::Bench {
            n_list,
            repeats,
            seed,
        } => bench(&n_list, repeats, seed),
    }
}

/// Destinations of `partition`; the layout goes to stdout when unset.
struct Outputs<'a> {
    layout: Option<&'a Path>,
    svg: Option<&'a Path>,
    report: Option<&'a Path>,
}

fn partition(
    algo: Algo,
    input: &Path,
    outputs: Outputs<'_>,
    normalize: bool,
    labels: LabelArg,
    mode: ForcedMode,
) -> CliResult {
    let inst = load_instance(input, normalize)?;
    let layout: Layout = match algo {
        Algo::Dc => partition_dc(&inst),
        Algo::Mdc => partition_mdc(&inst),
    }
    .map_err(|e| Failure::internal(format!("partitioning failed: {e}")))?;

    let diagnostics = validate_layout(&inst, layout.rects());
    if !diagnostics.is_ok() {
        return Err(Failure::internal(format!(
            "produced an invalid layout: {diagnostics:?}"
        )));
    }

    let bytes = serialize_layout(&LayoutFile::from_layout(&layout, outputs.report.is_some()));
    match outputs.layout {
        Some(path) => write(path, &bytes)?,
        None => std::io::stdout()
            .write_all(&bytes)
            .map_err(|e| Failure::invalid(format!("cannot write stdout: {e}")))?,
    }
    if let Some(path) = outputs.svg {
        let options = SvgOptions {
            labels: match labels {
                LabelArg::None => Labels::None,
                LabelArg::Index => Labels::Index,
                LabelArg::Full => Labels::Full,
            },
            ..SvgOptions::default()
        };
        write(path, render_svg(layout.rects(), &inst, &options).as_bytes())?;
    }
    if let Some(path) = outputs.report {
        let quality = report_with(&inst, &layout, mode)
            .map_err(|e| Failure::internal(format!("report failed: {e}")))?;
        write(path, &serialize_report(&quality))?;
    }
    Ok(())
}

fn bench(n_list: &[usize], repeats: usize, seed: u64) -> CliResult {
    if repeats == 0 {
        return Err(Failure::invalid("--repeats must be positive"));
    }
    let container = Rect::with_size(1.0, 1.0)?;
    let mut out = String::from("n,median_ms,mean_ms\n");
    for &n in n_list {
        let inst = generate(&GenSpec::new(n, Family::Uniform, seed, container))?;
        let mut times: Vec<f64> = (0..repeats)
            .map(|_| {
                let start = Instant::now();
                let layout = partition_dc(&inst);
                let elapsed = start.elapsed().as_secs_f64() * 1e3;
                std::hint::black_box(layout).map(|_| elapsed)
            })
            .collect::<Result<_, _>>()
            .map_err(|e| Failure::internal(e.to_string()))?;
        times.sort_by(f64::total_cmp);
        let median = if repeats % 2 == 1 {
            times[repeats / 2]
        } else {
            0.5 * (times[repeats / 2 - 1] + times[repeats / 2])
        };
        let mean = times.iter().sum::<f64>() / repeats as f64;
        out.push_str(&format!("{n},{median:.6},{mean:.6}\n"));
    }
    print!("{out}");
    Ok(())
}
