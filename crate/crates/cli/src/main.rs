use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use hyperverb::constructions::{
    highdim_counterexample, perturb_to_general_position, planar_counterexample, random_arrangement,
    EpsilonChoice, PerturbationConfig,
};
use hyperverb::document::{
    arrangement_to_json, parse_arrangement, PerturbationDocument, ReportDocument,
};
use hyperverb::render::{render_svg, Window};
use hyperverb::verifier::{
    verify_colorful_refutation, verify_monochromatic, ColorfulOptions, IntersectionMode,
    MonochromaticOutcome,
};
use hyperverb::{scalar, ColoredArrangement, Error};

const EXIT_NEGATIVE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_BUDGET: u8 = 3;

/// Exact verification of Tverberg-type partitions of hyperplane arrangements.
#[derive(Parser, Debug)]
#[command(name = "hyperverb", version)]
struct Cli {
    /// Worker threads for partition checks (default: all cores).
    #[arg(long, global = true, env = "HYPERVERB_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write an arrangement document.
    Generate(GenerateArgs),
    /// Verify an arrangement and write a report.
    Verify(VerifyArgs),
    /// Draw a planar arrangement as SVG.
    Render(RenderArgs),
    /// Perturb a refuted arrangement into general position.
    Perturb(PerturbArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    Planar,
    Highdim,
    Random,
}

#[derive(Args, Debug)]
struct GenerateArgs {
    kind: Kind,
    /// Hyperplanes per class.
    #[arg(long)]
    r: usize,
    /// Dimension (highdim and random).
    #[arg(long)]
    d: Option<usize>,
    /// Tilt of the last class for highdim, as a rational.
    #[arg(long)]
    epsilon: Option<String>,
    /// Required for random.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Colorful,
    Monochromatic,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = Mode::Colorful)]
    mode: Mode,
    #[arg(long)]
    output: Option<PathBuf>,
    /// Check one partition per symmetry type instead of every partition.
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    up_to_symmetry: bool,
    /// Monochromatic mode: accept pairwise intersection instead of a common point.
    #[arg(long)]
    pairwise: bool,
}

#[derive(Args, Debug)]
struct RenderArgs {
    #[arg(long)]
    input: PathBuf,
    /// "min,max" or "x_min,x_max,y_min,y_max", as rationals.
    #[arg(long, default_value = "-3,3", allow_hyphen_values = true)]
    window: String,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PerturbArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Perturbed arrangement.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Perturbation report with the re-verification.
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long)]
    max_attempts: Option<usize>,
}

struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl From<anyhow::Error> for Failure {
    fn from(error: anyhow::Error) -> Self {
        let code = match error.downcast_ref::<Error>() {
            Some(Error::PerturbationBudget { .. }) => EXIT_BUDGET,
            _ => EXIT_INPUT,
        };
        Failure { code, error }
    }
}

impl From<Error> for Failure {
    fn from(error: Error) -> Self {
        anyhow::Error::new(error).into()
    }
}

type Outcome = Result<u8, Failure>;

fn emit(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load(path: &Path) -> anyhow::Result<ColoredArrangement> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_arrangement(&text).with_context(|| format!("loading {}", path.display()))
}

fn generate(args: GenerateArgs) -> Outcome {
    let arrangement = match args.kind {
        Kind::Planar => planar_counterexample(args.r)?,
        Kind::Highdim => {
            let d = args.d.ok_or_else(|| anyhow!("highdim needs --d"))?;
            let epsilon = match &args.epsilon {
                Some(text) => Some(EpsilonChoice::new(scalar::parse(text)?, d)?),
                None => None,
            };
            highdim_counterexample(d, args.r, epsilon)?
        }
        Kind::Random => {
            let d = args.d.ok_or_else(|| anyhow!("random needs --d"))?;
            let seed = args.seed.ok_or_else(|| anyhow!("random needs --seed"))?;
            random_arrangement(d, args.r, seed)?
        }
    };
    emit(args.output.as_deref(), &arrangement_to_json(&arrangement))?;
    Ok(0)
}

fn verify(args: VerifyArgs) -> Outcome {
    let arrangement = load(&args.input)?;
    let (doc, positive) = match args.mode {
        Mode::Colorful => {
            let options = ColorfulOptions {
                up_to_symmetry: args.up_to_symmetry,
                ..ColorfulOptions::default()
            };
            let report = verify_colorful_refutation(&arrangement, options)?;
            eprintln!(
                "{}: {} of {} partition types certified",
                if report.is_refuted() {
                    "refuted"
                } else {
                    "not refuted"
                },
                report
                    .records
                    .iter()
                    .filter(|r| matches!(
                        r.outcome,
                        hyperverb::verifier::PartitionOutcome::Refuted { .. }
                    ))
                    .count(),
                report.records.len()
            );
            (
                ReportDocument::colorful(&arrangement, &report),
                report.is_refuted(),
            )
        }
        Mode::Monochromatic => {
            let mode = if args.pairwise {
                IntersectionMode::Pairwise
            } else {
                IntersectionMode::CommonPoint
            };
            let outcome = verify_monochromatic(&arrangement.union(), arrangement.parts(), mode)?;
            let found = matches!(outcome, MonochromaticOutcome::Witness(_));
            match &outcome {
                MonochromaticOutcome::Witness(w) => {
                    eprintln!("witness found: blocks {:?}", w.blocks)
                }
                MonochromaticOutcome::Exhausted { checked } => {
                    eprintln!(
                        "exhausted after {checked} partitions: {}",
                        MonochromaticOutcome::EXHAUSTED_MESSAGE
                    )
                }
            }
            (ReportDocument::monochromatic(&arrangement, &outcome), found)
        }
    };
    emit(args.output.as_deref(), &doc.to_json())?;
    Ok(if positive { 0 } else { EXIT_NEGATIVE })
}

fn render(args: RenderArgs) -> Outcome {
    let arrangement = load(&args.input)?;
    let window = Window::parse(&args.window)?;
    emit(args.output.as_deref(), &render_svg(&arrangement, &window)?)?;
    Ok(0)
}

fn perturb(args: PerturbArgs) -> Outcome {
    let arrangement = load(&args.input)?;
    let report = verify_colorful_refutation(&arrangement, ColorfulOptions::default())?;
    let mut config = PerturbationConfig::with_seed(args.seed);
    if let Some(n) = args.max_attempts {
        config.max_attempts = n;
    }
    let out = perturb_to_general_position(&arrangement, &report, &config)?;
    let again = verify_colorful_refutation(&out.perturbed, ColorfulOptions::default())?;
    eprintln!(
        "perturbed after {} attempts; re-verification: {}",
        out.attempts,
        if again.is_refuted() {
            "refuted"
        } else {
            "not refuted"
        }
    );
    emit(args.output.as_deref(), &arrangement_to_json(&out.perturbed))?;
    if let Some(path) = &args.report {
        emit(
            Some(path),
            &PerturbationDocument::new(&arrangement, &out, &again).to_json(),
        )?;
    }
    Ok(if again.is_refuted() { 0 } else { EXIT_NEGATIVE })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT } else { 0 });
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INPUT);
        }
    }
    let result = match cli.command {
        Command::Generate(a) => generate(a),
        Command::Verify(a) => verify(a),
        Command::Render(a) => render(a),
        Command::Perturb(a) => perturb(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
