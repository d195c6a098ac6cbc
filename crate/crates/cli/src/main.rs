//! `sheafradon`: directional barcodes, convolution, distances and the
//! verification suite for scene files.
//!
//! Exit codes: 0 success, 1 verification failure, 2 input error.

mod render;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use sheaf_radon::convex::Norm;
use sheaf_radon::numeric::{parse_q, Q};
use sheaf_radon::persdist::{shift_upper_bound, sup_direction_distance, Cost, DistanceReport, Evidence};
use sheaf_radon::plancx::Direction;
use sheaf_radon::radon::radon_summary;
use sheaf_radon::scene::{load_scene, Scene};
use sheaf_radon::sheafobj::{Backend, BallSpec, SheafObject};
use sheaf_radon::suite::run_suite;

const THREADS_ENV: &str = "SHEAFRADON_THREADS";

#[derive(Parser)]
#[command(name = "sheafradon", version, about = "Exact sheaf convolution, Radon barcodes and distances on the plane")]
struct Cli {
    /// Override the coefficient field F_p of the scene.
    #[arg(long, global = true)]
    field: Option<u32>,
    /// Tolerance for floating-point comparisons of unit-normalized values.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Worker threads (default: $SHEAFRADON_THREADS, else all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum NormArg {
    L2,
    Linf,
}

impl From<NormArg> for Norm {
    fn from(n: NormArg) -> Norm {
        match n {
            NormArg::L2 => Norm::L2,
            NormArg::Linf => Norm::Linf,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SuiteName {
    Paper,
}

#[derive(Args)]
struct DirArgs {
    /// Number of directions spread over the circle.
    #[arg(long, conflicts_with = "dir")]
    dirs: Option<usize>,
    /// Explicit direction `p,q` (primitive integers); repeatable.
    #[arg(long, value_parser = parse_dir, allow_hyphen_values = true)]
    dir: Vec<Direction>,
}

impl DirArgs {
    fn resolve(&self, default: usize) -> anyhow::Result<Vec<Direction>> {
        if !self.dir.is_empty() {
            return Ok(self.dir.clone());
        }
        match self.dirs.unwrap_or(default) {
            0 => bail!(UsageError("--dirs must be positive".into())),
            n => Ok(Direction::spread(n)),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Per-direction barcodes of the Radon transform.
    Radon {
        scene: PathBuf,
        #[command(flatten)]
        dirs: DirArgs,
        /// Norm used to normalize levels to unit directions.
        #[arg(long, value_enum, default_value = "l2")]
        norm: NormArg,
        #[arg(long)]
        out_csv: Option<PathBuf>,
        #[arg(long)]
        out_svg: Option<PathBuf>,
    },
    /// Stalks of K_a * F.
    Convolve {
        scene: PathBuf,
        #[arg(long, value_parser = parse_rational, allow_hyphen_values = true)]
        a: Q,
        #[arg(long, value_enum)]
        norm: NormArg,
        /// Lattice size per side for sampling convex scenes.
        #[arg(long, default_value_t = 41)]
        samples: usize,
        #[arg(long)]
        out_csv: Option<PathBuf>,
        #[arg(long)]
        out_svg: Option<PathBuf>,
    },
    /// Lower and upper bounds for the distance between two scenes.
    Distance {
        scene_a: PathBuf,
        scene_b: PathBuf,
        #[command(flatten)]
        dirs: DirArgs,
        /// Ball norm (default: sup norm on grid scenes, Euclidean on convex ones).
        #[arg(long, value_enum)]
        norm: Option<NormArg>,
    },
    /// Run the verification suite.
    Verify {
        #[arg(long, value_enum, default_value = "paper")]
        suite: SuiteName,
    },
    /// Draw the support of a scene.
    Plot {
        scene: PathBuf,
        #[arg(long, default_value_t = 41)]
        samples: usize,
        #[arg(long)]
        out_svg: PathBuf,
    },
}

/// Bad invocation that clap could not catch.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

/// The run completed but a check failed.
#[derive(Debug)]
struct VerificationFailed;

impl std::fmt::Display for VerificationFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("verification failed")
    }
}

impl std::error::Error for VerificationFailed {}

fn parse_rational(s: &str) -> Result<Q, String> {
    parse_q(s).map_err(|e| e.to_string())
}

fn parse_dir(s: &str) -> Result<Direction, String> {
    let (p, q) = s.split_once(',').ok_or_else(|| format!("expected p,q, got {s:?}"))?;
    let p: i64 = p.trim().parse().map_err(|e| format!("{p:?}: {e}"))?;
    let q: i64 = q.trim().parse().map_err(|e| format!("{q:?}: {e}"))?;
    Direction::new(p, q).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = init_threads(cli.threads) {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is::<VerificationFailed>() => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn init_threads(flag: Option<usize>) -> anyhow::Result<()> {
    let n = match flag {
        Some(n) => Some(n),
        None => match std::env::var(THREADS_ENV) {
            Ok(v) => Some(v.parse().with_context(|| format!("{THREADS_ENV}={v:?}"))?),
            Err(_) => None,
        },
    };
    if let Some(n) = n {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn load(path: &Path, field: Option<u32>) -> anyhow::Result<Scene> {
    let mut scene = load_scene(path).with_context(|| format!("loading {}", path.display()))?;
    if let Some(p) = field {
        scene.field = p;
        scene.compile().with_context(|| format!("field override {p}"))?;
    }
    Ok(scene)
}

fn write_or_print(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> anyhow::Result<()> {
    match &cli.command {
        Command::Radon { scene, dirs, norm, out_csv, out_svg } => {
            let dirs = dirs.resolve(64)?;
            let f = load(scene, cli.field)?.compile()?;
            let summary = radon_summary(&f, &dirs)?;
            let csv = render::barcode_csv(&summary, (*norm).into())?;
            write_or_print(out_csv.as_deref(), &csv)?;
            if let Some(p) = out_svg {
                std::fs::write(p, render::barcode_svg(&summary, (*norm).into()))
                    .with_context(|| format!("writing {}", p.display()))?;
            }
            if out_csv.is_some() {
                match &summary.phi {
                    Some(_) => println!("{} directions; epigraph profile recognized", dirs.len()),
                    None => println!("{} directions", dirs.len()),
                }
            }
            Ok(())
        }
        Command::Convolve { scene, a, norm, samples, out_csv, out_svg } => {
            let scene = load(scene, cli.field)?;
            let norm: Norm = (*norm).into();
            if norm == Norm::L2 && scene.backend == Backend::Grid {
                bail!(UsageError("the l2 norm needs a convex scene".into()));
            }
            if scene.backend == Backend::Grid {
                scene.check_radius(*a)?;
            }
            let f = scene.compile()?;
            let picture = render::convolved(&f, &scene, *a, norm, *samples)?;
            write_or_print(out_csv.as_deref(), &picture.csv)?;
            if let Some(p) = out_svg {
                std::fs::write(p, &picture.svg).with_context(|| format!("writing {}", p.display()))?;
            }
            if out_csv.is_some() {
                for (degree, count) in &picture.support_counts {
                    println!("degree {degree}: {count} {}", picture.unit);
                }
            }
            Ok(())
        }
        Command::Distance { scene_a, scene_b, dirs, norm } => {
            let dirs = dirs.resolve(16)?;
            let (sa, sb) = (load(scene_a, cli.field)?, load(scene_b, cli.field)?);
            let norm: Norm = match norm {
                Some(n) => (*n).into(),
                None if sa.backend == Backend::Grid => Norm::Linf,
                None => Norm::L2,
            };
            distance(&sa, &sb, &dirs, norm, cli.tol)
        }
        Command::Verify { suite: SuiteName::Paper } => {
            let report = run_suite();
            println!("{report}");
            if report.all_passed() {
                Ok(())
            } else {
                Err(VerificationFailed.into())
            }
        }
        Command::Plot { scene, samples, out_svg } => {
            let scene = load(scene, cli.field)?;
            let f = scene.compile()?;
            let norm = if scene.backend == Backend::Grid { Norm::Linf } else { Norm::L2 };
            let picture = render::convolved(&f, &scene, Q::from(0), norm, *samples)?;
            std::fs::write(out_svg, &picture.svg).with_context(|| format!("writing {}", out_svg.display()))?;
            Ok(())
        }
    }
}

fn ball(norm: Norm, a: Q) -> BallSpec {
    BallSpec { norm, radius: a }
}

/// Whether `K_a * x` coincides with `y`, and how that was checked.
fn shifted_equals(x: &SheafObject, y: &SheafObject, a: Q, norm: Norm, dirs: &[Direction]) -> anyhow::Result<Option<&'static str>> {
    let k = match x.convolve_object(&ball(norm, a)) {
        Ok(k) => k,
        Err(_) => return Ok(None),
    };
    render::same_object(&k, y, dirs)
}

fn describe(r: &DistanceReport) -> String {
    match &r.evidence {
        Evidence::Direction { direction, .. } => {
            format!("{} {} (witness direction {},{})", r.kind, r.value, direction.p(), direction.q())
        }
        Evidence::Interleaving(c) => format!(
            "{} {} (interleaving f = id on K_{} * F, g = chi_{{{},{}}})",
            r.kind, r.value, c.a, c.g.a, c.g.b
        ),
        Evidence::Matching(m) => format!("{} {} ({} matched pairs)", r.kind, r.value, m.pairs.len()),
    }
}

fn distance(sa: &Scene, sb: &Scene, dirs: &[Direction], norm: Norm, tol: f64) -> anyhow::Result<()> {
    let (fa, fb) = (sa.compile()?, sb.compile()?);
    let lower = sup_direction_distance(&fa, &fb, dirs, norm)?;
    println!("{}", describe(&lower.report));
    let mut upper = None;
    if let Some(a) = lower.report.value.finite().and_then(|v| v.as_rational()) {
        for (x, y, label) in [(&fa, &fb, "B = K_a * A"), (&fb, &fa, "A = K_a * B")] {
            if let Some(how) = shifted_equals(x, y, a, norm, dirs)? {
                upper = Some((shift_upper_bound(a)?, label, how));
                break;
            }
        }
    }
    match upper {
        Some((u, label, how)) => {
            println!("{}; {label} checked {how}", describe(&u));
            let pinched = match (lower.report.value, u.value) {
                (Cost::Finite(l), Cost::Finite(v)) => (l.to_f64() - v.to_f64()).abs() <= tol,
                _ => false,
            };
            if pinched {
                println!("distance {}", u.value);
            }
        }
        None => println!("upper_bound none found"),
    }
    Ok(())
}
