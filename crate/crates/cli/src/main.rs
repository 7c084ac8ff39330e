use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use mapcyl::bench::{run_benchmark, sample_trajectory, TrajectoryPoint};
use mapcyl::emit;
use mapcyl::verify::{is_audit, run_suite, suite_passed, SuiteConfig};
use mapcyl::{fixture, gamma, CylPoint, GammaImpl, Region, SpacePoint, UnitParam, FIXTURE_NAMES};

#[derive(Parser)]
#[command(
    name = "mapcyl",
    version,
    about = "Evaluate, verify and benchmark the deformation retraction of a mapping cylinder onto its top"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate Γ at a single point and time.
    Eval(EvalArgs),
    /// Run the verification suites; exits 1 if any non-audit check fails.
    Verify(VerifyArgs),
    /// Time the evaluators on a shared grid.
    Bench(BenchArgs),
    /// Sample the trajectory s ↦ Γ(p, s).
    Sample(SampleArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// A point of the mapping cylinder: `--coords` with `--t` for `[x, t]`,
/// without it for a base point `[y]`.
#[derive(Args)]
struct PointArgs {
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        required = true
    )]
    coords: Vec<f64>,
    #[arg(long)]
    t: Option<f64>,
}

impl PointArgs {
    fn point(&self) -> mapcyl::Result<CylPoint> {
        let c = SpacePoint::new(&self.coords)?;
        Ok(match self.t {
            Some(t) => CylPoint::cyl(c, UnitParam::new(t)?),
            None => CylPoint::base(c),
        })
    }
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    fixture: String,
    #[arg(long = "impl", default_value = "compositional")]
    implementation: GammaImpl,
    #[command(flatten)]
    point: PointArgs,
    #[arg(long)]
    s: f64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct VerifyArgs {
    /// Defaults to every catalogued fixture.
    #[arg(long)]
    fixture: Option<String>,
    /// Defaults to every implementation.
    #[arg(long = "impl")]
    implementation: Option<GammaImpl>,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Lattice size of the differential tests.
    #[arg(long, default_value_t = 64 * 64)]
    grid: usize,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    /// Region of the main differential test.
    #[arg(long)]
    region: Option<Region>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, default_value = "identity-line")]
    fixture: String,
    /// Repeatable; defaults to every implementation.
    #[arg(long = "impl")]
    implementation: Vec<GammaImpl>,
    /// Number of (point, time) samples.
    #[arg(long, default_value_t = 64 * 64)]
    grid: usize,
    #[arg(long, default_value_t = 5)]
    reps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long)]
    fixture: String,
    #[arg(long = "impl", default_value = "compositional")]
    implementation: GammaImpl,
    #[command(flatten)]
    point: PointArgs,
    #[arg(long, default_value_t = 64)]
    steps: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Serialize)]
struct Evaluation<'a> {
    fixture: &'a str,
    #[serde(rename = "impl")]
    implementation: GammaImpl,
    input: CylPoint,
    s: f64,
    output: CylPoint,
}

fn write_out(output: &Output, text: &str) -> anyhow::Result<()> {
    match &output.out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            if !text.ends_with('\n') {
                stdout.write_all(b"\n")?;
            }
            Ok(())
        }
    }
}

fn eval(args: &EvalArgs) -> anyhow::Result<bool> {
    let he = fixture(&args.fixture)?;
    let input = args.point.point()?;
    let s = UnitParam::new(args.s)?;
    mapcyl::canonicalize(&he, &input)?;
    let output = gamma(args.implementation, &he, &input, s);
    let text = match args.output.format {
        Format::Json => emit::to_json(&Evaluation {
            fixture: he.name(),
            implementation: args.implementation,
            input,
            s: s.get(),
            output,
        })?,
        Format::Csv => emit::trajectory_to_csv(&[TrajectoryPoint {
            s: s.get(),
            point: output,
        }])?,
    };
    write_out(&args.output, &text)?;
    Ok(true)
}

fn verify(args: &VerifyArgs) -> anyhow::Result<bool> {
    let fixtures: Vec<&str> = match &args.fixture {
        Some(name) => vec![name.as_str()],
        None => FIXTURE_NAMES.to_vec(),
    };
    let impls: Vec<GammaImpl> = match args.implementation {
        Some(i) => vec![i],
        None => GammaImpl::ALL.to_vec(),
    };
    let cfg = SuiteConfig {
        samples: args.samples,
        seed: args.seed,
        tol: args.tol,
        grid: args.grid,
        region: args.region,
        ..SuiteConfig::default()
    };
    let mut reports = Vec::new();
    for name in fixtures {
        let he = fixture(name)?;
        for &which in &impls {
            for r in run_suite(which, &he, &cfg)? {
                // checks that do not depend on the implementation run once
                let seen = reports.iter().any(|q: &mapcyl::CheckReport| {
                    q.check_name == r.check_name
                        && q.fixture == r.fixture
                        && q.implementation == r.implementation
                });
                if !seen {
                    reports.push(r);
                }
            }
        }
    }
    for r in &reports {
        let status = match (is_audit(r), r.pass) {
            (false, true) => "PASS ",
            (false, false) => "FAIL ",
            (true, true) => "clean",
            (true, false) => "found",
        };
        let which = r.implementation.map_or("-", GammaImpl::as_str);
        eprintln!(
            "{status} {:<52} {:<16} {:<13} max {:.3e}",
            r.check_name, r.fixture, which, r.max_dev
        );
    }
    let text = match args.output.format {
        Format::Json => emit::to_json(&reports)?,
        Format::Csv => emit::checks_to_csv(&reports)?,
    };
    write_out(&args.output, &text)?;
    Ok(suite_passed(&reports))
}

fn bench(args: &BenchArgs) -> anyhow::Result<bool> {
    let he = fixture(&args.fixture)?;
    let impls = if args.implementation.is_empty() {
        GammaImpl::ALL.to_vec()
    } else {
        args.implementation.clone()
    };
    let report = run_benchmark(&he, &impls, args.grid, args.reps, args.seed)?;
    let text = match args.output.format {
        Format::Json => emit::to_json(&report)?,
        Format::Csv => emit::bench_to_csv(&report)?,
    };
    write_out(&args.output, &text)?;
    Ok(true)
}

fn sample(args: &SampleArgs) -> anyhow::Result<bool> {
    let he = fixture(&args.fixture)?;
    let traj = sample_trajectory(&he, args.implementation, &args.point.point()?, args.steps)?;
    let text = match args.output.format {
        Format::Json => emit::to_json(&traj)?,
        Format::Csv => emit::trajectory_to_csv(&traj)?,
    };
    write_out(&args.output, &text)?;
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Eval(a) => eval(a),
        Command::Verify(a) => verify(a),
        Command::Bench(a) => bench(a),
        Command::Sample(a) => sample(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
