use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use softvq::verify::Level;
use softvq::Manifold;

mod commands;
mod output;

use commands::BoundaryKind;
use output::{emit, Format, Manifest};

#[derive(Parser)]
#[command(name = "softvq", version, about = "Optimal soft vector-quantiser encodings of circles and tori")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,

    /// Output file; a `<out>.manifest.json` sidecar is written next to it.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Absolute tolerance for the D1/D2 quadrature.
    #[arg(long, global = true, default_value_t = 1e-12)]
    tol: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum ManifoldArg {
    Circle,
    TorusJoint,
    TorusFactorial,
}

impl From<ManifoldArg> for Manifold {
    fn from(m: ManifoldArg) -> Self {
        match m {
            ManifoldArg::Circle => Manifold::Circle,
            ManifoldArg::TorusJoint => Manifold::TorusJoint,
            ManifoldArg::TorusFactorial => Manifold::TorusFactorial,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    Fast,
    Full,
}

#[derive(Args)]
struct Point {
    #[arg(long, value_enum)]
    manifold: ManifoldArg,
    #[arg(long = "M")]
    m: f64,
    #[arg(long)]
    n: f64,
}

/// M values, either listed or as an evenly spaced range.
#[derive(Args)]
struct MValues {
    #[arg(long = "M", value_delimiter = ',', conflicts_with = "m_min")]
    m: Vec<f64>,
    #[arg(long = "M-min", requires_all = ["m_max", "m_steps"])]
    m_min: Option<f64>,
    #[arg(long = "M-max")]
    m_max: Option<f64>,
    #[arg(long = "M-steps")]
    m_steps: Option<usize>,
}

impl MValues {
    fn resolve(&self) -> Result<Vec<f64>, String> {
        match (self.m_min, self.m_max, self.m_steps) {
            (Some(lo), Some(hi), Some(k)) => commands::linear_range(lo, hi, k),
            _ => Ok(self.m.clone()),
        }
    }
}

/// n values, either listed or geometrically spaced.
#[derive(Args)]
struct NValues {
    #[arg(long, value_delimiter = ',', conflicts_with = "n_min")]
    n: Vec<f64>,
    #[arg(long = "n-min", requires_all = ["n_max", "steps"])]
    n_min: Option<f64>,
    #[arg(long = "n-max")]
    n_max: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
}

impl NValues {
    fn resolve(&self) -> Result<Vec<f64>, String> {
        match (self.n_min, self.n_max, self.steps) {
            (Some(lo), Some(hi), Some(k)) => commands::n_range(lo, hi, k),
            _ => Ok(self.n.clone()),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Optimal s, r and D1+D2 at one (M, n).
    Solve(Point),
    /// Optimal s over a grid of M and n, M-major.
    Sweep {
        #[arg(long, value_enum)]
        manifold: ManifoldArg,
        #[command(flatten)]
        m: MValues,
        #[command(flatten)]
        n: NValues,
    },
    /// Two/three overlap boundary in n, or the joint/factorial boundary in M.
    Boundary {
        #[arg(long, value_enum)]
        kind: BoundaryKind,
        #[command(flatten)]
        m: MValues,
        #[command(flatten)]
        n: NValues,
    },
    /// Check the closed forms against the numerical oracle.
    Verify {
        #[arg(long, value_enum, default_value = "fast")]
        level: LevelArg,
        /// Multiplies every optimal r before checking.
        #[arg(long, hide = true, default_value_t = 1.0)]
        inject_r_scale: f64,
    },
    /// Optimal posterior of neuron 0 and its neighbours over θ.
    Posterior {
        #[command(flatten)]
        point: Point,
        #[arg(long, default_value_t = 401)]
        points: usize,
    },
    /// Exact posterior against the hinge-activation approximation (circle).
    Approx {
        #[arg(long = "M")]
        m: f64,
        #[arg(long)]
        n: f64,
        #[arg(long, default_value_t = 201)]
        points: usize,
    },
}

fn point_manifest(name: &'static str, p: &Point) -> Manifest {
    Manifest::new(name)
        .param("manifold", Manifold::from(p.manifold).name())
        .param("M", p.m)
        .param("n", p.n)
}

fn run(cli: &Cli) -> Result<output::Output, String> {
    let format = match cli.format {
        Format::Json => "json",
        Format::Csv => "csv",
    };
    match &cli.command {
        Command::Solve(p) => {
            if !(cli.tol > 0.0 && cli.tol.is_finite()) {
                return Err(format!("tol > 0 required (got {})", cli.tol));
            }
            let man = point_manifest("solve", p).param("tol", cli.tol).param("format", format);
            commands::solve_cmd(man, p.manifold.into(), p.m, p.n, cli.tol)
        }
        Command::Sweep { manifold, m, n } => {
            let (ms, ns) = (m.resolve()?, n.resolve()?);
            if ns.is_empty() {
                return Err("no n values: give --n or --n-min/--n-max/--steps".into());
            }
            let man = Manifest::new("sweep")
                .param("manifold", Manifold::from(*manifold).name())
                .param("M", ms.clone())
                .param("n", ns.clone())
                .param("format", format);
            commands::sweep_cmd(man, (*manifold).into(), &ms, &ns)
        }
        Command::Boundary { kind, m, n } => {
            let man = Manifest::new("boundary").param("kind", kind.name()).param("format", format);
            match kind {
                BoundaryKind::JointFactorial => {
                    let ns = n.resolve()?;
                    commands::boundary_joint_factorial_cmd(man.param("n", ns.clone()), &ns)
                }
                _ => {
                    let ms = m.resolve()?;
                    commands::boundary_two_three_cmd(man.param("M", ms.clone()), *kind, &ms)
                }
            }
        }
        Command::Verify { level, inject_r_scale } => {
            let (level, name) = match level {
                LevelArg::Fast => (Level::Fast, "fast"),
                LevelArg::Full => (Level::Full, "full"),
            };
            let mut man = Manifest::new("verify").param("level", name).param("format", format).seed(cli.seed);
            if *inject_r_scale != 1.0 {
                man = man.param("inject_r_scale", *inject_r_scale);
            }
            commands::verify_cmd(man, level, cli.seed, *inject_r_scale)
        }
        Command::Posterior { point, points } => {
            let man = point_manifest("posterior", point).param("points", *points).param("format", format);
            commands::posterior_cmd(man, point.manifold.into(), point.m, point.n, *points)
        }
        Command::Approx { m, n, points } => {
            let man = Manifest::new("approx")
                .param("M", *m)
                .param("n", *n)
                .param("points", *points)
                .param("format", format);
            commands::approx_cmd(man, *m, *n, *points)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match run(&cli) {
        Ok(out) => out,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = emit(&out, cli.format, cli.out.as_deref()) {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(2);
    }
    if !out.failing.is_empty() {
        eprintln!("verification failed: {}", out.failing.join(", "));
        return ExitCode::from(1);
    }
    ExitCode::SUCCESS
}
