use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ssb_lab::config::{ExperimentConfig, Overrides, ParamConfig};
use ssb_lab::experiments::{print_catalog, run_experiment};
use ssb_lab::figures::emit_figure_data;

#[derive(Parser)]
#[command(
    name = "ssb-lab",
    version,
    about = "Experiment runner for one-dimensional quantum wells and their symmetry verdicts",
    after_help = "Run `ssb-lab list` for the experiment catalog and defaults."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default)]
struct CommonFlags {
    /// JSON config file; flags given here win over file values
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (beats SSB_LAB_OUT and the config file)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Grid sample count
    #[arg(long)]
    grid_n: Option<usize>,
    /// Grid lower bound
    #[arg(long)]
    grid_min: Option<f64>,
    /// Grid upper bound
    #[arg(long)]
    grid_max: Option<f64>,
    /// Degeneracy clustering tolerance (default 1e-8)
    #[arg(long)]
    tol_degeneracy: Option<f64>,
    /// Residual tolerance override for residual-based checks
    #[arg(long)]
    tol_residual: Option<f64>,
    /// Worker pool size for sweep experiments (default: number of processors)
    #[arg(long)]
    jobs: Option<usize>,
    /// Quartic well stiffness
    #[arg(long)]
    lambda: Option<f64>,
    /// Quartic well softening
    #[arg(long)]
    mu: Option<f64>,
    /// Outer wall position / well parameter a
    #[arg(long)]
    a: Option<f64>,
    /// Sextic width parameter (alias of --a for the sextic model)
    #[arg(long)]
    a_sextic: Option<f64>,
    /// Barrier half-width b
    #[arg(long)]
    b: Option<f64>,
    /// Barrier height for the finite well
    #[arg(long)]
    alpha: Option<f64>,
    /// Comma-separated barrier heights for sweeps
    #[arg(long, value_delimiter = ',')]
    alphas: Option<Vec<f64>>,
    /// Oscillator frequency
    #[arg(long)]
    omega: Option<f64>,
    /// Upper channel frequency
    #[arg(long)]
    omega_plus: Option<f64>,
    /// Lower channel frequency
    #[arg(long)]
    omega_minus: Option<f64>,
    /// Particle mass (default 1)
    #[arg(long)]
    mass: Option<f64>,
    /// Reduced action constant (default 1)
    #[arg(long)]
    hbar: Option<f64>,
    /// Comma-separated well separations for the double-oscillator sweep
    #[arg(long, value_delimiter = ',')]
    separations: Option<Vec<f64>>,
    /// Doublet index for splitting tables / level count for projections
    #[arg(long)]
    level: Option<u32>,
    /// Randomized trial count for the pair construction
    #[arg(long)]
    trials: Option<u32>,
    /// Seed for randomized runs
    #[arg(long)]
    seed: Option<u64>,
}

impl CommonFlags {
    fn into_overrides(self) -> (Option<PathBuf>, Overrides) {
        let params = ParamConfig {
            lambda: self.lambda,
            mu: self.mu,
            a: self.a,
            a_sextic: self.a_sextic,
            b: self.b,
            alpha: self.alpha,
            alphas: self.alphas,
            omega: self.omega,
            omega_plus: self.omega_plus,
            omega_minus: self.omega_minus,
            mass: self.mass,
            hbar: self.hbar,
            separations: self.separations,
            level: self.level,
            trials: self.trials,
            seed: self.seed,
        };
        (
            self.config,
            Overrides {
                grid_n: self.grid_n,
                grid_min: self.grid_min,
                grid_max: self.grid_max,
                tol_degeneracy: self.tol_degeneracy,
                tol_residual: self.tol_residual,
                out: self.out,
                jobs: self.jobs,
                params,
            },
        )
    }
}

#[derive(Subcommand)]
enum Command {
    /// Quartic double well: split levels, unbroken parity verdict
    SombreroGap(CommonFlags),
    /// Factorized sextic well: zero-energy ground state checks
    SexticGround(CommonFlags),
    /// Double oscillator: splitting vs well separation sweep
    DoubleOscillatorLimit(CommonFlags),
    /// Finite square double well: transcendental levels vs the grid solver
    UalphaLevels(CommonFlags),
    /// Decoupled double well: degenerate ladder and ground pair
    UinfSsb(CommonFlags),
    /// Projection of decoupled-well eigenstates onto one half-line
    BarrierTheorem(CommonFlags),
    /// Two-channel oscillator model with a broken internal symmetry
    SpinorSsb(CommonFlags),
    /// Randomized non-overlapping pair construction trials
    PairLemma(CommonFlags),
    /// Emit the data behind one of the five figures as CSV
    Figure {
        /// Figure number, 1..=5
        number: u8,
        /// Output directory (beats SSB_LAB_OUT)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the experiment catalog and defaults
    List,
}

fn run(name: &str, flags: CommonFlags) -> ExitCode {
    let (config_path, overrides) = flags.into_overrides();
    let file = match config_path {
        Some(path) => match ExperimentConfig::load(&path) {
            Ok(cfg) => cfg,
            Err(err) => return config_error(name, &err),
        },
        None => ExperimentConfig::default(),
    };
    match run_experiment(name, file, overrides) {
        Ok((report, path)) => {
            for check in &report.checks {
                let status = if check.passed { "pass" } else { "FAIL" };
                println!(
                    "[{status}] {}: {:e} {} {:e}",
                    check.name, check.measured, check.comparator, check.threshold
                );
            }
            println!(
                "report: {} ({} tables), passed = {}",
                path.display(),
                report.tables.len(),
                report.passed
            );
            if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(err) => config_error(name, &err),
    }
}

fn config_error(name: &str, err: &anyhow::Error) -> ExitCode {
    eprintln!(
        "{}",
        serde_json::json!({
            "experiment": name,
            "error": format!("{err:#}"),
        })
    );
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::SombreroGap(f) => run("sombrero-gap", f),
        Command::SexticGround(f) => run("sextic-ground", f),
        Command::DoubleOscillatorLimit(f) => run("double-oscillator-limit", f),
        Command::UalphaLevels(f) => run("ualpha-levels", f),
        Command::UinfSsb(f) => run("uinf-ssb", f),
        Command::BarrierTheorem(f) => run("barrier-theorem", f),
        Command::SpinorSsb(f) => run("spinor-ssb", f),
        Command::PairLemma(f) => run("pair-lemma", f),
        Command::Figure { number, out } => {
            let dir = out
                .or_else(|| std::env::var("SSB_LAB_OUT").ok().map(PathBuf::from))
                .unwrap_or_else(|| PathBuf::from("out"));
            match emit_figure_data(number, &dir) {
                Ok(path) => {
                    println!("wrote {}", path.display());
                    ExitCode::SUCCESS
                }
                Err(err) => config_error("figure", &err),
            }
        }
        Command::List => {
            print_catalog();
            ExitCode::SUCCESS
        }
    }
}
