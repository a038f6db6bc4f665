//! `lxeb`: run experiments, evaluate exact moments, bounds and design depths,
//! and sample single circuits.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{CommandFactory, Parser, Subcommand, ValueEnum};

use lxeb_core::bounds::{guarantee_with_base, LogBase, Theorem};
use lxeb_core::ensembles::{
    required_depth_4design, required_depth_coarse, required_depth_tdesign,
};
use lxeb_core::estimators::{lxeb_test, DEFAULT_B};
use lxeb_core::experiments::{run_experiment_timed, ExperimentConfig};
use lxeb_core::moments::{
    collision_mean, collision_variance, haar_moment, sample_variance_mean, variance_of_variance,
};
use lxeb_core::state::{format_bitstring, run_circuit};
use lxeb_core::{EnsembleSpec, Error, GateEnsemble, Group, IntegerPartition, SeedPlan};

#[derive(Parser, Debug)]
#[command(name = "lxeb", version, about = "Random circuit sampling and LXEB workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the experiment described by a JSON config; writes report.json and trials.csv.
    ///
    /// Flags override the corresponding config values. The worker count comes from
    /// --workers, then LXEB_WORKERS, then the config, then the number of CPUs.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Master seed (overrides `master_seed`).
        #[arg(long)]
        seed: Option<u64>,
        /// Number of trials (overrides `trials`).
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long, env = "LXEB_WORKERS")]
        workers: Option<usize>,
        /// Directory for report.json and trials.csv (overrides the config paths).
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Exact Haar moment of output probabilities, printed as `num/den = float`.
    Moments {
        #[arg(long, default_value = "unitary")]
        group: Group,
        /// Integer partition such as `2`, `3,1` or `(2,2)`; used by `--quantity moment`.
        #[arg(long, default_value = "1")]
        partition: IntegerPartition,
        /// Dimension d = 2^n.
        #[arg(long)]
        d: u64,
        #[arg(long, value_enum, default_value_t = Quantity::Moment)]
        quantity: Quantity,
    },
    /// Evaluate an LXEB pass-probability guarantee.
    Bounds {
        /// One of lindepth, 8design, polydepth, orthogonal.
        #[arg(long)]
        theorem: Theorem,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Base::Natural)]
        log_base: Base,
    },
    /// Brickwork depth needed for an approximate design.
    Depth {
        #[arg(long, value_enum)]
        ensemble: DepthKind,
        #[arg(long)]
        n: usize,
        /// Design order (ignored for 4design).
        #[arg(long, default_value_t = 4)]
        t: u32,
        /// Accuracy, as a decimal or as `2^-x`.
        #[arg(long, value_parser = parse_epsilon)]
        epsilon: f64,
        /// Constant multiplying the asymptotic forms.
        #[arg(long, default_value_t = 1.0)]
        constant: f64,
    },
    /// Sample one brickwork circuit and k outcomes from it, then apply the LXEB test.
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        depth: usize,
        #[arg(long, value_enum, default_value_t = Gates::HaarUnitary)]
        ensemble: Gates,
        #[arg(long, default_value_t = 10)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_B)]
        b: f64,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Quantity {
    /// E[p(x1)^λ1 p(x2)^λ2 …] for distinct outcomes.
    Moment,
    CollisionMean,
    CollisionVariance,
    SampleVarianceMean,
    VarianceOfVariance,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Base {
    Natural,
    Two,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DepthKind {
    #[value(name = "4design")]
    FourDesign,
    Tdesign,
    Coarse,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Gates {
    HaarUnitary,
    HaarOrthogonal,
    Clifford,
    Identity,
    Hadamard,
}

impl From<Gates> for GateEnsemble {
    fn from(g: Gates) -> Self {
        match g {
            Gates::HaarUnitary => GateEnsemble::HaarUnitary,
            Gates::HaarOrthogonal => GateEnsemble::HaarOrthogonal,
            Gates::Clifford => GateEnsemble::Clifford,
            Gates::Identity => GateEnsemble::Identity,
            Gates::Hadamard => GateEnsemble::Hadamard,
        }
    }
}

fn parse_epsilon(s: &str) -> Result<f64, String> {
    let value = match s.strip_prefix("2^") {
        Some(exp) => exp
            .trim_matches(|c| c == '(' || c == ')')
            .parse::<f64>()
            .map(f64::exp2)
            .map_err(|e| format!("bad exponent in {s:?}: {e}"))?,
        None => s.parse::<f64>().map_err(|e| format!("bad epsilon {s:?}: {e}"))?,
    };
    if value > 0.0 && value < 1.0 {
        Ok(value)
    } else {
        Err(format!("epsilon must lie in (0, 1), got {value}"))
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) => 2,
        Error::Capacity { .. } => 3,
        _ => 1,
    }
}

fn fail(e: Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(exit_code(&e))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run {
            config,
            seed,
            trials,
            workers,
            out_dir,
        } => cmd_run(config, seed, trials, workers, out_dir),
        Command::Moments {
            group,
            partition,
            d,
            quantity,
        } => cmd_moments(group, &partition, d, quantity),
        Command::Bounds {
            theorem,
            k,
            n,
            log_base,
        } => cmd_bounds(theorem, k, n, log_base),
        Command::Depth {
            ensemble,
            n,
            t,
            epsilon,
            constant,
        } => cmd_depth(ensemble, n, t, epsilon, constant),
        Command::Sample {
            n,
            depth,
            ensemble,
            k,
            seed,
            b,
        } => {
            if n < 2 || n % 2 == 1 {
                Cli::command()
                    .error(ErrorKind::ValueValidation, format!("--n must be even and at least 2, got {n}"))
                    .exit();
            }
            cmd_sample(n, depth, ensemble.into(), k, seed, b)
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(e),
    }
}

fn cmd_run(
    path: PathBuf,
    seed: Option<u64>,
    trials: Option<u64>,
    workers: Option<usize>,
    out_dir: Option<PathBuf>,
) -> lxeb_core::Result<()> {
    let mut config = ExperimentConfig::load(&path)?;
    if let Some(s) = seed {
        config.master_seed = s;
    }
    if let Some(t) = trials {
        config.trials = t;
    }
    if workers.is_some() {
        config.workers = workers;
    }
    if let Some(dir) = out_dir {
        std::fs::create_dir_all(&dir)?;
        config.report_path = Some(dir.join("report.json"));
        config.trials_path = Some(dir.join("trials.csv"));
    }
    config.validate()?;
    let outcome = run_experiment_timed(&config)?;
    let report = &outcome.report;
    report.write_json(&config.report_path())?;
    report.write_trials_csv(&config.trials_path())?;
    for line in report.summary_lines() {
        println!("{line}");
    }
    println!("wall_clock_seconds={:.3}", outcome.wall_clock.as_secs_f64());
    println!("report={}", config.report_path().display());
    println!("trials={}", config.trials_path().display());
    Ok(())
}

fn cmd_moments(group: Group, partition: &IntegerPartition, d: u64, q: Quantity) -> lxeb_core::Result<()> {
    let value = match q {
        Quantity::Moment => haar_moment(group, partition, d)?,
        Quantity::CollisionMean => collision_mean(d, group)?,
        Quantity::CollisionVariance => collision_variance(d, group)?,
        Quantity::SampleVarianceMean => sample_variance_mean(d, group)?,
        Quantity::VarianceOfVariance => variance_of_variance(d, group)?,
    };
    println!("{value} = {}", value.to_f64());
    Ok(())
}

fn cmd_bounds(theorem: Theorem, k: u64, n: usize, base: Base) -> lxeb_core::Result<()> {
    let base = match base {
        Base::Natural => LogBase::Natural,
        Base::Two => LogBase::Two,
    };
    let g = guarantee_with_base(theorem, k, n, base)?;
    println!("theorem={} k={} n={}", g.theorem, g.k, g.n);
    println!("bound={}", g.bound);
    println!("raw={}", g.raw);
    println!("vacuous={}", g.vacuous);
    if g.vacuous {
        println!("note: vacuous at this n/k");
    }
    if theorem.has_log() {
        let name = match base {
            LogBase::Natural => "natural",
            LogBase::Two => "base-2",
        };
        println!("log_base={name} (the formula does not fix the base; pass --log-base to change it)");
    }
    Ok(())
}

fn cmd_depth(kind: DepthKind, n: usize, t: u32, eps: f64, c: f64) -> lxeb_core::Result<()> {
    match kind {
        DepthKind::FourDesign => {
            println!("depth={}", required_depth_4design(n, eps)?);
            println!("formula: ceil(16 * (4n + log2(1/eps)))");
        }
        DepthKind::Tdesign => {
            println!("depth={}", required_depth_tdesign(n, t, eps, c)?);
            println!("formula: ceil({c} * log2(t)^7 * (2nt + log2(1/eps)))");
            println!("warning: illustrative constant {c}; the true constant is unspecified");
        }
        DepthKind::Coarse => {
            println!("depth={}", required_depth_coarse(n, t, eps, c)?);
            println!("formula: ceil({c} * log2(t)^7 * t * log2(nt/eps))");
            println!("warning: illustrative constant {c}; the true constant is unspecified");
        }
    }
    Ok(())
}

fn cmd_sample(n: usize, depth: usize, gates: GateEnsemble, k: usize, seed: u64, b: f64) -> lxeb_core::Result<()> {
    let plan = SeedPlan::new(seed, 0);
    let circuit = EnsembleSpec::brickwork(gates, n, depth).build(&plan)?;
    let dist = run_circuit(&circuit)?.distribution();
    let samples = dist.sample(k, &mut plan.sampling_stream())?;
    for &x in &samples {
        println!("{}", format_bitstring(x, n));
    }
    let r = lxeb_test(&dist, &samples, b)?;
    println!("statistic={}", r.statistic);
    println!("threshold={}", r.threshold);
    println!("pass={}", r.passed);
    Ok(())
}
