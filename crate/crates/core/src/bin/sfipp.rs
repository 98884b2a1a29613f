use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use sfipp::experiment::InstanceSource;
use sfipp::oracle::{self, Rational};
use sfipp::report::{self, summarize_output};
use sfipp::{
    gen_beta, gen_deterministic, relabel_for_stage_types, run_experiment, Algorithm, BetaParams,
    Error, ExperimentConfig, Instance, Preset, SeededRng, TypeScheme,
};

#[derive(Parser)]
#[command(
    name = "sfipp",
    version,
    about = "Fault-intolerant process planning simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment preset and write the regret CSV.
    Run(RunArgs),
    /// Summarize a regret CSV.
    Summarize {
        #[arg(long = "in")]
        input: PathBuf,
        /// Rounds at which to report mean cumulative regret.
        #[arg(long, value_delimiter = ',')]
        checkpoints: Vec<usize>,
    },
    /// Evaluate an exact oracle.
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Generate an instance file.
    Gen(GenArgs),
}

#[derive(clap::Args)]
struct RunArgs {
    #[arg(long)]
    preset: String,
    /// Number of stages (comma-separated for several cells).
    #[arg(long, value_delimiter = ',')]
    m: Vec<usize>,
    #[arg(long)]
    k: Option<usize>,
    /// Horizon.
    #[arg(long = "T")]
    rounds: Option<usize>,
    #[arg(long)]
    instances: Option<usize>,
    /// Density of ones for binary instances (comma-separated for several cells).
    #[arg(long, value_delimiter = ',')]
    p: Vec<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    /// none, single or alt2.
    #[arg(long)]
    types: Option<String>,
    /// Comma-separated algorithm labels.
    #[arg(long, value_delimiter = ',')]
    algos: Vec<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    thin: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Run on a fixed instance file instead of generating instances.
    #[arg(long)]
    instance: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    checkpoints: Vec<usize>,
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Expected wasted queries of uniform exploration, z/(k+1-z).
    Wasted { k: usize, z: usize },
    /// Expected queries to find a one, by direct summation and by enumeration.
    DetQueries { k: usize, z: usize },
    /// Probability that some zero precedes every one in a random order.
    ZeroFirst { k: usize, z: usize },
    /// Worst-case placement of z zeros over m stages.
    Hardest {
        m: usize,
        k: usize,
        z: usize,
        /// Also search all compositions exhaustively.
        #[arg(long)]
        exhaustive: bool,
    },
    /// Product and sum gaps between two probability vectors.
    ProdToSum {
        #[arg(long, value_delimiter = ',', required = true)]
        a: Vec<String>,
        #[arg(long, value_delimiter = ',', required = true)]
        b: Vec<String>,
    },
    /// Leading term of the UCB regret bound, ln(T) sum 1/gap.
    UcbBound {
        #[arg(long, value_delimiter = ',', required = true)]
        probs: Vec<f64>,
        #[arg(long = "T")]
        horizon: u64,
    },
}

#[derive(clap::Args)]
struct GenArgs {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    k: usize,
    /// Binary instance with this density of ones.
    #[arg(long, conflicts_with_all = ["alpha", "beta"])]
    p: Option<f64>,
    #[arg(long, requires = "beta")]
    alpha: Option<f64>,
    #[arg(long, requires = "alpha")]
    beta: Option<f64>,
    /// Relabel so that stage s prefers action s mod j: none, single or alt2.
    #[arg(long, default_value = "none")]
    types: String,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Run(args) => run(args),
        Command::Summarize { input, checkpoints } => report::summarize_csv(&input, &checkpoints)
            .map(|s| print!("{s}"))
            .map_err(Failure::from),
        Command::Oracle(cmd) => run_oracle(cmd),
        Command::Gen(args) => gen(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

enum Failure {
    Usage(String),
    Runtime(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::UnknownPreset { .. }
            | Error::UnknownAlgorithm { .. }
            | Error::InvalidParameter(_)
            | Error::ProbabilityOutOfRange(_) => Failure::Usage(e.to_string()),
            other => Failure::Runtime(other),
        }
    }
}

fn beta_params(alpha: Option<f64>, beta: Option<f64>) -> Result<Option<BetaParams>, Failure> {
    match (alpha, beta) {
        (None, None) => Ok(None),
        (Some(a), Some(b)) => Ok(Some(BetaParams::new(a, b)?)),
        _ => Err(Failure::Usage("--alpha and --beta go together".into())),
    }
}

fn run(args: RunArgs) -> Result<(), Failure> {
    let preset: Preset = args.preset.parse()?;
    let mut config = match &args.instance {
        Some(path) => {
            if preset != Preset::Custom {
                return Err(Failure::Usage("--instance requires --preset custom".into()));
            }
            ExperimentConfig::from_instance(&Instance::read(path)?)
        }
        None => ExperimentConfig::preset(preset),
    };
    if !args.m.is_empty() {
        config.stages = args.m;
    }
    if let Some(k) = args.k {
        config.actions = k;
    }
    if let Some(t) = args.rounds {
        config.rounds = t;
    }
    if let Some(n) = args.instances {
        config.instances = n;
    }
    let beta = beta_params(args.alpha, args.beta)?;
    match (args.p.is_empty(), beta) {
        (false, Some(_)) => return Err(Failure::Usage("give either --p or --alpha/--beta".into())),
        (false, None) => config.source = InstanceSource::Deterministic(args.p),
        (true, Some(b)) => config.source = InstanceSource::Beta(b),
        (true, None) => {}
    }
    if preset == Preset::Custom && args.instance.is_none() {
        let explicit = matches!(config.source, InstanceSource::Deterministic(_)) || beta.is_some();
        if !explicit {
            return Err(Failure::Usage(
                "preset custom needs --p, --alpha/--beta or --instance".into(),
            ));
        }
    }
    if let Some(types) = &args.types {
        config.types = types.parse::<TypeScheme>()?;
    }
    if !args.algos.is_empty() {
        config.algorithms = args
            .algos
            .iter()
            .map(|a| a.parse::<Algorithm>())
            .collect::<Result<_, _>>()?;
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(thin) = args.thin {
        config.thin = thin;
    }
    config.out = args.out;
    config.validate()?;

    let output = run_experiment(&config)?;
    match &config.out {
        Some(path) => report::write_csv_file(&output, path)?,
        None => report::write_csv(&output, std::io::stdout().lock())?,
    }
    let summary = summarize_output(&output, &args.checkpoints);
    eprint!("{summary}");
    Ok(())
}

fn parse_rational(s: &str) -> Result<Rational, Failure> {
    let s = s.trim();
    if let Ok(r) = s.parse::<Rational>() {
        return Ok(r);
    }
    s.parse::<f64>()
        .ok()
        .and_then(Rational::from_float)
        .ok_or_else(|| Failure::Usage(format!("`{s}` is not a number")))
}

fn run_oracle(cmd: OracleCommand) -> Result<(), Failure> {
    let show = |r: &Rational| format!("{r} ({})", report::format_sig9(oracle::to_f64(r)));
    match cmd {
        OracleCommand::Wasted { k, z } => {
            println!("{}", show(&oracle::expected_wasted_queries(k, z)?));
        }
        OracleCommand::DetQueries { k, z } => {
            println!(
                "sum         {}",
                show(&oracle::deterministic_expected_queries_bruteforce(k, z)?)
            );
            println!(
                "enumeration {}",
                show(&oracle::deterministic_expected_queries_enumerated(k, z)?)
            );
        }
        OracleCommand::ZeroFirst { k, z } => {
            println!(
                "{}",
                show(&oracle::zero_before_ones_probability_bruteforce(k, z)?)
            );
        }
        OracleCommand::Hardest {
            m,
            k,
            z,
            exhaustive,
        } => {
            let comp = oracle::concentrated_composition(m, k, z)?;
            println!(
                "closed form {} at {comp:?}",
                show(&oracle::hardest_distribution_value(m, k, z)?)
            );
            if exhaustive {
                let (value, comp) = oracle::hardest_distribution_bruteforce(m, k, z)?;
                println!("exhaustive  {} at {comp:?}", show(&value));
            }
        }
        OracleCommand::ProdToSum { a, b } => {
            let a = a
                .iter()
                .map(|s| parse_rational(s))
                .collect::<Result<Vec<_>, _>>()?;
            let b = b
                .iter()
                .map(|s| parse_rational(s))
                .collect::<Result<Vec<_>, _>>()?;
            let (prod, sum) = oracle::prod_to_sum_gap(&a, &b)?;
            println!("product gap {}", show(&prod));
            println!("sum gap     {}", show(&sum));
        }
        OracleCommand::UcbBound { probs, horizon } => {
            println!(
                "{}",
                report::format_sig9(oracle::ucb_bound_estimate(&probs, horizon)?)
            );
        }
    }
    Ok(())
}

fn gen(args: GenArgs) -> Result<(), Failure> {
    let mut rng = SeededRng::new(args.seed);
    let matrix = match (args.p, beta_params(args.alpha, args.beta)?) {
        (Some(p), None) => gen_deterministic(args.m, args.k, p, &mut rng)?,
        (None, Some(b)) => gen_beta(args.m, args.k, b, &mut rng)?,
        _ => return Err(Failure::Usage("give either --p or --alpha/--beta".into())),
    };
    let instance = match args.types.parse::<TypeScheme>()? {
        TypeScheme::None => Instance::new(matrix, None)?,
        scheme => {
            let j = if scheme == TypeScheme::Single { 1 } else { 2 };
            let (matrix, types) = relabel_for_stage_types(&matrix, j)?;
            Instance::new(matrix, Some(types))?
        }
    };
    instance.write(&args.out)?;
    Ok(())
}
