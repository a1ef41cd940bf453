//! `stirred` command-line interface.
//!
//! Subcommands generate configurations, solve for exact minimum costs,
//! print bound certificates, run the scaling and mixing experiments as CSV,
//! and check or validate externally supplied files. Exit codes are stable:
//! 0 for a produced verdict (even a negative one), 1 for input errors, 2
//! for resource or feasibility limits. Rationals cross the boundary as
//! `p/q` strings in records and as 15-significant-digit decimals in CSV.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use stirred::bounds;
use stirred::config::{Color, ConfigError, Configuration, StirringParams};
use stirred::moves::{Rearrangement, Transposition};
use stirred::rational::{parse_rational, to_decimal_string, Rational};
use stirred::solvers::{self, SearchLimits, SolveError, Target};
use stirred::torus;

const CSV_DIGITS: u32 = 15;

#[derive(Parser)]
#[command(
    name = "stirred",
    version,
    about = "Block-transposition sorting costs, bound certificates, and torus mixing experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit a configuration as a single line of 0/1 cells
    Gen(GenArgs),
    /// Solve an input configuration for the exact minimum cost
    Solve(SolveArgs),
    /// Print the lower-bound certificate for (kappa, eps)
    Bound(BoundArgs),
    /// CSV study of heuristic/exact/bound costs on the alternating family
    Scaling(ScalingArgs),
    /// CSV mixing experiment: shear stages on the torus band set
    Mix(MixArgs),
    /// Report the window-balance verdict and black mass of a configuration
    Check(CheckArgs),
    /// Replay a step file against an initial configuration
    Validate(ValidateArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Pattern {
    Alternating,
    Random,
}

#[derive(Args)]
struct GenArgs {
    /// Number of cells
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum)]
    pattern: Pattern,
    /// Alternating pattern period (even, divides n)
    #[arg(long, default_value_t = 2)]
    period: usize,
    /// Balance ratio p/q for random generation
    #[arg(long)]
    kappa: Option<String>,
    /// Window width in cells for random generation
    #[arg(long)]
    window: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 10_000)]
    max_tries: u64,
}

#[derive(Args)]
struct SolveArgs {
    /// File holding one line of 0/1 cells
    #[arg(long)]
    input: PathBuf,
    /// `sorted` or `run:COLOR:LENGTH` (COLOR is 0 or 1)
    #[arg(long)]
    target: String,
    /// Abort after settling this many states
    #[arg(long, default_value_t = 1 << 24)]
    limit: usize,
}

#[derive(Args)]
struct BoundArgs {
    #[arg(long)]
    kappa: String,
    #[arg(long)]
    eps: String,
}

#[derive(Args)]
struct ScalingArgs {
    /// Balance ratio p/q in (0, 1/2); the alternating family is well
    /// stirred at window 2 exactly for such kappa
    #[arg(long)]
    kappa: String,
    /// Smallest exponent k (N = 2^k)
    #[arg(long)]
    k_min: u32,
    /// Largest exponent k
    #[arg(long)]
    k_max: u32,
    /// Solve exactly only when N is at most this
    #[arg(long, default_value_t = 16)]
    exact_cap: usize,
}

#[derive(Args)]
struct MixArgs {
    /// Torus grid side M (even)
    #[arg(long)]
    grid: usize,
    /// Number of shear stages to run cumulatively
    #[arg(long)]
    stages: usize,
    /// Balance ratio p/q in (0, 1/2) for the window fractions
    #[arg(long)]
    kappa: String,
    /// Comma-separated probe radii in cells; default 1..=M/8
    #[arg(long)]
    radii: Option<String>,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    kappa: String,
    #[arg(long)]
    window: usize,
}

#[derive(Args)]
struct ValidateArgs {
    /// File holding the initial configuration
    #[arg(long)]
    input: PathBuf,
    /// JSON file holding the step list [{"y":..,"a":..,"b":..}, ...]
    #[arg(long)]
    steps: PathBuf,
}

/// Input errors exit with 1, resource and feasibility limits with 2.
enum CliError {
    Input(String),
    Limit(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(message) | CliError::Limit(message) => write!(f, "{message}"),
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(error: ConfigError) -> CliError {
        match error {
            ConfigError::TriesExhausted { .. } => CliError::Limit(error.to_string()),
            _ => CliError::Input(error.to_string()),
        }
    }
}

impl From<SolveError> for CliError {
    fn from(error: SolveError) -> CliError {
        match error {
            SolveError::CellCapExceeded { .. }
            | SolveError::StateLimitExceeded { .. }
            | SolveError::OracleCapExceeded { .. }
            | SolveError::TargetUnreachable => CliError::Limit(error.to_string()),
            _ => CliError::Input(error.to_string()),
        }
    }
}

impl From<bounds::BoundsError> for CliError {
    fn from(error: bounds::BoundsError) -> CliError {
        CliError::Input(error.to_string())
    }
}

impl From<torus::TorusError> for CliError {
    fn from(error: torus::TorusError) -> CliError {
        CliError::Input(error.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(error) => {
            let code = match error.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = error.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Input(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
        Err(CliError::Limit(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Gen(args) => cmd_gen(args),
        Command::Solve(args) => cmd_solve(args),
        Command::Bound(args) => cmd_bound(args),
        Command::Scaling(args) => cmd_scaling(args),
        Command::Mix(args) => cmd_mix(args),
        Command::Check(args) => cmd_check(args),
        Command::Validate(args) => cmd_validate(args),
    }
}

fn parse_flag_rational(name: &str, text: &str) -> Result<Rational, CliError> {
    parse_rational(text).map_err(|e| CliError::Input(format!("--{name}: {e}")))
}

fn read_configuration(path: &Path) -> Result<Configuration, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    text.parse()
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn cmd_gen(args: GenArgs) -> Result<(), CliError> {
    let config = match args.pattern {
        Pattern::Alternating => Configuration::alternating(args.n, args.period)?,
        Pattern::Random => {
            let kappa_text = args
                .kappa
                .as_deref()
                .ok_or_else(|| CliError::Input("--pattern random requires --kappa".into()))?;
            let window = args
                .window
                .ok_or_else(|| CliError::Input("--pattern random requires --window".into()))?;
            let kappa = parse_flag_rational("kappa", kappa_text)?;
            let params = StirringParams::new(kappa, window)?;
            Configuration::random_stirred(args.n, &params, args.seed, args.max_tries)?
        }
    };
    println!("{config}");
    Ok(())
}

fn parse_target(text: &str) -> Result<Target, CliError> {
    if text == "sorted" {
        return Ok(Target::Sorted);
    }
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() == 3 && parts[0] == "run" {
        let color = match parts[1] {
            "0" => Color::White,
            "1" => Color::Black,
            other => {
                return Err(CliError::Input(format!(
                    "--target run color must be 0 or 1, got `{other}`"
                )))
            }
        };
        let len: usize = parts[2]
            .parse()
            .map_err(|_| CliError::Input(format!("--target run length `{}` is not a number", parts[2])))?;
        return Ok(Target::Run { color, len });
    }
    Err(CliError::Input(format!(
        "--target must be `sorted` or `run:COLOR:LENGTH`, got `{text}`"
    )))
}

fn cmd_solve(args: SolveArgs) -> Result<(), CliError> {
    let config = read_configuration(&args.input)?;
    let target = parse_target(&args.target)?;
    let limits = SearchLimits { state_limit: args.limit, ..SearchLimits::default() };
    let result = solvers::exact_min_cost(&config, &target, &limits)?;
    println!("{}", serde_json::to_string(&result).expect("result serializes"));
    Ok(())
}

fn cmd_bound(args: BoundArgs) -> Result<(), CliError> {
    let kappa = parse_flag_rational("kappa", &args.kappa)?;
    let eps = parse_flag_rational("eps", &args.eps)?;
    let certificate = bounds::certificate(&kappa, &eps)?;
    println!("{}", serde_json::to_string(&certificate).expect("certificate serializes"));
    Ok(())
}

/// One row of the scaling study. Every row satisfies
/// `lower_bound <= exact_cost <= heur_cost` (checked rationally
/// before formatting).
struct ScalingRow {
    eps: Rational,
    cells: usize,
    kappa: Rational,
    heur_cost: Rational,
    exact_cost: Option<Rational>,
    lower_bound: Rational,
    n_eps: u32,
}

impl ScalingRow {
    fn sandwich_holds(&self) -> bool {
        match &self.exact_cost {
            Some(exact) => self.lower_bound <= *exact && *exact <= self.heur_cost,
            None => self.lower_bound <= self.heur_cost,
        }
    }

    fn render(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            to_decimal_string(&self.eps, CSV_DIGITS),
            self.cells,
            to_decimal_string(&self.kappa, CSV_DIGITS),
            to_decimal_string(&self.heur_cost, CSV_DIGITS),
            self.exact_cost
                .as_ref()
                .map_or_else(String::new, |c| to_decimal_string(c, CSV_DIGITS)),
            to_decimal_string(&self.lower_bound, CSV_DIGITS),
            self.n_eps
        )
    }
}

fn cmd_scaling(args: ScalingArgs) -> Result<(), CliError> {
    let kappa = parse_flag_rational("kappa", &args.kappa)?;
    if kappa <= Rational::from_integer(0.into())
        || kappa >= Rational::new(1.into(), 2.into())
    {
        return Err(CliError::Input(format!(
            "--kappa must lie strictly between 0 and 1/2 (the alternating family is well \
             stirred at window 2 only there), got {kappa}"
        )));
    }
    if args.k_min > args.k_max {
        return Err(CliError::Input(format!(
            "--k-min {} exceeds --k-max {}",
            args.k_min, args.k_max
        )));
    }
    if args.k_min < 1 {
        return Err(CliError::Input("--k-min must be at least 1 (period 2 must divide N)".into()));
    }

    let limits = SearchLimits {
        cell_cap: args.exact_cap.min(24),
        ..SearchLimits::default()
    };
    println!("eps,N,kappa,heur_cost,exact_cost,lower_bound,n_eps");
    for k in args.k_min..=args.k_max {
        let n = 1usize << k;
        let config = Configuration::alternating(n, 2)?;
        let eps = Rational::new(2.into(), (n as u64).into());

        let merge = solvers::merge_heuristic(&config)?;
        let exact_cost = if n <= args.exact_cap {
            Some(solvers::exact_min_cost(&config, &Target::Sorted, &limits)?.normalized_cost())
        } else {
            None
        };
        let row = ScalingRow {
            eps: eps.clone(),
            cells: n,
            kappa: kappa.clone(),
            heur_cost: merge.normalized_cost(),
            exact_cost,
            lower_bound: bounds::cost_lower_bound(&kappa, &eps)?,
            n_eps: bounds::n_of_eps(&kappa, &eps)?,
        };
        if !row.sandwich_holds() {
            return Err(CliError::Input(format!(
                "internal invariant violated at N={n}: bound {}, heuristic {}",
                row.lower_bound, row.heur_cost
            )));
        }
        println!("{}", row.render());
    }
    Ok(())
}

fn parse_radii(text: &str) -> Result<Vec<usize>, CliError> {
    text.split(',')
        .map(|piece| {
            piece
                .trim()
                .parse::<usize>()
                .map_err(|_| CliError::Input(format!("--radii entry `{piece}` is not a number")))
        })
        .collect()
}

fn cmd_mix(args: MixArgs) -> Result<(), CliError> {
    let kappa = parse_flag_rational("kappa", &args.kappa)?;
    let side = args.grid;
    let radii = match &args.radii {
        Some(text) => parse_radii(text)?,
        None => (1..=side / 8).filter(|&r| 2 * r < side).collect(),
    };

    let mut mask = torus::make_band_set(side)?;
    let mut cost = Rational::from_integer(0.into());

    println!("stage,steps,cost,scale_cells,scale");
    let print_row = |stage: usize, cost: &Rational, scale: Option<usize>| {
        let (cells, fraction) = match scale {
            Some(radius) => (
                radius.to_string(),
                to_decimal_string(
                    &Rational::new((radius as u64).into(), (side as u64).into()),
                    CSV_DIGITS,
                ),
            ),
            None => (String::new(), String::new()),
        };
        println!("{stage},{},{},{cells},{fraction}", 2 * stage, to_decimal_string(cost, CSV_DIGITS));
    };

    let scale = torus::mixing_scale(&mask, &kappa, &radii)?;
    print_row(0, &cost, scale);
    for stage in 1..=args.stages {
        let program = torus::cat_program(1, side)?;
        mask = torus::run_program(&mask, &program)?;
        cost += torus::program_cost(&program);
        let scale = torus::mixing_scale(&mask, &kappa, &radii)?;
        print_row(stage, &cost, scale);
    }
    Ok(())
}

fn cmd_check(args: CheckArgs) -> Result<(), CliError> {
    let config = read_configuration(&args.input)?;
    let kappa = parse_flag_rational("kappa", &args.kappa)?;
    let params = StirringParams::new(kappa, args.window)?;
    let verdict = config.is_well_stirred(&params)?;
    println!("well_stirred: {verdict}");
    println!("xi: {}", config.xi());
    Ok(())
}

fn cmd_validate(args: ValidateArgs) -> Result<(), CliError> {
    let config = read_configuration(&args.input)?;
    let text = fs::read_to_string(&args.steps)
        .map_err(|e| CliError::Input(format!("{}: {e}", args.steps.display())))?;
    let steps: Vec<Transposition> = serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("{}: {e}", args.steps.display())))?;
    let rearrangement = Rearrangement::new(config, steps);
    let report = rearrangement.validate();
    println!("valid: {}", report.valid);
    println!("complete: {}", report.complete);
    println!("gamma_cells: {}", report.gamma);
    println!(
        "gamma_normalized: {}",
        Rational::new(report.gamma.into(), (rearrangement.initial.len() as u64).into())
    );
    if let Some(index) = report.failing_step {
        println!("failing_step: {index}");
    }
    Ok(())
}
