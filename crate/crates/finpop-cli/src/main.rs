//! `finpop` — finite-population inference from the command line.
//!
//! Five subcommands: `describe` summarizes a data file, `moments` evaluates
//! the closed-form sampling laws, `ci` builds confidence intervals for a
//! population mean, `verify` checks the closed forms against exhaustive
//! enumeration, and `coverage` estimates interval coverage by simulation.
//!
//! Exit codes are a stable contract: 0 success, 1 verification or gate
//! failure, 2 usage or configuration error, 3 input or parse error.

mod input;
mod report;

use std::io::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use finpop::{
    confidence_interval, draw_population, estimator_expectation, estimator_law,
    mean_difference_moments, oracle_estimator_mean, oracle_mean_difference, oracle_sample_mean,
    oracle_single_value, sample_mean_moments, simulate::coverage_experiment, single_value_moments,
    stream_seed, variance, CiForm, EnumerationBudget, Framing, IntervalResult, PopSize, Population,
    PopulationSummary, Sample, SuperpopulationModel, VarianceConvention,
};
use input::{read_values, InputError};
use report::{Cell, OutputFormat, Table};

/// Gate for `verify`: |closed form - enumeration| must stay within
/// `VERIFY_ABS_TOL + VERIFY_REL_TOL * |enumeration|`.
const VERIFY_ABS_TOL: f64 = 1e-12;
const VERIFY_REL_TOL: f64 = 1e-9;

/// `coverage` under the normal model must land within this many binomial
/// standard errors of the nominal level.
const COVERAGE_SIGMA_GATE: f64 = 10.0;

#[derive(Parser)]
#[command(
    name = "finpop",
    version,
    about = "Design-based and model-based inference for finite populations"
)]
struct Cli {
    #[command(subcommand)]
    command: CommandArgs,
}

#[derive(Subcommand)]
enum CommandArgs {
    /// Summarize a data file: size, mean, and the variance conventions
    Describe(DescribeArgs),
    /// Closed-form moments of sampling quantities at a given sample size
    Moments(MomentsArgs),
    /// Confidence interval for the population mean from a sample file
    Ci(CiArgs),
    /// Check the closed forms against exhaustive enumeration
    Verify(VerifyArgs),
    /// Estimate interval coverage by simulation
    Coverage(CoverageArgs),
}

#[derive(Args)]
struct DescribeArgs {
    /// Data file, one value per line
    input: PathBuf,
    /// Declared sample size; must match the number of values in the file
    #[arg(long)]
    n: Option<u64>,
    /// Parent population size; together with --n adds the hybrid variance
    #[arg(long = "N")]
    parent: Option<u64>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
    output_format: OutputFormat,
}

#[derive(Args)]
struct MomentsArgs {
    /// Population file for the conditional framing (and a parameter source
    /// for the marginal one)
    input: Option<PathBuf>,
    /// Sample size the laws are evaluated at
    #[arg(long)]
    n: u64,
    /// Population size for the marginal framing: an integer or "inf"
    #[arg(long = "N", value_parser = parse_pop_size)]
    pop_size: Option<PopSize>,
    /// Which framing to print (default: both with a file, marginal without)
    #[arg(long, value_enum)]
    framing: Option<FramingChoice>,
    /// Model mean for the marginal framing
    #[arg(long, requires = "sigma2")]
    mu: Option<f64>,
    /// Model variance for the marginal framing
    #[arg(long, requires = "mu")]
    sigma2: Option<f64>,
    /// Restrict the expected-variance rows to one convention
    #[arg(long, value_parser = parse_convention)]
    convention: Option<VarianceConvention>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
    output_format: OutputFormat,
}

#[derive(Args)]
struct CiArgs {
    /// Sample file, one value per line
    input: PathBuf,
    /// Population size the sample was drawn from: an integer or "inf"
    #[arg(long = "N", value_parser = parse_pop_size, default_value = "inf")]
    pop_size: PopSize,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// Interval form: fpc_bessel, fpc_star_hybrid, or fpc_dblstar_raw
    #[arg(long, value_parser = parse_ci_form, default_value = "fpc_bessel")]
    form: CiForm,
    /// Print all three forms and their relative discrepancies
    #[arg(long)]
    all_forms: bool,
    #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
    output_format: OutputFormat,
}

#[derive(Args)]
struct VerifyArgs {
    /// Number of random populations to check
    #[arg(long, default_value_t = 100)]
    populations: u64,
    /// Fix the population size (default: sizes cycle through 2..=8)
    #[arg(long = "N")]
    pop_size: Option<u64>,
    /// Fix the sample size (default: every n from 2 to N)
    #[arg(long, requires = "pop_size")]
    n: Option<u64>,
    #[arg(long, env = "FINPOP_SEED", default_value_t = 1)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
    output_format: OutputFormat,
}

#[derive(Args)]
struct CoverageArgs {
    /// Superpopulation model the replicates draw from
    #[arg(long, value_enum, default_value_t = ModelKind::Normal)]
    model: ModelKind,
    /// Mean of the normal model
    #[arg(long, default_value_t = 0.0)]
    mu: f64,
    /// Variance of the normal model
    #[arg(long, default_value_t = 1.0)]
    sigma2: f64,
    /// Lower endpoint of the uniform or two-point model
    #[arg(long, default_value_t = 0.0)]
    lo: f64,
    /// Upper endpoint of the uniform or two-point model
    #[arg(long, default_value_t = 1.0)]
    hi: f64,
    /// Rate of the exponential model
    #[arg(long, default_value_t = 1.0)]
    rate: f64,
    /// Probability of the upper point in the two-point model
    #[arg(long, default_value_t = 0.5)]
    p_hi: f64,
    /// Population size drawn each replicate
    #[arg(long = "N", default_value_t = 50)]
    pop_size: u64,
    /// Sample size drawn each replicate
    #[arg(long, default_value_t = 10)]
    n: u64,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    #[arg(long, default_value_t = 10_000)]
    replicates: u64,
    #[arg(long, env = "FINPOP_SEED", default_value_t = 1)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
    output_format: OutputFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum FramingChoice {
    Conditional,
    Marginal,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum ModelKind {
    Normal,
    Uniform,
    Exponential,
    #[value(alias = "two_point")]
    TwoPoint,
}

impl ModelKind {
    fn name(self) -> &'static str {
        match self {
            ModelKind::Normal => "normal",
            ModelKind::Uniform => "uniform",
            ModelKind::Exponential => "exponential",
            ModelKind::TwoPoint => "two_point",
        }
    }
}

fn parse_pop_size(s: &str) -> Result<PopSize, String> {
    PopSize::from_str(s).map_err(|e| e.to_string())
}

fn parse_ci_form(s: &str) -> Result<CiForm, String> {
    CiForm::from_str(s).map_err(|e| e.to_string())
}

fn parse_convention(s: &str) -> Result<VarianceConvention, String> {
    VarianceConvention::from_str(s).map_err(|e| e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Command {
    Describe,
    Moments,
    Ci,
    Verify,
    Coverage,
}

/// Everything a command run needs, flattened out of the parsed arguments.
/// Fields a command does not use keep their defaults and are never read.
struct RunConfig {
    command: Command,
    input_path: Option<PathBuf>,
    n: Option<u64>,
    pop_size: Option<PopSize>,
    alpha: f64,
    convention: Option<VarianceConvention>,
    framing: Option<FramingChoice>,
    form: CiForm,
    all_forms: bool,
    seed: u64,
    replicates: u64,
    output_format: OutputFormat,
    model: ModelKind,
    mu: Option<f64>,
    sigma2: Option<f64>,
    lo: f64,
    hi: f64,
    rate: f64,
    p_hi: f64,
    populations: u64,
}

impl RunConfig {
    fn new(command: Command) -> Self {
        RunConfig {
            command,
            input_path: None,
            n: None,
            pop_size: None,
            alpha: 0.05,
            convention: None,
            framing: None,
            form: CiForm::FpcBessel,
            all_forms: false,
            seed: 1,
            replicates: 10_000,
            output_format: OutputFormat::Table,
            model: ModelKind::Normal,
            mu: None,
            sigma2: None,
            lo: 0.0,
            hi: 1.0,
            rate: 1.0,
            p_hi: 0.5,
            populations: 100,
        }
    }
}

fn build_config(cli: Cli) -> RunConfig {
    match cli.command {
        CommandArgs::Describe(args) => {
            let mut c = RunConfig::new(Command::Describe);
            c.input_path = Some(args.input);
            c.n = args.n;
            c.pop_size = args.parent.map(PopSize::Finite);
            c.output_format = args.output_format;
            c
        }
        CommandArgs::Moments(args) => {
            let mut c = RunConfig::new(Command::Moments);
            c.input_path = args.input;
            c.n = Some(args.n);
            c.pop_size = args.pop_size;
            c.framing = args.framing;
            c.mu = args.mu;
            c.sigma2 = args.sigma2;
            c.convention = args.convention;
            c.output_format = args.output_format;
            c
        }
        CommandArgs::Ci(args) => {
            let mut c = RunConfig::new(Command::Ci);
            c.input_path = Some(args.input);
            c.pop_size = Some(args.pop_size);
            c.alpha = args.alpha;
            c.form = args.form;
            c.all_forms = args.all_forms;
            c.output_format = args.output_format;
            c
        }
        CommandArgs::Verify(args) => {
            let mut c = RunConfig::new(Command::Verify);
            c.populations = args.populations;
            c.pop_size = args.pop_size.map(PopSize::Finite);
            c.n = args.n;
            c.seed = args.seed;
            c.output_format = args.output_format;
            c
        }
        CommandArgs::Coverage(args) => {
            let mut c = RunConfig::new(Command::Coverage);
            c.model = args.model;
            c.mu = Some(args.mu);
            c.sigma2 = Some(args.sigma2);
            c.lo = args.lo;
            c.hi = args.hi;
            c.rate = args.rate;
            c.p_hi = args.p_hi;
            c.pop_size = Some(PopSize::Finite(args.pop_size));
            c.n = Some(args.n);
            c.alpha = args.alpha;
            c.replicates = args.replicates;
            c.seed = args.seed;
            c.output_format = args.output_format;
            c
        }
    }
}

/// Errors that abort before a report is printed. A check that runs to
/// completion but fails its gate instead prints its report and exits 1 via
/// [`CommandOutput::failure`].
#[derive(Debug)]
enum CliError {
    /// Bad flags or parameter combinations; exit 2.
    Usage(String),
    /// Unreadable or unparseable input file; exit 3.
    Input(InputError),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Input(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) => f.write_str(msg),
            CliError::Input(e) => e.fmt(f),
        }
    }
}

impl From<InputError> for CliError {
    fn from(e: InputError) -> Self {
        CliError::Input(e)
    }
}

impl From<finpop::Error> for CliError {
    fn from(e: finpop::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

/// A rendered report plus an optional gate failure to surface after printing.
struct CommandOutput {
    table: Table,
    failure: Option<String>,
}

impl CommandOutput {
    fn ok(table: Table) -> Self {
        CommandOutput {
            table,
            failure: None,
        }
    }
}

fn main() {
    let config = build_config(Cli::parse());
    match run(&config) {
        Ok(output) => {
            print!("{}", output.table.render(config.output_format));
            let _ = std::io::stdout().flush();
            if let Some(message) = output.failure {
                eprintln!("{message}");
                std::process::exit(1);
            }
        }
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(err.exit_code());
        }
    }
}

fn run(config: &RunConfig) -> Result<CommandOutput, CliError> {
    match config.command {
        Command::Describe => cmd_describe(config),
        Command::Moments => cmd_moments(config),
        Command::Ci => cmd_ci(config),
        Command::Verify => cmd_verify(config),
        Command::Coverage => cmd_coverage(config),
    }
}

fn opt_num(value: Option<f64>) -> Cell {
    match value {
        Some(x) => Cell::Num(x),
        None => Cell::Missing,
    }
}

fn cmd_describe(config: &RunConfig) -> Result<CommandOutput, CliError> {
    let path = config.input_path.as_ref().expect("describe has an input");
    let values = read_values(path)?;
    let population = Population::new(values)?;
    let summary = population.summary();
    let count = population.size() as u64;

    let mut columns = vec!["N", "mean", "var_bessel", "var_raw"];
    let mut row = vec![
        Cell::Int(count),
        Cell::Num(summary.mean),
        opt_num(summary.var_bessel),
        opt_num(summary.var_raw),
    ];

    let parent = match config.pop_size {
        Some(PopSize::Finite(v)) => Some(v),
        Some(PopSize::Infinite) => {
            return Err(CliError::Usage(
                "the hybrid variance needs a finite --N".to_string(),
            ))
        }
        None => None,
    };
    match (config.n, parent) {
        (None, None) => {}
        (Some(n), Some(parent)) => {
            if n != count {
                return Err(CliError::Usage(format!(
                    "--n is {n} but the file holds {count} values"
                )));
            }
            let hybrid = variance(
                population.values(),
                VarianceConvention::Hybrid,
                Some(parent),
            )?;
            columns.extend(["parent_N", "var_hybrid"]);
            row.extend([Cell::Int(parent), Cell::Num(hybrid)]);
        }
        _ => {
            return Err(CliError::Usage(
                "--n and --N go together: they declare the file as a sample of n values from a population of N".to_string(),
            ))
        }
    }

    let mut table = Table::new(columns);
    table.push(row);
    Ok(CommandOutput::ok(table))
}

fn cmd_moments(config: &RunConfig) -> Result<CommandOutput, CliError> {
    let n = config.n.expect("moments requires --n");
    let file_summary = match &config.input_path {
        Some(path) => Some(Population::new(read_values(path)?)?.summary()),
        None => None,
    };

    let choice = config.framing.unwrap_or(if file_summary.is_some() {
        FramingChoice::Both
    } else {
        FramingChoice::Marginal
    });
    let mut framings = Vec::new();
    if matches!(choice, FramingChoice::Conditional | FramingChoice::Both) {
        framings.push(Framing::Conditional);
    }
    if matches!(choice, FramingChoice::Marginal | FramingChoice::Both) {
        framings.push(Framing::Marginal);
    }

    let mut table = Table::new(vec![
        "quantity",
        "framing",
        "mean",
        "variance",
        "covariance",
        "law",
    ]);
    for framing in framings {
        let summary = match framing {
            Framing::Conditional => file_summary.clone().ok_or_else(|| {
                CliError::Usage(
                    "the conditional framing needs an input file holding the population"
                        .to_string(),
                )
            })?,
            Framing::Marginal => marginal_summary(config, file_summary.as_ref())?,
        };
        push_moment_rows(&mut table, framing, &summary, n, config.convention)?;
    }
    Ok(CommandOutput::ok(table))
}

/// Marginal parameters come from --mu/--sigma2 when given, otherwise from the
/// input file's mean and bessel variance. --N chooses the population size;
/// absent, the infinite sentinel.
fn marginal_summary(
    config: &RunConfig,
    file_summary: Option<&PopulationSummary<f64>>,
) -> Result<PopulationSummary<f64>, CliError> {
    let size = config.pop_size.unwrap_or(PopSize::Infinite);
    let (mu, sigma2) = match (config.mu, config.sigma2) {
        (Some(mu), Some(sigma2)) => (mu, sigma2),
        _ => {
            let s = file_summary.ok_or_else(|| {
                CliError::Usage(
                    "the marginal framing needs --mu and --sigma2, or an input file to read them from"
                        .to_string(),
                )
            })?;
            let sigma2 = s.var_bessel.ok_or_else(|| {
                CliError::Usage(
                    "reading model parameters from a file needs at least two values".to_string(),
                )
            })?;
            (s.mean, sigma2)
        }
    };
    Ok(PopulationSummary::from_parameters(size, mu, sigma2)?)
}

fn push_moment_rows(
    table: &mut Table,
    framing: Framing,
    summary: &PopulationSummary<f64>,
    n: u64,
    convention: Option<VarianceConvention>,
) -> Result<(), CliError> {
    // The covariance column of the single-value row is for two draws at
    // distinct positions; the same-position covariance is the variance.
    let single = single_value_moments(framing, summary, true)?;
    table.push(vec![
        Cell::Text("single_value".to_string()),
        Cell::Text(framing.to_string()),
        Cell::Num(single.mean),
        opt_num(single.variance),
        opt_num(single.covariance),
        Cell::Text(single.law.to_string()),
    ]);

    let sample_mean = sample_mean_moments(framing, summary, n)?;
    table.push(vec![
        Cell::Text("sample_mean".to_string()),
        Cell::Text(framing.to_string()),
        Cell::Num(sample_mean.mean),
        opt_num(sample_mean.variance),
        opt_num(sample_mean.covariance),
        Cell::Text(sample_mean.law.to_string()),
    ]);

    let difference = mean_difference_moments(framing, summary, n)?;
    table.push(vec![
        Cell::Text("mean_difference".to_string()),
        Cell::Text(framing.to_string()),
        Cell::Num(difference.mean),
        opt_num(difference.variance),
        opt_num(difference.covariance),
        Cell::Text(difference.law.to_string()),
    ]);

    for c in [
        VarianceConvention::Bessel,
        VarianceConvention::Raw,
        VarianceConvention::Hybrid,
    ] {
        if convention.is_some_and(|only| only != c) {
            continue;
        }
        let value = estimator_expectation(framing, summary, n, c)?;
        table.push(vec![
            Cell::Text(format!("expected_{c}_variance")),
            Cell::Text(framing.to_string()),
            Cell::Num(value),
            Cell::Missing,
            Cell::Missing,
            Cell::Text(estimator_law(c).to_string()),
        ]);
    }
    Ok(())
}

fn cmd_ci(config: &RunConfig) -> Result<CommandOutput, CliError> {
    let path = config.input_path.as_ref().expect("ci has an input");
    let sample = Sample::new(read_values(path)?, None)?;
    let size = config.pop_size.unwrap_or(PopSize::Infinite);
    let forms = if config.all_forms {
        vec![
            CiForm::FpcBessel,
            CiForm::FpcStarHybrid,
            CiForm::FpcDblstarRaw,
        ]
    } else {
        vec![config.form]
    };
    let intervals: Vec<IntervalResult<f64>> = forms
        .into_iter()
        .map(|form| confidence_interval(&sample, size, config.alpha, form))
        .collect::<Result<_, _>>()?;

    let mut columns = vec![
        "form",
        "center",
        "half_width",
        "lower",
        "upper",
        "alpha",
        "df",
    ];
    if config.all_forms {
        columns.push("rel_discrepancy");
    }
    let mut table = Table::new(columns);
    for interval in &intervals {
        let mut row = vec![
            Cell::Text(interval.form.to_string()),
            Cell::Num(interval.center),
            Cell::Num(interval.half_width),
            Cell::Num(interval.lower),
            Cell::Num(interval.upper),
            Cell::Num(interval.alpha),
            Cell::Int(interval.df),
        ];
        if config.all_forms {
            row.push(Cell::Sci(max_relative_gap(&intervals[0], interval)));
        }
        table.push(row);
    }
    Ok(CommandOutput::ok(table))
}

/// Largest relative disagreement between two intervals across half width and
/// both endpoints. Zero when both are exactly equal (a census).
fn max_relative_gap(a: &IntervalResult<f64>, b: &IntervalResult<f64>) -> f64 {
    let gap = |x: f64, y: f64| {
        let scale = x.abs().max(y.abs());
        if scale == 0.0 {
            0.0
        } else {
            (x - y).abs() / scale
        }
    };
    gap(a.half_width, b.half_width)
        .max(gap(a.lower, b.lower))
        .max(gap(a.upper, b.upper))
}

struct VerifyAggregate {
    name: &'static str,
    comparisons: u64,
    worst_dev: f64,
    worst_ratio: f64,
}

impl VerifyAggregate {
    fn new(name: &'static str) -> Self {
        VerifyAggregate {
            name,
            comparisons: 0,
            worst_dev: 0.0,
            worst_ratio: 0.0,
        }
    }

    fn record(&mut self, closed: f64, exact: f64) {
        let dev = (closed - exact).abs();
        let allowed = VERIFY_ABS_TOL + VERIFY_REL_TOL * exact.abs();
        self.comparisons += 1;
        self.worst_dev = self.worst_dev.max(dev);
        self.worst_ratio = self.worst_ratio.max(dev / allowed);
    }

    fn passed(&self) -> bool {
        self.worst_ratio <= 1.0
    }
}

fn cmd_verify(config: &RunConfig) -> Result<CommandOutput, CliError> {
    if config.populations == 0 {
        return Err(CliError::Usage(
            "--populations must be at least 1".to_string(),
        ));
    }
    let fixed_size = match config.pop_size {
        Some(PopSize::Finite(v)) if v >= 2 => Some(v),
        Some(_) => return Err(CliError::Usage("--N must be at least 2".to_string())),
        None => None,
    };
    if let (Some(n), Some(n_pop)) = (config.n, fixed_size) {
        if n < 2 || n > n_pop {
            return Err(CliError::Usage(format!(
                "--n must lie between 2 and N = {n_pop}"
            )));
        }
    }

    let budget = EnumerationBudget::default();
    let model = SuperpopulationModel::uniform(-5.0f64, 5.0).expect("bounds are ordered");
    let mut aggregates = [
        VerifyAggregate::new("single_value_mean"),
        VerifyAggregate::new("single_value_variance"),
        VerifyAggregate::new("single_value_cov_distinct"),
        VerifyAggregate::new("single_value_cov_same"),
        VerifyAggregate::new("sample_mean_mean"),
        VerifyAggregate::new("sample_mean_variance"),
        VerifyAggregate::new("sample_mean_cov_popmean"),
        VerifyAggregate::new("mean_difference_mean"),
        VerifyAggregate::new("mean_difference_variance"),
        VerifyAggregate::new("expected_bessel_variance"),
        VerifyAggregate::new("expected_raw_variance"),
        VerifyAggregate::new("expected_hybrid_variance"),
    ];

    for i in 0..config.populations {
        let n_pop = fixed_size.unwrap_or(2 + (i % 7));
        let population: Population<f64> =
            draw_population(&model, n_pop, stream_seed(config.seed, i));
        let summary = population.summary();

        for (slot, distinct) in [(2usize, true), (3usize, false)] {
            let closed = single_value_moments(Framing::Conditional, &summary, distinct)?;
            let exact = oracle_single_value(&population, distinct)?;
            aggregates[0].record(closed.mean, exact.exact_mean);
            aggregates[1].record(
                closed.variance.expect("single draw has a variance"),
                exact.exact_variance.expect("oracle reports a variance"),
            );
            aggregates[slot].record(
                closed.covariance.expect("single draw has a covariance"),
                exact.exact_covariance.expect("oracle reports a covariance"),
            );
        }

        let sizes = match config.n {
            Some(n) => n..=n,
            None => 2..=n_pop,
        };
        for n in sizes {
            let closed = sample_mean_moments(Framing::Conditional, &summary, n)?;
            let exact = oracle_sample_mean(&population, n, &budget)?;
            aggregates[4].record(closed.mean, exact.exact_mean);
            aggregates[5].record(
                closed.variance.expect("sample mean has a variance"),
                exact.exact_variance.expect("oracle reports a variance"),
            );
            aggregates[6].record(
                closed.covariance.expect("sample mean has a covariance"),
                exact.exact_covariance.expect("oracle reports a covariance"),
            );

            let closed = mean_difference_moments(Framing::Conditional, &summary, n)?;
            let exact = oracle_mean_difference(&population, n, &budget)?;
            aggregates[7].record(closed.mean, exact.exact_mean);
            aggregates[8].record(
                closed.variance.expect("mean difference has a variance"),
                exact.exact_variance.expect("oracle reports a variance"),
            );

            for (slot, convention) in [
                (9usize, VarianceConvention::Bessel),
                (10, VarianceConvention::Raw),
                (11, VarianceConvention::Hybrid),
            ] {
                let closed = estimator_expectation(Framing::Conditional, &summary, n, convention)?;
                let exact = oracle_estimator_mean(&population, n, convention, &budget)?;
                aggregates[slot].record(closed, exact.exact_mean);
            }
        }
    }

    let mut table = Table::new(vec![
        "check",
        "comparisons",
        "max_abs_dev",
        "max_dev_over_allowed",
        "status",
    ]);
    let mut failed = 0u32;
    for agg in &aggregates {
        if !agg.passed() {
            failed += 1;
        }
        table.push(vec![
            Cell::Text(agg.name.to_string()),
            Cell::Int(agg.comparisons),
            Cell::Sci(agg.worst_dev),
            Cell::Sci(agg.worst_ratio),
            Cell::Text(if agg.passed() { "ok" } else { "FAIL" }.to_string()),
        ]);
    }

    let failure = (failed > 0).then(|| {
        format!(
            "verification failed: {failed} of {} checks exceeded tolerance",
            aggregates.len()
        )
    });
    Ok(CommandOutput { table, failure })
}

fn cmd_coverage(config: &RunConfig) -> Result<CommandOutput, CliError> {
    let mu = config.mu.unwrap_or(0.0);
    let sigma2 = config.sigma2.unwrap_or(1.0);
    let model = match config.model {
        ModelKind::Normal => SuperpopulationModel::normal(mu, sigma2),
        ModelKind::Uniform => SuperpopulationModel::uniform(config.lo, config.hi),
        ModelKind::Exponential => SuperpopulationModel::exponential(config.rate),
        ModelKind::TwoPoint => SuperpopulationModel::two_point(config.lo, config.hi, config.p_hi),
    }?;
    let n_pop = match config.pop_size {
        Some(PopSize::Finite(v)) => v,
        _ => unreachable!("coverage always carries a finite population size"),
    };
    let n = config.n.expect("coverage has a sample size");

    let run = coverage_experiment(
        &model,
        n_pop,
        n,
        config.alpha,
        config.replicates,
        config.seed,
    )?;
    let target = run.target.expect("coverage always has a target");
    let deviation = (run.estimate - target).abs();
    let gate = COVERAGE_SIGMA_GATE * run.std_error;

    let census = n == n_pop;
    let (status, failure) = if census {
        (
            "census: interval is the population mean itself; gate skipped".to_string(),
            None,
        )
    } else if config.model == ModelKind::Normal {
        if deviation <= gate {
            ("pass".to_string(), None)
        } else {
            (
                "FAIL".to_string(),
                Some(format!(
                    "coverage {:.5} missed target {target} by {deviation:.5}, more than {COVERAGE_SIGMA_GATE} standard errors ({:.5})",
                    run.estimate, gate
                )),
            )
        }
    } else {
        (
            "informational: the pivot is approximate for this family".to_string(),
            None,
        )
    };

    let mut table = Table::new(vec![
        "model",
        "N",
        "n",
        "alpha",
        "replicates",
        "seed",
        "coverage",
        "std_error",
        "target",
        "status",
    ]);
    table.push(vec![
        Cell::Text(config.model.name().to_string()),
        Cell::Int(n_pop),
        Cell::Int(n),
        Cell::Num(config.alpha),
        Cell::Int(run.replicates),
        Cell::Int(run.seed),
        Cell::Num(run.estimate),
        Cell::Num(run.std_error),
        Cell::Num(target),
        Cell::Text(status),
    ]);
    Ok(CommandOutput { table, failure })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relative_gap_is_zero_for_identical_and_zero_width_intervals() {
        let sample = Sample::new(vec![1.0f64, 2.0, 3.0, 4.0], None).unwrap();
        let a = confidence_interval(&sample, PopSize::Finite(4), 0.05, CiForm::FpcBessel).unwrap();
        let b =
            confidence_interval(&sample, PopSize::Finite(4), 0.05, CiForm::FpcDblstarRaw).unwrap();
        assert_eq!(max_relative_gap(&a, &b), 0.0);
    }

    #[test]
    fn relative_gap_sees_disagreement() {
        let sample = Sample::new(vec![1.0f64, 2.0, 3.0, 4.0], None).unwrap();
        let a = confidence_interval(&sample, PopSize::Finite(10), 0.05, CiForm::FpcBessel).unwrap();
        let mut b = a.clone();
        b.half_width *= 1.0 + 1e-6;
        assert!(max_relative_gap(&a, &b) > 1e-7);
    }

    #[test]
    fn cli_declares_a_consistent_interface() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
