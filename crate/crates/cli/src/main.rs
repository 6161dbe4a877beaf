mod report;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use taustar_core::estimators::t_star_subsample;
use taustar_core::{
    dewet_d, exact_permutation_test, expand_table, hoeffding_h, kendall_t, mc_stderr, parse_joint,
    parse_pairs, parse_table, pearson_chi_square, permutation_test, pop_quadruple_probs,
    pop_tau_star, t_star, t_star_b, tabulate_sample, ContingencyTable, Error, EstimatorConfig,
    Fixture, FixturePayload, JointDistribution, Method, Mode, Normalization, PairedSample,
    Sidedness, StatisticId,
};

use report::Report;

#[derive(Parser)]
#[command(
    name = "taustar",
    version,
    about = "Sign covariance tau* and permutation tests of independence"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output style.
    #[arg(long, value_enum, default_value_t = Output::Human, global = true)]
    output: Output,
}

#[derive(Clone, Copy, ValueEnum)]
enum Output {
    Human,
    Machine,
}

#[derive(Subcommand)]
enum Command {
    /// Compute one statistic on a sample or table.
    Stat(StatArgs),
    /// Permutation test of independence.
    Test(TestArgs),
    /// Population tau*, and the concordant/discordant quadruple probabilities.
    Population(PopulationArgs),
    /// Run a built-in verification suite.
    Verify(VerifyArgs),
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct SampleSource {
    /// Two-column file of paired observations.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Contingency table file.
    #[arg(long)]
    table: Option<PathBuf>,
    /// Built-in dataset: table1 or table2.
    #[arg(long)]
    fixture: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Naive,
    Table,
    Subsample,
}

#[derive(Clone, Copy, ValueEnum)]
enum NormalizationArg {
    V,
    U,
}

#[derive(Args)]
struct StatArgs {
    #[command(flatten)]
    source: SampleSource,
    /// taustar, taustar_b, kendall, chisq, hoeffding or dewet.
    #[arg(long)]
    statistic: String,
    #[arg(long, value_enum, default_value_t = MethodArg::Naive)]
    method: MethodArg,
    /// Quadruples drawn by `--method subsample`.
    #[arg(long)]
    subsample_m: Option<usize>,
    #[arg(long, value_enum, default_value_t = NormalizationArg::V)]
    normalization: NormalizationArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum SidednessArg {
    Large,
    Abs,
}

#[derive(Args)]
struct TestArgs {
    #[command(flatten)]
    source: SampleSource,
    /// taustar, kendall, chisq, hoeffding or dewet.
    #[arg(long)]
    statistic: String,
    #[arg(long, default_value_t = 10_000)]
    resamples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// How t* is recomputed per resample: naive (sample) or table.
    #[arg(long, value_enum, default_value_t = MethodArg::Naive)]
    method: MethodArg,
    /// Enumerate all n! permutations instead of sampling (n <= 8).
    #[arg(long, conflicts_with = "resamples")]
    exact: bool,
    /// Rejection side; defaults to abs for kendall, large otherwise.
    #[arg(long, value_enum)]
    sidedness: Option<SidednessArg>,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct JointSource {
    /// Joint-law file.
    #[arg(long)]
    joint: Option<PathBuf>,
    /// Contingency table file, read as its empirical law.
    #[arg(long)]
    table: Option<PathBuf>,
    /// Built-in dataset: table1, table2 or counterexample_r8.
    #[arg(long)]
    fixture: Option<String>,
}

#[derive(Args)]
struct PopulationArgs {
    #[command(flatten)]
    source: JointSource,
}

#[derive(Args)]
struct VerifyArgs {
    /// appendix-b, mixture, counterexample or identities.
    #[arg(value_parser = clap::builder::PossibleValuesParser::new(verify::SUITES))]
    suite: String,
    /// Random tables per marginal setting (appendix-b).
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

enum CliError {
    Usage(String),
    Data(String),
    Resource(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Resource(_) => CliError::Resource(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Data(_) => 3,
            CliError::Resource(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Data(m) | CliError::Resource(m) => m,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn read(path: &PathBuf) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn fixture(name: &str) -> CliResult<Fixture> {
    name.parse()
        .map_err(|e: Error| CliError::Usage(e.to_string()))
}

enum Loaded {
    Pairs(PairedSample),
    Table(ContingencyTable),
}

impl Loaded {
    fn sample(&self) -> CliResult<PairedSample> {
        match self {
            Loaded::Pairs(s) => Ok(s.clone()),
            Loaded::Table(t) => Ok(expand_table(t)?),
        }
    }

    fn table(&self) -> ContingencyTable {
        match self {
            Loaded::Pairs(s) => tabulate_sample(s),
            Loaded::Table(t) => t.clone(),
        }
    }
}

fn load_sample(src: &SampleSource) -> CliResult<Loaded> {
    if let Some(path) = &src.input {
        return Ok(Loaded::Pairs(parse_pairs(&read(path)?)?));
    }
    if let Some(path) = &src.table {
        return Ok(Loaded::Table(parse_table(&read(path)?)?));
    }
    let name = src.fixture.as_deref().expect("clap enforces one source");
    match fixture(name)?.load() {
        FixturePayload::Table(t) => Ok(Loaded::Table(t)),
        FixturePayload::Joint(_) => Err(CliError::Usage(format!(
            "fixture '{name}' is a joint law; use it with the population subcommand"
        ))),
    }
}

fn stat(args: &StatArgs) -> CliResult<Report> {
    let loaded = load_sample(&args.source)?;
    let normalization = match args.normalization {
        NormalizationArg::V => Normalization::V,
        NormalizationArg::U => Normalization::U,
    };
    let config = match (args.method, args.subsample_m) {
        (MethodArg::Subsample, Some(m)) => EstimatorConfig::subsample(m, normalization, args.seed),
        (MethodArg::Subsample, None) => {
            return Err(CliError::Usage(
                "--method subsample needs --subsample-m".into(),
            ))
        }
        (_, Some(_)) => {
            return Err(CliError::Usage(
                "--subsample-m only applies to --method subsample".into(),
            ))
        }
        (MethodArg::Naive, None) => EstimatorConfig::exhaustive(normalization),
        (MethodArg::Table, None) => EstimatorConfig {
            method: Method::Table,
            ..EstimatorConfig::exhaustive(normalization)
        },
    };
    let name = args.statistic.as_str();
    let configurable = matches!(name, "taustar" | "dewet");
    if !configurable
        && (args.method != MethodArg::Naive || matches!(args.normalization, NormalizationArg::U))
    {
        return Err(CliError::Usage(format!(
            "--method and --normalization do not apply to '{name}'"
        )));
    }

    let sample = loaded.sample()?;
    let mut report = Report::default();
    report.push("statistic", name).push("n", sample.len());
    if configurable {
        report
            .push("method", method_name(args.method))
            .push("normalization", normalization_name(normalization));
    }
    match name {
        "taustar" if args.method == MethodArg::Subsample => {
            let m = args.subsample_m.expect("checked above");
            let est = t_star_subsample(&sample, m, normalization, args.seed)?;
            report
                .push("seed", args.seed)
                .push("draws", est.draws)
                .push("value", est.estimate)
                .push("std_error", est.std_error);
        }
        "taustar" => {
            report.push("value", t_star(&sample, &config)?);
        }
        "dewet" => {
            if let Method::Subsample(_) = config.method {
                report.push("seed", args.seed);
            }
            report.push("value", dewet_d(&sample, &config)?);
        }
        "taustar_b" => {
            report.push("value", t_star_b(&sample)?);
        }
        "kendall" => {
            report.push("value", kendall_t(&sample));
        }
        "hoeffding" => {
            report.push("value", hoeffding_h(&sample));
        }
        "chisq" => {
            report.push("value", pearson_chi_square(&loaded.table())?);
        }
        other => {
            return Err(CliError::Usage(format!(
                "unknown statistic '{other}' (expected taustar, taustar_b, kendall, chisq, hoeffding or dewet)"
            )))
        }
    }
    Ok(report)
}

fn method_name(m: MethodArg) -> &'static str {
    match m {
        MethodArg::Naive => "naive",
        MethodArg::Table => "table",
        MethodArg::Subsample => "subsample",
    }
}

fn normalization_name(n: Normalization) -> &'static str {
    match n {
        Normalization::V => "v",
        Normalization::U => "u",
    }
}

fn test(args: &TestArgs) -> CliResult<Report> {
    let id: StatisticId = match (args.statistic.as_str(), args.method) {
        ("taustar_table", _) => {
            return Err(CliError::Usage(
                "use --statistic taustar --method table".into(),
            ))
        }
        (_, MethodArg::Subsample) => {
            return Err(CliError::Usage(
                "--method subsample is not available for permutation tests".into(),
            ))
        }
        ("taustar", MethodArg::Table) => StatisticId::TauStarTable,
        (name, MethodArg::Table) => {
            return Err(CliError::Usage(format!(
                "--method table only applies to taustar, not '{name}'"
            )))
        }
        (name, MethodArg::Naive) => name
            .parse()
            .map_err(|e: Error| CliError::Usage(e.to_string()))?,
    };
    let sidedness = match args.sidedness {
        Some(SidednessArg::Large) => Sidedness::OneSidedLarge,
        Some(SidednessArg::Abs) => Sidedness::TwoSidedAbs,
        None => id.default_sidedness(),
    };
    let sample = load_sample(&args.source)?.sample()?;
    // The whole result is computed before anything is printed.
    let r = if args.exact {
        exact_permutation_test(&sample, id, sidedness)?
    } else {
        permutation_test(&sample, id, args.resamples, args.seed, sidedness)?
    };
    let mut report = Report::default();
    report
        .push("statistic", args.statistic.as_str())
        .push("method", method_name(args.method))
        .push("n", sample.len())
        .push("mode", r.mode.name())
        .push("sidedness", r.sidedness.name())
        .push("observed", r.observed)
        .push("resamples", r.resamples)
        .push("exceed_count", r.exceed_count);
    if r.mode == Mode::MonteCarlo {
        report.push("seed", r.seed);
    }
    report.push("p_value", r.p_value);
    if r.mode == Mode::MonteCarlo {
        report.push("mc_stderr", mc_stderr(r.p_value, r.resamples));
    }
    Ok(report)
}

fn population(args: &PopulationArgs) -> CliResult<Report> {
    let src = &args.source;
    let joint = if let Some(path) = &src.joint {
        parse_joint(&read(path)?)?
    } else if let Some(path) = &src.table {
        JointDistribution::from_table(&parse_table(&read(path)?)?)?
    } else {
        match fixture(src.fixture.as_deref().expect("clap enforces one source"))?.load() {
            FixturePayload::Table(t) => JointDistribution::from_table(&t)?,
            FixturePayload::Joint(j) => j,
        }
    };
    let tau = pop_tau_star(&joint)?;
    let mut report = Report::default();
    report
        .push("rows", joint.rows())
        .push("cols", joint.cols())
        .push("tau_star", tau);
    // Concordance needs ordered values; metric margins have none.
    match pop_quadruple_probs(&joint) {
        Ok(q) => {
            report
                .push("pi_c4", q.pi_c4)
                .push("pi_d4", q.pi_d4)
                .push("pi_tied", q.pi_tied);
        }
        Err(Error::Unsupported(_)) => {
            report
                .push("pi_c4", "na")
                .push("pi_d4", "na")
                .push("pi_tied", "na");
        }
        Err(e) => return Err(e.into()),
    }
    Ok(report)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap exits 0 for --help/--version and 2 for usage errors.
            e.exit();
        }
    };
    let result = match &cli.command {
        Command::Stat(a) => stat(a).map(|r| (r, true)),
        Command::Test(a) => test(a).map(|r| (r, true)),
        Command::Population(a) => population(a).map(|r| (r, true)),
        Command::Verify(a) => verify::run(&a.suite, a.trials, a.seed)
            .map(|o| (o.report, o.pass))
            .map_err(CliError::from),
    };
    match result {
        Ok((report, pass)) => {
            match cli.output {
                Output::Machine => print!("{}", report.machine()),
                Output::Human => print!("{}", report.human()),
            }
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("taustar: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
