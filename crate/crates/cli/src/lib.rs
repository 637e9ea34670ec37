//! `metagame` command-line harness.
//!
//! [`dispatch`] parses arguments, runs one subcommand and returns the
//! process exit code: 0 on success, 1 for usage errors, 2 for bad data.

mod config;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use log::info;
use serde::{Deserialize, Serialize};

use metagame_core::econ::Family;
use metagame_core::engine::{
    expand_technology, run_metagame, solve_market, AdoptionMode, ClassifyOptions, Objective,
};
use metagame_core::equilibrium::{enumerate_equilibria_with, BimatrixGame, SolverOptions};
use metagame_core::fixture::poisoned_apple_bundle;
use metagame_core::regression::{
    build_payoff_tables, covariate_names, fit_observations, observations, CoefficientBundle, FeatureSpec, Target,
};
use metagame_core::sim::{generate_corpus, generate_roster, ingest_corpus, write_corpus};
use metagame_core::sweep::{
    run_sweep, write_experiments_jsonl, write_panels_csv, write_stats_json, CoefficientSource, ReportFormat,
    SweepConfig, SweepStats,
};
use metagame_core::Bundle;

use config::ConfigFile;

/// Name of the built-in poisoned-apple coefficient bundle.
pub const BUILTIN_FIXTURE: &str = "@poisoned-apple";
/// Environment variable holding the default worker-thread count.
pub const THREADS_ENV: &str = "METAGAME_THREADS";

#[derive(Debug, Parser)]
#[command(name = "metagame", version, about = "Meta-game analysis of technology releases in regulated markets")]
struct Cli {
    /// Master seed (default 0).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file, or directory for `sweep`. Defaults to stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// More logging; repeat for trace output.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    /// TOML config file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Play a corpus of games and write it as CSV.
    Simulate(SimulateArgs),
    /// Validate a game-records CSV.
    Ingest(IngestArgs),
    /// Fit a coefficient bundle for one family.
    Fit(FitArgs),
    /// Print the four payoff tables of one market.
    Tables(TablesArgs),
    /// Solve one market, or a raw game from a JSON file.
    Solve(SolveArgs),
    /// Run the regulator's meta-game over all markets.
    Metagame(EngineArgs),
    /// Add one technology and classify the effect.
    Expand(ExpandArgs),
    /// Run many expansion experiments and aggregate them.
    Sweep(SweepArgs),
    /// Re-emit a sweep report as JSON or plot CSV.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[arg(long, value_delimiter = ',')]
    families: Option<Vec<Family>>,
    #[arg(long)]
    roster_size: Option<usize>,
    #[arg(long)]
    games_per_cell: Option<usize>,
}

#[derive(Debug, Args)]
struct IngestArgs {
    #[arg(long)]
    input: PathBuf,
}

#[derive(Debug, Args)]
struct FitArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    family: Option<Family>,
    /// Include market×pair interaction terms.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    interactions: Option<bool>,
}

#[derive(Debug, Args)]
struct TablesArgs {
    /// Coefficient bundle JSON, or `@poisoned-apple`.
    #[arg(long)]
    coefficients: String,
    #[arg(long)]
    market: u32,
    #[arg(long, value_delimiter = ',')]
    techs: Vec<String>,
}

#[derive(Debug, Args)]
struct SolveArgs {
    /// JSON file `{"a": [[..]], "b": [[..]]}`.
    #[arg(long, conflicts_with_all = ["coefficients", "market"])]
    game: Option<PathBuf>,
    #[arg(long, requires = "market")]
    coefficients: Option<String>,
    #[arg(long)]
    market: Option<u32>,
    #[arg(long, value_delimiter = ',')]
    techs: Vec<String>,
}

#[derive(Debug, Args)]
struct EngineArgs {
    #[arg(long)]
    coefficients: Option<String>,
    #[arg(long, value_delimiter = ',')]
    techs: Option<Vec<String>>,
    #[arg(long)]
    objective: Option<Objective>,
}

#[derive(Debug, Args)]
struct ExpandArgs {
    #[command(flatten)]
    engine: EngineArgs,
    /// The technology being released.
    #[arg(long)]
    add: String,
    /// Count adoption in any single equilibrium instead of the average.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    strict: Option<bool>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long, value_delimiter = ',')]
    families: Option<Vec<Family>>,
    #[arg(long, value_delimiter = ',')]
    objectives: Option<Vec<Objective>>,
    #[arg(long)]
    roster_size: Option<usize>,
    /// Comma list or inclusive range, e.g. `2-12`.
    #[arg(long)]
    subset_sizes: Option<String>,
    #[arg(long)]
    experiments_per_cell: Option<usize>,
    /// `synthetic`, `simulated` or `file`.
    #[arg(long)]
    source: Option<String>,
    /// Games per cell when the source is `simulated`.
    #[arg(long)]
    games_per_cell: Option<usize>,
    /// Bundles for the `file` source; repeat once per family.
    #[arg(long)]
    coefficients: Option<Vec<String>>,
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    strict: Option<bool>,
}

#[derive(Debug, Args)]
struct ReportArgs {
    /// `report.json` written by `sweep`.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value = "csv")]
    format: ReportFormat,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Data(anyhow::Error),
}

type Outcome<T = ()> = Result<T, Failure>;

fn data(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Data(e.into())
}

/// Runs the command line and returns the exit code.
pub fn dispatch<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    init_logging(cli.verbose);
    init_threads();
    match run(cli) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            1
        }
        Err(Failure::Data(e)) => {
            // stdout closed by a downstream reader such as `head`
            let broken = |c: &(dyn std::error::Error + 'static)| {
                let kind = c
                    .downcast_ref::<io::Error>()
                    .map(io::Error::kind)
                    .or_else(|| c.downcast_ref::<serde_json::Error>().and_then(serde_json::Error::io_error_kind));
                kind == Some(io::ErrorKind::BrokenPipe)
            };
            if e.chain().any(broken) {
                return 0;
            }
            eprintln!("error: {e:#}");
            2
        }
    }
}

fn init_logging(verbose: u8) {
    let level = match verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        2 => log::LevelFilter::Debug,
        _ => log::LevelFilter::Trace,
    };
    let _ = env_logger::Builder::new().filter_level(level).format_timestamp(None).try_init();
}

fn init_threads() {
    if let Ok(v) = std::env::var(THREADS_ENV) {
        if let Ok(n) = v.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn run(cli: Cli) -> Outcome {
    let cfg = match &cli.config {
        Some(path) => config::load(path)
            .with_context(|| format!("reading config {}", path.display()))
            .map_err(|e| Failure::Usage(format!("{e:#}")))?,
        None => ConfigFile::default(),
    };
    let seed = cli.seed.or(cfg.seed).unwrap_or(0);
    let out = cli.out.as_deref();
    match cli.command {
        Command::Simulate(a) => simulate(a, &cfg, seed, out),
        Command::Ingest(a) => ingest(a, out),
        Command::Fit(a) => fit(a, &cfg, out),
        Command::Tables(a) => {
            let bundle = load_bundle(&a.coefficients)?;
            let tables = build_payoff_tables(&bundle, a.market, &a.techs).map_err(data)?;
            write_json(out, &tables)
        }
        Command::Solve(a) => solve(a, out),
        Command::Metagame(a) => {
            let (bundle, techs, objective) = engine_inputs(&a, &cfg.metagame)?;
            let result = run_metagame(&bundle, &techs, objective).map_err(data)?;
            info!("chosen market {} with {objective} {}", result.chosen_market, result.objective_value);
            write_json(out, &result)
        }
        Command::Expand(a) => expand(a, &cfg, out),
        Command::Sweep(a) => sweep(a, &cfg, seed, out),
        Command::Report(a) => {
            let text = fs::read_to_string(&a.input)
                .with_context(|| format!("reading {}", a.input.display()))
                .map_err(data)?;
            let stats: SweepStats = serde_json::from_str(&text).map_err(data)?;
            match a.format {
                ReportFormat::Json => with_output(out, |w| write_stats_json(w, &stats).map_err(Into::into)),
                ReportFormat::Csv => with_output(out, |w| write_panels_csv(w, &stats).map_err(Into::into)),
            }
        }
    }
}

fn simulate(a: SimulateArgs, cfg: &ConfigFile, seed: u64, out: Option<&Path>) -> Outcome {
    let s = &cfg.simulate;
    let families = a.families.or_else(|| s.families.clone()).unwrap_or_else(|| Family::ALL.to_vec());
    let roster_size = a.roster_size.or(s.roster_size).unwrap_or(13);
    let games = a.games_per_cell.or(s.games_per_cell).unwrap_or(10);
    let roster = generate_roster(roster_size, seed).map_err(|e| Failure::Usage(e.to_string()))?;
    let corpus = generate_corpus(&roster, &families, games, seed).map_err(data)?;
    info!("simulated {} games", corpus.len());
    with_output(out, |w| write_corpus(w, &corpus).map_err(Into::into))
}

#[derive(Serialize)]
struct IngestSummary {
    records: usize,
    per_family: BTreeMap<Family, usize>,
}

fn ingest(a: IngestArgs, out: Option<&Path>) -> Outcome {
    let corpus = ingest_corpus(&a.input)
        .with_context(|| format!("ingesting {}", a.input.display()))
        .map_err(data)?;
    let per_family = Family::ALL
        .iter()
        .map(|&f| (f, corpus.iter().filter(|r| r.market.family == f).count()))
        .filter(|(_, n)| *n > 0)
        .collect();
    write_json(out, &IngestSummary { records: corpus.len(), per_family })
}

fn fit(a: FitArgs, cfg: &ConfigFile, out: Option<&Path>) -> Outcome {
    let family = a
        .family
        .or(cfg.fit.family)
        .ok_or_else(|| Failure::Usage("fit needs --family".into()))?;
    let interactions = a.interactions.or(cfg.fit.interactions).unwrap_or(true);
    let corpus = ingest_corpus(&a.input)
        .with_context(|| format!("ingesting {}", a.input.display()))
        .map_err(data)?;
    let rows = observations(&corpus, family, Target::PayoffA);
    let spec = FeatureSpec::from_observations(&rows, covariate_names(family), interactions).map_err(data)?;
    let mut sets = Vec::new();
    for target in Target::ALL {
        let set = fit_observations(&observations(&corpus, family, target), &spec, family, target).map_err(data)?;
        if let Some(d) = &set.diagnostics {
            info!("{family} {target}: rmse {:.4}, r2 {:.4}, {} rows", d.rmse, d.r2, d.rows);
        }
        sets.push(set);
    }
    let bundle = CoefficientBundle::new(sets).map_err(data)?;
    write_json(out, &bundle)
}

#[derive(Deserialize)]
struct GameFile {
    a: Vec<Vec<f64>>,
    b: Vec<Vec<f64>>,
}

fn solve(a: SolveArgs, out: Option<&Path>) -> Outcome {
    if let Some(path) = a.game {
        let text = fs::read_to_string(&path)
            .with_context(|| format!("reading {}", path.display()))
            .map_err(data)?;
        let g: GameFile = serde_json::from_str(&text).map_err(data)?;
        let game = BimatrixGame::from_rows(&g.a, &g.b).map_err(data)?;
        let found = enumerate_equilibria_with(&game, &SolverOptions::default());
        info!("{} equilibria via {:?}", found.equilibria.len(), found.path);
        return write_json(out, &found.equilibria);
    }
    let (Some(coefficients), Some(market)) = (a.coefficients, a.market) else {
        return Err(Failure::Usage("solve needs --game or --coefficients with --market".into()));
    };
    let bundle = load_bundle(&coefficients)?;
    let techs = if a.techs.is_empty() { bundle.techs() } else { a.techs };
    let tables = build_payoff_tables(&bundle, market, &techs).map_err(data)?;
    write_json(out, &solve_market(&tables).map_err(data)?)
}

fn engine_inputs(a: &EngineArgs, section: &config::EngineSection) -> Outcome<(Bundle, Vec<String>, Objective)> {
    let source = a
        .coefficients
        .clone()
        .or_else(|| section.coefficients.clone())
        .ok_or_else(|| Failure::Usage("missing --coefficients".into()))?;
    let bundle = load_bundle(&source)?;
    let techs = a.techs.clone().or_else(|| section.techs.clone()).unwrap_or_else(|| bundle.techs());
    let objective = a.objective.or(section.objective).unwrap_or(Objective::Fairness);
    Ok((bundle, techs, objective))
}

fn expand(a: ExpandArgs, cfg: &ConfigFile, out: Option<&Path>) -> Outcome {
    let (bundle, techs, objective) = engine_inputs(&a.engine, &cfg.expand)?;
    let strict = a.strict.or(cfg.expand.strict).unwrap_or(false);
    let options = ClassifyOptions {
        adoption_mode: if strict { AdoptionMode::Strict } else { AdoptionMode::Averaged },
        ..ClassifyOptions::default()
    };
    let baseline: Vec<String> = techs.into_iter().filter(|t| *t != a.add).collect();
    let report = expand_technology(&bundle, &baseline, &a.add, objective, &options).map_err(data)?;
    info!(
        "market {} -> {}, flags {:?}",
        report.baseline.chosen_market, report.expanded.chosen_market, report.flags
    );
    write_json(out, &report.summary())
}

fn parse_sizes(text: &str) -> Result<Vec<usize>, String> {
    let bad = || format!("bad subset sizes `{text}`");
    if let Some((lo, hi)) = text.split_once('-') {
        let lo: usize = lo.trim().parse().map_err(|_| bad())?;
        let hi: usize = hi.trim().parse().map_err(|_| bad())?;
        return Ok((lo..=hi).collect());
    }
    text.split(',').map(|s| s.trim().parse().map_err(|_| bad())).collect()
}

fn sweep(a: SweepArgs, cfg: &ConfigFile, seed: u64, out: Option<&Path>) -> Outcome {
    let s = &cfg.sweep;
    let dir = out.ok_or_else(|| Failure::Usage("sweep needs --out DIR".into()))?;
    let defaults = SweepConfig::default();
    let roster_size = a.roster_size.or(s.roster_size).unwrap_or(defaults.roster_size);
    let subset_sizes = match a.subset_sizes {
        Some(text) => parse_sizes(&text).map_err(Failure::Usage)?,
        None => s
            .subset_sizes
            .clone()
            .unwrap_or_else(|| (2..roster_size.min(defaults.roster_size)).collect()),
    };
    let source = match a.source.or_else(|| s.source.clone()).as_deref().unwrap_or("synthetic") {
        "synthetic" => CoefficientSource::Synthetic(Default::default()),
        "simulated" => CoefficientSource::Simulated {
            games_per_cell: a.games_per_cell.or(s.games_per_cell).unwrap_or(4),
        },
        "file" => {
            let paths = a
                .coefficients
                .or_else(|| s.coefficients.clone())
                .ok_or_else(|| Failure::Usage("source `file` needs --coefficients".into()))?;
            CoefficientSource::Fixed(paths.iter().map(|p| load_bundle(p)).collect::<Outcome<_>>()?)
        }
        other => return Err(Failure::Usage(format!("unknown coefficient source `{other}`"))),
    };
    let strict = a.strict.or(s.strict).unwrap_or(false);
    let config = SweepConfig {
        families: a.families.or_else(|| s.families.clone()).unwrap_or(defaults.families),
        objectives: a.objectives.or_else(|| s.objectives.clone()).unwrap_or(defaults.objectives),
        roster_size,
        subset_sizes,
        experiments_per_cell: a
            .experiments_per_cell
            .or(s.experiments_per_cell)
            .unwrap_or(defaults.experiments_per_cell),
        seed,
        source,
        classify: ClassifyOptions {
            adoption_mode: if strict { AdoptionMode::Strict } else { AdoptionMode::Averaged },
            ..ClassifyOptions::default()
        },
    };
    config.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    let output = run_sweep(&config).map_err(data)?;
    info!("{} experiments", output.experiments.len());

    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display())).map_err(data)?;
    if let Some(corpus) = &output.corpus {
        with_output(Some(&dir.join("corpus.csv")), |w| write_corpus(w, corpus).map_err(Into::into))?;
    }
    for bundle in &output.bundles {
        write_json(Some(&dir.join(format!("coefficients-{}.json", bundle.family()))), bundle)?;
    }
    with_output(Some(&dir.join("experiments.jsonl")), |w| {
        write_experiments_jsonl(w, &output.experiments).map_err(Into::into)
    })?;
    with_output(Some(&dir.join("report.json")), |w| write_stats_json(w, &output.stats).map_err(Into::into))?;
    with_output(Some(&dir.join("panels.csv")), |w| write_panels_csv(w, &output.stats).map_err(Into::into))
}

fn load_bundle(source: &str) -> Outcome<Bundle> {
    if source == BUILTIN_FIXTURE {
        return Ok(poisoned_apple_bundle());
    }
    if source.starts_with('@') {
        return Err(Failure::Usage(format!("unknown built-in bundle `{source}`")));
    }
    let text = fs::read_to_string(source).with_context(|| format!("reading {source}")).map_err(data)?;
    serde_json::from_str(&text).with_context(|| format!("parsing {source}")).map_err(data)
}

fn with_output(path: Option<&Path>, f: impl FnOnce(&mut dyn Write) -> anyhow::Result<()>) -> Outcome {
    match path {
        Some(p) => {
            let file = File::create(p).with_context(|| format!("creating {}", p.display())).map_err(data)?;
            let mut w = BufWriter::new(file);
            f(&mut w).map_err(data)?;
            w.flush().map_err(data)
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            f(&mut lock).map_err(data)?;
            lock.flush().map_err(data)
        }
    }
}

fn write_json<T: Serialize>(path: Option<&Path>, value: &T) -> Outcome {
    with_output(path, |w| {
        serde_json::to_writer_pretty(&mut *w, value)?;
        writeln!(w)?;
        Ok(())
    })
}
