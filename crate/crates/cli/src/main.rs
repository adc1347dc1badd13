//! Command-line front end: parse a config, run one inference or experiment,
//! write CSV files, print a one-line summary.
//!
//! Exit codes: 0 success, 1 usage error, 2 config error, 3 runtime error.

mod presets;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use cuecause::experiments::{
    exp1_population, exp2_convergence, exp3_sweep, exp4_disparity, exp_multi, exp_samediff,
    lemma1_check, theorem1_check,
};
use cuecause::rng::{domain, stream, stream_id};
use cuecause::{exact_posterior, is_posterior, ExperimentConfig, ResultTable, Value};

const EXIT_USAGE: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_RUNTIME: u8 = 3;

#[derive(Parser)]
#[command(
    name = "cuecause",
    version,
    about = "Sampling-based causal inference in cue combination",
    subcommand_required = true,
    arg_required_else_help = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Config file (flat `key = value` text; empty means all defaults).
    #[arg(long, global = true, value_name = "PATH", conflicts_with = "preset")]
    config: Option<PathBuf>,

    /// Built-in preset, e.g. `full`, `smoke` or a qualified name like `exp2-full`.
    #[arg(long, global = true, value_name = "NAME")]
    preset: Option<String>,

    /// Overrides the config seed.
    #[arg(long, global = true, value_name = "U64")]
    seed: Option<u64>,

    /// Output directory (overrides the config's output_path).
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Worker threads for the experiment loops.
    #[arg(long, global = true, value_name = "N", value_parser = clap::value_parser!(u32).range(1..))]
    jobs: Option<u32>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Importance-sampling posterior for the configured observations.
    Infer,
    /// Exact posterior for the configured observations.
    Exact,
    /// Experiment 1: population firing rates in one trial.
    Exp1,
    /// Experiment 2: convergence and accuracy over random worlds.
    Exp2,
    /// Experiment 3: error-rate sweep over the noise grid.
    Exp3,
    /// Experiment 4: common-cause reports by stimulus disparity.
    Exp4,
    /// Multi-stimuli causal inference (3 and 10 cues).
    Multi,
    /// Same-different judgment (3 and 10 objects).
    Samediff,
    /// Convergence coverage check.
    Theorem1,
    /// Concentration-bound check.
    Lemma1,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Infer => "infer",
            Command::Exact => "exact",
            Command::Exp1 => "exp1",
            Command::Exp2 => "exp2",
            Command::Exp3 => "exp3",
            Command::Exp4 => "exp4",
            Command::Multi => "multi",
            Command::Samediff => "samediff",
            Command::Theorem1 => "theorem1",
            Command::Lemma1 => "lemma1",
        }
    }
}

struct Failure {
    code: u8,
    error: anyhow::Error,
}

fn config_failure(error: anyhow::Error) -> Failure {
    Failure {
        code: EXIT_CONFIG,
        error,
    }
}

fn runtime_failure(error: anyhow::Error) -> Failure {
    Failure {
        code: EXIT_RUNTIME,
        error,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {:#}", failure.error);
            ExitCode::from(failure.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let config = load_config(&cli)?;
    let out_dir = PathBuf::from(&config.output_path);

    let worker = || dispatch(cli.command, &config, &out_dir).map_err(runtime_failure);
    match cli.jobs {
        Some(jobs) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs as usize)
                .build()
                .map_err(|e| runtime_failure(anyhow!(e)))?;
            pool.install(worker)
        }
        None => worker(),
    }
}

fn load_config(cli: &Cli) -> Result<ExperimentConfig, Failure> {
    let text = if let Some(path) = &cli.config {
        fs::read_to_string(path)
            .with_context(|| format!("cannot read config file {}", path.display()))
            .map_err(config_failure)?
    } else if let Some(name) = &cli.preset {
        presets::lookup(cli.command.name(), name)
            .ok_or_else(|| {
                config_failure(anyhow!(
                    "unknown preset {name:?} for `{}` (available: {})",
                    cli.command.name(),
                    presets::names().join(", ")
                ))
            })?
            .to_string()
    } else {
        String::new()
    };
    let mut config = ExperimentConfig::parse(&text)
        .map_err(|e| config_failure(anyhow!(e).context("invalid config")))?;
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    if let Some(out) = &cli.out {
        config.output_path = out.display().to_string();
    }
    Ok(config)
}

fn dispatch(command: Command, config: &ExperimentConfig, out_dir: &Path) -> anyhow::Result<()> {
    fs::create_dir_all(out_dir)
        .with_context(|| format!("cannot create output directory {}", out_dir.display()))?;
    match command {
        Command::Infer => {
            let table = infer_table(config, false)?;
            let path = write_table(out_dir, "infer.csv", &table)?;
            let p = table.value("p_c1", 0).as_f64();
            println!(
                "infer: p(C=1 | x_0) = {p:.4} at N = {} -> {}",
                config.n_samples,
                path.display()
            );
        }
        Command::Exact => {
            let table = infer_table(config, true)?;
            let path = write_table(out_dir, "exact.csv", &table)?;
            let p = table.value("p_c1", 0).as_f64();
            println!("exact: p(C=1 | x_0) = {p:.6} -> {}", path.display());
        }
        Command::Exp1 => {
            let table = exp1_population(config)?;
            let strided = table.strided(config.stride);
            let path = write_table(out_dir, "exp1_population.csv", &table)?;
            let strided_path = write_table(out_dir, "exp1_population_strided.csv", &strided)?;
            let rates = table.column_f64("normalized_rate");
            let liks = table.column_f64("normalized_likelihood");
            let dev = rates
                .iter()
                .zip(&liks)
                .map(|(r, l)| (r - l).abs())
                .sum::<f64>()
                / rates.len() as f64;
            println!(
                "exp1: mean |normalized rate - likelihood| = {dev:.2e} over {} neurons -> {} (strided: {})",
                rates.len(),
                path.display(),
                strided_path.display()
            );
        }
        Command::Exp2 => {
            let table = exp2_convergence(config)?;
            let path = write_table(out_dir, "exp2_convergence.csv", &table)?;
            let largest = *config.sample_sizes.last().expect("validated nonempty") as f64;
            let rate = mean_where(&table, "error_rate", "n_samples", largest);
            println!(
                "exp2: mean error rate {rate:.4} vs oracle at N = {largest} -> {}",
                path.display()
            );
        }
        Command::Exp3 => {
            let table = exp3_sweep(config)?;
            let path = write_table(out_dir, "exp3_sweep.csv", &table)?;
            let rates = table.column_f64("error_rate");
            let max = rates.iter().cloned().fold(0.0, f64::max);
            println!(
                "exp3: max cell error rate {max:.3} over {} cells -> {}",
                rates.len(),
                path.display()
            );
        }
        Command::Exp4 => {
            let table = exp4_disparity(config)?;
            let path = write_table(out_dir, "exp4_disparity.csv", &table)?;
            let largest = *config.sample_sizes.last().expect("validated nonempty");
            let is_col = table.column_f64(&format!("p_common_is_{largest}"));
            let oracle = table.column_f64("p_common_oracle");
            let flags = table.column_f64("low_count");
            let max_dev = is_col
                .iter()
                .zip(&oracle)
                .zip(&flags)
                .filter(|(_, &flag)| flag == 0.0)
                .map(|((i, o), _)| (i - o).abs())
                .fold(0.0, f64::max);
            println!(
                "exp4: max bin deviation vs oracle {max_dev:.4} at N = {largest} -> {}",
                path.display()
            );
        }
        Command::Multi => {
            let table = exp_multi(config)?;
            let path = write_table(out_dir, "multi_cue.csv", &table)?;
            println!(
                "multi: {} -> {}",
                variant_summary(&table, "n_cues", config),
                path.display()
            );
        }
        Command::Samediff => {
            let table = exp_samediff(config)?;
            let path = write_table(out_dir, "same_different.csv", &table)?;
            println!(
                "samediff: {} -> {}",
                variant_summary(&table, "n_objects", config),
                path.display()
            );
        }
        Command::Theorem1 => {
            let table = theorem1_check(config)?;
            let path = write_table(out_dir, "theorem1_check.csv", &table)?;
            let n = table.n_rows();
            let coverage = table.value("coverage", n - 1).as_f64();
            let eps = table.value("epsilon", n - 1).as_f64();
            let size = table.value("n_samples", n - 1).as_i64();
            println!(
                "theorem1: coverage {coverage:.4} within eps = {eps} at N = {size} -> {}",
                path.display()
            );
        }
        Command::Lemma1 => {
            let table = lemma1_check(config)?;
            let path = write_table(out_dir, "lemma_bounds.csv", &table)?;
            let f1 = table.column_f64("lemma1_frequency");
            let b1 = table.column_f64("lemma1_bound");
            let f2 = table.column_f64("lemma2_frequency");
            let b2 = table.column_f64("lemma2_bound");
            let margin = f1
                .iter()
                .zip(&b1)
                .chain(f2.iter().zip(&b2))
                .map(|(f, b)| f - b)
                .fold(f64::INFINITY, f64::min);
            println!(
                "lemma1: min (frequency - bound) margin {margin:.4} -> {}",
                path.display()
            );
        }
    }
    Ok(())
}

/// Posterior per configured observation vector: sampled or exact.
fn infer_table(config: &ExperimentConfig, exact: bool) -> anyhow::Result<ResultTable> {
    let model = config.model()?;
    let n = model.cue_count();
    let mut columns = vec!["trial".to_string()];
    for i in 1..=n {
        columns.push(format!("x{i}"));
    }
    columns.push("p_c1".to_string());
    columns.push("decision".to_string());
    if !exact {
        columns.push("n_samples".to_string());
    }
    let mut table = ResultTable::new(columns);
    table.push_metadata("experiment", if exact { "exact" } else { "infer" });
    table.push_metadata("version", env!("CARGO_PKG_VERSION"));
    config.echo_into(&mut table);

    for (idx, observations) in config.observations.iter().enumerate() {
        let mut row = vec![Value::Int(idx as i64)];
        row.extend(observations.iter().map(|&x| Value::Float(x)));
        if exact {
            let p = exact_posterior(&model, observations)?;
            row.push(Value::Float(p));
            row.push(Value::Int(cuecause::decide(p, 0.5).label() as i64));
        } else {
            let mut rng = stream(
                config.seed,
                stream_id(domain::ESTIMATE, 0, 0, idx as u32),
            );
            let est = is_posterior(&model, observations, config.n_samples, &mut rng)?;
            row.push(Value::Float(est.p_c1));
            row.push(Value::Int(est.decision.label() as i64));
            row.push(Value::Int(est.n_samples as i64));
        }
        table.push_row(row);
    }
    Ok(table)
}

/// "error rate at N=...: t=3: 0.012, t=10: 0.008" style summary.
fn variant_summary(table: &ResultTable, variant_column: &str, config: &ExperimentConfig) -> String {
    let largest = *config.sample_sizes.last().expect("validated nonempty") as f64;
    let variants = table.column_f64(variant_column);
    let sizes = table.column_f64("n_samples");
    let rates = table.column_f64("error_rate");
    let mut parts = Vec::new();
    for ((v, n), r) in variants.iter().zip(&sizes).zip(&rates) {
        if *n == largest {
            parts.push(format!("{variant_column}={v}: {r:.4}"));
        }
    }
    format!("error rate vs oracle at N = {largest}: {}", parts.join(", "))
}

fn mean_where(table: &ResultTable, value_col: &str, key_col: &str, key: f64) -> f64 {
    let keys = table.column_f64(key_col);
    let values = table.column_f64(value_col);
    let selected: Vec<f64> = keys
        .iter()
        .zip(&values)
        .filter(|(k, _)| **k == key)
        .map(|(_, v)| *v)
        .collect();
    selected.iter().sum::<f64>() / selected.len() as f64
}

fn write_table(dir: &Path, name: &str, table: &ResultTable) -> anyhow::Result<PathBuf> {
    let path = dir.join(name);
    let file = fs::File::create(&path)
        .with_context(|| format!("cannot create {}", path.display()))?;
    table
        .write_csv(file)
        .with_context(|| format!("cannot write {}", path.display()))?;
    Ok(path)
}
