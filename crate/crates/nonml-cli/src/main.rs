//! Command-line front end: transform raw network-of-networks data, compute
//! statistics, simulate, estimate and assess models.
//!
//! Every run writes `run_log.json` into the output directory, on success or
//! failure, echoing the configuration for reproducibility. Module errors map
//! to distinct exit codes.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use nonml::direct::{
    alaam_conditional_probability, multiplex_statistic, social_matrix, MultiplexKind,
    MultiplexStatSpec,
};
use nonml::error::{
    DirectError, EstimError, GofError, GraphError, SamplerError, StatError, TransformError,
};
use nonml::estimator::{fit_mom, FitOptions};
use nonml::gof::gof;
use nonml::io::{
    load_manifest, load_transform_outputs, write_transform_outputs, ModelSpecFile, SpecFileError,
};
use nonml::multilevel::MultilevelNetwork;
use nonml::pair_index::PairIndex;
use nonml::sampler::{default_burnin, default_thin, simulate};
use nonml::stats::{all_statistic_ids, compute_statistics, summary_stats};

#[derive(Parser)]
#[command(
    name = "nonml",
    version,
    about = "Multilevel network-of-networks toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct InputArgs {
    /// Manifest JSON describing reports, social network, criterion, policy.
    #[arg(long, value_name = "FILE")]
    manifest: Option<PathBuf>,
    /// Directory produced by `transform` (W/Y/Q/D CSV + pair_index.json).
    #[arg(long, value_name = "DIR")]
    transformed: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct RunArgs {
    /// Model/statistic spec JSON.
    #[arg(long, value_name = "FILE")]
    spec: PathBuf,
    /// Output directory.
    #[arg(long, value_name = "DIR")]
    out: PathBuf,
    /// Root random seed; mandatory for reproducible simulation.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads for parallel chains (env NONML_THREADS as fallback).
    #[arg(long)]
    threads: Option<usize>,
    /// Markov chain burn-in steps.
    #[arg(long)]
    burnin: Option<u64>,
    /// Steps between recorded samples.
    #[arg(long)]
    thin: Option<u64>,
    /// Number of recorded samples.
    #[arg(long)]
    samples: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Build the multilevel form (W, Y, Q, D) from raw data.
    Transform {
        #[arg(long, value_name = "FILE")]
        manifest: PathBuf,
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
    },
    /// Compute configuration statistics of the observed network.
    Stats {
        #[command(flatten)]
        input: InputArgs,
        /// Statistic list JSON ({"effects": [{"name": ...}, ...]}).
        #[arg(long, value_name = "FILE")]
        spec: PathBuf,
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
        /// Also write the degree/clustering summary table.
        #[arg(long)]
        summary: bool,
    },
    /// Simulate the model and record sampled statistics.
    Simulate {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Fit model parameters by the method of moments.
    Estimate {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Goodness of fit: observed vs simulated statistics at the given theta.
    Gof {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        run: RunArgs,
        /// Restrict the auxiliary set to the model effects only.
        #[arg(long)]
        effects_only: bool,
    },
    /// Direct per-pair multiplex statistics and autologistic probabilities.
    Direct {
        #[arg(long, value_name = "FILE")]
        manifest: PathBuf,
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
        /// Evaluate autologistic conditionals for this pair, e.g. "u,v".
        #[arg(long, value_name = "PAIR")]
        alaam_pair: Option<String>,
        #[arg(long, default_value_t = 0.0)]
        theta0: f64,
        #[arg(long, default_value_t = 0.0)]
        theta1: f64,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error(transparent)]
    Spec(#[from] SpecFileError),
    #[error(transparent)]
    Stat(#[from] StatError),
    #[error(transparent)]
    Sampler(#[from] SamplerError),
    #[error(transparent)]
    Estim(#[from] EstimError),
    #[error(transparent)]
    Gof(#[from] GofError),
    #[error(transparent)]
    Direct(#[from] DirectError),
    #[error("failed to write {0}: {1}")]
    Output(String, std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Graph(_) => 3,
            CliError::Transform(_) => 4,
            CliError::Spec(_) | CliError::Stat(_) => 5,
            CliError::Sampler(_) => 6,
            CliError::Estim(_) => 7,
            CliError::Gof(_) => 8,
            CliError::Direct(_) => 9,
            CliError::Output(_, _) => 10,
        }
    }
}

#[derive(Serialize)]
struct RunLog {
    subcommand: String,
    version: String,
    config: serde_json::Value,
    wall_time_ms: u128,
    status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    warnings: Vec<String>,
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Output(path.display().to_string(), e))
}

fn threads_from(run: &RunArgs) -> usize {
    run.threads
        .or_else(|| {
            std::env::var("NONML_THREADS")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(1)
        .max(1)
}

fn require_seed(run: &RunArgs, spec_seed: Option<u64>) -> Result<u64, CliError> {
    run.seed.or(spec_seed).ok_or_else(|| {
        CliError::Usage("a --seed is required for simulation-based subcommands".to_string())
    })
}

fn load_network(input: &InputArgs) -> Result<(MultilevelNetwork, Vec<String>), CliError> {
    match (&input.manifest, &input.transformed) {
        (Some(path), None) => {
            let data = load_manifest(path)?;
            let pi = PairIndex::build(&data.reports, data.criterion.as_ref(), &data.policy)?;
            let (ml, drops) = MultilevelNetwork::from_data(
                &data.reports,
                &data.social,
                data.criterion.as_ref(),
                pi,
            )?;
            let mut warnings = Vec::new();
            if drops.total > 0 {
                for (pair, reporters) in &drops.by_pair {
                    warnings.push(format!(
                        "dropped report edge {pair} (outside the pair index) from: {}",
                        reporters.join(", ")
                    ));
                }
            }
            Ok((ml, warnings))
        }
        (None, Some(dir)) => Ok((load_transform_outputs(dir)?, Vec::new())),
        _ => Err(CliError::Usage(
            "provide exactly one of --manifest or --transformed".to_string(),
        )),
    }
}

fn fmt(v: f64) -> String {
    if v.is_nan() {
        "NaN".to_string()
    } else {
        format!("{v}")
    }
}

fn run_command(cli: &Cli) -> Result<(PathBuf, serde_json::Value, Vec<String>), CliError> {
    match &cli.command {
        Command::Transform { manifest, out } => {
            let input = InputArgs {
                manifest: Some(manifest.clone()),
                transformed: None,
            };
            let (ml, warnings) = load_network(&input)?;
            write_transform_outputs(out, &ml).map_err(CliError::Graph)?;
            let config = serde_json::json!({
                "manifest": manifest.display().to_string(),
                "out": out.display().to_string(),
            });
            Ok((out.clone(), config, warnings))
        }
        Command::Stats {
            input,
            spec,
            out,
            summary,
        } => {
            let (ml, warnings) = load_network(input)?;
            let spec_file = ModelSpecFile::load(spec)?;
            if spec_file.effects.is_empty() {
                return Err(CliError::Usage("no statistics requested".to_string()));
            }
            let ids = spec_file.statistic_ids()?;
            let values = compute_statistics(&ml, &ids)?;
            std::fs::create_dir_all(out)
                .map_err(|e| CliError::Output(out.display().to_string(), e))?;
            let mut csv = String::from("statistic,value\n");
            for (id, v) in values.entries() {
                csv.push_str(&format!("{},{}\n", id.name(), fmt(*v)));
            }
            write_text(&out.join("stats.csv"), &csv)?;
            if *summary {
                let mut csv = String::from("statistic,value\n");
                for row in summary_stats(&ml) {
                    csv.push_str(&format!("{},{}\n", row.name, fmt(row.value)));
                }
                write_text(&out.join("summary.csv"), &csv)?;
            }
            let config = serde_json::json!({
                "spec": spec.display().to_string(),
                "out": out.display().to_string(),
                "statistics": ids.len(),
            });
            Ok((out.clone(), config, warnings))
        }
        Command::Simulate { input, run } => {
            let (ml, mut warnings) = load_network(input)?;
            let spec_file = ModelSpecFile::load(&run.spec)?;
            let spec = spec_file.to_model_spec()?;
            let seed = require_seed(run, spec_file.seed)?;
            let free = spec.free_cells(&ml)?.len();
            let burnin = run
                .burnin
                .or(spec_file.burnin)
                .unwrap_or_else(|| default_burnin(free));
            let thin = run
                .thin
                .or(spec_file.thin)
                .unwrap_or_else(|| default_thin(free));
            let samples = run.samples.or(spec_file.samples).unwrap_or(1000);
            let batch = simulate(&ml, &spec, burnin, thin, samples, seed)?;
            warnings.extend(batch.warnings.clone());
            std::fs::create_dir_all(&run.out)
                .map_err(|e| CliError::Output(run.out.display().to_string(), e))?;
            let mut csv = String::new();
            let names: Vec<&str> = spec.effects.iter().map(|(id, _)| id.name()).collect();
            csv.push_str(&names.join(","));
            csv.push('\n');
            for row in &batch.stat_matrix {
                let cells: Vec<String> = row.iter().map(|v| fmt(*v)).collect();
                csv.push_str(&cells.join(","));
                csv.push('\n');
            }
            write_text(&run.out.join("samples.csv"), &csv)?;
            let config = serde_json::json!({
                "spec": run.spec.display().to_string(),
                "seed": seed,
                "burnin": burnin,
                "thin": thin,
                "samples": samples,
            });
            Ok((run.out.clone(), config, warnings))
        }
        Command::Estimate { input, run } => {
            let (ml, mut warnings) = load_network(input)?;
            let spec_file = ModelSpecFile::load(&run.spec)?;
            let spec = spec_file.to_model_spec()?;
            let seed = require_seed(run, spec_file.seed)?;
            let options = FitOptions {
                burnin: run.burnin,
                thin: run.thin,
                phase3_samples: run.samples.unwrap_or(1000),
                ..FitOptions::default()
            };
            let fit = fit_mom(&ml, &spec, &options, seed)?;
            std::fs::create_dir_all(&run.out)
                .map_err(|e| CliError::Output(run.out.display().to_string(), e))?;
            let fit_json = serde_json::json!({
                "converged": fit.converged,
                "theta": fit.theta_hat,
                "std_errors": fit.std_errors,
                "conv_t_ratios": fit.conv_t_ratios,
                "info_matrix": fit.info_matrix,
                "phase_log": fit.phase_log,
            });
            write_text(
                &run.out.join("fit.json"),
                &serde_json::to_string_pretty(&fit_json).expect("fit serializes"),
            )?;
            let mut csv = String::from("effect,parameter,stderr,significant\n");
            for (k, (id, _)) in spec.effects.iter().enumerate() {
                let significant = fit.theta_hat[k].abs() > 2.0 * fit.std_errors[k];
                csv.push_str(&format!(
                    "{},{},{},{}\n",
                    id.name(),
                    fmt(fit.theta_hat[k]),
                    fmt(fit.std_errors[k]),
                    significant
                ));
            }
            write_text(&run.out.join("estimates.csv"), &csv)?;
            if !fit.converged {
                warnings.push("estimation did not converge".to_string());
            }
            let config = serde_json::json!({
                "spec": run.spec.display().to_string(),
                "seed": seed,
                "phase3_samples": options.phase3_samples,
            });
            Ok((run.out.clone(), config, warnings))
        }
        Command::Gof {
            input,
            run,
            effects_only,
        } => {
            let (ml, mut warnings) = load_network(input)?;
            let spec_file = ModelSpecFile::load(&run.spec)?;
            let spec = spec_file.to_model_spec()?;
            let seed = require_seed(run, spec_file.seed)?;
            let free = spec.free_cells(&ml)?.len();
            let burnin = run
                .burnin
                .or(spec_file.burnin)
                .unwrap_or_else(|| default_burnin(free));
            let thin = run
                .thin
                .or(spec_file.thin)
                .unwrap_or_else(|| default_thin(free));
            let samples = run.samples.or(spec_file.samples).unwrap_or(500);
            let threads = threads_from(run);
            let aux = if *effects_only {
                spec.ids()
            } else {
                all_statistic_ids()
            };
            let has_colouring = ml.d().contains(&1);
            let table = gof(
                &ml,
                &spec,
                &aux,
                has_colouring,
                samples,
                burnin,
                thin,
                seed,
                threads,
            )?;
            warnings.extend(table.warnings.clone());
            std::fs::create_dir_all(&run.out)
                .map_err(|e| CliError::Output(run.out.display().to_string(), e))?;
            let mut csv = String::from("statistic,observed,mean,sd,t-ratio\n");
            for row in &table.rows {
                csv.push_str(&format!(
                    "{},{},{},{},{}\n",
                    row.name,
                    fmt(row.observed),
                    fmt(row.mean),
                    fmt(row.sd),
                    fmt(row.t_ratio)
                ));
            }
            write_text(&run.out.join("gof.csv"), &csv)?;
            let config = serde_json::json!({
                "spec": run.spec.display().to_string(),
                "seed": seed,
                "burnin": burnin,
                "thin": thin,
                "samples": samples,
                "threads": threads,
                "aux_statistics": aux.len(),
            });
            Ok((run.out.clone(), config, warnings))
        }
        Command::Direct {
            manifest,
            out,
            alaam_pair,
            theta0,
            theta1,
        } => {
            let data = load_manifest(manifest)?;
            let y = social_matrix(&data.reports, &data.social)?;
            std::fs::create_dir_all(out)
                .map_err(|e| CliError::Output(out.display().to_string(), e))?;
            let n = data.reports.reporter_count();
            let mut csv = String::from(
                "reporter_i,reporter_j,entrainment,exchange,entrainment_gated,exchange_gated\n",
            );
            for i in 0..n {
                for j in 0..n {
                    if i == j {
                        continue;
                    }
                    let stat = |kind, gated| {
                        multiplex_statistic(
                            &data.reports,
                            &y,
                            &MultiplexStatSpec {
                                kind,
                                pair: (i, j),
                                y_gated: gated,
                            },
                        )
                    };
                    let ent = stat(MultiplexKind::Entrainment, false)?;
                    let exc = stat(MultiplexKind::Exchange, false)?;
                    let ent_g = stat(MultiplexKind::Entrainment, true)?;
                    let exc_g = stat(MultiplexKind::Exchange, true)?;
                    csv.push_str(&format!(
                        "{},{},{},{},{},{}\n",
                        data.reports.reporters()[i],
                        data.reports.reporters()[j],
                        ent,
                        exc,
                        ent_g,
                        exc_g
                    ));
                }
            }
            write_text(&out.join("multiplex.csv"), &csv)?;
            if let Some(pair) = alaam_pair {
                let (a, b) = pair.split_once(',').ok_or_else(|| {
                    CliError::Usage("--alaam-pair expects `label,label`".to_string())
                })?;
                let u = data
                    .reports
                    .universe_index(a.trim())
                    .ok_or_else(|| CliError::Usage(format!("unknown node `{a}`")))?;
                let v = data
                    .reports
                    .universe_index(b.trim())
                    .ok_or_else(|| CliError::Usage(format!("unknown node `{b}`")))?;
                let mut csv = String::from("reporter,probability\n");
                for i in 0..n {
                    let p = alaam_conditional_probability(
                        &data.reports,
                        &y,
                        (u, v),
                        i,
                        *theta0,
                        *theta1,
                    )?;
                    csv.push_str(&format!("{},{}\n", data.reports.reporters()[i], p));
                }
                write_text(&out.join("alaam.csv"), &csv)?;
            }
            let config = serde_json::json!({
                "manifest": manifest.display().to_string(),
                "alaam_pair": alaam_pair,
                "theta0": theta0,
                "theta1": theta1,
            });
            Ok((out.clone(), config, Vec::new()))
        }
    }
}

fn subcommand_name(cli: &Cli) -> &'static str {
    match cli.command {
        Command::Transform { .. } => "transform",
        Command::Stats { .. } => "stats",
        Command::Simulate { .. } => "simulate",
        Command::Estimate { .. } => "estimate",
        Command::Gof { .. } => "gof",
        Command::Direct { .. } => "direct",
    }
}

fn out_dir_of(cli: &Cli) -> PathBuf {
    match &cli.command {
        Command::Transform { out, .. } => out.clone(),
        Command::Stats { out, .. } => out.clone(),
        Command::Simulate { run, .. } => run.out.clone(),
        Command::Estimate { run, .. } => run.out.clone(),
        Command::Gof { run, .. } => run.out.clone(),
        Command::Direct { out, .. } => out.clone(),
    }
}

fn main() {
    let cli = Cli::parse();
    let started = Instant::now();
    let out_dir = out_dir_of(&cli);
    let result = run_command(&cli);
    let wall = started.elapsed().as_millis();
    let (status, error, config, warnings, code) = match &result {
        Ok((_, config, warnings)) => ("ok".to_string(), None, config.clone(), warnings.clone(), 0),
        Err(e) => (
            "error".to_string(),
            Some(e.to_string()),
            serde_json::json!({}),
            Vec::new(),
            e.exit_code(),
        ),
    };
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    let log = RunLog {
        subcommand: subcommand_name(&cli).to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        config,
        wall_time_ms: wall,
        status,
        error: error.clone(),
        warnings,
    };
    // The run log is written even when the run failed.
    if std::fs::create_dir_all(&out_dir).is_ok() {
        let _ = std::fs::write(
            out_dir.join("run_log.json"),
            serde_json::to_string_pretty(&log).expect("log serializes"),
        );
    }
    if let Some(msg) = error {
        eprintln!("error: {msg}");
    }
    std::process::exit(code);
}
