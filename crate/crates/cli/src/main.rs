use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use steklov_cli::{lemmas, report, run, tabulate, ExperimentConfig, RunOptions, EXIT_CONFIG, EXIT_FAIL, EXIT_PASS};
use steklov_core::radial::SpaceForm;

#[derive(Parser)]
#[command(name = "steklov", version, about = "Steklov eigenvalue experiments and isoperimetric certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment config and write CSV reports.
    Run {
        config: PathBuf,
        /// Refinement level count (overrides the config).
        #[arg(long)]
        levels: Option<u32>,
        /// Output directory (overrides `output_path`).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Halve every certificate tolerance.
        #[arg(long)]
        strict: bool,
    },
    /// Tabulate radial ball quantities as CSV.
    TabulateBalls {
        #[arg(long)]
        space: SpaceForm,
        #[arg(long, value_delimiter = ',', default_value = "2")]
        n: Vec<usize>,
        #[arg(long = "R", value_delimiter = ',', default_value = "1")]
        radius: Vec<f64>,
        /// Write to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the radial profile lemma on a grid and at random radii.
    CheckLemmas {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_CONFIG)
        }
    }
}

fn dispatch(command: Command) -> anyhow::Result<u8> {
    match command {
        Command::Run { config, levels, out, strict } => {
            let text = std::fs::read_to_string(&config).with_context(|| format!("reading {}", config.display()))?;
            let parsed = match ExperimentConfig::parse(&text) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("{}: {e}", config.display());
                    return Ok(EXIT_CONFIG);
                }
            };
            let result = match run(&parsed, &text, RunOptions { levels, strict }) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("{}: {e}", config.display());
                    return Ok(EXIT_CONFIG);
                }
            };
            let dir = out.or(parsed.output_path.clone()).unwrap_or_else(|| PathBuf::from("steklov-results"));
            report::write_outputs(&result, &dir).with_context(|| format!("writing to {}", dir.display()))?;
            for d in &result.domains {
                match &d.outcome {
                    Ok(r) => {
                        let mus: Vec<String> = r.spectrum.eigenvalues.iter().map(|m| format!("{m:.6}")).collect();
                        println!("[{}] {}: mu = {}", d.index, d.label, mus.join(" "));
                        for c in &r.reports {
                            println!("  {c}");
                        }
                    }
                    Err(e) => println!("[{}] {}: ERROR {e}", d.index, d.label),
                }
            }
            let failures = result.failures();
            println!("{failures} failures, {:.1}s, results in {}", result.wall_time_s, dir.display());
            Ok(result.exit_code())
        }
        Command::TabulateBalls { space, n, radius, out } => {
            let rows = match tabulate::tabulate_balls(space, &n, &radius) {
                Ok(rows) => rows,
                Err(e) => {
                    eprintln!("{e}");
                    return Ok(EXIT_CONFIG);
                }
            };
            let csv = tabulate::to_csv(&rows);
            match out {
                Some(path) => std::fs::write(&path, csv).with_context(|| format!("writing {}", path.display()))?,
                None => print!("{csv}"),
            }
            Ok(EXIT_PASS)
        }
        Command::CheckLemmas { seed, samples } => {
            let r = lemmas::check_lemmas(seed, samples);
            for v in r.violations.iter().take(20) {
                println!("violation: {v}");
            }
            println!("{} {} points checked, {} violations", if r.pass() { "PASS" } else { "FAIL" }, r.checked, r.violations.len());
            Ok(if r.pass() { EXIT_PASS } else { EXIT_FAIL })
        }
    }
}
