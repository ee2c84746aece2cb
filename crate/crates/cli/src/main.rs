use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use rickit::diagram::{parse_diagram, FamilyParams};
use rickit::scenarios::{self, emit_report, render_report, ReportFormat, RunOptions, ScenarioResult};

#[derive(Parser)]
#[command(name = "rickit", version, about = "Curvature and group diagram checks for cohomogeneity one spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Output {
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report format: json or csv.
    #[arg(long, default_value = "json")]
    format: String,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named scenario and report its criteria.
    Verify {
        scenario: String,
        /// Cheeger parameter (jacobi: omit for the product metric).
        #[arg(long)]
        l: Option<f64>,
        /// Sampling budget.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Equivalent diagrams per family (obstruction).
        #[arg(long)]
        trials: Option<usize>,
        /// A single diagram family (obstruction).
        #[arg(long)]
        family: Option<String>,
        /// Family parameter as key=value; repeatable.
        #[arg(long = "param", value_parser = parse_param)]
        params: Vec<(String, i64)>,
        #[command(flatten)]
        output: Output,
    },
    /// Obstruction verdict for a diagram written in the diagram DSL.
    Obstruct {
        #[arg(long)]
        file: PathBuf,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// List scenario ids with their default seeds.
    List,
}

fn parse_param(s: &str) -> Result<(String, i64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected key=value, got `{s}`"))?;
    let v = v.trim().parse::<i64>().map_err(|e| format!("parameter `{k}`: {e}"))?;
    Ok((k.trim().to_string(), v))
}

fn write(result: &ScenarioResult, output: &Output) -> Result<()> {
    let format: ReportFormat = output.format.parse()?;
    match &output.out {
        Some(path) => emit_report(std::slice::from_ref(result), path, format)
            .with_context(|| format!("writing {}", path.display()))?,
        None => print!("{}", render_report(std::slice::from_ref(result), format)?),
    }
    for c in &result.criteria {
        eprintln!("{} {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.observed);
    }
    eprintln!("{}: {} in {} ms", result.scenario, if result.passed() { "passed" } else { "FAILED" }, result.wall_ms);
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Verify { scenario, l, samples, seed, trials, family, params, output } => {
            // reject a bad format before spending time on the run
            output.format.parse::<ReportFormat>()?;
            let opts =
                RunOptions { l, samples, seed, trials, family, params: params.into_iter().collect::<FamilyParams>() };
            let result = scenarios::run(&scenario, &opts)?;
            write(&result, &output)?;
            Ok(result.passed())
        }
        Command::Obstruct { file, trials, seed, output } => {
            output.format.parse::<ReportFormat>()?;
            let text = std::fs::read_to_string(&file).with_context(|| format!("reading {}", file.display()))?;
            let parsed = parse_diagram(&text)?;
            for note in &parsed.notes {
                eprintln!("note: {note}");
            }
            let result = scenarios::run_obstruction_diagram(&parsed.diagram, trials, seed)?;
            write(&result, &output)?;
            Ok(result.passed())
        }
        Command::List => {
            for (name, seed) in scenarios::SCENARIOS {
                println!("{name}\t(seed {seed})");
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
