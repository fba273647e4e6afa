use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use nlgeval_cli::commands::{self, OutputFormat, Outcome, EXIT_INPUT};
use nlgeval_cli::config::RunConfig;
use nlgeval_cli::dataset::Format;
use nlgeval_cli::InputError;

/// Evaluate NLG output with word- and grammar-based metrics, correlate
/// metrics with human ratings, and profile or validate corpora.
#[derive(Parser)]
#[command(name = "nlgeval", version)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// `key = value` configuration file.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Override a configuration key; repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Report format.
    #[arg(long, global = true, value_name = "json|table")]
    format: Option<OutputFormat>,
    /// Dataset format.
    #[arg(long, global = true, default_value = "auto", value_name = "auto|jsonl|csv")]
    input_format: Format,
    /// Bootstrap seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Score every system output against its references.
    Score { dataset: PathBuf },
    /// Correlate metric scores with human ratings.
    Correlate {
        dataset: PathBuf,
        /// Reuse a saved `score` report instead of rescoring.
        #[arg(long, value_name = "PATH")]
        scores: Option<PathBuf>,
    },
    /// Lexical richness, syntactic complexity and content selection per dataset.
    CorpusStats {
        #[arg(required = true)]
        datasets: Vec<PathBuf>,
    },
    /// Run the quality gates over (MR, reference) pairs.
    Validate { dataset: PathBuf },
    /// Re-emit a dataset as JSONL.
    Export { dataset: PathBuf },
}

fn effective_config(common: &Common) -> Result<RunConfig, InputError> {
    let mut config = match &common.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    for o in &common.overrides {
        config.apply_override(o)?;
    }
    if let Some(seed) = common.seed {
        config.set("bootstrap.seed", &seed.to_string())?;
    }
    if let Some(jobs) = common.jobs {
        config.set("jobs", &jobs.to_string())?;
    }
    if let Some(format) = common.format {
        let name = match format {
            OutputFormat::Json => "json",
            OutputFormat::Table => "table",
        };
        config.set("output.format", name)?;
    }
    Ok(config)
}

fn run(cli: &Cli) -> Result<Outcome, InputError> {
    let config = effective_config(&cli.common)?;
    let jobs = config.usize("jobs")?;
    if jobs > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| InputError::Config(e.to_string()))?;
    }
    let out: OutputFormat = config.get("output.format").parse().map_err(InputError::Config)?;
    let format = cli.common.input_format;
    match &cli.command {
        Command::Score { dataset } => commands::score(dataset, format, &config, out),
        Command::Correlate { dataset, scores } => commands::correlate_cmd(dataset, format, scores.as_deref(), &config, out),
        Command::CorpusStats { datasets } => commands::corpus_stats_cmd(datasets, format, &config, out),
        Command::Validate { dataset } => commands::validate_cmd(dataset, format, &config, out),
        Command::Export { dataset } => commands::export(dataset, format),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT as u8 } else { 0 });
        }
    };
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INPUT as u8);
        }
    };
    for w in &outcome.warnings {
        eprintln!("warning: {w}");
    }
    let written = match &cli.common.out {
        Some(path) => std::fs::write(path, &outcome.text).map_err(|e| InputError::io(path, e)),
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(outcome.text.as_bytes())
                .map_err(|e| InputError::io(std::path::Path::new("<stdout>"), e))
        }
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_INPUT as u8);
    }
    ExitCode::from(outcome.exit as u8)
}
