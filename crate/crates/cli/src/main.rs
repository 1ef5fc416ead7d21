use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cmvlab::{parse_document, run_scenario, sweep, Backend, CliError, Report, ScenarioConfig, ScenarioKind, Status};

#[derive(Parser)]
#[command(name = "cmvlab", version, about = "Run CMV ad-condition scenarios from JSON configs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve (ad_n C)Ω = 0 for a patterned Hermitian Ω
    Solve(Common),
    /// Check the ad-operator identities on one (α, Ω, n)
    Verify(Common),
    /// Check the generalized eigenvector basis of C at a point z
    Kernel(Common),
    /// Recover the differential operator D with D x = Ω x
    Reconstruct(Common),
    /// Dump the orthonormal Laurent polynomials
    Olp(Common),
    /// Run every scenario in the config, in parallel
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Worker threads
        #[arg(long, default_value_t = 4)]
        jobs: usize,
    },
}

#[derive(Args)]
struct Common {
    /// Scenario file (one object, a list, or {"scenarios": [...]})
    #[arg(long)]
    config: PathBuf,
    /// Override the backend of every scenario
    #[arg(long, value_enum)]
    backend: Option<BackendArg>,
    /// Override the window size of every scenario
    #[arg(long)]
    window: Option<usize>,
    /// Write the report here instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print one line per scenario to standard output
    #[arg(long)]
    summary: bool,
    /// Record wall-clock time in the report (makes it nondeterministic)
    #[arg(long)]
    timing: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Exact,
    Float,
}

fn load(common: &Common, kind: Option<ScenarioKind>) -> Result<Vec<ScenarioConfig>, CliError> {
    let text = fs::read_to_string(&common.config).map_err(|source| CliError::Read {
        path: common.config.clone(),
        source,
    })?;
    let mut configs = parse_document(&text).map_err(|source| CliError::Parse {
        path: common.config.clone(),
        source,
    })?;
    if configs.is_empty() {
        return Err(CliError::invalid("scenarios", "no scenarios in config"));
    }
    for c in &mut configs {
        if let Some(b) = common.backend {
            c.backend = match b {
                BackendArg::Exact => Backend::Exact,
                BackendArg::Float => Backend::Float,
            };
        }
        if common.window.is_some() {
            c.window = common.window;
        }
        if let Some(k) = kind {
            match c.kind {
                None => c.kind = Some(k),
                Some(found) if found != k => {
                    return Err(CliError::invalid(
                        "kind",
                        format!("`{}` scenario given to the {} command", found.name(), k.name()),
                    ))
                }
                Some(_) => {}
            }
        } else if c.kind.is_none() {
            return Err(CliError::invalid("kind", "sweep scenarios must name their kind"));
        }
    }
    Ok(configs)
}

fn write_reports(common: &Common, reports: &[Report], single: bool) -> Result<(), CliError> {
    let text = if single {
        serde_json::to_string_pretty(&reports[0])
    } else {
        serde_json::to_string_pretty(reports)
    }
    .expect("reports serialize");
    let target = common
        .out
        .clone()
        .or_else(|| single.then(|| reports[0].scenario.output.clone()).flatten());
    // a closed pipe on stdout is not an error worth reporting
    let mut stdout = std::io::stdout().lock();
    match target {
        Some(path) => write_file(&path, &text)?,
        None if !common.summary => {
            let _ = writeln!(stdout, "{text}");
        }
        None => {}
    }
    if common.summary {
        for r in reports {
            let _ = writeln!(stdout, "{}", r.summary_line());
        }
    }
    Ok(())
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, format!("{text}\n")).map_err(|source| CliError::Write {
        path: path.to_path_buf(),
        source,
    })
}

fn exit_for(e: &CliError) -> ExitCode {
    eprintln!("cmvlab: {e}");
    ExitCode::from(if e.is_config_error() { 2 } else { 1 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (common, kind, jobs) = match &cli.command {
        Command::Solve(c) => (c, Some(ScenarioKind::Solve), None),
        Command::Verify(c) => (c, Some(ScenarioKind::VerifyIdentities), None),
        Command::Kernel(c) => (c, Some(ScenarioKind::VerifyKernel), None),
        Command::Reconstruct(c) => (c, Some(ScenarioKind::Reconstruct), None),
        Command::Olp(c) => (c, Some(ScenarioKind::OlpDump), None),
        Command::Sweep { common, jobs } => (common, None, Some(*jobs)),
    };
    let configs = match load(common, kind) {
        Ok(c) => c,
        Err(e) => return exit_for(&e),
    };

    let reports = match jobs {
        Some(jobs) => sweep(&configs, jobs, common.timing),
        None => {
            if configs.len() != 1 {
                return exit_for(&CliError::invalid(
                    "scenarios",
                    format!("expected one scenario, found {}; use `sweep`", configs.len()),
                ));
            }
            match run_scenario(&configs[0], common.timing) {
                Ok(r) => vec![r],
                Err(e) => return exit_for(&e),
            }
        }
    };
    if let Err(e) = write_reports(common, &reports, jobs.is_none()) {
        return exit_for(&e);
    }

    if reports.iter().any(|r| r.status == Status::Invalid) {
        ExitCode::from(2)
    } else if reports.iter().all(|r| r.status == Status::Ok) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
