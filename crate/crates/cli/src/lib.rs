//! Scenario-file front end for `pag-core`.

pub mod analysis;
pub mod error;
pub mod fixtures;
pub mod report;
pub mod scenario;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use clap::{Parser, Subcommand, ValueEnum};

pub use error::{CliError, ValidationFailure};
pub use report::{analyze, validate, Report};
pub use scenario::{Analysis, Command, Scenario};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "pag",
    version,
    about = "Locality analyses for Abelian gauge observables on finite cohomological data"
)]
pub struct Cli {
    #[arg(long, value_enum, default_value = "text", global = true)]
    pub format: Format,
    /// Exit with status 4 when a locality verdict is NOT injective.
    #[arg(long, global = true)]
    pub fail_on_nonlocal: bool,
    /// Number of scenario files processed concurrently.
    #[arg(long, default_value_t = 1, global = true)]
    pub parallel: usize,
    /// Directory searched for bundled fixture names before the built-in copies.
    #[arg(long, global = true)]
    pub fixtures_dir: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Sub,
}

#[derive(Debug, Subcommand)]
pub enum Sub {
    /// Build every object and morphism and report failures.
    Validate { scenarios: Vec<String> },
    /// Cohomology of the objects.
    Cohomology { scenarios: Vec<String> },
    /// Observable group, center and radical of the objects.
    Model { scenarios: Vec<String> },
    /// Locality verdicts of the morphisms.
    Locality { scenarios: Vec<String> },
    /// No-go certificates for the wedges listed in the scenario.
    Nogo { scenarios: Vec<String> },
    /// Quotient by the kernels over the terminal object.
    Hk { scenarios: Vec<String> },
    /// Separation of configuration pairs listed in the scenario.
    Separate { scenarios: Vec<String> },
    /// Products of Weyl symbols listed in the scenario.
    WeylEval { scenarios: Vec<String> },
    /// Every analysis listed in the scenario, optionally filtered.
    Run {
        #[arg(long, value_enum)]
        only: Option<Command>,
        scenarios: Vec<String>,
    },
    /// Names of the bundled fixtures.
    Fixtures,
}

/// Path on disk, or the name of a bundled fixture.
pub fn load_scenario(arg: &str, fixtures_dir: Option<&Path>) -> Result<(String, String), CliError> {
    let path = Path::new(arg);
    let io = |p: &Path, e| CliError::Io {
        path: p.display().to_string(),
        source: e,
    };
    if path.exists() {
        let text = std::fs::read_to_string(path).map_err(|e| io(path, e))?;
        return Ok((arg.to_string(), text));
    }
    if let Some(dir) = fixtures_dir {
        let p = dir.join(format!("{arg}.json"));
        if p.exists() {
            return Ok((
                arg.to_string(),
                std::fs::read_to_string(&p).map_err(|e| io(&p, e))?,
            ));
        }
    }
    match fixtures::get(arg) {
        Some(text) => Ok((arg.to_string(), text.to_string())),
        None => Err(io(
            path,
            std::io::Error::new(std::io::ErrorKind::NotFound, "no such file or fixture"),
        )),
    }
}

fn process(
    arg: &str,
    cli: &Cli,
    filter: Option<Command>,
    validate_only: bool,
) -> Result<Report, CliError> {
    let (name, text) = load_scenario(arg, cli.fixtures_dir.as_deref())?;
    if validate_only {
        let r = report::validate(&text, &name)?;
        if !r.validation.valid {
            return Err(CliError::Validation(r.validation.failures));
        }
        Ok(r)
    } else {
        report::analyze(&text, &name, filter)
    }
}

/// Runs `f` over `items` on up to `threads` workers, keeping input order.
fn parallel_map<T: Sync, R: Send>(
    items: &[T],
    threads: usize,
    f: impl Fn(&T) -> R + Sync,
) -> Vec<R> {
    let threads = threads.clamp(1, items.len().max(1));
    if threads == 1 {
        return items.iter().map(f).collect();
    }
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<R>>> = Mutex::new((0..items.len()).map(|_| None).collect());
    std::thread::scope(|s| {
        for _ in 0..threads {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= items.len() {
                    break;
                }
                let r = f(&items[i]);
                slots.lock().expect("no poisoned workers")[i] = Some(r);
            });
        }
    });
    slots
        .into_inner()
        .expect("no poisoned workers")
        .into_iter()
        .map(|r| r.expect("filled"))
        .collect()
}

/// Executes a parsed command line. Reports go to `out`, errors to `err`;
/// the return value is the process exit code.
pub fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let (scenarios, filter, validate_only) = match &cli.command {
        Sub::Fixtures => {
            for name in fixtures::NAMES {
                let _ = writeln!(out, "{name}");
            }
            return 0;
        }
        Sub::Validate { scenarios } => (scenarios, None, true),
        Sub::Cohomology { scenarios } => (scenarios, Some(Command::Cohomology), false),
        Sub::Model { scenarios } => (scenarios, Some(Command::Model), false),
        Sub::Locality { scenarios } => (scenarios, Some(Command::Locality), false),
        Sub::Nogo { scenarios } => (scenarios, Some(Command::Nogo), false),
        Sub::Hk { scenarios } => (scenarios, Some(Command::Hk), false),
        Sub::Separate { scenarios } => (scenarios, Some(Command::Separate), false),
        Sub::WeylEval { scenarios } => (scenarios, Some(Command::WeylEval), false),
        Sub::Run { only, scenarios } => (scenarios, *only, false),
    };
    if scenarios.is_empty() {
        let _ = writeln!(err, "error: no scenario given");
        return 2;
    }
    let results = parallel_map(scenarios, cli.parallel, |s| {
        process(s, cli, filter, validate_only)
    });

    let mut code = 0;
    let mut reports = Vec::new();
    let mut non_local = Vec::new();
    for (arg, r) in scenarios.iter().zip(results) {
        match r {
            Ok(r) => {
                non_local.extend(r.non_local().into_iter().map(|m| format!("{arg}:{m}")));
                reports.push(r);
            }
            Err(e) => {
                let _ = writeln!(err, "error: {arg}: {e}");
                if code == 0 {
                    code = e.exit_code();
                }
            }
        }
    }
    match cli.format {
        Format::Json => {
            let body = if reports.len() == 1 && scenarios.len() == 1 {
                report::to_json(&reports[0])
            } else {
                serde_json::to_string_pretty(&reports).expect("reports serialize")
            };
            let _ = writeln!(out, "{body}");
        }
        Format::Text => {
            for (i, r) in reports.iter().enumerate() {
                if i > 0 {
                    let _ = writeln!(out);
                }
                let _ = write!(out, "{}", report::to_text(r));
            }
        }
    }
    if code == 0 && cli.fail_on_nonlocal && !non_local.is_empty() {
        let e = CliError::NonLocal(non_local);
        let _ = writeln!(err, "error: {e}");
        code = e.exit_code();
    }
    code
}
