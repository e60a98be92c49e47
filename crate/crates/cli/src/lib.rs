//! Command-line front end: scenario validation, batch replay, an interactive
//! step loop and the HTTP service.
//!
//! Every command returns an exit status instead of exiting: 0 on success,
//! 1 for domain errors (bad documents, failed occurrences), 2 for I/O errors.

use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use occsim_core::{
    parse_scenario, parse_script, AgentLimit, Diagnostic, Matrix, ReactionSet, Scenario, Session,
    Slot,
};

pub mod render;
pub mod repl;

pub use render::Format;

pub const EXIT_OK: u8 = 0;
pub const EXIT_DOMAIN: u8 = 1;
pub const EXIT_IO: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "occsim", version, about = "Simulate story characters' emotions")]
pub struct Cli {
    #[command(flatten)]
    pub options: GlobalOptions,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Default, Args)]
pub struct GlobalOptions {
    /// Require 2 to 4 agents (default).
    #[arg(long, global = true, overrides_with = "no_strict_agents")]
    pub strict_agents: bool,
    /// Allow up to 8 agents.
    #[arg(long, global = true, overrides_with = "strict_agents")]
    pub no_strict_agents: bool,
    /// Replace a reaction matrix, as SLOT=FILE. Repeatable.
    #[arg(long = "matrix-override", global = true, value_name = "SLOT=FILE")]
    pub matrix_overrides: Vec<String>,
}

impl GlobalOptions {
    pub fn agent_limit(&self) -> AgentLimit {
        if self.no_strict_agents {
            AgentLimit::Relaxed
        } else {
            AgentLimit::Strict
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a scenario document.
    Validate { scenario: PathBuf },
    /// Replay a script against a scenario.
    Run {
        scenario: PathBuf,
        script: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Apply occurrences typed on standard input.
    Repl { scenario: PathBuf },
    /// Start the HTTP service.
    Serve {
        /// Directory of scenario documents offered by the service.
        #[arg(long)]
        scenario_dir: Option<PathBuf>,
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        /// Built UI bundle served at `/`.
        #[arg(long)]
        static_dir: Option<PathBuf>,
    },
    /// Print a materialized reaction matrix.
    Matrix { slot: Slot },
}

/// Error carrying its exit status and the message for standard error.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn io(path: &Path, err: std::io::Error) -> Failure {
        Failure {
            code: EXIT_IO,
            message: format!("{}: {err}", path.display()),
        }
    }

    pub fn domain(message: impl Into<String>) -> Failure {
        Failure {
            code: EXIT_DOMAIN,
            message: message.into(),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::io(path, e))
}

fn diagnostic_lines(path: &Path, diagnostics: &[Diagnostic]) -> String {
    diagnostics
        .iter()
        .map(|d| format!("{}:{d}", path.display()))
        .collect::<Vec<_>>()
        .join("\n")
}

/// Reads and validates a scenario; warnings go to `err`.
pub fn load_scenario(path: &Path, limit: AgentLimit, err: &mut dyn Write) -> Result<Scenario, Failure> {
    let text = read(path)?;
    match parse_scenario(&text, limit) {
        Ok(parsed) => {
            if !parsed.warnings.is_empty() {
                let _ = writeln!(err, "{}", diagnostic_lines(path, &parsed.warnings));
            }
            Ok(parsed.value)
        }
        Err(diagnostics) => Err(Failure::domain(diagnostic_lines(path, &diagnostics))),
    }
}

/// Builds the reaction set from `--matrix-override` arguments.
pub fn load_reactions(overrides: &[String]) -> Result<Arc<ReactionSet>, Failure> {
    if overrides.is_empty() {
        return Ok(ReactionSet::standard());
    }
    let mut matrices = Vec::with_capacity(overrides.len());
    for arg in overrides {
        let (slot, file) = arg
            .split_once('=')
            .ok_or_else(|| Failure::domain(format!("--matrix-override expects SLOT=FILE, got `{arg}`")))?;
        let slot: Slot = slot.parse().map_err(|e| Failure::domain(format!("{e}")))?;
        let path = Path::new(file);
        let matrix: Matrix = read(path)?
            .parse()
            .map_err(|e| Failure::domain(format!("{}: {e}", path.display())))?;
        matrices.push((slot, matrix));
    }
    ReactionSet::materialize(matrices)
        .map(Arc::new)
        .map_err(|e| Failure::domain(e.to_string()))
}

fn finish(result: Result<(), Failure>, err: &mut dyn Write) -> u8 {
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "{}", f.message);
            f.code
        }
    }
}

pub fn cmd_validate(path: &Path, options: &GlobalOptions, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let text = match read(path) {
        Ok(t) => t,
        Err(f) => return finish(Err(f), err),
    };
    match parse_scenario(&text, options.agent_limit()) {
        Ok(parsed) => {
            if !parsed.warnings.is_empty() {
                let _ = writeln!(err, "{}", diagnostic_lines(path, &parsed.warnings));
            }
            let _ = writeln!(out, "OK");
            EXIT_OK
        }
        Err(diagnostics) => {
            let _ = writeln!(out, "{}", diagnostic_lines(path, &diagnostics));
            EXIT_DOMAIN
        }
    }
}

/// Replays `script` and renders every step plus the final map.
pub fn run_to_string(
    scenario: &Path,
    script: &Path,
    format: Format,
    options: &GlobalOptions,
    err: &mut dyn Write,
) -> Result<String, Failure> {
    let reactions = load_reactions(&options.matrix_overrides)?;
    let scenario = load_scenario(scenario, options.agent_limit(), err)?;
    let text = read(script)?;
    let steps = parse_script(&text).map_err(|d| Failure::domain(diagnostic_lines(script, &d)))?;

    let mut session = Session::with_reactions(Arc::new(scenario), reactions);
    let mut diffs = Vec::with_capacity(steps.len());
    for step in &steps.steps {
        let diff = session.apply(step.occurrence.clone()).map_err(|e| {
            Failure::domain(format!(
                "{}:{}:1 {} {} (`{}`)",
                script.display(),
                step.line,
                e.code(),
                e,
                step.occurrence
            ))
        })?;
        diffs.push((step.line, diff));
    }
    let rendered: Vec<render::RunStep<'_>> = diffs
        .iter()
        .map(|(line, diff)| render::RunStep {
            line: *line,
            state_diff: diff,
        })
        .collect();
    Ok(render::run_output(format, &rendered, &session.emotional_map()))
}

pub fn cmd_run(
    scenario: &Path,
    script: &Path,
    format: Format,
    options: &GlobalOptions,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> u8 {
    let result = run_to_string(scenario, script, format, options, err).and_then(|text| {
        out.write_all(text.as_bytes())
            .map_err(|e| Failure::io(Path::new("<stdout>"), e))
    });
    finish(result, err)
}

pub fn cmd_repl(
    scenario: &Path,
    options: &GlobalOptions,
    input: &mut dyn BufRead,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> u8 {
    let result = load_reactions(&options.matrix_overrides).and_then(|reactions| {
        let scenario = load_scenario(scenario, options.agent_limit(), err)?;
        let session = Session::with_reactions(Arc::new(scenario), reactions);
        repl::run(session, input, out, err).map_err(|e| Failure::io(Path::new("<stdin>"), e))
    });
    finish(result, err)
}

pub fn cmd_matrix(slot: Slot, options: &GlobalOptions, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let result = load_reactions(&options.matrix_overrides).map(|set| {
        let _ = write!(out, "{}", set.matrix(slot));
    });
    finish(result, err)
}

pub fn cmd_serve(
    scenario_dir: Option<PathBuf>,
    host: &str,
    port: u16,
    static_dir: Option<PathBuf>,
    options: &GlobalOptions,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> u8 {
    let reactions = match load_reactions(&options.matrix_overrides) {
        Ok(r) => r,
        Err(f) => return finish(Err(f), err),
    };
    if let Some(dir) = &scenario_dir {
        if !dir.is_dir() {
            let _ = writeln!(err, "{}: not a directory", dir.display());
            return EXIT_IO;
        }
    }
    let runtime = match tokio::runtime::Runtime::new() {
        Ok(rt) => rt,
        Err(e) => {
            let _ = writeln!(err, "cannot start runtime: {e}");
            return EXIT_IO;
        }
    };
    let config = occsim_service::ServiceConfig {
        agent_limit: options.agent_limit(),
        reactions,
        scenario_dir,
        static_dir,
        ..Default::default()
    };
    runtime.block_on(async {
        let listener = match tokio::net::TcpListener::bind((host, port)).await {
            Ok(l) => l,
            Err(e) => {
                let _ = writeln!(err, "cannot bind {host}:{port}: {e}");
                return EXIT_DOMAIN;
            }
        };
        if let Ok(addr) = listener.local_addr() {
            let _ = writeln!(out, "listening on http://{addr}");
            let _ = out.flush();
        }
        match occsim_service::serve(listener, config).await {
            Ok(()) => EXIT_OK,
            Err(e) => {
                let _ = writeln!(err, "service stopped: {e}");
                EXIT_IO
            }
        }
    })
}

/// Dispatches a parsed command line.
pub fn execute(cli: Cli, input: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let options = &cli.options;
    match cli.command {
        Command::Validate { scenario } => cmd_validate(&scenario, options, out, err),
        Command::Run {
            scenario,
            script,
            format,
        } => cmd_run(&scenario, &script, format, options, out, err),
        Command::Repl { scenario } => cmd_repl(&scenario, options, input, out, err),
        Command::Serve {
            scenario_dir,
            port,
            host,
            static_dir,
        } => cmd_serve(scenario_dir, &host, port, static_dir, options, out, err),
        Command::Matrix { slot } => cmd_matrix(slot, options, out, err),
    }
}
