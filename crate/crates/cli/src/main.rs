//! `sigma`: command-line driver for workspace files.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use sigma_core::catalog::catalog;
use sigma_core::report::{run, Command, CommandKind, EXIT_ERROR};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Cmd {
    Sigma1,
    Sigma2,
    Omega1,
    Reid,
    Sample,
    BallEvidence,
    Certify,
    FindCert,
    Validate,
    /// Print the workspace (catalog plus --workspace file) and exit.
    Catalog,
}

/// Decide and corroborate BNS Σ¹/Σ² membership for wreath and direct products.
///
/// Exit status: 0 In / certified / success, 3 Out, 4 Unknown or inconclusive,
/// 1 error.
#[derive(Debug, Parser)]
#[command(name = "sigma", version)]
struct Cli {
    #[arg(value_enum)]
    command: Cmd,
    /// Group name from the catalog or the workspace file.
    #[arg(long)]
    group: Option<String>,
    /// Character name, or an inline vector like "[1, -1/2]".
    #[arg(long = "char")]
    character: Option<String>,
    /// Workspace file (`.sigws`) parsed on top of the built-in catalog.
    #[arg(long)]
    workspace: Option<PathBuf>,
    #[arg(long, default_value_t = 8)]
    radius: u32,
    #[arg(long, default_value_t = 2)]
    margin: u32,
    #[arg(long, default_value_t = 3)]
    resolution: u32,
    /// 1 or 2, for `sample`.
    #[arg(long, default_value_t = 1)]
    level: u8,
    #[arg(long, default_value_t = 3)]
    max_t_len: usize,
    #[arg(long, default_value_t = 5)]
    max_w_len: usize,
    /// Certificate for `certify`: a JSON file, or inline JSON.
    #[arg(long)]
    cert: Option<String>,
    /// Emit the JSON report instead of text.
    #[arg(long)]
    json: bool,
}

fn fail(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_ERROR as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut ws = catalog();
    if let Some(path) = &cli.workspace {
        let text = match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => return fail(format!("{}: {e}", path.display())),
        };
        if let Err(e) = ws.extend_from(&text) {
            return fail(format!("{}: {e}", path.display()));
        }
    }
    let kind = match cli.command {
        Cmd::Catalog => {
            print!("{}", ws.to_text());
            return ExitCode::SUCCESS;
        }
        Cmd::Sigma1 => CommandKind::Sigma1,
        Cmd::Sigma2 => CommandKind::Sigma2,
        Cmd::Omega1 => CommandKind::Omega1,
        Cmd::Reid => CommandKind::Reid,
        Cmd::Sample => CommandKind::Sample,
        Cmd::BallEvidence => CommandKind::BallEvidence,
        Cmd::Certify => CommandKind::Certify,
        Cmd::FindCert => CommandKind::FindCert,
        Cmd::Validate => CommandKind::Validate,
    };
    let Some(group) = cli.group else {
        return fail("this command needs --group");
    };
    let certificate = match cli.cert {
        Some(c) if c.trim_start().starts_with('{') => Some(c),
        Some(path) => match std::fs::read_to_string(&path) {
            Ok(t) => Some(t),
            Err(e) => return fail(format!("{path}: {e}")),
        },
        None => None,
    };
    let cmd = Command {
        kind,
        group,
        character: cli.character,
        radius: cli.radius,
        margin: cli.margin,
        resolution: cli.resolution,
        level: cli.level,
        max_t_len: cli.max_t_len,
        max_w_len: cli.max_w_len,
        certificate,
    };
    match run(&cmd, &ws) {
        Ok(report) => {
            if cli.json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.text);
            }
            ExitCode::from(report.exit_code as u8)
        }
        Err(e) => fail(e),
    }
}
