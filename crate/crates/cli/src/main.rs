mod angle;
mod cli;
mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::Parser;
use fmtrack_core::Execution;

use cli::{Cli, Command};
use config::Layer;

/// Exit status for runs aborted by a diverging filter or degenerate input.
const EXIT_ABORTED: u8 = 3;

fn run(cli: Cli) -> anyhow::Result<()> {
    let file = config::load(cli.config.as_deref())?;
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    match cli.command {
        Command::Track(a) => commands::track(a, file.track, exec),
        Command::Lpc(a) => commands::lpc(a.or(file.lpc), exec),
        Command::Analyze(a) => commands::analyze(a.or(file.analyze)),
        Command::Surface(a) => commands::surface(a.or(file.surface), exec),
        Command::Spectrogram(a) => commands::spectrogram(a.or(file.spectrogram), exec),
        Command::Synth(a) => commands::synth(a.or(file.synth)),
        Command::Complexity(a) => commands::complexity(a.or(file.complexity)),
        Command::Converge(a) => commands::converge(a.or(file.converge)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = cli.command.name();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("fmtrack {name}: error: {err:#}");
            let aborted = err.chain().any(|cause| {
                matches!(
                    cause.downcast_ref::<fmtrack_core::Error>(),
                    Some(fmtrack_core::Error::Diverged { .. } | fmtrack_core::Error::DegenerateAutocorrelation(_))
                )
            });
            ExitCode::from(if aborted { EXIT_ABORTED } else { 1 })
        }
    }
}
