mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;
use ghzw_core::Error;

use args::{Cli, Command, TomoCommand};
use output::Output;

pub struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    pub fn validation(msg: impl Into<String>) -> Self {
        Self { code: 2, message: msg.into() }
    }

    pub fn convergence(msg: impl Into<String>) -> Self {
        Self { code: 3, message: msg.into() }
    }

    pub fn io(msg: impl Into<String>) -> Self {
        Self { code: 4, message: msg.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::OptimizerFailure(_) | Error::TooManyFailures { .. } => 3,
            Error::Io(_) => 4,
            _ => 2,
        };
        Self { code, message: e.to_string() }
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub struct Context {
    seed: Option<u64>,
    pub out: Output,
    /// Human-readable table replacing the key=value lines.
    pub table: Option<String>,
    used_seed: Option<u64>,
}

impl Context {
    /// Master seed, drawn from entropy on first use when `--seed` is absent.
    /// `data_on_stdout` routes the seed line to stderr.
    pub fn seed(&mut self, data_on_stdout: bool) -> u64 {
        let seed = *self.seed.get_or_insert_with(rand::random);
        self.used_seed = Some(seed);
        if data_on_stdout {
            eprintln!("seed={seed}");
        } else {
            self.out.put("seed", seed);
        }
        seed
    }
}

fn run(cli: &Cli, ctx: &mut Context) -> CliResult<()> {
    if let Some(k) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .map_err(|e| CliError::validation(format!("--threads: {e}")))?;
    }
    match &cli.command {
        Command::State(a) => commands::state(a, ctx),
        Command::Filter(a) => commands::filter(a, ctx),
        Command::Tomo(TomoCommand::Sim(a)) => commands::tomo_sim(a, ctx),
        Command::Tomo(TomoCommand::Reconstruct(a)) => commands::tomo_reconstruct(a, ctx),
        Command::Analyze(a) => commands::analyze(a, ctx),
        Command::Pipeline(a) => commands::pipeline(a, ctx),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut ctx = Context { seed: cli.seed, out: Output::default(), table: None, used_seed: None };
    let result = run(&cli, &mut ctx);
    match (ctx.table.take(), cli.json) {
        (Some(table), false) => {
            if let Some(seed) = ctx.used_seed {
                println!("seed={seed}");
            }
            println!("{table}");
        }
        _ if result.is_err() && ctx.out.is_empty() => {}
        _ => ctx.out.print(cli.json),
    }
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
