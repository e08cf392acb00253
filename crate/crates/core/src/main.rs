use clap::{Parser, Subcommand, ValueEnum};
use etabench::benchgen::{Family, SuiteSpec};
use etabench::elab::{check_program, Backend};
use etabench::harness::{self, BenchConfig, HarnessError};
use etabench::parser::{line_col, parse_program};
use std::io::IsTerminal;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "etabench", version, about = "Dependent type checker with syntactic and type-directed conversion")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Syntactic,
    Typed,
}

impl From<BackendArg> for Backend {
    fn from(b: BackendArg) -> Backend {
        match b {
            BackendArg::Syntactic => Backend::Syntactic,
            BackendArg::Typed => Backend::Typed,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendsArg {
    Syntactic,
    Typed,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Type-check a source file.
    Check {
        #[arg(long, value_enum, default_value = "syntactic")]
        backend: BackendArg,
        file: PathBuf,
    },
    /// Time both backends on a generated suite (or a `.ett` file).
    Bench {
        /// stlc, asymptotics, eta, etafree-random, or a path to a `.ett` file.
        #[arg(long)]
        suite: String,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        size: u64,
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long, value_enum, default_value = "both")]
        backends: BackendsArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        warmup: u64,
        /// Disable the spine-first comparison of equal top-level heads.
        #[arg(long)]
        no_speculate: bool,
    },
    /// Write a generated suite to a file.
    Gen {
        #[arg(long)]
        suite: String,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        size: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

struct Reporter {
    color: bool,
}

impl Reporter {
    fn new() -> Reporter {
        let enabled = std::env::var("ETABENCH_COLOR").map_or(true, |v| v != "0");
        Reporter { color: enabled && std::io::stderr().is_terminal() }
    }

    fn error(&self, msg: impl std::fmt::Display) {
        if self.color {
            eprintln!("\x1b[1;31merror\x1b[0m: {msg}");
        } else {
            eprintln!("error: {msg}");
        }
    }

    /// `rendered` already carries position and severity.
    fn diagnostic(&self, origin: &str, rendered: &str) {
        if self.color {
            eprintln!("\x1b[1m{origin}:\x1b[0m{rendered}");
        } else {
            eprintln!("{origin}:{rendered}");
        }
    }
}

const EXIT_TYPE_ERROR: u8 = 1;
const EXIT_INPUT_ERROR: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let rep = Reporter::new();
    harness::with_large_stack(move || match cli.command {
        Command::Check { backend, file } => check(&rep, backend.into(), &file),
        Command::Bench { suite, size, trials, backends, seed, out, warmup, no_speculate } => {
            let backends = match backends {
                BackendsArg::Syntactic => vec![Backend::Syntactic],
                BackendsArg::Typed => vec![Backend::Typed],
                BackendsArg::Both => Backend::ALL.to_vec(),
            };
            let cfg =
                BenchConfig { trials: trials as usize, backends, warmup: warmup as usize, speculate: !no_speculate };
            bench(&rep, &suite, size as usize, seed, &cfg, out)
        }
        Command::Gen { suite, size, seed, out } => {
            let spec = match suite.parse::<Family>().and_then(|f| SuiteSpec::new(f, size as usize, seed)) {
                Ok(s) => s,
                Err(e) => {
                    rep.error(e);
                    return ExitCode::from(EXIT_INPUT_ERROR);
                }
            };
            match std::fs::write(&out, spec.generate()) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    rep.error(format_args!("{}: {e}", out.display()));
                    ExitCode::from(EXIT_INPUT_ERROR)
                }
            }
        }
    })
}

fn check(rep: &Reporter, backend: Backend, file: &PathBuf) -> ExitCode {
    let src = match std::fs::read_to_string(file) {
        Ok(s) => s,
        Err(e) => {
            rep.error(format_args!("{}: {e}", file.display()));
            return ExitCode::from(EXIT_INPUT_ERROR);
        }
    };
    let program = match parse_program(&src) {
        Ok(p) => p,
        Err(diags) => {
            for d in diags {
                rep.diagnostic(&file.display().to_string(), &d.render(&src));
            }
            return ExitCode::from(EXIT_INPUT_ERROR);
        }
    };
    match check_program(&program, backend) {
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            let (line, col) = line_col(&src, e.span.start);
            rep.error(format_args!("{}:{line}:{col}: {e}", file.display()));
            ExitCode::from(EXIT_TYPE_ERROR)
        }
    }
}

fn bench(rep: &Reporter, suite: &str, size: usize, seed: u64, cfg: &BenchConfig, out: Option<PathBuf>) -> ExitCode {
    let (name, src) = if suite.ends_with(".ett") {
        match std::fs::read_to_string(suite) {
            Ok(s) => (suite.to_string(), s),
            Err(e) => {
                rep.error(format_args!("{suite}: {e}"));
                return ExitCode::from(EXIT_INPUT_ERROR);
            }
        }
    } else {
        match suite.parse::<Family>().and_then(|f| SuiteSpec::new(f, size, seed)) {
            Ok(spec) => (spec.family.name().to_string(), spec.generate()),
            Err(e) => {
                rep.error(e);
                return ExitCode::from(EXIT_INPUT_ERROR);
            }
        }
    };
    let program = match parse_program(&src) {
        Ok(p) => p,
        Err(diags) => {
            for d in diags {
                rep.diagnostic(&name, &d.render(&src));
            }
            return ExitCode::from(EXIT_INPUT_ERROR);
        }
    };
    let result = harness::run_bench(&program, &name, size, cfg).and_then(|records| {
        if let Some(path) = &out {
            let file = std::fs::File::create(path)?;
            harness::write_csv(&records, std::io::BufWriter::new(file))?;
        }
        Ok(records)
    });
    match result {
        Ok(records) => {
            for s in harness::summarize(&records) {
                print!("{s}");
            }
            ExitCode::SUCCESS
        }
        Err(e @ HarnessError::UnstableVerdict { .. }) => {
            rep.error(e);
            ExitCode::from(3)
        }
        Err(e) => {
            rep.error(e);
            ExitCode::from(EXIT_INPUT_ERROR)
        }
    }
}
