use std::io::{self, BufRead, BufReader, Write};
use std::net::TcpListener;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::mpsc;
use std::thread;

use clap::{Args, Parser, Subcommand};

use seqc::ast::Status;
use seqc::parser::{parse_program, Program};
use seqc::runtime::{parse_event_line, parse_event_script, EventInput, EventSource, SourceKind, TraceEntry};
use seqc::{pretty, session, Limits, Runner};

const EXIT_USAGE: u8 = 3;

#[derive(Parser)]
#[command(name = "seqc", version, about = "Run programs with switchable sequential-choice declarations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct LimitArgs {
    /// Maximum nesting of procedure unfolding.
    #[arg(long, default_value_t = 64)]
    max_unfold: usize,
    /// Maximum number of machine moves in one run.
    #[arg(long, default_value_t = 10_000)]
    max_moves: usize,
}

impl From<LimitArgs> for Limits {
    fn from(a: LimitArgs) -> Self {
        Limits {
            max_unfold: a.max_unfold,
            max_moves: a.max_moves.max(1),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run a program to a verdict.
    Run {
        file: PathBuf,
        /// Scripted events, one `esc <path>` per line.
        #[arg(long, conflicts_with = "interactive")]
        events: Option<PathBuf>,
        /// Read events from standard input while the program runs.
        #[arg(long)]
        interactive: bool,
        /// Print one line per machine move to standard error.
        #[arg(long)]
        trace: bool,
        /// Print the stability analysis at every loop head to standard error.
        #[arg(long)]
        explain_stability: bool,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Parse a program and report its initial status.
    Check {
        file: PathBuf,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Drive a program over the JSON-lines session protocol.
    Serve {
        file: PathBuf,
        /// Listen on a TCP address instead of using standard input/output.
        #[arg(long)]
        listen: Option<String>,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Print a program in canonical layout.
    Fmt {
        file: PathBuf,
        /// List every choice with its address instead.
        #[arg(long)]
        addresses: bool,
    },
}

fn read(path: &Path) -> Result<String, ExitCode> {
    std::fs::read_to_string(path).map_err(|e| {
        eprintln!("seqc: {}: {e}", path.display());
        ExitCode::from(EXIT_USAGE)
    })
}

fn load(path: &Path) -> Result<(String, Program), ExitCode> {
    let text = read(path)?;
    match parse_program(&text) {
        Ok(p) => Ok((text, p)),
        Err(e) => {
            eprintln!("seqc: {}:{e}", path.display());
            Err(ExitCode::from(EXIT_USAGE))
        }
    }
}

fn stdin_events() -> EventSource {
    let (tx, rx) = mpsc::channel();
    thread::spawn(move || {
        for line in io::stdin().lock().lines() {
            let Ok(line) = line else { break };
            let ev = if line.trim().is_empty() {
                Ok(Some(EventInput::Bare))
            } else {
                parse_event_line(&line)
            };
            match ev {
                Ok(Some(ev)) => {
                    if tx.send(ev).is_err() {
                        break;
                    }
                }
                Ok(None) => {}
                Err(msg) => eprintln!("seqc: {msg}"),
            }
        }
    });
    EventSource::Channel(SourceKind::Interactive, rx)
}

fn cmd_run(
    file: &Path,
    events: Option<&Path>,
    interactive: bool,
    trace: bool,
    explain: bool,
    limits: Limits,
) -> Result<ExitCode, ExitCode> {
    let (_, program) = load(file)?;
    let mut source = if interactive {
        stdin_events()
    } else if let Some(path) = events {
        let text = read(path)?;
        let evs = parse_event_script(&text).map_err(|e| {
            eprintln!("seqc: {}: {e}", path.display());
            ExitCode::from(EXIT_USAGE)
        })?;
        EventSource::scripted(evs)
    } else {
        EventSource::scripted([])
    };

    let runner = match Runner::new(program, limits) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("seqc: {e}");
            eprintln!("verdict: Failed");
            return Ok(ExitCode::from(1));
        }
    };
    let mut program_view = runner.state().program.clone();
    let stdout = io::stdout();
    let result = runner.run_with(&mut source, |entry| {
        match entry {
            TraceEntry::Status(report) => {
                if explain {
                    eprintln!("{report}");
                }
                if interactive && report.status == Status::UserMove {
                    eprint!("{}", pretty::address_listing(&program_view));
                    eprintln!("waiting for an event (esc <path>, or an empty line for the only choice)");
                }
            }
            TraceEntry::Move { output, .. } => {
                if trace {
                    eprintln!("{entry}");
                }
                if let Some(line) = output {
                    let mut out = stdout.lock();
                    let _ = writeln!(out, "{line}");
                    let _ = out.flush();
                }
            }
            TraceEntry::Event(r) => {
                program_view = r.new_program.clone();
                if trace {
                    eprintln!("{entry}");
                }
            }
            TraceEntry::Rejected(e) => eprintln!("seqc: {e}"),
        }
    });
    if let Some(diag) = &result.diagnostic {
        eprintln!("seqc: {diag}");
    }
    eprintln!("verdict: {}", result.verdict.name());
    Ok(ExitCode::from(result.verdict.exit_code() as u8))
}

fn cmd_check(file: &Path, limits: Limits) -> Result<ExitCode, ExitCode> {
    let (_, program) = load(file)?;
    let report = seqc::stability::explain(&program.decls, &program.goal, &seqc::Subst::new(), limits);
    match report {
        Ok(r) => {
            println!("{r}");
            Ok(ExitCode::SUCCESS)
        }
        Err(e) => {
            eprintln!("seqc: {e}");
            Ok(ExitCode::from(1))
        }
    }
}

fn cmd_serve(file: &Path, listen: Option<&str>, limits: Limits) -> Result<ExitCode, ExitCode> {
    let text = read(file)?;
    let result = match listen {
        None => session::serve(Some(&text), limits, io::stdin().lock(), io::stdout().lock()),
        Some(addr) => (|| {
            let listener = TcpListener::bind(addr)?;
            eprintln!("seqc: listening on {}", listener.local_addr()?);
            let (stream, peer) = listener.accept()?;
            eprintln!("seqc: session with {peer}");
            let reader = BufReader::new(stream.try_clone()?);
            session::serve(Some(&text), limits, reader, stream)
        })(),
    };
    match result {
        Ok(()) => Ok(ExitCode::SUCCESS),
        Err(e) => {
            eprintln!("seqc: {e}");
            Ok(ExitCode::from(1))
        }
    }
}

fn cmd_fmt(file: &Path, addresses: bool) -> Result<ExitCode, ExitCode> {
    let (_, program) = load(file)?;
    if addresses {
        print!("{}", pretty::address_listing(&program.decls));
    } else {
        print!("{}", pretty::file(&program));
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Run {
            file,
            events,
            interactive,
            trace,
            explain_stability,
            limits,
        } => cmd_run(
            file,
            events.as_deref(),
            *interactive,
            *trace,
            *explain_stability,
            (*limits).into(),
        ),
        Command::Check { file, limits } => cmd_check(file, (*limits).into()),
        Command::Serve { file, listen, limits } => cmd_serve(file, listen.as_deref(), (*limits).into()),
        Command::Fmt { file, addresses } => cmd_fmt(file, *addresses),
    };
    result.unwrap_or_else(|code| code)
}
