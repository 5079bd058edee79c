//! The `puq` command line: `run`, `repl`, `trace`, `bench` and `dump`.
//!
//! Exit codes: 0 success, 1 usage, 2 parse error, 3 evaluation error,
//! 4 budget exceeded. `PUQ_MAX_STEPS` overrides the default step budget.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::io::{BufRead, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::ast::{pretty_print, QuantKind};
use crate::eval::{Budget, Counters, EvalError, Session, DEFAULT_MAX_DEPTH, DEFAULT_MAX_STEPS};
use crate::parser::{parse_expr, parse_program, SourceProgram};
use crate::trace::{summary_line, LineSink};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_EVAL: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "puq", version, about = "Evaluate programs of evolving recursive definitions")]
pub struct CliConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate an expression and print its value.
    Run(RunArgs),
    /// Read expressions line by line against an evolving program.
    Repl(ReplArgs),
    /// Evaluate while streaming evaluation events.
    Trace(RunArgs),
    /// Compare counters and timing across quantifier modes.
    Bench(RunArgs),
    /// Print the parsed program and object store without evaluating.
    Dump(DumpArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Human,
    Machine,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Bq,
    Puq,
}

impl From<Mode> for QuantKind {
    fn from(mode: Mode) -> Self {
        match mode {
            Mode::Bq => QuantKind::Blind,
            Mode::Puq => QuantKind::Parallel,
        }
    }
}

#[derive(Debug, Args)]
pub struct BudgetArgs {
    /// Abort after this many evaluation steps.
    #[arg(long, env = "PUQ_MAX_STEPS", default_value_t = DEFAULT_MAX_STEPS)]
    pub max_steps: u64,
    /// Abort when this many calls are in progress at once.
    #[arg(long, default_value_t = DEFAULT_MAX_DEPTH)]
    pub max_depth: usize,
}

impl BudgetArgs {
    fn budget(&self) -> Budget {
        Budget::new(self.max_steps, self.max_depth)
    }
}

#[derive(Debug, Args)]
pub struct LoadArgs {
    /// Rewrite quantified definitions to this kind before evaluating.
    #[arg(long, value_enum)]
    pub force_mode: Option<Mode>,
    /// Restrict --force-mode to definitions of these functions.
    #[arg(long = "only", value_name = "NAME")]
    pub only: Vec<String>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Program file (`.puq`).
    pub file: PathBuf,
    /// Closed expression to evaluate, e.g. `fib(10)` or `/fib.fib(4)`.
    #[arg(long, short)]
    pub expr: String,
    /// Print the evolved program and store after the value.
    #[arg(long)]
    pub show_evolved: bool,
    /// `machine` prints `name=value` lines.
    #[arg(long, value_enum, default_value = "human")]
    pub output: Output,
    #[command(flatten)]
    pub load: LoadArgs,
    #[command(flatten)]
    pub budget: BudgetArgs,
}

#[derive(Debug, Args)]
pub struct ReplArgs {
    /// Program file to preload.
    pub file: Option<PathBuf>,
    #[command(flatten)]
    pub load: LoadArgs,
    #[command(flatten)]
    pub budget: BudgetArgs,
}

#[derive(Debug, Args)]
pub struct DumpArgs {
    /// Program file (`.puq`).
    pub file: PathBuf,
    #[command(flatten)]
    pub load: LoadArgs,
}

/// Streams the commands read and write.
pub struct Io<'a> {
    pub stdin: &'a mut dyn BufRead,
    pub stdout: &'a mut dyn Write,
    pub stderr: &'a mut dyn Write,
    /// Print a prompt in the REPL.
    pub interactive: bool,
}

/// Parses arguments and runs the command, returning the exit status.
pub fn run_cli<I, T>(args: I, io: &mut Io<'_>) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match CliConfig::try_parse_from(args) {
        Ok(config) => config,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(io.stderr, "{e}");
                EXIT_USAGE
            } else {
                let _ = write!(io.stdout, "{e}");
                EXIT_OK
            };
            return code;
        }
    };
    let result = match &config.command {
        Command::Run(args) => cmd_run(args, io),
        Command::Trace(args) => cmd_trace(args, io),
        Command::Bench(args) => cmd_bench(args, io),
        Command::Repl(args) => cmd_repl(args, io),
        Command::Dump(args) => cmd_dump(args, io),
    };
    match result {
        Ok(code) => code,
        Err(failure) => {
            let _ = writeln!(io.stderr, "{}", failure.message);
            failure.code
        }
    }
}

/// A diagnostic and the exit status it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn eval(e: &EvalError) -> Self {
        Failure {
            code: exit_code(e),
            message: format!("error: {e}"),
        }
    }
}

/// Exit status for an evaluation error.
pub fn exit_code(e: &EvalError) -> i32 {
    if e.is_budget() {
        EXIT_BUDGET
    } else {
        EXIT_EVAL
    }
}

fn load(file: &PathBuf, load: &LoadArgs) -> Result<SourceProgram, Failure> {
    let text = std::fs::read_to_string(file).map_err(|e| Failure {
        code: EXIT_USAGE,
        message: format!("error: cannot read {}: {e}", file.display()),
    })?;
    let source = parse_program(&text).map_err(|e| Failure {
        code: EXIT_PARSE,
        message: format!("{}:{e}", file.display()),
    })?;
    Ok(match load.force_mode {
        None => source,
        Some(mode) => {
            let only: BTreeSet<String> = load.only.iter().cloned().collect();
            source.force_kind(mode.into(), (!only.is_empty()).then_some(&only))
        }
    })
}

fn parse_query(text: &str) -> Result<crate::ast::Expr, Failure> {
    parse_expr(text).map_err(|e| Failure {
        code: EXIT_PARSE,
        message: format!("<expr>:{e}"),
    })
}

fn write_counters(out: &mut dyn Write, counters: &Counters) -> std::io::Result<()> {
    for (name, value) in counters.fields() {
        writeln!(out, "{name}={value}")?;
    }
    Ok(())
}

fn write_evolved(out: &mut dyn Write, session: &Session, output: Output) -> std::io::Result<()> {
    match output {
        Output::Human => {
            write!(out, "{}", pretty_print(session.program()))?;
            write!(out, "{}", session.store().dump())
        }
        Output::Machine => {
            for def in session.program().iter() {
                writeln!(out, "def={:?}", def.to_string())?;
            }
            for path in session.store().paths() {
                if let Some(node) = session.store().resolve(&path) {
                    for def in node.defs.iter() {
                        writeln!(out, "object={:?} def={:?}", path.to_string(), def.to_string())?;
                    }
                }
            }
            Ok(())
        }
    }
}

fn io_failure(e: std::io::Error) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: format!("error: {e}"),
    }
}

pub fn cmd_run(args: &RunArgs, io: &mut Io<'_>) -> Result<i32, Failure> {
    let source = load(&args.file, &args.load)?;
    let expr = parse_query(&args.expr)?;
    let mut session = Session::new(source.program, source.store, args.budget.budget());
    let (value, counters) = session.eval(&expr).map_err(|e| Failure::eval(&e))?;
    let out = &mut *io.stdout;
    match args.output {
        Output::Human => writeln!(out, "{value}"),
        Output::Machine => writeln!(out, "value={value}").and_then(|()| write_counters(out, &counters)),
    }
    .map_err(io_failure)?;
    if args.show_evolved {
        write_evolved(out, &session, args.output).map_err(io_failure)?;
    }
    Ok(EXIT_OK)
}

pub fn cmd_trace(args: &RunArgs, io: &mut Io<'_>) -> Result<i32, Failure> {
    let source = load(&args.file, &args.load)?;
    let expr = parse_query(&args.expr)?;
    let mut session = Session::new(source.program, source.store, args.budget.budget());
    let mut sink = LineSink::new(&mut *io.stdout);
    let result = session.eval_traced(&expr, Some(&mut sink));
    let out = sink.finish().map_err(io_failure)?;
    let (value, counters) = result.map_err(|e| Failure::eval(&e))?;
    writeln!(out, "value={value}").map_err(io_failure)?;
    writeln!(out, "{}", summary_line(&counters)).map_err(io_failure)?;
    if args.show_evolved {
        write_evolved(out, &session, args.output).map_err(io_failure)?;
    }
    Ok(EXIT_OK)
}

const BENCH_COLUMNS: [&str; 9] = [
    "steps",
    "clause_evals",
    "body_evals_bq",
    "body_evals_puq",
    "body_evals_ground",
    "memo_adds",
    "memo_hits",
    "peak_depth",
    "instantiations",
];

/// Evaluates the expression once per mode, sequentially, and prints one
/// row per mode.
pub fn cmd_bench(args: &RunArgs, io: &mut Io<'_>) -> Result<i32, Failure> {
    let base = load(&args.file, &LoadArgs { force_mode: None, only: args.load.only.clone() })?;
    let expr = parse_query(&args.expr)?;
    let modes = match args.load.force_mode {
        Some(mode) => vec![mode],
        None => vec![Mode::Bq, Mode::Puq],
    };
    let only: BTreeSet<String> = args.load.only.iter().cloned().collect();
    let only = (!only.is_empty()).then_some(&only);
    let mut status = EXIT_OK;
    let mut table: Vec<Vec<String>> = Vec::new();
    let mut lines: Vec<String> = Vec::new();
    for mode in modes {
        let source = base.force_kind(mode.into(), only);
        let mut session = Session::new(source.program, source.store, args.budget.budget());
        let start = Instant::now();
        let result = session.eval(&expr);
        let wall = start.elapsed();
        let mode_name = format!("{:?}", mode).to_lowercase();
        match (&result, args.output) {
            (Ok((value, counters)), Output::Machine) => {
                let mut row = format!("mode={mode_name} value={value}");
                for (name, v) in counters.fields() {
                    row.push_str(&format!(" {name}={v}"));
                }
                row.push_str(&format!(" wall_us={}", wall.as_micros()));
                lines.push(row);
            }
            (Ok((value, counters)), Output::Human) => {
                let fields = counters.fields();
                let get = |name: &str| fields.iter().find(|(k, _)| k == name).map_or(0, |(_, v)| *v);
                let mut row = vec![mode_name, value.to_string()];
                row.extend(BENCH_COLUMNS.iter().map(|col| get(col).to_string()));
                row.push(format!("{:.3}", wall.as_secs_f64() * 1e3));
                table.push(row);
            }
            (Err(e), output) => {
                if status == EXIT_OK {
                    status = exit_code(e);
                }
                let line = match output {
                    Output::Machine => format!("mode={mode_name} error={:?}", e.to_string()),
                    Output::Human => format!("{mode_name}: error: {e}"),
                };
                lines.push(line);
            }
        }
    }
    let out = &mut *io.stdout;
    if args.output == Output::Human {
        let header: Vec<String> = ["mode", "value"]
            .iter()
            .chain(&BENCH_COLUMNS)
            .chain(&["wall_ms"])
            .map(|s| s.to_string())
            .collect();
        let widths: Vec<usize> = (0..header.len())
            .map(|i| table.iter().chain([&header]).map(|r| r[i].len()).max().unwrap_or(0))
            .collect();
        for row in [&header].into_iter().chain(&table) {
            let cells: Vec<String> = row
                .iter()
                .zip(&widths)
                .map(|(cell, w)| format!("{cell:>w$}"))
                .collect();
            writeln!(out, "{}", cells.join("  ")).map_err(io_failure)?;
        }
    }
    for line in lines {
        writeln!(out, "{line}").map_err(io_failure)?;
    }
    Ok(status)
}

pub fn cmd_dump(args: &DumpArgs, io: &mut Io<'_>) -> Result<i32, Failure> {
    let source = load(&args.file, &args.load)?;
    write!(io.stdout, "{}{}", pretty_print(&source.program), source.store.dump()).map_err(io_failure)?;
    Ok(EXIT_OK)
}

const REPL_HELP: &str = "\
enter an expression to evaluate it against the evolving program
:program  print the current program
:store    print the current object store
:reset    restore the program and store to the loaded source
:quit     leave";

/// Reads expressions line by line. The program and store evolve across
/// inputs; errors are reported and the session continues.
pub fn cmd_repl(args: &ReplArgs, io: &mut Io<'_>) -> Result<i32, Failure> {
    let source = match &args.file {
        Some(file) => load(file, &args.load)?,
        None => SourceProgram::default(),
    };
    let mut session = Session::new(source.program, source.store, args.budget.budget());
    let mut line = String::new();
    loop {
        if io.interactive {
            write!(io.stdout, "puq> ").and_then(|()| io.stdout.flush()).map_err(io_failure)?;
        }
        line.clear();
        if io.stdin.read_line(&mut line).map_err(io_failure)? == 0 {
            break;
        }
        let input = line.trim();
        let out = &mut *io.stdout;
        let written = match input {
            "" => Ok(()),
            ":quit" | ":q" => break,
            ":program" => write!(out, "{}", pretty_print(session.program())),
            ":store" => write!(out, "{}", session.store().dump()),
            ":reset" => {
                session.reset();
                writeln!(out, "reset")
            }
            ":help" => writeln!(out, "{REPL_HELP}"),
            _ if input.starts_with(':') => writeln!(io.stderr, "unknown command {input}; try :help"),
            _ => match parse_expr(input) {
                Err(e) => writeln!(io.stderr, "<input>:{e}"),
                Ok(expr) => match session.eval(&expr) {
                    Ok((value, _)) => writeln!(out, "{value}"),
                    Err(e) => writeln!(io.stderr, "error: {e}"),
                },
            },
        };
        written.map_err(io_failure)?;
    }
    Ok(EXIT_OK)
}
