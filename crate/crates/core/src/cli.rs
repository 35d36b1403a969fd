//! The `kisp` command line.

use std::ffi::OsString;
use std::fs;
use std::io::{BufRead, Write};
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Parser, Subcommand};

use crate::family::{sorted_ids, TraditionalTree};
use crate::interp::{parse_program, Interpreter};
use crate::kin_term::parse_kin_term;
use crate::reduction::ReductionDictionary;
use crate::semantics::{eval_term, singleton};
use crate::temporal::{TimePoint, Timeline};
use crate::tree_file::load_tree;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_TREE: i32 = 2;
pub const EXIT_VIOLATION: i32 = 3;
pub const EXIT_RUNTIME: i32 = 4;

pub const PROMPT: &str = "kisp> ";

const OPTIMAL_BUDGET: usize = 1_000_000;

#[derive(Debug, Parser)]
#[command(
    name = "kisp",
    version,
    about = "Query traditional family trees with kinship terms"
)]
pub struct Cli {
    /// Tree document (JSON) to load
    #[arg(long, global = true)]
    pub tree: Option<PathBuf>,
    /// Person id bound to `ego`
    #[arg(long, global = true)]
    pub ego: Option<String>,
    /// Present moment, DD.MM.YYYY (defaults to today)
    #[arg(long, global = true)]
    pub now: Option<TimePoint>,
    /// Reduction dictionary replacing the built-in one
    #[arg(long, global = true)]
    pub dict: Option<PathBuf>,
    /// Evaluate one KISP expression
    #[arg(long, conflicts_with = "term")]
    pub eval: Option<String>,
    /// Evaluate a kinship term starting from ego
    #[arg(long)]
    pub term: Option<String>,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Interactive session (the default)
    Repl,
    /// Run a script file, printing every top-level value
    Run { script: PathBuf },
    /// Evaluate one expression
    Eval { expr: String },
    /// Translate a kinship term into English words
    Reduce {
        term: String,
        /// Use the exhaustive search instead of the greedy reducer
        #[arg(long)]
        optimal: bool,
    },
    /// Check the traditional-tree constraints
    Validate,
}

/// A failure that ends the process with a specific exit status.
struct Exit(i32, String);

type Outcome = Result<(), Exit>;

struct Session<'a, W: Write> {
    cli: &'a Cli,
    out: &'a mut W,
}

impl<W: Write> Session<'_, W> {
    fn tree(&mut self, strict: bool) -> Result<TraditionalTree, Exit> {
        let path = self
            .cli
            .tree
            .as_ref()
            .ok_or_else(|| Exit(EXIT_USAGE, "--tree is required".into()))?;
        let tree =
            load_tree(path).map_err(|e| Exit(EXIT_TREE, format!("{}: {e}", path.display())))?;
        match TraditionalTree::new(tree) {
            Ok(t) => Ok(t),
            Err(invalid) => {
                let lines: Vec<String> =
                    invalid.violations.iter().map(ToString::to_string).collect();
                if strict {
                    Err(Exit(
                        EXIT_VIOLATION,
                        format!("{invalid}:\n{}", lines.join("\n")),
                    ))
                } else {
                    for l in &lines {
                        let _ = writeln!(self.out, "{l}");
                    }
                    Err(Exit(EXIT_VIOLATION, String::new()))
                }
            }
        }
    }

    fn interpreter(&mut self) -> Result<Interpreter, Exit> {
        let tree = self.tree(true)?;
        let timeline = Timeline::new(self.cli.now.unwrap_or_else(TimePoint::today));
        let mut interp = Interpreter::new(Arc::new(tree), timeline);
        if let Some(ego) = &self.cli.ego {
            interp
                .bind_person("ego", ego)
                .ok_or_else(|| Exit(EXIT_USAGE, format!("unknown ego id `{ego}`")))?;
        }
        Ok(interp)
    }

    fn dictionary(&self) -> Result<ReductionDictionary, Exit> {
        match &self.cli.dict {
            None => Ok(ReductionDictionary::english()),
            Some(path) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| Exit(EXIT_TREE, format!("{}: {e}", path.display())))?;
                text.parse()
                    .map_err(|e| Exit(EXIT_USAGE, format!("{}: {e}", path.display())))
            }
        }
    }

    fn run_source(&mut self, src: &str) -> Outcome {
        let mut interp = self.interpreter()?;
        interp
            .run_script(src, self.out)
            .map_err(|e| Exit(EXIT_RUNTIME, e.to_string()))
    }

    fn kin_term(&mut self, src: &str) -> Outcome {
        let term = parse_kin_term(src).map_err(|e| Exit(EXIT_USAGE, e.to_string()))?;
        let tree = self.tree(true)?;
        let ego = self
            .cli
            .ego
            .as_ref()
            .ok_or_else(|| Exit(EXIT_USAGE, "--term needs --ego".into()))?;
        let start = tree
            .lookup(ego)
            .ok_or_else(|| Exit(EXIT_USAGE, format!("unknown ego id `{ego}`")))?;
        for id in sorted_ids(&tree, eval_term(&tree, &term, &singleton(start))) {
            writeln!(self.out, "{id}").map_err(io_exit)?;
        }
        Ok(())
    }

    fn reduce(&mut self, src: &str, optimal: bool) -> Outcome {
        let term = parse_kin_term(src).map_err(|e| Exit(EXIT_USAGE, e.to_string()))?;
        let dict = self.dictionary()?;
        let reduced = if optimal {
            dict.optimal_shorten(&term, OPTIMAL_BUDGET)
                .map_err(|e| Exit(EXIT_RUNTIME, e.to_string()))?
        } else {
            dict.shorten(&term)
        };
        writeln!(self.out, "{reduced}").map_err(io_exit)?;
        writeln!(self.out, "segments: {}", reduced.len()).map_err(io_exit)
    }

    fn repl<R: BufRead, E: Write>(&mut self, input: R, err: &mut E) -> Outcome {
        let mut interp = self.interpreter()?;
        let mut pending = String::new();
        let mut lines = input.lines();
        loop {
            if pending.is_empty() {
                write!(self.out, "{PROMPT}").map_err(io_exit)?;
                self.out.flush().map_err(io_exit)?;
            }
            let Some(line) = lines.next() else {
                return Ok(());
            };
            pending.push_str(&line.map_err(io_exit)?);
            pending.push('\n');
            if open_parens(&pending) > 0 {
                continue;
            }
            let src = std::mem::take(&mut pending);
            match parse_program(&src) {
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                }
                Ok(exprs) => {
                    for e in &exprs {
                        match interp.eval_top(e) {
                            Ok(v) => {
                                writeln!(self.out, "{}", interp.format(&v)).map_err(io_exit)?
                            }
                            Err(e) => {
                                let _ = writeln!(err, "error: {e}");
                                break;
                            }
                        }
                    }
                }
            }
        }
    }
}

fn io_exit(e: std::io::Error) -> Exit {
    Exit(EXIT_TREE, e.to_string())
}

/// Unclosed parentheses outside strings and comments.
fn open_parens(src: &str) -> i64 {
    let mut depth = 0i64;
    let (mut in_str, mut in_comment) = (false, false);
    for c in src.chars() {
        match c {
            '\n' => in_comment = false,
            _ if in_comment => {}
            '\'' => in_str = !in_str,
            _ if in_str => {}
            ';' => in_comment = true,
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
    }
    if in_str {
        depth.max(1)
    } else {
        depth
    }
}

/// Runs the command line with explicit streams and returns the exit status.
pub fn run<I, T, R, W, E>(args: I, input: R, out: &mut W, err: &mut E) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
    R: BufRead,
    W: Write,
    E: Write,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let mut session = Session { cli: &cli, out };
    let outcome = match (&cli.command, &cli.eval, &cli.term) {
        (Some(_), Some(_), _) | (Some(_), _, Some(_)) => Err(Exit(
            EXIT_USAGE,
            "--eval and --term cannot be combined with a subcommand".into(),
        )),
        (None, Some(expr), _) | (Some(Command::Eval { expr }), _, _) => session.run_source(expr),
        (None, _, Some(term)) => session.kin_term(term),
        (Some(Command::Run { script }), _, _) => match fs::read_to_string(script) {
            Ok(src) => session.run_source(&src),
            Err(e) => Err(Exit(EXIT_TREE, format!("{}: {e}", script.display()))),
        },
        (Some(Command::Reduce { term, optimal }), _, _) => session.reduce(term, *optimal),
        (Some(Command::Validate), _, _) => session.tree(false).map(|_| ()),
        (None, None, None) | (Some(Command::Repl), _, _) => session.repl(input, err),
    };
    match outcome {
        Ok(()) => EXIT_OK,
        Err(Exit(code, msg)) => {
            if !msg.is_empty() {
                let _ = writeln!(err, "error: {msg}");
            }
            code
        }
    }
}
