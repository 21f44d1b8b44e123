//! Command-line front end. `execute` does all the work and returns the exit
//! code with the text for stdout and stderr, so tests can drive it without
//! spawning processes.
//!
//! Exit codes: 0 accept/equivalent/ok, 1 reject/counterexample/violation,
//! 2 usage error, 3 capability, undecided or cap exceeded.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use xderiv_core::dspace::{render_set, DEFAULT_DPLUS_CAP};
use xderiv_core::oracle::Oracle;
use xderiv_core::session::DEFAULT_MAX_STATES;
use xderiv_core::symbol::{fmt_word, word};
use xderiv_core::transducer::build_fst;
use xderiv_core::{Alphabet, Definitions, EquivResult, Error, Op, Session, Word};

#[derive(Debug, Parser)]
#[command(name = "xderiv", version, about = "Derivatives of regular expressions with extra language operators")]
pub struct Cli {
    /// Definitions file declaring the alphabet and homomorphism tables.
    #[arg(long, global = true, value_name = "FILE")]
    pub defs: Option<PathBuf>,
    /// Alphabet as a list of symbols, e.g. "a b c"; conflicts with --defs.
    #[arg(long, global = true, conflicts_with = "defs")]
    pub alphabet: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether a word belongs to an expression's language.
    Match {
        #[arg(short = 'e', long = "expr")]
        expr: String,
        /// The word; `@e` is the empty word.
        #[arg(short = 'w', long = "word", allow_hyphen_values = true)]
        word: String,
    },
    /// Print the derivative of an expression by a word.
    Derive {
        #[arg(short = 'e', long = "expr")]
        expr: String,
        #[arg(short = 'w', long = "word")]
        word: String,
    },
    /// Build the derivative automaton.
    Compile {
        #[arg(short = 'e', long = "expr")]
        expr: String,
        /// Print Graphviz DOT instead of the state count.
        #[arg(long)]
        dot: bool,
        #[arg(long, default_value_t = DEFAULT_MAX_STATES, value_parser = positive)]
        max_states: usize,
        /// Minimize before printing.
        #[arg(long)]
        minimize: bool,
    },
    /// Decide language equivalence, printing a shortest counterexample.
    Equiv {
        #[arg(short = 'e', long = "expr")]
        expr: String,
        #[arg(short = 'f', long = "other")]
        other: String,
        #[arg(long, default_value_t = 1_000_000, value_parser = positive)]
        max_pairs: usize,
    },
    /// List accepted words up to a length.
    Enum {
        #[arg(short = 'e', long = "expr")]
        expr: String,
        #[arg(long)]
        max_len: usize,
    },
    /// Build the transducer of a unary operator.
    Fst {
        /// Operator, e.g. `hamming[1]`, `hom[H]`, `upclose`.
        #[arg(long)]
        op: String,
        #[arg(long)]
        dot: bool,
    },
    /// Run an operator's transducer on a word.
    Transduce {
        #[arg(long)]
        op: String,
        #[arg(short = 'w', long = "word")]
        word: String,
        #[arg(long, default_value_t = 64, value_parser = positive)]
        max_steps: usize,
        #[arg(long, default_value_t = 32, value_parser = positive)]
        max_out: usize,
    },
    /// Inspect the finite set of iterated derivatives.
    Dspace {
        #[arg(short = 'e', long = "expr")]
        expr: String,
        /// List every element.
        #[arg(long)]
        enumerate: bool,
        #[arg(long, default_value_t = DEFAULT_DPLUS_CAP, value_parser = positive)]
        cap: usize,
        /// Check closure under derivation on sample words.
        #[arg(long)]
        check_closure: bool,
        /// Longest sample word for --check-closure.
        #[arg(long, default_value_t = 4)]
        max_len: usize,
    },
    /// List words up to a length by brute-force semantics.
    Oracle {
        #[arg(short = 'e', long = "expr")]
        expr: String,
        #[arg(long)]
        max_len: usize,
    },
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

/// Exit code and captured output of one invocation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(code: i32, stdout: String) -> Self {
        Outcome { code, stdout, stderr: String::new() }
    }

    fn error(e: &Error) -> Self {
        Outcome {
            code: if e.is_usage() { 2 } else { 3 },
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn execute<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                Outcome { code: 2, stdout: String::new(), stderr: text }
            } else {
                Outcome::ok(0, text)
            }
        }
    }
}

/// Runs an already parsed command line.
pub fn run(cli: &Cli) -> Outcome {
    let defs = match load_defs(cli) {
        Ok(d) => d,
        Err(o) => return o,
    };
    let mut s = match Session::new(defs) {
        Ok(s) => s,
        Err(e) => return Outcome::error(&e),
    };
    dispatch(&mut s, &cli.command).unwrap_or_else(|e| Outcome::error(&e))
}

fn load_defs(cli: &Cli) -> Result<Definitions, Outcome> {
    if let Some(path) = &cli.defs {
        let text = std::fs::read_to_string(path).map_err(|e| Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: cannot read {}: {e}\n", path.display()),
        })?;
        return Definitions::parse(&text).map_err(|e| Outcome::error(&e));
    }
    if let Some(list) = &cli.alphabet {
        let alphabet = Alphabet::parse(list).map_err(|e| Outcome::error(&e))?;
        return Ok(Definitions::with_alphabet(alphabet));
    }
    Ok(Definitions::default())
}

fn input_word(s: &Session, text: &str) -> xderiv_core::Result<Word> {
    let w = word(text);
    s.check_word(&w)?;
    Ok(w)
}

fn lines(words: &[Word]) -> String {
    words.iter().map(|w| fmt_word(w) + "\n").collect()
}

fn dispatch(s: &mut Session, cmd: &Command) -> xderiv_core::Result<Outcome> {
    Ok(match cmd {
        Command::Match { expr, word } => {
            let e = s.parse(expr)?;
            let w = input_word(s, word)?;
            if s.matches(e, &w)? {
                Outcome::ok(0, "accept\n".into())
            } else {
                Outcome::ok(1, "reject\n".into())
            }
        }
        Command::Derive { expr, word } => {
            let e = s.parse(expr)?;
            let w = input_word(s, word)?;
            let d = s.derive_word(&w, e)?;
            Outcome::ok(0, s.pretty(d) + "\n")
        }
        Command::Compile { expr, dot, max_states, minimize } => {
            let e = s.parse(expr)?;
            let mut dfa = s.compile(e, *max_states)?;
            if *minimize {
                dfa = dfa.minimize();
            }
            if *dot {
                Outcome::ok(0, dfa.to_dot(&s.store))
            } else {
                Outcome::ok(0, format!("states: {}\n", dfa.len()))
            }
        }
        Command::Equiv { expr, other, max_pairs } => {
            let e1 = s.parse(expr)?;
            let e2 = s.parse(other)?;
            match s.equiv(e1, e2, *max_pairs)? {
                EquivResult::Equivalent => Outcome::ok(0, "equivalent\n".into()),
                EquivResult::Counterexample { word, .. } => {
                    Outcome::ok(1, format!("counterexample: {}\n", fmt_word(&word)))
                }
            }
        }
        Command::Enum { expr, max_len } => {
            let e = s.parse(expr)?;
            Outcome::ok(0, lines(&s.enumerate(e, *max_len)?))
        }
        Command::Fst { op, dot } => {
            let op: Op = op.parse()?;
            s.register(&op)?;
            let fst = build_fst(&op, s.registry())?;
            Outcome::ok(0, if *dot { fst.to_dot() } else { fst.summary() })
        }
        Command::Transduce { op, word, max_steps, max_out } => {
            let op: Op = op.parse()?;
            s.register(&op)?;
            let w = input_word(s, word)?;
            let fst = build_fst(&op, s.registry())?;
            let run = fst.transduce(&w, *max_steps, *max_out);
            let mut out = lines(&run.words());
            if run.incomplete {
                out.push_str("INCOMPLETE\n");
            }
            Outcome::ok(0, out)
        }
        Command::Dspace { expr, enumerate, cap, check_closure, max_len } => {
            let r = s.parse(expr)?;
            let mut out = String::new();
            let mut code = 0;
            if *enumerate || !*check_closure {
                let set = s.dplus_enumerate(r, *cap)?;
                if *enumerate {
                    out.push_str(&render_set(&s.store, &set));
                }
                let _ = writeln!(out, "size: {}", set.len());
            }
            if *check_closure {
                let sample = s.alphabet().words_up_to(*max_len);
                let report = s.check_closure(r, &sample)?;
                out.push_str(&report.render(&s.store));
                let bad = report.violations().count();
                let _ = writeln!(out, "violations: {bad}");
                if bad > 0 {
                    code = 1;
                }
            }
            Outcome::ok(code, out)
        }
        Command::Oracle { expr, max_len } => {
            let e = s.parse(expr)?;
            let slice = Oracle::new(s.defs()).slice_expr(&s.store, e, *max_len);
            let mut out = lines(&slice.sorted());
            if slice.incomplete {
                out.push_str("INCOMPLETE\n");
            }
            Outcome::ok(0, out)
        }
    })
}
