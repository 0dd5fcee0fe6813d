//! The `ordgram` command line. [`run`] is the whole program; `main` only
//! forwards process arguments and standard streams.
//!
//! Exit status: 0 on success or PASS, 1 on FAIL, 2 on usage or input errors.

use std::fmt::Display;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::grammar::{analyze, check_prefix, check_wellorder_probes, normalize, parse_grammar, Grammar};
use crate::lexorder::{enumerate_words, DEFAULT_CAP, DEFAULT_MAXLEN};
use crate::ordinal::{parse_ordinal, CnfOrdinal};
use crate::synthesis::{self, SynthesizedGrammar};
use crate::translate::{build_frontier_grammar, build_labeled_grammar, verify_translation_with};
use crate::tree::parse_system;

pub const DEFAULT_DEPTH: usize = 6;

#[derive(Debug, Parser)]
#[command(name = "ordgram", version, about = "Ordinal grammars and frontier grammars of algebraic trees")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Synthesize an ordinal grammar for an ordinal below w^(w^w).
    Synth {
        /// Ordinal expression, e.g. "w^2*3 + w + 1".
        expr: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Occurrence classes, heights, pump words and bounds.
    Analyze { file: PathBuf },
    /// Bounded words of the start symbol in lexicographic order.
    Enumerate {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MAXLEN)]
        maxlen: usize,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// Rank of a word in a synthesized grammar file.
    Rank { file: PathBuf, word: String },
    /// Bounded prefix and well-order probes.
    Check {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MAXLEN)]
        maxlen: usize,
    },
    /// Translate an equation system into a prefix grammar.
    Translate {
        system: PathBuf,
        #[command(flatten)]
        flavor: Flavor,
        /// Binarize the system first.
        #[arg(long)]
        binarize: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the labeled-frontier grammar with Kleene iterates.
    Verify {
        system: PathBuf,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
        #[arg(long, default_value_t = DEFAULT_MAXLEN)]
        maxlen: usize,
        #[arg(long)]
        binarize: bool,
        /// Check this grammar instead of the constructed one.
        #[arg(long)]
        grammar: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
#[group(multiple = false)]
struct Flavor {
    /// Emit the labeled-frontier grammar.
    #[arg(long)]
    labeled: bool,
    /// Emit the frontier grammar (default).
    #[arg(long)]
    frontier: bool,
}

enum Outcome {
    Pass,
    Fail,
}

struct Failure(String);

impl<E: Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn emit(out: &mut dyn Write, path: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure(format!("{}: {e}", p.display()))),
        None => Ok(out.write_all(text.as_bytes())?),
    }
}

/// Runs one invocation; `args` includes the program name.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(Outcome::Pass) => 0,
        Ok(Outcome::Fail) => 1,
        Err(Failure(m)) => {
            let _ = writeln!(err, "error: {m}");
            2
        }
    }
}

fn execute(cmd: Command, out: &mut dyn Write) -> Result<Outcome, Failure> {
    match cmd {
        Command::Synth { expr, out: path } => {
            let alpha = parse_ordinal(&expr)?;
            let sg = synthesis::from_cnf(&alpha)?;
            emit(out, &path, &sg.to_file_string())?;
            if path.is_some() {
                writeln!(out, "order type: {}", sg.order_type())?;
            }
        }
        Command::Analyze { file } => analyze_cmd(&normalize(&parse_grammar(&read(&file)?)?), out)?,
        Command::Enumerate { file, maxlen, cap } => {
            let g = normalize(&parse_grammar(&read(&file)?)?);
            let en = enumerate_words(&g, maxlen, cap);
            for w in &en.words {
                writeln!(out, "{}", g.alphabet().render(w))?;
            }
            if en.truncated {
                writeln!(out, "# truncated at {cap} words per length")?;
            }
        }
        Command::Rank { file, word } => {
            let sg = SynthesizedGrammar::from_file_string(&read(&file)?)?;
            let w = sg.grammar().alphabet().parse_word(&word)?;
            writeln!(out, "{}", sg.rank(&w)?)?;
        }
        Command::Check { file, maxlen } => {
            let g = normalize(&parse_grammar(&read(&file)?)?);
            let prefix = check_prefix(&g, maxlen);
            let probes = check_wellorder_probes(&g, maxlen);
            let mut clean = true;
            for (what, report) in [("prefix", &prefix), ("well-order", &probes)] {
                writeln!(out, "{what}: {}", if report.is_clean() { "PASS" } else { "FAIL" })?;
                for v in &report.violations {
                    writeln!(out, "  {}", v.render(&g))?;
                }
                if report.truncated {
                    writeln!(out, "  enumeration truncated")?;
                }
                clean &= report.is_clean();
            }
            return Ok(if clean { Outcome::Pass } else { Outcome::Fail });
        }
        Command::Translate { system, flavor, binarize, out: path } => {
            let mut sys = parse_system(&read(&system)?)?;
            if binarize {
                sys = sys.binarize();
            }
            let g = if flavor.labeled { build_labeled_grammar(&sys)? } else { build_frontier_grammar(&sys)? };
            emit(out, &path, &g.to_string())?;
        }
        Command::Verify { system, depth, maxlen, binarize, grammar } => {
            let mut sys = parse_system(&read(&system)?)?;
            if binarize {
                sys = sys.binarize();
            }
            let gl = match grammar {
                Some(p) => parse_grammar(&read(&p)?)?,
                None => build_labeled_grammar(&sys)?,
            };
            let report = verify_translation_with(&sys, &gl, depth, maxlen);
            writeln!(
                out,
                "{}: {} iterate words, {} settled grammar words, {} discrepancies",
                if report.passed() { "PASS" } else { "FAIL" },
                report.iterate_words,
                report.settled_words,
                report.discrepancies.len()
            )?;
            for d in &report.discrepancies {
                writeln!(out, "  {d}")?;
            }
            if report.truncated {
                writeln!(out, "  enumeration truncated")?;
            }
            return Ok(if report.passed() { Outcome::Pass } else { Outcome::Fail });
        }
    }
    Ok(Outcome::Pass)
}

fn analyze_cmd(g: &Grammar, out: &mut dyn Write) -> Result<(), Failure> {
    if g.is_canonical_empty() {
        writeln!(out, "empty language")?;
        return Ok(());
    }
    if g.is_epsilon() {
        writeln!(out, "{}: language {{ε}}, order type {}", g.start_name(), CnfOrdinal::one())?;
        return Ok(());
    }
    let a = g.alphabet();
    let reports = analyze(g);
    for r in &reports {
        write!(out, "{}: class {} height {} ", r.name, r.class_id, r.height)?;
        match (&r.pump_word, &r.u0, &r.pump_error) {
            (Some(p), Some(u), _) => write!(out, "recursive pump {} u0 {}", a.render(p), a.render(u))?,
            (_, _, Some(e)) => write!(out, "recursive ({e})")?,
            _ => write!(out, "non-recursive")?,
        }
        writeln!(out, " bound {}", r.bound)?;
    }
    let start = &reports[g.start()];
    writeln!(out, "start {} bound {}", start.name, start.bound)?;
    Ok(())
}
