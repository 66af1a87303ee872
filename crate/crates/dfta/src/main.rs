//! Command-line front-end. Every command loads one automaton, most load
//! term files on top, and the exit status encodes the verdict so scripts
//! can branch without scraping the report:
//!
//! 0 affirmative, 1 negative verdict (rejected, not essential, distinct,
//! not covered, infinite), 2 usage or parse error, 3 budget exceeded.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use dfta::automaton::Assignment;
use dfta::equivalence::{a_equivalent, is_f0_covered, ra_equivalent};
use dfta::essential::{analyze, essential_chain};
use dfta::language::{enumerate_ground, is_finite_language, minimize_automaton, optimal_pair, Finiteness, PairOutcome};
use dfta::reduction::{reduce, Mode};
use dfta::term::parse_term;
use dfta::{AnalysisError, Budget, Term, TreeAutomaton};

#[derive(Parser)]
#[command(name = "dfta", about = "Analyze terms against a deterministic bottom-up tree automaton")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Automaton file (.fta format)
    #[arg(long)]
    automaton: PathBuf,
    /// Cap on automaton runs per exhaustive search
    #[arg(long, default_value_t = Budget::DEFAULT_RUNS)]
    budget: u64,
}

impl Common {
    fn budget(&self) -> Budget {
        Budget::new(self.budget)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a term under an assignment and report the reached state
    Run {
        #[command(flatten)]
        common: Common,
        /// Term file
        #[arg(long)]
        term: PathBuf,
        /// Constants for the term's variables, e.g. "x1=0,x2=1"
        #[arg(long)]
        assign: String,
    },
    /// Classify every variable of a term as essential / r-essential
    Ess {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        term: PathBuf,
        /// A reports both classifications, rA only the acceptance-level one
        #[arg(long, default_value = "A")]
        mode: Mode,
    },
    /// Trace an essential variable down to a leaf, one subterm at a time
    Chain {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        term: PathBuf,
        /// Variable to trace, e.g. "x3" or "3"
        #[arg(long, value_parser = parse_var)]
        var: u32,
    },
    /// Rewrite a term to its irreducible form and print the step trace
    Reduce {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        term: PathBuf,
        #[arg(long, default_value = "A")]
        mode: Mode,
    },
    /// Compare two terms under every assignment
    Equiv {
        #[command(flatten)]
        common: Common,
        /// Term file; pass exactly twice
        #[arg(long = "term")]
        terms: Vec<PathBuf>,
        #[arg(long, default_value = "A")]
        mode: Mode,
    },
    /// Check that every assignment runs a term into the constants' states
    Covered {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        term: PathBuf,
    },
    /// Decide whether the accepted ground-term set is finite
    Finite {
        #[command(flatten)]
        common: Common,
    },
    /// List all accepted ground terms up to a depth
    Enumerate {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        max_depth: usize,
    },
    /// Write the minimized automaton
    Minimize {
        #[command(flatten)]
        common: Common,
        /// Output .fta path
        #[arg(long)]
        out: PathBuf,
    },
    /// Minimize and, for a finite language, list its reduced terms
    Optimal {
        #[command(flatten)]
        common: Common,
        /// Output prefix; writes <out>.fta and <out>.terms
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_var(text: &str) -> Result<u32, String> {
    let digits = text.strip_prefix('x').unwrap_or(text);
    match digits.parse::<u32>() {
        Ok(v) if v >= 1 => Ok(v),
        _ => Err(format!("`{text}` is not a variable (expected x1, x2, ...)")),
    }
}

enum Failure {
    Usage(String),
    Budget(String),
}

impl Failure {
    fn exit(&self) -> ExitCode {
        match self {
            Failure::Usage(_) => ExitCode::from(2),
            Failure::Budget(_) => ExitCode::from(3),
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Budget(m) => m,
        }
    }
}

impl From<AnalysisError> for Failure {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::BudgetExceeded { .. } => Failure::Budget(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

fn load_automaton(path: &Path) -> Result<TreeAutomaton, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    TreeAutomaton::from_fta(&text)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_term(path: &Path, a: &TreeAutomaton) -> Result<Term, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    parse_term(text.trim(), a.signature())
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, content: &str) -> Result<(), Failure> {
    fs::write(path, content).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

// Exit 0 for affirmative outcomes, 1 for negative verdicts.
fn dispatch(command: Command) -> Result<u8, Failure> {
    match command {
        Command::Run { common, term, assign } => {
            let a = load_automaton(&common.automaton)?;
            let t = load_term(&term, &a)?;
            let g = Assignment::parse(&assign, a.signature())
                .map_err(|e| Failure::Usage(e.to_string()))?;
            let state = a.run(&g, &t).map_err(|e| Failure::Usage(e.to_string()))?;
            let verdict = if a.is_final(state) { "accepted" } else { "rejected" };
            println!("{} {verdict}", a.state_name(state));
            Ok(if a.is_final(state) { 0 } else { 1 })
        }
        Command::Ess { common, term, mode } => {
            let a = load_automaton(&common.automaton)?;
            let t = load_term(&term, &a)?;
            let report = analyze(&a, &t, common.budget())?;
            match mode {
                Mode::A => print!("{}", report.render(&a)),
                Mode::Ra => {
                    let mut out = String::new();
                    for &v in &t.vars() {
                        if let Some(w) = report.r_witnesses.get(&v) {
                            writeln!(out, "x{v}: r-essential, {}", w.render(&a)).unwrap();
                        } else {
                            writeln!(out, "x{v}: not r-essential").unwrap();
                        }
                    }
                    print!("{out}");
                }
            }
            Ok(0)
        }
        Command::Chain { common, term, var } => {
            let a = load_automaton(&common.automaton)?;
            let t = load_term(&term, &a)?;
            match essential_chain(&a, &t, var, common.budget())? {
                Some(chain) => {
                    let path: Vec<String> =
                        chain.iter().rev().map(|p| p.to_string()).collect();
                    println!("{}", path.join(" -> "));
                    Ok(0)
                }
                None => {
                    println!("x{var} is not essential");
                    Ok(1)
                }
            }
        }
        Command::Reduce { common, term, mode } => {
            let a = load_automaton(&common.automaton)?;
            let t = load_term(&term, &a)?;
            let (result, steps) = reduce(&a, &t, mode, common.budget())?;
            println!("{result}");
            for step in &steps {
                println!("{}", step.render());
            }
            Ok(0)
        }
        Command::Equiv { common, terms, mode } => {
            if terms.len() != 2 {
                return Err(Failure::Usage(format!(
                    "equiv needs exactly two --term files, got {}",
                    terms.len()
                )));
            }
            let a = load_automaton(&common.automaton)?;
            let t = load_term(&terms[0], &a)?;
            let s = load_term(&terms[1], &a)?;
            let budget = common.budget();
            let verdict = match mode {
                Mode::A => a_equivalent(&a, &t, &s, budget)?,
                Mode::Ra => ra_equivalent(&a, &t, &s, budget)?,
            };
            match verdict.counterexample() {
                None => {
                    println!("equivalent");
                    Ok(0)
                }
                Some(c) => {
                    println!("distinct {}", c.render(&a));
                    Ok(1)
                }
            }
        }
        Command::Covered { common, term } => {
            let a = load_automaton(&common.automaton)?;
            let t = load_term(&term, &a)?;
            let verdict = is_f0_covered(&a, &t, common.budget())?;
            match verdict.escape {
                None => {
                    println!("covered");
                    Ok(0)
                }
                Some((g, state)) => {
                    println!(
                        "not covered: under {} runs to {}",
                        g.render(a.signature()),
                        a.state_name(state)
                    );
                    Ok(1)
                }
            }
        }
        Command::Finite { common } => {
            let a = load_automaton(&common.automaton)?;
            match is_finite_language(&a) {
                Finiteness::Finite => {
                    println!("finite");
                    Ok(0)
                }
                Finiteness::Infinite(cycle) => {
                    println!("infinite: {}", cycle.render());
                    Ok(1)
                }
            }
        }
        Command::Enumerate { common, max_depth } => {
            let a = load_automaton(&common.automaton)?;
            for t in enumerate_ground(&a, max_depth, common.budget())? {
                println!("{t}");
            }
            Ok(0)
        }
        Command::Minimize { common, out } => {
            let a = load_automaton(&common.automaton)?;
            let m = minimize_automaton(&a);
            write_file(&out, &m.to_fta())?;
            println!("{} states, written to {}", m.state_count(), out.display());
            Ok(0)
        }
        Command::Optimal { common, out } => {
            let a = load_automaton(&common.automaton)?;
            match optimal_pair(&a, common.budget())? {
                PairOutcome::Infinite(cycle) => {
                    println!("infinite: {}", cycle.render());
                    Ok(1)
                }
                PairOutcome::Optimal(pair) => {
                    let fta_path = out.with_extension("fta");
                    let terms_path = out.with_extension("terms");
                    write_file(&fta_path, &pair.automaton.to_fta())?;
                    write_file(&terms_path, &pair.terms_file())?;
                    println!(
                        "wrote {} ({} states) and {} ({} terms)",
                        fta_path.display(),
                        pair.automaton.state_count(),
                        terms_path.display(),
                        pair.language.len()
                    );
                    Ok(0)
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            failure.exit()
        }
    }
}
