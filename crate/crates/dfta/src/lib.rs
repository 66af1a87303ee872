//! Analysis toolkit for complete deterministic bottom-up finite tree automata.
//!
//! An automaton runs over terms built from a ranked alphabet, where leaf
//! variables `x1, x2, ...` stand for unknown constants. The library answers
//! questions about how a term's value depends on those variables:
//!
//! - [`essential`]: which variables can change the run state (or acceptance)
//!   at all, with concrete witness assignments;
//! - [`equivalence`]: whether two terms run to the same state under every
//!   assignment, with counterexamples when they do not;
//! - [`reduction`]: rewrite rules that delete inputs a term never actually
//!   consults, shrinking it while preserving its behavior;
//! - [`language`]: finiteness, enumeration and minimization of the ground
//!   language, up to the paired minimal automaton and minimal term set.
//!
//! ```
//! use dfta::automaton::TreeAutomaton;
//! use dfta::term::parse_term;
//! use dfta::{reduction, Budget};
//!
//! let a = TreeAutomaton::from_fta(
//!     "states: q0 q1\n\
//!      final: q1\n\
//!      const 0 -> q0\n\
//!      const 1 -> q1\n\
//!      rule g1(q0,q0) -> q0\n\
//!      rule g1(q0,q1) -> q1\n\
//!      rule g1(q1,q0) -> q1\n\
//!      rule g1(q1,q1) -> q1\n",
//! )
//! .unwrap();
//! // The duplicated x1 is redundant: the inner join already computes the
//! // whole term's value, so the outer layer peels away in one step.
//! let t = parse_term("g1(x1,g1(x1,x2))", a.signature()).unwrap();
//! let (small, steps) = reduction::reduce(&a, &t, reduction::Mode::A, Budget::default()).unwrap();
//! assert_eq!(small.to_string(), "g1(x1,x2)");
//! assert_eq!(steps.len(), 1);
//! ```
//!
//! All searches are exhaustive over assignments, so every operation that
//! enumerates them takes a [`Budget`] and refuses outright when the search
//! space is too large, rather than running for hours.

pub mod automaton;
pub mod equivalence;
pub mod essential;
pub mod language;
pub mod reduction;
pub mod term;

pub use automaton::{Assignment, TreeAutomaton};
pub use reduction::{Mode, RewriteStep};
pub use term::{Position, Signature, Term};

use term::Position as Pos;

/// Cap on exhaustive search size, counted in automaton runs.
///
/// Operations that enumerate assignments compute their projected cost
/// (`|F0|^k` for `k` free variables) up front and refuse with
/// [`AnalysisError::BudgetExceeded`] instead of starting a search they
/// cannot finish. Enumeration of ground terms meters its output against
/// the same cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub runs: u64,
}

impl Budget {
    pub const DEFAULT_RUNS: u64 = 1_000_000;

    pub fn new(runs: u64) -> Self {
        Budget { runs }
    }

    /// Refuses searches whose projected cost exceeds the cap.
    pub fn require(&self, needed: u128) -> Result<(), AnalysisError> {
        if needed > self.runs as u128 {
            Err(AnalysisError::BudgetExceeded {
                needed,
                budget: self.runs,
            })
        } else {
            Ok(())
        }
    }

    /// Projected cost of enumerating all assignments of `vars` variables
    /// over `values` nullary symbols. Saturates instead of overflowing.
    pub fn assignment_space(values: usize, vars: usize) -> u128 {
        let mut total: u128 = 1;
        for _ in 0..vars {
            total = total.saturating_mul(values as u128);
        }
        total
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            runs: Self::DEFAULT_RUNS,
        }
    }
}

/// Errors shared by the analysis passes (essentiality, equivalence,
/// rewriting, language operations).
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AnalysisError {
    #[error("search too large: {needed} runs needed, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error(transparent)]
    Run(#[from] automaton::RunError),
    #[error("position {0} does not exist in the term")]
    InvalidPosition(Pos),
    #[error("position {0} is not a variable leaf")]
    NotAVariable(Pos),
    #[error("position {0} is not a constant leaf")]
    NotAConstant(Pos),
    #[error("replacement is not a proper superterm of the subterm at {0}")]
    NotAProperSuperterm(Pos),
    #[error("precondition violated: {0}")]
    Precondition(String),
}
