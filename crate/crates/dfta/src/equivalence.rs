//! Term equivalence relative to an automaton, and a checked rewrite that
//! preserves it.
//!
//! Two terms are *equivalent* when every assignment of their combined
//! variables runs them to the same state, and *r-equivalent* when every
//! assignment gives them the same acceptance verdict. Equivalence implies
//! r-equivalence; the converse direction fails whenever two distinct
//! states share an acceptance verdict.
//!
//! A term is *constant-covered* when, under every assignment, its run
//! state is one some constant reaches directly. [`covered_replacement`]
//! substitutes a constant-covered term for one occurrence of a variable
//! `x_i` and checks, exhaustively, that the whole term's behavior is
//! unchanged. The check is expected to come back positive whenever
//!
//! * the replacement is constant-covered, and
//! * some subterm around the occurrence has `x_i` fictive, with the
//!   occurrence being the only one of `x_i` inside it,
//!
//! so the function refuses to run (rather than reporting inequivalence)
//! when either condition fails.
//!
//! The uniqueness part of the second condition is not decorative. With an
//! exclusive-or automaton, `g(x1,x1)` always runs to the zero state even
//! though each occurrence matters; replacing just one of them by `1`
//! yields `g(1,x1)`, which negates the other. Fictiveness of `x1` only
//! speaks about moving both occurrences at once, so such sites are
//! refused.

use crate::automaton::{assignments_over, Assignment, TreeAutomaton};
use crate::term::{Position, Term};
use crate::{AnalysisError, Budget};

/// An assignment under which the two runs disagree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub assignment: Assignment,
    pub left: usize,
    pub right: usize,
}

impl Counterexample {
    pub fn render(&self, a: &TreeAutomaton) -> String {
        format!(
            "under {}: {} vs {}",
            self.assignment.render(a.signature()),
            a.state_name(self.left),
            a.state_name(self.right),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Equivalent,
    Distinct(Counterexample),
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Equivalent)
    }

    pub fn counterexample(&self) -> Option<&Counterexample> {
        match self {
            Verdict::Equivalent => None,
            Verdict::Distinct(c) => Some(c),
        }
    }
}

fn sweep(
    a: &TreeAutomaton,
    t: &Term,
    s: &Term,
    accept_only: bool,
    budget: Budget,
) -> Result<Verdict, AnalysisError> {
    let mut vars = t.vars();
    vars.extend(s.vars());
    budget.require(Budget::assignment_space(
        a.signature().nullary_count(),
        vars.len(),
    ))?;
    for g in assignments_over(&vars, a.signature()) {
        let left = a.run(&g, t)?;
        let right = a.run(&g, s)?;
        let same = if accept_only {
            a.is_final(left) == a.is_final(right)
        } else {
            left == right
        };
        if !same {
            return Ok(Verdict::Distinct(Counterexample {
                assignment: g,
                left,
                right,
            }));
        }
    }
    Ok(Verdict::Equivalent)
}

/// Exhaustive check that `t` and `s` run to the same state under every
/// assignment of their combined variables. The first disagreeing
/// assignment (enumeration order) is returned as counterexample.
pub fn a_equivalent(
    a: &TreeAutomaton,
    t: &Term,
    s: &Term,
    budget: Budget,
) -> Result<Verdict, AnalysisError> {
    sweep(a, t, s, false, budget)
}

/// Exhaustive check that `t` and `s` agree on acceptance under every
/// assignment of their combined variables.
pub fn ra_equivalent(
    a: &TreeAutomaton,
    t: &Term,
    s: &Term,
    budget: Budget,
) -> Result<Verdict, AnalysisError> {
    sweep(a, t, s, true, budget)
}

/// Whether every assignment runs `t` to a state in the constant image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverageVerdict {
    /// First assignment (enumeration order) whose run state no constant
    /// reaches, with that state. `None` means covered.
    pub escape: Option<(Assignment, usize)>,
}

impl CoverageVerdict {
    pub fn covered(&self) -> bool {
        self.escape.is_none()
    }
}

pub fn is_f0_covered(
    a: &TreeAutomaton,
    t: &Term,
    budget: Budget,
) -> Result<CoverageVerdict, AnalysisError> {
    let vars = t.vars();
    budget.require(Budget::assignment_space(
        a.signature().nullary_count(),
        vars.len(),
    ))?;
    let image = a.nullary_image();
    for g in assignments_over(&vars, a.signature()) {
        let state = a.run(&g, t)?;
        if !image.contains(&state) {
            return Ok(CoverageVerdict {
                escape: Some((g, state)),
            });
        }
    }
    Ok(CoverageVerdict { escape: None })
}

/// A checked substitution of a covered term for one variable occurrence.
#[derive(Debug, Clone)]
pub struct CoveredReplacement {
    pub result: Term,
    /// Deepest prefix of the occurrence in which the variable is fictive
    /// and occurs exactly once.
    pub fictive_prefix: Position,
    /// Outcome of the exhaustive before/after comparison.
    pub verdict: Verdict,
}

/// Replaces the variable occurrence at `p1` by `s` and verifies the
/// substitution exhaustively, after checking the two conditions under
/// which the verdict is guaranteed positive (see the module notes).
/// Precondition failures are reported as errors, distinct from a
/// `Distinct` verdict, which would mean the guarantee itself is broken.
pub fn covered_replacement(
    a: &TreeAutomaton,
    t: &Term,
    p1: &Position,
    s: &Term,
    budget: Budget,
) -> Result<CoveredReplacement, AnalysisError> {
    let var = match t.subterm_at(p1)? {
        Term::Var(v) => *v,
        _ => return Err(AnalysisError::NotAVariable(p1.clone())),
    };
    let coverage = is_f0_covered(a, s, budget)?;
    if let Some((g, state)) = coverage.escape {
        return Err(AnalysisError::Precondition(format!(
            "replacement `{s}` is not constant-covered: under {} it runs to {}",
            g.render(a.signature()),
            a.state_name(state),
        )));
    }
    let mut fictive_prefix = None;
    for p in p1.prefixes_to_root() {
        let sub = t.subterm_at(&p)?;
        let occurrences = sub
            .positions()
            .variables
            .iter()
            .filter(|(_, v)| *v == var)
            .count();
        if occurrences == 1 && crate::essential::is_essential(a, sub, var, budget)?.is_none() {
            fictive_prefix = Some(p);
            break;
        }
    }
    let fictive_prefix = fictive_prefix.ok_or_else(|| {
        AnalysisError::Precondition(format!(
            "no subterm around {p1} has x{var} fictive with a unique occurrence"
        ))
    })?;
    let result = t.replace_at(p1, s.clone())?;
    let verdict = a_equivalent(a, t, &result, budget)?;
    Ok(CoveredReplacement {
        result,
        fictive_prefix,
        verdict,
    })
}
