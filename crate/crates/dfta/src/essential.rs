//! Which variables of a term actually matter to an automaton.
//!
//! A variable is *essential* when changing only its value can change the
//! state the run reaches, and *r-essential* when changing only its value
//! can flip acceptance. Every r-essential variable is essential; the
//! converse fails as soon as two distinct states are both final or both
//! non-final. A variable that is not essential is called fictive.
//!
//! Essentiality propagates downward: an essential variable of a term is
//! essential in at least one immediate subterm, and by iteration there is
//! a chain of nested subterms, one child step at a time, ending at an
//! occurrence of the variable, with the variable essential in every link.
//! [`essential_chain`] computes that chain and fails loudly if the descent
//! ever gets stuck, so property suites can lean on it.
//!
//! All searches here are exhaustive sweeps over assignment space and are
//! refused up front when `|constants|^|variables|` exceeds the budget.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::automaton::{assignments_over, Assignment, TreeAutomaton};
use crate::term::{Position, Term};
use crate::{AnalysisError, Budget};

/// Two assignments that differ only at one variable and provably
/// distinguish it: the runs reach `state1` and `state2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub gamma1: Assignment,
    pub gamma2: Assignment,
    pub state1: usize,
    pub state2: usize,
}

impl Witness {
    pub fn render(&self, a: &TreeAutomaton) -> String {
        format!(
            "witness \u{3b3}1={} \u{3b3}2={} states {}/{}",
            self.gamma1.render(a.signature()),
            self.gamma2.render(a.signature()),
            a.state_name(self.state1),
            a.state_name(self.state2),
        )
    }
}

/// What a witness must separate: the reached states themselves, or only
/// their acceptance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Separation {
    State,
    Acceptance,
}

/// First witness in enumeration order, if any: sweep assignments of the
/// other variables lexicographically, and for each try the value pairs
/// for `var` in declaration order.
fn witness_search(
    a: &TreeAutomaton,
    t: &Term,
    var: u32,
    mode: Separation,
    budget: Budget,
) -> Result<Option<Witness>, AnalysisError> {
    let mut vars = t.vars();
    if !vars.remove(&var) {
        return Ok(None);
    }
    budget.require(Budget::assignment_space(
        a.signature().nullary_count(),
        vars.len() + 1,
    ))?;
    let values: Vec<usize> = a.signature().nullary_ids().collect();
    for base in assignments_over(&vars, a.signature()) {
        let states: Vec<usize> = values
            .iter()
            .map(|&v| a.run(&base.clone().with(var, v), t))
            .collect::<Result<_, _>>()?;
        for i in 0..values.len() {
            for j in i + 1..values.len() {
                let separated = match mode {
                    Separation::State => states[i] != states[j],
                    Separation::Acceptance => a.is_final(states[i]) != a.is_final(states[j]),
                };
                if separated {
                    return Ok(Some(Witness {
                        gamma1: base.clone().with(var, values[i]),
                        gamma2: base.clone().with(var, values[j]),
                        state1: states[i],
                        state2: states[j],
                    }));
                }
            }
        }
    }
    Ok(None)
}

pub fn is_essential(
    a: &TreeAutomaton,
    t: &Term,
    var: u32,
    budget: Budget,
) -> Result<Option<Witness>, AnalysisError> {
    witness_search(a, t, var, Separation::State, budget)
}

pub fn is_r_essential(
    a: &TreeAutomaton,
    t: &Term,
    var: u32,
    budget: Budget,
) -> Result<Option<Witness>, AnalysisError> {
    witness_search(a, t, var, Separation::Acceptance, budget)
}

pub fn ess_set(
    a: &TreeAutomaton,
    t: &Term,
    budget: Budget,
) -> Result<BTreeSet<u32>, AnalysisError> {
    let mut out = BTreeSet::new();
    for &v in &t.vars() {
        if is_essential(a, t, v, budget)?.is_some() {
            out.insert(v);
        }
    }
    Ok(out)
}

pub fn r_ess_set(
    a: &TreeAutomaton,
    t: &Term,
    budget: Budget,
) -> Result<BTreeSet<u32>, AnalysisError> {
    let mut out = BTreeSet::new();
    for &v in &t.vars() {
        if is_r_essential(a, t, v, budget)?.is_some() {
            out.insert(v);
        }
    }
    Ok(out)
}

/// A chain of positions from an occurrence of `var` up to the root, one
/// step at a time, such that `var` is essential in the subterm at every
/// position on it. Returns `None` when `var` is not essential in `t`.
///
/// The descent always enters the least child (by argument index) that
/// keeps the variable essential; an `Err` here means no child qualified,
/// which would contradict the downward-propagation property and is
/// exactly what the property suite watches for.
pub fn essential_chain(
    a: &TreeAutomaton,
    t: &Term,
    var: u32,
    budget: Budget,
) -> Result<Option<Vec<Position>>, AnalysisError> {
    if is_essential(a, t, var, budget)?.is_none() {
        return Ok(None);
    }
    let mut chain = vec![Position::root()];
    let mut pos = Position::root();
    loop {
        let sub = t.subterm_at(&pos).expect("chain positions are valid");
        match sub {
            Term::Var(v) => {
                debug_assert_eq!(*v, var);
                break;
            }
            Term::App(_, children) => {
                let mut advanced = false;
                for k in 1..=children.len() {
                    let child = pos.child(k as u32);
                    let child_term = t.subterm_at(&child).unwrap();
                    if is_essential(a, child_term, var, budget)?.is_some() {
                        chain.push(child.clone());
                        pos = child;
                        advanced = true;
                        break;
                    }
                }
                if !advanced {
                    return Err(AnalysisError::Precondition(format!(
                        "x{var} is essential at {pos} but in none of the children",
                    )));
                }
            }
        }
    }
    chain.reverse();
    Ok(Some(chain))
}

/// Both variable classifications of a term, with the first witness found
/// for each variable that has one.
#[derive(Debug, Clone)]
pub struct EssentialityReport {
    pub term: Term,
    pub essential: BTreeSet<u32>,
    pub r_essential: BTreeSet<u32>,
    /// State-separating witness per essential variable.
    pub witnesses: BTreeMap<u32, Witness>,
    /// Acceptance-separating witness per r-essential variable.
    pub r_witnesses: BTreeMap<u32, Witness>,
}

pub fn analyze(
    a: &TreeAutomaton,
    t: &Term,
    budget: Budget,
) -> Result<EssentialityReport, AnalysisError> {
    let mut report = EssentialityReport {
        term: t.clone(),
        essential: BTreeSet::new(),
        r_essential: BTreeSet::new(),
        witnesses: BTreeMap::new(),
        r_witnesses: BTreeMap::new(),
    };
    for &v in &t.vars() {
        if let Some(w) = is_essential(a, t, v, budget)? {
            report.essential.insert(v);
            report.witnesses.insert(v, w);
        }
        if let Some(w) = is_r_essential(a, t, v, budget)? {
            report.r_essential.insert(v);
            report.r_witnesses.insert(v, w);
        }
    }
    Ok(report)
}

impl EssentialityReport {
    /// One line per variable of the term, in variable order. R-essential
    /// variables show their acceptance-separating witness, the others the
    /// state-separating one.
    pub fn render(&self, a: &TreeAutomaton) -> String {
        let mut out = String::new();
        for &v in &self.term.vars() {
            if self.r_essential.contains(&v) {
                writeln!(
                    out,
                    "x{v}: essential, r-essential, {}",
                    self.r_witnesses[&v].render(a)
                )
                .unwrap();
            } else if self.essential.contains(&v) {
                writeln!(
                    out,
                    "x{v}: essential, not r-essential, {}",
                    self.witnesses[&v].render(a)
                )
                .unwrap();
            } else {
                writeln!(out, "x{v}: not essential").unwrap();
            }
        }
        out
    }
}
