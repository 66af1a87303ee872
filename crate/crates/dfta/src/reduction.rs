//! Rewrite rules that drop fictive material (RFI) or reinstate it (AFI),
//! the deterministic reduction loop, and minimality against a candidate set.
//!
//! RFI rules only ever shrink a term: either a subterm collapses onto an
//! equivalent proper subterm of itself, or a variable that cannot influence
//! some surrounding subterm is pinned to a constant. AFI rules run the same
//! trades in reverse and exist for round-trip checks; `reduce` never uses
//! them.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::automaton::TreeAutomaton;
use crate::equivalence::{a_equivalent, ra_equivalent};
use crate::essential::{is_essential, is_r_essential};
use crate::term::{Position, Term};
use crate::{AnalysisError, Budget};

/// Which notion of "same behavior" the rules respect: agreement on the run
/// state everywhere, or agreement on acceptance only.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Mode {
    #[default]
    A,
    Ra,
}

impl Mode {
    /// True when `var` has no observable effect on `t` at this mode's
    /// granularity.
    fn fictive(
        self,
        a: &TreeAutomaton,
        t: &Term,
        var: u32,
        budget: Budget,
    ) -> Result<bool, AnalysisError> {
        let witness = match self {
            Mode::A => is_essential(a, t, var, budget)?,
            Mode::Ra => is_r_essential(a, t, var, budget)?,
        };
        Ok(witness.is_none())
    }

    fn equivalent(
        self,
        a: &TreeAutomaton,
        t: &Term,
        s: &Term,
        budget: Budget,
    ) -> Result<bool, AnalysisError> {
        let verdict = match self {
            Mode::A => a_equivalent(a, t, s, budget)?,
            Mode::Ra => ra_equivalent(a, t, s, budget)?,
        };
        Ok(verdict.holds())
    }

    /// Vets a rewritten whole term against the original. State agreement on
    /// a subterm carries to any context, so A-mode steps pass unchecked.
    /// Acceptance agreement does not (the context can map equal-acceptance
    /// states to different verdicts), so rA steps are confirmed in place
    /// and rejected candidates make the rules move on.
    fn admits(
        self,
        a: &TreeAutomaton,
        before: &Term,
        after: &Term,
        budget: Budget,
    ) -> Result<bool, AnalysisError> {
        match self {
            Mode::A => Ok(true),
            Mode::Ra => Ok(ra_equivalent(a, before, after, budget)?.holds()),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::A => write!(f, "A"),
            Mode::Ra => write!(f, "rA"),
        }
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "A" => Ok(Mode::A),
            "rA" => Ok(Mode::Ra),
            other => Err(format!("unknown mode `{other}` (expected A or rA)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepKind {
    RfiVariable,
    RfiSubterm,
    AfiVariable,
    AfiSubterm,
}

impl fmt::Display for StepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            StepKind::RfiVariable => "RFI-var",
            StepKind::RfiSubterm => "RFI-subterm",
            StepKind::AfiVariable => "AFI-var",
            StepKind::AfiSubterm => "AFI-subterm",
        };
        write!(f, "{name}")
    }
}

/// Rule-specific payload: which variable traded places with which nullary
/// symbol, or which nested pair of positions swapped roles. For subterm
/// rules `inner` is the kept (smaller) term's position and `outer` the
/// replaced one, both absolute; `inner` is resolved in whichever of
/// `before`/`after` contains the larger term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepDetail {
    Variable { var: u32, symbol: String },
    Subterm { inner: Position, outer: Position },
}

/// One applied rewrite. `before` and `after` are whole terms differing
/// exactly at `site`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteStep {
    pub kind: StepKind,
    pub site: Position,
    pub detail: StepDetail,
    pub before: Term,
    pub after: Term,
}

impl RewriteStep {
    /// One-line trace form:
    /// `RFI-subterm @1: replaced g2(g1(f1(x3),x2),x2) by x2`.
    pub fn render(&self) -> String {
        let old = self.before.subterm_at(&self.site).expect("site is in before");
        let new = self.after.subterm_at(&self.site).expect("site is in after");
        format!("{} @{}: replaced {} by {}", self.kind, self.site, old, new)
    }

    /// Re-applies the recorded replacement to `before`. Equals `after` for
    /// any step the rules emit.
    pub fn replay(&self) -> Result<Term, AnalysisError> {
        let new = self.after.subterm_at(&self.site)?;
        self.before.replace_at(&self.site, new.clone())
    }
}

/// Pins the variable at `p1` to the first declared nullary symbol across
/// the deepest surrounding subterm in which the variable is fictive: every
/// occurrence inside that subterm is substituted at once, occurrences
/// outside it stay. Absent when the variable is essential in every prefix
/// up to the whole term (in rA mode, also when every fictive prefix fails
/// the in-context acceptance check).
pub fn rfi_variable_step(
    a: &TreeAutomaton,
    t: &Term,
    p1: &Position,
    mode: Mode,
    budget: Budget,
) -> Result<Option<RewriteStep>, AnalysisError> {
    let var = match t.subterm_at(p1)? {
        Term::Var(i) => *i,
        _ => return Err(AnalysisError::NotAVariable(p1.clone())),
    };
    let sig = a.signature();
    let symbol = sig.name(sig.first_nullary()).to_string();
    let binding = BTreeMap::from([(var, Term::constant(&symbol))]);
    for site in p1.prefixes_to_root() {
        let sub = t.subterm_at(&site)?;
        if !mode.fictive(a, sub, var, budget)? {
            continue;
        }
        let after = t.replace_at(&site, sub.substitute(&binding))?;
        if !mode.admits(a, t, &after, budget)? {
            continue;
        }
        return Ok(Some(RewriteStep {
            kind: StepKind::RfiVariable,
            site,
            detail: StepDetail::Variable { var, symbol },
            before: t.clone(),
            after,
        }));
    }
    Ok(None)
}

/// Collapses the subterm at `p2` onto its first equivalent proper subterm,
/// scanning below `p2` shallowest-first and left-to-right. Absent when no
/// proper subterm qualifies.
pub fn rfi_subterm_step(
    a: &TreeAutomaton,
    t: &Term,
    p2: &Position,
    mode: Mode,
    budget: Budget,
) -> Result<Option<RewriteStep>, AnalysisError> {
    let outer = t.subterm_at(p2)?;
    let mut below = outer.positions().all;
    below.sort_by(Position::shortlex_cmp);
    for q in below {
        if q.is_root() {
            continue;
        }
        let inner = outer.subterm_at(&q)?;
        if !mode.equivalent(a, inner, outer, budget)? {
            continue;
        }
        let after = t.replace_at(p2, inner.clone())?;
        if !mode.admits(a, t, &after, budget)? {
            continue;
        }
        return Ok(Some(RewriteStep {
            kind: StepKind::RfiSubterm,
            site: p2.clone(),
            detail: StepDetail::Subterm {
                inner: p2.join(&q),
                outer: p2.clone(),
            },
            before: t.clone(),
            after,
        }));
    }
    Ok(None)
}

/// Relabels the constant at `p1` as variable `var`, provided the deepest
/// possible surrounding subterm tolerates it: the variable must not already
/// occur there (a second occurrence would couple to the new one and change
/// the meaning) and must be fictive in the relabeled subterm. Inverse of
/// [`rfi_variable_step`].
pub fn afi_variable_step(
    a: &TreeAutomaton,
    t: &Term,
    p1: &Position,
    var: u32,
    mode: Mode,
    budget: Budget,
) -> Result<Option<RewriteStep>, AnalysisError> {
    let symbol = match t.subterm_at(p1)? {
        Term::App(s, children) if children.is_empty() => s.clone(),
        _ => return Err(AnalysisError::NotAConstant(p1.clone())),
    };
    for site in p1.prefixes_to_root() {
        let sub = t.subterm_at(&site)?;
        if sub.vars().contains(&var) {
            continue;
        }
        let rel = p1.relative_to(&site).expect("chain prefix");
        let relabeled = sub.replace_at(&rel, Term::var(var))?;
        if !mode.fictive(a, &relabeled, var, budget)? {
            continue;
        }
        let after = t.replace_at(&site, relabeled)?;
        if !mode.admits(a, t, &after, budget)? {
            continue;
        }
        return Ok(Some(RewriteStep {
            kind: StepKind::AfiVariable,
            site,
            detail: StepDetail::Variable { var, symbol },
            before: t.clone(),
            after,
        }));
    }
    Ok(None)
}

/// Replaces the subterm at `p` by an equivalent strictly larger term that
/// contains it. Inverse of [`rfi_subterm_step`]; feeding a step's removed
/// subterm back in restores the original term exactly.
pub fn afi_subterm_step(
    a: &TreeAutomaton,
    t: &Term,
    p: &Position,
    replacement: &Term,
    mode: Mode,
    budget: Budget,
) -> Result<Option<RewriteStep>, AnalysisError> {
    let inner = t.subterm_at(p)?;
    let q = replacement
        .proper_subterm_position(inner)
        .ok_or_else(|| AnalysisError::NotAProperSuperterm(p.clone()))?;
    if !mode.equivalent(a, inner, replacement, budget)? {
        return Ok(None);
    }
    let after = t.replace_at(p, replacement.clone())?;
    if !mode.admits(a, t, &after, budget)? {
        return Ok(None);
    }
    Ok(Some(RewriteStep {
        kind: StepKind::AfiSubterm,
        site: p.clone(),
        detail: StepDetail::Subterm {
            inner: p.join(&q),
            outer: p.clone(),
        },
        before: t.clone(),
        after,
    }))
}

// Every RFI step strictly decreases this: the subterm rule drops nodes,
// the variable rule keeps the node count and drops variable leaves.
fn measure(t: &Term) -> (usize, usize) {
    (t.node_count(), t.positions().variables.len())
}

/// The fixed strategy's next step: the subterm rule at the shallowest site
/// where it applies, else the variable rule at the first variable
/// occurrence in path order.
fn first_step(
    a: &TreeAutomaton,
    t: &Term,
    mode: Mode,
    budget: Budget,
) -> Result<Option<RewriteStep>, AnalysisError> {
    let positions = t.positions();
    let mut sites = positions.all;
    sites.sort_by(Position::shortlex_cmp);
    for p in &sites {
        if let Some(step) = rfi_subterm_step(a, t, p, mode, budget)? {
            return Ok(Some(step));
        }
    }
    for (p1, _) in &positions.variables {
        if let Some(step) = rfi_variable_step(a, t, p1, mode, budget)? {
            return Ok(Some(step));
        }
    }
    Ok(None)
}

/// Applies RFI steps to a fixpoint, restarting the scan after every hit,
/// and returns the irreducible result with the full trace. The result is
/// equivalent to the input at the chosen mode's granularity.
pub fn reduce(
    a: &TreeAutomaton,
    t: &Term,
    mode: Mode,
    budget: Budget,
) -> Result<(Term, Vec<RewriteStep>), AnalysisError> {
    let mut current = t.clone();
    let mut steps = Vec::new();
    while let Some(step) = first_step(a, &current, mode, budget)? {
        debug_assert!(measure(&step.after) < measure(&step.before));
        current = step.after.clone();
        steps.push(step);
    }
    Ok((current, steps))
}

/// True iff no RFI step applies anywhere in `t`.
pub fn is_rfi_irreducible(
    a: &TreeAutomaton,
    t: &Term,
    mode: Mode,
    budget: Budget,
) -> Result<bool, AnalysisError> {
    Ok(first_step(a, t, mode, budget)?.is_none())
}

/// Every applicable RFI step: all equivalent proper subterms at every site
/// (not just the first), all fictive chain prefixes (not just the deepest),
/// all nullary replacements (not just the first declared). This is the full
/// one-step relation; `reduce` commits to one deterministic slice of it,
/// while reachability questions need the whole thing.
pub fn all_rfi_steps(
    a: &TreeAutomaton,
    t: &Term,
    mode: Mode,
    budget: Budget,
) -> Result<Vec<RewriteStep>, AnalysisError> {
    let mut out = Vec::new();
    let positions = t.positions();
    for p2 in &positions.all {
        let outer = t.subterm_at(p2)?;
        let mut below = outer.positions().all;
        below.sort_by(Position::shortlex_cmp);
        for q in below {
            if q.is_root() {
                continue;
            }
            let inner = outer.subterm_at(&q)?;
            if !mode.equivalent(a, inner, outer, budget)? {
                continue;
            }
            let after = t.replace_at(p2, inner.clone())?;
            if !mode.admits(a, t, &after, budget)? {
                continue;
            }
            out.push(RewriteStep {
                kind: StepKind::RfiSubterm,
                site: p2.clone(),
                detail: StepDetail::Subterm {
                    inner: p2.join(&q),
                    outer: p2.clone(),
                },
                before: t.clone(),
                after,
            });
        }
    }
    let sig = a.signature();
    for (p1, var) in &positions.variables {
        for site in p1.prefixes_to_root() {
            let sub = t.subterm_at(&site)?;
            if !mode.fictive(a, sub, *var, budget)? {
                continue;
            }
            for c in sig.nullary_ids() {
                let symbol = sig.name(c).to_string();
                let binding = BTreeMap::from([(*var, Term::constant(&symbol))]);
                let after = t.replace_at(&site, sub.substitute(&binding))?;
                if !mode.admits(a, t, &after, budget)? {
                    continue;
                }
                out.push(RewriteStep {
                    kind: StepKind::RfiVariable,
                    site: site.clone(),
                    detail: StepDetail::Variable { var: *var, symbol },
                    before: t.clone(),
                    after,
                });
            }
        }
    }
    Ok(out)
}

/// Whether some nonempty sequence of RFI steps turns `from` into `to`.
/// Breadth-first over the full step relation; the strictly shrinking step
/// measure keeps the explored space finite.
pub fn reduces_to(
    a: &TreeAutomaton,
    from: &Term,
    to: &Term,
    mode: Mode,
    budget: Budget,
) -> Result<bool, AnalysisError> {
    let mut seen = HashSet::from([from.clone()]);
    let mut queue = VecDeque::from([from.clone()]);
    while let Some(current) = queue.pop_front() {
        for step in all_rfi_steps(a, &current, mode, budget)? {
            if step.after == *to {
                return Ok(true);
            }
            if seen.insert(step.after.clone()) {
                queue.push_back(step.after);
            }
        }
    }
    Ok(false)
}

/// Whether `t` is the bottom of its equivalence class within `candidates`:
/// every equivalent candidate either is `t` or rewrites to it. `t` itself
/// must be among the candidates.
pub fn is_minimal_in(
    a: &TreeAutomaton,
    t: &Term,
    candidates: &[Term],
    mode: Mode,
    budget: Budget,
) -> Result<bool, AnalysisError> {
    if !candidates.contains(t) {
        return Err(AnalysisError::Precondition(format!(
            "`{t}` is not among the candidates"
        )));
    }
    for s in candidates {
        if s == t || !mode.equivalent(a, s, t, budget)? {
            continue;
        }
        if !reduces_to(a, s, t, mode, budget)? {
            return Ok(false);
        }
    }
    Ok(true)
}
