//! Ground-language analysis: which states matter, whether the accepted
//! ground-term set is finite, bounded enumeration, table minimization, and
//! the finite-language pipeline that pairs a minimized automaton with its
//! reduced term list.
//!
//! Everything here reads the language over ground terms. Terms with
//! variables describe families of runs and are the rewrite modules'
//! business; a language question ("how many accepted trees are there?")
//! only makes sense once the leaves are concrete.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::automaton::TreeAutomaton;
use crate::equivalence::a_equivalent;
use crate::reduction::{reduce, Mode, RewriteStep};
use crate::term::Term;
use crate::{AnalysisError, Budget};

/// Which states can occur in a ground run (`reachable`), which can still
/// lead into acceptance (`coreachable`), and their intersection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UsefulnessReport {
    pub reachable: BTreeSet<usize>,
    pub coreachable: BTreeSet<usize>,
    pub useful: BTreeSet<usize>,
}

// Lexicographic odometer over `len`-tuples drawn from `pool`.
fn for_each_tuple(pool: &[usize], len: usize, mut f: impl FnMut(&[usize])) {
    if pool.is_empty() && len > 0 {
        return;
    }
    let mut idx = vec![0usize; len];
    loop {
        let tuple: Vec<usize> = idx.iter().map(|&i| pool[i]).collect();
        f(&tuple);
        let mut k = len;
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < pool.len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// Least fixpoints: `reachable` closes the constant image under all
/// transitions; `coreachable` grows backwards from the final states through
/// transitions whose argument slots can all be filled by reachable states.
pub fn usefulness(a: &TreeAutomaton) -> UsefulnessReport {
    let sig = a.signature();
    let arities: Vec<usize> = sig.symbols().map(|(_, n)| n).collect();

    let mut reachable = a.nullary_image();
    loop {
        let pool: Vec<usize> = reachable.iter().copied().collect();
        let mut grew = false;
        for (id, &arity) in arities.iter().enumerate() {
            if arity == 0 {
                continue;
            }
            for_each_tuple(&pool, arity, |args| {
                if reachable.insert(a.transition(id, args)) {
                    grew = true;
                }
            });
        }
        if !grew {
            break;
        }
    }

    let pool: Vec<usize> = reachable.iter().copied().collect();
    let mut coreachable: BTreeSet<usize> = a.final_states().collect();
    loop {
        let mut grew = false;
        for (id, &arity) in arities.iter().enumerate() {
            if arity == 0 {
                continue;
            }
            for_each_tuple(&pool, arity, |args| {
                if coreachable.contains(&a.transition(id, args)) {
                    for &q in args {
                        if coreachable.insert(q) {
                            grew = true;
                        }
                    }
                }
            });
        }
        if !grew {
            break;
        }
    }

    let useful = reachable.intersection(&coreachable).copied().collect();
    UsefulnessReport {
        reachable,
        coreachable,
        useful,
    }
}

/// A state cycle realizable inside accepted runs. Repeating its transitions
/// pumps one accepted ground term into infinitely many.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PumpCycle {
    /// The cycle's states, first repeated last.
    pub states: Vec<String>,
    /// One symbol per edge.
    pub symbols: Vec<String>,
}

impl PumpCycle {
    /// E.g. `q0 -> q1 -> q0 via f1, f1`.
    pub fn render(&self) -> String {
        format!("{} via {}", self.states.join(" -> "), self.symbols.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Finiteness {
    Finite,
    Infinite(PumpCycle),
}

impl Finiteness {
    pub fn is_finite(&self) -> bool {
        matches!(self, Finiteness::Finite)
    }

    pub fn witness(&self) -> Option<&PumpCycle> {
        match self {
            Finiteness::Finite => None,
            Finiteness::Infinite(c) => Some(c),
        }
    }
}

/// Decides finiteness of the accepted ground-term set. The language is
/// infinite exactly when the graph on useful states (an edge per transition
/// slot fed by reachable states) has a cycle; the first cycle found, with
/// states visited in index order and edges in declaration order, is the
/// witness.
pub fn is_finite_language(a: &TreeAutomaton) -> Finiteness {
    let report = usefulness(a);
    let useful = &report.useful;
    let pool: Vec<usize> = report.reachable.iter().copied().collect();
    let arities: Vec<usize> = a.signature().symbols().map(|(_, n)| n).collect();

    let mut adjacency: Vec<Vec<(usize, usize)>> = vec![Vec::new(); a.state_count()];
    for (id, &arity) in arities.iter().enumerate() {
        if arity == 0 {
            continue;
        }
        for_each_tuple(&pool, arity, |args| {
            let target = a.transition(id, args);
            if !useful.contains(&target) {
                return;
            }
            for &q in args {
                if useful.contains(&q) && !adjacency[q].iter().any(|&(v, _)| v == target) {
                    adjacency[q].push((target, id));
                }
            }
        });
    }

    #[derive(Clone, Copy, PartialEq)]
    enum Color {
        White,
        Gray,
        Black,
    }

    fn dfs(
        a: &TreeAutomaton,
        adjacency: &[Vec<(usize, usize)>],
        color: &mut [Color],
        path: &mut Vec<usize>,
        labels: &mut Vec<usize>,
        u: usize,
    ) -> Option<PumpCycle> {
        color[u] = Color::Gray;
        path.push(u);
        for &(v, symbol) in &adjacency[u] {
            match color[v] {
                Color::Gray => {
                    let at = path.iter().position(|&x| x == v).expect("gray is on path");
                    let mut states: Vec<String> =
                        path[at..].iter().map(|&q| a.state_name(q).to_string()).collect();
                    states.push(a.state_name(v).to_string());
                    let mut symbols: Vec<String> = labels[at..]
                        .iter()
                        .map(|&s| a.signature().name(s).to_string())
                        .collect();
                    symbols.push(a.signature().name(symbol).to_string());
                    return Some(PumpCycle { states, symbols });
                }
                Color::White => {
                    labels.push(symbol);
                    if let Some(c) = dfs(a, adjacency, color, path, labels, v) {
                        return Some(c);
                    }
                    labels.pop();
                }
                Color::Black => {}
            }
        }
        path.pop();
        color[u] = Color::Black;
        None
    }

    let mut color = vec![Color::White; a.state_count()];
    for &root in useful {
        if color[root] != Color::White {
            continue;
        }
        let mut path = Vec::new();
        let mut labels = Vec::new();
        if let Some(cycle) = dfs(a, &adjacency, &mut color, &mut path, &mut labels, root) {
            return Finiteness::Infinite(cycle);
        }
    }
    Finiteness::Finite
}

/// All accepted ground terms of depth at most `max_depth`, shallowest
/// first and alphabetically within a depth. The budget is checked against
/// the total number of candidate terms before any are built; for a finite
/// language, `max_depth = |Q|` captures everything (a deeper accepted term
/// would repeat a state along a root path and pump).
pub fn enumerate_ground(
    a: &TreeAutomaton,
    max_depth: usize,
    budget: Budget,
) -> Result<Vec<Term>, AnalysisError> {
    let sig = a.signature();
    let arities: Vec<usize> = sig.symbols().map(|(_, n)| n).collect();
    let consts = sig.nullary_count() as u128;

    let mut predicted = consts;
    let mut level = consts;
    for _ in 0..max_depth {
        let mut next = consts;
        for &arity in &arities {
            if arity > 0 {
                next = next.saturating_add(level.saturating_pow(arity as u32));
            }
        }
        predicted = predicted.saturating_add(next);
        level = next;
    }
    budget.require(predicted)?;

    let mut terms: Vec<(Term, usize)> = sig
        .nullary_ids()
        .map(|c| (Term::constant(sig.name(c)), a.nullary_target(c)))
        .collect();
    for _ in 0..max_depth {
        let mut next = terms.clone();
        next.truncate(sig.nullary_count());
        let indices: Vec<usize> = (0..terms.len()).collect();
        for (id, &arity) in arities.iter().enumerate() {
            if arity == 0 {
                continue;
            }
            for_each_tuple(&indices, arity, |picks| {
                let children: Vec<Term> = picks.iter().map(|&i| terms[i].0.clone()).collect();
                let states: Vec<usize> = picks.iter().map(|&i| terms[i].1).collect();
                let state = a.transition(id, &states);
                next.push((Term::app(sig.name(id), children), state));
            });
        }
        terms = next;
    }

    let mut accepted: Vec<Term> = terms
        .into_iter()
        .filter(|&(_, q)| a.is_final(q))
        .map(|(t, _)| t)
        .collect();
    accepted.sort_by_key(|t| (t.depth(), t.to_string()));
    Ok(accepted)
}

/// One term's passage through `reduce`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionTrace {
    pub input: Term,
    pub steps: Vec<RewriteStep>,
    pub result: Term,
}

/// Reduces every term and deduplicates structurally equal results, keeping
/// first-occurrence order. One trace per input term, dropped duplicates
/// included.
pub fn minimal_language_traced(
    a: &TreeAutomaton,
    terms: &[Term],
    budget: Budget,
) -> Result<(Vec<Term>, Vec<ReductionTrace>), AnalysisError> {
    let mut language = Vec::new();
    let mut traces = Vec::new();
    for t in terms {
        let (result, steps) = reduce(a, t, Mode::A, budget)?;
        if !language.contains(&result) {
            language.push(result.clone());
        }
        traces.push(ReductionTrace {
            input: t.clone(),
            steps,
            result,
        });
    }
    Ok((language, traces))
}

pub fn minimal_language(
    a: &TreeAutomaton,
    terms: &[Term],
    budget: Budget,
) -> Result<Vec<Term>, AnalysisError> {
    Ok(minimal_language_traced(a, terms, budget)?.0)
}

/// Whether each term of either sequence has an equivalent partner in the
/// other.
pub fn languages_equivalent(
    a: &TreeAutomaton,
    l1: &[Term],
    l2: &[Term],
    budget: Budget,
) -> Result<bool, AnalysisError> {
    for (from, to) in [(l1, l2), (l2, l1)] {
        for t in from {
            let mut matched = false;
            for s in to {
                if a_equivalent(a, t, s, budget)?.holds() {
                    matched = true;
                    break;
                }
            }
            if !matched {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Smallest deterministic complete table with the same ground language:
/// drops unreachable states, then refines the final/non-final split until
/// no one-slot probe (the other slots ranging over all reachable states)
/// tells two states of a block apart, and quotients. Output states are
/// named q0, q1, ... with blocks ordered by the least original state name
/// they contain, so equal inputs yield textually equal outputs.
pub fn minimize_automaton(a: &TreeAutomaton) -> TreeAutomaton {
    let sig = a.signature();
    let arities: Vec<usize> = sig.symbols().map(|(_, n)| n).collect();
    let reachable: Vec<usize> = usefulness(a).reachable.into_iter().collect();

    let mut block_of: HashMap<usize, usize> = HashMap::new();
    let mut block_count = 0;
    for wanted in [true, false] {
        let members: Vec<usize> = reachable
            .iter()
            .copied()
            .filter(|&q| a.is_final(q) == wanted)
            .collect();
        if !members.is_empty() {
            for q in members {
                block_of.insert(q, block_count);
            }
            block_count += 1;
        }
    }

    loop {
        let mut groups: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for &q in &reachable {
            let mut key = vec![block_of[&q]];
            for (id, &arity) in arities.iter().enumerate() {
                if arity == 0 {
                    continue;
                }
                for slot in 0..arity {
                    for_each_tuple(&reachable, arity - 1, |rest| {
                        let mut args = Vec::with_capacity(arity);
                        args.extend_from_slice(&rest[..slot]);
                        args.push(q);
                        args.extend_from_slice(&rest[slot..]);
                        key.push(block_of[&a.transition(id, &args)]);
                    });
                }
            }
            groups.entry(key).or_default().push(q);
        }
        if groups.len() == block_count {
            break;
        }
        block_count = groups.len();
        for (next_id, members) in groups.values().enumerate() {
            for &q in members {
                block_of.insert(q, next_id);
            }
        }
    }

    // Canonical block order: by least original state name.
    let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); block_count];
    for &q in &reachable {
        blocks[block_of[&q]].push(q);
    }
    blocks.sort_by_key(|members| {
        members
            .iter()
            .map(|&q| a.state_name(q).to_string())
            .min()
            .expect("blocks are nonempty")
    });
    let mut renamed: HashMap<usize, usize> = HashMap::new();
    for (new_id, members) in blocks.iter().enumerate() {
        for &q in members {
            renamed.insert(q, new_id);
        }
    }
    let name = |q: usize| format!("q{}", renamed[&q]);

    let mut b = crate::automaton::AutomatonBuilder::new();
    for i in 0..block_count {
        b = b.state(format!("q{i}"));
    }
    for (i, members) in blocks.iter().enumerate() {
        if a.is_final(members[0]) {
            b = b.final_state(format!("q{i}"));
        }
    }
    for c in sig.nullary_ids() {
        b = b.constant(sig.name(c), name(a.nullary_target(c)));
    }
    let representatives: Vec<usize> = {
        let mut by_new_id = vec![0usize; block_count];
        for (i, members) in blocks.iter().enumerate() {
            by_new_id[i] = members[0];
        }
        by_new_id
    };
    let new_ids: Vec<usize> = (0..block_count).collect();
    for (id, &arity) in arities.iter().enumerate() {
        if arity == 0 {
            continue;
        }
        let mut rows: Vec<(Vec<String>, String)> = Vec::new();
        for_each_tuple(&new_ids, arity, |args| {
            let originals: Vec<usize> = args.iter().map(|&i| representatives[i]).collect();
            let target = name(a.transition(id, &originals));
            rows.push((args.iter().map(|&i| format!("q{i}")).collect(), target));
        });
        for (args, target) in rows {
            b = b.rule(sig.name(id), args, target);
        }
    }
    b.build().expect("quotient of a valid automaton is valid")
}

/// A minimized table together with the reduced forms of its finite ground
/// language.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OptimalPair {
    pub automaton: TreeAutomaton,
    pub language: Vec<Term>,
    pub trace: Vec<ReductionTrace>,
}

impl OptimalPair {
    /// The `.terms` serialization: one term per line, enumeration order.
    pub fn terms_file(&self) -> String {
        let mut out = String::new();
        for t in &self.language {
            out.push_str(&t.to_string());
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PairOutcome {
    /// No finite pair exists; the cycle shows why.
    Infinite(PumpCycle),
    Optimal(OptimalPair),
}

/// The full pipeline: decide finiteness; if finite, enumerate the language
/// to the pumping bound, reduce it (against the ORIGINAL automaton, whose
/// equivalences are what the reductions must respect), and minimize the
/// table.
pub fn optimal_pair(a: &TreeAutomaton, budget: Budget) -> Result<PairOutcome, AnalysisError> {
    if let Finiteness::Infinite(cycle) = is_finite_language(a) {
        return Ok(PairOutcome::Infinite(cycle));
    }
    let ground = enumerate_ground(a, a.state_count(), budget)?;
    let (language, trace) = minimal_language_traced(a, &ground, budget)?;
    let automaton = minimize_automaton(a);
    Ok(PairOutcome::Optimal(OptimalPair {
        automaton,
        language,
        trace,
    }))
}
