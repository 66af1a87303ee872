//! Complete deterministic bottom-up tree automata and their text format.
//!
//! An automaton is a finite state set, a set of final states, and one total
//! transition map per symbol: nullary symbols map directly to states, a
//! symbol of arity `n` maps every `n`-tuple of states to a state. Totality
//! and determinism are established once, at construction; every accepted
//! [`TreeAutomaton`] value is valid by construction, so runs never consult
//! a partial table.
//!
//! # Text format
//!
//! One directive per line. `#` starts a comment, blank lines are skipped.
//!
//! ```text
//! states: q0 q1        # exactly once, before everything else
//! final: q1            # exactly once; the list may be empty
//! const 0 -> q0        # nullary symbol
//! rule f1(q0) -> q1    # arity inferred from the argument tuple
//! ```
//!
//! Symbol arities are inferred from use and must be consistent. Validation
//! collects *all* problems (missing tuples, unknown states, conflicting
//! rules, ...) rather than stopping at the first.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::term::{is_variable_form, Signature, Term};
use crate::{AnalysisError, Budget};

/// A validation finding for a raw automaton description.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Diagnostic {
    EmptyStateSet,
    DuplicateState(String),
    BadStateName(String),
    BadSymbolName(String),
    ReservedSymbolName(String),
    NoNullarySymbol,
    UnknownFinalState(String),
    UnknownState { state: String, site: String },
    ArityConflict { symbol: String, arities: (usize, usize) },
    DuplicateTransition { site: String },
    ConflictingTransitions { site: String, targets: (String, String) },
    MissingTransition { symbol: String, args: Vec<String> },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::EmptyStateSet => write!(f, "no states declared"),
            Diagnostic::DuplicateState(s) => write!(f, "duplicate state `{s}`"),
            Diagnostic::BadStateName(s) => write!(f, "`{s}` is not a valid state name"),
            Diagnostic::BadSymbolName(s) => write!(f, "`{s}` is not a valid symbol name"),
            Diagnostic::ReservedSymbolName(s) => {
                write!(f, "symbol name `{s}` is reserved for variables")
            }
            Diagnostic::NoNullarySymbol => write!(f, "no constants declared"),
            Diagnostic::UnknownFinalState(s) => write!(f, "unknown final state `{s}`"),
            Diagnostic::UnknownState { state, site } => {
                write!(f, "unknown state `{state}` in {site}")
            }
            Diagnostic::ArityConflict { symbol, arities } => write!(
                f,
                "symbol `{symbol}` used with arity {} and arity {}",
                arities.0, arities.1
            ),
            Diagnostic::DuplicateTransition { site } => {
                write!(f, "duplicate rule for {site}")
            }
            Diagnostic::ConflictingTransitions { site, targets } => write!(
                f,
                "conflicting rules: {site} -> {} and {site} -> {}",
                targets.0, targets.1
            ),
            Diagnostic::MissingTransition { symbol, args } => {
                if args.is_empty() {
                    write!(f, "missing constant mapping for {symbol}")
                } else {
                    write!(f, "missing transition {symbol}({})", args.join(","))
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvalidAutomaton {
    pub diagnostics: Vec<Diagnostic>,
}

impl fmt::Display for InvalidAutomaton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid automaton ({} problems):", self.diagnostics.len())?;
        for d in &self.diagnostics {
            write!(f, "\n  {d}")?;
        }
        Ok(())
    }
}

impl std::error::Error for InvalidAutomaton {}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FtaError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error(transparent)]
    Invalid(#[from] InvalidAutomaton),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RunError {
    #[error("variable x{0} is not bound by the assignment")]
    UnboundVariable(u32),
    #[error("symbol `{0}` is unknown to the automaton")]
    UnknownSymbol(String),
    #[error("symbol `{symbol}` has arity {expected}, term node has {found} children")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
    },
}

fn is_identifier(name: &str) -> bool {
    !name.is_empty()
        && name
            .bytes()
            .all(|b| b.is_ascii_alphanumeric() || b == b'_')
}

/// Raw, possibly ill-formed automaton description. [`validate`] reports
/// every problem; [`build`] turns a clean description into a
/// [`TreeAutomaton`].
///
/// [`validate`]: AutomatonBuilder::validate
/// [`build`]: AutomatonBuilder::build
#[derive(Debug, Clone, Default)]
pub struct AutomatonBuilder {
    states: Vec<String>,
    finals: Vec<String>,
    consts: Vec<(String, String)>,
    rules: Vec<(String, Vec<String>, String)>,
}

impl AutomatonBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn state(mut self, name: impl Into<String>) -> Self {
        self.states.push(name.into());
        self
    }

    pub fn final_state(mut self, name: impl Into<String>) -> Self {
        self.finals.push(name.into());
        self
    }

    pub fn constant(mut self, symbol: impl Into<String>, state: impl Into<String>) -> Self {
        self.consts.push((symbol.into(), state.into()));
        self
    }

    pub fn rule<S: Into<String>>(
        mut self,
        symbol: impl Into<String>,
        args: impl IntoIterator<Item = S>,
        target: impl Into<String>,
    ) -> Self {
        self.rules.push((
            symbol.into(),
            args.into_iter().map(Into::into).collect(),
            target.into(),
        ));
        self
    }

    /// Symbols with their inferred arity, in first-occurrence order.
    /// Arity conflicts keep the first arity seen.
    fn inferred_symbols(&self) -> Vec<(String, usize)> {
        let mut seen: HashMap<&str, usize> = HashMap::new();
        let mut out: Vec<(String, usize)> = Vec::new();
        let consts = self.consts.iter().map(|(s, _)| (s, 0));
        let rules = self.rules.iter().map(|(s, args, _)| (s, args.len()));
        for (sym, arity) in consts.chain(rules) {
            if !seen.contains_key(sym.as_str()) {
                seen.insert(sym, arity);
                out.push((sym.clone(), arity));
            }
        }
        out
    }

    /// Collects every violation: bad names, unknown states, arity
    /// conflicts, duplicated or conflicting rules, and — for the declared
    /// state set — every missing tuple of every symbol.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        if self.states.is_empty() {
            out.push(Diagnostic::EmptyStateSet);
        }
        let mut state_set: BTreeSet<&str> = BTreeSet::new();
        for s in &self.states {
            if !is_identifier(s) {
                out.push(Diagnostic::BadStateName(s.clone()));
            } else if !state_set.insert(s) {
                out.push(Diagnostic::DuplicateState(s.clone()));
            }
        }
        for s in &self.finals {
            if !state_set.contains(s.as_str()) {
                out.push(Diagnostic::UnknownFinalState(s.clone()));
            }
        }

        let symbols = self.inferred_symbols();
        let arity_of: HashMap<&str, usize> =
            symbols.iter().map(|(s, a)| (s.as_str(), *a)).collect();
        for (sym, _) in &symbols {
            if !is_identifier(sym) {
                out.push(Diagnostic::BadSymbolName(sym.clone()));
            } else if is_variable_form(sym) {
                out.push(Diagnostic::ReservedSymbolName(sym.clone()));
            }
        }
        if !symbols.iter().any(|(_, a)| *a == 0) {
            out.push(Diagnostic::NoNullarySymbol);
        }
        let consts = self.consts.iter().map(|(s, t)| (s, Vec::new(), t));
        let rules = self.rules.iter().map(|(s, args, t)| (s, args.clone(), t));
        // (symbol, args) -> first target seen
        let mut table: HashMap<(String, Vec<String>), String> = HashMap::new();
        for (sym, args, target) in consts.chain(rules) {
            let site = if args.is_empty() {
                format!("const {sym}")
            } else {
                format!("{sym}({})", args.join(","))
            };
            if arity_of[sym.as_str()] != args.len() {
                out.push(Diagnostic::ArityConflict {
                    symbol: sym.clone(),
                    arities: (arity_of[sym.as_str()], args.len()),
                });
                continue;
            }
            let mut known = true;
            for st in args.iter().chain([target]) {
                if !state_set.contains(st.as_str()) {
                    out.push(Diagnostic::UnknownState {
                        state: st.clone(),
                        site: site.clone(),
                    });
                    known = false;
                }
            }
            if !known {
                continue;
            }
            match table.get(&(sym.clone(), args.clone())) {
                None => {
                    table.insert((sym.clone(), args), target.clone());
                }
                Some(prev) if prev == target => {
                    out.push(Diagnostic::DuplicateTransition { site });
                }
                Some(prev) => {
                    out.push(Diagnostic::ConflictingTransitions {
                        site,
                        targets: (prev.clone(), target.clone()),
                    });
                }
            }
        }
        // Completeness over the declared states.
        let state_names: Vec<&String> = self.states.iter().collect();
        if !state_names.is_empty() {
            for (sym, arity) in &symbols {
                let mut tuple = vec![0usize; *arity];
                loop {
                    let args: Vec<String> =
                        tuple.iter().map(|&i| state_names[i].clone()).collect();
                    if !table.contains_key(&(sym.clone(), args.clone())) {
                        out.push(Diagnostic::MissingTransition {
                            symbol: sym.clone(),
                            args,
                        });
                    }
                    // odometer over state indices
                    let mut k = *arity;
                    loop {
                        if k == 0 {
                            break;
                        }
                        tuple[k - 1] += 1;
                        if tuple[k - 1] < state_names.len() {
                            break;
                        }
                        tuple[k - 1] = 0;
                        k -= 1;
                    }
                    if k == 0 {
                        break;
                    }
                }
            }
        }
        out
    }

    pub fn build(self) -> Result<TreeAutomaton, InvalidAutomaton> {
        let diagnostics = self.validate();
        if !diagnostics.is_empty() {
            return Err(InvalidAutomaton { diagnostics });
        }
        let signature = Signature::new(self.inferred_symbols())
            .expect("symbol names were validated");
        let state_index: HashMap<String, usize> = self
            .states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        let n = self.states.len();
        let mut finals = vec![false; n];
        for s in &self.finals {
            finals[state_index[s]] = true;
        }
        let mut tables: Vec<Vec<usize>> = signature
            .symbols()
            .map(|(_, arity)| vec![usize::MAX; n.pow(arity as u32)])
            .collect();
        let consts = self.consts.iter().map(|(s, t)| (s, &[][..], t));
        let rule_args: Vec<(&String, Vec<&String>, &String)> = self
            .rules
            .iter()
            .map(|(s, args, t)| (s, args.iter().collect(), t))
            .collect();
        for (sym, args, target) in consts.chain(
            rule_args
                .iter()
                .map(|(s, args, t)| (*s, &args[..], *t)),
        ) {
            let id = signature.id(sym).expect("validated");
            let mut idx = 0usize;
            for a in args {
                idx = idx * n + state_index[a.as_str()];
            }
            tables[id][idx] = state_index[target.as_str()];
        }
        debug_assert!(tables.iter().all(|t| t.iter().all(|&v| v != usize::MAX)));
        Ok(TreeAutomaton {
            signature,
            states: self.states,
            state_index,
            finals,
            tables,
        })
    }
}

/// Assigns nullary symbols (by signature id) to variables.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Assignment {
    map: BTreeMap<u32, usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AssignmentParseError {
    #[error("`{0}` is not a binding of the form x1=symbol")]
    Malformed(String),
    #[error("`{0}` is not a variable name")]
    BadVariable(String),
    #[error("`{0}` is not a nullary symbol of this automaton")]
    NotANullarySymbol(String),
    #[error("variable x{0} is bound twice")]
    DuplicateBinding(u32),
}

impl Assignment {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn set(&mut self, var: u32, symbol_id: usize) {
        self.map.insert(var, symbol_id);
    }

    pub fn with(mut self, var: u32, symbol_id: usize) -> Self {
        self.set(var, symbol_id);
        self
    }

    pub fn get(&self, var: u32) -> Option<usize> {
        self.map.get(&var).copied()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, usize)> + '_ {
        self.map.iter().map(|(&v, &s)| (v, s))
    }

    /// Parses `x1=0,x2=1`. Spaces around bindings are tolerated.
    pub fn parse(text: &str, sig: &Signature) -> Result<Self, AssignmentParseError> {
        let mut out = Assignment::empty();
        for part in text.split(',') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let (var_text, sym_text) = part
                .split_once('=')
                .ok_or_else(|| AssignmentParseError::Malformed(part.to_string()))?;
            let (var_text, sym_text) = (var_text.trim(), sym_text.trim());
            if !is_variable_form(var_text) {
                return Err(AssignmentParseError::BadVariable(var_text.to_string()));
            }
            let var: u32 = var_text[1..]
                .parse()
                .map_err(|_| AssignmentParseError::BadVariable(var_text.to_string()))?;
            if var == 0 {
                return Err(AssignmentParseError::BadVariable(var_text.to_string()));
            }
            let id = sig
                .id(sym_text)
                .filter(|&i| sig.arity_by_id(i) == 0)
                .ok_or_else(|| AssignmentParseError::NotANullarySymbol(sym_text.to_string()))?;
            if out.get(var).is_some() {
                return Err(AssignmentParseError::DuplicateBinding(var));
            }
            out.set(var, id);
        }
        Ok(out)
    }

    /// Renders as `{x1=0,x2=1}` using the signature's symbol names.
    pub fn render(&self, sig: &Signature) -> String {
        let inner: Vec<String> = self
            .map
            .iter()
            .map(|(v, s)| format!("x{v}={}", sig.name(*s)))
            .collect();
        format!("{{{}}}", inner.join(","))
    }

    /// The term obtained by substituting each bound variable with its
    /// assigned constant.
    pub fn apply(&self, t: &Term, sig: &Signature) -> Term {
        let map: BTreeMap<u32, Term> = self
            .map
            .iter()
            .map(|(&v, &s)| (v, Term::constant(sig.name(s))))
            .collect();
        t.substitute(&map)
    }
}

/// Enumerates every assignment of the given variables over the signature's
/// nullary symbols, in lexicographic order: compare the constants assigned
/// to the smallest variable first, constants ordered by declaration.
pub fn assignments_over(vars: &BTreeSet<u32>, sig: &Signature) -> Assignments {
    Assignments {
        vars: vars.iter().copied().collect(),
        nullaries: sig.nullary_ids().collect(),
        digits: vec![0; vars.len()],
        done: false,
    }
}

pub struct Assignments {
    vars: Vec<u32>,
    nullaries: Vec<usize>,
    digits: Vec<usize>,
    done: bool,
}

impl Iterator for Assignments {
    type Item = Assignment;

    fn next(&mut self) -> Option<Assignment> {
        if self.done {
            return None;
        }
        let mut a = Assignment::empty();
        for (v, d) in self.vars.iter().zip(&self.digits) {
            a.set(*v, self.nullaries[*d]);
        }
        // advance the odometer; the last variable cycles fastest
        let mut k = self.digits.len();
        loop {
            if k == 0 {
                self.done = true;
                break;
            }
            self.digits[k - 1] += 1;
            if self.digits[k - 1] < self.nullaries.len() {
                break;
            }
            self.digits[k - 1] = 0;
            k -= 1;
        }
        if self.nullaries.is_empty() && !self.vars.is_empty() {
            self.done = true;
            return None;
        }
        Some(a)
    }
}

/// A complete deterministic bottom-up tree automaton. Valid by
/// construction: every symbol's table is total over the state set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeAutomaton {
    signature: Signature,
    states: Vec<String>,
    state_index: HashMap<String, usize>,
    finals: Vec<bool>,
    /// Per symbol id, row-major over state indices; nullary tables have one
    /// entry. Lookup is constant-time in the table size, which the
    /// assignment sweeps rely on.
    tables: Vec<Vec<usize>>,
}

impl TreeAutomaton {
    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn state_name(&self, id: usize) -> &str {
        &self.states[id]
    }

    pub fn state_id(&self, name: &str) -> Option<usize> {
        self.state_index.get(name).copied()
    }

    pub fn states(&self) -> impl Iterator<Item = &str> {
        self.states.iter().map(|s| s.as_str())
    }

    pub fn is_final(&self, state: usize) -> bool {
        self.finals[state]
    }

    pub fn final_states(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.states.len()).filter(|&i| self.finals[i])
    }

    /// The state a nullary symbol maps to.
    pub fn nullary_target(&self, symbol_id: usize) -> usize {
        debug_assert_eq!(self.signature.arity_by_id(symbol_id), 0);
        self.tables[symbol_id][0]
    }

    /// States reached directly by some constant.
    pub fn nullary_image(&self) -> std::collections::BTreeSet<usize> {
        self.signature
            .nullary_ids()
            .map(|c| self.nullary_target(c))
            .collect()
    }

    /// The target of `symbol(args...)`; `args.len()` must match the arity.
    pub fn transition(&self, symbol_id: usize, args: &[usize]) -> usize {
        debug_assert_eq!(self.signature.arity_by_id(symbol_id), args.len());
        let mut idx = 0usize;
        for &a in args {
            idx = idx * self.states.len() + a;
        }
        self.tables[symbol_id][idx]
    }

    /// Bottom-up evaluation of `t` under `g`: variables take the state of
    /// their assigned constant, applications apply their symbol's map to
    /// the children's states.
    pub fn run(&self, g: &Assignment, t: &Term) -> Result<usize, RunError> {
        match t {
            Term::Var(i) => {
                let sym = g.get(*i).ok_or(RunError::UnboundVariable(*i))?;
                if sym >= self.tables.len() || self.signature.arity_by_id(sym) != 0 {
                    return Err(RunError::UnknownSymbol(format!("#{sym}")));
                }
                Ok(self.tables[sym][0])
            }
            Term::App(name, children) => {
                let id = self
                    .signature
                    .id(name)
                    .ok_or_else(|| RunError::UnknownSymbol(name.clone()))?;
                let arity = self.signature.arity_by_id(id);
                if arity != children.len() {
                    return Err(RunError::ArityMismatch {
                        symbol: name.clone(),
                        expected: arity,
                        found: children.len(),
                    });
                }
                let mut idx = 0usize;
                for c in children {
                    idx = idx * self.states.len() + self.run(g, c)?;
                }
                Ok(self.tables[id][idx])
            }
        }
    }

    /// Whether the run under `g` ends in a final state.
    pub fn accepts(&self, g: &Assignment, t: &Term) -> Result<bool, RunError> {
        Ok(self.finals[self.run(g, t)?])
    }

    /// Searches for an assignment under which `t` is accepted. Exhaustive
    /// over the term's own variables, first hit in enumeration order.
    pub fn recognizable(
        &self,
        t: &Term,
        budget: Budget,
    ) -> Result<Option<Assignment>, AnalysisError> {
        let vars = t.vars();
        budget.require(Budget::assignment_space(
            self.signature.nullary_count(),
            vars.len(),
        ))?;
        for g in assignments_over(&vars, &self.signature) {
            if self.accepts(&g, t)? {
                return Ok(Some(g));
            }
        }
        Ok(None)
    }

    /// Parses and validates the text format described at module level.
    pub fn from_fta(text: &str) -> Result<Self, FtaError> {
        let mut b = AutomatonBuilder::new();
        let mut saw_states = false;
        let mut saw_final = false;
        let syntax = |line: usize, message: String| FtaError::Syntax { line, message };
        for (k, raw) in text.lines().enumerate() {
            let line_no = k + 1;
            let line = match raw.find('#') {
                Some(i) => &raw[..i],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("states:") {
                if saw_states {
                    return Err(syntax(line_no, "repeated `states:` line".into()));
                }
                saw_states = true;
                for s in rest.split_whitespace() {
                    b = b.state(s);
                }
                continue;
            }
            if !saw_states {
                return Err(syntax(
                    line_no,
                    "the first directive must be `states:`".into(),
                ));
            }
            if let Some(rest) = line.strip_prefix("final:") {
                if saw_final {
                    return Err(syntax(line_no, "repeated `final:` line".into()));
                }
                saw_final = true;
                for s in rest.split_whitespace() {
                    b = b.final_state(s);
                }
                continue;
            }
            if let Some(rest) = line.strip_prefix("const ") {
                let (sym, state) = rest
                    .split_once("->")
                    .ok_or_else(|| syntax(line_no, "expected `const SYMBOL -> STATE`".into()))?;
                let (sym, state) = (sym.trim(), state.trim());
                if sym.is_empty() || state.is_empty() || state.contains(char::is_whitespace) {
                    return Err(syntax(line_no, "expected `const SYMBOL -> STATE`".into()));
                }
                b = b.constant(sym, state);
                continue;
            }
            if let Some(rest) = line.strip_prefix("rule ") {
                let (lhs, target) = rest
                    .split_once("->")
                    .ok_or_else(|| syntax(line_no, "expected `rule SYM(...) -> STATE`".into()))?;
                let (lhs, target) = (lhs.trim(), target.trim());
                let open = lhs.find('(');
                let close = lhs.rfind(')');
                let (sym, args) = match (open, close) {
                    (Some(o), Some(c)) if o < c && c == lhs.len() - 1 => {
                        (&lhs[..o], &lhs[o + 1..c])
                    }
                    _ => {
                        return Err(syntax(
                            line_no,
                            "expected `rule SYM(STATE,...) -> STATE`".into(),
                        ))
                    }
                };
                let sym = sym.trim();
                let args: Vec<&str> = args.split(',').map(str::trim).collect();
                if sym.is_empty()
                    || args.iter().any(|a| a.is_empty())
                    || target.is_empty()
                    || target.contains(char::is_whitespace)
                {
                    return Err(syntax(
                        line_no,
                        "expected `rule SYM(STATE,...) -> STATE`".into(),
                    ));
                }
                b = b.rule(sym, args, target);
                continue;
            }
            return Err(syntax(line_no, format!("unrecognized directive `{line}`")));
        }
        if !saw_states {
            return Err(syntax(0, "missing `states:` line".into()));
        }
        if !saw_final {
            return Err(syntax(0, "missing `final:` line".into()));
        }
        Ok(b.build()?)
    }

    /// Canonical text form: states, finals, constants in declaration
    /// order, then rules per symbol with argument tuples in state order.
    /// Output parses back to an equal automaton.
    pub fn to_fta(&self) -> String {
        let mut out = String::new();
        out.push_str("states:");
        for s in &self.states {
            out.push(' ');
            out.push_str(s);
        }
        out.push('\n');
        out.push_str("final:");
        for i in self.final_states() {
            out.push(' ');
            out.push_str(&self.states[i]);
        }
        out.push('\n');
        for (id, (name, arity)) in self.signature.symbols().enumerate() {
            if arity == 0 {
                out.push_str(&format!(
                    "const {name} -> {}\n",
                    self.states[self.tables[id][0]]
                ));
            }
        }
        let n = self.states.len();
        for (id, (name, arity)) in self.signature.symbols().enumerate() {
            if arity == 0 {
                continue;
            }
            let mut tuple = vec![0usize; arity];
            for row in 0..self.tables[id].len() {
                let args: Vec<&str> = tuple.iter().map(|&i| self.states[i].as_str()).collect();
                out.push_str(&format!(
                    "rule {name}({}) -> {}\n",
                    args.join(","),
                    self.states[self.tables[id][row]]
                ));
                let mut k = arity;
                while k > 0 {
                    tuple[k - 1] += 1;
                    if tuple[k - 1] < n {
                        break;
                    }
                    tuple[k - 1] = 0;
                    k -= 1;
                }
            }
        }
        out
    }
}
