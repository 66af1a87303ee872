//! Terms over a ranked alphabet, with positions as paths of 1-based child
//! indices.
//!
//! A [`Signature`] fixes the alphabet: each symbol has a name and an arity,
//! and declaration order is meaningful (it drives assignment enumeration and
//! the choice of replacement constant during reduction). Names of the shape
//! `x` followed by digits are reserved for variables and cannot be declared.
//!
//! Terms are written in prefix notation: `g1(g2(x1,0),f1(x2))`. Nullary
//! symbols appear bare, without parentheses. [`parse_term`] and the
//! [`Display`](std::fmt::Display) impl are mutually inverse on canonical
//! text; the parser additionally tolerates whitespace between tokens.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::AnalysisError;

/// A ranked alphabet. Symbol ids are indices in declaration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    names: Vec<String>,
    arities: Vec<usize>,
    index: HashMap<String, usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SignatureError {
    #[error("duplicate symbol `{0}`")]
    DuplicateSymbol(String),
    #[error("`{0}` is not a valid symbol name")]
    BadName(String),
    #[error("`{0}` is reserved for variables")]
    ReservedName(String),
    #[error("a signature needs at least one nullary symbol")]
    NoNullarySymbol,
}

fn is_identifier(name: &str) -> bool {
    !name.is_empty()
        && name
            .bytes()
            .all(|b| b.is_ascii_alphanumeric() || b == b'_')
}

/// True for names of the shape `x<digits>`, which the term syntax reserves
/// for variables (well-formed or not: `x01` is reserved but unparsable).
pub fn is_variable_form(name: &str) -> bool {
    let rest = match name.strip_prefix('x') {
        Some(rest) => rest,
        None => return false,
    };
    !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit())
}

impl Signature {
    pub fn new<I, S>(symbols: I) -> Result<Self, SignatureError>
    where
        I: IntoIterator<Item = (S, usize)>,
        S: Into<String>,
    {
        let mut sig = Signature {
            names: Vec::new(),
            arities: Vec::new(),
            index: HashMap::new(),
        };
        for (name, arity) in symbols {
            let name = name.into();
            if !is_identifier(&name) {
                return Err(SignatureError::BadName(name));
            }
            if is_variable_form(&name) {
                return Err(SignatureError::ReservedName(name));
            }
            if sig.index.contains_key(&name) {
                return Err(SignatureError::DuplicateSymbol(name));
            }
            sig.index.insert(name.clone(), sig.names.len());
            sig.names.push(name);
            sig.arities.push(arity);
        }
        if !sig.arities.contains(&0) {
            return Err(SignatureError::NoNullarySymbol);
        }
        Ok(sig)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn id(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn name(&self, id: usize) -> &str {
        &self.names[id]
    }

    pub fn arity_by_id(&self, id: usize) -> usize {
        self.arities[id]
    }

    pub fn arity(&self, name: &str) -> Option<usize> {
        self.id(name).map(|i| self.arities[i])
    }

    /// Symbols in declaration order.
    pub fn symbols(&self) -> impl Iterator<Item = (&str, usize)> {
        self.names
            .iter()
            .map(|n| n.as_str())
            .zip(self.arities.iter().copied())
    }

    /// Ids of the nullary symbols, in declaration order.
    pub fn nullary_ids(&self) -> impl Iterator<Item = usize> + '_ {
        self.arities
            .iter()
            .enumerate()
            .filter(|(_, &a)| a == 0)
            .map(|(i, _)| i)
    }

    pub fn nullary_count(&self) -> usize {
        self.arities.iter().filter(|&&a| a == 0).count()
    }

    /// The first nullary symbol in declaration order. Guaranteed to exist.
    pub fn first_nullary(&self) -> usize {
        self.nullary_ids().next().expect("validated at construction")
    }
}

/// A path of 1-based child indices; the empty path is the root.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Position(Vec<u32>);

impl Position {
    pub fn root() -> Self {
        Position(Vec::new())
    }

    pub fn from_steps<I: IntoIterator<Item = u32>>(steps: I) -> Self {
        let steps: Vec<u32> = steps.into_iter().collect();
        debug_assert!(steps.iter().all(|&s| s >= 1));
        Position(steps)
    }

    pub fn steps(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, step: u32) -> Position {
        debug_assert!(step >= 1);
        let mut steps = self.0.clone();
        steps.push(step);
        Position(steps)
    }

    pub fn parent(&self) -> Option<Position> {
        if self.is_root() {
            None
        } else {
            Some(Position(self.0[..self.0.len() - 1].to_vec()))
        }
    }

    pub fn is_prefix_of(&self, other: &Position) -> bool {
        other.0.len() >= self.0.len() && other.0[..self.0.len()] == self.0[..]
    }

    /// Strips `prefix` off the front, if it is one.
    pub fn relative_to(&self, prefix: &Position) -> Option<Position> {
        if prefix.is_prefix_of(self) {
            Some(Position(self.0[prefix.len()..].to_vec()))
        } else {
            None
        }
    }

    /// Joins `self ++ suffix`.
    pub fn join(&self, suffix: &Position) -> Position {
        let mut steps = self.0.clone();
        steps.extend_from_slice(&suffix.0);
        Position(steps)
    }

    /// All prefixes from the position itself up to the root, in that order.
    pub fn prefixes_to_root(&self) -> Vec<Position> {
        (0..=self.0.len())
            .rev()
            .map(|k| Position(self.0[..k].to_vec()))
            .collect()
    }

    /// Plain lexicographic path order; a prefix precedes its extensions.
    pub fn lex_cmp(a: &Position, b: &Position) -> Ordering {
        a.0.cmp(&b.0)
    }

    /// Length-then-lexicographic order (shallow positions first).
    pub fn shortlex_cmp(a: &Position, b: &Position) -> Ordering {
        a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0))
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "\u{3b5}");
        }
        if self.0.iter().all(|&s| s <= 9) {
            for s in &self.0 {
                write!(f, "{s}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(|s| s.to_string()).collect();
            write!(f, "{}", parts.join("."))
        }
    }
}

/// A term: a variable leaf or a symbol application. The symbol of every
/// application must exist in the governing signature with matching arity;
/// [`parse_term`] and the automaton loaders enforce this, and the rewrite
/// operations preserve it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(u32),
    App(String, Vec<Term>),
}

/// What labels the root node of a term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Head<'a> {
    Var(u32),
    Symbol(&'a str),
}

impl fmt::Display for Head<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Head::Var(i) => write!(f, "x{i}"),
            Head::Symbol(s) => write!(f, "{s}"),
        }
    }
}

/// The position sets of a term, each in lexicographic path order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Positions {
    /// Every position.
    pub all: Vec<Position>,
    /// Variable leaves, with their variable index.
    pub variables: Vec<(Position, u32)>,
    /// Nullary-symbol leaves.
    pub constants: Vec<Position>,
    /// All leaves, variables and constants alike.
    pub frontier: Vec<Position>,
}

impl Term {
    pub fn var(index: u32) -> Term {
        debug_assert!(index >= 1);
        Term::Var(index)
    }

    pub fn app(symbol: impl Into<String>, children: Vec<Term>) -> Term {
        Term::App(symbol.into(), children)
    }

    pub fn constant(symbol: impl Into<String>) -> Term {
        Term::App(symbol.into(), Vec::new())
    }

    pub fn head(&self) -> Head<'_> {
        match self {
            Term::Var(i) => Head::Var(*i),
            Term::App(s, _) => Head::Symbol(s),
        }
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    /// True for a nullary-symbol leaf.
    pub fn is_constant(&self) -> bool {
        matches!(self, Term::App(_, children) if children.is_empty())
    }

    /// Leaves have depth 0; an application adds one level per nesting.
    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, children) => children
                .iter()
                .map(|c| c.depth() + 1)
                .max()
                .unwrap_or(0),
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, children) => 1 + children.iter().map(Term::node_count).sum::<usize>(),
        }
    }

    /// The set of variable indices occurring in the term.
    pub fn vars(&self) -> BTreeSet<u32> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<u32>) {
        match self {
            Term::Var(i) => {
                out.insert(*i);
            }
            Term::App(_, children) => {
                for c in children {
                    c.collect_vars(out);
                }
            }
        }
    }

    /// All position sets in one pre-order walk.
    pub fn positions(&self) -> Positions {
        let mut p = Positions {
            all: Vec::new(),
            variables: Vec::new(),
            constants: Vec::new(),
            frontier: Vec::new(),
        };
        self.walk_positions(Position::root(), &mut p);
        p
    }

    fn walk_positions(&self, at: Position, out: &mut Positions) {
        // Pre-order, which is exactly lexicographic path order.
        out.all.push(at.clone());
        match self {
            Term::Var(i) => {
                out.variables.push((at.clone(), *i));
                out.frontier.push(at);
            }
            Term::App(_, children) => {
                if children.is_empty() {
                    out.constants.push(at.clone());
                    out.frontier.push(at.clone());
                }
                for (k, c) in children.iter().enumerate() {
                    c.walk_positions(at.child(k as u32 + 1), out);
                }
            }
        }
    }

    pub fn subterm_at(&self, p: &Position) -> Result<&Term, AnalysisError> {
        let mut cur = self;
        for &step in p.steps() {
            match cur {
                Term::App(_, children) if (step as usize) >= 1 && (step as usize) <= children.len() => {
                    cur = &children[step as usize - 1];
                }
                _ => return Err(AnalysisError::InvalidPosition(p.clone())),
            }
        }
        Ok(cur)
    }

    /// Returns a copy with the subterm at `p` replaced by `replacement`.
    pub fn replace_at(&self, p: &Position, replacement: Term) -> Result<Term, AnalysisError> {
        fn go(t: &Term, steps: &[u32], replacement: Term, full: &Position) -> Result<Term, AnalysisError> {
            match steps.split_first() {
                None => Ok(replacement),
                Some((&step, rest)) => match t {
                    Term::App(s, children)
                        if (step as usize) >= 1 && (step as usize) <= children.len() =>
                    {
                        let mut children = children.clone();
                        let i = step as usize - 1;
                        children[i] = go(&children[i], rest, replacement, full)?;
                        Ok(Term::App(s.clone(), children))
                    }
                    _ => Err(AnalysisError::InvalidPosition(full.clone())),
                },
            }
        }
        go(self, p.steps(), replacement, p)
    }

    /// Simultaneous substitution of terms for variables. Variables absent
    /// from the map stay in place.
    pub fn substitute(&self, map: &BTreeMap<u32, Term>) -> Term {
        match self {
            Term::Var(i) => map.get(i).cloned().unwrap_or_else(|| self.clone()),
            Term::App(s, children) => Term::App(
                s.clone(),
                children.iter().map(|c| c.substitute(map)).collect(),
            ),
        }
    }

    /// The chain of prefixes from `p` up to the root: consecutive entries
    /// differ by exactly one trailing step, so the induced subterm chain
    /// climbs one level at a time.
    pub fn strong_chain_to_root(&self, p: &Position) -> Result<Vec<Position>, AnalysisError> {
        self.subterm_at(p)?;
        Ok(p.prefixes_to_root())
    }

    /// Least non-root position (shallowest first, then lexicographic) whose
    /// subterm equals `other`, if any. Occurrences at the root do not count:
    /// the relation is proper containment.
    pub fn proper_subterm_position(&self, other: &Term) -> Option<Position> {
        let mut all = self.positions().all;
        all.sort_by(Position::shortlex_cmp);
        all.into_iter()
            .filter(|p| !p.is_root())
            .find(|p| self.subterm_at(p).map(|s| s == other).unwrap_or(false))
    }

    /// Checks that every application matches the signature's arity.
    pub fn well_formed(&self, sig: &Signature) -> Result<(), ParseError> {
        match self {
            Term::Var(_) => Ok(()),
            Term::App(s, children) => {
                let arity = sig.arity(s).ok_or_else(|| ParseError {
                    offset: 0,
                    kind: ParseErrorKind::UnknownSymbol(s.clone()),
                })?;
                if arity != children.len() {
                    return Err(ParseError {
                        offset: 0,
                        kind: ParseErrorKind::ArityMismatch {
                            symbol: s.clone(),
                            expected: arity,
                            found: children.len(),
                        },
                    });
                }
                children.iter().try_for_each(|c| c.well_formed(sig))
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(i) => write!(f, "x{i}"),
            Term::App(s, children) => {
                write!(f, "{s}")?;
                if !children.is_empty() {
                    write!(f, "(")?;
                    for (k, c) in children.iter().enumerate() {
                        if k > 0 {
                            write!(f, ",")?;
                        }
                        write!(f, "{c}")?;
                    }
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset into the input where the problem starts.
    pub offset: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnknownSymbol(String),
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
    },
    BadVariable(String),
    Expected(&'static str),
    TrailingInput,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at offset {}: ", self.offset)?;
        match &self.kind {
            ParseErrorKind::UnknownSymbol(s) => write!(f, "unknown symbol `{s}`"),
            ParseErrorKind::ArityMismatch {
                symbol,
                expected,
                found,
            } => write!(f, "`{symbol}` takes {expected} arguments, found {found}"),
            ParseErrorKind::BadVariable(s) => {
                write!(f, "`{s}` is not a valid variable (use x1, x2, ...)")
            }
            ParseErrorKind::Expected(what) => write!(f, "expected {what}"),
            ParseErrorKind::TrailingInput => write!(f, "unexpected trailing input"),
        }
    }
}

impl std::error::Error for ParseError {}

struct Parser<'a> {
    bytes: &'a [u8],
    at: usize,
    sig: &'a Signature,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.at < self.bytes.len() && self.bytes[self.at].is_ascii_whitespace() {
            self.at += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.at).copied()
    }

    fn err(&self, offset: usize, kind: ParseErrorKind) -> ParseError {
        ParseError { offset, kind }
    }

    fn ident(&mut self) -> Result<(String, usize), ParseError> {
        self.skip_ws();
        let start = self.at;
        while self
            .peek()
            .map(|b| b.is_ascii_alphanumeric() || b == b'_')
            .unwrap_or(false)
        {
            self.at += 1;
        }
        if self.at == start {
            return Err(self.err(start, ParseErrorKind::Expected("an identifier")));
        }
        let text = std::str::from_utf8(&self.bytes[start..self.at])
            .expect("identifier bytes are ASCII")
            .to_string();
        Ok((text, start))
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let (name, start) = self.ident()?;
        if is_variable_form(&name) {
            let digits = &name[1..];
            if digits.len() > 1 && digits.starts_with('0') {
                return Err(self.err(start, ParseErrorKind::BadVariable(name)));
            }
            let index: u32 = digits
                .parse()
                .map_err(|_| self.err(start, ParseErrorKind::BadVariable(name.clone())))?;
            if index == 0 {
                return Err(self.err(start, ParseErrorKind::BadVariable(name)));
            }
            return Ok(Term::Var(index));
        }
        let arity = self
            .sig
            .arity(&name)
            .ok_or_else(|| self.err(start, ParseErrorKind::UnknownSymbol(name.clone())))?;
        self.skip_ws();
        if self.peek() != Some(b'(') {
            if arity != 0 {
                return Err(self.err(
                    start,
                    ParseErrorKind::ArityMismatch {
                        symbol: name,
                        expected: arity,
                        found: 0,
                    },
                ));
            }
            return Ok(Term::App(name, Vec::new()));
        }
        self.at += 1;
        let mut children = vec![self.term()?];
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b',') => {
                    self.at += 1;
                    children.push(self.term()?);
                }
                Some(b')') => {
                    self.at += 1;
                    break;
                }
                _ => return Err(self.err(self.at, ParseErrorKind::Expected("`,` or `)`"))),
            }
        }
        if children.len() != arity {
            return Err(self.err(
                start,
                ParseErrorKind::ArityMismatch {
                    symbol: name,
                    expected: arity,
                    found: children.len(),
                },
            ));
        }
        Ok(Term::App(name, children))
    }
}

/// Parses prefix notation against a signature. Whitespace between tokens is
/// tolerated; the canonical form emitted by `Display` contains none.
pub fn parse_term(text: &str, sig: &Signature) -> Result<Term, ParseError> {
    let mut p = Parser {
        bytes: text.as_bytes(),
        at: 0,
        sig,
    };
    let term = p.term()?;
    p.skip_ws();
    if p.at != p.bytes.len() {
        return Err(p.err(p.at, ParseErrorKind::TrailingInput));
    }
    Ok(term)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sig1() -> Signature {
        Signature::new([("0", 0), ("1", 0), ("f1", 1), ("g1", 2), ("g2", 2)]).unwrap()
    }

    fn t1(sig: &Signature) -> Term {
        parse_term("g1(g2(g1(f1(x3),x2),x2),g1(x1,g2(x1,f1(x2))))", sig).unwrap()
    }

    fn pos(steps: &[u32]) -> Position {
        Position::from_steps(steps.iter().copied())
    }

    #[test]
    fn signature_rejects_bad_declarations() {
        assert!(matches!(
            Signature::new([("0", 0), ("0", 1)]),
            Err(SignatureError::DuplicateSymbol(_))
        ));
        assert!(matches!(
            Signature::new([("x2", 0)]),
            Err(SignatureError::ReservedName(_))
        ));
        assert!(matches!(
            Signature::new([("f", 1)]),
            Err(SignatureError::NoNullarySymbol)
        ));
        assert!(matches!(
            Signature::new([("a-b", 0)]),
            Err(SignatureError::BadName(_))
        ));
        // `x` alone is not variable-shaped and stays available.
        assert!(Signature::new([("x", 0)]).is_ok());
    }

    #[test]
    fn declaration_order_is_kept() {
        let sig = sig1();
        let names: Vec<&str> = sig.symbols().map(|(n, _)| n).collect();
        assert_eq!(names, ["0", "1", "f1", "g1", "g2"]);
        assert_eq!(sig.first_nullary(), 0);
        assert_eq!(sig.name(sig.first_nullary()), "0");
        assert_eq!(sig.nullary_count(), 2);
    }

    #[test]
    fn parse_and_format_roundtrip_on_the_worked_term() {
        let sig = sig1();
        let text = "g1(g2(g1(f1(x3),x2),x2),g1(x1,g2(x1,f1(x2))))";
        let t = parse_term(text, &sig).unwrap();
        assert_eq!(t.to_string(), text);
        assert_eq!(parse_term("0", &sig).unwrap(), Term::constant("0"));
        // whitespace is tolerated but not canonical
        let spaced = parse_term("g1( x2 , x1 )", &sig).unwrap();
        assert_eq!(spaced.to_string(), "g1(x2,x1)");
    }

    #[test]
    fn parse_errors_carry_offsets() {
        let sig = sig1();
        let e = parse_term("g1(x1", &sig).unwrap_err();
        assert_eq!(e.offset, 5);
        assert_eq!(e.kind, ParseErrorKind::Expected("`,` or `)`"));

        let e = parse_term("h(x1,x2)", &sig).unwrap_err();
        assert_eq!(e.offset, 0);
        assert_eq!(e.kind, ParseErrorKind::UnknownSymbol("h".into()));

        let e = parse_term("f1(x1,x2)", &sig).unwrap_err();
        assert!(matches!(
            e.kind,
            ParseErrorKind::ArityMismatch { expected: 1, found: 2, .. }
        ));

        let e = parse_term("g1(x2,x1)x", &sig).unwrap_err();
        assert_eq!(e.offset, 9);
        assert_eq!(e.kind, ParseErrorKind::TrailingInput);

        assert!(matches!(
            parse_term("x01", &sig).unwrap_err().kind,
            ParseErrorKind::BadVariable(_)
        ));
        assert!(matches!(
            parse_term("x0", &sig).unwrap_err().kind,
            ParseErrorKind::BadVariable(_)
        ));
        assert!(matches!(
            parse_term("g1(,x1)", &sig).unwrap_err().kind,
            ParseErrorKind::Expected("an identifier")
        ));
        // nullary symbols may not take an argument list
        assert!(matches!(
            parse_term("0(x1)", &sig).unwrap_err().kind,
            ParseErrorKind::ArityMismatch { expected: 0, found: 1, .. }
        ));
    }

    #[test]
    fn positions_of_the_worked_term() {
        let sig = sig1();
        let t = t1(&sig);
        let p = t.positions();
        let want: Vec<Position> = [
            &[][..],
            &[1],
            &[1, 1],
            &[1, 1, 1],
            &[1, 1, 1, 1],
            &[1, 1, 2],
            &[1, 2],
            &[2],
            &[2, 1],
            &[2, 2],
            &[2, 2, 1],
            &[2, 2, 2],
            &[2, 2, 2, 1],
        ]
        .iter()
        .map(|s| pos(s))
        .collect();
        let mut got = p.all.clone();
        got.sort_by(Position::lex_cmp);
        assert_eq!(got, want);
        assert_eq!(p.all.len(), t.node_count());

        let vars: Vec<(Position, u32)> = vec![
            (pos(&[1, 1, 1, 1]), 3),
            (pos(&[1, 1, 2]), 2),
            (pos(&[1, 2]), 2),
            (pos(&[2, 1]), 1),
            (pos(&[2, 2, 1]), 1),
            (pos(&[2, 2, 2, 1]), 2),
        ];
        assert_eq!(p.variables, vars);
        assert!(p.constants.is_empty());
        assert_eq!(p.frontier.len(), 6);

        let c = parse_term("0", &sig).unwrap().positions();
        assert_eq!(c.all, vec![Position::root()]);
        assert_eq!(c.constants, vec![Position::root()]);
        assert!(c.variables.is_empty());
    }

    #[test]
    fn subterm_and_replace() {
        let sig = sig1();
        let t = t1(&sig);
        assert_eq!(
            t.subterm_at(&pos(&[1, 1])).unwrap().to_string(),
            "g1(f1(x3),x2)"
        );
        assert_eq!(t.subterm_at(&Position::root()).unwrap(), &t);
        assert!(matches!(
            t.subterm_at(&pos(&[3])),
            Err(AnalysisError::InvalidPosition(_))
        ));

        let replaced = t.replace_at(&pos(&[1]), Term::var(2)).unwrap();
        assert_eq!(replaced.to_string(), "g1(x2,g1(x1,g2(x1,f1(x2))))");
        let swapped = t
            .replace_at(&Position::root(), parse_term("g1(x2,x1)", &sig).unwrap())
            .unwrap();
        assert_eq!(swapped.to_string(), "g1(x2,x1)");
        assert!(t.replace_at(&pos(&[1, 3]), Term::var(1)).is_err());
    }

    #[test]
    fn substitution() {
        let sig = sig1();
        let sub = t1(&sig).subterm_at(&pos(&[1, 1])).unwrap().clone();
        let mut map = BTreeMap::new();
        map.insert(3, Term::constant("0"));
        assert_eq!(sub.substitute(&map).to_string(), "g1(f1(0),x2)");
        assert_eq!(sub.substitute(&BTreeMap::new()), sub);

        let mut map = BTreeMap::new();
        map.insert(1, parse_term("f1(x2)", &sig).unwrap());
        let t = parse_term("g2(x1,x1)", &sig).unwrap();
        assert_eq!(t.substitute(&map).to_string(), "g2(f1(x2),f1(x2))");
    }

    #[test]
    fn heads_and_depths() {
        let sig = sig1();
        let t = t1(&sig);
        assert_eq!(t.head(), Head::Symbol("g1"));
        assert_eq!(Term::var(5).head(), Head::Var(5));
        assert_eq!(Term::var(5).head().to_string(), "x5");
        assert_eq!(t.depth(), 4);
        assert_eq!(Term::var(7).depth(), 0);
        assert_eq!(parse_term("f1(x3)", &sig).unwrap().depth(), 1);
        assert_eq!(Term::constant("0").depth(), 0);
        assert_eq!(t.vars(), [1u32, 2, 3].into_iter().collect());
    }

    #[test]
    fn strong_chain_is_the_prefix_chain() {
        let sig = sig1();
        let t = t1(&sig);
        let chain = t.strong_chain_to_root(&pos(&[1, 1, 1, 1])).unwrap();
        assert_eq!(
            chain,
            vec![
                pos(&[1, 1, 1, 1]),
                pos(&[1, 1, 1]),
                pos(&[1, 1]),
                pos(&[1]),
                Position::root()
            ]
        );
        assert_eq!(
            t.strong_chain_to_root(&Position::root()).unwrap(),
            vec![Position::root()]
        );
        assert!(t.strong_chain_to_root(&pos(&[9, 9])).is_err());
    }

    #[test]
    fn proper_subterm_search_prefers_shallow_positions() {
        let sig = sig1();
        let t = t1(&sig);
        // x2 occurs at 112, 12 and 2221; the shallowest occurrence wins.
        assert_eq!(t.proper_subterm_position(&Term::var(2)), Some(pos(&[1, 2])));
        assert_eq!(
            t.proper_subterm_position(&parse_term("g2(x1,f1(x2))", &sig).unwrap()),
            Some(pos(&[2, 2]))
        );
        assert_eq!(t.proper_subterm_position(&t), None);
        assert_eq!(t.proper_subterm_position(&Term::var(7)), None);
    }

    #[test]
    fn position_display_switches_to_dots_for_wide_nodes() {
        assert_eq!(pos(&[1, 1, 2]).to_string(), "112");
        assert_eq!(pos(&[2, 10, 1]).to_string(), "2.10.1");
        assert_eq!(Position::root().to_string(), "\u{3b5}");
    }

    // Random terms over the two-state example signature, depth <= 4.
    fn arb_term() -> impl Strategy<Value = Term> {
        let leaf = prop_oneof![
            (1u32..=3).prop_map(Term::var),
            prop_oneof![Just("0"), Just("1")].prop_map(Term::constant),
        ];
        leaf.prop_recursive(4, 32, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(|c| Term::app("f1", vec![c])),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::app("g1", vec![a, b])),
                (inner.clone(), inner).prop_map(|(a, b)| Term::app("g2", vec![a, b])),
            ]
        })
    }

    proptest! {
        #[test]
        fn roundtrip(t in arb_term()) {
            let sig = sig1();
            prop_assert_eq!(parse_term(&t.to_string(), &sig).unwrap(), t);
        }

        #[test]
        fn replacing_a_subterm_with_itself_is_identity(t in arb_term(), ix in any::<prop::sample::Index>()) {
            let all = t.positions().all;
            let p = &all[ix.index(all.len())];
            let sub = t.subterm_at(p).unwrap().clone();
            prop_assert_eq!(t.replace_at(p, sub).unwrap(), t);
        }

        #[test]
        fn position_sets_are_prefix_closed_and_consistent(t in arb_term()) {
            let p = t.positions();
            for q in &p.all {
                if let Some(parent) = q.parent() {
                    prop_assert!(p.all.contains(&parent));
                }
            }
            prop_assert_eq!(p.all.len(), t.node_count());
            prop_assert_eq!(p.frontier.len(), p.variables.len() + p.constants.len());
            let max_len = p.all.iter().map(Position::len).max().unwrap();
            prop_assert_eq!(max_len, t.depth());
        }

        #[test]
        fn chains_step_one_level_at_a_time(t in arb_term(), ix in any::<prop::sample::Index>()) {
            let all = t.positions().all;
            let p = &all[ix.index(all.len())];
            let chain = t.strong_chain_to_root(p).unwrap();
            prop_assert_eq!(chain.first().unwrap(), p);
            prop_assert!(chain.last().unwrap().is_root());
            for w in chain.windows(2) {
                prop_assert_eq!(w[1].len() + 1, w[0].len());
                prop_assert!(w[1].is_prefix_of(&w[0]));
            }
        }
    }
}
