//! Shared plumbing for the integration suites: fixture loading, seeded
//! random automata and terms, and an independent accepted-term counter.
#![allow(dead_code)] // each test target uses its own slice of this module

use std::path::Path;

use num_bigint::BigUint;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use dfta::automaton::AutomatonBuilder;
use dfta::term::parse_term;
use dfta::{Term, TreeAutomaton};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn fixture(name: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name);
    std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

pub fn automaton_fixture(name: &str) -> TreeAutomaton {
    TreeAutomaton::from_fta(&fixture(name)).unwrap()
}

pub fn term_fixture(name: &str, a: &TreeAutomaton) -> Term {
    parse_term(fixture(name).trim(), a.signature()).unwrap()
}

pub fn term(a: &TreeAutomaton, text: &str) -> Term {
    parse_term(text, a.signature()).unwrap()
}

/// Size limits for random automata. Defaults match the small shapes the
/// randomized suites call for.
pub struct Shape {
    pub max_states: usize,
    pub max_nullary: usize,
    pub max_unary: usize,
    pub max_binary: usize,
}

impl Default for Shape {
    fn default() -> Self {
        Shape {
            max_states: 3,
            max_nullary: 2,
            max_unary: 2,
            max_binary: 2,
        }
    }
}

pub fn random_automaton(rng: &mut ChaCha8Rng, shape: &Shape) -> TreeAutomaton {
    let n_states = rng.gen_range(1..=shape.max_states);
    let n_nullary = rng.gen_range(1..=shape.max_nullary);
    let n_unary = rng.gen_range(0..=shape.max_unary);
    let n_binary = rng.gen_range(0..=shape.max_binary);
    let state = |i: usize| format!("q{i}");
    let mut b = AutomatonBuilder::new();
    for i in 0..n_states {
        b = b.state(state(i));
    }
    for i in 0..n_states {
        if rng.gen_bool(0.5) {
            b = b.final_state(state(i));
        }
    }
    for c in 0..n_nullary {
        b = b.constant(format!("c{c}"), state(rng.gen_range(0..n_states)));
    }
    for u in 0..n_unary {
        for q in 0..n_states {
            b = b.rule(
                format!("u{u}"),
                [state(q)],
                state(rng.gen_range(0..n_states)),
            );
        }
    }
    for s in 0..n_binary {
        for q1 in 0..n_states {
            for q2 in 0..n_states {
                b = b.rule(
                    format!("b{s}"),
                    [state(q1), state(q2)],
                    state(rng.gen_range(0..n_states)),
                );
            }
        }
    }
    b.build().expect("random tables are total")
}

/// A random term over the automaton's signature using variables
/// x1..x{max_vars}, of depth at most `max_depth`.
pub fn random_term(
    rng: &mut ChaCha8Rng,
    a: &TreeAutomaton,
    max_depth: usize,
    max_vars: u32,
) -> Term {
    let sig = a.signature();
    let nullaries: Vec<usize> = sig.nullary_ids().collect();
    let wider: Vec<usize> = (0..sig.len())
        .filter(|&i| sig.arity_by_id(i) > 0)
        .collect();
    fn go(
        rng: &mut ChaCha8Rng,
        a: &TreeAutomaton,
        nullaries: &[usize],
        wider: &[usize],
        depth_left: usize,
        max_vars: u32,
    ) -> Term {
        let leaf = depth_left == 0 || wider.is_empty() || rng.gen_bool(0.3);
        if leaf {
            if max_vars > 0 && rng.gen_bool(0.6) {
                Term::var(rng.gen_range(1..=max_vars))
            } else {
                let id = nullaries[rng.gen_range(0..nullaries.len())];
                Term::constant(a.signature().name(id))
            }
        } else {
            let id = wider[rng.gen_range(0..wider.len())];
            let arity = a.signature().arity_by_id(id);
            let children = (0..arity)
                .map(|_| go(rng, a, nullaries, wider, depth_left - 1, max_vars))
                .collect();
            Term::app(a.signature().name(id), children)
        }
    }
    go(rng, a, &nullaries, &wider, max_depth, max_vars)
}

fn for_each_state_tuple(n_states: usize, arity: usize, mut f: impl FnMut(&[usize])) {
    let mut tuple = vec![0usize; arity];
    loop {
        f(&tuple);
        let mut k = arity;
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            tuple[k] += 1;
            if tuple[k] < n_states {
                break;
            }
            tuple[k] = 0;
        }
    }
}

/// Number of accepted ground terms of depth at most `depth`, by per-state
/// level counting. Exact (big integers), independent of the library's
/// enumeration and finiteness machinery.
pub fn accepted_count(a: &TreeAutomaton, depth: usize) -> BigUint {
    let sig = a.signature();
    let n = a.state_count();
    let base = |counts: &mut Vec<BigUint>| {
        for c in sig.nullary_ids() {
            counts[a.nullary_target(c)] += 1u32;
        }
    };
    let mut counts: Vec<BigUint> = vec![BigUint::default(); n];
    base(&mut counts);
    for _ in 0..depth {
        let mut next: Vec<BigUint> = vec![BigUint::default(); n];
        base(&mut next);
        for (id, (_, arity)) in sig.symbols().enumerate() {
            if arity == 0 {
                continue;
            }
            for_each_state_tuple(n, arity, |args| {
                let mut product = BigUint::from(1u32);
                for &q in args {
                    product *= &counts[q];
                }
                next[a.transition(id, args)] += product;
            });
        }
        counts = next;
    }
    a.final_states().map(|q| counts[q].clone()).sum()
}
