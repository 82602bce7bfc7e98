//! Bottom-up tree automata over congruence classes.
//!
//! For hypotheses `H` and a ground target `g`, a term `t` satisfies
//! `H -> t = g` in every structure iff evaluating `t` bottom-up over the
//! classes of the closure of `H` ends in the class of `g`. Subterms that match
//! no known node land in fresh classes, which can never reach `g`.

use std::collections::{BTreeSet, HashMap};

use crate::qcheck::closure::{Closure, Head, TermGraph};
use crate::syntax::{Formula, FunctionSymbol, Signature, Term, Unknown};

#[derive(Clone, Debug)]
struct Transition {
    symbol: FunctionSymbol,
    args: Vec<usize>,
    target: usize,
}

/// Terms over a signature accepted in one state of a bottom-up automaton.
#[derive(Clone, Debug)]
pub struct Generator {
    states: usize,
    accept: usize,
    transitions: Vec<Transition>,
}

impl Generator {
    /// All terms over `sig`: a single state with every symbol looping on it.
    pub fn herbrand(sig: &Signature) -> Generator {
        let transitions = sig
            .functions
            .iter()
            .map(|f| Transition {
                symbol: f.clone(),
                args: vec![0; f.arity()],
                target: 0,
            })
            .collect();
        Generator {
            states: 1,
            accept: 0,
            transitions,
        }
    }

    /// Generator for a conjunct `H -> u = g` (either orientation, `H` possibly
    /// empty) where `H` and `g` are free of unknowns. `None` if the conjunct
    /// has another shape.
    pub fn guided(conjunct: &Formula, u: &Unknown, sig: &Signature) -> Option<Generator> {
        let (hyps, goal) = match conjunct {
            Formula::Implies(h, goal) => {
                let mut eqs = Vec::new();
                for c in h.conjuncts() {
                    match c {
                        Formula::Eq(a, b) if !a.contains_unknown() && !b.contains_unknown() => {
                            eqs.push((a, b))
                        }
                        _ => return None,
                    }
                }
                (eqs, goal.as_ref())
            }
            other => (Vec::new(), other),
        };
        let g = match goal {
            Formula::Eq(Term::Unknown(v), g) | Formula::Eq(g, Term::Unknown(v))
                if v == u && !g.contains_unknown() =>
            {
                g
            }
            _ => return None,
        };
        if !g.is_ground() || hyps.iter().any(|(a, b)| !a.is_ground() || !b.is_ground()) {
            return None;
        }
        let mut graph = TermGraph::new();
        let pairs: Vec<(usize, usize)> = hyps
            .iter()
            .map(|(a, b)| (graph.term(a), graph.term(b)))
            .collect();
        let goal_id = graph.term(g);
        let mut closure = Closure::new(&graph);
        for (a, b) in pairs {
            closure.merge(a, b, &graph);
        }
        let mut state_of: HashMap<usize, usize> = HashMap::new();
        let mut state = |rep: usize| {
            let next = state_of.len();
            *state_of.entry(rep).or_insert(next)
        };
        let mut seen = BTreeSet::new();
        let mut transitions = Vec::new();
        for (id, node) in graph.nodes.iter().enumerate() {
            let Head::Fun(f) = &node.head else { continue };
            if !sig.functions.contains(f) {
                continue;
            }
            let args: Vec<usize> = node.args.iter().map(|&a| state(closure.find(a))).collect();
            let target = state(closure.find(id));
            if seen.insert((f.clone(), args.clone())) {
                transitions.push(Transition {
                    symbol: f.clone(),
                    args,
                    target,
                });
            }
        }
        let accept = state(closure.find(goal_id));
        Some(Generator {
            states: state_of.len(),
            accept,
            transitions,
        })
    }

    /// `counts[q][s]`: number of terms of size exactly `s` reaching state `q`, saturating.
    fn counts(&self, max_size: usize) -> Vec<Vec<u128>> {
        let mut c = vec![vec![0u128; max_size + 1]; self.states];
        for s in 1..=max_size {
            for t in &self.transitions {
                let n = ways(&t.args, s - 1, &c);
                c[t.target][s] = c[t.target][s].saturating_add(n);
            }
        }
        c
    }

    /// Number of accepted terms of size at most `max_size`, saturating.
    pub fn count(&self, max_size: usize) -> u128 {
        let c = self.counts(max_size);
        c[self.accept]
            .iter()
            .fold(0u128, |acc, &n| acc.saturating_add(n))
    }

    /// Accepted terms of size at most `max_size`, in canonical order.
    pub fn terms(&self, max_size: usize) -> Vec<Term> {
        let counts = self.counts(max_size);
        let mut memo: HashMap<(usize, usize), Vec<Term>> = HashMap::new();
        let mut out = Vec::new();
        for s in 1..=max_size {
            out.extend(self.exact(self.accept, s, &counts, &mut memo));
        }
        out.sort();
        out
    }

    fn exact(
        &self,
        q: usize,
        size: usize,
        counts: &[Vec<u128>],
        memo: &mut HashMap<(usize, usize), Vec<Term>>,
    ) -> Vec<Term> {
        if counts[q][size] == 0 {
            return Vec::new();
        }
        if let Some(v) = memo.get(&(q, size)) {
            return v.clone();
        }
        let mut out = Vec::new();
        for t in self.transitions.iter().filter(|t| t.target == q) {
            if t.args.is_empty() {
                if size == 1 {
                    out.push(Term::apply(t.symbol.clone(), vec![]));
                }
                continue;
            }
            if ways(&t.args, size - 1, counts) == 0 {
                continue;
            }
            for split in splits(t.args.len(), size - 1) {
                if t.args.iter().zip(&split).any(|(&a, &s)| counts[a][s] == 0) {
                    continue;
                }
                let parts: Vec<Vec<Term>> = t
                    .args
                    .iter()
                    .zip(&split)
                    .map(|(&a, &s)| self.exact(a, s, counts, memo))
                    .collect();
                for combo in product(&parts) {
                    out.push(Term::apply(t.symbol.clone(), combo));
                }
            }
        }
        memo.insert((q, size), out.clone());
        out
    }
}

/// Ways to fill argument states `args` with terms of total size `total`.
fn ways(args: &[usize], total: usize, c: &[Vec<u128>]) -> u128 {
    if args.is_empty() {
        return u128::from(total == 0);
    }
    // dp[s]: ways for the arguments processed so far to have total size s.
    let mut dp = vec![0u128; total + 1];
    dp[0] = 1;
    for &a in args {
        let mut next = vec![0u128; total + 1];
        for (s, &w) in dp.iter().enumerate() {
            if w == 0 {
                continue;
            }
            for k in 1..=total - s {
                let n = c[a][k];
                if n != 0 {
                    next[s + k] = next[s + k].saturating_add(w.saturating_mul(n));
                }
            }
        }
        dp = next;
    }
    dp[total]
}

/// Compositions of `total` into `parts` positive summands.
fn splits(parts: usize, total: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    if parts == 1 {
        return if total >= 1 {
            vec![vec![total]]
        } else {
            vec![]
        };
    }
    let mut out = Vec::new();
    for first in 1..=total.saturating_sub(parts - 1) {
        for mut rest in splits(parts - 1, total - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn product(parts: &[Vec<Term>]) -> Vec<Vec<Term>> {
    let mut out: Vec<Vec<Term>> = vec![Vec::new()];
    for p in parts {
        let mut next = Vec::with_capacity(out.len() * p.len());
        for prefix in &out {
            for t in p {
                let mut v = prefix.clone();
                v.push(t.clone());
                next.push(v);
            }
        }
        out = next;
    }
    out
}
