//! Branch-and-bound search for the first solution in canonical tuple order:
//! smallest total size first, then lexicographic in the canonical term order.
//!
//! The formula is split into top-level conjuncts, and each conjunct is decided
//! as soon as its last unknown is assigned. Candidates for a position come
//! either from the Herbrand universe or, when a conjunct pins the unknown down
//! modulo ground hypotheses, from the automaton of that conjunct; both yield
//! exactly the terms within the bound that can pass the conjunct, so the
//! choice never changes the result.

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, OnceLock};

use rayon::prelude::*;

use crate::qcheck::{Decider, Tableau};
use crate::syntax::{Formula, Signature, Substitution, Term, Unknown};

use super::automaton::Generator;
use super::{with_constant, Skeleton, Solution};

/// Knobs for the bounded search.
#[derive(Clone)]
pub struct SearchOptions {
    /// Per-term size cap.
    pub max_size: usize,
    /// Worker threads; 0 uses every core, 1 searches sequentially.
    pub jobs: usize,
    /// Use conjunct automata to generate candidates where possible.
    pub guided: bool,
    pub decider: Arc<dyn Decider>,
}

impl SearchOptions {
    pub fn with_max_size(max_size: usize) -> Self {
        SearchOptions {
            max_size,
            ..SearchOptions::default()
        }
    }
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            max_size: 6,
            jobs: 1,
            guided: true,
            decider: Arc::new(Tableau),
        }
    }
}

impl fmt::Debug for SearchOptions {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SearchOptions")
            .field("max_size", &self.max_size)
            .field("jobs", &self.jobs)
            .field("guided", &self.guided)
            .field("decider", &self.decider.name())
            .finish()
    }
}

/// Searches the skeleton's unknowns with every term of size at most `max_size`.
pub fn solve_bounded(sk: &Skeleton, sig: &Signature, max_size: usize) -> Option<Solution> {
    solve_with(sk, sig, &SearchOptions::with_max_size(max_size))
}

pub fn solve_with(sk: &Skeleton, sig: &Signature, opts: &SearchOptions) -> Option<Solution> {
    solve_formula(sk.formula(), &sk.unknowns(), sig, opts)
}

/// Searches for terms making `formula` a quasitautology. Unknowns are assigned
/// in the order of `order`; unknowns of the formula missing from it follow in
/// name order.
pub fn solve_formula(
    formula: &Formula,
    order: &[Unknown],
    sig: &Signature,
    opts: &SearchOptions,
) -> Option<Solution> {
    let sig = with_constant(sig.clone());
    let plan = Plan::new(formula, order);
    for &c in &plan.ground {
        if !opts.decider.decide(&plan.conjuncts[c]) {
            return None;
        }
    }
    let universe = Universe::new(&sig, opts.max_size);
    let ctx = Ctx {
        plan: &plan,
        sig: &sig,
        opts,
        universe: &universe,
    };
    let found = if plan.order.is_empty() {
        Some(Vec::new())
    } else if opts.jobs == 1 {
        let mut w = Worker::new(&ctx, None);
        w.dfs(0, 0, None);
        w.best.map(|(_, terms)| terms)
    } else {
        ctx.parallel()
    };
    found.map(|terms| plan.order.iter().cloned().zip(terms).collect())
}

struct Plan {
    order: Vec<Unknown>,
    conjuncts: Vec<Formula>,
    /// Conjuncts decided once position `i` is assigned.
    at: Vec<Vec<usize>>,
    ground: Vec<usize>,
}

impl Plan {
    fn new(formula: &Formula, order: &[Unknown]) -> Plan {
        let mut order: Vec<Unknown> = order.to_vec();
        let mut extra: Vec<Unknown> = formula
            .unknowns()
            .into_iter()
            .filter(|u| !order.contains(u))
            .collect();
        extra.sort();
        extra.dedup();
        order.extend(extra);
        let pos: HashMap<&Unknown, usize> = order.iter().enumerate().map(|(i, u)| (u, i)).collect();
        let conjuncts: Vec<Formula> = formula.conjuncts().into_iter().cloned().collect();
        let mut at = vec![Vec::new(); order.len()];
        let mut ground = Vec::new();
        for (c, phi) in conjuncts.iter().enumerate() {
            match phi.unknowns().iter().map(|u| pos[u]).max() {
                Some(last) => at[last].push(c),
                None => ground.push(c),
            }
        }
        Plan {
            order,
            conjuncts,
            at,
            ground,
        }
    }
}

/// Herbrand terms up to the bound, materialized only if some position needs them.
struct Universe {
    generator: Generator,
    /// `cumulative[b]`: number of terms of size at most `b`.
    cumulative: Vec<u128>,
    terms: OnceLock<Vec<Term>>,
    max_size: usize,
}

impl Universe {
    fn new(sig: &Signature, max_size: usize) -> Universe {
        let generator = Generator::herbrand(sig);
        let cumulative = (0..=max_size).map(|b| generator.count(b)).collect();
        Universe {
            generator,
            cumulative,
            terms: OnceLock::new(),
            max_size,
        }
    }

    fn up_to(&self, bound: usize) -> &[Term] {
        let all = self
            .terms
            .get_or_init(|| self.generator.terms(self.max_size));
        &all[..all.partition_point(|t| t.size() <= bound)]
    }
}

struct Ctx<'a> {
    plan: &'a Plan,
    sig: &'a Signature,
    opts: &'a SearchOptions,
    universe: &'a Universe,
}

impl Ctx<'_> {
    /// Splits the first position's candidates into contiguous chunks. Chunks
    /// share the best total found so far but only prune strictly above it, so
    /// the earliest chunk holding an optimal tuple still finds its first one.
    fn parallel(&self) -> Option<Vec<Term>> {
        let jobs = if self.opts.jobs == 0 {
            rayon::current_num_threads()
        } else {
            self.opts.jobs
        };
        let first = Worker::new(self, None).candidates(0, self.opts.max_size);
        if first.is_empty() {
            return None;
        }
        let chunk = first.len().div_ceil(jobs * 4).max(1);
        let global = AtomicUsize::new(usize::MAX);
        let run = || {
            first
                .par_chunks(chunk)
                .map(|part| {
                    let mut w = Worker::new(self, Some(&global));
                    w.dfs(0, 0, Some(part));
                    w.best
                })
                .collect::<Vec<_>>()
        };
        let results = match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
            Ok(pool) => pool.install(run),
            Err(_) => run(),
        };
        let mut best: Option<(usize, Vec<Term>)> = None;
        for r in results.into_iter().flatten() {
            if best.as_ref().is_none_or(|(t, _)| r.0 < *t) {
                best = Some(r);
            }
        }
        best.map(|(_, terms)| terms)
    }
}

struct Worker<'a> {
    ctx: &'a Ctx<'a>,
    global: Option<&'a AtomicUsize>,
    assigned: Vec<Term>,
    best: Option<(usize, Vec<Term>)>,
}

impl<'a> Worker<'a> {
    fn new(ctx: &'a Ctx<'a>, global: Option<&'a AtomicUsize>) -> Self {
        Worker {
            ctx,
            global,
            assigned: Vec::new(),
            best: None,
        }
    }

    /// Largest total size a new solution may still have.
    fn allowed_total(&self) -> usize {
        let local = self.best.as_ref().map_or(usize::MAX, |(t, _)| t - 1);
        let global = self
            .global
            .map_or(usize::MAX, |g| g.load(Ordering::Relaxed));
        local.min(global)
    }

    fn prefix(&self) -> Substitution {
        self.ctx
            .plan
            .order
            .iter()
            .zip(&self.assigned)
            .map(|(u, t)| (u.clone().into(), t.clone()))
            .collect()
    }

    /// Conjuncts due at `pos`, with the earlier positions substituted.
    fn due(&self, pos: usize) -> Vec<Formula> {
        let sigma = self.prefix();
        self.ctx.plan.at[pos]
            .iter()
            .map(|&c| {
                sigma
                    .apply(&self.ctx.plan.conjuncts[c])
                    .expect("quantifier-free")
            })
            .collect()
    }

    /// Terms of size at most `bound` for position `pos`, in canonical order.
    fn candidates(&self, pos: usize, bound: usize) -> Vec<Term> {
        let herbrand = self.ctx.universe.cumulative[bound];
        if self.ctx.opts.guided {
            let u = &self.ctx.plan.order[pos];
            let best = self
                .due(pos)
                .iter()
                .filter_map(|c| Generator::guided(c, u, self.ctx.sig))
                .map(|g| (g.count(bound), g))
                .min_by_key(|(n, _)| *n);
            if let Some((n, g)) = best {
                if n < herbrand {
                    return g.terms(bound);
                }
            }
        }
        self.ctx.universe.up_to(bound).to_vec()
    }

    fn dfs(&mut self, pos: usize, total: usize, first: Option<&[Term]>) {
        let n = self.ctx.plan.order.len();
        if pos == n {
            if let Some(g) = self.global {
                g.fetch_min(total, Ordering::Relaxed);
            }
            self.best = Some((total, self.assigned.clone()));
            return;
        }
        let rest = n - pos - 1;
        let room = self.allowed_total().saturating_sub(total + rest);
        if room == 0 {
            return;
        }
        let owned;
        let cands: &[Term] = match first {
            Some(c) => c,
            None => {
                owned = self.candidates(pos, room.min(self.ctx.opts.max_size));
                &owned
            }
        };
        let due = self.due(pos);
        let u = self.ctx.plan.order[pos].clone();
        for t in cands {
            let size = t.size();
            if total + size + rest > self.allowed_total() {
                break;
            }
            let sigma = Substitution::new().bind(u.clone(), t.clone());
            let ok = due.iter().all(|c| {
                self.ctx
                    .opts
                    .decider
                    .decide(&sigma.apply(c).expect("quantifier-free"))
            });
            if ok {
                self.assigned.push(t.clone());
                self.dfs(pos + 1, total + size, None);
                self.assigned.pop();
            }
        }
    }
}
