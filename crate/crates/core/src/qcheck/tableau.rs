use crate::syntax::Formula;

use super::closure::{Closure, TermGraph};
use super::{AtomId, Decider};

#[derive(Clone, Debug)]
enum Nnf {
    Lit(AtomId, bool),
    And(Vec<Nnf>),
    Or(Vec<Nnf>),
}

fn nnf(phi: &Formula, positive: bool, graph: &mut TermGraph) -> Nnf {
    let junction = |conj: bool, parts: Vec<Nnf>| -> Nnf {
        let mut flat = Vec::with_capacity(parts.len());
        for p in parts {
            match (conj, p) {
                (true, Nnf::And(xs)) | (false, Nnf::Or(xs)) => flat.extend(xs),
                (_, p) => flat.push(p),
            }
        }
        if conj {
            Nnf::And(flat)
        } else {
            Nnf::Or(flat)
        }
    };
    match phi {
        Formula::Eq(..) | Formula::Pred(..) => Nnf::Lit(AtomId::intern(graph, phi), positive),
        Formula::Not(a) => nnf(a, !positive, graph),
        Formula::And(a, b) => {
            let parts = vec![nnf(a, positive, graph), nnf(b, positive, graph)];
            junction(positive, parts)
        }
        Formula::Or(a, b) => {
            let parts = vec![nnf(a, positive, graph), nnf(b, positive, graph)];
            junction(!positive, parts)
        }
        Formula::Implies(a, b) => {
            let parts = vec![nnf(a, !positive, graph), nnf(b, positive, graph)];
            junction(!positive, parts)
        }
        Formula::Exists(..) | Formula::Forall(..) => unreachable!("quantified input"),
    }
}

/// Searches for an E-consistent branch of the negation, branching on
/// disjunctions only after all unconditional literals are asserted.
#[derive(Clone, Copy, Debug, Default)]
pub struct Tableau;

impl Tableau {
    fn open_branch(graph: &TermGraph, mut closure: Closure, mut todo: Vec<&Nnf>) -> bool {
        let mut ors: Vec<&Nnf> = Vec::new();
        while let Some(n) = todo.pop() {
            match n {
                Nnf::Lit(a, positive) => {
                    a.assert(*positive, &mut closure, graph);
                    if closure.is_conflicting() {
                        return false;
                    }
                }
                Nnf::And(xs) => todo.extend(xs.iter()),
                Nnf::Or(_) => ors.push(n),
            }
        }
        // Disjunctions with an entailed positive literal impose nothing more.
        ors.retain(|n| {
            !children(n)
                .iter()
                .any(|x| matches!(x, Nnf::Lit(a, true) if a.entailed(&closure)))
        });
        let Some(pick) = (0..ors.len()).min_by_key(|&i| children(ors[i]).len()) else {
            return true;
        };
        let chosen = ors.swap_remove(pick);
        for alt in children(chosen) {
            let mut next = ors.clone();
            next.push(alt);
            if Tableau::open_branch(graph, closure.clone(), next) {
                return true;
            }
        }
        false
    }
}

fn children(n: &Nnf) -> &[Nnf] {
    match n {
        Nnf::And(xs) | Nnf::Or(xs) => xs,
        Nnf::Lit(..) => &[],
    }
}

impl Decider for Tableau {
    fn name(&self) -> &'static str {
        "tableau"
    }

    fn decide(&self, phi: &Formula) -> bool {
        let mut graph = TermGraph::new();
        let root = nnf(phi, false, &mut graph);
        let closure = Closure::new(&graph);
        !Tableau::open_branch(&graph, closure, vec![&root])
    }
}
