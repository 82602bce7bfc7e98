use crate::syntax::Formula;

use super::closure::{Closure, TermGraph};
use super::{AtomId, Decider};

enum Shape {
    Atom(usize),
    Not(Box<Shape>),
    And(Box<Shape>, Box<Shape>),
    Or(Box<Shape>, Box<Shape>),
    Implies(Box<Shape>, Box<Shape>),
}

fn compile(phi: &Formula, graph: &mut TermGraph, atoms: &mut Vec<AtomId>) -> Shape {
    let bin = |a: &Formula, b: &Formula, graph: &mut TermGraph, atoms: &mut Vec<AtomId>| {
        (
            Box::new(compile(a, graph, atoms)),
            Box::new(compile(b, graph, atoms)),
        )
    };
    match phi {
        Formula::Eq(..) | Formula::Pred(..) => {
            let id = AtomId::intern(graph, phi);
            let idx = atoms.iter().position(|&a| a == id).unwrap_or_else(|| {
                atoms.push(id);
                atoms.len() - 1
            });
            Shape::Atom(idx)
        }
        Formula::Not(a) => Shape::Not(Box::new(compile(a, graph, atoms))),
        Formula::And(a, b) => {
            let (a, b) = bin(a, b, graph, atoms);
            Shape::And(a, b)
        }
        Formula::Or(a, b) => {
            let (a, b) = bin(a, b, graph, atoms);
            Shape::Or(a, b)
        }
        Formula::Implies(a, b) => {
            let (a, b) = bin(a, b, graph, atoms);
            Shape::Implies(a, b)
        }
        Formula::Exists(..) | Formula::Forall(..) => unreachable!("quantified input"),
    }
}

/// Kleene three-valued evaluation under a partial assignment.
fn eval(s: &Shape, values: &[Option<bool>]) -> Option<bool> {
    match s {
        Shape::Atom(i) => values[*i],
        Shape::Not(a) => eval(a, values).map(|v| !v),
        Shape::And(a, b) => match (eval(a, values), eval(b, values)) {
            (Some(false), _) | (_, Some(false)) => Some(false),
            (Some(true), Some(true)) => Some(true),
            _ => None,
        },
        Shape::Or(a, b) => match (eval(a, values), eval(b, values)) {
            (Some(true), _) | (_, Some(true)) => Some(true),
            (Some(false), Some(false)) => Some(false),
            _ => None,
        },
        Shape::Implies(a, b) => match (eval(a, values), eval(b, values)) {
            (Some(false), _) | (_, Some(true)) => Some(true),
            (Some(true), Some(false)) => Some(false),
            _ => None,
        },
    }
}

/// Enumerates truth assignments to the atoms, looking for one that falsifies
/// the formula and is consistent with the identity axioms. Partial assignments
/// are cut as soon as they are E-inconsistent or already make the formula true.
#[derive(Clone, Copy, Debug, Default)]
pub struct Assignments;

struct Search<'a> {
    graph: &'a TermGraph,
    atoms: &'a [AtomId],
    shape: &'a Shape,
    values: Vec<Option<bool>>,
}

impl Search<'_> {
    /// True iff some extension of the current assignment is a countermodel.
    fn countermodel(&mut self, next: usize, closure: &Closure) -> bool {
        match eval(self.shape, &self.values) {
            Some(true) => return false,
            Some(false) => return true,
            None => {}
        }
        debug_assert!(next < self.atoms.len());
        for value in [true, false] {
            let mut c = closure.clone();
            self.atoms[next].assert(value, &mut c, self.graph);
            if c.is_conflicting() {
                continue;
            }
            self.values[next] = Some(value);
            let found = self.countermodel(next + 1, &c);
            self.values[next] = None;
            if found {
                return true;
            }
        }
        false
    }
}

impl Decider for Assignments {
    fn name(&self) -> &'static str {
        "assignments"
    }

    fn decide(&self, phi: &Formula) -> bool {
        let mut graph = TermGraph::new();
        let mut atoms = Vec::new();
        let shape = compile(phi, &mut graph, &mut atoms);
        let closure = Closure::new(&graph);
        let mut search = Search {
            graph: &graph,
            atoms: &atoms,
            shape: &shape,
            values: vec![None; atoms.len()],
        };
        !search.countermodel(0, &closure)
    }
}
