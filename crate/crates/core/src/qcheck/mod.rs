//! Quasitautology checking for ground quantifier-free formulas.
//!
//! A formula is a quasitautology iff its negation has no model of the identity
//! axioms. Both deciders below reduce that to satisfiability of literal sets
//! under congruence closure; they differ only in how they enumerate the
//! propositional cases.

use std::sync::Arc;

use thiserror::Error;

use crate::syntax::Formula;

mod assignments;
pub(crate) mod closure;
mod tableau;

pub use assignments::Assignments;
pub use closure::{congruence_close, CongruencePartition};
pub use tableau::Tableau;

use closure::{Closure, TermGraph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QcheckError {
    #[error("formula is not quantifier-free")]
    Quantified,
    #[error("`{0}` is not ground")]
    NotGround(String),
    #[error("`{0}` is outside the universe")]
    OutsideUniverse(String),
    #[error("`{0}` is not an atom")]
    NotAtom(String),
}

/// A signed ground atom.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Literal {
    positive: bool,
    atom: Formula,
}

impl Literal {
    pub fn new(positive: bool, atom: Formula) -> Result<Self, QcheckError> {
        if !atom.is_atom() {
            return Err(QcheckError::NotAtom(atom.to_string()));
        }
        if !atom.is_ground() {
            return Err(QcheckError::NotGround(atom.to_string()));
        }
        Ok(Literal { positive, atom })
    }

    pub fn pos(atom: Formula) -> Result<Self, QcheckError> {
        Literal::new(true, atom)
    }

    pub fn neg(atom: Formula) -> Result<Self, QcheckError> {
        Literal::new(false, atom)
    }

    pub fn is_positive(&self) -> bool {
        self.positive
    }

    pub fn atom(&self) -> &Formula {
        &self.atom
    }
}

/// Interned form of an atom: an equation between two nodes, or a predicate
/// node compared against the distinguished TRUE node.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) enum AtomId {
    Eq(usize, usize),
    Pred(usize),
}

impl AtomId {
    fn intern(graph: &mut TermGraph, atom: &Formula) -> AtomId {
        match atom {
            Formula::Eq(a, b) => {
                let (x, y) = (graph.term(a), graph.term(b));
                AtomId::Eq(x.min(y), x.max(y))
            }
            Formula::Pred(p, args) => AtomId::Pred(graph.pred(p, args)),
            _ => unreachable!("not an atom"),
        }
    }

    fn sides(self) -> (usize, usize) {
        match self {
            AtomId::Eq(a, b) => (a, b),
            AtomId::Pred(p) => (p, TermGraph::TRUE),
        }
    }

    fn assert(self, positive: bool, closure: &mut Closure, graph: &TermGraph) {
        let (a, b) = self.sides();
        if positive {
            closure.merge(a, b, graph);
        } else {
            closure.assert_diseq(a, b);
        }
    }

    fn entailed(self, closure: &Closure) -> bool {
        let (a, b) = self.sides();
        closure.same(a, b)
    }
}

/// Whether some structure satisfies every literal together with the identity axioms.
pub fn e_satisfiable(literals: &[Literal]) -> bool {
    let mut graph = TermGraph::new();
    let atoms: Vec<_> = literals
        .iter()
        .map(|l| (AtomId::intern(&mut graph, &l.atom), l.positive))
        .collect();
    let mut closure = Closure::new(&graph);
    for (a, positive) in atoms {
        a.assert(positive, &mut closure, &graph);
        if closure.is_conflicting() {
            return false;
        }
    }
    true
}

fn check_input(phi: &Formula) -> Result<(), QcheckError> {
    if !phi.is_quantifier_free() {
        return Err(QcheckError::Quantified);
    }
    if let Some(t) = phi.terms().find(|t| !t.is_ground()) {
        return Err(QcheckError::NotGround(t.to_string()));
    }
    Ok(())
}

/// A decision procedure for quasitautologies.
pub trait Decider: Send + Sync {
    fn name(&self) -> &'static str;

    /// Decides a formula already known to be ground and quantifier-free.
    fn decide(&self, phi: &Formula) -> bool;

    fn is_quasitautology(&self, phi: &Formula) -> Result<bool, QcheckError> {
        check_input(phi)?;
        Ok(self.decide(phi))
    }
}

/// Deciders registered by name.
pub struct DeciderRegistry {
    entries: Vec<Arc<dyn Decider>>,
}

impl DeciderRegistry {
    pub fn empty() -> Self {
        DeciderRegistry {
            entries: Vec::new(),
        }
    }

    pub fn register(&mut self, decider: Box<dyn Decider>) {
        self.entries.retain(|d| d.name() != decider.name());
        self.entries.push(Arc::from(decider));
    }

    pub fn get(&self, name: &str) -> Option<&dyn Decider> {
        self.entries
            .iter()
            .find(|d| d.name() == name)
            .map(|d| d.as_ref())
    }

    /// A shared handle, for callers that keep the decider around.
    pub fn shared(&self, name: &str) -> Option<Arc<dyn Decider>> {
        self.entries.iter().find(|d| d.name() == name).cloned()
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|d| d.name()).collect()
    }
}

impl Default for DeciderRegistry {
    fn default() -> Self {
        let mut r = DeciderRegistry::empty();
        r.register(Box::new(Tableau));
        r.register(Box::new(Assignments));
        r
    }
}

pub const DEFAULT_DECIDER: &str = "tableau";

pub fn default_decider() -> &'static dyn Decider {
    &Tableau
}

/// Decides validity with the default decider.
pub fn is_quasitautology(phi: &Formula) -> Result<bool, QcheckError> {
    default_decider().is_quasitautology(phi)
}
