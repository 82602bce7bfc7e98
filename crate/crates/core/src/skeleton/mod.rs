//! Existential formulas, Herbrand skeletons and a bounded solution search.

use std::fmt;

use indexmap::IndexMap;
use thiserror::Error;

use crate::qcheck::{self, QcheckError};
use crate::syntax::{
    signature_of, Formula, FunctionSymbol, Signature, Substitution, Term, Unknown, Variable,
};

mod automaton;
mod search;

pub use automaton::Generator;
pub use search::{solve_bounded, solve_formula, solve_with, SearchOptions};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SkeletonError {
    #[error("matrix is not quantifier-free")]
    QuantifiedMatrix,
    #[error("matrix already contains unknowns")]
    UnknownsInMatrix,
    #[error("free variable ?{0} is not bound")]
    UnboundVariable(String),
    #[error("variable ?{0} is bound twice")]
    DuplicateVariable(String),
    #[error("skeleton size must be positive")]
    ZeroSize,
    #[error("no term assigned to {0}")]
    Incomplete(Unknown),
    #[error("{0} is assigned `{1}`, which is not a closed term")]
    NotEligible(Unknown, String),
    #[error(transparent)]
    Qcheck(#[from] QcheckError),
}

/// `exists x1 ... xk. matrix` with a quantifier-free matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExistentialFormula {
    bound_vars: Vec<Variable>,
    matrix: Formula,
}

impl ExistentialFormula {
    pub fn new(bound_vars: Vec<Variable>, matrix: Formula) -> Result<Self, SkeletonError> {
        if !matrix.is_quantifier_free() {
            return Err(SkeletonError::QuantifiedMatrix);
        }
        if matrix.contains_unknown() {
            return Err(SkeletonError::UnknownsInMatrix);
        }
        for (i, v) in bound_vars.iter().enumerate() {
            if bound_vars[..i].contains(v) {
                return Err(SkeletonError::DuplicateVariable(v.name().to_string()));
            }
        }
        if let Some(v) = matrix
            .free_variables()
            .into_iter()
            .find(|v| !bound_vars.contains(v))
        {
            return Err(SkeletonError::UnboundVariable(v.name().to_string()));
        }
        Ok(ExistentialFormula { bound_vars, matrix })
    }

    /// Splits off the leading existential prefix.
    pub fn from_formula(phi: &Formula) -> Result<Self, SkeletonError> {
        let mut vars = Vec::new();
        let mut body = phi;
        while let Formula::Exists(v, b) = body {
            vars.push(v.clone());
            body = b;
        }
        ExistentialFormula::new(vars, body.clone())
    }

    pub fn bound_vars(&self) -> &[Variable] {
        &self.bound_vars
    }

    pub fn matrix(&self) -> &Formula {
        &self.matrix
    }

    pub fn to_formula(&self) -> Formula {
        self.bound_vars
            .iter()
            .rev()
            .fold(self.matrix.clone(), |body, v| {
                Formula::exists(v.clone(), body)
            })
    }
}

impl fmt::Display for ExistentialFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_formula())
    }
}

/// A disjunction of `n` copies of the matrix with disjoint tuples of unknowns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Skeleton {
    source: ExistentialFormula,
    n: usize,
    tuples: Vec<Vec<Unknown>>,
    formula: Formula,
}

impl Skeleton {
    pub fn source(&self) -> &ExistentialFormula {
        &self.source
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn unknown_tuples(&self) -> &[Vec<Unknown>] {
        &self.tuples
    }

    /// All unknowns, tuple by tuple.
    pub fn unknowns(&self) -> Vec<Unknown> {
        self.tuples.iter().flatten().cloned().collect()
    }

    pub fn formula(&self) -> &Formula {
        &self.formula
    }

    /// Default enumeration signature: the symbols of the matrix, plus a fresh
    /// constant when the matrix has none.
    pub fn default_signature(&self) -> Signature {
        with_constant(signature_of(&self.source.matrix))
    }
}

/// Adds the constant `c#0` to a signature without constants.
pub fn with_constant(sig: Signature) -> Signature {
    if sig.has_constant() {
        sig
    } else {
        sig.with_function(FunctionSymbol::new("c#0", 0))
    }
}

/// Builds the size-`n` skeleton with unknowns `*1 .. *(n*k)` in tuple order.
pub fn make_skeleton(psi: &ExistentialFormula, n: usize) -> Result<Skeleton, SkeletonError> {
    if n == 0 {
        return Err(SkeletonError::ZeroSize);
    }
    let k = psi.bound_vars.len();
    let mut tuples = Vec::with_capacity(n);
    let mut copies = Vec::with_capacity(n);
    for i in 0..n {
        let tuple: Vec<Unknown> = (1..=k).map(|j| Unknown::indexed(i * k + j)).collect();
        let sigma: Substitution = psi
            .bound_vars
            .iter()
            .zip(&tuple)
            .map(|(v, u)| (v.clone().into(), Term::Unknown(u.clone())))
            .collect();
        copies.push(sigma.apply(&psi.matrix).expect("matrix is quantifier-free"));
        tuples.push(tuple);
    }
    let formula = Formula::or_all(copies).expect("n >= 1");
    Ok(Skeleton {
        source: psi.clone(),
        n,
        tuples,
        formula,
    })
}

/// An assignment of closed terms to unknowns, kept in insertion order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Solution {
    assignment: IndexMap<Unknown, Term>,
}

impl Solution {
    pub fn new() -> Self {
        Solution::default()
    }

    pub fn insert(&mut self, u: Unknown, t: Term) {
        self.assignment.insert(u, t);
    }

    pub fn get(&self, u: &Unknown) -> Option<&Term> {
        self.assignment.get(u)
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Unknown, &Term)> {
        self.assignment.iter()
    }

    /// Sum of the sizes of the assigned terms.
    pub fn total_size(&self) -> usize {
        self.assignment.values().map(Term::size).sum()
    }

    pub fn to_substitution(&self) -> Substitution {
        self.assignment
            .iter()
            .map(|(u, t)| (u.clone().into(), t.clone()))
            .collect()
    }
}

impl FromIterator<(Unknown, Term)> for Solution {
    fn from_iter<I: IntoIterator<Item = (Unknown, Term)>>(iter: I) -> Self {
        Solution {
            assignment: iter.into_iter().collect(),
        }
    }
}

impl fmt::Display for Solution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (u, t)) in self.assignment.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{u} := {t}")?;
        }
        Ok(())
    }
}

/// Checks that `sol` turns the skeleton into a quasitautology.
pub fn verify_solution(sk: &Skeleton, sol: &Solution) -> Result<bool, SkeletonError> {
    verify_with(sk, sol, qcheck::default_decider())
}

pub fn verify_with(
    sk: &Skeleton,
    sol: &Solution,
    decider: &dyn qcheck::Decider,
) -> Result<bool, SkeletonError> {
    for u in sk.tuples.iter().flatten() {
        match sol.get(u) {
            None => return Err(SkeletonError::Incomplete(u.clone())),
            Some(t) if !t.is_solution_eligible() => {
                return Err(SkeletonError::NotEligible(u.clone(), t.to_string()))
            }
            Some(_) => {}
        }
    }
    let phi = sol
        .to_substitution()
        .apply(&sk.formula)
        .expect("skeleton is quantifier-free");
    Ok(decider.is_quasitautology(&phi)?)
}

/// All terms over `sig` of size at most `max_size`, in canonical order. A
/// constant `c#0` is added first if `sig` has none.
pub fn enumerate_terms(sig: &Signature, max_size: usize) -> Vec<Term> {
    Generator::herbrand(&with_constant(sig.clone())).terms(max_size)
}

/// Number of terms [`enumerate_terms`] would return, saturating.
pub fn count_terms(sig: &Signature, max_size: usize) -> u128 {
    Generator::herbrand(&with_constant(sig.clone())).count(max_size)
}
