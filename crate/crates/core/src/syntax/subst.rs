use std::collections::BTreeMap;

use thiserror::Error;

use super::{Formula, Term, Unknown, Variable};

/// Something a substitution can bind.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slot {
    Unknown(Unknown),
    Var(Variable),
}

impl From<Unknown> for Slot {
    fn from(u: Unknown) -> Self {
        Slot::Unknown(u)
    }
}

impl From<Variable> for Slot {
    fn from(v: Variable) -> Self {
        Slot::Var(v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubstError {
    #[error("substituting {term} for {slot} would capture bound variable ?{var}")]
    Capture {
        slot: String,
        term: String,
        var: String,
    },
}

/// A simultaneous substitution of terms for unknowns and variables.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Substitution {
    bindings: BTreeMap<Slot, Term>,
}

impl Substitution {
    pub fn new() -> Self {
        Substitution::default()
    }

    pub fn bind(mut self, slot: impl Into<Slot>, term: Term) -> Self {
        self.insert(slot, term);
        self
    }

    pub fn insert(&mut self, slot: impl Into<Slot>, term: Term) {
        self.bindings.insert(slot.into(), term);
    }

    pub fn get(&self, slot: &Slot) -> Option<&Term> {
        self.bindings.get(slot)
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Slot, &Term)> {
        self.bindings.iter()
    }

    /// Replaces every slot occurrence in `t` in one pass; results are not rewritten again.
    pub fn apply_term(&self, t: &Term) -> Term {
        self.apply_term_shadowed(t, &[])
    }

    fn apply_term_shadowed(&self, t: &Term, bound: &[Variable]) -> Term {
        match t {
            Term::Unknown(u) => self
                .bindings
                .get(&Slot::Unknown(u.clone()))
                .cloned()
                .unwrap_or_else(|| t.clone()),
            Term::Var(v) => {
                if bound.contains(v) {
                    return t.clone();
                }
                self.bindings
                    .get(&Slot::Var(v.clone()))
                    .cloned()
                    .unwrap_or_else(|| t.clone())
            }
            Term::App(f, args) => {
                if !t.contains_unknown() && t.is_ground() {
                    return t.clone();
                }
                Term::apply(
                    f.clone(),
                    args.iter()
                        .map(|a| self.apply_term_shadowed(a, bound))
                        .collect(),
                )
            }
        }
    }

    pub fn apply(&self, phi: &Formula) -> Result<Formula, SubstError> {
        let mut bound = Vec::new();
        self.apply_formula(phi, &mut bound)
    }

    fn check_capture(&self, t: &Term, bound: &[Variable]) -> Result<(), SubstError> {
        let mut slots = Vec::new();
        collect_slots(t, bound, &mut slots);
        for slot in slots {
            if let Some(replacement) = self.bindings.get(&slot) {
                let mut vs = Vec::new();
                replacement.collect_vars(&mut vs);
                if let Some(v) = vs.into_iter().find(|v| bound.contains(v)) {
                    let slot = match slot {
                        Slot::Unknown(u) => u.to_string(),
                        Slot::Var(v) => format!("?{}", v.name()),
                    };
                    return Err(SubstError::Capture {
                        slot,
                        term: replacement.to_string(),
                        var: v.name().to_string(),
                    });
                }
            }
        }
        Ok(())
    }

    fn apply_formula(
        &self,
        phi: &Formula,
        bound: &mut Vec<Variable>,
    ) -> Result<Formula, SubstError> {
        let term = |t: &Term, bound: &[Variable]| -> Result<Term, SubstError> {
            self.check_capture(t, bound)?;
            Ok(self.apply_term_shadowed(t, bound))
        };
        Ok(match phi {
            Formula::Eq(a, b) => Formula::Eq(term(a, bound)?, term(b, bound)?),
            Formula::Pred(p, args) => Formula::Pred(
                p.clone(),
                args.iter()
                    .map(|a| term(a, bound))
                    .collect::<Result<_, _>>()?,
            ),
            Formula::Not(a) => Formula::not(self.apply_formula(a, bound)?),
            Formula::And(a, b) => {
                Formula::and(self.apply_formula(a, bound)?, self.apply_formula(b, bound)?)
            }
            Formula::Or(a, b) => {
                Formula::or(self.apply_formula(a, bound)?, self.apply_formula(b, bound)?)
            }
            Formula::Implies(a, b) => {
                Formula::implies(self.apply_formula(a, bound)?, self.apply_formula(b, bound)?)
            }
            Formula::Exists(v, a) | Formula::Forall(v, a) => {
                bound.push(v.clone());
                let body = self.apply_formula(a, bound);
                bound.pop();
                if matches!(phi, Formula::Exists(..)) {
                    Formula::exists(v.clone(), body?)
                } else {
                    Formula::forall(v.clone(), body?)
                }
            }
        })
    }
}

/// Slots occurring free in `t` given the bound variables.
fn collect_slots(t: &Term, bound: &[Variable], out: &mut Vec<Slot>) {
    match t {
        Term::Unknown(u) => out.push(Slot::Unknown(u.clone())),
        Term::Var(v) if !bound.contains(v) => out.push(Slot::Var(v.clone())),
        Term::Var(_) => {}
        Term::App(_, args) => args.iter().for_each(|a| collect_slots(a, bound, out)),
    }
}

impl FromIterator<(Slot, Term)> for Substitution {
    fn from_iter<I: IntoIterator<Item = (Slot, Term)>>(iter: I) -> Self {
        Substitution {
            bindings: iter.into_iter().collect(),
        }
    }
}
