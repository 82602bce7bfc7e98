//! Simultaneous rigid E-unification problems and the conversion of
//! quantifier-free formulas with unknowns into finite classes of them.
//!
//! The conversion runs in three steps: clause form, Horn splitting and
//! predicate elimination. The resulting class is solution equivalent to the
//! input: an assignment solves the formula iff it solves one of the problems.

use std::collections::BTreeSet;
use std::fmt;

use crate::skeleton::{solve_formula, SearchOptions, Solution};
use crate::syntax::{Formula, FunctionSymbol, Signature, Term, Unknown};

/// `A1 & ... & An -> B1 | ... | Bm` over atoms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Clause {
    pub antecedent: Vec<Formula>,
    pub consequent: Vec<Formula>,
}

impl Clause {
    pub fn is_horn(&self) -> bool {
        self.consequent.len() == 1
    }

    /// Number of predicate atoms on both sides.
    pub fn predicate_count(&self) -> usize {
        self.antecedent
            .iter()
            .chain(&self.consequent)
            .filter(|a| matches!(a, Formula::Pred(..)))
            .count()
    }

    pub fn to_formula(&self) -> Formula {
        let body =
            Formula::or_all(self.consequent.iter().cloned()).expect("consequent is never empty");
        match Formula::and_all(self.antecedent.iter().cloned()) {
            Some(h) => Formula::implies(h, body),
            None => body,
        }
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_formula())
    }
}

/// `s1 = t1 & ... & sm = tm -> s = t`, possibly with no hypotheses.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RigidConstraint {
    pub hypotheses: Vec<(Term, Term)>,
    pub conclusion: (Term, Term),
}

impl RigidConstraint {
    /// `None` unless every atom of the clause is an identity and it is Horn.
    pub fn from_clause(c: &Clause) -> Option<Self> {
        let eq = |a: &Formula| match a {
            Formula::Eq(s, t) => Some((s.clone(), t.clone())),
            _ => None,
        };
        if !c.is_horn() {
            return None;
        }
        let hypotheses = c.antecedent.iter().map(eq).collect::<Option<Vec<_>>>()?;
        Some(RigidConstraint {
            hypotheses,
            conclusion: eq(&c.consequent[0])?,
        })
    }

    pub fn to_formula(&self) -> Formula {
        let (s, t) = &self.conclusion;
        let body = Formula::eq(s.clone(), t.clone());
        match Formula::and_all(
            self.hypotheses
                .iter()
                .map(|(a, b)| Formula::eq(a.clone(), b.clone())),
        ) {
            Some(h) => Formula::implies(h, body),
            None => body,
        }
    }
}

impl fmt::Display for RigidConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_formula())
    }
}

/// A conjunction of rigid constraints sharing unknowns.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SREUProblem {
    constraints: Vec<RigidConstraint>,
    unknowns: Vec<Unknown>,
}

impl SREUProblem {
    pub fn new(constraints: Vec<RigidConstraint>) -> Self {
        let mut unknowns = BTreeSet::new();
        for c in &constraints {
            unknowns.extend(c.to_formula().unknowns());
        }
        SREUProblem {
            constraints,
            unknowns: unknown_order(unknowns.into_iter().collect()),
        }
    }

    pub fn constraints(&self) -> &[RigidConstraint] {
        &self.constraints
    }

    /// Unknowns in numeric order of their names, then by name.
    pub fn unknowns(&self) -> &[Unknown] {
        &self.unknowns
    }

    /// The conjunction of the constraints; `None` for the empty problem.
    pub fn to_formula(&self) -> Option<Formula> {
        Formula::and_all(self.constraints.iter().map(RigidConstraint::to_formula))
    }
}

impl fmt::Display for SREUProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.constraints.as_slice() {
            [] => f.write_str("(empty)"),
            cs => {
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" & ")?;
                    }
                    if c.hypotheses.is_empty() {
                        write!(f, "{c}")?;
                    } else {
                        write!(f, "({c})")?;
                    }
                }
                Ok(())
            }
        }
    }
}

fn unknown_order(mut us: Vec<Unknown>) -> Vec<Unknown> {
    us.sort_by(|a, b| {
        let key = |u: &Unknown| {
            (
                u.name().parse::<u64>().map_or(u64::MAX, |n| n),
                u.name().to_string(),
            )
        };
        key(a).cmp(&key(b))
    });
    us
}

#[derive(Clone, Debug)]
enum Nnf {
    Lit(Formula, bool),
    And(Box<Nnf>, Box<Nnf>),
    Or(Box<Nnf>, Box<Nnf>),
}

fn nnf(phi: &Formula, positive: bool) -> Nnf {
    let both =
        |a: &Formula, pa: bool, b: &Formula, pb: bool| (Box::new(nnf(a, pa)), Box::new(nnf(b, pb)));
    match phi {
        Formula::Eq(..) | Formula::Pred(..) => Nnf::Lit(phi.clone(), positive),
        Formula::Not(a) => nnf(a, !positive),
        Formula::And(a, b) => {
            let (x, y) = both(a, positive, b, positive);
            if positive {
                Nnf::And(x, y)
            } else {
                Nnf::Or(x, y)
            }
        }
        Formula::Or(a, b) => {
            let (x, y) = both(a, positive, b, positive);
            if positive {
                Nnf::Or(x, y)
            } else {
                Nnf::And(x, y)
            }
        }
        Formula::Implies(a, b) => {
            let (x, y) = both(a, !positive, b, positive);
            if positive {
                Nnf::Or(x, y)
            } else {
                Nnf::And(x, y)
            }
        }
        Formula::Exists(..) | Formula::Forall(..) => panic!("quantified input"),
    }
}

fn cnf(n: &Nnf) -> Vec<Vec<(Formula, bool)>> {
    match n {
        Nnf::Lit(a, p) => vec![vec![(a.clone(), *p)]],
        Nnf::And(a, b) => {
            let mut out = cnf(a);
            out.extend(cnf(b));
            out
        }
        Nnf::Or(a, b) => {
            let (xs, ys) = (cnf(a), cnf(b));
            let mut out = Vec::with_capacity(xs.len() * ys.len());
            for x in &xs {
                for y in &ys {
                    let mut c = x.clone();
                    c.extend(y.iter().cloned());
                    out.push(c);
                }
            }
            out
        }
    }
}

/// Clause form by distribution. A clause without positive literals gets the
/// consequent `c#i = d#i` for a fresh pair of constants.
///
/// # Panics
/// If `phi` contains quantifiers.
pub fn to_clause_conjunction(phi: &Formula) -> Vec<Clause> {
    let mut used = BTreeSet::new();
    phi.visit_atoms(&mut |a| {
        for t in a.terms() {
            t.collect_symbols(&mut used);
        }
    });
    let mut next = 1usize;
    let mut fresh = || loop {
        let (c, d) = (format!("c#{next}"), format!("d#{next}"));
        next += 1;
        if !used.contains(&FunctionSymbol::new(&c, 0))
            && !used.contains(&FunctionSymbol::new(&d, 0))
        {
            return Formula::eq(Term::constant(c), Term::constant(d));
        }
    };
    cnf(&nnf(phi, true))
        .into_iter()
        .map(|lits| {
            let mut antecedent: Vec<Formula> = Vec::new();
            let mut consequent: Vec<Formula> = Vec::new();
            for (atom, positive) in lits {
                let side = if positive {
                    &mut consequent
                } else {
                    &mut antecedent
                };
                if !side.contains(&atom) {
                    side.push(atom);
                }
            }
            if consequent.is_empty() {
                consequent.push(fresh());
            }
            Clause {
                antecedent,
                consequent,
            }
        })
        .collect()
}

/// Replaces every formula by the Horn alternatives of its leftmost non-Horn
/// clause, to a fixpoint. Alternatives take the place of their parent.
pub fn horn_split(gamma: Vec<Vec<Clause>>) -> Vec<Vec<Clause>> {
    let mut out = Vec::new();
    for f in gamma {
        split_into(f, &mut out);
    }
    out
}

fn split_into(f: Vec<Clause>, out: &mut Vec<Vec<Clause>>) {
    let Some(i) = f.iter().position(|c| c.consequent.len() > 1) else {
        out.push(f);
        return;
    };
    for b in &f[i].consequent {
        let mut g = f.clone();
        g[i] = Clause {
            antecedent: f[i].antecedent.clone(),
            consequent: vec![b.clone()],
        };
        split_into(g, out);
    }
}

/// One predicate-elimination step on a conjunction of Horn clauses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    /// Every clause is a rigid constraint.
    Done,
    /// A clause concludes `p(..)` without `p` in its antecedent: drop the formula.
    Delete,
    /// The formula is replaced by these alternatives, in order.
    Replace(Vec<Vec<Clause>>),
}

/// Applies the first applicable rule at the leftmost clause that still
/// mentions a predicate, at its leftmost predicate atom.
pub fn elimination_step(f: &[Clause]) -> Step {
    let Some(i) = f.iter().position(|c| c.predicate_count() > 0) else {
        return Step::Done;
    };
    let clause = &f[i];
    let with = |replacement: Vec<Clause>| {
        let mut g = f[..i].to_vec();
        g.extend(replacement);
        g.extend_from_slice(&f[i + 1..]);
        g
    };
    let without = |j: usize| {
        let mut antecedent = clause.antecedent.clone();
        antecedent.remove(j);
        antecedent
    };
    match &clause.consequent[0] {
        Formula::Pred(p, goal) => {
            if !clause
                .antecedent
                .iter()
                .any(|a| matches!(a, Formula::Pred(q, _) if q == p))
            {
                return Step::Delete;
            }
            let j = clause
                .antecedent
                .iter()
                .position(|a| matches!(a, Formula::Pred(..)))
                .expect("p occurs");
            let Formula::Pred(q, hyp) = &clause.antecedent[j] else {
                unreachable!()
            };
            let rest = without(j);
            if q != p {
                return Step::Replace(vec![with(vec![Clause {
                    antecedent: rest,
                    consequent: clause.consequent.clone(),
                }])]);
            }
            let equalities = hyp
                .iter()
                .zip(goal)
                .map(|(b, a)| Clause {
                    antecedent: rest.clone(),
                    consequent: vec![Formula::eq(b.clone(), a.clone())],
                })
                .collect();
            let dropped = Clause {
                antecedent: rest.clone(),
                consequent: clause.consequent.clone(),
            };
            Step::Replace(vec![with(equalities), with(vec![dropped])])
        }
        _ => {
            let j = clause
                .antecedent
                .iter()
                .position(|a| matches!(a, Formula::Pred(..)))
                .expect("has a predicate");
            Step::Replace(vec![with(vec![Clause {
                antecedent: without(j),
                consequent: clause.consequent.clone(),
            }])])
        }
    }
}

/// Predicate counts of the clauses, largest first. Every elimination step
/// replaces a formula by formulas with a smaller measure in the multiset order.
pub fn predicate_measure(f: &[Clause]) -> Vec<usize> {
    let mut m: Vec<usize> = f
        .iter()
        .map(Clause::predicate_count)
        .filter(|&n| n > 0)
        .collect();
    m.sort_unstable_by(|a, b| b.cmp(a));
    m
}

/// Multiset order on measures sorted in descending order.
pub fn measure_less(a: &[usize], b: &[usize]) -> bool {
    // Cancel common elements, then the largest leftover must come from `b`.
    let (mut i, mut j) = (0, 0);
    let (mut only_a, mut only_b) = (Vec::new(), Vec::new());
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) if x == y => {
                i += 1;
                j += 1;
            }
            (Some(x), Some(y)) if x > y => {
                only_a.push(*x);
                i += 1;
            }
            (Some(x), None) => {
                only_a.push(*x);
                i += 1;
            }
            (_, Some(y)) => {
                only_b.push(*y);
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    match (only_a.first(), only_b.first()) {
        (_, None) => false,
        (None, Some(_)) => true,
        (Some(x), Some(y)) => y > x,
    }
}

/// Runs predicate elimination to a fixpoint. Alternatives take the place of
/// their parent, the equality alternative first.
pub fn eliminate_predicates(gamma: Vec<Vec<Clause>>) -> Vec<SREUProblem> {
    let mut out = Vec::new();
    let mut stack: Vec<Vec<Clause>> = gamma.into_iter().rev().collect();
    while let Some(f) = stack.pop() {
        match elimination_step(&f) {
            Step::Done => {
                let cs = f
                    .iter()
                    .map(|c| RigidConstraint::from_clause(c).expect("rigid"))
                    .collect();
                out.push(SREUProblem::new(cs));
            }
            Step::Delete => {}
            Step::Replace(alts) => stack.extend(alts.into_iter().rev()),
        }
    }
    out
}

/// Full conversion; structurally identical problems are kept once.
pub fn convert_to_sreu(phi: &Formula) -> Vec<SREUProblem> {
    let problems = eliminate_predicates(horn_split(vec![to_clause_conjunction(phi)]));
    let mut seen = BTreeSet::new();
    problems
        .into_iter()
        .filter(|p| seen.insert(p.to_string()))
        .collect()
}

/// Bounded search for a solution of a problem, over the unknowns it mentions.
pub fn solve_sreu_bounded(p: &SREUProblem, sig: &Signature, max_size: usize) -> Option<Solution> {
    solve_sreu_with(p, sig, &SearchOptions::with_max_size(max_size))
}

pub fn solve_sreu_with(p: &SREUProblem, sig: &Signature, opts: &SearchOptions) -> Option<Solution> {
    match p.to_formula() {
        Some(phi) => solve_formula(&phi, p.unknowns(), sig, opts),
        None => Some(Solution::new()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    fn f(src: &str) -> Formula {
        parse_formula(src).unwrap()
    }

    fn show(cs: &[Clause]) -> Vec<String> {
        cs.iter().map(|c| c.to_string()).collect()
    }

    const EXAMPLE: &str = "p(a) & p(b) & (*1 = a | *1 = b) -> p(c)";

    #[test]
    fn clause_form_of_example() {
        let cs = to_clause_conjunction(&f(EXAMPLE));
        assert_eq!(
            show(&cs),
            vec![
                "p(a) & p(b) & *1 = a -> p(c)",
                "p(a) & p(b) & *1 = b -> p(c)"
            ]
        );
        assert_eq!(horn_split(vec![cs.clone()]), vec![cs]);
    }

    #[test]
    fn clause_form_edge_cases() {
        assert_eq!(show(&to_clause_conjunction(&f("a = b"))), vec!["a = b"]);
        assert_eq!(
            show(&to_clause_conjunction(&f("!p(a)"))),
            vec!["p(a) -> c#1 = d#1"]
        );
        assert_eq!(
            show(&to_clause_conjunction(&f("!p(c#1)"))),
            vec!["p(c#1) -> c#2 = d#2"]
        );
    }

    #[test]
    fn horn_alternatives() {
        let cs = to_clause_conjunction(&f("q(a) -> *1 = a | *1 = b"));
        let split = horn_split(vec![cs]);
        let got: Vec<Vec<String>> = split.iter().map(|g| show(g)).collect();
        assert_eq!(got, vec![vec!["q(a) -> *1 = a"], vec!["q(a) -> *1 = b"]]);
    }

    #[test]
    fn four_problems_in_order() {
        let got: Vec<String> = convert_to_sreu(&f(EXAMPLE))
            .iter()
            .map(|p| p.to_string())
            .collect();
        assert_eq!(
            got,
            vec![
                "(*1 = a -> a = c) & (*1 = b -> a = c)",
                "(*1 = a -> a = c) & (*1 = b -> b = c)",
                "(*1 = a -> b = c) & (*1 = b -> a = c)",
                "(*1 = a -> b = c) & (*1 = b -> b = c)",
            ]
        );
    }

    #[test]
    fn only_the_second_is_solvable() {
        let sig = Signature::new().with_constants(["a", "b", "c"]);
        let problems = convert_to_sreu(&f(EXAMPLE));
        let found: Vec<Option<String>> = problems
            .iter()
            .map(|p| solve_sreu_bounded(p, &sig, 3).map(|s| s.to_string()))
            .collect();
        assert_eq!(found, vec![None, Some("*1 := c".into()), None, None]);
    }

    #[test]
    fn rule_cases() {
        assert!(convert_to_sreu(&f("p(a)")).is_empty());
        let single: Vec<String> = convert_to_sreu(&f("p(a) -> *1 = b"))
            .iter()
            .map(|p| p.to_string())
            .collect();
        assert_eq!(single, vec!["*1 = b"]);
        let rigid = f("*1 = a -> f(*1) = f(a)");
        let got = convert_to_sreu(&rigid);
        assert_eq!(got.len(), 1);
        assert_eq!(got[0].to_formula(), Some(rigid));
        let sig = Signature::new().with_constants(["a"]);
        let p = &convert_to_sreu(&f("*1 = a"))[0];
        assert_eq!(
            solve_sreu_bounded(p, &sig, 1).unwrap().to_string(),
            "*1 := a"
        );
        // q(b) is removed before p(..) is matched.
        let cs = to_clause_conjunction(&f("q(b) & p(a) -> p(*1)"));
        let Step::Replace(alts) = elimination_step(&cs) else {
            panic!()
        };
        assert_eq!(show(&alts[0]), vec!["p(a) -> p(*1)"]);
    }

    #[test]
    fn measure_decreases() {
        let cs = to_clause_conjunction(&f("p(x, y) & q(a) & r(b) -> p(a, b)"));
        let Step::Replace(alts) = elimination_step(&cs) else {
            panic!()
        };
        for g in &alts {
            assert!(measure_less(&predicate_measure(g), &predicate_measure(&cs)));
        }
        assert!(measure_less(&[2, 2], &[3]));
        assert!(!measure_less(&[3], &[3]));
        assert!(measure_less(&[], &[1]));
        assert!(!measure_less(&[3, 1], &[3]));
    }
}
