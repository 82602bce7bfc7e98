#![allow(dead_code)]

use std::collections::HashMap;

use hsk_core::syntax::{Formula, Term};
use proptest::prelude::*;

pub fn leaf() -> impl Strategy<Value = Term> {
    prop_oneof![
        Just(Term::constant("a")),
        Just(Term::constant("b")),
        Just(Term::constant("c"))
    ]
}

/// Ground terms over `a, b, c, f/1, g/2, h/3` of size at most `max_size`.
pub fn ground_term(max_size: usize) -> impl Strategy<Value = Term> {
    leaf()
        .prop_recursive(4, 16, 3, |inner| {
            prop_oneof![
                inner.clone().prop_map(|x| Term::app("f", vec![x])),
                (inner.clone(), inner.clone()).prop_map(|(x, y)| Term::app("g", vec![x, y])),
                (inner.clone(), inner.clone(), inner)
                    .prop_map(|(x, y, z)| Term::app("h", vec![x, y, z])),
            ]
        })
        .prop_filter("term too large", move |t| t.size() <= max_size)
}

/// Atoms over the given terms: equalities, `p/1` and `q/2`.
pub fn atom_over(terms: Vec<Term>) -> impl Strategy<Value = Formula> {
    let n = terms.len();
    let t1 = terms.clone();
    let t2 = terms.clone();
    let t3 = terms;
    prop_oneof![
        6 => (0..n, 0..n).prop_map(move |(i, j)| Formula::eq(t1[i].clone(), t1[j].clone())),
        1 => (0..n).prop_map(move |i| Formula::pred("p", vec![t2[i].clone()])),
        1 => (0..n, 0..n).prop_map(move |(i, j)| Formula::pred("q", vec![t3[i].clone(), t3[j].clone()])),
    ]
}

pub fn connectives(atom: BoxedStrategy<Formula>, depth: u32) -> impl Strategy<Value = Formula> {
    atom.prop_recursive(depth, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::implies(a, b)),
        ]
    })
}

/// Ground quantifier-free formulas whose atoms use a small pool of terms.
pub fn ground_formula(depth: u32) -> impl Strategy<Value = Formula> {
    prop::collection::vec(ground_term(3), 1..4)
        .prop_flat_map(move |pool| connectives(atom_over(pool).boxed(), depth))
}

/// Distinct subterms of every term in `phi`.
pub fn subterms(phi: &Formula) -> Vec<Term> {
    let mut out: Vec<Term> = Vec::new();
    for t in phi.terms() {
        for s in t.subterms() {
            if !out.contains(&s) {
                out.push(s);
            }
        }
    }
    out
}

pub fn predicate_atoms(phi: &Formula) -> Vec<Formula> {
    let mut out = Vec::new();
    phi.visit_atoms(&mut |a| {
        if matches!(a, Formula::Pred(..)) && !out.contains(a) {
            out.push(a.clone());
        }
    });
    out
}

/// Validity by brute force over every structure whose domain is the set of
/// subterm values: each congruent labelling of subterms by `0..n` together
/// with each consistent truth assignment to predicate atoms. Labellings are
/// enumerated up to renaming of domain elements.
pub fn small_model_valid(phi: &Formula) -> bool {
    let terms = subterms(phi);
    let preds = predicate_atoms(phi);
    let index: HashMap<Term, usize> = terms
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, t)| (t, i))
        .collect();
    let n = terms.len();
    let mut label = vec![0usize; n];
    let mut valid = true;
    labellings(0, 0, &mut label, &mut |label| {
        if !congruent(&terms, &index, label) {
            return true;
        }
        for bits in 0u32..(1 << preds.len()) {
            let truth = |a: &Formula| {
                let key = args_key(a, &index, label);
                preds
                    .iter()
                    .enumerate()
                    .any(|(i, p)| bits & (1 << i) != 0 && args_key(p, &index, label) == key)
            };
            if !consistent(&preds, bits, &index, label) {
                continue;
            }
            if !eval(phi, &index, label, &truth) {
                valid = false;
                return false;
            }
        }
        true
    });
    valid
}

fn labellings(
    i: usize,
    used: usize,
    label: &mut Vec<usize>,
    visit: &mut impl FnMut(&[usize]) -> bool,
) -> bool {
    if i == label.len() {
        return visit(label);
    }
    for v in 0..=used {
        label[i] = v;
        if !labellings(i + 1, used.max(v + 1), label, visit) {
            return false;
        }
    }
    true
}

fn congruent(terms: &[Term], index: &HashMap<Term, usize>, label: &[usize]) -> bool {
    for (i, s) in terms.iter().enumerate() {
        for (j, t) in terms.iter().enumerate().skip(i + 1) {
            if s.symbol() == t.symbol()
                && s.args()
                    .iter()
                    .zip(t.args())
                    .all(|(x, y)| label[index[x]] == label[index[y]])
                && label[i] != label[j]
            {
                return false;
            }
        }
    }
    true
}

fn args_key(a: &Formula, index: &HashMap<Term, usize>, label: &[usize]) -> (String, Vec<usize>) {
    match a {
        Formula::Pred(p, args) => (
            p.name().to_string(),
            args.iter().map(|t| label[index[t]]).collect(),
        ),
        _ => unreachable!(),
    }
}

fn consistent(preds: &[Formula], bits: u32, index: &HashMap<Term, usize>, label: &[usize]) -> bool {
    for i in 0..preds.len() {
        for j in i + 1..preds.len() {
            let same = args_key(&preds[i], index, label) == args_key(&preds[j], index, label);
            if same && (bits >> i & 1) != (bits >> j & 1) {
                return false;
            }
        }
    }
    true
}

fn eval(
    phi: &Formula,
    index: &HashMap<Term, usize>,
    label: &[usize],
    truth: &impl Fn(&Formula) -> bool,
) -> bool {
    match phi {
        Formula::Eq(a, b) => label[index[a]] == label[index[b]],
        Formula::Pred(..) => truth(phi),
        Formula::Not(a) => !eval(a, index, label, truth),
        Formula::And(a, b) => eval(a, index, label, truth) && eval(b, index, label, truth),
        Formula::Or(a, b) => eval(a, index, label, truth) || eval(b, index, label, truth),
        Formula::Implies(a, b) => !eval(a, index, label, truth) || eval(b, index, label, truth),
        Formula::Exists(..) | Formula::Forall(..) => panic!("quantified formula"),
    }
}
