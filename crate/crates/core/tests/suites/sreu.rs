#![allow(dead_code)]

use hsk_core::qcheck::is_quasitautology;
use hsk_core::skeleton::enumerate_terms;
use hsk_core::sreu::{convert_to_sreu, solve_sreu_bounded, SREUProblem};
use hsk_core::syntax::{parse_formula, signature_of, Formula, Substitution};

pub const FIXTURES: [&str; 20] = [
    "p(a) & p(b) & (*1 = a | *1 = b) -> p(c)",
    "p(*1) -> p(a)",
    "p(*1) & q(*1, *2) -> q(a, *2)",
    "*1 = a | *1 = b",
    "f(*1) = b -> f(a) = b",
    "!p(*1) | p(f(a))",
    "p(a) -> p(*1) & p(*2)",
    "(p(*1) -> q(a, b)) & (q(*2, b) -> p(a))",
    "*1 = *2 & !(*1 = a)",
    "p(*1) | !p(*2)",
    "a = b -> f(*1) = f(b)",
    "q(*1, *2) -> q(*2, *1)",
    "!(*1 = f(*2))",
    "p(a) & !p(b) -> *1 = a",
    "(*1 = a -> p(*2)) & (p(a) -> *2 = a)",
    "p(f(*1)) -> p(f(f(a)))",
    "f(a) = a -> *1 = f(f(a))",
    "!p(a) | !p(b) | p(*1)",
    "q(*1, a) & q(b, *1) -> *1 = a | q(b, b)",
    "(p(*1) | *1 = b) & (*2 = f(*1) -> p(*2))",
];

pub fn fixture(i: usize) -> Formula {
    parse_formula(FIXTURES[i]).unwrap()
}

pub fn solves(sigma: &Substitution, p: &SREUProblem) -> bool {
    match p.to_formula() {
        Some(f) => is_quasitautology(&sigma.apply(&f).unwrap()).unwrap(),
        None => true,
    }
}

/// Checks solution equivalence for every assignment of terms up to `bound`.
pub fn check_equivalence(phi: &Formula, bound: usize) -> Result<(), String> {
    let problems = convert_to_sreu(phi);
    let unknowns = phi.unknowns();
    let terms = enumerate_terms(&signature_of(phi), bound);
    let mut idx = vec![0usize; unknowns.len()];
    loop {
        let sigma: Substitution = unknowns
            .iter()
            .cloned()
            .zip(idx.iter().map(|&i| terms[i].clone()))
            .map(|(u, t)| (u.into(), t))
            .collect();
        let direct = is_quasitautology(&sigma.apply(phi).unwrap()).unwrap();
        let via = problems.iter().any(|p| solves(&sigma, p));
        if direct != via {
            return Err(format!("{phi}: {sigma:?} direct={direct} via={via}"));
        }
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return Ok(());
            }
            idx[pos] += 1;
            if idx[pos] < terms.len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

pub fn fixtures_are_solution_equivalent() {
    for text in FIXTURES {
        let phi = parse_formula(text).unwrap();
        assert!(phi.unknowns().len() <= 2, "{text}");
        check_equivalence(&phi, 3).unwrap();
    }
}

pub fn worked_conversion() {
    let phi = fixture(0);
    let problems = convert_to_sreu(&phi);
    let shown: Vec<String> = problems.iter().map(ToString::to_string).collect();
    assert_eq!(
        shown,
        vec![
            "(*1 = a -> a = c) & (*1 = b -> a = c)",
            "(*1 = a -> a = c) & (*1 = b -> b = c)",
            "(*1 = a -> b = c) & (*1 = b -> a = c)",
            "(*1 = a -> b = c) & (*1 = b -> b = c)",
        ]
    );
    let sig = signature_of(&phi);
    let solved: Vec<Option<String>> = problems
        .iter()
        .map(|p| solve_sreu_bounded(p, &sig, 3).map(|s| s.to_string()))
        .collect();
    assert_eq!(solved, vec![None, Some("*1 := c".to_string()), None, None]);
}
