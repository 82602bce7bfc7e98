#![allow(dead_code)]

use hsk_core::arith::{
    assign_n, associate, classify_failures, make_variant, reduction_f, variant_term, Conjunct,
    DiophantineFormula, Kind, PCArithFormula, Semitable,
};
use hsk_core::models::{construct_alpha, holds, j, m_alpha, pair_j, unpair, AlphaAssignment};
use hsk_core::qcheck::{default_decider, is_quasitautology};
use hsk_core::skeleton::{
    make_skeleton, solve_bounded, verify_solution, ExistentialFormula, Solution,
};
use hsk_core::syntax::{Formula, SpecialBase, SpecialConstant, Substitution, Term, Variable};
use num_bigint::BigUint;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

pub fn sc(base: SpecialBase, i: usize) -> Term {
    Term::special(base, i)
}

pub fn num_i(base: SpecialBase, i: usize, m: u64) -> Term {
    Term::numeral(sc(base, i), m)
}

pub fn alpha(i: usize, values: &[(SpecialBase, BigUint)]) -> AlphaAssignment {
    let mut a = AlphaAssignment::new();
    for (b, v) in values {
        a.set(SpecialConstant::new(*b, i), v.clone());
    }
    a
}

pub fn agrees(phi: &Formula, a: &AlphaAssignment) -> bool {
    is_quasitautology(phi).unwrap() == holds(&m_alpha(a.clone()), phi).unwrap()
}

pub fn semitables(len: usize, e: u64) -> Vec<Semitable> {
    let mut out = vec![Semitable::default()];
    let mut frontier = vec![Semitable::default()];
    for _ in 0..len {
        let next: Vec<Semitable> = frontier
            .iter()
            .flat_map(|t| {
                (0..=e).flat_map(move |p| {
                    (0..=e).map(move |q| {
                        let mut rows = vec![(p, q)];
                        rows.extend(t.rows.iter().copied());
                        Semitable::new(rows)
                    })
                })
            })
            .collect();
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

pub fn base_table(t: &Semitable, i: usize) -> Term {
    t.instantiate(
        &sc(SpecialBase::Zero, i),
        &sc(SpecialBase::Zero, i),
        &sc(SpecialBase::K, i),
    )
}

pub fn tilde_table(t: &Semitable, i: usize) -> Term {
    t.instantiate(
        &sc(SpecialBase::ZeroHat, i),
        &sc(SpecialBase::ZeroTilde, i),
        &sc(SpecialBase::KTilde, i),
    )
}

pub fn partition_of_the_naturals() {
    let limit = 10_000u64;
    let mut owner = vec![None; limit as usize + 1];
    for jj in 0..=5u64 {
        for i in 0.. {
            let v = j(jj, i);
            if v > BigUint::from(limit) {
                break;
            }
            let slot = &mut owner[u64::try_from(&v).unwrap() as usize];
            assert_eq!(*slot, None, "J({jj},{i}) collides");
            *slot = Some((jj, i));
        }
    }
    for n in 0..=limit {
        let read = unpair(&BigUint::from(n))
            .map(|(a, b)| (u64::try_from(&a).unwrap(), u64::try_from(&b).unwrap()));
        match owner[n as usize] {
            Some(p) => assert_eq!(read, Some(p), "{n}"),
            None => assert!(read.is_none_or(|(a, _)| a > 5), "{n}"),
        }
    }
    assert!(unpair(&BigUint::from(0u32)).is_none());
}

pub fn num_lemma_under_its_alpha() {
    let sig_terms = |i: usize| {
        let sig = hsk_core::syntax::Signature::new()
            .with_function(hsk_core::syntax::FunctionSymbol::succ())
            .with_function(hsk_core::syntax::FunctionSymbol::pair())
            .with_function(hsk_core::syntax::FunctionSymbol::special(
                SpecialConstant::new(SpecialBase::Zero, i),
            ))
            .with_function(hsk_core::syntax::FunctionSymbol::special(
                SpecialConstant::new(SpecialBase::ZeroTilde, i),
            ))
            .with_constants(["a"]);
        hsk_core::skeleton::enumerate_terms(&sig, 4)
    };
    for i in 1..=2 {
        let a_num = alpha(i, &[(SpecialBase::Zero, j(1, i as u64))]);
        let a_tilde = alpha(i, &[(SpecialBase::ZeroTilde, j(3, i as u64))]);
        for t in sig_terms(i) {
            assert!(
                agrees(
                    &Conjunct::new(Kind::Num, vec![t.clone()]).to_formula(i),
                    &a_num
                ),
                "Num {t}"
            );
            assert!(
                agrees(
                    &Conjunct::new(Kind::NumTilde, vec![t.clone()]).to_formula(i),
                    &a_tilde
                ),
                "NumTilde {t}"
            );
        }
    }
}

pub fn sim_and_plus_lemmas_under_their_alpha() {
    for i in 1..=2 {
        let a_sim = alpha(
            i,
            &[
                (SpecialBase::Zero, j(0, 0)),
                (SpecialBase::ZeroTilde, j(0, 0)),
            ],
        );
        for m in 0..=4 {
            for p in 0..=4 {
                let sim = Conjunct::new(
                    Kind::Sim,
                    vec![
                        num_i(SpecialBase::Zero, i, m),
                        num_i(SpecialBase::ZeroTilde, i, p),
                    ],
                );
                assert!(agrees(&sim.to_formula(i), &a_sim), "Sim {m} {p}");
                let a_plus = alpha(
                    i,
                    &[
                        (SpecialBase::Zero, j(0, 0)),
                        (SpecialBase::ZeroTilde, j(0, m)),
                    ],
                );
                for q in 0..=4 {
                    let plus = Conjunct::new(
                        Kind::Plus,
                        vec![
                            num_i(SpecialBase::Zero, i, m),
                            num_i(SpecialBase::ZeroTilde, i, p),
                            num_i(SpecialBase::Zero, i, q),
                        ],
                    );
                    assert!(agrees(&plus.to_formula(i), &a_plus), "Plus {m} {p} {q}");
                }
            }
        }
    }
}

pub fn table_lemmas_under_their_alpha() {
    let i = 1;
    let a_tab = alpha(
        i,
        &[(SpecialBase::Zero, j(1, 1)), (SpecialBase::K, j(4, 1))],
    );
    let a_tab_tilde = alpha(
        i,
        &[
            (SpecialBase::ZeroHat, j(2, 1)),
            (SpecialBase::ZeroTilde, j(3, 1)),
            (SpecialBase::KTilde, j(4, 1)),
        ],
    );
    let a_sim: Vec<(SpecialBase, BigUint)> =
        SpecialBase::ALL.into_iter().map(|b| (b, j(0, 0))).collect();
    let a_sim = alpha(i, &a_sim);
    let tables = semitables(3, 2);
    for t in &tables {
        for candidate in [base_table(t, i), tilde_table(t, i)] {
            assert!(agrees(
                &Conjunct::new(Kind::Tab, vec![candidate.clone()]).to_formula(i),
                &a_tab
            ));
            assert!(agrees(
                &Conjunct::new(Kind::TabTilde, vec![candidate]).to_formula(i),
                &a_tab_tilde
            ));
        }
    }
    let short = semitables(2, 2);
    for a in &short {
        for b in &short {
            let phi = Conjunct::new(Kind::SimTilde, vec![base_table(a, i), tilde_table(b, i)])
                .to_formula(i);
            assert!(agrees(&phi, &a_sim), "{a:?} {b:?}");
        }
    }
    for m in 0..=2 {
        let kt = pair_j(
            &BigUint::from(0u32),
            &pair_j(&j(0, 0), &BigUint::from(0u32)),
        );
        let a_tim = alpha(
            i,
            &[
                (SpecialBase::Zero, j(0, 0)),
                (SpecialBase::K, j(0, 0)),
                (SpecialBase::ZeroHat, j(0, 1)),
                (SpecialBase::ZeroTilde, j(0, m)),
                (SpecialBase::KTilde, kt),
            ],
        );
        for p in 0..=2 {
            for q in 0..=4 {
                for t in &tables {
                    let args = vec![
                        num_i(SpecialBase::Zero, i, m),
                        num_i(SpecialBase::Zero, i, p),
                        num_i(SpecialBase::Zero, i, q),
                        base_table(t, i),
                        tilde_table(t, i),
                    ];
                    let phi = Conjunct::new(Kind::Tim, args).to_formula(i);
                    assert!(agrees(&phi, &a_tim), "Tim {m} {p} {q} {t:?}");
                }
            }
        }
    }
}

pub const FAMILIES: [&str; 5] = [
    "?x + 1 = 2",
    "?x * 2 = ?y",
    "?x + ?x = 2 & ?x * ?x = 1",
    "?x * ?y = 2",
    "1 + ?x = 3",
];

/// Ground candidates for a variable of the given kind in language `i`.
pub fn candidates(var: &Variable, i: usize) -> Vec<Term> {
    let mut out: Vec<Term> = (0..=3).map(|m| num_i(SpecialBase::Zero, i, m)).collect();
    out.extend((0..=3).map(|m| num_i(SpecialBase::ZeroTilde, i, m)));
    out.push(sc(SpecialBase::K, i));
    out.push(Term::app("f", vec![sc(SpecialBase::Zero, i)]));
    if var.kind() == hsk_core::syntax::VarKind::Table {
        for (m, p) in [(0, 1), (1, 1), (2, 1), (1, 2), (2, 2)] {
            out.push(base_table(&Semitable::mp(m, p), i));
            out.push(tilde_table(&Semitable::mp(m, p), i));
        }
    }
    out
}

pub fn random_instance(phi: &PCArithFormula, i: usize, rng: &mut StdRng) -> PCArithFormula {
    let variant = make_variant(phi, i).unwrap();
    let mut sigma = Substitution::new();
    for v in variant.variables() {
        sigma.insert(v.clone(), candidates(&v, i).choose(rng).unwrap().clone());
    }
    variant.apply(&sigma)
}

/// The variant instance at a genuine solution found by bounded search.
pub fn valid_instance(psi: &DiophantineFormula, i: usize) -> Option<PCArithFormula> {
    let phi = associate(psi);
    let ex = ExistentialFormula::new(phi.variables(), phi.formula()).unwrap();
    let sk = make_skeleton(&ex, 1).unwrap();
    let sol = solve_bounded(&sk, &sk.default_signature(), 4)?;
    let mut sigma = Substitution::new();
    for (v, u) in phi.variables().iter().zip(&sk.unknown_tuples()[0]) {
        let t = sol.get(u).unwrap();
        sigma.insert(
            Variable::with_kind(format!("{}@{i}", v.name()), v.kind()),
            variant_term(t, i),
        );
    }
    Some(make_variant(&phi, i).unwrap().apply(&sigma))
}

pub fn bounded_main_lemma() {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let (mut falsified, mut accepted) = (0, 0);
    while falsified < 10 || accepted < 10 {
        let psi: DiophantineFormula = FAMILIES[rng.gen_range(0..FAMILIES.len())].parse().unwrap();
        let phi = associate(&psi);
        let n = rng.gen_range(1..=3);
        let mut instances: Vec<PCArithFormula> = (1..=n)
            .map(|i| random_instance(&phi, i, &mut rng))
            .collect();
        let with_valid = accepted < 10 && rng.gen_bool(0.5);
        if with_valid {
            let i = rng.gen_range(1..=n);
            let Some(v) = valid_instance(&psi, i) else {
                continue;
            };
            instances[i - 1] = v;
        }
        let disjunction = Formula::or_all(instances.iter().map(PCArithFormula::formula)).unwrap();
        let valid: Vec<bool> = instances
            .iter()
            .map(|x| is_quasitautology(&x.formula()).unwrap())
            .collect();
        if valid.iter().any(|&v| v) {
            assert!(is_quasitautology(&disjunction).unwrap());
            accepted += usize::from(with_valid);
            continue;
        }
        if falsified >= 10 {
            continue;
        }
        let failing: Vec<_> = instances
            .iter()
            .map(|x| {
                (
                    x.language(),
                    classify_failures(x, default_decider()).unwrap(),
                )
            })
            .collect();
        let m = m_alpha(construct_alpha(&failing).unwrap());
        for x in &instances {
            assert!(!holds(&m, &x.formula()).unwrap(), "{x}");
        }
        assert!(!holds(&m, &disjunction).unwrap());
        assert!(!is_quasitautology(&disjunction).unwrap());
        falsified += 1;
    }
}

pub fn interference_in_the_base_language() {
    let phi = associate(&"?x + 1 = 0".parse().unwrap());
    let at = |x: Term, w: Term| {
        let sigma = Substitution::new()
            .bind(Variable::new("x"), x)
            .bind(Variable::new("w1"), w);
        phi.apply(&sigma)
    };
    let a = at(sc(SpecialBase::Zero, 0), sc(SpecialBase::ZeroTilde, 0));
    let b = at(
        num_i(SpecialBase::Zero, 0, 1),
        num_i(SpecialBase::ZeroTilde, 0, 1),
    );
    let (fa, fb) = (a.formula(), b.formula());
    assert!(!is_quasitautology(&fa).unwrap());
    assert!(!is_quasitautology(&fb).unwrap());
    assert!(is_quasitautology(&Formula::or(fa.clone(), fb.clone())).unwrap());
    // Each disjunct alone is refuted by the structure built for its failing case.
    for (inst, f) in [(&a, &fa), (&b, &fb)] {
        let d = classify_failures(inst, default_decider()).unwrap();
        let mut base = AlphaAssignment::new();
        for (c, v) in construct_alpha(&[(1, d)]).unwrap().iter() {
            base.set(SpecialConstant::new(c.base, 0), v.clone());
        }
        assert!(!holds(&m_alpha(base), f).unwrap(), "{f}");
    }
}

pub fn one_skeleton_solutions_lift_to_variants() {
    for (text, x) in [("1 + 1 = 2", None), ("?x + 1 = 2", Some("x"))] {
        let psi: DiophantineFormula = text.parse().unwrap();
        let phi = associate(&psi);
        let base = reduction_f(&psi, None, 0, 1).unwrap();
        let sk1 = make_skeleton(&base, 1).unwrap();
        let sol = solve_bounded(&sk1, &sk1.default_signature(), 4).unwrap();
        if let Some(x) = x {
            let u = &sk1.unknown_tuples()[0][base
                .bound_vars()
                .iter()
                .position(|v| v.name() == x)
                .unwrap()];
            assert_eq!(sol.get(u), Some(&num_i(SpecialBase::Zero, 0, 1)));
        }
        let by_name: std::collections::HashMap<String, Term> = base
            .bound_vars()
            .iter()
            .zip(&sk1.unknown_tuples()[0])
            .map(|(v, u)| (v.name().to_string(), sol.get(u).unwrap().clone()))
            .collect();
        for n in 1..=2 {
            let assigned = assign_n(&phi, n).unwrap();
            let ex = ExistentialFormula::new(assigned.variables(), assigned.formula()).unwrap();
            for size in 1..=2 {
                let sk = make_skeleton(&ex, size).unwrap();
                let mut lifted = Solution::new();
                for tuple in sk.unknown_tuples() {
                    for (v, u) in ex.bound_vars().iter().zip(tuple) {
                        let (name, i) = v.name().split_once('@').unwrap();
                        lifted.insert(u.clone(), variant_term(&by_name[name], i.parse().unwrap()));
                    }
                }
                assert!(
                    verify_solution(&sk, &lifted).unwrap(),
                    "{text} n={n} size={size}"
                );
            }
        }
    }
}
