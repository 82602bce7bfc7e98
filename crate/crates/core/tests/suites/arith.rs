#![allow(dead_code)]

use hsk_core::arith::{
    self, add, mul, num, num_tilde, plus, sim, sim_tilde, tab, tab_tilde, tim, Semitable,
};
use hsk_core::qcheck::is_quasitautology;
use hsk_core::skeleton::{
    enumerate_terms, make_skeleton, solve_bounded, verify_solution, ExistentialFormula, Solution,
};
use hsk_core::syntax::{Formula, Signature, SpecialBase, Term, Unknown, Variable};

pub fn c(base: SpecialBase) -> Term {
    Term::special(base, 0)
}

pub fn n0(m: u64) -> Term {
    Term::numeral(c(SpecialBase::Zero), m)
}

pub fn nt(m: u64) -> Term {
    Term::numeral(c(SpecialBase::ZeroTilde), m)
}

pub fn valid(phi: &Formula) -> bool {
    is_quasitautology(phi).unwrap()
}

pub fn base_table(t: &Semitable) -> Term {
    t.instantiate(
        &c(SpecialBase::Zero),
        &c(SpecialBase::Zero),
        &c(SpecialBase::K),
    )
}

pub fn tilde_table(t: &Semitable) -> Term {
    t.instantiate(
        &c(SpecialBase::ZeroHat),
        &c(SpecialBase::ZeroTilde),
        &c(SpecialBase::KTilde),
    )
}

/// Every semitable of length at most `len` with exponents at most `e`.
pub fn semitables(len: usize, e: u64) -> Vec<Semitable> {
    semitables_within(len, e, e)
}

pub fn semitables_within(len: usize, pmax: u64, qmax: u64) -> Vec<Semitable> {
    let mut out = vec![Semitable::default()];
    let mut frontier = vec![Semitable::default()];
    for _ in 0..len {
        let mut next = Vec::new();
        for t in &frontier {
            for p in 0..=pmax {
                for q in 0..=qmax {
                    let mut rows = vec![(p, q)];
                    rows.extend(t.rows.iter().copied());
                    next.push(Semitable::new(rows));
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

pub fn special_sig() -> Signature {
    let mut sig = Signature::new().with_function(hsk_core::syntax::FunctionSymbol::succ());
    sig = sig.with_function(hsk_core::syntax::FunctionSymbol::pair());
    for b in [SpecialBase::Zero, SpecialBase::ZeroTilde, SpecialBase::K] {
        sig = sig.with_function(hsk_core::syntax::FunctionSymbol::special(
            hsk_core::syntax::SpecialConstant::new(b, 0),
        ));
    }
    sig
}

pub fn numeral_exponent(t: &Term, base: SpecialBase) -> Option<u64> {
    t.numeral_of(c(base).symbol().unwrap())
}

pub fn num_solved_exactly_by_numerals() {
    for t in enumerate_terms(&special_sig(), 4) {
        let zero = numeral_exponent(&t, SpecialBase::Zero).is_some();
        let tilde = numeral_exponent(&t, SpecialBase::ZeroTilde).is_some();
        assert_eq!(valid(&num(t.clone())), zero, "Num({t})");
        assert_eq!(valid(&num_tilde(t.clone())), tilde, "NumTilde({t})");
    }
}

pub fn sim_iff_equal_exponents() {
    for m in 0..=6 {
        for p in 0..=6 {
            assert_eq!(valid(&sim(n0(m), nt(p))), m == p, "Sim({m},{p})");
        }
    }
}

pub fn plus_iff_sum() {
    for m in 0..=5 {
        for p in 0..=5 {
            for q in 0..=5 {
                assert_eq!(
                    valid(&plus(n0(m), nt(p), n0(q))),
                    q == m + p,
                    "Plus({m},{p},{q})"
                );
            }
        }
    }
}

pub fn add_skeleton_has_the_unique_witness() {
    let w = Variable::new("w");
    for m in 0..=4 {
        for p in 0..=4 {
            for q in 0..=4 {
                let psi = ExistentialFormula::new(
                    vec![w.clone()],
                    add(n0(m), n0(p), n0(q), Term::Var(w.clone())),
                )
                .unwrap();
                let sk = make_skeleton(&psi, 1).unwrap();
                let sig = sk.default_signature();
                let bound = (m + p + 3) as usize;
                let found = solve_bounded(&sk, &sig, bound);
                assert_eq!(found.is_some(), q == m + p, "Add({m},{p},{q})");
                if let Some(sol) = found {
                    let u = Unknown::indexed(1);
                    assert_eq!(sol.get(&u), Some(&nt(p)));
                    let witnesses: Vec<Term> = enumerate_terms(&sig, bound)
                        .into_iter()
                        .filter(|t| {
                            let sol: Solution = [(u.clone(), t.clone())].into_iter().collect();
                            verify_solution(&sk, &sol).unwrap()
                        })
                        .collect();
                    assert_eq!(witnesses, vec![nt(p)], "Add({m},{p},{q})");
                }
            }
        }
    }
}

pub fn tab_accepts_tables() {
    for t in semitables(3, 2) {
        assert!(valid(&tab(base_table(&t))), "{t:?}");
        assert!(valid(&tab_tilde(tilde_table(&t))), "{t:?}");
        assert!(!valid(&tab(tilde_table(&t))), "{t:?}");
    }
    let z = c(SpecialBase::Zero);
    let k = c(SpecialBase::K);
    let perturbed = [
        Term::pair(z.clone(), k.clone()),
        Term::pair(k.clone(), k.clone()),
        Term::pair(Term::pair(z.clone(), c(SpecialBase::ZeroTilde)), k.clone()),
        Term::pair(Term::pair(z.clone(), z.clone()), z.clone()),
        Term::pair(
            Term::pair(Term::pair(z.clone(), z.clone()), z.clone()),
            k.clone(),
        ),
        Term::pair(
            Term::pair(z.clone(), z.clone()),
            Term::pair(z.clone(), k.clone()),
        ),
        Term::succ(k.clone()),
        Term::pair(Term::pair(Term::succ(k.clone()), z.clone()), k.clone()),
        Term::pair(Term::pair(z.clone(), Term::succ(k.clone())), k.clone()),
        Term::app("f", vec![k.clone()]),
        Term::pair(Term::pair(z.clone(), z.clone()), c(SpecialBase::KTilde)),
        z.clone(),
        c(SpecialBase::KTilde),
        Term::pair(
            k.clone(),
            Term::pair(Term::pair(z.clone(), z.clone()), k.clone()),
        ),
        Term::pair(
            Term::pair(z.clone(), z.clone()),
            Term::pair(Term::pair(z.clone(), z.clone()), z.clone()),
        ),
        Term::pair(Term::pair(Term::constant("a"), z.clone()), k.clone()),
        Term::pair(Term::pair(z.clone(), Term::constant("a")), k.clone()),
        Term::pair(Term::pair(z.clone(), z.clone()), Term::succ(k.clone())),
        Term::pair(Term::pair(n0(2), c(SpecialBase::K)), k.clone()),
        Term::pair(
            Term::pair(n0(1), n0(1)),
            Term::pair(Term::pair(z.clone(), k.clone()), k.clone()),
        ),
    ];
    for t in perturbed {
        assert!(!valid(&tab(t.clone())), "{t}");
    }
}

pub fn sim_tilde_iff_identical_semitables() {
    let all = semitables(2, 2);
    for a in &all {
        for b in &all {
            assert_eq!(
                valid(&sim_tilde(base_table(a), tilde_table(b))),
                a == b,
                "{a:?} {b:?}"
            );
        }
    }
}

pub fn mp_equation_characterizes_mp_tables() {
    // a(S(0), S^m(0), (0,0),k) = (S^p(0), S^q(0)), a(0,0,k)
    let z = c(SpecialBase::Zero);
    let k = c(SpecialBase::K);
    let shifted_z = Term::pair(Term::pair(z.clone(), z.clone()), k.clone());
    for m in 0..=3 {
        for a in semitables_within(3, 3, 9) {
            let lhs = a.instantiate(&Term::succ(z.clone()), &n0(m), &shifted_z);
            let tail = base_table(&a);
            // The only (p, q) for which the equation can hold, read off the left side.
            let head = match (lhs.symbol(), lhs.args()) {
                (Some(f), [row, rest]) if f.is_pair() && *rest == tail => {
                    match (row.symbol(), row.args()) {
                        (Some(g), [x, y]) if g.is_pair() => x
                            .numeral_of(z.symbol().unwrap())
                            .zip(y.numeral_of(z.symbol().unwrap())),
                        _ => None,
                    }
                }
                _ => None,
            };
            for p in 0..=3 {
                for q in 0..=9 {
                    let expected = q == m * p && a.is_mp(m, p);
                    assert_eq!(head == Some((p, q)), expected, "m={m} p={p} q={q} {a:?}");
                }
            }
        }
    }
}

pub fn tim_iff_mp_table() {
    for m in 0..=2 {
        for p in 0..=2 {
            for q in 0..=4 {
                for a in semitables(3, 2) {
                    let phi = tim(n0(m), n0(p), n0(q), base_table(&a), tilde_table(&a));
                    assert_eq!(
                        valid(&phi),
                        q == m * p && a.is_mp(m, p),
                        "m={m} p={p} q={q} {a:?}"
                    );
                }
            }
        }
    }
}

pub fn mul_witness_pair_is_unique_among_tables() {
    let tables = semitables(3, 2);
    let short = semitables(1, 2);
    for m in 0..=2 {
        for p in 0..=2 {
            for q in 0..=4 {
                let holds = |a: &Semitable, b: &Semitable| {
                    valid(&mul(n0(m), n0(p), n0(q), base_table(a), tilde_table(b)))
                };
                let hits: Vec<&Semitable> = tables.iter().filter(|a| holds(a, a)).collect();
                if q == m * p {
                    assert_eq!(hits, vec![&Semitable::mp(m, p)], "m={m} p={p}");
                } else {
                    assert!(hits.is_empty(), "m={m} p={p} q={q}");
                }
                for a in &short {
                    for b in short.iter().filter(|b| *b != a) {
                        assert!(!holds(a, b), "m={m} p={p} q={q} {a:?} {b:?}");
                    }
                }
            }
        }
    }
}

pub fn mul_skeleton_is_solved_by_the_mp_tables() {
    let (w, wt) = (Variable::new("w"), Variable::new("wt"));
    for m in 0..=2 {
        for p in 0..=2 {
            for q in 0..=4 {
                let matrix = mul(
                    n0(m),
                    n0(p),
                    n0(q),
                    Term::Var(w.clone()),
                    Term::Var(wt.clone()),
                );
                let psi = ExistentialFormula::new(vec![w.clone(), wt.clone()], matrix).unwrap();
                let sk = make_skeleton(&psi, 1).unwrap();
                let table = Semitable::mp(m, p);
                let bound = tilde_table(&table).size().max(base_table(&table).size());
                let found = solve_bounded(&sk, &sk.default_signature(), bound);
                assert_eq!(found.is_some(), q == m * p, "Mul({m},{p},{q})");
                if let Some(sol) = found {
                    assert_eq!(sol.get(&Unknown::indexed(1)), Some(&base_table(&table)));
                    assert_eq!(sol.get(&Unknown::indexed(2)), Some(&tilde_table(&table)));
                }
            }
        }
    }
}

pub fn association_agrees_with_the_standard_model() {
    let fixtures = [
        "1 + 2 = 3",
        "1 + 1 = 3",
        "0 + 0 = 0",
        "2 * 1 = 2",
        "2 * 2 = 3",
        "1 * 0 = 0",
        "0 * 3 = 1",
        "1 + 1 = 2 & 1 * 2 = 2",
        "1 + 1 = 2 & 2 * 1 = 1",
        "3 + 0 = 3 & 0 * 0 = 0",
    ];
    let mut seen_true = 0;
    for text in fixtures {
        let psi: arith::DiophantineFormula = text.parse().unwrap();
        let truth = arith::eval_diophantine(&psi).unwrap();
        seen_true += usize::from(truth);
        let phi = arith::reduction_f(&psi, None, 0, 1).unwrap();
        let sk = make_skeleton(&phi, 1).unwrap();
        let bound = association_bound(&psi);
        let solvable = solve_bounded(&sk, &sk.default_signature(), bound).is_some();
        assert_eq!(solvable, truth, "{text}");
    }
    assert_eq!(seen_true, 6);
}

/// Largest witness size any atom of a closed formula needs.
pub fn association_bound(psi: &arith::DiophantineFormula) -> usize {
    psi.atoms()
        .iter()
        .map(|a| {
            let v = |i: usize| match a.args[i] {
                arith::Arg::Numeral(m) => m,
                arith::Arg::Var(_) => 0,
            };
            match a.op {
                arith::Op::Add => v(1) as usize + 1,
                arith::Op::Mul => tilde_table(&Semitable::mp(v(0), v(1))).size(),
            }
        })
        .max()
        .unwrap_or(1)
}
