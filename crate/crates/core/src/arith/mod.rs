//! The encoding of Diophantine formulas into equality logic with the
//! constants `z`, `zh`, `zt`, `k`, `kt`, successor `s` and pairing `pair`.
//!
//! A formula of the class is a conjunction of eight primitive shapes
//! ([`Kind`]); `Add` and `Mul` are fixed conjunctions of them. Variants move a
//! formula into language `i` by renaming special constants `c` to `c_i` and
//! variables `?x` to `?x@i`.

use std::fmt;

use thiserror::Error;

use crate::models::Diagnosis;
use crate::qcheck::{Decider, QcheckError};
use crate::skeleton::{ExistentialFormula, SkeletonError};
use crate::syntax::{
    Formula, FunctionSymbol, SpecialBase, SpecialConstant, Substitution, Term, VarKind, Variable,
};

mod dioph;
mod table;

pub use dioph::{eval_diophantine, Arg, Atom, DiophantineFormula, Op};
pub use table::Semitable;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("a Diophantine formula needs at least one atom")]
    EmptyDiophantine,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("?{0} is free")]
    FreeVariable(String),
    #[error("?{0} is not a numeric variable of the formula")]
    NotNumeric(String),
    #[error("expected a formula of the base language, found language {0}")]
    NotBaseLanguage(usize),
    #[error("variant index must be positive")]
    ZeroIndex,
    #[error("instance is not ground")]
    NotGround,
    #[error("every conjunct of the instance is valid")]
    AllValid,
    #[error("`{0}` is not a numeral")]
    NotNumeral(String),
    #[error(transparent)]
    Skeleton(#[from] SkeletonError),
    #[error(transparent)]
    Qcheck(#[from] QcheckError),
}

/// The primitive conjunct shapes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Num,
    NumTilde,
    Sim,
    Plus,
    Tab,
    TabTilde,
    SimTilde,
    Tim,
}

impl Kind {
    pub fn arity(self) -> usize {
        match self {
            Kind::Num | Kind::NumTilde | Kind::Tab | Kind::TabTilde => 1,
            Kind::Sim | Kind::SimTilde => 2,
            Kind::Plus => 3,
            Kind::Tim => 5,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Kind::Num => "Num",
            Kind::NumTilde => "NumTilde",
            Kind::Sim => "Sim",
            Kind::Plus => "Plus",
            Kind::Tab => "Tab",
            Kind::TabTilde => "TabTilde",
            Kind::SimTilde => "SimTilde",
            Kind::Tim => "Tim",
        }
    }
}

/// Special constants of one language.
struct Consts {
    z: Term,
    zh: Term,
    zt: Term,
    k: Term,
    kt: Term,
}

impl Consts {
    fn of(l: usize) -> Self {
        let c = |b| Term::special(b, l);
        Consts {
            z: c(SpecialBase::Zero),
            zh: c(SpecialBase::ZeroHat),
            zt: c(SpecialBase::ZeroTilde),
            k: c(SpecialBase::K),
            kt: c(SpecialBase::KTilde),
        }
    }
}

fn eq(a: &Term, b: &Term) -> Formula {
    Formula::eq(a.clone(), b.clone())
}

fn rule(hyps: Vec<Formula>, goal: Formula) -> Formula {
    Formula::implies(Formula::and_all(hyps).expect("nonempty"), goal)
}

/// One primitive conjunct applied to arguments.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Conjunct {
    pub kind: Kind,
    pub args: Vec<Term>,
}

impl Conjunct {
    pub fn new(kind: Kind, args: Vec<Term>) -> Self {
        assert_eq!(
            args.len(),
            kind.arity(),
            "{} takes {} arguments",
            kind.name(),
            kind.arity()
        );
        Conjunct { kind, args }
    }

    /// The formula over the special constants of `language`.
    pub fn to_formula(&self, language: usize) -> Formula {
        let Consts { z, zh, zt, k, kt } = Consts::of(language);
        let a = &self.args;
        let s = |t: &Term| Term::succ(t.clone());
        let p = |x: &Term, y: &Term| Term::pair(x.clone(), y.clone());
        match self.kind {
            Kind::Num => rule(vec![eq(&z, &s(&z))], eq(&z, &a[0])),
            Kind::NumTilde => rule(vec![eq(&zt, &s(&zt))], eq(&zt, &a[0])),
            Kind::Sim => rule(vec![eq(&z, &zt)], eq(&a[0], &a[1])),
            Kind::Plus => rule(vec![eq(&zt, &a[0])], eq(&a[2], &a[1])),
            Kind::Tab => rule(
                vec![eq(&z, &s(&z)), eq(&k, &p(&p(&z, &z), &k))],
                eq(&k, &a[0]),
            ),
            Kind::TabTilde => rule(
                vec![
                    eq(&zh, &s(&zh)),
                    eq(&zt, &s(&zt)),
                    eq(&kt, &p(&p(&zh, &zt), &kt)),
                ],
                eq(&kt, &a[0]),
            ),
            Kind::SimTilde => rule(
                vec![eq(&z, &zh), eq(&z, &zt), eq(&k, &kt)],
                eq(&a[0], &a[1]),
            ),
            Kind::Tim => rule(
                vec![eq(&zh, &s(&z)), eq(&zt, &a[0]), eq(&kt, &p(&p(&z, &z), &k))],
                eq(&a[4], &p(&p(&a[1], &a[2]), &a[3])),
            ),
        }
    }

    fn map_args(&self, f: impl Fn(&Term) -> Term) -> Conjunct {
        Conjunct {
            kind: self.kind,
            args: self.args.iter().map(f).collect(),
        }
    }
}

impl fmt::Display for Conjunct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.kind.name())?;
        for (i, a) in self.args.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")")
    }
}

/// Which similarity conjunct `Mul` uses between its two tables.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum MulSimilarity {
    /// `SimTilde`, which relates a table over `(z, z, k)` to one over `(zh, zt, kt)`.
    #[default]
    Table,
    /// The numeral similarity `Sim` as printed in the definition of `Mul`.
    Literal,
}

pub fn add_conjuncts(x: Term, y: Term, z: Term, w: Term) -> Vec<Conjunct> {
    vec![
        Conjunct::new(Kind::NumTilde, vec![w.clone()]),
        Conjunct::new(Kind::Sim, vec![y, w.clone()]),
        Conjunct::new(Kind::Plus, vec![x, w, z]),
    ]
}

pub fn mul_conjuncts(
    x: Term,
    y: Term,
    z: Term,
    w: Term,
    wt: Term,
    sim: MulSimilarity,
) -> Vec<Conjunct> {
    let sim_kind = match sim {
        MulSimilarity::Table => Kind::SimTilde,
        MulSimilarity::Literal => Kind::Sim,
    };
    vec![
        Conjunct::new(Kind::Tab, vec![w.clone()]),
        Conjunct::new(Kind::TabTilde, vec![wt.clone()]),
        Conjunct::new(sim_kind, vec![w.clone(), wt.clone()]),
        Conjunct::new(Kind::Tim, vec![x, y, z, w, wt]),
    ]
}

fn base(kind: Kind, args: Vec<Term>) -> Formula {
    Conjunct::new(kind, args).to_formula(0)
}

fn conj(cs: Vec<Conjunct>) -> Formula {
    Formula::and_all(cs.iter().map(|c| c.to_formula(0))).expect("nonempty")
}

pub fn num(x: Term) -> Formula {
    base(Kind::Num, vec![x])
}

pub fn num_tilde(x: Term) -> Formula {
    base(Kind::NumTilde, vec![x])
}

pub fn sim(x: Term, y: Term) -> Formula {
    base(Kind::Sim, vec![x, y])
}

pub fn plus(x: Term, y: Term, z: Term) -> Formula {
    base(Kind::Plus, vec![x, y, z])
}

pub fn add(x: Term, y: Term, z: Term, w: Term) -> Formula {
    conj(add_conjuncts(x, y, z, w))
}

pub fn tab(x: Term) -> Formula {
    base(Kind::Tab, vec![x])
}

pub fn tab_tilde(x: Term) -> Formula {
    base(Kind::TabTilde, vec![x])
}

pub fn sim_tilde(x: Term, y: Term) -> Formula {
    base(Kind::SimTilde, vec![x, y])
}

pub fn tim(x: Term, y: Term, z: Term, w: Term, wt: Term) -> Formula {
    base(Kind::Tim, vec![x, y, z, w, wt])
}

pub fn mul(x: Term, y: Term, z: Term, w: Term, wt: Term) -> Formula {
    conj(mul_conjuncts(x, y, z, w, wt, MulSimilarity::Table))
}

/// A conjunction of primitive conjuncts over one language, with its numeric
/// and table variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PCArithFormula {
    conjuncts: Vec<Conjunct>,
    numeric_vars: Vec<Variable>,
    table_vars: Vec<Variable>,
    language: usize,
}

impl PCArithFormula {
    /// Variables are read off the arguments by their kind tags.
    pub fn from_conjuncts(conjuncts: Vec<Conjunct>, language: usize) -> Self {
        let mut numeric_vars = Vec::new();
        let mut table_vars = Vec::new();
        for c in &conjuncts {
            for a in &c.args {
                let mut vs = Vec::new();
                a.collect_vars(&mut vs);
                for v in vs {
                    let list = if v.kind() == VarKind::Table {
                        &mut table_vars
                    } else {
                        &mut numeric_vars
                    };
                    if !list.contains(&v) {
                        list.push(v);
                    }
                }
            }
        }
        PCArithFormula {
            conjuncts,
            numeric_vars,
            table_vars,
            language,
        }
    }

    pub fn conjuncts(&self) -> &[Conjunct] {
        &self.conjuncts
    }

    pub fn numeric_vars(&self) -> &[Variable] {
        &self.numeric_vars
    }

    pub fn table_vars(&self) -> &[Variable] {
        &self.table_vars
    }

    /// Numeric variables, then table variables.
    pub fn variables(&self) -> Vec<Variable> {
        self.numeric_vars
            .iter()
            .chain(&self.table_vars)
            .cloned()
            .collect()
    }

    pub fn language(&self) -> usize {
        self.language
    }

    pub fn formula(&self) -> Formula {
        Formula::and_all(self.conjuncts.iter().map(|c| c.to_formula(self.language)))
            .expect("at least one conjunct")
    }

    /// Substitutes for variables; substituted variables are dropped from the lists.
    pub fn apply(&self, sigma: &Substitution) -> PCArithFormula {
        let keep = |vs: &[Variable]| -> Vec<Variable> {
            vs.iter()
                .filter(|v| sigma.get(&(*v).clone().into()).is_none())
                .cloned()
                .collect()
        };
        PCArithFormula {
            conjuncts: self
                .conjuncts
                .iter()
                .map(|c| c.map_args(|t| sigma.apply_term(t)))
                .collect(),
            numeric_vars: keep(&self.numeric_vars),
            table_vars: keep(&self.table_vars),
            language: self.language,
        }
    }

    pub fn is_ground(&self) -> bool {
        self.conjuncts
            .iter()
            .all(|c| c.args.iter().all(Term::is_solution_eligible))
    }
}

impl fmt::Display for PCArithFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.formula())
    }
}

/// `Num` for each argument of each atom, followed by `Add` or `Mul` with fresh
/// table variables `?w1, ?w2, ...`, atoms left to right.
pub fn associate(psi: &DiophantineFormula) -> PCArithFormula {
    associate_with(psi, MulSimilarity::Table)
}

pub fn associate_with(psi: &DiophantineFormula, sim: MulSimilarity) -> PCArithFormula {
    let taken: Vec<Variable> = psi.variables();
    let mut counter = 0usize;
    let mut fresh = || loop {
        counter += 1;
        let v = Variable::with_kind(format!("w{counter}"), VarKind::Table);
        if !taken.contains(&v) {
            return Term::Var(v);
        }
    };
    let mut conjuncts = Vec::new();
    for atom in psi.atoms() {
        let [a, b, c] = atom.args.clone().map(|arg| arg.to_term(0));
        for t in [&a, &b, &c] {
            conjuncts.push(Conjunct::new(Kind::Num, vec![t.clone()]));
        }
        match atom.op {
            Op::Add => conjuncts.extend(add_conjuncts(a, b, c, fresh())),
            Op::Mul => {
                let (w, wt) = (fresh(), fresh());
                conjuncts.extend(mul_conjuncts(a, b, c, w, wt, sim));
            }
        }
    }
    PCArithFormula::from_conjuncts(conjuncts, 0)
}

/// Replaces the numeric variable `x` by the numeral `S^m` of the formula's base constant.
pub fn instantiate_numeral(
    phi: &PCArithFormula,
    x: &Variable,
    m: u64,
) -> Result<PCArithFormula, ArithError> {
    if !phi.numeric_vars.contains(x) {
        return Err(ArithError::NotNumeric(x.name().to_string()));
    }
    let numeral = Term::numeral(Term::special(SpecialBase::Zero, phi.language), m);
    Ok(phi.apply(&Substitution::new().bind(x.clone(), numeral)))
}

fn relabel(phi: &PCArithFormula, to: usize, rename: impl Fn(&str) -> String) -> PCArithFormula {
    let from = phi.language;
    let sym = |f: &FunctionSymbol| match f.special_tag() {
        Some(c) if c.language == from => FunctionSymbol::special(SpecialConstant::new(c.base, to)),
        _ => f.clone(),
    };
    let var = |v: &Variable| Variable::with_kind(rename(v.name()), v.kind());
    let leaf = |t: &Term| match t {
        Term::Var(v) => Term::Var(var(v)),
        other => other.clone(),
    };
    PCArithFormula {
        conjuncts: phi
            .conjuncts
            .iter()
            .map(|c| c.map_args(|t| t.map_symbols(&sym, &leaf)))
            .collect(),
        numeric_vars: phi.numeric_vars.iter().map(var).collect(),
        table_vars: phi.table_vars.iter().map(var).collect(),
        language: to,
    }
}

/// The variant in language `i`: `c` becomes `c_i` and `?x` becomes `?x@i`.
pub fn make_variant(phi: &PCArithFormula, i: usize) -> Result<PCArithFormula, ArithError> {
    if phi.language != 0 {
        return Err(ArithError::NotBaseLanguage(phi.language));
    }
    if i == 0 {
        return Err(ArithError::ZeroIndex);
    }
    let suffix = format!("@{i}");
    Ok(relabel(phi, i, |n| format!("{n}{suffix}")))
}

/// Inverse of [`make_variant`].
pub fn erase_variant(phi: &PCArithFormula) -> PCArithFormula {
    let suffix = format!("@{}", phi.language);
    relabel(phi, 0, |n| {
        n.strip_suffix(suffix.as_str()).unwrap_or(n).to_string()
    })
}

/// Renames a term built over language 0 into language `i`, variables included.
pub fn variant_term(t: &Term, i: usize) -> Term {
    let sym = |f: &FunctionSymbol| match f.special_tag() {
        Some(c) if c.language == 0 => FunctionSymbol::special(SpecialConstant::new(c.base, i)),
        _ => f.clone(),
    };
    let leaf = |t: &Term| match t {
        Term::Var(v) => Term::Var(Variable::with_kind(format!("{}@{i}", v.name()), v.kind())),
        other => other.clone(),
    };
    t.map_symbols(&sym, &leaf)
}

/// The conjunction of the variants `1..=n` of a base-language formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assigned {
    variants: Vec<PCArithFormula>,
}

impl Assigned {
    pub fn variants(&self) -> &[PCArithFormula] {
        &self.variants
    }

    pub fn variables(&self) -> Vec<Variable> {
        self.variants
            .iter()
            .flat_map(PCArithFormula::variables)
            .collect()
    }

    pub fn formula(&self) -> Formula {
        Formula::and_all(self.variants.iter().map(PCArithFormula::formula)).expect("n >= 1")
    }
}

pub fn assign_n(phi: &PCArithFormula, n: usize) -> Result<Assigned, ArithError> {
    if n == 0 {
        return Err(ArithError::ZeroIndex);
    }
    let variants = (1..=n)
        .map(|i| make_variant(phi, i))
        .collect::<Result<_, _>>()?;
    Ok(Assigned { variants })
}

/// The existential formula whose size-`n` skeletons are solvable iff the
/// instance of `psi` at `x = m` holds. For `n = 1` the base language is used;
/// otherwise the conjunction of `n` variants with `x@i` replaced by `S^m(z_i)`.
/// With `x = None` nothing is instantiated.
pub fn reduction_f(
    psi: &DiophantineFormula,
    x: Option<&Variable>,
    m: u64,
    n: usize,
) -> Result<ExistentialFormula, ArithError> {
    reduction_f_with(psi, x, m, n, MulSimilarity::Table)
}

pub fn reduction_f_with(
    psi: &DiophantineFormula,
    x: Option<&Variable>,
    m: u64,
    n: usize,
    sim: MulSimilarity,
) -> Result<ExistentialFormula, ArithError> {
    let phi = associate_with(psi, sim);
    let phi = match x {
        Some(x) => instantiate_numeral(&phi, x, m)?,
        None => phi,
    };
    Ok(match n {
        0 => return Err(ArithError::ZeroIndex),
        1 => ExistentialFormula::new(phi.variables(), phi.formula())?,
        _ => {
            let a = assign_n(&phi, n)?;
            ExistentialFormula::new(a.variables(), a.formula())?
        }
    })
}

/// Finds which case of the countermodel construction applies to a failing
/// ground variant instance: the first failing conjunct among `Num`/`Tab`,
/// then `NumTilde`/`TabTilde`, then `Sim`/`SimTilde`, then `Plus`/`Tim`.
pub fn classify_failures(
    instance: &PCArithFormula,
    oracle: &dyn Decider,
) -> Result<Diagnosis, ArithError> {
    if !instance.is_ground() {
        return Err(ArithError::NotGround);
    }
    let l = instance.language;
    let zero = FunctionSymbol::special(SpecialConstant::new(SpecialBase::Zero, l));
    let cases: [&[Kind]; 4] = [
        &[Kind::Num, Kind::Tab],
        &[Kind::NumTilde, Kind::TabTilde],
        &[Kind::Sim, Kind::SimTilde],
        &[Kind::Plus, Kind::Tim],
    ];
    for (case, kinds) in cases.iter().enumerate() {
        for c in instance
            .conjuncts
            .iter()
            .filter(|c| kinds.contains(&c.kind))
        {
            if oracle.is_quasitautology(&c.to_formula(l))? {
                continue;
            }
            return Ok(match case {
                0 => Diagnosis::NumOrTab,
                1 => Diagnosis::TildeNumOrTab,
                2 => Diagnosis::Similarity,
                _ => {
                    let m = c.args[0]
                        .numeral_of(&zero)
                        .ok_or_else(|| ArithError::NotNumeral(c.args[0].to_string()))?;
                    Diagnosis::PlusOrTim { m }
                }
            });
        }
    }
    Err(ArithError::AllValid)
}

/// Reads a formula back as a conjunction of primitive conjuncts over a single
/// language, matching each conjunct against the templates of that language.
pub fn recognize_instance(phi: &Formula) -> Option<PCArithFormula> {
    let mut languages = std::collections::BTreeSet::new();
    for t in phi.terms() {
        let mut syms = std::collections::BTreeSet::new();
        t.collect_symbols(&mut syms);
        languages.extend(
            syms.iter()
                .filter_map(|f| f.special_tag())
                .map(|c| c.language),
        );
    }
    'lang: for l in languages {
        let mut conjuncts = Vec::new();
        for c in phi.conjuncts() {
            match recognize_conjunct(c, l) {
                Some(cj) => conjuncts.push(cj),
                None => continue 'lang,
            }
        }
        return Some(PCArithFormula::from_conjuncts(conjuncts, l));
    }
    None
}

const KINDS: [Kind; 8] = [
    Kind::Num,
    Kind::NumTilde,
    Kind::Sim,
    Kind::Plus,
    Kind::Tab,
    Kind::TabTilde,
    Kind::SimTilde,
    Kind::Tim,
];

fn recognize_conjunct(phi: &Formula, l: usize) -> Option<Conjunct> {
    KINDS.iter().find_map(|&kind| {
        let holes: Vec<Term> = (0..kind.arity())
            .map(|i| Term::var(format!("#{i}")))
            .collect();
        let template = Conjunct::new(kind, holes).to_formula(l);
        let mut binds: Vec<Option<Term>> = vec![None; kind.arity()];
        match_formula(&template, phi, &mut binds).then_some(())?;
        Some(Conjunct::new(
            kind,
            binds.into_iter().collect::<Option<Vec<_>>>()?,
        ))
    })
}

fn match_formula(template: &Formula, phi: &Formula, binds: &mut [Option<Term>]) -> bool {
    match (template, phi) {
        (Formula::Eq(a, b), Formula::Eq(c, d)) => {
            match_term(a, c, binds) && match_term(b, d, binds)
        }
        (Formula::And(a, b), Formula::And(c, d))
        | (Formula::Implies(a, b), Formula::Implies(c, d)) => {
            match_formula(a, c, binds) && match_formula(b, d, binds)
        }
        _ => false,
    }
}

fn match_term(template: &Term, t: &Term, binds: &mut [Option<Term>]) -> bool {
    match template {
        Term::Var(v) => {
            let i: usize = v.name()[1..].parse().expect("template hole");
            match &binds[i] {
                Some(prev) => prev == t,
                None => {
                    binds[i] = Some(t.clone());
                    true
                }
            }
        }
        Term::App(f, xs) => match t {
            Term::App(g, ys) if f == g => xs
                .iter()
                .zip(ys.iter())
                .all(|(x, y)| match_term(x, y, binds)),
            _ => false,
        },
        Term::Unknown(_) => false,
    }
}
