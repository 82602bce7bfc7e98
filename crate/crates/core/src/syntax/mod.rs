//! Terms and formulas of first-order logic with identity.
//!
//! Unknowns (`*1`, `*x`, ...) are designated constants that act as solution
//! slots. They get their own [`Term`] constructor instead of being arity-0
//! applications, so "solution-eligible" and [`Term::size`] can be checked
//! structurally.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

mod parse;
mod print;
mod subst;

pub use parse::{parse_formula, parse_term, ParseError};
pub use subst::{Slot, SubstError, Substitution};

/// Name of the successor function symbol.
pub const SUCC: &str = "s";
/// Name of the binary pairing function symbol.
pub const PAIR: &str = "pair";

/// The five special constant families `0`, `0̂`, `0̃`, `k`, `k̃`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SpecialBase {
    Zero,
    ZeroHat,
    ZeroTilde,
    K,
    KTilde,
}

impl SpecialBase {
    pub const ALL: [SpecialBase; 5] = [
        SpecialBase::Zero,
        SpecialBase::ZeroHat,
        SpecialBase::ZeroTilde,
        SpecialBase::K,
        SpecialBase::KTilde,
    ];

    /// Printed stem: `z`, `zh`, `zt`, `k`, `kt`.
    pub fn stem(self) -> &'static str {
        match self {
            SpecialBase::Zero => "z",
            SpecialBase::ZeroHat => "zh",
            SpecialBase::ZeroTilde => "zt",
            SpecialBase::K => "k",
            SpecialBase::KTilde => "kt",
        }
    }

    fn from_stem(stem: &str) -> Option<Self> {
        SpecialBase::ALL.into_iter().find(|b| b.stem() == stem)
    }
}

/// A special constant of language `P` (index 0) or of the variant language `P_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpecialConstant {
    pub language: usize,
    pub base: SpecialBase,
}

impl SpecialConstant {
    pub fn new(base: SpecialBase, language: usize) -> Self {
        SpecialConstant { base, language }
    }

    pub fn name(&self) -> String {
        if self.language == 0 {
            self.base.stem().to_string()
        } else {
            format!("{}_{}", self.base.stem(), self.language)
        }
    }

    /// Recognizes `z`, `zh_3`, `kt_12`, ... Indices are positive without
    /// leading zeros.
    pub fn from_name(name: &str) -> Option<Self> {
        if let Some(base) = SpecialBase::from_stem(name) {
            return Some(SpecialConstant::new(base, 0));
        }
        let (stem, index) = name.rsplit_once('_')?;
        let base = SpecialBase::from_stem(stem)?;
        if index.is_empty() || index.starts_with('0') || !index.bytes().all(|b| b.is_ascii_digit())
        {
            return None;
        }
        Some(SpecialConstant::new(base, index.parse().ok()?))
    }
}

impl fmt::Display for SpecialConstant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FunctionSymbol {
    name: Arc<str>,
    arity: usize,
    special: Option<SpecialConstant>,
}

impl FunctionSymbol {
    /// The special tag is derived from the name, so two symbols with the same
    /// name and arity are always equal.
    pub fn new(name: impl AsRef<str>, arity: usize) -> Self {
        let name = name.as_ref();
        let special = if arity == 0 {
            SpecialConstant::from_name(name)
        } else {
            None
        };
        FunctionSymbol {
            name: Arc::from(name),
            arity,
            special,
        }
    }

    pub fn special(c: SpecialConstant) -> Self {
        FunctionSymbol::new(c.name(), 0)
    }

    pub fn succ() -> Self {
        FunctionSymbol::new(SUCC, 1)
    }

    pub fn pair() -> Self {
        FunctionSymbol::new(PAIR, 2)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn special_tag(&self) -> Option<SpecialConstant> {
        self.special
    }

    pub fn is_constant(&self) -> bool {
        self.arity == 0
    }

    pub fn is_succ(&self) -> bool {
        self.arity == 1 && &*self.name == SUCC
    }

    pub fn is_pair(&self) -> bool {
        self.arity == 2 && &*self.name == PAIR
    }
}

impl fmt::Display for FunctionSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.name, self.arity)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PredicateSymbol {
    name: Arc<str>,
    arity: usize,
}

impl PredicateSymbol {
    pub fn new(name: impl AsRef<str>, arity: usize) -> Self {
        PredicateSymbol {
            name: Arc::from(name.as_ref()),
            arity,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }
}

impl fmt::Display for PredicateSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.name, self.arity)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum VarKind {
    Numeric,
    Table,
    #[default]
    Plain,
}

/// A variable. Identity is the name alone; the kind is a tag carried along
/// for the arithmetic encoding and is not part of the printed syntax.
#[derive(Clone, Debug)]
pub struct Variable {
    name: Arc<str>,
    kind: VarKind,
}

impl Variable {
    pub fn new(name: impl AsRef<str>) -> Self {
        Variable::with_kind(name, VarKind::Plain)
    }

    pub fn with_kind(name: impl AsRef<str>, kind: VarKind) -> Self {
        Variable {
            name: Arc::from(name.as_ref()),
            kind,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> VarKind {
        self.kind
    }
}

impl PartialEq for Variable {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
    }
}

impl Eq for Variable {}

impl std::hash::Hash for Variable {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.name.hash(state)
    }
}

impl PartialOrd for Variable {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Variable {
    fn cmp(&self, other: &Self) -> Ordering {
        self.name.cmp(&other.name)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Unknown(Arc<str>);

impl Unknown {
    pub fn new(name: impl AsRef<str>) -> Self {
        Unknown(Arc::from(name.as_ref()))
    }

    /// The `n`-th unknown of the fresh-name counter, printed `*n`.
    pub fn indexed(n: usize) -> Self {
        Unknown::new(n.to_string())
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Unknown {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "*{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(Variable),
    Unknown(Unknown),
    App(FunctionSymbol, Arc<[Term]>),
}

impl Term {
    pub fn var(name: impl AsRef<str>) -> Term {
        Term::Var(Variable::new(name))
    }

    pub fn unknown(name: impl AsRef<str>) -> Term {
        Term::Unknown(Unknown::new(name))
    }

    pub fn constant(name: impl AsRef<str>) -> Term {
        Term::App(FunctionSymbol::new(name, 0), Arc::from(Vec::new()))
    }

    pub fn app(name: impl AsRef<str>, args: Vec<Term>) -> Term {
        let sym = FunctionSymbol::new(name, args.len());
        Term::App(sym, Arc::from(args))
    }

    pub fn apply(sym: FunctionSymbol, args: Vec<Term>) -> Term {
        assert_eq!(sym.arity(), args.len(), "arity mismatch for {sym}");
        Term::App(sym, Arc::from(args))
    }

    pub fn special(base: SpecialBase, language: usize) -> Term {
        Term::apply(
            FunctionSymbol::special(SpecialConstant::new(base, language)),
            vec![],
        )
    }

    pub fn succ(t: Term) -> Term {
        Term::apply(FunctionSymbol::succ(), vec![t])
    }

    pub fn pair(a: Term, b: Term) -> Term {
        Term::apply(FunctionSymbol::pair(), vec![a, b])
    }

    /// `S^m(base)`.
    pub fn numeral(base: Term, m: u64) -> Term {
        (0..m).fold(base, |t, _| Term::succ(t))
    }

    /// Number of application nodes; variables and unknowns count 0.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) | Term::Unknown(_) => 0,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) | Term::Unknown(_) => 0,
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Unknown(_) => true,
            Term::App(_, args) => args.iter().all(Term::is_ground),
        }
    }

    /// No variables and no unknowns.
    pub fn is_solution_eligible(&self) -> bool {
        match self {
            Term::Var(_) | Term::Unknown(_) => false,
            Term::App(_, args) => args.iter().all(Term::is_solution_eligible),
        }
    }

    pub fn symbol(&self) -> Option<&FunctionSymbol> {
        match self {
            Term::App(f, _) => Some(f),
            _ => None,
        }
    }

    pub fn args(&self) -> &[Term] {
        match self {
            Term::App(_, args) => args,
            _ => &[],
        }
    }

    /// Returns `m` when `self` is `S^m(base)` for the arity-0 symbol `base`.
    pub fn numeral_of(&self, base: &FunctionSymbol) -> Option<u64> {
        debug_assert!(base.is_constant());
        let mut t = self;
        let mut m = 0;
        loop {
            match t {
                Term::App(f, args) if f.is_succ() => {
                    m += 1;
                    t = &args[0];
                }
                Term::App(f, _) if f == base => return Some(m),
                _ => return None,
            }
        }
    }

    pub fn contains_unknown(&self) -> bool {
        match self {
            Term::Unknown(_) => true,
            Term::Var(_) => false,
            Term::App(_, args) => args.iter().any(Term::contains_unknown),
        }
    }

    pub(crate) fn collect_unknowns(&self, out: &mut Vec<Unknown>) {
        match self {
            Term::Unknown(u) => {
                if !out.contains(u) {
                    out.push(u.clone())
                }
            }
            Term::Var(_) => {}
            Term::App(_, args) => args.iter().for_each(|a| a.collect_unknowns(out)),
        }
    }

    pub(crate) fn collect_vars(&self, out: &mut Vec<Variable>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone())
                }
            }
            Term::Unknown(_) => {}
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub(crate) fn collect_symbols(&self, out: &mut BTreeSet<FunctionSymbol>) {
        if let Term::App(f, args) = self {
            out.insert(f.clone());
            args.iter().for_each(|a| a.collect_symbols(out));
        }
    }

    /// All subterms, children before parents, without duplicates.
    pub fn subterms(&self) -> Vec<Term> {
        let mut out = Vec::new();
        self.push_subterms(&mut out);
        out
    }

    pub(crate) fn push_subterms(&self, out: &mut Vec<Term>) {
        for a in self.args() {
            a.push_subterms(out);
        }
        if !out.contains(self) {
            out.push(self.clone());
        }
    }

    /// Rewrites every function symbol with `f`, leaving variables and unknowns to `leaf`.
    pub fn map_symbols(
        &self,
        f: &impl Fn(&FunctionSymbol) -> FunctionSymbol,
        leaf: &impl Fn(&Term) -> Term,
    ) -> Term {
        match self {
            Term::App(sym, args) => Term::apply(
                f(sym),
                args.iter().map(|a| a.map_symbols(f, leaf)).collect(),
            ),
            other => leaf(other),
        }
    }

    fn rank(&self) -> u8 {
        match self {
            Term::Var(_) => 0,
            Term::Unknown(_) => 1,
            Term::App(..) => 2,
        }
    }
}

/// Canonical order: size, then symbol name, then arguments left to right.
impl Ord for Term {
    fn cmp(&self, other: &Self) -> Ordering {
        self.size()
            .cmp(&other.size())
            .then_with(|| self.cmp_same_size(other))
    }
}

impl Term {
    fn cmp_same_size(&self, other: &Term) -> Ordering {
        match (self, other) {
            (Term::Var(a), Term::Var(b)) => a.cmp(b),
            (Term::Unknown(a), Term::Unknown(b)) => a.cmp(b),
            (Term::App(f, xs), Term::App(g, ys)) => f.cmp(g).then_with(|| {
                for (x, y) in xs.iter().zip(ys.iter()) {
                    let c = x.cmp(y);
                    if c != Ordering::Equal {
                        return c;
                    }
                }
                Ordering::Equal
            }),
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Eq(Term, Term),
    Pred(PredicateSymbol, Vec<Term>),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Exists(Variable, Box<Formula>),
    Forall(Variable, Box<Formula>),
}

impl Formula {
    pub fn eq(a: Term, b: Term) -> Formula {
        Formula::Eq(a, b)
    }

    pub fn pred(name: impl AsRef<str>, args: Vec<Term>) -> Formula {
        Formula::Pred(PredicateSymbol::new(name, args.len()), args)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn exists(v: Variable, body: Formula) -> Formula {
        Formula::Exists(v, Box::new(body))
    }

    pub fn forall(v: Variable, body: Formula) -> Formula {
        Formula::Forall(v, Box::new(body))
    }

    /// Left-associated conjunction; `None` for an empty iterator.
    pub fn and_all(items: impl IntoIterator<Item = Formula>) -> Option<Formula> {
        items.into_iter().reduce(Formula::and)
    }

    /// Left-associated disjunction; `None` for an empty iterator.
    pub fn or_all(items: impl IntoIterator<Item = Formula>) -> Option<Formula> {
        items.into_iter().reduce(Formula::or)
    }

    pub fn is_atom(&self) -> bool {
        matches!(self, Formula::Eq(..) | Formula::Pred(..))
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::Eq(..) | Formula::Pred(..) => true,
            Formula::Not(a) => a.is_quantifier_free(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.is_quantifier_free() && b.is_quantifier_free()
            }
            Formula::Exists(..) | Formula::Forall(..) => false,
        }
    }

    /// Quantifier-free and without variables (unknowns are allowed).
    pub fn is_ground(&self) -> bool {
        self.is_quantifier_free() && self.terms().all(Term::is_ground)
    }

    pub fn free_variables(&self) -> Vec<Variable> {
        let mut out = Vec::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Variable>, out: &mut Vec<Variable>) {
        match self {
            Formula::Eq(..) | Formula::Pred(..) => {
                let mut vs = Vec::new();
                self.atom_terms()
                    .iter()
                    .for_each(|t| t.collect_vars(&mut vs));
                for v in vs {
                    if !bound.contains(&v) && !out.contains(&v) {
                        out.push(v);
                    }
                }
            }
            Formula::Not(a) => a.collect_free(bound, out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Exists(v, body) | Formula::Forall(v, body) => {
                bound.push(v.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_variables().is_empty()
    }

    /// Unknowns in order of first occurrence.
    pub fn unknowns(&self) -> Vec<Unknown> {
        let mut out = Vec::new();
        for t in self.terms() {
            t.collect_unknowns(&mut out);
        }
        out
    }

    pub fn contains_unknown(&self) -> bool {
        self.terms().any(Term::contains_unknown)
    }

    fn atom_terms(&self) -> Vec<&Term> {
        match self {
            Formula::Eq(a, b) => vec![a, b],
            Formula::Pred(_, args) => args.iter().collect(),
            _ => Vec::new(),
        }
    }

    /// Top-level terms of every atom, left to right.
    pub fn terms(&self) -> impl Iterator<Item = &Term> {
        let mut out = Vec::new();
        self.visit_atoms(&mut |a| out.extend(a.atom_terms()));
        out.into_iter()
    }

    /// Calls `f` on every atom, left to right.
    pub fn visit_atoms<'a>(&'a self, f: &mut impl FnMut(&'a Formula)) {
        match self {
            Formula::Eq(..) | Formula::Pred(..) => f(self),
            Formula::Not(a) | Formula::Exists(_, a) | Formula::Forall(_, a) => a.visit_atoms(f),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.visit_atoms(f);
                b.visit_atoms(f);
            }
        }
    }

    /// Flattens nested top-level conjunctions, left to right.
    pub fn conjuncts(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        fn go<'a>(f: &'a Formula, out: &mut Vec<&'a Formula>) {
            match f {
                Formula::And(a, b) => {
                    go(a, out);
                    go(b, out);
                }
                other => out.push(other),
            }
        }
        go(self, &mut out);
        out
    }

    /// Flattens nested top-level disjunctions, left to right.
    pub fn disjuncts(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        fn go<'a>(f: &'a Formula, out: &mut Vec<&'a Formula>) {
            match f {
                Formula::Or(a, b) => {
                    go(a, out);
                    go(b, out);
                }
                other => out.push(other),
            }
        }
        go(self, &mut out);
        out
    }

    /// Applies `f` to every term of every atom.
    pub fn map_terms(&self, f: &impl Fn(&Term) -> Term) -> Formula {
        match self {
            Formula::Eq(a, b) => Formula::Eq(f(a), f(b)),
            Formula::Pred(p, args) => Formula::Pred(p.clone(), args.iter().map(f).collect()),
            Formula::Not(a) => Formula::not(a.map_terms(f)),
            Formula::And(a, b) => Formula::and(a.map_terms(f), b.map_terms(f)),
            Formula::Or(a, b) => Formula::or(a.map_terms(f), b.map_terms(f)),
            Formula::Implies(a, b) => Formula::implies(a.map_terms(f), b.map_terms(f)),
            Formula::Exists(v, a) => Formula::exists(v.clone(), a.map_terms(f)),
            Formula::Forall(v, a) => Formula::forall(v.clone(), a.map_terms(f)),
        }
    }
}

/// The function and predicate symbols of a formula.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    pub functions: BTreeSet<FunctionSymbol>,
    pub predicates: BTreeSet<PredicateSymbol>,
}

impl Signature {
    pub fn new() -> Self {
        Signature::default()
    }

    pub fn with_function(mut self, f: FunctionSymbol) -> Self {
        self.functions.insert(f);
        self
    }

    pub fn with_constants<'a>(mut self, names: impl IntoIterator<Item = &'a str>) -> Self {
        self.functions
            .extend(names.into_iter().map(|n| FunctionSymbol::new(n, 0)));
        self
    }

    pub fn union(&self, other: &Signature) -> Signature {
        Signature {
            functions: self.functions.union(&other.functions).cloned().collect(),
            predicates: self.predicates.union(&other.predicates).cloned().collect(),
        }
    }

    pub fn has_constant(&self) -> bool {
        self.functions.iter().any(FunctionSymbol::is_constant)
    }
}

/// Applies `sigma` simultaneously to the free slots of `phi`.
pub fn substitute(phi: &Formula, sigma: &Substitution) -> Result<Formula, SubstError> {
    sigma.apply(phi)
}

pub fn signature_of(formula: &Formula) -> Signature {
    let mut sig = Signature::new();
    formula.visit_atoms(&mut |atom| match atom {
        Formula::Eq(a, b) => {
            a.collect_symbols(&mut sig.functions);
            b.collect_symbols(&mut sig.functions);
        }
        Formula::Pred(p, args) => {
            sig.predicates.insert(p.clone());
            args.iter()
                .for_each(|t| t.collect_symbols(&mut sig.functions));
        }
        _ => unreachable!(),
    });
    sig
}
