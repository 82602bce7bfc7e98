//! Evaluation of ground formulas in concrete structures.
//!
//! Elements are arbitrary-precision naturals. A structure is a set of rule
//! tables with default cases, so the domain never has to be materialized.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::syntax::{Formula, FunctionSymbol, PredicateSymbol, SpecialBase, SpecialConstant, Term};

mod alpha;

pub use alpha::{construct_alpha, Diagnosis};

pub type Element = BigUint;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("`{0}` is not ground")]
    NotGround(String),
    #[error("formula is not quantifier-free")]
    Quantified,
    #[error("unknown structure `{0}`")]
    UnknownStructure(String),
    #[error("bad alpha binding `{0}`")]
    BadBinding(String),
    #[error("bad diagnosis `{0}`")]
    BadDiagnosis(String),
    #[error("language index must be positive")]
    ZeroLanguage,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Domain {
    Finite(Vec<u64>),
    AllNaturals,
}

/// An interpretation of function and predicate symbols over the naturals.
pub trait Structure: Send + Sync {
    fn name(&self) -> &str;

    fn domain(&self) -> Domain;

    fn apply(&self, f: &FunctionSymbol, args: &[Element]) -> Element;

    fn holds_pred(&self, _p: &PredicateSymbol, _args: &[Element]) -> bool {
        false
    }
}

/// Unknowns are evaluated like constants of the same name; they default to
/// the structure's interpretation of an unlisted constant.
pub fn eval_term(m: &dyn Structure, t: &Term) -> Result<Element, ModelError> {
    match t {
        Term::Var(_) => Err(ModelError::NotGround(t.to_string())),
        Term::Unknown(u) => Ok(m.apply(&FunctionSymbol::new(u.to_string(), 0), &[])),
        Term::App(f, args) => {
            let vals = args
                .iter()
                .map(|a| eval_term(m, a))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(m.apply(f, &vals))
        }
    }
}

pub fn holds(m: &dyn Structure, phi: &Formula) -> Result<bool, ModelError> {
    Ok(match phi {
        Formula::Eq(a, b) => eval_term(m, a)? == eval_term(m, b)?,
        Formula::Pred(p, args) => {
            let vals = args
                .iter()
                .map(|a| eval_term(m, a))
                .collect::<Result<Vec<_>, _>>()?;
            m.holds_pred(p, &vals)
        }
        Formula::Not(a) => !holds(m, a)?,
        Formula::And(a, b) => holds(m, a)? && holds(m, b)?,
        Formula::Or(a, b) => holds(m, a)? || holds(m, b)?,
        Formula::Implies(a, b) => !holds(m, a)? || holds(m, b)?,
        Formula::Exists(..) | Formula::Forall(..) => return Err(ModelError::Quantified),
    })
}

/// `J(j,k) = (j+k)(j+k+1)+k+1`.
pub fn pair_j(j: &BigUint, k: &BigUint) -> BigUint {
    let s = j + k;
    &s * (&s + 1u32) + k + 1u32
}

pub fn j(j: u64, k: u64) -> BigUint {
    pair_j(&BigUint::from(j), &BigUint::from(k))
}

/// Partial inverse of [`pair_j`]; `None` off its range.
pub fn unpair(n: &BigUint) -> Option<(BigUint, BigUint)> {
    if n.is_zero() {
        return None;
    }
    let m = n - 1u32;
    // Largest s with s(s+1) <= m.
    let mut s = ((&m * 4u32 + 1u32).sqrt() - 1u32) / 2u32;
    while &s * (&s + 1u32) > m {
        s -= 1u32;
    }
    while (&s + 1u32) * (&s + 2u32) <= m {
        s += 1u32;
    }
    let k = &m - &s * (&s + 1u32);
    if k > s {
        return None;
    }
    let j = &s - &k;
    Some((j, k))
}

/// The component index `j` if `n = J(j, i)`.
fn tag(n: &BigUint) -> Option<(u64, BigUint)> {
    let (j, i) = unpair(n)?;
    Some((j.to_u64()?, i))
}

/// Domain `{0,1}`: the base zero is 0, `s` is the identity, everything else is 1.
#[derive(Clone, Debug)]
pub struct TwoPoint {
    zero: FunctionSymbol,
}

impl TwoPoint {
    pub fn new(zero: FunctionSymbol) -> Self {
        TwoPoint { zero }
    }
}

pub fn two_point_structure() -> TwoPoint {
    TwoPoint::new(FunctionSymbol::special(SpecialConstant::new(
        SpecialBase::Zero,
        0,
    )))
}

impl Structure for TwoPoint {
    fn name(&self) -> &str {
        "two-point"
    }

    fn domain(&self) -> Domain {
        Domain::Finite(vec![0, 1])
    }

    fn apply(&self, f: &FunctionSymbol, args: &[Element]) -> Element {
        if *f == self.zero {
            BigUint::zero()
        } else if f.is_succ() {
            args[0].clone()
        } else {
            BigUint::one()
        }
    }
}

/// Domain `{0,2,3,4,5}`: the first and second table constants are fixed points
/// of `s`, their pair is 5, and pairing 5 with the third constant gives it back.
#[derive(Clone, Debug)]
pub struct TableStructure {
    x: FunctionSymbol,
    y: FunctionSymbol,
    z: FunctionSymbol,
}

impl TableStructure {
    pub fn new(x: FunctionSymbol, y: FunctionSymbol, z: FunctionSymbol) -> Self {
        TableStructure { x, y, z }
    }

    fn y_value(&self) -> u32 {
        if self.x == self.y {
            2
        } else {
            3
        }
    }
}

fn special(base: SpecialBase) -> FunctionSymbol {
    FunctionSymbol::special(SpecialConstant::new(base, 0))
}

/// The countermodel for tilde tables: `zh`, `zt`, `kt` denote 2, 3, 4.
pub fn table_structure() -> TableStructure {
    TableStructure::new(
        special(SpecialBase::ZeroHat),
        special(SpecialBase::ZeroTilde),
        special(SpecialBase::KTilde),
    )
}

/// The same construction for plain tables over `z`, `z`, `k`.
pub fn plain_table_structure() -> TableStructure {
    TableStructure::new(
        special(SpecialBase::Zero),
        special(SpecialBase::Zero),
        special(SpecialBase::K),
    )
}

impl Structure for TableStructure {
    fn name(&self) -> &str {
        "table"
    }

    fn domain(&self) -> Domain {
        Domain::Finite(vec![0, 2, 3, 4, 5])
    }

    fn apply(&self, f: &FunctionSymbol, args: &[Element]) -> Element {
        let y = self.y_value();
        let v = if *f == self.x {
            2
        } else if *f == self.y {
            y
        } else if *f == self.z {
            4
        } else if f.is_succ() {
            args[0].to_u32().filter(|d| matches!(d, 2 | 3)).unwrap_or(0)
        } else if f.is_pair() {
            match (args[0].to_u32(), args[1].to_u32()) {
                (Some(2), Some(b)) if b == y => 5,
                (Some(5), Some(4)) => 4,
                _ => 0,
            }
        } else {
            0
        };
        BigUint::from(v)
    }
}

/// Interpretation of the special constants; unlisted constants denote 0.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AlphaAssignment {
    values: BTreeMap<SpecialConstant, BigUint>,
}

impl AlphaAssignment {
    pub fn new() -> Self {
        AlphaAssignment::default()
    }

    pub fn set(&mut self, c: SpecialConstant, v: BigUint) {
        if v.is_zero() {
            self.values.remove(&c);
        } else {
            self.values.insert(c, v);
        }
    }

    pub fn get(&self, c: &SpecialConstant) -> BigUint {
        self.values.get(c).cloned().unwrap_or_default()
    }

    /// Non-zero entries in constant order.
    pub fn iter(&self) -> impl Iterator<Item = (&SpecialConstant, &BigUint)> {
        self.values.iter()
    }

    /// Parses `name=VALUE` where `VALUE` is a natural or a nested `J(a,b)`.
    pub fn parse_binding(text: &str) -> Result<(SpecialConstant, BigUint), ModelError> {
        let bad = || ModelError::BadBinding(text.to_string());
        let (name, value) = text.split_once('=').ok_or_else(bad)?;
        let c = SpecialConstant::from_name(name.trim()).ok_or_else(bad)?;
        let v = parse_value(value.trim()).ok_or_else(bad)?;
        Ok((c, v))
    }
}

fn parse_value(text: &str) -> Option<BigUint> {
    fn go(s: &[u8], pos: &mut usize) -> Option<BigUint> {
        if s.get(*pos) == Some(&b'J') {
            *pos += 1;
            expect(s, pos, b'(')?;
            let a = go(s, pos)?;
            expect(s, pos, b',')?;
            let b = go(s, pos)?;
            expect(s, pos, b')')?;
            return Some(pair_j(&a, &b));
        }
        let start = *pos;
        while s.get(*pos).is_some_and(u8::is_ascii_digit) {
            *pos += 1;
        }
        if start == *pos {
            return None;
        }
        std::str::from_utf8(&s[start..*pos]).ok()?.parse().ok()
    }
    fn expect(s: &[u8], pos: &mut usize, c: u8) -> Option<()> {
        (s.get(*pos) == Some(&c)).then(|| *pos += 1)
    }
    let cleaned: Vec<u8> = text.bytes().filter(|b| !b.is_ascii_whitespace()).collect();
    let mut pos = 0;
    let v = go(&cleaned, &mut pos)?;
    (pos == cleaned.len()).then_some(v)
}

/// Renders `n` as `J(j,i)` when it lies in one of the six tagged blocks.
pub fn show_element(n: &BigUint) -> String {
    match tag(n) {
        Some((j, i)) if j <= 5 => format!("J({j},{i})"),
        _ => n.to_string(),
    }
}

/// The family of structures over all naturals parameterized by `alpha`.
#[derive(Clone, Debug)]
pub struct MAlpha {
    alpha: AlphaAssignment,
}

pub fn m_alpha(alpha: AlphaAssignment) -> MAlpha {
    MAlpha { alpha }
}

impl MAlpha {
    pub fn alpha(&self) -> &AlphaAssignment {
        &self.alpha
    }
}

impl Structure for MAlpha {
    fn name(&self) -> &str {
        "m-alpha"
    }

    fn domain(&self) -> Domain {
        Domain::AllNaturals
    }

    fn apply(&self, f: &FunctionSymbol, args: &[Element]) -> Element {
        if let Some(c) = f.special_tag() {
            return self.alpha.get(&c);
        }
        if f.is_succ() {
            return match tag(&args[0]) {
                Some((0, i)) => pair_j(&BigUint::zero(), &(i + 1u32)),
                Some((1..=3, _)) => args[0].clone(),
                _ => BigUint::zero(),
            };
        }
        if f.is_pair() {
            return match (tag(&args[0]), tag(&args[1])) {
                (Some((0, i)), Some((0, k))) => pair_j(&BigUint::zero(), &pair_j(&i, &k)),
                (Some((1, i)), Some((1, k))) if i == k => pair_j(&BigUint::from(5u32), &i),
                (Some((2, i)), Some((3, k))) if i == k => pair_j(&BigUint::from(5u32), &i),
                (Some((5, i)), Some((4, k))) if i == k => pair_j(&BigUint::from(4u32), &i),
                _ => BigUint::zero(),
            };
        }
        BigUint::zero()
    }
}

type Factory = Box<dyn Fn(&AlphaAssignment) -> Box<dyn Structure> + Send + Sync>;

/// Structures selectable by name; each factory receives the alpha bindings.
pub struct StructureRegistry {
    entries: Vec<(&'static str, Factory)>,
}

impl StructureRegistry {
    pub fn empty() -> Self {
        StructureRegistry {
            entries: Vec::new(),
        }
    }

    pub fn register(&mut self, name: &'static str, factory: Factory) {
        self.entries.retain(|(n, _)| *n != name);
        self.entries.push((name, factory));
    }

    pub fn build(
        &self,
        name: &str,
        alpha: &AlphaAssignment,
    ) -> Result<Box<dyn Structure>, ModelError> {
        self.entries
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, f)| f(alpha))
            .ok_or_else(|| ModelError::UnknownStructure(name.to_string()))
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|(n, _)| *n).collect()
    }
}

impl Default for StructureRegistry {
    fn default() -> Self {
        let mut r = StructureRegistry::empty();
        r.register("two-point", Box::new(|_| Box::new(two_point_structure())));
        r.register("table", Box::new(|_| Box::new(table_structure())));
        r.register(
            "plain-table",
            Box::new(|_| Box::new(plain_table_structure())),
        );
        r.register("m-alpha", Box::new(|a| Box::new(m_alpha(a.clone()))));
        r
    }
}

impl fmt::Display for AlphaAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .values
            .iter()
            .map(|(c, v)| format!("{c}={}", show_element(v)))
            .collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for AlphaAssignment {
    type Err = ModelError;

    /// Comma-separated bindings; `J(..)` commas are handled by nesting depth.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut alpha = AlphaAssignment::new();
        let mut depth = 0i32;
        let mut start = 0;
        let bytes = s.as_bytes();
        let mut pieces = Vec::new();
        for (i, &b) in bytes.iter().enumerate() {
            match b {
                b'(' => depth += 1,
                b')' => depth -= 1,
                b',' if depth == 0 => {
                    pieces.push(&s[start..i]);
                    start = i + 1;
                }
                _ => {}
            }
        }
        pieces.push(&s[start..]);
        for p in pieces.into_iter().filter(|p| !p.trim().is_empty()) {
            let (c, v) = AlphaAssignment::parse_binding(p)?;
            alpha.set(c, v);
        }
        Ok(alpha)
    }
}
