use std::fmt;
use std::str::FromStr;

use crate::syntax::{SpecialBase, Term, VarKind, Variable};

use super::ArithError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Op {
    Add,
    Mul,
}

/// An argument of a Diophantine atom: a numeric variable or a numeral.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Arg {
    Var(Variable),
    Numeral(u64),
}

impl Arg {
    pub fn var(name: &str) -> Arg {
        Arg::Var(Variable::with_kind(name, VarKind::Numeric))
    }

    /// The term over the base constant of `language`.
    pub fn to_term(&self, language: usize) -> Term {
        match self {
            Arg::Var(v) => Term::Var(v.clone()),
            Arg::Numeral(m) => Term::numeral(Term::special(SpecialBase::Zero, language), *m),
        }
    }
}

impl fmt::Display for Arg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Arg::Var(v) => write!(f, "?{}", v.name()),
            Arg::Numeral(m) => write!(f, "{m}"),
        }
    }
}

/// `a + b = c` or `a * b = c`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Atom {
    pub op: Op,
    pub args: [Arg; 3],
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.op {
            Op::Add => '+',
            Op::Mul => '*',
        };
        write!(
            f,
            "{} {op} {} = {}",
            self.args[0], self.args[1], self.args[2]
        )
    }
}

/// A nonempty conjunction of Diophantine atoms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DiophantineFormula {
    atoms: Vec<Atom>,
}

impl DiophantineFormula {
    pub fn new(atoms: Vec<Atom>) -> Result<Self, ArithError> {
        if atoms.is_empty() {
            return Err(ArithError::EmptyDiophantine);
        }
        Ok(DiophantineFormula { atoms })
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    /// Variables in order of first occurrence.
    pub fn variables(&self) -> Vec<Variable> {
        let mut out: Vec<Variable> = Vec::new();
        for a in &self.atoms {
            for arg in &a.args {
                if let Arg::Var(v) = arg {
                    if !out.contains(v) {
                        out.push(v.clone());
                    }
                }
            }
        }
        out
    }

    /// Replaces a variable by a numeral.
    pub fn instantiate(&self, x: &Variable, m: u64) -> DiophantineFormula {
        let atoms = self
            .atoms
            .iter()
            .map(|a| Atom {
                op: a.op,
                args: a.args.clone().map(|arg| match arg {
                    Arg::Var(v) if &v == x => Arg::Numeral(m),
                    other => other,
                }),
            })
            .collect();
        DiophantineFormula { atoms }
    }
}

impl fmt::Display for DiophantineFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.atoms.iter().enumerate() {
            if i > 0 {
                f.write_str(" & ")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

impl FromStr for DiophantineFormula {
    type Err = ArithError;

    /// One atom per line or `&`-separated; `%` starts a comment. Arguments are
    /// `?x`, a decimal `k`, `z`, `s^k(z)` or nested `s(..)`.
    fn from_str(src: &str) -> Result<Self, Self::Err> {
        let mut atoms = Vec::new();
        for (n, line) in src.lines().enumerate() {
            let line = line.split('%').next().unwrap_or("");
            for part in line.split('&').map(str::trim).filter(|p| !p.is_empty()) {
                atoms.push(parse_atom(part).map_err(|message| ArithError::Parse {
                    line: n + 1,
                    message,
                })?);
            }
        }
        DiophantineFormula::new(atoms)
    }
}

fn parse_atom(s: &str) -> Result<Atom, String> {
    let (lhs, rhs) = s
        .split_once('=')
        .ok_or_else(|| format!("expected `=` in `{s}`"))?;
    let (op, (a, b)) = if let Some(p) = lhs.split_once('+') {
        (Op::Add, p)
    } else if let Some(p) = lhs.split_once('*') {
        (Op::Mul, p)
    } else {
        return Err(format!("expected `+` or `*` in `{lhs}`"));
    };
    Ok(Atom {
        op,
        args: [parse_arg(a)?, parse_arg(b)?, parse_arg(rhs)?],
    })
}

fn parse_arg(s: &str) -> Result<Arg, String> {
    let s = s.trim();
    let bad = || format!("bad argument `{s}`");
    if let Some(name) = s.strip_prefix('?') {
        let ok = name
            .chars()
            .next()
            .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        return if ok { Ok(Arg::var(name)) } else { Err(bad()) };
    }
    if let Ok(m) = s.parse::<u64>() {
        return Ok(Arg::Numeral(m));
    }
    if s == "z" {
        return Ok(Arg::Numeral(0));
    }
    if let Some(rest) = s.strip_prefix("s^") {
        let (k, inner) = rest.split_once('(').ok_or_else(bad)?;
        let inner = inner.strip_suffix(')').ok_or_else(bad)?;
        let k: u64 = k.trim().parse().map_err(|_| bad())?;
        return match parse_arg(inner)? {
            Arg::Numeral(m) => Ok(Arg::Numeral(m + k)),
            Arg::Var(_) => Err(bad()),
        };
    }
    if let Some(inner) = s.strip_prefix("s(").and_then(|r| r.strip_suffix(')')) {
        return match parse_arg(inner)? {
            Arg::Numeral(m) => Ok(Arg::Numeral(m + 1)),
            Arg::Var(_) => Err(bad()),
        };
    }
    Err(bad())
}

/// Truth in the standard model of a closed Diophantine formula.
pub fn eval_diophantine(psi: &DiophantineFormula) -> Result<bool, ArithError> {
    let mut all = true;
    for a in &psi.atoms {
        let mut v = [0u128; 3];
        for (slot, arg) in v.iter_mut().zip(&a.args) {
            match arg {
                Arg::Numeral(m) => *slot = u128::from(*m),
                Arg::Var(x) => return Err(ArithError::FreeVariable(x.name().to_string())),
            }
        }
        all &= match a.op {
            Op::Add => v[0] + v[1] == v[2],
            Op::Mul => v[0] * v[1] == v[2],
        };
    }
    Ok(all)
}
