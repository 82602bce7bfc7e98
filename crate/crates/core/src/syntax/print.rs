use std::fmt;

use super::{Formula, Term};

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "?{}", v.name()),
            Term::Unknown(u) => write!(f, "{u}"),
            Term::App(sym, args) => {
                f.write_str(sym.name())?;
                if !args.is_empty() {
                    f.write_str("(")?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            f.write_str(", ")?;
                        }
                        write!(f, "{a}")?;
                    }
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

const QUANT: u8 = 0;
const IMPLIES: u8 = 1;
const OR: u8 = 2;
const AND: u8 = 3;
const NOT: u8 = 4;
const ATOM: u8 = 5;

fn prec(phi: &Formula) -> u8 {
    match phi {
        Formula::Exists(..) | Formula::Forall(..) => QUANT,
        Formula::Implies(..) => IMPLIES,
        Formula::Or(..) => OR,
        Formula::And(..) => AND,
        Formula::Not(..) => NOT,
        Formula::Eq(..) | Formula::Pred(..) => ATOM,
    }
}

fn write_at(f: &mut fmt::Formatter<'_>, phi: &Formula, min: u8) -> fmt::Result {
    if prec(phi) < min {
        write!(f, "(")?;
        write_formula(f, phi)?;
        write!(f, ")")
    } else {
        write_formula(f, phi)
    }
}

fn write_formula(f: &mut fmt::Formatter<'_>, phi: &Formula) -> fmt::Result {
    match phi {
        Formula::Eq(a, b) => write!(f, "{a} = {b}"),
        Formula::Pred(p, args) => {
            f.write_str(p.name())?;
            if !args.is_empty() {
                f.write_str("(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")?;
            }
            Ok(())
        }
        Formula::Not(a) => {
            f.write_str("!")?;
            write_at(f, a, NOT)
        }
        Formula::And(a, b) => {
            write_at(f, a, AND)?;
            f.write_str(" & ")?;
            write_at(f, b, NOT)
        }
        Formula::Or(a, b) => {
            write_at(f, a, OR)?;
            f.write_str(" | ")?;
            write_at(f, b, AND)
        }
        Formula::Implies(a, b) => {
            write_at(f, a, OR)?;
            f.write_str(" -> ")?;
            write_at(f, b, IMPLIES)
        }
        Formula::Exists(v, body) => {
            write!(f, "exists ?{}. ", v.name())?;
            write_formula(f, body)
        }
        Formula::Forall(v, body) => {
            write!(f, "forall ?{}. ", v.name())?;
            write_formula(f, body)
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(f, self)
    }
}
