use crate::syntax::{FunctionSymbol, Term};

/// A semitable `(S^p1(x), S^q1(y)), ..., (S^pr(x), S^qr(y)), z`, stored as
/// its exponent rows. Pairing associates to the right.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Semitable {
    pub rows: Vec<(u64, u64)>,
}

impl Semitable {
    pub fn new(rows: Vec<(u64, u64)>) -> Self {
        Semitable { rows }
    }

    /// The `(m,p)`-semitable: `(S^(p-1)(x), S^(m(p-1))(y)), ..., (x, y), z`.
    pub fn mp(m: u64, p: u64) -> Self {
        Semitable {
            rows: (0..p).rev().map(|j| (j, m * j)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_mp(&self, m: u64, p: u64) -> bool {
        *self == Semitable::mp(m, p)
    }

    pub fn instantiate(&self, x: &Term, y: &Term, z: &Term) -> Term {
        self.rows.iter().rev().fold(z.clone(), |rest, &(p, q)| {
            Term::pair(
                Term::pair(Term::numeral(x.clone(), p), Term::numeral(y.clone(), q)),
                rest,
            )
        })
    }

    /// Reads `t` as an instance over the constants `x`, `y`, `z`.
    pub fn recognize(
        t: &Term,
        x: &FunctionSymbol,
        y: &FunctionSymbol,
        z: &FunctionSymbol,
    ) -> Option<Self> {
        let mut rows = Vec::new();
        let mut cur = t;
        loop {
            match cur {
                Term::App(f, args) if f == z && args.is_empty() => return Some(Semitable { rows }),
                Term::App(f, args) if f.is_pair() => {
                    let Term::App(g, row) = &args[0] else {
                        return None;
                    };
                    if !g.is_pair() {
                        return None;
                    }
                    rows.push((row[0].numeral_of(x)?, row[1].numeral_of(y)?));
                    cur = &args[1];
                }
                _ => return None,
            }
        }
    }
}
