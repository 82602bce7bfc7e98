use std::collections::HashMap;

use thiserror::Error;

use super::{
    Formula, FunctionSymbol, PredicateSymbol, SpecialConstant, Term, Variable, PAIR, SUCC,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Var(String),
    Unknown(String),
    LParen,
    RParen,
    Comma,
    Eq,
    Not,
    And,
    Or,
    Arrow,
    Dot,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Var(s) => format!("variable `?{s}`"),
            Tok::Unknown(s) => format!("unknown `*{s}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Not => "`!`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '#' | '@' | '\'')
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let err = |line, column, message: String| ParseError {
        line,
        column,
        message,
    };
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '%' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let (start_line, start_col) = (line, col);
        let word = |i: usize| {
            let mut j = i;
            while j < chars.len() && is_ident_char(chars[j]) {
                j += 1;
            }
            (chars[i..j].iter().collect::<String>(), j)
        };
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            '=' => Tok::Eq,
            '!' => Tok::Not,
            '&' => Tok::And,
            '|' => Tok::Or,
            '.' => Tok::Dot,
            '-' => {
                if chars.get(i + 1) != Some(&'>') {
                    return Err(err(line, col, "expected `->`".into()));
                }
                i += 1;
                col += 1;
                Tok::Arrow
            }
            '?' => {
                if !chars.get(i + 1).is_some_and(|&c| is_ident_start(c)) {
                    return Err(err(line, col, "expected variable name after `?`".into()));
                }
                let (name, j) = word(i + 1);
                col += j - i - 1;
                i = j - 1;
                Tok::Var(name)
            }
            '*' => {
                let next = chars.get(i + 1).copied();
                let (name, j) = match next {
                    Some(d) if d.is_ascii_digit() => {
                        let mut j = i + 1;
                        while j < chars.len() && chars[j].is_ascii_digit() {
                            j += 1;
                        }
                        (chars[i + 1..j].iter().collect::<String>(), j)
                    }
                    Some(c) if is_ident_start(c) => word(i + 1),
                    _ => return Err(err(line, col, "expected unknown name after `*`".into())),
                };
                col += j - i - 1;
                i = j - 1;
                Tok::Unknown(name)
            }
            c if is_ident_start(c) => {
                let (name, j) = word(i);
                col += j - i - 1;
                i = j - 1;
                Tok::Ident(name)
            }
            other => return Err(err(line, col, format!("unexpected character `{other}`"))),
        };
        out.push(Spanned {
            tok,
            line: start_line,
            column: start_col,
        });
        i += 1;
        col += 1;
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column: col,
    });
    Ok(out)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum SymKind {
    Function,
    Predicate,
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    symbols: HashMap<String, (SymKind, usize)>,
}

impl Parser {
    fn new(text: &str) -> Result<Self, ParseError> {
        Ok(Parser {
            toks: lex(text)?,
            pos: 0,
            symbols: HashMap::new(),
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_at(&self, at: &Spanned, message: impl Into<String>) -> ParseError {
        ParseError {
            line: at.line,
            column: at.column,
            message: message.into(),
        }
    }

    fn error_here(&self, message: impl Into<String>) -> ParseError {
        self.error_at(&self.toks[self.pos], message)
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error_here(format!(
                "expected {}, found {}",
                tok.describe(),
                self.peek().describe()
            )))
        }
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        if *self.peek() != Tok::Eof {
            return Err(self.error_here(format!("unexpected {}", self.peek().describe())));
        }
        Ok(())
    }

    fn declare(
        &mut self,
        at: &Spanned,
        name: &str,
        kind: SymKind,
        arity: usize,
    ) -> Result<(), ParseError> {
        let reserved = match name {
            SUCC => Some(1),
            PAIR => Some(2),
            _ if SpecialConstant::from_name(name).is_some() => Some(0),
            "exists" | "forall" => {
                return Err(self.error_at(at, format!("`{name}` is a keyword")));
            }
            _ => None,
        };
        if let Some(expected) = reserved {
            if kind == SymKind::Predicate {
                return Err(self.error_at(at, format!("`{name}` is a reserved function symbol")));
            }
            if arity != expected {
                return Err(self.error_at(
                    at,
                    format!("arity mismatch: `{name}` is reserved with arity {expected}, used with {arity}"),
                ));
            }
            return Ok(());
        }
        match self.symbols.get(name) {
            None => {
                self.symbols.insert(name.to_string(), (kind, arity));
                Ok(())
            }
            Some(&(k, a)) if k == kind && a == arity => Ok(()),
            Some(&(k, a)) => {
                let what = |k| {
                    if k == SymKind::Function {
                        "function"
                    } else {
                        "predicate"
                    }
                };
                Err(self.error_at(
                    at,
                    format!(
                        "arity mismatch: `{name}` first used as {} of arity {a}, now as {} of arity {arity}",
                        what(k),
                        what(kind)
                    ),
                ))
            }
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.formula()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.conjunction()?;
        while *self.peek() == Tok::Or {
            self.bump();
            f = Formula::or(f, self.conjunction()?);
        }
        Ok(f)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            f = Formula::and(f, self.unary()?);
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Not => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Ident(kw)
                if (kw == "exists" || kw == "forall") && matches!(self.peek_at(1), Tok::Var(_)) =>
            {
                self.bump();
                let Tok::Var(name) = self.bump().tok else {
                    unreachable!()
                };
                self.expect(Tok::Dot)?;
                let body = self.formula()?;
                let v = Variable::new(name);
                Ok(if kw == "exists" {
                    Formula::exists(v, body)
                } else {
                    Formula::forall(v, body)
                })
            }
            Tok::LParen => {
                // A parenthesis may open either a subformula or nothing else: terms
                // never start with `(`.
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        let start = self.toks[self.pos].clone();
        let (head, args) = self.raw_term()?;
        if *self.peek() == Tok::Eq {
            self.bump();
            let lhs = self.build_term(&start, head, args)?;
            let rhs = self.term()?;
            return Ok(Formula::Eq(lhs, rhs));
        }
        match head {
            Tok::Ident(name) => {
                self.declare(&start, &name, SymKind::Predicate, args.len())?;
                Ok(Formula::Pred(PredicateSymbol::new(name, args.len()), args))
            }
            _ => Err(self.error_here(format!("expected `=`, found {}", self.peek().describe()))),
        }
    }

    /// Reads a term head and its argument list without fixing whether the
    /// head is a function or a predicate symbol.
    fn raw_term(&mut self) -> Result<(Tok, Vec<Term>), ParseError> {
        let head = self.bump();
        match head.tok {
            Tok::Var(_) | Tok::Unknown(_) => Ok((head.tok, Vec::new())),
            Tok::Ident(ref name) if name == "exists" || name == "forall" => {
                Err(self.error_at(&head, format!("`{name}` is a keyword")))
            }
            Tok::Ident(_) => {
                let mut args = Vec::new();
                if *self.peek() == Tok::LParen {
                    self.bump();
                    args.push(self.term()?);
                    while *self.peek() == Tok::Comma {
                        self.bump();
                        args.push(self.term()?);
                    }
                    self.expect(Tok::RParen)?;
                }
                Ok((head.tok, args))
            }
            ref other => Err(self.error_at(
                &head,
                format!("expected a term, found {}", other.describe()),
            )),
        }
    }

    fn build_term(&mut self, at: &Spanned, head: Tok, args: Vec<Term>) -> Result<Term, ParseError> {
        match head {
            Tok::Var(name) => Ok(Term::Var(Variable::new(name))),
            Tok::Unknown(name) => Ok(Term::unknown(name)),
            Tok::Ident(name) => {
                self.declare(at, &name, SymKind::Function, args.len())?;
                Ok(Term::apply(FunctionSymbol::new(name, args.len()), args))
            }
            _ => unreachable!(),
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let start = self.toks[self.pos].clone();
        let (head, args) = self.raw_term()?;
        self.build_term(&start, head, args)
    }
}

/// Parses one formula. Arity is checked against the first use of each symbol.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser::new(text)?;
    let f = p.formula()?;
    p.finish()?;
    Ok(f)
}

pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    let mut p = Parser::new(text)?;
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}
