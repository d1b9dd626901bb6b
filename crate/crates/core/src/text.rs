//! Surface syntax: a shared lexer and formula grammar, and the term
//! grammar for ordered derivations and normal forms.
//!
//! Formulas use `*` for tensor, `/` and `\` for the two ordered
//! implications, `-o` for linear implication and `!` for the exponential.
//! Printing is canonical: `p*q`, `q/p`, `p\q`, `a -o b`, `!a`, with the
//! fewest parentheses that parse back to the same tree.

use crate::error::{Error, Result};
use crate::nf::{Ne, Nf};
use crate::syntax::{Derivation, Formula};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Unit,
    Num(usize),
    Sym(&'static str),
    Eof,
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

const SYMBOLS: [&str; 11] = ["-o", "*", "/", "\\", "!", "(", ")", "[", "]", ",", ":"];

pub(crate) fn lex(src: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
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
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let start = i;
        let tok = if c.is_ascii_lowercase() {
            while i < chars.len()
                && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'')
            {
                i += 1;
            }
            Tok::Ident(chars[start..i].iter().collect())
        } else if c.is_ascii_digit() {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            let n = s.parse().map_err(|_| Error::Parse {
                line: l0,
                col: c0,
                expected: "a natural number that fits in a machine word".into(),
            })?;
            Tok::Num(n)
        } else if c == 'I'
            && !chars
                .get(i + 1)
                .is_some_and(|n| n.is_ascii_alphanumeric() || *n == '_')
        {
            i += 1;
            Tok::Unit
        } else if c == '.' {
            i += 1;
            Tok::Sym(".")
        } else {
            let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
            match SYMBOLS.iter().find(|s| rest.starts_with(**s)) {
                Some(s) => {
                    i += s.chars().count();
                    Tok::Sym(s)
                }
                None => {
                    return Err(Error::Parse {
                        line: l0,
                        col: c0,
                        expected: "a token".into(),
                    })
                }
            }
        };
        col += i - start;
        out.push(Token {
            tok,
            line: l0,
            col: c0,
        });
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

/// Which formula connectives are legal.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Dialect {
    Ordered,
    Linear,
    Exponential,
}

/// Calculus-neutral formula tree produced by the parser and consumed by
/// the printer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum RawFormula {
    Atom(String),
    Unit,
    Tensor(Box<RawFormula>, Box<RawFormula>),
    Over(Box<RawFormula>, Box<RawFormula>),
    Under(Box<RawFormula>, Box<RawFormula>),
    Lolli(Box<RawFormula>, Box<RawFormula>),
    Bang(Box<RawFormula>),
}

impl RawFormula {
    fn prec(&self) -> u8 {
        match self {
            RawFormula::Atom(_) | RawFormula::Unit => 5,
            RawFormula::Bang(_) => 4,
            RawFormula::Tensor(..) => 3,
            RawFormula::Over(..) | RawFormula::Under(..) => 2,
            RawFormula::Lolli(..) => 1,
        }
    }

    pub(crate) fn is_primary(&self) -> bool {
        self.prec() == 5
    }

    fn write(&self, min: u8, out: &mut String) {
        let wrap = self.prec() < min;
        if wrap {
            out.push('(');
        }
        match self {
            RawFormula::Atom(a) => out.push_str(a),
            RawFormula::Unit => out.push('I'),
            RawFormula::Bang(x) => {
                out.push('!');
                x.write(4, out);
            }
            RawFormula::Tensor(a, b) => {
                a.write(3, out);
                out.push('*');
                b.write(4, out);
            }
            RawFormula::Over(b, a) => {
                b.write(3, out);
                out.push('/');
                a.write(3, out);
            }
            RawFormula::Under(a, b) => {
                a.write(3, out);
                out.push('\\');
                b.write(3, out);
            }
            RawFormula::Lolli(a, b) => {
                a.write(2, out);
                out.push_str(" -o ");
                b.write(1, out);
            }
        }
        if wrap {
            out.push(')');
        }
    }

    pub(crate) fn print(&self) -> String {
        let mut s = String::new();
        self.write(0, &mut s);
        s
    }

    /// Printed after a `:` annotation, where a banged primary needs no
    /// parentheses.
    pub(crate) fn print_leaf(&self) -> String {
        if self.prec() >= 4 {
            self.print()
        } else {
            format!("({})", self.print())
        }
    }

    /// Printed so that it can follow a keyword: parenthesized unless primary.
    pub(crate) fn print_arg(&self) -> String {
        if self.is_primary() {
            self.print()
        } else {
            format!("({})", self.print())
        }
    }
}

pub(crate) struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    pub(crate) fn new(src: &str) -> Result<Parser> {
        Ok(Parser {
            toks: lex(src)?,
            pos: 0,
        })
    }

    pub(crate) fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    pub(crate) fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub(crate) fn error<T>(&self, expected: impl Into<String>) -> Result<T> {
        let t = self.peek();
        Err(Error::Parse {
            line: t.line,
            col: t.col,
            expected: expected.into(),
        })
    }

    pub(crate) fn at_sym(&self, s: &str) -> bool {
        matches!(&self.peek().tok, Tok::Sym(x) if *x == s)
    }

    pub(crate) fn eat_sym(&mut self, s: &str) -> bool {
        if self.at_sym(s) {
            self.bump();
            true
        } else {
            false
        }
    }

    pub(crate) fn expect_sym(&mut self, s: &str) -> Result<()> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            self.error(format!("`{}`", s))
        }
    }

    pub(crate) fn expect_ident(&mut self, what: &str) -> Result<String> {
        match &self.peek().tok {
            Tok::Ident(s) => {
                let s = s.clone();
                self.bump();
                Ok(s)
            }
            _ => self.error(what),
        }
    }

    pub(crate) fn expect_num(&mut self) -> Result<usize> {
        match self.peek().tok {
            Tok::Num(n) => {
                self.bump();
                Ok(n)
            }
            _ => self.error("a natural number"),
        }
    }

    pub(crate) fn expect_eof(&mut self) -> Result<()> {
        if self.peek().tok == Tok::Eof {
            Ok(())
        } else {
            self.error("end of input")
        }
    }

    pub(crate) fn formula(&mut self, d: Dialect) -> Result<RawFormula> {
        if d == Dialect::Ordered {
            self.ordered_implication()
        } else {
            self.lolli(d)
        }
    }

    fn lolli(&mut self, d: Dialect) -> Result<RawFormula> {
        let lhs = self.tensor(d)?;
        if self.eat_sym("-o") {
            let rhs = self.lolli(d)?;
            Ok(RawFormula::Lolli(Box::new(lhs), Box::new(rhs)))
        } else {
            Ok(lhs)
        }
    }

    fn ordered_implication(&mut self) -> Result<RawFormula> {
        let lhs = self.tensor(Dialect::Ordered)?;
        let out = if self.eat_sym("/") {
            let rhs = self.tensor(Dialect::Ordered)?;
            RawFormula::Over(Box::new(lhs), Box::new(rhs))
        } else if self.eat_sym("\\") {
            let rhs = self.tensor(Dialect::Ordered)?;
            RawFormula::Under(Box::new(lhs), Box::new(rhs))
        } else {
            return Ok(lhs);
        };
        if self.at_sym("/") || self.at_sym("\\") {
            return self.error("parentheses (`/` and `\\` do not associate)");
        }
        Ok(out)
    }

    fn tensor(&mut self, d: Dialect) -> Result<RawFormula> {
        let mut lhs = self.prefix(d)?;
        while self.eat_sym("*") {
            let rhs = self.prefix(d)?;
            lhs = RawFormula::Tensor(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn prefix(&mut self, d: Dialect) -> Result<RawFormula> {
        if d == Dialect::Exponential && self.eat_sym("!") {
            return Ok(RawFormula::Bang(Box::new(self.prefix(d)?)));
        }
        self.primary_formula(d)
    }

    /// An atom, `I`, a parenthesized formula, or (with `!`) a banged primary.
    pub(crate) fn primary_formula(&mut self, d: Dialect) -> Result<RawFormula> {
        match self.peek().tok.clone() {
            Tok::Ident(a) => {
                self.bump();
                Ok(RawFormula::Atom(a))
            }
            Tok::Unit => {
                self.bump();
                Ok(RawFormula::Unit)
            }
            Tok::Sym("(") => {
                self.bump();
                let f = self.formula(d)?;
                self.expect_sym(")")?;
                Ok(f)
            }
            Tok::Sym("!") if d == Dialect::Exponential => self.prefix(d),
            _ => self.error("a formula"),
        }
    }
}

pub(crate) fn raw_of_formula(f: &Formula) -> RawFormula {
    match f {
        Formula::Atom(a) => RawFormula::Atom(a.to_string()),
        Formula::Unit => RawFormula::Unit,
        Formula::Tensor(a, b) => {
            RawFormula::Tensor(Box::new(raw_of_formula(a)), Box::new(raw_of_formula(b)))
        }
        Formula::Over(b, a) => {
            RawFormula::Over(Box::new(raw_of_formula(b)), Box::new(raw_of_formula(a)))
        }
        Formula::Under(a, b) => {
            RawFormula::Under(Box::new(raw_of_formula(a)), Box::new(raw_of_formula(b)))
        }
    }
}

fn formula_of_raw(r: &RawFormula) -> Formula {
    match r {
        RawFormula::Atom(a) => Formula::atom(a),
        RawFormula::Unit => Formula::Unit,
        RawFormula::Tensor(a, b) => Formula::tensor(formula_of_raw(a), formula_of_raw(b)),
        RawFormula::Over(b, a) => Formula::over(formula_of_raw(b), formula_of_raw(a)),
        RawFormula::Under(a, b) => Formula::under(formula_of_raw(a), formula_of_raw(b)),
        RawFormula::Lolli(..) | RawFormula::Bang(_) => {
            unreachable!("the ordered dialect never produces linear connectives")
        }
    }
}

pub fn parse_formula(src: &str) -> Result<Formula> {
    let mut p = Parser::new(src)?;
    let f = p.formula(Dialect::Ordered)?;
    p.expect_eof()?;
    Ok(formula_of_raw(&f))
}

pub fn print_formula(f: &Formula) -> String {
    raw_of_formula(f).print()
}

/// Ordered term syntax shared by derivations and normal forms.
enum Tm {
    Ax(Formula),
    Lamr(Arg),
    Laml(Arg),
    Appr(Arg, Arg),
    Appl(Arg, Arg),
    Unit,
    Letu(usize, Arg, Arg),
    Pair(Arg, Arg),
    Lett(usize, Arg, Arg),
    Sw(Arg),
}

type Arg = Box<Located>;

struct Located {
    tm: Tm,
    line: usize,
    col: usize,
}

impl Located {
    fn error<T>(&self, expected: &str) -> Result<T> {
        Err(Error::Parse {
            line: self.line,
            col: self.col,
            expected: expected.into(),
        })
    }
}

impl Parser {
    fn ordered_term(&mut self) -> Result<Located> {
        let t = self.peek().clone();
        let head = match &t.tok {
            Tok::Ident(h) => h.clone(),
            _ => return self.error("a term"),
        };
        self.bump();
        let tm = match head.as_str() {
            "ax" => Tm::Ax(formula_of_raw(&self.primary_formula(Dialect::Ordered)?)),
            "unit" => Tm::Unit,
            "lamr" => Tm::Lamr(self.ordered_arg()?),
            "laml" => Tm::Laml(self.ordered_arg()?),
            "sw" => Tm::Sw(self.ordered_arg()?),
            "appr" => Tm::Appr(self.ordered_arg()?, self.ordered_arg()?),
            "appl" => Tm::Appl(self.ordered_arg()?, self.ordered_arg()?),
            "pair" => Tm::Pair(self.ordered_arg()?, self.ordered_arg()?),
            "letu" | "lett" => {
                self.expect_sym("[")?;
                let k = self.expect_num()?;
                self.expect_sym("]")?;
                let s = self.ordered_arg()?;
                let c = self.ordered_arg()?;
                if head == "letu" {
                    Tm::Letu(k, s, c)
                } else {
                    Tm::Lett(k, s, c)
                }
            }
            _ => {
                return Err(Error::Parse {
                    line: t.line,
                    col: t.col,
                    expected: "a term constructor".into(),
                })
            }
        };
        Ok(Located {
            tm,
            line: t.line,
            col: t.col,
        })
    }

    fn ordered_arg(&mut self) -> Result<Arg> {
        if matches!(&self.peek().tok, Tok::Ident(h) if h == "unit") {
            return Ok(Box::new(self.ordered_term()?));
        }
        self.expect_sym("(")?;
        let t = self.ordered_term()?;
        self.expect_sym(")")?;
        Ok(Box::new(t))
    }
}

fn to_derivation(l: &Located) -> Result<Derivation> {
    Ok(match &l.tm {
        Tm::Ax(f) => Derivation::Ax(f.clone()),
        Tm::Unit => Derivation::IUnit,
        Tm::Lamr(b) => Derivation::i_over(to_derivation(b)?),
        Tm::Laml(b) => Derivation::i_under(to_derivation(b)?),
        Tm::Appr(f, a) => Derivation::e_over(to_derivation(f)?, to_derivation(a)?),
        Tm::Appl(a, f) => Derivation::e_under(to_derivation(a)?, to_derivation(f)?),
        Tm::Pair(a, b) => Derivation::i_tensor(to_derivation(a)?, to_derivation(b)?),
        Tm::Letu(k, s, c) => Derivation::e_unit(*k, to_derivation(s)?, to_derivation(c)?),
        Tm::Lett(k, s, c) => Derivation::e_tensor(*k, to_derivation(s)?, to_derivation(c)?),
        Tm::Sw(_) => return l.error("a derivation constructor (`sw` is for normal forms)"),
    })
}

fn to_nf(l: &Located) -> Result<Nf> {
    Ok(match &l.tm {
        Tm::Unit => Nf::IUnit,
        Tm::Lamr(b) => Nf::i_over(to_nf(b)?),
        Tm::Laml(b) => Nf::i_under(to_nf(b)?),
        Tm::Pair(a, b) => Nf::i_tensor(to_nf(a)?, to_nf(b)?),
        Tm::Letu(k, s, c) => Nf::e_unit(*k, to_ne(s)?, to_nf(c)?),
        Tm::Lett(k, s, c) => Nf::e_tensor(*k, to_ne(s)?, to_nf(c)?),
        Tm::Sw(n) => Nf::sw(to_ne(n)?),
        Tm::Ax(_) | Tm::Appr(..) | Tm::Appl(..) => {
            return l.error("a normal form (neutrals need `sw`)")
        }
    })
}

fn to_ne(l: &Located) -> Result<Ne> {
    Ok(match &l.tm {
        Tm::Ax(f) => Ne::Ax(f.clone()),
        Tm::Appr(f, a) => Ne::e_over(to_ne(f)?, to_nf(a)?),
        Tm::Appl(a, f) => Ne::e_under(to_nf(a)?, to_ne(f)?),
        _ => return l.error("a neutral (`ax`, `appr` or `appl`)"),
    })
}

fn parse_located(src: &str) -> Result<Located> {
    let mut p = Parser::new(src)?;
    let t = p.ordered_term()?;
    p.expect_eof()?;
    Ok(t)
}

pub fn parse_derivation(src: &str) -> Result<Derivation> {
    to_derivation(&parse_located(src)?)
}

pub fn parse_nf(src: &str) -> Result<Nf> {
    to_nf(&parse_located(src)?)
}

pub fn parse_ne(src: &str) -> Result<Ne> {
    to_ne(&parse_located(src)?)
}

/// Wraps a printed subterm in parentheses unless it is nullary.
pub(crate) fn arg(s: String) -> String {
    if s.contains(' ') {
        format!("({})", s)
    } else {
        s
    }
}

fn ax_text(f: &Formula) -> String {
    format!("ax {}", raw_of_formula(f).print_arg())
}

pub fn print_derivation(d: &Derivation) -> String {
    use Derivation::*;
    let p = |t: &Derivation| arg(print_derivation(t));
    match d {
        Ax(f) => ax_text(f),
        IUnit => "unit".into(),
        IOver(b) => format!("lamr {}", p(b)),
        IUnder(b) => format!("laml {}", p(b)),
        EOver(f, a) => format!("appr {} {}", p(f), p(a)),
        EUnder(a, f) => format!("appl {} {}", p(a), p(f)),
        ITensor(a, b) => format!("pair {} {}", p(a), p(b)),
        EUnit(k, s, c) => format!("letu[{}] {} {}", k, p(s), p(c)),
        ETensor(k, s, c) => format!("lett[{}] {} {}", k, p(s), p(c)),
    }
}

pub fn print_nf(n: &Nf) -> String {
    match n {
        Nf::IUnit => "unit".into(),
        Nf::IOver(b) => format!("lamr {}", arg(print_nf(b))),
        Nf::IUnder(b) => format!("laml {}", arg(print_nf(b))),
        Nf::ITensor(a, b) => format!("pair {} {}", arg(print_nf(a)), arg(print_nf(b))),
        Nf::EUnit(k, s, c) => format!("letu[{}] {} {}", k, arg(print_ne(s)), arg(print_nf(c))),
        Nf::ETensor(k, s, c) => {
            format!("lett[{}] {} {}", k, arg(print_ne(s)), arg(print_nf(c)))
        }
        Nf::Sw(ne) => format!("sw {}", arg(print_ne(ne))),
    }
}

pub fn print_ne(n: &Ne) -> String {
    match n {
        Ne::Ax(f) => ax_text(f),
        Ne::EOver(f, a) => format!("appr {} {}", arg(print_ne(f)), arg(print_nf(a))),
        Ne::EUnder(a, f) => format!("appl {} {}", arg(print_nf(a)), arg(print_ne(f))),
    }
}
