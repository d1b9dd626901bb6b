//! Named-binder term syntax:
//!
//! ```text
//! ax x:A | axint x:A | lam x. t | app t u | unit | letu s t
//! pair t u | lett[x,y] s t | bang t | letb[x] s t | sw n
//! ```
//!
//! where every argument is `unit` or parenthesized.

use crate::error::{Error, Result};
use crate::names::Name;
use crate::text::{arg, Dialect, Parser, RawFormula, Tok};

use super::{ne_of_term, nf_of_term, LFormula, LNe, LNf, Term};

pub(crate) fn raw_of(f: &LFormula) -> RawFormula {
    match f {
        LFormula::Atom(a) => RawFormula::Atom(a.to_string()),
        LFormula::Unit => RawFormula::Unit,
        LFormula::Tensor(a, b) => RawFormula::Tensor(Box::new(raw_of(a)), Box::new(raw_of(b))),
        LFormula::Lolli(a, b) => RawFormula::Lolli(Box::new(raw_of(a)), Box::new(raw_of(b))),
        LFormula::Bang(a) => RawFormula::Bang(Box::new(raw_of(a))),
    }
}

fn of_raw(r: &RawFormula) -> LFormula {
    match r {
        RawFormula::Atom(a) => LFormula::atom(a),
        RawFormula::Unit => LFormula::Unit,
        RawFormula::Tensor(a, b) => LFormula::tensor(of_raw(a), of_raw(b)),
        RawFormula::Lolli(a, b) => LFormula::lolli(of_raw(a), of_raw(b)),
        RawFormula::Bang(a) => LFormula::bang(of_raw(a)),
        RawFormula::Over(..) | RawFormula::Under(..) => {
            unreachable!("the linear dialects never produce ordered implications")
        }
    }
}

pub(crate) fn parse_formula_in(src: &str, d: Dialect) -> Result<LFormula> {
    let mut p = Parser::new(src)?;
    let f = p.formula(d)?;
    p.expect_eof()?;
    Ok(of_raw(&f))
}

pub fn parse_formula(src: &str) -> Result<LFormula> {
    parse_formula_in(src, Dialect::Exponential)
}

pub fn print_formula(f: &LFormula) -> String {
    raw_of(f).print()
}

enum Tm {
    Ax(Name, LFormula),
    AxInt(Name, LFormula),
    Lam(Name, Arg),
    App(Arg, Arg),
    Unit,
    LetU(Arg, Arg),
    Pair(Arg, Arg),
    LetT(Name, Name, Arg, Arg),
    Bang(Arg),
    LetB(Name, Arg, Arg),
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

fn name(p: &mut Parser) -> Result<Name> {
    Ok(Name::new(&p.expect_ident("a hypothesis name")?))
}

fn term(p: &mut Parser, d: Dialect) -> Result<Located> {
    let t = p.peek().clone();
    let head = match &t.tok {
        Tok::Ident(h) => h.clone(),
        _ => return p.error("a term"),
    };
    p.bump();
    let leaf = |p: &mut Parser| -> Result<(Name, LFormula)> {
        let x = name(p)?;
        p.expect_sym(":")?;
        Ok((x, of_raw(&p.primary_formula(d)?)))
    };
    let bang_only = || -> Result<()> {
        if d == Dialect::Exponential {
            Ok(())
        } else {
            Err(Error::Parse {
                line: t.line,
                col: t.col,
                expected: "a term constructor without `!`".into(),
            })
        }
    };
    let tm = match head.as_str() {
        "ax" => {
            let (x, f) = leaf(p)?;
            Tm::Ax(x, f)
        }
        "axint" => {
            bang_only()?;
            let (x, f) = leaf(p)?;
            Tm::AxInt(x, f)
        }
        "lam" => {
            let x = name(p)?;
            p.expect_sym(".")?;
            Tm::Lam(x, targ(p, d)?)
        }
        "unit" => Tm::Unit,
        "app" => Tm::App(targ(p, d)?, targ(p, d)?),
        "letu" => Tm::LetU(targ(p, d)?, targ(p, d)?),
        "pair" => Tm::Pair(targ(p, d)?, targ(p, d)?),
        "lett" => {
            p.expect_sym("[")?;
            let x = name(p)?;
            p.expect_sym(",")?;
            let y = name(p)?;
            p.expect_sym("]")?;
            Tm::LetT(x, y, targ(p, d)?, targ(p, d)?)
        }
        "bang" => {
            bang_only()?;
            Tm::Bang(targ(p, d)?)
        }
        "letb" => {
            bang_only()?;
            p.expect_sym("[")?;
            let x = name(p)?;
            p.expect_sym("]")?;
            Tm::LetB(x, targ(p, d)?, targ(p, d)?)
        }
        "sw" => Tm::Sw(targ(p, d)?),
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

fn targ(p: &mut Parser, d: Dialect) -> Result<Arg> {
    if matches!(&p.peek().tok, Tok::Ident(h) if h == "unit") {
        return Ok(Box::new(term(p, d)?));
    }
    p.expect_sym("(")?;
    let t = term(p, d)?;
    p.expect_sym(")")?;
    Ok(Box::new(t))
}

fn to_term(l: &Located) -> Result<Term> {
    Ok(match &l.tm {
        Tm::Ax(x, f) => Term::Ax(x.clone(), f.clone()),
        Tm::AxInt(x, f) => Term::AxInt(x.clone(), f.clone()),
        Tm::Lam(x, b) => Term::lam(x, to_term(b)?),
        Tm::App(a, b) => Term::app(to_term(a)?, to_term(b)?),
        Tm::Unit => Term::Unit,
        Tm::LetU(a, b) => Term::letu(to_term(a)?, to_term(b)?),
        Tm::Pair(a, b) => Term::pair(to_term(a)?, to_term(b)?),
        Tm::LetT(x, y, a, b) => Term::lett(x, y, to_term(a)?, to_term(b)?),
        Tm::Bang(b) => Term::bang(to_term(b)?),
        Tm::LetB(x, a, b) => Term::letb(x, to_term(a)?, to_term(b)?),
        Tm::Sw(_) => return l.error("a derivation constructor (`sw` is for normal forms)"),
    })
}

/// Normal-form reading: `sw` is mandatory around neutrals.
fn to_nf_term(l: &Located, neutral: bool) -> Result<Term> {
    let nf = |a: &Located| to_nf_term(a, false);
    let ne = |a: &Located| to_nf_term(a, true);
    let is_neutral = matches!(l.tm, Tm::Ax(..) | Tm::AxInt(..) | Tm::App(..));
    if neutral != is_neutral {
        return l.error(if neutral {
            "a neutral (`ax`, `axint` or `app`)"
        } else {
            "a normal form (neutrals need `sw`)"
        });
    }
    Ok(match &l.tm {
        Tm::Ax(x, f) => Term::Ax(x.clone(), f.clone()),
        Tm::AxInt(x, f) => Term::AxInt(x.clone(), f.clone()),
        Tm::App(a, b) => Term::app(ne(a)?, nf(b)?),
        Tm::Lam(x, b) => Term::lam(x, nf(b)?),
        Tm::Unit => Term::Unit,
        Tm::LetU(a, b) => Term::letu(ne(a)?, nf(b)?),
        Tm::Pair(a, b) => Term::pair(nf(a)?, nf(b)?),
        Tm::LetT(x, y, a, b) => Term::lett(x, y, ne(a)?, nf(b)?),
        Tm::Bang(b) => Term::bang(nf(b)?),
        Tm::LetB(x, a, b) => Term::letb(x, ne(a)?, nf(b)?),
        // Transparent in the term reading; `nf_of_term` puts it back.
        Tm::Sw(n) => return ne(n),
    })
}

fn parse_located(src: &str, d: Dialect) -> Result<Located> {
    let mut p = Parser::new(src)?;
    let t = term(&mut p, d)?;
    p.expect_eof()?;
    Ok(t)
}

pub(crate) fn parse_term_in(src: &str, d: Dialect) -> Result<Term> {
    to_term(&parse_located(src, d)?)
}

pub(crate) fn parse_nf_in(src: &str, d: Dialect) -> Result<LNf> {
    let l = parse_located(src, d)?;
    let t = to_nf_term(&l, false)?;
    Ok(nf_of_term(&t).expect("checked shape"))
}

pub(crate) fn parse_ne_in(src: &str, d: Dialect) -> Result<LNe> {
    let l = parse_located(src, d)?;
    let t = to_nf_term(&l, true)?;
    Ok(ne_of_term(&t).expect("checked shape"))
}

pub fn parse_term(src: &str) -> Result<Term> {
    parse_term_in(src, Dialect::Exponential)
}

pub fn parse_nf(src: &str) -> Result<LNf> {
    parse_nf_in(src, Dialect::Exponential)
}

pub fn parse_ne(src: &str) -> Result<LNe> {
    parse_ne_in(src, Dialect::Exponential)
}

fn leaf(kw: &str, x: &Name, f: &LFormula) -> String {
    format!("{} {}:{}", kw, x, raw_of(f).print_leaf())
}

pub fn print_term(t: &Term) -> String {
    let a = |t: &Term| arg(print_term(t));
    match t {
        Term::Ax(x, f) => leaf("ax", x, f),
        Term::AxInt(x, f) => leaf("axint", x, f),
        Term::Lam(x, b) => format!("lam {}. {}", x, a(b)),
        Term::App(f, u) => format!("app {} {}", a(f), a(u)),
        Term::Unit => "unit".into(),
        Term::LetU(s, c) => format!("letu {} {}", a(s), a(c)),
        Term::Pair(l, r) => format!("pair {} {}", a(l), a(r)),
        Term::LetT(x, y, s, c) => format!("lett[{},{}] {} {}", x, y, a(s), a(c)),
        Term::Bang(b) => format!("bang {}", a(b)),
        Term::LetB(x, s, c) => format!("letb[{}] {} {}", x, a(s), a(c)),
    }
}

pub fn print_nf(n: &LNf) -> String {
    let a = |m: &LNf| arg(print_nf(m));
    let e = |m: &LNe| arg(print_ne(m));
    match n {
        LNf::Sw(m) => format!("sw {}", e(m)),
        LNf::Lam(x, b) => format!("lam {}. {}", x, a(b)),
        LNf::Unit => "unit".into(),
        LNf::LetU(s, c) => format!("letu {} {}", e(s), a(c)),
        LNf::Pair(l, r) => format!("pair {} {}", a(l), a(r)),
        LNf::LetT(x, y, s, c) => format!("lett[{},{}] {} {}", x, y, e(s), a(c)),
        LNf::Bang(b) => format!("bang {}", a(b)),
        LNf::LetB(x, s, c) => format!("letb[{}] {} {}", x, e(s), a(c)),
    }
}

pub fn print_ne(n: &LNe) -> String {
    match n {
        LNe::Ax(x, f) => leaf("ax", x, f),
        LNe::AxInt(x, f) => leaf("axint", x, f),
        LNe::App(f, u) => format!("app {} {}", arg(print_ne(f)), arg(print_nf(u))),
    }
}
