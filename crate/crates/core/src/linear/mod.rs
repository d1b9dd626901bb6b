//! Named-hypothesis engine behind the commutative calculi: multiplicative
//! linear logic with `-o`, optionally with a second, intuitionistic zone
//! and the `!` modality. [`crate::mill`] and [`crate::dill`] are thin
//! fronts that fix which constructors are legal.
//!
//! Hypotheses are named. Only leaves carry formulas (`ax x:A`,
//! `axint x:A`); sequents are synthesized, with both zones sorted by name.

pub mod gen;
pub mod rewrite;
pub mod sem;
pub mod text;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::names::{canonical_names, Name, Permutation, Renaming};
use crate::syntax::Path;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum LFormula {
    Atom(Arc<str>),
    Unit,
    Tensor(Arc<LFormula>, Arc<LFormula>),
    /// Argument first.
    Lolli(Arc<LFormula>, Arc<LFormula>),
    Bang(Arc<LFormula>),
}

impl LFormula {
    pub fn atom(a: &str) -> LFormula {
        LFormula::Atom(Arc::from(a))
    }

    pub fn tensor(a: LFormula, b: LFormula) -> LFormula {
        LFormula::Tensor(Arc::new(a), Arc::new(b))
    }

    pub fn lolli(a: LFormula, b: LFormula) -> LFormula {
        LFormula::Lolli(Arc::new(a), Arc::new(b))
    }

    pub fn bang(a: LFormula) -> LFormula {
        LFormula::Bang(Arc::new(a))
    }

    pub fn is_non_negative(&self) -> bool {
        !matches!(self, LFormula::Lolli(..))
    }

    pub fn has_bang(&self) -> bool {
        match self {
            LFormula::Atom(_) | LFormula::Unit => false,
            LFormula::Bang(_) => true,
            LFormula::Tensor(a, b) | LFormula::Lolli(a, b) => a.has_bang() || b.has_bang(),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            LFormula::Atom(_) | LFormula::Unit => 1,
            LFormula::Bang(a) => 1 + a.size(),
            LFormula::Tensor(a, b) | LFormula::Lolli(a, b) => 1 + a.size() + b.size(),
        }
    }
}

impl fmt::Display for LFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&text::raw_of(self).print())
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Term {
    Ax(Name, LFormula),
    AxInt(Name, LFormula),
    Lam(Name, Box<Term>),
    /// Function first.
    App(Box<Term>, Box<Term>),
    Unit,
    LetU(Box<Term>, Box<Term>),
    Pair(Box<Term>, Box<Term>),
    LetT(Name, Name, Box<Term>, Box<Term>),
    Bang(Box<Term>),
    LetB(Name, Box<Term>, Box<Term>),
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum LNf {
    Sw(Box<LNe>),
    Lam(Name, Box<LNf>),
    Unit,
    LetU(Box<LNe>, Box<LNf>),
    Pair(Box<LNf>, Box<LNf>),
    LetT(Name, Name, Box<LNe>, Box<LNf>),
    Bang(Box<LNf>),
    LetB(Name, Box<LNe>, Box<LNf>),
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum LNe {
    Ax(Name, LFormula),
    AxInt(Name, LFormula),
    App(Box<LNe>, Box<LNf>),
}

/// `Γ ; Δ |- A`, both zones sorted by name.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LSequent {
    pub int: Vec<(Name, LFormula)>,
    pub lin: Vec<(Name, LFormula)>,
    pub succ: LFormula,
}

fn entries(zone: &[(Name, LFormula)]) -> String {
    zone.iter()
        .map(|(n, f)| format!("{}:{}", n, text::raw_of(f).print_leaf()))
        .collect::<Vec<_>>()
        .join(", ")
}

impl LSequent {
    /// Without the intuitionistic zone, as in the purely linear calculus.
    pub fn linear_string(&self) -> String {
        if self.lin.is_empty() {
            format!("|- {}", self.succ)
        } else {
            format!("{} |- {}", entries(&self.lin), self.succ)
        }
    }

    pub fn names(&self) -> BTreeSet<Name> {
        self.int.iter().chain(&self.lin).map(|(n, _)| n.clone()).collect()
    }
}

impl fmt::Display for LSequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.int.is_empty() {
            write!(f, "{} ", entries(&self.int))?;
        }
        f.write_str("; ")?;
        if !self.lin.is_empty() {
            write!(f, "{} ", entries(&self.lin))?;
        }
        write!(f, "|- {}", self.succ)
    }
}

impl Term {
    pub fn lam(x: &Name, b: Term) -> Term {
        Term::Lam(x.clone(), Box::new(b))
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Box::new(f), Box::new(a))
    }

    pub fn letu(s: Term, c: Term) -> Term {
        Term::LetU(Box::new(s), Box::new(c))
    }

    pub fn pair(a: Term, b: Term) -> Term {
        Term::Pair(Box::new(a), Box::new(b))
    }

    pub fn lett(x: &Name, y: &Name, s: Term, c: Term) -> Term {
        Term::LetT(x.clone(), y.clone(), Box::new(s), Box::new(c))
    }

    pub fn bang(t: Term) -> Term {
        Term::Bang(Box::new(t))
    }

    pub fn letb(x: &Name, s: Term, c: Term) -> Term {
        Term::LetB(x.clone(), Box::new(s), Box::new(c))
    }

    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    pub fn children(&self) -> Vec<&Term> {
        match self {
            Term::Ax(..) | Term::AxInt(..) | Term::Unit => vec![],
            Term::Lam(_, b) | Term::Bang(b) => vec![b],
            Term::App(a, b)
            | Term::LetU(a, b)
            | Term::Pair(a, b)
            | Term::LetT(_, _, a, b)
            | Term::LetB(_, a, b) => vec![a, b],
        }
    }

    fn child_mut(&mut self, i: usize) -> Option<&mut Term> {
        match (self, i) {
            (Term::Lam(_, b) | Term::Bang(b), 0) => Some(b),
            (
                Term::App(a, b)
                | Term::LetU(a, b)
                | Term::Pair(a, b)
                | Term::LetT(_, _, a, b)
                | Term::LetB(_, a, b),
                i,
            ) if i < 2 => Some(if i == 0 { a } else { b }),
            _ => None,
        }
    }

    pub fn subterm(&self, path: &[usize]) -> Option<&Term> {
        match path.split_first() {
            None => Some(self),
            Some((i, rest)) => self.children().get(*i)?.subterm(rest),
        }
    }

    pub fn replace_at(&self, path: &[usize], new: Term) -> Option<Term> {
        let mut out = self.clone();
        let mut cur = &mut out;
        for i in path {
            cur = cur.child_mut(*i)?;
        }
        *cur = new;
        Some(out)
    }

    /// Every name occurring in the term, bound or free.
    pub fn all_names(&self, out: &mut BTreeSet<Name>) {
        match self {
            Term::Ax(x, _) | Term::AxInt(x, _) => {
                out.insert(x.clone());
            }
            Term::Lam(x, _) | Term::LetB(x, _, _) => {
                out.insert(x.clone());
            }
            Term::LetT(x, y, _, _) => {
                out.insert(x.clone());
                out.insert(y.clone());
            }
            _ => {}
        }
        for c in self.children() {
            c.all_names(out);
        }
    }

    /// Does the name occur free (in either zone)?
    pub fn mentions(&self, n: &Name) -> bool {
        match self {
            Term::Ax(x, _) | Term::AxInt(x, _) => x == n,
            Term::Lam(x, b) => x != n && b.mentions(n),
            Term::LetT(x, y, s, c) => s.mentions(n) || (x != n && y != n && c.mentions(n)),
            Term::LetB(x, s, c) => s.mentions(n) || (x != n && c.mentions(n)),
            _ => self.children().iter().any(|c| c.mentions(n)),
        }
    }

    /// Does any bang-specific constructor occur?
    pub fn uses_exponential(&self) -> bool {
        match self {
            Term::AxInt(..) | Term::Bang(_) | Term::LetB(..) => true,
            Term::Ax(_, f) => f.has_bang(),
            _ => self.children().iter().any(|c| c.uses_exponential()),
        }
    }
}

/// Free names with their formulas, per zone, plus the succedent.
struct Info {
    int: BTreeMap<Name, LFormula>,
    lin: BTreeMap<Name, LFormula>,
    ty: LFormula,
}

fn merge(path: &[usize], a: Info, b: Info, ty: LFormula) -> Result<Info> {
    let Info { mut int, mut lin, .. } = a;
    for (n, f) in b.lin {
        if lin.contains_key(&n) {
            return Err(Error::NonLinearUse {
                path: path.to_vec(),
                name: n.to_string(),
            });
        }
        lin.insert(n, f);
    }
    for (n, f) in b.int {
        match int.get(&n) {
            Some(g) if *g != f => {
                return Err(Error::ill_formed(
                    path,
                    format!("`{}` is used at both {} and {}", n, g, f),
                ))
            }
            _ => {
                int.insert(n, f);
            }
        }
    }
    if let Some(n) = int.keys().find(|n| lin.contains_key(*n)) {
        return Err(Error::ill_formed(
            path,
            format!("`{}` is used both linearly and intuitionistically", n),
        ));
    }
    Ok(Info { int, lin, ty })
}

/// Removes a bound linear name from its scope, returning its formula.
fn bind_lin(path: &[usize], info: &mut Info, x: &Name) -> Result<LFormula> {
    if info.int.contains_key(x) {
        return Err(Error::ill_formed(
            path,
            format!("linear binder `{}` is used intuitionistically", x),
        ));
    }
    info.lin.remove(x).ok_or_else(|| Error::UnusedHypothesis {
        path: path.to_vec(),
        name: x.to_string(),
    })
}

fn synth(t: &Term, path: &mut Path) -> Result<Info> {
    let child = |i: usize, c: &Term, path: &mut Path| {
        path.push(i);
        let r = synth(c, path);
        path.pop();
        r
    };
    let here = path.clone();
    let wrong = |what: String| Err(Error::ill_formed(&here, what));
    Ok(match t {
        Term::Ax(x, f) => Info {
            int: BTreeMap::new(),
            lin: [(x.clone(), f.clone())].into(),
            ty: f.clone(),
        },
        Term::AxInt(x, f) => Info {
            int: [(x.clone(), f.clone())].into(),
            lin: BTreeMap::new(),
            ty: f.clone(),
        },
        Term::Lam(x, b) => {
            let mut bi = child(0, b, path)?;
            let a = bind_lin(&here, &mut bi, x)?;
            bi.ty = LFormula::lolli(a, bi.ty);
            bi
        }
        Term::App(f, a) => {
            let fi = child(0, f, path)?;
            let ai = child(1, a, path)?;
            let res = match &fi.ty {
                LFormula::Lolli(x, y) if **x == ai.ty => (**y).clone(),
                LFormula::Lolli(x, _) => {
                    return wrong(format!("argument has {}, function expects {}", ai.ty, x))
                }
                other => return wrong(format!("applying a non-function of {}", other)),
            };
            merge(&here, fi, ai, res)?
        }
        Term::Unit => Info {
            int: BTreeMap::new(),
            lin: BTreeMap::new(),
            ty: LFormula::Unit,
        },
        Term::LetU(s, c) => {
            let si = child(0, s, path)?;
            if si.ty != LFormula::Unit {
                return wrong(format!("letu scrutinee has {}, not I", si.ty));
            }
            let ci = child(1, c, path)?;
            let ty = ci.ty.clone();
            merge(&here, si, ci, ty)?
        }
        Term::Pair(a, b) => {
            let ai = child(0, a, path)?;
            let bi = child(1, b, path)?;
            let ty = LFormula::tensor(ai.ty.clone(), bi.ty.clone());
            merge(&here, ai, bi, ty)?
        }
        Term::LetT(x, y, s, c) => {
            if x == y {
                return wrong(format!("lett binds `{}` twice", x));
            }
            let si = child(0, s, path)?;
            let (l, r) = match &si.ty {
                LFormula::Tensor(l, r) => ((**l).clone(), (**r).clone()),
                other => return wrong(format!("lett scrutinee has {}, not a tensor", other)),
            };
            let mut ci = child(1, c, path)?;
            for (n, want) in [(x, &l), (y, &r)] {
                let got = bind_lin(&here, &mut ci, n)?;
                if got != *want {
                    return wrong(format!("`{}` is used at {}, bound at {}", n, got, want));
                }
            }
            let ty = ci.ty.clone();
            merge(&here, si, ci, ty)?
        }
        Term::Bang(b) => {
            let mut bi = child(0, b, path)?;
            if let Some(n) = bi.lin.keys().next() {
                return wrong(format!("bang body uses the linear hypothesis `{}`", n));
            }
            bi.ty = LFormula::bang(bi.ty);
            bi
        }
        Term::LetB(x, s, c) => {
            let si = child(0, s, path)?;
            let a = match &si.ty {
                LFormula::Bang(a) => (**a).clone(),
                other => return wrong(format!("letb scrutinee has {}, not !", other)),
            };
            let mut ci = child(1, c, path)?;
            if ci.lin.contains_key(x) {
                return wrong(format!("intuitionistic binder `{}` is used linearly", x));
            }
            if let Some(got) = ci.int.remove(x) {
                if got != a {
                    return wrong(format!("`{}` is used at {}, bound at {}", x, got, a));
                }
            }
            let ty = ci.ty.clone();
            merge(&here, si, ci, ty)?
        }
    })
}

pub fn typecheck(t: &Term) -> Result<LSequent> {
    let i = synth(t, &mut vec![])?;
    Ok(LSequent {
        int: i.int.into_iter().collect(),
        lin: i.lin.into_iter().collect(),
        succ: i.ty,
    })
}

impl LNf {
    pub fn size(&self) -> usize {
        match self {
            LNf::Sw(n) => n.size(),
            LNf::Unit => 1,
            LNf::Lam(_, b) | LNf::Bang(b) => 1 + b.size(),
            LNf::Pair(a, b) => 1 + a.size() + b.size(),
            LNf::LetU(s, c) | LNf::LetT(_, _, s, c) | LNf::LetB(_, s, c) => {
                1 + s.size() + c.size()
            }
        }
    }
}

impl LNe {
    pub fn size(&self) -> usize {
        match self {
            LNe::Ax(..) | LNe::AxInt(..) => 1,
            LNe::App(f, a) => 1 + f.size() + a.size(),
        }
    }
}

pub fn emb_up(n: &LNf) -> Term {
    match n {
        LNf::Sw(e) => emb_dn(e),
        LNf::Lam(x, b) => Term::lam(x, emb_up(b)),
        LNf::Unit => Term::Unit,
        LNf::LetU(s, c) => Term::letu(emb_dn(s), emb_up(c)),
        LNf::Pair(a, b) => Term::pair(emb_up(a), emb_up(b)),
        LNf::LetT(x, y, s, c) => Term::lett(x, y, emb_dn(s), emb_up(c)),
        LNf::Bang(b) => Term::bang(emb_up(b)),
        LNf::LetB(x, s, c) => Term::letb(x, emb_dn(s), emb_up(c)),
    }
}

pub fn emb_dn(n: &LNe) -> Term {
    match n {
        LNe::Ax(x, f) => Term::Ax(x.clone(), f.clone()),
        LNe::AxInt(x, f) => Term::AxInt(x.clone(), f.clone()),
        LNe::App(f, a) => Term::app(emb_dn(f), emb_up(a)),
    }
}

/// Side conditions of normal forms that typing alone does not enforce:
/// `sw` only at atoms and positive eliminators only at non-implications.
fn nf_shape(n: &LNf, path: &mut Path) -> Result<()> {
    let sub = |i: usize, m: &LNf, path: &mut Path| {
        path.push(i);
        let r = nf_shape(m, path);
        path.pop();
        r
    };
    match n {
        LNf::Sw(e) => match ne_shape(e, path)? {
            LFormula::Atom(_) => Ok(()),
            other => Err(Error::SwNotAtomic {
                path: path.clone(),
                succedent: other.to_string(),
            }),
        },
        LNf::Unit => Ok(()),
        LNf::Lam(_, b) | LNf::Bang(b) => sub(0, b, path),
        LNf::Pair(a, b) => {
            sub(0, a, path)?;
            sub(1, b, path)
        }
        LNf::LetU(s, c) | LNf::LetT(_, _, s, c) | LNf::LetB(_, s, c) => {
            // A continuation is an implication exactly when it is a `lam`:
            // every other shape concludes a non-implication or is itself
            // rejected below.
            if let LNf::Lam(..) = **c {
                let succ = typecheck(&emb_up(c))?.succ;
                return Err(Error::GammaPlusViolation {
                    path: path.clone(),
                    succedent: succ.to_string(),
                });
            }
            path.push(0);
            ne_shape(s, path)?;
            path.pop();
            sub(1, c, path)
        }
    }
}

fn ne_shape(n: &LNe, path: &mut Path) -> Result<LFormula> {
    match n {
        LNe::Ax(_, f) | LNe::AxInt(_, f) => Ok(f.clone()),
        LNe::App(f, a) => {
            path.push(0);
            let ff = ne_shape(f, path)?;
            path.pop();
            path.push(1);
            nf_shape(a, path)?;
            path.pop();
            match ff {
                LFormula::Lolli(_, r) => Ok((*r).clone()),
                other => Err(Error::ill_formed(path, format!("applying {}", other))),
            }
        }
    }
}

pub fn typecheck_nf(n: &LNf) -> Result<LSequent> {
    let seq = typecheck(&emb_up(n))?;
    // Succedents computed by `nf_shape` are only trusted once typing passed.
    nf_shape(n, &mut vec![])?;
    Ok(seq)
}

pub fn typecheck_ne(n: &LNe) -> Result<LSequent> {
    let seq = typecheck(&emb_dn(n))?;
    ne_shape(n, &mut vec![])?;
    Ok(seq)
}

/// Applies a permutation to every name, bound or free. Capture-free
/// because permutations are bijective.
pub fn permute(p: &Permutation, t: &Term) -> Term {
    let g = |n: &Name| p.apply(n);
    let r = |t: &Term| Box::new(permute(p, t));
    match t {
        Term::Ax(x, f) => Term::Ax(g(x), f.clone()),
        Term::AxInt(x, f) => Term::AxInt(g(x), f.clone()),
        Term::Lam(x, b) => Term::Lam(g(x), r(b)),
        Term::App(a, b) => Term::App(r(a), r(b)),
        Term::Unit => Term::Unit,
        Term::LetU(a, b) => Term::LetU(r(a), r(b)),
        Term::Pair(a, b) => Term::Pair(r(a), r(b)),
        Term::LetT(x, y, a, b) => Term::LetT(g(x), g(y), r(a), r(b)),
        Term::Bang(b) => Term::Bang(r(b)),
        Term::LetB(x, a, b) => Term::LetB(g(x), r(a), r(b)),
    }
}

pub fn permute_nf(p: &Permutation, n: &LNf) -> LNf {
    let g = |n: &Name| p.apply(n);
    let r = |m: &LNf| Box::new(permute_nf(p, m));
    let e = |m: &LNe| Box::new(permute_ne(p, m));
    match n {
        LNf::Sw(m) => LNf::Sw(e(m)),
        LNf::Lam(x, b) => LNf::Lam(g(x), r(b)),
        LNf::Unit => LNf::Unit,
        LNf::LetU(s, c) => LNf::LetU(e(s), r(c)),
        LNf::Pair(a, b) => LNf::Pair(r(a), r(b)),
        LNf::LetT(x, y, s, c) => LNf::LetT(g(x), g(y), e(s), r(c)),
        LNf::Bang(b) => LNf::Bang(r(b)),
        LNf::LetB(x, s, c) => LNf::LetB(g(x), e(s), r(c)),
    }
}

pub fn permute_ne(p: &Permutation, n: &LNe) -> LNe {
    match n {
        LNe::Ax(x, f) => LNe::Ax(p.apply(x), f.clone()),
        LNe::AxInt(x, f) => LNe::AxInt(p.apply(x), f.clone()),
        LNe::App(f, a) => LNe::App(Box::new(permute_ne(p, f)), Box::new(permute_nf(p, a))),
    }
}

/// Renames the free intuitionistic names of `t` along `r`, which must
/// cover all of them.
pub fn rename(r: &Renaming, t: &Term) -> Result<Term> {
    let seq = typecheck(t)?;
    check_renaming(r, &seq)?;
    Ok(rename_free(r, t))
}

pub fn rename_nf(r: &Renaming, n: &LNf) -> Result<LNf> {
    let seq = typecheck_nf(n)?;
    check_renaming(r, &seq)?;
    Ok(canonical_nf(&rename_nf_free(r, n)))
}

fn check_renaming(r: &Renaming, seq: &LSequent) -> Result<()> {
    if let Some((n, _)) = seq.int.iter().find(|(n, _)| !r.covers(n)) {
        return Err(Error::NameNotCovered(n.to_string()));
    }
    // Targets must not collide with the linear names left in place.
    let lin: BTreeSet<&Name> = seq.lin.iter().map(|(n, _)| n).collect();
    if let Some((_, to)) = r.pairs().find(|(_, to)| lin.contains(to)) {
        return Err(Error::InvalidRenaming(format!(
            "`{}` is already a linear hypothesis",
            to
        )));
    }
    Ok(())
}

/// Renames free names only, freshening any binder that would capture.
pub fn rename_free(r: &Renaming, t: &Term) -> Term {
    let mut used = BTreeSet::new();
    t.all_names(&mut used);
    used.extend(r.pairs().flat_map(|(a, b)| [a.clone(), b.clone()]));
    let free: BTreeMap<Name, Name> = r.pairs().map(|(a, b)| (a.clone(), b.clone())).collect();
    let avoid: BTreeSet<Name> = free.values().cloned().collect();
    Renamer { used }.term(&free, &avoid, t)
}

fn rename_nf_free(r: &Renaming, n: &LNf) -> LNf {
    // Round trip through terms; the shape is preserved by construction.
    let t = rename_free(r, &emb_up(n));
    nf_of_term(&t).expect("renaming keeps normal forms normal")
}

struct Renamer {
    used: BTreeSet<Name>,
}

impl Renamer {
    fn fresh(&mut self) -> Name {
        let n = canonical_names(&self.used).next().expect("infinite supply");
        self.used.insert(n.clone());
        n
    }

    /// Binders in `avoid` get a new name.
    fn bind(
        &mut self,
        x: &Name,
        map: &BTreeMap<Name, Name>,
        avoid: &BTreeSet<Name>,
    ) -> (Name, BTreeMap<Name, Name>) {
        let mut m = map.clone();
        let to = if avoid.contains(x) { self.fresh() } else { x.clone() };
        m.insert(x.clone(), to.clone());
        (to, m)
    }

    fn term(&mut self, map: &BTreeMap<Name, Name>, avoid: &BTreeSet<Name>, t: &Term) -> Term {
        let look = |x: &Name| map.get(x).cloned().unwrap_or_else(|| x.clone());
        match t {
            Term::Ax(x, f) => Term::Ax(look(x), f.clone()),
            Term::AxInt(x, f) => Term::AxInt(look(x), f.clone()),
            Term::Lam(x, b) => {
                let (x2, m) = self.bind(x, map, avoid);
                Term::lam(&x2, self.term(&m, avoid, b))
            }
            Term::App(a, b) => Term::app(self.term(map, avoid, a), self.term(map, avoid, b)),
            Term::Unit => Term::Unit,
            Term::LetU(a, b) => Term::letu(self.term(map, avoid, a), self.term(map, avoid, b)),
            Term::Pair(a, b) => Term::pair(self.term(map, avoid, a), self.term(map, avoid, b)),
            Term::LetT(x, y, s, c) => {
                let s2 = self.term(map, avoid, s);
                let (x2, m) = self.bind(x, map, avoid);
                let (y2, m) = self.bind(y, &m, avoid);
                Term::lett(&x2, &y2, s2, self.term(&m, avoid, c))
            }
            Term::Bang(b) => Term::bang(self.term(map, avoid, b)),
            Term::LetB(x, s, c) => {
                let s2 = self.term(map, avoid, s);
                let (x2, m) = self.bind(x, map, avoid);
                Term::letb(&x2, s2, self.term(&m, avoid, c))
            }
        }
    }
}

/// Capture-avoiding substitution of `u` for the free occurrences of `x`
/// (linear or intuitionistic).
pub fn substitute(t: &Term, x: &Name, u: &Term) -> Term {
    let mut used = BTreeSet::new();
    t.all_names(&mut used);
    u.all_names(&mut used);
    let mut avoid = BTreeSet::new();
    u.all_names(&mut avoid);
    let mut s = Subst {
        ren: Renamer { used },
        x: x.clone(),
        u: u.clone(),
        avoid,
    };
    s.term(&BTreeMap::new(), t)
}

struct Subst {
    ren: Renamer,
    x: Name,
    u: Term,
    avoid: BTreeSet<Name>,
}

impl Subst {
    fn term(&mut self, map: &BTreeMap<Name, Name>, t: &Term) -> Term {
        let look = |n: &Name| map.get(n).cloned().unwrap_or_else(|| n.clone());
        match t {
            Term::Ax(n, _) | Term::AxInt(n, _) if *n == self.x && !map.contains_key(n) => {
                self.u.clone()
            }
            Term::Ax(n, f) => Term::Ax(look(n), f.clone()),
            Term::AxInt(n, f) => Term::AxInt(look(n), f.clone()),
            Term::Lam(y, b) => {
                if *y == self.x {
                    return Renamer::shadowed(map, t, &mut self.ren);
                }
                let (y2, m) = self.ren.bind(y, map, &self.avoid);
                Term::lam(&y2, self.term(&m, b))
            }
            Term::App(a, b) => Term::app(self.term(map, a), self.term(map, b)),
            Term::Unit => Term::Unit,
            Term::LetU(a, b) => Term::letu(self.term(map, a), self.term(map, b)),
            Term::Pair(a, b) => Term::pair(self.term(map, a), self.term(map, b)),
            Term::LetT(y, z, s, c) => {
                let s2 = self.term(map, s);
                if *y == self.x || *z == self.x {
                    let c2 = Renamer::shadowed(map, c, &mut self.ren);
                    return Term::lett(y, z, s2, c2);
                }
                let (y2, m) = self.ren.bind(y, map, &self.avoid);
                let (z2, m) = self.ren.bind(z, &m, &self.avoid);
                Term::lett(&y2, &z2, s2, self.term(&m, c))
            }
            Term::Bang(b) => Term::bang(self.term(map, b)),
            Term::LetB(y, s, c) => {
                let s2 = self.term(map, s);
                if *y == self.x {
                    let c2 = Renamer::shadowed(map, c, &mut self.ren);
                    return Term::letb(y, s2, c2);
                }
                let (y2, m) = self.ren.bind(y, map, &self.avoid);
                Term::letb(&y2, s2, self.term(&m, c))
            }
        }
    }
}

impl Renamer {
    /// Below a binder that shadows the substituted name: only pending
    /// renamings apply.
    fn shadowed(map: &BTreeMap<Name, Name>, t: &Term, ren: &mut Renamer) -> Term {
        ren.term(map, &BTreeSet::new(), t)
    }
}

/// Renames every binder to `x0, x1, …` in pre-order, skipping free names.
/// Two normal forms are α-equivalent iff their canonical forms are equal.
pub fn canonical_nf(n: &LNf) -> LNf {
    let seq_names: BTreeSet<Name> = free_names_nf(n);
    let mut supply = canonical_names(&seq_names);
    let mut next = move || supply.next().expect("infinite supply");
    canon_nf(n, &BTreeMap::new(), &mut next)
}

pub fn canonical(t: &Term) -> Term {
    let mut free = BTreeSet::new();
    free_names(t, &BTreeSet::new(), &mut free);
    let mut supply = canonical_names(&free);
    let mut next = move || supply.next().expect("infinite supply");
    canon_term(t, &BTreeMap::new(), &mut next)
}

fn free_names(t: &Term, bound: &BTreeSet<Name>, out: &mut BTreeSet<Name>) {
    let under = |xs: &[&Name]| {
        let mut b = bound.clone();
        b.extend(xs.iter().map(|x| (*x).clone()));
        b
    };
    match t {
        Term::Ax(x, _) | Term::AxInt(x, _) => {
            if !bound.contains(x) {
                out.insert(x.clone());
            }
        }
        Term::Lam(x, b) => free_names(b, &under(&[x]), out),
        Term::LetT(x, y, s, c) => {
            free_names(s, bound, out);
            free_names(c, &under(&[x, y]), out);
        }
        Term::LetB(x, s, c) => {
            free_names(s, bound, out);
            free_names(c, &under(&[x]), out);
        }
        _ => {
            for c in t.children() {
                free_names(c, bound, out);
            }
        }
    }
}

pub fn free_names_nf(n: &LNf) -> BTreeSet<Name> {
    let mut out = BTreeSet::new();
    free_names(&emb_up(n), &BTreeSet::new(), &mut out);
    out
}

fn canon_term(t: &Term, map: &BTreeMap<Name, Name>, next: &mut impl FnMut() -> Name) -> Term {
    let look = |x: &Name| map.get(x).cloned().unwrap_or_else(|| x.clone());
    let bind = |x: &Name, m: &BTreeMap<Name, Name>, next: &mut dyn FnMut() -> Name| {
        let mut m = m.clone();
        let to = next();
        m.insert(x.clone(), to.clone());
        (to, m)
    };
    match t {
        Term::Ax(x, f) => Term::Ax(look(x), f.clone()),
        Term::AxInt(x, f) => Term::AxInt(look(x), f.clone()),
        Term::Lam(x, b) => {
            let (x2, m) = bind(x, map, next);
            Term::lam(&x2, canon_term(b, &m, next))
        }
        Term::App(a, b) => {
            let a2 = canon_term(a, map, next);
            Term::app(a2, canon_term(b, map, next))
        }
        Term::Unit => Term::Unit,
        Term::LetU(a, b) => {
            let a2 = canon_term(a, map, next);
            Term::letu(a2, canon_term(b, map, next))
        }
        Term::Pair(a, b) => {
            let a2 = canon_term(a, map, next);
            Term::pair(a2, canon_term(b, map, next))
        }
        Term::LetT(x, y, s, c) => {
            let s2 = canon_term(s, map, next);
            let (x2, m) = bind(x, map, next);
            let (y2, m) = bind(y, &m, next);
            Term::lett(&x2, &y2, s2, canon_term(c, &m, next))
        }
        Term::Bang(b) => Term::bang(canon_term(b, map, next)),
        Term::LetB(x, s, c) => {
            let s2 = canon_term(s, map, next);
            let (x2, m) = bind(x, map, next);
            Term::letb(&x2, s2, canon_term(c, &m, next))
        }
    }
}

fn canon_nf(n: &LNf, map: &BTreeMap<Name, Name>, next: &mut impl FnMut() -> Name) -> LNf {
    nf_of_term(&canon_term(&emb_up(n), map, next)).expect("canonical naming keeps the shape")
}

/// Reads a term back as a normal form, if it has the shape of one (no
/// redexes, neutrals only under `sw`, applications, and eliminator heads).
/// Typing side conditions are not checked here.
pub fn nf_of_term(t: &Term) -> Option<LNf> {
    Some(match t {
        Term::Ax(..) | Term::AxInt(..) | Term::App(..) => LNf::Sw(Box::new(ne_of_term(t)?)),
        Term::Lam(x, b) => LNf::Lam(x.clone(), Box::new(nf_of_term(b)?)),
        Term::Unit => LNf::Unit,
        Term::LetU(s, c) => LNf::LetU(Box::new(ne_of_term(s)?), Box::new(nf_of_term(c)?)),
        Term::Pair(a, b) => LNf::Pair(Box::new(nf_of_term(a)?), Box::new(nf_of_term(b)?)),
        Term::LetT(x, y, s, c) => LNf::LetT(
            x.clone(),
            y.clone(),
            Box::new(ne_of_term(s)?),
            Box::new(nf_of_term(c)?),
        ),
        Term::Bang(b) => LNf::Bang(Box::new(nf_of_term(b)?)),
        Term::LetB(x, s, c) => {
            LNf::LetB(x.clone(), Box::new(ne_of_term(s)?), Box::new(nf_of_term(c)?))
        }
    })
}

pub fn ne_of_term(t: &Term) -> Option<LNe> {
    Some(match t {
        Term::Ax(x, f) => LNe::Ax(x.clone(), f.clone()),
        Term::AxInt(x, f) => LNe::AxInt(x.clone(), f.clone()),
        Term::App(f, a) => LNe::App(Box::new(ne_of_term(f)?), Box::new(nf_of_term(a)?)),
        _ => return None,
    })
}

/// α-equivalence of normal forms.
pub fn nf_alpha_eq(a: &LNf, b: &LNf) -> bool {
    canonical_nf(a) == canonical_nf(b)
}
