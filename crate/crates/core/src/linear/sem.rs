//! Kripke model over named dual contexts, the chain monad with a third
//! kind of link for `!`, and normalization.
//!
//! A value records the context `(Γ; Δ)` it lives at. Intuitionistic zones
//! only grow along inclusions, which leave names untouched, so a part of a
//! value may live at a smaller `Γ` than the whole; linear zones of parts
//! partition the linear zone of the whole.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::names::{Name, Permutation, Renaming, Supply};

use super::{canonical_nf, permute_ne, permute_nf, typecheck, LFormula, LNe, LNf, LSequent, Term};

pub type Zone = BTreeMap<Name, LFormula>;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Ctx {
    pub int: Zone,
    pub lin: Zone,
}

impl Ctx {
    pub fn of_sequent(s: &LSequent) -> Ctx {
        Ctx {
            int: s.int.iter().cloned().collect(),
            lin: s.lin.iter().cloned().collect(),
        }
    }

    pub fn lin1(int: &Zone, x: &Name, a: &LFormula) -> Ctx {
        Ctx {
            int: int.clone(),
            lin: [(x.clone(), a.clone())].into(),
        }
    }

    /// Linear zones must be disjoint, intuitionistic ones must agree.
    pub fn join(&self, other: &Ctx) -> Result<Ctx> {
        let mut out = self.clone();
        for (n, f) in &other.lin {
            if out.lin.insert(n.clone(), f.clone()).is_some() {
                return Err(Error::bad_value(format!("`{}` is linear on both sides", n)));
            }
        }
        out.extend_int(&other.int)?;
        Ok(out)
    }

    fn extend_int(&mut self, int: &Zone) -> Result<()> {
        for (n, f) in int {
            if let Some(g) = self.int.insert(n.clone(), f.clone()) {
                if g != *f {
                    return Err(Error::bad_value(format!("`{}` is both {} and {}", n, g, f)));
                }
            }
        }
        Ok(())
    }

    /// Along the inclusion `Γ → Γ, x:A`.
    pub fn include(&self, x: &Name, a: &LFormula) -> Ctx {
        let mut out = self.clone();
        out.int.insert(x.clone(), a.clone());
        out
    }

    pub fn int_only(&self) -> Ctx {
        Ctx {
            int: self.int.clone(),
            lin: Zone::new(),
        }
    }

    fn permute(&self, p: &Permutation) -> Ctx {
        let z = |zone: &Zone| zone.iter().map(|(n, f)| (p.apply(n), f.clone())).collect();
        Ctx {
            int: z(&self.int),
            lin: z(&self.lin),
        }
    }

    /// Part relation: same linear zone, smaller intuitionistic zone.
    fn below(&self, whole: &Ctx) -> bool {
        self.lin == whole.lin && self.int.iter().all(|(n, f)| whole.int.get(n) == Some(f))
    }
}

impl fmt::Display for Ctx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let seq = LSequent {
            int: self.int.clone().into_iter().collect(),
            lin: self.lin.clone().into_iter().collect(),
            succ: LFormula::Unit,
        };
        let s = seq.to_string();
        f.write_str(s.trim_end_matches("|- I").trim_end())
    }
}

/// Takes an argument living at any extension of the home context's
/// intuitionistic zone.
pub type HomFn = Arc<dyn Fn(Value) -> Result<Value> + Send + Sync>;

#[derive(Clone)]
pub struct Value {
    pub cxt: Ctx,
    pub formula: LFormula,
    pub kind: Kind,
}

#[derive(Clone)]
pub enum Kind {
    Atom(LNf),
    Unit(Box<Chain>),
    Tensor(Box<Chain>),
    Lolli(HomFn),
    Bang(Box<Chain>),
}

#[derive(Clone, PartialEq)]
pub enum Payload {
    Unit,
    Pair(Box<Payload>, Box<Payload>),
    Value(Value),
    /// A value at an empty linear zone, as carried under `!`.
    Bang(Value),
    Nf(LNf),
    Env(Env),
    Monadic(Box<Chain>),
}

#[derive(Clone, PartialEq)]
pub enum Chain {
    Eta {
        cxt: Ctx,
        payload: Payload,
    },
    EUnit {
        ne: LNe,
        rest: Box<Chain>,
    },
    /// `rest` additionally has `x:left, y:right` in its linear zone.
    ETensor {
        x: Name,
        y: Name,
        left: LFormula,
        right: LFormula,
        ne: LNe,
        rest: Box<Chain>,
    },
    /// `rest` additionally has `x:inner` in its intuitionistic zone.
    EBang {
        x: Name,
        inner: LFormula,
        ne: LNe,
        rest: Box<Chain>,
    },
}

/// Interpretation of a context, by name.
#[derive(Clone, Default, PartialEq)]
pub struct Env(pub BTreeMap<Name, Value>);

impl PartialEq for Value {
    /// Structural; hom values compare by identity.
    fn eq(&self, other: &Value) -> bool {
        self.cxt == other.cxt
            && self.formula == other.formula
            && match (&self.kind, &other.kind) {
                (Kind::Atom(a), Kind::Atom(b)) => a == b,
                (Kind::Unit(a), Kind::Unit(b))
                | (Kind::Tensor(a), Kind::Tensor(b))
                | (Kind::Bang(a), Kind::Bang(b)) => a == b,
                (Kind::Lolli(f), Kind::Lolli(g)) => Arc::ptr_eq(f, g),
                _ => false,
            }
    }
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            Kind::Atom(n) => write!(f, "atom[{}]", super::text::print_nf(n)),
            Kind::Unit(m) => write!(f, "unit[{:?}]", m),
            Kind::Tensor(m) => write!(f, "tensor[{:?}]", m),
            Kind::Bang(m) => write!(f, "bang[{:?}]", m),
            Kind::Lolli(_) => write!(f, "<fn {}>", self.formula),
        }
    }
}

impl fmt::Debug for Payload {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Payload::Unit => f.write_str("()"),
            Payload::Pair(a, b) => write!(f, "({:?}, {:?})", a, b),
            Payload::Value(v) => write!(f, "{:?}", v),
            Payload::Bang(v) => write!(f, "!{:?}", v),
            Payload::Nf(n) => f.write_str(&super::text::print_nf(n)),
            Payload::Env(e) => write!(f, "{:?}", e),
            Payload::Monadic(m) => write!(f, "{:?}", m),
        }
    }
}

impl fmt::Debug for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use super::text::print_ne;
        match self {
            Chain::Eta { payload, .. } => write!(f, "eta {:?}", payload),
            Chain::EUnit { ne, rest } => write!(f, "letu {}; {:?}", print_ne(ne), rest),
            Chain::ETensor { x, y, ne, rest, .. } => {
                write!(f, "lett[{},{}] {}; {:?}", x, y, print_ne(ne), rest)
            }
            Chain::EBang { x, ne, rest, .. } => write!(f, "letb[{}] {}; {:?}", x, print_ne(ne), rest),
        }
    }
}

impl fmt::Debug for Env {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.0.iter()).finish()
    }
}

fn ne_cxt(ne: &LNe) -> Result<Ctx> {
    Ok(Ctx::of_sequent(&super::typecheck_ne(ne)?))
}

impl Env {
    pub fn cxt(&self) -> Result<Ctx> {
        let mut c = Ctx::default();
        for v in self.0.values() {
            c = c.join(&v.cxt)?;
        }
        Ok(c)
    }

    /// The entries a subterm of sequent `seq` needs. Linear entries move,
    /// intuitionistic ones are shared.
    fn restrict(&self, seq: &LSequent) -> Result<Env> {
        let mut out = BTreeMap::new();
        for (n, f) in seq.int.iter().chain(&seq.lin) {
            match self.0.get(n) {
                Some(v) if v.formula == *f => {
                    out.insert(n.clone(), v.clone());
                }
                Some(v) => {
                    return Err(Error::EnvMismatch(format!(
                        "`{}` is interpreted at {} but used at {}",
                        n, v.formula, f
                    )))
                }
                None => return Err(Error::EnvMismatch(format!("`{}` is not interpreted", n))),
            }
        }
        Ok(Env(out))
    }

    fn include(&self, x: &Name, a: &LFormula) -> Env {
        Env(self
            .0
            .iter()
            .map(|(n, v)| (n.clone(), include_value(v, x, a)))
            .collect())
    }
}

/// Along the inclusion `Γ → Γ, x:A`; names are untouched.
pub fn include_value(v: &Value, x: &Name, a: &LFormula) -> Value {
    Value {
        cxt: v.cxt.include(x, a),
        ..v.clone()
    }
}

/// Action of the inclusion `Γ → Γ, x:A` on a payload. Names are
/// unchanged; only the recorded contexts grow.
pub fn include_payload(p: &Payload, x: &Name, a: &LFormula) -> Payload {
    match p {
        Payload::Unit | Payload::Nf(_) => p.clone(),
        Payload::Pair(l, r) => Payload::Pair(
            Box::new(include_payload(l, x, a)),
            Box::new(include_payload(r, x, a)),
        ),
        Payload::Value(v) => Payload::Value(include_value(v, x, a)),
        Payload::Bang(v) => Payload::Bang(include_value(v, x, a)),
        Payload::Env(e) => Payload::Env(e.include(x, a)),
        Payload::Monadic(m) => Payload::Monadic(Box::new(include_chain(m, x, a))),
    }
}

fn include_chain(m: &Chain, x: &Name, a: &LFormula) -> Chain {
    match m {
        Chain::Eta { cxt, payload } => Chain::Eta {
            cxt: cxt.include(x, a),
            payload: include_payload(payload, x, a),
        },
        _ => m.with_rest(include_chain(m.rest().expect("link"), x, a)),
    }
}

impl Chain {
    pub fn eta(cxt: Ctx, payload: Payload) -> Chain {
        Chain::Eta { cxt, payload }
    }

    pub fn rest(&self) -> Option<&Chain> {
        match self {
            Chain::Eta { .. } => None,
            Chain::EUnit { rest, .. } | Chain::ETensor { rest, .. } | Chain::EBang { rest, .. } => {
                Some(rest)
            }
        }
    }

    fn with_rest(&self, new: Chain) -> Chain {
        let mut out = self.clone();
        match &mut out {
            Chain::Eta { .. } => unreachable!("eta has no rest"),
            Chain::EUnit { rest, .. } | Chain::ETensor { rest, .. } | Chain::EBang { rest, .. } => {
                **rest = new
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.rest().map_or(0, |r| 1 + r.len())
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, Chain::Eta { .. })
    }

    /// The context the whole chain lives at.
    pub fn cxt(&self) -> Result<Ctx> {
        match self {
            Chain::Eta { cxt, .. } => Ok(cxt.clone()),
            Chain::EUnit { ne, rest } => ne_cxt(ne)?.join(&rest.cxt()?),
            Chain::ETensor { x, y, ne, rest, .. } => {
                let mut r = rest.cxt()?;
                r.lin.remove(x);
                r.lin.remove(y);
                ne_cxt(ne)?.join(&r)
            }
            Chain::EBang { x, ne, rest, .. } => {
                let mut r = rest.cxt()?;
                r.int.remove(x);
                ne_cxt(ne)?.join(&r)
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Chain::Eta { cxt, payload } => payload.validate_at(cxt),
            Chain::EUnit { ne, rest } => {
                expect_ne(ne, &LFormula::Unit)?;
                rest.validate()
            }
            Chain::ETensor {
                x,
                y,
                left,
                right,
                ne,
                rest,
            } => {
                expect_ne(ne, &LFormula::tensor(left.clone(), right.clone()))?;
                let r = rest.cxt()?;
                if r.lin.get(x) != Some(left) || r.lin.get(y) != Some(right) {
                    return Err(Error::bad_value("tensor link binders are not linear in its rest"));
                }
                rest.validate()
            }
            Chain::EBang { x, inner, ne, rest } => {
                expect_ne(ne, &LFormula::bang(inner.clone()))?;
                let r = rest.cxt()?;
                if r.lin.contains_key(x) || r.int.get(x).is_some_and(|f| f != inner) {
                    return Err(Error::bad_value("bang link binder misused in its rest"));
                }
                rest.validate()
            }
        }
    }
}

fn expect_ne(ne: &LNe, f: &LFormula) -> Result<()> {
    let s = super::typecheck_ne(ne)?;
    if s.succ != *f {
        return Err(Error::bad_value(format!("link neutral has {}, expected {}", s.succ, f)));
    }
    Ok(())
}

impl Payload {
    fn cxt(&self) -> Result<Option<Ctx>> {
        Ok(match self {
            Payload::Unit => Some(Ctx::default()),
            Payload::Pair(a, b) => match (a.cxt()?, b.cxt()?) {
                (Some(x), Some(y)) => Some(x.join(&y)?),
                _ => None,
            },
            Payload::Value(v) | Payload::Bang(v) => Some(v.cxt.clone()),
            Payload::Env(e) => Some(e.cxt()?),
            Payload::Monadic(m) => Some(m.cxt()?),
            Payload::Nf(_) => None,
        })
    }

    fn validate_at(&self, cxt: &Ctx) -> Result<()> {
        if let Payload::Bang(v) = self {
            if !v.cxt.lin.is_empty() {
                return Err(Error::bad_value("payload under ! has linear hypotheses"));
            }
        }
        match self.cxt()? {
            Some(c) if !c.below(cxt) => Err(Error::bad_value(format!(
                "payload at `{}` inside a chain end at `{}`",
                c, cxt
            ))),
            _ => Ok(()),
        }
    }
}

impl Value {
    pub fn validate(&self) -> Result<()> {
        match &self.kind {
            Kind::Atom(n) => {
                let s = super::typecheck_nf(n)?;
                if s.succ != self.formula || !Ctx::of_sequent(&s).below(&self.cxt) {
                    return Err(Error::bad_value("atom value disagrees with its normal form"));
                }
                Ok(())
            }
            Kind::Unit(m) | Kind::Tensor(m) | Kind::Bang(m) => {
                if !m.cxt()?.below(&self.cxt) {
                    return Err(Error::bad_value("chain context differs from the value's"));
                }
                m.validate()
            }
            Kind::Lolli(_) => Ok(()),
        }
    }
}

pub fn apply(f: &Value, arg: Value) -> Result<Value> {
    match (&f.formula, &f.kind) {
        (LFormula::Lolli(a, b), Kind::Lolli(h)) => {
            if arg.formula != **a {
                return Err(Error::bad_value(format!(
                    "argument at {} for a function from {}",
                    arg.formula, a
                )));
            }
            let r = h(arg)?;
            if r.formula != **b {
                return Err(Error::bad_value("function result at the wrong formula"));
            }
            Ok(r)
        }
        _ => Err(Error::bad_value("applying a non-function value")),
    }
}

pub fn t_map(mv: &Chain, f: &mut impl FnMut(&Ctx, Payload) -> Result<Payload>) -> Result<Chain> {
    match mv {
        Chain::Eta { cxt, payload } => Ok(Chain::Eta {
            cxt: cxt.clone(),
            payload: f(cxt, payload.clone())?,
        }),
        _ => Ok(mv.with_rest(t_map(mv.rest().expect("link"), f)?)),
    }
}

pub fn t_join(mv: &Chain) -> Result<Chain> {
    match mv {
        Chain::Eta {
            payload: Payload::Monadic(inner),
            ..
        } => Ok((**inner).clone()),
        Chain::Eta { .. } => Err(Error::bad_value("join of a non-monadic payload")),
        _ => Ok(mv.with_rest(t_join(mv.rest().expect("link"))?)),
    }
}

/// Left strength. Under a `!` link the carried payload is moved along the
/// inclusion of the intuitionistic zone by the bound name.
pub fn lmst(x_cxt: &Ctx, x: Payload, mv: &Chain) -> Result<Chain> {
    match mv {
        Chain::Eta { cxt, payload } => Ok(Chain::Eta {
            cxt: x_cxt.join(cxt)?,
            payload: Payload::Pair(Box::new(x), Box::new(payload.clone())),
        }),
        Chain::EBang {
            x: b, inner, rest, ..
        } => {
            let moved = include_payload(&x, b, inner);
            Ok(mv.with_rest(lmst(&x_cxt.include(b, inner), moved, rest)?))
        }
        _ => Ok(mv.with_rest(lmst(x_cxt, x, mv.rest().expect("link"))?)),
    }
}

pub fn rmst(mv: &Chain, x_cxt: &Ctx, x: Payload) -> Result<Chain> {
    match mv {
        Chain::Eta { cxt, payload } => Ok(Chain::Eta {
            cxt: cxt.join(x_cxt)?,
            payload: Payload::Pair(Box::new(payload.clone()), Box::new(x)),
        }),
        Chain::EBang {
            x: b, inner, rest, ..
        } => {
            let moved = include_payload(&x, b, inner);
            Ok(mv.with_rest(rmst(rest, &x_cxt.include(b, inner), moved)?))
        }
        _ => Ok(mv.with_rest(rmst(mv.rest().expect("link"), x_cxt, x)?)),
    }
}

fn value_payload(p: &Payload) -> Result<&Value> {
    match p {
        Payload::Value(v) => Ok(v),
        _ => Err(Error::bad_value("expected a value payload")),
    }
}

/// Right closed strength: applies the function at the end of the chain.
pub fn rcst(mv: &Chain, arg: &Value) -> Result<Chain> {
    match mv {
        Chain::Eta { cxt, payload } => {
            let v = apply(value_payload(payload)?, arg.clone())?;
            Ok(Chain::Eta {
                cxt: cxt.join(&arg.cxt)?,
                payload: Payload::Value(v),
            })
        }
        Chain::EBang { x, inner, rest, .. } => {
            Ok(mv.with_rest(rcst(rest, &include_value(arg, x, inner))?))
        }
        _ => Ok(mv.with_rest(rcst(mv.rest().expect("link"), arg)?)),
    }
}

/// Left closed strength: applies a plain function to the chain's end.
pub fn lcst(f: &Value, mv: &Chain) -> Result<Chain> {
    match mv {
        Chain::Eta { cxt, payload } => {
            let v = apply(f, value_payload(payload)?.clone())?;
            Ok(Chain::Eta {
                cxt: f.cxt.join(cxt)?,
                payload: Payload::Value(v),
            })
        }
        Chain::EBang { x, inner, rest, .. } => {
            Ok(mv.with_rest(lcst(&include_value(f, x, inner), rest)?))
        }
        _ => Ok(mv.with_rest(lcst(f, mv.rest().expect("link"))?)),
    }
}

/// Replays the chain as eliminations around its normal-form payload.
pub fn run_up(mv: &Chain, goal: &LFormula) -> Result<LNf> {
    match mv {
        Chain::Eta {
            payload: Payload::Nf(n),
            ..
        } => Ok(n.clone()),
        Chain::Eta { .. } => Err(Error::bad_value("run on a non-normal-form payload")),
        _ if !goal.is_non_negative() => Err(Error::GammaPlusViolation {
            path: vec![],
            succedent: goal.to_string(),
        }),
        Chain::EUnit { ne, rest } => Ok(LNf::LetU(Box::new(ne.clone()), Box::new(run_up(rest, goal)?))),
        Chain::ETensor { x, y, ne, rest, .. } => Ok(LNf::LetT(
            x.clone(),
            y.clone(),
            Box::new(ne.clone()),
            Box::new(run_up(rest, goal)?),
        )),
        Chain::EBang { x, ne, rest, .. } => Ok(LNf::LetB(
            x.clone(),
            Box::new(ne.clone()),
            Box::new(run_up(rest, goal)?),
        )),
    }
}

/// The algebra at `a`; payloads are values of `a`.
pub fn run(a: &LFormula, mv: &Chain) -> Result<Value> {
    let cxt = mv.cxt()?;
    match a {
        LFormula::Atom(_) => {
            let nfs = t_map(mv, &mut |_, p| match p {
                Payload::Value(Value {
                    kind: Kind::Atom(n),
                    ..
                }) => Ok(Payload::Nf(n)),
                _ => Err(Error::bad_value("atom run over a non-atomic payload")),
            })?;
            Ok(Value {
                cxt,
                formula: a.clone(),
                kind: Kind::Atom(run_up(&nfs, a)?),
            })
        }
        LFormula::Unit | LFormula::Tensor(..) | LFormula::Bang(_) => {
            let nested = t_map(mv, &mut |_, p| match p {
                Payload::Value(Value {
                    kind: Kind::Unit(m) | Kind::Tensor(m) | Kind::Bang(m),
                    ..
                }) => Ok(Payload::Monadic(m)),
                _ => Err(Error::bad_value("monadic run over a non-monadic payload")),
            })?;
            let joined = Box::new(t_join(&nested)?);
            let kind = match a {
                LFormula::Unit => Kind::Unit(joined),
                LFormula::Tensor(..) => Kind::Tensor(joined),
                _ => Kind::Bang(joined),
            };
            Ok(Value {
                cxt,
                formula: a.clone(),
                kind,
            })
        }
        LFormula::Lolli(_, b) => {
            let (b, mv) = ((**b).clone(), mv.clone());
            Ok(Value {
                cxt,
                formula: a.clone(),
                kind: Kind::Lolli(Arc::new(move |x| run(&b, &rcst(&mv, &x)?))),
            })
        }
    }
}

/// A derivation with the sequent of every node.
struct Typed {
    seq: LSequent,
    node: Node,
}

enum Node {
    Ax(Name),
    Lam(Name, Arc<Typed>),
    App(Arc<Typed>, Arc<Typed>),
    Unit,
    LetU(Arc<Typed>, Arc<Typed>),
    Pair(Arc<Typed>, Arc<Typed>),
    LetT(Name, Name, Arc<Typed>, Arc<Typed>),
    Bang(Arc<Typed>),
    LetB(Name, Arc<Typed>, Arc<Typed>),
}

fn annotate(t: &Term) -> Result<Arc<Typed>> {
    let seq = typecheck(t)?;
    let node = match t {
        Term::Ax(x, _) | Term::AxInt(x, _) => Node::Ax(x.clone()),
        Term::Lam(x, b) => Node::Lam(x.clone(), annotate(b)?),
        Term::App(a, b) => Node::App(annotate(a)?, annotate(b)?),
        Term::Unit => Node::Unit,
        Term::LetU(a, b) => Node::LetU(annotate(a)?, annotate(b)?),
        Term::Pair(a, b) => Node::Pair(annotate(a)?, annotate(b)?),
        Term::LetT(x, y, a, b) => Node::LetT(x.clone(), y.clone(), annotate(a)?, annotate(b)?),
        Term::Bang(b) => Node::Bang(annotate(b)?),
        Term::LetB(x, a, b) => Node::LetB(x.clone(), annotate(a)?, annotate(b)?),
    };
    Ok(Arc::new(Typed { seq, node }))
}

/// `env` must interpret exactly the linear hypotheses of `t`, and at
/// least its intuitionistic ones.
pub fn eval(t: &Term, env: &Env) -> Result<Value> {
    let typed = annotate(t)?;
    let lin = env.cxt()?.lin;
    if lin.len() != typed.seq.lin.len() {
        return Err(Error::EnvMismatch(format!(
            "environment has {} linear entries, `{}` needs {}",
            lin.len(),
            typed.seq,
            typed.seq.lin.len()
        )));
    }
    eval_typed(&typed, env, &Supply::tagged("w"))
}

/// `env` interprets at least the node's context.
///
/// An intuitionistic hypothesis may be read many times; each read gets its
/// own copy of the names bound inside the value.
fn eval_typed(t: &Arc<Typed>, env: &Env, s: &Supply) -> Result<Value> {
    let env = env.restrict(&t.seq)?;
    let cxt = env.cxt()?;
    let succ = t.seq.succ.clone();
    match &t.node {
        Node::Ax(x) if t.seq.int.iter().any(|(n, _)| n == x) => Ok(freshen_value(s, &env.0[x])),
        Node::Ax(x) => Ok(env.0[x].clone()),
        Node::Lam(x, body) => {
            let (x, body, home, s) = (x.clone(), body.clone(), env.clone(), s.clone());
            Ok(Value {
                cxt,
                formula: succ,
                kind: Kind::Lolli(Arc::new(move |v| {
                    let mut e = home.clone();
                    e.0.insert(x.clone(), v);
                    eval_typed(&body, &e, &s)
                })),
            })
        }
        Node::App(f, a) => apply(&eval_typed(f, &env, s)?, eval_typed(a, &env, s)?),
        Node::Unit => Ok(Value {
            cxt: cxt.clone(),
            formula: succ,
            kind: Kind::Unit(Box::new(Chain::eta(cxt, Payload::Unit))),
        }),
        Node::Pair(l, r) => {
            let vl = eval_typed(l, &env, s)?;
            let vr = eval_typed(r, &env, s)?;
            let payload = Payload::Pair(Box::new(Payload::Value(vl)), Box::new(Payload::Value(vr)));
            Ok(Value {
                cxt: cxt.clone(),
                formula: succ,
                kind: Kind::Tensor(Box::new(Chain::eta(cxt, payload))),
            })
        }
        Node::Bang(b) => {
            let v = eval_typed(b, &env, s)?;
            Ok(Value {
                cxt: cxt.clone(),
                formula: succ,
                kind: Kind::Bang(Box::new(Chain::eta(cxt, Payload::Bang(v)))),
            })
        }
        Node::LetU(a, c) => elim(&env, a, c, &succ, &[], s),
        Node::LetT(x, y, a, c) => elim(&env, a, c, &succ, &[x.clone(), y.clone()], s),
        Node::LetB(x, a, c) => elim(&env, a, c, &succ, std::slice::from_ref(x), s),
    }
}

/// Positive eliminations: the rest of the environment is carried to the
/// end of the scrutinee's chain, where the continuation runs.
fn elim(env: &Env, a: &Arc<Typed>, c: &Arc<Typed>, succ: &LFormula, binders: &[Name], s: &Supply) -> Result<Value> {
    let scrutinee = match eval_typed(a, env, s)?.kind {
        Kind::Unit(m) | Kind::Tensor(m) | Kind::Bang(m) => *m,
        _ => return Err(Error::bad_value("eliminated value is not monadic")),
    };
    let mut delta = Env::default();
    for (n, _) in c.seq.int.iter().chain(&c.seq.lin) {
        if !binders.contains(n) {
            delta.0.insert(n.clone(), env.0[n].clone());
        }
    }
    let carried = lmst(&delta.cxt()?, Payload::Env(delta), &scrutinee)?;
    let c = c.clone();
    let binders = binders.to_vec();
    let mapped = t_map(&carried, &mut |_, p| {
        let (rest, bound) = match p {
            Payload::Pair(rest, bound) => (*rest, *bound),
            _ => return Err(Error::bad_value("strength did not produce a pair")),
        };
        let mut e = match rest {
            Payload::Env(e) => e,
            _ => return Err(Error::bad_value("carried payload is not an environment")),
        };
        match (bound, binders.as_slice()) {
            (Payload::Unit, []) => {}
            (Payload::Pair(a, b), [x, y]) => match (*a, *b) {
                (Payload::Value(a), Payload::Value(b)) => {
                    e.0.insert(x.clone(), a);
                    e.0.insert(y.clone(), b);
                }
                _ => return Err(Error::bad_value("tensor payload without values")),
            },
            (Payload::Bang(v), [x]) => {
                e.0.insert(x.clone(), v);
            }
            _ => return Err(Error::bad_value("payload does not match the eliminator")),
        }
        Ok(Payload::Value(eval_typed(&c, &e, s)?))
    })?;
    run(succ, &mapped)
}

pub fn reflect(s: &Supply, a: &LFormula, ne: LNe, cxt: Ctx) -> Value {
    let kind = match a {
        LFormula::Atom(_) => Kind::Atom(LNf::Sw(Box::new(ne))),
        LFormula::Unit => {
            let end = Chain::eta(cxt.int_only(), Payload::Unit);
            Kind::Unit(Box::new(Chain::EUnit {
                ne,
                rest: Box::new(end),
            }))
        }
        LFormula::Tensor(l, r) => {
            let (x, y) = (s.fresh(), s.fresh());
            let vx = reflect(s, l, LNe::Ax(x.clone(), (**l).clone()), Ctx::lin1(&cxt.int, &x, l));
            let vy = reflect(s, r, LNe::Ax(y.clone(), (**r).clone()), Ctx::lin1(&cxt.int, &y, r));
            let end_cxt = vx.cxt.join(&vy.cxt).expect("fresh names are distinct");
            let payload = Payload::Pair(Box::new(Payload::Value(vx)), Box::new(Payload::Value(vy)));
            Kind::Tensor(Box::new(Chain::ETensor {
                x,
                y,
                left: (**l).clone(),
                right: (**r).clone(),
                ne,
                rest: Box::new(Chain::eta(end_cxt, payload)),
            }))
        }
        LFormula::Lolli(arg, res) => {
            let (s, ne, res, home) = (s.clone(), ne, (**res).clone(), cxt.clone());
            let arg = (**arg).clone();
            Kind::Lolli(Arc::new(move |v: Value| {
                let n = reify(&s, &arg, &v)?;
                let c = home.join(&v.cxt)?;
                Ok(reflect(&s, &res, LNe::App(Box::new(ne.clone()), Box::new(n)), c))
            }))
        }
        LFormula::Bang(inner) => {
            let x = s.fresh();
            let at = cxt.int_only().include(&x, inner);
            let v = reflect(s, inner, LNe::AxInt(x.clone(), (**inner).clone()), at.clone());
            Kind::Bang(Box::new(Chain::EBang {
                x,
                inner: (**inner).clone(),
                ne,
                rest: Box::new(Chain::eta(at, Payload::Bang(v))),
            }))
        }
    };
    Value {
        cxt,
        formula: a.clone(),
        kind,
    }
}

pub fn reify(s: &Supply, a: &LFormula, v: &Value) -> Result<LNf> {
    if v.formula != *a {
        return Err(Error::bad_value(format!("reifying a value of {} at {}", v.formula, a)));
    }
    match (a, &v.kind) {
        (LFormula::Atom(_), Kind::Atom(n)) => Ok(n.clone()),
        (LFormula::Unit, Kind::Unit(m)) => {
            let nfs = t_map(m, &mut |_, p| match p {
                Payload::Unit => Ok(Payload::Nf(LNf::Unit)),
                _ => Err(Error::bad_value("unit chain without a unit payload")),
            })?;
            run_up(&nfs, a)
        }
        (LFormula::Tensor(l, r), Kind::Tensor(m)) => {
            let nfs = t_map(m, &mut |_, p| match p {
                Payload::Pair(x, y) => match (*x, *y) {
                    (Payload::Value(x), Payload::Value(y)) => Ok(Payload::Nf(LNf::Pair(
                        Box::new(reify(s, l, &x)?),
                        Box::new(reify(s, r, &y)?),
                    ))),
                    _ => Err(Error::bad_value("tensor payload without values")),
                },
                _ => Err(Error::bad_value("tensor chain without a pair payload")),
            })?;
            run_up(&nfs, a)
        }
        (LFormula::Bang(inner), Kind::Bang(m)) => {
            let nfs = t_map(m, &mut |_, p| match p {
                Payload::Bang(w) => Ok(Payload::Nf(LNf::Bang(Box::new(reify(s, inner, &w)?)))),
                _ => Err(Error::bad_value("bang chain without a bang payload")),
            })?;
            run_up(&nfs, a)
        }
        (LFormula::Lolli(arg, res), Kind::Lolli(_)) => {
            let x = s.fresh();
            let var = reflect(
                s,
                arg,
                LNe::Ax(x.clone(), (**arg).clone()),
                Ctx::lin1(&v.cxt.int, &x, arg),
            );
            let body = reify(s, res, &apply(v, var)?)?;
            Ok(LNf::Lam(x, Box::new(body)))
        }
        _ => Err(Error::bad_value("value shape does not match its formula")),
    }
}

/// Reflects every hypothesis of the sequent.
pub fn fresh(s: &Supply, seq: &LSequent) -> Env {
    let mut env = BTreeMap::new();
    let int: Zone = seq.int.iter().cloned().collect();
    for (x, f) in &seq.int {
        let at = Ctx {
            int: [(x.clone(), f.clone())].into(),
            lin: Zone::new(),
        };
        env.insert(x.clone(), reflect(s, f, LNe::AxInt(x.clone(), f.clone()), at));
    }
    for (x, f) in &seq.lin {
        let at = Ctx::lin1(&int, x, f);
        env.insert(x.clone(), reflect(s, f, LNe::Ax(x.clone(), f.clone()), at));
    }
    Env(env)
}

/// Normalizes; binders of the result are canonically named.
pub fn nbe(t: &Term) -> Result<LNf> {
    let seq = typecheck(t)?;
    let s = Supply::new();
    let v = eval(t, &fresh(&s, &seq))?;
    Ok(canonical_nf(&reify(&s, &seq.succ, &v)?))
}

/// As [`nbe`], with the context given explicitly in any order. It must
/// list exactly the hypotheses of `t`.
pub fn nbe_in(cxt: &[(Name, LFormula)], int: &[(Name, LFormula)], t: &Term) -> Result<LNf> {
    let seq = typecheck(t)?;
    let given = |zone: &[(Name, LFormula)]| zone.iter().cloned().collect::<Zone>();
    let want = Ctx::of_sequent(&seq);
    if given(cxt) != want.lin || given(int) != want.int || cxt.len() != want.lin.len() {
        return Err(Error::EnvMismatch(format!(
            "the given context does not match `{}`",
            seq
        )));
    }
    nbe(t)
}

/// Renaming action on values: every name, bound or free, goes through the
/// bijective completion of `r`, and hom values are conjugated by it.
pub fn rename_value(r: &Renaming, v: &Value) -> Result<Value> {
    if let Some(n) = v.cxt.int.keys().find(|n| !r.covers(n)) {
        return Err(Error::NameNotCovered(n.to_string()));
    }
    if let Some((_, to)) = r.pairs().find(|(_, to)| v.cxt.lin.contains_key(*to)) {
        return Err(Error::InvalidRenaming(format!("`{}` is a linear hypothesis", to)));
    }
    Ok(permute_value(&r.complete(), v))
}

/// Gives every name bound inside `v` a fresh replacement. Hom values are
/// wrapped so that their results are freshened as well.
pub fn freshen_value(s: &Supply, v: &Value) -> Value {
    let kind = match &v.kind {
        Kind::Atom(n) => Kind::Atom(n.clone()),
        Kind::Unit(m) => Kind::Unit(Box::new(freshen_chain(s, m))),
        Kind::Tensor(m) => Kind::Tensor(Box::new(freshen_chain(s, m))),
        Kind::Bang(m) => Kind::Bang(Box::new(freshen_chain(s, m))),
        Kind::Lolli(h) => {
            let (h, s) = (h.clone(), s.clone());
            Kind::Lolli(Arc::new(move |x| Ok(freshen_value(&s, &h(x)?))))
        }
    };
    Value {
        cxt: v.cxt.clone(),
        formula: v.formula.clone(),
        kind,
    }
}

fn swap_to_fresh(s: &Supply, bound: &[&Name]) -> (Vec<Name>, Permutation) {
    let fresh: Vec<Name> = bound.iter().map(|_| s.fresh()).collect();
    let r = Renaming::new(bound.iter().map(|b| (*b).clone()).zip(fresh.iter().cloned()))
        .expect("distinct binders and fresh names");
    (fresh, r.complete())
}

fn freshen_chain(s: &Supply, m: &Chain) -> Chain {
    match m {
        Chain::Eta { cxt, payload } => Chain::Eta {
            cxt: cxt.clone(),
            payload: freshen_payload(s, payload),
        },
        Chain::EUnit { ne, rest } => Chain::EUnit {
            ne: ne.clone(),
            rest: Box::new(freshen_chain(s, rest)),
        },
        Chain::ETensor {
            x,
            y,
            left,
            right,
            ne,
            rest,
        } => {
            let (f, p) = swap_to_fresh(s, &[x, y]);
            Chain::ETensor {
                x: f[0].clone(),
                y: f[1].clone(),
                left: left.clone(),
                right: right.clone(),
                ne: ne.clone(),
                rest: Box::new(permute_chain(&p, &freshen_chain(s, rest))),
            }
        }
        Chain::EBang { x, inner, ne, rest } => {
            let (f, p) = swap_to_fresh(s, &[x]);
            Chain::EBang {
                x: f[0].clone(),
                inner: inner.clone(),
                ne: ne.clone(),
                rest: Box::new(permute_chain(&p, &freshen_chain(s, rest))),
            }
        }
    }
}

fn freshen_payload(s: &Supply, x: &Payload) -> Payload {
    match x {
        Payload::Unit | Payload::Nf(_) => x.clone(),
        Payload::Pair(a, b) => Payload::Pair(Box::new(freshen_payload(s, a)), Box::new(freshen_payload(s, b))),
        Payload::Value(v) => Payload::Value(freshen_value(s, v)),
        Payload::Bang(v) => Payload::Bang(freshen_value(s, v)),
        Payload::Env(e) => Payload::Env(Env(e.0.iter().map(|(n, v)| (n.clone(), freshen_value(s, v))).collect())),
        Payload::Monadic(m) => Payload::Monadic(Box::new(freshen_chain(s, m))),
    }
}

fn permute_value(p: &Permutation, v: &Value) -> Value {
    let kind = match &v.kind {
        Kind::Atom(n) => Kind::Atom(permute_nf(p, n)),
        Kind::Unit(m) => Kind::Unit(Box::new(permute_chain(p, m))),
        Kind::Tensor(m) => Kind::Tensor(Box::new(permute_chain(p, m))),
        Kind::Bang(m) => Kind::Bang(Box::new(permute_chain(p, m))),
        Kind::Lolli(h) => {
            let (h, p) = (h.clone(), p.clone());
            Kind::Lolli(Arc::new(move |x| {
                let inv = p.inverse();
                Ok(permute_value(&p, &h(permute_value(&inv, &x))?))
            }))
        }
    };
    Value {
        cxt: v.cxt.permute(p),
        formula: v.formula.clone(),
        kind,
    }
}

pub fn permute_chain(p: &Permutation, m: &Chain) -> Chain {
    let rest = |r: &Chain| Box::new(permute_chain(p, r));
    match m {
        Chain::Eta { cxt, payload } => Chain::Eta {
            cxt: cxt.permute(p),
            payload: permute_payload(p, payload),
        },
        Chain::EUnit { ne, rest: r } => Chain::EUnit {
            ne: permute_ne(p, ne),
            rest: rest(r),
        },
        Chain::ETensor {
            x,
            y,
            left,
            right,
            ne,
            rest: r,
        } => Chain::ETensor {
            x: p.apply(x),
            y: p.apply(y),
            left: left.clone(),
            right: right.clone(),
            ne: permute_ne(p, ne),
            rest: rest(r),
        },
        Chain::EBang {
            x,
            inner,
            ne,
            rest: r,
        } => Chain::EBang {
            x: p.apply(x),
            inner: inner.clone(),
            ne: permute_ne(p, ne),
            rest: rest(r),
        },
    }
}

fn permute_payload(p: &Permutation, x: &Payload) -> Payload {
    match x {
        Payload::Unit => Payload::Unit,
        Payload::Pair(a, b) => Payload::Pair(
            Box::new(permute_payload(p, a)),
            Box::new(permute_payload(p, b)),
        ),
        Payload::Value(v) => Payload::Value(permute_value(p, v)),
        Payload::Bang(v) => Payload::Bang(permute_value(p, v)),
        Payload::Nf(n) => Payload::Nf(permute_nf(p, n)),
        Payload::Env(e) => Payload::Env(Env(e
            .0
            .iter()
            .map(|(n, v)| (p.apply(n), permute_value(p, v)))
            .collect())),
        Payload::Monadic(m) => Payload::Monadic(Box::new(permute_chain(p, m))),
    }
}

#[cfg(test)]
mod tests {
    use super::super::text::{parse_term, print_nf};
    use super::super::{emb_up, typecheck_nf};
    use super::*;

    fn norm(s: &str) -> String {
        print_nf(&nbe(&parse_term(s).unwrap()).unwrap())
    }

    fn n(s: &str) -> Name {
        Name::new(s)
    }

    #[test]
    fn atomic_hypothesis() {
        assert_eq!(norm("ax x:p"), "sw (ax x:p)");
    }

    #[test]
    fn banged_hypothesis() {
        assert_eq!(
            norm("ax y:!p"),
            "letb[x0] (ax y:!p) (bang (sw (axint x0:p)))"
        );
    }

    #[test]
    fn reassociation_example() {
        let t = "lett[a,b] (ax z:(p*q)) (app (lett[c,d] (pair (ax a:p) (ax b:q)) \
                 (lam e. (pair (ax c:p) (pair (ax d:q) (ax e:r))))) (ax w:r))";
        assert_eq!(
            norm(t),
            "lett[x0,x1] (ax z:(p*q)) (pair (sw (ax x0:p)) (pair (sw (ax x1:q)) (sw (ax w:r))))"
        );
    }

    #[test]
    fn exchange_is_free() {
        // Both orders of a pair of hypotheses of the same formula.
        assert_eq!(norm("pair (ax a:p) (ax b:p)"), "pair (sw (ax a:p)) (sw (ax b:p))");
        assert_eq!(norm("pair (ax b:p) (ax a:p)"), "pair (sw (ax b:p)) (sw (ax a:p))");
        assert_eq!(
            norm("lam f. (lam x. (app (ax f:(p -o q)) (ax x:p)))"),
            "lam x0. (lam x1. (sw (app (ax x0:(p -o q)) (sw (ax x1:p)))))"
        );
    }

    #[test]
    fn bang_beta_and_eta() {
        assert_eq!(
            norm("letb[u] (bang (axint a:p)) (pair (axint u:p) (axint u:p))"),
            "pair (sw (axint a:p)) (sw (axint a:p))"
        );
        assert_eq!(
            norm("letb[u] (ax y:!(p*q)) (bang (axint u:(p*q)))"),
            norm("ax y:!(p*q)")
        );
        assert_eq!(
            norm("ax y:!(p*q)"),
            "letb[x0] (ax y:!(p*q)) (bang (lett[x1,x2] (axint x0:(p*q)) (pair (sw (ax x1:p)) (sw (ax x2:q)))))"
        );
    }

    #[test]
    fn strength_under_two_bang_links() {
        let s = Supply::new();
        let y = LFormula::bang(LFormula::atom("p"));
        let z = LFormula::bang(LFormula::atom("q"));
        let v1 = reflect(&s, &y, LNe::Ax(n("y"), y.clone()), Ctx::lin1(&Zone::new(), &n("y"), &y));
        let chain = match v1.kind {
            Kind::Bang(m) => *m,
            _ => unreachable!(),
        };
        // Stack a second link in front of the first one's end.
        let inner = match chain.rest().unwrap() {
            Chain::Eta { cxt, .. } => cxt.clone(),
            _ => unreachable!(),
        };
        let second = reflect(&s, &z, LNe::Ax(n("z"), z.clone()), Ctx::lin1(&inner.int, &n("z"), &z));
        let both = chain.with_rest(match second.kind {
            Kind::Bang(m) => *m,
            _ => unreachable!(),
        });
        assert_eq!(both.len(), 2);
        let carried = reflect(&s, &LFormula::atom("r"), LNe::Ax(n("c"), LFormula::atom("r")), Ctx::lin1(&Zone::new(), &n("c"), &LFormula::atom("r")));
        let out = lmst(&carried.cxt, Payload::Value(carried.clone()), &both).unwrap();
        out.validate().unwrap();
        let end = out.rest().unwrap().rest().unwrap();
        match end {
            Chain::Eta {
                cxt,
                payload: Payload::Pair(x, _),
            } => {
                assert_eq!(cxt.int.len(), 2);
                match &**x {
                    Payload::Value(v) => {
                        assert_eq!(v.cxt.int.len(), 2, "both inclusions applied");
                        assert_eq!(v.cxt.lin, carried.cxt.lin);
                    }
                    _ => panic!("carried payload lost"),
                }
            }
            _ => panic!("expected the end of the chain"),
        }
        assert_eq!(out.cxt().unwrap(), both.cxt().unwrap().join(&carried.cxt).unwrap());
    }

    fn probe(v: &Value) -> LNf {
        let s = Supply::new();
        canonical_nf(&reify(&s, &v.formula, v).unwrap())
    }

    #[test]
    fn renaming_is_functorial_on_values() {
        let t = parse_term("lam x. (app (axint f:(p -o q)) (ax x:p))").unwrap();
        let seq = typecheck(&t).unwrap();
        let s = Supply::new();
        let v = eval(&t, &fresh(&s, &seq)).unwrap();
        let id = Renaming::identity([n("f")]);
        assert_eq!(probe(&rename_value(&id, &v).unwrap()), probe(&v));
        let r1 = Renaming::new([(n("f"), n("g"))]).unwrap();
        let r2 = Renaming::new([(n("g"), n("h"))]).unwrap();
        let both = rename_value(&r2, &rename_value(&r1, &v).unwrap()).unwrap();
        let once = rename_value(&r2.after(&r1).unwrap(), &v).unwrap();
        assert_eq!(probe(&both), probe(&once));
        assert_eq!(
            print_nf(&probe(&once)),
            "lam x0. (sw (app (axint h:(p -o q)) (sw (ax x0:p))))"
        );
        assert!(matches!(
            rename_value(&r2, &v),
            Err(Error::NameNotCovered(_))
        ));
    }

    #[test]
    fn values_are_well_formed() {
        let t = parse_term("letb[u] (ax y:!(p*q)) (lett[a,b] (axint u:(p*q)) (pair (ax b:q) (ax a:p)))").unwrap();
        let seq = typecheck(&t).unwrap();
        let s = Supply::new();
        let env = fresh(&s, &seq);
        for v in env.0.values() {
            v.validate().unwrap();
        }
        let v = eval(&t, &env).unwrap();
        v.validate().unwrap();
        assert_eq!(v.cxt, Ctx::of_sequent(&seq));
    }

    #[test]
    fn reading_a_hypothesis_twice_keeps_bound_names_apart() {
        let t = parse_term("letb[u] (ax y:!(p*q)) (pair (axint u:(p*q)) (axint u:(p*q)))").unwrap();
        let n = nbe(&t).unwrap();
        assert_eq!(typecheck_nf(&n).unwrap(), typecheck(&t).unwrap());
        assert_eq!(nbe(&emb_up(&n)).unwrap(), n);
    }

    #[test]
    fn environment_must_be_linear() {
        let t = parse_term("ax x:p").unwrap();
        let s = Supply::new();
        let seq = typecheck(&parse_term("pair (ax x:p) (ax y:p)").unwrap()).unwrap();
        assert!(matches!(eval(&t, &fresh(&s, &seq)), Err(Error::EnvMismatch(_))));
    }
}
