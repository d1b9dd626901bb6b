//! The Kripke-model value domain.
//!
//! A value lives at a context (its `cxt`). Atoms denote normal forms,
//! `I` and `A*B` denote monadic values over the unit and pair payloads,
//! and the two implications denote functions that accept an argument at
//! any context. The monad is a chain of pending unit/tensor eliminations
//! on neutrals ending in a payload. Context splits are stored explicitly
//! and the monoidal isomorphisms are plain list concatenation.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::nf::{typecheck_ne, typecheck_nf, Ne, Nf};
use crate::syntax::{Context, Formula};

/// A hom value: maps an argument at `Δ` to a result at `Γ,Δ` (for `/`)
/// or `Δ,Γ` (for `\`), where `Γ` is the home context.
pub type HomFn = Arc<dyn Fn(SemValue) -> Result<SemValue> + Send + Sync>;

#[derive(Clone)]
pub struct SemValue {
    pub cxt: Context,
    pub formula: Formula,
    pub kind: ValueKind,
}

#[derive(Clone)]
pub enum ValueKind {
    Atom(Nf),
    Unit(Box<MonadicValue>),
    Tensor(Box<MonadicValue>),
    Over(HomFn),
    Under(HomFn),
}

#[derive(Clone, PartialEq)]
pub struct PairPayload {
    pub left_cxt: Context,
    pub right_cxt: Context,
    pub left: Payload,
    pub right: Payload,
}

/// What a monadic chain carries at its end.
#[derive(Clone, PartialEq)]
pub enum Payload {
    /// The unit of the Day tensor; lives at the empty context.
    Unit,
    Pair(Box<PairPayload>),
    Value(SemValue),
    Nf(Nf),
    Env(SemEnv),
    Monadic(Box<MonadicValue>),
}

#[derive(Clone, PartialEq)]
pub enum MonadicValue {
    Eta {
        cxt: Context,
        payload: Payload,
    },
    /// `ne : mid ⇓ I`; `rest` lives at `pre,post`.
    EUnit {
        pre: Context,
        mid: Context,
        post: Context,
        ne: Ne,
        rest: Box<MonadicValue>,
    },
    /// `ne : mid ⇓ left*right`; `rest` lives at `pre,left,right,post`.
    ETensor {
        pre: Context,
        mid: Context,
        post: Context,
        ne: Ne,
        left: Formula,
        right: Formula,
        rest: Box<MonadicValue>,
    },
}

/// Interpretation of a context: one value per formula, their contexts
/// concatenated give the home context.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SemEnv(pub Vec<SemValue>);

impl PartialEq for SemValue {
    /// Structural; hom values compare by identity.
    fn eq(&self, other: &SemValue) -> bool {
        self.cxt == other.cxt
            && self.formula == other.formula
            && match (&self.kind, &other.kind) {
                (ValueKind::Atom(a), ValueKind::Atom(b)) => a == b,
                (ValueKind::Unit(a), ValueKind::Unit(b)) => a == b,
                (ValueKind::Tensor(a), ValueKind::Tensor(b)) => a == b,
                (ValueKind::Over(f), ValueKind::Over(g)) => Arc::ptr_eq(f, g),
                (ValueKind::Under(f), ValueKind::Under(g)) => Arc::ptr_eq(f, g),
                _ => false,
            }
    }
}

impl fmt::Debug for SemValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {} = ", self.cxt, self.formula)?;
        match &self.kind {
            ValueKind::Atom(n) => write!(f, "{}", n),
            ValueKind::Unit(m) | ValueKind::Tensor(m) => write!(f, "{:?}", m),
            ValueKind::Over(_) | ValueKind::Under(_) => f.write_str("<fn>"),
        }
    }
}

impl fmt::Debug for Payload {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Payload::Unit => f.write_str("()"),
            Payload::Pair(p) => write!(f, "({:?}, {:?})", p.left, p.right),
            Payload::Value(v) => write!(f, "{:?}", v),
            Payload::Nf(n) => write!(f, "{}", n),
            Payload::Env(e) => write!(f, "{:?}", e.0),
            Payload::Monadic(m) => write!(f, "{:?}", m),
        }
    }
}

impl fmt::Debug for MonadicValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MonadicValue::Eta { payload, .. } => write!(f, "eta {:?}", payload),
            MonadicValue::EUnit { pre, ne, rest, .. } => {
                write!(f, "letu[{}] ({}) {:?}", pre.len(), ne, rest)
            }
            MonadicValue::ETensor { pre, ne, rest, .. } => {
                write!(f, "lett[{}] ({}) {:?}", pre.len(), ne, rest)
            }
        }
    }
}

impl SemValue {
    pub fn atom(cxt: Context, formula: Formula, nf: Nf) -> SemValue {
        SemValue {
            cxt,
            formula,
            kind: ValueKind::Atom(nf),
        }
    }

    /// Checks that the tag, payload and contexts agree; hom values are
    /// not inspected.
    pub fn validate(&self) -> Result<()> {
        match (&self.formula, &self.kind) {
            (Formula::Atom(_), ValueKind::Atom(n)) => {
                let s = typecheck_nf(n)?;
                if s.antecedent != self.cxt || s.succedent != self.formula {
                    return Err(Error::bad_value(format!(
                        "atom value `{}` does not inhabit {} at [{}]",
                        n, self.formula, self.cxt
                    )));
                }
                Ok(())
            }
            (Formula::Unit, ValueKind::Unit(m)) | (Formula::Tensor(..), ValueKind::Tensor(m)) => {
                if m.cxt() != self.cxt {
                    return Err(Error::bad_value("monadic value at the wrong context"));
                }
                m.validate()?;
                m.leaf_payload_check(&mut |cxt, p| match (&self.formula, p) {
                    (Formula::Unit, Payload::Unit) if cxt.is_empty() => Ok(()),
                    (Formula::Tensor(a, b), Payload::Pair(pp)) => match (&pp.left, &pp.right) {
                        (Payload::Value(x), Payload::Value(y))
                            if x.formula == **a && y.formula == **b =>
                        {
                            Ok(())
                        }
                        _ => Err(Error::bad_value("tensor payload components mistagged")),
                    },
                    _ => Err(Error::bad_value("payload does not match the formula tag")),
                })
            }
            (Formula::Over(..), ValueKind::Over(_)) | (Formula::Under(..), ValueKind::Under(_)) => {
                Ok(())
            }
            _ => Err(Error::bad_value(format!(
                "value tagged {} has the wrong shape",
                self.formula
            ))),
        }
    }
}

/// Applies a hom value to an argument at an arbitrary context.
pub fn apply(f: &SemValue, arg: SemValue) -> Result<SemValue> {
    match (&f.formula, &f.kind) {
        (Formula::Over(b, a), ValueKind::Over(h)) | (Formula::Under(a, b), ValueKind::Under(h)) => {
            if arg.formula != **a {
                return Err(Error::bad_value(format!(
                    "function on {} applied to a value of {}",
                    a, arg.formula
                )));
            }
            let expected = match f.kind {
                ValueKind::Over(_) => f.cxt.concat(&arg.cxt),
                _ => arg.cxt.concat(&f.cxt),
            };
            let out = h(arg)?;
            if out.cxt != expected || out.formula != **b {
                return Err(Error::bad_value(format!(
                    "function result at [{}] {}, expected [{}] {}",
                    out.cxt, out.formula, expected, b
                )));
            }
            Ok(out)
        }
        _ => Err(Error::bad_value(format!(
            "value of {} applied as a function",
            f.formula
        ))),
    }
}

impl Payload {
    /// Flattens nested pairs into the list of values they contain.
    pub fn flatten(self, out: &mut Vec<SemValue>) {
        match self {
            Payload::Unit => {}
            Payload::Value(v) => out.push(v),
            Payload::Env(e) => out.extend(e.0),
            Payload::Pair(p) => {
                let PairPayload { left, right, .. } = *p;
                left.flatten(out);
                right.flatten(out);
            }
            Payload::Nf(_) | Payload::Monadic(_) => {
                unreachable!("only environment-shaped payloads are flattened")
            }
        }
    }

    pub fn pair(left_cxt: Context, left: Payload, right_cxt: Context, right: Payload) -> Payload {
        Payload::Pair(Box::new(PairPayload {
            left_cxt,
            right_cxt,
            left,
            right,
        }))
    }

    fn check(&self, cxt: &Context) -> Result<()> {
        match self {
            Payload::Unit if cxt.is_empty() => Ok(()),
            Payload::Unit => Err(Error::bad_value("unit payload at a non-empty context")),
            Payload::Pair(p) => {
                if p.left_cxt.concat(&p.right_cxt) != *cxt {
                    return Err(Error::bad_value("pair split does not cover its context"));
                }
                p.left.check(&p.left_cxt)?;
                p.right.check(&p.right_cxt)
            }
            Payload::Value(v) if v.cxt == *cxt => v.validate(),
            Payload::Env(e) if e.cxt() == *cxt => e.0.iter().try_for_each(|v| v.validate()),
            Payload::Nf(n) => {
                if typecheck_nf(n)?.antecedent != *cxt {
                    return Err(Error::bad_value(format!(
                        "nf payload `{}` not at [{}]",
                        n, cxt
                    )));
                }
                Ok(())
            }
            Payload::Monadic(m) if m.cxt() == *cxt => m.validate(),
            _ => Err(Error::bad_value(format!("payload not at [{}]", cxt))),
        }
    }
}

impl SemEnv {
    pub fn empty() -> SemEnv {
        SemEnv(Vec::new())
    }

    pub fn cxt(&self) -> Context {
        self.0.iter().flat_map(|v| v.cxt.iter().cloned()).collect()
    }

    /// The interpreted context: one formula per entry.
    pub fn formulas(&self) -> Context {
        self.0.iter().map(|v| v.formula.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn split_at(&self, k: usize) -> (SemEnv, SemEnv) {
        let (a, b) = self.0.split_at(k);
        (SemEnv(a.to_vec()), SemEnv(b.to_vec()))
    }

    pub fn concat(mut self, other: SemEnv) -> SemEnv {
        self.0.extend(other.0);
        self
    }
}

impl MonadicValue {
    pub fn eta(cxt: Context, payload: Payload) -> MonadicValue {
        MonadicValue::Eta { cxt, payload }
    }

    /// The outer context.
    pub fn cxt(&self) -> Context {
        match self {
            MonadicValue::Eta { cxt, .. } => cxt.clone(),
            MonadicValue::EUnit { pre, mid, post, .. }
            | MonadicValue::ETensor { pre, mid, post, .. } => pre.concat(mid).concat(post),
        }
    }

    /// Number of links before the payload.
    pub fn chain_len(&self) -> usize {
        match self {
            MonadicValue::Eta { .. } => 0,
            MonadicValue::EUnit { rest, .. } | MonadicValue::ETensor { rest, .. } => {
                1 + rest.chain_len()
            }
        }
    }

    /// Context accounting at every depth.
    pub fn validate(&self) -> Result<()> {
        match self {
            MonadicValue::Eta { cxt, payload } => payload.check(cxt),
            MonadicValue::EUnit {
                pre,
                mid,
                post,
                ne,
                rest,
            } => {
                let s = typecheck_ne(ne)?;
                if s.antecedent != *mid || s.succedent != Formula::Unit {
                    return Err(Error::bad_value(format!(
                        "unit link neutral `{}` is not at [{}] |- I",
                        ne, mid
                    )));
                }
                if rest.cxt() != pre.concat(post) {
                    return Err(Error::bad_value("unit link residual context mismatch"));
                }
                rest.validate()
            }
            MonadicValue::ETensor {
                pre,
                mid,
                post,
                ne,
                left,
                right,
                rest,
            } => {
                let s = typecheck_ne(ne)?;
                if s.antecedent != *mid
                    || s.succedent != Formula::tensor(left.clone(), right.clone())
                {
                    return Err(Error::bad_value(format!(
                        "tensor link neutral `{}` is not at [{}] |- {}*{}",
                        ne, mid, left, right
                    )));
                }
                let mut inner = pre.clone();
                inner.push(left.clone());
                inner.push(right.clone());
                if rest.cxt() != inner.concat(post) {
                    return Err(Error::bad_value("tensor link residual context mismatch"));
                }
                rest.validate()
            }
        }
    }

    fn leaf_payload_check(
        &self,
        f: &mut impl FnMut(&Context, &Payload) -> Result<()>,
    ) -> Result<()> {
        match self {
            MonadicValue::Eta { cxt, payload } => f(cxt, payload),
            MonadicValue::EUnit { rest, .. } | MonadicValue::ETensor { rest, .. } => {
                rest.leaf_payload_check(f)
            }
        }
    }

    fn with_rest(&self, rest: MonadicValue, pre: Context, post: Context) -> MonadicValue {
        match self {
            MonadicValue::Eta { .. } => unreachable!("links only"),
            MonadicValue::EUnit { mid, ne, .. } => MonadicValue::EUnit {
                pre,
                mid: mid.clone(),
                post,
                ne: ne.clone(),
                rest: Box::new(rest),
            },
            MonadicValue::ETensor {
                mid,
                ne,
                left,
                right,
                ..
            } => MonadicValue::ETensor {
                pre,
                mid: mid.clone(),
                post,
                ne: ne.clone(),
                left: left.clone(),
                right: right.clone(),
                rest: Box::new(rest),
            },
        }
    }

    fn link_parts(&self) -> Option<(&Context, &Context, &MonadicValue)> {
        match self {
            MonadicValue::Eta { .. } => None,
            MonadicValue::EUnit { pre, post, rest, .. }
            | MonadicValue::ETensor { pre, post, rest, .. } => Some((pre, post, rest)),
        }
    }
}

/// Functorial action: rewrites the payload, keeping the chain.
pub fn t_map(
    mv: &MonadicValue,
    f: &mut impl FnMut(&Context, Payload) -> Result<Payload>,
) -> Result<MonadicValue> {
    match mv {
        MonadicValue::Eta { cxt, payload } => Ok(MonadicValue::Eta {
            cxt: cxt.clone(),
            payload: f(cxt, payload.clone())?,
        }),
        _ => {
            let (pre, post, rest) = mv.link_parts().expect("link");
            Ok(mv.with_rest(t_map(rest, f)?, pre.clone(), post.clone()))
        }
    }
}

/// Multiplication: splices the inner chain in place of the payload.
pub fn t_join(mv: &MonadicValue) -> Result<MonadicValue> {
    match mv {
        MonadicValue::Eta {
            cxt,
            payload: Payload::Monadic(inner),
        } => {
            if inner.cxt() != *cxt {
                return Err(Error::bad_value("inner chain at the wrong context"));
            }
            Ok((**inner).clone())
        }
        MonadicValue::Eta { .. } => Err(Error::bad_value("join of a non-monadic payload")),
        _ => {
            let (pre, post, rest) = mv.link_parts().expect("link");
            Ok(mv.with_rest(t_join(rest)?, pre.clone(), post.clone()))
        }
    }
}

/// Left monoidal strength: `x` at `x_cxt` is carried under every link,
/// each link's prefix grows by `x_cxt`.
pub fn lmst(x_cxt: &Context, x: Payload, mv: &MonadicValue) -> MonadicValue {
    match mv {
        MonadicValue::Eta { cxt, payload } => MonadicValue::Eta {
            cxt: x_cxt.concat(cxt),
            payload: Payload::pair(x_cxt.clone(), x, cxt.clone(), payload.clone()),
        },
        _ => {
            let (pre, post, rest) = mv.link_parts().expect("link");
            mv.with_rest(lmst(x_cxt, x, rest), x_cxt.concat(pre), post.clone())
        }
    }
}

/// Right monoidal strength: each link's suffix grows by `x_cxt`.
pub fn rmst(mv: &MonadicValue, x_cxt: &Context, x: Payload) -> MonadicValue {
    match mv {
        MonadicValue::Eta { cxt, payload } => MonadicValue::Eta {
            cxt: cxt.concat(x_cxt),
            payload: Payload::pair(cxt.clone(), payload.clone(), x_cxt.clone(), x),
        },
        _ => {
            let (pre, post, rest) = mv.link_parts().expect("link");
            mv.with_rest(rmst(rest, x_cxt, x), pre.clone(), post.concat(x_cxt))
        }
    }
}

fn value_payload(p: &Payload) -> Result<&SemValue> {
    match p {
        Payload::Value(v) => Ok(v),
        _ => Err(Error::bad_value("expected a value payload")),
    }
}

/// Right closed strength for `/`: applies the function at the end of the
/// chain; the argument's context is appended to every link's suffix.
pub fn rcst_over(mv: &MonadicValue, arg: &SemValue) -> Result<MonadicValue> {
    match mv {
        MonadicValue::Eta { cxt, payload } => {
            let v = apply(value_payload(payload)?, arg.clone())?;
            Ok(MonadicValue::Eta {
                cxt: cxt.concat(&arg.cxt),
                payload: Payload::Value(v),
            })
        }
        _ => {
            let (pre, post, rest) = mv.link_parts().expect("link");
            Ok(mv.with_rest(rcst_over(rest, arg)?, pre.clone(), post.concat(&arg.cxt)))
        }
    }
}

/// Right closed strength for `\`: the argument's context is prepended to
/// every link's prefix.
pub fn rcst_under(mv: &MonadicValue, arg: &SemValue) -> Result<MonadicValue> {
    match mv {
        MonadicValue::Eta { cxt, payload } => {
            let v = apply(value_payload(payload)?, arg.clone())?;
            Ok(MonadicValue::Eta {
                cxt: arg.cxt.concat(cxt),
                payload: Payload::Value(v),
            })
        }
        _ => {
            let (pre, post, rest) = mv.link_parts().expect("link");
            Ok(mv.with_rest(rcst_under(rest, arg)?, arg.cxt.concat(pre), post.clone()))
        }
    }
}

/// Left closed strength for `/`: applies a plain function to the value at
/// the end of a chain; the function's home context is prepended.
pub fn lcst_over(f: &SemValue, mv: &MonadicValue) -> Result<MonadicValue> {
    match mv {
        MonadicValue::Eta { cxt: _, payload } => {
            let v = apply(f, value_payload(payload)?.clone())?;
            Ok(MonadicValue::Eta {
                cxt: v.cxt.clone(),
                payload: Payload::Value(v),
            })
        }
        _ => {
            let (pre, post, rest) = mv.link_parts().expect("link");
            Ok(mv.with_rest(lcst_over(f, rest)?, f.cxt.concat(pre), post.clone()))
        }
    }
}

/// Left closed strength for `\`: the function's home context is appended.
pub fn lcst_under(f: &SemValue, mv: &MonadicValue) -> Result<MonadicValue> {
    match mv {
        MonadicValue::Eta { cxt: _, payload } => {
            let v = apply(f, value_payload(payload)?.clone())?;
            Ok(MonadicValue::Eta {
                cxt: v.cxt.clone(),
                payload: Payload::Value(v),
            })
        }
        _ => {
            let (pre, post, rest) = mv.link_parts().expect("link");
            Ok(mv.with_rest(lcst_under(f, rest)?, pre.clone(), post.concat(&f.cxt)))
        }
    }
}

/// Algebra on normal forms: replays the chain as eliminations. Only
/// defined at goals that are not implications unless the chain is empty.
pub fn run_up(mv: &MonadicValue, goal: &Formula) -> Result<Nf> {
    match mv {
        MonadicValue::Eta {
            payload: Payload::Nf(n),
            ..
        } => Ok(n.clone()),
        MonadicValue::Eta { .. } => Err(Error::bad_value("run on a non-normal-form payload")),
        _ if !goal.is_non_negative() => Err(Error::GammaPlusViolation {
            path: vec![],
            succedent: goal.to_string(),
        }),
        MonadicValue::EUnit { pre, ne, rest, .. } => {
            Ok(Nf::e_unit(pre.len(), ne.clone(), run_up(rest, goal)?))
        }
        MonadicValue::ETensor { pre, ne, rest, .. } => {
            Ok(Nf::e_tensor(pre.len(), ne.clone(), run_up(rest, goal)?))
        }
    }
}

/// The algebra at an interpreted formula; payloads are values of `a`.
pub fn run(a: &Formula, mv: &MonadicValue) -> Result<SemValue> {
    let cxt = mv.cxt();
    match a {
        Formula::Atom(_) => {
            let nfs = t_map(mv, &mut |_, p| match p {
                Payload::Value(SemValue {
                    kind: ValueKind::Atom(n),
                    ..
                }) => Ok(Payload::Nf(n)),
                _ => Err(Error::bad_value("atom run over a non-atomic payload")),
            })?;
            Ok(SemValue::atom(cxt, a.clone(), run_up(&nfs, a)?))
        }
        Formula::Unit | Formula::Tensor(..) => {
            let nested = t_map(mv, &mut |_, p| match p {
                Payload::Value(SemValue {
                    kind: ValueKind::Unit(m) | ValueKind::Tensor(m),
                    ..
                }) => Ok(Payload::Monadic(m)),
                _ => Err(Error::bad_value("monadic run over a non-monadic payload")),
            })?;
            let joined = t_join(&nested)?;
            let kind = if *a == Formula::Unit {
                ValueKind::Unit(Box::new(joined))
            } else {
                ValueKind::Tensor(Box::new(joined))
            };
            Ok(SemValue {
                cxt,
                formula: a.clone(),
                kind,
            })
        }
        Formula::Over(b, _) => {
            let (b, mv) = ((**b).clone(), mv.clone());
            Ok(SemValue {
                cxt,
                formula: a.clone(),
                kind: ValueKind::Over(Arc::new(move |x| run(&b, &rcst_over(&mv, &x)?))),
            })
        }
        Formula::Under(_, b) => {
            let (b, mv) = ((**b).clone(), mv.clone());
            Ok(SemValue {
                cxt,
                formula: a.clone(),
                kind: ValueKind::Under(Arc::new(move |x| run(&b, &rcst_under(&mv, &x)?))),
            })
        }
    }
}
