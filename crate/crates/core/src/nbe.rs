//! Evaluation into the model, reflection of neutrals, reification of
//! values, and the normalization function.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::nf::{Ne, Nf};
use crate::sem::{
    apply, lmst, rmst, run, run_up, t_map, MonadicValue, Payload, SemEnv, SemValue, ValueKind,
};
use crate::syntax::{fold_typed, Context, Derivation, Env, Formula, Sequent};

/// A derivation with every node's conclusion attached, shared so that
/// hom closures can capture subterms cheaply.
pub struct Typed {
    pub node: Node,
    pub seq: Sequent,
}

pub enum Node {
    Ax,
    IOver(Arc<Typed>),
    IUnder(Arc<Typed>),
    EOver(Arc<Typed>, Arc<Typed>),
    EUnder(Arc<Typed>, Arc<Typed>),
    IUnit,
    EUnit(usize, Arc<Typed>, Arc<Typed>),
    ITensor(Arc<Typed>, Arc<Typed>),
    ETensor(usize, Arc<Typed>, Arc<Typed>),
}

pub fn annotate(t: &Derivation) -> Result<Arc<Typed>> {
    let (_, typed) = fold_typed(t, &mut |d, _, seq, kids: Vec<Arc<Typed>>| {
        let mut k = kids.into_iter();
        let mut next = || k.next().expect("child");
        let node = match d {
            Derivation::Ax(_) => Node::Ax,
            Derivation::IUnit => Node::IUnit,
            Derivation::IOver(_) => Node::IOver(next()),
            Derivation::IUnder(_) => Node::IUnder(next()),
            Derivation::EOver(..) => Node::EOver(next(), next()),
            Derivation::EUnder(..) => Node::EUnder(next(), next()),
            Derivation::ITensor(..) => Node::ITensor(next(), next()),
            Derivation::EUnit(at, ..) => Node::EUnit(*at, next(), next()),
            Derivation::ETensor(at, ..) => Node::ETensor(*at, next(), next()),
        };
        Arc::new(Typed {
            node,
            seq: seq.clone(),
        })
    })?;
    Ok(typed)
}

/// Evaluates `t` in an environment interpreting its antecedent.
pub fn eval(t: &Derivation, env: SemEnv) -> Result<SemValue> {
    eval_typed(&annotate(t)?, env)
}

pub fn eval_typed(t: &Arc<Typed>, env: SemEnv) -> Result<SemValue> {
    if env.formulas() != t.seq.antecedent {
        return Err(Error::EnvMismatch(format!(
            "environment interprets `{}` but the derivation needs `{}`",
            env.formulas(),
            t.seq.antecedent
        )));
    }
    let succ = t.seq.succedent.clone();
    let len = |u: &Typed| u.seq.antecedent.len();
    match &t.node {
        Node::Ax => Ok(env.0.into_iter().next().expect("singleton environment")),
        Node::IOver(body) => {
            let (body, home) = (body.clone(), env.clone());
            Ok(SemValue {
                cxt: env.cxt(),
                formula: succ,
                kind: ValueKind::Over(Arc::new(move |x| {
                    let mut e = home.clone();
                    e.0.push(x);
                    eval_typed(&body, e)
                })),
            })
        }
        Node::IUnder(body) => {
            let (body, home) = (body.clone(), env.clone());
            Ok(SemValue {
                cxt: env.cxt(),
                formula: succ,
                kind: ValueKind::Under(Arc::new(move |x| {
                    eval_typed(&body, SemEnv(vec![x]).concat(home.clone()))
                })),
            })
        }
        Node::EOver(f, a) => {
            let (ef, ea) = env.split_at(len(f));
            apply(&eval_typed(f, ef)?, eval_typed(a, ea)?)
        }
        Node::EUnder(a, f) => {
            let (ea, ef) = env.split_at(len(a));
            apply(&eval_typed(f, ef)?, eval_typed(a, ea)?)
        }
        Node::IUnit => Ok(SemValue {
            cxt: Context::new(),
            formula: succ,
            kind: ValueKind::Unit(Box::new(MonadicValue::eta(Context::new(), Payload::Unit))),
        }),
        Node::ITensor(l, r) => {
            let (el, er) = env.split_at(len(l));
            let vl = eval_typed(l, el)?;
            let vr = eval_typed(r, er)?;
            let cxt = vl.cxt.concat(&vr.cxt);
            let payload = Payload::pair(
                vl.cxt.clone(),
                Payload::Value(vl),
                vr.cxt.clone(),
                Payload::Value(vr),
            );
            Ok(SemValue {
                cxt: cxt.clone(),
                formula: succ,
                kind: ValueKind::Tensor(Box::new(MonadicValue::eta(cxt, payload))),
            })
        }
        Node::EUnit(at, s, u) | Node::ETensor(at, s, u) => {
            let (d0, rest) = env.split_at(*at);
            let (g, d1) = rest.split_at(len(s));
            let scrutinee = match eval_typed(s, g)?.kind {
                ValueKind::Unit(m) | ValueKind::Tensor(m) => *m,
                _ => return Err(Error::bad_value("eliminated value is not monadic")),
            };
            let left = lmst(&d0.cxt(), Payload::Env(d0), &scrutinee);
            let both = rmst(&left, &d1.cxt(), Payload::Env(d1));
            let mapped = t_map(&both, &mut |_, payload| {
                let mut entries = Vec::new();
                payload.flatten(&mut entries);
                Ok(Payload::Value(eval_typed(u, SemEnv(entries))?))
            })?;
            run(&succ, &mapped)
        }
    }
}

/// Evaluates every item of `sigma`, each over its slice of `env`.
pub fn eval_env(sigma: &Env, env: SemEnv) -> Result<SemEnv> {
    if env.formulas() != sigma.source() {
        return Err(Error::EnvMismatch(format!(
            "environment interprets `{}` but the substitution starts from `{}`",
            env.formulas(),
            sigma.source()
        )));
    }
    let mut rest = env;
    let mut out = Vec::with_capacity(sigma.len());
    for (item, split) in sigma.items().iter().zip(sigma.source_splits()) {
        let (here, tail) = rest.split_at(split.len());
        out.push(eval(item, here)?);
        rest = tail;
    }
    Ok(SemEnv(out))
}

/// Turns a neutral `ne : cxt ⇓ a` into a value.
pub fn reflect(a: &Formula, ne: Ne, cxt: Context) -> SemValue {
    let kind = match a {
        Formula::Atom(_) => ValueKind::Atom(Nf::sw(ne)),
        Formula::Over(b, arg) => {
            let (b, arg, home, ne) = ((**b).clone(), (**arg).clone(), cxt.clone(), ne);
            ValueKind::Over(Arc::new(move |x: SemValue| {
                let n = reify(&arg, &x)?;
                Ok(reflect(&b, Ne::e_over(ne.clone(), n), home.concat(&x.cxt)))
            }))
        }
        Formula::Under(arg, b) => {
            let (b, arg, home, ne) = ((**b).clone(), (**arg).clone(), cxt.clone(), ne);
            ValueKind::Under(Arc::new(move |x: SemValue| {
                let n = reify(&arg, &x)?;
                Ok(reflect(&b, Ne::e_under(n, ne.clone()), x.cxt.concat(&home)))
            }))
        }
        Formula::Unit => ValueKind::Unit(Box::new(MonadicValue::EUnit {
            pre: Context::new(),
            mid: cxt.clone(),
            post: Context::new(),
            ne,
            rest: Box::new(MonadicValue::eta(Context::new(), Payload::Unit)),
        })),
        Formula::Tensor(l, r) => {
            let (l, r) = ((**l).clone(), (**r).clone());
            let lv = reflect(&l, Ne::ax(l.clone()), Context::singleton(l.clone()));
            let rv = reflect(&r, Ne::ax(r.clone()), Context::singleton(r.clone()));
            let payload = Payload::pair(
                lv.cxt.clone(),
                Payload::Value(lv),
                rv.cxt.clone(),
                Payload::Value(rv),
            );
            ValueKind::Tensor(Box::new(MonadicValue::ETensor {
                pre: Context::new(),
                mid: cxt.clone(),
                post: Context::new(),
                ne,
                left: l.clone(),
                right: r.clone(),
                rest: Box::new(MonadicValue::eta(Context::from(vec![l, r]), payload)),
            }))
        }
    };
    SemValue {
        cxt,
        formula: a.clone(),
        kind,
    }
}

/// Reflection of the single hypothesis `a`.
pub fn reflect_ax(a: &Formula) -> SemValue {
    reflect(a, Ne::ax(a.clone()), Context::singleton(a.clone()))
}

/// Reads a value of `a` back as a normal form at the value's context.
pub fn reify(a: &Formula, v: &SemValue) -> Result<Nf> {
    if v.formula != *a {
        return Err(Error::bad_value(format!(
            "reifying a value of {} at {}",
            v.formula, a
        )));
    }
    match (a, &v.kind) {
        (Formula::Atom(_), ValueKind::Atom(n)) => Ok(n.clone()),
        (Formula::Over(b, arg), ValueKind::Over(_)) => {
            let out = apply(v, reflect_ax(arg))?;
            Ok(Nf::i_over(reify(b, &out)?))
        }
        (Formula::Under(arg, b), ValueKind::Under(_)) => {
            let out = apply(v, reflect_ax(arg))?;
            Ok(Nf::i_under(reify(b, &out)?))
        }
        (Formula::Unit, ValueKind::Unit(mv)) => {
            let nfs = t_map(mv, &mut |_, _| Ok(Payload::Nf(Nf::IUnit)))?;
            run_up(&nfs, a)
        }
        (Formula::Tensor(l, r), ValueKind::Tensor(mv)) => {
            let nfs = t_map(mv, &mut |_, payload| match payload {
                Payload::Pair(p) => match (&p.left, &p.right) {
                    (Payload::Value(x), Payload::Value(y)) => {
                        Ok(Payload::Nf(Nf::i_tensor(reify(l, x)?, reify(r, y)?)))
                    }
                    _ => Err(Error::bad_value("tensor payload is not a pair of values")),
                },
                _ => Err(Error::bad_value("tensor payload is not a pair")),
            })?;
            run_up(&nfs, a)
        }
        _ => Err(Error::bad_value(format!("value tagged {} has the wrong shape", a))),
    }
}

/// The generic environment: every hypothesis reflected as an axiom.
pub fn fresh(g: &Context) -> SemEnv {
    SemEnv(g.iter().map(reflect_ax).collect())
}

pub fn nbe(t: &Derivation) -> Result<Nf> {
    let typed = annotate(t)?;
    let v = eval_typed(&typed, fresh(&typed.seq.antecedent))?;
    reify(&typed.seq.succedent, &v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nf::{emb_up, typecheck_nf};
    use crate::syntax::typecheck;
    use crate::text::{parse_derivation, print_nf};

    const EXAMPLE: &str = "lett[0] (ax (p*q)) (appr (lett[0] (pair (ax p) (ax q)) \
                           (lamr (pair (ax p) (pair (ax q) (ax r))))) (ax r))";
    const EXAMPLE_NF: &str =
        "lett[0] (ax (p*q)) (pair (sw (ax p)) (pair (sw (ax q)) (sw (ax r))))";

    fn p() -> Formula {
        Formula::atom("p")
    }
    fn q() -> Formula {
        Formula::atom("q")
    }

    #[test]
    fn worked_example() {
        let t = parse_derivation(EXAMPLE).unwrap();
        let n = nbe(&t).unwrap();
        assert_eq!(print_nf(&n), EXAMPLE_NF);
        assert_eq!(typecheck_nf(&n).unwrap(), typecheck(&t).unwrap());
    }

    #[test]
    fn worked_example_value() {
        let t = parse_derivation(EXAMPLE).unwrap();
        let g = typecheck(&t).unwrap().antecedent;
        let v = eval(&t, fresh(&g)).unwrap();
        v.validate().unwrap();
        match &v.kind {
            ValueKind::Tensor(m) if matches!(**m, MonadicValue::ETensor { .. }) => {
                let MonadicValue::ETensor { pre, ne, rest, .. } = &**m else {
                    unreachable!()
                };
                assert!(pre.is_empty());
                assert_eq!(*ne, Ne::ax(Formula::tensor(p(), q())));
                assert!(matches!(**rest, MonadicValue::Eta { .. }));
            }
            _ => panic!("unexpected {:?}", v),
        }
    }

    #[test]
    fn atomic_axiom() {
        assert_eq!(nbe(&Derivation::ax(p())).unwrap(), Nf::sw(Ne::ax(p())));
    }

    #[test]
    fn implication_axiom_is_eta_expanded() {
        let f = Formula::over(q(), p());
        let expected = Nf::i_over(Nf::sw(Ne::e_over(Ne::ax(f.clone()), Nf::sw(Ne::ax(p())))));
        assert_eq!(nbe(&Derivation::ax(f.clone())).unwrap(), expected);
        assert_eq!(reify(&f, &reflect_ax(&f)).unwrap(), expected);
    }

    #[test]
    fn eval_axiom_projects() {
        let a = reflect_ax(&p());
        let v = eval(&Derivation::ax(p()), SemEnv(vec![a.clone()])).unwrap();
        assert_eq!(v, a);
    }

    #[test]
    fn eval_unit_is_eta() {
        let v = eval(&Derivation::IUnit, SemEnv::empty()).unwrap();
        match &v.kind {
            ValueKind::Unit(m) => assert!(matches!(
                **m,
                MonadicValue::Eta {
                    payload: Payload::Unit,
                    ..
                }
            )),
            _ => panic!("unexpected {:?}", v),
        }
        assert_eq!(reify(&Formula::Unit, &v).unwrap(), Nf::IUnit);
    }

    #[test]
    fn eval_rejects_wrong_environment() {
        assert!(matches!(
            eval(&Derivation::ax(p()), fresh(&Context::singleton(q()))),
            Err(Error::EnvMismatch(_))
        ));
    }

    #[test]
    fn reflect_shapes() {
        let u = reflect_ax(&Formula::Unit);
        match &u.kind {
            ValueKind::Unit(m) if matches!(**m, MonadicValue::EUnit { .. }) => {
                let MonadicValue::EUnit { ne, rest, .. } = &**m else {
                    unreachable!()
                };
                assert_eq!(*ne, Ne::ax(Formula::Unit));
                assert!(matches!(
                    **rest,
                    MonadicValue::Eta {
                        payload: Payload::Unit,
                        ..
                    }
                ));
            }
            _ => panic!("unexpected {:?}", u),
        }
        let ab = Formula::tensor(p(), q());
        let t = reflect_ax(&ab);
        t.validate().unwrap();
        assert_eq!(
            reify(&ab, &t).unwrap(),
            Nf::e_tensor(
                0,
                Ne::ax(ab.clone()),
                Nf::i_tensor(Nf::sw(Ne::ax(p())), Nf::sw(Ne::ax(q())))
            )
        );
    }

    #[test]
    fn fresh_environments() {
        assert!(fresh(&Context::new()).is_empty());
        let e = fresh(&Context::singleton(p()));
        assert_eq!(e.0[0], SemValue::atom(Context::singleton(p()), p(), Nf::sw(Ne::ax(p()))));
    }

    #[test]
    fn eval_env_identity() {
        let g = Context::from(vec![p(), q()]);
        let out = eval_env(&Env::ids(&g), fresh(&g)).unwrap();
        assert_eq!(out, fresh(&g));
        assert!(eval_env(&Env::empty(), SemEnv::empty()).unwrap().is_empty());
    }

    #[test]
    fn unit_elimination_under_implication() {
        // letu[0] (ax I) (lamr (ax p)) : I ⊢ p/p  normalizes to lamr (letu[0] (ax I) (sw (ax p)))
        let t = Derivation::e_unit(
            0,
            Derivation::ax(Formula::Unit),
            Derivation::i_over(Derivation::ax(p())),
        );
        let n = nbe(&t).unwrap();
        assert_eq!(
            n,
            Nf::i_over(Nf::e_unit(0, Ne::ax(Formula::Unit), Nf::sw(Ne::ax(p()))))
        );
        assert_eq!(emb_up(&n), Derivation::i_over(t_inner()));
    }

    fn t_inner() -> Derivation {
        Derivation::e_unit(0, Derivation::ax(Formula::Unit), Derivation::ax(p()))
    }
}
