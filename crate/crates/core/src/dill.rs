//! Dual intuitionistic linear logic: sequents `Γ ; Δ |- A` with an
//! intuitionistic zone that can be reused or dropped, a linear zone, and
//! the `!` modality moving between them.
//!
//! Values of the model live at a pair of zones and carry an action of
//! renamings of the intuitionistic zone. The third kind of chain link
//! opens a `!` and extends the intuitionistic zone of everything after it.

use crate::error::Result;
use crate::gen::{Calculus, GenConfig};
pub use crate::linear::rewrite::Meeting;
use crate::linear::rewrite::{self, RuleSet, Step};
use crate::linear::{self, gen, sem};
use crate::names::{Name, Renaming, Supply};

pub use crate::linear::sem::{
    include_payload, include_value, lmst, rmst, run, Chain as DChain, Ctx, Env as DEnv, Kind, Payload,
    Value as DValue,
};
pub use crate::linear::text::{parse_formula, parse_ne, parse_nf, parse_term, print_formula, print_ne, print_nf, print_term};
pub use crate::linear::{LFormula as DFormula, LNe as DNe, LNf as DNf, LSequent as DSequent, Term as DTerm};

pub fn typecheck(t: &DTerm) -> Result<DSequent> {
    linear::typecheck(t)
}

pub fn typecheck_nf(n: &DNf) -> Result<DSequent> {
    linear::typecheck_nf(n)
}

pub fn emb(n: &DNf) -> DTerm {
    linear::emb_up(n)
}

/// On terms: renames intuitionistic hypotheses. `r` must cover all of them.
pub fn rename(r: &Renaming, t: &DTerm) -> Result<DTerm> {
    linear::rename(r, t)
}

pub fn rename_nf(r: &Renaming, n: &DNf) -> Result<DNf> {
    linear::rename_nf(r, n)
}

pub fn rename_value(r: &Renaming, v: &DValue) -> Result<DValue> {
    sem::rename_value(r, v)
}

/// The semantic environment reflecting every hypothesis of `seq`.
pub fn fresh_env(s: &Supply, seq: &DSequent) -> DEnv {
    sem::fresh(s, seq)
}

pub fn eval(t: &DTerm, env: &DEnv) -> Result<DValue> {
    sem::eval(t, env)
}

pub fn reflect(s: &Supply, a: &DFormula, ne: DNe, cxt: Ctx) -> DValue {
    sem::reflect(s, a, ne, cxt)
}

pub fn reify(s: &Supply, a: &DFormula, v: &DValue) -> Result<DNf> {
    sem::reify(s, a, v)
}

pub fn nbe(t: &DTerm) -> Result<DNf> {
    sem::nbe(t)
}

/// Normalizes against explicitly listed zones, in any order.
pub fn nbe_in(int: &[(Name, DFormula)], lin: &[(Name, DFormula)], t: &DTerm) -> Result<DNf> {
    sem::nbe_in(lin, int, t)
}

fn config(cfg: &GenConfig) -> GenConfig {
    GenConfig {
        calculus: Calculus::Dill,
        ..cfg.clone()
    }
}

/// A random term; `cfg.calculus` is ignored.
pub fn gen_term(cfg: &GenConfig) -> Result<DTerm> {
    gen::gen_term(&config(cfg))
}

pub fn gen_nf(cfg: &GenConfig) -> Result<DNf> {
    gen::gen_nf(&config(cfg))
}

pub fn gen_trace(cfg: &GenConfig, t: &DTerm) -> Result<Vec<Step>> {
    gen::gen_trace(&config(cfg), t)
}

pub fn applicable_steps(t: &DTerm, eta_cap: usize) -> Result<Vec<Step>> {
    rewrite::applicable_steps(t, RuleSet::Exponential, eta_cap)
}

pub fn apply_step(t: &DTerm, s: &Step) -> Result<DTerm> {
    rewrite::apply_step(t, RuleSet::Exponential, s)
}

pub fn replay(t: &DTerm, trace: &[Step]) -> Result<DTerm> {
    rewrite::replay(t, RuleSet::Exponential, trace)
}

/// Bounded search for a common rewrite of `t` and `u`, visiting at most
/// [`crate::rewrite::DEFAULT_MAX_STATES`] terms.
pub fn equiv(t: &DTerm, u: &DTerm, node_bound: usize, step_bound: usize) -> Result<Meeting> {
    rewrite::equiv_oracle(t, u, RuleSet::Exponential, node_bound, step_bound, crate::rewrite::DEFAULT_MAX_STATES)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn n(s: &str) -> Name {
        Name::new(s)
    }

    fn f(s: &str) -> DFormula {
        parse_formula(s).unwrap()
    }

    fn t(s: &str) -> DTerm {
        parse_term(s).unwrap()
    }

    fn two_entry_env(s: &Supply) -> DEnv {
        let seq = typecheck(&t("pair (axint a:p) (axint b:q)")).unwrap();
        fresh_env(s, &seq)
    }

    #[test]
    fn sequents_show_both_zones() {
        let seq = typecheck(&t("letb[u] (ax y:!p) (pair (axint u:p) (axint a:q))")).unwrap();
        assert_eq!(seq.to_string(), "a:q ; y:!p |- p*q");
    }

    #[test]
    fn intuitionistic_axiom_reads_its_entry() {
        let s = Supply::new();
        let env = two_entry_env(&s);
        let v = eval(&t("axint b:q"), &env).unwrap();
        assert!(v == env.0[&n("b")]);
    }

    #[test]
    fn bang_wraps_its_body_in_a_trivial_chain() {
        let s = Supply::new();
        let env = two_entry_env(&s);
        let v = eval(&t("bang (axint a:p)"), &env).unwrap();
        match &v.kind {
            Kind::Bang(m) => match &**m {
                DChain::Eta {
                    payload: Payload::Bang(w),
                    cxt,
                } => {
                    assert!(*w == env.0[&n("a")]);
                    assert!(cxt.lin.is_empty());
                }
                other => panic!("{:?}", other),
            },
            _ => panic!("not a bang value"),
        }
    }

    #[test]
    fn reflecting_a_banged_hypothesis() {
        let s = Supply::new();
        let seq = typecheck(&t("ax y:!p")).unwrap();
        let cxt = Ctx::of_sequent(&seq);
        let v = reflect(&s, &f("!p"), parse_ne("ax y:!p").unwrap(), cxt);
        match &v.kind {
            Kind::Bang(m) => match &**m {
                DChain::EBang { x, inner, ne, rest } => {
                    assert_eq!(print_ne(ne), "ax y:!p");
                    assert_eq!(*inner, f("p"));
                    match &**rest {
                        DChain::Eta {
                            payload: Payload::Bang(w),
                            cxt,
                        } => {
                            assert!(cxt.lin.is_empty() && cxt.int.contains_key(x));
                            assert!(matches!(&w.kind, Kind::Atom(DNf::Sw(e)) if **e == DNe::AxInt(x.clone(), f("p"))));
                        }
                        other => panic!("{:?}", other),
                    }
                }
                other => panic!("{:?}", other),
            },
            _ => panic!("not a bang value"),
        }
    }

    #[test]
    fn normal_forms_of_hypotheses() {
        assert_eq!(print_nf(&nbe(&t("ax y:!p")).unwrap()), "letb[x0] (ax y:!p) (bang (sw (axint x0:p)))");
        assert_eq!(print_nf(&nbe(&t("ax y:p")).unwrap()), "sw (ax y:p)");
    }

    #[test]
    fn strength_moves_its_argument_along_the_inclusion() {
        let s = Supply::new();
        let v = reflect(&s, &f("!p"), parse_ne("ax y:!p").unwrap(), Ctx::of_sequent(&typecheck(&t("ax y:!p")).unwrap()));
        let chain = match v.kind {
            Kind::Bang(m) => *m,
            _ => unreachable!(),
        };
        let arg_seq = typecheck(&t("pair (axint a:q) (ax z:r)")).unwrap();
        let arg = fresh_env(&s, &arg_seq).0[&n("z")].clone();
        let out = lmst(&arg.cxt.clone(), Payload::Value(arg.clone()), &chain).unwrap();
        out.validate().unwrap();
        let (bound, end) = match &out {
            DChain::EBang { x, rest, .. } => (x.clone(), rest),
            other => panic!("{:?}", other),
        };
        match &**end {
            DChain::Eta {
                payload: Payload::Pair(moved, _),
                ..
            } => match &**moved {
                Payload::Value(w) => {
                    assert!(w.cxt.int.contains_key(&bound));
                    assert!(*w == include_value(&arg, &bound, &f("p")));
                }
                other => panic!("{:?}", other),
            },
            other => panic!("{:?}", other),
        }
    }

    #[test]
    fn renaming_is_functorial() {
        let s = Supply::new();
        let env = two_entry_env(&s);
        let v = eval(&t("pair (axint a:p) (axint b:q)"), &env).unwrap();
        let id = Renaming::identity([n("a"), n("b")]);
        assert!(rename_value(&id, &v).unwrap() == v);
        let r1 = Renaming::new([(n("a"), n("c")), (n("b"), n("d"))]).unwrap();
        let r2 = Renaming::new([(n("c"), n("e")), (n("d"), n("a"))]).unwrap();
        let both = rename_value(&r2.after(&r1).unwrap(), &v).unwrap();
        let stepwise = rename_value(&r2, &rename_value(&r1, &v).unwrap()).unwrap();
        assert!(both == stepwise);
        let partial = Renaming::new([(n("a"), n("c"))]).unwrap();
        assert!(matches!(rename_value(&partial, &v), Err(Error::NameNotCovered(_))));
    }

    #[test]
    fn renaming_an_intuitionistic_axiom() {
        let r = Renaming::new([(n("a"), n("b"))]).unwrap();
        assert_eq!(print_term(&rename(&r, &t("axint a:p")).unwrap()), "axint b:p");
        let id = Renaming::identity([n("a")]);
        assert_eq!(rename(&id, &t("axint a:p")).unwrap(), t("axint a:p"));
    }

    #[test]
    fn renaming_commutes_with_normalization() {
        let src = t("letb[u] (ax y:!(p*q)) (pair (axint u:(p*q)) (app (axint g:(p -o r)) (axint a:p)))");
        let r = Renaming::new([(n("g"), n("h")), (n("a"), n("b"))]).unwrap();
        let left = nbe(&rename(&r, &src).unwrap()).unwrap();
        let right = rename_nf(&r, &nbe(&src).unwrap()).unwrap();
        assert_eq!(left, right);
    }
}
