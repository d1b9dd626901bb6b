//! Multiplicative intuitionistic linear logic: one implication `-o`,
//! contexts are multisets of named hypotheses, and exchange is free.
//!
//! Everything runs on the shared engine in [`crate::linear`]; this module
//! only rules out the exponential constructs and prints sequents without
//! an intuitionistic zone.

use crate::error::{Error, Result};
use crate::gen::{Calculus, GenConfig};
pub use crate::linear::rewrite::Meeting;
use crate::linear::rewrite::{self, RuleSet, Step};
use crate::linear::{self, gen, sem, text};
use crate::names::Name;
use crate::text::Dialect;

pub use crate::linear::{LFormula as MFormula, LNe as MNe, LNf as MNf, LSequent as MSequent, Term as MTerm};

fn linear_only(t: &MTerm) -> Result<()> {
    if t.uses_exponential() {
        return Err(Error::ill_formed(&[], "`!` and intuitionistic hypotheses are not part of MILL"));
    }
    Ok(())
}

pub fn typecheck(t: &MTerm) -> Result<MSequent> {
    linear_only(t)?;
    linear::typecheck(t)
}

pub fn typecheck_nf(n: &MNf) -> Result<MSequent> {
    typecheck(&emb(n))
}

/// `Δ |- A`.
pub fn sequent_string(s: &MSequent) -> String {
    s.linear_string()
}

pub fn nbe(t: &MTerm) -> Result<MNf> {
    linear_only(t)?;
    sem::nbe(t)
}

/// Normalizes against the context listed in the given order. The order is
/// checked against the term and otherwise ignored.
pub fn nbe_in(cxt: &[(Name, MFormula)], t: &MTerm) -> Result<MNf> {
    linear_only(t)?;
    sem::nbe_in(cxt, &[], t)
}

pub fn emb(n: &MNf) -> MTerm {
    linear::emb_up(n)
}

pub fn parse_formula(src: &str) -> Result<MFormula> {
    text::parse_formula_in(src, Dialect::Linear)
}

pub fn parse_term(src: &str) -> Result<MTerm> {
    text::parse_term_in(src, Dialect::Linear)
}

pub fn parse_nf(src: &str) -> Result<MNf> {
    text::parse_nf_in(src, Dialect::Linear)
}

pub use crate::linear::text::{print_formula, print_nf, print_term};

fn config(cfg: &GenConfig) -> GenConfig {
    GenConfig {
        calculus: Calculus::Mill,
        ..cfg.clone()
    }
}

/// A random term; `cfg.calculus` is ignored.
pub fn gen_term(cfg: &GenConfig) -> Result<MTerm> {
    gen::gen_term(&config(cfg))
}

pub fn gen_nf(cfg: &GenConfig) -> Result<MNf> {
    gen::gen_nf(&config(cfg))
}

pub fn gen_trace(cfg: &GenConfig, t: &MTerm) -> Result<Vec<Step>> {
    gen::gen_trace(&config(cfg), t)
}

pub fn applicable_steps(t: &MTerm, eta_cap: usize) -> Result<Vec<Step>> {
    linear_only(t)?;
    rewrite::applicable_steps(t, RuleSet::Linear, eta_cap)
}

pub fn apply_step(t: &MTerm, s: &Step) -> Result<MTerm> {
    linear_only(t)?;
    rewrite::apply_step(t, RuleSet::Linear, s)
}

pub fn replay(t: &MTerm, trace: &[Step]) -> Result<MTerm> {
    linear_only(t)?;
    rewrite::replay(t, RuleSet::Linear, trace)
}

/// Bounded search for a common rewrite of `t` and `u`, visiting at most
/// [`crate::rewrite::DEFAULT_MAX_STATES`] terms.
pub fn equiv(t: &MTerm, u: &MTerm, node_bound: usize, step_bound: usize) -> Result<Meeting> {
    linear_only(t)?;
    linear_only(u)?;
    rewrite::equiv_oracle(t, u, RuleSet::Linear, node_bound, step_bound, crate::rewrite::DEFAULT_MAX_STATES)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linear::nf_alpha_eq;
    use crate::names::Renaming;

    fn t(s: &str) -> MTerm {
        parse_term(s).unwrap()
    }

    #[test]
    fn typing_examples() {
        assert_eq!(sequent_string(&typecheck(&t("ax x:p")).unwrap()), "x:p |- p");
        assert_eq!(sequent_string(&typecheck(&t("lam x. (ax x:p)")).unwrap()), "|- p -o p");
        assert!(matches!(
            typecheck(&t("lam x. (pair (ax x:p) (ax x:p))")),
            Err(Error::NonLinearUse { .. })
        ));
    }

    #[test]
    fn exponentials_are_rejected() {
        assert!(parse_term("axint x:p").is_err());
        assert!(parse_term("ax x:!p").is_err());
        assert!(parse_formula("!p").is_err());
        let smuggled = crate::linear::text::parse_term("bang unit").unwrap();
        assert!(typecheck(&smuggled).is_err());
        assert!(nbe(&smuggled).is_err());
    }

    #[test]
    fn atomic_axiom_is_switched() {
        assert_eq!(print_nf(&nbe(&t("ax x:p")).unwrap()), "sw (ax x:p)");
    }

    #[test]
    fn embedding_examples() {
        for src in ["sw (ax x:p)", "unit", "lam x0. (sw (app (ax f:(p -o q)) (sw (ax x0:p))))"] {
            let n = parse_nf(src).unwrap();
            let e = emb(&n);
            assert_eq!(typecheck(&e).unwrap(), typecheck_nf(&n).unwrap());
            assert_eq!(print_nf(&nbe(&e).unwrap()), src);
        }
    }

    #[test]
    fn hypothesis_order_is_irrelevant() {
        let src = t("pair (app (ax f:(p -o q)) (ax a:p)) (ax b:p)");
        let p = parse_formula("p").unwrap();
        let fq = parse_formula("p -o q").unwrap();
        let one = [(Name::new("a"), p.clone()), (Name::new("b"), p.clone()), (Name::new("f"), fq.clone())];
        let two = [(Name::new("f"), fq), (Name::new("b"), p.clone()), (Name::new("a"), p)];
        assert_eq!(nbe_in(&one, &src).unwrap(), nbe_in(&two, &src).unwrap());
    }

    #[test]
    fn swapping_names_commutes_with_normalization() {
        let src = t("lett[c,d] (ax z:(p*p)) (pair (ax d:p) (pair (ax c:p) (ax w:p)))");
        let swap = Renaming::new([(Name::new("z"), Name::new("w")), (Name::new("w"), Name::new("z"))]).unwrap();
        let renamed = linear::rename_free(&swap, &src);
        let direct = nbe(&renamed).unwrap();
        let after = linear::canonical_nf(&linear::permute_nf(&swap.complete(), &nbe(&src).unwrap()));
        assert!(nf_alpha_eq(&direct, &after));
    }
}
