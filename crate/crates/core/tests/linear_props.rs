use std::collections::BTreeSet;

use lambek_nbe::dill;
use lambek_nbe::gen::{GenConfig, SplitMix64};
use lambek_nbe::linear::{canonical_nf, free_names_nf, nf_alpha_eq, permute, permute_nf, LNe, LNf};
use lambek_nbe::mill;
use lambek_nbe::names::{Name, Renaming};
use proptest::prelude::*;

fn names_of(zone: &[(Name, lambek_nbe::linear::LFormula)]) -> BTreeSet<Name> {
    zone.iter().map(|(n, _)| n.clone()).collect()
}

/// Every `bang` has an empty linear zone; the continuation of a `letb`
/// sees at most one intuitionistic name more than the whole.
fn bang_shapes(n: &LNf) -> bool {
    match n {
        LNf::Bang(b) => dill::typecheck_nf(b).map(|s| s.lin.is_empty()).unwrap_or(false) && bang_shapes(b),
        LNf::LetB(x, s, c) => {
            let mut allowed = names_of(&dill::typecheck_nf(n).unwrap().int);
            allowed.insert(x.clone());
            names_of(&dill::typecheck_nf(c).unwrap().int).is_subset(&allowed) && ne_shapes(s) && bang_shapes(c)
        }
        LNf::Sw(e) => ne_shapes(e),
        LNf::Lam(_, b) => bang_shapes(b),
        LNf::Pair(a, b) => bang_shapes(a) && bang_shapes(b),
        LNf::LetU(s, c) | LNf::LetT(_, _, s, c) => ne_shapes(s) && bang_shapes(c),
        LNf::Unit => true,
    }
}

fn ne_shapes(e: &LNe) -> bool {
    match e {
        LNe::App(f, a) => ne_shapes(f) && bang_shapes(a),
        LNe::Ax(..) | LNe::AxInt(..) => true,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn mill_output_uses_exactly_the_input_hypotheses(seed in any::<u64>()) {
        let t = mill::gen_term(&GenConfig::new(seed, 24)).unwrap();
        let seq = mill::typecheck(&t).unwrap();
        let n = mill::nbe(&t).unwrap();
        prop_assert_eq!(mill::typecheck_nf(&n).unwrap(), seq.clone());
        prop_assert_eq!(free_names_nf(&n), names_of(&seq.lin));
    }

    #[test]
    fn mill_context_order_is_irrelevant(seed in any::<u64>()) {
        let t = mill::gen_term(&GenConfig::new(seed, 24)).unwrap();
        let seq = mill::typecheck(&t).unwrap();
        let mut shuffled = seq.lin.clone();
        SplitMix64::new(seed).shuffle(&mut shuffled);
        prop_assert_eq!(mill::nbe_in(&shuffled, &t).unwrap(), mill::nbe(&t).unwrap());
    }

    #[test]
    fn mill_renaming_hypotheses_renames_the_normal_form(seed in any::<u64>()) {
        let t = mill::gen_term(&GenConfig::new(seed, 24)).unwrap();
        let seq = mill::typecheck(&t).unwrap();
        let mut targets: Vec<Name> = names_of(&seq.lin).into_iter().collect();
        SplitMix64::new(seed ^ 1).shuffle(&mut targets);
        let r = Renaming::new(seq.lin.iter().map(|(x, _)| x.clone()).zip(targets)).unwrap();
        let p = r.complete();
        let direct = mill::nbe(&permute(&p, &t)).unwrap();
        let after = canonical_nf(&permute_nf(&p, &mill::nbe(&t).unwrap()));
        prop_assert!(nf_alpha_eq(&direct, &after));
    }

    #[test]
    fn mill_normal_forms_are_fixed(seed in any::<u64>()) {
        let n = mill::gen_nf(&GenConfig::new(seed, 24)).unwrap();
        prop_assert!(nf_alpha_eq(&mill::nbe(&mill::emb(&n)).unwrap(), &n));
    }

    #[test]
    fn mill_idempotent(seed in any::<u64>()) {
        let t = mill::gen_term(&GenConfig::new(seed, 24)).unwrap();
        let n = mill::nbe(&t).unwrap();
        prop_assert_eq!(mill::nbe(&mill::emb(&n)).unwrap(), n);
    }

    #[test]
    fn mill_traces_without_argument_permutations_are_invisible(seed in any::<u64>()) {
        let cfg = GenConfig::new(seed, 24);
        let t = mill::gen_term(&cfg).unwrap();
        let trace = mill::gen_trace(&cfg, &t).unwrap();
        prop_assume!(trace.iter().all(|s| !s.rule.is_argument_permutation()));
        let u = mill::replay(&t, &trace).unwrap();
        prop_assert_eq!(mill::nbe(&u).unwrap(), mill::nbe(&t).unwrap());
    }

    #[test]
    fn dill_output_is_normal_at_the_input_sequent(seed in any::<u64>()) {
        let t = dill::gen_term(&GenConfig::new(seed, 24)).unwrap();
        let n = dill::nbe(&t).unwrap();
        let before = dill::typecheck(&t).unwrap();
        let after = dill::typecheck_nf(&n).unwrap();
        prop_assert_eq!(&after.lin, &before.lin);
        prop_assert_eq!(&after.succ, &before.succ);
        prop_assert!(names_of(&after.int).is_subset(&names_of(&before.int)));
        prop_assert!(bang_shapes(&n));
    }

    #[test]
    fn dill_normal_forms_are_fixed(seed in any::<u64>()) {
        let n = dill::gen_nf(&GenConfig::new(seed, 24)).unwrap();
        prop_assert!(nf_alpha_eq(&dill::nbe(&dill::emb(&n)).unwrap(), &n));
        prop_assert!(bang_shapes(&n));
    }

    #[test]
    fn dill_renaming_commutes_with_normalization(seed in any::<u64>()) {
        let t = dill::gen_term(&GenConfig::new(seed, 24)).unwrap();
        let seq = dill::typecheck(&t).unwrap();
        let r = Renaming::new(seq.int.iter().enumerate().map(|(i, (x, _))| (x.clone(), Name::new(&format!("k{}", i))))).unwrap();
        let left = dill::nbe(&dill::rename(&r, &t).unwrap()).unwrap();
        let right = dill::rename_nf(&r, &dill::nbe(&t).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn dill_traces_are_invisible(seed in any::<u64>()) {
        let cfg = GenConfig::new(seed, 24);
        let t = dill::gen_term(&cfg).unwrap();
        let trace = dill::gen_trace(&cfg, &t).unwrap();
        let u = dill::replay(&t, &trace).unwrap();
        prop_assert_eq!(dill::nbe(&u).unwrap(), dill::nbe(&t).unwrap());
    }
}
