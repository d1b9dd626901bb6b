//! Equations of the commutative calculi as directed steps. The purely
//! linear calculus has the β/η rows and the permutations of the ordered
//! table with its two implications merged into one; the exponential
//! calculus has the β/η rows plus those of `!`, and no permutations.
//!
//! Scoping side conditions are not spelled out per rule: every rewrite is
//! re-typed, and a capture shows up as a repeated linear name or a changed
//! sequent. Only the intuitionistic zone may shrink, when a β step for `!`
//! discards its argument.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::names::{canonical_names, Name, Renaming};
use crate::rewrite::Direction;
use crate::syntax::{path_string, Path};

use super::{canonical, rename_free, substitute, typecheck, LFormula, LSequent, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    BetaLolli,
    BetaUnit,
    BetaTensor,
    BetaBang,
    EtaLolli,
    EtaUnit,
    EtaTensor,
    EtaBang,
    PermUnitLam,
    PermAppLetUL,
    PermAppLetUR,
    PermLetULetU,
    PermTensorLam,
    PermAppLetTL,
    PermAppLetTR,
    PermLetTLetT,
}

impl Rule {
    pub const ALL: [Rule; 16] = [
        Rule::BetaLolli,
        Rule::BetaUnit,
        Rule::BetaTensor,
        Rule::BetaBang,
        Rule::EtaLolli,
        Rule::EtaUnit,
        Rule::EtaTensor,
        Rule::EtaBang,
        Rule::PermUnitLam,
        Rule::PermAppLetUL,
        Rule::PermAppLetUR,
        Rule::PermLetULetU,
        Rule::PermTensorLam,
        Rule::PermAppLetTL,
        Rule::PermAppLetTR,
        Rule::PermLetTLetT,
    ];

    pub fn is_beta(self) -> bool {
        use Rule::*;
        matches!(self, BetaLolli | BetaUnit | BetaTensor | BetaBang)
    }

    pub fn is_eta(self) -> bool {
        use Rule::*;
        matches!(self, EtaLolli | EtaUnit | EtaTensor | EtaBang)
    }

    pub fn is_perm(self) -> bool {
        !self.is_beta() && !self.is_eta()
    }

    pub fn is_bang(self) -> bool {
        matches!(self, Rule::BetaBang | Rule::EtaBang)
    }

    /// Moves a positive eliminator out of the argument of an application.
    pub fn is_argument_permutation(self) -> bool {
        matches!(self, Rule::PermAppLetUR | Rule::PermAppLetTR)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self)
    }
}

impl FromStr for Rule {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Rule, String> {
        Rule::ALL
            .iter()
            .copied()
            .find(|r| r.to_string() == s)
            .ok_or_else(|| format!("unknown equation `{}`", s))
    }
}

/// Which rows are in force.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RuleSet {
    Linear,
    Exponential,
}

impl RuleSet {
    pub fn rules(self) -> Vec<Rule> {
        Rule::ALL
            .iter()
            .copied()
            .filter(|r| match self {
                RuleSet::Linear => !r.is_bang(),
                RuleSet::Exponential => !r.is_perm(),
            })
            .collect()
    }

    pub fn contains(self, r: Rule) -> bool {
        self.rules().contains(&r)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Step {
    pub path: Path,
    pub rule: Rule,
    pub direction: Direction,
    /// The redex a β expansion restores.
    pub witness: Option<Term>,
}

impl Step {
    pub fn new(path: Path, rule: Rule, direction: Direction) -> Step {
        Step {
            path,
            rule,
            direction,
            witness: None,
        }
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", path_string(&self.path), self.rule, self.direction)?;
        if let Some(w) = &self.witness {
            write!(f, " {}", super::text::print_term(w))?;
        }
        Ok(())
    }
}

impl FromStr for Step {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Step, String> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("expected PATH:EQ:DIR, found `{}`", s));
        }
        let path = if parts[0].is_empty() {
            vec![]
        } else {
            parts[0]
                .split('.')
                .map(|i| i.parse::<usize>().map_err(|e| format!("bad path `{}`: {}", parts[0], e)))
                .collect::<std::result::Result<Vec<_>, _>>()?
        };
        Ok(Step::new(path, parts[1].parse()?, parts[2].parse()?))
    }
}

type Local = std::result::Result<Term, &'static str>;

fn fresh_for(terms: &[&Term], k: usize) -> Vec<Name> {
    let mut used = std::collections::BTreeSet::new();
    for t in terms {
        t.all_names(&mut used);
    }
    canonical_names(&used).take(k).collect()
}

fn same_up_to_weakening(before: &LSequent, after: &LSequent) -> bool {
    before.lin == after.lin
        && before.succ == after.succ
        && after.int.iter().all(|e| before.int.contains(e))
}

fn rewrite_local(node: &Term, seq: &LSequent, rule: Rule, dir: Direction, cap: Option<usize>) -> Local {
    use Direction::*;
    use Rule::*;
    const NO: Local = Err("pattern does not match");
    let fits = |extra: usize| cap.is_none_or(|c| node.size() + extra <= c);
    let too_big: Local = Err("expansion exceeds the size cap");
    let b = |t: &Term| t.clone();
    let out = match (rule, dir, node) {
        (BetaLolli, LeftToRight, Term::App(f, u)) => match &**f {
            Term::Lam(x, t) => substitute(t, x, u),
            _ => return NO,
        },
        (BetaUnit, LeftToRight, Term::LetU(s, t)) if **s == Term::Unit => b(t),
        (BetaTensor, LeftToRight, Term::LetT(x, y, s, t)) => match &**s {
            Term::Pair(s1, s2) => {
                // Move the binders out of the way of both components first.
                let fresh = fresh_for(&[t, s1, s2], 2);
                let r = Renaming::new([(x.clone(), fresh[0].clone()), (y.clone(), fresh[1].clone())])
                    .map_err(|_| "binders coincide")?;
                let t = rename_free(&r, t);
                substitute(&substitute(&t, &fresh[0], s1), &fresh[1], s2)
            }
            _ => return NO,
        },
        (BetaBang, LeftToRight, Term::LetB(x, s, t)) => match &**s {
            Term::Bang(s) => substitute(t, x, s),
            _ => return NO,
        },
        (BetaLolli | BetaUnit | BetaTensor | BetaBang, RightToLeft, _) => {
            return Err("a beta expansion needs the redex as witness")
        }

        (EtaLolli, LeftToRight, Term::Lam(x, body)) => match &**body {
            Term::App(t, a) if matches!(&**a, Term::Ax(y, _) if y == x) && !t.mentions(x) => b(t),
            _ => return NO,
        },
        (EtaLolli, RightToLeft, _) => match &seq.succ {
            LFormula::Lolli(a, _) if fits(3) => {
                let x = &fresh_for(&[node], 1)[0];
                Term::lam(x, Term::app(node.clone(), Term::Ax(x.clone(), (**a).clone())))
            }
            LFormula::Lolli(..) => return too_big,
            _ => return NO,
        },
        (EtaUnit, LeftToRight, Term::LetU(s, t)) if **t == Term::Unit => b(s),
        (EtaUnit, RightToLeft, _) => match &seq.succ {
            LFormula::Unit if fits(2) => Term::letu(node.clone(), Term::Unit),
            LFormula::Unit => return too_big,
            _ => return NO,
        },
        (EtaTensor, LeftToRight, Term::LetT(x, y, s, t)) => match &**t {
            Term::Pair(l, r)
                if matches!(&**l, Term::Ax(n, _) if n == x)
                    && matches!(&**r, Term::Ax(n, _) if n == y) =>
            {
                b(s)
            }
            _ => return NO,
        },
        (EtaTensor, RightToLeft, _) => match &seq.succ {
            LFormula::Tensor(l, r) if fits(4) => {
                let v = fresh_for(&[node], 2);
                Term::lett(
                    &v[0],
                    &v[1],
                    node.clone(),
                    Term::pair(
                        Term::Ax(v[0].clone(), (**l).clone()),
                        Term::Ax(v[1].clone(), (**r).clone()),
                    ),
                )
            }
            LFormula::Tensor(..) => return too_big,
            _ => return NO,
        },
        (EtaBang, LeftToRight, Term::LetB(x, s, t)) => match &**t {
            Term::Bang(inner) if matches!(&**inner, Term::AxInt(n, _) if n == x) => b(s),
            _ => return NO,
        },
        (EtaBang, RightToLeft, _) => match &seq.succ {
            LFormula::Bang(a) if fits(3) => {
                let x = &fresh_for(&[node], 1)[0];
                Term::letb(x, node.clone(), Term::bang(Term::AxInt(x.clone(), (**a).clone())))
            }
            LFormula::Bang(..) => return too_big,
            _ => return NO,
        },

        (PermUnitLam, LeftToRight, Term::LetU(s, t)) => match &**t {
            Term::Lam(x, t) => Term::lam(x, Term::letu(b(s), b(t))),
            _ => return NO,
        },
        (PermUnitLam, RightToLeft, Term::Lam(x, body)) => match &**body {
            Term::LetU(s, t) => Term::letu(b(s), Term::lam(x, b(t))),
            _ => return NO,
        },
        (PermTensorLam, LeftToRight, Term::LetT(x, y, s, t)) => match &**t {
            Term::Lam(z, t) => Term::lam(z, Term::lett(x, y, b(s), b(t))),
            _ => return NO,
        },
        (PermTensorLam, RightToLeft, Term::Lam(z, body)) => match &**body {
            Term::LetT(x, y, s, t) => Term::lett(x, y, b(s), Term::lam(z, b(t))),
            _ => return NO,
        },
        (PermAppLetUL, LeftToRight, Term::App(f, u)) => match &**f {
            Term::LetU(s, t) => Term::letu(b(s), Term::app(b(t), b(u))),
            _ => return NO,
        },
        (PermAppLetUR, LeftToRight, Term::App(t, a)) => match &**a {
            Term::LetU(s, u) => Term::letu(b(s), Term::app(b(t), b(u))),
            _ => return NO,
        },
        (PermAppLetTL, LeftToRight, Term::App(f, u)) => match &**f {
            Term::LetT(x, y, s, t) => Term::lett(x, y, b(s), Term::app(b(t), b(u))),
            _ => return NO,
        },
        (PermAppLetTR, LeftToRight, Term::App(t, a)) => match &**a {
            Term::LetT(x, y, s, u) => Term::lett(x, y, b(s), Term::app(b(t), b(u))),
            _ => return NO,
        },
        (PermAppLetUL | PermAppLetUR, RightToLeft, Term::LetU(s, c)) => match &**c {
            Term::App(t, u) if rule == PermAppLetUL => Term::app(Term::letu(b(s), b(t)), b(u)),
            Term::App(t, u) => Term::app(b(t), Term::letu(b(s), b(u))),
            _ => return NO,
        },
        (PermAppLetTL | PermAppLetTR, RightToLeft, Term::LetT(x, y, s, c)) => match &**c {
            Term::App(t, u) if rule == PermAppLetTL => {
                Term::app(Term::lett(x, y, b(s), b(t)), b(u))
            }
            Term::App(t, u) => Term::app(b(t), Term::lett(x, y, b(s), b(u))),
            _ => return NO,
        },
        (PermLetULetU, LeftToRight, Term::LetU(s, t)) => match &**s {
            Term::LetU(s1, s2) => Term::letu(b(s1), Term::letu(b(s2), b(t))),
            _ => return NO,
        },
        (PermLetULetU, RightToLeft, Term::LetU(s1, inner)) => match &**inner {
            Term::LetU(s2, t) => Term::letu(Term::letu(b(s1), b(s2)), b(t)),
            _ => return NO,
        },
        (PermLetTLetT, LeftToRight, Term::LetT(x, y, s, t)) => match &**s {
            Term::LetT(a, c, s1, s2) if ![x, y].contains(&a) && ![x, y].contains(&c) => {
                Term::lett(a, c, b(s1), Term::lett(x, y, b(s2), b(t)))
            }
            _ => return NO,
        },
        (PermLetTLetT, RightToLeft, Term::LetT(a, c, s1, inner)) => match &**inner {
            Term::LetT(x, y, s2, t) if ![x, y].contains(&a) && ![x, y].contains(&c) => {
                Term::lett(x, y, Term::lett(a, c, b(s1), b(s2)), b(t))
            }
            _ => return NO,
        },
        _ => return NO,
    };
    match typecheck(&out) {
        Ok(s) if same_up_to_weakening(seq, &s) => Ok(out),
        _ => Err("rewrite changes the conclusion"),
    }
}

fn preorder(t: &Term, path: &mut Path, out: &mut Vec<Path>) {
    out.push(path.clone());
    for (i, c) in t.children().into_iter().enumerate() {
        path.push(i);
        preorder(c, path, out);
        path.pop();
    }
}

/// Applicable steps and their results, in preorder of paths, then rule
/// order, then direction. η expansions are listed only when the expanded
/// subterm has at most `eta_cap` nodes.
pub fn successors(t: &Term, rules: RuleSet, eta_cap: usize) -> Result<Vec<(Step, Term)>> {
    typecheck(t)?;
    let mut paths = Vec::new();
    preorder(t, &mut vec![], &mut paths);
    let mut out = Vec::new();
    for path in paths {
        let node = t.subterm(&path).expect("enumerated path");
        let seq = typecheck(node)?;
        for rule in rules.rules() {
            for dir in [Direction::LeftToRight, Direction::RightToLeft] {
                if let Ok(new) = rewrite_local(node, &seq, rule, dir, Some(eta_cap)) {
                    let whole = t.replace_at(&path, new).expect("enumerated path");
                    out.push((Step::new(path.clone(), rule, dir), whole));
                }
            }
        }
    }
    Ok(out)
}

pub fn applicable_steps(t: &Term, rules: RuleSet, eta_cap: usize) -> Result<Vec<Step>> {
    Ok(successors(t, rules, eta_cap)?.into_iter().map(|(s, _)| s).collect())
}

pub fn apply_step(t: &Term, rules: RuleSet, s: &Step) -> Result<Term> {
    let fail = |reason: &str| Error::StepNotApplicable {
        path: s.path.clone(),
        eq: s.rule.to_string(),
        dir: s.direction.to_string(),
        reason: reason.to_string(),
    };
    if !rules.contains(s.rule) {
        return Err(fail("equation not available in this calculus"));
    }
    let node = t.subterm(&s.path).ok_or_else(|| fail("no subterm at this path"))?;
    let seq = typecheck(node)?;
    let new = match (&s.witness, s.direction) {
        (Some(w), Direction::RightToLeft) if s.rule.is_beta() => {
            let wseq = typecheck(w).map_err(|_| fail("witness is ill-formed"))?;
            match rewrite_local(w, &wseq, s.rule, Direction::LeftToRight, None) {
                Ok(r) if r == *node => w.clone(),
                Ok(_) => return Err(fail("witness does not contract to this subterm")),
                Err(reason) => return Err(fail(reason)),
            }
        }
        _ => rewrite_local(node, &seq, s.rule, s.direction, None).map_err(fail)?,
    };
    Ok(t.replace_at(&s.path, new).expect("path checked above"))
}

pub fn replay(t: &Term, rules: RuleSet, trace: &[Step]) -> Result<Term> {
    let mut cur = t.clone();
    for s in trace {
        cur = apply_step(&cur, rules, s)?;
    }
    Ok(cur)
}

/// Outcome of the bounded search. Terms are compared up to the names of
/// bound variables, so a success is two step lists, one per side, whose
/// results agree after [`canonical`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Meeting {
    Met { left: Vec<Step>, right: Vec<Step> },
    Unknown,
}

struct Side {
    terms: Vec<Term>,
    parent: Vec<Option<(usize, Step)>>,
    index: HashMap<Term, usize>,
    frontier: Vec<usize>,
    depth: usize,
}

impl Side {
    fn new(root: &Term) -> Side {
        Side {
            terms: vec![root.clone()],
            parent: vec![None],
            index: [(canonical(root), 0)].into(),
            frontier: vec![0],
            depth: 0,
        }
    }

    fn steps_to(&self, mut i: usize) -> Vec<Step> {
        let mut out = Vec::new();
        while let Some((p, s)) = &self.parent[i] {
            out.push(s.clone());
            i = *p;
        }
        out.reverse();
        out
    }
}

/// Bidirectional breadth-first search, as for the ordered calculus: terms
/// stay within `node_bound` nodes, the two halves together take at most
/// `step_bound` steps, and at most `max_states` terms are visited.
pub fn equiv_oracle(
    t: &Term,
    u: &Term,
    rules: RuleSet,
    node_bound: usize,
    step_bound: usize,
    max_states: usize,
) -> Result<Meeting> {
    let (st, su) = (typecheck(t)?, typecheck(u)?);
    if st.lin != su.lin || st.succ != su.succ {
        return Err(Error::SequentMismatch {
            left: st.to_string(),
            right: su.to_string(),
        });
    }
    let mut sides = [Side::new(t), Side::new(u)];
    if sides[0].index.contains_key(&canonical(u)) {
        return Ok(Meeting::Met { left: vec![], right: vec![] });
    }
    while sides[0].depth + sides[1].depth < step_bound {
        if sides[0].terms.len() + sides[1].terms.len() >= max_states {
            break;
        }
        let (f0, f1) = (sides[0].frontier.len(), sides[1].frontier.len());
        let which = match (f0, f1) {
            (0, 0) => break,
            (0, _) => 1,
            (_, 0) => 0,
            _ if f0 <= f1 => 0,
            _ => 1,
        };
        let frontier = std::mem::take(&mut sides[which].frontier);
        let mut next = Vec::new();
        for i in frontier {
            let here = sides[which].terms[i].clone();
            for (step, new) in successors(&here, rules, node_bound)? {
                let key = canonical(&new);
                if new.size() > node_bound || sides[which].index.contains_key(&key) {
                    continue;
                }
                let j = sides[which].terms.len();
                sides[which].terms.push(new);
                sides[which].parent.push(Some((i, step)));
                sides[which].index.insert(key.clone(), j);
                next.push(j);
                if let Some(&k) = sides[1 - which].index.get(&key) {
                    let (a, b) = if which == 0 { (j, k) } else { (k, j) };
                    return Ok(Meeting::Met {
                        left: sides[0].steps_to(a),
                        right: sides[1].steps_to(b),
                    });
                }
            }
        }
        sides[which].frontier = next;
        sides[which].depth += 1;
    }
    Ok(Meeting::Unknown)
}

#[cfg(test)]
mod tests {
    use super::super::sem::nbe;
    use super::super::text::{parse_term, print_term};
    use super::*;

    fn t(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    fn step(s: &str) -> Step {
        s.parse().unwrap()
    }

    #[test]
    fn beta_for_each_connective() {
        let cases = [
            (
                "app (lam x. (ax x:p)) (ax y:p)",
                "ax y:p",
                RuleSet::Linear,
                ":BetaLolli:LR",
            ),
            ("letu unit (ax y:p)", "ax y:p", RuleSet::Linear, ":BetaUnit:LR"),
            (
                "lett[a,b] (pair (ax b:p) (ax a:q)) (pair (ax b:q) (ax a:p))",
                "pair (ax a:q) (ax b:p)",
                RuleSet::Linear,
                ":BetaTensor:LR",
            ),
            (
                "letb[u] (bang (axint k:p)) (pair (axint u:p) (axint u:p))",
                "pair (axint k:p) (axint k:p)",
                RuleSet::Exponential,
                ":BetaBang:LR",
            ),
        ];
        for (before, after, rules, s) in cases {
            let out = apply_step(&t(before), rules, &step(s)).unwrap();
            assert_eq!(print_term(&out), after, "{}", s);
        }
    }

    #[test]
    fn eta_round_trips() {
        for (src, rule) in [
            ("ax f:(p -o q)", "EtaLolli"),
            ("ax u:I", "EtaUnit"),
            ("ax w:(p*q)", "EtaTensor"),
            ("ax y:!p", "EtaBang"),
        ] {
            let rules = if rule == "EtaBang" {
                RuleSet::Exponential
            } else {
                RuleSet::Linear
            };
            let big = apply_step(&t(src), rules, &step(&format!(":{}:RL", rule))).unwrap();
            let back = apply_step(&big, rules, &step(&format!(":{}:LR", rule))).unwrap();
            assert_eq!(back, t(src));
        }
    }

    #[test]
    fn rule_sets_differ() {
        assert!(apply_step(&t("ax y:!p"), RuleSet::Linear, &step(":EtaBang:RL")).is_err());
        let redex = t("letu (ax u:I) (lam x. (ax x:p))");
        assert!(apply_step(&redex, RuleSet::Exponential, &step(":PermUnitLam:LR")).is_err());
        assert!(apply_step(&redex, RuleSet::Linear, &step(":PermUnitLam:LR")).is_ok());
    }

    #[test]
    fn capture_is_refused() {
        // Pushing `x` under a binder of the same name would capture it.
        let bad = t("app (lett[x,y] (ax w:(p*q)) (lam z. (pair (ax z:r) (pair (ax x:p) (ax y:q))))) (ax x:r)");
        assert!(apply_step(&bad, RuleSet::Linear, &step(":PermAppLetTL:LR")).is_err());
    }

    #[test]
    fn steps_keep_the_sequent_and_mostly_the_normal_form() {
        let src = t("lett[a,b] (ax z:(p*q)) (app (lett[c,d] (pair (ax a:p) (ax b:q)) \
                     (lam e. (pair (ax c:p) (pair (ax d:q) (ax e:r))))) (ax w:r))");
        let want = nbe(&src).unwrap();
        let seq = typecheck(&src).unwrap();
        for (s, next) in successors(&src, RuleSet::Linear, 40).unwrap() {
            assert_eq!(typecheck(&next).unwrap(), seq, "{}", s);
            if !s.rule.is_argument_permutation() {
                assert_eq!(nbe(&next).unwrap(), want, "{}", s);
            }
        }
    }

    #[test]
    fn search_meets_in_the_middle() {
        let redex = t("app (lam x. (pair (ax x:p) (ax y:q))) (ax z:p)");
        let eta = t("lett[a,b] (ax w:(p*q)) (pair (ax a:p) (ax b:q))");
        match equiv_oracle(&redex, &t("pair (ax z:p) (ax y:q)"), RuleSet::Linear, 20, 2, 1000).unwrap() {
            Meeting::Met { left, right } => {
                assert_eq!(left.len() + right.len(), 1);
                let l = replay(&redex, RuleSet::Linear, &left).unwrap();
                let r = replay(&t("pair (ax z:p) (ax y:q)"), RuleSet::Linear, &right).unwrap();
                assert_eq!(canonical(&l), canonical(&r));
            }
            Meeting::Unknown => panic!("one β step apart"),
        }
        assert_eq!(
            equiv_oracle(&eta, &t("ax w:(p*q)"), RuleSet::Linear, 20, 0, 1000).unwrap(),
            Meeting::Unknown
        );
        assert!(matches!(
            equiv_oracle(&eta, &t("ax w:(p*q)"), RuleSet::Linear, 20, 2, 1000).unwrap(),
            Meeting::Met { .. }
        ));
        assert!(equiv_oracle(&eta, &t("ax w:p"), RuleSet::Linear, 20, 2, 1000).is_err());
    }
}
