//! The βη-equational theory as a rewrite system over derivations, and a
//! bounded search that certifies two derivations equal by exhibiting a
//! chain of steps.
//!
//! Orientation: for β and permutation rows the left side is the redex and
//! the permuted-outward eliminator respectively; for η rows the left side
//! is the expanded term, so `RL` is an expansion and is bounded by a size
//! cap during enumeration.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::syntax::{fold_typed, sub1, typecheck, Derivation, Formula, Path, Sequent};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EquationId {
    BetaOver,
    BetaUnder,
    BetaUnit,
    BetaTensor,
    EtaOver,
    EtaUnder,
    EtaUnit,
    EtaTensor,
    PermUnitIOver,
    PermUnitIUnder,
    PermEOverEUnitL,
    PermEOverEUnitR,
    PermEUnderEUnitL,
    PermEUnderEUnitR,
    PermEUnitEUnit,
    PermTensorIOver,
    PermTensorIUnder,
    PermEOverETensorL,
    PermEOverETensorR,
    PermEUnderETensorL,
    PermEUnderETensorR,
    PermETensorETensor,
}

impl EquationId {
    pub const ALL: [EquationId; 22] = [
        EquationId::BetaOver,
        EquationId::BetaUnder,
        EquationId::BetaUnit,
        EquationId::BetaTensor,
        EquationId::EtaOver,
        EquationId::EtaUnder,
        EquationId::EtaUnit,
        EquationId::EtaTensor,
        EquationId::PermUnitIOver,
        EquationId::PermUnitIUnder,
        EquationId::PermEOverEUnitL,
        EquationId::PermEOverEUnitR,
        EquationId::PermEUnderEUnitL,
        EquationId::PermEUnderEUnitR,
        EquationId::PermEUnitEUnit,
        EquationId::PermTensorIOver,
        EquationId::PermTensorIUnder,
        EquationId::PermEOverETensorL,
        EquationId::PermEOverETensorR,
        EquationId::PermEUnderETensorL,
        EquationId::PermEUnderETensorR,
        EquationId::PermETensorETensor,
    ];

    pub fn is_beta(self) -> bool {
        use EquationId::*;
        matches!(self, BetaOver | BetaUnder | BetaUnit | BetaTensor)
    }

    pub fn is_eta(self) -> bool {
        use EquationId::*;
        matches!(self, EtaOver | EtaUnder | EtaUnit | EtaTensor)
    }

    /// Permutations that move an eliminator of a positive formula out of
    /// the argument of an implication elimination.
    pub fn is_argument_permutation(self) -> bool {
        use EquationId::*;
        matches!(
            self,
            PermEOverEUnitR | PermEOverETensorR | PermEUnderEUnitL | PermEUnderETensorL
        )
    }
}

impl fmt::Display for EquationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self)
    }
}

impl FromStr for EquationId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<EquationId, String> {
        EquationId::ALL
            .iter()
            .copied()
            .find(|e| e.to_string() == s)
            .ok_or_else(|| format!("unknown equation `{}`", s))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    LeftToRight,
    RightToLeft,
}

impl Direction {
    pub fn flip(self) -> Direction {
        match self {
            Direction::LeftToRight => Direction::RightToLeft,
            Direction::RightToLeft => Direction::LeftToRight,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::LeftToRight => "LR",
            Direction::RightToLeft => "RL",
        })
    }
}

impl FromStr for Direction {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Direction, String> {
        match s {
            "LR" => Ok(Direction::LeftToRight),
            "RL" => Ok(Direction::RightToLeft),
            _ => Err(format!("unknown direction `{}` (expected LR or RL)", s)),
        }
    }
}

/// One equation instance at a subterm. A β expansion cannot be
/// reconstructed from its contractum, so it carries the redex it
/// restores in `witness`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RewriteStep {
    pub path: Path,
    pub eq: EquationId,
    pub direction: Direction,
    pub witness: Option<Derivation>,
}

impl RewriteStep {
    pub fn new(path: Path, eq: EquationId, direction: Direction) -> RewriteStep {
        RewriteStep {
            path,
            eq,
            direction,
            witness: None,
        }
    }
}

impl fmt::Display for RewriteStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}:{}",
            crate::syntax::path_string(&self.path),
            self.eq,
            self.direction
        )?;
        if let Some(w) = &self.witness {
            write!(f, " {}", w)?;
        }
        Ok(())
    }
}

impl FromStr for RewriteStep {
    type Err = String;

    /// `PATH:EQ:DIR` with a dot-separated, possibly empty path.
    fn from_str(s: &str) -> std::result::Result<RewriteStep, String> {
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
        Ok(RewriteStep::new(path, parts[1].parse()?, parts[2].parse()?))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EquivVerdict {
    Related(Vec<RewriteStep>),
    Unknown,
}

fn len(d: &Derivation) -> usize {
    typecheck(d).expect("subterm of a well-formed derivation").antecedent.len()
}

fn tensor_parts(f: &Formula) -> Option<(Formula, Formula)> {
    match f {
        Formula::Tensor(a, b) => Some(((**a).clone(), (**b).clone())),
        _ => None,
    }
}

type Local = std::result::Result<Derivation, &'static str>;

/// Rewrites `node` (whose conclusion is `seq`) at its root. `cap` bounds
/// the size of η expansions; `None` means unbounded.
fn rewrite_local(
    node: &Derivation,
    seq: &Sequent,
    eq: EquationId,
    dir: Direction,
    cap: Option<usize>,
) -> Local {
    use Derivation as D;
    use Direction::*;
    use EquationId::*;
    const NO: Local = Err("pattern does not match");
    let b = |d: &Derivation| d.clone();
    let fits = |extra: usize| cap.is_none_or(|c| node.size() + extra <= c);
    let out: Derivation = match (eq, dir, node) {
        (BetaOver, LeftToRight, D::EOver(f, u)) => match &**f {
            D::IOver(t) => sub1(u, len(t) - 1, t).map_err(|_| "substitution failed")?,
            _ => return NO,
        },
        (BetaUnder, LeftToRight, D::EUnder(u, f)) => match &**f {
            D::IUnder(t) => sub1(u, 0, t).map_err(|_| "substitution failed")?,
            _ => return NO,
        },
        (BetaUnit, LeftToRight, D::EUnit(_, s, t)) => match &**s {
            D::IUnit => b(t),
            _ => return NO,
        },
        (BetaTensor, LeftToRight, D::ETensor(k, s, t)) => match &**s {
            D::ITensor(s1, s2) => {
                let inner = sub1(s2, k + 1, t).map_err(|_| "substitution failed")?;
                sub1(s1, *k, &inner).map_err(|_| "substitution failed")?
            }
            _ => return NO,
        },
        (BetaOver | BetaUnder | BetaUnit | BetaTensor, RightToLeft, _) => {
            return Err("a beta expansion needs the redex as witness")
        }

        (EtaOver, LeftToRight, D::IOver(body)) => match &**body {
            D::EOver(t, x) if matches!(**x, D::Ax(_)) => b(t),
            _ => return NO,
        },
        (EtaOver, RightToLeft, _) => match &seq.succedent {
            Formula::Over(_, a) if fits(3) => {
                D::i_over(D::e_over(node.clone(), D::Ax((**a).clone())))
            }
            Formula::Over(..) => return Err("expansion exceeds the size cap"),
            _ => return NO,
        },
        (EtaUnder, LeftToRight, D::IUnder(body)) => match &**body {
            D::EUnder(x, t) if matches!(**x, D::Ax(_)) => b(t),
            _ => return NO,
        },
        (EtaUnder, RightToLeft, _) => match &seq.succedent {
            Formula::Under(a, _) if fits(3) => {
                D::i_under(D::e_under(D::Ax((**a).clone()), node.clone()))
            }
            Formula::Under(..) => return Err("expansion exceeds the size cap"),
            _ => return NO,
        },
        (EtaUnit, LeftToRight, D::EUnit(0, s, t)) if **t == D::IUnit => b(s),
        (EtaUnit, RightToLeft, _) => match &seq.succedent {
            Formula::Unit if fits(2) => D::e_unit(0, node.clone(), D::IUnit),
            Formula::Unit => return Err("expansion exceeds the size cap"),
            _ => return NO,
        },
        (EtaTensor, LeftToRight, D::ETensor(0, s, t)) => match &**t {
            D::ITensor(x, y) if matches!(**x, D::Ax(_)) && matches!(**y, D::Ax(_)) => b(s),
            _ => return NO,
        },
        (EtaTensor, RightToLeft, _) => match tensor_parts(&seq.succedent) {
            Some((a, c)) if fits(4) => {
                D::e_tensor(0, node.clone(), D::i_tensor(D::Ax(a), D::Ax(c)))
            }
            Some(_) => return Err("expansion exceeds the size cap"),
            None => return NO,
        },

        (PermUnitIOver, LeftToRight, D::EUnit(k, s, t)) => match &**t {
            D::IOver(t) => D::i_over(D::e_unit(*k, b(s), b(t))),
            _ => return NO,
        },
        (PermUnitIOver, RightToLeft, D::IOver(body)) => match &**body {
            D::EUnit(k, s, t) if *k < len(t) => D::e_unit(*k, b(s), D::i_over(b(t))),
            _ => return NO,
        },
        (PermUnitIUnder, LeftToRight, D::EUnit(k, s, t)) => match &**t {
            D::IUnder(t) => D::i_under(D::e_unit(k + 1, b(s), b(t))),
            _ => return NO,
        },
        (PermUnitIUnder, RightToLeft, D::IUnder(body)) => match &**body {
            D::EUnit(k, s, t) if *k >= 1 => D::e_unit(k - 1, b(s), D::i_under(b(t))),
            _ => return NO,
        },
        (PermTensorIOver, LeftToRight, D::ETensor(k, s, t)) => match &**t {
            D::IOver(t) => D::i_over(D::e_tensor(*k, b(s), b(t))),
            _ => return NO,
        },
        (PermTensorIOver, RightToLeft, D::IOver(body)) => match &**body {
            D::ETensor(k, s, t) if k + 3 <= len(t) => D::e_tensor(*k, b(s), D::i_over(b(t))),
            _ => return NO,
        },
        (PermTensorIUnder, LeftToRight, D::ETensor(k, s, t)) => match &**t {
            D::IUnder(t) => D::i_under(D::e_tensor(k + 1, b(s), b(t))),
            _ => return NO,
        },
        (PermTensorIUnder, RightToLeft, D::IUnder(body)) => match &**body {
            D::ETensor(k, s, t) if *k >= 1 => D::e_tensor(k - 1, b(s), D::i_under(b(t))),
            _ => return NO,
        },

        (PermEOverEUnitL | PermEOverETensorL, LeftToRight, D::EOver(f, u)) => {
            match (eq, &**f) {
                (PermEOverEUnitL, D::EUnit(k, s, t)) => {
                    D::e_unit(*k, b(s), D::e_over(b(t), b(u)))
                }
                (PermEOverETensorL, D::ETensor(k, s, t)) => {
                    D::e_tensor(*k, b(s), D::e_over(b(t), b(u)))
                }
                _ => return NO,
            }
        }
        (PermEOverEUnitR | PermEOverETensorR, LeftToRight, D::EOver(t, a)) => {
            match (eq, &**a) {
                (PermEOverEUnitR, D::EUnit(k, s, u)) => {
                    D::e_unit(len(t) + k, b(s), D::e_over(b(t), b(u)))
                }
                (PermEOverETensorR, D::ETensor(k, s, u)) => {
                    D::e_tensor(len(t) + k, b(s), D::e_over(b(t), b(u)))
                }
                _ => return NO,
            }
        }
        (PermEUnderEUnitL | PermEUnderETensorL, LeftToRight, D::EUnder(a, u)) => {
            match (eq, &**a) {
                (PermEUnderEUnitL, D::EUnit(k, s, t)) => {
                    D::e_unit(*k, b(s), D::e_under(b(t), b(u)))
                }
                (PermEUnderETensorL, D::ETensor(k, s, t)) => {
                    D::e_tensor(*k, b(s), D::e_under(b(t), b(u)))
                }
                _ => return NO,
            }
        }
        (PermEUnderEUnitR | PermEUnderETensorR, LeftToRight, D::EUnder(t, f)) => {
            match (eq, &**f) {
                (PermEUnderEUnitR, D::EUnit(k, s, u)) => {
                    D::e_unit(len(t) + k, b(s), D::e_under(b(t), b(u)))
                }
                (PermEUnderETensorR, D::ETensor(k, s, u)) => {
                    D::e_tensor(len(t) + k, b(s), D::e_under(b(t), b(u)))
                }
                _ => return NO,
            }
        }
        (
            PermEOverEUnitL | PermEOverEUnitR | PermEUnderEUnitL | PermEUnderEUnitR,
            RightToLeft,
            D::EUnit(k, s, c),
        )
        | (
            PermEOverETensorL | PermEOverETensorR | PermEUnderETensorL | PermEUnderETensorR,
            RightToLeft,
            D::ETensor(k, s, c),
        ) => {
            let unit = matches!(node, D::EUnit(..));
            let width = if unit { 0 } else { 2 };
            let wrap = |k: usize, t: Derivation| {
                if unit {
                    D::e_unit(k, b(s), t)
                } else {
                    D::e_tensor(k, b(s), t)
                }
            };
            match (eq, &**c) {
                (PermEOverEUnitL | PermEOverETensorL, D::EOver(t, u))
                | (PermEUnderEUnitL | PermEUnderETensorL, D::EUnder(t, u))
                    if k + width <= len(t) =>
                {
                    let inner = wrap(*k, b(t));
                    if matches!(**c, D::EOver(..)) {
                        D::e_over(inner, b(u))
                    } else {
                        D::e_under(inner, b(u))
                    }
                }
                (PermEOverEUnitR | PermEOverETensorR, D::EOver(t, u))
                | (PermEUnderEUnitR | PermEUnderETensorR, D::EUnder(t, u))
                    if *k >= len(t) =>
                {
                    let inner = wrap(k - len(t), b(u));
                    if matches!(**c, D::EOver(..)) {
                        D::e_over(b(t), inner)
                    } else {
                        D::e_under(b(t), inner)
                    }
                }
                _ => return NO,
            }
        }

        (PermEUnitEUnit, LeftToRight, D::EUnit(k1, s, t)) => match &**s {
            D::EUnit(k2, s1, s2) => D::e_unit(k1 + k2, b(s1), D::e_unit(*k1, b(s2), b(t))),
            _ => return NO,
        },
        (PermEUnitEUnit, RightToLeft, D::EUnit(a, s1, inner)) => match &**inner {
            D::EUnit(c, s2, t) if c <= a && *a <= c + len(s2) => {
                D::e_unit(*c, D::e_unit(a - c, b(s1), b(s2)), b(t))
            }
            _ => return NO,
        },
        (PermETensorETensor, LeftToRight, D::ETensor(k1, s, t)) => match &**s {
            D::ETensor(k2, s1, s2) => {
                D::e_tensor(k1 + k2, b(s1), D::e_tensor(*k1, b(s2), b(t)))
            }
            _ => return NO,
        },
        (PermETensorETensor, RightToLeft, D::ETensor(a, s1, inner)) => match &**inner {
            D::ETensor(c, s2, t) if c <= a && a + 2 <= c + len(s2) => {
                D::e_tensor(*c, D::e_tensor(a - c, b(s1), b(s2)), b(t))
            }
            _ => return NO,
        },
        _ => return NO,
    };
    match typecheck(&out) {
        Ok(s) if s == *seq => Ok(out),
        _ => Err("rewrite changes the conclusion"),
    }
}

/// All steps applicable somewhere in `t`, in preorder of paths, then
/// equation order, then direction. η expansions are listed only when the
/// expanded subterm has at most `eta_cap` nodes.
pub fn applicable_steps(t: &Derivation, eta_cap: usize) -> Result<Vec<RewriteStep>> {
    Ok(successors(t, eta_cap)?.into_iter().map(|(s, _)| s).collect())
}

/// Applicable steps together with the derivations they produce.
pub fn successors(t: &Derivation, eta_cap: usize) -> Result<Vec<(RewriteStep, Derivation)>> {
    let mut sites: Vec<(Path, Sequent)> = Vec::new();
    fold_typed(t, &mut |_, path, seq, _: Vec<()>| {
        sites.push((path.to_vec(), seq.clone()));
    })?;
    sites.sort_by(|a, b| a.0.cmp(&b.0));
    let mut out = Vec::new();
    for (path, seq) in sites {
        let node = t.subterm(&path).expect("enumerated path");
        for eq in EquationId::ALL {
            for dir in [Direction::LeftToRight, Direction::RightToLeft] {
                if let Ok(new) = rewrite_local(node, &seq, eq, dir, Some(eta_cap)) {
                    let whole = t.replace_at(&path, new).expect("enumerated path");
                    out.push((RewriteStep::new(path.clone(), eq, dir), whole));
                }
            }
        }
    }
    Ok(out)
}

pub fn apply_step(t: &Derivation, s: &RewriteStep) -> Result<Derivation> {
    let fail = |reason: &str| Error::StepNotApplicable {
        path: s.path.clone(),
        eq: s.eq.to_string(),
        dir: s.direction.to_string(),
        reason: reason.to_string(),
    };
    let node = t.subterm(&s.path).ok_or_else(|| fail("no subterm at this path"))?;
    let seq = typecheck(node)?;
    let new = match (&s.witness, s.direction) {
        (Some(w), Direction::RightToLeft) if s.eq.is_beta() => {
            let wseq = typecheck(w).map_err(|_| fail("witness is ill-formed"))?;
            match rewrite_local(w, &wseq, s.eq, Direction::LeftToRight, None) {
                Ok(r) if r == *node => w.clone(),
                Ok(_) => return Err(fail("witness does not contract to this subterm")),
                Err(reason) => return Err(fail(reason)),
            }
        }
        _ => rewrite_local(node, &seq, s.eq, s.direction, None).map_err(fail)?,
    };
    Ok(t.replace_at(&s.path, new).expect("path checked above"))
}

/// The step undoing `s`, where `s` took `before` to some term.
pub fn inverse_step(before: &Derivation, s: &RewriteStep) -> RewriteStep {
    let mut inv = RewriteStep::new(s.path.clone(), s.eq, s.direction.flip());
    if s.eq.is_beta() && s.direction == Direction::LeftToRight {
        inv.witness = before.subterm(&s.path).cloned();
    }
    inv
}

pub fn replay(t: &Derivation, trace: &[RewriteStep]) -> Result<Derivation> {
    let mut cur = t.clone();
    for s in trace {
        cur = apply_step(&cur, s)?;
    }
    Ok(cur)
}

/// Budget on explored states per search, past which the answer is
/// `Unknown`.
pub const DEFAULT_MAX_STATES: usize = 20_000;

pub fn equiv_oracle(
    t: &Derivation,
    u: &Derivation,
    node_bound: usize,
    step_bound: usize,
) -> Result<EquivVerdict> {
    equiv_oracle_with_budget(t, u, node_bound, step_bound, DEFAULT_MAX_STATES)
}

struct Side {
    terms: Vec<Derivation>,
    parent: Vec<Option<(usize, RewriteStep)>>,
    index: HashMap<Derivation, usize>,
    frontier: Vec<usize>,
    depth: usize,
}

impl Side {
    fn new(root: &Derivation) -> Side {
        let mut index = HashMap::new();
        index.insert(root.clone(), 0);
        Side {
            terms: vec![root.clone()],
            parent: vec![None],
            index,
            frontier: vec![0],
            depth: 0,
        }
    }

    /// Steps from the root to state `i`.
    fn path_to(&self, mut i: usize) -> Vec<(usize, RewriteStep)> {
        let mut out = Vec::new();
        while let Some((p, s)) = &self.parent[i] {
            out.push((*p, s.clone()));
            i = *p;
        }
        out.reverse();
        out
    }
}

/// Bidirectional breadth-first search over the undirected rewrite graph.
/// Intermediate terms never exceed `node_bound` nodes and the total path
/// never exceeds `step_bound` steps.
pub fn equiv_oracle_with_budget(
    t: &Derivation,
    u: &Derivation,
    node_bound: usize,
    step_bound: usize,
    max_states: usize,
) -> Result<EquivVerdict> {
    let st = typecheck(t)?;
    let su = typecheck(u)?;
    if st != su {
        return Err(Error::SequentMismatch {
            left: st.to_string(),
            right: su.to_string(),
        });
    }
    if t == u {
        return Ok(EquivVerdict::Related(vec![]));
    }
    let mut sides = [Side::new(t), Side::new(u)];
    while sides[0].depth + sides[1].depth < step_bound {
        let states = sides[0].terms.len() + sides[1].terms.len();
        if states >= max_states {
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
            for (step, new) in successors(&here, node_bound)? {
                if new.size() > node_bound || sides[which].index.contains_key(&new) {
                    continue;
                }
                let j = sides[which].terms.len();
                sides[which].terms.push(new.clone());
                sides[which].parent.push(Some((i, step)));
                sides[which].index.insert(new.clone(), j);
                next.push(j);
                if let Some(&k) = sides[1 - which].index.get(&new) {
                    let (a, b) = if which == 0 { (j, k) } else { (k, j) };
                    return Ok(EquivVerdict::Related(join_trace(&sides, a, b)));
                }
            }
        }
        sides[which].frontier = next;
        sides[which].depth += 1;
    }
    Ok(EquivVerdict::Unknown)
}

fn join_trace(sides: &[Side; 2], a: usize, b: usize) -> Vec<RewriteStep> {
    let mut trace: Vec<RewriteStep> = sides[0].path_to(a).into_iter().map(|(_, s)| s).collect();
    for (parent, s) in sides[1].path_to(b).into_iter().rev() {
        trace.push(inverse_step(&sides[1].terms[parent], &s));
    }
    trace
}

/// The commuting conversions deliberately absent from the theory.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NonEquation {
    /// Tensor introduction with an eliminated left component.
    TensorIntroLeft,
    /// Tensor introduction with an eliminated right component.
    TensorIntroRight,
    /// Two independent tensor eliminations swapped.
    TensorElimSwap,
}

impl NonEquation {
    pub const ALL: [NonEquation; 3] = [
        NonEquation::TensorIntroLeft,
        NonEquation::TensorIntroRight,
        NonEquation::TensorElimSwap,
    ];

    /// Both sides instantiated at distinct atoms.
    pub fn witness(self) -> (Derivation, Derivation) {
        use Derivation as D;
        let at = Formula::atom;
        let (a, b, c, d) = (at("a"), at("b"), at("c"), at("d"));
        let ab = Formula::tensor(a.clone(), b.clone());
        let cd = Formula::tensor(c.clone(), d.clone());
        let pair_ab = || D::i_tensor(D::ax(a.clone()), D::ax(b.clone()));
        match self {
            NonEquation::TensorIntroLeft => (
                D::i_tensor(D::e_tensor(0, D::ax(ab.clone()), pair_ab()), D::ax(c.clone())),
                D::e_tensor(0, D::ax(ab), D::i_tensor(pair_ab(), D::ax(c))),
            ),
            NonEquation::TensorIntroRight => (
                D::i_tensor(D::ax(c.clone()), D::e_tensor(0, D::ax(ab.clone()), pair_ab())),
                D::e_tensor(1, D::ax(ab), D::i_tensor(D::ax(c), pair_ab())),
            ),
            NonEquation::TensorElimSwap => {
                let body = D::i_tensor(pair_ab(), D::i_tensor(D::ax(c), D::ax(d)));
                (
                    D::e_tensor(0, D::ax(ab.clone()), D::e_tensor(2, D::ax(cd.clone()), body.clone())),
                    D::e_tensor(1, D::ax(cd), D::e_tensor(0, D::ax(ab), body)),
                )
            }
        }
    }
}

pub fn non_equation_witnesses() -> Vec<(Derivation, Derivation)> {
    NonEquation::ALL.iter().map(|n| n.witness()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse_derivation;

    fn d(s: &str) -> Derivation {
        parse_derivation(s).unwrap()
    }

    fn has(steps: &[RewriteStep], path: &[usize], eq: EquationId, dir: Direction) -> bool {
        steps
            .iter()
            .any(|s| s.path == path && s.eq == eq && s.direction == dir)
    }

    #[test]
    fn beta_unit_at_root() {
        let t = d("letu[0] unit (ax p)");
        let steps = applicable_steps(&t, 0).unwrap();
        assert!(has(&steps, &[], EquationId::BetaUnit, Direction::LeftToRight));
        let s = RewriteStep::new(vec![], EquationId::BetaUnit, Direction::LeftToRight);
        assert_eq!(apply_step(&t, &s).unwrap(), d("ax p"));
    }

    #[test]
    fn atomic_axiom_has_no_steps_under_zero_cap() {
        assert!(applicable_steps(&d("ax p"), 0).unwrap().is_empty());
    }

    #[test]
    fn beta_over_at_root() {
        let t = d("appr (lamr (pair (ax q) (ax p))) (ax p)");
        let steps = applicable_steps(&t, 0).unwrap();
        assert!(has(&steps, &[], EquationId::BetaOver, Direction::LeftToRight));
        let s = RewriteStep::new(vec![], EquationId::BetaOver, Direction::LeftToRight);
        assert_eq!(apply_step(&t, &s).unwrap(), d("pair (ax q) (ax p)"));
    }

    #[test]
    fn eta_over_expansion() {
        let t = d("ax (q/p)");
        let s = RewriteStep::new(vec![], EquationId::EtaOver, Direction::RightToLeft);
        assert_eq!(
            apply_step(&t, &s).unwrap(),
            d("lamr (appr (ax (q/p)) (ax p))")
        );
    }

    #[test]
    fn beta_tensor_on_non_pair_fails() {
        let t = d("lett[0] (ax (p*q)) (pair (ax p) (ax q))");
        let s = RewriteStep::new(vec![], EquationId::BetaTensor, Direction::LeftToRight);
        assert!(matches!(
            apply_step(&t, &s),
            Err(Error::StepNotApplicable { .. })
        ));
    }

    #[test]
    fn beta_tensor_substitutes_both_components() {
        let t = d("lett[1] (pair (ax p) (ax q)) (pair (ax r) (pair (ax p) (ax q)))");
        let s = RewriteStep::new(vec![], EquationId::BetaTensor, Direction::LeftToRight);
        assert_eq!(
            apply_step(&t, &s).unwrap(),
            d("pair (ax r) (pair (ax p) (ax q))")
        );
    }

    #[test]
    fn permutations_invert_exactly() {
        let cases = [
            ("letu[1] (ax I) (lamr (pair (ax p) (ax q)))", EquationId::PermUnitIOver),
            ("letu[0] (ax I) (laml (pair (ax p) (ax q)))", EquationId::PermUnitIUnder),
            ("appr (letu[0] (ax I) (ax (q/p))) (ax p)", EquationId::PermEOverEUnitL),
            ("appr (ax (q/p)) (letu[0] (ax I) (ax p))", EquationId::PermEOverEUnitR),
            ("letu[0] (letu[1] (ax I) (ax I)) (ax p)", EquationId::PermEUnitEUnit),
            (
                "lett[1] (ax (p*q)) (lamr (pair (ax r) (pair (ax p) (pair (ax q) (ax r)))))",
                EquationId::PermTensorIOver,
            ),
            (
                "lett[0] (lett[0] (ax (a*b)) (pair (ax a) (ax b))) (pair (ax a) (ax b))",
                EquationId::PermETensorETensor,
            ),
            (
                "appl (ax r) (lett[0] (ax (p*q)) (laml (pair (ax r) (pair (ax p) (ax q)))))",
                EquationId::PermEUnderETensorR,
            ),
        ];
        for (src, eq) in cases {
            let t = d(src);
            let s = RewriteStep::new(vec![], eq, Direction::LeftToRight);
            let out = apply_step(&t, &s).unwrap_or_else(|e| panic!("{}: {}", src, e));
            assert_eq!(typecheck(&out).unwrap(), typecheck(&t).unwrap());
            let back = apply_step(&out, &inverse_step(&t, &s)).unwrap();
            assert_eq!(back, t, "{}", src);
        }
    }

    #[test]
    fn beta_expansion_needs_witness() {
        let redex = d("letu[0] unit (ax p)");
        let s = RewriteStep::new(vec![], EquationId::BetaUnit, Direction::LeftToRight);
        let out = apply_step(&redex, &s).unwrap();
        let bare = RewriteStep::new(vec![], EquationId::BetaUnit, Direction::RightToLeft);
        assert!(apply_step(&out, &bare).is_err());
        assert_eq!(apply_step(&out, &inverse_step(&redex, &s)).unwrap(), redex);
    }

    #[test]
    fn step_text_round_trip() {
        let s: RewriteStep = "0.1:PermEOverEUnitR:RL".parse().unwrap();
        assert_eq!(s.path, vec![0, 1]);
        assert_eq!(s.to_string(), "0.1:PermEOverEUnitR:RL");
        let root: RewriteStep = ":BetaUnit:LR".parse().unwrap();
        assert!(root.path.is_empty());
        assert!("x:BetaUnit:LR".parse::<RewriteStep>().is_err());
    }

    #[test]
    fn oracle_reflexive_and_one_step() {
        let t = d("ax p");
        assert_eq!(
            equiv_oracle(&t, &t, 10, 2).unwrap(),
            EquivVerdict::Related(vec![])
        );
        let r = d("letu[0] unit (ax p)");
        match equiv_oracle(&r, &t, 10, 2).unwrap() {
            EquivVerdict::Related(trace) => {
                assert_eq!(trace.len(), 1);
                assert_eq!(replay(&r, &trace).unwrap(), t);
            }
            EquivVerdict::Unknown => panic!("expected a trace"),
        }
    }

    #[test]
    fn oracle_backward_beta_is_replayable() {
        let t = d("ax p");
        let r = d("letu[0] unit (ax p)");
        match equiv_oracle(&t, &r, 10, 2).unwrap() {
            EquivVerdict::Related(trace) => assert_eq!(replay(&t, &trace).unwrap(), r),
            EquivVerdict::Unknown => panic!("expected a trace"),
        }
    }

    #[test]
    fn oracle_rejects_different_sequents() {
        assert!(matches!(
            equiv_oracle(&d("ax p"), &d("ax q"), 10, 2),
            Err(Error::SequentMismatch { .. })
        ));
    }

    #[test]
    fn witnesses_share_sequents() {
        let w = non_equation_witnesses();
        assert_eq!(w.len(), 3);
        for (l, r) in w {
            assert_eq!(typecheck(&l).unwrap(), typecheck(&r).unwrap());
        }
    }
}
