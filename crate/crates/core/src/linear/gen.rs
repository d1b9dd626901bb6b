//! Seeded generation for the commutative calculi, following the ordered
//! generator: pick a provable goal, then grow a term top-down guided by a
//! prover that knows the smallest normal form of every sequent.
//!
//! Contexts are multisets here, so splits range over sub-multisets. With
//! `!`, an intuitionistic hypothesis can be eliminated again and again;
//! the prover therefore searches under an explicit size limit instead of
//! relying on the shape of the goal to terminate.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::gen::{Calculus, GenConfig, SplitMix64};
use crate::names::Name;

use super::rewrite::{applicable_steps, apply_step, RuleSet, Step};
use super::{LFormula, LNe, LNf, Term};

type Hyps = Vec<(Name, LFormula)>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Mode {
    Nf,
    Ne,
    Der,
}

#[derive(Clone, Debug)]
struct Goal {
    mode: Mode,
    int: Hyps,
    lin: Hyps,
    formula: LFormula,
}

#[derive(Clone, Debug)]
enum Rule {
    Ax(Name),
    AxInt(Name),
    Lam(Name),
    App,
    Unit,
    LetU,
    Pair,
    LetT(Name, Name),
    Bang,
    LetB(Name),
    Sw,
}

#[derive(Clone, Debug)]
struct Move {
    rule: Rule,
    premises: Vec<Goal>,
}

impl Move {
    fn cost(&self) -> usize {
        match self.rule {
            Rule::Sw => 0,
            _ => 1,
        }
    }

    fn kind(&self) -> u8 {
        match &self.rule {
            Rule::Ax(_) => 0,
            Rule::AxInt(_) => 1,
            Rule::Lam(_) => 2,
            Rule::Unit => 3,
            Rule::Pair => 4,
            Rule::Bang => 5,
            Rule::App => 6,
            // An empty scrutinee is a unit redex; kept apart from real eliminations.
            Rule::LetU if self.premises[0].lin.is_empty() => 11,
            Rule::LetU => 7,
            Rule::LetT(..) => 8,
            Rule::LetB(_) => 9,
            Rule::Sw => 10,
        }
    }

    fn is_intro(&self) -> bool {
        self.kind() <= 5
    }
}

fn formulas(h: &[(Name, LFormula)]) -> impl Iterator<Item = &LFormula> {
    h.iter().map(|(_, f)| f)
}

fn subformulas(f: &LFormula, out: &mut BTreeSet<LFormula>) {
    if !out.insert(f.clone()) {
        return;
    }
    match f {
        LFormula::Atom(_) | LFormula::Unit => {}
        LFormula::Bang(a) => subformulas(a, out),
        LFormula::Tensor(a, b) | LFormula::Lolli(a, b) => {
            subformulas(a, out);
            subformulas(b, out);
        }
    }
}

fn subformulas_of<'a>(fs: impl Iterator<Item = &'a LFormula>) -> BTreeSet<LFormula> {
    let mut out = BTreeSet::new();
    for f in fs {
        subformulas(f, &mut out);
    }
    out
}

/// Formulas a neutral headed by `f` can have.
fn tails(f: &LFormula, out: &mut BTreeSet<LFormula>) {
    out.insert(f.clone());
    if let LFormula::Lolli(_, r) = f {
        tails(r, out);
    }
}

fn tails_of<'a>(fs: impl Iterator<Item = &'a LFormula>) -> BTreeSet<LFormula> {
    let mut out = BTreeSet::new();
    for f in fs {
        tails(f, &mut out);
    }
    out
}

/// The splits of `lin` into a chosen part and the rest, one per distinct
/// multiset of chosen formulas.
fn splits(lin: &[(Name, LFormula)]) -> Vec<(Hyps, Hyps)> {
    let n = lin.len();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        let (mut pick, mut rest) = (Vec::new(), Vec::new());
        for (i, h) in lin.iter().enumerate() {
            if mask & (1 << i) != 0 {
                pick.push(h.clone());
            } else {
                rest.push(h.clone());
            }
        }
        let mut key: Vec<LFormula> = formulas(&pick).cloned().collect();
        key.sort();
        if seen.insert(key) {
            out.push((pick, rest));
        }
    }
    out
}

/// A name not used by either zone.
fn fresh(int: &[(Name, LFormula)], lin: &[(Name, LFormula)], taken: &[&Name]) -> Name {
    (0..)
        .map(|i| Name::new(&format!("x{}", i)))
        .find(|n| !int.iter().chain(lin).any(|(m, _)| m == n) && !taken.contains(&n))
        .expect("unbounded supply")
}

fn with(h: &[(Name, LFormula)], extra: &[(Name, LFormula)]) -> Hyps {
    h.iter().chain(extra).cloned().collect()
}

fn goal(mode: Mode, int: &[(Name, LFormula)], lin: Hyps, formula: LFormula) -> Goal {
    Goal {
        mode,
        int: int.to_vec(),
        lin,
        formula,
    }
}

fn mv(rule: Rule, premises: Vec<Goal>) -> Move {
    Move { rule, premises }
}

fn intro_moves(mode: Mode, int: &Hyps, lin: &Hyps, a: &LFormula, out: &mut Vec<Move>) {
    match a {
        LFormula::Lolli(b, c) => {
            let x = fresh(int, lin, &[]);
            let lin = with(lin, &[(x.clone(), (**b).clone())]);
            out.push(mv(Rule::Lam(x), vec![goal(mode, int, lin, (**c).clone())]));
        }
        LFormula::Unit if lin.is_empty() => out.push(mv(Rule::Unit, vec![])),
        LFormula::Tensor(b, c) => {
            for (l, r) in splits(lin) {
                out.push(mv(
                    Rule::Pair,
                    vec![goal(mode, int, l, (**b).clone()), goal(mode, int, r, (**c).clone())],
                ));
            }
        }
        LFormula::Bang(b) if lin.is_empty() => {
            out.push(mv(Rule::Bang, vec![goal(mode, int, vec![], (**b).clone())]))
        }
        _ => {}
    }
}

/// Positive eliminations whose scrutinee `x` is proved in `scrut_mode`.
fn elim_move(scrut_mode: Mode, mode: Mode, int: &Hyps, s: Hyps, rest: Hyps, x: &LFormula, a: &LFormula) -> Option<Move> {
    let scrut = goal(scrut_mode, int, s, x.clone());
    match x {
        LFormula::Unit => Some(mv(Rule::LetU, vec![scrut, goal(mode, int, rest, a.clone())])),
        LFormula::Tensor(l, r) => {
            let y = fresh(int, &rest, &[]);
            let z = fresh(int, &rest, &[&y]);
            let lin = with(&rest, &[(y.clone(), (**l).clone()), (z.clone(), (**r).clone())]);
            Some(mv(Rule::LetT(y, z), vec![scrut, goal(mode, int, lin, a.clone())]))
        }
        LFormula::Bang(b) => {
            let y = fresh(int, &rest, &[]);
            let int2 = with(int, &[(y.clone(), (**b).clone())]);
            Some(mv(Rule::LetB(y), vec![scrut, goal(mode, &int2, rest, a.clone())]))
        }
        _ => None,
    }
}

fn leaf_moves(int: &Hyps, lin: &Hyps, a: &LFormula, out: &mut Vec<Move>) {
    if let [(x, f)] = &lin[..] {
        if f == a {
            out.push(mv(Rule::Ax(x.clone()), vec![]));
        }
    }
    if lin.is_empty() {
        if let Some((x, _)) = int.iter().find(|(_, f)| f == a) {
            out.push(mv(Rule::AxInt(x.clone()), vec![]));
        }
    }
}

fn nf_moves(int: &Hyps, lin: &Hyps, a: &LFormula) -> Vec<Move> {
    let mut out = Vec::new();
    intro_moves(Mode::Nf, int, lin, a, &mut out);
    if matches!(a, LFormula::Lolli(..)) {
        return out;
    }
    if let LFormula::Atom(_) = a {
        out.push(mv(Rule::Sw, vec![goal(Mode::Ne, int, lin.clone(), a.clone())]));
    }
    if lin.len() > MAX_LINEAR {
        return out;
    }
    for (s, rest) in splits(lin) {
        if s.is_empty() && int.is_empty() {
            continue;
        }
        for x in tails_of(formulas(&s).chain(formulas(int))) {
            // Search-space cuts, shared by the prover and the builder: no
            // unit eliminations of intuitionistic hypotheses alone, and `!`
            // is only opened for what the intuitionistic zone lacks.
            let pointless = match &x {
                LFormula::Unit => s.is_empty(),
                LFormula::Bang(b) => formulas(int).any(|f| f == &**b),
                _ => false,
            };
            if !pointless {
                out.extend(elim_move(Mode::Ne, Mode::Nf, int, s.clone(), rest.clone(), &x, a));
            }
        }
    }
    out
}

/// Linear zone size beyond which normal-form search stops eliminating.
/// Intuitionistic tensors can otherwise be unpacked forever.
const MAX_LINEAR: usize = 4;

fn ne_moves(int: &Hyps, lin: &Hyps, a: &LFormula) -> Vec<Move> {
    let mut out = Vec::new();
    leaf_moves(int, lin, a, &mut out);
    for (s, rest) in splits(lin) {
        if s.is_empty() && int.is_empty() {
            continue;
        }
        for f in tails_of(formulas(&s).chain(formulas(int))) {
            if let LFormula::Lolli(arg, res) = &f {
                if **res == *a {
                    out.push(mv(
                        Rule::App,
                        vec![goal(Mode::Ne, int, s.clone(), f.clone()), goal(Mode::Nf, int, rest.clone(), (**arg).clone())],
                    ));
                }
            }
        }
    }
    out
}

/// A context of at most two formulas as one formula.
fn pack(h: &[(Name, LFormula)]) -> Option<LFormula> {
    match h {
        [] => Some(LFormula::Unit),
        [(_, a)] => Some(a.clone()),
        [(_, a), (_, b)] => Some(LFormula::tensor(a.clone(), b.clone())),
        _ => None,
    }
}

fn der_moves(int: &Hyps, lin: &Hyps, a: &LFormula, bang: bool) -> Vec<Move> {
    use Mode::Der as D;
    let mut out = Vec::new();
    leaf_moves(int, lin, a, &mut out);
    intro_moves(D, int, lin, a, &mut out);
    for (s, rest) in splits(lin) {
        let subs = subformulas_of(formulas(&s).chain(formulas(int)));
        let mut scruts: BTreeSet<LFormula> = subs
            .iter()
            .filter(|f| matches!(f, LFormula::Tensor(..)) || (bang && matches!(f, LFormula::Bang(_))))
            .cloned()
            .collect();
        scruts.insert(LFormula::Unit);
        scruts.extend(pack(&s).filter(|_| s.len() == 2));
        for x in &scruts {
            out.extend(elim_move(D, D, int, s.clone(), rest.clone(), x, a));
        }
        let mut args: BTreeSet<LFormula> = subs
            .iter()
            .filter_map(|f| match f {
                LFormula::Lolli(arg, res) if **res == *a => Some((**arg).clone()),
                _ => None,
            })
            .collect();
        args.extend(pack(&rest));
        for c in args {
            out.push(mv(
                Rule::App,
                vec![
                    goal(D, int, s.clone(), LFormula::lolli(c.clone(), a.clone())),
                    goal(D, int, rest.clone(), c),
                ],
            ));
        }
    }
    out
}

/// Every linear atom occurrence meets exactly one of opposite polarity in
/// an axiom, so atoms that never reach the intuitionistic zone must
/// balance. A cheap refutation that prunes most splits.
fn balanced(int: &Hyps, lin: &Hyps, a: &LFormula) -> bool {
    fn walk(f: &LFormula, pos: bool, counts: &mut HashMap<LFormula, i64>, free: &mut BTreeSet<LFormula>) {
        match f {
            LFormula::Atom(_) => *counts.entry(f.clone()).or_default() += if pos { 1 } else { -1 },
            LFormula::Unit => {}
            LFormula::Bang(b) => free.extend(subformulas_of(std::iter::once(&**b))),
            LFormula::Tensor(l, r) => {
                walk(l, pos, counts, free);
                walk(r, pos, counts, free);
            }
            LFormula::Lolli(l, r) => {
                walk(l, !pos, counts, free);
                walk(r, pos, counts, free);
            }
        }
    }
    let mut counts = HashMap::new();
    let mut free = subformulas_of(formulas(int));
    walk(a, true, &mut counts, &mut free);
    for f in formulas(lin) {
        walk(f, false, &mut counts, &mut free);
    }
    counts.iter().all(|(p, n)| *n == 0 || free.contains(p))
}

type Key = (Mode, Vec<LFormula>, Vec<LFormula>, LFormula);

#[derive(Clone, Copy)]
enum Known {
    Exact(usize),
    /// No proof of at most this size.
    Above(usize),
}

fn key(mode: Mode, int: &Hyps, lin: &Hyps, a: &LFormula) -> Key {
    let mut i: Vec<LFormula> = formulas(int).cloned().collect();
    i.sort();
    i.dedup();
    let mut l: Vec<LFormula> = formulas(lin).cloned().collect();
    l.sort();
    (mode, i, l, a.clone())
}

/// Size-limited proof search over normal forms, memoised on formulas.
///
/// Search is also bounded by fuel. Once it runs out, failures stop being
/// recorded; recorded sizes are then upper bounds rather than minima, which
/// is all the builder needs.
pub struct Prover {
    memo: HashMap<Key, Known>,
    fuel: usize,
}

/// Goal expansions allowed per generated goal.
const FUEL: usize = 2_000;

impl Default for Prover {
    fn default() -> Prover {
        Prover {
            memo: HashMap::new(),
            fuel: FUEL,
        }
    }
}

impl Prover {
    pub fn new() -> Prover {
        Prover::default()
    }

    fn refuel(&mut self) {
        self.fuel = FUEL;
    }

    /// Size of the smallest normal form of `int ; lin |- a` if it is at
    /// most `limit`.
    pub fn min_nf(&mut self, int: &[(Name, LFormula)], lin: &[(Name, LFormula)], a: &LFormula, limit: usize) -> Option<usize> {
        self.min(Mode::Nf, &int.to_vec(), &lin.to_vec(), a, limit)
    }

    /// Every normal form and every neutral is a derivation.
    fn min_der(&mut self, int: &Hyps, lin: &Hyps, a: &LFormula, limit: usize) -> Option<usize> {
        let ne = self.min(Mode::Ne, int, lin, a, limit);
        let nf = self.min(Mode::Nf, int, lin, a, ne.map_or(limit, |n| n.saturating_sub(1)));
        match (ne, nf) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, y) => x.or(y),
        }
    }

    fn min_goal(&mut self, g: &Goal, limit: usize) -> Option<usize> {
        match g.mode {
            Mode::Der => self.min_der(&g.int, &g.lin, &g.formula, limit),
            m => self.min(m, &g.int, &g.lin, &g.formula, limit),
        }
    }

    fn min(&mut self, mode: Mode, int: &Hyps, lin: &Hyps, a: &LFormula, limit: usize) -> Option<usize> {
        let k = key(mode, int, lin, a);
        match self.memo.get(&k) {
            Some(Known::Exact(n)) => return (*n <= limit).then_some(*n),
            Some(Known::Above(l)) if *l >= limit => return None,
            _ => {}
        }
        if !balanced(int, lin, a) {
            self.memo.insert(k, Known::Above(usize::MAX));
            return None;
        }
        if self.fuel == 0 {
            return None;
        }
        self.fuel -= 1;
        let moves = match mode {
            Mode::Nf => nf_moves(int, lin, a),
            Mode::Ne => ne_moves(int, lin, a),
            Mode::Der => unreachable!("derivations are bounded through normal forms"),
        };
        let mut best: Option<usize> = None;
        for m in moves {
            let cap = best.map_or(limit, |b| b - 1);
            if let Some(total) = self.premise_total(&m, cap) {
                best = Some(total);
            }
        }
        match best {
            Some(n) => {
                self.memo.insert(k, Known::Exact(n));
            }
            None if self.fuel > 0 => {
                self.memo.insert(k, Known::Above(limit));
            }
            None => {}
        }
        best
    }

    /// Smallest total size of `m` with its premises, if at most `cap`.
    fn premise_total(&mut self, m: &Move, cap: usize) -> Option<usize> {
        let mut total = m.cost();
        let k = m.premises.len();
        for (i, p) in m.premises.iter().enumerate() {
            let room = cap.checked_sub(total + (k - i - 1))?;
            total += self.min_goal(p, room)?;
        }
        (total <= cap).then_some(total)
    }

    fn feasible(&mut self, moves: Vec<Move>, budget: usize) -> Vec<(Move, Vec<usize>)> {
        let mut out = Vec::new();
        for m in moves {
            let mut mins = Vec::with_capacity(m.premises.len());
            let mut total = m.cost();
            let k = m.premises.len();
            for (i, p) in m.premises.iter().enumerate() {
                let Some(room) = budget.checked_sub(total + (k - i - 1)) else {
                    break;
                };
                match self.min_goal(p, room) {
                    Some(s) => {
                        total += s;
                        mins.push(s);
                    }
                    None => break,
                }
            }
            if mins.len() == k && total <= budget {
                out.push((m, mins));
            }
        }
        out
    }

    fn build(&mut self, rng: &mut SplitMix64, g: &Goal, budget: usize, bang: bool) -> Option<Built> {
        let moves = match g.mode {
            Mode::Nf => nf_moves(&g.int, &g.lin, &g.formula),
            Mode::Ne => ne_moves(&g.int, &g.lin, &g.formula),
            Mode::Der => der_moves(&g.int, &g.lin, &g.formula, bang),
        };
        let options = self.feasible(moves, budget);
        let (intro, elim): (Vec<_>, Vec<_>) = options.into_iter().partition(|(m, _)| m.is_intro());
        let (first, second) = if intro.is_empty() || elim.is_empty() || rng.chance(6, 10) {
            (intro, elim)
        } else {
            (elim, intro)
        };
        let order = by_kind(rng, first).into_iter().chain(by_kind(rng, second));
        for (m, mins) in order {
            let slack = budget - m.cost() - mins.iter().sum::<usize>();
            let shares = split_slack(rng, slack, mins.len());
            let mut kids = Vec::with_capacity(mins.len());
            for ((p, lo), extra) in m.premises.iter().zip(&mins).zip(shares) {
                match self.build(rng, p, lo + extra, bang) {
                    Some(k) => kids.push(k),
                    None => break,
                }
            }
            if kids.len() == m.premises.len() {
                return Some(assemble(g, &m.rule, kids));
            }
        }
        None
    }
}

/// A move with the context positions it consumes.
type Placed = (Move, Vec<usize>);

fn by_kind(rng: &mut SplitMix64, moves: Vec<Placed>) -> Vec<Placed> {
    let mut groups: Vec<(u8, Vec<Placed>)> = Vec::new();
    for m in moves {
        let k = m.0.kind();
        match groups.iter_mut().find(|(g, _)| *g == k) {
            Some((_, v)) => v.push(m),
            None => groups.push((k, vec![m])),
        }
    }
    rng.shuffle(&mut groups);
    if groups.len() > 1 && groups[0].0 == 11 && rng.chance(2, 3) {
        groups.rotate_left(1);
    }
    let mut out = Vec::new();
    for (_, mut v) in groups {
        rng.shuffle(&mut v);
        out.extend(v);
    }
    out
}

fn split_slack(rng: &mut SplitMix64, slack: usize, n: usize) -> Vec<usize> {
    if n == 0 {
        return vec![];
    }
    let mut cuts: Vec<usize> = (0..n - 1).map(|_| rng.below(slack + 1)).collect();
    cuts.sort_unstable();
    let mut out = Vec::with_capacity(n);
    let mut prev = 0;
    for c in cuts {
        out.push(c - prev);
        prev = c;
    }
    out.push(slack - prev);
    out
}

enum Built {
    T(Term),
    N(LNf),
    E(LNe),
}

impl Built {
    fn t(self) -> Term {
        match self {
            Built::T(t) => t,
            _ => unreachable!("derivation premise"),
        }
    }
    fn n(self) -> LNf {
        match self {
            Built::N(n) => n,
            _ => unreachable!("normal premise"),
        }
    }
    fn e(self) -> LNe {
        match self {
            Built::E(e) => e,
            _ => unreachable!("neutral premise"),
        }
    }
}

fn assemble(g: &Goal, rule: &Rule, kids: Vec<Built>) -> Built {
    let mut it = kids.into_iter();
    let mut next = || it.next().expect("premise");
    let a = &g.formula;
    match g.mode {
        Mode::Der => Built::T(match rule {
            Rule::Ax(x) => Term::Ax(x.clone(), a.clone()),
            Rule::AxInt(x) => Term::AxInt(x.clone(), a.clone()),
            Rule::Lam(x) => Term::lam(x, next().t()),
            Rule::Unit => Term::Unit,
            Rule::Bang => Term::bang(next().t()),
            Rule::App => {
                let f = next().t();
                Term::app(f, next().t())
            }
            Rule::Pair => {
                let l = next().t();
                Term::pair(l, next().t())
            }
            Rule::LetU => {
                let s = next().t();
                Term::letu(s, next().t())
            }
            Rule::LetT(x, y) => {
                let s = next().t();
                Term::lett(x, y, s, next().t())
            }
            Rule::LetB(x) => {
                let s = next().t();
                Term::letb(x, s, next().t())
            }
            Rule::Sw => unreachable!("no phase switch in derivations"),
        }),
        Mode::Nf => Built::N(match rule {
            Rule::Lam(x) => LNf::Lam(x.clone(), Box::new(next().n())),
            Rule::Unit => LNf::Unit,
            Rule::Bang => LNf::Bang(Box::new(next().n())),
            Rule::Pair => {
                let l = next().n();
                LNf::Pair(Box::new(l), Box::new(next().n()))
            }
            Rule::LetU => {
                let s = next().e();
                LNf::LetU(Box::new(s), Box::new(next().n()))
            }
            Rule::LetT(x, y) => {
                let s = next().e();
                LNf::LetT(x.clone(), y.clone(), Box::new(s), Box::new(next().n()))
            }
            Rule::LetB(x) => {
                let s = next().e();
                LNf::LetB(x.clone(), Box::new(s), Box::new(next().n()))
            }
            Rule::Sw => LNf::Sw(Box::new(next().e())),
            _ => unreachable!("not a normal-form rule"),
        }),
        Mode::Ne => Built::E(match rule {
            Rule::Ax(x) => LNe::Ax(x.clone(), a.clone()),
            Rule::AxInt(x) => LNe::AxInt(x.clone(), a.clone()),
            Rule::App => {
                let f = next().e();
                LNe::App(Box::new(f), Box::new(next().n()))
            }
            _ => unreachable!("not a neutral rule"),
        }),
    }
}

fn random_formula(rng: &mut SplitMix64, atoms: &[LFormula], depth: usize, bang: bool) -> LFormula {
    if depth == 0 || rng.chance(2, 5) {
        return if rng.chance(1, 8) {
            LFormula::Unit
        } else {
            rng.pick(atoms).clone()
        };
    }
    if bang && rng.chance(1, 5) {
        return LFormula::bang(random_formula(rng, atoms, depth - 1, bang));
    }
    let a = random_formula(rng, atoms, depth - 1, bang);
    let b = random_formula(rng, atoms, depth - 1, bang);
    if rng.chance(1, 2) {
        LFormula::tensor(a, b)
    } else {
        LFormula::lolli(a, b)
    }
}

/// A small provable sequent, as intuitionistic and linear formulas.
fn chunk(rng: &mut SplitMix64, atoms: &[LFormula], depth: usize, bang: bool) -> (Vec<LFormula>, Vec<LFormula>, LFormula) {
    let mut f = |d: usize| random_formula(rng, atoms, d, bang);
    let x = f(depth);
    let y = f(depth.saturating_sub(1));
    let z = f(depth.saturating_sub(1));
    let lolli = LFormula::lolli;
    let pick = rng.below(if bang { 11 } else { 8 });
    match pick {
        0 | 1 => (vec![], vec![x.clone()], x),
        2 => (vec![], vec![], LFormula::Unit),
        3 => (vec![], vec![lolli(x.clone(), y.clone()), x], y),
        4 => (vec![], vec![x.clone()], lolli(lolli(x, y.clone()), y)),
        5 => (vec![], vec![x.clone(), y.clone()], LFormula::tensor(y, x)),
        6 => (vec![], vec![lolli(x.clone(), y.clone()), lolli(y, z.clone())], lolli(x, z)),
        7 => (vec![], vec![LFormula::tensor(x.clone(), y.clone())], LFormula::tensor(y, x)),
        8 => (vec![x.clone()], vec![], LFormula::bang(x)),
        9 => (vec![], vec![LFormula::bang(x.clone())], LFormula::tensor(x.clone(), x)),
        _ => (vec![x.clone()], vec![lolli(x.clone(), y.clone())], y),
    }
}

fn named(prefix: &str, fs: Vec<LFormula>) -> Hyps {
    fs.into_iter()
        .enumerate()
        .map(|(i, f)| (Name::new(&format!("{}{}", prefix, i)), f))
        .collect()
}

fn pick_goal(rng: &mut SplitMix64, prover: &mut Prover, atoms: &[LFormula], max_nodes: usize, mode: Mode, bang: bool) -> Goal {
    const ATTEMPTS: usize = 24;
    for attempt in 0..ATTEMPTS {
        let shrink = attempt * 3 / ATTEMPTS;
        let pieces = 1 + rng.below(3 - shrink);
        let depth = 2 - shrink.min(2);
        let (mut int, mut lin) = (Vec::new(), Vec::new());
        let mut succ: Option<LFormula> = None;
        for _ in 0..pieces {
            let (i, l, a) = chunk(rng, atoms, depth, bang);
            int.extend(i);
            lin.extend(l);
            succ = Some(match succ {
                None => a,
                Some(prev) => LFormula::tensor(prev, a),
            });
        }
        let mut succ = succ.expect("at least one piece");
        if !lin.is_empty() && rng.chance(1, 3) {
            let last = lin.pop().expect("nonempty");
            succ = LFormula::lolli(last, succ);
        }
        let g = goal(mode, &named("g", int), named("h", lin), succ);
        prover.refuel();
        if prover.min_goal(&g, max_nodes).is_some() {
            return g;
        }
    }
    let a = atoms[0].clone();
    goal(mode, &[], named("h", vec![a.clone()]), a)
}

fn check(cfg: &GenConfig) -> Result<bool> {
    cfg.check()?;
    match cfg.calculus {
        Calculus::Mill => Ok(false),
        Calculus::Dill => Ok(true),
        Calculus::Lambek => Err(Error::InvalidConfig(
            "the ordered calculus has its own generator".into(),
        )),
    }
}

fn generate(cfg: &GenConfig, mode: Mode) -> Result<Built> {
    let bang = check(cfg)?;
    let mut rng = cfg.rng();
    let mut prover = Prover::new();
    let atoms: Vec<LFormula> = cfg.atoms.iter().map(|a| LFormula::atom(a)).collect();
    let g = pick_goal(&mut rng, &mut prover, &atoms, cfg.max_nodes, mode, bang);
    prover.refuel();
    prover.build(&mut rng, &g, cfg.max_nodes, bang).ok_or_else(|| {
        Error::GenerationExhausted(format!(
            "nothing proves {} within {} nodes",
            g.formula, cfg.max_nodes
        ))
    })
}

/// A random term of the calculus `cfg.calculus` (MILL or DILL) with at
/// most `cfg.max_nodes` nodes.
pub fn gen_term(cfg: &GenConfig) -> Result<Term> {
    Ok(generate(cfg, Mode::Der)?.t())
}

pub fn gen_nf(cfg: &GenConfig) -> Result<LNf> {
    Ok(generate(cfg, Mode::Nf)?.n())
}

pub fn rule_set(cfg: &GenConfig) -> Result<RuleSet> {
    Ok(if check(cfg)? {
        RuleSet::Exponential
    } else {
        RuleSet::Linear
    })
}

/// Up to five steps, each drawn uniformly from those applicable so far.
pub fn gen_trace(cfg: &GenConfig, t: &Term) -> Result<Vec<Step>> {
    let rules = rule_set(cfg)?;
    let mut rng = SplitMix64::new(cfg.seed ^ 0x5DEE_CE66_D1CE_4E5B);
    let want = 1 + rng.below(5);
    let mut cur = t.clone();
    let mut trace = Vec::new();
    for _ in 0..want {
        let steps = applicable_steps(&cur, rules, cfg.eta_cap)?;
        if steps.is_empty() {
            break;
        }
        let s = rng.pick(&steps).clone();
        cur = apply_step(&cur, rules, &s)?;
        trace.push(s);
    }
    Ok(trace)
}
