//! Seeded generation of derivations, normal forms, rewrite traces and
//! monadic chains.
//!
//! Generation is goal directed: a provable sequent is assembled from small
//! chunks, then a derivation of it is grown top-down. A memoised prover
//! over normal forms tells, for every candidate rule, the smallest size its
//! premises can be closed in, so a choice that cannot fit the node budget
//! is never taken.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::nf::{Ne, Nf};
use crate::rewrite::{applicable_steps, apply_step, RewriteStep};
use crate::sem::{MonadicValue, Payload};
use crate::syntax::{Context, Derivation, Formula};

/// The splitmix64 generator.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> SplitMix64 {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `0..n`. `n` must be positive.
    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }

    pub fn chance(&mut self, num: u64, den: u64) -> bool {
        self.next_u64() % den < num
    }

    pub fn pick<'a, T>(&mut self, xs: &'a [T]) -> &'a T {
        &xs[self.below(xs.len())]
    }

    pub fn shuffle<T>(&mut self, xs: &mut [T]) {
        for i in (1..xs.len()).rev() {
            xs.swap(i, self.below(i + 1));
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Calculus {
    Lambek,
    Mill,
    Dill,
}

impl fmt::Display for Calculus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Calculus::Lambek => "lambek",
            Calculus::Mill => "mill",
            Calculus::Dill => "dill",
        })
    }
}

impl FromStr for Calculus {
    type Err = Error;

    fn from_str(s: &str) -> Result<Calculus> {
        match s.to_ascii_lowercase().as_str() {
            "lambek" | "l" => Ok(Calculus::Lambek),
            "mill" => Ok(Calculus::Mill),
            "dill" => Ok(Calculus::Dill),
            _ => Err(Error::InvalidConfig(format!("unknown calculus `{}`", s))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenConfig {
    pub seed: u64,
    pub max_nodes: usize,
    pub atoms: Vec<String>,
    pub calculus: Calculus,
    pub eta_cap: usize,
}

impl GenConfig {
    /// Atoms `p, q, r`, the Lambek calculus, η cap 40.
    pub fn new(seed: u64, max_nodes: usize) -> GenConfig {
        GenConfig {
            seed,
            max_nodes,
            atoms: vec!["p".into(), "q".into(), "r".into()],
            calculus: Calculus::Lambek,
            eta_cap: 40,
        }
    }

    pub fn with_seed(&self, seed: u64) -> GenConfig {
        GenConfig {
            seed,
            ..self.clone()
        }
    }

    pub fn check(&self) -> Result<()> {
        if self.max_nodes == 0 {
            return Err(Error::InvalidConfig("maxNodes must be at least 1".into()));
        }
        if self.atoms.is_empty() {
            return Err(Error::InvalidConfig("the atom alphabet is empty".into()));
        }
        for a in &self.atoms {
            let mut cs = a.chars();
            let ok = cs.next().is_some_and(|c| c.is_ascii_lowercase())
                && cs.all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !ok {
                return Err(Error::InvalidConfig(format!("`{}` is not an atom name", a)));
            }
        }
        Ok(())
    }

    pub(crate) fn rng(&self) -> SplitMix64 {
        SplitMix64::new(self.seed)
    }

    pub(crate) fn atom_formulas(&self) -> Vec<Formula> {
        self.atoms.iter().map(|a| Formula::atom(a)).collect()
    }
}

pub(crate) fn subformulas(f: &Formula, out: &mut BTreeSet<Formula>) {
    if !out.insert(f.clone()) {
        return;
    }
    match f {
        Formula::Atom(_) | Formula::Unit => {}
        Formula::Tensor(a, b) | Formula::Over(a, b) | Formula::Under(a, b) => {
            subformulas(a, out);
            subformulas(b, out);
        }
    }
}

fn subformulas_of(g: &[Formula]) -> BTreeSet<Formula> {
    let mut out = BTreeSet::new();
    for f in g {
        subformulas(f, &mut out);
    }
    out
}

fn cat(parts: &[&[Formula]]) -> Vec<Formula> {
    parts.iter().flat_map(|p| p.iter().cloned()).collect()
}

/// A context of at most two formulas as one formula.
fn pack(g: &[Formula]) -> Option<Formula> {
    match g {
        [] => Some(Formula::Unit),
        [a] => Some(a.clone()),
        [a, b] => Some(Formula::tensor(a.clone(), b.clone())),
        _ => None,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Mode {
    Nf,
    Ne,
    Der,
}

#[derive(Clone, Debug)]
struct Goal {
    mode: Mode,
    cxt: Vec<Formula>,
    formula: Formula,
}

fn goal(mode: Mode, cxt: Vec<Formula>, formula: Formula) -> Goal {
    Goal { mode, cxt, formula }
}

#[derive(Clone, Copy, Debug)]
enum Rule {
    Ax,
    IUnit,
    IOver,
    IUnder,
    ITensor,
    EUnit(usize),
    ETensor(usize),
    EOver,
    EUnder,
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
        match self.rule {
            Rule::Ax => 0,
            Rule::IUnit => 1,
            Rule::IOver => 2,
            Rule::IUnder => 3,
            Rule::ITensor => 4,
            // An empty scrutinee is a unit redex; kept apart from real eliminations.
            Rule::EUnit(_) if self.premises[0].cxt.is_empty() => 5,
            Rule::EUnit(_) => 6,
            Rule::ETensor(_) => 7,
            Rule::EOver => 8,
            Rule::EUnder => 9,
            Rule::Sw => 10,
        }
    }

    fn is_intro(&self) -> bool {
        matches!(
            self.rule,
            Rule::Ax | Rule::IUnit | Rule::IOver | Rule::IUnder | Rule::ITensor
        )
    }
}

enum Built {
    D(Derivation),
    N(Nf),
    E(Ne),
}

impl Built {
    fn d(self) -> Derivation {
        match self {
            Built::D(d) => d,
            _ => unreachable!("derivation premise"),
        }
    }
    fn n(self) -> Nf {
        match self {
            Built::N(n) => n,
            _ => unreachable!("normal premise"),
        }
    }
    fn e(self) -> Ne {
        match self {
            Built::E(e) => e,
            _ => unreachable!("neutral premise"),
        }
    }
}

type Key = (Mode, Vec<Formula>, Formula);

/// Proof search over normal forms of the Lambek calculus, memoised.
#[derive(Default)]
pub struct Prover {
    memo: HashMap<Key, Option<usize>>,
}

impl Prover {
    pub fn new() -> Prover {
        Prover::default()
    }

    /// Size of the smallest normal form of `g ⊢ a`, or `None` when the
    /// sequent is not provable.
    pub fn min_nf(&mut self, g: &[Formula], a: &Formula) -> Option<usize> {
        self.min(Mode::Nf, g, a)
    }

    pub fn min_ne(&mut self, g: &[Formula], a: &Formula) -> Option<usize> {
        self.min(Mode::Ne, g, a)
    }

    pub fn provable(&mut self, g: &[Formula], a: &Formula) -> bool {
        self.min_nf(g, a).is_some()
    }

    /// An upper bound on the smallest derivation.
    fn min_der(&mut self, g: &[Formula], a: &Formula) -> Option<usize> {
        if g.len() == 1 && g[0] == *a {
            Some(1)
        } else {
            self.min_nf(g, a)
        }
    }

    fn min_goal(&mut self, p: &Goal) -> Option<usize> {
        match p.mode {
            Mode::Der => self.min_der(&p.cxt, &p.formula),
            m => self.min(m, &p.cxt, &p.formula),
        }
    }

    fn min(&mut self, mode: Mode, g: &[Formula], a: &Formula) -> Option<usize> {
        let key = (mode, g.to_vec(), a.clone());
        if let Some(v) = self.memo.get(&key) {
            return *v;
        }
        // Placeholder guards against re-entry.
        self.memo.insert(key.clone(), None);
        let mut best: Option<usize> = None;
        for m in moves(mode, g, a) {
            let mut total = m.cost();
            let mut ok = true;
            for p in &m.premises {
                match self.min_goal(p) {
                    Some(s) => total += s,
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok && best.is_none_or(|b| total < b) {
                best = Some(total);
            }
        }
        self.memo.insert(key, best);
        best
    }

    /// Moves whose premises can all be closed within `budget`, with the
    /// minimal premise sizes.
    fn feasible(&mut self, mode: Mode, g: &[Formula], a: &Formula, budget: usize) -> Vec<(Move, Vec<usize>)> {
        let mut out = Vec::new();
        for m in moves(mode, g, a) {
            let mut mins = Vec::with_capacity(m.premises.len());
            let mut total = m.cost();
            for p in &m.premises {
                match self.min_goal(p) {
                    Some(s) => {
                        total += s;
                        mins.push(s);
                    }
                    None => break,
                }
            }
            if mins.len() == m.premises.len() && total <= budget {
                out.push((m, mins));
            }
        }
        out
    }

    fn build(
        &mut self,
        rng: &mut SplitMix64,
        mode: Mode,
        g: &[Formula],
        a: &Formula,
        budget: usize,
    ) -> Option<Built> {
        let mut options = self.feasible(mode, g, a, budget);
        let (intro, elim): (Vec<_>, Vec<_>) = options.drain(..).partition(|(m, _)| m.is_intro());
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
                match self.build(rng, p.mode, &p.cxt, &p.formula, lo + extra) {
                    Some(k) => kids.push(k),
                    None => break,
                }
            }
            if kids.len() == m.premises.len() {
                return Some(assemble(mode, m.rule, a, kids));
            }
        }
        None
    }
}

/// A move with the context positions it consumes.
type Placed = (Move, Vec<usize>);

/// Shuffles moves so that each rule kind is equally likely to come first,
/// however many instances it has.
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
    // Unit redexes are cheap filler; demote them most of the time.
    if groups.len() > 1 && groups[0].0 == 5 && rng.chance(2, 3) {
        groups.rotate_left(1);
    }
    let mut out = Vec::new();
    for (_, mut v) in groups {
        rng.shuffle(&mut v);
        out.extend(v);
    }
    out
}

/// Random composition of `slack` into `n` parts.
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

fn assemble(mode: Mode, rule: Rule, a: &Formula, kids: Vec<Built>) -> Built {
    let mut it = kids.into_iter();
    let mut next = || it.next().expect("premise");
    match mode {
        Mode::Der => Built::D(match rule {
            Rule::Ax => Derivation::ax(a.clone()),
            Rule::IUnit => Derivation::IUnit,
            Rule::IOver => Derivation::i_over(next().d()),
            Rule::IUnder => Derivation::i_under(next().d()),
            Rule::ITensor => {
                let l = next().d();
                Derivation::i_tensor(l, next().d())
            }
            Rule::EUnit(k) => {
                let s = next().d();
                Derivation::e_unit(k, s, next().d())
            }
            Rule::ETensor(k) => {
                let s = next().d();
                Derivation::e_tensor(k, s, next().d())
            }
            Rule::EOver => {
                let f = next().d();
                Derivation::e_over(f, next().d())
            }
            Rule::EUnder => {
                let x = next().d();
                Derivation::e_under(x, next().d())
            }
            Rule::Sw => unreachable!("no phase switch in derivations"),
        }),
        Mode::Nf => Built::N(match rule {
            Rule::IUnit => Nf::IUnit,
            Rule::IOver => Nf::i_over(next().n()),
            Rule::IUnder => Nf::i_under(next().n()),
            Rule::ITensor => {
                let l = next().n();
                Nf::i_tensor(l, next().n())
            }
            Rule::EUnit(k) => {
                let s = next().e();
                Nf::e_unit(k, s, next().n())
            }
            Rule::ETensor(k) => {
                let s = next().e();
                Nf::e_tensor(k, s, next().n())
            }
            Rule::Sw => Nf::sw(next().e()),
            _ => unreachable!("not a normal-form rule"),
        }),
        Mode::Ne => Built::E(match rule {
            Rule::Ax => Ne::ax(a.clone()),
            Rule::EOver => {
                let f = next().e();
                Ne::e_over(f, next().n())
            }
            Rule::EUnder => {
                let x = next().n();
                Ne::e_under(x, next().e())
            }
            _ => unreachable!("not a neutral rule"),
        }),
    }
}

fn moves(mode: Mode, g: &[Formula], a: &Formula) -> Vec<Move> {
    match mode {
        Mode::Nf => nf_moves(g, a),
        Mode::Ne => ne_moves(g, a),
        Mode::Der => der_moves(g, a),
    }
}

fn mv(rule: Rule, premises: Vec<Goal>) -> Move {
    Move { rule, premises }
}

fn nf_moves(g: &[Formula], a: &Formula) -> Vec<Move> {
    use Mode::{Ne as E, Nf as N};
    let n = g.len();
    match a {
        Formula::Over(b, c) => {
            return vec![mv(Rule::IOver, vec![goal(N, cat(&[g, &[(**c).clone()]]), (**b).clone())])]
        }
        Formula::Under(c, b) => {
            return vec![mv(Rule::IUnder, vec![goal(N, cat(&[&[(**c).clone()], g]), (**b).clone())])]
        }
        _ => {}
    }
    let mut out = Vec::new();
    match a {
        Formula::Unit if n == 0 => out.push(mv(Rule::IUnit, vec![])),
        Formula::Tensor(b, c) => {
            for i in 0..=n {
                out.push(mv(
                    Rule::ITensor,
                    vec![goal(N, g[..i].to_vec(), (**b).clone()), goal(N, g[i..].to_vec(), (**c).clone())],
                ));
            }
        }
        Formula::Atom(_) => out.push(mv(Rule::Sw, vec![goal(E, g.to_vec(), a.clone())])),
        _ => {}
    }
    for i in 0..n {
        for j in i + 1..=n {
            let seg = &g[i..j];
            for x in subformulas_of(seg) {
                match &x {
                    Formula::Unit => out.push(mv(
                        Rule::EUnit(i),
                        vec![goal(E, seg.to_vec(), x.clone()), goal(N, cat(&[&g[..i], &g[j..]]), a.clone())],
                    )),
                    Formula::Tensor(l, r) => out.push(mv(
                        Rule::ETensor(i),
                        vec![
                            goal(E, seg.to_vec(), x.clone()),
                            goal(N, cat(&[&g[..i], &[(**l).clone(), (**r).clone()], &g[j..]]), a.clone()),
                        ],
                    )),
                    _ => {}
                }
            }
        }
    }
    out
}

fn ne_moves(g: &[Formula], a: &Formula) -> Vec<Move> {
    use Mode::{Ne as E, Nf as N};
    let n = g.len();
    let mut out = Vec::new();
    if n == 1 && g[0] == *a {
        out.push(mv(Rule::Ax, vec![]));
    }
    for i in 1..=n {
        for f in subformulas_of(&g[..i]) {
            if let Formula::Over(res, arg) = &f {
                if **res == *a {
                    out.push(mv(
                        Rule::EOver,
                        vec![goal(E, g[..i].to_vec(), f.clone()), goal(N, g[i..].to_vec(), (**arg).clone())],
                    ));
                }
            }
        }
    }
    for i in 0..n {
        for f in subformulas_of(&g[i..]) {
            if let Formula::Under(arg, res) = &f {
                if **res == *a {
                    out.push(mv(
                        Rule::EUnder,
                        vec![goal(N, g[..i].to_vec(), (**arg).clone()), goal(E, g[i..].to_vec(), f.clone())],
                    ));
                }
            }
        }
    }
    out
}

fn der_moves(g: &[Formula], a: &Formula) -> Vec<Move> {
    use Mode::Der as D;
    let n = g.len();
    let mut out = Vec::new();
    if n == 1 && g[0] == *a {
        out.push(mv(Rule::Ax, vec![]));
    }
    match a {
        Formula::Unit if n == 0 => out.push(mv(Rule::IUnit, vec![])),
        Formula::Over(b, c) => out.push(mv(Rule::IOver, vec![goal(D, cat(&[g, &[(**c).clone()]]), (**b).clone())])),
        Formula::Under(c, b) => out.push(mv(Rule::IUnder, vec![goal(D, cat(&[&[(**c).clone()], g]), (**b).clone())])),
        Formula::Tensor(b, c) => {
            for i in 0..=n {
                out.push(mv(
                    Rule::ITensor,
                    vec![goal(D, g[..i].to_vec(), (**b).clone()), goal(D, g[i..].to_vec(), (**c).clone())],
                ));
            }
        }
        _ => {}
    }
    for i in 0..=n {
        for j in i..=n {
            let seg = &g[i..j];
            let subs = subformulas_of(seg);
            if i == j || subs.contains(&Formula::Unit) {
                out.push(mv(
                    Rule::EUnit(i),
                    vec![goal(D, seg.to_vec(), Formula::Unit), goal(D, cat(&[&g[..i], &g[j..]]), a.clone())],
                ));
            }
            let mut tensors: BTreeSet<Formula> =
                subs.into_iter().filter(|f| matches!(f, Formula::Tensor(..))).collect();
            if seg.len() == 2 {
                tensors.insert(pack(seg).expect("two formulas"));
            }
            for x in tensors {
                if let Formula::Tensor(l, r) = &x {
                    out.push(mv(
                        Rule::ETensor(i),
                        vec![
                            goal(D, seg.to_vec(), x.clone()),
                            goal(D, cat(&[&g[..i], &[(**l).clone(), (**r).clone()], &g[j..]]), a.clone()),
                        ],
                    ));
                }
            }
        }
    }
    for i in 1..=n {
        let mut args: BTreeSet<Formula> = subformulas_of(&g[..i])
            .into_iter()
            .filter_map(|f| match f {
                Formula::Over(res, arg) if *res == *a => Some((*arg).clone()),
                _ => None,
            })
            .collect();
        args.extend(pack(&g[i..]));
        for c in args {
            out.push(mv(
                Rule::EOver,
                vec![goal(D, g[..i].to_vec(), Formula::over(a.clone(), c.clone())), goal(D, g[i..].to_vec(), c)],
            ));
        }
    }
    for i in 0..n {
        let mut args: BTreeSet<Formula> = subformulas_of(&g[i..])
            .into_iter()
            .filter_map(|f| match f {
                Formula::Under(arg, res) if *res == *a => Some((*arg).clone()),
                _ => None,
            })
            .collect();
        args.extend(pack(&g[..i]));
        for c in args {
            out.push(mv(
                Rule::EUnder,
                vec![goal(D, g[..i].to_vec(), c.clone()), goal(D, g[i..].to_vec(), Formula::under(c, a.clone()))],
            ));
        }
    }
    out
}

pub(crate) fn random_formula(rng: &mut SplitMix64, atoms: &[Formula], depth: usize) -> Formula {
    if depth == 0 || rng.chance(2, 5) {
        return if rng.chance(1, 8) {
            Formula::Unit
        } else {
            rng.pick(atoms).clone()
        };
    }
    let a = random_formula(rng, atoms, depth - 1);
    let b = random_formula(rng, atoms, depth - 1);
    match rng.below(3) {
        0 => Formula::tensor(a, b),
        1 => Formula::over(a, b),
        _ => Formula::under(a, b),
    }
}

/// A small provable sequent.
fn chunk(rng: &mut SplitMix64, atoms: &[Formula], depth: usize) -> (Vec<Formula>, Formula) {
    let mut f = |d: usize| random_formula(rng, atoms, d);
    let x = f(depth);
    let y = f(depth.saturating_sub(1));
    let z = f(depth.saturating_sub(1));
    match rng.below(8) {
        0 | 1 => (vec![x.clone()], x),
        2 => (vec![], Formula::Unit),
        3 => (vec![Formula::over(y.clone(), x.clone()), x], y),
        4 => (vec![x.clone(), Formula::under(x, y.clone())], y),
        5 => (vec![x.clone()], Formula::over(y.clone(), Formula::under(x, y))),
        6 => (vec![x.clone()], Formula::under(Formula::over(y.clone(), x), y)),
        _ => (
            vec![Formula::over(x.clone(), y.clone()), Formula::over(y, z.clone())],
            Formula::over(x, z),
        ),
    }
}

/// Picks a provable goal whose smallest proof fits `max_nodes`; falls back
/// to smaller goals, and finally to an atomic identity.
fn pick_goal(
    rng: &mut SplitMix64,
    prover: &mut Prover,
    atoms: &[Formula],
    max_nodes: usize,
    normal: bool,
) -> (Vec<Formula>, Formula) {
    const ATTEMPTS: usize = 24;
    for attempt in 0..ATTEMPTS {
        let shrink = attempt * 3 / ATTEMPTS;
        let pieces = 1 + rng.below(3 - shrink);
        let depth = 2 - shrink.min(2);
        let mut cxt = Vec::new();
        let mut goal: Option<Formula> = None;
        for _ in 0..pieces {
            let (g, a) = chunk(rng, atoms, depth);
            cxt.extend(g);
            goal = Some(match goal {
                None => a,
                Some(prev) => Formula::tensor(prev, a),
            });
        }
        let mut goal = goal.expect("at least one piece");
        match rng.below(4) {
            0 if !cxt.is_empty() => {
                let last = cxt.pop().expect("nonempty");
                goal = Formula::over(goal, last);
            }
            1 if !cxt.is_empty() => {
                let first = cxt.remove(0);
                goal = Formula::under(first, goal);
            }
            _ => {}
        }
        let min = if normal {
            prover.min_nf(&cxt, &goal)
        } else {
            prover.min_der(&cxt, &goal)
        };
        if min.is_some_and(|m| m <= max_nodes) {
            return (cxt, goal);
        }
    }
    let a = atoms[0].clone();
    (vec![a.clone()], a)
}

/// A random Lambek derivation of at most `cfg.max_nodes` nodes.
pub fn gen_derivation(cfg: &GenConfig) -> Result<Derivation> {
    cfg.check()?;
    if cfg.calculus != Calculus::Lambek {
        return Err(Error::InvalidConfig(format!(
            "derivations of {} are generated by its own module",
            cfg.calculus
        )));
    }
    let mut rng = cfg.rng();
    let mut prover = Prover::new();
    let atoms = cfg.atom_formulas();
    let (g, a) = pick_goal(&mut rng, &mut prover, &atoms, cfg.max_nodes, false);
    match prover.build(&mut rng, Mode::Der, &g, &a, cfg.max_nodes) {
        Some(b) => Ok(b.d()),
        None => Err(Error::GenerationExhausted(format!(
            "no derivation of {} |- {} within {} nodes",
            Context::from(g),
            a,
            cfg.max_nodes
        ))),
    }
}

/// A random normal form of at most `cfg.max_nodes` nodes.
pub fn gen_nf(cfg: &GenConfig) -> Result<Nf> {
    cfg.check()?;
    if cfg.calculus != Calculus::Lambek {
        return Err(Error::InvalidConfig(format!(
            "normal forms of {} are generated by its own module",
            cfg.calculus
        )));
    }
    let mut rng = cfg.rng();
    let mut prover = Prover::new();
    let atoms = cfg.atom_formulas();
    let (g, a) = pick_goal(&mut rng, &mut prover, &atoms, cfg.max_nodes, true);
    match prover.build(&mut rng, Mode::Nf, &g, &a, cfg.max_nodes) {
        Some(b) => Ok(b.n()),
        None => Err(Error::GenerationExhausted(format!(
            "no normal form of {} |- {} within {} nodes",
            Context::from(g),
            a,
            cfg.max_nodes
        ))),
    }
}

/// Up to five steps, each drawn uniformly from the steps applicable to the
/// term reached so far.
pub fn gen_trace(cfg: &GenConfig, t: &Derivation) -> Result<Vec<RewriteStep>> {
    cfg.check()?;
    let mut rng = SplitMix64::new(cfg.seed ^ 0x5DEE_CE66_D1CE_4E5B);
    let want = 1 + rng.below(5);
    let mut cur = t.clone();
    let mut trace = Vec::new();
    for _ in 0..want {
        let steps = applicable_steps(&cur, cfg.eta_cap)?;
        if steps.is_empty() {
            break;
        }
        let s = rng.pick(&steps).clone();
        cur = apply_step(&cur, &s)?;
        trace.push(s);
    }
    Ok(trace)
}

/// A leaf for monadic chains: a tuple of distinct hypotheses, given as
/// its context, a normal form and the formula it proves.
pub fn gen_leaf(rng: &mut SplitMix64, atoms: &[Formula]) -> (Context, Nf, Formula) {
    let n = rng.below(4);
    let xs: Vec<Formula> = (0..n).map(|_| rng.pick(atoms).clone()).collect();
    let mut nf = Nf::IUnit;
    let mut f = Formula::Unit;
    for (i, x) in xs.iter().rev().enumerate() {
        let here = Nf::sw(Ne::ax(x.clone()));
        if i == 0 {
            nf = here;
            f = x.clone();
        } else {
            nf = Nf::i_tensor(here, nf);
            f = Formula::tensor(x.clone(), f);
        }
    }
    (Context::from(xs), nf, f)
}

/// Wraps `leaf` (living at `leaf_cxt`) in up to `max_len` random
/// eliminator links, built from the inside out.
pub fn gen_chain(
    rng: &mut SplitMix64,
    atoms: &[Formula],
    leaf_cxt: &Context,
    leaf: Payload,
    max_len: usize,
) -> MonadicValue {
    let mut cur = MonadicValue::eta(leaf_cxt.clone(), leaf);
    let len = rng.below(max_len + 1);
    for _ in 0..len {
        let cxt = cur.cxt();
        let tensor = cxt.len() >= 2 && rng.chance(1, 2);
        let (scrut, pre, post, parts) = if tensor {
            let i = rng.below(cxt.len() - 1);
            let (l, r) = (cxt[i].clone(), cxt[i + 1].clone());
            (
                Formula::tensor(l.clone(), r.clone()),
                cxt.slice(0, i),
                cxt.slice(i + 2, cxt.len()),
                Some((l, r)),
            )
        } else {
            let i = rng.below(cxt.len() + 1);
            (Formula::Unit, cxt.slice(0, i), cxt.slice(i, cxt.len()), None)
        };
        // Either the hypothesis itself or an application yielding it.
        let (mid, ne) = if rng.chance(1, 3) {
            let s = rng.pick(atoms).clone();
            let f = Formula::over(scrut.clone(), s.clone());
            (
                Context::from(vec![f.clone(), s.clone()]),
                Ne::e_over(Ne::ax(f), Nf::sw(Ne::ax(s))),
            )
        } else {
            (Context::singleton(scrut.clone()), Ne::ax(scrut))
        };
        let rest = Box::new(cur);
        cur = match parts {
            Some((left, right)) => MonadicValue::ETensor {
                pre,
                mid,
                post,
                ne,
                left,
                right,
                rest,
            },
            None => MonadicValue::EUnit {
                pre,
                mid,
                post,
                ne,
                rest,
            },
        };
    }
    cur
}
