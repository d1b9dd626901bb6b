//! Formulas, ordered contexts and natural-deduction derivations of the
//! Lambek calculus with unit and tensor.
//!
//! Derivations are variable-free: hypotheses are identified by their
//! position in the antecedent. Only axiom leaves mention formulas, every
//! other sequent is synthesized bottom-up by [`typecheck`]. The two
//! positive eliminators record the split point of their conclusion
//! explicitly, since it cannot be recovered from the premises.

use std::fmt;
use std::ops::Deref;
use std::sync::Arc;

use crate::error::{Error, Result};

/// A list of child indices addressing a subterm; the empty path is the root.
pub type Path = Vec<usize>;

/// Dot-separated rendering of a path; the root renders as the empty string.
pub fn path_string(path: &[usize]) -> String {
    path.iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(".")
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Formula {
    Atom(Arc<str>),
    Unit,
    Tensor(Arc<Formula>, Arc<Formula>),
    /// `B / A`: result first, argument on the right.
    Over(Arc<Formula>, Arc<Formula>),
    /// `A \ B`: argument first, result on the right.
    Under(Arc<Formula>, Arc<Formula>),
}

impl Formula {
    pub fn atom(name: &str) -> Formula {
        Formula::Atom(Arc::from(name))
    }

    pub fn tensor(left: Formula, right: Formula) -> Formula {
        Formula::Tensor(Arc::new(left), Arc::new(right))
    }

    pub fn over(result: Formula, arg: Formula) -> Formula {
        Formula::Over(Arc::new(result), Arc::new(arg))
    }

    pub fn under(arg: Formula, result: Formula) -> Formula {
        Formula::Under(Arc::new(arg), Arc::new(result))
    }

    /// Neither `B / A` nor `A \ B`.
    pub fn is_non_negative(&self) -> bool {
        !matches!(self, Formula::Over(..) | Formula::Under(..))
    }

    pub fn is_atom(&self) -> bool {
        matches!(self, Formula::Atom(_))
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::Unit => 1,
            Formula::Tensor(a, b) | Formula::Over(a, b) | Formula::Under(a, b) => {
                1 + a.size() + b.size()
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::text::print_formula(self))
    }
}

/// An ordered, possibly empty list of formulas.
#[derive(Clone, Default, PartialEq, Eq, Hash, Debug)]
pub struct Context(Vec<Formula>);

impl Context {
    pub fn new() -> Context {
        Context(Vec::new())
    }

    pub fn singleton(f: Formula) -> Context {
        Context(vec![f])
    }

    pub fn concat(&self, other: &Context) -> Context {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Context(v)
    }

    pub fn push(&mut self, f: Formula) {
        self.0.push(f);
    }

    /// Copy of `self[range]`.
    pub fn slice(&self, from: usize, to: usize) -> Context {
        Context(self.0[from..to].to_vec())
    }

    pub fn into_vec(self) -> Vec<Formula> {
        self.0
    }
}

impl Deref for Context {
    type Target = [Formula];

    fn deref(&self) -> &[Formula] {
        &self.0
    }
}

impl From<Vec<Formula>> for Context {
    fn from(v: Vec<Formula>) -> Context {
        Context(v)
    }
}

impl FromIterator<Formula> for Context {
    fn from_iter<I: IntoIterator<Item = Formula>>(iter: I) -> Context {
        Context(iter.into_iter().collect())
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|a| a.to_string()).collect();
        f.write_str(&parts.join(", "))
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Sequent {
    pub antecedent: Context,
    pub succedent: Formula,
}

impl Sequent {
    pub fn new(antecedent: Context, succedent: Formula) -> Sequent {
        Sequent {
            antecedent,
            succedent,
        }
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.antecedent.is_empty() {
            write!(f, "|- {}", self.succedent)
        } else {
            write!(f, "{} |- {}", self.antecedent, self.succedent)
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Derivation {
    Ax(Formula),
    IOver(Box<Derivation>),
    IUnder(Box<Derivation>),
    /// Function first, argument second.
    EOver(Box<Derivation>, Box<Derivation>),
    /// Argument first, function second.
    EUnder(Box<Derivation>, Box<Derivation>),
    IUnit,
    /// `(insert_at, scrutinee, continuation)`
    EUnit(usize, Box<Derivation>, Box<Derivation>),
    ITensor(Box<Derivation>, Box<Derivation>),
    /// `(insert_at, scrutinee, continuation)`
    ETensor(usize, Box<Derivation>, Box<Derivation>),
}

impl Derivation {
    pub fn ax(f: Formula) -> Derivation {
        Derivation::Ax(f)
    }

    pub fn i_over(body: Derivation) -> Derivation {
        Derivation::IOver(Box::new(body))
    }

    pub fn i_under(body: Derivation) -> Derivation {
        Derivation::IUnder(Box::new(body))
    }

    pub fn e_over(fun: Derivation, arg: Derivation) -> Derivation {
        Derivation::EOver(Box::new(fun), Box::new(arg))
    }

    pub fn e_under(arg: Derivation, fun: Derivation) -> Derivation {
        Derivation::EUnder(Box::new(arg), Box::new(fun))
    }

    pub fn e_unit(at: usize, scrutinee: Derivation, cont: Derivation) -> Derivation {
        Derivation::EUnit(at, Box::new(scrutinee), Box::new(cont))
    }

    pub fn i_tensor(left: Derivation, right: Derivation) -> Derivation {
        Derivation::ITensor(Box::new(left), Box::new(right))
    }

    pub fn e_tensor(at: usize, scrutinee: Derivation, cont: Derivation) -> Derivation {
        Derivation::ETensor(at, Box::new(scrutinee), Box::new(cont))
    }

    /// Number of rule applications.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    pub fn children(&self) -> Vec<&Derivation> {
        use Derivation::*;
        match self {
            Ax(_) | IUnit => vec![],
            IOver(b) | IUnder(b) => vec![b],
            EOver(a, b) | EUnder(a, b) | ITensor(a, b) | EUnit(_, a, b) | ETensor(_, a, b) => {
                vec![a, b]
            }
        }
    }

    pub fn child_mut(&mut self, i: usize) -> Option<&mut Derivation> {
        use Derivation::*;
        match (self, i) {
            (IOver(b) | IUnder(b), 0) => Some(b),
            (EOver(a, _) | EUnder(a, _) | ITensor(a, _) | EUnit(_, a, _) | ETensor(_, a, _), 0) => {
                Some(a)
            }
            (EOver(_, b) | EUnder(_, b) | ITensor(_, b) | EUnit(_, _, b) | ETensor(_, _, b), 1) => {
                Some(b)
            }
            _ => None,
        }
    }

    pub fn subterm(&self, path: &[usize]) -> Option<&Derivation> {
        let mut cur = self;
        for &i in path {
            cur = *cur.children().get(i)?;
        }
        Some(cur)
    }

    /// Copy of `self` with the subterm at `path` replaced.
    pub fn replace_at(&self, path: &[usize], new: Derivation) -> Option<Derivation> {
        let mut out = self.clone();
        let mut cur = &mut out;
        for &i in path {
            cur = cur.child_mut(i)?;
        }
        *cur = new;
        Some(out)
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::text::print_derivation(self))
    }
}

/// Checks `t` against the rules and returns its conclusion.
pub fn typecheck(t: &Derivation) -> Result<Sequent> {
    fold_typed(t, &mut |_, _, _, _: Vec<()>| ()).map(|(s, _)| s)
}

/// Bottom-up fold over a well-formed derivation. `visit` receives each
/// node, its path, its conclusion and the results for its children.
pub fn fold_typed<R>(
    t: &Derivation,
    visit: &mut impl FnMut(&Derivation, &[usize], &Sequent, Vec<R>) -> R,
) -> Result<(Sequent, R)> {
    let mut path = Vec::new();
    fold_at(t, &mut path, visit)
}

fn fold_at<R>(
    t: &Derivation,
    path: &mut Vec<usize>,
    visit: &mut impl FnMut(&Derivation, &[usize], &Sequent, Vec<R>) -> R,
) -> Result<(Sequent, R)> {
    use Derivation::*;
    let child = |i: usize, c: &Derivation, path: &mut Vec<usize>, visit: &mut _| {
        path.push(i);
        let r = fold_at(c, path, visit);
        path.pop();
        r
    };
    let (seq, results) = match t {
        Ax(a) => (Sequent::new(Context::singleton(a.clone()), a.clone()), vec![]),
        IUnit => (Sequent::new(Context::new(), Formula::Unit), vec![]),
        IOver(body) => {
            let (s, r) = child(0, body, path, visit)?;
            let mut ante = s.antecedent.into_vec();
            let arg = ante
                .pop()
                .ok_or_else(|| Error::ill_formed(path, "I/ premise has an empty context"))?;
            (
                Sequent::new(ante.into(), Formula::over(s.succedent, arg)),
                vec![r],
            )
        }
        IUnder(body) => {
            let (s, r) = child(0, body, path, visit)?;
            if s.antecedent.is_empty() {
                return Err(Error::ill_formed(path, "I\\ premise has an empty context"));
            }
            let mut ante = s.antecedent.into_vec();
            let arg = ante.remove(0);
            (
                Sequent::new(ante.into(), Formula::under(arg, s.succedent)),
                vec![r],
            )
        }
        EOver(fun, arg) => {
            let (sf, rf) = child(0, fun, path, visit)?;
            let (sa, ra) = child(1, arg, path, visit)?;
            match &sf.succedent {
                Formula::Over(b, a) if **a == sa.succedent => (
                    Sequent::new(sf.antecedent.concat(&sa.antecedent), (**b).clone()),
                    vec![rf, ra],
                ),
                other => {
                    return Err(Error::ill_formed(
                        path,
                        format!(
                            "E/ expects a function of type _/{}, found {}",
                            sa.succedent, other
                        ),
                    ))
                }
            }
        }
        EUnder(arg, fun) => {
            let (sa, ra) = child(0, arg, path, visit)?;
            let (sf, rf) = child(1, fun, path, visit)?;
            match &sf.succedent {
                Formula::Under(a, b) if **a == sa.succedent => (
                    Sequent::new(sa.antecedent.concat(&sf.antecedent), (**b).clone()),
                    vec![ra, rf],
                ),
                other => {
                    return Err(Error::ill_formed(
                        path,
                        format!(
                            "E\\ expects a function of type {}\\_, found {}",
                            sa.succedent, other
                        ),
                    ))
                }
            }
        }
        ITensor(l, r) => {
            let (sl, rl) = child(0, l, path, visit)?;
            let (sr, rr) = child(1, r, path, visit)?;
            (
                Sequent::new(
                    sl.antecedent.concat(&sr.antecedent),
                    Formula::tensor(sl.succedent, sr.succedent),
                ),
                vec![rl, rr],
            )
        }
        EUnit(at, s, c) => {
            let (ss, rs) = child(0, s, path, visit)?;
            let (sc, rc) = child(1, c, path, visit)?;
            if ss.succedent != Formula::Unit {
                return Err(Error::ill_formed(
                    path,
                    format!("E_I scrutinee concludes {}, not I", ss.succedent),
                ));
            }
            if *at > sc.antecedent.len() {
                return Err(Error::ill_formed(
                    path,
                    format!(
                        "E_I insertion point {} exceeds continuation context length {}",
                        at,
                        sc.antecedent.len()
                    ),
                ));
            }
            let ante = splice(&sc.antecedent, *at, *at, &ss.antecedent);
            (Sequent::new(ante, sc.succedent), vec![rs, rc])
        }
        ETensor(at, s, c) => {
            let (ss, rs) = child(0, s, path, visit)?;
            let (sc, rc) = child(1, c, path, visit)?;
            let (a, b) = match &ss.succedent {
                Formula::Tensor(a, b) => (a, b),
                other => {
                    return Err(Error::ill_formed(
                        path,
                        format!("E* scrutinee concludes {}, not a tensor", other),
                    ))
                }
            };
            let ok = sc.antecedent.get(*at) == Some(a) && sc.antecedent.get(*at + 1) == Some(b);
            if !ok {
                return Err(Error::ill_formed(
                    path,
                    format!(
                        "E* continuation context {} lacks {}, {} at position {}",
                        sc.antecedent, a, b, at
                    ),
                ));
            }
            let ante = splice(&sc.antecedent, *at, *at + 2, &ss.antecedent);
            (Sequent::new(ante, sc.succedent), vec![rs, rc])
        }
    };
    let r = visit(t, path, &seq, results);
    Ok((seq, r))
}

/// `outer[..from] ++ inner ++ outer[to..]`
pub(crate) fn splice(outer: &Context, from: usize, to: usize, inner: &Context) -> Context {
    outer[..from]
        .iter()
        .chain(inner.iter())
        .chain(outer[to..].iter())
        .cloned()
        .collect()
}

/// A simultaneous substitution `Γ ▷ Δ`: the i-th item derives the i-th
/// formula of the target `Δ` from the i-th slice of the source `Γ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Env {
    items: Vec<Derivation>,
    splits: Vec<Context>,
    targets: Vec<Formula>,
}

impl Env {
    pub fn empty() -> Env {
        Env {
            items: vec![],
            splits: vec![],
            targets: vec![],
        }
    }

    pub fn new(items: Vec<Derivation>) -> Result<Env> {
        let mut env = Env::empty();
        for t in items {
            env.push(t)?;
        }
        Ok(env)
    }

    pub fn push(&mut self, t: Derivation) -> Result<()> {
        let s = typecheck(&t)?;
        self.items.push(t);
        self.splits.push(s.antecedent);
        self.targets.push(s.succedent);
        Ok(())
    }

    /// The identity environment `ids_Γ` of axioms.
    pub fn ids(g: &Context) -> Env {
        Env {
            items: g.iter().cloned().map(Derivation::Ax).collect(),
            splits: g.iter().cloned().map(Context::singleton).collect(),
            targets: g.to_vec(),
        }
    }

    pub fn concat(mut self, other: Env) -> Env {
        self.items.extend(other.items);
        self.splits.extend(other.splits);
        self.targets.extend(other.targets);
        self
    }

    pub fn items(&self) -> &[Derivation] {
        &self.items
    }

    pub fn source_splits(&self) -> &[Context] {
        &self.splits
    }

    pub fn source(&self) -> Context {
        self.splits.iter().flat_map(|c| c.iter().cloned()).collect()
    }

    pub fn target(&self) -> Context {
        self.targets.iter().cloned().collect()
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }
}

/// Admissible cut: substitutes `sigma : Γ ▷ Δ` into `t : Δ ⊢ A`, giving
/// `Γ ⊢ A`.
pub fn substitute(sigma: &Env, t: &Derivation) -> Result<Derivation> {
    let seq = typecheck(t)?;
    if sigma.target() != seq.antecedent {
        return Err(Error::EnvMismatch(format!(
            "environment targets `{}` but the derivation needs `{}`",
            sigma.target(),
            seq.antecedent
        )));
    }
    let items: Vec<Item> = sigma
        .items
        .iter()
        .zip(&sigma.splits)
        .map(|(d, s)| Item {
            term: d.clone(),
            src_len: s.len(),
        })
        .collect();
    Ok(subst(&items, t))
}

#[derive(Clone)]
struct Item {
    term: Derivation,
    src_len: usize,
}

fn ax_item(f: Formula) -> Item {
    Item {
        term: Derivation::Ax(f),
        src_len: 1,
    }
}

fn src_len(items: &[Item]) -> usize {
    items.iter().map(|i| i.src_len).sum()
}

// `t` is well-formed and `items` matches its antecedent pointwise.
fn subst(items: &[Item], t: &Derivation) -> Derivation {
    use Derivation::*;
    let seq_of = |d: &Derivation| typecheck(d).expect("subterm of a well-formed derivation");
    match t {
        Ax(_) => items[0].term.clone(),
        IUnit => IUnit,
        IOver(body) => {
            let arg = seq_of(body).antecedent.last().cloned().expect("I/ binds");
            let mut ext = items.to_vec();
            ext.push(ax_item(arg));
            Derivation::i_over(subst(&ext, body))
        }
        IUnder(body) => {
            let arg = seq_of(body).antecedent[0].clone();
            let mut ext = vec![ax_item(arg)];
            ext.extend_from_slice(items);
            Derivation::i_under(subst(&ext, body))
        }
        EOver(a, b) | EUnder(a, b) | ITensor(a, b) => {
            let n = seq_of(a).antecedent.len();
            let (ia, ib) = items.split_at(n);
            let (a, b) = (subst(ia, a), subst(ib, b));
            match t {
                EOver(..) => Derivation::e_over(a, b),
                EUnder(..) => Derivation::e_under(a, b),
                _ => Derivation::i_tensor(a, b),
            }
        }
        EUnit(at, s, c) => {
            let n = seq_of(s).antecedent.len();
            let (pre, rest) = items.split_at(*at);
            let (mid, post) = rest.split_at(n);
            let mut outer = pre.to_vec();
            outer.extend_from_slice(post);
            Derivation::e_unit(src_len(pre), subst(mid, s), subst(&outer, c))
        }
        ETensor(at, s, c) => {
            let ss = seq_of(s);
            let (a, b) = match ss.succedent {
                Formula::Tensor(a, b) => ((*a).clone(), (*b).clone()),
                _ => unreachable!("well-formed E* scrutinee"),
            };
            let n = ss.antecedent.len();
            let (pre, rest) = items.split_at(*at);
            let (mid, post) = rest.split_at(n);
            let mut outer = pre.to_vec();
            outer.push(ax_item(a));
            outer.push(ax_item(b));
            outer.extend_from_slice(post);
            Derivation::e_tensor(src_len(pre), subst(mid, s), subst(&outer, c))
        }
    }
}

/// The derived single-hypothesis cut: replaces the hypothesis at `pos` of
/// `u`'s context by the derivation `t`.
pub fn sub1(t: &Derivation, pos: usize, u: &Derivation) -> Result<Derivation> {
    let su = typecheck(u)?;
    let st = typecheck(t)?;
    let ante = &su.antecedent;
    if pos >= ante.len() {
        return Err(Error::EnvMismatch(format!(
            "position {} is outside the context `{}`",
            pos, ante
        )));
    }
    if ante[pos] != st.succedent {
        return Err(Error::EnvMismatch(format!(
            "hypothesis {} at position {} does not match the substituted {}",
            ante[pos], pos, st.succedent
        )));
    }
    let mut sigma = Env::ids(&ante.slice(0, pos));
    sigma.items.push(t.clone());
    sigma.splits.push(st.antecedent);
    sigma.targets.push(st.succedent);
    let sigma = sigma.concat(Env::ids(&ante.slice(pos + 1, ante.len())));
    substitute(&sigma, u)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Formula {
        Formula::atom("p")
    }
    fn q() -> Formula {
        Formula::atom("q")
    }
    fn r() -> Formula {
        Formula::atom("r")
    }

    pub(crate) fn worked_example() -> Derivation {
        use Derivation as D;
        let pq = Formula::tensor(p(), q());
        let inner = D::e_tensor(
            0,
            D::i_tensor(D::ax(p()), D::ax(q())),
            D::i_over(D::i_tensor(
                D::ax(p()),
                D::i_tensor(D::ax(q()), D::ax(r())),
            )),
        );
        D::e_tensor(0, D::ax(pq), D::e_over(inner, D::ax(r())))
    }

    #[test]
    fn axiom_sequent() {
        let s = typecheck(&Derivation::ax(p())).unwrap();
        assert_eq!(s, Sequent::new(Context::singleton(p()), p()));
    }

    #[test]
    fn worked_example_sequent() {
        let s = typecheck(&worked_example()).unwrap();
        assert_eq!(
            s.antecedent,
            Context::from(vec![Formula::tensor(p(), q()), r()])
        );
        assert_eq!(s.succedent, Formula::tensor(p(), Formula::tensor(q(), r())));
    }

    #[test]
    fn e_over_on_atom_is_rejected() {
        let t = Derivation::e_over(Derivation::ax(p()), Derivation::ax(p()));
        assert!(matches!(typecheck(&t), Err(Error::IllFormed { path, .. }) if path.is_empty()));
    }

    #[test]
    fn errors_carry_paths() {
        let bad = Derivation::e_over(Derivation::ax(p()), Derivation::ax(p()));
        let t = Derivation::i_tensor(Derivation::ax(q()), Derivation::i_under(bad));
        match typecheck(&t) {
            Err(Error::IllFormed { path, .. }) => assert_eq!(path, vec![1, 0]),
            other => panic!("unexpected {:?}", other),
        }
    }

    #[test]
    fn e_tensor_needs_adjacent_components() {
        let t = Derivation::e_tensor(
            1,
            Derivation::ax(Formula::tensor(p(), q())),
            Derivation::i_tensor(Derivation::ax(p()), Derivation::ax(q())),
        );
        assert!(typecheck(&t).is_err());
    }

    #[test]
    fn ids_env() {
        assert!(Env::ids(&Context::new()).is_empty());
        let g = Context::from(vec![p(), Formula::over(q(), p())]);
        let ids = Env::ids(&g);
        assert_eq!(
            ids.items(),
            &[Derivation::ax(p()), Derivation::ax(Formula::over(q(), p()))]
        );
        assert_eq!(ids.source(), g);
        assert_eq!(ids.target(), g);
    }

    #[test]
    fn identity_substitution_is_syntactic() {
        let t = worked_example();
        let g = typecheck(&t).unwrap().antecedent;
        assert_eq!(substitute(&Env::ids(&g), &t).unwrap(), t);
    }

    #[test]
    fn axiom_substitution_returns_item() {
        let u = Derivation::i_tensor(Derivation::ax(p()), Derivation::ax(q()));
        let sigma = Env::new(vec![u.clone()]).unwrap();
        let out = substitute(&sigma, &Derivation::ax(Formula::tensor(p(), q()))).unwrap();
        assert_eq!(out, u);
    }

    #[test]
    fn substitution_shifts_insert_point() {
        // x : p*q ⊢ x ; substitute the 2-formula derivation p, q ⊢ p*q for the
        // hypothesis r sitting before the split point.
        let t = Derivation::e_tensor(
            1,
            Derivation::ax(Formula::tensor(p(), q())),
            Derivation::i_tensor(
                Derivation::ax(r()),
                Derivation::i_tensor(Derivation::ax(p()), Derivation::ax(q())),
            ),
        );
        let st = typecheck(&t).unwrap();
        assert_eq!(
            st.antecedent,
            Context::from(vec![r(), Formula::tensor(p(), q())])
        );
        let filler = Derivation::e_over(
            Derivation::ax(Formula::over(r(), q())),
            Derivation::ax(q()),
        );
        let out = sub1(&filler, 0, &t).unwrap();
        match &out {
            Derivation::ETensor(at, _, _) => assert_eq!(*at, 2),
            other => panic!("unexpected {:?}", other),
        }
        let so = typecheck(&out).unwrap();
        assert_eq!(
            so.antecedent,
            Context::from(vec![Formula::over(r(), q()), q(), Formula::tensor(p(), q())])
        );
        assert_eq!(so.succedent, st.succedent);
    }

    #[test]
    fn sub1_into_axiom() {
        let t = Derivation::i_tensor(Derivation::ax(p()), Derivation::ax(q()));
        let c = Formula::tensor(p(), q());
        assert_eq!(sub1(&t, 0, &Derivation::ax(c)).unwrap(), t);
    }

    #[test]
    fn sub1_out_of_bounds() {
        let t = Derivation::ax(p());
        assert!(matches!(
            sub1(&t, 3, &Derivation::ax(p())),
            Err(Error::EnvMismatch(_))
        ));
    }

    #[test]
    fn beta_over_reduct_via_sub1() {
        // E/ (I/ t) u  ~  sub u t
        let body = Derivation::i_tensor(Derivation::ax(q()), Derivation::ax(p()));
        let u = Derivation::e_over(Derivation::ax(Formula::over(p(), r())), Derivation::ax(r()));
        let reduct = sub1(&u, 1, &body).unwrap();
        assert_eq!(
            reduct,
            Derivation::i_tensor(Derivation::ax(q()), u.clone())
        );
        let redex = Derivation::e_over(Derivation::i_over(body), u);
        assert_eq!(typecheck(&redex).unwrap(), typecheck(&reduct).unwrap());
    }

    #[test]
    fn substitute_rejects_wrong_target() {
        let sigma = Env::ids(&Context::singleton(q()));
        assert!(matches!(
            substitute(&sigma, &Derivation::ax(p())),
            Err(Error::EnvMismatch(_))
        ));
    }
}
