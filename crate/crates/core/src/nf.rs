//! βη-long normal forms and neutral derivations, and their embedding back
//! into ordinary derivations.

use std::fmt;

use crate::error::{Error, Result};
use crate::syntax::{splice, Context, Derivation, Formula, Sequent};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Nf {
    IOver(Box<Nf>),
    IUnder(Box<Nf>),
    IUnit,
    EUnit(usize, Box<Ne>, Box<Nf>),
    ITensor(Box<Nf>, Box<Nf>),
    ETensor(usize, Box<Ne>, Box<Nf>),
    /// Phase switch; only at atoms.
    Sw(Box<Ne>),
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Ne {
    Ax(Formula),
    EOver(Box<Ne>, Box<Nf>),
    EUnder(Box<Nf>, Box<Ne>),
}

impl Nf {
    pub fn sw(n: Ne) -> Nf {
        Nf::Sw(Box::new(n))
    }

    pub fn i_over(b: Nf) -> Nf {
        Nf::IOver(Box::new(b))
    }

    pub fn i_under(b: Nf) -> Nf {
        Nf::IUnder(Box::new(b))
    }

    pub fn i_tensor(l: Nf, r: Nf) -> Nf {
        Nf::ITensor(Box::new(l), Box::new(r))
    }

    pub fn e_unit(at: usize, s: Ne, c: Nf) -> Nf {
        Nf::EUnit(at, Box::new(s), Box::new(c))
    }

    pub fn e_tensor(at: usize, s: Ne, c: Nf) -> Nf {
        Nf::ETensor(at, Box::new(s), Box::new(c))
    }

    pub fn size(&self) -> usize {
        match self {
            Nf::IUnit => 1,
            Nf::IOver(b) | Nf::IUnder(b) => 1 + b.size(),
            Nf::ITensor(a, b) => 1 + a.size() + b.size(),
            Nf::EUnit(_, s, c) | Nf::ETensor(_, s, c) => 1 + s.size() + c.size(),
            Nf::Sw(n) => n.size(),
        }
    }
}

impl Ne {
    pub fn ax(f: Formula) -> Ne {
        Ne::Ax(f)
    }

    pub fn e_over(f: Ne, a: Nf) -> Ne {
        Ne::EOver(Box::new(f), Box::new(a))
    }

    pub fn e_under(a: Nf, f: Ne) -> Ne {
        Ne::EUnder(Box::new(a), Box::new(f))
    }

    /// Size of the embedded derivation.
    pub fn size(&self) -> usize {
        match self {
            Ne::Ax(_) => 1,
            Ne::EOver(f, a) => 1 + f.size() + a.size(),
            Ne::EUnder(a, f) => 1 + a.size() + f.size(),
        }
    }
}

impl fmt::Display for Nf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::text::print_nf(self))
    }
}

impl fmt::Display for Ne {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::text::print_ne(self))
    }
}

pub fn typecheck_nf(n: &Nf) -> Result<Sequent> {
    nf_at(n, &mut Vec::new())
}

pub fn typecheck_ne(n: &Ne) -> Result<Sequent> {
    ne_at(n, &mut Vec::new())
}

fn descend<T>(
    path: &mut Vec<usize>,
    i: usize,
    f: impl FnOnce(&mut Vec<usize>) -> Result<T>,
) -> Result<T> {
    path.push(i);
    let r = f(path);
    path.pop();
    r
}

fn nf_at(n: &Nf, path: &mut Vec<usize>) -> Result<Sequent> {
    match n {
        Nf::IUnit => Ok(Sequent::new(Context::new(), Formula::Unit)),
        Nf::IOver(b) => {
            let s = descend(path, 0, |p| nf_at(b, p))?;
            let mut ante = s.antecedent.into_vec();
            let arg = ante
                .pop()
                .ok_or_else(|| Error::ill_formed(path, "I/ premise has an empty context"))?;
            Ok(Sequent::new(ante.into(), Formula::over(s.succedent, arg)))
        }
        Nf::IUnder(b) => {
            let s = descend(path, 0, |p| nf_at(b, p))?;
            if s.antecedent.is_empty() {
                return Err(Error::ill_formed(path, "I\\ premise has an empty context"));
            }
            let mut ante = s.antecedent.into_vec();
            let arg = ante.remove(0);
            Ok(Sequent::new(ante.into(), Formula::under(arg, s.succedent)))
        }
        Nf::ITensor(l, r) => {
            let sl = descend(path, 0, |p| nf_at(l, p))?;
            let sr = descend(path, 1, |p| nf_at(r, p))?;
            Ok(Sequent::new(
                sl.antecedent.concat(&sr.antecedent),
                Formula::tensor(sl.succedent, sr.succedent),
            ))
        }
        Nf::EUnit(at, s, c) => {
            let ss = descend(path, 0, |p| ne_at(s, p))?;
            let sc = descend(path, 1, |p| nf_at(c, p))?;
            if ss.succedent != Formula::Unit {
                return Err(Error::ill_formed(
                    path,
                    format!("E_I scrutinee concludes {}, not I", ss.succedent),
                ));
            }
            if *at > sc.antecedent.len() {
                return Err(Error::ill_formed(
                    path,
                    format!("E_I insertion point {} out of range", at),
                ));
            }
            if !sc.succedent.is_non_negative() {
                return Err(Error::GammaPlusViolation {
                    path: path.clone(),
                    succedent: sc.succedent.to_string(),
                });
            }
            let ante = splice(&sc.antecedent, *at, *at, &ss.antecedent);
            Ok(Sequent::new(ante, sc.succedent))
        }
        Nf::ETensor(at, s, c) => {
            let ss = descend(path, 0, |p| ne_at(s, p))?;
            let sc = descend(path, 1, |p| nf_at(c, p))?;
            let (a, b) = match &ss.succedent {
                Formula::Tensor(a, b) => (a, b),
                other => {
                    return Err(Error::ill_formed(
                        path,
                        format!("E* scrutinee concludes {}, not a tensor", other),
                    ))
                }
            };
            if sc.antecedent.get(*at) != Some(a) || sc.antecedent.get(*at + 1) != Some(b) {
                return Err(Error::ill_formed(
                    path,
                    format!(
                        "E* continuation context {} lacks {}, {} at position {}",
                        sc.antecedent, a, b, at
                    ),
                ));
            }
            if !sc.succedent.is_non_negative() {
                return Err(Error::GammaPlusViolation {
                    path: path.clone(),
                    succedent: sc.succedent.to_string(),
                });
            }
            let ante = splice(&sc.antecedent, *at, *at + 2, &ss.antecedent);
            Ok(Sequent::new(ante, sc.succedent))
        }
        Nf::Sw(ne) => {
            let s = descend(path, 0, |p| ne_at(ne, p))?;
            if !s.succedent.is_atom() {
                return Err(Error::SwNotAtomic {
                    path: path.clone(),
                    succedent: s.succedent.to_string(),
                });
            }
            Ok(s)
        }
    }
}

fn ne_at(n: &Ne, path: &mut Vec<usize>) -> Result<Sequent> {
    match n {
        Ne::Ax(a) => Ok(Sequent::new(Context::singleton(a.clone()), a.clone())),
        Ne::EOver(f, a) => {
            let sf = descend(path, 0, |p| ne_at(f, p))?;
            let sa = descend(path, 1, |p| nf_at(a, p))?;
            match &sf.succedent {
                Formula::Over(b, x) if **x == sa.succedent => Ok(Sequent::new(
                    sf.antecedent.concat(&sa.antecedent),
                    (**b).clone(),
                )),
                other => Err(Error::ill_formed(
                    path,
                    format!("E/ expects _/{}, found {}", sa.succedent, other),
                )),
            }
        }
        Ne::EUnder(a, f) => {
            let sa = descend(path, 0, |p| nf_at(a, p))?;
            let sf = descend(path, 1, |p| ne_at(f, p))?;
            match &sf.succedent {
                Formula::Under(x, b) if **x == sa.succedent => Ok(Sequent::new(
                    sa.antecedent.concat(&sf.antecedent),
                    (**b).clone(),
                )),
                other => Err(Error::ill_formed(
                    path,
                    format!("E\\ expects {}\\_, found {}", sa.succedent, other),
                )),
            }
        }
    }
}

/// Erases the phase switches.
pub fn emb_up(n: &Nf) -> Derivation {
    match n {
        Nf::IOver(b) => Derivation::i_over(emb_up(b)),
        Nf::IUnder(b) => Derivation::i_under(emb_up(b)),
        Nf::IUnit => Derivation::IUnit,
        Nf::EUnit(k, s, c) => Derivation::e_unit(*k, emb_dn(s), emb_up(c)),
        Nf::ITensor(l, r) => Derivation::i_tensor(emb_up(l), emb_up(r)),
        Nf::ETensor(k, s, c) => Derivation::e_tensor(*k, emb_dn(s), emb_up(c)),
        Nf::Sw(ne) => emb_dn(ne),
    }
}

pub fn emb_dn(n: &Ne) -> Derivation {
    match n {
        Ne::Ax(a) => Derivation::Ax(a.clone()),
        Ne::EOver(f, a) => Derivation::e_over(emb_dn(f), emb_up(a)),
        Ne::EUnder(a, f) => Derivation::e_under(emb_up(a), emb_dn(f)),
    }
}

pub fn nf_equal(a: &Nf, b: &Nf) -> bool {
    a == b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::typecheck;

    fn p() -> Formula {
        Formula::atom("p")
    }
    fn q() -> Formula {
        Formula::atom("q")
    }
    fn r() -> Formula {
        Formula::atom("r")
    }
    fn swax(f: Formula) -> Nf {
        Nf::sw(Ne::ax(f))
    }

    fn example_nf() -> Nf {
        Nf::e_tensor(
            0,
            Ne::ax(Formula::tensor(p(), q())),
            Nf::i_tensor(swax(p()), Nf::i_tensor(swax(q()), swax(r()))),
        )
    }

    #[test]
    fn sw_at_atom() {
        let s = typecheck_nf(&swax(p())).unwrap();
        assert_eq!(s, Sequent::new(Context::singleton(p()), p()));
    }

    #[test]
    fn example_sequent() {
        let s = typecheck_nf(&example_nf()).unwrap();
        assert_eq!(
            s.antecedent,
            Context::from(vec![Formula::tensor(p(), q()), r()])
        );
        assert_eq!(s.succedent, Formula::tensor(p(), Formula::tensor(q(), r())));
    }

    #[test]
    fn gamma_plus_enforced() {
        let n = Nf::e_unit(0, Ne::ax(Formula::Unit), Nf::i_over(swax(p())));
        assert!(matches!(
            typecheck_nf(&n),
            Err(Error::GammaPlusViolation { .. })
        ));
    }

    #[test]
    fn sw_only_at_atoms() {
        let n = Nf::sw(Ne::ax(Formula::Unit));
        assert!(matches!(typecheck_nf(&n), Err(Error::SwNotAtomic { .. })));
    }

    #[test]
    fn embeddings() {
        assert_eq!(emb_up(&swax(p())), Derivation::ax(p()));
        assert_eq!(emb_up(&Nf::IUnit), Derivation::IUnit);
        let d = emb_up(&example_nf());
        assert_eq!(typecheck(&d).unwrap(), typecheck_nf(&example_nf()).unwrap());
        assert!(matches!(d, Derivation::ETensor(0, _, _)));
    }

    #[test]
    fn equality() {
        assert!(nf_equal(&Nf::IUnit, &Nf::IUnit));
        assert!(!nf_equal(&swax(p()), &swax(q())));
    }
}
