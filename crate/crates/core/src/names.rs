//! Hypothesis names, fresh-name supplies and injective renamings.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Name(Arc<str>);

impl Name {
    pub fn new(s: &str) -> Name {
        Name(Arc::from(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Name {
    fn from(s: &str) -> Name {
        Name::new(s)
    }
}

/// Hands out names that cannot be written in source text (they contain a
/// `#`), so they never collide with user names. Shared between threads.
/// Supplies with different tags never collide with each other either.
#[derive(Clone)]
pub struct Supply {
    next: Arc<AtomicUsize>,
    tag: &'static str,
}

impl Default for Supply {
    fn default() -> Supply {
        Supply::tagged("v")
    }
}

impl Supply {
    pub fn new() -> Supply {
        Supply::default()
    }

    pub fn tagged(tag: &'static str) -> Supply {
        Supply {
            next: Arc::new(AtomicUsize::new(0)),
            tag,
        }
    }

    pub fn fresh(&self) -> Name {
        let n = self.next.fetch_add(1, Ordering::Relaxed);
        Name(Arc::from(format!("{}#{}", self.tag, n)))
    }
}

/// The `i`-th name of the form `x0, x1, …` that is not in `avoid`.
pub fn canonical_names(avoid: &BTreeSet<Name>) -> impl Iterator<Item = Name> + '_ {
    (0..)
        .map(|i| Name(Arc::from(format!("x{}", i))))
        .filter(move |n| !avoid.contains(n))
}

/// A finite injective map between names.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Renaming {
    map: BTreeMap<Name, Name>,
}

impl Renaming {
    pub fn new(pairs: impl IntoIterator<Item = (Name, Name)>) -> Result<Renaming> {
        let mut map = BTreeMap::new();
        let mut seen = BTreeSet::new();
        for (a, b) in pairs {
            if !seen.insert(b.clone()) {
                return Err(Error::InvalidRenaming(format!("`{}` is hit twice", b)));
            }
            if map.insert(a.clone(), b).is_some() {
                return Err(Error::InvalidRenaming(format!("`{}` is mapped twice", a)));
            }
        }
        Ok(Renaming { map })
    }

    pub fn identity(names: impl IntoIterator<Item = Name>) -> Renaming {
        Renaming {
            map: names.into_iter().map(|n| (n.clone(), n)).collect(),
        }
    }

    pub fn get(&self, n: &Name) -> Option<&Name> {
        self.map.get(n)
    }

    pub fn covers(&self, n: &Name) -> bool {
        self.map.contains_key(n)
    }

    pub fn domain(&self) -> impl Iterator<Item = &Name> {
        self.map.keys()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&Name, &Name)> {
        self.map.iter()
    }

    /// `self` after `first`: `x ↦ self(first(x))`. Every image of `first`
    /// must be covered by `self`.
    pub fn after(&self, first: &Renaming) -> Result<Renaming> {
        let mut pairs = Vec::new();
        for (a, b) in &first.map {
            let c = self
                .map
                .get(b)
                .ok_or_else(|| Error::NameNotCovered(b.to_string()))?;
            pairs.push((a.clone(), c.clone()));
        }
        Renaming::new(pairs)
    }

    /// Extends the map to a permutation of `domain ∪ image`, so that it can
    /// be applied to every name of a term, bound or free, without capture.
    pub fn complete(&self) -> Permutation {
        let image: BTreeSet<&Name> = self.map.values().collect();
        let mut fwd = self.map.clone();
        // Names hit but not moved away must go somewhere: send them to the
        // domain names nobody hits, in order.
        let mut spare = self.map.keys().filter(|k| !image.contains(k));
        for n in image.iter().filter(|n| !self.map.contains_key(**n)) {
            let to = spare.next().expect("as many spare names as orphans");
            fwd.insert((*n).clone(), to.clone());
        }
        let bwd = fwd.iter().map(|(a, b)| (b.clone(), a.clone())).collect();
        Permutation { fwd, bwd }
    }
}

/// A finite permutation of names (identity elsewhere).
#[derive(Clone, Debug)]
pub struct Permutation {
    fwd: BTreeMap<Name, Name>,
    bwd: BTreeMap<Name, Name>,
}

impl Permutation {
    pub fn apply(&self, n: &Name) -> Name {
        self.fwd.get(n).cloned().unwrap_or_else(|| n.clone())
    }

    pub fn inverse(&self) -> Permutation {
        Permutation {
            fwd: self.bwd.clone(),
            bwd: self.fwd.clone(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.fwd.iter().all(|(a, b)| a == b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(s: &str) -> Name {
        Name::new(s)
    }

    #[test]
    fn injectivity_is_checked() {
        assert!(Renaming::new([(n("a"), n("c")), (n("b"), n("c"))]).is_err());
        assert!(Renaming::new([(n("a"), n("c")), (n("a"), n("d"))]).is_err());
    }

    #[test]
    fn completion_is_a_bijection() {
        let r = Renaming::new([(n("a"), n("b")), (n("b"), n("c"))]).unwrap();
        let p = r.complete();
        assert_eq!(p.apply(&n("a")), n("b"));
        assert_eq!(p.apply(&n("b")), n("c"));
        assert_eq!(p.apply(&n("c")), n("a"));
        assert_eq!(p.apply(&n("z")), n("z"));
        for x in ["a", "b", "c"] {
            assert_eq!(p.inverse().apply(&p.apply(&n(x))), n(x));
        }
    }

    #[test]
    fn composition() {
        let f = Renaming::new([(n("a"), n("b"))]).unwrap();
        let g = Renaming::new([(n("b"), n("c"))]).unwrap();
        assert_eq!(g.after(&f).unwrap().get(&n("a")), Some(&n("c")));
        assert!(f.after(&g).is_err());
    }

    #[test]
    fn fresh_names_are_unwritable_and_distinct() {
        let s = Supply::new();
        let (a, b) = (s.fresh(), s.fresh());
        assert_ne!(a, b);
        assert!(a.as_str().contains('#'));
        let avoid: BTreeSet<Name> = [n("x0"), n("x2")].into_iter().collect();
        let got: Vec<Name> = canonical_names(&avoid).take(2).collect();
        assert_eq!(got, vec![n("x1"), n("x3")]);
    }
}
