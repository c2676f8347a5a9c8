//! Permutation groups of small degree, stored as their full member list.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};

/// Largest supported relation arity.
pub const MAX_ARITY: usize = 8;

/// Default cap on the order of a group closed from generators (|S_8|).
pub const DEFAULT_ORDER_LIMIT: usize = 40_320;

/// A permutation of `0..n`. Files use 1-based images; memory is 0-based.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Box<[u8]>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n as u8).collect())
    }

    /// Builds from 1-based images, as written in `.fhs` files.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in images {
            if i == 0 || i > n || seen[i - 1] {
                return Err(Error::InvalidPermutation(format!("{images:?}")));
            }
            seen[i - 1] = true;
        }
        Ok(Permutation(images.iter().map(|&i| (i - 1) as u8).collect()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn image(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    pub fn images(&self) -> &[u8] {
        &self.0
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|&i| i as usize + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&j| self.0[j as usize]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u8; self.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j as usize] = i as u8;
        }
        Permutation(inv.into())
    }

    /// The tuple `(t[σ(0)], …, t[σ(n-1)])`.
    pub fn act<T: Copy>(&self, t: &[T]) -> Vec<T> {
        self.0.iter().map(|&j| t[j as usize]).collect()
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.one_based())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Trivial,
    Full,
    Other,
}

/// A subgroup of `S_n`, kept closed and sorted (identity first).
#[derive(Clone, PartialEq, Eq)]
pub struct SymmetryGroup {
    arity: usize,
    members: Vec<Permutation>,
    kind: Kind,
}

fn check_arity(n: usize) -> Result<()> {
    if n == 0 || n > MAX_ARITY {
        return Err(Error::ArityTooLarge(n));
    }
    Ok(())
}

impl SymmetryGroup {
    pub fn trivial(n: usize) -> Result<Self> {
        check_arity(n)?;
        Ok(SymmetryGroup {
            arity: n,
            members: vec![Permutation::identity(n)],
            kind: Kind::Trivial,
        })
    }

    /// The full symmetric group; with `n = 8` this stores 40320 members.
    pub fn full(n: usize) -> Result<Self> {
        check_arity(n)?;
        let mut members = Vec::new();
        let mut cur: Vec<u8> = (0..n as u8).collect();
        loop {
            members.push(Permutation(cur.clone().into()));
            if !next_permutation(&mut cur) {
                break;
            }
        }
        let kind = if n == 1 { Kind::Trivial } else { Kind::Full };
        Ok(SymmetryGroup {
            arity: n,
            members,
            kind,
        })
    }

    pub fn from_generators(n: usize, gens: &[Permutation]) -> Result<Self> {
        Self::from_generators_limited(n, gens, DEFAULT_ORDER_LIMIT)
    }

    pub fn from_generators_limited(n: usize, gens: &[Permutation], limit: usize) -> Result<Self> {
        check_arity(n)?;
        for g in gens {
            if g.len() != n {
                return Err(Error::ArityMismatch {
                    expected: n,
                    found: g.len(),
                });
            }
        }
        let id = Permutation::identity(n);
        let mut seen: BTreeSet<Permutation> = BTreeSet::new();
        seen.insert(id.clone());
        let mut queue = VecDeque::from([id]);
        while let Some(p) = queue.pop_front() {
            for g in gens {
                let q = g.compose(&p);
                if seen.insert(q.clone()) {
                    if seen.len() > limit {
                        return Err(Error::GroupClosure(limit));
                    }
                    queue.push_back(q);
                }
            }
        }
        Ok(Self::from_closed(n, seen.into_iter().collect()))
    }

    fn from_closed(n: usize, members: Vec<Permutation>) -> Self {
        let order = members.len();
        let kind = if order == 1 {
            Kind::Trivial
        } else if order == (1..=n).product::<usize>() {
            Kind::Full
        } else {
            Kind::Other
        };
        SymmetryGroup {
            arity: n,
            members,
            kind,
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[Permutation] {
        &self.members
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.members.binary_search(p).is_ok()
    }

    pub fn is_trivial(&self) -> bool {
        self.kind == Kind::Trivial
    }

    pub fn is_full(&self) -> bool {
        self.kind == Kind::Full || (self.arity == 1)
    }

    pub fn is_subgroup_of(&self, other: &SymmetryGroup) -> bool {
        self.arity == other.arity && self.members.iter().all(|p| other.contains(p))
    }

    /// Lex-least member of the orbit `{σ·t : σ ∈ G}`.
    pub fn canonicalize<T: Copy + Ord>(&self, t: &[T]) -> Vec<T> {
        match self.kind {
            Kind::Trivial => t.to_vec(),
            Kind::Full => {
                let mut v = t.to_vec();
                v.sort_unstable();
                v
            }
            Kind::Other => {
                let mut best = t.to_vec();
                let mut cand = vec![t[0]; t.len()];
                for p in &self.members[1..] {
                    for (slot, &j) in cand.iter_mut().zip(p.0.iter()) {
                        *slot = t[j as usize];
                    }
                    if cand < best {
                        best.clone_from(&cand);
                    }
                }
                best
            }
        }
    }

    /// Checked canonicalization for user input.
    pub fn canonicalize_checked<T: Copy + Ord + fmt::Debug>(&self, t: &[T]) -> Result<Vec<T>> {
        if t.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: t.len(),
            });
        }
        for (i, x) in t.iter().enumerate() {
            if t[..i].contains(x) {
                return Err(Error::DuplicateEntry(format!("{x:?}")));
            }
        }
        Ok(self.canonicalize(t))
    }

    /// All distinct members of the orbit of `t`, sorted.
    pub fn orbit<T: Copy + Ord>(&self, t: &[T]) -> Vec<Vec<T>> {
        let mut out: Vec<Vec<T>> = self.members.iter().map(|p| p.act(t)).collect();
        out.sort();
        out.dedup();
        out
    }

    /// A deterministic generating set: scan members in order, keep those not
    /// yet generated.
    pub fn generators(&self) -> Vec<Permutation> {
        let mut gens: Vec<Permutation> = Vec::new();
        let mut closure = vec![Permutation::identity(self.arity)];
        for p in &self.members {
            if closure.contains(p) {
                continue;
            }
            gens.push(p.clone());
            closure = SymmetryGroup::from_generators(self.arity, &gens)
                .expect("subgroup of a valid group")
                .members;
            if closure.len() == self.members.len() {
                break;
            }
        }
        gens
    }
}

impl fmt::Debug for SymmetryGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            Kind::Trivial => write!(f, "id({})", self.arity),
            Kind::Full => write!(f, "sym({})", self.arity),
            Kind::Other => write!(f, "<{:?}>", self.generators()),
        }
    }
}

fn next_permutation(v: &mut [u8]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn transposition_12() -> SymmetryGroup {
        let g = Permutation::from_one_based(&[2, 1, 3]).unwrap();
        SymmetryGroup::from_generators(3, &[g]).unwrap()
    }

    #[test]
    fn canonical_examples() {
        let s3 = SymmetryGroup::full(3).unwrap();
        assert_eq!(s3.order(), 6);
        assert_eq!(s3.canonicalize(&[3, 1, 2]), vec![1, 2, 3]);
        let id = SymmetryGroup::trivial(3).unwrap();
        assert_eq!(id.canonicalize(&[3, 1, 2]), vec![3, 1, 2]);
        let h = transposition_12();
        assert_eq!(h.order(), 2);
        assert_eq!(h.canonicalize(&[2, 1, 3]), vec![1, 2, 3]);
        assert_eq!(h.canonicalize(&[3, 1, 2]), vec![1, 3, 2]);
    }

    #[test]
    fn closure_limit_is_enforced() {
        let a = Permutation::from_one_based(&[2, 3, 4, 1]).unwrap();
        let b = Permutation::from_one_based(&[2, 1, 3, 4]).unwrap();
        assert_eq!(
            SymmetryGroup::from_generators(4, &[a.clone(), b.clone()])
                .unwrap()
                .order(),
            24
        );
        assert_eq!(
            SymmetryGroup::from_generators_limited(4, &[a, b], 10),
            Err(Error::GroupClosure(10))
        );
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Permutation::from_one_based(&[1, 1, 2]).is_err());
        assert_eq!(SymmetryGroup::full(9).unwrap_err(), Error::ArityTooLarge(9));
        let s3 = SymmetryGroup::full(3).unwrap();
        assert!(matches!(
            s3.canonicalize_checked(&[1, 1, 2]),
            Err(Error::DuplicateEntry(_))
        ));
        assert!(matches!(
            s3.canonicalize_checked(&[1, 2]),
            Err(Error::ArityMismatch { .. })
        ));
    }

    #[test]
    fn generators_regenerate_the_group() {
        for g in [
            SymmetryGroup::full(4).unwrap(),
            transposition_12(),
            SymmetryGroup::trivial(3).unwrap(),
        ] {
            let back = SymmetryGroup::from_generators(g.arity(), &g.generators()).unwrap();
            assert_eq!(back, g);
        }
    }

    fn groups() -> Vec<SymmetryGroup> {
        let cyc = Permutation::from_one_based(&[2, 3, 1, 4]).unwrap();
        vec![
            SymmetryGroup::full(4).unwrap(),
            SymmetryGroup::trivial(4).unwrap(),
            SymmetryGroup::from_generators(4, &[cyc]).unwrap(),
        ]
    }

    proptest! {
        #[test]
        fn canonicalize_is_constant_on_orbits(
            t in Just(vec![0u32, 1, 2, 3]).prop_shuffle(),
            gi in 0usize..3,
        ) {
            let g = &groups()[gi];
            let c = g.canonicalize(&t);
            prop_assert_eq!(g.canonicalize(&c), c.clone());
            for p in g.members() {
                prop_assert_eq!(g.canonicalize(&p.act(&t)), c.clone());
            }
            prop_assert_eq!(&g.orbit(&t)[0], &c);
        }
    }
}
