//! Element sets over the dense ids of one structure.

use std::fmt;

/// Dense element id inside a [`FiniteStructure`](crate::FiniteStructure).
pub type Elem = u32;

/// Bitmask over the universe of a structure with at most 32 elements.
pub type Mask = u32;

/// A sorted, duplicate-free set of element ids.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementSet(Vec<Elem>);

impl ElementSet {
    pub fn new() -> Self {
        ElementSet(Vec::new())
    }

    /// `0..n`.
    pub fn full(n: usize) -> Self {
        ElementSet((0..n as Elem).collect())
    }

    pub fn singleton(e: Elem) -> Self {
        ElementSet(vec![e])
    }

    pub fn from_mask(mask: Mask) -> Self {
        let mut out = Vec::with_capacity(mask.count_ones() as usize);
        let mut m = mask;
        while m != 0 {
            out.push(m.trailing_zeros());
            m &= m - 1;
        }
        ElementSet(out)
    }

    /// Panics if an element does not fit a 32-bit mask.
    pub fn to_mask(&self) -> Mask {
        self.0.iter().fold(0, |acc, &e| {
            assert!(e < 32, "element {e} does not fit a mask");
            acc | (1 << e)
        })
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, e: Elem) -> bool {
        self.0.binary_search(&e).is_ok()
    }

    pub fn insert(&mut self, e: Elem) -> bool {
        match self.0.binary_search(&e) {
            Ok(_) => false,
            Err(pos) => {
                self.0.insert(pos, e);
                true
            }
        }
    }

    pub fn remove(&mut self, e: Elem) -> bool {
        match self.0.binary_search(&e) {
            Ok(pos) => {
                self.0.remove(pos);
                true
            }
            Err(_) => false,
        }
    }

    pub fn with(&self, e: Elem) -> Self {
        let mut s = self.clone();
        s.insert(e);
        s
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = Elem> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[Elem] {
        &self.0
    }

    pub fn max_elem(&self) -> Option<Elem> {
        self.0.last().copied()
    }

    pub fn is_subset(&self, other: &ElementSet) -> bool {
        if self.len() > other.len() {
            return false;
        }
        let mut it = other.0.iter();
        'outer: for x in &self.0 {
            for y in it.by_ref() {
                if y == x {
                    continue 'outer;
                }
                if y > x {
                    return false;
                }
            }
            return false;
        }
        true
    }

    pub fn union(&self, other: &ElementSet) -> ElementSet {
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (a, b) = (self.0[i], other.0[j]);
            if a < b {
                out.push(a);
                i += 1;
            } else if b < a {
                out.push(b);
                j += 1;
            } else {
                out.push(a);
                i += 1;
                j += 1;
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        ElementSet(out)
    }

    pub fn intersection(&self, other: &ElementSet) -> ElementSet {
        ElementSet(
            self.0
                .iter()
                .copied()
                .filter(|&e| other.contains(e))
                .collect(),
        )
    }

    pub fn difference(&self, other: &ElementSet) -> ElementSet {
        ElementSet(
            self.0
                .iter()
                .copied()
                .filter(|&e| !other.contains(e))
                .collect(),
        )
    }

    /// True when every entry of `tuple` is in the set.
    pub fn covers(&self, tuple: &[Elem]) -> bool {
        tuple.iter().all(|&e| self.contains(e))
    }
}

impl FromIterator<Elem> for ElementSet {
    fn from_iter<I: IntoIterator<Item = Elem>>(iter: I) -> Self {
        let mut v: Vec<Elem> = iter.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        ElementSet(v)
    }
}

impl From<Vec<Elem>> for ElementSet {
    fn from(v: Vec<Elem>) -> Self {
        v.into_iter().collect()
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.0.iter()).finish()
    }
}

/// Iterates every submask of `mask` (including `0` and `mask`).
pub fn submasks(mask: Mask) -> impl Iterator<Item = Mask> {
    let mut next = Some(mask);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 {
            None
        } else {
            Some((cur - 1) & mask)
        };
        Some(cur)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_algebra() {
        let a: ElementSet = vec![3, 1, 2, 1].into();
        let b: ElementSet = vec![2, 5].into();
        assert_eq!(a.as_slice(), &[1, 2, 3]);
        assert_eq!(a.union(&b).as_slice(), &[1, 2, 3, 5]);
        assert_eq!(a.intersection(&b).as_slice(), &[2]);
        assert_eq!(a.difference(&b).as_slice(), &[1, 3]);
        assert!(ElementSet::from(vec![1, 3]).is_subset(&a));
        assert!(!b.is_subset(&a));
        assert_eq!(ElementSet::from_mask(a.to_mask()), a);
    }

    #[test]
    fn submask_enumeration_is_complete() {
        let all: Vec<Mask> = submasks(0b1011).collect();
        assert_eq!(all.len(), 8);
        assert!(all.contains(&0) && all.contains(&0b1011));
    }
}
