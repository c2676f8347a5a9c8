//! The pregeometry whose rank function is `dim`, its associated geometry,
//! and isomorphism of pregeometries.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::predim::{self, for_each_combination, Search};
use crate::set::{submasks, Elem, ElementSet, Mask};
use crate::structure::FiniteStructure;

/// Ground sets up to this size get a full rank table on first use.
pub const TABLE_SIZE: usize = 16;
/// Largest ground set for the bijection search.
pub const ISO_LIMIT: usize = 10;

pub struct Matroid<'a> {
    m: &'a FiniteStructure,
    search: Search,
    table: OnceLock<Vec<i8>>,
    memo: Mutex<HashMap<ElementSet, i64>>,
}

/// A violated axiom with the sets involved.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomFailure {
    pub axiom: &'static str,
    pub sets: Vec<Vec<String>>,
}

impl<'a> Matroid<'a> {
    pub fn new(m: &'a FiniteStructure, search: Search) -> Self {
        Matroid {
            m,
            search,
            table: OnceLock::new(),
            memo: Mutex::new(HashMap::new()),
        }
    }

    pub fn structure(&self) -> &FiniteStructure {
        self.m
    }

    pub fn len(&self) -> usize {
        self.m.len()
    }

    pub fn is_empty(&self) -> bool {
        self.m.is_empty()
    }

    fn full_mask(&self) -> Mask {
        ((1u64 << self.len()) - 1) as Mask
    }

    fn table(&self) -> Option<&[i8]> {
        (self.len() <= TABLE_SIZE).then(|| {
            self.table
                .get_or_init(|| predim::dim_table(self.m))
                .as_slice()
        })
    }

    pub fn rank(&self, y: &ElementSet) -> Result<i64> {
        self.m.check_subset(y)?;
        if let Some(t) = self.table() {
            return Ok(t[y.to_mask() as usize] as i64);
        }
        if let Some(&r) = self.memo.lock().expect("memo lock").get(y) {
            return Ok(r);
        }
        let r = self.search.dim(self.m, y)?;
        self.memo.lock().expect("memo lock").insert(y.clone(), r);
        Ok(r)
    }

    /// `{a : rank(Y ∪ a) = rank(Y)}`.
    pub fn closure(&self, y: &ElementSet) -> Result<ElementSet> {
        let r = self.rank(y)?;
        let mut out = y.clone();
        for a in 0..self.len() as Elem {
            if !y.contains(a) && self.rank(&y.with(a))? == r {
                out.insert(a);
            }
        }
        Ok(out)
    }

    /// Every independent set of size at most `k`, by size then lex order.
    pub fn independent_sets(&self, k: usize) -> Result<Vec<ElementSet>> {
        if k > self.len() {
            return Err(Error::PreconditionFailed(format!(
                "k = {k} exceeds the ground set"
            )));
        }
        self.search.require(self.len())?;
        let mut out = Vec::new();
        let mut err = None;
        for size in 0..=k {
            for_each_combination(self.len(), size, &mut |idx| {
                let y: ElementSet = idx.iter().map(|&i| i as Elem).collect();
                match self.rank(&y) {
                    Ok(r) if r == size as i64 => out.push(y),
                    Ok(_) => {}
                    Err(e) => {
                        err = Some(e);
                        return false;
                    }
                }
                true
            });
            if let Some(e) = err {
                return Err(e);
            }
        }
        Ok(out)
    }

    /// A basis of `y` built by scanning its elements in order.
    pub fn greedy_basis(&self, y: &ElementSet) -> Result<ElementSet> {
        let mut b = ElementSet::new();
        for e in y.iter() {
            let c = b.with(e);
            if self.rank(&c)? == c.len() as i64 {
                b = c;
            }
        }
        Ok(b)
    }

    pub fn associated_geometry(&self) -> Result<GeometryQuotient> {
        self.search.require(self.len())?;
        let loops = self.closure(&ElementSet::new())?;
        let mut class_of = vec![None; self.len()];
        let mut classes: Vec<ElementSet> = Vec::new();
        for x in 0..self.len() as Elem {
            if loops.contains(x) || class_of[x as usize].is_some() {
                continue;
            }
            let c = self.closure(&ElementSet::singleton(x))?.difference(&loops);
            for e in c.iter() {
                class_of[e as usize] = Some(classes.len());
            }
            classes.push(c);
        }
        Ok(GeometryQuotient {
            loops,
            classes,
            class_of,
        })
    }

    fn cl_mask(&self, t: &[i8], y: Mask) -> Mask {
        let r = t[y as usize];
        (0..self.len())
            .filter(|&a| t[(y | 1 << a) as usize] == r)
            .fold(y, |m, a| m | 1 << a)
    }

    fn names(&self, masks: &[Mask]) -> Vec<Vec<String>> {
        masks
            .iter()
            .map(|&s| self.m.names_of(&ElementSet::from_mask(s)))
            .collect()
    }

    fn exhaustive_table(&self) -> Result<&[i8]> {
        self.search.require(self.len())?;
        self.table().ok_or(Error::SearchBoundExceeded {
            size: self.len(),
            bound: TABLE_SIZE,
        })
    }

    /// The rank axioms: `d(∅) = 0`, unit increments, submodularity.
    pub fn check_rank_axioms(&self) -> Result<Option<AxiomFailure>> {
        let t = self.exhaustive_table()?;
        let full = self.full_mask();
        let fail = |axiom, sets: &[Mask]| {
            Ok(Some(AxiomFailure {
                axiom,
                sets: self.names(sets),
            }))
        };
        if t[0] != 0 {
            return fail("empty set has rank 0", &[0]);
        }
        for y in 0..=full {
            for a in 0..self.len() {
                let ya = y | 1 << a;
                if !(t[y as usize] <= t[ya as usize] && t[ya as usize] <= t[y as usize] + 1) {
                    return fail("unit increments", &[y, 1 << a]);
                }
            }
        }
        for y in 0..=full {
            for z in y..=full {
                if t[(y | z) as usize] + t[(y & z) as usize] > t[y as usize] + t[z as usize] {
                    return fail("submodularity", &[y, z]);
                }
            }
        }
        Ok(None)
    }

    /// Closure axioms 1 to 5 and equal cardinality of bases.
    pub fn check_closure_axioms(&self) -> Result<Option<AxiomFailure>> {
        let t = self.exhaustive_table()?;
        let full = self.full_mask();
        let fail = |axiom, sets: &[Mask]| {
            Ok(Some(AxiomFailure {
                axiom,
                sets: self.names(sets),
            }))
        };
        let cl: Vec<Mask> = (0..=full).map(|y| self.cl_mask(t, y)).collect();
        let indep = |y: Mask| t[y as usize] as u32 == y.count_ones();
        for y in 0..=full {
            let c = cl[y as usize];
            if c & y != y {
                return fail("extensive", &[y]);
            }
            if cl[c as usize] != c {
                return fail("idempotent", &[y]);
            }
            for z in submasks(full & !y) {
                if cl[(y | z) as usize] & c != c {
                    return fail("monotone", &[y, y | z]);
                }
            }
            let basis = self.greedy_basis(&ElementSet::from_mask(y))?.to_mask();
            if cl[basis as usize] != c {
                return fail("finite character", &[y, basis]);
            }
            for b in 0..self.len() {
                let yb = y | 1 << b;
                let gained = cl[yb as usize] & !c;
                for a in (0..self.len()).filter(|&a| gained >> a & 1 == 1) {
                    if cl[(y | 1 << a) as usize] >> b & 1 == 0 {
                        return fail("exchange", &[y, 1 << a, 1 << b]);
                    }
                }
            }
            for bset in submasks(y) {
                if indep(bset)
                    && cl[bset as usize] & y == y
                    && bset.count_ones() as i8 != t[y as usize]
                {
                    return fail("bases have equal size", &[y, bset]);
                }
            }
        }
        Ok(None)
    }
}

/// `X₀ / ∼` with `X₀ = X ∖ cl(∅)` and `a ∼ b ⇔ b ∈ cl(a)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeometryQuotient {
    pub loops: ElementSet,
    /// Classes ordered by least element.
    pub classes: Vec<ElementSet>,
    class_of: Vec<Option<usize>>,
}

impl GeometryQuotient {
    pub fn class_of(&self, e: Elem) -> Option<usize> {
        self.class_of.get(e as usize).copied().flatten()
    }

    pub fn union(&self, ids: &[usize]) -> ElementSet {
        ids.iter()
            .fold(ElementSet::new(), |acc, &i| acc.union(&self.classes[i]))
    }

    /// `dim_∼(Ỹ) = dim(⋃Ỹ)`.
    pub fn rank(&self, mat: &Matroid, ids: &[usize]) -> Result<i64> {
        mat.rank(&self.union(ids))
    }

    pub fn closure(&self, mat: &Matroid, ids: &[usize]) -> Result<Vec<usize>> {
        let c = mat.closure(&self.union(ids))?;
        let mut out: Vec<usize> = c.iter().filter_map(|e| self.class_of(e)).collect();
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    /// `cl(∅) = ∅` and `cl({x}) = {x}` in the quotient.
    pub fn is_geometry(&self, mat: &Matroid) -> Result<bool> {
        if !self.closure(mat, &[])?.is_empty() {
            return Ok(false);
        }
        for i in 0..self.classes.len() {
            if self.closure(mat, &[i])? != vec![i] {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// A bijection `f` with `rank₁(Y) = rank₂(f[Y])` for every `Y`, as a map of
/// ids, or `None` when none exists.
pub fn pregeometry_isomorphic(m1: &Matroid, m2: &Matroid) -> Result<Option<Vec<Elem>>> {
    for m in [m1, m2] {
        if m.len() > ISO_LIMIT {
            return Err(Error::SearchBoundExceeded {
                size: m.len(),
                bound: ISO_LIMIT,
            });
        }
    }
    if m1.len() != m2.len() {
        return Ok(None);
    }
    let n = m1.len();
    let (t1, t2) = (m1.exhaustive_table()?, m2.exhaustive_table()?);
    let signature = |t: &[i8], x: usize| {
        let mut pairs: Vec<i8> = (0..n)
            .filter(|&y| y != x)
            .map(|y| t[(1 << x) | (1 << y)])
            .collect();
        pairs.sort_unstable();
        let mut triples = Vec::new();
        for y in (0..n).filter(|&y| y != x) {
            for z in (y + 1..n).filter(|&z| z != x) {
                triples.push(t[(1 << x) | (1 << y) | (1 << z)]);
            }
        }
        triples.sort_unstable();
        (t[1 << x], pairs, triples)
    };
    let s1: Vec<_> = (0..n).map(|x| signature(t1, x)).collect();
    let s2: Vec<_> = (0..n).map(|x| signature(t2, x)).collect();
    let mut img = vec![0usize; n];
    let mut used = vec![false; n];
    fn go(
        i: usize,
        n: usize,
        t1: &[i8],
        t2: &[i8],
        ok: &dyn Fn(usize, usize) -> bool,
        img: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        if i == n {
            return true;
        }
        for c in 0..n {
            if used[c] || !ok(i, c) {
                continue;
            }
            img[i] = c;
            // Every subset of 0..=i containing i.
            let consistent = (0u32..1 << i).all(|s| {
                let y = s | 1 << i;
                let fy = (0..=i)
                    .filter(|&j| y >> j & 1 == 1)
                    .fold(0usize, |m, j| m | 1 << img[j]);
                t1[y as usize] == t2[fy]
            });
            if consistent {
                used[c] = true;
                if go(i + 1, n, t1, t2, ok, img, used) {
                    return true;
                }
                used[c] = false;
            }
        }
        false
    }
    let ok = |i: usize, c: usize| s1[i] == s2[c];
    Ok(
        go(0, n, t1, t2, &ok, &mut img, &mut used)
            .then(|| img.iter().map(|&c| c as Elem).collect()),
    )
}
