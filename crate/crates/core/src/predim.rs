//! Predimension, dimension, self-sufficiency and the closures built on them.
//!
//! Exhaustive routines work on bitmasks and are limited by the search bound.
//! Above the bound, `dim` and the self-sufficient closure switch to a
//! max-weight-closure min cut, which is exact at every size.

use crate::error::{Error, Result};
use crate::flow::{FlowNetwork, INF};
use crate::set::{submasks, Elem, ElementSet, Mask};
use crate::structure::FiniteStructure;

pub const DEFAULT_BOUND: usize = 24;
/// No configured bound may exceed this.
pub const HARD_BOUND: usize = 28;
/// Below this size the self-sufficient closure is found by a full sweep.
pub const SWEEP_LIMIT: usize = 16;
/// Largest structure for which a full dimension table is built.
pub const TABLE_LIMIT: usize = 24;

/// Search limits shared by all exhaustive operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Search {
    bound: usize,
}

impl Default for Search {
    fn default() -> Self {
        Search {
            bound: DEFAULT_BOUND,
        }
    }
}

/// Result of a self-sufficient closure computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureCertificate {
    pub input: ElementSet,
    pub closure: ElementSet,
    pub minimizers_examined: u64,
    pub dimension: i64,
}

/// The relation pattern of a structure restricted to bitmasks.
struct Masked<'a> {
    m: &'a FiniteStructure,
    rels: &'a [Mask],
}

impl<'a> Masked<'a> {
    fn new(m: &'a FiniteStructure) -> Option<Self> {
        m.relation_masks().map(|rels| Masked { m, rels })
    }

    fn r(&self, s: Mask) -> i64 {
        self.rels.iter().filter(|&&r| r & s == r).count() as i64
    }

    fn delta(&self, s: Mask) -> i64 {
        s.count_ones() as i64 - self.r(s)
    }

    /// Branch and bound over supersets of `a`. Returns the least δ.
    fn dim(&self, a: Mask) -> i64 {
        let open: Vec<Mask> = self.rels.iter().copied().filter(|&r| r & a != r).collect();
        if open.is_empty() {
            return self.delta(a);
        }
        let mut degree = vec![0usize; self.m.len()];
        for &r in &open {
            for e in ElementSet::from_mask(r & !a).iter() {
                degree[e as usize] += 1;
            }
        }
        let mut cands: Vec<Elem> = (0..self.m.len() as Elem)
            .filter(|&e| degree[e as usize] > 0)
            .collect();
        cands.sort_by_key(|&e| (std::cmp::Reverse(degree[e as usize]), e));
        let mut rem = vec![0 as Mask; cands.len() + 1];
        for i in (0..cands.len()).rev() {
            rem[i] = rem[i + 1] | (1 << cands[i]);
        }
        let base_r = self.r(a);
        let mut bb = Bb {
            open: &open,
            cands: &cands,
            rem: &rem,
            base_r,
            best: a.count_ones() as i64 - base_r,
        };
        bb.run(0, a, a.count_ones() as i64, 0);
        bb.best
    }
}

struct Bb<'a> {
    open: &'a [Mask],
    cands: &'a [Elem],
    rem: &'a [Mask],
    base_r: i64,
    best: i64,
}

impl Bb<'_> {
    /// `size` is |b| and `gained` counts open relations inside `b`.
    fn run(&mut self, i: usize, b: Mask, size: i64, gained: i64) {
        let reach = b | self.rem[i];
        let possible = self.open.iter().filter(|&&r| r & reach == r).count() as i64;
        if size - self.base_r - possible >= self.best {
            return;
        }
        let cur = size - self.base_r - gained;
        if cur < self.best {
            self.best = cur;
        }
        if i == self.cands.len() {
            return;
        }
        let e = self.cands[i];
        let nb = b | (1 << e);
        let newly = self
            .open
            .iter()
            .filter(|&&r| r & (1 << e) != 0 && r & nb == r)
            .count() as i64;
        self.run(i + 1, nb, size + 1, gained + newly);
        self.run(i + 1, b, size, gained);
    }
}

impl Search {
    pub fn new(bound: usize) -> Result<Self> {
        if bound > HARD_BOUND {
            return Err(Error::SearchBoundExceeded {
                size: bound,
                bound: HARD_BOUND,
            });
        }
        Ok(Search { bound })
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    /// Errors unless `size` is within the bound. For inherently exhaustive
    /// operations.
    pub fn require(&self, size: usize) -> Result<()> {
        if size > self.bound {
            return Err(Error::SearchBoundExceeded {
                size,
                bound: self.bound,
            });
        }
        Ok(())
    }

    fn masked<'a>(&self, m: &'a FiniteStructure) -> Option<Masked<'a>> {
        if m.len() <= self.bound {
            Masked::new(m)
        } else {
            None
        }
    }

    pub fn dim(&self, m: &FiniteStructure, a: &ElementSet) -> Result<i64> {
        m.check_subset(a)?;
        if a.len() == m.len() {
            return Ok(delta(m, a));
        }
        Ok(match self.masked(m) {
            Some(mk) => mk.dim(a.to_mask()),
            None => flow_closure(m, a).1,
        })
    }

    pub fn is_self_sufficient(&self, m: &FiniteStructure, a: &ElementSet) -> Result<bool> {
        Ok(self.dim(m, a)? == delta(m, a))
    }

    pub fn in_class(&self, m: &FiniteStructure) -> Result<bool> {
        Ok(self.dim(m, &ElementSet::new())? == 0)
    }

    pub fn self_sufficient_closure(
        &self,
        m: &FiniteStructure,
        a: &ElementSet,
    ) -> Result<ClosureCertificate> {
        m.check_subset(a)?;
        if a.len() == m.len() {
            return Ok(ClosureCertificate {
                input: a.clone(),
                closure: a.clone(),
                minimizers_examined: 1,
                dimension: delta(m, a),
            });
        }
        if let Some(mk) = self.masked(m) {
            if m.len() <= SWEEP_LIMIT {
                return Ok(sweep_closure(&mk, a));
            }
            return Ok(greedy_closure(&mk, a));
        }
        let (closure, dimension) = flow_closure(m, a);
        Ok(ClosureCertificate {
            input: a.clone(),
            closure,
            minimizers_examined: 1,
            dimension,
        })
    }

    /// `{x : dim(N ∪ {x}) = dim(N)}`.
    pub fn d_closure(&self, m: &FiniteStructure, n: &ElementSet) -> Result<ElementSet> {
        let d = self.dim(m, n)?;
        let mut out = n.clone();
        for x in 0..m.len() as Elem {
            if !n.contains(x) && self.dim(m, &n.with(x))? == d {
                out.insert(x);
            }
        }
        Ok(out)
    }

    pub fn is_d_closed(&self, m: &FiniteStructure, n: &ElementSet) -> Result<bool> {
        Ok(self.d_closure(m, n)? == *n)
    }

    /// Dimension of every subset, indexed by mask.
    pub fn dim_table(&self, m: &FiniteStructure) -> Result<Vec<i8>> {
        self.require(m.len())?;
        if m.len() > TABLE_LIMIT {
            return Err(Error::SearchBoundExceeded {
                size: m.len(),
                bound: TABLE_LIMIT,
            });
        }
        Ok(dim_table(m))
    }
}

/// `|A| − r_G(A)`.
pub fn delta(m: &FiniteStructure, a: &ElementSet) -> i64 {
    a.len() as i64 - m.count_inside(a) as i64
}

/// `δ(B ∪ A) − δ(A)`.
pub fn delta_rel(m: &FiniteStructure, b: &ElementSet, a: &ElementSet) -> i64 {
    delta(m, &b.union(a)) - delta(m, a)
}

pub fn dim(m: &FiniteStructure, a: &ElementSet) -> Result<i64> {
    Search::default().dim(m, a)
}

pub fn is_self_sufficient(m: &FiniteStructure, a: &ElementSet) -> Result<bool> {
    Search::default().is_self_sufficient(m, a)
}

pub fn self_sufficient_closure(m: &FiniteStructure, a: &ElementSet) -> Result<ClosureCertificate> {
    Search::default().self_sufficient_closure(m, a)
}

pub fn d_closure(m: &FiniteStructure, n: &ElementSet) -> Result<ElementSet> {
    Search::default().d_closure(m, n)
}

pub fn in_class(m: &FiniteStructure) -> Result<bool> {
    Search::default().in_class(m)
}

/// Predimension of every subset by mask; needs `len() <= 32`.
pub fn delta_table(m: &FiniteStructure) -> Vec<i8> {
    let n = m.len();
    assert!(n <= TABLE_LIMIT.max(HARD_BOUND));
    let rels = m.relation_masks().expect("masks available");
    let mut by_top: Vec<Vec<Mask>> = vec![Vec::new(); n];
    for &r in rels {
        by_top[31 - r.leading_zeros() as usize].push(r);
    }
    let mut r = vec![0i32; 1 << n];
    for s in 1..(1usize << n) {
        let top = usize::BITS as usize - 1 - s.leading_zeros() as usize;
        let rest = s & !(1 << top);
        let add = by_top[top]
            .iter()
            .filter(|&&x| x as usize & s == x as usize)
            .count() as i32;
        r[s] = r[rest] + add;
    }
    (0..(1usize << n))
        .map(|s| (s.count_ones() as i32 - r[s]) as i8)
        .collect()
}

pub(crate) fn dim_table(m: &FiniteStructure) -> Vec<i8> {
    let n = m.len();
    let mut t = delta_table(m);
    let full = (1usize << n) - 1;
    for s in (0..full).rev() {
        let mut best = t[s];
        let mut free = full & !s;
        while free != 0 {
            let b = free & free.wrapping_neg();
            best = best.min(t[s | b]);
            free &= free - 1;
        }
        t[s] = best;
    }
    t
}

fn sweep_closure(mk: &Masked, a: &ElementSet) -> ClosureCertificate {
    let am = a.to_mask();
    let full: Mask = if mk.m.len() == 32 {
        Mask::MAX
    } else {
        (1 << mk.m.len()) - 1
    };
    let mut best = i64::MAX;
    let mut inter = full;
    let mut count = 0u64;
    for extra in submasks(full & !am) {
        let s = am | extra;
        let d = mk.delta(s);
        if d < best {
            best = d;
            inter = s;
            count = 1;
        } else if d == best {
            inter &= s;
            count += 1;
        }
    }
    ClosureCertificate {
        input: a.clone(),
        closure: ElementSet::from_mask(inter),
        minimizers_examined: count,
        dimension: best,
    }
}

/// Repeatedly absorb a smallest extension with negative relative δ.
fn greedy_closure(mk: &Masked, a: &ElementSet) -> ClosureCertificate {
    let n = mk.m.len();
    let mut cur = a.to_mask();
    let mut steps = 0u64;
    'outer: loop {
        let d = mk.delta(cur);
        let free: Vec<Elem> = (0..n as Elem).filter(|&e| cur & (1 << e) == 0).collect();
        for k in 1..=free.len() {
            let mut found = None;
            for_each_combination(free.len(), k, &mut |idx| {
                let x = idx.iter().fold(0, |m, &i| m | (1 << free[i]));
                if mk.delta(cur | x) < d {
                    found = Some(x);
                    return false;
                }
                true
            });
            if let Some(x) = found {
                cur |= x;
                steps += 1;
                continue 'outer;
            }
        }
        break;
    }
    ClosureCertificate {
        input: a.clone(),
        closure: ElementSet::from_mask(cur),
        minimizers_examined: steps + 1,
        dimension: mk.delta(cur),
    }
}

/// Calls `f` with each `k`-subset of `0..n` in lex order until it returns false.
pub fn for_each_combination(n: usize, k: usize, f: &mut impl FnMut(&[usize]) -> bool) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if !f(&idx) {
            return;
        }
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Minimal δ-minimizing superset of `a` and its δ, by min cut.
///
/// Relations not inside `a` are projects of profit 1, outside elements are
/// tools of cost 1; the best closure gains `open − maxflow`.
pub(crate) fn flow_closure(m: &FiniteStructure, a: &ElementSet) -> (ElementSet, i64) {
    let open: Vec<usize> = (0..m.relations().len())
        .filter(|&ri| !a.covers(m.relations()[ri].entries()))
        .collect();
    let base = delta(m, a);
    if open.is_empty() {
        return (a.clone(), base);
    }
    let mut elem_node = vec![usize::MAX; m.len()];
    let mut outside = Vec::new();
    for &ri in &open {
        for &e in m.relations()[ri].entries() {
            if !a.contains(e) && elem_node[e as usize] == usize::MAX {
                elem_node[e as usize] = 0;
                outside.push(e);
            }
        }
    }
    let (s, t) = (0, 1);
    let first_rel = 2;
    let first_elem = first_rel + open.len();
    for (i, &e) in outside.iter().enumerate() {
        elem_node[e as usize] = first_elem + i;
    }
    let mut g = FlowNetwork::new(first_elem + outside.len());
    for (i, &ri) in open.iter().enumerate() {
        g.add_edge(s, first_rel + i, 1);
        for &e in m.relations()[ri].entries() {
            if !a.contains(e) {
                g.add_edge(first_rel + i, elem_node[e as usize], INF);
            }
        }
    }
    for (i, _) in outside.iter().enumerate() {
        g.add_edge(first_elem + i, t, 1);
    }
    let flow = g.max_flow(s, t);
    let side = g.source_side(s);
    let mut closure = a.clone();
    for (i, &e) in outside.iter().enumerate() {
        if side[first_elem + i] {
            closure.insert(e);
        }
    }
    (closure, base - (open.len() as i64 - flow))
}

/// Exact min-cut dimension, independent of any bound.
pub fn dim_flow(m: &FiniteStructure, a: &ElementSet) -> i64 {
    flow_closure(m, a).1
}

/// Exact min-cut closure, independent of any bound.
pub fn closure_flow(m: &FiniteStructure, a: &ElementSet) -> ElementSet {
    flow_closure(m, a).0
}

pub fn is_self_sufficient_flow(m: &FiniteStructure, a: &ElementSet) -> bool {
    flow_closure(m, a).1 == delta(m, a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::SymmetryGroup;
    use crate::oracle;
    use crate::random::random_structure;
    use crate::structure::structure;
    use crate::testing::{base_structure, s3};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    #[test]
    fn base_structure_values() {
        let m = base_structure();
        let all = m.universe();
        assert_eq!(delta(&m, &all), 2);
        assert_eq!(delta(&m, &ElementSet::new()), 0);
        let b = m.set_of(&["b2"]).unwrap();
        let a = m.set_of(&["a1", "b1"]).unwrap();
        assert_eq!(delta_rel(&m, &b, &a), 0);
        assert!(in_class(&m).unwrap());
        assert_eq!(dim(&m, &all).unwrap(), 2);
        let head = m.set_of(&["a1", "a2", "a3"]).unwrap();
        assert_eq!(dim(&m, &head).unwrap(), oracle::dim(&m, &head));
        assert_eq!(dim(&m, &head).unwrap(), 2);
    }

    #[test]
    fn base_large_proper_subsets_are_not_strong() {
        let m = base_structure();
        for s in 0u32..(1 << 11) {
            let x = ElementSet::from_mask(s);
            if x.len() > 3 && x.len() < 11 {
                assert!(!is_self_sufficient(&m, &x).unwrap(), "{x:?}");
            }
        }
    }

    #[test]
    fn base_closure_and_d_closure() {
        let m = base_structure();
        let a = m
            .set_of(&["a1", "a2", "a3", "b1", "b2", "b3", "b4", "b5"])
            .unwrap();
        let c = self_sufficient_closure(&m, &a).unwrap();
        assert_eq!(c.closure, oracle::ss_closure(&m, &a));
        assert_eq!(c.closure, m.universe());
        assert_eq!(c.dimension, 2);
        let head = m.set_of(&["a1", "a2", "a3"]).unwrap();
        let dc = d_closure(&m, &head).unwrap();
        assert_eq!(dc, oracle::d_closure(&m, &head));
        assert_eq!(dc, m.universe());
    }

    #[test]
    fn small_examples() {
        let s3 = Arc::new(SymmetryGroup::full(3).unwrap());
        let one = structure("one", s3.clone(), &["x", "y", "z"], &[["x", "y", "z"]]).unwrap();
        assert_eq!(delta(&one, &one.universe()), 2);
        let empty = FiniteStructure::empty("e", s3.clone());
        assert!(in_class(&empty).unwrap());
        let dense = structure(
            "dense",
            s3,
            &["p", "q", "r", "s", "t"],
            &[
                ["p", "q", "r"],
                ["p", "q", "s"],
                ["p", "q", "t"],
                ["p", "r", "s"],
                ["p", "r", "t"],
                ["p", "s", "t"],
            ],
        )
        .unwrap();
        assert_eq!(delta(&dense, &dense.universe()), -1);
        assert!(!in_class(&dense).unwrap());
    }

    #[test]
    fn flow_and_table_agree_with_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..60 {
            let m = random_structure(&mut rng, &s3(), 10, 14);
            let t = dim_table(&m);
            for s in 0u32..(1 << m.len()) {
                let a = ElementSet::from_mask(s);
                let want = oracle::dim(&m, &a);
                assert_eq!(t[s as usize] as i64, want);
                assert_eq!(dim_flow(&m, &a), want);
                if s % 7 == 0 {
                    assert_eq!(dim(&m, &a).unwrap(), want);
                    assert_eq!(closure_flow(&m, &a), oracle::ss_closure(&m, &a));
                }
            }
        }
    }

    #[test]
    fn greedy_matches_sweep() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..40 {
            let m = random_structure(&mut rng, &s3(), 12, 16);
            let mk = Masked::new(&m).unwrap();
            for s in [0u32, 1, 3, 0b10101, 0b111000] {
                let a = ElementSet::from_mask(s & ((1 << m.len()) - 1));
                assert_eq!(
                    greedy_closure(&mk, &a).closure,
                    sweep_closure(&mk, &a).closure
                );
            }
        }
    }

    #[test]
    fn bound_beyond_hard_cap_is_rejected() {
        assert!(Search::new(29).is_err());
        let s = Search::new(4).unwrap();
        assert!(s.require(5).is_err());
        assert!(s.dim_table(&base_structure()).is_err());
    }

    #[test]
    fn combination_order() {
        let mut seen = Vec::new();
        for_each_combination(4, 2, &mut |c| {
            seen.push(c.to_vec());
            true
        });
        assert_eq!(seen.len(), 6);
        assert_eq!(seen[0], vec![0, 1]);
        assert_eq!(seen[5], vec![2, 3]);
        let mut all = 0;
        for_each_combination(3, 3, &mut |_| {
            all += 1;
            true
        });
        assert_eq!(all, 1);
        for_each_combination(3, 0, &mut |c| {
            assert!(c.is_empty());
            true
        });
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn closure_is_strong_and_minimal(seed in any::<u64>(), amask in any::<u32>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = random_structure(&mut rng, &s3(), 9, 12);
            let a = ElementSet::from_mask(amask & ((1 << m.len()) - 1));
            let c = self_sufficient_closure(&m, &a).unwrap();
            prop_assert!(a.is_subset(&c.closure));
            prop_assert!(is_self_sufficient(&m, &c.closure).unwrap());
            prop_assert_eq!(c.dimension, dim(&m, &a).unwrap());
            prop_assert_eq!(c.closure, oracle::ss_closure(&m, &a));
        }

        #[test]
        fn strong_sets_intersect_and_compose(seed in any::<u64>(), x in any::<u32>(), y in any::<u32>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = random_structure(&mut rng, &s3(), 9, 12);
            let full = (1u32 << m.len()) - 1;
            let a = self_sufficient_closure(&m, &ElementSet::from_mask(x & full)).unwrap().closure;
            let b = self_sufficient_closure(&m, &ElementSet::from_mask(y & full)).unwrap().closure;
            prop_assert!(is_self_sufficient(&m, &a.intersection(&b)).unwrap());
            // dim inside a strong subset agrees with dim in M
            let sub = m.induced_substructure(&a).unwrap();
            for s in submasks((1u32 << a.len()) - 1) {
                let local = ElementSet::from_mask(s);
                let global: ElementSet = local.iter().map(|i| a.as_slice()[i as usize]).collect();
                prop_assert_eq!(dim(&sub, &local).unwrap(), dim(&m, &global).unwrap());
                if is_self_sufficient(&sub, &local).unwrap() {
                    prop_assert!(is_self_sufficient(&m, &global).unwrap());
                }
            }
        }

        #[test]
        fn d_closed_sets_are_strong(seed in any::<u64>(), x in any::<u32>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = random_structure(&mut rng, &s3(), 9, 12);
            let n = ElementSet::from_mask(x & ((1u32 << m.len()) - 1));
            let c = d_closure(&m, &n).unwrap();
            prop_assert_eq!(d_closure(&m, &c).unwrap(), c.clone());
            prop_assert!(is_self_sufficient(&m, &c).unwrap());
        }
    }
}
