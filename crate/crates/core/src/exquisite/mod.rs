//! Complete symmetric atomic types `q(x̄; ȳ)` and the exquisite predicates.
//!
//! A type is stored as its relation set over variable indices: the head is
//! `0..n`, the tail `n..n+l`. Variables are named `a1…an`, `b1…bl` in the
//! canonical structure.

mod realize;

pub use realize::{
    collisions, collisions_of, decollide, decollide_step, find_unique_orbits, generated_set, heads,
    is_adjacency_loop, realizations, CollisionReport, DecollideStep, LoopStatus, Realizations,
    TypedTuple,
};

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::group::SymmetryGroup;
use crate::iso;
use crate::predim::{delta_table, Search, HARD_BOUND};
use crate::set::Elem;
use crate::structure::FiniteStructure;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AtomicType {
    name: String,
    arity: usize,
    tail: usize,
    relations: Vec<Vec<usize>>,
}

impl std::fmt::Debug for AtomicType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}(n={}, l={}, {:?})",
            self.name, self.arity, self.tail, self.relations
        )
    }
}

/// Outcome of a check that can name a counterexample.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOutcome {
    pub holds: bool,
    /// Variable indices of a failing subset.
    pub witness: Option<Vec<usize>>,
}

impl AtomicType {
    pub fn new(name: &str, arity: usize, tail: usize, relations: &[Vec<usize>]) -> Result<Self> {
        if arity == 0 || arity > crate::group::MAX_ARITY {
            return Err(Error::ArityTooLarge(arity));
        }
        let mut rels = BTreeSet::new();
        for r in relations {
            if r.len() != arity {
                return Err(Error::ArityMismatch {
                    expected: arity,
                    found: r.len(),
                });
            }
            if let Some(&bad) = r.iter().find(|&&i| i >= arity + tail) {
                return Err(Error::UnknownElement(format!("variable {bad}")));
            }
            let mut s = r.clone();
            s.sort_unstable();
            if s.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::DuplicateEntry(format!("{r:?}")));
            }
            rels.insert(s);
        }
        Ok(AtomicType {
            name: name.to_string(),
            arity,
            tail,
            relations: rels.into_iter().collect(),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(&self, name: &str) -> Self {
        AtomicType {
            name: name.to_string(),
            ..self.clone()
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn tail_len(&self) -> usize {
        self.tail
    }

    pub fn points(&self) -> usize {
        self.arity + self.tail
    }

    /// Relations as sorted variable-index tuples, in sorted order.
    pub fn relations(&self) -> &[Vec<usize>] {
        &self.relations
    }

    pub fn t_q(&self) -> usize {
        self.relations.len()
    }

    pub fn d_q(&self) -> i64 {
        self.points() as i64 - self.t_q() as i64
    }

    pub fn var_name(&self, i: usize) -> String {
        if i < self.arity {
            format!("a{}", i + 1)
        } else {
            format!("b{}", i - self.arity + 1)
        }
    }

    pub fn var_names(&self) -> Vec<String> {
        (0..self.points()).map(|i| self.var_name(i)).collect()
    }

    /// The structure on `a1…an b1…bl` realizing exactly `q`.
    pub fn canonical_structure(&self) -> FiniteStructure {
        let names = self.var_names();
        let rels: Vec<Vec<String>> = self
            .relations
            .iter()
            .map(|r| r.iter().map(|&i| names[i].clone()).collect())
            .collect();
        FiniteStructure::from_named(&self.name, sym(self.arity), names, rels)
            .expect("well-formed type")
    }

    /// The identity realization in [`canonical_structure`](Self::canonical_structure).
    pub fn canonical_tuple(&self, m: &FiniteStructure) -> TypedTuple {
        TypedTuple::new(
            self.arity,
            self.var_names()
                .iter()
                .map(|n| m.id_of(n).expect("canonical name"))
                .collect(),
        )
    }

    /// Reads the quantifier-free type of `points` (head first) off `m`.
    pub fn type_of(name: &str, m: &FiniteStructure, arity: usize, points: &[Elem]) -> Result<Self> {
        let pos: HashMap<Elem, usize> = points.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let rels: Vec<Vec<usize>> = m
            .relations()
            .iter()
            .filter_map(|r| {
                r.entries()
                    .iter()
                    .map(|e| pos.get(e).copied())
                    .collect::<Option<Vec<_>>>()
            })
            .collect();
        AtomicType::new(name, arity, points.len() - arity, &rels)
    }

    pub fn check_nice(&self) -> bool {
        let head: Vec<usize> = (0..self.arity).collect();
        self.tail >= 2 * self.arity
            && !self.relations.contains(&head)
            && self.d_q() == self.arity as i64 - 1
    }

    /// Every proper subset `X` with `|X| > n` has `δ(full / X) < 0`.
    pub fn check_intertwined(&self, search: &Search) -> Result<CheckOutcome> {
        let n = self.points();
        search.require(n)?;
        let m = self.canonical_structure();
        let table = delta_table(&m);
        let full = (1usize << n) - 1;
        let top = table[full];
        let bad = (0..full).find(|&s| s.count_ones() as usize > self.arity && table[s] <= top);
        Ok(match bad {
            None => CheckOutcome {
                holds: true,
                witness: None,
            },
            Some(s) => {
                let ids: BTreeSet<Elem> = (0..n as Elem).filter(|i| s >> i & 1 == 1).collect();
                let vars = self
                    .var_names()
                    .iter()
                    .enumerate()
                    .filter(|(_, nm)| ids.contains(&m.id_of(nm).expect("canonical name")))
                    .map(|(i, _)| i)
                    .collect();
                CheckOutcome {
                    holds: false,
                    witness: Some(vars),
                }
            }
        })
    }

    /// The canonical structure has no non-trivial automorphism.
    pub fn check_without_symmetry(&self, search: &Search) -> Result<bool> {
        search.require(self.points())?;
        Ok(iso::is_rigid(&self.canonical_structure()))
    }

    pub fn check_exquisite(&self, search: &Search) -> Result<bool> {
        Ok(self.check_nice()
            && self.check_intertwined(search)?.holds
            && self.check_without_symmetry(search)?)
    }
}

pub(crate) fn sym(n: usize) -> Arc<SymmetryGroup> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<SymmetryGroup>>>> = OnceLock::new();
    let mut map = CACHE
        .get_or_init(Default::default)
        .lock()
        .expect("cache lock");
    map.entry(n)
        .or_insert_with(|| Arc::new(SymmetryGroup::full(n).expect("supported arity")))
        .clone()
}

/// The arity-3 type on head `a1 a2 a3` and tail `b1…b8` with nine orbits.
pub fn base_exquisite_3() -> AtomicType {
    // a = 0..3, b_j = 2 + j
    let b = |j: usize| 2 + j;
    let rels = vec![
        vec![0, b(1), b(2)],
        vec![1, b(2), b(3)],
        vec![2, b(1), b(7)],
        vec![0, b(3), b(4)],
        vec![1, b(4), b(5)],
        vec![2, b(8), b(3)],
        vec![0, b(5), b(6)],
        vec![1, b(6), b(7)],
        vec![0, b(7), b(8)],
    ];
    AtomicType::new("base3", 3, 8, &rels).expect("valid")
}

/// Builds the arity-`k+1` type from an exquisite arity-`k` type and verifies
/// the result before returning it.
pub fn lift_exquisite(q: &AtomicType) -> Result<AtomicType> {
    let search = Search::new(HARD_BOUND)?;
    if !q.check_exquisite(&search)? {
        return Err(Error::PreconditionFailed(format!(
            "{} is not exquisite",
            q.name()
        )));
    }
    let lifted = lift_unchecked(q)?;
    if !lifted.check_nice() {
        return Err(Error::LiftVerificationFailed(
            "lifted type is not nice".into(),
        ));
    }
    let tw = lifted.check_intertwined(&search)?;
    if !tw.holds {
        return Err(Error::LiftVerificationFailed(format!(
            "not intertwined, witness {:?}",
            tw.witness
        )));
    }
    if !lifted.check_without_symmetry(&search)? {
        return Err(Error::LiftVerificationFailed(
            "lifted type has a symmetry".into(),
        ));
    }
    Ok(lifted)
}

/// The construction alone. New layout: old head `0..k`, `a_{k+1}` at `k`,
/// the reordered old tail, then `c1…c_{k+1}`.
pub(crate) fn lift_unchecked(q: &AtomicType) -> Result<AtomicType> {
    let k = q.arity;
    let l = q.tail;
    let r = q
        .relations
        .first()
        .ok_or_else(|| Error::PreconditionFailed("type has no relations".into()))?;
    let avoid: Vec<usize> = (k..k + l).filter(|j| !r.contains(j)).take(k + 1).collect();
    if avoid.len() < k + 1 {
        return Err(Error::LiftVerificationFailed(
            "tail too short to avoid the chosen orbit".into(),
        ));
    }
    let mut tail_order = avoid.clone();
    tail_order.extend((k..k + l).filter(|j| !avoid.contains(j)));
    let mut new_index = vec![0usize; k + l];
    for i in 0..k {
        new_index[i] = i;
    }
    for (pos, &old) in tail_order.iter().enumerate() {
        new_index[old] = k + 1 + pos;
    }
    let a_new = k;
    let b = |i: usize| k + 1 + (i - 1); // b_i, 1-based
    let c = |i: usize| k + 1 + l + ((i - 1) % (k + 1)); // c_i, 1-based, cyclic
    let relabel = |t: &[usize]| -> Vec<usize> { t.iter().map(|&v| new_index[v]).collect() };
    let mut rels = Vec::new();
    for x in &q.relations[1..] {
        let mut t = vec![c(1)];
        t.extend(relabel(x));
        rels.push(t);
    }
    let mut t = vec![c(2)];
    t.extend(relabel(r));
    rels.push(t);
    for i in 1..=k + 1 {
        let mut t = vec![a_new, b(i)];
        t.extend((i..i + k - 1).map(c));
        rels.push(t);
    }
    AtomicType::new(&format!("lift{}", k + 1), k + 1, l + k + 1, &rels)
}

/// The base type lifted `n − 3` times; cached per arity.
pub fn exquisite_for_arity(n: usize) -> Result<AtomicType> {
    static CACHE: OnceLock<Mutex<HashMap<usize, AtomicType>>> = OnceLock::new();
    if n < 3 {
        return Err(Error::PreconditionFailed(format!(
            "no exquisite type of arity {n} is constructed"
        )));
    }
    let cache = CACHE.get_or_init(Default::default);
    if let Some(q) = cache.lock().expect("cache lock").get(&n) {
        return Ok(q.clone());
    }
    let q = if n == 3 {
        base_exquisite_3()
    } else {
        lift_exquisite(&exquisite_for_arity(n - 1)?)?
    };
    cache.lock().expect("cache lock").insert(n, q.clone());
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::predim;
    use crate::testing::base_structure;

    #[test]
    fn base_type_values() {
        let q = base_exquisite_3();
        assert_eq!(q.t_q(), 9);
        assert_eq!(q.d_q(), 2);
        let m = q.canonical_structure();
        assert_eq!(m.relation_name_set(), base_structure().relation_name_set());
        let a1 = m.id_of("a1").unwrap();
        assert_eq!(m.incidence(a1).len(), 4);
        assert!(q.check_nice());
        let s = Search::default();
        assert!(q.check_intertwined(&s).unwrap().holds);
        assert!(q.check_without_symmetry(&s).unwrap());
        assert!(q.check_exquisite(&s).unwrap());
        let t = q.canonical_tuple(&m);
        assert_eq!(AtomicType::type_of("base3", &m, 3, &t.points).unwrap(), q);
    }

    #[test]
    fn broken_variants_fail_niceness() {
        let q = base_exquisite_3();
        let mut with_head = q.relations().to_vec();
        with_head.push(vec![0, 1, 2]);
        let q2 = AtomicType::new("h", 3, 8, &with_head).unwrap();
        assert!(!q2.check_nice());
        let q3 = AtomicType::new("d", 3, 8, &q.relations()[1..]).unwrap();
        assert_eq!(q3.d_q(), 3);
        assert!(!q3.check_nice());
        let empty = AtomicType::new("e", 3, 8, &[]).unwrap();
        assert!(empty.canonical_structure().relations().is_empty());
        assert!(!empty.check_exquisite(&Search::default()).unwrap());
    }

    #[test]
    fn disjoint_union_is_not_intertwined() {
        let q = base_exquisite_3();
        let shift = |r: &Vec<usize>| r.iter().map(|&i| i + 11).collect::<Vec<_>>();
        let mut rels = q.relations().to_vec();
        rels.extend(q.relations().iter().map(shift));
        let u = AtomicType::new("u", 3, 19, &rels).unwrap();
        let out = u.check_intertwined(&Search::default()).unwrap();
        assert!(!out.holds);
        let w = out.witness.unwrap();
        assert!(w.len() > 3 && w.len() < 22);
    }

    #[test]
    fn symmetric_single_orbit_type_has_symmetry() {
        let q = AtomicType::new("s", 3, 3, &[vec![0, 3, 4]]).unwrap();
        assert!(!q.check_without_symmetry(&Search::default()).unwrap());
    }

    #[test]
    fn lifted_arity_four() {
        let q4 = exquisite_for_arity(4).unwrap();
        assert_eq!(q4.arity(), 4);
        assert_eq!(q4.points(), 16);
        assert_eq!(q4.t_q(), 13);
        assert_eq!(q4.d_q(), 3);
        let m = q4.canonical_structure();
        assert_eq!(predim::delta(&m, &m.universe()), 3);
        let head: Vec<usize> = (0..4).collect();
        assert!(!q4.relations().contains(&head));
    }
}
