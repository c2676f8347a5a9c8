//! Brute-force reference implementations. Deliberately naive: they share no
//! code with the engines they check beyond the structure type itself.

use std::collections::BTreeSet;

use crate::set::{Elem, ElementSet};
use crate::structure::FiniteStructure;

/// Orbits inside `s`, counted by listing every distinct-entry tuple over `s`
/// that is related and grouping the tuples into orbits.
pub fn orbit_count(m: &FiniteStructure, s: &ElementSet) -> usize {
    let n = m.arity();
    let pts: Vec<Elem> = s.iter().collect();
    let mut orbits: BTreeSet<Vec<Elem>> = BTreeSet::new();
    let mut tuple = Vec::with_capacity(n);
    fn rec(
        m: &FiniteStructure,
        pts: &[Elem],
        n: usize,
        tuple: &mut Vec<Elem>,
        out: &mut BTreeSet<Vec<Elem>>,
    ) {
        if tuple.len() == n {
            if m.has_tuple(tuple) {
                let mut key = m.group().orbit(tuple);
                key.sort();
                out.insert(key.swap_remove(0));
            }
            return;
        }
        for &p in pts {
            if !tuple.contains(&p) {
                tuple.push(p);
                rec(m, pts, n, tuple, out);
                tuple.pop();
            }
        }
    }
    rec(m, &pts, n, &mut tuple, &mut orbits);
    orbits.len()
}

pub fn delta(m: &FiniteStructure, s: &[Elem]) -> i64 {
    let r = m
        .relations()
        .iter()
        .filter(|r| r.entries().iter().all(|e| s.contains(e)))
        .count();
    s.len() as i64 - r as i64
}

fn supersets<'a>(m: &'a FiniteStructure, a: &ElementSet) -> impl Iterator<Item = Vec<Elem>> + 'a {
    let free: Vec<Elem> = (0..m.len() as Elem).filter(|e| !a.contains(*e)).collect();
    let k = free.len();
    assert!(k < 26, "oracle is exhaustive");
    let base: Vec<Elem> = a.iter().collect();
    (0u64..(1u64 << k)).map(move |bits| {
        let mut s = base.clone();
        s.extend((0..k).filter(|i| bits >> i & 1 == 1).map(|i| free[i]));
        s
    })
}

pub fn dim(m: &FiniteStructure, a: &ElementSet) -> i64 {
    supersets(m, a)
        .map(|s| delta(m, &s))
        .min()
        .expect("a is its own superset")
}

/// Intersection of all δ-minimizing supersets of `a`.
pub fn ss_closure(m: &FiniteStructure, a: &ElementSet) -> ElementSet {
    let best = dim(m, a);
    let mut inter: Option<ElementSet> = None;
    for s in supersets(m, a) {
        if delta(m, &s) == best {
            let s: ElementSet = s.into_iter().collect();
            inter = Some(match inter {
                None => s,
                Some(i) => i.intersection(&s),
            });
        }
    }
    inter.expect("some minimizer")
}

pub fn is_self_sufficient(m: &FiniteStructure, a: &ElementSet) -> bool {
    let d: Vec<Elem> = a.iter().collect();
    dim(m, a) == delta(m, &d)
}

pub fn d_closure(m: &FiniteStructure, n: &ElementSet) -> ElementSet {
    let d = dim(m, n);
    (0..m.len() as Elem)
        .filter(|&x| n.contains(x) || dim(m, &n.with(x)) == d)
        .collect()
}

pub fn in_class(m: &FiniteStructure) -> bool {
    (0u64..(1u64 << m.len())).all(|bits| {
        let s: Vec<Elem> = (0..m.len() as Elem)
            .filter(|i| bits >> i & 1 == 1)
            .collect();
        delta(m, &s) >= 0
    })
}
