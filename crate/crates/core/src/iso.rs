//! Isomorphism and automorphism search for finite structures.
//!
//! Colour refinement runs on both structures at once so colours are
//! comparable; tuple positions are ignored, which keeps the invariant valid
//! for every group. The backtracking search checks relations in both
//! directions, so every map it returns is an induced isomorphism.

use std::collections::{BTreeSet, HashMap};

use crate::set::Elem;
use crate::structure::FiniteStructure;

fn refine(parts: &[&FiniteStructure], initial: &[Vec<u64>]) -> Vec<Vec<u32>> {
    let mut colors: Vec<Vec<u32>> = rank_all(
        initial
            .iter()
            .map(|v| v.iter().map(|&c| vec![c]).collect())
            .collect(),
    );
    let mut classes = count_classes(&colors);
    loop {
        let sigs: Vec<Vec<Vec<u64>>> = parts
            .iter()
            .zip(&colors)
            .map(|(m, col)| {
                (0..m.len() as Elem)
                    .map(|e| {
                        let mut nbr: Vec<Vec<u32>> = m
                            .incidence(e)
                            .iter()
                            .map(|&ri| {
                                let mut c: Vec<u32> = m.relations()[ri as usize]
                                    .entries()
                                    .iter()
                                    .filter(|&&x| x != e)
                                    .map(|&x| col[x as usize])
                                    .collect();
                                c.sort_unstable();
                                c
                            })
                            .collect();
                        nbr.sort();
                        let mut sig = vec![col[e as usize] as u64, u64::MAX];
                        for c in nbr {
                            sig.extend(c.into_iter().map(u64::from));
                            sig.push(u64::MAX - 1);
                        }
                        sig
                    })
                    .collect()
            })
            .collect();
        let next = rank_all(sigs);
        let n = count_classes(&next);
        colors = next;
        if n == classes {
            return colors;
        }
        classes = n;
    }
}

fn rank_all(sigs: Vec<Vec<Vec<u64>>>) -> Vec<Vec<u32>> {
    let all: BTreeSet<&Vec<u64>> = sigs.iter().flatten().collect();
    let rank: HashMap<&Vec<u64>, u32> = all
        .into_iter()
        .enumerate()
        .map(|(i, s)| (s, i as u32))
        .collect();
    sigs.iter()
        .map(|v| v.iter().map(|s| rank[s]).collect())
        .collect()
}

fn count_classes(colors: &[Vec<u32>]) -> usize {
    colors.iter().flatten().collect::<BTreeSet<_>>().len()
}

struct Matcher<'a> {
    a: &'a FiniteStructure,
    b: &'a FiniteStructure,
    ca: &'a [u32],
    cb: &'a [u32],
    fwd: Vec<Option<Elem>>,
    back: Vec<Option<Elem>>,
    order: Vec<Elem>,
}

impl Matcher<'_> {
    fn consistent(&self, x: Elem, y: Elem) -> bool {
        for &ri in self.a.incidence(x) {
            let r = self.a.relations()[ri as usize].entries();
            let img: Option<Vec<Elem>> = r.iter().map(|&e| self.fwd[e as usize]).collect();
            if let Some(img) = img {
                if !self.b.has_tuple(&img) {
                    return false;
                }
            }
        }
        for &ri in self.b.incidence(y) {
            let r = self.b.relations()[ri as usize].entries();
            let pre: Option<Vec<Elem>> = r.iter().map(|&e| self.back[e as usize]).collect();
            if let Some(pre) = pre {
                if !self.a.has_tuple(&pre) {
                    return false;
                }
            }
        }
        true
    }

    fn search(&mut self, depth: usize, accept: &mut dyn FnMut(&[Option<Elem>]) -> bool) -> bool {
        if depth == self.order.len() {
            return accept(&self.fwd);
        }
        let x = self.order[depth];
        if self.fwd[x as usize].is_some() {
            return self.search(depth + 1, accept);
        }
        for y in 0..self.b.len() as Elem {
            if self.back[y as usize].is_some() || self.cb[y as usize] != self.ca[x as usize] {
                continue;
            }
            self.fwd[x as usize] = Some(y);
            self.back[y as usize] = Some(x);
            if self.consistent(x, y) && self.search(depth + 1, accept) {
                return true;
            }
            self.fwd[x as usize] = None;
            self.back[y as usize] = None;
        }
        false
    }
}

/// Search order: rarest colours first, then neighbours of placed points.
fn search_order(a: &FiniteStructure, ca: &[u32]) -> Vec<Elem> {
    let mut size: HashMap<u32, usize> = HashMap::new();
    for &c in ca {
        *size.entry(c).or_default() += 1;
    }
    let n = a.len();
    let mut placed = vec![false; n];
    let mut touch = vec![0usize; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let next = (0..n)
            .filter(|&e| !placed[e])
            .min_by_key(|&e| {
                (
                    std::cmp::Reverse(touch[e].min(1)),
                    size[&ca[e]],
                    std::cmp::Reverse(touch[e]),
                    e,
                )
            })
            .expect("unplaced point");
        placed[next] = true;
        order.push(next as Elem);
        for &ri in a.incidence(next as Elem) {
            for &x in a.relations()[ri as usize].entries() {
                touch[x as usize] += 1;
            }
        }
    }
    order
}

/// Runs the search with `pinned` pairs fixed; `accept` may reject complete
/// maps to continue the search.
fn run(
    a: &FiniteStructure,
    b: &FiniteStructure,
    pinned: &[(Elem, Elem)],
    accept: &mut dyn FnMut(&[Option<Elem>]) -> bool,
) -> Option<Vec<Elem>> {
    if a.len() != b.len() || a.relations().len() != b.relations().len() || a.group() != b.group() {
        return None;
    }
    let mut ia = vec![0u64; a.len()];
    let mut ib = vec![0u64; b.len()];
    for (i, &(x, y)) in pinned.iter().enumerate() {
        ia[x as usize] = i as u64 + 1;
        ib[y as usize] = i as u64 + 1;
    }
    let colors = refine(&[a, b], &[ia, ib]);
    let (ca, cb) = (&colors[0], &colors[1]);
    let mut ha: Vec<u32> = ca.clone();
    let mut hb: Vec<u32> = cb.clone();
    ha.sort_unstable();
    hb.sort_unstable();
    if ha != hb {
        return None;
    }
    let mut m = Matcher {
        a,
        b,
        ca,
        cb,
        fwd: vec![None; a.len()],
        back: vec![None; b.len()],
        order: search_order(a, ca),
    };
    for &(x, y) in pinned {
        if m.fwd[x as usize].is_some_and(|z| z != y) || m.back[y as usize].is_some_and(|z| z != x) {
            return None;
        }
        m.fwd[x as usize] = Some(y);
        m.back[y as usize] = Some(x);
    }
    for &(x, y) in pinned {
        if !m.consistent(x, y) {
            return None;
        }
    }
    let mut found = None;
    m.search(0, &mut |f| {
        if accept(f) {
            found = Some(f.iter().map(|x| x.expect("complete")).collect());
            true
        } else {
            false
        }
    });
    found
}

/// An induced isomorphism `a → b` (as an id map), if one exists.
pub fn find_isomorphism(a: &FiniteStructure, b: &FiniteStructure) -> Option<Vec<Elem>> {
    run(a, b, &[], &mut |_| true)
}

/// An isomorphism sending each `x` to `y` for the pinned pairs `(x, y)`.
pub fn find_isomorphism_pinned(
    a: &FiniteStructure,
    b: &FiniteStructure,
    pinned: &[(Elem, Elem)],
) -> Option<Vec<Elem>> {
    run(a, b, pinned, &mut |_| true)
}

/// Isomorphism fixing every element whose name occurs in both structures.
pub fn find_isomorphism_over_names(
    a: &FiniteStructure,
    b: &FiniteStructure,
    fixed: &[String],
) -> Option<Vec<Elem>> {
    let pinned: Option<Vec<(Elem, Elem)>> = fixed
        .iter()
        .map(|n| Some((a.id_of(n)?, b.id_of(n)?)))
        .collect();
    find_isomorphism_pinned(a, b, &pinned?)
}

/// A non-identity automorphism, if any exists.
pub fn nontrivial_automorphism(a: &FiniteStructure) -> Option<Vec<Elem>> {
    let colors = refine(&[a], &[vec![0; a.len()]]);
    let c = &colors[0];
    for x in 0..a.len() as Elem {
        for y in 0..a.len() as Elem {
            if x != y && c[x as usize] == c[y as usize] {
                if let Some(f) = find_isomorphism_pinned(a, a, &[(x, y)]) {
                    return Some(f);
                }
            }
        }
    }
    None
}

pub fn is_rigid(a: &FiniteStructure) -> bool {
    nontrivial_automorphism(a).is_none()
}

/// Brute-force canonical key of `m` with the points of `first` numbered
/// before the rest: the least sorted relation list over all such
/// relabelings. Intended for structures of at most 8 points.
pub fn canonical_key(m: &FiniteStructure, first: &[Elem]) -> Vec<Vec<Elem>> {
    assert!(m.len() <= 8, "brute-force canonical form");
    let rest: Vec<Elem> = (0..m.len() as Elem)
        .filter(|e| !first.contains(e))
        .collect();
    let mut best: Option<Vec<Vec<Elem>>> = None;
    let mut pf = first.to_vec();
    let mut pr = rest.clone();
    pf.sort_unstable();
    pr.sort_unstable();
    let mut label = vec![0 as Elem; m.len()];
    loop {
        loop {
            for (i, &e) in pf.iter().chain(pr.iter()).enumerate() {
                label[e as usize] = i as Elem;
            }
            let mut rels: Vec<Vec<Elem>> = m
                .relations()
                .iter()
                .map(|r| {
                    m.group().canonicalize(
                        &r.entries()
                            .iter()
                            .map(|&e| label[e as usize])
                            .collect::<Vec<_>>(),
                    )
                })
                .collect();
            rels.sort();
            if best.as_ref().is_none_or(|b| rels < *b) {
                best = Some(rels);
            }
            if !next_perm(&mut pr) {
                break;
            }
        }
        if !next_perm(&mut pf) {
            break;
        }
    }
    best.unwrap_or_default()
}

fn next_perm(v: &mut [Elem]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let Some(i) = (1..n).rev().find(|&i| v[i - 1] < v[i]) else {
        v.reverse();
        return false;
    };
    let j = (i..n)
        .rev()
        .find(|&j| v[j] > v[i - 1])
        .expect("successor exists");
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}
