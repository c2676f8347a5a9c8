//! Seeded generators for test corpora. All randomness in the crate goes
//! through [`rng`]: ChaCha8 seeded by `seed_from_u64`, which is portable and
//! stable across platforms.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::group::SymmetryGroup;
use crate::predim::Search;
use crate::set::{Elem, ElementSet};
use crate::structure::FiniteStructure;

pub type Prng = ChaCha8Rng;

pub fn rng(seed: u64) -> Prng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `prefix` followed by a zero-padded index, so string order is numeric order.
pub fn element_names(prefix: &str, n: usize) -> Vec<String> {
    let width = n.saturating_sub(1).to_string().len().max(2);
    (0..n).map(|i| format!("{prefix}{i:0width$}")).collect()
}

fn random_tuple<R: Rng>(rng: &mut R, n: usize, arity: usize) -> Vec<Elem> {
    let mut pool: Vec<Elem> = (0..n as Elem).collect();
    pool.partial_shuffle(rng, arity);
    pool.truncate(arity);
    pool
}

/// `n` elements and up to `rels` random orbits (duplicates merge).
pub fn random_structure<R: Rng>(
    rng: &mut R,
    group: &Arc<SymmetryGroup>,
    n: usize,
    rels: usize,
) -> FiniteStructure {
    let arity = group.arity();
    let tuples = if n < arity {
        Vec::new()
    } else {
        (0..rels).map(|_| random_tuple(rng, n, arity)).collect()
    };
    FiniteStructure::from_ids("random", group.clone(), element_names("e", n), tuples)
}

/// Like [`random_structure`] but keeps only orbits that leave the structure
/// in the class.
pub fn random_in_class<R: Rng>(
    rng: &mut R,
    group: &Arc<SymmetryGroup>,
    n: usize,
    rels: usize,
) -> FiniteStructure {
    let arity = group.arity();
    let mut m =
        FiniteStructure::from_ids("random", group.clone(), element_names("e", n), Vec::new());
    if n < arity {
        return m;
    }
    let search = Search::default();
    for _ in 0..rels {
        let t = random_tuple(rng, n, arity);
        if m.has_tuple(&t) {
            continue;
        }
        let next = m.with_added_tuples([t]);
        if search.in_class(&next).expect("exact dim") {
            m = next;
        }
    }
    m
}

/// Adds `extra` fresh elements (named `prefix…`) and up to `rels` orbits
/// meeting them, keeping only orbits after which `base` stays strong and the
/// result stays in the class.
pub fn random_strong_extension<R: Rng>(
    rng: &mut R,
    base: &FiniteStructure,
    prefix: &str,
    extra: usize,
    rels: usize,
) -> FiniteStructure {
    let names: Vec<String> = base
        .names()
        .iter()
        .cloned()
        .chain(element_names(prefix, extra))
        .collect();
    let rel_names = base.named_relations();
    let mut m =
        FiniteStructure::from_named(base.name(), base.group_arc().clone(), names, rel_names)
            .expect("fresh names are distinct");
    let arity = base.arity();
    if m.len() < arity || extra == 0 {
        return m;
    }
    let old = m.set_of(base.names()).expect("base names present");
    let new: Vec<Elem> = (0..m.len() as Elem).filter(|e| !old.contains(*e)).collect();
    let search = Search::default();
    for _ in 0..rels {
        let mut t = random_tuple(rng, m.len(), arity);
        if t.iter().all(|e| old.contains(*e)) {
            t[0] = *new.choose(rng).expect("extra > 0");
            if t[1..].contains(&t[0]) {
                continue;
            }
        }
        if m.has_tuple(&t) {
            continue;
        }
        let next = m.with_added_tuples([t]);
        if search.in_class(&next).expect("exact")
            && search.is_self_sufficient(&next, &old).expect("exact")
        {
            m = next;
        }
    }
    m
}

/// A uniformly random subset of `0..n`.
pub fn random_subset<R: Rng>(rng: &mut R, n: usize) -> ElementSet {
    (0..n as Elem).filter(|_| rng.gen_bool(0.5)).collect()
}
