//! Seeded verification suites, one per finite lemma family. Each suite
//! returns the number of instances checked and the first counterexample.

use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use crate::amalgam::{simple_amalgam, verify_simple_amalgam};
use crate::error::{Error, Result};
use crate::exquisite::{
    base_exquisite_3, collisions, collisions_of, decollide_step, exquisite_for_arity, heads,
    AtomicType, Realizations,
};
use crate::format::serialize_structure;
use crate::generic::{audit_genericity, build_generic};
use crate::group::{Permutation, SymmetryGroup};
use crate::matroid::Matroid;
use crate::oracle;
use crate::predim::{delta_table, Search, HARD_BOUND};
use crate::random::{
    random_in_class, random_strong_extension, random_structure, random_subset, rng, Prng,
};
use crate::reducts::{
    benign_pair_exquisite, benign_pair_subgroup, check_reduces_class, exquisite_reduct,
    mixed_amalgam_exquisite, mixed_amalgam_subgroup, phi_reduct, ReductKind,
};
use crate::set::{Elem, ElementSet};
use crate::structure::{free_union_rename, FiniteStructure};
use crate::transfer::{
    closed_relative_delta_mismatch, desymmetrize_checked, isoext_step_g_to_ns, isoext_step_ns_to_g,
    ns_partner, relax_checked, relaxed_symmetrize_checked,
};

/// Suite names in acceptance order.
pub const SUITES: &[&str] = &[
    "base",
    "lift",
    "submodularity",
    "pregeometry",
    "closure",
    "amalgam",
    "transfer",
    "reducts",
    "decollide",
    "mixed",
    "generic",
    "benign",
];

#[derive(Clone, Copy, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Overrides the suite's default instance count.
    pub count: Option<usize>,
    pub search: Search,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 1,
            count: None,
            search: Search::default(),
        }
    }
}

impl SuiteConfig {
    fn count(&self, default: usize) -> usize {
        self.count.unwrap_or(default)
    }
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub name: String,
    pub checked: usize,
    pub counterexample: Option<String>,
    pub elapsed: Duration,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }

    pub fn line(&self) -> String {
        format!(
            "{} {} checked={} time={:.2}s",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.checked,
            self.elapsed.as_secs_f64()
        )
    }
}

type Outcome = std::result::Result<usize, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Ok(Err(format!($($msg)+)));
        }
    };
}

pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Result<SuiteReport> {
    let start = Instant::now();
    let out = match name {
        "base" => base(cfg)?,
        "lift" => lift(cfg)?,
        "submodularity" => submodularity(cfg)?,
        "pregeometry" => pregeometry(cfg)?,
        "closure" => closure(cfg)?,
        "amalgam" => amalgam(cfg)?,
        "transfer" => transfer(cfg)?,
        "reducts" => reducts(cfg)?,
        "decollide" => decollide(cfg)?,
        "mixed" => mixed(cfg)?,
        "generic" => generic(cfg)?,
        "benign" => benign(cfg)?,
        _ => {
            return Err(Error::PreconditionFailed(format!(
                "unknown suite {name}; one of {}",
                SUITES.join(", ")
            )))
        }
    };
    let (checked, counterexample) = match out {
        Ok(n) => (n, None),
        Err(s) => (0, Some(s)),
    };
    Ok(SuiteReport {
        name: name.to_string(),
        checked,
        counterexample,
        elapsed: start.elapsed(),
    })
}

fn show(m: &FiniteStructure) -> String {
    serialize_structure(m)
}

pub(crate) fn sym3() -> Arc<SymmetryGroup> {
    Arc::new(SymmetryGroup::full(3).expect("arity 3"))
}

pub(crate) fn id3() -> Arc<SymmetryGroup> {
    Arc::new(SymmetryGroup::trivial(3).expect("arity 3"))
}

pub(crate) fn swap12() -> Arc<SymmetryGroup> {
    let t = Permutation::from_one_based(&[2, 1, 3]).expect("permutation");
    Arc::new(SymmetryGroup::from_generators(3, &[t]).expect("order 2"))
}

fn groups() -> Vec<Arc<SymmetryGroup>> {
    vec![sym3(), id3(), swap12()]
}

fn base(cfg: &SuiteConfig) -> Result<Outcome> {
    let q = base_exquisite_3();
    let m = q.canonical_structure();
    let t = delta_table(&m);
    ensure!(
        t[t.len() - 1] == 2,
        "delta of the base structure is {}",
        t[t.len() - 1]
    );
    ensure!(
        m.len() == 11 && t.iter().all(|&d| d >= 0),
        "negative predimension in\n{}",
        show(&m)
    );
    ensure!(cfg.search.in_class(&m)?, "base structure outside the class");
    ensure!(
        q.check_exquisite(&Search::new(HARD_BOUND)?)?,
        "base type is not exquisite"
    );
    Ok(Ok(t.len()))
}

fn lift(_cfg: &SuiteConfig) -> Result<Outcome> {
    let search = Search::new(HARD_BOUND)?;
    let q4 = exquisite_for_arity(4)?;
    let c = q4.canonical_structure();
    ensure!(
        c.len() == 16 && c.relations().len() == 13,
        "arity-4 structure has {} points, {} orbits",
        c.len(),
        c.relations().len()
    );
    ensure!(q4.d_q() == 3, "d_q = {}", q4.d_q());
    ensure!(
        q4.check_exquisite(&search)?,
        "arity-4 lift is not exquisite"
    );
    let q5 = exquisite_for_arity(5)?;
    ensure!(
        q5.check_exquisite(&search)?,
        "arity-5 lift is not exquisite"
    );
    Ok(Ok(2))
}

/// Bitset of the relations inside each subset.
fn inside_table(m: &FiniteStructure) -> Vec<u128> {
    let masks = m.relation_masks().expect("small structure");
    assert!(masks.len() <= 128);
    let mut t = vec![0u128; 1 << m.len()];
    for (i, &rm) in masks.iter().enumerate() {
        for (s, slot) in t.iter_mut().enumerate() {
            if s as u32 & rm == rm {
                *slot |= 1 << i;
            }
        }
    }
    t
}

fn submodularity(cfg: &SuiteConfig) -> Result<Outcome> {
    let mut r = rng(cfg.seed);
    let gs = groups();
    let samples: Vec<FiniteStructure> = (0..cfg.count(500))
        .map(|_| {
            let n = r.gen_range(1..=9);
            let rels = r.gen_range(0..=2 * n);
            let g = gs.choose(&mut r).expect("groups");
            random_structure(&mut r, g, n, rels)
        })
        .collect();
    let failures: Vec<Option<String>> = samples
        .par_iter()
        .map(|m| {
            let inside = inside_table(m);
            let size = 1usize << m.len();
            let delta = |s: usize| s.count_ones() as i64 - inside[s].count_ones() as i64;
            for a in 0..size {
                for b in 0..size {
                    let (u, i) = (a | b, a & b);
                    let lhs = delta(u);
                    let rhs = delta(a) + delta(b) - delta(i);
                    let union_ok = inside[u] == inside[a] | inside[b];
                    if lhs > rhs || (lhs == rhs) != union_ok {
                        return Some(format!("A={:#b} B={:#b} in\n{}", a, b, show(m)));
                    }
                }
            }
            None
        })
        .collect();
    if let Some(f) = failures.into_iter().flatten().next() {
        return Ok(Err(f));
    }
    Ok(Ok(samples.len()))
}

fn pregeometry(cfg: &SuiteConfig) -> Result<Outcome> {
    let mut r = rng(cfg.seed);
    let samples: Vec<FiniteStructure> = (0..cfg.count(200))
        .map(|i| {
            let g = if i % 2 == 0 { sym3() } else { id3() };
            let n = r.gen_range(1..=7);
            let rels = r.gen_range(0..=n + 2);
            random_in_class(&mut r, &g, n, rels)
        })
        .collect();
    let results: Vec<Result<Option<String>>> = samples
        .par_iter()
        .map(|m| {
            let mat = Matroid::new(m, cfg.search);
            if let Some(f) = mat.check_rank_axioms()? {
                return Ok(Some(format!(
                    "{} fails on {:?} in\n{}",
                    f.axiom,
                    f.sets,
                    show(m)
                )));
            }
            if let Some(f) = mat.check_closure_axioms()? {
                return Ok(Some(format!(
                    "{} fails on {:?} in\n{}",
                    f.axiom,
                    f.sets,
                    show(m)
                )));
            }
            Ok(None)
        })
        .collect();
    for res in results {
        if let Some(f) = res? {
            return Ok(Err(f));
        }
    }
    Ok(Ok(samples.len()))
}

fn closure(cfg: &SuiteConfig) -> Result<Outcome> {
    let mut r = rng(cfg.seed);
    let gs = groups();
    let mut checked = 0;
    for _ in 0..cfg.count(200) {
        let n = r.gen_range(1..=12);
        let rels = r.gen_range(0..=n + 3);
        let g = gs.choose(&mut r).expect("groups").clone();
        let m = random_in_class(&mut r, &g, n, rels);
        for _ in 0..4 {
            let a = random_subset(&mut r, n);
            let cl = cfg.search.self_sufficient_closure(&m, &a)?.closure;
            let expect = oracle::ss_closure(&m, &a);
            ensure!(
                cl == expect,
                "closure of {:?} is {:?}, oracle {:?} in\n{}",
                a,
                cl,
                expect,
                show(&m)
            );
            let dc = cfg.search.d_closure(&m, &a)?;
            ensure!(
                dc == oracle::d_closure(&m, &a),
                "d-closure of {:?} disagrees with the oracle in\n{}",
                a,
                show(&m)
            );
            ensure!(
                cfg.search.is_d_closed(&m, &dc)?,
                "d-closure {:?} is not d-closed in\n{}",
                dc,
                show(&m)
            );
            ensure!(
                oracle::is_self_sufficient(&m, &dc),
                "d-closed {:?} is not self-sufficient in\n{}",
                dc,
                show(&m)
            );
            checked += 1;
        }
    }
    Ok(Ok(checked))
}

/// Adds `extra` points named `prefix…` and up to `rels` orbits meeting them,
/// keeping the result in the class; the base need not stay strong.
fn random_extension(
    r: &mut Prng,
    base: &FiniteStructure,
    prefix: &str,
    extra: usize,
    rels: usize,
) -> FiniteStructure {
    let search = Search::default();
    let mut m = random_strong_extension(r, base, prefix, extra, 0);
    let old = m.set_of(base.names()).expect("base names");
    let n = m.arity();
    if m.len() < n || extra == 0 {
        return m;
    }
    for _ in 0..rels {
        let mut pool: Vec<Elem> = (0..m.len() as Elem).collect();
        pool.shuffle(r);
        pool.truncate(n);
        if pool.iter().all(|&e| old.contains(e)) || m.has_tuple(&pool) {
            continue;
        }
        let next = m.with_added_tuples([pool]);
        if search.in_class(&next).expect("small") {
            m = next;
        }
    }
    m
}

fn amalgam(cfg: &SuiteConfig) -> Result<Outcome> {
    let mut r = rng(cfg.seed);
    let gs = groups();
    let search = cfg.search;
    let mut strong_cases = 0;
    for _ in 0..cfg.count(200) {
        let g = gs.choose(&mut r).expect("groups").clone();
        let k = r.gen_range(0..5);
        let rels = r.gen_range(0..3);
        let a = random_in_class(&mut r, &g, k, rels);
        let (x1, x2) = (r.gen_range(1..5), r.gen_range(1..5));
        let (r1, r2) = (r.gen_range(0..6), r.gen_range(0..6));
        let b1 = if r.gen_bool(0.5) {
            random_strong_extension(&mut r, &a, "p", x1, r1)
        } else {
            random_extension(&mut r, &a, "p", x1, r1)
        };
        let b2 = if r.gen_bool(0.5) {
            random_strong_extension(&mut r, &a, "q", x2, r2)
        } else {
            random_extension(&mut r, &a, "q", x2, r2)
        };
        let over = a.names().to_vec();
        let d = simple_amalgam(&b1, &b2, &over)?;
        let ex = verify_simple_amalgam(&d, &b1, &b2, &over)?;
        ensure!(
            ex.holds,
            "additivity fails on {:?} in\n{}",
            ex.witness,
            show(&d)
        );
        let sa1 = b1.set_of(&over)?;
        if search.is_self_sufficient(&b1, &sa1)? {
            strong_cases += 1;
            let s2 = d.set_of(b2.names())?;
            ensure!(
                search.is_self_sufficient(&d, &s2)?,
                "B2 is not strong in the join\n{}",
                show(&d)
            );
            ensure!(search.in_class(&d)?, "join outside the class\n{}", show(&d));
            if search.is_self_sufficient(&b2, &b2.set_of(&over)?)? {
                ensure!(
                    search.is_self_sufficient(&d, &d.set_of(&over)?)?,
                    "A is not strong in the join\n{}",
                    show(&d)
                );
            }
        }
    }
    ensure!(strong_cases > 0, "no instance with A strong in B1");
    Ok(Ok(cfg.count(200)))
}

fn transfer(cfg: &SuiteConfig) -> Result<Outcome> {
    let mut r = rng(cfg.seed);
    let search = cfg.search;
    let count = cfg.count(100);
    for _ in 0..count {
        let k = r.gen_range(0..4);
        let rels = r.gen_range(0..2);
        let a = random_in_class(&mut r, &sym3(), k, rels);
        let (extra, rels) = (r.gen_range(1..5), r.gen_range(0..6));
        let b = if r.gen_bool(0.5) {
            random_strong_extension(&mut r, &a, "n", extra, rels)
        } else {
            random_extension(&mut r, &a, "n", extra, rels)
        };
        let a_ns = ns_partner(&a)?;
        let d = match desymmetrize_checked(&search, &b, &a_ns) {
            Ok(t) => t.output,
            Err(Error::PostconditionFailed(m)) => return Ok(Err(format!("{m} in\n{}", show(&b)))),
            Err(e) => return Err(e),
        };
        let sa = b.set_of(a.names())?;
        if search.is_self_sufficient(&b, &sa)? {
            ensure!(
                search.is_self_sufficient(&d, &sa)?,
                "A_ns is not strong in the desymmetrization of\n{}",
                show(&b)
            );
            ensure!(
                search.in_class(&d)?,
                "desymmetrization outside the class\n{}",
                show(&d)
            );
        }
    }
    for _ in 0..count {
        let k = r.gen_range(0..4);
        let rels = r.gen_range(0..2);
        let a_g = random_in_class(&mut r, &sym3(), k, rels);
        let a_ns = ns_partner(&a_g)?;
        let (extra, rels) = (r.gen_range(1..4), r.gen_range(0..4));
        let c = if r.gen_bool(0.5) {
            random_strong_extension(&mut r, &a_ns, "n", extra, rels)
        } else {
            random_extension(&mut r, &a_ns, "n", extra, rels)
        };
        let relaxed = match relax_checked(&search, &c, a_g.names()) {
            Ok(t) => t.output,
            Err(Error::PostconditionFailed(m)) => return Ok(Err(format!("{m} in\n{}", show(&c)))),
            Err(e) => return Err(e),
        };
        let d = match relaxed_symmetrize_checked(&search, &c, &a_g) {
            Ok(t) => t.output,
            Err(Error::PostconditionFailed(m)) => return Ok(Err(format!("{m} in\n{}", show(&c)))),
            Err(e) => return Err(e),
        };
        let w = closed_relative_delta_mismatch(&search, &relaxed, &d, a_g.names())?;
        ensure!(
            w.is_none(),
            "good-set equality fails on {:?} for\n{}",
            w,
            show(&c)
        );
        if search.is_self_sufficient(&c, &c.set_of(a_g.names())?)? {
            ensure!(
                search.is_self_sufficient(&d, &d.set_of(a_g.names())?)?,
                "A is not strong in\n{}",
                show(&d)
            );
        }
    }
    // both isomorphism-extension steps, exhaustive dim comparison
    for i in 0..count {
        let k = r.gen_range(0..4);
        let rels = r.gen_range(0..2);
        let a1 = random_in_class(&mut r, &sym3(), k, rels);
        let a2 = ns_partner(&a1)?;
        let (extra, rels) = (r.gen_range(1..4), r.gen_range(0..5));
        let step = if i % 2 == 0 {
            let c = random_strong_extension(&mut r, &a1, "c", extra, rels);
            isoext_step_g_to_ns(&search, &a1, &a2, &c)
        } else {
            let c = random_strong_extension(&mut r, &a2, "c", extra, rels);
            isoext_step_ns_to_g(&search, &a2, &a1, &c)
        };
        let step = match step {
            Ok(s) => s,
            Err(e @ Error::DimMismatch { .. }) | Err(e @ Error::PostconditionFailed(_)) => {
                return Ok(Err(e.to_string()))
            }
            Err(e) => return Err(e),
        };
        ensure!(
            step.b1.len() <= 14,
            "extension too large for the exhaustive sweep"
        );
        for s in 0u32..1 << step.b1.len() {
            let x = ElementSet::from_mask(s);
            ensure!(
                oracle::dim(&step.b1, &x) == oracle::dim(&step.b2, &x),
                "dim differs on {:?} between\n{}and\n{}",
                x,
                show(&step.b1),
                show(&step.b2)
            );
        }
    }
    Ok(Ok(3 * count))
}

/// Glues two copies of the canonical structure of `q` along the points of
/// one orbit in each, identified in a random order.
pub fn glued_copies(r: &mut Prng, q: &AtomicType) -> Result<FiniteStructure> {
    let c = q.canonical_structure();
    let rels = c.named_relations();
    let r1 = rels.choose(r).expect("relations").clone();
    let mut r2 = rels.choose(r).expect("relations").clone();
    r2.shuffle(r);
    let copy: Vec<String> = c
        .names()
        .iter()
        .map(|x| match r2.iter().position(|y| y == x) {
            Some(i) => r1[i].clone(),
            None => format!("{x}'"),
        })
        .collect();
    let d = c.rename(&copy)?;
    simple_amalgam(&c, &d, &r1)
}

/// Members of the symmetric class exercising the exquisite reduct: the
/// canonical structure, strong extensions of it, glued copies, free joins
/// and small random members.
pub fn constructed_sym(r: &mut Prng, q: &AtomicType, i: usize) -> Result<FiniteStructure> {
    let c = q.canonical_structure();
    Ok(match i % 5 {
        0 => c,
        1 => {
            let (extra, rels) = (r.gen_range(1..4), r.gen_range(1..5));
            random_strong_extension(r, &c, "n", extra, rels)
        }
        2 => glued_copies(r, q)?,
        3 => {
            let parts = free_union_rename(&[c.clone(), c.renamed("d")], &[])?;
            simple_amalgam(&parts[0], &parts[1], &[])?
        }
        _ => {
            let n = r.gen_range(3..9);
            let rels = r.gen_range(0..n);
            random_in_class(r, &sym3(), n, rels)
        }
    })
}

fn reducts(cfg: &SuiteConfig) -> Result<Outcome> {
    let mut r = rng(cfg.seed);
    let search = cfg.search;
    let count = cfg.count(200);
    for h in [id3(), swap12()] {
        let kind = ReductKind::Subgroup(sym3());
        for _ in 0..count {
            let n = r.gen_range(3..10);
            let rels = r.gen_range(0..2 * n);
            let a = random_in_class(&mut r, &h, n, rels);
            ensure!(
                check_reduces_class(&search, &a, &kind)?,
                "reduct leaves the class\n{}",
                show(&a)
            );
        }
    }
    let q = base_exquisite_3();
    let kind = ReductKind::Exquisite(q.clone());
    let mut glued_collided = 0;
    for i in 0..count / 4 {
        let a = constructed_sym(&mut r, &q, i)?;
        if i % 5 == 2 && collisions(&a, &q)?.c > 0 {
            glued_collided += 1;
        }
        ensure!(
            check_reduces_class(&search, &a, &kind)?,
            "exquisite reduct leaves the class\n{}",
            show(&a)
        );
    }
    ensure!(
        count < 20 || glued_collided > 0,
        "no glued instance had a collision"
    );
    Ok(Ok(2 * count + count / 4))
}

fn decollide(cfg: &SuiteConfig) -> Result<Outcome> {
    let mut r = rng(cfg.seed);
    let search = cfg.search;
    let q = base_exquisite_3();
    let want = cfg.count(50);
    let mut done = 0;
    let mut attempts = 0;
    while done < want {
        attempts += 1;
        ensure!(
            attempts <= 20 * want + 20,
            "too few collided instances after {attempts} attempts"
        );
        let a = glued_copies(&mut r, &q)?;
        if !search.in_class(&a)? || collisions(&a, &q)?.c == 0 {
            continue;
        }
        let mut cur = a;
        let mut real = Realizations::compute(&cur, &q)?;
        loop {
            let before = collisions_of(&real);
            if before.c == 0 {
                break;
            }
            let step = decollide_step(&cur, &q)?;
            let next = step.structure;
            ensure!(
                search.in_class(&next)?,
                "decollide step leaves the class\n{}",
                show(&cur)
            );
            let next_real = Realizations::compute(&next, &q)?;
            let after = collisions_of(&next_real);
            ensure!(
                after.w < before.w,
                "w did not drop ({} to {}) on\n{}",
                before.w,
                after.w,
                show(&cur)
            );
            let named = |m: &FiniteStructure, rr: &Realizations| -> Vec<Vec<String>> {
                heads(rr)
                    .iter()
                    .map(|h| h.iter().map(|&e| m.name_of(e).to_string()).collect())
                    .collect()
            };
            let (h0, h1) = (named(&cur, &real), named(&next, &next_real));
            ensure!(
                h0.iter().all(|h| h1.contains(h)),
                "a head lost its witness on\n{}",
                show(&cur)
            );
            cur = next;
            real = next_real;
        }
        done += 1;
    }
    Ok(Ok(done))
}

fn mixed(cfg: &SuiteConfig) -> Result<Outcome> {
    let mut r = rng(cfg.seed);
    let search = cfg.search;
    let count = cfg.count(100);
    for i in 0..count {
        let h = if i % 2 == 0 { id3() } else { swap12() };
        let n = r.gen_range(3..7);
        let rels = r.gen_range(0..n);
        let a = random_in_class(&mut r, &h, n, rels);
        let ra = phi_reduct(&a, &sym3())?;
        let (extra, rels) = (r.gen_range(0..4), r.gen_range(0..6));
        let b = random_strong_extension(&mut r, &ra, "n", extra, rels);
        let c = match mixed_amalgam_subgroup(&search, &a, &b) {
            Ok(c) => c,
            Err(Error::PostconditionFailed(m)) => return Ok(Err(format!("{m} for\n{}", show(&b)))),
            Err(e) => return Err(e),
        };
        let sa = c.set_of(a.names())?;
        ensure!(
            oracle::is_self_sufficient(&c, &sa),
            "A is not strong in\n{}",
            show(&c)
        );
        ensure!(
            oracle::in_class(&c),
            "mixed amalgam outside the class\n{}",
            show(&c)
        );
        ensure!(
            phi_reduct(&c, &sym3())?.relation_name_set() == b.relation_name_set(),
            "reduct differs from B for\n{}",
            show(&c)
        );
    }
    let q = base_exquisite_3();
    for i in 0..count {
        let a = match i % 3 {
            0 => q.canonical_structure(),
            1 => {
                let n = r.gen_range(3..8);
                let rels = r.gen_range(0..n);
                random_in_class(&mut r, &sym3(), n, rels)
            }
            _ => {
                let (extra, rels) = (r.gen_range(1..3), r.gen_range(1..4));
                random_strong_extension(&mut r, &q.canonical_structure(), "n", extra, rels)
            }
        };
        let fa = exquisite_reduct(&a, &q)?;
        let (extra, rels) = (r.gen_range(0..3), r.gen_range(0..3));
        let b = random_strong_extension(&mut r, &fa, "p", extra, rels);
        let c = match mixed_amalgam_exquisite(&search, &a, &b, &q) {
            Ok(c) => c,
            Err(Error::PostconditionFailed(m)) => return Ok(Err(format!("{m} for\n{}", show(&b)))),
            Err(e) => return Err(e),
        };
        ensure!(
            search.is_self_sufficient(&c, &c.set_of(a.names())?)?,
            "A is not strong in\n{}",
            show(&c)
        );
        ensure!(
            search.in_class(&c)?,
            "mixed amalgam outside the class\n{}",
            show(&c)
        );
        let fc = exquisite_reduct(&c, &q)?;
        ensure!(
            fc.relation_name_set() == b.relation_name_set(),
            "reduct of C differs from B for\n{}",
            show(&c)
        );
        ensure!(
            search.is_self_sufficient(&fc, &fc.set_of(b.names())?)?,
            "B is not strong in the reduct of\n{}",
            show(&c)
        );
    }
    Ok(Ok(2 * count))
}

fn generic(cfg: &SuiteConfig) -> Result<Outcome> {
    let search = cfg.search;
    let steps = cfg.count(50);
    let st = build_generic(&search, sym3(), 4, steps, cfg.seed)?;
    if let Some(i) = st.verify_chain(&search)? {
        return Ok(Err(format!(
            "chain link {i} is not strong\n{}",
            show(&st.chain[i + 1])
        )));
    }
    let report = audit_genericity(&search, &st, 2, 3)?;
    ensure!(
        report.scheduled > 0,
        "no scheduled pair within the audit bounds"
    );
    ensure!(
        report.scheduled == report.scheduled_realized,
        "{} of {} scheduled pairs realized\n{}",
        report.scheduled_realized,
        report.scheduled,
        report.render()
    );
    let again = build_generic(&search, sym3(), 4, steps, cfg.seed)?;
    ensure!(again.current() == st.current(), "rebuild differs");
    ensure!(
        audit_genericity(&search, &again, 2, 3)?.render() == report.render(),
        "audit report differs on rerun"
    );
    Ok(Ok(report.scheduled))
}

fn benign(cfg: &SuiteConfig) -> Result<Outcome> {
    let mut r = rng(cfg.seed);
    let search = cfg.search;
    let count = cfg.count(50);
    for i in 0..count {
        let h = if i % 2 == 0 { id3() } else { swap12() };
        let n = r.gen_range(0..9);
        let rels = r.gen_range(0..n + 1);
        let f = random_in_class(&mut r, &h, n, rels);
        let p = benign_pair_subgroup(&search, &f, &sym3())?;
        ensure!(
            p.certified(),
            "benign pair not certified over\n{}",
            show(&f)
        );
        ensure!(
            crate::iso::find_isomorphism_over_names(&p.a, &p.b, f.names()).is_none(),
            "A and B isomorphic over\n{}",
            show(&f)
        );
    }
    let q = base_exquisite_3();
    for i in 0..count {
        let f = constructed_sym(&mut r, &q, i)?;
        let p = benign_pair_exquisite(&search, &f, &q)?;
        ensure!(
            p.certified(),
            "benign pair not certified over\n{}",
            show(&f)
        );
    }
    Ok(Ok(2 * count))
}
