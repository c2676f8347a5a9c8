//! Finite approximants of the generic structure: a catalog of strong
//! extension types, a seeded chain builder realizing them by free joins,
//! and an audit of the extension property on the result.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use crate::amalgam::simple_amalgam;
use crate::error::{Error, Result};
use crate::group::SymmetryGroup;
use crate::iso::canonical_key;
use crate::predim::{for_each_combination, Search};
use crate::random::{rng, Prng};
use crate::set::{Elem, ElementSet};
use crate::structure::FiniteStructure;

/// Largest template size; bounded by the brute-force canonical form.
pub const MAX_TEMPLATE: usize = 8;
/// Cap on relation subsets examined while enumerating the catalog.
pub const CATALOG_BUDGET: usize = 1 << 22;

/// A strong pair `A ≤ B`; the elements of `B` are `p0, p1, …` with `A`
/// first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub base_len: usize,
    pub ext: FiniteStructure,
}

impl CatalogEntry {
    pub fn base_names(&self) -> &[String] {
        &self.ext.names()[..self.base_len]
    }

    pub fn base(&self) -> FiniteStructure {
        let s: ElementSet = (0..self.base_len as Elem).collect();
        self.ext
            .induced_substructure(&s)
            .expect("prefix of the universe")
    }

    pub fn len(&self) -> usize {
        self.ext.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ext.is_empty()
    }
}

/// Every distinct orbit of `group` on `0..m`.
fn all_orbits(group: &SymmetryGroup, m: usize) -> Vec<Vec<Elem>> {
    let n = group.arity();
    let mut out = BTreeSet::new();
    if m >= n {
        let mut t = Vec::with_capacity(n);
        fn rec(
            t: &mut Vec<Elem>,
            m: usize,
            n: usize,
            g: &SymmetryGroup,
            out: &mut BTreeSet<Vec<Elem>>,
        ) {
            if t.len() == n {
                out.insert(g.canonicalize(t));
                return;
            }
            for e in 0..m as Elem {
                if !t.contains(&e) {
                    t.push(e);
                    rec(t, m, n, g, out);
                    t.pop();
                }
            }
        }
        rec(&mut t, m, n, group, &mut out);
    }
    out.into_iter().collect()
}

fn point_names(m: usize) -> Vec<String> {
    (0..m).map(|i| format!("p{i}")).collect()
}

/// All isomorphism types of pairs `A ≤ B` with `B` in the class and
/// `|B| ≤ size_bound`, sorted by `(|B|, |A|, canonical form)`.
pub fn catalog(group: &Arc<SymmetryGroup>, size_bound: usize) -> Result<Vec<CatalogEntry>> {
    if size_bound > MAX_TEMPLATE {
        return Err(Error::SearchBoundExceeded {
            size: size_bound,
            bound: MAX_TEMPLATE,
        });
    }
    let search = Search::default();
    let mut pairs: BTreeMap<(usize, usize, Vec<Vec<Elem>>), CatalogEntry> = BTreeMap::new();
    let mut budget = CATALOG_BUDGET;
    for m in 0..=size_bound {
        let orbits = all_orbits(group, m);
        let names = point_names(m);
        let mut seen = BTreeSet::new();
        // a member of the class has at most |B| orbits
        for k in 0..=orbits.len().min(m) {
            let mut err = None;
            for_each_combination(orbits.len(), k, &mut |idx| {
                if budget == 0 {
                    err = Some(Error::SearchBoundExceeded {
                        size: CATALOG_BUDGET + 1,
                        bound: CATALOG_BUDGET,
                    });
                    return false;
                }
                budget -= 1;
                let b = FiniteStructure::from_ids(
                    "t",
                    group.clone(),
                    names.clone(),
                    idx.iter().map(|&i| orbits[i].clone()).collect(),
                );
                if !search.in_class(&b).expect("small") || !seen.insert(canonical_key(&b, &[])) {
                    return true;
                }
                for mask in 0u32..1 << m {
                    let a = ElementSet::from_mask(mask);
                    if !search.is_self_sufficient(&b, &a).expect("small") {
                        continue;
                    }
                    let key = (m, a.len(), canonical_key(&b, a.as_slice()));
                    if pairs.contains_key(&key) {
                        continue;
                    }
                    let order: Vec<Elem> =
                        a.iter().chain(b.universe().difference(&a).iter()).collect();
                    let mut new_names = vec![String::new(); m];
                    for (i, &e) in order.iter().enumerate() {
                        new_names[e as usize] = names[i].clone();
                    }
                    let ext = b.rename(&new_names).expect("bijective").renamed(&format!(
                        "t{}_{}",
                        m,
                        a.len()
                    ));
                    pairs.insert(
                        key,
                        CatalogEntry {
                            base_len: a.len(),
                            ext,
                        },
                    );
                }
                true
            });
            if let Some(e) = err {
                return Err(e);
            }
        }
    }
    Ok(pairs.into_values().collect())
}

/// A map `C → M` extending `fixed` (pairs of ids) whose image is an
/// induced copy of `C` and self-sufficient in `M`. `offset` rotates the
/// candidate order for the unconstrained points.
pub fn find_strong_embedding(
    search: &Search,
    m: &FiniteStructure,
    c: &FiniteStructure,
    fixed: &[(Elem, Elem)],
    offset: usize,
) -> Result<Option<Vec<Elem>>> {
    if c.len() > m.len() || c.arity() != m.arity() {
        return Ok(None);
    }
    let mut img: Vec<Option<Elem>> = vec![None; c.len()];
    let mut used = vec![false; m.len()];
    for &(x, y) in fixed {
        if used[y as usize] || img[x as usize].is_some() {
            return Ok(None);
        }
        img[x as usize] = Some(y);
        used[y as usize] = true;
    }
    let placed: ElementSet = fixed.iter().map(|&(x, _)| x).collect();
    let image: ElementSet = fixed.iter().map(|&(_, y)| y).collect();
    if m.count_inside(&image) != c.count_inside(&placed)
        || !c.relations_inside(&placed).iter().all(|&ri| {
            let t: Vec<Elem> = c.relations()[ri]
                .entries()
                .iter()
                .map(|&e| img[e as usize].expect("placed"))
                .collect();
            m.has_tuple(&t)
        })
    {
        return Ok(None);
    }
    // order the free points so each is related to earlier ones where possible
    let mut order = Vec::new();
    let mut done = placed.clone();
    while done.len() < c.len() {
        let links = |v: Elem| {
            c.incidence(v)
                .iter()
                .filter(|&&ri| {
                    c.relations()[ri as usize]
                        .entries()
                        .iter()
                        .any(|&u| u != v && done.contains(u))
                })
                .count()
        };
        let v = (0..c.len() as Elem)
            .filter(|&v| !done.contains(v))
            .max_by_key(|&v| (links(v), std::cmp::Reverse(v)))
            .expect("free point");
        order.push(v);
        done.insert(v);
    }
    let mut st = Embed {
        search,
        m,
        c,
        order: &order,
        img,
        used,
        offset,
        result: None,
        error: None,
    };
    st.go(0);
    if let Some(e) = st.error {
        return Err(e);
    }
    Ok(st.result)
}

struct Embed<'a> {
    search: &'a Search,
    m: &'a FiniteStructure,
    c: &'a FiniteStructure,
    order: &'a [Elem],
    img: Vec<Option<Elem>>,
    used: Vec<bool>,
    offset: usize,
    result: Option<Vec<Elem>>,
    error: Option<Error>,
}

impl Embed<'_> {
    /// Relations of `C` through `v` among placed points all appear in `M`,
    /// and `M` has no extra relation through `img(v)` among the image.
    fn consistent(&self, v: Elem) -> bool {
        let mut within_c = 0;
        for &ri in self.c.incidence(v) {
            let r = self.c.relations()[ri as usize].entries();
            if r.iter().all(|&u| self.img[u as usize].is_some()) {
                within_c += 1;
                let t: Vec<Elem> = r
                    .iter()
                    .map(|&u| self.img[u as usize].expect("placed"))
                    .collect();
                if !self.m.has_tuple(&t) {
                    return false;
                }
            }
        }
        let y = self.img[v as usize].expect("placed");
        let within_m = self
            .m
            .incidence(y)
            .iter()
            .filter(|&&ri| {
                self.m.relations()[ri as usize]
                    .entries()
                    .iter()
                    .all(|&e| self.used[e as usize])
            })
            .count();
        within_c == within_m
    }

    fn go(&mut self, i: usize) -> bool {
        if i == self.order.len() {
            let image: ElementSet = self.img.iter().map(|x| x.expect("complete")).collect();
            return match self.search.is_self_sufficient(self.m, &image) {
                Ok(true) => {
                    self.result = Some(self.img.iter().map(|x| x.expect("complete")).collect());
                    true
                }
                Ok(false) => false,
                Err(e) => {
                    self.error = Some(e);
                    true
                }
            };
        }
        let v = self.order[i];
        let anchor = self.c.incidence(v).iter().find_map(|&ri| {
            self.c.relations()[ri as usize]
                .entries()
                .iter()
                .find_map(|&u| if u != v { self.img[u as usize] } else { None })
        });
        let cands: Vec<Elem> = match anchor {
            Some(y) => {
                let mut c: Vec<Elem> = self
                    .m
                    .incidence(y)
                    .iter()
                    .flat_map(|&ri| self.m.relations()[ri as usize].entries().iter().copied())
                    .collect();
                c.sort_unstable();
                c.dedup();
                c
            }
            None => {
                let n = self.m.len();
                (0..n).map(|k| ((k + self.offset) % n) as Elem).collect()
            }
        };
        let need = self.c.incidence(v).len();
        for y in cands {
            if self.used[y as usize] || self.m.incidence(y).len() < need {
                continue;
            }
            self.img[v as usize] = Some(y);
            self.used[y as usize] = true;
            if self.consistent(v) && self.go(i + 1) {
                return true;
            }
            self.used[y as usize] = false;
            self.img[v as usize] = None;
        }
        false
    }
}

/// A strong embedding of `c` into `m` that is the identity on the elements
/// named in `a`, which must be strong in `m` and strong in `c` with the same
/// induced structure in both. The map is returned as `C`-id to `M`-id.
pub fn extension_property_test(
    search: &Search,
    m: &FiniteStructure,
    a: &[String],
    c: &FiniteStructure,
) -> Result<Option<Vec<Elem>>> {
    let am = m.set_of(a)?;
    if !search.is_self_sufficient(m, &am)? {
        return Err(Error::NotStrongBase);
    }
    let ac = c.set_of(a)?;
    if m.induced_substructure(&am)?.relation_name_set()
        != c.induced_substructure(&ac)?.relation_name_set()
    {
        return Err(Error::SharedMismatch(format!(
            "{} and {} differ on the base",
            m.name(),
            c.name()
        )));
    }
    if !search.is_self_sufficient(c, &ac)? {
        return Err(Error::PreconditionFailed(format!(
            "base is not strong in {}",
            c.name()
        )));
    }
    let fixed: Vec<(Elem, Elem)> = a
        .iter()
        .map(|x| (c.id_of(x).expect("checked"), m.id_of(x).expect("checked")))
        .collect();
    find_strong_embedding(search, m, c, &fixed, 0)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BuildStep {
    pub step: usize,
    pub template: usize,
    /// Images of the template's base points, in base order; `None` if no
    /// strong site existed.
    pub site: Option<Vec<String>>,
    pub added: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct GenericBuildState {
    pub group: Arc<SymmetryGroup>,
    pub size_bound: usize,
    pub seed: u64,
    pub chain: Vec<FiniteStructure>,
    pub catalog: Vec<CatalogEntry>,
    pub log: Vec<BuildStep>,
    /// Position in the current sweep.
    pub cursor: usize,
    sweep: Vec<usize>,
    rng: Prng,
}

/// Random probes for a site before falling back to the exhaustive search.
const SITE_PROBES: usize = 32;

impl GenericBuildState {
    pub fn new(group: Arc<SymmetryGroup>, size_bound: usize, seed: u64) -> Result<Self> {
        if size_bound < group.arity() {
            return Err(Error::PreconditionFailed(format!(
                "size bound {size_bound} is below the arity {}",
                group.arity()
            )));
        }
        let catalog = catalog(&group, size_bound)?;
        let empty = FiniteStructure::empty("M", group.clone());
        Ok(GenericBuildState {
            group,
            size_bound,
            seed,
            chain: vec![empty],
            catalog,
            log: Vec::new(),
            cursor: 0,
            sweep: Vec::new(),
            rng: rng(seed),
        })
    }

    pub fn current(&self) -> &FiniteStructure {
        self.chain
            .last()
            .expect("chain starts with the empty structure")
    }

    /// A strong site in the current structure for template `t`, as ids of
    /// the current structure in base order.
    fn find_site(&mut self, search: &Search, t: usize) -> Result<Option<Vec<Elem>>> {
        let entry = &self.catalog[t];
        let base = entry.base();
        let m = self.current().clone();
        let k = base.len();
        if k > m.len() {
            return Ok(None);
        }
        for _ in 0..SITE_PROBES {
            let mut pool: Vec<Elem> = (0..m.len() as Elem).collect();
            pool.shuffle(&mut self.rng);
            pool.truncate(k);
            let fixed: Vec<(Elem, Elem)> = (0..k as Elem).zip(pool.iter().copied()).collect();
            if let Some(f) = find_strong_embedding(search, &m, &base, &fixed, 0)? {
                return Ok(Some(f));
            }
        }
        let offset = if m.is_empty() {
            0
        } else {
            self.rng.gen_range(0..m.len())
        };
        find_strong_embedding(search, &m, &base, &[], offset)
    }

    /// Realizes template `t` over the site given as current-structure ids in
    /// base order, by a free join.
    pub fn apply(&mut self, t: usize, site: &[Elem]) -> Result<()> {
        let entry = self
            .catalog
            .get(t)
            .ok_or_else(|| Error::PreconditionFailed(format!("no template {t}")))?;
        let m = self.current();
        let step = self.log.len();
        let site_names: Vec<String> = site.iter().map(|&e| m.name_of(e).to_string()).collect();
        let added: Vec<String> = (0..entry.len() - entry.base_len)
            .map(|j| format!("x{step:04}_{j}"))
            .collect();
        let new_names: Vec<String> = site_names.iter().chain(&added).cloned().collect();
        let b = entry.ext.rename(&new_names)?;
        let next = simple_amalgam(m, &b, &site_names)?.renamed("M");
        self.chain.push(next);
        self.log.push(BuildStep {
            step,
            template: t,
            site: Some(site_names),
            added,
        });
        Ok(())
    }

    /// One scheduled step: the next template of the current sweep (a seeded
    /// shuffle of the whole catalog) at a seeded choice of strong site.
    pub fn step(&mut self, search: &Search) -> Result<()> {
        if self.cursor == self.sweep.len() {
            self.sweep = (0..self.catalog.len()).collect();
            self.sweep.shuffle(&mut self.rng);
            self.cursor = 0;
        }
        let t = self.sweep[self.cursor];
        self.cursor += 1;
        match self.find_site(search, t)? {
            Some(site) => self.apply(t, &site),
            None => {
                let step = self.log.len();
                self.chain.push(self.current().clone());
                self.log.push(BuildStep {
                    step,
                    template: t,
                    site: None,
                    added: Vec::new(),
                });
                Ok(())
            }
        }
    }

    /// Index of the first link `M_i ≤ M_{i+1}` that fails, or of a member
    /// outside the class.
    pub fn verify_chain(&self, search: &Search) -> Result<Option<usize>> {
        for (i, w) in self.chain.windows(2).enumerate() {
            let s = w[1].set_of(w[0].names())?;
            if !search.is_self_sufficient(&w[1], &s)? || !search.in_class(&w[1])? {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }
}

/// The chain `∅ = M₀ ≤ M₁ ≤ …` after `steps` scheduled steps.
pub fn build_generic(
    search: &Search,
    group: Arc<SymmetryGroup>,
    size_bound: usize,
    steps: usize,
    seed: u64,
) -> Result<GenericBuildState> {
    let mut st = GenericBuildState::new(group, size_bound, seed)?;
    for _ in 0..steps {
        st.step(search)?;
    }
    Ok(st)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditEntry {
    /// Sorted names of the strong subset.
    pub site: Vec<String>,
    pub template: usize,
    /// Names of the image of the template's extension points.
    pub witness: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditReport {
    pub max_a: usize,
    pub max_c: usize,
    pub entries: Vec<AuditEntry>,
    /// Logged steps within the bounds, and how many of them are realized.
    pub scheduled: usize,
    pub scheduled_realized: usize,
}

impl AuditReport {
    pub fn realized(&self) -> usize {
        self.entries.iter().filter(|e| e.witness.is_some()).count()
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "audit max_a={} max_c={}", self.max_a, self.max_c);
        for e in &self.entries {
            let w = match &e.witness {
                Some(w) => format!("realized {}", w.join(",")),
                None => "unrealized".to_string(),
            };
            let _ = writeln!(s, "{{{}}} t{} {}", e.site.join(","), e.template, w);
        }
        let _ = writeln!(
            s,
            "pairs {} realized {}",
            self.entries.len(),
            self.realized()
        );
        let _ = writeln!(
            s,
            "scheduled {} realized {}",
            self.scheduled, self.scheduled_realized
        );
        s
    }
}

/// All permutations of `0..k`, lex order.
fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..k).collect();
    loop {
        out.push(p.clone());
        let Some(i) = (1..k).rev().find(|&i| p[i - 1] < p[i]) else {
            break;
        };
        let j = (i..k).rev().find(|&j| p[j] > p[i - 1]).expect("successor");
        p.swap(i - 1, j);
        p[i..].reverse();
    }
    out
}

/// Realizes `entry` over the sorted site `site` under some identification
/// of the base with the site; returns the images of the extension points.
fn realize_over(
    search: &Search,
    m: &FiniteStructure,
    entry: &CatalogEntry,
    site: &[Elem],
) -> Result<Option<Vec<String>>> {
    for p in permutations(site.len()) {
        let fixed: Vec<(Elem, Elem)> = p
            .iter()
            .enumerate()
            .map(|(i, &j)| (i as Elem, site[j]))
            .collect();
        if let Some(f) = find_strong_embedding(search, m, &entry.ext, &fixed, 0)? {
            return Ok(Some(
                f[entry.base_len..]
                    .iter()
                    .map(|&e| m.name_of(e).to_string())
                    .collect(),
            ));
        }
    }
    Ok(None)
}

/// Every strong `A ⊆ m` with `|A| ≤ max_a` against every template of
/// `catalog` with `|C| ≤ max_c` whose base is isomorphic to `m|A`.
pub fn audit_structure(
    search: &Search,
    m: &FiniteStructure,
    catalog: &[CatalogEntry],
    max_a: usize,
    max_c: usize,
) -> Result<Vec<AuditEntry>> {
    let templates: Vec<usize> = (0..catalog.len())
        .filter(|&t| catalog[t].len() <= max_c && catalog[t].base_len <= max_a)
        .collect();
    let mut sites: Vec<Vec<Elem>> = Vec::new();
    for k in 0..=max_a.min(m.len()) {
        for_each_combination(m.len(), k, &mut |idx| {
            sites.push(idx.iter().map(|&i| i as Elem).collect());
            true
        });
    }
    let per_site: Vec<Result<Vec<AuditEntry>>> = sites
        .par_iter()
        .map(|site| {
            let set: ElementSet = site.iter().copied().collect();
            if !search.is_self_sufficient(m, &set)? {
                return Ok(Vec::new());
            }
            let induced = m.induced_substructure(&set)?;
            let names: Vec<String> = site.iter().map(|&e| m.name_of(e).to_string()).collect();
            let mut out = Vec::new();
            for &t in &templates {
                let entry = &catalog[t];
                if entry.base_len != site.len()
                    || crate::iso::find_isomorphism(&entry.base(), &induced).is_none()
                {
                    continue;
                }
                let witness = realize_over(search, m, entry, site)?;
                out.push(AuditEntry {
                    site: names.clone(),
                    template: t,
                    witness,
                });
            }
            Ok(out)
        })
        .collect();
    let mut entries = Vec::new();
    for r in per_site {
        entries.extend(r?);
    }
    Ok(entries)
}

/// [`audit_structure`] on the last member of the chain, plus the same
/// question for each logged step within the bounds.
pub fn audit_genericity(
    search: &Search,
    st: &GenericBuildState,
    max_a: usize,
    max_c: usize,
) -> Result<AuditReport> {
    let entries = audit_structure(search, st.current(), &st.catalog, max_a, max_c)?;
    let within = |t: usize| st.catalog[t].len() <= max_c && st.catalog[t].base_len <= max_a;
    let index: BTreeMap<(Vec<String>, usize), bool> = entries
        .iter()
        .map(|e| ((e.site.clone(), e.template), e.witness.is_some()))
        .collect();
    let mut scheduled = 0;
    let mut scheduled_realized = 0;
    for s in &st.log {
        let Some(site) = &s.site else { continue };
        if !within(s.template) {
            continue;
        }
        scheduled += 1;
        let mut key = site.clone();
        key.sort();
        if index.get(&(key, s.template)).copied().unwrap_or(false) {
            scheduled_realized += 1;
        }
    }
    Ok(AuditReport {
        max_a,
        max_c,
        entries,
        scheduled,
        scheduled_realized,
    })
}
