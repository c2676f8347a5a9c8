//! Finite relational structures carrying one `n`-ary relation up to a group
//! of coordinate permutations.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::SymmetryGroup;
use crate::set::{Elem, ElementSet, Mask};

/// Canonical (lex-least) representative of a group orbit of a tuple.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrbitTuple(Box<[Elem]>);

impl OrbitTuple {
    /// Canonicalizes under `group`; entries must be distinct.
    pub fn new(group: &SymmetryGroup, raw: &[Elem]) -> Result<Self> {
        Ok(OrbitTuple(group.canonicalize_checked(raw)?.into()))
    }

    pub(crate) fn from_canonical(v: Vec<Elem>) -> Self {
        OrbitTuple(v.into())
    }

    pub fn entries(&self) -> &[Elem] {
        &self.0
    }
}

impl fmt::Debug for OrbitTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{:?}>", self.0)
    }
}

/// Id map from a source structure into a target structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    pub map: Vec<Elem>,
}

impl Embedding {
    pub fn identity(n: usize) -> Self {
        Embedding {
            map: (0..n as Elem).collect(),
        }
    }

    /// Injective and relation preserving in both directions.
    pub fn is_embedding(&self, source: &FiniteStructure, target: &FiniteStructure) -> bool {
        if self.map.len() != source.len() {
            return false;
        }
        let image: ElementSet = self.map.iter().copied().collect();
        if image.len() != self.map.len()
            || image.max_elem().is_some_and(|m| m as usize >= target.len())
        {
            return false;
        }
        if target.count_inside(&image) != source.relations().len() {
            return false;
        }
        source.relations().iter().all(|r| {
            let t: Vec<Elem> = r.entries().iter().map(|&e| self.map[e as usize]).collect();
            target.has_tuple(&t)
        })
    }
}

/// A finite structure with element names, a symmetry group and an orbit set.
///
/// Element ids are the positions of the names in string order, so the
/// induced substructure on a set `S` numbers its elements in the order of
/// `S` itself.
#[derive(Clone)]
pub struct FiniteStructure {
    name: String,
    group: Arc<SymmetryGroup>,
    names: Vec<String>,
    index: HashMap<String, Elem>,
    relations: Vec<OrbitTuple>,
    incidence: Vec<Vec<u32>>,
    masks: Option<Vec<Mask>>,
}

impl PartialEq for FiniteStructure {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.group == other.group
            && self.names == other.names
            && self.relations == other.relations
    }
}

impl Eq for FiniteStructure {}

impl fmt::Debug for FiniteStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteStructure")
            .field("name", &self.name)
            .field("group", &self.group)
            .field("elements", &self.names)
            .field("relations", &self.named_relations())
            .finish()
    }
}

impl FiniteStructure {
    /// Builds from element names and relation tuples over those names. Any
    /// orbit member is accepted; repeated elements are merged.
    pub fn from_named<S, T>(
        name: &str,
        group: Arc<SymmetryGroup>,
        elements: impl IntoIterator<Item = S>,
        relations: impl IntoIterator<Item = T>,
    ) -> Result<Self>
    where
        S: Into<String>,
        T: AsRef<[String]>,
    {
        let set: BTreeSet<String> = elements.into_iter().map(Into::into).collect();
        let names: Vec<String> = set.into_iter().collect();
        let index: HashMap<String, Elem> = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i as Elem))
            .collect();
        let mut tuples = Vec::new();
        for t in relations {
            let t = t.as_ref();
            let ids = t
                .iter()
                .map(|e| {
                    index
                        .get(e)
                        .copied()
                        .ok_or_else(|| Error::UnknownElement(e.clone()))
                })
                .collect::<Result<Vec<_>>>()?;
            if ids.len() != group.arity() {
                return Err(Error::ArityMismatch {
                    expected: group.arity(),
                    found: ids.len(),
                });
            }
            for (i, x) in ids.iter().enumerate() {
                if ids[..i].contains(x) {
                    return Err(Error::DuplicateEntry(names[*x as usize].clone()));
                }
            }
            tuples.push(ids);
        }
        Ok(Self::assemble(
            name.to_string(),
            group,
            names,
            index,
            tuples,
        ))
    }

    /// Builds from names in id order (must be sorted and unique) and
    /// tuples over ids. Used by internal constructions.
    pub(crate) fn from_ids(
        name: &str,
        group: Arc<SymmetryGroup>,
        names: Vec<String>,
        tuples: Vec<Vec<Elem>>,
    ) -> Self {
        debug_assert!(names.windows(2).all(|w| w[0] < w[1]));
        let index = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i as Elem))
            .collect();
        Self::assemble(name.to_string(), group, names, index, tuples)
    }

    fn assemble(
        name: String,
        group: Arc<SymmetryGroup>,
        names: Vec<String>,
        index: HashMap<String, Elem>,
        tuples: Vec<Vec<Elem>>,
    ) -> Self {
        let mut relations: Vec<OrbitTuple> = tuples
            .into_iter()
            .map(|t| OrbitTuple::from_canonical(group.canonicalize(&t)))
            .collect();
        relations.sort();
        relations.dedup();
        let mut incidence = vec![Vec::new(); names.len()];
        for (ri, r) in relations.iter().enumerate() {
            for &e in r.entries() {
                incidence[e as usize].push(ri as u32);
            }
        }
        let masks = (names.len() <= 32).then(|| {
            relations
                .iter()
                .map(|r| r.entries().iter().fold(0, |m, &e| m | (1 << e)))
                .collect()
        });
        FiniteStructure {
            name,
            group,
            names,
            index,
            relations,
            incidence,
            masks,
        }
    }

    pub fn empty(name: &str, group: Arc<SymmetryGroup>) -> Self {
        Self::from_ids(name, group, Vec::new(), Vec::new())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(&self, name: &str) -> Self {
        let mut s = self.clone();
        s.name = name.to_string();
        s
    }

    pub fn group(&self) -> &SymmetryGroup {
        &self.group
    }

    pub fn group_arc(&self) -> &Arc<SymmetryGroup> {
        &self.group
    }

    pub fn arity(&self) -> usize {
        self.group.arity()
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn universe(&self) -> ElementSet {
        ElementSet::full(self.len())
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name_of(&self, e: Elem) -> &str {
        &self.names[e as usize]
    }

    pub fn id_of(&self, name: &str) -> Option<Elem> {
        self.index.get(name).copied()
    }

    pub fn relations(&self) -> &[OrbitTuple] {
        &self.relations
    }

    /// Ids of the relations containing `e`.
    pub fn incidence(&self, e: Elem) -> &[u32] {
        &self.incidence[e as usize]
    }

    /// Element masks of the relations, present when `len() <= 32`.
    pub fn relation_masks(&self) -> Option<&[Mask]> {
        self.masks.as_deref()
    }

    pub fn set_of<S: AsRef<str>>(&self, names: &[S]) -> Result<ElementSet> {
        names
            .iter()
            .map(|n| {
                self.id_of(n.as_ref())
                    .ok_or_else(|| Error::UnknownElement(n.as_ref().to_string()))
            })
            .collect()
    }

    pub fn names_of(&self, s: &ElementSet) -> Vec<String> {
        s.iter().map(|e| self.names[e as usize].clone()).collect()
    }

    pub fn named_relations(&self) -> Vec<Vec<String>> {
        self.relations
            .iter()
            .map(|r| {
                r.entries()
                    .iter()
                    .map(|&e| self.names[e as usize].clone())
                    .collect()
            })
            .collect()
    }

    /// Whether the orbit of the (distinct-entry) tuple `t` is a relation.
    pub fn has_tuple(&self, t: &[Elem]) -> bool {
        let c = OrbitTuple::from_canonical(self.group.canonicalize(t));
        self.relations.binary_search(&c).is_ok()
    }

    pub fn relation_index(&self, r: &OrbitTuple) -> Option<usize> {
        self.relations.binary_search(r).ok()
    }

    /// Number of orbits lying entirely inside `s` (the `r_G` count).
    pub fn count_inside(&self, s: &ElementSet) -> usize {
        if let (Some(masks), Some(m)) = (&self.masks, mask_if_fits(s)) {
            return masks.iter().filter(|&&r| r & m == r).count();
        }
        let mut seen: Vec<u32> = s
            .iter()
            .flat_map(|e| self.incidence[e as usize].iter().copied())
            .collect();
        seen.sort_unstable();
        seen.dedup();
        seen.into_iter()
            .filter(|&ri| s.covers(self.relations[ri as usize].entries()))
            .count()
    }

    /// Ids of the relations lying inside `s`.
    pub fn relations_inside(&self, s: &ElementSet) -> Vec<usize> {
        let mut ids: Vec<usize> = s
            .iter()
            .flat_map(|e| self.incidence[e as usize].iter().map(|&r| r as usize))
            .filter(|&ri| s.covers(self.relations[ri].entries()))
            .collect();
        ids.sort_unstable();
        ids.dedup();
        ids
    }

    pub fn check_subset(&self, s: &ElementSet) -> Result<()> {
        match s.max_elem() {
            Some(m) if m as usize >= self.len() => Err(Error::UnknownElement(format!("#{m}"))),
            _ => Ok(()),
        }
    }

    /// The substructure with universe `s`; its id `i` is `s[i]`.
    pub fn induced_substructure(&self, s: &ElementSet) -> Result<Self> {
        self.check_subset(s)?;
        let mut pos = vec![u32::MAX; self.len()];
        for (i, e) in s.iter().enumerate() {
            pos[e as usize] = i as u32;
        }
        let tuples = self
            .relations_inside(s)
            .into_iter()
            .map(|ri| {
                self.relations[ri]
                    .entries()
                    .iter()
                    .map(|&e| pos[e as usize])
                    .collect()
            })
            .collect();
        Ok(Self::from_ids(
            &self.name,
            self.group.clone(),
            self.names_of(s),
            tuples,
        ))
    }

    /// Same universe and group with the given relation tuples added.
    pub fn with_added_tuples(&self, tuples: impl IntoIterator<Item = Vec<Elem>>) -> Self {
        let mut all: Vec<Vec<Elem>> = self
            .relations
            .iter()
            .map(|r| r.entries().to_vec())
            .collect();
        all.extend(tuples);
        Self::from_ids(&self.name, self.group.clone(), self.names.clone(), all)
    }

    /// Relations as tuples of names, keyed for cross-structure comparison.
    pub fn relation_name_set(&self) -> BTreeSet<Vec<String>> {
        self.named_relations().into_iter().collect()
    }

    /// Re-expresses the structure under new names, given per old id.
    pub fn rename(&self, new_names: &[String]) -> Result<Self> {
        let rels: Vec<Vec<String>> = self
            .relations
            .iter()
            .map(|r| {
                r.entries()
                    .iter()
                    .map(|&e| new_names[e as usize].clone())
                    .collect()
            })
            .collect();
        let s = Self::from_named(
            &self.name,
            self.group.clone(),
            new_names.iter().cloned(),
            rels,
        )?;
        if s.len() != self.len() {
            return Err(Error::PreconditionFailed(
                "renaming is not injective".into(),
            ));
        }
        Ok(s)
    }
}

pub(crate) fn mask_if_fits(s: &ElementSet) -> Option<Mask> {
    match s.max_elem() {
        None => Some(0),
        Some(m) if m < 32 => Some(s.to_mask()),
        _ => None,
    }
}

/// Induced relation set on the named `shared` elements, as name tuples.
fn shared_relations(m: &FiniteStructure, shared: &[String]) -> Result<BTreeSet<Vec<String>>> {
    let s = m.set_of(shared)?;
    Ok(m.induced_substructure(&s)?.relation_name_set())
}

/// Renames the parts apart so that any two of them meet exactly in `shared`.
/// A clashing name `e` in part `i` becomes `e~i` (with further `~` suffixes
/// until unique).
pub fn free_union_rename(
    parts: &[FiniteStructure],
    shared: &[String],
) -> Result<Vec<FiniteStructure>> {
    let shared_set: BTreeSet<&String> = shared.iter().collect();
    let mut reference: Option<BTreeSet<Vec<String>>> = None;
    for p in parts {
        if p.group() != parts[0].group() {
            return Err(Error::ArityMismatch {
                expected: parts[0].arity(),
                found: p.arity(),
            });
        }
        let rels = shared_relations(p, shared).map_err(|e| match e {
            Error::UnknownElement(x) => Error::SharedMismatch(format!("{} lacks {x}", p.name())),
            other => other,
        })?;
        match &reference {
            None => reference = Some(rels),
            Some(r) if *r != rels => {
                return Err(Error::SharedMismatch(format!(
                    "{} disagrees on the shared part",
                    p.name()
                )))
            }
            Some(_) => {}
        }
    }
    let mut used: BTreeSet<String> = shared.iter().cloned().collect();
    let mut out = Vec::with_capacity(parts.len());
    for (i, p) in parts.iter().enumerate() {
        let mut renames: BTreeMap<&str, String> = BTreeMap::new();
        let mut local = Vec::with_capacity(p.len());
        for n in p.names() {
            if shared_set.contains(n) {
                local.push(n.clone());
                continue;
            }
            let mut fresh = n.clone();
            while used.contains(&fresh) {
                fresh = format!("{fresh}~{i}");
            }
            used.insert(fresh.clone());
            if &fresh != n {
                renames.insert(n, fresh.clone());
            }
            local.push(fresh);
        }
        out.push(if renames.is_empty() {
            p.clone()
        } else {
            p.rename(&local)?
        });
    }
    Ok(out)
}

/// `count` names `prefix0, prefix1, …` skipping any already used in `m`.
pub fn fresh_names(m: &FiniteStructure, prefix: &str, count: usize) -> Vec<String> {
    let mut out = Vec::with_capacity(count);
    let mut i = 0usize;
    while out.len() < count {
        let cand = format!("{prefix}{i}");
        if m.id_of(&cand).is_none() {
            out.push(cand);
        }
        i += 1;
    }
    out
}

/// Convenience for tests and examples: `tuples` given as name slices.
pub fn structure<const N: usize>(
    name: &str,
    group: Arc<SymmetryGroup>,
    elements: &[&str],
    tuples: &[[&str; N]],
) -> Result<FiniteStructure> {
    let rels: Vec<Vec<String>> = tuples
        .iter()
        .map(|t| t.iter().map(|s| s.to_string()).collect())
        .collect();
    FiniteStructure::from_named(name, group, elements.iter().copied(), rels)
}
