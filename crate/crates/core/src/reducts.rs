//! Reducts between symmetry levels: the subgroup reduct, which symmetrizes
//! each orbit under a larger group, and the exquisite reduct, which reads
//! ordered relations off the heads of `q̂` realizations. Includes their
//! mixed amalgams, benign pairs and the harness predicates comparing the
//! two strong-substructure relations.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exquisite::{heads, AtomicType, Realizations};
use crate::group::SymmetryGroup;
use crate::predim::Search;
use crate::set::{Elem, ElementSet};
use crate::structure::FiniteStructure;

/// The relation defined by `⋁_{σ∈G} R(x_σ(1), …, x_σ(n))`, as a `G`-structure
/// on the same universe.
pub fn phi_reduct(m: &FiniteStructure, g: &Arc<SymmetryGroup>) -> Result<FiniteStructure> {
    if m.arity() != g.arity() {
        return Err(Error::ArityMismatch {
            expected: g.arity(),
            found: m.arity(),
        });
    }
    if !m.group().is_subgroup_of(g) {
        return Err(Error::NotSubgroup);
    }
    let tuples = m.relations().iter().map(|r| r.entries().to_vec()).collect();
    Ok(FiniteStructure::from_ids(
        &format!("phi_{}", m.name()),
        g.clone(),
        m.names().to_vec(),
        tuples,
    ))
}

/// The ordered relation `∃ȳ q̂(x̄; ȳ)`, as a trivial-group structure on the
/// same universe. `q` is taken to be exquisite.
pub fn exquisite_reduct(m: &FiniteStructure, q: &AtomicType) -> Result<FiniteStructure> {
    let real = Realizations::compute(m, q)?;
    let g = Arc::new(SymmetryGroup::trivial(q.arity())?);
    Ok(FiniteStructure::from_ids(
        &format!("F_{}", m.name()),
        g,
        m.names().to_vec(),
        heads(&real).into_iter().collect(),
    ))
}

#[derive(Clone, Debug)]
pub enum ReductKind {
    Subgroup(Arc<SymmetryGroup>),
    Exquisite(AtomicType),
}

impl ReductKind {
    pub fn apply(&self, m: &FiniteStructure) -> Result<FiniteStructure> {
        match self {
            ReductKind::Subgroup(g) => phi_reduct(m, g),
            ReductKind::Exquisite(q) => exquisite_reduct(m, q),
        }
    }
}

/// Whether reducing `m|A` agrees with restricting the reduct of `m` to `A`.
/// No strength requirement; see [`check_encloses`].
pub fn reduct_commutes(m: &FiniteStructure, a: &ElementSet, kind: &ReductKind) -> Result<bool> {
    let small = kind.apply(&m.induced_substructure(a)?)?;
    let big = kind.apply(m)?.induced_substructure(a)?;
    Ok(small.relation_name_set() == big.relation_name_set())
}

/// [`reduct_commutes`] for a strong `A`. The subgroup reduct commutes with
/// every restriction, so only the exquisite kind demands `A ≤ M`.
pub fn check_encloses(
    search: &Search,
    m: &FiniteStructure,
    a: &ElementSet,
    kind: &ReductKind,
) -> Result<bool> {
    if matches!(kind, ReductKind::Exquisite(_)) && !search.is_self_sufficient(m, a)? {
        return Err(Error::NotStrongBase);
    }
    reduct_commutes(m, a, kind)
}

pub fn check_reduces_class(
    search: &Search,
    a: &FiniteStructure,
    kind: &ReductKind,
) -> Result<bool> {
    if !search.in_class(a)? {
        return Err(Error::NotInClass(a.name().to_string()));
    }
    search.in_class(&kind.apply(a)?)
}

/// `A ≤ M` in the source implies `A ≤ reduct(M)` in the target.
pub fn check_stronger(
    search: &Search,
    m: &FiniteStructure,
    a: &ElementSet,
    kind: &ReductKind,
) -> Result<bool> {
    if !search.is_self_sufficient(m, a)? {
        return Err(Error::NotStrongBase);
    }
    search.is_self_sufficient(&kind.apply(m)?, a)
}

/// `A`'s universe as a subset of `b`, with `b|A = r` and `A ≤ b`.
fn check_reduct_strong_in(
    search: &Search,
    r: &FiniteStructure,
    b: &FiniteStructure,
) -> Result<ElementSet> {
    let s = b
        .set_of(r.names())
        .map_err(|e| Error::PreconditionFailed(format!("universe not contained in B: {e}")))?;
    let induced = b.induced_substructure(&s)?.relation_name_set();
    let expected = r.relation_name_set();
    if induced != expected {
        let diff: Vec<&Vec<String>> = induced.symmetric_difference(&expected).collect();
        return Err(Error::PreconditionFailed(format!(
            "B differs from the reduct on A at {:?}",
            diff[0]
        )));
    }
    if !search.is_self_sufficient(b, &s)? {
        return Err(Error::PreconditionFailed(
            "reduct of A is not strong in B".into(),
        ));
    }
    Ok(s)
}

/// An `H`-structure `C` on the universe of `b` with `A ≤ C` and
/// `phi(C) = b`: the relations of `a` plus, for each `G`-orbit of `b` not
/// inside `A`, the `H`-orbit of its lex-least member.
pub fn mixed_amalgam_subgroup(
    search: &Search,
    a: &FiniteStructure,
    b: &FiniteStructure,
) -> Result<FiniteStructure> {
    let g = b.group_arc();
    let ra = phi_reduct(a, g)?;
    let s = check_reduct_strong_in(search, &ra, b)?;
    let pos: Vec<Elem> = a
        .names()
        .iter()
        .map(|x| b.id_of(x).expect("checked"))
        .collect();
    let mut tuples: Vec<Vec<Elem>> = a
        .relations()
        .iter()
        .map(|r| r.entries().iter().map(|&e| pos[e as usize]).collect())
        .collect();
    for r in b.relations() {
        if !s.covers(r.entries()) {
            tuples.push(r.entries().to_vec());
        }
    }
    let c = FiniteStructure::from_ids(
        &format!("mix_{}", a.name()),
        a.group_arc().clone(),
        b.names().to_vec(),
        tuples,
    );
    if !search.is_self_sufficient(&c, &s)? {
        return Err(Error::PostconditionFailed("A is not strong in C".into()));
    }
    if phi_reduct(&c, g)?.relation_name_set() != b.relation_name_set() {
        return Err(Error::PostconditionFailed(
            "reduct of C differs from B".into(),
        ));
    }
    Ok(c)
}

/// An `S_n`-structure `C ⊇ B` with `A ≤ C` and `B ≤ F(C)`: for each ordered
/// relation `ā` of `b` not inside `A`, a fresh tail `w̄` and the orbits
/// `G(ā; w̄)`.
pub fn mixed_amalgam_exquisite(
    search: &Search,
    a: &FiniteStructure,
    b: &FiniteStructure,
    q: &AtomicType,
) -> Result<FiniteStructure> {
    if !b.group().is_trivial() || b.arity() != q.arity() {
        return Err(Error::PreconditionFailed(format!(
            "{} is not an ordered structure of arity {}",
            b.name(),
            q.arity()
        )));
    }
    let fa = exquisite_reduct(a, q)?;
    let s = check_reduct_strong_in(search, &fa, b)?;
    let mut used: BTreeSet<String> = b.names().iter().cloned().collect();
    let mut next = 0usize;
    let mut fresh = || loop {
        let cand = format!("w{next}");
        next += 1;
        if used.insert(cand.clone()) {
            return cand;
        }
    };
    let mut names: Vec<String> = b.names().to_vec();
    let mut rels = a.named_relations();
    for r in b.relations() {
        if s.covers(r.entries()) {
            continue;
        }
        let head: Vec<String> = r
            .entries()
            .iter()
            .map(|&e| b.name_of(e).to_string())
            .collect();
        let tail: Vec<String> = (0..q.tail_len()).map(|_| fresh()).collect();
        let var = |i: usize| {
            if i < q.arity() {
                head[i].clone()
            } else {
                tail[i - q.arity()].clone()
            }
        };
        rels.extend(
            q.relations()
                .iter()
                .map(|t| t.iter().map(|&i| var(i)).collect::<Vec<_>>()),
        );
        names.extend(tail.iter().cloned());
    }
    let c = FiniteStructure::from_named(
        &format!("mix_{}", a.name()),
        a.group_arc().clone(),
        names,
        rels,
    )?;
    let sa = c.set_of(a.names())?;
    if !search.is_self_sufficient(&c, &sa)? {
        return Err(Error::PostconditionFailed("A is not strong in C".into()));
    }
    let fc = exquisite_reduct(&c, q)?;
    if fc.relation_name_set() != b.relation_name_set() {
        return Err(Error::PostconditionFailed(
            "reduct of C has relations outside B".into(),
        ));
    }
    if !search.is_self_sufficient(&fc, &fc.set_of(b.names())?)? {
        return Err(Error::PostconditionFailed(
            "B is not strong in the reduct of C".into(),
        ));
    }
    Ok(c)
}

/// Two extensions of `F` that differ over `F` but whose reducts agree.
#[derive(Clone, Debug)]
pub struct BenignPair {
    pub a: FiniteStructure,
    pub b: FiniteStructure,
    pub f_strong_in_a: bool,
    pub f_strong_in_b: bool,
    /// Certified by differing orbit counts over `F`.
    pub non_isomorphic: bool,
    /// The reducts coincide, so the identity is an isomorphism over `F`.
    pub reducts_equal: bool,
}

impl BenignPair {
    pub fn certified(&self) -> bool {
        self.f_strong_in_a && self.f_strong_in_b && self.non_isomorphic && self.reducts_equal
    }

    fn certify(
        search: &Search,
        f: &FiniteStructure,
        a: FiniteStructure,
        b: FiniteStructure,
        kind: &ReductKind,
    ) -> Result<Self> {
        let fa = a.set_of(f.names())?;
        let fb = b.set_of(f.names())?;
        Ok(BenignPair {
            f_strong_in_a: search.is_self_sufficient(&a, &fa)?,
            f_strong_in_b: search.is_self_sufficient(&b, &fb)?,
            non_isomorphic: a.relations().len() != b.relations().len(),
            reducts_equal: kind.apply(&a)?.relation_name_set()
                == kind.apply(&b)?.relation_name_set(),
            a,
            b,
        })
    }
}

fn with_fresh_points(f: &FiniteStructure, n: usize) -> (Vec<String>, Vec<String>) {
    let fresh = crate::structure::fresh_names(f, "a", n);
    let names = f.names().iter().chain(&fresh).cloned().collect();
    (fresh, names)
}

/// `A = F + ā + ⟨ā⟩_H` and `B = A + ⟨σā⟩_H` for the first `σ ∈ G ∖ H`.
pub fn benign_pair_subgroup(
    search: &Search,
    f: &FiniteStructure,
    g: &Arc<SymmetryGroup>,
) -> Result<BenignPair> {
    let h = f.group();
    if h.arity() != g.arity() {
        return Err(Error::ArityMismatch {
            expected: g.arity(),
            found: h.arity(),
        });
    }
    if !h.is_subgroup_of(g) || h.order() == g.order() {
        return Err(Error::NotProperSubgroup);
    }
    let sigma = g
        .members()
        .iter()
        .find(|p| !h.contains(p))
        .expect("proper subgroup");
    let (fresh, names) = with_fresh_points(f, g.arity());
    let mut rels = f.named_relations();
    rels.push(fresh.clone());
    let a = FiniteStructure::from_named(
        &format!("{}_A", f.name()),
        f.group_arc().clone(),
        names.clone(),
        rels.clone(),
    )?;
    rels.push(
        sigma
            .images()
            .iter()
            .map(|&j| fresh[j as usize].clone())
            .collect(),
    );
    let b = FiniteStructure::from_named(
        &format!("{}_B", f.name()),
        f.group_arc().clone(),
        names,
        rels,
    )?;
    BenignPair::certify(search, f, a, b, &ReductKind::Subgroup(g.clone()))
}

/// `A₁ = F + ā` and `A₂ = A₁ + ⟨ā⟩`.
pub fn benign_pair_exquisite(
    search: &Search,
    f: &FiniteStructure,
    q: &AtomicType,
) -> Result<BenignPair> {
    if !search.in_class(f)? {
        return Err(Error::NotInClass(f.name().to_string()));
    }
    let (fresh, names) = with_fresh_points(f, q.arity());
    let mut rels = f.named_relations();
    let a = FiniteStructure::from_named(
        &format!("{}_A1", f.name()),
        f.group_arc().clone(),
        names.clone(),
        rels.clone(),
    )?;
    rels.push(fresh);
    let b = FiniteStructure::from_named(
        &format!("{}_A2", f.name()),
        f.group_arc().clone(),
        names,
        rels,
    )?;
    BenignPair::certify(search, f, a, b, &ReductKind::Exquisite(q.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amalgam::{iterated_amalgam, simple_amalgam};
    use crate::exquisite::base_exquisite_3;
    use crate::group::Permutation;
    use crate::predim::delta;
    use crate::random::{random_in_class, random_strong_extension, random_subset, rng};
    use crate::structure::{free_union_rename, structure};
    use crate::testing::{id3, s3};
    use proptest::prelude::*;
    use rand::Rng;

    fn swap12() -> Arc<SymmetryGroup> {
        Arc::new(
            SymmetryGroup::from_generators(3, &[Permutation::from_one_based(&[2, 1, 3]).unwrap()])
                .unwrap(),
        )
    }

    #[test]
    fn phi_examples() {
        let m = structure("m", id3(), &["x", "y", "z"], &[["x", "y", "z"]]).unwrap();
        assert_eq!(phi_reduct(&m, &id3()).unwrap().relations(), m.relations());
        let r = phi_reduct(&m, &s3()).unwrap();
        assert_eq!(r.relations().len(), 1);
        let two = structure(
            "m",
            id3(),
            &["x", "y", "z"],
            &[["x", "y", "z"], ["y", "x", "z"]],
        )
        .unwrap();
        let r2 = phi_reduct(&two, &s3()).unwrap();
        assert_eq!(r2.relations().len(), 1);
        assert_eq!(delta(&r2, &r2.universe()), delta(&two, &two.universe()) + 1);
        assert!(matches!(phi_reduct(&r2, &id3()), Err(Error::NotSubgroup)));
        let g4 = Arc::new(SymmetryGroup::full(4).unwrap());
        assert!(matches!(
            phi_reduct(&m, &g4),
            Err(Error::ArityMismatch { .. })
        ));
    }

    #[test]
    fn exquisite_reduct_examples() {
        let q = base_exquisite_3();
        let c = q.canonical_structure();
        let f = exquisite_reduct(&c, &q).unwrap();
        assert_eq!(
            f.named_relations(),
            vec![vec!["a1".to_string(), "a2".into(), "a3".into()]]
        );
        let empty = structure::<3>("e", s3(), &["x", "y", "z"], &[]).unwrap();
        assert!(exquisite_reduct(&empty, &q).unwrap().relations().is_empty());
        let parts = free_union_rename(&[c.clone(), c.renamed("d")], &[]).unwrap();
        let d = simple_amalgam(&parts[0], &parts[1], &[]).unwrap();
        assert_eq!(exquisite_reduct(&d, &q).unwrap().relations().len(), 2);
    }

    #[test]
    fn encloses_examples() {
        let search = Search::default();
        let q = base_exquisite_3();
        let c = q.canonical_structure();
        let kind = ReductKind::Exquisite(q.clone());
        assert!(check_encloses(&search, &c, &c.universe(), &kind).unwrap());
        assert!(check_encloses(&search, &c, &ElementSet::new(), &kind).unwrap());
        // the head alone clips the witness tail
        let head = c.set_of(&["a1", "a2", "a3"]).unwrap();
        assert!(matches!(
            check_encloses(&search, &c, &head, &kind),
            Err(Error::NotStrongBase)
        ));
        assert!(!reduct_commutes(&c, &head, &kind).unwrap());
        let mut r = rng(4);
        let sub = ReductKind::Subgroup(s3());
        for _ in 0..20 {
            let m = random_in_class(&mut r, &id3(), 7, 6);
            let s = random_subset(&mut r, 7);
            assert!(check_encloses(&search, &m, &s, &sub).unwrap());
        }
    }

    #[test]
    fn reduces_class_examples() {
        let search = Search::default();
        let q = base_exquisite_3();
        let kind = ReductKind::Exquisite(q.clone());
        let empty = FiniteStructure::empty("e", s3());
        assert!(check_reduces_class(&search, &empty, &kind).unwrap());
        // two canonical copies glued along a1 b1 b2
        let c = q.canonical_structure();
        let shared: Vec<String> = ["a1", "b1", "b2"].iter().map(|s| s.to_string()).collect();
        let parts = free_union_rename(&[c.clone(), c.renamed("d")], &shared).unwrap();
        let glued = simple_amalgam(&parts[0], &parts[1], &shared).unwrap();
        assert!(check_reduces_class(&search, &glued, &kind).unwrap());
        let bad = structure(
            "b",
            s3(),
            &["a", "b", "c", "d", "e"],
            &[
                ["a", "b", "c"],
                ["a", "b", "d"],
                ["a", "b", "e"],
                ["a", "c", "d"],
                ["a", "c", "e"],
                ["a", "d", "e"],
            ],
        )
        .unwrap();
        assert!(matches!(
            check_reduces_class(&search, &bad, &kind),
            Err(Error::NotInClass(_))
        ));
    }

    #[test]
    fn stronger_examples() {
        let search = Search::default();
        let mut r = rng(8);
        let q = base_exquisite_3();
        for kind in [ReductKind::Subgroup(s3()), ReductKind::Exquisite(q.clone())] {
            for _ in 0..15 {
                let m = match &kind {
                    ReductKind::Subgroup(_) => random_in_class(&mut r, &id3(), 8, 7),
                    ReductKind::Exquisite(_) => {
                        let base = q.canonical_structure();
                        let extra = r.gen_range(0..3);
                        random_strong_extension(&mut r, &base, "n", extra, extra)
                    }
                };
                assert!(check_stronger(&search, &m, &m.universe(), &kind).unwrap());
                assert!(check_stronger(&search, &m, &ElementSet::new(), &kind).unwrap());
                let cl = search
                    .self_sufficient_closure(&m, &random_subset(&mut r, m.len()))
                    .unwrap()
                    .closure;
                assert!(check_stronger(&search, &m, &cl, &kind).unwrap());
            }
        }
    }

    #[test]
    fn mixed_subgroup_examples() {
        let search = Search::default();
        let a = structure("a", id3(), &["x", "y", "z"], &[["x", "y", "z"]]).unwrap();
        let ra = phi_reduct(&a, &s3()).unwrap();
        let c = mixed_amalgam_subgroup(&search, &a, &ra).unwrap();
        assert_eq!(c.relation_name_set(), a.relation_name_set());
        let b = structure(
            "b",
            s3(),
            &["u", "v", "x", "y", "z"],
            &[["x", "y", "z"], ["u", "v", "z"]],
        )
        .unwrap();
        let c = mixed_amalgam_subgroup(&search, &a, &b).unwrap();
        assert_eq!(c.relations().len(), 2);
        let sa = c.set_of(a.names()).unwrap();
        let sb = b.set_of(a.names()).unwrap();
        assert_eq!(
            delta(&c, &c.universe()) - delta(&c, &sa),
            delta(&b, &b.universe()) - delta(&b, &sb)
        );
        let wrong = structure::<3>("b", s3(), &["x", "y", "z"], &[]).unwrap();
        assert!(matches!(
            mixed_amalgam_subgroup(&search, &a, &wrong),
            Err(Error::PreconditionFailed(_))
        ));
    }

    #[test]
    fn mixed_subgroup_random() {
        let search = Search::default();
        let mut r = rng(21);
        for h in [id3(), swap12()] {
            for _ in 0..25 {
                let n = r.gen_range(3..7);
                let a = random_in_class(&mut r, &h, n, n - 1);
                let ra = phi_reduct(&a, &s3()).unwrap();
                let extra = r.gen_range(0..4);
                let b = random_strong_extension(&mut r, &ra, "n", extra, extra);
                let c = mixed_amalgam_subgroup(&search, &a, &b).unwrap();
                assert_eq!(c.names(), b.names());
                assert!(search.in_class(&c).unwrap());
            }
        }
    }

    #[test]
    fn mixed_exquisite_examples() {
        let search = Search::default();
        let q = base_exquisite_3();
        let a = q.canonical_structure();
        let fa = exquisite_reduct(&a, &q).unwrap();
        let c = mixed_amalgam_exquisite(&search, &a, &fa, &q).unwrap();
        assert_eq!(c.relation_name_set(), a.relation_name_set());
        // a new point carrying a new head over the canonical structure
        let mut names = fa.names().to_vec();
        names.push("p".into());
        let mut rels = fa.named_relations();
        rels.push(vec!["p".into(), "a1".into(), "b5".into()]);
        let b = FiniteStructure::from_named("b", fa.group_arc().clone(), names, rels).unwrap();
        let c = mixed_amalgam_exquisite(&search, &a, &b, &q).unwrap();
        assert_eq!(c.len(), a.len() + 1 + q.tail_len());
        assert_eq!(c.relations().len(), a.relations().len() + q.t_q());
    }

    #[test]
    fn benign_examples() {
        let search = Search::default();
        let empty = FiniteStructure::empty("f", id3());
        let p = benign_pair_subgroup(&search, &empty, &s3()).unwrap();
        assert!(p.certified());
        assert_eq!((p.a.relations().len(), p.b.relations().len()), (1, 2));
        assert_eq!(phi_reduct(&p.a, &s3()).unwrap().relations().len(), 1);
        assert!(matches!(
            benign_pair_subgroup(&search, &FiniteStructure::empty("f", s3()), &s3()),
            Err(Error::NotProperSubgroup)
        ));
        let q = base_exquisite_3();
        let p = benign_pair_exquisite(&search, &FiniteStructure::empty("f", s3()), &q).unwrap();
        assert!(p.certified());
        assert!(exquisite_reduct(&p.a, &q).unwrap().relations().is_empty());
        let p = benign_pair_exquisite(&search, &q.canonical_structure(), &q).unwrap();
        assert!(p.certified());
        assert_eq!(exquisite_reduct(&p.b, &q).unwrap().relations().len(), 1);
    }

    #[test]
    fn copies_over_a_base_stay_in_class() {
        // r = δ(reduct A) + 1 copies of B over A, then reduce
        let search = Search::default();
        let mut r = rng(31);
        for _ in 0..20 {
            let n = r.gen_range(3..5);
            let a = random_in_class(&mut r, &id3(), n, n - 1);
            let extra = r.gen_range(1..3);
            let b = random_strong_extension(&mut r, &a, "n", extra, extra + 1);
            let ra = phi_reduct(&a, &s3()).unwrap();
            let copies = (delta(&ra, &ra.universe()) + 1) as usize;
            let parts = free_union_rename(&vec![b.clone(); copies], a.names()).unwrap();
            let d = iterated_amalgam(&parts, a.names()).unwrap();
            assert!(search.in_class(&phi_reduct(&d, &s3()).unwrap()).unwrap());
        }
    }

    #[test]
    fn reduct_of_an_approximant_realizes_reduced_extensions() {
        use crate::generic::{audit_structure, build_generic, catalog};
        use crate::iso::canonical_key;
        let search = Search::default();
        let st = build_generic(&search, id3(), 3, 30, 5).unwrap();
        let m = st.current();
        let red = phi_reduct(m, &s3()).unwrap();
        let source = audit_structure(&search, m, &st.catalog, 2, 3).unwrap();
        let gcat = catalog(&s3(), 3).unwrap();
        let target = audit_structure(&search, &red, &gcat, 2, 3).unwrap();
        let mut checked = 0;
        for e in source.iter().filter(|e| e.witness.is_some()) {
            let entry = &st.catalog[e.template];
            let ext = phi_reduct(&entry.ext, &s3()).unwrap();
            let first: Vec<Elem> = (0..entry.base_len as Elem).collect();
            let key = canonical_key(&ext, &first);
            let j = gcat
                .iter()
                .position(|g| {
                    g.len() == ext.len()
                        && g.base_len == entry.base_len
                        && canonical_key(&g.ext, &first) == key
                })
                .expect("reduced template is in the target catalog");
            let hit = target
                .iter()
                .find(|t| t.site == e.site && t.template == j)
                .expect("site audited in the reduct");
            assert!(hit.witness.is_some(), "{:?} t{}", e.site, j);
            let image: ElementSet = e
                .site
                .iter()
                .chain(e.witness.as_ref().unwrap())
                .map(|x| m.id_of(x).unwrap())
                .collect();
            assert!(check_stronger(&search, m, &image, &ReductKind::Subgroup(s3())).unwrap());
            checked += 1;
        }
        assert!(checked > 0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn phi_is_functorial_and_raises_delta(seed in any::<u64>(), n in 3usize..8, rels in 0usize..10) {
            let mut r = rng(seed);
            let m = crate::random::random_structure(&mut r, &id3(), n, rels);
            let red = phi_reduct(&m, &s3()).unwrap();
            for mask in 0u32..1 << n {
                let s = ElementSet::from_mask(mask);
                let small = phi_reduct(&m.induced_substructure(&s).unwrap(), &s3()).unwrap();
                prop_assert_eq!(small.relation_name_set(), red.induced_substructure(&s).unwrap().relation_name_set());
                prop_assert!(delta(&m, &s) <= delta(&red, &s));
            }
        }
    }
}
