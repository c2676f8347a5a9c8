//! Moving between symmetry levels without disturbing relative predimension:
//! desymmetrization, relaxation and relaxed symmetrization, and the two
//! isomorphism-extension steps built from them.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::SymmetryGroup;
use crate::predim::{delta_table, Search};
use crate::set::{ElementSet, Mask};
use crate::structure::FiniteStructure;

#[derive(Clone, Debug)]
pub struct TransferResult {
    pub output: FiniteStructure,
    /// The added `w` points, in creation order.
    pub fresh_elements: Vec<String>,
    pub dimension_match_checked: bool,
}

fn check_arity(a: &FiniteStructure, b: &FiniteStructure) -> Result<()> {
    if a.arity() != b.arity() {
        return Err(Error::ArityMismatch {
            expected: a.arity(),
            found: b.arity(),
        });
    }
    Ok(())
}

fn require_trivial(m: &FiniteStructure) -> Result<()> {
    if !m.group().is_trivial() {
        return Err(Error::PreconditionFailed(format!(
            "{} must carry the trivial group",
            m.name()
        )));
    }
    Ok(())
}

/// Named relations of `m` with some entry outside `a`.
fn relations_outside(m: &FiniteStructure, a: &[String]) -> Result<Vec<Vec<String>>> {
    let a = m.set_of(a)?;
    Ok(m.relations()
        .iter()
        .filter(|r| !a.covers(r.entries()))
        .map(|r| {
            r.entries()
                .iter()
                .map(|&e| m.name_of(e).to_string())
                .collect()
        })
        .collect())
}

/// `w__` followed by the tuple's names, lengthened until unused.
fn fresh_name(tuple: &[String], taken: &BTreeSet<String>) -> String {
    let mut name = format!("w__{}", tuple.join("_"));
    while taken.contains(&name) {
        name.push('_');
    }
    name
}

/// Universe `B`; relations those of `a_ns` plus the lex-least member of each
/// orbit of `b` not inside `A`.
pub fn desymmetrize(b: &FiniteStructure, a_ns: &FiniteStructure) -> Result<TransferResult> {
    check_arity(b, a_ns)?;
    require_trivial(a_ns)?;
    let rels: Vec<Vec<String>> = a_ns
        .named_relations()
        .into_iter()
        .chain(relations_outside(b, a_ns.names())?)
        .collect();
    let output = FiniteStructure::from_named(
        &format!("desym_{}", b.name()),
        a_ns.group_arc().clone(),
        b.names().iter().cloned(),
        rels,
    )?;
    Ok(TransferResult {
        output,
        fresh_elements: Vec::new(),
        dimension_match_checked: false,
    })
}

/// One fresh `w` per relation outside `A`, named after the relation.
fn fresh_points(c: &FiniteStructure, a: &[String]) -> Result<Vec<(Vec<String>, String)>> {
    let mut taken: BTreeSet<String> = c.names().iter().cloned().collect();
    relations_outside(c, a)?
        .into_iter()
        .map(|t| {
            let w = fresh_name(&t, &taken);
            taken.insert(w.clone());
            Ok((t, w))
        })
        .collect()
}

/// Adds `w_ā` and `(w_ā, a₁, …, a_{n−1})` for every relation `ā` outside `A`.
pub fn relax(c: &FiniteStructure, a: &[String]) -> Result<TransferResult> {
    require_trivial(c)?;
    let fresh = fresh_points(c, a)?;
    let n = c.arity();
    let mut rels = c.named_relations();
    for (t, w) in &fresh {
        let mut r = vec![w.clone()];
        r.extend(t[..n - 1].iter().cloned());
        rels.push(r);
    }
    let names = c
        .names()
        .iter()
        .cloned()
        .chain(fresh.iter().map(|(_, w)| w.clone()));
    let output = FiniteStructure::from_named(
        &format!("rlx_{}", c.name()),
        c.group_arc().clone(),
        names,
        rels,
    )?;
    Ok(TransferResult {
        output,
        fresh_elements: fresh.into_iter().map(|(_, w)| w).collect(),
        dimension_match_checked: false,
    })
}

/// Universe `C ∪ W`; relations those of `a_g` plus `⟨w, a₁…a_{n−1}⟩` and
/// `⟨w, a₂…a_n⟩` for every relation of `c` outside `A`.
pub fn relaxed_symmetrize(c: &FiniteStructure, a_g: &FiniteStructure) -> Result<TransferResult> {
    check_arity(c, a_g)?;
    require_trivial(c)?;
    let fresh = fresh_points(c, a_g.names())?;
    let n = c.arity();
    let mut rels = a_g.named_relations();
    for (t, w) in &fresh {
        for part in [&t[..n - 1], &t[1..]] {
            let mut r = vec![w.clone()];
            r.extend(part.iter().cloned());
            rels.push(r);
        }
    }
    let names = c
        .names()
        .iter()
        .cloned()
        .chain(fresh.iter().map(|(_, w)| w.clone()));
    let output = FiniteStructure::from_named(
        &format!("sym_{}", c.name()),
        a_g.group_arc().clone(),
        names,
        rels,
    )?;
    Ok(TransferResult {
        output,
        fresh_elements: fresh.into_iter().map(|(_, w)| w).collect(),
        dimension_match_checked: false,
    })
}

/// [`desymmetrize`] followed by the sweep `δ_G(X / X∩A) = δ_ns(X / X∩A)` over
/// every `X ⊆ B`.
pub fn desymmetrize_checked(
    search: &Search,
    b: &FiniteStructure,
    a_ns: &FiniteStructure,
) -> Result<TransferResult> {
    let mut out = desymmetrize(b, a_ns)?;
    if let Some(x) = relative_delta_mismatch(search, b, &out.output, a_ns.names())? {
        return Err(Error::PostconditionFailed(format!(
            "relative predimension differs on {{{}}}",
            x.join(",")
        )));
    }
    out.dimension_match_checked = true;
    Ok(out)
}

/// [`relax`] followed by the check that `C` is self-sufficient in the output.
pub fn relax_checked(search: &Search, c: &FiniteStructure, a: &[String]) -> Result<TransferResult> {
    let mut out = relax(c, a)?;
    if !check_strong_copy(search, c, &out.output)? {
        return Err(Error::PostconditionFailed(format!(
            "{} is not strong in its relaxation",
            c.name()
        )));
    }
    out.dimension_match_checked = true;
    Ok(out)
}

/// [`relaxed_symmetrize`] followed by the comparison with the relaxation on
/// every set d-closed in either structure.
pub fn relaxed_symmetrize_checked(
    search: &Search,
    c: &FiniteStructure,
    a_g: &FiniteStructure,
) -> Result<TransferResult> {
    let mut out = relaxed_symmetrize(c, a_g)?;
    let b = relax(c, a_g.names())?.output;
    if let Some(x) = closed_relative_delta_mismatch(search, &b, &out.output, a_g.names())? {
        return Err(Error::PostconditionFailed(format!(
            "relative predimension differs on {{{}}}",
            x.join(",")
        )));
    }
    out.dimension_match_checked = true;
    Ok(out)
}

fn same_universe(a: &FiniteStructure, b: &FiniteStructure) -> Result<()> {
    if a.names() != b.names() {
        return Err(Error::PreconditionFailed(format!(
            "{} and {} have different universes",
            a.name(),
            b.name()
        )));
    }
    Ok(())
}

fn witness_names(m: &FiniteStructure, mask: usize) -> Vec<String> {
    m.names_of(&ElementSet::from_mask(mask as Mask))
}

/// First subset on which the two dimension functions differ. Both
/// structures must share their universe.
pub fn dim_mismatch(
    search: &Search,
    a: &FiniteStructure,
    b: &FiniteStructure,
) -> Result<Option<Error>> {
    same_universe(a, b)?;
    let (ta, tb) = (search.dim_table(a)?, search.dim_table(b)?);
    Ok(ta
        .iter()
        .zip(&tb)
        .position(|(x, y)| x != y)
        .map(|s| Error::DimMismatch {
            witness: witness_names(a, s),
            left: ta[s] as i64,
            right: tb[s] as i64,
        }))
}

fn relative(t: &[i8], y: usize, a: usize) -> i64 {
    t[y] as i64 - t[y & a] as i64
}

/// First `X ⊆ B` with `δ_b(X / X∩A) ≠ δ_d(X / X∩A)`.
pub fn relative_delta_mismatch(
    search: &Search,
    b: &FiniteStructure,
    d: &FiniteStructure,
    a: &[String],
) -> Result<Option<Vec<String>>> {
    same_universe(b, d)?;
    search.require(b.len())?;
    let am = b.set_of(a)?.to_mask() as usize;
    let (tb, td) = (delta_table(b), delta_table(d));
    Ok((0..tb.len())
        .find(|&y| relative(&tb, y, am) != relative(&td, y, am))
        .map(|y| witness_names(b, y)))
}

/// As [`relative_delta_mismatch`], restricted to sets d-closed in `b` or `d`.
pub fn closed_relative_delta_mismatch(
    search: &Search,
    b: &FiniteStructure,
    d: &FiniteStructure,
    a: &[String],
) -> Result<Option<Vec<String>>> {
    same_universe(b, d)?;
    let am = b.set_of(a)?.to_mask() as usize;
    let (db, dd) = (search.dim_table(b)?, search.dim_table(d)?);
    let (tb, td) = (delta_table(b), delta_table(d));
    let n = b.len();
    let closed = |t: &[i8], y: usize| (0..n).all(|x| y >> x & 1 == 1 || t[y | 1 << x] > t[y]);
    Ok((0..tb.len())
        .filter(|&y| closed(&db, y) || closed(&dd, y))
        .find(|&y| relative(&tb, y, am) != relative(&td, y, am))
        .map(|y| witness_names(b, y)))
}

/// `A` is induced in `m` as `a` and self-sufficient there.
fn check_strong_copy(search: &Search, a: &FiniteStructure, m: &FiniteStructure) -> Result<bool> {
    let s = m.set_of(a.names())?;
    if m.induced_substructure(&s)?.relation_name_set() != a.relation_name_set() {
        return Ok(false);
    }
    search.is_self_sufficient(m, &s)
}

#[derive(Clone, Debug)]
pub struct IsoExtension {
    pub b1: FiniteStructure,
    pub b2: FiniteStructure,
    /// Number of subsets on which the two dimension functions were compared.
    pub checked_subsets: usize,
}

fn isoext_preconditions(
    search: &Search,
    a1: &FiniteStructure,
    a2: &FiniteStructure,
    c: &FiniteStructure,
) -> Result<()> {
    check_arity(a1, a2)?;
    check_arity(a1, c)?;
    if a1.group() != c.group() {
        return Err(Error::PreconditionFailed(
            "A1 and C carry different groups".into(),
        ));
    }
    if let Some(e) = dim_mismatch(search, a1, a2)? {
        return Err(e);
    }
    if !check_strong_copy(search, a1, c)? {
        return Err(Error::NotStrongBase);
    }
    Ok(())
}

fn finish(
    search: &Search,
    b1: FiniteStructure,
    b2: FiniteStructure,
    a2: &FiniteStructure,
) -> Result<IsoExtension> {
    if let Some(e) = dim_mismatch(search, &b1, &b2)? {
        return Err(e);
    }
    if !check_strong_copy(search, a2, &b2)? {
        return Err(Error::PostconditionFailed(format!(
            "{} is not strong in {}",
            a2.name(),
            b2.name()
        )));
    }
    let checked_subsets = 1 << b1.len();
    Ok(IsoExtension {
        b1,
        b2,
        checked_subsets,
    })
}

/// From a G-structure `C ≥ A1` to the trivial-group side: `B1 = C`,
/// `B2 = desymmetrize(C, A2)`.
pub fn isoext_step_g_to_ns(
    search: &Search,
    a1: &FiniteStructure,
    a2: &FiniteStructure,
    c: &FiniteStructure,
) -> Result<IsoExtension> {
    require_trivial(a2)?;
    isoext_preconditions(search, a1, a2, c)?;
    let b2 = desymmetrize(c, a2)?.output;
    finish(search, c.clone(), b2, a2)
}

/// From a trivial-group `C ≥ A1` to the G side: `B1 = relax(C, A)`,
/// `B2 = relaxed_symmetrize(C, A2)`.
pub fn isoext_step_ns_to_g(
    search: &Search,
    a1: &FiniteStructure,
    a2: &FiniteStructure,
    c: &FiniteStructure,
) -> Result<IsoExtension> {
    require_trivial(a1)?;
    isoext_preconditions(search, a1, a2, c)?;
    let b1 = relax(c, a1.names())?.output;
    let b2 = relaxed_symmetrize(c, a2)?.output;
    finish(search, b1, b2, a2)
}

/// A canonical dimension-matched trivial-group partner of the G-structure
/// `a`: the desymmetrization over the empty base.
pub fn ns_partner(a: &FiniteStructure) -> Result<FiniteStructure> {
    let empty = FiniteStructure::empty("base", Arc::new(SymmetryGroup::trivial(a.arity())?));
    desymmetrize(a, &empty).map(|t| t.output)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::{pregeometry_isomorphic, Matroid};
    use crate::oracle;
    use crate::predim;
    use crate::random::{random_in_class, random_strong_extension, rng};
    use crate::structure::structure;
    use crate::testing::{id3, s3};
    use rand::Rng;

    fn names(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn desymmetrize_small_cases() {
        let a = structure::<3>("a", id3(), &["x", "y"], &[]).unwrap();
        let b = structure("b", s3(), &["x", "y", "z"], &[["z", "y", "x"]]).unwrap();
        let d = desymmetrize(&b, &a).unwrap().output;
        assert!(d.group().is_trivial());
        assert_eq!(
            d.relation_name_set(),
            [names(&["x", "y", "z"])].into_iter().collect()
        );
        let a_full = structure("a", id3(), &["x", "y", "z"], &[["y", "x", "z"]]).unwrap();
        let d = desymmetrize(&b, &a_full).unwrap().output;
        assert_eq!(d.relation_name_set(), a_full.relation_name_set());
        let wrong = structure::<2>(
            "w",
            Arc::new(SymmetryGroup::trivial(2).unwrap()),
            &["x"],
            &[],
        )
        .unwrap();
        assert!(matches!(
            desymmetrize(&b, &wrong),
            Err(Error::ArityMismatch { .. })
        ));
    }

    #[test]
    fn relax_small_cases() {
        let c = structure("c", id3(), &["x", "y", "z"], &[["x", "y", "z"]]).unwrap();
        let out = relax(&c, &names(&["x", "y", "z"])).unwrap();
        assert_eq!(out.output.relation_name_set(), c.relation_name_set());
        let out = relax(&c, &[]).unwrap();
        let r = &out.output;
        assert_eq!((r.len(), r.relations().len()), (4, 2));
        assert_eq!(predim::delta(r, &r.universe()), 2);
        assert_eq!(out.fresh_elements, names(&["w__x_y_z"]));
        assert!(r
            .relation_name_set()
            .contains(&names(&["w__x_y_z", "x", "y"])));
        assert!(predim::is_self_sufficient(r, &r.set_of(c.names()).unwrap()).unwrap());
    }

    #[test]
    fn relaxed_symmetrize_small_case() {
        let c = structure("c", id3(), &["x", "y", "z"], &[["x", "y", "z"]]).unwrap();
        let empty = FiniteStructure::empty("e", s3());
        let out = relaxed_symmetrize(&c, &empty).unwrap();
        let d = &out.output;
        assert_eq!((d.len(), d.relations().len()), (4, 2));
        assert_eq!(predim::delta(d, &d.universe()), 2);
        assert!(d.group().is_full());
    }

    #[test]
    fn desymmetrization_preserves_relative_delta() {
        let mut r = rng(21);
        let search = Search::default();
        for _ in 0..25 {
            let k = r.gen_range(0..4);
            let rels = r.gen_range(0..2);
            let a = random_in_class(&mut r, &s3(), k, rels);
            let extra = r.gen_range(1..5);
            let rels = r.gen_range(0..5);
            let b = random_strong_extension(&mut r, &a, "n", extra, rels);
            let a_ns = ns_partner(&a).unwrap();
            let d = desymmetrize(&b, &a_ns).unwrap().output;
            assert_eq!(
                relative_delta_mismatch(&search, &b, &d, a.names()).unwrap(),
                None
            );
            // naive check of the same equality
            let am = b.set_of(a.names()).unwrap();
            for s in 0u32..1 << b.len() {
                let x = ElementSet::from_mask(s);
                let xa = x.intersection(&am);
                let lhs = oracle::delta(&b, x.as_slice()) - oracle::delta(&b, xa.as_slice());
                let rhs = oracle::delta(&d, x.as_slice()) - oracle::delta(&d, xa.as_slice());
                assert_eq!(lhs, rhs);
            }
            assert!(predim::in_class(&d).unwrap());
            assert!(predim::is_self_sufficient(&d, &am).unwrap());
        }
    }

    #[test]
    fn isoext_trivial_steps() {
        let search = Search::default();
        let a1 = structure("a", s3(), &["x", "y", "z"], &[["x", "y", "z"]]).unwrap();
        let a2 = ns_partner(&a1).unwrap();
        let step = isoext_step_g_to_ns(&search, &a1, &a2, &a1).unwrap();
        assert_eq!(step.b2.relation_name_set(), a2.relation_name_set());
        let step = isoext_step_ns_to_g(&search, &a2, &a1, &a2).unwrap();
        assert_eq!(step.b1.relation_name_set(), a2.relation_name_set());
        assert_eq!(step.b2.relation_name_set(), a1.relation_name_set());
        let empty_g = FiniteStructure::empty("e", s3());
        let empty_ns = FiniteStructure::empty("e", id3());
        let one = structure("c", s3(), &["x", "y", "z"], &[["x", "y", "z"]]).unwrap();
        let step = isoext_step_g_to_ns(&search, &empty_g, &empty_ns, &one).unwrap();
        assert_eq!(step.b2.relations().len(), 1);
    }

    #[test]
    fn isoext_single_new_relation() {
        let search = Search::default();
        let a1 = structure::<3>("a", id3(), &["x", "y"], &[]).unwrap();
        let a2 = structure::<3>("a", s3(), &["x", "y"], &[]).unwrap();
        let c = structure("c", id3(), &["x", "y", "z"], &[["z", "x", "y"]]).unwrap();
        let step = isoext_step_ns_to_g(&search, &a1, &a2, &c).unwrap();
        assert_eq!(step.b1.len(), 4);
        assert_eq!(step.b2.relations().len(), 2);
        for s in 0u32..1 << 4 {
            let x = ElementSet::from_mask(s);
            assert_eq!(oracle::dim(&step.b1, &x), oracle::dim(&step.b2, &x));
        }
    }

    #[test]
    fn isoext_rejects_mismatched_seeds() {
        let search = Search::default();
        let a1 = structure("a", s3(), &["x", "y", "z"], &[["x", "y", "z"]]).unwrap();
        let a2 = structure::<3>("a", id3(), &["x", "y", "z"], &[]).unwrap();
        match isoext_step_g_to_ns(&search, &a1, &a2, &a1) {
            Err(Error::DimMismatch {
                witness,
                left,
                right,
            }) => {
                assert_eq!(witness, names(&["x", "y", "z"]));
                assert_eq!((left, right), (2, 3));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn random_isoext_steps_and_pregeometries() {
        let mut r = rng(4);
        let search = Search::default();
        for _ in 0..15 {
            let k = r.gen_range(0..4);
            let rels = r.gen_range(0..2);
            let a1 = random_in_class(&mut r, &s3(), k, rels);
            let a2 = ns_partner(&a1).unwrap();
            let (extra, rels) = (r.gen_range(1..4), r.gen_range(0..4));
            let c = random_strong_extension(&mut r, &a1, "c", extra, rels);
            let step = isoext_step_g_to_ns(&search, &a1, &a2, &c).unwrap();
            assert!(step.b2.len() <= 10);
            let m1 = Matroid::new(&step.b1, search);
            let m2 = Matroid::new(&step.b2, search);
            assert!(pregeometry_isomorphic(&m1, &m2).unwrap().is_some());

            let (extra, rels) = (r.gen_range(1..3), r.gen_range(0..3));
            let c_ns = random_strong_extension(&mut r, &a2, "d", extra, rels);
            let step = isoext_step_ns_to_g(&search, &a2, &a1, &c_ns).unwrap();
            assert_eq!(
                closed_relative_delta_mismatch(&search, &step.b1, &step.b2, a1.names()).unwrap(),
                None
            );
        }
    }
}
