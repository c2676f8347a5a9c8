//! Free joins over a shared part and the additivity check that defines a
//! simple amalgam.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::predim::HARD_BOUND;
use crate::set::ElementSet;
use crate::structure::FiniteStructure;

fn name_set(m: &FiniteStructure) -> BTreeSet<&str> {
    m.names().iter().map(String::as_str).collect()
}

fn check_compatible(b1: &FiniteStructure, b2: &FiniteStructure) -> Result<()> {
    if b1.arity() != b2.arity() {
        return Err(Error::ArityMismatch {
            expected: b1.arity(),
            found: b2.arity(),
        });
    }
    if b1.group() != b2.group() {
        return Err(Error::PreconditionFailed(format!(
            "{} and {} carry different groups",
            b1.name(),
            b2.name()
        )));
    }
    Ok(())
}

/// The induced structure on `over`, as a set of named relations.
fn trace(m: &FiniteStructure, over: &[String]) -> Result<BTreeSet<Vec<String>>> {
    let s = m.set_of(over)?;
    Ok(m.induced_substructure(&s)?.relation_name_set())
}

/// The free join of `b1` and `b2` over the elements named in `over`.
pub fn simple_amalgam(
    b1: &FiniteStructure,
    b2: &FiniteStructure,
    over: &[String],
) -> Result<FiniteStructure> {
    check_compatible(b1, b2)?;
    let a: BTreeSet<&str> = over.iter().map(String::as_str).collect();
    let common: BTreeSet<&str> = name_set(b1).intersection(&name_set(b2)).copied().collect();
    if let Some(missing) = a.iter().find(|x| !common.contains(*x)) {
        return Err(Error::UnknownElement(missing.to_string()));
    }
    let extra: Vec<&str> = common.difference(&a).copied().collect();
    if !extra.is_empty() {
        return Err(Error::OverlapNotA(extra.join(",")));
    }
    if trace(b1, over)? != trace(b2, over)? {
        return Err(Error::SharedMismatch(format!(
            "{} vs {}",
            b1.name(),
            b2.name()
        )));
    }
    let names = b1
        .names()
        .iter()
        .chain(b2.names())
        .cloned()
        .collect::<BTreeSet<_>>();
    let rels = b1
        .relation_name_set()
        .into_iter()
        .chain(b2.relation_name_set());
    FiniteStructure::from_named(
        &format!("{}+{}", b1.name(), b2.name()),
        b1.group_arc().clone(),
        names,
        rels,
    )
}

/// Folds [`simple_amalgam`] over `parts`; the result does not depend on the
/// order of the parts except through its name.
pub fn iterated_amalgam(parts: &[FiniteStructure], over: &[String]) -> Result<FiniteStructure> {
    let (first, rest) = parts
        .split_first()
        .ok_or_else(|| Error::PreconditionFailed("no parts to amalgamate".into()))?;
    let mut d = first.clone();
    for b in rest {
        d = simple_amalgam(&d, b, over)?;
    }
    Ok(d)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AmalgamCheck {
    pub holds: bool,
    /// A set `A ⊆ X ⊆ D` on which additivity fails.
    pub witness: Option<Vec<String>>,
}

/// Checks that `d` is a simple amalgam of `b1` and `b2` over `over`:
/// universes and induced parts are preconditions, additivity is swept over
/// every `X` between `A` and `D`.
pub fn verify_simple_amalgam(
    d: &FiniteStructure,
    b1: &FiniteStructure,
    b2: &FiniteStructure,
    over: &[String],
) -> Result<AmalgamCheck> {
    check_compatible(d, b1)?;
    check_compatible(d, b2)?;
    let (n1, n2) = (name_set(b1), name_set(b2));
    let a: BTreeSet<&str> = over.iter().map(String::as_str).collect();
    if n1.intersection(&n2).copied().collect::<BTreeSet<_>>() != a {
        return Err(Error::PreconditionFailed("B1 ∩ B2 differs from A".into()));
    }
    if n1.union(&n2).copied().collect::<BTreeSet<_>>() != name_set(d) {
        return Err(Error::PreconditionFailed(
            "universe of D differs from B1 ∪ B2".into(),
        ));
    }
    for b in [b1, b2] {
        let s = d.set_of(b.names())?;
        if d.induced_substructure(&s)?.relation_name_set() != b.relation_name_set() {
            return Err(Error::PreconditionFailed(format!(
                "{} is not induced in D",
                b.name()
            )));
        }
    }
    let in_a: Vec<bool> = d.names().iter().map(|x| a.contains(x.as_str())).collect();
    let outside: Vec<u32> = (0..d.len() as u32).filter(|&e| !in_a[e as usize]).collect();
    if outside.len() > HARD_BOUND {
        return Err(Error::SearchBoundExceeded {
            size: outside.len(),
            bound: HARD_BOUND,
        });
    }
    let local: Vec<Option<usize>> = {
        let mut v = vec![None; d.len()];
        for (i, &e) in outside.iter().enumerate() {
            v[e as usize] = Some(i);
        }
        v
    };
    let side1: Vec<bool> = d.names().iter().map(|x| n1.contains(x.as_str())).collect();
    // Relations meeting both B1 \ A and B2 \ A; any of them breaks additivity
    // exactly on the X containing it.
    let cross: Vec<u64> = d
        .relations()
        .iter()
        .filter_map(|r| {
            let out: Vec<u32> = r
                .entries()
                .iter()
                .copied()
                .filter(|&e| !in_a[e as usize])
                .collect();
            let l = out.iter().any(|&e| side1[e as usize]);
            let rgt = out.iter().any(|&e| !side1[e as usize]);
            (l && rgt).then(|| {
                out.iter()
                    .fold(0u64, |m, &e| m | 1 << local[e as usize].expect("outside A"))
            })
        })
        .collect();
    let found = (0u64..1 << outside.len()).find(|x| cross.iter().any(|&c| c & !x == 0));
    Ok(match found {
        None => AmalgamCheck {
            holds: true,
            witness: None,
        },
        Some(x) => {
            let set: ElementSet = (0..d.len() as u32)
                .filter(|&e| in_a[e as usize] || local[e as usize].is_some_and(|i| x >> i & 1 == 1))
                .collect();
            AmalgamCheck {
                holds: false,
                witness: Some(d.names_of(&set)),
            }
        }
    })
}
