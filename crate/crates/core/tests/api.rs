//! End-to-end use of the public API: parse, compute, transform, serialize.

use fh_core::amalgam::{simple_amalgam, verify_simple_amalgam};
use fh_core::exquisite::{base_exquisite_3, collisions};
use fh_core::format::{parse_structure, parse_type, serialize_structure, serialize_type};
use fh_core::reducts::{exquisite_reduct, phi_reduct};
use fh_core::{predim, Search, SymmetryGroup};
use std::sync::Arc;

const TWO_TRIPLES: &str = "\
structure P
arity 3
group sym
elements a b c d
rel a b c
rel b c d
end
";

#[test]
fn parse_compute_serialize() {
    let m = parse_structure(TWO_TRIPLES).unwrap();
    let s = Search::default();
    assert_eq!(predim::delta(&m, &m.universe()), 2);
    assert_eq!(
        s.dim(&m, &m.set_of(&["b".to_string(), "c".to_string()]).unwrap())
            .unwrap(),
        2
    );
    assert!(s.in_class(&m).unwrap());
    let again = parse_structure(&serialize_structure(&m)).unwrap();
    assert_eq!(serialize_structure(&again), serialize_structure(&m));
}

#[test]
fn amalgam_then_reduct() {
    let s = Search::default();
    let b1 = parse_structure(TWO_TRIPLES).unwrap();
    let b2 = parse_structure(
        &TWO_TRIPLES
            .replace("a b c\n", "a e f\n")
            .replace("b c d", "e f g")
            .replace("a b c d", "a e f g"),
    )
    .unwrap();
    let over = vec!["a".to_string()];
    let d = simple_amalgam(&b1, &b2, &over).unwrap();
    assert!(verify_simple_amalgam(&d, &b1, &b2, &over).unwrap().holds);
    assert_eq!(d.len(), 7);
    assert!(s.in_class(&d).unwrap());

    let ns = phi_reduct(
        &parse_structure(&TWO_TRIPLES.replace("group sym", "group id")).unwrap(),
        &Arc::new(SymmetryGroup::full(3).unwrap()),
    )
    .unwrap();
    assert_eq!(ns.relations().len(), 2);
}

#[test]
fn exquisite_type_round_trip() {
    let q = base_exquisite_3();
    let back = parse_type(&serialize_type(&q)).unwrap();
    assert_eq!(serialize_type(&back), serialize_type(&q));
    let host = q.canonical_structure();
    let rep = collisions(&host, &q).unwrap();
    assert_eq!(rep.c, 0);
    let f = exquisite_reduct(&host, &q).unwrap();
    assert_eq!(f.relations().len(), 1);
}
