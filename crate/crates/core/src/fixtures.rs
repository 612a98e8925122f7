//! Small named groupoids used throughout the tests and by `gpdkit laws`.
//!
//! * `triv1`: one object `dot` with carrier `{a}`.
//! * `z2`: one object `dot` with carrier `{a, b}` and the swap.
//! * `rigid2`: objects `i = {x, y}`, `j = {u, v}`, trivial automorphism
//!   groups and a single bijection each way.
//! * `tors2`: objects `i = {a, b}`, `j = {c, d}`, every bijection between
//!   them (8 morphisms).

use std::sync::Arc;

use crate::cover::{extend_groupoid, ExtendedCover, StarKind, StarRecord};
use crate::family::{default_section, family_from_components, relative_extend, ExtraRecord, FamilyCover, FamilyMorphism, Node};
use crate::groupoid::{closure_from_generators, FiniteGroupoid, GroupoidBuilder, MorphismData, ObjectData};
use crate::table::Table;

pub fn triv1() -> FiniteGroupoid {
    GroupoidBuilder::new()
        .object("dot", ["a"])
        .morphism("id_dot", "dot", "dot", [("a", "a")])
        .build()
        .expect("fixture")
}

pub fn z2() -> FiniteGroupoid {
    GroupoidBuilder::new()
        .object("dot", ["a", "b"])
        .morphism("id_dot", "dot", "dot", [("a", "a"), ("b", "b")])
        .morphism("swap", "dot", "dot", [("a", "b"), ("b", "a")])
        .build()
        .expect("fixture")
}

pub fn rigid2() -> FiniteGroupoid {
    GroupoidBuilder::new()
        .object("i", ["x", "y"])
        .object("j", ["u", "v"])
        .morphism("id_i", "i", "i", [("x", "x"), ("y", "y")])
        .morphism("id_j", "j", "j", [("u", "u"), ("v", "v")])
        .morphism("r_ij", "i", "j", [("x", "u"), ("y", "v")])
        .morphism("r_ji", "j", "i", [("u", "x"), ("v", "y")])
        .build()
        .expect("fixture")
}

pub fn tors2() -> FiniteGroupoid {
    GroupoidBuilder::new()
        .object("i", ["a", "b"])
        .object("j", ["c", "d"])
        .morphism("id_i", "i", "i", [("a", "a"), ("b", "b")])
        .morphism("swap_i", "i", "i", [("a", "b"), ("b", "a")])
        .morphism("id_j", "j", "j", [("c", "c"), ("d", "d")])
        .morphism("swap_j", "j", "j", [("c", "d"), ("d", "c")])
        .morphism("t_ij0", "i", "j", [("a", "c"), ("b", "d")])
        .morphism("t_ij1", "i", "j", [("a", "d"), ("b", "c")])
        .morphism("t_ji0", "j", "i", [("c", "a"), ("d", "b")])
        .morphism("t_ji1", "j", "i", [("c", "b"), ("d", "a")])
        .build()
        .expect("fixture")
}

/// `tors2` regenerated from the swap at `i` and one bijection `i -> j`.
pub fn tors2_from_seeds() -> FiniteGroupoid {
    let objects = vec![
        ObjectData { id: "i".into(), elements: vec!["a".into(), "b".into()] },
        ObjectData { id: "j".into(), elements: vec!["c".into(), "d".into()] },
    ];
    let seeds = vec![
        MorphismData { id: "swap_i".into(), src: 0, dst: 0, table: Table::new(vec![1, 0]) },
        MorphismData { id: "t".into(), src: 0, dst: 1, table: Table::new(vec![0, 1]) },
    ];
    closure_from_generators(objects, seeds).expect("fixture")
}

/// The connected fixtures, by name.
pub fn corpus() -> Vec<(&'static str, FiniteGroupoid)> {
    vec![("TRIV1", triv1()), ("Z2", z2()), ("RIGID2", rigid2()), ("TORS2", tors2())]
}

/// `z2 ⊔ rigid2`: two components, `dot` first.
pub fn z2_plus_rigid2() -> FiniteGroupoid {
    z2().disjoint_union(&rigid2()).expect("fixture")
}

/// Disjoint union of prefixed copies, one per prefix.
pub fn copies(g: &FiniteGroupoid, prefixes: &[&str]) -> FiniteGroupoid {
    let mut parts = prefixes.iter().map(|p| g.with_prefix(p).expect("fixture"));
    let first = parts.next().expect("at least one copy");
    parts.fold(first, |acc, part| acc.disjoint_union(&part).expect("fixture"))
}

/// `z2` extended at `dot`, plus a spurious `base_to_star` record `ghost`
/// that breaks star determinacy. Not a groupoid.
pub fn ghost_cover() -> ExtendedCover {
    let v = extend_groupoid(&z2(), 0).expect("fixture");
    let mut records = v.records().to_vec();
    records.push(StarRecord {
        kind: StarKind::BaseToStar,
        underlying: "ghost".into(),
        tag: 1,
        object: Some(0),
        table: Table::identity(2),
    });
    ExtendedCover::from_records(z2(), 0, records).expect("fixture")
}

/// Two `z2` fibres whose stars are tied together by an extra record `cross`.
pub fn crossing_family_cover() -> FamilyCover {
    let fam = family_from_components(&copies(&z2(), &["p_", "q_"]));
    relative_extend(&fam, &default_section(&fam))
        .expect("fixture")
        .with_extra_records(vec![ExtraRecord {
            id: "cross".into(),
            from: Node::Star(0),
            to: Node::Star(1),
            table: Table::identity(2),
        }])
        .expect("fixture")
}

/// A cover-side family morphism on `z2 ⊔ rigid2` that swaps points between
/// the two stars.
pub fn fibre_crossing_morphism() -> FamilyMorphism {
    let fam = family_from_components(&z2_plus_rigid2());
    let fc = Arc::new(relative_extend(&fam, &default_section(&fam)).expect("fixture"));
    let n = fc.star_total().len();
    let mut table: Vec<usize> = (0..n).collect();
    table.swap(0, n - 1);
    FamilyMorphism::Cover { source: fc.clone(), target: fc, table }
}
