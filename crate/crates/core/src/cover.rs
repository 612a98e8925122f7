//! One-object extensions of connected groupoids and their morphisms.
//!
//! `extend_groupoid(g, i)` adds a star object whose carrier is a tagged copy
//! `O_i × {0}` of object `i`, together with tagged morphism records:
//!
//! | kind           | underlying       | tag | table              |
//! |----------------|------------------|-----|--------------------|
//! | `star_to_star` | `m ∈ M(i,i)`     | 0   | `(a,0) ↦ (f_m a,0)`|
//! | `base_to_star` | `m ∈ M(i,i)`     | 1   | `a ↦ (f_m a,0)`    |
//! | `base_to_star` | `m ∈ M(j,i)`     | 0   | `a ↦ (f_m a,0)`    |
//! | `star_to_base` | `m ∈ M(i,i)`     | 2   | `(a,0) ↦ f_m a`    |
//! | `star_to_base` | `m ∈ M(i,j)`     | 0   | `(a,0) ↦ f_m a`    |
//!
//! Star elements are indexed like the elements of `O_i`, so every record
//! table is literally the underlying base table.
//!
//! A cover morphism is a table between star carriers that intertwines the
//! star automorphism groups in both directions, taken up to
//! post-composition by the target's star automorphisms.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use crate::bound::SearchBound;
use crate::error::{check_identifier, Error, Result, StructuralError};
use crate::groupoid::{FiniteGroupoid, MorphismData, ObjectData, PermutationGroup};
use crate::report::{ValidationReport, Violation};
use crate::table::{all_functions, function_count, Table};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StarKind {
    StarToStar,
    BaseToStar,
    StarToBase,
}

impl StarKind {
    pub fn name(self) -> &'static str {
        match self {
            StarKind::StarToStar => "star_to_star",
            StarKind::BaseToStar => "base_to_star",
            StarKind::StarToBase => "star_to_base",
        }
    }

    pub fn parse(s: &str) -> Option<StarKind> {
        match s {
            "star_to_star" => Some(StarKind::StarToStar),
            "base_to_star" => Some(StarKind::BaseToStar),
            "star_to_base" => Some(StarKind::StarToBase),
            _ => None,
        }
    }
}

/// An element of the star carrier: a base label tagged with 0.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StarElement {
    pub base_label: String,
    pub tag: u8,
}

impl fmt::Display for StarElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.base_label, self.tag)
    }
}

/// A tagged morphism touching the star object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarRecord {
    pub kind: StarKind,
    /// Identifier of the underlying base morphism.
    pub underlying: String,
    pub tag: u8,
    /// Base-side object; `None` for `star_to_star`.
    pub object: Option<usize>,
    pub table: Table,
}

impl StarRecord {
    pub fn id(&self) -> String {
        format!("{}__{}__{}", self.kind.name(), self.underlying, self.tag)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtendedCover {
    base: FiniteGroupoid,
    base_object: usize,
    records: Vec<StarRecord>,
}

impl ExtendedCover {
    /// Assembles a cover from explicit records. Only structure is checked;
    /// hand-built (possibly invalid) structures go through here.
    /// Records are kept sorted by id.
    pub fn from_records(base: FiniteGroupoid, base_object: usize, mut records: Vec<StarRecord>) -> Result<Self, StructuralError> {
        if base_object >= base.object_count() {
            return Err(StructuralError::Unknown { what: "object index", id: base_object.to_string() });
        }
        let n = base.carrier_size(base_object);
        let mut ids = HashSet::new();
        for r in &records {
            check_identifier(&r.underlying)?;
            let id = r.id();
            if !ids.insert(id.clone()) {
                return Err(StructuralError::Duplicate { what: "star record", id });
            }
            let (dom, cod) = match (r.kind, r.object) {
                (StarKind::StarToStar, None) => (n, n),
                (StarKind::BaseToStar, Some(j)) if j < base.object_count() => (base.carrier_size(j), n),
                (StarKind::StarToBase, Some(j)) if j < base.object_count() => (n, base.carrier_size(j)),
                _ => {
                    return Err(StructuralError::Other(format!("record {id} has an inconsistent base-side object")));
                }
            };
            if r.table.len() != dom {
                return Err(StructuralError::NotTotal { id, detail: format!("table has {} entries, domain has {dom}", r.table.len()) });
            }
            if r.table.images().iter().any(|&x| x >= cod) {
                return Err(StructuralError::BadImage { id, from: "?".into(), to: "outside codomain".into() });
            }
        }
        records.sort_by_cached_key(StarRecord::id);
        Ok(ExtendedCover { base, base_object, records })
    }

    pub fn base(&self) -> &FiniteGroupoid {
        &self.base
    }

    pub fn base_object(&self) -> usize {
        self.base_object
    }

    pub fn records(&self) -> &[StarRecord] {
        &self.records
    }

    pub fn star_size(&self) -> usize {
        self.base.carrier_size(self.base_object)
    }

    /// Star element labels (the base object's labels).
    pub fn star_labels(&self) -> &[String] {
        self.base.carrier(self.base_object)
    }

    pub fn star_elements(&self) -> Vec<StarElement> {
        self.star_labels().iter().map(|l| StarElement { base_label: l.clone(), tag: 0 }).collect()
    }

    /// Identifier of the star object in [`ExtendedCover::total`].
    pub fn star_id(&self) -> String {
        let mut id = "star".to_string();
        while self.base.object_index(&id).is_ok() {
            id.push('_');
        }
        id
    }

    pub fn star_aut(&self) -> PermutationGroup {
        PermutationGroup {
            carrier: self.star_labels().to_vec(),
            elements: self.records_of(StarKind::StarToStar).map(|r| r.table.clone()).collect(),
        }
    }

    pub fn records_of(&self, kind: StarKind) -> impl Iterator<Item = &StarRecord> {
        self.records.iter().filter(move |r| r.kind == kind)
    }

    /// The base together with the star object, as a single groupoid.
    /// Returns it with the star object's index.
    pub fn total(&self) -> Result<(FiniteGroupoid, usize), StructuralError> {
        let star_id = self.star_id();
        let n = self.base.object_count();
        let mut objects: Vec<ObjectData> = self.base.objects().to_vec();
        objects.push(ObjectData { id: star_id.clone(), elements: self.star_labels().to_vec() });
        let mut morphisms: Vec<MorphismData> = self.base.morphisms().to_vec();
        for r in &self.records {
            let (src, dst) = match (r.kind, r.object) {
                (StarKind::StarToStar, _) => (n, n),
                (StarKind::BaseToStar, Some(j)) => (j, n),
                (StarKind::StarToBase, Some(j)) => (n, j),
                _ => unreachable!("checked on construction"),
            };
            morphisms.push(MorphismData { id: r.id(), src, dst, table: r.table.clone() });
        }
        let total = FiniteGroupoid::from_indexed(objects, morphisms)?;
        let star = total.object_index(&star_id)?;
        Ok((total, star))
    }

    /// Expected record count `3|M(i,i)| + Σ_{j≠i} (|M(i,j)| + |M(j,i)|)`.
    pub fn expected_record_count(base: &FiniteGroupoid, i: usize) -> usize {
        let mut count = 3 * base.hom(i, i).len();
        for j in (0..base.object_count()).filter(|&j| j != i) {
            count += base.hom(i, j).len() + base.hom(j, i).len();
        }
        count
    }

    /// Checks the cover invariants: the total structure is a connected
    /// groupoid restricting to the base, the record count law, and that the
    /// star automorphism group is the base object's group under tagging.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::ok();
        let (total, star) = match self.total() {
            Ok(t) => t,
            Err(e) => {
                report.push(Violation::new("total-structure", e.to_string(), vec![]));
                return report;
            }
        };
        for mut v in total.validate().violations {
            v.invariant = format!("total-{}", v.invariant);
            report.push(v);
        }
        if !total.is_connected() {
            report.push(Violation::new("total-connected", "total structure is not connected", vec![]));
        }
        let others: Vec<usize> = (0..total.object_count()).filter(|&k| k != star).collect();
        if total.full_subgroupoid(&others) != self.base {
            report.push(Violation::new("restriction", "restriction to the base objects differs from the base", vec![]));
        }
        let expected = Self::expected_record_count(&self.base, self.base_object);
        if self.records.len() != expected {
            report.push(Violation::new(
                "record-count",
                format!("{} star records, expected {}", self.records.len(), expected),
                vec![],
            ));
        }
        if self.star_aut().elements != self.base.aut_group(self.base_object).elements {
            report.push(Violation::new(
                "liaison-group",
                "star automorphisms are not the tagged automorphisms of the base object",
                vec![self.base.object_id(self.base_object).to_string()],
            ));
        }
        report
    }
}

/// The one-object extension of a connected groupoid at object `i`.
pub fn extend_groupoid(g: &FiniteGroupoid, i: usize) -> Result<ExtendedCover> {
    g.require_valid()?;
    g.require_connected()?;
    if i >= g.object_count() {
        return Err(StructuralError::Unknown { what: "object index", id: i.to_string() }.into());
    }
    let morphisms = g.morphisms();
    let mut records = Vec::new();
    let record = |kind, m: &MorphismData, tag, object| StarRecord {
        kind,
        underlying: m.id.clone(),
        tag,
        object,
        table: m.table.clone(),
    };
    for m in morphisms.iter().filter(|m| m.src == i && m.dst == i) {
        records.push(record(StarKind::StarToStar, m, 0, None));
    }
    for m in morphisms.iter().filter(|m| m.dst == i) {
        let tag = if m.src == i { 1 } else { 0 };
        records.push(record(StarKind::BaseToStar, m, tag, Some(m.src)));
    }
    for m in morphisms.iter().filter(|m| m.src == i) {
        let tag = if m.dst == i { 2 } else { 0 };
        records.push(record(StarKind::StarToBase, m, tag, Some(m.dst)));
    }
    let cover = ExtendedCover::from_records(g.clone(), i, records)?;
    debug_assert!(cover.validate().is_ok(), "{}", cover.validate());
    Ok(cover)
}

/// The base groupoid of a cover.
pub fn restrict_cover(v: &ExtendedCover) -> FiniteGroupoid {
    v.base.clone()
}

/// Desk analogue of star morphisms being definable from star elements: with
/// `c` a faithful base of the star, each star-involving record is determined
/// within its Hom-set by its kind, its base-side object, and its values on
/// `c` (preimages of `c` for records into the star).
pub fn star_determinacy_check(v: &ExtendedCover) -> ValidationReport {
    let c = v.star_aut().greedy_base();
    let mut report = ValidationReport::ok();
    type Key = (StarKind, Option<usize>, Vec<Vec<usize>>);
    let mut seen: HashMap<Key, String> = HashMap::new();
    for r in &v.records {
        let values: Vec<Vec<usize>> = match r.kind {
            StarKind::StarToStar | StarKind::StarToBase => c.iter().map(|&p| vec![r.table.apply(p)]).collect(),
            StarKind::BaseToStar => c
                .iter()
                .map(|&p| {
                    r.table
                        .images()
                        .iter()
                        .enumerate()
                        .filter(|(_, &x)| x == p)
                        .map(|(a, _)| a)
                        .collect()
                })
                .collect(),
        };
        let key = (r.kind, r.object, values);
        if let Some(prev) = seen.insert(key, r.id()) {
            report.push(Violation::new(
                "star-determinacy",
                format!("records {} and {} agree on the faithful base of the star", prev, r.id()),
                vec![prev, r.id()],
            ));
        }
    }
    report
}

/// A class of star tables modulo the target's star automorphisms.
#[derive(Clone, Debug)]
pub struct CoverMorphism {
    source: Arc<ExtendedCover>,
    target: Arc<ExtendedCover>,
    table: Table,
    canonical: Table,
}

impl PartialEq for CoverMorphism {
    fn eq(&self, other: &Self) -> bool {
        self.canonical == other.canonical && self.source == other.source && self.target == other.target
    }
}

impl Eq for CoverMorphism {}

impl CoverMorphism {
    pub fn new(source: Arc<ExtendedCover>, target: Arc<ExtendedCover>, table: Table) -> Result<Self, StructuralError> {
        if table.len() != source.star_size() {
            return Err(StructuralError::NotTotal {
                id: "cover-morphism".into(),
                detail: format!("table has {} entries, source star has {}", table.len(), source.star_size()),
            });
        }
        if let Some(pos) = table.images().iter().position(|&x| x >= target.star_size()) {
            return Err(StructuralError::BadImage {
                id: "cover-morphism".into(),
                from: source.star_labels()[pos].clone(),
                to: "outside the target star".into(),
            });
        }
        let canonical = canonical_rep(&target, &table);
        Ok(CoverMorphism { source, target, table, canonical })
    }

    pub fn identity(v: Arc<ExtendedCover>) -> Self {
        let n = v.star_size();
        CoverMorphism::new(v.clone(), v, Table::identity(n)).expect("identity is total")
    }

    pub fn source(&self) -> &Arc<ExtendedCover> {
        &self.source
    }

    pub fn target(&self) -> &Arc<ExtendedCover> {
        &self.target
    }

    /// The representative this value was built from.
    pub fn table(&self) -> &Table {
        &self.table
    }

    /// Least element of `{α ∘ table : α ∈ Aut(target star)}`.
    pub fn canonical_rep(&self) -> &Table {
        &self.canonical
    }

    /// Forward and backward intertwining of the star automorphism groups.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::ok();
        let a1 = self.source.star_aut().elements;
        let a2 = self.target.star_aut().elements;
        let t = &self.table;
        let src_labels = self.source.star_labels();
        for s1 in &a1 {
            let lhs = t.after(s1);
            if !a2.iter().any(|s2| s2.after(t) == lhs) {
                report.push(Violation::new(
                    "forward-intertwining",
                    format!("no target automorphism matches source automorphism [{}]", s1.render(src_labels, src_labels)),
                    vec![],
                ));
            }
        }
        let tgt_labels = self.target.star_labels();
        for s2 in &a2 {
            let rhs = s2.after(t);
            if !a1.iter().any(|s1| t.after(s1) == rhs) {
                report.push(Violation::new(
                    "backward-intertwining",
                    format!("no source automorphism matches target automorphism [{}]", s2.render(tgt_labels, tgt_labels)),
                    vec![],
                ));
            }
        }
        report
    }

    pub fn render(&self) -> String {
        self.canonical.render(self.source.star_labels(), self.target.star_labels())
    }
}

fn canonical_rep(target: &ExtendedCover, table: &Table) -> Table {
    target
        .star_aut()
        .elements
        .iter()
        .map(|a| a.after(table))
        .chain(std::iter::once(table.clone()))
        .min()
        .expect("nonempty")
}

/// `h ∘ g` as a class.
pub fn compose_cover_morphisms(g: &CoverMorphism, h: &CoverMorphism) -> Result<CoverMorphism> {
    if g.target != h.source {
        return Err(Error::Mismatch("target cover of the first morphism is not the source of the second".into()));
    }
    let out = CoverMorphism::new(g.source.clone(), h.target.clone(), h.table.after(&g.table))?;
    debug_assert!(!g.validate().is_ok() || !h.validate().is_ok() || out.validate().is_ok());
    Ok(out)
}

/// `Some(inverse)` when the table is a bijection.
pub fn is_cover_isomorphism(c: &CoverMorphism) -> Option<CoverMorphism> {
    if !c.table.is_bijection_onto(c.target.star_size()) {
        return None;
    }
    let inv = c.table.inverse()?;
    let out = CoverMorphism::new(c.target.clone(), c.source.clone(), inv).expect("inverse is total");
    debug_assert!(c.source.star_aut().conjugate_by(&c.table) == c.target.star_aut().elements);
    Some(out)
}

/// The isomorphism `extend(g, i) -> extend(g, j)` induced by the first
/// `α ∈ Hom(i, j)`: `(a,0) ↦ (f_α a, 0)`.
pub fn base_choice_transport(g: &FiniteGroupoid, i: usize, j: usize) -> Result<CoverMorphism> {
    let alpha = g
        .hom(i, j)
        .first()
        .map(|&m| g.morphisms()[m].table.clone())
        .ok_or(Error::Disconnected)?;
    let vi = Arc::new(extend_groupoid(g, i)?);
    let vj = Arc::new(extend_groupoid(g, j)?);
    let out = CoverMorphism::new(vi, vj, alpha)?;
    debug_assert!(is_cover_isomorphism(&out).is_some());
    Ok(out)
}

/// Every class of valid star tables `v1 -> v2`, by exhaustion.
pub fn enumerate_cover_morphisms(
    v1: &Arc<ExtendedCover>,
    v2: &Arc<ExtendedCover>,
    bound: &SearchBound,
) -> Result<Vec<CoverMorphism>> {
    let (n1, n2) = (v1.star_size(), v2.star_size());
    SearchBound::check("total star size", n1 + n2, bound.max_elements)?;
    SearchBound::check("candidate star tables", function_count(n1, n2), bound.max_tables)?;
    let mut classes: BTreeMap<Table, CoverMorphism> = BTreeMap::new();
    let mut rejected: BTreeSet<Table> = BTreeSet::new();
    for t in all_functions(n1, n2) {
        let c = CoverMorphism::new(v1.clone(), v2.clone(), t)?;
        if classes.contains_key(&c.canonical) || rejected.contains(&c.canonical) {
            continue;
        }
        // Validity is a class property: α ∘ t intertwines iff t does.
        if c.validate().is_ok() {
            classes.insert(c.canonical.clone(), c);
        } else {
            rejected.insert(c.canonical.clone());
        }
    }
    Ok(classes.into_values().collect())
}
