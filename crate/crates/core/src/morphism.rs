//! Morphisms of connected groupoids.
//!
//! A morphism `G1 -> G2` is an indexed family of functions
//! `O_{1,i1} -> O_{2,i2}` such that
//!
//! * (A) for any two members `p` over `(i1, i2)` and `q` over `(j1, j2)`,
//!   `q ∘ Hom1(i1, j1) = Hom2(i2, j2) ∘ p` as sets of functions;
//! * (B) post-composing a member with a target morphism gives a member.
//!
//! Two morphisms are equal when their sets of `(src, dst, table)` triples
//! are equal; the index set is presentation only.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::sync::Arc;

use crate::bound::SearchBound;
use crate::error::{Error, Result, StructuralError};
use crate::groupoid::{closure_from_generators, FiniteGroupoid, MorphismData, ObjectData};
use crate::report::{ValidationReport, Violation};
use crate::table::{all_bijections, all_functions, function_count, Table};

/// `(source object, target object, table)`.
pub type FunctionTriple = (usize, usize, Table);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionEntry {
    pub index: String,
    pub src: usize,
    pub dst: usize,
    pub table: Table,
}

#[derive(Clone, Debug)]
pub struct GroupoidMorphism {
    source: Arc<FiniteGroupoid>,
    target: Arc<FiniteGroupoid>,
    entries: Vec<FunctionEntry>,
    function_set: BTreeSet<FunctionTriple>,
}

impl PartialEq for GroupoidMorphism {
    fn eq(&self, other: &Self) -> bool {
        self.function_set == other.function_set && self.source == other.source && self.target == other.target
    }
}

impl Eq for GroupoidMorphism {}

impl GroupoidMorphism {
    /// Checks that every entry is a total map between the right carriers.
    pub fn new(
        source: Arc<FiniteGroupoid>,
        target: Arc<FiniteGroupoid>,
        entries: Vec<FunctionEntry>,
    ) -> Result<Self, StructuralError> {
        let mut seen = HashSet::new();
        for e in &entries {
            if !seen.insert(e.index.as_str()) {
                return Err(StructuralError::Duplicate { what: "index", id: e.index.clone() });
            }
            if e.src >= source.object_count() || e.dst >= target.object_count() {
                return Err(StructuralError::Unknown { what: "object index", id: e.index.clone() });
            }
            let (n, m) = (source.carrier_size(e.src), target.carrier_size(e.dst));
            if e.table.len() != n {
                return Err(StructuralError::NotTotal {
                    id: e.index.clone(),
                    detail: format!("table has {} entries, domain has {}", e.table.len(), n),
                });
            }
            if let Some(pos) = e.table.images().iter().position(|&x| x >= m) {
                return Err(StructuralError::BadImage {
                    id: e.index.clone(),
                    from: source.carrier(e.src)[pos].clone(),
                    to: format!("#{}", e.table.apply(pos)),
                });
            }
        }
        let function_set = entries.iter().map(|e| (e.src, e.dst, e.table.clone())).collect();
        Ok(GroupoidMorphism { source, target, entries, function_set })
    }

    /// Morphism presented by its function set, indexed `n0, n1, …`.
    pub fn from_function_set(
        source: Arc<FiniteGroupoid>,
        target: Arc<FiniteGroupoid>,
        set: BTreeSet<FunctionTriple>,
    ) -> Result<Self, StructuralError> {
        let entries = set
            .into_iter()
            .enumerate()
            .map(|(k, (src, dst, table))| FunctionEntry { index: format!("n{k}"), src, dst, table })
            .collect();
        Self::new(source, target, entries)
    }

    pub fn source(&self) -> &Arc<FiniteGroupoid> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteGroupoid> {
        &self.target
    }

    pub fn entries(&self) -> &[FunctionEntry] {
        &self.entries
    }

    pub fn function_set(&self) -> &BTreeSet<FunctionTriple> {
        &self.function_set
    }

    /// Distinct tables over one object pair.
    pub fn tables_over(&self, i1: usize, i2: usize) -> impl Iterator<Item = &Table> {
        self.function_set.iter().filter(move |(s, d, _)| *s == i1 && *d == i2).map(|(_, _, t)| t)
    }

    /// Conditions (A), (B) and totality.
    pub fn validate(&self) -> ValidationReport {
        validate_function_set(&self.source, &self.target, &self.function_set, |t| self.index_of(t))
    }

    fn index_of(&self, triple: &FunctionTriple) -> String {
        self.entries
            .iter()
            .find(|e| e.src == triple.0 && e.dst == triple.1 && e.table == triple.2)
            .map(|e| e.index.clone())
            .unwrap_or_default()
    }

    pub fn describe_triple(&self, (s, d, t): &FunctionTriple) -> String {
        format!(
            "{} -> {} [{}]",
            self.source.object_id(*s),
            self.target.object_id(*d),
            t.render(self.source.carrier(*s), self.target.carrier(*d))
        )
    }

    /// Some table bijective iff all are iff the morphism is invertible.
    /// Returns the inverse (inverted tables, flipped legs) when it exists.
    pub fn inverse(&self) -> Option<GroupoidMorphism> {
        let first = self.entries.first()?;
        if !first.table.is_bijection_onto(self.target.carrier_size(first.dst)) {
            return None;
        }
        let entries = self
            .entries
            .iter()
            .map(|e| {
                Some(FunctionEntry { index: e.index.clone(), src: e.dst, dst: e.src, table: e.table.inverse()? })
            })
            .collect::<Option<Vec<_>>>()?;
        Some(
            GroupoidMorphism::new(self.target.clone(), self.source.clone(), entries)
                .expect("inverted tables are total"),
        )
    }
}

fn validate_function_set(
    source: &FiniteGroupoid,
    target: &FiniteGroupoid,
    set: &BTreeSet<FunctionTriple>,
    name: impl Fn(&FunctionTriple) -> String,
) -> ValidationReport {
    let mut report = ValidationReport::ok();
    let hom1 = hom_cache(source);
    let hom2 = hom_cache(target);
    let n1 = source.object_count();
    let n2 = target.object_count();

    for p in set {
        for q in set {
            let lhs: BTreeSet<Table> = hom1[p.0 * n1 + q.0].iter().map(|g| q.2.after(g)).collect();
            let rhs: BTreeSet<Table> = hom2[p.1 * n2 + q.1].iter().map(|d| d.after(&p.2)).collect();
            if lhs != rhs {
                report.push(Violation::new(
                    "condition-A",
                    format!(
                        "{} ∘ Hom({}, {}) has {} functions, Hom({}, {}) ∘ {} has {}, and they differ",
                        name(q),
                        source.object_id(p.0),
                        source.object_id(q.0),
                        lhs.len(),
                        target.object_id(p.1),
                        target.object_id(q.1),
                        name(p),
                        rhs.len()
                    ),
                    vec![name(p), name(q)],
                ));
            }
        }
    }
    for p in set {
        for m in target.morphisms().iter().filter(|m| m.src == p.1) {
            let want = (p.0, m.dst, m.table.after(&p.2));
            if !set.contains(&want) {
                report.push(Violation::new(
                    "condition-B",
                    format!("{} ∘ {} is not a member", m.id, name(p)),
                    vec![name(p), m.id.clone()],
                ));
            }
        }
    }
    for i1 in 0..n1 {
        for i2 in 0..n2 {
            if !set.iter().any(|t| t.0 == i1 && t.1 == i2) {
                report.push(Violation::new(
                    "totality",
                    format!("no function from {} to {}", source.object_id(i1), target.object_id(i2)),
                    vec![source.object_id(i1).to_string(), target.object_id(i2).to_string()],
                ));
            }
        }
    }
    report
}

fn hom_cache(g: &FiniteGroupoid) -> Vec<Vec<Table>> {
    let n = g.object_count();
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            out.push(g.hom_table_set(i, j).into_iter().collect());
        }
    }
    out
}

/// Closes the seeds under pre-composition by source Hom-tables and
/// post-composition by target Hom-tables.
pub fn saturate_set(source: &FiniteGroupoid, target: &FiniteGroupoid, seeds: &[FunctionTriple]) -> BTreeSet<FunctionTriple> {
    let mut set: BTreeSet<FunctionTriple> = BTreeSet::new();
    let mut stack: Vec<FunctionTriple> = Vec::new();
    for s in seeds {
        if set.insert(s.clone()) {
            stack.push(s.clone());
        }
    }
    while let Some((s, d, t)) = stack.pop() {
        for m in source.morphisms().iter().filter(|m| m.dst == s) {
            let next = (m.src, d, t.after(&m.table));
            if set.insert(next.clone()) {
                stack.push(next);
            }
        }
        for m in target.morphisms().iter().filter(|m| m.src == d) {
            let next = (s, m.dst, m.table.after(&t));
            if set.insert(next.clone()) {
                stack.push(next);
            }
        }
    }
    set
}

/// Smallest morphism containing the seeds, or an error carrying the first
/// violation of (A) after saturation.
pub fn saturate_morphism(
    source: Arc<FiniteGroupoid>,
    target: Arc<FiniteGroupoid>,
    seeds: &[FunctionTriple],
) -> Result<GroupoidMorphism> {
    if seeds.is_empty() {
        return Err(Error::Mismatch("at least one seed is required".into()));
    }
    source.require_connected()?;
    target.require_connected()?;
    // structural check of the seeds themselves
    GroupoidMorphism::from_function_set(source.clone(), target.clone(), seeds.iter().cloned().collect())?;
    let set = saturate_set(&source, &target, seeds);
    let h = GroupoidMorphism::from_function_set(source, target, set)?;
    let report = h.validate();
    match report.first() {
        None => Ok(h),
        Some(v) => Err(Error::NoMorphismContainsSeed(v.message.clone())),
    }
}

/// The family of all of `g`'s own tables, indexed by its morphisms.
pub fn identity_morphism(g: Arc<FiniteGroupoid>) -> GroupoidMorphism {
    let entries = g
        .morphisms()
        .iter()
        .map(|m| FunctionEntry { index: m.id.clone(), src: m.src, dst: m.dst, table: m.table.clone() })
        .collect();
    GroupoidMorphism::new(g.clone(), g, entries).expect("groupoid tables are total")
}

/// `h ∘ g`, indexed by the fibred product over the middle objects.
pub fn compose_morphism(g: &GroupoidMorphism, h: &GroupoidMorphism) -> Result<GroupoidMorphism> {
    if g.target != h.source {
        return Err(Error::Mismatch("target of the first morphism is not the source of the second".into()));
    }
    let mut entries = Vec::new();
    for p in &g.entries {
        for q in h.entries.iter().filter(|q| q.src == p.dst) {
            entries.push(FunctionEntry {
                index: format!("n{}", entries.len()),
                src: p.src,
                dst: q.dst,
                table: q.table.after(&p.table),
            });
        }
    }
    let out = GroupoidMorphism::new(g.source.clone(), h.target.clone(), entries)?;
    debug_assert!(out.validate().is_ok() || !g.validate().is_ok() || !h.validate().is_ok());
    Ok(out)
}

/// `Some(inverse)` iff the morphism is an isomorphism.
pub fn is_isomorphism(h: &GroupoidMorphism) -> Option<GroupoidMorphism> {
    let inv = h.inverse()?;
    debug_assert!(h
        .function_set
        .iter()
        .all(|(_, d, t)| t.is_bijection_onto(h.target.carrier_size(*d))));
    Some(inv)
}

/// Every morphism `g1 -> g2`, found by saturating each single function
/// between carriers and keeping the ones that satisfy (A).
pub fn enumerate_morphisms(
    g1: &Arc<FiniteGroupoid>,
    g2: &Arc<FiniteGroupoid>,
    bound: &SearchBound,
) -> Result<Vec<GroupoidMorphism>> {
    g1.require_connected()?;
    g2.require_connected()?;
    SearchBound::check("total carrier size", g1.total_elements() + g2.total_elements(), bound.max_elements)?;
    for g in [g1, g2] {
        for i in 0..g.object_count() {
            for j in 0..g.object_count() {
                SearchBound::check("Hom-set size", g.hom(i, j).len(), bound.max_hom)?;
            }
        }
    }
    let mut candidates = 0usize;
    for i1 in 0..g1.object_count() {
        for i2 in 0..g2.object_count() {
            candidates = candidates.saturating_add(function_count(g1.carrier_size(i1), g2.carrier_size(i2)));
        }
    }
    SearchBound::check("candidate functions", candidates, bound.max_tables)?;

    let mut found: BTreeMap<BTreeSet<FunctionTriple>, GroupoidMorphism> = BTreeMap::new();
    let mut covered: HashSet<FunctionTriple> = HashSet::new();
    let mut rejected: HashSet<FunctionTriple> = HashSet::new();
    for i1 in 0..g1.object_count() {
        for i2 in 0..g2.object_count() {
            for t in all_functions(g1.carrier_size(i1), g2.carrier_size(i2)) {
                let seed = (i1, i2, t);
                if covered.contains(&seed) || rejected.contains(&seed) {
                    continue;
                }
                let set = saturate_set(g1, g2, std::slice::from_ref(&seed));
                let h = GroupoidMorphism::from_function_set(g1.clone(), g2.clone(), set.clone())?;
                if h.validate().is_ok() {
                    covered.extend(set.iter().cloned());
                    found.insert(set, h);
                } else {
                    // Every member of a failed saturation saturates to the
                    // same set (the Hom actions are invertible).
                    rejected.extend(set);
                }
            }
        }
    }
    Ok(found.into_values().collect())
}

/// An injective object map with per-object bijections intertwining the
/// Hom-sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupoidEmbedding {
    source: Arc<FiniteGroupoid>,
    target: Arc<FiniteGroupoid>,
    iota: Vec<usize>,
    per_object: Vec<Table>,
}

impl GroupoidEmbedding {
    pub fn new(
        source: Arc<FiniteGroupoid>,
        target: Arc<FiniteGroupoid>,
        iota: Vec<usize>,
        per_object: Vec<Table>,
    ) -> Result<Self, StructuralError> {
        if iota.len() != source.object_count() || per_object.len() != source.object_count() {
            return Err(StructuralError::Other("embedding must give one target object and table per source object".into()));
        }
        for (i, (&t_obj, table)) in iota.iter().zip(&per_object).enumerate() {
            if t_obj >= target.object_count() {
                return Err(StructuralError::Unknown { what: "object index", id: source.object_id(i).to_string() });
            }
            if table.len() != source.carrier_size(i) {
                return Err(StructuralError::NotTotal {
                    id: source.object_id(i).to_string(),
                    detail: "table length differs from carrier size".into(),
                });
            }
            if table.images().iter().any(|&x| x >= target.carrier_size(t_obj)) {
                return Err(StructuralError::BadImage {
                    id: source.object_id(i).to_string(),
                    from: "?".into(),
                    to: target.object_id(t_obj).to_string(),
                });
            }
        }
        Ok(GroupoidEmbedding { source, target, iota, per_object })
    }

    pub fn source(&self) -> &Arc<FiniteGroupoid> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteGroupoid> {
        &self.target
    }

    pub fn iota(&self) -> &[usize] {
        &self.iota
    }

    pub fn per_object(&self) -> &[Table] {
        &self.per_object
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::ok();
        let mut seen = BTreeMap::new();
        for (i, &t) in self.iota.iter().enumerate() {
            if let Some(prev) = seen.insert(t, i) {
                report.push(Violation::new(
                    "injective-object-map",
                    format!(
                        "{} and {} both map to {}",
                        self.source.object_id(prev),
                        self.source.object_id(i),
                        self.target.object_id(t)
                    ),
                    vec![self.source.object_id(prev).into(), self.source.object_id(i).into()],
                ));
            }
        }
        for (i, h) in self.per_object.iter().enumerate() {
            if !h.is_bijection_onto(self.target.carrier_size(self.iota[i])) {
                report.push(Violation::new(
                    "bijection",
                    format!("table at {} is not a bijection", self.source.object_id(i)),
                    vec![self.source.object_id(i).into()],
                ));
            }
        }
        if !report.is_ok() {
            return report;
        }
        let n = self.source.object_count();
        for i in 0..n {
            for j in 0..n {
                let lhs: BTreeSet<Table> = self.source.hom_tables(i, j).map(|g| self.per_object[j].after(g)).collect();
                let rhs: BTreeSet<Table> = self
                    .target
                    .hom_tables(self.iota[i], self.iota[j])
                    .map(|d| d.after(&self.per_object[i]))
                    .collect();
                if lhs != rhs {
                    report.push(Violation::new(
                        "intertwining",
                        format!(
                            "h_{} ∘ Hom({}, {}) ({} functions) differs from Hom({}, {}) ∘ h_{} ({} functions)",
                            self.source.object_id(j),
                            self.source.object_id(i),
                            self.source.object_id(j),
                            lhs.len(),
                            self.target.object_id(self.iota[i]),
                            self.target.object_id(self.iota[j]),
                            self.source.object_id(i),
                            rhs.len()
                        ),
                        vec![self.source.object_id(i).into(), self.source.object_id(j).into()],
                    ));
                }
            }
        }
        report
    }
}

/// The isomorphism induced by an embedding: index `(m, i1)` for each target
/// morphism `m` out of `ι(i1)`, with table `f_m ∘ h_{i1}`.
pub fn lift_embedding(e: &GroupoidEmbedding) -> Result<GroupoidMorphism> {
    e.source.require_connected()?;
    e.target.require_connected()?;
    let mut entries = Vec::new();
    for (i1, &t_obj) in e.iota.iter().enumerate() {
        for md in e.target.morphisms().iter().filter(|m| m.src == t_obj) {
            entries.push(FunctionEntry {
                index: format!("{}__{}", md.id, e.source.object_id(i1)),
                src: i1,
                dst: md.dst,
                table: md.table.after(&e.per_object[i1]),
            });
        }
    }
    let out = GroupoidMorphism::new(e.source.clone(), e.target.clone(), entries)?;
    debug_assert!(!e.validate().is_ok() || (out.validate().is_ok() && is_isomorphism(&out).is_some()));
    Ok(out)
}

/// A common groupoid both operands embed into.
#[derive(Clone, Debug)]
pub struct EquivalenceWitness {
    pub common: Arc<FiniteGroupoid>,
    pub embed_left: GroupoidEmbedding,
    pub embed_right: GroupoidEmbedding,
    /// Objects compared and the conjugating bijection between their carriers.
    pub left_object: usize,
    pub right_object: usize,
    pub beta: Table,
}

#[derive(Clone, Debug)]
pub struct EquivalenceDecision {
    pub witness: Option<EquivalenceWitness>,
    pub reason: String,
}

impl EquivalenceDecision {
    pub fn equivalent(&self) -> bool {
        self.witness.is_some()
    }
}

/// Decides whether two connected groupoids embed into a common connected
/// groupoid.
///
/// That happens exactly when the automorphism groups of one object on each
/// side are conjugate by a bijection of carriers. In a connected groupoid
/// every object's group is conjugate to every other's, so it is enough to
/// compare the first object of each side. The search runs over bijections in
/// lexicographic order.
pub fn decide_equivalence(g1: &Arc<FiniteGroupoid>, g2: &Arc<FiniteGroupoid>) -> Result<EquivalenceDecision> {
    g1.require_connected()?;
    g2.require_connected()?;
    let (i, j) = (0, 0);
    let (a1, a2) = (g1.aut_group(i), g2.aut_group(j));
    let no = |reason: &str| Ok(EquivalenceDecision { witness: None, reason: reason.to_string() });
    if g1.carrier_size(i) != g2.carrier_size(j) {
        return no("no conjugating bijection: carrier sizes differ");
    }
    if a1.order() != a2.order() {
        return no("no conjugating bijection: automorphism group orders differ");
    }
    let Some(beta) = all_bijections(g1.carrier_size(i)).find(|b| a1.conjugate_by(b) == a2.elements) else {
        return no("no conjugating bijection");
    };
    let witness = build_witness(g1, g2, i, j, beta)?;
    Ok(EquivalenceDecision { witness: Some(witness), reason: "conjugating bijection found".into() })
}

fn build_witness(
    g1: &Arc<FiniteGroupoid>,
    g2: &Arc<FiniteGroupoid>,
    i: usize,
    j: usize,
    beta: Table,
) -> Result<EquivalenceWitness> {
    let n1 = g1.object_count();
    let mut objects: Vec<ObjectData> = Vec::new();
    for o in g1.objects() {
        objects.push(ObjectData { id: format!("l_{}", o.id), elements: o.elements.clone() });
    }
    for o in g2.objects() {
        objects.push(ObjectData { id: format!("r_{}", o.id), elements: o.elements.clone() });
    }
    let mut seeds: Vec<MorphismData> = Vec::new();
    for m in g1.morphisms() {
        seeds.push(MorphismData { id: format!("l_{}", m.id), ..m.clone() });
    }
    for m in g2.morphisms() {
        seeds.push(MorphismData { id: format!("r_{}", m.id), src: m.src + n1, dst: m.dst + n1, table: m.table.clone() });
    }
    seeds.push(MorphismData { id: "beta".into(), src: i, dst: n1 + j, table: beta.clone() });
    let common = Arc::new(closure_from_generators(objects, seeds)?);

    let embed = |g: &Arc<FiniteGroupoid>, prefix: &str| -> Result<GroupoidEmbedding> {
        let iota = g
            .objects()
            .iter()
            .map(|o| common.object_index(&format!("{prefix}{}", o.id)))
            .collect::<Result<Vec<_>, _>>()?;
        let per_object = (0..g.object_count()).map(|k| Table::identity(g.carrier_size(k))).collect();
        Ok(GroupoidEmbedding::new(g.clone(), common.clone(), iota, per_object)?)
    };
    let embed_left = embed(g1, "l_")?;
    let embed_right = embed(g2, "r_")?;
    debug_assert!(embed_left.validate().is_ok() && embed_right.validate().is_ok());
    Ok(EquivalenceWitness { common, embed_left, embed_right, left_object: i, right_object: j, beta })
}
