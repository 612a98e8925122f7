//! Finite concrete groupoids: objects carrying finite sets, morphisms
//! carrying bijection tables between them.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

use crate::error::{check_identifier, Error, Result, StructuralError};
use crate::report::{ValidationReport, Violation};
use crate::table::Table;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObjectData {
    pub id: String,
    /// Element labels, sorted bytewise.
    pub elements: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismData {
    pub id: String,
    pub src: usize,
    pub dst: usize,
    pub table: Table,
}

/// A finite concrete groupoid (or a candidate for one).
///
/// Construction only checks structure: identifiers resolve and every table
/// is a total map between the declared carriers. The groupoid axioms are
/// checked by [`FiniteGroupoid::validate`]. Objects, elements and morphisms
/// are stored in bytewise identifier order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroupoid {
    objects: Vec<ObjectData>,
    morphisms: Vec<MorphismData>,
    hom: Vec<Vec<usize>>,
}

/// An element addressed by its object and label.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElementRef {
    pub object: String,
    pub label: String,
}

type LabelMorphism = (String, String, String, Vec<(String, String)>);

/// Label-level builder for groupoids.
#[derive(Clone, Debug, Default)]
pub struct GroupoidBuilder {
    objects: Vec<(String, Vec<String>)>,
    morphisms: Vec<LabelMorphism>,
}

impl GroupoidBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn object<S: Into<String>>(mut self, id: impl Into<String>, elements: impl IntoIterator<Item = S>) -> Self {
        self.objects.push((id.into(), elements.into_iter().map(Into::into).collect()));
        self
    }

    pub fn morphism<A: Into<String>, B: Into<String>>(
        mut self,
        id: impl Into<String>,
        src: impl Into<String>,
        dst: impl Into<String>,
        map: impl IntoIterator<Item = (A, B)>,
    ) -> Self {
        self.morphisms.push((
            id.into(),
            src.into(),
            dst.into(),
            map.into_iter().map(|(a, b)| (a.into(), b.into())).collect(),
        ));
        self
    }

    pub fn build(self) -> Result<FiniteGroupoid, StructuralError> {
        let mut objects = Vec::with_capacity(self.objects.len());
        let mut object_index = HashMap::new();
        for (k, (id, elements)) in self.objects.into_iter().enumerate() {
            check_identifier(&id)?;
            if object_index.insert(id.clone(), k).is_some() {
                return Err(StructuralError::Duplicate { what: "object", id });
            }
            objects.push(ObjectData { id, elements });
        }
        let mut morphisms = Vec::with_capacity(self.morphisms.len());
        for (id, src, dst, map) in self.morphisms {
            let s = *object_index
                .get(&src)
                .ok_or_else(|| StructuralError::Unknown { what: "object", id: src.clone() })?;
            let d = *object_index
                .get(&dst)
                .ok_or_else(|| StructuralError::Unknown { what: "object", id: dst.clone() })?;
            let table = table_from_pairs(&id, &objects[s].elements, &objects[d].elements, &map)?;
            morphisms.push(MorphismData { id, src: s, dst: d, table });
        }
        FiniteGroupoid::from_indexed(objects, morphisms)
    }
}

/// Resolves a label map into a table over the given carriers.
pub(crate) fn table_from_pairs(
    id: &str,
    domain: &[String],
    codomain: &[String],
    pairs: &[(String, String)],
) -> Result<Table, StructuralError> {
    let dom: HashMap<&str, usize> = domain.iter().enumerate().map(|(k, s)| (s.as_str(), k)).collect();
    let cod: HashMap<&str, usize> = codomain.iter().enumerate().map(|(k, s)| (s.as_str(), k)).collect();
    let mut images = vec![None; domain.len()];
    for (a, b) in pairs {
        let ia = *dom.get(a.as_str()).ok_or_else(|| StructuralError::NotTotal {
            id: id.to_string(),
            detail: format!("{a:?} is not in the domain"),
        })?;
        let ib = *cod.get(b.as_str()).ok_or_else(|| StructuralError::BadImage {
            id: id.to_string(),
            from: a.clone(),
            to: b.clone(),
        })?;
        if images[ia].replace(ib).is_some() {
            return Err(StructuralError::NotTotal { id: id.to_string(), detail: format!("{a:?} is mapped twice") });
        }
    }
    let images = images
        .into_iter()
        .enumerate()
        .map(|(k, x)| {
            x.ok_or_else(|| StructuralError::NotTotal {
                id: id.to_string(),
                detail: format!("{:?} has no image", domain[k]),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Table::new(images))
}

/// Sorts a carrier and returns the relabelling `old index -> new index`.
fn sort_carrier(elements: &mut Vec<String>) -> Vec<usize> {
    let mut order: Vec<usize> = (0..elements.len()).collect();
    order.sort_by(|&a, &b| elements[a].cmp(&elements[b]));
    let mut new_index = vec![0; elements.len()];
    for (new, &old) in order.iter().enumerate() {
        new_index[old] = new;
    }
    let sorted = order.iter().map(|&k| elements[k].clone()).collect();
    *elements = sorted;
    new_index
}

/// Rewrites a table through domain and codomain relabellings.
pub(crate) fn relabel(table: &Table, dom: &[usize], cod: &[usize]) -> Table {
    let mut images = vec![0; table.len()];
    for (old, &x) in table.images().iter().enumerate() {
        images[dom[old]] = cod[x];
    }
    Table::new(images)
}

impl FiniteGroupoid {
    /// Builds a groupoid from index-level data, checking structure and
    /// putting everything into canonical order.
    pub fn from_indexed(mut objects: Vec<ObjectData>, morphisms: Vec<MorphismData>) -> Result<Self, StructuralError> {
        let mut seen = HashSet::new();
        let mut relabels = Vec::with_capacity(objects.len());
        for o in &mut objects {
            check_identifier(&o.id)?;
            if !seen.insert(o.id.clone()) {
                return Err(StructuralError::Duplicate { what: "object", id: o.id.clone() });
            }
            let mut labels = HashSet::new();
            for e in &o.elements {
                check_identifier(e)?;
                if !labels.insert(e.as_str()) {
                    return Err(StructuralError::Duplicate { what: "element", id: format!("{}.{}", o.id, e) });
                }
            }
            relabels.push(sort_carrier(&mut o.elements));
        }
        let mut obj_order: Vec<usize> = (0..objects.len()).collect();
        obj_order.sort_by(|&a, &b| objects[a].id.cmp(&objects[b].id));
        let mut obj_new = vec![0; objects.len()];
        for (new, &old) in obj_order.iter().enumerate() {
            obj_new[old] = new;
        }

        let mut seen = HashSet::new();
        let mut out_morphisms = Vec::with_capacity(morphisms.len());
        for m in morphisms {
            check_identifier(&m.id)?;
            if !seen.insert(m.id.clone()) {
                return Err(StructuralError::Duplicate { what: "morphism", id: m.id });
            }
            if m.src >= objects.len() || m.dst >= objects.len() {
                return Err(StructuralError::Unknown { what: "object index", id: m.id });
            }
            let (n, k) = (objects[m.src].elements.len(), objects[m.dst].elements.len());
            if m.table.len() != n {
                return Err(StructuralError::NotTotal {
                    id: m.id,
                    detail: format!("table has {} entries, domain has {}", m.table.len(), n),
                });
            }
            if let Some(pos) = m.table.images().iter().position(|&x| x >= k) {
                let from = objects[m.src].elements[pos].clone();
                return Err(StructuralError::BadImage { id: m.id, from, to: format!("#{}", m.table.apply(pos)) });
            }
            let table = relabel(&m.table, &relabels[m.src], &relabels[m.dst]);
            out_morphisms.push(MorphismData { id: m.id, src: obj_new[m.src], dst: obj_new[m.dst], table });
        }
        out_morphisms.sort_by(|a, b| a.id.cmp(&b.id));
        let objects = obj_order.iter().map(|&k| objects[k].clone()).collect::<Vec<_>>();
        Ok(Self::assemble(objects, out_morphisms))
    }

    fn assemble(objects: Vec<ObjectData>, morphisms: Vec<MorphismData>) -> Self {
        let n = objects.len();
        let mut hom = vec![Vec::new(); n * n];
        for (k, m) in morphisms.iter().enumerate() {
            hom[m.src * n + m.dst].push(k);
        }
        FiniteGroupoid { objects, morphisms, hom }
    }

    pub fn objects(&self) -> &[ObjectData] {
        &self.objects
    }

    pub fn morphisms(&self) -> &[MorphismData] {
        &self.morphisms
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn object_id(&self, i: usize) -> &str {
        &self.objects[i].id
    }

    pub fn carrier(&self, i: usize) -> &[String] {
        &self.objects[i].elements
    }

    pub fn carrier_size(&self, i: usize) -> usize {
        self.objects[i].elements.len()
    }

    pub fn total_elements(&self) -> usize {
        self.objects.iter().map(|o| o.elements.len()).sum()
    }

    pub fn object_index(&self, id: &str) -> Result<usize, StructuralError> {
        self.objects
            .binary_search_by(|o| o.id.as_str().cmp(id))
            .map_err(|_| StructuralError::Unknown { what: "object", id: id.to_string() })
    }

    pub fn morphism_index(&self, id: &str) -> Result<usize, StructuralError> {
        self.morphisms
            .binary_search_by(|m| m.id.as_str().cmp(id))
            .map_err(|_| StructuralError::Unknown { what: "morphism", id: id.to_string() })
    }

    pub fn element_index(&self, object: usize, label: &str) -> Result<usize, StructuralError> {
        self.objects[object]
            .elements
            .binary_search_by(|e| e.as_str().cmp(label))
            .map_err(|_| StructuralError::Unknown { what: "element", id: format!("{}.{}", self.objects[object].id, label) })
    }

    pub fn element_ref(&self, object: usize, element: usize) -> ElementRef {
        ElementRef { object: self.objects[object].id.clone(), label: self.objects[object].elements[element].clone() }
    }

    /// Morphism indices from `i` to `j`, in identifier order.
    pub fn hom(&self, i: usize, j: usize) -> &[usize] {
        &self.hom[i * self.objects.len() + j]
    }

    pub fn hom_tables(&self, i: usize, j: usize) -> impl Iterator<Item = &Table> + '_ {
        self.hom(i, j).iter().map(move |&m| &self.morphisms[m].table)
    }

    /// The distinct tables of `Hom(i, j)`.
    pub fn hom_table_set(&self, i: usize, j: usize) -> BTreeSet<Table> {
        self.hom_tables(i, j).cloned().collect()
    }

    /// `hom_set` at the identifier level.
    pub fn hom_set(&self, i: &str, j: &str) -> Result<Vec<String>, StructuralError> {
        let (i, j) = (self.object_index(i)?, self.object_index(j)?);
        Ok(self.hom(i, j).iter().map(|&m| self.morphisms[m].id.clone()).collect())
    }

    pub fn aut_group(&self, i: usize) -> PermutationGroup {
        PermutationGroup { carrier: self.carrier(i).to_vec(), elements: self.hom_table_set(i, i) }
    }

    /// Checks every groupoid invariant and reports each failure.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::ok();
        for o in &self.objects {
            if o.elements.is_empty() {
                report.push(Violation::new(
                    "nonempty-carrier",
                    format!("object {} has an empty carrier", o.id),
                    vec![o.id.clone()],
                ));
            }
        }
        let mut triples: HashMap<(usize, usize, &Table), &str> = HashMap::new();
        for m in &self.morphisms {
            if !m.table.is_bijection_onto(self.carrier_size(m.dst)) {
                report.push(Violation::new(
                    "bijection",
                    format!(
                        "morphism {} ({} -> {}) is not a bijection",
                        m.id, self.objects[m.src].id, self.objects[m.dst].id
                    ),
                    vec![m.id.clone()],
                ));
            }
            if let Some(prev) = triples.insert((m.src, m.dst, &m.table), &m.id) {
                report.push(Violation::new(
                    "injectivity",
                    format!("morphisms {} and {} define the same bijection", prev, m.id),
                    vec![prev.to_string(), m.id.clone()],
                ));
            }
        }
        for (i, o) in self.objects.iter().enumerate() {
            if !self.hom_tables(i, i).any(Table::is_identity) {
                report.push(Violation::new("identity", format!("missing identity at {}", o.id), vec![o.id.clone()]));
            }
        }
        for m1 in &self.morphisms {
            let want = match m1.table.inverse() {
                Some(t) => t,
                None => continue,
            };
            if !self.hom_tables(m1.dst, m1.src).any(|t| *t == want) {
                report.push(Violation::new(
                    "inverse",
                    format!("no inverse of {} in Hom({}, {})", m1.id, self.objects[m1.dst].id, self.objects[m1.src].id),
                    vec![m1.id.clone()],
                ));
            }
        }
        for m1 in &self.morphisms {
            for m2 in &self.morphisms {
                if m2.src != m1.dst {
                    continue;
                }
                let want = m2.table.after(&m1.table);
                if !triples.contains_key(&(m1.src, m2.dst, &want)) {
                    report.push(Violation::new(
                        "composition",
                        format!(
                            "{} after {} is not in Hom({}, {})",
                            m2.id, m1.id, self.objects[m1.src].id, self.objects[m2.dst].id
                        ),
                        vec![m1.id.clone(), m2.id.clone()],
                    ));
                }
            }
        }
        report
    }

    /// Validates and converts failure into an error.
    pub fn require_valid(&self) -> Result<()> {
        let report = self.validate();
        if report.is_ok() {
            Ok(())
        } else {
            Err(Error::Invalid(report))
        }
    }

    /// Objects grouped by connectivity, each class in object order, classes
    /// ordered by their first object.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let n = self.objects.len();
        let mut adjacent = vec![Vec::new(); n];
        for m in &self.morphisms {
            adjacent[m.src].push(m.dst);
            adjacent[m.dst].push(m.src);
        }
        let mut class = vec![usize::MAX; n];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for start in 0..n {
            if class[start] != usize::MAX {
                continue;
            }
            let c = classes.len();
            let mut members = vec![];
            let mut queue = VecDeque::from([start]);
            class[start] = c;
            while let Some(x) = queue.pop_front() {
                members.push(x);
                for &y in &adjacent[x] {
                    if class[y] == usize::MAX {
                        class[y] = c;
                        queue.push_back(y);
                    }
                }
            }
            members.sort_unstable();
            classes.push(members);
        }
        classes
    }

    /// Components as lists of object identifiers.
    pub fn component_ids(&self) -> Vec<Vec<String>> {
        self.connected_components()
            .into_iter()
            .map(|c| c.into_iter().map(|i| self.objects[i].id.clone()).collect())
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() <= 1
    }

    pub(crate) fn require_connected(&self) -> Result<()> {
        if self.is_connected() && !self.objects.is_empty() {
            Ok(())
        } else {
            Err(Error::Disconnected)
        }
    }

    /// Greedy faithful base of object `i`: walk the carrier in order and keep
    /// each element whose addition strictly shrinks the pointwise stabiliser.
    pub fn faithful_base(&self, i: usize) -> FaithfulBase {
        let positions = self.aut_group(i).greedy_base();
        FaithfulBase {
            object: self.objects[i].id.clone(),
            tuple: positions.iter().map(|&p| self.objects[i].elements[p].clone()).collect(),
            positions,
        }
    }

    /// The full subgroupoid on the given objects.
    pub fn full_subgroupoid(&self, keep: &[usize]) -> FiniteGroupoid {
        let mut new_index = vec![usize::MAX; self.objects.len()];
        let mut objects = Vec::new();
        let mut sorted = keep.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        for &i in &sorted {
            new_index[i] = objects.len();
            objects.push(self.objects[i].clone());
        }
        let morphisms = self
            .morphisms
            .iter()
            .filter(|m| new_index[m.src] != usize::MAX && new_index[m.dst] != usize::MAX)
            .map(|m| MorphismData { src: new_index[m.src], dst: new_index[m.dst], ..m.clone() })
            .collect();
        Self::assemble(objects, morphisms)
    }

    /// Disjoint union; identifiers must not clash.
    pub fn disjoint_union(&self, other: &FiniteGroupoid) -> Result<FiniteGroupoid, StructuralError> {
        let offset = self.objects.len();
        let objects = self.objects.iter().chain(other.objects.iter()).cloned().collect();
        let morphisms = self
            .morphisms
            .iter()
            .cloned()
            .chain(other.morphisms.iter().map(|m| MorphismData { src: m.src + offset, dst: m.dst + offset, ..m.clone() }))
            .collect();
        FiniteGroupoid::from_indexed(objects, morphisms)
    }

    /// Copy with every object and morphism identifier prefixed.
    pub fn with_prefix(&self, prefix: &str) -> Result<FiniteGroupoid, StructuralError> {
        let objects = self
            .objects
            .iter()
            .map(|o| ObjectData { id: format!("{prefix}{}", o.id), elements: o.elements.clone() })
            .collect();
        let morphisms = self
            .morphisms
            .iter()
            .map(|m| MorphismData { id: format!("{prefix}{}", m.id), ..m.clone() })
            .collect();
        FiniteGroupoid::from_indexed(objects, morphisms)
    }

    /// The set of `(src, dst, table)` triples, ignoring identifiers.
    pub fn triples(&self) -> BTreeSet<(usize, usize, Table)> {
        self.morphisms.iter().map(|m| (m.src, m.dst, m.table.clone())).collect()
    }
}

/// A group of permutations of a finite carrier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermutationGroup {
    pub carrier: Vec<String>,
    pub elements: BTreeSet<Table>,
}

impl PermutationGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    /// Identity present, closed under composition and inverse.
    pub fn is_group(&self) -> bool {
        let n = self.carrier.len();
        self.elements.contains(&Table::identity(n))
            && self.elements.iter().all(|a| a.inverse().is_some_and(|inv| self.elements.contains(&inv)))
            && self.elements.iter().all(|a| self.elements.iter().all(|b| self.elements.contains(&a.after(b))))
    }

    /// Elements fixing every listed position.
    pub fn pointwise_stabiliser(&self, positions: &[usize]) -> BTreeSet<Table> {
        self.elements.iter().filter(|t| t.fixes_all(positions)).cloned().collect()
    }

    pub(crate) fn greedy_base(&self) -> Vec<usize> {
        let mut stab: Vec<&Table> = self.elements.iter().collect();
        let mut base = Vec::new();
        for x in 0..self.carrier.len() {
            if stab.len() <= 1 {
                break;
            }
            let next: Vec<&Table> = stab.iter().copied().filter(|t| t.apply(x) == x).collect();
            if next.len() < stab.len() {
                base.push(x);
                stab = next;
            }
        }
        base
    }

    /// `β G β⁻¹` for a bijection `β` out of this carrier.
    pub fn conjugate_by(&self, beta: &Table) -> BTreeSet<Table> {
        let inv = beta.inverse().expect("conjugating table must be a bijection");
        self.elements.iter().map(|g| beta.after(g).after(&inv)).collect()
    }
}

/// A tuple of elements with trivial pointwise stabiliser.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaithfulBase {
    pub object: String,
    pub tuple: Vec<String>,
    pub positions: Vec<usize>,
}

/// Smallest groupoid containing the seeds, all identities and everything
/// generated from them by composition and inversion.
///
/// Seeds keep their identifiers. Every other morphism is named `m<k>`, with
/// `k` counting the new `(src, dst, image labels)` triples in ascending
/// order and skipping identifiers the seeds already use. A seed that repeats
/// an earlier seed's triple is dropped.
pub fn closure_from_generators(objects: Vec<ObjectData>, seeds: Vec<MorphismData>) -> Result<FiniteGroupoid> {
    let carrier_only = FiniteGroupoid::from_indexed(objects, seeds)?;
    for o in &carrier_only.objects {
        if o.elements.is_empty() {
            return Err(Error::Invalid(ValidationReport {
                violations: vec![Violation::new(
                    "nonempty-carrier",
                    format!("object {} has an empty carrier", o.id),
                    vec![o.id.clone()],
                )],
            }));
        }
    }
    for m in &carrier_only.morphisms {
        if !m.table.is_bijection_onto(carrier_only.carrier_size(m.dst)) {
            return Err(Error::Invalid(ValidationReport {
                violations: vec![Violation::new(
                    "bijection",
                    format!("seed {} is not a bijection", m.id),
                    vec![m.id.clone()],
                )],
            }));
        }
    }

    let n = carrier_only.objects.len();
    type Key = (usize, usize, Table);
    let mut names: BTreeMap<Key, Option<String>> = BTreeMap::new();
    let mut queue: VecDeque<Key> = VecDeque::new();
    let push = |key: Key, name: Option<String>, names: &mut BTreeMap<Key, Option<String>>, queue: &mut VecDeque<Key>| {
        use std::collections::btree_map::Entry;
        match names.entry(key.clone()) {
            Entry::Vacant(v) => {
                v.insert(name);
                queue.push_back(key);
            }
            Entry::Occupied(mut o) => {
                if o.get().is_none() && name.is_some() {
                    o.insert(name);
                }
            }
        }
    };
    for m in &carrier_only.morphisms {
        push((m.src, m.dst, m.table.clone()), Some(m.id.clone()), &mut names, &mut queue);
    }
    for i in 0..n {
        push((i, i, Table::identity(carrier_only.carrier_size(i))), None, &mut names, &mut queue);
    }
    // Worklist closure: each new morphism is composed with everything known
    // on both sides, and inverted.
    while let Some((s, d, t)) = queue.pop_front() {
        let inv = t.inverse().expect("bijections stay bijections");
        push((d, s, inv), None, &mut names, &mut queue);
        let known: Vec<Key> = names.keys().cloned().collect();
        for (s2, d2, t2) in known {
            if s2 == d {
                push((s, d2, t2.after(&t)), None, &mut names, &mut queue);
            }
            if d2 == s {
                push((s2, d, t.after(&t2)), None, &mut names, &mut queue);
            }
        }
    }

    let used: HashSet<String> = names.values().flatten().cloned().collect();
    // Order unnamed triples by their label encoding.
    let mut unnamed: Vec<(Vec<&str>, Key)> = names
        .iter()
        .filter(|(_, v)| v.is_none())
        .map(|(k, _)| {
            let (s, d, t) = k;
            let mut enc = vec![carrier_only.objects[*s].id.as_str(), carrier_only.objects[*d].id.as_str()];
            enc.extend(t.images().iter().map(|&x| carrier_only.objects[*d].elements[x].as_str()));
            (enc, k.clone())
        })
        .collect();
    unnamed.sort();
    let mut counter = 0usize;
    let mut morphisms = Vec::with_capacity(names.len());
    for (_, (s, d, t)) in unnamed {
        let id = loop {
            let candidate = format!("m{counter}");
            counter += 1;
            if !used.contains(&candidate) {
                break candidate;
            }
        };
        morphisms.push(MorphismData { id, src: s, dst: d, table: t });
    }
    for ((s, d, t), name) in names {
        if let Some(id) = name {
            morphisms.push(MorphismData { id, src: s, dst: d, table: t });
        }
    }
    Ok(FiniteGroupoid::from_indexed(carrier_only.objects.clone(), morphisms)?)
}
