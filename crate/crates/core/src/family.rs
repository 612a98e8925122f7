//! Families of connected groupoids over a finite base, and their fibrewise
//! cover extensions.

use std::collections::{BTreeMap, HashSet};
use std::sync::Arc;

use itertools::Itertools;

use crate::bound::SearchBound;
use crate::cover::{extend_groupoid, CoverMorphism, ExtendedCover, StarKind};
use crate::equivalence::{functor_c_map, functor_g_map, unit_eta};
use crate::cover::{compose_cover_morphisms, is_cover_isomorphism};
use crate::error::{check_identifier, Error, Result, StructuralError};
use crate::groupoid::FiniteGroupoid;
use crate::morphism::GroupoidMorphism;
use crate::report::{ValidationReport, Violation};
use crate::table::{all_bijections, Table};

/// A possibly disconnected groupoid fibred over a finite base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupoidFamily {
    total: FiniteGroupoid,
    /// Base identifiers, sorted bytewise.
    base: Vec<String>,
    obj_base: Vec<usize>,
}

impl GroupoidFamily {
    /// `fibre_of[k]` names the base point of object `k` of `total`.
    pub fn new(total: FiniteGroupoid, base: Vec<String>, fibre_of: &[String]) -> Result<Self, StructuralError> {
        let mut base = base;
        for a in &base {
            check_identifier(a)?;
        }
        base.sort();
        if let Some(w) = base.windows(2).find(|w| w[0] == w[1]) {
            return Err(StructuralError::Duplicate { what: "base point", id: w[0].clone() });
        }
        if fibre_of.len() != total.object_count() {
            return Err(StructuralError::Other("every object needs a fibre".into()));
        }
        let obj_base = fibre_of
            .iter()
            .map(|a| {
                base.binary_search(a)
                    .map_err(|_| StructuralError::Unknown { what: "base point", id: a.clone() })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(GroupoidFamily { total, base, obj_base })
    }

    pub fn total(&self) -> &FiniteGroupoid {
        &self.total
    }

    pub fn base(&self) -> &[String] {
        &self.base
    }

    pub fn obj_base(&self) -> &[usize] {
        &self.obj_base
    }

    pub fn base_index(&self, a: &str) -> Result<usize, StructuralError> {
        self.base
            .binary_search_by(|b| b.as_str().cmp(a))
            .map_err(|_| StructuralError::Unknown { what: "base point", id: a.to_string() })
    }

    /// Objects over `a`, in object order.
    pub fn fibre_objects(&self, a: usize) -> Vec<usize> {
        (0..self.total.object_count()).filter(|&k| self.obj_base[k] == a).collect()
    }

    /// Surjectivity onto the base, and fibres equal to components.
    pub fn validate(&self) -> ValidationReport {
        let mut report = self.total.validate();
        for (a, id) in self.base.iter().enumerate() {
            if !self.obj_base.contains(&a) {
                report.push(Violation::new("surjective", format!("no object lies over {id}"), vec![id.clone()]));
            }
        }
        let n = self.total.object_count();
        for i in 0..n {
            for j in 0..n {
                let same = self.obj_base[i] == self.obj_base[j];
                let linked = !self.total.hom(i, j).is_empty();
                if same != linked {
                    let (oi, oj) = (self.total.object_id(i).to_string(), self.total.object_id(j).to_string());
                    let message = if same {
                        format!("{oi} and {oj} share a fibre but Hom({oi}, {oj}) is empty")
                    } else {
                        format!("{oi} and {oj} lie in different fibres but Hom({oi}, {oj}) is nonempty")
                    };
                    report.push(Violation::new("fibres-are-components", message, vec![oi, oj]));
                }
            }
        }
        report
    }
}

/// The family whose fibres are the connected components, named `a1, a2, …`
/// in order of their first object.
pub fn family_from_components(g: &FiniteGroupoid) -> GroupoidFamily {
    let comps = g.connected_components();
    let width = comps.len().to_string().len();
    let names: Vec<String> = (1..=comps.len()).map(|k| format!("a{k:0width$}")).collect();
    let mut fibre_of = vec![String::new(); g.object_count()];
    for (c, members) in comps.iter().enumerate() {
        for &i in members {
            fibre_of[i] = names[c].clone();
        }
    }
    GroupoidFamily::new(g.clone(), names, &fibre_of).expect("generated names are valid")
}

/// The full subgroupoid over base point `a`.
pub fn fibre(fam: &GroupoidFamily, a: &str) -> Result<FiniteGroupoid> {
    let a = fam.base_index(a)?;
    Ok(fibre_at(fam, a))
}

fn fibre_at(fam: &GroupoidFamily, a: usize) -> FiniteGroupoid {
    let g = fam.total.full_subgroupoid(&fam.fibre_objects(a));
    debug_assert!(g.is_connected());
    g
}

/// A point of the total structure of a family cover.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Node {
    /// A base object of the total groupoid.
    Object(usize),
    /// The star over a base point.
    Star(usize),
}

/// A hand-declared morphism record added to a family cover's structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtraRecord {
    pub id: String,
    pub from: Node,
    pub to: Node,
    pub table: Table,
}

/// Fibrewise one-object extensions of a family, over a section.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyCover {
    family: GroupoidFamily,
    section: Vec<usize>,
    fibre_covers: Vec<ExtendedCover>,
    extra: Vec<ExtraRecord>,
}

impl FamilyCover {
    pub fn family(&self) -> &GroupoidFamily {
        &self.family
    }

    /// Section object per base point.
    pub fn section(&self) -> &[usize] {
        &self.section
    }

    pub fn fibre_covers(&self) -> &[ExtendedCover] {
        &self.fibre_covers
    }

    pub fn extra_records(&self) -> &[ExtraRecord] {
        &self.extra
    }

    /// Adds hand-declared structure; used to build adversarial fixtures.
    pub fn with_extra_records(mut self, extra: Vec<ExtraRecord>) -> Result<Self, StructuralError> {
        for r in &extra {
            check_identifier(&r.id)?;
            let size = |n: Node| match n {
                Node::Object(j) if j < self.family.total.object_count() => Ok(self.family.total.carrier_size(j)),
                Node::Star(a) if a < self.fibre_covers.len() => Ok(self.fibre_covers[a].star_size()),
                _ => Err(StructuralError::Unknown { what: "node", id: r.id.clone() }),
            };
            let (dom, cod) = (size(r.from)?, size(r.to)?);
            if r.table.len() != dom || r.table.images().iter().any(|&x| x >= cod) {
                return Err(StructuralError::NotTotal { id: r.id.clone(), detail: "table does not fit its nodes".into() });
            }
        }
        self.extra.extend(extra);
        Ok(self)
    }

    /// `(base point, star element)` for every point of the union of stars.
    pub fn star_total(&self) -> Vec<(usize, usize)> {
        self.fibre_covers
            .iter()
            .enumerate()
            .flat_map(|(a, v)| (0..v.star_size()).map(move |e| (a, e)))
            .collect()
    }

    fn star_offsets(&self) -> Vec<usize> {
        let mut offsets = Vec::with_capacity(self.fibre_covers.len());
        let mut acc = 0;
        for v in &self.fibre_covers {
            offsets.push(acc);
            acc += v.star_size();
        }
        offsets
    }

    /// Global index of a star point.
    pub fn star_point(&self, a: usize, e: usize) -> usize {
        self.star_offsets()[a] + e
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = self.family.validate();
        for (a, v) in self.fibre_covers.iter().enumerate() {
            for mut violation in v.validate().violations {
                violation.message = format!("fibre {}: {}", self.family.base[a], violation.message);
                report.push(violation);
            }
        }
        report
    }

    /// Every star-involving record as a graph on global points.
    fn structure(&self) -> Vec<Vec<(Point, Point)>> {
        let offsets = self.star_offsets();
        let mut graphs = Vec::new();
        let mut push = |from: Node, to: Node, table: &Table| {
            let point = |n: Node, e: usize| match n {
                Node::Object(j) => Point::Base(j, e),
                Node::Star(a) => Point::Star(offsets[a] + e),
            };
            let mut g: Vec<(Point, Point)> =
                table.images().iter().enumerate().map(|(x, &y)| (point(from, x), point(to, y))).collect();
            g.sort();
            graphs.push(g);
        };
        for (a, v) in self.fibre_covers.iter().enumerate() {
            let local = self.family.fibre_objects(a);
            for r in v.records() {
                let (from, to) = match r.kind {
                    StarKind::StarToStar => (Node::Star(a), Node::Star(a)),
                    StarKind::BaseToStar => (Node::Object(local[r.object.expect("base side")]), Node::Star(a)),
                    StarKind::StarToBase => (Node::Star(a), Node::Object(local[r.object.expect("base side")])),
                };
                push(from, to, &r.table);
            }
        }
        for r in &self.extra {
            push(r.from, r.to, &r.table);
        }
        graphs.sort();
        graphs
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Point {
    Base(usize, usize),
    Star(usize),
}

fn preserves(structure: &[Vec<(Point, Point)>], sigma: &[usize]) -> bool {
    let move_point = |p: Point| match p {
        Point::Star(k) => Point::Star(sigma[k]),
        b => b,
    };
    let mut moved: Vec<Vec<(Point, Point)>> = structure
        .iter()
        .map(|g| {
            let mut h: Vec<_> = g.iter().map(|&(x, y)| (move_point(x), move_point(y))).collect();
            h.sort();
            h
        })
        .collect();
    moved.sort();
    moved == structure
}

/// The default section: the first object of each fibre.
pub fn default_section(fam: &GroupoidFamily) -> Vec<usize> {
    (0..fam.base.len())
        .map(|a| fam.fibre_objects(a).first().copied().unwrap_or(usize::MAX))
        .collect()
}

/// Extends each fibre at its section object.
pub fn relative_extend(fam: &GroupoidFamily, section: &[usize]) -> Result<FamilyCover> {
    let report = fam.validate();
    if !report.is_ok() {
        return Err(Error::Invalid(report));
    }
    if section.len() != fam.base.len() {
        return Err(Error::Mismatch("section must choose one object per base point".into()));
    }
    let mut fibre_covers = Vec::with_capacity(section.len());
    for (a, &obj) in section.iter().enumerate() {
        if obj >= fam.obj_base.len() || fam.obj_base[obj] != a {
            let name = if obj < fam.total.object_count() { fam.total.object_id(obj).to_string() } else { obj.to_string() };
            return Err(Error::Mismatch(format!("section object {name} does not lie over {}", fam.base[a])));
        }
        let g = fibre_at(fam, a);
        let local = fam.fibre_objects(a).iter().position(|&k| k == obj).expect("object lies in its fibre");
        // Concrete finite groupoids are always finitely faithful.
        debug_assert!(g.aut_group(local).pointwise_stabiliser(&(0..g.carrier_size(local)).collect::<Vec<_>>()).len() == 1);
        fibre_covers.push(extend_groupoid(&g, local)?);
    }
    let fc = FamilyCover { family: fam.clone(), section: section.to_vec(), fibre_covers, extra: Vec::new() };
    Ok(fc)
}

/// Section given by base-point → object identifiers; missing entries fall
/// back to the default.
pub fn section_from_ids(fam: &GroupoidFamily, ids: &BTreeMap<String, String>) -> Result<Vec<usize>> {
    let mut section = default_section(fam);
    for (a, obj) in ids {
        let a = fam.base_index(a)?;
        section[a] = fam.total.object_index(obj)?;
    }
    Ok(section)
}

pub fn relative_restrict(fc: &FamilyCover) -> GroupoidFamily {
    fc.family.clone()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndependenceReport {
    pub report: ValidationReport,
    /// `Π_a |Aut(star_a)|`.
    pub product_order: usize,
    /// Automorphisms of the whole structure fixing the base pointwise.
    pub automorphism_count: usize,
}

/// Checks that the fibre star automorphism groups assemble, as a direct
/// product, onto the automorphisms of the total structure fixing the base.
pub fn independence_check(fc: &FamilyCover, bound: &SearchBound) -> Result<IndependenceReport> {
    let points = fc.star_total();
    SearchBound::check("star points", points.len(), bound.max_star_points)?;
    let structure = fc.structure();
    let offsets = fc.star_offsets();
    let groups: Vec<Vec<Table>> =
        fc.fibre_covers.iter().map(|v| v.star_aut().elements.into_iter().collect()).collect();
    let product_order = groups.iter().map(Vec::len).product();
    let mut report = ValidationReport::ok();

    let mut failed_tuples = 0usize;
    for tuple in groups.iter().map(|g| g.iter()).multi_cartesian_product() {
        let mut sigma = vec![0; points.len()];
        for (a, t) in tuple.iter().enumerate() {
            for (e, &x) in t.images().iter().enumerate() {
                sigma[offsets[a] + e] = offsets[a] + x;
            }
        }
        if !preserves(&structure, &sigma) {
            if failed_tuples == 0 {
                let shown = tuple
                    .iter()
                    .enumerate()
                    .map(|(a, t)| {
                        let labels = fc.fibre_covers[a].star_labels();
                        format!("{}: [{}]", fc.family.base[a], t.render(labels, labels))
                    })
                    .join("; ");
                report.push(Violation::new(
                    "assembly",
                    format!("fibre automorphisms ({shown}) do not assemble to a structure automorphism"),
                    vec![],
                ));
            }
            failed_tuples += 1;
        }
    }

    let mut automorphism_count = 0usize;
    let mut undecomposed = 0usize;
    for sigma in all_bijections(points.len()) {
        let sigma = sigma.images().to_vec();
        if !preserves(&structure, &sigma) {
            continue;
        }
        automorphism_count += 1;
        let decomposes = fc.fibre_covers.iter().enumerate().all(|(a, v)| {
            let images: Option<Vec<usize>> = (0..v.star_size())
                .map(|e| {
                    let y = sigma[offsets[a] + e];
                    (y >= offsets[a] && y < offsets[a] + v.star_size()).then(|| y - offsets[a])
                })
                .collect();
            images.is_some_and(|im| groups[a].contains(&Table::new(im)))
        });
        if !decomposes {
            undecomposed += 1;
        }
    }
    if undecomposed > 0 {
        report.push(Violation::new(
            "decomposition",
            format!("{undecomposed} structure automorphisms do not decompose into fibre automorphisms"),
            vec![],
        ));
    }
    if automorphism_count != product_order || failed_tuples > 0 {
        report.push(Violation::new(
            "assembly-bijective",
            format!(
                "assembly is not a bijection: product of fibre groups has order {product_order}, \
                 the structure has {automorphism_count} automorphisms over the base"
            ),
            vec![],
        ));
    }
    Ok(IndependenceReport { report, product_order, automorphism_count })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusReport {
    /// Base points whose star automorphism group is nontrivial, sorted.
    pub flagged: Vec<String>,
    /// `(base point, |Aut(star)|)` for every base point.
    pub orders: Vec<(String, usize)>,
}

pub fn internality_census(fc: &FamilyCover) -> CensusReport {
    let orders: Vec<(String, usize)> = fc
        .fibre_covers
        .iter()
        .enumerate()
        .map(|(a, v)| (fc.family.base[a].clone(), v.star_aut().order()))
        .collect();
    let flagged = orders.iter().filter(|(_, o)| *o > 1).map(|(a, _)| a.clone()).collect();
    CensusReport { flagged, orders }
}

/// A morphism of families over a shared base, on either side of the
/// correspondence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilyMorphism {
    /// One groupoid morphism per base point, between the fibres.
    Groupoid { source: Arc<GroupoidFamily>, target: Arc<GroupoidFamily>, fibres: Vec<GroupoidMorphism> },
    /// A table on the union of stars, given as global star indices.
    Cover { source: Arc<FamilyCover>, target: Arc<FamilyCover>, table: Vec<usize> },
}

impl FamilyMorphism {
    fn bases(&self) -> (&[String], &[String]) {
        match self {
            FamilyMorphism::Groupoid { source, target, .. } => (&source.base, &target.base),
            FamilyMorphism::Cover { source, target, .. } => (&source.family.base, &target.family.base),
        }
    }
}

/// Fibrewise validation. With `check_laws`, also checks that the functors
/// applied per fibre round-trip: `G(C(h_a)) = h_a` on the groupoid side and
/// `C(G(c_a)) = η c_a η⁻¹` on the cover side.
pub fn validate_family_morphism(fm: &FamilyMorphism, check_laws: bool) -> Result<ValidationReport> {
    let (b1, b2) = fm.bases();
    if b1 != b2 {
        return Err(Error::Mismatch("source and target families have different bases".into()));
    }
    let mut report = ValidationReport::ok();
    match fm {
        FamilyMorphism::Groupoid { source, target, fibres } => {
            if fibres.len() != source.base.len() {
                return Err(Error::Mismatch("one morphism per base point is required".into()));
            }
            for (a, h) in fibres.iter().enumerate() {
                let name = &source.base[a];
                if **h.source() != fibre_at(source, a) || **h.target() != fibre_at(target, a) {
                    return Err(Error::Mismatch(format!("morphism over {name} does not run between the fibres")));
                }
                for mut v in h.validate().violations {
                    v.message = format!("fibre {name}: {}", v.message);
                    report.push(v);
                }
                if check_laws && report.is_ok() {
                    let v1 = Arc::new(extend_groupoid(h.source(), 0)?);
                    let v2 = Arc::new(extend_groupoid(h.target(), 0)?);
                    if functor_g_map(&functor_c_map(h, &v1, &v2)?)? != *h {
                        report.push(Violation::new("fibre-functor-law", format!("G(C(h)) differs from h over {name}"), vec![name.clone()]));
                    }
                }
            }
        }
        FamilyMorphism::Cover { source, target, table } => {
            let (p1, p2) = (source.star_total(), target.star_total());
            if table.len() != p1.len() || table.iter().any(|&y| y >= p2.len()) {
                return Err(Error::Structural(StructuralError::NotTotal {
                    id: "family-cover-morphism".into(),
                    detail: "table does not fit the unions of stars".into(),
                }));
            }
            let mut crossing = HashSet::new();
            for (x, &y) in table.iter().enumerate() {
                let (a, e) = p1[x];
                let (b, f) = p2[y];
                if a != b && crossing.insert(a) {
                    let from = &source.fibre_covers[a].star_labels()[e];
                    let to = &target.fibre_covers[b].star_labels()[f];
                    report.push(Violation::new(
                        "fibre-crossing",
                        format!(
                            "({from},0) over {} is sent to ({to},0) over {}; the projections to the base do not commute",
                            source.family.base[a], target.family.base[b]
                        ),
                        vec![source.family.base[a].clone(), target.family.base[b].clone()],
                    ));
                }
            }
            if !report.is_ok() {
                return Ok(report);
            }
            for c in cover_fibres(source, target, table)?.iter() {
                let name = &source.family.base[fibre_index_of(source, c)];
                for mut v in c.validate().violations {
                    v.message = format!("fibre {name}: {}", v.message);
                    report.push(v);
                }
            }
            if check_laws && report.is_ok() {
                for (a, c) in cover_fibres(source, target, table)?.iter().enumerate() {
                    let (v1, v2) = (c.source(), c.target());
                    let eta1 = unit_eta(v1, v1.base_object())?;
                    let eta2 = unit_eta(v2, v2.base_object())?;
                    let eta1_inv = is_cover_isomorphism(&eta1).expect("unit is invertible");
                    let cg = functor_c_map(&functor_g_map(c)?, eta1.target(), eta2.target())?;
                    let conj = compose_cover_morphisms(&compose_cover_morphisms(&eta1_inv, c)?, &eta2)?;
                    if cg != conj {
                        let name = &source.family.base[a];
                        report.push(Violation::new("fibre-functor-law", format!("C(G(c)) differs from eta c eta^-1 over {name}"), vec![name.clone()]));
                    }
                }
            }
        }
    }
    Ok(report)
}

fn fibre_index_of(fc: &FamilyCover, c: &CoverMorphism) -> usize {
    fc.fibre_covers.iter().position(|v| v == &**c.source()).unwrap_or(0)
}

/// Restrictions of a fibre-preserving cover-side table to each fibre.
pub fn cover_fibres(source: &FamilyCover, target: &FamilyCover, table: &[usize]) -> Result<Vec<CoverMorphism>> {
    let (p1, p2) = (source.star_total(), target.star_total());
    let mut out = Vec::new();
    for (a, v) in source.fibre_covers.iter().enumerate() {
        let images = (0..v.star_size())
            .map(|e| {
                let (b, f) = p2[table[source.star_point(a, e)]];
                if b != a {
                    return Err(Error::Mismatch("fibre-crossing table".into()));
                }
                Ok(f)
            })
            .collect::<Result<Vec<_>>>()?;
        debug_assert!(p1.len() == table.len());
        out.push(CoverMorphism::new(
            Arc::new(v.clone()),
            Arc::new(target.fibre_covers[a].clone()),
            Table::new(images),
        )?);
    }
    Ok(out)
}

/// Relative `G`: applies the functor fibre by fibre.
pub fn relative_g_map(fm: &FamilyMorphism) -> Result<FamilyMorphism> {
    let FamilyMorphism::Cover { source, target, table } = fm else {
        return Err(Error::Mismatch("expected a cover-side family morphism".into()));
    };
    let fibres = cover_fibres(source, target, table)?
        .iter()
        .map(functor_g_map)
        .collect::<Result<Vec<_>>>()?;
    Ok(FamilyMorphism::Groupoid {
        source: Arc::new(relative_restrict(source)),
        target: Arc::new(relative_restrict(target)),
        fibres,
    })
}

/// Relative `C`: applies the functor fibre by fibre into the given family
/// covers of the two families.
pub fn relative_c_map(fm: &FamilyMorphism, fc1: &Arc<FamilyCover>, fc2: &Arc<FamilyCover>) -> Result<FamilyMorphism> {
    let FamilyMorphism::Groupoid { source, target, fibres } = fm else {
        return Err(Error::Mismatch("expected a groupoid-side family morphism".into()));
    };
    if **source != fc1.family || **target != fc2.family {
        return Err(Error::Mismatch("family covers do not extend the morphism's families".into()));
    }
    let mut table = vec![0; fc1.star_total().len()];
    for (a, h) in fibres.iter().enumerate() {
        let v1 = Arc::new(fc1.fibre_covers[a].clone());
        let v2 = Arc::new(fc2.fibre_covers[a].clone());
        let c = functor_c_map(h, &v1, &v2)?;
        for (e, &f) in c.canonical_rep().images().iter().enumerate() {
            table[fc1.star_point(a, e)] = fc2.star_point(a, f);
        }
    }
    Ok(FamilyMorphism::Cover { source: fc1.clone(), target: fc2.clone(), table })
}

/// Identity of a family, groupoid side.
pub fn identity_family_morphism(fam: &Arc<GroupoidFamily>) -> FamilyMorphism {
    let fibres = (0..fam.base.len())
        .map(|a| crate::morphism::identity_morphism(Arc::new(fibre_at(fam, a))))
        .collect();
    FamilyMorphism::Groupoid { source: fam.clone(), target: fam.clone(), fibres }
}
