//! The functors between covers and connected groupoids, their unit and
//! counit, and an exhaustive checker for the equivalence laws.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use crate::bound::SearchBound;
use crate::cover::{
    compose_cover_morphisms, enumerate_cover_morphisms, extend_groupoid, is_cover_isomorphism, CoverMorphism,
    ExtendedCover, StarKind,
};
use crate::error::{Error, Result};
use crate::groupoid::FiniteGroupoid;
use crate::morphism::{compose_morphism, enumerate_morphisms, identity_morphism, FunctionTriple, GroupoidMorphism};

/// `G(g)`: all `β ∘ ḡ ∘ α` with `α` running over the records into the source
/// star and `β` over the records out of the target star.
pub fn functor_g_map(g: &CoverMorphism) -> Result<GroupoidMorphism> {
    let report = g.validate();
    if !report.is_ok() {
        return Err(Error::Invalid(report));
    }
    let (v1, v2) = (g.source(), g.target());
    let rep = g.canonical_rep();
    let mut set: BTreeSet<FunctionTriple> = BTreeSet::new();
    for alpha in v1.records_of(StarKind::BaseToStar) {
        for beta in v2.records_of(StarKind::StarToBase) {
            let (j1, j2) = (alpha.object.expect("base side"), beta.object.expect("base side"));
            set.insert((j1, j2, beta.table.after(rep).after(&alpha.table)));
        }
    }
    let out = GroupoidMorphism::from_function_set(Arc::new(v1.base().clone()), Arc::new(v2.base().clone()), set)?;
    debug_assert!(out.validate().is_ok(), "{}", out.validate());
    Ok(out)
}

/// `C(h)`: the tagged copy of the first member of `h` over the two base
/// objects of the covers.
pub fn functor_c_map(h: &GroupoidMorphism, v1: &Arc<ExtendedCover>, v2: &Arc<ExtendedCover>) -> Result<CoverMorphism> {
    if **h.source() != *v1.base() || **h.target() != *v2.base() {
        return Err(Error::Mismatch("morphism does not run between the bases of the covers".into()));
    }
    let (i1, i2) = (v1.base_object(), v2.base_object());
    let table = h
        .tables_over(i1, i2)
        .next()
        .ok_or_else(|| Error::Mismatch("morphism has no function over the base objects".into()))?
        .clone();
    let out = CoverMorphism::new(v1.clone(), v2.clone(), table)?;
    debug_assert!(!h.validate().is_ok() || out.validate().is_ok());
    Ok(out)
}

/// `η_v : v -> extend(restrict(v), target_base)`, the tagged copy of the
/// first record out of the star landing on `target_base`.
pub fn unit_eta(v: &Arc<ExtendedCover>, target_base: usize) -> Result<CoverMorphism> {
    let target = Arc::new(extend_groupoid(v.base(), target_base)?);
    let alpha = v
        .records_of(StarKind::StarToBase)
        .find(|r| r.object == Some(target_base))
        .ok_or(Error::Disconnected)?;
    let out = CoverMorphism::new(v.clone(), target, alpha.table.clone())?;
    debug_assert!(is_cover_isomorphism(&out).is_some());
    Ok(out)
}

/// `ε_g : g -> restrict(extend(g, i))`: all composites through the star,
/// `Hom(O_*, O_j2) ∘ Hom(O_j1, O_*)`. Since restriction returns `g` itself
/// this always equals the identity morphism of `g`.
pub fn counit_epsilon(g: &FiniteGroupoid, i: usize) -> Result<GroupoidMorphism> {
    let v = extend_groupoid(g, i)?;
    let mut set: BTreeSet<FunctionTriple> = BTreeSet::new();
    for alpha in v.records_of(StarKind::BaseToStar) {
        for beta in v.records_of(StarKind::StarToBase) {
            set.insert((alpha.object.expect("base side"), beta.object.expect("base side"), beta.table.after(&alpha.table)));
        }
    }
    let out = GroupoidMorphism::from_function_set(Arc::new(g.clone()), Arc::new(v.base().clone()), set)?;
    debug_assert!(out == identity_morphism(Arc::new(g.clone())));
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LawCheck {
    pub law: String,
    pub subject: String,
    pub cases: usize,
    pub counterexample: Option<String>,
}

impl LawCheck {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub checks: Vec<LawCheck>,
    /// False when some part of the corpus exceeded the search bound.
    pub complete: bool,
    pub notes: Vec<String>,
}

impl EquivalenceReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(LawCheck::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &LawCheck> {
        self.checks.iter().filter(|c| !c.passed())
    }

    pub fn check(&self, law: &str, subject: &str) -> Option<&LawCheck> {
        self.checks.iter().find(|c| c.law == law && c.subject == subject)
    }
}

/// Accumulates cases for one law on one subject, keeping the first failure.
struct Law {
    law: &'static str,
    subject: String,
    cases: usize,
    counterexample: Option<String>,
}

impl Law {
    fn new(law: &'static str, subject: impl Into<String>) -> Self {
        Law { law, subject: subject.into(), cases: 0, counterexample: None }
    }

    fn case(&mut self, ok: Result<bool>, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if self.counterexample.is_some() {
            return;
        }
        match ok {
            Ok(true) => {}
            Ok(false) => self.counterexample = Some(describe()),
            Err(e) => self.counterexample = Some(format!("{}: {e}", describe())),
        }
    }

    fn finish(self, report: &mut EquivalenceReport) {
        report.checks.push(LawCheck {
            law: self.law.to_string(),
            subject: self.subject,
            cases: self.cases,
            counterexample: self.counterexample,
        });
    }
}

struct Entry {
    name: String,
    g: Arc<FiniteGroupoid>,
    /// Cover used as `C(g)`.
    v: Arc<ExtendedCover>,
    /// Unit at `v`, landing on the last object.
    eta: CoverMorphism,
}

/// Runs every equivalence law over all pairs and triples of the corpus.
pub fn check_equivalence_laws(corpus: &[(String, FiniteGroupoid)], bound: &SearchBound) -> EquivalenceReport {
    let mut report = EquivalenceReport { complete: true, ..Default::default() };
    let mut entries: Vec<Entry> = Vec::new();
    for (name, g) in corpus {
        let prepared = (|| -> Result<Entry> {
            g.require_valid()?;
            let g = Arc::new(g.clone());
            let v = Arc::new(extend_groupoid(&g, 0)?);
            let eta = unit_eta(&v, g.object_count() - 1)?;
            Ok(Entry { name: name.clone(), g, v, eta })
        })();
        match prepared {
            Ok(e) => entries.push(e),
            Err(e) => {
                report.complete = false;
                report.notes.push(format!("{name}: skipped ({e})"));
            }
        }
    }

    for e in &entries {
        object_laws(e, &mut report);
    }

    let n = entries.len();
    let mut hom: HashMap<(usize, usize), (Vec<GroupoidMorphism>, Vec<CoverMorphism>)> = HashMap::new();
    for a in 0..n {
        for b in 0..n {
            let (ea, eb) = (&entries[a], &entries[b]);
            let found = enumerate_morphisms(&ea.g, &eb.g, bound)
                .and_then(|h| Ok((h, enumerate_cover_morphisms(&ea.v, &eb.v, bound)?)));
            match found {
                Ok(pair) => {
                    pair_laws(ea, eb, &pair.0, &pair.1, &mut report);
                    hom.insert((a, b), pair);
                }
                Err(err) => {
                    report.complete = false;
                    report.notes.push(format!("{} -> {}: {err}", ea.name, eb.name));
                }
            }
        }
    }

    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if let (Some(ab), Some(bc)) = (hom.get(&(a, b)), hom.get(&(b, c))) {
                    triple_laws([&entries[a], &entries[b], &entries[c]], ab, bc, &mut report);
                }
            }
        }
    }
    report
}

fn object_laws(e: &Entry, report: &mut EquivalenceReport) {
    let mut law = Law::new("identity-preservation-G", &e.name);
    let id_v = CoverMorphism::identity(e.v.clone());
    law.case(functor_g_map(&id_v).map(|m| m == identity_morphism(e.g.clone())), || "G(id) differs from id".into());
    law.finish(report);

    let mut law = Law::new("identity-preservation-C", &e.name);
    law.case(functor_c_map(&identity_morphism(e.g.clone()), &e.v, &e.v).map(|c| c == id_v), || {
        "C(id) differs from id".into()
    });
    law.finish(report);

    let mut law = Law::new("counit-collapse", &e.name);
    for i in 0..e.g.object_count() {
        law.case(counit_epsilon(&e.g, i).map(|m| m == identity_morphism(e.g.clone())), || {
            format!("epsilon at {} is not the identity", e.g.object_id(i))
        });
    }
    law.finish(report);

    let mut law = Law::new("unit-isomorphism", &e.name);
    for b in 0..e.g.object_count() {
        law.case(
            unit_eta(&e.v, b).map(|eta| is_cover_isomorphism(&eta).is_some() && eta.validate().is_ok()),
            || format!("eta onto {} is not a cover isomorphism", e.g.object_id(b)),
        );
    }
    law.finish(report);
}

fn pair_laws(ea: &Entry, eb: &Entry, hs: &[GroupoidMorphism], cs: &[CoverMorphism], report: &mut EquivalenceReport) {
    let subject = format!("{} -> {}", ea.name, eb.name);
    let eta_a_inv = is_cover_isomorphism(&ea.eta).expect("eta is invertible");
    let (wa, wb) = (ea.eta.target().clone(), eb.eta.target().clone());

    let mut law = Law::new("hom-count", &subject);
    law.case(Ok(hs.len() == cs.len()), || format!("|Hom_CGpd| = {}, |Hom_IGI| = {}", hs.len(), cs.len()));
    law.finish(report);

    let mut law = Law::new("G-after-C", &subject);
    for h in hs {
        law.case(functor_c_map(h, &ea.v, &eb.v).and_then(|c| functor_g_map(&c)).map(|gc| gc == *h), || {
            format!("G(C(h)) differs from h for h with {} functions", h.function_set().len())
        });
    }
    law.finish(report);

    let mut law = Law::new("hom-bijection", &subject);
    let images: Result<Vec<CoverMorphism>> = hs.iter().map(|h| functor_c_map(h, &ea.v, &eb.v)).collect();
    law.case(
        images.map(|imgs| {
            let distinct = imgs.iter().enumerate().all(|(k, c)| !imgs[..k].contains(c));
            distinct && imgs.len() == cs.len() && cs.iter().all(|c| imgs.contains(c))
        }),
        || "C is not a bijection between the Hom-sets".into(),
    );
    law.finish(report);

    let mut law = Law::new("C-after-G", &subject);
    for c in cs {
        let ok = (|| -> Result<bool> {
            let cg = functor_c_map(&functor_g_map(c)?, &wa, &wb)?;
            let conj = compose_cover_morphisms(&compose_cover_morphisms(&eta_a_inv, c)?, &eb.eta)?;
            Ok(cg == conj)
        })();
        law.case(ok, || format!("C(G(c)) differs from eta c eta^-1 for c = [{}]", c.render()));
    }
    law.finish(report);

    let mut law = Law::new("unit-naturality", &subject);
    for c in cs {
        let ok = (|| -> Result<bool> {
            let cg = functor_c_map(&functor_g_map(c)?, &wa, &wb)?;
            Ok(compose_cover_morphisms(&ea.eta, &cg)? == compose_cover_morphisms(c, &eb.eta)?)
        })();
        law.case(ok, || format!("naturality square fails at c = [{}]", c.render()));
    }
    law.finish(report);

    let mut law = Law::new("counit-naturality", &subject);
    for h in hs {
        let ok = (|| -> Result<bool> {
            let eps_a = counit_epsilon(&ea.g, ea.v.base_object())?;
            let eps_b = counit_epsilon(&eb.g, eb.v.base_object())?;
            let gch = functor_g_map(&functor_c_map(h, &ea.v, &eb.v)?)?;
            Ok(compose_morphism(&eps_a, &gch)? == compose_morphism(h, &eps_b)?)
        })();
        law.case(ok, || format!("naturality square fails at h with {} functions", h.function_set().len()));
    }
    law.finish(report);
}

type HomPair = (Vec<GroupoidMorphism>, Vec<CoverMorphism>);

fn triple_laws(e: [&Entry; 3], ab: &HomPair, bc: &HomPair, report: &mut EquivalenceReport) {
    let subject = format!("{} -> {} -> {}", e[0].name, e[1].name, e[2].name);

    let mut law = Law::new("functor-C-composition", &subject);
    for h1 in &ab.0 {
        for h2 in &bc.0 {
            let ok = (|| -> Result<bool> {
                let lhs = functor_c_map(&compose_morphism(h1, h2)?, &e[0].v, &e[2].v)?;
                let rhs = compose_cover_morphisms(&functor_c_map(h1, &e[0].v, &e[1].v)?, &functor_c_map(h2, &e[1].v, &e[2].v)?)?;
                Ok(lhs == rhs)
            })();
            law.case(ok, || "C(h2 h1) differs from C(h2) C(h1)".into());
        }
    }
    law.finish(report);

    let mut law = Law::new("functor-G-composition", &subject);
    for c1 in &ab.1 {
        for c2 in &bc.1 {
            let ok = (|| -> Result<bool> {
                let lhs = functor_g_map(&compose_cover_morphisms(c1, c2)?)?;
                let rhs = compose_morphism(&functor_g_map(c1)?, &functor_g_map(c2)?)?;
                Ok(lhs == rhs)
            })();
            law.case(ok, || format!("G(c2 c1) differs from G(c2) G(c1) at c1 = [{}], c2 = [{}]", c1.render(), c2.render()));
        }
    }
    law.finish(report);
}
