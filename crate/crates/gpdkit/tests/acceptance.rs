//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::collections::{BTreeSet, HashMap};
use std::path::Path;
use std::sync::Arc;

use rand::rngs::StdRng;
use rand::SeedableRng;

use gpdkit_core::cover::{
    base_choice_transport, compose_cover_morphisms, enumerate_cover_morphisms, extend_groupoid, is_cover_isomorphism,
    restrict_cover, star_determinacy_check,
};
use gpdkit_core::equivalence::{counit_epsilon, functor_c_map, functor_g_map, unit_eta};
use gpdkit_core::family::{
    default_section, family_from_components, independence_check, relative_extend, relative_restrict,
    validate_family_morphism,
};
use gpdkit_core::io::{parse_document, serialize, Document};
use gpdkit_core::morphism::{
    compose_morphism, decide_equivalence, enumerate_morphisms, identity_morphism, is_isomorphism, GroupoidMorphism,
};
use gpdkit_core::{fixtures, CoverMorphism, ExtendedCover, FiniteGroupoid, SearchBound, StarKind};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn corpus() -> Vec<(&'static str, Arc<FiniteGroupoid>)> {
    fixtures::corpus().into_iter().map(|(n, g)| (n, Arc::new(g))).collect()
}

/// Brute-force groupoid check straight from the raw lists: bijective tables,
/// distinct morphisms, identities, inverses and all composites.
fn brute_force_is_groupoid(g: &FiniteGroupoid) -> bool {
    let sizes: Vec<usize> = g.objects().iter().map(|o| o.elements.len()).collect();
    if sizes.contains(&0) {
        return false;
    }
    let mut set: BTreeSet<(usize, usize, Vec<usize>)> = BTreeSet::new();
    for m in g.morphisms() {
        let t = m.table.images().to_vec();
        let mut seen = vec![false; sizes[m.dst]];
        if sizes[m.src] != sizes[m.dst] || t.len() != sizes[m.src] {
            return false;
        }
        for &y in &t {
            if seen[y] {
                return false;
            }
            seen[y] = true;
        }
        if !set.insert((m.src, m.dst, t)) {
            return false;
        }
    }
    for (i, &n) in sizes.iter().enumerate() {
        if !set.contains(&(i, i, (0..n).collect())) {
            return false;
        }
    }
    for (s, d, t) in &set {
        let mut inv = vec![0; t.len()];
        for (x, &y) in t.iter().enumerate() {
            inv[y] = x;
        }
        if !set.contains(&(*d, *s, inv)) {
            return false;
        }
        for (s2, d2, t2) in &set {
            if s2 == d {
                let comp: Vec<usize> = (0..t.len()).map(|x| t2[t[x]]).collect();
                if !set.contains(&(*s, *d2, comp)) {
                    return false;
                }
            }
        }
    }
    true
}

fn criterion_1() -> Outcome {
    let mut rng = StdRng::seed_from_u64(1);
    let mut valid = 0;
    let mut mutated = 0;
    for k in 0..200 {
        let c = common::random_candidate(&mut rng);
        let g = c.build();
        let ours = g.validate().is_ok();
        let oracle = brute_force_is_groupoid(&g);
        ensure(ours == oracle, || format!("candidate {k} ({}): validator {ours}, oracle {oracle}", c.mutation))?;
        valid += oracle as usize;
        mutated += (c.mutation != "none") as usize;
    }
    Ok(format!("200/200 agree ({valid} valid, {mutated} mutated)"))
}

fn expected_count(g: &FiniteGroupoid, i: usize) -> usize {
    let mut between: HashMap<(usize, usize), usize> = HashMap::new();
    for m in g.morphisms() {
        *between.entry((m.src, m.dst)).or_default() += 1;
    }
    let hom = |a, b| between.get(&(a, b)).copied().unwrap_or(0);
    3 * hom(i, i) + (0..g.object_count()).filter(|&j| j != i).map(|j| hom(i, j) + hom(j, i)).sum::<usize>()
}

fn criterion_2() -> Outcome {
    let mut rng = StdRng::seed_from_u64(2);
    let mut groupoids: Vec<FiniteGroupoid> = corpus().into_iter().map(|(_, g)| (*g).clone()).collect();
    groupoids.extend((0..100).map(|_| common::random_connected(&mut rng, 3, 3)));
    let mut cases = 0;
    for (k, g) in groupoids.iter().enumerate() {
        for i in 0..g.object_count() {
            let v = extend_groupoid(g, i).map_err(|e| e.to_string())?;
            let (want, got) = (expected_count(g, i), v.records().len());
            ensure(want == got, || format!("groupoid {k} object {i}: {got} records, expected {want}"))?;
            cases += 1;
        }
    }
    Ok(format!("{cases} extensions over 4 fixtures and 100 random groupoids"))
}

fn criterion_3() -> Outcome {
    let mut cases = 0;
    for (name, g) in corpus() {
        for i in 0..g.object_count() {
            let v = extend_groupoid(&g, i).map_err(|e| e.to_string())?;
            ensure(restrict_cover(&v) == *g, || format!("{name} at {i}"))?;
            cases += 1;
        }
    }
    let families = [
        fixtures::z2_plus_rigid2(),
        fixtures::copies(&fixtures::tors2(), &["p_", "q_"]),
        fixtures::copies(&fixtures::triv1(), &["p_", "q_", "r_"]),
    ];
    for g in &families {
        let fam = family_from_components(g);
        for j in 0..fam.total().object_count() {
            let mut section = default_section(&fam);
            section[fam.obj_base()[j]] = j;
            let fc = relative_extend(&fam, &section).map_err(|e| e.to_string())?;
            ensure(relative_restrict(&fc) == fam, || format!("family {:?}", fam.base()))?;
            cases += 1;
        }
    }
    Ok(format!("{cases} round trips exact"))
}

fn criterion_4() -> Outcome {
    let mut cases = 0;
    for (name, g) in corpus() {
        for i in 0..g.object_count() {
            for j in 0..g.object_count() {
                let there = base_choice_transport(&g, i, j).map_err(|e| e.to_string())?;
                let back = base_choice_transport(&g, j, i).map_err(|e| e.to_string())?;
                ensure(there.validate().is_ok() && is_cover_isomorphism(&there).is_some(), || format!("{name} {i}->{j}"))?;
                let round = compose_cover_morphisms(&back, &there).map_err(|e| e.to_string())?;
                ensure(round == CoverMorphism::identity(back.source().clone()), || format!("{name} {j}->{i}->{j}"))?;
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} object pairs"))
}

fn criterion_5() -> Outcome {
    let mut cases = 0;
    for (name, g) in corpus() {
        for i in 0..g.object_count() {
            let v = extend_groupoid(&g, i).map_err(|e| e.to_string())?;
            // tagging sends (a,0) to a; compare tables through it
            let tag_of: HashMap<String, usize> =
                v.star_elements().iter().enumerate().map(|(k, e)| (e.base_label.clone(), k)).collect();
            let tau: Vec<usize> = g.carrier(i).iter().map(|a| tag_of[a]).collect();
            let mut conjugated = BTreeSet::new();
            for r in v.records_of(StarKind::StarToStar) {
                let t: Vec<usize> = (0..tau.len())
                    .map(|a| {
                        let star = r.table.apply(tau[a]);
                        tau.iter().position(|&s| s == star).unwrap()
                    })
                    .collect();
                let underlying = g.morphism_index(&r.underlying).map_err(|e| e.to_string())?;
                ensure(g.morphisms()[underlying].table.images() == t.as_slice(), || {
                    format!("{name}: star automorphism {} is not its underlying morphism", r.id())
                })?;
                conjugated.insert(t);
            }
            let aut: BTreeSet<Vec<usize>> = g.hom_tables(i, i).map(|t| t.images().to_vec()).collect();
            ensure(conjugated == aut && v.star_aut().order() == aut.len(), || format!("{name} at {i}"))?;
            cases += 1;
        }
    }
    Ok(format!("{cases} extensions, Aut(star) conjugate to Aut(i) elementwise"))
}

fn all_morphisms(bound: &SearchBound) -> Result<HashMap<(usize, usize), Vec<GroupoidMorphism>>, String> {
    let c = corpus();
    let mut out = HashMap::new();
    for (a, (_, g1)) in c.iter().enumerate() {
        for (b, (_, g2)) in c.iter().enumerate() {
            out.insert((a, b), enumerate_morphisms(g1, g2, bound).map_err(|e| e.to_string())?);
        }
    }
    Ok(out)
}

fn criterion_6() -> Outcome {
    let bound = SearchBound::default();
    let homs = all_morphisms(&bound)?;
    let c = corpus();
    let n = c.len();
    let mut triples = 0;
    for a in 0..n {
        let id_a = identity_morphism(c[a].1.clone());
        for b in 0..n {
            let id_b = identity_morphism(c[b].1.clone());
            for f in &homs[&(a, b)] {
                let left = compose_morphism(&id_a, f).map_err(|e| e.to_string())?;
                let right = compose_morphism(f, &id_b).map_err(|e| e.to_string())?;
                ensure(left == *f && right == *f, || format!("identity law fails on {} -> {}", c[a].0, c[b].0))?;
                for cc in 0..n {
                    for g in &homs[&(b, cc)] {
                        let fg = compose_morphism(f, g).map_err(|e| e.to_string())?;
                        for d in 0..n {
                            for h in &homs[&(cc, d)] {
                                let l = compose_morphism(&fg, h).map_err(|e| e.to_string())?;
                                let r = compose_morphism(f, &compose_morphism(g, h).map_err(|e| e.to_string())?)
                                    .map_err(|e| e.to_string())?;
                                ensure(l == r, || {
                                    format!("associativity fails on {} -> {} -> {} -> {}", c[a].0, c[b].0, c[cc].0, c[d].0)
                                })?;
                                triples += 1;
                            }
                        }
                    }
                }
            }
        }
    }
    let mut isos = 0;
    for ((a, b), list) in &homs {
        for h in list {
            let bijective = h.function_set().iter().all(|(_, d, t)| {
                let s: BTreeSet<usize> = t.images().iter().copied().collect();
                s.len() == t.len() && t.len() == h.target().carrier_size(*d)
            });
            match is_isomorphism(h) {
                Some(inv) => {
                    ensure(bijective, || format!("{} -> {}: isomorphism with a non-bijective function", c[*a].0, c[*b].0))?;
                    let there = compose_morphism(h, &inv).map_err(|e| e.to_string())?;
                    let back = compose_morphism(&inv, h).map_err(|e| e.to_string())?;
                    ensure(
                        there == identity_morphism(c[*a].1.clone()) && back == identity_morphism(c[*b].1.clone()),
                        || "inverse does not compose to identities".into(),
                    )?;
                    let inverse_in_enumeration = homs[&(*b, *a)].contains(&inv);
                    ensure(inverse_in_enumeration, || "inverse missing from the enumeration".into())?;
                    isos += 1;
                }
                None => ensure(!bijective, || format!("{} -> {}: bijective but not invertible", c[*a].0, c[*b].0))?,
            }
        }
    }
    Ok(format!("{triples} composable triples associative, {isos} isomorphisms all bijective and conversely"))
}

fn criterion_7() -> Outcome {
    let z2 = Arc::new(fixtures::z2());
    let d = decide_equivalence(&z2, &Arc::new(fixtures::tors2())).map_err(|e| e.to_string())?;
    let w = d.witness.ok_or("Z2 and TORS2 judged inequivalent")?;
    ensure(w.embed_left.validate().is_ok() && w.embed_right.validate().is_ok(), || "witness embeddings invalid".into())?;
    let d = decide_equivalence(&z2, &Arc::new(fixtures::rigid2())).map_err(|e| e.to_string())?;
    ensure(!d.equivalent() && d.reason.contains("no conjugating bijection"), || format!("Z2 vs RIGID2: {}", d.reason))?;
    let mut rng = StdRng::seed_from_u64(7);
    for k in 0..50 {
        let g = common::random_connected(&mut rng, 3, 3);
        let g1 = Arc::new(common::random_restriction(&mut rng, &g));
        let g2 = Arc::new(common::random_restriction(&mut rng, &g));
        let d = decide_equivalence(&g1, &g2).map_err(|e| e.to_string())?;
        let ok = d.witness.is_some_and(|w| w.embed_left.validate().is_ok() && w.embed_right.validate().is_ok());
        ensure(ok, || format!("random case {k}: {}", d.reason))?;
    }
    Ok("Z2~TORS2 with valid witness, Z2!~RIGID2, 50/50 restriction pairs equivalent".into())
}

fn covers(c: &[(&str, Arc<FiniteGroupoid>)], at: impl Fn(&FiniteGroupoid) -> usize) -> Result<Vec<Arc<ExtendedCover>>, String> {
    c.iter().map(|(_, g)| extend_groupoid(g, at(g)).map(Arc::new).map_err(|e| e.to_string())).collect()
}

fn criterion_8() -> Outcome {
    let bound = SearchBound::default();
    let c = corpus();
    let n = c.len();
    let homs = all_morphisms(&bound)?;
    let first = covers(&c, |_| 0)?;
    let last = covers(&c, |g| g.object_count() - 1)?;
    let err = |e: gpdkit_core::Error| e.to_string();
    let (mut ga, mut cb) = (0, 0);
    let mut cover_homs = HashMap::new();
    for a in 0..n {
        for b in 0..n {
            // (a)
            for h in &homs[&(a, b)] {
                let ch = functor_c_map(h, &first[a], &first[b]).map_err(err)?;
                ensure(functor_g_map(&ch).map_err(err)? == *h, || format!("G(C(h)) != h on {} -> {}", c[a].0, c[b].0))?;
                ga += 1;
            }
            // (b)
            let cs = enumerate_cover_morphisms(&first[a], &first[b], &bound).map_err(err)?;
            let eta_a = unit_eta(&first[a], c[a].1.object_count() - 1).map_err(err)?;
            let eta_b = unit_eta(&first[b], c[b].1.object_count() - 1).map_err(err)?;
            let eta_a_inv = is_cover_isomorphism(&eta_a).ok_or("unit is not invertible")?;
            for g in &cs {
                let cg = functor_c_map(&functor_g_map(g).map_err(err)?, &last[a], &last[b]).map_err(err)?;
                let conj = compose_cover_morphisms(&compose_cover_morphisms(&eta_a_inv, g).map_err(err)?, &eta_b).map_err(err)?;
                ensure(cg == conj, || format!("C(G(g)) != eta g eta^-1 on {} -> {}", c[a].0, c[b].0))?;
                cb += 1;
            }
            // (d)
            ensure(cs.len() == homs[&(a, b)].len(), || {
                format!("{} -> {}: {} groupoid morphisms, {} cover morphisms", c[a].0, c[b].0, homs[&(a, b)].len(), cs.len())
            })?;
            cover_homs.insert((a, b), cs);
        }
    }
    // (c)
    let mut laws = 0;
    for a in 0..n {
        let id = identity_morphism(c[a].1.clone());
        let cid = CoverMorphism::identity(first[a].clone());
        ensure(functor_c_map(&id, &first[a], &first[a]).map_err(err)? == cid, || format!("C(id) on {}", c[a].0))?;
        ensure(functor_g_map(&cid).map_err(err)? == id, || format!("G(id) on {}", c[a].0))?;
        for b in 0..n {
            for cc in 0..n {
                for f in &homs[&(a, b)] {
                    for g in &homs[&(b, cc)] {
                        let lhs = functor_c_map(&compose_morphism(f, g).map_err(err)?, &first[a], &first[cc]).map_err(err)?;
                        let rhs = compose_cover_morphisms(
                            &functor_c_map(f, &first[a], &first[b]).map_err(err)?,
                            &functor_c_map(g, &first[b], &first[cc]).map_err(err)?,
                        )
                        .map_err(err)?;
                        ensure(lhs == rhs, || "C does not preserve composition".into())?;
                        laws += 1;
                    }
                }
                for f in &cover_homs[&(a, b)] {
                    for g in &cover_homs[&(b, cc)] {
                        let lhs = functor_g_map(&compose_cover_morphisms(f, g).map_err(err)?).map_err(err)?;
                        let rhs = compose_morphism(&functor_g_map(f).map_err(err)?, &functor_g_map(g).map_err(err)?).map_err(err)?;
                        ensure(lhs == rhs, || "G does not preserve composition".into())?;
                        laws += 1;
                    }
                }
            }
        }
    }
    let count = |a: &str, b: &str| {
        let ia = c.iter().position(|x| x.0 == a).unwrap();
        let ib = c.iter().position(|x| x.0 == b).unwrap();
        (homs[&(ia, ib)].len(), cover_homs[&(ia, ib)].len())
    };
    ensure(count("Z2", "RIGID2") == (2, 2), || format!("|Hom(Z2,RIGID2)| = {:?}", count("Z2", "RIGID2")))?;
    ensure(count("RIGID2", "Z2") == (0, 0), || format!("|Hom(RIGID2,Z2)| = {:?}", count("RIGID2", "Z2")))?;
    Ok(format!(
        "(a) {ga} morphisms, (b) {cb} cover morphisms, (c) {laws} composites, (d) counts agree, Z2->RIGID2 = 2, RIGID2->Z2 = 0"
    ))
}

fn criterion_9() -> Outcome {
    let mut cases = 0;
    for (name, g) in corpus() {
        for i in 0..g.object_count() {
            let e = counit_epsilon(&g, i).map_err(|e| e.to_string())?;
            ensure(e == identity_morphism(g.clone()), || format!("{name} at {i}"))?;
            cases += 1;
        }
    }
    Ok(format!("{cases} counits equal the identity"))
}

fn criterion_10() -> Outcome {
    let mut rng = StdRng::seed_from_u64(10);
    let mut groupoids: Vec<FiniteGroupoid> = corpus().into_iter().map(|(_, g)| (*g).clone()).collect();
    groupoids.extend((0..30).map(|_| common::random_connected(&mut rng, 3, 3)));
    let mut cases = 0;
    for g in &groupoids {
        for i in 0..g.object_count() {
            let v = extend_groupoid(g, i).map_err(|e| e.to_string())?;
            let r = star_determinacy_check(&v);
            ensure(r.is_ok(), || format!("extension failed: {r}"))?;
            cases += 1;
        }
    }
    let adversarial = star_determinacy_check(&fixtures::ghost_cover());
    ensure(adversarial.has("star-determinacy"), || "adversarial raw structure passed".into())?;
    Ok(format!("{cases} extensions pass, adversarial raw structure fails"))
}

fn criterion_11() -> Outcome {
    let bound = SearchBound::default();
    let pieces = [fixtures::triv1(), fixtures::z2(), fixtures::rigid2(), fixtures::tors2()];
    let prefixes = ["p_", "q_", "r_"];
    let mut families = 0;
    for size in 1..=3 {
        for combo in multisets(pieces.len(), size) {
            let parts: Vec<FiniteGroupoid> =
                combo.iter().enumerate().map(|(k, &p)| pieces[p].with_prefix(prefixes[k]).unwrap()).collect();
            let total = parts[1..].iter().fold(parts[0].clone(), |acc, p| acc.disjoint_union(p).unwrap());
            let fam = family_from_components(&total);
            let fc = relative_extend(&fam, &default_section(&fam)).map_err(|e| e.to_string())?;
            let ind = independence_check(&fc, &bound).map_err(|e| e.to_string())?;
            let product: usize = parts.iter().map(|p| p.aut_group(0).order()).product();
            ensure(ind.report.is_ok() && ind.automorphism_count == product && ind.product_order == product, || {
                format!("{combo:?}: {} automorphisms, expected {product}; {}", ind.automorphism_count, ind.report)
            })?;
            families += 1;
        }
    }
    let crossing = independence_check(&fixtures::crossing_family_cover(), &bound).map_err(|e| e.to_string())?;
    ensure(!crossing.report.is_ok(), || "cross-fibre structure accepted".into())?;
    let fm = validate_family_morphism(&fixtures::fibre_crossing_morphism(), false).map_err(|e| e.to_string())?;
    ensure(fm.has("fibre-crossing"), || "fibre-crossing morphism accepted".into())?;
    Ok(format!("{families} families: |Aut| equals the product; fibre-crossing fixtures rejected"))
}

/// Multisets of `size` indices below `n`, as nondecreasing sequences.
fn multisets(n: usize, size: usize) -> Vec<Vec<usize>> {
    if size == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for rest in multisets(n, size - 1) {
        let start = rest.last().copied().unwrap_or(0);
        for k in start..n {
            let mut v = rest.clone();
            v.push(k);
            out.push(v);
        }
    }
    out
}

fn criterion_12() -> Outcome {
    let mut docs: Vec<Document> = Vec::new();
    for (_, g) in corpus() {
        docs.push(Document::Groupoid((*g).clone()));
        for i in 0..g.object_count() {
            docs.push(Document::Cover(extend_groupoid(&g, i).map_err(|e| e.to_string())?));
        }
    }
    let homs = all_morphisms(&SearchBound::default())?;
    docs.extend(homs.values().flatten().map(|h| Document::Morphism(h.clone())));
    let fam = family_from_components(&fixtures::z2_plus_rigid2());
    docs.push(Document::Family(fam.clone()));
    docs.push(Document::FamilyCover(relative_extend(&fam, &default_section(&fam)).map_err(|e| e.to_string())?));
    docs.push(Document::RawCover(fixtures::ghost_cover()));
    docs.push(Document::RawFamilyCover(fixtures::crossing_family_cover()));
    docs.push(Document::FamilyMorphism(fixtures::fibre_crossing_morphism()));
    let z2 = Arc::new(fixtures::z2());
    let w = decide_equivalence(&z2, &Arc::new(fixtures::tors2())).map_err(|e| e.to_string())?.witness.unwrap();
    docs.push(Document::Embedding(w.embed_left));
    let v = Arc::new(extend_groupoid(&z2, 0).map_err(|e| e.to_string())?);
    docs.push(Document::CoverMorphism(CoverMorphism::identity(v)));
    for d in &docs {
        let text = serialize(d);
        let back = gpdkit_core::io::parse_unchecked(&text, Path::new(".")).map_err(|e| e.to_string())?;
        ensure(serialize(&back) == text && back == *d, || format!("{} document does not round-trip", d.kind()))?;
        if !matches!(d, Document::RawCover(_) | Document::RawFamilyCover(_) | Document::FamilyMorphism(_)) {
            parse_document(&text, Path::new(".")).map_err(|e| format!("{}: {e}", d.kind()))?;
        }
    }

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let write = |name: &str, d: &Document| {
        let p = dir.path().join(name);
        std::fs::write(&p, serialize(d)).unwrap();
        p.display().to_string()
    };
    let z2f = write("z2.gpd", &Document::Groupoid(fixtures::z2()));
    let tors = write("tors2.gpd", &Document::Groupoid(fixtures::tors2()));
    let rigid = write("rigid2.gpd", &Document::Groupoid(fixtures::rigid2()));
    let mut broken_text = serialize(&Document::Groupoid(fixtures::z2()));
    broken_text = broken_text.replacen("\"a\": \"b\"", "\"a\": \"a\"", 1);
    let broken = dir.path().join("broken.gpd");
    std::fs::write(&broken, broken_text).unwrap();
    let broken = broken.display().to_string();
    let cases: Vec<(Vec<&str>, i32)> = vec![
        (vec!["equiv", &z2f, &tors], 0),
        (vec!["equiv", &z2f, &rigid], 1),
        (vec!["validate", &broken], 1),
        (vec!["frobnicate"], 2),
        (vec!["validate", "/nonexistent/file.gpd"], 2),
        (vec!["enumerate", "morphisms", &z2f, &rigid, "--bound", "3"], 3),
    ];
    for (args, want) in cases {
        for format in ["text", "json"] {
            let mut argv = vec!["gpdkit", "--format", format];
            argv.extend(args.iter().copied());
            let out = gpdkit::run(&argv);
            ensure(out.code == want, || format!("{argv:?}: exit {} (wanted {want}); {}", out.code, out.stderr))?;
            ensure(out.code != 2 || out.stdout.is_empty(), || format!("{argv:?} wrote a report and returned 2"))?;
            if format == "json" && out.code <= 1 {
                let v: serde_json::Value = serde_json::from_str(&out.stdout).map_err(|e| e.to_string())?;
                ensure(v["format_version"] == 1 && v["violations"].is_array(), || format!("{argv:?}: malformed report"))?;
            }
        }
    }
    let equiv = gpdkit::run(["gpdkit", "--format", "json", "equiv", &z2f, &rigid]);
    ensure(equiv.stdout.contains("no conjugating bijection"), || "missing reason".into())?;
    Ok(format!("{} documents round-trip byte-identically; exit codes 0/1/2/3 as specified", docs.len()))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("groupoid axioms oracle", criterion_1),
        ("construction count law", criterion_2),
        ("object round trips", criterion_3),
        ("base-choice independence", criterion_4),
        ("liaison group transport", criterion_5),
        ("morphism calculus", criterion_6),
        ("equivalence decision", criterion_7),
        ("category equivalence", criterion_8),
        ("counit collapse", criterion_9),
        ("star determinacy", criterion_10),
        ("independence of fibres", criterion_11),
        ("serialization and exit codes", criterion_12),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS criterion {:>2} {name}: {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {:>2} {name}: {why}", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
