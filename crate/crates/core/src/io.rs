//! Canonical JSON documents.
//!
//! Every document is an object with `"kind"` and `"format_version": 1`.
//! Output is pretty-printed with sorted keys and sorted identifier lists, so
//! serialising a parsed canonical document reproduces it byte for byte.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::cover::{extend_groupoid, CoverMorphism, ExtendedCover, StarKind, StarRecord};
use crate::error::{Error, StructuralError};
use crate::family::{
    default_section, fibre, relative_extend, validate_family_morphism, ExtraRecord, FamilyCover, FamilyMorphism,
    GroupoidFamily, Node,
};
use crate::groupoid::{table_from_pairs, FiniteGroupoid, GroupoidBuilder};
use crate::morphism::{FunctionEntry, GroupoidEmbedding, GroupoidMorphism};
use crate::report::ValidationReport;
use crate::table::Table;

pub const FORMAT_VERSION: u64 = 1;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("unsupported format_version {0} (expected {FORMAT_VERSION})")]
    Version(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("cannot read {path}: {message}")]
    Read { path: String, message: String },
    #[error(transparent)]
    Structural(#[from] StructuralError),
    /// The payload parsed but does not satisfy its invariants.
    #[error("semantic error: {0}")]
    Semantic(ValidationReport),
    #[error(transparent)]
    Core(Error),
}

impl From<Error> for IoError {
    fn from(e: Error) -> Self {
        match e {
            Error::Structural(s) => IoError::Structural(s),
            Error::Invalid(r) => IoError::Semantic(r),
            other => IoError::Core(other),
        }
    }
}

pub type IoResult<T> = std::result::Result<T, IoError>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Document {
    Groupoid(FiniteGroupoid),
    Morphism(GroupoidMorphism),
    Embedding(GroupoidEmbedding),
    Cover(ExtendedCover),
    CoverMorphism(CoverMorphism),
    Family(GroupoidFamily),
    FamilyCover(FamilyCover),
    FamilyMorphism(FamilyMorphism),
    /// A cover given by explicit star records, not necessarily valid.
    RawCover(ExtendedCover),
    /// A family cover with hand-declared extra records.
    RawFamilyCover(FamilyCover),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Groupoid(_) => "groupoid",
            Document::Morphism(_) => "morphism",
            Document::Embedding(_) => "embedding",
            Document::Cover(_) => "cover",
            Document::CoverMorphism(_) => "cover-morphism",
            Document::Family(_) => "family",
            Document::FamilyCover(_) => "family-cover",
            Document::FamilyMorphism(_) => "family-morphism",
            Document::RawCover(_) | Document::RawFamilyCover(_) => "raw-structure",
        }
    }

    /// Runs the payload's own validator.
    pub fn validate(&self) -> IoResult<ValidationReport> {
        Ok(match self {
            Document::Groupoid(g) => g.validate(),
            Document::Morphism(h) => h.validate(),
            Document::Embedding(e) => e.validate(),
            Document::Cover(v) | Document::RawCover(v) => v.validate(),
            Document::CoverMorphism(c) => c.validate(),
            Document::Family(f) => f.validate(),
            Document::FamilyCover(fc) | Document::RawFamilyCover(fc) => fc.validate(),
            Document::FamilyMorphism(fm) => validate_family_morphism(fm, false)?,
        })
    }
}

/// Parses and validates a document. Relative paths inside it resolve
/// against `base_dir`. Raw structures are exempt from semantic validation.
pub fn parse_document(text: &str, base_dir: &Path) -> IoResult<Document> {
    let doc = parse_unchecked(text, base_dir)?;
    if !matches!(doc, Document::RawCover(_) | Document::RawFamilyCover(_)) {
        let report = doc.validate()?;
        if !report.is_ok() {
            return Err(IoError::Semantic(report));
        }
    }
    Ok(doc)
}

/// Parses a document, checking structure but not invariants.
pub fn parse_unchecked(text: &str, base_dir: &Path) -> IoResult<Document> {
    let value: Value = serde_json::from_str(text).map_err(|e| IoError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    Parser { base_dir: base_dir.to_path_buf() }.document(&value)
}

pub fn read_document(path: &Path) -> IoResult<Document> {
    let text = read_text(path)?;
    parse_document(&text, parent_dir(path))
}

pub fn read_unchecked(path: &Path) -> IoResult<Document> {
    let text = read_text(path)?;
    parse_unchecked(&text, parent_dir(path))
}

fn read_text(path: &Path) -> IoResult<String> {
    std::fs::read_to_string(path)
        .map_err(|e| IoError::Read { path: path.display().to_string(), message: e.to_string() })
}

fn parent_dir(path: &Path) -> &Path {
    path.parent().unwrap_or(Path::new("."))
}

/// Canonical text, newline-terminated.
pub fn serialize(doc: &Document) -> String {
    to_canonical_string(&to_value(doc))
}

/// Pretty-printed JSON with sorted keys.
pub fn to_canonical_string(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("values always serialise");
    s.push('\n');
    s
}

pub fn to_value(doc: &Document) -> Value {
    let mut m = match doc {
        Document::Groupoid(g) => groupoid_body(g),
        Document::Morphism(h) => morphism_body(h),
        Document::Embedding(e) => {
            let mut m = Map::new();
            m.insert("source".into(), to_value(&Document::Groupoid((**e.source()).clone())));
            m.insert("target".into(), to_value(&Document::Groupoid((**e.target()).clone())));
            let objects = e
                .iota()
                .iter()
                .zip(e.per_object())
                .enumerate()
                .map(|(i, (&j, t))| {
                    json!({
                        "src": e.source().object_id(i),
                        "dst": e.target().object_id(j),
                        "map": label_map(t, e.source().carrier(i), e.target().carrier(j)),
                    })
                })
                .collect();
            m.insert("objects".into(), Value::Array(objects));
            m
        }
        Document::Cover(v) => cover_body(v),
        Document::RawCover(v) => {
            let mut m = groupoid_body(v.base());
            let labels = v.star_labels();
            let mut records: Vec<(String, Value)> = v
                .records()
                .iter()
                .map(|r| {
                    let side = r.object.map(|j| v.base().carrier(j)).unwrap_or(labels);
                    let (dom, cod) = match r.kind {
                        StarKind::StarToStar => (labels, labels),
                        StarKind::BaseToStar => (side, labels),
                        StarKind::StarToBase => (labels, side),
                    };
                    let mut rec = json!({
                        "id": r.id(),
                        "kind": r.kind.name(),
                        "underlying": r.underlying,
                        "tag": r.tag,
                        "map": label_map(&r.table, dom, cod),
                    });
                    if let Some(j) = r.object {
                        rec["object"] = json!(v.base().object_id(j));
                    }
                    (r.id(), rec)
                })
                .collect();
            records.sort_by(|a, b| a.0.cmp(&b.0));
            m.insert(
                "star".into(),
                json!({
                    "base_object": v.base().object_id(v.base_object()),
                    "records": records.into_iter().map(|(_, r)| r).collect::<Vec<_>>(),
                }),
            );
            m
        }
        Document::CoverMorphism(c) => {
            let mut m = Map::new();
            m.insert("source".into(), to_value(&Document::Cover((**c.source()).clone())));
            m.insert("target".into(), to_value(&Document::Cover((**c.target()).clone())));
            m.insert("map".into(), label_map(c.table(), c.source().star_labels(), c.target().star_labels()));
            m
        }
        Document::Family(f) => family_body(f),
        Document::FamilyCover(fc) => family_cover_body(fc),
        Document::RawFamilyCover(fc) => {
            let mut m = family_cover_body(fc);
            let fam = fc.family();
            let node = |n: Node| match n {
                Node::Object(j) => json!({ "object": fam.total().object_id(j) }),
                Node::Star(a) => json!({ "star": fam.base()[a] }),
            };
            let labels = |n: Node| match n {
                Node::Object(j) => fam.total().carrier(j),
                Node::Star(a) => fc.fibre_covers()[a].star_labels(),
            };
            let mut extra: Vec<&ExtraRecord> = fc.extra_records().iter().collect();
            extra.sort_by(|a, b| a.id.cmp(&b.id));
            let extra: Vec<Value> = extra
                .into_iter()
                .map(|r| {
                    json!({
                        "id": r.id,
                        "from": node(r.from),
                        "to": node(r.to),
                        "map": label_map(&r.table, labels(r.from), labels(r.to)),
                    })
                })
                .collect();
            m["star"]["extra_records"] = Value::Array(extra);
            m
        }
        Document::FamilyMorphism(fm) => family_morphism_body(fm),
    };
    m.insert("kind".into(), json!(doc.kind()));
    m.insert("format_version".into(), json!(FORMAT_VERSION));
    Value::Object(m)
}

fn label_map(t: &Table, dom: &[String], cod: &[String]) -> Value {
    let m: Map<String, Value> =
        t.images().iter().enumerate().map(|(x, &y)| (dom[x].clone(), json!(cod[y]))).collect();
    Value::Object(m)
}

fn groupoid_body(g: &FiniteGroupoid) -> Map<String, Value> {
    groupoid_body_with(g, |_| None)
}

fn groupoid_body_with(g: &FiniteGroupoid, extra: impl Fn(usize) -> Option<(&'static str, Value)>) -> Map<String, Value> {
    let objects: Vec<Value> = g
        .objects()
        .iter()
        .enumerate()
        .map(|(i, o)| {
            let mut v = json!({ "id": o.id, "elements": o.elements });
            if let Some((k, x)) = extra(i) {
                v[k] = x;
            }
            v
        })
        .collect();
    let mut morphisms: Vec<&crate::groupoid::MorphismData> = g.morphisms().iter().collect();
    morphisms.sort_by(|a, b| a.id.cmp(&b.id));
    let morphisms: Vec<Value> = morphisms
        .into_iter()
        .map(|m| {
            json!({
                "id": m.id,
                "src": g.object_id(m.src),
                "dst": g.object_id(m.dst),
                "map": label_map(&m.table, g.carrier(m.src), g.carrier(m.dst)),
            })
        })
        .collect();
    let mut m = Map::new();
    m.insert("objects".into(), Value::Array(objects));
    m.insert("morphisms".into(), Value::Array(morphisms));
    m
}

fn cover_body(v: &ExtendedCover) -> Map<String, Value> {
    let mut m = groupoid_body(v.base());
    m.insert("star".into(), json!({ "base_object": v.base().object_id(v.base_object()) }));
    m
}

fn family_body(f: &GroupoidFamily) -> Map<String, Value> {
    let mut m = groupoid_body_with(f.total(), |i| Some(("fiber", json!(f.base()[f.obj_base()[i]]))));
    m.insert("base".into(), json!(f.base()));
    m
}

fn family_cover_body(fc: &FamilyCover) -> Map<String, Value> {
    let fam = fc.family();
    let mut m = family_body(fam);
    let section: Map<String, Value> = fc
        .section()
        .iter()
        .enumerate()
        .map(|(a, &obj)| (fam.base()[a].clone(), json!(fam.total().object_id(obj))))
        .collect();
    m.insert("star".into(), json!({ "section": section }));
    m
}

fn functions_value(h: &GroupoidMorphism) -> Value {
    let (s, t) = (h.source(), h.target());
    let mut entries: Vec<&FunctionEntry> = h.entries().iter().collect();
    entries.sort_by(|a, b| a.index.cmp(&b.index));
    Value::Array(
        entries
            .into_iter()
            .map(|e| {
                json!({
                    "id": e.index,
                    "src": s.object_id(e.src),
                    "dst": t.object_id(e.dst),
                    "map": label_map(&e.table, s.carrier(e.src), t.carrier(e.dst)),
                })
            })
            .collect(),
    )
}

fn morphism_body(h: &GroupoidMorphism) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("source".into(), to_value(&Document::Groupoid((**h.source()).clone())));
    m.insert("target".into(), to_value(&Document::Groupoid((**h.target()).clone())));
    m.insert("functions".into(), functions_value(h));
    m
}

fn family_morphism_body(fm: &FamilyMorphism) -> Map<String, Value> {
    let mut m = Map::new();
    match fm {
        FamilyMorphism::Groupoid { source, target, fibres } => {
            m.insert("side".into(), json!("groupoid"));
            m.insert("source".into(), to_value(&Document::Family((**source).clone())));
            m.insert("target".into(), to_value(&Document::Family((**target).clone())));
            let f: Map<String, Value> = fibres
                .iter()
                .enumerate()
                .map(|(a, h)| (source.base()[a].clone(), json!({ "functions": functions_value(h) })))
                .collect();
            m.insert("fibres".into(), Value::Object(f));
        }
        FamilyMorphism::Cover { source, target, table } => {
            m.insert("side".into(), json!("cover"));
            m.insert("source".into(), to_value(&family_cover_document(source)));
            m.insert("target".into(), to_value(&family_cover_document(target)));
            let (p1, p2) = (source.star_total(), target.star_total());
            let point = |fc: &FamilyCover, (a, e): (usize, usize)| {
                json!([fc.family().base()[a], fc.fibre_covers()[a].star_labels()[e]])
            };
            let map: Vec<Value> = table
                .iter()
                .enumerate()
                .map(|(x, &y)| json!({ "from": point(source, p1[x]), "to": point(target, p2[y]) }))
                .collect();
            m.insert("map".into(), Value::Array(map));
        }
    }
    m
}

fn family_cover_document(fc: &FamilyCover) -> Document {
    if fc.extra_records().is_empty() {
        Document::FamilyCover(fc.clone())
    } else {
        Document::RawFamilyCover(fc.clone())
    }
}

struct Parser {
    base_dir: PathBuf,
}

fn schema(msg: impl Into<String>) -> IoError {
    IoError::Schema(msg.into())
}

fn obj<'a>(v: &'a Value, what: &str) -> IoResult<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| schema(format!("{what} must be an object")))
}

fn field<'a>(m: &'a Map<String, Value>, key: &str) -> IoResult<&'a Value> {
    m.get(key).ok_or_else(|| schema(format!("missing field {key:?}")))
}

fn str_of<'a>(v: &'a Value, what: &str) -> IoResult<&'a str> {
    v.as_str().ok_or_else(|| schema(format!("{what} must be a string")))
}

fn str_field<'a>(m: &'a Map<String, Value>, key: &str) -> IoResult<&'a str> {
    str_of(field(m, key)?, key)
}

fn arr_field<'a>(m: &'a Map<String, Value>, key: &str) -> IoResult<&'a Vec<Value>> {
    field(m, key)?.as_array().ok_or_else(|| schema(format!("{key:?} must be an array")))
}

fn pairs(v: &Value, what: &str) -> IoResult<Vec<(String, String)>> {
    obj(v, what)?
        .iter()
        .map(|(k, x)| Ok((k.clone(), str_of(x, what)?.to_string())))
        .collect()
}

fn table(id: &str, v: &Value, dom: &[String], cod: &[String]) -> IoResult<Table> {
    Ok(table_from_pairs(id, dom, cod, &pairs(v, "map")?)?)
}

impl Parser {
    fn document(&self, v: &Value) -> IoResult<Document> {
        let m = obj(v, "document")?;
        match field(m, "format_version")? {
            Value::Number(n) if n.as_u64() == Some(FORMAT_VERSION) => {}
            other => return Err(IoError::Version(other.to_string())),
        }
        match str_field(m, "kind")? {
            "groupoid" => Ok(Document::Groupoid(self.groupoid(m)?)),
            "morphism" => Ok(Document::Morphism(self.morphism(m)?)),
            "embedding" => Ok(Document::Embedding(self.embedding(m)?)),
            "cover" => Ok(Document::Cover(self.cover(m)?)),
            "cover-morphism" => Ok(Document::CoverMorphism(self.cover_morphism(m)?)),
            "family" => Ok(Document::Family(self.family(m)?)),
            "family-cover" => Ok(Document::FamilyCover(self.family_cover(m)?)),
            "family-morphism" => Ok(Document::FamilyMorphism(self.family_morphism(m)?)),
            "raw-structure" => self.raw(m),
            other => Err(schema(format!("unknown kind {other:?}"))),
        }
    }

    /// An inline document or a path to one.
    fn nested(&self, v: &Value) -> IoResult<Document> {
        match v {
            Value::String(p) => {
                let path = self.base_dir.join(p);
                let text = read_text(&path)?;
                let value: Value = serde_json::from_str(&text).map_err(|e| IoError::Syntax {
                    line: e.line(),
                    column: e.column(),
                    message: format!("{}: {e}", path.display()),
                })?;
                Parser { base_dir: parent_dir(&path).to_path_buf() }.document(&value)
            }
            other => self.document(other),
        }
    }

    fn nested_groupoid(&self, v: &Value) -> IoResult<Arc<FiniteGroupoid>> {
        match self.nested(v)? {
            Document::Groupoid(g) => Ok(Arc::new(g)),
            d => Err(schema(format!("expected a groupoid, found {}", d.kind()))),
        }
    }

    fn groupoid(&self, m: &Map<String, Value>) -> IoResult<FiniteGroupoid> {
        let mut b = GroupoidBuilder::new();
        for o in arr_field(m, "objects")? {
            let o = obj(o, "object")?;
            let elements = arr_field(o, "elements")?
                .iter()
                .map(|e| str_of(e, "element").map(str::to_string))
                .collect::<IoResult<Vec<_>>>()?;
            b = b.object(str_field(o, "id")?, elements);
        }
        for x in arr_field(m, "morphisms")? {
            let x = obj(x, "morphism")?;
            b = b.morphism(str_field(x, "id")?, str_field(x, "src")?, str_field(x, "dst")?, pairs(field(x, "map")?, "map")?);
        }
        Ok(b.build()?)
    }

    fn functions(&self, list: &[Value], s: &Arc<FiniteGroupoid>, t: &Arc<FiniteGroupoid>) -> IoResult<GroupoidMorphism> {
        let mut entries = Vec::with_capacity(list.len());
        for f in list {
            let f = obj(f, "function")?;
            let index = str_field(f, "id")?.to_string();
            let src = s.object_index(str_field(f, "src")?)?;
            let dst = t.object_index(str_field(f, "dst")?)?;
            let table = table(&index, field(f, "map")?, s.carrier(src), t.carrier(dst))?;
            entries.push(FunctionEntry { index, src, dst, table });
        }
        Ok(GroupoidMorphism::new(s.clone(), t.clone(), entries)?)
    }

    fn morphism(&self, m: &Map<String, Value>) -> IoResult<GroupoidMorphism> {
        let s = self.nested_groupoid(field(m, "source")?)?;
        let t = self.nested_groupoid(field(m, "target")?)?;
        self.functions(arr_field(m, "functions")?, &s, &t)
    }

    fn embedding(&self, m: &Map<String, Value>) -> IoResult<GroupoidEmbedding> {
        let s = self.nested_groupoid(field(m, "source")?)?;
        let t = self.nested_groupoid(field(m, "target")?)?;
        let mut iota = vec![None; s.object_count()];
        let mut tables = vec![None; s.object_count()];
        for o in arr_field(m, "objects")? {
            let o = obj(o, "object map")?;
            let src_id = str_field(o, "src")?;
            let i = s.object_index(src_id)?;
            let j = t.object_index(str_field(o, "dst")?)?;
            if iota[i].replace(j).is_some() {
                return Err(StructuralError::Duplicate { what: "embedded object", id: src_id.into() }.into());
            }
            tables[i] = Some(table(src_id, field(o, "map")?, s.carrier(i), t.carrier(j))?);
        }
        let missing = |i: usize| StructuralError::NotTotal {
            id: "embedding".into(),
            detail: format!("object {} has no image", s.object_id(i)),
        };
        let iota = iota.iter().enumerate().map(|(i, x)| x.ok_or_else(|| missing(i))).collect::<Result<Vec<_>, _>>()?;
        let tables = tables.into_iter().enumerate().map(|(i, x)| x.ok_or_else(|| missing(i))).collect::<Result<Vec<_>, _>>()?;
        Ok(GroupoidEmbedding::new(s.clone(), t.clone(), iota, tables)?)
    }

    fn cover(&self, m: &Map<String, Value>) -> IoResult<ExtendedCover> {
        let g = self.groupoid(m)?;
        let star = obj(field(m, "star")?, "star")?;
        let i = g.object_index(str_field(star, "base_object")?)?;
        Ok(extend_groupoid(&g, i)?)
    }

    fn nested_cover(&self, v: &Value) -> IoResult<Arc<ExtendedCover>> {
        match self.nested(v)? {
            Document::Cover(c) | Document::RawCover(c) => Ok(Arc::new(c)),
            d => Err(schema(format!("expected a cover, found {}", d.kind()))),
        }
    }

    fn cover_morphism(&self, m: &Map<String, Value>) -> IoResult<CoverMorphism> {
        let s = self.nested_cover(field(m, "source")?)?;
        let t = self.nested_cover(field(m, "target")?)?;
        let tab = table("cover-morphism", field(m, "map")?, s.star_labels(), t.star_labels())?;
        Ok(CoverMorphism::new(s, t, tab)?)
    }

    fn family(&self, m: &Map<String, Value>) -> IoResult<GroupoidFamily> {
        let g = self.groupoid(m)?;
        let base = arr_field(m, "base")?
            .iter()
            .map(|a| str_of(a, "base point").map(str::to_string))
            .collect::<IoResult<Vec<_>>>()?;
        let mut fibre_of = vec![String::new(); g.object_count()];
        for o in arr_field(m, "objects")? {
            let o = obj(o, "object")?;
            let i = g.object_index(str_field(o, "id")?)?;
            fibre_of[i] = str_field(o, "fiber")?.to_string();
        }
        Ok(GroupoidFamily::new(g, base, &fibre_of)?)
    }

    fn section(&self, fam: &GroupoidFamily, star: &Map<String, Value>) -> IoResult<Vec<usize>> {
        let mut section = default_section(fam);
        if let Some(s) = star.get("section") {
            for (a, o) in pairs(s, "section")? {
                section[fam.base_index(&a)?] = fam.total().object_index(&o)?;
            }
        }
        Ok(section)
    }

    fn family_cover(&self, m: &Map<String, Value>) -> IoResult<FamilyCover> {
        let fam = self.family(m)?;
        let star = obj(field(m, "star")?, "star")?;
        let section = self.section(&fam, star)?;
        Ok(relative_extend(&fam, &section)?)
    }

    fn raw(&self, m: &Map<String, Value>) -> IoResult<Document> {
        if m.contains_key("base") {
            let fc = self.family_cover(m)?;
            let star = obj(field(m, "star")?, "star")?;
            let fam = fc.family().clone();
            let node = |v: &Value| -> IoResult<Node> {
                let n = obj(v, "node")?;
                if let Some(o) = n.get("object") {
                    Ok(Node::Object(fam.total().object_index(str_of(o, "object")?)?))
                } else {
                    Ok(Node::Star(fam.base_index(str_of(field(n, "star")?, "star")?)?))
                }
            };
            let labels = |n: Node| -> Vec<String> {
                match n {
                    Node::Object(j) => fam.total().carrier(j).to_vec(),
                    Node::Star(a) => fc.fibre_covers()[a].star_labels().to_vec(),
                }
            };
            let mut extra = Vec::new();
            for r in star.get("extra_records").and_then(Value::as_array).into_iter().flatten() {
                let r = obj(r, "record")?;
                let id = str_field(r, "id")?.to_string();
                let (from, to) = (node(field(r, "from")?)?, node(field(r, "to")?)?);
                let t = table(&id, field(r, "map")?, &labels(from), &labels(to))?;
                extra.push(ExtraRecord { id, from, to, table: t });
            }
            return Ok(Document::RawFamilyCover(fc.with_extra_records(extra)?));
        }
        let g = self.groupoid(m)?;
        let star = obj(field(m, "star")?, "star")?;
        let i = g.object_index(str_field(star, "base_object")?)?;
        let labels = g.carrier(i).to_vec();
        let mut records = Vec::new();
        for r in arr_field(star, "records")? {
            let r = obj(r, "record")?;
            let kind_name = str_field(r, "kind")?;
            let kind = StarKind::parse(kind_name).ok_or_else(|| schema(format!("unknown record kind {kind_name:?}")))?;
            let underlying = str_field(r, "underlying")?.to_string();
            let tag = field(r, "tag")?
                .as_u64()
                .and_then(|t| u8::try_from(t).ok())
                .ok_or_else(|| schema("record tag must be a small integer"))?;
            let object = match r.get("object") {
                Some(o) => Some(g.object_index(str_of(o, "object")?)?),
                None => None,
            };
            let side = object.map(|j| g.carrier(j).to_vec()).unwrap_or_else(|| labels.clone());
            let (dom, cod) = match kind {
                StarKind::StarToStar => (&labels, &labels),
                StarKind::BaseToStar => (&side, &labels),
                StarKind::StarToBase => (&labels, &side),
            };
            let provisional = format!("{kind_name}__{underlying}__{tag}");
            let t = table(&provisional, field(r, "map")?, dom, cod)?;
            let record = StarRecord { kind, underlying, tag, object, table: t };
            if let Some(id) = r.get("id") {
                if str_of(id, "id")? != record.id() {
                    return Err(schema(format!("record id {id} does not match {}", record.id())));
                }
            }
            records.push(record);
        }
        Ok(Document::RawCover(ExtendedCover::from_records(g, i, records)?))
    }

    fn nested_family(&self, v: &Value) -> IoResult<Arc<GroupoidFamily>> {
        match self.nested(v)? {
            Document::Family(f) => Ok(Arc::new(f)),
            d => Err(schema(format!("expected a family, found {}", d.kind()))),
        }
    }

    fn nested_family_cover(&self, v: &Value) -> IoResult<Arc<FamilyCover>> {
        match self.nested(v)? {
            Document::FamilyCover(f) | Document::RawFamilyCover(f) => Ok(Arc::new(f)),
            d => Err(schema(format!("expected a family cover, found {}", d.kind()))),
        }
    }

    fn family_morphism(&self, m: &Map<String, Value>) -> IoResult<FamilyMorphism> {
        match str_field(m, "side")? {
            "groupoid" => {
                let s = self.nested_family(field(m, "source")?)?;
                let t = self.nested_family(field(m, "target")?)?;
                let fibres_v = obj(field(m, "fibres")?, "fibres")?;
                let mut fibres = Vec::with_capacity(s.base().len());
                for a in s.base() {
                    let f = obj(
                        fibres_v.get(a).ok_or_else(|| schema(format!("no morphism given over {a}")))?,
                        "fibre morphism",
                    )?;
                    let fs = Arc::new(fibre(&s, a)?);
                    let ft = Arc::new(fibre(&t, a).map_err(|_| {
                        IoError::Core(Error::Mismatch("source and target families have different bases".into()))
                    })?);
                    fibres.push(self.functions(arr_field(f, "functions")?, &fs, &ft)?);
                }
                Ok(FamilyMorphism::Groupoid { source: s, target: t, fibres })
            }
            "cover" => {
                let s = self.nested_family_cover(field(m, "source")?)?;
                let t = self.nested_family_cover(field(m, "target")?)?;
                let point = |fc: &FamilyCover, v: &Value| -> IoResult<usize> {
                    let p = v.as_array().filter(|p| p.len() == 2).ok_or_else(|| schema("a star point is [base, element]"))?;
                    let a = fc.family().base_index(str_of(&p[0], "base point")?)?;
                    let label = str_of(&p[1], "element")?;
                    let e = fc.fibre_covers()[a]
                        .star_labels()
                        .iter()
                        .position(|l| l == label)
                        .ok_or_else(|| StructuralError::Unknown { what: "star element", id: label.into() })?;
                    Ok(fc.star_point(a, e))
                };
                let mut images: BTreeMap<usize, usize> = BTreeMap::new();
                for x in arr_field(m, "map")? {
                    let x = obj(x, "map entry")?;
                    let (p, q) = (point(&s, field(x, "from")?)?, point(&t, field(x, "to")?)?);
                    if images.insert(p, q).is_some() {
                        return Err(StructuralError::NotTotal { id: "family-morphism".into(), detail: "a point is mapped twice".into() }.into());
                    }
                }
                let n = s.star_total().len();
                if images.len() != n {
                    return Err(StructuralError::NotTotal { id: "family-morphism".into(), detail: "not every star point is mapped".into() }.into());
                }
                Ok(FamilyMorphism::Cover { source: s, target: t, table: images.into_values().collect() })
            }
            other => Err(schema(format!("unknown side {other:?}"))),
        }
    }
}
