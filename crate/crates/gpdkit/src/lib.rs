//! Command dispatch for the `gpdkit` binary.
//!
//! [`run`] takes an argument vector and returns the exit code together with
//! everything destined for standard output and standard error.
//!
//! Exit codes: 0 success or true, 1 checked-false or validation failure
//! (report on stdout), 2 usage, IO or structural error (stderr only),
//! 3 search bound exceeded.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use gpdkit_core::cover::{
    compose_cover_morphisms, enumerate_cover_morphisms, extend_groupoid, is_cover_isomorphism, restrict_cover,
    star_determinacy_check,
};
use gpdkit_core::equivalence::{check_equivalence_laws, counit_epsilon, functor_c_map, functor_g_map, unit_eta};
use gpdkit_core::family::{
    default_section, family_from_components, independence_check, internality_census, relative_extend, relative_restrict,
    section_from_ids, validate_family_morphism,
};
use gpdkit_core::io::{read_document, read_unchecked, serialize, to_canonical_string, to_value, Document, IoError, FORMAT_VERSION};
use gpdkit_core::morphism::{
    compose_morphism, decide_equivalence, enumerate_morphisms, identity_morphism, is_isomorphism, saturate_morphism,
    FunctionTriple,
};
use gpdkit_core::{fixtures, CoverMorphism, Error, ExtendedCover, FamilyCover, FiniteGroupoid, GroupoidMorphism, SearchBound, ValidationReport, Violation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "gpdkit", version, about = "Finite groupoids, their covers and families")]
struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Element limit for exhaustive searches (also caps star points).
    #[arg(long, global = true)]
    bound: Option<usize>,
    /// Write the produced document here instead of standard output.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate any document.
    Validate { file: PathBuf },
    /// Connected components of a groupoid.
    Components { file: PathBuf },
    /// Automorphism group of an object.
    Aut { file: PathBuf, object: String },
    /// Faithful base tuple at an object.
    Base { file: PathBuf, object: String },
    /// One-object extension of a connected groupoid at an object.
    Extend { file: PathBuf, object: String },
    /// Base groupoid of a cover.
    Restrict { file: PathBuf },
    MorphismCheck { file: PathBuf },
    /// Smallest morphism containing the listed functions.
    Saturate { file: PathBuf },
    /// Composite `second ∘ first`.
    Compose { first: PathBuf, second: PathBuf },
    Iso { file: PathBuf },
    /// Decide whether two connected groupoids are equivalent.
    Equiv { left: PathBuf, right: PathBuf },
    CoverMorphismCheck { file: PathBuf },
    CoverCompose { first: PathBuf, second: PathBuf },
    CoverIso { file: PathBuf },
    Determinacy { file: PathBuf },
    FunctorG { file: PathBuf },
    /// Cover morphism of a groupoid morphism, between extensions at the given objects.
    FunctorC {
        file: PathBuf,
        #[arg(long)]
        source_object: Option<String>,
        #[arg(long)]
        target_object: Option<String>,
    },
    /// Unit comparison from a cover to the extension at another object.
    Eta { file: PathBuf, object: String },
    /// Counit at an object, compared with the identity.
    Epsilon { file: PathBuf, object: String },
    /// Check the equivalence laws over groupoid files (default: built-in fixtures).
    Laws { files: Vec<PathBuf> },
    /// Family whose fibres are the connected components.
    FamilySplit { file: PathBuf },
    /// Fibrewise extension; sections given as `base=object`.
    FamilyExtend {
        file: PathBuf,
        #[arg(long = "section", value_name = "BASE=OBJECT")]
        section: Vec<String>,
    },
    FamilyRestrict { file: PathBuf },
    Independence { file: PathBuf },
    Census { file: PathBuf },
    FamilyMorphismCheck {
        file: PathBuf,
        /// Also check the fibrewise functor laws.
        #[arg(long)]
        laws: bool,
    },
    /// Exhaustive enumeration (bounded).
    Enumerate {
        #[arg(value_enum)]
        what: Enumerable,
        source: PathBuf,
        target: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Enumerable {
    Morphisms,
    Covers,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Failure before a report exists.
enum Fail {
    Usage(String),
    Bound(String),
    /// Semantic invalidity of an input; reported with exit 1.
    Invalid(ValidationReport),
}

impl From<IoError> for Fail {
    fn from(e: IoError) -> Self {
        match e {
            IoError::Semantic(r) => Fail::Invalid(r),
            IoError::Core(e) => e.into(),
            other => Fail::Usage(other.to_string()),
        }
    }
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        match e {
            Error::Bound(b) => Fail::Bound(b.to_string()),
            Error::Invalid(r) => Fail::Invalid(r),
            other => Fail::Usage(other.to_string()),
        }
    }
}

impl From<gpdkit_core::StructuralError> for Fail {
    fn from(e: gpdkit_core::StructuralError) -> Self {
        Fail::Usage(e.to_string())
    }
}

/// A command's result before rendering.
struct Report {
    command: &'static str,
    ok: bool,
    violations: Vec<Violation>,
    fields: Map<String, Value>,
    lines: Vec<String>,
    document: Option<Document>,
    /// Overrides the exit code derived from `ok`.
    code: Option<i32>,
}

impl Report {
    fn new(command: &'static str, ok: bool) -> Self {
        Report { command, ok, violations: Vec::new(), fields: Map::new(), lines: Vec::new(), document: None, code: None }
    }

    fn from_validation(command: &'static str, report: ValidationReport) -> Self {
        let mut r = Report::new(command, report.is_ok());
        r.violations = report.violations;
        r
    }

    fn field(mut self, key: &str, value: Value) -> Self {
        self.fields.insert(key.into(), value);
        self
    }

    fn line(mut self, line: impl Into<String>) -> Self {
        self.lines.push(line.into());
        self
    }

    fn document(mut self, doc: Document) -> Self {
        self.document = Some(doc);
        self
    }
}

type CmdResult = Result<Report, Fail>;

pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Output { code: 0, stdout: text, stderr: String::new() }
                }
                _ => Output { code: 2, stdout: String::new(), stderr: text },
            };
        }
    };
    let mut bound = SearchBound::default();
    if let Some(n) = cli.bound {
        bound.max_elements = n;
        bound.max_star_points = n;
    }
    match dispatch(&cli.command, &bound) {
        Ok(report) => render(report, cli.format, cli.output.as_deref()),
        Err(Fail::Usage(msg)) => Output { code: 2, stdout: String::new(), stderr: format!("error: {msg}\n") },
        Err(Fail::Bound(msg)) => Output { code: 3, stdout: String::new(), stderr: format!("error: {msg}\n") },
        Err(Fail::Invalid(r)) => render(Report::from_validation(command_name(&cli.command), r), cli.format, None),
    }
}

fn render(report: Report, format: Format, output: Option<&Path>) -> Output {
    let mut stdout = String::new();
    let mut stderr = String::new();
    let code = report.code.unwrap_or(if report.ok { 0 } else { 1 });
    let mut wrote = None;
    if let (Some(doc), Some(path)) = (&report.document, output) {
        if let Err(e) = std::fs::write(path, serialize(doc)) {
            return Output { code: 2, stdout, stderr: format!("error: cannot write {}: {e}\n", path.display()) };
        }
        wrote = Some(path.display().to_string());
    }
    match format {
        Format::Json => {
            let mut m = report.fields;
            m.insert("command".into(), json!(report.command));
            m.insert("format_version".into(), json!(FORMAT_VERSION));
            m.insert("ok".into(), json!(report.ok));
            m.insert("violations".into(), Value::Array(report.violations.iter().map(violation_value).collect()));
            if let Some(doc) = &report.document {
                match &wrote {
                    Some(p) => m.insert("written".into(), json!(p)),
                    None => m.insert("document".into(), to_value(doc)),
                };
            }
            stdout = to_canonical_string(&Value::Object(m));
        }
        Format::Text => {
            for l in &report.lines {
                let _ = writeln!(stdout, "{l}");
            }
            for v in &report.violations {
                let _ = writeln!(stdout, "violation: {v}");
            }
            if let Some(doc) = &report.document {
                match &wrote {
                    Some(p) => {
                        let _ = writeln!(stdout, "wrote {} document to {p}", doc.kind());
                    }
                    None => stdout.push_str(&serialize(doc)),
                }
            }
            if stdout.is_empty() {
                stdout.push_str(if report.ok { "ok\n" } else { "failed\n" });
            }
        }
    }
    if code == 3 {
        stderr.push_str("error: search bound exceeded; results are incomplete\n");
    }
    Output { code, stdout, stderr }
}

fn violation_value(v: &Violation) -> Value {
    json!({ "invariant": v.invariant, "message": v.message, "ids": v.ids })
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Validate { .. } => "validate",
        Command::Components { .. } => "components",
        Command::Aut { .. } => "aut",
        Command::Base { .. } => "base",
        Command::Extend { .. } => "extend",
        Command::Restrict { .. } => "restrict",
        Command::MorphismCheck { .. } => "morphism-check",
        Command::Saturate { .. } => "saturate",
        Command::Compose { .. } => "compose",
        Command::Iso { .. } => "iso",
        Command::Equiv { .. } => "equiv",
        Command::CoverMorphismCheck { .. } => "cover-morphism-check",
        Command::CoverCompose { .. } => "cover-compose",
        Command::CoverIso { .. } => "cover-iso",
        Command::Determinacy { .. } => "determinacy",
        Command::FunctorG { .. } => "functor-g",
        Command::FunctorC { .. } => "functor-c",
        Command::Eta { .. } => "eta",
        Command::Epsilon { .. } => "epsilon",
        Command::Laws { .. } => "laws",
        Command::FamilySplit { .. } => "family-split",
        Command::FamilyExtend { .. } => "family-extend",
        Command::FamilyRestrict { .. } => "family-restrict",
        Command::Independence { .. } => "independence",
        Command::Census { .. } => "census",
        Command::FamilyMorphismCheck { .. } => "family-morphism-check",
        Command::Enumerate { .. } => "enumerate",
    }
}

fn load(path: &Path) -> Result<Document, Fail> {
    Ok(read_document(path)?)
}

fn groupoid(path: &Path) -> Result<FiniteGroupoid, Fail> {
    match load(path)? {
        Document::Groupoid(g) => Ok(g),
        d => Err(wrong_kind(path, "groupoid", &d)),
    }
}

fn morphism(path: &Path) -> Result<GroupoidMorphism, Fail> {
    match load(path)? {
        Document::Morphism(h) => Ok(h),
        d => Err(wrong_kind(path, "morphism", &d)),
    }
}

fn cover(path: &Path) -> Result<ExtendedCover, Fail> {
    match load(path)? {
        Document::Cover(v) | Document::RawCover(v) => Ok(v),
        d => Err(wrong_kind(path, "cover", &d)),
    }
}

fn cover_morphism(path: &Path) -> Result<CoverMorphism, Fail> {
    match load(path)? {
        Document::CoverMorphism(c) => Ok(c),
        d => Err(wrong_kind(path, "cover-morphism", &d)),
    }
}

fn family_cover(path: &Path) -> Result<FamilyCover, Fail> {
    match load(path)? {
        Document::FamilyCover(f) | Document::RawFamilyCover(f) => Ok(f),
        Document::Family(fam) => Ok(relative_extend(&fam, &default_section(&fam))?),
        d => Err(wrong_kind(path, "family-cover", &d)),
    }
}

fn wrong_kind(path: &Path, want: &str, got: &Document) -> Fail {
    Fail::Usage(format!("{}: expected a {want} document, found {}", path.display(), got.kind()))
}

fn object(g: &FiniteGroupoid, id: &str) -> Result<usize, Fail> {
    Ok(g.object_index(id)?)
}

fn require_connected(g: &FiniteGroupoid) -> Result<(), Fail> {
    if g.is_connected() {
        Ok(())
    } else {
        Err(Fail::Usage(Error::Disconnected.to_string()))
    }
}

fn dispatch(cmd: &Command, bound: &SearchBound) -> CmdResult {
    let name = command_name(cmd);
    match cmd {
        Command::Validate { file } => {
            let doc = read_unchecked(file)?;
            let report = doc.validate()?;
            let ok = report.is_ok();
            Ok(Report::from_validation(name, report)
                .field("kind", json!(doc.kind()))
                .line(format!("{}: {} {}", file.display(), doc.kind(), if ok { "valid" } else { "invalid" })))
        }
        Command::Components { file } => {
            let g = groupoid(file)?;
            let comps = g.component_ids();
            let mut r = Report::new(name, true).field("components", json!(comps));
            for (k, c) in comps.iter().enumerate() {
                r = r.line(format!("component {}: {}", k + 1, c.join(" ")));
            }
            Ok(r)
        }
        Command::Aut { file, object: o } => {
            let g = groupoid(file)?;
            let i = object(&g, o)?;
            let group = g.aut_group(i);
            let carrier = g.carrier(i);
            let elements: Vec<String> = group.elements.iter().map(|t| t.render(carrier, carrier)).collect();
            let mut r = Report::new(name, true)
                .field("object", json!(o))
                .field("order", json!(group.order()))
                .field("elements", json!(elements))
                .line(format!("Aut({o}) has order {}", group.order()));
            for e in &elements {
                r = r.line(format!("  {e}"));
            }
            Ok(r)
        }
        Command::Base { file, object: o } => {
            let g = groupoid(file)?;
            let b = g.faithful_base(object(&g, o)?);
            Ok(Report::new(name, true)
                .field("object", json!(b.object))
                .field("tuple", json!(b.tuple))
                .line(format!("faithful base at {}: ({})", b.object, b.tuple.join(", "))))
        }
        Command::Extend { file, object: o } => {
            let g = groupoid(file)?;
            require_connected(&g)?;
            let v = extend_groupoid(&g, object(&g, o)?)?;
            Ok(Report::new(name, true).field("records", json!(v.records().len())).document(Document::Cover(v)))
        }
        Command::Restrict { file } => {
            let v = cover(file)?;
            Ok(Report::new(name, true).document(Document::Groupoid(restrict_cover(&v))))
        }
        Command::MorphismCheck { file } => {
            let doc = read_unchecked(file)?;
            let Document::Morphism(h) = doc else { return Err(wrong_kind(file, "morphism", &doc)) };
            let report = h.validate();
            let ok = report.is_ok();
            Ok(Report::from_validation(name, report).line(if ok { "valid morphism" } else { "not a morphism" }))
        }
        Command::Saturate { file } => {
            let doc = read_unchecked(file)?;
            let Document::Morphism(h) = doc else { return Err(wrong_kind(file, "morphism", &doc)) };
            let seeds: Vec<FunctionTriple> = h.function_set().iter().cloned().collect();
            match saturate_morphism(h.source().clone(), h.target().clone(), &seeds) {
                Ok(m) => Ok(Report::new(name, true).field("functions", json!(m.entries().len())).document(Document::Morphism(m))),
                Err(Error::NoMorphismContainsSeed(why)) => {
                    let mut r = Report::new(name, false).field("reason", json!(why));
                    r.violations.push(Violation::new("saturation", format!("no morphism contains the seeds: {why}"), vec![]));
                    Ok(r)
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Compose { first, second } => {
            let (g, h) = (morphism(first)?, morphism(second)?);
            let c = compose_morphism(&g, &h)?;
            Ok(Report::new(name, true).document(Document::Morphism(c)))
        }
        Command::Iso { file } => {
            let h = morphism(file)?;
            Ok(match is_isomorphism(&h) {
                Some(inv) => Report::new(name, true).field("isomorphism", json!(true)).line("isomorphism; inverse:").document(Document::Morphism(inv)),
                None => Report::new(name, false).field("isomorphism", json!(false)).line("not an isomorphism: some function is not a bijection"),
            })
        }
        Command::Equiv { left, right } => {
            let (g1, g2) = (Arc::new(groupoid(left)?), Arc::new(groupoid(right)?));
            require_connected(&g1)?;
            require_connected(&g2)?;
            let d = decide_equivalence(&g1, &g2)?;
            let mut r = Report::new(name, d.equivalent()).field("equivalent", json!(d.equivalent())).field("reason", json!(d.reason));
            r = r.line(format!("{}: {}", if d.equivalent() { "equivalent" } else { "not equivalent" }, d.reason));
            if let Some(w) = d.witness {
                let beta = w.beta.render(g1.carrier(w.left_object), g2.carrier(w.right_object));
                r = r
                    .field("beta", json!(beta))
                    .field("embed_left", to_value(&Document::Embedding(w.embed_left.clone())))
                    .field("embed_right", to_value(&Document::Embedding(w.embed_right.clone())))
                    .line(format!("conjugating bijection: {beta}"))
                    .document(Document::Groupoid((*w.common).clone()));
            }
            Ok(r)
        }
        Command::CoverMorphismCheck { file } => {
            let doc = read_unchecked(file)?;
            let Document::CoverMorphism(c) = doc else { return Err(wrong_kind(file, "cover-morphism", &doc)) };
            let report = c.validate();
            Ok(Report::from_validation(name, report).field("canonical", json!(c.render())).line(c.render()))
        }
        Command::CoverCompose { first, second } => {
            let (g, h) = (cover_morphism(first)?, cover_morphism(second)?);
            Ok(Report::new(name, true).document(Document::CoverMorphism(compose_cover_morphisms(&g, &h)?)))
        }
        Command::CoverIso { file } => {
            let c = cover_morphism(file)?;
            Ok(match is_cover_isomorphism(&c) {
                Some(inv) => Report::new(name, true).field("isomorphism", json!(true)).document(Document::CoverMorphism(inv)),
                None => Report::new(name, false).field("isomorphism", json!(false)).line("not an isomorphism"),
            })
        }
        Command::Determinacy { file } => {
            let v = cover(file)?;
            let report = star_determinacy_check(&v);
            let ok = report.is_ok();
            Ok(Report::from_validation(name, report).line(if ok {
                "star structure is determined by the base"
            } else {
                "star structure is not determined by the base"
            }))
        }
        Command::FunctorG { file } => {
            let c = cover_morphism(file)?;
            Ok(Report::new(name, true).document(Document::Morphism(functor_g_map(&c)?)))
        }
        Command::FunctorC { file, source_object, target_object } => {
            let h = morphism(file)?;
            let at = |g: &FiniteGroupoid, o: &Option<String>| -> Result<usize, Fail> {
                o.as_deref().map(|o| object(g, o)).unwrap_or(Ok(0))
            };
            let v1 = Arc::new(extend_groupoid(h.source(), at(h.source(), source_object)?)?);
            let v2 = Arc::new(extend_groupoid(h.target(), at(h.target(), target_object)?)?);
            Ok(Report::new(name, true).document(Document::CoverMorphism(functor_c_map(&h, &v1, &v2)?)))
        }
        Command::Eta { file, object: o } => {
            let v = Arc::new(cover(file)?);
            let j = object(v.base(), o)?;
            Ok(Report::new(name, true).document(Document::CoverMorphism(unit_eta(&v, j)?)))
        }
        Command::Epsilon { file, object: o } => {
            let g = groupoid(file)?;
            require_connected(&g)?;
            let e = counit_epsilon(&g, object(&g, o)?)?;
            let is_id = e == identity_morphism(Arc::new(g));
            let mut r = Report::new(name, is_id)
                .field("identity", json!(is_id))
                .line(if is_id { "counit is the identity morphism" } else { "counit differs from the identity morphism" })
                .document(Document::Morphism(e));
            if !is_id {
                r.violations.push(Violation::new("counit-collapse", "counit differs from the identity", vec![o.clone()]));
            }
            Ok(r)
        }
        Command::Laws { files } => {
            let corpus: Vec<(String, FiniteGroupoid)> = if files.is_empty() {
                fixtures::corpus().into_iter().map(|(n, g)| (n.to_string(), g)).collect()
            } else {
                files
                    .iter()
                    .map(|f| {
                        let g = groupoid(f)?;
                        require_connected(&g)?;
                        let stem = f.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
                        Ok((stem, g))
                    })
                    .collect::<Result<_, Fail>>()?
            };
            let report = check_equivalence_laws(&corpus, bound);
            let checks: Vec<Value> = report
                .checks
                .iter()
                .map(|c| {
                    json!({
                        "law": c.law,
                        "subject": c.subject,
                        "cases": c.cases,
                        "pass": c.passed(),
                        "counterexample": c.counterexample,
                    })
                })
                .collect();
            let mut r = Report::new(name, report.all_passed() && report.complete)
                .field("checks", Value::Array(checks))
                .field("complete", json!(report.complete))
                .field("notes", json!(report.notes));
            for c in &report.checks {
                let status = if c.passed() { "pass" } else { "FAIL" };
                r = r.line(format!("{status} {} [{}] ({} cases)", c.law, c.subject, c.cases));
                if let Some(x) = &c.counterexample {
                    r.violations.push(Violation::new(c.law.clone(), format!("{}: {x}", c.subject), vec![]));
                }
            }
            for n in &report.notes {
                r = r.line(format!("note: {n}"));
            }
            if !report.complete {
                r.code = Some(3);
            }
            Ok(r)
        }
        Command::FamilySplit { file } => {
            let g = groupoid(file)?;
            let fam = family_from_components(&g);
            Ok(Report::new(name, true).field("base", json!(fam.base())).document(Document::Family(fam)))
        }
        Command::FamilyExtend { file, section } => {
            let doc = load(file)?;
            let Document::Family(fam) = doc else { return Err(wrong_kind(file, "family", &doc)) };
            let mut ids = BTreeMap::new();
            for s in section {
                let (a, o) = s.split_once('=').ok_or_else(|| Fail::Usage(format!("section {s:?} must be BASE=OBJECT")))?;
                ids.insert(a.to_string(), o.to_string());
            }
            let sec = section_from_ids(&fam, &ids)?;
            Ok(Report::new(name, true).document(Document::FamilyCover(relative_extend(&fam, &sec)?)))
        }
        Command::FamilyRestrict { file } => {
            let fc = family_cover(file)?;
            Ok(Report::new(name, true).document(Document::Family(relative_restrict(&fc))))
        }
        Command::Independence { file } => {
            let fc = family_cover(file)?;
            let ind = independence_check(&fc, bound)?;
            Ok(Report::from_validation(name, ind.report)
                .field("product_order", json!(ind.product_order))
                .field("automorphism_count", json!(ind.automorphism_count))
                .line(format!(
                    "product of fibre groups: {}; automorphisms over the base: {}",
                    ind.product_order, ind.automorphism_count
                )))
        }
        Command::Census { file } => {
            let fc = family_cover(file)?;
            let c = internality_census(&fc);
            let orders: Map<String, Value> = c.orders.iter().map(|(a, o)| (a.clone(), json!(o))).collect();
            Ok(Report::new(name, true)
                .field("flagged", json!(c.flagged))
                .field("flagged_count", json!(c.flagged.len()))
                .field("base_count", json!(c.orders.len()))
                .field("orders", Value::Object(orders))
                .line(format!("{} of {} fibres have nontrivial star automorphisms", c.flagged.len(), c.orders.len()))
                .line(format!("flagged: {}", c.flagged.join(" "))))
        }
        Command::FamilyMorphismCheck { file, laws } => {
            let doc = read_unchecked(file)?;
            let Document::FamilyMorphism(fm) = doc else { return Err(wrong_kind(file, "family-morphism", &doc)) };
            let report = validate_family_morphism(&fm, *laws)?;
            Ok(Report::from_validation(name, report))
        }
        Command::Enumerate { what, source, target } => match what {
            Enumerable::Morphisms => {
                let (g1, g2) = (Arc::new(groupoid(source)?), Arc::new(groupoid(target)?));
                require_connected(&g1)?;
                require_connected(&g2)?;
                let all = enumerate_morphisms(&g1, &g2, bound)?;
                let docs: Vec<Value> = all.iter().map(|h| to_value(&Document::Morphism(h.clone()))).collect();
                Ok(Report::new(name, true)
                    .field("count", json!(all.len()))
                    .field("morphisms", Value::Array(docs))
                    .line(format!("{} morphisms", all.len())))
            }
            Enumerable::Covers => {
                let (v1, v2) = (Arc::new(cover(source)?), Arc::new(cover(target)?));
                let all = enumerate_cover_morphisms(&v1, &v2, bound)?;
                let reps: Vec<String> = all.iter().map(CoverMorphism::render).collect();
                let mut r = Report::new(name, true)
                    .field("count", json!(all.len()))
                    .field("classes", json!(reps))
                    .line(format!("{} cover morphism classes", all.len()));
                for x in &reps {
                    r = r.line(format!("  {x}"));
                }
                Ok(r)
            }
        },
    }
}
