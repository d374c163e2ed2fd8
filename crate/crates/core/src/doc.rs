//! JSON documents, jobs and certificates.
//!
//! Every document carries `"schema"`, `"kind"` and `"field"` (`{"p": 3}` or `"Q"`).
//! F_p entries are integers in `[0, p)`, rationals are strings `"a/b"`, matrices are
//! arrays of rows.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::algebra::{dual_numbers, groups, Algebra, AlgebraExtension};
use crate::decompose::{pims, simple_modules};
use crate::error::{Error, Result};
use crate::field::{Field, FieldTag, PrimeField, Rationals};
use crate::frobenius::{
    check_frobenius, find_separability_element, is_finitely_generated_projective_over_sub, tensor_square,
    verify_frobenius_system, verify_separability, FrobeniusSystem, SeparabilityElement,
};
use crate::gproj::{complete_resolution, gp_test, transfer_report, verify_complete_resolution, GpOptions, Verdict};
use crate::graded::{
    complex_gp_test, graded_gp_test, three_way_gp_check, verify_graded_complete_resolution, ComplexOfModules, DualNumbers,
};
use crate::linalg::{Matrix, Vector};
use crate::module::ModuleRep;
use crate::zigzag::{extract_acyclic_subcomplex, subcomplex, verify_zigzag, ProjectiveComplex, Zigzag};

pub const SCHEMA_VERSION: u64 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Algebra,
    Extension,
    Module,
    Complex,
    Submodule,
    Job,
    Certificate,
    Report,
}

/// Runs `$body` with `$f` bound to the concrete field named by `$tag`.
macro_rules! with_field {
    ($tag:expr, $f:ident => $body:expr) => {
        match $tag {
            FieldTag::Prime(p) => {
                let $f = PrimeField::new(p)?;
                $body
            }
            FieldTag::Rational => {
                let $f = Rationals;
                $body
            }
        }
    };
}

pub fn field_to_json(tag: FieldTag) -> Value {
    match tag {
        FieldTag::Prime(p) => json!({ "p": p }),
        FieldTag::Rational => json!("Q"),
    }
}

pub fn field_from_json(v: &Value) -> Result<FieldTag> {
    match v {
        Value::String(s) if s == "Q" => Ok(FieldTag::Rational),
        Value::Object(o) => match o.get("p").and_then(Value::as_u64) {
            Some(p) => PrimeField::new(p).map(|_| FieldTag::Prime(p)),
            None => Err(Error::Parse("field must be {\"p\": prime} or \"Q\"".into())),
        },
        _ => Err(Error::Parse("field must be {\"p\": prime} or \"Q\"".into())),
    }
}

/// Parses text, reporting line and column on malformed JSON.
pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))
}

/// Canonical serialization: sorted keys, no whitespace.
pub fn canonical(v: &Value) -> String {
    serde_json::to_string(v).expect("JSON values serialize")
}

pub fn content_hash(v: &Value) -> String {
    hex::encode(Sha256::digest(canonical(v).as_bytes()))
}

/// Envelope fields shared by every document.
#[derive(Clone, Debug)]
pub struct Document {
    pub kind: Kind,
    pub field: Option<FieldTag>,
    pub value: Value,
}

impl Document {
    pub fn parse(text: &str) -> Result<Self> {
        Self::from_value(parse_json(text)?)
    }

    pub fn from_value(value: Value) -> Result<Self> {
        let obj = value.as_object().ok_or_else(|| Error::Parse("document must be a JSON object".into()))?;
        match obj.get("schema").and_then(Value::as_u64) {
            Some(SCHEMA_VERSION) => {}
            Some(v) => return Err(Error::Parse(format!("unsupported schema version {v}"))),
            None => return Err(Error::Parse("missing \"schema\"".into())),
        }
        let kind: Kind = serde_json::from_value(obj.get("kind").cloned().unwrap_or(Value::Null))
            .map_err(|_| Error::Parse("missing or unknown \"kind\"".into()))?;
        let field = obj.get("field").map(field_from_json).transpose()?;
        if field.is_none() && !matches!(kind, Kind::Job | Kind::Report) {
            return Err(Error::Parse("missing \"field\"".into()));
        }
        Ok(Self { kind, field, value })
    }

    fn field_tag(&self) -> Result<FieldTag> {
        self.field.ok_or_else(|| Error::Parse("missing \"field\"".into()))
    }
}

fn envelope(kind: Kind, field: FieldTag) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("schema".into(), json!(SCHEMA_VERSION));
    m.insert("kind".into(), serde_json::to_value(kind).expect("kind"));
    m.insert("field".into(), field_to_json(field));
    m
}

fn get<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| Error::Parse(format!("missing \"{key}\"")))
}

fn get_usize(v: &Value, key: &str) -> Result<usize> {
    get(v, key)?.as_u64().map(|x| x as usize).ok_or_else(|| Error::Parse(format!("\"{key}\" must be a natural number")))
}

fn get_i64(v: &Value, key: &str) -> Result<i64> {
    get(v, key)?.as_i64().ok_or_else(|| Error::Parse(format!("\"{key}\" must be an integer")))
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| Error::Parse(format!("{what} must be an array")))
}

pub fn vector_to_json<F: Field>(f: &F, v: &[F::Elem]) -> Value {
    Value::Array(v.iter().map(|x| f.to_json(x)).collect())
}

pub fn vector_from_json<F: Field>(f: &F, v: &Value) -> Result<Vector<F>> {
    array(v, "vector")?.iter().map(|x| f.from_json(x)).collect()
}

pub fn matrix_to_json<F: Field>(m: &Matrix<F>) -> Value {
    Value::Array((0..m.rows()).map(|i| vector_to_json(m.field(), m.row(i))).collect())
}

/// Rows of a matrix; `cols` is needed for matrices without rows.
pub fn matrix_from_json<F: Field>(f: &F, v: &Value, cols: usize) -> Result<Matrix<F>> {
    let rows: Vec<Vector<F>> = array(v, "matrix")?.iter().map(|r| vector_from_json(f, r)).collect::<Result<_>>()?;
    if rows.is_empty() {
        return Ok(Matrix::zeros(f, 0, cols));
    }
    if rows[0].len() != cols {
        return Err(Error::Shape(format!("matrix has {} columns, expected {cols}", rows[0].len())));
    }
    Matrix::from_rows(f, rows)
}

pub fn algebra_to_json<F: Field>(alg: &Algebra<F>) -> Value {
    let f = alg.field();
    let n = alg.dim();
    let consts: Vec<Value> = (0..n)
        .map(|i| {
            Value::Array((0..n).map(|j| vector_to_json(f, &alg.left_matrices()[i].col(j))).collect())
        })
        .collect();
    json!({
        "labels": alg.labels(),
        "unit": vector_to_json(f, alg.unit()),
        "structure_constants": consts,
    })
}

pub fn algebra_from_json<F: Field>(f: &F, v: &Value) -> Result<Algebra<F>> {
    if let Some(name) = v.get("named").and_then(Value::as_str) {
        return match name {
            "ground" => Ok(Algebra::ground(f)),
            "cyclic_group" => Algebra::group_algebra(f, &groups::cyclic(get_usize(v, "n")?), None),
            "symmetric_group_3" => Algebra::group_algebra(f, &groups::symmetric3(), None),
            "group" => {
                let table: Vec<Vec<usize>> = serde_json::from_value(get(v, "table")?.clone())
                    .map_err(|e| Error::Parse(format!("group table: {e}")))?;
                Algebra::group_algebra(f, &table, None)
            }
            "matrix" => Ok(Algebra::matrix_algebra(f, get_usize(v, "n")?)),
            "truncated_polynomial" => {
                let var = v.get("var").and_then(Value::as_str).unwrap_or("x");
                Ok(Algebra::truncated_polynomial(f, var, get_usize(v, "m")?))
            }
            "upper_triangular_2" => Ok(Algebra::upper_triangular_2(f)),
            "dual_numbers" => {
                let base = Arc::new(algebra_from_json(f, get(v, "base")?)?);
                Ok(dual_numbers(&base).0.as_ref().clone())
            }
            other => Err(Error::Parse(format!("unknown named algebra {other:?}"))),
        };
    }
    let consts = array(get(v, "structure_constants")?, "structure_constants")?;
    let n = consts.len();
    let c: Vec<Vec<Vector<F>>> = consts
        .iter()
        .map(|row| array(row, "structure_constants row")?.iter().map(|x| vector_from_json(f, x)).collect())
        .collect::<Result<_>>()?;
    let unit = vector_from_json(f, get(v, "unit")?)?;
    let labels = match v.get("labels") {
        Some(l) => serde_json::from_value(l.clone()).map_err(|e| Error::Parse(format!("labels: {e}")))?,
        None => (0..n).map(|i| format!("b{i}")).collect(),
    };
    Algebra::new(f, labels, &c, unit)
}

pub fn extension_to_json<F: Field>(ext: &AlgebraExtension<F>) -> Value {
    json!({
        "ambient": algebra_to_json(&ext.amb),
        "sub": algebra_to_json(&ext.sub),
        "embedding": matrix_to_json(&ext.emb),
    })
}

pub fn extension_from_json<F: Field>(f: &F, v: &Value) -> Result<AlgebraExtension<F>> {
    if v.get("named").and_then(Value::as_str) == Some("dual_numbers") {
        let base = Arc::new(algebra_from_json(f, get(v, "base")?)?);
        return Ok(dual_numbers(&base).1);
    }
    let amb = Arc::new(algebra_from_json(f, get(v, "ambient")?)?);
    if v.get("over_ground_field").and_then(Value::as_bool) == Some(true) {
        return Ok(AlgebraExtension::over_ground_field(amb));
    }
    if let Some(span) = v.get("span") {
        let cols: Vec<Vector<F>> = array(span, "span")?.iter().map(|c| vector_from_json(f, c)).collect::<Result<_>>()?;
        if cols.iter().any(|c| c.len() != amb.dim()) {
            return Err(Error::Shape("span vectors must have the ambient dimension".into()));
        }
        return AlgebraExtension::from_subspace(amb.clone(), &Matrix::from_cols(f, amb.dim(), &cols));
    }
    let sub = Arc::new(algebra_from_json(f, get(v, "sub")?)?);
    let emb = matrix_from_json(f, get(v, "embedding")?, sub.dim())?;
    AlgebraExtension::new(sub, amb, emb)
}

fn module_body_to_json<F: Field>(m: &ModuleRep<F>) -> Value {
    json!({ "dim": m.dim(), "action": m.actions().iter().map(matrix_to_json).collect::<Vec<_>>() })
}

pub fn module_to_json<F: Field>(m: &ModuleRep<F>) -> Value {
    let mut v = module_body_to_json(m);
    v["algebra"] = algebra_to_json(m.algebra());
    v
}

/// A module over a known algebra: explicit action, or `regular`, `simple: i`, `pim: i`, `dim: 0`.
fn module_body_from_json<F: Field>(alg: &Arc<Algebra<F>>, v: &Value) -> Result<ModuleRep<F>> {
    let f = alg.field();
    if v.get("regular").and_then(Value::as_bool) == Some(true) {
        return Ok(ModuleRep::regular(alg.clone()));
    }
    let pick = |list: Vec<ModuleRep<F>>, key: &str| -> Result<Option<ModuleRep<F>>> {
        match v.get(key) {
            None => Ok(None),
            Some(i) => {
                let i = i.as_u64().ok_or_else(|| Error::Parse(format!("\"{key}\" must be an index")))? as usize;
                list.get(i).cloned().map(Some).ok_or_else(|| Error::Parse(format!("{key} index {i} out of range")))
            }
        }
    };
    if let Some(m) = pick(simple_modules(alg), "simple")? {
        return Ok(m);
    }
    if let Some(m) = pick(pims(alg), "pim")? {
        return Ok(m);
    }
    let dim = v.get("dim").and_then(Value::as_u64).map(|d| d as usize);
    let Some(action) = v.get("action") else {
        return match dim {
            Some(0) => Ok(ModuleRep::zero(alg.clone())),
            _ => Err(Error::Parse("module needs \"action\", \"regular\", \"simple\" or \"pim\"".into())),
        };
    };
    let mats = array(action, "action")?;
    let d = match dim {
        Some(d) => d,
        None => mats.first().and_then(Value::as_array).map_or(0, Vec::len),
    };
    let action: Vec<Matrix<F>> = mats.iter().map(|m| matrix_from_json(f, m, d)).collect::<Result<_>>()?;
    if action.iter().any(|m| m.rows() != d) {
        return Err(Error::Shape(format!("action matrices must be {d}x{d}")));
    }
    if action.is_empty() && alg.dim() > 0 {
        return Err(Error::Shape("empty action list".into()));
    }
    ModuleRep::new(alg.clone(), action)
}

pub fn module_from_json<F: Field>(f: &F, v: &Value) -> Result<ModuleRep<F>> {
    let alg = Arc::new(algebra_from_json(f, get(v, "algebra")?)?);
    module_body_from_json(&alg, v)
}

pub fn complex_to_json<F: Field>(c: &ComplexOfModules<F>) -> Value {
    json!({
        "base": algebra_to_json(&c.ctx().r),
        "lo": c.lo(),
        "hi": c.hi(),
        "items": c.items().iter().map(module_body_to_json).collect::<Vec<_>>(),
        "diffs": c.diffs().iter().map(matrix_to_json).collect::<Vec<_>>(),
    })
}

pub fn complex_from_json<F: Field>(f: &F, v: &Value) -> Result<ComplexOfModules<F>> {
    let base = Arc::new(algebra_from_json(f, get(v, "base")?)?);
    let ctx = DualNumbers::new(base.clone());
    let lo = get_i64(v, "lo")?;
    let hi = get_i64(v, "hi")?;
    let items: Vec<ModuleRep<F>> =
        array(get(v, "items")?, "items")?.iter().map(|m| module_body_from_json(&base, m)).collect::<Result<_>>()?;
    if hi - lo + 1 != items.len() as i64 {
        return Err(Error::Shape(format!("window [{lo}, {hi}] needs {} items, got {}", hi - lo + 1, items.len())));
    }
    let diffs: Vec<Matrix<F>> = match v.get("diffs") {
        Some(d) => array(d, "diffs")?
            .iter()
            .enumerate()
            .map(|(k, m)| {
                let mat = matrix_from_json(f, m, items[k].dim())?;
                if mat.rows() != items.get(k + 1).map_or(0, ModuleRep::dim) {
                    return Err(Error::Shape(format!("differential in degree {} has the wrong shape", lo + k as i64)));
                }
                Ok(mat)
            })
            .collect::<Result<_>>()?,
        None => Vec::new(),
    };
    ComplexOfModules::new(ctx, lo, items, diffs)
}

/// Spanning vectors of a submodule of the degree-0 item.
pub fn submodule_from_json<F: Field>(f: &F, v: &Value, ambient_dim: usize) -> Result<Matrix<F>> {
    let vecs: Vec<Vector<F>> = array(get(v, "vectors")?, "vectors")?.iter().map(|x| vector_from_json(f, x)).collect::<Result<_>>()?;
    if vecs.iter().any(|x| x.len() != ambient_dim) {
        return Err(Error::Shape(format!("submodule vectors must have length {ambient_dim}")));
    }
    Ok(Matrix::from_cols(f, ambient_dim, &vecs))
}

/// Wraps a payload as a document of the given kind.
pub fn make_document(kind: Kind, field: FieldTag, payload: Value) -> Value {
    let mut m = envelope(kind, field);
    if let Value::Object(p) = payload {
        m.extend(p);
    }
    Value::Object(m)
}

/// Re-emits a validated algebra, extension, module or complex document in canonical form.
pub fn canonicalize(doc: &Document) -> Result<Value> {
    let tag = doc.field_tag()?;
    let v = &doc.value;
    let payload = with_field!(tag, f => match doc.kind {
        Kind::Algebra => algebra_to_json(&algebra_from_json(&f, v)?),
        Kind::Extension => extension_to_json(&extension_from_json(&f, v)?),
        Kind::Module => module_to_json(&module_from_json(&f, v)?),
        Kind::Complex => complex_to_json(&complex_from_json(&f, v)?),
        Kind::Submodule => json!({ "vectors": get(v, "vectors")?.clone() }),
        other => return Err(Error::Parse(format!("{other:?} documents have no canonical form"))),
    });
    Ok(make_document(doc.kind, tag, payload))
}

/// Eagerly validates a document and summarizes it.
pub fn validate(doc: &Document) -> Result<Value> {
    let tag = doc.field_tag()?;
    let v = &doc.value;
    let summary = with_field!(tag, f => match doc.kind {
        Kind::Algebra => {
            let a = algebra_from_json(&f, v)?;
            json!({ "dim": a.dim(), "commutative": a.is_commutative() })
        }
        Kind::Extension => {
            let e = extension_from_json(&f, v)?;
            json!({ "sub_dim": e.sub.dim(), "ambient_dim": e.amb.dim() })
        }
        Kind::Module => {
            let m = module_from_json(&f, v)?;
            json!({ "dim": m.dim(), "algebra_dim": m.algebra().dim() })
        }
        Kind::Complex => {
            let c = complex_from_json(&f, v)?;
            json!({ "lo": c.lo(), "hi": c.hi(), "dims": c.items().iter().map(ModuleRep::dim).collect::<Vec<_>>() })
        }
        Kind::Submodule => {
            let n = array(get(v, "vectors")?, "vectors")?.len();
            json!({ "vectors": n })
        }
        Kind::Certificate => {
            let r = verify(v)?;
            json!({ "accepted": r.accepted })
        }
        other => json!({ "kind": other }),
    });
    Ok(json!({
        "schema": SCHEMA_VERSION,
        "kind": "report",
        "operation": "validate",
        "input_kind": doc.kind,
        "valid": true,
        "summary": summary,
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Operation {
    CheckFrobenius,
    Separability,
    GpTest,
    Transfer,
    #[serde(rename = "thm31")]
    ThreeWay,
    ComplexGpTest,
    Zigzag,
}

impl Operation {
    pub fn name(self) -> &'static str {
        match self {
            Operation::CheckFrobenius => "check-frobenius",
            Operation::Separability => "separability",
            Operation::GpTest => "gp-test",
            Operation::Transfer => "transfer",
            Operation::ThreeWay => "thm31",
            Operation::ComplexGpTest => "complex-gp-test",
            Operation::Zigzag => "zigzag",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        serde_json::from_value(Value::String(s.into())).map_err(|_| Error::UnknownOperation(s.into()))
    }

    /// Input names and the kind each must have.
    pub fn signature(self) -> &'static [(&'static str, Kind)] {
        match self {
            Operation::CheckFrobenius | Operation::Separability => &[("extension", Kind::Extension)],
            Operation::GpTest => &[("module", Kind::Module)],
            Operation::Transfer => &[("extension", Kind::Extension), ("module", Kind::Module)],
            Operation::ThreeWay | Operation::ComplexGpTest => &[("complex", Kind::Complex)],
            Operation::Zigzag => &[("complex", Kind::Complex), ("submodule", Kind::Submodule)],
        }
    }
}

/// An operation, its input documents by name, and parameters.
#[derive(Clone, Debug)]
pub struct JobSpec {
    pub operation: Operation,
    pub inputs: BTreeMap<String, Value>,
    pub bound: usize,
    pub seed: u64,
}

impl JobSpec {
    pub fn new(operation: Operation, inputs: Vec<(&str, Value)>, bound: usize, seed: u64) -> Self {
        Self { operation, inputs: inputs.into_iter().map(|(k, v)| (k.to_string(), v)).collect(), bound, seed }
    }

    /// Reads a job document; inputs are inline documents.
    pub fn from_json(v: &Value) -> Result<Self> {
        let doc = Document::from_value(v.clone())?;
        if doc.kind != Kind::Job {
            return Err(Error::Parse("expected a job document".into()));
        }
        let op = Operation::parse(get(v, "operation")?.as_str().unwrap_or_default())?;
        let inputs = get(v, "inputs")?
            .as_object()
            .ok_or_else(|| Error::Parse("\"inputs\" must be an object".into()))?
            .iter()
            .map(|(k, d)| (k.clone(), d.clone()))
            .collect();
        let bound = v.get("bound").and_then(Value::as_u64).unwrap_or(12) as usize;
        let seed = v.get("seed").and_then(Value::as_u64).unwrap_or(0);
        Ok(Self { operation: op, inputs, bound, seed })
    }

    fn input(&self, name: &str) -> Result<Document> {
        let v = self.inputs.get(name).ok_or_else(|| Error::Parse(format!("job is missing input {name:?}")))?;
        Document::from_value(v.clone())
    }

    /// Checks that every named input exists, has the expected kind, and that fields agree.
    fn typed_inputs(&self) -> Result<(FieldTag, Vec<Document>)> {
        let mut docs = Vec::new();
        let mut tag: Option<FieldTag> = None;
        for (name, kind) in self.operation.signature() {
            let d = self.input(name)?;
            if d.kind != *kind {
                return Err(Error::Parse(format!("input {name:?} must be a {kind:?} document, got {:?}", d.kind)));
            }
            let t = d.field_tag()?;
            if let Some(prev) = tag {
                if prev != t {
                    return Err(Error::DomainMismatch(prev.to_string(), t.to_string()));
                }
            }
            tag = Some(t);
            docs.push(d);
        }
        Ok((tag.expect("every operation has inputs"), docs))
    }
}

/// A certificate document and the verdict that decides the exit status.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub document: Value,
    pub verdict: String,
}

impl Outcome {
    pub fn is_undetermined(&self) -> bool {
        self.verdict == "Undetermined"
    }
}

fn opts(job: &JobSpec) -> GpOptions {
    GpOptions { bound: job.bound, self_injective_shortcut: true, seed: job.seed }
}

fn frobenius_result<F: Field>(ext: &AlgebraExtension<F>, seed: u64) -> Result<(String, Value)> {
    if !is_finitely_generated_projective_over_sub(ext)?.projective {
        return Ok(("NotFrobenius".into(), json!({ "frobenius": false, "reason": "A is not projective over R" })));
    }
    match check_frobenius(ext, seed)? {
        Some(sys) => {
            let f = ext.field();
            let pairs: Vec<Value> = sys.pairs.iter().map(|(x, y)| json!([vector_to_json(f, x), vector_to_json(f, y)])).collect();
            Ok(("Frobenius".into(), json!({ "frobenius": true, "tau": matrix_to_json(&sys.tau), "pairs": pairs })))
        }
        None => Ok((
            "NotFrobenius".into(),
            json!({ "frobenius": false, "reason": "no invertible bimodule map at search bound" }),
        )),
    }
}

fn separability_result<F: Field>(ext: &AlgebraExtension<F>) -> Result<(String, Value)> {
    let f = ext.field();
    match find_separability_element(ext)? {
        Some(e) => {
            let ts = tensor_square(ext);
            let terms: Vec<Value> = e.terms(&ts, f).into_iter().map(|(c, i, j)| json!([f.to_json(&c), i, j])).collect();
            Ok(("Separable".into(), json!({ "separable": true, "terms": terms })))
        }
        None => Ok(("NotSeparable".into(), json!({ "separable": false }))),
    }
}

fn verdict_name(v: Verdict) -> String {
    v.to_string()
}

fn zigzag_to_json<F: Field>(z: &Zigzag<F>) -> Value {
    let c = &z.inclusion.dst;
    let spaces: Vec<Value> = c
        .degrees()
        .map(|i| {
            let b = z.inclusion.block(i);
            json!({ "degree": i, "vectors": b.col_vectors().iter().map(|v| vector_to_json(c.field(), v)).collect::<Vec<_>>() })
        })
        .collect();
    json!({ "spaces": spaces, "rounds": z.rounds })
}

fn result_for<F: Field>(f: &F, job: &JobSpec, docs: &[Document]) -> Result<(String, Value)> {
    let o = opts(job);
    match job.operation {
        Operation::CheckFrobenius => frobenius_result(&extension_from_json(f, &docs[0].value)?, job.seed),
        Operation::Separability => separability_result(&extension_from_json(f, &docs[0].value)?),
        Operation::GpTest => {
            let m = module_from_json(f, &docs[0].value)?;
            let cert = gp_test(&m, o)?;
            let mut res = json!({ "certificate": cert });
            if let Some(cr) = complete_resolution(&m, &cert, 2) {
                res["complete_resolution_check"] = serde_json::to_value(verify_complete_resolution(&m, &cr)?).expect("check");
            }
            Ok((verdict_name(cert.verdict), res))
        }
        Operation::Transfer => {
            let ext = extension_from_json(f, &docs[0].value)?;
            let m = module_from_json(f, &docs[1].value)?;
            if m.algebra().as_ref() != ext.amb.as_ref() {
                return Err(Error::AlgebraMismatch);
            }
            let rep = transfer_report(&ext, &m, o)?;
            let verdict = if rep.violations.is_empty() { "Consistent" } else { "Violation" };
            Ok((verdict.into(), serde_json::to_value(rep).expect("report")))
        }
        Operation::ThreeWay => {
            let c = complex_from_json(f, &docs[0].value)?;
            let rep = three_way_gp_check(&c, o)?;
            let graded_check = match &rep.graded.resolution {
                Some(w) => Some(verify_graded_complete_resolution(&c, w, job.seed)?),
                None => None,
            };
            let verdict = if !rep.agree() {
                "Disagreement".to_string()
            } else {
                rep.verdicts().into_iter().find(|v| v.is_determined()).map_or("Undetermined".into(), verdict_name)
            };
            let res = json!({
                "graded": {
                    "verdict": rep.graded.verdict,
                    "proof": rep.graded.proof,
                    "witness": rep.graded.witness,
                    "window_check": graded_check,
                },
                "ungraded": rep.ungraded,
                "forgotten_window_verifies": rep.forgotten_window_verifies,
                "itemwise": rep.itemwise,
                "agree": rep.agree(),
            });
            Ok((verdict, res))
        }
        Operation::ComplexGpTest => {
            let c = complex_from_json(f, &docs[0].value)?;
            let cert = complex_gp_test(&c, o)?;
            let mut res = json!({ "certificate": cert });
            if cert.verdict == Verdict::GP {
                let g = graded_gp_test(&c, o)?;
                let check = match &g.resolution {
                    Some(w) => Some(verify_graded_complete_resolution(&c, w, job.seed)?),
                    None => None,
                };
                res["graded_witness_check"] = serde_json::to_value(check).expect("check");
            }
            Ok((verdict_name(cert.verdict), res))
        }
        Operation::Zigzag => {
            let c = complex_from_json(f, &docs[0].value)?;
            let p = ProjectiveComplex::new(c)?;
            let m = submodule_from_json(f, &docs[1].value, p.complex().dim_at(0))?;
            let z = extract_acyclic_subcomplex(&p, &m, job.seed)?;
            let mut res = zigzag_to_json(&z);
            res["check"] = serde_json::to_value(verify_zigzag(&p, &m, &z)).expect("check");
            Ok(("Extracted".into(), res))
        }
    }
}

/// Dispatches a job and wraps the result with the inputs, their hashes, the seed and the bound.
pub fn run_job(job: &JobSpec) -> Result<Outcome> {
    if job.bound == 0 {
        return Err(Error::Precondition("bound must be at least 1".into()));
    }
    let (tag, docs) = job.typed_inputs()?;
    let (verdict, result) = with_field!(tag, f => result_for(&f, job, &docs)?);
    let inputs: Map<String, Value> = job
        .operation
        .signature()
        .iter()
        .map(|(name, _)| {
            let d = &job.inputs[*name];
            (name.to_string(), json!({ "sha256": content_hash(d), "document": d }))
        })
        .collect();
    let mut m = envelope(Kind::Certificate, tag);
    m.insert("operation".into(), json!(job.operation.name()));
    m.insert("seed".into(), json!(job.seed));
    m.insert("bound".into(), json!(job.bound));
    m.insert("inputs".into(), Value::Object(inputs));
    m.insert("verdict".into(), json!(verdict));
    m.insert("result".into(), result);
    Ok(Outcome { document: Value::Object(m), verdict })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub accepted: bool,
    pub reasons: Vec<String>,
}

fn frobenius_system_from_json<F: Field>(f: &F, ext: &AlgebraExtension<F>, v: &Value) -> Result<FrobeniusSystem<F>> {
    let tau = matrix_from_json(f, get(v, "tau")?, ext.amb.dim())?;
    let pairs = array(get(v, "pairs")?, "pairs")?
        .iter()
        .map(|p| {
            let p = array(p, "pair")?;
            if p.len() != 2 {
                return Err(Error::Parse("pairs must have two entries".into()));
            }
            Ok((vector_from_json(f, &p[0])?, vector_from_json(f, &p[1])?))
        })
        .collect::<Result<_>>()?;
    Ok(FrobeniusSystem { tau, pairs })
}

fn separability_from_terms<F: Field>(f: &F, ext: &AlgebraExtension<F>, v: &Value) -> Result<SeparabilityElement<F>> {
    let ts = tensor_square(ext);
    let n = ext.amb.dim();
    let mut amb = vec![f.zero(); n * n];
    for t in array(get(v, "terms")?, "terms")? {
        let t = array(t, "term")?;
        if t.len() != 3 {
            return Err(Error::Parse("terms are [coefficient, i, j]".into()));
        }
        let c = f.from_json(&t[0])?;
        let (i, j) = (t[1].as_u64().unwrap_or(u64::MAX) as usize, t[2].as_u64().unwrap_or(u64::MAX) as usize);
        if i >= n || j >= n {
            return Err(Error::Parse(format!("term index ({i}, {j}) out of range")));
        }
        amb[i * n + j] = f.add(&amb[i * n + j], &c);
    }
    Ok(SeparabilityElement { e: ts.quotient.project(&amb) })
}

fn independent_checks<F: Field>(f: &F, op: Operation, docs: &[Document], cert: &Value, reasons: &mut Vec<String>) -> Result<()> {
    let result = get(cert, "result")?;
    match op {
        Operation::CheckFrobenius if result.get("frobenius") == Some(&Value::Bool(true)) => {
            let ext = extension_from_json(f, &docs[0].value)?;
            let sys = frobenius_system_from_json(f, &ext, result)?;
            if !verify_frobenius_system(&ext, &sys) {
                reasons.push("Frobenius system does not satisfy the dual basis identities".into());
            }
        }
        Operation::Separability if result.get("separable") == Some(&Value::Bool(true)) => {
            let ext = extension_from_json(f, &docs[0].value)?;
            let e = separability_from_terms(f, &ext, result)?;
            if !verify_separability(&ext, &e) {
                reasons.push("separability element fails phi(e) = 1 or ae = ea".into());
            }
        }
        Operation::Zigzag => {
            let c = complex_from_json(f, &docs[0].value)?;
            let p = ProjectiveComplex::new(c.clone())?;
            let m = submodule_from_json(f, &docs[1].value, c.dim_at(0))?;
            let spaces: Vec<Matrix<F>> = array(get(result, "spaces")?, "spaces")?
                .iter()
                .map(|s| {
                    let i = get_i64(s, "degree")?;
                    let vecs: Vec<Vector<F>> =
                        array(get(s, "vectors")?, "vectors")?.iter().map(|x| vector_from_json(f, x)).collect::<Result<_>>()?;
                    Ok(Matrix::from_cols(f, c.dim_at(i), &vecs))
                })
                .collect::<Result<_>>()?;
            match subcomplex(&c, &spaces) {
                Ok((sub, inclusion)) => {
                    let z = Zigzag { quotient: inclusion.cokernel().0, sub, inclusion, rounds: 0 };
                    if !verify_zigzag(&p, &m, &z).all() {
                        reasons.push("extracted subcomplex fails its output contract".into());
                    }
                }
                Err(e) => reasons.push(format!("extracted spaces do not form a subcomplex: {e}")),
            }
        }
        _ => {}
    }
    Ok(())
}

/// Accepts a certificate when the input hashes match, the independent checks pass,
/// and recomputation from the embedded inputs reproduces the result exactly.
pub fn verify(cert: &Value) -> Result<VerifyReport> {
    let doc = Document::from_value(cert.clone())?;
    if doc.kind != Kind::Certificate {
        return Err(Error::Parse("expected a certificate document".into()));
    }
    let op = Operation::parse(get(cert, "operation")?.as_str().unwrap_or_default())?;
    let mut reasons = Vec::new();
    let mut inputs = Vec::new();
    let embedded = get(cert, "inputs")?.as_object().ok_or_else(|| Error::Parse("\"inputs\" must be an object".into()))?;
    for (name, _) in op.signature() {
        let entry = embedded.get(*name).ok_or_else(|| Error::Parse(format!("certificate is missing input {name:?}")))?;
        let d = get(entry, "document")?;
        if get(entry, "sha256")?.as_str() != Some(content_hash(d).as_str()) {
            reasons.push(format!("content hash of input {name:?} does not match"));
        }
        inputs.push((*name, d.clone()));
    }
    let job = JobSpec::new(op, inputs, get_usize(cert, "bound")?, get(cert, "seed")?.as_u64().unwrap_or(0));
    let (tag, docs) = job.typed_inputs()?;
    if Some(tag) != doc.field {
        reasons.push("certificate field differs from its inputs".into());
    }
    with_field!(tag, f => independent_checks(&f, op, &docs, cert, &mut reasons)?);
    let again = run_job(&job)?;
    if canonical(&again.document) != canonical(cert) {
        reasons.push("recomputation from the embedded inputs gives a different certificate".into());
    }
    Ok(VerifyReport { accepted: reasons.is_empty(), reasons })
}

/// Pretty JSON with a trailing newline, as written by the command line tool.
pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}
