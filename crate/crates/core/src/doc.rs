//! JSON documents for operators, families, paths and normal diagonal inputs,
//! plus the report encodings.
//!
//! Rationals are always strings (`"p"` or `"p/q"`); a Gaussian rational is a
//! string when real and `{"re": .., "im": ..}` otherwise. Objects are emitted
//! with sorted keys, so output is byte-stable. Every `to_*` encoder has a
//! matching parser and the pair round-trips.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{json, Map, Value};

use crate::bfredholm::{BFredholmVerdict, Dis, StabilizationReport};
use crate::exactcore::{ExactMatrix, GaussianRational, LaurentPoly};
use crate::family::{
    connected_components, ComponentIndex, HomotopyReport, IndexVector, LocalConstancyReport,
    OperatorFamily, ParamComplex, VertexId,
};
use crate::fredholm::{FredholmVerdict, NullityDefect};
use crate::opmodel::{Block, BlockOperator, ToeplitzBlock};
use crate::pathconnect::{OperatorPath, PathReport};
use crate::weyl::{
    NormalDiagonalOperator, SpectralFamily, SpectralInput, SpectralReport, SpectralSet,
    WeylBrowderCheck,
};

/// A parse failure with its location: `line:column` for syntax errors, a
/// field path such as `blocks[1].symbol."-1"` otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DocError {
    pub location: String,
    pub message: String,
}

impl fmt::Display for DocError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

impl std::error::Error for DocError {}

type DocResult<T> = Result<T, DocError>;

fn err<T>(at: &str, msg: impl Into<String>) -> DocResult<T> {
    Err(DocError {
        location: if at.is_empty() {
            "$".into()
        } else {
            at.to_string()
        },
        message: msg.into(),
    })
}

fn sub(at: &str, key: &str) -> String {
    if at.is_empty() {
        key.to_string()
    } else {
        format!("{at}.{key}")
    }
}

fn idx(at: &str, i: usize) -> String {
    format!("{at}[{i}]")
}

pub fn parse_json(text: &str) -> DocResult<Value> {
    serde_json::from_str(text).map_err(|e| DocError {
        location: format!("line {} column {}", e.line(), e.column()),
        message: e.to_string(),
    })
}

fn object<'a>(v: &'a Value, at: &str) -> DocResult<&'a Map<String, Value>> {
    v.as_object()
        .map_or_else(|| err(at, "expected an object"), Ok)
}

fn array<'a>(v: &'a Value, at: &str) -> DocResult<&'a Vec<Value>> {
    v.as_array()
        .map_or_else(|| err(at, "expected an array"), Ok)
}

fn string<'a>(v: &'a Value, at: &str) -> DocResult<&'a str> {
    v.as_str().map_or_else(|| err(at, "expected a string"), Ok)
}

fn field<'a>(m: &'a Map<String, Value>, key: &str, at: &str) -> DocResult<&'a Value> {
    m.get(key)
        .map_or_else(|| err(&sub(at, key), "missing field"), Ok)
}

fn only_keys(m: &Map<String, Value>, allowed: &[&str], at: &str) -> DocResult<()> {
    match m.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => err(
            &sub(at, k),
            format!("unknown field (expected one of {allowed:?})"),
        ),
        None => Ok(()),
    }
}

fn natural(v: &Value, at: &str) -> DocResult<u64> {
    v.as_u64()
        .map_or_else(|| err(at, "expected a nonnegative integer"), Ok)
}

pub fn parse_rational(v: &Value, at: &str) -> DocResult<BigRational> {
    let s = string(v, at)?;
    GaussianRational::parse_rational(s).or_else(|_| err(at, format!("bad rational literal {s:?}")))
}

pub fn rational_to_json(r: &BigRational) -> Value {
    Value::String(GaussianRational::format_rational(r))
}

pub fn parse_gauss(v: &Value, at: &str) -> DocResult<GaussianRational> {
    match v {
        Value::String(_) => Ok(GaussianRational::real(parse_rational(v, at)?)),
        Value::Object(m) => {
            only_keys(m, &["re", "im"], at)?;
            let re = m
                .get("re")
                .map(|x| parse_rational(x, &sub(at, "re")))
                .transpose()?;
            let im = m
                .get("im")
                .map(|x| parse_rational(x, &sub(at, "im")))
                .transpose()?;
            Ok(GaussianRational::new(
                re.unwrap_or_else(BigRational::zero),
                im.unwrap_or_else(BigRational::zero),
            ))
        }
        _ => err(at, "expected a rational string or {\"re\", \"im\"} object"),
    }
}

pub fn gauss_to_json(g: &GaussianRational) -> Value {
    if g.is_real() {
        rational_to_json(g.re())
    } else {
        json!({ "re": rational_to_json(g.re()), "im": rational_to_json(g.im()) })
    }
}

pub fn parse_matrix(v: &Value, at: &str) -> DocResult<ExactMatrix> {
    let rows = array(v, at)?;
    let mut out = Vec::with_capacity(rows.len());
    for (i, r) in rows.iter().enumerate() {
        let at_r = idx(at, i);
        let entries = array(r, &at_r)?;
        out.push(
            entries
                .iter()
                .enumerate()
                .map(|(j, e)| parse_gauss(e, &idx(&at_r, j)))
                .collect::<DocResult<Vec<_>>>()?,
        );
    }
    if let Some(bad) = out.iter().position(|r| r.len() != out[0].len()) {
        return err(&idx(at, bad), "rows have different lengths");
    }
    ExactMatrix::from_rows(out).or_else(|e| err(at, e.to_string()))
}

pub fn matrix_to_json(m: &ExactMatrix) -> Value {
    Value::Array(
        m.to_rows()
            .iter()
            .map(|r| Value::Array(r.iter().map(gauss_to_json).collect()))
            .collect(),
    )
}

pub fn parse_symbol(v: &Value, at: &str) -> DocResult<LaurentPoly> {
    let m = object(v, at)?;
    let mut pairs = Vec::with_capacity(m.len());
    for (k, c) in m {
        let at_k = sub(at, &format!("{k:?}"));
        let deg: i64 = k
            .trim()
            .parse()
            .or_else(|_| err(&at_k, "symbol keys are integer degrees"))?;
        pairs.push((deg, parse_gauss(c, &at_k)?));
    }
    Ok(LaurentPoly::from_pairs(pairs))
}

pub fn symbol_to_json(f: &LaurentPoly) -> Value {
    Value::Object(
        f.iter()
            .map(|(k, c)| (k.to_string(), gauss_to_json(c)))
            .collect(),
    )
}

fn parse_block(v: &Value, at: &str) -> DocResult<Block> {
    let m = object(v, at)?;
    match string(field(m, "type", at)?, &sub(at, "type"))? {
        "finite" => {
            only_keys(m, &["type", "matrix"], at)?;
            Ok(Block::Finite(parse_matrix(
                field(m, "matrix", at)?,
                &sub(at, "matrix"),
            )?))
        }
        "toeplitz" => {
            only_keys(m, &["type", "symbol", "patch"], at)?;
            let symbol = parse_symbol(field(m, "symbol", at)?, &sub(at, "symbol"))?;
            let patch = match m.get("patch") {
                None | Some(Value::Null) => None,
                Some(p) => {
                    let pm = parse_matrix(p, &sub(at, "patch"))?;
                    if !pm.is_square() {
                        return err(&sub(at, "patch"), "patch must be square");
                    }
                    Some(pm)
                }
            };
            Ok(Block::Toeplitz(ToeplitzBlock::new(symbol, patch)))
        }
        other => err(
            &sub(at, "type"),
            format!("unknown block type {other:?} (expected finite or toeplitz)"),
        ),
    }
}

pub fn parse_operator_value(v: &Value, at: &str) -> DocResult<BlockOperator> {
    let m = object(v, at)?;
    only_keys(m, &["blocks"], at)?;
    let at_b = sub(at, "blocks");
    let blocks = array(field(m, "blocks", at)?, &at_b)?
        .iter()
        .enumerate()
        .map(|(i, b)| parse_block(b, &idx(&at_b, i)))
        .collect::<DocResult<Vec<_>>>()?;
    BlockOperator::new(blocks).or_else(|e| err(&at_b, e.to_string()))
}

pub fn parse_operator(text: &str) -> DocResult<BlockOperator> {
    parse_operator_value(&parse_json(text)?, "")
}

pub fn operator_to_json(a: &BlockOperator) -> Value {
    let blocks = a
        .blocks()
        .iter()
        .map(|b| match b {
            Block::Finite(m) => json!({ "type": "finite", "matrix": matrix_to_json(m) }),
            Block::Toeplitz(t) => {
                let mut o = Map::new();
                o.insert("type".into(), json!("toeplitz"));
                o.insert("symbol".into(), symbol_to_json(t.symbol()));
                if let Some(p) = t.patch() {
                    o.insert("patch".into(), matrix_to_json(p));
                }
                Value::Object(o)
            }
        })
        .collect();
    json!({ "blocks": Value::Array(blocks) })
}

/// `{"vertices": [...], "edges": [[u, v], ...]}`; extra keys are left to the caller.
pub fn parse_complex_value(m: &Map<String, Value>, at: &str) -> DocResult<ParamComplex> {
    let at_v = sub(at, "vertices");
    let vertices = array(field(m, "vertices", at)?, &at_v)?
        .iter()
        .enumerate()
        .map(|(i, v)| string(v, &idx(&at_v, i)).map(str::to_string))
        .collect::<DocResult<Vec<_>>>()?;
    let at_e = sub(at, "edges");
    let mut edges = Vec::new();
    if let Some(es) = m.get("edges") {
        for (i, e) in array(es, &at_e)?.iter().enumerate() {
            let at_i = idx(&at_e, i);
            let pair = array(e, &at_i)?;
            if pair.len() != 2 {
                return err(&at_i, "an edge is a pair of vertex ids");
            }
            edges.push((
                string(&pair[0], &idx(&at_i, 0))?.to_string(),
                string(&pair[1], &idx(&at_i, 1))?.to_string(),
            ));
        }
    }
    ParamComplex::new(vertices, edges).or_else(|e| err(&at_e, e.to_string()))
}

pub fn parse_complex(text: &str) -> DocResult<ParamComplex> {
    let v = parse_json(text)?;
    parse_complex_value(object(&v, "")?, "")
}

fn complex_fields(c: &ParamComplex, o: &mut Map<String, Value>) {
    o.insert("vertices".into(), json!(c.vertices().collect::<Vec<_>>()));
    o.insert(
        "edges".into(),
        json!(c.edges().map(|(u, v)| [u, v]).collect::<Vec<_>>()),
    );
}

pub fn complex_to_json(c: &ParamComplex) -> Value {
    let mut o = Map::new();
    complex_fields(c, &mut o);
    Value::Object(o)
}

fn parse_edge_key(k: &str, at: &str) -> DocResult<(VertexId, VertexId)> {
    match k.split_once('|') {
        Some((u, v)) if !u.is_empty() && !v.is_empty() => Ok((u.to_string(), v.to_string())),
        _ => err(at, "edge bound keys have the form \"u|v\""),
    }
}

pub fn parse_family_value(v: &Value, at: &str) -> DocResult<OperatorFamily> {
    let m = object(v, at)?;
    only_keys(m, &["vertices", "edges", "operators", "edge_bounds"], at)?;
    let complex = parse_complex_value(m, at)?;
    let at_o = sub(at, "operators");
    let mut ops = BTreeMap::new();
    for (k, o) in object(field(m, "operators", at)?, &at_o)? {
        ops.insert(k.clone(), parse_operator_value(o, &sub(&at_o, k))?);
    }
    let mut bounds = BTreeMap::new();
    if let Some(b) = m.get("edge_bounds") {
        let at_b = sub(at, "edge_bounds");
        for (k, r) in object(b, &at_b)? {
            let at_k = sub(&at_b, k);
            bounds.insert(parse_edge_key(k, &at_k)?, parse_rational(r, &at_k)?);
        }
    }
    OperatorFamily::new(complex, ops, bounds).or_else(|e| err(at, e.to_string()))
}

pub fn parse_family(text: &str) -> DocResult<OperatorFamily> {
    parse_family_value(&parse_json(text)?, "")
}

pub fn family_to_json(f: &OperatorFamily) -> Value {
    let mut o = Map::new();
    complex_fields(f.complex(), &mut o);
    o.insert(
        "operators".into(),
        Value::Object(
            f.operators()
                .map(|(v, a)| (v.clone(), operator_to_json(a)))
                .collect(),
        ),
    );
    if !f.edge_bounds().is_empty() {
        o.insert(
            "edge_bounds".into(),
            Value::Object(
                f.edge_bounds()
                    .iter()
                    .map(|((u, v), b)| (format!("{u}|{v}"), rational_to_json(b)))
                    .collect(),
            ),
        );
    }
    Value::Object(o)
}

pub fn parse_path_value(v: &Value, at: &str) -> DocResult<OperatorPath> {
    let m = object(v, at)?;
    only_keys(m, &["grid", "samples"], at)?;
    let at_g = sub(at, "grid");
    let grid = array(field(m, "grid", at)?, &at_g)?
        .iter()
        .enumerate()
        .map(|(i, t)| parse_rational(t, &idx(&at_g, i)))
        .collect::<DocResult<Vec<_>>>()?;
    let at_s = sub(at, "samples");
    let samples = array(field(m, "samples", at)?, &at_s)?
        .iter()
        .enumerate()
        .map(|(i, s)| parse_operator_value(s, &idx(&at_s, i)))
        .collect::<DocResult<Vec<_>>>()?;
    OperatorPath::new(grid, samples).or_else(|e| err(at, e.to_string()))
}

pub fn parse_path(text: &str) -> DocResult<OperatorPath> {
    parse_path_value(&parse_json(text)?, "")
}

pub fn path_to_json(p: &OperatorPath) -> Value {
    json!({
        "grid": p.grid().iter().map(rational_to_json).collect::<Vec<_>>(),
        "samples": p.samples().iter().map(operator_to_json).collect::<Vec<_>>(),
    })
}

fn parse_eigen_list(v: &Value, at: &str) -> DocResult<Vec<(GaussianRational, u64)>> {
    array(v, at)?
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let at_i = idx(at, i);
            let m = object(e, &at_i)?;
            only_keys(m, &["value", "mult"], &at_i)?;
            let value = parse_gauss(field(m, "value", &at_i)?, &sub(&at_i, "value"))?;
            let mult = natural(field(m, "mult", &at_i)?, &sub(&at_i, "mult"))?;
            Ok((value, mult))
        })
        .collect()
}

fn eigen_list_to_json(list: &[(GaussianRational, u64)]) -> Value {
    Value::Array(
        list.iter()
            .map(|(v, m)| json!({ "value": gauss_to_json(v), "mult": m }))
            .collect(),
    )
}

pub fn parse_normal_value(v: &Value, at: &str) -> DocResult<NormalDiagonalOperator> {
    let m = object(v, at)?;
    only_keys(m, &["exceptional", "tails"], at)?;
    let exceptional = match m.get("exceptional") {
        Some(e) => parse_eigen_list(e, &sub(at, "exceptional"))?,
        None => Vec::new(),
    };
    let at_t = sub(at, "tails");
    let tails = array(field(m, "tails", at)?, &at_t)?
        .iter()
        .enumerate()
        .map(|(i, t)| parse_gauss(t, &idx(&at_t, i)))
        .collect::<DocResult<Vec<_>>>()?;
    NormalDiagonalOperator::new(exceptional, tails).or_else(|e| err(at, e.to_string()))
}

pub fn parse_normal(text: &str) -> DocResult<NormalDiagonalOperator> {
    parse_normal_value(&parse_json(text)?, "")
}

pub fn normal_to_json(n: &NormalDiagonalOperator) -> Value {
    json!({
        "exceptional": eigen_list_to_json(n.exceptional()),
        "tails": n.tails().iter().map(gauss_to_json).collect::<Vec<_>>(),
    })
}

/// A normal diagonal document, or `{"matrix": .., "eigen": [..]?}` for a
/// finite block (eigendata may be omitted for triangular matrices).
pub fn parse_spectral_input_value(v: &Value, at: &str) -> DocResult<SpectralInput> {
    let m = object(v, at)?;
    if m.contains_key("matrix") {
        only_keys(m, &["matrix", "eigen"], at)?;
        let matrix = parse_matrix(&m["matrix"], &sub(at, "matrix"))?;
        let r = match m.get("eigen") {
            Some(e) => {
                SpectralInput::finite_with_eigen(matrix, parse_eigen_list(e, &sub(at, "eigen"))?)
            }
            None => SpectralInput::finite(matrix),
        };
        r.or_else(|e| err(at, e.to_string()))
    } else {
        Ok(SpectralInput::Normal(parse_normal_value(v, at)?))
    }
}

pub fn parse_spectral_input(text: &str) -> DocResult<SpectralInput> {
    parse_spectral_input_value(&parse_json(text)?, "")
}

pub fn spectral_input_to_json(s: &SpectralInput) -> Value {
    match s {
        SpectralInput::Normal(n) => normal_to_json(n),
        SpectralInput::Finite { matrix, eigen } => {
            json!({ "matrix": matrix_to_json(matrix), "eigen": eigen_list_to_json(eigen) })
        }
    }
}

/// Family document whose `operators` are spectral inputs.
pub fn parse_spectral_family(text: &str) -> DocResult<SpectralFamily> {
    let v = parse_json(text)?;
    let m = object(&v, "")?;
    only_keys(m, &["vertices", "edges", "operators"], "")?;
    let complex = parse_complex_value(m, "")?;
    let mut members = BTreeMap::new();
    for (k, o) in object(field(m, "operators", "")?, "operators")? {
        members.insert(
            k.clone(),
            parse_spectral_input_value(o, &sub("operators", k))?,
        );
    }
    SpectralFamily::new(complex, members).or_else(|e| err("operators", e.to_string()))
}

pub fn spectral_family_to_json(f: &SpectralFamily) -> Value {
    let mut o = Map::new();
    complex_fields(f.complex(), &mut o);
    o.insert(
        "operators".into(),
        Value::Object(
            f.members()
                .iter()
                .map(|(v, s)| (v.clone(), spectral_input_to_json(s)))
                .collect(),
        ),
    );
    Value::Object(o)
}

pub fn index_vector_to_json(u: &IndexVector) -> Value {
    json!({
        "components": u.components.iter().map(|c| json!({
            "rep": c.rep,
            "members": c.members,
            "index": c.index,
        })).collect::<Vec<_>>()
    })
}

/// Parses an index vector against `c`: either the full
/// `{"components": [...]}` encoding (members must match the partition) or
/// `{"indices": [...]}` listing values in representative order.
pub fn parse_index_vector(text: &str, c: &ParamComplex) -> DocResult<IndexVector> {
    let v = parse_json(text)?;
    let m = object(&v, "")?;
    if let Some(ix) = m.get("indices") {
        only_keys(m, &["indices"], "")?;
        let values = array(ix, "indices")?
            .iter()
            .enumerate()
            .map(|(i, x)| {
                x.as_i64()
                    .map_or_else(|| err(&idx("indices", i), "expected an integer"), Ok)
            })
            .collect::<DocResult<Vec<_>>>()?;
        return IndexVector::for_complex(c, &values).or_else(|e| err("indices", e.to_string()));
    }
    only_keys(m, &["components"], "")?;
    let comps = array(field(m, "components", "")?, "components")?;
    let partition = connected_components(c);
    let mut out = Vec::with_capacity(comps.len());
    for (i, comp) in comps.iter().enumerate() {
        let at = idx("components", i);
        let o = object(comp, &at)?;
        only_keys(o, &["rep", "members", "index"], &at)?;
        let rep = string(field(o, "rep", &at)?, &sub(&at, "rep"))?.to_string();
        let index = field(o, "index", &at)?
            .as_i64()
            .map_or_else(|| err(&sub(&at, "index"), "expected an integer"), Ok)?;
        let members = match o.get("members") {
            Some(ms) => {
                let at_m = sub(&at, "members");
                let mut list = array(ms, &at_m)?
                    .iter()
                    .enumerate()
                    .map(|(j, x)| string(x, &idx(&at_m, j)).map(str::to_string))
                    .collect::<DocResult<Vec<_>>>()?;
                list.sort();
                if partition.iter().all(|p| *p != list) {
                    return err(&at_m, "members are not a component of the complex");
                }
                list
            }
            None => match partition.iter().find(|p| p[0] == rep) {
                Some(p) => p.clone(),
                None => {
                    return err(
                        &sub(&at, "rep"),
                        format!("{rep:?} is not a component representative"),
                    )
                }
            },
        };
        out.push(ComponentIndex {
            rep,
            members,
            index,
        });
    }
    Ok(IndexVector { components: out })
}

pub fn dis_to_json(d: &Dis) -> Value {
    match d {
        Dis::Known(n) => json!(n),
        Dis::Unknown => json!("unknown"),
    }
}

pub fn fredholm_verdict_to_json(v: &FredholmVerdict) -> Value {
    json!({ "is_fredholm": v.is_fredholm, "index": v.index, "reason": v.reason.as_str() })
}

pub fn bverdict_to_json(v: &BFredholmVerdict) -> Value {
    json!({
        "status": v.status.as_str(),
        "index": v.index,
        "dis": v.dis.as_ref().map(dis_to_json),
        "witness_n": v.witness_n,
    })
}

pub fn nullity_defect_to_json(n: &NullityDefect) -> Value {
    json!({ "nullity": n.nullity, "defect": n.defect, "certified": n.certified })
}

pub fn stabilization_to_json(r: &StabilizationReport) -> Value {
    json!({
        "dis": r.dis,
        "passed": r.passed,
        "classes": r.classes.iter().map(|(m, c)| json!({ "n": m, "dim": c.dim, "codim": c.codim })).collect::<Vec<_>>(),
    })
}

fn set_to_json(s: &SpectralSet) -> Value {
    Value::Array(s.iter().map(gauss_to_json).collect())
}

pub fn spectral_report_to_json(r: &SpectralReport) -> Value {
    json!({
        "spectrum": set_to_json(&r.spectrum),
        "weyl_spectrum": set_to_json(&r.weyl_spectrum),
        "e0": set_to_json(&r.e0),
        "pi0": set_to_json(&r.pi0),
    })
}

pub fn weyl_check_to_json(c: &WeylBrowderCheck) -> Value {
    json!({
        "weyl_holds": c.weyl_holds,
        "browder_holds": c.browder_holds,
        "witness": c.witness.as_ref().map(gauss_to_json),
        "report": spectral_report_to_json(&c.report),
    })
}

pub fn path_report_to_json(r: &PathReport) -> Value {
    json!({
        "all_bfredholm": r.all_bfredholm,
        "all_fredholm": r.all_fredholm,
        "index_profile": r.index_profile.iter().map(|e| json!({
            "t": rational_to_json(&e.t),
            "status": e.status.as_str(),
            "index": e.index,
        })).collect::<Vec<_>>(),
    })
}

pub fn homotopy_report_to_json(r: &HomotopyReport) -> Value {
    json!({
        "layers": r.layers,
        "index": index_vector_to_json(&r.start),
        "table": r.table.iter().enumerate().map(|(k, row)| json!({ "layer": k, "indices": row })).collect::<Vec<_>>(),
    })
}

pub fn local_constancy_to_json(r: &LocalConstancyReport) -> Value {
    json!({
        "margin": r.margin.as_ref().map(rational_to_json),
        "index": index_vector_to_json(&r.base),
        "trials": r.trials,
        "failures": r.failures,
    })
}
