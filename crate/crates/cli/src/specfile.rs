//! Strict JSON spec files.
//!
//! ```json
//! {
//!   "name": "C(Z2)",
//!   "dim": 2,
//!   "mult": [{"i": 0, "j": 0, "k": 0, "v": [1.0, 0.0]}, ...],
//!   "unit": [[1.0, 0.0], [1.0, 0.0]],
//!   "comult": [{"k": 0, "i": 0, "j": 0, "v": [1.0, 0.0]}, ...],
//!   "counit": [[1.0, 0.0], [0.0, 0.0]],
//!   "antipode": [{"i": 0, "j": 0, "v": [1.0, 0.0]}, ...],
//!   "star": [{"i": 0, "j": 0, "v": [1.0, 0.0]}, ...],
//!   "haar": [[0.5, 0.0], [0.5, 0.0]]
//! }
//! ```
//!
//! `mult` entries give the coefficient of `e_k` in `e_i e_j`, `comult` entries
//! the coefficient of `e_i ⊗ e_j` in `Γ(e_k)`, and matrix entries `{i, j}` the
//! row `i`, column `j` coefficient. `haar` is optional.

use std::collections::HashSet;

use num_complex::Complex64;
use qg_core::linalg::{CMat, CVec};
use qg_core::spec::{AlgebraSpec, Tensor3};
use serde::{Deserialize, Serialize};

use crate::CliError;

type Pair = [f64; 2];

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MultEntry {
    i: usize,
    j: usize,
    k: usize,
    v: Pair,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComultEntry {
    k: usize,
    i: usize,
    j: usize,
    v: Pair,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixEntry {
    i: usize,
    j: usize,
    v: Pair,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecDocument {
    name: String,
    dim: usize,
    mult: Vec<MultEntry>,
    unit: Vec<Pair>,
    comult: Vec<ComultEntry>,
    counit: Vec<Pair>,
    antipode: Vec<MatrixEntry>,
    star: Vec<MatrixEntry>,
    #[serde(default)]
    haar: Option<Vec<Pair>>,
}

fn complex(p: &Pair) -> Complex64 {
    Complex64::new(p[0], p[1])
}

fn pair(z: Complex64) -> Pair {
    [z.re, z.im]
}

fn check_index(field: &str, idx: usize, n: usize) -> Result<(), CliError> {
    if idx >= n {
        Err(CliError::Shape(format!("{field}: index {idx} outside [0, {n})")))
    } else {
        Ok(())
    }
}

fn vector(field: &str, items: &[Pair], n: usize) -> Result<CVec, CliError> {
    if items.len() != n {
        return Err(CliError::Shape(format!("{field}: expected {n} entries, got {}", items.len())));
    }
    Ok(CVec::from_iterator(n, items.iter().map(complex)))
}

fn tensor<'a>(
    field: &str,
    entries: impl Iterator<Item = ([usize; 3], &'a Pair)>,
    n: usize,
) -> Result<Tensor3, CliError> {
    let mut t = Tensor3::zeros(n);
    let mut seen = HashSet::new();
    for (idx, v) in entries {
        for i in idx {
            check_index(field, i, n)?;
        }
        if !seen.insert(idx) {
            return Err(CliError::DuplicateEntry(format!("{field}: {idx:?}")));
        }
        t.set(idx[0], idx[1], idx[2], complex(v));
    }
    Ok(t)
}

fn matrix(field: &str, entries: &[MatrixEntry], n: usize) -> Result<CMat, CliError> {
    let mut m = CMat::zeros(n, n);
    let mut seen = HashSet::new();
    for e in entries {
        check_index(field, e.i, n)?;
        check_index(field, e.j, n)?;
        if !seen.insert((e.i, e.j)) {
            return Err(CliError::DuplicateEntry(format!("{field}: [{}, {}]", e.i, e.j)));
        }
        m[(e.i, e.j)] = complex(&e.v);
    }
    Ok(m)
}

/// Parses a spec document; every tensor is materialized and checked for shape.
pub fn parse_spec_file(bytes: &[u8]) -> Result<AlgebraSpec, CliError> {
    let doc: SpecDocument = serde_json::from_slice(bytes).map_err(|e| CliError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let n = doc.dim;
    if n == 0 {
        return Err(CliError::Shape("dim must be at least 1".into()));
    }
    // `mult[i][j][k]` and `comult[k][i][j]` match the in-memory index order.
    let mult = tensor("mult", doc.mult.iter().map(|e| ([e.i, e.j, e.k], &e.v)), n)?;
    let comult = tensor("comult", doc.comult.iter().map(|e| ([e.k, e.i, e.j], &e.v)), n)?;
    Ok(AlgebraSpec {
        name: doc.name,
        dim: n,
        mult,
        unit: vector("unit", &doc.unit, n)?,
        comult,
        counit: vector("counit", &doc.counit, n)?,
        antipode: matrix("antipode", &doc.antipode, n)?,
        star: matrix("star", &doc.star, n)?,
        haar: doc.haar.as_deref().map(|h| vector("haar", h, n)).transpose()?,
    })
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("plain data serializes")
}

fn push_list(out: &mut String, key: &str, items: Vec<String>, last: bool) {
    out.push_str(&format!("  {}: [", json(&key)));
    if items.is_empty() {
        out.push(']');
    } else {
        out.push('\n');
        let body: Vec<String> = items.into_iter().map(|s| format!("    {s}")).collect();
        out.push_str(&body.join(",\n"));
        out.push_str("\n  ]");
    }
    out.push_str(if last { "\n" } else { ",\n" });
}

fn vector_items(v: &CVec) -> Vec<String> {
    v.iter().map(|z| json(&pair(*z))).collect()
}

fn matrix_items(m: &CMat) -> Vec<String> {
    let mut items = Vec::new();
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let z = m[(i, j)];
            if z != Complex64::new(0.0, 0.0) {
                items.push(json(&MatrixEntry { i, j, v: pair(z) }));
            }
        }
    }
    items
}

/// Canonical serialization: fixed key order, one sparse entry per line,
/// entries in lexicographic index order, shortest round-trip floats.
pub fn emit_spec(spec: &AlgebraSpec) -> String {
    let mut out = String::from("{\n");
    out.push_str(&format!("  \"name\": {},\n", json(&spec.name)));
    out.push_str(&format!("  \"dim\": {},\n", spec.dim));
    let mult = spec.mult.nonzeros().map(|(i, j, k, v)| json(&MultEntry { i, j, k, v: pair(v) })).collect();
    push_list(&mut out, "mult", mult, false);
    push_list(&mut out, "unit", vector_items(&spec.unit), false);
    let comult = spec.comult.nonzeros().map(|(k, i, j, v)| json(&ComultEntry { k, i, j, v: pair(v) })).collect();
    push_list(&mut out, "comult", comult, false);
    push_list(&mut out, "counit", vector_items(&spec.counit), false);
    push_list(&mut out, "antipode", matrix_items(&spec.antipode), false);
    let has_haar = spec.haar.is_some();
    push_list(&mut out, "star", matrix_items(&spec.star), !has_haar);
    if let Some(h) = &spec.haar {
        push_list(&mut out, "haar", vector_items(h), true);
    }
    out.push_str("}\n");
    out
}
