//! JSON input and output.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::complex::{from_simplicial, Cell, ComplexError, RegularCwComplex};
use crate::homalg::AbelianGroup;
use crate::morse::{check_acyclic, validate_morse, GradientVectorField, MorseError, MorseFunction};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unrecognized document: {0}")]
    Schema(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Morse(#[from] MorseError),
}

impl IoError {
    /// Whether the input could not be read at all, as opposed to failing validation.
    pub fn is_parse_error(&self) -> bool {
        matches!(self, IoError::Json(_) | IoError::Schema(_))
    }
}

#[derive(Serialize, Deserialize)]
struct CellsDoc {
    cells: Vec<Cell>,
    covering: Vec<(String, String)>,
}

#[derive(Serialize, Deserialize)]
struct FacetsDoc {
    facets: Vec<Vec<u64>>,
}

#[derive(Serialize, Deserialize)]
struct PairsDoc {
    pairs: Vec<(String, String)>,
}

/// Reads either `{"cells":[...],"covering":[...]}` or `{"facets":[...]}`.
pub fn parse_complex(text: &str) -> Result<RegularCwComplex, IoError> {
    let v: Value = serde_json::from_str(text)?;
    if v.get("facets").is_some() {
        let doc: FacetsDoc = serde_json::from_value(v)?;
        return Ok(from_simplicial(&doc.facets)?.1);
    }
    if v.get("cells").is_some() {
        let doc: CellsDoc = serde_json::from_value(v)?;
        return Ok(RegularCwComplex::validate(doc.cells, &doc.covering)?);
    }
    Err(IoError::Schema("expected a `cells` or `facets` key".into()))
}

/// Reads a field, either as `{"pairs":[...]}` or as a Morse function `{"values":{...}}`.
pub fn parse_field(cx: &RegularCwComplex, text: &str) -> Result<GradientVectorField, IoError> {
    let v: Value = serde_json::from_str(text)?;
    if v.get("pairs").is_some() {
        let doc: PairsDoc = serde_json::from_value(v)?;
        return Ok(check_acyclic(cx, &doc.pairs)?);
    }
    if v.get("values").is_some() {
        let f: MorseFunction = serde_json::from_value(v)?;
        return Ok(validate_morse(cx, &f)?);
    }
    Err(IoError::Schema("expected a `pairs` or `values` key".into()))
}

pub fn parse_function(text: &str) -> Result<MorseFunction, IoError> {
    Ok(serde_json::from_str(text)?)
}

pub fn complex_json(cx: &RegularCwComplex) -> Value {
    let covering: Vec<(String, String)> =
        cx.covering_pairs().map(|(u, l)| (cx.id(u).to_string(), cx.id(l).to_string())).collect();
    serde_json::to_value(CellsDoc { cells: cx.cells().to_vec(), covering }).expect("serializable")
}

pub fn field_json(cx: &RegularCwComplex, v: &GradientVectorField) -> Value {
    serde_json::to_value(PairsDoc { pairs: v.to_ids(cx) }).expect("serializable")
}

pub fn group_json(g: &AbelianGroup) -> Value {
    json!({"free": g.free, "torsion": g.torsion})
}

pub fn homology_json(groups: &[AbelianGroup]) -> Value {
    json!({"H": groups.iter().map(group_json).collect::<Vec<_>>()})
}
