//! Argument values are JSON, given inline or as `@path`.

use std::fs;

use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::Value;

use liftlab::circulant::CirculantSpec;
use liftlab::classical::{embed_diagonal, ProbabilityVector};
use liftlab::matcore::{ComplexMatrix, DensityOperator};
use liftlab::qlift::LinearMap;

use crate::CliError;

pub fn read_value(arg: &str) -> Result<Value, CliError> {
    let text = match arg.strip_prefix('@') {
        Some(path) => fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {path}: {e}")))?,
        None => arg.to_string(),
    };
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("invalid JSON: {e}")))
}

pub fn parse<T: DeserializeOwned>(arg: &str, what: &str) -> Result<T, CliError> {
    serde_json::from_value(read_value(arg)?).map_err(|e| CliError::Usage(format!("bad {what}: {e}")))
}

pub fn probability(arg: &str) -> Result<ProbabilityVector, CliError> {
    let w: Vec<f64> = parse(arg, "probability vector")?;
    Ok(ProbabilityVector::new(w)?)
}

/// A matrix object, or a plain array read as a diagonal state.
pub fn state(arg: &str) -> Result<DensityOperator, CliError> {
    match read_value(arg)? {
        Value::Array(_) => Ok(embed_diagonal(&probability(arg)?)),
        v => {
            let m: ComplexMatrix =
                serde_json::from_value(v).map_err(|e| CliError::Usage(format!("bad density matrix: {e}")))?;
            Ok(DensityOperator::single(m)?)
        }
    }
}

/// A `{"d", "units"}` map, or `I` for the identity on dimension `d`.
pub fn map(arg: &str, d: usize) -> Result<LinearMap, CliError> {
    if arg == "I" {
        return Ok(LinearMap::identity(d));
    }
    parse(arg, "linear map")
}

#[derive(Deserialize)]
struct SpecWire {
    d: usize,
    blocks: Vec<ComplexMatrix>,
}

/// Parsed by hand so that positivity and trace failures keep their
/// domain-error classification.
pub fn circulant_spec(arg: &str) -> Result<CirculantSpec, CliError> {
    let w: SpecWire = parse(arg, "circulant spec")?;
    if w.blocks.len() != w.d {
        return Err(CliError::Usage(format!("expected {} blocks, got {}", w.d, w.blocks.len())));
    }
    Ok(CirculantSpec::new(w.blocks)?)
}
