//! Parsing of the JSON inputs accepted on the command line.

use std::fs;
use std::path::Path;

use equilat::chains::{truncation, ChainSpec};
use equilat::models::{no3way_chain, scenario_chain, HierModel, IndependentSetScenario};
use equilat::{Budget, Error, IndexedVector, LatticeHandle, Result};
use serde::Deserialize;
use serde_json::Value;

pub fn read_json(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    Ok(serde_json::from_str(&text)?)
}

fn has(value: &Value, key: &str) -> bool {
    value.get(key).is_some()
}

/// A vector object, or a plain integer sequence for `d = c = 1`.
pub fn vector(value: Value) -> Result<IndexedVector> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Vector(IndexedVector),
        Sequence(Vec<i64>),
    }
    match serde_json::from_value(value)? {
        Repr::Vector(v) => Ok(v),
        Repr::Sequence(s) => IndexedVector::from_seq(&s),
    }
}

/// A list of vectors, either bare or under `"elements"`.
pub fn vectors(value: Value) -> Result<Vec<IndexedVector>> {
    let list = match value {
        Value::Object(mut map) => map
            .remove("elements")
            .ok_or_else(|| Error::InvalidInput("expected a list of vectors or an object with \"elements\"".into()))?,
        other => other,
    };
    let Value::Array(items) = list else {
        return Err(Error::InvalidInput("expected a list of vectors".into()));
    };
    items.into_iter().map(vector).collect()
}

/// A chain: seed form `{"seed", "mode"}`, a scenario `{"m", "facets", "T", ...}`,
/// or `{"no3way": c}`.
pub fn chain(value: Value) -> Result<ChainSpec> {
    if let Some(c) = value.get("no3way") {
        let c = c.as_u64().ok_or_else(|| Error::InvalidInput("\"no3way\" must be a positive integer".into()))?;
        return no3way_chain(c as u32);
    }
    if has(&value, "T") {
        return scenario_chain(&IndependentSetScenario::from_json(&value.to_string())?);
    }
    ChainSpec::from_json(&value.to_string())
}

/// A lattice: `{"shape", "generators"}`, or a chain description plus a
/// level `"n"`.
pub fn lattice(value: Value, budget: &Budget) -> Result<LatticeHandle> {
    if has(&value, "shape") {
        return Ok(serde_json::from_value(value)?);
    }
    let n = value
        .get("n")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::InvalidInput("a chain lattice needs a level \"n\"".into()))? as u32;
    let mut rest = value;
    if let Value::Object(map) = &mut rest {
        map.remove("n");
    }
    truncation(&chain(rest)?, n, budget)
}

pub enum ModelInput {
    Model(HierModel),
    Scenario(IndependentSetScenario),
}

pub fn model(value: Value) -> Result<ModelInput> {
    let text = value.to_string();
    if has(&value, "T") {
        Ok(ModelInput::Scenario(IndependentSetScenario::from_json(&text)?))
    } else {
        Ok(ModelInput::Model(HierModel::from_json(&text)?))
    }
}
