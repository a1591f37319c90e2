//! JSON encodings of empirical models and Kripke models. Rationals are
//! always written as `"p/q"` strings.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde_json::{json, Map, Value};
use sheafmodal::empirical::{EmpiricalModel, SemiringTag};
use sheafmodal::modal::TopoModel;
use sheafmodal::scalar::{format_rational, parse_rational};
use sheafmodal::{MeasurementScenario, Rational};

use crate::CliError;

fn format_err(msg: impl Into<String>) -> CliError {
    CliError::Format(msg.into())
}

fn str_array(value: &Value, what: &str) -> Result<Vec<String>, CliError> {
    value
        .as_array()
        .ok_or_else(|| format_err(format!("{what} must be an array")))?
        .iter()
        .map(|v| {
            v.as_str()
                .map(str::to_string)
                .ok_or_else(|| format_err(format!("{what} must contain strings")))
        })
        .collect()
}

fn field<'a>(obj: &'a Value, key: &str) -> Result<&'a Value, CliError> {
    obj.get(key).ok_or_else(|| format_err(format!("missing field `{key}`")))
}

pub fn scenario_to_json(s: &MeasurementScenario) -> Value {
    let contexts: Vec<Vec<&str>> = s
        .maximal_contexts()
        .iter()
        .map(|c| c.members().iter().map(|m| s.measurement_name(*m)).collect())
        .collect();
    let mut outcomes = Map::new();
    for (i, m) in s.measurements().iter().enumerate() {
        outcomes.insert(m.clone(), json!(s.outcomes(i)));
    }
    json!({
        "measurements": s.measurements(),
        "contexts": contexts,
        "outcomes": outcomes,
    })
}

pub fn scenario_from_json(value: &Value) -> Result<MeasurementScenario, CliError> {
    let measurements = str_array(field(value, "measurements")?, "measurements")?;
    let contexts = field(value, "contexts")?
        .as_array()
        .ok_or_else(|| format_err("contexts must be an array"))?
        .iter()
        .map(|c| str_array(c, "context"))
        .collect::<Result<Vec<_>, _>>()?;
    let outcomes: Vec<(String, Vec<String>)> = match value.get("outcomes") {
        None => measurements
            .iter()
            .map(|m| (m.clone(), vec!["0".to_string(), "1".to_string()]))
            .collect(),
        Some(Value::Object(map)) => map
            .iter()
            .map(|(k, v)| Ok((k.clone(), str_array(v, "outcomes")?)))
            .collect::<Result<_, CliError>>()?,
        Some(_) => return Err(format_err("outcomes must be an object")),
    };
    Ok(MeasurementScenario::new(measurements, contexts, outcomes)?)
}

fn rational_cell(value: &Value) -> Result<Rational, CliError> {
    match value {
        Value::String(s) => {
            parse_rational(s).ok_or_else(|| format_err(format!("`{s}` is not a rational")))
        }
        Value::Number(n) if n.is_i64() => Ok(Rational::from_integer(n.as_i64().unwrap_or(0).into())),
        Value::Bool(b) => Ok(Rational::from_integer(i64::from(*b).into())),
        other => Err(format_err(format!(
            "table values must be \"p/q\" strings, integers or booleans, got {other}"
        ))),
    }
}

pub fn model_to_json(model: &EmpiricalModel) -> Value {
    let s = model.scenario();
    let mut tables = Map::new();
    for (ctx, row) in s.maximal_contexts().iter().zip(model.rows()) {
        let mut table = Map::new();
        for (sec, v) in s.assignments(ctx).iter().zip(row) {
            table.insert(s.section_label(sec), Value::String(format_rational(v)));
        }
        tables.insert(s.context_label(ctx), Value::Object(table));
    }
    json!({
        "scenario": scenario_to_json(s),
        "semiring": model.semiring().to_string(),
        "tables": tables,
    })
}

pub fn model_from_json(value: &Value) -> Result<EmpiricalModel, CliError> {
    let scenario = scenario_from_json(field(value, "scenario")?)?;
    let semiring = match field(value, "semiring")?.as_str() {
        Some("rational") => SemiringTag::RationalProbability,
        Some("boolean") => SemiringTag::Boolean,
        _ => return Err(format_err("semiring must be \"rational\" or \"boolean\"")),
    };
    let tables = field(value, "tables")?
        .as_object()
        .ok_or_else(|| format_err("tables must be an object"))?;
    let mut parsed = BTreeMap::new();
    for (key, table) in tables {
        let names: Vec<&str> = key.split(',').map(str::trim).collect();
        let ctx = scenario.context(&names)?;
        let cells = table
            .as_object()
            .ok_or_else(|| format_err(format!("table {key} must be an object")))?;
        let mut row = BTreeMap::new();
        for (sec_key, cell) in cells {
            row.insert(scenario.parse_section(&ctx, sec_key)?, rational_cell(cell)?);
        }
        parsed.insert(ctx, row);
    }
    Ok(EmpiricalModel::new(scenario, semiring, parsed)?)
}

pub fn read_json(path: &Path) -> Result<Value, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(path.display().to_string(), e))?;
    serde_json::from_str(&text).map_err(|e| format_err(format!("{}: {e}", path.display())))
}

pub fn read_model(path: &Path) -> Result<EmpiricalModel, CliError> {
    model_from_json(&read_json(path)?)
}

/// Pretty JSON with a trailing newline.
pub fn write_json(out: &mut dyn Write, value: &Value) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).expect("values are serializable");
    writeln!(out, "{text}").map_err(|e| CliError::Io("output".into(), e))
}

/// Reads `{"worlds", "agents", "relations": {agent: [[from, to]]},
/// "valuation": {var: [world]}}`.
pub fn topo_from_json(value: &Value, checked: bool) -> Result<TopoModel, CliError> {
    let worlds = str_array(field(value, "worlds")?, "worlds")?;
    let agents = str_array(field(value, "agents")?, "agents")?;
    let relations = field(value, "relations")?
        .as_object()
        .ok_or_else(|| format_err("relations must be an object"))?
        .iter()
        .map(|(agent, pairs)| {
            let pairs = pairs
                .as_array()
                .ok_or_else(|| format_err(format!("relation of {agent} must be an array")))?
                .iter()
                .map(|p| {
                    let p = str_array(p, "relation pair")?;
                    match <[String; 2]>::try_from(p) {
                        Ok([a, b]) => Ok((a, b)),
                        Err(_) => Err(format_err("relation pairs must have two worlds")),
                    }
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            Ok((agent.clone(), pairs))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let valuation = match value.get("valuation") {
        None => Vec::new(),
        Some(Value::Object(map)) => map
            .iter()
            .map(|(k, v)| Ok((k.clone(), str_array(v, "valuation")?)))
            .collect::<Result<Vec<_>, CliError>>()?,
        Some(_) => return Err(format_err("valuation must be an object")),
    };
    Ok(TopoModel::from_pairs(&worlds, &agents, &relations, &valuation, checked)?)
}

pub fn topo_to_json(model: &TopoModel) -> Value {
    let mut relations = Map::new();
    for (i, a) in model.agents().iter().enumerate() {
        let pairs: Vec<[&str; 2]> = model
            .relation(i)
            .iter()
            .enumerate()
            .flat_map(|(w, succ)| {
                succ.ones()
                    .map(move |v| [model.worlds()[w].as_str(), model.worlds()[v].as_str()])
            })
            .collect();
        relations.insert(a.clone(), json!(pairs));
    }
    let mut valuation = Map::new();
    for (var, set) in model.valuation() {
        valuation.insert(var.clone(), json!(model.world_names(set)));
    }
    json!({
        "worlds": model.worlds(),
        "agents": model.agents(),
        "relations": relations,
        "valuation": valuation,
    })
}
