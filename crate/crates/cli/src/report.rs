//! The `analyze` report: classification, fraction and decomposition, the
//! epistemic translation and the liar-cycle chains, as ordered JSON.

use std::fmt::Write as _;

use serde_json::{json, Value};
use sheafmodal::contextuality::{
    classify_with_jobs, liar_cycle_chains, ContextualityError, ContextualityReport, LiarChain,
};
use sheafmodal::empirical::{EmpiricalModel, NoDisturbanceReport};
use sheafmodal::modal::{soundness_violations, translate, SoundnessWitness, WorldKind};
use sheafmodal::scalar::format_rational;
use sheafmodal::{HierarchyLevel, MeasurementScenario};

use crate::json::model_to_json;
use crate::CliError;

/// Exit status for a classified model; grows with the level.
pub fn exit_code(level: HierarchyLevel) -> i32 {
    match level {
        HierarchyLevel::Noncontextual => 0,
        HierarchyLevel::ProbabilisticContextual => 10,
        HierarchyLevel::LogicalContextual => 11,
        HierarchyLevel::StronglyContextual => 12,
    }
}

/// Exit status for a disturbing model.
pub const EXIT_DISTURBING: i32 = 3;

pub struct Analysis {
    pub json: Value,
    pub text: String,
    pub exit: i32,
}

fn disturbance_json(s: &MeasurementScenario, r: &NoDisturbanceReport) -> Value {
    let checks: Vec<Value> = r
        .checks
        .iter()
        .map(|c| {
            json!({
                "first": s.context_label(&c.first),
                "second": s.context_label(&c.second),
                "overlap": s.context_label(&c.overlap),
                "agrees": c.agrees,
            })
        })
        .collect();
    json!({ "holds": r.holds, "checks": checks })
}

fn chain_json(s: &MeasurementScenario, chain: &LiarChain) -> Value {
    let steps: Vec<Value> = chain
        .steps
        .iter()
        .map(|st| {
            json!({
                "context": s.context_label(&st.context),
                "forced": format!("{}={}", s.measurement_name(st.to), s.outcomes(st.to)[st.forced_value]),
                "zero_cells": st.zero_cells.iter().map(|z| s.section_label_full(z)).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({
        "start": format!("{}={}", s.measurement_name(chain.start), s.outcomes(chain.start)[chain.start_value]),
        "steps": steps,
        "closing_context": s.context_label(&chain.closing_context),
        "contradicting": chain.contradicting.iter().map(|c| s.section_label_full(c)).collect::<Vec<_>>(),
    })
}

fn witnesses_json(s: &MeasurementScenario, ws: &[SoundnessWitness]) -> Value {
    json!(ws
        .iter()
        .map(|w| json!({"context": s.context_label(&w.context), "section": s.section_label_full(&w.section)}))
        .collect::<Vec<_>>())
}

/// Resolves a comma-separated list of measurement names.
pub fn parse_order(s: &MeasurementScenario, text: &str) -> Result<Vec<usize>, CliError> {
    text.split(',')
        .map(|n| {
            s.measurement_index(n.trim())
                .ok_or_else(|| CliError::Format(format!("unknown measurement `{}` in order", n.trim())))
        })
        .collect()
}

/// A cycle order with the contradiction chains found along it.
pub type OrderedChains = (Vec<usize>, Vec<LiarChain>);

/// Liar-cycle chains along `order`, or the scenario's own cycle order.
pub fn liar_chains(
    model: &EmpiricalModel,
    order: Option<&[usize]>,
) -> Result<Option<OrderedChains>, CliError> {
    let order = match order {
        Some(o) => o.to_vec(),
        None => match model.scenario().default_cycle_order() {
            Some(o) => o,
            None => return Ok(None),
        },
    };
    let chains = liar_cycle_chains(model, &order)?;
    Ok(Some((order, chains)))
}

fn report_json(
    model: &EmpiricalModel,
    report: &ContextualityReport,
    disturbance: &NoDisturbanceReport,
    order: Option<&[usize]>,
) -> Result<Value, CliError> {
    let s = model.scenario();
    let decomposition = report.decomposition.as_ref().map(|d| {
        json!({
            "fraction": format_rational(&d.fraction),
            "weights": d.weights.iter().map(|(g, w)| json!({
                "global": s.section_label_full(g),
                "weight": format_rational(w),
            })).collect::<Vec<_>>(),
            "residual": d.residual.as_ref().map(model_to_json).map(|m| m["tables"].clone()),
        })
    });
    let (translation, soundness) = if s.is_connected() {
        let t = translate(model)?;
        let mutual = soundness_violations(&t, model, WorldKind::Mutual)?;
        let distributed = soundness_violations(&t, model, WorldKind::Distributed)?;
        (
            json!({
                "agents": t.agents,
                "trust_pairs": t.trust_pairs.len(),
                "mutual_worlds": t.mutual_worlds.len(),
                "distributed_worlds": t.distributed_worlds.len(),
            }),
            json!({
                "mutual": witnesses_json(s, &mutual),
                "distributed": witnesses_json(s, &distributed),
            }),
        )
    } else {
        (Value::Null, Value::Null)
    };
    let liar = liar_chains(model, order)?.map(|(order, chains)| {
        json!({
            "order": order.iter().map(|m| s.measurement_name(*m)).collect::<Vec<_>>(),
            "chains": chains.iter().map(|c| chain_json(s, c)).collect::<Vec<_>>(),
        })
    });
    Ok(json!({
        "model": {
            "measurements": s.measurements(),
            "contexts": s.maximal_contexts().iter().map(|c| s.context_label(c)).collect::<Vec<_>>(),
            "semiring": model.semiring().to_string(),
            "connected": s.is_connected(),
        },
        "no_disturbance": disturbance_json(s, disturbance),
        "level": report.level.as_str(),
        "global_support": report.global_support.iter().map(|g| s.section_label_full(g)).collect::<Vec<_>>(),
        "non_extendable": report.non_extendable.iter().map(|(c, sec)| json!({
            "context": s.context_label(c),
            "section": s.section_label_full(sec),
        })).collect::<Vec<_>>(),
        "ncf": report.noncontextual_fraction.as_ref().map(format_rational),
        "decomposition": decomposition,
        "translation": translation,
        "soundness": soundness,
        "liar_cycle": liar,
    }))
}

fn report_text(model: &EmpiricalModel, v: &Value) -> String {
    let mut t = String::new();
    let s = model.scenario();
    let _ = writeln!(t, "scenario     {s}");
    let _ = writeln!(t, "semiring     {}", model.semiring());
    let _ = writeln!(t, "level        {}", v["level"].as_str().unwrap_or("?"));
    if let Some(ncf) = v["ncf"].as_str() {
        let _ = writeln!(t, "ncf          {ncf}");
    }
    let _ = writeln!(
        t,
        "global       {} consistent global sections",
        v["global_support"].as_array().map_or(0, Vec::len)
    );
    let bad = v["non_extendable"].as_array().cloned().unwrap_or_default();
    let _ = writeln!(t, "violations   {}", bad.len());
    for w in bad {
        let _ = writeln!(t, "  {} : {}", w["context"].as_str().unwrap_or(""), w["section"].as_str().unwrap_or(""));
    }
    if let Some(chains) = v["liar_cycle"]["chains"].as_array() {
        for c in chains {
            let steps: Vec<&str> = c["steps"]
                .as_array()
                .map(|s| s.iter().filter_map(|x| x["forced"].as_str()).collect())
                .unwrap_or_default();
            let _ = writeln!(
                t,
                "liar chain   {} => {} contradicts {}",
                c["start"].as_str().unwrap_or(""),
                steps.join(" => "),
                c["contradicting"]
                    .as_array()
                    .map(|a| a.iter().filter_map(Value::as_str).collect::<Vec<_>>().join(" "))
                    .unwrap_or_default()
            );
        }
    }
    t
}

pub fn analyze(model: &EmpiricalModel, jobs: usize, order: Option<&[usize]>) -> Result<Analysis, CliError> {
    let disturbance = model.check_no_disturbance();
    match classify_with_jobs(model, jobs) {
        Ok(report) => {
            let json = report_json(model, &report, &disturbance, order)?;
            let text = report_text(model, &json);
            Ok(Analysis {
                json,
                text,
                exit: exit_code(report.level),
            })
        }
        Err(ContextualityError::DisturbingModel(r)) => {
            let s = model.scenario();
            let json = json!({
                "error": "model is disturbing",
                "no_disturbance": disturbance_json(s, &r),
            });
            let mut text = String::from("model is disturbing\n");
            for c in r.violations() {
                let _ = writeln!(
                    text,
                    "  {} and {} disagree on {}",
                    s.context_label(&c.first),
                    s.context_label(&c.second),
                    s.context_label(&c.overlap)
                );
            }
            Ok(Analysis {
                json,
                text,
                exit: EXIT_DISTURBING,
            })
        }
        Err(e) => Err(e.into()),
    }
}
