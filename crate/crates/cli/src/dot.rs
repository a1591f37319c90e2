//! Graphviz rendering of the possibilistic bundle: one cluster (fibre) of
//! outcome nodes per measurement, and one edge per supported section of a
//! two-measurement context.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use sheafmodal::contextuality::global_sections;
use sheafmodal::empirical::EmpiricalModel;
use sheafmodal::{Context, Section};

use crate::report::liar_chains;
use crate::CliError;

fn node(model: &EmpiricalModel, m: usize, v: usize) -> String {
    let s = model.scenario();
    format!("\"{}={}\"", s.measurement_name(m), s.outcomes(m)[v])
}

/// Sections drawn in red: the contradicting sections of the liar-cycle
/// chains along the cycle, or, when no chain closes, every section that
/// does not extend to a global section.
pub fn red_sections(
    model: &EmpiricalModel,
    order: Option<&[usize]>,
) -> Result<BTreeSet<(Context, Section)>, CliError> {
    let mut red = BTreeSet::new();
    if model.check_no_disturbance().holds {
        if let Some((_, chains)) = liar_chains(model, order)? {
            for chain in chains {
                for sec in chain.contradicting {
                    red.insert((chain.closing_context.clone(), sec));
                }
            }
        }
    }
    if red.is_empty() {
        red = non_extendable(model);
    }
    Ok(red)
}

fn non_extendable(model: &EmpiricalModel) -> BTreeSet<(Context, Section)> {
    let globals = global_sections(model);
    model
        .supported_events()
        .into_iter()
        .filter(|(c, sec)| !globals.iter().any(|g| g.restrict(c).map(|r| &r == sec).unwrap_or(false)))
        .collect()
}

pub fn bundle_dot(model: &EmpiricalModel, order: Option<&[usize]>) -> Result<String, CliError> {
    let s = model.scenario();
    let red = red_sections(model, order)?;
    let mut out = String::new();
    let _ = writeln!(out, "graph bundle {{");
    let _ = writeln!(
        out,
        "  // {} of {} supported sections have no global extension",
        non_extendable(model).len(),
        model.supported_events().len()
    );
    let _ = writeln!(out, "  node [shape=circle, fontsize=10];");
    for m in 0..s.measurement_count() {
        let name = s.measurement_name(m);
        let _ = writeln!(out, "  subgraph \"cluster_{name}\" {{");
        let _ = writeln!(out, "    label=\"{name}\";");
        for (v, o) in s.outcomes(m).iter().enumerate() {
            let _ = writeln!(out, "    {} [label=\"{o}\"];", node(model, m, v));
        }
        let _ = writeln!(out, "  }}");
    }
    for ctx in s.maximal_contexts() {
        let label = s.context_label(ctx);
        for sec in model.support(ctx)? {
            let is_red = red
                .iter()
                .any(|(c, r)| sec.restrict(c).map(|x| &x == r).unwrap_or(false));
            let attrs = if is_red {
                format!("label=\"{label}\", color=red, penwidth=2")
            } else {
                format!("label=\"{label}\"")
            };
            let members = ctx.members();
            if members.len() == 2 {
                let _ = writeln!(
                    out,
                    "  {} -- {} [{attrs}];",
                    node(model, members[0], sec.values()[0]),
                    node(model, members[1], sec.values()[1])
                );
            } else if members.len() > 2 {
                // hyperedge through an event node
                let event = format!("\"{label}:{}\"", s.section_label(&sec));
                let _ = writeln!(out, "  {event} [shape=point];");
                for (m, v) in members.iter().zip(sec.values()) {
                    let _ = writeln!(out, "  {event} -- {} [{attrs}];", node(model, *m, *v));
                }
            }
        }
    }
    let _ = writeln!(out, "}}");
    Ok(out)
}

/// Number of edges carrying `color=red`.
pub fn count_red_edges(dot: &str) -> usize {
    dot.lines().filter(|l| l.contains(" -- ") && l.contains("color=red")).count()
}
