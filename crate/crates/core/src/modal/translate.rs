//! Reading an empirical model as a multi-agent epistemic scenario: agents are
//! measurements, groups that share a context trust one another, and the
//! possible worlds are either global assignments (mutual knowledge) or
//! supported local events (distributed knowledge).

use std::collections::{BTreeMap, BTreeSet};

use fixedbitset::FixedBitSet;

use super::formula::Formula;
use super::kripke::{identity_relation, TopoModel};
use super::ModalError;
use crate::contextuality::global_sections;
use crate::empirical::EmpiricalModel;
use crate::scenario::{Context, GlobalSection, MeasurementScenario, Section};

#[derive(Debug, Clone, PartialEq)]
pub struct MultiAgentScenario {
    pub agents: Vec<String>,
    /// Ordered pairs of nonempty agent groups lying in a common maximal
    /// context, as measurement indices.
    pub trust_pairs: Vec<(Vec<usize>, Vec<usize>)>,
    /// Every global assignment.
    pub mutual_worlds: Vec<GlobalSection>,
    /// Every supported section of a maximal context.
    pub distributed_worlds: Vec<(Context, Section)>,
    source: MeasurementScenario,
}

impl MultiAgentScenario {
    pub fn source_scenario(&self) -> &MeasurementScenario {
        &self.source
    }

    /// Whether group `g` trusts group `h`.
    pub fn trusts(&self, g: &[usize], h: &[usize]) -> bool {
        self.trust_pairs.iter().any(|(a, b)| a == g && b == h)
    }
}

fn subsets(context: &Context) -> Vec<Vec<usize>> {
    let m = context.members();
    (1u64..(1 << m.len()))
        .map(|mask| {
            m.iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, x)| *x)
                .collect()
        })
        .collect()
}

pub fn translate(model: &EmpiricalModel) -> Result<MultiAgentScenario, ModalError> {
    let scenario = model.scenario();
    if !scenario.is_connected() {
        return Err(ModalError::Disconnected);
    }
    if !model.check_no_disturbance().holds {
        return Err(ModalError::DisturbingModel);
    }
    let mut pairs = BTreeSet::new();
    for c in scenario.maximal_contexts() {
        let groups = subsets(c);
        for g in &groups {
            for h in &groups {
                pairs.insert((g.clone(), h.clone()));
            }
        }
    }
    Ok(MultiAgentScenario {
        agents: scenario.measurements().to_vec(),
        trust_pairs: pairs.into_iter().collect(),
        mutual_worlds: scenario.global_assignments(),
        distributed_worlds: model.supported_events(),
        source: scenario.clone(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WorldKind {
    Mutual,
    Distributed,
}

/// A supported local event no possible world accounts for.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SoundnessWitness {
    pub context: Context,
    pub section: Section,
}

fn check_source(s: &MultiAgentScenario, m: &EmpiricalModel) -> Result<(), ModalError> {
    if &s.source != m.scenario() || s.distributed_worlds != m.supported_events() {
        return Err(ModalError::Mismatch);
    }
    Ok(())
}

/// Supported local events not entailed by the possible worlds of `kind`.
///
/// For mutual worlds each event becomes a proposition over the global
/// assignments, and it is a witness when `D{context} (event & consistent)`
/// holds nowhere. Distributed worlds contain every supported event, so none
/// is ever a witness there.
pub fn soundness_violations(
    s: &MultiAgentScenario,
    m: &EmpiricalModel,
    kind: WorldKind,
) -> Result<Vec<SoundnessWitness>, ModalError> {
    check_source(s, m)?;
    match kind {
        WorldKind::Distributed => Ok(m
            .supported_events()
            .into_iter()
            .filter(|e| !s.distributed_worlds.contains(e))
            .map(|(context, section)| SoundnessWitness { context, section })
            .collect()),
        WorldKind::Mutual => {
            let worlds = &s.mutual_worlds;
            let n = worlds.len();
            let globals = global_sections(m);
            let consistent: BTreeSet<&GlobalSection> = globals.iter().collect();
            let mut ok = FixedBitSet::with_capacity(n);
            for (i, w) in worlds.iter().enumerate() {
                ok.set(i, consistent.contains(w));
            }
            let events = m.supported_events();
            let mut valuation = BTreeMap::new();
            valuation.insert("consistent".to_string(), ok);
            for (k, (ctx, sec)) in events.iter().enumerate() {
                let mut set = FixedBitSet::with_capacity(n);
                for (i, w) in worlds.iter().enumerate() {
                    set.set(i, w.restrict(ctx).map(|r| &r == sec).unwrap_or(false));
                }
                valuation.insert(format!("e{k}"), set);
            }
            let names: Vec<String> = worlds.iter().map(|w| s.source.section_label(w)).collect();
            let frame = TopoModel::new(
                names,
                s.agents.clone(),
                vec![identity_relation(n); s.agents.len()],
                valuation,
            )?;
            let mut out = Vec::new();
            for (k, (ctx, sec)) in events.into_iter().enumerate() {
                let group = ctx.members().iter().map(|i| s.agents[*i].clone());
                let f = Formula::distributed(
                    group,
                    Formula::and(Formula::var(format!("e{k}")), Formula::var("consistent")),
                );
                if frame.eval(&f)?.is_clear() {
                    out.push(SoundnessWitness {
                        context: ctx,
                        section: sec,
                    });
                }
            }
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{build_fr_model, build_pr_model, build_wigner_model};

    #[test]
    fn fr_translation() {
        let m = build_fr_model().unwrap();
        let s = translate(&m).unwrap();
        assert_eq!(s.agents.len(), 4);
        assert_eq!(s.mutual_worlds.len(), 16);
        assert_eq!(s.distributed_worlds.len(), 13);
        // 9 ordered pairs per context; each singleton self-pair is shared by two
        assert_eq!(s.trust_pairs.len(), 4 * 9 - 4);
        assert!(s.trusts(&[0], &[0, 2]));
        assert!(!s.trusts(&[0], &[1]));
    }

    #[test]
    fn fr_mutual_violation_is_the_hardy_cell() {
        let m = build_fr_model().unwrap();
        let s = translate(&m).unwrap();
        let v = soundness_violations(&s, &m, WorldKind::Mutual).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(m.scenario().section_label_full(&v[0].section), "U=1,W=1");
        assert!(soundness_violations(&s, &m, WorldKind::Distributed).unwrap().is_empty());
    }

    #[test]
    fn pr_translation() {
        let m = build_pr_model();
        let s = translate(&m).unwrap();
        assert_eq!(s.distributed_worlds.len(), 8);
        assert_eq!(soundness_violations(&s, &m, WorldKind::Mutual).unwrap().len(), 8);
    }

    #[test]
    fn errors() {
        let m = build_wigner_model(1.0f64, 0.0, false).unwrap();
        assert!(matches!(translate(&m), Err(ModalError::Disconnected)));
        let fr = build_fr_model().unwrap();
        let pr = build_pr_model();
        let s = translate(&fr).unwrap();
        assert!(matches!(
            soundness_violations(&s, &pr, WorldKind::Mutual),
            Err(ModalError::Mismatch)
        ));
    }
}
