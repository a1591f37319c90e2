//! Deciding and quantifying contextuality of empirical models.
//!
//! Possibilistic questions (global sections, extendability, the logical and
//! strong levels) are answered on the boolean collapse by backtracking over
//! measurements. The noncontextual fraction is the optimum of the exact LP
//! over all global assignments.

use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::empirical::{EmpiricalModel, ModelError, NoDisturbanceReport, SemiringTag};
use crate::ratlp::{solve, LpError};
use crate::scalar::Rational;
use crate::scenario::{Context, GlobalSection, MeasurementScenario, Section};
use crate::{ExactLp, ExactSolution};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ContextualityError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("model is disturbing")]
    DisturbingModel(Box<NoDisturbanceReport>),
    #[error("section {0} is not in the support of its context")]
    SectionNotInSupport(String),
    #[error("not a cycle: {0}")]
    NotACycle(String),
    #[error("LP failure: {0}")]
    Lp(String),
}

impl From<LpError<Rational>> for ContextualityError {
    fn from(err: LpError<Rational>) -> Self {
        ContextualityError::Lp(err.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum HierarchyLevel {
    Noncontextual,
    ProbabilisticContextual,
    LogicalContextual,
    StronglyContextual,
}

impl HierarchyLevel {
    pub fn as_str(&self) -> &'static str {
        match self {
            HierarchyLevel::Noncontextual => "NONCONTEXTUAL",
            HierarchyLevel::ProbabilisticContextual => "PROBABILISTIC_CONTEXTUAL",
            HierarchyLevel::LogicalContextual => "LOGICAL_CONTEXTUAL",
            HierarchyLevel::StronglyContextual => "STRONGLY_CONTEXTUAL",
        }
    }
}

impl fmt::Display for HierarchyLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContextualityReport {
    pub level: HierarchyLevel,
    /// Global sections consistent with every context's support.
    pub global_support: Vec<GlobalSection>,
    /// Supported local sections of maximal contexts with no global extension.
    pub non_extendable: Vec<(Context, Section)>,
    pub noncontextual_fraction: Option<Rational>,
    pub decomposition: Option<Decomposition>,
}

/// Optimal LP solution for the noncontextual fraction.
#[derive(Debug, Clone, PartialEq)]
pub struct NoncontextualFraction {
    pub value: Rational,
    /// Weight of every global assignment, in lexicographic order.
    pub weights: Vec<(GlobalSection, Rational)>,
    pub lp: ExactLp,
    pub solution: ExactSolution,
}

/// `m = ncf · noncontextual + (1 - ncf) · residual`.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub fraction: Rational,
    /// Nonzero global weights realizing the fraction.
    pub weights: Vec<(GlobalSection, Rational)>,
    /// Normalized noncontextual part; absent when the fraction is 0.
    pub noncontextual: Option<EmpiricalModel>,
    /// Normalized residual; absent when the fraction is 1.
    pub residual: Option<EmpiricalModel>,
}

impl Decomposition {
    /// Recombines the two parts into dense rows.
    pub fn reconstruct(&self, scenario: &MeasurementScenario) -> Vec<Vec<Rational>> {
        let mut rows: Vec<Vec<Rational>> = scenario
            .maximal_contexts()
            .iter()
            .map(|c| vec![Rational::zero(); scenario.section_count(c)])
            .collect();
        let one = Rational::one();
        let parts = [
            (self.noncontextual.as_ref(), self.fraction.clone()),
            (self.residual.as_ref(), &one - &self.fraction),
        ];
        for (part, weight) in parts {
            if let Some(part) = part {
                for (row, prow) in rows.iter_mut().zip(part.rows()) {
                    for (v, p) in row.iter_mut().zip(prow) {
                        *v += p * &weight;
                    }
                }
            }
        }
        rows
    }
}

/// Per context: index of the measurement completing it and its support mask.
struct SupportIndex {
    contexts: Vec<(Context, usize, Vec<bool>)>,
}

impl SupportIndex {
    fn new(model: &EmpiricalModel) -> Self {
        let contexts = model
            .scenario()
            .maximal_contexts()
            .iter()
            .cloned()
            .zip(model.support_masks())
            .map(|(c, mask)| {
                let last = *c.members().last().expect("contexts are nonempty");
                (c, last, mask)
            })
            .collect();
        SupportIndex { contexts }
    }

    fn consistent_at(&self, scenario: &MeasurementScenario, depth: usize, values: &[usize]) -> bool {
        self.contexts.iter().filter(|(_, last, _)| *last == depth).all(|(c, _, mask)| {
            let rank = c
                .members()
                .iter()
                .fold(0, |acc, m| acc * scenario.outcomes(*m).len() + values[*m]);
            mask[rank]
        })
    }
}

fn backtrack(
    scenario: &MeasurementScenario,
    index: &SupportIndex,
    depth: usize,
    values: &mut Vec<usize>,
    out: &mut Vec<GlobalSection>,
) {
    let n = scenario.measurement_count();
    if depth == n {
        out.push(Section::new(scenario.full_context(), values.clone()).expect("full arity"));
        return;
    }
    for v in 0..scenario.outcomes(depth).len() {
        values[depth] = v;
        if index.consistent_at(scenario, depth, values) {
            backtrack(scenario, index, depth + 1, values, out);
        }
    }
}

/// Global sections whose restriction to every maximal context is supported.
pub fn global_sections(model: &EmpiricalModel) -> Vec<GlobalSection> {
    global_sections_with_jobs(model, 1)
}

/// As [`global_sections`], splitting the search over the first measurement's
/// outcomes across up to `jobs` threads. The result order does not depend on
/// `jobs`.
pub fn global_sections_with_jobs(model: &EmpiricalModel, jobs: usize) -> Vec<GlobalSection> {
    let scenario = model.scenario();
    let index = SupportIndex::new(model);
    let n = scenario.measurement_count();
    let first_outcomes = scenario.outcomes(0).len();
    let search = |v: usize| {
        let mut values = vec![0; n];
        values[0] = v;
        let mut out = Vec::new();
        if index.consistent_at(scenario, 0, &values) {
            backtrack(scenario, &index, 1, &mut values, &mut out);
        }
        out
    };
    if jobs <= 1 || first_outcomes <= 1 {
        return (0..first_outcomes).flat_map(search).collect();
    }
    let chunk = first_outcomes.div_ceil(jobs.min(first_outcomes));
    let starts: Vec<usize> = (0..first_outcomes).collect();
    std::thread::scope(|scope| {
        let handles: Vec<_> = starts
            .chunks(chunk)
            .map(|part| {
                let search = &search;
                scope.spawn(move || part.iter().flat_map(|v| search(*v)).collect::<Vec<_>>())
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("search thread panicked"))
            .collect()
    })
}

/// Whether a supported section of a maximal context extends to a global
/// section consistent with the model.
pub fn extendable(
    model: &EmpiricalModel,
    context: &Context,
    section: &Section,
) -> Result<bool, ContextualityError> {
    let support = model.support(context)?;
    if !support.contains(section) {
        return Err(ContextualityError::SectionNotInSupport(
            model.scenario().section_label_full(section),
        ));
    }
    Ok(global_sections(model)
        .iter()
        .any(|g| g.restrict(context).map(|r| &r == section).unwrap_or(false)))
}

fn non_extendable_events(model: &EmpiricalModel, global: &[GlobalSection]) -> Vec<(Context, Section)> {
    model
        .supported_events()
        .into_iter()
        .filter(|(c, s)| !global.iter().any(|g| g.restrict(c).map(|r| &r == s).unwrap_or(false)))
        .collect()
}

fn require_non_disturbing(model: &EmpiricalModel) -> Result<(), ContextualityError> {
    let report = model.check_no_disturbance();
    if report.holds {
        Ok(())
    } else {
        Err(ContextualityError::DisturbingModel(Box::new(report)))
    }
}

pub fn classify(model: &EmpiricalModel) -> Result<ContextualityReport, ContextualityError> {
    classify_with_jobs(model, 1)
}

pub fn classify_with_jobs(
    model: &EmpiricalModel,
    jobs: usize,
) -> Result<ContextualityReport, ContextualityError> {
    require_non_disturbing(model)?;
    let global = global_sections_with_jobs(model, jobs);
    let non_extendable = non_extendable_events(model, &global);
    let decomposition = match model.semiring() {
        SemiringTag::RationalProbability => Some(noncontextual_decomposition(model)?),
        SemiringTag::Boolean => None,
    };
    let fraction = decomposition.as_ref().map(|d| d.fraction.clone());
    let level = if global.is_empty() {
        HierarchyLevel::StronglyContextual
    } else if !non_extendable.is_empty() {
        HierarchyLevel::LogicalContextual
    } else if fraction.as_ref().is_some_and(|f| !f.is_one()) {
        HierarchyLevel::ProbabilisticContextual
    } else {
        HierarchyLevel::Noncontextual
    };
    Ok(ContextualityReport {
        level,
        global_support: global,
        non_extendable,
        noncontextual_fraction: fraction,
        decomposition,
    })
}

/// Builds the noncontextual-fraction LP: one variable per global assignment,
/// one row per (maximal context, section) bounding the mass restricting to
/// that section by its probability.
pub fn noncontextual_lp(model: &EmpiricalModel) -> (Vec<GlobalSection>, ExactLp) {
    let scenario = model.scenario();
    let globals = scenario.global_assignments();
    let mut rows = Vec::new();
    let mut bounds = Vec::new();
    for (ctx, table_row) in scenario.maximal_contexts().iter().zip(model.rows()) {
        for (sec, value) in scenario.assignments(ctx).iter().zip(table_row) {
            let row = globals
                .iter()
                .map(|g| {
                    if g.restrict(ctx).map(|r| &r == sec).unwrap_or(false) {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect();
            rows.push(row);
            bounds.push(value.clone());
        }
    }
    let objective = vec![Rational::one(); globals.len()];
    let lp = ExactLp::new(objective, rows, bounds).expect("dimensions agree by construction");
    (globals, lp)
}

pub fn noncontextual_fraction(
    model: &EmpiricalModel,
) -> Result<NoncontextualFraction, ContextualityError> {
    model.require_rational()?;
    require_non_disturbing(model)?;
    let (globals, lp) = noncontextual_lp(model);
    let solution = solve(&lp)?;
    Ok(NoncontextualFraction {
        value: solution.value.clone(),
        weights: globals.into_iter().zip(solution.point.iter().cloned()).collect(),
        lp,
        solution,
    })
}

pub fn noncontextual_decomposition(
    model: &EmpiricalModel,
) -> Result<Decomposition, ContextualityError> {
    let ncf = noncontextual_fraction(model)?;
    let scenario = model.scenario();
    let fraction = ncf.value.clone();
    let weights: Vec<(GlobalSection, Rational)> = ncf
        .weights
        .into_iter()
        .filter(|(_, w)| !w.is_zero())
        .collect();

    let mut nc_rows: Vec<Vec<Rational>> = scenario
        .maximal_contexts()
        .iter()
        .map(|c| vec![Rational::zero(); scenario.section_count(c)])
        .collect();
    for (g, w) in &weights {
        for (ctx, row) in scenario.maximal_contexts().iter().zip(nc_rows.iter_mut()) {
            let r = g.restrict(ctx).expect("global restricts to every context");
            row[scenario.section_rank(&r)] += w;
        }
    }

    let noncontextual = if fraction.is_zero() {
        None
    } else {
        let rows = nc_rows
            .iter()
            .map(|row| row.iter().map(|v| v / &fraction).collect())
            .collect();
        Some(EmpiricalModel::from_rows(
            scenario.clone(),
            SemiringTag::RationalProbability,
            rows,
        )?)
    };
    let rest = Rational::one() - &fraction;
    let residual = if rest.is_zero() {
        None
    } else {
        let rows = model
            .rows()
            .iter()
            .zip(&nc_rows)
            .map(|(m, nc)| m.iter().zip(nc).map(|(a, b)| (a - b) / &rest).collect())
            .collect();
        Some(EmpiricalModel::from_rows(
            scenario.clone(),
            SemiringTag::RationalProbability,
            rows,
        )?)
    };
    Ok(Decomposition {
        fraction,
        weights,
        noncontextual,
        residual,
    })
}

/// One inference in a liar cycle: the value of `from` leaves a single
/// possible value for `to`, every alternative being a zero cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForcedStep {
    pub context: Context,
    pub from: usize,
    pub to: usize,
    pub forced_value: usize,
    pub zero_cells: Vec<Section>,
}

/// A chain of forced outcomes around a cycle that contradicts its start.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiarChain {
    pub order: Vec<usize>,
    pub start: usize,
    pub start_value: usize,
    pub steps: Vec<ForcedStep>,
    /// Context joining the last measurement of the order back to the start.
    pub closing_context: Context,
    /// Possible sections of the closing context that keep the start value
    /// but contradict the forced value of the last measurement.
    pub contradicting: Vec<Section>,
}

fn validate_order(
    scenario: &MeasurementScenario,
    order: &[usize],
) -> Result<Vec<Context>, ContextualityError> {
    if order.len() < 2 {
        return Err(ContextualityError::NotACycle("order needs two measurements".into()));
    }
    let mut seen = vec![false; scenario.measurement_count()];
    for &m in order {
        if m >= seen.len() || seen[m] {
            return Err(ContextualityError::NotACycle(format!(
                "measurement index {m} repeated or unknown"
            )));
        }
        seen[m] = true;
    }
    (0..order.len())
        .map(|i| {
            let pair = Context::new(vec![order[i], order[(i + 1) % order.len()]]);
            if scenario.is_context(&pair) {
                Ok(pair)
            } else {
                Err(ContextualityError::NotACycle(format!(
                    "{} is not a context",
                    scenario.context_label(&pair)
                )))
            }
        })
        .collect()
}

/// Possibilistic support of the marginal of `model` on a pair context.
fn pair_support(model: &EmpiricalModel, pair: &Context) -> Vec<(Section, bool)> {
    let host = model
        .scenario()
        .maximal_contexts()
        .iter()
        .find(|c| pair.is_subset(c))
        .expect("validated pair lies in a maximal context");
    model
        .possibilistic_collapse()
        .marginal(host, pair)
        .expect("pair is a subcontext of its host")
        .into_iter()
        .map(|(s, v)| (s, !v.is_zero()))
        .collect()
}

/// Follows forced outcomes around `order` starting from `start_value` of its
/// first measurement.
pub fn liar_cycle_chain(
    model: &EmpiricalModel,
    order: &[usize],
    start_value: usize,
) -> Result<Option<LiarChain>, ContextualityError> {
    let pairs = validate_order(model.scenario(), order)?;
    let mut current = start_value;
    let mut steps = Vec::new();
    for i in 0..order.len() - 1 {
        let (from, to) = (order[i], order[i + 1]);
        let support = pair_support(model, &pairs[i]);
        let mut candidates = Vec::new();
        let mut zeros = Vec::new();
        for (sec, possible) in support {
            if sec.value_of(from) != Some(current) {
                continue;
            }
            let v = sec.value_of(to).expect("pair contains to");
            if possible {
                candidates.push(v);
            } else {
                zeros.push(sec);
            }
        }
        if candidates.len() != 1 {
            return Ok(None);
        }
        current = candidates[0];
        steps.push(ForcedStep {
            context: pairs[i].clone(),
            from,
            to,
            forced_value: current,
            zero_cells: zeros,
        });
    }
    let (first, last) = (order[0], order[order.len() - 1]);
    let closing = pairs[order.len() - 1].clone();
    let contradicting: Vec<Section> = pair_support(model, &closing)
        .into_iter()
        .filter(|(s, possible)| {
            *possible && s.value_of(first) == Some(start_value) && s.value_of(last) != Some(current)
        })
        .map(|(s, _)| s)
        .collect();
    if contradicting.is_empty() {
        return Ok(None);
    }
    Ok(Some(LiarChain {
        order: order.to_vec(),
        start: first,
        start_value,
        steps,
        closing_context: closing,
        contradicting,
    }))
}

/// Every start outcome of `order[0]` whose forced chain ends in contradiction.
pub fn liar_cycle_chains(
    model: &EmpiricalModel,
    order: &[usize],
) -> Result<Vec<LiarChain>, ContextualityError> {
    validate_order(model.scenario(), order)?;
    let mut out = Vec::new();
    for v in 0..model.scenario().outcomes(order[0]).len() {
        if let Some(chain) = liar_cycle_chain(model, order, v)? {
            out.push(chain);
        }
    }
    Ok(out)
}

/// First contradiction chain along `order`, if any start outcome yields one.
pub fn liar_cycle_witness(
    model: &EmpiricalModel,
    order: &[usize],
) -> Result<Option<LiarChain>, ContextualityError> {
    Ok(liar_cycle_chains(model, order)?.into_iter().next())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rational, rational_int};

    fn cycle() -> MeasurementScenario {
        MeasurementScenario::binary(
            ["A", "U", "B", "W"],
            [["A", "B"], ["A", "W"], ["U", "B"], ["U", "W"]],
        )
        .unwrap()
    }

    fn fr() -> EmpiricalModel {
        let r = rational;
        EmpiricalModel::from_rows(
            cycle(),
            SemiringTag::RationalProbability,
            vec![
                vec![r(1, 3), r(0, 1), r(1, 3), r(1, 3)],
                vec![r(1, 6), r(1, 6), r(2, 3), r(0, 1)],
                vec![r(2, 3), r(1, 6), r(0, 1), r(1, 6)],
                vec![r(3, 4), r(1, 12), r(1, 12), r(1, 12)],
            ],
        )
        .unwrap()
    }

    fn pr(semiring: SemiringTag) -> EmpiricalModel {
        let one = rational_int(1);
        let zero = rational_int(0);
        let half = rational(1, 2);
        let (hi, lo) = match semiring {
            SemiringTag::Boolean => (one, zero),
            SemiringTag::RationalProbability => (half, zero),
        };
        let same = vec![hi.clone(), lo.clone(), lo.clone(), hi.clone()];
        let diff = vec![lo.clone(), hi.clone(), hi, lo];
        EmpiricalModel::from_rows(cycle(), semiring, vec![same.clone(), same.clone(), same, diff])
            .unwrap()
    }

    fn names(m: &EmpiricalModel, order: &[&str]) -> Vec<usize> {
        order
            .iter()
            .map(|n| m.scenario().measurement_index(n).unwrap())
            .collect()
    }

    /// Independent oracle: filter all assignments against the supports.
    fn brute_force_globals(m: &EmpiricalModel) -> Vec<GlobalSection> {
        let s = m.scenario();
        s.global_assignments()
            .into_iter()
            .filter(|g| {
                s.maximal_contexts()
                    .iter()
                    .all(|c| !m.value(&g.restrict(c).unwrap()).unwrap().is_zero())
            })
            .collect()
    }

    #[test]
    fn fr_global_sections() {
        let m = fr();
        let g = global_sections(&m);
        assert_eq!(g, brute_force_globals(&m));
        assert_eq!(g.len(), 5);
        let uw = m.scenario().context(&["U", "W"]).unwrap();
        assert!(g.iter().all(|x| x.restrict(&uw).unwrap().values() != [1, 1]));
        assert_eq!(global_sections_with_jobs(&m, 2), g);
    }

    #[test]
    fn pr_has_no_global_sections() {
        assert!(global_sections(&pr(SemiringTag::Boolean)).is_empty());
    }

    #[test]
    fn extendability() {
        let m = fr();
        let s = m.scenario();
        let uw = s.context(&["U", "W"]).unwrap();
        let ab = s.context(&["A", "B"]).unwrap();
        assert!(!extendable(&m, &uw, &s.parse_section(&uw, "1,1").unwrap()).unwrap());
        assert!(extendable(&m, &ab, &s.parse_section(&ab, "0,0").unwrap()).unwrap());
        assert!(matches!(
            extendable(&m, &ab, &s.parse_section(&ab, "0,1").unwrap()),
            Err(ContextualityError::SectionNotInSupport(_))
        ));
    }

    #[test]
    fn classify_levels() {
        let report = classify(&fr()).unwrap();
        assert_eq!(report.level, HierarchyLevel::LogicalContextual);
        assert_eq!(report.non_extendable.len(), 1);
        let report = classify(&pr(SemiringTag::Boolean)).unwrap();
        assert_eq!(report.level, HierarchyLevel::StronglyContextual);
        assert_eq!(report.non_extendable.len(), 8);
        assert!(report.noncontextual_fraction.is_none());
    }

    #[test]
    fn disturbing_model_is_rejected() {
        let r = rational;
        let m = EmpiricalModel::from_rows(
            cycle(),
            SemiringTag::RationalProbability,
            vec![
                vec![r(1, 3), r(0, 1), r(1, 3), r(1, 3)],
                vec![r(1, 6), r(1, 6), r(2, 3), r(0, 1)],
                vec![r(2, 3), r(1, 6), r(0, 1), r(1, 6)],
                vec![r(1, 2), r(1, 3), r(1, 12), r(1, 12)],
            ],
        )
        .unwrap();
        assert!(matches!(classify(&m), Err(ContextualityError::DisturbingModel(_))));
        assert!(matches!(
            noncontextual_fraction(&m),
            Err(ContextualityError::DisturbingModel(_))
        ));
    }

    #[test]
    fn fraction_of_fr_is_certified() {
        let ncf = noncontextual_fraction(&fr()).unwrap();
        assert!(ncf.solution.verify(&ncf.lp));
        // contextual fraction of this Hardy-type model is twice the Hardy probability 1/12
        assert_eq!(ncf.value, rational(5, 6));
    }

    #[test]
    fn fraction_of_pr_is_zero() {
        let m = pr(SemiringTag::RationalProbability);
        let d = noncontextual_decomposition(&m).unwrap();
        assert_eq!(d.fraction, rational_int(0));
        assert!(d.noncontextual.is_none());
        assert_eq!(d.residual.as_ref().unwrap(), &m);
    }

    #[test]
    fn decomposition_of_fr() {
        let m = fr();
        let d = noncontextual_decomposition(&m).unwrap();
        assert_eq!(&Rational::one() - &d.fraction, rational(1, 6));
        assert_eq!(d.reconstruct(m.scenario()), m.rows());
        let residual = d.residual.as_ref().unwrap();
        assert!(global_sections(residual).is_empty());
    }

    #[test]
    fn product_model_fraction_is_one() {
        let r = rational;
        // A, B independent with p(A=0)=1/3, p(B=0)=1/4
        let s = MeasurementScenario::binary(["A", "B"], [["A", "B"]]).unwrap();
        let m = EmpiricalModel::from_rows(
            s,
            SemiringTag::RationalProbability,
            vec![vec![r(1, 12), r(3, 12), r(2, 12), r(6, 12)]],
        )
        .unwrap();
        let d = noncontextual_decomposition(&m).unwrap();
        assert_eq!(d.fraction, rational_int(1));
        assert!(d.residual.is_none());
        assert_eq!(classify(&m).unwrap().level, HierarchyLevel::Noncontextual);
    }

    #[test]
    fn fr_liar_cycle() {
        let m = fr();
        let order = names(&m, &["U", "B", "A", "W"]);
        let chain = liar_cycle_witness(&m, &order).unwrap().unwrap();
        assert_eq!(chain.start_value, 1);
        let forced: Vec<usize> = chain.steps.iter().map(|s| s.forced_value).collect();
        assert_eq!(forced, vec![1, 1, 0]);
        let s = m.scenario();
        let labels: Vec<String> = chain.contradicting.iter().map(|x| s.section_label_full(x)).collect();
        assert_eq!(labels, vec!["U=1,W=1"]);
        assert_eq!(s.section_label_full(&chain.steps[0].zero_cells[0]), "U=1,B=0");

        let order = names(&m, &["A", "B", "U", "W"]);
        assert!(liar_cycle_witness(&m, &order).unwrap().is_none());
    }

    #[test]
    fn pr_liar_cycle_every_start() {
        let m = pr(SemiringTag::Boolean);
        let order = names(&m, &["U", "B", "A", "W"]);
        assert_eq!(liar_cycle_chains(&m, &order).unwrap().len(), 2);
    }

    #[test]
    fn deterministic_cycle_has_no_liar() {
        let one = rational_int(1);
        let zero = rational_int(0);
        let row = vec![one, zero.clone(), zero.clone(), zero];
        let m = EmpiricalModel::from_rows(cycle(), SemiringTag::Boolean, vec![row; 4]).unwrap();
        let order = names(&m, &["U", "B", "A", "W"]);
        assert!(liar_cycle_chains(&m, &order).unwrap().is_empty());
        assert_eq!(classify(&m).unwrap().level, HierarchyLevel::Noncontextual);
    }

    #[test]
    fn bad_orders() {
        let m = fr();
        let order = names(&m, &["U", "A", "B", "W"]);
        assert!(matches!(liar_cycle_witness(&m, &order), Err(ContextualityError::NotACycle(_))));
        let order = names(&m, &["U", "B", "U"]);
        assert!(matches!(liar_cycle_witness(&m, &order), Err(ContextualityError::NotACycle(_))));
    }
}
