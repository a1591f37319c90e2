//! Semiring-valued empirical models over a measurement scenario.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::scalar::Rational;
use crate::scenario::{Context, MeasurementScenario, Section};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("table keyed by {0}, which is not a maximal context")]
    UnknownContext(String),
    #[error("no table for maximal context {0}")]
    MissingContext(String),
    #[error("section {section} does not belong to context {context}")]
    UnknownSection { context: String, section: String },
    #[error("negative value {value} at {context}:{section}")]
    NegativeValue {
        context: String,
        section: String,
        value: String,
    },
    #[error("boolean model has value {value} at {context}:{section}")]
    NonBooleanValue {
        context: String,
        section: String,
        value: String,
    },
    #[error("context {context} sums to {sum}, expected 1")]
    NormalizationError { context: String, sum: String },
    #[error("{sub} is not a subcontext of {context}")]
    NotASubcontext { sub: String, context: String },
    #[error("operation needs a {expected} model")]
    WrongSemiring { expected: SemiringTag },
    #[error("expected {expected} rows, got {got}")]
    RowShape { expected: usize, got: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SemiringTag {
    Boolean,
    RationalProbability,
}

impl fmt::Display for SemiringTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SemiringTag::Boolean => f.write_str("boolean"),
            SemiringTag::RationalProbability => f.write_str("rational"),
        }
    }
}

/// Commutative semiring of table values.
pub trait Semiring: Clone + PartialEq {
    fn additive_identity() -> Self;
    fn multiplicative_identity() -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
}

impl Semiring for bool {
    fn additive_identity() -> Self {
        false
    }
    fn multiplicative_identity() -> Self {
        true
    }
    fn plus(&self, other: &Self) -> Self {
        *self || *other
    }
    fn times(&self, other: &Self) -> Self {
        *self && *other
    }
}

impl Semiring for Rational {
    fn additive_identity() -> Self {
        Zero::zero()
    }
    fn multiplicative_identity() -> Self {
        One::one()
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
}

fn semiring_sum<'a, S: Semiring + 'a>(values: impl IntoIterator<Item = &'a S>) -> S {
    values.into_iter().fold(S::additive_identity(), |acc, v| acc.plus(v))
}

/// Marginalizes a dense table over `context` onto `sub`, summing in `S`.
fn marginalize<S: Semiring>(
    scenario: &MeasurementScenario,
    context: &Context,
    row: &[S],
    sub: &Context,
) -> Vec<S> {
    let mut out = vec![S::additive_identity(); scenario.section_count(sub)];
    for (sec, value) in scenario.assignments(context).iter().zip(row) {
        let rank = scenario.section_rank(&sec.restrict(sub).expect("sub is a subcontext"));
        out[rank] = out[rank].plus(value);
    }
    out
}

/// An empirical model: one normalized semiring distribution per maximal
/// context. Values are stored as rationals; boolean models hold 0 and 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmpiricalModel {
    scenario: MeasurementScenario,
    semiring: SemiringTag,
    rows: Vec<Vec<Rational>>,
}

/// One overlap between two maximal contexts and the two marginals on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OverlapCheck {
    pub first: Context,
    pub second: Context,
    pub overlap: Context,
    pub first_marginal: Vec<(Section, Rational)>,
    pub second_marginal: Vec<(Section, Rational)>,
    pub agrees: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NoDisturbanceReport {
    pub holds: bool,
    pub checks: Vec<OverlapCheck>,
}

impl NoDisturbanceReport {
    pub fn violations(&self) -> impl Iterator<Item = &OverlapCheck> {
        self.checks.iter().filter(|c| !c.agrees)
    }
}

impl EmpiricalModel {
    pub fn new(
        scenario: MeasurementScenario,
        semiring: SemiringTag,
        tables: BTreeMap<Context, BTreeMap<Section, Rational>>,
    ) -> Result<Self, ModelError> {
        let mut rows: Vec<Option<Vec<Rational>>> = vec![None; scenario.maximal_contexts().len()];
        for (ctx, table) in tables {
            let idx = scenario
                .maximal_context_index(&ctx)
                .ok_or_else(|| ModelError::UnknownContext(scenario.context_label(&ctx)))?;
            let mut row = vec![Rational::zero(); scenario.section_count(&ctx)];
            for (sec, value) in table {
                if sec.context() != &ctx {
                    return Err(ModelError::UnknownSection {
                        context: scenario.context_label(&ctx),
                        section: scenario.section_label_full(&sec),
                    });
                }
                row[scenario.section_rank(&sec)] = value;
            }
            rows[idx] = Some(row);
        }
        let rows = rows
            .into_iter()
            .enumerate()
            .map(|(i, r)| {
                r.ok_or_else(|| {
                    ModelError::MissingContext(scenario.context_label(&scenario.maximal_contexts()[i]))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_rows(scenario, semiring, rows)
    }

    /// Builds a model from dense rows: one per maximal context (canonical
    /// order), each listing values in lexicographic section order.
    pub fn from_rows(
        scenario: MeasurementScenario,
        semiring: SemiringTag,
        rows: Vec<Vec<Rational>>,
    ) -> Result<Self, ModelError> {
        if rows.len() != scenario.maximal_contexts().len() {
            return Err(ModelError::RowShape {
                expected: scenario.maximal_contexts().len(),
                got: rows.len(),
            });
        }
        for (ctx, row) in scenario.maximal_contexts().iter().zip(&rows) {
            let expected = scenario.section_count(ctx);
            if row.len() != expected {
                return Err(ModelError::RowShape {
                    expected,
                    got: row.len(),
                });
            }
            let sections = scenario.assignments(ctx);
            for (sec, value) in sections.iter().zip(row) {
                if value.is_negative() {
                    return Err(ModelError::NegativeValue {
                        context: scenario.context_label(ctx),
                        section: scenario.section_label(sec),
                        value: value.to_string(),
                    });
                }
                if semiring == SemiringTag::Boolean && !(value.is_zero() || value.is_one()) {
                    return Err(ModelError::NonBooleanValue {
                        context: scenario.context_label(ctx),
                        section: scenario.section_label(sec),
                        value: value.to_string(),
                    });
                }
            }
            let normalized = match semiring {
                SemiringTag::RationalProbability => {
                    semiring_sum::<Rational>(row.iter()).is_one()
                }
                SemiringTag::Boolean => row.iter().any(|v| !v.is_zero()),
            };
            if !normalized {
                let sum: Rational = row.iter().sum();
                return Err(ModelError::NormalizationError {
                    context: scenario.context_label(ctx),
                    sum: sum.to_string(),
                });
            }
        }
        Ok(EmpiricalModel {
            scenario,
            semiring,
            rows,
        })
    }

    pub fn scenario(&self) -> &MeasurementScenario {
        &self.scenario
    }

    pub fn semiring(&self) -> SemiringTag {
        self.semiring
    }

    /// Dense rows in canonical context order.
    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    fn context_index(&self, context: &Context) -> Result<usize, ModelError> {
        self.scenario
            .maximal_context_index(context)
            .ok_or_else(|| ModelError::UnknownContext(self.scenario.context_label(context)))
    }

    /// Value of a section of a maximal context.
    pub fn value(&self, section: &Section) -> Result<&Rational, ModelError> {
        let idx = self.context_index(section.context())?;
        Ok(&self.rows[idx][self.scenario.section_rank(section)])
    }

    pub fn table(&self, context: &Context) -> Result<Vec<(Section, Rational)>, ModelError> {
        let idx = self.context_index(context)?;
        Ok(self
            .scenario
            .assignments(context)
            .into_iter()
            .zip(self.rows[idx].iter().cloned())
            .collect())
    }

    /// Semiring marginal of the table over a maximal context onto a
    /// subcontext; boolean models sum with OR.
    pub fn marginal(
        &self,
        context: &Context,
        sub: &Context,
    ) -> Result<Vec<(Section, Rational)>, ModelError> {
        let idx = self.context_index(context)?;
        if sub.is_empty() || !sub.is_subset(context) {
            return Err(ModelError::NotASubcontext {
                sub: self.scenario.context_label(sub),
                context: self.scenario.context_label(context),
            });
        }
        let values: Vec<Rational> = match self.semiring {
            SemiringTag::RationalProbability => {
                marginalize(&self.scenario, context, &self.rows[idx], sub)
            }
            SemiringTag::Boolean => {
                let row: Vec<bool> = self.rows[idx].iter().map(|v| !v.is_zero()).collect();
                marginalize(&self.scenario, context, &row, sub)
                    .into_iter()
                    .map(|b| if b { Rational::one() } else { Rational::zero() })
                    .collect()
            }
        };
        Ok(self.scenario.assignments(sub).into_iter().zip(values).collect())
    }

    /// Compares marginals on every nonempty overlap of two maximal contexts.
    pub fn check_no_disturbance(&self) -> NoDisturbanceReport {
        let ctxs = self.scenario.maximal_contexts();
        let mut checks = Vec::new();
        for (i, first) in ctxs.iter().enumerate() {
            for second in &ctxs[i + 1..] {
                let overlap = first.intersection(second);
                if overlap.is_empty() {
                    continue;
                }
                let a = self.marginal(first, &overlap).expect("overlap is a subcontext");
                let b = self.marginal(second, &overlap).expect("overlap is a subcontext");
                let agrees = a == b;
                checks.push(OverlapCheck {
                    first: first.clone(),
                    second: second.clone(),
                    overlap,
                    first_marginal: a,
                    second_marginal: b,
                    agrees,
                });
            }
        }
        NoDisturbanceReport {
            holds: checks.iter().all(|c| c.agrees),
            checks,
        }
    }

    pub fn is_non_disturbing(&self) -> bool {
        self.check_no_disturbance().holds
    }

    /// The boolean model with value 1 exactly on the nonzero cells. Boolean
    /// models map to themselves.
    pub fn possibilistic_collapse(&self) -> EmpiricalModel {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|v| if v.is_zero() { Rational::zero() } else { Rational::one() })
                    .collect()
            })
            .collect();
        EmpiricalModel {
            scenario: self.scenario.clone(),
            semiring: SemiringTag::Boolean,
            rows,
        }
    }

    /// Sections of a maximal context with nonzero value.
    pub fn support(&self, context: &Context) -> Result<Vec<Section>, ModelError> {
        let idx = self.context_index(context)?;
        Ok(self
            .scenario
            .assignments(context)
            .into_iter()
            .zip(&self.rows[idx])
            .filter(|(_, v)| !v.is_zero())
            .map(|(s, _)| s)
            .collect())
    }

    /// Per maximal context (canonical order), the support as a rank mask.
    pub fn support_masks(&self) -> Vec<Vec<bool>> {
        self.rows
            .iter()
            .map(|row| row.iter().map(|v| !v.is_zero()).collect())
            .collect()
    }

    /// Every supported (maximal context, section) pair in canonical order.
    pub fn supported_events(&self) -> Vec<(Context, Section)> {
        self.scenario
            .maximal_contexts()
            .iter()
            .flat_map(|c| {
                self.support(c)
                    .expect("maximal context")
                    .into_iter()
                    .map(move |s| (c.clone(), s))
            })
            .collect()
    }

    pub fn require_rational(&self) -> Result<(), ModelError> {
        if self.semiring == SemiringTag::RationalProbability {
            Ok(())
        } else {
            Err(ModelError::WrongSemiring {
                expected: SemiringTag::RationalProbability,
            })
        }
    }

    /// Reads the model's values as a rational table, keeping boolean 0/1.
    pub fn as_rational_lifting(&self) -> Vec<Vec<Rational>> {
        self.rows.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rational, rational_int};

    fn fr_rows() -> (MeasurementScenario, Vec<Vec<Rational>>) {
        let s = MeasurementScenario::binary(
            ["A", "U", "B", "W"],
            [["A", "B"], ["A", "W"], ["U", "B"], ["U", "W"]],
        )
        .unwrap();
        let r = |n, d| rational(n, d);
        let rows = vec![
            vec![r(1, 3), r(0, 1), r(1, 3), r(1, 3)],
            vec![r(1, 6), r(1, 6), r(2, 3), r(0, 1)],
            vec![r(2, 3), r(1, 6), r(0, 1), r(1, 6)],
            vec![r(3, 4), r(1, 12), r(1, 12), r(1, 12)],
        ];
        (s, rows)
    }

    fn fr() -> EmpiricalModel {
        let (s, rows) = fr_rows();
        EmpiricalModel::from_rows(s, SemiringTag::RationalProbability, rows).unwrap()
    }

    fn pr() -> EmpiricalModel {
        let (s, _) = fr_rows();
        let one = rational_int(1);
        let zero = rational_int(0);
        let same = vec![one.clone(), zero.clone(), zero.clone(), one.clone()];
        let diff = vec![zero.clone(), one.clone(), one, zero];
        EmpiricalModel::from_rows(
            s,
            SemiringTag::Boolean,
            vec![same.clone(), same.clone(), same, diff],
        )
        .unwrap()
    }

    #[test]
    fn normalization_error() {
        let (s, mut rows) = fr_rows();
        rows[0][0] = rational(1, 2);
        match EmpiricalModel::from_rows(s, SemiringTag::RationalProbability, rows) {
            Err(ModelError::NormalizationError { context, sum }) => {
                assert_eq!(context, "A,B");
                assert_eq!(sum, "7/6");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn negative_and_non_boolean_values() {
        let (s, mut rows) = fr_rows();
        rows[3] = vec![rational(1, 1), rational(1, 4), rational(-1, 4), rational(0, 1)];
        assert!(matches!(
            EmpiricalModel::from_rows(s.clone(), SemiringTag::RationalProbability, rows),
            Err(ModelError::NegativeValue { .. })
        ));
        let (_, rows) = fr_rows();
        assert!(matches!(
            EmpiricalModel::from_rows(s, SemiringTag::Boolean, rows),
            Err(ModelError::NonBooleanValue { .. })
        ));
    }

    #[test]
    fn keyed_tables_fill_missing_with_zero() {
        let (s, rows) = fr_rows();
        let mut tables = BTreeMap::new();
        for (ctx, row) in s.maximal_contexts().iter().zip(&rows) {
            let t: BTreeMap<Section, Rational> = s
                .assignments(ctx)
                .into_iter()
                .zip(row.iter().cloned())
                .filter(|(_, v)| !v.is_zero())
                .collect();
            tables.insert(ctx.clone(), t);
        }
        let m = EmpiricalModel::new(s.clone(), SemiringTag::RationalProbability, tables.clone()).unwrap();
        assert_eq!(m, fr());

        let uw = s.context(&["U", "W"]).unwrap();
        tables.remove(&uw);
        assert!(matches!(
            EmpiricalModel::new(s.clone(), SemiringTag::RationalProbability, tables.clone()),
            Err(ModelError::MissingContext(_))
        ));
        let ub = s.context(&["U", "B"]).unwrap();
        let a = s.context(&["A"]).unwrap();
        let mut bad = BTreeMap::new();
        bad.insert(s.parse_section(&ub, "0,0").unwrap(), rational_int(1));
        tables.insert(a, bad);
        assert!(matches!(
            EmpiricalModel::new(s, SemiringTag::RationalProbability, tables),
            Err(ModelError::UnknownContext(_))
        ));
    }

    #[test]
    fn marginals() {
        let m = fr();
        let s = m.scenario();
        let ab = s.context(&["A", "B"]).unwrap();
        let a = s.context(&["A"]).unwrap();
        let marg: Vec<Rational> = m.marginal(&ab, &a).unwrap().into_iter().map(|(_, v)| v).collect();
        assert_eq!(marg, vec![rational(1, 3), rational(2, 3)]);
        let full: Vec<(Section, Rational)> = m.marginal(&ab, &ab).unwrap();
        assert_eq!(full, m.table(&ab).unwrap());
        let w = s.context(&["W"]).unwrap();
        assert!(matches!(m.marginal(&ab, &w), Err(ModelError::NotASubcontext { .. })));

        let p = pr();
        let marg: Vec<Rational> = p.marginal(&ab, &a).unwrap().into_iter().map(|(_, v)| v).collect();
        assert_eq!(marg, vec![rational_int(1), rational_int(1)]);
    }

    #[test]
    fn no_disturbance() {
        let report = fr().check_no_disturbance();
        assert!(report.holds);
        assert_eq!(report.checks.len(), 4);

        let s = MeasurementScenario::binary(["A", "W"], [["A"], ["W"]]).unwrap();
        let m = EmpiricalModel::from_rows(
            s,
            SemiringTag::RationalProbability,
            vec![vec![rational(1, 2), rational(1, 2)], vec![rational_int(1), rational_int(0)]],
        )
        .unwrap();
        let report = m.check_no_disturbance();
        assert!(report.holds && report.checks.is_empty());

        let (s, mut rows) = fr_rows();
        rows[3][0] = rational(1, 2);
        rows[3][1] = rational(1, 3);
        let m = EmpiricalModel::from_rows(s, SemiringTag::RationalProbability, rows).unwrap();
        let report = m.check_no_disturbance();
        assert!(!report.holds);
        let bad: Vec<String> = report
            .violations()
            .map(|c| m.scenario().context_label(&c.overlap))
            .collect();
        assert_eq!(bad, vec!["W"]);
    }

    #[test]
    fn collapse_and_support() {
        let m = fr();
        let c = m.possibilistic_collapse();
        assert_eq!(c.semiring(), SemiringTag::Boolean);
        let zeros = c.rows().iter().flatten().filter(|v| v.is_zero()).count();
        assert_eq!(zeros, 3);
        let s = m.scenario();
        let ab = s.context(&["A", "B"]).unwrap();
        let labels: Vec<String> = m.support(&ab).unwrap().iter().map(|x| s.section_label(x)).collect();
        assert_eq!(labels, vec!["0,0", "1,0", "1,1"]);

        let p = pr();
        assert_eq!(p.possibilistic_collapse(), p);
        let uw = s.context(&["U", "W"]).unwrap();
        let labels: Vec<String> = p.support(&uw).unwrap().iter().map(|x| s.section_label(x)).collect();
        assert_eq!(labels, vec!["0,1", "1,0"]);
    }
}
