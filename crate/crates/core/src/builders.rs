//! Models built from first principles: the two-qubit Hardy-type state measured
//! by four agents, the PR-box cycle, and the single-friend Wigner variants.
//!
//! Quantum probabilities are computed in floating point and snapped onto
//! rationals before they enter a model.

use num_complex::Complex;
use num_traits::{Float, One, Zero};
use thiserror::Error;

use crate::empirical::{EmpiricalModel, ModelError, SemiringTag};
use crate::scalar::{rational_to_f64, snap, Rational};
use crate::scenario::{Context, MeasurementScenario, ScenarioError, Section};

/// Absolute tolerance of the rational snap.
pub const SNAP_TOLERANCE: f64 = 1e-9;
/// Largest denominator accepted by the rational snap.
pub const SNAP_MAX_DENOMINATOR: u64 = 1_000_000;
/// Tolerance on the norm of a state vector.
pub const NORM_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BuildError {
    #[error("no rational within {SNAP_TOLERANCE} of {value}")]
    SnapFailure { value: f64 },
    #[error("amplitudes are not normalized (squared norm {norm})")]
    NotNormalized { norm: f64 },
    #[error("context {0} does not pair one measurement on each qubit")]
    UnsupportedContext(String),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Single-qubit measurement basis. Outcome 0 is `|0⟩` or `|+⟩`, outcome 1 is
/// `|1⟩` or `|−⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    Z,
    X,
}

impl Basis {
    /// Components of the eigenvector for `outcome`.
    pub fn vector<F: Float>(self, outcome: usize) -> [Complex<F>; 2] {
        let one = Complex::new(F::one(), F::zero());
        let zero = Complex::new(F::zero(), F::zero());
        match (self, outcome) {
            (Basis::Z, 0) => [one, zero],
            (Basis::Z, _) => [zero, one],
            (Basis::X, o) => {
                let h = F::one() / (F::one() + F::one()).sqrt();
                let sign = if o == 0 { h } else { -h };
                [Complex::new(h, F::zero()), Complex::new(sign, F::zero())]
            }
        }
    }
}

/// Which qubit a measurement acts on, and in which basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ObservableBasis {
    pub qubit: usize,
    pub basis: Basis,
}

/// Agents of the four-party scenario in measurement order.
pub const FR_AGENTS: [&str; 4] = ["A", "U", "B", "W"];

/// `A = Z₁`, `U = X₁`, `B = Z₂`, `W = X₂`, indexed like [`FR_AGENTS`].
pub const FR_OBSERVABLES: [ObservableBasis; 4] = [
    ObservableBasis { qubit: 0, basis: Basis::Z },
    ObservableBasis { qubit: 0, basis: Basis::X },
    ObservableBasis { qubit: 1, basis: Basis::Z },
    ObservableBasis { qubit: 1, basis: Basis::X },
];

/// The four-cycle `A–B–U–W–A` of jointly measurable pairs.
pub fn fr_scenario() -> MeasurementScenario {
    MeasurementScenario::binary(
        FR_AGENTS,
        [["A", "B"], ["A", "W"], ["U", "B"], ["U", "W"]],
    )
    .expect("fixed scenario is valid")
}

/// Two-qubit pure state over `|00⟩, |01⟩, |10⟩, |11⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<F> {
    amplitudes: [Complex<F>; 4],
}

impl<F: Float> StateVector<F> {
    pub fn new(amplitudes: [Complex<F>; 4]) -> Result<Self, BuildError> {
        let state = StateVector { amplitudes };
        let norm = state.norm_sqr().to_f64().unwrap_or(f64::NAN);
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(BuildError::NotNormalized { norm });
        }
        Ok(state)
    }

    pub fn from_real(amplitudes: [F; 4]) -> Result<Self, BuildError> {
        Self::new(amplitudes.map(|a| Complex::new(a, F::zero())))
    }

    pub fn amplitudes(&self) -> &[Complex<F>; 4] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> F {
        self.amplitudes
            .iter()
            .fold(F::zero(), |acc, a| acc + a.norm_sqr())
    }

    /// Float outcome probabilities `[p00, p01, p10, p11]` for a product
    /// measurement, `first` on qubit 1 and `second` on qubit 2.
    pub fn product_probabilities(&self, first: Basis, second: Basis) -> [F; 4] {
        let mut out = [F::zero(); 4];
        for a in 0..2 {
            for b in 0..2 {
                let u = first.vector::<F>(a);
                let v = second.vector::<F>(b);
                let mut overlap = Complex::new(F::zero(), F::zero());
                for i in 0..2 {
                    for j in 0..2 {
                        overlap = overlap + u[i].conj() * v[j].conj() * self.amplitudes[2 * i + j];
                    }
                }
                out[2 * a + b] = overlap.norm_sqr();
            }
        }
        out
    }
}

/// `(|00⟩ + |10⟩ + |11⟩)/√3`, i.e. `√(1/3)|00⟩ + √(2/3)|1⟩|+⟩`.
pub fn fr_state() -> StateVector<f64> {
    let a = 1.0 / 3.0f64.sqrt();
    StateVector::from_real([a, 0.0, a, a]).expect("unit norm")
}

fn snap_value<F: Float>(value: F) -> Result<Rational, BuildError> {
    snap(value, SNAP_TOLERANCE, SNAP_MAX_DENOMINATOR).ok_or_else(|| BuildError::SnapFailure {
        value: value.to_f64().unwrap_or(f64::NAN),
    })
}

/// Snaps a float row and insists the rationals sum to exactly one.
fn snap_row<F: Float>(row: &[F]) -> Result<Vec<Rational>, BuildError> {
    let snapped = row.iter().map(|v| snap_value(*v)).collect::<Result<Vec<_>, _>>()?;
    let sum: Rational = snapped.iter().sum();
    if !sum.is_one() {
        return Err(BuildError::SnapFailure {
            value: rational_to_f64(&sum),
        });
    }
    Ok(snapped)
}

/// Born-rule table of `state` on a two-measurement context of
/// [`fr_scenario`], in section order of the context.
pub fn born_table<F: Float>(
    state: &StateVector<F>,
    scenario: &MeasurementScenario,
    context: &Context,
) -> Result<Vec<(Section, Rational)>, BuildError> {
    let label = || scenario.context_label(context);
    let members = context.members();
    if members.len() != 2 || members.iter().any(|m| *m >= FR_OBSERVABLES.len()) {
        return Err(BuildError::UnsupportedContext(label()));
    }
    let (x, y) = (FR_OBSERVABLES[members[0]], FR_OBSERVABLES[members[1]]);
    if x.qubit == y.qubit {
        return Err(BuildError::UnsupportedContext(label()));
    }
    let swapped = x.qubit == 1;
    let (first, second) = if swapped { (y, x) } else { (x, y) };
    let probs = state.product_probabilities(first.basis, second.basis);
    // reorder to the context's member order
    let row: Vec<F> = (0..4)
        .map(|k| {
            let (a, b) = (k / 2, k % 2);
            if swapped {
                probs[2 * b + a]
            } else {
                probs[k]
            }
        })
        .collect();
    let snapped = snap_row(&row)?;
    Ok(scenario.assignments(context).into_iter().zip(snapped).collect())
}

/// Rational model on [`fr_scenario`] from the Born rule applied to
/// [`fr_state`] on every context.
pub fn build_fr_model() -> Result<EmpiricalModel, BuildError> {
    let scenario = fr_scenario();
    let state = fr_state();
    let rows = scenario
        .maximal_contexts()
        .iter()
        .map(|c| {
            born_table(&state, &scenario, c).map(|t| t.into_iter().map(|(_, v)| v).collect())
        })
        .collect::<Result<Vec<Vec<Rational>>, _>>()?;
    Ok(EmpiricalModel::from_rows(
        scenario,
        SemiringTag::RationalProbability,
        rows,
    )?)
}

/// Input bits of the PR box: `A` and `B` use input 0, `U` and `W` input 1.
pub const PR_SETTINGS: [u8; 4] = [0, 1, 0, 1];

/// Whether outcomes `(a, b)` of agents `i`, `j` satisfy `a ⊕ b = xᵢ·xⱼ`.
pub fn pr_allows(i: usize, j: usize, a: usize, b: usize) -> bool {
    ((a ^ b) as u8) == (PR_SETTINGS[i] & PR_SETTINGS[j])
}

fn pr_rows(weight: Rational) -> Vec<Vec<Rational>> {
    let scenario = fr_scenario();
    scenario
        .maximal_contexts()
        .iter()
        .map(|c| {
            let (i, j) = (c.members()[0], c.members()[1]);
            scenario
                .assignments(c)
                .iter()
                .map(|s| {
                    let v = s.values();
                    if pr_allows(i, j, v[0], v[1]) {
                        weight.clone()
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        })
        .collect()
}

/// Possibilistic PR-box model: three contexts perfectly correlated, `U–W`
/// perfectly anticorrelated.
pub fn build_pr_model() -> EmpiricalModel {
    EmpiricalModel::from_rows(fr_scenario(), SemiringTag::Boolean, pr_rows(Rational::one()))
        .expect("PR rows are boolean and normalized")
}

/// The PR box with uniform probabilities on each support.
pub fn build_pr_box() -> EmpiricalModel {
    let half = Rational::new(1.into(), 2.into());
    EmpiricalModel::from_rows(fr_scenario(), SemiringTag::RationalProbability, pr_rows(half))
        .expect("PR rows are normalized")
}

/// Single-friend Wigner models on measurements `A` (the friend) and `W`
/// (Wigner) for the state `α|0⟩ + β|1⟩`.
///
/// With `compatible` the two measure in the same basis and share one context
/// with perfectly correlated outcomes; otherwise `W` measures in the `±`
/// basis and the two contexts `{A}`, `{W}` are disjoint.
pub fn build_wigner_model<F: Float>(
    alpha: F,
    beta: F,
    compatible: bool,
) -> Result<EmpiricalModel, BuildError> {
    let norm = (alpha * alpha + beta * beta).to_f64().unwrap_or(f64::NAN);
    if norm.is_nan() || (norm - 1.0).abs() > SNAP_TOLERANCE {
        return Err(BuildError::NotNormalized { norm });
    }
    let (a2, b2) = (alpha * alpha, beta * beta);
    if compatible {
        let scenario = MeasurementScenario::binary(["A", "W"], [["A", "W"]])?;
        let row = snap_row(&[a2, F::zero(), F::zero(), b2])?;
        Ok(EmpiricalModel::from_rows(
            scenario,
            SemiringTag::RationalProbability,
            vec![row],
        )?)
    } else {
        let two = F::one() + F::one();
        let plus = (alpha + beta) * (alpha + beta) / two;
        let minus = (alpha - beta) * (alpha - beta) / two;
        let scenario = MeasurementScenario::binary(["A", "W"], [["A"], ["W"]])?;
        let rows = vec![snap_row(&[a2, b2])?, snap_row(&[plus, minus])?];
        Ok(EmpiricalModel::from_rows(
            scenario,
            SemiringTag::RationalProbability,
            rows,
        )?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational;

    #[test]
    fn state_amplitudes() {
        let s = fr_state();
        assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
        assert_eq!(s.amplitudes()[1], Complex::new(0.0, 0.0));
        let expanded = (2.0f64 / 3.0).sqrt() / 2.0f64.sqrt();
        assert!((s.amplitudes()[2].re - expanded).abs() < 1e-15);
    }

    #[test]
    fn rejects_unnormalized_state() {
        assert!(matches!(
            StateVector::from_real([1.0, 1.0, 0.0, 0.0]),
            Err(BuildError::NotNormalized { .. })
        ));
    }

    #[test]
    fn float_rows_sum_to_one() {
        let s = fr_state();
        for a in [Basis::Z, Basis::X] {
            for b in [Basis::Z, Basis::X] {
                let sum: f64 = s.product_probabilities(a, b).iter().sum();
                assert!((sum - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn single_tables() {
        let sc = fr_scenario();
        let s = fr_state();
        let uw = born_table(&s, &sc, &sc.context(&["U", "W"]).unwrap()).unwrap();
        let vals: Vec<Rational> = uw.into_iter().map(|(_, v)| v).collect();
        assert_eq!(vals, vec![rational(3, 4), rational(1, 12), rational(1, 12), rational(1, 12)]);
        let aw = born_table(&s, &sc, &sc.context(&["A", "W"]).unwrap()).unwrap();
        let vals: Vec<Rational> = aw.into_iter().map(|(_, v)| v).collect();
        assert_eq!(vals, vec![rational(1, 6), rational(1, 6), rational(2, 3), rational(0, 1)]);
    }

    #[test]
    fn same_qubit_pair_is_rejected() {
        let sc = MeasurementScenario::binary(FR_AGENTS, [["A", "U", "B", "W"]]).unwrap();
        let au = Context::new(vec![0, 1]);
        assert!(matches!(
            born_table(&fr_state(), &sc, &au),
            Err(BuildError::UnsupportedContext(_))
        ));
    }

    #[test]
    fn wigner_variants() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let m = build_wigner_model(h, h, false).unwrap();
        assert_eq!(m.rows()[1], vec![rational(1, 1), rational(0, 1)]);
        let m = build_wigner_model(1.0f64, 0.0, true).unwrap();
        assert_eq!(m.rows()[0][0], rational(1, 1));
        assert!(matches!(
            build_wigner_model(0.5f64, 0.5, true),
            Err(BuildError::NotNormalized { .. })
        ));
        let m = build_wigner_model(0.6f64, 0.8, true).unwrap();
        assert_eq!(m.rows()[0][3], rational(16, 25));
        let m = build_wigner_model(0.0f32, 1.0f32, false).unwrap();
        assert_eq!(m.rows()[1], vec![rational(1, 2), rational(1, 2)]);
    }

    #[test]
    fn wigner_snap_failure() {
        // b² ≈ π·10⁻⁷ lies between 0 and 1/999999, far from both
        let b = (std::f64::consts::PI * 1e-7).sqrt();
        let a = (1.0 - b * b).sqrt();
        assert!(matches!(
            build_wigner_model(a, b, true),
            Err(BuildError::SnapFailure { .. })
        ));
    }

    #[test]
    fn pr_support() {
        let m = build_pr_model();
        let sc = m.scenario();
        let uw = sc.context(&["U", "W"]).unwrap();
        let labels: Vec<String> = m.support(&uw).unwrap().iter().map(|s| sc.section_label(s)).collect();
        assert_eq!(labels, vec!["0,1", "1,0"]);
        assert!(m.check_no_disturbance().holds);
        assert!(build_pr_box().check_no_disturbance().holds);
    }
}
