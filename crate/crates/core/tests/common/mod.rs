#![allow(dead_code)]

use num_traits::Zero;
use proptest::prelude::*;
use sheafmodal::empirical::{EmpiricalModel, SemiringTag};
use sheafmodal::scalar::rational;
use sheafmodal::{MeasurementScenario, Rational};

/// Small binary scenarios: cycles, a path, a star and a disconnected pair.
pub fn shapes() -> Vec<MeasurementScenario> {
    let b = |ms: &[&str], cs: &[&[&str]]| {
        MeasurementScenario::binary(ms.to_vec(), cs.iter().map(|c| c.to_vec())).unwrap()
    };
    vec![
        b(&["A", "B", "C"], &[&["A", "B"], &["B", "C"], &["A", "C"]]),
        b(&["A", "B", "C", "D"], &[&["A", "B"], &["B", "C"], &["C", "D"], &["A", "D"]]),
        b(&["A", "B", "C", "D"], &[&["A", "B"], &["B", "C"], &["C", "D"]]),
        b(&["A", "B", "C", "D"], &[&["A", "B"], &["A", "C"], &["A", "D"]]),
        b(&["A", "B", "C", "D"], &[&["A", "B"], &["C", "D"]]),
        b(&["A", "B", "C"], &[&["A", "B", "C"]]),
    ]
}

/// Rows of the point distribution of global assignment `g`.
pub fn deterministic_rows(s: &MeasurementScenario, g: usize) -> Vec<Vec<Rational>> {
    let global = &s.global_assignments()[g];
    s.maximal_contexts()
        .iter()
        .map(|c| {
            let mut row = vec![Rational::zero(); s.section_count(c)];
            row[s.section_rank(&global.restrict(c).unwrap())] = rational(1, 1);
            row
        })
        .collect()
}

/// Parity box: every pair context perfectly correlated except the last,
/// which is anticorrelated; uniform on each support so all marginals are 1/2.
pub fn parity_rows(s: &MeasurementScenario) -> Vec<Vec<Rational>> {
    let last = s.maximal_contexts().len() - 1;
    s.maximal_contexts()
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let parity = usize::from(k == last);
            let sections = s.assignments(c);
            let support: Vec<bool> = sections
                .iter()
                .map(|sec| sec.values().iter().sum::<usize>() % 2 == parity)
                .collect();
            let count = support.iter().filter(|x| **x).count() as i64;
            support
                .iter()
                .map(|on| if *on { rational(1, count) } else { Rational::zero() })
                .collect()
        })
        .collect()
}

pub fn mix(parts: &[(Rational, Vec<Vec<Rational>>)]) -> Vec<Vec<Rational>> {
    let mut out = parts[0].1.iter().map(|r| vec![Rational::zero(); r.len()]).collect::<Vec<_>>();
    for (w, rows) in parts {
        for (o, r) in out.iter_mut().zip(rows) {
            for (x, y) in o.iter_mut().zip(r) {
                *x += w * y;
            }
        }
    }
    out
}

/// A non-disturbing rational model: a positive mixture of some deterministic
/// models and, optionally, the parity box.
pub fn arb_model() -> impl Strategy<Value = EmpiricalModel> {
    (0..shapes().len())
        .prop_flat_map(|k| {
            let n = shapes()[k].global_assignments().len();
            (
                Just(k),
                proptest::collection::vec((0..n, 1i64..5), 0..4),
                0i64..4,
            )
        })
        .prop_filter("needs some weight", |(_, det, boxw)| !det.is_empty() || *boxw > 0)
        .prop_map(|(k, det, boxw)| {
            let s = shapes().swap_remove(k);
            let total: i64 = det.iter().map(|(_, w)| w).sum::<i64>() + boxw;
            let mut parts: Vec<(Rational, Vec<Vec<Rational>>)> = det
                .iter()
                .map(|(g, w)| (rational(*w, total), deterministic_rows(&s, *g)))
                .collect();
            if boxw > 0 {
                parts.push((rational(boxw, total), parity_rows(&s)));
            }
            EmpiricalModel::from_rows(s, SemiringTag::RationalProbability, mix(&parts)).unwrap()
        })
}
