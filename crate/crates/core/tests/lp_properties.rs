use num_traits::ToPrimitive;
use proptest::prelude::*;
use sheafmodal::ratlp::{solve, solve_traced, LinearProgram, LpError, SolveTrace};
use sheafmodal::scalar::rational;
use sheafmodal::{ExactLp, Rational};

/// Bounded LPs: nonnegative bounds keep the origin feasible and a final
/// all-ones row caps every variable.
fn arb_lp() -> impl Strategy<Value = (Vec<i64>, Vec<Vec<i64>>, Vec<i64>)> {
    (1usize..5, 1usize..5).prop_flat_map(|(n, m)| {
        (
            proptest::collection::vec(-3i64..6, n),
            proptest::collection::vec(proptest::collection::vec(-2i64..5, n), m),
            proptest::collection::vec(0i64..8, m),
        )
    })
}

fn exact(c: &[i64], a: &[Vec<i64>], b: &[i64]) -> ExactLp {
    let r = |x: &i64| rational(*x, 1);
    let mut rows: Vec<Vec<Rational>> = a.iter().map(|row| row.iter().map(r).collect()).collect();
    let mut bounds: Vec<Rational> = b.iter().map(r).collect();
    rows.push(vec![rational(1, 1); c.len()]);
    bounds.push(rational(10, 1));
    LinearProgram::new(c.iter().map(r).collect(), rows, bounds).unwrap()
}

proptest! {
    #[test]
    fn optimum_is_certified((c, a, b) in arb_lp()) {
        let lp = exact(&c, &a, &b);
        let mut trace = SolveTrace::default();
        let sol = solve_traced(&lp, &mut trace).unwrap();
        prop_assert!(sol.verify(&lp));
        prop_assert!(trace.bases_distinct());
    }

    #[test]
    fn optimum_ignores_variable_and_row_order((c, a, b) in arb_lp(), rot in 0usize..5) {
        let n = c.len();
        let k = rot % n;
        let c2: Vec<i64> = (0..n).map(|j| c[(j + k) % n]).collect();
        let mut a2: Vec<Vec<i64>> = a.iter().map(|row| (0..n).map(|j| row[(j + k) % n]).collect()).collect();
        let mut b2 = b.clone();
        a2.reverse();
        b2.reverse();
        let v1 = solve(&exact(&c, &a, &b)).unwrap().value;
        let v2 = solve(&exact(&c2, &a2, &b2)).unwrap().value;
        prop_assert_eq!(v1, v2);
    }

    #[test]
    fn float_solver_agrees((c, a, b) in arb_lp()) {
        let exact_value = solve(&exact(&c, &a, &b)).unwrap().value.to_f64().unwrap();
        let f = |x: &i64| *x as f64;
        let mut rows: Vec<Vec<f64>> = a.iter().map(|row| row.iter().map(f).collect()).collect();
        let mut bounds: Vec<f64> = b.iter().map(f).collect();
        rows.push(vec![1.0; c.len()]);
        bounds.push(10.0);
        let lp = LinearProgram::new(c.iter().map(f).collect(), rows, bounds).unwrap();
        let value = solve(&lp).unwrap().value;
        prop_assert!((value - exact_value).abs() < 1e-9);
    }
}

#[test]
fn unbounded_direction_is_reported() {
    let lp = LinearProgram::new(
        vec![rational(1, 1), rational(1, 1)],
        vec![vec![rational(1, 1), rational(-1, 1)]],
        vec![rational(1, 1)],
    )
    .unwrap();
    match solve(&lp) {
        Err(LpError::Unbounded { ray }) => {
            assert!(ray.iter().all(|x| *x >= rational(0, 1)));
            assert!(ray[0] <= ray[1]);
        }
        other => panic!("expected unbounded, got {other:?}"),
    }
}
