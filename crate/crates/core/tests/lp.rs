mod common;

use common::{random_feasible_program, vertex_enumeration_optimum};
use gridcover::*;
use proptest::prelude::*;

fn ints(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| Rational::from(x)).collect()
}

#[test]
fn diet_problem_has_known_optimum() {
    // minimize 2x + 3y s.t. x + y >= 4, x + 3y >= 6: optimum at (3, 1), value 9.
    let p = LinearProgram::new(ints(&[2, 3]), vec![ints(&[1, 1]), ints(&[1, 3])], ints(&[4, 6])).unwrap();
    let s = solve_lp(&p).unwrap();
    assert_eq!(s.status, LpStatus::Optimal);
    assert_eq!(s.value, Rational::from(9));
    assert_eq!(s.primal, ints(&[3, 1]));
    // Dual: y1 + y2 = 2, y1 + 3y2 = 3 gives (3/2, 1/2).
    assert_eq!(s.dual, vec![Rational::new(3, 2), Rational::new(1, 2)]);
    assert!(verify_solution(&p, &s));
}

#[test]
fn statuses_for_degenerate_programs() {
    let infeasible = LinearProgram::new(ints(&[1]), vec![ints(&[-1])], ints(&[1])).unwrap();
    assert_eq!(solve_lp(&infeasible).unwrap().status, LpStatus::Infeasible);
    let unbounded = LinearProgram::new(ints(&[-1]), vec![ints(&[1])], ints(&[0])).unwrap();
    assert_eq!(solve_lp(&unbounded).unwrap().status, LpStatus::Unbounded);
    let bounded = unbounded.clone().with_bounds(ints(&[0]), vec![Some(Rational::new(7, 2))]).unwrap();
    assert_eq!(solve_lp(&bounded).unwrap().value, Rational::new(-7, 2));
    let empty = LinearProgram::new(ints(&[1, 2]), vec![], vec![]).unwrap();
    assert_eq!(solve_lp(&empty).unwrap().value, Rational::zero());
}

#[test]
fn shape_errors_are_reported() {
    assert!(LinearProgram::new(ints(&[1, 1]), vec![ints(&[1])], ints(&[1])).is_err());
    assert!(LinearProgram::new(ints(&[1]), vec![ints(&[1])], ints(&[])).is_err());
    let p = LinearProgram::new(ints(&[1]), vec![], vec![]).unwrap();
    assert!(p.clone().with_bounds(ints(&[-1]), vec![None]).is_err());
    assert!(p.with_bounds(ints(&[0, 0]), vec![None]).is_err());
}

#[test]
fn verification_rejects_tampered_certificates() {
    let p = random_feasible_program(3, 4, 4);
    let s = solve_lp(&p).unwrap();
    assert!(verify_solution(&p, &s));
    let mut off = s.clone();
    off.value += Rational::one();
    assert!(!verify_solution(&p, &off));
    if !s.dual.is_empty() {
        let mut neg = s.clone();
        neg.dual[0] = -Rational::one();
        assert!(!verify_solution(&p, &neg));
    }
}

#[test]
fn random_programs_match_vertex_enumeration() {
    for seed in 1000..1060 {
        let p = random_feasible_program(seed, 4, 5);
        let s = solve_lp(&p).unwrap();
        assert!(verify_solution(&p, &s), "seed {seed}");
        assert_eq!(Some(s.value.to_big()), vertex_enumeration_optimum(&p), "seed {seed}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn simplex_agrees_with_vertices(seed in any::<u64>()) {
        let p = random_feasible_program(seed, 4, 5);
        let s = solve_lp(&p).unwrap();
        prop_assert!(verify_solution(&p, &s));
        prop_assert_eq!(Some(s.value.to_big()), vertex_enumeration_optimum(&p));
    }

    #[test]
    fn scaling_the_objective_scales_the_optimum(seed in any::<u64>(), factor in 1i64..20) {
        let p = random_feasible_program(seed, 4, 4);
        let scaled_obj: Vec<Rational> = p.objective().iter().map(|c| c * &Rational::from(factor)).collect();
        let scaled = LinearProgram::new(scaled_obj, p.rows().to_vec(), p.rhs().to_vec())
            .unwrap()
            .with_bounds(p.lower().to_vec(), p.upper().to_vec())
            .unwrap();
        let (a, b) = (solve_lp(&p).unwrap(), solve_lp(&scaled).unwrap());
        prop_assert_eq!(&a.value * &Rational::from(factor), b.value);
    }
}
