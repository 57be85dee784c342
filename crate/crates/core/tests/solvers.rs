use proptest::prelude::*;

use recint::catalog::{entry_by_name, make_airy};
use recint::first_order::{self, FirstOrderProblem};
use recint::second_order::{self, Forcing, SecondOrderProblem};
use recint::{DoubleDouble, Series, Series32, Series64};

fn poly(c: &[f64], order: usize) -> Series64 {
    Series64::from_poly(0.0, order, c).unwrap()
}

fn coeff_vec(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-2.0f64..2.0, 1..=max_len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn recursion_matches_integrating_factor(
        p in coeff_vec(5),
        f in coeff_vec(5),
        c1 in -2.0f64..2.0,
        order in 4usize..40,
    ) {
        let prob = FirstOrderProblem::new(poly(&p, order), poly(&f, order), c1).unwrap();
        let closed = first_order::solve_integrating_factor(&prob).unwrap();
        let (rec, iters) = first_order::solve_recursive(&prob, order + 1).unwrap();
        prop_assert!(iters <= order + 1);
        let cmp = rec.approx_eq(&closed, 1e-12, order).unwrap();
        prop_assert!(cmp.equal, "{cmp:?}");
        let r = first_order::residual_first_order(&prob, &rec, 1e-12).unwrap();
        prop_assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn picard_iterates_freeze_one_degree_per_step(
        p in coeff_vec(4),
        f in coeff_vec(4),
        c1 in -2.0f64..2.0,
    ) {
        let order = 16;
        let prob = FirstOrderProblem::new(poly(&p, order), poly(&f, order), c1).unwrap();
        let iterates = first_order::recursive_iterates(&prob, order + 1).unwrap();
        let last = iterates.last().unwrap();
        for (k, it) in iterates.iter().enumerate() {
            for j in 0..=k.min(order) {
                prop_assert_eq!(it.coeff(j).to_bits(), last.coeff(j).to_bits(), "iterate {} degree {}", k, j);
            }
        }
    }

    #[test]
    fn alpha_stabilizes_within_bound(h in coeff_vec(4), order in 4usize..48) {
        let h = poly(&h, order);
        let bound = second_order::alpha_iteration_bound(order);
        let (alpha, iters) = second_order::compute_alpha(&h, bound).unwrap();
        prop_assert!(iters <= bound);
        prop_assert_eq!(alpha.coeff(0), 1.0);
        prop_assert_eq!(alpha.coeff(1), 0.0);
    }

    #[test]
    fn extended_and_binary64_agree_on_polynomial_problems(
        p in coeff_vec(3),
        q in coeff_vec(3),
        f in coeff_vec(3),
    ) {
        let order = 20;
        let prob = SecondOrderProblem::new(poly(&p, order), poly(&q, order), poly(&f, order)).unwrap();
        let plain = second_order::solve(&prob).unwrap();
        let (_, wide) = second_order::solve_extended(&prob).unwrap();
        for (a, b, forcing) in [
            (&plain.y1, &wide.y1, Forcing::Homogeneous),
            (&plain.y2, &wide.y2, Forcing::Homogeneous),
            (&plain.yp, &wide.yp, Forcing::Inhomogeneous),
        ] {
            let r = second_order::residual_second_order(&prob, b, forcing, 1e-12).unwrap();
            prop_assert!(r.passed(), "{:?}", r.relative_residual());
            // Only compare where binary64 still has the digits.
            let plain_r = second_order::residual_second_order(&prob, a, forcing, 1e-10).unwrap();
            if plain_r.passed() {
                let cmp = a.approx_eq(b, 1e-8, order - 2).unwrap();
                prop_assert!(cmp.equal, "{cmp:?}");
            }
        }
    }
}

#[test]
fn first_order_examples() {
    // y' + y = 0, y(0) = 1.
    let prob = FirstOrderProblem::new(poly(&[1.0], 8), poly(&[], 8), 1.0).unwrap();
    let y = first_order::solve_integrating_factor(&prob).unwrap();
    let mut fact = 1.0;
    for k in 0..=8 {
        if k > 0 {
            fact *= k as f64;
        }
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        assert!((y.coeff(k) - sign / fact).abs() < 1e-16);
    }
    // y' = 2x (p = 0), y(0) = 3: no iteration beyond the forcing.
    let prob = FirstOrderProblem::new(poly(&[], 8), poly(&[0.0, 2.0], 8), 3.0).unwrap();
    let (y, iters) = first_order::solve_recursive(&prob, 9).unwrap();
    assert_eq!(y.coeffs(), poly(&[3.0, 0.0, 1.0], 8).coeffs());
    assert_eq!(iters, 2);
}

#[test]
fn closed_form_loses_digits_near_a_zero_of_alpha() {
    // Legendre l = 3: the even solution vanishes near |x| = 0.42, so
    // 1/alpha^2 has that radius and y2 = y1 * int(1/alpha^2) cancels.
    let prob = entry_by_name("legendre", &[("l".into(), 3.0)]).unwrap().problem(32).unwrap();
    let plain = second_order::solve(&prob).unwrap();
    let (_, wide) = second_order::solve_extended(&prob).unwrap();
    let r_plain = second_order::residual_second_order(&prob, &plain.y2, Forcing::Homogeneous, 1e-10).unwrap();
    let r_wide = second_order::residual_second_order(&prob, &wide.y2, Forcing::Homogeneous, 1e-10).unwrap();
    assert!(r_plain.relative_residual() > 1e-6, "{}", r_plain.relative_residual());
    assert!(r_wide.relative_residual() < 1e-14, "{}", r_wide.relative_residual());
}

#[test]
fn generic_over_scalar() {
    let airy32 = SecondOrderProblem::new(
        Series32::zero(0.0, 12),
        Series32::from_poly(0.0, 12, &[0.0, -1.0]).unwrap(),
        Series32::zero(0.0, 12),
    )
    .unwrap();
    let sol = second_order::solve(&airy32).unwrap();
    assert!((sol.y1.coeff(3) - 1.0 / 6.0).abs() < 1e-6);
    assert!((sol.y2.coeff(4) - 1.0 / 12.0).abs() < 1e-6);

    let airy64 = make_airy(vec![]).problem(12).unwrap();
    let wide = SecondOrderProblem::<DoubleDouble>::new(airy64.p().cast(), airy64.q().cast(), airy64.f().cast()).unwrap();
    let sol = second_order::solve(&wide).unwrap();
    let c9 = sol.y1.coeff(9);
    let exact = DoubleDouble::from(1.0) / DoubleDouble::from(12960.0);
    assert!((c9 - exact).hi().abs() < 1e-30);
}

#[test]
fn reduced_problem_reproduces_general_solution() {
    let prob = SecondOrderProblem::new(poly(&[1.0, 0.5], 20), poly(&[-2.0], 20), poly(&[1.0, 0.0, 1.0], 20)).unwrap();
    let (factors, sol) = second_order::solve_with_factors(&prob).unwrap();
    let (c1, y0) = (0.75, -1.5);
    let reduced = second_order::reduced_first_order(&factors, prob.f(), c1, y0).unwrap();
    let y = first_order::solve_integrating_factor(&reduced).unwrap();
    let expected = sol.general(c1, y0).unwrap();
    let cmp = y.approx_eq(&expected, 1e-12, 19).unwrap();
    assert!(cmp.equal, "{cmp:?}");
}

#[test]
fn series_json_round_trip() {
    let s = Series::new(1.0, vec![0.1, -2.5e-7, 3.0]).unwrap();
    let text = serde_json::to_string(&s).unwrap();
    let back: Series64 = serde_json::from_str(&text).unwrap();
    assert_eq!(back, s);
    assert!(serde_json::from_str::<Series64>(r#"{"base_point":0,"coeffs":[]}"#).is_err());
}
