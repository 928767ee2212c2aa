mod common;

use common::{markov_moment, random_family, random_fn, random_sft};
use pressure_calc::{
    covariance, covariance_d1, decorrelate, derivative_report, direct_triple, direct_variance,
    entropy_one_base, fd_oracle, measure_derivative, pressure_d2, pressure_d2_mixed,
    pressure_d3_mixed, pressure_metric, pressure_metric_d1, triple_covariance, variance,
    Equilibrium, PolynomialFamily, PotentialFamily, FD_STEP_THIRD,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sft::{DepthKFunction, Sft};
use transfer::pressure;

fn centered(g: &DepthKFunction<f64>, eq: &Equilibrium) -> DepthKFunction<f64> {
    g.add_constant(-eq.integrate(g).unwrap())
}

#[test]
fn derivatives_match_finite_differences_on_twenty_families() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for i in 0..20 {
        let fam = random_family(&mut rng).to_family().unwrap();
        let r1 = derivative_report(&fam, 1).unwrap();
        let r2 = derivative_report(&fam, 2).unwrap();
        let r3 = derivative_report(&fam, 3).unwrap();
        assert!(r1.abs_err < 1e-7, "family {i}: d1 {r1:?}");
        assert!(r2.abs_err < 1e-5, "family {i}: d2 {r2:?}");
        assert!(r3.abs_err < 1e-3, "family {i}: d3 {r3:?}");
    }
}

#[test]
fn diagonal_of_the_mixed_second_derivative() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let one = random_family(&mut rng);
    let fam1 = one.to_family().unwrap();
    let fam2 = PotentialFamily::new(2, move |u| one.eval(&[u[0] + u[1]])).unwrap();
    let d2 = pressure_d2(&fam1).unwrap();
    let mixed = pressure_d2_mixed(&fam2).unwrap();
    assert!((d2 - mixed).abs() < 1e-6, "{d2} vs {mixed}");
}

#[test]
fn mixed_third_derivative_matches_eight_point_stencil() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let s = random_sft(&mut rng);
    let eq = Equilibrium::new(&random_fn(&s, 2, 0.5, &mut rng)).unwrap();
    let mut poly = PolynomialFamily::new(3, eq.potential().clone()).unwrap();
    for i in 0..3 {
        poly = poly.with_term(&[i], centered(&random_fn(&s, 2, 0.5, &mut rng), &eq)).unwrap();
    }
    for idx in [[0, 1], [0, 2], [1, 2]] {
        poly = poly.with_term(&idx, random_fn(&s, 1, 0.5, &mut rng)).unwrap();
    }
    poly = poly.with_term(&[0, 1, 2], random_fn(&s, 2, 0.5, &mut rng)).unwrap();
    let value = pressure_d3_mixed(&poly.to_family().unwrap()).unwrap();
    let h = FD_STEP_THIRD;
    let mut fd = 0.0;
    for sx in [-1.0, 1.0] {
        for sy in [-1.0, 1.0] {
            for sz in [-1.0, 1.0] {
                fd += sx * sy * sz * pressure(&poly.eval(&[sx * h, sy * h, sz * h])).unwrap();
            }
        }
    }
    fd /= 8.0 * h * h * h;
    assert!((value - fd).abs() < 1e-3, "{value} vs {fd}");
}

#[test]
fn measure_derivative_matches_finite_difference() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..5 {
        let s = random_sft(&mut rng);
        let f = PolynomialFamily::new(1, random_fn(&s, 2, 0.5, &mut rng))
            .unwrap()
            .with_term(&[0], random_fn(&s, 2, 0.5, &mut rng))
            .unwrap();
        let w = PolynomialFamily::new(1, random_fn(&s, 1, 1.0, &mut rng))
            .unwrap()
            .with_term(&[0], random_fn(&s, 3, 1.0, &mut rng))
            .unwrap();
        let value = measure_derivative(&w.to_family().unwrap(), &f.to_family().unwrap()).unwrap();
        let h = 1e-4;
        let at = |t: f64| {
            let eq = Equilibrium::new(&f.eval(&[t])).unwrap();
            eq.integrate(&w.eval(&[t])).unwrap()
        };
        let fd = (at(h) - at(-h)) / (2.0 * h);
        assert!((value - fd).abs() < 1e-6, "{value} vs {fd}");
    }
}

#[test]
fn correlation_sums_match_markov_recursion() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..5 {
        let s = random_sft(&mut rng);
        let eq = Equilibrium::new(&random_fn(&s, 2, 0.5, &mut rng)).unwrap();
        let g1 = centered(&random_fn(&s, 1, 1.0, &mut rng), &eq);
        let g2 = centered(&random_fn(&s, 2, 1.0, &mut rng), &eq);
        let g3 = centered(&random_fn(&s, 3, 1.0, &mut rng), &eq);
        for n in [1, 5, 17] {
            let v = direct_variance(&g2, &eq, n).unwrap();
            let oracle = markov_moment(&eq, &[&g2, &g2], n);
            assert!((v - oracle).abs() < 1e-12, "n={n}: {v} vs {oracle}");
            let t = direct_triple(&g1, &g2, &g3, &eq, n).unwrap();
            let oracle = markov_moment(&eq, &[&g1, &g2, &g3], n);
            assert!((t - oracle).abs() < 1e-12, "n={n}: {t} vs {oracle}");
        }
    }
}

#[test]
fn coin_triple_matches_brute_force_at_twenty() {
    let s = Sft::full_shift(2).unwrap();
    let w = DepthKFunction::on(&s, 1, |u| [0.3f64.ln(), 0.7f64.ln()][u[0]]).unwrap();
    let eq = Equilibrium::new(&w).unwrap();
    let g = DepthKFunction::on(&s, 1, |u| f64::from(u[0] == 0) - 0.3).unwrap();
    let triple = triple_covariance(&g, &g, &g, &eq, eq.truncation()).unwrap().value;
    let brute = markov_moment(&eq, &[&g, &g, &g], 20);
    assert!((triple - brute).abs() < 1e-3, "{triple} vs {brute}");
}

#[test]
fn green_kubo_minus_direct_decays_like_one_over_n() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let s = random_sft(&mut rng);
    let eq = Equilibrium::new(&random_fn(&s, 2, 0.8, &mut rng)).unwrap();
    let g = centered(&random_fn(&s, 2, 1.0, &mut rng), &eq);
    let gk = variance(&g, &eq, eq.truncation()).unwrap().value;
    let scaled: Vec<f64> = (10..=60)
        .map(|n| n as f64 * (gk - direct_variance(&g, &eq, n).unwrap()).abs())
        .collect();
    let c = scaled.iter().copied().fold(0.0, f64::max);
    assert!(c.is_finite() && c < 10.0 * g.sup_norm().powi(2));
    // n·|difference| settles to the constant 2 Σ j C(j).
    assert!((scaled[50] - scaled[40]).abs() < 1e-6 * c.max(1.0));
}

#[test]
fn tail_bounds_shrink_at_the_gap_rate() {
    let s = Sft::golden_mean();
    let eq = Equilibrium::new(&DepthKFunction::on(&s, 2, |u| 0.3 * (u[0] + u[1]) as f64).unwrap()).unwrap();
    let g = centered(&DepthKFunction::on(&s, 2, |u| u[1] as f64).unwrap(), &eq);
    let tails: Vec<f64> = (10..20)
        .map(|n| variance(&g, &eq, n).unwrap().tail_bound)
        .collect();
    for pair in tails.windows(2) {
        assert!(pair[1] / pair[0] <= eq.gap() + 0.05);
    }
    let triple: Vec<f64> = (20..30)
        .map(|n| triple_covariance(&g, &g, &g, &eq, n).unwrap().tail_bound)
        .collect();
    for pair in triple.windows(2) {
        assert!(pair[1] / pair[0] <= eq.gap() + 0.05);
    }
}

#[test]
fn coboundary_variance_is_within_tail_bound() {
    let s = Sft::golden_mean();
    let eq = Equilibrium::new(&DepthKFunction::on(&s, 1, |_| 0.0).unwrap()).unwrap();
    let v = DepthKFunction::on(&s, 2, |u| (u[0] + 2 * u[1]) as f64).unwrap();
    let cob = v.coboundary().unwrap();
    let r = variance(&cob, &eq, eq.truncation()).unwrap();
    assert!(r.value.abs() <= r.tail_bound.max(1e-12), "{r:?}");
}

#[test]
fn independent_coordinates_have_zero_covariance() {
    let s = Sft::full_shift(2).unwrap();
    let eq = Equilibrium::new(&DepthKFunction::on(&s, 1, |_| 0.0).unwrap()).unwrap();
    // Under fair coins the only correlated pair among the lagged terms of
    // x₀ − ½ and x₃ − ½ is x₀ with itself, so the covariance is ¼.
    let a = DepthKFunction::on(&s, 4, |u| u[0] as f64 - 0.5).unwrap();
    let b = DepthKFunction::on(&s, 4, |u| u[3] as f64 - 0.5).unwrap();
    assert!((covariance(&a, &b, &eq, 12).unwrap().value - 0.25).abs() < 1e-14);
    // The event x_a = x_b is independent of any single bit, so these two are
    // uncorrelated at every lag.
    let c = DepthKFunction::on(&s, 1, |u| u[0] as f64 - 0.5).unwrap();
    let d = DepthKFunction::on(&s, 4, |u| if u[2] == u[3] { 0.5 } else { -0.5 }).unwrap();
    assert!(covariance(&c, &d, &eq, 12).unwrap().value.abs() < 1e-14);
}

/// A three-parameter polynomial family on the entropy-one base whose `w`
/// direction keeps `∫ F dm` stationary.
fn stationary_metric_family(seed: u64) -> PolynomialFamily {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f0 = entropy_one_base();
    let s = f0.sft().clone();
    let eq = Equilibrium::new(&f0).unwrap();
    let du = centered(&random_fn(&s, 2, 0.6, &mut rng), &eq);
    let dv = centered(&random_fn(&s, 2, 0.6, &mut rng), &eq);
    let dw = decorrelate(&random_fn(&s, 2, 0.6, &mut rng), &f0, &eq).unwrap();
    PolynomialFamily::new(3, f0)
        .unwrap()
        .with_term(&[0], du)
        .unwrap()
        .with_term(&[1], dv)
        .unwrap()
        .with_term(&[2], dw)
        .unwrap()
        .with_term(&[1, 2], random_fn(&s, 2, 0.4, &mut rng))
        .unwrap()
        .with_term(&[0, 2], random_fn(&s, 1, 0.4, &mut rng))
        .unwrap()
        .with_term(&[0, 1], random_fn(&s, 1, 0.4, &mut rng))
        .unwrap()
}

/// The pressure metric `−Cov(∂ᵤF, ∂ᵥF) / ∫ F dm` at `(0, 0, w)` of the
/// family renormalized to pressure zero by subtracting `P(F(0, 0, w))`.
fn metric_along_w(poly: &PolynomialFamily, w: f64) -> f64 {
    let point = [0.0, 0.0, w];
    let f = poly.eval(&point);
    let eq = Equilibrium::new(&f).unwrap();
    let du = poly.partial_at(&[0], &point);
    let dv = poly.partial_at(&[1], &point);
    let cov = covariance(&du, &dv, &eq, eq.truncation()).unwrap().value;
    let denominator = eq.integrate(&f).unwrap() - eq.pressure();
    -cov / denominator
}

#[test]
fn metric_derivative_matches_finite_difference_of_the_metric() {
    for seed in 0..4 {
        let poly = stationary_metric_family(seed);
        let value = pressure_metric_d1(&poly.to_family().unwrap()).unwrap().value;
        let h = 1e-3;
        let fd = (metric_along_w(&poly, h) - metric_along_w(&poly, -h)) / (2.0 * h);
        assert!((value - fd).abs() < 1e-3, "seed {seed}: {value} vs {fd}");
    }
}

#[test]
fn three_term_display_is_the_derivative_of_the_covariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..4 {
        let s = random_sft(&mut rng);
        let eq = Equilibrium::new(&random_fn(&s, 2, 0.5, &mut rng)).unwrap();
        let mut poly = PolynomialFamily::new(3, eq.potential().clone()).unwrap();
        for i in 0..3 {
            poly = poly.with_term(&[i], centered(&random_fn(&s, 2, 0.5, &mut rng), &eq)).unwrap();
        }
        for idx in [[0, 2], [1, 2], [2, 2]] {
            poly = poly.with_term(&idx, random_fn(&s, 2, 0.5, &mut rng)).unwrap();
        }
        let value = covariance_d1(&poly.to_family().unwrap()).unwrap().value;
        let cov_at = |w: f64| {
            let point = [0.0, 0.0, w];
            let eq = Equilibrium::new(&poly.eval(&point)).unwrap();
            let du = poly.partial_at(&[0], &point);
            let dv = poly.partial_at(&[1], &point);
            covariance(&du, &dv, &eq, eq.truncation()).unwrap().value
        };
        let h = 1e-4;
        let fd = (cov_at(h) - cov_at(-h)) / (2.0 * h);
        assert!((value - fd).abs() < 1e-6, "{value} vs {fd}");
    }
}

#[test]
fn metric_at_entropy_one_base_has_unit_denominator() {
    let poly = stationary_metric_family(1);
    let base = poly.base().clone();
    let two = PolynomialFamily::new(2, base)
        .unwrap()
        .with_term(&[0], poly.term(&[0]).unwrap().clone())
        .unwrap()
        .with_term(&[1], poly.term(&[0]).unwrap().clone())
        .unwrap();
    let m = pressure_metric(&two.to_family().unwrap()).unwrap();
    assert!((m.denominator + 1.0).abs() < 1e-12);
    assert!(m.value > 0.0);
}

#[test]
fn closed_form_partials_agree_with_the_evaluator() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..5 {
        let fam = random_family(&mut rng).to_family().unwrap();
        assert!(fam.closed_form_discrepancy().unwrap() < 1e-7);
    }
}

#[test]
fn third_order_oracle_converges_at_second_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let fam = random_family(&mut rng).to_family().unwrap();
    let exact = derivative_report(&fam, 3).unwrap().value;
    let e1 = (fd_oracle(&fam, 3, 4e-2).unwrap() - exact).abs();
    let e2 = (fd_oracle(&fam, 3, 2e-2).unwrap() - exact).abs();
    // Halving h divides an O(h²) error by about four.
    assert!(e2 < e1 / 3.0, "{e1} then {e2}");
}
