use std::f64::consts::{PI, SQRT_2};

use holonomy::{flow_contraction_check, hyperbolic_distance, sasaki_distance, UnitTangent};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_pair(rng: &mut ChaCha8Rng) -> (UnitTangent, UnitTangent) {
    let p = Complex64::from_polar(rng.gen_range(0.0..0.8), rng.gen_range(0.0..2.0 * PI));
    let x = UnitTangent::new(p, rng.gen_range(0.0..2.0 * PI)).unwrap();
    let eps = 10f64.powf(rng.gen_range(-4.0..-1.0));
    let dp = Complex64::from_polar(eps * rng.gen_range(0.0..1.0), rng.gen_range(0.0..2.0 * PI));
    let y = UnitTangent::new(p + dp, x.angle + eps * rng.gen_range(-1.0..1.0)).unwrap();
    (x, y)
}

#[test]
fn contraction_ratio_is_bounded_over_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(51);
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let (x, y) = random_pair(&mut rng);
        let s = rng.gen_range(0.0..5.0);
        let r = flow_contraction_check(&x, &y, s).unwrap();
        worst = worst.max(r);
    }
    assert!(worst <= 2.0 * SQRT_2, "max ratio {worst}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn flow_preserves_point_distance_along_geodesics(
        r in 0.0f64..0.9, phi in 0.0f64..6.28, theta in 0.0f64..6.28, s in 0.0f64..4.0, ds in 0.0f64..2.0,
    ) {
        let x = UnitTangent::new(Complex64::from_polar(r, phi), theta).unwrap();
        let a = x.flow(s);
        let b = x.flow(s + ds);
        prop_assert!((hyperbolic_distance(a.point, b.point) - ds).abs() < 1e-8 * (1.0 + s + ds).exp());
        prop_assert!((sasaki_distance(&a, &b) - ds).abs() < 1e-7 * (1.0 + s + ds).exp());
    }
}
