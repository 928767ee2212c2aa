use std::time::Instant;

use disk_expansions::{
    build_relations, check_named_relations, solve_vanishing, CaseTag, Convention, Coupling, DiskError, TripleSeries,
    Unknown, VerdictKind, DEFAULT_MARGIN,
};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(text: &str) -> Coupling {
    text.parse().unwrap()
}

fn q(v: i64) -> BigRational {
    BigRational::from_integer(v.into())
}

fn rel(items: &[(&str, usize, i64)]) -> Vec<(Unknown, BigRational)> {
    items.iter().map(|(f, n, v)| (Unknown::new(f, *n), q(*v))).collect()
}

#[test]
fn ab_cd_ef_ij_are_forced_zero_at_order_twenty() {
    let start = Instant::now();
    for case in [CaseTag::AB, CaseTag::CD, CaseTag::EF, CaseTag::IJ] {
        let sys = build_relations(case, 20, &case.default_couplings(), Convention::Sum).unwrap();
        let v = solve_vanishing(&sys, DEFAULT_MARGIN);
        assert_eq!(v.verdict, VerdictKind::ForcedZero, "{case}: {v:?}");
        assert_eq!(v.tested.len(), case.target_families().len() * 19);
    }
    assert!(start.elapsed().as_secs_f64() < 10.0);
}

#[test]
fn difference_convention_leaves_one_j_direction_free() {
    // With the difference identity, the fourth-order rows only see J1 − 2J0
    // and the direction Jₙ = n + 1 survives every coupling.
    let sys = build_relations(CaseTag::IJ, 20, &CaseTag::IJ.default_couplings(), Convention::Difference).unwrap();
    let v = solve_vanishing(&sys, DEFAULT_MARGIN);
    assert_eq!(v.verdict, VerdictKind::Undetermined);
    assert!(v.not_forced.iter().all(|u| u.starts_with('J')));
    let direction: Vec<(Unknown, BigRational)> = (0..=20).map(|n| (Unknown::new("J", n), q(n as i64 + 1))).collect();
    for row in &sys.rows {
        let dot: BigRational = row
            .coeffs
            .iter()
            .map(|(k, c)| {
                let u = &sys.unknowns[*k];
                direction.iter().find(|(d, _)| d == u).map_or(BigRational::zero(), |(_, x)| c * x)
            })
            .sum();
        assert!(dot.is_zero());
    }
}

#[test]
fn gh_relations_leave_one_h_direction_free() {
    // The H half of the series, T³(1−T²)²(1−S²)³ Σ Hₙ (TS)ⁿ, is invariant
    // under s ↦ t − s when Hₙ = C(n+2, 2), so every s = mt identity is
    // satisfied by that direction while G is forced to vanish.
    let couplings: Vec<Coupling> = (2..=6).map(|m| Coupling::new(m, 1).unwrap()).collect();
    let sys = build_relations(CaseTag::GH, 20, &couplings, Convention::Sum).unwrap();
    let v = solve_vanishing(&sys, DEFAULT_MARGIN);
    assert_eq!(v.verdict, VerdictKind::Undetermined);
    assert!(v.not_forced.iter().all(|u| u.starts_with('H')));
    assert_eq!(v.not_forced.len(), 19);
    let direction: Vec<(Unknown, BigRational)> =
        (0..=20).map(|n| (Unknown::new("H", n), q(((n + 1) * (n + 2) / 2) as i64))).collect();
    for row in &sys.rows {
        let dot: BigRational = row
            .coeffs
            .iter()
            .map(|(k, c)| {
                let u = &sys.unknowns[*k];
                direction.iter().find(|(d, _)| d == u).map_or(BigRational::zero(), |(_, x)| c * x)
            })
            .sum();
        assert!(dot.is_zero(), "row {} of {}", row.power, row.coupling);
    }
}

#[test]
fn single_coupling_leaves_ab_undetermined() {
    let sys = build_relations(CaseTag::AB, 20, &[c("s=t")], Convention::Sum).unwrap();
    let v = solve_vanishing(&sys, DEFAULT_MARGIN);
    assert_eq!(v.verdict, VerdictKind::Undetermined);
    assert!(v.kernel_dim > 0);
    assert!(!v.kernel_basis.is_empty());
    assert!(!v.not_forced.is_empty());
}

#[test]
fn named_relations_match_their_coupling_rows() {
    for case in CaseTag::ALL {
        for check in check_named_relations(case, 20).unwrap() {
            assert!(check.matched, "{case}: {} ({})", check.label, check.coupling);
        }
    }
}

#[test]
fn lowest_rows_appear_verbatim() {
    // The first relation of each identity is a single row up to scaling.
    let cases = [
        (CaseTag::AB, "s=t", rel(&[("A", 0, 1), ("B", 0, 2)])),
        (CaseTag::CD, "s=t", rel(&[("C", 0, 1)])),
        (CaseTag::EF, "s=t", rel(&[("E", 0, 1)])),
        (CaseTag::GH, "s=2t", rel(&[("G", 0, 1)])),
    ];
    for (case, coupling, expect) in cases {
        let sys = build_relations(case, 6, &[c(coupling)], Convention::Sum).unwrap();
        let first = &sys.rows[0];
        assert_eq!(first.coeffs.len(), expect.len(), "{case}");
        let (k0, c0) = &first.coeffs[0];
        let scale = &expect[0].1 / c0;
        for ((k, v), (u, e)) in first.coeffs.iter().zip(&expect) {
            assert_eq!(&sys.unknowns[*k], u);
            assert_eq!(&(v * &scale), e);
        }
        assert_eq!(sys.unknowns[*k0], expect[0].0);
    }
}

#[test]
fn ij_sign_conventions_differ_in_the_fourth_order_row() {
    for m in 2..=4i64 {
        let coupling = Coupling::new(m as u32, 1).unwrap();
        let difference_row = rel(&[("I", 0, m.pow(4) - (m - 1).pow(4)), ("J", 1, 2 * m - 1), ("J", 0, -(4 * m - 2))]);
        let derived = rel(&[
            ("I", 0, m.pow(4) + (m - 1).pow(4)),
            ("J", 1, 1),
            ("J", 0, -(6 + 2 * m * m + 2 * (m - 1) * (m - 1))),
        ]);
        let fp = build_relations(CaseTag::IJ, 10, &[coupling], Convention::Sum).unwrap();
        let ap = build_relations(CaseTag::IJ, 10, &[coupling], Convention::Difference).unwrap();
        assert!(fp.contains(Some(coupling), &derived), "m = {m}");
        assert!(!fp.contains(Some(coupling), &difference_row), "m = {m}");
        assert!(ap.contains(Some(coupling), &difference_row), "m = {m}");
        assert!(fp.contains(Some(coupling), &rel(&[("J", 0, 1)])));
    }
}

#[test]
fn cd_fourth_order_row_from_the_identity() {
    let sys = build_relations(CaseTag::CD, 8, &[c("s=t")], Convention::Sum).unwrap();
    let derived = rel(&[("C", 1, 2), ("C", 0, -12), ("D", 0, -1)]);
    assert!(sys.contains(Some(c("s=t")), &derived));
    let power4 = sys.rows.iter().find(|r| r.power == 4).unwrap();
    let names: Vec<String> = power4.coeffs.iter().map(|(k, _)| sys.unknowns[*k].to_string()).collect();
    assert_eq!(names, ["C0", "C1", "D0"]);
}

#[test]
fn unsupported_couplings_and_small_orders_are_rejected() {
    assert!(matches!(
        build_relations(CaseTag::AB, 10, &[c("s=3t")], Convention::Sum),
        Err(DiskError::UnsupportedCoupling { .. })
    ));
    assert!(matches!(
        build_relations(CaseTag::IJ, 10, &[c("s=t/2")], Convention::Sum),
        Err(DiskError::UnsupportedCoupling { .. })
    ));
    assert!(build_relations(CaseTag::AB, 1, &[c("s=t")], Convention::Sum).is_err());
}

#[test]
fn tiny_order_emits_boundary_warning() {
    let sys = build_relations(CaseTag::AB, 2, &CaseTag::AB.default_couplings(), Convention::Sum).unwrap();
    let v = solve_vanishing(&sys, DEFAULT_MARGIN);
    assert!(!v.warnings.is_empty());
    assert_eq!(v.tested, ["A0", "B0"]);
}

#[test]
fn dump_has_the_documented_shape() {
    let sys = build_relations(CaseTag::EF, 4, &CaseTag::EF.default_couplings(), Convention::Sum).unwrap();
    let json = serde_json::to_value(sys.dump()).unwrap();
    assert_eq!(json["case"], "EF");
    assert_eq!(json["N"], 4);
    let row = &json["rows"][0];
    assert_eq!(row["coupling"], "s=t");
    assert_eq!(row["powers"], 1);
    assert_eq!(row["coeffs"][0][0], "E0");
    assert_eq!(json["rows"].as_array().unwrap().len(), sys.rows.len());
}

/// Identity terms `(sign, ordering, t, s)` in units of the base time, worked
/// out by hand from translation and reflection of the configurations.
fn hand_identity(case: CaseTag, coupling: &str) -> Vec<(f64, usize, f64, f64)> {
    match (case, coupling) {
        (CaseTag::AB, "s=t") | (CaseTag::EF, "s=t") => vec![(1.0, 0, 1.0, 1.0), (1.0, 0, 1.0, 0.0)],
        (CaseTag::AB, "s=t/2") | (CaseTag::EF, "s=t/2") => vec![(2.0, 0, 2.0, 1.0)],
        (CaseTag::CD, "s=t") => vec![(1.0, 0, 1.0, 1.0), (-1.0, 1, 1.0, 0.0)],
        (CaseTag::CD, _) | (CaseTag::GH, _) | (CaseTag::IJ, _) => {
            let m: f64 = coupling.trim_start_matches("s=").trim_end_matches('t').parse().unwrap();
            match case {
                CaseTag::CD => vec![(1.0, 0, 1.0, m), (-1.0, 1, 1.0, 1.0 - m)],
                CaseTag::GH => vec![(1.0, 0, 1.0, m), (-1.0, 0, 1.0, 1.0 - m)],
                _ => vec![(1.0, 0, 1.0, m), (1.0, 0, 1.0, 1.0 - m)],
            }
        }
        _ => unreachable!(),
    }
}

/// Families and degrees of each ordering used by [`hand_identity`].
fn orderings(case: CaseTag) -> Vec<(&'static str, &'static str, [u32; 3])> {
    match case {
        CaseTag::AB => vec![("A", "B", [3, 3, 3])],
        CaseTag::CD => vec![("C", "C", [2, 3, 3]), ("P", "D", [3, 2, 3])],
        CaseTag::EF => vec![("E", "F", [2, 2, 3])],
        CaseTag::GH => vec![("G", "H", [2, 2, 3])],
        CaseTag::IJ => vec![("I", "J", [3, 3, 2])],
    }
}

#[test]
fn rows_reassemble_the_numeric_identity() {
    // With random values for the low-index unknowns, Σₚ Uᵖ · rowₚ must equal
    // four times the identity evaluated through the angular series.
    let mut rng = ChaCha8Rng::seed_from_u64(81);
    let n_live = 3;
    for case in CaseTag::ALL {
        for coupling in case.default_couplings() {
            let text = coupling.to_string();
            let sys = build_relations(case, 20, &[coupling], Convention::Sum).unwrap();
            let values: Vec<f64> = sys
                .unknowns
                .iter()
                .map(|u| if u.index < n_live { rng.gen_range(-1.0..1.0) } else { 0.0 })
                .collect();
            let family = |name: &str| -> Vec<f64> {
                sys.unknowns.iter().zip(&values).filter(|(u, _)| u.family == name).map(|(_, v)| *v).collect()
            };
            let u = 0.06f64;
            let big_u = u.tanh();
            let from_rows: f64 = sys
                .rows
                .iter()
                .map(|r| {
                    let dot: f64 = r.coeffs.iter().map(|(k, c)| c.to_f64().unwrap() * values[*k]).sum();
                    dot * big_u.powi(r.power as i32)
                })
                .sum();
            let mut direct = 0.0;
            for (sign, oi, t, s) in hand_identity(case, &text) {
                let (x, y, degrees) = orderings(case)[oi];
                let series = TripleSeries {
                    degrees,
                    k1: (degrees[0] + degrees[1] - degrees[2]) as usize,
                    k2: (degrees[0] + degrees[2] - degrees[1]) as usize,
                    x: family(x),
                    y: family(y),
                };
                direct += sign * series.eval(t * u, s * u);
            }
            assert!((from_rows - 4.0 * direct).abs() < 1e-13, "{case} {text}: {from_rows} vs {}", 4.0 * direct);
            assert!(direct.abs() > 1e-6, "{case} {text}: identity is degenerate");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn kernel_vectors_satisfy_every_row(case_ix in 0usize..5, order in 2usize..9, pick in 1usize..4) {
        let case = CaseTag::ALL[case_ix];
        let all = case.default_couplings();
        let couplings: Vec<Coupling> = all.iter().copied().take(pick.min(all.len())).collect();
        let sys = build_relations(case, order, &couplings, Convention::Sum).unwrap();
        let n = sys.unknowns.len();
        let (reduced, pivots) = disk_expansions::rref(sys.dense_rows(None), n);
        for v in disk_expansions::kernel_basis(&reduced, &pivots, n) {
            for row in &sys.rows {
                let dot: BigRational = row.coeffs.iter().map(|(k, c)| c * &v[*k]).sum();
                prop_assert!(dot.is_zero());
            }
        }
    }

    #[test]
    fn verdict_ignores_coupling_order(case_ix in 0usize..5, order in 4usize..10) {
        let case = CaseTag::ALL[case_ix];
        let mut couplings = case.default_couplings();
        let a = solve_vanishing(&build_relations(case, order, &couplings, Convention::Sum).unwrap(), 2);
        couplings.reverse();
        let b = solve_vanishing(&build_relations(case, order, &couplings, Convention::Sum).unwrap(), 2);
        prop_assert_eq!(a.verdict, b.verdict);
        prop_assert_eq!(a.rank, b.rank);
        prop_assert_eq!(a.not_forced, b.not_forced);
    }
}
