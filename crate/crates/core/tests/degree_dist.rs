mod common;

use approx::assert_abs_diff_eq;
use netadopt::degree_dist::{
    edge_perspective, fosd_dominates, jackson_rogers_cdf, make_jackson_rogers, make_regular, make_two_degree, moments,
    DegreeDistribution,
};
use proptest::prelude::*;

#[test]
fn regular_is_a_point_mass() {
    for d in [1, 5] {
        let f = make_regular(d).unwrap();
        assert_eq!(f.degrees(), &[d]);
        assert_eq!(f.probs(), &[1.0]);
    }
    let ft = edge_perspective(&make_regular(5).unwrap());
    assert_eq!(ft.degrees(), &[5]);
    assert_eq!(ft.probs(), &[1.0]);
    assert!(make_regular(0).is_err());
}

#[test]
fn two_degree_masses() {
    let f = make_two_degree(6, 13, 0.1).unwrap();
    assert_eq!(f.degrees(), &[6, 13]);
    assert_abs_diff_eq!(f.prob(6), 0.9, epsilon = 1e-15);
    assert_abs_diff_eq!(f.prob(13), 0.1, epsilon = 1e-15);
    let g = make_two_degree(6, 13, 0.0).unwrap();
    assert_eq!(g.prob(6), 1.0);
    assert_eq!(g.prob(13), 0.0);
}

#[test]
fn two_degree_edge_perspective() {
    let ft = edge_perspective(&make_two_degree(6, 13, 0.1).unwrap());
    let expected = 0.1 * 13.0 / (0.1 * 13.0 + 0.9 * 6.0);
    assert_abs_diff_eq!(ft.prob(13), expected, epsilon = 1e-15);
    assert_abs_diff_eq!(ft.prob(13), 0.194030, epsilon = 1e-6);
}

#[test]
fn edge_perspective_by_hand() {
    let f = DegreeDistribution::from_pmf(&[(1, 0.5), (3, 0.5)], 3).unwrap();
    let ft = edge_perspective(&f);
    assert_abs_diff_eq!(ft.prob(1), 0.25, epsilon = 1e-15);
    assert_abs_diff_eq!(ft.prob(3), 0.75, epsilon = 1e-15);
}

#[test]
fn moments_by_hand() {
    assert_eq!(moments(&make_regular(5).unwrap()), (5.0, 0.0));
    let f = DegreeDistribution::from_pmf(&[(1, 0.5), (3, 0.5)], 3).unwrap();
    let (m, s) = moments(&f);
    assert_abs_diff_eq!(m, 2.0, epsilon = 1e-15);
    assert_abs_diff_eq!(s, 1.0, epsilon = 1e-15);
    assert_abs_diff_eq!(moments(&make_two_degree(6, 13, 0.1).unwrap()).0, 6.7, epsilon = 1e-12);
}

#[test]
fn jackson_rogers_cdf_by_hand() {
    assert_abs_diff_eq!(jackson_rogers_cdf(7.0, 2.0, 7.0), 19.0 / 27.0, epsilon = 1e-15);
    let f = make_jackson_rogers(7.0, 2.0, 200).unwrap();
    assert_abs_diff_eq!(f.probs().iter().sum::<f64>(), 1.0, epsilon = 1e-12);
    assert_eq!(f.d_max(), 200);
    assert!(f.degrees().iter().all(|&d| (1..=200).contains(&d)));
}

#[test]
fn fosd_examples() {
    let g = edge_perspective(&make_two_degree(2, 9, 0.4).unwrap());
    assert!(fosd_dominates(&g, &g));
    let r5 = edge_perspective(&make_regular(5).unwrap());
    let r3 = edge_perspective(&make_regular(3).unwrap());
    assert!(fosd_dominates(&r5, &r3));
    assert!(!fosd_dominates(&r3, &r5));
    let jr9 = edge_perspective(&make_jackson_rogers(9.0, 2.0, 200).unwrap());
    let jr7 = edge_perspective(&make_jackson_rogers(7.0, 2.0, 200).unwrap());
    assert!(fosd_dominates(&jr9, &jr7));
}

#[test]
fn std_dev_grows_with_inverse_r() {
    let mut last = 0.0;
    for i in 0..=20 {
        let x = i as f64 * 0.05;
        let r = if i == 0 { f64::INFINITY } else { 1.0 / x };
        let (_, sd) = moments(&make_jackson_rogers(7.0, r, 200).unwrap());
        assert!(sd > last, "1/r = {x}: std dev {sd} after {last}");
        last = sd;
    }
}

#[test]
fn csv_round_trip() {
    let f = make_jackson_rogers(4.0, 1.5, 60).unwrap();
    let text = f.to_csv();
    assert!(text.starts_with("degree,probability\n"));
    assert!(!text.contains('\r'));
    let back = DegreeDistribution::from_csv(&text).unwrap();
    assert_eq!(back.degrees(), f.degrees());
    for (a, b) in back.probs().iter().zip(f.probs()) {
        assert_abs_diff_eq!(a, b, epsilon = 1e-15);
    }
}

#[test]
fn rejects_bad_pmfs() {
    assert!(DegreeDistribution::from_pmf(&[(1, 0.5), (2, 0.4)], 2).is_err());
    assert!(DegreeDistribution::from_pmf(&[(0, 1.0)], 2).is_err());
    assert!(DegreeDistribution::from_pmf(&[(1, -0.1), (2, 1.1)], 2).is_err());
    assert!(make_two_degree(6, 13, 1.5).is_err());
}

fn check_pmf(f: &DegreeDistribution) {
    assert!(f.probs().iter().all(|&p| p >= 0.0));
    assert!((f.probs().iter().sum::<f64>() - 1.0).abs() <= 1e-12);
    assert_eq!(f.prob(0), 0.0);
    assert!(f.degrees().windows(2).all(|w| w[0] < w[1]));
}

proptest! {
    #[test]
    fn constructors_yield_valid_pmfs(d in 1u32..500, dl in 1u32..50, gap in 0u32..50, q in 0.0f64..=1.0,
                                     m in 1.0f64..20.0, inv_r in 0.0f64..1.5, d_max in 20u32..300) {
        check_pmf(&make_regular(d).unwrap());
        check_pmf(&make_two_degree(dl, dl + gap, q).unwrap());
        let r = if inv_r == 0.0 { f64::INFINITY } else { 1.0 / inv_r };
        check_pmf(&make_jackson_rogers(m, r, d_max).unwrap());
    }

    #[test]
    fn edge_perspective_identity(f in common::distribution(8, 100)) {
        let ft = edge_perspective(&f);
        let mean = f.mean();
        for (d, p) in f.iter() {
            prop_assert!((ft.prob(d) * mean - d as f64 * p).abs() <= 1e-12);
        }
    }

    #[test]
    fn larger_m_dominates(m in 1.0f64..15.0, dm in 0.25f64..5.0, r in 0.5f64..5.0) {
        let lo = edge_perspective(&make_jackson_rogers(m, r, 200).unwrap());
        let hi = edge_perspective(&make_jackson_rogers(m + dm, r, 200).unwrap());
        prop_assert!(fosd_dominates(&hi, &lo));
    }

    #[test]
    fn analytic_cdf_is_monotone(m in 0.5f64..20.0, r in 0.1f64..10.0, d in 0.0f64..500.0, step in 0.0f64..50.0) {
        prop_assert!(jackson_rogers_cdf(m, r, d + step) >= jackson_rogers_cdf(m, r, d));
    }

    #[test]
    fn zero_mass_degrees_change_nothing(f in common::distribution(5, 30), extra in prop::collection::vec(1u32..60, 1..4)) {
        let g = f.with_zero_mass(&extra).unwrap();
        prop_assert!((f.mean() - g.mean()).abs() <= 1e-13);
        for d in 1..=60 {
            prop_assert!((f.prob(d) - g.prob(d)).abs() <= 1e-15);
        }
    }
}
