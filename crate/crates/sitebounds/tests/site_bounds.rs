use proptest::prelude::*;

use polygas_contour::verify_hypotheses;
use polygas_core::{ModelParams, SiteSet};
use polygas_graphs::labeled_trees;
use polygas_sitebounds::*;

// Kirchhoff: the reduced Laplacian determinant sums edge products over
// spanning trees of the complete graph on the sites.
fn kirchhoff(sites: &[i64], alpha: f64) -> f64 {
    let n = sites.len();
    if n == 1 {
        return 1.0;
    }
    let m = n - 1;
    let mut a = vec![vec![0.0; m]; m];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let w = kernel(sites[i], sites[j], alpha);
            if i < m {
                a[i][i] += w;
                if j < m {
                    a[i][j] -= w;
                }
            }
        }
    }
    let mut det = 1.0;
    for c in 0..m {
        let piv = (c..m)
            .max_by(|&x, &y| a[x][c].abs().total_cmp(&a[y][c].abs()))
            .unwrap();
        if piv != c {
            a.swap(piv, c);
            det = -det;
        }
        det *= a[c][c];
        for r in c + 1..m {
            let f = a[r][c] / a[c][c];
            for k in c..m {
                a[r][k] -= f * a[c][k];
            }
        }
    }
    det
}

#[test]
fn site_tree_sum_matches_kirchhoff() {
    let sets: &[&[i64]] = &[
        &[0, 1],
        &[0, 2, 5],
        &[-3, 0, 4, 9],
        &[0, 1, 2, 3, 4],
        &[-10, -2, 0, 7, 8, 30],
        &[0, 3, 4, 11, 12, 19, 40],
        &[0, 1, 5, 6, 17, 18, 33, 60],
    ];
    for alpha in [1.2, 1.5, 2.0] {
        for s in sets {
            let got = site_tree_sum(&SiteSet::new(s.to_vec()), alpha).unwrap();
            let want = kirchhoff(s, alpha);
            assert!((got - want).abs() <= 1e-12 * want, "{s:?} {alpha}: {got} vs {want}");
        }
    }
    let too_big = SiteSet::new((0..MAX_TREE_SITES as i64 + 1).collect());
    assert!(site_tree_sum(&too_big, 2.0).is_err());
}

#[test]
fn chain_sweeps_have_no_violations() {
    let pointwise = chain_bound_sweep(500, 7).unwrap();
    assert_eq!(pointwise.instances, 500);
    assert_eq!(pointwise.violations, 0, "{:?}", pointwise.failures);
    assert!(pointwise.max_ratio < 1.0);
    let summed = summed_chain_bound_sweep(500, 11).unwrap();
    assert_eq!(summed.violations, 0, "{:?}", summed.failures);
    assert!(summed.max_ratio < 1.0);
    // the same seed reproduces the same sweep
    let again = chain_bound_sweep(500, 7).unwrap();
    assert_eq!(again.max_ratio, pointwise.max_ratio);
}

#[test]
fn summed_chain_tail_is_small() {
    for alpha in [1.01, 1.5, 2.0] {
        let (body, tail) = summed_chain(&[0, 3], alpha, CHAIN_RADIUS);
        assert!(tail < 1e-3 * body, "{alpha}: {tail} vs {body}");
        // the exact part at a larger radius stays under body + tail
        let (wide, _) = summed_chain(&[0, 3], alpha, 2 * CHAIN_RADIUS);
        assert!(wide >= body && wide <= body + tail);
    }
}

#[test]
fn contracting_steps_hold_on_small_trees() {
    let tuples: &[&[i64]] = &[&[0, 1], &[0, 5], &[0, 2, 3], &[-4, 0, 9], &[0, 1, 2], &[-7, 0, 1, 20]];
    let mut checked = 0;
    for alpha in [1.1, 1.5, 2.0] {
        for xs in tuples {
            let m = xs.len();
            for t in labeled_trees(m + 1).unwrap() {
                if t.leaves().iter().any(|&v| v >= m) {
                    continue;
                }
                let s = contracting_step_check(xs, &t, alpha).unwrap();
                assert!(s.holds(), "{xs:?} {:?} {alpha}: {s:?}", t.edges());
                checked += 1;
            }
        }
    }
    assert!(checked > 50);
}

#[test]
fn incompatible_polymers_carry_detector_pairs() {
    for alpha in [2.0, 1.5] {
        let p = ModelParams::on_interval(alpha, 1.0, 0, 9).unwrap();
        let w = witness_sweep(&p, 4).unwrap();
        assert!(w.incompatible_pairs > 0);
        assert_eq!(w.witnessed, w.incompatible_pairs, "{:?}", w.failures);
        assert!(w.failures.is_empty());
    }
}

#[test]
fn contour_point_bounds_hold_with_fitted_c0() {
    for alpha in [2.0, 1.5] {
        let p = ModelParams::on_interval(alpha, 1.0, 0, 15).unwrap();
        let c0 = verify_hypotheses(&p, 4, &[2.0]).unwrap().c0_fit;
        let sweep = contour_point_sweep(&p, 4, c0).unwrap();
        assert!(sweep.ok(), "{:?}", sweep.rows);
        for row in &sweep.rows {
            assert!(row.checked > 0, "{:?}", row.case);
        }
    }
}

#[test]
fn correlation_bound_reports() {
    let p = ModelParams::on_interval(2.0, 1.0, 0, 11).unwrap();
    let pair = correlation_bound_report(&p, &SiteSet::new(vec![0, 4]), &[0.0, 2.0]).unwrap();
    assert_eq!(pair.rows[0].lhs, 0.0);
    assert_eq!(pair.shape, kernel(0, 4, 2.0));
    assert!(pair.rows[1].lhs > 0.0);

    let triple = SiteSet::new(vec![0, 2, 5]);
    let r = correlation_bound_report(&p, &triple, &[4.0, 5.0, 6.0]).unwrap();
    assert_eq!(r.shape, site_tree_sum(&triple, 2.0).unwrap());
    assert!(r.ratio_decreasing);
    assert!(r.rate_positive(), "{r:?}");
    for row in &r.rows {
        assert!(row.lhs <= 2.0 * (-r.fitted_rate.unwrap() * row.beta).exp() * r.shape * (1.0 + 1e-12));
    }
    assert!(correlation_bound_report(&p, &SiteSet::new(vec![0]), &[1.0]).is_err());
    assert!(correlation_bound_report(&p, &SiteSet::new(vec![0, 40]), &[1.0]).is_err());
}

proptest! {
    #[test]
    fn kernel_is_symmetric_and_bounded(x in -1000i64..1000, y in -1000i64..1000, alpha in 1.001f64..2.0) {
        let c = kernel(x, y, alpha);
        prop_assert_eq!(c, kernel(y, x, alpha));
        prop_assert!(c > 0.0 && c <= 1.0);
        prop_assert_eq!(c, kernel(x + 17, y + 17, alpha));
    }

    #[test]
    fn pointwise_chain_bound_holds(
        xs in proptest::collection::vec(-30i64..30, 2..=4),
        y in -60i64..60,
        alpha in 1.01f64..=2.0,
    ) {
        let s = chain_bound_check(&xs, y, alpha).unwrap();
        prop_assert!(s.holds(), "{:?}", s);
    }

    #[test]
    fn summed_chain_bound_holds(xs in proptest::collection::vec(-20i64..20, 2..=3), alpha in 1.05f64..=2.0) {
        let s = summed_chain_bound_check(&xs, alpha).unwrap();
        prop_assert!(s.holds(), "{:?}", s);
    }
}
