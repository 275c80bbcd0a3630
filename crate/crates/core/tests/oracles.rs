use lenshull_core::export::{from_json, to_csv, to_json, to_off4};
use lenshull_core::predictor::antiprism_cells;
use lenshull_core::{
    certify, compare, det_m, enumerate_pairs, hull, level_curve_check, orbit, predict, support_form, wedge, Axis,
    FacetDiff, FacetKind, Fraction, GroupSpec, SphericalCell, SupportForm, TriangulationDocument, DEFAULT_EPSILON,
    DEFAULT_SAMPLES,
};
use nalgebra::{Matrix4, Vector4};
use std::collections::BTreeSet;

fn f(n: i64, d: i64) -> Fraction {
    Fraction::new(n, d).unwrap()
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Every pair in `[0, 1]` meeting the facet hypotheses, by exhaustive search.
fn filtered_pairs(p: i64, q: i64) -> BTreeSet<(Fraction, Fraction)> {
    let target = f(p, q);
    let mut all = Vec::new();
    for den in 1..q {
        for num in 0..=den {
            if gcd(num, den) == 1 {
                all.push(f(num, den));
            }
        }
    }
    let mut out = BTreeSet::new();
    for (i, a) in all.iter().enumerate() {
        for b in &all[i + 1..] {
            let (lo, hi) = if a < b { (*a, *b) } else { (*b, *a) };
            let endpoints = [lo, hi].iter().filter(|x| x.den() == 1).count();
            let adjacent = [lo, hi].iter().filter(|x| wedge(x, &target) == 1).count();
            if wedge(&lo, &hi) == 1 && target.strictly_between(&lo, &hi) && endpoints <= 1 && adjacent <= 1 {
                out.insert((lo, hi));
            }
        }
    }
    out
}

#[test]
fn walk_matches_exhaustive_filter() {
    for q in 5..=40 {
        for p in 2..=q - 2 {
            if gcd(p, q) != 1 {
                continue;
            }
            let walked: BTreeSet<_> = enumerate_pairs(f(p, q), false, false)
                .unwrap()
                .iter()
                .map(|pr| pr.key())
                .collect();
            assert_eq!(walked, filtered_pairs(p, q), "slope {p}/{q}");
        }
    }
}

#[test]
fn two_fifths_inline_pair_is_not_a_facet() {
    let expected: BTreeSet<_> = [(f(0, 1), f(1, 2))].into_iter().collect();
    assert_eq!(filtered_pairs(2, 5), expected);
}

/// Every triangle of a tetrahedral facet is shared with the neighbour the
/// mediant rule predicts: the previous pair, the next pair, or a translate of
/// the same cell at the two ends.
#[test]
fn ridge_neighbours_follow_the_mediant_rule() {
    for (p, q) in [(2, 7), (3, 11), (5, 13), (8, 21), (7, 30)] {
        let tri = predict(&GroupSpec::cyclic(p, q).unwrap()).unwrap();
        let index: std::collections::BTreeMap<Vec<usize>, usize> = tri
            .facets
            .iter()
            .enumerate()
            .map(|(i, fc)| (fc.vertices.clone(), i))
            .collect();
        let cell = |k: i64, a: i64, b: i64| {
            let mut v: Vec<usize> = [0, a, b, a + b]
                .iter()
                .map(|&o| ((k + o).rem_euclid(q)) as usize)
                .collect();
            v.sort_unstable();
            v
        };
        for (i, pair) in tri.pairs.iter().enumerate() {
            let (a, b) = (pair.a, pair.b);
            let base = cell(0, a, b);
            for drop in 0..4 {
                let ridge: Vec<usize> = base.iter().enumerate().filter(|&(j, _)| j != drop).map(|(_, &v)| v).collect();
                let owners = &tri.ridges[&ridge];
                assert_eq!(owners.len(), 2, "{p}/{q} ridge {ridge:?}");
                let other = owners.iter().find(|&&o| tri.facets[o].vertices != base).unwrap();
                let FacetKind::Tetra { pair: j, .. } = tri.facets[*other].kind else {
                    panic!("cyclic facets are tetrahedra")
                };
                let first_or_last = i == 0 || i + 1 == tri.pairs.len();
                assert!(
                    j + 1 == i || j == i + 1 || (j == i && first_or_last),
                    "{p}/{q}: pair {i} meets pair {j}"
                );
                assert!(index.contains_key(&tri.facets[*other].vertices));
            }
        }
    }
}

#[test]
fn translated_supports_certify_every_facet() {
    for spec in [
        GroupSpec::cyclic(3, 10).unwrap(),
        GroupSpec::new(2, 5, 2, 3).unwrap(),
        GroupSpec::new(3, 7, 1, 4).unwrap(),
    ] {
        let mut tri = predict(&spec).unwrap();
        let summary = certify(&mut tri, DEFAULT_SAMPLES).unwrap();
        assert!(summary.all_pass);
        let points = tri.orbit.coords();
        for fc in &tri.facets {
            let form = fc.support.unwrap();
            for &v in &fc.vertices {
                assert!((form.eval(&points[v]) - form.z).abs() < 1e-10);
            }
        }
    }
}

#[test]
fn closed_form_matches_linear_solve() {
    let spec = GroupSpec::cyclic(2, 5).unwrap();
    let pair = enumerate_pairs(spec.ratio(), false, false).unwrap()[0];
    let form = support_form(&spec, &pair).unwrap();
    let o = orbit(&spec);
    let cols: Vec<Vector4<f64>> = [0usize, 1, 2, 3].iter().map(|&i| Vector4::from(o.coords()[i])).collect();
    let m = Matrix4::from_columns(&cols);
    let rho = m.transpose().lu().solve(&Vector4::repeat(form.z)).unwrap();
    for (x, y) in rho.iter().zip(form.coefficients()) {
        assert!((x - y).abs() < 1e-12);
    }
    let s = 5f64.sqrt() / 4.0;
    assert!((form.z - s / 2.0).abs() < 1e-12);
    assert!((form.udd - s).abs() < 1e-12 && (form.vdd - s).abs() < 1e-12);
    assert!(det_m(&spec, &pair).unwrap().routes_agree());
}

#[test]
fn level_curve_rejects_out_of_range_levels() {
    let form = SupportForm::new(0.6, 0.0, 0.5, 0.0, 0.05);
    assert!(level_curve_check(&form, 128).is_err());
    let form = SupportForm::new(0.6, 0.0, 0.5, 0.0, 0.5);
    assert!(level_curve_check(&form, 128).unwrap());
}

#[test]
fn first_antiprism_needs_the_inverse_slope() {
    let spec = GroupSpec::new(2, 5, 3, 1).unwrap();
    let o = orbit(&spec);
    let oracle = hull(&o.coords(), DEFAULT_EPSILON).unwrap().facet_sets();
    let as_set = |cells: Vec<(i64, i64)>| {
        let mut v: Vec<usize> = cells.iter().map(|&(s, t)| o.index_of(s, t).unwrap()).collect();
        v.sort_unstable();
        v
    };
    assert!(oracle.contains(&as_set(antiprism_cells(&spec, Axis::First))));
    // With p in place of its inverse the upper base is not part of the orbit.
    assert!((0..3).all(|k| o.index_of(2 + 5 * k, 1).is_none()));
}

#[test]
fn dropped_facet_shows_up_in_the_diff() {
    let spec = GroupSpec::cyclic(2, 7).unwrap();
    let mut tri = predict(&spec).unwrap();
    let oracle = hull(&tri.orbit.coords(), DEFAULT_EPSILON).unwrap();
    assert_eq!(oracle.facets.len(), 14);
    assert!(compare(&tri, &oracle).is_empty());
    let dropped = tri.facets.remove(3).vertices;
    assert_eq!(
        compare(&tri, &oracle),
        FacetDiff {
            missing: vec![dropped],
            unexpected: vec![]
        }
    );
}

#[test]
fn hull_is_scale_invariant() {
    let spec = GroupSpec::new(3, 8, 1, 2).unwrap();
    let points = orbit(&spec).coords();
    let base = hull(&points, DEFAULT_EPSILON).unwrap().facet_sets();
    for scale in [1e-3, 7.5, 1e4] {
        let scaled: Vec<[f64; 4]> = points.iter().map(|p| p.map(|c| c * scale)).collect();
        assert_eq!(hull(&scaled, DEFAULT_EPSILON).unwrap().facet_sets(), base);
    }
}

#[test]
fn hull_ignores_worker_count() {
    let points = orbit(&GroupSpec::cyclic(5, 13).unwrap()).coords();
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| hull(&points, DEFAULT_EPSILON).unwrap())
    };
    assert_eq!(run(1), run(4));
}

#[test]
fn oracle_ridges_close_up() {
    let spec = GroupSpec::new(2, 5, 2, 2).unwrap();
    let tri = predict(&spec).unwrap();
    let oracle = hull(&tri.orbit.coords(), DEFAULT_EPSILON).unwrap();
    assert!(compare(&tri, &oracle).is_empty());
    assert!(tri.is_pseudo_manifold());
    assert!(tri.ridge_defects().is_empty());
}

#[test]
fn spherical_cells_are_empty_caps() {
    let mut tri = predict(&GroupSpec::new(3, 7, 2, 1).unwrap()).unwrap();
    certify(&mut tri, DEFAULT_SAMPLES).unwrap();
    let points = tri.orbit.coords();
    for fc in &tri.facets {
        let cell = SphericalCell::from_support(&fc.support.unwrap());
        assert!(cell.radius > 0.0 && cell.radius < std::f64::consts::FRAC_PI_2);
        for (i, x) in points.iter().enumerate() {
            let angle = cell.angle_to(x);
            if fc.vertices.contains(&i) {
                assert!((angle - cell.radius).abs() < 1e-9);
            } else {
                assert!(angle > cell.radius + 1e-9);
            }
        }
    }
}

#[test]
fn exports_round_trip_and_are_stable() {
    let mut tri = predict(&GroupSpec::cyclic(2, 7).unwrap()).unwrap();
    let report = certify(&mut tri, DEFAULT_SAMPLES).unwrap();
    let doc = TriangulationDocument::new(&tri, Some(report), false);
    let json = to_json(&doc).unwrap();
    assert_eq!(json, to_json(&doc).unwrap());
    let back = from_json(&json).unwrap();
    assert_eq!(back.facet_sets(), tri.facet_sets());
    assert_eq!(back, doc);

    let off = to_off4(&doc);
    let mut lines = off.lines();
    assert_eq!(lines.next(), Some("4OFF"));
    assert_eq!(lines.next(), Some(format!("7 14 {} 0", tri.ridges.len()).as_str()));

    let csv = to_csv(&doc).unwrap();
    assert_eq!(csv.lines().count(), 15);

    let unit = TriangulationDocument::new(&tri, None, true);
    let r: f64 = unit.points[0].coords.iter().map(|c| c * c).sum();
    assert!((r - 1.0).abs() < 1e-15);
    assert_eq!(unit.facets[0].cell, doc.facets[0].cell);
}
