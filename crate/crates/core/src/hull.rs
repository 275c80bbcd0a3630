//! Brute-force convex hull of a labelled point set in R⁴.
//!
//! Every affinely independent subset spanning a hyperplane is tested against
//! all points; supporting hyperplanes are merged by their vertex sets. The
//! scan is quartic in the number of points and intended as an oracle for
//! point sets of up to about 120 points.

use crate::error::{Error, Result};
use crate::predictor::Triangulation;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

pub const DEFAULT_EPSILON: f64 = 1e-9;
/// Largest orbit the CLI hands to the oracle.
pub const DEFAULT_POINT_CAP: usize = 120;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleFacet {
    /// Sorted labels of the points on the facet.
    pub vertices: Vec<usize>,
    /// Unit outward normal in ambient coordinates.
    pub normal: [f64; 4],
    /// `normal·x = offset` on the facet, `<= offset` on the hull.
    pub offset: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HullResult {
    /// Affine dimension of the point set.
    pub dimension: usize,
    /// Facets of the hull inside its affine span.
    pub facets: Vec<OracleFacet>,
    pub degeneracy_note: Option<String>,
}

impl HullResult {
    pub fn facet_sets(&self) -> BTreeSet<Vec<usize>> {
        self.facets.iter().map(|f| f.vertices.clone()).collect()
    }
}

fn dot(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn sub(a: &[f64; 4], b: &[f64; 4]) -> [f64; 4] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]]
}

/// Orthonormal basis of the span of `vectors`, choosing the largest residual
/// at each step and stopping once every residual is at most `tol`.
fn span_basis(vectors: &[[f64; 4]], tol: f64) -> Vec<[f64; 4]> {
    let mut basis: Vec<[f64; 4]> = Vec::new();
    let mut residuals = vectors.to_vec();
    while basis.len() < 4 {
        let (best, norm) = residuals
            .iter()
            .enumerate()
            .map(|(i, r)| (i, dot(r, r).sqrt()))
            .fold((0, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if norm <= tol {
            break;
        }
        let e = residuals[best].map(|x| x / norm);
        for r in residuals.iter_mut() {
            let c = dot(r, &e);
            for k in 0..4 {
                r[k] -= c * e[k];
            }
        }
        basis.push(e);
    }
    basis
}

fn det2(m: [[f64; 2]; 2]) -> f64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

fn det3(m: [[f64; 3]; 3]) -> f64 {
    m[0][0] * det2([[m[1][1], m[1][2]], [m[2][1], m[2][2]]])
        - m[0][1] * det2([[m[1][0], m[1][2]], [m[2][0], m[2][2]]])
        + m[0][2] * det2([[m[1][0], m[1][1]], [m[2][0], m[2][1]]])
}

/// Normal to the `d - 1` row vectors in `R^d` by cofactor expansion.
fn cofactor_normal(rows: &[[f64; 4]], d: usize) -> [f64; 4] {
    let mut n = [0.0; 4];
    match d {
        1 => n[0] = 1.0,
        2 => {
            n[0] = rows[0][1];
            n[1] = -rows[0][0];
        }
        3 => {
            let (a, b) = (rows[0], rows[1]);
            n[0] = a[1] * b[2] - a[2] * b[1];
            n[1] = a[2] * b[0] - a[0] * b[2];
            n[2] = a[0] * b[1] - a[1] * b[0];
        }
        _ => {
            for (col, slot) in n.iter_mut().enumerate() {
                let mut minor = [[0.0; 3]; 3];
                for (r, row) in rows.iter().take(3).enumerate() {
                    let mut c = 0;
                    for (k, &x) in row.iter().enumerate() {
                        if k != col {
                            minor[r][c] = x;
                            c += 1;
                        }
                    }
                }
                let sign = if col % 2 == 0 { 1.0 } else { -1.0 };
                *slot = sign * det3(minor);
            }
        }
    }
    n
}

/// Calls `f` for each `k`-subset of `from..n` in lexicographic order, prefixed by `prefix`.
fn for_each_subset(prefix: &mut Vec<usize>, from: usize, n: usize, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == 0 {
        f(prefix);
        return;
    }
    for i in from..n {
        if n - i < k {
            break;
        }
        prefix.push(i);
        for_each_subset(prefix, i + 1, n, k - 1, f);
        prefix.pop();
    }
}

struct Scan<'a> {
    points: &'a [[f64; 4]],
    d: usize,
    tol: f64,
    normal_tol: f64,
}

impl Scan<'_> {
    /// The supporting hyperplane through `subset`, if there is one.
    fn supporting(&self, subset: &[usize]) -> Option<([f64; 4], f64, Vec<usize>)> {
        let d = self.d;
        let origin = self.points[subset[0]];
        let rows: Vec<[f64; 4]> = subset[1..].iter().map(|&i| sub(&self.points[i], &origin)).collect();
        let mut n = cofactor_normal(&rows, d);
        let norm = dot(&n, &n).sqrt();
        if norm <= self.normal_tol {
            return None;
        }
        n = n.map(|x| x / norm);
        let mut offset = dot(&n, &origin);
        if offset < 0.0 {
            n = n.map(|x| -x);
            offset = -offset;
        }
        if offset <= self.tol {
            return None;
        }
        let mut on = Vec::new();
        for (j, p) in self.points.iter().enumerate() {
            let level = dot(&n, p) - offset;
            if level > self.tol {
                return None;
            }
            if level.abs() <= self.tol {
                on.push(j);
            }
        }
        Some((n, offset, on))
    }
}

/// Affine rank of the given points.
fn affine_rank(points: &[[f64; 4]], tol: f64) -> usize {
    let diffs: Vec<[f64; 4]> = points[1..].iter().map(|p| sub(p, &points[0])).collect();
    span_basis(&diffs, tol).len()
}

/// Facets of the convex hull of `points`, labelled by index.
///
/// When the points span an affine subspace of dimension `d < 4` the facets
/// returned are those of the hull inside that subspace.
pub fn hull(points: &[[f64; 4]], epsilon: f64) -> Result<HullResult> {
    if points.len() < 5 {
        return Err(Error::invalid(format!("hull needs at least 5 points, got {}", points.len())));
    }
    if epsilon.is_nan() || epsilon <= 0.0 {
        return Err(Error::invalid("epsilon must be positive"));
    }
    if points.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::invalid("points must be finite"));
    }
    let n = points.len() as f64;
    let mut centroid = [0.0; 4];
    for p in points {
        for k in 0..4 {
            centroid[k] += p[k] / n;
        }
    }
    let centered: Vec<[f64; 4]> = points.iter().map(|p| sub(p, &centroid)).collect();
    let scale = centered.iter().map(|p| dot(p, p).sqrt()).fold(0.0, f64::max);
    if scale == 0.0 || scale <= epsilon * centroid.iter().map(|x| x.abs()).fold(1.0, f64::max) {
        return Err(Error::invalid("all points coincide"));
    }
    let tol = epsilon * scale;
    let basis = span_basis(&centered, tol);
    let d = basis.len();

    let mut projected = vec![[0.0; 4]; points.len()];
    for (p, y) in centered.iter().zip(projected.iter_mut()) {
        for (k, e) in basis.iter().enumerate() {
            y[k] = dot(p, e);
        }
    }
    let scan = Scan {
        points: &projected,
        d,
        tol,
        normal_tol: epsilon * scale.powi(d as i32 - 1),
    };

    let count = projected.len();
    let found: Vec<([f64; 4], f64, Vec<usize>)> = (0..count)
        .into_par_iter()
        .flat_map_iter(|first| {
            let mut local = Vec::new();
            let mut prefix = vec![first];
            for_each_subset(&mut prefix, first + 1, count, d - 1, &mut |subset| {
                if let Some(plane) = scan.supporting(subset) {
                    // A facet with more than d points is found once per
                    // spanning subset; keep only the copy that starts at its
                    // smallest label to thin the merge.
                    if plane.2[0] == first {
                        local.push(plane);
                    }
                }
            });
            local
        })
        .collect();

    let mut merged: BTreeMap<Vec<usize>, ([f64; 4], f64)> = BTreeMap::new();
    for (normal, offset, vertices) in found {
        merged.entry(vertices).or_insert((normal, offset));
    }

    let mut facets = Vec::with_capacity(merged.len());
    for (vertices, (normal, offset)) in merged {
        let members: Vec<[f64; 4]> = vertices.iter().map(|&i| projected[i]).collect();
        if affine_rank(&members, tol) + 1 != d {
            continue;
        }
        let mut ambient = [0.0; 4];
        for (k, e) in basis.iter().enumerate() {
            for c in 0..4 {
                ambient[c] += normal[k] * e[c];
            }
        }
        facets.push(OracleFacet {
            vertices,
            normal: ambient,
            offset: offset + dot(&ambient, &centroid),
        });
    }

    let degeneracy_note = (d < 4).then(|| {
        format!("points span an affine subspace of dimension {d}; facets are taken inside that subspace")
    });
    Ok(HullResult {
        dimension: d,
        facets,
        degeneracy_note,
    })
}

/// Facet sets present on one side only.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacetDiff {
    /// Oracle facets the prediction lacks.
    pub missing: Vec<Vec<usize>>,
    /// Predicted facets the oracle does not have.
    pub unexpected: Vec<Vec<usize>>,
}

impl FacetDiff {
    pub fn is_empty(&self) -> bool {
        self.missing.is_empty() && self.unexpected.is_empty()
    }

    pub fn between(predicted: &BTreeSet<Vec<usize>>, oracle: &BTreeSet<Vec<usize>>) -> Self {
        FacetDiff {
            missing: oracle.difference(predicted).cloned().collect(),
            unexpected: predicted.difference(oracle).cloned().collect(),
        }
    }
}

pub fn compare(predicted: &Triangulation, oracle: &HullResult) -> FacetDiff {
    FacetDiff::between(&predicted.facet_sets(), &oracle.facet_sets())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn simplex() -> Vec<[f64; 4]> {
        vec![
            [0.0, 0.0, 0.0, 0.0],
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ]
    }

    #[test]
    fn simplex_facets() {
        let h = hull(&simplex(), DEFAULT_EPSILON).unwrap();
        assert_eq!(h.dimension, 4);
        assert_eq!(h.facets.len(), 5);
        for (i, f) in h.facets.iter().enumerate() {
            assert_eq!(f.vertices.len(), 4);
            assert!(!f.vertices.contains(&(4 - i)));
        }
    }

    #[test]
    fn hypercube_merges_coplanar_points() {
        let mut pts = Vec::new();
        for bits in 0..16u32 {
            pts.push([0, 1, 2, 3].map(|k| ((bits >> k) & 1) as f64));
        }
        let h = hull(&pts, DEFAULT_EPSILON).unwrap();
        assert_eq!(h.dimension, 4);
        assert_eq!(h.facets.len(), 8);
        assert!(h.facets.iter().all(|f| f.vertices.len() == 8));
        for f in &h.facets {
            let norm = dot(&f.normal, &f.normal).sqrt();
            assert!((norm - 1.0).abs() < 1e-12);
            for &v in &f.vertices {
                assert!((dot(&f.normal, &pts[v]) - f.offset).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn planar_polygon() {
        let pts: Vec<[f64; 4]> = (0..6)
            .map(|k| {
                let a = std::f64::consts::TAU * k as f64 / 6.0;
                [a.cos(), a.sin(), 1.0, 2.0]
            })
            .collect();
        let h = hull(&pts, DEFAULT_EPSILON).unwrap();
        assert_eq!(h.dimension, 2);
        assert_eq!(h.facets.len(), 6);
        assert!(h.degeneracy_note.is_some());
    }

    #[test]
    fn interior_point_is_not_a_vertex() {
        let mut pts = simplex();
        pts.push([0.1, 0.1, 0.1, 0.1]);
        let h = hull(&pts, DEFAULT_EPSILON).unwrap();
        assert_eq!(h.facets.len(), 5);
        assert!(h.facets.iter().all(|f| !f.vertices.contains(&5)));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(hull(&simplex()[..4], DEFAULT_EPSILON).is_err());
        assert!(hull(&[[1.0, 2.0, 3.0, 4.0]; 6], DEFAULT_EPSILON).is_err());
        assert!(hull(&simplex(), 0.0).is_err());
    }

    #[test]
    fn diff_reports_both_directions() {
        let a: BTreeSet<Vec<usize>> = [vec![0, 1], vec![1, 2]].into_iter().collect();
        let b: BTreeSet<Vec<usize>> = [vec![1, 2], vec![2, 3]].into_iter().collect();
        let d = FacetDiff::between(&a, &b);
        assert_eq!(d.missing, vec![vec![2, 3]]);
        assert_eq!(d.unexpected, vec![vec![0, 1]]);
        assert!(!d.is_empty());
    }
}
