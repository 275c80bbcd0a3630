//! Predicted facet list of the hull, built from Farey pairs and the group
//! action, together with the ridge-adjacency structure.

use crate::certify::SupportForm;
use crate::error::{Error, Result};
use crate::group::{orbit, Degeneracy, GroupSpec, Orbit};
use crate::rationals::{continued_fraction, enumerate_pairs, FareyPair};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

/// Which circle factor carries the polygonal bases of a cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Axis {
    First,
    Second,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum FacetKind {
    /// `x_g, x_{g+a}, x_{g+b}, x_{g+a+b}` for `pairs[pair]` translated by group element `translate`.
    Tetra { pair: usize, translate: usize },
    /// Two regular `size`-gons on the `axis` circle, rotated against each other.
    /// `size = 2` is the tetrahedral degeneration.
    Antiprism { axis: Axis, size: usize, translate: usize },
    /// An edge of one polygon times the `size`-gon on the `axis` circle.
    Prism { axis: Axis, size: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Facet {
    /// Sorted orbit labels.
    pub vertices: Vec<usize>,
    pub kind: FacetKind,
    pub support: Option<SupportForm>,
}

#[derive(Clone, Debug)]
pub struct Triangulation {
    pub spec: GroupSpec,
    pub orbit: Orbit,
    pub pairs: Vec<FareyPair>,
    pub facets: Vec<Facet>,
    /// Each 2-face (sorted labels) to the facets containing it.
    pub ridges: BTreeMap<Vec<usize>, Vec<usize>>,
}

impl Triangulation {
    pub fn facet_sets(&self) -> BTreeSet<Vec<usize>> {
        self.facets.iter().map(|f| f.vertices.clone()).collect()
    }

    /// Ridges not bounded by exactly two facets.
    pub fn ridge_defects(&self) -> Vec<(&Vec<usize>, usize)> {
        self.ridges
            .iter()
            .filter(|(_, fs)| fs.len() != 2)
            .map(|(r, fs)| (r, fs.len()))
            .collect()
    }

    pub fn is_pseudo_manifold(&self) -> bool {
        !self.ridges.is_empty() && self.ridge_defects().is_empty()
    }

    /// True iff the facet adjacency graph (facets sharing a ridge) is connected.
    pub fn is_connected(&self) -> bool {
        let n = self.facets.len();
        if n == 0 {
            return false;
        }
        let mut adjacency = vec![Vec::new(); n];
        for fs in self.ridges.values() {
            for &i in fs {
                for &j in fs {
                    if i != j {
                        adjacency[i].push(j);
                    }
                }
            }
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(i) = queue.pop_front() {
            for &j in &adjacency[i] {
                if !seen[j] {
                    seen[j] = true;
                    count += 1;
                    queue.push_back(j);
                }
            }
        }
        count == n
    }
}

/// `p⁻¹ mod q`.
fn mod_inverse(p: i64, q: i64) -> i64 {
    if q == 1 {
        return 0;
    }
    let (mut r0, mut r1) = (q, p.rem_euclid(q));
    let (mut s0, mut s1) = (0i64, 1i64);
    while r1 != 0 {
        let k = r0 / r1;
        (r0, r1) = (r1, r0 - k * r1);
        (s0, s1) = (s1, s0 - k * s1);
    }
    debug_assert_eq!(r0, 1);
    s0.rem_euclid(q)
}

/// Integer angle cells `(S, T)` of the tetrahedron spanned by `pair` at the base point.
pub fn tetra_cells(pair: &FareyPair) -> [(i64, i64); 4] {
    let (fo, so) = (pair.first_offset(), pair.second_offset());
    [(0, 0), (pair.a, fo), (pair.b, so), (pair.a + pair.b, fo + so)]
}

/// Cells of the `2ν`-vertex antiprism (`axis = Second`) or the `2μ`-vertex one
/// (`axis = First`) at the base point.
///
/// The second-axis cell is `{(0, k/ν)} ∪ {(1/(qμ), (p+kq)/(qν))}`. Its
/// first-axis analogue is obtained by exchanging the circles, which replaces
/// `p` by `p⁻¹ mod q`.
pub fn antiprism_cells(spec: &GroupSpec, axis: Axis) -> Vec<(i64, i64)> {
    let q = spec.q();
    match axis {
        Axis::Second => (0..spec.nu())
            .flat_map(|k| [(0, k * q), (1, spec.p() + k * q)])
            .collect(),
        Axis::First => {
            let p_inv = mod_inverse(spec.p(), q);
            (0..spec.mu())
                .flat_map(|k| [(k * q, 0), (p_inv + k * q, 1)])
                .collect()
        }
    }
}

fn along(orbit: &Orbit, i: usize, axis: Axis) -> i64 {
    let (s, t) = orbit.cell(i);
    match axis {
        Axis::First => s,
        Axis::Second => t,
    }
}

fn across(orbit: &Orbit, i: usize, axis: Axis) -> i64 {
    let (s, t) = orbit.cell(i);
    match axis {
        Axis::First => t,
        Axis::Second => s,
    }
}

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v
}

/// The 2-faces of a facet, each as a sorted label set.
pub fn facet_ridges(orbit: &Orbit, facet: &Facet) -> Vec<Vec<usize>> {
    let vs = &facet.vertices;
    match facet.kind {
        FacetKind::Tetra { .. } => (0..vs.len())
            .map(|skip| {
                vs.iter()
                    .enumerate()
                    .filter(|&(i, _)| i != skip)
                    .map(|(_, &v)| v)
                    .collect()
            })
            .collect(),
        FacetKind::Antiprism { axis, size, .. } => {
            let mut ring = vs.clone();
            ring.sort_by_key(|&v| along(orbit, v, axis));
            let n = ring.len();
            let mut out: Vec<Vec<usize>> = (0..n)
                .map(|i| sorted(vec![ring[i], ring[(i + 1) % n], ring[(i + 2) % n]]))
                .collect();
            if size >= 3 {
                out.extend(bases(orbit, vs, axis));
            }
            out
        }
        FacetKind::Prism { axis, size } => {
            let mut levels: Vec<i64> = vs.iter().map(|&v| along(orbit, v, axis)).collect();
            levels.sort_unstable();
            levels.dedup();
            let n = levels.len();
            let mut out: Vec<Vec<usize>> = (0..n)
                .map(|i| {
                    let pair = [levels[i], levels[(i + 1) % n]];
                    sorted(
                        vs.iter()
                            .copied()
                            .filter(|&v| pair.contains(&along(orbit, v, axis)))
                            .collect(),
                    )
                })
                .collect();
            if size >= 3 {
                out.extend(bases(orbit, vs, axis));
            }
            out
        }
    }
}

/// The two polygonal bases: vertices grouped by their coordinate across `axis`.
fn bases(orbit: &Orbit, vs: &[usize], axis: Axis) -> Vec<Vec<usize>> {
    let mut groups: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for &v in vs {
        groups.entry(across(orbit, v, axis)).or_default().push(v);
    }
    groups.into_values().map(sorted).collect()
}

fn build_ridges(orbit: &Orbit, facets: &[Facet]) -> BTreeMap<Vec<usize>, Vec<usize>> {
    let mut ridges: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for (i, f) in facets.iter().enumerate() {
        for r in facet_ridges(orbit, f) {
            ridges.entry(r).or_default().push(i);
        }
    }
    ridges
}

/// Adds every group translate of a base cell, skipping vertex sets already present.
fn push_translates(
    orbit: &Orbit,
    base: &[(i64, i64)],
    kind: impl Fn(usize) -> FacetKind,
    seen: &mut HashSet<Vec<usize>>,
    facets: &mut Vec<Facet>,
) {
    let base: Vec<usize> = base
        .iter()
        .map(|&(s, t)| orbit.index_of(s, t).expect("cell belongs to Γ"))
        .collect();
    for g in 0..orbit.len() {
        let vertices = sorted(base.iter().map(|&v| orbit.translate(v, g)).collect());
        if seen.insert(vertices.clone()) {
            facets.push(Facet {
                vertices,
                kind: kind(g),
                support: None,
            });
        }
    }
}

fn finish(spec: GroupSpec, orbit: Orbit, pairs: Vec<FareyPair>, mut facets: Vec<Facet>) -> Triangulation {
    facets.sort_by(|x, y| x.vertices.cmp(&y.vertices));
    let ridges = build_ridges(&orbit, &facets);
    Triangulation {
        spec,
        orbit,
        pairs,
        facets,
        ridges,
    }
}

/// The Farey pairs indexing tetrahedra for `spec`: those of the cyclic theory,
/// plus `{0/1, 1/1}` when `ν > 1` and the pair with mediant `p/q` when `μ > 1`.
pub fn pairs_for(spec: &GroupSpec) -> Result<Vec<FareyPair>> {
    if !spec.is_generic() {
        return Err(Error::Degenerate(spec.degeneracy()));
    }
    enumerate_pairs(spec.ratio(), spec.nu() > 1, spec.mu() > 1)
}

/// Predicted facets of the hull of the orbit of a generic group.
pub fn predict(spec: &GroupSpec) -> Result<Triangulation> {
    let pairs = pairs_for(spec)?;
    let orbit = orbit(spec);
    let mut seen = HashSet::new();
    let mut facets = Vec::new();
    for (index, pair) in pairs.iter().enumerate() {
        push_translates(
            &orbit,
            &tetra_cells(pair),
            |g| FacetKind::Tetra {
                pair: index,
                translate: g,
            },
            &mut seen,
            &mut facets,
        );
    }
    for (axis, size) in [(Axis::Second, spec.nu()), (Axis::First, spec.mu())] {
        if size > 1 {
            push_translates(
                &orbit,
                &antiprism_cells(spec, axis),
                |g| FacetKind::Antiprism {
                    axis,
                    size: size as usize,
                    translate: g,
                },
                &mut seen,
                &mut facets,
            );
        }
    }
    Ok(finish(*spec, orbit, pairs, facets))
}

/// Prism facets of the product of a regular `μ`-gon and `ν`-gon (`p/q = 0`,
/// `μ, ν >= 3`).
pub fn predict_product(spec: &GroupSpec) -> Result<Triangulation> {
    if spec.degeneracy() != Degeneracy::ProductOfPolygons || spec.mu() < 3 || spec.nu() < 3 {
        return Err(Error::invalid(
            "prism facets need p/q = 0 with mu, nu >= 3",
        ));
    }
    let orbit = orbit(spec);
    let (mu, nu) = (spec.mu(), spec.nu());
    let mut facets = Vec::new();
    for j in 0..mu {
        let vertices = (0..nu)
            .flat_map(|k| [(j, k), (j + 1, k)])
            .map(|(s, t)| orbit.index_of(s, t).expect("product cell"))
            .collect();
        facets.push(Facet {
            vertices: sorted(vertices),
            kind: FacetKind::Prism {
                axis: Axis::Second,
                size: nu as usize,
            },
            support: None,
        });
    }
    for k in 0..nu {
        let vertices = (0..mu)
            .flat_map(|j| [(j, k), (j, k + 1)])
            .map(|(s, t)| orbit.index_of(s, t).expect("product cell"))
            .collect();
        facets.push(Facet {
            vertices: sorted(vertices),
            kind: FacetKind::Prism {
                axis: Axis::First,
                size: mu as usize,
            },
            support: None,
        });
    }
    Ok(finish(*spec, orbit, Vec::new(), facets))
}

/// Number of distinct translates of the tetrahedron of `pair`: the group order
/// divided by the number of vertex offsets that map the cell onto itself.
fn tetra_orbit_size(spec: &GroupSpec, pair: &FareyPair) -> i64 {
    let (fm, sm) = (spec.first_modulus(), spec.second_modulus());
    let norm = |(s, t): (i64, i64)| (s.rem_euclid(fm), t.rem_euclid(sm));
    let cells = tetra_cells(pair);
    let set: BTreeSet<_> = cells.iter().copied().map(norm).collect();
    let stabilizer = cells
        .iter()
        .filter(|&&(ds, dt)| {
            cells
                .iter()
                .all(|&(s, t)| set.contains(&norm((s + ds, t + dt))))
        })
        .count() as i64;
    spec.order() / stabilizer
}

/// Facet count from the Farey data alone: `q(n-3)` in the cyclic case,
/// otherwise pair-orbit sizes plus `qμ` (resp. `qν`) antiprisms when `ν > 1`
/// (resp. `μ > 1`).
pub fn predicted_facet_count(spec: &GroupSpec) -> Result<usize> {
    if !spec.is_generic() {
        return Err(Error::Degenerate(spec.degeneracy()));
    }
    if spec.mu() == 1 && spec.nu() == 1 {
        let n = continued_fraction(spec.ratio())?.n;
        return Ok((spec.q() * (n - 3)) as usize);
    }
    let pairs = pairs_for(spec)?;
    let mut count: i64 = pairs.iter().map(|p| tetra_orbit_size(spec, p)).sum();
    if spec.nu() > 1 {
        count += spec.q() * spec.mu();
    }
    if spec.mu() > 1 {
        count += spec.q() * spec.nu();
    }
    Ok(count as usize)
}
