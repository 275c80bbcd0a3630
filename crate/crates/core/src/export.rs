//! Serialization of triangulations: a JSON document, 4OFF and a CSV facet table.
//!
//! Floats are written with 17 significant digits so that output is
//! byte-identical across runs and round-trips exactly.

use crate::certify::{CertificationSummary, SupportForm};
use crate::error::{Error, Result};
use crate::group::{Degeneracy, OrbitLabel};
use crate::predictor::{FacetKind, Triangulation};
use crate::rationals::FareyPair;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::f64::consts::SQRT_2;
use std::fmt::Write as _;
use std::io;

/// Radial projection of a facet to the sphere: a spherical cap whose boundary
/// passes through the facet's vertices.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SphericalCell {
    /// `ρ/‖ρ‖`.
    pub center: [f64; 4],
    /// Angular radius `arccos(Z/(√2‖ρ‖))`.
    pub radius: f64,
}

impl SphericalCell {
    /// The cap cut out by `{ρ·x = Z}` on the sphere of radius `√2`.
    pub fn from_support(form: &SupportForm) -> Self {
        let norm = form.norm();
        SphericalCell {
            center: form.coefficients().map(|c| c / norm),
            radius: (form.z / (SQRT_2 * norm)).clamp(-1.0, 1.0).acos(),
        }
    }

    /// Angle between the center and `x`.
    pub fn angle_to(&self, x: &[f64; 4]) -> f64 {
        let norm = x.iter().map(|c| c * c).sum::<f64>().sqrt();
        let cos = self.center.iter().zip(x).map(|(a, b)| a * b).sum::<f64>() / norm;
        cos.clamp(-1.0, 1.0).acos()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpecDocument {
    pub p: i64,
    pub q: i64,
    pub mu: i64,
    pub nu: i64,
    pub degeneracy: Degeneracy,
    pub order: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointDocument {
    pub label: OrbitLabel,
    pub coords: [f64; 4],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FacetDocument {
    pub vertices: Vec<usize>,
    pub kind: FacetKind,
    pub support: Option<SupportForm>,
    pub cell: Option<SphericalCell>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RidgeDocument {
    pub vertices: Vec<usize>,
    pub facets: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TriangulationDocument {
    pub spec: SpecDocument,
    pub unit_sphere: bool,
    pub points: Vec<PointDocument>,
    pub pairs: Vec<FareyPair>,
    pub facets: Vec<FacetDocument>,
    pub ridges: Vec<RidgeDocument>,
    pub report: Option<CertificationSummary>,
}

impl TriangulationDocument {
    /// Builds the document; with `unit_sphere` the points and levels `Z` are
    /// scaled by `1/√2` while directions and angular radii are unchanged.
    pub fn new(tri: &Triangulation, report: Option<CertificationSummary>, unit_sphere: bool) -> Self {
        let scale = if unit_sphere { 1.0 / SQRT_2 } else { 1.0 };
        let spec = &tri.spec;
        TriangulationDocument {
            spec: SpecDocument {
                p: spec.p(),
                q: spec.q(),
                mu: spec.mu(),
                nu: spec.nu(),
                degeneracy: spec.degeneracy(),
                order: spec.order(),
            },
            unit_sphere,
            points: tri
                .orbit
                .points()
                .iter()
                .map(|pt| PointDocument {
                    label: pt.label,
                    coords: pt.coords.map(|c| c * scale),
                })
                .collect(),
            pairs: tri.pairs.clone(),
            facets: tri
                .facets
                .iter()
                .map(|f| FacetDocument {
                    vertices: f.vertices.clone(),
                    kind: f.kind,
                    support: f.support.map(|s| SupportForm { z: s.z * scale, ..s }),
                    cell: f.support.as_ref().map(SphericalCell::from_support),
                })
                .collect(),
            ridges: tri
                .ridges
                .iter()
                .map(|(v, f)| RidgeDocument {
                    vertices: v.clone(),
                    facets: f.clone(),
                })
                .collect(),
            report,
        }
    }

    pub fn facet_sets(&self) -> BTreeSet<Vec<usize>> {
        self.facets.iter().map(|f| f.vertices.clone()).collect()
    }
}

/// Writes every finite float as `d.dddddddddddddddde±x`.
struct FixedDigits;

impl serde_json::ser::Formatter for FixedDigits {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

/// Compact JSON with 17 significant digits for every float.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, FixedDigits);
    value
        .serialize(&mut ser)
        .map_err(|e| Error::invalid(format!("JSON encoding failed: {e}")))?;
    String::from_utf8(out).map_err(|e| Error::violation(e.to_string()))
}

pub fn from_json(text: &str) -> Result<TriangulationDocument> {
    serde_json::from_str(text).map_err(|e| Error::invalid(format!("JSON decoding failed: {e}")))
}

/// 4-dimensional OFF: header, counts (vertices, facets, ridges, edges), vertex
/// coordinates, then one line per facet with its vertex count and labels.
pub fn to_off4(doc: &TriangulationDocument) -> String {
    let mut out = String::from("4OFF\n");
    let _ = writeln!(out, "{} {} {} 0", doc.points.len(), doc.facets.len(), doc.ridges.len());
    for p in &doc.points {
        let coords: Vec<String> = p.coords.iter().map(|c| format!("{c:.16e}")).collect();
        let _ = writeln!(out, "{}", coords.join(" "));
    }
    for f in &doc.facets {
        let labels: Vec<String> = f.vertices.iter().map(usize::to_string).collect();
        let _ = writeln!(out, "{} {}", f.vertices.len(), labels.join(" "));
    }
    out
}

fn kind_name(kind: &FacetKind) -> &'static str {
    match kind {
        FacetKind::Tetra { .. } => "tetra",
        FacetKind::Antiprism { .. } => "antiprism",
        FacetKind::Prism { .. } => "prism",
    }
}

/// One row per facet: kind, space-separated vertex labels, `Z`, angular radius.
pub fn to_csv(doc: &TriangulationDocument) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    let fail = |e: csv::Error| Error::invalid(format!("CSV encoding failed: {e}"));
    writer.write_record(["kind", "vertices", "Z", "angular_radius"]).map_err(fail)?;
    for f in &doc.facets {
        let labels: Vec<String> = f.vertices.iter().map(usize::to_string).collect();
        let z = f.support.map(|s| format!("{:.16e}", s.z)).unwrap_or_default();
        let r = f.cell.map(|c| format!("{:.16e}", c.radius)).unwrap_or_default();
        writer
            .write_record([kind_name(&f.kind), labels.join(" ").as_str(), z.as_str(), r.as_str()])
            .map_err(fail)?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| Error::invalid(format!("CSV encoding failed: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::violation(e.to_string()))
}
