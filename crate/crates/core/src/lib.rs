//! Delaunay triangulations of lens spaces from convex hulls of torus-subgroup
//! orbits in R⁴.
//!
//! A finite subgroup `Γ` of the torus acts on `x₀ = (1, 0, 1, 0)`; the facets of
//! the convex hull of the orbit project to the Delaunay cells of the quotient.
//! [`predictor`] lists those facets from Farey data alone, [`certify`] proves
//! each one supports the hull with closed-form hyperplanes, and [`hull`] is a
//! brute-force oracle to compare against.
//!
//! ```
//! use lenshull_core::{predict, hull, compare, GroupSpec, DEFAULT_EPSILON};
//!
//! let spec = GroupSpec::cyclic(2, 7).unwrap();
//! let tri = predict(&spec).unwrap();
//! assert_eq!(tri.facets.len(), 14);
//! let oracle = hull(&tri.orbit.coords(), DEFAULT_EPSILON).unwrap();
//! assert!(compare(&tri, &oracle).is_empty());
//! ```

pub mod certify;
pub mod error;
pub mod export;
pub mod group;
pub mod hull;
pub mod predictor;
pub mod rationals;

pub use certify::{
    certify, certify_pair, det_m, level_curve_check, lattice_points_check, support_form, verify_inequalities,
    CertificateReport, CertificationSummary, DetM, InequalityReport, LatticeCheck, SupportForm, DEFAULT_SAMPLES,
};
pub use error::{Error, Result};
pub use export::{SphericalCell, TriangulationDocument};
pub use group::{canonicalize, lattice_data, orbit, Degeneracy, GroupSpec, LatticeData, Orbit, TorusPoint};
pub use hull::{compare, hull, FacetDiff, HullResult, OracleFacet, DEFAULT_EPSILON, DEFAULT_POINT_CAP};
pub use predictor::{predict, predict_product, predicted_facet_count, Axis, Facet, FacetKind, Triangulation};
pub use rationals::{continued_fraction, derive_invariants, enumerate_pairs, wedge, ContinuedFraction, FareyPair, Fraction};
