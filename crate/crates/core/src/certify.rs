//! Closed-form supporting hyperplanes for predicted facets and the inequality
//! certificates showing they support the hull.
//!
//! For a pair `{A, B}` the tetrahedron `x_0 x_a x_b x_{a+b}` is supported by the
//! linear form `ρ = (U, U', V, V')` at level `Z`. The level set of `ρ∘ι` on the
//! torus is a convex curve whenever `|V″ - U″| < Z < V″ + U″`, where
//! `U″ = |(U, U')|` and `V″ = |(V, V')|`, and convexity keeps every other orbit
//! point strictly below `Z`.
//!
//! Every trigonometric inequality is evaluated in double precision and must
//! hold with margin [`MARGIN`]; the integer inequalities are checked exactly.

use crate::error::{Error, Result};
use crate::group::{embed, lattice_data, GroupSpec, Orbit};
use crate::predictor::{tetra_cells, Axis, Facet, FacetKind, Triangulation};
use crate::rationals::{FareyPair, Fraction};
use nalgebra::{Matrix4, Vector4};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Strictness margin for analytic inequalities.
pub const MARGIN: f64 = 1e-9;
/// Tolerance for identities between closed forms and point evaluations.
pub const IDENTITY_TOL: f64 = 1e-10;
pub const DEFAULT_SAMPLES: usize = 4096;

/// `sin(π·n/d)` with `n` reduced modulo `2d` first.
fn sin_pi(n: i64, d: i64) -> f64 {
    (PI * n.rem_euclid(2 * d) as f64 / d as f64).sin()
}

fn cos_pi(n: i64, d: i64) -> f64 {
    (PI * n.rem_euclid(2 * d) as f64 / d as f64).cos()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupportForm {
    #[serde(rename = "U")]
    pub u: f64,
    #[serde(rename = "Uprime")]
    pub u_prime: f64,
    #[serde(rename = "V")]
    pub v: f64,
    #[serde(rename = "Vprime")]
    pub v_prime: f64,
    #[serde(rename = "Z")]
    pub z: f64,
    #[serde(rename = "Udd")]
    pub udd: f64,
    #[serde(rename = "Vdd")]
    pub vdd: f64,
}

impl SupportForm {
    pub fn new(u: f64, u_prime: f64, v: f64, v_prime: f64, z: f64) -> Self {
        SupportForm {
            u,
            u_prime,
            v,
            v_prime,
            z,
            udd: u.hypot(u_prime),
            vdd: v.hypot(v_prime),
        }
    }

    pub fn coefficients(&self) -> [f64; 4] {
        [self.u, self.u_prime, self.v, self.v_prime]
    }

    pub fn eval(&self, x: &[f64; 4]) -> f64 {
        self.u * x[0] + self.u_prime * x[1] + self.v * x[2] + self.v_prime * x[3]
    }

    pub fn norm(&self) -> f64 {
        self.udd.hypot(self.vdd)
    }

    /// `Z > 0` and `|V″ - U″| < Z < V″ + U″`, each with margin [`MARGIN`].
    pub fn triangle_inequalities_hold(&self) -> bool {
        self.z > MARGIN
            && self.z - (self.vdd - self.udd).abs() > MARGIN
            && self.udd + self.vdd - self.z > MARGIN
    }

    /// The form supporting the translated cell: both coefficient planes rotate
    /// with the translation, so `ρ_g(ι(w + g)) = ρ(ι(w))`.
    pub fn rotated(&self, first_angle: f64, second_angle: f64) -> SupportForm {
        let (s1, c1) = first_angle.sin_cos();
        let (s2, c2) = second_angle.sin_cos();
        SupportForm::new(
            self.u * c1 - self.u_prime * s1,
            self.u * s1 + self.u_prime * c1,
            self.v * c2 - self.v_prime * s2,
            self.v * s2 + self.v_prime * c2,
            self.z,
        )
    }
}

/// `ρ` and `Z` from the general closed forms, without any checking.
fn closed_form(spec: &GroupSpec, pair: &FareyPair) -> SupportForm {
    let (fm, sm) = (spec.first_modulus(), spec.second_modulus());
    let (a, b) = (pair.a, pair.b);
    let (fo, so) = (pair.first_offset(), pair.second_offset());
    let lift_sines = sin_pi(fo, sm) * sin_pi(so, sm);
    let base_sines = sin_pi(a, fm) * sin_pi(b, fm);
    let u = -cos_pi(a + b, fm) * lift_sines;
    let u_prime = -sin_pi(a + b, fm) * lift_sines;
    let v = cos_pi(fo + so, sm) * base_sines;
    let v_prime = sin_pi(fo + so, sm) * base_sines;
    // ρ·x₀ with x₀ = (1, 0, 1, 0)
    SupportForm::new(u, u_prime, v, v_prime, u + v)
}

/// The cyclic-case form written with the sign `(-1)^(α+β)` and unreduced
/// angles `apπ/q`, `bpπ/q`. Only meaningful for `μ = ν = 1`.
fn cyclic_closed_form(spec: &GroupSpec, pair: &FareyPair) -> SupportForm {
    let (p, q) = (spec.p(), spec.q());
    let (a, b) = (pair.a, pair.b);
    let sign = if (pair.first.num() + pair.second.num()) % 2 == 0 { 1.0 } else { -1.0 };
    let lift_sines = sin_pi(a * p, q) * sin_pi(b * p, q);
    let base_sines = sin_pi(a, q) * sin_pi(b, q);
    let u = sign * -cos_pi(a + b, q) * lift_sines;
    let u_prime = sign * -sin_pi(a + b, q) * lift_sines;
    let v = sign * cos_pi((a + b) * p, q) * base_sines;
    let v_prime = sign * sin_pi((a + b) * p, q) * base_sines;
    let z = sign * (cos_pi((a + b) * p, q) * base_sines - cos_pi(a + b, q) * lift_sines);
    SupportForm::new(u, u_prime, v, v_prime, z)
}

/// `½(cos(x'π/(qν))·cos(yπ/(qμ)) - cos(xπ/(qμ))·cos(y'π/(qν)))`.
pub fn z_from_wedges(spec: &GroupSpec, pair: &FareyPair) -> f64 {
    let (fm, sm) = (spec.first_modulus(), spec.second_modulus());
    0.5 * (cos_pi(pair.x_prime, sm) * cos_pi(pair.y, fm) - cos_pi(pair.x, fm) * cos_pi(pair.y_prime, sm))
}

/// The two factors of the `U″`, `V″` closed forms: `sin(a'π/(qν))sin(b'π/(qν))`
/// and `sin(aπ/(qμ))sin(bπ/(qμ))`.
fn norm_closed_forms(spec: &GroupSpec, pair: &FareyPair) -> (f64, f64) {
    let (fm, sm) = (spec.first_modulus(), spec.second_modulus());
    (
        sin_pi(pair.a_prime, sm) * sin_pi(pair.b_prime, sm),
        sin_pi(pair.a, fm) * sin_pi(pair.b, fm),
    )
}

/// The four candidate-face vertices `x_0, x_a, x_b, x_{a+b}`.
pub fn tetra_vertices(spec: &GroupSpec, pair: &FareyPair) -> [[f64; 4]; 4] {
    let (fm, sm) = (spec.first_modulus(), spec.second_modulus());
    tetra_cells(pair).map(|(s, t)| embed(s, fm, t, sm))
}

fn check_pair(spec: &GroupSpec, pair: &FareyPair) -> Result<()> {
    if !spec.is_generic() {
        return Err(Error::Degenerate(spec.degeneracy()));
    }
    if pair.target != spec.ratio() {
        return Err(Error::invalid(format!(
            "pair {pair} belongs to slope {}, not {}",
            pair.target,
            spec.ratio()
        )));
    }
    Ok(())
}

/// The determinant of the candidate-face matrix by three routes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetM {
    /// Direct 4×4 evaluation.
    pub direct: f64,
    /// `4·det(cos block)·det(sin block)` after rotating to the parallelogram center.
    pub factored: f64,
    /// `16·F1·F2`, the two factors whose non-vanishing is the tangent inequality.
    pub expanded: f64,
}

impl DetM {
    /// `|det|` after scaling the columns (norm `√2`) to unit length.
    pub fn normalized(&self) -> f64 {
        self.direct.abs() / 4.0
    }

    pub fn routes_agree(&self) -> bool {
        let scale = self.direct.abs().max(1e-300);
        (self.direct.abs() - self.factored.abs()).abs() <= 1e-9 * scale
            && (self.direct.abs() - self.expanded.abs()).abs() <= 1e-9 * scale
    }
}

/// The factors `F1 = cos A cos B sin A' sin B' + sin A sin B cos A' cos B'` and
/// `F2 = sin A cos B sin B' cos A' + sin B cos A sin A' cos B'`.
fn det_factors(spec: &GroupSpec, pair: &FareyPair) -> (f64, f64) {
    let (fm, sm) = (spec.first_modulus(), spec.second_modulus());
    let (sa, ca) = (sin_pi(pair.a, fm), cos_pi(pair.a, fm));
    let (sb, cb) = (sin_pi(pair.b, fm), cos_pi(pair.b, fm));
    let (sa2, ca2) = (sin_pi(pair.a_prime, sm), cos_pi(pair.a_prime, sm));
    let (sb2, cb2) = (sin_pi(pair.b_prime, sm), cos_pi(pair.b_prime, sm));
    (
        ca * cb * sa2 * sb2 + sa * sb * ca2 * cb2,
        sa * cb * sb2 * ca2 + sb * ca * sa2 * cb2,
    )
}

pub fn det_m(spec: &GroupSpec, pair: &FareyPair) -> Result<DetM> {
    check_pair(spec, pair)?;
    let cols = tetra_vertices(spec, pair).map(Vector4::from);
    let direct = Matrix4::from_columns(&cols).determinant();

    let (fm, sm) = (spec.first_modulus(), spec.second_modulus());
    let (a, b) = (pair.a, pair.b);
    let (a2, b2) = (pair.a_prime, pair.b_prime);
    let cos_block = cos_pi(a + b, fm) * cos_pi(a2 + b2, sm) - cos_pi(a - b, fm) * cos_pi(a2 - b2, sm);
    let sin_block = sin_pi(a - b, fm) * sin_pi(a2 - b2, sm) - sin_pi(a + b, fm) * sin_pi(a2 + b2, sm);
    let (f1, f2) = det_factors(spec, pair);
    Ok(DetM {
        direct,
        factored: 4.0 * cos_block * sin_block,
        expanded: 16.0 * f1 * f2,
    })
}

/// Closed-form `(ρ, Z)` for the tetrahedron of `pair`, cross-checked against
/// the point evaluations, the half-angle expression for `Z`, the closed forms
/// of `U″` and `V″`, and (cyclic case) the signed form.
pub fn support_form(spec: &GroupSpec, pair: &FareyPair) -> Result<SupportForm> {
    check_pair(spec, pair)?;
    let form = closed_form(spec, pair);
    let tol = |x: f64| IDENTITY_TOL * x.abs().max(1.0);

    for (i, x) in tetra_vertices(spec, pair).iter().enumerate() {
        let level = form.eval(x);
        if (level - form.z).abs() > tol(form.z) {
            return Err(Error::violation(format!(
                "{pair}: ρ·x at vertex {i} is {level}, expected Z = {}",
                form.z
            )));
        }
    }
    let z_half = z_from_wedges(spec, pair);
    if (z_half - form.z).abs() > tol(form.z) {
        return Err(Error::violation(format!(
            "{pair}: Z = {} but the wedge form gives {z_half}",
            form.z
        )));
    }
    let (udd, vdd) = norm_closed_forms(spec, pair);
    if (udd - form.udd).abs() > tol(udd) || (vdd - form.vdd).abs() > tol(vdd) {
        return Err(Error::violation(format!("{pair}: U″/V″ closed forms disagree")));
    }
    if spec.mu() == 1 && spec.nu() == 1 {
        let signed = cyclic_closed_form(spec, pair);
        let same = form
            .coefficients()
            .iter()
            .chain([form.z].iter())
            .zip(signed.coefficients().iter().chain([signed.z].iter()))
            .all(|(x, y)| (x - y).abs() <= IDENTITY_TOL);
        if !same {
            return Err(Error::violation(format!("{pair}: signed cyclic form disagrees")));
        }
    }
    if !form.triangle_inequalities_hold() {
        return Err(Error::violation(format!(
            "{pair}: need |V″-U″| < Z < V″+U″, got U″={}, V″={}, Z={}",
            form.udd, form.vdd, form.z
        )));
    }
    Ok(form)
}

/// The inequality chain reducing `Z > |V″ - U″|` to integer conditions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    /// `F1`; the first tangent inequality is `F1 != 0`.
    pub tangent_first: f64,
    /// `F2`; the second tangent inequality is `F2 != 0`.
    pub tangent_second: f64,
    pub tangent_first_ok: bool,
    pub tangent_second_ok: bool,
    /// `2Z - 2|sin A' sin B' - sin A sin B|`.
    pub lower_bound_gap: f64,
    pub lower_bound_ok: bool,
    /// Right minus left side of the first sine-ratio inequality.
    pub sine_ratio_first_gap: f64,
    pub sine_ratio_first_ok: bool,
    pub sine_ratio_second_gap: f64,
    pub sine_ratio_second_ok: bool,
    /// `x'/ν < q - x/μ`, i.e. `μx' + νx < qμν`.
    pub integer_first_strict: bool,
    /// `x'(qμ - y) <= y'(qμ - x)`.
    pub integer_first_ratio: bool,
    /// `νy + μy' < qμν`.
    pub integer_second_strict: bool,
    /// `y(qν - x') <= x(qν - y')`.
    pub integer_second_ratio: bool,
    /// `x' < y'` and `y < x`.
    pub orderings: bool,
}

impl InequalityReport {
    pub fn all_pass(&self) -> bool {
        self.tangent_first_ok
            && self.tangent_second_ok
            && self.lower_bound_ok
            && self.sine_ratio_first_ok
            && self.sine_ratio_second_ok
            && self.integer_first_strict
            && self.integer_first_ratio
            && self.integer_second_strict
            && self.integer_second_ratio
            && self.orderings
    }
}

pub fn verify_inequalities(spec: &GroupSpec, pair: &FareyPair) -> Result<InequalityReport> {
    check_pair(spec, pair)?;
    let (q, mu, nu) = (spec.q(), spec.mu(), spec.nu());
    let (fm, sm) = (spec.first_modulus(), spec.second_modulus());
    let (x, y, x2, y2) = (pair.x, pair.y, pair.x_prime, pair.y_prime);

    let (f1, f2) = det_factors(spec, pair);

    let two_z = cos_pi(x2, sm) * cos_pi(y, fm) - cos_pi(x, fm) * cos_pi(y2, sm);
    let (udd, vdd) = norm_closed_forms(spec, pair);
    let lower_bound_gap = two_z - 2.0 * (udd - vdd).abs();

    // sin(n/d · π/2) = sin(nπ/(2d))
    let half = |n: i64, d: i64| sin_pi(n, 2 * d);
    let first_gap = half(fm - x, fm) / half(fm - y, fm) - half(x2, sm) / half(y2, sm);
    let second_gap = half(sm - y2, sm) / half(sm - x2, sm) - half(y, fm) / half(x, fm);

    let order = q * mu * nu;
    Ok(InequalityReport {
        tangent_first: f1,
        tangent_second: f2,
        tangent_first_ok: f1.abs() > MARGIN,
        tangent_second_ok: f2.abs() > MARGIN,
        lower_bound_gap,
        lower_bound_ok: lower_bound_gap > MARGIN,
        sine_ratio_first_gap: first_gap,
        sine_ratio_first_ok: first_gap > MARGIN,
        sine_ratio_second_gap: second_gap,
        sine_ratio_second_ok: second_gap > MARGIN,
        integer_first_strict: mu * x2 + nu * x < order,
        integer_first_ratio: x2 * (fm - y) <= y2 * (fm - x),
        integer_second_strict: nu * y + mu * y2 < order,
        integer_second_ratio: y * (sm - x2) <= x * (sm - y2),
        orderings: x2 < y2 && y < x,
    })
}

/// Convexity of the level curve `{ρ∘ι = Z}`.
///
/// After a phase shift the curve is `U cos x + V cos y = Z` with `U = U″`,
/// `V = V″`, `V >= U`, whose upper half is `y = f(x) = arccos((Z - U cos x)/V)`.
/// `f'' < 0` everywhere iff `|(V² - Z² - U²)/(UZ)| < 2`; the sampled first
/// differences of `f` must also be non-increasing.
pub fn level_curve_check(form: &SupportForm, samples: usize) -> Result<bool> {
    if samples < 3 {
        return Err(Error::invalid("level curve check needs at least 3 samples"));
    }
    if !(form.udd > 0.0 && form.vdd > 0.0) {
        return Err(Error::invalid("both coefficient planes of ρ must be nonzero"));
    }
    let z = form.z;
    if !(z > 0.0 && (form.vdd - form.udd).abs() < z && z < form.vdd + form.udd) {
        return Err(Error::invalid(format!(
            "level {z} is outside (|V″-U″|, V″+U″) = ({}, {})",
            (form.vdd - form.udd).abs(),
            form.vdd + form.udd
        )));
    }
    let (u, v) = if form.vdd >= form.udd {
        (form.udd, form.vdd)
    } else {
        (form.vdd, form.udd)
    };
    let discriminant_ok = ((v * v - z * z - u * u) / (u * z)).abs() < 2.0;

    let x_max = ((z - v) / u).clamp(-1.0, 1.0).acos();
    let f = |x: f64| ((z - u * x.cos()) / v).clamp(-1.0, 1.0).acos();
    let step = 2.0 * x_max / (samples - 1) as f64;
    let values: Vec<f64> = (0..samples).map(|i| f(-x_max + step * i as f64)).collect();
    let diffs: Vec<f64> = values.windows(2).map(|w| w[1] - w[0]).collect();
    let concave = diffs.windows(2).all(|d| d[1] <= d[0] + 1e-12);
    let inside = values.iter().all(|&y| (0.0..PI).contains(&y));

    Ok(discriminant_ok && concave && inside)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeCheck {
    /// `Z - max ρ·x` over orbit points off the facet.
    pub margin: f64,
    /// `max |ρ·x - Z|` over the facet's own vertices.
    pub vertex_residual: f64,
    pub ok: bool,
}

fn check_levels(orbit: &Orbit, vertices: &[usize], form: &SupportForm) -> LatticeCheck {
    let mut margin = f64::INFINITY;
    let mut vertex_residual: f64 = 0.0;
    for (i, pt) in orbit.points().iter().enumerate() {
        let level = form.eval(&pt.coords);
        if vertices.contains(&i) {
            vertex_residual = vertex_residual.max((level - form.z).abs());
        } else {
            margin = margin.min(form.z - level);
        }
    }
    LatticeCheck {
        margin,
        vertex_residual,
        ok: margin > MARGIN && vertex_residual <= IDENTITY_TOL,
    }
}

/// Every orbit point off the base tetrahedron of `pair` lies strictly below `Z`.
pub fn lattice_points_check(spec: &GroupSpec, pair: &FareyPair, form: &SupportForm) -> Result<LatticeCheck> {
    check_pair(spec, pair)?;
    let orbit = crate::group::orbit(spec);
    let vertices: Vec<usize> = tetra_cells(pair)
        .iter()
        .map(|&(s, t)| orbit.index_of(s, t).expect("cell belongs to Γ"))
        .collect();
    Ok(check_levels(&orbit, &vertices, form))
}

/// All certificates for one Farey pair.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub pair_index: usize,
    pub first: Fraction,
    pub second: Fraction,
    pub det: DetM,
    pub det_nonzero: bool,
    pub det_routes_agree: bool,
    pub form: SupportForm,
    pub z_wedge_form: f64,
    pub z_forms_agree: bool,
    pub z_positive: bool,
    pub triangle_ok: bool,
    /// `ρ·ι(c) = U″ + V″` at the parallelogram center `c`.
    pub center_is_max: bool,
    /// The closed form, rescaled, matches the solution of `ρ·x_i = 1`.
    pub linear_solve_agrees: bool,
    pub support_checks_ok: bool,
    pub inequalities: InequalityReport,
    pub level_curve_ok: bool,
    pub lattice_ok: bool,
    pub lattice: LatticeCheck,
}

impl CertificateReport {
    pub fn all_pass(&self) -> bool {
        self.det_nonzero
            && self.det_routes_agree
            && self.z_forms_agree
            && self.z_positive
            && self.triangle_ok
            && self.center_is_max
            && self.linear_solve_agrees
            && self.support_checks_ok
            && self.inequalities.all_pass()
            && self.level_curve_ok
            && self.lattice_ok
            && self.lattice.ok
    }
}

/// `ρ` solving `ρ·x_i = 1` on the four vertices, via LU.
fn solved_form(spec: &GroupSpec, pair: &FareyPair) -> Option<[f64; 4]> {
    let cols = tetra_vertices(spec, pair).map(Vector4::from);
    let m = Matrix4::from_columns(&cols);
    m.transpose()
        .lu()
        .solve(&Vector4::repeat(1.0))
        .map(|r| [r[0], r[1], r[2], r[3]])
}

fn unit(v: [f64; 4]) -> [f64; 4] {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.map(|x| x / n)
}

pub fn certify_pair(spec: &GroupSpec, pair: &FareyPair, pair_index: usize, samples: usize) -> Result<CertificateReport> {
    check_pair(spec, pair)?;
    let det = det_m(spec, pair)?;
    let form = closed_form(spec, pair);
    let z_wedge_form = z_from_wedges(spec, pair);

    let lattice = lattice_data(spec, pair);
    let center_is_max = match &lattice {
        Ok(data) => {
            let c = embed(
                data.center.s.num(),
                data.center.s.den(),
                data.center.t.num(),
                data.center.t.den(),
            );
            (form.eval(&c) - (form.udd + form.vdd)).abs() <= IDENTITY_TOL
        }
        Err(_) => false,
    };

    let linear_solve_agrees = match solved_form(spec, pair) {
        Some(solved) if form.z > 0.0 => {
            let (x, y) = (unit(solved), unit(form.coefficients()));
            x.iter().zip(&y).all(|(a, b)| (a - b).abs() <= MARGIN)
        }
        _ => false,
    };

    let level_curve_ok = level_curve_check(&form, samples).unwrap_or(false);
    let lattice_check = lattice_points_check(spec, pair, &form)?;

    Ok(CertificateReport {
        pair_index,
        first: pair.first,
        second: pair.second,
        det_nonzero: det.normalized() > MARGIN,
        det_routes_agree: det.routes_agree(),
        det,
        z_forms_agree: (form.z - z_wedge_form).abs() <= IDENTITY_TOL * form.z.abs().max(1.0),
        z_positive: form.z > MARGIN,
        triangle_ok: form.triangle_inequalities_hold(),
        center_is_max,
        linear_solve_agrees,
        support_checks_ok: support_form(spec, pair).is_ok(),
        inequalities: verify_inequalities(spec, pair)?,
        level_curve_ok,
        lattice_ok: lattice.is_ok(),
        lattice: lattice_check,
        form,
        z_wedge_form,
    })
}

/// The supporting form of a predicted facet, in orbit coordinates.
pub fn facet_support(tri: &Triangulation, facet: &Facet) -> Result<SupportForm> {
    let spec = &tri.spec;
    let orbit = &tri.orbit;
    let (fm, sm) = (spec.first_modulus(), spec.second_modulus());
    let rotate = |form: SupportForm, g: usize| {
        let (s, t) = orbit.cell(g);
        form.rotated(2.0 * PI * s as f64 / fm as f64, 2.0 * PI * t as f64 / sm as f64)
    };
    match facet.kind {
        FacetKind::Tetra { pair, translate } => {
            let pair = tri
                .pairs
                .get(pair)
                .ok_or_else(|| Error::invalid("facet refers to a missing pair"))?;
            Ok(rotate(closed_form(spec, pair), translate))
        }
        // The cell maximizes the form pointing between angle 0 and one step
        // along the other circle.
        FacetKind::Antiprism { axis, translate, .. } => {
            let base = match axis {
                Axis::Second => {
                    let h = PI / fm as f64;
                    SupportForm::new(h.cos(), h.sin(), 0.0, 0.0, h.cos())
                }
                Axis::First => {
                    let h = PI / sm as f64;
                    SupportForm::new(0.0, 0.0, h.cos(), h.sin(), h.cos())
                }
            };
            Ok(rotate(base, translate))
        }
        // The two bases sit at adjacent angles on one circle; the form points
        // at their bisector.
        FacetKind::Prism { axis, .. } => {
            let (offset, modulus) = match axis {
                Axis::Second => (0, fm),
                Axis::First => (2, sm),
            };
            let mut mean = [0.0; 2];
            for &v in &facet.vertices {
                let x = orbit.points()[v].coords;
                mean[0] += x[offset];
                mean[1] += x[offset + 1];
            }
            let norm = mean[0].hypot(mean[1]);
            if norm == 0.0 {
                return Err(Error::violation("prism bases are antipodal"));
            }
            let (c, s) = (mean[0] / norm, mean[1] / norm);
            let z = (PI / modulus as f64).cos();
            Ok(match axis {
                Axis::Second => SupportForm::new(c, s, 0.0, 0.0, z),
                Axis::First => SupportForm::new(0.0, 0.0, c, s, z),
            })
        }
    }
}

/// Facet-level check: supporting form plus strict separation of the rest of the orbit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FacetCertificate {
    pub facet: usize,
    pub check: LatticeCheck,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificationSummary {
    pub pairs: Vec<CertificateReport>,
    pub facets: Vec<FacetCertificate>,
    pub min_margin: f64,
    pub all_pass: bool,
}

/// Attaches a supporting form to every facet of `tri` and runs every pair and
/// facet certificate.
pub fn certify(tri: &mut Triangulation, samples: usize) -> Result<CertificationSummary> {
    let spec = tri.spec;
    let pairs = tri
        .pairs
        .iter()
        .enumerate()
        .map(|(i, p)| certify_pair(&spec, p, i, samples))
        .collect::<Result<Vec<_>>>()?;

    let mut facets = Vec::with_capacity(tri.facets.len());
    for i in 0..tri.facets.len() {
        let form = facet_support(tri, &tri.facets[i])?;
        let check = check_levels(&tri.orbit, &tri.facets[i].vertices, &form);
        tri.facets[i].support = Some(form);
        facets.push(FacetCertificate { facet: i, check });
    }
    let min_margin = facets
        .iter()
        .map(|f| f.check.margin)
        .fold(f64::INFINITY, f64::min);
    let all_pass = pairs.iter().all(CertificateReport::all_pass) && facets.iter().all(|f| f.check.ok);
    Ok(CertificationSummary {
        pairs,
        facets,
        min_margin,
        all_pass,
    })
}
