//! Finite subgroups of the torus `(R/Z)²`, their canonical invariants
//! `(p, q, μ, ν)`, and the embedded orbit in `R⁴`.
//!
//! Every finite subgroup `Γ` is the preimage of the cyclic group
//! `{(k/q, kp/q)}` under `(s, t) ↦ (μs, νt)`. Angles are kept as exact
//! fractions of a full turn; the orbit stores each point by the integer pair
//! `(S, T)` with `s = S/(qμ)` and `t = T/(qν)`, so group translation is
//! componentwise addition.

use crate::error::{Error, Result};
use crate::rationals::{FareyPair, Fraction};
use serde::{Deserialize, Serialize};
use std::collections::{HashMap, HashSet, VecDeque};
use std::f64::consts::PI;

/// Upper bound on subgroup closure size.
pub const MAX_GROUP_ORDER: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Degeneracy {
    Generic,
    /// `p ≡ ±1 (mod q)` with `μ = ν = 1`: the orbit is a regular polygon in a plane.
    TwoCaps,
    /// `p/q = 0`: the product of a regular `μ`-gon and a regular `ν`-gon.
    ProductOfPolygons,
    /// `p/q = 1/2` with `μ = 1` or `ν = 1`: an antiprism inside a 3-space.
    AntiprismOnly,
    /// Fewer than five points.
    LowOrder,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSpec")]
pub struct GroupSpec {
    p: i64,
    q: i64,
    mu: i64,
    nu: i64,
    degeneracy: Degeneracy,
}

#[derive(Deserialize)]
struct RawSpec {
    p: i64,
    q: i64,
    mu: i64,
    nu: i64,
}

impl TryFrom<RawSpec> for GroupSpec {
    type Error = Error;

    fn try_from(raw: RawSpec) -> Result<Self> {
        GroupSpec::new(raw.p, raw.q, raw.mu, raw.nu)
    }
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a.abs()
}

fn classify(p: i64, q: i64, mu: i64, nu: i64) -> Degeneracy {
    let order = q * mu * nu;
    if mu == 1 && nu == 1 && q >= 2 && (p == 1 || p == q - 1) {
        Degeneracy::TwoCaps
    } else if p == 0 {
        if order < 5 {
            Degeneracy::LowOrder
        } else {
            Degeneracy::ProductOfPolygons
        }
    } else if (mu == 1 || nu == 1) && q == 2 {
        Degeneracy::AntiprismOnly
    } else if order < 5 {
        Degeneracy::LowOrder
    } else {
        Degeneracy::Generic
    }
}

impl GroupSpec {
    /// Validates `0 <= p < q`, `gcd(p, q) = 1`, `μ, ν >= 1` and classifies.
    pub fn new(p: i64, q: i64, mu: i64, nu: i64) -> Result<Self> {
        if q < 1 || mu < 1 || nu < 1 {
            return Err(Error::invalid(format!(
                "q, mu, nu must be positive (got q={q}, mu={mu}, nu={nu})"
            )));
        }
        if !(0..q).contains(&p) {
            return Err(Error::invalid(format!("p must lie in [0, q) (got p={p}, q={q})")));
        }
        if gcd(p, q) != 1 {
            return Err(Error::invalid(format!("gcd(p, q) must be 1 (got p={p}, q={q})")));
        }
        let order = q
            .checked_mul(mu)
            .and_then(|v| v.checked_mul(nu))
            .ok_or(Error::Overflow("group order"))?;
        if order as u64 > MAX_GROUP_ORDER as u64 {
            return Err(Error::invalid(format!("group order {order} exceeds {MAX_GROUP_ORDER}")));
        }
        Ok(GroupSpec {
            p,
            q,
            mu,
            nu,
            degeneracy: classify(p, q, mu, nu),
        })
    }

    /// The cyclic lens-space group `(p, q, 1, 1)`.
    pub fn cyclic(p: i64, q: i64) -> Result<Self> {
        Self::new(p, q, 1, 1)
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn mu(&self) -> i64 {
        self.mu
    }

    pub fn nu(&self) -> i64 {
        self.nu
    }

    pub fn degeneracy(&self) -> Degeneracy {
        self.degeneracy
    }

    pub fn is_generic(&self) -> bool {
        self.degeneracy == Degeneracy::Generic
    }

    pub fn order(&self) -> i64 {
        self.q * self.mu * self.nu
    }

    /// The slope `Q = p/q`.
    pub fn ratio(&self) -> Fraction {
        Fraction::new(self.p, self.q).expect("validated spec")
    }

    /// `qμ`: the denominator of first angles.
    pub fn first_modulus(&self) -> i64 {
        self.q * self.mu
    }

    /// `qν`: the denominator of second angles.
    pub fn second_modulus(&self) -> i64 {
        self.q * self.nu
    }

    /// Generators of the model group: `(1/(qμ), p/(qν))`, `(1/μ, 0)`, `(0, 1/ν)`.
    pub fn generators(&self) -> Vec<TorusPoint> {
        let tp = |sn, sd, tn, td| {
            TorusPoint::new(
                Fraction::new(sn, sd).expect("nonzero denominator"),
                Fraction::new(tn, td).expect("nonzero denominator"),
            )
            .expect("finite angles")
        };
        vec![
            tp(1, self.first_modulus(), self.p, self.second_modulus()),
            tp(1, self.mu, 0, 1),
            tp(0, 1, 1, self.nu),
        ]
    }
}

/// A point of `(R/Z)²`, angles measured in full turns.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TorusPoint {
    pub s: Fraction,
    pub t: Fraction,
}

fn reduce_mod_one(f: Fraction) -> Fraction {
    let d = f.den();
    Fraction::new(f.num().rem_euclid(d), d).expect("nonzero denominator")
}

impl TorusPoint {
    pub fn new(s: Fraction, t: Fraction) -> Result<Self> {
        if s.is_infinite() || t.is_infinite() {
            return Err(Error::invalid("torus coordinates must be finite"));
        }
        Ok(TorusPoint {
            s: reduce_mod_one(s),
            t: reduce_mod_one(t),
        })
    }

    pub fn add(&self, other: &TorusPoint) -> Result<TorusPoint> {
        let sum = |x: Fraction, y: Fraction| -> Result<Fraction> {
            let num = (x.num() as i128 * y.den() as i128 + y.num() as i128 * x.den() as i128)
                .rem_euclid(x.den() as i128 * y.den() as i128);
            let den = x.den() as i128 * y.den() as i128;
            let num = i64::try_from(num).map_err(|_| Error::Overflow("TorusPoint::add"))?;
            let den = i64::try_from(den).map_err(|_| Error::Overflow("TorusPoint::add"))?;
            Fraction::new(num, den)
        };
        TorusPoint::new(sum(self.s, other.s)?, sum(self.t, other.t)?)
    }
}

/// Coset labels `(j1 mod μ, j2 mod ν)` and cyclic index `k mod q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OrbitLabel {
    pub j1: i64,
    pub j2: i64,
    pub k: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitPoint {
    pub label: OrbitLabel,
    pub angles: TorusPoint,
    /// `(cos 2πs, sin 2πs, cos 2πt, sin 2πt)`.
    pub coords: [f64; 4],
}

/// `2π·n/d` evaluated after reducing `n` into `(-d/2, d/2]`.
pub(crate) fn turn_angle(n: i64, d: i64) -> f64 {
    let mut r = n.rem_euclid(d);
    if 2 * r > d {
        r -= d;
    }
    2.0 * PI * (r as f64) / (d as f64)
}

/// `ι(s, t)` for angles `S/first_mod` and `T/second_mod` turns.
pub(crate) fn embed(s_num: i64, first_mod: i64, t_num: i64, second_mod: i64) -> [f64; 4] {
    let u = turn_angle(s_num, first_mod);
    let v = turn_angle(t_num, second_mod);
    [u.cos(), u.sin(), v.cos(), v.sin()]
}

/// The labelled orbit of `Γ` through `x₀ = (1, 0, 1, 0)`.
#[derive(Clone, Debug)]
pub struct Orbit {
    spec: GroupSpec,
    points: Vec<OrbitPoint>,
    cells: Vec<(i64, i64)>,
    lookup: HashMap<(i64, i64), usize>,
}

impl Orbit {
    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn points(&self) -> &[OrbitPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn coords(&self) -> Vec<[f64; 4]> {
        self.points.iter().map(|p| p.coords).collect()
    }

    /// Integer angle numerators `(S, T)` of point `i`.
    pub fn cell(&self, i: usize) -> (i64, i64) {
        self.cells[i]
    }

    /// Looks up the point with angles `(S/(qμ), T/(qν))`, if it belongs to `Γ`.
    pub fn index_of(&self, s_num: i64, t_num: i64) -> Option<usize> {
        let key = (
            s_num.rem_euclid(self.spec.first_modulus()),
            t_num.rem_euclid(self.spec.second_modulus()),
        );
        self.lookup.get(&key).copied()
    }

    /// Label of `point + by` under the group law.
    pub fn translate(&self, point: usize, by: usize) -> usize {
        let (s, t) = self.cells[point];
        let (ds, dt) = self.cells[by];
        self.index_of(s + ds, t + dt)
            .expect("Γ is closed under addition")
    }

    /// Label of `-point`.
    pub fn negate(&self, point: usize) -> usize {
        let (s, t) = self.cells[point];
        self.index_of(-s, -t).expect("Γ is closed under negation")
    }
}

/// Builds the orbit: `qμν` points labelled `(j1, j2, k)` in lexicographic
/// order, with angles `((k + j1·q)/(qμ), (k·p + j2·q)/(qν))`.
pub fn orbit(spec: &GroupSpec) -> Orbit {
    let (q, mu, nu, p) = (spec.q, spec.mu, spec.nu, spec.p);
    let (fm, sm) = (spec.first_modulus(), spec.second_modulus());
    let n = spec.order() as usize;
    let mut points = Vec::with_capacity(n);
    let mut cells = Vec::with_capacity(n);
    let mut lookup = HashMap::with_capacity(n);
    for j1 in 0..mu {
        for j2 in 0..nu {
            for k in 0..q {
                let s_num = k + j1 * q;
                let t_num = (k * p + j2 * q).rem_euclid(sm);
                let angles = TorusPoint {
                    s: Fraction::new(s_num, fm).expect("nonzero modulus"),
                    t: Fraction::new(t_num, sm).expect("nonzero modulus"),
                };
                lookup.insert((s_num, t_num), points.len());
                cells.push((s_num, t_num));
                points.push(OrbitPoint {
                    label: OrbitLabel { j1, j2, k },
                    angles,
                    coords: embed(s_num, fm, t_num, sm),
                });
            }
        }
    }
    debug_assert_eq!(lookup.len(), n);
    Orbit {
        spec: *spec,
        points,
        cells,
        lookup,
    }
}

fn lcm(a: i64, b: i64) -> Option<i64> {
    (a / gcd(a, b)).checked_mul(b)
}

/// Closes `generators` into a finite subgroup and returns its invariants.
pub fn canonicalize(generators: &[TorusPoint]) -> Result<GroupSpec> {
    if generators.is_empty() {
        return Err(Error::invalid("no generators given"));
    }
    let modulus = generators
        .iter()
        .try_fold(1i64, |acc, g| lcm(acc, g.s.den()).and_then(|l| lcm(l, g.t.den())))
        .ok_or(Error::Overflow("canonicalize: common denominator"))?;
    let steps: Vec<(i64, i64)> = generators
        .iter()
        .map(|g| {
            (
                g.s.num() * (modulus / g.s.den()),
                g.t.num() * (modulus / g.t.den()),
            )
        })
        .collect();

    let mut seen: HashSet<(i64, i64)> = HashSet::new();
    let mut queue = VecDeque::from([(0i64, 0i64)]);
    seen.insert((0, 0));
    while let Some((s, t)) = queue.pop_front() {
        for &(ds, dt) in &steps {
            let next = ((s + ds).rem_euclid(modulus), (t + dt).rem_euclid(modulus));
            if seen.insert(next) {
                if seen.len() > MAX_GROUP_ORDER {
                    return Err(Error::invalid(format!(
                        "generated group exceeds {MAX_GROUP_ORDER} elements"
                    )));
                }
                queue.push_back(next);
            }
        }
    }

    let order = seen.len() as i64;
    let mu = seen.iter().filter(|&&(_, t)| t == 0).count() as i64;
    let nu = seen.iter().filter(|&&(s, _)| s == 0).count() as i64;
    let q = order / (mu * nu);
    if q * mu * nu != order || modulus % q != 0 {
        return Err(Error::violation(format!(
            "group of order {order} does not split as q·μ·ν with μ={mu}, ν={nu}"
        )));
    }
    // The image under (s, t) ↦ (μs, νt) is cyclic of order q; find its element
    // with first coordinate 1/q and read off the second.
    let step = modulus / q;
    let p = seen
        .iter()
        .find(|&&(s, _)| (mu * s).rem_euclid(modulus) == step % modulus)
        .map(|&(_, t)| (nu * t).rem_euclid(modulus) / step)
        .ok_or_else(|| Error::violation("no element projects to 1/q"))?;
    GroupSpec::new(p.rem_euclid(q), q, mu, nu)
}

/// Lattice basis and parallelogram data for one Farey pair.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeData {
    /// Lift of `τ_a`, in radians.
    pub u: [f64; 2],
    /// Lift of `τ_b`, in radians.
    pub v: [f64; 2],
    /// `(u + v)/2`.
    pub center_bar: [f64; 2],
    /// Projection of `center_bar` to the torus, in turns.
    pub center: TorusPoint,
}

impl LatticeData {
    pub fn det(&self) -> f64 {
        self.u[0] * self.v[1] - self.u[1] * self.v[0]
    }
}

/// Builds `u`, `v` and the parallelogram center for `pair`, checking that
/// `(u, v)` is a lattice basis and that the parallelogram `(0, u, u+v, v)`
/// sits strictly inside `center_bar + (-π, π)²`.
pub fn lattice_data(spec: &GroupSpec, pair: &FareyPair) -> Result<LatticeData> {
    if pair.target != spec.ratio() {
        return Err(Error::invalid(format!(
            "pair {pair} belongs to slope {}, not {}",
            pair.target,
            spec.ratio()
        )));
    }
    let (fm, sm) = (spec.first_modulus(), spec.second_modulus());
    let (a, b) = (pair.a, pair.b);
    let (fo, so) = (pair.first_offset(), pair.second_offset());

    // Vertices relative to the center are ±(u+v)/2 and ±(u−v)/2; containment
    // in the open square is exact integer arithmetic.
    if (a + b).abs() >= fm || (a - b).abs() >= fm || (fo + so).abs() >= sm || (fo - so).abs() >= sm {
        return Err(Error::violation(format!(
            "parallelogram of {pair} is not inside the centered square"
        )));
    }
    let cross = pair.second.den() * pair.first.num() - pair.first.den() * pair.second.num();
    if cross.abs() != 1 {
        return Err(Error::violation(format!("{pair}: u, v do not span the lattice")));
    }

    let u = [2.0 * PI * a as f64 / fm as f64, 2.0 * PI * fo as f64 / sm as f64];
    let v = [2.0 * PI * b as f64 / fm as f64, 2.0 * PI * so as f64 / sm as f64];
    let data = LatticeData {
        u,
        v,
        center_bar: [(u[0] + v[0]) / 2.0, (u[1] + v[1]) / 2.0],
        center: TorusPoint::new(Fraction::new(a + b, 2 * fm)?, Fraction::new(fo + so, 2 * sm)?)?,
    };
    let covolume = (2.0 * PI).powi(2) / spec.order() as f64;
    if (data.det().abs() - covolume).abs() > 1e-12 {
        return Err(Error::violation(format!(
            "{pair}: |det(u, v)| = {} but covolume is {covolume}",
            data.det().abs()
        )));
    }
    Ok(data)
}
