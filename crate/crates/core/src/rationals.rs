//! Exact rationals on the projective line, the Farey wedge pairing, continued
//! fractions, and the Farey pairs that index the tetrahedral facets.
//!
//! A pair `{A, B}` of Farey neighbours bracketing the slope `Q = p/q` carries
//! eight integers. With `X` the mediant of `A` and `B`, `Y = |α-β|/|a-b|` their
//! other common neighbour, and `∧` the wedge:
//!
//! ```text
//! a  = A ∧ ∞    b  = B ∧ ∞    x  = X ∧ ∞    y  = Y ∧ ∞
//! a' = A ∧ Q    b' = B ∧ Q    x' = X ∧ Q    y' = Y ∧ Q
//! ```
//!
//! and these always satisfy `a+b = x`, `|a-b| = y`, `a'+b' = y'`, `|a'-b'| = x'`
//! and `a'b + b'a = q`.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

fn gcd(mut a: i64, mut b: i64) -> i64 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// A reduced rational number, or `∞ = 1/0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Fraction {
    num: i64,
    den: i64,
}

impl Fraction {
    pub const INFINITY: Fraction = Fraction { num: 1, den: 0 };
    pub const ZERO: Fraction = Fraction { num: 0, den: 1 };
    pub const ONE: Fraction = Fraction { num: 1, den: 1 };

    /// Builds `num/den` in lowest terms with a non-negative denominator.
    /// Any `k/0` with `k != 0` is `∞`; `0/0` is rejected.
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return if num == 0 {
                Err(Error::invalid("0/0 is not a rational"))
            } else {
                Ok(Self::INFINITY)
            };
        }
        if num == i64::MIN || den == i64::MIN {
            return Err(Error::Overflow("Fraction::new"));
        }
        let g = gcd(num, den);
        let (mut num, mut den) = (num / g, den / g);
        if den < 0 {
            num = -num;
            den = -den;
        }
        Ok(Fraction { num, den })
    }

    pub fn integer(n: i64) -> Self {
        Fraction { num: n, den: 1 }
    }

    pub fn num(&self) -> i64 {
        self.num
    }

    pub fn den(&self) -> i64 {
        self.den
    }

    pub fn is_infinite(&self) -> bool {
        self.den == 0
    }

    /// `(α+β)/(a+b)`. For Farey neighbours this is already reduced.
    pub fn mediant(&self, other: &Fraction) -> Result<Fraction> {
        let num = self
            .num
            .checked_add(other.num)
            .ok_or(Error::Overflow("mediant"))?;
        let den = self
            .den
            .checked_add(other.den)
            .ok_or(Error::Overflow("mediant"))?;
        Fraction::new(num, den)
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_infinite() {
            f64::INFINITY
        } else {
            self.num as f64 / self.den as f64
        }
    }

    /// True iff `self` lies strictly between `lo` and `hi` (in either order).
    pub fn strictly_between(&self, lo: &Fraction, hi: &Fraction) -> bool {
        let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
        lo < self && self < hi
    }
}

impl PartialOrd for Fraction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `∞` compares above every finite value.
impl Ord for Fraction {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.is_infinite(), other.is_infinite()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Greater,
            (false, true) => Ordering::Less,
            (false, false) => {
                let lhs = self.num as i128 * other.den as i128;
                let rhs = other.num as i128 * self.den as i128;
                lhs.cmp(&rhs)
            }
        }
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Fraction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parse = |t: &str| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| Error::invalid(format!("not a rational: {s:?}")))
        };
        match s.split_once('/') {
            Some((n, d)) => Fraction::new(parse(n)?, parse(d)?),
            None => Ok(Fraction::integer(parse(s)?)),
        }
    }
}

impl TryFrom<String> for Fraction {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Fraction> for String {
    fn from(f: Fraction) -> String {
        f.to_string()
    }
}

/// `|u·t - v·s|` for reduced `u/v` and `s/t`.
///
/// Panics if the result does not fit in an `i64`, which needs denominators
/// far beyond anything the enumeration produces.
pub fn wedge(h: &Fraction, k: &Fraction) -> i64 {
    let w = (h.num as i128 * k.den as i128 - h.den as i128 * k.num as i128).abs();
    i64::try_from(w).expect("wedge exceeds i64")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContinuedFraction {
    /// `[c0; c1, c2, ...]` with `c0 >= 0`, the rest `>= 1`, and the last `>= 2`
    /// whenever there is more than one.
    pub coefficients: Vec<i64>,
    /// Sum of all coefficients.
    pub n: i64,
}

impl ContinuedFraction {
    pub fn evaluate(&self) -> Result<Fraction> {
        let mut iter = self.coefficients.iter().rev();
        let last = *iter
            .next()
            .ok_or_else(|| Error::invalid("empty continued fraction"))?;
        let (mut num, mut den) = (last, 1i64);
        for &c in iter {
            // c + 1/(num/den) = (c*num + den)/num
            let next = c
                .checked_mul(num)
                .and_then(|v| v.checked_add(den))
                .ok_or(Error::Overflow("ContinuedFraction::evaluate"))?;
            den = num;
            num = next;
        }
        Fraction::new(num, den)
    }
}

/// Euclid's algorithm on `Q ∈ (0, 1)`.
pub fn continued_fraction(target: Fraction) -> Result<ContinuedFraction> {
    if target.is_infinite() || target.num() <= 0 || target.num() >= target.den() {
        return Err(Error::invalid(format!(
            "continued fraction needs 0 < Q < 1, got {target}"
        )));
    }
    let (mut num, mut den) = (target.num(), target.den());
    let mut coefficients = Vec::new();
    while den != 0 {
        coefficients.push(num / den);
        let r = num % den;
        num = den;
        den = r;
    }
    let n = coefficients.iter().sum();
    Ok(ContinuedFraction { coefficients, n })
}

/// A pair `{A, B}` of Farey neighbours bracketing a slope `Q`, with the eight
/// wedge integers (see the module docs). The primed quantities are the wedges
/// with `Q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FareyPair {
    pub first: Fraction,
    pub second: Fraction,
    pub target: Fraction,
    pub a: i64,
    pub b: i64,
    pub a_prime: i64,
    pub b_prime: i64,
    pub x: i64,
    pub y: i64,
    pub x_prime: i64,
    pub y_prime: i64,
}

impl FareyPair {
    /// `a·p - α·q`: the signed second-angle numerator of the lattice vector
    /// lifting `τ_a`. Its absolute value is `a'`.
    pub fn first_offset(&self) -> i64 {
        self.a * self.target.num() - self.first.num() * self.target.den()
    }

    /// `b·p - β·q`; opposite in sign to [`FareyPair::first_offset`].
    pub fn second_offset(&self) -> i64 {
        self.b * self.target.num() - self.second.num() * self.target.den()
    }

    /// The unordered pair as a sorted tuple, used as an identity key.
    pub fn key(&self) -> (Fraction, Fraction) {
        if self.first <= self.second {
            (self.first, self.second)
        } else {
            (self.second, self.first)
        }
    }

    pub fn mediant(&self) -> Fraction {
        self.first
            .mediant(&self.second)
            .expect("mediant of a validated pair")
    }
}

impl fmt::Display for FareyPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}, {}}}", self.first, self.second)
    }
}

/// Populates the eight integers of `{first, second}` relative to `target` and
/// checks every wedge identity.
pub fn derive_invariants(first: Fraction, second: Fraction, target: Fraction) -> Result<FareyPair> {
    if first.is_infinite() || second.is_infinite() || target.is_infinite() {
        return Err(Error::invalid("Farey pair members must be finite"));
    }
    if wedge(&first, &second) != 1 {
        return Err(Error::invalid(format!(
            "{first} and {second} are not Farey neighbours"
        )));
    }
    if !target.strictly_between(&first, &second) {
        return Err(Error::invalid(format!(
            "{target} is not strictly between {first} and {second}"
        )));
    }
    let q = target.den();
    let mediant = first.mediant(&second)?;
    let other = Fraction::new(
        (first.num() - second.num()).abs(),
        (first.den() - second.den()).abs(),
    )?;

    let a = wedge(&first, &Fraction::INFINITY);
    let b = wedge(&second, &Fraction::INFINITY);
    let a_prime = wedge(&first, &target);
    let b_prime = wedge(&second, &target);
    let x = wedge(&mediant, &Fraction::INFINITY);
    let y = wedge(&other, &Fraction::INFINITY);
    let x_prime = wedge(&mediant, &target);
    let y_prime = wedge(&other, &target);

    let checks = [
        (a + b == x, "a + b = x"),
        ((a - b).abs() == y, "|a - b| = y"),
        (a_prime + b_prime == y_prime, "a' + b' = y'"),
        ((a_prime - b_prime).abs() == x_prime, "|a' - b'| = x'"),
        (a_prime * b + b_prime * a == q, "a'b + b'a = q"),
    ];
    if let Some((_, what)) = checks.iter().find(|(ok, _)| !ok) {
        return Err(Error::violation(format!(
            "{what} fails for {{{first}, {second}}} at {target}"
        )));
    }
    Ok(FareyPair {
        first,
        second,
        target,
        a,
        b,
        a_prime,
        b_prime,
        x,
        y,
        x_prime,
        y_prime,
    })
}

/// The nested Stern–Brocot intervals `[lo, hi]` containing `target`, starting
/// from `[0/1, 1/1]` and ending with the one whose mediant is `target`.
pub fn stern_brocot_path(target: Fraction) -> Result<Vec<(Fraction, Fraction)>> {
    if target.is_infinite() || target.num() <= 0 || target.num() >= target.den() {
        return Err(Error::invalid(format!("need 0 < Q < 1, got {target}")));
    }
    let (mut lo, mut hi) = (Fraction::ZERO, Fraction::ONE);
    let mut path = Vec::new();
    loop {
        path.push((lo, hi));
        let m = lo.mediant(&hi)?;
        match target.cmp(&m) {
            Ordering::Equal => return Ok(path),
            Ordering::Less => hi = m,
            Ordering::Greater => lo = m,
        }
    }
}

/// The pair preceding `{first, second}` in the natural order:
/// `{min(α,β)/min(a,b), |α-β|/|a-b|}`.
pub fn previous_pair(first: Fraction, second: Fraction) -> Result<(Fraction, Fraction)> {
    let lo = Fraction::new(
        first.num().min(second.num()),
        first.den().min(second.den()),
    )?;
    let other = Fraction::new(
        (first.num() - second.num()).abs(),
        (first.den() - second.den()).abs(),
    )?;
    Ok((lo, other))
}

/// Farey pairs indexing the tetrahedral facets for slope `target`, in their
/// natural order.
///
/// With both flags off these are exactly the neighbour pairs `{A, B}` in
/// `[0, 1]` bracketing `Q` with at most one of them adjacent to `Q` and at most
/// one in `{0, 1}`; there are `n - 3` of them. `include_inf_pair` prepends
/// `{0/1, 1/1}`; `include_q_pair` appends the pair whose mediant is `Q`. When
/// both apply to the same pair (`Q = 1/2`) it is listed once.
pub fn enumerate_pairs(
    target: Fraction,
    include_inf_pair: bool,
    include_q_pair: bool,
) -> Result<Vec<FareyPair>> {
    let path = stern_brocot_path(target)?;
    let (p, q) = (target.num(), target.den());
    if !include_inf_pair && !include_q_pair && (p == 1 || p == q - 1) {
        return Err(Error::ExcludedSlope { p, q });
    }

    let mut intervals: Vec<(Fraction, Fraction)> = Vec::with_capacity(path.len());
    if include_inf_pair {
        intervals.push(path[0]);
    }
    if path.len() > 2 {
        intervals.extend_from_slice(&path[1..path.len() - 1]);
    }
    if include_q_pair {
        let last = *path.last().expect("path is never empty");
        if !(include_inf_pair && path.len() == 1) {
            intervals.push(last);
        }
    }

    intervals
        .into_iter()
        .map(|(lo, hi)| derive_invariants(lo, hi, target))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(n: i64, d: i64) -> Fraction {
        Fraction::new(n, d).unwrap()
    }

    #[test]
    fn fraction_normalizes() {
        assert_eq!(f(2, 4), f(1, 2));
        assert_eq!(f(-3, -6), f(1, 2));
        assert_eq!(f(3, -6).num(), -1);
        assert_eq!(f(-5, 0), Fraction::INFINITY);
        assert!(Fraction::new(0, 0).is_err());
        assert_eq!("3/9".parse::<Fraction>().unwrap(), f(1, 3));
        assert_eq!("0".parse::<Fraction>().unwrap(), Fraction::ZERO);
        assert!("1/x".parse::<Fraction>().is_err());
    }

    #[test]
    fn wedge_examples() {
        assert_eq!(wedge(&f(2, 5), &Fraction::INFINITY), 5);
        assert_eq!(wedge(&f(1, 3), &f(1, 2)), 1);
        assert_eq!(wedge(&f(3, 7), &f(3, 7)), 0);
        assert_eq!(wedge(&Fraction::INFINITY, &Fraction::INFINITY), 0);
        assert_eq!(wedge(&f(1, 3), &f(2, 7)), wedge(&f(2, 7), &f(1, 3)));
    }

    #[test]
    fn continued_fraction_examples() {
        let cf = continued_fraction(f(1, 2)).unwrap();
        assert_eq!((cf.coefficients.as_slice(), cf.n), (&[0, 2][..], 2));
        let cf = continued_fraction(f(2, 5)).unwrap();
        assert_eq!((cf.coefficients.as_slice(), cf.n), (&[0, 2, 2][..], 4));
        let cf = continued_fraction(f(2, 7)).unwrap();
        assert_eq!((cf.coefficients.as_slice(), cf.n), (&[0, 3, 2][..], 5));
        assert!(continued_fraction(f(0, 1)).is_err());
        assert!(continued_fraction(f(1, 1)).is_err());
        assert!(continued_fraction(f(7, 5)).is_err());
    }

    #[test]
    fn derive_invariants_examples() {
        let p = derive_invariants(f(0, 1), f(1, 2), f(2, 5)).unwrap();
        assert_eq!(
            (p.a, p.b, p.a_prime, p.b_prime, p.x, p.y, p.x_prime, p.y_prime),
            (1, 2, 2, 1, 3, 1, 1, 3)
        );
        let p = derive_invariants(f(0, 1), f(1, 3), f(2, 7)).unwrap();
        assert_eq!(
            (p.a, p.b, p.a_prime, p.b_prime, p.x, p.y, p.x_prime, p.y_prime),
            (1, 3, 2, 1, 4, 2, 1, 3)
        );
        assert_eq!(p.a_prime * p.b + p.b_prime * p.a, 7);
        assert!(p.first_offset() * p.second_offset() < 0);
    }

    #[test]
    fn derive_invariants_rejects_bad_pairs() {
        // not neighbours
        assert!(derive_invariants(f(0, 1), f(2, 3), f(1, 2)).is_err());
        // target outside
        assert!(derive_invariants(f(0, 1), f(1, 3), f(2, 5)).is_err());
        // target on an endpoint
        assert!(derive_invariants(f(0, 1), f(1, 2), f(1, 2)).is_err());
    }

    #[test]
    fn inf_pair_has_degenerate_y() {
        let p = derive_invariants(f(0, 1), f(1, 1), f(2, 5)).unwrap();
        assert_eq!((p.a, p.b, p.y, p.y_prime), (1, 1, 0, 5));
    }

    #[test]
    fn enumerate_small_cases() {
        let pairs = enumerate_pairs(f(2, 5), false, false).unwrap();
        assert_eq!(pairs.len(), 1);
        assert_eq!((pairs[0].first, pairs[0].second), (f(0, 1), f(1, 2)));

        let pairs = enumerate_pairs(f(2, 7), false, false).unwrap();
        let keys: Vec<_> = pairs.iter().map(|p| (p.first, p.second)).collect();
        assert_eq!(keys, vec![(f(0, 1), f(1, 2)), (f(0, 1), f(1, 3))]);

        assert_eq!(
            enumerate_pairs(f(1, 5), false, false),
            Err(Error::ExcludedSlope { p: 1, q: 5 })
        );
        assert_eq!(
            enumerate_pairs(f(4, 5), false, false),
            Err(Error::ExcludedSlope { p: 4, q: 5 })
        );
    }

    #[test]
    fn enumerate_with_extra_pairs() {
        let pairs = enumerate_pairs(f(2, 5), true, true).unwrap();
        let keys: Vec<_> = pairs.iter().map(|p| (p.first, p.second)).collect();
        assert_eq!(
            keys,
            vec![(f(0, 1), f(1, 1)), (f(0, 1), f(1, 2)), (f(1, 3), f(1, 2))]
        );
        // Q = 1/2: the two extra pairs coincide.
        let pairs = enumerate_pairs(f(1, 2), true, true).unwrap();
        assert_eq!(pairs.len(), 1);
        assert_eq!(pairs[0].key(), (f(0, 1), f(1, 1)));
        // Q = 1/q is allowed once an extra pair is requested.
        let pairs = enumerate_pairs(f(1, 5), true, false).unwrap();
        assert_eq!(pairs.len(), 1 + 2);
    }

    #[test]
    fn previous_pair_reverses_mediant_step() {
        assert_eq!(previous_pair(f(0, 1), f(1, 3)).unwrap(), (f(0, 1), f(1, 2)));
        assert_eq!(previous_pair(f(1, 3), f(2, 5)).unwrap(), (f(1, 3), f(1, 2)));
    }
}
