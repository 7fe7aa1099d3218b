//! Points, basic neighborhoods and membership predicates for the product map
//! `Φ = φ × id : ℝ × ℚ → ℝ/ℤ × ℚ`, where `φ` identifies all integers.
//!
//! The sets involved, for a base value `q`:
//!
//! * `A_q = ⋃_z (z − 1/2, z + 1/2) × (q − 1/(1+|z|), q + 1/(1+|z|))`
//! * `B_q = ℤ × (q − 1, q + 1)`
//! * `Φ(A_q)`, whose preimage is `A_q ∪ B_q`.
//!
//! Only rational points are ever handled. Every predicate below is decided
//! exactly; every negative claim comes with a rational witness that is
//! re-checked against the predicates before it is returned.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Signed;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};

use super::{ContinuumError, Rat};

/// A point of `ℝ × ℚ` with rational first coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointRQ {
    pub x: Rat,
    pub r: Rat,
}

impl PointRQ {
    pub fn new(x: Rat, r: Rat) -> PointRQ {
        PointRQ { x, r }
    }
}

/// A point of `ℝ/ℤ`: the class of the integers, or a non-integral real.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "class", content = "x", rename_all = "kebab-case")]
pub enum QuotPoint {
    IntegerClass,
    NonInt(Rat),
}

impl QuotPoint {
    /// `φ(x)`.
    pub fn of(x: &Rat) -> QuotPoint {
        if x.is_integer() {
            QuotPoint::IntegerClass
        } else {
            QuotPoint::NonInt(x.clone())
        }
    }

    pub fn non_int(x: Rat) -> Result<QuotPoint, ContinuumError> {
        if x.is_integer() {
            Err(ContinuumError::Domain(format!("{x} is an integer")))
        } else {
            Ok(QuotPoint::NonInt(x))
        }
    }
}

/// `Φ(p) = (φ(x), r)`.
pub fn phi(p: &PointRQ) -> (QuotPoint, Rat) {
    (QuotPoint::of(&p.x), p.r.clone())
}

/// `1/(1+|z|)`, the vertical radius of the `z`-th box of `A_q`.
pub fn box_radius(z: &BigInt) -> Rat {
    Rat::from_bigint(z.abs() + 1).recip()
}

/// The integer strictly within 1/2 of `x`, if any (none at half-integers).
pub fn nearest_integer(x: &Rat) -> Option<BigInt> {
    let z = (x + Rat::half()).floor();
    ((x - Rat::from_bigint(z.clone())).abs() < Rat::half()).then_some(z)
}

/// Membership predicates for `A_q`, `B_q` and `Φ(A_q)`.
///
/// The radius of `B_q` is a parameter only so that tests can break it and
/// watch the preimage identity fail; [`Predicates::default`] is the real one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Predicates {
    bq_radius: Rat,
}

impl Default for Predicates {
    fn default() -> Self {
        Predicates {
            bq_radius: Rat::one(),
        }
    }
}

impl Predicates {
    pub fn with_bq_radius(bq_radius: Rat) -> Predicates {
        Predicates { bq_radius }
    }

    /// Only `z = floor(x)` or `z = ceil(x)` can be within 1/2 of `x`.
    pub fn in_aq(&self, q: &Rat, p: &PointRQ) -> bool {
        let dr = (&p.r - q).abs();
        [p.x.floor(), p.x.ceil()].into_iter().any(|z| {
            (&p.x - Rat::from_bigint(z.clone())).abs() < Rat::half() && dr < box_radius(&z)
        })
    }

    pub fn in_bq(&self, q: &Rat, p: &PointRQ) -> bool {
        p.x.is_integer() && (&p.r - q).abs() < self.bq_radius
    }

    /// Membership of `(c, r)` in `Φ(A_q)`. The integer class is covered by
    /// the widest box (`z = 0`, radius 1).
    pub fn in_phi_aq(&self, q: &Rat, c: &QuotPoint, r: &Rat) -> bool {
        let dr = (r - q).abs();
        match c {
            QuotPoint::IntegerClass => dr < Rat::one(),
            QuotPoint::NonInt(x) => nearest_integer(x).is_some_and(|z| dr < box_radius(&z)),
        }
    }
}

pub fn membership_aq(q: &Rat, p: &PointRQ) -> bool {
    Predicates::default().in_aq(q, p)
}

pub fn membership_bq(q: &Rat, p: &PointRQ) -> bool {
    Predicates::default().in_bq(q, p)
}

pub fn membership_phi_aq(q: &Rat, c: &QuotPoint, r: &Rat) -> bool {
    Predicates::default().in_phi_aq(q, c, r)
}

fn check_radius(what: &str, eps: &Rat) -> Result<(), ContinuumError> {
    if eps.is_positive() && *eps <= Rat::half() {
        Ok(())
    } else {
        Err(ContinuumError::Domain(format!(
            "{what} {eps} must lie in (0, 1/2]"
        )))
    }
}

/// Radii `ε_z` describing the basic neighborhood
/// `U(ε) = φ(⋃_z (z − ε_z, z + ε_z))` of the integer class.
///
/// Radii are capped at 1/2 so the intervals are disjoint. Every
/// neighborhood of the integer class contains one of this form, so the cap
/// loses nothing for non-containment claims.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsFamily {
    default: Rat,
    overrides: BTreeMap<BigInt, Rat>,
}

impl EpsFamily {
    pub fn new(
        default: Rat,
        overrides: BTreeMap<BigInt, Rat>,
    ) -> Result<EpsFamily, ContinuumError> {
        check_radius("default radius", &default)?;
        for (z, eps) in &overrides {
            check_radius(&format!("radius at {z}"), eps)?;
        }
        Ok(EpsFamily { default, overrides })
    }

    pub fn constant(eps: Rat) -> Result<EpsFamily, ContinuumError> {
        EpsFamily::new(eps, BTreeMap::new())
    }

    pub fn radius(&self, z: &BigInt) -> &Rat {
        self.overrides.get(z).unwrap_or(&self.default)
    }

    /// Membership of a quotient point in `U(ε)`.
    pub fn contains(&self, c: &QuotPoint) -> bool {
        match c {
            QuotPoint::IntegerClass => true,
            QuotPoint::NonInt(x) => [x.floor(), x.ceil()]
                .into_iter()
                .any(|z| (x - Rat::from_bigint(z.clone())).abs() < *self.radius(&z)),
        }
    }
}

impl Serialize for EpsFamily {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("EpsFamily", 2)?;
        st.serialize_field("default", &self.default)?;
        let overrides: BTreeMap<String, &Rat> = self
            .overrides
            .iter()
            .map(|(z, e)| (z.to_string(), e))
            .collect();
        st.serialize_field("overrides", &overrides)?;
        st.end()
    }
}

/// The basic product neighborhood `U(ε) × (q − δ, q + δ)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoxSpec {
    pub eps: EpsFamily,
    pub delta: Rat,
}

impl BoxSpec {
    pub fn new(eps: EpsFamily, delta: Rat) -> Result<BoxSpec, ContinuumError> {
        if !delta.is_positive() {
            return Err(ContinuumError::Domain(format!(
                "delta {delta} must be positive"
            )));
        }
        Ok(BoxSpec { eps, delta })
    }

    pub fn contains(&self, q: &Rat, c: &QuotPoint, r: &Rat) -> bool {
        self.eps.contains(c) && (r - q).abs() < self.delta
    }
}

/// Outcome of [`decide_box_containment`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "decision", rename_all = "kebab-case")]
pub enum BoxDecision {
    Contained { reason: String },
    NotContained { witness: PointRQ },
}

impl BoxDecision {
    pub fn is_contained(&self) -> bool {
        matches!(self, BoxDecision::Contained { .. })
    }
}

/// Decide whether `(z − ε, z + ε) × (q − δ, q + δ) ⊆ A_q ∪ B_q`.
///
/// Containment holds iff `δ ≤ 1/(1+|z|)`: a non-integral `x` in the strip
/// has `z` as its only integer within 1/2, and the single integral `x = z`
/// is covered by `B_q` since `δ ≤ 1`. Otherwise the point
/// `(z + ε/2, q + mediant(1/(1+|z|), δ))` is in the box and outside both sets.
pub fn decide_box_containment(
    q: &Rat,
    z: &BigInt,
    eps: &Rat,
    delta: &Rat,
) -> Result<BoxDecision, ContinuumError> {
    check_radius("eps", eps)?;
    if !delta.is_positive() {
        return Err(ContinuumError::Domain(format!(
            "delta {delta} must be positive"
        )));
    }
    let radius = box_radius(z);
    if *delta <= radius {
        return Ok(BoxDecision::Contained {
            reason: format!(
                "delta {delta} <= 1/(1+|z|) = {radius}: every non-integral x in the strip has nearest integer {z}, \
                 so the point lies in the {z}-th box of A_q; the integral point x = {z} lies in B_q since delta <= 1"
            ),
        });
    }
    let zr = Rat::from_bigint(z.clone());
    let witness = PointRQ::new(&zr + eps / Rat::int(2), q + radius.mediant(delta));
    let preds = Predicates::default();
    let in_box = (&witness.x - &zr).abs() < *eps && (&witness.r - q).abs() < *delta;
    if !in_box || preds.in_aq(q, &witness) || preds.in_bq(q, &witness) {
        return Err(ContinuumError::WitnessRejected(format!(
            "box witness ({}, {}) for z = {z}",
            witness.x, witness.r
        )));
    }
    Ok(BoxDecision::NotContained { witness })
}

/// A point of `U(ε) × (q − δ, q + δ)` outside `Φ(A_q)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProductWitness {
    pub point: QuotPoint,
    pub r: Rat,
    /// The box index whose vertical radius `1/(1+z*)` drops below `δ`.
    #[serde(serialize_with = "serialize_display")]
    pub z_star: BigInt,
}

/// Exhibit a point of the basic neighborhood `box` that is not in `Φ(A_q)`.
///
/// With `z* = ⌈1/δ⌉` the `z*`-th box of `A_q` is thinner than `δ`, so the
/// point `(z* + min(ε_{z*}, 1/2)/2, q + (1/(1+z*) + δ)/2)` lies in the
/// neighborhood but above that box.
pub fn witness_product_side(q: &Rat, spec: &BoxSpec) -> Result<ProductWitness, ContinuumError> {
    let z_star = spec.delta.recip().ceil();
    let zr = Rat::from_bigint(z_star.clone());
    let half_width = spec.eps.radius(&z_star).clone().min(Rat::half()) / Rat::int(2);
    let point = QuotPoint::non_int(&zr + half_width)?;
    let r = q + (box_radius(&z_star) + &spec.delta) / Rat::int(2);
    if !spec.eps.contains(&point)
        || !spec.contains(q, &point, &r)
        || membership_phi_aq(q, &point, &r)
    {
        return Err(ContinuumError::WitnessRejected(format!(
            "product witness for delta = {} does not separate",
            spec.delta
        )));
    }
    Ok(ProductWitness { point, r, z_star })
}

fn serialize_display<S: Serializer>(z: &BigInt, serializer: S) -> Result<S::Ok, S::Error> {
    serializer.collect_str(z)
}
