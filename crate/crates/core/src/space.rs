//! Neighborhood structures on a fixed carrier and their complete lattice.
//!
//! The order is `ν ≤ ν′` iff every `ν(x)` is contained in `ν′(x)` as a family,
//! i.e. iff the identity `(X, ν′) → (X, ν)` is continuous. The indiscrete
//! structure (`ν(x) = {X}`) is the bottom and the discrete one (principal
//! stacks) is the top.

use std::sync::Arc;

use serde::ser::{Serialize, SerializeMap, Serializer};

use crate::error::{Error, Result};
use crate::pstack::{same_carrier, Carrier, PStack};

/// Outcome of [`validate_structure`]: the first failing point and set, if any.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Validation {
    pub valid: bool,
    pub point: Option<String>,
    /// Offending member in text form; `None` when the family is empty or
    /// the failure is not about a particular set.
    pub set: Option<String>,
    pub reason: Option<String>,
}

impl Validation {
    fn ok() -> Self {
        Validation {
            valid: true,
            point: None,
            set: None,
            reason: None,
        }
    }

    fn fail(point: &str, set: Option<String>, reason: impl Into<String>) -> Self {
        Validation {
            valid: false,
            point: Some(point.to_string()),
            set,
            reason: Some(reason.into()),
        }
    }
}

/// Check a candidate point → stack assignment against the neighborhood axioms.
pub fn validate_structure(carrier: &Arc<Carrier>, stacks: &[PStack]) -> Validation {
    if stacks.len() != carrier.len() {
        return Validation {
            valid: false,
            point: None,
            set: None,
            reason: Some(format!(
                "{} stacks given for {} points",
                stacks.len(),
                carrier.len()
            )),
        };
    }
    for (x, s) in stacks.iter().enumerate() {
        let label = carrier.label(x);
        if !same_carrier(s.carrier(), carrier) {
            return Validation::fail(label, None, "stack lives on another carrier");
        }
        if s.is_empty() {
            return Validation::fail(label, None, "empty family");
        }
        if let Some(m) = s.minimal_sets().iter().find(|m| !m.contains(x)) {
            return Validation::fail(
                label,
                Some(carrier.render(*m)),
                format!("member does not contain `{label}`"),
            );
        }
    }
    Validation::ok()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NbdStructure {
    carrier: Arc<Carrier>,
    stacks: Vec<PStack>,
}

impl NbdStructure {
    pub fn new(carrier: &Arc<Carrier>, stacks: Vec<PStack>) -> Result<NbdStructure> {
        let v = validate_structure(carrier, &stacks);
        if !v.valid {
            return Err(Error::InvalidStructure {
                point: v.point.unwrap_or_default(),
                reason: match v.set {
                    Some(set) => format!("{} ({set})", v.reason.unwrap_or_default()),
                    None => v.reason.unwrap_or_default(),
                },
            });
        }
        Ok(NbdStructure::from_valid(carrier.clone(), stacks))
    }

    pub(crate) fn from_valid(carrier: Arc<Carrier>, stacks: Vec<PStack>) -> NbdStructure {
        debug_assert!(validate_structure(&carrier, &stacks).valid);
        NbdStructure { carrier, stacks }
    }

    /// Every point gets its principal stack (the top of the lattice).
    pub fn discrete(carrier: &Arc<Carrier>) -> NbdStructure {
        let stacks = (0..carrier.len())
            .map(|x| PStack::principal(carrier, x).expect("point in range"))
            .collect();
        NbdStructure::from_valid(carrier.clone(), stacks)
    }

    /// Every point gets `{X}` (the bottom of the lattice).
    pub fn indiscrete(carrier: &Arc<Carrier>) -> NbdStructure {
        let stacks = vec![PStack::whole(carrier); carrier.len()];
        NbdStructure::from_valid(carrier.clone(), stacks)
    }

    /// Build from `(label, stack text)` pairs covering every point.
    pub fn from_text(carrier: &Arc<Carrier>, entries: &[(&str, &str)]) -> Result<NbdStructure> {
        let mut stacks: Vec<Option<PStack>> = vec![None; carrier.len()];
        for (label, text) in entries {
            let x = carrier.index_of(label)?;
            stacks[x] = Some(PStack::parse_text(carrier, text)?);
        }
        let stacks = stacks
            .into_iter()
            .enumerate()
            .map(|(x, s)| {
                s.ok_or_else(|| Error::InvalidStructure {
                    point: carrier.label(x).to_string(),
                    reason: "no stack given".into(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        NbdStructure::new(carrier, stacks)
    }

    /// Parse the JSON form: an object mapping each label to a stack, either
    /// as canonical text (`"[[a],[a,b]]"`) or as nested arrays of labels.
    /// The carrier is the set of keys in sorted order.
    pub fn from_json(value: &serde_json::Value) -> Result<NbdStructure> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::Parse("a structure must be a JSON object".into()))?;
        let carrier = Carrier::new(obj.keys().cloned())?;
        NbdStructure::from_json_on(&carrier, value)
    }

    /// As [`NbdStructure::from_json`], on a given carrier.
    pub fn from_json_on(carrier: &Arc<Carrier>, value: &serde_json::Value) -> Result<NbdStructure> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::Parse("a structure must be a JSON object".into()))?;
        let mut texts = Vec::with_capacity(obj.len());
        for (label, stack) in obj {
            let text = match stack {
                serde_json::Value::String(s) => s.clone(),
                serde_json::Value::Array(sets) => {
                    let mut parts = Vec::with_capacity(sets.len());
                    for set in sets {
                        let labels = set
                            .as_array()
                            .and_then(|ls| {
                                ls.iter().map(|l| l.as_str()).collect::<Option<Vec<_>>>()
                            })
                            .ok_or_else(|| {
                                Error::Parse(format!("stack of `{label}` must list sets of labels"))
                            })?;
                        parts.push(format!("[{}]", labels.join(",")));
                    }
                    format!("[{}]", parts.join(","))
                }
                _ => {
                    return Err(Error::Parse(format!(
                        "stack of `{label}` has the wrong type"
                    )))
                }
            };
            texts.push((label.as_str(), text));
        }
        let entries: Vec<(&str, &str)> = texts.iter().map(|(l, t)| (*l, t.as_str())).collect();
        NbdStructure::from_text(carrier, &entries)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("string map serializes")
    }

    pub fn carrier(&self) -> &Arc<Carrier> {
        &self.carrier
    }

    pub fn stack(&self, x: usize) -> &PStack {
        &self.stacks[x]
    }

    pub fn stacks(&self) -> &[PStack] {
        &self.stacks
    }

    /// `self ≤ other`: every stack of `other` refines the matching stack of `self`.
    pub fn leq(&self, other: &NbdStructure) -> Result<bool> {
        self.check_same_carrier(other)?;
        for (mine, theirs) in self.stacks.iter().zip(&other.stacks) {
            if !theirs.refines(mine)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Every stack is a filter.
    pub fn is_pretopological(&self) -> bool {
        self.stacks.iter().all(PStack::is_intersection_closed)
    }

    /// Close every stack under finite intersections: the least pretopological
    /// structure above `self`.
    pub fn pretop_modification(&self) -> NbdStructure {
        let stacks = self
            .stacks
            .iter()
            .map(PStack::intersection_closure)
            .collect();
        NbdStructure::from_valid(self.carrier.clone(), stacks)
    }

    fn check_same_carrier(&self, other: &NbdStructure) -> Result<()> {
        if same_carrier(&self.carrier, &other.carrier) {
            Ok(())
        } else {
            Err(Error::CarrierMismatch(
                "structures live on different carriers",
            ))
        }
    }
}

impl Serialize for NbdStructure {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut entries: Vec<(&str, String)> = self
            .stacks
            .iter()
            .enumerate()
            .map(|(x, s)| (self.carrier.label(x), s.to_text()))
            .collect();
        entries.sort();
        let mut map = serializer.serialize_map(Some(entries.len()))?;
        for (k, v) in entries {
            map.serialize_entry(k, &v)?;
        }
        map.end()
    }
}

fn pointwise<F>(
    carrier: &Arc<Carrier>,
    list: &[NbdStructure],
    empty: NbdStructure,
    op: F,
) -> Result<NbdStructure>
where
    F: Fn(&PStack, &PStack) -> Result<PStack>,
{
    let Some((first, rest)) = list.split_first() else {
        return Ok(empty);
    };
    let mut stacks = first.stacks.clone();
    for nu in std::iter::once(first).chain(rest) {
        if !same_carrier(&nu.carrier, carrier) {
            return Err(Error::CarrierMismatch(
                "structure is not on the given carrier",
            ));
        }
    }
    for nu in rest {
        for (acc, s) in stacks.iter_mut().zip(&nu.stacks) {
            *acc = op(acc, s)?;
        }
    }
    Ok(NbdStructure::from_valid(carrier.clone(), stacks))
}

/// Pointwise intersection of families; the empty meet is the discrete structure.
pub fn structure_meet(carrier: &Arc<Carrier>, list: &[NbdStructure]) -> Result<NbdStructure> {
    pointwise(
        carrier,
        list,
        NbdStructure::discrete(carrier),
        PStack::intersection,
    )
}

/// Pointwise union of families; the empty join is the indiscrete structure.
pub fn structure_join(carrier: &Arc<Carrier>, list: &[NbdStructure]) -> Result<NbdStructure> {
    pointwise(
        carrier,
        list,
        NbdStructure::indiscrete(carrier),
        PStack::union,
    )
}
