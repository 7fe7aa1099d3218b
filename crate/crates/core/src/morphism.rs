//! Maps between finite carriers and the continuity test.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::ser::{Serialize, SerializeMap, Serializer};

use crate::error::{Error, Result};
use crate::pstack::{image_stack, same_carrier, Carrier, Subset};
use crate::space::NbdStructure;

/// A total function between two finite carriers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpaceMap {
    dom: Arc<Carrier>,
    cod: Arc<Carrier>,
    table: Vec<usize>,
}

impl SpaceMap {
    pub fn new(dom: &Arc<Carrier>, cod: &Arc<Carrier>, table: Vec<usize>) -> Result<SpaceMap> {
        if table.len() != dom.len() {
            return Err(Error::InvalidMap(format!(
                "table has {} entries for a domain of {} points",
                table.len(),
                dom.len()
            )));
        }
        for &y in &table {
            cod.check_point(y)?;
        }
        Ok(SpaceMap {
            dom: dom.clone(),
            cod: cod.clone(),
            table,
        })
    }

    /// Build from `(source label, target label)` pairs; every domain point
    /// must appear exactly once.
    pub fn from_labels<S: AsRef<str>, T: AsRef<str>>(
        dom: &Arc<Carrier>,
        cod: &Arc<Carrier>,
        pairs: &[(S, T)],
    ) -> Result<SpaceMap> {
        let mut table = vec![None; dom.len()];
        for (x, y) in pairs {
            let xi = dom.index_of(x.as_ref())?;
            let yi = cod.index_of(y.as_ref())?;
            if table[xi].replace(yi).is_some() {
                return Err(Error::InvalidMap(format!(
                    "point `{}` is assigned twice",
                    x.as_ref()
                )));
            }
        }
        let table = table
            .into_iter()
            .enumerate()
            .map(|(i, y)| {
                y.ok_or_else(|| Error::InvalidMap(format!("point `{}` has no image", dom.label(i))))
            })
            .collect::<Result<Vec<_>>>()?;
        SpaceMap::new(dom, cod, table)
    }

    /// Parse the JSON form: an object mapping domain labels to codomain labels.
    pub fn from_json(
        dom: &Arc<Carrier>,
        cod: &Arc<Carrier>,
        value: &serde_json::Value,
    ) -> Result<SpaceMap> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::Parse("a map must be a JSON object".into()))?;
        let pairs = obj
            .iter()
            .map(|(k, v)| {
                v.as_str()
                    .map(|v| (k.as_str(), v))
                    .ok_or_else(|| Error::Parse(format!("image of `{k}` must be a string")))
            })
            .collect::<Result<Vec<_>>>()?;
        SpaceMap::from_labels(dom, cod, &pairs)
    }

    pub fn identity(carrier: &Arc<Carrier>) -> SpaceMap {
        SpaceMap {
            dom: carrier.clone(),
            cod: carrier.clone(),
            table: (0..carrier.len()).collect(),
        }
    }

    pub fn constant(dom: &Arc<Carrier>, cod: &Arc<Carrier>, y: usize) -> Result<SpaceMap> {
        SpaceMap::new(dom, cod, vec![y; dom.len()])
    }

    pub fn dom(&self) -> &Arc<Carrier> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<Carrier> {
        &self.cod
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    pub fn image(&self, s: Subset) -> Subset {
        Subset::from_indices(s.indices().map(|x| self.table[x]))
    }

    pub fn preimage(&self, s: Subset) -> Subset {
        Subset::from_indices((0..self.table.len()).filter(|&x| s.contains(self.table[x])))
    }

    pub fn fiber(&self, y: usize) -> Subset {
        self.preimage(Subset::singleton(y))
    }

    pub fn is_surjective(&self) -> bool {
        self.image(self.dom.full()) == self.cod.full()
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &SpaceMap) -> Result<SpaceMap> {
        if !same_carrier(&self.cod, &other.dom) {
            return Err(Error::CarrierMismatch("maps are not composable"));
        }
        Ok(SpaceMap {
            dom: self.dom.clone(),
            cod: other.cod.clone(),
            table: self.table.iter().map(|&y| other.table[y]).collect(),
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("string map serializes")
    }

    fn check_structures(&self, nu_x: &NbdStructure, nu_y: &NbdStructure) -> Result<()> {
        if !same_carrier(&self.dom, nu_x.carrier()) {
            return Err(Error::CarrierMismatch("domain structure is not on dom(f)"));
        }
        if !same_carrier(&self.cod, nu_y.carrier()) {
            return Err(Error::CarrierMismatch(
                "codomain structure is not on cod(f)",
            ));
        }
        Ok(())
    }
}

impl Serialize for SpaceMap {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let entries: BTreeMap<&str, &str> = (0..self.table.len())
            .map(|x| (self.dom.label(x), self.cod.label(self.table[x])))
            .collect();
        let mut map = serializer.serialize_map(Some(entries.len()))?;
        for (k, v) in entries {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

/// `f(ν_X(x))` refines `ν_Y(f(x))`.
pub fn is_continuous_at(
    f: &SpaceMap,
    nu_x: &NbdStructure,
    nu_y: &NbdStructure,
    x: usize,
) -> Result<bool> {
    f.check_structures(nu_x, nu_y)?;
    f.dom.check_point(x)?;
    image_stack(f, nu_x.stack(x))?.refines(nu_y.stack(f.apply(x)))
}

pub fn is_continuous(f: &SpaceMap, nu_x: &NbdStructure, nu_y: &NbdStructure) -> Result<bool> {
    f.check_structures(nu_x, nu_y)?;
    for x in 0..f.dom.len() {
        if !is_continuous_at(f, nu_x, nu_y, x)? {
            return Ok(false);
        }
    }
    Ok(true)
}
