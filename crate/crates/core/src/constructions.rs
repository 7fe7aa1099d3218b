//! Initial and final lifts: products, quotient structures and the quotient-map test.
//!
//! Lifts are computed on generator antichains. For an initial lift the
//! stack at `x` is generated by preimages `f_i⁻¹(m)` of the minimal sets at
//! `f_i(x)`. For a final lift, `{ A : f⁻¹(A) ∈ ν(x) }` is exactly the image
//! stack `f(ν(x))`, so the stack at `y` is the intersection of the image
//! stacks over the fibre of `y` (and the principal stack at `y`).

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::morphism::SpaceMap;
use crate::pstack::{image_stack, minimal_antichain, same_carrier, Carrier, PStack, Subset};
use crate::space::NbdStructure;

/// A carrier together with maps out of it into structured spaces.
#[derive(Clone, Debug)]
pub struct StructuredSource {
    carrier: Arc<Carrier>,
    arrows: Vec<(SpaceMap, NbdStructure)>,
}

impl StructuredSource {
    pub fn new(carrier: &Arc<Carrier>, arrows: Vec<(SpaceMap, NbdStructure)>) -> Result<Self> {
        for (f, nu) in &arrows {
            if !same_carrier(f.dom(), carrier) {
                return Err(Error::CarrierMismatch(
                    "source map does not start at the carrier",
                ));
            }
            if !same_carrier(f.cod(), nu.carrier()) {
                return Err(Error::CarrierMismatch("source structure is not on cod(f)"));
            }
        }
        Ok(StructuredSource {
            carrier: carrier.clone(),
            arrows,
        })
    }
}

/// A carrier together with maps into it from structured spaces.
#[derive(Clone, Debug)]
pub struct StructuredSink {
    carrier: Arc<Carrier>,
    arrows: Vec<(SpaceMap, NbdStructure)>,
}

impl StructuredSink {
    pub fn new(carrier: &Arc<Carrier>, arrows: Vec<(SpaceMap, NbdStructure)>) -> Result<Self> {
        for (f, nu) in &arrows {
            if !same_carrier(f.cod(), carrier) {
                return Err(Error::CarrierMismatch(
                    "sink map does not end at the carrier",
                ));
            }
            if !same_carrier(f.dom(), nu.carrier()) {
                return Err(Error::CarrierMismatch("sink structure is not on dom(f)"));
            }
        }
        Ok(StructuredSink {
            carrier: carrier.clone(),
            arrows,
        })
    }
}

/// The coarsest structure on the source carrier making every map continuous.
/// An empty source yields the indiscrete structure.
pub fn initial_lift(src: &StructuredSource) -> NbdStructure {
    let carrier = &src.carrier;
    let stacks = (0..carrier.len())
        .map(|x| {
            let mut gens = vec![carrier.full()];
            for (f, nu) in &src.arrows {
                gens.extend(
                    nu.stack(f.apply(x))
                        .minimal_sets()
                        .iter()
                        .map(|m| f.preimage(*m)),
                );
            }
            PStack::from_antichain(carrier.clone(), minimal_antichain(gens))
        })
        .collect();
    NbdStructure::from_valid(carrier.clone(), stacks)
}

/// The finest structure on the sink carrier making every map continuous.
/// Points outside every image keep their principal stack.
pub fn final_lift(snk: &StructuredSink) -> NbdStructure {
    let carrier = &snk.carrier;
    let stacks = (0..carrier.len())
        .map(|y| {
            let mut acc = PStack::principal(carrier, y).expect("point in range");
            for (f, nu) in &snk.arrows {
                for x in f.fiber(y).indices() {
                    let img = image_stack(f, nu.stack(x)).expect("sink carriers checked");
                    acc = acc.intersection(&img).expect("same carrier");
                }
            }
            acc
        })
        .collect();
    NbdStructure::from_valid(carrier.clone(), stacks)
}

/// The quotient structure induced on `cod(f)` by a surjection `f`.
pub fn quotient_structure(f: &SpaceMap, nu_x: &NbdStructure) -> Result<NbdStructure> {
    if !f.is_surjective() {
        return Err(Error::NotSurjective);
    }
    let sink = StructuredSink::new(f.cod(), vec![(f.clone(), nu_x.clone())])?;
    Ok(final_lift(&sink))
}

/// `f` is onto and `nu_y` is the structure it induces. Mismatched carriers
/// simply make this false.
pub fn is_quotient_map(f: &SpaceMap, nu_x: &NbdStructure, nu_y: &NbdStructure) -> bool {
    same_carrier(f.cod(), nu_y.carrier()) && quotient_structure(f, nu_x).is_ok_and(|q| &q == nu_y)
}

/// First `(point, set)` where the two structures' stacks disagree on
/// membership, scanning points in carrier order and sets in bitmask order.
pub fn first_disagreement(a: &NbdStructure, b: &NbdStructure) -> Result<Option<(usize, Subset)>> {
    if !same_carrier(a.carrier(), b.carrier()) {
        return Err(Error::CarrierMismatch(
            "structures live on different carriers",
        ));
    }
    for x in 0..a.carrier().len() {
        let (sa, sb) = (a.stack(x), b.stack(x));
        if sa == sb {
            continue;
        }
        if let Some(s) = a
            .carrier()
            .powerset()
            .find(|s| sa.contains(*s) != sb.contains(*s))
        {
            return Ok(Some((x, s)));
        }
    }
    Ok(None)
}

/// How the product stack at a pair of points is generated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProductMode {
    /// `A × X₂` and `X₁ × B`: the initial lift of the projections.
    Cylinder,
    /// `A × B`.
    Box,
}

impl fmt::Display for ProductMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProductMode::Cylinder => "cylinder",
            ProductMode::Box => "box",
        })
    }
}

impl FromStr for ProductMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cylinder" => Ok(ProductMode::Cylinder),
            "box" => Ok(ProductMode::Box),
            other => Err(Error::Parse(format!("unknown product mode `{other}`"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Product {
    pub structure: NbdStructure,
    pub proj1: SpaceMap,
    pub proj2: SpaceMap,
}

/// Pairs `x1:x2`, first factor major.
pub fn product_carrier(c1: &Arc<Carrier>, c2: &Arc<Carrier>) -> Result<Arc<Carrier>> {
    let size = c1.len() * c2.len();
    if size > crate::MAX_CARRIER {
        return Err(Error::CarrierTooLarge(size));
    }
    Carrier::new(
        c1.labels()
            .iter()
            .flat_map(|a| c2.labels().iter().map(move |b| format!("{a}:{b}"))),
    )
}

fn box_set(n2: usize, a: Subset, b: Subset) -> Subset {
    Subset::from_indices(
        a.indices()
            .flat_map(|i| b.indices().map(move |j| i * n2 + j)),
    )
}

pub fn product_space(s1: &NbdStructure, s2: &NbdStructure, mode: ProductMode) -> Result<Product> {
    let (c1, c2) = (s1.carrier(), s2.carrier());
    let carrier = product_carrier(c1, c2)?;
    let n2 = c2.len();
    let proj1 = SpaceMap::new(&carrier, c1, (0..carrier.len()).map(|p| p / n2).collect())?;
    let proj2 = SpaceMap::new(&carrier, c2, (0..carrier.len()).map(|p| p % n2).collect())?;
    let structure = match mode {
        ProductMode::Cylinder => {
            let src = StructuredSource::new(
                &carrier,
                vec![(proj1.clone(), s1.clone()), (proj2.clone(), s2.clone())],
            )?;
            initial_lift(&src)
        }
        ProductMode::Box => {
            let stacks = (0..carrier.len())
                .map(|p| {
                    let (st1, st2) = (s1.stack(p / n2), s2.stack(p % n2));
                    let gens = st1
                        .minimal_sets()
                        .iter()
                        .flat_map(|a| st2.minimal_sets().iter().map(move |b| box_set(n2, *a, *b)));
                    PStack::from_antichain(carrier.clone(), minimal_antichain(gens))
                })
                .collect();
            NbdStructure::from_valid(carrier.clone(), stacks)
        }
    };
    Ok(Product {
        structure,
        proj1,
        proj2,
    })
}

/// `f1 × f2` between the product carriers.
pub fn product_map(f1: &SpaceMap, f2: &SpaceMap) -> Result<SpaceMap> {
    let dom = product_carrier(f1.dom(), f2.dom())?;
    let cod = product_carrier(f1.cod(), f2.cod())?;
    let (n2, m2) = (f2.dom().len(), f2.cod().len());
    let table = (0..dom.len())
        .map(|p| f1.apply(p / n2) * m2 + f2.apply(p % n2))
        .collect();
    SpaceMap::new(&dom, &cod, table)
}

/// `⟨g1, g2⟩ : Z → X1 × X2`.
pub fn pairing(g1: &SpaceMap, g2: &SpaceMap) -> Result<SpaceMap> {
    if !same_carrier(g1.dom(), g2.dom()) {
        return Err(Error::CarrierMismatch("paired maps need a common domain"));
    }
    let cod = product_carrier(g1.cod(), g2.cod())?;
    let m2 = g2.cod().len();
    let table = (0..g1.dom().len())
        .map(|z| g1.apply(z) * m2 + g2.apply(z))
        .collect();
    SpaceMap::new(g1.dom(), &cod, table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morphism::is_continuous;

    fn ab() -> Arc<Carrier> {
        Carrier::new(["a", "b"]).unwrap()
    }

    #[test]
    fn initial_lift_examples() {
        let c = ab();
        let nu = NbdStructure::from_text(&c, &[("a", "[[a,b]]"), ("b", "[[b]]")]).unwrap();
        let src = StructuredSource::new(&c, vec![(SpaceMap::identity(&c), nu.clone())]).unwrap();
        assert_eq!(initial_lift(&src), nu);

        let empty = StructuredSource::new(&c, vec![]).unwrap();
        assert_eq!(initial_lift(&empty), NbdStructure::indiscrete(&c));

        let u = Carrier::new(["u"]).unwrap();
        let collapse = SpaceMap::constant(&c, &u, 0).unwrap();
        let disc = NbdStructure::discrete(&u);
        let src =
            StructuredSource::new(&c, vec![(collapse.clone(), disc.clone()), (collapse, disc)])
                .unwrap();
        assert_eq!(initial_lift(&src), NbdStructure::indiscrete(&c));
    }

    #[test]
    fn product_examples() {
        let c1 = ab();
        let c2 = Carrier::new(["u", "v"]).unwrap();
        let (d1, d2) = (NbdStructure::discrete(&c1), NbdStructure::discrete(&c2));
        let boxed = product_space(&d1, &d2, ProductMode::Box).unwrap().structure;
        let cyl = product_space(&d1, &d2, ProductMode::Cylinder)
            .unwrap()
            .structure;
        let pc = boxed.carrier().clone();
        assert_eq!(boxed, NbdStructure::discrete(&pc));
        assert_eq!(boxed.stack(0).to_text(), "[[a:u]]");
        assert_eq!(cyl.stack(0).to_text(), "[[a:u,a:v],[a:u,b:u]]");
        assert_ne!(cyl, boxed);
        assert!(cyl.leq(&boxed).unwrap());

        let (i1, i2) = (NbdStructure::indiscrete(&c1), NbdStructure::indiscrete(&c2));
        for mode in [ProductMode::Cylinder, ProductMode::Box] {
            let p = product_space(&i1, &i2, mode).unwrap();
            assert_eq!(p.structure, NbdStructure::indiscrete(&pc));
        }
    }

    #[test]
    fn projections_are_continuous() {
        let c1 = ab();
        let c2 = Carrier::new(["u", "v"]).unwrap();
        let s1 = NbdStructure::from_text(&c1, &[("a", "[[a,b]]"), ("b", "[[b]]")]).unwrap();
        let s2 = NbdStructure::discrete(&c2);
        for mode in [ProductMode::Cylinder, ProductMode::Box] {
            let p = product_space(&s1, &s2, mode).unwrap();
            assert!(is_continuous(&p.proj1, &p.structure, &s1).unwrap());
            assert!(is_continuous(&p.proj2, &p.structure, &s2).unwrap());
        }
    }

    #[test]
    fn final_lift_examples() {
        let c = ab();
        let nu = NbdStructure::from_text(&c, &[("a", "[[a,b]]"), ("b", "[[b]]")]).unwrap();
        let sink = StructuredSink::new(&c, vec![(SpaceMap::identity(&c), nu.clone())]).unwrap();
        assert_eq!(final_lift(&sink), nu);

        let single = Carrier::new(["c"]).unwrap();
        let collapse = SpaceMap::constant(&c, &single, 0).unwrap();
        let nu_x = NbdStructure::from_text(&c, &[("a", "[[a]]"), ("b", "[[a,b]]")]).unwrap();
        let sink = StructuredSink::new(&single, vec![(collapse.clone(), nu_x.clone())]).unwrap();
        let lifted = final_lift(&sink);
        assert_eq!(lifted.stack(0).to_text(), "[[c]]");
        assert_eq!(lifted, quotient_structure(&collapse, &nu_x).unwrap());

        let u = Carrier::new(["u"]).unwrap();
        let sink = StructuredSink::new(&u, vec![]).unwrap();
        assert_eq!(final_lift(&sink), NbdStructure::discrete(&u));
    }

    #[test]
    fn final_lift_outside_image_is_principal() {
        let c = ab();
        let uv = Carrier::new(["u", "v"]).unwrap();
        let f = SpaceMap::constant(&c, &uv, 0).unwrap();
        let sink =
            StructuredSink::new(&uv, vec![(f.clone(), NbdStructure::indiscrete(&c))]).unwrap();
        let nu = final_lift(&sink);
        assert_eq!(nu.stack(1), &PStack::principal(&uv, 1).unwrap());
        assert_eq!(nu.stack(0), &PStack::principal(&uv, 0).unwrap());
        assert_eq!(
            quotient_structure(&f, &NbdStructure::indiscrete(&c)),
            Err(Error::NotSurjective)
        );
    }

    #[test]
    fn quotient_of_discrete_three_point_space() {
        let dom = Carrier::new(["a", "b", "c"]).unwrap();
        let cod = Carrier::new(["u", "v"]).unwrap();
        let f = SpaceMap::from_labels(&dom, &cod, &[("a", "u"), ("b", "u"), ("c", "v")]).unwrap();
        let q = quotient_structure(&f, &NbdStructure::discrete(&dom)).unwrap();
        assert_eq!(q, NbdStructure::discrete(&cod));
    }

    #[test]
    fn quotient_map_examples() {
        let c = ab();
        let top = NbdStructure::discrete(&c);
        let bottom = NbdStructure::indiscrete(&c);
        let id = SpaceMap::identity(&c);
        assert!(is_quotient_map(&id, &top, &top));
        assert!(!is_quotient_map(&id, &top, &bottom));

        let single = Carrier::new(["c"]).unwrap();
        let collapse = SpaceMap::constant(&c, &single, 0).unwrap();
        assert!(is_quotient_map(
            &collapse,
            &top,
            &NbdStructure::discrete(&single)
        ));
        assert_eq!(
            first_disagreement(&top, &bottom).unwrap(),
            Some((0, c.subset(&["a"]).unwrap()))
        );
        assert_eq!(first_disagreement(&top, &top).unwrap(), None);
    }

    #[test]
    fn product_map_and_pairing_tables() {
        let c = ab();
        let uv = Carrier::new(["u", "v"]).unwrap();
        let f = SpaceMap::from_labels(&c, &uv, &[("a", "v"), ("b", "u")]).unwrap();
        let g = SpaceMap::identity(&uv);
        let fg = product_map(&f, &g).unwrap();
        assert_eq!(fg.dom().labels(), &["a:u", "a:v", "b:u", "b:v"]);
        assert_eq!(fg.table(), &[2, 3, 0, 1]);
        let p = pairing(&f, &SpaceMap::identity(&c)).unwrap();
        assert_eq!(p.cod().label(p.apply(0)), "v:a");
        assert!(product_carrier(
            &Carrier::standard("x", 5).unwrap(),
            &Carrier::standard("y", 4).unwrap()
        )
        .is_err());
    }
}
