//! Exhaustive enumeration of small neighborhood spaces and the finite search
//! harnesses built on it.
//!
//! The neighborhood stacks at `x` on an `n`-point carrier are the nonempty
//! upper sets of the Boolean lattice of supersets of `{x}`, i.e. the
//! nonempty antichains of that lattice. Carriers of up to 5 points are
//! enumerated (168 antichains of a 16-element lattice); structures, which
//! are tuples of stacks, only up to 3 points.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::constructions::{
    first_disagreement, product_map, product_space, quotient_structure, ProductMode,
};
use crate::error::{Error, Result};
use crate::morphism::{is_continuous, is_continuous_at, SpaceMap};
use crate::pstack::{image_stack, Carrier, PStack, Subset};
use crate::space::NbdStructure;

pub const MAX_STACK_CARRIER: usize = 5;
pub const MAX_STRUCTURE_CARRIER: usize = 3;
pub const MAX_SEARCH_DOMAIN: usize = 3;
pub const MAX_SEARCH_CODOMAIN: usize = 2;

/// All neighborhood stacks at `x`, in antichain-generation order.
pub fn enumerate_nbd_stacks(carrier: &Arc<Carrier>, x: usize) -> Result<Vec<PStack>> {
    if carrier.len() > MAX_STACK_CARRIER {
        return Err(Error::TooLarge {
            what: "stack enumeration",
            size: carrier.len(),
            max: MAX_STACK_CARRIER,
        });
    }
    carrier.check_point(x)?;
    let candidates: Vec<Subset> = carrier.powerset().filter(|s| s.contains(x)).collect();
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    collect_antichains(&candidates, 0, &mut chosen, &mut out);
    out.into_iter()
        .filter(|a| !a.is_empty())
        .map(|a| PStack::upward_closure(carrier, a))
        .collect()
}

fn collect_antichains(
    candidates: &[Subset],
    start: usize,
    chosen: &mut Vec<Subset>,
    out: &mut Vec<Vec<Subset>>,
) {
    out.push(chosen.clone());
    for i in start..candidates.len() {
        let c = candidates[i];
        if chosen
            .iter()
            .all(|m| !m.is_subset_of(c) && !c.is_subset_of(*m))
        {
            chosen.push(c);
            collect_antichains(candidates, i + 1, chosen, out);
            chosen.pop();
        }
    }
}

/// Every neighborhood structure on the carrier; the last point varies fastest.
pub fn enumerate_structures(carrier: &Arc<Carrier>) -> Result<Vec<NbdStructure>> {
    if carrier.len() > MAX_STRUCTURE_CARRIER {
        return Err(Error::TooLarge {
            what: "structure enumeration",
            size: carrier.len(),
            max: MAX_STRUCTURE_CARRIER,
        });
    }
    let per_point = (0..carrier.len())
        .map(|x| enumerate_nbd_stacks(carrier, x))
        .collect::<Result<Vec<_>>>()?;
    let mut tuples: Vec<Vec<PStack>> = vec![Vec::new()];
    for stacks in &per_point {
        tuples = tuples
            .into_iter()
            .flat_map(|prefix| {
                stacks.iter().map(move |s| {
                    let mut t = prefix.clone();
                    t.push(s.clone());
                    t
                })
            })
            .collect();
    }
    Ok(tuples
        .into_iter()
        .map(|stacks| NbdStructure::from_valid(carrier.clone(), stacks))
        .collect())
}

/// All `|cod|^|dom|` maps, tables in lexicographic order.
pub fn all_maps(dom: &Arc<Carrier>, cod: &Arc<Carrier>) -> Vec<SpaceMap> {
    let (n, m) = (dom.len(), cod.len());
    let total = m.pow(n as u32);
    (0..total)
        .map(|mut code| {
            let mut table = vec![0; n];
            for slot in table.iter_mut().rev() {
                *slot = code % m;
                code /= m;
            }
            SpaceMap::new(dom, cod, table).expect("table in range")
        })
        .collect()
}

pub fn surjections(dom: &Arc<Carrier>, cod: &Arc<Carrier>) -> Vec<SpaceMap> {
    all_maps(dom, cod)
        .into_iter()
        .filter(SpaceMap::is_surjective)
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchKind {
    FinalLiftUniversal,
    ProductQuotient,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchParameters {
    pub search: SearchKind,
    pub max_x: usize,
    pub max_y: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<ProductMode>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    /// The computed final lift does not make `f1` continuous.
    NotContinuous,
    /// `nu2` (on the codomain) makes `f1` continuous but is not below the final lift.
    NotFinest,
    /// `f1 × f2` is not a quotient map between the product structures.
    ProductNotQuotient,
}

/// One violation, with the point and set exhibiting it.
///
/// For [`ViolationKind::ProductNotQuotient`], `nu1`/`nu2` are the domain
/// structures of `f1`/`f2`, the witness lives on the product codomain, and
/// `in_final` tells whether the witness set belongs to the structure
/// induced by `f1 × f2` (the product structure says the opposite).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub kind: ViolationKind,
    pub f1: SpaceMap,
    pub nu1: NbdStructure,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f2: Option<SpaceMap>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nu2: Option<NbdStructure>,
    pub witness_point: String,
    pub witness_set: Vec<String>,
    pub in_final: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchReport {
    pub parameters: SearchParameters,
    pub counterexamples: Vec<Counterexample>,
    /// No counterexample, and every case within the bounds was examined.
    pub certified_none: bool,
    pub exhausted: bool,
    pub counts: BTreeMap<String, u64>,
}

impl SearchReport {
    fn finish(
        parameters: SearchParameters,
        mut counterexamples: Vec<Counterexample>,
        counts: BTreeMap<String, u64>,
    ) -> SearchReport {
        counterexamples.sort_by_cached_key(|c| serde_json::to_string(c).expect("serializable"));
        SearchReport {
            parameters,
            certified_none: counterexamples.is_empty(),
            exhausted: true,
            counterexamples,
            counts,
        }
    }

    /// Every listed counterexample reproduces when recomputed from scratch.
    pub fn reverify(&self) -> bool {
        self.counterexamples
            .iter()
            .all(|c| c.reverify(self.parameters.mode).unwrap_or(false))
    }

    pub fn is_consistent(&self) -> bool {
        self.certified_none == (self.counterexamples.is_empty() && self.exhausted)
    }
}

impl Counterexample {
    /// Recompute the violation from the stored maps and structures.
    pub fn reverify(&self, mode: Option<ProductMode>) -> Result<bool> {
        match self.kind {
            ViolationKind::NotContinuous => {
                let lifted = quotient_structure(&self.f1, &self.nu1)?;
                let x = self.f1.dom().index_of(&self.witness_point)?;
                let set = self.f1.cod().subset(&self.witness_set)?;
                let img = image_stack(&self.f1, self.nu1.stack(x))?;
                Ok(!is_continuous_at(&self.f1, &self.nu1, &lifted, x)?
                    && lifted.stack(self.f1.apply(x)).contains(set)
                    && !img.contains(set))
            }
            ViolationKind::NotFinest => {
                let lifted = quotient_structure(&self.f1, &self.nu1)?;
                let Some(mu) = &self.nu2 else {
                    return Ok(false);
                };
                let y = self.f1.cod().index_of(&self.witness_point)?;
                let set = self.f1.cod().subset(&self.witness_set)?;
                Ok(is_continuous(&self.f1, &self.nu1, mu)?
                    && !mu.leq(&lifted)?
                    && mu.stack(y).contains(set)
                    && !lifted.stack(y).contains(set))
            }
            ViolationKind::ProductNotQuotient => {
                let (Some(f2), Some(nu2), Some(mode)) = (&self.f2, &self.nu2, mode) else {
                    return Ok(false);
                };
                let ny1 = quotient_structure(&self.f1, &self.nu1)?;
                let ny2 = quotient_structure(f2, nu2)?;
                let dom = product_space(&self.nu1, nu2, mode)?.structure;
                let cod = product_space(&ny1, &ny2, mode)?.structure;
                let map = product_map(&self.f1, f2)?;
                let induced = quotient_structure(&map, &dom)?;
                let p = cod.carrier().index_of(&self.witness_point)?;
                let set = cod.carrier().subset(&self.witness_set)?;
                Ok(!crate::constructions::is_quotient_map(&map, &dom, &cod)
                    && induced.stack(p).contains(set) == self.in_final
                    && cod.stack(p).contains(set) != self.in_final)
            }
        }
    }
}

fn check_bounds(max_x: usize, max_y: usize) -> Result<()> {
    if max_x == 0 || max_y == 0 {
        return Err(Error::InvalidBounds("bounds must be at least 1".into()));
    }
    if max_x > MAX_SEARCH_DOMAIN {
        return Err(Error::TooLarge {
            what: "search domain",
            size: max_x,
            max: MAX_SEARCH_DOMAIN,
        });
    }
    if max_y > MAX_SEARCH_CODOMAIN {
        return Err(Error::TooLarge {
            what: "search codomain",
            size: max_y,
            max: MAX_SEARCH_CODOMAIN,
        });
    }
    Ok(())
}

/// Surjections sharing one domain, the structures on that domain, and the codomain.
type SurjectionFamily = (Vec<SpaceMap>, Vec<NbdStructure>, Arc<Carrier>);

/// Surjections `x0.. → y0..` within the bounds, grouped by carrier sizes.
fn surjection_families(
    max_x: usize,
    max_y: usize,
    counts: &mut BTreeMap<String, u64>,
) -> Result<Vec<SurjectionFamily>> {
    let mut out = Vec::new();
    for nx in 1..=max_x {
        let dom = Carrier::standard("x", nx)?;
        let structures = enumerate_structures(&dom)?;
        counts.insert(format!("structures_{nx}"), structures.len() as u64);
        for ny in 1..=nx.min(max_y) {
            let cod = Carrier::standard("y", ny)?;
            let maps = surjections(&dom, &cod);
            counts.insert(format!("surjections_{nx}_{ny}"), maps.len() as u64);
            out.push((maps, structures.clone(), cod));
        }
    }
    Ok(out)
}

/// Exhaustively check that quotient structures are final: the induced
/// structure makes `f` continuous, and every codomain structure making `f`
/// continuous lies below it.
pub fn check_final_lift_universal(max_x: usize, max_y: usize) -> Result<SearchReport> {
    check_bounds(max_x, max_y)?;
    let mut counts = BTreeMap::new();
    let families = surjection_families(max_x, max_y, &mut counts)?;
    let mut cases = Vec::new();
    for (maps, structures, cod) in &families {
        let cod_structures = Arc::new(enumerate_structures(cod)?);
        for f in maps {
            for nu in structures {
                cases.push((f.clone(), nu.clone(), cod_structures.clone()));
            }
        }
    }
    counts.insert("cases".into(), cases.len() as u64);
    let comparisons: u64 = cases.iter().map(|c| c.2.len() as u64).sum();
    counts.insert("codomain_comparisons".into(), comparisons);

    let found: Vec<Counterexample> = cases
        .par_iter()
        .map(|(f, nu, cod_structures)| final_lift_violations(f, nu, cod_structures))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    Ok(SearchReport::finish(
        SearchParameters {
            search: SearchKind::FinalLiftUniversal,
            max_x,
            max_y,
            mode: None,
        },
        found,
        counts,
    ))
}

fn final_lift_violations(
    f: &SpaceMap,
    nu: &NbdStructure,
    cod_structures: &[NbdStructure],
) -> Result<Vec<Counterexample>> {
    let lifted = quotient_structure(f, nu)?;
    let mut out = Vec::new();
    for x in 0..f.dom().len() {
        if !is_continuous_at(f, nu, &lifted, x)? {
            let img = image_stack(f, nu.stack(x))?;
            let missing = lifted
                .stack(f.apply(x))
                .minimal_sets()
                .iter()
                .find(|m| !img.contains(**m))
                .copied()
                .unwrap_or_default();
            out.push(Counterexample {
                kind: ViolationKind::NotContinuous,
                f1: f.clone(),
                nu1: nu.clone(),
                f2: None,
                nu2: None,
                witness_point: f.dom().label(x).to_string(),
                witness_set: f.cod().labels_of(missing),
                in_final: true,
            });
        }
    }
    for mu in cod_structures {
        if is_continuous(f, nu, mu)? && !mu.leq(&lifted)? {
            let (y, set) = first_disagreement(mu, &lifted)?.expect("structures differ");
            out.push(Counterexample {
                kind: ViolationKind::NotFinest,
                f1: f.clone(),
                nu1: nu.clone(),
                f2: None,
                nu2: Some(mu.clone()),
                witness_point: f.cod().label(y).to_string(),
                witness_set: f.cod().labels_of(set),
                in_final: lifted.stack(y).contains(set),
            });
        }
    }
    Ok(out)
}

/// Search for pairs of quotient maps whose product is not a quotient map.
///
/// Each presentation `(f, ν_X)` is paired with its induced codomain
/// structure; for every pair of presentations the product map is tested
/// against the product structures formed in `mode`.
pub fn search_product_quotient(
    max_x: usize,
    max_y: usize,
    mode: ProductMode,
) -> Result<SearchReport> {
    check_bounds(max_x, max_y)?;
    let mut counts = BTreeMap::new();
    let families = surjection_families(max_x, max_y, &mut counts)?;
    let mut presentations = Vec::new();
    for (maps, structures, _) in &families {
        for f in maps {
            for nu in structures {
                let induced = quotient_structure(f, nu)?;
                presentations.push((f.clone(), nu.clone(), induced));
            }
        }
    }
    let n = presentations.len();
    counts.insert("presentations".into(), n as u64);
    counts.insert("pairs".into(), (n * n) as u64);

    let found: Vec<Counterexample> = (0..n * n)
        .into_par_iter()
        .map(|k| {
            let (f1, nu1, ny1) = &presentations[k / n];
            let (f2, nu2, ny2) = &presentations[k % n];
            product_violation(f1, nu1, ny1, f2, nu2, ny2, mode)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    counts.insert("counterexamples".into(), found.len() as u64);
    Ok(SearchReport::finish(
        SearchParameters {
            search: SearchKind::ProductQuotient,
            max_x,
            max_y,
            mode: Some(mode),
        },
        found,
        counts,
    ))
}

fn product_violation(
    f1: &SpaceMap,
    nu1: &NbdStructure,
    ny1: &NbdStructure,
    f2: &SpaceMap,
    nu2: &NbdStructure,
    ny2: &NbdStructure,
    mode: ProductMode,
) -> Result<Option<Counterexample>> {
    let dom = product_space(nu1, nu2, mode)?.structure;
    let cod = product_space(ny1, ny2, mode)?.structure;
    let map = product_map(f1, f2)?;
    let induced = quotient_structure(&map, &dom)?;
    let Some((p, set)) = first_disagreement(&induced, &cod)? else {
        return Ok(None);
    };
    Ok(Some(Counterexample {
        kind: ViolationKind::ProductNotQuotient,
        f1: f1.clone(),
        nu1: nu1.clone(),
        f2: Some(f2.clone()),
        nu2: Some(nu2.clone()),
        witness_point: cod.carrier().label(p).to_string(),
        witness_set: cod.carrier().labels_of(set),
        in_final: induced.stack(p).contains(set),
    }))
}
