//! Finite carriers, subsets as bitmasks, and p-stacks stored as antichains.
//!
//! A [`PStack`] represents an upward-closed family of subsets by its
//! ⊆-minimal members. Every query (membership, refinement, images) works on
//! that antichain; the full family is only materialised by [`PStack::members`].

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::morphism::SpaceMap;

/// Largest supported carrier; subsets are `u32` bitmasks and powersets of
/// this size are still cheap to sweep.
pub const MAX_CARRIER: usize = 16;

/// A subset of a carrier, as a bitmask over the carrier's point order.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subset(u32);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn from_bits(bits: u32) -> Self {
        Subset(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn singleton(index: usize) -> Self {
        Subset(1 << index)
    }

    /// The first `n` points.
    pub fn full(n: usize) -> Self {
        if n >= 32 {
            Subset(u32::MAX)
        } else {
            Subset((1u32 << n) - 1)
        }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        Subset(indices.into_iter().fold(0, |acc, i| acc | (1 << i)))
    }

    pub fn contains(self, index: usize) -> bool {
        index < 32 && self.0 & (1 << index) != 0
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersects(self, other: Subset) -> bool {
        self.0 & other.0 != 0
    }

    pub fn union(self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    pub fn intersection(self, other: Subset) -> Subset {
        Subset(self.0 & other.0)
    }

    pub fn insert(self, index: usize) -> Subset {
        Subset(self.0 | (1 << index))
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Point indices in increasing order.
    pub fn indices(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..32).filter(move |i| bits & (1 << i) != 0)
    }

    /// Lexicographic key over the sorted index sequence; this is the order
    /// antichains are stored and printed in.
    fn lex_key(self) -> Vec<usize> {
        self.indices().collect()
    }
}

/// A nonempty, ordered set of distinct point labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Carrier {
    labels: Vec<String>,
}

impl Carrier {
    pub fn new<I, S>(labels: I) -> Result<Arc<Carrier>>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::EmptyCarrier);
        }
        if labels.len() > MAX_CARRIER {
            return Err(Error::CarrierTooLarge(labels.len()));
        }
        for (i, label) in labels.iter().enumerate() {
            if label.is_empty()
                || label
                    .chars()
                    .any(|c| c.is_whitespace() || matches!(c, '[' | ']' | ','))
            {
                return Err(Error::InvalidLabel(label.clone()));
            }
            if labels[..i].contains(label) {
                return Err(Error::DuplicateLabel(label.clone()));
            }
        }
        Ok(Arc::new(Carrier { labels }))
    }

    /// `prefix0, prefix1, …` with `n` points.
    pub fn standard(prefix: &str, n: usize) -> Result<Arc<Carrier>> {
        Carrier::new((0..n).map(|i| format!("{prefix}{i}")))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    /// Always false; carriers are nonempty.
    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, index: usize) -> &str {
        &self.labels[index]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownPoint(label.to_string()))
    }

    pub fn check_point(&self, index: usize) -> Result<()> {
        if index < self.len() {
            Ok(())
        } else {
            Err(Error::PointOutOfRange {
                index,
                len: self.len(),
            })
        }
    }

    pub fn full(&self) -> Subset {
        Subset::full(self.len())
    }

    pub fn contains_subset(&self, s: Subset) -> bool {
        s.is_subset_of(self.full())
    }

    pub fn subset<S: AsRef<str>>(&self, labels: &[S]) -> Result<Subset> {
        labels.iter().try_fold(Subset::EMPTY, |acc, l| {
            Ok(acc.insert(self.index_of(l.as_ref())?))
        })
    }

    pub fn labels_of(&self, s: Subset) -> Vec<String> {
        s.indices().map(|i| self.labels[i].clone()).collect()
    }

    /// `[a,b]` in carrier order.
    pub fn render(&self, s: Subset) -> String {
        format!("[{}]", self.labels_of(s).join(","))
    }

    /// All `2^n` subsets, in bitmask order.
    pub fn powerset(&self) -> impl Iterator<Item = Subset> {
        (0..(1u32 << self.len())).map(Subset)
    }
}

impl fmt::Display for Carrier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.labels.join(","))
    }
}

pub(crate) fn same_carrier(a: &Arc<Carrier>, b: &Arc<Carrier>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// Reduce a generator list to its ⊆-minimal elements in canonical order.
pub(crate) fn minimal_antichain<I: IntoIterator<Item = Subset>>(generators: I) -> Vec<Subset> {
    let mut gens: Vec<Subset> = generators.into_iter().collect();
    gens.sort_by_key(|s| (s.len(), s.bits()));
    gens.dedup();
    let mut kept: Vec<Subset> = Vec::with_capacity(gens.len());
    for g in gens {
        if !kept.iter().any(|k| k.is_subset_of(g)) {
            kept.push(g);
        }
    }
    kept.sort_by_key(|s| s.lex_key());
    kept
}

/// An upward-closed family of subsets of a finite carrier.
///
/// The family is `{ S : ∃ m ∈ minimal_sets, m ⊆ S }`. Raw stacks need not
/// satisfy the pairwise intersection property and may be empty; those
/// conditions are checked by [`PStack::satisfies_pip`] and
/// [`PStack::is_nbd_stack`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PStack {
    carrier: Arc<Carrier>,
    minimal: Vec<Subset>,
}

impl PStack {
    pub fn upward_closure<I>(carrier: &Arc<Carrier>, generators: I) -> Result<PStack>
    where
        I: IntoIterator<Item = Subset>,
    {
        let gens: Vec<Subset> = generators.into_iter().collect();
        if let Some(bad) = gens.iter().find(|g| !carrier.contains_subset(**g)) {
            return Err(Error::SubsetOutOfCarrier(bad.bits()));
        }
        Ok(PStack::from_antichain(
            carrier.clone(),
            minimal_antichain(gens),
        ))
    }

    /// Convenience form of [`PStack::upward_closure`] over label lists.
    pub fn from_labels<S: AsRef<str>>(
        carrier: &Arc<Carrier>,
        generators: &[&[S]],
    ) -> Result<PStack> {
        let gens = generators
            .iter()
            .map(|g| carrier.subset(g))
            .collect::<Result<Vec<_>>>()?;
        PStack::upward_closure(carrier, gens)
    }

    pub(crate) fn from_antichain(carrier: Arc<Carrier>, minimal: Vec<Subset>) -> PStack {
        PStack { carrier, minimal }
    }

    /// All subsets containing `x`.
    pub fn principal(carrier: &Arc<Carrier>, x: usize) -> Result<PStack> {
        carrier.check_point(x)?;
        Ok(PStack::from_antichain(
            carrier.clone(),
            vec![Subset::singleton(x)],
        ))
    }

    /// The family `{X}`.
    pub fn whole(carrier: &Arc<Carrier>) -> PStack {
        PStack::from_antichain(carrier.clone(), vec![carrier.full()])
    }

    pub fn empty(carrier: &Arc<Carrier>) -> PStack {
        PStack::from_antichain(carrier.clone(), Vec::new())
    }

    pub fn carrier(&self) -> &Arc<Carrier> {
        &self.carrier
    }

    pub fn minimal_sets(&self) -> &[Subset] {
        &self.minimal
    }

    pub fn is_empty(&self) -> bool {
        self.minimal.is_empty()
    }

    pub fn contains(&self, s: Subset) -> bool {
        self.minimal.iter().any(|m| m.is_subset_of(s))
    }

    /// The whole family, in bitmask order.
    pub fn members(&self) -> Vec<Subset> {
        self.carrier
            .powerset()
            .filter(|s| self.contains(*s))
            .collect()
    }

    /// Pairwise intersection property, checked on the generators.
    pub fn satisfies_pip(&self) -> bool {
        self.minimal
            .iter()
            .enumerate()
            .all(|(i, a)| self.minimal[i..].iter().all(|b| a.intersects(*b)))
    }

    /// Nonempty, and every member contains `x`.
    pub fn is_nbd_stack(&self, x: usize) -> Result<bool> {
        self.carrier.check_point(x)?;
        Ok(!self.minimal.is_empty() && self.minimal.iter().all(|m| m.contains(x)))
    }

    /// `family(self) ⊇ family(other)`.
    pub fn refines(&self, other: &PStack) -> Result<bool> {
        self.check_same_carrier(other)?;
        Ok(other.minimal.iter().all(|t| self.contains(*t)))
    }

    /// The stack whose family is `family(self) ∩ family(other)`.
    pub fn intersection(&self, other: &PStack) -> Result<PStack> {
        self.check_same_carrier(other)?;
        let gens = self
            .minimal
            .iter()
            .flat_map(|a| other.minimal.iter().map(move |b| a.union(*b)));
        Ok(PStack::from_antichain(
            self.carrier.clone(),
            minimal_antichain(gens),
        ))
    }

    /// The stack whose family is `family(self) ∪ family(other)`.
    pub fn union(&self, other: &PStack) -> Result<PStack> {
        self.check_same_carrier(other)?;
        let gens = self.minimal.iter().chain(other.minimal.iter()).copied();
        Ok(PStack::from_antichain(
            self.carrier.clone(),
            minimal_antichain(gens),
        ))
    }

    /// True iff the family is closed under pairwise intersections.
    pub fn is_intersection_closed(&self) -> bool {
        self.minimal.iter().enumerate().all(|(i, a)| {
            self.minimal[i + 1..]
                .iter()
                .all(|b| self.contains(a.intersection(*b)))
        })
    }

    /// Closure under finite intersections. On a finite carrier this is the
    /// principal family at the intersection of all minimal sets; the empty
    /// family stays empty.
    pub fn intersection_closure(&self) -> PStack {
        match self.minimal.split_first() {
            None => self.clone(),
            Some((first, rest)) => {
                let core = rest.iter().fold(*first, |acc, m| acc.intersection(*m));
                PStack::from_antichain(self.carrier.clone(), vec![core])
            }
        }
    }

    /// Preimage family under `f`: generated by `f⁻¹(m)` for minimal `m`.
    pub fn preimage(&self, f: &SpaceMap) -> Result<PStack> {
        if !same_carrier(f.cod(), &self.carrier) {
            return Err(Error::CarrierMismatch(
                "stack does not live on the codomain",
            ));
        }
        let gens = self.minimal.iter().map(|m| f.preimage(*m));
        Ok(PStack::from_antichain(
            f.dom().clone(),
            minimal_antichain(gens),
        ))
    }

    /// Canonical text form, e.g. `[[a],[b,c]]`.
    pub fn to_text(&self) -> String {
        let sets: Vec<String> = self
            .minimal
            .iter()
            .map(|m| self.carrier.render(*m))
            .collect();
        format!("[{}]", sets.join(","))
    }

    /// Parse the canonical text form. Whitespace is ignored, and the listed
    /// sets need not be minimal or sorted.
    pub fn parse_text(carrier: &Arc<Carrier>, text: &str) -> Result<PStack> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = compact
            .strip_prefix('[')
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("stack `{text}` must be enclosed in [ ]")))?;
        let mut gens = Vec::new();
        let mut rest = inner;
        while !rest.is_empty() {
            let body = rest
                .strip_prefix('[')
                .ok_or_else(|| Error::Parse(format!("expected `[` in stack `{text}`")))?;
            let close = body
                .find(']')
                .ok_or_else(|| Error::Parse(format!("unclosed set in stack `{text}`")))?;
            let set = &body[..close];
            let mut subset = Subset::EMPTY;
            if !set.is_empty() {
                for label in set.split(',') {
                    subset = subset.insert(carrier.index_of(label)?);
                }
            }
            gens.push(subset);
            rest = &body[close + 1..];
            if let Some(after) = rest.strip_prefix(',') {
                if after.is_empty() {
                    return Err(Error::Parse(format!("trailing `,` in stack `{text}`")));
                }
                rest = after;
            } else if !rest.is_empty() {
                return Err(Error::Parse(format!("expected `,` in stack `{text}`")));
            }
        }
        PStack::upward_closure(carrier, gens)
    }

    fn check_same_carrier(&self, other: &PStack) -> Result<()> {
        if same_carrier(&self.carrier, &other.carrier) {
            Ok(())
        } else {
            Err(Error::CarrierMismatch("stacks live on different carriers"))
        }
    }
}

impl fmt::Display for PStack {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// The stack on `cod(f)` generated by the images of the members of `s`.
///
/// Images of non-minimal members are supersets of images of minimal ones,
/// so the generators suffice.
pub fn image_stack(f: &SpaceMap, s: &PStack) -> Result<PStack> {
    if !same_carrier(f.dom(), s.carrier()) {
        return Err(Error::CarrierMismatch("stack does not live on the domain"));
    }
    let gens = s.minimal.iter().map(|m| f.image(*m));
    Ok(PStack::from_antichain(
        f.cod().clone(),
        minimal_antichain(gens),
    ))
}
