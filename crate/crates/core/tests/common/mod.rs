#![allow(dead_code)]

use std::sync::Arc;

use nbhd_core::{Carrier, NbdStructure, PStack, SpaceMap, Subset};

/// Every upward-closed family on the carrier (PIP or not, empty included),
/// found by filtering all collections of subsets.
pub fn all_upward_families(carrier: &Arc<Carrier>) -> Vec<PStack> {
    let n = carrier.len();
    assert!(n <= 3, "2^(2^n) collections");
    let subsets = 1u32 << n;
    (0u64..(1u64 << subsets))
        .filter(|&family| {
            (0..subsets).all(|s| {
                family & (1 << s) == 0 || (0..subsets).all(|t| t & s != s || family & (1 << t) != 0)
            })
        })
        .map(|family| {
            let members = (0..subsets)
                .filter(|s| family & (1 << s) != 0)
                .map(Subset::from_bits);
            PStack::upward_closure(carrier, members).unwrap()
        })
        .collect()
}

/// The induced structure on `cod(f)` straight from its defining formula:
/// `A ∈ ν_Y(y)` iff `f⁻¹(A) ∈ ν_X(x)` for every `x` in the fibre of `y`.
/// Points outside the image get their principal stack.
pub fn quotient_oracle(f: &SpaceMap, nu: &NbdStructure) -> NbdStructure {
    let cod = f.cod();
    let stacks = (0..cod.len())
        .map(|y| {
            let fibre: Vec<usize> = (0..f.dom().len()).filter(|&x| f.apply(x) == y).collect();
            let members = cod.powerset().filter(|a| {
                a.contains(y) && fibre.iter().all(|&x| nu.stack(x).contains(f.preimage(*a)))
            });
            PStack::upward_closure(cod, members).unwrap()
        })
        .collect();
    NbdStructure::new(cod, stacks).unwrap()
}

/// Structure order straight from family inclusion over the powerset.
pub fn leq_oracle(a: &NbdStructure, b: &NbdStructure) -> bool {
    (0..a.carrier().len()).all(|x| {
        a.carrier()
            .powerset()
            .all(|s| !a.stack(x).contains(s) || b.stack(x).contains(s))
    })
}

pub fn carrier(prefix: &str, n: usize) -> Arc<Carrier> {
    Carrier::standard(prefix, n).unwrap()
}
