mod common;

use common::{carrier, quotient_oracle};
use nbhd_core::constructions::pairing;
use nbhd_core::enumerate::{all_maps, enumerate_structures, surjections};
use nbhd_core::{
    final_lift, initial_lift, is_continuous, is_quotient_map, product_space, quotient_structure,
    validate_structure, NbdStructure, ProductMode, SpaceMap, StructuredSink, StructuredSource,
};

#[test]
fn identities_and_composition() {
    let c = carrier("p", 2);
    let all = enumerate_structures(&c).unwrap();
    let maps = all_maps(&c, &c);
    for nu in &all {
        assert!(is_continuous(&SpaceMap::identity(&c), nu, nu).unwrap());
    }
    for f in &maps {
        for g in &maps {
            let gf = f.then(g).unwrap();
            for a in &all {
                for b in &all {
                    if !is_continuous(f, a, b).unwrap() {
                        continue;
                    }
                    for d in &all {
                        if is_continuous(g, b, d).unwrap() {
                            assert!(is_continuous(&gf, a, d).unwrap());
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn continuity_is_monotone_in_the_structures() {
    let c = carrier("p", 2);
    let all = enumerate_structures(&c).unwrap();
    for f in all_maps(&c, &c) {
        for nx in &all {
            for ny in &all {
                if !is_continuous(&f, nx, ny).unwrap() {
                    continue;
                }
                for finer_x in all.iter().filter(|s| nx.leq(s).unwrap()) {
                    for coarser_y in all.iter().filter(|s| s.leq(ny).unwrap()) {
                        assert!(is_continuous(&f, finer_x, coarser_y).unwrap());
                    }
                }
            }
        }
    }
}

#[test]
fn initial_lift_is_the_coarsest_making_sources_continuous() {
    for nx in 1..=3 {
        let x = carrier("x", nx);
        let domain_structures = enumerate_structures(&x).unwrap();
        for ny in 1..=2 {
            let y = carrier("y", ny);
            let cod_structures = enumerate_structures(&y).unwrap();
            for f in all_maps(&x, &y) {
                for nu in &cod_structures {
                    let src = StructuredSource::new(&x, vec![(f.clone(), nu.clone())]).unwrap();
                    let lift = initial_lift(&src);
                    assert!(is_continuous(&f, &lift, nu).unwrap());
                    for mu in &domain_structures {
                        if is_continuous(&f, mu, nu).unwrap() {
                            assert!(lift.leq(mu).unwrap());
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn initial_lift_of_two_maps_on_two_points() {
    let x = carrier("x", 2);
    let y = carrier("y", 2);
    let cod = enumerate_structures(&y).unwrap();
    let dom = enumerate_structures(&x).unwrap();
    let maps = all_maps(&x, &y);
    for f in &maps {
        for g in &maps {
            for a in &cod {
                for b in &cod {
                    let src = StructuredSource::new(
                        &x,
                        vec![(f.clone(), a.clone()), (g.clone(), b.clone())],
                    )
                    .unwrap();
                    let lift = initial_lift(&src);
                    for mu in &dom {
                        let both =
                            is_continuous(f, mu, a).unwrap() && is_continuous(g, mu, b).unwrap();
                        assert_eq!(both, lift.leq(mu).unwrap());
                    }
                }
            }
        }
    }
}

#[test]
fn final_lift_is_the_finest_making_sinks_continuous() {
    for nx in 1..=3 {
        let x = carrier("x", nx);
        let domain_structures = enumerate_structures(&x).unwrap();
        for ny in 1..=2 {
            let y = carrier("y", ny);
            let cod_structures = enumerate_structures(&y).unwrap();
            // all maps, not only surjections: points outside the image stay principal
            for f in all_maps(&x, &y) {
                for nu in &domain_structures {
                    let sink = StructuredSink::new(&y, vec![(f.clone(), nu.clone())]).unwrap();
                    let lift = final_lift(&sink);
                    assert_eq!(lift, quotient_oracle(&f, nu));
                    assert!(is_continuous(&f, nu, &lift).unwrap());
                    for mu in &cod_structures {
                        if is_continuous(&f, nu, mu).unwrap() {
                            assert!(mu.leq(&lift).unwrap());
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn quotient_structures_are_valid_and_quotient() {
    for nx in 1..=3 {
        let x = carrier("x", nx);
        let all = enumerate_structures(&x).unwrap();
        for ny in 1..=nx.min(3) {
            let y = carrier("y", ny);
            for f in surjections(&x, &y) {
                for nu in &all {
                    let q = quotient_structure(&f, nu).unwrap();
                    assert!(validate_structure(&y, q.stacks()).valid);
                    assert_eq!(q, quotient_oracle(&f, nu));
                    assert!(is_quotient_map(&f, nu, &q));
                }
            }
        }
    }
}

#[test]
fn cylinder_product_has_the_universal_property() {
    let x1 = carrier("a", 2);
    let x2 = carrier("b", 2);
    let z = carrier("z", 2);
    let s1_all = enumerate_structures(&x1).unwrap();
    let s2_all = enumerate_structures(&x2).unwrap();
    let z_all = enumerate_structures(&z).unwrap();
    let g1s = all_maps(&z, &x1);
    let g2s = all_maps(&z, &x2);
    for s1 in &s1_all {
        for s2 in &s2_all {
            let p = product_space(s1, s2, ProductMode::Cylinder).unwrap();
            assert!(is_continuous(&p.proj1, &p.structure, s1).unwrap());
            assert!(is_continuous(&p.proj2, &p.structure, s2).unwrap());
            for nz in &z_all {
                for g1 in &g1s {
                    for g2 in &g2s {
                        let h = pairing(g1, g2).unwrap();
                        assert_eq!(h.then(&p.proj1).unwrap(), *g1);
                        assert_eq!(h.then(&p.proj2).unwrap(), *g2);
                        let components = is_continuous(g1, nz, s1).unwrap()
                            && is_continuous(g2, nz, s2).unwrap();
                        assert_eq!(is_continuous(&h, nz, &p.structure).unwrap(), components);
                    }
                }
            }
        }
    }
}

#[test]
fn cylinder_is_below_box() {
    for (n1, n2) in [(1, 2), (2, 2), (2, 3), (3, 3)] {
        let c1 = carrier("a", n1);
        let c2 = carrier("b", n2);
        let a_all = enumerate_structures(&c1).unwrap();
        let b_all = enumerate_structures(&c2).unwrap();
        for s1 in &a_all {
            for s2 in &b_all {
                let cyl = product_space(s1, s2, ProductMode::Cylinder)
                    .unwrap()
                    .structure;
                let boxed = product_space(s1, s2, ProductMode::Box).unwrap().structure;
                assert!(cyl.leq(&boxed).unwrap());
            }
        }
        if n1 >= 2 && n2 >= 2 {
            let cyl = product_space(
                &NbdStructure::discrete(&c1),
                &NbdStructure::discrete(&c2),
                ProductMode::Cylinder,
            )
            .unwrap();
            let boxed = product_space(
                &NbdStructure::discrete(&c1),
                &NbdStructure::discrete(&c2),
                ProductMode::Box,
            )
            .unwrap();
            assert!(!boxed.structure.leq(&cyl.structure).unwrap());
        }
    }
}
