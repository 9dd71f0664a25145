//! Property tests for complexes, chains, Coxeter groups, buildings and
//! support lattices.

use std::collections::BTreeSet;

use cathom::building::an_building;
use cathom::coxeter::{CoxeterDiagram, CoxeterGroup};
use cathom::simplicial::{homology, join, reduced_homology, sphere_complex, support, suspend_cycle};
use cathom::{Chain, Simplex, SimplicialComplex, SphericalBuilding, SupportLattice};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::OnceLock;

fn fano() -> &'static (SphericalBuilding, Vec<Chain>, SupportLattice) {
    static FANO: OnceLock<(SphericalBuilding, Vec<Chain>, SupportLattice)> = OnceLock::new();
    FANO.get_or_init(|| {
        let b = an_building(2, 2).unwrap();
        let c0 = b.chambers()[0].clone();
        let basis = b.solomon_tits_basis(&c0).unwrap().cycles;
        let l = SupportLattice::for_building(&b).unwrap();
        (b, basis, l)
    })
}

fn combination(basis: &[Chain], coefs: &[i64]) -> Chain {
    let mut z = Chain::zero(basis[0].degree());
    for (b, &c) in basis.iter().zip(coefs) {
        for (s, &v) in b.terms() {
            z.add_term(s.clone(), c * v).unwrap();
        }
    }
    z
}

fn arb_complex() -> impl Strategy<Value = SimplicialComplex> {
    prop::collection::vec(prop::collection::btree_set(0usize..8, 1..5), 1..8).prop_map(|facets| {
        SimplicialComplex::from_facets(facets.into_iter().map(|f| f.into_iter().collect::<Vec<_>>())).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn boundary_of_boundary_vanishes(k in arb_complex(), coefs in prop::collection::vec(-5i64..=5, 64)) {
        let dim = k.dimension() as usize;
        let mut z = Chain::zero(dim);
        for (s, c) in k.faces(dim).iter().zip(coefs.iter().cycle()) {
            z.add_term(s.clone(), *c).unwrap();
        }
        prop_assert!(z.boundary().boundary().is_zero());
    }

    #[test]
    fn euler_characteristic_matches_betti_numbers(k in arb_complex()) {
        let alternating: i64 = (0..=k.dimension())
            .map(|d| {
                let h = homology(&k, d, false).unwrap();
                if d % 2 == 0 { h.betti as i64 } else { -(h.betti as i64) }
            })
            .sum();
        prop_assert_eq!(alternating, k.euler_characteristic());
    }

    #[test]
    fn join_with_a_point_is_acyclic(k in arb_complex()) {
        let point = SimplicialComplex::from_facets([vec![0]]).unwrap();
        let cone = join(&k, &point);
        for d in -1..=cone.dimension() {
            prop_assert!(reduced_homology(&cone, d).is_trivial());
        }
    }

    #[test]
    fn suspension_joins_support(coefs in prop::collection::vec(-3i64..=3, 8), n in 0usize..2) {
        let (b, basis, _) = fano();
        let z = combination(basis, &coefs);
        prop_assume!(!z.is_zero());
        let k = b.complex();
        let sup = support(&z, k).unwrap();
        prop_assert!(sup.is_pure());
        prop_assert_eq!(sup.dimension(), 1);
        let sphere = sphere_complex(n as i64).unwrap();
        let zs = suspend_cycle(&z, k, n).unwrap();
        prop_assert!(zs.is_cycle());
        let ground = join(k, &sphere);
        let (lifted, joined) = (support(&zs, &ground).unwrap(), join(&sup, &sphere));
        prop_assert_eq!(lifted.facets(), joined.facets());
    }

    #[test]
    fn supports_lie_in_the_lattice(coefs in prop::collection::vec(-3i64..=3, 8)) {
        let (b, basis, l) = fano();
        let z = combination(basis, &coefs);
        prop_assume!(!z.is_zero());
        prop_assert!(l.contains(&support(&z, b.complex()).unwrap()));
    }

    #[test]
    fn lattice_is_closed_under_union_and_intersection(seed in any::<u64>()) {
        let (_, _, l) = fano();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = l.random_element(&mut rng);
        let c = l.random_element(&mut rng);
        prop_assert!(l.contains(&a.union(&c)));
        prop_assert!(l.contains(&a.intersection(&c)));
        prop_assert!(l.minimal_element().is_subcomplex_of(&a));
    }

    #[test]
    fn dihedral_groups(m in 2u32..=12) {
        let g = CoxeterGroup::generate(&CoxeterDiagram::i2(m).unwrap()).unwrap();
        prop_assert_eq!(g.order(), 2 * m as usize);
        let w0 = g.longest_element();
        prop_assert_eq!(g.length(w0), m as usize);
        prop_assert_eq!(g.mul(w0, w0), g.identity());
        let inv = g.opposition_involution();
        prop_assert!(inv.iter().all(|&j| inv[j] < 2));
        prop_assert_eq!(g.longest_is_central(), m % 2 == 0);
        for a in 0..g.order() {
            prop_assert_eq!(g.mul(a, g.inverse(a)), g.identity());
            prop_assert_eq!(g.length(g.inverse(a)), g.length(a));
        }
    }

    #[test]
    fn fundamental_classes_are_cycles_on_their_apartments(apt in 0usize..28, chamber in 0usize..6) {
        let (b, _, _) = fano();
        let a = &b.apartments()[apt];
        let c0 = a.chambers().nth(chamber).unwrap().clone();
        let z = b.fundamental_class(a, &c0).unwrap();
        prop_assert!(z.is_cycle());
        prop_assert_eq!(z.coefficient(&c0), 1);
        let sup = support(&z, b.complex()).unwrap();
        prop_assert_eq!(sup.facets(), a.complex().facets());
    }
}

#[test]
fn coxeter_orders() {
    for (d, order) in [
        (CoxeterDiagram::a(1).unwrap(), 2),
        (CoxeterDiagram::a(2).unwrap(), 6),
        (CoxeterDiagram::a(3).unwrap(), 24),
        (CoxeterDiagram::b(2).unwrap(), 8),
        (CoxeterDiagram::b(3).unwrap(), 48),
    ] {
        let g = CoxeterGroup::generate(&d).unwrap();
        assert_eq!(g.order(), order);
        assert_eq!(d.expected_order().unwrap(), order);
        let lengths: BTreeSet<usize> = (0..g.order()).map(|x| g.length(x)).collect();
        assert_eq!(lengths.len(), g.length(g.longest_element()) + 1);
    }
}

#[test]
fn chamber_and_opposition_counts() {
    for q in [2u32, 3] {
        let b = an_building(2, q).unwrap();
        let q = q as usize;
        assert_eq!(b.chambers().len(), (q * q + q + 1) * (q + 1));
        let c0 = b.chambers()[0].clone();
        assert_eq!(b.opposite_chambers(&c0).unwrap().len(), q * q * q);
        assert_eq!(homology(b.complex(), 1, false).unwrap().betti, q * q * q);
        assert!(b.verify_building_axioms().passed());
    }
}

#[test]
fn weak_join_shifts_top_homology() {
    for b in [an_building(1, 2).unwrap(), an_building(1, 3).unwrap(), an_building(2, 2).unwrap()] {
        let m = b.complex().dimension();
        let top = reduced_homology(b.complex(), m).betti;
        for n in 0..2i64 {
            let j = b.weak_join(n).unwrap();
            assert_eq!(reduced_homology(j.complex(), m + n + 1).betti, top);
            assert!(j.verify_building_axioms().passed());
        }
    }
}

#[test]
fn spheres() {
    for n in 0..4 {
        let s = sphere_complex(n).unwrap();
        for d in 0..=n {
            let h = reduced_homology(&s, d);
            assert_eq!(h.betti, usize::from(d == n));
            assert!(h.torsion.is_empty());
        }
    }
    let empty = Simplex::new(vec![]);
    assert!(empty.is_err());
}
