//! The lattice of subcomplexes generated by support sets under union and
//! intersection, its indecomposable elements, and reconstruction of the
//! ground complex from them.
//!
//! Subcomplexes are face masks over the ground complex. The lattice is not
//! materialized: a lattice of subsets generated by unions and intersections
//! is distributive, so every element is a union of intersections of
//! generators. It is stored as the intersection closure `M` of the
//! generators together with its union-irreducible members `J`; the elements
//! are exactly `⊥ ∪ ⋃S` for `S ⊆ J`, and by Birkhoff's theorem they
//! correspond to the down-sets of `(J, ⊆)`.

use std::collections::{BTreeSet, HashMap, HashSet};

use fixedbitset::FixedBitSet;
use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::building::SphericalBuilding;
use crate::simplicial::{find_isomorphism, join, Simplex, SimplicialComplex, SimplicialError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("at least one generator is required")]
    NoGenerators,
    #[error("generator {0} is not a subcomplex of the ground complex")]
    NotSubcomplex(usize),
    #[error("reconstruction failed: {0}")]
    Reconstruction(String),
    #[error(transparent)]
    Simplicial(#[from] SimplicialError),
}

#[derive(Debug, Clone)]
pub struct SupportLattice {
    ground: SimplicialComplex,
    generators: Vec<FixedBitSet>,
    // intersection closure of the generators, sorted
    meets: Vec<FixedBitSet>,
    bottom: FixedBitSet,
    // union-irreducible elements other than the bottom, sorted
    irreducible: Vec<FixedBitSet>,
}

/// Outcome of [`SupportLattice::reconstruct`].
#[derive(Debug, Clone, Serialize)]
pub struct Reconstruction {
    pub complex: SimplicialComplex,
    /// The minimal element, relabelled onto `0..k`.
    pub minimal: SimplicialComplex,
    /// Reconstructed complex is isomorphic to the ground with the vertices of
    /// the minimal element deleted.
    pub isomorphic_to_quotient: bool,
    /// `complex ∗ minimal` is isomorphic to the ground complex.
    pub join_isomorphic_to_ground: bool,
}

impl SupportLattice {
    /// Smallest family containing the generators and closed under union and
    /// intersection.
    pub fn generate(ground: &SimplicialComplex, generators: &[SimplicialComplex]) -> Result<Self, LatticeError> {
        if generators.is_empty() {
            return Err(LatticeError::NoGenerators);
        }
        let masks = generators
            .iter()
            .enumerate()
            .map(|(i, g)| ground.face_mask(g).map_err(|_| LatticeError::NotSubcomplex(i)))
            .collect::<Result<Vec<_>, _>>()?;

        let mut seen: HashSet<FixedBitSet> = masks.iter().cloned().collect();
        let mut frontier: Vec<FixedBitSet> = seen.iter().cloned().collect();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for m in &frontier {
                for g in &masks {
                    let mut x = m.clone();
                    x.intersect_with(g);
                    if !seen.contains(&x) {
                        seen.insert(x.clone());
                        next.push(x);
                    }
                }
            }
            frontier = next;
        }
        let mut meets: Vec<FixedBitSet> = seen.into_iter().collect();
        meets.sort_by(|a, b| a.count_ones(..).cmp(&b.count_ones(..)).then_with(|| a.ones().cmp(b.ones())));

        let mut bottom = masks[0].clone();
        for m in &masks[1..] {
            bottom.intersect_with(m);
        }
        let irreducible = meets
            .iter()
            .filter(|&m| *m != bottom && !is_union_of_smaller(m, &meets))
            .cloned()
            .collect();
        Ok(Self {
            ground: ground.clone(),
            generators: masks,
            meets,
            bottom,
            irreducible,
        })
    }

    /// Lattice generated by the supports of all apartments of a building.
    pub fn for_building(b: &SphericalBuilding) -> Result<Self, LatticeError> {
        let gens: Vec<SimplicialComplex> = b.apartments().iter().map(|a| a.complex().clone()).collect();
        Self::generate(b.complex(), &gens)
    }

    pub fn ground(&self) -> &SimplicialComplex {
        &self.ground
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    /// Size of the intersection closure of the generators.
    pub fn meet_closure_size(&self) -> usize {
        self.meets.len()
    }

    fn to_complex(&self, m: &FixedBitSet) -> SimplicialComplex {
        self.ground.subcomplex_from_mask(m)
    }

    /// The unique minimal element, the intersection of all generators.
    pub fn minimal_element(&self) -> SimplicialComplex {
        self.to_complex(&self.bottom)
    }

    /// Elements that are not a union of strictly smaller elements. The
    /// minimal element qualifies iff it is nonempty.
    pub fn indecomposables(&self) -> Vec<SimplicialComplex> {
        let mut out = Vec::with_capacity(self.irreducible.len() + 1);
        if !self.bottom.is_clear() {
            out.push(self.to_complex(&self.bottom));
        }
        out.extend(self.irreducible.iter().map(|m| self.to_complex(m)));
        out
    }

    /// Number of lattice elements: the down-sets of the irreducibles.
    pub fn element_count(&self) -> BigUint {
        let n = self.irreducible.len();
        let mut below = vec![FixedBitSet::with_capacity(n); n];
        for i in 0..n {
            for j in 0..n {
                if i != j && self.irreducible[j].is_subset(&self.irreducible[i]) {
                    below[i].insert(j);
                }
            }
        }
        let mut above = vec![FixedBitSet::with_capacity(n); n];
        for i in 0..n {
            for j in below[i].ones() {
                above[j].insert(i);
            }
        }
        let mut all = FixedBitSet::with_capacity(n);
        all.insert_range(..);
        let mut memo = HashMap::new();
        count_downsets(&all, &below, &above, &mut memo)
    }

    pub fn contains(&self, s: &SimplicialComplex) -> bool {
        let Ok(m) = self.ground.face_mask(s) else {
            return false;
        };
        if !self.bottom.is_subset(&m) {
            return false;
        }
        let mut u = self.bottom.clone();
        for j in self.irreducible.iter().filter(|j| j.is_subset(&m)) {
            u.union_with(j);
        }
        u == m
    }

    /// Union of the minimum with a random subset of the irreducibles.
    pub fn random_element<R: Rng>(&self, rng: &mut R) -> SimplicialComplex {
        let mut u = self.bottom.clone();
        for j in &self.irreducible {
            if rng.random_bool(0.5) {
                u.union_with(j);
            }
        }
        self.to_complex(&u)
    }

    /// Checks `(a ∪ b) ∩ c = (a ∩ c) ∪ (b ∩ c)` on random triples and that
    /// both sides are lattice elements. Returns the first failing triple.
    pub fn distributivity_spot_check<R: Rng>(
        &self,
        rng: &mut R,
        trials: usize,
    ) -> Option<[SimplicialComplex; 3]> {
        for _ in 0..trials {
            let [a, b, c] = [(); 3].map(|_| self.random_element(rng));
            let lhs = a.union(&b).intersection(&c);
            let rhs = a.intersection(&c).union(&b.intersection(&c));
            if lhs != rhs || !self.contains(&lhs) {
                return Some([a, b, c]);
            }
        }
        None
    }

    /// Rebuilds a complex from the indecomposables: remove the faces meeting
    /// the minimal element's vertices, take the minimal remaining elements as
    /// vertices, and send every element to the set of vertices below it.
    pub fn reconstruct(&self) -> Result<Reconstruction, LatticeError> {
        if self.irreducible.is_empty() {
            return Err(LatticeError::Reconstruction(
                "no indecomposables above the minimal element".into(),
            ));
        }
        let min_complex = self.to_complex(&self.bottom);
        let min_vertices = min_complex.vertices();
        let quotient: Vec<BTreeSet<Simplex>> = self
            .irreducible
            .iter()
            .map(|m| {
                m.ones()
                    .map(|i| self.ground.face_at(i).clone())
                    .filter(|s| s.vertices().iter().all(|v| !min_vertices.contains(v)))
                    .collect()
            })
            .collect();
        if quotient.iter().any(BTreeSet::is_empty) {
            return Err(LatticeError::Reconstruction("an element vanishes in the quotient".into()));
        }
        let atoms: Vec<usize> = (0..quotient.len())
            .filter(|&i| (0..quotient.len()).all(|j| j == i || !quotient[j].is_subset(&quotient[i])))
            .collect();
        let atom_sets: Vec<BTreeSet<usize>> = quotient
            .iter()
            .map(|q| {
                atoms
                    .iter()
                    .enumerate()
                    .filter(|&(_, &a)| quotient[a].is_subset(q))
                    .map(|(k, _)| k)
                    .collect()
            })
            .collect();
        let family: HashSet<&BTreeSet<usize>> = atom_sets.iter().collect();
        if family.len() != atom_sets.len() {
            return Err(LatticeError::Reconstruction("two elements share a vertex set".into()));
        }
        for s in &atom_sets {
            // every proper nonempty subset must occur
            let v: Vec<usize> = s.iter().copied().collect();
            if v.len() > 20 {
                return Err(LatticeError::Reconstruction("element too large".into()));
            }
            for bits in 1u32..(1 << v.len()) - 1 {
                let sub: BTreeSet<usize> =
                    (0..v.len()).filter(|&i| bits >> i & 1 == 1).map(|i| v[i]).collect();
                if !family.contains(&sub) {
                    return Err(LatticeError::Reconstruction(format!(
                        "vertex set {s:?} lacks the face {sub:?}"
                    )));
                }
            }
        }
        for i in 0..quotient.len() {
            for j in 0..quotient.len() {
                let q = quotient[i].is_subset(&quotient[j]);
                let a = atom_sets[i].is_subset(&atom_sets[j]);
                if q != a {
                    return Err(LatticeError::Reconstruction("order is not inclusion of vertex sets".into()));
                }
            }
        }
        let complex = SimplicialComplex::with_vertex_count(
            atoms.len(),
            atom_sets.iter().map(|s| Simplex::new(s.iter().copied().collect()).unwrap()),
        )?;

        let relabel: Vec<usize> = min_vertices.iter().copied().collect();
        let minimal = if min_complex.is_empty() {
            SimplicialComplex::empty(0)
        } else {
            SimplicialComplex::with_vertex_count(
                relabel.len(),
                min_complex
                    .facets()
                    .iter()
                    .map(|f| f.map_vertices(|v| relabel.binary_search(&v).unwrap())),
            )?
        };
        let quotient_ground = compact(&self.ground.delete_vertices(&min_vertices));
        let isomorphic_to_quotient = find_isomorphism(&complex, &quotient_ground).is_some();
        let join_isomorphic_to_ground =
            find_isomorphism(&join(&complex, &minimal), &compact(&self.ground)).is_some();
        Ok(Reconstruction {
            complex,
            minimal,
            isomorphic_to_quotient,
            join_isomorphic_to_ground,
        })
    }
}

// drop unused vertex ids
fn compact(k: &SimplicialComplex) -> SimplicialComplex {
    let used: Vec<usize> = k.vertices().into_iter().collect();
    if k.is_empty() {
        return SimplicialComplex::empty(0);
    }
    SimplicialComplex::with_vertex_count(
        used.len(),
        k.facets().iter().map(|f| f.map_vertices(|v| used.binary_search(&v).unwrap())),
    )
    .expect("relabelled vertices are in range")
}

fn is_union_of_smaller(m: &FixedBitSet, all: &[FixedBitSet]) -> bool {
    let mut u = FixedBitSet::with_capacity(m.len());
    for x in all {
        if x != m && x.is_subset(m) {
            u.union_with(x);
        }
    }
    u == *m
}

fn count_downsets(
    remaining: &FixedBitSet,
    below: &[FixedBitSet],
    above: &[FixedBitSet],
    memo: &mut HashMap<FixedBitSet, BigUint>,
) -> BigUint {
    if let Some(c) = memo.get(remaining) {
        return c.clone();
    }
    // the element with the most comparabilities inside `remaining`
    let mut best = None;
    let mut best_score = 0;
    for x in remaining.ones() {
        let score = below[x].intersection(remaining).count() + above[x].intersection(remaining).count();
        if score > best_score {
            best_score = score;
            best = Some(x);
        }
    }
    let result = match best {
        // antichain
        None => BigUint::one() << remaining.count_ones(..),
        Some(x) => {
            let mut without_up = remaining.clone();
            without_up.set(x, false);
            without_up.difference_with(&above[x]);
            let mut without_down = remaining.clone();
            without_down.set(x, false);
            without_down.difference_with(&below[x]);
            count_downsets(&without_up, below, above, memo) + count_downsets(&without_down, below, above, memo)
        }
    };
    if !result.is_zero() {
        memo.insert(remaining.clone(), result.clone());
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::building::an_building;
    use crate::coxeter::CoxeterDiagram;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn hexagon_at(offset: usize) -> Vec<Vec<usize>> {
        (0..6)
            .map(|i| {
                let (a, b) = (offset + i, offset + (i + 1) % 6);
                vec![a.min(b), a.max(b)]
            })
            .collect()
    }

    #[test]
    fn single_generator() {
        let b = SphericalBuilding::thin(&CoxeterDiagram::a(2).unwrap()).unwrap();
        let lat = SupportLattice::for_building(&b).unwrap();
        assert_eq!(lat.element_count(), BigUint::from(1u32));
        assert_eq!(lat.indecomposables(), vec![b.complex().clone()]);
        assert_eq!(lat.minimal_element(), *b.complex());
        assert!(lat.reconstruct().is_err());
    }

    #[test]
    fn disjoint_hexagons() {
        let mut facets = hexagon_at(0);
        facets.extend(hexagon_at(6));
        let ground = SimplicialComplex::from_facets(facets).unwrap();
        let a = SimplicialComplex::with_vertex_count(
            12,
            hexagon_at(0).into_iter().map(|f| Simplex::new(f).unwrap()),
        )
        .unwrap();
        let b = SimplicialComplex::with_vertex_count(
            12,
            hexagon_at(6).into_iter().map(|f| Simplex::new(f).unwrap()),
        )
        .unwrap();
        let lat = SupportLattice::generate(&ground, &[a.clone(), b.clone()]).unwrap();
        assert_eq!(lat.element_count(), BigUint::from(4u32));
        for x in [&a, &b, &ground, &SimplicialComplex::empty(12)] {
            assert!(lat.contains(x));
        }
        assert!(lat.minimal_element().is_empty());
        assert_eq!(lat.indecomposables().len(), 2);
    }

    #[test]
    fn fano_lattice() {
        let f = an_building(2, 2).unwrap();
        let lat = SupportLattice::for_building(&f).unwrap();
        let ind = lat.indecomposables();
        assert_eq!(ind.len(), 35);
        let closed: BTreeSet<Vec<Simplex>> = f
            .complex()
            .all_faces()
            .map(|s| f.complex().closure_of([s.clone()]).facets().to_vec())
            .collect();
        let found: BTreeSet<Vec<Simplex>> = ind.iter().map(|c| c.facets().to_vec()).collect();
        assert_eq!(closed, found);
        assert!(lat.minimal_element().is_empty());
        for s in f.complex().all_faces() {
            assert!(lat.contains(&f.complex().closure_of([s.clone()])));
        }
        // not a subcomplex of the ground
        let odd = SimplicialComplex::from_facets([vec![0, 1]]).unwrap();
        assert!(!lat.contains(&odd));

        let r = lat.reconstruct().unwrap();
        assert!(r.isomorphic_to_quotient);
        assert!(r.join_isomorphic_to_ground);
        assert_eq!(r.complex.face_count(0), 14);
        assert_eq!(r.complex.face_count(1), 21);
    }

    #[test]
    fn element_count_matches_subgraph_count() {
        // elements of the Fano lattice are the subgraphs of the incidence graph
        let f = an_building(2, 2).unwrap();
        let lat = SupportLattice::for_building(&f).unwrap();
        let edges: Vec<(usize, usize)> = f
            .chambers()
            .iter()
            .map(|e| (e.vertices()[0], e.vertices()[1]))
            .collect();
        let mut total = BigUint::zero();
        for subset in 0u32..1 << 14 {
            let induced = edges
                .iter()
                .filter(|&&(a, b)| subset >> a & 1 == 1 && subset >> b & 1 == 1)
                .count();
            total += BigUint::one() << induced;
        }
        assert_eq!(lat.element_count(), total);
    }

    #[test]
    fn generator_order_independent() {
        let f = an_building(2, 2).unwrap();
        let mut gens: Vec<SimplicialComplex> = f.apartments().iter().map(|a| a.complex().clone()).collect();
        let a = SupportLattice::generate(f.complex(), &gens).unwrap();
        gens.reverse();
        gens.rotate_left(5);
        let b = SupportLattice::generate(f.complex(), &gens).unwrap();
        assert_eq!(a.meets, b.meets);
        assert_eq!(a.irreducible, b.irreducible);
        assert_eq!(a.bottom, b.bottom);
    }

    #[test]
    fn suspended_fano_lattice() {
        let j = an_building(2, 2).unwrap().weak_join(0).unwrap();
        let lat = SupportLattice::for_building(&j).unwrap();
        let min = lat.minimal_element();
        assert_eq!(min.vertices().into_iter().collect::<Vec<_>>(), vec![14, 15]);
        assert_eq!(min.facets().len(), 2);
        // closed faces of Fano joined with S⁰, plus S⁰ itself
        let ind = lat.indecomposables();
        assert_eq!(ind.len(), 36);
        assert!(ind.iter().all(|c| c.vertices().contains(&14) && c.vertices().contains(&15)));
        let r = lat.reconstruct().unwrap();
        assert!(r.isomorphic_to_quotient);
        assert!(r.join_isomorphic_to_ground);
        assert_eq!(r.minimal.facets().len(), 2);
    }

    #[test]
    fn distributive() {
        let f = an_building(2, 2).unwrap();
        let lat = SupportLattice::for_building(&f).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        assert!(lat.distributivity_spot_check(&mut rng, 200).is_none());
        for _ in 0..20 {
            assert!(lat.contains(&lat.random_element(&mut rng)));
        }
    }

    #[test]
    fn rejects_foreign_generators() {
        let ground = SimplicialComplex::from_facets([vec![0, 1]]).unwrap();
        let other = SimplicialComplex::from_facets([vec![1, 2]]).unwrap();
        assert_eq!(
            SupportLattice::generate(&ground, &[other]).unwrap_err(),
            LatticeError::NotSubcomplex(0)
        );
        assert_eq!(SupportLattice::generate(&ground, &[]).unwrap_err(), LatticeError::NoGenerators);
    }
}
