use num_bigint::BigInt;
use serde::Serialize;

use super::{link, smith_normal_form, Chain, IntegerMatrix, Simplex, SimplicialComplex, SimplicialError};

/// A finitely generated abelian group `ℤ^betti ⊕ ⨁ ℤ/dᵢ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomologyGroup {
    pub betti: usize,
    /// Invariant factors `≥ 2`, each dividing the next.
    pub torsion: Vec<BigInt>,
}

impl HomologyGroup {
    pub fn trivial() -> Self {
        Self {
            betti: 0,
            torsion: Vec::new(),
        }
    }

    pub fn free(betti: usize) -> Self {
        Self {
            betti,
            torsion: Vec::new(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.betti == 0 && self.torsion.is_empty()
    }
}

fn check_degree(k: &SimplicialComplex, degree: i64) -> Result<usize, SimplicialError> {
    if degree < 0 || degree > k.dimension() {
        return Err(SimplicialError::DegreeOutOfRange {
            degree,
            dimension: k.dimension(),
        });
    }
    Ok(degree as usize)
}

/// Boundary operator `∂ₖ` with rows indexed by `(k−1)`-faces and columns by
/// `k`-faces, both in canonical order.
///
/// For `k = 0` the target is the zero group (a `0 × f₀` matrix) unless
/// `reduced` is set, in which case it is the augmentation row of ones.
pub fn boundary_matrix(
    k: &SimplicialComplex,
    degree: i64,
    reduced: bool,
) -> Result<IntegerMatrix, SimplicialError> {
    let d = check_degree(k, degree)?;
    Ok(boundary_unchecked(k, d, reduced))
}

fn boundary_unchecked(k: &SimplicialComplex, d: usize, reduced: bool) -> IntegerMatrix {
    let cols = k.faces(d);
    if d == 0 {
        let mut m = IntegerMatrix::zeros(usize::from(reduced), cols.len());
        if reduced {
            for j in 0..cols.len() {
                m.set(0, j, 1);
            }
        }
        return m;
    }
    let mut m = IntegerMatrix::zeros(k.face_count(d - 1), cols.len());
    for (j, s) in cols.iter().enumerate() {
        for (face, sign) in s.boundary_faces() {
            let i = k.position(&face).expect("complex is downward closed");
            m.set(i, j, sign);
        }
    }
    m
}

/// Chain group rank in degree `d` (with the empty simplex in degree −1 when
/// reduced).
fn chain_rank(k: &SimplicialComplex, d: i64, reduced: bool) -> usize {
    match d {
        -1 if reduced => 1,
        d if d < 0 || d > k.dimension() => 0,
        d => k.face_count(d as usize),
    }
}

/// Rank and invariant factors of `∂_d`, for any integer `d`.
fn boundary_snf(k: &SimplicialComplex, d: i64, reduced: bool) -> (usize, Vec<BigInt>) {
    if d < 0 || d > k.dimension() {
        return (0, Vec::new());
    }
    if d == 0 {
        let r = usize::from(reduced && k.face_count(0) > 0);
        return (r, Vec::new());
    }
    let snf = smith_normal_form(&boundary_unchecked(k, d as usize, reduced));
    (snf.rank, snf.torsion())
}

fn homology_any(k: &SimplicialComplex, d: i64, reduced: bool) -> HomologyGroup {
    let n = chain_rank(k, d, reduced);
    if n == 0 {
        return HomologyGroup::trivial();
    }
    let (rank_out, _) = boundary_snf(k, d, reduced);
    let (rank_in, torsion) = boundary_snf(k, d + 1, reduced);
    HomologyGroup {
        betti: n - rank_out - rank_in,
        torsion,
    }
}

/// `H_k(K)` over ℤ: betti number `f_k − rank ∂ₖ − rank ∂ₖ₊₁` and torsion from
/// the invariant factors of `∂ₖ₊₁`.
pub fn homology(
    k: &SimplicialComplex,
    degree: i64,
    reduced: bool,
) -> Result<HomologyGroup, SimplicialError> {
    check_degree(k, degree)?;
    Ok(homology_any(k, degree, reduced))
}

/// Reduced homology in any degree `≥ −1`; degrees outside the complex give
/// the trivial group, and `H̃₋₁(∅) = ℤ`.
pub fn reduced_homology(k: &SimplicialComplex, degree: i64) -> HomologyGroup {
    homology_any(k, degree, true)
}

/// Local homology `H_k(K, K∖v) ≅ H̃_{k−1}(lk v)`.
pub fn local_homology(
    k: &SimplicialComplex,
    v: usize,
    degree: usize,
) -> Result<HomologyGroup, SimplicialError> {
    let l = link(k, v)?;
    Ok(reduced_homology(&l, degree as i64 - 1))
}

fn check_top_cycle(z: &Chain, k: &SimplicialComplex) -> Result<(), SimplicialError> {
    for s in z.keys() {
        if !k.contains_face(s) {
            return Err(SimplicialError::NotAFace(s.clone()));
        }
    }
    if z.is_zero() {
        return Ok(());
    }
    if z.degree() as i64 != k.dimension() {
        return Err(SimplicialError::NotTopDegree {
            degree: z.degree(),
            dimension: k.dimension(),
        });
    }
    if !z.is_cycle() {
        return Err(SimplicialError::NotACycle);
    }
    Ok(())
}

/// Support of a top-dimensional cycle: the closure of the simplices with
/// nonzero coefficient. The result is a pure subcomplex of dimension `dim K`
/// (or empty for the zero chain).
pub fn support(z: &Chain, k: &SimplicialComplex) -> Result<SimplicialComplex, SimplicialError> {
    check_top_cycle(z, k)?;
    Ok(k.closure_of(z.keys().cloned()))
}

/// Lifts a top cycle of `K` to a top cycle of `K ∗ Sⁿ`.
///
/// One `S⁰ = {u, v}` factor is added at a time: a cycle `b` becomes the cone
/// difference `u∗b − v∗b`. Since `u` and `v` carry ids above every vertex
/// already present, `u∗C` is stored as `[C, u]`, and
/// `∂[C,u] = (∂C)∗u + (−1)^{m+1}C`, so the difference is again a cycle whose
/// support is the old support joined with `{u, v}`.
pub fn suspend_cycle(z: &Chain, k: &SimplicialComplex, n: usize) -> Result<Chain, SimplicialError> {
    check_top_cycle(z, k)?;
    let mut current = z.clone();
    let base = k.vertex_count();
    for i in 0..=n {
        let u = base + 2 * i;
        let v = u + 1;
        let mut next = Chain::zero(current.degree() + 1);
        for (s, &c) in current.terms() {
            let mut with_u = s.vertices().to_vec();
            with_u.push(u);
            let mut with_v = s.vertices().to_vec();
            with_v.push(v);
            next.add_term(Simplex::from_sorted_unchecked(with_u), c)?;
            next.add_term(Simplex::from_sorted_unchecked(with_v), -c)?;
        }
        current = next;
    }
    Ok(current)
}

#[cfg(test)]
mod tests {
    use super::super::{join, sphere_complex};
    use super::*;

    fn hexagon() -> SimplicialComplex {
        SimplicialComplex::from_facets((0..6).map(|i| vec![i, (i + 1) % 6])).unwrap()
    }

    fn fundamental_hexagon_cycle() -> Chain {
        let mut z = Chain::zero(1);
        for i in 0..6 {
            z.add_oriented(&[i, (i + 1) % 6], 1).unwrap();
        }
        z
    }

    #[test]
    fn boundary_matrix_examples() {
        let tri = SimplicialComplex::from_facets([vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        let d1 = boundary_matrix(&tri, 1, false).unwrap();
        assert_eq!((d1.rows(), d1.cols()), (3, 3));
        for j in 0..3 {
            let mut col: Vec<i64> = d1.column(j).into_iter().map(|(_, v)| v).collect();
            col.sort();
            assert_eq!(col, vec![-1, 1]);
        }
        let snf = smith_normal_form(&d1);
        assert_eq!(snf.rank, 2);
        assert!(snf.all_units());

        // edges of [0,1,2] in order [0,1],[0,2],[1,2]; ∂[0,1,2] = [1,2] − [0,2] + [0,1]
        let full = SimplicialComplex::from_facets([vec![0, 1, 2]]).unwrap();
        let d2 = boundary_matrix(&full, 2, false).unwrap();
        assert_eq!((d2.get(0, 0), d2.get(1, 0), d2.get(2, 0)), (1, -1, 1));

        let oct = sphere_complex(2).unwrap();
        let d1 = boundary_matrix(&oct, 1, false).unwrap();
        let d2 = boundary_matrix(&oct, 2, false).unwrap();
        assert!(d1.mul(&d2).is_zero());

        let d0 = boundary_matrix(&oct, 0, false).unwrap();
        assert_eq!((d0.rows(), d0.cols()), (0, 6));
        let d0r = boundary_matrix(&oct, 0, true).unwrap();
        assert_eq!((d0r.rows(), d0r.cols()), (1, 6));
        assert!(boundary_matrix(&oct, 3, false).is_err());
        assert!(boundary_matrix(&oct, -1, false).is_err());
    }

    #[test]
    fn homology_examples() {
        let h = hexagon();
        assert_eq!(homology(&h, 1, false).unwrap(), HomologyGroup::free(1));
        assert_eq!(homology(&h, 0, false).unwrap(), HomologyGroup::free(1));
        assert_eq!(homology(&h, 0, true).unwrap(), HomologyGroup::trivial());

        let oct = sphere_complex(2).unwrap();
        assert_eq!(homology(&oct, 1, false).unwrap().betti, 0);
        assert_eq!(homology(&oct, 2, false).unwrap().betti, 1);

        let two = SimplicialComplex::from_facets(
            (0..6)
                .map(|i| vec![i, (i + 1) % 6])
                .chain((0..6).map(|i| vec![6 + i, 6 + (i + 1) % 6])),
        )
        .unwrap();
        assert_eq!(homology(&two, 1, false).unwrap().betti, 2);
        assert!(homology(&two, 2, false).is_err());

        let s0 = sphere_complex(0).unwrap();
        assert_eq!(homology(&s0, 0, false).unwrap().betti, 2);

        let hs = join(&h, &s0);
        assert_eq!(homology(&hs, 2, false).unwrap(), HomologyGroup::free(1));
        assert_eq!(homology(&hs, 1, false).unwrap(), HomologyGroup::trivial());
    }

    #[test]
    fn torsion_of_projective_plane() {
        // six-vertex real projective plane
        let rp2 = SimplicialComplex::from_facets([
            vec![0, 1, 2],
            vec![0, 2, 3],
            vec![0, 3, 4],
            vec![0, 4, 5],
            vec![0, 1, 5],
            vec![1, 2, 4],
            vec![2, 3, 5],
            vec![1, 3, 4],
            vec![1, 3, 5],
            vec![2, 4, 5],
        ])
        .unwrap();
        let h1 = homology(&rp2, 1, false).unwrap();
        assert_eq!(h1.betti, 0);
        assert_eq!(h1.torsion, vec![BigInt::from(2)]);
        assert_eq!(homology(&rp2, 2, false).unwrap(), HomologyGroup::trivial());
    }

    #[test]
    fn reduced_homology_of_empty() {
        let e = sphere_complex(-1).unwrap();
        assert_eq!(reduced_homology(&e, -1), HomologyGroup::free(1));
        assert_eq!(reduced_homology(&e, 0), HomologyGroup::trivial());
        let pt = SimplicialComplex::from_facets([vec![0]]).unwrap();
        assert_eq!(reduced_homology(&pt, -1), HomologyGroup::trivial());
        assert_eq!(reduced_homology(&pt, 0), HomologyGroup::trivial());
    }

    #[test]
    fn local_homology_examples() {
        let h = hexagon();
        for v in 0..6 {
            assert_eq!(local_homology(&h, v, 1).unwrap(), HomologyGroup::free(1));
            assert!(local_homology(&h, v, 0).unwrap().is_trivial());
        }
        let oct = sphere_complex(2).unwrap();
        assert_eq!(local_homology(&oct, 3, 2).unwrap(), HomologyGroup::free(1));
        assert!(local_homology(&oct, 3, 1).unwrap().is_trivial());
        assert!(matches!(
            local_homology(&h, 9, 1),
            Err(SimplicialError::MissingVertex(9))
        ));
    }

    #[test]
    fn supports() {
        let h = hexagon();
        let z = fundamental_hexagon_cycle();
        assert_eq!(support(&z, &h).unwrap(), h);
        assert!(support(&Chain::zero(1), &h).unwrap().is_empty());

        let mut path = Chain::zero(1);
        path.add_oriented(&[0, 1], 1).unwrap();
        assert_eq!(support(&path, &h), Err(SimplicialError::NotACycle));
    }

    #[test]
    fn suspension_of_hexagon_cycle() {
        let h = hexagon();
        let z = fundamental_hexagon_cycle();
        for n in 0..2usize {
            let sn = sphere_complex(n as i64).unwrap();
            let joined = join(&h, &sn);
            let lifted = suspend_cycle(&z, &h, n).unwrap();
            assert_eq!(lifted.degree(), 1 + n + 1);
            assert!(lifted.is_cycle());
            assert_eq!(support(&lifted, &joined).unwrap(), joined);
        }
        let zero = suspend_cycle(&Chain::zero(1), &h, 1).unwrap();
        assert!(zero.is_zero());
    }
}
