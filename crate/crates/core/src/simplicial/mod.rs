//! Finite abstract simplicial complexes and their integral chain complexes.
//!
//! Simplices are stored with strictly increasing vertex ids; an oriented
//! simplex given in any other order is normalized and carries the sign of the
//! sorting permutation. Faces of a fixed dimension are kept in lexicographic
//! order, which fixes the row and column order of every boundary matrix.

mod chain;
mod complex;
mod homology;
mod iso;
mod matrix;
mod simplex;

pub use chain::Chain;
pub use complex::SimplicialComplex;
pub use homology::{
    boundary_matrix, homology, local_homology, reduced_homology, suspend_cycle, support,
    HomologyGroup,
};
pub use iso::find_isomorphism;
pub use matrix::{smith_normal_form, IntegerMatrix, SmithForm};
pub use simplex::Simplex;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimplicialError {
    #[error("empty complex not constructible")]
    EmptyComplex,
    #[error("a simplex needs at least one vertex")]
    EmptySimplex,
    #[error("vertices {0:?} are not strictly increasing")]
    UnsortedSimplex(Vec<usize>),
    #[error("vertex {vertex} out of range for a complex on {vertex_count} vertices")]
    VertexOutOfRange { vertex: usize, vertex_count: usize },
    #[error("sphere dimension {0} is below -1")]
    SphereDimension(i64),
    #[error("vertex {0} is not in the complex")]
    MissingVertex(usize),
    #[error("degree {degree} out of range for a complex of dimension {dimension}")]
    DegreeOutOfRange { degree: i64, dimension: i64 },
    #[error("support defined here only for cycles")]
    NotACycle,
    #[error("chain of degree {degree} is not top-dimensional in a complex of dimension {dimension}")]
    NotTopDegree { degree: usize, dimension: i64 },
    #[error("simplex {0} is not a face of the complex")]
    NotAFace(Simplex),
    #[error("chain term {simplex} has dimension {found}, expected {expected}")]
    DegreeMismatch {
        simplex: Simplex,
        found: usize,
        expected: usize,
    },
    #[error("not a subcomplex of the ground complex")]
    NotSubcomplex,
}

/// Sphere `Sⁿ` as the boundary of the `(n+1)`-dimensional cross-polytope.
///
/// `n = −1` yields the empty complex. For `n ≥ 0` the vertices are
/// `0..2n+2`, the antipodal pairs are `(2i, 2i+1)`, and a set of vertices is
/// a face iff it contains no antipodal pair.
pub fn sphere_complex(n: i64) -> Result<SimplicialComplex, SimplicialError> {
    if n < -1 {
        return Err(SimplicialError::SphereDimension(n));
    }
    if n == -1 {
        return Ok(SimplicialComplex::empty(0));
    }
    let pairs = (n + 1) as usize;
    let facets = (0..1usize << pairs).map(|choice| {
        Simplex::from_sorted_unchecked(
            (0..pairs)
                .map(|i| 2 * i + ((choice >> i) & 1))
                .collect(),
        )
    });
    SimplicialComplex::with_vertex_count(2 * pairs, facets)
}

/// Join `K ∗ L`; vertex ids of `L` are shifted past those of `K`.
pub fn join(k: &SimplicialComplex, l: &SimplicialComplex) -> SimplicialComplex {
    let shift = k.vertex_count();
    let vertex_count = shift + l.vertex_count();
    let shifted: Vec<Simplex> = l.facets().iter().map(|f| f.shifted(shift)).collect();
    if k.is_empty() {
        return SimplicialComplex::from_normalized(vertex_count, shifted);
    }
    if l.is_empty() {
        return SimplicialComplex::from_normalized(vertex_count, k.facets().to_vec());
    }
    let mut facets = Vec::with_capacity(k.facets().len() * shifted.len());
    for f in k.facets() {
        for g in &shifted {
            facets.push(f.union(g));
        }
    }
    SimplicialComplex::from_normalized(vertex_count, facets)
}

/// Link of a vertex: faces `σ` with `v ∉ σ` and `σ ∪ {v}` a face.
pub fn link(k: &SimplicialComplex, v: usize) -> Result<SimplicialComplex, SimplicialError> {
    if !k.has_vertex(v) {
        return Err(SimplicialError::MissingVertex(v));
    }
    let facets = k
        .facets()
        .iter()
        .filter(|f| f.contains(v))
        .filter_map(|f| f.without(v))
        .collect();
    Ok(SimplicialComplex::from_normalized(k.vertex_count(), facets))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hexagon() -> SimplicialComplex {
        SimplicialComplex::from_facets((0..6).map(|i| vec![i, (i + 1) % 6])).unwrap()
    }

    #[test]
    fn sphere_minus_one_is_empty() {
        let s = sphere_complex(-1).unwrap();
        assert!(s.is_empty());
        assert_eq!(s.dimension(), -1);
        assert!(sphere_complex(-2).is_err());
    }

    #[test]
    fn octahedron_counts() {
        let s = sphere_complex(2).unwrap();
        assert_eq!(s.face_count(0), 6);
        assert_eq!(s.face_count(1), 12);
        assert_eq!(s.face_count(2), 8);
    }

    #[test]
    fn s0_join_s0_is_square() {
        let s0 = sphere_complex(0).unwrap();
        let sq = join(&s0, &s0);
        assert_eq!(sq.face_count(0), 4);
        assert_eq!(sq.face_count(1), 4);
        assert_eq!(sq.dimension(), 1);
    }

    #[test]
    fn join_with_empty_is_identity() {
        let h = hexagon();
        assert_eq!(join(&h, &sphere_complex(-1).unwrap()), h);
    }

    #[test]
    fn links() {
        let h = hexagon();
        let l = link(&h, 3).unwrap();
        assert_eq!(l.face_count(0), 2);
        assert_eq!(l.dimension(), 0);

        let tri = SimplicialComplex::from_facets([vec![0, 1, 2]]).unwrap();
        let l = link(&tri, 0).unwrap();
        assert_eq!(l.facets(), &[Simplex::new(vec![1, 2]).unwrap()]);

        // the link of an octahedron vertex is the 4-cycle on the four
        // vertices other than the vertex and its antipode
        let oct = sphere_complex(2).unwrap();
        let l = link(&oct, 0).unwrap();
        assert_eq!(l.face_count(0), 4);
        assert_eq!(l.face_count(1), 4);
        assert!(!l.has_vertex(1));

        assert_eq!(link(&h, 17), Err(SimplicialError::MissingVertex(17)));
    }
}
