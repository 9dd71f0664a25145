use std::collections::{BTreeSet, HashMap};
use std::sync::OnceLock;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use super::{Simplex, SimplicialError};

#[derive(Debug)]
struct FaceIndex {
    by_dim: Vec<Vec<Simplex>>,
    // dimension-major position of every face
    global: HashMap<Simplex, usize>,
    offsets: Vec<usize>,
}

/// A finite abstract simplicial complex given by its facets.
///
/// `vertex_count` bounds the vertex ids (`id < vertex_count`); vertices that
/// occur in no facet are not part of the complex. The face index is built on
/// first use and never changes afterwards.
///
/// JSON form: `{"vertices": vertex_count, "facets": [[..], ..]}`.
#[derive(Debug, Serialize, Deserialize)]
#[serde(into = "ComplexRepr", try_from = "ComplexRepr")]
pub struct SimplicialComplex {
    vertex_count: usize,
    facets: Vec<Simplex>,
    faces: OnceLock<FaceIndex>,
}

#[derive(Serialize, Deserialize)]
struct ComplexRepr {
    vertices: usize,
    facets: Vec<Vec<usize>>,
}

impl From<SimplicialComplex> for ComplexRepr {
    fn from(k: SimplicialComplex) -> Self {
        ComplexRepr {
            vertices: k.vertex_count,
            facets: k.facets.iter().map(|f| f.vertices().to_vec()).collect(),
        }
    }
}

impl TryFrom<ComplexRepr> for SimplicialComplex {
    type Error = SimplicialError;

    fn try_from(r: ComplexRepr) -> Result<Self, SimplicialError> {
        let facets = r.facets.into_iter().map(Simplex::new).collect::<Result<Vec<_>, _>>()?;
        SimplicialComplex::with_vertex_count(r.vertices, facets)
    }
}

impl Clone for SimplicialComplex {
    fn clone(&self) -> Self {
        Self {
            vertex_count: self.vertex_count,
            facets: self.facets.clone(),
            faces: OnceLock::new(),
        }
    }
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.vertex_count == other.vertex_count && self.facets == other.facets
    }
}

impl Eq for SimplicialComplex {}

/// Keeps only inclusion-maximal simplices, sorted.
fn maximal(mut simplices: Vec<Simplex>) -> Vec<Simplex> {
    simplices.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    simplices.dedup();
    let mut kept: Vec<Simplex> = Vec::with_capacity(simplices.len());
    for s in simplices {
        if !kept.iter().any(|k| k.len() > s.len() && s.is_face_of(k)) {
            kept.push(s);
        }
    }
    kept.sort();
    kept
}

impl SimplicialComplex {
    /// Downward closure of the given facets; redundant facets are absorbed.
    /// The vertex bound is one past the largest id used.
    pub fn from_facets<I, V>(facets: I) -> Result<Self, SimplicialError>
    where
        I: IntoIterator<Item = V>,
        V: Into<Vec<usize>>,
    {
        let mut simplices = Vec::new();
        for f in facets {
            let mut v: Vec<usize> = f.into();
            if v.is_empty() {
                return Err(SimplicialError::EmptySimplex);
            }
            v.sort_unstable();
            v.dedup();
            simplices.push(Simplex::from_sorted_unchecked(v));
        }
        if simplices.is_empty() {
            return Err(SimplicialError::EmptyComplex);
        }
        let vertex_count = simplices.iter().map(|s| s.max_vertex() + 1).max().unwrap_or(0);
        Ok(Self::from_normalized(vertex_count, simplices))
    }

    /// Like [`from_facets`](Self::from_facets) with an explicit vertex bound;
    /// an empty facet list gives the empty complex.
    pub fn with_vertex_count<I>(vertex_count: usize, facets: I) -> Result<Self, SimplicialError>
    where
        I: IntoIterator<Item = Simplex>,
    {
        let facets: Vec<Simplex> = facets.into_iter().collect();
        for f in &facets {
            if f.max_vertex() >= vertex_count {
                return Err(SimplicialError::VertexOutOfRange {
                    vertex: f.max_vertex(),
                    vertex_count,
                });
            }
        }
        Ok(Self::from_normalized(vertex_count, facets))
    }

    pub(crate) fn from_normalized(vertex_count: usize, facets: Vec<Simplex>) -> Self {
        Self {
            vertex_count,
            facets: maximal(facets),
            faces: OnceLock::new(),
        }
    }

    pub fn empty(vertex_count: usize) -> Self {
        Self {
            vertex_count,
            facets: Vec::new(),
            faces: OnceLock::new(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn facets(&self) -> &[Simplex] {
        &self.facets
    }

    pub fn is_empty(&self) -> bool {
        self.facets.is_empty()
    }

    /// Dimension, with `−1` for the empty complex.
    pub fn dimension(&self) -> i64 {
        self.facets
            .iter()
            .map(|f| f.dimension() as i64)
            .max()
            .unwrap_or(-1)
    }

    /// Pure: every facet has the same dimension.
    pub fn is_pure(&self) -> bool {
        let d = self.dimension();
        self.facets.iter().all(|f| f.dimension() as i64 == d)
    }

    pub fn vertices(&self) -> BTreeSet<usize> {
        self.facets.iter().flat_map(|f| f.vertices().iter().copied()).collect()
    }

    pub fn has_vertex(&self, v: usize) -> bool {
        self.facets.iter().any(|f| f.contains(v))
    }

    fn index(&self) -> &FaceIndex {
        self.faces.get_or_init(|| {
            let dim = self.dimension();
            let mut by_dim: Vec<BTreeSet<Simplex>> = vec![BTreeSet::new(); (dim + 1) as usize];
            for f in &self.facets {
                for face in f.faces() {
                    by_dim[face.dimension()].insert(face);
                }
            }
            let by_dim: Vec<Vec<Simplex>> = by_dim.into_iter().map(|s| s.into_iter().collect()).collect();
            let mut global = HashMap::new();
            let mut offsets = Vec::with_capacity(by_dim.len() + 1);
            let mut next = 0;
            for faces in &by_dim {
                offsets.push(next);
                for f in faces {
                    global.insert(f.clone(), next);
                    next += 1;
                }
            }
            offsets.push(next);
            FaceIndex {
                by_dim,
                global,
                offsets,
            }
        })
    }

    /// Faces of dimension `k` in lexicographic order (empty when out of range).
    pub fn faces(&self, k: usize) -> &[Simplex] {
        self.index().by_dim.get(k).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn face_count(&self, k: usize) -> usize {
        self.faces(k).len()
    }

    pub fn total_face_count(&self) -> usize {
        *self.index().offsets.last().unwrap_or(&0)
    }

    /// Every face, dimension-major, lexicographic within a dimension.
    pub fn all_faces(&self) -> impl Iterator<Item = &Simplex> {
        self.index().by_dim.iter().flatten()
    }

    pub fn contains_face(&self, s: &Simplex) -> bool {
        self.index().global.contains_key(s)
    }

    /// Position of `s` among the faces of its dimension.
    pub fn position(&self, s: &Simplex) -> Option<usize> {
        let idx = self.index();
        idx.global.get(s).map(|g| g - idx.offsets[s.dimension()])
    }

    /// Position of `s` in the dimension-major list of all faces.
    pub fn global_position(&self, s: &Simplex) -> Option<usize> {
        self.index().global.get(s).copied()
    }

    /// Face `i` of the dimension-major list.
    pub fn face_at(&self, i: usize) -> &Simplex {
        let idx = self.index();
        let d = idx.offsets.partition_point(|&o| o <= i) - 1;
        &idx.by_dim[d][i - idx.offsets[d]]
    }

    pub fn is_subcomplex_of(&self, other: &SimplicialComplex) -> bool {
        self.facets.iter().all(|f| other.contains_face(f))
    }

    /// Indicator of the faces of `sub` inside the face list of `self`.
    pub fn face_mask(&self, sub: &SimplicialComplex) -> Result<FixedBitSet, SimplicialError> {
        let mut mask = FixedBitSet::with_capacity(self.total_face_count());
        for f in sub.facets() {
            for face in f.faces() {
                let i = self.global_position(&face).ok_or(SimplicialError::NotSubcomplex)?;
                mask.insert(i);
            }
        }
        Ok(mask)
    }

    /// The subcomplex whose faces are marked in `mask`; the mask must be
    /// downward closed.
    pub fn subcomplex_from_mask(&self, mask: &FixedBitSet) -> SimplicialComplex {
        let faces: Vec<Simplex> = mask.ones().map(|i| self.face_at(i).clone()).collect();
        SimplicialComplex::from_normalized(self.vertex_count, faces)
    }

    /// The complex on the faces common to both.
    pub fn intersection(&self, other: &SimplicialComplex) -> SimplicialComplex {
        let faces: Vec<Simplex> = self
            .all_faces()
            .filter(|f| other.contains_face(f))
            .cloned()
            .collect();
        SimplicialComplex::from_normalized(self.vertex_count.max(other.vertex_count), faces)
    }

    pub fn union(&self, other: &SimplicialComplex) -> SimplicialComplex {
        let facets = self.facets.iter().chain(other.facets.iter()).cloned().collect();
        SimplicialComplex::from_normalized(self.vertex_count.max(other.vertex_count), facets)
    }

    /// The closure of a collection of simplices, with this complex's vertex bound.
    pub fn closure_of<I: IntoIterator<Item = Simplex>>(&self, simplices: I) -> SimplicialComplex {
        SimplicialComplex::from_normalized(self.vertex_count, simplices.into_iter().collect())
    }

    /// Subcomplex of faces avoiding every vertex in `removed`.
    pub fn delete_vertices(&self, removed: &BTreeSet<usize>) -> SimplicialComplex {
        let faces: Vec<Simplex> = self
            .all_faces()
            .filter(|f| f.vertices().iter().all(|v| !removed.contains(v)))
            .cloned()
            .collect();
        SimplicialComplex::from_normalized(self.vertex_count, faces)
    }

    /// Euler characteristic `Σ (−1)^k f_k`.
    pub fn euler_characteristic(&self) -> i64 {
        (0..=self.dimension().max(-1))
            .map(|k| {
                let n = self.face_count(k as usize) as i64;
                if k % 2 == 0 {
                    n
                } else {
                    -n
                }
            })
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn make_complex_examples() {
        let tri = SimplicialComplex::from_facets([vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        assert_eq!(tri.face_count(0), 3);
        assert_eq!(tri.face_count(1), 3);

        let full = SimplicialComplex::from_facets([vec![0, 1, 2]]).unwrap();
        assert_eq!((full.face_count(0), full.face_count(1), full.face_count(2)), (3, 3, 1));

        let absorbed = SimplicialComplex::from_facets([vec![0, 1], vec![0, 1, 2]]).unwrap();
        assert_eq!(absorbed, full);

        let none: Vec<Vec<usize>> = vec![];
        assert_eq!(
            SimplicialComplex::from_facets(none),
            Err(SimplicialError::EmptyComplex)
        );
        assert_eq!(
            SimplicialComplex::from_facets([Vec::<usize>::new()]),
            Err(SimplicialError::EmptySimplex)
        );
    }

    #[test]
    fn faces_are_lexicographic_and_downward_closed() {
        let k = SimplicialComplex::from_facets([vec![2, 3, 4], vec![0, 4]]).unwrap();
        let edges = k.faces(1);
        assert!(edges.windows(2).all(|w| w[0] < w[1]));
        for d in 1..=2 {
            for f in k.faces(d) {
                for (g, _) in f.boundary_faces() {
                    assert!(k.contains_face(&g));
                }
            }
        }
        // V − E + F = 4 − 4 + 1
        assert_eq!(k.euler_characteristic(), 1);
    }

    #[test]
    fn masks_round_trip() {
        let k = SimplicialComplex::from_facets([vec![0, 1, 2], vec![2, 3]]).unwrap();
        let sub = SimplicialComplex::from_facets([vec![1, 2], vec![3]]).unwrap();
        let sub = SimplicialComplex::with_vertex_count(4, sub.facets().iter().cloned()).unwrap();
        let mask = k.face_mask(&sub).unwrap();
        assert_eq!(mask.count_ones(..), 4);
        assert_eq!(k.subcomplex_from_mask(&mask), sub);
        for i in 0..k.total_face_count() {
            assert_eq!(k.global_position(k.face_at(i)), Some(i));
        }
    }
}
