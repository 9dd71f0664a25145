use std::fmt;

use serde::{Deserialize, Serialize};

use super::SimplicialError;

/// A nonempty simplex, stored by its strictly increasing vertex ids.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Simplex(Vec<usize>);

impl Simplex {
    pub fn new(vertices: Vec<usize>) -> Result<Self, SimplicialError> {
        if vertices.is_empty() {
            return Err(SimplicialError::EmptySimplex);
        }
        if vertices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(SimplicialError::UnsortedSimplex(vertices));
        }
        Ok(Self(vertices))
    }

    pub(crate) fn from_sorted_unchecked(vertices: Vec<usize>) -> Self {
        debug_assert!(!vertices.is_empty() && vertices.windows(2).all(|w| w[0] < w[1]));
        Self(vertices)
    }

    /// Normalizes an oriented simplex given in arbitrary vertex order.
    ///
    /// Returns the sorted simplex together with the sign of the sorting
    /// permutation, or `None` when a vertex repeats (a degenerate simplex).
    pub fn oriented(vertices: &[usize]) -> Result<Option<(Self, i64)>, SimplicialError> {
        if vertices.is_empty() {
            return Err(SimplicialError::EmptySimplex);
        }
        let mut v = vertices.to_vec();
        let mut sign = 1i64;
        // insertion sort, counting transpositions
        for i in 1..v.len() {
            let mut j = i;
            while j > 0 && v[j - 1] > v[j] {
                v.swap(j - 1, j);
                sign = -sign;
                j -= 1;
            }
        }
        if v.windows(2).any(|w| w[0] == w[1]) {
            return Ok(None);
        }
        Ok(Some((Self(v), sign)))
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn dimension(&self) -> usize {
        self.0.len() - 1
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn is_face_of(&self, other: &Simplex) -> bool {
        self.0.iter().all(|v| other.contains(*v))
    }

    pub fn max_vertex(&self) -> usize {
        *self.0.last().expect("nonempty")
    }

    pub fn union(&self, other: &Simplex) -> Simplex {
        let mut v: Vec<usize> = self.0.iter().chain(other.0.iter()).copied().collect();
        v.sort_unstable();
        v.dedup();
        Simplex(v)
    }

    pub fn shifted(&self, by: usize) -> Simplex {
        Simplex(self.0.iter().map(|v| v + by).collect())
    }

    /// The face obtained by deleting `v`; `None` if nothing remains.
    pub fn without(&self, v: usize) -> Option<Simplex> {
        let rest: Vec<usize> = self.0.iter().copied().filter(|&w| w != v).collect();
        (!rest.is_empty()).then_some(Simplex(rest))
    }

    /// Codimension-one faces with their boundary signs `(−1)^i`.
    pub fn boundary_faces(&self) -> impl Iterator<Item = (Simplex, i64)> + '_ {
        let n = self.0.len();
        (0..n).filter(move |_| n > 1).map(move |i| {
            let mut v = self.0.clone();
            v.remove(i);
            (Simplex(v), if i % 2 == 0 { 1 } else { -1 })
        })
    }

    /// All nonempty faces, including the simplex itself.
    pub fn faces(&self) -> impl Iterator<Item = Simplex> + '_ {
        let n = self.0.len();
        (1u64..(1u64 << n)).map(move |mask| {
            Simplex(
                (0..n)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| self.0[i])
                    .collect(),
            )
        })
    }

    pub fn map_vertices(&self, f: impl Fn(usize) -> usize) -> Simplex {
        let mut v: Vec<usize> = self.0.iter().map(|&x| f(x)).collect();
        v.sort_unstable();
        v.dedup();
        Simplex(v)
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unsorted_and_empty() {
        assert!(Simplex::new(vec![]).is_err());
        assert!(Simplex::new(vec![2, 1]).is_err());
        assert!(Simplex::new(vec![1, 1]).is_err());
        assert_eq!(Simplex::new(vec![0, 3]).unwrap().dimension(), 1);
    }

    #[test]
    fn orientation_sign() {
        let (s, sign) = Simplex::oriented(&[2, 0, 1]).unwrap().unwrap();
        assert_eq!(s.vertices(), &[0, 1, 2]);
        assert_eq!(sign, 1);
        let (_, sign) = Simplex::oriented(&[1, 0, 2]).unwrap().unwrap();
        assert_eq!(sign, -1);
        assert!(Simplex::oriented(&[1, 1]).unwrap().is_none());
    }

    #[test]
    fn face_enumeration() {
        let s = Simplex::new(vec![0, 1, 2]).unwrap();
        assert_eq!(s.faces().count(), 7);
        let b: Vec<_> = s.boundary_faces().collect();
        assert_eq!(b[0], (Simplex::new(vec![1, 2]).unwrap(), 1));
        assert_eq!(b[1], (Simplex::new(vec![0, 2]).unwrap(), -1));
        assert_eq!(b[2], (Simplex::new(vec![0, 1]).unwrap(), 1));
        assert_eq!(Simplex::new(vec![4]).unwrap().boundary_faces().count(), 0);
    }
}
