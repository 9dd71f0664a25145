//! Finite Coxeter groups of small rank and their Coxeter complexes.
//!
//! Group elements are matrices of a faithful integral representation, built
//! block by block over the irreducible components of the diagram:
//!
//! * crystallographic components (`A_n`, `B_n`, `I₂(6)`) use the reflection
//!   representation on the simple roots, `s_i(α_j) = α_j − a_ij α_i`, with an
//!   integral Cartan matrix;
//! * the remaining dihedral components `I₂(m)` act by the symmetries of the
//!   regular `m`-gon on its vertex set `ℤ/m`, `s₀: k ↦ −k`, `s₁: k ↦ 1 − k`.
//!
//! Equality of elements is equality of matrices, so no word problem has to
//! be solved. Lengths are breadth-first distances in the Cayley graph.

use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::simplicial::{Simplex, SimplicialComplex};

const MAX_ORDER: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoxeterError {
    #[error("invalid Coxeter matrix: {0}")]
    InvalidMatrix(String),
    #[error("unsupported Coxeter type: {0}")]
    Unsupported(String),
    #[error("group enumeration produced {found} elements, expected {expected}")]
    OrderMismatch { found: usize, expected: usize },
}

/// Irreducible finite types handled here.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ComponentKind {
    A(usize),
    B(usize),
    I2(u32),
}

impl ComponentKind {
    pub fn order(&self) -> usize {
        match *self {
            ComponentKind::A(n) => (1..=n + 1).product(),
            ComponentKind::B(n) => (1usize << n) * (1..=n).product::<usize>(),
            ComponentKind::I2(m) => 2 * m as usize,
        }
    }
}

/// Coxeter matrix `m` with `m[i][i] = 1` and `m[i][j] ≥ 2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "DiagramSpec", into = "DiagramSpec")]
pub struct CoxeterDiagram {
    m: Vec<Vec<u32>>,
}

/// JSON forms of a diagram: `{"type":"A"|"B"|"I2","n":k}` or `{"m":[[..]]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DiagramSpec {
    Named {
        #[serde(rename = "type")]
        kind: String,
        n: u32,
    },
    Matrix {
        m: Vec<Vec<u32>>,
    },
}

impl TryFrom<DiagramSpec> for CoxeterDiagram {
    type Error = CoxeterError;

    fn try_from(spec: DiagramSpec) -> Result<Self, CoxeterError> {
        match spec {
            DiagramSpec::Named { kind, n } => match kind.as_str() {
                "A" => CoxeterDiagram::a(n as usize),
                "B" => CoxeterDiagram::b(n as usize),
                "I2" => CoxeterDiagram::i2(n),
                other => Err(CoxeterError::Unsupported(format!("type {other}"))),
            },
            DiagramSpec::Matrix { m } => CoxeterDiagram::new(m),
        }
    }
}

impl From<CoxeterDiagram> for DiagramSpec {
    fn from(d: CoxeterDiagram) -> Self {
        DiagramSpec::Matrix { m: d.m }
    }
}

impl CoxeterDiagram {
    pub fn new(m: Vec<Vec<u32>>) -> Result<Self, CoxeterError> {
        let r = m.len();
        if r == 0 {
            return Err(CoxeterError::InvalidMatrix("rank must be at least 1".into()));
        }
        for (i, row) in m.iter().enumerate() {
            if row.len() != r {
                return Err(CoxeterError::InvalidMatrix("matrix is not square".into()));
            }
            if row[i] != 1 {
                return Err(CoxeterError::InvalidMatrix(format!("m[{i}][{i}] must be 1")));
            }
            for (j, &v) in row.iter().enumerate() {
                if i != j && v < 2 {
                    return Err(CoxeterError::InvalidMatrix(format!("m[{i}][{j}] = {v} < 2")));
                }
                if m[j][i] != v {
                    return Err(CoxeterError::InvalidMatrix("matrix is not symmetric".into()));
                }
            }
        }
        let d = Self { m };
        d.components()?;
        Ok(d)
    }

    fn linear(labels: &[u32]) -> Result<Self, CoxeterError> {
        let r = labels.len() + 1;
        let mut m = vec![vec![2; r]; r];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1;
        }
        for (i, &l) in labels.iter().enumerate() {
            m[i][i + 1] = l;
            m[i + 1][i] = l;
        }
        Self::new(m)
    }

    /// `A_n`, a path with all labels 3.
    pub fn a(n: usize) -> Result<Self, CoxeterError> {
        if n == 0 {
            return Err(CoxeterError::Unsupported("A_0".into()));
        }
        Self::linear(&vec![3; n - 1])
    }

    /// `B_n`: labels `3, …, 3, 4`.
    pub fn b(n: usize) -> Result<Self, CoxeterError> {
        if n < 2 {
            return Err(CoxeterError::Unsupported(format!("B_{n}")));
        }
        let mut labels = vec![3; n - 1];
        labels[n - 2] = 4;
        Self::linear(&labels)
    }

    /// Dihedral `I₂(m)`.
    pub fn i2(m: u32) -> Result<Self, CoxeterError> {
        Self::linear(&[m])
    }

    /// Direct product: block-diagonal Coxeter matrix with 2 between blocks.
    pub fn product(&self, other: &CoxeterDiagram) -> Self {
        let (r, s) = (self.rank(), other.rank());
        let mut m = vec![vec![2; r + s]; r + s];
        for i in 0..r {
            for j in 0..r {
                m[i][j] = self.m[i][j];
            }
        }
        for i in 0..s {
            for j in 0..s {
                m[r + i][r + j] = other.m[i][j];
            }
        }
        Self { m }
    }

    pub fn rank(&self) -> usize {
        self.m.len()
    }

    pub fn matrix(&self) -> &[Vec<u32>] {
        &self.m
    }

    /// Irreducible components with their node lists and types.
    pub fn components(&self) -> Result<Vec<(Vec<usize>, ComponentKind)>, CoxeterError> {
        let r = self.rank();
        let mut seen = vec![false; r];
        let mut out = Vec::new();
        for start in 0..r {
            if seen[start] {
                continue;
            }
            let mut nodes = vec![];
            let mut queue = VecDeque::from([start]);
            seen[start] = true;
            while let Some(v) = queue.pop_front() {
                nodes.push(v);
                for w in 0..r {
                    if w != v && self.m[v][w] >= 3 && !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            nodes.sort_unstable();
            let kind = self.classify(&nodes)?;
            out.push((nodes, kind));
        }
        Ok(out)
    }

    fn classify(&self, nodes: &[usize]) -> Result<ComponentKind, CoxeterError> {
        let label = |a: usize, b: usize| self.m[nodes[a]][nodes[b]];
        match nodes.len() {
            1 => Ok(ComponentKind::A(1)),
            2 => match label(0, 1) {
                3 => Ok(ComponentKind::A(2)),
                4 => Ok(ComponentKind::B(2)),
                m if m <= 12 => Ok(ComponentKind::I2(m)),
                m => Err(CoxeterError::Unsupported(format!("I2({m}) exceeds m = 12"))),
            },
            3 => {
                let mut edges: Vec<u32> = [(0, 1), (0, 2), (1, 2)]
                    .iter()
                    .map(|&(a, b)| label(a, b))
                    .filter(|&l| l >= 3)
                    .collect();
                edges.sort_unstable();
                match edges.as_slice() {
                    [3, 3] => Ok(ComponentKind::A(3)),
                    [3, 4] => Ok(ComponentKind::B(3)),
                    other => Err(CoxeterError::Unsupported(format!(
                        "rank-3 component with edge labels {other:?}"
                    ))),
                }
            }
            n => Err(CoxeterError::Unsupported(format!("irreducible component of rank {n}"))),
        }
    }

    /// Group order from the component types.
    pub fn expected_order(&self) -> Result<usize, CoxeterError> {
        Ok(self.components()?.iter().map(|(_, k)| k.order()).product())
    }
}

/// An element of `W`, stored as its matrix in the faithful representation
/// (row-major); the columns are the images of the basis vectors.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    dim: usize,
    entries: Vec<i64>,
}

impl GroupElement {
    fn identity(dim: usize) -> Self {
        let mut entries = vec![0; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = 1;
        }
        Self { dim, entries }
    }

    fn mul(&self, rhs: &GroupElement) -> GroupElement {
        let n = self.dim;
        let mut entries = vec![0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    entries[i * n + j] += a * rhs.entries[k * n + j];
                }
            }
        }
        GroupElement { dim: n, entries }
    }

    pub fn matrix(&self) -> Vec<Vec<i64>> {
        self.entries.chunks(self.dim).map(<[i64]>::to_vec).collect()
    }
}

fn generator_matrices(d: &CoxeterDiagram) -> Result<(usize, Vec<GroupElement>), CoxeterError> {
    let comps = d.components()?;
    let block_dim = |k: &ComponentKind, nodes: &[usize]| match k {
        ComponentKind::I2(m) if ![3, 4, 6].contains(m) => *m as usize,
        _ => nodes.len(),
    };
    let dim: usize = comps.iter().map(|(n, k)| block_dim(k, n)).sum();
    let mut gens = vec![GroupElement::identity(dim); d.rank()];
    let mut offset = 0;
    for (nodes, kind) in &comps {
        let bd = block_dim(kind, nodes);
        match kind {
            ComponentKind::I2(m) if ![3, 4, 6].contains(m) => {
                let m = *m as usize;
                let perms: [Box<dyn Fn(usize) -> usize>; 2] =
                    [Box::new(move |k| (m - k) % m), Box::new(move |k| (m + 1 - k) % m)];
                for (slot, perm) in nodes.iter().zip(perms.iter()) {
                    let g = &mut gens[*slot];
                    for k in 0..m {
                        g.entries[(offset + k) * dim + offset + k] = 0;
                    }
                    for k in 0..m {
                        g.entries[(offset + perm(k)) * dim + offset + k] = 1;
                    }
                }
            }
            _ => {
                // integral Cartan matrix with a_ij·a_ji = 4cos²(π/m_ij)
                let r = nodes.len();
                let mut cartan = vec![vec![0i64; r]; r];
                for a in 0..r {
                    cartan[a][a] = 2;
                    for b in a + 1..r {
                        let (x, y) = match d.m[nodes[a]][nodes[b]] {
                            2 => (0, 0),
                            3 => (-1, -1),
                            4 => (-1, -2),
                            6 => (-1, -3),
                            other => {
                                return Err(CoxeterError::Unsupported(format!(
                                    "no integral Cartan entry for m = {other}"
                                )))
                            }
                        };
                        cartan[a][b] = x;
                        cartan[b][a] = y;
                    }
                }
                for (a, &slot) in nodes.iter().enumerate() {
                    let g = &mut gens[slot];
                    for b in 0..r {
                        let delta = i64::from(a == b);
                        g.entries[(offset + a) * dim + offset + b] = delta - cartan[a][b];
                    }
                }
            }
        }
        offset += bd;
    }
    Ok((dim, gens))
}

/// Enumerated finite Coxeter group with multiplication by generators.
#[derive(Debug, Clone)]
pub struct CoxeterGroup {
    diagram: CoxeterDiagram,
    elements: Vec<GroupElement>,
    index: HashMap<GroupElement, usize>,
    lengths: Vec<usize>,
    // right_mul[g][i] = index of g·s_i
    right_mul: Vec<Vec<usize>>,
    // a reduced word for each element
    words: Vec<Vec<usize>>,
    inverse: Vec<usize>,
}

impl CoxeterGroup {
    /// Breadth-first enumeration from the identity; element 0 is the identity
    /// and elements are listed by nondecreasing length.
    pub fn generate(diagram: &CoxeterDiagram) -> Result<Self, CoxeterError> {
        let expected = diagram.expected_order()?;
        let (dim, gens) = generator_matrices(diagram)?;
        let rank = diagram.rank();
        let id = GroupElement::identity(dim);
        let mut elements = vec![id.clone()];
        let mut index = HashMap::from([(id, 0usize)]);
        let mut lengths = vec![0];
        let mut words = vec![vec![]];
        let mut right_mul: Vec<Vec<usize>> = Vec::new();
        let mut cursor = 0;
        while cursor < elements.len() {
            let mut row = Vec::with_capacity(rank);
            for (i, s) in gens.iter().enumerate() {
                let h = elements[cursor].mul(s);
                let j = match index.get(&h) {
                    Some(&j) => j,
                    None => {
                        if elements.len() >= MAX_ORDER {
                            return Err(CoxeterError::Unsupported("group is too large".into()));
                        }
                        let j = elements.len();
                        index.insert(h.clone(), j);
                        elements.push(h);
                        lengths.push(lengths[cursor] + 1);
                        let mut w = words[cursor].clone();
                        w.push(i);
                        words.push(w);
                        j
                    }
                };
                row.push(j);
            }
            right_mul.push(row);
            cursor += 1;
        }
        if elements.len() != expected {
            return Err(CoxeterError::OrderMismatch {
                found: elements.len(),
                expected,
            });
        }
        let mut group = Self {
            diagram: diagram.clone(),
            elements,
            index,
            lengths,
            right_mul,
            words,
            inverse: Vec::new(),
        };
        group.inverse = (0..group.order())
            .map(|g| {
                let mut w = group.words[g].clone();
                w.reverse();
                group.apply_word(0, &w)
            })
            .collect();
        Ok(group)
    }

    pub fn diagram(&self) -> &CoxeterDiagram {
        &self.diagram
    }

    pub fn rank(&self) -> usize {
        self.diagram.rank()
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn element(&self, g: usize) -> &GroupElement {
        &self.elements[g]
    }

    pub fn index_of(&self, e: &GroupElement) -> Option<usize> {
        self.index.get(e).copied()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn length(&self, g: usize) -> usize {
        self.lengths[g]
    }

    pub fn reduced_word(&self, g: usize) -> &[usize] {
        &self.words[g]
    }

    /// Index of the simple reflection `s_i`.
    pub fn generator(&self, i: usize) -> usize {
        self.right_mul[0][i]
    }

    pub fn right_mul_generator(&self, g: usize, i: usize) -> usize {
        self.right_mul[g][i]
    }

    fn apply_word(&self, g: usize, word: &[usize]) -> usize {
        word.iter().fold(g, |acc, &i| self.right_mul[acc][i])
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.apply_word(a, &self.words[b])
    }

    pub fn inverse(&self, g: usize) -> usize {
        self.inverse[g]
    }

    /// The unique element of maximal length.
    pub fn longest_element(&self) -> usize {
        let max = *self.lengths.iter().max().expect("nonempty group");
        let mut candidates = (0..self.order()).filter(|&g| self.lengths[g] == max);
        let w0 = candidates.next().expect("nonempty group");
        debug_assert!(candidates.next().is_none());
        w0
    }

    /// `w` and `w'` are opposite iff `w⁻¹w' = w₀`.
    pub fn opposition(&self, w: usize, w2: usize) -> bool {
        self.mul(self.inverse(w), w2) == self.longest_element()
    }

    /// The permutation `i ↦ i'` of simple reflections with `w₀ s_i w₀ = s_{i'}`.
    pub fn opposition_involution(&self) -> Vec<usize> {
        let w0 = self.longest_element();
        (0..self.rank())
            .map(|i| {
                let c = self.mul(self.mul(w0, self.generator(i)), w0);
                (0..self.rank())
                    .find(|&j| self.generator(j) == c)
                    .expect("conjugation by w0 permutes the simple reflections")
            })
            .collect()
    }

    pub fn longest_is_central(&self) -> bool {
        self.opposition_involution()
            .iter()
            .enumerate()
            .all(|(i, &j)| i == j)
    }
}

/// Convenience wrapper around [`CoxeterGroup::generate`].
pub fn generate_group(d: &CoxeterDiagram) -> Result<Vec<GroupElement>, CoxeterError> {
    Ok(CoxeterGroup::generate(d)?.elements)
}

/// The Coxeter complex: vertices are the cosets `wW_{S∖{i}}` (type `i`),
/// and the chamber of `w` is `{wW_{S∖{i}} : i ∈ S}`.
#[derive(Debug, Clone)]
pub struct CoxeterComplexData {
    pub group: CoxeterGroup,
    pub complex: SimplicialComplex,
    /// `chamber_of[g]` for every element index `g`.
    pub chamber_of: Vec<Simplex>,
    /// Type of each vertex.
    pub type_of: Vec<usize>,
    /// `vertex_of[i][g]` is the vertex `gW_{S∖{i}}`.
    pub vertex_of: Vec<Vec<usize>>,
}

impl CoxeterComplexData {
    pub fn new(diagram: &CoxeterDiagram) -> Result<Self, CoxeterError> {
        let group = CoxeterGroup::generate(diagram)?;
        let rank = group.rank();
        let n = group.order();
        let mut type_of = Vec::new();
        let mut vertex_of = vec![vec![usize::MAX; n]; rank];
        for (i, slot) in vertex_of.iter_mut().enumerate() {
            // cosets of W_{S∖{i}}: components of the Cayley graph on generators j ≠ i
            for start in 0..n {
                if slot[start] != usize::MAX {
                    continue;
                }
                let v = type_of.len();
                type_of.push(i);
                let mut stack = vec![start];
                slot[start] = v;
                while let Some(g) = stack.pop() {
                    for j in (0..rank).filter(|&j| j != i) {
                        let h = group.right_mul_generator(g, j);
                        if slot[h] == usize::MAX {
                            slot[h] = v;
                            stack.push(h);
                        }
                    }
                }
            }
        }
        let chamber_of: Vec<Simplex> = (0..n)
            .map(|g| {
                let mut v: Vec<usize> = (0..rank).map(|i| vertex_of[i][g]).collect();
                v.sort_unstable();
                Simplex::new(v).expect("distinct vertices of distinct types")
            })
            .collect();
        let complex = SimplicialComplex::with_vertex_count(type_of.len(), chamber_of.iter().cloned())
            .expect("vertex ids in range");
        Ok(Self {
            group,
            complex,
            chamber_of,
            type_of,
            vertex_of,
        })
    }

    /// Chamber (element index) by simplex.
    pub fn element_of_chamber(&self) -> BTreeMap<Simplex, usize> {
        self.chamber_of
            .iter()
            .enumerate()
            .map(|(g, c)| (c.clone(), g))
            .collect()
    }

    /// Left action of `g` on a vertex: `g·(wW_J) = (gw)W_J`.
    pub fn act_on_vertex(&self, g: usize, v: usize) -> usize {
        let t = self.type_of[v];
        let rep = self.vertex_of[t]
            .iter()
            .position(|&x| x == v)
            .expect("every vertex is a coset");
        self.vertex_of[t][self.group.mul(g, rep)]
    }
}

pub fn coxeter_complex(d: &CoxeterDiagram) -> Result<CoxeterComplexData, CoxeterError> {
    CoxeterComplexData::new(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::{homology, reduced_homology};

    #[test]
    fn group_orders() {
        let cases = [
            (CoxeterDiagram::a(1).unwrap(), 2),
            (CoxeterDiagram::a(2).unwrap(), 6),
            (CoxeterDiagram::a(3).unwrap(), 24),
            (CoxeterDiagram::b(2).unwrap(), 8),
            (CoxeterDiagram::b(3).unwrap(), 48),
            (CoxeterDiagram::i2(5).unwrap(), 10),
            (CoxeterDiagram::i2(6).unwrap(), 12),
            (CoxeterDiagram::i2(12).unwrap(), 24),
        ];
        for (d, order) in cases {
            assert_eq!(generate_group(&d).unwrap().len(), order, "{d:?}");
        }
        let prod = CoxeterDiagram::a(2).unwrap().product(&CoxeterDiagram::a(1).unwrap());
        assert_eq!(generate_group(&prod).unwrap().len(), 12);
    }

    #[test]
    fn rejects_unsupported() {
        assert!(CoxeterDiagram::i2(13).is_err());
        // H3
        assert!(CoxeterDiagram::new(vec![vec![1, 5, 2], vec![5, 1, 3], vec![2, 3, 1]]).is_err());
        // affine Ã2 (triangle of 3s)
        assert!(CoxeterDiagram::new(vec![vec![1, 3, 3], vec![3, 1, 3], vec![3, 3, 1]]).is_err());
        assert!(CoxeterDiagram::new(vec![vec![1, 3], vec![4, 1]]).is_err());
        assert!(CoxeterDiagram::new(vec![vec![1, 1], vec![1, 1]]).is_err());
        assert!(CoxeterDiagram::a(4).is_err());
    }

    #[test]
    fn longest_element_length_is_positive_root_count() {
        let cases = [
            (CoxeterDiagram::a(2).unwrap(), 3),
            (CoxeterDiagram::a(3).unwrap(), 6),
            (CoxeterDiagram::b(3).unwrap(), 9),
            (CoxeterDiagram::i2(7).unwrap(), 7),
        ];
        for (d, l) in cases {
            let g = CoxeterGroup::generate(&d).unwrap();
            assert_eq!(g.length(g.longest_element()), l);
        }
    }

    #[test]
    fn opposition_in_a2() {
        let g = CoxeterGroup::generate(&CoxeterDiagram::a(2).unwrap()).unwrap();
        let w0 = g.longest_element();
        assert!(g.opposition(g.identity(), w0));
        for w in 0..g.order() {
            let opposite: Vec<_> = (0..g.order()).filter(|&v| g.opposition(w, v)).collect();
            assert_eq!(opposite.len(), 1);
            // involution
            assert!(g.opposition(opposite[0], w));
        }
        assert_eq!(g.opposition_involution(), vec![1, 0]);
        assert!(!g.longest_is_central());
        let b3 = CoxeterGroup::generate(&CoxeterDiagram::b(3).unwrap()).unwrap();
        assert!(b3.longest_is_central());
        let a3 = CoxeterGroup::generate(&CoxeterDiagram::a(3).unwrap()).unwrap();
        assert_eq!(a3.opposition_involution(), vec![2, 1, 0]);
    }

    #[test]
    fn group_axioms() {
        let g = CoxeterGroup::generate(&CoxeterDiagram::b(3).unwrap()).unwrap();
        for a in 0..g.order() {
            assert_eq!(g.mul(a, g.inverse(a)), g.identity());
            assert_eq!(g.length(a), g.length(g.inverse(a)));
            assert_eq!(g.length(a), g.reduced_word(a).len());
            for i in 0..g.rank() {
                let b = g.right_mul_generator(a, i);
                assert_eq!(g.length(a).abs_diff(g.length(b)), 1);
            }
        }
        // associativity on a sample
        for a in (0..g.order()).step_by(7) {
            for b in (0..g.order()).step_by(5) {
                for c in (0..g.order()).step_by(11) {
                    assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
                }
            }
        }
    }

    #[test]
    fn complexes_are_spheres() {
        let diagrams = [
            CoxeterDiagram::a(1).unwrap(),
            CoxeterDiagram::a(2).unwrap(),
            CoxeterDiagram::a(3).unwrap(),
            CoxeterDiagram::b(2).unwrap(),
            CoxeterDiagram::b(3).unwrap(),
            CoxeterDiagram::i2(5).unwrap(),
            CoxeterDiagram::i2(12).unwrap(),
        ];
        for d in diagrams {
            let cc = coxeter_complex(&d).unwrap();
            let top = d.rank() as i64 - 1;
            assert_eq!(cc.complex.dimension(), top);
            assert_eq!(cc.complex.facets().len(), cc.group.order());
            assert_eq!(homology(&cc.complex, top, true).unwrap().betti, 1, "{d:?}");
            for k in 0..top {
                assert!(reduced_homology(&cc.complex, k).is_trivial(), "{d:?} degree {k}");
            }
        }
    }

    #[test]
    fn small_complexes() {
        let a2 = coxeter_complex(&CoxeterDiagram::a(2).unwrap()).unwrap();
        assert_eq!(a2.complex.face_count(0), 6);
        assert_eq!(a2.complex.face_count(1), 6);
        let a1 = coxeter_complex(&CoxeterDiagram::a(1).unwrap()).unwrap();
        assert_eq!(a1.complex.face_count(0), 2);
        assert_eq!(a1.complex.dimension(), 0);
        let b2 = coxeter_complex(&CoxeterDiagram::b(2).unwrap()).unwrap();
        assert_eq!(b2.complex.face_count(0), 8);
        assert_eq!(b2.complex.face_count(1), 8);
    }

    #[test]
    fn vertex_type_classes() {
        // |W| / |W_{S∖{i}}| vertices of type i
        let b3 = coxeter_complex(&CoxeterDiagram::b(3).unwrap()).unwrap();
        let counts: Vec<usize> = (0..3)
            .map(|i| b3.type_of.iter().filter(|&&t| t == i).count())
            .collect();
        // removing node 0 leaves B2 (8), node 1 leaves A1×A1 (4), node 2 leaves A2 (6)
        assert_eq!(counts, vec![48 / 8, 48 / 4, 48 / 6]);
        for c in &b3.chamber_of {
            let mut types: Vec<usize> = c.vertices().iter().map(|&v| b3.type_of[v]).collect();
            types.sort();
            assert_eq!(types, vec![0, 1, 2]);
        }
    }

    #[test]
    fn diagram_json() {
        let d: CoxeterDiagram = serde_json::from_str(r#"{"type":"A","n":2}"#).unwrap();
        assert_eq!(d, CoxeterDiagram::a(2).unwrap());
        let d: CoxeterDiagram = serde_json::from_str(r#"{"type":"I2","n":5}"#).unwrap();
        assert_eq!(d.rank(), 2);
        let d: CoxeterDiagram = serde_json::from_str(r#"{"m":[[1,4],[4,1]]}"#).unwrap();
        assert_eq!(d, CoxeterDiagram::b(2).unwrap());
        let back = serde_json::to_string(&d).unwrap();
        assert_eq!(back, r#"{"m":[[1,4],[4,1]]}"#);
        assert!(serde_json::from_str::<CoxeterDiagram>(r#"{"type":"E","n":8}"#).is_err());
    }
}
