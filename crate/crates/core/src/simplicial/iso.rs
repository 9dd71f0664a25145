use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

use super::{Simplex, SimplicialComplex};

struct Shape {
    vertices: Vec<usize>,
    // vertex -> neighbours in the 1-skeleton
    adjacency: BTreeMap<usize, BTreeSet<usize>>,
    // vertex -> (degree, facet count per facet dimension)
    signature: BTreeMap<usize, (usize, Vec<usize>)>,
}

fn shape(k: &SimplicialComplex) -> Shape {
    let vertices: Vec<usize> = k.vertices().into_iter().collect();
    let mut adjacency: BTreeMap<usize, BTreeSet<usize>> =
        vertices.iter().map(|&v| (v, BTreeSet::new())).collect();
    for e in k.faces(1) {
        let (a, b) = (e.vertices()[0], e.vertices()[1]);
        adjacency.get_mut(&a).unwrap().insert(b);
        adjacency.get_mut(&b).unwrap().insert(a);
    }
    let top = (k.dimension() + 1).max(0) as usize;
    let mut signature: BTreeMap<usize, (usize, Vec<usize>)> = vertices
        .iter()
        .map(|&v| (v, (adjacency[&v].len(), vec![0; top])))
        .collect();
    for f in k.facets() {
        for &v in f.vertices() {
            signature.get_mut(&v).unwrap().1[f.dimension()] += 1;
        }
    }
    Shape {
        vertices,
        adjacency,
        signature,
    }
}

/// Searches for a simplicial isomorphism `K → L` (types are ignored).
///
/// Returns the vertex map as pairs `(v, φ(v))`. Backtracking extends a
/// partial map along a breadth-first order of `K`'s 1-skeleton, keeping the
/// per-vertex signature and the adjacency to already mapped vertices intact;
/// complete candidates are accepted only if they carry the facets of `K`
/// exactly onto the facets of `L`.
pub fn find_isomorphism(k: &SimplicialComplex, l: &SimplicialComplex) -> Option<Vec<(usize, usize)>> {
    if k.facets().len() != l.facets().len() || k.dimension() != l.dimension() {
        return None;
    }
    let sk = shape(k);
    let sl = shape(l);
    if sk.vertices.len() != sl.vertices.len() {
        return None;
    }
    let mut sig_k: Vec<_> = sk.signature.values().cloned().collect();
    let mut sig_l: Vec<_> = sl.signature.values().cloned().collect();
    sig_k.sort();
    sig_l.sort();
    if sig_k != sig_l {
        return None;
    }

    // BFS order, restarting in each component
    let mut order = Vec::with_capacity(sk.vertices.len());
    let mut seen = HashSet::new();
    for &start in &sk.vertices {
        if !seen.insert(start) {
            continue;
        }
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &w in &sk.adjacency[&v] {
                if seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
    }

    let target_facets: HashSet<&Simplex> = l.facets().iter().collect();
    let mut map: BTreeMap<usize, usize> = BTreeMap::new();
    let mut used: HashSet<usize> = HashSet::new();
    if extend(&sk, &sl, &order, 0, &mut map, &mut used, k, &target_facets) {
        Some(map.into_iter().collect())
    } else {
        None
    }
}

#[allow(clippy::too_many_arguments)]
fn extend(
    sk: &Shape,
    sl: &Shape,
    order: &[usize],
    depth: usize,
    map: &mut BTreeMap<usize, usize>,
    used: &mut HashSet<usize>,
    k: &SimplicialComplex,
    target: &HashSet<&Simplex>,
) -> bool {
    if depth == order.len() {
        return k
            .facets()
            .iter()
            .all(|f| target.contains(&f.map_vertices(|v| map[&v])));
    }
    let v = order[depth];
    for &w in &sl.vertices {
        if used.contains(&w) || sk.signature[&v] != sl.signature[&w] {
            continue;
        }
        let consistent = map.iter().all(|(&a, &b)| {
            sk.adjacency[&v].contains(&a) == sl.adjacency[&w].contains(&b)
        });
        if !consistent {
            continue;
        }
        map.insert(v, w);
        used.insert(w);
        if extend(sk, sl, order, depth + 1, map, used, k, target) {
            return true;
        }
        map.remove(&v);
        used.remove(&w);
    }
    false
}

#[cfg(test)]
mod tests {
    use super::super::sphere_complex;
    use super::*;

    #[test]
    fn relabelled_hexagon() {
        let a = SimplicialComplex::from_facets((0..6).map(|i| vec![i, (i + 1) % 6])).unwrap();
        let perm = [3, 5, 0, 2, 4, 1];
        let b = SimplicialComplex::from_facets((0..6).map(|i| vec![perm[i], perm[(i + 1) % 6]]))
            .unwrap();
        let iso = find_isomorphism(&a, &b).unwrap();
        assert_eq!(iso.len(), 6);
    }

    #[test]
    fn distinguishes_non_isomorphic() {
        let hex = SimplicialComplex::from_facets((0..6).map(|i| vec![i, (i + 1) % 6])).unwrap();
        let two_triangles = SimplicialComplex::from_facets(
            (0..3)
                .map(|i| vec![i, (i + 1) % 3])
                .chain((0..3).map(|i| vec![3 + i, 3 + (i + 1) % 3])),
        )
        .unwrap();
        assert!(find_isomorphism(&hex, &two_triangles).is_none());
        // same 1-skeleton, different facets
        let hollow = SimplicialComplex::from_facets([vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        let full = SimplicialComplex::from_facets([vec![0, 1, 2]]).unwrap();
        assert!(find_isomorphism(&hollow, &full).is_none());
        let oct = sphere_complex(2).unwrap();
        assert!(find_isomorphism(&oct, &oct).is_some());
    }
}
