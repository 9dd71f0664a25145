//! Finite spherical buildings: flag complexes of small projective spaces,
//! thin buildings (Coxeter complexes), and weak buildings `Δ ∗ Sⁿ`.
//!
//! A building carries an explicit apartment catalog. Each apartment gets a
//! chart, a type-preserving isomorphism onto the Coxeter complex of the
//! diagram, found by walking across panels from an anchor chamber.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use fixedbitset::FixedBitSet;
use serde::Serialize;
use thiserror::Error;

use crate::check::Check;
use crate::coxeter::{CoxeterComplexData, CoxeterDiagram, CoxeterError};
use crate::simplicial::{
    homology, join, smith_normal_form, sphere_complex, Chain, IntegerMatrix, Simplex,
    SimplicialComplex, SimplicialError,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildingError {
    #[error("unsupported building parameters n = {n}, q = {q}")]
    Unsupported { n: usize, q: u32 },
    #[error("{0} is not a face of the building")]
    NotAFace(Simplex),
    #[error("{0} is not a chamber")]
    NotAChamber(Simplex),
    #[error("chamber {0} does not have exactly one vertex of each type")]
    ChamberTypes(Simplex),
    #[error("type map has {found} entries for {expected} vertices")]
    TypeCount { found: usize, expected: usize },
    #[error("apartment {index} is invalid: {reason}")]
    InvalidApartment { index: usize, reason: String },
    #[error("axiom (B1) violated: no apartment contains {0} and {1}")]
    AxiomB1(Simplex, Simplex),
    #[error("chamber {chamber} is not in apartment {apartment}")]
    ChamberNotInApartment { chamber: Simplex, apartment: usize },
    #[error("intersection representation requires thickness")]
    NotThick,
    #[error("no set of apartments intersects exactly in {0}")]
    NoIntersection(Simplex),
    #[error(transparent)]
    Coxeter(#[from] CoxeterError),
    #[error(transparent)]
    Simplicial(#[from] SimplicialError),
}

/// An apartment with its chart onto the Coxeter complex.
#[derive(Debug, Clone)]
pub struct Apartment {
    id: usize,
    complex: SimplicialComplex,
    mask: FixedBitSet,
    // chamber -> group element index
    chart: BTreeMap<Simplex, usize>,
    // building vertex -> Coxeter complex vertex
    vertex_chart: BTreeMap<usize, usize>,
}

impl Apartment {
    pub fn id(&self) -> usize {
        self.id
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    /// Faces of the apartment as a mask over the building's face index.
    pub fn mask(&self) -> &FixedBitSet {
        &self.mask
    }

    pub fn chart(&self, chamber: &Simplex) -> Option<usize> {
        self.chart.get(chamber).copied()
    }

    pub fn chambers(&self) -> impl Iterator<Item = &Simplex> {
        self.chart.keys()
    }

    pub fn contains_face(&self, s: &Simplex) -> bool {
        self.complex.contains_face(s)
    }

    pub fn vertex_chart(&self) -> &BTreeMap<usize, usize> {
        &self.vertex_chart
    }
}

#[derive(Debug, Clone)]
pub struct SphericalBuilding {
    complex: SimplicialComplex,
    diagram: CoxeterDiagram,
    coxeter: CoxeterComplexData,
    type_of: Vec<usize>,
    apartments: Vec<Apartment>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AxiomReport {
    pub checks: Vec<Check>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PanelCount {
    pub panel: Vec<usize>,
    pub chambers: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ThicknessReport {
    pub thick: bool,
    /// Every panel lies in at least three chambers.
    pub chamber_condition: bool,
    /// Every non-maximal face, the empty face included, lies in at least
    /// three apartments.
    pub apartment_condition: bool,
    pub min_chambers_per_panel: usize,
    pub min_apartments_per_face: usize,
    pub panels: Vec<PanelCount>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolomonTits {
    pub anchor: Simplex,
    pub opposite: Vec<Simplex>,
    pub cycles: Vec<Chain>,
    pub rank: usize,
    pub betti: usize,
    pub invariant_factors_all_one: bool,
}

impl SolomonTits {
    pub fn verified(&self) -> bool {
        self.invariant_factors_all_one && self.rank == self.betti && self.cycles.len() == self.betti
    }
}

// vectors of F_q^d encoded in base q
struct FieldSpace {
    q: u32,
    dim: u32,
}

impl FieldSpace {
    fn size(&self) -> u32 {
        self.q.pow(self.dim)
    }

    fn combine(&self, a: u32, b: u32, c: u32) -> u32 {
        // a + c·b, digitwise mod q
        let (mut a, mut b, mut out, mut place) = (a, b, 0, 1);
        for _ in 0..self.dim {
            let digit = (a % self.q + c * (b % self.q)) % self.q;
            out += digit * place;
            place *= self.q;
            a /= self.q;
            b /= self.q;
        }
        out
    }

    /// Span as a bitmask over the encoded vectors.
    fn span(&self, gens: &[u32]) -> u32 {
        let mut set = vec![0u32];
        for &g in gens {
            let mut next = BTreeSet::new();
            for &x in &set {
                for c in 0..self.q {
                    next.insert(self.combine(x, g, c));
                }
            }
            set = next.into_iter().collect();
        }
        set.iter().fold(0, |m, &v| m | (1 << v))
    }
}

fn representative(mask: u32) -> u32 {
    // least nonzero vector in the subspace
    (mask & !1).trailing_zeros()
}

/// Flag complex of `PG(n, q)`, the building of type `A_n` over `F_q`.
pub fn an_building(n: usize, q: u32) -> Result<SphericalBuilding, BuildingError> {
    if !(n == 1 || n == 2) || !(q == 2 || q == 3) {
        return Err(BuildingError::Unsupported { n, q });
    }
    let space = FieldSpace {
        q,
        dim: n as u32 + 1,
    };
    let full = space.span(&(0..space.dim).map(|i| q.pow(i)).collect::<Vec<_>>());
    let points: BTreeSet<u32> = (1..space.size()).map(|v| space.span(&[v])).collect();
    let points: Vec<u32> = points.into_iter().collect();
    let lines: Vec<u32> = if n == 2 {
        let mut set = BTreeSet::new();
        for (i, &a) in points.iter().enumerate() {
            for &b in &points[i + 1..] {
                set.insert(space.span(&[representative(a), representative(b)]));
            }
        }
        set.into_iter().collect()
    } else {
        Vec::new()
    };
    let point_id: HashMap<u32, usize> = points.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let line_id: HashMap<u32, usize> = lines
        .iter()
        .enumerate()
        .map(|(i, &m)| (m, points.len() + i))
        .collect();
    let vertex_count = points.len() + lines.len();
    let type_of: Vec<usize> = (0..vertex_count).map(|v| usize::from(v >= points.len())).collect();

    let chambers: Vec<Simplex> = if n == 1 {
        (0..points.len()).map(|p| Simplex::new(vec![p]).unwrap()).collect()
    } else {
        let mut out = Vec::new();
        for (&pm, &p) in &point_id {
            for (&lm, &l) in &line_id {
                if pm & lm == pm {
                    out.push(Simplex::new(vec![p, l]).unwrap());
                }
            }
        }
        out
    };
    let complex = SimplicialComplex::with_vertex_count(vertex_count, chambers)?;

    let mut apartments = Vec::new();
    let reps: Vec<u32> = points.iter().map(|&m| representative(m)).collect();
    if n == 1 {
        for a in 0..points.len() {
            for b in a + 1..points.len() {
                apartments.push(SimplicialComplex::with_vertex_count(
                    vertex_count,
                    [Simplex::new(vec![a]).unwrap(), Simplex::new(vec![b]).unwrap()],
                )?);
            }
        }
    } else {
        let k = points.len();
        for a in 0..k {
            for b in a + 1..k {
                for c in b + 1..k {
                    if space.span(&[reps[a], reps[b], reps[c]]) != full {
                        continue;
                    }
                    let frame = [a, b, c];
                    let mut facets = Vec::new();
                    for &i in &frame {
                        for &j in &frame {
                            if i != j {
                                let l = line_id[&space.span(&[reps[i], reps[j]])];
                                facets.push(Simplex::new(vec![i, l]).unwrap());
                            }
                        }
                    }
                    apartments.push(SimplicialComplex::with_vertex_count(vertex_count, facets)?);
                }
            }
        }
    }
    SphericalBuilding::from_parts(complex, CoxeterDiagram::a(n)?, type_of, apartments)
}

impl SphericalBuilding {
    /// Assembles a building from its complex, types and apartment catalog,
    /// computing a chart for every apartment.
    pub fn from_parts(
        complex: SimplicialComplex,
        diagram: CoxeterDiagram,
        type_of: Vec<usize>,
        apartments: Vec<SimplicialComplex>,
    ) -> Result<Self, BuildingError> {
        if type_of.len() != complex.vertex_count() {
            return Err(BuildingError::TypeCount {
                found: type_of.len(),
                expected: complex.vertex_count(),
            });
        }
        let rank = diagram.rank();
        for c in complex.facets() {
            let types: BTreeSet<usize> = c.vertices().iter().map(|&v| type_of[v]).collect();
            if c.len() != rank || types.len() != rank || types.iter().any(|&t| t >= rank) {
                return Err(BuildingError::ChamberTypes(c.clone()));
            }
        }
        let coxeter = CoxeterComplexData::new(&diagram)?;
        let mut b = Self {
            complex,
            diagram,
            coxeter,
            type_of,
            apartments: Vec::new(),
        };
        let charted = apartments
            .into_iter()
            .enumerate()
            .map(|(i, a)| b.chart_apartment(i, a))
            .collect::<Result<Vec<_>, _>>()?;
        b.apartments = charted;
        Ok(b)
    }

    /// The Coxeter complex as a thin building with itself as sole apartment.
    pub fn thin(diagram: &CoxeterDiagram) -> Result<Self, BuildingError> {
        let cc = CoxeterComplexData::new(diagram)?;
        let complex = cc.complex.clone();
        Self::from_parts(complex.clone(), diagram.clone(), cc.type_of.clone(), vec![complex])
    }

    fn chart_apartment(&self, index: usize, a: SimplicialComplex) -> Result<Apartment, BuildingError> {
        let invalid = |reason: String| BuildingError::InvalidApartment { index, reason };
        if !a.is_subcomplex_of(&self.complex) {
            return Err(invalid("not a subcomplex".into()));
        }
        let group = &self.coxeter.group;
        let chambers: Vec<Simplex> = a.facets().to_vec();
        if chambers.len() != group.order() {
            return Err(invalid(format!(
                "{} chambers, Coxeter complex has {}",
                chambers.len(),
                group.order()
            )));
        }
        let mut by_panel: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
        for (ci, c) in chambers.iter().enumerate() {
            if c.len() != self.rank() {
                return Err(invalid(format!("{c} is not a chamber")));
            }
            for &v in c.vertices() {
                let panel: Vec<usize> = c.vertices().iter().copied().filter(|&w| w != v).collect();
                by_panel.entry(panel).or_default().push(ci);
            }
        }
        if let Some((p, cs)) = by_panel.iter().find(|(_, cs)| cs.len() != 2) {
            return Err(invalid(format!("panel {p:?} lies in {} chambers", cs.len())));
        }

        let mut chart = vec![usize::MAX; chambers.len()];
        chart[0] = group.identity();
        let mut queue = VecDeque::from([0usize]);
        while let Some(ci) = queue.pop_front() {
            let c = &chambers[ci];
            for &v in c.vertices() {
                let t = self.type_of[v];
                let panel: Vec<usize> = c.vertices().iter().copied().filter(|&w| w != v).collect();
                let other = by_panel[&panel].iter().copied().find(|&x| x != ci).unwrap();
                let w = group.right_mul_generator(chart[ci], t);
                if chart[other] == usize::MAX {
                    chart[other] = w;
                    queue.push_back(other);
                } else if chart[other] != w {
                    return Err(invalid("inconsistent gallery labels".into()));
                }
            }
        }
        if chart.contains(&usize::MAX) {
            return Err(invalid("not gallery connected".into()));
        }
        if chart.iter().collect::<BTreeSet<_>>().len() != chart.len() {
            return Err(invalid("chart is not injective on chambers".into()));
        }
        let mut vertex_chart = BTreeMap::new();
        for (ci, c) in chambers.iter().enumerate() {
            for &v in c.vertices() {
                let cv = self.coxeter.vertex_of[self.type_of[v]][chart[ci]];
                if *vertex_chart.entry(v).or_insert(cv) != cv {
                    return Err(invalid(format!("vertex {v} has no consistent image")));
                }
            }
        }
        if vertex_chart.values().collect::<BTreeSet<_>>().len() != vertex_chart.len() {
            return Err(invalid("chart is not injective on vertices".into()));
        }
        let mask = self.complex.face_mask(&a)?;
        Ok(Apartment {
            id: index,
            complex: a,
            mask,
            chart: chambers.into_iter().zip(chart).collect(),
            vertex_chart,
        })
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn diagram(&self) -> &CoxeterDiagram {
        &self.diagram
    }

    pub fn coxeter(&self) -> &CoxeterComplexData {
        &self.coxeter
    }

    pub fn rank(&self) -> usize {
        self.diagram.rank()
    }

    /// Dimension of the chambers, `rank − 1`.
    pub fn dimension(&self) -> usize {
        self.rank() - 1
    }

    pub fn type_of(&self) -> &[usize] {
        &self.type_of
    }

    pub fn apartments(&self) -> &[Apartment] {
        &self.apartments
    }

    pub fn chambers(&self) -> &[Simplex] {
        self.complex.faces(self.dimension())
    }

    /// Copy of the building with the listed apartments removed from the
    /// catalog.
    pub fn without_apartments(&self, ids: &[usize]) -> Result<Self, BuildingError> {
        let kept = self
            .apartments
            .iter()
            .filter(|a| !ids.contains(&a.id))
            .map(|a| a.complex.clone())
            .collect();
        Self::from_parts(self.complex.clone(), self.diagram.clone(), self.type_of.clone(), kept)
    }

    fn check_face(&self, s: &Simplex) -> Result<(), BuildingError> {
        if self.complex.contains_face(s) {
            Ok(())
        } else {
            Err(BuildingError::NotAFace(s.clone()))
        }
    }

    fn check_chamber(&self, s: &Simplex) -> Result<(), BuildingError> {
        self.check_face(s)?;
        if s.dimension() == self.dimension() {
            Ok(())
        } else {
            Err(BuildingError::NotAChamber(s.clone()))
        }
    }

    /// The first apartment in catalog order containing both faces.
    pub fn apartment_containing(&self, c: &Simplex, d: &Simplex) -> Result<&Apartment, BuildingError> {
        self.check_face(c)?;
        self.check_face(d)?;
        self.apartments
            .iter()
            .find(|a| a.contains_face(c) && a.contains_face(d))
            .ok_or_else(|| BuildingError::AxiomB1(c.clone(), d.clone()))
    }

    /// Weyl distance `δ(C, D) = chart(C)⁻¹ chart(D)` read off in the first
    /// apartment containing both chambers.
    pub fn weyl_distance(&self, c: &Simplex, d: &Simplex) -> Result<usize, BuildingError> {
        self.check_chamber(c)?;
        self.check_chamber(d)?;
        let a = self.apartment_containing(c, d)?;
        Ok(self.distance_in(a, c, d))
    }

    fn distance_in(&self, a: &Apartment, c: &Simplex, d: &Simplex) -> usize {
        let g = &self.coxeter.group;
        g.mul(g.inverse(a.chart[c]), a.chart[d])
    }

    /// Chambers `D` opposite `C0` in some apartment containing both.
    pub fn opposite_chambers(&self, c0: &Simplex) -> Result<Vec<Simplex>, BuildingError> {
        self.check_chamber(c0)?;
        let w0 = self.coxeter.group.longest_element();
        let mut out = BTreeSet::new();
        for a in self.apartments.iter().filter(|a| a.chart.contains_key(c0)) {
            for d in a.chart.keys() {
                if self.distance_in(a, c0, d) == w0 {
                    out.insert(d.clone());
                }
            }
        }
        Ok(out.into_iter().collect())
    }

    /// Vertices of a chamber listed by increasing type.
    fn type_ordered(&self, c: &Simplex) -> Vec<usize> {
        let mut v = c.vertices().to_vec();
        v.sort_by_key(|&x| self.type_of[x]);
        v
    }

    /// Fundamental class of an apartment: the chamber with chart distance
    /// `w` from `C0`, oriented by type order, gets sign `(−1)^{ℓ(w)}`; the
    /// whole class is normalized to coefficient `+1` on `C0`.
    pub fn fundamental_class(&self, apt: &Apartment, c0: &Simplex) -> Result<Chain, BuildingError> {
        if !apt.chart.contains_key(c0) {
            return Err(BuildingError::ChamberNotInApartment {
                chamber: c0.clone(),
                apartment: apt.id,
            });
        }
        let g = &self.coxeter.group;
        let mut z = Chain::zero(self.dimension());
        for c in apt.chart.keys() {
            let parity = if g.length(self.distance_in(apt, c0, c)).is_multiple_of(2) { 1 } else { -1 };
            z.add_oriented(&self.type_ordered(c), parity)?;
        }
        let anchor = z.coefficient(c0);
        Ok(&z * anchor)
    }

    /// One fundamental class per chamber opposite `C0`, with the check that
    /// their coefficient matrix has all invariant factors 1 and rank equal to
    /// the top betti number.
    pub fn solomon_tits_basis(&self, c0: &Simplex) -> Result<SolomonTits, BuildingError> {
        let opposite = self.opposite_chambers(c0)?;
        let mut cycles = Vec::with_capacity(opposite.len());
        for d in &opposite {
            let a = self.apartment_containing(c0, d)?;
            cycles.push(self.fundamental_class(a, c0)?);
        }
        let chambers = self.chambers();
        let mut m = IntegerMatrix::zeros(cycles.len(), chambers.len());
        for (i, z) in cycles.iter().enumerate() {
            for (s, &coef) in z.terms() {
                let j = self.complex.position(s).expect("chamber of the building");
                m.set(i, j, coef);
            }
        }
        let snf = smith_normal_form(&m);
        let betti = homology(&self.complex, self.dimension() as i64, false)?.betti;
        Ok(SolomonTits {
            anchor: c0.clone(),
            opposite,
            cycles,
            rank: snf.rank,
            betti,
            invariant_factors_all_one: snf.all_units(),
        })
    }

    /// Checks chamber typing, apartment charts, (B1) on all pairs of
    /// chambers and (B2) on all pairs of apartments.
    ///
    /// (B1) for chambers implies it for arbitrary faces. For (B2) the
    /// type-preserving isomorphisms `A → A'` are exactly
    /// `ψ_{A'}⁻¹ ∘ L_g ∘ ψ_A` for `g ∈ W`; it suffices to fix pairs of
    /// facets of `A ∩ A'`.
    pub fn verify_building_axioms(&self) -> AxiomReport {
        let mut checks = Vec::new();
        let typed = self.chambers().iter().all(|c| {
            let t: BTreeSet<usize> = c.vertices().iter().map(|&v| self.type_of[v]).collect();
            t.len() == self.rank()
        });
        checks.push(Check::new(
            "chambers typed",
            typed,
            format!("{} chambers, rank {}", self.chambers().len(), self.rank()),
        ));
        checks.push(Check::new(
            "apartments charted",
            !self.apartments.is_empty(),
            format!("{} apartments with type-preserving charts", self.apartments.len()),
        ));

        let chambers = self.chambers();
        let chamber_masks: Vec<usize> = chambers
            .iter()
            .map(|c| self.complex.global_position(c).unwrap())
            .collect();
        let mut b1_failure = None;
        let mut b1_pairs = 0usize;
        'outer: for (i, &ci) in chamber_masks.iter().enumerate() {
            for (j, &cj) in chamber_masks.iter().enumerate().skip(i) {
                b1_pairs += 1;
                if !self.apartments.iter().any(|a| a.mask[ci] && a.mask[cj]) {
                    b1_failure = Some((chambers[i].clone(), chambers[j].clone()));
                    break 'outer;
                }
            }
        }
        checks.push(match b1_failure {
            None => Check::new("B1", true, format!("{b1_pairs} chamber pairs each lie in an apartment")),
            Some((c, d)) => Check::new("B1", false, format!("no apartment contains {c} and {d}")),
        });

        let (b2_pass, detail) = self.check_b2();
        checks.push(Check::new("B2", b2_pass, detail));
        AxiomReport { checks }
    }

    fn check_b2(&self) -> (bool, String) {
        let g = &self.coxeter.group;
        let cv_count = self.coxeter.type_of.len();
        // act[h][x] = h·x on Coxeter complex vertices
        let act: Vec<Vec<usize>> = (0..g.order())
            .map(|h| (0..cv_count).map(|x| self.coxeter.act_on_vertex(h, x)).collect())
            .collect();
        let mut pairs = 0usize;
        for a in &self.apartments {
            for b in &self.apartments {
                let inverse_b: BTreeMap<usize, usize> =
                    b.vertex_chart.iter().map(|(&v, &x)| (x, v)).collect();
                let common = a.complex.intersection(&b.complex);
                if common.is_empty() {
                    continue;
                }
                // vertices fixed by each candidate isomorphism
                let fixed: Vec<BTreeSet<usize>> = (0..g.order())
                    .map(|h| {
                        common
                            .vertices()
                            .into_iter()
                            .filter(|&v| inverse_b[&act[h][a.vertex_chart[&v]]] == v)
                            .collect()
                    })
                    .collect();
                for c in common.facets() {
                    for d in common.facets() {
                        pairs += 1;
                        let need: BTreeSet<usize> =
                            c.vertices().iter().chain(d.vertices()).copied().collect();
                        if !fixed.iter().any(|f| need.is_subset(f)) {
                            return (
                                false,
                                format!(
                                    "no isomorphism from apartment {} to {} fixes {c} and {d}",
                                    a.id, b.id
                                ),
                            );
                        }
                    }
                }
            }
        }
        (true, format!("{pairs} (apartment pair, face pair) cases admit a fixing isomorphism"))
    }

    /// Chamber counts on panels and apartment counts on non-maximal faces.
    pub fn is_thick(&self) -> ThicknessReport {
        let dim = self.dimension();
        let mut panel_counts: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for c in self.chambers() {
            for &v in c.vertices() {
                let panel = c.vertices().iter().copied().filter(|&w| w != v).collect();
                *panel_counts.entry(panel).or_insert(0) += 1;
            }
        }
        let panels: Vec<PanelCount> = panel_counts
            .into_iter()
            .map(|(panel, chambers)| PanelCount { panel, chambers })
            .collect();
        let min_chambers = panels.iter().map(|p| p.chambers).min().unwrap_or(0);

        let mut min_apartments = self.apartments.len();
        for k in 0..dim {
            for s in self.complex.faces(k) {
                let i = self.complex.global_position(s).unwrap();
                let n = self.apartments.iter().filter(|a| a.mask[i]).count();
                min_apartments = min_apartments.min(n);
            }
        }
        let chamber_condition = min_chambers >= 3;
        let apartment_condition = min_apartments >= 3;
        ThicknessReport {
            thick: chamber_condition && apartment_condition,
            chamber_condition,
            apartment_condition,
            min_chambers_per_panel: min_chambers,
            min_apartments_per_face: min_apartments,
            panels,
        }
    }

    /// `Δ ∗ Sⁿ` with apartments `A ∗ Sⁿ` and diagram extended by `n+1`
    /// factors `A₁`; `n = −1` returns the building unchanged.
    pub fn weak_join(&self, n: i64) -> Result<Self, BuildingError> {
        if n == -1 {
            return Ok(self.clone());
        }
        let sphere = sphere_complex(n)?;
        let pairs = (n + 1) as usize;
        let complex = join(&self.complex, &sphere);
        let mut diagram = self.diagram.clone();
        for _ in 0..pairs {
            diagram = diagram.product(&CoxeterDiagram::a(1)?);
        }
        let mut type_of = self.type_of.clone();
        for i in 0..2 * pairs {
            type_of.push(self.rank() + i / 2);
        }
        let apartments = self.apartments.iter().map(|a| join(&a.complex, &sphere)).collect();
        Self::from_parts(complex, diagram, type_of, apartments)
    }

    /// A smallest set of apartments whose intersection is exactly the closed
    /// simplex `ā`; among sets of equal size the lexicographically first.
    pub fn simplex_as_apartment_intersection(&self, a: &Simplex) -> Result<Vec<&Apartment>, BuildingError> {
        self.check_face(a)?;
        if !self.is_thick().thick {
            return Err(BuildingError::NotThick);
        }
        let target = self.complex.face_mask(&self.complex.closure_of([a.clone()]))?;
        let i = self.complex.global_position(a).unwrap();
        let candidates: Vec<&Apartment> = self.apartments.iter().filter(|x| x.mask[i]).collect();
        for size in 1..=candidates.len() {
            let mut idx: Vec<usize> = (0..size).collect();
            loop {
                let mut m = candidates[idx[0]].mask.clone();
                for &j in &idx[1..] {
                    m.intersect_with(&candidates[j].mask);
                }
                if m == target {
                    return Ok(idx.iter().map(|&j| candidates[j]).collect());
                }
                if !next_combination(&mut idx, candidates.len()) {
                    break;
                }
            }
        }
        Err(BuildingError::NoIntersection(a.clone()))
    }
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
