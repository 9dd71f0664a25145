//! The acceptance suite: twelve end-to-end checks with fixed sizes, seeds
//! and time budgets. Shared by the `acceptance` test target and the
//! `verify-all` CLI command.

use std::collections::BTreeSet;
use std::time::Instant;

use num_rational::Rational64;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::building::an_building;
use crate::catk::{
    cat_check, fat_sphere_witness, law_of_sines_residual, random_triangle, sample_point, Kappa, Quadruple,
};
use crate::check::Check;
use crate::json::quadruple_to_array;
use crate::lattice::SupportLattice;
use crate::rtree::{
    burillo_cover, is_segment_in_apartment, refines, sample_fiber, sample_points, stretch_distortion_witness,
    stretch_inverse, stretch_map, punctured_ball_check, verify_fiber_metric, EndDirection, RTree, Segment, TreePoint,
};
use crate::simplicial::{
    homology, join, local_homology, sphere_complex, support, suspend_cycle, Chain, SimplicialComplex,
};

pub const CRITERIA: usize = 12;

#[derive(Debug, Clone, Serialize)]
pub struct Criterion {
    pub id: usize,
    pub check: Check,
    pub elapsed_ms: u128,
    pub limit_ms: Option<u128>,
    pub artifact: Option<Value>,
}

struct Outcome {
    pass: bool,
    detail: String,
    artifact: Option<Value>,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self {
            pass,
            detail: detail.into(),
            artifact: None,
        }
    }

    fn with_artifact(mut self, v: Value) -> Self {
        self.artifact = Some(v);
        self
    }

    fn error(e: impl std::fmt::Display) -> Self {
        Self::new(false, format!("error: {e}"))
    }
}

const NAMES: [&str; CRITERIA] = [
    "fano homology",
    "solomon-tits basis",
    "support purity and suspension",
    "lattice reconstruction",
    "building axioms",
    "law of sines",
    "cat check",
    "tree fiber metric",
    "burillo cover",
    "punctured balls and directions",
    "tree apartments and stretch map",
    "local homology",
];

const LIMITS_MS: [Option<u128>; CRITERIA] = [
    Some(5_000),
    Some(60_000),
    None,
    Some(120_000),
    None,
    Some(10_000),
    Some(10_000),
    Some(30_000),
    Some(30_000),
    Some(5_000),
    Some(5_000),
    None,
];

pub fn name(id: usize) -> &'static str {
    NAMES[id - 1]
}

/// Runs criterion `id` (1-based) with sampling seeded by `seed`.
pub fn run(id: usize, seed: u64) -> Criterion {
    assert!((1..=CRITERIA).contains(&id), "criterion {id} out of range");
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(id as u64));
    let start = Instant::now();
    let outcome = match id {
        1 => fano_homology(),
        2 => solomon_tits(),
        3 => support_purity(&mut rng),
        4 => lattice_reconstruction(&mut rng),
        5 => building_axioms(),
        6 => law_of_sines(&mut rng),
        7 => cat_sanity(&mut rng),
        8 => fiber_metric(&mut rng),
        9 => burillo(&mut rng),
        10 => punctured_balls(&mut rng),
        11 => tree_apartments(&mut rng),
        _ => local(),
    };
    let elapsed = start.elapsed();
    let limit = LIMITS_MS[id - 1];
    let in_time = limit.is_none_or(|l| elapsed.as_millis() < l);
    let mut detail = outcome.detail;
    if !in_time {
        detail.push_str(&format!("; exceeded {} ms", limit.unwrap()));
    }
    Criterion {
        id,
        check: Check::new(name(id), outcome.pass && in_time, detail),
        elapsed_ms: elapsed.as_millis(),
        limit_ms: limit,
        artifact: outcome.artifact,
    }
}

pub fn run_all(seed: u64) -> Vec<Criterion> {
    (1..=CRITERIA).map(|id| run(id, seed)).collect()
}

fn fano_homology() -> Outcome {
    let b = match an_building(2, 2) {
        Ok(b) => b,
        Err(e) => return Outcome::error(e),
    };
    let h = match homology(b.complex(), 1, false) {
        Ok(h) => h,
        Err(e) => return Outcome::error(e),
    };
    let opposite: BTreeSet<usize> = b
        .chambers()
        .iter()
        .map(|c| b.opposite_chambers(c).map(|o| o.len()).unwrap_or(0))
        .collect();
    let chi = b.complex().euler_characteristic();
    let counts = (b.complex().face_count(0), b.complex().face_count(1));
    let pass = h.betti == 8 && h.torsion.is_empty() && opposite == BTreeSet::from([8]) && 1 - chi == 8 && counts == (14, 21);
    Outcome::new(
        pass,
        format!(
            "betti {} torsion {:?}; opposite chambers per chamber {:?}; 1 - chi = 1 - ({} - {}) = {}",
            h.betti,
            h.torsion,
            opposite,
            counts.0,
            counts.1,
            1 - chi
        ),
    )
}

fn solomon_tits() -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    for (q, expected) in [(2u32, 8usize), (3, 27)] {
        let result = an_building(2, q).and_then(|b| {
            let c0 = b.chambers()[0].clone();
            b.solomon_tits_basis(&c0)
        });
        match result {
            Ok(st) => {
                let ok = st.verified() && st.cycles.len() == expected;
                pass &= ok;
                parts.push(format!(
                    "q={q}: {} cycles, rank {}, betti {}, invariant factors all 1: {}",
                    st.cycles.len(),
                    st.rank,
                    st.betti,
                    st.invariant_factors_all_one
                ));
            }
            Err(e) => return Outcome::error(e),
        }
    }
    Outcome::new(pass, parts.join("; "))
}

fn random_combination<R: Rng>(basis: &[Chain], rng: &mut R) -> Chain {
    loop {
        let mut z = Chain::zero(basis[0].degree());
        for b in basis {
            let c: i64 = rng.random_range(-3..=3);
            for (s, &v) in b.terms() {
                z.add_term(s.clone(), c * v).expect("basis chains share a degree");
            }
        }
        if !z.is_zero() {
            return z;
        }
    }
}

fn fano_basis() -> Result<(crate::building::SphericalBuilding, Vec<Chain>), String> {
    let b = an_building(2, 2).map_err(|e| e.to_string())?;
    let c0 = b.chambers()[0].clone();
    let st = b.solomon_tits_basis(&c0).map_err(|e| e.to_string())?;
    Ok((b, st.cycles))
}

fn support_purity<R: Rng>(rng: &mut R) -> Outcome {
    let (b, basis) = match fano_basis() {
        Ok(x) => x,
        Err(e) => return Outcome::error(e),
    };
    let k = b.complex();
    let s0 = match sphere_complex(0) {
        Ok(s) => s,
        Err(e) => return Outcome::error(e),
    };
    let suspended_ground = join(k, &s0);
    let (mut pure, mut joined) = (0, 0);
    let trials = 100;
    for _ in 0..trials {
        let z = random_combination(&basis, rng);
        let Ok(sup) = support(&z, k) else { continue };
        if sup.is_pure() && sup.dimension() == 1 {
            pure += 1;
        }
        let Ok(zs) = suspend_cycle(&z, k, 0) else { continue };
        let Ok(sup_s) = support(&zs, &suspended_ground) else { continue };
        if sup_s.facets() == join(&sup, &s0).facets() {
            joined += 1;
        }
    }
    Outcome::new(
        pure == trials && joined == trials,
        format!("{pure}/{trials} supports pure of dimension 1; {joined}/{trials} suspended supports equal support * S0"),
    )
}

fn lattice_reconstruction<R: Rng>(rng: &mut R) -> Outcome {
    let (b, basis) = match fano_basis() {
        Ok(x) => x,
        Err(e) => return Outcome::error(e),
    };
    let lattice = match SupportLattice::for_building(&b) {
        Ok(l) => l,
        Err(e) => return Outcome::error(e),
    };
    let indecomposables = lattice.indecomposables().len();
    let rec = match lattice.reconstruct() {
        Ok(r) => r,
        Err(e) => return Outcome::error(e),
    };
    let supports_in_lattice = (0..100)
        .filter(|_| {
            let z = random_combination(&basis, rng);
            support(&z, b.complex()).is_ok_and(|s| lattice.contains(&s))
        })
        .count();

    let joined = match b.weak_join(0) {
        Ok(j) => j,
        Err(e) => return Outcome::error(e),
    };
    let jl = match SupportLattice::for_building(&joined) {
        Ok(l) => l,
        Err(e) => return Outcome::error(e),
    };
    let min = jl.minimal_element();
    let n = b.complex().vertex_count();
    let expected_min = SimplicialComplex::from_facets([vec![n], vec![n + 1]]).expect("two points");
    let min_ok = min.facets() == expected_min.facets();
    let jrec = match jl.reconstruct() {
        Ok(r) => r,
        Err(e) => return Outcome::error(e),
    };
    let pass = indecomposables == 35
        && rec.isomorphic_to_quotient
        && rec.join_isomorphic_to_ground
        && supports_in_lattice == 100
        && min_ok
        && jrec.isomorphic_to_quotient
        && jrec.join_isomorphic_to_ground;
    Outcome::new(
        pass,
        format!(
            "{indecomposables} indecomposables; reconstruction isomorphic to Fano: {}; \
             {supports_in_lattice}/100 random supports in the lattice; \
             Fano*S0 minimal element {:?} is the S0 factor: {min_ok}; \
             join reconstruction recovers Fano: {}, join recovers Fano*S0: {}",
            rec.isomorphic_to_quotient && rec.join_isomorphic_to_ground,
            min.facets().iter().map(|f| f.vertices().to_vec()).collect::<Vec<_>>(),
            jrec.isomorphic_to_quotient,
            jrec.join_isomorphic_to_ground
        ),
    )
}

fn building_axioms() -> Outcome {
    let b = match an_building(2, 2) {
        Ok(b) => b,
        Err(e) => return Outcome::error(e),
    };
    let report = b.verify_building_axioms();
    let detail = report
        .checks
        .iter()
        .map(|c| format!("{}: {} ({})", c.name, if c.pass { "pass" } else { "fail" }, c.detail))
        .collect::<Vec<_>>()
        .join("; ");
    let named = ["B1", "B2"].iter().all(|n| report.check(n).is_some_and(|c| c.pass));
    Outcome::new(report.passed() && named, detail)
}

const KAPPAS: [f64; 5] = [-2.0, -1.0, 0.0, 1.0, 2.0];

fn law_of_sines<R: Rng>(rng: &mut R) -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    for kv in KAPPAS {
        let kappa = Kappa::new(kv).expect("finite curvature");
        let (mut ratio, mut det) = (0.0f64, 0.0f64);
        for _ in 0..10_000 {
            let t = random_triangle(kappa, rng);
            match law_of_sines_residual(kappa, &t) {
                Ok(r) => {
                    ratio = ratio.max(r.ratio_residual);
                    det = det.max(r.determinant_residual.unwrap_or(0.0));
                }
                Err(e) => return Outcome::error(e),
            }
        }
        pass &= ratio < 1e-9 && det < 1e-9;
        if kv > 0.0 {
            parts.push(format!("kappa {kv}: ratio {ratio:.2e}, determinant {det:.2e}"));
        } else {
            parts.push(format!("kappa {kv}: ratio {ratio:.2e}"));
        }
    }
    Outcome::new(pass, format!("10^4 triangles per kappa; {}", parts.join("; ")))
}

fn cat_sanity<R: Rng>(rng: &mut R) -> Outcome {
    let mut passed = 0;
    let total = 10_000;
    for i in 0..total {
        let kappa = Kappa::new(KAPPAS[i % KAPPAS.len()]).expect("finite curvature");
        let radius = if kappa.value() > 0.0 { 1.0 / kappa.value().sqrt() } else { 2.0 };
        let [p, q, r] = [(); 3].map(|_| sample_point(kappa, radius, rng));
        let quad = Quadruple::from_model(kappa, &p, &q, &r, rng.random());
        if quad.and_then(|quad| cat_check(kappa, &quad)).is_ok_and(|c| c.pass) {
            passed += 1;
        }
    }
    let w = fat_sphere_witness();
    let flat = cat_check(Kappa::new(0.0).expect("zero"), &w);
    let witness_fails = flat.as_ref().is_ok_and(|c| !c.pass);
    let detail = match &flat {
        Ok(c) => format!(
            "{passed}/{total} model quadruples pass; spherical witness at kappa 0: d(p,m) = {:.6} > {:.6}",
            c.distance, c.comparison_distance
        ),
        Err(e) => format!("{passed}/{total} model quadruples pass; witness error {e}"),
    };
    Outcome::new(passed == total && witness_fails, detail).with_artifact(json!({
        "witness": quadruple_to_array(&w),
        "kappa": 0.0,
    }))
}

fn fiber_metric<R: Rng>(rng: &mut R) -> Outcome {
    let alpha = Rational64::new(-1, 3);
    let sample = sample_fiber(alpha, 1000, 10_000, 1000, rng);
    match verify_fiber_metric(RTree::T2, EndDirection::AxisPlus, &sample) {
        Ok(r) => Outcome::new(
            r.passed(),
            format!(
                "{} points, {} triples, ultrametric: {}, delta/d in [{}, {}]",
                r.points, r.triples, r.ultrametric, r.lipschitz_min, r.lipschitz_max
            ),
        ),
        Err(e) => Outcome::error(e),
    }
}

fn burillo<R: Rng>(rng: &mut R) -> Outcome {
    let sample = sample_points(1000, 5, 100, rng);
    let radii = [Rational64::new(1, 1), Rational64::new(1, 5), Rational64::new(1, 25)];
    let mut covers = Vec::new();
    for r in radii {
        match burillo_cover(RTree::T2, EndDirection::AxisPlus, r, &sample) {
            Ok(c) => covers.push(c),
            Err(e) => return Outcome::error(e),
        }
    }
    let mut parts = Vec::new();
    let mut pass = true;
    for (i, c) in covers.iter().take(2).enumerate() {
        let refined = refines(&covers[i + 1], c).is_none();
        pass &= c.passed() && refined;
        parts.push(format!(
            "r={}: {} sets, order {}, mesh {} <= {}, absorption, diameter, coverage and disjointness {}, r/5 cover refines: {refined}",
            c.r,
            c.elements.len(),
            c.order,
            c.mesh,
            c.mesh_bound,
            c.absorbing && c.diameter_bounded && c.covering && c.disjoint_or_equal
        ));
    }
    Outcome::new(pass, parts.join("; "))
}

fn punctured_balls<R: Rng>(rng: &mut R) -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    let cases = [((0, 0), 4usize), ((0, 2), 2)];
    for ((x, y), expected) in cases {
        for eps in [Rational64::new(1, 10), Rational64::new(1, 2)] {
            let o = TreePoint::from_ints(x, y);
            match punctured_ball_check(RTree::T2, &o, eps, 1000, rng) {
                Ok(c) => {
                    pass &= c.passed(1e-9) && c.components == expected;
                    parts.push(format!(
                        "{o} eps {}: {} components, {} directions, angle error {:.1e}",
                        eps.to_f64().unwrap_or(f64::NAN),
                        c.components,
                        c.directions.len(),
                        c.angle_error
                    ));
                }
                Err(e) => return Outcome::error(e),
            }
        }
    }
    Outcome::new(pass, parts.join("; "))
}

fn tree_apartments<R: Rng>(rng: &mut R) -> Outcome {
    let one = Rational64::new(1, 1);
    let decision = match is_segment_in_apartment(RTree::T1, Segment::Horizontal { u: -one, v: one }) {
        Ok(d) => d,
        Err(e) => return Outcome::error(e),
    };
    let mut worst = 0.0f64;
    let mut exact = true;
    for p in sample_points(10_000, 50, 1000, rng) {
        match stretch_inverse(&stretch_map(&p)) {
            Ok(back) => {
                exact &= back == p;
                let err = ((back.x - p.x).to_f64().unwrap_or(f64::NAN)).abs();
                worst = worst.max(err);
            }
            Err(e) => return Outcome::error(e),
        }
    }
    let (p, q, before, after) = stretch_distortion_witness();
    let pass = !decision.contained && !decision.justification.is_empty() && exact && worst <= 1e-12 && before != after;
    Outcome::new(
        pass,
        format!(
            "(-1,1)x0 in an apartment of T1: {} ({}); stretch round trip max error {worst:e} over 10^4 points; \
             witness {p} {q}: distance {before} maps to {after}",
            decision.contained, decision.justification
        ),
    )
    .with_artifact(json!({
        "segment": decision,
        "distortion": {"p": p, "q": q, "before": before.to_f64(), "after": after.to_f64()},
    }))
}

fn local() -> Outcome {
    let b = match an_building(2, 2) {
        Ok(b) => b,
        Err(e) => return Outcome::error(e),
    };
    let k = b.complex();
    let mut good = 0;
    let vertices = k.vertices();
    for &v in &vertices {
        let ok = (0..=2).all(|deg| match local_homology(k, v, deg) {
            Ok(h) if deg == 1 => h.betti == 2 && h.torsion.is_empty(),
            Ok(h) => h.is_trivial(),
            Err(_) => false,
        });
        if ok {
            good += 1;
        }
    }
    Outcome::new(
        good == vertices.len(),
        format!("{good}/{} vertices have local homology Z^2 in degree 1 and 0 in degrees 0, 2", vertices.len()),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_criteria() {
        for id in [1, 5, 11, 12] {
            let c = run(id, 42);
            assert!(c.check.pass, "{c:?}");
        }
    }
}
