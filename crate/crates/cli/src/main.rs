use std::collections::BTreeMap;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use cathom::acceptance;
use cathom::building::an_building;
use cathom::catk::{
    blowup_metric, cat_check_with, comparison_triangle, fat_sphere_witness, law_of_sines_residual, random_triangle,
    sample_point, Quadruple,
};
use cathom::check::{all_pass, Check};
use cathom::json::{parse_quadruples, quadruple_to_array, BuildingJson};
use cathom::lattice::SupportLattice;
use cathom::rtree::{
    burillo_cover, fiber_ultrametric, is_segment_in_apartment, refines, retraction, sample_fiber, sample_points,
    stretch_inverse, stretch_map, punctured_ball_check, verify_fiber_metric, EndDirection, RTree, Segment, TreePoint,
};
use cathom::simplicial::{
    homology, join, link, local_homology, reduced_homology, sphere_complex, support, suspend_cycle, Chain,
    SimplicialComplex,
};
use cathom::{Kappa, SphericalBuilding};
use clap::{Parser, Subcommand, ValueEnum};
use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "cathom", version, about = "Spherical buildings, support lattices, comparison geometry and R-tree checks")]
struct Cli {
    /// Seed for all sampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Tolerance for floating-point comparisons.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tolerance: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Simplicial complexes and chains.
    #[command(subcommand)]
    Complex(ComplexCmd),
    /// Spherical buildings.
    #[command(subcommand)]
    Building(BuildingCmd),
    /// Support lattices of top cycles.
    #[command(subcommand)]
    Lattice(LatticeCmd),
    /// Model spaces and comparison geometry.
    #[command(subcommand)]
    Catk(CatkCmd),
    /// The R-trees T1 and T2.
    #[command(subcommand)]
    Rtree(RtreeCmd),
    /// Runs the acceptance suite.
    VerifyAll {
        /// Run a single criterion (1-12).
        #[arg(long)]
        only: Option<usize>,
    },
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum ComplexCmd {
    /// Boundary of the (n+1)-simplex.
    Sphere {
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
    },
    Join {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
    },
    Link {
        #[arg(long)]
        vertex: usize,
        #[arg(long)]
        input: Option<PathBuf>,
    },
    Homology {
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        #[arg(long)]
        reduced: bool,
        #[arg(long)]
        input: Option<PathBuf>,
    },
    LocalHomology {
        #[arg(long)]
        vertex: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Support of a top cycle.
    Support {
        #[arg(long)]
        chain: PathBuf,
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Lifts a top cycle to the join with the n-sphere.
    Suspend {
        #[arg(long)]
        chain: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        input: Option<PathBuf>,
    },
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum BuildingCmd {
    /// Flag complex of F_q^(n+1).
    An {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u32,
    },
    Homology {
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        #[arg(long)]
        input: Option<PathBuf>,
    },
    Axioms {
        #[arg(long)]
        input: Option<PathBuf>,
    },
    Thick {
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Apartment classes anchored at a chamber (by index).
    SolomonTits {
        #[arg(long, default_value_t = 0)]
        chamber: usize,
        #[arg(long)]
        input: Option<PathBuf>,
    },
    Opposite {
        #[arg(long, default_value_t = 0)]
        chamber: usize,
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Join with the n-sphere.
    WeakJoin {
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Apartments whose intersection is the closed simplex.
    Intersection {
        #[arg(long, num_args = 1..)]
        simplex: Vec<usize>,
        #[arg(long)]
        input: Option<PathBuf>,
    },
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum LatticeCmd {
    /// Lattice generated by the apartments of a building.
    Generate {
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long)]
        input: Option<PathBuf>,
    },
    Reconstruct {
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Supports of random integer combinations of apartment classes.
    Supports {
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long)]
        input: Option<PathBuf>,
    },
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum CatkCmd {
    /// Law of Sines residuals for one triangle.
    Sines {
        #[arg(long, allow_hyphen_values = true)]
        kappa: f64,
        #[arg(long, num_args = 3)]
        sides: Vec<f64>,
    },
    Triangle {
        #[arg(long, allow_hyphen_values = true)]
        kappa: f64,
        #[arg(long, num_args = 3)]
        sides: Vec<f64>,
    },
    /// Comparison check for quadruples [pq, pr, qr, qm, mr, pm].
    Check {
        #[arg(long, allow_hyphen_values = true)]
        kappa: f64,
        #[arg(long)]
        quad: PathBuf,
    },
    /// Random triangles and model quadruples.
    Sample {
        #[arg(long, allow_hyphen_values = true)]
        kappa: f64,
        #[arg(long, default_value_t = 10_000)]
        count: usize,
    },
    /// A spherical quadruple failing the flat comparison.
    Witness,
    Blowup {
        #[arg(long)]
        d: f64,
        #[arg(long)]
        theta: f64,
    },
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
enum TreeArg {
    T1,
    T2,
}

impl From<TreeArg> for RTree {
    fn from(t: TreeArg) -> Self {
        match t {
            TreeArg::T1 => RTree::T1,
            TreeArg::T2 => RTree::T2,
        }
    }
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum RtreeCmd {
    Dist {
        #[arg(long, value_enum, default_value_t = TreeArg::T2)]
        tree: TreeArg,
        #[arg(long, num_args = 2, allow_hyphen_values = true)]
        p: Vec<String>,
        #[arg(long, num_args = 2, allow_hyphen_values = true)]
        q: Vec<String>,
    },
    Geodesic {
        #[arg(long, value_enum, default_value_t = TreeArg::T2)]
        tree: TreeArg,
        #[arg(long, num_args = 2, allow_hyphen_values = true)]
        p: Vec<String>,
        #[arg(long, num_args = 2, allow_hyphen_values = true)]
        q: Vec<String>,
        #[arg(long)]
        t: String,
    },
    /// Retraction of T2 from the +infinity end of the axis.
    Retract {
        #[arg(long, num_args = 2, allow_hyphen_values = true)]
        p: Vec<String>,
    },
    /// Fiber ultrametric of two points of one fiber.
    Fiber {
        #[arg(long, num_args = 2, allow_hyphen_values = true)]
        b: Vec<String>,
        #[arg(long, num_args = 2, allow_hyphen_values = true)]
        c: Vec<String>,
    },
    /// Ultrametric and bi-Lipschitz checks on a sampled fiber.
    FiberSample {
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long, default_value = "-1/3", allow_hyphen_values = true)]
        alpha: String,
    },
    /// Dimension cover of T2 at scale r, with the r/5 refinement.
    Burillo {
        #[arg(long)]
        r: String,
        #[arg(long, default_value_t = 1000)]
        count: usize,
    },
    /// Punctured-ball components against directions.
    PuncturedBall {
        #[arg(long, value_enum, default_value_t = TreeArg::T2)]
        tree: TreeArg,
        #[arg(long, num_args = 2, allow_hyphen_values = true, default_values = ["0", "0"])]
        point: Vec<String>,
        #[arg(long)]
        eps: String,
        #[arg(long, default_value_t = 1000)]
        count: usize,
    },
    /// Whether a segment lies in an apartment.
    Segment {
        #[arg(long, value_enum, default_value_t = TreeArg::T1)]
        tree: TreeArg,
        /// (u, v)×0
        #[arg(long, num_args = 2, allow_hyphen_values = true, conflicts_with = "vertical")]
        horizontal: Option<Vec<String>>,
        /// {x0}×(lo, hi)
        #[arg(long, num_args = 3, allow_hyphen_values = true)]
        vertical: Option<Vec<String>>,
    },
    /// Stretch map T2 -> T1 and its inverse.
    Stretch {
        #[arg(long, num_args = 2, allow_hyphen_values = true)]
        p: Vec<String>,
    },
}

#[derive(Serialize)]
struct Report {
    command: String,
    inputs: Value,
    checks: Vec<Check>,
    artifacts: BTreeMap<String, Value>,
}

#[derive(Default)]
struct Body {
    checks: Vec<Check>,
    artifacts: BTreeMap<String, Value>,
}

impl Body {
    fn check(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.checks.push(Check::new(name, pass, detail));
    }

    fn artifact(&mut self, key: &str, v: impl Serialize) -> Result<()> {
        self.artifacts.insert(key.to_string(), serde_json::to_value(v)?);
        Ok(())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command = command_name(&cli.command);
    let inputs = json!({
        "seed": cli.seed,
        "tolerance": cli.tolerance,
        "format": cli.format,
        "args": serde_json::to_value(&cli.command).unwrap_or(Value::Null),
    });
    let body = run(&cli).unwrap_or_else(|e| {
        let mut b = Body::default();
        b.check("error", false, format!("{e:#}"));
        b
    });
    let mut checks = body.checks;
    checks.sort_by(|a, b| a.name.cmp(&b.name));
    let pass = all_pass(&checks);
    let report = Report {
        command,
        inputs,
        checks,
        artifacts: body.artifacts,
    };
    let text = match serde_json::to_string_pretty(&report) {
        Ok(t) => t + "\n",
        Err(e) => {
            eprintln!("cannot serialize report: {e}");
            return ExitCode::from(1);
        }
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("cannot write {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{text}"),
    }
    if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn command_name(c: &Command) -> String {
    let v = serde_json::to_value(c).unwrap_or(Value::Null);
    let mut parts = Vec::new();
    let mut cur = &v;
    loop {
        match cur {
            Value::Object(m) if m.len() == 1 => {
                let (k, inner) = m.iter().next().expect("one entry");
                parts.push(k.clone());
                cur = inner;
            }
            Value::String(s) => {
                parts.push(s.clone());
                break;
            }
            _ => break,
        }
    }
    parts.join(" ")
}

fn run(cli: &Cli) -> Result<Body> {
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    match &cli.command {
        Command::Complex(c) => complex_cmd(c),
        Command::Building(c) => building_cmd(c),
        Command::Lattice(c) => lattice_cmd(c, &mut rng),
        Command::Catk(c) => catk_cmd(c, cli.tolerance, &mut rng),
        Command::Rtree(c) => rtree_cmd(c, cli.tolerance, &mut rng),
        Command::VerifyAll { only } => verify_all(*only, cli.seed),
    }
}

fn read_text(path: &Option<PathBuf>) -> Result<String> {
    match path {
        Some(p) if p.as_os_str() != "-" => {
            std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))
        }
        _ => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).context("reading standard input")?;
            Ok(s)
        }
    }
}

/// Parses a payload given directly or as an artifact of an earlier report.
fn payload(text: &str, keys: &[&str]) -> Result<Value> {
    let v: Value = serde_json::from_str(text).context("malformed JSON input")?;
    if let Some(artifacts) = v.get("artifacts") {
        for k in keys {
            if let Some(a) = artifacts.get(*k) {
                return Ok(a.clone());
            }
        }
        bail!("report has none of the artifacts {keys:?}");
    }
    Ok(v)
}

fn read_complex(path: &Option<PathBuf>) -> Result<SimplicialComplex> {
    let v = payload(&read_text(path)?, &["complex", "building"])?;
    serde_json::from_value(v).context("expected a complex {\"vertices\", \"facets\"}")
}

fn read_building(path: &Option<PathBuf>) -> Result<SphericalBuilding> {
    let v = payload(&read_text(path)?, &["building"])?;
    let b: BuildingJson = serde_json::from_value(v).context("expected a building")?;
    Ok(b.to_building()?)
}

fn read_chain(path: &Path) -> Result<Chain> {
    let v = payload(&read_text(&Some(path.to_path_buf()))?, &["chain"])?;
    serde_json::from_value(v).context("expected a chain {\"degree\", \"terms\"}")
}

fn complex_cmd(c: &ComplexCmd) -> Result<Body> {
    let mut body = Body::default();
    match c {
        ComplexCmd::Sphere { n } => {
            let k = sphere_complex(*n)?;
            body.check("dimension", k.dimension() == *n, format!("dimension {}", k.dimension()));
            body.artifact("complex", &k)?;
        }
        ComplexCmd::Join { left, right } => {
            let a = read_complex(&Some(left.clone()))?;
            let b = read_complex(&Some(right.clone()))?;
            let j = join(&a, &b);
            let expected = a.dimension() + b.dimension() + 1;
            body.check("dimension", j.dimension() == expected, format!("dimension {}", j.dimension()));
            body.artifact("complex", &j)?;
        }
        ComplexCmd::Link { vertex, input } => {
            let k = read_complex(input)?;
            body.artifact("complex", link(&k, *vertex)?)?;
        }
        ComplexCmd::Homology { k, reduced, input } => {
            let x = read_complex(input)?;
            let h = homology(&x, *k, *reduced)?;
            body.check("computed", true, format!("betti {} torsion {:?}", h.betti, h.torsion));
            body.artifact("homology", &h)?;
        }
        ComplexCmd::LocalHomology { vertex, k, input } => {
            let x = read_complex(input)?;
            let h = local_homology(&x, *vertex, *k)?;
            body.check("computed", true, format!("betti {} torsion {:?}", h.betti, h.torsion));
            body.artifact("homology", &h)?;
        }
        ComplexCmd::Support { chain, input } => {
            let x = read_complex(input)?;
            let z = read_chain(chain)?;
            let s = support(&z, &x)?;
            let pure = s.is_empty() || (s.is_pure() && s.dimension() == x.dimension());
            body.check("pure", pure, format!("{} facets of dimension {}", s.facets().len(), s.dimension()));
            body.artifact("complex", &s)?;
        }
        ComplexCmd::Suspend { chain, n, input } => {
            let x = read_complex(input)?;
            let z = read_chain(chain)?;
            let sphere = sphere_complex(*n as i64)?;
            let ground = join(&x, &sphere);
            let zs = suspend_cycle(&z, &x, *n)?;
            let joined = join(&support(&z, &x)?, &sphere);
            let same = support(&zs, &ground)?.facets() == joined.facets();
            body.check("support is joined", same, format!("suspended support equals support * S^{n}: {same}"));
            body.artifact("chain", &zs)?;
            body.artifact("complex", &ground)?;
        }
    }
    Ok(body)
}

fn chamber_at(b: &SphericalBuilding, i: usize) -> Result<cathom::Simplex> {
    b.chambers()
        .get(i)
        .cloned()
        .ok_or_else(|| anyhow!("chamber index {i} out of range ({} chambers)", b.chambers().len()))
}

fn building_cmd(c: &BuildingCmd) -> Result<Body> {
    let mut body = Body::default();
    match c {
        BuildingCmd::An { n, q } => {
            let b = an_building(*n, *q)?;
            let q = *q as usize;
            let expected = if *n == 1 { q + 1 } else { (q * q + q + 1) * (q + 1) };
            let count = b.chambers().len();
            body.check("chamber count", count == expected, format!("{count} chambers, expected {expected}"));
            body.artifact("building", BuildingJson::from(&b))?;
        }
        BuildingCmd::Homology { k, input } => {
            let b = read_building(input)?;
            let x = b.complex();
            let h = homology(x, *k, false)?;
            let dim = x.dimension();
            let lower_trivial = (0..dim).all(|d| reduced_homology(x, d).is_trivial());
            let sign = if dim % 2 == 0 { 1 } else { -1 };
            let top = sign * (x.euler_characteristic() - 1);
            let top_betti = homology(x, dim, false)?.betti as i64;
            body.check(
                "euler characteristic",
                lower_trivial && top == top_betti,
                format!("reduced homology below degree {dim} trivial: {lower_trivial}; (-1)^{dim}(chi - 1) = {top}, top betti {top_betti}"),
            );
            body.check("computed", true, format!("betti {} torsion {:?}", h.betti, h.torsion));
            body.artifact("homology", &h)?;
        }
        BuildingCmd::Axioms { input } => {
            let b = read_building(input)?;
            body.checks.extend(b.verify_building_axioms().checks);
        }
        BuildingCmd::Thick { input } => {
            let b = read_building(input)?;
            let t = b.is_thick();
            body.check(
                "chambers per panel",
                t.chamber_condition,
                format!("minimum {} chambers per panel", t.min_chambers_per_panel),
            );
            body.check(
                "apartments per face",
                t.apartment_condition,
                format!("minimum {} apartments per non-maximal face", t.min_apartments_per_face),
            );
            body.artifact("thickness", &t)?;
        }
        BuildingCmd::SolomonTits { chamber, input } => {
            let b = read_building(input)?;
            let st = b.solomon_tits_basis(&chamber_at(&b, *chamber)?)?;
            body.check(
                "basis",
                st.verified(),
                format!(
                    "{} cycles, rank {}, betti {}, invariant factors all 1: {}",
                    st.cycles.len(),
                    st.rank,
                    st.betti,
                    st.invariant_factors_all_one
                ),
            );
            body.artifact("solomon_tits", &st)?;
        }
        BuildingCmd::Opposite { chamber, input } => {
            let b = read_building(input)?;
            let c0 = chamber_at(&b, *chamber)?;
            let opp = b.opposite_chambers(&c0)?;
            let betti = homology(b.complex(), b.complex().dimension(), false)?.betti;
            body.check(
                "count equals top betti",
                opp.len() == betti,
                format!("{} opposite chambers, top betti {betti}", opp.len()),
            );
            body.artifact("opposite", &opp)?;
        }
        BuildingCmd::WeakJoin { n, input } => {
            let b = read_building(input)?.weak_join(*n)?;
            body.checks.extend(b.verify_building_axioms().checks);
            body.artifact("building", BuildingJson::from(&b))?;
        }
        BuildingCmd::Intersection { simplex, input } => {
            let b = read_building(input)?;
            let s = cathom::Simplex::new(simplex.clone())?;
            let apts = b.simplex_as_apartment_intersection(&s)?;
            let ids: Vec<usize> = apts.iter().map(|a| a.id()).collect();
            let mut meet = apts[0].complex().clone();
            for a in &apts[1..] {
                meet = meet.intersection(a.complex());
            }
            let closed = b.complex().closure_of([s.clone()]);
            let ok = meet.facets() == closed.facets();
            body.check("intersection is the simplex", ok, format!("apartments {ids:?}"));
            body.artifact("apartments", &ids)?;
        }
    }
    Ok(body)
}

fn random_combination<R: Rng>(basis: &[Chain], rng: &mut R) -> Result<Chain> {
    loop {
        let mut z = Chain::zero(basis[0].degree());
        for b in basis {
            let c: i64 = rng.random_range(-3..=3);
            for (s, &v) in b.terms() {
                z.add_term(s.clone(), c * v)?;
            }
        }
        if !z.is_zero() {
            return Ok(z);
        }
    }
}

fn complexes(items: &[SimplicialComplex]) -> Vec<Vec<Vec<usize>>> {
    items
        .iter()
        .map(|k| k.facets().iter().map(|f| f.vertices().to_vec()).collect())
        .collect()
}

fn lattice_cmd<R: Rng>(c: &LatticeCmd, rng: &mut R) -> Result<Body> {
    let mut body = Body::default();
    match c {
        LatticeCmd::Generate { trials, input } => {
            let b = read_building(input)?;
            let l = SupportLattice::for_building(&b)?;
            let ind = l.indecomposables();
            let spot = l.distributivity_spot_check(rng, *trials);
            body.check(
                "distributive",
                spot.is_none(),
                format!("{trials} random triples satisfy a∩(b∪c) = (a∩b)∪(a∩c)"),
            );
            body.artifact(
                "lattice",
                json!({
                    "generators": l.generator_count(),
                    "meet_closure": l.meet_closure_size(),
                    "elements": l.element_count().to_string(),
                    "minimal": l.minimal_element(),
                    "indecomposable_count": ind.len(),
                    "indecomposables": complexes(&ind),
                }),
            )?;
            if let Some(triple) = spot {
                body.artifact("counterexample", complexes(&triple))?;
            }
        }
        LatticeCmd::Reconstruct { input } => {
            let b = read_building(input)?;
            let r = SupportLattice::for_building(&b)?.reconstruct()?;
            body.check(
                "isomorphic to quotient",
                r.isomorphic_to_quotient,
                "reconstruction is isomorphic to the ground with the minimal element removed",
            );
            body.check(
                "join recovers ground",
                r.join_isomorphic_to_ground,
                "reconstruction joined with the minimal element is isomorphic to the ground",
            );
            body.artifact("reconstruction", &r)?;
        }
        LatticeCmd::Supports { count, input } => {
            let b = read_building(input)?;
            let l = SupportLattice::for_building(&b)?;
            let st = b.solomon_tits_basis(&chamber_at(&b, 0)?)?;
            let dim = b.complex().dimension();
            let (mut pure, mut inside) = (0, 0);
            for _ in 0..*count {
                let z = random_combination(&st.cycles, rng)?;
                let s = support(&z, b.complex())?;
                pure += usize::from(s.is_pure() && s.dimension() == dim);
                inside += usize::from(l.contains(&s));
            }
            body.check("pure", pure == *count, format!("{pure}/{count} supports pure of dimension {dim}"));
            body.check("in lattice", inside == *count, format!("{inside}/{count} supports in the lattice"));
        }
    }
    Ok(body)
}

fn three(sides: &[f64]) -> Result<[f64; 3]> {
    sides
        .try_into()
        .map_err(|_| anyhow!("expected three sides, got {}", sides.len()))
}

fn catk_cmd<R: Rng>(c: &CatkCmd, tol: f64, rng: &mut R) -> Result<Body> {
    let mut body = Body::default();
    match c {
        CatkCmd::Sines { kappa, sides } => {
            let k = Kappa::new(*kappa)?;
            let [a, b, cc] = three(sides)?;
            let t = comparison_triangle(k, a, b, cc)?;
            let r = law_of_sines_residual(k, &t)?;
            body.check("ratios", r.ratio_residual < tol, format!("residual {:e}", r.ratio_residual));
            if let Some(d) = r.determinant_residual {
                body.check("determinant identity", d < tol, format!("residual {d:e}"));
            }
            body.artifact("triangle", t)?;
            body.artifact("sines", r)?;
        }
        CatkCmd::Triangle { kappa, sides } => {
            let k = Kappa::new(*kappa)?;
            let [a, b, cc] = three(sides)?;
            let t = comparison_triangle(k, a, b, cc)?;
            body.check("solved", true, format!("angles {:?}", t.angles));
            body.artifact("triangle", t)?;
        }
        CatkCmd::Check { kappa, quad } => {
            let k = Kappa::new(*kappa)?;
            let quads = parse_quadruples(&read_text(&Some(quad.clone()))?)?;
            let mut results = Vec::new();
            for (i, q) in quads.iter().enumerate() {
                let r = cat_check_with(k, q, tol)?;
                body.check(
                    format!("quadruple {i:05}"),
                    r.pass,
                    format!("d(p,m) = {} vs comparison {}", r.distance, r.comparison_distance),
                );
                results.push(r);
            }
            body.artifact("results", results)?;
        }
        CatkCmd::Sample { kappa, count } => {
            let k = Kappa::new(*kappa)?;
            let (mut ratio, mut det) = (0.0f64, 0.0f64);
            for _ in 0..*count {
                let r = law_of_sines_residual(k, &random_triangle(k, rng))?;
                ratio = ratio.max(r.ratio_residual);
                det = det.max(r.determinant_residual.unwrap_or(0.0));
            }
            body.check("law of sines", ratio < tol && det < tol, format!("ratio {ratio:e}, determinant {det:e}"));
            let radius = if *kappa > 0.0 { 1.0 / kappa.sqrt() } else { 2.0 };
            let mut passed = 0;
            for _ in 0..*count {
                let [p, q, r] = [(); 3].map(|_| sample_point(k, radius, rng));
                let quad = Quadruple::from_model(k, &p, &q, &r, rng.random())?;
                passed += usize::from(cat_check_with(k, &quad, tol)?.pass);
            }
            body.check("model quadruples", passed == *count, format!("{passed}/{count} pass"));
        }
        CatkCmd::Witness => {
            let w = fat_sphere_witness();
            let r = cat_check_with(Kappa::new(0.0)?, &w, tol)?;
            body.check(
                "fails flat comparison",
                !r.pass,
                format!("d(p,m) = {} > {}", r.distance, r.comparison_distance),
            );
            body.artifact("witness", quadruple_to_array(&w))?;
        }
        CatkCmd::Blowup { d, theta } => {
            let v = blowup_metric(*d, *theta)?;
            body.check("dominates", v >= d.max(*theta), format!("{v}"));
            body.artifact("value", v)?;
        }
    }
    Ok(body)
}

/// Integers, fractions `a/b` and finite decimals, exactly.
fn rational(s: &str) -> Result<Rational64> {
    let s = s.trim();
    if let Ok(r) = Rational64::from_str(s) {
        return Ok(r);
    }
    let (sign, digits) = match s.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, s.strip_prefix('+').unwrap_or(s)),
    };
    let (whole, frac) = digits.split_once('.').ok_or_else(|| anyhow!("not a number: {s}"))?;
    if frac.len() > 12 || !frac.chars().all(|c| c.is_ascii_digit()) {
        bail!("not an exact decimal: {s}");
    }
    let den = 10i64.pow(frac.len() as u32);
    let w: i64 = if whole.is_empty() { 0 } else { whole.parse().with_context(|| format!("not a number: {s}"))? };
    let f: i64 = if frac.is_empty() { 0 } else { frac.parse()? };
    Ok(Rational64::new(sign * (w * den + f), den))
}

fn point(v: &[String]) -> Result<TreePoint> {
    match v {
        [x, y] => Ok(TreePoint::new(rational(x)?, rational(y)?)),
        _ => bail!("a point needs two coordinates"),
    }
}

fn rtree_cmd<R: Rng>(c: &RtreeCmd, tol: f64, rng: &mut R) -> Result<Body> {
    let mut body = Body::default();
    let xi = EndDirection::AxisPlus;
    match c {
        RtreeCmd::Dist { tree, p, q } => {
            let d = RTree::from(*tree).distance(&point(p)?, &point(q)?)?;
            body.check("computed", true, format!("{d}"));
            body.artifact("distance", json!({"exact": d.to_string(), "value": to_f64(d)}))?;
        }
        RtreeCmd::Geodesic { tree, p, q, t } => {
            let tree = RTree::from(*tree);
            let (p, q, t) = (point(p)?, point(q)?, rational(t)?);
            let g = tree.geodesic(&p, &q, t)?;
            let ok = tree.distance(&p, &g)? == t * tree.distance(&p, &q)?;
            body.check("arc length", ok, format!("d(p, g) = t d(p, q) at {g}"));
            body.artifact("point", g)?;
        }
        RtreeCmd::Retract { p } => {
            let p = point(p)?;
            let r = retraction(RTree::T2, xi, &p)?;
            body.check("computed", true, format!("{p} -> {r}"));
            body.artifact("point", r)?;
        }
        RtreeCmd::Fiber { b, c } => {
            let (b, c) = (point(b)?, point(c)?);
            let f = fiber_ultrametric(RTree::T2, xi, &b, &c)?;
            let d = RTree::T2.distance(&b, &c)?;
            body.check("equals distance", f.delta == d, format!("delta {} with branch point {}, d {d}", f.delta, f.branch_point));
            body.artifact("fiber", f)?;
        }
        RtreeCmd::FiberSample { count, alpha } => {
            let sample = sample_fiber(rational(alpha)?, *count, 10_000, 1000, rng);
            let r = verify_fiber_metric(RTree::T2, xi, &sample)?;
            body.check("ultrametric", r.ultrametric, format!("{} triples", r.triples));
            body.check(
                "bi-lipschitz constant 1",
                r.passed(),
                format!("delta/d in [{}, {}]", r.lipschitz_min, r.lipschitz_max),
            );
            body.artifact("fiber", r)?;
        }
        RtreeCmd::Burillo { r, count } => {
            let r = rational(r)?;
            let sample = sample_points(*count, 5, 100, rng);
            let coarse = burillo_cover(RTree::T2, xi, r, &sample)?;
            let fine = burillo_cover(RTree::T2, xi, r / 5, &sample)?;
            body.check("absorption", coarse.absorbing, "r-neighbourhoods over U stay inside");
            body.check("diameter", coarse.diameter_bounded, format!("mesh {} <= {}", coarse.mesh, coarse.mesh_bound));
            body.check("coverage", coarse.covering, "every sample point is covered over each U");
            body.check("disjoint or equal", coarse.disjoint_or_equal, "sets over one U are equal or disjoint");
            body.check("order", coarse.order_ok(), format!("order {}", coarse.order));
            let first = refines(&fine, &coarse);
            body.check("refinement", first.is_none(), format!("the r/5 cover refines the r cover: {}", first.is_none()));
            body.artifact(
                "cover",
                json!({
                    "sets": coarse.elements.len(),
                    "order": coarse.order,
                    "mesh": to_f64(coarse.mesh),
                    "mesh_bound": to_f64(coarse.mesh_bound),
                }),
            )?;
        }
        RtreeCmd::PuncturedBall { tree, point: o, eps, count } => {
            let c = punctured_ball_check(RTree::from(*tree), &point(o)?, rational(eps)?, *count, rng)?;
            body.check(
                "components equal directions",
                c.components == c.directions.len(),
                format!("{} components, {} directions", c.components, c.directions.len()),
            );
            body.check("angles are pi", c.angle_error <= tol, format!("max deviation {:e}", c.angle_error));
            body.artifact("punctured_ball", c)?;
        }
        RtreeCmd::Segment { tree, horizontal, vertical } => {
            let seg = match (horizontal, vertical) {
                (Some(h), None) => match h.as_slice() {
                    [u, v] => Segment::Horizontal { u: rational(u)?, v: rational(v)? },
                    _ => bail!("--horizontal needs u v"),
                },
                (None, Some(v)) => match v.as_slice() {
                    [x0, lo, hi] => Segment::Vertical {
                        x0: rational(x0)?,
                        lo: rational(lo)?,
                        hi: rational(hi)?,
                    },
                    _ => bail!("--vertical needs x0 lo hi"),
                },
                _ => bail!("give exactly one of --horizontal or --vertical"),
            };
            let d = is_segment_in_apartment(RTree::from(*tree), seg)?;
            body.check("decided", !d.justification.is_empty(), d.justification.clone());
            body.artifact("segment", d)?;
        }
        RtreeCmd::Stretch { p } => {
            let p = point(p)?;
            let s = stretch_map(&p);
            let back = stretch_inverse(&s)?;
            body.check("round trip", back == p, format!("{p} -> {s} -> {back}"));
            body.artifact("image", s)?;
        }
    }
    Ok(body)
}

fn to_f64(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn verify_all(only: Option<usize>, seed: u64) -> Result<Body> {
    let ids: Vec<usize> = match only {
        Some(id) if (1..=acceptance::CRITERIA).contains(&id) => vec![id],
        Some(id) => bail!("no criterion {id}; expected 1-{}", acceptance::CRITERIA),
        None => (1..=acceptance::CRITERIA).collect(),
    };
    let mut body = Body::default();
    for id in ids {
        let c = acceptance::run(id, seed);
        body.check(format!("criterion {id:02}: {}", c.check.name), c.check.pass, c.check.detail);
        if let Some(a) = c.artifact {
            body.artifacts.insert(format!("criterion {id:02}"), a);
        }
    }
    Ok(body)
}
