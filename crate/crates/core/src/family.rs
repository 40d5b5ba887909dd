//! Named instance families.
//!
//! [`Instance`] is the JSON-tagged union over every construction routine.
//! [`Prepared`] bundles an instance with its relaxation and an explicit
//! description of the feasible set, and provides the brute-force oracle and
//! the seeded samplers shared by the fuzzer and the test suites.

use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::binary::{
    bipartite_stable_set, box_a, box_b, box_system, cpmc_forest, cpmc_staircase, mccormick, mccormick_system,
    odd_cycle_stable_set, shortest_path, Bipartite, Cpmc, Dag, OddCycle,
};
use crate::certificate::{Certificate, ConvexCombination};
use crate::error::{domain, Error, Result};
use crate::extended::{
    ball, circle_system, cone_system, conv_cone, disc_system, incidence_tu, interval_matrix_tu, lot_sizing,
    pwl_incremental, pwl_mcm, simplex_a, simplex_b, simplex_system, unit_rays, Incidence, IntervalMatrix, LotSizing,
    LotSizingMode, Pwl,
};
use crate::lp::{membership, solve, LinearProgram, LpOutcome, Membership, Separator};
use crate::model::{ConstraintSystem, Sense};
use crate::scalar::{convert, Scalar, Q};

/// Every family tag, in a fixed order.
pub const FAMILIES: [&str; 14] = [
    "mccormick",
    "box",
    "shortest-path",
    "cpmc-forest",
    "cpmc-staircase",
    "odd-cycle",
    "bipartite-stable-set",
    "simplex",
    "conv-cone",
    "ball",
    "lot-sizing",
    "incidence-tu",
    "interval-matrix",
    "pwl",
];

/// Enumeration budget for explicit feasible sets.
const ENUMERATION_CAP: u128 = 1 << 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    #[default]
    A,
    B,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PwlModel {
    /// Multiple-choice (λ) model.
    #[default]
    Mcm,
    Incremental,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Instance {
    Mccormick,
    Box {
        n: usize,
        #[serde(default)]
        variant: Variant,
    },
    ShortestPath {
        nodes: usize,
        arcs: Vec<(usize, usize)>,
        source: usize,
        sink: usize,
    },
    CpmcForest {
        classes: Vec<Vec<usize>>,
        edges: Vec<(usize, usize)>,
    },
    CpmcStaircase {
        classes: Vec<Vec<usize>>,
        edges: Vec<(usize, usize)>,
    },
    OddCycle {
        len: usize,
    },
    BipartiteStableSet {
        left: usize,
        right: usize,
        edges: Vec<(usize, usize)>,
    },
    Simplex {
        n: usize,
        b: i64,
        #[serde(default)]
        variant: Variant,
    },
    ConvCone {
        n: usize,
        b: i64,
    },
    Ball,
    LotSizing {
        #[serde(with = "crate::io::q_vec")]
        demands: Vec<Q>,
    },
    IncidenceTu {
        left: usize,
        right: usize,
        edges: Vec<(usize, usize, i64)>,
    },
    IntervalMatrix {
        rows: Vec<Vec<u8>>,
        rhs: Vec<i64>,
    },
    Pwl {
        #[serde(with = "crate::io::q_vec")]
        breakpoints: Vec<Q>,
        #[serde(with = "crate::io::q_vec")]
        values: Vec<Q>,
        #[serde(default)]
        model: PwlModel,
    },
}

/// Knobs that change what a routine builds.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ConstructOptions {
    pub lot_sizing: LotSizingMode,
}

fn convert_all<T: Scalar>(v: &[Q]) -> Vec<T> {
    v.iter().map(convert).collect()
}

fn check_dim<T>(expected: usize, h: &[T]) -> Result<()> {
    if h.len() != expected {
        return Err(Error::DimensionMismatch { expected, got: h.len() });
    }
    Ok(())
}

impl Instance {
    pub fn from_json(v: &Value) -> Result<Self> {
        let inst: Self = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        inst.validate()?;
        Ok(inst)
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("instances always serialize")
    }

    /// An instance determined by the family name and the point's dimension
    /// alone, for families without further data.
    pub fn from_family(name: &str, dim: usize) -> Result<Self> {
        match name {
            "mccormick" => Ok(Instance::Mccormick),
            "ball" => Ok(Instance::Ball),
            "box" => Ok(Instance::Box {
                n: dim,
                variant: Variant::A,
            }),
            other if FAMILIES.contains(&other) => Err(domain(format!("family {other:?} needs an instance file"))),
            other => Err(domain(format!("unknown family {other:?}"))),
        }
    }

    pub fn family(&self) -> &'static str {
        match self {
            Instance::Mccormick => "mccormick",
            Instance::Box { .. } => "box",
            Instance::ShortestPath { .. } => "shortest-path",
            Instance::CpmcForest { .. } => "cpmc-forest",
            Instance::CpmcStaircase { .. } => "cpmc-staircase",
            Instance::OddCycle { .. } => "odd-cycle",
            Instance::BipartiteStableSet { .. } => "bipartite-stable-set",
            Instance::Simplex { .. } => "simplex",
            Instance::ConvCone { .. } => "conv-cone",
            Instance::Ball => "ball",
            Instance::LotSizing { .. } => "lot-sizing",
            Instance::IncidenceTu { .. } => "incidence-tu",
            Instance::IntervalMatrix { .. } => "interval-matrix",
            Instance::Pwl { .. } => "pwl",
        }
    }

    /// Builds the underlying structures, surfacing malformed data.
    pub fn validate(&self) -> Result<()> {
        match self {
            Instance::ShortestPath { .. } => self.dag().map(drop),
            Instance::CpmcForest { .. } | Instance::CpmcStaircase { .. } => self.cpmc().map(drop),
            Instance::OddCycle { len } => OddCycle::new(*len).map(drop),
            Instance::BipartiteStableSet { left, right, edges } => {
                Bipartite::new(*left, *right, edges.clone()).map(drop)
            }
            Instance::Simplex { b, .. } | Instance::ConvCone { b, .. } if *b < 0 => {
                Err(domain(format!("b = {b} must be nonnegative")))
            }
            Instance::LotSizing { demands } => LotSizing::new(demands.clone()).map(drop),
            Instance::IncidenceTu { left, right, edges } => Incidence::new(*left, *right, edges.clone()).map(drop),
            Instance::IntervalMatrix { rows, rhs } => IntervalMatrix::new(rows.clone(), rhs.clone()).map(drop),
            Instance::Pwl {
                breakpoints, values, ..
            } => Pwl::new(breakpoints.clone(), values.clone()).map(drop),
            _ => Ok(()),
        }
    }

    fn dag(&self) -> Result<Dag> {
        match self {
            Instance::ShortestPath {
                nodes,
                arcs,
                source,
                sink,
            } => Dag::new(*nodes, arcs.clone(), *source, *sink),
            _ => unreachable!("not a path instance"),
        }
    }

    fn cpmc(&self) -> Result<Cpmc> {
        match self {
            Instance::CpmcForest { classes, edges } | Instance::CpmcStaircase { classes, edges } => {
                Cpmc::new(classes.clone(), edges.iter().copied())
            }
            _ => unreachable!("not a CPMC instance"),
        }
    }

    fn pwl<T: Scalar>(&self) -> Result<Pwl<T>> {
        match self {
            Instance::Pwl {
                breakpoints, values, ..
            } => Pwl::new(convert_all(breakpoints), convert_all(values)),
            _ => unreachable!("not a PWL instance"),
        }
    }

    fn lot<T: Scalar>(&self) -> Result<LotSizing<T>> {
        match self {
            Instance::LotSizing { demands } => LotSizing::new(convert_all(demands)),
            _ => unreachable!("not a lot-sizing instance"),
        }
    }

    /// The feasible set `F`.
    pub fn system<T: Scalar>(&self) -> Result<ConstraintSystem<T>> {
        Ok(match self {
            Instance::Mccormick => mccormick_system(),
            Instance::Box { n, .. } => box_system(*n),
            Instance::ShortestPath { .. } => self.dag()?.system(),
            Instance::CpmcForest { .. } | Instance::CpmcStaircase { .. } => self.cpmc()?.system(),
            Instance::OddCycle { len } => OddCycle::new(*len)?.system(),
            Instance::BipartiteStableSet { left, right, edges } => {
                Bipartite::new(*left, *right, edges.clone())?.system()
            }
            Instance::Simplex { n, b, .. } => simplex_system(*n, *b),
            Instance::ConvCone { n, b } => cone_system(*n, *b),
            Instance::Ball => circle_system(),
            Instance::LotSizing { .. } => self.lot::<T>()?.system(),
            Instance::IncidenceTu { left, right, edges } => Incidence::new(*left, *right, edges.clone())?.system(),
            Instance::IntervalMatrix { rows, rhs } => IntervalMatrix::new(rows.clone(), rhs.clone())?.system(),
            Instance::Pwl { model, .. } => {
                let p = self.pwl::<T>()?;
                match model {
                    PwlModel::Mcm => p.mcm_system(),
                    PwlModel::Incremental => p.incremental_system(),
                }
            }
        })
    }

    /// The relaxation `H` the routine accepts points from.
    pub fn relaxation<T: Scalar>(&self) -> Result<ConstraintSystem<T>> {
        match self {
            Instance::CpmcForest { .. } => Ok(self.cpmc()?.stable_set_relaxation()),
            Instance::CpmcStaircase { .. } => Ok(self.cpmc()?.staircase_relaxation()),
            Instance::Ball => Ok(disc_system()),
            _ => self.system(),
        }
    }

    pub fn dim(&self) -> Result<usize> {
        Ok(self.system::<Q>()?.dim())
    }

    /// Dispatches to the construction routine of the family.
    pub fn construct<T: Scalar>(&self, h: &[T], opts: &ConstructOptions) -> Result<Certificate<T>> {
        match self {
            Instance::Mccormick => mccormick(h),
            Instance::Box { n, variant } => {
                check_dim(*n, h)?;
                match variant {
                    Variant::A => box_a(h),
                    Variant::B => box_b(h),
                }
            }
            Instance::ShortestPath { .. } => shortest_path(&self.dag()?, h),
            Instance::CpmcForest { .. } => cpmc_forest(&self.cpmc()?, h),
            Instance::CpmcStaircase { .. } => cpmc_staircase(&self.cpmc()?, h),
            Instance::OddCycle { len } => odd_cycle_stable_set(&OddCycle::new(*len)?, h),
            Instance::BipartiteStableSet { left, right, edges } => {
                bipartite_stable_set(&Bipartite::new(*left, *right, edges.clone())?, h)
            }
            Instance::Simplex { n, b, variant } => {
                check_dim(*n, h)?;
                match variant {
                    Variant::A => simplex_a(h, *b),
                    Variant::B => simplex_b(h, *b),
                }
            }
            Instance::ConvCone { n, b } => {
                check_dim(*n, h)?;
                conv_cone(h, *b)
            }
            Instance::Ball => ball(h),
            Instance::LotSizing { .. } => lot_sizing(&self.lot()?, h, opts.lot_sizing),
            Instance::IncidenceTu { left, right, edges } => {
                incidence_tu(&Incidence::new(*left, *right, edges.clone())?, h)
            }
            Instance::IntervalMatrix { rows, rhs } => {
                interval_matrix_tu(&IntervalMatrix::new(rows.clone(), rhs.clone())?, h)
            }
            Instance::Pwl { model, .. } => {
                let p = self.pwl()?;
                match model {
                    PwlModel::Mcm => pwl_mcm(&p, h),
                    PwlModel::Incremental => pwl_incremental(&p, h),
                }
            }
        }
    }

    /// Relaxation, explicit feasible points and recession rays.
    pub fn prepare(&self) -> Result<Prepared> {
        self.validate()?;
        let relaxation = self.relaxation()?;
        let (points, rays) = match self {
            Instance::Ball => (Vec::new(), Vec::new()),
            Instance::ShortestPath { .. } => (dag_paths(&self.dag()?), Vec::new()),
            Instance::Simplex { n, b, .. } => (compositions(*n, *b, false), Vec::new()),
            Instance::ConvCone { n, b } => (compositions(*n, *b, true), unit_rays(*n)),
            Instance::LotSizing { .. } => (self.lot::<Q>()?.extreme_plans(), Vec::new()),
            Instance::Pwl { model, .. } => (pwl_vertices(&self.pwl()?, *model), Vec::new()),
            _ => {
                let sys = self.system::<Q>()?;
                (
                    sys.enumerate_feasible(&sys.default_box()?, ENUMERATION_CAP)?,
                    Vec::new(),
                )
            }
        };
        if points.is_empty() && !matches!(self, Instance::Ball) {
            return Err(domain("the feasible set is empty"));
        }
        Ok(Prepared {
            instance: self.clone(),
            relaxation,
            points,
            rays,
        })
    }
}

/// Indicator vectors of all source–sink paths.
fn dag_paths(dag: &Dag) -> Vec<Vec<Q>> {
    fn walk(dag: &Dag, v: usize, used: &mut Vec<usize>, out: &mut Vec<Vec<Q>>) {
        if v == dag.sink {
            let mut p = vec![Q::zero(); dag.arcs.len()];
            for &a in used.iter() {
                p[a] = Q::one();
            }
            out.push(p);
            return;
        }
        for a in dag.out_arcs(v) {
            used.push(a);
            walk(dag, dag.arcs[a].1, used, out);
            used.pop();
        }
    }
    let mut out = Vec::new();
    walk(dag, dag.source, &mut Vec::new(), &mut out);
    out
}

/// Nonnegative integer vectors of length `n` summing to `b` (`exact`) or
/// at most `b`, in lexicographic order.
fn compositions(n: usize, b: i64, exact: bool) -> Vec<Vec<Q>> {
    fn rec(n: usize, left: i64, exact: bool, cur: &mut Vec<i64>, out: &mut Vec<Vec<Q>>) {
        if cur.len() == n {
            if !exact || left == 0 {
                out.push(cur.iter().map(|&v| Q::from_integer(v.into())).collect());
            }
            return;
        }
        for v in 0..=left {
            cur.push(v);
            rec(n, left - v, exact, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, b.max(0), exact, &mut Vec::new(), &mut out);
    out
}

/// Vertices of the PWL feasible sets: the origin plus one point per
/// breakpoint (MCM), or per (active prefix, last increment) pair
/// (incremental).
fn pwl_vertices(p: &Pwl<Q>, model: PwlModel) -> Vec<Vec<Q>> {
    let n = p.segments();
    let mut out = Vec::new();
    match model {
        PwlModel::Mcm => {
            out.push(vec![Q::zero(); 4 + n]);
            for i in 0..=n {
                let mut v = vec![p.breakpoints[i].clone(), p.values[i].clone(), Q::one()];
                v.extend((0..=n).map(|k| if k == i { Q::one() } else { Q::zero() }));
                out.push(v);
            }
        }
        PwlModel::Incremental => {
            // z, b_1..b_{n−1} is a prefix of m ones; δ_1..δ_{m−1} = 1, δ_m ∈ {0, 1}.
            out.push(vec![Q::zero(); 2 + 2 * n]);
            for m in 1..=n {
                for last in [0, 1] {
                    let full = m - 1 + last;
                    let mut v = vec![p.breakpoints[full].clone(), p.values[full].clone(), Q::one()];
                    v.extend((1..=n).map(|i| if i <= full { Q::one() } else { Q::zero() }));
                    v.extend((1..n).map(|i| if i < m { Q::one() } else { Q::zero() }));
                    out.push(v);
                }
            }
        }
    }
    out
}

/// How a sample point is drawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SampleKind {
    /// Optimal vertex of the relaxation under a random integer objective.
    Vertex,
    /// Random convex mixture of feasible points (plus rays where present).
    Mix,
}

/// An instance with everything the oracle and samplers need.
#[derive(Clone, Debug, PartialEq)]
pub struct Prepared {
    pub instance: Instance,
    pub relaxation: ConstraintSystem<Q>,
    /// Points whose convex hull is `conv(F)`; empty for the disc, which is
    /// handled in closed form.
    pub points: Vec<Vec<Q>>,
    pub rays: Vec<Vec<Q>>,
}

/// A stage of the construct → verify → extract → reconstruct pipeline failed.
#[derive(Clone, Debug, PartialEq)]
pub enum Failure {
    Construct(Error),
    Verify(Vec<String>),
    Extract(Error),
    Reconstruct { got: Vec<Q> },
    Oracle(String),
}

impl Failure {
    pub fn stage(&self) -> &'static str {
        match self {
            Failure::Construct(_) => "construct",
            Failure::Verify(_) => "verify",
            Failure::Extract(_) => "extract",
            Failure::Reconstruct { .. } => "reconstruct",
            Failure::Oracle(_) => "oracle",
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Construct(e) => write!(f, "construction failed: {e}"),
            Failure::Verify(lines) => write!(f, "verification failed: {}", lines.join("; ")),
            Failure::Extract(e) => write!(f, "extraction failed: {e}"),
            Failure::Reconstruct { got } => {
                let shown: Vec<String> = got.iter().map(Scalar::to_text).collect();
                write!(f, "reconstruction gave ({})", shown.join(", "))
            }
            Failure::Oracle(why) => write!(f, "oracle disagrees: {why}"),
        }
    }
}

fn rand_ratio(rng: &mut impl Rng, max_den: i64) -> Q {
    let d = rng.gen_range(1..=max_den);
    Q::from_ratio(rng.gen_range(0..=d), d)
}

/// The circle point `(1 + (1 − s²)/(1 + s²), 1 + 2s/(1 + s²))`.
fn circle_point(s: &Q) -> Vec<Q> {
    let one = Q::one();
    let den = one.clone() + s * s;
    vec![
        one.clone() + (one.clone() - s * s) / den.clone(),
        one.clone() + Q::from_i64(2) * s / den,
    ]
}

fn random_circle_point(rng: &mut impl Rng) -> Vec<Q> {
    let d = rng.gen_range(1..=12);
    let s = Q::from_ratio(rng.gen_range(-d..=d), d);
    let mut p = circle_point(&s);
    if rng.gen_bool(0.5) {
        p[0] = Q::from_i64(2) - p[0].clone();
    }
    p
}

fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

/// Closed-form oracle for the disc around `(1, 1)`: outside points get the
/// separator `n · x ≤ n · c + (1 + ‖n‖²)/2` with `n = h − c`; inside points
/// are written over an inscribed rectangle with rational circle vertices
/// whose angular width is refined until it covers `h`.
fn disc_oracle(h: &[Q]) -> Result<Membership<Q>> {
    check_dim(2, h)?;
    let c = vec![Q::one(), Q::one()];
    let n: Vec<Q> = h.iter().zip(&c).map(|(a, b)| a - b).collect();
    let r2 = dot(&n, &n);
    if r2 > Q::one() {
        let rhs = dot(&n, &c) + (Q::one() + r2) / Q::from_i64(2);
        return Ok(Membership::Outside(Separator { normal: n, rhs }));
    }
    if r2.is_one() {
        return Ok(Membership::Inside(ConvexCombination {
            support: vec![(h.to_vec(), Q::one())],
            rays: Vec::new(),
        }));
    }
    let antipode = |p: &[Q]| -> Vec<Q> { p.iter().map(|v| Q::from_i64(2) - v.clone()).collect() };
    // The rectangle is centrally symmetric, so fold the direction into x ≥ 0.
    let flip = n[0].is_negative() || (n[0].is_zero() && n[1].is_negative());
    let dir = if flip { antipode(h) } else { h.to_vec() };
    let (dx, dy) = (
        (dir[0].clone() - Q::one()).to_f64(),
        (dir[1].clone() - Q::one()).to_f64(),
    );
    let s0 = if dx == 0.0 && dy == 0.0 {
        0.0
    } else {
        (dy.atan2(dx) / 2.0).tan()
    };
    for k in 2..=48 {
        let m = 1i64 << k;
        let lo = Q::from_ratio((s0 * m as f64).floor() as i64 - 1, m);
        let hi = lo.clone() + Q::from_ratio(3, m);
        let (pa, pb) = (circle_point(&lo), circle_point(&hi));
        let points = vec![pa.clone(), pb.clone(), antipode(&pa), antipode(&pb)];
        if let Membership::Inside(comb) = membership(&points, &[], h)? {
            return Ok(Membership::Inside(comb));
        }
    }
    Err(domain(
        "point too close to the circle for the rational polygon refinement",
    ))
}

impl Prepared {
    pub fn dim(&self) -> usize {
        self.relaxation.dim()
    }

    /// Decides `h ∈ conv(F) + cone(rays)` exactly, returning a combination
    /// or a separating inequality.
    pub fn oracle(&self, h: &[Q]) -> Result<Membership<Q>> {
        check_dim(self.dim(), h)?;
        if matches!(self.instance, Instance::Ball) {
            return disc_oracle(h);
        }
        membership(&self.points, &self.rays, h)
    }

    /// Whether `sep` is valid for `conv(F) + cone(rays)` and cuts off `h`.
    pub fn separator_is_valid(&self, sep: &Separator<Q>, h: &[Q]) -> bool {
        if matches!(self.instance, Instance::Ball) {
            // max over the circle of n · x is n · c + ‖n‖.
            let c = [Q::one(), Q::one()];
            let slack = sep.rhs.clone() - dot(&sep.normal, &c);
            let norm2 = dot(&sep.normal, &sep.normal);
            return !slack.is_negative() && slack.clone() * slack >= norm2 && sep.value(h) > sep.rhs;
        }
        sep.separates(&self.points, &self.rays, h)
    }

    /// [`Prepared::sample`] from a ChaCha stream seeded with `seed`.
    pub fn sample_seeded(&self, seed: u64, kind: SampleKind) -> Result<Vec<Q>> {
        self.sample(&mut ChaCha8Rng::seed_from_u64(seed), kind)
    }

    pub fn sample(&self, rng: &mut impl Rng, kind: SampleKind) -> Result<Vec<Q>> {
        match kind {
            SampleKind::Vertex => self.sample_vertex(rng),
            SampleKind::Mix => self.sample_mix(rng),
        }
    }

    fn sample_vertex(&self, rng: &mut impl Rng) -> Result<Vec<Q>> {
        if matches!(self.instance, Instance::Ball) {
            return Ok(random_circle_point(rng));
        }
        let mut lp = LinearProgram::from_system(&self.relaxation);
        let n = self.dim();
        if let Instance::ConvCone { b, .. } = self.instance {
            // The relaxation is unbounded upwards; cap it for sampling.
            lp.add_row((0..n).map(|i| (i, Q::one())).collect(), Sense::Le, Q::from_i64(b + 3));
        }
        let objective = (0..n).map(|i| (i, Q::from_i64(rng.gen_range(-5..=5)))).collect();
        lp.maximize(objective);
        match solve(&lp)? {
            LpOutcome::Optimal { point, .. } => Ok(point),
            other => Err(domain(format!("sampling LP did not reach an optimum: {other:?}"))),
        }
    }

    fn sample_mix(&self, rng: &mut impl Rng) -> Result<Vec<Q>> {
        if matches!(self.instance, Instance::Ball) {
            // A point on a horizontal chord with rational endpoints.
            let p = random_circle_point(rng);
            let r = (p[0].clone() - Q::one()).abs();
            let t = rand_ratio(rng, 12);
            let x = Q::one() - r.clone() + t * Q::from_i64(2) * r;
            return Ok(vec![x, p[1].clone()]);
        }
        let k = rng.gen_range(1..=4).min(self.points.len());
        let chosen: Vec<&Vec<Q>> = self.points.choose_multiple(rng, k).collect();
        let weights: Vec<i64> = (0..k).map(|_| rng.gen_range(1..=6)).collect();
        let total: i64 = weights.iter().sum();
        let mut h = vec![Q::zero(); self.dim()];
        for (p, w) in chosen.iter().zip(&weights) {
            let lambda = Q::from_ratio(*w, total);
            for (hv, pv) in h.iter_mut().zip(p.iter()) {
                *hv += lambda.clone() * pv;
            }
        }
        for r in &self.rays {
            if rng.gen_bool(0.5) {
                let eta = rand_ratio(rng, 4) * Q::from_i64(rng.gen_range(0..=2));
                for (hv, rv) in h.iter_mut().zip(r) {
                    *hv += eta.clone() * rv;
                }
            }
        }
        Ok(h)
    }

    /// A seeded point outside the relaxation.
    pub fn violating_point(&self, rng: &mut impl Rng) -> Result<Vec<Q>> {
        for _ in 0..10_000 {
            let p = if matches!(self.instance, Instance::Ball) {
                (0..2).map(|_| Q::from_ratio(rng.gen_range(-8..=24), 8)).collect()
            } else {
                let base = self.sample_vertex(rng)?;
                let t = [Q::from_ratio(1, 4), Q::from_ratio(1, 2), Q::one(), Q::from_i64(2)]
                    .choose(rng)
                    .cloned()
                    .expect("non-empty");
                base.iter()
                    .map(|v| v.clone() + t.clone() * Q::from_i64(rng.gen_range(-2..=2)))
                    .collect::<Vec<_>>()
            };
            if !self.relaxation.point_in_relaxation(&p) {
                return Ok(p);
            }
        }
        Err(domain("could not draw a point outside the relaxation"))
    }

    /// Construct, verify, extract and reconstruct; optionally confirm the
    /// oracle agrees that `h` is in the hull.
    pub fn round_trip(
        &self,
        h: &[Q],
        opts: &ConstructOptions,
        check_oracle: bool,
    ) -> std::result::Result<ConvexCombination<Q>, Failure> {
        let cert = self.instance.construct(h, opts).map_err(Failure::Construct)?;
        let report = cert.verify();
        if !report.passed() {
            return Err(Failure::Verify(report.describe(&cert.system)));
        }
        let comb = cert.extract().map_err(Failure::Extract)?;
        let got = comb.reconstruct();
        if got != h {
            return Err(Failure::Reconstruct { got });
        }
        if check_oracle {
            match self.oracle(h) {
                Ok(Membership::Inside(_)) => {}
                Ok(Membership::Outside(sep)) => {
                    let normal: Vec<String> = sep.normal.iter().map(Scalar::to_text).collect();
                    return Err(Failure::Oracle(format!(
                        "certified point reported outside by ({}) · x <= {}",
                        normal.join(", "),
                        sep.rhs.to_text()
                    )));
                }
                Err(e) => return Err(Failure::Oracle(e.to_string())),
            }
        }
        Ok(comb)
    }
}

// -------------------------------------------------------- Random instances

fn random_dag(rng: &mut impl Rng) -> Instance {
    let k = rng.gen_range(3..=9);
    let mut arcs = std::collections::BTreeSet::new();
    for v in 1..k - 1 {
        arcs.insert((rng.gen_range(0..v), v));
        arcs.insert((v, rng.gen_range(v + 1..k)));
    }
    if k == 3 || rng.gen_bool(0.3) {
        arcs.insert((0, k - 1));
    }
    for _ in 0..rng.gen_range(0..=k) {
        let u = rng.gen_range(0..k - 1);
        let v = rng.gen_range(u + 1..k);
        arcs.insert((u, v));
    }
    Instance::ShortestPath {
        nodes: k,
        arcs: arcs.into_iter().collect(),
        source: 0,
        sink: k - 1,
    }
}

fn random_classes(rng: &mut impl Rng, m: usize, max_size: usize) -> Vec<Vec<usize>> {
    let mut next = 0;
    (0..m)
        .map(|_| {
            let size = rng.gen_range(1..=max_size);
            let class = (next..next + size).collect();
            next += size;
            class
        })
        .collect()
}

/// Classes on a tree; along tree edges a random bipartite compatibility
/// graph containing a planted clique, complete between all other pairs.
fn random_cpmc_forest(rng: &mut impl Rng) -> Instance {
    let m = rng.gen_range(2..=4);
    let classes = random_classes(rng, m, 3);
    let planted: Vec<usize> = classes.iter().map(|c| *c.choose(rng).expect("non-empty")).collect();
    let parent: Vec<Option<usize>> = (0..m).map(|i| (i > 0).then(|| rng.gen_range(0..i))).collect();
    let mut edges = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            let tree = parent[j] == Some(i);
            for &u in &classes[i] {
                for &v in &classes[j] {
                    if !tree || (u == planted[i] && v == planted[j]) || rng.gen_bool(0.6) {
                        edges.push((u, v));
                    }
                }
            }
        }
    }
    Instance::CpmcForest { classes, edges }
}

/// Each class cuts `[0, 12)` into consecutive intervals; nodes are
/// compatible when their intervals overlap.
fn random_cpmc_staircase(rng: &mut impl Rng) -> Instance {
    let m = rng.gen_range(2..=3);
    let classes = random_classes(rng, m, 4);
    let spans: Vec<Vec<(i64, i64)>> = classes
        .iter()
        .map(|c| {
            let mut cuts: Vec<i64> = (1..12)
                .collect::<Vec<_>>()
                .choose_multiple(rng, c.len() - 1)
                .copied()
                .collect();
            cuts.sort_unstable();
            let mut bounds = vec![0];
            bounds.extend(cuts);
            bounds.push(12);
            bounds.windows(2).map(|w| (w[0], w[1])).collect()
        })
        .collect();
    let mut edges = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            for (a, &u) in classes[i].iter().enumerate() {
                for (b, &v) in classes[j].iter().enumerate() {
                    let (s, t) = (spans[i][a], spans[j][b]);
                    if s.0.max(t.0) < s.1.min(t.1) {
                        edges.push((u, v));
                    }
                }
            }
        }
    }
    Instance::CpmcStaircase { classes, edges }
}

fn random_incidence(rng: &mut impl Rng) -> Instance {
    let (left, right) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
    let mut pairs: Vec<(usize, usize)> = (0..left)
        .flat_map(|u| (0..right).map(move |w| (u, w)))
        .filter(|_| rng.gen_bool(0.5))
        .collect();
    for u in 0..left {
        if !pairs.iter().any(|p| p.0 == u) {
            pairs.push((u, rng.gen_range(0..right)));
        }
    }
    for w in 0..right {
        if !pairs.iter().any(|p| p.1 == w) {
            pairs.push((rng.gen_range(0..left), w));
        }
    }
    pairs.sort_unstable();
    let edges = pairs.into_iter().map(|(u, w)| (u, w, rng.gen_range(0..=2))).collect();
    Instance::IncidenceTu { left, right, edges }
}

fn random_interval_matrix(rng: &mut impl Rng) -> Instance {
    let cols = rng.gen_range(2..=5);
    let mut spans: Vec<(usize, usize)> = (0..rng.gen_range(1..=4))
        .map(|_| {
            let a = rng.gen_range(0..cols);
            (a, rng.gen_range(a..cols))
        })
        .collect();
    for c in 0..cols {
        if !spans.iter().any(|&(a, b)| a <= c && c <= b) {
            spans.push((c, c));
        }
    }
    let rows = spans
        .iter()
        .map(|&(a, b)| (0..cols).map(|c| u8::from(a <= c && c <= b)).collect())
        .collect();
    let rhs = spans.iter().map(|_| rng.gen_range(0..=3)).collect();
    Instance::IntervalMatrix { rows, rhs }
}

fn random_pwl(rng: &mut impl Rng, model: PwlModel) -> Instance {
    let n = rng.gen_range(1..=3);
    let mut breakpoints = vec![Q::zero()];
    let mut values = vec![Q::zero()];
    for _ in 0..n {
        let last = breakpoints.last().expect("non-empty").clone();
        breakpoints.push(last + Q::from_i64(rng.gen_range(1..=3)));
        values.push(Q::from_i64(rng.gen_range(-3..=3)));
    }
    Instance::Pwl {
        breakpoints,
        values,
        model,
    }
}

fn random_variant(rng: &mut impl Rng) -> Variant {
    if rng.gen_bool(0.5) {
        Variant::A
    } else {
        Variant::B
    }
}

/// A random desk-scale instance of `family`, small enough for the oracle.
pub fn random_instance(family: &str, rng: &mut impl Rng) -> Result<Instance> {
    Ok(match family {
        "mccormick" => Instance::Mccormick,
        "box" => Instance::Box {
            n: rng.gen_range(1..=6),
            variant: random_variant(rng),
        },
        "shortest-path" => random_dag(rng),
        "cpmc-forest" => random_cpmc_forest(rng),
        "cpmc-staircase" => random_cpmc_staircase(rng),
        "odd-cycle" => Instance::OddCycle {
            len: *[3, 5, 7, 9].choose(rng).expect("non-empty"),
        },
        "bipartite-stable-set" => {
            let (left, right) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
            let edges = (0..left)
                .flat_map(|u| (0..right).map(move |w| (u, w)))
                .filter(|_| rng.gen_bool(0.4))
                .collect();
            Instance::BipartiteStableSet { left, right, edges }
        }
        "simplex" => Instance::Simplex {
            n: rng.gen_range(1..=5),
            b: rng.gen_range(0..=5),
            variant: random_variant(rng),
        },
        "conv-cone" => Instance::ConvCone {
            n: rng.gen_range(1..=4),
            b: rng.gen_range(0..=4),
        },
        "ball" => Instance::Ball,
        "lot-sizing" => Instance::LotSizing {
            demands: (0..rng.gen_range(2..=3))
                .map(|_| Q::from_i64(rng.gen_range(0..=3)))
                .collect(),
        },
        "incidence-tu" => random_incidence(rng),
        "interval-matrix" => random_interval_matrix(rng),
        "pwl" => {
            let model = if rng.gen_bool(0.5) {
                PwlModel::Mcm
            } else {
                PwlModel::Incremental
            };
            random_pwl(rng, model)
        }
        other => return Err(domain(format!("unknown family {other:?}"))),
    })
}

/// The lot-sizing point on which the printed layout breaks: demands
/// `(0, 2)`, `y = (1/2, 1/2)`, `w_12 = w_22 = 1`.
pub fn lot_sizing_regression() -> (Instance, Vec<Q>) {
    let half = Q::from_ratio(1, 2);
    let inst = Instance::LotSizing {
        demands: vec![Q::zero(), Q::from_i64(2)],
    };
    // Order: y1, y2, w1_1, w1_2, w2_2.
    (inst, vec![half.clone(), half, Q::zero(), Q::one(), Q::one()])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qi};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn json_round_trip_and_tags() {
        let inst = Instance::Pwl {
            breakpoints: vec![qi(0), qi(1), qi(2)],
            values: vec![qi(0), qi(1), qi(3)],
            model: PwlModel::Incremental,
        };
        let v = inst.to_json();
        assert_eq!(v["family"], "pwl");
        assert_eq!(v["breakpoints"], serde_json::json!(["0", "1", "2"]));
        assert_eq!(Instance::from_json(&v).unwrap(), inst);
        let boxed = Instance::from_json(&serde_json::json!({"family": "box", "n": 2})).unwrap();
        assert_eq!(
            boxed,
            Instance::Box {
                n: 2,
                variant: Variant::A
            }
        );
        assert!(Instance::from_json(&serde_json::json!({"family": "odd-cycle", "len": 4})).is_err());
        assert!(Instance::from_json(&serde_json::json!({"family": "nonsense"})).is_err());
    }

    #[test]
    fn explicit_feasible_sets() {
        let p = Instance::Simplex {
            n: 2,
            b: 2,
            variant: Variant::A,
        }
        .prepare()
        .unwrap();
        assert_eq!(p.points.len(), 6);
        let p = Instance::ConvCone { n: 2, b: 2 }.prepare().unwrap();
        assert_eq!(p.points.len(), 3);
        let pwl = Instance::Pwl {
            breakpoints: vec![qi(0), qi(1), qi(2)],
            values: vec![qi(0), qi(1), qi(3)],
            model: PwlModel::Incremental,
        };
        let prepared = pwl.prepare().unwrap();
        let sys = pwl.system::<Q>().unwrap();
        assert!(prepared.points.iter().all(|v| sys.contains(v)));
        assert_eq!(prepared.points.len(), 5);
        let mcm = Instance::Pwl {
            breakpoints: vec![qi(0), qi(1), qi(2)],
            values: vec![qi(0), qi(1), qi(3)],
            model: PwlModel::Mcm,
        };
        let sys = mcm.system::<Q>().unwrap();
        assert!(mcm.prepare().unwrap().points.iter().all(|v| sys.contains(v)));
    }

    #[test]
    fn disc_oracle_cases() {
        let p = Instance::Ball.prepare().unwrap();
        for h in [
            vec![q("1.1"), q("1.9")],
            vec![qi(1), qi(1)],
            vec![q("0.3"), q("0.5")],
            vec![qi(1), qi(2)],
        ] {
            let Membership::Inside(comb) = p.oracle(&h).unwrap() else {
                panic!("{h:?} is inside")
            };
            assert_eq!(comb.reconstruct(), h);
            assert!(comb.support.iter().all(|(x, _)| circle_system::<Q>().contains(x)));
        }
        let h = vec![qi(2), qi(2)];
        let Membership::Outside(sep) = p.oracle(&h).unwrap() else {
            panic!("outside")
        };
        assert!(p.separator_is_valid(&sep, &h));
    }

    #[test]
    fn random_instances_sample_and_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for family in FAMILIES {
            for _ in 0..3 {
                let inst = random_instance(family, &mut rng).unwrap();
                let prepared = inst.prepare().unwrap_or_else(|e| panic!("{family}: {e}"));
                for kind in [SampleKind::Vertex, SampleKind::Mix] {
                    let h = prepared.sample(&mut rng, kind).unwrap();
                    prepared
                        .round_trip(&h, &ConstructOptions::default(), true)
                        .unwrap_or_else(|f| panic!("{family} {kind:?} {inst:?} at {h:?}: {f}"));
                }
                let bad = prepared.violating_point(&mut rng).unwrap();
                let Membership::Outside(sep) = prepared.oracle(&bad).unwrap() else {
                    panic!("{family}: violating point reported inside")
                };
                assert!(prepared.separator_is_valid(&sep, &bad), "{family}");
            }
        }
    }

    #[test]
    fn regression_point_breaks_printed_layout_only() {
        let (inst, h) = lot_sizing_regression();
        let p = inst.prepare().unwrap();
        let printed = ConstructOptions {
            lot_sizing: LotSizingMode::Printed,
        };
        assert_eq!(p.round_trip(&h, &printed, false).unwrap_err().stage(), "verify");
        p.round_trip(&h, &ConstructOptions::default(), true).unwrap();
    }
}
