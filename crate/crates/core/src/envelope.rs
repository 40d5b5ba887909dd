//! Convex and concave envelopes of functions over finite point sets.
//!
//! `vex`/`cav` come from an exact LP over the enumerated domain; a candidate
//! polytope `P` over `(x, y)` gives lower/upper bounds by LP with `x` fixed.
//! Interval-set witnesses attain the bounds for the worked families, which
//! is the set-theoretic side of the hull equality.

use rayon::prelude::*;

use crate::binary::place;
use crate::error::{domain, Error, Result};
use crate::interval::{CellDecomposition, IntervalSet};
use crate::lp::{membership, solve, LinearProgram, LpOutcome, Membership};
use crate::model::{ConstraintSystem, Sense, VarKind};
use crate::rect::{bilinear_overlap, profile, Base, RectSet};
use crate::scalar::Scalar;

/// Largest accepted truth-table arity.
pub const MAX_ARITY: usize = 20;

/// Boolean function `{0,1}^arity → {0,1}`; row `k` holds the value at the
/// point whose bit `i` is argument `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruthTable {
    arity: usize,
    rows: Vec<bool>,
}

impl TruthTable {
    pub fn new(arity: usize, rows: Vec<bool>) -> Result<Self> {
        if arity > MAX_ARITY {
            return Err(domain(format!("arity {arity} exceeds {MAX_ARITY}")));
        }
        if rows.len() != 1 << arity {
            return Err(Error::DimensionMismatch {
                expected: 1 << arity,
                got: rows.len(),
            });
        }
        Ok(Self { arity, rows })
    }

    pub fn from_fn(arity: usize, f: impl Fn(&[bool]) -> bool) -> Result<Self> {
        if arity > MAX_ARITY {
            return Err(domain(format!("arity {arity} exceeds {MAX_ARITY}")));
        }
        let rows = (0..1usize << arity)
            .map(|k| f(&(0..arity).map(|i| k >> i & 1 == 1).collect::<Vec<_>>()))
            .collect();
        Self::new(arity, rows)
    }

    pub fn and(arity: usize) -> Self {
        Self::from_fn(arity, |b| b.iter().all(|&v| v)).expect("arity checked by caller")
    }

    pub fn or(arity: usize) -> Self {
        Self::from_fn(arity, |b| b.iter().any(|&v| v)).expect("arity checked by caller")
    }

    /// Odd parity; for two arguments the usual exclusive or.
    pub fn xor(arity: usize) -> Self {
        Self::from_fn(arity, |b| b.iter().filter(|&&v| v).count() % 2 == 1).expect("arity checked by caller")
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn rows(&self) -> &[bool] {
        &self.rows
    }

    pub fn eval(&self, bits: &[bool]) -> bool {
        let k = bits
            .iter()
            .enumerate()
            .fold(0usize, |acc, (i, &b)| acc | usize::from(b) << i);
        self.rows[k]
    }
}

/// Measure of the cells whose 0/1 profile over `sets` satisfies `psi`.
pub fn omega<T: Scalar>(sets: &[IntervalSet<T>], psi: &TruthTable) -> Result<T> {
    if sets.len() != psi.arity() {
        return Err(Error::DimensionMismatch {
            expected: psi.arity(),
            got: sets.len(),
        });
    }
    let decomposition = CellDecomposition::of(sets);
    let mut total = T::zero();
    for (a, b) in decomposition.cells() {
        let bits: Vec<bool> = sets.iter().map(|s| s.contains(a)).collect();
        if psi.eval(&bits) {
            total = total + b.clone() - a.clone();
        }
    }
    Ok(total)
}

/// `a · Ψ(x_vars)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BooleanTerm<T> {
    pub coeff: T,
    pub vars: Vec<usize>,
    pub table: TruthTable,
}

#[derive(Clone, Debug, PartialEq)]
pub enum GraphFunction<T> {
    /// `Σ a_i Ψ_i(x)` over 0/1 points.
    Boolean(Vec<BooleanTerm<T>>),
    /// `Σ a_ij x_i x_j` with `i < j`.
    Bilinear(Vec<(usize, usize, T)>),
}

impl<T: Scalar> GraphFunction<T> {
    pub fn validate(&self, n: usize) -> Result<()> {
        match self {
            GraphFunction::Boolean(terms) => {
                for t in terms {
                    if t.vars.len() != t.table.arity() {
                        return Err(Error::DimensionMismatch {
                            expected: t.table.arity(),
                            got: t.vars.len(),
                        });
                    }
                    if let Some(v) = t.vars.iter().find(|&&v| v >= n) {
                        return Err(Error::UnknownVariable(format!("#{v}")));
                    }
                }
            }
            GraphFunction::Bilinear(terms) => {
                let mut seen = std::collections::BTreeSet::new();
                for &(i, j, _) in terms {
                    if i >= j || j >= n {
                        return Err(domain(format!("bilinear pair ({i}, {j}) must satisfy i < j < {n}")));
                    }
                    if !seen.insert((i, j)) {
                        return Err(domain(format!("bilinear pair ({i}, {j}) repeated")));
                    }
                }
            }
        }
        Ok(())
    }

    /// Value at a domain point (Boolean terms read coordinates as bits).
    pub fn eval(&self, x: &[T]) -> T {
        match self {
            GraphFunction::Boolean(terms) => terms.iter().fold(T::zero(), |acc, t| {
                let bits: Vec<bool> = t.vars.iter().map(|&v| !x[v].is_zero()).collect();
                if t.table.eval(&bits) {
                    acc + t.coeff.clone()
                } else {
                    acc
                }
            }),
            GraphFunction::Bilinear(terms) => terms.iter().fold(T::zero(), |acc, (i, j, a)| {
                acc + a.clone() * x[*i].clone() * x[*j].clone()
            }),
        }
    }
}

/// Which closed-form witness construction applies.
#[derive(Clone, Debug, PartialEq, Default)]
pub enum HullFamily<T> {
    /// `x_1 x_2` over `{x ∈ {0,1}² : x_1 + x_2 ≥ 1}`.
    ProductOverCover,
    /// `max(x_1, …, x_n)` over `{0,1}ⁿ`.
    Max(usize),
    /// `x_1 x_2` over `[0, u_1] × [0, u_2]`.
    BilinearBox(T, T),
    #[default]
    Custom,
}

/// Graph of `f` over `T = conv(points)` together with a candidate polytope
/// `P` whose first `n` variables are `x`; `value` is the linear form
/// `Σ a_i y_i` over `P`'s variables.
#[derive(Clone, Debug, PartialEq)]
pub struct GraphHull<T> {
    pub points: Vec<Vec<T>>,
    pub function: GraphFunction<T>,
    pub candidate: ConstraintSystem<T>,
    pub value: Vec<(usize, T)>,
    pub family: HullFamily<T>,
}

fn unit_var<T: Scalar>(s: &mut ConstraintSystem<T>, name: &str) -> usize {
    let v = s.add_var(name, VarKind::Continuous);
    s.set_bounds(v, Some(T::zero()), Some(T::one()));
    v
}

impl<T: Scalar> GraphHull<T> {
    pub fn new(
        points: Vec<Vec<T>>,
        function: GraphFunction<T>,
        candidate: ConstraintSystem<T>,
        value: Vec<(usize, T)>,
    ) -> Result<Self> {
        let n = points
            .first()
            .map(Vec::len)
            .ok_or_else(|| domain("the domain has no points"))?;
        if let Some(p) = points.iter().find(|p| p.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: p.len(),
            });
        }
        function.validate(n)?;
        if candidate.dim() < n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: candidate.dim(),
            });
        }
        if let Some((v, _)) = value.iter().find(|(v, _)| *v >= candidate.dim()) {
            return Err(Error::UnknownVariable(format!("#{v}")));
        }
        Ok(Self {
            points,
            function,
            candidate,
            value,
            family: HullFamily::Custom,
        })
    }

    pub fn dim(&self) -> usize {
        self.points[0].len()
    }

    /// `x_1 x_2` over `{x ∈ {0,1}² : x_1 + x_2 ≥ 1}` with the McCormick rows
    /// plus `x_1 + x_2 ≥ 1` as candidate.
    pub fn product_over_cover() -> Self {
        let one = T::one;
        let points = vec![vec![T::zero(), one()], vec![one(), T::zero()], vec![one(), one()]];
        let f = GraphFunction::Boolean(vec![BooleanTerm {
            coeff: one(),
            vars: vec![0, 1],
            table: TruthTable::and(2),
        }]);
        let mut p = ConstraintSystem::new();
        let (x1, x2, z) = (unit_var(&mut p, "x1"), unit_var(&mut p, "x2"), unit_var(&mut p, "z"));
        p.add_linear(vec![(z, one()), (x1, -one())], Sense::Le, T::zero());
        p.add_linear(vec![(z, one()), (x2, -one())], Sense::Le, T::zero());
        p.add_linear(vec![(z, one()), (x1, -one()), (x2, -one())], Sense::Ge, -one());
        p.add_linear(vec![(x1, one()), (x2, one())], Sense::Ge, one());
        let mut hull = Self::new(points, f, p, vec![(z, one())]).expect("well-formed");
        hull.family = HullFamily::ProductOverCover;
        hull
    }

    /// `max(x_1, …, x_n)` over `{0,1}ⁿ` with `z ≤ Σ x`, `z ≤ 1`, `z ≥ x_i`.
    pub fn max_function(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_ARITY {
            return Err(domain(format!("max function arity {n} must be in 1..={MAX_ARITY}")));
        }
        let points = (0..1usize << n)
            .map(|k| (0..n).map(|i| T::from_i64((k >> i & 1) as i64)).collect())
            .collect();
        let f = GraphFunction::Boolean(vec![BooleanTerm {
            coeff: T::one(),
            vars: (0..n).collect(),
            table: TruthTable::or(n),
        }]);
        let mut p = ConstraintSystem::new();
        let xs: Vec<usize> = (0..n).map(|i| unit_var(&mut p, &format!("x{}", i + 1))).collect();
        let z = unit_var(&mut p, "z");
        let mut row = vec![(z, T::one())];
        row.extend(xs.iter().map(|&x| (x, -T::one())));
        p.add_linear(row, Sense::Le, T::zero());
        p.add_linear(vec![(z, T::one())], Sense::Le, T::one());
        for &x in &xs {
            p.add_linear(vec![(z, T::one()), (x, -T::one())], Sense::Ge, T::zero());
        }
        let mut hull = Self::new(points, f, p, vec![(z, T::one())])?;
        hull.family = HullFamily::Max(n);
        Ok(hull)
    }

    /// `x_1 x_2` over the box `[0, u_1] × [0, u_2]` (domain points are its
    /// corners) with the scaled McCormick rows as candidate.
    pub fn bilinear_box(u1: T, u2: T) -> Result<Self> {
        if u1.is_negative() || u2.is_negative() {
            return Err(domain("box bounds must be nonnegative"));
        }
        let z0 = T::zero;
        let points = vec![
            vec![z0(), z0()],
            vec![u1.clone(), z0()],
            vec![z0(), u2.clone()],
            vec![u1.clone(), u2.clone()],
        ];
        let f = GraphFunction::Bilinear(vec![(0, 1, T::one())]);
        let mut p = ConstraintSystem::new();
        let x1 = p.add_var("x1", VarKind::Continuous);
        let x2 = p.add_var("x2", VarKind::Continuous);
        let z = p.add_var("z", VarKind::Continuous);
        p.set_bounds(x1, Some(z0()), Some(u1.clone()));
        p.set_bounds(x2, Some(z0()), Some(u2.clone()));
        p.set_bounds(z, None, None);
        p.add_linear(vec![(z, T::one()), (x1, -u2.clone())], Sense::Le, z0());
        p.add_linear(vec![(z, T::one()), (x2, -u1.clone())], Sense::Le, z0());
        p.add_linear(vec![(z, T::one())], Sense::Ge, z0());
        p.add_linear(
            vec![(z, T::one()), (x1, -u2.clone()), (x2, -u1.clone())],
            Sense::Ge,
            -(u1.clone() * u2.clone()),
        );
        let mut hull = Self::new(points, f, p, vec![(z, T::one())])?;
        hull.family = HullFamily::BilinearBox(u1, u2);
        Ok(hull)
    }

    /// Same hull with candidate row `k` removed; witnesses are dropped.
    pub fn without_candidate_row(&self, k: usize) -> Result<Self> {
        if k >= self.candidate.constraints.len() {
            return Err(domain(format!("candidate has no row #{}", k + 1)));
        }
        let mut out = self.clone();
        out.candidate.constraints.remove(k);
        out.family = HullFamily::Custom;
        Ok(out)
    }
}

fn require_in_domain<T: Scalar>(hull: &GraphHull<T>, x: &[T]) -> Result<()> {
    if x.len() != hull.dim() {
        return Err(Error::DimensionMismatch {
            expected: hull.dim(),
            got: x.len(),
        });
    }
    match membership(&hull.points, &[], x)? {
        Membership::Inside(_) => Ok(()),
        Membership::Outside(sep) => Err(Error::NotInHull {
            normal: sep.normal.iter().map(|v| v.to_text()).collect(),
            rhs: sep.rhs.to_text(),
        }),
    }
}

fn optimum<T: Scalar>(lp: &LinearProgram<T>) -> Result<Option<T>> {
    match solve(lp)? {
        LpOutcome::Optimal { value, .. } => Ok(Some(value)),
        LpOutcome::Infeasible(_) => Ok(None),
        LpOutcome::Unbounded { .. } => Err(domain("envelope LP is unbounded")),
    }
}

/// `(vex f(x), cav f(x))` by exact LP over the domain points.
pub fn envelope_oracle<T: Scalar>(hull: &GraphHull<T>, x: &[T]) -> Result<(T, T)> {
    require_in_domain(hull, x)?;
    let m = hull.points.len();
    let mut lp = LinearProgram::new(m);
    lp.add_row((0..m).map(|k| (k, T::one())).collect(), Sense::Eq, T::one());
    for (i, xi) in x.iter().enumerate() {
        let coeffs = (0..m)
            .filter(|&k| !hull.points[k][i].is_zero())
            .map(|k| (k, hull.points[k][i].clone()))
            .collect();
        lp.add_row(coeffs, Sense::Eq, xi.clone());
    }
    let values: Vec<(usize, T)> = hull
        .points
        .iter()
        .enumerate()
        .map(|(k, p)| (k, hull.function.eval(p)))
        .filter(|(_, v)| !v.is_zero())
        .collect();
    lp.minimize(values.clone());
    let vex = optimum(&lp)?.ok_or_else(|| domain("domain LP infeasible after membership"))?;
    lp.maximize(values);
    let cav = optimum(&lp)?.ok_or_else(|| domain("domain LP infeasible after membership"))?;
    Ok((vex, cav))
}

/// `(LB_P(x), UB_P(x))` with `x` fixed in the candidate; `None` when `P`
/// has no point above `x`.
pub fn candidate_bounds<T: Scalar>(hull: &GraphHull<T>, x: &[T]) -> Result<Option<(T, T)>> {
    require_in_domain(hull, x)?;
    let mut lp = LinearProgram::from_system(&hull.candidate);
    for (i, xi) in x.iter().enumerate() {
        lp.set_bounds(i, Some(xi.clone()), Some(xi.clone()));
    }
    lp.minimize(hull.value.clone());
    let Some(lb) = optimum(&lp)? else {
        return Ok(None);
    };
    lp.maximize(hull.value.clone());
    let ub = optimum(&lp)?.expect("feasible for the minimisation");
    Ok(Some((lb, ub)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// Convex envelope / lower bound.
    Min,
    /// Concave envelope / upper bound.
    Max,
}

impl Side {
    pub fn name(self) -> &'static str {
        match self {
            Side::Min => "min",
            Side::Max => "max",
        }
    }
}

/// Closed-form witness sets for the Boolean families: the product over the
/// cover uses `[0, x_1)` with `[0, x_2)` (max) or `[1 − x_2, 1)` (min); the
/// max function uses aligned `[0, x_i)` (min) or sets chained modulo 1 (max).
pub fn witness_sets_boolean<T: Scalar>(hull: &GraphHull<T>, x: &[T], side: Side) -> Result<Vec<IntervalSet<T>>> {
    if x.len() != hull.dim() {
        return Err(Error::DimensionMismatch {
            expected: hull.dim(),
            got: x.len(),
        });
    }
    if x.iter().any(|v| v.is_negative() || *v > T::one()) {
        return Err(domain("witness sets need coordinates in [0, 1]"));
    }
    let aligned = || x.iter().map(|v| IntervalSet::span(T::zero(), v.clone())).collect();
    match (&hull.family, side) {
        (HullFamily::ProductOverCover, Side::Max) | (HullFamily::Max(_), Side::Min) => Ok(aligned()),
        (HullFamily::ProductOverCover, Side::Min) => Ok(vec![
            IntervalSet::span(T::zero(), x[0].clone()),
            IntervalSet::span(T::one() - x[1].clone(), T::one()),
        ]),
        (HullFamily::Max(_), Side::Max) => {
            let mut t = T::zero();
            x.iter()
                .map(|v| {
                    let (set, next) = place(&t, v)?;
                    t = next;
                    Ok(set)
                })
                .collect()
        }
        _ => Err(domain("no Boolean witness construction for this hull")),
    }
}

/// `S_1 = ([0, x_1/u_1), u_1)` with `S_2 = ([0, x_2/u_2), u_2)` (max side) or
/// `([1 − x_2/u_2, 1), u_2)` (min side).
pub fn witness_sets_bilinear<T: Scalar>(u1: &T, u2: &T, x: &[T], side: Side) -> Result<(RectSet<T>, RectSet<T>)> {
    if x.len() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: x.len(),
        });
    }
    for (v, u) in x.iter().zip([u1, u2]) {
        if v.is_negative() || v > u {
            return Err(domain(format!("coordinate {v} outside [0, {u}]")));
        }
    }
    let frac = |v: &T, u: &T| if u.is_zero() { T::zero() } else { v.clone() / u.clone() };
    let s1 = RectSet::block(Base::Unit, T::zero(), frac(&x[0], u1), u1.clone());
    let w2 = frac(&x[1], u2);
    let s2 = match side {
        Side::Max => RectSet::block(Base::Unit, T::zero(), w2, u2.clone()),
        Side::Min => RectSet::block(Base::Unit, T::one() - w2, T::one(), u2.clone()),
    };
    Ok((s1, s2))
}

/// Witness value and whether every profile cell is a domain point.
#[derive(Clone, Debug, PartialEq)]
pub struct WitnessValue<T> {
    pub value: T,
    pub admissible: bool,
}

/// `Σ a_i Ω(S_vars, Ψ_i)` for Boolean functions, `Σ a_ij M(S_i, S_j)` for
/// bilinear ones, plus the admissibility check of the profile.
pub fn witness_value<T: Scalar>(hull: &GraphHull<T>, sets: &[RectSet<T>]) -> Result<WitnessValue<T>> {
    if sets.len() != hull.dim() {
        return Err(Error::DimensionMismatch {
            expected: hull.dim(),
            got: sets.len(),
        });
    }
    let value = match &hull.function {
        GraphFunction::Boolean(terms) => {
            let supports = sets.iter().map(RectSet::support).collect::<Result<Vec<_>>>()?;
            let mut total = T::zero();
            for t in terms {
                let args: Vec<IntervalSet<T>> = t.vars.iter().map(|&v| supports[v].clone()).collect();
                total = total + t.coeff.clone() * omega(&args, &t.table)?;
            }
            total
        }
        GraphFunction::Bilinear(terms) => {
            let mut total = T::zero();
            for (i, j, a) in terms {
                total = total + a.clone() * bilinear_overlap(&sets[*i], &sets[*j])?;
            }
            total
        }
    };
    let admissible = profile(Base::Unit, sets)?.iter().all(|c| {
        hull.points
            .iter()
            .any(|p| p.iter().zip(&c.heights).all(|(a, b)| a.near(b)))
    });
    Ok(WitnessValue { value, admissible })
}

/// Witness sets for the hull's family at `x`, lifted to rectangle sets.
pub fn witness_sets<T: Scalar>(hull: &GraphHull<T>, x: &[T], side: Side) -> Result<Option<Vec<RectSet<T>>>> {
    match &hull.family {
        HullFamily::Custom => Ok(None),
        HullFamily::BilinearBox(u1, u2) => {
            let (a, b) = witness_sets_bilinear(u1, u2, x, side)?;
            Ok(Some(vec![a, b]))
        }
        _ => Ok(Some(
            witness_sets_boolean(hull, x, side)?
                .iter()
                .map(|s| RectSet::from_intervals(s, T::one()))
                .collect(),
        )),
    }
}

/// Every graph point `(ξ, f(ξ))` lies in `π[f](P)`.
pub fn graph_points_in_candidate<T: Scalar>(hull: &GraphHull<T>) -> Result<bool> {
    for p in &hull.points {
        let f = hull.function.eval(p);
        match candidate_bounds(hull, p)? {
            Some((lb, ub)) if lb.le_tol(&f) && f.le_tol(&ub) => {}
            _ => return Ok(false),
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SampleReport<T> {
    pub x: Vec<T>,
    pub vex: T,
    pub cav: T,
    /// `None` when the candidate is empty above `x`.
    pub bounds: Option<(T, T)>,
    pub witness_min: Option<WitnessValue<T>>,
    pub witness_max: Option<WitnessValue<T>>,
}

impl<T: Scalar> SampleReport<T> {
    pub fn lower_matches(&self) -> bool {
        self.bounds.as_ref().is_some_and(|(lb, _)| lb.near(&self.vex))
    }

    pub fn upper_matches(&self) -> bool {
        self.bounds.as_ref().is_some_and(|(_, ub)| ub.near(&self.cav))
    }

    /// Witness values attain the envelope on their side and are admissible.
    pub fn witnesses_attain(&self) -> bool {
        let ok =
            |w: &Option<WitnessValue<T>>, target: &T| w.as_ref().is_none_or(|w| w.admissible && w.value.near(target));
        ok(&self.witness_min, &self.vex) && ok(&self.witness_max, &self.cav)
    }

    pub fn passed(&self) -> bool {
        self.lower_matches() && self.upper_matches() && self.witnesses_attain()
    }

    /// One line per discrepancy.
    pub fn findings(&self) -> Vec<String> {
        let x: Vec<String> = self.x.iter().map(|v| v.to_text()).collect();
        let at = format!("({})", x.join(", "));
        let mut out = Vec::new();
        match &self.bounds {
            None => out.push(format!("candidate gap at {at}: P is empty above x")),
            Some((lb, ub)) => {
                if !lb.near(&self.vex) {
                    out.push(format!(
                        "lower gap at {at}: vex = {} but LB_P = {}",
                        self.vex.to_text(),
                        lb.to_text()
                    ));
                }
                if !ub.near(&self.cav) {
                    out.push(format!(
                        "upper gap at {at}: cav = {} but UB_P = {}",
                        self.cav.to_text(),
                        ub.to_text()
                    ));
                }
            }
        }
        for (w, target, side) in [
            (&self.witness_min, &self.vex, "min"),
            (&self.witness_max, &self.cav, "max"),
        ] {
            if let Some(w) = w {
                if !w.admissible {
                    out.push(format!("{side}-side witness at {at} has cells outside the domain"));
                }
                if !w.value.near(target) {
                    out.push(format!(
                        "{side}-side witness at {at} reaches {} instead of {}",
                        w.value.to_text(),
                        target.to_text()
                    ));
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HullReport<T> {
    pub samples: Vec<SampleReport<T>>,
}

impl<T: Scalar> HullReport<T> {
    pub fn passed(&self) -> bool {
        self.samples.iter().all(SampleReport::passed)
    }

    pub fn findings(&self) -> Vec<String> {
        self.samples.iter().flat_map(SampleReport::findings).collect()
    }
}

pub fn check_sample<T: Scalar>(hull: &GraphHull<T>, x: &[T]) -> Result<SampleReport<T>> {
    let (vex, cav) = envelope_oracle(hull, x)?;
    let bounds = candidate_bounds(hull, x)?;
    let witness = |side| -> Result<Option<WitnessValue<T>>> {
        match witness_sets(hull, x, side)? {
            Some(sets) => Ok(Some(witness_value(hull, &sets)?)),
            None => Ok(None),
        }
    };
    Ok(SampleReport {
        x: x.to_vec(),
        vex,
        cav,
        bounds,
        witness_min: witness(Side::Min)?,
        witness_max: witness(Side::Max)?,
    })
}

/// Compares oracle envelopes with candidate bounds (and witness values where
/// a construction exists) at every sample; samples run in parallel.
pub fn hull_equivalence_check<T: Scalar>(hull: &GraphHull<T>, samples: &[Vec<T>]) -> Result<HullReport<T>> {
    let samples = samples
        .par_iter()
        .map(|x| check_sample(hull, x))
        .collect::<Result<Vec<_>>>()?;
    Ok(HullReport { samples })
}

/// Points of the grid `{0, 1/steps, …}·upper` (per coordinate) that lie in
/// the hull's domain.
pub fn domain_grid<T: Scalar>(hull: &GraphHull<T>, steps: i64) -> Result<Vec<Vec<T>>> {
    if steps <= 0 {
        return Err(domain("grid needs a positive number of steps"));
    }
    let n = hull.dim();
    let upper: Vec<T> = (0..n)
        .map(|i| hull.points.iter().map(|p| p[i].clone()).fold(T::zero(), T::max_of))
        .collect();
    let lower: Vec<T> = (0..n)
        .map(|i| hull.points.iter().map(|p| p[i].clone()).fold(T::zero(), T::min_of))
        .collect();
    let mut grid: Vec<Vec<T>> = vec![Vec::new()];
    for i in 0..n {
        let span = upper[i].clone() - lower[i].clone();
        grid = grid
            .into_iter()
            .flat_map(|p| {
                let (lower, span) = (&lower, &span);
                (0..=steps).map(move |k| {
                    let mut q = p.clone();
                    q.push(lower[i].clone() + span.clone() * T::from_ratio(k, steps));
                    q
                })
            })
            .collect();
    }
    let keep: Vec<bool> = grid
        .par_iter()
        .map(|x| membership(&hull.points, &[], x).map(|m| m.is_inside()))
        .collect::<Result<_>>()?;
    Ok(grid.into_iter().zip(keep).filter(|(_, k)| *k).map(|(x, _)| x).collect())
}
