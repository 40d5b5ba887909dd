//! Certificate constructions for general integer and mixed-integer sets.
//!
//! Unlike the 0/1 routines, sets here carry arbitrary heights: a full-width
//! floor block plus a height-1 fractional window is the recurring pattern.

use crate::binary::{ones, place, require_in, unit_sets};
use crate::certificate::Certificate;
use crate::error::{domain, precondition, Error, Result};
use crate::interval::IntervalSet;
use crate::lp::{solve, transportation_feasible, LinearProgram, LpOutcome, Separator, Transport};
use crate::model::{Constraint, ConstraintSystem, Sense, VarKind};
use crate::rect::{Base, Rect, RectSet};
use crate::scalar::Scalar;

fn sum<T: Scalar>(v: &[T]) -> T {
    v.iter().cloned().fold(T::zero(), |a, b| a + b)
}

/// Disjoint `([a, b), c)` pieces on `[0, 1)`; empty or zero-height pieces are dropped.
fn pieces<T: Scalar>(parts: Vec<(T, T, T)>) -> Result<RectSet<T>> {
    RectSet::new(
        Base::Unit,
        parts
            .into_iter()
            .filter(|(a, b, c)| a < b && !c.is_zero())
            .map(|(a, b, c)| Rect::new(a, b, c)),
    )
}

/// `([0, 1), floor) ⊕ (window, 1)`.
fn floor_plus<T: Scalar>(floor: T, window: &IntervalSet<T>) -> Result<RectSet<T>> {
    RectSet::block(Base::Unit, T::zero(), T::one(), floor).stack_union(&RectSet::from_intervals(window, T::one()))
}

/// Splits `v ≥ 0` into its floor and fractional part.
fn split<T: Scalar>(v: &T) -> (T, T) {
    let f = v.floor();
    let frac = v.clone() - f.clone();
    (f, frac)
}

fn require_integer(routine: &'static str, what: &str, v: i64) -> Result<()> {
    if v < 0 {
        return Err(precondition(routine, format!("{what} = {v} must be nonnegative")));
    }
    Ok(())
}

// ------------------------------------------------------------------ Simplex

/// `x ∈ ℤⁿ₊` with `Σ x ≤ b`.
pub fn simplex_system<T: Scalar>(n: usize, b: i64) -> ConstraintSystem<T> {
    let mut s = ConstraintSystem::new();
    for i in 0..n {
        s.add_var(format!("x{}", i + 1), VarKind::Integer);
    }
    if n > 0 {
        s.add_linear(ones(0..n), Sense::Le, T::from_i64(b));
    }
    s
}

/// The vertices `0, b e_1, …, b e_n` of the relaxation.
pub fn simplex_vertices<T: Scalar>(n: usize, b: i64) -> Vec<Vec<T>> {
    let mut out = vec![vec![T::zero(); n]];
    for i in 0..n {
        let mut v = vec![T::zero(); n];
        v[i] = T::from_i64(b);
        out.push(v);
    }
    out
}

/// `S_i = ([r, r + h_i / b), b)` laid out consecutively: every column is a
/// vertex `b e_i` or the origin.
pub fn simplex_a<T: Scalar>(h: &[T], b: i64) -> Result<Certificate<T>> {
    const ROUTINE: &str = "simplex_a";
    require_integer(ROUTINE, "b", b)?;
    let sys = simplex_system(h.len(), b);
    require_in(ROUTINE, &sys, h)?;
    let height = T::from_i64(b);
    let mut r = T::zero();
    let mut sets = Vec::with_capacity(h.len());
    for v in h {
        if b == 0 {
            sets.push(RectSet::empty(Base::Unit));
            continue;
        }
        let end = r.clone() + v.clone() / height.clone();
        let end = T::min_of(end, T::one());
        sets.push(RectSet::block(Base::Unit, r.clone(), end.clone(), height.clone()));
        r = end;
    }
    Ok(Certificate::new(sys, sets, h.to_vec()).with_meta("routine", "simplex-a"))
}

/// Floor block plus a height-1 fractional window, windows chained modulo 1:
/// every column is an integer point, possibly interior.
pub fn simplex_b<T: Scalar>(h: &[T], b: i64) -> Result<Certificate<T>> {
    const ROUTINE: &str = "simplex_b";
    require_integer(ROUTINE, "b", b)?;
    let sys = simplex_system(h.len(), b);
    require_in(ROUTINE, &sys, h)?;
    Ok(Certificate::new(sys, floor_windows(h)?, h.to_vec()).with_meta("routine", "simplex-b"))
}

fn floor_windows<T: Scalar>(h: &[T]) -> Result<Vec<RectSet<T>>> {
    let mut t = T::zero();
    h.iter()
        .map(|v| {
            let (f, frac) = split(v);
            let (window, next) = place(&t, &frac)?;
            t = next;
            floor_plus(f, &window)
        })
        .collect()
}

// ---------------------------------------------------------------- Conv+cone

/// `x ∈ ℤⁿ₊` with `Σ x ≥ b`.
pub fn cone_system<T: Scalar>(n: usize, b: i64) -> ConstraintSystem<T> {
    let mut s = ConstraintSystem::new();
    for i in 0..n {
        s.add_var(format!("x{}", i + 1), VarKind::Integer);
    }
    if n > 0 {
        s.add_linear(ones(0..n), Sense::Ge, T::from_i64(b));
    }
    s
}

/// Unit directions `e_1, …, e_n`.
pub fn unit_rays<T: Scalar>(n: usize) -> Vec<Vec<T>> {
    (0..n)
        .map(|i| (0..n).map(|k| if k == i { T::one() } else { T::zero() }).collect())
        .collect()
}

/// Scales `h` onto the face `Σ x = b` (`g = b h / ‖h‖₁`), certifies `g`
/// with the floor-and-window layout, and puts the remainder `h − g` into
/// consecutive height-1 blocks over `[0, ∞)` generated by the unit rays.
pub fn conv_cone<T: Scalar>(h: &[T], b: i64) -> Result<Certificate<T>> {
    const ROUTINE: &str = "conv_cone";
    require_integer(ROUTINE, "b", b)?;
    let n = h.len();
    let sys = cone_system(n, b);
    require_in(ROUTINE, &sys, h)?;
    let total = sum(h);
    let g: Vec<T> = if b == 0 {
        vec![T::zero(); n]
    } else if total.is_zero() {
        return Err(precondition(ROUTINE, "h = 0 cannot reach the face Σ x = b"));
    } else {
        let scale = T::from_i64(b) / total;
        h.iter().map(|v| v.clone() * scale.clone()).collect()
    };
    let convex = floor_windows(&g)?;
    let mut r = T::zero();
    let conic = h
        .iter()
        .zip(&g)
        .map(|(hv, gv)| {
            let end = r.clone() + hv.clone() - gv.clone();
            let set = RectSet::block(Base::Ray, r.clone(), end.clone(), T::one());
            r = T::max_of(r.clone(), end);
            set
        })
        .collect();
    let shown: Vec<String> = g.iter().map(|v| v.to_text()).collect();
    Ok(Certificate::new(sys, convex, h.to_vec())
        .with_conic(conic, unit_rays(n))
        .with_meta("routine", "conv-cone")
        .with_meta("convex-target", shown.join(",")))
}

// --------------------------------------------------------------------- Ball

fn ball_constraint<T: Scalar>(sense: Sense) -> Constraint<T> {
    Constraint::Ball {
        vars: vec![0, 1],
        center: vec![T::one(), T::one()],
        radius: T::one(),
        sense,
    }
}

fn ball_vars<T: Scalar>() -> ConstraintSystem<T> {
    let mut s = ConstraintSystem::new();
    s.add_var("x1", VarKind::Continuous);
    s.add_var("x2", VarKind::Continuous);
    s
}

/// The unit circle around `(1, 1)`.
pub fn circle_system<T: Scalar>() -> ConstraintSystem<T> {
    let mut s = ball_vars();
    s.add(ball_constraint(Sense::Eq)).expect("declared variables");
    s
}

/// The closed unit disc around `(1, 1)`.
pub fn disc_system<T: Scalar>() -> ConstraintSystem<T> {
    let mut s = ball_vars();
    s.add(ball_constraint(Sense::Le)).expect("declared variables");
    s
}

/// Writes a disc point as a combination of the two circle points on the
/// horizontal chord through it. Needs square roots, so exact rationals
/// only work when the chord endpoints happen to be rational.
pub fn ball<T: Scalar>(h: &[T]) -> Result<Certificate<T>> {
    const ROUTINE: &str = "ball";
    require_in(ROUTINE, &disc_system(), h)?;
    let (h1, h2) = (h[0].clone(), h[1].clone());
    let dy = h2.clone() - T::one();
    let mut disc = T::one() - dy.clone() * dy;
    if disc.is_negative() {
        disc = T::zero();
    }
    let root = disc.sqrt().ok_or_else(|| {
        domain(format!(
            "chord half-width sqrt({}) is irrational; use decimal arithmetic",
            disc.to_text()
        ))
    })?;
    let x_set = if root.near_zero() {
        RectSet::block(Base::Unit, T::zero(), T::one(), h1.clone())
    } else {
        let (v1, v2) = (T::one() - root.clone(), T::one() + root);
        let lambda = (v2.clone() - h1.clone()) / (v2.clone() - v1.clone());
        pieces(vec![(T::zero(), lambda.clone(), v1), (lambda, T::one(), v2)])?
    };
    let sets = vec![x_set, RectSet::block(Base::Unit, T::zero(), T::one(), h2)];
    Ok(Certificate::new(circle_system(), sets, h.to_vec()).with_meta("routine", "ball"))
}

// --------------------------------------------------------------- Lot sizing

/// Uncapacitated lot sizing feasible set: `y_u ∈ {0, 1}` says production
/// happens in period `u`, `w_uj ≥ 0` is the share of demand `d_j` produced
/// in period `u ≤ j`. Variables list `y_1..y_n`, then `w_uj` ordered by `u`
/// then `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct LotSizing<T> {
    pub demands: Vec<T>,
}

/// Largest horizon the repaired layout enumerates production patterns for.
pub const LOT_SIZING_MAX_HORIZON: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum LotSizingMode {
    /// The routine as printed: `S_w_uj = ([0, h_y_u), h_w_uj / h_y_u)`.
    Printed,
    /// Pattern layout from an exact LP, then one transportation per period.
    #[default]
    Repaired,
}

impl LotSizingMode {
    pub fn name(self) -> &'static str {
        match self {
            LotSizingMode::Printed => "printed",
            LotSizingMode::Repaired => "repaired",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            // `paper` is kept as an alias of the printed layout on the command line.
            "printed" | "paper" => Some(LotSizingMode::Printed),
            "repaired" => Some(LotSizingMode::Repaired),
            _ => None,
        }
    }
}

impl<T: Scalar> LotSizing<T> {
    pub fn new(demands: Vec<T>) -> Result<Self> {
        if demands.is_empty() {
            return Err(domain("lot sizing needs at least one period"));
        }
        if let Some(d) = demands.iter().find(|d| d.is_negative()) {
            return Err(domain(format!("demand {d} is negative")));
        }
        Ok(Self { demands })
    }

    pub fn horizon(&self) -> usize {
        self.demands.len()
    }

    /// Index of `y_u` (0-based `u`).
    pub fn y_index(&self, u: usize) -> usize {
        u
    }

    /// Index of `w_uj` (0-based, `u ≤ j`); period `u` owns `n − u` slots.
    pub fn w_index(&self, u: usize, j: usize) -> usize {
        let n = self.horizon();
        debug_assert!(u <= j && j < n);
        n + u * n - u * u.saturating_sub(1) / 2 + (j - u)
    }

    /// Extreme points of the feasible set: a production pattern, with each
    /// positive demand served entirely by one active period at or before it.
    /// Patterns in bitmask order, assignments in lexicographic order.
    pub fn extreme_plans(&self) -> Vec<Vec<T>> {
        let n = self.horizon();
        let dim = n + n * (n + 1) / 2;
        let mut out = Vec::new();
        for mask in 0..1usize << n {
            let mut partial: Vec<Vec<T>> = vec![{
                let mut p = vec![T::zero(); dim];
                for (u, slot) in p.iter_mut().enumerate().take(n) {
                    if mask >> u & 1 == 1 {
                        *slot = T::one();
                    }
                }
                p
            }];
            let mut ok = true;
            for j in 0..n {
                let d = &self.demands[j];
                if d.is_zero() {
                    continue;
                }
                let choices: Vec<usize> = (0..=j).filter(|u| mask >> u & 1 == 1).collect();
                ok &= !choices.is_empty();
                partial = partial
                    .iter()
                    .flat_map(|p| {
                        choices.iter().map(move |&u| {
                            let mut p = p.clone();
                            p[self.w_index(u, j)] = d.clone();
                            p
                        })
                    })
                    .collect();
            }
            if ok {
                out.extend(partial);
            }
        }
        out
    }

    pub fn system(&self) -> ConstraintSystem<T> {
        let n = self.horizon();
        let mut s = ConstraintSystem::new();
        for u in 0..n {
            s.add_var(format!("y{}", u + 1), VarKind::Binary);
        }
        for u in 0..n {
            for j in u..n {
                s.add_var(format!("w{}_{}", u + 1, j + 1), VarKind::Continuous);
            }
        }
        for j in 0..n {
            s.add_linear(
                ones((0..=j).map(|u| self.w_index(u, j))),
                Sense::Eq,
                self.demands[j].clone(),
            );
        }
        for u in 0..n {
            for j in u..n {
                s.add_linear(
                    vec![(self.w_index(u, j), T::one()), (u, -self.demands[j].clone())],
                    Sense::Le,
                    T::zero(),
                );
            }
        }
        s
    }
}

pub fn lot_sizing<T: Scalar>(inst: &LotSizing<T>, h: &[T], mode: LotSizingMode) -> Result<Certificate<T>> {
    const ROUTINE: &str = "lot_sizing";
    let sys = inst.system();
    require_in(ROUTINE, &sys, h)?;
    let sets = match mode {
        LotSizingMode::Printed => lot_sizing_printed(inst, h)?,
        LotSizingMode::Repaired => lot_sizing_repaired(inst, h)?,
    };
    Ok(Certificate::new(sys, sets.0, h.to_vec())
        .with_meta("routine", "lot-sizing")
        .with_meta("mode", mode.name())
        .with_meta("patterns", sets.1))
}

fn lot_sizing_printed<T: Scalar>(inst: &LotSizing<T>, h: &[T]) -> Result<(Vec<RectSet<T>>, String)> {
    let n = inst.horizon();
    let mut sets = vec![RectSet::empty(Base::Unit); h.len()];
    for u in 0..n {
        let hy = h[u].clone();
        sets[u] = RectSet::block(Base::Unit, T::zero(), hy.clone(), T::one());
        if hy.is_zero() {
            continue;
        }
        for j in u..n {
            let k = inst.w_index(u, j);
            sets[k] = RectSet::block(Base::Unit, T::zero(), hy.clone(), h[k].clone() / hy.clone());
        }
    }
    Ok((sets, String::new()))
}

fn pattern_name(mask: usize, n: usize) -> String {
    let members: Vec<String> = (0..n)
        .filter(|u| mask >> u & 1 == 1)
        .map(|u| (u + 1).to_string())
        .collect();
    format!("{{{}}}", members.join(","))
}

/// Production patterns `Y ⊆ [n]` get widths `p_Y` from an exact LP whose
/// feasibility is equivalent to `h ∈ conv(F)`; per period a transportation
/// problem then splits each cell's demand among the active periods.
fn lot_sizing_repaired<T: Scalar>(inst: &LotSizing<T>, h: &[T]) -> Result<(Vec<RectSet<T>>, String)> {
    const ROUTINE: &str = "lot_sizing";
    let n = inst.horizon();
    if n > LOT_SIZING_MAX_HORIZON {
        return Err(Error::Mode {
            routine: ROUTINE,
            detail: format!("horizon {n} exceeds {LOT_SIZING_MAX_HORIZON} periods"),
        });
    }
    let d = &inst.demands;
    let active: Vec<usize> = (0..n).filter(|&j| d[j].is_pos()).collect();
    // A pattern serves period j iff it produces in some u ≤ j.
    let patterns: Vec<usize> = (0..1usize << n)
        .filter(|&m| active.iter().all(|&j| m & ((1 << (j + 1)) - 1) != 0))
        .collect();

    let np = patterns.len();
    let mut qvar = Vec::new();
    for (pi, &m) in patterns.iter().enumerate() {
        for &j in &active {
            for u in (0..=j).filter(|u| m >> u & 1 == 1) {
                qvar.push((pi, u, j));
            }
        }
    }
    let mut lp = LinearProgram::new(np + qvar.len());
    lp.add_row(ones(0..np), Sense::Eq, T::one());
    for (u, hu) in h.iter().enumerate().take(n) {
        let coeffs = ones((0..np).filter(|&pi| patterns[pi] >> u & 1 == 1));
        lp.add_row(coeffs, Sense::Eq, hu.clone());
    }
    for pi in 0..np {
        for &j in &active {
            let mut coeffs: Vec<(usize, T)> = ones(
                qvar.iter()
                    .enumerate()
                    .filter(|(_, &(p, _, jj))| p == pi && jj == j)
                    .map(|(k, _)| np + k),
            );
            coeffs.push((pi, -d[j].clone()));
            lp.add_row(coeffs, Sense::Eq, T::zero());
        }
    }
    let mut w_rows = Vec::new();
    for &j in &active {
        for u in 0..=j {
            let coeffs = ones(
                qvar.iter()
                    .enumerate()
                    .filter(|(_, &(_, uu, jj))| uu == u && jj == j)
                    .map(|(k, _)| np + k),
            );
            lp.add_row(coeffs, Sense::Eq, h[inst.w_index(u, j)].clone());
            w_rows.push(inst.w_index(u, j));
        }
    }

    let point = match solve(&lp)? {
        LpOutcome::Optimal { point, .. } => point,
        LpOutcome::Infeasible(cert) => {
            let y = &cert.multipliers;
            let mut normal = vec![T::zero(); h.len()];
            for u in 0..n {
                normal[u] = -y[1 + u].clone();
            }
            let offset = 1 + n + np * active.len();
            for (k, &var) in w_rows.iter().enumerate() {
                normal[var] = -y[offset + k].clone();
            }
            let sep = Separator {
                normal,
                rhs: y[0].clone(),
            };
            debug_assert!((sep.value(h) - sep.rhs.clone()).is_pos());
            return Err(Error::NotInHull {
                normal: sep.normal.iter().map(|v| v.to_text()).collect(),
                rhs: sep.rhs.to_text(),
            });
        }
        LpOutcome::Unbounded { .. } => unreachable!("feasibility problems are never unbounded"),
    };

    // Cells: one per pattern with positive width, in mask order.
    let mut cells = Vec::new();
    let mut r = T::zero();
    for (pi, &m) in patterns.iter().enumerate() {
        let p = point[pi].clone();
        if p.is_pos() {
            let end = r.clone() + p.clone();
            cells.push((m, r.clone(), end.clone(), p));
            r = end;
        }
    }
    if let Some(last) = cells.last_mut() {
        last.2 = T::one();
    }

    let mut sets = vec![RectSet::empty(Base::Unit); h.len()];
    for (u, set) in sets.iter_mut().enumerate().take(n) {
        let parts = cells
            .iter()
            .filter(|c| c.0 >> u & 1 == 1)
            .map(|c| (c.1.clone(), c.2.clone(), T::one()))
            .collect();
        *set = pieces(parts)?;
    }
    for &j in &active {
        let supply: Vec<T> = cells.iter().map(|c| c.3.clone() * d[j].clone()).collect();
        let demand: Vec<T> = (0..=j).map(|u| h[inst.w_index(u, j)].clone()).collect();
        let allowed: Vec<(usize, usize)> = (0..cells.len())
            .flat_map(|c| (0..=j).map(move |u| (c, u)))
            .filter(|&(c, u)| cells[c].0 >> u & 1 == 1)
            .collect();
        let flow = match transportation_feasible(&supply, &demand, &allowed)? {
            Transport::Flow(f) => f,
            Transport::Infeasible(cut) => {
                return Err(Error::TransportInfeasible {
                    weight: cut.weight.to_text(),
                })
            }
        };
        for u in 0..=j {
            let parts = allowed
                .iter()
                .zip(&flow)
                .filter(|((_, uu), _)| *uu == u)
                .map(|(&(c, _), f)| (cells[c].1.clone(), cells[c].2.clone(), f.clone() / cells[c].3.clone()))
                .collect();
            sets[inst.w_index(u, j)] = pieces(parts)?;
        }
    }
    let names: Vec<String> = cells.iter().map(|c| pattern_name(c.0, n)).collect();
    Ok((sets, names.join(" ")))
}

// ---------------------------------------------------------------------- TU

/// Bipartite graph with integer edge capacities: node variables
/// `u_1..u_left, w_1..w_right ∈ ℤ₊` and `x_u + x_w ≤ b` per edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Incidence {
    pub left: usize,
    pub right: usize,
    /// `(u, w, b)` triples.
    pub edges: Vec<(usize, usize, i64)>,
}

impl Incidence {
    pub fn new(left: usize, right: usize, edges: Vec<(usize, usize, i64)>) -> Result<Self> {
        if let Some((u, w, _)) = edges.iter().find(|(u, w, _)| *u >= left || *w >= right) {
            return Err(domain(format!("edge ({u}, {w}) out of range")));
        }
        Ok(Self { left, right, edges })
    }

    pub fn system<T: Scalar>(&self) -> ConstraintSystem<T> {
        let mut s = ConstraintSystem::new();
        for u in 0..self.left {
            s.add_var(format!("u{}", u + 1), VarKind::Integer);
        }
        for w in 0..self.right {
            s.add_var(format!("w{}", w + 1), VarKind::Integer);
        }
        for &(u, w, b) in &self.edges {
            s.add_linear(ones([u, self.left + w]), Sense::Le, T::from_i64(b));
        }
        s
    }
}

/// Left side: floor block plus `[0, frac)`; right side: floor block plus
/// `[1 − frac, 1)`.
pub fn incidence_tu<T: Scalar>(inst: &Incidence, h: &[T]) -> Result<Certificate<T>> {
    let sys = inst.system();
    require_in("incidence_tu", &sys, h)?;
    let sets = h
        .iter()
        .enumerate()
        .map(|(k, v)| {
            let (f, frac) = split(v);
            let window = if k < inst.left {
                IntervalSet::span(T::zero(), frac)
            } else {
                IntervalSet::span(T::one() - frac, T::one())
            };
            floor_plus(f, &window)
        })
        .collect::<Result<_>>()?;
    Ok(Certificate::new(sys, sets, h.to_vec()).with_meta("routine", "incidence-tu"))
}

/// `A x ≤ b` over `x ∈ ℤⁿ₊` for a 0/1 matrix whose rows have consecutive ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalMatrix {
    pub rows: Vec<Vec<u8>>,
    pub rhs: Vec<i64>,
}

impl IntervalMatrix {
    pub fn new(rows: Vec<Vec<u8>>, rhs: Vec<i64>) -> Result<Self> {
        if rows.len() != rhs.len() {
            return Err(Error::DimensionMismatch {
                expected: rows.len(),
                got: rhs.len(),
            });
        }
        let n = rows.first().map_or(0, Vec::len);
        if let Some(r) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: r.len(),
            });
        }
        if rows.iter().flatten().any(|&a| a > 1) {
            return Err(domain("matrix entries must be 0 or 1"));
        }
        Ok(Self { rows, rhs })
    }

    pub fn columns(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    /// First row whose ones are not consecutive.
    pub fn non_interval_row(&self) -> Option<usize> {
        self.rows.iter().position(|r| {
            let first = r.iter().position(|&a| a == 1);
            let last = r.iter().rposition(|&a| a == 1);
            match (first, last) {
                (Some(f), Some(l)) => r[f..=l].contains(&0),
                _ => false,
            }
        })
    }

    pub fn system<T: Scalar>(&self) -> ConstraintSystem<T> {
        let mut s = ConstraintSystem::new();
        for i in 0..self.columns() {
            s.add_var(format!("x{}", i + 1), VarKind::Integer);
        }
        for (row, &b) in self.rows.iter().zip(&self.rhs) {
            let coeffs = ones(row.iter().enumerate().filter(|(_, &a)| a == 1).map(|(i, _)| i));
            if !coeffs.is_empty() {
                s.add_linear(coeffs, Sense::Le, T::from_i64(b));
            } else if b < 0 {
                // 0 ≤ b fails for every point; keep it visible in the system.
                s.add_linear(vec![(0, T::zero())], Sense::Le, T::from_i64(b));
            }
        }
        s
    }
}

/// Columns in order: floor block plus a height-1 fractional window, windows
/// chained modulo 1 so any run of consecutive columns overlaps minimally.
pub fn interval_matrix_tu<T: Scalar>(inst: &IntervalMatrix, h: &[T]) -> Result<Certificate<T>> {
    const ROUTINE: &str = "interval_matrix_tu";
    if let Some(r) = inst.non_interval_row() {
        return Err(Error::Mode {
            routine: ROUTINE,
            detail: format!("row {} does not have consecutive ones", r + 1),
        });
    }
    let sys = inst.system();
    require_in(ROUTINE, &sys, h)?;
    Ok(Certificate::new(sys, floor_windows(h)?, h.to_vec()).with_meta("routine", "interval-matrix-tu"))
}

// ---------------------------------------------------------- Piecewise linear

/// Continuous piecewise linear function through `(B_i, F_i)` with
/// `0 = B_0 < B_1 < … < B_n` and `F_0 = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Pwl<T> {
    pub breakpoints: Vec<T>,
    pub values: Vec<T>,
}

impl<T: Scalar> Pwl<T> {
    pub fn new(breakpoints: Vec<T>, values: Vec<T>) -> Result<Self> {
        if breakpoints.len() != values.len() {
            return Err(Error::DimensionMismatch {
                expected: breakpoints.len(),
                got: values.len(),
            });
        }
        if breakpoints.len() < 2 {
            return Err(domain("need at least two breakpoints"));
        }
        if !breakpoints[0].is_zero() || !values[0].is_zero() {
            return Err(domain("the function must start at (0, 0)"));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(domain("breakpoints must be strictly increasing"));
        }
        Ok(Self { breakpoints, values })
    }

    /// Number of segments `n`.
    pub fn segments(&self) -> usize {
        self.breakpoints.len() - 1
    }

    /// Multiple-choice model over `(x, y, z, λ_0..λ_n)`: `x = Σ B_i λ_i`,
    /// `y = Σ F_i λ_i`, `z = Σ λ_i`, `z` binary, `λ ≥ 0`.
    pub fn mcm_system(&self) -> ConstraintSystem<T> {
        let n = self.segments();
        let mut s = ConstraintSystem::new();
        let x = s.add_var("x", VarKind::Continuous);
        let y = s.add_var("y", VarKind::Continuous);
        let z = s.add_var("z", VarKind::Binary);
        s.set_bounds(x, None, None);
        s.set_bounds(y, None, None);
        let lam: Vec<usize> = (0..=n)
            .map(|i| s.add_var(format!("l{i}"), VarKind::Continuous))
            .collect();
        for (var, coef) in [(x, &self.breakpoints), (y, &self.values)] {
            let mut coeffs = vec![(var, T::one())];
            coeffs.extend(
                lam.iter()
                    .zip(coef)
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(&l, c)| (l, -c.clone())),
            );
            s.add_linear(coeffs, Sense::Eq, T::zero());
        }
        let mut coeffs = vec![(z, T::one())];
        coeffs.extend(lam.iter().map(|&l| (l, -T::one())));
        s.add_linear(coeffs, Sense::Eq, T::zero());
        s
    }

    /// Incremental model over `(x, y, z, δ_1..δ_n, b_1..b_{n−1})`:
    /// `x = Σ (B_i − B_{i−1}) δ_i`, `y` likewise, `δ_1 ≤ z`, `0 ≤ δ_n`,
    /// `δ_{i+1} ≤ b_i ≤ δ_i`; `z` and `b` binary.
    pub fn incremental_system(&self) -> ConstraintSystem<T> {
        let n = self.segments();
        let mut s = ConstraintSystem::new();
        let x = s.add_var("x", VarKind::Continuous);
        let y = s.add_var("y", VarKind::Continuous);
        let z = s.add_var("z", VarKind::Binary);
        s.set_bounds(x, None, None);
        s.set_bounds(y, None, None);
        let delta: Vec<usize> = (1..=n)
            .map(|i| {
                let v = s.add_var(format!("d{i}"), VarKind::Continuous);
                s.set_bounds(v, None, None);
                v
            })
            .collect();
        let b: Vec<usize> = (1..n).map(|i| s.add_var(format!("b{i}"), VarKind::Binary)).collect();
        for (var, coef) in [(x, &self.breakpoints), (y, &self.values)] {
            let mut coeffs = vec![(var, T::one())];
            for (i, &dv) in delta.iter().enumerate() {
                let inc = coef[i + 1].clone() - coef[i].clone();
                if !inc.is_zero() {
                    coeffs.push((dv, -inc));
                }
            }
            s.add_linear(coeffs, Sense::Eq, T::zero());
        }
        s.add_linear(vec![(delta[0], T::one()), (z, -T::one())], Sense::Le, T::zero());
        s.add_linear(vec![(delta[n - 1], T::one())], Sense::Ge, T::zero());
        for i in 0..n - 1 {
            s.add_linear(vec![(delta[i + 1], T::one()), (b[i], -T::one())], Sense::Le, T::zero());
            s.add_linear(vec![(b[i], T::one()), (delta[i], -T::one())], Sense::Le, T::zero());
        }
        s
    }
}

/// At most two entries are nonzero, and two nonzero entries are adjacent.
pub fn is_sos2<T: Scalar>(lambda: &[T]) -> bool {
    let nz: Vec<usize> = (0..lambda.len()).filter(|&i| !lambda[i].near_zero()).collect();
    match nz.as_slice() {
        [] | [_] => true,
        [a, b] => b - a == 1,
        _ => false,
    }
}

/// λ-sets consecutive height-1 intervals; `x` and `y` stack `(I_i, B_i)` and
/// `(I_i, F_i)`; `S_z = [0, h_z)`.
pub fn pwl_mcm<T: Scalar>(inst: &Pwl<T>, h: &[T]) -> Result<Certificate<T>> {
    let sys = inst.mcm_system();
    require_in("pwl_mcm", &sys, h)?;
    let n = inst.segments();
    let mut r = T::zero();
    let mut lam_sets = Vec::with_capacity(n + 1);
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for i in 0..=n {
        let end = T::min_of(r.clone() + h[3 + i].clone(), T::one());
        lam_sets.push(IntervalSet::span(r.clone(), end.clone()));
        xs.push((r.clone(), end.clone(), inst.breakpoints[i].clone()));
        ys.push((r.clone(), end.clone(), inst.values[i].clone()));
        r = end;
    }
    let mut sets = vec![
        pieces(xs)?,
        pieces(ys)?,
        RectSet::block(Base::Unit, T::zero(), h[2].clone(), T::one()),
    ];
    sets.extend(unit_sets(lam_sets));
    Ok(Certificate::new(sys, sets, h.to_vec()).with_meta("routine", "pwl-mcm"))
}

/// `S_δi = [0, h_δi)`, `S_bi = [0, h_bi)`, `S_z = [0, h_z)`; on
/// `[h_δ(i+1), h_δi)` exactly the first `i` increments are active, so `x`
/// and `y` take the breakpoint values `B_i` and `F_i` there.
pub fn pwl_incremental<T: Scalar>(inst: &Pwl<T>, h: &[T]) -> Result<Certificate<T>> {
    let sys = inst.incremental_system();
    require_in("pwl_incremental", &sys, h)?;
    let n = inst.segments();
    let delta = |i: usize| if i < n { h[3 + i].clone() } else { T::zero() };
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for i in 0..n {
        xs.push((delta(i + 1), delta(i), inst.breakpoints[i + 1].clone()));
        ys.push((delta(i + 1), delta(i), inst.values[i + 1].clone()));
    }
    let mut sets = vec![pieces(xs)?, pieces(ys)?];
    let rest = std::iter::once(h[2].clone())
        .chain((0..n).map(delta))
        .chain(h[3 + n..].iter().cloned());
    sets.extend(rest.map(|v| RectSet::block(Base::Unit, T::zero(), v, T::one())));
    Ok(Certificate::new(sys, sets, h.to_vec()).with_meta("routine", "pwl-incremental"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificate::{VerifyMode, VerifyOptions};
    use crate::scalar::{q, qi, Q};
    use num_traits::Signed;

    fn v(s: &[&str]) -> Vec<Q> {
        s.iter().map(|x| q(x)).collect()
    }

    fn ints(s: &[i64]) -> Vec<Q> {
        s.iter().map(|&x| qi(x)).collect()
    }

    fn support(cert: &Certificate<Q>) -> Vec<(Vec<Q>, Q)> {
        let report = cert.verify();
        assert!(report.passed(), "{:?}", report.describe(&cert.system));
        let comb = cert.extract().unwrap();
        assert_eq!(comb.reconstruct(), cert.target);
        comb.support
    }

    #[test]
    fn simplex_variants() {
        let h = v(&["1", "1.5", "0.8"]);
        let a = simplex_a(&h, 4).unwrap();
        assert_eq!(
            support(&a),
            vec![
                (ints(&[4, 0, 0]), q("0.25")),
                (ints(&[0, 4, 0]), q("0.375")),
                (ints(&[0, 0, 4]), q("0.2")),
                (ints(&[0, 0, 0]), q("0.175")),
            ]
        );
        let hull = VerifyOptions {
            mode: VerifyMode::Hull(simplex_vertices(3, 4)),
            tolerance: qi(0),
        };
        assert!(a.verify_with(&hull).passed());

        let b = simplex_b(&h, 4).unwrap();
        assert_eq!(
            support(&b),
            vec![
                (ints(&[1, 2, 1]), q("0.3")),
                (ints(&[1, 2, 0]), q("0.2")),
                (ints(&[1, 1, 1]), q("0.5"))
            ]
        );
        // B's columns are interior integer points, not vertices of the relaxation.
        assert!(support(&b).iter().all(|(p, _)| !simplex_vertices(3, 4).contains(p)));

        for cert in [
            simplex_a(&ints(&[0, 0]), 3).unwrap(),
            simplex_b(&ints(&[0, 0]), 3).unwrap(),
        ] {
            assert_eq!(support(&cert), vec![(ints(&[0, 0]), qi(1))]);
        }
        assert!(matches!(
            simplex_b(&v(&["3", "1.5"]), 4),
            Err(Error::Precondition { .. })
        ));
    }

    #[test]
    fn conv_cone_examples() {
        let h = v(&["1", "1.5", "0.8"]);
        let cert = conv_cone(&h, 1).unwrap();
        assert_eq!(cert.metadata["convex-target"], "10/33,5/11,8/33");
        let comb = {
            assert!(cert.verify().passed());
            cert.extract().unwrap()
        };
        assert_eq!(comb.reconstruct(), h);
        let rays: Vec<Q> = comb.rays.iter().map(|(_, w)| w.clone()).collect();
        assert_eq!(rays, v(&["23/33", "23/22", "92/165"]));
        for (got, printed) in rays.iter().zip(["0.7", "1.05", "0.56"]) {
            assert!(Signed::abs(&(got.clone() - q(printed))) <= q("0.01"));
        }

        let cert = conv_cone(&ints(&[2, 0, 0]), 1).unwrap();
        let comb = cert.extract().unwrap();
        assert_eq!(comb.support, vec![(ints(&[1, 0, 0]), qi(1))]);
        assert_eq!(comb.rays, vec![(ints(&[1, 0, 0]), qi(1))]);

        let comb = conv_cone(&ints(&[1, 0, 0]), 1).unwrap().extract().unwrap();
        assert_eq!(comb.support, vec![(ints(&[1, 0, 0]), qi(1))]);
        assert!(comb.rays.is_empty());

        // Larger right-hand side: the convex part sits on Σ x = 2.
        let cert = conv_cone(&v(&["1.5", "2.5"]), 2).unwrap();
        let comb = cert.extract().unwrap();
        assert!(comb.support.iter().all(|(p, _)| p.iter().cloned().sum::<Q>() == qi(2)));
        assert!(conv_cone(&ints(&[0, 0]), 1).is_err());
    }

    #[test]
    fn ball_examples() {
        let cert = ball(&[1.1f64, 1.9]).unwrap();
        assert!(cert.verify().passed());
        let comb = cert.extract().unwrap();
        assert_eq!(comb.support.len(), 2);
        let (p1, w1) = &comb.support[0];
        let (p2, w2) = &comb.support[1];
        for (got, want) in [(*w1, 0.39), (p1[0], 0.56), (*w2, 0.61), (p2[0], 1.44), (p1[1], 1.9)] {
            assert!((got - want).abs() < 0.01, "{got} vs {want}");
        }

        let sup = support(&ball(&ints(&[1, 1])).unwrap());
        assert_eq!(sup, vec![(ints(&[0, 1]), q("0.5")), (ints(&[2, 1]), q("0.5"))]);
        assert_eq!(support(&ball(&ints(&[1, 2])).unwrap()), vec![(ints(&[1, 2]), qi(1))]);
        assert!(matches!(ball(&v(&["1.1", "1.9"])), Err(Error::Domain(_))));
        assert!(matches!(ball(&[0.1f64, 0.1]), Err(Error::Precondition { .. })));
    }

    fn lot(d: &[i64]) -> LotSizing<Q> {
        LotSizing::new(ints(d)).unwrap()
    }

    /// `(y, [(u, j, w)])` written into a full vector.
    fn plan(inst: &LotSizing<Q>, y: &[Q], w: &[(usize, usize, Q)]) -> Vec<Q> {
        let n = inst.horizon();
        let mut h = vec![qi(0); n + n * (n + 1) / 2];
        h[..n].clone_from_slice(y);
        for (u, j, val) in w {
            h[inst.w_index(u - 1, j - 1)] = val.clone();
        }
        h
    }

    #[test]
    fn lot_sizing_indexing() {
        let inst = lot(&[1, 1, 1]);
        let sys = inst.system();
        let names: Vec<String> = (0..3)
            .flat_map(|u| (u..3).map(move |j| (u, j)))
            .map(|(u, j)| sys.vars[inst.w_index(u, j)].name.clone())
            .collect();
        assert_eq!(names, ["w1_1", "w1_2", "w1_3", "w2_2", "w2_3", "w3_3"]);
    }

    #[test]
    fn lot_sizing_printed_layout_breaks() {
        let inst = lot(&[0, 2]);
        let h = plan(&inst, &v(&["0.5", "0.5"]), &[(1, 2, qi(1)), (2, 2, qi(1))]);
        let printed = lot_sizing(&inst, &h, LotSizingMode::Printed).unwrap();
        let report = printed.verify();
        assert!(!report.passed());
        let bad = &report.cell_failures[0];
        assert_eq!((bad.start.clone(), bad.end.clone()), (qi(0), q("0.5")));
        let w_sum = bad.heights[inst.w_index(0, 1)].clone() + bad.heights[inst.w_index(1, 1)].clone();
        assert_eq!(w_sum, qi(4));

        let repaired = lot_sizing(&inst, &h, LotSizingMode::Repaired).unwrap();
        support(&repaired);
        assert_eq!(repaired.convex[0], RectSet::block(Base::Unit, qi(0), q("0.5"), qi(1)));
        assert_eq!(repaired.convex[1], RectSet::block(Base::Unit, q("0.5"), qi(1), qi(1)));
    }

    #[test]
    fn lot_sizing_integral_and_mixed() {
        let inst = lot(&[1, 2]);
        let h = plan(&inst, &ints(&[1, 0]), &[(1, 1, qi(1)), (1, 2, qi(2))]);
        for mode in [LotSizingMode::Printed, LotSizingMode::Repaired] {
            assert_eq!(support(&lot_sizing(&inst, &h, mode).unwrap()), vec![(h.clone(), qi(1))]);
        }

        let inst = lot(&[2, 1, 3]);
        let a = plan(&inst, &ints(&[1, 0, 1]), &[(1, 1, qi(2)), (1, 2, qi(1)), (3, 3, qi(3))]);
        let b = plan(&inst, &ints(&[1, 1, 0]), &[(1, 1, qi(2)), (2, 2, qi(1)), (2, 3, qi(3))]);
        let mix: Vec<Q> = a.iter().zip(&b).map(|(x, y)| q("1/3") * x + q("2/3") * y).collect();
        let sup = support(&lot_sizing(&inst, &mix, LotSizingMode::Repaired).unwrap());
        // Patterns are laid out in bitmask order: {1,2} before {1,3}.
        assert_eq!(sup, vec![(b, q("2/3")), (a, q("1/3"))]);
    }

    #[test]
    fn lot_sizing_relaxation_gap() {
        let inst = lot(&[0, 1, 1, 1]);
        let half = q("1/2");
        let h = plan(
            &inst,
            &v(&["1/2", "1/2", "1/2", "0"]),
            &[
                (1, 2, half.clone()),
                (2, 2, half.clone()),
                (2, 3, half.clone()),
                (3, 3, half.clone()),
                (1, 4, half.clone()),
                (3, 4, half),
            ],
        );
        assert!(inst.system().point_in_relaxation(&h));
        let Err(Error::NotInHull { normal, rhs }) = lot_sizing(&inst, &h, LotSizingMode::Repaired) else {
            panic!("expected a separator");
        };
        let sep = Separator {
            normal: normal.iter().map(|s| Q::parse_text(s).unwrap()).collect(),
            rhs: Q::parse_text(&rhs).unwrap(),
        };
        let plans = inst.extreme_plans();
        assert!(plans.iter().all(|p| inst.system().contains(p)));
        assert!(sep.separates(&plans, &[], &h));
    }

    #[test]
    fn incidence_single_edge() {
        let inst = Incidence::new(1, 1, vec![(0, 0, 3)]).unwrap();
        let sup = support(&incidence_tu(&inst, &v(&["1.4", "1.5"])).unwrap());
        assert_eq!(
            sup,
            vec![
                (ints(&[2, 1]), q("0.4")),
                (ints(&[1, 1]), q("0.1")),
                (ints(&[1, 2]), q("0.5"))
            ]
        );
        assert_eq!(
            support(&incidence_tu(&inst, &ints(&[2, 1])).unwrap()),
            vec![(ints(&[2, 1]), qi(1))]
        );
        assert!(incidence_tu(&inst, &v(&["2", "1.5"])).is_err());
    }

    #[test]
    fn interval_matrix_examples() {
        let inst = IntervalMatrix::new(vec![vec![1, 1, 0], vec![0, 1, 1]], vec![2, 2]).unwrap();
        let sup = support(&interval_matrix_tu(&inst, &v(&["0.7", "0.9", "0.6"])).unwrap());
        assert!(sup.iter().all(|(p, _)| p.iter().all(|x| x.is_integer())));
        assert_eq!(
            support(&interval_matrix_tu(&inst, &ints(&[1, 1, 1])).unwrap()),
            vec![(ints(&[1, 1, 1]), qi(1))]
        );

        let gappy = IntervalMatrix::new(vec![vec![1, 0, 1]], vec![1]).unwrap();
        assert!(matches!(
            interval_matrix_tu(&gappy, &ints(&[0, 0, 0])),
            Err(Error::Mode { .. })
        ));
    }

    fn pwl() -> Pwl<Q> {
        Pwl::new(ints(&[0, 1, 2]), ints(&[0, 1, 3])).unwrap()
    }

    #[test]
    fn pwl_multiple_choice() {
        let h = v(&["0.5", "0.5", "1", "0.5", "0.5", "0"]);
        let sup = support(&pwl_mcm(&pwl(), &h).unwrap());
        assert_eq!(
            sup,
            vec![
                (ints(&[0, 0, 1, 1, 0, 0]), q("0.5")),
                (ints(&[1, 1, 1, 0, 1, 0]), q("0.5"))
            ]
        );

        let h = v(&["1.1", "1.4", "1", "0.2", "0.5", "0.3"]);
        for (p, _) in support(&pwl_mcm(&pwl(), &h).unwrap()) {
            assert!(is_sos2(&p[3..]));
        }
        let vertex = ints(&[2, 3, 1, 0, 0, 1]);
        assert_eq!(support(&pwl_mcm(&pwl(), &vertex).unwrap()), vec![(vertex, qi(1))]);
        assert!(pwl_mcm(&pwl(), &v(&["0.4", "0.5", "1", "0.5", "0.5", "0"])).is_err());
        assert!(!is_sos2(&ints(&[1, 0, 1])));
        assert!(Pwl::new(ints(&[0, 2, 1]), ints(&[0, 0, 0])).is_err());
    }

    #[test]
    fn pwl_incremental_cells() {
        let h = v(&["1.5", "2", "1", "1", "0.5", "0.7"]);
        let cert = pwl_incremental(&pwl(), &h).unwrap();
        let sup = support(&cert);
        assert_eq!(
            sup,
            vec![
                (ints(&[2, 3, 1, 1, 1, 1]), q("0.5")),
                (ints(&[1, 1, 1, 1, 0, 1]), q("0.2")),
                (ints(&[1, 1, 1, 1, 0, 0]), q("0.3")),
            ]
        );
        let vertex = ints(&[1, 1, 1, 1, 0, 0]);
        assert_eq!(
            support(&pwl_incremental(&pwl(), &vertex).unwrap()),
            vec![(vertex, qi(1))]
        );
        assert!(pwl_incremental(&pwl(), &v(&["1.5", "2", "1", "1", "0.5", "0.4"])).is_err());
    }
}
