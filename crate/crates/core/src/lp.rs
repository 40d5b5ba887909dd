//! Exact linear programming.
//!
//! A dense two-phase simplex with Bland's rule (so it terminates on
//! degenerate problems), an augmenting-path transportation solver, and the
//! hull-membership oracle built on top of them. Over [`Q`](crate::Q) every
//! pivot is exact, so infeasibility multipliers verify by substitution.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::VecDeque;

use crate::certificate::ConvexCombination;
use crate::error::{domain, Error, Result};
use crate::model::{ConstraintSystem, Sense};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Minimize,
    Maximize,
    Feasibility,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Row<T> {
    pub coeffs: Vec<(usize, T)>,
    pub sense: Sense,
    pub rhs: T,
}

/// `optimize objective · x` subject to rows and per-variable bounds.
/// Variables default to `[0, ∞)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearProgram<T> {
    pub direction: Direction,
    pub objective: Vec<(usize, T)>,
    pub rows: Vec<Row<T>>,
    pub lower: Vec<Option<T>>,
    pub upper: Vec<Option<T>>,
}

impl<T: Scalar> LinearProgram<T> {
    pub fn new(num_vars: usize) -> Self {
        Self {
            direction: Direction::Feasibility,
            objective: Vec::new(),
            rows: Vec::new(),
            lower: vec![Some(T::zero()); num_vars],
            upper: vec![None; num_vars],
        }
    }

    /// The linear rows and bounds of `sys` (non-linear constraints dropped).
    pub fn from_system(sys: &ConstraintSystem<T>) -> Self {
        let mut lp = Self::new(sys.dim());
        for (k, v) in sys.vars.iter().enumerate() {
            lp.set_bounds(k, v.lower.clone(), v.upper.clone());
        }
        for (coeffs, sense, rhs) in sys.linear_rows() {
            lp.add_row(coeffs, sense, rhs);
        }
        lp
    }

    pub fn num_vars(&self) -> usize {
        self.lower.len()
    }

    pub fn add_row(&mut self, coeffs: Vec<(usize, T)>, sense: Sense, rhs: T) -> &mut Self {
        self.rows.push(Row { coeffs, sense, rhs });
        self
    }

    pub fn set_bounds(&mut self, var: usize, lower: Option<T>, upper: Option<T>) -> &mut Self {
        self.lower[var] = lower;
        self.upper[var] = upper;
        self
    }

    pub fn minimize(&mut self, objective: Vec<(usize, T)>) -> &mut Self {
        self.direction = Direction::Minimize;
        self.objective = objective;
        self
    }

    pub fn maximize(&mut self, objective: Vec<(usize, T)>) -> &mut Self {
        self.direction = Direction::Maximize;
        self.objective = objective;
        self
    }

    fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        if self.upper.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: self.upper.len(),
            });
        }
        let refs = self
            .rows
            .iter()
            .flat_map(|r| r.coeffs.iter())
            .chain(self.objective.iter());
        for (v, _) in refs {
            if *v >= n {
                return Err(Error::UnknownVariable(format!("#{v}")));
            }
        }
        Ok(())
    }

    /// `objective · x`.
    pub fn value_at(&self, x: &[T]) -> T {
        dot(&self.objective, x)
    }

    /// Whether `x` satisfies every row and bound within tolerance.
    pub fn is_feasible(&self, x: &[T]) -> bool {
        let bounds_ok = (0..self.num_vars()).all(|j| {
            self.lower[j].as_ref().is_none_or(|l| l.le_tol(&x[j]))
                && self.upper[j].as_ref().is_none_or(|u| x[j].le_tol(u))
        });
        bounds_ok
            && self.rows.iter().all(|r| {
                let lhs = dot(&r.coeffs, x);
                match r.sense {
                    Sense::Le => lhs.le_tol(&r.rhs),
                    Sense::Ge => r.rhs.le_tol(&lhs),
                    Sense::Eq => lhs.near(&r.rhs),
                }
            })
    }
}

fn dot<T: Scalar>(coeffs: &[(usize, T)], x: &[T]) -> T {
    coeffs
        .iter()
        .fold(T::zero(), |acc, (v, a)| acc + a.clone() * x[*v].clone())
}

/// Row multipliers proving that a linear program has no feasible point.
///
/// Sign convention: `y_i ≥ 0` on `<=` rows, `y_i ≤ 0` on `>=` rows, free on
/// `=` rows. With `g = Σ y_i a_i` and `β = Σ y_i b_i`, every feasible `x`
/// satisfies `g·x ≤ β`, while the certificate guarantees `g·x > β` on the
/// whole bound box.
#[derive(Clone, Debug, PartialEq)]
pub struct FarkasCertificate<T> {
    pub multipliers: Vec<T>,
}

impl<T: Scalar> FarkasCertificate<T> {
    /// Checks the alternative system by substitution.
    pub fn verifies(&self, lp: &LinearProgram<T>) -> bool {
        if self.multipliers.len() != lp.rows.len() {
            return false;
        }
        let n = lp.num_vars();
        let empty_box = (0..n).any(|j| match (&lp.lower[j], &lp.upper[j]) {
            (Some(l), Some(u)) => (l.clone() - u.clone()).is_pos(),
            _ => false,
        });
        if empty_box {
            return true;
        }
        let mut g = vec![T::zero(); n];
        let mut beta = T::zero();
        for (y, row) in self.multipliers.iter().zip(&lp.rows) {
            let sign_ok = match row.sense {
                Sense::Le => !y.is_neg(),
                Sense::Ge => !y.is_pos(),
                Sense::Eq => true,
            };
            if !sign_ok {
                return false;
            }
            for (v, a) in &row.coeffs {
                g[*v] = g[*v].clone() + y.clone() * a.clone();
            }
            beta = beta + y.clone() * row.rhs.clone();
        }
        let mut min = T::zero();
        for (j, gj) in g.iter().enumerate() {
            if gj.near_zero() {
                continue;
            }
            let bound = if gj.is_positive() { &lp.lower[j] } else { &lp.upper[j] };
            match bound {
                Some(b) => min = min + gj.clone() * b.clone(),
                None => return false,
            }
        }
        (min - beta).is_pos()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome<T> {
    Optimal {
        point: Vec<T>,
        value: T,
    },
    Infeasible(FarkasCertificate<T>),
    /// `point` is feasible and the objective improves without bound along `ray`.
    Unbounded {
        point: Vec<T>,
        ray: Vec<T>,
    },
}

impl<T> LpOutcome<T> {
    pub fn point(&self) -> Option<&[T]> {
        match self {
            LpOutcome::Optimal { point, .. } | LpOutcome::Unbounded { point, .. } => Some(point),
            LpOutcome::Infeasible(_) => None,
        }
    }
}

/// Pivoting options. `order_seed` permutes the column order Bland's rule
/// uses, giving an independent pivot path for cross-checks.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SolveOptions {
    pub order_seed: Option<u64>,
}

pub fn solve<T: Scalar>(lp: &LinearProgram<T>) -> Result<LpOutcome<T>> {
    solve_with(lp, SolveOptions::default())
}

pub fn solve_with<T: Scalar>(lp: &LinearProgram<T>, opts: SolveOptions) -> Result<LpOutcome<T>> {
    lp.validate()?;
    StandardForm::build(lp).run(lp, opts)
}

/// How an original variable maps onto nonnegative standard-form columns.
#[derive(Clone, Debug)]
enum VarMap<T> {
    /// `x = shift + z_col`.
    Shift { col: usize, shift: T },
    /// `x = ub - z_col`.
    Mirror { col: usize, ub: T },
    /// `x = z_pos - z_neg`.
    Split { pos: usize, neg: usize },
}

struct StandardForm<T> {
    /// Dense constraint matrix, one row per equality (after slacks).
    a: Vec<Vec<T>>,
    b: Vec<T>,
    cost: Vec<T>,
    maps: Vec<VarMap<T>>,
    /// Row index of each original row (upper-bound rows follow them).
    flips: Vec<bool>,
    /// Column that starts basic in each row.
    initial: Vec<usize>,
    artificial_from: usize,
    num_original_rows: usize,
}

impl<T: Scalar> StandardForm<T> {
    fn build(lp: &LinearProgram<T>) -> Self {
        let mut maps = Vec::with_capacity(lp.num_vars());
        let mut ncols = 0usize;
        let mut extra_rows: Vec<(usize, T)> = Vec::new();
        for j in 0..lp.num_vars() {
            match (&lp.lower[j], &lp.upper[j]) {
                (Some(l), u) => {
                    maps.push(VarMap::Shift {
                        col: ncols,
                        shift: l.clone(),
                    });
                    if let Some(u) = u {
                        extra_rows.push((ncols, u.clone() - l.clone()));
                    }
                    ncols += 1;
                }
                (None, Some(u)) => {
                    maps.push(VarMap::Mirror {
                        col: ncols,
                        ub: u.clone(),
                    });
                    ncols += 1;
                }
                (None, None) => {
                    maps.push(VarMap::Split {
                        pos: ncols,
                        neg: ncols + 1,
                    });
                    ncols += 2;
                }
            }
        }
        let structural = ncols;

        // Rows over structural columns, with the right-hand side adjusted for shifts.
        let mut rows: Vec<(Vec<T>, Sense, T)> = Vec::new();
        for r in &lp.rows {
            let mut dense = vec![T::zero(); structural];
            let mut rhs = r.rhs.clone();
            for (v, a) in &r.coeffs {
                match &maps[*v] {
                    VarMap::Shift { col, shift } => {
                        dense[*col] = dense[*col].clone() + a.clone();
                        rhs = rhs - a.clone() * shift.clone();
                    }
                    VarMap::Mirror { col, ub } => {
                        dense[*col] = dense[*col].clone() - a.clone();
                        rhs = rhs - a.clone() * ub.clone();
                    }
                    VarMap::Split { pos, neg } => {
                        dense[*pos] = dense[*pos].clone() + a.clone();
                        dense[*neg] = dense[*neg].clone() - a.clone();
                    }
                }
            }
            rows.push((dense, r.sense, rhs));
        }
        for (col, cap) in extra_rows {
            let mut dense = vec![T::zero(); structural];
            dense[col] = T::one();
            rows.push((dense, Sense::Le, cap));
        }

        let m = rows.len();
        let slack_count = rows.iter().filter(|r| r.1 != Sense::Eq).count();
        let mut a: Vec<Vec<T>> = Vec::with_capacity(m);
        let mut b = Vec::with_capacity(m);
        let mut flips = Vec::with_capacity(m);
        let mut slack_col = structural;
        let mut slack_of_row = vec![None; m];
        for (i, (dense, sense, rhs)) in rows.into_iter().enumerate() {
            let mut full = dense;
            full.resize(structural + slack_count, T::zero());
            match sense {
                Sense::Le => {
                    full[slack_col] = T::one();
                    slack_of_row[i] = Some(slack_col);
                    slack_col += 1;
                }
                Sense::Ge => {
                    full[slack_col] = -T::one();
                    slack_of_row[i] = Some(slack_col);
                    slack_col += 1;
                }
                Sense::Eq => {}
            }
            let flip = rhs.is_negative();
            if flip {
                full.iter_mut().for_each(|v| *v = -v.clone());
            }
            b.push(if flip { -rhs } else { rhs });
            flips.push(flip);
            a.push(full);
        }

        // Identity columns: slacks with coefficient +1 after flipping, else artificials.
        let artificial_from = structural + slack_count;
        let mut initial = Vec::with_capacity(m);
        let mut next_art = artificial_from;
        let mut art_rows = Vec::new();
        for i in 0..m {
            match slack_of_row[i] {
                Some(s) if a[i][s].is_one() => initial.push(s),
                _ => {
                    initial.push(next_art);
                    art_rows.push(i);
                    next_art += 1;
                }
            }
        }
        let total = next_art;
        for row in a.iter_mut() {
            row.resize(total, T::zero());
        }
        for (k, &i) in art_rows.iter().enumerate() {
            a[i][artificial_from + k] = T::one();
        }

        let mut cost = vec![T::zero(); total];
        let sign = if lp.direction == Direction::Maximize {
            -T::one()
        } else {
            T::one()
        };
        if lp.direction != Direction::Feasibility {
            for (v, c) in &lp.objective {
                let c = sign.clone() * c.clone();
                match &maps[*v] {
                    VarMap::Shift { col, .. } => cost[*col] = cost[*col].clone() + c,
                    VarMap::Mirror { col, .. } => cost[*col] = cost[*col].clone() - c,
                    VarMap::Split { pos, neg } => {
                        cost[*pos] = cost[*pos].clone() + c.clone();
                        cost[*neg] = cost[*neg].clone() - c;
                    }
                }
            }
        }

        Self {
            a,
            b,
            cost,
            maps,
            flips,
            initial,
            artificial_from,
            num_original_rows: lp.rows.len(),
        }
    }

    fn run(self, lp: &LinearProgram<T>, opts: SolveOptions) -> Result<LpOutcome<T>> {
        let total = self.cost.len();
        let mut rank: Vec<usize> = (0..total).collect();
        if let Some(seed) = opts.order_seed {
            let mut order: Vec<usize> = (0..total).collect();
            order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
            for (pos, col) in order.into_iter().enumerate() {
                rank[col] = pos;
            }
        }
        let mut tab = Tableau {
            a: self.a.clone(),
            b: self.b.clone(),
            basis: self.initial.clone(),
            rank,
        };

        // Phase 1: minimize the sum of artificials.
        let phase1: Vec<T> = (0..total)
            .map(|j| if j >= self.artificial_from { T::one() } else { T::zero() })
            .collect();
        if total > self.artificial_from {
            let all = |_: usize| true;
            match tab.optimize(&phase1, all) {
                Pivot::Optimal => {}
                Pivot::Unbounded(_) => unreachable!("phase one is bounded below by zero"),
            }
            let infeas = tab.objective(&phase1);
            if infeas.is_pos() {
                return Ok(LpOutcome::Infeasible(self.farkas(&tab, &phase1)));
            }
            tab.drive_out_artificials(self.artificial_from);
        }

        let allowed = |j: usize| j < self.artificial_from;
        match tab.optimize(&self.cost, allowed) {
            Pivot::Optimal => {
                let point = self.to_original(&tab.primal(total), false);
                let value = lp.value_at(&point);
                Ok(LpOutcome::Optimal { point, value })
            }
            Pivot::Unbounded(col) => {
                let point = self.to_original(&tab.primal(total), false);
                let mut dir = vec![T::zero(); total];
                dir[col] = T::one();
                for (i, &bv) in tab.basis.iter().enumerate() {
                    dir[bv] = -tab.a[i][col].clone();
                }
                let ray = self.to_original(&dir, true);
                Ok(LpOutcome::Unbounded { point, ray })
            }
        }
    }

    /// Phase-one dual values mapped back to the original rows.
    fn farkas(&self, tab: &Tableau<T>, phase1: &[T]) -> FarkasCertificate<T> {
        let duals: Vec<T> = self
            .initial
            .iter()
            .map(|&col| phase1[col].clone() - tab.reduced_cost(phase1, col))
            .collect();
        let multipliers = (0..self.num_original_rows)
            .map(|i| {
                if self.flips[i] {
                    duals[i].clone()
                } else {
                    -duals[i].clone()
                }
            })
            .collect();
        FarkasCertificate { multipliers }
    }

    fn to_original(&self, z: &[T], direction: bool) -> Vec<T> {
        self.maps
            .iter()
            .map(|m| match m {
                VarMap::Shift { col, shift } => {
                    if direction {
                        z[*col].clone()
                    } else {
                        shift.clone() + z[*col].clone()
                    }
                }
                VarMap::Mirror { col, ub } => {
                    if direction {
                        -z[*col].clone()
                    } else {
                        ub.clone() - z[*col].clone()
                    }
                }
                VarMap::Split { pos, neg } => z[*pos].clone() - z[*neg].clone(),
            })
            .collect()
    }
}

enum Pivot {
    Optimal,
    Unbounded(usize),
}

/// Tableau kept in canonical form with respect to `basis`.
struct Tableau<T> {
    a: Vec<Vec<T>>,
    b: Vec<T>,
    basis: Vec<usize>,
    /// Position of each column in Bland's order.
    rank: Vec<usize>,
}

impl<T: Scalar> Tableau<T> {
    fn reduced_cost(&self, cost: &[T], col: usize) -> T {
        self.basis.iter().enumerate().fold(cost[col].clone(), |acc, (i, &bv)| {
            acc - cost[bv].clone() * self.a[i][col].clone()
        })
    }

    fn objective(&self, cost: &[T]) -> T {
        self.basis
            .iter()
            .zip(&self.b)
            .fold(T::zero(), |acc, (&bv, bi)| acc + cost[bv].clone() * bi.clone())
    }

    fn primal(&self, total: usize) -> Vec<T> {
        let mut z = vec![T::zero(); total];
        for (i, &bv) in self.basis.iter().enumerate() {
            z[bv] = self.b[i].clone();
        }
        z
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.a[row][col].clone();
        for v in self.a[row].iter_mut() {
            *v = v.clone() / p.clone();
        }
        self.b[row] = self.b[row].clone() / p;
        let pivot_row = self.a[row].clone();
        let pivot_rhs = self.b[row].clone();
        for i in 0..self.a.len() {
            if i == row {
                continue;
            }
            let f = self.a[i][col].clone();
            if f.is_zero() {
                continue;
            }
            for (v, pv) in self.a[i].iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v = v.clone() - f.clone() * pv.clone();
                }
            }
            self.b[i] = self.b[i].clone() - f * pivot_rhs.clone();
            if !T::EXACT {
                self.a[i][col] = T::zero();
                if self.b[i].near_zero() {
                    self.b[i] = T::zero();
                }
            }
        }
        self.basis[row] = col;
    }

    /// Primal simplex with Bland's rule over the columns accepted by `eligible`.
    fn optimize(&mut self, cost: &[T], eligible: impl Fn(usize) -> bool) -> Pivot {
        loop {
            let entering = (0..cost.len())
                .filter(|&j| eligible(j) && !self.basis.contains(&j))
                .filter(|&j| self.reduced_cost(cost, j).is_neg())
                .min_by_key(|&j| self.rank[j]);
            let Some(col) = entering else {
                return Pivot::Optimal;
            };
            let mut leave: Option<(usize, T)> = None;
            for i in 0..self.a.len() {
                let aij = &self.a[i][col];
                if !aij.is_pos() {
                    continue;
                }
                let ratio = self.b[i].clone() / aij.clone();
                let better = match &leave {
                    None => true,
                    Some((k, best)) => {
                        ratio < *best || (ratio.near(best) && self.rank[self.basis[i]] < self.rank[self.basis[*k]])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                None => return Pivot::Unbounded(col),
                Some((row, _)) => self.pivot(row, col),
            }
        }
    }

    /// Pivots zero-level artificials out of the basis where a real column can
    /// replace them; rows where none can are redundant and left alone.
    fn drive_out_artificials(&mut self, artificial_from: usize) {
        for i in 0..self.basis.len() {
            if self.basis[i] < artificial_from {
                continue;
            }
            let replacement = (0..artificial_from)
                .filter(|j| !self.basis.contains(j))
                .find(|&j| !self.a[i][j].near_zero());
            if let Some(j) = replacement {
                self.pivot(i, j);
            }
        }
    }
}

/// Outcome of [`transportation_feasible`].
#[derive(Clone, Debug, PartialEq)]
pub enum Transport<T> {
    /// Flow on each allowed pair, in the order the pairs were given.
    Flow(Vec<T>),
    /// A set of rows `W` and columns outside `N(W)` with no allowed pair
    /// between them, whose total marginal exceeds the total mass.
    Infeasible(StableCut<T>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct StableCut<T> {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub weight: T,
}

/// Finds `x ≥ 0` on `allowed` cells with the given row and column sums, by
/// shortest augmenting paths.
pub fn transportation_feasible<T: Scalar>(
    row_marginals: &[T],
    col_marginals: &[T],
    allowed: &[(usize, usize)],
) -> Result<Transport<T>> {
    let total: T = row_marginals.iter().cloned().fold(T::zero(), |a, b| a + b);
    let col_total: T = col_marginals.iter().cloned().fold(T::zero(), |a, b| a + b);
    if !total.near(&col_total) {
        return Err(domain(format!(
            "marginal sums differ: rows {total}, columns {col_total}"
        )));
    }
    if row_marginals.iter().chain(col_marginals).any(|v| v.is_neg()) {
        return Err(domain("negative marginal"));
    }
    let (nr, nc) = (row_marginals.len(), col_marginals.len());
    if let Some(&(r, c)) = allowed.iter().find(|(r, c)| *r >= nr || *c >= nc) {
        return Err(domain(format!("allowed pair ({r}, {c}) out of range")));
    }

    // Nodes: 0 source, 1..=nr rows, then columns, then sink.
    let source = 0;
    let sink = nr + nc + 1;
    let mut net = Network::new(nr + nc + 2);
    for (i, r) in row_marginals.iter().enumerate() {
        net.add_edge(source, 1 + i, r.clone());
    }
    let infinite = total.clone() + T::one();
    let pair_edges: Vec<usize> = allowed
        .iter()
        .map(|&(r, c)| net.add_edge(1 + r, 1 + nr + c, infinite.clone()))
        .collect();
    for (j, c) in col_marginals.iter().enumerate() {
        net.add_edge(1 + nr + j, sink, c.clone());
    }
    let flow = net.max_flow(source, sink);

    if flow.near(&total) {
        return Ok(Transport::Flow(pair_edges.into_iter().map(|e| net.flow(e)).collect()));
    }
    let reach = net.reachable(source);
    let rows: Vec<usize> = (0..nr).filter(|&i| reach[1 + i]).collect();
    let mut neighbours = vec![false; nc];
    for &(r, c) in allowed {
        if reach[1 + r] {
            neighbours[c] = true;
        }
    }
    let cols: Vec<usize> = (0..nc).filter(|&j| !neighbours[j]).collect();
    let weight = rows
        .iter()
        .map(|&i| row_marginals[i].clone())
        .chain(cols.iter().map(|&j| col_marginals[j].clone()))
        .fold(T::zero(), |a, b| a + b);
    Ok(Transport::Infeasible(StableCut { rows, cols, weight }))
}

struct Edge<T> {
    to: usize,
    cap: T,
    original: T,
}

/// Residual network for Edmonds–Karp; edge `2k` is forward, `2k+1` its reverse.
struct Network<T> {
    edges: Vec<Edge<T>>,
    adj: Vec<Vec<usize>>,
}

impl<T: Scalar> Network<T> {
    fn new(n: usize) -> Self {
        Self {
            edges: Vec::new(),
            adj: vec![Vec::new(); n],
        }
    }

    fn add_edge(&mut self, from: usize, to: usize, cap: T) -> usize {
        let id = self.edges.len();
        self.edges.push(Edge {
            to,
            cap: cap.clone(),
            original: cap,
        });
        self.edges.push(Edge {
            to: from,
            cap: T::zero(),
            original: T::zero(),
        });
        self.adj[from].push(id);
        self.adj[to].push(id + 1);
        id
    }

    fn flow(&self, id: usize) -> T {
        self.edges[id].original.clone() - self.edges[id].cap.clone()
    }

    fn bfs(&self, source: usize) -> Vec<Option<usize>> {
        let mut via = vec![None; self.adj.len()];
        let mut seen = vec![false; self.adj.len()];
        seen[source] = true;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for &e in &self.adj[u] {
                let v = self.edges[e].to;
                if !seen[v] && self.edges[e].cap.is_pos() {
                    seen[v] = true;
                    via[v] = Some(e);
                    queue.push_back(v);
                }
            }
        }
        via
    }

    fn reachable(&self, source: usize) -> Vec<bool> {
        let via = self.bfs(source);
        (0..self.adj.len()).map(|v| v == source || via[v].is_some()).collect()
    }

    fn max_flow(&mut self, source: usize, sink: usize) -> T {
        let mut total = T::zero();
        loop {
            let via = self.bfs(source);
            if via[sink].is_none() {
                return total;
            }
            let mut path = Vec::new();
            let mut v = sink;
            while v != source {
                let e = via[v].expect("path back to source");
                path.push(e);
                v = self.edges[e ^ 1].to;
            }
            let push = path
                .iter()
                .map(|&e| self.edges[e].cap.clone())
                .reduce(T::min_of)
                .expect("non-empty path");
            for &e in &path {
                self.edges[e].cap = self.edges[e].cap.clone() - push.clone();
                self.edges[e ^ 1].cap = self.edges[e ^ 1].cap.clone() + push.clone();
            }
            total = total + push;
        }
    }
}

/// A valid inequality `normal · x ≤ rhs` for the hull that `h` violates.
#[derive(Clone, Debug, PartialEq)]
pub struct Separator<T> {
    pub normal: Vec<T>,
    pub rhs: T,
}

impl<T: Scalar> Separator<T> {
    pub fn value(&self, x: &[T]) -> T {
        self.normal
            .iter()
            .zip(x)
            .fold(T::zero(), |acc, (a, v)| acc + a.clone() * v.clone())
    }

    /// Whether every point satisfies the inequality, every ray is a
    /// non-increasing direction, and `h` violates it.
    pub fn separates(&self, points: &[Vec<T>], rays: &[Vec<T>], h: &[T]) -> bool {
        points.iter().all(|p| self.value(p).le_tol(&self.rhs))
            && rays.iter().all(|r| self.value(r).le_tol(&T::zero()))
            && (self.value(h) - self.rhs.clone()).is_pos()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Membership<T> {
    Inside(ConvexCombination<T>),
    Outside(Separator<T>),
}

impl<T> Membership<T> {
    pub fn is_inside(&self) -> bool {
        matches!(self, Membership::Inside(_))
    }
}

/// Decides `h ∈ conv(points) + cone(rays)` exactly.
pub fn membership<T: Scalar>(points: &[Vec<T>], rays: &[Vec<T>], h: &[T]) -> Result<Membership<T>> {
    membership_with(points, rays, h, SolveOptions::default())
}

pub fn membership_with<T: Scalar>(
    points: &[Vec<T>],
    rays: &[Vec<T>],
    h: &[T],
    opts: SolveOptions,
) -> Result<Membership<T>> {
    if points.is_empty() {
        return Err(domain("membership needs at least one point"));
    }
    combination_lp(points, rays, h, true, opts)
}

/// Decides `h ∈ cone(rays)`; the combination has no convex part.
pub fn cone_membership<T: Scalar>(rays: &[Vec<T>], h: &[T]) -> Result<Membership<T>> {
    combination_lp(&[], rays, h, false, SolveOptions::default())
}

fn combination_lp<T: Scalar>(
    points: &[Vec<T>],
    rays: &[Vec<T>],
    h: &[T],
    convex: bool,
    opts: SolveOptions,
) -> Result<Membership<T>> {
    let d = h.len();
    if let Some(bad) = points.iter().chain(rays).find(|v| v.len() != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: bad.len(),
        });
    }
    let (np, nr) = (points.len(), rays.len());
    let mut lp = LinearProgram::new(np + nr);
    if convex {
        lp.add_row((0..np).map(|k| (k, T::one())).collect(), Sense::Eq, T::one());
    }
    for i in 0..d {
        let coeffs = points
            .iter()
            .chain(rays)
            .enumerate()
            .filter(|(_, v)| !v[i].is_zero())
            .map(|(k, v)| (k, v[i].clone()))
            .collect();
        lp.add_row(coeffs, Sense::Eq, h[i].clone());
    }
    match solve_with(&lp, opts)? {
        LpOutcome::Optimal { point, .. } => {
            let support = point[..np]
                .iter()
                .enumerate()
                .filter(|(_, w)| w.is_pos())
                .map(|(k, w)| (points[k].clone(), w.clone()))
                .collect();
            let rays = point[np..]
                .iter()
                .enumerate()
                .filter(|(_, w)| w.is_pos())
                .map(|(k, w)| (rays[k].clone(), w.clone()))
                .collect();
            Ok(Membership::Inside(ConvexCombination { support, rays }))
        }
        LpOutcome::Infeasible(cert) => {
            let offset = usize::from(convex);
            let normal = cert.multipliers[offset..].iter().map(|y| -y.clone()).collect();
            let rhs = if convex { cert.multipliers[0].clone() } else { T::zero() };
            Ok(Membership::Outside(Separator { normal, rhs }))
        }
        LpOutcome::Unbounded { .. } => unreachable!("feasibility problems are never unbounded"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qi, Q};

    fn v(s: &[&str]) -> Vec<Q> {
        s.iter().map(|x| q(x)).collect()
    }

    fn mccormick_points() -> Vec<Vec<Q>> {
        vec![
            v(&["0", "0", "0"]),
            v(&["1", "0", "0"]),
            v(&["0", "1", "0"]),
            v(&["1", "1", "1"]),
        ]
    }

    #[test]
    fn single_equality() {
        let mut lp = LinearProgram::<Q>::new(1);
        lp.minimize(vec![]).add_row(vec![(0, qi(1))], Sense::Eq, qi(1));
        assert_eq!(
            solve(&lp).unwrap(),
            LpOutcome::Optimal {
                point: vec![qi(1)],
                value: qi(0)
            }
        );
    }

    #[test]
    fn contradictory_rows_give_unit_multipliers() {
        let mut lp = LinearProgram::<Q>::new(1);
        lp.set_bounds(0, None, None);
        lp.add_row(vec![(0, qi(1))], Sense::Le, qi(-1));
        lp.add_row(vec![(0, qi(-1))], Sense::Le, qi(0));
        let LpOutcome::Infeasible(cert) = solve(&lp).unwrap() else {
            panic!("expected infeasible")
        };
        assert_eq!(cert.multipliers, vec![qi(1), qi(1)]);
        assert!(cert.verifies(&lp));
    }

    #[test]
    fn bounded_variable_infeasibility_verifies() {
        let mut lp = LinearProgram::<Q>::new(2);
        lp.set_bounds(0, Some(qi(0)), Some(qi(1)));
        lp.set_bounds(1, None, Some(qi(2)));
        lp.add_row(vec![(0, qi(1)), (1, qi(1))], Sense::Ge, qi(4));
        let LpOutcome::Infeasible(cert) = solve(&lp).unwrap() else {
            panic!("expected infeasible")
        };
        assert!(cert.verifies(&lp));
        assert!(!FarkasCertificate {
            multipliers: vec![qi(1)]
        }
        .verifies(&lp));
    }

    #[test]
    fn optimum_and_unbounded_ray() {
        let mut lp = LinearProgram::<Q>::new(2);
        lp.maximize(vec![(0, qi(1)), (1, qi(1))]);
        lp.add_row(vec![(0, qi(1)), (1, qi(2))], Sense::Le, qi(4));
        lp.add_row(vec![(0, qi(3)), (1, qi(1))], Sense::Le, qi(6));
        let LpOutcome::Optimal { point, value } = solve(&lp).unwrap() else {
            panic!()
        };
        assert_eq!(point, v(&["8/5", "6/5"]));
        assert_eq!(value, q("14/5"));

        let mut open = LinearProgram::<Q>::new(2);
        open.maximize(vec![(0, qi(1))]);
        open.add_row(vec![(0, qi(1)), (1, qi(-1))], Sense::Le, qi(1));
        let LpOutcome::Unbounded { point, ray } = solve(&open).unwrap() else {
            panic!()
        };
        assert!(open.is_feasible(&point));
        assert!(ray[0] > qi(0));
        assert!(ray[0].clone() - ray[1].clone() <= qi(0));
    }

    #[test]
    fn negative_lower_bounds_and_free_variables() {
        let mut lp = LinearProgram::<Q>::new(2);
        lp.set_bounds(0, Some(qi(-3)), Some(qi(5)));
        lp.set_bounds(1, None, None);
        lp.minimize(vec![(0, qi(1)), (1, qi(1))]);
        lp.add_row(vec![(1, qi(1)), (0, qi(-1))], Sense::Ge, qi(-2));
        lp.add_row(vec![(1, qi(1))], Sense::Ge, qi(-7));
        let LpOutcome::Optimal { point, value } = solve(&lp).unwrap() else {
            panic!()
        };
        assert_eq!(value, qi(-8));
        assert!(lp.is_feasible(&point));
    }

    #[test]
    fn degenerate_problem_terminates_under_every_order() {
        // A classic cycling example for the largest-coefficient rule.
        let mut lp = LinearProgram::<Q>::new(4);
        lp.maximize(v(&["3/4", "-20", "1/2", "-6"]).into_iter().enumerate().collect());
        lp.add_row(
            v(&["1/4", "-8", "-1", "9"]).into_iter().enumerate().collect(),
            Sense::Le,
            qi(0),
        );
        lp.add_row(
            v(&["1/2", "-12", "-1/2", "3"]).into_iter().enumerate().collect(),
            Sense::Le,
            qi(0),
        );
        lp.add_row(vec![(2, qi(1))], Sense::Le, qi(1));
        for seed in 0..8 {
            let out = solve_with(&lp, SolveOptions { order_seed: Some(seed) }).unwrap();
            let LpOutcome::Optimal { value, .. } = out else {
                panic!()
            };
            assert_eq!(value, q("5/4"));
        }
    }

    #[test]
    fn transportation_outer_product() {
        let h = v(&["0.5", "0.5"]);
        let all = [(0, 0), (0, 1), (1, 0), (1, 1)];
        let Transport::Flow(flow) = transportation_feasible(&h, &h, &all).unwrap() else {
            panic!()
        };
        assert_eq!(flow.iter().cloned().sum::<Q>(), qi(1));
        // Same marginals as a general LP: the outer product is feasible.
        let mut lp = LinearProgram::<Q>::new(4);
        for (i, hi) in h.iter().enumerate() {
            lp.add_row(vec![(2 * i, qi(1)), (2 * i + 1, qi(1))], Sense::Eq, hi.clone());
            lp.add_row(vec![(i, qi(1)), (2 + i, qi(1))], Sense::Eq, hi.clone());
        }
        assert!(lp.is_feasible(&v(&["0.25", "0.25", "0.25", "0.25"])));
        assert!(matches!(solve(&lp).unwrap(), LpOutcome::Optimal { .. }));
    }

    #[test]
    fn transportation_examples() {
        let Transport::Flow(flow) = transportation_feasible(&[qi(1)], &v(&["0.4", "0.6"]), &[(0, 0), (0, 1)]).unwrap()
        else {
            panic!()
        };
        assert_eq!(flow, v(&["0.4", "0.6"]));

        let h = v(&["0.5", "0.5"]);
        let Transport::Flow(diag) = transportation_feasible(&h, &h, &[(0, 0), (1, 1)]).unwrap() else {
            panic!()
        };
        assert_eq!(diag, h);

        let Transport::Infeasible(cut) = transportation_feasible(&h, &h, &[(0, 0)]).unwrap() else {
            panic!()
        };
        assert_eq!(cut.rows, vec![1]);
        assert_eq!(cut.cols, vec![0, 1]);
        assert!(cut.weight > qi(1));
        assert!(transportation_feasible(&h, &[qi(1), qi(1)], &[]).is_err());
    }

    #[test]
    fn membership_examples() {
        let pts = mccormick_points();
        let Membership::Inside(comb) = membership(&pts, &[], &v(&["0.5", "0.7", "0.2"])).unwrap() else {
            panic!()
        };
        assert_eq!(comb.reconstruct(), v(&["0.5", "0.7", "0.2"]));

        let h = v(&["1", "1", "0"]);
        let Membership::Outside(sep) = membership(&pts, &[], &h).unwrap() else {
            panic!()
        };
        assert!(sep.separates(&pts, &[], &h));
        // The named inequality z >= x + y - 1 separates as well.
        let named = Separator {
            normal: v(&["1", "1", "-1"]),
            rhs: qi(1),
        };
        assert!(named.separates(&pts, &[], &h));

        let Membership::Inside(one) = membership(&pts, &[], &pts[3]).unwrap() else {
            panic!()
        };
        assert_eq!(one.support, vec![(pts[3].clone(), qi(1))]);
        assert!(membership::<Q>(&[], &[], &h).is_err());
    }

    #[test]
    fn cone_membership_decides_rays() {
        let rays = vec![v(&["1", "0"]), v(&["1", "1"])];
        assert!(cone_membership(&rays, &v(&["3", "1"])).unwrap().is_inside());
        let Membership::Outside(sep) = cone_membership(&rays, &v(&["0", "1"])).unwrap() else {
            panic!()
        };
        assert_eq!(sep.rhs, qi(0));
        assert!(sep.separates(&[], &rays, &v(&["0", "1"])));
    }

    #[test]
    fn float_solver_agrees() {
        let mut lp = LinearProgram::<f64>::new(2);
        lp.maximize(vec![(0, 1.0), (1, 1.0)]);
        lp.add_row(vec![(0, 1.0), (1, 2.0)], Sense::Le, 4.0);
        lp.add_row(vec![(0, 3.0), (1, 1.0)], Sense::Le, 6.0);
        let LpOutcome::Optimal { value, .. } = solve(&lp).unwrap() else {
            panic!()
        };
        assert!((value - 2.8).abs() < 1e-12);
    }
}
