//! Declarative feasible sets: variables, integrality, bounds and constraints.
//!
//! A [`ConstraintSystem`] describes the integer (or mixed) set `F` and, with
//! integrality dropped, its relaxation `H`. Evaluating the constraints on the
//! height vector of every profile cell is how set characterizations are
//! checked.

use std::collections::HashMap;
use std::fmt;

use crate::error::{domain, Error, Result};
use crate::rect::{profile, Base, RectSet};
use crate::scalar::Scalar;

/// Default cap on the number of box points visited by enumeration.
pub const DEFAULT_ENUMERATION_CAP: u128 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

impl Sense {
    pub fn symbol(self) -> &'static str {
        match self {
            Sense::Le => "<=",
            Sense::Eq => "=",
            Sense::Ge => ">=",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Self> {
        match s {
            "<=" | "≤" => Some(Sense::Le),
            "=" | "==" => Some(Sense::Eq),
            ">=" | "≥" => Some(Sense::Ge),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VarKind {
    Binary,
    Integer,
    Continuous,
}

impl VarKind {
    pub fn is_integral(self) -> bool {
        !matches!(self, VarKind::Continuous)
    }

    pub fn name(self) -> &'static str {
        match self {
            VarKind::Binary => "binary",
            VarKind::Integer => "integer",
            VarKind::Continuous => "continuous",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "binary" => Some(VarKind::Binary),
            "integer" => Some(VarKind::Integer),
            "continuous" => Some(VarKind::Continuous),
            _ => None,
        }
    }
}

/// `(coefficients, sense, right-hand side)`.
pub type LinearRow<T> = (Vec<(usize, T)>, Sense, T);

#[derive(Clone, Debug, PartialEq)]
pub enum Constraint<T> {
    /// `Σ coeffs · x  (sense)  rhs`.
    Linear {
        coeffs: Vec<(usize, T)>,
        sense: Sense,
        rhs: T,
    },
    /// `x_i · x_j = x_k`.
    Product { i: usize, j: usize, k: usize },
    /// `Σ (x_v - center_v)^2  (sense)  radius^2`, sense `=` or `<=`.
    Ball {
        vars: Vec<usize>,
        center: Vec<T>,
        radius: T,
        sense: Sense,
    },
}

/// Outcome of evaluating one constraint at a point.
#[derive(Clone, Debug, PartialEq)]
pub enum Evaluation<T> {
    Satisfied,
    /// `slack` is the signed amount by which the constraint fails
    /// (`lhs - rhs` for `<=` and `=`, `rhs - lhs` for `>=`).
    Violated {
        slack: T,
    },
}

impl<T> Evaluation<T> {
    pub fn is_satisfied(&self) -> bool {
        matches!(self, Evaluation::Satisfied)
    }
}

impl<T: Scalar> Constraint<T> {
    pub fn linear(coeffs: Vec<(usize, T)>, sense: Sense, rhs: T) -> Self {
        Constraint::Linear { coeffs, sense, rhs }
    }

    pub fn variables(&self) -> Vec<usize> {
        match self {
            Constraint::Linear { coeffs, .. } => coeffs.iter().map(|(v, _)| *v).collect(),
            Constraint::Product { i, j, k } => vec![*i, *j, *k],
            Constraint::Ball { vars, .. } => vars.clone(),
        }
    }

    pub fn is_linear(&self) -> bool {
        matches!(self, Constraint::Linear { .. })
    }

    /// Signed residual: the left side minus the right side of the
    /// constraint written as `lhs (sense) rhs`.
    pub fn residual(&self, point: &[T]) -> T {
        match self {
            Constraint::Linear { coeffs, rhs, .. } => {
                let lhs = coeffs
                    .iter()
                    .fold(T::zero(), |acc, (v, a)| acc + a.clone() * point[*v].clone());
                lhs - rhs.clone()
            }
            Constraint::Product { i, j, k } => point[*i].clone() * point[*j].clone() - point[*k].clone(),
            Constraint::Ball {
                vars, center, radius, ..
            } => {
                let s = vars.iter().zip(center).fold(T::zero(), |acc, (v, c)| {
                    let d = point[*v].clone() - c.clone();
                    acc + d.clone() * d
                });
                s - radius.clone() * radius.clone()
            }
        }
    }

    fn sense(&self) -> Sense {
        match self {
            Constraint::Linear { sense, .. } | Constraint::Ball { sense, .. } => *sense,
            Constraint::Product { .. } => Sense::Eq,
        }
    }

    /// Exact (or tolerance-based, for float scalars) satisfaction check.
    pub fn evaluate(&self, point: &[T]) -> Evaluation<T> {
        self.evaluate_with(point, &T::tolerance())
    }

    pub fn evaluate_with(&self, point: &[T], tol: &T) -> Evaluation<T> {
        let r = self.residual(point);
        let ok = match self.sense() {
            Sense::Le => r <= *tol,
            Sense::Ge => r >= -tol.clone(),
            Sense::Eq => r.abs() <= *tol,
        };
        if ok {
            Evaluation::Satisfied
        } else if self.sense() == Sense::Ge {
            Evaluation::Violated { slack: -r }
        } else {
            Evaluation::Violated { slack: r }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Variable<T> {
    pub name: String,
    pub kind: VarKind,
    pub lower: Option<T>,
    pub upper: Option<T>,
}

/// Why a point fails membership.
#[derive(Clone, Debug, PartialEq)]
pub enum PointFailure<T> {
    Constraint { index: usize, slack: T },
    Integrality { var: usize },
    Bound { var: usize },
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct ConstraintSystem<T> {
    pub vars: Vec<Variable<T>>,
    pub constraints: Vec<Constraint<T>>,
}

impl<T: Scalar> ConstraintSystem<T> {
    pub fn new() -> Self {
        Self {
            vars: Vec::new(),
            constraints: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.vars.len()
    }

    /// Adds a variable; binaries get bounds `[0, 1]`, others `[0, ∞)`.
    pub fn add_var(&mut self, name: impl Into<String>, kind: VarKind) -> usize {
        let upper = (kind == VarKind::Binary).then(T::one);
        self.vars.push(Variable {
            name: name.into(),
            kind,
            lower: Some(T::zero()),
            upper,
        });
        self.vars.len() - 1
    }

    pub fn set_bounds(&mut self, var: usize, lower: Option<T>, upper: Option<T>) {
        self.vars[var].lower = lower;
        self.vars[var].upper = upper;
    }

    pub fn add(&mut self, c: Constraint<T>) -> Result<()> {
        if let Some(&bad) = c.variables().iter().find(|&&v| v >= self.vars.len()) {
            return Err(Error::UnknownVariable(format!("#{bad}")));
        }
        if let Constraint::Linear { coeffs, .. } = &c {
            if coeffs.is_empty() {
                return Err(domain("linear constraint without coefficients"));
            }
        }
        if let Constraint::Ball { vars, center, .. } = &c {
            if vars.len() != center.len() {
                return Err(Error::DimensionMismatch {
                    expected: vars.len(),
                    got: center.len(),
                });
            }
        }
        self.constraints.push(c);
        Ok(())
    }

    /// Convenience for `Σ coeffs · x (sense) rhs` with small integer data.
    pub fn add_linear(&mut self, coeffs: Vec<(usize, T)>, sense: Sense, rhs: T) {
        self.add(Constraint::linear(coeffs, sense, rhs))
            .expect("variables declared before use");
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    pub fn names(&self) -> Vec<String> {
        self.vars.iter().map(|v| v.name.clone()).collect()
    }

    fn check_dim(&self, point: &[T]) -> Result<()> {
        if point.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: point.len(),
            });
        }
        Ok(())
    }

    /// Every failure of `point`, using tolerance `tol`.
    pub fn failures(&self, point: &[T], integrality: bool, tol: &T) -> Result<Vec<PointFailure<T>>> {
        self.check_dim(point)?;
        let mut out = Vec::new();
        for (var, (v, x)) in self.vars.iter().zip(point).enumerate() {
            let below = v.lower.as_ref().is_some_and(|l| *x < l.clone() - tol.clone());
            let above = v.upper.as_ref().is_some_and(|u| *x > u.clone() + tol.clone());
            if below || above {
                out.push(PointFailure::Bound { var });
            }
            if integrality && v.kind.is_integral() && !is_integral_tol(x, tol) {
                out.push(PointFailure::Integrality { var });
            }
        }
        for (index, c) in self.constraints.iter().enumerate() {
            if let Evaluation::Violated { slack } = c.evaluate_with(point, tol) {
                out.push(PointFailure::Constraint { index, slack });
            }
        }
        Ok(out)
    }

    /// Membership in `F` (integrality enforced).
    pub fn contains(&self, point: &[T]) -> bool {
        self.failures(point, true, &T::tolerance()).is_ok_and(|f| f.is_empty())
    }

    /// Membership in the relaxation (integrality dropped).
    pub fn point_in_relaxation(&self, h: &[T]) -> bool {
        self.failures(h, false, &T::tolerance()).is_ok_and(|f| f.is_empty())
    }

    /// A human-readable description of the first relaxation failure.
    pub fn describe_relaxation_failure(&self, h: &[T]) -> Option<String> {
        let fails = match self.failures(h, false, &T::tolerance()) {
            Ok(f) => f,
            Err(e) => return Some(e.to_string()),
        };
        fails.first().map(|f| self.describe_failure(f))
    }

    pub fn describe_failure(&self, f: &PointFailure<T>) -> String {
        match f {
            PointFailure::Bound { var } => format!("bound on {}", self.vars[*var].name),
            PointFailure::Integrality { var } => {
                format!("integrality of {}", self.vars[*var].name)
            }
            PointFailure::Constraint { index, slack } => format!(
                "constraint #{index} ({}) violated by {slack}",
                DisplayConstraint(self, &self.constraints[*index])
            ),
        }
    }

    /// Enumeration ranges from bounds, or from `<=` rows with nonnegative
    /// coefficients over nonnegative variables when an upper bound is missing.
    pub fn default_box(&self) -> Result<Vec<(i64, i64)>> {
        let mut out = Vec::with_capacity(self.dim());
        for (idx, v) in self.vars.iter().enumerate() {
            let lo = v
                .lower
                .as_ref()
                .ok_or_else(|| Error::UnboundedVariable(v.name.clone()))?;
            let mut hi = v.upper.clone();
            if hi.is_none() && !lo.is_negative() {
                for c in &self.constraints {
                    if let Constraint::Linear {
                        coeffs,
                        sense: Sense::Le,
                        rhs,
                    } = c
                    {
                        let own = coeffs.iter().find(|(w, _)| *w == idx).map(|(_, a)| a);
                        let all_nonneg = coeffs.iter().all(|(w, a)| {
                            !a.is_negative() && self.vars[*w].lower.as_ref().is_some_and(|l| !l.is_negative())
                        });
                        if let Some(a) = own.filter(|a| a.is_positive()) {
                            if all_nonneg {
                                let cand = rhs.clone() / a.clone();
                                hi = Some(match hi {
                                    Some(h) => T::min_of(h, cand),
                                    None => cand,
                                });
                            }
                        }
                    }
                }
            }
            let hi = hi.ok_or_else(|| Error::UnboundedVariable(v.name.clone()))?;
            out.push((ceil_i64(lo), hi.floor().to_f64() as i64));
        }
        Ok(out)
    }

    /// All integer points of `ranges` satisfying bounds and constraints, in
    /// lexicographic order. Constraints are checked as soon as all their
    /// variables are fixed, which prunes the search.
    pub fn enumerate_feasible(&self, ranges: &[(i64, i64)], cap: u128) -> Result<Vec<Vec<T>>> {
        if ranges.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: ranges.len(),
            });
        }
        let size = ranges
            .iter()
            .fold(1u128, |acc, (lo, hi)| acc.saturating_mul((hi - lo + 1).max(0) as u128));
        if size > cap {
            return Err(Error::EnumerationTooLarge { size, cap });
        }
        // Constraints become checkable at the position of their last variable.
        let mut ready: Vec<Vec<usize>> = vec![Vec::new(); self.dim()];
        for (k, c) in self.constraints.iter().enumerate() {
            let last = c.variables().into_iter().max().unwrap_or(0);
            if self.dim() > 0 {
                ready[last].push(k);
            }
        }
        let mut out = Vec::new();
        let mut point: Vec<T> = vec![T::zero(); self.dim()];
        self.enumerate_rec(0, ranges, &ready, &mut point, &mut out);
        Ok(out)
    }

    fn enumerate_rec(
        &self,
        depth: usize,
        ranges: &[(i64, i64)],
        ready: &[Vec<usize>],
        point: &mut Vec<T>,
        out: &mut Vec<Vec<T>>,
    ) {
        if depth == self.dim() {
            out.push(point.clone());
            return;
        }
        let v = &self.vars[depth];
        for value in ranges[depth].0..=ranges[depth].1 {
            let x = T::from_i64(value);
            if v.lower.as_ref().is_some_and(|l| x < *l) || v.upper.as_ref().is_some_and(|u| x > *u) {
                continue;
            }
            point[depth] = x;
            let ok = ready[depth]
                .iter()
                .all(|&k| self.constraints[k].evaluate(point).is_satisfied());
            if ok {
                self.enumerate_rec(depth + 1, ranges, ready, point, out);
            }
        }
    }

    /// Linear rows of the system (non-linear constraints are skipped).
    pub fn linear_rows(&self) -> Vec<LinearRow<T>> {
        self.constraints
            .iter()
            .filter_map(|c| match c {
                Constraint::Linear { coeffs, sense, rhs } => Some((coeffs.clone(), *sense, rhs.clone())),
                _ => None,
            })
            .collect()
    }

    pub fn is_linear(&self) -> bool {
        self.constraints.iter().all(Constraint::is_linear)
    }

    /// Evaluates every constraint, bound and integrality requirement on every
    /// cell of the profile of `sets` (one set per variable, base `[0, 1)`).
    pub fn characterization_report(&self, sets: &[RectSet<T>]) -> Result<CharacterizationReport<T>> {
        self.characterization_report_with(sets, &T::tolerance())
    }

    pub fn characterization_report_with(&self, sets: &[RectSet<T>], tol: &T) -> Result<CharacterizationReport<T>> {
        if sets.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: sets.len(),
            });
        }
        let mut cells = Vec::new();
        for cell in profile(Base::Unit, sets)? {
            let failures = self.failures(&cell.heights, true, tol)?;
            cells.push(CellCheck {
                start: cell.start,
                end: cell.end.expect("unit base cells are bounded"),
                heights: cell.heights,
                failures,
            });
        }
        Ok(CharacterizationReport { cells })
    }
}

fn ceil_i64<T: Scalar>(v: &T) -> i64 {
    crate::scalar::ceil(v).to_f64() as i64
}

fn is_integral_tol<T: Scalar>(x: &T, tol: &T) -> bool {
    let f = x.floor();
    (x.clone() - f.clone()) <= *tol || (f + T::one() - x.clone()) <= *tol
}

/// Per-cell result of [`ConstraintSystem::characterization_report`].
#[derive(Clone, Debug, PartialEq)]
pub struct CellCheck<T> {
    pub start: T,
    pub end: T,
    pub heights: Vec<T>,
    pub failures: Vec<PointFailure<T>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CharacterizationReport<T> {
    pub cells: Vec<CellCheck<T>>,
}

impl<T: Scalar> CharacterizationReport<T> {
    pub fn passed(&self) -> bool {
        self.cells.iter().all(|c| c.failures.is_empty())
    }

    pub fn failing_cells(&self) -> impl Iterator<Item = &CellCheck<T>> {
        self.cells.iter().filter(|c| !c.failures.is_empty())
    }
}

/// `Display` adaptor that prints a constraint with variable names.
pub struct DisplayConstraint<'a, T>(pub &'a ConstraintSystem<T>, pub &'a Constraint<T>);

impl<T: Scalar> fmt::Display for DisplayConstraint<'_, T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = |v: &usize| self.0.vars[*v].name.as_str();
        match self.1 {
            Constraint::Linear { coeffs, sense, rhs } => {
                for (k, (v, a)) in coeffs.iter().enumerate() {
                    let sign = match (k, a.is_negative()) {
                        (0, true) => "-",
                        (0, false) => "",
                        (_, true) => " - ",
                        (_, false) => " + ",
                    };
                    let mag = a.abs();
                    if mag.is_one() {
                        write!(f, "{sign}{}", name(v))?;
                    } else {
                        write!(f, "{sign}{mag}·{}", name(v))?;
                    }
                }
                write!(f, " {} {rhs}", sense.symbol())
            }
            Constraint::Product { i, j, k } => {
                write!(f, "{}·{} = {}", name(i), name(j), name(k))
            }
            Constraint::Ball {
                vars,
                center,
                radius,
                sense,
            } => {
                for (k, (v, c)) in vars.iter().zip(center).enumerate() {
                    if k > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "({} - {c})^2", name(v))?;
                }
                write!(f, " {} {radius}^2", sense.symbol())
            }
        }
    }
}

/// Name → index map (for parsers).
pub fn index_by_name<T>(sys: &ConstraintSystem<T>) -> HashMap<&str, usize> {
    sys.vars.iter().enumerate().map(|(k, v)| (v.name.as_str(), k)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rect::Rect;
    use crate::scalar::{q, qi, Q};

    /// x, y, z binary with the linearised product rows.
    fn mccormick() -> ConstraintSystem<Q> {
        let mut s = ConstraintSystem::new();
        let x = s.add_var("x", VarKind::Binary);
        let y = s.add_var("y", VarKind::Binary);
        let z = s.add_var("z", VarKind::Binary);
        s.add_linear(vec![(z, qi(1)), (x, qi(-1))], Sense::Le, qi(0));
        s.add_linear(vec![(z, qi(1)), (y, qi(-1))], Sense::Le, qi(0));
        s.add_linear(vec![(x, qi(1)), (y, qi(1)), (z, qi(-1))], Sense::Le, qi(1));
        s
    }

    fn pt(v: &[&str]) -> Vec<Q> {
        v.iter().map(|s| q(s)).collect()
    }

    #[test]
    fn evaluate_examples() {
        let row = Constraint::linear(vec![(0, qi(1)), (1, qi(1)), (2, qi(-1))], Sense::Le, qi(1));
        assert!(row.evaluate(&pt(&["1", "1", "1"])).is_satisfied());
        let prod = Constraint::<Q>::Product { i: 0, j: 1, k: 2 };
        assert_eq!(
            prod.evaluate(&pt(&["1", "1", "0"])),
            Evaluation::Violated { slack: qi(1) }
        );
        let ge = Constraint::linear(vec![(0, qi(1))], Sense::Ge, qi(2));
        assert_eq!(ge.evaluate(&pt(&["1/2"])), Evaluation::Violated { slack: q("3/2") });
    }

    #[test]
    fn ball_within_tolerance_in_decimal_mode() {
        let ball = Constraint::Ball {
            vars: vec![0, 1],
            center: vec![1.0f64, 1.0],
            radius: 1.0,
            sense: Sense::Eq,
        };
        let v1 = 1.0 - (1.0f64 - 0.81).sqrt();
        assert!(ball.evaluate(&[v1, 1.9]).is_satisfied());
        assert!(!ball.evaluate(&[0.5, 1.9]).is_satisfied());
    }

    #[test]
    fn relaxation_examples() {
        let s = mccormick();
        assert!(s.point_in_relaxation(&pt(&["0.5", "0.7", "0.2"])));
        assert!(!s.point_in_relaxation(&pt(&["0", "1", "1"])));
        assert!(s
            .describe_relaxation_failure(&pt(&["0", "1", "1"]))
            .unwrap()
            .contains("z - x"));
        assert!(s.failures(&pt(&["0"]), true, &qi(0)).is_err());
    }

    #[test]
    fn simplex_point_in_relaxation() {
        let mut s = ConstraintSystem::<Q>::new();
        let v: Vec<usize> = (0..3).map(|i| s.add_var(format!("x{i}"), VarKind::Integer)).collect();
        s.add_linear(v.iter().map(|&i| (i, qi(1))).collect(), Sense::Le, qi(4));
        assert!(s.point_in_relaxation(&pt(&["1", "1.5", "0.8"])));
        assert!(!s.contains(&pt(&["1", "1.5", "0.8"])));
        assert_eq!(s.default_box().unwrap(), vec![(0, 4); 3]);
    }

    #[test]
    fn enumeration_examples() {
        let pts = mccormick()
            .enumerate_feasible(&[(0, 1); 3], DEFAULT_ENUMERATION_CAP)
            .unwrap();
        assert_eq!(
            pts,
            vec![
                pt(&["0", "0", "0"]),
                pt(&["0", "1", "0"]),
                pt(&["1", "0", "0"]),
                pt(&["1", "1", "1"])
            ]
        );
        let mut free = ConstraintSystem::<Q>::new();
        free.add_var("a", VarKind::Binary);
        free.add_var("b", VarKind::Binary);
        assert_eq!(free.enumerate_feasible(&[(0, 1); 2], 100).unwrap().len(), 4);
        let mut simplex = ConstraintSystem::<Q>::new();
        let a = simplex.add_var("a", VarKind::Integer);
        let b = simplex.add_var("b", VarKind::Integer);
        simplex.add_linear(vec![(a, qi(1)), (b, qi(1))], Sense::Le, qi(2));
        assert_eq!(simplex.enumerate_feasible(&[(0, 2); 2], 100).unwrap().len(), 6);
        assert!(matches!(
            simplex.enumerate_feasible(&[(0, 2); 2], 8),
            Err(Error::EnumerationTooLarge { size: 9, cap: 8 })
        ));
    }

    #[test]
    fn enumerated_points_satisfy_constraints() {
        let s = mccormick();
        for p in s.enumerate_feasible(&[(0, 1); 3], 100).unwrap() {
            assert!(s.contains(&p));
        }
    }

    fn unit(a: &str, b: &str) -> RectSet<Q> {
        RectSet::block(Base::Unit, q(a), q(b), qi(1))
    }

    fn product_system() -> ConstraintSystem<Q> {
        let mut s = ConstraintSystem::new();
        for n in ["x", "y", "z"] {
            s.add_var(n, VarKind::Binary);
        }
        s.add(Constraint::Product { i: 0, j: 1, k: 2 }).unwrap();
        s
    }

    #[test]
    fn characterization_examples() {
        let s = product_system();
        let good = [unit("0", "0.5"), unit("0.3", "1"), unit("0.3", "0.5")];
        assert!(s.characterization_report(&good).unwrap().passed());
        let wide = [unit("0", "0.5"), unit("0.3", "1"), unit("0.2", "0.5")];
        let rep = s.characterization_report(&wide).unwrap();
        let bad: Vec<_> = rep.failing_cells().collect();
        assert_eq!(bad.len(), 1);
        assert_eq!((bad[0].start.clone(), bad[0].end.clone()), (q("0.2"), q("0.3")));
        assert!(matches!(bad[0].failures[0], PointFailure::Constraint { index: 0, .. }));
        let empty = vec![RectSet::empty(Base::Unit); 3];
        assert!(s.characterization_report(&empty).unwrap().passed());
    }

    #[test]
    fn integrality_is_checked_per_cell() {
        let s = product_system();
        let half = RectSet::new(Base::Unit, [Rect::new(q("0"), q("1"), q("1/2"))]).unwrap();
        let rep = s
            .characterization_report(&[half, RectSet::empty(Base::Unit), RectSet::empty(Base::Unit)])
            .unwrap();
        assert!(rep.cells[0].failures.contains(&PointFailure::Integrality { var: 0 }));
    }

    #[test]
    fn display_uses_names() {
        let s = mccormick();
        assert_eq!(DisplayConstraint(&s, &s.constraints[2]).to_string(), "x + y - z <= 1");
    }
}
