//! Hull certificates: per-variable sets whose measures equal the target and
//! whose pointwise height vectors stay feasible.
//!
//! [`Certificate::verify`] is the ground truth; [`Certificate::extract`]
//! refuses to decompose anything that does not verify.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lp::{cone_membership, membership, Membership};
use crate::model::{ConstraintSystem, PointFailure};
use crate::rect::{profile, Base, RectSet};
use crate::scalar::Scalar;

/// `Σ λ ξ + Σ η ζ` with positive weights.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvexCombination<T> {
    pub support: Vec<(Vec<T>, T)>,
    pub rays: Vec<(Vec<T>, T)>,
}

impl<T: Scalar> ConvexCombination<T> {
    pub fn dim(&self) -> usize {
        self.support
            .iter()
            .chain(&self.rays)
            .map(|(v, _)| v.len())
            .next()
            .unwrap_or(0)
    }

    /// `Σ λ ξ + Σ η ζ`.
    pub fn reconstruct(&self) -> Vec<T> {
        let mut out = vec![T::zero(); self.dim()];
        for (v, w) in self.support.iter().chain(&self.rays) {
            for (o, x) in out.iter_mut().zip(v) {
                *o = o.clone() + w.clone() * x.clone();
            }
        }
        out
    }

    pub fn total_weight(&self) -> T {
        self.support.iter().fold(T::zero(), |acc, (_, w)| acc + w.clone())
    }

    /// Positive weights, convex weights summing to one, and exact
    /// reconstruction of `target` (within `tol`).
    pub fn is_valid_for(&self, target: &[T], tol: &T) -> bool {
        let near = |a: &T, b: &T| (a.clone() - b.clone()).abs() <= *tol;
        self.support.iter().chain(&self.rays).all(|(_, w)| w.is_positive())
            && near(&self.total_weight(), &T::one())
            && self.reconstruct().len() == target.len()
            && self.reconstruct().iter().zip(target).all(|(a, b)| near(a, b))
    }
}

/// What each convex-part cell must satisfy.
#[derive(Clone, Debug, PartialEq, Default)]
pub enum VerifyMode<T> {
    /// The cell vector lies in `F`: constraints, bounds and integrality.
    #[default]
    Strict,
    /// The cell vector lies in the convex hull of the given points.
    Hull(Vec<Vec<T>>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyOptions<T> {
    pub mode: VerifyMode<T>,
    pub tolerance: T,
}

impl<T: Scalar> Default for VerifyOptions<T> {
    fn default() -> Self {
        Self {
            mode: VerifyMode::Strict,
            tolerance: T::tolerance(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MeasureFailure<T> {
    pub var: usize,
    pub expected: T,
    pub measured: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CellFailure<T> {
    pub start: T,
    pub end: T,
    pub heights: Vec<T>,
    /// Constraint, bound and integrality failures (strict mode); empty in
    /// hull mode, where the cell simply lies outside the hull.
    pub reasons: Vec<PointFailure<T>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyReport<T> {
    pub structure: Vec<String>,
    pub measure_failures: Vec<MeasureFailure<T>>,
    pub cell_failures: Vec<CellFailure<T>>,
    pub conic_failures: Vec<CellFailure<T>>,
    pub cells_checked: usize,
}

impl<T: Scalar> VerifyReport<T> {
    pub fn passed(&self) -> bool {
        self.structure.is_empty()
            && self.measure_failures.is_empty()
            && self.cell_failures.is_empty()
            && self.conic_failures.is_empty()
    }

    /// One line per failure, using the system's variable names.
    pub fn describe(&self, sys: &ConstraintSystem<T>) -> Vec<String> {
        let name = |v: usize| sys.vars.get(v).map_or_else(|| format!("#{v}"), |x| x.name.clone());
        let cell = |kind: &str, c: &CellFailure<T>| {
            let hs: Vec<String> = c.heights.iter().map(|h| h.to_text()).collect();
            let why: Vec<String> = c.reasons.iter().map(|r| sys.describe_failure(r)).collect();
            let why = if why.is_empty() {
                "outside the hull".to_string()
            } else {
                why.join("; ")
            };
            format!(
                "{kind} cell [{}, {}) with heights ({}): {why}",
                c.start.to_text(),
                c.end.to_text(),
                hs.join(", ")
            )
        };
        self.structure
            .iter()
            .cloned()
            .chain(self.measure_failures.iter().map(|m| {
                format!(
                    "measure of {} is {}, expected {}",
                    name(m.var),
                    m.measured.to_text(),
                    m.expected.to_text()
                )
            }))
            .chain(self.cell_failures.iter().map(|c| cell("convex", c)))
            .chain(self.conic_failures.iter().map(|c| cell("conic", c)))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Certificate<T> {
    pub system: ConstraintSystem<T>,
    /// One set per variable over `[0, 1)`.
    pub convex: Vec<RectSet<T>>,
    /// One set per variable over `[0, ∞)`, for polyhedral certificates.
    pub conic: Option<Vec<RectSet<T>>>,
    /// Recession directions the conic cells must be generated by.
    pub rays: Vec<Vec<T>>,
    pub target: Vec<T>,
    /// Free-form provenance (routine, orderings used for tie-breaking, ...).
    pub metadata: BTreeMap<String, String>,
}

impl<T: Scalar> Certificate<T> {
    pub fn new(system: ConstraintSystem<T>, convex: Vec<RectSet<T>>, target: Vec<T>) -> Self {
        Self {
            system,
            convex,
            conic: None,
            rays: Vec::new(),
            target,
            metadata: BTreeMap::new(),
        }
    }

    pub fn with_meta(mut self, key: &str, value: impl Into<String>) -> Self {
        self.metadata.insert(key.to_string(), value.into());
        self
    }

    pub fn with_conic(mut self, conic: Vec<RectSet<T>>, rays: Vec<Vec<T>>) -> Self {
        self.conic = Some(conic);
        self.rays = rays;
        self
    }

    pub fn verify(&self) -> VerifyReport<T> {
        self.verify_with(&VerifyOptions::default())
    }

    pub fn verify_with(&self, opts: &VerifyOptions<T>) -> VerifyReport<T> {
        let mut report = VerifyReport {
            structure: Vec::new(),
            measure_failures: Vec::new(),
            cell_failures: Vec::new(),
            conic_failures: Vec::new(),
            cells_checked: 0,
        };
        let n = self.system.dim();
        let mut shape_ok = true;
        for (what, len) in [("convex sets", self.convex.len()), ("target", self.target.len())]
            .into_iter()
            .chain(self.conic.as_ref().map(|c| ("conic sets", c.len())))
        {
            if len != n {
                report
                    .structure
                    .push(format!("{what}: expected {n} entries, found {len}"));
                shape_ok = false;
            }
        }
        if self.convex.iter().any(|s| s.base() != Base::Unit) {
            report.structure.push("convex sets must live on [0, 1)".into());
            shape_ok = false;
        }
        if let Some(conic) = &self.conic {
            if conic.iter().any(|s| s.base() != Base::Ray) {
                report.structure.push("conic sets must live on [0, ∞)".into());
                shape_ok = false;
            }
        }
        if self.rays.iter().any(|r| r.len() != n) {
            report.structure.push(format!("rays must have {n} entries"));
            shape_ok = false;
        }
        if !shape_ok {
            return report;
        }

        let tol = &opts.tolerance;
        for var in 0..n {
            let mut measured = self.convex[var].signed_measure();
            if let Some(conic) = &self.conic {
                measured = measured + conic[var].signed_measure();
            }
            if (measured.clone() - self.target[var].clone()).abs() > *tol {
                report.measure_failures.push(MeasureFailure {
                    var,
                    expected: self.target[var].clone(),
                    measured,
                });
            }
        }

        let cells = profile(Base::Unit, &self.convex).expect("bases checked above");
        report.cells_checked = cells.len();
        report.cell_failures = cells
            .into_par_iter()
            .filter_map(|cell| {
                let reasons = match &opts.mode {
                    VerifyMode::Strict => self
                        .system
                        .failures(&cell.heights, true, tol)
                        .expect("dimension checked above"),
                    VerifyMode::Hull(points) => match membership(points, &[], &cell.heights) {
                        Ok(Membership::Inside(_)) => Vec::new(),
                        _ => return Some(failure(cell.start, cell.end, cell.heights, Vec::new())),
                    },
                };
                (!reasons.is_empty()).then(|| failure(cell.start, cell.end, cell.heights, reasons))
            })
            .collect();

        if let Some(conic) = &self.conic {
            let cells = profile(Base::Ray, conic).expect("bases checked above");
            report.cells_checked += cells.len();
            report.conic_failures = cells
                .into_par_iter()
                .filter(|c| c.end.is_some() && c.heights.iter().any(|h| !h.is_zero()))
                .filter_map(|cell| {
                    let inside = cone_membership(&self.rays, &cell.heights).is_ok_and(|m| m.is_inside());
                    (!inside).then(|| failure(cell.start, cell.end, cell.heights, Vec::new()))
                })
                .collect();
        }
        report
    }

    /// Groups cells by height vector: each distinct vector `ξ` gets weight
    /// equal to the total width of its cells. Conic cells give rays the same
    /// way. Fails unless the certificate verifies.
    pub fn extract(&self) -> Result<ConvexCombination<T>> {
        self.extract_with(&VerifyOptions::default())
    }

    pub fn extract_with(&self, opts: &VerifyOptions<T>) -> Result<ConvexCombination<T>> {
        let report = self.verify_with(opts);
        if !report.passed() {
            let lines = report.describe(&self.system);
            return Err(Error::NotVerified(lines.join("; ")));
        }
        let cells = profile(Base::Unit, &self.convex)?;
        let support = group(cells.into_iter().map(|c| (c.width().expect("bounded"), c.heights)));
        let rays = match &self.conic {
            Some(conic) => group(
                profile(Base::Ray, conic)?
                    .into_iter()
                    .filter(|c| c.end.is_some() && c.heights.iter().any(|h| !h.is_zero()))
                    .map(|c| (c.width().expect("bounded"), c.heights)),
            ),
            None => Vec::new(),
        };
        Ok(ConvexCombination { support, rays })
    }
}

fn failure<T>(start: T, end: Option<T>, heights: Vec<T>, reasons: Vec<PointFailure<T>>) -> CellFailure<T> {
    CellFailure {
        start,
        end: end.expect("only bounded cells are checked"),
        heights,
        reasons,
    }
}

/// Sums widths per distinct vector, in order of first appearance.
fn group<T: Scalar>(cells: impl Iterator<Item = (T, Vec<T>)>) -> Vec<(Vec<T>, T)> {
    let mut out: Vec<(Vec<T>, T)> = Vec::new();
    for (w, v) in cells {
        if w.is_zero() {
            continue;
        }
        match out.iter_mut().find(|(u, _)| *u == v) {
            Some((_, total)) => *total = total.clone() + w,
            None => out.push((v, w)),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Sense, VarKind};
    use crate::scalar::{q, qi, Q};

    fn v(s: &[&str]) -> Vec<Q> {
        s.iter().map(|x| q(x)).collect()
    }

    fn block(a: &str, b: &str) -> RectSet<Q> {
        RectSet::block(Base::Unit, q(a), q(b), qi(1))
    }

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

    fn example_certificate(target: &[&str]) -> Certificate<Q> {
        Certificate::new(
            mccormick(),
            vec![block("0", "0.5"), block("0.3", "1"), block("0.3", "0.5")],
            v(target),
        )
    }

    #[test]
    fn mccormick_certificate_verifies_and_decomposes() {
        let cert = example_certificate(&["0.5", "0.7", "0.2"]);
        assert!(cert.verify().passed());
        let comb = cert.extract().unwrap();
        assert_eq!(
            comb.support,
            vec![
                (v(&["1", "0", "0"]), q("0.3")),
                (v(&["1", "1", "1"]), q("0.2")),
                (v(&["0", "1", "0"]), q("0.5")),
            ]
        );
        assert_eq!(comb.reconstruct(), v(&["0.5", "0.7", "0.2"]));
        assert!(comb.is_valid_for(&cert.target, &qi(0)));
    }

    #[test]
    fn wrong_target_fails_on_measure() {
        let cert = example_certificate(&["0.5", "0.7", "0.3"]);
        let report = cert.verify();
        assert_eq!(
            report.measure_failures,
            vec![MeasureFailure {
                var: 2,
                expected: q("0.3"),
                measured: q("0.2")
            }]
        );
        assert!(report.cell_failures.is_empty());
        assert!(matches!(cert.extract(), Err(Error::NotVerified(_))));
    }

    #[test]
    fn infeasible_cell_is_reported() {
        let cert = Certificate::new(
            mccormick(),
            vec![block("0", "0.5"), block("0.3", "1"), block("0.2", "0.5")],
            v(&["0.5", "0.7", "0.3"]),
        );
        let report = cert.verify();
        assert_eq!(report.cell_failures.len(), 1);
        assert_eq!(report.cell_failures[0].start, q("0.2"));
        assert!(report.describe(&cert.system)[0].contains("z - y <= 0"));
    }

    #[test]
    fn full_width_point_has_single_weight() {
        let cert = Certificate::new(
            mccormick(),
            vec![block("0", "1"), block("0", "1"), block("0", "1")],
            v(&["1", "1", "1"]),
        );
        let comb = cert.extract().unwrap();
        assert_eq!(comb.support, vec![(v(&["1", "1", "1"]), qi(1))]);
    }

    #[test]
    fn hull_mode_accepts_interior_columns() {
        let mut s = ConstraintSystem::<Q>::new();
        let a = s.add_var("a", VarKind::Integer);
        let b = s.add_var("b", VarKind::Integer);
        s.add_linear(vec![(a, qi(1)), (b, qi(1))], Sense::Le, qi(2));
        let half = |lo: &str, hi: &str| RectSet::block(Base::Unit, q(lo), q(hi), q("1/2"));
        let cert = Certificate::new(s, vec![half("0", "1"), half("0", "1")], v(&["1/2", "1/2"]));
        assert!(!cert.verify().passed());
        let vertices = cert.system.enumerate_feasible(&[(0, 2), (0, 2)], 100).unwrap();
        let opts = VerifyOptions {
            mode: VerifyMode::Hull(vertices),
            tolerance: qi(0),
        };
        assert!(cert.verify_with(&opts).passed());
        let comb = cert.extract_with(&opts).unwrap();
        assert_eq!(comb.support, vec![(v(&["1/2", "1/2"]), qi(1))]);
    }

    #[test]
    fn conic_cells_must_lie_in_the_cone() {
        let mut s = ConstraintSystem::<Q>::new();
        s.add_var("a", VarKind::Integer);
        s.add_var("b", VarKind::Integer);
        let ray = |a: &str, b: &str, c: &str| RectSet::block(Base::Ray, q(a), q(b), q(c));
        let empty = RectSet::empty(Base::Unit);
        let cert = Certificate::new(s.clone(), vec![empty.clone(), empty.clone()], v(&["2", "1"])).with_conic(
            vec![ray("0", "2", "1"), ray("0", "1", "1")],
            vec![v(&["1", "1"]), v(&["1", "0"])],
        );
        assert!(cert.verify().passed());
        let comb = cert.extract().unwrap();
        assert_eq!(comb.rays, vec![(v(&["1", "1"]), qi(1)), (v(&["1", "0"]), qi(1))]);
        assert_eq!(comb.reconstruct(), v(&["2", "1"]));

        let bad = Certificate::new(s, vec![empty.clone(), empty], v(&["0", "1"])).with_conic(
            vec![RectSet::empty(Base::Ray), ray("0", "1", "1")],
            vec![v(&["1", "0"])],
        );
        assert_eq!(bad.verify().conic_failures.len(), 1);
    }

    #[test]
    fn shape_errors_are_reported() {
        let cert = Certificate::new(mccormick(), vec![block("0", "1")], v(&["1", "1", "1"]));
        assert!(!cert.verify().structure.is_empty());
    }
}
