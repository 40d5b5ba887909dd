//! Signed-height rectangle sets over `[0, 1)` or `[0, ∞)`.
//!
//! A rectangle `([a, b), c)` contributes height `c` at every `t ∈ [a, b)`;
//! a set is a finite family of such rectangles with disjoint footprints.

use std::fmt;

use crate::error::{domain, Error, Result};
use crate::interval::{sort_dedup, IntervalSet};
use crate::scalar::Scalar;

/// Base set of a rectangle family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Base {
    /// `[0, 1)`, used for convex parts.
    Unit,
    /// `[0, ∞)`, used for conic parts.
    Ray,
}

impl Base {
    pub fn tag(self) -> &'static str {
        match self {
            Base::Unit => "U",
            Base::Ray => "R+",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        match tag {
            "U" => Some(Base::Unit),
            "R+" => Some(Base::Ray),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Rect<T> {
    pub a: T,
    pub b: T,
    /// Height; never zero inside a [`RectSet`].
    pub c: T,
}

impl<T: Scalar> Rect<T> {
    pub fn new(a: T, b: T, c: T) -> Self {
        Self { a, b, c }
    }

    pub fn width(&self) -> T {
        self.b.clone() - self.a.clone()
    }

    /// Signed area `(b - a) * c`.
    pub fn area(&self) -> T {
        self.width() * self.c.clone()
    }
}

/// Canonical rectangle family: sorted, non-overlapping, non-zero heights,
/// with equal-height neighbours that touch merged into one rectangle.
#[derive(Clone, Debug, PartialEq)]
pub struct RectSet<T> {
    base: Base,
    rects: Vec<Rect<T>>,
}

impl<T: Scalar> RectSet<T> {
    pub fn empty(base: Base) -> Self {
        Self {
            base,
            rects: Vec::new(),
        }
    }

    /// Validates and canonicalises; overlapping footprints are rejected.
    pub fn new(base: Base, rects: impl IntoIterator<Item = Rect<T>>) -> Result<Self> {
        let mut rects: Vec<Rect<T>> = rects.into_iter().collect();
        for r in &rects {
            if r.a >= r.b {
                return Err(domain(format!("degenerate rectangle [{}, {})", r.a, r.b)));
            }
            if r.c.is_zero() {
                return Err(domain(format!("zero-height rectangle on [{}, {})", r.a, r.b)));
            }
            if r.a < T::zero() || (base == Base::Unit && r.b > T::one()) {
                return Err(domain(format!(
                    "rectangle [{}, {}) leaves the base {}",
                    r.a,
                    r.b,
                    base.tag()
                )));
            }
        }
        rects.sort_by(|x, y| x.a.partial_cmp(&y.a).expect("ordered scalars"));
        for w in rects.windows(2) {
            if w[1].a < w[0].b {
                return Err(Error::Overlap {
                    a: w[1].a.to_text(),
                    b: T::min_of(w[0].b.clone(), w[1].b.clone()).to_text(),
                });
            }
        }
        Ok(Self::merged(base, rects))
    }

    fn merged(base: Base, rects: Vec<Rect<T>>) -> Self {
        let mut out: Vec<Rect<T>> = Vec::with_capacity(rects.len());
        for r in rects {
            match out.last_mut() {
                Some(last) if last.b == r.a && last.c == r.c => last.b = r.b,
                _ => out.push(r),
            }
        }
        Self { base, rects: out }
    }

    /// A single block `([a, b), c)`; empty when `a >= b` or `c == 0`.
    pub fn block(base: Base, a: T, b: T, c: T) -> Self {
        if a >= b || c.is_zero() {
            return Self::empty(base);
        }
        Self::new(base, [Rect::new(a, b, c)]).expect("block inside base")
    }

    /// Lifts an interval set to rectangles of a common height.
    pub fn from_intervals(set: &IntervalSet<T>, height: T) -> Self {
        if height.is_zero() {
            return Self::empty(Base::Unit);
        }
        let rects = set
            .pieces()
            .iter()
            .map(|(a, b)| Rect::new(a.clone(), b.clone(), height.clone()))
            .collect();
        Self::merged(Base::Unit, rects)
    }

    pub fn base(&self) -> Base {
        self.base
    }

    pub fn rects(&self) -> &[Rect<T>] {
        &self.rects
    }

    pub fn is_empty(&self) -> bool {
        self.rects.is_empty()
    }

    /// `Σ (b - a) c`.
    pub fn signed_measure(&self) -> T {
        self.rects.iter().fold(T::zero(), |acc, r| acc + r.area())
    }

    /// Height of the active rectangle at `t`, or 0.
    pub fn height_at(&self, t: &T) -> Result<T> {
        if *t < T::zero() || (self.base == Base::Unit && *t >= T::one()) {
            return Err(domain(format!("t = {t} is outside the base {}", self.base.tag())));
        }
        Ok(self.height_unchecked(t))
    }

    pub(crate) fn height_unchecked(&self, t: &T) -> T {
        self.rects
            .iter()
            .find(|r| r.a <= *t && *t < r.b)
            .map(|r| r.c.clone())
            .unwrap_or_else(T::zero)
    }

    /// Pointwise sum of heights; zero regions are dropped.
    pub fn stack_union(&self, other: &Self) -> Result<Self> {
        if self.base != other.base {
            return Err(Error::BaseMismatch);
        }
        let mut cuts: Vec<T> = Vec::new();
        for r in self.rects.iter().chain(other.rects.iter()) {
            cuts.push(r.a.clone());
            cuts.push(r.b.clone());
        }
        sort_dedup(&mut cuts);
        let mut out = Vec::new();
        for w in cuts.windows(2) {
            let c = self.height_unchecked(&w[0]) + other.height_unchecked(&w[0]);
            if !c.is_zero() {
                out.push(Rect::new(w[0].clone(), w[1].clone(), c));
            }
        }
        Ok(Self::merged(self.base, out))
    }

    /// Scales every height by `factor` (zero gives the empty set).
    pub fn scale(&self, factor: &T) -> Self {
        if factor.is_zero() {
            return Self::empty(self.base);
        }
        let rects = self
            .rects
            .iter()
            .map(|r| Rect::new(r.a.clone(), r.b.clone(), r.c.clone() * factor.clone()))
            .collect();
        Self::merged(self.base, rects)
    }

    /// Footprint as an interval set (base `[0, 1)` only).
    pub fn support(&self) -> Result<IntervalSet<T>> {
        if self.base != Base::Unit {
            return Err(Error::BaseMismatch);
        }
        IntervalSet::from_pieces(self.rects.iter().map(|r| (r.a.clone(), r.b.clone())))
    }

    /// Largest right endpoint, or 0 when empty.
    pub fn extent(&self) -> T {
        self.rects.last().map(|r| r.b.clone()).unwrap_or_else(T::zero)
    }
}

impl<T: Scalar> fmt::Display for RectSet<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rects.is_empty() {
            return write!(f, "∅");
        }
        for (k, r) in self.rects.iter().enumerate() {
            if k > 0 {
                write!(f, " ⊕ ")?;
            }
            write!(f, "([{}, {}), {})", r.a, r.b, r.c)?;
        }
        Ok(())
    }
}

/// One cell of a profile with its constant height vector.
#[derive(Clone, Debug, PartialEq)]
pub struct ProfileCell<T> {
    pub start: T,
    /// `None` marks the final unbounded cell over `[0, ∞)`.
    pub end: Option<T>,
    pub heights: Vec<T>,
}

impl<T: Scalar> ProfileCell<T> {
    /// Width of a bounded cell.
    pub fn width(&self) -> Option<T> {
        self.end.as_ref().map(|e| e.clone() - self.start.clone())
    }
}

/// Splits the base at every rectangle endpoint and reports the height
/// vector on each cell (evaluated at the left endpoint).
pub fn profile<T: Scalar>(base: Base, sets: &[RectSet<T>]) -> Result<Vec<ProfileCell<T>>> {
    if sets.iter().any(|s| s.base != base) {
        return Err(Error::BaseMismatch);
    }
    let mut cuts: Vec<T> = vec![T::zero()];
    if base == Base::Unit {
        cuts.push(T::one());
    }
    for s in sets {
        for r in &s.rects {
            cuts.push(r.a.clone());
            cuts.push(r.b.clone());
        }
    }
    sort_dedup(&mut cuts);
    // One cursor per set keeps the sweep linear in the number of rectangles.
    let mut cursor = vec![0usize; sets.len()];
    let mut heights_at = |t: &T| -> Vec<T> {
        sets.iter()
            .zip(cursor.iter_mut())
            .map(|(s, k)| {
                while *k < s.rects.len() && s.rects[*k].b <= *t {
                    *k += 1;
                }
                match s.rects.get(*k) {
                    Some(r) if r.a <= *t => r.c.clone(),
                    _ => T::zero(),
                }
            })
            .collect()
    };
    let mut cells: Vec<ProfileCell<T>> = cuts
        .windows(2)
        .map(|w| ProfileCell {
            start: w[0].clone(),
            end: Some(w[1].clone()),
            heights: heights_at(&w[0]),
        })
        .collect();
    if base == Base::Ray {
        let last = cuts.last().cloned().unwrap_or_else(T::zero);
        cells.push(ProfileCell {
            start: last,
            end: None,
            heights: vec![T::zero(); sets.len()],
        });
    }
    Ok(cells)
}

/// Generalised overlap `Σ_{R1, R2} c1 c2 |footprint(R1) ∩ footprint(R2)|`.
pub fn bilinear_overlap<T: Scalar>(s1: &RectSet<T>, s2: &RectSet<T>) -> Result<T> {
    if s1.base != Base::Unit || s2.base != Base::Unit {
        return Err(Error::BaseMismatch);
    }
    let mut r = T::zero();
    for r1 in &s1.rects {
        for r2 in &s2.rects {
            let lo = T::max_of(r1.a.clone(), r2.a.clone());
            let hi = T::min_of(r1.b.clone(), r2.b.clone());
            if lo < hi {
                r = r + r1.c.clone() * r2.c.clone() * (hi - lo);
            }
        }
    }
    Ok(r)
}
