//! Finite unions of half-open subintervals of `[0, 1)`.

use std::fmt;

use crate::error::{domain, Error, Result};
use crate::scalar::Scalar;

/// Disjoint, sorted, maximal half-open pieces `[a, b)` with `0 <= a < b <= 1`.
///
/// Every constructor and operation returns the canonical form, so two sets
/// are equal iff their piece lists are equal.
#[derive(Clone, Debug, PartialEq)]
pub struct IntervalSet<T> {
    pieces: Vec<(T, T)>,
}

impl<T: Scalar> Default for IntervalSet<T> {
    fn default() -> Self {
        Self::empty()
    }
}

impl<T: Scalar> IntervalSet<T> {
    pub fn empty() -> Self {
        Self { pieces: Vec::new() }
    }

    /// The base set `[0, 1)`.
    pub fn full() -> Self {
        Self {
            pieces: vec![(T::zero(), T::one())],
        }
    }

    /// `[a, b)`, or the empty set when `a >= b`. Panics outside `[0, 1]`.
    pub fn span(a: T, b: T) -> Self {
        assert!(a >= T::zero() && b <= T::one(), "span [{a}, {b}) leaves [0, 1)");
        if a < b {
            Self { pieces: vec![(a, b)] }
        } else {
            Self::empty()
        }
    }

    /// Builds a set from arbitrary (possibly overlapping) pieces.
    pub fn from_pieces(pieces: impl IntoIterator<Item = (T, T)>) -> Result<Self> {
        let mut raw: Vec<(T, T)> = Vec::new();
        for (a, b) in pieces {
            if a < T::zero() || b > T::one() || a >= b {
                return Err(domain(format!("piece [{a}, {b}) is not inside [0, 1)")));
            }
            raw.push((a, b));
        }
        Ok(Self::normalize(raw))
    }

    fn normalize(mut raw: Vec<(T, T)>) -> Self {
        raw.sort_by(|x, y| x.0.partial_cmp(&y.0).expect("ordered scalars"));
        let mut pieces: Vec<(T, T)> = Vec::with_capacity(raw.len());
        for (a, b) in raw {
            if a >= b {
                continue;
            }
            match pieces.last_mut() {
                Some(last) if a <= last.1 => {
                    if b > last.1 {
                        last.1 = b;
                    }
                }
                _ => pieces.push((a, b)),
            }
        }
        Self { pieces }
    }

    pub fn pieces(&self) -> &[(T, T)] {
        &self.pieces
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn measure(&self) -> T {
        self.pieces
            .iter()
            .fold(T::zero(), |acc, (a, b)| acc + b.clone() - a.clone())
    }

    /// Indicator of `t`; errors when `t` is outside `[0, 1)`.
    pub fn indicator(&self, t: &T) -> Result<bool> {
        if *t < T::zero() || *t >= T::one() {
            return Err(domain(format!("t = {t} is outside [0, 1)")));
        }
        Ok(self.contains(t))
    }

    pub(crate) fn contains(&self, t: &T) -> bool {
        self.pieces.iter().any(|(a, b)| a <= t && t < b)
    }

    fn combine(&self, other: &Self, keep: impl Fn(bool, bool) -> bool) -> Self {
        let mut cuts: Vec<T> = vec![T::zero(), T::one()];
        for (a, b) in self.pieces.iter().chain(other.pieces.iter()) {
            cuts.push(a.clone());
            cuts.push(b.clone());
        }
        sort_dedup(&mut cuts);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        for w in cuts.windows(2) {
            let t = &w[0];
            while i < self.pieces.len() && self.pieces[i].1 <= *t {
                i += 1;
            }
            while j < other.pieces.len() && other.pieces[j].1 <= *t {
                j += 1;
            }
            let in_a = i < self.pieces.len() && self.pieces[i].0 <= *t;
            let in_b = j < other.pieces.len() && other.pieces[j].0 <= *t;
            if keep(in_a, in_b) {
                out.push((w[0].clone(), w[1].clone()));
            }
        }
        Self::normalize(out)
    }

    pub fn union(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a || b)
    }

    pub fn intersect(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a && b)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a && !b)
    }

    pub fn symmetric_difference(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a != b)
    }

    pub fn complement(&self) -> Self {
        Self::full().difference(self)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.difference(other).is_empty()
    }

    /// The part of `self` whose cumulative measure (counted from 0) lies in `[lo, hi)`.
    fn slice(&self, lo: &T, hi: &T) -> Self {
        let mut out = Vec::new();
        let mut acc = T::zero();
        for (a, b) in &self.pieces {
            let len = b.clone() - a.clone();
            let start = T::max_of(lo.clone() - acc.clone(), T::zero());
            let end = T::min_of(hi.clone() - acc.clone(), len.clone());
            if start < end {
                out.push((a.clone() + start, a.clone() + end));
            }
            acc = acc + len;
            if acc >= *hi {
                break;
            }
        }
        Self { pieces: out }
    }

    /// Carves consecutive subsets of the prescribed measures out of `self`.
    ///
    /// Each subset starts where the previous one stopped; a request that does
    /// not fit before the end of the set wraps once to the start of the set.
    /// Subsets are pairwise disjoint whenever the weights sum to at most
    /// `self.measure()`.
    pub fn match_weights(&self, weights: &[T]) -> Result<Vec<Self>> {
        let total = self.measure();
        for (index, w) in weights.iter().enumerate() {
            if w.is_negative() {
                return Err(domain(format!("weight #{index} = {w} is negative")));
            }
            if *w > total {
                return Err(Error::InfeasibleWeight {
                    index,
                    weight: w.to_text(),
                    available: total.to_text(),
                });
            }
        }
        // Positions are tracked as cumulative measure inside `self`, which
        // is equivalent to stopping points in absolute coordinates.
        let mut pos = T::zero();
        let mut out = Vec::with_capacity(weights.len());
        for w in weights {
            if w.is_zero() {
                out.push(Self::empty());
                continue;
            }
            let end = pos.clone() + w.clone();
            if end <= total {
                out.push(self.slice(&pos, &end));
                pos = end;
            } else {
                let wrapped = end - total.clone();
                let tail = self.slice(&pos, &total);
                let head = self.slice(&T::zero(), &wrapped);
                out.push(tail.union(&head));
                pos = wrapped;
            }
        }
        Ok(out)
    }

    /// `[t, t + a)` taken modulo 1, together with the end point.
    ///
    /// `t = 1` is accepted and behaves like `t = 0`, which lets callers chain
    /// placements without normalising the running position.
    pub fn wrap_place(t: &T, a: &T) -> Result<(Self, T)> {
        if *t < T::zero() || *t > T::one() {
            return Err(domain(format!("start {t} is outside [0, 1)")));
        }
        if a.is_negative() || *a >= T::one() {
            return Err(domain(format!("diameter {a} is outside [0, 1)")));
        }
        let end = t.clone() + a.clone();
        if end <= T::one() {
            Ok((Self::span(t.clone(), end.clone()), end))
        } else {
            let rest = end - T::one();
            let set = Self::span(t.clone(), T::one()).union(&Self::span(T::zero(), rest.clone()));
            Ok((set, rest))
        }
    }

    pub fn endpoints(&self) -> impl Iterator<Item = &T> {
        self.pieces.iter().flat_map(|(a, b)| [a, b])
    }
}

impl<T: Scalar> fmt::Display for IntervalSet<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pieces.is_empty() {
            return write!(f, "∅");
        }
        for (k, (a, b)) in self.pieces.iter().enumerate() {
            if k > 0 {
                write!(f, " ∪ ")?;
            }
            write!(f, "[{a}, {b})")?;
        }
        Ok(())
    }
}

pub(crate) fn sort_dedup<T: Scalar>(v: &mut Vec<T>) {
    v.sort_by(|x, y| x.partial_cmp(y).expect("ordered scalars"));
    v.dedup();
}

/// Breakpoints `0 = t_0 < ... < t_k = 1` such that every registered set's
/// indicator is constant on each cell `[t_i, t_{i+1})`.
#[derive(Clone, Debug, PartialEq)]
pub struct CellDecomposition<T> {
    pub breakpoints: Vec<T>,
}

impl<T: Scalar> CellDecomposition<T> {
    pub fn of(sets: &[IntervalSet<T>]) -> Self {
        let mut breakpoints = vec![T::zero(), T::one()];
        for s in sets {
            breakpoints.extend(s.endpoints().cloned());
        }
        sort_dedup(&mut breakpoints);
        Self { breakpoints }
    }

    /// Cells as `(start, end)` pairs.
    pub fn cells(&self) -> impl Iterator<Item = (&T, &T)> {
        self.breakpoints.windows(2).map(|w| (&w[0], &w[1]))
    }
}

/// Cell decomposition of a family of sets.
pub fn cells<T: Scalar>(sets: &[IntervalSet<T>]) -> CellDecomposition<T> {
    CellDecomposition::of(sets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, Q};

    fn iv(pairs: &[(&str, &str)]) -> IntervalSet<Q> {
        IntervalSet::from_pieces(pairs.iter().map(|(a, b)| (q(a), q(b)))).unwrap()
    }

    #[test]
    fn measure_examples() {
        assert_eq!(IntervalSet::<Q>::full().measure(), q("1"));
        assert_eq!(IntervalSet::<Q>::empty().measure(), q("0"));
        assert_eq!(iv(&[("0", "0.5"), ("0.7", "0.9")]).measure(), q("0.7"));
    }

    #[test]
    fn indicator_is_right_open() {
        let s = iv(&[("0", "0.5")]);
        assert!(s.indicator(&q("0.3")).unwrap());
        assert!(!s.indicator(&q("0.5")).unwrap());
        assert!(s.indicator(&q("1")).is_err());
        assert!(s.indicator(&q("-1/10")).is_err());
    }

    #[test]
    fn set_operations() {
        let a = iv(&[("0", "0.5")]);
        let b = iv(&[("0.3", "1")]);
        let i = a.intersect(&b);
        assert_eq!(i, iv(&[("0.3", "0.5")]));
        assert_eq!(i.measure(), q("0.2"));
        assert_eq!(a.union(&a.complement()), IntervalSet::full());
        let merged = iv(&[("0", "0.3")]).union(&iv(&[("0.3", "0.6")]));
        assert_eq!(merged.pieces().len(), 1);
        assert_eq!(merged, iv(&[("0", "0.6")]));
        assert_eq!(a.difference(&b), iv(&[("0", "0.3")]));
        assert_eq!(a.symmetric_difference(&b).measure(), q("0.8"));
    }

    #[test]
    fn from_pieces_merges_and_validates() {
        let s = iv(&[("0.5", "0.7"), ("0", "0.2"), ("0.1", "0.3"), ("0.3", "0.4")]);
        assert_eq!(s.pieces(), &[(q("0"), q("0.4")), (q("0.5"), q("0.7"))]);
        assert!(IntervalSet::from_pieces([(q("0.5"), q("0.5"))]).is_err());
        assert!(IntervalSet::from_pieces([(q("0.5"), q("1.5"))]).is_err());
    }

    #[test]
    fn match_examples() {
        let full = IntervalSet::<Q>::full();
        let out = full.match_weights(&[q("0.3"), q("0.2")]).unwrap();
        assert_eq!(out, vec![iv(&[("0", "0.3")]), iv(&[("0.3", "0.5")])]);

        let half = iv(&[("0", "0.5")]);
        let out = half.match_weights(&[q("0.3"), q("0.4")]).unwrap();
        assert_eq!(out[0], iv(&[("0", "0.3")]));
        assert_eq!(out[1], iv(&[("0", "0.2"), ("0.3", "0.5")]));

        let out = half.match_weights(&[q("0.5")]).unwrap();
        assert_eq!(out, vec![half.clone()]);
    }

    #[test]
    fn match_errors_and_zero_weights() {
        let half = iv(&[("0", "0.5")]);
        assert!(matches!(
            half.match_weights(&[q("0.6")]),
            Err(Error::InfeasibleWeight { index: 0, .. })
        ));
        assert!(matches!(half.match_weights(&[q("-0.1")]), Err(Error::Domain(_))));
        let out = half.match_weights(&[q("0"), q("0.2")]).unwrap();
        assert!(out[0].is_empty());
        assert_eq!(out[1], iv(&[("0", "0.2")]));
    }

    #[test]
    fn match_on_fragmented_host() {
        let host = iv(&[("0.1", "0.2"), ("0.5", "0.8")]);
        let out = host.match_weights(&[q("0.15"), q("0.25")]).unwrap();
        assert_eq!(out[0], iv(&[("0.1", "0.2"), ("0.5", "0.55")]));
        // 0.25 from 0.55 leaves 0.25 of which 0.25 fits exactly.
        assert_eq!(out[1], iv(&[("0.55", "0.8")]));
    }

    #[test]
    fn wrap_place_examples() {
        let (s, e) = IntervalSet::wrap_place(&q("0.2"), &q("0.3")).unwrap();
        assert_eq!((s, e), (iv(&[("0.2", "0.5")]), q("0.5")));
        let (s, e) = IntervalSet::wrap_place(&q("0.8"), &q("0.5")).unwrap();
        assert_eq!((s.clone(), e), (iv(&[("0", "0.3"), ("0.8", "1")]), q("0.3")));
        assert_eq!(s.measure(), q("0.5"));
        let (s, e) = IntervalSet::<Q>::wrap_place(&q("0"), &q("0")).unwrap();
        assert!(s.is_empty());
        assert_eq!(e, q("0"));
        assert!(IntervalSet::<Q>::wrap_place(&q("0"), &q("1")).is_err());
    }

    #[test]
    fn cell_examples() {
        let a = iv(&[("0", "0.5")]);
        let b = iv(&[("0.3", "1")]);
        assert_eq!(
            cells(std::slice::from_ref(&a)).breakpoints,
            vec![q("0"), q("0.5"), q("1")]
        );
        assert_eq!(cells(&[a, b]).breakpoints, vec![q("0"), q("0.3"), q("0.5"), q("1")]);
        assert_eq!(cells(&[IntervalSet::<Q>::empty()]).breakpoints, vec![q("0"), q("1")]);
    }

    #[test]
    fn float_instantiation_agrees() {
        let s = IntervalSet::<f64>::span(0.0, 0.5);
        let out = s.match_weights(&[0.3, 0.4]).unwrap();
        assert!((out[1].measure() - 0.4).abs() < 1e-12);
        assert_eq!(out[1].pieces().len(), 2);
    }
}
