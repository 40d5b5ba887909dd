//! Property tests for the interval and rectangle algebras, run over exact
//! rationals and cross-checked against `f64` where the laws are linear.

use hullcert::envelope::{omega, TruthTable};
use hullcert::rect::{bilinear_overlap, profile, Base, Rect, RectSet};
use hullcert::{IntervalSet, Q};
use num_traits::ToPrimitive;
use proptest::prelude::*;

const GRID: i64 = 16;

fn frac(k: i64) -> Q {
    Q::new(k.into(), GRID.into())
}

fn interval_set() -> impl Strategy<Value = IntervalSet<Q>> {
    prop::collection::btree_set(0..=GRID, 0..8).prop_map(|cuts| {
        let cuts: Vec<i64> = cuts.into_iter().collect();
        IntervalSet::from_pieces(cuts.chunks_exact(2).map(|c| (frac(c[0]), frac(c[1])))).unwrap()
    })
}

fn rect_set() -> impl Strategy<Value = RectSet<Q>> {
    (
        prop::collection::btree_set(0..=GRID, 0..8),
        prop::collection::vec(-3i64..=3, 8),
    )
        .prop_map(|(cuts, heights)| {
            let cuts: Vec<i64> = cuts.into_iter().collect();
            let rects = cuts
                .windows(2)
                .zip(heights)
                .filter(|(_, c)| *c != 0)
                .map(|(w, c)| Rect::new(frac(w[0]), frac(w[1]), Q::from_integer(c.into())));
            RectSet::new(Base::Unit, rects.collect::<Vec<_>>()).unwrap()
        })
}

fn to_f64(set: &IntervalSet<Q>) -> IntervalSet<f64> {
    IntervalSet::from_pieces(
        set.pieces()
            .iter()
            .map(|(a, b)| (a.to_f64().unwrap(), b.to_f64().unwrap())),
    )
    .unwrap()
}

proptest! {
    #[test]
    fn inclusion_exclusion(a in interval_set(), b in interval_set()) {
        prop_assert_eq!(a.union(&b).measure() + a.intersect(&b).measure(), a.measure() + b.measure());
        prop_assert_eq!(a.complement().measure(), Q::from_integer(1.into()) - a.measure());
        prop_assert_eq!(a.symmetric_difference(&b), a.difference(&b).union(&b.difference(&a)));
    }

    #[test]
    fn float_measure_tracks_exact(a in interval_set(), b in interval_set()) {
        let exact = a.union(&b).measure().to_f64().unwrap();
        let float = to_f64(&a).union(&to_f64(&b)).measure();
        prop_assert!((exact - float).abs() < 1e-12);
    }

    #[test]
    fn match_carves_disjoint_subsets(a in interval_set(), raw in prop::collection::vec(0..=GRID, 1..5)) {
        let total = a.measure();
        let mut left = total.clone();
        let weights: Vec<Q> = raw.into_iter().map(|k| {
            let w = if frac(k) > left { left.clone() } else { frac(k) };
            left = &left - &w;
            w
        }).collect();
        let parts = a.match_weights(&weights).unwrap();
        for (p, w) in parts.iter().zip(&weights) {
            prop_assert_eq!(&p.measure(), w);
            prop_assert!(p.is_subset(&a));
        }
        for i in 0..parts.len() {
            for j in i + 1..parts.len() {
                prop_assert!(parts[i].intersect(&parts[j]).is_empty());
            }
        }
    }

    #[test]
    fn stack_union_is_associative_and_commutative(r in rect_set(), s in rect_set(), t in rect_set()) {
        let left = r.stack_union(&s).unwrap().stack_union(&t).unwrap();
        let right = r.stack_union(&s.stack_union(&t).unwrap()).unwrap();
        prop_assert_eq!(profile(Base::Unit, std::slice::from_ref(&left)).unwrap(), profile(Base::Unit, &[right]).unwrap());
        prop_assert_eq!(r.stack_union(&s).unwrap(), s.stack_union(&r).unwrap());
        prop_assert_eq!(left.signed_measure(), r.signed_measure() + s.signed_measure() + t.signed_measure());
    }

    #[test]
    fn overlap_is_symmetric_and_bilinear(r in rect_set(), s in rect_set(), t in rect_set(), k in -3i64..=3) {
        let m = |x: &RectSet<Q>, y: &RectSet<Q>| bilinear_overlap(x, y).unwrap();
        let k = Q::from_integer(k.into());
        prop_assert_eq!(m(&r, &s), m(&s, &r));
        prop_assert_eq!(m(&r.stack_union(&s).unwrap(), &t), m(&r, &t) + m(&s, &t));
        prop_assert_eq!(m(&r.scale(&k), &t), &k * m(&r, &t));
    }

    #[test]
    fn omega_reduces_to_set_measures(sets in prop::collection::vec(interval_set(), 2..5)) {
        let (a, b) = (&sets[0], &sets[1]);
        let pair = [a.clone(), b.clone()];
        prop_assert_eq!(omega(&pair, &TruthTable::and(2)).unwrap(), a.intersect(b).measure());
        prop_assert_eq!(omega(&pair, &TruthTable::or(2)).unwrap(), a.union(b).measure());
        prop_assert_eq!(omega(&pair, &TruthTable::xor(2)).unwrap(), a.symmetric_difference(b).measure());
        let all_and = sets[1..].iter().fold(a.clone(), |acc, x| acc.intersect(x));
        let all_or = sets[1..].iter().fold(a.clone(), |acc, x| acc.union(x));
        prop_assert_eq!(omega(&sets, &TruthTable::and(sets.len())).unwrap(), all_and.measure());
        prop_assert_eq!(omega(&sets, &TruthTable::or(sets.len())).unwrap(), all_or.measure());
    }
}
