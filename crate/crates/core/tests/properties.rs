use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;

use numerosity::approx::{dirichlet_n, fractional_parts_below, induced_partition, WeightVector};
use numerosity::cointoss::{parse_event, parse_outcome};
use numerosity::poly::Poly;
use numerosity::rational::ratio;
use numerosity::{Coin, CoinEvent, CoinOutcome, FieldElement, Interval, Rational, RealLine, RealSet};

fn rational() -> impl Strategy<Value = Rational> {
    (-60i64..=60, 1i64..=6).prop_map(|(n, d)| ratio(n, d))
}

fn poly(max_deg: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(rational(), 1..=max_deg + 1).prop_map(Poly::new)
}

fn element() -> impl Strategy<Value = FieldElement> {
    (poly(3), poly(3).prop_filter("non-zero", |p| !p.is_zero())).prop_map(|(n, d)| FieldElement::new(n, d).unwrap())
}

fn grid(n: i64) -> Rational {
    ratio(n, 12)
}

fn real_set() -> impl Strategy<Value = RealSet> {
    (
        prop::collection::vec((-36i64..36, 1i64..24), 0..4),
        prop::collection::vec(-48i64..48, 0..4),
    )
        .prop_map(|(ivs, pts)| {
            let intervals: Vec<Interval> = ivs
                .into_iter()
                .map(|(a, len)| Interval::new(grid(a), grid(a + len)).unwrap())
                .collect();
            let base = RealSet::from_parts(intervals, [], []).unwrap();
            let (removed, added): (Vec<Rational>, Vec<Rational>) =
                pts.into_iter().map(grid).partition(|x| base.contains(x));
            RealSet::from_parts(base.intervals().to_vec(), removed, added).unwrap()
        })
}

fn coin() -> impl Strategy<Value = Coin> {
    any::<bool>().prop_map(|b| if b { Coin::H } else { Coin::T })
}

fn outcome() -> impl Strategy<Value = CoinOutcome> {
    (prop::collection::vec(coin(), 0..6), coin()).prop_map(|(p, t)| CoinOutcome::new(p, t))
}

fn event() -> impl Strategy<Value = CoinEvent> {
    (
        prop::collection::vec(prop::collection::btree_map(1u32..=5, coin(), 0..3), 1..4),
        prop::collection::vec(outcome(), 0..3),
        prop::collection::vec(outcome(), 0..3),
    )
        .prop_map(|(cyls, add, remove)| {
            let mut e = CoinEvent::empty();
            for c in cyls {
                let pairs: Vec<(u32, Coin)> = c.into_iter().collect();
                e = e.union(&CoinEvent::cylinder(&pairs).unwrap()).unwrap();
            }
            e = e.union(&CoinEvent::outcomes(add)).unwrap();
            e.diff(&CoinEvent::outcomes(remove)).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn field_display_round_trips(x in element()) {
        let back: FieldElement = x.to_string().parse().unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn field_order_is_total_and_translation_invariant(x in element(), y in element(), z in element()) {
        prop_assert_eq!(x.cmp(&y), (&x - &y).signum());
        prop_assert_eq!(x.cmp(&y), (&x + &z).cmp(&(&y + &z)));
        prop_assert!(x.abs() >= FieldElement::zero());
    }

    #[test]
    fn field_canonical_form_is_unique(x in element(), k in poly(2).prop_filter("non-zero", |p| !p.is_zero())) {
        let scaled = FieldElement::new(x.numerator() * &k, x.denominator() * &k).unwrap();
        prop_assert_eq!(&scaled, &x);
        prop_assert_eq!(x.denominator().leading().cloned(), Some(ratio(1, 1)));
    }

    #[test]
    fn real_set_display_round_trips(a in real_set()) {
        let back: RealSet = a.to_string().parse().unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn real_set_boolean_laws(a in real_set(), b in real_set(), c in real_set()) {
        let u = a.union(&b).union(&c);
        let comp = |s: &RealSet| s.complement_in(&u).unwrap();
        prop_assert_eq!(comp(&a.union(&b)), comp(&a).intersect(&comp(&b)));
        prop_assert_eq!(comp(&a.intersect(&b)), comp(&a).union(&comp(&b)));
        prop_assert_eq!(a.intersect(&b.union(&c)), a.intersect(&b).union(&a.intersect(&c)));
        prop_assert_eq!(a.union(&b.intersect(&c)), a.union(&b).intersect(&a.union(&c)));
        prop_assert_eq!(comp(&comp(&a)), a.clone());
        prop_assert_eq!(a.diff(&b), a.intersect(&comp(&b)));
    }

    #[test]
    fn real_set_membership_matches_operations(a in real_set(), b in real_set(), x in -100i64..100) {
        let x = ratio(x, 24);
        prop_assert_eq!(a.union(&b).contains(&x), a.contains(&x) || b.contains(&x));
        prop_assert_eq!(a.intersect(&b).contains(&x), a.contains(&x) && b.contains(&x));
        prop_assert_eq!(a.diff(&b).contains(&x), a.contains(&x) && !b.contains(&x));
    }

    #[test]
    fn numerosity_is_additive_and_monotone(a in real_set(), b in real_set()) {
        let na = a.numerosity();
        prop_assert_eq!(a.union(&b).numerosity(), &na + &b.diff(&a).numerosity());
        if b.is_subset(&a) && b != a {
            prop_assert!(b.numerosity() < na);
        }
    }

    #[test]
    fn translation_preserves_numerosity(a in real_set(), t in rational()) {
        let moved = a.translate(&t);
        prop_assert_eq!(moved.numerosity(), a.numerosity());
        prop_assert_eq!(moved.translate(&-t), a);
    }

    #[test]
    fn event_display_round_trips(e in event()) {
        prop_assert_eq!(parse_event(&e.to_string()).unwrap(), e);
    }

    #[test]
    fn outcome_display_round_trips(w in outcome()) {
        prop_assert_eq!(parse_outcome(&w.to_string()).unwrap(), w);
    }

    #[test]
    fn event_boolean_laws(a in event(), b in event(), c in event()) {
        prop_assert_eq!(a.union(&b).unwrap().complement(), a.complement().intersect(&b.complement()).unwrap());
        prop_assert_eq!(a.intersect(&b).unwrap().complement(), a.complement().union(&b.complement()).unwrap());
        prop_assert_eq!(
            a.intersect(&b.union(&c).unwrap()).unwrap(),
            a.intersect(&b).unwrap().union(&a.intersect(&c).unwrap()).unwrap()
        );
        prop_assert_eq!(a.complement().complement(), a.clone());
        prop_assert_eq!(a.union(&a.complement()).unwrap(), CoinEvent::omega());
        prop_assert!(a.intersect(&a.complement()).unwrap().is_empty());
    }

    #[test]
    fn event_membership_matches_operations(a in event(), b in event(), w in outcome()) {
        prop_assert_eq!(a.union(&b).unwrap().contains(&w), a.contains(&w) || b.contains(&w));
        prop_assert_eq!(a.intersect(&b).unwrap().contains(&w), a.contains(&w) && b.contains(&w));
        prop_assert_eq!(a.diff(&b).unwrap().contains(&w), a.contains(&w) && !b.contains(&w));
        prop_assert_eq!(a.complement().contains(&w), !a.contains(&w));
    }

    #[test]
    fn probability_is_additive(a in event(), b in event()) {
        let sum = &a.diff(&b).unwrap().probability() + &b.probability();
        prop_assert_eq!(a.union(&b).unwrap().probability(), sum);
        prop_assert_eq!(&a.probability() + &a.complement().probability(), FieldElement::one());
    }

    #[test]
    fn induced_partition_laws(family in prop::collection::vec(real_set(), 1..5)) {
        let cells = induced_partition(&RealLine, &family).unwrap().cells;
        let mut cover = RealSet::empty();
        for (i, c) in cells.iter().enumerate() {
            prop_assert!(!c.set.is_empty());
            prop_assert!(cover.intersect(&c.set).is_empty(), "cell {} overlaps", i);
            cover = cover.union(&c.set);
            for (j, a) in family.iter().enumerate() {
                let inside = c.set.is_subset(a);
                let outside = c.set.intersect(a).is_empty();
                let consistent = if c.pattern[j] { inside } else { outside };
                prop_assert!(consistent);
            }
        }
        let union = family.iter().fold(RealSet::empty(), |acc, a| acc.union(a));
        prop_assert_eq!(cover, union);
        let patterns: BTreeSet<&Vec<bool>> = cells.iter().map(|c| &c.pattern).collect();
        prop_assert_eq!(patterns.len(), cells.len());
    }

    #[test]
    fn exact_dirichlet_is_least_lcm_multiple(ws in prop::collection::vec((1i64..40, 1i64..30), 1..4), n_min in 1i64..500) {
        let y = WeightVector::exact(ws.iter().map(|&(n, d)| ratio(n, d))).unwrap();
        let eps = ratio(1, 1000);
        let n = dirichlet_n(&y, &eps, &BigInt::from(n_min), 0).unwrap();
        prop_assert!(n >= BigInt::from(n_min));
        prop_assert!(fractional_parts_below(&y, &ratio(1, 1_000_000_000), &n));
        let below = (n_min..n.clone().try_into().unwrap())
            .any(|m: i64| y.values().all(|v| (v * Rational::from_integer(BigInt::from(m))).fract().is_zero()));
        prop_assert!(!below);
    }
}
