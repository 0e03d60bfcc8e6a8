use std::sync::Arc;

use gw_core::coh::{CohClass, Shape};
use gw_core::laurent::{invert_linear_factor, invert_x_linear, linear_factor, LaurentBlock, Mono};
use gw_core::rational::{format_rat, parse_rat, ratio, Rat};
use gw_core::series::{Degree, QSeries};
use proptest::prelude::*;

fn shapes() -> impl Strategy<Value = Arc<Shape>> {
    prop_oneof![
        Just(Shape::new(vec![2])),
        Just(Shape::new(vec![4])),
        Just(Shape::new(vec![1, 1])),
        Just(Shape::new(vec![2, 1])),
    ]
}

fn small_rat() -> impl Strategy<Value = Rat> {
    (-9i64..=9, 1i64..=4).prop_map(|(n, d)| ratio(n, d))
}

fn coh(shape: Arc<Shape>) -> impl Strategy<Value = CohClass> {
    let len = shape.len();
    prop::collection::vec(small_rat(), len).prop_map(move |cs| {
        cs.iter()
            .enumerate()
            .fold(CohClass::zero(&shape), |acc, (i, c)| {
                &acc + &CohClass::monomial(&shape, shape.exponent(i), c.clone())
            })
    })
}

fn nilpotent(shape: Arc<Shape>) -> impl Strategy<Value = CohClass> {
    coh(shape.clone()).prop_map(move |c| &c - &CohClass::scalar(&shape, c.scalar_part().clone()))
}

fn block(shape: Arc<Shape>) -> impl Strategy<Value = LaurentBlock> {
    prop::collection::vec(((-3i32..=2, 0i32..=2, 0u32..=2), coh(shape.clone())), 0..4).prop_map(
        move |terms| {
            terms
                .into_iter()
                .fold(LaurentBlock::zero(&shape, 1), |acc, ((a, x, t), c)| {
                    &acc + &LaurentBlock::term(&shape, Mono::new(a, x, vec![t]), c)
                })
        },
    )
}

fn triple<T: std::fmt::Debug + Clone>(
    f: impl Fn(Arc<Shape>) -> BoxedStrategy<T> + Clone + 'static,
) -> impl Strategy<Value = (T, T, T)> {
    shapes().prop_flat_map(move |s| (f(s.clone()), f(s.clone()), f(s)))
}

fn series(shape: Arc<Shape>, order: u32) -> impl Strategy<Value = QSeries> {
    prop::collection::vec((0u32..=order, block(shape.clone())), 0..4).prop_map(move |terms| {
        let mut q = QSeries::zero(&shape, 1, 1, order);
        for (d, b) in terms {
            q.add_to(Degree(vec![d]), &b);
        }
        q
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn coh_ring_axioms((a, b, c) in triple(|s| coh(s).boxed())) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &CohClass::one(a.shape()), a.clone());
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn integration_is_linear((a, b, _) in triple(|s| coh(s).boxed()), k in small_rat()) {
        prop_assert_eq!((&a + &b.scale(&k)).integrate(), a.integrate() + k * b.integrate());
    }

    #[test]
    fn laurent_ring_axioms((a, b, c) in triple(|s| block(s).boxed())) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &LaurentBlock::one(a.shape(), 1), a.clone());
    }

    #[test]
    fn block_integration_is_linear((a, b, _) in triple(|s| block(s).boxed()), k in small_rat()) {
        prop_assert_eq!((&a + &b.scale(&k)).integrate(), &a.integrate() + &b.integrate().scale(&k));
    }

    #[test]
    fn linear_factor_inverse(c in shapes().prop_flat_map(nilpotent), k in prop_oneof![-5i64..=-1, 1i64..=5]) {
        let shape = c.shape().clone();
        let one = LaurentBlock::one(&shape, 0);
        let inv = invert_linear_factor(&c, k, 0).unwrap();
        prop_assert_eq!(&inv * &linear_factor(&c, -k, false, 0), one.clone());
        let inv_x = invert_x_linear(&c, 0).unwrap();
        prop_assert_eq!(&inv_x * &linear_factor(&c, 0, true, 0), one);
    }

    #[test]
    fn series_truncation_commutes_with_products(
        (a, b) in shapes().prop_flat_map(|s| (series(s.clone(), 4), series(s, 4))),
        order in 0u32..=4,
    ) {
        prop_assert_eq!(a.mul(&b).truncate(order), a.truncate(order).mul(&b.truncate(order)));
    }

    #[test]
    fn exp_of_nilpotent_is_multiplicative((a, b, _) in triple(|s| nilpotent(s).boxed())) {
        let shape = a.shape().clone();
        let la = LaurentBlock::constant(a, 0);
        let lb = LaurentBlock::constant(b, 0);
        prop_assert_eq!((&la + &lb).exp().unwrap(), &la.exp().unwrap() * &lb.exp().unwrap());
        prop_assert_eq!(LaurentBlock::zero(&shape, 0).exp().unwrap(), LaurentBlock::one(&shape, 0));
    }

    #[test]
    fn rationals_round_trip(n in any::<i64>(), d in 1i64..=i64::MAX) {
        let r = ratio(n, d);
        prop_assert_eq!(parse_rat(&format_rat(&r)).unwrap(), r);
    }
}
