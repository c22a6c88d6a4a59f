use plfg_core::action::act_be;
use plfg_core::gf::{Mat2, Prime};
use plfg_core::graded::{be_reduce_with, Algebra, GradedElement, Monomial, Strategy as Rewrite};
use proptest::prelude::*;

fn prime_strategy() -> impl Strategy<Value = Prime> {
    prop::sample::select(vec![3u32, 5, 7]).prop_map(|p| Prime::new(p).unwrap())
}

fn raw_monomial() -> impl Strategy<Value = Monomial> {
    (0u32..3, 0u32..3, 0u32..16, 0u32..16).prop_map(|(c, v, a, b)| Monomial::be(c, v, a, b))
}

fn element(p: Prime) -> impl Strategy<Value = GradedElement> {
    prop::collection::vec((raw_monomial(), 0..p.get()), 0..4)
        .prop_map(move |terms| GradedElement::from_terms(Algebra::BE(p), terms))
}

fn with_elements(n: usize) -> impl Strategy<Value = (Prime, Vec<GradedElement>)> {
    prime_strategy().prop_flat_map(move |p| (Just(p), prop::collection::vec(element(p), n)))
}

fn invertible(p: Prime) -> impl Strategy<Value = Mat2> {
    let q = p.get() as i64;
    (0..q, 0..q, 0..q, 0..q)
        .prop_map(move |(a, b, c, d)| Mat2::new(p, a, b, c, d))
        .prop_filter("singular", |m| m.is_invertible())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn multiplication_is_commutative_and_associative((_, xs) in with_elements(3)) {
        let (x, y, z) = (&xs[0], &xs[1], &xs[2]);
        prop_assert_eq!(x.mul(y).unwrap(), y.mul(x).unwrap());
        prop_assert_eq!(x.mul(y).unwrap().mul(z).unwrap(), x.mul(&y.mul(z).unwrap()).unwrap());
    }

    #[test]
    fn multiplication_distributes((_, xs) in with_elements(3)) {
        let (x, y, z) = (&xs[0], &xs[1], &xs[2]);
        prop_assert_eq!(x.mul(&y.add(z).unwrap()).unwrap(), x.mul(y).unwrap().add(&x.mul(z).unwrap()).unwrap());
    }

    #[test]
    fn reduction_does_not_depend_on_strategy(p in prime_strategy(), m in raw_monomial()) {
        let a = be_reduce_with(p, m, Rewrite::R1First);
        prop_assert_eq!(&a, &be_reduce_with(p, m, Rewrite::Interleaved));
        prop_assert_eq!(&a, &be_reduce_with(p, m, Rewrite::R2First));
    }

    #[test]
    fn action_is_a_ring_map(
        (_, xs, g) in with_elements(2).prop_flat_map(|(p, xs)| (Just(p), Just(xs), invertible(p)))
    ) {
        let (x, y) = (&xs[0], &xs[1]);
        prop_assert_eq!(act_be(&g, &x.mul(y).unwrap()), act_be(&g, x).mul(&act_be(&g, y)).unwrap());
        prop_assert_eq!(act_be(&g, &x.add(y).unwrap()), act_be(&g, x).add(&act_be(&g, y)).unwrap());
    }

    #[test]
    fn action_composes(
        (_, xs, g, h) in with_elements(1).prop_flat_map(|(p, xs)| (Just(p), Just(xs), invertible(p), invertible(p)))
    ) {
        let x = &xs[0];
        prop_assert_eq!(act_be(&g, &act_be(&h, x)), act_be(&h.mul(&g), x));
    }
}
