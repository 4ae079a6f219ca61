//! Property-based checks of the algebraic laws on randomized inputs:
//! ring axioms of the truncated series, the morphism properties of
//! inflation and the projections, and the PBW laws.

use std::sync::Arc;

use proptest::prelude::*;

use biquant::coeff::{rat, Cap, ProjectMode, TruncSeries};
use biquant::envelope::{Ambient, EnvElement, PbwMonomial};
use biquant::liebialg::{build_double, LieBialgebra};

const CAP: Cap = Cap { u: 3, v: 3 };

fn arb_series() -> impl Strategy<Value = TruncSeries> {
    prop::collection::vec(
        ((0u32..=3, 0u32..=3), (-9i64..=9, 1i64..=9)),
        0..6,
    )
    .prop_map(|terms| {
        let mut s = TruncSeries::zero(CAP);
        for ((m, n), (p, q)) in terms {
            s.add_term(m, n, &rat(p, q));
        }
        s
    })
}

fn arb_univariate() -> impl Strategy<Value = TruncSeries> {
    prop::collection::vec((0u32..=3, (-9i64..=9, 1i64..=9)), 0..5).prop_map(|terms| {
        let mut s = TruncSeries::zero(Cap::new(3, 0));
        for (m, (p, q)) in terms {
            s.add_term(m, 0, &rat(p, q));
        }
        s
    })
}

proptest! {
    #[test]
    fn series_ring_axioms(a in arb_series(), b in arb_series(), c in arb_series()) {
        // commutativity
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
        // associativity
        prop_assert_eq!(
            a.mul(&b).unwrap().mul(&c).unwrap(),
            a.mul(&b.mul(&c).unwrap()).unwrap()
        );
        // distributivity
        prop_assert_eq!(
            a.mul(&b.add(&c).unwrap()).unwrap(),
            a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
        );
    }

    #[test]
    fn inverse_is_two_sided(a in arb_series(), c in 1i64..9) {
        // force an invertible constant term
        let mut s = a.clone();
        s.set(0, 0, rat(c, 1));
        let inv = s.invert().unwrap();
        prop_assert_eq!(s.mul(&inv).unwrap(), TruncSeries::one(CAP));
        prop_assert_eq!(inv.mul(&s).unwrap(), TruncSeries::one(CAP));
    }

    #[test]
    fn inflation_is_a_ring_morphism(a in arb_univariate(), b in arb_univariate()) {
        let lhs = a.mul(&b).unwrap().inflate(CAP);
        let rhs = a.inflate(CAP).mul(&b.inflate(CAP)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn projections_are_ring_morphisms(a in arb_series(), b in arb_series()) {
        for mode in [ProjectMode::KillU, ProjectMode::KillV, ProjectMode::KillBoth] {
            let lhs = a.mul(&b).unwrap().project(mode);
            let rhs = a.project(mode).mul(&b.project(mode)).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}

fn arb_monomial(dim: usize, max_deg: u32) -> impl Strategy<Value = PbwMonomial> {
    prop::collection::vec(0u32..=max_deg, dim).prop_map(move |mut e| {
        // clamp the total degree
        let len = e.len();
        let mut total: u32 = e.iter().sum();
        let mut i = 0;
        while total > max_deg {
            if e[i % len] > 0 {
                e[i % len] -= 1;
                total -= 1;
            }
            i += 1;
        }
        PbwMonomial::from_exponents(e)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pbw_product_is_associative(
        a in arb_monomial(4, 3),
        b in arb_monomial(4, 3),
        c in arb_monomial(4, 3),
    ) {
        let l = LieBialgebra::borel();
        let dbl = build_double(&l, Cap::new(0, 0)).unwrap();
        let env = Arc::new(Ambient::enveloping(&dbl.double));
        let cap = Cap::new(0, 0);
        let mk = |m: PbwMonomial| EnvElement::from_monomial(env.clone(), m, TruncSeries::one(cap));
        let (a, b, c) = (mk(a), mk(b), mk(c));
        prop_assert_eq!(
            a.mul(&b).unwrap().mul(&c).unwrap(),
            a.mul(&b.mul(&c).unwrap()).unwrap()
        );
    }

    #[test]
    fn coproduct_is_coassociative_and_multiplicative(
        a in arb_monomial(2, 4),
        b in arb_monomial(2, 3),
    ) {
        let l = LieBialgebra::borel();
        let env = Arc::new(Ambient::enveloping(&l));
        let cap = Cap::new(0, 0);
        let mk = |m: PbwMonomial| EnvElement::from_monomial(env.clone(), m, TruncSeries::one(cap));
        let (a, b) = (mk(a), mk(b));
        let cp = a.coproduct();
        prop_assert_eq!(cp.expand_leg_standard(0), cp.expand_leg_standard(1));
        prop_assert_eq!(
            a.mul(&b).unwrap().coproduct(),
            a.coproduct().mul(&b.coproduct()).unwrap()
        );
    }
}
