//! Randomized invariants: series ring laws, super-bracket identities in the
//! free superalgebra, and the polynomial round trips behind reconstruction.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use yangloop_core::cartan::CartanDatum;
use yangloop_core::coeff::Coefficient;
use yangloop_core::reconstruct::{
    additive_series, expand_at_infinity, from_roots, multiplicative_series, reconstruct_ratio, reconstruct_shifted,
    Ratio, ShiftMode, Shifted,
};
use yangloop_core::relations::{q_commutator, super_commutator, AlgElem, RelContext, Sign};
use yangloop_core::{Series, VarSpec};

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

// ------------------------------------------------------------------ series

const ORDER: u32 = 5;

fn spec() -> Arc<VarSpec> {
    VarSpec::graded(&["x", "y"], ORDER).unwrap()
}

/// Polynomial in `x, y` of total degree ≤ ORDER, small integer coefficients.
fn poly(constant: bool) -> impl Strategy<Value = Series> {
    prop::collection::vec(((0i16..=3, 0i16..=3), -4i64..=4), 0..6).prop_map(move |terms| {
        let s = spec();
        let mut out = Series::zero(&s);
        for ((a, b), c) in terms {
            if (a + b) as u32 > ORDER || (!constant && a + b == 0) {
                continue;
            }
            out.add_term(&[a, b], Coefficient::from_int(c)).unwrap();
        }
        out
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn series_ring_laws(a in poly(true), b in poly(true), c in poly(true)) {
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(
            a.mul(&b.add(&c).unwrap()).unwrap(),
            a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
        );
        prop_assert!(a.sub(&a).unwrap().is_zero());
        prop_assert_eq!(a.mul(&Series::one(&spec())).unwrap(), a);
    }

    #[test]
    fn exp_log_inverse(f in poly(false)) {
        let one = Series::one(&spec());
        prop_assert_eq!(f.exp().unwrap().log().unwrap(), f.clone());
        let g = one.add(&f).unwrap();
        prop_assert_eq!(g.mul(&g.inverse().unwrap()).unwrap(), one.clone());
        let r = g.mul(&g).unwrap().sqrt().unwrap();
        prop_assert_eq!(r, g.clone());
        prop_assert_eq!(f.exp().unwrap().mul(&f.neg().exp().unwrap()).unwrap(), one);
    }

    #[test]
    fn derivative_is_a_derivation(a in poly(true), b in poly(true)) {
        // The product loses the top degree under differentiation, so compare
        // one below the truncation order.
        let t = ORDER as i32 - 1;
        let lhs = a.mul(&b).unwrap().derivative("x").unwrap().truncate_degree(t);
        let rhs = a
            .derivative("x").unwrap().mul(&b).unwrap()
            .add(&a.mul(&b.derivative("x").unwrap()).unwrap()).unwrap()
            .truncate_degree(t);
        prop_assert_eq!(lhs, rhs);
    }
}

// ----------------------------------------------------------- superalgebra

/// Generators of A(1,1) at levels 0..=2; node 2 is odd.
fn context() -> RelContext {
    RelContext::new(CartanDatum::build(1, 1), 2, 3).unwrap()
}

type RawWord = Vec<(bool, usize, i32)>;

fn raw_word() -> impl Strategy<Value = RawWord> {
    prop::collection::vec((any::<bool>(), 1usize..=3, 0i32..=2), 1..=3)
}

/// Homogeneous element: keeps only the words whose parity matches the first.
fn homogeneous() -> impl Strategy<Value = AlgElem> {
    prop::collection::vec((raw_word(), -3i64..=3, 0u8..=1), 1..=3).prop_map(|words| {
        let ctx = context();
        let hbar = ctx.hbar();
        let mut out = ctx.zero();
        let mut parity = None;
        for (raw, c, hpow) in words {
            let w: Vec<_> = raw
                .iter()
                .map(|&(plus, node, level)| ctx.sym(if plus { Sign::Plus } else { Sign::Minus }, node, level).unwrap())
                .collect();
            let p = yangloop_core::relations::word_parity(&w);
            if *parity.get_or_insert(p) != p || c == 0 {
                continue;
            }
            let coeff = if hpow == 1 { hbar.scale_int(c) } else { Series::from_int(ctx.spec(), c) };
            out.add_word(w, &coeff).unwrap();
        }
        out
    })
}

fn sign(a: &AlgElem, b: &AlgElem) -> i64 {
    match (a.parity(), b.parity()) {
        (Some(1), Some(1)) => -1,
        _ => 1,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn super_antisymmetry(a in homogeneous(), b in homogeneous()) {
        let ab = super_commutator(&a, &b).unwrap();
        let ba = super_commutator(&b, &a).unwrap();
        prop_assert!(ab.add(&ba.scale_int(sign(&a, &b))).unwrap().is_zero());
    }

    #[test]
    fn super_jacobi(a in homogeneous(), b in homogeneous(), c in homogeneous()) {
        let br = |x: &AlgElem, y: &AlgElem| super_commutator(x, y).unwrap();
        let t1 = br(&a, &br(&b, &c)).scale_int(sign(&a, &c));
        let t2 = br(&b, &br(&c, &a)).scale_int(sign(&b, &a));
        let t3 = br(&c, &br(&a, &b)).scale_int(sign(&c, &b));
        prop_assert!(t1.add(&t2).unwrap().add(&t3).unwrap().is_zero());
    }

    #[test]
    fn q_commutator_at_one_is_the_bracket(a in homogeneous(), b in homogeneous()) {
        let one = Series::one(a.spec());
        prop_assert_eq!(q_commutator(&a, &b, &one).unwrap(), super_commutator(&a, &b).unwrap());
    }

    #[test]
    fn q_commutator_is_linear_in_q(a in homogeneous(), b in homogeneous(), k in -3i64..=3) {
        // [a,b]_q = ab − ±q·ba, so [a,b]_q − [a,b]_1 = (1 − q)·(±ba)
        let spec = a.spec().clone();
        let qk = Series::from_int(&spec, k);
        let diff = q_commutator(&a, &b, &qk).unwrap().sub(&super_commutator(&a, &b).unwrap()).unwrap();
        let ba = b.mul(&a).unwrap().scale_int(sign(&a, &b) * (1 - k));
        prop_assert_eq!(diff, ba);
    }
}

// ----------------------------------------------------------- reconstruction

fn distinct_roots(max: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::btree_set(-6i64..=6, 0..=max).prop_map(|s| s.into_iter().collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn additive_round_trip(roots in prop::collection::vec(-6i64..=6, 0..=3), s in prop::sample::select(vec![-2i64, -1, 1, 2])) {
        let p = from_roots(&roots.iter().map(|&r| q(r)).collect::<Vec<_>>());
        let max_deg = 4;
        let c = additive_series(&p, &q(s), 2 * max_deg + 4).unwrap();
        prop_assert_eq!(reconstruct_shifted(&c, &q(s), ShiftMode::Additive, max_deg).unwrap(), Shifted::Found(p));
    }

    #[test]
    fn multiplicative_round_trip(roots in prop::collection::btree_set(1i64..=6, 0..=3), neg in any::<bool>()) {
        let sign = if neg { -1 } else { 1 };
        let p = from_roots(&roots.iter().map(|&r| q(sign * r)).collect::<Vec<_>>());
        let s = q(4);
        let max_deg = 4;
        let (plus, _) = multiplicative_series(&p, &s, &q(3), 2 * max_deg + 4).unwrap();
        let normed: Vec<BigRational> = plus.iter().map(|x| x / &plus[0]).collect();
        prop_assert_eq!(reconstruct_shifted(&normed, &s, ShiftMode::Multiplicative, max_deg).unwrap(), Shifted::Found(p));
    }

    #[test]
    fn ratio_round_trip(num in distinct_roots(3), den in distinct_roots(3)) {
        // Equal degrees, no common root: the ratio is already reduced.
        let d = num.len().min(den.len());
        let num: Vec<i64> = num.into_iter().take(d).collect();
        let den: Vec<i64> = den.into_iter().filter(|r| !num.contains(r)).take(d).collect();
        prop_assume!(den.len() == d);
        let p = from_roots(&num.iter().map(|&r| q(r)).collect::<Vec<_>>());
        let qq = from_roots(&den.iter().map(|&r| q(r)).collect::<Vec<_>>());
        let max_deg = 4;
        let c = expand_at_infinity(&p, &qq, 2 * max_deg + 4).unwrap();
        prop_assert_eq!(reconstruct_ratio(&c, max_deg).unwrap(), Ratio::Found { p, q: qq });
    }
}
