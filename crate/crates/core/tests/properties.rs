mod common;

use common::*;
use ffzeta::algebra::{Fe, GaloisField, LaurentSeries, Poly, VPlace};
use ffzeta::measures::{additivity_check, Cylinder, MeasureSpec};
use ffzeta::power_sums::PowerSums;
use ffzeta::zeta_v::{kummer_check, term_bound_v};
use num_bigint::BigInt;
use proptest::prelude::*;

fn field_strategy() -> impl Strategy<Value = GaloisField> {
    prop::sample::select(vec![2u64, 3, 4, 5, 8, 9]).prop_map(field)
}

fn poly_strategy(q: u32, max_len: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(0..q, 0..max_len).prop_map(|c| Poly::from_coeffs(c.into_iter().map(Fe).collect()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(f in field_strategy(), a in 0u32..9, b in 0u32..9, c in 0u32..9) {
        let q = f.q();
        let (a, b, c) = (Fe(a % q), Fe(b % q), Fe(c % q));
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), Fe::ZERO);
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), Fe::ONE);
            prop_assert_eq!(f.pow(a, (q - 1) as u64), Fe::ONE);
        }
        prop_assert_eq!(f.frobenius(f.add(a, b)), f.add(f.frobenius(a), f.frobenius(b)));
    }

    #[test]
    fn division_with_remainder(a in poly_strategy(3, 8), b in poly_strategy(3, 5)) {
        let f = field(3);
        prop_assume!(!b.is_zero());
        let (quo, rem) = a.div_rem(&b, &f);
        prop_assert_eq!(quo.mul(&b, &f).add(&rem, &f), a);
        prop_assert!(rem.degree() < b.degree());
    }

    #[test]
    fn vadic_inverse(x in poly_strategy(3, 6), level in 1u32..4) {
        let f = field(3);
        let pl = VPlace::new(&f, poly(&[1, 0, 1])).unwrap();
        let a = pl.reduce(&x, level).unwrap();
        if a.is_unit() {
            prop_assert_eq!(a.mul(&a.inv().unwrap()), pl.one(level).unwrap());
        } else {
            prop_assert!(a.inv().is_err());
        }
    }

    #[test]
    fn vadic_pow_is_periodic(x in poly_strategy(2, 6), t in -50i64..50, k in -3i64..3, level in 1u32..4) {
        let f = field(2);
        let pl = VPlace::new(&f, poly(&[1, 1, 1])).unwrap();
        let a = pl.reduce(&x, level).unwrap();
        prop_assume!(a.is_unit());
        let order = BigInt::from(pl.unit_group_order(level));
        let t = BigInt::from(t);
        let lhs = a.pow(&t, level).unwrap();
        let rhs = a.pow(&(&t + &order * k), level).unwrap();
        prop_assert_eq!(&lhs, &rhs);
        // a^t·a^{−t} = 1
        prop_assert_eq!(lhs.mul(&a.pow(&-&t, level).unwrap()), pl.one(level).unwrap());
    }

    #[test]
    fn laurent_inverse_keeps_relative_precision(x in poly_strategy(3, 5), prec in 2i64..10) {
        let f = field(3);
        prop_assume!(!x.is_zero());
        let s = LaurentSeries::from_theta_poly(&x, prec);
        let inv = s.inv(&f).unwrap();
        prop_assert_eq!(inv.valuation(), -s.valuation());
        prop_assert_eq!(inv.precision() - inv.valuation(), s.precision() - s.valuation());
        let one = s.mul(&inv, &f);
        let rel = s.precision() - s.valuation();
        prop_assert!(one.agrees_below(&LaurentSeries::one(rel), rel));
    }

    #[test]
    fn power_sum_cache_is_transparent(i in 0usize..5, m in 0u64..8) {
        let f = field(3);
        let cached = PowerSums::with_capacity(&f, 4);
        let plain = PowerSums::with_capacity(&f, 0);
        prop_assert_eq!(cached.s(i, m), plain.s(i, m));
        prop_assert_eq!(cached.s(i, m), plain.s(i, m));
    }

    #[test]
    fn term_bound_is_a_valuation_bound(m in 0u64..40, i in 0usize..7) {
        let f = field(2);
        let ps = PowerSums::new(&f);
        let pl = VPlace::new(&f, Poly::theta()).unwrap();
        let t = ps.s_tilde(i, m, &pl);
        let bound = term_bound_v(i as u64, &pl);
        match t.valuation(pl.v(), &f) {
            None => {}
            Some(o) => prop_assert!(o as u64 >= bound, "ord {} < bound {}", o, bound),
        }
    }

    #[test]
    fn kummer_random_pairs(m in prop::collection::vec(-30i64..30, 1..3), shift in -2i64..3, e in 1u32..3, star: bool) {
        let f = field(3);
        let ps = PowerSums::new(&f);
        let pl = VPlace::new(&f, Poly::theta()).unwrap();
        let order = BigInt::from(pl.unit_group_order(e));
        let mb: Vec<BigInt> = m.iter().map(|&x| BigInt::from(x)).collect();
        let lb: Vec<BigInt> = mb.iter().map(|x| x + &order * shift).collect();
        prop_assert!(kummer_check(&ps, &mb, &lb, star, &pl, e).unwrap().holds);
    }

    #[test]
    fn measures_are_additive(a in 0u32..9, b in 0u32..9, j in 0usize..2, star: bool, twisted: bool) {
        let f = field(3);
        let pl = VPlace::new(&f, Poly::theta()).unwrap();
        let s = if twisted { poly(&[1, 1]) } else { Poly::one() };
        let spec = MeasureSpec::new(&pl, &[(s.clone(), Poly::one()), (s, Poly::one())], star, 3).unwrap();
        let base = vec![poly(&[a % 3, a / 3]), poly(&[b % 3, b / 3])];
        prop_assert!(additivity_check(&spec, &Cylinder::uniform(base, 2), j).unwrap().holds);
    }
}
