use proptest::prelude::*;

use wpl_core::field::find_roots;
use wpl_core::{FieldElement, FieldSpec};

fn field() -> impl Strategy<Value = FieldSpec> {
    prop_oneof![
        Just(FieldSpec::Rationals),
        prop::sample::select(vec![5u64, 7, 11, 101, 65_537, 1_000_000_007, 18_446_744_073_709_551_557])
            .prop_map(FieldSpec::Prime),
    ]
}

fn element(f: FieldSpec) -> impl Strategy<Value = FieldElement> {
    (any::<i32>(), 1i32..50).prop_map(move |(n, d)| {
        let (n, d) = (f.from_i64(n as i64), f.from_i64(d as i64));
        n.try_div(&d).unwrap_or_else(|_| f.zero())
    })
}

fn three() -> impl Strategy<Value = (FieldElement, FieldElement, FieldElement)> {
    field().prop_flat_map(|f| (element(f), element(f), element(f)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn ring_axioms((a, b, c) in three()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a - &a, a.field().zero());
        prop_assert_eq!(&a + &a.neg(), a.field().zero());
    }

    #[test]
    fn inverses((a, _, _) in three()) {
        if a.is_zero() {
            prop_assert!(a.inv().is_err());
        } else {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn fermat(q in prop::sample::select(vec![5u64, 7, 13, 65_537, 1_000_000_007]), n in 1i64..1_000_000) {
        let f = FieldSpec::Prime(q);
        let a = f.from_i64(n);
        if !a.is_zero() {
            prop_assert!(a.pow(q - 1).is_one());
        }
    }

    #[test]
    fn roots_match_scan(q in prop::sample::select(vec![5u64, 7, 11, 13, 31, 97]), c in prop::collection::vec(-50i64..50, 4)) {
        let f = FieldSpec::Prime(q);
        let poly: Vec<FieldElement> = c.iter().map(|&v| f.from_i64(v)).collect();
        let degree = poly.iter().rposition(|v| !v.is_zero());
        prop_assume!(matches!(degree, Some(2 | 3)));
        let eval = |x: &FieldElement| poly.iter().rev().fold(f.zero(), |acc, ci| &(&acc * x) + ci);
        let scanned: Vec<FieldElement> = f.elements().unwrap().filter(|x| eval(x).is_zero()).collect();
        prop_assert_eq!(find_roots(&poly, &f).unwrap(), scanned);
    }

    #[test]
    fn rational_roots_are_roots(r in -30i64..30, s in 1i64..12, t in -30i64..30) {
        // (s x - r)(x - t) = s x^2 - (r + s t) x + r t
        let f = FieldSpec::Rationals;
        let poly = [f.from_i64(r * t), f.from_i64(-(r + s * t)), f.from_i64(s)];
        let roots = find_roots(&poly, &f).unwrap();
        let r_over_s = f.from_i64(r).try_div(&f.from_i64(s)).unwrap();
        prop_assert!(roots.contains(&r_over_s));
        prop_assert!(roots.contains(&f.from_i64(t)));
    }
}
