use proptest::prelude::*;

use wpl_core::cases::{auto_primes, CaseRegistry, CaseSpec};
use wpl_core::constants::{resolve_constants, CaseId, LAMBDA, XI_MINUS, XI_PLUS};
use wpl_core::report::verify_case;
use wpl_core::{AlgebraElement, AlgebraHom, FieldSpec, RootChoice};

fn homs() -> Vec<AlgebraHom> {
    let r = CaseRegistry::builtin();
    let f7 = FieldSpec::Prime(7);
    let specs: Vec<CaseSpec> = vec![
        r.get("A").unwrap().build(&FieldSpec::Rationals, None, RootChoice::Smallest).unwrap(),
        r.get("A").unwrap().build(&FieldSpec::Prime(11), None, RootChoice::Smallest).unwrap(),
        r.get("B").unwrap().build(&f7, None, RootChoice::Smallest).unwrap(),
        r.get("B").unwrap().build(&FieldSpec::Prime(37), None, RootChoice::Largest).unwrap(),
        r.get("C").unwrap().build(&FieldSpec::Prime(5), None, RootChoice::Smallest).unwrap(),
        r.get("C").unwrap().build(&FieldSpec::Prime(17), None, RootChoice::Smallest).unwrap(),
        r.get("D").unwrap().build(&f7, Some(&f7.from_i64(-1)), RootChoice::Smallest).unwrap(),
        r.get("D").unwrap().build(&FieldSpec::Rationals, Some(&FieldSpec::Rationals.from_i64(-3)), RootChoice::Smallest).unwrap(),
    ];
    specs.iter().map(|s| s.algebra_hom().unwrap()).collect()
}

/// Random homogeneous element of the source of `h`.
fn source_element(h: &AlgebraHom) -> impl Strategy<Value = AlgebraElement> {
    let s = h.source().clone();
    let p = s.weights().clone();
    let field = *s.field();
    (0i64..4, prop::collection::vec(0i64..12, p.len())).prop_flat_map(move |(l, raw)| {
        let x = p.normalize(l, &raw).unwrap();
        let basis = s.component_basis(&x).unwrap();
        let s = s.clone();
        prop::collection::vec(-4i64..5, basis.dim()).prop_map(move |cs| {
            basis
                .monomials
                .iter()
                .zip(cs)
                .fold(AlgebraElement::zero(), |acc, (m, c)| acc.add(&s.reduce(m, &field.from_i64(c))))
        })
    })
}

fn hom_with_two() -> impl Strategy<Value = (AlgebraHom, AlgebraElement, AlgebraElement)> {
    prop::sample::select(homs()).prop_flat_map(|h| {
        let a = source_element(&h);
        let b = source_element(&h);
        (Just(h), a, b)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn phi_is_multiplicative((h, a, b) in hom_with_two()) {
        let (s, t) = (h.source(), h.target());
        let lhs = h.apply(&s.multiply(&a, &b).unwrap()).unwrap();
        let rhs = t.multiply(&h.apply(&a).unwrap(), &h.apply(&b).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        let sum = h.apply(&s.add(&a, &b).unwrap()).unwrap();
        prop_assert_eq!(sum, t.add(&h.apply(&a).unwrap(), &h.apply(&b).unwrap()).unwrap());
    }

    #[test]
    fn phi_is_graded((h, a, _) in hom_with_two()) {
        let image = h.apply(&a).unwrap();
        if let (Some(x), false) = (h.source().degree_of(&a).unwrap(), image.is_zero()) {
            let expected = h.group_hom().apply(&x).unwrap();
            prop_assert_eq!(h.target().degree_of(&image).unwrap(), Some(expected));
        }
    }

    #[test]
    fn case_d_constants_satisfy_their_identities(q in prop::sample::select(vec![7u64, 11, 13, 17, 19, 23, 29, 31, 37, 41]), lam in -20i64..20) {
        let f = FieldSpec::Prime(q);
        let lambda = f.from_i64(lam);
        if let Ok(c) = resolve_constants(CaseId::D, &f, Some(&lambda), RootChoice::Smallest) {
            c.verify().unwrap();
            let (xp, xm, l) = (c.get(XI_PLUS).unwrap(), c.get(XI_MINUS).unwrap(), c.get(LAMBDA).unwrap());
            prop_assert_eq!(xp * xm, l * l);
            prop_assert_eq!(xp + xm, &f.from_i64(2) * &(&f.from_i64(2) - l));
        }
    }
}

#[test]
fn cases_verify_over_several_primes() {
    let r = CaseRegistry::builtin();
    for (name, lambda) in [("B", None), ("C", None), ("D", Some("-1"))] {
        let specs = auto_primes(r.get(name).unwrap(), lambda, 3, 1000, RootChoice::Smallest);
        assert_eq!(specs.len(), 3, "case {name}");
        for spec in &specs {
            for choice in [RootChoice::Smallest, RootChoice::Largest] {
                let lam = lambda.map(|v| spec.field.parse_element(v).unwrap());
                let spec = r.get(name).unwrap().build(&spec.field, lam.as_ref(), choice).unwrap();
                let out = verify_case(&spec, 8);
                assert!(out.pass, "case {name} over {} with {choice:?}", spec.field);
            }
        }
    }
}
