use proptest::prelude::*;

use wpl_core::cases::CaseRegistry;
use wpl_core::group::Order;
use wpl_core::group_hom::GroupHom;
use wpl_core::{GroupElement, WeightSequence};

const TYPES: &[&[i64]] = &[&[2, 2, 2, 2], &[3, 3, 3], &[4, 4, 2], &[6, 3, 2], &[2, 3, 7], &[5, 4]];

fn weights() -> impl Strategy<Value = WeightSequence> {
    prop::sample::select(TYPES).prop_map(|w| WeightSequence::new(w.to_vec()).unwrap())
}

fn element_of(p: WeightSequence) -> impl Strategy<Value = GroupElement> {
    let t = p.len();
    (-30i64..30, prop::collection::vec(-20i64..20, t)).prop_map(move |(l, raw)| p.normalize(l, &raw).unwrap())
}

fn triple() -> impl Strategy<Value = (GroupElement, GroupElement, GroupElement)> {
    weights().prop_flat_map(|p| (element_of(p.clone()), element_of(p.clone()), element_of(p)))
}

fn case_hom() -> impl Strategy<Value = GroupHom> {
    prop::sample::select(vec!["A", "B", "C", "D"])
        .prop_map(|name| CaseRegistry::builtin().get(name).unwrap().group_hom())
}

fn hom_and_source() -> impl Strategy<Value = (GroupHom, GroupElement, GroupElement)> {
    case_hom().prop_flat_map(|h| {
        let q = h.source().clone();
        (Just(h), element_of(q.clone()), element_of(q))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn abelian_group_axioms((a, b, c) in triple()) {
        let zero = a.weights().zero();
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a + &zero, a.clone());
        prop_assert!((&a + &(-&a)).is_zero());
        prop_assert_eq!(&a - &b, &a + &(-&b));
    }

    #[test]
    fn degree_is_additive((a, b, _) in triple()) {
        prop_assert_eq!((&a + &b).degree(), a.degree() + b.degree());
        prop_assert_eq!(a.smul(3).degree(), 3 * a.degree());
        prop_assert_eq!(a.weights().canonical().degree(), a.weights().lcm());
    }

    #[test]
    fn normal_form_round_trips((a, _, _) in triple()) {
        let torsion_ok = a.torsion().iter().enumerate().all(|(i, &li)| (0..a.weights().weight(i)).contains(&li));
        prop_assert!(torsion_ok);
        prop_assert_eq!(a.weights().parse_element(&a.to_string()).unwrap(), a.clone());
        prop_assert_eq!(a.mult(), (a.l() + 1).max(0) as u64);
    }

    #[test]
    fn order_annihilates((a, _, _) in triple()) {
        match a.order() {
            Order::Finite(n) => {
                prop_assert!(a.smul(n as i64).is_zero());
                for k in 1..n {
                    prop_assert!(!a.smul(k as i64).is_zero());
                }
                prop_assert_eq!(a.degree(), 0);
            }
            Order::Infinite => prop_assert_ne!(a.degree(), 0),
        }
    }

    #[test]
    fn fiber_is_coset_of_kernel((h, y, _) in hom_and_source()) {
        let x = h.apply(&y).unwrap();
        let kernel = h.kernel().unwrap();
        let mut coset: Vec<GroupElement> = kernel.iter().map(|k| &y + k).collect();
        coset.sort();
        prop_assert_eq!(h.fiber(&x).unwrap(), coset);
    }

    #[test]
    fn fibers_are_disjoint((h, y1, y2) in hom_and_source()) {
        let (x1, x2) = (h.apply(&y1).unwrap(), h.apply(&y2).unwrap());
        let f1 = h.fiber(&x1).unwrap();
        let f2 = h.fiber(&x2).unwrap();
        if x1 == x2 {
            prop_assert_eq!(f1, f2);
        } else {
            prop_assert!(f1.iter().all(|y| !f2.contains(y)));
        }
    }

    #[test]
    fn hom_is_additive((h, y1, y2) in hom_and_source()) {
        let lhs = h.apply(&(&y1 + &y2)).unwrap();
        let rhs = &h.apply(&y1).unwrap() + &h.apply(&y2).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn kernel_is_a_subgroup(h in case_hom()) {
        let kernel = h.kernel().unwrap();
        prop_assert!(kernel.contains(&h.source().zero()));
        for a in &kernel {
            prop_assert!(kernel.contains(&-a));
            for b in &kernel {
                prop_assert!(kernel.contains(&(a + b)));
            }
        }
    }
}

fn max0(v: i64) -> i64 {
    v.max(0)
}

#[test]
fn fiber_multiplicity_identities() {
    for l in -100i64..=100 {
        if l % 2 == 0 {
            assert_eq!(max0(l / 2 + 1) + max0((l - 2) / 2 + 1), max0(l + 1), "l = {l}");
        } else {
            assert_eq!(2 * max0((l - 1) / 2 + 1), max0(l + 1), "l = {l}");
        }
    }
}

#[test]
fn fiber_outside_image_is_empty() {
    let h = CaseRegistry::builtin().get("A").unwrap().group_hom();
    let x3 = h.target().generator(2);
    assert!(h.fiber(&x3).unwrap().is_empty());
}
