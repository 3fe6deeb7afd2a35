//! Property tests for the arithmetic layers and the cocycle machinery.

use std::collections::BTreeSet;

use proptest::prelude::*;

use phigamma::bounded::{compute_vj, iota_twist, is_bounded_class, BoundedOptions};
use phigamma::cocycle::{basis, coboundary, coboundary_witness, verify_cocycle};
use phigamma::wach::{q_series, PadicSeries, WittRing};
use phigamma::{
    weight_profiles, Field, FieldElement, LaurentSeries, PadicInteger, Precision, RankOneModule, TateElement, TateRing,
};

fn field(p: u32, f: u32) -> Field {
    Field::with_degrees(p, f, f).unwrap()
}

fn element(field: &Field, coeffs: &[i64]) -> FieldElement {
    field.from_coeffs(&coeffs[..field.m()]).unwrap()
}

fn series(field: &Field, floor: i64, order: i64, raw: &[i64]) -> LaurentSeries {
    let m = field.m();
    let coeffs = (0..(order - floor) as usize)
        .map(|k| element(field, &raw[k * m..(k + 1) * m]))
        .collect();
    LaurentSeries::from_coeffs(field, floor, order, coeffs)
}

fn small_field() -> impl Strategy<Value = (u32, u32)> {
    prop_oneof![
        Just((2, 1)),
        Just((2, 3)),
        Just((3, 1)),
        Just((3, 2)),
        Just((5, 2)),
        Just((7, 1))
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms((p, f) in small_field(), a in prop::collection::vec(-50i64..50, 3), b in prop::collection::vec(-50i64..50, 3), c in prop::collection::vec(-50i64..50, 3)) {
        let k = field(p, f);
        let (x, y, z) = (element(&k, &a), element(&k, &b), element(&k, &c));
        prop_assert_eq!(k.mul(x, y), k.mul(y, x));
        prop_assert_eq!(k.add(x, y), k.add(y, x));
        prop_assert_eq!(k.mul(k.mul(x, y), z), k.mul(x, k.mul(y, z)));
        prop_assert_eq!(k.mul(x, k.add(y, z)), k.add(k.mul(x, y), k.mul(x, z)));
        prop_assert_eq!(k.add(x, k.neg(x)), k.zero());
        if !x.is_zero() {
            prop_assert_eq!(k.mul(x, k.inv(x).unwrap()), k.one());
        }
        prop_assert_eq!(k.frobenius(k.mul(x, y), 1), k.mul(k.frobenius(x, 1), k.frobenius(y, 1)));
        prop_assert_eq!(k.frobenius(k.add(x, y), 1), k.add(k.frobenius(x, 1), k.frobenius(y, 1)));
        prop_assert_eq!(k.frobenius(x, f as i64), x);
    }

    #[test]
    fn series_ring_laws((p, f) in small_field(), floor in -4i64..3, raw in prop::collection::vec(-9i64..9, 3 * 3 * 12)) {
        let k = field(p, f);
        let order = floor + 12;
        let m = k.m();
        let chunk = 12 * m;
        let a = series(&k, floor, order, &raw[..chunk]);
        let b = series(&k, 0, 12, &raw[chunk..2 * chunk]);
        let c = series(&k, -2, 10, &raw[2 * chunk..3 * chunk]);
        let ab_c = (&(&a * &b) * &c).truncate(order - 6);
        let a_bc = (&a * &(&b * &c)).truncate(order - 6);
        prop_assert!(ab_c.agrees_with(&a_bc, ab_c.order().min(a_bc.order())));
        let lhs = &a * &(&b + &c);
        let rhs = &(&a * &b) + &(&a * &c);
        prop_assert!(lhs.agrees_with(&rhs, lhs.order().min(rhs.order())));
        prop_assert!((&a - &a).is_zero());
        if let Some(v) = a.val() {
            let inv = a.inv().unwrap();
            prop_assert_eq!(inv.val(), Some(-v));
            let one = &a * &inv;
            prop_assert!(one.agrees_with(&LaurentSeries::one(&k, one.order()), one.order()));
        }
        prop_assert_eq!(a.shift(3).val(), a.val().map(|v| v + 3));
    }

    #[test]
    fn padic_integers_form_a_ring(p in prop::sample::select(vec![2u64, 3, 5, 7]), x in -10_000i128..10_000, y in -10_000i128..10_000) {
        let (a, b) = (PadicInteger::from_int(p, x), PadicInteger::from_int(p, y));
        prop_assert_eq!(a.mul(&b), PadicInteger::from_int(p, x * y));
        prop_assert_eq!(a.add(&b), PadicInteger::from_int(p, x + y));
        prop_assert_eq!(a.sub(&b).add(&b), a);
        if a.is_unit() {
            prop_assert_eq!(a.mul(&a.inv().unwrap()), PadicInteger::from_int(p, 1));
        }
    }

    #[test]
    fn witt_ring_reduction_is_a_homomorphism((p, f) in small_field(), depth in 1u32..4, a in prop::collection::vec(-50i64..50, 3), b in prop::collection::vec(-50i64..50, 3)) {
        let k = field(p, f);
        let w = WittRing::new(&k, depth).unwrap();
        let (x, y) = (element(&k, &a), element(&k, &b));
        let (tx, ty) = (w.teichmuller(x), w.teichmuller(y));
        prop_assert_eq!(w.mul(&tx, &ty), w.teichmuller(k.mul(x, y)));
        prop_assert_eq!(w.reduce(&tx), x);
        prop_assert_eq!(w.reduce(&w.add(&tx, &ty)), k.add(x, y));
        prop_assert_eq!(w.reduce(&w.lift(x)), x);
        prop_assert_eq!(w.mul(&tx, &ty), w.mul(&ty, &tx));
        let u = w.add(&w.one(), &w.from_int(p as i64));
        prop_assert_eq!(w.mul(&u, &w.inv(&u).unwrap()), w.one());
    }

    #[test]
    fn frobenius_on_padic_series_is_multiplicative(p in prop::sample::select(vec![2u32, 3, 5]), x in prop::collection::vec(-20i64..20, 8), y in prop::collection::vec(-20i64..20, 8)) {
        let k = field(p, 1);
        let w = WittRing::new(&k, 3).unwrap();
        let order = 8 * p as i64;
        let a = PadicSeries::from_ints(&w, 0, order, &x);
        let b = PadicSeries::from_ints(&w, 0, order, &y);
        let lhs = a.mul(&b).phi().unwrap();
        let rhs = a.phi().unwrap().mul(&b.phi().unwrap());
        prop_assert!(lhs.agrees_with(&rhs, lhs.order().min(rhs.order())));
        let q = q_series(&w, order);
        match a.mul(&q).div_by_q().unwrap() {
            Some(back) => prop_assert!(back.agrees_with(&a, back.order())),
            None => prop_assert!(false, "q·a not divisible by q"),
        }
    }
}

fn module(p: u32, f: u32, digits: &[i64]) -> (Field, TateRing, RankOneModule) {
    let k = field(p, f);
    let ring = TateRing::new(&k, Precision::default_for(p, f as usize)).unwrap();
    let n = phigamma::rankone::twisted_digit_sum(digits, p, 0);
    let m = RankOneModule::normal_form(&k, k.one(), n).unwrap();
    (k, ring, m)
}

fn tate_element(k: &Field, f: usize, lo: i64, hi: i64, raw: &[i64]) -> TateElement {
    let len = (hi - lo) as usize * k.m();
    TateElement::new(
        (0..f)
            .map(|i| series(k, lo, hi, &raw[i * len..(i + 1) * len]))
            .collect(),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn coboundaries_are_cocycles_and_are_recognised(d0 in 0i64..3, d1 in 0i64..3, raw in prop::collection::vec(0i64..3, 2 * 10 * 2)) {
        let (k, ring, m) = module(3, 2, &[d0, d1]);
        let b = tate_element(&k, 2, -5, 5, &raw);
        let cb = coboundary(&ring, &m, &b).unwrap();
        prop_assert!(verify_cocycle(&ring, &cb, ring.order()).unwrap().pass);
        prop_assert!(coboundary_witness(&ring, &cb, -8).is_yes());
    }

    #[test]
    fn bounded_subspaces_are_linear_and_ignore_coboundaries(j0 in any::<bool>(), d0 in 0i64..4, d1 in 1i64..4, coeffs in prop::collection::vec(0i64..5, 4), raw in prop::collection::vec(0i64..5, 2 * 6 * 2)) {
        let (k, ring, m) = module(5, 2, &[d0, d1]);
        let bas = basis(&ring, &m).unwrap();
        let j: BTreeSet<usize> = if j0 { [0].into() } else { [1].into() };
        let opts = BoundedOptions::default();
        let floor = ring.precision().tail_floor;
        for prof in weight_profiles(&m, &j).unwrap() {
            let rep = compute_vj(&ring, &bas, &prof, floor, opts).unwrap();
            let mut combo = vec![k.zero(); bas.len()];
            for (row, &c) in rep.basis.iter().zip(&coeffs) {
                for (slot, &x) in combo.iter_mut().zip(row) {
                    *slot = k.add(*slot, k.mul(k.from_int(c), x));
                }
            }
            let b = tate_element(&k, 2, -3, 3, &raw);
            let c = bas.combine(&ring, &combo).add(&coboundary(&ring, &m, &b).unwrap());
            let tw = iota_twist(&ring, &c, &prof).unwrap();
            prop_assert!(is_bounded_class(&ring, &tw, floor, opts).is_yes());
        }
    }
}
