mod common;

use dickson_core::dickson::{dickson_poly, verify_composition, verify_product_formula};
use dickson_core::splitting::splitting_degree;
use dickson_core::{field_new, Field, FieldSpec, FqElem, Poly, PolyRing, RatFuncField};
use proptest::prelude::*;

fn ring(n: u32) -> PolyRing<FieldSpec> {
    PolyRing::new(field_new(n).unwrap(), "x")
}

fn poly(r: &PolyRing<FieldSpec>, bits: &[u32]) -> Poly<FqElem> {
    let mask = (r.base().order() - 1) as u32;
    r.from_coeffs(
        bits.iter()
            .map(|b| r.base().elem(b & mask).unwrap())
            .collect(),
    )
}

fn coeffs(max_len: usize) -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(any::<u32>(), 0..max_len)
}

fn degree_n() -> impl Strategy<Value = u32> {
    prop_oneof![Just(1u32), Just(2), Just(8), 3u32..=16]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(n in degree_n(), a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let f = field_new(n).unwrap();
        let mask = (f.order() - 1) as u32;
        let (a, b, c) = (f.elem(a & mask).unwrap(), f.elem(b & mask).unwrap(), f.elem(c & mask).unwrap());
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, a), FqElem::ZERO);
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), FqElem::ONE);
        }
        prop_assert_eq!(f.pow(a, f.order()), a);
    }

    #[test]
    fn ring_laws(n in prop_oneof![Just(1u32), Just(2), Just(8)], a in coeffs(40), b in coeffs(40), c in coeffs(40)) {
        let r = ring(n);
        let (a, b, c) = (poly(&r, &a), poly(&r, &b), poly(&r, &c));
        prop_assert_eq!(r.mul(&a, &b), r.mul(&b, &a));
        prop_assert_eq!(r.mul(&r.mul(&a, &b), &c), r.mul(&a, &r.mul(&b, &c)));
        prop_assert_eq!(r.mul(&a, &r.add(&b, &c)), r.add(&r.mul(&a, &b), &r.mul(&a, &c)));
        prop_assert!(r.sub(&a, &a).is_zero());
        prop_assert_eq!(r.square(&a), r.mul(&a, &a));
    }

    #[test]
    fn karatsuba_matches_schoolbook(n in prop_oneof![Just(1u32), Just(4)], a in coeffs(300), b in coeffs(300)) {
        let r = ring(n);
        let (a, b) = (poly(&r, &a), poly(&r, &b));
        prop_assert_eq!(r.mul(&a, &b), r.mul_schoolbook(&a, &b));
    }

    #[test]
    fn divrem_round_trip(n in prop_oneof![Just(1u32), Just(3), Just(8)], a in coeffs(60), b in coeffs(30)) {
        let r = ring(n);
        let (a, b) = (poly(&r, &a), poly(&r, &b));
        prop_assume!(!b.is_zero());
        let (q, rem) = r.divrem(&a, &b).unwrap();
        prop_assert_eq!(r.add(&r.mul(&q, &b), &rem), a);
        prop_assert!(rem.degree() < b.degree() || rem.is_zero());
    }

    #[test]
    fn gcd_properties(n in prop_oneof![Just(1u32), Just(2)], a in coeffs(20), b in coeffs(20), c in coeffs(8), s in 1u32..4) {
        let r = ring(n);
        let (a, b, c) = (poly(&r, &a), poly(&r, &b), poly(&r, &c));
        prop_assume!(!a.is_zero() && !b.is_zero() && !c.is_zero());
        let (ac, bc) = (r.mul(&a, &c), r.mul(&b, &c));
        let g = r.gcd(&ac, &bc).unwrap();
        prop_assert!(r.is_monic(&g));
        prop_assert!(r.rem(&ac, &g).unwrap().is_zero());
        prop_assert!(r.rem(&bc, &g).unwrap().is_zero());
        prop_assert!(r.rem(&g, &r.monic(&c).unwrap()).unwrap().is_zero());
        let scalar = r.base().elem(s & (r.base().order() as u32 - 1)).unwrap();
        prop_assume!(!scalar.is_zero());
        prop_assert_eq!(r.gcd(&r.scale(&ac, &scalar), &bc).unwrap(), g);
    }

    #[test]
    fn composition_evaluates(a in coeffs(12), b in coeffs(12), x in any::<u32>()) {
        let r = ring(8);
        let (a, b) = (poly(&r, &a), poly(&r, &b));
        let x = r.base().elem(x & 0xff).unwrap();
        prop_assert_eq!(r.eval(&r.compose(&a, &b), &x), r.eval(&a, &r.eval(&b, &x)));
    }

    #[test]
    fn rational_functions_normalize(a in coeffs(8), b in coeffs(8), c in coeffs(8)) {
        let k = RatFuncField::new(field_new(1).unwrap(), "Y");
        let pr = k.ring();
        let (a, b, c) = (poly(pr, &a), poly(pr, &b), poly(pr, &c));
        prop_assume!(!b.is_zero() && !c.is_zero());
        let x = k.from_parts(a.clone(), b.clone()).unwrap();
        prop_assert!(k.is_reduced(&x));
        // (a c)/(b c) is the same element as a/b
        let y = k.from_parts(pr.mul(&a, &c), pr.mul(&b, &c)).unwrap();
        prop_assert_eq!(&x, &y);
        prop_assert_eq!(k.mul(&x, &k.from_poly(b)), k.from_poly(a));
        if !x.num().is_zero() {
            prop_assert!(k.is_one(&k.mul(&x, &k.inv(&x).unwrap())));
        }
        let z = k.from_parts(c.clone(), pr.one()).unwrap();
        prop_assert_eq!(k.mul(&k.add(&x, &z), &z), k.add(&k.mul(&x, &z), &k.mul(&z, &z)));
    }

    #[test]
    fn dickson_functional_equation_pointwise(k in 0u32..400, u in 1u32..256) {
        // D_k(u + 1/u) = u^k + u^(-k) in GF(2^8)
        let f = field_new(8).unwrap();
        let u = f.elem(u).unwrap();
        let ui = f.inv(u).unwrap();
        let d = dickson_poly(k, &f).unwrap();
        let r = PolyRing::new(f.clone(), "x");
        prop_assert_eq!(r.eval(&d, &f.add(u, ui)), f.add(f.pow(u, k as u64), f.pow(ui, k as u64)));
    }

    #[test]
    fn dickson_formulas_random(k in 1u32..120, l in 1u32..120) {
        let f = field_new(1).unwrap();
        prop_assert!(verify_composition(k, l, &f).unwrap());
        prop_assert!(verify_product_formula(k, l, &f).unwrap());
    }

    #[test]
    fn splitting_degree_affine_invariance(n in 1u32..=3, a in coeffs(10), s in 1u32..8, c in any::<u32>()) {
        let r = ring(n);
        let f = poly(&r, &a);
        prop_assume!(f.degree().unwrap_or(0) >= 1);
        let mask = (r.base().order() - 1) as u32;
        let s = r.base().elem(s & mask).unwrap();
        prop_assume!(!s.is_zero());
        let c = r.base().elem(c & mask).unwrap();
        let base = splitting_degree(&r, &f).unwrap().splitting_degree;
        prop_assert_eq!(splitting_degree(&r, &r.scale(&f, &s)).unwrap().splitting_degree, base);
        let shifted = r.compose(&f, &r.add(&r.x(), &r.constant(c)));
        prop_assert_eq!(splitting_degree(&r, &shifted).unwrap().splitting_degree, base);
    }
}

/// Every monic polynomial of degree 1..=6 over GF(2^n), as coefficient
/// vectors.
fn monic_polys(f: &FieldSpec, max_deg: usize) -> Vec<Vec<FqElem>> {
    let q = f.order() as usize;
    let mut out = Vec::new();
    for d in 1..=max_deg {
        for code in 0..q.pow(d as u32) {
            let mut c: Vec<FqElem> = (0..d)
                .map(|i| f.elem(((code / q.pow(i as u32)) % q) as u32).unwrap())
                .collect();
            c.push(FqElem::ONE);
            out.push(c);
        }
    }
    out
}

#[test]
fn ddf_matches_root_search_exhaustively() {
    for n in [1, 2] {
        let r = ring(n);
        let f = r.base().clone();
        for c in monic_polys(&f, 6) {
            let p = r.from_coeffs(c.clone());
            let ddf = r.ddf_degrees(&r.squarefree_part(&p).unwrap()).unwrap();
            let oracle = common::factor_degrees_by_roots(&f, &c);
            assert_eq!(ddf, oracle, "{} over GF(2^{n})", r.render(&p));
            assert_eq!(
                splitting_degree(&r, &p).unwrap().splitting_degree,
                common::lcm(&oracle)
            );
        }
    }
}
