//! Brute-force factor-degree oracle shared by the integration tests.

#![allow(dead_code)]

use std::collections::BTreeSet;

use dickson_core::{field_new, FieldSpec, FqElem};

/// Number of distinct roots of `f` (coefficients in GF(2^n)) lying in
/// GF(2^(n m)), by evaluating at every element.
pub fn count_roots(base: &FieldSpec, f: &[FqElem], m: u32) -> usize {
    let big = field_new(base.n() * m).expect("extension fits");
    let emb = base.embedding_into(&big).expect("subfield");
    let coeffs: Vec<FqElem> = f.iter().map(|&c| emb.map(c)).collect();
    big.elements()
        .filter(|&x| {
            coeffs
                .iter()
                .rev()
                .fold(FqElem::ZERO, |acc, &c| big.add(big.mul(acc, x), c))
                .is_zero()
        })
        .count()
}

/// Degrees of the distinct irreducible factors of a nonconstant `f`,
/// recovered from root counts: GF(q^m) holds `sum_(d | m) d N_d` distinct
/// roots, with `N_d` the number of degree-`d` factors.
pub fn factor_degrees_by_roots(base: &FieldSpec, f: &[FqElem]) -> BTreeSet<usize> {
    let deg = f.iter().rposition(|c| !c.is_zero()).expect("nonzero");
    assert!(deg >= 1);
    let mut counts = vec![0usize; deg + 1];
    for m in 1..=deg {
        let roots = count_roots(base, f, m as u32);
        let smaller: usize = (1..m).filter(|d| m % d == 0).map(|d| d * counts[d]).sum();
        assert_eq!((roots - smaller) % m, 0);
        counts[m] = (roots - smaller) / m;
    }
    (1..=deg).filter(|&d| counts[d] > 0).collect()
}

pub fn lcm(degrees: &BTreeSet<usize>) -> u64 {
    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    degrees
        .iter()
        .fold(1, |acc, &d| acc / gcd(acc, d as u64) * d as u64)
}
