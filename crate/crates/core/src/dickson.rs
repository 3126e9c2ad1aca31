//! Dickson polynomials in characteristic 2 and the polynomial
//! `C(x) = x (sum_(i<n) x^(2^i - 1))^(q+1)`.
//!
//! Over the integers `D_0 = 2`, `D_1 = x` and `D_k = x D_(k-1) - D_(k-2)`.
//! Reduced mod 2 this is `D_0 = 0`, `D_k = x D_(k-1) + D_(k-2)`, so every
//! coefficient is 0 or 1. The recursion runs once over GF(2) on packed
//! bit vectors; results are memoized and lifted into whatever coefficient
//! ring the caller needs.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::gf2n::{field_new, FieldSpec, FqElem};
use crate::poly::{Poly, PolyRing};

/// Largest index the memo cache accepts.
pub const MAX_DICKSON_INDEX: u32 = 1 << 20;

/// Largest `n` accepted by [`mcm_poly`]; the degree grows like `4^n / 2`.
pub const MAX_MCM_N: u32 = 12;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct DicksonIndex(u32);

impl DicksonIndex {
    pub fn new(k: u64) -> Result<Self> {
        if k > u64::from(MAX_DICKSON_INDEX) {
            return Err(Error::IndexTooLarge(k));
        }
        Ok(DicksonIndex(k as u32))
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

/// Coefficients of `D_k` mod 2, bit `i` = coefficient of `x^i`.
type Bits = Arc<Vec<u64>>;

fn cache() -> &'static RwLock<HashMap<u32, Bits>> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Bits>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn dickson_bits(k: DicksonIndex) -> Bits {
    let k = k.get();
    if let Some(hit) = cache().read().expect("cache lock").get(&k) {
        return Arc::clone(hit);
    }
    let bits = Arc::new(run_recursion(k));
    cache()
        .write()
        .expect("cache lock")
        .entry(k)
        .or_insert(bits)
        .clone()
}

fn run_recursion(k: u32) -> Vec<u64> {
    let words = k as usize / 64 + 1;
    let mut prev = vec![0u64; words]; // D_0 = 0
    let mut cur = vec![0u64; words];
    if k == 0 {
        return cur;
    }
    cur[0] = 0b10; // D_1 = x
    for step in 2..=k {
        // next = x * cur + prev, written into prev's buffer
        let live = step as usize / 64 + 1;
        let mut carry = 0u64;
        for i in 0..live {
            let shifted = cur[i] << 1 | carry;
            carry = cur[i] >> 63;
            prev[i] ^= shifted;
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    cur
}

/// `D_k` with coefficients in the ring's base field.
pub fn dickson_in<F: Field>(k: u32, ring: &PolyRing<F>) -> Result<Poly<F::Elem>> {
    let bits = dickson_bits(DicksonIndex::new(u64::from(k))?);
    let base = ring.base();
    let coeffs = (0..=k as usize)
        .map(|i| {
            if bits[i / 64] >> (i % 64) & 1 == 1 {
                base.one()
            } else {
                base.zero()
            }
        })
        .collect();
    Ok(ring.from_coeffs(coeffs))
}

/// `D_k` as a polynomial over `f`.
pub fn dickson_poly(k: u32, f: &FieldSpec) -> Result<Poly<FqElem>> {
    dickson_in(k, &PolyRing::new(f.clone(), "X"))
}

/// `D_k ∘ D_l = D_l ∘ D_k = D_(kl)`
pub fn verify_composition(k: u32, l: u32, f: &FieldSpec) -> Result<bool> {
    if k == 0 || l == 0 {
        return Err(Error::Precondition("composition needs k, l >= 1".into()));
    }
    let kl = u64::from(k) * u64::from(l);
    let kl = DicksonIndex::new(kl)?.get();
    let ring = PolyRing::new(f.clone(), "X");
    let dk = dickson_in(k, &ring)?;
    let dl = dickson_in(l, &ring)?;
    let dkl = dickson_in(kl, &ring)?;
    Ok(ring.compose(&dk, &dl) == dkl && ring.compose(&dl, &dk) == dkl)
}

/// `D_k D_l = D_(k+l) + D_|k-l|`
pub fn verify_product_formula(k: u32, l: u32, f: &FieldSpec) -> Result<bool> {
    let sum = DicksonIndex::new(u64::from(k) + u64::from(l))?.get();
    let ring = PolyRing::new(f.clone(), "X");
    let lhs = ring.mul(&dickson_in(k, &ring)?, &dickson_in(l, &ring)?);
    let rhs = ring.add(&dickson_in(sum, &ring)?, &dickson_in(k.abs_diff(l), &ring)?);
    Ok(lhs == rhs)
}

/// `C(x) = x (sum_(i<n) x^(2^i - 1))^(q+1)` over GF(2), `q = 2^n`, of
/// degree `(q^2 - q)/2`.
pub fn mcm_poly(n: u32) -> Result<Poly<FqElem>> {
    if !(1..=MAX_MCM_N).contains(&n) {
        return Err(Error::Precondition(format!(
            "MCM polynomial needs 1 <= n <= {MAX_MCM_N}, got {n}"
        )));
    }
    let ring = PolyRing::new(field_new(1)?, "X");
    let q = 1u64 << n;
    let inner = (0..n).fold(ring.zero(), |acc, i| {
        ring.add(&acc, &ring.monomial(FqElem::ONE, (1usize << i) - 1))
    });
    let c = ring.shift(&ring.pow(&inner, q + 1), 1);
    let expected = ((q * q - q) / 2) as usize;
    assert_eq!(c.degree(), Some(expected), "deg C must be (q^2 - q)/2");
    Ok(c)
}
