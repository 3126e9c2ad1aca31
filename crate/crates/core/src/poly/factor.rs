//! Squarefree part and distinct-degree factorization over GF(2^n).

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::gf2n::{FieldSpec, FqElem};

use super::{Poly, PolyRing};

impl PolyRing<FieldSpec> {
    /// Product of the distinct monic irreducible factors of `a`.
    pub fn squarefree_part(&self, a: &Poly<FqElem>) -> Result<Poly<FqElem>> {
        if a.is_zero() {
            return Err(Error::Precondition(
                "squarefree part of the zero polynomial".into(),
            ));
        }
        let a = self.monic(a)?;
        if a.degree() == Some(0) {
            return Ok(self.one());
        }
        let da = self.derivative(&a);
        if da.is_zero() {
            return self.squarefree_part(&self.square_root(&a));
        }
        // a / gcd(a, a') keeps the factors of odd multiplicity; the rest
        // survive in the gcd.
        let g = self.gcd(&a, &da)?;
        let odd = self.exact_div(&a, &g)?;
        if g.degree() == Some(0) {
            return Ok(odd);
        }
        let rest = self.squarefree_part(&g)?;
        let common = self.gcd(&odd, &rest)?;
        self.exact_div(&self.mul(&odd, &rest), &common)
    }

    /// For `a = b(x^2)` returns `c` with `c^2 = a`.
    fn square_root(&self, a: &Poly<FqElem>) -> Poly<FqElem> {
        let f = self.base();
        self.from_coeffs(a.coeffs().iter().step_by(2).map(|&c| f.sqrt(c)).collect())
    }

    /// `w^q mod m` via `n` squarings, `q = 2^n`.
    fn frobenius_mod(&self, w: &Poly<FqElem>, m: &Poly<FqElem>) -> Result<Poly<FqElem>> {
        let mut w = w.clone();
        for _ in 0..self.base().n() {
            w = self.rem(&self.square(&w), m)?;
        }
        Ok(w)
    }

    /// Degrees of the irreducible factors of a squarefree polynomial.
    pub fn ddf_degrees(&self, a: &Poly<FqElem>) -> Result<BTreeSet<usize>> {
        if a.degree().unwrap_or(0) == 0 {
            return Err(Error::Precondition(
                "distinct-degree factorization needs a nonconstant polynomial".into(),
            ));
        }
        let mut rest = self.monic(a)?;
        let da = self.derivative(&rest);
        if da.is_zero() || !self.is_one(&self.gcd(&rest, &da)?) {
            return Err(Error::NotSquarefree);
        }
        let x = self.x();
        let mut w = self.rem(&x, &rest)?;
        let mut degrees = BTreeSet::new();
        let mut d = 0;
        while rest.degree().expect("nonzero") >= 2 * (d + 1) {
            d += 1;
            w = self.frobenius_mod(&w, &rest)?;
            let g = self.gcd(&rest, &self.sub(&w, &x))?;
            if g.degree() > Some(0) {
                degrees.insert(d);
                rest = self.exact_div(&rest, &g)?;
                w = self.rem(&w, &rest)?;
            }
        }
        if let Some(r) = rest.degree().filter(|&r| r > 0) {
            degrees.insert(r);
        }
        Ok(degrees)
    }
}
