//! Dense univariate polynomials over any [`Field`].
//!
//! A [`Poly`] is a plain coefficient vector (ascending degree, no trailing
//! zeros). All arithmetic goes through a [`PolyRing`], which carries the
//! coefficient field and the variable name used for rendering.

mod factor;
mod ratfunc;

pub use ratfunc::{RatFunc, RatFuncField};

use crate::error::{Error, Result};
use crate::field::Field;

/// Below this operand length products use the schoolbook loop.
const KARATSUBA_CUTOFF: usize = 24;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly<E> {
    coeffs: Vec<E>,
}

impl<E> Poly<E> {
    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<E> {
        self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&E> {
        self.coeffs.last()
    }

    pub fn coeff(&self, i: usize) -> Option<&E> {
        self.coeffs.get(i)
    }
}

#[derive(Clone, Debug)]
pub struct PolyRing<F: Field> {
    base: F,
    var: String,
}

type P<F> = Poly<<F as Field>::Elem>;

impl<F: Field> PolyRing<F> {
    pub fn new(base: F, var: &str) -> Self {
        PolyRing {
            base,
            var: var.to_string(),
        }
    }

    pub fn base(&self) -> &F {
        &self.base
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    /// Builds a polynomial from ascending coefficients, trimming zeros.
    pub fn from_coeffs(&self, mut coeffs: Vec<F::Elem>) -> P<F> {
        self.trim(&mut coeffs);
        Poly { coeffs }
    }

    fn trim(&self, coeffs: &mut Vec<F::Elem>) {
        while coeffs.last().is_some_and(|c| self.base.is_zero(c)) {
            coeffs.pop();
        }
    }

    pub fn zero(&self) -> P<F> {
        Poly { coeffs: Vec::new() }
    }

    pub fn one(&self) -> P<F> {
        self.constant(self.base.one())
    }

    /// The variable itself.
    pub fn x(&self) -> P<F> {
        self.monomial(self.base.one(), 1)
    }

    pub fn constant(&self, c: F::Elem) -> P<F> {
        self.from_coeffs(vec![c])
    }

    /// `c * x^k`
    pub fn monomial(&self, c: F::Elem, k: usize) -> P<F> {
        if self.base.is_zero(&c) {
            return self.zero();
        }
        let mut coeffs = vec![self.base.zero(); k + 1];
        coeffs[k] = c;
        Poly { coeffs }
    }

    pub fn is_one(&self, p: &P<F>) -> bool {
        p.coeffs.len() == 1 && self.base.is_one(&p.coeffs[0])
    }

    pub fn is_monic(&self, p: &P<F>) -> bool {
        p.leading().is_some_and(|c| self.base.is_one(c))
    }

    /// Number of nonzero coefficients.
    pub fn term_count(&self, p: &P<F>) -> usize {
        p.coeffs.iter().filter(|c| !self.base.is_zero(c)).count()
    }

    pub fn add(&self, a: &P<F>, b: &P<F>) -> P<F> {
        let mut out = a.clone();
        self.add_assign(&mut out, b);
        out
    }

    pub fn add_assign(&self, a: &mut P<F>, b: &P<F>) {
        if a.coeffs.len() < b.coeffs.len() {
            a.coeffs.resize(b.coeffs.len(), self.base.zero());
        }
        for (x, y) in a.coeffs.iter_mut().zip(&b.coeffs) {
            self.base.add_assign(x, y);
        }
        self.trim(&mut a.coeffs);
    }

    pub fn sub(&self, a: &P<F>, b: &P<F>) -> P<F> {
        let mut out = a.clone();
        if out.coeffs.len() < b.coeffs.len() {
            out.coeffs.resize(b.coeffs.len(), self.base.zero());
        }
        for (x, y) in out.coeffs.iter_mut().zip(&b.coeffs) {
            self.base.sub_assign(x, y);
        }
        self.trim(&mut out.coeffs);
        out
    }

    pub fn neg(&self, a: &P<F>) -> P<F> {
        Poly {
            coeffs: a.coeffs.iter().map(|c| self.base.neg(c)).collect(),
        }
    }

    pub fn scale(&self, a: &P<F>, c: &F::Elem) -> P<F> {
        if self.base.is_one(c) {
            return a.clone();
        }
        self.from_coeffs(a.coeffs.iter().map(|x| self.base.mul(x, c)).collect())
    }

    /// Multiplies by `x^k`.
    pub fn shift(&self, a: &P<F>, k: usize) -> P<F> {
        if a.is_zero() {
            return self.zero();
        }
        let mut coeffs = vec![self.base.zero(); k];
        coeffs.extend(a.coeffs.iter().cloned());
        Poly { coeffs }
    }

    pub fn mul(&self, a: &P<F>, b: &P<F>) -> P<F> {
        if a.is_zero() || b.is_zero() {
            return self.zero();
        }
        let (long, short) = if a.coeffs.len() >= b.coeffs.len() {
            (&a.coeffs, &b.coeffs)
        } else {
            (&b.coeffs, &a.coeffs)
        };
        let mut out = vec![self.base.zero(); long.len() + short.len() - 1];
        self.mul_into(long, short, &mut out);
        self.from_coeffs(out)
    }

    /// Schoolbook product of two polynomials, skipping zero coefficients.
    pub fn mul_schoolbook(&self, a: &P<F>, b: &P<F>) -> P<F> {
        if a.is_zero() || b.is_zero() {
            return self.zero();
        }
        let mut out = vec![self.base.zero(); a.coeffs.len() + b.coeffs.len() - 1];
        self.schoolbook_into(&a.coeffs, &b.coeffs, &mut out);
        self.from_coeffs(out)
    }

    fn schoolbook_into(&self, a: &[F::Elem], b: &[F::Elem], out: &mut [F::Elem]) {
        let b_terms: Vec<(usize, &F::Elem)> = b
            .iter()
            .enumerate()
            .filter(|(_, c)| !self.base.is_zero(c))
            .collect();
        for (i, x) in a.iter().enumerate() {
            if self.base.is_zero(x) {
                continue;
            }
            for &(j, y) in &b_terms {
                self.base.mul_add_assign(&mut out[i + j], x, y);
            }
        }
    }

    /// `out += a * b` with `a.len() >= b.len()`.
    fn mul_into(&self, a: &[F::Elem], b: &[F::Elem], out: &mut [F::Elem]) {
        debug_assert!(a.len() >= b.len());
        if b.is_empty() {
            return;
        }
        if b.len() < KARATSUBA_CUTOFF || self.sparse_enough(a, b) {
            self.schoolbook_into(a, b, out);
            return;
        }
        if 2 * b.len() <= a.len() {
            for (i, chunk) in a.chunks(b.len()).enumerate() {
                let off = i * b.len();
                if chunk.len() >= b.len() {
                    self.mul_into(chunk, b, &mut out[off..]);
                } else {
                    self.mul_into(b, chunk, &mut out[off..]);
                }
            }
            return;
        }
        let m = a.len().div_ceil(2);
        let (a0, a1) = a.split_at(m);
        if b.len() <= m {
            self.mul_into(a0, b, out);
            if a1.len() >= b.len() {
                self.mul_into(a1, b, &mut out[m..]);
            } else {
                self.mul_into(b, a1, &mut out[m..]);
            }
            return;
        }
        let (b0, b1) = b.split_at(m);

        let mut z0 = vec![self.base.zero(); 2 * m - 1];
        self.mul_into(a0, b0, &mut z0);
        let mut z2 = vec![self.base.zero(); a1.len() + b1.len() - 1];
        if a1.len() >= b1.len() {
            self.mul_into(a1, b1, &mut z2);
        } else {
            self.mul_into(b1, a1, &mut z2);
        }
        let mut sa = a0.to_vec();
        for (x, y) in sa.iter_mut().zip(a1) {
            self.base.add_assign(x, y);
        }
        let mut sb = b0.to_vec();
        for (x, y) in sb.iter_mut().zip(b1) {
            self.base.add_assign(x, y);
        }
        let mut z1 = vec![self.base.zero(); 2 * m - 1];
        self.mul_into(&sa, &sb, &mut z1);
        for (x, y) in z1.iter_mut().zip(&z0) {
            self.base.sub_assign(x, y);
        }
        for (x, y) in z1.iter_mut().zip(&z2) {
            self.base.sub_assign(x, y);
        }
        for (x, y) in out.iter_mut().zip(&z0) {
            self.base.add_assign(x, y);
        }
        for (x, y) in out[m..].iter_mut().zip(&z1) {
            self.base.add_assign(x, y);
        }
        for (x, y) in out[2 * m..].iter_mut().zip(&z2) {
            self.base.add_assign(x, y);
        }
    }

    /// Sparse operands (Dickson polynomials over GF(2) are) are cheaper
    /// to multiply term by term than to split.
    fn sparse_enough(&self, a: &[F::Elem], b: &[F::Elem]) -> bool {
        let nnz = |s: &[F::Elem]| s.iter().filter(|c| !self.base.is_zero(c)).count();
        let karatsuba_cost = a.len() as f64 * (b.len() as f64).powf(0.585) * 3.0;
        (nnz(a) * nnz(b)) as f64 <= karatsuba_cost
    }

    pub fn square(&self, a: &P<F>) -> P<F> {
        if self.base.characteristic() != 2 {
            return self.mul(a, a);
        }
        // Cross terms vanish in characteristic 2.
        let Some(d) = a.degree() else {
            return self.zero();
        };
        let mut coeffs = vec![self.base.zero(); 2 * d + 1];
        for (i, c) in a.coeffs.iter().enumerate() {
            if !self.base.is_zero(c) {
                coeffs[2 * i] = self.base.square(c);
            }
        }
        self.from_coeffs(coeffs)
    }

    pub fn pow(&self, a: &P<F>, mut e: u64) -> P<F> {
        let mut result = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.square(&base);
            }
        }
        result
    }

    /// Returns `(q, r)` with `a = q*b + r` and `deg r < deg b`.
    pub fn divrem(&self, a: &P<F>, b: &P<F>) -> Result<(P<F>, P<F>)> {
        let db = b.degree().ok_or(Error::DivisionByZero)?;
        let Some(da) = a.degree().filter(|&da| da >= db) else {
            return Ok((self.zero(), a.clone()));
        };
        let lead = b.leading().expect("nonzero divisor");
        let lead_inv = if self.base.is_one(lead) {
            None
        } else {
            Some(self.base.inv(lead)?)
        };
        let b_terms: Vec<(usize, F::Elem)> = b.coeffs[..db]
            .iter()
            .enumerate()
            .filter(|(_, c)| !self.base.is_zero(c))
            .map(|(j, c)| (j, self.base.neg(c)))
            .collect();
        let mut r = a.coeffs.clone();
        let mut q = vec![self.base.zero(); da - db + 1];
        for i in (0..=da - db).rev() {
            let top = std::mem::replace(&mut r[i + db], self.base.zero());
            if self.base.is_zero(&top) {
                continue;
            }
            let c = match &lead_inv {
                Some(li) => self.base.mul(&top, li),
                None => top,
            };
            for (j, nb) in &b_terms {
                self.base.mul_add_assign(&mut r[i + j], &c, nb);
            }
            q[i] = c;
        }
        r.truncate(db);
        Ok((self.from_coeffs(q), self.from_coeffs(r)))
    }

    pub fn rem(&self, a: &P<F>, b: &P<F>) -> Result<P<F>> {
        Ok(self.divrem(a, b)?.1)
    }

    /// Quotient `a / b`, failing unless the remainder is zero.
    pub fn exact_div(&self, a: &P<F>, b: &P<F>) -> Result<P<F>> {
        let (q, r) = self.divrem(a, b)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::InexactDivision(format!(
                "({}) / ({}) leaves {}",
                self.render(a),
                self.render(b),
                self.render(&r)
            )))
        }
    }

    /// Scales to leading coefficient one. Zero stays zero.
    pub fn monic(&self, a: &P<F>) -> Result<P<F>> {
        match a.leading() {
            None => Ok(self.zero()),
            Some(c) if self.base.is_one(c) => Ok(a.clone()),
            Some(c) => Ok(self.scale(a, &self.base.inv(c)?)),
        }
    }

    /// Monic greatest common divisor by the Euclidean algorithm, with
    /// every remainder made monic before the next step.
    pub fn gcd(&self, a: &P<F>, b: &P<F>) -> Result<P<F>> {
        if a.is_zero() && b.is_zero() {
            return Err(Error::UndefinedGcd);
        }
        let (mut a, mut b) = (self.monic(a)?, self.monic(b)?);
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = self.rem(&a, &b)?;
            a = b;
            b = self.monic(&r)?;
        }
        Ok(a)
    }

    /// `outer(inner)` by Horner's rule over the polynomial ring.
    pub fn compose(&self, outer: &P<F>, inner: &P<F>) -> P<F> {
        let mut acc = self.zero();
        for c in outer.coeffs.iter().rev() {
            acc = self.mul(&acc, inner);
            let c = self.constant(c.clone());
            self.add_assign(&mut acc, &c);
        }
        acc
    }

    pub fn derivative(&self, a: &P<F>) -> P<F> {
        let coeffs = a
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| self.times(c, i as u64))
            .collect();
        self.from_coeffs(coeffs)
    }

    /// `k * c` as an iterated sum.
    fn times(&self, c: &F::Elem, k: u64) -> F::Elem {
        let p = self.base.characteristic();
        let mut k = if p > 0 { k % p } else { k };
        let mut acc = self.base.zero();
        let mut base = c.clone();
        while k > 0 {
            if k & 1 == 1 {
                self.base.add_assign(&mut acc, &base);
            }
            base = self.base.add(&base, &base);
            k >>= 1;
        }
        acc
    }

    pub fn eval(&self, a: &P<F>, at: &F::Elem) -> F::Elem {
        let mut acc = self.base.zero();
        for c in a.coeffs.iter().rev() {
            acc = self.base.mul(&acc, at);
            self.base.add_assign(&mut acc, c);
        }
        acc
    }

    pub fn mulmod(&self, a: &P<F>, b: &P<F>, m: &P<F>) -> Result<P<F>> {
        self.rem(&self.mul(a, b), m)
    }

    /// Transports a polynomial into another ring coefficient by coefficient.
    pub fn map_into<G: Field>(
        &self,
        a: &P<F>,
        target: &PolyRing<G>,
        f: impl Fn(&F::Elem) -> G::Elem,
    ) -> Poly<G::Elem> {
        target.from_coeffs(a.coeffs.iter().map(f).collect())
    }

    /// Descending powers joined by `" + "`, e.g. `X^3 + (Y^2+1)*X + Y`.
    pub fn render(&self, a: &P<F>) -> String {
        self.render_with(a, " + ")
    }

    /// Compact form used when this polynomial is itself a coefficient.
    pub fn render_nested(&self, a: &P<F>) -> String {
        self.render_with(a, "+")
    }

    fn render_with(&self, a: &P<F>, sep: &str) -> String {
        let terms: Vec<(usize, &F::Elem)> = a
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !self.base.is_zero(c))
            .collect();
        if terms.is_empty() {
            return "0".to_string();
        }
        let single = terms.len() == 1;
        terms
            .into_iter()
            .map(|(k, c)| {
                let power = match k {
                    0 => String::new(),
                    1 => self.var.clone(),
                    _ => format!("{}^{}", self.var, k),
                };
                let coeff = self.base.render(c);
                let coeff = if self.base.is_compound(c) && !(single && k == 0) {
                    format!("({coeff})")
                } else {
                    coeff
                };
                match (k, self.base.is_one(c)) {
                    (0, _) => coeff,
                    (_, true) => power,
                    _ => format!("{coeff}*{power}"),
                }
            })
            .collect::<Vec<_>>()
            .join(sep)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2n::{field_new, FieldSpec, FqElem};

    fn gf2() -> PolyRing<FieldSpec> {
        PolyRing::new(field_new(1).unwrap(), "x")
    }

    /// Polynomial over GF(2) from its exponents.
    fn p(ring: &PolyRing<FieldSpec>, exps: &[usize]) -> Poly<FqElem> {
        let mut out = ring.zero();
        for &e in exps {
            out = ring.add(&out, &ring.monomial(FqElem::ONE, e));
        }
        out
    }

    #[test]
    fn products_over_gf2() {
        let r = gf2();
        assert_eq!(r.mul(&p(&r, &[1, 0]), &p(&r, &[1, 0])), p(&r, &[2, 0]));
        assert_eq!(r.mul(&p(&r, &[1]), &r.zero()), r.zero());
        assert_eq!(r.mul(&p(&r, &[1, 0]), &p(&r, &[2, 1])), p(&r, &[3, 1]));
    }

    #[test]
    fn divrem_over_gf2() {
        let r = gf2();
        let (q, rem) = r.divrem(&p(&r, &[3, 1, 0]), &p(&r, &[1, 0])).unwrap();
        assert_eq!(q, p(&r, &[2, 1]));
        assert_eq!(rem, r.one());
        let a = p(&r, &[5, 2, 0]);
        assert_eq!(r.divrem(&a, &a).unwrap(), (r.one(), r.zero()));
        let (q, rem) = r.divrem(&p(&r, &[3, 1]), &p(&r, &[1, 0])).unwrap();
        assert_eq!((q, rem), (p(&r, &[2, 1]), r.zero()));
        assert_eq!(r.divrem(&a, &r.zero()).unwrap_err(), Error::DivisionByZero);
        assert!(matches!(
            r.exact_div(&p(&r, &[3, 1, 0]), &p(&r, &[1, 0])),
            Err(Error::InexactDivision(_))
        ));
    }

    #[test]
    fn gcd_over_gf2() {
        let r = gf2();
        assert_eq!(
            r.gcd(&p(&r, &[2, 0]), &p(&r, &[1, 0])).unwrap(),
            p(&r, &[1, 0])
        );
        assert_eq!(r.gcd(&p(&r, &[2, 1, 0]), &p(&r, &[1, 0])).unwrap(), r.one());
        assert_eq!(r.gcd(&p(&r, &[3, 1]), &r.zero()).unwrap(), p(&r, &[3, 1]));
        assert_eq!(
            r.gcd(&r.zero(), &r.zero()).unwrap_err(),
            Error::UndefinedGcd
        );
    }

    #[test]
    fn gcd_of_zero_is_monic_scaling() {
        let f = field_new(2).unwrap();
        let r = PolyRing::new(f.clone(), "x");
        let a = r.from_coeffs(vec![f.elem(1).unwrap(), f.elem(2).unwrap()]);
        let g = r.gcd(&a, &r.zero()).unwrap();
        assert!(r.is_monic(&g));
        assert_eq!(g, r.scale(&a, &f.inv(f.elem(2).unwrap()).unwrap()));
    }

    #[test]
    fn composition_over_gf2() {
        let r = gf2();
        let d2 = p(&r, &[2]);
        let d3 = p(&r, &[3, 1]);
        assert_eq!(r.compose(&d2, &d3), p(&r, &[6, 2]));
        let f = p(&r, &[7, 3, 0]);
        assert_eq!(r.compose(&f, &r.x()), f);
        assert_eq!(r.compose(&r.x(), &f), f);
    }

    #[test]
    fn derivative_in_char_two() {
        let r = gf2();
        assert_eq!(r.derivative(&p(&r, &[3, 1, 0])), p(&r, &[2, 0]));
        assert_eq!(r.derivative(&p(&r, &[2])), r.zero());
        assert_eq!(r.derivative(&r.one()), r.zero());
    }

    #[test]
    fn evaluation() {
        let r = gf2();
        assert_eq!(r.eval(&p(&r, &[2, 1, 0]), &FqElem::ONE), FqElem::ONE);
        let f = field_new(3).unwrap();
        let r3 = PolyRing::new(f.clone(), "x");
        let a = r3.from_coeffs(vec![
            f.elem(5).unwrap(),
            f.elem(3).unwrap(),
            f.elem(7).unwrap(),
        ]);
        assert_eq!(r3.eval(&a, &FqElem::ZERO), f.elem(5).unwrap());
    }

    #[test]
    fn rendering() {
        let r = PolyRing::new(field_new(2).unwrap(), "X");
        assert_eq!(r.render(&r.zero()), "0");
        let a = r.from_coeffs(vec![FqElem::ONE, FqElem::ZERO, r.base().elem(3).unwrap()]);
        assert_eq!(r.render(&a), "0x3*X^2 + 1");
        assert_eq!(r.render(&r.x()), "X");
    }

    #[test]
    fn karatsuba_matches_schoolbook_on_dense_input() {
        let f = field_new(8).unwrap();
        let r = PolyRing::new(f.clone(), "x");
        let mut state = 0x1234_5678u32;
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 17;
            state ^= state << 5;
            f.elem(state & 0xff).unwrap()
        };
        for (la, lb) in [(100, 100), (257, 64), (300, 31), (40, 200), (1000, 999)] {
            let a = r.from_coeffs((0..la).map(|_| next()).collect());
            let b = r.from_coeffs((0..lb).map(|_| next()).collect());
            assert_eq!(r.mul(&a, &b), r.mul_schoolbook(&a, &b), "{la} x {lb}");
        }
    }

    #[test]
    fn char_two_square_matches_product() {
        let f = field_new(4).unwrap();
        let r = PolyRing::new(f.clone(), "x");
        let a = r.from_coeffs(f.elements().collect());
        assert_eq!(r.square(&a), r.mul_schoolbook(&a, &a));
        assert_eq!(r.pow(&a, 5), r.mul(&r.square(&r.square(&a)), &a));
    }
}
