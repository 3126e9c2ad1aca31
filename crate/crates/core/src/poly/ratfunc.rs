//! The rational function field `K(Y)` over a base field `K`.
//!
//! Using [`RatFuncField`] as the coefficient field of a [`PolyRing`] gives
//! the bivariate arena `K(Y)[X]`. Fractions are kept reduced with a monic
//! denominator, so structural equality is field equality. When both
//! operands have denominator one the arithmetic never touches a gcd.

use crate::error::{Error, Result};
use crate::field::Field;

use super::{Poly, PolyRing};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFunc<E> {
    num: Poly<E>,
    den: Poly<E>,
}

impl<E> RatFunc<E> {
    pub fn num(&self) -> &Poly<E> {
        &self.num
    }

    pub fn den(&self) -> &Poly<E> {
        &self.den
    }

    /// Denominator is the constant one.
    pub fn is_polynomial(&self) -> bool {
        self.den.degree() == Some(0)
    }
}

#[derive(Clone, Debug)]
pub struct RatFuncField<F: Field> {
    ring: PolyRing<F>,
}

type R<F> = RatFunc<<F as Field>::Elem>;

impl<F: Field> RatFuncField<F> {
    pub fn new(base: F, var: &str) -> Self {
        RatFuncField {
            ring: PolyRing::new(base, var),
        }
    }

    /// The polynomial ring `K[Y]` holding numerators and denominators.
    pub fn ring(&self) -> &PolyRing<F> {
        &self.ring
    }

    pub fn from_poly(&self, num: Poly<F::Elem>) -> R<F> {
        RatFunc {
            num,
            den: self.ring.one(),
        }
    }

    pub fn constant(&self, c: F::Elem) -> R<F> {
        self.from_poly(self.ring.constant(c))
    }

    /// The transcendental `Y`.
    pub fn var(&self) -> R<F> {
        self.from_poly(self.ring.x())
    }

    /// Reduces `num / den` to lowest terms with a monic denominator.
    pub fn from_parts(&self, num: Poly<F::Elem>, den: Poly<F::Elem>) -> Result<R<F>> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(self.zero());
        }
        let g = self.ring.gcd(&num, &den)?;
        let (num, den) = if self.ring.is_one(&g) {
            (num, den)
        } else {
            (
                self.ring.exact_div(&num, &g)?,
                self.ring.exact_div(&den, &g)?,
            )
        };
        let lead_inv = self.ring.base().inv(den.leading().expect("nonzero"))?;
        Ok(RatFunc {
            num: self.ring.scale(&num, &lead_inv),
            den: self.ring.scale(&den, &lead_inv),
        })
    }

    fn reduced(&self, num: Poly<F::Elem>, den: Poly<F::Elem>) -> R<F> {
        self.from_parts(num, den)
            .expect("denominators of reduced fractions are nonzero")
    }

    pub fn is_reduced(&self, a: &R<F>) -> bool {
        !a.den.is_zero()
            && self.ring.is_monic(&a.den)
            && (a.num.is_zero() && self.ring.is_one(&a.den)
                || self
                    .ring
                    .gcd(&a.num, &a.den)
                    .is_ok_and(|g| self.ring.is_one(&g)))
    }
}

impl<F: Field> Field for RatFuncField<F> {
    type Elem = R<F>;

    fn zero(&self) -> R<F> {
        self.from_poly(self.ring.zero())
    }

    fn one(&self) -> R<F> {
        self.from_poly(self.ring.one())
    }

    fn is_zero(&self, a: &R<F>) -> bool {
        a.num.is_zero()
    }

    fn is_one(&self, a: &R<F>) -> bool {
        a.is_polynomial() && self.ring.is_one(&a.num)
    }

    fn add(&self, a: &R<F>, b: &R<F>) -> R<F> {
        let mut out = a.clone();
        self.add_assign(&mut out, b);
        out
    }

    fn add_assign(&self, acc: &mut R<F>, b: &R<F>) {
        if b.num.is_zero() {
            return;
        }
        if acc.den == b.den {
            self.ring.add_assign(&mut acc.num, &b.num);
            if !acc.is_polynomial() {
                let num = std::mem::replace(&mut acc.num, self.ring.zero());
                let den = std::mem::replace(&mut acc.den, self.ring.one());
                *acc = self.reduced(num, den);
            } else if acc.num.is_zero() {
                acc.den = self.ring.one();
            }
            return;
        }
        let num = self.ring.add(
            &self.ring.mul(&acc.num, &b.den),
            &self.ring.mul(&b.num, &acc.den),
        );
        let den = self.ring.mul(&acc.den, &b.den);
        *acc = self.reduced(num, den);
    }

    fn neg(&self, a: &R<F>) -> R<F> {
        RatFunc {
            num: self.ring.neg(&a.num),
            den: a.den.clone(),
        }
    }

    fn sub_assign(&self, acc: &mut R<F>, b: &R<F>) {
        self.add_assign(acc, &self.neg(b));
    }

    fn mul(&self, a: &R<F>, b: &R<F>) -> R<F> {
        if a.num.is_zero() || b.num.is_zero() {
            return self.zero();
        }
        if a.is_polynomial() && b.is_polynomial() {
            return self.from_poly(self.ring.mul(&a.num, &b.num));
        }
        // Cross-cancel so the result is already in lowest terms.
        let ring = &self.ring;
        let g1 = ring.gcd(&a.num, &b.den).expect("nonzero");
        let g2 = ring.gcd(&b.num, &a.den).expect("nonzero");
        let div = |x: &Poly<F::Elem>, g: &Poly<F::Elem>| {
            if ring.is_one(g) {
                x.clone()
            } else {
                ring.exact_div(x, g).expect("gcd divides")
            }
        };
        let num = ring.mul(&div(&a.num, &g1), &div(&b.num, &g2));
        let den = ring.mul(&div(&a.den, &g2), &div(&b.den, &g1));
        self.reduced(num, den)
    }

    fn mul_add_assign(&self, acc: &mut R<F>, a: &R<F>, b: &R<F>) {
        if a.num.is_zero() || b.num.is_zero() {
            return;
        }
        if acc.is_polynomial() && a.is_polynomial() && b.is_polynomial() {
            let prod = self.ring.mul(&a.num, &b.num);
            self.ring.add_assign(&mut acc.num, &prod);
            return;
        }
        let prod = self.mul(a, b);
        self.add_assign(acc, &prod);
    }

    fn square(&self, a: &R<F>) -> R<F> {
        RatFunc {
            num: self.ring.square(&a.num),
            den: self.ring.square(&a.den),
        }
    }

    fn inv(&self, a: &R<F>) -> Result<R<F>> {
        if a.num.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let lead_inv = self.ring.base().inv(a.num.leading().expect("nonzero"))?;
        Ok(RatFunc {
            num: self.ring.scale(&a.den, &lead_inv),
            den: self.ring.scale(&a.num, &lead_inv),
        })
    }

    fn characteristic(&self) -> u64 {
        self.ring.base().characteristic()
    }

    fn render(&self, a: &R<F>) -> String {
        if a.is_polynomial() {
            self.ring.render_nested(&a.num)
        } else {
            format!(
                "({})/({})",
                self.ring.render_nested(&a.num),
                self.ring.render_nested(&a.den)
            )
        }
    }

    fn is_compound(&self, a: &R<F>) -> bool {
        !a.is_polynomial() || self.ring.term_count(&a.num) > 1
    }
}
