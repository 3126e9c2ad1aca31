//! The coefficient-field abstraction shared by every polynomial type.
//!
//! Elements do not know which field they belong to; all arithmetic goes
//! through a field *context* value. This keeps `GF(2^n)` elements a plain
//! bitmask and lets the rational function field `F_q(Y)` be used as a
//! coefficient field without a global modulus.

use std::fmt::Debug;

use crate::error::Result;

pub trait Field: Clone + Debug + Send + Sync {
    type Elem: Clone + PartialEq + Eq + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    /// Fails with [`crate::Error::DivisionByZero`] on zero.
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem>;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    fn add_assign(&self, acc: &mut Self::Elem, b: &Self::Elem) {
        *acc = self.add(acc, b);
    }

    fn sub_assign(&self, acc: &mut Self::Elem, b: &Self::Elem) {
        *acc = self.sub(acc, b);
    }

    /// `acc += a * b`
    fn mul_add_assign(&self, acc: &mut Self::Elem, a: &Self::Elem, b: &Self::Elem) {
        let prod = self.mul(a, b);
        self.add_assign(acc, &prod);
    }

    fn square(&self, a: &Self::Elem) -> Self::Elem {
        self.mul(a, a)
    }

    fn characteristic(&self) -> u64;

    /// Text form used inside polynomial renderings.
    fn render(&self, a: &Self::Elem) -> String;

    /// Whether the rendering is a sum that needs parentheses when it
    /// multiplies a power of an outer variable.
    fn is_compound(&self, a: &Self::Elem) -> bool;
}
