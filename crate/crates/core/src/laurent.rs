//! Laurent polynomials in one variable `U` over GF(2^n).
//!
//! `ang(k)` is the bracket `<U^k> = U^k + U^-k`. Substituting `<U>` into a
//! Dickson polynomial collapses to `<U^k>`, and products of brackets obey
//! `<U^a><U^b> = <U^(a+b)> + <U^(a-b)>`; both are checked here by direct
//! expansion.

use std::collections::BTreeMap;
use std::fmt;

use crate::dickson::dickson_poly;
use crate::error::{Error, Result};
use crate::gf2n::{log2_exact, FieldSpec, FqElem};
use crate::poly::Poly;

/// Finite sum of `c * U^e` with integer `e`. No zero coefficients are stored.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Laurent {
    terms: BTreeMap<i64, FqElem>,
}

impl Laurent {
    pub fn zero() -> Self {
        Laurent::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn monomial(c: FqElem, e: i64) -> Self {
        let mut out = Laurent::zero();
        out.add_term(c, e);
        out
    }

    /// Ascending `(exponent, coefficient)` pairs.
    pub fn terms(&self) -> impl Iterator<Item = (i64, FqElem)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    fn add_term(&mut self, c: FqElem, e: i64) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert(FqElem::ZERO);
        *slot = *slot + c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn add(&self, other: &Laurent) -> Laurent {
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(c, e);
        }
        out
    }

    /// Exact convolution of supports.
    pub fn mul(&self, other: &Laurent, f: &FieldSpec) -> Laurent {
        let mut out = Laurent::zero();
        for (ea, ca) in self.terms() {
            for (eb, cb) in other.terms() {
                let e = ea.checked_add(eb).expect("Laurent exponent overflow");
                out.add_term(f.mul(ca, cb), e);
            }
        }
        out
    }

    pub fn scale(&self, c: FqElem, f: &FieldSpec) -> Laurent {
        let mut out = Laurent::zero();
        for (e, x) in self.terms() {
            out.add_term(f.mul(x, c), e);
        }
        out
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let rendered: Vec<String> = self
            .terms()
            .map(|(e, c)| {
                let power = match e {
                    0 => None,
                    1 => Some("U".to_string()),
                    _ => Some(format!("U^{e}")),
                };
                match (power, c == FqElem::ONE) {
                    (None, _) => format!("{c}"),
                    (Some(p), true) => p,
                    (Some(p), false) => format!("{c}*{p}"),
                }
            })
            .collect();
        write!(f, "{}", rendered.join(" + "))
    }
}

/// `U^k + U^-k`, which is zero for `k = 0` in characteristic 2.
pub fn ang(k: i64) -> Laurent {
    let mut out = Laurent::monomial(FqElem::ONE, k);
    out.add_term(FqElem::ONE, -k);
    out
}

pub fn laurent_mul(a: &Laurent, b: &Laurent, f: &FieldSpec) -> Laurent {
    a.mul(b, f)
}

/// Evaluates `p` at `l` by Horner's rule inside the Laurent ring.
pub fn subst_poly(p: &Poly<FqElem>, l: &Laurent, f: &FieldSpec) -> Laurent {
    let mut acc = Laurent::zero();
    for &c in p.coeffs().iter().rev() {
        acc = acc.mul(l, f);
        acc.add_term(c, 0);
    }
    acc
}

/// `<U^a><U^b> = <U^(a+b)> + <U^(a-b)>`
pub fn verify_ang_product(a: i64, b: i64, f: &FieldSpec) -> bool {
    ang(a).mul(&ang(b), f) == ang(a + b).add(&ang(a - b))
}

/// `D_k(<U>) = <U^k>`
pub fn verify_functional_equation(k: u32, f: &FieldSpec) -> Result<bool> {
    if k == 0 {
        return Err(Error::Precondition(
            "functional equation needs k >= 1".into(),
        ));
    }
    let d = dickson_poly(k, f)?;
    Ok(subst_poly(&d, &ang(1), f) == ang(i64::from(k)))
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash, PartialOrd, Ord)]
pub enum Variant {
    /// `c = v = D_(q-1)(X)`
    V,
    /// `c = y = D_(q+1)(X)`
    Y,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::V => "v",
            Variant::Y => "y",
        }
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "v" => Ok(Variant::V),
            "y" => Ok(Variant::Y),
            other => Err(Error::Precondition(format!("unknown variant {other:?}"))),
        }
    }
}

/// The three bracket products whose sum is the linearized relation
/// `c X^(q^2) + z X^q + c^q X` written in terms of `U`.
pub fn cancellation_terms(q: u64, variant: Variant) -> Result<[(i64, i64); 3]> {
    match log2_exact(q) {
        Some(n) if (1..=16).contains(&n) => {}
        _ => return Err(Error::NotPowerOfTwo(q)),
    }
    let q = q as i64;
    let c = match variant {
        Variant::V => q - 1,
        Variant::Y => q + 1,
    };
    Ok([(c, q * q), (q * q - 1, q), (q * c, 1)])
}

/// Each bracket product of [`cancellation_terms`] expanded, and their sum.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CancellationExpansion {
    pub products: Vec<((i64, i64), Laurent)>,
    pub sum: Laurent,
}

pub fn expand_cancellation(q: u64, variant: Variant) -> Result<CancellationExpansion> {
    let terms = cancellation_terms(q, variant)?;
    let f = FieldSpec::with_order(q)?;
    let products: Vec<_> = terms
        .iter()
        .map(|&(a, b)| ((a, b), ang(a).mul(&ang(b), &f)))
        .collect();
    let sum = products
        .iter()
        .fold(Laurent::zero(), |acc, (_, p)| acc.add(p));
    Ok(CancellationExpansion { products, sum })
}

/// Expands each bracket product exactly and checks the sum vanishes.
pub fn verify_ang_cancellation(q: u64, variant: Variant) -> Result<bool> {
    Ok(expand_cancellation(q, variant)?.sum.is_zero())
}
