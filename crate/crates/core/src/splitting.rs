//! Splitting-field degrees over GF(2^n).
//!
//! The splitting field of `f` over GF(q) is GF(q^m) with `m` the lcm of the
//! degrees of the irreducible factors of `f`, so two polynomials split over
//! the same field exactly when those lcms agree. Only the degree set is
//! computed; factors are never separated.

use std::collections::BTreeSet;

use serde::{Serialize, Serializer};

use crate::dickson::mcm_poly;
use crate::error::{Error, Result};
use crate::gf2n::{field_new, FieldSpec, FqElem};
use crate::poly::{Poly, PolyRing};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SplittingResult {
    pub poly_render: String,
    pub factor_degrees: BTreeSet<usize>,
    /// Degree of the splitting field over the base field.
    pub splitting_degree: u64,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm_of(degrees: &BTreeSet<usize>) -> u64 {
    degrees.iter().fold(1, |acc, &d| {
        let d = d as u64;
        acc / gcd(acc, d) * d
    })
}

pub fn splitting_degree(ring: &PolyRing<FieldSpec>, f: &Poly<FqElem>) -> Result<SplittingResult> {
    if f.degree().unwrap_or(0) == 0 {
        return Err(Error::ConstantPolynomial);
    }
    let factor_degrees = ring.ddf_degrees(&ring.squarefree_part(f)?)?;
    Ok(SplittingResult {
        poly_render: ring.render(f),
        splitting_degree: lcm_of(&factor_degrees),
        factor_degrees,
    })
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SplittingReport {
    pub n: u32,
    pub a: FqElem,
    /// `x^(q+1) + x + 1/a`
    pub lhs: SplittingResult,
    /// `C(x) + a`
    pub rhs: SplittingResult,
    pub deg_lhs: usize,
    pub deg_rhs: usize,
    pub passed: bool,
}

impl Serialize for SplittingReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire<'a> {
            n: u32,
            a: String,
            deg_lhs: usize,
            deg_rhs: usize,
            factor_degrees_lhs: &'a BTreeSet<usize>,
            factor_degrees_rhs: &'a BTreeSet<usize>,
            passed: bool,
        }
        Wire {
            n: self.n,
            a: self.a.to_string(),
            deg_lhs: self.deg_lhs,
            deg_rhs: self.deg_rhs,
            factor_degrees_lhs: &self.lhs.factor_degrees,
            factor_degrees_rhs: &self.rhs.factor_degrees,
            passed: self.passed,
        }
        .serialize(serializer)
    }
}

/// `x^(q+1) + x + 1/a` and `C(x) + a` for `q = 2^n` and `a != 0`.
pub fn mcm_pair(n: u32, a: FqElem) -> Result<(PolyRing<FieldSpec>, Poly<FqElem>, Poly<FqElem>)> {
    if n < 2 {
        return Err(Error::Precondition(format!(
            "the splitting check needs q > 2, got n = {n}"
        )));
    }
    let f = field_new(n)?;
    let a = f.elem(a.bits())?;
    if a.is_zero() {
        return Err(Error::Precondition("a must be nonzero".into()));
    }
    let ring = PolyRing::new(f.clone(), "x");
    let q = 1usize << n;
    let lhs = ring.add(
        &ring.add(&ring.monomial(FqElem::ONE, q + 1), &ring.x()),
        &ring.constant(f.inv(a)?),
    );
    let c = mcm_poly(n)?;
    let rhs = ring.add(&c, &ring.constant(a));
    Ok((ring, lhs, rhs))
}

/// Compares the splitting degrees of `x^(q+1) + x + 1/a` and `C(x) + a`
/// over GF(2^n).
pub fn verify_mcm_splitting(n: u32, a: FqElem) -> Result<SplittingReport> {
    let (ring, lhs, rhs) = mcm_pair(n, a)?;
    let l = splitting_degree(&ring, &lhs)?;
    let r = splitting_degree(&ring, &rhs)?;
    Ok(SplittingReport {
        n,
        a,
        deg_lhs: lhs.degree().expect("nonzero"),
        deg_rhs: rhs.degree().expect("nonzero"),
        passed: l.splitting_degree == r.splitting_degree,
        lhs: l,
        rhs: r,
    })
}

/// Every `(n, a)` with `n_min <= n <= n_max` and `a` a unit, in that order.
pub fn sweep_cases(n_min: u32, n_max: u32) -> Result<Vec<(u32, FqElem)>> {
    if !(2 <= n_min && n_min <= n_max && n_max <= 5) {
        return Err(Error::Precondition(format!(
            "sweep needs 2 <= n_min <= n_max <= 5, got {n_min}..={n_max}"
        )));
    }
    let mut out = Vec::new();
    for n in n_min..=n_max {
        out.extend(field_new(n)?.units().into_iter().map(|a| (n, a)));
    }
    Ok(out)
}

pub fn verify_mcm_splitting_sweep(n_min: u32, n_max: u32) -> Result<Vec<SplittingReport>> {
    sweep_cases(n_min, n_max)?
        .into_iter()
        .map(|(n, a)| verify_mcm_splitting(n, a))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf2() -> PolyRing<FieldSpec> {
        PolyRing::new(field_new(1).unwrap(), "x")
    }

    fn from_bits(r: &PolyRing<FieldSpec>, bits: u64) -> Poly<FqElem> {
        r.from_coeffs(
            (0..64)
                .map(|i| {
                    if bits >> i & 1 == 1 {
                        FqElem::ONE
                    } else {
                        FqElem::ZERO
                    }
                })
                .collect(),
        )
    }

    #[test]
    fn examples() {
        let r = gf2();
        let s = splitting_degree(&r, &from_bits(&r, 0b111)).unwrap();
        assert_eq!(s.factor_degrees, BTreeSet::from([2]));
        assert_eq!(s.splitting_degree, 2);
        let s = splitting_degree(&r, &from_bits(&r, 0b100)).unwrap();
        assert_eq!(s.factor_degrees, BTreeSet::from([1]));
        assert_eq!(s.splitting_degree, 1);
        let s = splitting_degree(&r, &from_bits(&r, 0b1011)).unwrap();
        assert_eq!(s.splitting_degree, 3);
        assert_eq!(s.poly_render, "x^3 + x + 1");
        assert_eq!(
            splitting_degree(&r, &r.one()).unwrap_err(),
            Error::ConstantPolynomial
        );
        assert_eq!(
            splitting_degree(&r, &r.zero()).unwrap_err(),
            Error::ConstantPolynomial
        );
    }

    #[test]
    fn lcm_of_mixed_degrees() {
        let r = gf2();
        // (x^2+x+1)(x^3+x+1) splits over GF(2^6)
        let f = r.mul(&from_bits(&r, 0b111), &from_bits(&r, 0b1011));
        assert_eq!(splitting_degree(&r, &f).unwrap().splitting_degree, 6);
    }

    #[test]
    fn same_splitting_degree_small_n() {
        let r = verify_mcm_splitting(2, FqElem::ONE).unwrap();
        assert!(r.passed);
        assert_eq!((r.deg_lhs, r.deg_rhs), (5, 6));
        let f = field_new(3).unwrap();
        for a in f.units() {
            assert!(verify_mcm_splitting(3, a).unwrap().passed, "a = {a}");
        }
    }

    #[test]
    fn splitting_check_preconditions() {
        assert!(verify_mcm_splitting(2, FqElem::ZERO).is_err());
        assert!(verify_mcm_splitting(1, FqElem::ONE).is_err());
        assert!(verify_mcm_splitting(2, field_new(3).unwrap().elem(5).unwrap()).is_err());
    }

    #[test]
    fn sweep_counts() {
        let s = verify_mcm_splitting_sweep(2, 2).unwrap();
        assert_eq!(s.len(), 3);
        assert!(s.iter().all(|r| r.passed));
        assert_eq!(sweep_cases(2, 3).unwrap().len(), 10);
        assert!(sweep_cases(1, 3).is_err());
        assert!(sweep_cases(3, 2).is_err());
        assert!(sweep_cases(2, 6).is_err());
    }

    #[test]
    fn report_json_shape() {
        let r = verify_mcm_splitting(2, FqElem::ONE).unwrap();
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["n"], 2);
        assert_eq!(json["a"], "0x1");
        assert_eq!(json["deg_lhs"], 5);
        assert_eq!(json["deg_rhs"], 6);
        assert_eq!(json["passed"], true);
        assert!(json["factor_degrees_lhs"].is_array());
    }
}
