//! Exact arithmetic for characteristic-2 Dickson polynomials and machine
//! checks of the identities they satisfy.
//!
//! The layers, bottom up:
//!
//! - [`gf2n`]: the ground field GF(2^n) as bitmasks with log tables.
//! - [`poly`]: dense polynomials over any [`Field`], the rational function
//!   field `F_q(Y)`, squarefree parts and distinct-degree factorization.
//! - [`laurent`]: Laurent polynomials in `U` and the bracket `<U^k>`.
//! - [`dickson`]: Dickson polynomials and `C(x)`.
//! - [`identities`]: both bivariate factorization identities, the linearized
//!   relations, the quotient `H = h`, the squarefree check and a
//!   random-specialization oracle.
//! - [`splitting`]: splitting-field degrees over GF(2^n).

pub mod dickson;
pub mod error;
pub mod field;
pub mod gf2n;
pub mod identities;
pub mod laurent;
pub mod poly;
pub mod splitting;

pub use error::{Error, Result};
pub use field::Field;
pub use gf2n::{field_new, FieldSpec, FqElem};
pub use identities::{CaseName, IdentityCase, VerificationReport};
pub use laurent::{Laurent, Variant};
pub use poly::{Poly, PolyRing, RatFunc, RatFuncField};
pub use splitting::{SplittingReport, SplittingResult};
