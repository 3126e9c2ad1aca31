//! Arithmetic in GF(2^n) for 1 <= n <= 16.
//!
//! Elements are bitmasks in the polynomial basis: bit `i` is the
//! coefficient of `x^i` modulo the field's irreducible modulus. Products go
//! through log/antilog tables built once per extension degree.

use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::Field;

pub const MAX_DEGREE: u32 = 16;

/// Fixed moduli for small degrees, as bitmasks.
const MODULUS_TABLE: [u32; 8] = [
    0b10,        // x
    0b111,       // x^2 + x + 1
    0b1011,      // x^3 + x + 1
    0b1_0011,    // x^4 + x + 1
    0b10_0101,   // x^5 + x^2 + 1
    0b100_0011,  // x^6 + x + 1
    0b1000_0011, // x^7 + x + 1
    0x11b,       // x^8 + x^4 + x^3 + x + 1
];

/// An element of GF(2^n), stored as a bitmask below `2^n`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FqElem(u32);

impl FqElem {
    pub const ZERO: FqElem = FqElem(0);
    pub const ONE: FqElem = FqElem(1);

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Field addition is XOR of bitmasks whatever the modulus.
impl std::ops::Add for FqElem {
    type Output = FqElem;

    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, rhs: FqElem) -> FqElem {
        FqElem(self.0 ^ rhs.0)
    }
}

impl fmt::Debug for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "0x{:x}", self.0)
    }
}

impl fmt::Display for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "0x{:x}", self.0)
    }
}

impl Serialize for FqElem {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&format!("0x{:x}", self.0))
    }
}

#[derive(Debug)]
struct Tables {
    n: u32,
    modulus: u32,
    /// exp[i] = g^i for i in 0..2(q-1), doubled to skip a reduction.
    exp: Vec<u32>,
    /// log[a] for a != 0; log[0] is unused.
    log: Vec<u32>,
}

/// The field GF(2^n) together with its fixed modulus.
#[derive(Clone)]
pub struct FieldSpec {
    tables: Arc<Tables>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF(2^{}) mod 0x{:x}", self.n(), self.modulus())
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.modulus() == other.modulus()
    }
}

impl Eq for FieldSpec {}

/// Returns GF(2^n) with the modulus from the built-in table.
pub fn field_new(n: u32) -> Result<FieldSpec> {
    FieldSpec::new(n)
}

impl FieldSpec {
    pub fn new(n: u32) -> Result<Self> {
        if !(1..=MAX_DEGREE).contains(&n) {
            return Err(Error::UnsupportedDegree(n));
        }
        static CACHE: [OnceLock<Arc<Tables>>; MAX_DEGREE as usize] =
            [const { OnceLock::new() }; MAX_DEGREE as usize];
        let tables = CACHE[(n - 1) as usize].get_or_init(|| Arc::new(build_tables(n)));
        Ok(FieldSpec {
            tables: Arc::clone(tables),
        })
    }

    /// The field of order `q`, which must be `2^n` with `1 <= n <= 16`.
    pub fn with_order(q: u64) -> Result<Self> {
        match log2_exact(q) {
            Some(n) if (1..=MAX_DEGREE).contains(&n) => Self::new(n),
            _ => Err(Error::NotPowerOfTwo(q)),
        }
    }

    pub fn n(&self) -> u32 {
        self.tables.n
    }

    pub fn order(&self) -> u64 {
        1u64 << self.tables.n
    }

    pub fn modulus(&self) -> u32 {
        self.tables.modulus
    }

    pub fn elem(&self, bits: u32) -> Result<FqElem> {
        if u64::from(bits) < self.order() {
            Ok(FqElem(bits))
        } else {
            Err(Error::ElementOutOfRange { bits, n: self.n() })
        }
    }

    /// All `q` elements in ascending bitmask order.
    pub fn elements(&self) -> impl Iterator<Item = FqElem> {
        (0..self.order() as u32).map(FqElem)
    }

    /// The `q - 1` nonzero elements in ascending bitmask order.
    pub fn units(&self) -> Vec<FqElem> {
        (1..self.order() as u32).map(FqElem).collect()
    }

    pub fn add(&self, a: FqElem, b: FqElem) -> FqElem {
        FqElem(a.0 ^ b.0)
    }

    pub fn mul(&self, a: FqElem, b: FqElem) -> FqElem {
        if a.0 == 0 || b.0 == 0 {
            return FqElem::ZERO;
        }
        let t = &self.tables;
        FqElem(t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize])
    }

    pub fn inv(&self, a: FqElem) -> Result<FqElem> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let t = &self.tables;
        let order = (self.order() - 1) as u32;
        Ok(FqElem(
            t.exp[((order - t.log[a.0 as usize]) % order) as usize],
        ))
    }

    pub fn pow(&self, a: FqElem, e: u64) -> FqElem {
        if e == 0 {
            return FqElem::ONE;
        }
        if a.0 == 0 {
            return FqElem::ZERO;
        }
        let t = &self.tables;
        let order = self.order() - 1;
        let idx = (u64::from(t.log[a.0 as usize]) * (e % order)) % order;
        FqElem(t.exp[idx as usize])
    }

    /// The unique square root; squaring is a bijection in characteristic 2.
    pub fn sqrt(&self, a: FqElem) -> FqElem {
        self.pow(a, 1u64 << (self.n() - 1))
    }

    /// An element generating the multiplicative group.
    pub fn generator(&self) -> FqElem {
        FqElem(self.tables.exp[1])
    }

    /// Locates a root of this field's modulus inside `larger` and returns
    /// the induced field embedding.
    pub fn embedding_into(&self, larger: &FieldSpec) -> Result<Embedding> {
        if !larger.n().is_multiple_of(self.n()) {
            return Err(Error::NoEmbedding {
                small: self.n(),
                large: larger.n(),
            });
        }
        let modulus = self.modulus();
        let is_root = |beta: FqElem| {
            let mut acc = FqElem::ZERO;
            for i in (0..=self.n()).rev() {
                acc = larger.mul(acc, beta);
                if modulus >> i & 1 == 1 {
                    acc = larger.add(acc, FqElem::ONE);
                }
            }
            acc.is_zero()
        };
        let beta = larger
            .elements()
            .find(|&b| is_root(b))
            .ok_or(Error::NoEmbedding {
                small: self.n(),
                large: larger.n(),
            })?;
        let basis = (0..self.n())
            .map(|i| larger.pow(beta, u64::from(i)))
            .collect();
        Ok(Embedding {
            target: larger.clone(),
            basis,
        })
    }
}

/// A field homomorphism GF(2^m) -> GF(2^n), determined by the image of `x`.
#[derive(Debug, Clone)]
pub struct Embedding {
    target: FieldSpec,
    basis: Vec<FqElem>,
}

impl Embedding {
    pub fn target(&self) -> &FieldSpec {
        &self.target
    }

    pub fn map(&self, a: FqElem) -> FqElem {
        self.basis
            .iter()
            .enumerate()
            .filter(|(i, _)| a.0 >> i & 1 == 1)
            .fold(FqElem::ZERO, |acc, (_, &b)| self.target.add(acc, b))
    }
}

impl Field for FieldSpec {
    type Elem = FqElem;

    fn zero(&self) -> FqElem {
        FqElem::ZERO
    }

    fn one(&self) -> FqElem {
        FqElem::ONE
    }

    fn is_zero(&self, a: &FqElem) -> bool {
        a.0 == 0
    }

    fn add(&self, a: &FqElem, b: &FqElem) -> FqElem {
        FqElem(a.0 ^ b.0)
    }

    fn neg(&self, a: &FqElem) -> FqElem {
        *a
    }

    fn sub(&self, a: &FqElem, b: &FqElem) -> FqElem {
        FqElem(a.0 ^ b.0)
    }

    fn mul(&self, a: &FqElem, b: &FqElem) -> FqElem {
        FieldSpec::mul(self, *a, *b)
    }

    fn inv(&self, a: &FqElem) -> Result<FqElem> {
        FieldSpec::inv(self, *a)
    }

    fn add_assign(&self, acc: &mut FqElem, b: &FqElem) {
        acc.0 ^= b.0;
    }

    fn sub_assign(&self, acc: &mut FqElem, b: &FqElem) {
        acc.0 ^= b.0;
    }

    fn mul_add_assign(&self, acc: &mut FqElem, a: &FqElem, b: &FqElem) {
        acc.0 ^= FieldSpec::mul(self, *a, *b).0;
    }

    fn characteristic(&self) -> u64 {
        2
    }

    fn render(&self, a: &FqElem) -> String {
        match a.0 {
            0 => "0".to_string(),
            1 => "1".to_string(),
            b => format!("0x{b:x}"),
        }
    }

    fn is_compound(&self, _a: &FqElem) -> bool {
        false
    }
}

pub(crate) fn log2_exact(q: u64) -> Option<u32> {
    q.is_power_of_two().then(|| q.trailing_zeros())
}

fn build_tables(n: u32) -> Tables {
    let modulus = if n <= 8 {
        MODULUS_TABLE[(n - 1) as usize]
    } else {
        smallest_irreducible(n)
    };
    assert!(
        is_irreducible(u64::from(modulus)),
        "modulus 0x{modulus:x} for n = {n} is reducible"
    );
    let q = 1usize << n;
    let order = q - 1;
    let reduce_mul =
        |a: u32, b: u32| clmul_mod(u64::from(a), u64::from(b), u64::from(modulus)) as u32;
    let generator = (1..q as u32)
        .find(|&g| multiplicative_order(g, order, reduce_mul) == order)
        .expect("the multiplicative group of a finite field is cyclic");
    let mut exp = vec![0u32; 2 * order.max(1)];
    let mut log = vec![0u32; q];
    let mut cur = 1u32;
    for (i, slot) in exp.iter_mut().take(order).enumerate() {
        *slot = cur;
        log[cur as usize] = i as u32;
        cur = reduce_mul(cur, generator);
    }
    for i in order..exp.len() {
        exp[i] = exp[i - order];
    }
    Tables {
        n,
        modulus,
        exp,
        log,
    }
}

fn multiplicative_order(g: u32, group_order: usize, mul: impl Fn(u32, u32) -> u32) -> usize {
    let mut cur = g;
    let mut k = 1;
    while cur != 1 {
        cur = mul(cur, g);
        k += 1;
        if k > group_order {
            return 0;
        }
    }
    k
}

fn smallest_irreducible(n: u32) -> u32 {
    ((1u32 << n)..(1u32 << (n + 1)))
        .find(|&m| is_irreducible(u64::from(m)))
        .expect("irreducible polynomials exist in every degree")
}

// Bit-level arithmetic in GF(2)[x] for polynomials of degree < 32.

fn deg(a: u64) -> i32 {
    63 - a.leading_zeros() as i32
}

pub(crate) fn clmul(a: u64, b: u64) -> u128 {
    let mut acc = 0u128;
    let mut b = b;
    let mut shift = 0;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= u128::from(a) << shift;
        }
        b >>= 1;
        shift += 1;
    }
    acc
}

fn rem_u128(mut a: u128, m: u64) -> u64 {
    let dm = deg(m);
    let m = u128::from(m);
    while a != 0 && 127 - a.leading_zeros() as i32 >= dm {
        let shift = 127 - a.leading_zeros() as i32 - dm;
        a ^= m << shift;
    }
    a as u64
}

fn clmul_mod(a: u64, b: u64, m: u64) -> u64 {
    rem_u128(clmul(a, b), m)
}

fn gcd_gf2(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = rem_u128(u128::from(a), b);
        a = b;
        b = r;
    }
    a
}

/// Rabin's test: `m` of degree `n` is irreducible over GF(2) iff
/// `x^(2^n) = x mod m` and `gcd(m, x^(2^(n/p)) - x) = 1` for each prime
/// `p | n`.
pub(crate) fn is_irreducible(m: u64) -> bool {
    let n = deg(m);
    if n < 1 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let x = rem_u128(0b10, m);
    let frob_iter = |k: i32| {
        let mut w = x;
        for _ in 0..k {
            w = clmul_mod(w, w, m);
        }
        w
    };
    if frob_iter(n) != x {
        return false;
    }
    prime_factors(n as u32)
        .into_iter()
        .all(|p| gcd_gf2(m, frob_iter(n / p as i32) ^ x) == 1)
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}
