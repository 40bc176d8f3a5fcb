//! Arithmetic in binary fields `F_{2^m}` with elements stored as `m`-bit integers.
//!
//! [`Gf`] is the polynomial-basis field fixed by a [`FieldSpec`]; multiplication
//! goes through log/antilog tables built from a generator found at construction.
//! [`QuadExt`] is the degree-2 extension `F_{2^m}[θ]/(θ² + θ + ν)` used to
//! identify `F_{2^{2m}}` with `F_{2^m} × F_{2^m}`: the element `x + yθ` is
//! stored as `(y << m) | x`, so [`QuadExt::embed`] and [`QuadExt::split`] are
//! plain bit moves.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// A field element: the coefficient vector of its polynomial-basis representation.
pub type Elt = u32;

/// Largest supported extension degree for [`Gf`].
pub const MAX_DEGREE: u32 = 16;

/// Lexicographically smallest irreducible polynomial of each degree `0..=16`
/// (entries 0 and 1 unused).
pub const DEFAULT_REDUCTIONS: [u32; 17] = [
    0, 0, 0x7, 0xb, 0x13, 0x25, 0x43, 0x83, 0x11b, 0x203, 0x409, 0x805, 0x1009, 0x201b, 0x4021,
    0x8003, 0x1002b,
];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("extension degree {0} outside supported range 2..={MAX_DEGREE}")]
    UnsupportedDegree(u32),
    #[error("reduction polynomial {reduction:#x} is not a degree-{m} polynomial with constant term")]
    MalformedReduction { m: u32, reduction: u32 },
    #[error("reduction polynomial {0:#x} is reducible over F_2")]
    Reducible(u32),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("subfield degree {sub} does not divide field degree {n}")]
    NotASubfield { n: u32, sub: u32 },
    #[error("{0:#x} has absolute trace 0; the quadratic extension needs trace 1")]
    BadExtensionConstant(u32),
}

/// Degree and reduction polynomial of a binary field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    m: u32,
    reduction: u32,
}

impl FieldSpec {
    /// Checks shape and irreducibility of `reduction`.
    pub fn new(m: u32, reduction: u32) -> Result<Self, FieldError> {
        if !(2..=MAX_DEGREE).contains(&m) {
            return Err(FieldError::UnsupportedDegree(m));
        }
        if reduction >> m != 1 || reduction & 1 == 0 {
            return Err(FieldError::MalformedReduction { m, reduction });
        }
        if !is_irreducible(reduction) {
            return Err(FieldError::Reducible(reduction));
        }
        Ok(Self { m, reduction })
    }

    pub fn default_for(m: u32) -> Result<Self, FieldError> {
        if !(2..=MAX_DEGREE).contains(&m) {
            return Err(FieldError::UnsupportedDegree(m));
        }
        Self::new(m, DEFAULT_REDUCTIONS[m as usize])
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn reduction(&self) -> u32 {
        self.reduction
    }
}

#[derive(Serialize, Deserialize)]
struct FieldSpecRepr {
    m: u32,
    reduction: String,
}

impl Serialize for FieldSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        FieldSpecRepr {
            m: self.m,
            reduction: format!("{:#x}", self.reduction),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FieldSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = FieldSpecRepr::deserialize(deserializer)?;
        let reduction = parse_hex(&repr.reduction).map_err(serde::de::Error::custom)?;
        FieldSpec::new(repr.m, reduction).map_err(serde::de::Error::custom)
    }
}

/// Parses `0x`-prefixed or bare hexadecimal.
pub fn parse_hex(s: &str) -> Result<u32, std::num::ParseIntError> {
    let s = s.trim();
    let digits = s
        .strip_prefix("0x")
        .or_else(|| s.strip_prefix("0X"))
        .unwrap_or(s);
    u32::from_str_radix(digits, 16)
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF(2^{}) mod {:#x}", self.m, self.reduction)
    }
}

impl FromStr for FieldSpec {
    type Err = String;

    /// Accepts `m` (default reduction) or `m:reduction_hex`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (m, red) = match s.split_once(':') {
            Some((m, r)) => (m, Some(r)),
            None => (s, None),
        };
        let m: u32 = m.trim().parse().map_err(|e| format!("bad degree: {e}"))?;
        let spec = match red {
            Some(r) => {
                let r = parse_hex(r).map_err(|e| format!("bad reduction: {e}"))?;
                FieldSpec::new(m, r)
            }
            None => FieldSpec::default_for(m),
        };
        spec.map_err(|e| e.to_string())
    }
}

fn degree(p: u64) -> u32 {
    63 - p.leading_zeros()
}

fn poly_rem(mut a: u64, b: u64) -> u64 {
    let db = degree(b);
    while a != 0 && degree(a) >= db {
        a ^= b << (degree(a) - db);
    }
    a
}

/// Trial division by every polynomial of degree `1..=deg/2`.
pub fn is_irreducible(p: u32) -> bool {
    let p = p as u64;
    if p < 2 {
        return false;
    }
    let d = degree(p);
    if d == 1 {
        return true;
    }
    (2u64..1 << (d / 2 + 1)).all(|f| poly_rem(p, f) != 0)
}

/// Carry-less multiply followed by reduction; the table-free path.
pub fn clmul_reduce(a: Elt, b: Elt, m: u32, reduction: u32) -> Elt {
    let mut prod: u64 = 0;
    let mut a = a as u64;
    let mut b = b;
    while b != 0 {
        if b & 1 == 1 {
            prod ^= a;
        }
        a <<= 1;
        b >>= 1;
    }
    let red = reduction as u64;
    for bit in (m..2 * m).rev() {
        if prod >> bit & 1 == 1 {
            prod ^= red << (bit - m);
        }
    }
    prod as Elt
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
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

/// Operations shared by every binary field representation in the crate.
pub trait BinaryField: Sync {
    /// Extension degree over `F_2`.
    fn degree(&self) -> u32;

    fn mul(&self, a: Elt, b: Elt) -> Elt;

    fn size(&self) -> usize {
        1 << self.degree()
    }

    fn elements(&self) -> std::ops::Range<Elt> {
        0..self.size() as Elt
    }

    fn square(&self, a: Elt) -> Elt {
        self.mul(a, a)
    }

    /// Square-and-multiply.
    fn pow(&self, a: Elt, mut e: u64) -> Elt {
        let mut base = a;
        let mut acc = 1;
        while e != 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.square(base);
            e >>= 1;
        }
        acc
    }

    /// `a^(2^k)` by `k` squarings.
    fn pow_q(&self, a: Elt, k: u32) -> Elt {
        (0..k).fold(a, |acc, _| self.square(acc))
    }

    fn inv(&self, a: Elt) -> Result<Elt, FieldError> {
        if a == 0 {
            return Err(FieldError::ZeroInverse);
        }
        Ok(self.pow(a, (self.size() - 2) as u64))
    }

    /// Absolute trace `Σ_{i<m} a^{2^i}`, returned as 0 or 1.
    fn trace(&self, a: Elt) -> u32 {
        let mut acc = 0;
        let mut t = a;
        for _ in 0..self.degree() {
            acc ^= t;
            t = self.square(t);
        }
        debug_assert!(acc <= 1);
        acc
    }

    /// Relative trace onto the subfield of degree `sub`, as an element of this field.
    fn rel_trace(&self, a: Elt, sub: u32) -> Result<Elt, FieldError> {
        let n = self.degree();
        if sub == 0 || n % sub != 0 {
            return Err(FieldError::NotASubfield { n, sub });
        }
        let mut acc = 0;
        let mut t = a;
        for _ in 0..n / sub {
            acc ^= t;
            t = self.pow_q(t, sub);
        }
        Ok(acc)
    }

    /// Whether `a` lies in the subfield `F_{2^sub}`.
    fn in_subfield(&self, a: Elt, sub: u32) -> bool {
        self.pow_q(a, sub) == a
    }

    fn is_cube(&self, a: Elt) -> bool {
        let order = (self.size() - 1) as u64;
        if a == 0 || order % 3 != 0 {
            return true;
        }
        self.pow(a, order / 3) == 1
    }

    /// Multiplicative order of a nonzero element.
    fn order_of(&self, a: Elt) -> u64 {
        assert!(a != 0, "zero has no multiplicative order");
        let group = (self.size() - 1) as u64;
        let mut order = group;
        for p in prime_factors(group) {
            while order % p == 0 && self.pow(a, order / p) == 1 {
                order /= p;
            }
        }
        order
    }

    fn is_primitive(&self, a: Elt) -> bool {
        a != 0 && self.order_of(a) == (self.size() - 1) as u64
    }
}

/// `F_{2^m}` in polynomial basis with log/antilog tables.
#[derive(Clone)]
pub struct Gf {
    spec: FieldSpec,
    generator: Elt,
    log: Vec<u32>,
    exp: Vec<Elt>,
}

impl fmt::Debug for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Gf")
            .field("spec", &self.spec)
            .field("generator", &self.generator)
            .finish()
    }
}

impl Gf {
    pub fn new(spec: FieldSpec) -> Self {
        let m = spec.m;
        let group = (1u64 << m) - 1;
        let factors = prime_factors(group);
        let slow_pow = |a: Elt, mut e: u64| {
            let (mut base, mut acc) = (a, 1);
            while e != 0 {
                if e & 1 == 1 {
                    acc = clmul_reduce(acc, base, m, spec.reduction);
                }
                base = clmul_reduce(base, base, m, spec.reduction);
                e >>= 1;
            }
            acc
        };
        let generator = (2..1u32 << m)
            .find(|&g| factors.iter().all(|&p| slow_pow(g, group / p) != 1))
            .expect("multiplicative group of a finite field is cyclic");

        let order = group as usize;
        let mut exp = vec![0; 2 * order];
        let mut log = vec![0; order + 1];
        let mut x: Elt = 1;
        for i in 0..order {
            exp[i] = x;
            exp[i + order] = x;
            log[x as usize] = i as u32;
            x = clmul_reduce(x, generator, m, spec.reduction);
        }
        Self {
            spec,
            generator,
            log,
            exp,
        }
    }

    pub fn with_degree(m: u32) -> Result<Self, FieldError> {
        Ok(Self::new(FieldSpec::default_for(m)?))
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn m(&self) -> u32 {
        self.spec.m
    }

    /// The primitive element the tables are built on (smallest by bit value).
    pub fn generator(&self) -> Elt {
        self.generator
    }

    /// Discrete log to the base [`Gf::generator`].
    pub fn log(&self, a: Elt) -> Option<u32> {
        (a != 0).then(|| self.log[a as usize])
    }

    pub fn exp(&self, e: u64) -> Elt {
        let order = (self.size() - 1) as u64;
        self.exp[(e % order) as usize]
    }
}

impl BinaryField for Gf {
    fn degree(&self) -> u32 {
        self.spec.m
    }

    #[inline]
    fn mul(&self, a: Elt, b: Elt) -> Elt {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
    }

    fn pow(&self, a: Elt, e: u64) -> Elt {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let order = (self.size() - 1) as u64;
        let l = self.log[a as usize] as u64;
        self.exp[((l * (e % order)) % order) as usize]
    }

    fn inv(&self, a: Elt) -> Result<Elt, FieldError> {
        if a == 0 {
            return Err(FieldError::ZeroInverse);
        }
        let order = (self.size() - 1) as u32;
        Ok(self.exp[((order - self.log[a as usize]) % order) as usize])
    }
}

/// `F_{2^{2m}}` as `F_{2^m}[θ]/(θ² + θ + ν)` with `tr_m(ν) = 1`.
#[derive(Debug, Clone)]
pub struct QuadExt {
    base: Gf,
    nu: Elt,
}

impl QuadExt {
    /// Uses the smallest `ν` of absolute trace 1.
    pub fn new(base: Gf) -> Self {
        let nu = base
            .elements()
            .find(|&v| base.trace(v) == 1)
            .expect("trace is a surjective linear form");
        Self { base, nu }
    }

    pub fn with_constant(base: Gf, nu: Elt) -> Result<Self, FieldError> {
        if base.trace(nu) != 1 {
            return Err(FieldError::BadExtensionConstant(nu));
        }
        Ok(Self { base, nu })
    }

    pub fn base(&self) -> &Gf {
        &self.base
    }

    pub fn nu(&self) -> Elt {
        self.nu
    }

    /// `(x, y) ↦ x + yθ`.
    #[inline]
    pub fn embed(&self, x: Elt, y: Elt) -> Elt {
        (y << self.base.m()) | x
    }

    /// Inverse of [`QuadExt::embed`].
    #[inline]
    pub fn split(&self, z: Elt) -> (Elt, Elt) {
        let m = self.base.m();
        (z & ((1 << m) - 1), z >> m)
    }
}

impl BinaryField for QuadExt {
    fn degree(&self) -> u32 {
        2 * self.base.m()
    }

    #[inline]
    fn mul(&self, a: Elt, b: Elt) -> Elt {
        let (a0, a1) = self.split(a);
        let (b0, b1) = self.split(b);
        let f = &self.base;
        let hi = f.mul(a1, b1);
        let lo = f.mul(a0, b0) ^ f.mul(hi, self.nu);
        let mid = f.mul(a0, b1) ^ f.mul(a1, b0) ^ hi;
        self.embed(lo, mid)
    }
}

/// Embedding of a base-field element into its degree-2 extension and back,
/// checked against the extension's base.
pub fn embed_checked(ext: &QuadExt, base: &Gf, x: Elt, y: Elt) -> Result<Elt, FieldError> {
    if base.spec() != ext.base().spec() {
        return Err(FieldError::NotASubfield {
            n: ext.degree(),
            sub: base.m(),
        });
    }
    Ok(ext.embed(x, y))
}
