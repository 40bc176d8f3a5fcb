//! Constructors for the biprojective APN families and the known quadratic APN
//! families used as comparison points in dimension 12.
//!
//! Every family is described by a [`FamilyParams`] record. [`validate`] checks
//! the family's published conditions computationally and [`build`] evaluates
//! the function into a [`TruthTable`]. `m` in a record is the degree of the
//! field the coefficients live in: the half-dimension `n/2` for bivariate
//! families and the full dimension `n` for univariate ones.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::field::{parse_hex, BinaryField, Elt, FieldError, Gf};
use crate::poly::{self, gcd, linearized_kernel_dim};
use crate::vbf::{self, BivariatePair, Term, TruthTable};

#[derive(Debug, Error)]
pub enum FamilyError {
    #[error("invalid parameters for {family}: {reason}")]
    Invalid { family: FamilyId, reason: String },
    #[error("no valid parameters for {family} at n = {n}")]
    NoParameters { family: FamilyId, n: u32 },
    #[error("{family} with {params} is not APN")]
    NotApn { family: FamilyId, params: String },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Identifies a construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyId {
    /// Biprojective family `(x^{q+1}+xy^q+αy^{q+1}, …)`.
    F1,
    /// `F1` at `k = 1` plus `(xy, xy + αx²y²)`.
    F2,
    /// Göloğlu's `𝓕1`.
    GologluF1,
    /// Göloğlu's `𝓕2`.
    GologluF2,
    /// The `gcd(3, m) = 1` family obtained from `𝓕1` by Dillon's method.
    Lzlq,
    /// Known family by its row number (1 = Gold, …, 12).
    Known(u8),
}

impl FamilyId {
    pub fn is_bivariate(self) -> bool {
        match self {
            FamilyId::Known(id) => id >= 9,
            _ => true,
        }
    }

    pub const ALL_KNOWN: [FamilyId; 12] = [
        FamilyId::Known(1),
        FamilyId::Known(2),
        FamilyId::Known(3),
        FamilyId::Known(4),
        FamilyId::Known(5),
        FamilyId::Known(6),
        FamilyId::Known(7),
        FamilyId::Known(8),
        FamilyId::Known(9),
        FamilyId::Known(10),
        FamilyId::Known(11),
        FamilyId::Known(12),
    ];
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyId::F1 => f.write_str("f1"),
            FamilyId::F2 => f.write_str("f2"),
            FamilyId::GologluF1 => f.write_str("gologlu-f1"),
            FamilyId::GologluF2 => f.write_str("gologlu-f2"),
            FamilyId::Lzlq => f.write_str("lzlq"),
            FamilyId::Known(1) => f.write_str("gold"),
            FamilyId::Known(id) => write!(f, "known-{id}"),
        }
    }
}

impl FromStr for FamilyId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim().to_ascii_lowercase();
        Ok(match s.as_str() {
            "f1" => FamilyId::F1,
            "f2" => FamilyId::F2,
            "gologlu-f1" | "gf1" => FamilyId::GologluF1,
            "gologlu-f2" | "gf2" => FamilyId::GologluF2,
            "lzlq" => FamilyId::Lzlq,
            "gold" => FamilyId::Known(1),
            other => {
                let num = other
                    .strip_prefix("known-")
                    .or_else(|| other.strip_prefix("family-"))
                    .unwrap_or(other);
                match num.parse::<u8>() {
                    Ok(id @ 1..=12) => FamilyId::Known(id),
                    _ => return Err(format!("unknown family '{s}'")),
                }
            }
        })
    }
}

impl Serialize for FamilyId {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FamilyId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

mod hex_elt {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<Elt>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(a) => s.collect_str(&format_args!("{a:#x}")),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Elt>, D::Error> {
        let s: Option<String> = Option::deserialize(d)?;
        s.map(|s| parse_hex(&s).map_err(serde::de::Error::custom))
            .transpose()
    }
}

/// Parameters of one family member.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyParams {
    pub family: FamilyId,
    pub m: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(default, with = "hex_elt", skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Elt>,
    /// Family-specific integers and field elements (`i`, `s`, `u`, `a`, `b`, …).
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub extra: BTreeMap<String, u64>,
}

impl FamilyParams {
    pub fn new(family: FamilyId, m: u32) -> Self {
        Self {
            family,
            m,
            k: None,
            alpha: None,
            extra: BTreeMap::new(),
        }
    }

    pub fn with_k(mut self, k: u32) -> Self {
        self.k = Some(k);
        self
    }

    pub fn with_alpha(mut self, alpha: Elt) -> Self {
        self.alpha = Some(alpha);
        self
    }

    pub fn with(mut self, key: &str, value: u64) -> Self {
        self.extra.insert(key.to_string(), value);
        self
    }

    /// Dimension `n` of the resulting `(n, n)`-function.
    pub fn n(&self) -> u32 {
        if self.family.is_bivariate() {
            2 * self.m
        } else {
            self.m
        }
    }

    fn get(&self, key: &str) -> Result<u64, String> {
        self.extra
            .get(key)
            .copied()
            .ok_or_else(|| format!("missing parameter '{key}'"))
    }

    fn elt(&self, key: &str, field: &Gf) -> Result<Elt, String> {
        let v = self.get(key)?;
        if v >= field.size() as u64 {
            return Err(format!("{key} = {v:#x} is not an element of F_2^{}", field.m()));
        }
        Ok(v as Elt)
    }

    fn k(&self) -> Result<u32, String> {
        self.k.ok_or_else(|| "missing k".to_string())
    }

    fn alpha(&self, field: &Gf) -> Result<Elt, String> {
        let a = self.alpha.ok_or_else(|| "missing alpha".to_string())?;
        if a as usize >= field.size() {
            return Err(format!("alpha = {a:#x} is not an element of F_2^{}", field.m()));
        }
        Ok(a)
    }
}

impl fmt::Display for FamilyParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} m={}", self.family, self.m)?;
        if let Some(k) = self.k {
            write!(f, " k={k}")?;
        }
        if let Some(a) = self.alpha {
            write!(f, " alpha={a:#x}")?;
        }
        for (key, v) in &self.extra {
            write!(f, " {key}={v:#x}")?;
        }
        Ok(())
    }
}

/// Outcome of [`validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Validation {
    pub ok: bool,
    pub reason: String,
}

impl Validation {
    fn pass() -> Self {
        Self {
            ok: true,
            reason: "all conditions hold".into(),
        }
    }
}

fn check(cond: bool, reason: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(reason())
    }
}

fn coprime(a: u32, b: u32, what: &str) -> Result<(), String> {
    check(gcd(a, b) == 1, || format!("gcd({what}) = gcd({a}, {b}) != 1"))
}

// ---------------------------------------------------------------------------
// Bivariate constructors

/// `(x^{q+1} + xy^q + αy^{q+1}, x^{q²+1} + αx^{q²}y + (1+α)^q xy^{q²} + αy^{q²+1})`.
pub fn f1(field: &Gf, k: u32, alpha: Elt) -> Result<BivariatePair, FamilyError> {
    let params = FamilyParams::new(FamilyId::F1, field.m())
        .with_k(k)
        .with_alpha(alpha);
    require_valid(&params, field)?;
    Ok(f1_terms(field, k, alpha))
}

fn f1_terms(field: &Gf, k: u32, alpha: Elt) -> BivariatePair {
    let q = 1u64 << k;
    let q2 = q * q;
    BivariatePair::new(
        field.m(),
        vec![
            Term::new(q + 1, 0, 1),
            Term::new(1, q, 1),
            Term::new(0, q + 1, alpha),
        ],
        vec![
            Term::new(q2 + 1, 0, 1),
            Term::new(q2, 1, alpha),
            Term::new(1, q2, field.pow_q(1 ^ alpha, k)),
            Term::new(0, q2 + 1, alpha),
        ],
    )
    .pruned()
}

/// `(x³ + xy + xy² + αy³, x⁵ + xy + αx²y² + αx⁴y + (1+α)²xy⁴ + αy⁵)`.
pub fn f2(field: &Gf, alpha: Elt) -> Result<BivariatePair, FamilyError> {
    let params = FamilyParams::new(FamilyId::F2, field.m()).with_alpha(alpha);
    require_valid(&params, field)?;
    Ok(f2_terms(field, alpha))
}

fn f2_terms(field: &Gf, alpha: Elt) -> BivariatePair {
    BivariatePair::new(
        field.m(),
        vec![
            Term::new(3, 0, 1),
            Term::new(1, 1, 1),
            Term::new(1, 2, 1),
            Term::new(0, 3, alpha),
        ],
        vec![
            Term::new(5, 0, 1),
            Term::new(1, 1, 1),
            Term::new(2, 2, alpha),
            Term::new(4, 1, alpha),
            Term::new(1, 4, field.square(1 ^ alpha)),
            Term::new(0, 5, alpha),
        ],
    )
    .pruned()
}

/// `(xy, xy + αx²y²)`, the terms separating `F2` from `F1` at `k = 1`.
pub fn dillon_terms(field: &Gf, alpha: Elt) -> BivariatePair {
    BivariatePair::new(
        field.m(),
        vec![Term::new(1, 1, 1)],
        vec![Term::new(1, 1, 1), Term::new(2, 2, alpha)],
    )
    .pruned()
}

/// `𝓕1`: `(x^{q+1} + xy^q + y^{q+1}, x^{q²+1} + x^{q²}y + y^{q²+1})`.
pub fn gologlu_f1(field: &Gf, k: u32) -> Result<BivariatePair, FamilyError> {
    require_valid(&FamilyParams::new(FamilyId::GologluF1, field.m()).with_k(k), field)?;
    let q = 1u64 << k;
    let q2 = q * q;
    Ok(BivariatePair::new(
        field.m(),
        vec![Term::new(q + 1, 0, 1), Term::new(1, q, 1), Term::new(0, q + 1, 1)],
        vec![Term::new(q2 + 1, 0, 1), Term::new(q2, 1, 1), Term::new(0, q2 + 1, 1)],
    ))
}

/// `𝓕2`: `(x^{q+1} + xy^q + y^{q+1}, x^{q³}y + xy^{q³})`.
pub fn gologlu_f2(field: &Gf, k: u32) -> Result<BivariatePair, FamilyError> {
    require_valid(&FamilyParams::new(FamilyId::GologluF2, field.m()).with_k(k), field)?;
    let q = 1u64 << k;
    let q3 = q * q * q;
    Ok(BivariatePair::new(
        field.m(),
        vec![Term::new(q + 1, 0, 1), Term::new(1, q, 1), Term::new(0, q + 1, 1)],
        vec![Term::new(q3, 1, 1), Term::new(1, q3, 1)],
    ))
}

/// `(x³ + xy + xy² + y³, x⁵ + xy + x²y² + x⁴y + y⁵)` for `gcd(3, m) = 1`.
pub fn lzlq(field: &Gf) -> Result<BivariatePair, FamilyError> {
    require_valid(&FamilyParams::new(FamilyId::Lzlq, field.m()), field)?;
    Ok(BivariatePair::new(
        field.m(),
        vec![
            Term::new(3, 0, 1),
            Term::new(1, 1, 1),
            Term::new(1, 2, 1),
            Term::new(0, 3, 1),
        ],
        vec![
            Term::new(5, 0, 1),
            Term::new(1, 1, 1),
            Term::new(2, 2, 1),
            Term::new(4, 1, 1),
            Term::new(0, 5, 1),
        ],
    ))
}

fn require_valid(params: &FamilyParams, field: &Gf) -> Result<(), FamilyError> {
    let v = validate_in(params, field);
    if v.ok {
        Ok(())
    } else {
        Err(FamilyError::Invalid {
            family: params.family,
            reason: v.reason,
        })
    }
}

// ---------------------------------------------------------------------------
// Validation

/// Checks every published condition of the family, in the default field of degree `params.m`.
pub fn validate(params: &FamilyParams) -> Validation {
    match Gf::with_degree(params.m) {
        Ok(field) => validate_in(params, &field),
        Err(e) => Validation {
            ok: false,
            reason: e.to_string(),
        },
    }
}

/// [`validate`] with an explicit coefficient field.
pub fn validate_in(params: &FamilyParams, field: &Gf) -> Validation {
    let result = if field.m() != params.m {
        Err(format!(
            "field degree {} differs from m = {}",
            field.m(),
            params.m
        ))
    } else {
        conditions(params, field)
    };
    match result {
        Ok(()) => Validation::pass(),
        Err(reason) => Validation { ok: false, reason },
    }
}

fn conditions(p: &FamilyParams, field: &Gf) -> Result<(), String> {
    let m = p.m;
    match p.family {
        FamilyId::F1 => {
            let k = p.k()?;
            let alpha = p.alpha(field)?;
            check(k >= 1, || "k must be positive".into())?;
            coprime(k, m, "k, m")?;
            let rooted = poly::phi_has_root(field, k, alpha).map_err(|e| e.to_string())?;
            check(!rooted, || {
                format!("x^(q+1) + x + {alpha:#x} has a root in F_2^{m}")
            })
        }
        FamilyId::F2 => {
            let alpha = p.alpha(field)?;
            if let Some(k) = p.k {
                check(k == 1, || "F2 is defined for k = 1 only".into())?;
            }
            check(alpha != 0, || "alpha = 0 makes x = 0 a root of x^3 + x + alpha".into())?;
            let report = poly::cubic_roots(field, 1, alpha).map_err(|e| e.to_string())?;
            check(report.root_count == 0, || {
                format!(
                    "x^3 + x + {alpha:#x} has {} root(s) in F_2^{m}",
                    report.root_count
                )
            })
        }
        FamilyId::GologluF1 => {
            let k = p.k()?;
            check(k >= 1, || "k must be positive".into())?;
            coprime(3 * k, m, "3k, m")
        }
        FamilyId::GologluF2 => {
            let k = p.k()?;
            check(k >= 1, || "k must be positive".into())?;
            coprime(3 * k, m, "3k, m")?;
            check(m % 2 == 1, || format!("m = {m} must be odd"))
        }
        FamilyId::Lzlq => coprime(3, m, "3, m"),
        FamilyId::Known(id) => known_conditions(id, p, field),
    }
}

fn small(p: &FamilyParams, key: &str) -> Result<u32, String> {
    let v = p.get(key)?;
    u32::try_from(v).map_err(|_| format!("{key} = {v} out of range"))
}

fn known_conditions(id: u8, p: &FamilyParams, field: &Gf) -> Result<(), String> {
    let n = field.m();
    let m = n;
    match id {
        1 => {
            let i = small(p, "i")?;
            check(i >= 1 && i < n, || format!("i = {i} must lie in 1..{n}"))?;
            coprime(i, n, "i, n")
        }
        2 | 3 => {
            check(n % 3 == 0, || format!("n = {n} must be a multiple of 3"))?;
            let k = n / 3;
            coprime(k, 3, "k, 3")?;
            let s = small(p, "s")?;
            check(s >= 1, || "s must be positive".into())?;
            coprime(s, n, "s, 3k")?;
            let u = p.elt("u", field)?;
            check(field.is_primitive(u), || format!("u = {u:#x} is not primitive"))?;
            if id == 2 {
                check(n >= 12, || format!("n = {n} < 12"))
            } else {
                check((k + s) % 3 == 0, || format!("3 does not divide k + s = {}", k + s))?;
                let v = p.elt("v", field)?;
                let w = p.elt("w", field)?;
                check(field.in_subfield(v, k) && field.in_subfield(w, k), || {
                    format!("v, w must lie in F_2^{k}")
                })?;
                check(field.mul(v, w) != 1, || "vw = 1".into())
            }
        }
        4 => {
            check(n % 3 == 0, || format!("n = {n} must be a multiple of 3"))?;
            let mm = n / 3;
            let s = small(p, "s")?;
            check(s >= 1, || "s must be positive".into())?;
            coprime(s, mm, "s, m")?;
            let v = p.elt("v", field)?;
            check(v != 0 && field.in_subfield(v, mm), || {
                format!("v must lie in F_2^{mm}*")
            })?;
            let mu = p.elt("mu", field)?;
            let e = (1u64 << (2 * mm)) + (1 << mm) + 1;
            check(field.pow(mu, e) != 1, || "mu^(2^2m + 2^m + 1) = 1".into())?;
            let kernel = linearized_kernel_dim(field, &[(1, mm + s), (mu, s), (1, 0)]);
            check(kernel == 0, || "L(z) is not a permutation".into())
        }
        5 => {
            check(n % 2 == 0, || format!("n = {n} must be even"))?;
            let mm = n / 2;
            let i = small(p, "i")?;
            check(i >= 1, || "i must be positive".into())?;
            coprime(i, mm, "i, m")?;
            let s = p.elt("s", field)?;
            check(!field.in_subfield(s, mm), || format!("s must lie outside F_2^{mm}"))?;
            let c = p.elt("c", field)?;
            let q_exp = (1u64 << mm) + 1;
            let cq = field.pow_q(c, mm);
            let bad = field.elements().find(|&z| {
                field.pow(z, q_exp) == 1 && {
                    let zi = field.pow_q(z, i);
                    field.mul(zi, z) ^ field.mul(c, zi) ^ field.mul(cq, z) ^ 1 == 0
                }
            });
            check(bad.is_none(), || {
                format!("z = {:#x} on the unit circle solves the hexanomial condition", bad.unwrap())
            })
        }
        6 => {
            let a = p.elt("a", field)?;
            check(a != 0, || "a = 0".into())
        }
        7 | 8 => {
            check(n % 3 == 0, || format!("n = {n} must be a multiple of 3"))?;
            let a = p.elt("a", field)?;
            check(a != 0, || "a = 0".into())
        }
        9 => {
            check(m % 2 == 0, || format!("m = {m} must be even"))?;
            let k = p.k()?;
            check(k >= 1, || "k must be positive".into())?;
            coprime(k, m, "k, m")?;
            small(p, "i")?;
            let alpha = p.alpha(field)?;
            check(!field.is_cube(alpha), || format!("alpha = {alpha:#x} is a cube"))
        }
        10 => {
            let k = p.k()?;
            check(k >= 1, || "k must be positive".into())?;
            coprime(k, m, "k, m")?;
            let a = p.elt("a", field)?;
            let b = p.elt("b", field)?;
            let poly = poly::ProjectivePoly {
                a: 1,
                b: 0,
                c: a,
                d: b,
                k,
            };
            check(!poly.has_root(field), || {
                format!("z^(2^k+1) + {a:#x} z + {b:#x} has a root")
            })
        }
        11 => {
            check(m % 2 == 0, || format!("m = {m} must be even"))?;
            let i = small(p, "i")?;
            check(i >= 1, || "i must be positive".into())?;
            coprime(i, m, "i, m")?;
            let b = p.elt("b", field)?;
            let c = p.elt("c", field)?;
            let e = (1u64 << (m / 2)) + 1;
            let root = field.elements().find(|&z| {
                let zi = field.pow_q(z, i);
                let inner = field.mul(c, field.mul(zi, z)) ^ field.mul(b, zi) ^ 1;
                field.pow(inner, e) ^ field.pow(z, e) == 0
            });
            check(root.is_none(), || format!("z = {:#x} is a root", root.unwrap()))
        }
        12 => {
            check(m % 4 == 2, || format!("m = {m} is not 2 mod 4"))?;
            let k = p.k()?;
            check(k >= 1, || "k must be positive".into())?;
            coprime(k, m, "k, m")?;
            let big_b = p.elt("B", field)?;
            check(!field.is_cube(big_b), || format!("B = {big_b:#x} is a cube"))?;
            let a = p.elt("a", field)?;
            check(a != 0 && field.in_subfield(a, m / 2), || {
                format!("a must lie in F_2^{}*", m / 2)
            })?;
            let lhs = field.pow(big_b, (1u64 << k) + (1u64 << (k + m / 2)));
            let rhs = field.pow(a, (1u64 << k) + 1);
            check(lhs != rhs, || "B^(2^k + 2^(k+m/2)) = a^(2^k + 1)".into())
        }
        _ => Err(format!("no known family {id}")),
    }
}

// ---------------------------------------------------------------------------
// Building

/// A constructed family member.
#[derive(Debug, Clone)]
pub struct Instance {
    pub params: FamilyParams,
    pub table: TruthTable,
}

/// Validates and evaluates in the default field of degree `params.m`.
pub fn build(params: &FamilyParams) -> Result<Instance, FamilyError> {
    let field = Gf::with_degree(params.m)?;
    build_in(params, &field)
}

/// Validates and evaluates with an explicit coefficient field.
pub fn build_in(params: &FamilyParams, field: &Gf) -> Result<Instance, FamilyError> {
    require_valid(params, field)?;
    let table = evaluate_valid(params, field).map_err(|reason| FamilyError::Invalid {
        family: params.family,
        reason,
    })?;
    Ok(Instance {
        params: params.clone(),
        table,
    })
}

fn exp2(e: u32, n: u32) -> u64 {
    1u64 << (e % n)
}

fn evaluate_valid(p: &FamilyParams, field: &Gf) -> Result<TruthTable, String> {
    let m = p.m;
    let table = match p.family {
        FamilyId::F1 => f1_terms(field, p.k()?, p.alpha(field)?).evaluate(field),
        FamilyId::F2 => f2_terms(field, p.alpha(field)?).evaluate(field),
        FamilyId::GologluF1 => gologlu_f1(field, p.k()?)
            .map_err(|e| e.to_string())?
            .evaluate(field),
        FamilyId::GologluF2 => gologlu_f2(field, p.k()?)
            .map_err(|e| e.to_string())?
            .evaluate(field),
        FamilyId::Lzlq => lzlq(field).map_err(|e| e.to_string())?.evaluate(field),
        FamilyId::Known(id) if id <= 8 => known_univariate(id, p, field)?,
        FamilyId::Known(id) => known_bivariate(id, p, field)?.evaluate(field),
    };
    debug_assert_eq!(table.n(), p.n(), "{m}");
    Ok(table)
}

fn known_univariate(id: u8, p: &FamilyParams, field: &Gf) -> Result<TruthTable, String> {
    let n = field.m();
    let terms: Vec<(u64, Elt)> = match id {
        1 => vec![(exp2(small(p, "i")?, n) + 1, 1)],
        2 => {
            let k = n / 3;
            let s = small(p, "s")?;
            let u = p.elt("u", field)?;
            let i = (s * k) % 3;
            let mm = 3 - i;
            vec![
                (exp2(s, n) + 1, 1),
                (
                    exp2(i * k, n) + exp2(mm * k + s, n),
                    field.pow(u, (1u64 << k) - 1),
                ),
            ]
        }
        3 => {
            let k = n / 3;
            let s = small(p, "s")?;
            let u = p.elt("u", field)?;
            let v = p.elt("v", field)?;
            let w = p.elt("w", field)?;
            let minus_k = exp2(n - k, n);
            vec![
                (exp2(s, n) + 1, u),
                (minus_k + exp2(k + s, n), field.pow_q(u, k)),
                (minus_k + 1, v),
                (
                    exp2(s, n) + exp2(k + s, n),
                    field.mul(w, field.pow(u, (1u64 << k) + 1)),
                ),
            ]
        }
        4 => {
            let mm = n / 3;
            let s = small(p, "s")?;
            let v = p.elt("v", field)?;
            let mu = p.elt("mu", field)?;
            let e = (1u64 << mm) + 1;
            return vbf::TruthTable::from_fn(n, |z| {
                let l = field.pow_q(z, mm + s) ^ field.mul(mu, field.pow_q(z, s)) ^ z;
                field.pow(l, e) ^ field.mul(v, field.pow(z, e))
            })
            .map_err(|e| e.to_string());
        }
        5 => {
            let mm = n / 2;
            let q = 1u64 << mm;
            let i = small(p, "i")?;
            let s = p.elt("s", field)?;
            let c = p.elt("c", field)?;
            let ti = 1u64 << i;
            vec![
                (q + 1, s),
                (ti + 1, 1),
                (q * (ti + 1), 1),
                (ti * q + 1, c),
                (ti + q, field.pow_q(c, mm)),
            ]
        }
        6..=8 => {
            let a = p.elt("a", field)?;
            let ainv = field.inv(a).map_err(|e| e.to_string())?;
            let a3 = field.pow(a, 3);
            let a6 = field.square(a3);
            let a12 = field.square(a6);
            return vbf::TruthTable::from_fn(n, |x| {
                let x9 = field.pow(x, 9);
                let x18 = field.square(x9);
                let inner = match id {
                    6 => field.trace(field.mul(a3, x9)),
                    7 => field
                        .rel_trace(field.mul(a3, x9) ^ field.mul(a6, x18), 3)
                        .expect("3 | n checked by validate"),
                    _ => field
                        .rel_trace(
                            field.mul(a6, x18) ^ field.mul(a12, field.square(x18)),
                            3,
                        )
                        .expect("3 | n checked by validate"),
                };
                field.pow(x, 3) ^ field.mul(ainv, inner)
            })
            .map_err(|e| e.to_string());
        }
        _ => return Err(format!("family {id} is not univariate")),
    };
    Ok(vbf::univariate_evaluate(field, &terms))
}

fn known_bivariate(id: u8, p: &FamilyParams, field: &Gf) -> Result<BivariatePair, String> {
    let m = field.m();
    let xy = vec![Term::new(1, 1, 1)];
    let pair = match id {
        9 => {
            let q = exp2(p.k()?, m);
            let i = small(p, "i")?;
            let alpha = p.alpha(field)?;
            BivariatePair::new(
                m,
                xy,
                vec![Term::new(q + 1, 0, 1), Term::new(0, (q + 1) * exp2(i, m), alpha)],
            )
        }
        10 => {
            let k = p.k()?;
            let a = p.elt("a", field)?;
            let b = p.elt("b", field)?;
            BivariatePair::new(
                m,
                xy,
                vec![
                    Term::new(exp2(3 * k, m) + exp2(2 * k, m), 0, 1),
                    Term::new(exp2(2 * k, m), exp2(k, m), a),
                    Term::new(0, exp2(k, m) + 1, b),
                ],
            )
        }
        11 => {
            let i = small(p, "i")?;
            let b = p.elt("b", field)?;
            let c = p.elt("c", field)?;
            let ti = exp2(i, m);
            BivariatePair::new(
                m,
                xy,
                vec![
                    Term::new(ti + 1, 0, 1),
                    Term::new(exp2(i + m / 2, m), exp2(m / 2, m), 1),
                    Term::new(1, ti, b),
                    Term::new(0, ti + 1, c),
                ],
            )
        }
        12 => {
            let k = p.k()?;
            let big_b = p.elt("B", field)?;
            let a = p.elt("a", field)?;
            let tk = exp2(k, m);
            let r = exp2(k + m / 2, m);
            let coef = field.mul(a, field.inv(big_b).map_err(|e| e.to_string())?);
            BivariatePair::new(
                m,
                vec![Term::new(tk + 1, 0, 1), Term::new(0, tk + 1, big_b)],
                vec![Term::new(r, 1, 1), Term::new(1, r, coef)],
            )
        }
        _ => return Err(format!("family {id} is not bivariate")),
    };
    Ok(pair.pruned())
}

// ---------------------------------------------------------------------------
// Parameter search

/// First valid parameter set for a known family in dimension `n`, in a fixed
/// scan order, evaluated and checked to be APN.
pub fn known_family(id: u8, n: u32) -> Result<Instance, FamilyError> {
    let family = FamilyId::Known(id);
    if !(1..=12).contains(&id) {
        return Err(FamilyError::Invalid {
            family,
            reason: format!("no known family {id}"),
        });
    }
    let coeff_degree = if family.is_bivariate() {
        if n % 2 != 0 {
            return Err(FamilyError::NoParameters { family, n });
        }
        n / 2
    } else {
        n
    };
    let field = Gf::with_degree(coeff_degree)?;
    let params = candidates(id, &field)
        .find(|p| validate_in(p, &field).ok)
        .ok_or(FamilyError::NoParameters { family, n })?;
    let inst = build_in(&params, &field)?;
    if !vbf::is_apn(&inst.table) {
        return Err(FamilyError::NotApn {
            family,
            params: params.to_string(),
        });
    }
    Ok(inst)
}

/// One member of `family` in dimension `n`: the first good `α` (and `k = 1`)
/// for the biprojective families, [`known_family`] for the known ones.
pub fn representative(family: FamilyId, n: u32) -> Result<Instance, FamilyError> {
    let half = |n: u32| {
        if n % 2 == 0 {
            Ok(n / 2)
        } else {
            Err(FamilyError::NoParameters { family, n })
        }
    };
    let params = match family {
        FamilyId::Known(id) => return known_family(id, n),
        FamilyId::F1 | FamilyId::F2 => {
            let m = half(n)?;
            let field = Gf::with_degree(m)?;
            let alpha = poly::find_good_alphas(&field, 1)
                .map_err(|_| FamilyError::NoParameters { family, n })?[0];
            let p = FamilyParams::new(family, m).with_alpha(alpha);
            if family == FamilyId::F1 {
                p.with_k(1)
            } else {
                p
            }
        }
        FamilyId::GologluF1 | FamilyId::GologluF2 => {
            let m = half(n)?;
            let k = (1..m.max(2))
                .find(|&k| {
                    validate(&FamilyParams::new(family, m).with_k(k)).ok
                })
                .ok_or(FamilyError::NoParameters { family, n })?;
            FamilyParams::new(family, m).with_k(k)
        }
        FamilyId::Lzlq => FamilyParams::new(family, half(n)?),
    };
    build(&params)
}

/// Primitive elements, starting from the field's table generator.
fn primitives(field: &Gf) -> impl Iterator<Item = Elt> + '_ {
    let g = field.generator();
    std::iter::once(g).chain(field.elements().filter(move |&u| u != g && field.is_primitive(u)))
}

fn candidates<'a>(id: u8, field: &'a Gf) -> Box<dyn Iterator<Item = FamilyParams> + 'a> {
    let n = field.m();
    let base = FamilyParams::new(FamilyId::Known(id), n);
    let elts = move || field.elements().map(u64::from);
    match id {
        1 => Box::new((1..n).map(move |i| base.clone().with("i", i as u64))),
        2 => Box::new((1..n).flat_map(move |s| {
            let base = base.clone();
            primitives(field).map(move |u| base.clone().with("s", s as u64).with("u", u as u64))
        })),
        3 => {
            let k = n / 3;
            let sub: Vec<u64> = elts().filter(|&v| field.in_subfield(v as Elt, k.max(1))).collect();
            let u = field.generator() as u64;
            Box::new((1..n).flat_map(move |s| {
                let base = base.clone();
                let sub = sub.clone();
                sub.clone().into_iter().flat_map(move |v| {
                    let base = base.clone();
                    sub.clone().into_iter().map(move |w| {
                        base.clone()
                            .with("s", s as u64)
                            .with("u", u)
                            .with("v", v)
                            .with("w", w)
                    })
                })
            }))
        }
        4 => {
            let mm = (n / 3).max(1);
            Box::new((1..mm.max(2)).flat_map(move |s| {
                let base = base.clone();
                elts()
                    .filter(move |&v| v != 0 && field.in_subfield(v as Elt, mm))
                    .flat_map(move |v| {
                        let base = base.clone();
                        elts().map(move |mu| {
                            base.clone().with("s", s as u64).with("v", v).with("mu", mu)
                        })
                    })
            }))
        }
        5 => Box::new((1..(n / 2).max(2)).flat_map(move |i| {
            let base = base.clone();
            let s = elts().find(|&s| !field.in_subfield(s as Elt, n / 2)).unwrap_or(0);
            elts().map(move |c| base.clone().with("i", i as u64).with("s", s).with("c", c))
        })),
        6..=8 => Box::new(elts().map(move |a| base.clone().with("a", a))),
        9 => Box::new((1..n).flat_map(move |k| {
            let base = base.clone();
            (0..n).flat_map(move |i| {
                let base = base.clone();
                field.elements().map(move |alpha| {
                    base.clone()
                        .with_k(k)
                        .with("i", i as u64)
                        .with_alpha(alpha)
                })
            })
        })),
        10 => Box::new((1..n).flat_map(move |k| {
            let base = base.clone();
            elts().flat_map(move |a| {
                let base = base.clone();
                elts().map(move |b| base.clone().with_k(k).with("a", a).with("b", b))
            })
        })),
        11 => Box::new((1..n).flat_map(move |i| {
            let base = base.clone();
            elts().flat_map(move |b| {
                let base = base.clone();
                elts().map(move |c| base.clone().with("i", i as u64).with("b", b).with("c", c))
            })
        })),
        12 => Box::new((1..n).flat_map(move |k| {
            let base = base.clone();
            elts().flat_map(move |big_b| {
                let base = base.clone();
                elts().map(move |a| base.clone().with_k(k).with("B", big_b).with("a", a))
            })
        })),
        _ => Box::new(std::iter::empty()),
    }
}
