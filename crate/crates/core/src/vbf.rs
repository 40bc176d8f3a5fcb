//! Vectorial Boolean functions `F_2^n → F_2^n` in evaluated form.
//!
//! A [`TruthTable`] stores all `2^n` outputs. Bivariate functions over
//! `F_{2^m} × F_{2^m}` are packed with `x` in the low `m` bits of the index and
//! `y` in the high bits; outputs put `f` low and `g` high.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{BinaryField, Elt, Gf};

/// Largest table width accepted by the binary export format.
pub const MAX_N: u32 = 16;

#[derive(Debug, Error)]
pub enum VbfError {
    #[error("table width n = {0} outside supported range 2..={MAX_N}")]
    BadWidth(u32),
    #[error("table has {len} entries, expected 2^{n}")]
    BadLength { n: u32, len: usize },
    #[error("entry {value:#x} at index {index} does not fit in {n} bits")]
    ValueOutOfRange { n: u32, index: usize, value: u32 },
    #[error("size mismatch: 2^{0} vs 2^{1}")]
    SizeMismatch(u32, u32),
    #[error("map is not a bijection")]
    NotBijective,
    #[error("malformed table file: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// One monomial `c·x^i·y^j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub i: u64,
    pub j: u64,
    pub c: Elt,
}

impl Term {
    pub const fn new(i: u64, j: u64, c: Elt) -> Self {
        Self { i, j, c }
    }
}

/// `(f, g)` with `f, g ∈ F_{2^m}[x, y]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BivariatePair {
    pub m: u32,
    pub f: Vec<Term>,
    pub g: Vec<Term>,
}

impl BivariatePair {
    pub fn new(m: u32, f: Vec<Term>, g: Vec<Term>) -> Self {
        Self { m, f, g }
    }

    /// Drops zero-coefficient terms.
    pub fn pruned(mut self) -> Self {
        self.f.retain(|t| t.c != 0);
        self.g.retain(|t| t.c != 0);
        self
    }

    /// Evaluates over all of `F_{2^m}²` with cached power tables per exponent.
    pub fn evaluate(&self, field: &Gf) -> TruthTable {
        assert_eq!(field.m(), self.m, "field degree does not match the pair");
        let m = self.m;
        let size = field.size();
        let mut exps: Vec<u64> = self
            .f
            .iter()
            .chain(&self.g)
            .flat_map(|t| [t.i, t.j])
            .collect();
        exps.sort_unstable();
        exps.dedup();
        let powers: BTreeMap<u64, Vec<Elt>> = exps
            .iter()
            .map(|&e| (e, field.elements().map(|x| field.pow(x, e)).collect()))
            .collect();
        let eval = |terms: &[Term], x: usize, y: usize| {
            terms.iter().fold(0, |acc, t| {
                let px = powers[&t.i][x];
                let py = powers[&t.j][y];
                acc ^ field.mul(t.c, field.mul(px, py))
            })
        };
        let values = (0..size * size)
            .into_par_iter()
            .map(|idx| {
                let (x, y) = (idx % size, idx / size);
                (eval(&self.g, x, y) << m) | eval(&self.f, x, y)
            })
            .collect();
        TruthTable::from_values_unchecked(2 * m, values)
    }
}

/// Full value table of an `(n, n)`-function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthTable {
    n: u32,
    values: Vec<u32>,
}

impl TruthTable {
    pub fn new(n: u32, values: Vec<u32>) -> Result<Self, VbfError> {
        if !(2..=MAX_N).contains(&n) {
            return Err(VbfError::BadWidth(n));
        }
        if values.len() != 1 << n {
            return Err(VbfError::BadLength {
                n,
                len: values.len(),
            });
        }
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, &v)| v >> n != 0) {
            return Err(VbfError::ValueOutOfRange { n, index, value });
        }
        Ok(Self { n, values })
    }

    fn from_values_unchecked(n: u32, values: Vec<u32>) -> Self {
        debug_assert_eq!(values.len(), 1 << n);
        Self { n, values }
    }

    pub fn from_fn(n: u32, f: impl Fn(u32) -> u32 + Sync) -> Result<Self, VbfError> {
        if !(2..=MAX_N).contains(&n) {
            return Err(VbfError::BadWidth(n));
        }
        let values = (0..1u32 << n).into_par_iter().map(&f).collect();
        Self::new(n, values)
    }

    pub fn identity(n: u32) -> Result<Self, VbfError> {
        Self::from_fn(n, |x| x)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    #[inline]
    pub fn get(&self, x: u32) -> u32 {
        self.values[x as usize]
    }

    /// 64-bit FNV-1a over the little-endian 16-bit word stream.
    pub fn fnv1a(&self) -> u64 {
        let mut h: u64 = 0xcbf29ce484222325;
        for &v in &self.values {
            for byte in (v as u16).to_le_bytes() {
                h ^= byte as u64;
                h = h.wrapping_mul(0x100000001b3);
            }
        }
        h
    }

    pub fn hash_hex(&self) -> String {
        format!("{:016x}", self.fnv1a())
    }

    /// Raw little-endian 16-bit words.
    pub fn write_words<W: Write>(&self, mut w: W) -> Result<(), VbfError> {
        let bytes: Vec<u8> = self
            .values
            .iter()
            .flat_map(|&v| (v as u16).to_le_bytes())
            .collect();
        w.write_all(&bytes)?;
        Ok(())
    }

    /// Reads a word stream; `n` is inferred from the length unless given.
    pub fn read_words<R: Read>(mut r: R, n: Option<u32>) -> Result<Self, VbfError> {
        let mut bytes = Vec::new();
        r.read_to_end(&mut bytes)?;
        if bytes.len() % 2 != 0 {
            return Err(VbfError::Parse(format!("odd byte count {}", bytes.len())));
        }
        let words = bytes.len() / 2;
        let n = match n {
            Some(n) => n,
            None if words.is_power_of_two() => words.trailing_zeros(),
            None => return Err(VbfError::Parse(format!("{words} words is not a power of two"))),
        };
        let values = bytes
            .chunks_exact(2)
            .map(|c| u16::from_le_bytes([c[0], c[1]]) as u32)
            .collect();
        Self::new(n, values).map_err(|e| VbfError::Parse(e.to_string()))
    }

    /// Pointwise XOR.
    pub fn add_pointwise(&self, other: &TruthTable) -> Result<TruthTable, VbfError> {
        if self.n != other.n {
            return Err(VbfError::SizeMismatch(self.n, other.n));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a ^ b)
            .collect();
        Ok(Self::from_values_unchecked(self.n, values))
    }

    /// `x ↦ F(L(x))` for a map `L` given as a table.
    pub fn compose_input(&self, l: &TruthTable) -> Result<TruthTable, VbfError> {
        if self.n != l.n {
            return Err(VbfError::SizeMismatch(self.n, l.n));
        }
        let values = l.values.iter().map(|&x| self.values[x as usize]).collect();
        Ok(Self::from_values_unchecked(self.n, values))
    }

    /// `x ↦ A(F(x))`.
    pub fn compose_output(&self, a: &TruthTable) -> Result<TruthTable, VbfError> {
        a.compose_input(self)
    }

    pub fn is_permutation(&self) -> bool {
        let mut seen = vec![false; self.len()];
        self.values
            .iter()
            .all(|&v| !std::mem::replace(&mut seen[v as usize], true))
    }
}

/// Alias for [`TruthTable::compose_input`].
pub fn compose_linear(tt: &TruthTable, l: &TruthTable) -> Result<TruthTable, VbfError> {
    tt.compose_input(l)
}

/// Evaluates `Σ c·x^e` over a binary field (any degree).
pub fn univariate_evaluate(field: &impl BinaryField, terms: &[(u64, Elt)]) -> TruthTable {
    let n = field.degree();
    TruthTable::from_fn(n, |x| {
        terms
            .iter()
            .fold(0, |acc, &(e, c)| acc ^ field.mul(c, field.pow(x, e)))
    })
    .expect("field degree is in range")
}

/// An `F_2`-linear map given by the images of the unit vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearMap {
    columns: Vec<u32>,
}

impl LinearMap {
    pub fn from_columns(columns: Vec<u32>) -> Self {
        Self { columns }
    }

    pub fn apply(&self, x: u32) -> u32 {
        self.columns
            .iter()
            .enumerate()
            .filter(|(i, _)| x >> i & 1 == 1)
            .fold(0, |acc, (_, &c)| acc ^ c)
    }

    pub fn is_invertible(&self) -> bool {
        crate::poly::rank(self.columns.clone()) as usize == self.columns.len()
    }

    pub fn to_table(&self) -> Result<TruthTable, VbfError> {
        TruthTable::from_fn(self.columns.len() as u32, |x| self.apply(x))
    }
}

/// Result of a differential-uniformity scan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DdtSummary {
    pub delta: u32,
    /// Input/output differences `(a, b)` attaining `delta`, ascending, at most 16.
    pub worst_pairs: Vec<(u32, u32)>,
}

const WORST_PAIR_CAP: usize = 16;

/// `max_{a≠0, b} |{x : F(x⊕a) ⊕ F(x) = b}|`, streaming one `a` at a time.
pub fn differential_uniformity(tt: &TruthTable) -> DdtSummary {
    let size = tt.len();
    let per_a: Vec<(u32, Vec<u32>)> = (1..size as u32)
        .into_par_iter()
        .map_init(
            || vec![0u32; size],
            |hist, a| {
                hist.iter_mut().for_each(|h| *h = 0);
                for x in 0..size as u32 {
                    hist[(tt.get(x ^ a) ^ tt.get(x)) as usize] += 1;
                }
                let max = *hist.iter().max().unwrap();
                let bs = hist
                    .iter()
                    .enumerate()
                    .filter(|(_, &h)| h == max)
                    .map(|(b, _)| b as u32)
                    .take(WORST_PAIR_CAP)
                    .collect();
                (max, bs)
            },
        )
        .collect();
    let delta = per_a.iter().map(|(m, _)| *m).max().unwrap_or(0);
    let worst_pairs = per_a
        .iter()
        .zip(1u32..)
        .filter(|((m, _), _)| *m == delta)
        .flat_map(|((_, bs), a)| bs.iter().map(move |&b| (a, b)))
        .take(WORST_PAIR_CAP)
        .collect();
    DdtSummary { delta, worst_pairs }
}

/// Differential uniformity 2, bailing out at the first repeated derivative value.
pub fn is_apn(tt: &TruthTable) -> bool {
    let size = tt.len();
    (1..size as u32).into_par_iter().all(|a| {
        let mut seen = vec![false; size];
        (0..size as u32)
            .filter(|&x| x < x ^ a)
            .all(|x| !std::mem::replace(&mut seen[(tt.get(x ^ a) ^ tt.get(x)) as usize], true))
    })
}

/// Preimage size → number of image points with that many preimages.
pub fn preimage_profile(tt: &TruthTable) -> BTreeMap<usize, usize> {
    let mut counts = vec![0usize; tt.len()];
    for &v in tt.values() {
        counts[v as usize] += 1;
    }
    let mut profile = BTreeMap::new();
    for c in counts.into_iter().filter(|&c| c > 0) {
        *profile.entry(c).or_insert(0) += 1;
    }
    profile
}

/// Whether `x ↦ F(x⊕a) ⊕ F(x) ⊕ F(a) ⊕ F(0)` is `F_2`-linear.
pub fn derivative_is_linear(tt: &TruthTable, a: u32) -> bool {
    let d = |x: u32| tt.get(x ^ a) ^ tt.get(x) ^ tt.get(a) ^ tt.get(0);
    (1..tt.len() as u32).all(|x| {
        let low = x & x.wrapping_neg();
        d(x) == d(x ^ low) ^ d(low)
    })
}

/// Algebraic degree at most 2: every first-order derivative is affine.
pub fn is_quadratic(tt: &TruthTable) -> bool {
    (1..tt.len() as u32)
        .into_par_iter()
        .all(|a| derivative_is_linear(tt, a))
}

/// Sidecar header written next to an exported word stream.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableHeader {
    pub n: u32,
    pub source: String,
    pub hash: String,
}

impl TableHeader {
    pub fn for_table(tt: &TruthTable, source: impl Into<String>) -> Self {
        Self {
            n: tt.n(),
            source: source.into(),
            hash: tt.hash_hex(),
        }
    }

    /// Checks that `tt` is the table this header describes.
    pub fn check(&self, tt: &TruthTable) -> Result<(), VbfError> {
        if self.n != tt.n() {
            return Err(VbfError::Parse(format!(
                "header says n = {}, data has n = {}",
                self.n,
                tt.n()
            )));
        }
        if self.hash != tt.hash_hex() {
            return Err(VbfError::Parse(format!(
                "hash mismatch: header {}, data {}",
                self.hash,
                tt.hash_hex()
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(m: u32) -> Gf {
        Gf::with_degree(m).unwrap()
    }

    #[test]
    fn rejects_degenerate_tables() {
        assert!(matches!(TruthTable::new(1, vec![0, 1]), Err(VbfError::BadWidth(1))));
        assert!(matches!(
            TruthTable::new(2, vec![0, 1, 2]),
            Err(VbfError::BadLength { .. })
        ));
        assert!(matches!(
            TruthTable::new(2, vec![0, 1, 2, 4]),
            Err(VbfError::ValueOutOfRange { index: 3, .. })
        ));
    }

    #[test]
    fn evaluate_simple_pairs() {
        let f = gf(3);
        let zero = BivariatePair::new(3, vec![], vec![]).evaluate(&f);
        assert!(zero.values().iter().all(|&v| v == 0));
        let proj = BivariatePair::new(3, vec![Term::new(1, 0, 1)], vec![Term::new(0, 1, 1)]);
        assert_eq!(proj.evaluate(&f), TruthTable::identity(6).unwrap());
    }

    #[test]
    fn identity_is_far_from_apn() {
        let id = TruthTable::identity(4).unwrap();
        let s = differential_uniformity(&id);
        assert_eq!(s.delta, 16);
        assert_eq!(s.worst_pairs.len(), 15);
        assert!(!is_apn(&id));
        let pp = preimage_profile(&id);
        assert_eq!(pp, BTreeMap::from([(1, 16)]));
    }

    #[test]
    fn gold_cube_is_apn() {
        let f = gf(5);
        let tt = univariate_evaluate(&f, &[(3, 1)]);
        let s = differential_uniformity(&tt);
        assert_eq!(s.delta, 2);
        assert!(is_apn(&tt));
        assert!(is_quadratic(&tt));
        let g = f.generator();
        let f4 = gf(4);
        let cube = univariate_evaluate(&f4, &[(3, 1)]);
        assert_eq!(cube.get(f4.generator()), f4.pow(f4.generator(), 3));
        assert_eq!(f.pow(g, 3), tt.get(g));
    }

    #[test]
    fn constant_zero_profile() {
        let z = TruthTable::from_fn(4, |_| 0).unwrap();
        assert_eq!(preimage_profile(&z), BTreeMap::from([(16, 1)]));
    }

    #[test]
    fn pointwise_and_composition() {
        let f = gf(4);
        let tt = univariate_evaluate(&f, &[(3, 1)]);
        let z = tt.add_pointwise(&tt).unwrap();
        assert!(z.values().iter().all(|&v| v == 0));
        let id = TruthTable::identity(4).unwrap();
        assert_eq!(compose_linear(&tt, &id).unwrap(), tt);
        let other = TruthTable::identity(5).unwrap();
        assert!(matches!(
            tt.add_pointwise(&other),
            Err(VbfError::SizeMismatch(4, 5))
        ));
        assert!(tt.compose_input(&other).is_err());
    }

    #[test]
    fn non_quadratic_detected() {
        let f = gf(6);
        // x^7 has algebraic degree 3
        let tt = univariate_evaluate(&f, &[(7, 1)]);
        assert!(!is_quadratic(&tt));
        assert!(is_quadratic(&univariate_evaluate(&f, &[(5, 1), (3, 7)])));
    }

    #[test]
    fn word_stream_round_trip() {
        let tt = univariate_evaluate(&gf(6), &[(3, 1)]);
        let mut buf = Vec::new();
        tt.write_words(&mut buf).unwrap();
        assert_eq!(buf.len(), 2 * 64);
        let back = TruthTable::read_words(&buf[..], None).unwrap();
        assert_eq!(back, tt);
        let header = TableHeader::for_table(&tt, "test");
        header.check(&back).unwrap();
        assert!(TruthTable::read_words(&buf[..buf.len() - 1], None).is_err());
        assert!(TruthTable::read_words(&buf[..buf.len() - 6], None).is_err());
        // a quarter of the words still parses, but not as the table the header describes
        let quarter = TruthTable::read_words(&buf[..32], None);
        assert!(quarter.map_or(true, |t| header.check(&t).is_err()));
    }

    #[test]
    fn fnv_reference_value() {
        // FNV-1a of the bytes 00 00 01 00 02 00 03 00
        let tt = TruthTable::identity(2).unwrap();
        let mut h: u64 = 0xcbf29ce484222325;
        for b in [0u8, 0, 1, 0, 2, 0, 3, 0] {
            h ^= b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
        assert_eq!(tt.fnv1a(), h);
    }

    #[test]
    fn linear_map_table() {
        let l = LinearMap::from_columns(vec![2, 1, 4]);
        assert!(l.is_invertible());
        let t = l.to_table().unwrap();
        assert_eq!(t.get(1), 2);
        assert_eq!(t.get(3), 3);
        assert!(t.is_permutation());
        assert!(!LinearMap::from_columns(vec![1, 1, 4]).is_invertible());
    }
}
