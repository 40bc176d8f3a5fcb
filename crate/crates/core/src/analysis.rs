//! Walsh spectra, the non-bent component set and the subspace-count invariant.
//!
//! Component functions are taken as `x ↦ b·F(x)` with `·` the standard dot
//! product on bit vectors. Any other nondegenerate pairing (such as
//! `tr(b F(x))`) relabels `b` by an invertible linear map, which leaves the
//! subspace counts unchanged.
//!
//! `NB_F` never contains 0: the `b = 0` component is constant and has
//! `W_F(0, 0) = 2^n`. A subspace `V` is counted in dimension `d` when every
//! nonzero element of `V` lies in `NB_F`.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{BinaryField, Elt, Gf};
use crate::poly::{self, PolyError};
use crate::vbf::{self, DdtSummary, TruthTable};

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("operation needs even n, got n = {0}")]
    OddWidth(u32),
    #[error("subspace counting needs 0 outside the set")]
    ZeroInSet,
    #[error("function is not APN (differential uniformity {0})")]
    NotApn(u32),
    #[error("NB_F characterizations disagree for a quadratic APN function")]
    NbModesDisagree,
    #[error("Parseval identity fails for component {0:#x}")]
    Parseval(u32),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// In-place Walsh–Hadamard transform; `buf.len()` must be a power of two.
pub fn fwht(buf: &mut [i32]) {
    let n = buf.len();
    debug_assert!(n.is_power_of_two());
    let mut h = 1;
    while h < n {
        for block in buf.chunks_exact_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (u, v) in lo.iter_mut().zip(hi.iter_mut()) {
                let (a, b) = (*u, *v);
                *u = a + b;
                *v = a - b;
            }
        }
        h *= 2;
    }
}

/// Walsh data for one component `b ≠ 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentSpectrum {
    pub b: u32,
    /// `W_F(0, b)`.
    pub w0: i32,
    /// `|W_F(a, b)|` → number of `a` attaining it.
    pub abs_counts: BTreeMap<u32, u32>,
    pub sum_squares: u64,
}

impl ComponentSpectrum {
    pub fn has_zero(&self) -> bool {
        self.abs_counts.contains_key(&0)
    }

    pub fn is_bent(&self, n: u32) -> bool {
        n % 2 == 0 && self.abs_counts.len() == 1 && self.abs_counts.contains_key(&(1 << (n / 2)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalshSheet {
    pub n: u32,
    /// Indexed by `b - 1`.
    pub components: Vec<ComponentSpectrum>,
}

impl WalshSheet {
    pub fn component(&self, b: u32) -> &ComponentSpectrum {
        &self.components[b as usize - 1]
    }

    /// Union of all `|W_F(a, b)|` over `b ≠ 0`.
    pub fn abs_values(&self) -> BTreeSet<u32> {
        self.components
            .iter()
            .flat_map(|c| c.abs_counts.keys().copied())
            .collect()
    }

    pub fn parseval_holds(&self) -> bool {
        let target = 1u64 << (2 * self.n);
        self.components.iter().all(|c| c.sum_squares == target)
    }
}

/// One FWHT of size `2^n` per nonzero `b`.
pub fn walsh_sheet(tt: &TruthTable) -> WalshSheet {
    let n = tt.n();
    let size = tt.len();
    let components = (1..size as u32)
        .into_par_iter()
        .map_init(
            || vec![0i32; size],
            |buf, b| {
                for (slot, &v) in buf.iter_mut().zip(tt.values()) {
                    *slot = if (b & v).count_ones() & 1 == 0 { 1 } else { -1 };
                }
                fwht(buf);
                let mut abs_counts = BTreeMap::new();
                let mut sum_squares = 0u64;
                for &w in buf.iter() {
                    *abs_counts.entry(w.unsigned_abs()).or_insert(0) += 1;
                    sum_squares += (w as i64 * w as i64) as u64;
                }
                ComponentSpectrum {
                    b,
                    w0: buf[0],
                    abs_counts,
                    sum_squares,
                }
            },
        )
        .collect();
    WalshSheet { n, components }
}

/// `W_F(a, b)` for all `a` at one `b`, directly from the definition.
pub fn walsh_column_naive(tt: &TruthTable, b: u32) -> Vec<i32> {
    let size = tt.len() as u32;
    (0..size)
        .map(|a| {
            (0..size)
                .map(|x| {
                    let bit = ((a & x).count_ones() + (b & tt.get(x)).count_ones()) & 1;
                    1 - 2 * bit as i32
                })
                .sum()
        })
        .collect()
}

/// `NB_F`, ascending.
///
/// The general mode collects components with a zero Walsh value; the shortcut
/// only looks at `|W_F(0, b)| ≠ 2^{n/2}`, which is equivalent for quadratic APN
/// functions of even dimension.
pub fn nb_set(sheet: &WalshSheet, quadratic_shortcut: bool) -> Result<Vec<u32>, AnalysisError> {
    if quadratic_shortcut {
        if sheet.n % 2 != 0 {
            return Err(AnalysisError::OddWidth(sheet.n));
        }
        let half = 1u32 << (sheet.n / 2);
        Ok(sheet
            .components
            .iter()
            .filter(|c| c.w0.unsigned_abs() != half)
            .map(|c| c.b)
            .collect())
    } else {
        Ok(sheet
            .components
            .iter()
            .filter(|c| c.has_zero())
            .map(|c| c.b)
            .collect())
    }
}

/// Number of `d`-dimensional subspaces `V` with `V \ {0} ⊆ S`, for `d = 1..=max_dim`.
///
/// Each subspace is reached once, through its greedy basis `v_1 < v_2 < …`
/// where `v_{i+1}` is the least element of `V` outside `span(v_1..v_i)`.
/// A candidate `v` extends `W = span(v_1..v_i)` only if it is the least
/// element of its coset `v + W`, i.e. it has no bit set at any leading-bit
/// position of `W`, and the whole coset lies in `S`.
pub fn count_subspaces(set: &[u32], max_dim: usize) -> Result<Vec<u64>, AnalysisError> {
    if set.contains(&0) {
        return Err(AnalysisError::ZeroInSet);
    }
    let mut counts = vec![0u64; max_dim];
    if max_dim == 0 || set.is_empty() {
        return Ok(counts);
    }
    let mut sorted: Vec<u32> = set.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let top = *sorted.last().unwrap();
    let width = 32 - top.leading_zeros();
    let mut member = vec![false; 1usize << width];
    for &v in &sorted {
        member[v as usize] = true;
    }

    let per_seed: Vec<Vec<u64>> = sorted
        .par_iter()
        .enumerate()
        .map(|(idx, &v1)| {
            let mut local = vec![0u64; max_dim];
            local[0] = 1;
            if max_dim > 1 {
                let lead = 1u32 << (31 - v1.leading_zeros());
                let cands: Vec<u32> = sorted[idx + 1..]
                    .iter()
                    .copied()
                    .filter(|&u| u & lead == 0 && member[(u ^ v1) as usize])
                    .collect();
                let mut span = vec![0, v1];
                extend(&member, &mut span, &cands, 1, &mut local);
            }
            local
        })
        .collect();
    for local in per_seed {
        for (c, l) in counts.iter_mut().zip(local) {
            *c += l;
        }
    }
    Ok(counts)
}

/// `span` holds all `2^dim` elements of the current subspace. Every element of
/// `cands` already satisfies the coset conditions for `span`, exceeds the last
/// basis vector and is clear in every earlier leading bit.
fn extend(
    member: &[bool],
    span: &mut Vec<u32>,
    cands: &[u32],
    dim: usize,
    counts: &mut [u64],
) {
    if dim >= counts.len() {
        return;
    }
    for (i, &v) in cands.iter().enumerate() {
        counts[dim] += 1;
        if dim + 1 >= counts.len() {
            continue;
        }
        let lead = 1u32 << (31 - v.leading_zeros());
        let next: Vec<u32> = cands[i + 1..]
            .iter()
            .copied()
            .filter(|&u| {
                u & lead == 0 && {
                    let t = u ^ v;
                    span.iter().all(|&w| member[(t ^ w) as usize])
                }
            })
            .collect();
        if next.is_empty() {
            continue;
        }
        let old = span.len();
        for j in 0..old {
            span.push(span[j] ^ v);
        }
        extend(member, span, &next, dim + 1, counts);
        span.truncate(old);
    }
}

/// Gaussian binomial `[n choose d]_2`: number of `d`-dim subspaces of `F_2^n`.
pub fn gaussian_binomial(n: u32, d: u32) -> u64 {
    if d > n {
        return 0;
    }
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..d {
        num *= (1u128 << (n - i)) - 1;
        den *= (1u128 << (i + 1)) - 1;
    }
    (num / den) as u64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectrumClass {
    GoldLike,
    Other,
}

/// Gold-like when the absolute Walsh values over `b ≠ 0` are exactly
/// `{0, 2^{n/2}, 2^{n/2+1}}`.
pub fn spectrum_class(sheet: &WalshSheet) -> Result<SpectrumClass, AnalysisError> {
    let n = sheet.n;
    if n % 2 != 0 {
        return Err(AnalysisError::OddWidth(n));
    }
    let gold: BTreeSet<u32> = [0, 1 << (n / 2), 1 << (n / 2 + 1)].into();
    Ok(if sheet.abs_values() == gold {
        SpectrumClass::GoldLike
    } else {
        SpectrumClass::Other
    })
}

/// Whether `F(0) = 0` and every other image point has exactly 3 preimages.
pub fn is_three_to_one(tt: &TruthTable) -> bool {
    let profile = vbf::preimage_profile(tt);
    let rest = (tt.len() - 1) / 3;
    tt.get(0) == 0
        && (tt.len() - 1) % 3 == 0
        && profile == BTreeMap::from([(1, 1), (3, rest)])
        && tt.values().iter().filter(|&&v| v == 0).count() == 1
}

/// Comparison key for quadratic APN functions up to EA-equivalence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantProfile {
    pub delta: u32,
    /// Subspace counts by dimension, trimmed after the last nonzero entry.
    pub nf: Vec<u64>,
    pub spectrum: SpectrumClass,
    pub three_to_one: bool,
    pub nb_size: usize,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ProfileOptions {
    /// Stop counting subspaces after this dimension; `None` counts until the
    /// first dimension with no subspaces.
    pub max_dim: Option<usize>,
}

/// Everything needed to compare APN functions: `δ_F`, `N_F`, spectrum class
/// and the 3-to-1 flag.
pub fn invariant_profile(
    tt: &TruthTable,
    opts: ProfileOptions,
) -> Result<InvariantProfile, AnalysisError> {
    let DdtSummary { delta, .. } = vbf::differential_uniformity(tt);
    if delta != 2 {
        return Err(AnalysisError::NotApn(delta));
    }
    let sheet = walsh_sheet(tt);
    if let Some(c) = sheet.components.iter().find(|c| c.sum_squares != 1 << (2 * tt.n())) {
        return Err(AnalysisError::Parseval(c.b));
    }
    let nb = nb_set(&sheet, false)?;
    if tt.n() % 2 == 0 && vbf::is_quadratic(tt) && nb_set(&sheet, true)? != nb {
        return Err(AnalysisError::NbModesDisagree);
    }
    // a subspace of dimension d has 2^d - 1 nonzero points, all of them in NB_F
    let cap = tt.n() as usize;
    let depth = opts.max_dim.unwrap_or(cap).min(cap);
    let mut nf = count_subspaces(&nb, depth)?;
    while nf.last() == Some(&0) {
        nf.pop();
    }
    let spectrum = if tt.n() % 2 == 0 {
        spectrum_class(&sheet)?
    } else {
        SpectrumClass::Other
    };
    Ok(InvariantProfile {
        delta,
        nf,
        spectrum,
        three_to_one: is_three_to_one(tt),
        nb_size: nb.len(),
    })
}

/// `L(x, y) = ((β+1)x + y/α, x/α + βy)` as a table on packed `(x, y)` indices.
pub fn symmetry_map(field: &Gf, alpha: Elt, beta: Elt) -> Result<TruthTable, AnalysisError> {
    let m = field.m();
    let ainv = field.inv(alpha).map_err(PolyError::from)?;
    let mask = (1u32 << m) - 1;
    TruthTable::from_fn(2 * m, |z| {
        let (x, y) = (z & mask, z >> m);
        let u = field.mul(beta ^ 1, x) ^ field.mul(ainv, y);
        let v = field.mul(ainv, x) ^ field.mul(beta, y);
        (v << m) | u
    })
    .map_err(|_| AnalysisError::OddWidth(2 * m))
}

/// Outcome of the order-3 symmetry check on `F1` with `k = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymmetryReport {
    pub beta: Elt,
    pub cube_is_identity: bool,
    pub square_is_sum: bool,
    pub invariant: bool,
    pub three_to_one: bool,
}

impl SymmetryReport {
    pub fn holds(&self) -> bool {
        self.cube_is_identity && self.square_is_sum && self.invariant && self.three_to_one
    }
}

/// Checks `L³ = id`, `L² = L + id`, `F∘L = F` and the 3-to-1 preimage profile.
pub fn three_to_one_and_symmetry(
    tt: &TruthTable,
    field: &Gf,
    alpha: Elt,
) -> Result<SymmetryReport, AnalysisError> {
    let beta = poly::beta_decomposition(field, alpha)?;
    let l = symmetry_map(field, alpha, beta)?;
    let id = TruthTable::identity(l.n()).expect("width checked by symmetry_map");
    let l2 = l.compose_input(&l).expect("same width");
    let l3 = l2.compose_input(&l).expect("same width");
    let square_is_sum = l2 == l.add_pointwise(&id).expect("same width");
    let invariant = tt.compose_input(&l).map(|fl| &fl == tt).unwrap_or(false);
    Ok(SymmetryReport {
        beta,
        cube_is_identity: l3 == id,
        square_is_sum,
        invariant,
        three_to_one: is_three_to_one(tt),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vbf::univariate_evaluate;

    #[test]
    fn fwht_matches_definition() {
        let f = Gf::with_degree(5).unwrap();
        let tt = univariate_evaluate(&f, &[(5, 1), (3, 9)]);
        let sheet = walsh_sheet(&tt);
        for b in [1u32, 7, 30] {
            let naive = walsh_column_naive(&tt, b);
            let mut counts = BTreeMap::new();
            for w in &naive {
                *counts.entry(w.unsigned_abs()).or_insert(0) += 1;
            }
            assert_eq!(sheet.component(b).abs_counts, counts);
            assert_eq!(sheet.component(b).w0, naive[0]);
        }
        assert!(sheet.parseval_holds());
        assert_eq!(walsh_column_naive(&tt, 0)[0], 32);
    }

    #[test]
    fn odd_gold_has_no_bent_component() {
        let f = Gf::with_degree(5).unwrap();
        let tt = univariate_evaluate(&f, &[(3, 1)]);
        let sheet = walsh_sheet(&tt);
        assert_eq!(nb_set(&sheet, false).unwrap(), (1..32).collect::<Vec<_>>());
        assert!(matches!(nb_set(&sheet, true), Err(AnalysisError::OddWidth(5))));
        assert!(matches!(spectrum_class(&sheet), Err(AnalysisError::OddWidth(5))));
    }

    #[test]
    fn subspace_count_basics() {
        assert!(matches!(count_subspaces(&[0, 1], 2), Err(AnalysisError::ZeroInSet)));
        let all: Vec<u32> = (1..16).collect();
        assert_eq!(count_subspaces(&all, 4).unwrap(), vec![15, 35, 15, 1]);
        assert_eq!(gaussian_binomial(4, 2), 35);
        assert_eq!(gaussian_binomial(6, 3), 1395);
        assert_eq!(count_subspaces(&[1, 2, 4], 2).unwrap(), vec![3, 0]);
        assert_eq!(count_subspaces(&[1, 2, 3], 3).unwrap(), vec![3, 1, 0]);
    }

    #[test]
    fn gold_even_spectrum() {
        let f = Gf::with_degree(6).unwrap();
        let tt = univariate_evaluate(&f, &[(3, 1)]);
        let sheet = walsh_sheet(&tt);
        assert_eq!(spectrum_class(&sheet).unwrap(), SpectrumClass::GoldLike);
        let nb = nb_set(&sheet, false).unwrap();
        assert_eq!(nb.len(), 21);
        assert_eq!(nb, nb_set(&sheet, true).unwrap());
        let p = invariant_profile(&tt, ProfileOptions::default()).unwrap();
        assert!(p.three_to_one);
        assert_eq!(p.nf[0], 21);
    }

    #[test]
    fn profile_rejects_non_apn() {
        let id = TruthTable::identity(4).unwrap();
        assert!(matches!(
            invariant_profile(&id, ProfileOptions::default()),
            Err(AnalysisError::NotApn(16))
        ));
    }

    #[test]
    fn profile_json_shape() {
        let p = InvariantProfile {
            delta: 2,
            nf: vec![1365, 100100],
            spectrum: SpectrumClass::GoldLike,
            three_to_one: true,
            nb_size: 1365,
        };
        assert_eq!(
            serde_json::to_string(&p).unwrap(),
            r#"{"delta":2,"nf":[1365,100100],"spectrum":"gold-like","three_to_one":true,"nb_size":1365}"#
        );
    }
}
