//! Independent oracles shared by the integration tests. Nothing here calls
//! into the code paths it is used to check.

#![allow(dead_code)]

use apnforge::vbf::{LinearMap, TruthTable};
use rand::Rng;

/// Schoolbook product of two polynomials over F_2 given as coefficient
/// vectors, followed by long division by `reduction`.
pub fn schoolbook_mul(a: u32, b: u32, m: u32, reduction: u32) -> u32 {
    let coeffs = |v: u32, len: u32| -> Vec<u8> { (0..len).map(|i| (v >> i & 1) as u8).collect() };
    let pa = coeffs(a, m);
    let pb = coeffs(b, m);
    let mut prod = vec![0u8; 2 * m as usize];
    for (i, &x) in pa.iter().enumerate() {
        for (j, &y) in pb.iter().enumerate() {
            prod[i + j] ^= x & y;
        }
    }
    let red = coeffs(reduction, m + 1);
    for deg in (m as usize..prod.len()).rev() {
        if prod[deg] == 1 {
            for (k, &r) in red.iter().enumerate() {
                prod[deg - m as usize + k] ^= r;
            }
        }
    }
    prod.iter()
        .take(m as usize)
        .enumerate()
        .fold(0, |acc, (i, &c)| acc | (c as u32) << i)
}

fn span_of(basis: &[u32]) -> Vec<u32> {
    let mut span = vec![0u32];
    for &v in basis {
        let ext: Vec<u32> = span.iter().map(|&w| w ^ v).collect();
        span.extend(ext);
    }
    span
}

/// Counts d-dimensional subspaces with all nonzero points in `set` by
/// enumerating unordered d-subsets and dividing by the number of unordered
/// bases of a d-dimensional space.
pub fn brute_force_subspaces(set: &[u32], d: usize) -> u64 {
    let members: std::collections::HashSet<u32> = set.iter().copied().collect();
    let unordered_bases: u64 = {
        let mut ordered = 1u64;
        for i in 0..d {
            ordered *= (1u64 << d) - (1u64 << i);
        }
        ordered / (1..=d as u64).product::<u64>()
    };
    let mut hits = 0u64;
    let mut idx: Vec<usize> = (0..d).collect();
    if d == 0 || set.len() < d {
        return 0;
    }
    loop {
        let basis: Vec<u32> = idx.iter().map(|&i| set[i]).collect();
        let span = span_of(&basis);
        let mut sorted = span.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() == span.len() && span.iter().all(|&v| v == 0 || members.contains(&v)) {
            hits += 1;
        }
        // next combination
        let mut i = d;
        loop {
            if i == 0 {
                return hits / unordered_bases;
            }
            i -= 1;
            if idx[i] < set.len() - d + i {
                idx[i] += 1;
                for j in i + 1..d {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

pub fn random_invertible(n: u32, rng: &mut impl Rng) -> LinearMap {
    loop {
        let cols: Vec<u32> = (0..n).map(|_| rng.gen_range(0..1u32 << n)).collect();
        let map = LinearMap::from_columns(cols);
        if map.is_invertible() {
            return map;
        }
    }
}

/// `A2 ∘ F ∘ A1 + c·x + d` style EA transform with random linear parts.
pub fn random_ea_transform(tt: &TruthTable, rng: &mut impl Rng) -> TruthTable {
    let n = tt.n();
    let a1 = random_invertible(n, rng).to_table().unwrap();
    let a2 = random_invertible(n, rng).to_table().unwrap();
    let lin = LinearMap::from_columns((0..n).map(|_| rng.gen_range(0..1u32 << n)).collect());
    let shift = rng.gen_range(0..1u32 << n);
    let inner = tt.compose_input(&a1).unwrap().compose_output(&a2).unwrap();
    TruthTable::from_fn(n, |x| inner.get(x) ^ lin.apply(x) ^ shift).unwrap()
}

/// A random function of algebraic degree ≤ 2: `Σ_{i<j} x_i x_j c_ij + Σ x_i d_i`.
pub fn random_quadratic(n: u32, rng: &mut impl Rng) -> TruthTable {
    let mut quad = vec![vec![0u32; n as usize]; n as usize];
    for (i, row) in quad.iter_mut().enumerate() {
        for c in row.iter_mut().skip(i + 1) {
            *c = rng.gen_range(0..1u32 << n);
        }
    }
    let lin: Vec<u32> = (0..n).map(|_| rng.gen_range(0..1u32 << n)).collect();
    TruthTable::from_fn(n, |x| {
        let mut acc = 0;
        for i in 0..n as usize {
            if x >> i & 1 == 0 {
                continue;
            }
            acc ^= lin[i];
            for j in i + 1..n as usize {
                if x >> j & 1 == 1 {
                    acc ^= quad[i][j];
                }
            }
        }
        acc
    })
    .unwrap()
}
