//! Root conditions on projective and cubic polynomials over `F_{2^m}`.
//!
//! Everything here decides a scalar condition that gates one of the
//! constructions in [`crate::families`]. Root finding is by exhaustive scan
//! (at most `2^16` evaluations); the cubic classifier predicts a root count
//! from traces and cube tests, and the scan has to agree with it.

use thiserror::Error;

use crate::field::{BinaryField, Elt, FieldError, Gf, QuadExt};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("gcd(k = {k}, m = {m}) != 1")]
    NotCoprime { k: u32, m: u32 },
    #[error("cubic z^3 + az + b needs b != 0")]
    ZeroConstant,
    #[error("cubic root count mismatch: predicted {predicted}, found {found}")]
    CubicMismatch { predicted: usize, found: usize },
    #[error("no beta with beta^2 + beta + 1 = 1/alpha^2 for alpha = {0:#x}")]
    NoBeta(Elt),
    #[error("no alpha makes x^(q+1) + x + alpha rootless (m = {m}, k = {k})")]
    NoGoodAlpha { m: u32, k: u32 },
    #[error(transparent)]
    Field(#[from] FieldError),
}

pub fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn require_coprime(field: &Gf, k: u32) -> Result<(), PolyError> {
    let m = field.m();
    if k == 0 || gcd(k, m) != 1 {
        return Err(PolyError::NotCoprime { k, m });
    }
    Ok(())
}

/// `a x^{q+1} + b x^q + c x + d` with `q = 2^k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProjectivePoly {
    pub a: Elt,
    pub b: Elt,
    pub c: Elt,
    pub d: Elt,
    pub k: u32,
}

impl ProjectivePoly {
    /// `φ_{q,α}(x) = x^{q+1} + x + α`.
    pub fn phi(k: u32, alpha: Elt) -> Self {
        Self {
            a: 1,
            b: 0,
            c: 1,
            d: alpha,
            k,
        }
    }

    pub fn eval(&self, field: &Gf, x: Elt) -> Elt {
        let xq = field.pow_q(x, self.k);
        field.mul(self.a, field.mul(xq, x)) ^ field.mul(self.b, xq) ^ field.mul(self.c, x) ^ self.d
    }

    pub fn roots(&self, field: &Gf) -> Vec<Elt> {
        field.elements().filter(|&x| self.eval(field, x) == 0).collect()
    }

    pub fn has_root(&self, field: &Gf) -> bool {
        field.elements().any(|x| self.eval(field, x) == 0)
    }
}

/// Whether `x^{q+1} + x + α` has a root in `F_{2^m}`.
pub fn phi_has_root(field: &Gf, k: u32, alpha: Elt) -> Result<bool, PolyError> {
    require_coprime(field, k)?;
    Ok(ProjectivePoly::phi(k, alpha).has_root(field))
}

/// Every `α` for which `x^{q+1} + x + α` is rootless, ascending.
///
/// Computed as the complement of the image of `x ↦ x^{q+1} + x`.
pub fn find_good_alphas(field: &Gf, k: u32) -> Result<Vec<Elt>, PolyError> {
    require_coprime(field, k)?;
    let mut hit = vec![false; field.size()];
    for x in field.elements() {
        let v = field.mul(field.pow_q(x, k), x) ^ x;
        hit[v as usize] = true;
    }
    let good: Vec<Elt> = field.elements().filter(|&a| !hit[a as usize]).collect();
    if good.is_empty() {
        return Err(PolyError::NoGoodAlpha { m: field.m(), k });
    }
    Ok(good)
}

/// `φ_{q,α}` is rootless exactly when `φ_{q,α²}` is. Always true; kept as a self-test.
pub fn square_root_closure_check(field: &Gf, k: u32, alpha: Elt) -> Result<bool, PolyError> {
    Ok(phi_has_root(field, k, alpha)? == phi_has_root(field, k, field.square(alpha))?)
}

/// Dimension of the kernel of the `F_2`-linear map `x ↦ Σ c_i x^{2^{e_i}}`.
pub fn linearized_kernel_dim(field: &impl BinaryField, terms: &[(Elt, u32)]) -> u32 {
    let n = field.degree();
    let eval = |x: Elt| {
        terms
            .iter()
            .fold(0, |acc, &(c, e)| acc ^ field.mul(c, field.pow_q(x, e)))
    };
    let images: Vec<Elt> = (0..n).map(|i| eval(1 << i)).collect();
    n - rank(images)
}

/// Rank over `F_2` of a set of bit vectors.
pub fn rank(mut rows: Vec<Elt>) -> u32 {
    let mut r = 0;
    for bit in (0..32).rev() {
        let Some(pos) = rows.iter().position(|&v| v >> bit & 1 == 1) else {
            continue;
        };
        let pivot = rows.swap_remove(pos);
        for v in rows.iter_mut() {
            if *v >> bit & 1 == 1 {
                *v ^= pivot;
            }
        }
        r += 1;
    }
    r
}

/// Whether `x ↦ a x^{q²} + b x^q + c x` permutes `F_{2^m}` (trivial kernel).
pub fn linearized_is_permutation(
    field: &Gf,
    a: Elt,
    b: Elt,
    c: Elt,
    k: u32,
) -> Result<bool, PolyError> {
    require_coprime(field, k)?;
    Ok(linearized_kernel_dim(field, &[(a, 2 * k), (b, k), (c, 0)]) == 0)
}

/// `(ax+b)^{q+1} φ_{q,α}((cx+d)/(ax+b))` in its expanded polynomial form
/// `(cx+d)^{q+1} + (cx+d)(ax+b)^q + α(ax+b)^{q+1}`.
pub fn mobius_phi_eval(field: &Gf, k: u32, alpha: Elt, abcd: [Elt; 4], x: Elt) -> Elt {
    let [a, b, c, d] = abcd;
    let num = field.mul(c, x) ^ d;
    let den = field.mul(a, x) ^ b;
    let num_q = field.pow_q(num, k);
    let den_q = field.pow_q(den, k);
    field.mul(num_q, num) ^ field.mul(num, den_q) ^ field.mul(alpha, field.mul(den_q, den))
}

pub fn mobius_phi_has_root(field: &Gf, k: u32, alpha: Elt, abcd: [Elt; 4]) -> bool {
    field
        .elements()
        .any(|x| mobius_phi_eval(field, k, alpha, abcd, x) == 0)
}

/// Which clause of the trace/cube classification decided the root count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CubicBranch {
    /// `tr(a³/b²) ≠ tr(1)`.
    OneRoot,
    /// Traces agree and the roots of `t² + bt + a³` are cubes.
    ThreeRoots,
    /// Traces agree and the roots of `t² + bt + a³` are not cubes.
    NoRoots,
}

impl CubicBranch {
    pub fn predicted_count(self) -> usize {
        match self {
            CubicBranch::OneRoot => 1,
            CubicBranch::ThreeRoots => 3,
            CubicBranch::NoRoots => 0,
        }
    }
}

/// Roots of `z³ + az + b` in `F_{2^m}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubicReport {
    pub root_count: usize,
    pub roots: Vec<Elt>,
    pub branch: CubicBranch,
}

/// Solutions of `s² + s = c` in `F_{2^m}`, by scan.
pub fn solve_artin_schreier(field: &Gf, c: Elt) -> Vec<Elt> {
    field
        .elements()
        .filter(|&s| field.square(s) ^ s == c)
        .collect()
}

/// Classify `z³ + az + b` by trace and cube tests, then confirm by scanning.
///
/// For `m` odd the roots of `h(t) = t² + bt + a³` live in `F_{2^{2m}}`; they
/// are built there from a base-field solution of `x² + x = a³/b² + ν`.
pub fn cubic_roots(field: &Gf, a: Elt, b: Elt) -> Result<CubicReport, PolyError> {
    if b == 0 {
        return Err(PolyError::ZeroConstant);
    }
    let m = field.m();
    let a3 = field.pow(a, 3);
    let c = field.mul(a3, field.inv(field.square(b))?);
    let branch = if field.trace(c) != field.trace(1) {
        CubicBranch::OneRoot
    } else {
        // t = b s with s² + s = c
        let (t1_cube, t2_cube) = if m % 2 == 0 {
            let s = *solve_artin_schreier(field, c)
                .first()
                .expect("tr(c) = tr(1) = 0 for m even");
            let t1 = field.mul(b, s);
            let t2 = t1 ^ b;
            (field.is_cube(t1), field.is_cube(t2))
        } else {
            let ext = QuadExt::new(field.clone());
            let x = *solve_artin_schreier(field, c ^ ext.nu())
                .first()
                .expect("tr(c + nu) = 0 for m odd");
            let t1 = ext.mul(b, ext.embed(x, 1));
            let t2 = t1 ^ b;
            (ext.is_cube(t1), ext.is_cube(t2))
        };
        // t1 t2 = a^3, so the two agree unless a = 0 (roots 0 and b)
        assert!(a == 0 || t1_cube == t2_cube, "roots of h(t) disagree on cubicity");
        if t1_cube && t2_cube {
            CubicBranch::ThreeRoots
        } else {
            CubicBranch::NoRoots
        }
    };
    let roots: Vec<Elt> = field
        .elements()
        .filter(|&z| field.pow(z, 3) ^ field.mul(a, z) ^ b == 0)
        .collect();
    if roots.len() != branch.predicted_count() {
        return Err(PolyError::CubicMismatch {
            predicted: branch.predicted_count(),
            found: roots.len(),
        });
    }
    Ok(CubicReport {
        root_count: roots.len(),
        roots,
        branch,
    })
}

/// `a³ + αba² + (α²b² + b² + 1)a + α³b³ + αb² + α`.
pub fn pair_form(field: &Gf, alpha: Elt, a: Elt, b: Elt) -> Elt {
    let f = field;
    let a2 = f.square(a);
    let b2 = f.square(b);
    let al2 = f.square(alpha);
    f.mul(a2, a)
        ^ f.mul(f.mul(alpha, b), a2)
        ^ f.mul(f.mul(al2, b2) ^ b2 ^ 1, a)
        ^ f.mul(f.mul(al2, alpha), f.mul(b2, b))
        ^ f.mul(alpha, b2)
        ^ alpha
}

/// Whether the zero set of [`pair_form`] over `F_{2^m}²` is exactly `{(α, 1)}`.
pub fn pair_form_has_unique_zero(field: &Gf, alpha: Elt) -> bool {
    let mut zeros = field
        .elements()
        .flat_map(|a| field.elements().map(move |b| (a, b)))
        .filter(|&(a, b)| pair_form(field, alpha, a, b) == 0);
    zeros.next() == Some((alpha, 1)) && zeros.next().is_none()
}

/// Smallest `β` with `β² + β + 1 = 1/α²`.
pub fn beta_decomposition(field: &Gf, alpha: Elt) -> Result<Elt, PolyError> {
    let target = field.square(field.inv(alpha)?) ^ 1;
    solve_artin_schreier(field, target)
        .first()
        .copied()
        .ok_or(PolyError::NoBeta(alpha))
}
