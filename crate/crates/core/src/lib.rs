//! Construction and invariant analysis of quadratic APN functions over
//! `F_{2^{2m}} ≅ F_{2^m} × F_{2^m}`.
//!
//! - [`field`]: binary field arithmetic and the quadratic extension.
//! - [`poly`]: root conditions on projective and cubic polynomials.
//! - [`vbf`]: truth tables, differential uniformity, preimage profiles.
//! - [`families`]: the biprojective families and the known comparison families.
//! - [`analysis`]: Walsh spectra, `NB_F`, subspace counts and symmetry checks.
//! - [`reference`]: published subspace-count rows in dimension 12.

pub mod analysis;
pub mod families;
pub mod field;
pub mod poly;
pub mod reference;
pub mod vbf;

pub use analysis::{invariant_profile, InvariantProfile, ProfileOptions, SpectrumClass};
pub use field::{BinaryField, Elt, FieldSpec, Gf, QuadExt};
pub use vbf::{BivariatePair, TruthTable};
