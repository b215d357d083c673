//! Real radicals of left ideals in the free *-algebra over ℚ, with exact
//! sum-of-squares certificates, and the matrix-polynomial toolkit for one
//! commuting variable.

pub mod error;
pub mod linalg;
pub mod linsolve;
pub mod matpoly;
pub mod ncpoly;
pub mod parse;
pub mod psdfeas;
pub mod qmat;
pub mod random;
pub mod rational;
pub mod realrad;
pub mod report;
pub mod soscone;
pub mod sparse;

pub use error::{Error, Result};
pub use ncpoly::{compress_point, CompressedPoint, HomPoly, Letter, MatrixPoint, NCPoly, Word};
pub use qmat::QMat;
pub use linsolve::{normalize_ideal, NormalizedIdeal, SpanBasis};
pub use matpoly::{SmithForm, UniPoly, UniPolyMatrix};
pub use parse::{parse_poly, print_poly};
pub use psdfeas::{find_nonzero_psd, FeasConfig, PsdCertificate};
pub use rational::Rational;
pub use realrad::{
    alpha_member, beta_consistency, is_real, real_radical, AlphaAnswer, RealRadConfig, RealRadical, RealRadicalTrace,
};
