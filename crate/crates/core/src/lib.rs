//! Exact Hermitian lattices over the Gaussian, Eisenstein and Hurwitz
//! integers, Lorentzian reflection machinery, and null-vector height
//! reduction.

pub mod claims;
pub mod enumerate;
pub mod lattices;
pub mod lorentz;
pub mod mat;
pub mod reduce;
pub mod rings;
pub mod zlat;
