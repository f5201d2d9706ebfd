//! Spectra of composition operators for the explicit Anosov torus maps
//! `B_λ`, `T_λ`, their compositions, and the `K`-indexed generalisations.
//!
//! The maps act on the 2-torus through a Blaschke factor
//! `b(z) = (z + λ)/(1 + conj(λ) z)` with `|λ| < 1`. Their composition
//! operators `f ↦ f ∘ map` act on weighted spaces of two-variable Laurent
//! monomials `e_{m,n}(z,w) = z^m w^n`; on those bases the operators have
//! sparse, explicitly computable columns and a block structure indexed by a
//! degree function on the exponent lattice. This crate provides:
//!
//! - [`blaschke`]: Taylor coefficients of Blaschke powers and the contraction
//!   factor that controls their weighted tails;
//! - [`lattice`]: degree functions, anisotropic weights, and block/window
//!   enumeration of the exponent lattice;
//! - [`operator`]: exact sparse columns, block matrices, and windowed
//!   matrices of the composition operators;
//! - [`spectral`]: block spectra, a dense complex eigensolver for windowed
//!   cross-validation, closed-form spectra, and multiset matching;
//! - [`analysis`]: Hilbert–Schmidt norms, compactness diagnostics, and the
//!   correlation-decay experiment tying spectra back to dynamics.

pub mod analysis;
pub mod blaschke;
pub mod cmatrix;
pub mod error;
pub mod lattice;
pub mod operator;
pub mod spectral;

pub use error::{Error, Result};
pub use num_complex::Complex64;
