//! Exact cubical descent for bounded complexes of free abelian groups.
//!
//! Chain complexes of finitely generated free abelian groups serve as the computational model
//! for spectra: homology plays the role of homotopy groups, total complexes of cubical diagrams
//! play the role of homotopy limits. On top of that model the crate assembles descent
//! K-theory from cubical hyperresolution documents, its weight spectral sequence and weight
//! filtration, Thomason blow-up squares, compact-support variants and tower spectral sequences.
//!
//! All arithmetic is exact ([`num_bigint::BigInt`]); groups are compared by their normal forms.

pub mod cli;
pub mod complex;
pub mod cube;
pub mod diagram;
pub mod zmod;

mod error;
pub mod json;
pub mod spectral;
pub mod kweight;
pub mod towers;

pub use error::{Error, Result};
