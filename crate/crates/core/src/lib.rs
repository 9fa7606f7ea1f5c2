//! Steady-state correlations, dissipative gaps, and criticality analysis for
//! translation-invariant quadratic (and quasifree) Lindbladian lattice
//! models of fermions and bosons.
//!
//! The library is organized around [`stencil::CouplingStencil`], a finite-range
//! description of a lattice Liouvillian (Hamiltonian blocks h(r), linear
//! Lindblad vectors ℓ_s(r), quadratic Lindblad blocks m_u(r, r′)).  From a
//! stencil one can
//!
//! * assemble the covariance equation of motion in real or momentum space
//!   and solve for steady states ([`evolution`], [`steady`], [`linalg`]),
//! * compute dissipative gaps and gapped paths between Liouvillians
//!   ([`spectral`], [`liouville`]),
//! * analyze the spatial decay of steady-state correlations via transfer
//!   matrices, matrix pencils, and momentum-space pole continuation
//!   ([`decay`]),
//! * and compare against the built-in reference models with closed-form
//!   results ([`models`]).

pub mod decay;
pub mod error;
pub mod evolution;
pub mod lattice;
pub mod linalg;
pub mod liouville;
pub mod modelfile;
pub mod models;
pub mod report;
pub mod specfun;
pub mod spectral;
pub mod steady;
pub mod stencil;

pub use error::{Error, Result};
