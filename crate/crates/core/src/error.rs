//! Error type shared by all modules of the library.

use thiserror::Error;

/// Everything that can go wrong while building models or running solvers.
#[derive(Debug, Error)]
pub enum Error {
    /// The real-space evolution matrices came out complex, which means the
    /// stencil violates the symmetry class of its statistics.
    #[error("evolution matrices have imaginary residue {residue:.3e} (limit {limit:.3e}); the stencil violates its symmetry class")]
    NonRealResult { residue: f64, limit: f64 },

    /// Momentum-space blocks are only defined for quasifree models.
    #[error("quadratic Lindblad terms are not supported in momentum space")]
    QuadraticNotSupported,

    /// The steady-state equation is singular on this finite lattice.
    #[error("steady state is not unique on this lattice (singular solve)")]
    SingularSteadyState,

    /// A solver produced NaN or infinite entries.
    #[error("solver produced non-finite values")]
    NonFiniteSolve,

    /// The per-momentum Lyapunov block is singular (the gap closes at k).
    #[error("Lyapunov block is singular at k = {k:?}")]
    SingularAtK { k: Vec<f64> },

    /// Time evolution blew up (bosonic instability).
    #[error("covariance norm exceeded {bound:.3e} at t = {t:.3e}")]
    Diverged { t: f64, bound: f64 },

    /// Fixed-point iteration for the quadratic steady state stalled.
    #[error("fixed-point iteration stalled after {iterations} sweeps (last update {last_update:.3e})")]
    NonConvergence { iterations: usize, last_update: f64 },

    /// A Fourier transform was requested from a representation that is absent.
    #[error("requested representation is missing from the covariance field")]
    MissingRepresentation,

    /// Transfer-matrix and pencil analyses require a one-dimensional lattice.
    #[error("operation requires a one-dimensional lattice, got D = {dims}")]
    NotOneDimensional { dims: usize },

    /// The leading block of the difference stencil cannot be inverted.
    #[error("leading difference-stencil block is numerically singular (cond ~ {cond:.3e})")]
    SingularLeadingBlock { cond: f64 },

    /// det L(z) vanishes identically: the steady state is not unique.
    #[error("matrix pencil is irregular: det L(z) vanishes at every probe point")]
    IrregularPencil,

    /// A correlation pole sits on the unit circle; the model is gapless.
    #[error("pole of modulus {modulus} lies on the unit circle; correlation-length bound undefined")]
    PoleOnUnitCircle { modulus: f64 },

    /// Not enough usable samples for a decay fit.
    #[error("need at least {needed} usable samples for a decay fit, got {got}")]
    InsufficientData { needed: usize, got: usize },

    /// Dissipation rates must be nonnegative.
    #[error("dissipation rate must be nonnegative, got {rate}")]
    NegativeRate { rate: f64 },

    /// The dense Liouvillian is restricted to a handful of modes.
    #[error("dense Liouvillian supports at most {max} modes, got {n}")]
    TooLarge { n: usize, max: usize },

    /// Closed-form boson correlators require a gapped model.
    #[error("model is gapless at eta = {eta}; closed form requires eta > 1")]
    GaplessInput { eta: f64 },

    /// Asymptotic laws are implemented for two and three dimensions only.
    #[error("asymptotic forms are implemented for D in {{2, 3}}, got D = {dims}")]
    UnsupportedDimension { dims: usize },

    /// Model-definition file could not be parsed.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A finite lattice extent is required for dense assembly.
    #[error("finite lattice extent required for this operation")]
    InfiniteLattice,

    /// Catch-all for violated preconditions.
    #[error("{0}")]
    Invalid(String),
}

impl Error {
    /// Stable machine-readable name of the error variant.
    pub fn name(&self) -> &'static str {
        match self {
            Error::NonRealResult { .. } => "NonRealResult",
            Error::QuadraticNotSupported => "QuadraticNotSupported",
            Error::SingularSteadyState => "SingularSteadyState",
            Error::NonFiniteSolve => "NonFiniteSolve",
            Error::SingularAtK { .. } => "SingularAtK",
            Error::Diverged { .. } => "Diverged",
            Error::NonConvergence { .. } => "NonConvergence",
            Error::MissingRepresentation => "MissingRepresentation",
            Error::NotOneDimensional { .. } => "NotOneDimensional",
            Error::SingularLeadingBlock { .. } => "SingularLeadingBlock",
            Error::IrregularPencil => "IrregularPencil",
            Error::PoleOnUnitCircle { .. } => "PoleOnUnitCircle",
            Error::InsufficientData { .. } => "InsufficientData",
            Error::NegativeRate { .. } => "NegativeRate",
            Error::TooLarge { .. } => "TooLarge",
            Error::GaplessInput { .. } => "GaplessInput",
            Error::UnsupportedDimension { .. } => "UnsupportedDimension",
            Error::Parse { .. } => "ParseError",
            Error::InfiniteLattice => "InfiniteLattice",
            Error::Invalid(_) => "Invalid",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
