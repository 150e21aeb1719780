use thiserror::Error;

/// Errors surfaced by the workbench operations.
///
/// The variants follow the failure taxonomy of the individual subsystems:
/// series evaluation, parameter validation, quadrature, path transport and
/// eigen-analysis each reject their own class of bad inputs.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Evaluation point lies outside the convergence domain of the series.
    #[error("point outside convergence domain (margin {margin})")]
    Domain { margin: f64 },

    /// Parameters violate a precondition; the labels list the offending conditions.
    #[error("parameter condition violated: {}", conditions.join(", "))]
    Parameter { conditions: Vec<String> },

    /// A power prefactor was requested on the negative real axis without a branch choice.
    #[error("branch of {what} undefined on the negative real axis; supply explicit arguments")]
    Branch { what: &'static str },

    /// A gamma factor hit a pole.
    #[error("gamma pole at {arg}")]
    Pole { arg: String },

    /// Root bracketing/bisection failed.
    #[error("no real root found in ({lo}, {hi})")]
    Root { lo: f64, hi: f64 },

    /// A path sample came too close to the singular locus.
    #[error("path clearance violated at segment {segment}, s={s}: clearance {clearance} < {required}")]
    Clearance {
        segment: usize,
        s: f64,
        clearance: f64,
        required: f64,
    },

    /// A matrix required to be invertible is (numerically) singular.
    #[error("singular matrix: {context} (condition estimate {cond:e})")]
    SingularMatrix { context: &'static str, cond: f64 },

    /// The adaptive step controller stalled below the minimum step size.
    #[error("step controller stalled at s={s} (step {step:e})")]
    Step { s: f64, step: f64 },

    /// Eigenvalue clustering failed to separate within tolerance.
    #[error("eigenvalue clusters failed to separate: {context}")]
    Cluster { context: String },

    /// An eigenvector required to have nonzero entries had a (near-)zero one.
    #[error("eigenvector entry ratio {ratio:e} below threshold")]
    ZeroEntry { ratio: f64 },

    /// Gröbner engine exceeded its configured step cap.
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    /// Parse failure for parameters or CLI inputs.
    #[error("parse error: {0}")]
    Parse(String),

    /// Internal invariant violation (should not happen on valid inputs).
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
