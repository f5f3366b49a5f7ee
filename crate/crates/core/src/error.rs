use alloc::string::String;

/// Errors raised by the core routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An input lies outside the domain of the formula.
    #[error("domain error: {0}")]
    Domain(&'static str),

    /// An operation was called with arguments of the wrong kind.
    #[error("usage error: {0}")]
    Usage(&'static str),

    /// Missing or inconsistent atomic data.
    #[error("configuration error: {0}")]
    Config(String),

    /// Angular momentum quantum numbers that do not form a valid set.
    #[error("invalid angular momentum: {0}")]
    AngularMomentum(String),

    /// A dipole coupling between states not allowed by |Δm| ≤ 1.
    #[error("selection rule violated between states {excited} and {ground}")]
    SelectionRule { excited: usize, ground: usize },

    /// The steady-state system could not be solved.
    #[error("singular steady-state system: {0}")]
    Singular(&'static str),

    /// The small-ellipticity probe limit did not settle.
    #[error("probe limit not converged: g = {coarse} at ε, {fine} at ε/2")]
    ProbeNotConverged { coarse: f64, fine: f64 },

    /// Doppler quadrature did not meet its tolerance at the largest order tried.
    #[error("Doppler average not converged at order {order}; try order {suggested_order}")]
    DopplerNotConverged { order: usize, suggested_order: usize },

    /// A one-dimensional optimisation found no interior maximum.
    #[error("no bracket found: {0}")]
    NoBracket(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;
