use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: String, reason: String },

    #[error(
        "cone projection did not converge: residual {residual:.3e} > {tol:.1e} after {iterations} iterations ({constraints} constraints)"
    )]
    ProjectionDidNotConverge {
        iterations: usize,
        residual: f64,
        tol: f64,
        constraints: usize,
    },

    #[error("non-finite coordinate for agent {agent} at t = {time}")]
    NonFinite { agent: usize, time: f64 },

    #[error("no connected configuration drawn after {attempts} attempts (n = {n}, L = {domain_length})")]
    DisconnectedStart {
        attempts: usize,
        n: usize,
        domain_length: f64,
    },

    #[error("realization {realization} (seed {seed}) failed: {source}")]
    Realization {
        realization: usize,
        seed: u64,
        #[source]
        source: Box<Error>,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn invalid(name: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name: name.into(),
            reason: reason.into(),
        }
    }

    /// Whether this error comes from the numerics rather than from bad input.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::ProjectionDidNotConverge { .. } | Error::NonFinite { .. } => true,
            Error::Realization { source, .. } => source.is_numerical(),
            _ => false,
        }
    }
}
