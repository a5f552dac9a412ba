use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("non-finite value at node ({i}, {j})")]
    NonFinite { i: usize, j: usize },

    #[error("region does not fit strictly inside the grid interior: {0}")]
    Region(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("resolution error: {0}")]
    Resolution(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("bracket not found for shooting constant after {expansions} expansions")]
    Bracket { expansions: usize },

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("fit error: {0}")]
    Fit(String),

    #[error(
        "solver diverged at eps = {eps}: residual {residual:.3e} vs running minimum {running_min:.3e} after {iters} sweeps"
    )]
    Divergence {
        eps: f64,
        iters: usize,
        residual: f64,
        running_min: f64,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
