use thiserror::Error;

/// Errors raised anywhere in the solver stack.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, got {got}")]
    Dimension {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("unsupported operation: {0}")]
    Capability(String),

    #[error("usage error: {0}")]
    Usage(String),

    #[error("inner solver did not converge at outer iteration {iteration}: residual {residual:e} after {inner_iters} steps")]
    InnerConvergence {
        iteration: usize,
        inner_iters: usize,
        residual: f64,
    },

    /// Non-finite values appeared; `last_u`/`last_p` hold the last finite primal-dual pair.
    #[error("iterates diverged at iteration {iteration}: {reason}")]
    Divergence {
        iteration: usize,
        reason: String,
        last_u: Vec<f64>,
        last_p: Vec<f64>,
    },

    #[error("estimation failed: {0}")]
    Estimation(String),

    #[error("instance generation failed: {0}")]
    Generation(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// Files that should describe the same run disagree.
    #[error("integrity check failed: {0}")]
    Integrity(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(context: &'static str, expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::Dimension {
            context,
            expected,
            got,
        })
    }
}
