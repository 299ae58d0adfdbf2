use thiserror::Error;

use crate::gamma::ComplexValue;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gamma pole at argument {0}")]
    Pole(ComplexValue),

    #[error("log-gamma sum {0} leaves the representable range")]
    Overflow(f64),

    #[error("series diverges: {0}")]
    Divergent(String),

    #[error("no convergence: {0}")]
    NonConvergence(String),

    #[error("integrand not finite at x = {0}")]
    Evaluation(f64),

    #[error("parameters out of domain: {0}")]
    OutOfDomain(String),

    #[error("contour collision between left pole {left} and right pole {right}")]
    Collision { left: f64, right: f64 },

    #[error("coincident poles: {0}")]
    CoincidentPoles(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
