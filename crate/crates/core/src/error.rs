use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A physical parameter is outside its admissible domain.
    #[error("parameter out of domain: {0}")]
    ParameterDomain(String),

    /// An adaptive quadrature did not reach the requested tolerance.
    #[error("quadrature in {context} did not converge: requested {requested:.3e}, achieved {achieved:.3e}")]
    Quadrature {
        context: String,
        requested: f64,
        achieved: f64,
    },

    /// The scheme has no analytic CCDF/LT (only Monte Carlo applies).
    #[error("scheme {0} has no analytic CCDF/LT; evaluate it by Monte Carlo")]
    UnsupportedScheme(String),

    /// Operation requires at least one mutually-nearest-neighbour pair.
    #[error("cluster set contains no pairs")]
    EmptyPairs,

    /// A user-supplied exponential mixture fails the CCDF validity check.
    #[error("invalid exponential mixture: {0}")]
    InvalidMixture(String),

    /// Malformed configuration file or flag value.
    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
