use thiserror::Error;

/// Errors raised by the geometric and numerical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Malformed argument: non-unit direction, bad parameter, etc.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Argument outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The operation needs a C²₊ body (or a specific variant).
    #[error("{op} is not supported for {variant} bodies")]
    Unsupported { op: &'static str, variant: &'static str },

    #[error("L_p-affine surface area has a pole at p = -n (p = {p}, n = {n})")]
    Pole { p: f64, n: usize },

    #[error("star body is unbounded in direction theta = {theta}")]
    InfiniteVolume { theta: f64 },

    /// K_f[t] is unbounded: t reaches the ray limit in some direction.
    #[error("K_f[t] is unbounded for t = {t}: ray limit {ray_limit} in direction theta = {theta}")]
    Threshold { t: f64, theta: f64, ray_limit: f64 },

    #[error("parse error at position {position} ('{token}'): {message}")]
    Parse {
        token: String,
        position: usize,
        message: String,
    },

    #[error("numerical failure: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, Error>;
