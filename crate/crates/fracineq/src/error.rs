use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("overflow: {0}")]
    Overflow(String),

    #[error("invalid interval: lo = {lo} > hi = {hi}")]
    InvalidInterval { lo: f64, hi: f64 },

    #[error("derivative of order {order} unavailable for this function spec")]
    DerivativeUnavailable { order: u8 },

    #[error("scenario not certified for {class} (pass --waive-certification to override)")]
    CertificationMissing { class: String },

    #[error("missing parameter: {0}")]
    MissingParameter(&'static str),

    #[error("scenario generation exhausted: rejection rate exceeded 99%")]
    GenerationExhausted,

    #[error("usage error: {0}")]
    Usage(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
