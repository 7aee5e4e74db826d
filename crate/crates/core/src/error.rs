use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{value} is not a unit modulo {modulus}")]
    NotAUnit { value: i64, modulus: u64 },

    #[error("moduli {m} and {n} are not coprime")]
    NotCoprime { m: u64, n: u64 },

    #[error("modulus {0} is out of range")]
    InvalidModulus(u64),

    #[error("coefficient overflow while computing data for index {0}")]
    CoefficientOverflow(u64),

    #[error("layer modulus {c} must be 1 or a proper divisor of {n}")]
    InvalidLayerModulus { c: u64, n: u64 },

    #[error("orders {order_m} (mod {m}) and {order_n} (mod {n}) are not coprime")]
    OrdersNotCoprime {
        m: u64,
        n: u64,
        order_m: u64,
        order_n: u64,
    },

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("no element of order {d} modulo {q}")]
    NoSuchRoot { q: u64, d: u64 },

    #[error("point set dimension {0} is too high (at most 3)")]
    DimensionTooHigh(usize),

    #[error("point set has dimension {0}, expected 2")]
    DimensionNot2(usize),

    #[error("image has no points")]
    EmptyImage,

    #[error("unsupported image format: {0}")]
    UnsupportedFormat(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("png encoding failed: {0}")]
    Png(#[from] png::EncodingError),
}
