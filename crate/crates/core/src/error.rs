use thiserror::Error;

use crate::places::Place;

#[derive(Debug, Error)]
pub enum ArithError {
    #[error("zero has no factorization")]
    ZeroHasNoFactorization,
    #[error("could not factor {0}")]
    FactorizationFailed(String),
    #[error("prime factor {0} does not fit in 64 bits")]
    PrimeTooLarge(String),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("singular Weierstrass model{}", label_suffix(.0))]
    SingularCurve(Option<String>),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("p = {0} must be an odd prime")]
    InvalidP(u64),
    #[error("bad reduction at {0}")]
    BadReductionPrime(u64),
    #[error("prime {ell} exceeds the point counting bound {bound}")]
    BoundExceeded { ell: u64, bound: u64 },
    #[error("trace_at_bad called on a place of good reduction")]
    GoodReduction,
    #[error("reduction is not multiplicative")]
    NotMultiplicative,
    #[error("residue characteristic of {0} equals p")]
    ResidueCharEqualsP(String),
    #[error("place {0} is infinite")]
    InfinitePlace(String),
    #[error("place {0} lies over a different prime")]
    PlaceMismatch(String),
    #[error(
        "ramified additive reduction at {0} over residue characteristic 2 or 3 is not supported"
    )]
    WildRamifiedAdditive(Place),
    #[error("serre exponent at {0} is unknown (wild additive place) and strict mode is on")]
    WildSerreExponent(String),
    #[error("curve has bad reduction at p = {0}")]
    BadReductionAtP(u64),
    #[error("irreducibility test supports p in {{3, 5, 7}}, got {0}")]
    UnsupportedPrime(u64),
    #[error("pair of classes ({0}, {1}) cannot occur for congruent curves")]
    InadmissiblePair(String, String),
    #[error("sigma is indeterminate at {0}")]
    IndeterminateSigma(String),
    #[error("good place {0} needs a Frobenius trace")]
    MissingTrace(String),
    #[error("no Selmer data for {0}")]
    MissingSelmerData(String),
    #[error("unsupported field: {0}")]
    UnsupportedField(String),
    #[error("unknown curve label {0}")]
    UnknownLabel(String),
    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Json(#[from] serde_json::Error),
}

fn label_suffix(label: &Option<String>) -> String {
    match label {
        Some(l) => format!(" ({l})"),
        None => String::new(),
    }
}

pub type Result<T> = std::result::Result<T, Error>;
