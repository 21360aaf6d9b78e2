use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("signature {0:?} is not weakly decreasing")]
    NotDominant(Vec<i64>),
    #[error("signature {0:?} mixes positive and negative entries")]
    MixedSigns(Vec<i64>),
    #[error("signature {0:?} has negative entries; a polynomial label is required")]
    NotPolynomial(Vec<i64>),
    #[error("cannot pad a signature of length {len} to {k} entries")]
    TooShort { len: usize, k: usize },
    #[error("rank {k} is smaller than signature length {len}")]
    RankTooSmall { len: usize, k: usize },
    #[error("tensor product needs at least one factor")]
    EmptyProduct,
    #[error("generator index ({alpha},{beta}) outside 1..={p} x 1..={q}")]
    IndexOutOfRange {
        alpha: usize,
        beta: usize,
        p: usize,
        q: usize,
    },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("polynomials do not share a single row weight")]
    WeightMismatch,
    #[error("state {index} uses rows outside its allocation")]
    RowAllocationViolation { index: usize },
    #[error("transformed contragredient state leaves the supplied span")]
    SpanViolation,
    #[error("polynomial is not symmetric in the given variables")]
    NotSymmetric,
    #[error("negative multiplicity {mult} for {signature} after cancellation")]
    NegativeMultiplicity { signature: String, mult: i64 },
    #[error("invariant space has dimension {basis} but the multiplicity is {multiplicity}")]
    DimensionCheck { basis: usize, multiplicity: usize },
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
