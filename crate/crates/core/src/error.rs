use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("exponent k must be at least 1")]
    ZeroExponent,
    #[error("modulus {p}^{k} exceeds the supported bound 2^31")]
    ModulusTooLarge { p: u64, k: u32 },
    #[error("operands live in different moduli ({left} vs {right})")]
    ModulusMismatch { left: u64, right: u64 },
    #[error("{value} is not a unit modulo {modulus}")]
    NotAUnit { value: u64, modulus: u64 },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("entry {value} at {context} is outside [0, {modulus})")]
    EntryOutOfRange {
        value: i64,
        modulus: u64,
        context: String,
    },
    #[error("matrix is not alternating at ({i}, {j})")]
    NotAlternating { i: usize, j: usize },
    #[error("monodromy does not generate the group (rank mod p is {rank}, need {m})")]
    NotSurjective { rank: usize, m: usize },
    #[error("branch monodromies do not sum to zero")]
    BranchSumNonzero,
    #[error("branch value must be a nonzero group element")]
    ZeroBranchValue,
    #[error("branch count must be positive")]
    ZeroBranchCount,
    #[error("G/G_fix is not free (elementary divisor exponent {exponent} with k = {k})")]
    QuotientNotFree { exponent: u32, k: u32 },
    #[error("Riemann-Hurwitz gives a non-integral genus")]
    NonIntegralGenus,
    #[error("Riemann-Hurwitz gives a negative genus")]
    NegativeGenus,
    #[error("invalid q-tuple {q:?} for m = {m}, k = {k}")]
    InvalidQTuple { q: Vec<u32>, m: usize, k: u32 },
    #[error("form needs quotient genus at least {required}, got {genus}")]
    NotRealizable { required: usize, genus: usize },
    #[error("actions are for different groups")]
    IncompatibleGroups,
    #[error("search space of {predicted} candidates exceeds budget {budget}")]
    BudgetExceeded { predicted: u128, budget: u128 },
}

pub type Result<T> = std::result::Result<T, Error>;
