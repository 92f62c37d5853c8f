use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u32),

    #[error("elements live in different groups: Z({left}^inf) vs Z({right}^inf)")]
    PrimeMismatch { left: u32, right: u32 },

    #[error("operation requires p = 2, got p = {0}")]
    NotDyadic(u32),

    #[error("malformed element literal `{0}` (expected `a/p^n` or `0`)")]
    InvalidLiteral(String),

    #[error("malformed character `{0}` (expected `m:<int>` or `padic:<r>@<N>`)")]
    InvalidCharacter(String),

    #[error("malformed combination: {0}")]
    InvalidCombination(String),

    #[error("sequence index {0} cannot be resolved (indices start at 1)")]
    UnresolvableIndex(u64),

    #[error("window would enumerate {count} combinations, above the cap of {cap}")]
    ResourceCap { count: u128, cap: u128 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("character precision 2^{available} is too small for an element of order 2^{needed}")]
    Precision { needed: u32, available: u32 },
}

pub type Result<T> = std::result::Result<T, Error>;
