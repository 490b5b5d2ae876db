use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus {0} is not prime")]
    CompositeModulus(u64),
    #[error("modulus {0} is outside the supported range [2, 2^31)")]
    ModulusOutOfRange(u64),
    #[error("element {elem} is not in [0, {p})")]
    ElementOutOfRange { elem: u64, p: u32 },
    #[error("operands live in different fields (p = {left} vs p = {right})")]
    FieldMismatch { left: u32, right: u32 },
    #[error("dilation by zero")]
    ZeroDilate,
    #[error("set contains 0, which multiplicative operations reject")]
    ZeroInSet,
    #[error("set has {got} elements, at least {need} required")]
    SetTooSmall { need: usize, got: usize },
    #[error("set has {card} elements, but |A|^2 must be below p = {p}")]
    SetTooLarge { card: usize, p: u32 },
    #[error("empty input")]
    EmptyInput,
    #[error("pivot set X is empty")]
    EmptyPivot,
    #[error("dilates have empty intersection")]
    EmptyIntersection,
    #[error("exhaustive search over {size} elements exceeds the bound of {bound}")]
    SearchBoundExceeded { size: usize, bound: usize },
    #[error("ratio-of-differences set is all of F_p")]
    FullRatioSet,
    #[error("ratio-of-differences set is not all of F_p")]
    NotFullRatioSet,
    #[error("refined set is not contained in the quadruple's ground set")]
    NotSubset,
    #[error("quadruple was built for the other case of the construction")]
    WrongCase,
    #[error("theorem hypothesis violated: {0}")]
    HypothesisViolated(String),
}
