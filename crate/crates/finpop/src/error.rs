//! Error type shared across the crate.

use thiserror::Error;

/// Everything that can go wrong in this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[non_exhaustive]
pub enum Error {
    /// Input slice or file held no values.
    #[error("input contains no values")]
    EmptyInput,

    /// A value was NaN or infinite.
    #[error("non-finite value at index {index}")]
    NonFiniteValue { index: usize },

    /// An operation needed more values than it was given.
    #[error("need at least {required} values, got {actual}")]
    TooFewValues { required: usize, actual: usize },

    /// The hybrid variance convention needs a finite parent population size.
    #[error("hybrid variance needs a finite parent population size")]
    MissingParentN,

    /// Declared parent population is smaller than the sample drawn from it.
    #[error("parent population size {parent_n} is smaller than the sample size {n}")]
    ParentSmallerThanSample { n: usize, parent_n: u64 },

    /// Sample size exceeds the population it is notionally drawn from.
    #[error("sample size {n} exceeds population size {n_pop}")]
    SampleExceedsPopulation { n: u64, n_pop: u64 },

    /// A correction factor's denominator is zero for these sizes.
    #[error("degenerate denominator: {context}")]
    DegenerateDenominator { context: &'static str },

    /// Conditional moments require a finite population.
    #[error("conditional moments are undefined for an infinite population")]
    InfinitePopulationConditional,

    /// All sample values are equal, so the pivot denominator is zero.
    #[error("sample variance is zero, pivot undefined")]
    ZeroSampleVariance,

    /// A census (n = N) leaves no sampling variability to studentize.
    #[error("pivot undefined for a census: n equals N")]
    CensusPivotUndefined,

    /// A numeric argument was outside its domain.
    #[error("domain error: {context}")]
    DomainError { context: String },

    /// Exact single-draw moments need at least two population values.
    #[error("population must hold at least two values")]
    PopulationTooSmall,

    /// Exhaustive enumeration would visit more subsets than allowed.
    #[error("enumerating {subsets} subsets exceeds the budget of {budget}")]
    BudgetExceeded { subsets: u128, budget: u64 },
}

impl Error {
    pub(crate) fn domain(context: impl Into<String>) -> Self {
        Error::DomainError {
            context: context.into(),
        }
    }
}
