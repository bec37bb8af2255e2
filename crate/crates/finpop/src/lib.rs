//! Sampling without replacement from a finite population, done carefully.
//!
//! The crate works with a three-level hierarchy: an observed sample of size
//! `n`, a finite population of size `N` (possibly the infinite sentinel), and
//! an underlying model with mean `mu` and variance `sigma2`. Every moment
//! result exists in two framings:
//!
//! * **conditional**: the population values are held fixed and only the
//!   without-replacement randomization of which units enter the sample is
//!   averaged over;
//! * **marginal**: the population values are themselves random draws from the
//!   model, and moments average over both stages.
//!
//! Three variance conventions appear throughout and are kept explicit rather
//! than folded into one another:
//!
//! * `bessel`: sum of squared deviations over `n - 1`;
//! * `raw`: sum of squared deviations over `n`;
//! * `hybrid`: `((N - 1) / N)` times the bessel variance of the sample, which
//!   is the natural plug-in for the raw variance of the parent population.
//!
//! Matching the three conventions are three finite-population correction
//! factors ([`fpc_value`]), chosen so that the estimated variance of
//! `mean(sample) - mean(population)` is the same number whichever convention
//! is used. [`confidence_interval`] exposes all three equivalent forms.
//!
//! Closed-form moments ([`moments`]) are cheap but easy to get subtly wrong,
//! so the crate carries two independent checking engines: [`oracle`]
//! enumerates every subset and computes exact averages, and [`simulate`] runs
//! seeded Monte Carlo experiments against the same closed forms.
//!
//! Everything is generic over the floating-point scalar through [`Real`];
//! the `*64` and `*32` aliases at the crate root pin the two concrete
//! instantiations.

pub mod error;
pub mod infer;
pub mod moments;
pub mod oracle;
pub mod population;
pub mod scalar;
pub mod simulate;

mod special;
mod sum;

pub use error::Error;
pub use infer::{
    confidence_interval, estimated_difference_variance, folk_variance, pivot, t_quantile, CiForm,
    IntervalResult, PivotResult,
};
pub use moments::{
    estimator_expectation, estimator_law, fpc_value, mean_difference_moments, sample_mean_moments,
    single_value_moments, FpcKind, Framing, MomentLaw, MomentReport, Quantity,
};
pub use oracle::{
    oracle_estimator_mean, oracle_mean_difference, oracle_sample_mean, oracle_single_value,
    EnumerationBudget, OracleReport,
};
pub use population::{
    mean, variance, PopSize, Population, PopulationSummary, Sample, VarianceConvention,
};
pub use scalar::Real;
pub use simulate::{
    coverage_experiment, draw_population, draw_srswor, iterated_law_check,
    marginal_moment_experiment, stream_seed, MarginalQuantity, MonteCarloResult,
    SuperpopulationModel,
};

/// Crate-wide result type.
pub type Result<T> = core::result::Result<T, Error>;

pub type Population64 = Population<f64>;
pub type Population32 = Population<f32>;
pub type Sample64 = Sample<f64>;
pub type Sample32 = Sample<f32>;
pub type PopulationSummary64 = PopulationSummary<f64>;
pub type PopulationSummary32 = PopulationSummary<f32>;
pub type MomentReport64 = MomentReport<f64>;
pub type MomentReport32 = MomentReport<f32>;
pub type IntervalResult64 = IntervalResult<f64>;
pub type IntervalResult32 = IntervalResult<f32>;
pub type PivotResult64 = PivotResult<f64>;
pub type PivotResult32 = PivotResult<f32>;
pub type OracleReport64 = OracleReport<f64>;
pub type OracleReport32 = OracleReport<f32>;
pub type MonteCarloResult64 = MonteCarloResult<f64>;
pub type MonteCarloResult32 = MonteCarloResult<f32>;
pub type SuperpopulationModel64 = SuperpopulationModel<f64>;
pub type SuperpopulationModel32 = SuperpopulationModel<f32>;
