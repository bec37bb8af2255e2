//! Seeded Monte Carlo experiments against the closed-form moment laws.
//!
//! Reproducibility contract: every experiment is a pure function of its
//! arguments. Replicate r derives its own generator seeds through
//! [`stream_seed`] (population stream `2r`, sample stream `2r + 1`), so
//! results do not depend on evaluation order and two runs with the same seed
//! agree bit for bit.

use core::fmt;
use core::str::FromStr;

use rand::distributions::uniform::SampleUniform;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, Exp1, Normal, StandardNormal};

use crate::error::Error;
use crate::infer::{confidence_interval, CiForm};
use crate::moments::{
    estimator_expectation, mean_difference_moments, sample_mean_moments, Framing,
};
use crate::population::{
    bessel_unchecked, mean_unchecked, PopSize, Population, PopulationSummary, Sample,
    VarianceConvention,
};
use crate::scalar::{count, real, Real};

/// A data-generating model for population values.
///
/// Constructors validate parameters; `mu` and `sigma2` expose the implied
/// model mean and variance.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum SuperpopulationModel<F> {
    Normal { mu: F, sigma2: F },
    Uniform { lo: F, hi: F },
    Exponential { rate: F },
    TwoPoint { lo: F, hi: F, p_hi: F },
}

impl<F: Real> SuperpopulationModel<F> {
    pub fn normal(mu: F, sigma2: F) -> Result<Self, Error> {
        if !mu.is_finite() || !sigma2.is_finite() || sigma2 <= F::zero() {
            return Err(Error::domain(
                "normal model needs a finite mean and a positive variance",
            ));
        }
        Ok(Self::Normal { mu, sigma2 })
    }

    pub fn uniform(lo: F, hi: F) -> Result<Self, Error> {
        if !lo.is_finite() || !hi.is_finite() || lo >= hi {
            return Err(Error::domain(
                "uniform model needs finite bounds with lo < hi",
            ));
        }
        Ok(Self::Uniform { lo, hi })
    }

    pub fn exponential(rate: F) -> Result<Self, Error> {
        if !rate.is_finite() || rate <= F::zero() {
            return Err(Error::domain("exponential model needs a positive rate"));
        }
        Ok(Self::Exponential { rate })
    }

    /// Takes value `hi` with probability `p_hi`, else `lo`. A degenerate
    /// model (`lo == hi`, or `p_hi` of 0 or 1) is allowed.
    pub fn two_point(lo: F, hi: F, p_hi: F) -> Result<Self, Error> {
        if !lo.is_finite() || !hi.is_finite() || lo > hi {
            return Err(Error::domain(
                "two-point model needs finite values with lo <= hi",
            ));
        }
        if !(p_hi >= F::zero() && p_hi <= F::one()) {
            return Err(Error::domain("two-point probability must lie in [0, 1]"));
        }
        Ok(Self::TwoPoint { lo, hi, p_hi })
    }

    /// Model mean.
    pub fn mu(&self) -> F {
        match *self {
            Self::Normal { mu, .. } => mu,
            Self::Uniform { lo, hi } => (lo + hi) * real(0.5),
            Self::Exponential { rate } => F::one() / rate,
            Self::TwoPoint { lo, hi, p_hi } => (F::one() - p_hi) * lo + p_hi * hi,
        }
    }

    /// Model variance.
    pub fn sigma2(&self) -> F {
        match *self {
            Self::Normal { sigma2, .. } => sigma2,
            Self::Uniform { lo, hi } => {
                let span = hi - lo;
                span * span / real(12.0)
            }
            Self::Exponential { rate } => F::one() / (rate * rate),
            Self::TwoPoint { lo, hi, p_hi } => {
                let span = hi - lo;
                p_hi * (F::one() - p_hi) * span * span
            }
        }
    }

    /// The same model with every drawn value scaled by `a > 0`.
    pub fn scaled(&self, a: F) -> Result<Self, Error> {
        if !a.is_finite() || a <= F::zero() {
            return Err(Error::domain("scale factor must be positive"));
        }
        Ok(match *self {
            Self::Normal { mu, sigma2 } => Self::Normal {
                mu: a * mu,
                sigma2: a * a * sigma2,
            },
            Self::Uniform { lo, hi } => Self::Uniform {
                lo: a * lo,
                hi: a * hi,
            },
            Self::Exponential { rate } => Self::Exponential { rate: rate / a },
            Self::TwoPoint { lo, hi, p_hi } => Self::TwoPoint {
                lo: a * lo,
                hi: a * hi,
                p_hi,
            },
        })
    }
}

/// Per-replicate statistic a marginal experiment averages.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum MarginalQuantity {
    /// Sample mean; targets the model mean.
    MeanOfSampleMean,
    /// Squared deviation of the sample mean from the model mean; targets
    /// `sigma2 / n`.
    VarOfSampleMean,
    /// Product of deviations of the sample and population means; targets
    /// `sigma2 / N`.
    CovMeanWithPopMean,
    /// Bessel sample variance; targets `sigma2`.
    MeanOfBesselVariance,
    /// Raw sample variance; targets `((n - 1) / n) sigma2`.
    MeanOfRawVariance,
    /// Hybrid sample variance; targets `((N - 1) / N) sigma2`.
    MeanOfHybridVariance,
    /// Squared difference of sample and population means; targets
    /// `((N - n) / N) sigma2 / n`.
    VarOfMeanDifference,
}

impl fmt::Display for MarginalQuantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::MeanOfSampleMean => "mean_of_sample_mean",
            Self::VarOfSampleMean => "var_of_sample_mean",
            Self::CovMeanWithPopMean => "cov_mean_with_popmean",
            Self::MeanOfBesselVariance => "mean_of_bessel_variance",
            Self::MeanOfRawVariance => "mean_of_raw_variance",
            Self::MeanOfHybridVariance => "mean_of_hybrid_variance",
            Self::VarOfMeanDifference => "var_of_mean_difference",
        };
        f.write_str(s)
    }
}

impl FromStr for MarginalQuantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "mean_of_sample_mean" => Ok(Self::MeanOfSampleMean),
            "var_of_sample_mean" => Ok(Self::VarOfSampleMean),
            "cov_mean_with_popmean" => Ok(Self::CovMeanWithPopMean),
            "mean_of_bessel_variance" => Ok(Self::MeanOfBesselVariance),
            "mean_of_raw_variance" => Ok(Self::MeanOfRawVariance),
            "mean_of_hybrid_variance" => Ok(Self::MeanOfHybridVariance),
            "var_of_mean_difference" => Ok(Self::VarOfMeanDifference),
            _ => Err(Error::domain(format!("unknown marginal quantity {s:?}"))),
        }
    }
}

/// Outcome of a Monte Carlo experiment.
///
/// `estimate` is always a mean of independent per-replicate values, so
/// `std_error` is their standard deviation over the square root of the
/// replicate count.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct MonteCarloResult<F> {
    pub estimate: F,
    pub std_error: F,
    pub replicates: u64,
    pub seed: u64,
    pub target: Option<F>,
}

/// Derives an independent generator seed for a numbered stream.
///
/// SplitMix64 finalizer applied twice, so neighboring seeds and stream
/// indices land far apart.
pub fn stream_seed(seed: u64, stream: u64) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
    mix(seed ^ mix(stream))
}

/// Draws a population of `size` values from the model, deterministically in
/// `(model, size, seed)`.
pub fn draw_population<F>(model: &SuperpopulationModel<F>, size: u64, seed: u64) -> Population<F>
where
    F: Real + SampleUniform,
    StandardNormal: Distribution<F>,
    Exp1: Distribution<F>,
{
    assert!(size >= 1, "population size must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values = Vec::with_capacity(size as usize);
    match *model {
        SuperpopulationModel::Normal { mu, sigma2 } => {
            let dist = Normal::new(mu, sigma2.sqrt()).expect("constructor validated parameters");
            for _ in 0..size {
                values.push(dist.sample(&mut rng));
            }
        }
        SuperpopulationModel::Uniform { lo, hi } => {
            for _ in 0..size {
                values.push(rng.gen_range(lo..hi));
            }
        }
        SuperpopulationModel::Exponential { rate } => {
            let dist = Exp::new(rate).expect("constructor validated parameters");
            for _ in 0..size {
                values.push(dist.sample(&mut rng));
            }
        }
        SuperpopulationModel::TwoPoint { lo, hi, p_hi } => {
            let p = p_hi.to_f64().expect("probability fits in f64");
            for _ in 0..size {
                values.push(if rng.gen_bool(p) { hi } else { lo });
            }
        }
    }
    Population::new(values).expect("model draws are finite")
}

/// Draws a simple random sample of `n` values without replacement, uniformly
/// over all size-`n` subsets, deterministically in `(population, n, seed)`.
///
/// Implemented as the first `n` steps of a Fisher-Yates shuffle of the index
/// vector.
pub fn draw_srswor<F: Real>(
    population: &Population<F>,
    n: u64,
    seed: u64,
) -> Result<Sample<F>, Error> {
    let n_pop = population.size();
    if n == 0 {
        return Err(Error::domain("sample size must be positive"));
    }
    if n > n_pop as u64 {
        return Err(Error::SampleExceedsPopulation {
            n,
            n_pop: n_pop as u64,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut indices: Vec<usize> = (0..n_pop).collect();
    let take = n as usize;
    for i in 0..take {
        let j = rng.gen_range(i..n_pop);
        indices.swap(i, j);
    }
    let values: Vec<F> = indices[..take]
        .iter()
        .map(|&i| population.values()[i])
        .collect();
    Sample::new(values, Some(PopSize::Finite(n_pop as u64)))
}

fn mean_and_standard_error<F: Real>(values: &[F]) -> (F, F) {
    let mean = mean_unchecked(values);
    let sd = bessel_unchecked(values).sqrt();
    (mean, sd / count::<F>(values.len() as u64).sqrt())
}

fn check_replicates(replicates: u64) -> Result<(), Error> {
    if replicates < 2 {
        return Err(Error::domain(
            "an experiment needs at least 2 replicates for a standard error",
        ));
    }
    Ok(())
}

/// Estimates one marginal moment by simulation and attaches its closed-form
/// target.
///
/// Each replicate draws a fresh population of `size` values and one sample of
/// `n` from it, then evaluates the statistic named by `quantity`.
pub fn marginal_moment_experiment<F>(
    model: &SuperpopulationModel<F>,
    size: u64,
    n: u64,
    quantity: MarginalQuantity,
    replicates: u64,
    seed: u64,
) -> Result<MonteCarloResult<F>, Error>
where
    F: Real + SampleUniform,
    StandardNormal: Distribution<F>,
    Exp1: Distribution<F>,
{
    check_replicates(replicates)?;
    let summary =
        PopulationSummary::from_parameters(PopSize::Finite(size), model.mu(), model.sigma2())?;
    let target = match quantity {
        MarginalQuantity::MeanOfSampleMean => {
            sample_mean_moments(Framing::Marginal, &summary, n)?.mean
        }
        MarginalQuantity::VarOfSampleMean => sample_mean_moments(Framing::Marginal, &summary, n)?
            .variance
            .expect("sample mean law always has a variance"),
        MarginalQuantity::CovMeanWithPopMean => {
            sample_mean_moments(Framing::Marginal, &summary, n)?
                .covariance
                .expect("sample mean law always has a covariance")
        }
        MarginalQuantity::MeanOfBesselVariance => {
            estimator_expectation(Framing::Marginal, &summary, n, VarianceConvention::Bessel)?
        }
        MarginalQuantity::MeanOfRawVariance => {
            estimator_expectation(Framing::Marginal, &summary, n, VarianceConvention::Raw)?
        }
        MarginalQuantity::MeanOfHybridVariance => {
            estimator_expectation(Framing::Marginal, &summary, n, VarianceConvention::Hybrid)?
        }
        MarginalQuantity::VarOfMeanDifference => {
            mean_difference_moments(Framing::Marginal, &summary, n)?
                .variance
                .expect("mean difference law always has a variance")
        }
    };

    let mu = model.mu();
    let mut stats = Vec::with_capacity(replicates as usize);
    for r in 0..replicates {
        let population = draw_population(model, size, stream_seed(seed, 2 * r));
        let sample = draw_srswor(&population, n, stream_seed(seed, 2 * r + 1))
            .expect("sample size checked against population size");
        let value = match quantity {
            MarginalQuantity::MeanOfSampleMean => sample.mean(),
            MarginalQuantity::VarOfSampleMean => {
                let d = sample.mean() - mu;
                d * d
            }
            MarginalQuantity::CovMeanWithPopMean => (sample.mean() - mu) * (population.mean() - mu),
            MarginalQuantity::MeanOfBesselVariance => sample
                .variance(VarianceConvention::Bessel)
                .expect("sample size checked by the target computation"),
            MarginalQuantity::MeanOfRawVariance => sample
                .variance(VarianceConvention::Raw)
                .expect("raw variance exists for any nonempty sample"),
            MarginalQuantity::MeanOfHybridVariance => sample
                .variance(VarianceConvention::Hybrid)
                .expect("sample carries its parent size"),
            MarginalQuantity::VarOfMeanDifference => {
                let d = sample.mean() - population.mean();
                d * d
            }
        };
        stats.push(value);
    }
    let (estimate, std_error) = mean_and_standard_error(&stats);
    Ok(MonteCarloResult {
        estimate,
        std_error,
        replicates,
        seed,
        target: Some(target),
    })
}

/// Estimates the coverage of the two-sided interval for the population mean.
///
/// Each replicate draws a population and a sample, builds the interval, and
/// scores whether it contains that replicate's population mean. The target is
/// the nominal level `1 - alpha`. At a census the interval is the point
/// `mean(population)` itself, so coverage is exactly 1.
pub fn coverage_experiment<F>(
    model: &SuperpopulationModel<F>,
    size: u64,
    n: u64,
    alpha: F,
    replicates: u64,
    seed: u64,
) -> Result<MonteCarloResult<F>, Error>
where
    F: Real + SampleUniform,
    StandardNormal: Distribution<F>,
    Exp1: Distribution<F>,
{
    check_replicates(replicates)?;
    if n < 2 {
        return Err(Error::TooFewValues {
            required: 2,
            actual: n as usize,
        });
    }
    if n > size {
        return Err(Error::SampleExceedsPopulation { n, n_pop: size });
    }
    if !alpha.is_finite() || alpha <= F::zero() || alpha >= F::one() {
        return Err(Error::domain(format!(
            "alpha must lie strictly between 0 and 1, got {alpha}"
        )));
    }
    let target = F::one() - alpha;
    if n == size {
        return Ok(MonteCarloResult {
            estimate: F::one(),
            std_error: F::zero(),
            replicates,
            seed,
            target: Some(target),
        });
    }

    let mut scores = Vec::with_capacity(replicates as usize);
    for r in 0..replicates {
        let population = draw_population(model, size, stream_seed(seed, 2 * r));
        let sample = draw_srswor(&population, n, stream_seed(seed, 2 * r + 1))
            .expect("sample size checked against population size");
        let interval =
            confidence_interval(&sample, PopSize::Finite(size), alpha, CiForm::FpcBessel)?;
        let pop_mean = population.mean();
        let covers = interval.lower <= pop_mean && pop_mean <= interval.upper;
        scores.push(if covers { F::one() } else { F::zero() });
    }
    let (estimate, std_error) = mean_and_standard_error(&scores);
    Ok(MonteCarloResult {
        estimate,
        std_error,
        replicates,
        seed,
        target: Some(target),
    })
}

/// Checks the variance decomposition of the sample mean by simulation.
///
/// Each replicate draws only a population and combines the closed-form
/// conditional variance of the sample mean with the squared deviation of the
/// population mean from the model mean; averaged over replicates this targets
/// the marginal variance `sigma2 / n`.
pub fn iterated_law_check<F>(
    model: &SuperpopulationModel<F>,
    size: u64,
    n: u64,
    replicates: u64,
    seed: u64,
) -> Result<MonteCarloResult<F>, Error>
where
    F: Real + SampleUniform,
    StandardNormal: Distribution<F>,
    Exp1: Distribution<F>,
{
    check_replicates(replicates)?;
    if n < 2 {
        return Err(Error::TooFewValues {
            required: 2,
            actual: n as usize,
        });
    }
    if n > size {
        return Err(Error::SampleExceedsPopulation { n, n_pop: size });
    }
    let param_summary =
        PopulationSummary::from_parameters(PopSize::Finite(size), model.mu(), model.sigma2())?;
    let target = sample_mean_moments(Framing::Marginal, &param_summary, n)?
        .variance
        .expect("sample mean law always has a variance");

    let mu = model.mu();
    let mut pieces = Vec::with_capacity(replicates as usize);
    for r in 0..replicates {
        let population = draw_population(model, size, stream_seed(seed, 2 * r));
        let summary = population.summary();
        let conditional = sample_mean_moments(Framing::Conditional, &summary, n)?
            .variance
            .expect("sample mean law always has a variance");
        let d = summary.mean - mu;
        pieces.push(conditional + d * d);
    }
    let (estimate, std_error) = mean_and_standard_error(&pieces);
    Ok(MonteCarloResult {
        estimate,
        std_error,
        replicates,
        seed,
        target: Some(target),
    })
}
