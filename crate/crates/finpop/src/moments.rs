//! Closed-form moments of sampling without replacement.
//!
//! All results here are computed from a [`PopulationSummary`] alone. In the
//! conditional framing the summary describes a fixed finite population; in
//! the marginal framing its `(mean, var_bessel)` pair is read as the model
//! parameters `(mu, sigma2)`.

use core::fmt;
use core::str::FromStr;

use crate::error::Error;
use crate::population::{raw_from_bessel, PopSize, PopulationSummary, VarianceConvention};
use crate::scalar::{count, Real};

/// The three finite-population correction factors.
///
/// Each one pairs with a variance convention so that `factor * variance` is
/// the same number three ways: `Plain` with bessel, `Star` with hybrid,
/// `DoubleStar` with raw.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum FpcKind {
    /// `(N - n) / N`
    Plain,
    /// `(N - n) / (N - 1)`
    Star,
    /// `((N - n) / N) * (n / (n - 1))`
    DoubleStar,
}

impl fmt::Display for FpcKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FpcKind::Plain => "fpc",
            FpcKind::Star => "fpc_star",
            FpcKind::DoubleStar => "fpc_dblstar",
        };
        f.write_str(s)
    }
}

/// Whether moments condition on the realized population or average over the
/// model as well.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Framing {
    Conditional,
    Marginal,
}

impl fmt::Display for Framing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Framing::Conditional => "conditional",
            Framing::Marginal => "marginal",
        };
        f.write_str(s)
    }
}

impl FromStr for Framing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "conditional" => Ok(Framing::Conditional),
            "marginal" => Ok(Framing::Marginal),
            _ => Err(Error::domain(format!(
                "unknown framing {s:?} (expected conditional or marginal)"
            ))),
        }
    }
}

/// What a moment report is about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Quantity {
    SingleValue,
    SampleMean,
    MeanDifference,
    EstimatorExpectation,
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Quantity::SingleValue => "single_value",
            Quantity::SampleMean => "sample_mean",
            Quantity::MeanDifference => "mean_difference",
            Quantity::EstimatorExpectation => "estimator_expectation",
        };
        f.write_str(s)
    }
}

/// Which law produced a report, so downstream output can cite it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum MomentLaw {
    /// Moments of one randomly drawn value.
    SingleDraw,
    /// Moments of the sample mean, including its covariance with the
    /// population mean.
    SampleMean,
    /// Moments of `mean(sample) - mean(population)`.
    MeanDifference,
    /// The bessel sample variance is unbiased in both framings.
    BesselUnbiasedness,
    /// Raw and hybrid sample variances are biased by a fixed rescaling.
    RescaledVariance,
}

impl fmt::Display for MomentLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            MomentLaw::SingleDraw => "single-draw",
            MomentLaw::SampleMean => "sample-mean",
            MomentLaw::MeanDifference => "mean-difference",
            MomentLaw::BesselUnbiasedness => "bessel-unbiasedness",
            MomentLaw::RescaledVariance => "rescaled-variance",
        };
        f.write_str(s)
    }
}

/// A closed-form moment computation.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct MomentReport<F> {
    pub quantity: Quantity,
    pub framing: Framing,
    pub mean: F,
    pub variance: Option<F>,
    pub covariance: Option<F>,
    pub law: MomentLaw,
}

/// Correction factor of the given kind for a sample of `n` from a population
/// of `size`.
///
/// At `size = inf` the plain and star factors are exactly 1 and the
/// double-star factor degenerates to `n / (n - 1)`.
pub fn fpc_value<F: Real>(kind: FpcKind, size: PopSize, n: u64) -> Result<F, Error> {
    if n == 0 {
        return Err(Error::domain("sample size must be positive"));
    }
    match size {
        PopSize::Finite(n_pop) => {
            if n > n_pop {
                return Err(Error::SampleExceedsPopulation { n, n_pop });
            }
            let free = count::<F>(n_pop - n);
            match kind {
                FpcKind::Plain => Ok(free / count(n_pop)),
                FpcKind::Star => {
                    if n_pop < 2 {
                        return Err(Error::DegenerateDenominator {
                            context: "fpc_star needs population size at least 2",
                        });
                    }
                    Ok(free / count(n_pop - 1))
                }
                FpcKind::DoubleStar => {
                    if n < 2 {
                        return Err(Error::DegenerateDenominator {
                            context: "fpc_dblstar needs sample size at least 2",
                        });
                    }
                    Ok(free / count(n_pop) * (count::<F>(n) / count(n - 1)))
                }
            }
        }
        PopSize::Infinite => match kind {
            FpcKind::Plain | FpcKind::Star => Ok(F::one()),
            FpcKind::DoubleStar => {
                if n < 2 {
                    return Err(Error::DegenerateDenominator {
                        context: "fpc_dblstar needs sample size at least 2",
                    });
                }
                Ok(count::<F>(n) / count(n - 1))
            }
        },
    }
}

/// Population size, mean, and bessel variance for conditional formulas.
fn conditional_basis<F: Real>(summary: &PopulationSummary<F>) -> Result<(u64, F, F), Error> {
    match summary.size {
        PopSize::Infinite => Err(Error::InfinitePopulationConditional),
        PopSize::Finite(n_pop) => {
            let s2 = summary.var_bessel.ok_or(Error::TooFewValues {
                required: 2,
                actual: n_pop as usize,
            })?;
            Ok((n_pop, summary.mean, s2))
        }
    }
}

/// Size, model mean, and model variance for marginal formulas.
fn marginal_basis<F: Real>(summary: &PopulationSummary<F>) -> Result<(PopSize, F, F), Error> {
    let sigma2 = summary.var_bessel.ok_or(Error::TooFewValues {
        required: 2,
        actual: 1,
    })?;
    Ok((summary.size, summary.mean, sigma2))
}

fn check_sample_size(size: PopSize, n: u64) -> Result<(), Error> {
    if n == 0 {
        return Err(Error::domain("sample size must be positive"));
    }
    match size {
        PopSize::Finite(n_pop) if n > n_pop => Err(Error::SampleExceedsPopulation { n, n_pop }),
        _ => Ok(()),
    }
}

/// Mean, variance, and cross covariance of one randomly drawn value.
///
/// The covariance is between the draws at two positions; `distinct_indices`
/// says whether those positions differ. Conditionally the population must be
/// finite with at least two values.
pub fn single_value_moments<F: Real>(
    framing: Framing,
    summary: &PopulationSummary<F>,
    distinct_indices: bool,
) -> Result<MomentReport<F>, Error> {
    let report = match framing {
        Framing::Conditional => {
            let (n_pop, mean, s2) = conditional_basis(summary)?;
            let shrink = count::<F>(n_pop - 1) / count(n_pop);
            let variance = s2 * shrink;
            let covariance = if distinct_indices {
                (shrink - F::one()) * s2
            } else {
                variance
            };
            MomentReport {
                quantity: Quantity::SingleValue,
                framing,
                mean,
                variance: Some(variance),
                covariance: Some(covariance),
                law: MomentLaw::SingleDraw,
            }
        }
        Framing::Marginal => {
            let (_, mu, sigma2) = marginal_basis(summary)?;
            let covariance = if distinct_indices { F::zero() } else { sigma2 };
            MomentReport {
                quantity: Quantity::SingleValue,
                framing,
                mean: mu,
                variance: Some(sigma2),
                covariance: Some(covariance),
                law: MomentLaw::SingleDraw,
            }
        }
    };
    Ok(report)
}

/// Mean and variance of the sample mean, plus its covariance with the
/// population mean.
///
/// Conditionally that covariance is exactly zero; marginally it is
/// `sigma2 / N` (zero in the infinite limit).
pub fn sample_mean_moments<F: Real>(
    framing: Framing,
    summary: &PopulationSummary<F>,
    n: u64,
) -> Result<MomentReport<F>, Error> {
    let report = match framing {
        Framing::Conditional => {
            let (n_pop, mean, s2) = conditional_basis(summary)?;
            check_sample_size(PopSize::Finite(n_pop), n)?;
            let fpc = fpc_value::<F>(FpcKind::Plain, PopSize::Finite(n_pop), n)?;
            MomentReport {
                quantity: Quantity::SampleMean,
                framing,
                mean,
                variance: Some(fpc * s2 / count(n)),
                covariance: Some(F::zero()),
                law: MomentLaw::SampleMean,
            }
        }
        Framing::Marginal => {
            let (size, mu, sigma2) = marginal_basis(summary)?;
            check_sample_size(size, n)?;
            let covariance = match size {
                PopSize::Finite(n_pop) => sigma2 / count(n_pop),
                PopSize::Infinite => F::zero(),
            };
            MomentReport {
                quantity: Quantity::SampleMean,
                framing,
                mean: mu,
                variance: Some(sigma2 / count(n)),
                covariance: Some(covariance),
                law: MomentLaw::SampleMean,
            }
        }
    };
    Ok(report)
}

/// Mean and variance of `mean(sample) - mean(population)`.
///
/// The mean is exactly zero in both framings and the variance carries the
/// plain correction factor; at a census it is exactly zero.
pub fn mean_difference_moments<F: Real>(
    framing: Framing,
    summary: &PopulationSummary<F>,
    n: u64,
) -> Result<MomentReport<F>, Error> {
    let (size, base) = match framing {
        Framing::Conditional => {
            let (n_pop, _, s2) = conditional_basis(summary)?;
            (PopSize::Finite(n_pop), s2)
        }
        Framing::Marginal => {
            let (size, _, sigma2) = marginal_basis(summary)?;
            (size, sigma2)
        }
    };
    check_sample_size(size, n)?;
    let fpc = fpc_value::<F>(FpcKind::Plain, size, n)?;
    Ok(MomentReport {
        quantity: Quantity::MeanDifference,
        framing,
        mean: F::zero(),
        variance: Some(fpc * base / count(n)),
        covariance: None,
        law: MomentLaw::MeanDifference,
    })
}

/// Expected value of a sample variance under the given convention.
///
/// The bessel variance is unbiased; raw shrinks by `(n - 1) / n` and hybrid
/// by `(N - 1) / N` (no shrinkage in the infinite limit).
pub fn estimator_expectation<F: Real>(
    framing: Framing,
    summary: &PopulationSummary<F>,
    n: u64,
    convention: VarianceConvention,
) -> Result<F, Error> {
    let (size, base) = match framing {
        Framing::Conditional => {
            let (n_pop, _, s2) = conditional_basis(summary)?;
            (PopSize::Finite(n_pop), s2)
        }
        Framing::Marginal => {
            let (size, _, sigma2) = marginal_basis(summary)?;
            (size, sigma2)
        }
    };
    check_sample_size(size, n)?;
    match convention {
        VarianceConvention::Bessel => {
            if n < 2 {
                return Err(Error::TooFewValues {
                    required: 2,
                    actual: n as usize,
                });
            }
            Ok(base)
        }
        VarianceConvention::Raw => Ok(raw_from_bessel(n, base)),
        VarianceConvention::Hybrid => {
            if n < 2 {
                return Err(Error::TooFewValues {
                    required: 2,
                    actual: n as usize,
                });
            }
            match size {
                PopSize::Finite(n_pop) => Ok(raw_from_bessel(n_pop, base)),
                PopSize::Infinite => Ok(base),
            }
        }
    }
}

/// Law tag matching [`estimator_expectation`] for a given convention.
pub fn estimator_law(convention: VarianceConvention) -> MomentLaw {
    match convention {
        VarianceConvention::Bessel => MomentLaw::BesselUnbiasedness,
        VarianceConvention::Raw | VarianceConvention::Hybrid => MomentLaw::RescaledVariance,
    }
}
