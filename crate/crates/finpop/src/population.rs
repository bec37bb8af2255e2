//! Populations, samples, and the three variance conventions.

use core::fmt;
use core::str::FromStr;

use crate::error::Error;
use crate::scalar::{count, Real};
use crate::sum::{compensated_sum, CompensatedSum};

/// Population size: a positive integer or the infinite sentinel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PopSize {
    Finite(u64),
    Infinite,
}

impl PopSize {
    /// The size as an integer, or `None` for the infinite sentinel.
    pub fn finite(self) -> Option<u64> {
        match self {
            PopSize::Finite(n) => Some(n),
            PopSize::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, PopSize::Infinite)
    }

    /// Whether a sample of size `n` fits inside this population.
    pub fn admits(self, n: u64) -> bool {
        match self {
            PopSize::Finite(cap) => n <= cap,
            PopSize::Infinite => true,
        }
    }
}

impl fmt::Display for PopSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PopSize::Finite(n) => write!(f, "{n}"),
            PopSize::Infinite => write!(f, "inf"),
        }
    }
}

impl FromStr for PopSize {
    type Err = Error;

    /// Accepts a positive integer or the literal `inf`.
    fn from_str(s: &str) -> Result<Self, Error> {
        if s == "inf" {
            return Ok(PopSize::Infinite);
        }
        match s.parse::<u64>() {
            Ok(n) if n >= 1 => Ok(PopSize::Finite(n)),
            _ => Err(Error::domain(format!(
                "population size must be a positive integer or \"inf\", got {s:?}"
            ))),
        }
    }
}

impl From<u64> for PopSize {
    fn from(n: u64) -> Self {
        PopSize::Finite(n)
    }
}

#[cfg(feature = "serde")]
impl serde::Serialize for PopSize {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            PopSize::Finite(n) => serializer.serialize_u64(*n),
            PopSize::Infinite => serializer.serialize_str("inf"),
        }
    }
}

/// Which denominator a variance uses.
///
/// `Bessel` divides by `n - 1`, `Raw` by `n`, and `Hybrid` rescales the
/// bessel variance by `(N - 1) / N` for a declared parent population size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum VarianceConvention {
    Bessel,
    Raw,
    Hybrid,
}

impl fmt::Display for VarianceConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            VarianceConvention::Bessel => "bessel",
            VarianceConvention::Raw => "raw",
            VarianceConvention::Hybrid => "hybrid",
        };
        f.write_str(s)
    }
}

impl FromStr for VarianceConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "bessel" => Ok(VarianceConvention::Bessel),
            "raw" => Ok(VarianceConvention::Raw),
            "hybrid" => Ok(VarianceConvention::Hybrid),
            _ => Err(Error::domain(format!(
                "unknown variance convention {s:?} (expected bessel, raw, or hybrid)"
            ))),
        }
    }
}

/// A fixed, fully observed finite population.
#[derive(Debug, Clone, PartialEq)]
pub struct Population<F> {
    values: Vec<F>,
}

impl<F: Real> Population<F> {
    /// Validates and wraps a list of population values.
    pub fn new(values: Vec<F>) -> Result<Self, Error> {
        validate_values(&values)?;
        Ok(Self { values })
    }

    /// Population size N.
    pub fn size(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[F] {
        &self.values
    }

    pub fn mean(&self) -> F {
        mean_unchecked(&self.values)
    }

    /// Mean and both variance conventions in one pass.
    pub fn summary(&self) -> PopulationSummary<F> {
        let n = self.values.len();
        let m = self.mean();
        if n == 1 {
            return PopulationSummary {
                size: PopSize::Finite(1),
                mean: m,
                var_bessel: None,
                var_raw: Some(F::zero()),
            };
        }
        let ss = sum_squared_deviations(&self.values, m);
        let bessel = ss / count(n as u64 - 1);
        PopulationSummary {
            size: PopSize::Finite(n as u64),
            mean: m,
            var_bessel: Some(bessel),
            var_raw: Some(raw_from_bessel(n as u64, bessel)),
        }
    }

    /// Fraction of population values less than or equal to `x`.
    pub fn empirical_cdf(&self, x: F) -> F {
        let below = self.values.iter().filter(|&&v| v <= x).count();
        count::<F>(below as u64) / count(self.values.len() as u64)
    }
}

/// An observed sample, optionally tagged with the size of its parent
/// population.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample<F> {
    values: Vec<F>,
    parent: Option<PopSize>,
}

impl<F: Real> Sample<F> {
    /// Validates and wraps sample values; a declared finite parent must be at
    /// least as large as the sample.
    pub fn new(values: Vec<F>, parent: Option<PopSize>) -> Result<Self, Error> {
        validate_values(&values)?;
        if let Some(PopSize::Finite(cap)) = parent {
            if (values.len() as u64) > cap {
                return Err(Error::ParentSmallerThanSample {
                    n: values.len(),
                    parent_n: cap,
                });
            }
        }
        Ok(Self { values, parent })
    }

    /// Sample size n.
    pub fn size(&self) -> usize {
        self.values.len()
    }

    pub fn parent_size(&self) -> Option<PopSize> {
        self.parent
    }

    pub fn values(&self) -> &[F] {
        &self.values
    }

    pub fn mean(&self) -> F {
        mean_unchecked(&self.values)
    }

    /// Sample variance under the given convention; `Hybrid` uses the declared
    /// parent size.
    pub fn variance(&self, convention: VarianceConvention) -> Result<F, Error> {
        let parent = match self.parent {
            Some(PopSize::Finite(cap)) => Some(cap),
            _ => None,
        };
        variance(&self.values, convention, parent)
    }
}

/// Mean and variances of a population, or the parameters standing in for
/// them.
///
/// For a finite population of size 1 the bessel variance does not exist and
/// `var_bessel` is `None`. For the infinite sentinel (model parameters) the
/// raw variance has no meaning and `var_raw` is `None`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct PopulationSummary<F> {
    pub size: PopSize,
    pub mean: F,
    pub var_bessel: Option<F>,
    pub var_raw: Option<F>,
}

impl<F: Real> PopulationSummary<F> {
    /// Builds a summary from declared parameters rather than data.
    ///
    /// With a finite `size` (at least 2) the raw variance is derived as
    /// `((N - 1) / N) * var_bessel`; with the infinite sentinel the pair is
    /// read as model parameters `(mu, sigma2)` and no raw variance exists.
    pub fn from_parameters(size: PopSize, mean: F, var_bessel: F) -> Result<Self, Error> {
        if !mean.is_finite() {
            return Err(Error::domain("summary mean must be finite"));
        }
        if !var_bessel.is_finite() || var_bessel < F::zero() {
            return Err(Error::domain(
                "summary variance must be finite and nonnegative",
            ));
        }
        match size {
            PopSize::Infinite => Ok(Self {
                size,
                mean,
                var_bessel: Some(var_bessel),
                var_raw: None,
            }),
            PopSize::Finite(n) if n >= 2 => Ok(Self {
                size,
                mean,
                var_bessel: Some(var_bessel),
                var_raw: Some(raw_from_bessel(n, var_bessel)),
            }),
            PopSize::Finite(_) => Err(Error::domain(
                "a parameter summary needs population size at least 2 or \"inf\"",
            )),
        }
    }

    /// Summary holding model parameters `(mu, sigma2)` for an infinite
    /// population.
    pub fn superpopulation(mu: F, sigma2: F) -> Result<Self, Error> {
        Self::from_parameters(PopSize::Infinite, mu, sigma2)
    }
}

fn validate_values<F: Real>(values: &[F]) -> Result<(), Error> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    for (index, v) in values.iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::NonFiniteValue { index });
        }
    }
    Ok(())
}

/// Compensated mean of a nonempty slice.
pub fn mean<F: Real>(values: &[F]) -> Result<F, Error> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(mean_unchecked(values))
}

/// Variance of `values` under the given convention.
///
/// `Hybrid` requires `parent_n` (the size N of the population the values were
/// sampled from); the other conventions ignore it.
pub fn variance<F: Real>(
    values: &[F],
    convention: VarianceConvention,
    parent_n: Option<u64>,
) -> Result<F, Error> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    let n = values.len();
    match convention {
        VarianceConvention::Raw => Ok(raw_unchecked(values)),
        VarianceConvention::Bessel => {
            if n < 2 {
                return Err(Error::TooFewValues {
                    required: 2,
                    actual: n,
                });
            }
            Ok(bessel_unchecked(values))
        }
        VarianceConvention::Hybrid => {
            if n < 2 {
                return Err(Error::TooFewValues {
                    required: 2,
                    actual: n,
                });
            }
            let parent = parent_n.ok_or(Error::MissingParentN)?;
            if parent < n as u64 {
                return Err(Error::ParentSmallerThanSample {
                    n,
                    parent_n: parent,
                });
            }
            if parent == n as u64 {
                // At N = n the rescaling is exactly the raw variance.
                Ok(raw_unchecked(values))
            } else {
                Ok(raw_from_bessel(parent, bessel_unchecked(values)))
            }
        }
    }
}

pub(crate) fn mean_unchecked<F: Real>(values: &[F]) -> F {
    compensated_sum(values.iter().copied()) / count(values.len() as u64)
}

/// Two-pass sum of squared deviations with the second-order correction term,
/// clamped at zero.
pub(crate) fn sum_squared_deviations<F: Real>(values: &[F], mean: F) -> F {
    let mut sq = CompensatedSum::new();
    let mut lin = CompensatedSum::new();
    for &x in values {
        let d = x - mean;
        sq.add(d * d);
        lin.add(d);
    }
    let lin_total = lin.total();
    let corrected = sq.total() - lin_total * lin_total / count(values.len() as u64);
    if corrected < F::zero() {
        F::zero()
    } else {
        corrected
    }
}

pub(crate) fn bessel_unchecked<F: Real>(values: &[F]) -> F {
    let m = mean_unchecked(values);
    sum_squared_deviations(values, m) / count(values.len() as u64 - 1)
}

pub(crate) fn raw_unchecked<F: Real>(values: &[F]) -> F {
    let m = mean_unchecked(values);
    sum_squared_deviations(values, m) / count(values.len() as u64)
}

/// `((N - 1) / N) * bessel`, the one place this rescaling is spelled out so
/// that every caller rounds identically.
pub(crate) fn raw_from_bessel<F: Real>(n_pop: u64, bessel: F) -> F {
    bessel * (count::<F>(n_pop - 1) / count(n_pop))
}
