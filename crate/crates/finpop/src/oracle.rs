//! Exact moments by exhaustive enumeration.
//!
//! Every without-replacement design on a finite population is a uniform
//! distribution over a finite set: the N single draws, the N(N-1) ordered
//! pairs of distinct positions, or the C(N, n) subsets of size n. Averaging a
//! statistic over that whole set gives its exact moment with no appeal to any
//! closed-form law, which is what makes these routines fit to check the
//! formula layer.

use crate::error::Error;
use crate::moments::Quantity;
use crate::population::{
    bessel_unchecked, mean_unchecked, raw_from_bessel, raw_unchecked, Population,
    VarianceConvention,
};
use crate::scalar::{count, Real};
use crate::sum::CompensatedSum;

/// Cap on how many subsets an enumeration may visit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationBudget {
    pub max_subsets: u64,
}

impl EnumerationBudget {
    pub fn new(max_subsets: u64) -> Self {
        Self { max_subsets }
    }
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        Self {
            max_subsets: 10_000_000,
        }
    }
}

/// Exact moments of a statistic over every outcome of a design.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct OracleReport<F> {
    pub quantity: Quantity,
    pub exact_mean: F,
    pub exact_variance: Option<F>,
    pub exact_covariance: Option<F>,
    /// How many outcomes were averaged over.
    pub subset_count: u64,
}

/// Exact binomial coefficient, saturating at `u128::MAX`.
pub(crate) fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 1..=k {
        match acc.checked_mul((n - k + i) as u128) {
            Some(next) => acc = next / i as u128,
            None => return u128::MAX,
        }
    }
    acc
}

/// Visits every size-`n` index subset of `0..n_pop` in lexicographic order.
fn for_each_subset(n_pop: usize, n: usize, mut visit: impl FnMut(&[usize])) {
    debug_assert!(n >= 1 && n <= n_pop);
    let mut idx: Vec<usize> = (0..n).collect();
    loop {
        visit(&idx);
        // Find the rightmost index that can still move up.
        let mut i = n;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n_pop - n {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..n {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn checked_subset_count(n_pop: u64, n: u64, budget: &EnumerationBudget) -> Result<u64, Error> {
    let subsets = binomial(n_pop, n);
    if subsets > budget.max_subsets as u128 {
        return Err(Error::BudgetExceeded {
            subsets,
            budget: budget.max_subsets,
        });
    }
    Ok(subsets as u64)
}

/// Mean (and optionally spread) of `stat` over all size-`n` subsets.
fn enumerate_stat<F: Real>(
    values: &[F],
    n: usize,
    mut stat: impl FnMut(&[F]) -> F,
    want_spread: bool,
) -> (F, Option<F>) {
    let n_pop = values.len();
    let mut scratch = vec![F::zero(); n];
    let gather = |idx: &[usize], scratch: &mut [F]| {
        for (slot, &i) in scratch.iter_mut().zip(idx) {
            *slot = values[i];
        }
    };

    let mut total = CompensatedSum::new();
    let mut subsets: u64 = 0;
    for_each_subset(n_pop, n, |idx| {
        gather(idx, &mut scratch);
        total.add(stat(&scratch));
        subsets += 1;
    });
    let mean = total.total() / count(subsets);
    if !want_spread {
        return (mean, None);
    }

    let mut sq = CompensatedSum::new();
    let mut lin = CompensatedSum::new();
    for_each_subset(n_pop, n, |idx| {
        gather(idx, &mut scratch);
        let d = stat(&scratch) - mean;
        sq.add(d * d);
        lin.add(d);
    });
    let m = count::<F>(subsets);
    let lin_total = lin.total();
    let var = (sq.total() - lin_total * lin_total / m) / m;
    (mean, Some(if var < F::zero() { F::zero() } else { var }))
}

/// Exact mean, variance, and pair covariance of one randomly drawn value.
///
/// With `distinct_indices` the covariance averages over all N(N-1) ordered
/// pairs of different positions; otherwise the two positions coincide and
/// the covariance is the variance itself.
pub fn oracle_single_value<F: Real>(
    population: &Population<F>,
    distinct_indices: bool,
) -> Result<OracleReport<F>, Error> {
    let values = population.values();
    let n_pop = values.len();
    if n_pop < 2 {
        return Err(Error::PopulationTooSmall);
    }
    let mean = mean_unchecked(values);

    let mut sq = CompensatedSum::new();
    for &x in values {
        let d = x - mean;
        sq.add(d * d);
    }
    let variance = sq.total() / count(n_pop as u64);

    let (covariance, subset_count) = if distinct_indices {
        let mut cross = CompensatedSum::new();
        for (k, &xk) in values.iter().enumerate() {
            for (l, &xl) in values.iter().enumerate() {
                if k != l {
                    cross.add((xk - mean) * (xl - mean));
                }
            }
        }
        let pairs = (n_pop * (n_pop - 1)) as u64;
        (cross.total() / count(pairs), pairs)
    } else {
        (variance, n_pop as u64)
    };

    Ok(OracleReport {
        quantity: Quantity::SingleValue,
        exact_mean: mean,
        exact_variance: Some(variance),
        exact_covariance: Some(covariance),
        subset_count,
    })
}

/// Exact moments of the sample mean over all C(N, n) subsets.
///
/// The covariance reported is with the population mean, which is constant
/// across subsets, so it is exactly zero.
pub fn oracle_sample_mean<F: Real>(
    population: &Population<F>,
    n: u64,
    budget: &EnumerationBudget,
) -> Result<OracleReport<F>, Error> {
    let values = population.values();
    let n_pop = values.len() as u64;
    if n == 0 {
        return Err(Error::domain("sample size must be positive"));
    }
    if n > n_pop {
        return Err(Error::SampleExceedsPopulation { n, n_pop });
    }
    let subset_count = checked_subset_count(n_pop, n, budget)?;
    let (mean, var) = enumerate_stat(values, n as usize, mean_unchecked, true);
    Ok(OracleReport {
        quantity: Quantity::SampleMean,
        exact_mean: mean,
        exact_variance: var,
        exact_covariance: Some(F::zero()),
        subset_count,
    })
}

/// Exact mean and variance of `mean(sample) - mean(population)` over all
/// subsets.
pub fn oracle_mean_difference<F: Real>(
    population: &Population<F>,
    n: u64,
    budget: &EnumerationBudget,
) -> Result<OracleReport<F>, Error> {
    let values = population.values();
    let n_pop = values.len() as u64;
    if n == 0 {
        return Err(Error::domain("sample size must be positive"));
    }
    if n > n_pop {
        return Err(Error::SampleExceedsPopulation { n, n_pop });
    }
    let subset_count = checked_subset_count(n_pop, n, budget)?;
    let pop_mean = mean_unchecked(values);
    let (mean, var) = enumerate_stat(
        values,
        n as usize,
        |subset| mean_unchecked(subset) - pop_mean,
        true,
    );
    Ok(OracleReport {
        quantity: Quantity::MeanDifference,
        exact_mean: mean,
        exact_variance: var,
        exact_covariance: None,
        subset_count,
    })
}

/// Exact expectation of a sample variance convention over all subsets.
pub fn oracle_estimator_mean<F: Real>(
    population: &Population<F>,
    n: u64,
    convention: VarianceConvention,
    budget: &EnumerationBudget,
) -> Result<OracleReport<F>, Error> {
    let values = population.values();
    let n_pop = values.len() as u64;
    if n == 0 {
        return Err(Error::domain("sample size must be positive"));
    }
    if n > n_pop {
        return Err(Error::SampleExceedsPopulation { n, n_pop });
    }
    if n < 2 && convention != VarianceConvention::Raw {
        return Err(Error::TooFewValues {
            required: 2,
            actual: n as usize,
        });
    }
    let subset_count = checked_subset_count(n_pop, n, budget)?;
    let stat = |subset: &[F]| match convention {
        VarianceConvention::Bessel => bessel_unchecked(subset),
        VarianceConvention::Raw => raw_unchecked(subset),
        VarianceConvention::Hybrid => raw_from_bessel(n_pop, bessel_unchecked(subset)),
    };
    let (mean, _) = enumerate_stat(values, n as usize, stat, false);
    Ok(OracleReport {
        quantity: Quantity::EstimatorExpectation,
        exact_mean: mean,
        exact_variance: None,
        exact_covariance: None,
        subset_count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pop(values: &[f64]) -> Population<f64> {
        Population::new(values.to_vec()).unwrap()
    }

    #[test]
    fn binomial_small_values() {
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(8, 4), 70);
        assert_eq!(binomial(8, 0), 1);
        assert_eq!(binomial(8, 8), 1);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(40, 20), 137_846_528_820);
    }

    #[test]
    fn binomial_saturates_instead_of_overflowing() {
        assert_eq!(binomial(200, 100), u128::MAX);
    }

    #[test]
    fn subsets_are_lexicographic_and_complete() {
        let mut seen = Vec::new();
        for_each_subset(4, 2, |idx| seen.push(idx.to_vec()));
        assert_eq!(
            seen,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
    }

    #[test]
    fn full_census_subset_is_visited_once() {
        let mut calls = 0;
        for_each_subset(3, 3, |idx| {
            assert_eq!(idx, &[0, 1, 2]);
            calls += 1;
        });
        assert_eq!(calls, 1);
    }

    #[test]
    fn single_value_moments_on_one_to_four() {
        let r = oracle_single_value(&pop(&[1.0, 2.0, 3.0, 4.0]), true).unwrap();
        assert_eq!(r.exact_mean, 2.5);
        assert!((r.exact_variance.unwrap() - 1.25).abs() < 1e-15);
        assert!((r.exact_covariance.unwrap() + 5.0 / 12.0).abs() < 1e-15);
        assert_eq!(r.subset_count, 12);

        let same = oracle_single_value(&pop(&[1.0, 2.0, 3.0, 4.0]), false).unwrap();
        assert_eq!(same.exact_covariance, same.exact_variance);
        assert_eq!(same.subset_count, 4);
    }

    #[test]
    fn single_value_needs_two_values() {
        assert_eq!(
            oracle_single_value(&pop(&[5.0]), true).unwrap_err(),
            Error::PopulationTooSmall
        );
    }

    #[test]
    fn sample_mean_moments_on_one_to_four() {
        let r = oracle_sample_mean(
            &pop(&[1.0, 2.0, 3.0, 4.0]),
            2,
            &EnumerationBudget::default(),
        )
        .unwrap();
        assert_eq!(r.exact_mean, 2.5);
        assert!((r.exact_variance.unwrap() - 5.0 / 12.0).abs() < 1e-15);
        assert_eq!(r.exact_covariance, Some(0.0));
        assert_eq!(r.subset_count, 6);
    }

    #[test]
    fn census_sample_mean_has_zero_variance() {
        let r = oracle_sample_mean(
            &pop(&[1.0, 2.0, 3.0, 4.0]),
            4,
            &EnumerationBudget::default(),
        )
        .unwrap();
        assert_eq!(r.exact_variance, Some(0.0));
        assert_eq!(r.subset_count, 1);
    }

    #[test]
    fn estimator_means_on_one_to_four() {
        let budget = EnumerationBudget::default();
        let p = pop(&[1.0, 2.0, 3.0, 4.0]);
        let bessel = oracle_estimator_mean(&p, 2, VarianceConvention::Bessel, &budget).unwrap();
        assert!((bessel.exact_mean - 5.0 / 3.0).abs() < 1e-15);
        let raw = oracle_estimator_mean(&p, 2, VarianceConvention::Raw, &budget).unwrap();
        assert!((raw.exact_mean - 5.0 / 6.0).abs() < 1e-15);
        let hybrid = oracle_estimator_mean(&p, 2, VarianceConvention::Hybrid, &budget).unwrap();
        assert!((hybrid.exact_mean - 1.25).abs() < 1e-15);
    }

    #[test]
    fn mean_difference_is_centered() {
        let r = oracle_mean_difference(
            &pop(&[1.0, 2.0, 3.0, 4.0]),
            2,
            &EnumerationBudget::default(),
        )
        .unwrap();
        assert!(r.exact_mean.abs() < 1e-15);
        assert!((r.exact_variance.unwrap() - 5.0 / 12.0).abs() < 1e-15);
        assert_eq!(r.exact_covariance, None);
    }

    #[test]
    fn constant_population_has_degenerate_moments() {
        let p = pop(&[2.0, 2.0, 2.0, 2.0]);
        let r = oracle_sample_mean(&p, 2, &EnumerationBudget::default()).unwrap();
        assert_eq!(r.exact_mean, 2.0);
        assert_eq!(r.exact_variance, Some(0.0));
        let sv = oracle_single_value(&p, true).unwrap();
        assert_eq!(sv.exact_variance, Some(0.0));
        assert_eq!(sv.exact_covariance, Some(0.0));
    }

    #[test]
    fn budget_is_enforced_with_the_true_subset_count() {
        let values: Vec<f64> = (0..40).map(|i| i as f64).collect();
        let err = oracle_sample_mean(
            &Population::new(values).unwrap(),
            20,
            &EnumerationBudget::default(),
        )
        .unwrap_err();
        assert_eq!(
            err,
            Error::BudgetExceeded {
                subsets: 137_846_528_820,
                budget: 10_000_000
            }
        );
    }

    #[test]
    fn permuting_the_population_leaves_oracle_moments_unchanged() {
        let a = pop(&[3.0, -1.0, 4.0, 1.0, 5.0]);
        let b = pop(&[5.0, 4.0, 3.0, 1.0, -1.0]);
        let budget = EnumerationBudget::default();
        let ra = oracle_sample_mean(&a, 2, &budget).unwrap();
        let rb = oracle_sample_mean(&b, 2, &budget).unwrap();
        assert!((ra.exact_mean - rb.exact_mean).abs() < 1e-12);
        assert!((ra.exact_variance.unwrap() - rb.exact_variance.unwrap()).abs() < 1e-12);
    }

    #[test]
    fn oversized_sample_is_rejected() {
        let p = pop(&[1.0, 2.0]);
        assert_eq!(
            oracle_sample_mean(&p, 3, &EnumerationBudget::default()).unwrap_err(),
            Error::SampleExceedsPopulation { n: 3, n_pop: 2 }
        );
    }
}
