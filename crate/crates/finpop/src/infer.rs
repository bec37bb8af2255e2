//! Interval inference for the population mean of a finite population.

use core::fmt;
use core::str::FromStr;

use crate::error::Error;
use crate::moments::{fpc_value, FpcKind};
use crate::population::{variance, PopSize, Sample, VarianceConvention};
use crate::scalar::{count, real, Real};
use crate::special::inc_beta;

/// The three algebraically equivalent ways to assemble the interval width.
///
/// Each form pairs one correction factor with its matching variance
/// convention; the products agree to rounding error.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum CiForm {
    FpcBessel,
    FpcStarHybrid,
    FpcDblstarRaw,
}

impl fmt::Display for CiForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CiForm::FpcBessel => "fpc_bessel",
            CiForm::FpcStarHybrid => "fpc_star_hybrid",
            CiForm::FpcDblstarRaw => "fpc_dblstar_raw",
        };
        f.write_str(s)
    }
}

impl FromStr for CiForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "fpc_bessel" => Ok(CiForm::FpcBessel),
            "fpc_star_hybrid" => Ok(CiForm::FpcStarHybrid),
            "fpc_dblstar_raw" => Ok(CiForm::FpcDblstarRaw),
            _ => Err(Error::domain(format!(
                "unknown interval form {s:?} (expected fpc_bessel, fpc_star_hybrid, or fpc_dblstar_raw)"
            ))),
        }
    }
}

/// A two-sided confidence interval for the population mean.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct IntervalResult<F> {
    pub center: F,
    pub half_width: F,
    pub lower: F,
    pub upper: F,
    pub form: CiForm,
    pub alpha: F,
    pub df: u64,
}

/// A studentized mean difference and its degrees of freedom.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct PivotResult<F> {
    pub value: F,
    pub df: u64,
}

/// Quantile of the Student t distribution with `df` degrees of freedom at
/// order `p` in (0, 1), accurate to better than 1e-8 absolute.
///
/// Solved by bisecting the incomplete-beta representation of the two-sided
/// tail mass, which is monotone and needs no series switching.
pub fn t_quantile<F: Real>(df: u64, p: F) -> Result<F, Error> {
    if df == 0 {
        return Err(Error::domain("degrees of freedom must be at least 1"));
    }
    if !p.is_finite() || p <= F::zero() || p >= F::one() {
        return Err(Error::domain(format!(
            "quantile order must lie strictly between 0 and 1, got {p}"
        )));
    }
    let half = real::<F>(0.5);
    if p == half {
        return Ok(F::zero());
    }

    // Two-sided tail mass of the quantile: y = 2 * min(p, 1 - p). In terms
    // of w = df / (df + t^2) the identity I_w(df/2, 1/2) = y holds, and the
    // left side is increasing in w, so plain bisection on w in (0, 1) is
    // exact to machine precision.
    let y = (p.min(F::one() - p)) * real(2.0);
    let a = count::<F>(df) * half;
    let b = half;
    let mut lo = F::zero();
    let mut hi = F::one();
    for _ in 0..600 {
        let mid = (lo + hi) * half;
        if mid == lo || mid == hi {
            break;
        }
        if inc_beta(a, b, mid) < y {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= hi * F::epsilon() {
            break;
        }
    }
    let w = (lo + hi) * half;
    let t = (count::<F>(df) * (F::one() - w) / w).sqrt();
    Ok(if p < half { -t } else { t })
}

/// Estimated variance of `mean(sample) - mean(population)`:
/// the plain correction factor times the bessel sample variance over n.
///
/// Exactly zero at a census; with the infinite sentinel the factor is 1.
pub fn estimated_difference_variance<F: Real>(
    sample: &Sample<F>,
    size: PopSize,
) -> Result<F, Error> {
    let n = sample.size();
    if n < 2 {
        return Err(Error::TooFewValues {
            required: 2,
            actual: n,
        });
    }
    let n64 = n as u64;
    if let Some(n_pop) = size.finite() {
        if n64 > n_pop {
            return Err(Error::SampleExceedsPopulation { n: n64, n_pop });
        }
    }
    let s2 = sample.variance(VarianceConvention::Bessel)?;
    let fpc = fpc_value::<F>(FpcKind::Plain, size, n64)?;
    Ok(fpc * s2 / count(n64))
}

/// Studentized difference between the sample mean and a known population
/// mean, distributed as Student t with `n - 1` degrees of freedom.
pub fn pivot<F: Real>(
    sample: &Sample<F>,
    pop_mean: F,
    n_pop: u64,
) -> Result<PivotResult<F>, Error> {
    let n = sample.size();
    if n < 2 {
        return Err(Error::TooFewValues {
            required: 2,
            actual: n,
        });
    }
    let n64 = n as u64;
    if n64 > n_pop {
        return Err(Error::SampleExceedsPopulation { n: n64, n_pop });
    }
    if n64 == n_pop {
        return Err(Error::CensusPivotUndefined);
    }
    let v = estimated_difference_variance(sample, PopSize::Finite(n_pop))?;
    if v == F::zero() {
        return Err(Error::ZeroSampleVariance);
    }
    Ok(PivotResult {
        value: (sample.mean() - pop_mean) / v.sqrt(),
        df: n64 - 1,
    })
}

/// Two-sided confidence interval for the population mean at level
/// `1 - alpha`, assembled in the requested form.
///
/// All three forms agree to rounding error; at a census the half width is
/// exactly zero.
pub fn confidence_interval<F: Real>(
    sample: &Sample<F>,
    size: PopSize,
    alpha: F,
    form: CiForm,
) -> Result<IntervalResult<F>, Error> {
    let n = sample.size();
    if n < 2 {
        return Err(Error::TooFewValues {
            required: 2,
            actual: n,
        });
    }
    let n64 = n as u64;
    if let Some(n_pop) = size.finite() {
        if n64 > n_pop {
            return Err(Error::SampleExceedsPopulation { n: n64, n_pop });
        }
    }
    if !alpha.is_finite() || alpha <= F::zero() || alpha >= F::one() {
        return Err(Error::domain(format!(
            "alpha must lie strictly between 0 and 1, got {alpha}"
        )));
    }
    let df = n64 - 1;
    let t = t_quantile(df, F::one() - alpha * real(0.5))?;
    let (factor, var) = match form {
        CiForm::FpcBessel => (
            fpc_value::<F>(FpcKind::Plain, size, n64)?,
            sample.variance(VarianceConvention::Bessel)?,
        ),
        CiForm::FpcStarHybrid => {
            let v = match size.finite() {
                Some(n_pop) => variance(sample.values(), VarianceConvention::Hybrid, Some(n_pop))?,
                None => sample.variance(VarianceConvention::Bessel)?,
            };
            (fpc_value::<F>(FpcKind::Star, size, n64)?, v)
        }
        CiForm::FpcDblstarRaw => (
            fpc_value::<F>(FpcKind::DoubleStar, size, n64)?,
            sample.variance(VarianceConvention::Raw)?,
        ),
    };
    let center = sample.mean();
    let half_width = t * (factor * var / count(n64)).sqrt();
    Ok(IntervalResult {
        center,
        half_width,
        lower: center - half_width,
        upper: center + half_width,
        form,
        alpha,
        df,
    })
}

/// The variance most software reports without asking about the population:
/// bessel for a proper subsample, raw at a full census.
pub fn folk_variance<F: Real>(values: &[F], n_pop: u64) -> Result<F, Error> {
    let n = values.len();
    if n < 2 {
        return Err(Error::TooFewValues {
            required: 2,
            actual: n,
        });
    }
    let n64 = n as u64;
    if n64 > n_pop {
        return Err(Error::SampleExceedsPopulation { n: n64, n_pop });
    }
    if n64 < n_pop {
        variance(values, VarianceConvention::Bessel, None)
    } else {
        variance(values, VarianceConvention::Raw, None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::population::Sample;

    fn sample(values: &[f64]) -> Sample<f64> {
        Sample::new(values.to_vec(), None).unwrap()
    }

    // Reference quantiles computed independently with 40-digit interval
    // bisection against the incomplete-beta tail identity, then rounded to
    // f64. Tolerance matches the documented 1e-8 guarantee.
    const T_TABLE: [(u64, f64, f64); 24] = [
        (1, 0.9, 3.077683537175253),
        (1, 0.95, 6.313751514675043),
        (1, 0.975, 12.706204736174705),
        (1, 0.995, 63.65674116287158),
        (2, 0.9, 1.8856180831641267),
        (2, 0.95, 2.919985580353726),
        (2, 0.975, 4.302652729749464),
        (2, 0.995, 9.924843200918293),
        (3, 0.9, 1.6377443536962102),
        (3, 0.95, 2.353363434801824),
        (3, 0.975, 3.1824463052837096),
        (3, 0.995, 5.840909309733357),
        (10, 0.9, 1.3721836411103356),
        (10, 0.95, 1.8124611228116764),
        (10, 0.975, 2.228_138_851_986_275),
        (10, 0.995, 3.1692726726169512),
        (30, 0.9, 1.3104150253913956),
        (30, 0.95, 1.6972608865939578),
        (30, 0.975, 2.042_272_456_301_238),
        (30, 0.995, 2.7499956535672253),
        (100, 0.9, 1.290074761346516),
        (100, 0.95, 1.6602343260853396),
        (100, 0.975, 1.9839715185235523),
        (100, 0.995, 2.625890521438018),
    ];

    #[test]
    fn t_quantile_matches_reference_table() {
        for &(df, p, expected) in &T_TABLE {
            let got = t_quantile(df, p).unwrap();
            assert!(
                (got - expected).abs() < 1e-8,
                "t({df}, {p}) = {got}, expected {expected}"
            );
        }
    }

    #[test]
    fn t_quantile_spot_values() {
        let cases: [(u64, f64, f64); 6] = [
            (9, 0.975, 2.262_157_162_798_206),
            (5, 0.6, 0.267_180_865_704_145_1),
            (2, 0.99, 6.964556734283274),
            (59, 0.9, 1.2960657251220525),
            (4, 0.025, -2.7764451051977943),
            (7, 0.995, 3.499483297350494),
        ];
        for (df, p, expected) in cases {
            let got = t_quantile(df, p).unwrap();
            assert!(
                (got - expected).abs() < 1e-8,
                "t({df}, {p}) = {got}, expected {expected}"
            );
        }
    }

    #[test]
    fn t_quantile_with_one_degree_is_cauchy() {
        // tan(pi * (p - 1/2)) in closed form.
        for p in [0.6, 0.75, 0.9, 0.975, 0.995] {
            let got = t_quantile(1, p).unwrap();
            let cauchy = (core::f64::consts::PI * (p - 0.5)).tan();
            assert!(
                (got - cauchy).abs() < 1e-8,
                "df=1 at {p}: {got} vs {cauchy}"
            );
        }
        assert!((t_quantile(1, 0.75f64).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn t_quantile_symmetry_and_median() {
        assert_eq!(t_quantile(7, 0.5).unwrap(), 0.0);
        for df in [1, 4, 23] {
            for p in [0.9f64, 0.99, 0.6] {
                let hi = t_quantile(df, p).unwrap();
                let lo = t_quantile(df, 1.0 - p).unwrap();
                assert!((hi + lo).abs() < 1e-10, "asymmetry at df={df}, p={p}");
            }
        }
    }

    #[test]
    fn t_quantile_domain_errors() {
        assert!(t_quantile(0, 0.9).is_err());
        assert!(t_quantile::<f64>(5, 0.0).is_err());
        assert!(t_quantile::<f64>(5, 1.0).is_err());
        assert!(t_quantile::<f64>(5, -0.2).is_err());
        assert!(t_quantile(5, f64::NAN).is_err());
    }

    #[test]
    fn difference_variance_shrinks_with_population_knowledge() {
        let s = sample(&[1.0, 2.0, 3.0, 4.0]);
        let v10 = estimated_difference_variance(&s, PopSize::Finite(10)).unwrap();
        assert!((v10 - 0.25).abs() < 1e-15);
        let census = estimated_difference_variance(&s, PopSize::Finite(4)).unwrap();
        assert_eq!(census, 0.0);
        let inf = estimated_difference_variance(&s, PopSize::Infinite).unwrap();
        assert!((inf - 5.0 / 12.0).abs() < 1e-15);
    }

    #[test]
    fn pivot_on_small_sample() {
        let s = sample(&[1.0, 2.0, 3.0, 4.0]);
        let p = pivot(&s, 2.0, 10).unwrap();
        assert!((p.value - 1.0).abs() < 1e-12);
        assert_eq!(p.df, 3);
    }

    #[test]
    fn pivot_is_zero_when_means_agree() {
        let s = sample(&[1.0, 2.0, 3.0, 4.0]);
        let p = pivot(&s, 2.5, 10).unwrap();
        assert_eq!(p.value, 0.0);
    }

    #[test]
    fn pivot_error_cases() {
        let constant = sample(&[5.0, 5.0, 5.0]);
        assert_eq!(
            pivot(&constant, 4.0, 10).unwrap_err(),
            Error::ZeroSampleVariance
        );
        let s = sample(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(pivot(&s, 2.5, 4).unwrap_err(), Error::CensusPivotUndefined);
        assert_eq!(
            pivot(&s, 2.5, 3).unwrap_err(),
            Error::SampleExceedsPopulation { n: 4, n_pop: 3 }
        );
        assert_eq!(
            pivot(&sample(&[1.0]), 2.5, 3).unwrap_err(),
            Error::TooFewValues {
                required: 2,
                actual: 1
            }
        );
    }

    #[test]
    fn interval_on_small_sample_matches_reference() {
        // Frozen from the same 40-digit pipeline as the quantile table.
        let s = sample(&[1.0, 2.0, 3.0, 4.0]);
        let r = confidence_interval(&s, PopSize::Finite(10), 0.05, CiForm::FpcBessel).unwrap();
        assert_eq!(r.center, 2.5);
        assert_eq!(r.df, 3);
        assert!((r.half_width - 1.5912231526418548).abs() < 1e-8);
        assert!((r.lower - 0.9087768473581452).abs() < 1e-8);
        assert!((r.upper - 4.091223152641855).abs() < 1e-8);
        assert_eq!(r.lower, r.center - r.half_width);
        assert_eq!(r.upper, r.center + r.half_width);
    }

    #[test]
    fn interval_forms_agree_to_rounding() {
        let s = sample(&[1.0, 2.0, 3.0, 4.0]);
        let forms = [
            CiForm::FpcBessel,
            CiForm::FpcStarHybrid,
            CiForm::FpcDblstarRaw,
        ];
        let widths: Vec<f64> = forms
            .iter()
            .map(|&f| {
                confidence_interval(&s, PopSize::Finite(10), 0.05, f)
                    .unwrap()
                    .half_width
            })
            .collect();
        for w in &widths[1..] {
            assert!((w - widths[0]).abs() <= 1e-12 * widths[0]);
        }
    }

    #[test]
    fn census_interval_has_exactly_zero_width() {
        let s = sample(&[1.0, 2.0, 3.0, 4.0]);
        for form in [
            CiForm::FpcBessel,
            CiForm::FpcStarHybrid,
            CiForm::FpcDblstarRaw,
        ] {
            let r = confidence_interval(&s, PopSize::Finite(4), 0.05, form).unwrap();
            assert_eq!(r.half_width, 0.0);
            assert_eq!(r.lower, 2.5);
            assert_eq!(r.upper, 2.5);
        }
    }

    #[test]
    fn infinite_population_interval_drops_the_correction() {
        let s = sample(&[1.0, 2.0, 3.0, 4.0]);
        let inf = confidence_interval(&s, PopSize::Infinite, 0.05, CiForm::FpcBessel).unwrap();
        let fin = confidence_interval(&s, PopSize::Finite(10), 0.05, CiForm::FpcBessel).unwrap();
        assert!(inf.half_width > fin.half_width);
        let expected = t_quantile(3, 0.975).unwrap() * (5.0 / 12.0f64).sqrt();
        assert!((inf.half_width - expected).abs() < 1e-12);
        for form in [CiForm::FpcStarHybrid, CiForm::FpcDblstarRaw] {
            let other = confidence_interval(&s, PopSize::Infinite, 0.05, form).unwrap();
            assert!((other.half_width - inf.half_width).abs() <= 1e-12 * inf.half_width);
        }
    }

    #[test]
    fn interval_argument_errors() {
        let s = sample(&[1.0, 2.0, 3.0, 4.0]);
        assert!(confidence_interval(&s, PopSize::Finite(10), 0.0, CiForm::FpcBessel).is_err());
        assert!(confidence_interval(&s, PopSize::Finite(10), 1.0, CiForm::FpcBessel).is_err());
        assert_eq!(
            confidence_interval(&s, PopSize::Finite(3), 0.05, CiForm::FpcBessel).unwrap_err(),
            Error::SampleExceedsPopulation { n: 4, n_pop: 3 }
        );
        assert_eq!(
            confidence_interval(&sample(&[1.0]), PopSize::Finite(3), 0.05, CiForm::FpcBessel)
                .unwrap_err(),
            Error::TooFewValues {
                required: 2,
                actual: 1
            }
        );
    }

    #[test]
    fn folk_variance_jumps_at_the_census_boundary() {
        assert!((folk_variance(&[1.0f64, 2.0, 3.0], 4).unwrap() - 1.0).abs() < 1e-15);
        assert!((folk_variance(&[1.0f64, 2.0, 3.0, 4.0], 4).unwrap() - 1.25).abs() < 1e-15);
        assert!((folk_variance(&[1.0f64, 2.0], 2).unwrap() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn folk_variance_argument_errors() {
        assert_eq!(
            folk_variance(&[1.0], 4).unwrap_err(),
            Error::TooFewValues {
                required: 2,
                actual: 1
            }
        );
        assert_eq!(
            folk_variance(&[1.0, 2.0, 3.0], 2).unwrap_err(),
            Error::SampleExceedsPopulation { n: 3, n_pop: 2 }
        );
    }
}
