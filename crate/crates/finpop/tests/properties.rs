//! Property tests for the algebraic invariants the crate promises.

use finpop::{
    confidence_interval, estimated_difference_variance, folk_variance, fpc_value, mean,
    oracle_sample_mean, sample_mean_moments, t_quantile, variance, CiForm, EnumerationBudget,
    FpcKind, Framing, PopSize, Population, Sample, VarianceConvention,
};
use proptest::prelude::*;

fn finite_values(min_len: usize, max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0e6..1.0e6f64, min_len..=max_len)
}

fn rel_close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn sum_of_squares_always_decomposes(values in finite_values(1, 40)) {
        let p = Population::new(values.clone()).unwrap();
        let s = p.summary();
        let sum_sq: f64 = values.iter().map(|x| x * x).sum();
        let n = values.len() as f64;
        let reconstructed = n * (s.mean * s.mean + s.var_raw.unwrap());
        let scale = sum_sq.abs().max(reconstructed.abs()).max(1e-300);
        prop_assert!(
            (sum_sq - reconstructed).abs() <= 1e-12 * scale,
            "sum of squares {sum_sq} vs {reconstructed}"
        );
    }

    #[test]
    fn hybrid_with_parent_equal_to_length_is_raw(values in finite_values(2, 40)) {
        let n = values.len() as u64;
        let hybrid = variance(&values, VarianceConvention::Hybrid, Some(n)).unwrap();
        let raw = variance(&values, VarianceConvention::Raw, None).unwrap();
        prop_assert_eq!(hybrid, raw);
    }

    #[test]
    fn summary_raw_is_the_rescaled_bessel(values in finite_values(2, 40)) {
        let s = Population::new(values.clone()).unwrap().summary();
        let n = values.len() as u64;
        let expected = s.var_bessel.unwrap() * ((n - 1) as f64 / n as f64);
        prop_assert_eq!(s.var_raw.unwrap(), expected);
    }

    #[test]
    fn mean_and_variance_follow_affine_maps(
        values in finite_values(2, 30),
        a in -100.0..100.0f64,
        b in -1000.0..1000.0f64,
    ) {
        prop_assume!(a.abs() > 1e-3);
        let mapped: Vec<f64> = values.iter().map(|x| a * x + b).collect();
        let m0 = mean(&values).unwrap();
        let m1 = mean(&mapped).unwrap();
        let scale_m = m1.abs().max((a * m0 + b).abs()).max(1.0);
        prop_assert!((m1 - (a * m0 + b)).abs() <= 1e-10 * scale_m);

        for convention in [VarianceConvention::Bessel, VarianceConvention::Raw] {
            let v0 = variance(&values, convention, None).unwrap();
            let v1 = variance(&mapped, convention, None).unwrap();
            let scale_v = v1.abs().max((a * a * v0).abs()).max(1e-12);
            prop_assert!(
                (v1 - a * a * v0).abs() <= 1e-9 * scale_v,
                "{convention:?}: {v1} vs {}", a * a * v0
            );
        }
    }

    #[test]
    fn variances_are_never_negative(values in finite_values(1, 40)) {
        prop_assert!(variance(&values, VarianceConvention::Raw, None).unwrap() >= 0.0);
        if values.len() >= 2 {
            prop_assert!(variance(&values, VarianceConvention::Bessel, None).unwrap() >= 0.0);
        }
    }

    #[test]
    fn constant_values_have_exactly_zero_variance(c in -1.0e6..1.0e6f64, len in 2usize..30) {
        let values = vec![c; len];
        prop_assert_eq!(variance(&values, VarianceConvention::Bessel, None).unwrap(), 0.0);
        prop_assert_eq!(variance(&values, VarianceConvention::Raw, None).unwrap(), 0.0);
    }

    #[test]
    fn empirical_cdf_is_monotone(values in finite_values(1, 30), x in -2.0e6..2.0e6f64, step in 0.0..1.0e6f64) {
        let p = Population::new(values).unwrap();
        let lo = p.empirical_cdf(x);
        let hi = p.empirical_cdf(x + step);
        prop_assert!(lo <= hi);
        prop_assert!((0.0..=1.0).contains(&lo));
    }

    #[test]
    fn correction_factor_chain_on_samples(values in finite_values(2, 30), extra in 0u64..200) {
        let n = values.len() as u64;
        let n_pop = n + extra;
        let size = PopSize::Finite(n_pop);
        let bessel = variance(&values, VarianceConvention::Bessel, None).unwrap();
        let hybrid = variance(&values, VarianceConvention::Hybrid, Some(n_pop)).unwrap();
        let raw = variance(&values, VarianceConvention::Raw, None).unwrap();
        let a = fpc_value::<f64>(FpcKind::Plain, size, n).unwrap() * bessel;
        let b = fpc_value::<f64>(FpcKind::Star, size, n).unwrap() * hybrid;
        let c = fpc_value::<f64>(FpcKind::DoubleStar, size, n).unwrap() * raw;
        prop_assert!(rel_close(a, b, 1e-12), "fpc chain: {a} vs {b}");
        prop_assert!(rel_close(a, c, 1e-12), "fpc chain: {a} vs {c}");
    }

    #[test]
    fn correction_factor_chain_at_infinity(values in finite_values(2, 30)) {
        let n = values.len() as u64;
        let bessel = variance(&values, VarianceConvention::Bessel, None).unwrap();
        let raw = variance(&values, VarianceConvention::Raw, None).unwrap();
        let a = fpc_value::<f64>(FpcKind::Plain, PopSize::Infinite, n).unwrap() * bessel;
        let c = fpc_value::<f64>(FpcKind::DoubleStar, PopSize::Infinite, n).unwrap() * raw;
        prop_assert!(rel_close(a, c, 1e-12), "infinite chain: {a} vs {c}");
    }

    #[test]
    fn interval_forms_agree_and_census_collapses(
        values in finite_values(2, 20),
        extra in 0u64..100,
        alpha_idx in 0usize..5,
    ) {
        let alpha = [0.2, 0.1, 0.05, 0.01, 0.005][alpha_idx];
        let n = values.len() as u64;
        let sample = Sample::new(values.clone(), None).unwrap();

        let census = confidence_interval(&sample, PopSize::Finite(n), alpha, CiForm::FpcBessel).unwrap();
        prop_assert_eq!(census.half_width, 0.0);
        prop_assert_eq!(census.lower, census.center);

        let size = PopSize::Finite(n + extra);
        let forms = [CiForm::FpcBessel, CiForm::FpcStarHybrid, CiForm::FpcDblstarRaw];
        let widths: Vec<f64> = forms
            .iter()
            .map(|&f| confidence_interval(&sample, size, alpha, f).unwrap().half_width)
            .collect();
        for w in &widths[1..] {
            prop_assert!(
                (w - widths[0]).abs() <= 1e-12 * widths[0].abs().max(*w),
                "widths {widths:?}"
            );
        }
    }

    #[test]
    fn difference_variance_matches_interval_width(
        values in finite_values(2, 20),
        extra in 1u64..100,
    ) {
        let n = values.len() as u64;
        let size = PopSize::Finite(n + extra);
        let sample = Sample::new(values, None).unwrap();
        let v = estimated_difference_variance(&sample, size).unwrap();
        let ci = confidence_interval(&sample, size, 0.05, CiForm::FpcBessel).unwrap();
        let t = t_quantile(n - 1, 0.975f64).unwrap();
        let expected = t * v.sqrt();
        prop_assert!(
            (ci.half_width - expected).abs() <= 1e-12 * expected.abs().max(ci.half_width),
            "{} vs {expected}", ci.half_width
        );
    }

    #[test]
    fn folk_variance_matches_its_convention(values in finite_values(2, 20), extra in 0u64..50) {
        let n = values.len() as u64;
        let folk = folk_variance(&values, n + extra).unwrap();
        let expected = if extra == 0 {
            variance(&values, VarianceConvention::Raw, None).unwrap()
        } else {
            variance(&values, VarianceConvention::Bessel, None).unwrap()
        };
        prop_assert_eq!(folk, expected);
    }

    #[test]
    fn t_quantile_is_odd_around_the_median(df in 1u64..150, p in 0.001..0.999f64) {
        let hi = t_quantile(df, p).unwrap();
        let lo = t_quantile(df, 1.0 - p).unwrap();
        prop_assert!((hi + lo).abs() < 1e-10, "t({df}, {p}) asymmetry: {hi} vs {lo}");
    }

    #[test]
    fn t_quantile_is_monotone_in_the_order(df in 1u64..100, p in 0.01..0.98f64, step in 0.001..0.02f64) {
        let lo = t_quantile(df, p).unwrap();
        let hi = t_quantile(df, p + step).unwrap();
        prop_assert!(hi > lo, "t({df}) not increasing between {p} and {}", p + step);
    }

    #[test]
    fn closed_form_sample_mean_matches_enumeration(
        values in finite_values(2, 7),
        n_offset in 0u64..6,
    ) {
        let n_pop = values.len() as u64;
        let n = 2 + n_offset.min(n_pop - 2);
        let p = Population::new(values).unwrap();
        let closed = sample_mean_moments(Framing::Conditional, &p.summary(), n).unwrap();
        let exact = oracle_sample_mean(&p, n, &EnumerationBudget::default()).unwrap();
        let tol = |a: f64, b: f64| (a - b).abs() <= 1e-12 + 1e-9 * b.abs();
        prop_assert!(tol(closed.mean, exact.exact_mean));
        prop_assert!(tol(closed.variance.unwrap(), exact.exact_variance.unwrap()));
        prop_assert!(tol(closed.covariance.unwrap(), exact.exact_covariance.unwrap()));
    }

    #[test]
    fn enumeration_is_permutation_invariant(values in finite_values(2, 7)) {
        let n = 2u64;
        let forward = Population::new(values.clone()).unwrap();
        let mut reversed_values = values;
        reversed_values.reverse();
        let reversed = Population::new(reversed_values).unwrap();
        let a = oracle_sample_mean(&forward, n, &EnumerationBudget::default()).unwrap();
        let b = oracle_sample_mean(&reversed, n, &EnumerationBudget::default()).unwrap();
        prop_assert!((a.exact_mean - b.exact_mean).abs() <= 1e-12 + 1e-12 * a.exact_mean.abs());
        let va = a.exact_variance.unwrap();
        let vb = b.exact_variance.unwrap();
        prop_assert!((va - vb).abs() <= 1e-12 + 1e-9 * va.abs());
        prop_assert_eq!(a.subset_count, b.subset_count);
    }

    #[test]
    fn pop_size_round_trips_through_strings(n in 1u64..u64::MAX) {
        let size = PopSize::Finite(n);
        prop_assert_eq!(size.to_string().parse::<PopSize>().unwrap(), size);
        prop_assert_eq!("inf".parse::<PopSize>().unwrap(), PopSize::Infinite);
    }
}
