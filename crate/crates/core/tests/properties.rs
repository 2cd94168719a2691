mod common;

use common::{edges, series_of, Class, ALL_CLASSES};
use proptest::prelude::*;
use psvg::scaling::{analyze_series, AnalysisConfig, FitRange};
use psvg::synth::{gen_fbm, FbmConfig};
use psvg::{build_graph_fast, build_graph_naive, TimeSeries};

fn class_strategy() -> impl Strategy<Value = Class> {
    (0..ALL_CLASSES.len()).prop_map(|i| ALL_CLASSES[i])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn fast_matches_naive(class in class_strategy(), len in 2usize..=200, seed in any::<u64>()) {
        let s = series_of(class, len, seed);
        prop_assert_eq!(build_graph_fast(&s).unwrap(), build_graph_naive(&s).unwrap());
    }

    #[test]
    fn analysis_is_affine_invariant(
        len in 16usize..300,
        seed in any::<u64>(),
        log_a in -3.0f64..3.0,
        b in -1e4f64..1e4,
    ) {
        let s = series_of(Class::Fbm(0.5), len, seed);
        let moved = s.map_values(|v| 10f64.powf(log_a) * v + b).unwrap();
        let cfg = AnalysisConfig::default();
        let r0 = analyze_series("w", &s, &cfg).unwrap();
        let r1 = analyze_series("w", &moved, &cfg).unwrap();
        prop_assert_eq!(r0, r1);
    }
}

#[test]
fn scaled_and_shifted_fbm_keeps_lambda_bit_for_bit() {
    let s = gen_fbm(&FbmConfig::new(0.5, 4096, 17).unwrap()).unwrap();
    let moved = s.map_values(|v| 7.0 * v - 1000.0).unwrap();
    let cfg = AnalysisConfig::default();
    let a = analyze_series("w", &s, &cfg).unwrap();
    let b = analyze_series("w", &moved, &cfg).unwrap();
    assert_eq!(
        a.fit.lambda_p().unwrap().to_bits(),
        b.fit.lambda_p().unwrap().to_bits()
    );
}

#[test]
fn long_monotone_and_constant_are_paths() {
    for s in [
        series_of(Class::Monotone, 5000, 0),
        TimeSeries::from_values(vec![2.5; 5000]).unwrap(),
    ] {
        let g = build_graph_fast(&s).unwrap();
        assert_eq!(g.edge_count(), 4999);
        assert_eq!(edges(&g), (0..4999).map(|i| (i, i + 1)).collect::<Vec<_>>());
    }
}

fn mean_lambda(h: f64, range: FitRange) -> f64 {
    let cfg = AnalysisConfig {
        range,
        ..AnalysisConfig::default()
    };
    (0..10)
        .map(|seed| {
            let s = gen_fbm(&FbmConfig::new(h, 4096, seed).unwrap()).unwrap();
            analyze_series("fbm", &s, &cfg)
                .unwrap()
                .fit
                .lambda_p()
                .unwrap()
        })
        .sum::<f64>()
        / 10.0
}

#[test]
fn psvg_decreases_with_hurst_on_default_fit() {
    let low = mean_lambda(0.3, FitRange::default());
    let high = mean_lambda(0.7, FitRange::default());
    assert!(low > high, "{low} vs {high}");
}

#[test]
fn brownian_psvg_near_two() {
    // Degree 1 appears only at the endpoints and is left out of the fit.
    let range = FitRange {
        k_min: Some(2),
        k_max: None,
    };
    let s = gen_fbm(&FbmConfig::new(0.5, 4096, 2024).unwrap()).unwrap();
    let cfg = AnalysisConfig {
        range,
        ..AnalysisConfig::default()
    };
    let lambda = analyze_series("bm", &s, &cfg)
        .unwrap()
        .fit
        .lambda_p()
        .unwrap();
    assert!((lambda - 2.0).abs() <= 0.3, "{lambda}");
}
