use modfio_core::experiments::fit_scaling;
use modfio_core::oracles::{chirped_gaussian_norm_asymptotic, dilated_gaussian_limit_exponents};
use modfio_core::{make_grid, modulation_norm, ChirpedGaussian, ExperimentConfig, Recip, Window, WeightSpec};
use num_complex::Complex64;

#[test]
fn dilation_slopes_follow_the_oracle_limits() {
    // Fitted on the configured windows; the asymptotic formula holds only up to constants,
    // so its own finite-window slope is not a usable reference.
    let cfg = ExperimentConfig::default();
    let grid = cfg.grid().unwrap();
    let g = Window::gaussian(grid).unwrap();
    let w = WeightSpec::unweighted();
    let exps = [Recip::ONE, Recip::HALF, Recip::ZERO];
    for (end, window) in [cfg.windows.small, cfg.windows.large].into_iter().enumerate() {
        let lambdas = cfg.window_lambdas(window).unwrap();
        let samples: Vec<_> = lambdas
            .iter()
            .map(|&l| ChirpedGaussian::dilated(l, 1).unwrap().sample(grid).unwrap())
            .collect();
        for p in exps {
            for q in exps {
                let num: Vec<f64> = samples
                    .iter()
                    .map(|s| modulation_norm(s, p, q, &w, &g).unwrap().value)
                    .collect();
                let slope = fit_scaling(&lambdas, &num).unwrap().slope;
                let (small, large) = dilated_gaussian_limit_exponents(p, q, 1);
                let limit = if end == 0 { small } else { large };
                assert!((slope - limit).abs() <= 0.05, "p={p} q={q} on {window:?}: {slope} vs {limit}");
            }
        }
    }
}

#[test]
fn chirped_ratio_is_stable() {
    let grid = make_grid(2048, 64.0).unwrap();
    let g = Window::gaussian(grid).unwrap();
    let w = WeightSpec::unweighted();
    let mut ratios = Vec::new();
    for a in [0.5, 1.0, 2.0] {
        for b in [0.0, 1.0, 4.0] {
            let h = ChirpedGaussian::new(Complex64::new(1.0, 0.0), a, b, 1).unwrap().sample(grid).unwrap();
            for (p, q) in [(Recip::ONE, Recip::ONE), (Recip::HALF, Recip::HALF), (Recip::ZERO, Recip::ONE), (Recip::ONE, Recip::ZERO)] {
                let num = modulation_norm(&h, p, q, &w, &g).unwrap().value;
                ratios.push(num / chirped_gaussian_norm_asymptotic(a, b, 1, p, q).unwrap());
            }
        }
    }
    let max = ratios.iter().copied().fold(f64::MIN, f64::max);
    let min = ratios.iter().copied().fold(f64::MAX, f64::min);
    assert_eq!(ratios.len(), 36);
    assert!(max / min <= 4.0, "{}", max / min);
}
