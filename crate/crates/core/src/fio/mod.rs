//! Fourier integral operators `Tf(x) = ∫ e^{2πiΦ(x,η)} σ(x,η) f̂(η) dη` by direct
//! quadrature, tame-phase diagnostics, and the Gabor-matrix machinery of §2.4.

mod gabor;
mod phase;
mod symbol;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{fourier, Signal};

pub use gabor::{
    gabor_matrix_direct, gabor_matrix_via_stft, psi_window, symbol_modulation_norm, symbol_norm_supz,
    tensor_symbol_norm, PsiWindow, SymbolLattice,
};
pub use phase::{
    check_tame, gauss_legendre_16, Condition, PhaseFn, PhaseId, PhaseKind, PhaseReport, PhaseSpec, Quadratic, Rect,
};
pub use symbol::{adjoint_transform, Profile, SymbolDescriptor, SymbolGrid};

/// Relative level of `|f̂|` near the band edge above which results may alias.
pub const ALIASING_LEVEL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AliasingWarning {
    /// `max |f̂|` over the outer sixteenth of the band, relative to `max |f̂|`.
    pub edge_ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FioOutput {
    pub signal: Signal,
    pub aliasing: Option<AliasingWarning>,
}

enum SymbolAccess {
    Tensor(Vec<Complex64>, Vec<Complex64>),
    Samples(ndarray::Array2<Complex64>),
}

/// Relative size of `|f̂|` in the outer sixteenth of the frequency band.
pub fn band_edge_ratio(hat: &Signal) -> f64 {
    let peak = hat.max_abs();
    if peak == 0.0 {
        return 0.0;
    }
    let cut = 15.0 / 16.0 * 0.5 * hat.grid().extent();
    hat.samples()
        .iter()
        .enumerate()
        .filter(|(j, _)| hat.grid().point(*j).abs() >= cut)
        .map(|(_, z)| z.norm())
        .fold(0.0, f64::max)
        / peak
}

pub fn apply_fio(phase: &PhaseSpec, sigma: &SymbolGrid, f: &Signal) -> Result<FioOutput> {
    let grid = *f.grid();
    let hat = fourier(f);
    let fg = *hat.grid();
    let n = grid.n();
    let edge = band_edge_ratio(&hat);
    let aliasing = (edge > ALIASING_LEVEL).then_some(AliasingWarning { edge_ratio: edge });

    let xs = grid.points();
    let etas = fg.points();
    let access = match sigma.descriptor() {
        Some(d) => SymbolAccess::Tensor(
            xs.iter().map(|&x| d.x.eval(x)).collect(),
            etas.iter().map(|&e| d.eta.eval(e)).collect(),
        ),
        None => {
            grid.ensure_same(sigma.position_grid(), "apply_fio symbol position grid")?;
            fg.ensure_same(sigma.frequency_grid(), "apply_fio symbol frequency grid")?;
            SymbolAccess::Samples(sigma.samples())
        }
    };
    let two_pi = 2.0 * std::f64::consts::PI;
    let weights: Vec<Complex64> = hat.samples().iter().map(|&c| c * fg.dx()).collect();
    let quad = phase.as_quadratic();

    // Column factors that do not depend on x.
    let columns: Vec<Complex64> = (0..n)
        .map(|j| {
            let mut c = weights[j];
            if let SymbolAccess::Tensor(_, se) = &access {
                c *= se[j];
            }
            if let Some(q) = quad {
                let e = etas[j];
                c *= Complex64::from_polar(1.0, two_pi * (0.5 * q.etaeta * e * e + q.eta * e));
            }
            c
        })
        .collect();

    let out: Vec<Complex64> = (0..n)
        .into_par_iter()
        .map(|k| {
            let x = xs[k];
            let mut acc = Complex64::new(0.0, 0.0);
            match quad {
                Some(q) => {
                    let b = two_pi * q.xeta * x;
                    for j in 0..n {
                        let mut term = columns[j];
                        if term == Complex64::new(0.0, 0.0) {
                            continue;
                        }
                        if let SymbolAccess::Samples(s) = &access {
                            term *= s[[k, j]];
                        }
                        let (sin, cos) = (b * etas[j]).sin_cos();
                        acc += term * Complex64::new(cos, sin);
                    }
                    acc *= Complex64::from_polar(1.0, two_pi * (0.5 * q.xx * x * x + q.x * x));
                }
                None => {
                    for j in 0..n {
                        let mut term = columns[j];
                        if let SymbolAccess::Samples(s) = &access {
                            term *= s[[k, j]];
                        }
                        let (sin, cos) = (two_pi * phase.value(x, etas[j])).sin_cos();
                        acc += term * Complex64::new(cos, sin);
                    }
                }
            }
            if let SymbolAccess::Tensor(sx, _) = &access {
                acc *= sx[k];
            }
            acc
        })
        .collect();
    if out.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::Data("FIO produced non-finite samples".into()));
    }
    Ok(FioOutput {
        signal: Signal::new(grid, out)?,
        aliasing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{make_grid, Grid1D};
    use crate::oracles::{schrodinger_on_gaussian, ChirpedGaussian};
    use ndarray::Array2;
    use std::f64::consts::PI;
    use std::sync::Arc;

    fn grid() -> Grid1D {
        make_grid(512, 32.0).unwrap()
    }

    fn one(g: Grid1D) -> SymbolGrid {
        SymbolGrid::closed_form(g, SymbolDescriptor::constant(Complex64::new(1.0, 0.0)))
    }

    fn test_signal(g: Grid1D) -> Signal {
        Signal::from_fn(g, |x| {
            Complex64::new(-PI * x * x, -0.5 * PI * x * x).exp() * Complex64::new(1.0, 0.3)
                + Complex64::new(-2.0 * PI * (x - 1.0).powi(2), 0.0).exp()
        })
        .unwrap()
    }

    #[test]
    fn kohn_nirenberg_identity() {
        let g = grid();
        let f = test_signal(g);
        let out = apply_fio(&PhaseSpec::kohn_nirenberg(), &one(g), &f).unwrap();
        assert!(out.aliasing.is_none());
        assert!(out.signal.rel_l2_error(&f).unwrap() <= 1e-10);
    }

    #[test]
    fn chirp_multiplier() {
        let g = grid();
        let f = test_signal(g);
        let out = apply_fio(&PhaseSpec::quadratic_chirp(), &one(g), &f).unwrap().signal;
        let expect = f.modulated(|x| Complex64::from_polar(1.0, PI * x * x));
        assert!(out.rel_l2_error(&expect).unwrap() <= 1e-8);
    }

    #[test]
    fn closed_form_operator_outputs() {
        let g = make_grid(2048, 64.0).unwrap();
        for lambda in [0.5, 1.0, 2.0] {
            let phi = ChirpedGaussian::dilated(lambda, 1).unwrap().sample(g).unwrap();
            let sigma = SymbolGrid::closed_form(g, SymbolDescriptor::gaussian_pair(lambda));
            let amp = Complex64::new(0.5f64.sqrt(), 0.0);

            let chirp = apply_fio(&PhaseSpec::quadratic_chirp(), &sigma, &phi).unwrap().signal;
            let expect = ChirpedGaussian::new(amp, lambda * lambda, -1.0, 1).unwrap().sample(g).unwrap();
            assert!(chirp.rel_l2_error(&expect).unwrap() <= 1e-6);

            let kn = apply_fio(&PhaseSpec::kohn_nirenberg(), &sigma, &phi).unwrap().signal;
            let expect = ChirpedGaussian::new(amp, lambda * lambda, 0.0, 1).unwrap().sample(g).unwrap();
            assert!(kn.rel_l2_error(&expect).unwrap() <= 1e-6);

            let schr = apply_fio(&PhaseSpec::schrodinger_free(), &one(g), &phi).unwrap().signal;
            let expect = schrodinger_on_gaussian(lambda, 1).unwrap().sample(g).unwrap();
            assert!(schr.rel_l2_error(&expect).unwrap() <= 1e-6);
        }
    }

    #[test]
    fn custom_phase_matches_builtin() {
        struct Chirp;
        impl PhaseFn for Chirp {
            fn value(&self, x: f64, eta: f64) -> f64 {
                x * eta + 0.5 * x * x
            }
            fn gradient(&self, x: f64, eta: f64) -> (f64, f64) {
                (eta + x, x)
            }
            fn hessian(&self, _: f64, _: f64) -> [f64; 3] {
                [1.0, 1.0, 0.0]
            }
        }
        let g = make_grid(256, 16.0).unwrap();
        let f = test_signal(g);
        let sigma = SymbolGrid::closed_form(g, SymbolDescriptor::standard_gaussian());
        let a = apply_fio(&PhaseSpec::custom(Arc::new(Chirp)), &sigma, &f).unwrap().signal;
        let b = apply_fio(&PhaseSpec::quadratic_chirp(), &sigma, &f).unwrap().signal;
        assert!(a.rel_l2_error(&b).unwrap() < 1e-12);
    }

    #[test]
    fn linearity_and_sampled_symbols() {
        let g = make_grid(256, 16.0).unwrap();
        let f = test_signal(g);
        let h = Signal::from_real_fn(g, |x| (-PI * (x + 2.0).powi(2)).exp()).unwrap();
        let d = SymbolDescriptor::standard_gaussian();
        let sampled = SymbolGrid::from_samples(g, g.dual(), SymbolGrid::closed_form(g, d).samples()).unwrap();
        let phase = PhaseSpec::quadratic_chirp();
        let c = Complex64::new(0.5, -2.0);
        let lhs = apply_fio(&phase, &sampled, &(&f + &(&h * c))).unwrap().signal;
        let rhs = &apply_fio(&phase, &sampled, &f).unwrap().signal
            + &(&apply_fio(&phase, &sampled, &h).unwrap().signal * c);
        assert!(lhs.rel_l2_error(&rhs).unwrap() < 1e-13);
        let closed = apply_fio(&phase, &SymbolGrid::closed_form(g, d), &f).unwrap().signal;
        assert!(apply_fio(&phase, &sampled, &f).unwrap().signal.rel_l2_error(&closed).unwrap() < 1e-13);

        // Linearity in σ.
        let s2 = SymbolGrid::from_samples(g, g.dual(), sampled.samples().mapv(|z| z * c)).unwrap();
        let sum = SymbolGrid::from_samples(g, g.dual(), &sampled.samples() + &s2.samples()).unwrap();
        let lhs = apply_fio(&phase, &sum, &f).unwrap().signal;
        let rhs = &apply_fio(&phase, &sampled, &f).unwrap().signal + &apply_fio(&phase, &s2, &f).unwrap().signal;
        assert!(lhs.rel_l2_error(&rhs).unwrap() < 1e-13);

        let wrong = SymbolGrid::from_samples(g, make_grid(256, 8.0).unwrap(), Array2::zeros((256, 256))).unwrap();
        assert!(matches!(apply_fio(&phase, &wrong, &f), Err(Error::Shape(_))));
    }

    #[test]
    fn aliasing_is_flagged() {
        let g = make_grid(256, 16.0).unwrap();
        let spiky = Signal::from_real_fn(g, |x| (-40.0 * PI * x * x).exp()).unwrap();
        let out = apply_fio(&PhaseSpec::kohn_nirenberg(), &one(g), &spiky).unwrap();
        assert!(out.aliasing.unwrap().edge_ratio > ALIASING_LEVEL);
    }

    #[test]
    fn l2_bound() {
        let g = make_grid(512, 32.0).unwrap();
        let symbols = [
            SymbolDescriptor::standard_gaussian(),
            SymbolDescriptor::gaussian_pair(2.0),
            SymbolDescriptor::tensor(
                Profile::Bump { amp: Complex64::new(1.0, 0.0), radius: 2.0, chirp: 1.0 },
                Profile::gaussian(0.5),
            ),
        ];
        let signals = [test_signal(g), ChirpedGaussian::dilated(0.5, 1).unwrap().sample(g).unwrap()];
        for phase in [PhaseSpec::kohn_nirenberg(), PhaseSpec::quadratic_chirp(), PhaseSpec::schrodinger_free()] {
            for d in symbols {
                let s = SymbolGrid::closed_form(g, d);
                for f in &signals {
                    let tf = apply_fio(&phase, &s, f).unwrap().signal;
                    assert!(tf.norm_l2() <= (1.0 + 1e-6) * s.l2_norm().unwrap() * f.norm_l2());
                }
            }
        }
    }
}
