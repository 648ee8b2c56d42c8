use ndarray::Array2;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::{apply_fio, PhaseSpec, SymbolDescriptor, SymbolGrid};
use crate::error::{Error, Result};
use crate::grid::{fft_plan, fourier, inner, lp_norm, Direction, Grid1D};
use crate::norms::{modulation_norm, Recip, WeightSpec};
use crate::tfa::Window;

/// Spacing of the offset lattice used by [`gabor_matrix_via_stft`].
const QUAD_STEP: f64 = 1.0 / 32.0;
/// Relative level below which window tails are dropped from quadratures.
const TAIL: f64 = 1e-18;

/// `Ψ_z(ζ) = e^{2πiΦ_{2,z}(ζ)} ḡ(ζ₁) ĝ(ζ₂)`.
#[derive(Debug, Clone)]
pub struct PsiWindow {
    phase: PhaseSpec,
    window: Window,
    z: (f64, f64),
}

pub fn psi_window(phase: &PhaseSpec, g: &Window, z: (f64, f64)) -> PsiWindow {
    PsiWindow {
        phase: phase.clone(),
        window: g.clone(),
        z,
    }
}

impl PsiWindow {
    pub fn z(&self) -> (f64, f64) {
        self.z
    }

    pub fn eval(&self, zeta: (f64, f64)) -> Complex64 {
        let chirp = Complex64::from_polar(1.0, 2.0 * PI * self.phase.taylor_remainder(self.z, zeta));
        chirp * self.window.eval(zeta.0).conj() * self.window.eval_hat(zeta.1)
    }

    /// Samples on `g1 × g2`.
    pub fn sample(&self, g1: &Grid1D, g2: &Grid1D) -> Array2<Complex64> {
        self.sample_points(&g1.points(), &g2.points())
    }

    fn sample_points(&self, d1: &[f64], d2: &[f64]) -> Array2<Complex64> {
        let a: Vec<Complex64> = d1.iter().map(|&t| self.window.eval(t).conj()).collect();
        let b: Vec<Complex64> = d2.iter().map(|&t| self.window.eval_hat(t)).collect();
        let quad = self.phase.as_quadratic();
        Array2::from_shape_fn((d1.len(), d2.len()), |(i, j)| {
            let ab = a[i] * b[j];
            if ab == Complex64::new(0.0, 0.0) {
                return ab;
            }
            let zeta = (d1[i], d2[j]);
            let rem = match quad {
                Some(q) => q.xx * zeta.0 * zeta.0 + 2.0 * q.xeta * zeta.0 * zeta.1 + q.etaeta * zeta.1 * zeta.1,
                None => self.phase.taylor_remainder(self.z, zeta),
            };
            ab * Complex64::from_polar(1.0, PI * rem)
        })
    }
}

/// Radius outside which both `|g|` and `|ĝ|` fall below `TAIL` of their peaks.
fn window_radius(g: &Window) -> f64 {
    let r = match g.shape() {
        Some(s) => {
            let t = (-TAIL.ln() / PI).sqrt();
            t * s.a.sqrt().max(1.0 / s.a.sqrt())
        }
        None => {
            let last = |sig: &crate::grid::Signal| {
                let peak = sig.max_abs();
                (0..sig.len())
                    .filter(|&k| sig.samples()[k].norm() > TAIL * peak)
                    .map(|k| sig.grid().point(k).abs())
                    .fold(0.0, f64::max)
            };
            last(g.signal()).max(last(&fourier(g.signal())))
        }
    };
    (2.0 * r).ceil() / 2.0 + 0.5
}

fn atom(g: &Window, x: f64, omega: f64) -> Result<crate::grid::Signal> {
    let grid = *g.grid();
    if !grid.covers(x) || !grid.dual().covers(omega) {
        return Err(Error::domain(format!("({x}, {omega}) lies outside the grid coverage")));
    }
    Ok(g.translated(x).modulated(|y| Complex64::from_polar(1.0, 2.0 * PI * omega * y)))
}

/// `⟨T g_{x,ω}, g_{x′,ω′}⟩` with `g_{x,ω} = M_ω T_x g`, by [`apply_fio`] and [`inner`].
pub fn gabor_matrix_direct(
    phase: &PhaseSpec,
    sigma: &SymbolGrid,
    g: &Window,
    (x, omega): (f64, f64),
    (x_out, omega_out): (f64, f64),
) -> Result<Complex64> {
    let input = atom(g, x, omega)?;
    let output = atom(g, x_out, omega_out)?;
    inner(&apply_fio(phase, sigma, &input)?.signal, &output)
}

/// Right-hand side of the Gabor-matrix identity,
/// `|∫ σ(ζ) Ψ_z(ζ - z) e^{-2πi u₂·ζ} dζ|` with `z = (x′, ω)` and
/// `u₂ = (ω′ - ∂ₓΦ(z), x - ∂_ηΦ(z))`, by direct quadrature at that one point.
pub fn gabor_matrix_via_stft(
    phase: &PhaseSpec,
    sigma: &SymbolGrid,
    g: &Window,
    (x, omega): (f64, f64),
    (x_out, omega_out): (f64, f64),
) -> Result<f64> {
    let z = (x_out, omega);
    let (px, peta) = phase.gradient(z.0, z.1);
    let u2 = (omega_out - px, x - peta);
    let psi = psi_window(phase, g, z);
    let r = window_radius(g);
    let wave = |u: f64, t: f64| Complex64::from_polar(1.0, -2.0 * PI * u * t);

    let total = match sigma.descriptor() {
        Some(d) => {
            let m = (r / QUAD_STEP).ceil() as i64;
            let offs: Vec<f64> = (-m..=m).map(|i| i as f64 * QUAD_STEP).collect();
            let psi_s = psi.sample_points(&offs, &offs);
            let a: Vec<Complex64> = offs
                .iter()
                .map(|&t| d.x.eval(z.0 + t) * wave(u2.0, z.0 + t))
                .collect();
            let b: Vec<Complex64> = offs
                .iter()
                .map(|&t| d.eta.eval(z.1 + t) * wave(u2.1, z.1 + t))
                .collect();
            let sum: Complex64 = psi_s
                .outer_iter()
                .into_par_iter()
                .enumerate()
                .map(|(i, row)| a[i] * row.iter().zip(&b).map(|(p, q)| p * q).sum::<Complex64>())
                .sum();
            sum * QUAD_STEP * QUAD_STEP
        }
        None => {
            // Sampled symbols: sum over the symbol's own lattice near z.
            let (gp, gf) = (*sigma.position_grid(), *sigma.frequency_grid());
            let near = |grid: &Grid1D, c: f64| -> Vec<usize> {
                (0..grid.n()).filter(|&k| (grid.point(k) - c).abs() <= r).collect()
            };
            let (rows, cols) = (near(&gp, z.0), near(&gf, z.1));
            let d1: Vec<f64> = rows.iter().map(|&i| gp.point(i) - z.0).collect();
            let d2: Vec<f64> = cols.iter().map(|&j| gf.point(j) - z.1).collect();
            let psi_s = psi.sample_points(&d1, &d2);
            let values = sigma.samples();
            let mut sum = Complex64::new(0.0, 0.0);
            for (a, &i) in rows.iter().enumerate() {
                for (b, &j) in cols.iter().enumerate() {
                    sum += values[[i, j]] * psi_s[[a, b]] * wave(u2.0, gp.point(i)) * wave(u2.1, gf.point(j));
                }
            }
            sum * gp.dx() * gf.dx()
        }
    };
    Ok(total.norm())
}

/// Discretization of `ℝ²` for the 4-D symbol transforms of [`symbol_norm_supz`]
/// and [`symbol_modulation_norm`]: an `n × n` lattice of width `extent` per axis,
/// with window positions `u₁` taken every `stride` points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymbolLattice {
    pub n: usize,
    pub extent: f64,
    pub stride: usize,
}

impl Default for SymbolLattice {
    fn default() -> Self {
        SymbolLattice {
            n: 64,
            extent: 8.0,
            stride: 2,
        }
    }
}

impl SymbolLattice {
    fn grid(&self) -> Result<Grid1D> {
        if self.stride == 0 || !self.n.is_multiple_of(self.stride) {
            return Err(Error::parameter(format!("stride {} must divide n = {}", self.stride, self.n)));
        }
        Grid1D::new(self.n, self.extent)
    }
}

fn lattice_samples(sigma: &SymbolGrid, grid: &Grid1D) -> Result<Array2<Complex64>> {
    let n = grid.n();
    let mut out = Array2::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            out[[i, j]] = sigma.eval(grid.point(i), grid.point(j))?;
        }
    }
    Ok(out)
}

/// `sup_k |∫ σ(ζ) W_k(ζ - u₁) e^{-2πi u₂·ζ} dζ|` for every `u₁` on the strided lattice
/// (rows) and every `u₂` on the dual lattice (columns, row-major in `(u₂₁, u₂₂)`).
/// Each `W_k` is given on the offset lattice `(i - n) h`, `i < 2n`.
fn sup_transform(sig: &Array2<Complex64>, windows: &[Array2<Complex64>], grid: &Grid1D, stride: usize) -> Vec<Vec<f64>> {
    let n = grid.n();
    let h = grid.dx();
    let fwd = fft_plan(n, Direction::Forward);
    let centers: Vec<(usize, usize)> = (0..n)
        .step_by(stride)
        .flat_map(|k| (0..n).step_by(stride).map(move |l| (k, l)))
        .collect();
    centers
        .par_iter()
        .map(|&(k, l)| {
            let mut best = vec![0.0f64; n * n];
            let mut buf = vec![Complex64::new(0.0, 0.0); n * n];
            let mut col = vec![Complex64::new(0.0, 0.0); n];
            for w in windows {
                for i in 0..n {
                    for j in 0..n {
                        buf[i * n + j] = sig[[i, j]] * w[[i + n - k, j + n - l]];
                    }
                }
                for row in buf.chunks_mut(n) {
                    crate::grid::centered_dft_with(row, h, fwd.as_ref());
                }
                for j in 0..n {
                    for i in 0..n {
                        col[i] = buf[i * n + j];
                    }
                    crate::grid::centered_dft_with(&mut col, h, fwd.as_ref());
                    for i in 0..n {
                        buf[i * n + j] = col[i];
                    }
                }
                for (b, v) in best.iter_mut().zip(&buf) {
                    *b = b.max(v.norm());
                }
            }
            best
        })
        .collect()
}

/// `L^{p,q}_{1⊗m}` norm of a table from [`sup_transform`].
fn table_norm(table: &[Vec<f64>], grid: &Grid1D, stride: usize, p: Recip, q: Recip, w: &WeightSpec) -> f64 {
    let n = grid.n();
    let dual = grid.dual();
    let cell = (grid.dx() * stride as f64).powi(2);
    let inner: Vec<f64> = (0..n * n)
        .into_par_iter()
        .map(|c| {
            let m = w.eval(dual.point(c / n), dual.point(c % n));
            lp_norm(table.iter().map(|row| row[c]), p.as_f64(), cell) * m
        })
        .collect();
    lp_norm(inner.into_iter(), q.as_f64(), dual.dx() * dual.dx())
}

fn offsets(grid: &Grid1D) -> Vec<f64> {
    let n = grid.n() as i64;
    (0..2 * n).map(|i| (i - n) as f64 * grid.dx()).collect()
}

/// `|| sup_{z ∈ zGrid} |V_{Ψ_z}σ| ||_{L^{p,q}_{1⊗m}(ℝ⁴)}` with `m(u₂) = ⟨u₂₁⟩^{s1}⟨u₂₂⟩^{s2}`.
pub fn symbol_norm_supz(
    sigma: &SymbolGrid,
    phase: &PhaseSpec,
    p: Recip,
    q: Recip,
    w: &WeightSpec,
    z_grid: &[(f64, f64)],
    g: &Window,
    lattice: &SymbolLattice,
) -> Result<f64> {
    if z_grid.is_empty() {
        return Err(Error::parameter("zGrid must not be empty"));
    }
    let grid = lattice.grid()?;
    let sig = lattice_samples(sigma, &grid)?;
    let offs = offsets(&grid);
    let windows: Vec<_> = match phase.as_quadratic() {
        // Ψ_z does not depend on z.
        Some(_) => vec![psi_window(phase, g, z_grid[0]).sample_points(&offs, &offs)],
        None => z_grid
            .par_iter()
            .map(|&z| psi_window(phase, g, z).sample_points(&offs, &offs))
            .collect(),
    };
    let table = sup_transform(&sig, &windows, &grid, lattice.stride);
    Ok(table_norm(&table, &grid, lattice.stride, p, q, w))
}

/// `||σ||_{M^{p,q}_{1⊗m}(ℝ²)}` with the tensor window `g ⊗ g`, on the same lattice as
/// [`symbol_norm_supz`].
pub fn symbol_modulation_norm(
    sigma: &SymbolGrid,
    p: Recip,
    q: Recip,
    w: &WeightSpec,
    g: &Window,
    lattice: &SymbolLattice,
) -> Result<f64> {
    let grid = lattice.grid()?;
    let sig = lattice_samples(sigma, &grid)?;
    let offs = offsets(&grid);
    let gv: Vec<Complex64> = offs.iter().map(|&t| g.eval(t).conj()).collect();
    let window = Array2::from_shape_fn((offs.len(), offs.len()), |(i, j)| gv[i] * gv[j]);
    let table = sup_transform(&sig, &[window], &grid, lattice.stride);
    Ok(table_norm(&table, &grid, lattice.stride, p, q, w))
}

/// Exact factorization of the symbol modulation norm for tensor symbols,
/// `||σ_x ⊗ σ_η||_{M^{p,q}_{1⊗m}} = ||σ_x||_{M^{p,q}_{1⊗⟨·⟩^{s1}}} ||σ_η||_{M^{p,q}_{1⊗⟨·⟩^{s2}}}`,
/// each factor sampled on `grid`.
pub fn tensor_symbol_norm(
    desc: &SymbolDescriptor,
    p: Recip,
    q: Recip,
    w: &WeightSpec,
    grid: Grid1D,
    g: &Window,
) -> Result<f64> {
    let wx = WeightSpec::new(0.0, w.s1)?;
    let we = WeightSpec::new(0.0, w.s2)?;
    let a = modulation_norm(&desc.x.sample(grid)?, p, q, &wx, g)?.value;
    let b = modulation_norm(&desc.eta.sample(grid)?, p, q, &we, g)?.value;
    Ok(a * b)
}
