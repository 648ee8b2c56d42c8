//! Uniform periodic grids, sampled signals and the centered Fourier transform.
//!
//! A [`Grid1D`] with `n` samples and spacing `dx` covers `[-L/2, L/2)` with
//! `L = n dx`. Its dual grid has spacing `1/L` and covers `[-1/(2dx), 1/(2dx))`,
//! so `dx * dxi * n = 1` and both grids contain the origin at index `n/2`.
//!
//! The transform is the Riemann sum of `F f(xi) = ∫ f(x) e^{-2πi x xi} dx`, which
//! is exact (up to rounding) as an invertible map between the two grids.

mod io;

use std::ops::{Add, Mul, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use io::{read_signal_binary, read_signal_csv, write_signal_binary, write_signal_csv};

/// Relative tolerance used when comparing grid spacings.
const GRID_RTOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    n: usize,
    dx: f64,
}

impl Grid1D {
    /// Builds a centered grid of `n` points covering `[-extent/2, extent/2)`.
    pub fn new(n: usize, extent: f64) -> Result<Self> {
        if n < 2 || !n.is_power_of_two() {
            return Err(Error::parameter(format!(
                "sample count must be a power of two >= 2, got {n}"
            )));
        }
        if !(extent.is_finite() && extent > 0.0) {
            return Err(Error::parameter(format!(
                "extent must be positive and finite, got {extent}"
            )));
        }
        Ok(Grid1D {
            n,
            dx: extent / n as f64,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn extent(&self) -> f64 {
        self.n as f64 * self.dx
    }

    /// Spacing of the dual (frequency) grid, `1/L`.
    pub fn dxi(&self) -> f64 {
        1.0 / self.extent()
    }

    pub fn point(&self, k: usize) -> f64 {
        (k as f64 - (self.n / 2) as f64) * self.dx
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|k| self.point(k)).collect()
    }

    pub fn frequency(&self, j: usize) -> f64 {
        (j as f64 - (self.n / 2) as f64) * self.dxi()
    }

    pub fn frequencies(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.frequency(j)).collect()
    }

    /// The frequency grid viewed as a grid in its own right.
    pub fn dual(&self) -> Grid1D {
        Grid1D {
            n: self.n,
            dx: self.dxi(),
        }
    }

    /// Largest representable frequency magnitude, `1/(2dx)`.
    pub fn nyquist(&self) -> f64 {
        0.5 / self.dx
    }

    /// Index of `x` when it lies on the lattice (within `1e-9` cells).
    pub fn index_of(&self, x: f64) -> Option<usize> {
        let cell = x / self.dx + (self.n / 2) as f64;
        let k = cell.round();
        if (cell - k).abs() > 1e-9 || k < 0.0 || k >= self.n as f64 {
            return None;
        }
        Some(k as usize)
    }

    /// Index of `-x_k`, with the periodic identification of `-L/2` and `L/2`.
    pub fn negated_index(&self, k: usize) -> usize {
        (self.n - k) % self.n
    }

    /// Whether `x` lies in the covered interval `[-L/2, L/2]`.
    pub fn covers(&self, x: f64) -> bool {
        x.abs() <= 0.5 * self.extent() * (1.0 + GRID_RTOL)
    }

    pub fn same_as(&self, other: &Grid1D) -> bool {
        self.n == other.n && (self.dx - other.dx).abs() <= GRID_RTOL * self.dx.max(other.dx)
    }

    pub(crate) fn ensure_same(&self, other: &Grid1D, what: &str) -> Result<()> {
        if self.same_as(other) {
            Ok(())
        } else {
            Err(Error::shape(format!(
                "{what}: grids differ (n={}, dx={} vs n={}, dx={})",
                self.n, self.dx, other.n, other.dx
            )))
        }
    }
}

pub fn make_grid(n: usize, extent: f64) -> Result<Grid1D> {
    Grid1D::new(n, extent)
}

/// Complex samples of a function on a [`Grid1D`].
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    grid: Grid1D,
    samples: Vec<Complex64>,
}

impl Signal {
    pub fn new(grid: Grid1D, samples: Vec<Complex64>) -> Result<Self> {
        if samples.len() != grid.n() {
            return Err(Error::shape(format!(
                "expected {} samples, got {}",
                grid.n(),
                samples.len()
            )));
        }
        if let Some(k) = samples.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::Data(format!("non-finite sample at index {k}")));
        }
        Ok(Signal { grid, samples })
    }

    /// Samples `f` at the grid points. Non-finite values are rejected.
    pub fn from_fn(grid: Grid1D, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let samples = grid.points().into_iter().map(f).collect();
        Signal::new(grid, samples)
    }

    pub fn from_real_fn(grid: Grid1D, f: impl Fn(f64) -> f64) -> Result<Self> {
        Signal::from_fn(grid, |x| Complex64::new(f(x), 0.0))
    }

    pub fn zeros(grid: Grid1D) -> Self {
        Signal {
            grid,
            samples: vec![Complex64::new(0.0, 0.0); grid.n()],
        }
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn norm_l2(&self) -> f64 {
        (self.samples.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.grid.dx()).sqrt()
    }

    /// `dx`-weighted `L^p` norm; `inv_p = 1/p`, with `inv_p = 0` the sup norm.
    pub fn lp_norm(&self, inv_p: f64) -> f64 {
        lp_norm(self.samples.iter().map(|z| z.norm()), inv_p, self.grid.dx())
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `x ↦ f(-x)` on the same grid.
    pub fn parity(&self) -> Signal {
        let samples = (0..self.grid.n())
            .map(|k| self.samples[self.grid.negated_index(k)])
            .collect();
        Signal {
            grid: self.grid,
            samples,
        }
    }

    pub fn conj(&self) -> Signal {
        self.map(|z| z.conj())
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Signal {
        Signal {
            grid: self.grid,
            samples: self.samples.iter().map(|&z| f(z)).collect(),
        }
    }

    /// Pointwise product with a function of the grid coordinate.
    pub fn modulated(&self, f: impl Fn(f64) -> Complex64) -> Signal {
        let samples = self
            .samples
            .iter()
            .enumerate()
            .map(|(k, &z)| z * f(self.grid.point(k)))
            .collect();
        Signal {
            grid: self.grid,
            samples,
        }
    }

    /// Relative `L^2` distance `||self - other|| / ||other||`.
    pub fn rel_l2_error(&self, reference: &Signal) -> Result<f64> {
        self.grid.ensure_same(&reference.grid, "rel_l2_error")?;
        let diff: f64 = self
            .samples
            .iter()
            .zip(&reference.samples)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum();
        let base: f64 = reference.samples.iter().map(|z| z.norm_sqr()).sum();
        Ok(if base == 0.0 {
            diff.sqrt()
        } else {
            (diff / base).sqrt()
        })
    }

    pub fn max_abs_diff(&self, other: &Signal) -> Result<f64> {
        self.grid.ensure_same(&other.grid, "max_abs_diff")?;
        Ok(self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

impl Add<&Signal> for &Signal {
    type Output = Signal;

    fn add(self, rhs: &Signal) -> Signal {
        assert!(self.grid.same_as(&rhs.grid), "adding signals on different grids");
        Signal {
            grid: self.grid,
            samples: self.samples.iter().zip(&rhs.samples).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub<&Signal> for &Signal {
    type Output = Signal;

    fn sub(self, rhs: &Signal) -> Signal {
        assert!(self.grid.same_as(&rhs.grid), "subtracting signals on different grids");
        Signal {
            grid: self.grid,
            samples: self.samples.iter().zip(&rhs.samples).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul<Complex64> for &Signal {
    type Output = Signal;

    fn mul(self, rhs: Complex64) -> Signal {
        self.map(|z| z * rhs)
    }
}

/// Weighted discrete `L^p` norm of magnitudes; `inv_p = 0` is the maximum.
pub(crate) fn lp_norm(values: impl Iterator<Item = f64>, inv_p: f64, weight: f64) -> f64 {
    if inv_p == 0.0 {
        values.fold(0.0, f64::max)
    } else if inv_p == 1.0 {
        values.sum::<f64>() * weight
    } else if inv_p == 0.5 {
        (values.map(|v| v * v).sum::<f64>() * weight).sqrt()
    } else {
        let p = 1.0 / inv_p;
        (values.map(|v| v.powf(p)).sum::<f64>() * weight).powf(inv_p)
    }
}

/// `⟨f, g⟩ = Σ f(x_k) conj(g(x_k)) dx`.
pub fn inner(f: &Signal, g: &Signal) -> Result<Complex64> {
    f.grid.ensure_same(&g.grid, "inner")?;
    Ok(f.samples
        .iter()
        .zip(&g.samples)
        .map(|(a, b)| a * b.conj())
        .sum::<Complex64>()
        * f.grid.dx())
}

/// Forward transform; the result lives on `f.grid().dual()`.
pub fn fourier(f: &Signal) -> Signal {
    let mut buf = f.samples.clone();
    centered_dft(&mut buf, f.grid.dx(), Direction::Forward);
    Signal {
        grid: f.grid.dual(),
        samples: buf,
    }
}

/// Inverse transform `f(x) = ∫ F(xi) e^{2πi x xi} dxi`; the input grid is read as a
/// frequency grid and the result lives on its dual.
pub fn inverse_fourier(f: &Signal) -> Signal {
    let mut buf = f.samples.clone();
    centered_dft(&mut buf, f.grid.dx(), Direction::Inverse);
    Signal {
        grid: f.grid.dual(),
        samples: buf,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Direction {
    Forward,
    Inverse,
}

fn planner() -> &'static Mutex<FftPlanner<f64>> {
    static PLANNER: OnceLock<Mutex<FftPlanner<f64>>> = OnceLock::new();
    PLANNER.get_or_init(|| Mutex::new(FftPlanner::new()))
}

pub(crate) fn fft_plan(n: usize, direction: Direction) -> Arc<dyn Fft<f64>> {
    let mut planner = planner().lock().expect("fft planner poisoned");
    match direction {
        Direction::Forward => planner.plan_fft_forward(n),
        Direction::Inverse => planner.plan_fft_inverse(n),
    }
}

/// In-place centered transform with quadrature weight `weight`.
///
/// With `x_k = (k - n/2) dx` and `xi_j = (j - n/2)/(n dx)` the kernel factors as
/// `e^{∓2πi kj/n} (-1)^{k+j} e^{∓iπn/2}`, so a plain FFT between two sign flips.
pub(crate) fn centered_dft(buf: &mut [Complex64], weight: f64, direction: Direction) {
    let n = buf.len();
    let plan = fft_plan(n, direction);
    centered_dft_with(buf, weight, plan.as_ref());
}

/// Same as [`centered_dft`] with a caller-held plan, whose direction decides the sign.
pub(crate) fn centered_dft_with(buf: &mut [Complex64], weight: f64, plan: &dyn Fft<f64>) {
    let n = buf.len();
    for (k, z) in buf.iter_mut().enumerate() {
        if k % 2 == 1 {
            *z = -*z;
        }
    }
    plan.process(buf);
    // e^{∓iπn/2} is real for every power of two: -1 for n = 2, else 1.
    let global = Complex64::new(if (n / 2) % 2 == 1 { -weight } else { weight }, 0.0);
    for (j, z) in buf.iter_mut().enumerate() {
        *z *= if j % 2 == 1 { -global } else { global };
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn gaussian(grid: Grid1D) -> Signal {
        Signal::from_real_fn(grid, |x| (-PI * x * x).exp()).unwrap()
    }

    #[test]
    fn grid_arithmetic() {
        let g = make_grid(1024, 32.0).unwrap();
        assert_eq!(g.dx(), 1.0 / 32.0);
        assert_eq!(g.dxi(), 1.0 / 32.0);
        assert!((g.dx() * g.dxi() * g.n() as f64 - 1.0).abs() < 1e-15);

        let g = make_grid(2, 2.0).unwrap();
        assert_eq!(g.points(), vec![-1.0, 0.0]);
        assert_eq!(g.frequencies(), vec![-0.5, 0.0]);
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(matches!(make_grid(1000, 32.0), Err(Error::Parameter(_))));
        assert!(matches!(make_grid(1, 32.0), Err(Error::Parameter(_))));
        assert!(matches!(make_grid(64, 0.0), Err(Error::Parameter(_))));
        assert!(matches!(make_grid(64, -3.0), Err(Error::Parameter(_))));
    }

    #[test]
    fn signal_rejects_bad_samples() {
        let g = make_grid(4, 4.0).unwrap();
        assert!(matches!(Signal::new(g, vec![Complex64::new(1.0, 0.0); 3]), Err(Error::Shape(_))));
        let mut s = vec![Complex64::new(1.0, 0.0); 4];
        s[2].im = f64::NAN;
        assert!(matches!(Signal::new(g, s), Err(Error::Data(_))));
    }

    #[test]
    fn gaussian_is_fixed_point() {
        let g = make_grid(1024, 32.0).unwrap();
        let f = gaussian(g);
        let hat = fourier(&f);
        assert!(hat.grid().same_as(&g));
        assert!(hat.max_abs_diff(&f).unwrap() <= 1e-10);
    }

    #[test]
    fn small_grid_matches_direct_sum() {
        // n = 2 and n = 8 exercise the e^{-iπn/2} factor both ways.
        for n in [2usize, 4, 8] {
            let g = make_grid(n, 3.0).unwrap();
            let f = Signal::from_fn(g, |x| Complex64::new(x.sin() + 0.3, x * x)).unwrap();
            let hat = fourier(&f);
            for j in 0..n {
                let xi = g.frequency(j);
                let direct: Complex64 = (0..n)
                    .map(|k| f.samples()[k] * Complex64::from_polar(1.0, -2.0 * PI * g.point(k) * xi))
                    .sum::<Complex64>()
                    * g.dx();
                assert!((hat.samples()[j] - direct).norm() < 1e-12, "n={n} j={j}");
            }
        }
    }

    #[test]
    fn shift_becomes_modulation() {
        let g = make_grid(1024, 32.0).unwrap();
        let base = gaussian(g);
        let shifted = Signal::from_real_fn(g, |x| (-PI * (x - 1.0) * (x - 1.0)).exp()).unwrap();
        let lhs = fourier(&shifted);
        let rhs = fourier(&base).modulated(|eta| Complex64::from_polar(1.0, -2.0 * PI * eta));
        assert!(lhs.max_abs_diff(&rhs).unwrap() <= 1e-10);
    }

    #[test]
    fn parseval_and_double_transform() {
        let g = make_grid(1024, 32.0).unwrap();
        let f = Signal::from_fn(g, |x| {
            Complex64::new(-PI * x * x, -4.0 * PI * x * x).exp() * Complex64::new(1.0, 0.5)
                + Complex64::new(-PI * (x - 2.0) * (x - 2.0), 0.0).exp()
        })
        .unwrap();
        let hat = fourier(&f);
        let ff = inner(&f, &f).unwrap().re;
        assert!((inner(&hat, &hat).unwrap().re - ff).abs() <= 1e-12 * ff);
        assert!(fourier(&hat).rel_l2_error(&f.parity()).unwrap() <= 1e-10);
        assert!(inverse_fourier(&hat).rel_l2_error(&f).unwrap() <= 1e-10);
    }

    #[test]
    fn unit_gaussian_has_unit_norm() {
        // Independent check: composite Simpson rule on [-8, 8] of 2^{1/2} e^{-2πx²}.
        let m = 4000;
        let h = 16.0 / m as f64;
        let simpson: f64 = (0..=m)
            .map(|i| {
                let x = -8.0 + i as f64 * h;
                let w = if i == 0 || i == m { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
                w * 2f64.sqrt() * (-2.0 * PI * x * x).exp()
            })
            .sum::<f64>()
            * h
            / 3.0;
        assert!((simpson - 1.0).abs() < 1e-10);

        let g = make_grid(1024, 32.0).unwrap();
        let w = Signal::from_real_fn(g, |x| 2f64.powf(0.25) * (-PI * x * x).exp()).unwrap();
        let norm = inner(&w, &w).unwrap();
        assert!((norm.re - simpson).abs() <= 1e-10 && norm.im == 0.0);
    }

    #[test]
    fn inner_product_rules() {
        let g = make_grid(64, 8.0).unwrap();
        let f = Signal::from_fn(g, |x| Complex64::new(x.cos(), x.sin() * 0.2)).unwrap();
        let h = Signal::from_fn(g, |x| Complex64::new((-x * x).exp(), x)).unwrap();
        let c = Complex64::new(0.3, -1.7);
        assert_eq!(inner(&f, &Signal::zeros(g)).unwrap(), Complex64::new(0.0, 0.0));
        let lhs = inner(&f, &(&h * c)).unwrap();
        assert!((lhs - c.conj() * inner(&f, &h).unwrap()).norm() < 1e-12);
        assert!((inner(&f, &h).unwrap() - inner(&h, &f).unwrap().conj()).norm() < 1e-14);
        let other = make_grid(32, 8.0).unwrap();
        assert!(matches!(inner(&f, &Signal::zeros(other)), Err(Error::Shape(_))));
    }
}
