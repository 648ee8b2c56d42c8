//! Short-time Fourier transform on the full grid × dual-grid lattice.
//!
//! `V_g f(x, ω) = ∫ f(y) conj(g(y - x)) e^{-2πiωy} dy`, discretized with
//! periodic translates. Rows of [`StftMatrix`] are positions, columns frequencies.

use std::io::Write;

use ndarray::{Array2, Axis};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{centered_dft_with, fft_plan, fourier, inner, Direction, Grid1D, Signal};

/// A window counts as normalized when `| ||g|| - 1 | <= NORM_TOL`.
pub const NORM_TOL: f64 = 1e-10;
/// Required decay of `|g|` (relative to its peak) within `L/4` of the boundary.
pub const WINDOW_DECAY: f64 = 1e-14;

/// `amp · e^{-π a x²}` with `a > 0`, kept for exact off-lattice evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianShape {
    pub amp: f64,
    pub a: f64,
}

impl GaussianShape {
    pub fn eval(&self, x: f64) -> f64 {
        self.amp * (-std::f64::consts::PI * self.a * x * x).exp()
    }

    /// Fourier transform `amp a^{-1/2} e^{-π ξ²/a}`.
    pub fn eval_hat(&self, xi: f64) -> f64 {
        self.amp / self.a.sqrt() * (-std::f64::consts::PI * xi * xi / self.a).exp()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Window {
    signal: Signal,
    shape: Option<GaussianShape>,
    normalized: bool,
}

impl Window {
    /// Wraps sampled window data. Fails on the zero function or on a window
    /// that has not decayed near the boundary.
    pub fn new(signal: Signal) -> Result<Self> {
        let peak = signal.max_abs();
        if peak == 0.0 {
            return Err(Error::parameter("window must be nonzero"));
        }
        let quarter = 0.25 * signal.grid().extent();
        let edge = signal
            .samples()
            .iter()
            .enumerate()
            .filter(|(k, _)| signal.grid().point(*k).abs() >= quarter)
            .map(|(_, z)| z.norm())
            .fold(0.0, f64::max);
        if edge > WINDOW_DECAY * peak {
            return Err(Error::precondition(format!(
                "window is {:.3e} of its peak within L/4 of the boundary (limit {WINDOW_DECAY:e})",
                edge / peak
            )));
        }
        let normalized = (signal.norm_l2() - 1.0).abs() <= NORM_TOL;
        Ok(Window {
            signal,
            shape: None,
            normalized,
        })
    }

    /// The default window `2^{1/4} e^{-πx²}`.
    pub fn gaussian(grid: Grid1D) -> Result<Self> {
        Window::gaussian_width(grid, 1.0)
    }

    /// `(2a)^{1/4} e^{-πax²}`, unit norm in the continuum.
    pub fn gaussian_width(grid: Grid1D, a: f64) -> Result<Self> {
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::parameter(format!("gaussian width must be positive, got {a}")));
        }
        let shape = GaussianShape {
            amp: (2.0 * a).powf(0.25),
            a,
        };
        let mut w = Window::new(Signal::from_real_fn(grid, |x| shape.eval(x))?)?;
        w.shape = Some(shape);
        Ok(w)
    }

    pub fn signal(&self) -> &Signal {
        &self.signal
    }

    pub fn grid(&self) -> &Grid1D {
        self.signal.grid()
    }

    pub fn shape(&self) -> Option<GaussianShape> {
        self.shape
    }

    /// Short label recorded in norm reports.
    pub fn id(&self) -> String {
        match self.shape {
            Some(s) => format!("gaussian(a={})", s.a),
            None => "sampled".to_string(),
        }
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Rescaled copy with unit discrete norm.
    pub fn normalize(&self) -> Window {
        let c = 1.0 / self.signal.norm_l2();
        Window {
            signal: &self.signal * Complex64::new(c, 0.0),
            shape: self.shape.map(|s| GaussianShape { amp: s.amp * c, a: s.a }),
            normalized: true,
        }
    }

    /// `g(x)` anywhere: closed form when known, otherwise trigonometric interpolation.
    pub fn eval(&self, x: f64) -> Complex64 {
        if let Some(s) = self.shape {
            return Complex64::new(s.eval(x), 0.0);
        }
        let hat = fourier(&self.signal);
        let dxi = hat.grid().dx();
        hat.samples()
            .iter()
            .enumerate()
            .map(|(j, &c)| c * Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * x * hat.grid().point(j)))
            .sum::<Complex64>()
            * dxi
    }

    /// `ĝ(ξ)` anywhere: closed form when known, otherwise the direct quadrature sum.
    pub fn eval_hat(&self, xi: f64) -> Complex64 {
        if let Some(s) = self.shape {
            return Complex64::new(s.eval_hat(xi), 0.0);
        }
        let grid = self.signal.grid();
        self.signal
            .samples()
            .iter()
            .enumerate()
            .map(|(k, &c)| c * Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * grid.point(k) * xi))
            .sum::<Complex64>()
            * grid.dx()
    }

    /// Samples of `y ↦ g(y - x)` on the window's grid with periodic wrap.
    /// Lattice shifts are exact rolls; other shifts go through a spectral phase ramp.
    pub fn translated(&self, x: f64) -> Signal {
        let grid = *self.grid();
        let n = grid.n();
        if let Some(m) = grid.index_of(x) {
            let g = self.signal.samples();
            let samples = (0..n).map(|k| rolled(g, m, k)).collect();
            return Signal::new(grid, samples).expect("roll preserves validity");
        }
        let hat = fourier(&self.signal)
            .modulated(|xi| Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * xi * x));
        crate::grid::inverse_fourier(&hat)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StftMatrix {
    position: Grid1D,
    frequency: Grid1D,
    values: Array2<Complex64>,
}

impl StftMatrix {
    pub fn new(position: Grid1D, frequency: Grid1D, values: Array2<Complex64>) -> Result<Self> {
        if values.dim() != (position.n(), frequency.n()) {
            return Err(Error::shape(format!(
                "values are {:?}, grids need ({}, {})",
                values.dim(),
                position.n(),
                frequency.n()
            )));
        }
        if values.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::Data("non-finite STFT entry".into()));
        }
        Ok(StftMatrix {
            position,
            frequency,
            values,
        })
    }

    pub fn position_grid(&self) -> &Grid1D {
        &self.position
    }

    pub fn frequency_grid(&self) -> &Grid1D {
        &self.frequency
    }

    pub fn values(&self) -> &Array2<Complex64> {
        &self.values
    }

    pub fn magnitudes(&self) -> Array2<f64> {
        self.values.mapv(|z| z.norm())
    }

    /// `Σ |V|² dx dξ`.
    pub fn energy(&self) -> f64 {
        self.values.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.position.dx() * self.frequency.dx()
    }

    /// Rows `x, ω, re, im`.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["x", "omega", "re", "im"])?;
        for ((m, j), z) in self.values.indexed_iter() {
            w.write_record([
                format!("{:e}", self.position.point(m)),
                format!("{:e}", self.frequency.point(j)),
                format!("{:e}", z.re),
                format!("{:e}", z.im),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Rows `x, ω, abs` for plotting.
    pub fn write_magnitude_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["x", "omega", "abs"])?;
        for ((m, j), z) in self.values.indexed_iter() {
            w.write_record([
                format!("{:e}", self.position.point(m)),
                format!("{:e}", self.frequency.point(j)),
                format!("{:e}", z.norm()),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Translate of `g` by lattice index `m` with periodic wrap: entry `k` is `g(x_k - x_m)`.
fn rolled(g: &[Complex64], m: usize, k: usize) -> Complex64 {
    let n = g.len();
    g[(k + n + n / 2 - m) % n]
}

pub fn stft(f: &Signal, g: &Window) -> Result<StftMatrix> {
    let grid = *f.grid();
    grid.ensure_same(g.grid(), "stft")?;
    let n = grid.n();
    let plan = fft_plan(n, Direction::Forward);
    let fs = f.samples();
    let gs = g.signal().samples();
    let mut values = Array2::<Complex64>::zeros((n, n));
    values
        .axis_iter_mut(Axis(0))
        .into_par_iter()
        .enumerate()
        .for_each(|(m, mut row)| {
            let mut buf: Vec<Complex64> = (0..n).map(|k| fs[k] * rolled(gs, m, k).conj()).collect();
            centered_dft_with(&mut buf, grid.dx(), plan.as_ref());
            row.iter_mut().zip(buf).for_each(|(dst, v)| *dst = v);
        });
    Ok(StftMatrix {
        position: grid,
        frequency: grid.dual(),
        values,
    })
}

/// Inversion `f = ∬ V_g f(x,ω) M_ω T_x g dx dω`; needs a unit-norm window.
pub fn istft(v: &StftMatrix, g: &Window) -> Result<Signal> {
    if !g.is_normalized() {
        return Err(Error::precondition("istft needs a window with unit L² norm"));
    }
    let grid = v.position;
    grid.ensure_same(g.grid(), "istft")?;
    let n = grid.n();
    let plan = fft_plan(n, Direction::Inverse);
    let gs = g.signal().samples();
    let dxi = v.frequency.dx();
    let dx = grid.dx();
    let rows: Vec<Vec<Complex64>> = v
        .values
        .axis_iter(Axis(0))
        .into_par_iter()
        .enumerate()
        .map(|(m, row)| {
            let mut buf = row.to_vec();
            centered_dft_with(&mut buf, dxi, plan.as_ref());
            buf.iter_mut().enumerate().for_each(|(k, z)| *z *= rolled(gs, m, k) * dx);
            buf
        })
        .collect();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for row in rows {
        out.iter_mut().zip(row).for_each(|(o, z)| *o += z);
    }
    Signal::new(grid, out)
}

/// `⟨f, M_ω T_x g⟩` at a single phase-space point.
pub fn gabor_coefficient(f: &Signal, g: &Window, x: f64, omega: f64) -> Result<Complex64> {
    let grid = *f.grid();
    grid.ensure_same(g.grid(), "gabor_coefficient")?;
    if !grid.covers(x) || !grid.dual().covers(omega) {
        return Err(Error::domain(format!(
            "({x}, {omega}) lies outside [-{0}, {0}] × [-{1}, {1}]",
            0.5 * grid.extent(),
            grid.nyquist()
        )));
    }
    let atom = g
        .translated(x)
        .modulated(|y| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * omega * y));
    inner(f, &atom)
}

/// Right-hand side of the window-change bound (Lemma 2.2):
/// `|⟨γ, g1⟩|^{-1} (|V_{g1} f| * |V_{g0} γ|)` on the lattice, with cell weight `dx dξ`.
pub fn window_change_bound(f: &Signal, g0: &Window, g1: &Window, gamma: &Window) -> Result<Array2<f64>> {
    let pairing = inner(gamma.signal(), g1.signal())?;
    if pairing.norm() == 0.0 {
        return Err(Error::precondition("⟨γ, g1⟩ must be nonzero"));
    }
    let a = stft(f, g1)?.magnitudes();
    let b = stft(gamma.signal(), g0)?.magnitudes();
    let grid = *f.grid();
    let weight = grid.dx() * grid.dual().dx() / pairing.norm();
    Ok(periodic_convolution(&a, &b).mapv(|v| v * weight))
}

/// Centered periodic convolution `c[i,j] = Σ a[k,l] b[i-k+n/2, j-l+n/2]` via 2-D FFT.
pub(crate) fn periodic_convolution(a: &Array2<f64>, b: &Array2<f64>) -> Array2<f64> {
    let (n0, n1) = a.dim();
    let mut fa = a.mapv(|v| Complex64::new(v, 0.0));
    let mut fb = b.mapv(|v| Complex64::new(v, 0.0));
    fft2(&mut fa, Direction::Forward);
    fft2(&mut fb, Direction::Forward);
    let mut prod = &fa * &fb;
    fft2(&mut prod, Direction::Inverse);
    let scale = 1.0 / (n0 * n1) as f64;
    Array2::from_shape_fn((n0, n1), |(i, j)| {
        (prod[[(i + n0 / 2) % n0, (j + n1 / 2) % n1]].re * scale).max(0.0)
    })
}

/// Unnormalized 2-D FFT in place.
pub(crate) fn fft2(data: &mut Array2<Complex64>, direction: Direction) {
    for axis in [Axis(0), Axis(1)] {
        let n = data.len_of(axis);
        let plan = fft_plan(n, direction);
        let other = if axis == Axis(0) { Axis(1) } else { Axis(0) };
        data.axis_iter_mut(other).into_par_iter().for_each(|mut lane| {
            let mut buf = lane.to_vec();
            plan.process(&mut buf);
            lane.iter_mut().zip(buf).for_each(|(d, v)| *d = v);
        });
    }
}
