use std::f64::consts::PI;
use std::io::{Read, Write};

use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Grid1D, Signal};
use crate::oracles::bump;

/// A one-variable factor of a tensor symbol.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Profile {
    /// `amp · e^{-π(a+ib)t²}`.
    Gaussian { amp: Complex64, a: f64, b: f64 },
    /// `amp · h(t/radius) · e^{-πi·chirp·t²}` with the reference bump `h`.
    Bump { amp: Complex64, radius: f64, chirp: f64 },
    Constant { value: Complex64 },
}

impl Profile {
    pub fn gaussian(a: f64) -> Profile {
        Profile::Gaussian {
            amp: Complex64::new(1.0, 0.0),
            a,
            b: 0.0,
        }
    }

    /// `φ_λ(t) = e^{-πλ²t²}`.
    pub fn dilated(lambda: f64) -> Profile {
        Profile::gaussian(lambda * lambda)
    }

    pub fn one() -> Profile {
        Profile::Constant {
            value: Complex64::new(1.0, 0.0),
        }
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        match *self {
            Profile::Gaussian { amp, a, b } => amp * (-PI * Complex64::new(a, b) * t * t).exp(),
            Profile::Bump { amp, radius, chirp } => {
                amp * bump(t / radius) * Complex64::from_polar(1.0, -PI * chirp * t * t)
            }
            Profile::Constant { value } => value,
        }
    }

    pub fn conj(&self) -> Profile {
        match *self {
            Profile::Gaussian { amp, a, b } => Profile::Gaussian { amp: amp.conj(), a, b: -b },
            Profile::Bump { amp, radius, chirp } => Profile::Bump {
                amp: amp.conj(),
                radius,
                chirp: -chirp,
            },
            Profile::Constant { value } => Profile::Constant { value: value.conj() },
        }
    }

    pub fn is_zero(&self) -> bool {
        match *self {
            Profile::Gaussian { amp, .. } | Profile::Bump { amp, .. } => amp == Complex64::new(0.0, 0.0),
            Profile::Constant { value } => value == Complex64::new(0.0, 0.0),
        }
    }

    /// `∫ |profile|²`, `None` when infinite.
    pub fn l2_norm(&self) -> Option<f64> {
        match *self {
            Profile::Gaussian { amp, a, .. } => Some(amp.norm() * (2.0 * a).powf(-0.25)),
            Profile::Bump { amp, radius, .. } => {
                let h = 1e-4;
                let s: f64 = (0..20_000).map(|i| bump(-1.0 + (i as f64 + 0.5) * h).powi(2)).sum::<f64>() * h;
                Some(amp.norm() * (s * radius).sqrt())
            }
            Profile::Constant { value } => (value.norm() == 0.0).then_some(0.0),
        }
    }

    pub fn sample(&self, grid: Grid1D) -> Result<Signal> {
        Signal::from_fn(grid, |t| self.eval(t))
    }
}

/// Closed-form symbols: tensor products `σ(x, η) = σ_x(x) σ_η(η)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymbolDescriptor {
    pub x: Profile,
    pub eta: Profile,
}

impl SymbolDescriptor {
    pub fn tensor(x: Profile, eta: Profile) -> Self {
        SymbolDescriptor { x, eta }
    }

    pub fn constant(c: Complex64) -> Self {
        SymbolDescriptor {
            x: Profile::Constant { value: c },
            eta: Profile::one(),
        }
    }

    /// `e^{-π(x²+η²)}`.
    pub fn standard_gaussian() -> Self {
        SymbolDescriptor::tensor(Profile::gaussian(1.0), Profile::gaussian(1.0))
    }

    /// `σ_λ = φ_{λ/√2} ⊗ φ_{1/λ}`.
    pub fn gaussian_pair(lambda: f64) -> Self {
        SymbolDescriptor::tensor(Profile::dilated(lambda / 2f64.sqrt()), Profile::dilated(1.0 / lambda))
    }

    pub fn eval(&self, x: f64, eta: f64) -> Complex64 {
        self.x.eval(x) * self.eta.eval(eta)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Source {
    Samples(Array2<Complex64>),
    ClosedForm(SymbolDescriptor),
}

/// A symbol `σ(x, η)` on a position grid × frequency grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolGrid {
    position: Grid1D,
    frequency: Grid1D,
    source: Source,
}

impl SymbolGrid {
    pub fn from_samples(position: Grid1D, frequency: Grid1D, values: Array2<Complex64>) -> Result<Self> {
        if values.dim() != (position.n(), frequency.n()) {
            return Err(Error::shape(format!(
                "symbol samples are {:?}, grids need ({}, {})",
                values.dim(),
                position.n(),
                frequency.n()
            )));
        }
        if values.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::Data("non-finite symbol sample".into()));
        }
        Ok(SymbolGrid {
            position,
            frequency,
            source: Source::Samples(values),
        })
    }

    /// A closed-form symbol viewed on `position × position.dual()`.
    pub fn closed_form(position: Grid1D, descriptor: SymbolDescriptor) -> Self {
        SymbolGrid {
            position,
            frequency: position.dual(),
            source: Source::ClosedForm(descriptor),
        }
    }

    pub fn position_grid(&self) -> &Grid1D {
        &self.position
    }

    pub fn frequency_grid(&self) -> &Grid1D {
        &self.frequency
    }

    pub fn descriptor(&self) -> Option<&SymbolDescriptor> {
        match &self.source {
            Source::ClosedForm(d) => Some(d),
            Source::Samples(_) => None,
        }
    }

    /// `σ(x, η)`: anywhere for closed forms, lattice points only for samples.
    pub fn eval(&self, x: f64, eta: f64) -> Result<Complex64> {
        match &self.source {
            Source::ClosedForm(d) => Ok(d.eval(x, eta)),
            Source::Samples(v) => match (self.position.index_of(x), self.frequency.index_of(eta)) {
                (Some(i), Some(j)) => Ok(v[[i, j]]),
                _ => Err(Error::domain(format!("({x}, {eta}) is not a lattice point of the sampled symbol"))),
            },
        }
    }

    pub fn samples(&self) -> Array2<Complex64> {
        match &self.source {
            Source::Samples(v) => v.clone(),
            Source::ClosedForm(d) => Array2::from_shape_fn((self.position.n(), self.frequency.n()), |(i, j)| {
                d.eval(self.position.point(i), self.frequency.point(j))
            }),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.source {
            Source::Samples(v) => v.iter().all(|z| z.norm() == 0.0),
            Source::ClosedForm(d) => d.x.is_zero() || d.eta.is_zero(),
        }
    }

    /// `||σ||_{L²(ℝ²)}`: exact for closed forms, a Riemann sum for samples.
    pub fn l2_norm(&self) -> Option<f64> {
        match &self.source {
            Source::ClosedForm(d) => {
                if self.is_zero() {
                    return Some(0.0);
                }
                Some(d.x.l2_norm()? * d.eta.l2_norm()?)
            }
            Source::Samples(v) => Some(
                (v.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.position.dx() * self.frequency.dx()).sqrt(),
            ),
        }
    }

    /// Rows `x, eta, re, im`.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["x", "eta", "re", "im"])?;
        for ((i, j), z) in self.samples().indexed_iter() {
            w.write_record([
                format!("{:e}", self.position.point(i)),
                format!("{:e}", self.frequency.point(j)),
                format!("{:e}", z.re),
                format!("{:e}", z.im),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads rows `x, eta, re, im` in row-major order (x outer).
    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut r = csv::Reader::from_reader(reader);
        let mut rows: Vec<[f64; 4]> = Vec::new();
        for rec in r.records() {
            let rec = rec?;
            if rec.len() != 4 {
                return Err(Error::Data(format!("expected 4 columns, got {}", rec.len())));
            }
            let mut row = [0.0; 4];
            for (i, v) in row.iter_mut().enumerate() {
                *v = rec[i].trim().parse().map_err(|e| Error::Data(format!("column {i}: {e}")))?;
            }
            rows.push(row);
        }
        let nf = rows.iter().take_while(|r| r[0] == rows[0][0]).count();
        if nf < 2 || !rows.len().is_multiple_of(nf) || rows.len() / nf < 2 {
            return Err(Error::Data("symbol CSV is not a full rectangular lattice".into()));
        }
        let np = rows.len() / nf;
        let position = Grid1D::new(np, (rows[nf][0] - rows[0][0]) * np as f64)?;
        let frequency = Grid1D::new(nf, (rows[1][1] - rows[0][1]) * nf as f64)?;
        let mut values = Array2::zeros((np, nf));
        for (idx, row) in rows.iter().enumerate() {
            let (i, j) = (idx / nf, idx % nf);
            let tol = 1e-9;
            if (row[0] - position.point(i)).abs() > tol * position.extent()
                || (row[1] - frequency.point(j)).abs() > tol * frequency.extent()
            {
                return Err(Error::Data(format!("row {idx} is off the centered lattice")));
            }
            values[[i, j]] = Complex64::new(row[2], row[3]);
        }
        SymbolGrid::from_samples(position, frequency, values)
    }
}

/// `σ ↦ conj(σ(-η, x))`, the symbol of the adjoint's amalgam representation.
pub fn adjoint_transform(sigma: &SymbolGrid) -> Result<SymbolGrid> {
    let (p, f) = (sigma.position, sigma.frequency);
    if p.n() != f.n() {
        return Err(Error::shape(format!(
            "adjoint transform needs a square grid, got {} × {}",
            p.n(),
            f.n()
        )));
    }
    match &sigma.source {
        // Builtin profiles are even, so conj(σ_x(-η)) needs no reflection.
        Source::ClosedForm(d) => Ok(SymbolGrid {
            position: f,
            frequency: p,
            source: Source::ClosedForm(SymbolDescriptor::tensor(d.eta.conj(), d.x.conj())),
        }),
        Source::Samples(v) => {
            let values = Array2::from_shape_fn((f.n(), p.n()), |(i, j)| v[[p.negated_index(j), i]].conj());
            SymbolGrid::from_samples(f, p, values)
        }
    }
}
