use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fio::PhaseId;
use crate::grid::Grid1D;
use crate::norms::{Recip, WeightSpec};

/// Sweeps outside this range need `acknowledge_aliasing`.
pub const LAMBDA_RANGE: (f64, f64) = (0.125, 8.0);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub n: usize,
    pub extent: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig { n: 2048, extent: 64.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub min: f64,
    pub max: f64,
    pub points: usize,
    #[serde(default = "yes")]
    pub geometric: bool,
}

fn yes() -> bool {
    true
}

impl Default for Sweep {
    /// `[1/8, 8]` with eight points per octave.
    fn default() -> Self {
        Sweep {
            min: 0.125,
            max: 8.0,
            points: 49,
            geometric: true,
        }
    }
}

impl Sweep {
    pub fn lambdas(&self) -> Vec<f64> {
        let m = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                let t = i as f64 / m;
                if self.geometric {
                    self.min * (self.max / self.min).powf(t)
                } else {
                    self.min + (self.max - self.min) * t
                }
            })
            .collect()
    }
}

/// λ intervals used for the limit fits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitWindows {
    pub small: (f64, f64),
    pub large: (f64, f64),
    pub bump: (f64, f64),
}

impl Default for FitWindows {
    fn default() -> Self {
        FitWindows {
            small: (0.125, 0.25),
            large: (4.0, 8.0),
            bump: (2.0, 8.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormSpec {
    pub p: Recip,
    pub q: Recip,
    #[serde(default)]
    pub s1: f64,
    #[serde(default)]
    pub s2: f64,
}

impl NormSpec {
    pub fn new(p: Recip, q: Recip) -> Self {
        NormSpec { p, q, s1: 0.0, s2: 0.0 }
    }

    pub fn weight(&self) -> Result<WeightSpec> {
        WeightSpec::new(self.s1, self.s2)
    }
}

impl Default for NormSpec {
    fn default() -> Self {
        NormSpec::new(Recip::HALF, Recip::HALF)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SymbolFamily {
    /// `σ_λ = φ_{λ/√2} ⊗ φ_{1/λ}`.
    GaussianPair,
    /// `σ ≡ 1`.
    One,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InputFamily {
    /// `φ_λ(x) = e^{-πλ²x²}`.
    DilatedGaussian,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub dir: Option<PathBuf>,
    pub prefix: Option<String>,
}

/// Experiment settings, read from JSON. Every field has a default.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, rename_all = "camelCase", deny_unknown_fields)]
pub struct ExperimentConfig {
    pub grid: GridConfig,
    pub sweep: Sweep,
    pub windows: FitWindows,
    pub phase: PhaseId,
    pub symbol: SymbolFamily,
    pub input: InputFamily,
    /// Norm in which the experiment measures its main quantity.
    pub norm: NormSpec,
    /// Symbol norm for operator scaling; defaults to `norm`.
    pub symbol_norm: Option<NormSpec>,
    /// Input norm for operator scaling; defaults to `norm`.
    pub input_norm: Option<NormSpec>,
    pub acknowledge_aliasing: bool,
    pub output: OutputSpec,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            grid: GridConfig::default(),
            sweep: Sweep::default(),
            windows: FitWindows::default(),
            phase: PhaseId::KohnNirenberg,
            symbol: SymbolFamily::GaussianPair,
            input: InputFamily::DilatedGaussian,
            norm: NormSpec::default(),
            symbol_norm: None,
            input_norm: None,
            acknowledge_aliasing: false,
            output: OutputSpec::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        ExperimentConfig::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn grid(&self) -> Result<Grid1D> {
        Grid1D::new(self.grid.n, self.grid.extent)
    }

    pub fn validate(&self) -> Result<()> {
        self.grid()?;
        let s = &self.sweep;
        if s.points < 4 || !(s.min > 0.0 && s.max > s.min && s.max.is_finite()) {
            return Err(Error::parameter(format!(
                "sweep needs 0 < min < max and at least 4 points, got [{}, {}] with {}",
                s.min, s.max, s.points
            )));
        }
        let outside = s.min < LAMBDA_RANGE.0 * (1.0 - 1e-12) || s.max > LAMBDA_RANGE.1 * (1.0 + 1e-12);
        if outside && !self.acknowledge_aliasing {
            return Err(Error::parameter(format!(
                "λ sweep [{}, {}] leaves [1/8, 8]; set acknowledgeAliasing to run it anyway",
                s.min, s.max
            )));
        }
        for (name, (a, b)) in [
            ("small", self.windows.small),
            ("large", self.windows.large),
            ("bump", self.windows.bump),
        ] {
            if !(a > 0.0 && b > a) {
                return Err(Error::parameter(format!("fit window {name} = [{a}, {b}] is empty")));
            }
        }
        for n in [Some(self.norm), self.symbol_norm, self.input_norm].into_iter().flatten() {
            n.weight()?;
        }
        Ok(())
    }

    /// Sweep points inside `[a, b]`, at least four of them.
    pub fn window_lambdas(&self, (a, b): (f64, f64)) -> Result<Vec<f64>> {
        let tol = 1e-9;
        let l: Vec<f64> = self
            .sweep
            .lambdas()
            .into_iter()
            .filter(|&x| x >= a * (1.0 - tol) && x <= b * (1.0 + tol))
            .collect();
        if l.len() < 4 {
            return Err(Error::parameter(format!(
                "fit window [{a}, {b}] holds {} sweep points; at least 4 are needed",
                l.len()
            )));
        }
        Ok(l)
    }
}
