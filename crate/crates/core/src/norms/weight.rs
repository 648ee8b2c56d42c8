use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `⟨t⟩ = (1 + t²)^{1/2}`.
pub fn japanese(t: f64) -> f64 {
    (1.0 + t * t).sqrt()
}

/// The weight `v_{s1,s2}(x, ω) = ⟨x⟩^{s1} ⟨ω⟩^{s2}`. With `tensor` set it is read
/// as `1 ⊗ v_{s1,s2}`, constant in the leading variables.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightSpec {
    pub s1: f64,
    pub s2: f64,
    #[serde(default)]
    pub tensor: bool,
}

impl Default for WeightSpec {
    fn default() -> Self {
        WeightSpec::unweighted()
    }
}

impl WeightSpec {
    pub fn new(s1: f64, s2: f64) -> Result<Self> {
        let w = WeightSpec { s1, s2, tensor: false };
        w.validate()?;
        Ok(w)
    }

    pub fn unweighted() -> Self {
        WeightSpec {
            s1: 0.0,
            s2: 0.0,
            tensor: false,
        }
    }

    pub fn tensor(mut self) -> Self {
        self.tensor = true;
        self
    }

    pub fn is_trivial(&self) -> bool {
        self.s1 == 0.0 && self.s2 == 0.0
    }

    pub fn eval(&self, x: f64, omega: f64) -> f64 {
        if self.is_trivial() {
            return 1.0;
        }
        japanese(x).powf(self.s1) * japanese(omega).powf(self.s2)
    }

    /// Peetre constant `C` in `w(z + y) <= C ⟨z⟩^{|s1|+|s2|} w(y)`.
    pub fn moderate_constant(&self) -> f64 {
        2f64.powf(0.5 * (self.s1.abs() + self.s2.abs()))
    }

    /// Largest `w(z+y) / (⟨z⟩^s w(y))` over a probe set; a moderate weight stays
    /// below [`moderate_constant`](Self::moderate_constant).
    pub fn moderate_probe(&self, probe: &[f64]) -> f64 {
        let s = self.s1.abs() + self.s2.abs();
        let mut worst: f64 = 0.0;
        for &z1 in probe {
            for &z2 in probe {
                let vz = japanese((z1 * z1 + z2 * z2).sqrt()).powf(s);
                for &y1 in probe {
                    for &y2 in probe {
                        worst = worst.max(self.eval(z1 + y1, z2 + y2) / (vz * self.eval(y1, y2)));
                    }
                }
            }
        }
        worst
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.s1.is_finite() && self.s2.is_finite()) {
            return Err(Error::parameter("weight exponents must be finite"));
        }
        let probe = [-40.0, -7.5, -1.0, -0.25, 0.0, 0.5, 2.0, 9.0, 33.0];
        let ratio = self.moderate_probe(&probe);
        if ratio > self.moderate_constant() * (1.0 + 1e-12) {
            return Err(Error::parameter(format!(
                "weight ({}, {}) failed the moderateness probe ({ratio} > {})",
                self.s1,
                self.s2,
                self.moderate_constant()
            )));
        }
        Ok(())
    }
}
