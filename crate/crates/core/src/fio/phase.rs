use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A user-supplied phase with its first and second derivatives.
pub trait PhaseFn: Send + Sync {
    fn value(&self, x: f64, eta: f64) -> f64;
    /// `(∂_x Φ, ∂_η Φ)`.
    fn gradient(&self, x: f64, eta: f64) -> (f64, f64);
    /// `[Φ_xx, Φ_xη, Φ_ηη]`.
    fn hessian(&self, x: f64, eta: f64) -> [f64; 3];
}

/// `Φ = xx·x²/2 + xeta·xη + etaeta·η²/2 + x·x + eta·η`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quadratic {
    pub xx: f64,
    pub xeta: f64,
    pub etaeta: f64,
    #[serde(default)]
    pub x: f64,
    #[serde(default)]
    pub eta: f64,
}

impl Quadratic {
    pub fn value(&self, x: f64, eta: f64) -> f64 {
        0.5 * self.xx * x * x + self.xeta * x * eta + 0.5 * self.etaeta * eta * eta + self.x * x + self.eta * eta
    }
}

/// Serializable phase identifiers, as used in configuration files.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PhaseId {
    KohnNirenberg,
    QuadraticChirp,
    SchrodingerFree,
    GeneralQuadratic(Quadratic),
}

#[derive(Clone)]
pub enum PhaseKind {
    /// `Φ = xη`.
    KohnNirenberg,
    /// `Φ = xη + x²/2`.
    QuadraticChirp,
    /// `Φ = xη + η²/2`.
    SchrodingerFree,
    GeneralQuadratic(Quadratic),
    Custom(Arc<dyn PhaseFn>),
}

#[derive(Clone)]
pub struct PhaseSpec {
    kind: PhaseKind,
}

impl fmt::Debug for PhaseSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            PhaseKind::Custom(_) => f.write_str("PhaseSpec(Custom)"),
            _ => write!(f, "PhaseSpec({:?})", self.as_quadratic().expect("builtin phases are quadratic")),
        }
    }
}

impl From<PhaseId> for PhaseSpec {
    fn from(id: PhaseId) -> Self {
        let kind = match id {
            PhaseId::KohnNirenberg => PhaseKind::KohnNirenberg,
            PhaseId::QuadraticChirp => PhaseKind::QuadraticChirp,
            PhaseId::SchrodingerFree => PhaseKind::SchrodingerFree,
            PhaseId::GeneralQuadratic(q) => PhaseKind::GeneralQuadratic(q),
        };
        PhaseSpec { kind }
    }
}

impl PhaseSpec {
    pub fn kohn_nirenberg() -> Self {
        PhaseSpec { kind: PhaseKind::KohnNirenberg }
    }

    pub fn quadratic_chirp() -> Self {
        PhaseSpec { kind: PhaseKind::QuadraticChirp }
    }

    pub fn schrodinger_free() -> Self {
        PhaseSpec { kind: PhaseKind::SchrodingerFree }
    }

    pub fn general_quadratic(q: Quadratic) -> Self {
        PhaseSpec { kind: PhaseKind::GeneralQuadratic(q) }
    }

    pub fn custom(f: Arc<dyn PhaseFn>) -> Self {
        PhaseSpec { kind: PhaseKind::Custom(f) }
    }

    pub fn kind(&self) -> &PhaseKind {
        &self.kind
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            PhaseKind::KohnNirenberg => "kohn-nirenberg",
            PhaseKind::QuadraticChirp => "quadratic-chirp",
            PhaseKind::SchrodingerFree => "schrodinger-free",
            PhaseKind::GeneralQuadratic(_) => "general-quadratic",
            PhaseKind::Custom(_) => "custom",
        }
    }

    /// Coefficients of every builtin phase; `None` for custom phases.
    pub fn as_quadratic(&self) -> Option<Quadratic> {
        let q = |xx, etaeta| Quadratic {
            xx,
            xeta: 1.0,
            etaeta,
            x: 0.0,
            eta: 0.0,
        };
        match &self.kind {
            PhaseKind::KohnNirenberg => Some(q(0.0, 0.0)),
            PhaseKind::QuadraticChirp => Some(q(1.0, 0.0)),
            PhaseKind::SchrodingerFree => Some(q(0.0, 1.0)),
            PhaseKind::GeneralQuadratic(c) => Some(*c),
            PhaseKind::Custom(_) => None,
        }
    }

    pub fn value(&self, x: f64, eta: f64) -> f64 {
        match &self.kind {
            PhaseKind::Custom(f) => f.value(x, eta),
            _ => self.as_quadratic().unwrap().value(x, eta),
        }
    }

    pub fn gradient(&self, x: f64, eta: f64) -> (f64, f64) {
        match &self.kind {
            PhaseKind::Custom(f) => f.gradient(x, eta),
            _ => {
                let c = self.as_quadratic().unwrap();
                (c.xx * x + c.xeta * eta + c.x, c.xeta * x + c.etaeta * eta + c.eta)
            }
        }
    }

    pub fn hessian(&self, x: f64, eta: f64) -> [f64; 3] {
        match &self.kind {
            PhaseKind::Custom(f) => f.hessian(x, eta),
            _ => {
                let c = self.as_quadratic().unwrap();
                [c.xx, c.xeta, c.etaeta]
            }
        }
    }

    /// Taylor remainder `Φ_{2,z}(ζ) = 2 Σ_{|α|=2} ∫_0^1 (1-t) ∂^αΦ(z+tζ) dt ζ^α/α!`,
    /// with the `t`-integral done by 16-point Gauss–Legendre.
    pub fn taylor_remainder(&self, z: (f64, f64), zeta: (f64, f64)) -> f64 {
        let mut acc = [0.0; 3];
        for &(t, w) in gauss_legendre_16() {
            let h = self.hessian(z.0 + t * zeta.0, z.1 + t * zeta.1);
            for i in 0..3 {
                acc[i] += w * (1.0 - t) * h[i];
            }
        }
        acc[0] * zeta.0 * zeta.0 + 2.0 * acc[1] * zeta.0 * zeta.1 + acc[2] * zeta.1 * zeta.1
    }
}

/// Nodes and weights of the 16-point Gauss–Legendre rule on `[0, 1]`.
pub fn gauss_legendre_16() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(16))
}

/// Newton iteration on `P_n` from Chebyshev initial guesses, mapped to `[0, 1]`.
fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut rule = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let step = p1 / dp;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.push((0.5 * (x + 1.0), 0.5 * w));
    }
    rule.sort_by(|a, b| a.0.total_cmp(&b.0));
    rule
}

/// Rectangle `[x0, x1] × [eta0, eta1]` on which phase conditions are sampled.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x: (f64, f64),
    pub eta: (f64, f64),
}

impl Default for Rect {
    fn default() -> Self {
        Rect {
            x: (-8.0, 8.0),
            eta: (-8.0, 8.0),
        }
    }
}

impl Rect {
    fn doubled(&self) -> Rect {
        let grow = |(a, b): (f64, f64)| {
            let (c, h) = (0.5 * (a + b), b - a);
            (c - h, c + h)
        };
        Rect {
            x: grow(self.x),
            eta: grow(self.eta),
        }
    }

    fn axis(range: (f64, f64)) -> Vec<f64> {
        (0..RECT_SAMPLES)
            .map(|i| range.0 + (range.1 - range.0) * i as f64 / (RECT_SAMPLES - 1) as f64)
            .collect()
    }
}

const RECT_SAMPLES: usize = 65;

/// A sampled structural condition. `witness` is the measured quantity; for the
/// gradient-oscillation conditions `witness_doubled` is the same sup over the
/// doubled rectangle, and the condition holds when it has stopped growing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Condition {
    pub holds: bool,
    pub witness: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_doubled: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PhaseReport {
    pub phase: String,
    pub rect: Rect,
    pub delta: f64,
    pub min_mixed_hessian_abs: f64,
    pub second_deriv_bound: f64,
    pub tame: bool,
    pub phasegrad: Condition,
    pub d2fix: Condition,
    pub detcond01: Condition,
    pub fase_bis: Condition,
}

fn oscillation(phase: &PhaseSpec, rect: &Rect, in_x: bool) -> f64 {
    // sup over (x, x', η) of |∂_xΦ(x,η) - ∂_xΦ(x',η)|, or the η-analogue.
    let (outer, inner) = if in_x {
        (Rect::axis(rect.eta), Rect::axis(rect.x))
    } else {
        (Rect::axis(rect.x), Rect::axis(rect.eta))
    };
    let mut worst: f64 = 0.0;
    for &o in &outer {
        let vals = inner.iter().map(|&i| {
            if in_x {
                phase.gradient(i, o).0
            } else {
                phase.gradient(o, i).1
            }
        });
        let (lo, hi) = vals.fold((f64::MAX, f64::MIN), |(lo, hi), v| (lo.min(v), hi.max(v)));
        worst = worst.max(hi - lo);
    }
    worst
}

/// Doubling the rectangle doubles the oscillation of a linearly growing gradient;
/// bounded gradients may still gain a little from finer coverage of their extrema.
const GROWTH: f64 = 1.25;

fn bounded_condition(phase: &PhaseSpec, rect: &Rect, in_x: bool) -> Condition {
    let w = oscillation(phase, rect, in_x);
    let w2 = oscillation(phase, &rect.doubled(), in_x);
    Condition {
        holds: w.is_finite() && w2 <= GROWTH * w + 1e-9,
        witness: w,
        witness_doubled: Some(w2),
    }
}

/// Samples Definition 2.1 and the extra phase conditions on `rect`.
pub fn check_tame(phase: &PhaseSpec, rect: Rect, delta: f64) -> Result<PhaseReport> {
    if !(delta > 0.0) {
        return Err(Error::parameter(format!("δ must be positive, got {delta}")));
    }
    let xs = Rect::axis(rect.x);
    let etas = Rect::axis(rect.eta);
    let mut min_abs = [f64::INFINITY; 3];
    let mut bound: f64 = 0.0;
    for &x in &xs {
        for &eta in &etas {
            let h = phase.hessian(x, eta);
            for i in 0..3 {
                min_abs[i] = min_abs[i].min(h[i].abs());
                bound = bound.max(h[i].abs());
            }
        }
    }
    let det_condition = |w: f64| Condition {
        holds: w >= delta,
        witness: w,
        witness_doubled: None,
    };
    Ok(PhaseReport {
        phase: phase.name().to_string(),
        rect,
        delta,
        min_mixed_hessian_abs: min_abs[1],
        second_deriv_bound: bound,
        tame: min_abs[1] >= delta && bound.is_finite(),
        phasegrad: bounded_condition(phase, &rect, true),
        d2fix: det_condition(min_abs[0]),
        detcond01: det_condition(min_abs[2]),
        fase_bis: bounded_condition(phase, &rect, false),
    })
}
