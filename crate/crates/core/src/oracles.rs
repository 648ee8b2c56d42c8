//! Closed forms used as ground truth: Gaussian transforms, the chirped and
//! dilated Gaussian norm laws, and the limit exponents the experiments compare
//! against. Norm laws are the right-hand sides of `≍` statements, so numerics
//! are compared with them through slopes or bounded ratios only.

use num_complex::Complex64;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Grid1D, Signal};
use crate::norms::Recip;

use std::f64::consts::PI;

/// `amplitude · e^{-π(a+ib)|x|²}` on `ℝ^d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChirpedGaussian {
    pub amplitude: Complex64,
    pub a: f64,
    pub b: f64,
    pub d: u32,
}

impl ChirpedGaussian {
    pub fn new(amplitude: Complex64, a: f64, b: f64, d: u32) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::domain(format!("chirped Gaussian needs a > 0, got {a}")));
        }
        if d == 0 || !b.is_finite() || !(amplitude.re.is_finite() && amplitude.im.is_finite()) {
            return Err(Error::parameter("chirped Gaussian needs d >= 1 and finite parameters"));
        }
        Ok(ChirpedGaussian { amplitude, a, b, d })
    }

    /// `φ_λ(x) = e^{-πλ²|x|²}`.
    pub fn dilated(lambda: f64, d: u32) -> Result<Self> {
        ChirpedGaussian::new(Complex64::new(1.0, 0.0), lambda * lambda, 0.0, d)
    }

    pub fn z(&self) -> Complex64 {
        Complex64::new(self.a, self.b)
    }

    /// Value at a point with `|x|² = r2`.
    pub fn eval_sq(&self, r2: f64) -> Complex64 {
        self.amplitude * (-PI * self.z() * r2).exp()
    }

    /// Value at `x ∈ ℝ` (for `d = 1`).
    pub fn eval(&self, x: f64) -> Complex64 {
        self.eval_sq(x * x)
    }

    pub fn sample(&self, grid: Grid1D) -> Result<Signal> {
        Signal::from_fn(grid, |x| self.eval(x))
    }

    /// Modulation norm with the window `2^{1/4} e^{-πx²}` (per coordinate), in closed form.
    ///
    /// With `M = (a+1)² + b²`, `|V_g h(x,ω)| = C e^{-π(αx² + 2βxω + γω²)}` where
    /// `α = 1 - (a+1)/M`, `β = b/M`, `γ = (a+1)/M`, `C = 2^{1/4} M^{-1/4}`.
    pub fn gaussian_window_norm(&self, p: Recip, q: Recip) -> f64 {
        let m = (self.a + 1.0).powi(2) + self.b * self.b;
        let gamma = (self.a + 1.0) / m;
        let alpha = 1.0 - gamma;
        let beta = self.b / m;
        let det = alpha * gamma - beta * beta;
        let factor = |coef: f64, inv: f64| if inv == 0.0 { 1.0 } else { (coef / inv).powf(-0.5 * inv) };
        let one_dim = 2f64.powf(0.25) * m.powf(-0.25) * factor(alpha, p.as_f64()) * factor(det / alpha, q.as_f64());
        self.amplitude.norm() * one_dim.powi(self.d as i32)
    }
}

/// Right-hand side of Lemma 2.5:
/// `((a+1)²+b²)^{(d/2)(1/p-1/2)} / (a^{d/(2q)} (a(a+1)+b²)^{(d/2)(1/p-1/q)})`.
pub fn chirped_gaussian_norm_asymptotic(a: f64, b: f64, d: u32, p: Recip, q: Recip) -> Result<f64> {
    if !(a > 0.0) {
        return Err(Error::domain(format!("Lemma 2.5 needs a > 0, got {a}")));
    }
    let (ip, iq, d) = (p.as_f64(), q.as_f64(), d as f64);
    let num = ((a + 1.0).powi(2) + b * b).powf(0.5 * d * (ip - 0.5));
    let den = a.powf(0.5 * d * iq) * (a * (a + 1.0) + b * b).powf(0.5 * d * (ip - iq));
    Ok(num / den)
}

/// `λ^{-d/p} (1+λ)^{d(1/p+1/q-1)}`.
pub fn dilated_gaussian_norm_asymptotic(lambda: f64, d: u32, p: Recip, q: Recip) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::domain(format!("dilation needs λ > 0, got {lambda}")));
    }
    let (ip, iq, d) = (p.as_f64(), q.as_f64(), d as f64);
    Ok(lambda.powf(-d * ip) * (1.0 + lambda).powf(d * (ip + iq - 1.0)))
}

/// Exact limit exponents `(-d/r1, -d/r2')` of `||φ_λ||_{M^{r1,r2}}` as `λ → 0` and `λ → ∞`.
pub fn dilated_gaussian_limit_exponents_exact(r1: Recip, r2: Recip, d: u32) -> (Ratio<i64>, Ratio<i64>) {
    let d = Ratio::from_integer(d as i64);
    (-d * r1.value(), -d * r2.conjugate().value())
}

pub fn dilated_gaussian_limit_exponents(r1: Recip, r2: Recip, d: u32) -> (f64, f64) {
    let (s, l) = dilated_gaussian_limit_exponents_exact(r1, r2, d);
    (ratio_f64(s), ratio_f64(l))
}

/// Limit exponents of `||e^{-π(λ²+ib)|·|²}||_{M^{p,q}}` for fixed `b ≠ 0`, read off Lemma 2.5
/// with `a = λ²`: `(-d/q, -d/q')`.
pub fn chirped_gaussian_limit_exponents(q: Recip, d: u32) -> (Ratio<i64>, Ratio<i64>) {
    let d = Ratio::from_integer(d as i64);
    (-d * q.value(), -d * q.conjugate().value())
}

/// Small-λ exponent of `||e^{iπ|x|²} φ_λ|| / ||φ_λ||` in `M^{r1,r2}`: `d(1/r1 - 1/r2)`.
pub fn chirp_ratio_exponent(r1: Recip, r2: Recip, d: u32) -> Ratio<i64> {
    let (chirped, _) = chirped_gaussian_limit_exponents(r2, d);
    let (plain, _) = dilated_gaussian_limit_exponents_exact(r1, r2, d);
    chirped - plain
}

/// Small-λ exponent `d(1 - 1/p - 1/q)` of `||φ_{λ/√2} ⊗ φ_{1/λ}||_{M^{p,q}(ℝ^{2d})}`.
pub fn symbol_pair_exponent(p: Recip, q: Recip, d: u32) -> Ratio<i64> {
    Ratio::from_integer(d as i64) * (Ratio::from_integer(1) - p.value() - q.value())
}

/// Exponent `d(1/q - 1/2)` of `||F(h e^{-πiλ|·|²})||_{L^q}` as `λ → ∞`.
pub fn chirped_bump_exponent(q: Recip, d: u32) -> Ratio<i64> {
    Ratio::from_integer(d as i64) * (q.value() - Ratio::new(1, 2))
}

/// Exponent `d(1/t - 1/2)` of `||F^{-1}(e^{-πiλ|·|²} h²)||_{L^t}` as `λ → ∞`.
pub fn dispersed_bump_exponent(t: Recip, d: u32) -> Ratio<i64> {
    chirped_bump_exponent(t, d)
}

pub fn ratio_f64(r: Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// `Tφ_λ` for the free Schrödinger multiplier `e^{πi|η|²}`:
/// `(1 - iλ²)^{-d/2} e^{-πλ²|x|²/(1 - iλ²)}`.
pub fn schrodinger_on_gaussian(lambda: f64, d: u32) -> Result<ChirpedGaussian> {
    if !(lambda > 0.0) {
        return Err(Error::domain(format!("λ must be positive, got {lambda}")));
    }
    let l2 = lambda * lambda;
    let w = Complex64::new(1.0, -l2);
    let z = Complex64::new(l2, 0.0) / w;
    ChirpedGaussian::new(w.powf(-0.5 * d as f64), z.re, z.im, d)
}

/// `F(A e^{-πz|x|²}) = A z^{-d/2} e^{-π|ξ|²/z}`, principal branch.
pub fn gaussian_fourier(g: &ChirpedGaussian) -> ChirpedGaussian {
    let z = g.z();
    let inv = z.inv();
    ChirpedGaussian {
        amplitude: g.amplitude * z.powf(-0.5 * g.d as f64),
        a: inv.re,
        b: inv.im,
        d: g.d,
    }
}

/// The reference bump `e^{-1/(1-x²)}` on `(-1, 1)`, zero elsewhere.
pub fn bump(x: f64) -> f64 {
    if x.abs() < 1.0 {
        (-1.0 / (1.0 - x * x)).exp()
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{fourier, make_grid};
    use crate::norms::{modulation_norm, WeightSpec};
    use crate::tfa::Window;

    fn r(s: &str) -> Recip {
        s.parse().unwrap()
    }

    #[test]
    fn lemma_2_5_values() {
        assert!((chirped_gaussian_norm_asymptotic(1.0, 0.0, 1, r("2"), r("2")).unwrap() - 1.0).abs() < 1e-15);
        let v = chirped_gaussian_norm_asymptotic(1.0, 0.0, 1, r("1"), r("1")).unwrap();
        assert!((v - 2f64.sqrt()).abs() < 1e-15);
        for b in [-3.0, 0.0, 0.7, 4.0, 100.0] {
            assert_eq!(chirped_gaussian_norm_asymptotic(1.0, b, 1, r("2"), r("2")).unwrap(), 1.0);
            for a in [0.1, 0.5, 2.0] {
                let v = chirped_gaussian_norm_asymptotic(a, b, 3, r("2"), r("2")).unwrap();
                assert!((v - a.powf(-0.75)).abs() <= 1e-15 * v);
            }
        }
        assert!(matches!(chirped_gaussian_norm_asymptotic(0.0, 1.0, 1, r("1"), r("1")), Err(Error::Domain(_))));
    }

    #[test]
    fn dilation_law_values() {
        assert_eq!(dilated_gaussian_norm_asymptotic(1.0, 1, r("2"), r("2")).unwrap(), 1.0);
        assert!((dilated_gaussian_norm_asymptotic(2.0, 1, r("1"), r("1")).unwrap() - 1.5).abs() < 1e-15);
        assert!(dilated_gaussian_norm_asymptotic(-1.0, 1, r("1"), r("1")).is_err());
        // Leading small-λ term: the log-slope between 1e-8 and 1e-9 is -d/p.
        let (a, b) = (1e-9, 1e-8);
        let s = (dilated_gaussian_norm_asymptotic(b, 2, r("3"), r("1")).unwrap()
            / dilated_gaussian_norm_asymptotic(a, 2, r("3"), r("1")).unwrap())
        .ln()
            / (b / a).ln();
        assert!((s + 2.0 / 3.0).abs() < 1e-7);
    }

    #[test]
    fn limit_exponents() {
        assert_eq!(dilated_gaussian_limit_exponents(r("2"), r("2"), 1), (-0.5, -0.5));
        assert_eq!(dilated_gaussian_limit_exponents(r("1"), r("1"), 1), (-1.0, 0.0));
        assert_eq!(dilated_gaussian_limit_exponents(r("inf"), r("inf"), 1), (0.0, -1.0));
        assert_eq!(chirp_ratio_exponent(r("2"), r("1"), 1), Ratio::new(-1, 2));
        assert_eq!(chirp_ratio_exponent(r("1"), r("2"), 1), Ratio::new(1, 2));
        assert_eq!(symbol_pair_exponent(r("2"), r("2"), 1), Ratio::from_integer(0));
        assert_eq!(chirped_bump_exponent(r("1"), 1), Ratio::new(1, 2));
        assert_eq!(dispersed_bump_exponent(r("inf"), 1), Ratio::new(-1, 2));
    }

    #[test]
    fn schrodinger_closed_form() {
        let t = schrodinger_on_gaussian(1.0, 1).unwrap();
        let amp = Complex64::new(1.0, -1.0).powf(-0.5);
        assert!((t.amplitude - amp).norm() < 1e-15);
        assert!((t.a - 0.5).abs() < 1e-15 && (t.b - 0.5).abs() < 1e-15);
        let far = schrodinger_on_gaussian(1e4, 1).unwrap();
        assert!(far.a < 1e-7);
        assert!(schrodinger_on_gaussian(0.0, 1).is_err());
    }

    #[test]
    fn fourier_of_gaussians() {
        let unit = ChirpedGaussian::new(Complex64::new(1.0, 0.0), 1.0, 0.0, 1).unwrap();
        assert_eq!(gaussian_fourier(&unit), unit);

        let h = ChirpedGaussian::new(Complex64::new(0.5, 0.25), 1.0, 1.0, 1).unwrap();
        let twice = gaussian_fourier(&gaussian_fourier(&h));
        assert!((twice.amplitude - h.amplitude).norm() < 1e-15);
        assert!((twice.a - h.a).abs() < 1e-15 && (twice.b - h.b).abs() < 1e-15);

        let grid = make_grid(1024, 32.0).unwrap();
        let numeric = fourier(&h.sample(grid).unwrap());
        let exact = gaussian_fourier(&h).sample(*numeric.grid()).unwrap();
        assert!(numeric.rel_l2_error(&exact).unwrap() <= 1e-8);
    }

    #[test]
    fn closed_form_window_norm_matches_numerics() {
        let grid = make_grid(1024, 32.0).unwrap();
        let g = Window::gaussian(grid).unwrap();
        for (a, b) in [(1.0, 0.0), (0.5, 1.5), (2.0, -1.0)] {
            let h = ChirpedGaussian::new(Complex64::new(1.0, 0.0), a, b, 1).unwrap();
            let s = h.sample(grid).unwrap();
            for (p, q) in [("1", "1"), ("2", "2"), ("inf", "1"), ("1", "inf"), ("3", "3/2")] {
                let exact = h.gaussian_window_norm(r(p), r(q));
                let num = modulation_norm(&s, r(p), r(q), &WeightSpec::unweighted(), &g).unwrap().value;
                // A sup over the lattice misses an off-lattice ridge crest by O(dx²).
                let tol = if b != 0.0 && (p == "inf" || q == "inf") { 1e-3 } else { 1e-8 };
                assert!((num - exact).abs() <= tol * exact, "a={a} b={b} p={p} q={q}: {num} vs {exact}");
            }
        }
    }

    #[test]
    fn bump_is_smooth_and_supported() {
        assert_eq!(bump(1.0), 0.0);
        assert_eq!(bump(-1.5), 0.0);
        assert!((bump(0.0) - (-1.0f64).exp()).abs() < 1e-16);
        assert!(bump(0.999) < 1e-200);
    }
}
