//! Weighted mixed norms `L^{p,q}_m` of STFT data, and the modulation and
//! Wiener-amalgam norms built on them.
//!
//! The inner `p`-norm runs over position for each frequency column, the outer
//! `q`-norm over frequency. Exponent `∞` is the maximum over samples.

mod recip;
mod weight;

use std::io::Write;

use ndarray::Axis;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{fourier, inverse_fourier, lp_norm, Signal};
use crate::tfa::{stft, StftMatrix, Window};

pub use recip::Recip;
pub use weight::{japanese, WeightSpec};

/// A computed modulation or amalgam norm with its provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormResult {
    pub value: f64,
    pub p: Recip,
    pub q: Recip,
    pub weight: WeightSpec,
    pub window: String,
    pub n: usize,
    pub extent: f64,
}

pub fn mixed_norm(v: &StftMatrix, p: Recip, q: Recip, w: &WeightSpec) -> f64 {
    let xs = v.position_grid().points();
    let dx = v.position_grid().dx();
    let fg = *v.frequency_grid();
    let (ip, iq) = (p.as_f64(), q.as_f64());
    let inner: Vec<f64> = v
        .values()
        .axis_iter(Axis(1))
        .into_par_iter()
        .enumerate()
        .map(|(j, col)| {
            let omega = fg.point(j);
            if w.is_trivial() {
                lp_norm(col.iter().map(|z| z.norm()), ip, dx)
            } else {
                lp_norm(col.iter().zip(&xs).map(|(z, &x)| z.norm() * w.eval(x, omega)), ip, dx)
            }
        })
        .collect();
    lp_norm(inner.into_iter(), iq, fg.dx())
}

/// Several norms of one signal from a single STFT.
pub fn modulation_norms(f: &Signal, g: &Window, specs: &[(Recip, Recip, WeightSpec)]) -> Result<Vec<NormResult>> {
    if !g.is_normalized() {
        return Err(Error::precondition("modulation norms use a unit-norm window"));
    }
    let v = stft(f, g)?;
    Ok(specs
        .iter()
        .map(|&(p, q, w)| NormResult {
            value: mixed_norm(&v, p, q, &w),
            p,
            q,
            weight: w,
            window: g.id(),
            n: f.grid().n(),
            extent: f.grid().extent(),
        })
        .collect())
}

pub fn modulation_norm(f: &Signal, p: Recip, q: Recip, w: &WeightSpec, g: &Window) -> Result<NormResult> {
    Ok(modulation_norms(f, g, &[(p, q, *w)])?.remove(0))
}

/// `||f||_{W(FL^p, L^q)} := ||F^{-1} f||_{M^{p,q}}`. The window lives on the grid of `F^{-1} f`.
pub fn amalgam_norm(f: &Signal, p: Recip, q: Recip, g: &Window) -> Result<NormResult> {
    modulation_norm(&inverse_fourier(f), p, q, &WeightSpec::unweighted(), g)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Localization {
    /// Compact support in `x`: compare with `||f̂||_{L^q}`.
    Loc,
    /// Compact support of `f̂`: compare with `||f||_{L^p}`.
    Loc2,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalizationEntry {
    pub p: Recip,
    pub modulation: f64,
    pub reference: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalizationReport {
    pub direction: Localization,
    pub q: Recip,
    pub radius: f64,
    pub entries: Vec<LocalizationEntry>,
    /// `max/min` of the ratios; `None` when some ratio is undefined (zero reference).
    pub spread: Option<f64>,
}

fn ensure_supported(s: &Signal, radius: f64, what: &str) -> Result<()> {
    let peak = s.max_abs();
    let tail = s
        .samples()
        .iter()
        .enumerate()
        .filter(|(k, _)| s.grid().point(*k).abs() > radius)
        .map(|(_, z)| z.norm())
        .fold(0.0, f64::max);
    if tail > 1e-12 * peak.max(f64::MIN_POSITIVE) && tail > 0.0 {
        return Err(Error::precondition(format!(
            "{what} exceeds 1e-12 of its peak outside radius {radius} (tail {tail:.3e})"
        )));
    }
    Ok(())
}

fn localization(
    direction: Localization,
    f: &Signal,
    radius: f64,
    q: Recip,
    p_grid: &[Recip],
    g: &Window,
    reference: impl Fn(Recip) -> f64,
) -> Result<LocalizationReport> {
    let specs: Vec<_> = p_grid.iter().map(|&p| (p, q, WeightSpec::unweighted())).collect();
    let norms = modulation_norms(f, g, &specs)?;
    let mut spread_ok = !p_grid.is_empty();
    let entries: Vec<LocalizationEntry> = norms
        .into_iter()
        .map(|r| {
            let reference = reference(r.p);
            let ratio = if reference > 0.0 {
                r.value / reference
            } else {
                spread_ok = false;
                0.0
            };
            LocalizationEntry {
                p: r.p,
                modulation: r.value,
                reference,
                ratio,
            }
        })
        .collect();
    let spread = spread_ok.then(|| {
        let max = entries.iter().map(|e| e.ratio).fold(f64::MIN, f64::max);
        let min = entries.iter().map(|e| e.ratio).fold(f64::MAX, f64::min);
        max / min
    });
    Ok(LocalizationReport {
        direction,
        q,
        radius,
        entries,
        spread,
    })
}

/// Lemma 2.4 (loc): `||f||_{M^{p,q}} ≍ ||f̂||_{L^q}` for `f` supported in `|x| <= radius`.
pub fn compact_support_norm_check(
    f: &Signal,
    support_radius: f64,
    q: Recip,
    p_grid: &[Recip],
    g: &Window,
) -> Result<LocalizationReport> {
    ensure_supported(f, support_radius, "signal")?;
    let hat_q = fourier(f).lp_norm(q.as_f64());
    localization(Localization::Loc, f, support_radius, q, p_grid, g, |_| hat_q)
}

/// Lemma 2.4 (loc2): `||f||_{M^{p,q}} ≍ ||f||_{L^p}` for `f̂` supported in `|ξ| <= radius`.
pub fn band_limited_norm_check(
    f: &Signal,
    band_radius: f64,
    q: Recip,
    p_grid: &[Recip],
    g: &Window,
) -> Result<LocalizationReport> {
    ensure_supported(&fourier(f), band_radius, "spectrum")?;
    localization(Localization::Loc2, f, band_radius, q, p_grid, g, |p| f.lp_norm(p.as_f64()))
}

/// Norm table with columns `p, q, s1, s2, value`.
pub fn write_norm_table_csv<W: Write>(rows: &[NormResult], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["p", "q", "s1", "s2", "value"])?;
    for r in rows {
        w.write_record([
            r.p.to_string(),
            r.q.to_string(),
            r.weight.s1.to_string(),
            r.weight.s2.to_string(),
            format!("{:e}", r.value),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;
    use ndarray::Array2;
    use num_complex::Complex64;
    use std::f64::consts::PI;

    fn inf() -> Recip {
        Recip::ZERO
    }

    #[test]
    fn separable_mixed_norms() {
        let gr = make_grid(256, 16.0).unwrap();
        let fg = gr.dual();
        let vals = Array2::from_shape_fn((256, 256), |(m, j)| {
            Complex64::new((-PI * gr.point(m).powi(2)).exp() * (-PI * fg.point(j).powi(2)).exp(), 0.0)
        });
        let v = StftMatrix::new(gr, fg, vals).unwrap();
        let w = WeightSpec::unweighted();
        assert!((mixed_norm(&v, Recip::ONE, Recip::ONE, &w) - 1.0).abs() <= 1e-8);
        let max = v.magnitudes().iter().cloned().fold(0.0, f64::max);
        assert_eq!(mixed_norm(&v, inf(), inf(), &w), max);

        let scaled = StftMatrix::new(gr, fg, v.values().mapv(|z| z * 3.0)).unwrap();
        for (p, q) in [(Recip::ONE, Recip::HALF), (inf(), Recip::ONE), (Recip::new(1, 3).unwrap(), inf())] {
            let (a, b) = (mixed_norm(&scaled, p, q, &w), 3.0 * mixed_norm(&v, p, q, &w));
            assert!((a - b).abs() <= 1e-14 * b, "{a} vs {b}");
        }
        let zero_weight = WeightSpec::new(0.0, 0.0).unwrap();
        assert_eq!(mixed_norm(&v, Recip::HALF, Recip::ONE, &zero_weight), mixed_norm(&v, Recip::HALF, Recip::ONE, &w));
    }

    #[test]
    fn energy_identity_and_amalgam_round_trip() {
        let gr = make_grid(512, 32.0).unwrap();
        let g = Window::gaussian(gr).unwrap();
        let phi = Signal::from_real_fn(gr, |x| (-PI * x * x).exp()).unwrap();
        let w = WeightSpec::unweighted();
        let m22 = modulation_norm(&phi, Recip::HALF, Recip::HALF, &w, &g).unwrap();
        assert!((m22.value - 2f64.powf(-0.25)).abs() <= 1e-6 * m22.value);

        let chirp = Signal::from_fn(gr, |x| Complex64::new(-PI * x * x, -PI * x * x).exp()).unwrap();
        let hat = fourier(&chirp);
        for (p, q) in [(Recip::ONE, Recip::ONE), (inf(), Recip::HALF)] {
            let direct = modulation_norm(&chirp, p, q, &w, &g).unwrap().value;
            let amal = amalgam_norm(&hat, p, q, &g).unwrap().value;
            assert!((direct - amal).abs() <= 1e-10 * direct);
        }
        let gh = amalgam_norm(&fourier(g.signal()), Recip::HALF, Recip::HALF, &g).unwrap().value;
        assert!((gh - 1.0).abs() <= 1e-6);
        assert_eq!(amalgam_norm(&Signal::zeros(gr.dual()), Recip::ONE, Recip::ONE, &g).unwrap().value, 0.0);
    }

    #[test]
    fn unnormalized_window_is_rejected() {
        let gr = make_grid(256, 16.0).unwrap();
        let g = Window::new(Signal::from_real_fn(gr, |x| 2.0 * (-PI * x * x).exp()).unwrap()).unwrap();
        let f = g.signal().clone();
        assert!(matches!(
            modulation_norm(&f, Recip::ONE, Recip::ONE, &WeightSpec::unweighted(), &g),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn zero_signal_flags_undefined_spread() {
        let gr = make_grid(256, 16.0).unwrap();
        let g = Window::gaussian(gr).unwrap();
        let r = compact_support_norm_check(&Signal::zeros(gr), 1.0, Recip::HALF, &[Recip::ONE, inf()], &g).unwrap();
        assert!(r.entries.iter().all(|e| e.modulation == 0.0 && e.ratio == 0.0));
        assert_eq!(r.spread, None);
    }

    #[test]
    fn support_violation_is_rejected() {
        let gr = make_grid(256, 16.0).unwrap();
        let g = Window::gaussian(gr).unwrap();
        let wide = Signal::from_real_fn(gr, |x| (-PI * x * x / 4.0).exp()).unwrap();
        assert!(matches!(
            compact_support_norm_check(&wide, 1.0, Recip::HALF, &[Recip::ONE], &g),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn csv_table() {
        let row = NormResult {
            value: 1.5,
            p: inf(),
            q: Recip::ONE,
            weight: WeightSpec::unweighted(),
            window: "gaussian(a=1)".into(),
            n: 8,
            extent: 4.0,
        };
        let mut buf = Vec::new();
        write_norm_table_csv(&[row], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "p,q,s1,s2,value\ninf,1,0,0,1.5e0\n");
    }
}
