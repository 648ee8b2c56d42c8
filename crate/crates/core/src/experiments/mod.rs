//! Scaling experiments: λ sweeps, log-log fits, and report export.

mod config;
mod runs;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use config::{ExperimentConfig, FitWindows, GridConfig, InputFamily, NormSpec, OutputSpec, Sweep, SymbolFamily};
pub use runs::{
    chirp_unboundedness_experiment, chirped_bump_experiment, compact_support_experiment, gaussian_dilation_experiment,
    operator_scaling_experiment, predicted_output_exponents, schrodinger_scaling_experiment, BumpReport, ChirpReport,
    ChiTruncation, DilationReport, OperatorReport, ScalingPair,
};

/// Least-squares fit of `log(value)` against `log(λ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub lambdas: Vec<f64>,
    pub values: Vec<f64>,
    pub slope: f64,
    pub intercept: f64,
    pub rsquared: f64,
}

pub fn fit_scaling(lambdas: &[f64], values: &[f64]) -> Result<ScalingFit> {
    if lambdas.len() != values.len() {
        return Err(Error::Data(format!(
            "{} λ values but {} samples",
            lambdas.len(),
            values.len()
        )));
    }
    if lambdas.len() < 4 {
        return Err(Error::Data(format!("a scaling fit needs at least 4 points, got {}", lambdas.len())));
    }
    if let Some(v) = values.iter().chain(lambdas).find(|v| !(**v > 0.0 && v.is_finite())) {
        return Err(Error::Data(format!("log-log fit needs positive finite data, got {v}")));
    }
    let xs: Vec<f64> = lambdas.iter().map(|l| l.ln()).collect();
    let ys: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Data("all λ values coincide".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rsquared = if syy <= 1e-28 * (1.0 + my * my) {
        1.0
    } else {
        (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0)
    };
    Ok(ScalingFit {
        lambdas: lambdas.to_vec(),
        values: values.to_vec(),
        slope,
        intercept,
        rsquared,
    })
}

/// One predicted-versus-fitted slope comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlopeCheck {
    pub experiment: String,
    pub predicted_slope: f64,
    pub fitted_slope: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl SlopeCheck {
    pub fn new(experiment: impl Into<String>, predicted: f64, fitted: f64, tolerance: f64) -> Self {
        SlopeCheck {
            experiment: experiment.into(),
            predicted_slope: predicted,
            fitted_slope: fitted,
            tolerance,
            pass: (fitted - predicted).abs() <= tolerance,
        }
    }
}

/// A named column of values against `λ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Series {
    pub name: String,
    pub lambdas: Vec<f64>,
    pub values: Vec<f64>,
}

/// What every experiment can export.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub checks: Vec<SlopeCheck>,
    pub warnings: Vec<String>,
    #[serde(skip)]
    pub series: Vec<Series>,
    pub details: serde_json::Value,
}

impl ExperimentReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// Columns `series, lambda, value`.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["series", "lambda", "value"])?;
        for s in &self.series {
            for (l, v) in s.lambdas.iter().zip(&s.values) {
                w.write_record([s.name.clone(), format!("{l:e}"), format!("{v:e}")])?;
            }
        }
        w.flush()?;
        Ok(())
    }

    /// Gnuplot data: one indexed block per series, separated by two blank lines.
    pub fn write_gnuplot<W: Write>(&self, mut w: W) -> Result<()> {
        for (i, s) in self.series.iter().enumerate() {
            if i > 0 {
                writeln!(w, "\n")?;
            }
            writeln!(w, "# {}\n# lambda value", s.name)?;
            for (l, v) in s.lambdas.iter().zip(&s.values) {
                writeln!(w, "{l:.17e} {v:.17e}")?;
            }
        }
        Ok(())
    }

    pub fn write_json<W: Write>(&self, w: W) -> Result<()> {
        serde_json::to_writer_pretty(w, self)?;
        Ok(())
    }

    /// Writes `<stem>.csv`, `<stem>.json`, and `<stem>.dat` into `dir`.
    pub fn export(&self, dir: &Path, stem: &str) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(dir)?;
        let paths: Vec<PathBuf> = ["csv", "json", "dat"].iter().map(|e| dir.join(format!("{stem}.{e}"))).collect();
        self.write_csv(fs::File::create(&paths[0])?)?;
        self.write_json(fs::File::create(&paths[1])?)?;
        self.write_gnuplot(fs::File::create(&paths[2])?)?;
        Ok(paths)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::Recip;
    use crate::oracles::dilated_gaussian_norm_asymptotic;
    use proptest::prelude::*;

    fn sweep(lo: f64, hi: f64) -> Vec<f64> {
        let k = (8.0 * (hi / lo).log2()).round() as i32;
        (0..=k).map(|i| lo * 2f64.powf(i as f64 / 8.0)).collect()
    }

    #[test]
    fn exact_power_and_constant() {
        let l = sweep(0.5, 4.0);
        let f = fit_scaling(&l, &l.iter().map(|x| x * x).collect::<Vec<_>>()).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-12);
        assert!((f.rsquared - 1.0).abs() < 1e-12);
        let c = fit_scaling(&l, &vec![3.0; l.len()]).unwrap();
        assert!(c.slope.abs() < 1e-14);
        assert_eq!(c.rsquared, 1.0);
    }

    #[test]
    fn oracle_slope_on_large_window() {
        // λ^{-1}(1+λ) has log-slope -1/(1+λ): about -0.15 on [4, 8], tending to 0.
        let (p, q) = (Recip::ONE, Recip::ONE);
        let eval = |l: &Vec<f64>| -> f64 {
            let v: Vec<f64> = l.iter().map(|&x| dilated_gaussian_norm_asymptotic(x, 1, p, q).unwrap()).collect();
            fit_scaling(l, &v).unwrap().slope
        };
        let s = eval(&sweep(4.0, 8.0));
        assert!((s + 0.152).abs() < 5e-3, "{s}");
        assert!(eval(&sweep(1024.0, 2048.0)).abs() < 2e-3);
    }

    #[test]
    fn rejects_bad_data() {
        let l = sweep(1.0, 2.0);
        let mut v = vec![1.0; l.len()];
        v[3] = 0.0;
        assert!(matches!(fit_scaling(&l, &v), Err(Error::Data(_))));
        assert!(fit_scaling(&l[..3], &v[..3]).is_err());
        assert!(fit_scaling(&l, &v[..4]).is_err());
    }

    proptest! {
        #[test]
        fn slope_invariant_under_scaling(c in 1e-6f64..1e6, e in -3.0f64..3.0, noise in proptest::collection::vec(-0.1f64..0.1, 9)) {
            let l = sweep(1.0, 2.0);
            let v: Vec<f64> = l.iter().zip(&noise).map(|(x, n)| x.powf(e) * n.exp()).collect();
            let a = fit_scaling(&l, &v).unwrap();
            let b = fit_scaling(&l, &v.iter().map(|x| x * c).collect::<Vec<_>>()).unwrap();
            prop_assert!((a.slope - b.slope).abs() < 1e-9);
            prop_assert!((0.0..=1.0).contains(&a.rsquared));
        }
    }

    #[test]
    fn report_exports() {
        let r = ExperimentReport {
            experiment: "demo".into(),
            checks: vec![SlopeCheck::new("demo", -0.5, -0.49, 0.05)],
            warnings: vec![],
            series: vec![Series {
                name: "norm".into(),
                lambdas: vec![1.0, 2.0],
                values: vec![1.0, 0.5],
            }],
            details: serde_json::Value::Null,
        };
        assert!(r.pass());
        let dir = tempfile::tempdir().unwrap();
        let paths = r.export(dir.path(), "demo").unwrap();
        let csv = fs::read_to_string(&paths[0]).unwrap();
        assert!(csv.starts_with("series,lambda,value\nnorm,1e0,1e0\n"));
        let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(&paths[1]).unwrap()).unwrap();
        assert_eq!(json["checks"][0]["predicted_slope"], -0.5);
        assert_eq!(json["checks"][0]["pass"], true);
        assert_eq!(fs::read_to_string(&paths[2]).unwrap().lines().count(), 4);
    }
}
