//! End-to-end acceptance run: criteria 1 through 9 at `n = 2048`, `L = 64`, `d = 1`.

use std::time::Instant;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::Result;
use crate::experiments::{
    chirp_unboundedness_experiment, chirped_bump_experiment, compact_support_experiment, gaussian_dilation_experiment,
    schrodinger_scaling_experiment, ExperimentConfig, SlopeCheck,
};
use crate::exponents::lattice_invariants;
use crate::fio::{apply_fio, gabor_matrix_direct, gabor_matrix_via_stft, PhaseSpec, SymbolDescriptor, SymbolGrid};
use crate::grid::Grid1D;
use crate::norms::{modulation_norm, Recip, WeightSpec};
use crate::oracles::{chirped_gaussian_norm_asymptotic, schrodinger_on_gaussian, ChirpedGaussian};
use crate::tfa::Window;

pub const CRITERIA: [u8; 9] = [1, 2, 3, 4, 5, 6, 7, 8, 9];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: String,
    pub pass: bool,
    pub seconds: f64,
    pub budget_seconds: f64,
    pub summary: String,
    pub checks: Vec<SlopeCheck>,
    pub details: serde_json::Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub pass: bool,
    pub seconds: f64,
    pub criteria: Vec<CriterionResult>,
}

struct Outcome {
    pass: bool,
    summary: String,
    checks: Vec<SlopeCheck>,
    details: serde_json::Value,
}

fn name_and_budget(id: u8) -> (&'static str, f64) {
    match id {
        1 => ("dilated-gaussian norms", 60.0),
        2 => ("chirped-gaussian oracle", 60.0),
        3 => ("gabor-matrix identity", 120.0),
        4 => ("closed-form operator outputs", 30.0),
        5 => ("exponent-calculus lattice", 10.0),
        6 => ("chirp multiplier sharpness", 60.0),
        7 => ("schrodinger multiplier scaling", 60.0),
        8 => ("chirped-bump laws", 60.0),
        9 => ("compact-support equivalence", 30.0),
        _ => ("unknown", 0.0),
    }
}

/// Runs one criterion. Errors are reported as a failing result, not propagated.
pub fn run_criterion(id: u8) -> CriterionResult {
    let (name, budget) = name_and_budget(id);
    let start = Instant::now();
    let outcome = match id {
        1 => criterion1(),
        2 => criterion2(),
        3 => criterion3(),
        4 => criterion4(),
        5 => criterion5(),
        6 => criterion6(),
        7 => criterion7(),
        8 => criterion8(),
        9 => criterion9(),
        _ => Err(crate::Error::parameter(format!("no acceptance criterion {id}"))),
    };
    let seconds = start.elapsed().as_secs_f64();
    let o = outcome.unwrap_or_else(|e| Outcome {
        pass: false,
        summary: format!("error: {e}"),
        checks: vec![],
        details: serde_json::Value::Null,
    });
    let in_time = seconds < budget;
    CriterionResult {
        id,
        name: name.to_string(),
        pass: o.pass && in_time,
        seconds,
        budget_seconds: budget,
        summary: if in_time {
            o.summary
        } else {
            format!("{}; over the {budget} s budget", o.summary)
        },
        checks: o.checks,
        details: o.details,
    }
}

pub fn verify_all() -> VerifyReport {
    let start = Instant::now();
    let criteria: Vec<CriterionResult> = CRITERIA.iter().map(|&id| run_criterion(id)).collect();
    VerifyReport {
        pass: criteria.iter().all(|c| c.pass),
        seconds: start.elapsed().as_secs_f64(),
        criteria,
    }
}

fn r(s: &str) -> Recip {
    s.parse().expect("literal exponent")
}

fn grid() -> Result<Grid1D> {
    ExperimentConfig::default().grid()
}

fn slope_outcome(checks: Vec<SlopeCheck>, extra: bool, details: serde_json::Value) -> Outcome {
    let failed = checks.iter().filter(|c| !c.pass).count();
    let worst = checks
        .iter()
        .map(|c| (c.fitted_slope - c.predicted_slope).abs())
        .fold(0.0, f64::max);
    Outcome {
        pass: failed == 0 && extra,
        summary: format!("{} slope checks, {failed} failed, worst deviation {worst:.4}", checks.len()),
        checks,
        details,
    }
}

fn criterion1() -> Result<Outcome> {
    let cfg = ExperimentConfig::default();
    let mut checks = Vec::new();
    for (a, b) in [("1", "1"), ("2", "2"), ("inf", "1"), ("1", "inf"), ("2", "1")] {
        checks.extend(gaussian_dilation_experiment(r(a), r(b), &cfg)?.checks);
    }
    Ok(slope_outcome(checks, true, serde_json::Value::Null))
}

fn criterion2() -> Result<Outcome> {
    let grid = grid()?;
    let g = Window::gaussian(grid)?;
    let w = WeightSpec::unweighted();
    let mut ratios = Vec::new();
    for a in [0.5, 1.0, 2.0] {
        for b in [0.0, 1.0, 4.0] {
            let h = ChirpedGaussian::new(Complex64::new(1.0, 0.0), a, b, 1)?.sample(grid)?;
            for (p, q) in [("1", "1"), ("2", "2"), ("inf", "1"), ("1", "inf")] {
                let num = modulation_norm(&h, r(p), r(q), &w, &g)?.value;
                ratios.push(num / chirped_gaussian_norm_asymptotic(a, b, 1, r(p), r(q))?);
            }
        }
    }
    let max = ratios.iter().copied().fold(f64::MIN, f64::max);
    let min = ratios.iter().copied().fold(f64::MAX, f64::min);
    let spread = max / min;
    let b_free = [0.0, 1.0, 4.0, 100.0].iter().all(|&b| {
        [0.5, 1.0, 2.0].iter().all(|&a| {
            chirped_gaussian_norm_asymptotic(a, b, 1, Recip::HALF, Recip::HALF).ok()
                == chirped_gaussian_norm_asymptotic(a, 0.0, 1, Recip::HALF, Recip::HALF).ok()
        })
    });
    Ok(Outcome {
        pass: spread <= 4.0 && b_free,
        summary: format!("{} ratios, spread {spread:.3}, b-independent at p = q = 2: {b_free}", ratios.len()),
        checks: vec![],
        details: json!({ "spread": spread, "min": min, "max": max, "bIndependent": b_free }),
    })
}

fn criterion3() -> Result<Outcome> {
    let g = Window::gaussian(grid()?)?;
    let sigma = SymbolGrid::closed_form(*g.grid(), SymbolDescriptor::standard_gaussian());
    let l = [-1.0, 0.0, 1.0];
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for phase in [PhaseSpec::kohn_nirenberg(), PhaseSpec::quadratic_chirp()] {
        for x in l {
            for w in l {
                for x2 in l {
                    for w2 in l {
                        let d = gabor_matrix_direct(&phase, &sigma, &g, (x, w), (x2, w2))?.norm();
                        let s = gabor_matrix_via_stft(&phase, &sigma, &g, (x, w), (x2, w2))?;
                        worst = worst.max((d - s).abs() / d.max(f64::MIN_POSITIVE));
                        count += 1;
                    }
                }
            }
        }
    }
    Ok(Outcome {
        pass: worst <= 1e-6,
        summary: format!("{count} tuples, worst relative deviation {worst:.2e}"),
        checks: vec![],
        details: json!({ "tuples": count, "worstRelative": worst }),
    })
}

fn criterion4() -> Result<Outcome> {
    let grid = grid()?;
    let one = SymbolGrid::closed_form(grid, SymbolDescriptor::constant(Complex64::new(1.0, 0.0)));
    let amp = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let mut rows = Vec::new();
    for lambda in [0.5, 1.0, 2.0] {
        let f = ChirpedGaussian::dilated(lambda, 1)?.sample(grid)?;
        let pair = SymbolGrid::closed_form(grid, SymbolDescriptor::gaussian_pair(lambda));
        let l2 = lambda * lambda;
        let cases = [
            ("chirp multiplier", PhaseSpec::quadratic_chirp(), &one, ChirpedGaussian::new(Complex64::new(1.0, 0.0), l2, -1.0, 1)?),
            ("free schrodinger", PhaseSpec::schrodinger_free(), &one, schrodinger_on_gaussian(lambda, 1)?),
            ("kohn-nirenberg pair", PhaseSpec::kohn_nirenberg(), &pair, ChirpedGaussian::new(amp, l2, 0.0, 1)?),
            ("chirp pair", PhaseSpec::quadratic_chirp(), &pair, ChirpedGaussian::new(amp, l2, -1.0, 1)?),
        ];
        for (name, phase, sigma, exact) in cases {
            let out = apply_fio(&phase, sigma, &f)?.signal;
            rows.push((name, lambda, out.rel_l2_error(&exact.sample(grid)?)?));
        }
    }
    let worst = rows.iter().map(|r| r.2).fold(0.0, f64::max);
    Ok(Outcome {
        pass: worst <= 1e-6,
        summary: format!("{} outputs, worst relative L² error {worst:.2e}", rows.len()),
        checks: vec![],
        details: json!(rows
            .iter()
            .map(|(n, l, e)| json!({ "case": n, "lambda": l, "relL2": e }))
            .collect::<Vec<_>>()),
    })
}

fn criterion5() -> Result<Outcome> {
    let inv = lattice_invariants(4);
    Ok(Outcome {
        pass: inv.violations() == 0,
        summary: format!("{} tuples, {} violations", inv.tuples, inv.violations()),
        checks: vec![],
        details: serde_json::to_value(&inv)?,
    })
}

fn criterion6() -> Result<Outcome> {
    let cfg = ExperimentConfig::default();
    let mut checks = Vec::new();
    let mut pattern = true;
    let mut details = Vec::new();
    for (a, b) in [("2", "1"), ("1", "2"), ("2", "2")] {
        let rep = chirp_unboundedness_experiment(r(a), r(b), &cfg)?;
        pattern &= rep.sign_pattern_ok;
        details.push(json!({
            "r1": a, "r2": b,
            "predictedBounded": rep.predicted_bounded,
            "observedUnbounded": rep.observed_unbounded,
            "blowUpAtZero": rep.blow_up_at_zero,
        }));
        checks.push(rep.check);
    }
    Ok(slope_outcome(checks, pattern, json!(details)))
}

fn criterion7() -> Result<Outcome> {
    let cfg = ExperimentConfig::default();
    let mut checks = Vec::new();
    let mut consistent = true;
    for (a, b) in [("2", "2"), ("1", "inf")] {
        let rep = schrodinger_scaling_experiment(r(a), r(b), &cfg)?;
        consistent &= rep.consistent;
        checks.extend(rep.checks.into_iter().filter(|c| c.experiment.contains("output")));
    }
    Ok(slope_outcome(checks, consistent, serde_json::Value::Null))
}

fn criterion8() -> Result<Outcome> {
    let cfg = ExperimentConfig::default();
    let mut checks = Vec::new();
    let mut chi = Vec::new();
    for (q, t1) in [("1", "2"), ("2", "inf"), ("inf", "2")] {
        let rep = chirped_bump_experiment(r(q), r(t1), &cfg)?;
        chi.push(json!({ "t1": t1, "n": rep.chi.n, "capturedMin": rep.chi.captured_min }));
        for c in rep.checks {
            if !checks.iter().any(|o: &SlopeCheck| o.experiment == c.experiment) {
                checks.push(c);
            }
        }
    }
    Ok(slope_outcome(checks, true, json!({ "chiTruncation": chi })))
}

fn criterion9() -> Result<Outcome> {
    let reports = compact_support_experiment(&ExperimentConfig::default())?;
    let spreads: Vec<Option<f64>> = reports.iter().map(|r| r.spread).collect();
    let worst = spreads.iter().map(|s| s.unwrap_or(f64::INFINITY)).fold(0.0, f64::max);
    Ok(Outcome {
        pass: worst <= 4.0,
        summary: format!("{} reports, largest spread {worst:.3}", reports.len()),
        checks: vec![],
        details: serde_json::to_value(&reports)?,
    })
}
