use modfio_core::experiments::{
    chirp_unboundedness_experiment, gaussian_dilation_experiment, operator_scaling_experiment, SymbolFamily,
};
use modfio_core::{ExperimentConfig, PhaseId, Recip};

fn config() -> ExperimentConfig {
    ExperimentConfig::from_json(
        r#"{
            "grid": {"n": 1024, "extent": 64},
            "sweep": {"min": 0.125, "max": 8, "points": 49},
            "windows": {"small": [0.125, 0.25], "large": [4, 8], "bump": [2, 8]}
        }"#,
    )
    .unwrap()
}

#[test]
fn runs_are_deterministic() {
    let cfg = config();
    let a = gaussian_dilation_experiment(Recip::HALF, Recip::ONE, &cfg).unwrap();
    let b = gaussian_dilation_experiment(Recip::HALF, Recip::ONE, &cfg).unwrap();
    assert_eq!(a, b);
    assert!(a.report().pass());
}

#[test]
fn chirp_operator_output_follows_lemma_2_5() {
    let mut cfg = config();
    cfg.phase = PhaseId::QuadraticChirp;
    cfg.symbol = SymbolFamily::GaussianPair;
    let rep = operator_scaling_experiment(&cfg).unwrap();
    let out: Vec<_> = rep.checks.iter().filter(|c| c.experiment.contains("output")).collect();
    assert_eq!(out.len(), 2);
    assert!(out.iter().all(|c| c.pass), "{out:?}");
    assert_eq!(rep.predicted_output, Some((-0.5, -0.5)));
}

#[test]
fn chirp_ratio_sign_pattern() {
    let cfg = config();
    let rep = chirp_unboundedness_experiment(Recip::HALF, Recip::ONE, &cfg).unwrap();
    assert!(rep.blow_up_at_zero && !rep.predicted_bounded && rep.sign_pattern_ok);
    let rep = chirp_unboundedness_experiment(Recip::HALF, Recip::HALF, &cfg).unwrap();
    assert!(!rep.observed_unbounded && rep.predicted_bounded);
}

#[test]
fn export_writes_three_files() {
    let cfg = config();
    let rep = gaussian_dilation_experiment(Recip::ONE, Recip::ONE, &cfg).unwrap().report();
    let dir = tempfile::tempdir().unwrap();
    let paths = rep.export(dir.path(), "dil").unwrap();
    let csv = std::fs::read_to_string(&paths[0]).unwrap();
    assert_eq!(csv.lines().count(), 1 + 9 + 9);
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&paths[1]).unwrap()).unwrap();
    for key in ["experiment", "predicted_slope", "fitted_slope", "tolerance", "pass"] {
        assert!(json.to_string().contains(key), "{key}");
    }
}

#[test]
fn shipped_config_parses() {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/chirp-operator.json");
    let cfg = ExperimentConfig::load(&path).unwrap();
    assert_eq!(cfg.phase, PhaseId::QuadraticChirp);
    assert_eq!(cfg.output.prefix.as_deref(), Some("chirp-"));
}
