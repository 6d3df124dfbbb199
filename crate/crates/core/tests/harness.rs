//! End-to-end harness behavior: determinism, emitted files, config errors.

use zoll_core::forms3d::Generator;
use zoll_core::harness::{
    emit, records_csv, run_sweep, ExperimentConfig, Perturbation, Report, Summary, Verdict, CSV_HEADER,
};
use zoll_core::Error;

fn quick(amplitudes: &[f64]) -> ExperimentConfig {
    let mut cfg = ExperimentConfig {
        perturbation: Perturbation::Generator(Generator::HopfTilt),
        amplitudes: amplitudes.to_vec(),
        ..Default::default()
    };
    cfg.section.enabled = false;
    cfg
}

#[test]
fn sweep_is_bitwise_reproducible() {
    let cfg = quick(&[0.02, -0.02]);
    let a = records_csv(&run_sweep(&cfg).unwrap().records).unwrap();
    let b = records_csv(&run_sweep(&cfg).unwrap().records).unwrap();
    assert_eq!(a, b);
}

#[test]
fn emit_writes_one_row_per_amplitude() {
    let cfg = quick(&[0.0, -0.04, 0.04, 0.5, 0.01]);
    let sweep = run_sweep(&cfg).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let out = emit(dir.path(), &cfg, Report { records: &sweep.records, ..Default::default() }).unwrap();

    let csv = std::fs::read_to_string(out.records.unwrap()).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 6);
    assert_eq!(lines[0], CSV_HEADER.join(","));
    // Rows follow the schedule order regardless of worker scheduling.
    let eps: Vec<f64> = lines[1..].iter().map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
    assert_eq!(eps, cfg.amplitudes);

    let summary: Summary = serde_json::from_str(&std::fs::read_to_string(out.summary).unwrap()).unwrap();
    assert_eq!(summary.records, 5);
    assert_eq!(summary.config, cfg);
    assert_eq!(summary.verdicts["zoll_equality"], 1);
    assert_eq!(summary.verdicts["out_of_regime"], 1);
    assert_eq!(summary.verdicts["strict_inequality"], 3);
    assert_eq!(summary.exit_code, 2);
    assert_eq!(sweep.records[3].verdict, Verdict::OutOfRegime);
}

#[test]
fn unknown_config_key_reports_location() {
    let err = ExperimentConfig::from_json("{\n  \"lens_order\": 2,\n  \"amplitude\": [0.1]\n}").unwrap_err();
    match err {
        Error::Config { field, .. } => assert!(field.contains("line 3"), "{field}"),
        other => panic!("unexpected error {other}"),
    }
}

#[test]
fn non_invariant_profile_is_rejected() {
    let cfg = ExperimentConfig { lens_order: 2, ..quick(&[0.01]) };
    let cfg = ExperimentConfig { perturbation: Perturbation::Generator(Generator::Mixed), ..cfg };
    assert!(cfg.validate().is_err());
    assert!(run_sweep(&cfg).is_err());
}
