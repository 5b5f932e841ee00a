mod common;

use spdc_oam::scenario::{sweep, sweep_base, Product, ScenarioConfig, PRESETS};
use spdc_oam::{run_scenario, ErrorKind};
use std::path::PathBuf;

fn workspace_file(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../..")
        .join(rel)
}

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn blessing() -> bool {
    std::env::var_os("BLESS").is_some()
}

#[test]
fn pump_charge_reaches_the_idler() {
    let run = run_scenario(&ScenarioConfig::preset("default").unwrap()).unwrap();
    let r = &run.report;
    assert_eq!(r.expected_charge, 1);
    assert!(r.conserved(), "{:?}", r.measured);
    assert!(r.on_axis_ratio < 1e-10);
    assert!(r.warnings.is_empty(), "{:?}", r.warnings);
    assert_eq!(r.pump_fork.as_ref().unwrap().charge, 1);
    assert_eq!(r.scan_fork.as_ref().unwrap().charge, 1);
    assert_eq!(r.images.len(), 3);
}

#[test]
fn auxiliary_charge_reaches_the_idler_conjugated() {
    let r = run_scenario(&ScenarioConfig::new(0, 1)).unwrap().report;
    assert_eq!(r.expected_charge, -1);
    assert!(r.conserved(), "{:?}", r.measured);
    assert!(r.warnings.is_empty(), "{:?}", r.warnings);
    assert_eq!(r.images.len(), 1);
}

#[test]
fn gaussian_inputs_give_a_gaussian_idler() {
    let r = run_scenario(&ScenarioConfig::new(0, 0)).unwrap().report;
    assert_eq!(r.measured.spectrum, 0);
    assert_eq!(r.measured.winding, 0);
    assert_eq!(r.measured.fork, 0);
    assert!(r.idler_fork.singularity_location.is_none());
    assert_eq!(r.on_axis_ratio, 1.0);
}

#[test]
fn figure_four_patterns_are_mirror_images() {
    let a = run_scenario(&ScenarioConfig::preset("fig4a").unwrap()).unwrap();
    let b = run_scenario(&ScenarioConfig::preset("fig4b").unwrap()).unwrap();
    let d = b
        .idler_interferogram
        .max_relative_difference(&a.idler_interferogram.mirror_x());
    assert!(d < 1e-9, "{d:e}");
    assert_eq!(a.report.measured.fork, 1);
    assert_eq!(b.report.measured.fork, -1);
}

#[test]
fn runs_are_deterministic() {
    let mut cfg = ScenarioConfig::new(1, -1);
    cfg.mean_counts = Some(500.0);
    cfg.noise_seed = Some(9);
    let a = run_scenario(&cfg).unwrap();
    let b = run_scenario(&cfg).unwrap();
    assert_eq!(a.report, b.report);
    for (x, y) in a.images.iter().zip(&b.images) {
        assert_eq!(x.bitmap, y.bitmap);
    }
    cfg.noise_seed = Some(10);
    let c = run_scenario(&cfg).unwrap();
    assert_ne!(a.images[0].bitmap, c.images[0].bitmap);
}

#[test]
fn parallel_sweep_matches_serial_runs() {
    let mut base = sweep_base();
    base.mean_counts = Some(1000.0);
    base.noise_seed = Some(100);
    let runs = sweep(&base, -1..=1).unwrap();
    assert_eq!(runs.len(), 9);
    let mut k = 0;
    for m_p in -1..=1 {
        for m_s in -1..=1 {
            let mut cfg = base.clone();
            cfg.pump.charge = m_p;
            cfg.aux.charge = m_s;
            cfg.name = format!("p{m_p:+}_s{m_s:+}");
            cfg.noise_seed = Some(100 + k);
            let serial = run_scenario(&cfg).unwrap();
            assert_eq!(serial.report, runs[k as usize].report);
            assert_eq!(serial.images[0].bitmap, runs[k as usize].images[0].bitmap);
            k += 1;
        }
    }
}

#[test]
fn errors_keep_their_kind_under_context() {
    let mut cfg = ScenarioConfig::new(1, 0);
    cfg.michelson.tilt_x *= 4.0;
    let err = run_scenario(&cfg).unwrap_err();
    assert_eq!(err.kind(), ErrorKind::Sampling);
    assert!(err.to_string().contains("scenario"));

    let mut cfg = ScenarioConfig::new(1, 0);
    cfg.aux.wavelength = 400e-9;
    assert_eq!(run_scenario(&cfg).unwrap_err().kind(), ErrorKind::Config);
}

#[test]
fn shipped_configs_match_the_presets() {
    for name in PRESETS {
        let path = workspace_file(&format!("configs/{name}.json"));
        let preset = ScenarioConfig::preset(name).unwrap();
        if blessing() {
            std::fs::write(&path, preset.to_json() + "\n").unwrap();
        }
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(ScenarioConfig::from_json(&text).unwrap(), preset, "{name}");
    }
}

#[test]
fn figure_bitmaps_match_golden_files() {
    for name in ["fig2", "fig3a", "fig3b", "fig4a", "fig4b"] {
        let run = run_scenario(&ScenarioConfig::preset(name).unwrap()).unwrap();
        assert!(!run.images.is_empty());
        for (image, record) in run.images.iter().zip(&run.report.images) {
            let path = golden_dir().join(&record.file);
            if blessing() {
                std::fs::write(&path, &image.bitmap.bytes).unwrap();
            }
            let golden = std::fs::read(&path).unwrap();
            assert!(
                golden == image.bitmap.bytes,
                "{} differs from golden",
                record.file
            );
        }
    }
}

#[test]
fn figure_presets_read_the_reported_charges() {
    let fig2 = run_scenario(&ScenarioConfig::preset("fig2").unwrap())
        .unwrap()
        .report;
    let pump = fig2.pump_fork.unwrap();
    assert_eq!(pump.charge, 1);
    assert!(pump.axis_angle.abs() > 0.05);
    for (name, want) in [("fig3a", 1), ("fig3b", -1)] {
        let r = run_scenario(&ScenarioConfig::preset(name).unwrap())
            .unwrap()
            .report;
        assert_eq!(r.measured.spectrum, want);
        assert!(r.spectrum.is_some());
        assert_eq!(r.images[0].product, Product::IdlerIntensity);
    }
}
