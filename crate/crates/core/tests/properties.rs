mod common;

use std::f64::consts::PI;

use common::*;
use proptest::prelude::*;
use spdc_oam::pgm::encode_pgm;
use spdc_oam::{
    detector_scan, expected_idler_charge, idler_wavelength, parse_pgm, shift_field,
    to_grayscale_bitmap, winding_number, ComplexField, DetectorScan, GridSpec, RealGrid,
    ScenarioConfig,
};

fn small() -> GridSpec {
    GridSpec::square(64, 8.0 * W0).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn shift_then_unshift_is_identity(dx in -1.5f64..1.5, dy in -1.5f64..1.5) {
        let f = lg(1, &small());
        let (dx, dy) = (dx * W0, dy * W0);
        let back = shift_field(&shift_field(&f, dx, dy).unwrap(), -dx, -dy).unwrap();
        let err = f
            .amplitude()
            .iter()
            .zip(back.amplitude())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        prop_assert!(err < 1e-9, "{err}");
        prop_assert!((back.total_power() - f.total_power()).abs() < 1e-9);
    }

    #[test]
    fn full_extent_scans_conserve_any_intensity(
        values in proptest::collection::vec(0.0f64..10.0, 48 * 48),
        nx in 8usize..=48,
        ny in 8usize..=48,
    ) {
        let r = RealGrid::new(GridSpec::square(48, 1.0).unwrap(), values).unwrap();
        let s = detector_scan(&r, nx, ny).unwrap();
        let total = r.integral();
        prop_assert!((s.integral() - total).abs() <= 1e-9 * total.max(1e-300));
        prop_assert!(s.min() >= 0.0);
    }

    #[test]
    fn bitmap_round_trips_through_the_parser(
        values in proptest::collection::vec(0.0f64..1.0, 1..200),
        width in 1usize..20,
    ) {
        let height = values.len().div_ceil(width);
        let mut values = values;
        values.resize(width * height, 0.5);
        let scan = DetectorScan { n_x: width, n_y: height, extent_x: 1.0, extent_y: 1.0, values };
        let bmp = to_grayscale_bitmap(&scan);
        let img = parse_pgm(&bmp.bytes).unwrap();
        prop_assert_eq!((img.width, img.height, img.maxval), (width, height, 255));
        let header = format!("P5\n{width} {height}\n255\n").len();
        let raw: Vec<u16> = bmp.bytes[header..].iter().map(|&b| b as u16).collect();
        prop_assert_eq!(img.pixels, raw);
    }

    #[test]
    fn encoded_images_decode_exactly(pixels in proptest::collection::vec(any::<u8>(), 1..300)) {
        let w = pixels.len();
        let img = parse_pgm(&encode_pgm(w, 1, &pixels)).unwrap();
        prop_assert_eq!(img.pixels, pixels.iter().map(|&p| p as u16).collect::<Vec<_>>());
    }

    #[test]
    fn parser_never_panics(data in proptest::collection::vec(any::<u8>(), 0..256)) {
        let _ = parse_pgm(&data);
        let mut framed = b"P5\n".to_vec();
        framed.extend_from_slice(&data);
        let _ = parse_pgm(&framed);
    }

    #[test]
    fn config_parser_never_panics(text in "\\PC{0,200}") {
        let _ = ScenarioConfig::from_json(&text);
    }

    #[test]
    fn winding_counts_constructed_vortices(
        m in -5i32..=5,
        cx in -1.0f64..1.0,
        cy in -1.0f64..1.0,
        radius in 0.3f64..1.5,
        offset in 0.0f64..(2.0 * PI),
    ) {
        let g = GridSpec::square(128, 8.0).unwrap();
        let phase = RealGrid::from_fn(g, |x, y| {
            let a = m as f64 * (y - cy).atan2(x - cx) + offset;
            a - 2.0 * PI * ((a + PI) / (2.0 * PI)).floor()
        });
        prop_assert_eq!(winding_number(&phase, (cx, cy), radius).unwrap(), m);
    }

    #[test]
    fn idler_wavelength_round_trips(pump in 200e-9f64..600e-9, ratio in 1.05f64..4.0) {
        let signal = pump * ratio;
        let idler = idler_wavelength(pump, signal).unwrap();
        prop_assert!(idler > pump);
        let back = 1.0 / (1.0 / idler + 1.0 / signal);
        prop_assert!((back / pump - 1.0).abs() < 1e-12);
    }

    #[test]
    fn charge_bookkeeping_is_antisymmetric(m_p in -50i32..50, m_s in -50i32..50) {
        prop_assert_eq!(expected_idler_charge(m_p, m_s), m_p - m_s);
        prop_assert_eq!(expected_idler_charge(-m_p, -m_s), -expected_idler_charge(m_p, m_s));
    }

    #[test]
    fn conjugation_is_an_involution(m in -3i32..=3) {
        let f: ComplexField = lg(m, &small());
        let twice = f.conjugate().conjugate();
        prop_assert_eq!(twice.amplitude(), f.amplitude());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn configs_survive_a_json_round_trip(
        m_p in -4i32..=4,
        m_s in -4i32..=4,
        seed in proptest::option::of(any::<u64>()),
        counts in 1.0f64..1e6,
        window in 1i32..32,
    ) {
        let mut cfg = ScenarioConfig::new(m_p, m_s);
        cfg.noise_seed = seed;
        cfg.mean_counts = Some(counts);
        cfg.charge_window = window;
        let back = ScenarioConfig::from_json(&cfg.to_json()).unwrap();
        prop_assert_eq!(back, cfg);
    }
}
