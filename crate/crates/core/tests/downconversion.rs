mod common;

use common::*;
use spdc_oam::{
    expected_idler_charge, idler_wavelength, oam_spectrum, stimulated_idler, synthesize_lg,
    total_power, CrystalConfig, GridSpec, LGModeSpec,
};

fn idler(m_p: i32, m_s: i32, g: &GridSpec) -> spdc_oam::ComplexField {
    let pump = synthesize_lg(&LGModeSpec::new(W0, m_p, PUMP), g).unwrap();
    let aux = synthesize_lg(&LGModeSpec::new(W0, m_s, AUX), g).unwrap();
    stimulated_idler(&pump, &aux, &CrystalConfig::default()).unwrap()
}

#[test]
fn charge_bookkeeping() {
    assert_eq!(expected_idler_charge(1, 0), 1);
    assert_eq!(expected_idler_charge(0, 1), -1);
    assert_eq!(expected_idler_charge(0, 0), 0);
}

#[test]
fn idler_wavelength_values() {
    let l = idler_wavelength(442e-9, 845e-9).unwrap();
    // 442 * 845 / 403 nm
    assert!((l / (373_490.0 / 403.0 * 1e-9) - 1.0).abs() < 1e-12, "{l}");
    assert!((920e-9..=935e-9).contains(&l));
    assert!((idler_wavelength(500e-9, 1000e-9).unwrap() - 1000e-9).abs() < 1e-21);
    let back = idler_wavelength(442e-9, l).unwrap();
    assert!((back / 845e-9 - 1.0).abs() < 1e-12);
}

#[test]
fn idler_charge_is_conserved_across_the_sweep() {
    let g = grid();
    for m_p in -2..=2 {
        for m_s in -2..=2 {
            let f = idler(m_p, m_s, &g);
            let s = oam_spectrum(&f, (0.0, 0.0), 8).unwrap();
            let want = m_p - m_s;
            assert_eq!(s.dominant_charge().unwrap(), want, "m_p={m_p} m_s={m_s}");
            assert!(
                s.fraction(want) >= 0.99,
                "m_p={m_p} m_s={m_s}: {}",
                s.fraction(want)
            );
        }
    }
}

#[test]
fn reported_cases() {
    let g = grid();
    for (m_p, m_s, want) in [(1, 0, 1), (0, 1, -1), (2, 1, 1)] {
        let s = oam_spectrum(&idler(m_p, m_s, &g), (0.0, 0.0), 8).unwrap();
        assert_eq!(s.dominant_charge().unwrap(), want);
    }
}

#[test]
fn idler_carries_the_idler_wavelength() {
    let f = idler(1, 0, &small_grid());
    assert_eq!(f.wavelength(), idler_wavelength(PUMP, AUX).unwrap());
}

#[test]
fn gaussian_inputs_give_an_on_axis_maximum() {
    let g = grid();
    let i = idler(0, 0, &g).intensity();
    let (ci, cj) = g.nearest(0.0, 0.0).unwrap();
    assert_eq!(i.at(ci, cj), i.max());
}

#[test]
fn vortex_idlers_are_dark_on_axis() {
    let g = grid();
    for (m_p, m_s) in [(1, 0), (0, 1), (2, 0), (1, -1)] {
        let i = idler(m_p, m_s, &g).intensity();
        let (ci, cj) = g.nearest(0.0, 0.0).unwrap();
        assert!(i.at(ci, cj) < 1e-10 * i.max());
    }
}

#[test]
fn power_scales_with_gain_squared() {
    let g = small_grid();
    let pump = lg(1, &g);
    let aux = synthesize_lg(&LGModeSpec::new(W0, 0, AUX), &g).unwrap();
    let p1 = total_power(&stimulated_idler(&pump, &aux, &CrystalConfig::default()).unwrap());
    let strong = CrystalConfig {
        gain: 3.0,
        ..CrystalConfig::default()
    };
    let p3 = total_power(&stimulated_idler(&pump, &aux, &strong).unwrap());
    assert!((p3 / p1 - 9.0).abs() < 1e-12);
}

#[test]
fn mirroring_the_idler_negates_its_charge() {
    let g = grid();
    for m in [1, -2, 3] {
        let f = idler(m, 0, &g).mirror_y();
        let s = oam_spectrum(&f, (0.0, 0.0), 8).unwrap();
        assert_eq!(s.dominant_charge().unwrap(), -m);
    }
}
