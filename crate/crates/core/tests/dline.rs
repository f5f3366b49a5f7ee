use srsqueeze_core::dline::{doppler_width, rb_d_line_scan, HyperfineLine, PreparedScan, ScanConditions, HYPERFINE_INTENSITY_LIMIT};
use srsqueeze_core::dm::{self, Drive, LevelScheme, EPS_PROBE};
use srsqueeze_core::ValidityFlags;
use std::f64::consts::PI;

const MHZ: f64 = 2.0 * PI * 1e6;
const RB87_MASS: f64 = 86.909180527 * 1.66053906660e-27;

fn d1() -> HyperfineLine {
    HyperfineLine {
        jg: 0.5,
        je: 0.5,
        nuclear_spin: 1.5,
        wavelength: 794.978851e-9,
        gamma0: 5.75 * MHZ,
        mass: RB87_MASS,
        excited_shifts: vec![(1.0, -509.06 * MHZ), (2.0, 305.44 * MHZ)],
    }
}

fn conditions(power: f64) -> ScanConditions {
    ScanConditions {
        ground_f: 2.0,
        power,
        beam_diameter: 3e-4,
        density: 1e18,
        cell_length: 0.1,
        temperature: 309.0,
        doppler_width: Some(306.0 * MHZ),
        max_intensity: HYPERFINE_INTENSITY_LIMIT,
    }
}

#[test]
fn rubidium_doppler_width_near_room_temperature() {
    let ku = doppler_width(794.978851e-9, 309.0, RB87_MASS).unwrap();
    assert!((ku / (306.0 * MHZ) - 1.0).abs() < 5e-3, "{}", ku / MHZ);
}

#[test]
fn no_light_means_no_squeezing() {
    let rows = rb_d_line_scan(&d1(), &ScanConditions { doppler_width: Some(0.0), ..conditions(0.0) }, &[-50.0, 0.0, 50.0]).unwrap();
    for r in rows {
        assert_eq!(r.g_ell, 0.0);
        assert_eq!(r.squeezing_db, None);
        assert!(r.flags.contains(ValidityFlags::G_OVER_ALPHA_LOW));
        assert!(r.alpha_ell > 0.0);
    }
}

#[test]
fn intense_beam_is_flagged() {
    let cond = ScanConditions { max_intensity: 1e3, ..conditions(10e-3) };
    let row = PreparedScan::new(&d1(), &cond).unwrap().row(-200.0).unwrap();
    assert!(row.flags.contains(ValidityFlags::KAPPA_REGIME));
}

#[test]
fn spinless_nucleus_reduces_to_the_fine_structure_line() {
    let line = HyperfineLine { nuclear_spin: 0.0, excited_shifts: vec![(0.5, 0.0)], ..d1() };
    let cond = ScanConditions { ground_f: 0.5, doppler_width: Some(0.0), ..conditions(1e-4) };
    let scan = PreparedScan::new(&line, &cond).unwrap();
    let fine = LevelScheme::fine_structure(0.5, 0.5, scan.gamma / scan.gamma0, 1.0).unwrap();
    for x in [-30.0, 5.0, 40.0] {
        let got = scan.response(x).unwrap().response;
        let drive = Drive::from_kappa(&fine, scan.kappa, x, 0.0).unwrap();
        let want = dm::response(&fine, &drive, EPS_PROBE).unwrap();
        assert!((got.alpha / want.alpha - 1.0).abs() < 1e-9, "x={x}");
        assert!((got.g / want.g - 1.0).abs() < 1e-6, "x={x}");
    }
}
