use srsqueeze_core::dm::{self, doppler_average, DopplerOptions, Drive, LevelScheme, EPS_PROBE};
use srsqueeze_core::transitions::optimal_detuning;

/// Brute-force Voigt: trapezoidal convolution of the unit-height
/// Lorentzian 1/(1 + 4x²) with e^{−(s/w)²}/(w√π).
fn voigt(x: f64, w: f64) -> f64 {
    let half = 12.0 * w;
    let n = 400_000;
    let h = 2.0 * half / n as f64;
    let f = |s: f64| (-(s / w).powi(2)).exp() / (w * std::f64::consts::PI.sqrt()) / (1.0 + 4.0 * (x - s).powi(2));
    let mut sum = 0.5 * (f(-half) + f(half));
    for k in 1..n {
        sum += f(-half + k as f64 * h);
    }
    sum * h
}

#[test]
fn unsaturated_average_is_the_voigt_profile() {
    // γ ≪ γ₀ so the optical coherence decays at γ₀/2
    let scheme = LevelScheme::fine_structure(0.5, 0.5, 1e-9, 1.0).unwrap();
    for w in [0.5, 2.0] {
        for x in [0.0, 1.0, 3.0] {
            let avg = doppler_average(&scheme, &Drive::new(0.0, x, 0.0).unwrap(), w, EPS_PROBE, DopplerOptions::default()).unwrap();
            assert!(avg.converged);
            let expect = voigt(x, w);
            assert!((avg.response.alpha / expect - 1.0).abs() < 1e-3, "w={w} x={x}: {} vs {expect}", avg.response.alpha);
        }
    }
}

#[test]
fn narrow_doppler_width_leaves_power_broadened_response() {
    // ku = γ₀ against a power-broadened width of about 33 γ₀ at κ = 10⁴,
    // at and beyond the detuning that maximizes squeezing
    let scheme = LevelScheme::fine_structure(0.5, 0.5, 1e-3, 1.0).unwrap();
    let x_opt = optimal_detuning(1e4);
    for x in [x_opt, 2.0 * x_opt] {
        let drive = Drive::from_kappa(&scheme, 1e4, x, 0.0).unwrap();
        let bare = dm::response(&scheme, &drive, EPS_PROBE).unwrap();
        let avg = doppler_average(&scheme, &drive, 1.0, EPS_PROBE, DopplerOptions::default()).unwrap().into_converged().unwrap();
        assert!((avg.alpha / bare.alpha - 1.0).abs() < 0.02, "x={x}: α {} vs {}", avg.alpha, bare.alpha);
        assert!((avg.g / bare.g - 1.0).abs() < 0.02, "x={x}: g {} vs {}", avg.g, bare.g);
    }
}
