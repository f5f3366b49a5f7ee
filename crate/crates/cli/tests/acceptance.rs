//! One line per acceptance criterion; exits non-zero if any fails.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use srsqueeze::config::AtomConfig;
use srsqueeze::montecarlo::quadrature_variances;
use srsqueeze_core::dline::{rb_d_line_scan, ScanConditions, HYPERFINE_INTENSITY_LIMIT};
use srsqueeze_core::dm::{self, doppler_average, DopplerOptions, Drive, LevelScheme, EPS_PROBE};
use srsqueeze_core::media::{depolarization_optimum, optimize_buffer_density, required_density, BufferGasSpec};
use srsqueeze_core::optimize::golden_section_max;
use srsqueeze_core::quadrature::{lossless_variance, min_variance, optimal_length, optimal_phase, squeezing_parameter, uncertainty_product, MinVarianceMode};
use srsqueeze_core::transitions::{
    optimal_detuning, optimal_detuning_for, optimal_thickness, response_x, squeezing_profile, SaturationPoint, SystemKind, TransitionSpec,
};

const MHZ: f64 = 2.0 * PI * 1e6;
const D1_WAVELENGTH: f64 = 794.978851e-9;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn log_points(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| 10f64.powf(a.log10() + (b.log10() - a.log10()) * k as f64 / (n - 1) as f64)).collect()
}

fn rel(a: f64, b: f64) -> f64 {
    (a / b - 1.0).abs()
}

fn headline() -> Outcome {
    let start = Instant::now();
    let kappa = 1e8;
    let spec = TransitionSpec::from_decay_rate(SystemKind::XHalfHalf, 1e-3, 1.0, D1_WAVELENGTH, 1e19).unwrap();
    let r = response_x(&spec, SaturationPoint::new(kappa, optimal_detuning(kappa)).unwrap()).unwrap();
    let s = squeezing_parameter(r.g, r.alpha).unwrap().s_db;
    let t = start.elapsed();
    outcome((s - 8.35).abs() <= 0.05 && t < Duration::from_secs(1), format!("X-system s at κ = 1e8: {s:.4} dB (8.35 ± 0.05) in {t:.2?} (< 1 s)"))
}

fn optical_depth() -> Outcome {
    let od = optimal_thickness(1e8);
    let n_cm3 = required_density(od, 0.1, D1_WAVELENGTH, 0.5, 0.5).unwrap() * 1e-6;
    let pass = rel(od, 1.58e5) <= 0.01 && 2e5 / od <= 1.3 && (n_cm3.log10() - 13.0).abs() <= 0.5;
    outcome(pass, format!("α₀ℓ_opt(1e8) = {od:.4e} (1.58e5 ± 1%, 2e5 within ×1.3); density for ℓ = 10 cm: {n_cm3:.3e} cm⁻³ (1e13 within ×√10)"))
}

fn analytic_closure() -> Outcome {
    let mut worst: f64 = 0.0;
    for system in [SystemKind::XHalfHalf, SystemKind::HalfThreeHalves] {
        for kappa in log_points(1e4, 1e9, 51) {
            let p = squeezing_profile(system, SaturationPoint::new(kappa, optimal_detuning_for(system, kappa)).unwrap());
            worst = worst.max(rel(p.s, (kappa / system.squeezing_constant()).powf(1.0 / 6.0)));
        }
    }
    outcome(worst < 0.01, format!("s(κ, Δ_opt) vs (κ/972)^(1/6) and (κ/7776)^(1/6), κ ∈ [1e4, 1e9]: max rel. error {worst:.3e} (< 1e-2)"))
}

fn quadrature_identities() -> Outcome {
    let (mut worst_min, mut worst_product): (f64, f64) = (0.0, 0.0);
    for g in log_points(0.1, 100.0, 61) {
        let n = 4000;
        let h = PI / n as f64;
        let k = (0..n).min_by(|&a, &b| lossless_variance(g, a as f64 * h).total_cmp(&lossless_variance(g, b as f64 * h))).unwrap();
        let (_, neg) = golden_section_max(|chi| -lossless_variance(g, chi), (k as f64 - 1.0) * h, (k as f64 + 1.0) * h, 1e-15);
        worst_min = worst_min.max(rel(-neg, min_variance(g, MinVarianceMode::Exact).value()));
        let chi = optimal_phase(g).chi;
        worst_product = worst_product.max((uncertainty_product(g, chi) - 1.0).abs());
    }
    outcome(
        worst_min <= 1e-10 && worst_product <= 1e-10,
        format!("grid minimum vs closed form, gℓ ∈ [0.1, 100]: {worst_min:.2e}; |v(χ_opt)·v(χ_opt + π/2) − 1|: {worst_product:.2e} (both ≤ 1e-10)"),
    )
}

fn loss_optimum() -> Outcome {
    let mut worst: f64 = 0.0;
    for ratio in log_points(10.0, 1e6, 51) {
        let alpha = 1.0;
        let g = ratio * alpha;
        let (log_ell, _) = golden_section_max(|t| -(4.0 / (g * 10f64.powf(t)).powi(2) + alpha * 10f64.powf(t)), -8.0, 2.0, 1e-14);
        worst = worst.max(rel(alpha * 10f64.powf(log_ell), optimal_length(g, alpha).unwrap()));
    }
    outcome(worst <= 1e-3, format!("numerical argmin of 4/(gℓ)² + αℓ vs 2(α/g)^(2/3), g/α ∈ [10, 1e6]: max rel. error {worst:.2e} (≤ 1e-3)"))
}

fn dm_oracle() -> Outcome {
    let start = Instant::now();
    let ratio = 1e-3;
    let (mut worst_a, mut worst_g): (f64, f64) = (0.0, 0.0);
    let mut pass = true;
    for system in [SystemKind::XHalfHalf, SystemKind::HalfThreeHalves] {
        let spec = TransitionSpec::from_decay_rate(system, ratio, 1.0, 1.0, 1.0).unwrap();
        let scheme = LevelScheme::fine_structure(0.5, system.je(), ratio, 1.0).unwrap();
        for kappa in [1e-2, 1.0, 1e2] {
            let width = (1.0 + ratio * kappa / 3.0).sqrt();
            for i in 0..21 {
                let x = (i as f64 - 10.0) * width;
                let r = dm::response(&scheme, &Drive::from_kappa(&scheme, kappa, x, 0.0).unwrap(), EPS_PROBE).unwrap();
                let a = srsqueeze_core::transitions::response(&spec, SaturationPoint::new(kappa, x).unwrap());
                let (alpha, g) = (a.alpha / a.alpha0, a.g / a.alpha0);
                worst_a = worst_a.max(rel(r.alpha, alpha));
                pass &= (r.alpha - alpha).abs() <= 0.05 * alpha;
                pass &= (r.g - g).abs() <= 0.05 * g.abs() + 1e-15;
                if g != 0.0 {
                    worst_g = worst_g.max(rel(r.g, g));
                }
            }
        }
    }
    let t = start.elapsed();
    outcome(
        pass && t < Duration::from_secs(30),
        format!("engine vs closed forms, both systems, κ ∈ {{1e-2, 1, 1e2}}: max rel. dev. α {worst_a:.2e}, g {worst_g:.2e} (≤ 5e-2) in {t:.2?} (< 30 s)"),
    )
}

fn monte_carlo() -> Outcome {
    let chis: Vec<f64> = (0..8).map(|k| k as f64 * PI / 8.0).collect();
    let mut worst: f64 = 0.0;
    for (seed, g) in [(1u64, 1.0), (2, 5.0)] {
        for (e, &chi) in quadrature_variances(g, 0.0, &chis, 1_000_000, seed).iter().zip(&chis) {
            worst = worst.max((e.variance - lossless_variance(g, chi)).abs() / e.std_error);
        }
    }
    outcome(worst <= 3.0, format!("1e6 samples, 8 phases, gℓ ∈ {{1, 5}}: max |Δ|/SE = {worst:.2} (≤ 3)"))
}

fn voigt(x: f64, w: f64) -> f64 {
    let half = 12.0 * w;
    let n = 400_000;
    let h = 2.0 * half / n as f64;
    let f = |s: f64| (-(s / w).powi(2)).exp() / (w * PI.sqrt()) / (1.0 + 4.0 * (x - s).powi(2));
    let mut sum = 0.5 * (f(-half) + f(half));
    for k in 1..n {
        sum += f(-half + k as f64 * h);
    }
    sum * h
}

fn doppler() -> Outcome {
    let weak = LevelScheme::fine_structure(0.5, 0.5, 1e-9, 1.0).unwrap();
    let mut worst_voigt: f64 = 0.0;
    for w in [0.5, 2.0] {
        for x in [0.0, 1.0, 3.0] {
            let avg = doppler_average(&weak, &Drive::new(0.0, x, 0.0).unwrap(), w, EPS_PROBE, DopplerOptions::default()).unwrap();
            worst_voigt = worst_voigt.max(rel(avg.response.alpha, voigt(x, w)));
        }
    }
    let scheme = LevelScheme::fine_structure(0.5, 0.5, 1e-3, 1.0).unwrap();
    let mut worst_sat: f64 = 0.0;
    let mut converged = true;
    for x in [optimal_detuning(1e4), 2.0 * optimal_detuning(1e4)] {
        let drive = Drive::from_kappa(&scheme, 1e4, x, 0.0).unwrap();
        let bare = dm::response(&scheme, &drive, EPS_PROBE).unwrap();
        let avg = doppler_average(&scheme, &drive, 1.0, EPS_PROBE, DopplerOptions::default()).unwrap();
        converged &= avg.converged;
        worst_sat = worst_sat.max(rel(avg.response.alpha, bare.alpha)).max(rel(avg.response.g, bare.g));
    }
    outcome(
        converged && worst_voigt <= 1e-3 && worst_sat < 0.02,
        format!("unsaturated average vs Voigt: {worst_voigt:.2e} (≤ 1e-3); κ = 1e4, ku = γ₀, Δ_opt and 2Δ_opt: change {worst_sat:.2e} (< 2e-2)"),
    )
}

fn rubidium_d1() -> Outcome {
    let start = Instant::now();
    let line = AtomConfig::bundled().line("d1").unwrap();
    let cond = ScanConditions {
        ground_f: 2.0,
        power: 10e-3,
        beam_diameter: 3e-4,
        density: 1e18,
        cell_length: 0.1,
        temperature: 309.0,
        doppler_width: Some(306.0 * MHZ),
        max_intensity: HYPERFINE_INTENSITY_LIMIT,
    };
    let grid: Vec<f64> = (-30..=30).map(|k| 10.0 * k as f64).collect();
    let rows = rb_d_line_scan(&line, &cond, &grid).unwrap();
    let best = rows.iter().filter_map(|r| r.squeezing_db.map(|s| (s, r.detuning_gamma0))).max_by(|a, b| a.0.total_cmp(&b.0)).unwrap();
    let t = start.elapsed();
    outcome(
        (best.0 - 6.0).abs() <= 1.5 && t < Duration::from_secs(300),
        format!("⁸⁷Rb D1 F = 2 scan, 10 mW, 0.03 cm, 1e12 cm⁻³, 10 cm: peak {:.2} dB at Δ = {} γ₀ (6 ± 1.5) in {t:.1?} (< 5 min)", best.0, best.1),
    )
}

fn buffer_gas() -> Outcome {
    let spec = BufferGasSpec::EXAMPLE;
    let gamma0 = 2.0 * PI * 5.75e6;
    let (_, rates) = optimize_buffer_density(&spec, gamma0, spec.free_transit_rate()).unwrap();
    let no_broadening = BufferGasSpec { a2: 0.0, ..spec };
    let (n, _) = optimize_buffer_density(&no_broadening, gamma0, no_broadening.free_transit_rate()).unwrap();
    let err = rel(n, depolarization_optimum(&no_broadening).unwrap());
    outcome(
        (2.0..=3.0).contains(&rates.kappa_ratio) && err <= 1e-3,
        format!("example constants: max κ′/κ = {:.3} ([2, 3]); a₂ = 0 optimum vs √(v/(3σx²a₁)): {err:.2e} (≤ 1e-3)", rates.kappa_ratio),
    )
}

fn main() {
    let criteria: [fn() -> Outcome; 10] =
        [headline, optical_depth, analytic_closure, quadrature_identities, loss_optimum, dm_oracle, monte_carlo, doppler, rubidium_d1, buffer_gas];
    let mut failed = 0;
    for (k, c) in criteria.iter().enumerate() {
        let o = c();
        failed += usize::from(!o.pass);
        println!("criterion {:>2} {} {}", k + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("acceptance: {} of {} passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
