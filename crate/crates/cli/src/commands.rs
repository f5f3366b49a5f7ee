use std::collections::HashMap;
use std::f64::consts::PI;

use log::warn;
use rayon::prelude::*;
use srsqueeze_core::dline::{HyperfineLine, PreparedScan, ScanConditions};
use srsqueeze_core::dm::{self, doppler_average, DopplerOptions, Drive, LevelScheme, EPS_PROBE};
use srsqueeze_core::media::{buffer_rates, optimize_buffer_density};
use srsqueeze_core::optimize::log_grid;
use srsqueeze_core::quadrature::{lossless_variance, variance, QuadratureGeometry};
use srsqueeze_core::sweep::{analytic_sweep, linear_grid, optimize_analytic, optimize_squeezing, SqueezingOptimum, MIN_G_OVER_ALPHA};
use srsqueeze_core::transitions::{
    alpha0_for, field_amplitude_from_power, optimal_detuning_for, saturation_kappa, transit_rate, SystemKind, TransitionSpec,
};
use srsqueeze_core::ValidityFlags;

use crate::cli::{AnalyticArgs, BufferArgs, Cli, Command, DmArgs, DriveArgs, KappaScanArgs, ModelArg, OptimizeArgs, QuadratureArgs, SystemArg};
use crate::config::AtomConfig;
use crate::error::{CliError, Result};
use crate::montecarlo::quadrature_variances;
use crate::output::{emit, flags_to_string, BufferRow, Document, KappaRow, Metadata, OptimumRow, QuadratureRow, SweepRow};

const MHZ: f64 = 2.0 * PI * 1e6;
/// 1 mW/cm² in W/m².
const MW_PER_CM2: f64 = 10.0;

pub fn run(cli: &Cli) -> Result<()> {
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        pool = pool.num_threads(n);
    }
    let pool = pool.build().map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    pool.install(|| dispatch(cli))
}

fn dispatch(cli: &Cli) -> Result<()> {
    let config = || AtomConfig::load_or_bundled(cli.config.as_deref());
    let out = cli.output.as_deref();
    match &cli.command {
        Command::Quadrature(a) => emit(&quadrature(a, cli.seed)?, cli.format, out),
        Command::Analytic(a) => emit(&analytic(a, &config()?)?, cli.format, out),
        Command::Dm(a) => emit(&dm_scan(a, &config()?)?, cli.format, out),
        Command::KappaScan(a) => emit(&kappa_scan(a, &config()?)?, cli.format, out),
        Command::Buffer(a) => emit(&buffer(a, &config()?)?, cli.format, out),
        Command::Optimize(a) => emit(&optimize(a, &config()?)?, cli.format, out),
    }
}

pub fn quadrature(a: &QuadratureArgs, seed: u64) -> Result<Document<QuadratureRow>> {
    let geom = QuadratureGeometry::new(a.g_ell, a.alpha_ell)?;
    let chis = linear_grid(0.0, PI, a.points)?;
    let mc = match a.samples {
        Some(n) if n < 2 => return Err(CliError::Usage("--samples must be at least 2".into())),
        Some(n) => Some(quadrature_variances(a.g_ell, a.alpha_ell, &chis, n, seed)),
        None => None,
    };
    let rows = chis
        .iter()
        .enumerate()
        .map(|(k, &chi)| QuadratureRow {
            chi,
            variance: variance(&geom, chi).value(),
            lossless_variance: lossless_variance(a.g_ell, chi),
            mc_variance: mc.as_ref().map(|m| m[k].variance),
            mc_std_error: mc.as_ref().map(|m| m[k].std_error),
        })
        .collect();
    let mut meta = Metadata::new("quadrature").with("g_ell", a.g_ell).with("alpha_ell", a.alpha_ell);
    if let Some(n) = a.samples {
        meta = meta.with("samples", n as f64).with("seed", seed as f64);
    }
    Ok(Document { metadata: meta, rows })
}

fn system_of(s: SystemArg) -> SystemKind {
    match s {
        SystemArg::X => SystemKind::XHalfHalf,
        SystemArg::D2 => SystemKind::HalfThreeHalves,
    }
}

fn model_name(s: SystemKind) -> &'static str {
    match s {
        SystemKind::XHalfHalf => "analytic_x",
        SystemKind::HalfThreeHalves => "analytic_d2",
    }
}

/// κ, γ/γ₀ and the line for a closed-form model.
struct AnalyticSetup {
    kappa: f64,
    gamma_ratio: f64,
    line: HyperfineLine,
}

fn analytic_setup(system: SystemKind, d: &DriveArgs, cfg: &AtomConfig) -> Result<AnalyticSetup> {
    let default = match system {
        SystemKind::XHalfHalf => "d1",
        SystemKind::HalfThreeHalves => "d2",
    };
    let line = cfg.line(d.line.as_deref().unwrap_or(default))?;
    if line.jg != system.jg() || line.je != system.je() {
        warn!("line has J = {} → {}, model assumes {} → {}", line.jg, line.je, system.jg(), system.je());
    }
    let (kappa, gamma_ratio) = match (d.kappa, d.power) {
        (Some(k), _) => (k, d.gamma_ratio),
        (None, Some(p)) => {
            let gamma = transit_rate(d.temperature, line.mass, d.beam_diameter)?;
            let spec = TransitionSpec::from_decay_rate(system, gamma, line.gamma0, line.wavelength, 1.0)?;
            (saturation_kappa(&spec, field_amplitude_from_power(p, d.beam_diameter)?)?, gamma / line.gamma0)
        }
        (None, None) => return Err(CliError::Usage("give --kappa or --power".into())),
    };
    Ok(AnalyticSetup { kappa, gamma_ratio, line })
}

pub fn analytic(a: &AnalyticArgs, cfg: &AtomConfig) -> Result<Document<SweepRow>> {
    let system = system_of(a.system);
    let s = analytic_setup(system, &a.drive, cfg)?;
    let spec = TransitionSpec::from_decay_rate(system, s.gamma_ratio * s.line.gamma0, s.line.gamma0, s.line.wavelength, a.density)?;
    let grid = linear_grid(a.grid.from, a.grid.to, a.grid.points)?;
    let rows = analytic_sweep(&spec, s.kappa, a.cell_length, &grid)?;
    let meta = Metadata::new(model_name(system))
        .with("kappa", s.kappa)
        .with("gamma_ratio", s.gamma_ratio)
        .with("density_m3", a.density)
        .with("cell_length_m", a.cell_length);
    Ok(Document { metadata: meta, rows: rows.iter().map(SweepRow::from).collect() })
}

pub fn dm_scan(a: &DmArgs, cfg: &AtomConfig) -> Result<Document<SweepRow>> {
    let l = &a.line;
    let line = cfg.line(&l.line)?;
    let cond = ScanConditions {
        ground_f: l.ground_f,
        power: l.power,
        beam_diameter: l.beam_diameter,
        density: a.density,
        cell_length: a.cell_length,
        temperature: l.temperature,
        doppler_width: l.doppler_width_mhz.map(|w| w * MHZ),
        max_intensity: l.max_intensity_mw_cm2 * MW_PER_CM2,
    };
    let scan = PreparedScan::new(&line, &cond)?;
    let grid = linear_grid(a.grid.from, a.grid.to, a.grid.points)?;
    let rows: Vec<_> = grid.par_iter().map(|&x| scan.row(x)).collect::<srsqueeze_core::Result<_>>()?;
    let unconverged = rows.iter().filter(|r| r.flags.contains(ValidityFlags::DOPPLER_UNCONVERGED)).count();
    if unconverged > 0 {
        warn!("{unconverged} rows missed the Doppler tolerance and are flagged");
    }
    if scan.intensity > cond.max_intensity {
        warn!("intensity {:.3e} mW/cm² exceeds the hyperfine-resolution limit", scan.intensity / MW_PER_CM2);
    }
    let meta = Metadata::new("dm")
        .with("ground_f", l.ground_f)
        .with("power_w", l.power)
        .with("beam_diameter_m", l.beam_diameter)
        .with("density_m3", a.density)
        .with("cell_length_m", a.cell_length)
        .with("kappa", scan.kappa)
        .with("gamma_ratio", scan.gamma / scan.gamma0)
        .with("doppler_width_mhz", scan.doppler_width / MHZ)
        .with("alpha0_ell", scan.alpha0 * scan.cell_length);
    Ok(Document { metadata: meta, rows: rows.iter().map(SweepRow::from).collect() })
}

/// Detunings ±[10⁻², hi] spaced logarithmically on each side, plus zero.
fn signed_log_grid(hi: f64, per_side: usize) -> Result<Vec<f64>> {
    let side = log_grid(1e-2, hi, per_side)?;
    Ok(side.iter().rev().map(|x| -x).chain([0.0]).chain(side.iter().copied()).collect())
}

fn optimum_flags(opt: &SqueezingOptimum) -> ValidityFlags {
    let mut f = ValidityFlags::empty();
    f.set(ValidityFlags::G_OVER_ALPHA_LOW, opt.g_over_alpha < MIN_G_OVER_ALPHA);
    f
}

/// g/α optimization of one ground hyperfine level at fixed κ, with rates in
/// units of γ₀.
fn dm_kappa_optimum(line: &HyperfineLine, ground_f: f64, kappa: f64, gamma_ratio: f64, width: f64) -> Result<SqueezingOptimum> {
    let shifts: Vec<_> = line.excited_shifts.iter().map(|&(f, s)| (f, s / line.gamma0)).collect();
    let scheme = LevelScheme::hyperfine(line.jg, line.je, line.nuclear_spin, ground_f, &shifts, gamma_ratio, 1.0)?;
    let drive = Drive::new((kappa * gamma_ratio).sqrt(), 0.0, 0.0)?;
    let span = shifts.iter().map(|s| s.1.abs()).fold(optimal_detuning_for(SystemKind::XHalfHalf, kappa), f64::max);
    let grid = signed_log_grid(10.0 * span, 120)?;
    let response = |x: f64| -> srsqueeze_core::Result<(f64, f64)> {
        let d = drive.with_detuning(x);
        let r = if width > 0.0 {
            doppler_average(&scheme, &d, width, EPS_PROBE, DopplerOptions::default())?.into_converged()?
        } else {
            dm::response(&scheme, &d, EPS_PROBE)?
        };
        Ok((r.alpha, r.g))
    };
    Ok(optimize_squeezing(response, &grid, 1.0, alpha0_for(1.0, line.wavelength, line.jg, line.je))?)
}

pub fn kappa_scan(a: &KappaScanArgs, cfg: &AtomConfig) -> Result<Document<KappaRow>> {
    let kappas = log_grid(a.kappa_from, a.kappa_to, a.kappa_points)?;
    let (model, optimum): (String, Box<dyn Fn(f64) -> Result<SqueezingOptimum> + Sync>) = match a.model {
        ModelArg::X | ModelArg::D2 => {
            let system = if a.model == ModelArg::X { SystemKind::XHalfHalf } else { SystemKind::HalfThreeHalves };
            let ratio = a.gamma_ratio;
            (model_name(system).into(), Box::new(move |k| Ok(optimize_analytic(system, k, ratio, 795e-9, 1.0)?)))
        }
        ModelArg::Dm => {
            let line = cfg.line(&a.line)?;
            let (f, ratio, width) = (a.ground_f, a.gamma_ratio, a.doppler_width_mhz * MHZ / line.gamma0);
            ("dm".into(), Box::new(move |k| dm_kappa_optimum(&line, f, k, ratio, width)))
        }
    };
    let rows = kappas
        .par_iter()
        .map(|&k| {
            let opt = optimum(k)?;
            Ok(KappaRow {
                kappa: k,
                detuning_gamma0: opt.detuning_gamma0,
                g_over_alpha: opt.g_over_alpha,
                squeezing_db: opt.squeezing.s_db,
                flags: flags_to_string(optimum_flags(&opt)),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut meta = Metadata::new(model).with("gamma_ratio", a.gamma_ratio);
    if a.model == ModelArg::Dm {
        meta = meta.with("ground_f", a.ground_f).with("doppler_width_mhz", a.doppler_width_mhz);
    }
    Ok(Document { metadata: meta, rows })
}

pub fn buffer(a: &BufferArgs, cfg: &AtomConfig) -> Result<Document<BufferRow>> {
    let spec = cfg.buffer_gas();
    let gamma0 = cfg.line(&a.line)?.gamma0;
    let gamma_free = spec.free_transit_rate();
    let (n_opt, best) = optimize_buffer_density(&spec, gamma0, gamma_free)?;
    eprintln!("optimum buffer density {n_opt:.4e} m^-3, kappa'/kappa = {:.4}", best.kappa_ratio);
    let grid = log_grid(a.from * n_opt, a.to * n_opt, a.points)?;
    let rows = grid
        .iter()
        .map(|&n| {
            let r = buffer_rates(&spec, n, gamma0, gamma_free)?;
            Ok(BufferRow { buffer_density: n, gamma_prime: r.gamma_prime, gamma0_prime: r.gamma0_prime, kappa_ratio: r.kappa_ratio })
        })
        .collect::<Result<Vec<_>>>()?;
    let meta = Metadata::new("buffer")
        .with("optimum_density_m3", n_opt)
        .with("optimum_kappa_ratio", best.kappa_ratio)
        .with("gamma0", gamma0)
        .with("gamma_free", gamma_free);
    Ok(Document { metadata: meta, rows })
}

fn optimum_row(opt: &SqueezingOptimum) -> OptimumRow {
    OptimumRow {
        detuning_gamma0: opt.detuning_gamma0,
        g_over_alpha: opt.g_over_alpha,
        density: opt.density,
        alpha0_ell: opt.alpha0_ell,
        squeezing_db: opt.squeezing.s_db,
        chi_opt: opt.squeezing.chi_opt,
    }
}

pub fn optimize(a: &OptimizeArgs, cfg: &AtomConfig) -> Result<Document<OptimumRow>> {
    let (opt, meta) = match a.model {
        ModelArg::X | ModelArg::D2 => {
            let system = if a.model == ModelArg::X { SystemKind::XHalfHalf } else { SystemKind::HalfThreeHalves };
            let s = analytic_setup(system, &a.drive, cfg)?;
            let opt = optimize_analytic(system, s.kappa, s.gamma_ratio, s.line.wavelength, a.cell_length)?;
            (opt, Metadata::new(model_name(system)).with("kappa", s.kappa).with("gamma_ratio", s.gamma_ratio))
        }
        ModelArg::Dm => {
            let d = &a.drive;
            let power = d.power.ok_or_else(|| CliError::Usage("the dm model needs --power".into()))?;
            let line = cfg.line(d.line.as_deref().unwrap_or("d1"))?;
            let cond = ScanConditions {
                ground_f: a.ground_f,
                power,
                beam_diameter: d.beam_diameter,
                density: 1.0,
                cell_length: a.cell_length,
                temperature: d.temperature,
                doppler_width: a.doppler_width_mhz.map(|w| w * MHZ),
                max_intensity: f64::INFINITY,
            };
            let scan = PreparedScan::new(&line, &cond)?;
            let grid = linear_grid(-a.span, a.span, a.points)?;
            // unsettled points rank last; the optimum itself must settle
            let eval = |x: f64| -> srsqueeze_core::Result<(f64, f64)> {
                let avg = scan.response(x)?;
                Ok(if avg.converged { (avg.response.alpha, avg.response.g) } else { (f64::INFINITY, 0.0) })
            };
            let cached: HashMap<u64, (f64, f64)> =
                grid.par_iter().map(|&x| eval(x).map(|v| (x.to_bits(), v))).collect::<srsqueeze_core::Result<_>>()?;
            let skipped = cached.values().filter(|v| v.0.is_infinite()).count();
            if skipped > 0 {
                warn!("{skipped} of {} grid points did not settle and were skipped", grid.len());
            }
            let response = |x: f64| cached.get(&x.to_bits()).copied().map_or_else(|| eval(x), Ok);
            let opt = optimize_squeezing(response, &grid, a.cell_length, alpha0_for(1.0, line.wavelength, line.jg, line.je))?;
            scan.response(opt.detuning_gamma0)?.into_converged()?;
            let meta = Metadata::new("dm")
                .with("ground_f", a.ground_f)
                .with("power_w", power)
                .with("kappa", scan.kappa)
                .with("gamma_ratio", scan.gamma / scan.gamma0)
                .with("doppler_width_mhz", scan.doppler_width / MHZ);
            (opt, meta)
        }
    };
    if !opt.squeezing.within_validity {
        warn!("g/α = {:.3} at the optimum is outside the small-loss regime", opt.g_over_alpha);
    }
    Ok(Document { metadata: meta.with("cell_length_m", a.cell_length), rows: vec![optimum_row(&opt)] })
}
