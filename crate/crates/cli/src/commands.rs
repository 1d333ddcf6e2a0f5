use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;
use rayon::prelude::*;
use starkdyn_core::dressed::{dressed_basis, dressed_levels, verify_diagonalization};
use starkdyn_core::dynamics::{
    amplitudes, default_horizon, probabilities, trajectory, uniform_grid, Trajectory,
};
use starkdyn_core::oracle::{
    build_reduced_hamiltonian, compare, integrate, integrate_fixed_steps, Frame, AMPLITUDE_TOL,
};
use starkdyn_core::spectral::{stark_levels, ReducedParams, Spectrum};

use crate::config::{Model, RunConfig};
use crate::output::{fmt_num, render_svg, write_file, Table};
use crate::{CliError, Command};

const STATE2: [Complex64; 2] = [
    Complex64 { re: 0.0, im: 0.0 },
    Complex64 { re: 1.0, im: 0.0 },
];

/// What a subcommand produced.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    /// False only when `verify` found a failing check.
    pub passed: bool,
    pub summary: String,
}

fn time_grid(cfg: &RunConfig, spec: &Spectrum) -> Vec<f64> {
    uniform_grid(
        cfg.t_max.unwrap_or_else(|| default_horizon(spec)),
        cfg.n_points,
    )
}

fn targets(cfg: &RunConfig, out: &Path, stem: &str) -> (PathBuf, PathBuf) {
    let csv = cfg
        .csv_path
        .clone()
        .unwrap_or_else(|| format!("{stem}.csv").into());
    let svg = cfg
        .svg_path
        .clone()
        .unwrap_or_else(|| format!("{stem}.svg").into());
    (out.join(csv), out.join(svg))
}

fn emit(
    cfg: &RunConfig,
    out: &Path,
    stem: &str,
    table: &Table,
    plot: Option<String>,
) -> Result<Vec<PathBuf>, CliError> {
    let (csv, svg) = targets(cfg, out, stem);
    write_file(&csv, &table.to_csv())?;
    let mut files = vec![csv];
    if let Some(plot) = plot {
        write_file(&svg, &plot)?;
        files.push(svg);
    }
    Ok(files)
}

pub fn run(cmd: Command, cfg: &RunConfig, out: &Path, seed: u64) -> Result<Outcome, CliError> {
    match cmd {
        Command::Levels => levels(cfg, out),
        Command::Probs => probs(cfg, out),
        Command::Momentum => momentum(cfg, out),
        Command::Dressed => dressed(cfg, out),
        Command::Sweep => sweep(cfg, out),
        Command::Verify => verify(cfg, out, seed),
    }
}

fn levels(cfg: &RunConfig, out: &Path) -> Result<Outcome, CliError> {
    let spec = cfg.model.spectrum()?;
    let lv = stark_levels(&spec);
    let mut table = Table::new(["label", "energy_real", "energy_imag", "damping_rate"]);
    for l in &lv.levels {
        table.push(vec![
            l.label.as_str().to_string(),
            fmt_num(l.energy_real),
            fmt_num(l.energy_imag),
            fmt_num(l.damping_rate),
        ]);
    }
    let files = emit(cfg, out, "levels", &table, None)?;
    Ok(Outcome {
        files,
        passed: true,
        summary: format!("splitting 2 hbar Re(beta) = {}", fmt_num(lv.splitting)),
    })
}

fn evolve(cfg: &RunConfig) -> Result<Trajectory, CliError> {
    let spec = cfg.model.spectrum()?;
    Ok(trajectory(&spec, &time_grid(cfg, &spec))?)
}

fn probs(cfg: &RunConfig, out: &Path) -> Result<Outcome, CliError> {
    let traj = evolve(cfg)?;
    let table = Table::from_series(
        "t",
        &traj.times,
        &[
            ("rho1", &traj.rho1),
            ("rho2", &traj.rho2),
            ("total", &traj.total),
        ],
    );
    let plot = render_svg(
        "t",
        &traj.times,
        &[("rho1", &traj.rho1), ("rho2", &traj.rho2)],
    );
    let files = emit(cfg, out, "probs", &table, Some(plot))?;
    Ok(Outcome {
        files,
        passed: true,
        summary: format!("{} samples, regime {}", traj.len(), traj.regime.as_str()),
    })
}

fn momentum(cfg: &RunConfig, out: &Path) -> Result<Outcome, CliError> {
    let traj = evolve(cfg)?;
    let table = Table::from_series(
        "t",
        &traj.times,
        &[("dp", &traj.dp), ("force", &traj.force)],
    );
    let plot = render_svg(
        "t",
        &traj.times,
        &[("dp", &traj.dp), ("force", &traj.force)],
    );
    let files = emit(cfg, out, "momentum", &table, Some(plot))?;
    Ok(Outcome {
        files,
        passed: true,
        summary: format!("final dp = {}", fmt_num(*traj.dp.last().unwrap())),
    })
}

fn one_period(spec: &Spectrum) -> Vec<f64> {
    uniform_grid(2.0 * PI / spec.characteristic_rate(), 50)
}

fn dressed(cfg: &RunConfig, out: &Path) -> Result<Outcome, CliError> {
    let spec = cfg.model.spectrum()?;
    let basis = dressed_basis(&spec)?;
    let lv = dressed_levels(&spec);
    let residual = verify_diagonalization(&spec, &one_period(&spec));
    let mut table = Table::new(["quantity", "value"]);
    for (name, v) in [
        ("theta_minus", basis.theta_minus_mix),
        ("theta_plus", basis.theta_plus_mix),
        ("phase_minus", basis.phase_minus),
        ("phase_plus", basis.phase_plus),
        ("energy_minus", lv.energy_minus),
        ("energy_plus", lv.energy_plus),
        ("lifetime_minus", lv.lifetime_minus),
        ("lifetime_plus", lv.lifetime_plus),
        ("residual", residual),
    ] {
        table.push(vec![name.to_string(), fmt_num(v)]);
    }
    let files = emit(cfg, out, "dressed", &table, None)?;
    Ok(Outcome {
        files,
        passed: true,
        summary: format!(
            "lifetimes {} / {}, residual {residual:.2e}",
            fmt_num(lv.lifetime_minus),
            fmt_num(lv.lifetime_plus)
        ),
    })
}

fn sweep_point(cfg: &RunConfig, model: &Model) -> Result<[f64; 5], CliError> {
    let spec = model.spectrum()?;
    let lv = dressed_levels(&spec);
    let traj = trajectory(&spec, &time_grid(cfg, &spec))?;
    let max_rho1 = traj.rho1.iter().copied().fold(0.0, f64::max);
    Ok([
        stark_levels(&spec).splitting,
        lv.lifetime_minus,
        lv.lifetime_plus,
        max_rho1,
        *traj.dp.last().unwrap(),
    ])
}

fn sweep(cfg: &RunConfig, out: &Path) -> Result<Outcome, CliError> {
    let Some(spec) = &cfg.sweep else {
        return Err(CliError::config_message(
            "`sweep` needs sweep_param, sweep_start, sweep_end and sweep_steps",
        ));
    };
    let axis = spec.axis();
    let rows: Vec<Result<[f64; 5], CliError>> = axis
        .par_iter()
        .map(|&v| {
            let model = cfg
                .model_with(&spec.param, v)
                .map_err(CliError::config_message)?;
            sweep_point(cfg, &model)
        })
        .collect();
    let mut table = Table::new([
        spec.param.as_str(),
        "splitting",
        "lifetime_minus",
        "lifetime_plus",
        "max_rho1",
        "final_dp",
    ]);
    for (v, row) in axis.iter().zip(rows) {
        let row = row?;
        let mut cells = vec![fmt_num(*v)];
        cells.extend(row.iter().map(|&x| fmt_num(x)));
        table.push(cells);
    }
    let files = emit(cfg, out, "sweep", &table, None)?;
    Ok(Outcome {
        files,
        passed: true,
        summary: format!("{} points over {}", axis.len(), spec.param),
    })
}

/// Reduced-unit draw: Omega in [0.1, 5], gamma1, gamma2 in [0, 2],
/// delta in [-5, 5].
pub fn random_draws(seed: u64, n: usize) -> Vec<ReducedParams> {
    let mut rng = SplitMix64::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            ReducedParams::new(
                rng.gen_range(0.1..=5.0),
                rng.gen_range(0.0..=2.0),
                rng.gen_range(0.0..=2.0),
                rng.gen_range(-5.0..=5.0),
            )
        })
        .collect()
}

struct Check {
    name: String,
    value: f64,
    tolerance: f64,
    pass: bool,
}

impl Check {
    fn below(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            value,
            tolerance,
            pass: value < tolerance,
        }
    }
}

fn oracle_error(spec: &Spectrum, model: &Model, times: &[f64]) -> Result<f64, CliError> {
    let traj = trajectory(spec, times)?;
    let oracle = integrate(&model.hamiltonian()?, STATE2, times)?;
    Ok(compare(&traj, &oracle)?.max_amplitude_error)
}

fn draw_checks(i: usize, p: &ReducedParams) -> Result<Vec<Check>, CliError> {
    let spec = Spectrum::from_reduced(p)?;
    let times = uniform_grid(10.0 / spec.gamma_plus.max(0.1), 201);
    let amp = oracle_error(&spec, &Model::Reduced(*p), &times)?;
    let traj = trajectory(&spec, &times)?;
    let growth = traj
        .total
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(0.0, f64::max);
    let residual = verify_diagonalization(&spec, &one_period(&spec));
    Ok(vec![
        Check::below(format!("draw_{i:03}_oracle"), amp, AMPLITUDE_TOL),
        Check::below(format!("draw_{i:03}_total_growth"), growth, 1e-10),
        Check::below(format!("draw_{i:03}_diagonalization"), residual, 1e-10),
    ])
}

fn fixed_checks() -> Result<Vec<Check>, CliError> {
    // strong-resonance checkpoint at half a damped Rabi period
    let p = ReducedParams::new(1.0, 0.2, 0.0, 0.0);
    let spec = Spectrum::from_reduced(&p)?;
    let t_half = PI / 0.96f64.sqrt();
    let rho1 = probabilities(&spec, t_half).0;
    let oracle = integrate(&build_reduced_hamiltonian(&p)?, STATE2, &[0.0, t_half])?;

    // convergence order on a smooth detuned problem
    let q = ReducedParams::new(1.0, 0.2, 0.1, 0.5);
    let qs = Spectrum::from_reduced(&q)?;
    let h = build_reduced_hamiltonian(&q)?;
    let exact = amplitudes(&qs, 5.0);
    let err = |n| -> Result<f64, CliError> {
        let y = integrate_fixed_steps(&h, STATE2, 5.0, n, Frame::CoRotating)?;
        Ok((y[0] - exact.psi1).norm().max((y[1] - exact.psi2).norm()))
    };
    let order = (err(40)? / err(80)?).log2();

    Ok(vec![
        Check::below("rabi_checkpoint", (rho1 - 0.5485).abs(), 1e-4),
        Check::below(
            "rabi_checkpoint_oracle",
            (oracle.psi[1][0].norm_sqr() - rho1).abs(),
            1e-9,
        ),
        Check {
            name: "integrator_order".into(),
            value: order,
            tolerance: 0.2,
            pass: (order - 4.0).abs() <= 0.2,
        },
    ])
}

fn verify(cfg: &RunConfig, out: &Path, seed: u64) -> Result<Outcome, CliError> {
    let spec = cfg.model.spectrum()?;
    let mut checks = vec![Check::below(
        "config_oracle",
        oracle_error(&spec, &cfg.model, &time_grid(cfg, &spec))?,
        AMPLITUDE_TOL,
    )];
    checks.extend(fixed_checks()?);
    let draws = random_draws(seed, cfg.verify_draws);
    let per_draw: Vec<Result<Vec<Check>, CliError>> = draws
        .par_iter()
        .enumerate()
        .map(|(i, p)| draw_checks(i, p))
        .collect();
    for c in per_draw {
        checks.extend(c?);
    }

    let mut table = Table::new(["check", "value", "tolerance", "status"]);
    for c in &checks {
        table.push(vec![
            c.name.clone(),
            fmt_num(c.value),
            fmt_num(c.tolerance),
            if c.pass { "PASS" } else { "FAIL" }.to_string(),
        ]);
    }
    let files = emit(cfg, out, "verify", &table, None)?;
    let failed: Vec<&str> = checks
        .iter()
        .filter(|c| !c.pass)
        .map(|c| c.name.as_str())
        .collect();
    Ok(Outcome {
        files,
        passed: failed.is_empty(),
        summary: if failed.is_empty() {
            format!(
                "PASS: {} checks ({} random draws, seed {seed})",
                checks.len(),
                draws.len()
            )
        } else {
            format!(
                "FAIL: {} of {} checks failed: {}",
                failed.len(),
                checks.len(),
                failed.join(", ")
            )
        },
    })
}
