//! Numerical reference solution of the coupled momentum-space equations.
//!
//! A state starting at momentum `p0` in `|phi2>` only ever couples to
//! `p0 + hbar k` in `|phi1>`, so the problem closes on a 2x2 system:
//!
//! ```text
//! i hbar d/dt psi1 = h11 psi1 - (hbar Omega / 2) exp(-i omega_l t) psi2
//! i hbar d/dt psi2 = h22 psi2 - (hbar Omega / 2) exp(+i omega_l t) psi1
//! ```
//!
//! with `h11 = (p0 + hbar k)^2 / 2m + hbar omega_a / 2 - i hbar gamma1` and
//! `h22 = p0^2 / 2m - hbar omega_a / 2 - i hbar gamma2`. Integration is
//! classical fixed-step RK4. This module never touches the closed-form
//! quantities in [`crate::spectral`] or [`crate::dynamics`].

use num_complex::Complex64;

use crate::dynamics::Trajectory;
use crate::error::{param, Error, Result};
use crate::spectral::{
    AtomParams, DriveParams, InitialCondition, PhysicalConstants, ReducedParams,
};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

pub type State = [Complex64; 2];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LatticeHamiltonian {
    pub hbar: f64,
    /// Complex energy of `|phi1>` at `p0 + hbar k` (J).
    pub h11: Complex64,
    /// Complex energy of `|phi2>` at `p0` (J).
    pub h22: Complex64,
    /// `hbar Omega / 2` (J).
    pub coupling_mag: f64,
    pub omega_l: f64,
}

impl LatticeHamiltonian {
    /// `<phi1|H|phi2>` and `<phi2|H|phi1>` at time `t`.
    pub fn off_diagonal(&self, t: f64) -> (Complex64, Complex64) {
        let phase = Complex64::from_polar(1.0, -self.omega_l * t);
        (
            -self.coupling_mag * phase,
            -self.coupling_mag * phase.conj(),
        )
    }

    pub fn apply(&self, t: f64, v: &State) -> State {
        let (h12, h21) = self.off_diagonal(t);
        [self.h11 * v[0] + h12 * v[1], h21 * v[0] + self.h22 * v[1]]
    }

    pub fn gamma1(&self) -> f64 {
        -self.h11.im / self.hbar
    }

    pub fn gamma2(&self) -> f64 {
        -self.h22.im / self.hbar
    }

    pub fn omega_rabi(&self) -> f64 {
        2.0 * self.coupling_mag / self.hbar
    }

    /// Energy at the centre of the two diagonal entries (J).
    pub fn centre_energy(&self) -> f64 {
        (self.h11.re + self.h22.re) / 2.0
    }

    /// Residual detuning in the co-rotating frame, `(Re h11 - Re h22)/hbar - omega_l`.
    pub fn rotating_detuning(&self) -> f64 {
        (self.h11.re - self.h22.re) / self.hbar - self.omega_l
    }
}

/// Builds the closed two-component system from SI parameters.
pub fn build_hamiltonian(
    constants: &PhysicalConstants,
    atom: &AtomParams,
    drive: &DriveParams,
    init: &InitialCondition,
) -> Result<LatticeHamiltonian> {
    constants.validate()?;
    atom.validate()?;
    drive.validate()?;
    if !init.p0.is_finite() {
        return Err(param("p0", "must be finite"));
    }
    let hbar = constants.hbar;
    let p1 = init.p0 + hbar * drive.k;
    let two_m = 2.0 * atom.mass;
    let e1 = hbar * atom.omega_a / 2.0;
    Ok(LatticeHamiltonian {
        hbar,
        h11: Complex64::new(p1 * p1 / two_m + e1, -hbar * atom.gamma1),
        h22: Complex64::new(init.p0 * init.p0 / two_m - e1, -hbar * atom.gamma2),
        coupling_mag: hbar * drive.omega_rabi / 2.0,
        omega_l: drive.omega_l,
    })
}

/// Builds the lattice system from reduced parameters (`hbar = 1`). The
/// diagonal entries are placed symmetrically about `e_plus / 2` and split by
/// `delta + omega_l`.
pub fn build_reduced_hamiltonian(p: &ReducedParams) -> Result<LatticeHamiltonian> {
    p.validate()?;
    let split = p.delta + p.omega_l;
    Ok(LatticeHamiltonian {
        hbar: 1.0,
        h11: Complex64::new((p.e_plus + split) / 2.0, -p.gamma1),
        h22: Complex64::new((p.e_plus - split) / 2.0, -p.gamma2),
        coupling_mag: p.omega_rabi / 2.0,
        omega_l: p.omega_l,
    })
}

/// Variables the integrator advances.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Frame {
    /// Only the common phase `exp(-i E_c t / hbar)` is factored out; the
    /// coupling keeps its explicit `exp(-+i omega_l t)` time dependence.
    CommonPhase,
    /// Each component also rotates with `exp(-+i omega_l t / 2)`, which makes
    /// the system time independent. Required for optical-frequency SI runs.
    #[default]
    CoRotating,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegratorOptions {
    pub frame: Frame,
    /// Steps per shortest dynamical time scale.
    pub steps_per_scale: f64,
    /// Upper bound on the total number of RK4 steps.
    pub max_steps: u64,
}

impl Default for IntegratorOptions {
    fn default() -> Self {
        Self {
            frame: Frame::CoRotating,
            steps_per_scale: 200.0,
            max_steps: 50_000_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleResult {
    pub times: Vec<f64>,
    /// Lab-frame amplitudes `(psi1, psi2)`.
    pub psi: Vec<State>,
    pub step_count: u64,
    /// Largest step-doubling estimate of the local error, relative to the
    /// initial norm.
    pub max_step_error_estimate: f64,
}

impl OracleResult {
    pub fn probabilities(&self, i: usize) -> (f64, f64) {
        (self.psi[i][0].norm_sqr(), self.psi[i][1].norm_sqr())
    }
}

/// Right-hand side `dy/dt` in one of the integration frames.
#[derive(Clone, Copy, Debug)]
struct FrameSystem {
    frame: Frame,
    /// Diagonal entries divided by `i hbar`, after removing the frame energy.
    d1: Complex64,
    d2: Complex64,
    /// `-i * (-Omega/2)`
    c: Complex64,
    omega_l: f64,
    /// Rotation rate removed from both components (rad/s).
    centre: f64,
}

impl FrameSystem {
    fn new(h: &LatticeHamiltonian, frame: Frame) -> Self {
        let hbar = h.hbar;
        let centre = h.centre_energy() / hbar;
        let half_rot = match frame {
            Frame::CommonPhase => 0.0,
            Frame::CoRotating => h.omega_l / 2.0,
        };
        let e1 = Complex64::new(h.h11.re / hbar - centre - half_rot, h.h11.im / hbar);
        let e2 = Complex64::new(h.h22.re / hbar - centre + half_rot, h.h22.im / hbar);
        Self {
            frame,
            d1: -I * e1,
            d2: -I * e2,
            c: -I * (-h.coupling_mag / hbar),
            omega_l: h.omega_l,
            centre,
        }
    }

    fn rhs(&self, t: f64, y: &State) -> State {
        match self.frame {
            Frame::CoRotating => [
                self.d1 * y[0] + self.c * y[1],
                self.c * y[0] + self.d2 * y[1],
            ],
            Frame::CommonPhase => {
                let phase = Complex64::from_polar(1.0, -self.omega_l * t);
                [
                    self.d1 * y[0] + self.c * phase * y[1],
                    self.c * phase.conj() * y[0] + self.d2 * y[1],
                ]
            }
        }
    }

    fn rk4(&self, t: f64, y: &State, h: f64) -> State {
        let k1 = self.rhs(t, y);
        let k2 = self.rhs(t + h / 2.0, &axpy(y, h / 2.0, &k1));
        let k3 = self.rhs(t + h / 2.0, &axpy(y, h / 2.0, &k2));
        let k4 = self.rhs(t + h, &axpy(y, h, &k3));
        [
            y[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            y[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        ]
    }

    fn lab_state(&self, t: f64, y: &State) -> State {
        let half_rot = match self.frame {
            Frame::CommonPhase => 0.0,
            Frame::CoRotating => self.omega_l / 2.0,
        };
        [
            y[0] * Complex64::from_polar(1.0, -(self.centre + half_rot) * t),
            y[1] * Complex64::from_polar(1.0, -(self.centre - half_rot) * t),
        ]
    }

    fn frame_state(&self, t: f64, psi: &State) -> State {
        let half_rot = match self.frame {
            Frame::CommonPhase => 0.0,
            Frame::CoRotating => self.omega_l / 2.0,
        };
        [
            psi[0] * Complex64::from_polar(1.0, (self.centre + half_rot) * t),
            psi[1] * Complex64::from_polar(1.0, (self.centre - half_rot) * t),
        ]
    }
}

fn axpy(y: &State, a: f64, x: &State) -> State {
    [y[0] + a * x[0], y[1] + a * x[1]]
}

fn state_norm(y: &State) -> f64 {
    (y[0].norm_sqr() + y[1].norm_sqr()).sqrt()
}

/// Largest step allowed in `frame`:
/// `min(2 pi / omega_rel, 1 / gamma_plus, 1 / Omega) / steps_per_scale`, where
/// `omega_rel` is the fastest residual rotation and vanishing rates are
/// ignored.
pub fn max_step(h: &LatticeHamiltonian, frame: Frame, steps_per_scale: f64) -> f64 {
    let d = h.rotating_detuning().abs();
    let omega_rel = match frame {
        Frame::CoRotating => d,
        Frame::CommonPhase => d + 2.0 * h.omega_l,
    };
    let gamma_plus = h.gamma1() + h.gamma2();
    let omega = h.omega_rabi();
    // eigenfrequency spread of the co-rotating matrix
    let spread = ((d * d + omega * omega).sqrt()).max((h.gamma1() - h.gamma2()).abs());
    let mut scale = f64::INFINITY;
    if omega_rel > 0.0 {
        scale = scale.min(2.0 * std::f64::consts::PI / omega_rel);
    }
    if gamma_plus > 0.0 {
        scale = scale.min(1.0 / gamma_plus);
    }
    if omega > 0.0 {
        scale = scale.min(1.0 / omega);
    }
    if spread > 0.0 {
        scale = scale.min(1.0 / spread);
    }
    scale / steps_per_scale
}

/// Integrates from `t_grid[0] = 0` with default options.
pub fn integrate(h: &LatticeHamiltonian, initial: State, t_grid: &[f64]) -> Result<OracleResult> {
    integrate_with(h, initial, t_grid, &IntegratorOptions::default())
}

pub fn integrate_with(
    h: &LatticeHamiltonian,
    initial: State,
    t_grid: &[f64],
    opts: &IntegratorOptions,
) -> Result<OracleResult> {
    if t_grid.is_empty() {
        return Err(Error::TimeGrid("empty time grid".into()));
    }
    if t_grid[0] != 0.0 {
        return Err(Error::TimeGrid(format!(
            "grid must start at 0, got {}",
            t_grid[0]
        )));
    }
    if let Some(w) = t_grid
        .windows(2)
        .find(|w| !(w[1] > w[0]) || !w[1].is_finite())
    {
        return Err(Error::TimeGrid(format!(
            "grid not strictly increasing at {} -> {}",
            w[0], w[1]
        )));
    }
    if !(opts.steps_per_scale >= 1.0) {
        return Err(Error::StepSize(format!(
            "steps_per_scale must be >= 1, got {}",
            opts.steps_per_scale
        )));
    }

    let sys = FrameSystem::new(h, opts.frame);
    let h_max = max_step(h, opts.frame, opts.steps_per_scale);

    // plan the substeps up front so an oversized run fails before any work
    let mut plan = Vec::with_capacity(t_grid.len().saturating_sub(1));
    let mut total: u64 = 0;
    for w in t_grid.windows(2) {
        let dt = w[1] - w[0];
        let n = if h_max.is_finite() {
            (dt / h_max).ceil().max(1.0)
        } else {
            1.0
        };
        if n > opts.max_steps as f64 {
            return Err(Error::StepSize(format!(
                "interval {dt:e} needs {n:e} steps of at most {h_max:e}"
            )));
        }
        total += n as u64;
        if total > opts.max_steps {
            return Err(Error::StepSize(format!(
                "grid needs more than {} steps of at most {h_max:e}",
                opts.max_steps
            )));
        }
        plan.push(n as u64);
    }

    let norm0 = state_norm(&initial).max(f64::MIN_POSITIVE);
    let mut psi = Vec::with_capacity(t_grid.len());
    psi.push(initial);
    let mut y = initial;
    let mut max_err: f64 = 0.0;

    for (w, &n) in t_grid.windows(2).zip(&plan) {
        let (t0, t1) = (w[0], w[1]);
        let step = (t1 - t0) / n as f64;
        for j in 0..n {
            let t = t0 + j as f64 * step;
            let next = sys.rk4(t, &y, step);
            if j == 0 {
                let half = sys.rk4(t, &y, step / 2.0);
                let twice = sys.rk4(t + step / 2.0, &half, step / 2.0);
                let diff = [next[0] - twice[0], next[1] - twice[1]];
                max_err = max_err.max(state_norm(&diff) / 15.0 / norm0);
            }
            y = next;
        }
        psi.push(sys.lab_state(t1, &y));
    }

    Ok(OracleResult {
        times: t_grid.to_vec(),
        psi,
        step_count: total,
        max_step_error_estimate: max_err,
    })
}

/// Advances `initial` from 0 to `t_end` in exactly `n_steps` equal RK4 steps
/// and returns the lab-frame state. Used for convergence-order measurements.
pub fn integrate_fixed_steps(
    h: &LatticeHamiltonian,
    initial: State,
    t_end: f64,
    n_steps: u64,
    frame: Frame,
) -> Result<State> {
    if n_steps == 0 || !(t_end > 0.0) {
        return Err(Error::StepSize(format!(
            "need n_steps > 0 and t_end > 0, got {n_steps} and {t_end}"
        )));
    }
    let sys = FrameSystem::new(h, frame);
    let step = t_end / n_steps as f64;
    let mut y = sys.frame_state(0.0, &initial);
    for j in 0..n_steps {
        y = sys.rk4(j as f64 * step, &y, step);
    }
    Ok(sys.lab_state(t_end, &y))
}

/// Threshold on the amplitude discrepancy for a passing comparison.
pub const AMPLITUDE_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComparisonReport {
    pub max_amplitude_error: f64,
    pub max_probability_error: f64,
    /// First grid time at which the amplitude error reaches [`AMPLITUDE_TOL`].
    pub first_divergence: Option<f64>,
    pub pass: bool,
}

/// Element-wise comparison of an analytic trajectory against an oracle run on
/// the same grid.
pub fn compare(analytic: &Trajectory, oracle: &OracleResult) -> Result<ComparisonReport> {
    if analytic.times.len() != oracle.times.len() {
        return Err(Error::GridMismatch(format!(
            "{} analytic samples vs {} oracle samples",
            analytic.times.len(),
            oracle.times.len()
        )));
    }
    if let Some((a, b)) = analytic
        .times
        .iter()
        .zip(&oracle.times)
        .find(|(a, b)| a != b)
    {
        return Err(Error::GridMismatch(format!(
            "sample times differ: {a} vs {b}"
        )));
    }

    let mut report = ComparisonReport {
        max_amplitude_error: 0.0,
        max_probability_error: 0.0,
        first_divergence: None,
        pass: true,
    };
    for (i, (a, o)) in analytic.psi.iter().zip(&oracle.psi).enumerate() {
        let amp = (a.psi1 - o[0]).norm().max((a.psi2 - o[1]).norm());
        let prob = (a.psi1.norm_sqr() - o[0].norm_sqr())
            .abs()
            .max((a.psi2.norm_sqr() - o[1].norm_sqr()).abs());
        report.max_amplitude_error = report.max_amplitude_error.max(amp);
        report.max_probability_error = report.max_probability_error.max(prob);
        if !(amp < AMPLITUDE_TOL) && report.first_divergence.is_none() {
            report.first_divergence = Some(analytic.times[i]);
        }
    }
    report.pass = report.first_divergence.is_none();
    Ok(report)
}
