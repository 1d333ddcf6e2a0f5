//! Closed-form time evolution for an atom starting in the lower state.
//!
//! With `psi1 = exp(-i alpha1 t) a(t)` and `psi2 = exp(-i alpha2 t) b(t)` the
//! envelopes are
//!
//! ```text
//! a(t) = (Omega / 4 beta) [exp(i beta t) - exp(-i beta t)] = i Omega sin(beta t) / (2 beta)
//! b(t) = cos(beta t) - i epsilon sin(beta t) / beta
//! ```
//!
//! Both are even in `beta`, so the choice of square-root branch never reaches
//! an observable. Occupations are always `|psi|^2`; the closed-form
//! probability expressions in this module are kept as cross-checks.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::{is_resonant, resonance_threshold, Spectrum, RESONANCE_TOL};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Below this `|beta t|` the envelopes switch to their Taylor series.
const SERIES_CUTOFF: f64 = 1e-3;

/// Relative width of the critical-coupling window `|Omega - |gamma_minus||`.
pub const CRITICAL_TOL: f64 = 1e-9;

/// Amplitudes of `|phi1>` at `p0 + hbar k` and `|phi2>` at `p0`, with the
/// momentum delta functions stripped.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AmplitudePair {
    pub psi1: Complex64,
    pub psi2: Complex64,
}

impl AmplitudePair {
    pub fn probabilities(&self) -> (f64, f64) {
        (self.psi1.norm_sqr(), self.psi2.norm_sqr())
    }
}

/// Envelopes and their time derivatives, each to be multiplied by
/// `exp(log_scale)`.
#[derive(Clone, Copy, Debug)]
struct Envelope {
    a: Complex64,
    b: Complex64,
    da: Complex64,
    db: Complex64,
    /// `|Im beta| t - gamma_plus t / 2`, never positive.
    log_scale: f64,
}

fn envelope(spec: &Spectrum, t: f64) -> Envelope {
    let beta = spec.beta;
    let eps = spec.epsilon;
    let omega = spec.omega_rabi;
    let z = beta * t;

    if z.norm() < SERIES_CUTOFF {
        // cos z and sin(z)/beta = t * sinc(z)
        let z2 = z * z;
        let cos = 1.0 - z2 / 2.0 * (1.0 - z2 / 12.0 * (1.0 - z2 / 30.0 * (1.0 - z2 / 56.0)));
        let sinc_t =
            t * (1.0 - z2 / 6.0 * (1.0 - z2 / 20.0 * (1.0 - z2 / 42.0 * (1.0 - z2 / 72.0))));
        let sin = beta * sinc_t;
        return Envelope {
            a: I * omega * sinc_t / 2.0,
            b: cos - I * eps * sinc_t,
            da: I * omega * cos / 2.0,
            db: -beta * sin - I * eps * cos,
            log_scale: -spec.gamma_plus * t / 2.0,
        };
    }

    // exp(+-i beta t) rescaled by exp(-|Im beta| t) so neither overflows
    let y = z.im.abs();
    let up = (I * z - y).exp();
    let down = (-I * z - y).exp();
    let cos = (up + down) / 2.0;
    let sin = (up - down) / (2.0 * I);
    Envelope {
        a: I * omega * sin / (2.0 * beta),
        b: cos - I * eps * sin / beta,
        da: I * omega * cos / 2.0,
        db: -beta * sin - I * eps * cos,
        log_scale: y - spec.gamma_plus * t / 2.0,
    }
}

/// Exact amplitudes at time `t` for an atom starting in `|phi2>`.
pub fn amplitudes(spec: &Spectrum, t: f64) -> AmplitudePair {
    let env = envelope(spec, t);
    let scale = env.log_scale.exp();
    // the damping part of exp(-i alpha t) is already inside log_scale
    let phase1 = Complex64::from_polar(1.0, -spec.alpha1.re * t);
    let phase2 = Complex64::from_polar(1.0, -spec.alpha2.re * t);
    AmplitudePair {
        psi1: phase1 * env.a * scale,
        psi2: phase2 * env.b * scale,
    }
}

/// Term-by-term transcription of the two-exponential solution with an
/// explicitly supplied `beta` (either root). Undefined at `beta = 0`.
pub fn exponential_form_amplitudes(spec: &Spectrum, beta: Complex64, t: f64) -> AmplitudePair {
    let eps = spec.epsilon;
    let (w1p, w1m) = (spec.alpha1 + beta, spec.alpha1 - beta);
    let (w2p, w2m) = (spec.alpha2 + beta, spec.alpha2 - beta);
    let e = |w: Complex64| (-I * w * t).exp();
    AmplitudePair {
        psi1: spec.omega_rabi / (4.0 * beta) * (-e(w1p) + e(w1m)),
        psi2: (eps + beta) / (2.0 * beta) * e(w2p) - (eps - beta) / (2.0 * beta) * e(w2m),
    }
}

/// `(rho1, rho2) = (|psi1|^2, |psi2|^2)`.
pub fn probabilities(spec: &Spectrum, t: f64) -> (f64, f64) {
    let env = envelope(spec, t);
    let scale = (2.0 * env.log_scale).exp();
    (env.a.norm_sqr() * scale, env.b.norm_sqr() * scale)
}

/// `d rho1 / dt`, `d rho2 / dt` from the differentiated envelopes.
pub fn probability_rates(spec: &Spectrum, t: f64) -> (f64, f64) {
    let env = envelope(spec, t);
    let scale = (2.0 * env.log_scale).exp();
    let g = spec.gamma_plus;
    let rate = |v: Complex64, dv: Complex64| (2.0 * (v.conj() * dv).re - g * v.norm_sqr()) * scale;
    (rate(env.a, env.da), rate(env.b, env.db))
}

/// Upper-state occupation from its cosh/cos closed form with prefactor
/// `Omega^2 / (8 |beta|^2)`.
pub fn rho1_closed_form(spec: &Spectrum, t: f64) -> f64 {
    closed_form_rho1_with_prefactor(spec, t, spec.omega_rabi * spec.omega_rabi)
}

/// The same expression with the prefactor `Omega / (8 |beta|^2)`; agrees with
/// `|psi1|^2` only when `Omega = 1`.
pub fn rho1_linear_prefactor(spec: &Spectrum, t: f64) -> f64 {
    closed_form_rho1_with_prefactor(spec, t, spec.omega_rabi)
}

fn closed_form_rho1_with_prefactor(spec: &Spectrum, t: f64, numerator: f64) -> f64 {
    let (br, bi) = (spec.beta.re, spec.beta.im);
    numerator / (8.0 * spec.beta.norm_sqr())
        * ((2.0 * bi * t).cosh() - (2.0 * br * t).cos())
        * (-spec.gamma_plus * t).exp()
}

/// Lower-state occupation from its cosh/sinh/cos/sin closed form.
pub fn rho2_closed_form(spec: &Spectrum, t: f64) -> f64 {
    let (br, bi) = (spec.beta.re, spec.beta.im);
    let d = spec.effective_detuning;
    let gm = spec.gamma_minus;
    let b2 = spec.beta.norm_sqr();
    let e2 = spec.epsilon.norm_sqr();
    let x = 2.0 * br * t;
    let y = 2.0 * bi * t;
    ((e2 + b2) * y.cosh()
        + (gm * bi - d * br) * y.sinh()
        + (b2 - e2) * x.cos()
        + (gm * br + d * bi) * x.sin())
        / (2.0 * b2)
        * (-spec.gamma_plus * t).exp()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Regime {
    /// Resonant, `Omega > |gamma_minus|`: damped Rabi oscillation.
    Strong,
    /// Resonant, `Omega < |gamma_minus|`: sum of decaying exponentials.
    Weak,
    /// Resonant, `Omega = |gamma_minus|` within [`CRITICAL_TOL`].
    Critical,
    OffResonance,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::Strong => "strong",
            Regime::Weak => "weak",
            Regime::Critical => "critical",
            Regime::OffResonance => "off-resonance",
        }
    }
}

pub fn regime(spec: &Spectrum) -> Regime {
    if !is_resonant(spec, RESONANCE_TOL) {
        return Regime::OffResonance;
    }
    let omega = spec.omega_rabi;
    let gm = spec.gamma_minus.abs();
    if (omega - gm).abs() <= CRITICAL_TOL * omega || (omega == 0.0 && gm == 0.0) {
        Regime::Critical
    } else if omega > gm {
        Regime::Strong
    } else {
        Regime::Weak
    }
}

fn require_resonance(spec: &Spectrum) -> Result<Regime> {
    match regime(spec) {
        Regime::OffResonance => Err(Error::NotResonant {
            detuning: spec.effective_detuning,
            tolerance: resonance_threshold(spec, RESONANCE_TOL),
        }),
        r => Ok(r),
    }
}

/// Occupations from the resonance closed forms (sin/cos for strong coupling,
/// sinh/cosh for weak coupling, the polynomial limit at the critical point).
pub fn resonance_probabilities(spec: &Spectrum, t: f64) -> Result<(f64, f64, Regime)> {
    let regime = require_resonance(spec)?;
    let omega2 = spec.omega_rabi * spec.omega_rabi;
    let gm = spec.gamma_minus;
    let decay = (-spec.gamma_plus * t).exp();
    let (rho1, rho2) = match regime {
        Regime::Strong => {
            let s = (omega2 - gm * gm).sqrt();
            let h = s * t / 2.0;
            (
                omega2 / (s * s) * h.sin().powi(2),
                h.cos().powi(2) + gm * gm / (s * s) * h.sin().powi(2) + gm / s * (s * t).sin(),
            )
        }
        Regime::Weak => {
            let s = (gm * gm - omega2).sqrt();
            let h = s * t / 2.0;
            (
                omega2 / (s * s) * h.sinh().powi(2),
                h.cosh().powi(2) + gm * gm / (s * s) * h.sinh().powi(2) + gm / s * (s * t).sinh(),
            )
        }
        Regime::Critical => (omega2 * t * t / 4.0, (1.0 + gm * t / 2.0).powi(2)),
        Regime::OffResonance => unreachable!(),
    };
    Ok((rho1 * decay, rho2 * decay, regime))
}

/// Mean momentum `(p0 + hbar k) rho1 + p0 rho2` and transfer `p_avg - p0`.
pub fn momentum_transfer(spec: &Spectrum, t: f64) -> (f64, f64) {
    let (rho1, rho2) = probabilities(spec, t);
    let p0 = spec.p0;
    let p_avg = (p0 + spec.hbar_k) * rho1 + p0 * rho2;
    // hbar k rho1 + p0 (rho1 + rho2 - 1) keeps precision when p0 >> hbar k
    let dp = spec.hbar_k * rho1 + p0 * (rho1 + rho2 - 1.0);
    (p_avg, dp)
}

/// Momentum transfer from the resonance closed forms. Only defined for an
/// undamped lower state (`gamma2 = 0`).
pub fn resonance_momentum_transfer(spec: &Spectrum, t: f64) -> Result<f64> {
    let regime = require_resonance(spec)?;
    if spec.gamma2 != 0.0 {
        return Err(crate::error::param(
            "gamma2",
            "resonance momentum formulas assume an undamped lower state",
        ));
    }
    let g = spec.gamma1;
    let omega2 = spec.omega_rabi * spec.omega_rabi;
    let decay = (-g * t).exp();
    // (transfer into |phi1>, excess population gamma-term)
    let (pumped, excess) = match regime {
        Regime::Strong => {
            let s = (omega2 - g * g).sqrt();
            let sh = (s * t / 2.0).sin().powi(2);
            (
                omega2 / (s * s) * sh,
                g / s * ((s * t).sin() + 2.0 * g * sh / s),
            )
        }
        Regime::Weak => {
            let s = (g * g - omega2).sqrt();
            let sh = (s * t / 2.0).sinh().powi(2);
            (
                omega2 / (s * s) * sh,
                g / s * ((s * t).sinh() + 2.0 * g * sh / s),
            )
        }
        Regime::Critical => (omega2 * t * t / 4.0, g * t * (1.0 + g * t / 2.0)),
        Regime::OffResonance => unreachable!(),
    };
    let p0 = spec.p0;
    Ok((decay - 1.0) * p0 + spec.hbar_k * pumped * decay + p0 * excess * decay)
}

/// Mean force `d(dp)/dt` from the differentiated closed form.
pub fn force(spec: &Spectrum, t: f64) -> f64 {
    let (r1, r2) = probability_rates(spec, t);
    (spec.p0 + spec.hbar_k) * r1 + spec.p0 * r2
}

/// Sampled analytic evolution on a caller-supplied grid.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub psi: Vec<AmplitudePair>,
    pub rho1: Vec<f64>,
    pub rho2: Vec<f64>,
    pub total: Vec<f64>,
    pub dp: Vec<f64>,
    pub force: Vec<f64>,
    pub regime: Regime,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

pub fn trajectory(spec: &Spectrum, times: &[f64]) -> Result<Trajectory> {
    validate_grid(times)?;
    let n = times.len();
    let mut traj = Trajectory {
        times: times.to_vec(),
        psi: Vec::with_capacity(n),
        rho1: Vec::with_capacity(n),
        rho2: Vec::with_capacity(n),
        total: Vec::with_capacity(n),
        dp: Vec::with_capacity(n),
        force: Vec::with_capacity(n),
        regime: regime(spec),
    };
    for &t in times {
        let psi = amplitudes(spec, t);
        let (rho1, rho2) = probabilities(spec, t);
        traj.psi.push(psi);
        traj.rho1.push(rho1);
        traj.rho2.push(rho2);
        traj.total.push(rho1 + rho2);
        traj.dp.push(momentum_transfer(spec, t).1);
        traj.force.push(force(spec, t));
    }
    Ok(traj)
}

pub(crate) fn validate_grid(times: &[f64]) -> Result<()> {
    if times.is_empty() {
        return Err(Error::TimeGrid("empty time grid".into()));
    }
    if !(times[0] >= 0.0) {
        return Err(Error::TimeGrid(format!("grid starts at {} < 0", times[0])));
    }
    if let Some(w) = times
        .windows(2)
        .find(|w| !(w[1] > w[0]) || !w[1].is_finite())
    {
        return Err(Error::TimeGrid(format!(
            "grid not strictly increasing at {} -> {}",
            w[0], w[1]
        )));
    }
    Ok(())
}

/// Default number of samples on a generated grid.
pub const DEFAULT_POINTS: usize = 2000;

/// Default horizon `min(10 / gamma_plus, 20 pi / Omega_eff)` with
/// `Omega_eff = max(sqrt|Omega^2 - gamma_minus^2|, Omega)`.
pub fn default_horizon(spec: &Spectrum) -> f64 {
    let omega = spec.omega_rabi;
    let gm = spec.gamma_minus;
    let omega_eff = (omega * omega - gm * gm).abs().sqrt().max(omega);
    let decay = if spec.gamma_plus > 0.0 {
        10.0 / spec.gamma_plus
    } else {
        f64::INFINITY
    };
    let rabi = if omega_eff > 0.0 {
        20.0 * std::f64::consts::PI / omega_eff
    } else {
        f64::INFINITY
    };
    let horizon = decay.min(rabi);
    if horizon.is_finite() {
        horizon
    } else if spec.effective_detuning != 0.0 {
        20.0 * std::f64::consts::PI / spec.effective_detuning.abs()
    } else {
        1.0
    }
}

/// `n` uniform points on `[0, t_max]`.
pub fn uniform_grid(t_max: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..n).map(|i| t_max * i as f64 / (n - 1) as f64).collect(),
    }
}
