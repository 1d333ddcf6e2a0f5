//! Physical parameters and the time-independent quantities derived from them.
//!
//! Two parameterizations feed the same [`Spectrum`]:
//!
//! * SI mode ([`derive_spectrum`]): atom and drive constants in SI units, the
//!   Rabi frequency and (by default) the wave number derived from them.
//! * Reduced mode ([`ReducedParams`]): the dimensionless combinations that the
//!   dynamics actually depends on, with `hbar = 1`.
//!
//! Damping enters the level energies as `E_i - i*hbar*gamma_i`, so `gamma_i` is
//! the decay rate of the *amplitude* of state `i`; an isolated level loses
//! occupation at `2*gamma_i`.

use num_complex::Complex64;

use crate::error::{param, Result};

/// Fundamental constants used to convert between energies and rates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhysicalConstants {
    /// Reduced Planck constant (J s).
    pub hbar: f64,
    /// Speed of light (m/s).
    pub c: f64,
}

impl PhysicalConstants {
    /// CODATA 2018 values.
    pub const SI: Self = Self {
        hbar: 1.054_571_817e-34,
        c: 299_792_458.0,
    };

    /// `hbar = c = 1`.
    pub const REDUCED: Self = Self { hbar: 1.0, c: 1.0 };

    pub fn validate(&self) -> Result<()> {
        positive("hbar", self.hbar)?;
        positive("c", self.c)
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::SI
    }
}

/// Intrinsic constants of the two-level atom.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AtomParams {
    /// kg
    pub mass: f64,
    /// Transition angular frequency (rad/s).
    pub omega_a: f64,
    /// Dipole moment (C m).
    pub dipole: f64,
    /// Damping rate of the upper state (1/s).
    pub gamma1: f64,
    /// Damping rate of the lower state (1/s).
    pub gamma2: f64,
}

impl AtomParams {
    pub fn validate(&self) -> Result<()> {
        positive("mass", self.mass)?;
        positive("omega_a", self.omega_a)?;
        positive("dipole", self.dipole)?;
        non_negative("gamma1", self.gamma1)?;
        non_negative("gamma2", self.gamma2)
    }
}

/// Parameters of the circularly polarized drive.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DriveParams {
    /// Field amplitude (V/m).
    pub e0: f64,
    /// Angular frequency (rad/s).
    pub omega_l: f64,
    /// Wave number (1/m).
    pub k: f64,
    /// Rabi frequency `2 D E0 / hbar` (rad/s).
    pub omega_rabi: f64,
}

impl DriveParams {
    /// Builds SI drive parameters. The Rabi frequency is `2 D E0 / hbar`; the
    /// wave number defaults to the free-space value `omega_l / c`.
    pub fn si(
        constants: &PhysicalConstants,
        atom: &AtomParams,
        e0: f64,
        omega_l: f64,
        k: Option<f64>,
    ) -> Result<Self> {
        constants.validate()?;
        atom.validate()?;
        non_negative("e0", e0)?;
        positive("omega_l", omega_l)?;
        let k = k.unwrap_or(omega_l / constants.c);
        positive("k", k)?;
        Ok(Self {
            e0,
            omega_l,
            k,
            omega_rabi: rabi_frequency(constants, atom.dipole, e0),
        })
    }

    pub fn validate(&self) -> Result<()> {
        non_negative("e0", self.e0)?;
        positive("omega_l", self.omega_l)?;
        positive("k", self.k)?;
        non_negative("omega_rabi", self.omega_rabi)
    }
}

/// `Omega = 2 D E0 / hbar`.
pub fn rabi_frequency(constants: &PhysicalConstants, dipole: f64, e0: f64) -> f64 {
    2.0 * dipole * e0 / constants.hbar
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum InitialState {
    /// Unit weight in the lower state at momentum `p0`. The only state the
    /// closed-form solution covers.
    State2,
    /// Arbitrary amplitudes `(psi1(p0 + hbar k), psi2(p0))`. Oracle only.
    Arbitrary([Complex64; 2]),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InitialCondition {
    /// Initial momentum (kg m/s).
    pub p0: f64,
    pub state: InitialState,
}

impl InitialCondition {
    pub fn state2(p0: f64) -> Self {
        Self {
            p0,
            state: InitialState::State2,
        }
    }

    /// `p0 = m v0`.
    pub fn from_velocity(atom: &AtomParams, v0: f64) -> Self {
        Self::state2(atom.mass * v0)
    }

    pub fn amplitudes(&self) -> [Complex64; 2] {
        match self.state {
            InitialState::State2 => [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
            InitialState::Arbitrary(v) => v,
        }
    }
}

/// Reduced-unit parameterization (`hbar = 1`, every rate in units of a common
/// reference frequency).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReducedParams {
    pub omega_rabi: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    /// Effective detuning `E_-/hbar + (omega_a - omega_l)`.
    pub delta: f64,
    /// Kinetic energy difference `E_-/hbar`; only splits `delta` into its
    /// kinetic and internal parts.
    pub e_minus: f64,
    /// Kinetic energy sum `E_+/hbar`; a common energy offset.
    pub e_plus: f64,
    /// Photon recoil momentum.
    pub hbar_k: f64,
    pub p0: f64,
    /// Drive frequency; zero views the system in the frame co-rotating with
    /// the drive.
    pub omega_l: f64,
}

impl ReducedParams {
    /// Resonant, unit recoil, zero initial momentum.
    pub fn new(omega_rabi: f64, gamma1: f64, gamma2: f64, delta: f64) -> Self {
        Self {
            omega_rabi,
            gamma1,
            gamma2,
            delta,
            e_minus: 0.0,
            e_plus: 0.0,
            hbar_k: 1.0,
            p0: 0.0,
            omega_l: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        non_negative("omega_rabi", self.omega_rabi)?;
        non_negative("gamma1", self.gamma1)?;
        non_negative("gamma2", self.gamma2)?;
        finite("delta", self.delta)?;
        finite("e_minus", self.e_minus)?;
        finite("e_plus", self.e_plus)?;
        finite("hbar_k", self.hbar_k)?;
        finite("p0", self.p0)?;
        non_negative("omega_l", self.omega_l)
    }
}

/// Every time-independent derived quantity for one configuration.
///
/// Frequencies are in rad/s (or reduced rate units), energies in J (or
/// `hbar = 1` units).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Spectrum {
    pub hbar: f64,
    /// `(p0 + hbar k)^2 / 2m + p0^2 / 2m`
    pub e_plus: f64,
    /// `(p0 + hbar k)^2 / 2m - p0^2 / 2m`
    pub e_minus: f64,
    /// `omega_a - omega_l`
    pub delta_omega: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub gamma_plus: f64,
    pub gamma_minus: f64,
    pub omega_rabi: f64,
    pub omega_l: f64,
    pub hbar_k: f64,
    pub p0: f64,
    /// `-(delta - i gamma_minus) / 2`
    pub epsilon: Complex64,
    /// Principal `sqrt(epsilon^2 + Omega^2 / 4)`.
    pub beta: Complex64,
    /// `(E_+/hbar + omega_l - i gamma_plus) / 2`
    pub alpha1: Complex64,
    /// `alpha1 - omega_l`
    pub alpha2: Complex64,
    /// `E_-/hbar + delta_omega`
    pub effective_detuning: f64,
}

/// Computes the spectrum of an SI-mode configuration.
pub fn derive_spectrum(
    constants: &PhysicalConstants,
    atom: &AtomParams,
    drive: &DriveParams,
    init: &InitialCondition,
) -> Result<Spectrum> {
    constants.validate()?;
    atom.validate()?;
    drive.validate()?;
    finite("p0", init.p0)?;
    if init.state != InitialState::State2 {
        return Err(param(
            "initial_state",
            "closed-form dynamics require the atom to start in state 2",
        ));
    }

    let hbar = constants.hbar;
    let hbar_k = hbar * drive.k;
    let p0 = init.p0;
    let p1 = p0 + hbar_k;
    let two_m = 2.0 * atom.mass;
    let e_plus = (p1 * p1 + p0 * p0) / two_m;
    // factored to avoid cancellation between two nearly equal kinetic energies
    let e_minus = hbar_k * (2.0 * p0 + hbar_k) / two_m;

    Ok(Spectrum::from_parts(
        hbar,
        e_plus,
        e_minus,
        atom.omega_a - drive.omega_l,
        atom.gamma1,
        atom.gamma2,
        drive.omega_rabi,
        drive.omega_l,
        hbar_k,
        p0,
    ))
}

impl Spectrum {
    pub fn from_reduced(p: &ReducedParams) -> Result<Self> {
        p.validate()?;
        Ok(Self::from_parts(
            1.0,
            p.e_plus,
            p.e_minus,
            p.delta - p.e_minus,
            p.gamma1,
            p.gamma2,
            p.omega_rabi,
            p.omega_l,
            p.hbar_k,
            p.p0,
        ))
    }

    #[allow(clippy::too_many_arguments)]
    fn from_parts(
        hbar: f64,
        e_plus: f64,
        e_minus: f64,
        delta_omega: f64,
        gamma1: f64,
        gamma2: f64,
        omega_rabi: f64,
        omega_l: f64,
        hbar_k: f64,
        p0: f64,
    ) -> Self {
        let gamma_plus = gamma1 + gamma2;
        let gamma_minus = gamma1 - gamma2;
        let effective_detuning = e_minus / hbar + delta_omega;
        let epsilon = Complex64::new(-effective_detuning / 2.0, gamma_minus / 2.0);
        let beta = complex_beta(epsilon, omega_rabi);
        let alpha1 = Complex64::new((e_plus / hbar + omega_l) / 2.0, -gamma_plus / 2.0);
        let alpha2 = alpha1 - omega_l;
        Self {
            hbar,
            e_plus,
            e_minus,
            delta_omega,
            gamma1,
            gamma2,
            gamma_plus,
            gamma_minus,
            omega_rabi,
            omega_l,
            hbar_k,
            p0,
            epsilon,
            beta,
            alpha1,
            alpha2,
            effective_detuning,
        }
    }

    /// `alpha1 + beta`, `alpha1 - beta`
    pub fn omega1(&self) -> (Complex64, Complex64) {
        (self.alpha1 + self.beta, self.alpha1 - self.beta)
    }

    /// `alpha2 + beta`, `alpha2 - beta`
    pub fn omega2(&self) -> (Complex64, Complex64) {
        (self.alpha2 + self.beta, self.alpha2 - self.beta)
    }

    /// Fastest rate in the co-rotating frame; sets integration and sampling
    /// scales.
    pub fn characteristic_rate(&self) -> f64 {
        self.omega_rabi
            .max(self.gamma_plus)
            .max(self.effective_detuning.abs())
            .max(2.0 * self.beta.norm())
    }
}

/// Principal square root of `epsilon^2 + Omega^2 / 4`: real part >= 0, and
/// imaginary part >= 0 when the real part vanishes.
pub fn complex_beta(epsilon: Complex64, omega_rabi: f64) -> Complex64 {
    let radicand = epsilon * epsilon + omega_rabi * omega_rabi / 4.0;
    let root = radicand.sqrt();
    if root.re < 0.0 || (root.re == 0.0 && root.im < 0.0) {
        -root
    } else {
        root
    }
}

/// Magnitudes `(|beta_R|, |beta_I|)` from the component closed forms, written
/// in terms of the effective detuning, `gamma_minus` and `Omega`. Kept as an
/// independent cross-check of [`complex_beta`].
pub fn beta_components(effective_detuning: f64, gamma_minus: f64, omega_rabi: f64) -> (f64, f64) {
    let d2 = effective_detuning * effective_detuning;
    let a = d2 + omega_rabi * omega_rabi - gamma_minus * gamma_minus;
    let modulus = (a * a + 4.0 * gamma_minus * gamma_minus * d2).sqrt();
    let scale = std::f64::consts::SQRT_2 / 4.0;
    // (modulus + a)(modulus - a) = 4 gamma_minus^2 delta^2; take the smaller
    // factor from the product to avoid cancellation
    let cross = 2.0 * (gamma_minus * effective_detuning).abs();
    if a >= 0.0 {
        let big = (modulus + a).sqrt();
        let small = if big > 0.0 { cross / big } else { 0.0 };
        (scale * big, scale * small)
    } else {
        let big = (modulus - a).sqrt();
        (scale * cross / big, scale * big)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LevelLabel {
    OnePlus,
    OneMinus,
    TwoPlus,
    TwoMinus,
}

impl LevelLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            LevelLabel::OnePlus => "1+",
            LevelLabel::OneMinus => "1-",
            LevelLabel::TwoPlus => "2+",
            LevelLabel::TwoMinus => "2-",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StarkLevel {
    pub label: LevelLabel,
    /// `hbar Re(omega)`
    pub energy_real: f64,
    /// `-hbar Im(omega)`, positive for a decaying component.
    pub energy_imag: f64,
    /// `2 energy_imag / hbar`, the occupation decay rate of the component.
    pub damping_rate: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StarkLevels {
    /// Ordered `1+, 1-, 2+, 2-`.
    pub levels: [StarkLevel; 4],
    /// `2 hbar Re(beta)`, shared by both families.
    pub splitting: f64,
}

impl StarkLevels {
    pub fn get(&self, label: LevelLabel) -> &StarkLevel {
        self.levels
            .iter()
            .find(|l| l.label == label)
            .expect("all four labels present")
    }
}

/// The four AC-Stark-split levels `hbar * omega_i^{+-}`.
pub fn stark_levels(spec: &Spectrum) -> StarkLevels {
    let hbar = spec.hbar;
    let level = |label, omega: Complex64| {
        let energy_imag = -hbar * omega.im;
        StarkLevel {
            label,
            energy_real: hbar * omega.re,
            energy_imag,
            damping_rate: 2.0 * energy_imag / hbar,
        }
    };
    let (w1p, w1m) = spec.omega1();
    let (w2p, w2m) = spec.omega2();
    StarkLevels {
        levels: [
            level(LevelLabel::OnePlus, w1p),
            level(LevelLabel::OneMinus, w1m),
            level(LevelLabel::TwoPlus, w2p),
            level(LevelLabel::TwoMinus, w2m),
        ],
        splitting: 2.0 * hbar * spec.beta.re,
    }
}

/// Default relative tolerance for [`is_resonant`].
pub const RESONANCE_TOL: f64 = 1e-9;

/// `delta = E_-/hbar + (omega_a - omega_l)`.
pub fn effective_detuning(spec: &Spectrum) -> f64 {
    spec.effective_detuning
}

/// `|delta| <= tol * Omega`. Without a drive the threshold becomes
/// `tol * omega_l`, or plain `tol` when `omega_l` is zero as well.
pub fn is_resonant(spec: &Spectrum, tol: f64) -> bool {
    spec.effective_detuning.abs() <= resonance_threshold(spec, tol)
}

pub(crate) fn resonance_threshold(spec: &Spectrum, tol: f64) -> f64 {
    if spec.omega_rabi > 0.0 {
        tol * spec.omega_rabi
    } else if spec.omega_l > 0.0 {
        tol * spec.omega_l
    } else {
        tol
    }
}

fn finite(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(param(name, format!("must be finite, got {v}")))
    }
}

fn positive(name: &'static str, v: f64) -> Result<()> {
    finite(name, v)?;
    if v > 0.0 {
        Ok(())
    } else {
        Err(param(name, format!("must be > 0, got {v}")))
    }
}

fn non_negative(name: &'static str, v: f64) -> Result<()> {
    finite(name, v)?;
    if v >= 0.0 {
        Ok(())
    } else {
        Err(param(name, format!("must be >= 0, got {v}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn spectrum_si_example() -> (AtomParams, DriveParams, Spectrum) {
        let k = PhysicalConstants::SI;
        let atom = AtomParams {
            mass: 1e-26,
            omega_a: 1e16,
            dipole: 1.6e-29,
            gamma1: 1e9,
            gamma2: 0.0,
        };
        let drive = DriveParams::si(&k, &atom, 1.0, 1e16, None).unwrap();
        let init = InitialCondition::from_velocity(&atom, 20.0);
        let spec = derive_spectrum(&k, &atom, &drive, &init).unwrap();
        (atom, drive, spec)
    }

    #[test]
    fn reduced_resonance_values() {
        let spec = Spectrum::from_reduced(&ReducedParams::new(1.0, 0.2, 0.0, 0.0)).unwrap();
        assert!((spec.epsilon - c(0.0, 0.1)).norm() < 1e-15);
        assert!((spec.beta - c(0.96f64.sqrt() / 2.0, 0.0)).norm() < 1e-15);
        assert!((spec.beta.re - 0.489_897_948_556_635_6).abs() < 1e-15);
        let lhs = spec.beta * spec.beta - spec.epsilon * spec.epsilon;
        assert!((lhs - c(0.25, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn free_atom_limit() {
        let spec = Spectrum::from_reduced(&ReducedParams::new(0.0, 0.0, 0.0, 2.0)).unwrap();
        assert_eq!(spec.epsilon, c(-1.0, 0.0));
        assert!((spec.beta - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn si_rabi_frequency() {
        let (atom, drive, _) = spectrum_si_example();
        let expected = 2.0 * atom.dipole * 1.0 / PhysicalConstants::SI.hbar;
        assert_eq!(drive.omega_rabi, expected);
        assert!(rel(drive.omega_rabi, 3.034e5) < 1e-3);
    }

    #[test]
    fn spectrum_invariants_si() {
        let (atom, drive, spec) = spectrum_si_example();
        let hbar = PhysicalConstants::SI.hbar;
        let p0 = atom.mass * 20.0;
        let p1 = p0 + hbar * drive.k;
        let ep = p1 * p1 / (2.0 * atom.mass) + p0 * p0 / (2.0 * atom.mass);
        let em = p1 * p1 / (2.0 * atom.mass) - p0 * p0 / (2.0 * atom.mass);
        assert!(rel(spec.e_plus, ep) < 1e-12);
        assert!(rel(spec.e_minus, em) < 1e-9);
        let b2 = spec.beta * spec.beta;
        let rhs = spec.epsilon * spec.epsilon + spec.omega_rabi.powi(2) / 4.0;
        assert!((b2 - rhs).norm() <= 1e-12 * rhs.norm());
        assert_eq!(spec.alpha1 - spec.alpha2, c(drive.omega_l, 0.0));
        let eps = -(c(spec.effective_detuning, 0.0) - c(0.0, spec.gamma_minus)) / 2.0;
        assert_eq!(spec.epsilon, eps);
    }

    #[test]
    fn doppler_dominated_detuning() {
        let (atom, drive, spec) = spectrum_si_example();
        let hbar = PhysicalConstants::SI.hbar;
        let p0 = atom.mass * 20.0;
        let oracle = drive.k * (p0 + hbar * drive.k / 2.0) / atom.mass;
        assert!(rel(effective_detuning(&spec), oracle) < 1e-12);
        let doppler = drive.k * 20.0;
        assert!(rel(doppler, 6.671e8) < 1e-3);
        assert!(rel(effective_detuning(&spec), doppler) < 1e-2);
        assert!(!is_resonant(&spec, RESONANCE_TOL));
    }

    #[test]
    fn principal_branch() {
        let b = complex_beta(c(0.1, 0.0) * c(0.0, 1.0), 1.0);
        assert!((b - c(0.96f64.sqrt() / 2.0, 0.0)).norm() < 1e-15);
        let weak = complex_beta(c(0.0, 0.6), 1.0);
        assert!(weak.re == 0.0);
        assert!((weak.im - 0.331_662_479_035_539_9).abs() < 1e-12);
        assert_eq!(complex_beta(c(0.0, 0.0), 0.0), c(0.0, 0.0));
        // negative radicand with a negative-zero imaginary part
        let b = complex_beta(c(0.0, -0.6), 1.0);
        assert!(b.re >= 0.0 && b.im >= 0.0);
    }

    #[test]
    fn undamped_resonant_levels() {
        let mut p = ReducedParams::new(1.0, 0.0, 0.0, 0.0);
        p.omega_l = 7.0;
        let levels = stark_levels(&Spectrum::from_reduced(&p).unwrap());
        let e = |l| levels.get(l).energy_real;
        assert!((e(LevelLabel::OnePlus) - 4.0).abs() < 1e-15);
        assert!((e(LevelLabel::OneMinus) - 3.0).abs() < 1e-15);
        assert!((e(LevelLabel::TwoPlus) + 3.0).abs() < 1e-15);
        assert!((e(LevelLabel::TwoMinus) + 4.0).abs() < 1e-15);
        assert!(levels.levels.iter().all(|l| l.energy_imag == 0.0));
    }

    #[test]
    fn undriven_splitting_is_detuning() {
        let levels = stark_levels(
            &Spectrum::from_reduced(&ReducedParams::new(0.0, 0.0, 0.0, -3.0)).unwrap(),
        );
        assert!((levels.splitting - 3.0).abs() < 1e-15);
    }

    #[test]
    fn damped_resonant_levels() {
        let levels =
            stark_levels(&Spectrum::from_reduced(&ReducedParams::new(1.0, 0.2, 0.0, 0.0)).unwrap());
        assert!((levels.splitting - 0.96f64.sqrt()).abs() < 1e-15);
        for l in &levels.levels {
            assert!((l.damping_rate - 0.2).abs() < 1e-15);
        }
    }

    #[test]
    fn level_structure() {
        let mut p = ReducedParams::new(0.7, 0.3, 0.1, 1.3);
        p.omega_l = 5.0;
        p.e_plus = 0.4;
        let spec = Spectrum::from_reduced(&p).unwrap();
        let lv = stark_levels(&spec);
        let g = |l| *lv.get(l);
        use LevelLabel::*;
        let s1 = g(OnePlus).energy_real - g(OneMinus).energy_real;
        let s2 = g(TwoPlus).energy_real - g(TwoMinus).energy_real;
        assert!(rel(s1, lv.splitting) < 1e-14);
        assert!(rel(s2, lv.splitting) < 1e-14);
        assert!((g(OnePlus).energy_real - g(TwoPlus).energy_real - 5.0).abs() < 1e-14);
        assert_eq!(g(OnePlus).energy_imag, g(TwoPlus).energy_imag);
        assert_eq!(g(OneMinus).energy_imag, g(TwoMinus).energy_imag);
        let total = g(OnePlus).damping_rate + g(OneMinus).damping_rate;
        assert!((total - 2.0 * spec.gamma_plus).abs() < 1e-15);
    }

    #[test]
    fn resonance_checks() {
        // p0 = -hbar k / 2 cancels the recoil term
        let k = PhysicalConstants::SI;
        let atom = AtomParams {
            mass: 1e-26,
            omega_a: 1e16,
            dipole: 1.6e-29,
            gamma1: 1e9,
            gamma2: 0.0,
        };
        let drive = DriveParams::si(&k, &atom, 1.0, 1e16, None).unwrap();
        let init = InitialCondition::state2(-k.hbar * drive.k / 2.0);
        let spec = derive_spectrum(&k, &atom, &drive, &init).unwrap();
        assert_eq!(spec.e_minus, 0.0);
        assert_eq!(effective_detuning(&spec), 0.0);
        assert!(is_resonant(&spec, RESONANCE_TOL));

        let near = Spectrum::from_reduced(&ReducedParams::new(1.0, 0.0, 0.0, 1e-12)).unwrap();
        assert!(is_resonant(&near, RESONANCE_TOL));
        let off = Spectrum::from_reduced(&ReducedParams::new(1.0, 0.0, 0.0, 1e-6)).unwrap();
        assert!(!is_resonant(&off, RESONANCE_TOL));
        let mut undriven = ReducedParams::new(0.0, 0.0, 0.0, 1e-8);
        undriven.omega_l = 100.0;
        assert!(is_resonant(
            &Spectrum::from_reduced(&undriven).unwrap(),
            RESONANCE_TOL
        ));
    }

    #[test]
    fn rejects_bad_parameters() {
        let k = PhysicalConstants::SI;
        let mut atom = AtomParams {
            mass: 1e-26,
            omega_a: 1e16,
            dipole: 1.6e-29,
            gamma1: 1e9,
            gamma2: 0.0,
        };
        let drive = DriveParams::si(&k, &atom, 1.0, 1e16, None).unwrap();
        atom.gamma1 = -1.0;
        let err = derive_spectrum(&k, &atom, &drive, &InitialCondition::state2(0.0)).unwrap_err();
        assert!(matches!(
            err,
            crate::Error::Parameter { name: "gamma1", .. }
        ));
        atom.gamma1 = 1.0;
        let init = InitialCondition {
            p0: 0.0,
            state: InitialState::Arbitrary([c(1.0, 0.0), c(0.0, 0.0)]),
        };
        assert!(derive_spectrum(&k, &atom, &drive, &init).is_err());
        assert!(Spectrum::from_reduced(&ReducedParams::new(f64::NAN, 0.0, 0.0, 0.0)).is_err());
        assert!(DriveParams::si(&k, &atom, 1.0, 1e16, Some(-1.0)).is_err());
    }

    #[test]
    fn component_forms_match_complex_root() {
        let cases = [
            (0.0, 0.2, 1.0),
            (1.3, -0.4, 0.7),
            (-2.0, 1.5, 0.1),
            (0.0, 1.2, 1.0),
            (3.0, 0.0, 0.0),
        ];
        for (d, gm, om) in cases {
            let eps = c(-d / 2.0, gm / 2.0);
            let b = complex_beta(eps, om);
            let (br, bi) = beta_components(d, gm, om);
            assert!(
                (b.re.abs() - br).abs() <= 1e-12 * br.max(1e-300) + 1e-15,
                "{d} {gm} {om}"
            );
            assert!(
                (b.im.abs() - bi).abs() <= 1e-12 * bi.max(1e-300) + 1e-15,
                "{d} {gm} {om}"
            );
        }
    }
}
