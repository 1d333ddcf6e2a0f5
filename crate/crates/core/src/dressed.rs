//! Dressed states of the coupled atom-field system.
//!
//! In the frame co-rotating with the drive the Hamiltonian is the constant
//! matrix `hbar * [E_+/2hbar - i gamma_plus/2] + hbar * [[-eps, -Omega/2], [-Omega/2, eps]]`
//! with eigenvalues offset by `+-beta`. Its eigenvectors, dressed with the
//! `exp(-+i omega_l t / 2)` factors, are the dressed states:
//!
//! * `|phi_->` belongs to `+beta`: energy `E_+/2 + hbar Re(beta)`, occupation
//!   decay rate `gamma_plus - 2 Im(beta)`;
//! * `|phi_+>` belongs to `-beta`: energy `E_+/2 - hbar Re(beta)`, decay rate
//!   `gamma_plus + 2 Im(beta)`.
//!
//! The eigenvectors of a non-Hermitian matrix are not orthogonal; each is
//! normalized to unit length at `t = 0` and nothing more is assumed.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::error::{param, Error, Result};
use crate::oracle::{LatticeHamiltonian, State};
use crate::spectral::{AtomParams, PhysicalConstants, Spectrum};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    /// Eigenvalue offset `+beta`.
    Minus,
    /// Eigenvalue offset `-beta`.
    Plus,
}

impl Branch {
    fn offset(self, beta: Complex64) -> Complex64 {
        match self {
            Branch::Minus => beta,
            Branch::Plus => -beta,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DressedBasis {
    /// Mixing angle of `|phi_->`, `atan(|c2| / |c1|)` in `[0, pi/2)`.
    pub theta_minus_mix: f64,
    pub theta_plus_mix: f64,
    /// Phase of the `|phi1>` component relative to the `|phi2>` component,
    /// folded into `(-pi/2, pi/2]`.
    pub phase_minus: f64,
    pub phase_plus: f64,
    /// Weight of `|phi_->` in the initial state `|phi2>`.
    pub a1: Complex64,
    /// Weight of `|phi_+>` in the initial state `|phi2>`.
    pub a2: Complex64,
    /// Unit-norm `|phi_->` at `t = 0` in the bare basis.
    pub vec_minus: State,
    pub vec_plus: State,
}

/// Unit-norm eigenvector of the co-rotating matrix for `branch`.
///
/// Either `(eps - lambda, Omega/2)` or `(Omega/2, -(eps + lambda))` spans the
/// eigenspace of `lambda = +-beta`; the one with the larger norm is used so the
/// uncoupled limit stays well defined.
pub fn dressed_vector(spec: &Spectrum, branch: Branch) -> State {
    let lambda = branch.offset(spec.beta);
    let eps = spec.epsilon;
    let half = Complex64::new(spec.omega_rabi / 2.0, 0.0);
    let first = [eps - lambda, half];
    let second = [half, -(eps + lambda)];
    let n1 = norm(&first);
    let n2 = norm(&second);
    let (v, n) = if n1 >= n2 { (first, n1) } else { (second, n2) };
    if n == 0.0 {
        // no coupling, no splitting: any basis diagonalizes
        return match branch {
            Branch::Minus => [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
            Branch::Plus => [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
        };
    }
    [v[0] / n, v[1] / n]
}

fn norm(v: &State) -> f64 {
    (v[0].norm_sqr() + v[1].norm_sqr()).sqrt()
}

fn mixing_angle(v: &State) -> (f64, f64) {
    let theta = v[1].norm().atan2(v[0].norm());
    // relative phase of the phi1 component, modulo pi
    let mut phase = (v[0] * v[1].conj()).arg();
    if phase > FRAC_PI_2 {
        phase -= std::f64::consts::PI;
    } else if phase <= -FRAC_PI_2 {
        phase += std::f64::consts::PI;
    }
    (theta, phase)
}

/// Dressed basis and the decomposition of the initial state `|phi2>` in it.
pub fn dressed_basis(spec: &Spectrum) -> Result<DressedBasis> {
    let scale = spec.epsilon.norm() + spec.omega_rabi;
    if !(spec.omega_rabi > 0.0) || spec.beta.norm() <= 1e-12 * scale {
        return Err(Error::DegenerateBasis);
    }
    let vm = dressed_vector(spec, Branch::Minus);
    let vp = dressed_vector(spec, Branch::Plus);
    let det = vm[0] * vp[1] - vp[0] * vm[1];
    if det.norm() <= 1e-12 {
        return Err(Error::DegenerateBasis);
    }
    let (theta_minus_mix, phase_minus) = mixing_angle(&vm);
    let (theta_plus_mix, phase_plus) = mixing_angle(&vp);
    Ok(DressedBasis {
        theta_minus_mix,
        theta_plus_mix,
        phase_minus,
        phase_plus,
        a1: -vp[0] / det,
        a2: vm[0] / det,
        vec_minus: vm,
        vec_plus: vp,
    })
}

/// Complex frequency of a branch's common factor,
/// `E_+/2hbar - i gamma_plus/2 +- beta`.
fn branch_frequency(spec: &Spectrum, branch: Branch) -> Complex64 {
    Complex64::new(spec.e_plus / (2.0 * spec.hbar), -spec.gamma_plus / 2.0)
        + branch.offset(spec.beta)
}

/// Lab-frame dressed solution
/// `v(t) = (c1 exp(-i omega_l t / 2), c2 exp(i omega_l t / 2)) exp(-i mu t)`
/// with `mu` from [`branch_frequency`].
pub fn dressed_solution(spec: &Spectrum, branch: Branch, t: f64) -> State {
    let v = dressed_vector(spec, branch);
    let common = (-I * branch_frequency(spec, branch) * t).exp();
    let rot = Complex64::from_polar(1.0, -spec.omega_l * t / 2.0);
    [v[0] * rot * common, v[1] * rot.conj() * common]
}

/// Two-point lattice Hamiltonian of the configuration behind `spec`.
pub fn lattice_hamiltonian(spec: &Spectrum) -> LatticeHamiltonian {
    let hbar = spec.hbar;
    let split = hbar * (spec.effective_detuning + spec.omega_l);
    LatticeHamiltonian {
        hbar,
        h11: Complex64::new((spec.e_plus + split) / 2.0, -hbar * spec.gamma1),
        h22: Complex64::new((spec.e_plus - split) / 2.0, -hbar * spec.gamma2),
        coupling_mag: hbar * spec.omega_rabi / 2.0,
        omega_l: spec.omega_l,
    }
}

/// Largest normalized Schrodinger residual `|i hbar dv/dt - H(t) v|` of the
/// two dressed solutions over `t_samples`.
///
/// Each residual is divided by `|v(t)|` and by the size of the Hamiltonian,
/// `max(|H11|, |H22|) + hbar (Omega + gamma_plus + |delta|)`, so that a large
/// common energy offset does not masquerade as a diagonalization error.
pub fn verify_diagonalization(spec: &Spectrum, t_samples: &[f64]) -> f64 {
    let h = lattice_hamiltonian(spec);
    let hbar = spec.hbar;
    let scale = h.h11.norm().max(h.h22.norm())
        + hbar * (spec.omega_rabi + spec.gamma_plus + spec.effective_detuning.abs());
    let mut worst: f64 = 0.0;
    for branch in [Branch::Minus, Branch::Plus] {
        let mu = branch_frequency(spec, branch);
        let w1 = mu + spec.omega_l / 2.0;
        let w2 = mu - spec.omega_l / 2.0;
        for &t in t_samples {
            let v = dressed_solution(spec, branch, t);
            // i hbar dv/dt with dv_k/dt = -i w_k v_k
            let lhs = [hbar * w1 * v[0], hbar * w2 * v[1]];
            let hv = h.apply(t, &v);
            let r = (lhs[0] - hv[0]).norm().max((lhs[1] - hv[1]).norm());
            let size = norm(&v);
            if r == 0.0 {
                continue;
            }
            worst = worst.max(r / (size * scale));
        }
    }
    worst
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DressedLevels {
    /// `E_+/2 + hbar Re(beta)`
    pub energy_minus: f64,
    /// `E_+/2 - hbar Re(beta)`
    pub energy_plus: f64,
    /// `1 / (gamma_plus - 2 Im(beta))`, infinite when the rate vanishes.
    pub lifetime_minus: f64,
    /// `1 / (gamma_plus + 2 Im(beta))`
    pub lifetime_plus: f64,
}

impl DressedLevels {
    pub fn rate_minus(&self) -> f64 {
        1.0 / self.lifetime_minus
    }

    pub fn rate_plus(&self) -> f64 {
        1.0 / self.lifetime_plus
    }
}

/// Occupation decay rates `(gamma_plus - 2 Im beta, gamma_plus + 2 Im beta)`.
pub fn dressed_rates(spec: &Spectrum) -> (f64, f64) {
    let bi = spec.beta.im;
    (spec.gamma_plus - 2.0 * bi, spec.gamma_plus + 2.0 * bi)
}

pub fn dressed_levels(spec: &Spectrum) -> DressedLevels {
    let hb = spec.hbar * spec.beta.re;
    let (rm, rp) = dressed_rates(spec);
    let lifetime = |rate: f64| {
        if rate > 0.0 {
            1.0 / rate
        } else {
            f64::INFINITY
        }
    };
    DressedLevels {
        energy_minus: spec.e_plus / 2.0 + hb,
        energy_plus: spec.e_plus / 2.0 - hb,
        lifetime_minus: lifetime(rm),
        lifetime_plus: lifetime(rp),
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DriveDesign {
    /// Weak-coupling field bound `hbar gamma_minus / (2 D)` (V/m).
    pub e0_max: f64,
    /// Field amplitude producing the requested Rabi frequency (V/m).
    pub e0: f64,
    /// Drive frequency (rad/s).
    pub omega_l: f64,
    /// `1 / (gamma_plus - sqrt(gamma_minus^2 - Omega^2))` (s).
    pub tau_minus_achievable: f64,
}

/// Drive parameters that keep the atom in the long-lived dressed state
/// `|phi_->`: a resonant drive with Rabi frequency below `gamma_minus`.
///
/// Without `p0` the drive frequency equals the transition frequency. With
/// `p0` it also absorbs the recoil and Doppler shift so that the effective
/// detuning vanishes for a free-space wave number `omega_l / c`.
pub fn design_long_lived_drive(
    constants: &PhysicalConstants,
    atom: &AtomParams,
    requested_omega_rabi: f64,
    p0: Option<f64>,
) -> Result<DriveDesign> {
    constants.validate()?;
    atom.validate()?;
    let gm = atom.gamma1 - atom.gamma2;
    let gp = atom.gamma1 + atom.gamma2;
    if !(gm > 0.0) {
        return Err(param("gamma1", "lifetime elongation needs gamma1 > gamma2"));
    }
    if !(requested_omega_rabi >= 0.0) {
        return Err(param(
            "omega_rabi",
            format!("must be >= 0, got {requested_omega_rabi}"),
        ));
    }
    if requested_omega_rabi >= gm {
        return Err(Error::WeakCouplingViolation {
            omega_rabi: requested_omega_rabi,
            gamma_minus: gm,
        });
    }

    let hbar = constants.hbar;
    let mut omega_l = atom.omega_a;
    if let Some(p0) = p0 {
        // omega_l = omega_a + E_-(k = omega_l / c) / hbar; the shift is tiny
        // compared to omega_a so the fixed point converges in a few rounds
        for _ in 0..8 {
            let hk = hbar * omega_l / constants.c;
            let shift = hk * (2.0 * p0 + hk) / (2.0 * atom.mass) / hbar;
            omega_l = atom.omega_a + shift;
        }
    }

    let s = (gm * gm - requested_omega_rabi * requested_omega_rabi).sqrt();
    let rate = gp - s;
    Ok(DriveDesign {
        e0_max: hbar * gm / (2.0 * atom.dipole),
        e0: hbar * requested_omega_rabi / (2.0 * atom.dipole),
        omega_l,
        tau_minus_achievable: if rate > 0.0 {
            1.0 / rate
        } else {
            f64::INFINITY
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::ReducedParams;
    use std::f64::consts::{FRAC_PI_4, PI};

    fn reduced(omega: f64, g1: f64, g2: f64, delta: f64) -> Spectrum {
        Spectrum::from_reduced(&ReducedParams::new(omega, g1, g2, delta)).unwrap()
    }

    fn one_period(spec: &Spectrum) -> Vec<f64> {
        let period = 2.0 * PI / spec.characteristic_rate();
        (0..50).map(|i| period * i as f64 / 49.0).collect()
    }

    #[test]
    fn equal_mixing_at_undamped_resonance() {
        let b = dressed_basis(&reduced(0.8, 0.0, 0.0, 0.0)).unwrap();
        assert!((b.theta_minus_mix - FRAC_PI_4).abs() < 1e-15);
        assert!((b.theta_plus_mix - FRAC_PI_4).abs() < 1e-15);
    }

    #[test]
    fn decoupling_limit() {
        let delta = 2.0;
        let b = dressed_basis(&reduced(1e-6 * delta, 0.0, 0.0, delta)).unwrap();
        let t = b.theta_minus_mix;
        assert!(t.min(FRAC_PI_2 - t) < 1e-3);
        assert!((0.0..FRAC_PI_2).contains(&t));
    }

    #[test]
    fn reconstruction() {
        for spec in [
            reduced(1.0, 0.2, 0.0, 0.0),
            reduced(0.4, 0.9, 0.3, 1.7),
            reduced(3.0, 0.0, 1.0, -2.0),
        ] {
            let b = dressed_basis(&spec).unwrap();
            let r0 = b.a1 * b.vec_minus[0] + b.a2 * b.vec_plus[0];
            let r1 = b.a1 * b.vec_minus[1] + b.a2 * b.vec_plus[1];
            assert!(r0.norm() < 1e-10);
            assert!((r1 - 1.0).norm() < 1e-10);
            for v in [b.vec_minus, b.vec_plus] {
                assert!((norm(&v) - 1.0).abs() < 1e-14);
            }
            assert!(b.phase_minus > -FRAC_PI_2 && b.phase_minus <= FRAC_PI_2);
            assert!(b.phase_plus > -FRAC_PI_2 && b.phase_plus <= FRAC_PI_2);
        }
    }

    #[test]
    fn degenerate_basis_rejected() {
        assert_eq!(
            dressed_basis(&reduced(1.0, 1.0, 0.0, 0.0)),
            Err(Error::DegenerateBasis)
        );
        assert_eq!(
            dressed_basis(&reduced(0.0, 0.3, 0.0, 1.0)),
            Err(Error::DegenerateBasis)
        );
    }

    #[test]
    fn diagonalization_residual() {
        let mut p = ReducedParams::new(1.0, 0.2, 0.0, 0.0);
        p.omega_l = 6.0;
        p.e_plus = 0.7;
        let spec = Spectrum::from_reduced(&p).unwrap();
        assert!(verify_diagonalization(&spec, &one_period(&spec)) < 1e-10);
    }

    #[test]
    fn undriven_branches_are_bare() {
        let mut p = ReducedParams::new(0.0, 0.3, 0.1, 1.2);
        p.omega_l = 2.5;
        let spec = Spectrum::from_reduced(&p).unwrap();
        assert!(verify_diagonalization(&spec, &one_period(&spec)) < 1e-15);
    }

    #[test]
    fn corrupted_beta_is_detected() {
        let mut spec = reduced(1.0, 0.2, 0.0, 0.4);
        spec.beta *= 1.01;
        assert!(verify_diagonalization(&spec, &one_period(&spec)) > 1e-4);
    }

    #[test]
    fn strong_resonance_lifetimes() {
        let lv = dressed_levels(&reduced(1.0, 0.2, 0.0, 0.0));
        assert!((lv.lifetime_minus - 5.0).abs() < 1e-13);
        assert!((lv.lifetime_plus - 5.0).abs() < 1e-13);
        assert!((lv.energy_minus - lv.energy_plus - 0.96f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn weak_resonance_lifetimes() {
        let lv = dressed_levels(&reduced(0.5, 1.2, 0.0, 0.0));
        let s = (1.44f64 - 0.25).sqrt();
        assert!((lv.lifetime_minus - 1.0 / (1.2 - s)).abs() < 1e-12);
        assert!((lv.lifetime_plus - 1.0 / (1.2 + s)).abs() < 1e-14);
        assert!((lv.lifetime_minus - 9.17).abs() / 9.17 < 1e-3);
        assert!((lv.lifetime_plus - 0.4365).abs() / 0.4365 < 1e-3);
        assert_eq!(lv.energy_minus, lv.energy_plus);
    }

    #[test]
    fn undriven_ground_state_lives_forever() {
        let spec = reduced(0.0, 0.7, 0.0, 0.0);
        assert!(dressed_levels(&spec).lifetime_minus.is_infinite());
        assert!((dressed_levels(&spec).lifetime_plus - 1.0 / 1.4).abs() < 1e-15);
    }

    #[test]
    fn rate_sum_and_energy_sum() {
        let mut p = ReducedParams::new(0.6, 0.8, 0.1, 0.9);
        p.e_plus = 1.3;
        let spec = Spectrum::from_reduced(&p).unwrap();
        let lv = dressed_levels(&spec);
        let (rm, rp) = dressed_rates(&spec);
        // exact up to the rounding of the two sums
        assert!((rm + rp - 2.0 * spec.gamma_plus).abs() <= 4.0 * f64::EPSILON * spec.gamma_plus);
        assert!((lv.energy_minus + lv.energy_plus - spec.e_plus).abs() < 1e-15);
    }

    #[test]
    fn elongation_decreases_with_drive() {
        let mut prev = f64::INFINITY;
        for i in 1..=100 {
            let om = 1.2 * i as f64 / 101.0;
            let tau = dressed_levels(&reduced(om, 1.2, 0.0, 0.0)).lifetime_minus;
            assert!(tau < prev, "Omega={om}");
            prev = tau;
        }
    }

    fn reference_atom(tau1: f64) -> AtomParams {
        AtomParams {
            mass: 1e-26,
            omega_a: 1e16,
            dipole: 1.6e-29,
            gamma1: 1.0 / tau1,
            gamma2: 0.0,
        }
    }

    #[test]
    fn design_numbers() {
        let k = PhysicalConstants::SI;
        let fast = design_long_lived_drive(&k, &reference_atom(1e-9), 0.0, None).unwrap();
        let slow = design_long_lived_drive(&k, &reference_atom(1e-6), 0.0, None).unwrap();
        assert!((fast.e0_max - 3.3e3).abs() / 3.3e3 < 0.01);
        assert!((slow.e0_max - 3.3).abs() / 3.3 < 0.01);
        assert_eq!(fast.omega_l, 1e16);

        let g1 = 1e9;
        let d = design_long_lived_drive(&k, &reference_atom(1.0 / g1), 0.6 * g1, None).unwrap();
        assert!((d.tau_minus_achievable * g1 - 5.0).abs() < 1e-12);
        assert!(d.e0 < d.e0_max);

        assert!(matches!(
            design_long_lived_drive(&k, &reference_atom(1e-9), 1e9, None),
            Err(Error::WeakCouplingViolation { .. })
        ));
    }

    #[test]
    fn design_with_recoil_is_resonant() {
        use crate::spectral::{derive_spectrum, DriveParams, InitialCondition};
        let k = PhysicalConstants::SI;
        let atom = reference_atom(1e-9);
        let p0 = atom.mass * 20.0;
        let d = design_long_lived_drive(&k, &atom, 1e8, Some(p0)).unwrap();
        let drive = DriveParams::si(&k, &atom, d.e0, d.omega_l, None).unwrap();
        let spec = derive_spectrum(&k, &atom, &drive, &InitialCondition::state2(p0)).unwrap();
        assert!(spec.effective_detuning.abs() < 1e-6 * d.omega_l * 1e-6);
        assert!((spec.omega_rabi - 1e8).abs() / 1e8 < 1e-12);
    }
}
