//! Truncated joint Hilbert space: index windows, joint states and the basic
//! constructors every other module builds on.
//!
//! The electron lives on an energy ladder indexed by `k` (net photon quanta
//! gained), the photons on one or two number ladders cut off at `n_max`.
//! Windows are always explicit: leakage into the window boundary is measured
//! by the evolution routines, never assumed away.

use crate::constants;
use crate::dd;
use crate::error::{Error, Result};
use ndarray::{Array2, Array3};
use num_complex::Complex64;

/// Finite realization of the infinite electron/photon ladders.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationConfig {
    /// Most negative electron ladder offset (<= 0).
    pub k_min: i32,
    /// Most positive electron ladder offset (>= 0).
    pub k_max: i32,
    /// Photon-number cutoff per mode.
    pub n_max: u32,
    /// Maximum admissible probability at the truncation boundary.
    pub leak_tol: f64,
}

impl TruncationConfig {
    pub fn new(k_min: i32, k_max: i32, n_max: u32, leak_tol: f64) -> Result<Self> {
        if k_min > 0 || k_max < 0 {
            return Err(Error::InvalidTruncation(format!(
                "need k_min <= 0 <= k_max, got [{k_min}, {k_max}]"
            )));
        }
        if !(leak_tol > 0.0 && leak_tol < 1.0) {
            return Err(Error::InvalidTruncation(format!(
                "leak_tol must lie in (0, 1), got {leak_tol}"
            )));
        }
        Ok(Self { k_min, k_max, n_max, leak_tol })
    }

    /// Window sized for vacuum-seeded or coherent single-mode runs:
    /// `n_max >= |alpha|^2 + 6|alpha| + 10`, `k` window `+-(n_max + 4)`.
    pub fn auto_single_mode(alpha_abs: f64, leak_tol: f64) -> Result<Self> {
        let n_max = (alpha_abs * alpha_abs + 6.0 * alpha_abs + 10.0).ceil() as u32;
        let k = n_max as i32 + 4;
        Self::new(-k, k, n_max, leak_tol)
    }

    pub fn k_count(&self) -> usize {
        (self.k_max - self.k_min) as usize + 1
    }

    pub fn n_count(&self) -> usize {
        self.n_max as usize + 1
    }

    /// Row index of ladder offset `k`, if inside the window.
    pub fn k_index(&self, k: i32) -> Option<usize> {
        (self.k_min..=self.k_max)
            .contains(&k)
            .then(|| (k - self.k_min) as usize)
    }

    /// Total dimension of the single-mode joint space.
    pub fn dim_single(&self) -> usize {
        self.k_count() * self.n_count()
    }

    /// Total dimension of the two-mode joint space.
    pub fn dim_two(&self) -> usize {
        self.k_count() * self.n_count() * self.n_count()
    }
}

/// Amplitude storage; the index layout is `(k, n)` or `(k, n1, n2)`.
#[derive(Debug, Clone)]
pub enum Amplitudes {
    Single(Array2<Complex64>),
    Two(Array3<Complex64>),
}

/// Joint electron-photon state on a truncation window.
///
/// Amplitudes outside the window do not exist; reading one is an error
/// rather than a silent zero.
#[derive(Debug, Clone)]
pub struct JointState {
    trunc: TruncationConfig,
    amps: Amplitudes,
}

impl JointState {
    pub(crate) fn new_single(trunc: TruncationConfig, amps: Array2<Complex64>) -> Self {
        debug_assert_eq!(amps.dim(), (trunc.k_count(), trunc.n_count()));
        Self { trunc, amps: Amplitudes::Single(amps) }
    }

    pub(crate) fn new_two(trunc: TruncationConfig, amps: Array3<Complex64>) -> Self {
        debug_assert_eq!(amps.dim(), (trunc.k_count(), trunc.n_count(), trunc.n_count()));
        Self { trunc, amps: Amplitudes::Two(amps) }
    }

    /// Build a single-mode state from explicit `(k, n)` amplitudes.
    pub fn from_single_amplitudes(
        trunc: TruncationConfig,
        amps: Array2<Complex64>,
    ) -> Result<Self> {
        if amps.dim() != (trunc.k_count(), trunc.n_count()) {
            return Err(Error::InvalidTruncation(format!(
                "amplitude shape {:?} does not match the window {:?}",
                amps.dim(),
                (trunc.k_count(), trunc.n_count())
            )));
        }
        Ok(Self::new_single(trunc, amps))
    }

    /// Build a two-mode state from explicit `(k, n1, n2)` amplitudes.
    pub fn from_two_mode_amplitudes(
        trunc: TruncationConfig,
        amps: Array3<Complex64>,
    ) -> Result<Self> {
        if amps.dim() != (trunc.k_count(), trunc.n_count(), trunc.n_count()) {
            return Err(Error::InvalidTruncation(format!(
                "amplitude shape {:?} does not match the window",
                amps.dim()
            )));
        }
        Ok(Self::new_two(trunc, amps))
    }

    pub fn trunc(&self) -> &TruncationConfig {
        &self.trunc
    }

    pub fn mode_count(&self) -> u8 {
        match self.amps {
            Amplitudes::Single(_) => 1,
            Amplitudes::Two(_) => 2,
        }
    }

    pub fn amps(&self) -> &Amplitudes {
        &self.amps
    }

    pub(crate) fn single_amps(&self) -> Result<&Array2<Complex64>> {
        match &self.amps {
            Amplitudes::Single(a) => Ok(a),
            Amplitudes::Two(_) => Err(Error::WrongModeCount { expected: 1, got: 2 }),
        }
    }

    pub(crate) fn two_amps(&self) -> Result<&Array3<Complex64>> {
        match &self.amps {
            Amplitudes::Two(a) => Ok(a),
            Amplitudes::Single(_) => Err(Error::WrongModeCount { expected: 2, got: 1 }),
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        match &self.amps {
            Amplitudes::Single(a) => a.iter().map(|c| c.norm_sqr()).sum(),
            Amplitudes::Two(a) => a.iter().map(|c| c.norm_sqr()).sum(),
        }
    }

    /// Amplitude at `(k, n)` for a single-mode state.
    pub fn amp(&self, k: i32, n: u32) -> Result<Complex64> {
        let a = self.single_amps()?;
        let ki = self
            .trunc
            .k_index(k)
            .ok_or(Error::IndexOutsideWindow { k: k as i64, n: n as i64 })?;
        if n > self.trunc.n_max {
            return Err(Error::IndexOutsideWindow { k: k as i64, n: n as i64 });
        }
        Ok(a[(ki, n as usize)])
    }

    /// Amplitude at `(k, n1, n2)` for a two-mode state.
    pub fn amp_two(&self, k: i32, n1: u32, n2: u32) -> Result<Complex64> {
        let a = self.two_amps()?;
        let ki = self
            .trunc
            .k_index(k)
            .ok_or(Error::IndexOutsideWindow { k: k as i64, n: n1 as i64 })?;
        if n1 > self.trunc.n_max || n2 > self.trunc.n_max {
            return Err(Error::IndexOutsideWindow { k: k as i64, n: n1.max(n2) as i64 });
        }
        Ok(a[(ki, n1 as usize, n2 as usize)])
    }
}

/// Relativistic kinematics of the incident electron.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElectronParams {
    /// Kinetic energy in eV.
    pub kinetic_energy_ev: f64,
    /// Lorentz factor.
    pub gamma: f64,
    /// Speed in m/s.
    pub velocity: f64,
}

/// `gamma = 1 + E_kin / (m_e c^2)`, `v_e = c sqrt(1 - 1/gamma^2)`.
pub fn electron_kinematics(kinetic_energy_ev: f64) -> Result<ElectronParams> {
    if kinetic_energy_ev.is_nan() || kinetic_energy_ev <= 0.0 {
        return Err(Error::NonPositiveEnergy(kinetic_energy_ev));
    }
    let gamma = 1.0 + kinetic_energy_ev / constants::electron_rest_energy_ev();
    let velocity = constants::SPEED_OF_LIGHT * (1.0 - 1.0 / (gamma * gamma)).sqrt();
    Ok(ElectronParams { kinetic_energy_ev, gamma, velocity })
}

/// `|k=0> (x) |0>`: unit amplitude at the origin of both ladders.
pub fn vacuum_joint_state(trunc: &TruncationConfig) -> JointState {
    let mut amps = Array2::zeros((trunc.k_count(), trunc.n_count()));
    amps[(trunc.k_index(0).expect("window contains k=0"), 0)] = Complex64::new(1.0, 0.0);
    JointState::new_single(*trunc, amps)
}

/// Two-mode vacuum `|k=0> (x) |0,0>`.
pub fn vacuum_two_mode_state(trunc: &TruncationConfig) -> JointState {
    let mut amps = Array3::zeros((trunc.k_count(), trunc.n_count(), trunc.n_count()));
    amps[(trunc.k_index(0).expect("window contains k=0"), 0, 0)] = Complex64::new(1.0, 0.0);
    JointState::new_two(*trunc, amps)
}

/// `|k=0> (x) |n>` photon Fock state.
pub fn fock_joint_state(trunc: &TruncationConfig, n: u32) -> Result<JointState> {
    if n > trunc.n_max {
        return Err(Error::IndexOutsideWindow { k: 0, n: n as i64 });
    }
    let mut amps = Array2::zeros((trunc.k_count(), trunc.n_count()));
    amps[(trunc.k_index(0).expect("window contains k=0"), n as usize)] = Complex64::new(1.0, 0.0);
    Ok(JointState::new_single(*trunc, amps))
}

/// Coherent-state amplitude `<n|alpha> = e^{-|a|^2/2} a^n / sqrt(n!)`.
pub fn poisson_amplitude(alpha: Complex64, n: u32) -> Complex64 {
    let aa = alpha.norm();
    if aa == 0.0 {
        return if n == 0 { Complex64::new(1.0, 0.0) } else { Complex64::ZERO };
    }
    let ln_mag = -0.5 * aa * aa + n as f64 * aa.ln() - 0.5 * dd::ln_factorial(n as usize);
    (alpha / aa).powu(n) * ln_mag.exp()
}

fn coherent_amps(alpha: Complex64, n_max: u32) -> (Vec<Complex64>, f64) {
    let amps: Vec<Complex64> = (0..=n_max).map(|n| poisson_amplitude(alpha, n)).collect();
    let kept: f64 = amps.iter().map(|c| c.norm_sqr()).sum();
    (amps, 1.0 - kept)
}

/// `|k=0> (x) |alpha>`, truncated at `n_max` and renormalized.
///
/// Returns the state together with the pre-normalization tail weight that was
/// cut off. Preconditions follow the window auto-sizing rule: the tail must
/// stay below `leak_tol`.
pub fn coherent_joint_state(
    trunc: &TruncationConfig,
    alpha: Complex64,
) -> Result<(JointState, f64)> {
    let (col, tail) = coherent_amps(alpha, trunc.n_max);
    if tail > trunc.leak_tol {
        return Err(Error::TailTooHeavy { weight: tail, leak_tol: trunc.leak_tol });
    }
    let scale = 1.0 / (1.0 - tail).sqrt();
    let mut amps = Array2::zeros((trunc.k_count(), trunc.n_count()));
    let k0 = trunc.k_index(0).expect("window contains k=0");
    for (n, a) in col.iter().enumerate() {
        amps[(k0, n)] = a * scale;
    }
    Ok((JointState::new_single(*trunc, amps), tail))
}

/// `|k=0> (x) |alpha_1> (x) |alpha_2>`, truncated and renormalized.
///
/// The reported tail weight is the total probability cut from the product
/// state.
pub fn coherent_two_mode_state(
    trunc: &TruncationConfig,
    alpha1: Complex64,
    alpha2: Complex64,
) -> Result<(JointState, f64)> {
    let (col1, tail1) = coherent_amps(alpha1, trunc.n_max);
    let (col2, tail2) = coherent_amps(alpha2, trunc.n_max);
    let tail = 1.0 - (1.0 - tail1) * (1.0 - tail2);
    if tail > trunc.leak_tol {
        return Err(Error::TailTooHeavy { weight: tail, leak_tol: trunc.leak_tol });
    }
    let scale = 1.0 / (1.0 - tail).sqrt();
    let mut amps = Array3::zeros((trunc.k_count(), trunc.n_count(), trunc.n_count()));
    let k0 = trunc.k_index(0).expect("window contains k=0");
    for (n1, a1) in col1.iter().enumerate() {
        for (n2, a2) in col2.iter().enumerate() {
            amps[(k0, n1, n2)] = a1 * a2 * scale;
        }
    }
    Ok((JointState::new_two(*trunc, amps), tail))
}
