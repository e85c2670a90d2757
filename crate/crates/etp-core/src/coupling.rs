//! First- and second-order quantum coupling constants from sampled field
//! profiles along the electron trajectory.
//!
//! A profile holds the complex vector electric field of one optical mode on a
//! uniform z grid. The couplings are oscillatory line integrals; the grids
//! must resolve the oscillation (>= 8 samples per phase cycle) or the
//! operations refuse to integrate.

use crate::constants::{ELECTRON_MASS, ELEMENTARY_CHARGE, HBAR};
use crate::error::{Error, Result};
use crate::quadrature::{integrate_uniform, Quadrature};
use crate::state::ElectronParams;
use num_complex::Complex64;
use std::io::{BufRead, Write};

/// Complex vector electric field of one optical mode sampled along the
/// electron trajectory.
///
/// The samples are read as the per-photon mode field (the field a single
/// excitation of the mode carries); whatever normalization the caller's
/// field solver uses must be applied before constructing the profile.
#[derive(Debug, Clone)]
pub struct FieldProfile {
    z: Vec<f64>,
    /// `(E_x, E_y, E_z)` in V/m at each sample.
    e: Vec<[Complex64; 3]>,
    /// Angular frequency of the mode in rad/s.
    omega: f64,
    h: f64,
}

const UNIFORMITY_REL_TOL: f64 = 1e-9;

impl FieldProfile {
    pub fn new(z: Vec<f64>, e: Vec<[Complex64; 3]>, omega: f64) -> Result<Self> {
        if z.len() < 3 {
            return Err(Error::EmptyProfile);
        }
        if z.len() != e.len() {
            return Err(Error::InvalidProfile(format!(
                "{} z samples but {} field samples",
                z.len(),
                e.len()
            )));
        }
        if omega.is_nan() || omega <= 0.0 || !omega.is_finite() {
            return Err(Error::InvalidProfile(format!("omega must be positive, got {omega}")));
        }
        for (i, zi) in z.iter().enumerate() {
            if !zi.is_finite() {
                return Err(Error::InvalidProfile(format!("z[{i}] is not finite")));
            }
        }
        for (i, ei) in e.iter().enumerate() {
            if ei.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
                return Err(Error::InvalidProfile(format!("field sample {i} is not finite")));
            }
        }
        let h = z[1] - z[0];
        if h.is_nan() || h <= 0.0 {
            return Err(Error::InvalidProfile("z must be strictly increasing".into()));
        }
        for w in z.windows(2) {
            let step = w[1] - w[0];
            if step.is_nan() || step <= 0.0 {
                return Err(Error::InvalidProfile("z must be strictly increasing".into()));
            }
            if ((step - h) / h).abs() > UNIFORMITY_REL_TOL {
                return Err(Error::InvalidProfile(format!(
                    "non-uniform spacing: {step:.9e} vs {h:.9e}"
                )));
            }
        }
        Ok(Self { z, e, omega, h })
    }

    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn spacing(&self) -> f64 {
        self.h
    }

    pub fn z(&self) -> &[f64] {
        &self.z
    }

    pub fn samples(&self) -> &[[Complex64; 3]] {
        &self.e
    }

    /// Parse the profile CSV: header `z_m,Ex_re,Ex_im,Ey_re,Ey_im,Ez_re,Ez_im`,
    /// SI units, one row per sample.
    pub fn from_csv<R: BufRead>(reader: R, omega: f64) -> Result<Self> {
        let mut lines = reader.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::InvalidProfile("empty file".into()))?
            .map_err(|e| Error::InvalidProfile(format!("read failure: {e}")))?;
        if header.trim() != CSV_HEADER {
            return Err(Error::InvalidProfile(format!(
                "bad header {header:?}, expected {CSV_HEADER:?}"
            )));
        }
        let mut z = Vec::new();
        let mut e = Vec::new();
        for (lineno, line) in lines.enumerate() {
            let line = line.map_err(|er| Error::InvalidProfile(format!("read failure: {er}")))?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 7 {
                return Err(Error::InvalidProfile(format!(
                    "row {}: expected 7 columns, got {}",
                    lineno + 2,
                    fields.len()
                )));
            }
            let mut vals = [0.0f64; 7];
            for (i, f) in fields.iter().enumerate() {
                vals[i] = f.trim().parse::<f64>().map_err(|er| {
                    Error::InvalidProfile(format!("row {}: {er}", lineno + 2))
                })?;
                if !vals[i].is_finite() {
                    return Err(Error::InvalidProfile(format!(
                        "row {}: non-finite value",
                        lineno + 2
                    )));
                }
            }
            z.push(vals[0]);
            e.push([
                Complex64::new(vals[1], vals[2]),
                Complex64::new(vals[3], vals[4]),
                Complex64::new(vals[5], vals[6]),
            ]);
        }
        Self::new(z, e, omega)
    }

    pub fn to_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{CSV_HEADER}")?;
        for (zi, ei) in self.z.iter().zip(&self.e) {
            writeln!(
                w,
                "{},{},{},{},{},{},{}",
                zi, ei[0].re, ei[0].im, ei[1].re, ei[1].im, ei[2].re, ei[2].im
            )?;
        }
        Ok(())
    }
}

pub const CSV_HEADER: &str = "z_m,Ex_re,Ex_im,Ey_re,Ey_im,Ez_re,Ez_im";

fn nyquist_check(h: f64, omega_eff: f64, velocity: f64) -> Result<()> {
    if omega_eff == 0.0 {
        return Ok(()); // degenerate difference frequency: no oscillation
    }
    let bound = std::f64::consts::PI * velocity / (4.0 * omega_eff);
    if h >= bound {
        return Err(Error::Undersampled { h, bound });
    }
    Ok(())
}

/// `E'` contraction used by the second-order integrands:
/// `E'_i . E'_j = E_ix E_jx + E_iy E_jy + E_iz E_jz / gamma^2`.
fn e_prime_dot(a: &[Complex64; 3], b: &[Complex64; 3], gamma: f64) -> Complex64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2] / (gamma * gamma)
}

/// First-order coupling `(e / hbar w) Int E_z(z) e^{-i w z / v} dz`.
pub fn first_order_coupling(
    profile: &FieldProfile,
    electron: &ElectronParams,
) -> Result<Complex64> {
    Ok(first_order_coupling_est(profile, electron)?.value)
}

/// Same as [`first_order_coupling`] but keeping the quadrature error estimate.
pub fn first_order_coupling_est(
    profile: &FieldProfile,
    electron: &ElectronParams,
) -> Result<Quadrature> {
    nyquist_check(profile.h, profile.omega, electron.velocity)?;
    let rate = profile.omega / electron.velocity;
    let samples: Vec<Complex64> = profile
        .z
        .iter()
        .zip(&profile.e)
        .map(|(z, e)| e[2] * Complex64::from_polar(1.0, -rate * z))
        .collect();
    let mut q = integrate_uniform(&samples, profile.h);
    let pref = ELEMENTARY_CHARGE / (HBAR * profile.omega);
    q.value *= pref;
    q.error_estimate *= pref;
    Ok(q)
}

fn check_same_grid(a: &FieldProfile, b: &FieldProfile) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::GridMismatch);
    }
    let scale = a.h.max(a.z[0].abs()).max(1e-300);
    if a.z
        .iter()
        .zip(&b.z)
        .any(|(x, y)| (x - y).abs() > 1e-12 * scale.max(x.abs()))
    {
        return Err(Error::GridMismatch);
    }
    Ok(())
}

fn second_order_prefactor(omega_i: f64, omega_j: f64, electron: &ElectronParams) -> Complex64 {
    Complex64::new(0.0, 1.0) * ELEMENTARY_CHARGE * ELEMENTARY_CHARGE
        / (HBAR * omega_i * omega_j * 2.0 * ELECTRON_MASS * electron.gamma * electron.velocity)
}

/// Two-photon coupling
/// `(i e^2 / (hbar w_i w_j 2 m_e gamma v)) Int E'_i . E'_j e^{-i (w_i + w_j) z / v} dz`.
pub fn second_order_coupling(
    profile_i: &FieldProfile,
    profile_j: &FieldProfile,
    electron: &ElectronParams,
) -> Result<Complex64> {
    Ok(second_order_coupling_est(profile_i, profile_j, electron)?.value)
}

pub fn second_order_coupling_est(
    profile_i: &FieldProfile,
    profile_j: &FieldProfile,
    electron: &ElectronParams,
) -> Result<Quadrature> {
    check_same_grid(profile_i, profile_j)?;
    let omega_sum = profile_i.omega + profile_j.omega;
    nyquist_check(profile_i.h, omega_sum, electron.velocity)?;
    let rate = omega_sum / electron.velocity;
    let gamma = electron.gamma;
    let samples: Vec<Complex64> = profile_i
        .z
        .iter()
        .zip(profile_i.e.iter().zip(&profile_j.e))
        .map(|(z, (ei, ej))| e_prime_dot(ei, ej, gamma) * Complex64::from_polar(1.0, -rate * z))
        .collect();
    let mut q = integrate_uniform(&samples, profile_i.h);
    let pref = second_order_prefactor(profile_i.omega, profile_j.omega, electron);
    q.value *= pref;
    q.error_estimate *= pref.norm();
    Ok(q)
}

/// Emit-one-absorb-one coupling
/// `(i e^2 / (hbar w_i w_j 2 m_e gamma v)) Int E'_i . E'_j* e^{-i (w_i - w_j) z / v} dz`.
pub fn ponderomotive_coupling(
    profile_i: &FieldProfile,
    profile_j: &FieldProfile,
    electron: &ElectronParams,
) -> Result<Complex64> {
    Ok(ponderomotive_coupling_est(profile_i, profile_j, electron)?.value)
}

pub fn ponderomotive_coupling_est(
    profile_i: &FieldProfile,
    profile_j: &FieldProfile,
    electron: &ElectronParams,
) -> Result<Quadrature> {
    check_same_grid(profile_i, profile_j)?;
    let omega_diff = profile_i.omega - profile_j.omega;
    nyquist_check(profile_i.h, omega_diff.abs(), electron.velocity)?;
    let rate = omega_diff / electron.velocity;
    let gamma = electron.gamma;
    let samples: Vec<Complex64> = profile_i
        .z
        .iter()
        .zip(profile_i.e.iter().zip(&profile_j.e))
        .map(|(z, (ei, ej))| {
            let conj = [ej[0].conj(), ej[1].conj(), ej[2].conj()];
            e_prime_dot(ei, &conj, gamma) * Complex64::from_polar(1.0, -rate * z)
        })
        .collect();
    let mut q = integrate_uniform(&samples, profile_i.h);
    let pref = second_order_prefactor(profile_i.omega, profile_j.omega, electron);
    q.value *= pref;
    q.error_estimate *= pref.norm();
    Ok(q)
}

/// The coupling constants of one single-mode interaction, with the phases
/// that control single-photon / two-photon interference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingSet {
    pub g_qu: Complex64,
    pub g_qu2: Complex64,
    pub g_p: Complex64,
    pub phi_g1: f64,
    pub phi_g2: f64,
    /// `2 phi_g1 + phi_g2`, in radians.
    pub delta_phi: f64,
}

impl CouplingSet {
    pub fn with_g_p(g_qu: Complex64, g_qu2: Complex64, g_p: Complex64) -> Self {
        let phi_g1 = if g_qu == Complex64::ZERO { 0.0 } else { g_qu.arg() };
        let phi_g2 = if g_qu2 == Complex64::ZERO { 0.0 } else { g_qu2.arg() };
        Self { g_qu, g_qu2, g_p, phi_g1, phi_g2, delta_phi: 2.0 * phi_g1 + phi_g2 }
    }

    /// Magnitudes-and-phases constructor used by scenario configs.
    pub fn from_polar(g_qu_abs: f64, phi_g1: f64, g_qu2_abs: f64, phi_g2: f64) -> Self {
        assemble_coupling_set(
            Complex64::from_polar(g_qu_abs, phi_g1),
            Complex64::from_polar(g_qu2_abs, phi_g2),
            true,
        )
    }
}

/// Build a [`CouplingSet`]; under phase matching `g_p = i |g_qu2|`.
pub fn assemble_coupling_set(g_qu: Complex64, g_qu2: Complex64, phase_matched: bool) -> CouplingSet {
    let g_p = if phase_matched {
        Complex64::new(0.0, g_qu2.norm())
    } else {
        Complex64::ZERO
    };
    CouplingSet::with_g_p(g_qu, g_qu2, g_p)
}
