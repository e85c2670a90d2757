//! Kapitza-Dirac diffraction: phase imprint of a standing light wave on an
//! electron plane wave and the resulting transverse-momentum distribution.
//!
//! Only `|J_n|^2` of the imprinted phase survives in the observable pattern,
//! so the distribution is represented directly; diffraction orders sit at
//! even multiples of the photon momentum `k_p = w0 / c`.

use crate::bessel::bessel_j_sequence;
use crate::constants::{ELECTRON_MASS, ELEMENTARY_CHARGE, HBAR};
use crate::error::{Error, Result};
use crate::state::ElectronParams;

/// Standing wave `E_s(x, t) = 2 |E0| cos(k_p x) cos(w0 t)` crossed by the
/// electron over length `L`.
#[derive(Debug, Clone, Copy)]
pub struct StandingWaveParams {
    /// Field amplitude per beam, V/m.
    pub e0: f64,
    /// Interaction length, m.
    pub length: f64,
    /// Angular frequency, rad/s.
    pub omega0: f64,
    pub electron: ElectronParams,
}

/// Dimensionless Bessel argument `eta = e^2 |E0|^2 L / (2 gamma m_e hbar w0^2 v_e)`.
pub fn kd_eta(params: &StandingWaveParams) -> f64 {
    ELEMENTARY_CHARGE * ELEMENTARY_CHARGE * params.e0 * params.e0 * params.length
        / (2.0
            * params.electron.gamma
            * ELECTRON_MASS
            * HBAR
            * params.omega0
            * params.omega0
            * params.electron.velocity)
}

/// Inverse of [`kd_eta`]: the per-beam amplitude that realizes a given eta.
pub fn kd_field_for_eta(eta: f64, length: f64, omega0: f64, electron: &ElectronParams) -> f64 {
    (eta * 2.0 * electron.gamma * ELECTRON_MASS * HBAR * omega0 * omega0 * electron.velocity
        / (ELEMENTARY_CHARGE * ELEMENTARY_CHARGE * length))
        .sqrt()
}

/// Transverse-momentum distribution `P_n = J_n(eta)^2` at momentum `2 n k_p`.
#[derive(Debug, Clone)]
pub struct KdDistribution {
    /// `P_n` for `n = -n_half_width ..= n_half_width`.
    probs: Vec<f64>,
    n_half_width: u32,
    pub eta: f64,
}

impl KdDistribution {
    pub fn n_half_width(&self) -> u32 {
        self.n_half_width
    }

    pub fn prob(&self, n: i32) -> f64 {
        self.probs[(n + self.n_half_width as i32) as usize]
    }

    /// Diffraction orders as `(n, momentum / k_p, P_n)` rows.
    pub fn rows(&self) -> impl Iterator<Item = (i32, i32, f64)> + '_ {
        let half = self.n_half_width as i32;
        self.probs
            .iter()
            .enumerate()
            .map(move |(i, &p)| {
                let n = i as i32 - half;
                (n, 2 * n, p)
            })
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }
}

/// Suggested window: `n_half_width >= eta + 10`.
pub fn kd_auto_half_width(eta: f64) -> u32 {
    eta.ceil() as u32 + 10
}

/// `P_n = J_n(eta)^2`; fails with [`Error::WindowTooNarrow`] when the window
/// leaves more than 1e-9 of the unit sum outside.
pub fn kd_momentum_distribution(eta: f64, n_half_width: u32) -> Result<KdDistribution> {
    assert!(eta >= 0.0, "eta is |E0|^2-proportional and cannot be negative");
    let seq = bessel_j_sequence(n_half_width, eta);
    let mut probs = vec![0.0; 2 * n_half_width as usize + 1];
    for n in 0..=n_half_width as usize {
        let p = seq[n] * seq[n];
        probs[n_half_width as usize + n] = p;
        probs[n_half_width as usize - n] = p; // J_{-n}^2 = J_n^2
    }
    let dist = KdDistribution { probs, n_half_width, eta };
    let total = dist.total();
    if total < 1.0 - 1e-9 {
        return Err(Error::WindowTooNarrow {
            k_span: n_half_width as i64,
            required: kd_auto_half_width(eta) as i64,
        });
    }
    Ok(dist)
}
