//! Measurable quantities of an evolved joint state: coincidence table,
//! electron spectrum, reduced density matrices, purity and von Neumann
//! entropy, and the two-mode photon joint distribution.

use crate::error::{Error, Result};
use crate::linalg::hermitian_eigenvalues;
use crate::state::{Amplitudes, JointState};
use ndarray::Array2;
use num_complex::Complex64;

const NORM_TOL: f64 = 1e-9;

/// Coincidence probabilities `P_nk` of a single-mode pure state, with both
/// marginals cached.
#[derive(Debug, Clone)]
pub struct CoincidenceTable {
    /// `P[(n, k_index)]`, `k_index = k - k_min`.
    pub p: Array2<f64>,
    /// Electron spectrum `P_k = sum_n P_nk`.
    pub p_k: Vec<f64>,
    /// Photon-number distribution `P_n = sum_k P_nk`.
    pub p_n: Vec<f64>,
    pub k_min: i32,
}

impl CoincidenceTable {
    pub fn p_at(&self, n: u32, k: i32) -> f64 {
        self.p[(n as usize, (k - self.k_min) as usize)]
    }

    pub fn spectrum_at(&self, k: i32) -> f64 {
        self.p_k[(k - self.k_min) as usize]
    }
}

fn check_normalized(state: &JointState) -> Result<()> {
    let n2 = state.norm_sqr();
    if (n2 - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized { norm_sqr: n2 });
    }
    Ok(())
}

/// `P_nk = |amps[k, n]|^2` with marginals.
pub fn coincidence_table(state: &JointState) -> Result<CoincidenceTable> {
    check_normalized(state)?;
    let amps = state.single_amps()?;
    let t = state.trunc();
    let (kc, nc) = (t.k_count(), t.n_count());
    let mut p = Array2::zeros((nc, kc));
    let mut p_k = vec![0.0; kc];
    let mut p_n = vec![0.0; nc];
    for ((ki, n), c) in amps.indexed_iter() {
        let w = c.norm_sqr();
        p[(n, ki)] = w;
        p_k[ki] += w;
        p_n[n] += w;
    }
    Ok(CoincidenceTable { p, p_k, p_n, k_min: t.k_min })
}

/// Electron spectrum `P_k` for either mode count; returns `(p_k, k_min)`.
pub fn electron_spectrum(state: &JointState) -> Result<(Vec<f64>, i32)> {
    check_normalized(state)?;
    let t = state.trunc();
    let mut p_k = vec![0.0; t.k_count()];
    match state.amps() {
        Amplitudes::Single(a) => {
            for ((ki, _), c) in a.indexed_iter() {
                p_k[ki] += c.norm_sqr();
            }
        }
        Amplitudes::Two(a) => {
            for ((ki, _, _), c) in a.indexed_iter() {
                p_k[ki] += c.norm_sqr();
            }
        }
    }
    Ok((p_k, t.k_min))
}

/// Which subsystem survives the partial trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    Electron,
    Photon,
}

/// Reduced density matrix of a single-mode pure state.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    pub rho: Array2<Complex64>,
}

/// Partial trace over the complementary index.
pub fn reduced_density(state: &JointState, subsystem: Subsystem) -> Result<DensityMatrix> {
    check_normalized(state)?;
    let amps = state.single_amps()?;
    let (kc, nc) = amps.dim();
    let rho = match subsystem {
        Subsystem::Electron => {
            let mut rho = Array2::zeros((kc, kc));
            for k1 in 0..kc {
                for k2 in 0..kc {
                    let mut acc = Complex64::ZERO;
                    for n in 0..nc {
                        acc += amps[(k1, n)] * amps[(k2, n)].conj();
                    }
                    rho[(k1, k2)] = acc;
                }
            }
            rho
        }
        Subsystem::Photon => {
            let mut rho = Array2::zeros((nc, nc));
            for n1 in 0..nc {
                for n2 in 0..nc {
                    let mut acc = Complex64::ZERO;
                    for k in 0..kc {
                        acc += amps[(k, n1)] * amps[(k, n2)].conj();
                    }
                    rho[(n1, n2)] = acc;
                }
            }
            rho
        }
    };
    Ok(DensityMatrix { rho })
}

/// `Tr(rho^2) / (Tr rho)^2`.
pub fn purity(rho: &DensityMatrix) -> f64 {
    let m = &rho.rho;
    let n = m.nrows();
    let mut tr = 0.0;
    let mut tr2 = 0.0;
    for i in 0..n {
        tr += m[(i, i)].re;
        for j in 0..n {
            // Tr(rho^2) = sum_ij |rho_ij|^2 for Hermitian rho
            tr2 += m[(i, j)].norm_sqr();
        }
    }
    tr2 / (tr * tr)
}

/// Eigenvalues below this are clipped to zero; anything more negative marks
/// a non-physical upstream state.
const EIGENVALUE_FLOOR: f64 = -1e-10;

/// Von Neumann entropy `-sum lambda ln lambda` in nats.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    let evs = hermitian_eigenvalues(&rho.rho);
    let mut s = 0.0;
    for &l in &evs {
        if l < EIGENVALUE_FLOOR {
            return Err(Error::NonPhysicalState(l));
        }
        if l > 0.0 {
            s -= l * l.ln();
        }
    }
    Ok(s)
}

/// Two-mode photon joint distribution `P(n1, n2) = sum_k |amps|^2`.
pub fn photon_joint_distribution(state: &JointState) -> Result<Array2<f64>> {
    let amps = state.two_amps()?;
    let (_, n1c, n2c) = amps.dim();
    let mut p = Array2::zeros((n1c, n2c));
    for ((_, n1, n2), c) in amps.indexed_iter() {
        p[(n1, n2)] += c.norm_sqr();
    }
    Ok(p)
}
