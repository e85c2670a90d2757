//! Ground-truth evolution: the truncated generator of the scattering
//! operator as a dense complex matrix, applied through its matrix
//! exponential.
//!
//! Every term of the generator conserves `k + n` (single mode) or both
//! `n1 + n2` and `k + n2` (two modes), so the matrix is block-diagonal over
//! conserved sectors. The blocks are stored and exponentiated independently;
//! together they are the dense generator over the joint index space, and
//! [`Generator::to_dense`] materializes that matrix for diagnostics.

use crate::coupling::CouplingSet;
use crate::error::{Error, Result};
use crate::expm::expm;
use crate::state::{Amplitudes, JointState, TruncationConfig};
use ndarray::{Array1, Array2, Array3};
use num_complex::Complex64;

/// One conserved sector: member coordinates plus the projected generator.
#[derive(Debug, Clone)]
struct Block {
    /// Coordinates into the amplitude array; `(ki, n, 0)` for single mode,
    /// `(ki, n1, n2)` for two modes.
    members: Vec<(usize, usize, usize)>,
    matrix: Array2<Complex64>,
}

#[derive(Debug, Clone)]
enum GeneratorKind {
    SingleMode { coupling: CouplingSet },
    TwoMode { g_p12: Complex64 },
}

/// Truncated generator of the scattering operator.
#[derive(Debug, Clone)]
pub struct Generator {
    trunc: TruncationConfig,
    kind: GeneratorKind,
    blocks: Vec<Block>,
}

/// Evolution output: the final state plus the probability found within two
/// ladder steps of the window boundary.
#[derive(Debug, Clone)]
pub struct Evolved {
    pub state: JointState,
    pub leakage: f64,
}

/// Build the single-mode generator
/// `g b a+ - g* b+ a + g2 b+^2 a^2 - g2* b^2 a+^2 - g_p (a a+ + a+ a)`
/// on the truncation window.
///
/// The electron shift `b` lowers `k` by one; emission raises `n` and lowers
/// `k`. Requires `k_max - k_min >= 2 (n_max + 2)`.
pub fn build_single_mode_generator(
    coupling: &CouplingSet,
    trunc: &TruncationConfig,
) -> Result<Generator> {
    let k_span = (trunc.k_max - trunc.k_min) as i64;
    let required = 2 * (trunc.n_max as i64 + 2);
    if k_span < required {
        return Err(Error::WindowTooNarrow { k_span, required });
    }
    let g = coupling.g_qu;
    let g2 = coupling.g_qu2;
    let gp = coupling.g_p;
    let n_max = trunc.n_max as i64;

    let mut blocks = Vec::new();
    // sector label c = k + n
    for c in (trunc.k_min as i64)..=(trunc.k_max as i64 + n_max) {
        let n_lo = (c - trunc.k_max as i64).max(0);
        let n_hi = (c - trunc.k_min as i64).min(n_max);
        if n_lo > n_hi {
            continue;
        }
        let ns: Vec<i64> = (n_lo..=n_hi).collect();
        let dim = ns.len();
        let mut m = Array2::<Complex64>::zeros((dim, dim));
        let idx_of = |n: i64| (n - n_lo) as usize;
        for (col, &n) in ns.iter().enumerate() {
            let nf = n as f64;
            // g b a+ : (k, n) -> (k-1, n+1)
            if n < n_hi {
                m[(idx_of(n + 1), col)] += g * (nf + 1.0).sqrt();
            }
            // -g* b+ a : -> (k+1, n-1)
            if n > n_lo {
                m[(idx_of(n - 1), col)] += -g.conj() * nf.sqrt();
            }
            // g2 b+^2 a^2 : -> (k+2, n-2)
            if n - 2 >= n_lo {
                m[(idx_of(n - 2), col)] += g2 * (nf * (nf - 1.0)).sqrt();
            }
            // -g2* b^2 a+^2 : -> (k-2, n+2)
            if n + 2 <= n_hi {
                m[(idx_of(n + 2), col)] += -g2.conj() * ((nf + 1.0) * (nf + 2.0)).sqrt();
            }
            // -g_p (a a+ + a+ a) diagonal
            m[(col, col)] += -gp * (2.0 * nf + 1.0);
        }
        let members = ns
            .iter()
            .map(|&n| {
                let k = (c - n) as i32;
                (trunc.k_index(k).expect("sector k inside window"), n as usize, 0)
            })
            .collect();
        blocks.push(Block { members, matrix: m });
    }
    Ok(Generator { trunc: *trunc, kind: GeneratorKind::SingleMode { coupling: *coupling }, blocks })
}

/// Build the two-mode generator
/// `-2 g_p12 b1+ b2 a1 a2+ + 2 g_p12* b1 b2+ a1+ a2`;
/// `k` counts net `hbar (w2 - w1)` quanta gained by the electron.
pub fn build_two_mode_generator(
    g_p12: Complex64,
    trunc: &TruncationConfig,
) -> Result<Generator> {
    let k_span = (trunc.k_max - trunc.k_min) as i64;
    let required = 2 * trunc.n_max as i64;
    if k_span < required {
        return Err(Error::WindowTooNarrow { k_span, required });
    }
    let n_max = trunc.n_max as i64;
    let mut blocks = Vec::new();
    // conserved: total = n1 + n2, and m = k + n2
    for total in 0..=(2 * n_max) {
        for msum in (trunc.k_min as i64)..=(trunc.k_max as i64 + n_max) {
            let n2_lo = (msum - trunc.k_max as i64).max(0).max(total - n_max);
            let n2_hi = (msum - trunc.k_min as i64).min(n_max).min(total);
            if n2_lo > n2_hi {
                continue;
            }
            let n2s: Vec<i64> = (n2_lo..=n2_hi).collect();
            let dim = n2s.len();
            let mut m = Array2::<Complex64>::zeros((dim, dim));
            let idx_of = |n2: i64| (n2 - n2_lo) as usize;
            for (col, &n2) in n2s.iter().enumerate() {
                let n1 = total - n2;
                // -2 g_p12 b1+ b2 a1 a2+ : (k, n1, n2) -> (k-1, n1-1, n2+1)
                if n2 < n2_hi {
                    m[(idx_of(n2 + 1), col)] +=
                        -2.0 * g_p12 * ((n1 as f64) * (n2 as f64 + 1.0)).sqrt();
                }
                // +2 g_p12* b1 b2+ a1+ a2 : -> (k+1, n1+1, n2-1)
                if n2 > n2_lo {
                    m[(idx_of(n2 - 1), col)] +=
                        2.0 * g_p12.conj() * ((n1 as f64 + 1.0) * (n2 as f64)).sqrt();
                }
            }
            let members = n2s
                .iter()
                .map(|&n2| {
                    let k = (msum - n2) as i32;
                    let n1 = (total - n2) as usize;
                    (trunc.k_index(k).expect("sector k inside window"), n1, n2 as usize)
                })
                .collect();
            blocks.push(Block { members, matrix: m });
        }
    }
    Ok(Generator { trunc: *trunc, kind: GeneratorKind::TwoMode { g_p12 }, blocks })
}

impl Generator {
    pub fn trunc(&self) -> &TruncationConfig {
        &self.trunc
    }

    pub fn mode_count(&self) -> u8 {
        match self.kind {
            GeneratorKind::SingleMode { .. } => 1,
            GeneratorKind::TwoMode { .. } => 2,
        }
    }

    /// Joint-space dimension the generator acts on.
    pub fn dim(&self) -> usize {
        match self.kind {
            GeneratorKind::SingleMode { .. } => self.trunc.dim_single(),
            GeneratorKind::TwoMode { .. } => self.trunc.dim_two(),
        }
    }

    /// Coupling constants behind a single-mode generator.
    pub fn single_mode_coupling(&self) -> Option<&CouplingSet> {
        match &self.kind {
            GeneratorKind::SingleMode { coupling } => Some(coupling),
            GeneratorKind::TwoMode { .. } => None,
        }
    }

    /// `g_p12` behind a two-mode generator.
    pub fn two_mode_coupling(&self) -> Option<Complex64> {
        match &self.kind {
            GeneratorKind::SingleMode { .. } => None,
            GeneratorKind::TwoMode { g_p12 } => Some(*g_p12),
        }
    }

    /// Materialize the dense matrix over the flattened joint index space.
    /// Diagnostic helper; quadratic memory in [`Generator::dim`].
    pub fn to_dense(&self) -> Array2<Complex64> {
        let nc = self.trunc.n_count();
        let flat = |m: &(usize, usize, usize)| match self.kind {
            GeneratorKind::SingleMode { .. } => m.0 * nc + m.1,
            GeneratorKind::TwoMode { .. } => (m.0 * nc + m.1) * nc + m.2,
        };
        let dim = self.dim();
        let mut out = Array2::zeros((dim, dim));
        for block in &self.blocks {
            for (i, mi) in block.members.iter().enumerate() {
                for (j, mj) in block.members.iter().enumerate() {
                    let v = block.matrix[(i, j)];
                    if v != Complex64::ZERO {
                        out[(flat(mi), flat(mj))] = v;
                    }
                }
            }
        }
        out
    }

    /// `max |(G + G^H)_{ij}|` over the stored matrix; zero up to rounding
    /// whenever `g_p` (resp. `g_p'`) is purely imaginary.
    pub fn anti_hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for block in &self.blocks {
            let n = block.matrix.nrows();
            for i in 0..n {
                for j in 0..n {
                    let d = (block.matrix[(i, j)] + block.matrix[(j, i)].conj()).norm();
                    worst = worst.max(d);
                }
            }
        }
        worst
    }
}

fn gather(amps: &Amplitudes, members: &[(usize, usize, usize)]) -> Array1<Complex64> {
    let mut v = Array1::zeros(members.len());
    match amps {
        Amplitudes::Single(a) => {
            for (i, m) in members.iter().enumerate() {
                v[i] = a[(m.0, m.1)];
            }
        }
        Amplitudes::Two(a) => {
            for (i, m) in members.iter().enumerate() {
                v[i] = a[(m.0, m.1, m.2)];
            }
        }
    }
    v
}

fn scatter(amps: &mut Amplitudes, members: &[(usize, usize, usize)], v: &Array1<Complex64>) {
    match amps {
        Amplitudes::Single(a) => {
            for (i, m) in members.iter().enumerate() {
                a[(m.0, m.1)] = v[i];
            }
        }
        Amplitudes::Two(a) => {
            for (i, m) in members.iter().enumerate() {
                a[(m.0, m.1, m.2)] = v[i];
            }
        }
    }
}

fn apply_blocks(blocks: &[Block], amps: &Amplitudes, out: &mut Amplitudes) {
    for block in blocks {
        let v = gather(amps, &block.members);
        if v.iter().all(|c| *c == Complex64::ZERO) {
            continue;
        }
        let evolved = expm(&block.matrix).dot(&v);
        scatter(out, &block.members, &evolved);
    }
}

/// Probability within two ladder steps of any truncation boundary.
/// `n = 0` is a physical floor, not a truncation edge, and is not counted.
pub(crate) fn boundary_leakage(state: &JointState) -> f64 {
    let t = state.trunc();
    let kc = t.k_count();
    let nc = t.n_count();
    let near_k = |ki: usize| ki < 2.min(kc) || ki + 2 >= kc;
    let near_n = |n: usize| n + 2 >= nc;
    let mut acc = 0.0;
    match state.amps() {
        Amplitudes::Single(a) => {
            for ((ki, n), c) in a.indexed_iter() {
                if near_k(ki) || near_n(n) {
                    acc += c.norm_sqr();
                }
            }
        }
        Amplitudes::Two(a) => {
            for ((ki, n1, n2), c) in a.indexed_iter() {
                if near_k(ki) || near_n(n1) || near_n(n2) {
                    acc += c.norm_sqr();
                }
            }
        }
    }
    acc
}

fn check_same_window(gen: &Generator, state: &JointState) -> Result<()> {
    if gen.mode_count() != state.mode_count() {
        return Err(Error::WrongModeCount { expected: gen.mode_count(), got: state.mode_count() });
    }
    if gen.trunc != *state.trunc() {
        return Err(Error::InvalidTruncation(
            "generator and state use different windows".into(),
        ));
    }
    Ok(())
}

/// Apply `expm(G)` to the state; reports boundary leakage and fails with
/// [`Error::LeakageExceeded`] when it exceeds `leak_tol`.
pub fn evolve(gen: &Generator, state: &JointState) -> Result<Evolved> {
    check_same_window(gen, state)?;
    let mut out = match state.amps() {
        Amplitudes::Single(a) => Amplitudes::Single(Array2::zeros(a.dim())),
        Amplitudes::Two(a) => Amplitudes::Two(Array3::zeros(a.dim())),
    };
    apply_blocks(&gen.blocks, state.amps(), &mut out);
    let state = match out {
        Amplitudes::Single(a) => JointState::new_single(gen.trunc, a),
        Amplitudes::Two(a) => JointState::new_two(gen.trunc, a),
    };
    let leakage = boundary_leakage(&state);
    if leakage > gen.trunc.leak_tol {
        return Err(Error::LeakageExceeded { leakage, leak_tol: gen.trunc.leak_tol });
    }
    Ok(Evolved { state, leakage })
}

/// Split-form evolution: the product of three exponentials
/// (number phase, then pair emission/absorption, then single-photon
/// displacement) at caller-supplied modified constants.
pub fn evolve_split(
    coupling: &CouplingSet,
    g_qu2_prime: Complex64,
    g_p_prime: Complex64,
    state: &JointState,
) -> Result<Evolved> {
    let trunc = *state.trunc();
    let displacement =
        build_single_mode_generator(&CouplingSet::with_g_p(coupling.g_qu, Complex64::ZERO, Complex64::ZERO), &trunc)?;
    let squeeze = build_single_mode_generator(
        &CouplingSet::with_g_p(Complex64::ZERO, g_qu2_prime, Complex64::ZERO),
        &trunc,
    )?;
    check_same_window(&displacement, state)?;

    // rightmost factor first: e^{-g_p'(2n+1)} is diagonal
    let mut amps = state.single_amps()?.clone();
    for ((_, n), c) in amps.indexed_iter_mut() {
        *c *= (-g_p_prime * (2.0 * n as f64 + 1.0)).exp();
    }
    let mut mid = Amplitudes::Single(Array2::zeros(amps.dim()));
    apply_blocks(&squeeze.blocks, &Amplitudes::Single(amps), &mut mid);
    let mut fin = Amplitudes::Single(Array2::zeros((trunc.k_count(), trunc.n_count())));
    apply_blocks(&displacement.blocks, &mid, &mut fin);

    let state = match fin {
        Amplitudes::Single(a) => JointState::new_single(trunc, a),
        Amplitudes::Two(_) => unreachable!(),
    };
    let leakage = boundary_leakage(&state);
    if leakage > trunc.leak_tol {
        return Err(Error::LeakageExceeded { leakage, leak_tol: trunc.leak_tol });
    }
    Ok(Evolved { state, leakage })
}
