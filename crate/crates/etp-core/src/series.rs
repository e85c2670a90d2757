//! Closed-form final-state coefficient series for the scattering operator:
//! vacuum-input and Fock-input coefficients of the split-form product,
//! the strong-field Bessel limit, and the two-mode (nonlinear-Compton)
//! coefficients.
//!
//! The series are assembled from Fock matrix elements of the three factor
//! operators: displacement-type elements (finite alternating sums in the
//! log domain), pair-emission elements (ratio-driven sums accumulated in
//! double-double arithmetic, since their terms cancel heavily at strong
//! coupling), and su(2) rotation elements (Wigner-d through the Jacobi
//! three-term recurrence). None of this shares code with the matrix
//! exponential in [`crate::oracle`], which is what makes the two routes an
//! independent cross-check.

use crate::bessel::bessel_j;
use crate::coupling::CouplingSet;
use crate::dd::{ln_factorial, ln_factorial_dd, Dd};
use crate::error::{Error, Result};
use crate::state::{poisson_amplitude, JointState, TruncationConfig};
use ndarray::{Array2, Array3};
use num_complex::Complex64;

/// Truncation control for the infinite sums.
#[derive(Debug, Clone, Copy)]
pub struct SeriesControl {
    /// Stop once |term| < term_tol * |partial sum| holds twice in a row.
    pub term_tol: f64,
    /// Hard cap per summation index.
    pub max_index: usize,
}

impl Default for SeriesControl {
    fn default() -> Self {
        Self { term_tol: 1e-16, max_index: 200 }
    }
}

/// Cancellation budget: with double-double accumulation, a max-term to sum
/// ratio beyond this leaves fewer than ~12 reliable digits.
const CANCELLATION_LIMIT: f64 = 1e17;

/// `<m| exp(g a+ - g* a) |n>`.
///
/// The phase `e^{i (m-n) arg g}` is common to every term, so the sum itself
/// is real. The seed term is evaluated once in the log domain and the rest
/// follow from exact rational ratios, accumulated in double-double so the
/// alternating cancellation costs no digits.
pub(crate) fn displacement_element(m: usize, n: usize, g: Complex64) -> Complex64 {
    let ga = g.norm();
    if ga == 0.0 {
        return if m == n { Complex64::new(1.0, 0.0) } else { Complex64::ZERO };
    }
    let ga_sq = ga * ga;
    // seed at j_max = min(m, n), the largest term, then march j downward
    let j_max = m.min(n);
    let ln_seed = -0.5 * ga_sq + ((m + n - 2 * j_max) as f64) * ga.ln()
        + 0.5 * (ln_factorial(m) + ln_factorial(n))
        - ln_factorial(j_max)
        - ln_factorial(m - j_max)
        - ln_factorial(n - j_max);
    let seed_sign = if (n - j_max).is_multiple_of(2) { 1.0 } else { -1.0 };
    let mut term = Dd::from_f64(seed_sign * ln_seed.exp());
    let mut acc = term;
    for j in (1..=j_max).rev() {
        // t_{j-1} / t_j = -j |g|^2 / ((m-j+1)(n-j+1))
        let num = -(j as f64) * ga_sq;
        let den = ((m - j + 1) * (n - j + 1)) as f64;
        term = term.mul_f64(num).div_f64(den);
        acc = acc.add(term);
    }
    let phase = (g / ga).powi(m as i32 - n as i32);
    phase * acc.value()
}

/// `<m| exp(g2 a^2 - g2* a+^2) |n>`.
///
/// Written as `e^{i theta t} (-1)^t` times a real alternating sum whose
/// consecutive-term ratio is rational; the ratio products and the sum run in
/// double-double, with a cancellation guard.
pub(crate) fn squeeze_element(m: usize, n: usize, g2: Complex64) -> Result<Complex64> {
    if g2.norm() == 0.0 {
        return Ok(if m == n { Complex64::new(1.0, 0.0) } else { Complex64::ZERO });
    }
    if (m as i64 - n as i64).rem_euclid(2) != 0 {
        return Ok(Complex64::ZERO);
    }
    let t = (m as i64 - n as i64) / 2;
    let b_lo = (-t).max(0);
    let b_hi = n as i64 / 2;
    if b_lo > b_hi {
        return Ok(Complex64::ZERO);
    }
    let zeta = 2.0 * g2.conj();
    let r = zeta.norm();
    let phase_dir = zeta / r; // e^{i theta}
    let tanh_r = r.tanh();
    let sinh_sq = r.sinh() * r.sinh();
    let ln_cosh = r.cosh().ln();

    // seed term at b = b_lo (single product, no cancellation)
    let a0 = t + b_lo;
    let ln_seed = ((t + 2 * b_lo) as f64) * tanh_r.ln()
        - ((n as i64 - 2 * b_lo) as f64 + 0.5) * ln_cosh
        + 0.5 * (ln_factorial(n) + ln_factorial(m))
        - ln_factorial((n as i64 - 2 * b_lo) as usize)
        - ((t + 2 * b_lo) as f64) * std::f64::consts::LN_2
        - ln_factorial(a0 as usize)
        - ln_factorial(b_lo as usize);
    let seed_sign = if (t + b_lo) % 2 == 0 { 1.0 } else { -1.0 };

    let mut term = Dd::from_f64(seed_sign * ln_seed.exp());
    let mut acc = term;
    let mut max_mag = term.abs();
    for b in b_lo..b_hi {
        // term_{b+1} / term_b = -sinh^2 r (n-2b)(n-2b-1) / (4 (t+b+1)(b+1))
        let num = -sinh_sq * ((n as i64 - 2 * b) as f64) * ((n as i64 - 2 * b - 1) as f64);
        let den = 4.0 * ((t + b + 1) as f64) * ((b + 1) as f64);
        term = term.mul_f64(num).div_f64(den);
        acc = acc.add(term);
        max_mag = max_mag.max(term.abs());
    }
    let sum = acc.value();
    if max_mag > CANCELLATION_LIMIT * sum.abs().max(f64::MIN_POSITIVE) {
        return Err(Error::CancellationLoss {
            digits_left: 31.0 - (max_mag / sum.abs().max(f64::MIN_POSITIVE)).log10(),
        });
    }
    // phase: Lambda^a Lambda'^b = (-1)^(t+b) e^{i theta t} tanh^{t+2b}; the
    // (-1)^b and magnitudes live in the real sum above
    let phase = if t >= 0 {
        phase_dir.powi(t as i32)
    } else {
        phase_dir.conj().powi((-t) as i32)
    };
    Ok(phase * sum)
}

/// Jacobi polynomial `P_s^{(a,b)}(x)` by forward three-term recurrence.
fn jacobi(s: usize, a: f64, b: f64, x: f64) -> f64 {
    if s == 0 {
        return 1.0;
    }
    let mut pm1 = 1.0;
    let mut p = 0.5 * (a - b + (a + b + 2.0) * x);
    for i in 1..s {
        let s1 = (i + 1) as f64;
        let c1 = 2.0 * s1 * (s1 + a + b) * (2.0 * s1 + a + b - 2.0);
        let c2 = (2.0 * s1 + a + b - 1.0) * (a * a - b * b);
        let c3 = (2.0 * s1 + a + b - 2.0) * (2.0 * s1 + a + b - 1.0) * (2.0 * s1 + a + b);
        let c4 = 2.0 * (s1 + a - 1.0) * (s1 + b - 1.0) * (2.0 * s1 + a + b);
        let next = ((c2 + c3 * x) * p - c4 * pm1) / c1;
        pm1 = p;
        p = next;
    }
    p
}

fn ln_binom(n: usize, k: usize) -> f64 {
    ln_factorial_dd(n)
        .add(ln_factorial_dd(k).mul_f64(-1.0))
        .add(ln_factorial_dd(n - k).mul_f64(-1.0))
        .value()
}

/// Wigner rotation element `d^j_{m' m}(beta)` with doubled indices
/// (`j2 = 2j` etc.) so half-integer spins stay integral.
pub(crate) fn wigner_d_doubled(j2: i64, mprime2: i64, m2: i64, beta: f64) -> f64 {
    let jpm = (j2 + m2) / 2;
    let jmm = (j2 - m2) / 2;
    let jpmp = (j2 + mprime2) / 2;
    let jmmp = (j2 - mprime2) / 2;
    if jpm.min(jmm).min(jpmp).min(jmmp) < 0 {
        return 0.0;
    }
    let k = jpm.min(jmm).min(jpmp).min(jmmp);
    let (a, lam) = if k == jpm || k == jmmp {
        ((mprime2 - m2) / 2, (mprime2 - m2) / 2)
    } else {
        ((m2 - mprime2) / 2, 0)
    };
    let b = j2 - 2 * k - a;
    debug_assert!(a >= 0 && b >= 0);
    let ln_pre = 0.5 * ln_binom((j2 - k) as usize, (k + a) as usize)
        - 0.5 * ln_binom((k + b) as usize, k as usize);
    let sign = if lam % 2 == 0 { 1.0 } else { -1.0 };
    let half = 0.5 * beta;
    sign * ln_pre.exp()
        * half.sin().powi(a as i32)
        * half.cos().powi(b as i32)
        * jacobi(k as usize, a as f64, b as f64, beta.cos())
}

/// `<n1f, n2f| exp(-2 g b1+ b2 a1 a2+ + 2 g* b1 b2+ a1+ a2) |n1, n2>`
/// photonic part (the electron shift is fixed by `n1f - n1`).
pub(crate) fn su2_element(
    n1f: usize,
    n2f: usize,
    n1: usize,
    n2: usize,
    g_p12: Complex64,
) -> Complex64 {
    if n1f + n2f != n1 + n2 {
        return Complex64::ZERO;
    }
    if g_p12.norm() == 0.0 {
        return if n1f == n1 { Complex64::new(1.0, 0.0) } else { Complex64::ZERO };
    }
    let xi = 2.0 * g_p12.conj();
    let beta = 2.0 * xi.norm();
    let j2 = (n1 + n2) as i64;
    let m2 = n1 as i64 - n2 as i64;
    let mp2 = n1f as i64 - n2f as i64;
    // element = e^{i arg(xi) (m' - m)} d^j_{m m'}(beta)
    let d = wigner_d_doubled(j2, m2, mp2, beta);
    let steps = (mp2 - m2) / 2;
    let dir = xi / xi.norm();
    let phase = if steps >= 0 { dir.powi(steps as i32) } else { dir.conj().powi((-steps) as i32) };
    phase * d
}

fn converged(term: f64, acc: f64, tol: f64, small_streak: &mut u32) -> bool {
    if term <= tol * (acc.abs() + 1e-300) {
        *small_streak += 1;
    } else {
        *small_streak = 0;
    }
    *small_streak >= 2
}

/// Vacuum-input coefficients `C_p` of the split-form scattering product for
/// final states `|E0 - p hw0> |p>`, `p = 0..=p_max`.
///
/// `C_p = sum_m <p|D(g_qu)|2m> <2m|S(g_qu2')|0>`; the phase bookkeeping
/// reproduces the `e^{i p phi_g1} e^{-i m delta_phi}` structure of the
/// printed double sum (with the normalizable `e^{-|g|^2/2}` prefactor).
pub fn vacuum_coefficients(
    coupling: &CouplingSet,
    g_qu2_prime: Complex64,
    p_max: usize,
    ctl: &SeriesControl,
) -> Result<Vec<Complex64>> {
    let g = coupling.g_qu;
    let mut out = Vec::with_capacity(p_max + 1);
    for p in 0..=p_max {
        let mut acc = Complex64::ZERO;
        let mut streak = 0u32;
        let mut done = false;
        for m in 0..=ctl.max_index {
            let sq = squeeze_element(2 * m, 0, g_qu2_prime)?;
            let term = displacement_element(p, 2 * m, g) * sq;
            acc += term;
            if converged(term.norm(), acc.norm(), ctl.term_tol, &mut streak) {
                done = true;
                break;
            }
        }
        if !done {
            return Err(Error::SeriesNotConverged { cap: ctl.max_index });
        }
        out.push(acc);
    }
    Ok(out)
}

/// Fock-input coefficients `C_p^n` for final states `|E0 - p hw0> |n + p>`,
/// `p` over `p_min..=p_max`, including the `e^{-g_p'(2n+1)}` factor.
#[allow(clippy::too_many_arguments)]
pub fn coherent_coefficients(
    coupling: &CouplingSet,
    g_qu2_prime: Complex64,
    g_p_prime: Complex64,
    n: u32,
    p_min: i64,
    p_max: i64,
    ctl: &SeriesControl,
) -> Result<Vec<Complex64>> {
    if p_min < -(n as i64) {
        return Err(Error::IndexDomain { p: p_min, n });
    }
    let g = coupling.g_qu;
    let n_i = n as i64;
    let gp_factor = (-g_p_prime * (2.0 * n as f64 + 1.0)).exp();
    let t_lo = -(n_i / 2);
    let mut out = Vec::with_capacity((p_max - p_min + 1).max(0) as usize);
    for p in p_min..=p_max {
        let m_final = (n_i + p) as usize;
        let mut acc = Complex64::ZERO;
        let mut streak = 0u32;
        let mut done = false;
        for step in 0..=ctl.max_index {
            let t = t_lo + step as i64;
            let mid = (n_i + 2 * t) as usize;
            let sq = squeeze_element(mid, n as usize, g_qu2_prime)?;
            let term = displacement_element(m_final, mid, g) * sq;
            acc += term;
            // only trust the tail test beyond the squeeze ridge
            if t >= 1 && converged(term.norm(), acc.norm(), ctl.term_tol, &mut streak) {
                done = true;
                break;
            }
        }
        if !done {
            return Err(Error::SeriesNotConverged { cap: ctl.max_index });
        }
        out.push(gp_factor * acc);
    }
    Ok(out)
}

/// Strong-field limit: `C_p^n ~ e^{-g_p'(2n+1)} e^{i p phi_g1}
/// sum_m J_{p-2m}(2|g1|) J_{-m}(2|g2|) e^{-i m delta_phi}`, with
/// `g1 = g_qu sqrt(nbar)` and `g2 = g_qu2 nbar` supplied pre-multiplied.
#[allow(clippy::too_many_arguments)]
pub fn strong_field_coefficients(
    g1: Complex64,
    g2: Complex64,
    delta_phi: f64,
    g_p_prime: Complex64,
    n: u32,
    p_min: i64,
    p_max: i64,
    ctl: &SeriesControl,
) -> Result<Vec<Complex64>> {
    let phi_g1 = if g1 == Complex64::ZERO { 0.0 } else { g1.arg() };
    let x1 = 2.0 * g1.norm();
    let x2 = 2.0 * g2.norm();
    // J_{-m}(x2) is negligible once |m| passes x2 plus a safety margin
    let m_span = (x2.ceil() as i64) + 40;
    if m_span as usize > ctl.max_index.max(40) {
        return Err(Error::SeriesNotConverged { cap: ctl.max_index });
    }
    let gp_factor = (-g_p_prime * (2.0 * n as f64 + 1.0)).exp();
    let mut out = Vec::new();
    for p in p_min..=p_max {
        let mut acc = Complex64::ZERO;
        for m in -m_span..=m_span {
            let j1 = bessel_j((p - 2 * m) as i32, x1);
            let j2v = bessel_j((-m) as i32, x2);
            if j1 == 0.0 || j2v == 0.0 {
                continue;
            }
            acc += Complex64::from_polar(j1 * j2v, -(m as f64) * delta_phi);
        }
        let phase = Complex64::from_polar(1.0, p as f64 * phi_g1);
        out.push(gp_factor * phase * acc);
    }
    Ok(out)
}

/// One two-mode coefficient `c_{n1 n2 k}`: Poisson envelopes of the two
/// coherent states times the su(2) rotation element that transfers `k`
/// quanta from mode 2 to mode 1.
pub fn compton_coefficient(
    alpha1: Complex64,
    alpha2: Complex64,
    g_p12: Complex64,
    n1: u32,
    n2: u32,
    k: i32,
) -> Complex64 {
    let m1 = n1 as i64 - k as i64;
    let m2 = n2 as i64 + k as i64;
    if m1 < 0 || m2 < 0 {
        return Complex64::ZERO;
    }
    poisson_amplitude(alpha1, m1 as u32)
        * poisson_amplitude(alpha2, m2 as u32)
        * su2_element(n1 as usize, n2 as usize, m1 as usize, m2 as usize, g_p12)
}

/// Raw coefficient table `c_{n1 n2 k}` over the truncation window.
///
/// Fails with [`Error::TailTooHeavy`] when either coherent tail does not fit
/// the window.
pub fn compton_coefficients(
    alpha1: Complex64,
    alpha2: Complex64,
    g_p12: Complex64,
    trunc2: &TruncationConfig,
    _ctl: &SeriesControl,
) -> Result<JointState> {
    for alpha in [alpha1, alpha2] {
        let kept: f64 = (0..=trunc2.n_max)
            .map(|n| poisson_amplitude(alpha, n).norm_sqr())
            .sum();
        if 1.0 - kept > trunc2.leak_tol {
            return Err(Error::TailTooHeavy { weight: 1.0 - kept, leak_tol: trunc2.leak_tol });
        }
    }
    let nc = trunc2.n_count();
    let mut amps = Array3::zeros((trunc2.k_count(), nc, nc));
    for (ki, k) in (trunc2.k_min..=trunc2.k_max).enumerate() {
        for n1 in 0..nc {
            for n2 in 0..nc {
                amps[(ki, n1, n2)] =
                    compton_coefficient(alpha1, alpha2, g_p12, n1 as u32, n2 as u32, k);
            }
        }
    }
    Ok(JointState::new_two(*trunc2, amps))
}

/// Analytic-engine single-mode final state from vacuum input, renormalized
/// on the window; returns the pre-normalization deficit.
pub fn analytic_vacuum_state(
    coupling: &CouplingSet,
    g_qu2_prime: Complex64,
    trunc: &TruncationConfig,
    ctl: &SeriesControl,
) -> Result<(JointState, f64)> {
    let p_cap = (trunc.n_max as i64).min(-(trunc.k_min as i64)) as usize;
    let coeffs = vacuum_coefficients(coupling, g_qu2_prime, p_cap, ctl)?;
    let mut amps = Array2::zeros((trunc.k_count(), trunc.n_count()));
    for (p, c) in coeffs.iter().enumerate() {
        let ki = trunc.k_index(-(p as i32)).expect("p <= -k_min");
        amps[(ki, p)] = *c;
    }
    renormalize_single(trunc, amps)
}

/// Analytic-engine single-mode final state from a coherent input `|alpha>`.
pub fn analytic_coherent_state(
    coupling: &CouplingSet,
    g_qu2_prime: Complex64,
    g_p_prime: Complex64,
    alpha: Complex64,
    trunc: &TruncationConfig,
    ctl: &SeriesControl,
) -> Result<(JointState, f64)> {
    let mut amps = Array2::<Complex64>::zeros((trunc.k_count(), trunc.n_count()));
    for n0 in 0..=trunc.n_max {
        let weight = poisson_amplitude(alpha, n0);
        if weight.norm_sqr() < 1e-30 {
            continue;
        }
        let p_lo = (-(n0 as i64)).max(-(trunc.k_max as i64));
        let p_hi = ((trunc.n_max - n0) as i64).min(-(trunc.k_min as i64));
        if p_lo > p_hi {
            continue;
        }
        let coeffs =
            coherent_coefficients(coupling, g_qu2_prime, g_p_prime, n0, p_lo, p_hi, ctl)?;
        for (i, c) in coeffs.iter().enumerate() {
            let p = p_lo + i as i64;
            let ki = trunc.k_index(-p as i32).expect("p within k window");
            amps[(ki, (n0 as i64 + p) as usize)] += weight * c;
        }
    }
    renormalize_single(trunc, amps)
}

/// Analytic-engine two-mode final state (coherent x coherent input),
/// renormalized on the window.
pub fn analytic_compton_state(
    alpha1: Complex64,
    alpha2: Complex64,
    g_p12: Complex64,
    trunc2: &TruncationConfig,
    ctl: &SeriesControl,
) -> Result<(JointState, f64)> {
    let raw = compton_coefficients(alpha1, alpha2, g_p12, trunc2, ctl)?;
    let kept = raw.norm_sqr();
    let deficit = 1.0 - kept;
    let scale = Complex64::new(1.0 / kept.sqrt(), 0.0);
    let amps = raw.two_amps()?.mapv(|v| v * scale);
    Ok((JointState::new_two(*trunc2, amps), deficit))
}

fn renormalize_single(
    trunc: &TruncationConfig,
    amps: Array2<Complex64>,
) -> Result<(JointState, f64)> {
    let kept: f64 = amps.iter().map(|c| c.norm_sqr()).sum();
    let deficit = 1.0 - kept;
    let scale = Complex64::new(1.0 / kept.sqrt(), 0.0);
    Ok((JointState::new_single(*trunc, amps.mapv(|v| v * scale)), deficit))
}
