//! Acceptance suite: one test per criterion, each printing its measured
//! numbers. Criteria whose reference values cannot be reproduced from the
//! implemented operators fail here with full diagnostics rather than being
//! loosened; see the repository README for the summary of which these are.

use etp_core::bessel::bessel_j;
use etp_core::coupling::{
    first_order_coupling, ponderomotive_coupling, second_order_coupling, CouplingSet,
    FieldProfile,
};
use etp_core::observables::{
    electron_spectrum, photon_joint_distribution, purity, reduced_density, von_neumann_entropy,
    Subsystem,
};
use etp_core::oracle::{
    build_single_mode_generator, build_two_mode_generator, evolve, evolve_split,
};
use etp_core::ponderomotive::{kd_auto_half_width, kd_momentum_distribution};
use etp_core::series::{
    analytic_vacuum_state, coherent_coefficients, compton_coefficient, vacuum_coefficients,
    SeriesControl,
};
use etp_core::state::{
    coherent_two_mode_state, electron_kinematics, fock_joint_state, poisson_amplitude,
    vacuum_joint_state, TruncationConfig,
};
use num_complex::Complex64;
use std::f64::consts::{PI, TAU};
use std::time::Instant;

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn ctl() -> SeriesControl {
    SeriesControl { term_tol: 1e-16, max_index: 400 }
}

/// Deterministic xorshift for reproducible random parameter points.
struct Rng(u64);
impl Rng {
    fn next(&mut self) -> f64 {
        self.0 ^= self.0 << 13;
        self.0 ^= self.0 >> 7;
        self.0 ^= self.0 << 17;
        (self.0 >> 11) as f64 / (1u64 << 53) as f64
    }
}

/// Spectrum of the vacuum-seeded combined-exponential evolution.
fn oracle_vacuum_spectrum(
    g_abs: f64,
    g2: Complex64,
    n_max: u32,
) -> (Vec<f64>, i32, f64) {
    let k = n_max as i32 + 4;
    let trunc = TruncationConfig::new(-k, k, n_max, 0.9).unwrap();
    let cs = CouplingSet::with_g_p(c64(g_abs, 0.0), g2, c64(0.0, g2.norm()));
    let gen = build_single_mode_generator(&cs, &trunc).unwrap();
    let out = evolve(&gen, &vacuum_joint_state(&trunc)).unwrap();
    let (p_k, k_min) = electron_spectrum(&out.state).unwrap();
    (p_k, k_min, out.leakage)
}

/// Spectrum of the vacuum-seeded factored-product (series) evolution.
fn series_vacuum_spectrum(g_abs: f64, g2: Complex64, n_max: u32) -> (Vec<f64>, i32) {
    let k = n_max as i32 + 4;
    let trunc = TruncationConfig::new(-k, k, n_max, 0.9).unwrap();
    let cs = CouplingSet::with_g_p(c64(g_abs, 0.0), g2, c64(0.0, g2.norm()));
    let (state, _) = analytic_vacuum_state(&cs, g2, &trunc, &ctl()).unwrap();
    let (p_k, k_min) = electron_spectrum(&state).unwrap();
    (p_k, k_min)
}

fn entropy_of(p: &[f64]) -> f64 {
    p.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.ln()).sum()
}

fn poisson(mean: f64, k: usize) -> f64 {
    let mut p = (-mean).exp();
    for i in 0..k {
        p *= mean / (i + 1) as f64;
    }
    p
}

#[test]
fn criterion_01_poisson_limit_both_engines() {
    for &g in &[0.5f64, 1.0, 2.0] {
        let mean = g * g;
        let n_max = (mean + 6.0 * g + 20.0).ceil() as u32;
        let (oracle, k_min, _) = oracle_vacuum_spectrum(g, Complex64::ZERO, n_max);
        let (series, k_min_s) = series_vacuum_spectrum(g, Complex64::ZERO, n_max);
        for k in 0..=15usize {
            let want = poisson(mean, k);
            let got_o = oracle[(-(k as i32) - k_min) as usize];
            let got_s = series[(-(k as i32) - k_min_s) as usize];
            assert!(
                (got_o - want).abs() < 1e-9,
                "oracle g={g}: P_{k} = {got_o} vs Poisson {want}"
            );
            assert!(
                (got_s - want).abs() < 1e-9,
                "series g={g}: P_{k} = {got_s} vs Poisson {want}"
            );
        }
    }
    println!("criterion 01: PASS (Poisson limit, both engines, g in {{0.5, 1, 2}})");
}

#[test]
fn criterion_02_two_photon_emission_probability() {
    let g2 = c64(0.099, 0.0);
    let (oracle, k_min, _) = oracle_vacuum_spectrum(0.0, g2, 30);
    let p2_oracle = oracle[(-2 - k_min) as usize];
    let series = vacuum_coefficients(
        &CouplingSet::with_g_p(Complex64::ZERO, g2, c64(0.0, 0.099)),
        g2,
        4,
        &ctl(),
    )
    .unwrap();
    let p2_series = series[2].norm_sqr();
    println!(
        "criterion 02: P(2 photons) oracle = {p2_oracle:.5}, series = {p2_series:.5}, target 0.0187 +- 0.002"
    );
    assert!((p2_oracle - 0.0187).abs() <= 0.002);
    assert!((p2_series - 0.0187).abs() <= 0.002);
}

/// Reference values 0.145 / 0.119 / 0.0076 for P(2), P(4), P(3). The
/// combined-exponential oracle governs; the factored-product values and the
/// gap between the two are printed alongside. See README for why the
/// reference row is not reachable from either operator ordering.
#[test]
fn criterion_03_strong_coupling_emission_numbers() {
    // run through the CLI so the run report carries the mandated gap record
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c3.json");
    std::fs::write(
        &cfg,
        r#"{"scenario":"evolve-vacuum","g_qu_abs":0.8,"g_qu2_abs":0.8,"engine":"both",
            "truncation":{"k_min":-88,"k_max":88,"n_max":40,"leak_tol":1e-3}}"#,
    )
    .unwrap();
    let out_dir = dir.path().join("out");
    let status = std::process::Command::new(env!("CARGO_BIN_EXE_etp-sim"))
        .args(["run", "--config", cfg.to_str().unwrap(), "--out", out_dir.to_str().unwrap()])
        .status()
        .unwrap();
    assert!(status.success());

    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("run_meta.json")).unwrap())
            .unwrap();
    let gap = meta["diagnostics"]["engine_max_abs_probability_gap"]
        .as_f64()
        .expect("run report must quantify the engine gap");

    let spectrum = std::fs::read_to_string(out_dir.join("spectrum.csv")).unwrap();
    let p_at = |k: i32| -> f64 {
        spectrum
            .lines()
            .skip(1)
            .map(|l| {
                let mut it = l.split(',');
                let kk: i32 = it.next().unwrap().parse().unwrap();
                let p: f64 = it.next().unwrap().parse().unwrap();
                (kk, p)
            })
            .find(|(kk, _)| *kk == k)
            .unwrap()
            .1
    };
    let (p2, p3, p4) = (p_at(-2), p_at(-3), p_at(-4));

    // factored-product values for the same magnitudes
    let (split, k_min) = series_vacuum_spectrum(0.8, c64(0.8, 0.0), 120);
    let sp = |p: i32| split[(-p - k_min) as usize];
    println!(
        "criterion 03: oracle P(2)={p2:.4} P(3)={p3:.4} P(4)={p4:.4}; \
         factored-product P(2)={:.4} P(3)={:.4} P(4)={:.4}; \
         combined-vs-split gap = {gap:.4} (recorded in run_meta); \
         targets P(2)=0.145+-0.02 P(4)=0.119+-0.02 P(3)=0.0076+-0.005",
        sp(2),
        sp(3),
        sp(4)
    );
    assert!(gap > 0.1, "paths must visibly disagree at these couplings");
    let mut failures = Vec::new();
    if (p2 - 0.145).abs() > 0.02 {
        failures.push(format!("P(n=2) = {p2:.4} outside 0.145 +- 0.02"));
    }
    if (p4 - 0.119).abs() > 0.02 {
        failures.push(format!("P(n=4) = {p4:.4} outside 0.119 +- 0.02"));
    }
    if (p3 - 0.0076).abs() > 0.005 {
        failures.push(format!("P(n=3) = {p3:.4} outside 0.0076 +- 0.005"));
    }
    assert!(
        failures.is_empty(),
        "criterion 03: FAIL — governing oracle values miss the reference row: {}",
        failures.join("; ")
    );
}

#[test]
fn criterion_04_entanglement_numbers() {
    // state at g = g2 = 0.8, dphi = 0, g_p = i|g2| via the combined oracle
    let trunc = TruncationConfig::new(-154, 154, 150, 0.9).unwrap();
    let cs = CouplingSet::with_g_p(c64(0.8, 0.0), c64(0.8, 0.0), c64(0.0, 0.8));
    let gen = build_single_mode_generator(&cs, &trunc).unwrap();
    let state = evolve(&gen, &vacuum_joint_state(&trunc)).unwrap().state;
    let rho = reduced_density(&state, Subsystem::Electron).unwrap();
    let pur = purity(&rho);
    let s_eig = von_neumann_entropy(&rho).unwrap();
    // cross-check the eigen path against the diagonal shortcut
    let (p_k, _) = electron_spectrum(&state).unwrap();
    let s_diag = entropy_of(&p_k);
    assert!((s_eig - s_diag).abs() < 1e-8, "entropy paths disagree");

    let (p_k_02, _, _) = oracle_vacuum_spectrum(0.2, c64(0.8, 0.0), 150);
    let s_02 = entropy_of(&p_k_02);
    let (p_k_10, _, _) = oracle_vacuum_spectrum(1.0, Complex64::ZERO, 40);
    let s_10 = entropy_of(&p_k_10);

    println!(
        "criterion 04: purity = {pur:.4} (target 0.193 +- 0.01), S = {s_eig:.4} (target 2.01 +- 0.03), \
         S(0.2, 0.8) = {s_02:.4} (target 1.87 +- 0.03), S(1, 0) = {s_10:.4} (target 1.30 +- 0.01)"
    );
    let mut failures = Vec::new();
    if (pur - 0.193).abs() > 0.01 {
        failures.push(format!("purity {pur:.4} outside 0.193 +- 0.01"));
    }
    if (s_eig - 2.01).abs() > 0.03 {
        failures.push(format!("S {s_eig:.4} outside 2.01 +- 0.03"));
    }
    if (s_02 - 1.87).abs() > 0.03 {
        failures.push(format!("S(0.2, 0.8) = {s_02:.4} outside 1.87 +- 0.03"));
    }
    if (s_10 - 1.30).abs() > 0.01 {
        failures.push(format!("S(1, 0) = {s_10:.4} outside 1.30 +- 0.01"));
    }
    assert!(failures.is_empty(), "criterion 04: FAIL — {}", failures.join("; "));
}

/// Entropy maxima over the interference phase at |g2| = 0.8. The reference
/// points are asserted against the factored-product route (whose entropy is
/// symmetric about dphi = pi, as the reference curves are); the combined
/// oracle's scan is printed for comparison.
#[test]
fn criterion_05_entropy_maxima_over_phase() {
    let scan = |g_abs: f64, n_max: u32, combined: bool| -> (f64, f64) {
        let mut best = (f64::MIN, 0.0);
        for i in 0..200 {
            let dphi = TAU * i as f64 / 200.0;
            let g2 = Complex64::from_polar(0.8, dphi);
            let p_k = if combined {
                oracle_vacuum_spectrum(g_abs, g2, n_max).0
            } else {
                series_vacuum_spectrum(g_abs, g2, n_max).0
            };
            let s = entropy_of(&p_k);
            if s > best.0 {
                best = (s, dphi);
            }
        }
        best
    };
    let (s02, at02) = scan(0.2, 130, false);
    let (s16, at16) = scan(1.6, 140, false);
    let (c02, cat02) = scan(0.2, 130, true);
    let (c16, cat16) = scan(1.6, 140, true);
    println!(
        "criterion 05: factored-product S_max(0.2) = {s02:.4} at {:.2}pi (target 1.8731 +- 0.05 at 0), \
         S_max(1.6) = {s16:.4} at {:.2}pi (target 2.3768 +- 0.05 at 0.65pi); \
         combined oracle gives {c02:.4} at {:.2}pi and {c16:.4} at {:.2}pi",
        at02 / PI,
        at16 / PI,
        cat02 / PI,
        cat16 / PI
    );
    // fold the symmetric scan onto [0, pi] before locating the maximum
    let fold = |phi: f64| if phi > PI { TAU - phi } else { phi };
    let mut failures = Vec::new();
    if (s02 - 1.8731).abs() > 0.05 {
        failures.push(format!("S_max(0.2) = {s02:.4} outside 1.8731 +- 0.05"));
    }
    if fold(at02) > 0.05 * PI {
        failures.push(format!("S_max(0.2) located at {:.2}pi, not 0", at02 / PI));
    }
    if (s16 - 2.3768).abs() > 0.05 {
        failures.push(format!("S_max(1.6) = {s16:.4} outside 2.3768 +- 0.05"));
    }
    if (fold(at16) - 0.65 * PI).abs() > 0.05 * PI {
        failures.push(format!("S_max(1.6) located at {:.2}pi, not 0.65pi", at16 / PI));
    }
    assert!(failures.is_empty(), "criterion 05: FAIL — {}", failures.join("; "));
}

#[test]
fn criterion_06_parity_selection() {
    for &(g2_abs, n_max) in &[(0.099f64, 40u32), (0.8, 120)] {
        let (oracle, k_min, _) = oracle_vacuum_spectrum(0.0, c64(g2_abs, 0.0), n_max);
        let (series, k_min_s) = series_vacuum_spectrum(0.0, c64(g2_abs, 0.0), n_max);
        for p in (1..(n_max as i32)).step_by(2) {
            let po = oracle[(-p - k_min) as usize];
            let ps = series[(-p - k_min_s) as usize];
            assert!(po < 1e-12, "odd P_{p} = {po} (oracle, g2 = {g2_abs})");
            assert!(ps < 1e-12, "odd P_{p} = {ps} (series, g2 = {g2_abs})");
        }
    }
    println!("criterion 06: PASS (only even photon numbers at g_qu = 0)");
}

#[test]
fn criterion_07_phase_degeneracies_and_broadening() {
    // single-process runs: spectra identical across nine phases
    for &(g_abs, g2_abs, n_max) in &[(2.0f64, 0.0f64, 50u32), (0.0, 0.5, 60)] {
        let base_o = oracle_vacuum_spectrum(g_abs, c64(g2_abs, 0.0), n_max).0;
        let base_s = series_vacuum_spectrum(g_abs, c64(g2_abs, 0.0), n_max).0;
        for i in 1..9 {
            let dphi = TAU * i as f64 / 9.0;
            let g2 = Complex64::from_polar(g2_abs, dphi);
            let o = oracle_vacuum_spectrum(g_abs, g2, n_max).0;
            let s = series_vacuum_spectrum(g_abs, g2, n_max).0;
            for ((a, b), (c, d)) in base_o.iter().zip(&o).zip(base_s.iter().zip(&s)) {
                assert!((a - b).abs() < 1e-10, "oracle spectrum moved with phase");
                assert!((c - d).abs() < 1e-10, "series spectrum moved with phase");
            }
        }
    }
    // interference run: variance in k strictly larger at dphi = pi
    let variance = |p_k: &[f64], k_min: i32| {
        let mean: f64 = p_k
            .iter()
            .enumerate()
            .map(|(i, p)| (k_min + i as i32) as f64 * p)
            .sum();
        p_k.iter()
            .enumerate()
            .map(|(i, p)| ((k_min + i as i32) as f64 - mean).powi(2) * p)
            .sum::<f64>()
    };
    let (o0, k_min, _) = oracle_vacuum_spectrum(2.0, c64(0.2, 0.0), 80);
    let (opi, _, _) = oracle_vacuum_spectrum(2.0, c64(-0.2, 0.0), 80);
    let (s0, k_min_s) = series_vacuum_spectrum(2.0, c64(0.2, 0.0), 80);
    let (spi, _) = series_vacuum_spectrum(2.0, c64(-0.2, 0.0), 80);
    let (vo0, vopi) = (variance(&o0, k_min), variance(&opi, k_min));
    let (vs0, vspi) = (variance(&s0, k_min_s), variance(&spi, k_min_s));
    println!(
        "criterion 07: PASS; k-variance oracle {vo0:.3} -> {vopi:.3}, series {vs0:.3} -> {vspi:.3} at dphi 0 -> pi"
    );
    assert!(vopi > vo0, "oracle spectrum must broaden at dphi = pi");
    assert!(vspi > vs0, "series spectrum must broaden at dphi = pi");
    let max_diff = o0
        .iter()
        .zip(&opi)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);
    assert!(max_diff > 1e-3, "spectra at dphi = 0 and pi must differ");
}

/// Series vs matrix exponential on random weak-coupling points for vacuum
/// and |n = 3> inputs. The series realizes the factored product, so the
/// matrix-exponential side applies the same three factors; the residual gap
/// to the combined single exponential is physical (operator ordering) and is
/// printed as a diagnostic.
#[test]
fn criterion_08_series_vs_oracle_cross_validation() {
    let mut rng = Rng(0x0f0f_1234_aa55_7c31);
    let trunc = TruncationConfig::new(-90, 90, 80, 0.9).unwrap();
    let mut worst_split = 0.0f64;
    let mut worst_combined = 0.0f64;
    for _ in 0..20 {
        let g = Complex64::from_polar(0.3 * rng.next(), TAU * rng.next());
        let g2 = Complex64::from_polar(0.15 * rng.next(), TAU * rng.next());
        let gp = c64(0.0, g2.norm());
        let cs = CouplingSet::with_g_p(g, g2, gp);

        // vacuum input
        let vac = vacuum_joint_state(&trunc);
        let split = evolve_split(&cs, g2, gp, &vac).unwrap().state;
        let combined = evolve(&build_single_mode_generator(&cs, &trunc).unwrap(), &vac)
            .unwrap()
            .state;
        let series = vacuum_coefficients(&cs, g2, 40, &ctl()).unwrap();
        for (p, c) in series.iter().enumerate() {
            let got = c.norm_sqr();
            let w_split = split.amp(-(p as i32), p as u32).unwrap().norm_sqr();
            let w_comb = combined.amp(-(p as i32), p as u32).unwrap().norm_sqr();
            worst_split = worst_split.max((got - w_split).abs());
            worst_combined = worst_combined.max((got - w_comb).abs());
        }

        // |n = 3> input
        let fock = fock_joint_state(&trunc, 3).unwrap();
        let split = evolve_split(&cs, g2, gp, &fock).unwrap().state;
        let coeffs = coherent_coefficients(&cs, g2, gp, 3, -3, 40, &ctl()).unwrap();
        for (i, c) in coeffs.iter().enumerate() {
            let p = i as i64 - 3;
            let got = c.norm_sqr();
            let want = split.amp(-p as i32, (3 + p) as u32).unwrap().norm_sqr();
            worst_split = worst_split.max((got - want).abs());
        }
    }
    println!(
        "criterion 08: series vs matrix-exponential (same factored operator) |dP| = {worst_split:.3e}; \
         vs combined single exponential |dP| = {worst_combined:.3e} (physical ordering gap, diagnostic)"
    );
    assert!(
        worst_split <= 1e-6,
        "series must match the factored-product exponential to 1e-6, got {worst_split:.3e}"
    );
}

#[test]
fn criterion_09_unitarity_and_window_stability() {
    // norm preserved to max(1e-9, leakage) on assorted inputs
    let trunc = TruncationConfig::new(-60, 60, 28, 0.9).unwrap();
    let cs = CouplingSet::with_g_p(c64(0.8, 0.0), c64(0.8, 0.0), c64(0.0, 0.8));
    let gen = build_single_mode_generator(&cs, &trunc).unwrap();
    for n0 in [0u32, 2, 5] {
        let out = evolve(&gen, &fock_joint_state(&trunc, n0).unwrap()).unwrap();
        let drift = (out.state.norm_sqr() - 1.0).abs();
        assert!(
            drift < 1e-9f64.max(out.leakage),
            "norm drift {drift} above max(1e-9, leakage = {})",
            out.leakage
        );
    }

    // window stability: n_max 40 -> 50 (k by 20) at the strong-coupling point
    let spec_a = oracle_vacuum_spectrum(0.8, c64(0.8, 0.0), 40);
    let spec_b = oracle_vacuum_spectrum(0.8, c64(0.8, 0.0), 50);
    let mut worst = 0.0f64;
    let mut worst_k = 0;
    for p in 0..=40i32 {
        let a = spec_a.0[(-p - spec_a.1) as usize];
        let b = spec_b.0[(-p - spec_b.1) as usize];
        if (a - b).abs() > worst {
            worst = (a - b).abs();
            worst_k = p;
        }
    }
    println!(
        "criterion 09: norm preservation PASS; window stability max |dP| = {worst:.3e} at k = -{worst_k} \
         (target < 1e-8; the pair cascade at |g2| = 0.8 still carries ~1e-4 of probability past n = 40)"
    );
    assert!(
        worst < 1e-8,
        "criterion 09: FAIL — enlarging the window (40 -> 50) moves probabilities by {worst:.3e} > 1e-8"
    );
}

#[test]
fn criterion_10_kapitza_dirac_identities() {
    for &eta in &[0.5f64, 2.0, 10.0] {
        let dist = kd_momentum_distribution(eta, kd_auto_half_width(eta) + 40).unwrap();
        assert!((dist.total() - 1.0).abs() <= 1e-12, "eta = {eta}");
        for n in 0..=dist.n_half_width() as i32 {
            assert_eq!(dist.prob(n), dist.prob(-n), "P_n symmetry at eta = {eta}");
        }
    }
    let dist = kd_momentum_distribution(0.0, 5).unwrap();
    assert_eq!(dist.prob(0), 1.0);
    println!("criterion 10: PASS (sum J_n^2 = 1 to 1e-12; P_n = P_-n; eta = 0 single peak)");
}

#[test]
fn criterion_11_compton_distributions() {
    // (a) zero coupling: product of two Poisson distributions
    let trunc = TruncationConfig::new(-37, 37, 37, 1e-4).unwrap();
    let (input, _) = coherent_two_mode_state(&trunc, c64(3.0, 0.0), c64(3.0, 0.0)).unwrap();
    let gen = build_two_mode_generator(Complex64::ZERO, &trunc).unwrap();
    let state = evolve(&gen, &input).unwrap().state;
    let joint = photon_joint_distribution(&state).unwrap();
    for n1 in 0..=37usize {
        for n2 in 0..=37usize {
            let want = poisson_amplitude(c64(3.0, 0.0), n1 as u32).norm_sqr()
                * poisson_amplitude(c64(3.0, 0.0), n2 as u32).norm_sqr();
            // renormalized input: compare within the window mass
            assert!(
                (joint[(n1, n2)] - want).abs() < 1e-10 + 1e-6 * want,
                "product-Poisson violated at ({n1},{n2})"
            );
        }
    }

    // (b) symmetric strong coupling: exchange symmetry + negative correlation
    let gen = build_two_mode_generator(c64(0.5, 0.0), &trunc).unwrap();
    let state = evolve(&gen, &input).unwrap().state;
    let joint = photon_joint_distribution(&state).unwrap();
    let mut asym = 0.0f64;
    for n1 in 0..=37usize {
        for n2 in 0..n1 {
            asym = asym.max((joint[(n1, n2)] - joint[(n2, n1)]).abs());
        }
    }
    assert!(asym < 1e-9, "P(n1,n2) exchange symmetry violated: {asym}");
    let total: f64 = joint.iter().sum();
    let m1: f64 = joint.indexed_iter().map(|((a, _), p)| a as f64 * p).sum::<f64>() / total;
    let m2: f64 = joint.indexed_iter().map(|((_, b), p)| b as f64 * p).sum::<f64>() / total;
    let cov: f64 = joint
        .indexed_iter()
        .map(|((a, b), p)| (a as f64 - m1) * (b as f64 - m2) * p)
        .sum::<f64>()
        / total;
    let v1: f64 = joint
        .indexed_iter()
        .map(|((a, _), p)| (a as f64 - m1).powi(2) * p)
        .sum::<f64>()
        / total;
    let v2: f64 = joint
        .indexed_iter()
        .map(|((_, b), p)| (b as f64 - m2).powi(2) * p)
        .sum::<f64>()
        / total;
    let pearson = cov / (v1 * v2).sqrt();
    println!("criterion 11: joint-distribution Pearson correlation = {pearson:.4}");
    assert!(pearson < 0.0 && pearson.abs() > 0.1, "correlation {pearson} not < -0.1");

    // (c) weak-coupling Bessel limit at n1 = n2 = 100, |g| = 1e-3
    let gp = c64(1e-3, 0.0);
    let a = c64(10.0, 0.0); // envelope divided out below
    let mut failures = Vec::new();
    let mut report = String::new();
    for k in 0..=3i32 {
        let c = compton_coefficient(a, a, gp, 100, 100, k);
        let envelope =
            poisson_amplitude(a, (100 - k) as u32) * poisson_amplitude(a, (100 + k) as u32);
        let stripped = (c / envelope).norm();
        let want = bessel_j(k, 0.4).abs();
        let rel = (stripped - want).abs() / want;
        report.push_str(&format!("k={k}: |c|={stripped:.6} J_k={want:.6} rel={rel:.2e}; "));
        if rel > 1e-3 {
            failures.push(format!(
                "k = {k}: rel deviation {rel:.2e} > 1e-3 (finite-n correction ~ k^2/n)"
            ));
        }
    }
    println!("criterion 11 weak limit: {report}");
    assert!(
        failures.is_empty(),
        "criterion 11: FAIL — Bessel limit at finite n1 = n2 = 100: {}",
        failures.join("; ")
    );
}

#[test]
fn criterion_12_coupling_quadrature() {
    let el = electron_kinematics(200e3).unwrap();
    let omega = 1.2153e15f64;
    let rate = omega / el.velocity;
    let e_charge = 1.602176634e-19;
    let hbar = 1.054571817e-34;
    let m_e = 9.1093837015e-31;

    // closed-form phase-matched examples at 1e-8 relative
    let len = 30e-6;
    let n = 1 << 14;
    let h = len / n as f64;
    let z: Vec<f64> = (0..=n).map(|i| i as f64 * h).collect();
    let a = 5.0e6;
    let ez: Vec<[Complex64; 3]> = z
        .iter()
        .map(|&zi| [Complex64::ZERO, Complex64::ZERO, Complex64::from_polar(a, rate * zi)])
        .collect();
    let p = FieldProfile::new(z.clone(), ez, omega).unwrap();
    let g = first_order_coupling(&p, &el).unwrap();
    let exact = e_charge * a * len / (hbar * omega);
    assert!((g - exact).norm() / exact < 1e-8, "first-order closed form");

    let ey: Vec<[Complex64; 3]> = z
        .iter()
        .map(|&zi| [Complex64::ZERO, Complex64::from_polar(1e8, rate * zi), Complex64::ZERO])
        .collect();
    let p2 = FieldProfile::new(z.clone(), ey, omega).unwrap();
    let g2 = second_order_coupling(&p2, &p2, &el).unwrap();
    let exact2 = Complex64::new(0.0, 1.0) * e_charge * e_charge * 1e16 * len
        / (2.0 * m_e * el.gamma * el.velocity * hbar * omega * omega);
    assert!((g2 - exact2).norm() / exact2.norm() < 1e-8, "second-order closed form");

    // translation covariance + bilinearity across 100 deterministic profiles
    let mut rng = Rng(0xbead_cafe_0042_11ff);
    for trial in 0..100 {
        let mk = |scale: f64, shift: f64, seeds: &[f64; 6]| {
            // the same field samples, carried on a grid shifted by `shift`
            let zs: Vec<f64> = (0..1025).map(|i| shift + i as f64 * (12e-6 / 1024.0)).collect();
            let es: Vec<[Complex64; 3]> = (0..1025)
                .map(|i| {
                    let zi = i as f64 * (12e-6 / 1024.0);
                    [
                        Complex64::from_polar(scale * 1e6 * seeds[0], seeds[1] * rate * zi),
                        Complex64::from_polar(scale * 7e5 * seeds[2], seeds[3] * rate * zi + 0.4),
                        Complex64::from_polar(scale * 4e5 * seeds[4], seeds[5] * rate * zi - 0.9),
                    ]
                })
                .collect();
            FieldProfile::new(zs, es, omega).unwrap()
        };
        let seeds = [
            rng.next() + 0.1,
            2.0 * rng.next() - 1.0,
            rng.next() + 0.1,
            2.0 * rng.next() - 1.0,
            rng.next() + 0.1,
            2.0 * rng.next() - 1.0,
        ];
        let base = mk(1.0, 0.0, &seeds);
        let scaled = mk(2.5, 0.0, &seeds);
        let g_base = first_order_coupling(&base, &el).unwrap();
        let g_scaled = first_order_coupling(&scaled, &el).unwrap();
        assert!(
            (g_scaled - 2.5 * g_base).norm() <= 1e-10 * g_base.norm().max(1e-12),
            "linearity, trial {trial}"
        );
        let s_base = second_order_coupling(&base, &base, &el).unwrap();
        let s_scaled = second_order_coupling(&scaled, &scaled, &el).unwrap();
        assert!(
            (s_scaled - 6.25 * s_base).norm() <= 1e-10 * s_scaled.norm().max(1e-25),
            "bilinearity, trial {trial}"
        );
        let gp_base = ponderomotive_coupling(&base, &base, &el).unwrap();
        let gp_scaled = ponderomotive_coupling(&scaled, &scaled, &el).unwrap();
        assert!(
            (gp_scaled - 6.25 * gp_base).norm() <= 1e-10 * gp_scaled.norm().max(1e-25),
            "ponderomotive bilinearity, trial {trial}"
        );

        let dz = 13.0 * 12e-6 / 1024.0;
        let shifted = mk(1.0, dz, &seeds);
        let g_shift = first_order_coupling(&shifted, &el).unwrap();
        let phase = Complex64::from_polar(1.0, -rate * dz);
        assert!(
            (g_shift - g_base * phase).norm() <= 1e-10 * g_base.norm().max(1e-12),
            "translation covariance, trial {trial}"
        );
    }
    println!("criterion 12: PASS (closed forms at 1e-8; 100-profile property suites)");
}

#[test]
fn criterion_13_performance_budget() {
    // strong-coupling oracle run at the benchmark window (dim = 177 * 41)
    let start = Instant::now();
    let trunc = TruncationConfig::new(-88, 88, 40, 1e-3).unwrap();
    let cs = CouplingSet::with_g_p(c64(0.8, 0.0), c64(0.8, 0.0), c64(0.0, 0.8));
    let gen = build_single_mode_generator(&cs, &trunc).unwrap();
    assert_eq!(gen.dim(), 177 * 41);
    let out = evolve(&gen, &vacuum_joint_state(&trunc)).unwrap();
    let elapsed = start.elapsed();
    let (p_k, k_min) = electron_spectrum(&out.state).unwrap();
    assert!(p_k[(-2 - k_min) as usize].is_finite());
    println!(
        "criterion 13: oracle run at dim {} took {:.3} s (budget 30 s)",
        gen.dim(),
        elapsed.as_secs_f64()
    );
    assert!(elapsed.as_secs_f64() < 30.0);

    // a full strong-coupling series evaluation also fits comfortably
    let start = Instant::now();
    let _ = series_vacuum_spectrum(1.6, c64(0.8, 0.0), 140);
    let series_time = start.elapsed();
    println!("criterion 13: series evaluation took {:.3} s", series_time.as_secs_f64());
    assert!(series_time.as_secs_f64() < 30.0);
}
