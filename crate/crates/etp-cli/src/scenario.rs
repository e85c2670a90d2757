//! Scenario dispatch. Every number written to an output file comes from an
//! `etp-core` operation; this module only sizes windows, routes engines and
//! formats rows.

use crate::config::{
    CouplingParams, Engine, ProfileRef, Scenario, ScenarioConfig, TruncationParams,
};
use crate::output;
use crate::CliError;
use etp_core::coupling::{
    first_order_coupling_est, ponderomotive_coupling_est, second_order_coupling_est, CouplingSet,
    FieldProfile,
};
use etp_core::observables::{
    coincidence_table, electron_spectrum, photon_joint_distribution, purity, reduced_density,
    von_neumann_entropy, Subsystem,
};
use etp_core::oracle::{build_single_mode_generator, build_two_mode_generator, evolve};
use etp_core::ponderomotive::{kd_auto_half_width, kd_eta, kd_momentum_distribution, StandingWaveParams};
use etp_core::series::{
    analytic_coherent_state, analytic_compton_state, analytic_vacuum_state, SeriesControl,
};
use etp_core::state::{
    coherent_joint_state, coherent_two_mode_state, electron_kinematics, vacuum_joint_state,
    JointState, TruncationConfig,
};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::path::Path;

/// Finished run: deterministic file bodies keyed by file name.
pub struct RunArtifacts {
    pub csvs: Vec<(String, String)>,
    pub meta: serde_json::Value,
    pub svgs: Vec<(String, String)>,
}

#[derive(Debug, Default, Serialize)]
pub struct Diagnostics {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub truncation: Option<TruncationParams>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_leakage: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub analytic_deficit: Option<f64>,
    /// Max absolute per-entry probability difference between the two
    /// engines, when both ran.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub engine_max_abs_probability_gap: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub purity: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub entropy_nats: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input_tail_weight: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kd_eta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kd_window_total: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub quadrature_error_estimates: Vec<(String, f64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub series_control: Option<(f64, usize)>,
}

fn series_control() -> SeriesControl {
    SeriesControl { term_tol: 1e-16, max_index: 400 }
}

fn to_core_trunc(t: &TruncationParams) -> Result<TruncationConfig, CliError> {
    TruncationConfig::new(t.k_min, t.k_max, t.n_max, t.leak_tol).map_err(CliError::Physics)
}

fn echo_trunc(t: &TruncationConfig) -> TruncationParams {
    TruncationParams { k_min: t.k_min, k_max: t.k_max, n_max: t.n_max, leak_tol: t.leak_tol }
}

/// Window rule for vacuum- or coherent-seeded single-mode runs: the Poisson
/// core `|a|^2 + 6|a| + 10` plus displacement and pair-cascade allowances.
fn auto_single_window(
    alpha_abs: f64,
    g_abs: f64,
    g2_abs: f64,
    leak_tol: f64,
) -> Result<TruncationConfig, CliError> {
    let n = alpha_abs * alpha_abs + 6.0 * alpha_abs + 10.0
        + g_abs * g_abs
        + 6.0 * g_abs
        + 100.0 * g2_abs;
    let n_max = (n.ceil() as u32).min(512);
    let k = n_max as i32 + 4;
    TruncationConfig::new(-k, k, n_max, leak_tol).map_err(CliError::Physics)
}

fn auto_two_mode_window(a1: f64, a2: f64, leak_tol: f64) -> Result<TruncationConfig, CliError> {
    let am = a1.max(a2);
    let n_max = ((am * am + 6.0 * am + 10.0).ceil() as u32).min(512);
    let k = n_max as i32;
    TruncationConfig::new(-k, k, n_max, leak_tol).map_err(CliError::Physics)
}

struct ResolvedCoupling {
    set: CouplingSet,
    g_qu2_prime: Complex64,
    g_p_prime: Complex64,
}

fn resolve_coupling(c: &CouplingParams) -> ResolvedCoupling {
    let g_qu = Complex64::from_polar(c.g_qu_abs, c.phi_g1);
    let g_qu2 = Complex64::from_polar(c.g_qu2_abs, c.phi_g2);
    let g_p = c
        .g_p
        .map(Complex64::from)
        .unwrap_or_else(|| Complex64::new(0.0, g_qu2.norm()));
    let set = CouplingSet::with_g_p(g_qu, g_qu2, g_p);
    let g_qu2_prime = c.g_qu2_prime.map(Complex64::from).unwrap_or(g_qu2);
    let g_p_prime = c.g_p_prime.map(Complex64::from).unwrap_or(g_p);
    ResolvedCoupling { set, g_qu2_prime, g_p_prime }
}

/// Per-entry max abs probability difference between two equal-window states.
fn probability_gap(a: &JointState, b: &JointState) -> f64 {
    let mut worst = 0.0f64;
    match (a.amps(), b.amps()) {
        (etp_core::state::Amplitudes::Single(x), etp_core::state::Amplitudes::Single(y)) => {
            for (u, v) in x.iter().zip(y.iter()) {
                worst = worst.max((u.norm_sqr() - v.norm_sqr()).abs());
            }
        }
        (etp_core::state::Amplitudes::Two(x), etp_core::state::Amplitudes::Two(y)) => {
            for (u, v) in x.iter().zip(y.iter()) {
                worst = worst.max((u.norm_sqr() - v.norm_sqr()).abs());
            }
        }
        _ => unreachable!("engine states share the window"),
    }
    worst
}

pub fn run_scenario(
    config: &ScenarioConfig,
    base: &Path,
    engine_override: Option<Engine>,
    with_svg: bool,
) -> Result<RunArtifacts, CliError> {
    let engine = engine_override.or(config.engine).unwrap_or(Engine::Both);
    let mut diag = Diagnostics { series_control: Some((1e-16, 400)), ..Default::default() };
    let mut csvs: Vec<(String, String)> = Vec::new();
    let mut svgs: Vec<(String, String)> = Vec::new();

    match &config.scenario {
        Scenario::Coupling { electron_kev, profiles } => {
            diag.series_control = None;
            run_coupling(config, base, *electron_kev, profiles, &mut csvs, &mut diag)?;
        }
        Scenario::EvolveVacuum { coupling, truncation } => {
            let rc = resolve_coupling(coupling);
            let trunc = match truncation {
                Some(t) => to_core_trunc(t)?,
                None => auto_single_window(0.0, coupling.g_qu_abs, rc.g_qu2_prime.norm(), 1e-6)?,
            };
            diag.truncation = Some(echo_trunc(&trunc));
            let state = single_mode_final_state(&rc, None, &trunc, engine, &mut diag)?;
            emit_single_mode_tables(&state, &mut csvs, &mut diag)?;
            if with_svg {
                svgs.push(("spectrum.svg".into(), spectrum_svg(&state)?));
                svgs.push(("pnk.svg".into(), pnk_svg(&state)?));
            }
        }
        Scenario::EvolveCoherent { coupling, alpha_abs, alpha_arg, truncation } => {
            let rc = resolve_coupling(coupling);
            let alpha = Complex64::from_polar(*alpha_abs, *alpha_arg);
            let trunc = match truncation {
                Some(t) => to_core_trunc(t)?,
                None => auto_single_window(
                    *alpha_abs,
                    coupling.g_qu_abs,
                    rc.g_qu2_prime.norm(),
                    1e-6,
                )?,
            };
            diag.truncation = Some(echo_trunc(&trunc));
            let state = single_mode_final_state(&rc, Some(alpha), &trunc, engine, &mut diag)?;
            emit_single_mode_tables(&state, &mut csvs, &mut diag)?;
            if with_svg {
                svgs.push(("spectrum.svg".into(), spectrum_svg(&state)?));
                svgs.push(("pnk.svg".into(), pnk_svg(&state)?));
            }
        }
        Scenario::PhaseSweep {
            g_qu_abs,
            g_qu2_abs,
            delta_phi_start,
            delta_phi_stop,
            steps,
            truncation,
        } => {
            let trunc = match truncation {
                Some(t) => to_core_trunc(t)?,
                None => auto_single_window(0.0, *g_qu_abs, *g_qu2_abs, 1e-6)?,
            };
            diag.truncation = Some(echo_trunc(&trunc));
            run_phase_sweep(
                *g_qu_abs,
                *g_qu2_abs,
                *delta_phi_start,
                *delta_phi_stop,
                *steps,
                &trunc,
                engine,
                &mut csvs,
                &mut svgs,
                with_svg,
                &mut diag,
            )?;
        }
        Scenario::Kd { electron_kev, omega0, length, e0, n_half_width } => {
            diag.series_control = None;
            let electron = electron_kinematics(electron_kev * 1e3).map_err(CliError::Physics)?;
            let params =
                StandingWaveParams { e0: *e0, length: *length, omega0: *omega0, electron };
            let eta = kd_eta(&params);
            let half = n_half_width.unwrap_or_else(|| kd_auto_half_width(eta));
            let dist = kd_momentum_distribution(eta, half).map_err(CliError::Physics)?;
            diag.kd_eta = Some(eta);
            diag.kd_window_total = Some(dist.total());
            csvs.push(("kd.csv".into(), output::kd_csv(&dist)));
            if with_svg {
                let rows: Vec<(f64, f64)> = dist
                    .rows()
                    .map(|(_, m, p)| (m as f64, p))
                    .collect();
                svgs.push((
                    "kd.svg".into(),
                    crate::svg::bar_chart("transverse momentum (units of k_p)", &rows),
                ));
            }
        }
        Scenario::Compton {
            alpha1_abs,
            alpha1_arg,
            alpha2_abs,
            alpha2_arg,
            g_p12_abs,
            g_p12_arg,
            truncation,
        } => {
            let a1 = Complex64::from_polar(*alpha1_abs, *alpha1_arg);
            let a2 = Complex64::from_polar(*alpha2_abs, *alpha2_arg);
            let gp12 = Complex64::from_polar(*g_p12_abs, *g_p12_arg);
            let trunc = match truncation {
                Some(t) => to_core_trunc(t)?,
                None => auto_two_mode_window(*alpha1_abs, *alpha2_abs, 1e-6)?,
            };
            diag.truncation = Some(echo_trunc(&trunc));
            let state = compton_final_state(a1, a2, gp12, &trunc, engine, &mut diag)?;
            let joint = photon_joint_distribution(&state).map_err(CliError::Physics)?;
            let (p_k, k_min) = electron_spectrum(&state).map_err(CliError::Physics)?;
            csvs.push(("joint_photon.csv".into(), output::joint_photon_csv(&joint)));
            csvs.push(("spectrum.csv".into(), output::spectrum_csv(&p_k, k_min)));
            if with_svg {
                svgs.push(("joint_photon.svg".into(), crate::svg::heatmap("n1", "n2", &joint)));
                let rows: Vec<(f64, f64)> = p_k
                    .iter()
                    .enumerate()
                    .map(|(i, p)| ((k_min + i as i32) as f64, *p))
                    .collect();
                svgs.push(("spectrum.svg".into(), crate::svg::bar_chart("k", &rows)));
            }
        }
    }

    let meta = build_meta(config, engine, &diag)?;
    Ok(RunArtifacts { csvs, meta, svgs })
}

fn run_coupling(
    config: &ScenarioConfig,
    base: &Path,
    electron_kev: f64,
    profiles: &[ProfileRef],
    csvs: &mut Vec<(String, String)>,
    diag: &mut Diagnostics,
) -> Result<(), CliError> {
    let electron = electron_kinematics(electron_kev * 1e3).map_err(CliError::Physics)?;
    let mut loaded = Vec::new();
    for p in profiles {
        let path = config.resolve(base, &p.path);
        let file = std::fs::File::open(&path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let profile = FieldProfile::from_csv(std::io::BufReader::new(file), p.omega)
            .map_err(CliError::Physics)?;
        loaded.push(profile);
    }
    let mut rows: Vec<(String, Complex64)> = Vec::new();
    let g_qu = first_order_coupling_est(&loaded[0], &electron).map_err(CliError::Physics)?;
    let g_qu2 =
        second_order_coupling_est(&loaded[0], &loaded[0], &electron).map_err(CliError::Physics)?;
    let g_p =
        ponderomotive_coupling_est(&loaded[0], &loaded[0], &electron).map_err(CliError::Physics)?;
    rows.push(("g_qu".into(), g_qu.value));
    rows.push(("g_qu2".into(), g_qu2.value));
    rows.push(("g_p".into(), g_p.value));
    diag.quadrature_error_estimates.push(("g_qu".into(), g_qu.error_estimate));
    diag.quadrature_error_estimates.push(("g_qu2".into(), g_qu2.error_estimate));
    diag.quadrature_error_estimates.push(("g_p".into(), g_p.error_estimate));
    if loaded.len() == 2 {
        let g_qu_2 = first_order_coupling_est(&loaded[1], &electron).map_err(CliError::Physics)?;
        let g_qu2_12 = second_order_coupling_est(&loaded[0], &loaded[1], &electron)
            .map_err(CliError::Physics)?;
        let g_p12 = ponderomotive_coupling_est(&loaded[0], &loaded[1], &electron)
            .map_err(CliError::Physics)?;
        rows.push(("g_qu_mode2".into(), g_qu_2.value));
        rows.push(("g_qu2_12".into(), g_qu2_12.value));
        rows.push(("g_p12".into(), g_p12.value));
        diag.quadrature_error_estimates.push(("g_qu_mode2".into(), g_qu_2.error_estimate));
        diag.quadrature_error_estimates.push(("g_qu2_12".into(), g_qu2_12.error_estimate));
        diag.quadrature_error_estimates.push(("g_p12".into(), g_p12.error_estimate));
    }
    csvs.push(("couplings.csv".into(), output::couplings_csv(&rows)));
    Ok(())
}

/// Evolve by the requested engine(s); the oracle result governs when both run.
fn single_mode_final_state(
    rc: &ResolvedCoupling,
    alpha: Option<Complex64>,
    trunc: &TruncationConfig,
    engine: Engine,
    diag: &mut Diagnostics,
) -> Result<JointState, CliError> {
    let ctl = series_control();
    let analytic = |diag: &mut Diagnostics| -> Result<JointState, CliError> {
        let (state, deficit) = match alpha {
            None => analytic_vacuum_state(&rc.set, rc.g_qu2_prime, trunc, &ctl)?,
            Some(a) => {
                analytic_coherent_state(&rc.set, rc.g_qu2_prime, rc.g_p_prime, a, trunc, &ctl)?
            }
        };
        diag.analytic_deficit = Some(deficit);
        Ok(state)
    };
    let oracle = |diag: &mut Diagnostics| -> Result<JointState, CliError> {
        let input = match alpha {
            None => vacuum_joint_state(trunc),
            Some(a) => {
                let (state, tail) = coherent_joint_state(trunc, a)?;
                diag.input_tail_weight = Some(tail);
                state
            }
        };
        let gen = build_single_mode_generator(&rc.set, trunc)?;
        let out = evolve(&gen, &input)?;
        diag.oracle_leakage = Some(out.leakage);
        Ok(out.state)
    };
    match engine {
        Engine::Analytic => analytic(diag),
        Engine::Oracle => oracle(diag),
        Engine::Both => {
            let a = analytic(diag)?;
            let o = oracle(diag)?;
            diag.engine_max_abs_probability_gap = Some(probability_gap(&a, &o));
            Ok(o)
        }
    }
}

fn compton_final_state(
    a1: Complex64,
    a2: Complex64,
    gp12: Complex64,
    trunc: &TruncationConfig,
    engine: Engine,
    diag: &mut Diagnostics,
) -> Result<JointState, CliError> {
    let ctl = series_control();
    let analytic = |diag: &mut Diagnostics| -> Result<JointState, CliError> {
        let (state, deficit) = analytic_compton_state(a1, a2, gp12, trunc, &ctl)?;
        diag.analytic_deficit = Some(deficit);
        Ok(state)
    };
    let oracle = |diag: &mut Diagnostics| -> Result<JointState, CliError> {
        let (input, tail) = coherent_two_mode_state(trunc, a1, a2)?;
        diag.input_tail_weight = Some(tail);
        let gen = build_two_mode_generator(gp12, trunc)?;
        let out = evolve(&gen, &input)?;
        diag.oracle_leakage = Some(out.leakage);
        Ok(out.state)
    };
    match engine {
        Engine::Analytic => analytic(diag),
        Engine::Oracle => oracle(diag),
        Engine::Both => {
            let a = analytic(diag)?;
            let o = oracle(diag)?;
            diag.engine_max_abs_probability_gap = Some(probability_gap(&a, &o));
            Ok(o)
        }
    }
}

fn emit_single_mode_tables(
    state: &JointState,
    csvs: &mut Vec<(String, String)>,
    diag: &mut Diagnostics,
) -> Result<(), CliError> {
    let table = coincidence_table(state).map_err(CliError::Physics)?;
    csvs.push(("pnk.csv".into(), output::pnk_csv(&table)));
    csvs.push(("spectrum.csv".into(), output::spectrum_csv(&table.p_k, table.k_min)));
    let rho = reduced_density(state, Subsystem::Electron).map_err(CliError::Physics)?;
    diag.purity = Some(purity(&rho));
    diag.entropy_nats = Some(von_neumann_entropy(&rho).map_err(CliError::Physics)?);
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn run_phase_sweep(
    g_qu_abs: f64,
    g_qu2_abs: f64,
    start: f64,
    stop: f64,
    steps: u32,
    trunc: &TruncationConfig,
    engine: Engine,
    csvs: &mut Vec<(String, String)>,
    svgs: &mut Vec<(String, String)>,
    with_svg: bool,
    diag: &mut Diagnostics,
) -> Result<(), CliError> {
    let phases: Vec<f64> = (0..steps)
        .map(|i| {
            if steps == 1 {
                start
            } else {
                start + (stop - start) * i as f64 / (steps - 1) as f64
            }
        })
        .collect();

    struct Point {
        delta_phi: f64,
        p_k: Vec<f64>,
        entropy: f64,
        leakage: f64,
        deficit: f64,
        gap: f64,
    }

    let results: Result<Vec<Point>, CliError> = phases
        .par_iter()
        .map(|&dphi| {
            // delta_phi enters through arg(g_qu2); phi_g1 = 0
            let cs = CouplingSet::from_polar(g_qu_abs, 0.0, g_qu2_abs, dphi);
            let mut local = Diagnostics::default();
            let rc = ResolvedCoupling {
                set: cs,
                g_qu2_prime: cs.g_qu2,
                g_p_prime: cs.g_p,
            };
            let state = single_mode_final_state(&rc, None, trunc, engine, &mut local)?;
            let (p_k, _) = electron_spectrum(&state).map_err(CliError::Physics)?;
            let rho = reduced_density(&state, Subsystem::Electron).map_err(CliError::Physics)?;
            let entropy = von_neumann_entropy(&rho).map_err(CliError::Physics)?;
            Ok(Point {
                delta_phi: dphi,
                p_k,
                entropy,
                leakage: local.oracle_leakage.unwrap_or(0.0),
                deficit: local.analytic_deficit.unwrap_or(0.0),
                gap: local.engine_max_abs_probability_gap.unwrap_or(0.0),
            })
        })
        .collect();
    let results = results?;

    let entropy_rows: Vec<(f64, f64)> =
        results.iter().map(|p| (p.delta_phi, p.entropy)).collect();
    csvs.push(("entropy.csv".into(), output::entropy_csv(&entropy_rows)));
    csvs.push((
        "spectra.csv".into(),
        output::sweep_spectra_csv(
            results.iter().map(|p| (p.delta_phi, p.p_k.as_slice())),
            trunc.k_min,
        ),
    ));
    diag.oracle_leakage = results.iter().map(|p| p.leakage).fold(None, |a, b| {
        Some(a.unwrap_or(0.0f64).max(b))
    });
    diag.analytic_deficit = results
        .iter()
        .map(|p| p.deficit)
        .fold(None, |a, b| Some(a.unwrap_or(0.0f64).max(b)));
    if matches!(engine, Engine::Both) {
        diag.engine_max_abs_probability_gap =
            Some(results.iter().map(|p| p.gap).fold(0.0, f64::max));
    }
    if with_svg {
        svgs.push((
            "entropy.svg".into(),
            crate::svg::line_chart("delta_phi (rad)", "S (nats)", &entropy_rows),
        ));
    }
    Ok(())
}

fn spectrum_svg(state: &JointState) -> Result<String, CliError> {
    let (p_k, k_min) = electron_spectrum(state).map_err(CliError::Physics)?;
    let rows: Vec<(f64, f64)> = p_k
        .iter()
        .enumerate()
        .map(|(i, p)| ((k_min + i as i32) as f64, *p))
        .collect();
    Ok(crate::svg::bar_chart("k", &rows))
}

fn pnk_svg(state: &JointState) -> Result<String, CliError> {
    let table = coincidence_table(state).map_err(CliError::Physics)?;
    Ok(crate::svg::heatmap("k", "n", &table.p))
}

#[derive(Serialize)]
struct ToolMeta {
    name: &'static str,
    version: &'static str,
}

fn build_meta(
    config: &ScenarioConfig,
    engine: Engine,
    diag: &Diagnostics,
) -> Result<serde_json::Value, CliError> {
    let doc = serde_json::json!({
        "tool": ToolMeta { name: "etp-sim", version: env!("CARGO_PKG_VERSION") },
        "scenario": config.scenario_name(),
        "engine": match engine {
            Engine::Analytic => "analytic",
            Engine::Oracle => "oracle",
            Engine::Both => "both",
        },
        "config": config,
        "diagnostics": diag,
    });
    Ok(doc)
}
