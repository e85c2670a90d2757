//! Entanglement-entropy trend: at fixed pair coupling, entropy grows with
//! the single-photon coupling strength, on both evolution routes.

use etp_core::coupling::CouplingSet;
use etp_core::oracle::{build_single_mode_generator, evolve};
use etp_core::series::{analytic_vacuum_state, SeriesControl};
use etp_core::state::{vacuum_joint_state, TruncationConfig};
use num_complex::Complex64;

fn entropy_of(p: &[f64]) -> f64 {
    p.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.ln()).sum()
}

#[test]
fn entropy_grows_with_single_photon_coupling() {
    let ctl = SeriesControl { term_tol: 1e-16, max_index: 400 };
    let mut prev_series = 0.0f64;
    let mut prev_oracle = 0.0f64;
    for &g_abs in &[0.2f64, 0.4, 0.8, 1.2, 1.6] {
        let n_max = 150u32;
        let trunc = TruncationConfig::new(-(n_max as i32 + 4), n_max as i32 + 4, n_max, 0.9)
            .unwrap();
        let cs = CouplingSet::with_g_p(
            Complex64::new(g_abs, 0.0),
            Complex64::new(0.8, 0.0),
            Complex64::new(0.0, 0.8),
        );
        let (state, _) = analytic_vacuum_state(&cs, cs.g_qu2, &trunc, &ctl).unwrap();
        let (p_series, _) = etp_core::observables::electron_spectrum(&state).unwrap();
        let s_series = entropy_of(&p_series);

        let gen = build_single_mode_generator(&cs, &trunc).unwrap();
        let out = evolve(&gen, &vacuum_joint_state(&trunc)).unwrap().state;
        let (p_oracle, _) = etp_core::observables::electron_spectrum(&out).unwrap();
        let s_oracle = entropy_of(&p_oracle);

        assert!(
            s_series > prev_series,
            "series entropy not increasing at |g| = {g_abs}: {s_series} <= {prev_series}"
        );
        assert!(
            s_oracle > prev_oracle,
            "oracle entropy not increasing at |g| = {g_abs}: {s_oracle} <= {prev_oracle}"
        );
        prev_series = s_series;
        prev_oracle = s_oracle;
    }
}
