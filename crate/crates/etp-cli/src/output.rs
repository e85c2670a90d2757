//! Deterministic CSV bodies. Floats use Rust's shortest round-trip
//! representation, so identical configs yield byte-identical files.

use etp_core::observables::CoincidenceTable;
use etp_core::ponderomotive::KdDistribution;
use ndarray::Array2;
use num_complex::Complex64;

pub fn pnk_csv(table: &CoincidenceTable) -> String {
    let (nc, kc) = table.p.dim();
    let mut out = String::from("n,k,P\n");
    for n in 0..nc {
        for ki in 0..kc {
            let k = table.k_min + ki as i32;
            out.push_str(&format!("{},{},{}\n", n, k, table.p[(n, ki)]));
        }
    }
    out
}

pub fn spectrum_csv(p_k: &[f64], k_min: i32) -> String {
    let mut out = String::from("k,P_k\n");
    for (i, p) in p_k.iter().enumerate() {
        out.push_str(&format!("{},{}\n", k_min + i as i32, p));
    }
    out
}

pub fn entropy_csv(rows: &[(f64, f64)]) -> String {
    let mut out = String::from("delta_phi,S\n");
    for (phi, s) in rows {
        out.push_str(&format!("{},{}\n", phi, s));
    }
    out
}

pub fn sweep_spectra_csv<'a>(
    rows: impl Iterator<Item = (f64, &'a [f64])>,
    k_min: i32,
) -> String {
    let mut out = String::from("delta_phi,k,P\n");
    for (phi, p_k) in rows {
        for (i, p) in p_k.iter().enumerate() {
            out.push_str(&format!("{},{},{}\n", phi, k_min + i as i32, p));
        }
    }
    out
}

pub fn kd_csv(dist: &KdDistribution) -> String {
    let mut out = String::from("n,momentum_over_kp,P\n");
    for (n, m, p) in dist.rows() {
        out.push_str(&format!("{},{},{}\n", n, m, p));
    }
    out
}

pub fn joint_photon_csv(p: &Array2<f64>) -> String {
    let mut out = String::from("n1,n2,P\n");
    for ((n1, n2), v) in p.indexed_iter() {
        out.push_str(&format!("{},{},{}\n", n1, n2, v));
    }
    out
}

pub fn couplings_csv(rows: &[(String, Complex64)]) -> String {
    let mut out = String::from("name,re,im,abs,arg\n");
    for (name, v) in rows {
        out.push_str(&format!("{},{},{},{},{}\n", name, v.re, v.im, v.norm(), v.arg()));
    }
    out
}
