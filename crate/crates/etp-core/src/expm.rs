//! Dense matrix exponential by scaling-and-squaring with a Pade(13,13)
//! kernel (Higham 2005), scaled so the argument 1-norm stays below 0.5.

use crate::linalg::solve;
use ndarray::Array2;
use num_complex::Complex64;

/// Pade(13,13) coefficients, Higham (2005) eq. (10.33).
const PADE_COEFFS: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

/// Scaled 1-norm threshold; conservative so the kernel is at machine
/// precision even for non-normal blocks.
const THETA: f64 = 0.5;

pub fn expm(a: &Array2<Complex64>) -> Array2<Complex64> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "expm: matrix must be square");
    if n == 0 {
        return Array2::zeros((0, 0));
    }
    if n == 1 {
        let mut r = Array2::zeros((1, 1));
        r[(0, 0)] = a[(0, 0)].exp();
        return r;
    }

    let norm = one_norm(a);
    let s = if norm > THETA {
        (norm / THETA).log2().ceil() as u32
    } else {
        0
    };
    let scaled = a.mapv(|v| v / 2f64.powi(s as i32));
    let mut result = pade13(&scaled);
    for _ in 0..s {
        result = result.dot(&result);
    }
    result
}

fn one_norm(a: &Array2<Complex64>) -> f64 {
    let mut best = 0.0f64;
    for col in a.columns() {
        let s: f64 = col.iter().map(|v| v.norm()).sum();
        best = best.max(s);
    }
    best
}

fn pade13(a: &Array2<Complex64>) -> Array2<Complex64> {
    let n = a.nrows();
    let eye = Array2::from_diag_elem(n, Complex64::new(1.0, 0.0));
    let c = |k: usize| Complex64::new(PADE_COEFFS[k], 0.0);

    let a2 = a.dot(a);
    let a4 = a2.dot(&a2);
    let a6 = a2.dot(&a4);

    let w1 = &a6 * c(13) + &a4 * c(11) + &a2 * c(9);
    let w2 = w1.dot(&a6) + &a6 * c(7) + &a4 * c(5) + &a2 * c(3) + &eye * c(1);
    let u = a.dot(&w2);

    let v1 = &a6 * c(12) + &a4 * c(10) + &a2 * c(8);
    let v = v1.dot(&a6) + &a6 * c(6) + &a4 * c(4) + &a2 * c(2) + &eye * c(0);

    let numerator = &v + &u;
    let denominator = &v - &u;
    solve(denominator, numerator)
}
