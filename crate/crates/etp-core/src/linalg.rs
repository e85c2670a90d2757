//! Small dense complex kernels: linear solve and Hermitian eigenvalues.
//!
//! The matrices here are conserved-sector blocks and reduced density
//! matrices, a few hundred rows at most, so simple dense algorithms with
//! partial pivoting / cyclic Jacobi sweeps are the right tool.

use ndarray::Array2;
use num_complex::Complex64;

/// Solve `A X = B` by Gaussian elimination with partial pivoting.
///
/// Panics on a numerically singular pivot; callers only pass well-conditioned
/// systems (the Pade denominator is diagonally dominant at the scaled norm).
pub fn solve(a: Array2<Complex64>, b: Array2<Complex64>) -> Array2<Complex64> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "solve: A must be square");
    assert_eq!(n, b.nrows(), "solve: rhs rows must match");
    let m = b.ncols();

    let mut aug = Array2::<Complex64>::zeros((n, n + m));
    aug.slice_mut(ndarray::s![.., ..n]).assign(&a);
    aug.slice_mut(ndarray::s![.., n..]).assign(&b);

    for col in 0..n {
        let mut max_val = 0.0;
        let mut max_row = col;
        for row in col..n {
            let v = aug[(row, col)].norm();
            if v > max_val {
                max_val = v;
                max_row = row;
            }
        }
        assert!(max_val > 1e-300, "solve: singular matrix");
        if max_row != col {
            for j in 0..(n + m) {
                aug.swap((col, j), (max_row, j));
            }
        }
        let pivot = aug[(col, col)];
        for row in (col + 1)..n {
            let factor = aug[(row, col)] / pivot;
            if factor == Complex64::ZERO {
                continue;
            }
            for j in col..(n + m) {
                let v = aug[(col, j)];
                aug[(row, j)] -= factor * v;
            }
        }
    }

    let mut x = Array2::<Complex64>::zeros((n, m));
    for col in (0..n).rev() {
        let pivot = aug[(col, col)];
        for j in 0..m {
            let mut sum = aug[(col, n + j)];
            for k in (col + 1)..n {
                sum -= aug[(col, k)] * x[(k, j)];
            }
            x[(col, j)] = sum / pivot;
        }
    }
    x
}

/// Eigenvalues of a Hermitian matrix by cyclic Jacobi rotations.
///
/// Returns them sorted ascending. The strictly-upper part drives the
/// rotations; the input is read as Hermitian without checking.
pub fn hermitian_eigenvalues(matrix: &Array2<Complex64>) -> Vec<f64> {
    let n = matrix.nrows();
    assert_eq!(n, matrix.ncols());
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![matrix[(0, 0)].re];
    }
    let mut a = matrix.clone();
    let scale: f64 = a
        .iter()
        .map(|c| c.norm())
        .fold(0.0f64, f64::max)
        .max(1e-300);
    let tol = 1e-15 * scale;

    for _sweep in 0..60 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(a[(p, q)].norm());
            }
        }
        if off <= tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq.norm() <= tol * 1e-2 {
                    continue;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let phase = apq / apq.norm();
                let tau = (aqq - app) / (2.0 * apq.norm());
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = phase * (t * c);
                // rows/cols p and q: A <- R^H A R with R = [[c, s], [-s*, c]]
                for j in 0..n {
                    let ajp = a[(j, p)];
                    let ajq = a[(j, q)];
                    a[(j, p)] = ajp * c - ajq * s.conj();
                    a[(j, q)] = ajp * s + ajq * c;
                }
                for j in 0..n {
                    let apj = a[(p, j)];
                    let aqj = a[(q, j)];
                    a[(p, j)] = apj * c - aqj * s;
                    a[(q, j)] = apj * s.conj() + aqj * c;
                }
            }
        }
    }
    let mut evs: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    evs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    evs
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn solve_small_system() {
        let a = array![[c(2.0, 1.0), c(0.0, -1.0)], [c(1.0, 0.0), c(3.0, 0.0)]];
        let b = array![[c(1.0, 0.0)], [c(0.0, 2.0)]];
        let x = solve(a.clone(), b.clone());
        let r = a.dot(&x);
        for (u, v) in r.iter().zip(b.iter()) {
            assert!((u - v).norm() < 1e-13);
        }
    }

    #[test]
    fn solve_requires_pivoting() {
        let a = array![[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]];
        let b = array![[c(3.0, 0.0)], [c(7.0, 0.0)]];
        let x = solve(a, b);
        assert!((x[(0, 0)] - c(7.0, 0.0)).norm() < 1e-14);
        assert!((x[(1, 0)] - c(3.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn eigenvalues_of_known_hermitian() {
        // [[2, i], [-i, 2]] has eigenvalues 1 and 3
        let a = array![[c(2.0, 0.0), c(0.0, 1.0)], [c(0.0, -1.0), c(2.0, 0.0)]];
        let ev = hermitian_eigenvalues(&a);
        assert!((ev[0] - 1.0).abs() < 1e-12);
        assert!((ev[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn eigenvalues_match_trace_invariants_on_random_hermitian() {
        // build H = B + B^H from a deterministic pseudo-random B
        let n = 24;
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let mut h = Array2::<Complex64>::zeros((n, n));
        for i in 0..n {
            for j in 0..n {
                h[(i, j)] = c(next(), next());
            }
        }
        let hh = &h + &h.t().mapv(|v| v.conj());
        let ev = hermitian_eigenvalues(&hh);
        let tr: f64 = (0..n).map(|i| hh[(i, i)].re).sum();
        let tr2: f64 = hh
            .dot(&hh)
            .diag()
            .iter()
            .map(|v| v.re)
            .sum();
        assert!((ev.iter().sum::<f64>() - tr).abs() < 1e-10 * tr.abs().max(1.0));
        assert!(
            (ev.iter().map(|e| e * e).sum::<f64>() - tr2).abs() < 1e-9 * tr2.abs().max(1.0)
        );
    }
}
