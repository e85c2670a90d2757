//! Composite Simpson quadrature for complex samples on a uniform grid, with a
//! Richardson error estimate from the half-resolution grid.

use num_complex::Complex64;

/// Integration result with an error estimate.
#[derive(Debug, Clone, Copy)]
pub struct Quadrature {
    pub value: Complex64,
    /// `|I_h - I_2h| / 15`, the Richardson estimate for Simpson's rule;
    /// 0 when the grid is too short to halve.
    pub error_estimate: f64,
}

/// Integrate samples `f` spaced by `h`.
///
/// Odd sample counts use pure composite Simpson; even counts close the last
/// interval with a trapezoid. Needs at least 3 samples.
pub fn integrate_uniform(f: &[Complex64], h: f64) -> Quadrature {
    assert!(f.len() >= 3, "integrate_uniform needs >= 3 samples");
    let value = simpson(f, h);
    // Richardson: compare with the every-other-point rule where possible.
    let error_estimate = if f.len() >= 5 {
        let coarse: Vec<Complex64> = f.iter().step_by(2).copied().collect();
        let coarse_val = if f.len() % 2 == 1 {
            simpson(&coarse, 2.0 * h)
        } else {
            // drop the last sample from the fine grid's trapezoid tail region
            let trimmed = simpson(&coarse, 2.0 * h);
            let tail = 0.5 * h * (f[f.len() - 2] + f[f.len() - 1]);
            trimmed + tail
        };
        (value - coarse_val).norm() / 15.0
    } else {
        0.0
    };
    Quadrature { value, error_estimate }
}

fn simpson(f: &[Complex64], h: f64) -> Complex64 {
    let n = f.len();
    let (simpson_end, trapezoid_tail) = if n % 2 == 1 {
        (n, Complex64::ZERO)
    } else {
        (n - 1, 0.5 * h * (f[n - 2] + f[n - 1]))
    };
    let mut acc = f[0] + f[simpson_end - 1];
    for (i, v) in f[1..simpson_end - 1].iter().enumerate() {
        let w = if i % 2 == 0 { 4.0 } else { 2.0 };
        acc += w * v;
    }
    acc * (h / 3.0) + trapezoid_tail
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(n: usize, h: f64, f: impl Fn(f64) -> Complex64) -> Vec<Complex64> {
        (0..n).map(|i| f(i as f64 * h)).collect()
    }

    #[test]
    fn integrates_polynomials_exactly() {
        // Simpson is exact on cubics
        let h = 0.1;
        let f = sample(11, h, |x| Complex64::new(x * x * x - 2.0 * x, 1.0));
        let q = integrate_uniform(&f, h);
        let exact = Complex64::new(0.25 - 1.0, 1.0); // int over [0,1]
        assert!((q.value - exact).norm() < 1e-14);
    }

    #[test]
    fn even_sample_count_trapezoid_tail() {
        let h = 0.1;
        let f = sample(10, h, |x| Complex64::new(x, 0.0));
        let q = integrate_uniform(&f, h);
        // exact integral of x over [0, 0.9]
        assert!((q.value - Complex64::new(0.405, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn oscillatory_accuracy_and_estimate() {
        // int_0^{2pi} e^{i x} dx = 0; 64 points per cycle
        let n = 129;
        let h = std::f64::consts::TAU / (n - 1) as f64;
        let f = sample(n, h, |x| Complex64::from_polar(1.0, x));
        let q = integrate_uniform(&f, h);
        assert!(q.value.norm() < 1e-7);
        assert!(q.error_estimate < 1e-4);
    }

    #[test]
    fn richardson_tracks_refinement() {
        // halving h shrinks the change below the reported estimate
        let f = |x: f64| Complex64::from_polar((-(x - 1.5) * (x - 1.5)).exp(), 3.0 * x);
        let n1 = 65;
        let h1 = 3.0 / (n1 - 1) as f64;
        let q1 = integrate_uniform(&sample(n1, h1, f), h1);
        let n2 = 129;
        let h2 = 3.0 / (n2 - 1) as f64;
        let q2 = integrate_uniform(&sample(n2, h2, f), h2);
        assert!((q2.value - q1.value).norm() <= q1.error_estimate * 1.5 + 1e-12);
    }
}
