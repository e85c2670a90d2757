//! Integer-order Bessel functions of the first kind via Miller's downward
//! recurrence with the `J_0 + 2 sum J_{2m} = 1` normalization.

/// `J_n(x)` for integer order, any sign of `n` and `x`.
///
/// Accuracy target 1e-12 absolute for `|x| <= 50`.
pub fn bessel_j(n: i32, x: f64) -> f64 {
    let (n_abs, parity_n) = if n < 0 {
        (-n as u32, if n % 2 != 0 { -1.0 } else { 1.0 })
    } else {
        (n as u32, 1.0)
    };
    let (x_abs, parity_x) = if x < 0.0 {
        (-x, if n_abs % 2 != 0 { -1.0 } else { 1.0 })
    } else {
        (x, 1.0)
    };
    parity_n * parity_x * bessel_j_sequence(n_abs, x_abs)[n_abs as usize]
}

/// `[J_0(x), ..., J_{n_max}(x)]` for `x >= 0`.
pub fn bessel_j_sequence(n_max: u32, x: f64) -> Vec<f64> {
    assert!(x >= 0.0);
    let n_max = n_max as usize;
    if x == 0.0 {
        let mut out = vec![0.0; n_max + 1];
        out[0] = 1.0;
        return out;
    }
    // start order: above both n_max and the turning point x, with margin
    let start = {
        let base = n_max.max(x.ceil() as usize);
        2 * (base / 2) + 40 + (x.sqrt() as usize) * 4
    };
    let mut out = vec![0.0; n_max + 1];
    let mut jp = 0.0f64; // J_{m+1}
    let mut j = 1e-300f64; // J_m seed
    let mut norm = 0.0f64; // J_0 + 2 sum J_2m
    for m in (0..=start).rev() {
        let jm = (2.0 * (m as f64 + 1.0) / x) * j - jp;
        jp = j;
        j = jm;
        // rescale to dodge overflow
        if j.abs() > 1e250 {
            let s = 1e-250;
            j *= s;
            jp *= s;
            norm *= s;
            for v in out.iter_mut() {
                *v *= s;
            }
        }
        if m <= n_max {
            out[m] = j;
        }
        if m % 2 == 0 {
            norm += if m == 0 { j } else { 2.0 * j };
        }
    }
    for v in out.iter_mut() {
        *v /= norm;
    }
    out
}
