//! Double-double arithmetic for the few series whose terms cancel heavily,
//! plus a compensated log-factorial table.

use std::sync::OnceLock;

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn value(self) -> f64 {
        self.hi + self.lo
    }

    pub fn add(self, other: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, other.hi);
        let e = e + self.lo + other.lo;
        let (hi, lo) = quick_two_sum(s, e);
        Dd { hi, lo }
    }

    pub fn add_f64(self, x: f64) -> Dd {
        self.add(Dd::from_f64(x))
    }

    pub fn mul_f64(self, x: f64) -> Dd {
        let (p, e) = two_prod(self.hi, x);
        let e = e + self.lo * x;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    pub fn div_f64(self, x: f64) -> Dd {
        let q1 = self.hi / x;
        let (p, e) = two_prod(q1, x);
        let r = (self.hi - p - e + self.lo) / x;
        let (hi, lo) = quick_two_sum(q1, r);
        Dd { hi, lo }
    }

    pub fn abs(self) -> f64 {
        self.value().abs()
    }
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

const LN_FACT_TABLE_LEN: usize = 4200;

fn ln_fact_table() -> &'static Vec<Dd> {
    static TABLE: OnceLock<Vec<Dd>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = Vec::with_capacity(LN_FACT_TABLE_LEN);
        let mut acc = Dd::ZERO;
        t.push(acc);
        for k in 1..LN_FACT_TABLE_LEN {
            acc = acc.add_f64((k as f64).ln());
            t.push(acc);
        }
        t
    })
}

/// `ln(n!)` as f64 (correctly rounded from a compensated sum).
pub fn ln_factorial(n: usize) -> f64 {
    ln_factorial_dd(n).value()
}

/// `ln(n!)` keeping the compensation term.
pub fn ln_factorial_dd(n: usize) -> Dd {
    let table = ln_fact_table();
    assert!(
        n < table.len(),
        "ln_factorial: n = {n} beyond the supported table"
    );
    table[n]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_factorial_known_values() {
        assert_eq!(ln_factorial(0), 0.0);
        assert_eq!(ln_factorial(1), 0.0);
        assert!((ln_factorial(2) - 2.0f64.ln()).abs() < 1e-15);
        // ln(170!) reference from mpmath: 706.5730622457873
        assert!((ln_factorial(170) - 706.573_062_245_787_3).abs() < 1e-11);
        // ln(1000!) = 5912.128178488163
        assert!((ln_factorial(1000) - 5_912.128_178_488_163).abs() < 1e-10);
    }

    #[test]
    fn dd_sum_cancellation() {
        // (1e16 + 1) - 1e16 = 1 exactly in dd
        let a = Dd::from_f64(1e16).add_f64(1.0);
        let b = a.add_f64(-1e16);
        assert_eq!(b.value(), 1.0);
    }

    #[test]
    fn dd_product_chain() {
        // product of 50 factors of 1/3 then times 3^50 recovers 1 to ~1e-30
        let mut p = Dd::from_f64(1.0);
        for _ in 0..50 {
            p = p.div_f64(3.0);
        }
        for _ in 0..50 {
            p = p.mul_f64(3.0);
        }
        assert!((p.value() - 1.0).abs() < 1e-28);
    }
}
