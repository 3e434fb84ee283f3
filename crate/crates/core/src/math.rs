//! Float helpers that `core` does not provide.

pub(crate) use libm::{exp, fabs, pow, sqrt};

/// `x^n` by repeated squaring; exact sign handling for negative `x`.
pub(crate) fn powi(x: f64, mut n: u32) -> f64 {
    let mut base = x;
    let mut acc = 1.0;
    while n > 0 {
        if n & 1 == 1 {
            acc *= base;
        }
        base *= base;
        n >>= 1;
    }
    acc
}

pub(crate) fn max_abs(values: &[f64]) -> f64 {
    values.iter().fold(0.0, |m, v| f64::max(m, fabs(*v)))
}

pub(crate) fn is_integer(x: f64) -> bool {
    libm::floor(x) == x
}
