//! Exponential integral `E1(x) = \int_x^\infty e^{-t}/t dt` for real `x > 0`.

use crate::error::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// `E1(x)` with relative error below 1e-12 on `x > 0`.
pub fn exp_integral_e1(x: f64) -> Result<f64> {
    check(x)?;
    Ok(if x <= 1.0 {
        series(x)
    } else {
        (-x).exp() * continued_fraction(x)
    })
}

/// `e^x E1(x)`, finite for all `x > 0` (no overflow or underflow for large `x`).
pub fn scaled_exp_integral_e1(x: f64) -> Result<f64> {
    check(x)?;
    Ok(if x <= 1.0 {
        x.exp() * series(x)
    } else {
        continued_fraction(x)
    })
}

fn check(x: f64) -> Result<()> {
    if x > 0.0 && !x.is_nan() {
        Ok(())
    } else {
        Err(Error::Domain(format!("E1(x) requires x > 0, got {x}")))
    }
}

// -gamma - ln x - sum_{k>=1} (-x)^k / (k k!)
fn series(x: f64) -> f64 {
    let mut sum = 0.0;
    let mut term = 1.0;
    for k in 1..200 {
        term *= -x / k as f64;
        let add = term / k as f64;
        sum += add;
        if add.abs() <= f64::EPSILON * sum.abs() {
            break;
        }
    }
    -EULER_GAMMA - x.ln() - sum
}

// Modified Lentz evaluation of e^x E1(x) = 1/(x+1- 1/(x+3- 4/(x+5- ...))).
fn continued_fraction(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..10_000 {
        let a = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() <= 1e-16 {
            break;
        }
    }
    h
}
