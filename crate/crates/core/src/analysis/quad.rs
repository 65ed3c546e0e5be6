//! Adaptive Gauss-Kronrod (7/15) quadrature.
//!
//! Used by the integration oracles and the validation suite; kept free of
//! any closed-form knowledge so it can check the closed forms independently.

use crate::error::{param, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_INTERVALS: usize = 4000;

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kron += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Segment {
        a,
        b,
        value: kron * half,
        error: ((kron - gauss) * half).abs(),
    }
}

/// Integrates `f` over `[a, b]`, seeding the adaptive subdivision with the
/// interior `breaks`. Stops when the estimated error is below
/// `max(abs_tol, rel_tol * |I|)`.
pub fn integrate_with_breaks<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    abs_tol: f64,
    rel_tol: f64,
) -> Result<f64> {
    if !(a.is_finite() && b.is_finite()) || b < a {
        return param(format!("bad integration interval [{a}, {b}]"));
    }
    if a == b {
        return Ok(0.0);
    }
    let mut points: Vec<f64> = std::iter::once(a)
        .chain(breaks.iter().copied().filter(|x| *x > a && *x < b))
        .chain(std::iter::once(b))
        .collect();
    points.sort_by(|x, y| x.partial_cmp(y).unwrap());
    points.dedup();

    let mut segs: Vec<Segment> = points.windows(2).map(|w| kronrod(&f, w[0], w[1])).collect();
    loop {
        let total: f64 = segs.iter().map(|s| s.value).sum();
        let err: f64 = segs.iter().map(|s| s.error).sum();
        if !total.is_finite() {
            return param("integrand is not finite");
        }
        if err <= abs_tol.max(rel_tol * total.abs()) || segs.len() >= MAX_INTERVALS {
            return Ok(total);
        }
        let (worst, _) = segs
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.partial_cmp(&y.1.error).unwrap())
            .unwrap();
        let s = segs.swap_remove(worst);
        let mid = 0.5 * (s.a + s.b);
        if mid <= s.a || mid >= s.b {
            // interval exhausted at machine precision
            segs.push(Segment { error: 0.0, ..s });
            continue;
        }
        segs.push(kronrod(&f, s.a, mid));
        segs.push(kronrod(&f, mid, s.b));
    }
}

pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<f64> {
    integrate_with_breaks(f, a, b, &[], abs_tol, rel_tol)
}

/// Integrates `f` over `[a, inf)` through `x = a + scale * s / (1 - s)`.
pub fn integrate_to_inf<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    scale: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<f64> {
    integrate_to_inf_with_breaks(f, a, scale, &[], abs_tol, rel_tol)
}

/// As [`integrate_to_inf`], with breakpoints given in the original variable.
pub fn integrate_to_inf_with_breaks<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    scale: f64,
    breaks: &[f64],
    abs_tol: f64,
    rel_tol: f64,
) -> Result<f64> {
    if !(scale > 0.0) {
        return param(format!("length scale must be > 0, got {scale}"));
    }
    let to_s = |x: f64| {
        let t = (x - a) / scale;
        t / (1.0 + t)
    };
    let s_breaks: Vec<f64> = breaks
        .iter()
        .filter(|&&x| x > a)
        .map(|&x| to_s(x))
        .collect();
    let g = |s: f64| {
        let one_minus = 1.0 - s;
        let x = a + scale * s / one_minus;
        let v = f(x);
        if v == 0.0 {
            0.0
        } else {
            v * scale / (one_minus * one_minus)
        }
    };
    integrate_with_breaks(g, 0.0, 1.0, &s_breaks, abs_tol, rel_tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_for_low_degree_polynomials() {
        // single 15-point Kronrod rule is exact up to degree 22
        let v = integrate(|x| 3.0 * x.powi(2) - x.powi(7) + 1.0, -1.0, 2.0, 0.0, 1e-15).unwrap();
        let exact = (8.0 + 1.0) - (256.0 - 1.0) / 8.0 + 3.0;
        assert!((v - exact).abs() < 1e-12);
    }

    #[test]
    fn smooth_and_peaked() {
        let v = integrate(f64::exp, 0.0, 1.0, 0.0, 1e-14).unwrap();
        assert!((v - (1f64.exp() - 1.0)).abs() < 1e-13);
        let w = 1e-4;
        let v = integrate(|x| w / (x * x + w * w), -1.0, 1.0, 0.0, 1e-12).unwrap();
        let exact = 2.0 * (1.0 / w).atan();
        assert!((v - exact).abs() < 1e-10);
    }

    #[test]
    fn semi_infinite() {
        let v = integrate_to_inf(|x| (-x).exp(), 0.0, 1.0, 0.0, 1e-14).unwrap();
        assert!((v - 1.0).abs() < 1e-13);
        let v =
            integrate_to_inf_with_breaks(|x| (-x / 1e4).exp() / 1e4, 2.0, 1.0, &[1e4], 0.0, 1e-13)
                .unwrap();
        assert!((v - (-2e-4f64).exp()).abs() < 1e-11);
    }

    #[test]
    fn rejects_bad_interval() {
        assert!(integrate(|x| x, 1.0, 0.0, 0.0, 1e-9).is_err());
        assert!(integrate_to_inf(|x| x, 0.0, 0.0, 0.0, 1e-9).is_err());
    }
}
