//! Adaptive Gauss–Kronrod and fixed Gauss–Legendre rules.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::CompensatedSum;
use crate::error::{Error, Result};

// 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1].
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
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Tolerances for [`integrate`].
#[derive(Debug, Clone, Copy)]
pub struct QuadSettings {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadSettings {
    fn default() -> Self {
        Self { abs_tol: 1e-9, rel_tol: 1e-12, max_intervals: 20_000 }
    }
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Globally adaptive G7–K15 integration of `f` over `[a, b]`.
///
/// The interval with the largest error estimate is bisected until the
/// summed estimate drops below `max(abs_tol, rel_tol * |I|)`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, settings: QuadSettings) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let (value, err) = gk15(&f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Piece { lo: a, hi: b, value, err });
    let mut total = value;
    let mut total_err = err;
    while total_err > settings.abs_tol.max(settings.rel_tol * total.abs()) {
        if heap.len() >= settings.max_intervals {
            return Err(Error::Quadrature { lo: a, hi: b });
        }
        let worst = heap.pop().expect("nonempty");
        let mid = 0.5 * (worst.lo + worst.hi);
        if mid <= worst.lo || mid >= worst.hi {
            return Err(Error::Quadrature { lo: a, hi: b });
        }
        let (v1, e1) = gk15(&f, worst.lo, mid);
        let (v2, e2) = gk15(&f, mid, worst.hi);
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.err;
        heap.push(Piece { lo: worst.lo, hi: mid, value: v1, err: e1 });
        heap.push(Piece { lo: mid, hi: worst.hi, value: v2, err: e2 });
    }
    let mut pieces = heap.into_vec();
    pieces.sort_by(|x, y| x.lo.total_cmp(&y.lo));
    Ok(pieces.iter().map(|p| p.value).collect::<CompensatedSum>().value())
}

struct Piece {
    lo: f64,
    hi: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}

impl Eq for Piece {}

impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Integrates over consecutive breakpoints, splitting the tolerance budget
/// evenly across segments. `breaks` must be sorted.
pub fn integrate_piecewise<F: Fn(f64) -> f64>(f: F, breaks: &[f64], settings: QuadSettings) -> Result<f64> {
    let segments = breaks.len().saturating_sub(1).max(1);
    let per = QuadSettings { abs_tol: settings.abs_tol / segments as f64, ..settings };
    let mut acc = CompensatedSum::new();
    for w in breaks.windows(2) {
        if w[1] > w[0] {
            acc.add(integrate(&f, w[0], w[1], per)?);
        }
    }
    Ok(acc.value())
}

/// Gauss–Legendre nodes and weights on `[a, b]`.
pub fn gauss_legendre(points: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    let m = points;
    let mut rule = Vec::with_capacity(m);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut deriv = 0.0;
        for _ in 0..100 {
            // Legendre recurrence for P_m(x) and P_m'(x).
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=m {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pm = if m == 1 { x } else { p1 };
            let pm1 = if m == 1 { 1.0 } else { p0 };
            deriv = m as f64 * (x * pm - pm1) / (x * x - 1.0);
            let step = pm / deriv;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * deriv * deriv);
        let half = 0.5 * (b - a);
        rule.push((0.5 * (a + b) + half * x, w * half));
    }
    rule.sort_by(|p, q| p.0.total_cmp(&q.0));
    rule
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronrod_integrates_gaussian() {
        let v = integrate(|x| (-x * x / 2.0).exp(), -12.0, 12.0, QuadSettings::default()).unwrap();
        assert!((v - (2.0 * std::f64::consts::PI).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn kronrod_handles_kinks() {
        let v = integrate_piecewise(|x: f64| x.abs(), &[-1.0, 0.0, 2.0], QuadSettings::default()).unwrap();
        assert!((v - 2.5).abs() < 1e-13);
    }

    #[test]
    fn legendre_is_exact_for_polynomials() {
        for m in [1usize, 2, 5, 16, 64] {
            let rule = gauss_legendre(m, 0.0, 2.0);
            let total: f64 = rule.iter().map(|p| p.1).sum();
            assert!((total - 2.0).abs() < 1e-13, "m={m}");
            let deg = 2 * m - 1;
            let v: f64 = rule.iter().map(|&(x, w)| w * x.powi(deg as i32)).sum();
            let exact = 2f64.powi(deg as i32 + 1) / (deg as f64 + 1.0);
            assert!((v - exact).abs() < 1e-11 * exact, "m={m}");
        }
    }

    #[test]
    fn subdivision_limit_is_reported() {
        let tight = QuadSettings { abs_tol: 0.0, rel_tol: 0.0, max_intervals: 4 };
        assert!(integrate(|x: f64| x.sqrt(), 0.0, 1.0, tight).is_err());
    }
}
