//! Standard normal density, tails and cell masses.
//!
//! Tail probabilities come from `erfc` evaluated on the nearer side, so cell
//! masses far from the mean never subtract two numbers close to one. Beyond
//! `z = 30` the upper tail is carried in the log domain through the Mills
//! ratio continued fraction.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;
const LOG_DOMAIN_CUTOFF: f64 = 30.0;

/// Standard normal density.
#[inline]
pub fn pdf(z: f64) -> f64 {
    (-0.5 * z * z).exp() / (2.0 * PI).sqrt()
}

/// P(Z > z) for standard normal Z.
#[inline]
pub fn upper_tail(z: f64) -> f64 {
    0.5 * libm::erfc(z * FRAC_1_SQRT_2)
}

/// P(Z <= z) for standard normal Z.
#[inline]
pub fn cdf(z: f64) -> f64 {
    upper_tail(-z)
}

/// Mills ratio Q(z)/φ(z) by backward evaluation of the Laplace continued
/// fraction. Accurate to machine precision for z >= 10.
fn mills_ratio(z: f64) -> f64 {
    let mut frac = 0.0;
    for k in (1..=60).rev() {
        frac = k as f64 / (z + frac);
    }
    1.0 / (z + frac)
}

/// ln P(Z > z).
pub fn ln_upper_tail(z: f64) -> f64 {
    if z >= LOG_DOMAIN_CUTOFF {
        -0.5 * z * z - LN_SQRT_2PI + mills_ratio(z).ln()
    } else if z < -5.0 {
        (-cdf(z)).ln_1p()
    } else {
        upper_tail(z).ln()
    }
}

/// P(lo < Z <= hi), computed from the tail that does not involve a
/// subtraction from one.
pub fn cell_mass(lo: f64, hi: f64) -> f64 {
    debug_assert!(lo <= hi);
    if lo >= 0.0 {
        (upper_tail(lo) - upper_tail(hi)).max(0.0)
    } else if hi <= 0.0 {
        (cdf(hi) - cdf(lo)).max(0.0)
    } else {
        (1.0 - cdf(lo) - upper_tail(hi)).max(0.0)
    }
}

/// ln P(lo < Z <= hi), valid even when the mass underflows `f64`.
pub fn ln_cell_mass(lo: f64, hi: f64) -> f64 {
    debug_assert!(lo <= hi);
    if lo >= 0.0 {
        ln_tail_difference(lo, hi)
    } else if hi <= 0.0 {
        ln_tail_difference(-hi, -lo)
    } else {
        cell_mass(lo, hi).ln()
    }
}

// ln(Q(lo) - Q(hi)) for 0 <= lo <= hi.
fn ln_tail_difference(lo: f64, hi: f64) -> f64 {
    if hi == f64::INFINITY {
        return ln_upper_tail(lo);
    }
    let a = ln_upper_tail(lo);
    let b = ln_upper_tail(hi);
    a + (-(b - a).exp_m1()).ln()
}
