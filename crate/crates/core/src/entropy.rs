//! Discrete entropy, quantised Gaussian reference laws and relative entropy
//! to the Gaussian, plus the finite-n bound checks relating them.
//!
//! For a lattice law `Y` with span `h`, mean `μ` and variance `σ²`, the
//! reference law assigns the cell `[a + kh, a + (k+1)h)` its `N(μ, σ²)` mass,
//! and `D(Y)` is the relative entropy of `Y` to that law. With `S_n` the
//! partial sum of a base law of maximal span `h` and variance `σ²`:
//!
//! - entropy deficit: `½ log(2πeσ²) − [H(S_n) − log(√n/h)]`
//! - solidarity: `|D(Ŝ_n) − deficit| <= r(1 + r/2)`, `r = h/(σ√n)`
//! - uniform smoothing: `|D(Ŝ_n) − D(Ŝ_n + (h/√n)U)| <= r(1 + 13r/24)`
//! - maximum entropy: `H(S_n) − log(√n/h) <= ½ log(2πe(σ² + h²/12n))`

use std::f64::consts::{E, PI};
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{LatticePmf, Moments, PartialSum};
use crate::numeric::{normal, CompensatedSum};
use crate::report::BoundReport;

/// Reference cells extend this many standard deviations past the mean.
pub const GAUSSIAN_WINDOW_SDS: f64 = 12.0;

/// Minimum mass an explicit index range must capture.
pub const MIN_CAPTURED_MASS: f64 = 1.0 - 1e-9;

/// Shannon entropy in nats, with `0 log 0 = 0`.
pub fn entropy(p: &LatticePmf) -> f64 {
    let mut acc = CompensatedSum::new();
    for &w in p.weights() {
        if w > 0.0 {
            acc.add(-w * w.ln());
        }
    }
    acc.value()
}

/// Differential entropy of `N(·, σ²)`.
pub fn gaussian_entropy(variance: f64) -> f64 {
    0.5 * (2.0 * PI * E * variance).ln()
}

/// A normal law `N(mean, variance)` to be quantised on the lattice
/// `{offset + k span}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantisedGaussianSpec {
    pub mean: f64,
    pub variance: f64,
    pub offset: f64,
    pub span: f64,
}

impl QuantisedGaussianSpec {
    pub fn new(mean: f64, variance: f64, offset: f64, span: f64) -> Result<Self> {
        if !(variance > 0.0 && variance.is_finite()) {
            return Err(Error::InvalidArgument(format!("variance must be positive, got {variance}")));
        }
        if !(span > 0.0 && span.is_finite()) {
            return Err(Error::InvalidSpan(span));
        }
        Ok(QuantisedGaussianSpec { mean, variance, offset, span })
    }

    /// The reference law for `p`: its own mean and variance on its own lattice.
    pub fn matched_to(p: &LatticePmf) -> Result<Self> {
        if p.is_point_mass() {
            return Err(Error::Degenerate);
        }
        let m = p.moments();
        Self::new(m.mean, m.variance, p.offset(), p.span())
    }

    fn standardise(&self, k: i64) -> (f64, f64) {
        let sd = self.variance.sqrt();
        let left = self.offset + k as f64 * self.span;
        ((left - self.mean) / sd, (left + self.span - self.mean) / sd)
    }

    /// Gaussian mass of cell `k`.
    pub fn cell_mass(&self, k: i64) -> f64 {
        let (lo, hi) = self.standardise(k);
        normal::cell_mass(lo, hi)
    }

    /// Log of the Gaussian mass of cell `k`, finite even where the mass
    /// itself underflows.
    pub fn ln_cell_mass(&self, k: i64) -> f64 {
        let (lo, hi) = self.standardise(k);
        normal::ln_cell_mass(lo, hi)
    }

    /// Cell indices covering `mean ± 12 sd`.
    pub fn auto_range(&self) -> RangeInclusive<i64> {
        let reach = GAUSSIAN_WINDOW_SDS * self.variance.sqrt();
        let lo = ((self.mean - reach - self.offset) / self.span).floor() as i64 - 1;
        let hi = ((self.mean + reach - self.offset) / self.span).floor() as i64 + 1;
        lo..=hi
    }
}

/// Cell masses of a quantised Gaussian over an explicit index range.
///
/// The masses are the true Gaussian cell probabilities and are not
/// renormalised; `captured_mass` records their total.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantisedGaussian {
    pub spec: QuantisedGaussianSpec,
    pub first_index: i64,
    pub masses: Vec<f64>,
    pub captured_mass: f64,
}

impl QuantisedGaussian {
    pub fn mass(&self, k: i64) -> f64 {
        let j = k - self.first_index;
        if j < 0 {
            return 0.0;
        }
        self.masses.get(j as usize).copied().unwrap_or(0.0)
    }

    pub fn last_index(&self) -> i64 {
        self.first_index + self.masses.len() as i64 - 1
    }

    /// The renormalised pmf over the captured cells.
    pub fn to_pmf(&self) -> Result<LatticePmf> {
        LatticePmf::from_parts(self.spec.offset, self.spec.span, self.first_index, self.masses.clone())
    }
}

/// Quantises `spec` over `range`. Errors when the range misses more than
/// `1e-9` of the Gaussian mass.
pub fn quantized_gaussian(spec: &QuantisedGaussianSpec, range: RangeInclusive<i64>) -> Result<QuantisedGaussian> {
    let (lo, hi) = (*range.start(), *range.end());
    if hi < lo {
        return Err(Error::RangeTooSmall { captured: 0.0 });
    }
    let masses: Vec<f64> = (lo..=hi).map(|k| spec.cell_mass(k)).collect();
    // Mass of the whole window, from two tail evaluations.
    let (a, _) = spec.standardise(lo);
    let (_, b) = spec.standardise(hi);
    let captured = normal::cell_mass(a, b);
    if captured < MIN_CAPTURED_MASS {
        return Err(Error::RangeTooSmall { captured });
    }
    Ok(QuantisedGaussian { spec: *spec, first_index: lo, masses, captured_mass: captured })
}

/// Quantises over `mean ± 12 sd`.
pub fn quantized_gaussian_auto(spec: &QuantisedGaussianSpec) -> Result<QuantisedGaussian> {
    quantized_gaussian(spec, spec.auto_range())
}

/// `D(p ‖ q)` where `q` is the Gaussian with `p`'s mean and variance
/// quantised on `p`'s lattice. The sum runs over `p`'s support.
///
/// The computation is carried out on the anchored copy of `p`, so the
/// result is exactly invariant under translation.
pub fn relative_entropy_to_gaussian(p: &LatticePmf) -> Result<f64> {
    let local = p.anchored();
    let spec = QuantisedGaussianSpec::matched_to(&local)?;
    Ok(relative_entropy_to(&local, &spec))
}

/// `D(p ‖ q)` for an explicit reference spec on `p`'s lattice.
pub fn relative_entropy_to(p: &LatticePmf, spec: &QuantisedGaussianSpec) -> f64 {
    let mut acc = CompensatedSum::new();
    for (j, &w) in p.weights().iter().enumerate() {
        if w > 0.0 {
            let k = p.first_index() + j as i64;
            acc.add(w * (w.ln() - spec.ln_cell_mass(k)));
        }
    }
    acc.value().max(0.0)
}

/// `H(S_n) − log(√n / h)`: the discrete entropy rescaled to the standardised
/// lattice, which equals the differential entropy of `Ŝ_n + (h/√n) U`.
pub fn rescaled_entropy(p_sn: &LatticePmf, n: usize, h: f64) -> f64 {
    entropy(p_sn) - ((n as f64).sqrt() / h).ln()
}

/// The entropy deficit `½ log(2πeσ²) − [H(S_n) − log(√n/h)]`.
pub fn entropy_gap(p_sn: &LatticePmf, n: usize, h: f64, sigma2: f64) -> f64 {
    gaussian_entropy(sigma2) - rescaled_entropy(p_sn, n, h)
}

fn standardised(p_sn: &LatticePmf, n: usize) -> LatticePmf {
    let m = p_sn.moments();
    let base = Moments { mean: m.mean / n as f64, variance: m.variance / n as f64 };
    p_sn.standardized_view(n, &base)
}

/// `h / (σ √n)`.
fn ratio(n: usize, h: f64, sigma2: f64) -> f64 {
    h / (sigma2.sqrt() * (n as f64).sqrt())
}

/// `D(Ŝ_n)` from the law of `S_n`.
pub fn standardized_relative_entropy(p_sn: &LatticePmf, n: usize) -> Result<f64> {
    relative_entropy_to_gaussian(&standardised(p_sn, n))
}

/// Compares `D(Ŝ_n)` with the entropy deficit.
pub fn solidarity_check(p_sn: &LatticePmf, n: usize, h: f64, sigma2: f64, tol: f64) -> Result<BoundReport> {
    let d = standardized_relative_entropy(p_sn, n)?;
    let deficit = entropy_gap(p_sn, n, h, sigma2);
    let r = ratio(n, h, sigma2);
    Ok(BoundReport::upper("solidarity", (d - deficit).abs(), r * (1.0 + 0.5 * r), tol))
}

/// Maximum entropy bound with the uniform-smoothing variance correction.
pub fn max_entropy_check(p_sn: &LatticePmf, n: usize, h: f64, sigma2: f64, tol: f64) -> BoundReport {
    let lhs = rescaled_entropy(p_sn, n, h);
    let rhs = gaussian_entropy(sigma2 + h * h / (12.0 * n as f64));
    BoundReport::upper("max_entropy", lhs, rhs, tol)
}

/// `D(Ŝ_n + (h/√n) U)` in closed form: the smoothed variable has
/// differential entropy `H(S_n) − log(√n/h)` and variance `σ² + h²/12n`.
pub fn smoothed_relative_entropy(p_sn: &LatticePmf, n: usize, h: f64, sigma2: f64) -> f64 {
    gaussian_entropy(sigma2 + h * h / (12.0 * n as f64)) - rescaled_entropy(p_sn, n, h)
}

/// Compares `D(Ŝ_n)` with its uniformly smoothed continuous counterpart.
pub fn uniform_smoothing_check(p_sn: &LatticePmf, n: usize, h: f64, sigma2: f64, tol: f64) -> Result<BoundReport> {
    let d = standardized_relative_entropy(p_sn, n)?;
    let smoothed = smoothed_relative_entropy(p_sn, n, h, sigma2);
    let r = ratio(n, h, sigma2);
    Ok(BoundReport::upper("uniform_smoothing", (d - smoothed).abs(), r * (1.0 + 13.0 * r / 24.0), tol))
}

/// Total variation between `p` and its matched quantised Gaussian. The
/// reference covers `p`'s support and `mean ± 12 sd`; mass outside that
/// window counts towards the distance in full.
pub fn tv_to_gaussian(p: &LatticePmf) -> Result<f64> {
    let local = p.anchored();
    tv_to(&local, &QuantisedGaussianSpec::matched_to(&local)?)
}

/// Total variation between `p` and an explicit quantised Gaussian on `p`'s
/// lattice.
pub fn tv_to(p: &LatticePmf, spec: &QuantisedGaussianSpec) -> Result<f64> {
    let window = spec.auto_range();
    let lo = p.first_index().min(*window.start());
    let hi = p.last_index().max(*window.end());
    let q = quantized_gaussian(spec, lo..=hi)?;
    let mut acc = CompensatedSum::new();
    for k in lo..=hi {
        acc.add((p.prob(k) - q.mass(k)).abs());
    }
    acc.add((1.0 - q.captured_mass).max(0.0));
    Ok((0.5 * acc.value()).clamp(0.0, 1.0))
}

/// Pinsker's inequality `2 TV² <= D` against the matched quantised Gaussian.
pub fn pinsker_check(p: &LatticePmf, tol: f64) -> Result<BoundReport> {
    let local = p.anchored();
    pinsker_check_against(&local, &QuantisedGaussianSpec::matched_to(&local)?, tol)
}

/// Pinsker's inequality against an explicit reference on `p`'s lattice.
pub fn pinsker_check_against(p: &LatticePmf, spec: &QuantisedGaussianSpec, tol: f64) -> Result<BoundReport> {
    let tv = tv_to(p, spec)?;
    let d = relative_entropy_to(p, spec);
    Ok(BoundReport::upper("pinsker", 2.0 * tv * tv, d, tol))
}

/// The quantities tabulated for one `n` of a convergence scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SumDiagnostics {
    pub n: usize,
    pub entropy_gap: f64,
    pub relative_entropy: f64,
    pub smoothed_relative_entropy: f64,
    pub solidarity_slack: f64,
    pub tv_to_gaussian: f64,
}

impl SumDiagnostics {
    pub fn compute(sum: &PartialSum) -> Result<Self> {
        let (n, h, s2) = (sum.n, sum.span, sum.sigma2());
        let standard = sum.standardized();
        Ok(SumDiagnostics {
            n,
            entropy_gap: entropy_gap(&sum.law, n, h, s2),
            relative_entropy: relative_entropy_to_gaussian(&standard)?,
            smoothed_relative_entropy: smoothed_relative_entropy(&sum.law, n, h, s2),
            solidarity_slack: solidarity_check(&sum.law, n, h, s2, 0.0)?.slack,
            tv_to_gaussian: tv_to_gaussian(&standard)?,
        })
    }
}
