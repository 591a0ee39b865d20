//! Gaussian-smoothed lattice laws, their Fisher information, and a
//! numerical check of the integral form of de Bruijn's identity.
//!
//! For a lattice variable `Y` (optionally spread by a uniform on each
//! cell) and an independent normal `Z` with `Y`'s mean and variance, the
//! law of `√(1−t) Y + √t Z` is a finite mixture with closed-form density
//! and score. Along this path
//!
//! ```text
//! D(Y) = D(Y/√2 + Z/√2) + ∫₀^{1/2} J(√(1−t) Y + √t Z) dt / (2(1−t))
//! ```
//!
//! where `J = σ² I − 1` is the standardised Fisher information.

use serde::{Deserialize, Serialize};

use crate::entropy::{gaussian_entropy, smoothed_relative_entropy};
use crate::error::{Error, Result};
use crate::lattice::{LatticePmf, Moments};
use crate::numeric::normal;
use crate::numeric::quad::{gauss_legendre, integrate_piecewise, QuadSettings};
use crate::numeric::CompensatedSum;
use crate::report::BoundReport;

/// Integration window, in standard deviations of the Gaussian component.
pub const WINDOW_SDS: f64 = 12.0;

const FEATURE_SDS: f64 = 8.0;

/// Tolerance on `|lhs − rhs|` for the de Bruijn identity.
pub const DE_BRUIJN_TOL: f64 = 1e-3;

/// Default number of nodes for the integral over `t`.
pub const DEFAULT_T_NODES: usize = 64;

/// Largest `n` accepted by [`de_bruijn_check`] by default.
pub const DEFAULT_DE_BRUIJN_CAP: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SmoothingKind {
    /// Gaussian kernels at the lattice points.
    LatticeSmoothed,
    /// Each lattice cell spread uniformly before Gaussian smoothing.
    LatticeUniformSmoothed,
}

/// A finite mixture of Gaussian (or uniform ∗ Gaussian) components.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianSmoothedDensity {
    pub kind: SmoothingKind,
    pub locations: Vec<f64>,
    pub weights: Vec<f64>,
    pub gaussian_variance: f64,
    pub uniform_halfwidth: f64,
    /// Interpolation parameter when built by [`smooth`].
    pub t: Option<f64>,
    sd: f64,
}

impl GaussianSmoothedDensity {
    /// A mixture with explicit component locations and weights. A positive
    /// `uniform_halfwidth` spreads each component over
    /// `[location − halfwidth, location + halfwidth]`.
    pub fn mixture(locations: Vec<f64>, weights: Vec<f64>, gaussian_variance: f64, uniform_halfwidth: f64) -> Result<Self> {
        if locations.len() != weights.len() || locations.is_empty() {
            return Err(Error::InvalidArgument("mixture needs matching nonempty locations and weights".into()));
        }
        if !(gaussian_variance > 0.0 && gaussian_variance.is_finite()) {
            return Err(Error::InvalidArgument(format!("gaussian variance must be positive, got {gaussian_variance}")));
        }
        if !(uniform_halfwidth >= 0.0 && uniform_halfwidth.is_finite()) {
            return Err(Error::InvalidArgument(format!("uniform halfwidth must be nonnegative, got {uniform_halfwidth}")));
        }
        if weights.iter().any(|&w| !(w >= 0.0)) {
            return Err(Error::InvalidArgument("mixture weights must be nonnegative".into()));
        }
        let total: f64 = crate::numeric::sum(weights.iter().copied());
        if total <= 0.0 {
            return Err(Error::ZeroMass);
        }
        let kind = if uniform_halfwidth > 0.0 {
            SmoothingKind::LatticeUniformSmoothed
        } else {
            SmoothingKind::LatticeSmoothed
        };
        Ok(GaussianSmoothedDensity {
            kind,
            locations,
            weights: weights.into_iter().map(|w| w / total).collect(),
            gaussian_variance,
            uniform_halfwidth,
            t: None,
            sd: gaussian_variance.sqrt(),
        })
    }

    /// Exact mean and variance of the mixture.
    pub fn moments(&self) -> Moments {
        let mean = crate::numeric::sum(self.locations.iter().zip(&self.weights).map(|(c, w)| c * w));
        let spread = crate::numeric::sum(self.locations.iter().zip(&self.weights).map(|(c, w)| w * (c - mean).powi(2)));
        let hw = self.uniform_halfwidth;
        Moments { mean, variance: spread + hw * hw / 3.0 + self.gaussian_variance }
    }

    /// Density at `x`.
    pub fn density(&self, x: f64) -> f64 {
        let s = self.sd;
        let mut acc = CompensatedSum::new();
        match self.kind {
            SmoothingKind::LatticeSmoothed => {
                for (&c, &w) in self.locations.iter().zip(&self.weights) {
                    acc.add(w * normal::pdf((x - c) / s));
                }
                acc.value() / s
            }
            SmoothingKind::LatticeUniformSmoothed => {
                let hw = self.uniform_halfwidth;
                for (&c, &w) in self.locations.iter().zip(&self.weights) {
                    acc.add(w * normal::cell_mass((x - c - hw) / s, (x - c + hw) / s));
                }
                acc.value() / (2.0 * hw)
            }
        }
    }

    /// Derivative of the density at `x`.
    pub fn derivative(&self, x: f64) -> f64 {
        let s = self.sd;
        let mut acc = CompensatedSum::new();
        match self.kind {
            SmoothingKind::LatticeSmoothed => {
                for (&c, &w) in self.locations.iter().zip(&self.weights) {
                    let z = (x - c) / s;
                    acc.add(-w * z * normal::pdf(z));
                }
                acc.value() / (s * s)
            }
            SmoothingKind::LatticeUniformSmoothed => {
                let hw = self.uniform_halfwidth;
                for (&c, &w) in self.locations.iter().zip(&self.weights) {
                    acc.add(w * (normal::pdf((x - c + hw) / s) - normal::pdf((x - c - hw) / s)));
                }
                acc.value() / (2.0 * hw * s)
            }
        }
    }

    /// Score `f'/f`, or zero where the density underflows.
    pub fn score(&self, x: f64) -> f64 {
        let f = self.density(x);
        if f > 0.0 {
            self.derivative(x) / f
        } else {
            0.0
        }
    }

    /// Sorted breakpoints covering the support plus a 12-sd margin: every
    /// kernel centre, or every cell edge when uniform smoothing is on.
    fn breakpoints(&self) -> Vec<f64> {
        let hw = self.uniform_halfwidth;
        let mut pts: Vec<f64> = match self.kind {
            SmoothingKind::LatticeSmoothed => self.locations.clone(),
            SmoothingKind::LatticeUniformSmoothed => {
                self.locations.iter().flat_map(|&c| [c - hw, c + hw]).collect()
            }
        };
        // Features around each point are a few sd wide; bracketing them keeps
        // the adaptive rule from stepping over them when sd is tiny.
        let feature = FEATURE_SDS * self.sd;
        let centres = pts.clone();
        pts.extend(centres.iter().flat_map(|&c| [c - feature, c + feature]));
        let margin = WINDOW_SDS * self.sd;
        let lo = centres.iter().cloned().fold(f64::INFINITY, f64::min) - margin;
        let hi = centres.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + margin;
        pts.push(lo);
        pts.push(hi);
        pts.retain(|&x| x >= lo && x <= hi);
        pts.sort_by(|a, b| a.total_cmp(b));
        pts.dedup_by(|a, b| (*a - *b).abs() <= 1e-14 * a.abs().max(1.0));
        pts
    }

    /// `∫ f` over the integration window.
    pub fn total_mass(&self, settings: QuadSettings) -> Result<f64> {
        integrate_piecewise(|x| self.density(x), &self.breakpoints(), settings)
    }

    /// Differential entropy `−∫ f log f`.
    pub fn differential_entropy(&self, settings: QuadSettings) -> Result<f64> {
        integrate_piecewise(
            |x| {
                let f = self.density(x);
                if f > 0.0 {
                    -f * f.ln()
                } else {
                    0.0
                }
            },
            &self.breakpoints(),
            settings,
        )
    }

    /// `D(f ‖ φ)` against the normal with the mixture's own moments.
    pub fn relative_entropy(&self, settings: QuadSettings) -> Result<f64> {
        Ok(gaussian_entropy(self.moments().variance) - self.differential_entropy(settings)?)
    }
}

/// The law of `√(1−t) Y + √t Z`, with `Y = X` or `Y = X + hU` for `X ~ p`,
/// `U` uniform on `(−½, ½)` and `Z` normal with `Y`'s mean and variance.
pub fn smooth(p: &LatticePmf, t: f64, with_uniform: bool) -> Result<GaussianSmoothedDensity> {
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::InvalidArgument(format!("t must lie in (0, 1), got {t}")));
    }
    let m = p.moments();
    let h = p.span();
    let z_variance = m.variance + if with_uniform { h * h / 12.0 } else { 0.0 };
    if z_variance <= 0.0 {
        return Err(Error::Degenerate);
    }
    let keep = (1.0 - t).sqrt();
    let shift = t.sqrt() * m.mean;
    let (locations, weights): (Vec<f64>, Vec<f64>) =
        p.iter().filter(|&(_, w)| w > 0.0).map(|(x, w)| (keep * x + shift, w)).unzip();
    let halfwidth = if with_uniform { keep * h / 2.0 } else { 0.0 };
    let mut d = GaussianSmoothedDensity::mixture(locations, weights, t * z_variance, halfwidth)?;
    d.t = Some(t);
    Ok(d)
}

/// `I = ∫ (f')² / f`.
pub fn fisher_information(d: &GaussianSmoothedDensity, settings: QuadSettings) -> Result<f64> {
    integrate_piecewise(
        |x| {
            let f = d.density(x);
            if f > 0.0 {
                let g = d.derivative(x);
                g * g / f
            } else {
                0.0
            }
        },
        &d.breakpoints(),
        settings,
    )
}

/// `J = σ² I − 1`, with `σ²` the exact mixture variance.
pub fn standardized_fisher(d: &GaussianSmoothedDensity, settings: QuadSettings) -> Result<f64> {
    Ok(d.moments().variance * fisher_information(d, settings)? - 1.0)
}

/// Both sides of the de Bruijn identity for `Y = Ŝ_n + (h/√n) U`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeBruijnOutcome {
    pub n: usize,
    pub quad_points: usize,
    /// `D(Y)` in closed form from the discrete entropy.
    pub lhs: f64,
    /// `D(Y/√2 + Z/√2)` by spatial quadrature.
    pub endpoint: f64,
    /// `∫₀^{1/2} J(t) dt / (2(1−t))` by Gauss–Legendre in `u = √t`.
    pub integral: f64,
    pub rhs: f64,
    pub report: BoundReport,
}

/// Checks `D(Y) = D(Y/√2 + Z/√2) + ∫₀^{1/2} J dt/(2(1−t))` for
/// `Y = Ŝ_n + (h/√n) U`.
///
/// The `t` integral substitutes `t = u²`, which removes the `t^{-1/2}`
/// growth of `J` near zero, and applies a `quad_points`-node Gauss–Legendre
/// rule on `u ∈ (0, √½)`.
pub fn de_bruijn_check(
    p_sn: &LatticePmf,
    n: usize,
    h: f64,
    sigma2: f64,
    quad_points: usize,
    settings: QuadSettings,
) -> Result<DeBruijnOutcome> {
    if p_sn.is_point_mass() {
        return Err(Error::Degenerate);
    }
    if quad_points == 0 {
        return Err(Error::InvalidArgument("quad_points must be positive".into()));
    }
    let m = p_sn.moments();
    let base = Moments { mean: m.mean / n as f64, variance: m.variance / n as f64 };
    let standard = p_sn.standardized_view(n, &base);

    let lhs = smoothed_relative_entropy(p_sn, n, h, sigma2);
    let endpoint = smooth(&standard, 0.5, true)?.relative_entropy(settings)?;

    let mut acc = CompensatedSum::new();
    for (u, w) in gauss_legendre(quad_points, 0.0, 0.5f64.sqrt()) {
        let t = u * u;
        let j = standardized_fisher(&smooth(&standard, t, true)?, settings)?;
        acc.add(w * j * u / (1.0 - t));
    }
    let integral = acc.value();
    let rhs = endpoint + integral;
    Ok(DeBruijnOutcome {
        n,
        quad_points,
        lhs,
        endpoint,
        integral,
        rhs,
        report: BoundReport::identity("de_bruijn", lhs, rhs, DE_BRUIJN_TOL),
    })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{E, PI};

    use super::*;

    fn settings() -> QuadSettings {
        QuadSettings::default()
    }

    fn bern_half() -> LatticePmf {
        LatticePmf::new(0.0, 1.0, &[1.0, 1.0]).unwrap()
    }

    #[test]
    fn single_gaussian_fisher() {
        let d = GaussianSmoothedDensity::mixture(vec![1.5], vec![1.0], 2.5, 0.0).unwrap();
        let i = fisher_information(&d, settings()).unwrap();
        assert!((i - 1.0 / 2.5).abs() < 1e-8);
        assert!(standardized_fisher(&d, settings()).unwrap().abs() < 1e-8);
        let h = d.differential_entropy(settings()).unwrap();
        assert!((h - 0.5 * (2.0 * PI * E * 2.5).ln()).abs() < 1e-9);
    }

    #[test]
    fn point_mass_smoothing() {
        let p = LatticePmf::point_mass(2.0, 1.0).unwrap();
        assert_eq!(smooth(&p, 0.5, false), Err(Error::Degenerate));
        // with the cell spread, Z has variance 1/12
        let d = smooth(&p, 0.25, true).unwrap();
        assert!((d.gaussian_variance - 0.25 / 12.0).abs() < 1e-15);
        assert!((d.moments().variance - 1.0 / 12.0).abs() < 1e-15);
    }

    #[test]
    fn smooth_rejects_bad_t() {
        for t in [0.0, 1.0, -0.1, f64::NAN] {
            assert!(smooth(&bern_half(), t, false).is_err());
        }
    }

    #[test]
    fn bernoulli_half_instantiation() {
        let d = smooth(&bern_half(), 0.5, false).unwrap();
        let r = 0.5f64.sqrt();
        let shift = r * 0.5;
        assert_eq!(d.kind, SmoothingKind::LatticeSmoothed);
        assert!((d.locations[0] - shift).abs() < 1e-15);
        assert!((d.locations[1] - (r + shift)).abs() < 1e-15);
        assert_eq!(d.weights, vec![0.5, 0.5]);
        assert!((d.gaussian_variance - 0.125).abs() < 1e-15);
        // variance is preserved along the path
        assert!((d.moments().variance - 0.25).abs() < 1e-15);
    }

    #[test]
    fn near_one_is_almost_gaussian() {
        let d = smooth(&bern_half(), 0.999, false).unwrap();
        let j = standardized_fisher(&d, settings()).unwrap();
        assert!(j >= -1e-8 && j < 1e-4, "{j}");
    }

    #[test]
    fn densities_integrate_to_one() {
        let p = LatticePmf::new(0.0, 1.0, &[0.5, 0.3, 0.0, 0.2]).unwrap();
        for &t in &[0.01, 0.3, 0.9] {
            for with_uniform in [false, true] {
                let d = smooth(&p, t, with_uniform).unwrap();
                let mass = d.total_mass(settings()).unwrap();
                assert!((mass - 1.0).abs() < 1e-10, "t={t} u={with_uniform} mass={mass}");
            }
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let p = LatticePmf::new(0.0, 1.0, &[0.5, 0.3, 0.2]).unwrap();
        for with_uniform in [false, true] {
            let d = smooth(&p, 0.2, with_uniform).unwrap();
            for &x in &[-0.4, 0.1, 0.77, 1.9] {
                let eps = 1e-6;
                let fd = (d.density(x + eps) - d.density(x - eps)) / (2.0 * eps);
                assert!((fd - d.derivative(x)).abs() < 1e-6, "x={x}");
            }
        }
    }

    #[test]
    fn separated_kernels_are_locally_gaussian() {
        let d = GaussianSmoothedDensity::mixture(vec![-10.0, 10.0], vec![0.5, 0.5], 1.0, 0.0).unwrap();
        let i = fisher_information(&d, settings()).unwrap();
        assert!((i - 1.0).abs() < 1e-3, "{i}");
    }

    #[test]
    fn extra_noise_lowers_fisher_information() {
        let v = GaussianSmoothedDensity::mixture(vec![0.0, 1.0, 3.0], vec![0.5, 0.3, 0.2], 0.05, 0.0).unwrap();
        let vw = GaussianSmoothedDensity::mixture(vec![0.0, 1.0, 3.0], vec![0.5, 0.3, 0.2], 0.3, 0.0).unwrap();
        let a = fisher_information(&v, settings()).unwrap();
        let b = fisher_information(&vw, settings()).unwrap();
        assert!(b <= a);
    }

    #[test]
    fn standardized_fisher_decreases_along_path() {
        let p = bern_half();
        let mut prev = f64::INFINITY;
        for &t in &[0.05, 0.2, 0.5, 0.8] {
            let j = standardized_fisher(&smooth(&p, t, false).unwrap(), settings()).unwrap();
            assert!(j > 0.0);
            assert!(j <= prev + 1e-6);
            prev = j;
        }
    }
}
