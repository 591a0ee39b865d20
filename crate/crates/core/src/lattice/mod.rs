//! Finitely supported probability mass functions on a lattice `{a + k h}`.
//!
//! A [`LatticePmf`] stores its anchor `offset`, the step `span`, the lattice
//! index of the first stored weight and a trimmed weight vector. Convolution
//! adds anchors and first indices separately, so laws derived from the same
//! base stay exactly aligned on a shared index grid.

mod convolve;

pub use convolve::{convolve_direct, convolve_transform, ConvolutionConfig};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{sum, CompensatedSum};

/// Tail weights below this are treated as round-off dust and trimmed.
pub const TRIM_THRESHOLD: f64 = 1e-300;

const SPAN_TOL: f64 = 1e-12;

/// Mean and variance of a law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    pub mean: f64,
    pub variance: f64,
}

impl Moments {
    pub fn sd(&self) -> f64 {
        self.variance.sqrt()
    }
}

/// A probability mass function on `{offset + k * span : k ∈ ℤ}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LatticePmf {
    offset: f64,
    span: f64,
    first_index: i64,
    weights: Vec<f64>,
}

/// The JSON ingestion format: `{"offset": .., "span": .., "weights": [..]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistSpec {
    pub offset: f64,
    pub span: f64,
    pub weights: Vec<f64>,
}

impl LatticePmf {
    /// Builds a pmf from raw nonnegative weights placed at
    /// `offset, offset + span, ...`; the weights are normalised and the
    /// zero tails trimmed.
    pub fn new(offset: f64, span: f64, weights: &[f64]) -> Result<Self> {
        Self::from_parts(offset, span, 0, weights.to_vec())
    }

    /// Like [`LatticePmf::new`] but with the first weight at lattice index
    /// `first_index`.
    pub fn from_parts(offset: f64, span: f64, first_index: i64, weights: Vec<f64>) -> Result<Self> {
        if !(span > 0.0 && span.is_finite()) {
            return Err(Error::InvalidSpan(span));
        }
        if !offset.is_finite() {
            return Err(Error::InvalidArgument(format!("offset must be finite, got {offset}")));
        }
        for (index, &value) in weights.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::NonFinite { index });
            }
            if value < 0.0 {
                return Err(Error::NegativeWeight { index, value });
            }
        }
        let mut pmf = LatticePmf { offset, span, first_index, weights };
        pmf.trim_and_normalise()?;
        Ok(pmf)
    }

    /// A point mass at `at`, on a lattice of the given span.
    pub fn point_mass(at: f64, span: f64) -> Result<Self> {
        Self::new(at, span, &[1.0])
    }

    pub fn from_spec(spec: &DistSpec) -> Result<Self> {
        Self::new(spec.offset, spec.span, &spec.weights)
    }

    pub fn to_spec(&self) -> DistSpec {
        DistSpec { offset: self.first_point(), span: self.span, weights: self.weights.clone() }
    }

    fn trim_and_normalise(&mut self) -> Result<()> {
        let lo = self.weights.iter().position(|&w| w >= TRIM_THRESHOLD);
        let Some(lo) = lo else {
            return Err(Error::ZeroMass);
        };
        let hi = self.weights.iter().rposition(|&w| w >= TRIM_THRESHOLD).expect("lo exists");
        if lo > 0 || hi + 1 < self.weights.len() {
            self.weights.truncate(hi + 1);
            self.weights.drain(..lo);
            self.first_index += lo as i64;
        }
        let total = sum(self.weights.iter().copied());
        if total != 1.0 {
            for w in &mut self.weights {
                *w /= total;
            }
        }
        Ok(())
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn span(&self) -> f64 {
        self.span
    }

    pub fn first_index(&self) -> i64 {
        self.first_index
    }

    pub fn last_index(&self) -> i64 {
        self.first_index + self.weights.len() as i64 - 1
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Number of stored cells (first to last support point inclusive).
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn is_point_mass(&self) -> bool {
        self.weights.len() == 1
    }

    /// Location of lattice index `k`.
    #[inline]
    pub fn point(&self, k: i64) -> f64 {
        self.offset + k as f64 * self.span
    }

    pub fn first_point(&self) -> f64 {
        self.point(self.first_index)
    }

    /// Probability of lattice index `k` (zero off the stored range).
    pub fn prob(&self, k: i64) -> f64 {
        let j = k - self.first_index;
        if j < 0 {
            return 0.0;
        }
        self.weights.get(j as usize).copied().unwrap_or(0.0)
    }

    /// `(location, probability)` pairs over the stored range.
    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.weights
            .iter()
            .enumerate()
            .map(move |(j, &w)| (self.point(self.first_index + j as i64), w))
    }

    /// Total mass, which equals one up to round-off for every constructed pmf.
    pub fn total_mass(&self) -> f64 {
        sum(self.weights.iter().copied())
    }

    /// Exact weighted mean and variance, accumulated in index space.
    pub fn moments(&self) -> Moments {
        let mean_idx = sum(self.weights.iter().enumerate().map(|(j, &w)| w * j as f64));
        let var_idx = sum(self.weights.iter().enumerate().map(|(j, &w)| {
            let d = j as f64 - mean_idx;
            w * d * d
        }));
        Moments {
            mean: self.offset + (self.first_index as f64 + mean_idx) * self.span,
            variance: var_idx * self.span * self.span,
        }
    }

    /// The factor by which the span can be enlarged: the gcd of the index
    /// gaps between support points. `None` for a point mass.
    pub fn maximal_span_factor(&self) -> Option<u64> {
        let mut g = 0u64;
        for (j, &w) in self.weights.iter().enumerate().skip(1) {
            if w > 0.0 {
                g = gcd(g, j as u64);
                if g == 1 {
                    break;
                }
            }
        }
        (g > 0).then_some(g)
    }

    /// Returns the same law on its coarsest lattice. The first support point
    /// becomes index 0 of the new lattice. A point mass is returned unchanged.
    pub fn reduce_to_maximal_span(&self) -> LatticePmf {
        match self.maximal_span_factor() {
            None => self.clone(),
            Some(1) => self.clone(),
            Some(g) => LatticePmf {
                offset: self.first_point(),
                span: self.span * g as f64,
                first_index: 0,
                weights: self.weights.iter().step_by(g as usize).copied().collect(),
            },
        }
    }

    /// The same weights with the first support point moved to the origin.
    pub fn anchored(&self) -> LatticePmf {
        LatticePmf { offset: 0.0, first_index: 0, ..self.clone() }
    }

    /// Law of `self + c` for a constant shift `c`.
    pub fn shifted(&self, c: f64) -> LatticePmf {
        LatticePmf { offset: self.offset + c, ..self.clone() }
    }

    /// Law of `s * self` for `s > 0`.
    pub fn scaled(&self, s: f64) -> Result<LatticePmf> {
        if !(s > 0.0 && s.is_finite()) {
            return Err(Error::InvalidArgument(format!("scale must be positive, got {s}")));
        }
        Ok(LatticePmf { offset: self.offset * s, span: self.span * s, ..self.clone() })
    }

    /// Law of the independent sum, using the default convolution config.
    pub fn convolve(&self, other: &LatticePmf) -> Result<LatticePmf> {
        self.convolve_with(other, &ConvolutionConfig::default())
    }

    pub fn convolve_with(&self, other: &LatticePmf, config: &ConvolutionConfig) -> Result<LatticePmf> {
        check_span(self.span, other.span)?;
        let raw = config.convolve(&self.weights, &other.weights)?;
        LatticePmf::from_parts(
            self.offset + other.offset,
            self.span,
            self.first_index + other.first_index,
            raw,
        )
    }

    /// Number of cells in the law of `S_n`, before any trimming.
    pub fn predicted_len(&self, n: usize) -> usize {
        n.saturating_mul(self.weights.len() - 1).saturating_add(1)
    }

    /// Law of the sum of `n` independent copies, by binary exponentiation.
    pub fn self_convolve(&self, n: usize) -> Result<LatticePmf> {
        self.self_convolve_with(n, &ConvolutionConfig::default())
    }

    pub fn self_convolve_with(&self, n: usize, config: &ConvolutionConfig) -> Result<LatticePmf> {
        if n == 0 {
            return Err(Error::ZeroPower);
        }
        let mut result: Option<LatticePmf> = None;
        let mut power = self.clone();
        let mut k = n;
        loop {
            if k & 1 == 1 {
                result = Some(match result {
                    None => power.clone(),
                    Some(r) => r.convolve_with(&power, config)?,
                });
            }
            k >>= 1;
            if k == 0 {
                break;
            }
            power = power.convolve_with(&power, config)?;
        }
        Ok(result.expect("n >= 1"))
    }

    /// The pmf of `(S_n - n μ) / √n` given the pmf of `S_n`. Weights and
    /// indices are unchanged, only the lattice is relabelled.
    pub fn standardized_view(&self, n: usize, base: &Moments) -> LatticePmf {
        let root = (n as f64).sqrt();
        LatticePmf {
            offset: (self.offset - n as f64 * base.mean) / root,
            span: self.span / root,
            first_index: self.first_index,
            weights: self.weights.clone(),
        }
    }

    /// Index shift `d` such that `other.point(k) == self.point(k + d)`.
    pub fn grid_shift(&self, other: &LatticePmf) -> Result<i64> {
        check_span(self.span, other.span)?;
        let d = (other.offset - self.offset) / self.span;
        let r = d.round();
        if (d - r).abs() > 1e-9 * d.abs().max(1.0) {
            return Err(Error::IncommensurableOffsets(self.offset, other.offset));
        }
        Ok(r as i64)
    }

    /// Total variation distance `½ Σ |p − q|` over the union of supports.
    pub fn total_variation(&self, other: &LatticePmf) -> Result<f64> {
        let shift = self.grid_shift(other)?;
        let lo = self.first_index.min(other.first_index + shift);
        let hi = self.last_index().max(other.last_index() + shift);
        let mut acc = CompensatedSum::new();
        for k in lo..=hi {
            acc.add((self.prob(k) - other.prob(k - shift)).abs());
        }
        Ok((0.5 * acc.value()).clamp(0.0, 1.0))
    }
}

/// The law of `S_n = X_1 + ... + X_n` together with the base-law quantities
/// the entropic bounds are stated in: maximal span `h` and variance `σ²`.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialSum {
    pub n: usize,
    /// Maximal span of the base law.
    pub span: f64,
    pub base: Moments,
    pub law: LatticePmf,
}

impl PartialSum {
    /// Reduces `base` to its maximal span and convolves it `n` times.
    pub fn new(base: &LatticePmf, n: usize) -> Result<Self> {
        Self::with_config(base, n, &ConvolutionConfig::default())
    }

    pub fn with_config(base: &LatticePmf, n: usize, config: &ConvolutionConfig) -> Result<Self> {
        if base.is_point_mass() {
            return Err(Error::Degenerate);
        }
        let reduced = base.reduce_to_maximal_span();
        let law = reduced.self_convolve_with(n, config)?;
        Ok(PartialSum { n, span: reduced.span(), base: reduced.moments(), law })
    }

    /// Base-law variance `σ²`.
    pub fn sigma2(&self) -> f64 {
        self.base.variance
    }

    /// The pmf of `(S_n - n μ) / √n`.
    pub fn standardized(&self) -> LatticePmf {
        self.law.standardized_view(self.n, &self.base)
    }
}

fn check_span(a: f64, b: f64) -> Result<()> {
    if (a - b).abs() > SPAN_TOL * a.max(b) {
        return Err(Error::SpanMismatch(a, b));
    }
    Ok(())
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}
