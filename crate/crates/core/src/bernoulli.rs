//! Bernoulli part decomposition `X = V + W B` of a lattice law and its
//! sum-level counterpart `S_n = V⁽ⁿ⁾ + W⁽ⁿ⁾ B`.
//!
//! With `p(k)` the probability of lattice index `k`:
//!
//! ```text
//! p_{V,W}(k, 1) = min{p(k), p(k+1)}
//! p_{V,W}(k, 0) = p(k) − ½ [p_{V,W}(k−1, 1) + p_{V,W}(k, 1)]
//! q = Σ_k min{p(k), p(k+1)}
//! ```
//!
//! and `q > 0` exactly when the stored span is maximal.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{LatticePmf, Moments};
use crate::numeric::sum;

/// Entries of `p_{V,W}(k, 0)` below this are a numerical integrity failure.
const JOINT_FLOOR: f64 = -1e-9;
const MAX_CLAMPED_MASS: f64 = 1e-9;

/// Joint law of `(V, W)` on the lattice of the decomposed pmf.
#[derive(Debug, Clone, PartialEq)]
pub struct BernoulliPartDecomposition {
    q: f64,
    offset: f64,
    span: f64,
    first_index: i64,
    /// `p_{V,W}(first_index + j, 1)`
    joint_w1: Vec<f64>,
    /// `p_{V,W}(first_index + j, 0)`
    joint_w0: Vec<f64>,
}

/// JSON form: `{"q": .., "lattice": {"offset": .., "span": ..}, "joint": [[k, w, value], ..]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionJson {
    pub q: f64,
    pub lattice: LatticeJson,
    pub joint: Vec<(i64, u8, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticeJson {
    pub offset: f64,
    pub span: f64,
}

impl BernoulliPartDecomposition {
    /// Decomposes `p`, which must be nondegenerate and stored on its
    /// maximal span.
    pub fn decompose(p: &LatticePmf) -> Result<Self> {
        match p.maximal_span_factor() {
            None => return Err(Error::Degenerate),
            Some(1) => {}
            Some(g) => return Err(Error::SpanNotMaximal(g)),
        }
        let w = p.weights();
        let len = w.len();
        let joint_w1: Vec<f64> = (0..len).map(|j| w[j].min(w.get(j + 1).copied().unwrap_or(0.0))).collect();
        let mut joint_w0 = Vec::with_capacity(len);
        for j in 0..len {
            let prev = if j == 0 { 0.0 } else { joint_w1[j - 1] };
            let v = w[j] - 0.5 * (prev + joint_w1[j]);
            if v < JOINT_FLOOR {
                return Err(Error::Decomposition(format!("p_VW({}, 0) = {v:e} is negative", p.first_index() + j as i64)));
            }
            joint_w0.push(v.max(0.0));
        }
        let q = sum(joint_w1.iter().copied());
        if q <= 0.0 {
            return Err(Error::Decomposition("q vanished".into()));
        }
        Ok(BernoulliPartDecomposition {
            q,
            offset: p.offset(),
            span: p.span(),
            first_index: p.first_index(),
            joint_w1,
            joint_w0,
        })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn span(&self) -> f64 {
        self.span
    }

    /// `p_{V,W}(k, w)` for lattice index `k`.
    pub fn joint(&self, k: i64, w: bool) -> f64 {
        let table = if w { &self.joint_w1 } else { &self.joint_w0 };
        let j = k - self.first_index;
        if j < 0 {
            return 0.0;
        }
        table.get(j as usize).copied().unwrap_or(0.0)
    }

    /// Total mass of the joint table.
    pub fn total_mass(&self) -> f64 {
        sum(self.joint_w0.iter().chain(&self.joint_w1).copied())
    }

    /// Law of `V + W B` with `B ~ Bern(1/2)` independent of `(V, W)`.
    pub fn reconstruct(&self) -> Result<LatticePmf> {
        let len = self.joint_w0.len();
        let weights = (0..len)
            .map(|j| {
                let prev = if j == 0 { 0.0 } else { self.joint_w1[j - 1] };
                self.joint_w0[j] + 0.5 * self.joint_w1[j] + 0.5 * prev
            })
            .collect();
        LatticePmf::from_parts(self.offset, self.span, self.first_index, weights)
    }

    /// Law of `V` given `W = 0`; `None` when `q = 1`.
    pub fn law_given_w0(&self) -> Result<Option<LatticePmf>> {
        if self.q >= 1.0 || self.joint_w0.iter().all(|&v| v <= 0.0) {
            return Ok(None);
        }
        LatticePmf::from_parts(self.offset, self.span, self.first_index, self.joint_w0.clone()).map(Some)
    }

    pub fn to_json(&self) -> DecompositionJson {
        let mut joint = Vec::with_capacity(2 * self.joint_w0.len());
        for j in 0..self.joint_w0.len() {
            let k = self.first_index + j as i64;
            joint.push((k, 0, self.joint_w0[j]));
            joint.push((k, 1, self.joint_w1[j]));
        }
        DecompositionJson { q: self.q, lattice: LatticeJson { offset: self.offset, span: self.span }, joint }
    }
}

/// `q⁽ⁿ⁾ = 1 − (1 − q)ⁿ`.
pub fn q_n(q: f64, n: usize) -> f64 {
    -((n as f64) * (-q).ln_1p()).exp_m1()
}

/// The law of `S_n` split on the event `{W⁽ⁿ⁾ = 1}` that at least one
/// summand contributed its Bernoulli step.
#[derive(Debug, Clone, PartialEq)]
pub struct SumDecomposition {
    pub n: usize,
    pub q: f64,
    pub q_n: f64,
    /// Total mass of `law(S_n) − (1−q)ⁿ law(S_n | W⁽ⁿ⁾=0)` before
    /// renormalisation; equals `q_n` up to round-off.
    pub raw_w1_mass: f64,
    pub law: LatticePmf,
    pub law_given_w1: LatticePmf,
    /// Absent when `q = 1`.
    pub law_given_w0: Option<LatticePmf>,
    pub cond_moments_w1: Moments,
}

impl SumDecomposition {
    pub fn new(p: &LatticePmf, n: usize) -> Result<Self> {
        let d = BernoulliPartDecomposition::decompose(p)?;
        let law = p.self_convolve(n)?;
        let q = d.q();
        let qn = q_n(q, n);
        let w0_weight = (n as f64 * (-q).ln_1p()).exp();
        let law_given_w0 = match d.law_given_w0()? {
            Some(v) => Some(v.self_convolve(n)?),
            None => None,
        };

        let mut diff: Vec<f64> = law.weights().to_vec();
        if let Some(w0) = &law_given_w0 {
            let shift = law.grid_shift(w0)?;
            for (j, slot) in diff.iter_mut().enumerate() {
                let k = law.first_index() + j as i64;
                *slot -= w0_weight * w0.prob(k - shift);
            }
        }
        let raw_w1_mass = sum(diff.iter().copied());
        let clamped = sum(diff.iter().filter(|&&v| v < 0.0).map(|v| -v));
        if clamped > MAX_CLAMPED_MASS {
            return Err(Error::Decomposition(format!("conditional law clamped {clamped:e} of mass")));
        }
        let diff = diff.into_iter().map(|v| v.max(0.0)).collect();
        let law_given_w1 = LatticePmf::from_parts(law.offset(), law.span(), law.first_index(), diff)?;
        let cond_moments_w1 = law_given_w1.moments();
        Ok(SumDecomposition { n, q, q_n: qn, raw_w1_mass, law, law_given_w1, law_given_w0, cond_moments_w1 })
    }

    /// Largest entrywise gap between `q_n law_w1 + (1 − q_n) law_w0` and the
    /// law of `S_n`.
    pub fn mixture_residual(&self) -> Result<f64> {
        let law = &self.law;
        let s1 = law.grid_shift(&self.law_given_w1)?;
        let s0 = match &self.law_given_w0 {
            Some(w0) => Some(law.grid_shift(w0)?),
            None => None,
        };
        let mut lo = law.first_index().min(self.law_given_w1.first_index() + s1);
        let mut hi = law.last_index().max(self.law_given_w1.last_index() + s1);
        if let (Some(w0), Some(s)) = (&self.law_given_w0, s0) {
            lo = lo.min(w0.first_index() + s);
            hi = hi.max(w0.last_index() + s);
        }
        let mut worst = 0.0f64;
        for k in lo..=hi {
            let w0 = match (&self.law_given_w0, s0) {
                (Some(w0), Some(s)) => w0.prob(k - s),
                _ => 0.0,
            };
            let mix = self.q_n * self.law_given_w1.prob(k - s1) + (1.0 - self.q_n) * w0;
            worst = worst.max((mix - law.prob(k)).abs());
        }
        Ok(worst)
    }
}

/// One row of [`conditional_variance_trend`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VarianceTrend {
    pub n: usize,
    /// `Var(S_n | W⁽ⁿ⁾ = 1) / (n σ²)`
    pub ratio: f64,
    /// `E(S_n | W⁽ⁿ⁾ = 1) − n μ`
    pub mean_offset: f64,
}

/// Conditional variance ratio and mean offset for each `n`.
pub fn conditional_variance_trend(p: &LatticePmf, n_values: &[usize]) -> Result<Vec<VarianceTrend>> {
    let base = p.moments();
    n_values
        .iter()
        .map(|&n| {
            let s = SumDecomposition::new(p, n)?;
            Ok(VarianceTrend {
                n,
                ratio: s.cond_moments_w1.variance / (n as f64 * base.variance),
                mean_offset: s.cond_moments_w1.mean - n as f64 * base.mean,
            })
        })
        .collect()
}
