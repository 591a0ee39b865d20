//! Closed-form `Bin(n, 1/2)` laws and the binomial entropy bounds.

use std::f64::consts::{E, PI};

use crate::entropy::standardized_relative_entropy;
use crate::error::{Error, Result};
use crate::lattice::LatticePmf;
use crate::numeric::CompensatedSum;
use crate::report::{BoundReport, DEFAULT_TOL};

/// Feller's bound is checked with this absolute tolerance.
pub const FELLER_TOL: f64 = 1e-12;

/// `Bin(n, 1/2)` in the log domain: `log_weights[k] = log C(n,k) − n log 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct BinomialLaw {
    n: usize,
    log_weights: Vec<f64>,
}

impl BinomialLaw {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("binomial n must be at least 1".into()));
        }
        let mut log_weights = vec![0.0; n + 1];
        let base = -(n as f64) * std::f64::consts::LN_2;
        let mut log_c = CompensatedSum::new();
        for k in 0..=n / 2 {
            let v = log_c.value() + base;
            log_weights[k] = v;
            log_weights[n - k] = v;
            log_c.add(((n - k) as f64).ln());
            log_c.add(-((k + 1) as f64).ln());
        }
        Ok(BinomialLaw { n, log_weights })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn log_weights(&self) -> &[f64] {
        &self.log_weights
    }

    pub fn pmf(&self) -> LatticePmf {
        let weights = self.log_weights.iter().map(|lw| lw.exp()).collect();
        LatticePmf::from_parts(0.0, 1.0, 0, weights).expect("binomial weights are valid")
    }

    /// `H(Bin(n, 1/2))` from the log weights, without tail trimming.
    pub fn entropy(&self) -> f64 {
        let mut acc = CompensatedSum::new();
        for &lw in &self.log_weights {
            acc.add(-lw.exp() * lw);
        }
        acc.value()
    }

    /// `a_k = b_n(n/2 + k)` for even `n` and `|k| <= n/2`.
    pub fn centred(&self, k: i64) -> f64 {
        let idx = self.n as i64 / 2 + k;
        self.log_weights[idx as usize].exp()
    }
}

/// `Bin(n, 1/2)` on `{0, ..., n}`.
pub fn binomial_pmf(n: usize) -> Result<LatticePmf> {
    Ok(BinomialLaw::new(n)?.pmf())
}

/// `½ log(πe/2)`, the limit of `H(Bin(n,1/2)) − log √n`.
pub fn binomial_entropy_limit() -> f64 {
    0.5 * (0.5 * PI * E).ln()
}

/// `|H(Bin(n,1/2)) − log √n − ½ log(πe/2)| <= 4/√n`, for `n >= 2`.
pub fn binomial_entropy_gap_check(n: usize) -> Result<BoundReport> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("binomial entropy bound needs n >= 2, got {n}")));
    }
    let law = BinomialLaw::new(n)?;
    let root = (n as f64).sqrt();
    let lhs = (law.entropy() - root.ln() - binomial_entropy_limit()).abs();
    Ok(BoundReport::upper("binomial_entropy", lhs, 4.0 / root, DEFAULT_TOL))
}

/// `D(Ŝ_n) <= 8/√n` for the standardised binomial, `n >= 2`.
pub fn binomial_relative_entropy_check(n: usize) -> Result<BoundReport> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("binomial relative entropy bound needs n >= 2, got {n}")));
    }
    let d = standardized_relative_entropy(&binomial_pmf(n)?, n)?;
    Ok(BoundReport::upper("binomial_relative_entropy", d, 8.0 / (n as f64).sqrt(), DEFAULT_TOL))
}

/// Feller's pointwise bound
/// `a_k <= (πn/2)^{-1/2} exp(−2k²/n + 3|k|³/n² + 1/(12n))` for all
/// `|k| <= n/2`. The report's `lhs` is the largest excess `a_k − bound`.
pub fn feller_bound_check(n: usize) -> Result<BoundReport> {
    if n == 0 || n % 2 == 1 {
        return Err(Error::InvalidArgument(format!("Feller bound is stated for even n >= 2, got {n}")));
    }
    let law = BinomialLaw::new(n)?;
    let nf = n as f64;
    let prefactor = (PI * nf / 2.0).powf(-0.5);
    let half = n as i64 / 2;
    let worst = (-half..=half)
        .map(|k| {
            let kf = k.unsigned_abs() as f64;
            let bound = prefactor * (-2.0 * kf * kf / nf + 3.0 * kf.powi(3) / (nf * nf) + 1.0 / (12.0 * nf)).exp();
            law.centred(k) - bound
        })
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(BoundReport::upper("feller", worst, 0.0, FELLER_TOL))
}
