//! The four subcommands, as functions from a base law and config to an
//! in-memory report. Rendering lives in [`crate::output`].

use anyhow::{bail, Result};
use serde::Serialize;

use entclt::bernoulli::{BernoulliPartDecomposition, DecompositionJson};
use entclt::binomial::{binomial_entropy_gap_check, binomial_relative_entropy_check, feller_bound_check, FELLER_TOL};
use entclt::entropy::{max_entropy_check, pinsker_check, solidarity_check, uniform_smoothing_check, SumDiagnostics};
use entclt::fisher::{de_bruijn_check, DeBruijnOutcome};
use entclt::lattice::PartialSum;
use entclt::numeric::quad::QuadSettings;
use entclt::{BoundReport, LatticePmf};

use crate::config::RunConfig;

pub type ScanRow = SumDiagnostics;

fn partial_sum(base: &LatticePmf, n: usize, config: &RunConfig) -> Result<PartialSum> {
    let reduced = base.reduce_to_maximal_span();
    let size = reduced.predicted_len(n);
    if size > config.cap {
        return Err(entclt::Error::SupportCap { size, cap: config.cap }.into());
    }
    Ok(PartialSum::new(&reduced, n)?)
}

fn ensure_nondegenerate(base: &LatticePmf) -> Result<()> {
    if base.is_point_mass() {
        return Err(entclt::Error::Degenerate.into());
    }
    Ok(())
}

/// One row per `n` of the grid.
pub fn scan(base: &LatticePmf, config: &RunConfig) -> Result<Vec<ScanRow>> {
    ensure_nondegenerate(base)?;
    config.n_grid.iter().map(|&n| Ok(SumDiagnostics::compute(&partial_sum(base, n, config)?)?)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyRow {
    pub n: usize,
    #[serde(flatten)]
    pub report: BoundReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Skipped {
    pub name: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub rows: Vec<VerifyRow>,
    pub skipped: Vec<Skipped>,
    pub all_pass: bool,
}

/// Whether the reduced law is `Bern(1/2)` up to an affine relabelling.
fn is_fair_coin(base: &LatticePmf) -> bool {
    let w = base.reduce_to_maximal_span();
    w.len() == 2 && (w.weights()[0] - w.weights()[1]).abs() < 1e-12
}

/// Every applicable check at every `n` of the grid.
pub fn verify(base: &LatticePmf, config: &RunConfig) -> Result<VerifyReport> {
    ensure_nondegenerate(base)?;
    let coin = is_fair_coin(base);
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    let mut skip = |name: &str, reason: String| {
        if !skipped.iter().any(|s: &Skipped| s.name == name && s.reason == reason) {
            skipped.push(Skipped { name: name.to_string(), reason });
        }
    };

    for &n in &config.n_grid {
        let sum = partial_sum(base, n, config)?;
        let (h, s2) = (sum.span, sum.sigma2());
        let law = &sum.law;
        let mut push = |report: BoundReport| rows.push(VerifyRow { n, report });

        push(solidarity_check(law, n, h, s2, config.default_tol("solidarity"))?);
        push(uniform_smoothing_check(law, n, h, s2, config.default_tol("uniform_smoothing"))?);
        push(max_entropy_check(law, n, h, s2, config.default_tol("max_entropy")));
        push(pinsker_check(&sum.standardized(), config.default_tol("pinsker"))?);

        if !coin {
            for name in ["binomial_entropy", "binomial_relative_entropy", "feller"] {
                skip(name, "base law is not Bern(1/2)".into());
            }
            continue;
        }
        if n >= 2 {
            let tol = config.default_tol("binomial_entropy");
            push(binomial_entropy_gap_check(n)?.with_tolerance(tol));
            let tol = config.default_tol("binomial_relative_entropy");
            push(binomial_relative_entropy_check(n)?.with_tolerance(tol));
        } else {
            skip("binomial_entropy", "needs n >= 2".into());
            skip("binomial_relative_entropy", "needs n >= 2".into());
        }
        if n % 2 == 0 {
            push(feller_bound_check(n)?.with_tolerance(config.tol("feller", FELLER_TOL)));
        } else {
            skip("feller", "needs even n".into());
        }
    }
    let all_pass = rows.iter().all(|r| r.report.pass);
    Ok(VerifyReport { rows, skipped, all_pass })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecomposeReport {
    #[serde(flatten)]
    pub decomposition: DecompositionJson,
    /// Total variation between the reconstruction and the input law.
    pub reconstruction_residual: f64,
}

/// Bernoulli part decomposition of the base law on its maximal span.
pub fn decompose(base: &LatticePmf) -> Result<DecomposeReport> {
    ensure_nondegenerate(base)?;
    let reduced = base.reduce_to_maximal_span();
    let d = BernoulliPartDecomposition::decompose(&reduced)?;
    let residual = d.reconstruct()?.total_variation(&reduced)?;
    Ok(DecomposeReport { decomposition: d.to_json(), reconstruction_residual: residual })
}

/// The de Bruijn identity for `Ŝ_n + (h/√n) U`.
pub fn debruijn(base: &LatticePmf, n: usize, config: &RunConfig) -> Result<DeBruijnOutcome> {
    ensure_nondegenerate(base)?;
    if n == 0 {
        bail!("n must be at least 1");
    }
    if n > config.de_bruijn_cap {
        bail!("n = {n} exceeds the de Bruijn cap of {}", config.de_bruijn_cap);
    }
    let sum = partial_sum(base, n, config)?;
    let settings = QuadSettings { abs_tol: config.spatial_tol, ..QuadSettings::default() };
    let mut outcome = de_bruijn_check(&sum.law, n, sum.span, sum.sigma2(), config.t_nodes, settings)?;
    if let Some(&tol) = config.tolerances.get("de_bruijn") {
        outcome.report = BoundReport::identity("de_bruijn", outcome.lhs, outcome.rhs, tol);
    }
    Ok(outcome)
}
