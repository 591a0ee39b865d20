//! Loading base laws: JSON distribution specs and built-in named laws.
//!
//! Named laws:
//!
//! - `bern:p` — Bernoulli(p) on `{0, 1}`
//! - `uniform:k` — uniform on `{0, ..., k-1}`
//! - `bin:n` or `bin:n:p` — Binomial(n, p) on `{0, ..., n}`, `p = 1/2` by default

use std::path::Path;

use crate::binomial::binomial_pmf;
use crate::error::{Error, Result};
use crate::lattice::{DistSpec, LatticePmf};

/// Parses a JSON distribution spec.
pub fn parse_spec(json: &str) -> Result<LatticePmf> {
    let spec: DistSpec = serde_json::from_str(json).map_err(|e| Error::Spec(e.to_string()))?;
    LatticePmf::from_spec(&spec)
}

/// Resolves a built-in law name, or `None` if `name` has no known prefix.
pub fn named(name: &str) -> Option<Result<LatticePmf>> {
    let (kind, rest) = name.split_once(':')?;
    let parsed = match kind {
        "bern" => parse_prob(rest).and_then(|p| LatticePmf::new(0.0, 1.0, &[1.0 - p, p])),
        "uniform" => parse_count(rest).and_then(|k| LatticePmf::new(0.0, 1.0, &vec![1.0; k])),
        "bin" => match rest.split_once(':') {
            None => parse_count(rest).and_then(binomial_pmf),
            Some((n, p)) => parse_count(n).and_then(|n| parse_prob(p).and_then(|p| binomial(n, p))),
        },
        _ => return None,
    };
    Some(parsed)
}

/// Loads `source` as a named law if it matches one, else as a JSON file.
pub fn load(source: &str) -> Result<LatticePmf> {
    if let Some(law) = named(source) {
        return law;
    }
    let text = std::fs::read_to_string(Path::new(source)).map_err(|e| Error::Spec(format!("{source}: {e}")))?;
    parse_spec(&text)
}

fn parse_prob(s: &str) -> Result<f64> {
    let p: f64 = parse_number(s)?;
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Spec(format!("probability {p} outside [0, 1]")));
    }
    Ok(p)
}

// Accepts decimals and simple fractions such as `1/3`.
fn parse_number(s: &str) -> Result<f64> {
    let bad = || Error::Spec(format!("cannot parse number {s:?}"));
    match s.split_once('/') {
        Some((a, b)) => {
            let a: f64 = a.trim().parse().map_err(|_| bad())?;
            let b: f64 = b.trim().parse().map_err(|_| bad())?;
            if b == 0.0 {
                return Err(bad());
            }
            Ok(a / b)
        }
        None => s.trim().parse().map_err(|_| bad()),
    }
}

fn parse_count(s: &str) -> Result<usize> {
    let k: usize = s.trim().parse().map_err(|_| Error::Spec(format!("cannot parse count {s:?}")))?;
    if k == 0 {
        return Err(Error::Spec("count must be positive".into()));
    }
    Ok(k)
}

fn binomial(n: usize, p: f64) -> Result<LatticePmf> {
    LatticePmf::new(0.0, 1.0, &[1.0 - p, p])?.self_convolve(n)
}
