//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::f64::consts::PI;
use std::time::Instant;

use entclt::bernoulli::{conditional_variance_trend, q_n};
use entclt::binomial::{
    binomial_entropy_gap_check, binomial_pmf, binomial_relative_entropy_check, feller_bound_check, FELLER_TOL,
};
use entclt::entropy::{
    entropy_gap, max_entropy_check, pinsker_check, solidarity_check, standardized_relative_entropy,
    uniform_smoothing_check,
};
use entclt::fisher::{de_bruijn_check, DE_BRUIJN_TOL, DEFAULT_T_NODES};
use entclt::lattice::{convolve_direct, convolve_transform, PartialSum};
use entclt::numeric::quad::QuadSettings;
use entclt::{BernoulliPartDecomposition, LatticePmf, SumDecomposition};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const BOUND_TOL: f64 = 1e-9;
const EXACT_TOL: f64 = 1e-12;
const SEED: u64 = 0x5eed_c17;

struct Outcome {
    pass: bool,
    detail: String,
}

fn bases() -> Vec<(&'static str, LatticePmf)> {
    vec![
        ("bern(1/2)", LatticePmf::new(0.0, 1.0, &[0.5, 0.5]).unwrap()),
        ("bern(1/3)", LatticePmf::new(0.0, 1.0, &[2.0 / 3.0, 1.0 / 3.0]).unwrap()),
        ("uniform{0,1,2}", LatticePmf::new(0.0, 1.0, &[1.0, 1.0, 1.0]).unwrap()),
        ("{0,1,3}", LatticePmf::new(0.0, 1.0, &[0.5, 0.3, 0.0, 0.2]).unwrap()),
    ]
}

fn n_grid() -> Vec<usize> {
    (0..=9).map(|e| 1usize << e).collect()
}

/// Every partial sum on the shared grid, built once.
fn sums() -> Vec<(&'static str, Vec<PartialSum>)> {
    bases()
        .into_iter()
        .map(|(name, p)| (name, n_grid().into_iter().map(|n| PartialSum::new(&p, n).unwrap()).collect()))
        .collect()
}

fn criterion_1() -> Outcome {
    let mut worst_slack = f64::INFINITY;
    let mut failures = 0;
    let mut last = 0.0;
    for n in 2..=4096 {
        let r = binomial_entropy_gap_check(n).unwrap();
        worst_slack = worst_slack.min(r.slack);
        failures += usize::from(!r.pass);
        last = r.lhs;
    }
    Outcome {
        pass: failures == 0 && last < 1e-3,
        detail: format!("min slack {worst_slack:.3e}, gap(4096) = {last:.3e} (< 1e-3)"),
    }
}

fn grid_check(sums: &[(&str, Vec<PartialSum>)], check: impl Fn(&PartialSum) -> (bool, f64)) -> Outcome {
    let mut worst = f64::INFINITY;
    let mut failed = Vec::new();
    for (name, row) in sums {
        for s in row {
            let (pass, slack) = check(s);
            worst = worst.min(slack);
            if !pass {
                failed.push(format!("{name}@{}", s.n));
            }
        }
    }
    Outcome { pass: failed.is_empty(), detail: format!("min slack {worst:.3e}, failures {failed:?}") }
}

fn criterion_2(sums: &[(&str, Vec<PartialSum>)]) -> Outcome {
    grid_check(sums, |s| {
        let r = solidarity_check(&s.law, s.n, s.span, s.base.variance, BOUND_TOL).unwrap();
        (r.pass, r.slack)
    })
}

fn criterion_3(sums: &[(&str, Vec<PartialSum>)]) -> Outcome {
    grid_check(sums, |s| {
        let r = uniform_smoothing_check(&s.law, s.n, s.span, s.base.variance, BOUND_TOL).unwrap();
        (r.pass, r.slack)
    })
}

fn criterion_4(sums: &[(&str, Vec<PartialSum>)]) -> Outcome {
    grid_check(sums, |s| {
        let r = max_entropy_check(&s.law, s.n, s.span, s.base.variance, BOUND_TOL);
        (r.pass, r.slack)
    })
}

fn criterion_5() -> Outcome {
    let mut worst = f64::INFINITY;
    let mut failures = 0;
    for n in 2..=1024 {
        let r = binomial_relative_entropy_check(n).unwrap();
        worst = worst.min(r.slack);
        failures += usize::from(!r.pass);
    }
    Outcome { pass: failures == 0, detail: format!("min slack {worst:.3e}, failures {failures}") }
}

fn criterion_6(sums: &[(&str, Vec<PartialSum>)]) -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, row) in sums {
        let at = |n: usize| row.iter().find(|s| s.n == n).unwrap();
        let d8 = standardized_relative_entropy(&at(8).law, 8).unwrap();
        let s512 = at(512);
        let d512 = standardized_relative_entropy(&s512.law, 512).unwrap();
        let deficit = entropy_gap(&s512.law, 512, s512.span, s512.base.variance);
        pass &= d512 < d8 && d512 < 0.05 && deficit.abs() < 0.05;
        parts.push(format!("{name}: D8 {d8:.2e} D512 {d512:.2e} deficit {deficit:.2e}"));
    }
    Outcome { pass, detail: parts.join("; ") }
}

fn random_maximal_pmf(rng: &mut StdRng) -> LatticePmf {
    let len = rng.gen_range(2..=50);
    let mut w: Vec<f64> = (0..len).map(|_| if rng.gen_bool(0.25) { 0.0 } else { rng.gen::<f64>() }).collect();
    // two adjacent atoms force span 1 to be maximal
    w[0] = 0.05 + rng.gen::<f64>();
    w[1] = 0.05 + rng.gen::<f64>();
    w[len - 1] = 0.05 + rng.gen::<f64>();
    LatticePmf::new(rng.gen_range(-5.0..5.0), rng.gen_range(0.1..3.0), &w).unwrap()
}

fn criterion_7() -> Outcome {
    let mut rng = StdRng::seed_from_u64(SEED);
    let mut worst_tv = 0.0f64;
    let mut min_q = f64::INFINITY;
    for _ in 0..100 {
        let p = random_maximal_pmf(&mut rng);
        let d = BernoulliPartDecomposition::decompose(&p).unwrap();
        worst_tv = worst_tv.max(d.reconstruct().unwrap().total_variation(&p).unwrap());
        min_q = min_q.min(d.q());
    }

    let mut worst_weight = 0.0f64;
    for (_, p) in bases() {
        for n in [1, 2, 5, 16, 64] {
            let s = SumDecomposition::new(&p, n).unwrap();
            worst_weight = worst_weight.max((s.raw_w1_mass - q_n(s.q, n)).abs());
        }
    }

    let bern_third = LatticePmf::new(0.0, 1.0, &[2.0 / 3.0, 1.0 / 3.0]).unwrap();
    let ratio = conditional_variance_trend(&bern_third, &[256]).unwrap()[0].ratio;

    Outcome {
        pass: worst_tv < EXACT_TOL && min_q > 0.0 && worst_weight < EXACT_TOL && (ratio - 1.0).abs() < 0.05,
        detail: format!(
            "round-trip TV {worst_tv:.2e}, min q {min_q:.3}, q_n weight error {worst_weight:.2e}, Var ratio(256) {ratio:.4}"
        ),
    }
}

fn criterion_8() -> Outcome {
    let mut worst = f64::INFINITY;
    let mut failures = 0;
    for n in (2..=1024).step_by(2) {
        let r = feller_bound_check(n).unwrap().with_tolerance(FELLER_TOL);
        worst = worst.min(r.slack);
        failures += usize::from(!r.pass);
    }
    Outcome { pass: failures == 0, detail: format!("min slack {worst:.3e}, failures {failures}") }
}

fn criterion_9() -> Outcome {
    let coin = LatticePmf::new(0.0, 1.0, &[0.5, 0.5]).unwrap();
    let settings = QuadSettings::default();
    let mut pass = true;
    let mut parts = Vec::new();
    for n in [4, 16] {
        let law = coin.self_convolve(n).unwrap();
        let base = de_bruijn_check(&law, n, 1.0, 0.25, DEFAULT_T_NODES, settings).unwrap();
        let doubled = de_bruijn_check(&law, n, 1.0, 0.25, 2 * DEFAULT_T_NODES, settings).unwrap();
        let residual = (base.lhs - base.rhs).abs();
        let drift = (base.rhs - doubled.rhs).abs();
        pass &= residual <= DE_BRUIJN_TOL && drift < 1e-4;
        parts.push(format!("n={n}: residual {residual:.2e}, node doubling {drift:.2e}"));
    }
    Outcome { pass, detail: parts.join("; ") }
}

/// Largest entrywise gap, matched by lattice index so trimmed tails line up.
fn max_gap(a: &LatticePmf, b: &LatticePmf) -> f64 {
    let shift = a.grid_shift(b).unwrap();
    let lo = a.first_index().min(b.first_index() + shift);
    let hi = a.last_index().max(b.last_index() + shift);
    (lo..=hi).map(|k| (a.prob(k) - b.prob(k - shift)).abs()).fold(0.0, f64::max)
}

fn criterion_10() -> Outcome {
    let coin = LatticePmf::new(0.0, 1.0, &[0.5, 0.5]).unwrap();
    let mut worst_binom = 0.0f64;
    let mut law = coin.clone();
    for n in 1..=1024 {
        if n > 1 {
            law = law.convolve(&coin).unwrap();
        }
        worst_binom = worst_binom.max(max_gap(&law, &binomial_pmf(n).unwrap()));
    }
    // binary-exponentiation path at a few sizes as well
    for n in [3, 100, 513, 1024] {
        worst_binom = worst_binom.max(max_gap(&coin.self_convolve(n).unwrap(), &binomial_pmf(n).unwrap()));
    }

    let mut rng = StdRng::seed_from_u64(SEED ^ 1);
    let mut worst_pair = 0.0f64;
    for _ in 0..50 {
        let a: Vec<f64> = (0..rng.gen_range(1..=600)).map(|_| rng.gen::<f64>()).collect();
        let b: Vec<f64> = (0..rng.gen_range(1..=600)).map(|_| rng.gen::<f64>()).collect();
        let (sa, sb): (f64, f64) = (a.iter().sum(), b.iter().sum());
        let a: Vec<f64> = a.iter().map(|x| x / sa).collect();
        let b: Vec<f64> = b.iter().map(|x| x / sb).collect();
        let d = convolve_direct(&a, &b);
        let t = convolve_transform(&a, &b).unwrap();
        worst_pair = worst_pair.max(d.iter().zip(&t).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max));
    }
    Outcome {
        pass: worst_binom < EXACT_TOL && worst_pair < EXACT_TOL,
        detail: format!("binomial vs convolution {worst_binom:.2e}, direct vs transform {worst_pair:.2e}"),
    }
}

fn criterion_11(sums: &[(&str, Vec<PartialSum>)]) -> Outcome {
    let mut worst = f64::INFINITY;
    let mut count = 0;
    let mut failures = 0;
    let mut record = |p: &LatticePmf| {
        let r = pinsker_check(p, BOUND_TOL).unwrap();
        worst = worst.min(r.slack);
        failures += usize::from(!r.pass);
        count += 1;
    };
    for (_, row) in sums {
        for s in row {
            record(&s.standardized());
        }
    }
    for n in 2..=1024 {
        record(&binomial_pmf(n).unwrap());
    }
    Outcome { pass: failures == 0, detail: format!("{count} pairs, min slack {worst:.3e}") }
}

/// Independent evaluation of D(Ŝ₁₆) for the {0,1,3} law: schoolbook
/// convolution and Gaussian cells by Simpson's rule.
fn three_point_oracle() -> Outcome {
    let base = [0.5, 0.3, 0.0, 0.2];
    let mut law = vec![1.0];
    for _ in 0..16 {
        let mut next = vec![0.0; law.len() + base.len() - 1];
        for (i, a) in law.iter().enumerate() {
            for (j, b) in base.iter().enumerate() {
                next[i + j] += a * b;
            }
        }
        law = next;
    }
    let mean: f64 = law.iter().enumerate().map(|(k, p)| k as f64 * p).sum();
    let var: f64 = law.iter().enumerate().map(|(k, p)| (k as f64 - mean).powi(2) * p).sum();
    let sd = var.sqrt();
    let cell = |k: usize| {
        let (lo, hi) = (k as f64 - mean, k as f64 + 1.0 - mean);
        let steps = 2000;
        let h = (hi - lo) / steps as f64;
        let f = |x: f64| (-(x * x) / (2.0 * var)).exp() / (sd * (2.0 * PI).sqrt());
        let mut acc = f(lo) + f(hi);
        for i in 1..steps {
            acc += f(lo + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        acc * h / 3.0
    };
    let oracle: f64 = law.iter().enumerate().filter(|(_, p)| **p > 0.0).map(|(k, p)| p * (p / cell(k)).ln()).sum();

    let p = LatticePmf::new(0.0, 1.0, &base).unwrap();
    let sum = PartialSum::new(&p, 16).unwrap();
    let library = standardized_relative_entropy(&sum.law, 16).unwrap();
    let bound = solidarity_check(&sum.law, 16, 1.0, sum.base.variance, BOUND_TOL).unwrap();
    let diff = (oracle - library).abs();
    Outcome {
        pass: diff < 1e-9 && bound.pass,
        detail: format!("oracle D {oracle:.12} vs library {library:.12} (diff {diff:.1e}), solidarity slack {:.3e}", bound.slack),
    }
}

fn main() {
    let started = Instant::now();
    let sums = sums();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("1 binomial entropy gap", Box::new(criterion_1)),
        ("2 solidarity bound", Box::new(|| criterion_2(&sums))),
        ("3 uniform smoothing bound", Box::new(|| criterion_3(&sums))),
        ("4 max-entropy bound", Box::new(|| criterion_4(&sums))),
        ("5 binomial relative entropy", Box::new(criterion_5)),
        ("6 convergence", Box::new(|| criterion_6(&sums))),
        ("7 Bernoulli part", Box::new(criterion_7)),
        ("8 Feller bound", Box::new(criterion_8)),
        ("9 de Bruijn identity", Box::new(criterion_9)),
        ("10 cross-oracle", Box::new(criterion_10)),
        ("11 Pinsker", Box::new(|| criterion_11(&sums))),
        ("three-point n=16 oracle", Box::new(three_point_oracle)),
    ];
    let mut failed = 0;
    for (name, run) in &criteria {
        let t = Instant::now();
        let outcome = run();
        let status = if outcome.pass { "PASS" } else { "FAIL" };
        failed += usize::from(!outcome.pass);
        println!("criterion {name}: {status} [{:.2}s] {}", t.elapsed().as_secs_f64(), outcome.detail);
    }
    println!("acceptance: {} of {} passed in {:.1}s", criteria.len() - failed, criteria.len(), started.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
