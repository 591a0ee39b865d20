//! Fixtures shared by the criterion benches.

use entclt::LatticePmf;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// The base laws used throughout the convergence scans.
pub fn base_laws() -> Vec<(&'static str, LatticePmf)> {
    vec![
        ("bern_half", LatticePmf::new(0.0, 1.0, &[1.0, 1.0]).unwrap()),
        ("bern_third", LatticePmf::new(0.0, 1.0, &[2.0, 1.0]).unwrap()),
        ("uniform3", LatticePmf::new(0.0, 1.0, &[1.0, 1.0, 1.0]).unwrap()),
        ("three_point", LatticePmf::new(0.0, 1.0, &[0.5, 0.3, 0.0, 0.2]).unwrap()),
    ]
}

/// Deterministic pseudo-random positive weights of the given length.
pub fn weights(len: usize, seed: u64) -> Vec<f64> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..len).map(|_| rng.gen::<f64>() + 1e-3).collect()
}
