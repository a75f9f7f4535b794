//! Seeded metric samplers shared by the integration tests.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use s3dirac::metric::{Metric, ScalSign};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Log-uniform in `[lo, hi]`.
pub fn log_uniform(rng: &mut impl Rng, lo: f64, hi: f64) -> f64 {
    (rng.gen_range(lo.ln()..hi.ln())).exp()
}

pub fn random_metric(rng: &mut impl Rng) -> Metric {
    let [a, b, c] = [(); 3].map(|_| log_uniform(rng, 0.25, 4.0));
    Metric::new(a, b, c).unwrap()
}

pub fn metric_with_sign(rng: &mut impl Rng, sign: ScalSign) -> Metric {
    loop {
        let m = random_metric(rng);
        if m.scal_sign() == sign {
            return m;
        }
    }
}

/// A point on the `scal = 0` surface: `c = ab/(a + b)` kills the factor
/// `−ab + bc + ca` and leaves the other two positive. The coordinates are
/// shuffled so that the vanishing factor is not always the same one.
pub fn zero_scal_metric(rng: &mut impl Rng) -> Metric {
    let a = log_uniform(rng, 0.25, 4.0);
    let b = log_uniform(rng, 0.25, 4.0);
    let c = a * b / (a + b);
    let m = Metric::new(a, b, c).unwrap();
    m.permuted(PERMUTATIONS[rng.gen_range(0..6)])
}

pub fn rel(x: f64, y: f64) -> f64 {
    (x - y).abs() / x.abs().max(y.abs()).max(f64::MIN_POSITIVE)
}

pub const PERMUTATIONS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];
