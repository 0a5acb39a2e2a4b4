#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wellpoised::hyperseries::{check_conditions, HParams};
use wellpoised::identity::h_to_ab;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random rank-`k` series parameters with theorem-condition slack at least
/// `margin`. With `symmetric` every pair `1 + h0 - h_i - h_j` has that slack,
/// so all permutations of the lower parameters stay admissible.
pub fn random_h(rng: &mut ChaCha8Rng, k: usize, margin: f64, symmetric: bool) -> HParams {
    loop {
        let h: Vec<f64> = (0..k + 2).map(|_| rng.gen_range(0.5..2.2)).collect();
        let sum: f64 = h.iter().sum();
        let mut need = 2.0 * sum / (k as f64 + 1.0) - 1.0 + margin;
        for i in 0..h.len() {
            for j in i + 1..h.len() {
                let adjacent = j == i + 1 && i >= 1 && j <= k;
                if symmetric || adjacent {
                    need = need.max(h[i] + h[j] - 1.0 + margin);
                }
            }
        }
        let h0 = need + rng.gen_range(0.0..1.0);
        let hp = HParams::new(h0, h).unwrap();
        let c = check_conditions(&hp);
        if c.all_ok() && c.margin5 >= margin && c.margin6 >= margin && h_to_ab(&hp).is_ok() {
            return hp;
        }
    }
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}
