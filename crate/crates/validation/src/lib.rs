//! Word sets and random inputs shared by the acceptance suite.

use std::collections::BTreeSet;

use geotrans::algebra::{AlgebraTag, BNum};
use geotrans::projective::PB1Point;
use geotrans::word::{LRWord, Letter};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Every cyclic word in R, L with both letters and length <= max_len, one per
/// rotation class.
pub fn all_words(max_len: usize) -> Vec<LRWord> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for n in 2..=max_len {
        for mask in 1u32..(1 << n) - 1 {
            let letters = (0..n).map(|i| if mask & (1 << i) != 0 { Letter::L } else { Letter::R }).collect();
            let w = LRWord::new(letters).expect("both letters present");
            if seen.insert(w.to_string()) {
                out.push(w);
            }
        }
    }
    out
}

/// Random words with both letters, length in [2, max_len].
pub fn random_words(count: usize, max_len: usize, seed: u64) -> Vec<LRWord> {
    let mut r = rng(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let n = r.random_range(2..=max_len);
        let letters = (0..n).map(|_| if r.random_bool(0.5) { Letter::R } else { Letter::L }).collect();
        if let Ok(w) = LRWord::new(letters) {
            out.push(w);
        }
    }
    out
}

/// A random nondegenerate point of the projective line over B_q. Coordinates
/// are drawn from [-2, 2] or, a third of the time, from {-1, 0, 1, 2}, so that
/// coincident and light-like configurations occur.
pub fn random_point(r: &mut impl Rng, tag: AlgebraTag) -> PB1Point {
    loop {
        let mut x = || if r.random_bool(1.0 / 3.0) { r.random_range(-1..=2) as f64 } else { r.random_range(-2.0..2.0) };
        let (a, b, c, d) = (x(), x(), x(), x());
        if let Ok(p) = PB1Point::new(BNum::new(tag, a, b), BNum::new(tag, c, d)) {
            return p;
        }
    }
}
