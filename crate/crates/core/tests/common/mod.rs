#![allow(dead_code)]

use std::collections::BTreeSet;

use geotrans::word::{Letter, LRWord};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Every cyclic word in R, L with both letters and length <= max_len.
pub fn all_words(max_len: usize) -> Vec<LRWord> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for n in 2..=max_len {
        for mask in 1u32..(1 << n) - 1 {
            let letters: Vec<Letter> =
                (0..n).map(|i| if mask & (1 << i) != 0 { Letter::L } else { Letter::R }).collect();
            let w = LRWord::new(letters).unwrap();
            if seen.insert(w.to_string()) {
                out.push(w);
            }
        }
    }
    out
}

/// Random words with both letters, length in [2, max_len].
pub fn random_words(count: usize, max_len: usize, seed: u64) -> Vec<LRWord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let n = rng.random_range(2..=max_len);
        let letters: Vec<Letter> =
            (0..n).map(|_| if rng.random_bool(0.5) { Letter::R } else { Letter::L }).collect();
        if let Ok(w) = LRWord::new(letters) {
            out.push(w);
        }
    }
    out
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
