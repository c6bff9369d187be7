//! Inputs shared by the benchmarks.

use rand::rngs::StdRng;
use rand::SeedableRng;

use slt_core::gen::{random_global, GenConfig};
use slt_core::{print, Declarations, LightType};

/// `n` random global types from a fixed seed.
pub fn corpus(seed: u64, n: usize) -> Vec<LightType> {
    let mut rng = StdRng::seed_from_u64(seed);
    let cfg = GenConfig::default();
    (0..n).map(|_| random_global(&mut rng, &cfg)).collect()
}

/// The corpus rendered as source text.
pub fn corpus_sources(seed: u64, n: usize) -> Vec<String> {
    let decls = Declarations::new();
    corpus(seed, n).iter().map(|t| print(t, &decls)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_is_deterministic() {
        assert_eq!(corpus(7, 20), corpus(7, 20));
        assert_eq!(corpus_sources(7, 5).len(), 5);
    }
}
