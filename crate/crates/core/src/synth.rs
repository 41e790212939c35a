//! Synthetic repetitive corpora: a random base string followed by mutated
//! copies of it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SynthError {
    #[error("base length must be positive")]
    EmptyBase,
    #[error("alphabet size must be in 1..=26, got {0}")]
    BadSigma(usize),
    #[error("mutation rate must lie in [0, 1], got {0}")]
    BadRate(f64),
}

/// Parameters of a repetitive corpus.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RepetitiveCorpus {
    pub base_len: usize,
    pub copies: usize,
    /// Probability that a copied symbol is resampled.
    pub mutation_rate: f64,
    /// Letters drawn from `a..` of this size.
    pub sigma: usize,
    pub seed: u64,
}

impl RepetitiveCorpus {
    pub fn generate(&self) -> Result<Vec<u8>, SynthError> {
        if self.base_len == 0 {
            return Err(SynthError::EmptyBase);
        }
        if !(1..=26).contains(&self.sigma) {
            return Err(SynthError::BadSigma(self.sigma));
        }
        if !(0.0..=1.0).contains(&self.mutation_rate) {
            return Err(SynthError::BadRate(self.mutation_rate));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let letter = |rng: &mut ChaCha8Rng| b'a' + rng.gen_range(0..self.sigma) as u8;
        let base: Vec<u8> = (0..self.base_len).map(|_| letter(&mut rng)).collect();
        let mut out = Vec::with_capacity(self.base_len * (self.copies + 1));
        out.extend_from_slice(&base);
        for _ in 0..self.copies {
            for &b in &base {
                let c = if rng.gen_bool(self.mutation_rate) {
                    letter(&mut rng)
                } else {
                    b
                };
                out.push(c);
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(copies: usize, rate: f64) -> RepetitiveCorpus {
        RepetitiveCorpus {
            base_len: 300,
            copies,
            mutation_rate: rate,
            sigma: 4,
            seed: 7,
        }
    }

    #[test]
    fn no_copies_is_the_base() {
        let out = spec(0, 0.1).generate().unwrap();
        assert_eq!(out.len(), 300);
    }

    #[test]
    fn exact_copies_without_mutation() {
        let out = spec(5, 0.0).generate().unwrap();
        assert_eq!(out.len(), 1800);
        for chunk in out.chunks(300) {
            assert_eq!(chunk, &out[..300]);
        }
    }

    #[test]
    fn deterministic_in_seed() {
        assert_eq!(spec(3, 0.05).generate(), spec(3, 0.05).generate());
        let other = RepetitiveCorpus {
            seed: 8,
            ..spec(3, 0.05)
        };
        assert_ne!(spec(3, 0.05).generate(), other.generate());
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(
            RepetitiveCorpus {
                base_len: 0,
                ..spec(1, 0.0)
            }
            .generate(),
            Err(SynthError::EmptyBase)
        );
        assert_eq!(
            RepetitiveCorpus {
                sigma: 27,
                ..spec(1, 0.0)
            }
            .generate(),
            Err(SynthError::BadSigma(27))
        );
        assert_eq!(spec(1, 1.5).generate(), Err(SynthError::BadRate(1.5)));
        assert!(spec(1, f64::NAN).generate().is_err());
    }
}
