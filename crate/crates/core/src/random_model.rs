//! Seeded uniform input and the order-statistics decomposition `X′ = z ∘ Π`
//! of an i.i.d. sample into its sorted values and its rank permutation.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tableau::Permutation;

/// Identity of the generator behind every [`SeededStream`]; recorded in run manifests.
pub const PRNG_NAME: &str = "ChaCha8Rng (rand_chacha 0.9; seed_from_u64, set_stream per trial)";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RandomModelError {
    #[error("empty or inverted interval ({lo}, {hi})")]
    BadInterval { lo: f64, hi: f64 },
    #[error("marked value w = {0} outside (0, 1]")]
    BadMarker(f64),
    #[error("prefix length {n} exceeds sample length {len}")]
    PrefixTooLong { n: usize, len: usize },
    #[error("sample contains the repeated value {0}")]
    Repeated(f64),
}

pub type Result<T> = std::result::Result<T, RandomModelError>;

/// A reproducible stream of uniform reals on the open interval `(lo, hi)`.
#[derive(Debug, Clone)]
pub struct SeededStream {
    seed: u64,
    stream: u64,
    lo: f64,
    hi: f64,
    rng: ChaCha8Rng,
}

impl SeededStream {
    pub fn new(seed: u64, lo: f64, hi: f64) -> Result<Self> {
        Self::with_stream(seed, 0, lo, hi)
    }

    /// Uniform on `(0, 1)`.
    pub fn unit(seed: u64) -> Self {
        Self::new(seed, 0.0, 1.0).expect("unit interval is valid")
    }

    /// Independent child stream `index` of `master`, on `(0, 1)`.
    pub fn child(master: u64, index: u64) -> Self {
        Self::with_stream(master, index, 0.0, 1.0).expect("unit interval is valid")
    }

    pub fn with_stream(seed: u64, stream: u64, lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() || lo >= hi {
            return Err(RandomModelError::BadInterval { lo, hi });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Ok(SeededStream {
            seed,
            stream,
            lo,
            hi,
            rng,
        })
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    pub fn bounds(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    /// Next draw, strictly inside `(lo, hi)`.
    pub fn next_value(&mut self) -> f64 {
        loop {
            let u: f64 = self.rng.random();
            let x = self.lo + (self.hi - self.lo) * u;
            if x > self.lo && x < self.hi {
                return x;
            }
        }
    }
}

/// `n` pairwise distinct draws; exact repeats are re-drawn.
pub fn uniform_sequence(n: usize, stream: &mut SeededStream) -> Vec<f64> {
    uniform_sequence_avoiding(n, stream, &[])
}

/// Like [`uniform_sequence`], additionally never producing any value of `avoid`.
pub fn uniform_sequence_avoiding(n: usize, stream: &mut SeededStream, avoid: &[f64]) -> Vec<f64> {
    let mut seen: HashSet<u64> = avoid.iter().map(|x| x.to_bits()).collect();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let x = stream.next_value();
        if seen.insert(x.to_bits()) {
            out.push(x);
        }
    }
    out
}

/// Sorted copy of a sample: `values()[j - 1]` is the order statistic `z(j)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderedSample {
    values: Vec<f64>,
}

impl OrderedSample {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `z(j)` for 1-based `j`.
    pub fn z(&self, j: usize) -> f64 {
        self.values[j - 1]
    }

    /// `z ∘ p`, entrywise.
    pub fn compose(&self, p: &Permutation) -> Vec<f64> {
        p.values().iter().map(|&j| self.z(j)).collect()
    }
}

pub fn order_statistics(xs: &[f64]) -> OrderedSample {
    let mut values = xs.to_vec();
    values.sort_by(f64::total_cmp);
    OrderedSample { values }
}

/// The permutation `Π` with `xs[j] = z(Π_j)`.
pub fn rank_permutation(xs: &[f64]) -> Result<Permutation> {
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
    if let Some(w) = order.windows(2).find(|w| xs[w[0]] == xs[w[1]]) {
        return Err(RandomModelError::Repeated(xs[w[0]]));
    }
    let mut ranks = vec![0; xs.len()];
    for (rank, &idx) in order.iter().enumerate() {
        ranks[idx] = rank + 1;
    }
    Ok(Permutation::new(ranks).expect("ranks form a permutation"))
}

/// Result of keeping only the values below the marker `w`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilterReport {
    /// Values `< w` in their original order.
    pub kept: Vec<f64>,
    /// How many kept values come from the first `n` entries.
    pub n_prime: usize,
    /// How many kept values overall.
    pub m_prime: usize,
}

pub fn filter_below(xs: &[f64], w: f64, n: usize) -> Result<FilterReport> {
    if !(w > 0.0 && w <= 1.0) {
        return Err(RandomModelError::BadMarker(w));
    }
    if n > xs.len() {
        return Err(RandomModelError::PrefixTooLong { n, len: xs.len() });
    }
    let n_prime = xs[..n].iter().filter(|&&x| x < w).count();
    let kept: Vec<f64> = xs.iter().copied().filter(|&x| x < w).collect();
    let m_prime = kept.len();
    Ok(FilterReport {
        kept,
        n_prime,
        m_prime,
    })
}
