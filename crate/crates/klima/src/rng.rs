//! Deterministic pseudorandomness and hardware-style noise sampling.
//!
//! The generator is xorshift64* (Vigna, "An experimental exploration of
//! Marsaglia's xorshift generators, scrambled"), a behavioral stand-in for the
//! 64-bit XORSHIFT circuit in the accelerator. Independent per-try streams are
//! derived from `(master seed, stream id)` with SplitMix64 so that a single
//! CLI seed reproduces every trajectory:
//!
//! ```text
//! state0 = splitmix64(master_seed ^ splitmix64(stream_id * 0x9E3779B97F4A7C15))
//! ```
//!
//! A zero state (degenerate for xorshift) is remapped to a fixed nonzero
//! constant.

use thiserror::Error;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;
const ZERO_STATE_FALLBACK: u64 = 0x6A09_E667_F3BC_C909;

#[derive(Debug, Error, PartialEq)]
pub enum RngError {
    #[error("alias table weights must contain at least one positive entry")]
    AllZeroWeights,
    #[error("weights and values must have equal nonzero length")]
    BadTableShape,
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// xorshift64* generator state for one stream.
#[derive(Debug, Clone)]
pub struct RngState {
    state: u64,
    stream: u64,
}

impl RngState {
    pub fn from_seed(seed: u64) -> Self {
        Self::for_stream(seed, 0)
    }

    /// Derive the stream `stream` of the master seed. Streams are mixed
    /// through SplitMix64 so nearby ids give unrelated sequences.
    pub fn for_stream(seed: u64, stream: u64) -> Self {
        let mixed = splitmix64(seed ^ splitmix64(stream.wrapping_mul(GOLDEN)));
        let state = if mixed == 0 { ZERO_STATE_FALLBACK } else { mixed };
        Self { state, stream }
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut s = self.state;
        s ^= s >> 12;
        s ^= s << 25;
        s ^= s >> 27;
        self.state = s;
        s.wrapping_mul(0x2545_F491_4F6C_DD1D)
    }

    /// Uniform real in `[0, 1)` from the top 53 bits.
    pub fn next_unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn next_bool(&mut self) -> bool {
        self.next_u64() >> 63 != 0
    }

    /// Uniform index in `[0, n)`.
    pub fn below(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        ((self.next_unit() * n as f64) as usize).min(n - 1)
    }
}

/// Walker alias tables for O(1) discrete sampling: probability table `H`,
/// alias table `A`, non-alias table `N`, and the real value attached to each
/// table slot.
#[derive(Debug, Clone)]
pub struct AliasTable {
    prob: Vec<f64>,
    alias: Vec<usize>,
    non_alias: Vec<usize>,
    values: Vec<f64>,
}

impl AliasTable {
    /// Standard Walker/Vose construction from nonnegative weights. Slot `i`
    /// carries `values[i]`.
    pub fn build(weights: &[f64], values: &[f64]) -> Result<Self, RngError> {
        if weights.is_empty() || weights.len() != values.len() {
            return Err(RngError::BadTableShape);
        }
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) || weights.iter().any(|w| *w < 0.0) {
            return Err(RngError::AllZeroWeights);
        }
        let n = weights.len();
        let mut prob = vec![0.0f64; n];
        let mut alias: Vec<usize> = (0..n).collect();
        let mut scaled: Vec<f64> = weights.iter().map(|w| w * n as f64 / total).collect();
        let mut small: Vec<usize> = Vec::with_capacity(n);
        let mut large: Vec<usize> = Vec::with_capacity(n);
        for (i, s) in scaled.iter().enumerate() {
            if *s < 1.0 {
                small.push(i);
            } else {
                large.push(i);
            }
        }
        while let (Some(&s), Some(&l)) = (small.last(), large.last()) {
            small.pop();
            prob[s] = scaled[s];
            alias[s] = l;
            scaled[l] = (scaled[l] + scaled[s]) - 1.0;
            if scaled[l] < 1.0 {
                large.pop();
                small.push(l);
            }
        }
        for i in large.into_iter().chain(small) {
            prob[i] = 1.0;
            alias[i] = i;
        }
        Ok(Self {
            prob,
            alias,
            non_alias: (0..n).collect(),
            values: values.to_vec(),
        })
    }

    pub fn len(&self) -> usize {
        self.prob.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prob.is_empty()
    }

    pub fn prob_table(&self) -> &[f64] {
        &self.prob
    }

    /// Draw a slot `k` and threshold `h` uniformly; return the non-alias value
    /// `N(k)` when `h <= H(k)`, otherwise the alias value `A(k)`.
    pub fn sample(&self, rng: &mut RngState) -> f64 {
        let k = rng.below(self.prob.len());
        let h = rng.next_unit();
        let idx = if h <= self.prob[k] {
            self.non_alias[k]
        } else {
            self.alias[k]
        };
        self.values[idx]
    }
}

/// Discretized zero-mean Gaussian over `levels` equispaced points spanning
/// `±span_sigmas·sigma`, weighted by the normal density.
pub fn gaussian_alias_table(
    levels: usize,
    sigma: f64,
    span_sigmas: f64,
) -> Result<AliasTable, RngError> {
    assert!(levels >= 2);
    assert!(sigma > 0.0 && span_sigmas > 0.0);
    let step = 2.0 * span_sigmas * sigma / (levels - 1) as f64;
    let mut values = Vec::with_capacity(levels);
    let mut weights = Vec::with_capacity(levels);
    for i in 0..levels {
        let x = -span_sigmas * sigma + i as f64 * step;
        values.push(x);
        weights.push((-x * x / (2.0 * sigma * sigma)).exp());
    }
    AliasTable::build(&weights, &values)
}

/// One draw from a DAC-quantized symmetric uniform source: `2^n_bits`
/// equispaced levels spanning `[-amplitude, +amplitude]`, chosen uniformly.
pub fn quantized_uniform_noise(n_bits: u32, amplitude: f64, rng: &mut RngState) -> f64 {
    assert!(n_bits >= 1);
    assert!(amplitude >= 0.0);
    let levels = 1usize << n_bits;
    let i = rng.below(levels);
    -amplitude + 2.0 * amplitude * i as f64 / (levels - 1) as f64
}
