//! Deterministic pseudo-random numbers for the experiment harness.
//!
//! SplitMix64 with Box-Muller normal deviates. The generator is documented
//! here precisely so that every CSV row is reproducible from `(seed, config)`
//! alone, on any platform; no external RNG stream is imitated.
//!
//! Streams are split by hashing the parent seed with the stream index, so
//! experiment rows can draw independently in any order.

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 state. `next_u64` applies the standard finalizer.
#[derive(Debug, Clone)]
pub struct Rng {
    state: u64,
    spare_normal: Option<f64>,
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng { state: seed, spare_normal: None }
    }

    /// Derives an independent stream for `index`, as
    /// `splitmix(seed ^ GOLDEN * (index + 1))`.
    pub fn derive(seed: u64, index: u64) -> Self {
        let mut r = Rng::new(seed ^ GOLDEN.wrapping_mul(index.wrapping_add(1)));
        // burn one output so trivially related seeds decorrelate
        r.next_u64();
        Rng { state: r.state, spare_normal: None }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `(0, 1)`: 53 random bits, never exactly zero.
    pub fn uniform(&mut self) -> f64 {
        let bits = self.next_u64() >> 11;
        (bits as f64 + 0.5) * (1.0 / 9_007_199_254_740_992.0)
    }

    /// Zero-mean normal deviate with standard deviation `sigma` (Box-Muller).
    pub fn normal(&mut self, sigma: f64) -> f64 {
        if let Some(z) = self.spare_normal.take() {
            return sigma * z;
        }
        let u1 = self.uniform();
        let u2 = self.uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = std::f64::consts::TAU * u2;
        self.spare_normal = Some(r * theta.sin());
        sigma * r * theta.cos()
    }
}
