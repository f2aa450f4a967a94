//! Splittable pseudo-random streams for the simulation engine.
//!
//! Every replication draws from its own substream whose seed is a pure
//! function of `(master_seed, replication_index)`, so results are
//! bit-identical regardless of worker count or scheduling. The generator is
//! the SplitMix64 sequence: state advances by the 64-bit golden-ratio
//! increment and outputs pass through the Stafford "mix 13" finalizer.
//! Uniform variates map `(x >> 12 + ½)·2⁻⁵²`: with 52 random bits the
//! half-offset is exactly representable, so the result lies strictly inside
//! (0, 1) for every 64-bit word.

/// Identifier recorded in simulation output for provenance.
pub const GENERATOR_ID: &str = "splitmix64-substreams/open01-v1";

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of substream `index` under `master_seed`: the master seed XORed
/// with the finalized index is finalized once more, decorrelating
/// neighbouring indices and neighbouring master seeds.
#[inline]
pub fn substream_seed(master_seed: u64, index: u64) -> u64 {
    mix(master_seed ^ mix(index.wrapping_add(1).wrapping_mul(GOLDEN)))
}

/// SplitMix64 state.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    /// The substream generator for one replication.
    pub fn substream(master_seed: u64, index: u64) -> Self {
        SplitMix64::new(substream_seed(master_seed, index))
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        mix(self.state)
    }

    /// A uniform variate strictly inside (0, 1).
    #[inline]
    pub fn next_open01(&mut self) -> f64 {
        ((self.next_u64() >> 12) as f64 + 0.5) * (1.0 / (1u64 << 52) as f64)
    }
}
