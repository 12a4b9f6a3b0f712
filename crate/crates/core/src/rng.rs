//! Seeded, splittable random streams.
//!
//! An [`RngStream`] is just a `(seed, stream_id)` pair. Generators are
//! ChaCha8 keyed by `seed` and positioned on ChaCha stream `stream_id`, so
//! two streams with the same pair replay the same sequence and streams with
//! different ids never overlap. Sub-streams are derived by mixing a tag into
//! the id; no generator state is shared, which keeps partitioned and parallel
//! runs independent of scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Tags used when deriving sub-streams. Part of the reproducibility contract:
/// changing one changes every seeded output.
pub mod tags {
    pub const RUS: u64 = 0x5255_5300;
    pub const SAMPLE: u64 = 0x534d_504c;
    pub const INDEX: u64 = 0x4944_5800;
    pub const ENN_PASS: u64 = 0x454e_4e00;
    pub const STAGE_ONE: u64 = 0x5354_4731;
    pub const STAGE_TWO: u64 = 0x5354_4732;
    pub const PLAN: u64 = 0x504c_414e;
    pub const FOLDS: u64 = 0x464f_4c44;
    pub const FOLD: u64 = 0x464f_4c00;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RngStream {
    pub seed: u64,
    pub stream_id: u64,
}

impl RngStream {
    pub const fn new(seed: u64, stream_id: u64) -> Self {
        RngStream { seed, stream_id }
    }

    /// A fresh generator positioned at the start of this stream.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng
    }

    /// Child stream for `tag`; a pure function of `(self, tag)`.
    pub fn derive(&self, tag: u64) -> RngStream {
        RngStream { seed: self.seed, stream_id: mix(self.stream_id ^ mix(tag.wrapping_add(0x9e37_79b9_7f4a_7c15))) }
    }

    /// Stream of partition block `block`: `(seed, stream_id + block)`, so
    /// block 0 is the stream itself and a single-block run matches the
    /// unpartitioned one.
    pub fn block(&self, block: usize) -> RngStream {
        RngStream { seed: self.seed, stream_id: self.stream_id.wrapping_add(block as u64) }
    }
}

/// splitmix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
