//! Counter-based RNG streams: every replicate or trial gets its own ChaCha
//! stream under a shared root seed, so results do not depend on scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// Stream `stream` of the generator rooted at `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Stream id for replicate `replicate` of grid point `grid_index`.
pub fn replicate_stream(grid_index: usize, replicate: u32) -> u64 {
    ((grid_index as u64) << 32) | replicate as u64
}
