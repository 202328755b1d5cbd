use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Independent random stream for shot `index` of a run seeded with `seed`.
///
/// ChaCha is counter based: the stream id selects a disjoint keystream, so a
/// shot's draws depend only on (seed, index) and never on execution order.
pub fn shot_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Stream reserved for resampling/auxiliary draws, disjoint from shot streams
/// of the same seed.
pub fn aux_rng(seed: u64, tag: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9E37_79B9_7F4A_7C15);
    rng.set_stream(tag);
    rng
}
