use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The generator every seeded component uses; ChaCha output is identical
/// across platforms.
pub type SolverRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SolverRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform index in `0..len`, drawn through `u64` so results do not depend
/// on the platform's pointer width.
pub fn index<R: Rng + ?Sized>(rng: &mut R, len: usize) -> usize {
    debug_assert!(len > 0);
    rng.gen_range(0..len as u64) as usize
}
