//! Fixed-seed fixtures shared by the benchmarks.

use cproj_core::synth::{planted_blocks, random_database, PlantedBlocks};
use cproj_core::BooleanDatabase;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const SEED: u64 = 0x5eed_c0ce;

/// 2000 attributes by 25 objects with planted blocks.
pub fn wide() -> BooleanDatabase {
    planted_blocks(&mut ChaCha8Rng::seed_from_u64(SEED), &PlantedBlocks::wide())
}

/// A small dense matrix the oracle can handle.
pub fn small(n_attributes: usize, n_objects: usize) -> BooleanDatabase {
    random_database(&mut ChaCha8Rng::seed_from_u64(SEED), n_attributes, n_objects, 0.5)
}
