#![allow(dead_code)]

pub mod corpus;
pub mod deps;
pub mod gen;
pub mod triples;

use rand::SeedableRng;

pub fn rng(seed: u64) -> gen::Rng8 {
    gen::Rng8::seed_from_u64(seed)
}
