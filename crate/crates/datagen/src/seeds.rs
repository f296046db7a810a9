//! Stable seed derivation.
//!
//! Every job seed is a SHA-256 digest of the master seed and the job
//! coordinates, so adding properties or sizes never perturbs other jobs'
//! outputs, and per-positive streams are independent of scheduling.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::generator::Family;

/// 32-byte seed material plus a u64 view for manifests.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeedMaterial(pub [u8; 32]);

impl SeedMaterial {
    pub fn as_u64(&self) -> u64 {
        u64::from_le_bytes(self.0[..8].try_into().unwrap())
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::from_seed(self.0)
    }

    /// Child seed for a named sub-stream of this seed.
    pub fn child(&self, label: &str) -> SeedMaterial {
        let mut h = Sha256::new();
        h.update(self.0);
        h.update([0u8]);
        h.update(label.as_bytes());
        SeedMaterial(h.finalize().into())
    }
}

/// Seed for one (property, family, size) generation job.
pub fn job_seed(master: u64, property: &str, family: Family, size: usize) -> SeedMaterial {
    let mut h = Sha256::new();
    h.update(master.to_le_bytes());
    h.update([0u8]);
    h.update(property.as_bytes());
    h.update([0u8]);
    h.update(family.as_str().as_bytes());
    h.update([0u8]);
    h.update((size as u64).to_le_bytes());
    SeedMaterial(h.finalize().into())
}

/// Seed for the perturbation search of one positive sample, keyed by its
/// bitstring so results do not depend on iteration schedule.
pub fn positive_seed(job: &SeedMaterial, bitstring: &str) -> SeedMaterial {
    let mut h = Sha256::new();
    h.update(job.0);
    h.update([1u8]);
    h.update(bitstring.as_bytes());
    SeedMaterial(h.finalize().into())
}

/// Seed for the train/validation row partition of a split.
pub fn split_seed(master: u64, property: &str, family: Family) -> SeedMaterial {
    let mut h = Sha256::new();
    h.update(master.to_le_bytes());
    h.update([2u8]);
    h.update(property.as_bytes());
    h.update([0u8]);
    h.update(family.as_str().as_bytes());
    SeedMaterial(h.finalize().into())
}
