//! Counter-based seed derivation.
//!
//! Every stochastic stage gets its own seed, a hash of the master seed, the
//! field name, a stage tag and a replicate index. Because a replicate's seed
//! does not depend on which worker runs it or in what order, results are the
//! same for any thread count.

use sha2::{Digest, Sha256};

/// Seed for `(master, field, stage, index)`.
pub fn derive(master: u64, field: &str, stage: &str, index: u64) -> u64 {
    let mut h = Sha256::new();
    h.update(b"tailfit-seed-v1");
    h.update(master.to_le_bytes());
    // Length prefixes keep ("ab", "c") and ("a", "bc") apart.
    h.update((field.len() as u64).to_le_bytes());
    h.update(field.as_bytes());
    h.update((stage.len() as u64).to_le_bytes());
    h.update(stage.as_bytes());
    h.update(index.to_le_bytes());
    let digest = h.finalize();
    let mut out = [0u8; 8];
    out.copy_from_slice(&digest[..8]);
    u64::from_le_bytes(out)
}

/// Seed of replicate `index` within a stage already seeded by `stage_seed`.
pub fn replicate(stage_seed: u64, index: u64) -> u64 {
    derive(stage_seed, "", "replicate", index)
}
