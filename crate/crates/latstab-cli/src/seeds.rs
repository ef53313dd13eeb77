//! Seed bookkeeping. A single master seed expands to one seed per trial
//! through a counter-mode splitmix64 step, so trials can run in any order,
//! on any number of threads, and still see the same randomness.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Seed for trial `index` under `master`. Pure function of its arguments.
pub fn trial_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::RngCore;

    #[test]
    fn trial_seeds_are_stable() {
        // Frozen values: a change here silently breaks report reproducibility.
        assert_eq!(trial_seed(0, 0), 0xE220_A839_7B1D_CDAF);
        assert_eq!(trial_seed(42, 7), 0xCCF6_35EE_9E9E_2FA4);
    }

    #[test]
    fn trial_seeds_do_not_collide_nearby() {
        let mut seen = std::collections::HashSet::new();
        for master in [0u64, 1, 42, u64::MAX] {
            for i in 0..1000 {
                assert!(seen.insert(trial_seed(master, i)));
            }
        }
    }

    #[test]
    fn rng_is_deterministic() {
        let mut a = rng_for(9);
        let mut b = rng_for(9);
        for _ in 0..16 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }
}
