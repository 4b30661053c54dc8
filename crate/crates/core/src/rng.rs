//! Splittable, counter-keyed random streams.
//!
//! A [`RngStream`] is a 64-bit key. Substreams are derived by hashing the key
//! together with an index, so the generator used for replicate `i` depends only
//! on `(seed, path of indices)` and never on the order in which work is
//! scheduled. The generator behind a key is ChaCha8, itself a counter-based
//! cipher, so each key yields an independent sequence.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngStream {
    key: u64,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self {
            key: splitmix(seed ^ 0x6970_6566_5f72_6e67),
        }
    }

    /// Independent child stream number `index`.
    pub fn substream(&self, index: u64) -> Self {
        let mixed = splitmix(self.key ^ splitmix(index.wrapping_mul(GOLDEN).wrapping_add(1)));
        Self { key: mixed }
    }

    /// Child stream keyed by a short label, used to separate roles
    /// (null draws, power draws, ...) under the same seed.
    pub fn labeled(&self, label: &str) -> Self {
        let h = label.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
            (h ^ b as u64).wrapping_mul(0x100_0000_01b3)
        });
        self.substream(h)
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut seed = [0u8; 32];
        let mut s = self.key;
        for chunk in seed.chunks_exact_mut(8) {
            s = splitmix(s);
            chunk.copy_from_slice(&s.to_le_bytes());
        }
        ChaCha8Rng::from_seed(seed)
    }

    pub fn key(&self) -> u64 {
        self.key
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn same_path_same_numbers() {
        let a: Vec<u64> = RngStream::new(7)
            .substream(3)
            .substream(11)
            .rng()
            .random_iter()
            .take(8)
            .collect();
        let b: Vec<u64> = RngStream::new(7)
            .substream(3)
            .substream(11)
            .rng()
            .random_iter()
            .take(8)
            .collect();
        assert_eq!(a, b);
    }

    #[test]
    fn siblings_differ() {
        let root = RngStream::new(1);
        let x: u64 = root.substream(0).rng().random();
        let y: u64 = root.substream(1).rng().random();
        let z: u64 = root.rng().random();
        assert_ne!(x, y);
        assert_ne!(x, z);
        assert_ne!(root.labeled("null"), root.labeled("power"));
    }
}
