//! Input enumeration shared by the simulators and the experiment runner.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exhaustive input enumeration is limited to this many variables.
pub const EXHAUSTIVE_MAX_VARS: usize = 16;

/// Inputs to enumerate: all of them, or a seeded sample.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum InputMode {
    Exhaustive,
    Sampled { count: usize, seed: u64 },
}

impl InputMode {
    /// Input indices in `0..2^n`; sampled indices are drawn with replacement.
    pub fn indices(&self, n: usize) -> Result<Vec<usize>> {
        match *self {
            InputMode::Exhaustive => {
                if n > EXHAUSTIVE_MAX_VARS {
                    return Err(Error::Capacity(format!("exhaustive mode needs n <= {EXHAUSTIVE_MAX_VARS}, got {n}")));
                }
                Ok((0..1usize << n).collect())
            }
            InputMode::Sampled { count, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                Ok((0..count).map(|_| rng.gen_range(0..1usize << n)).collect())
            }
        }
    }
}
