//! Splittable deterministic random streams and the parallel sample driver.
//!
//! Every Monte Carlo sample `i` draws from its own ChaCha8 stream `i` under a
//! shared root seed, so results do not depend on how samples are spread over
//! workers.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StreamRoot {
    seed: u64,
}

impl StreamRoot {
    pub fn new(seed: u64) -> Self {
        Self { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Independent stream for sample (or worker) `index`.
    pub fn stream(&self, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        rng
    }

    /// A child root, for experiments that need several unrelated sample sets.
    pub fn child(&self, label: u64) -> StreamRoot {
        // splitmix64 finalizer
        let mut x = self.seed ^ label.wrapping_mul(0x9E37_79B9_7F4A_7C15);
        x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        StreamRoot::new(x ^ (x >> 31))
    }
}

/// Evaluates `f(index, stream)` for every index in `0..count`, on `workers`
/// threads, returning results in index order.
pub fn par_samples<T, F>(root: StreamRoot, count: u64, workers: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64, &mut ChaCha8Rng) -> Result<T> + Sync + Send,
{
    let run = || {
        (0..count)
            .into_par_iter()
            .map(|i| {
                let mut rng = root.stream(i);
                f(i, &mut rng)
            })
            .collect::<Result<Vec<T>>>()
    };
    if workers <= 1 {
        return (0..count)
            .map(|i| {
                let mut rng = root.stream(i);
                f(i, &mut rng)
            })
            .collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Config(format!("cannot build worker pool: {e}")))?;
    pool.install(run)
}
