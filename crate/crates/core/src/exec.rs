//! Trial scheduling and random streams.
//!
//! Work is cut into fixed-size chunks of consecutive trial ids. Each chunk
//! is processed sequentially and chunk results are returned in chunk order,
//! so any reduction over them is independent of the worker count.
//!
//! Randomness: trial `t` under master seed `s` draws from ChaCha8 keyed by
//! `seed_from_u64(s)` on stream `t`, consuming values in a fixed per-trial
//! order (channel uniforms for positions `1..N`, then message bits).

use std::ops::Range;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Trials per chunk. Fixed so that floating-point reductions do not depend
/// on how chunks are distributed over threads.
pub const CHUNK: u64 = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    #[cfg(feature = "parallel")]
    Parallel { threads: Option<usize> },
}

impl Default for Exec {
    fn default() -> Self {
        #[cfg(feature = "parallel")]
        {
            Exec::Parallel { threads: None }
        }
        #[cfg(not(feature = "parallel"))]
        {
            Exec::Sequential
        }
    }
}

impl Exec {
    /// `threads == Some(1)` or a build without the `parallel` feature runs
    /// sequentially.
    pub fn with_threads(threads: Option<usize>) -> Self {
        match threads {
            Some(1) => Exec::Sequential,
            #[cfg(feature = "parallel")]
            t => Exec::Parallel { threads: t },
            #[cfg(not(feature = "parallel"))]
            _ => Exec::Sequential,
        }
    }

    /// Applies `f` to consecutive chunks of `0..total`; results in order.
    pub fn map_chunks<R, F>(&self, total: u64, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(Range<u64>) -> R + Sync + Send,
    {
        let chunks: Vec<Range<u64>> = (0..total.div_ceil(CHUNK))
            .map(|c| c * CHUNK..((c + 1) * CHUNK).min(total))
            .collect();
        match *self {
            Exec::Sequential => chunks.into_iter().map(f).collect(),
            #[cfg(feature = "parallel")]
            Exec::Parallel { threads } => {
                use rayon::prelude::*;
                let run = || chunks.into_par_iter().map(&f).collect();
                match threads {
                    Some(t) => rayon::ThreadPoolBuilder::new()
                        .num_threads(t)
                        .build()
                        .expect("failed to build thread pool")
                        .install(run),
                    None => run(),
                }
            }
        }
    }
}

pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}
