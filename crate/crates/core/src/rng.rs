//! Counter-based, splittable random streams.
//!
//! Every path owns the stream `(seed, path_index)`: a ChaCha8 keystream keyed
//! by the seed and selected by the stream number. Results therefore depend
//! only on the seed and the path index, never on how work is scheduled.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub use rand::Rng;

/// Random stream handed to samplers.
pub type Stream = ChaCha8Rng;

/// Paths per parallel work unit. Fixed so reduction order is independent of
/// the thread count.
pub const CHUNK: u64 = 4096;

/// The stream reserved for path `index` under `seed`.
pub fn path_stream(seed: u64, index: u64) -> Stream {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Exponential variate with unit rate.
pub fn exp1<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    // 1 - U lies in (0, 1], so the logarithm is finite.
    -(1.0 - rng.random::<f64>()).ln()
}

/// Folds `f` over paths `0..n`, each with its own stream, in parallel.
///
/// Chunks of [`CHUNK`] paths are folded independently and merged in index
/// order, so the result is bit-identical for any number of worker threads.
pub fn par_fold_paths<A, I, F, M>(seed: u64, n: u64, init: I, f: F, merge: M) -> A
where
    A: Send,
    I: Fn() -> A + Sync,
    F: Fn(&mut A, &mut Stream, u64) + Sync,
    M: Fn(A, A) -> A,
{
    let chunks = n.div_ceil(CHUNK);
    let partials: Vec<A> = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut acc = init();
            let end = ((chunk + 1) * CHUNK).min(n);
            for index in chunk * CHUNK..end {
                let mut rng = path_stream(seed, index);
                f(&mut acc, &mut rng, index);
            }
            acc
        })
        .collect();
    partials.into_iter().fold(init(), merge)
}

/// Maps paths `0..n` to values, in index order.
pub fn par_map_paths<T, F>(seed: u64, n: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut Stream, u64) -> T + Sync,
{
    (0..n)
        .into_par_iter()
        .map(|index| f(&mut path_stream(seed, index), index))
        .collect()
}
