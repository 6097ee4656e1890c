use std::ops::{Add, Range};

use rayon::prelude::*;

pub(crate) const CHUNK: usize = 2048;

/// Evaluates `f` on fixed-size chunks of `0..len` (possibly in parallel) and
/// combines the partials left to right, so the result does not depend on how
/// many workers ran.
pub(crate) fn chunked_sum<T, F>(len: usize, chunk: usize, f: F) -> T
where
    T: Send + Default + Add<Output = T>,
    F: Fn(Range<usize>) -> T + Sync,
{
    let chunk = chunk.max(1);
    let chunks = len.div_ceil(chunk);
    let partials: Vec<T> = (0..chunks)
        .into_par_iter()
        .map(|c| f(c * chunk..((c + 1) * chunk).min(len)))
        .collect();
    partials.into_iter().fold(T::default(), |acc, x| acc + x)
}
