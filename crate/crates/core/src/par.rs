//! Thin layer over rayon so the same call sites compile with or without the
//! `parallel` feature.
//!
//! With the feature on, the helpers dispatch to rayon's parallel iterators and
//! run inside whatever pool is current. Without it they fall back to plain
//! sequential loops. Results are identical either way: every closure handed
//! to these helpers writes only to its own chunk.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Smallest number of elements a chunked job must cover before it is split
/// across threads.
#[cfg(feature = "parallel")]
const MIN_PARALLEL_ELEMS: usize = 512;

/// Calls `f(index, chunk)` for every `chunk_size` chunk of `data`, giving each
/// worker a private scratch value built by `init`.
pub fn for_each_chunk_init<T, S, I, F>(data: &mut [T], chunk_size: usize, init: I, f: F)
where
    T: Send,
    I: Fn() -> S + Sync + Send,
    F: Fn(&mut S, usize, &mut [T]) + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if data.len() >= MIN_PARALLEL_ELEMS && data.len() > chunk_size {
            let per_task = (MIN_PARALLEL_ELEMS / chunk_size.max(1)).max(1);
            data.par_chunks_mut(chunk_size)
                .enumerate()
                .with_min_len(per_task)
                .for_each_init(&init, |s, (i, c)| f(s, i, c));
            return;
        }
    }
    let mut scratch = init();
    for (i, c) in data.chunks_mut(chunk_size).enumerate() {
        f(&mut scratch, i, c);
    }
}

/// Maps `f` over `0..len`, collecting in index order.
pub fn map_range<R, F>(len: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..len).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..len).map(f).collect()
    }
}

/// Number of worker threads available to the helpers above.
pub fn current_num_threads() -> usize {
    #[cfg(feature = "parallel")]
    {
        rayon::current_num_threads()
    }
    #[cfg(not(feature = "parallel"))]
    {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chunks_see_their_own_index() {
        let mut v: Vec<usize> = vec![0; 4096];
        for_each_chunk_init(&mut v, 16, || (), |_, i, c| c.iter_mut().for_each(|x| *x = i));
        for (j, x) in v.iter().enumerate() {
            assert_eq!(*x, j / 16);
        }
    }

    #[test]
    fn map_range_keeps_order() {
        let v = map_range(1000, |i| i * i);
        assert!(v.iter().enumerate().all(|(i, &x)| x == i * i));
    }
}
