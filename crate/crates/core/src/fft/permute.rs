use crate::error::{Error, Result};

/// Tile edge for the blocked transpose.
pub const DEFAULT_BLOCK: usize = 16;

fn block_for<T>() -> usize {
    if std::mem::size_of::<T>() <= 8 {
        DEFAULT_BLOCK
    } else {
        4
    }
}

/// `L_m^{mn}`: `out[i·n + j] = in[j·m + i]` for `i < m`, `j < n`, i.e. the
/// transpose of the `n × m` row-major view.
///
/// ```
/// use gfp_fft::fft::stride_permutation;
/// let mut v: Vec<u32> = (0..8).collect();
/// stride_permutation(&mut v, 2, 4).unwrap();
/// assert_eq!(v, [0, 2, 4, 6, 1, 3, 5, 7]);
/// ```
pub fn stride_permutation<T: Default>(v: &mut [T], m: usize, n: usize) -> Result<()> {
    let mut scratch = Vec::new();
    stride_permutation_with(v, m, n, &mut scratch, block_for::<T>())
}

/// Same as [`stride_permutation`] with a caller-owned scratch buffer and an
/// explicit tile size.
pub fn stride_permutation_with<T: Default>(
    v: &mut [T],
    m: usize,
    n: usize,
    scratch: &mut Vec<T>,
    block: usize,
) -> Result<()> {
    let len = m * n;
    if v.len() != len {
        return Err(Error::LengthMismatch { expected: len, actual: v.len() });
    }
    if m <= 1 || n <= 1 {
        return Ok(());
    }
    let block = block.max(1);
    if scratch.len() < len {
        scratch.resize_with(len, T::default);
    }
    for ib in (0..m).step_by(block) {
        let ie = (ib + block).min(m);
        for jb in (0..n).step_by(block) {
            let je = (jb + block).min(n);
            for i in ib..ie {
                for j in jb..je {
                    scratch[i * n + j] = std::mem::take(&mut v[j * m + i]);
                }
            }
        }
    }
    v.swap_with_slice(&mut scratch[..len]);
    Ok(())
}

pub(crate) fn permute_in_place<T: Default>(v: &mut [T], m: usize, n: usize, scratch: &mut Vec<T>) {
    stride_permutation_with(v, m, n, scratch, block_for::<T>()).expect("block length is m·n");
}
