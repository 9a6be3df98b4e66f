//! Unrolled base-case DFTs, generated from the radix-2 factorization
//!
//! `DFT_n = L_2^n (I_{n/2} ⊗ DFT_2) L_{n/2}^n D_{2,n/2} (I_2 ⊗ DFT_{n/2}) L_2^n`
//!
//! The permutations are never executed: they are tracked as index maps, so
//! the emitted program is a list of in-place butterfly layers, twiddle
//! layers, and one closing layer of swaps that undoes the accumulated
//! (bit-reversal) order.

use std::fmt;

use crate::error::{Error, Result};

use super::FftField;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaseOp {
    /// `(v[a], v[b]) := (v[a] + v[b], v[a] - v[b])`
    Dft2(usize, usize),
    /// `v[pos] *= ω^exp`
    Twiddle(usize, usize),
}

impl fmt::Display for BaseOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseOp::Dft2(a, b) => write!(f, "dft2({a},{b})"),
            BaseOp::Twiddle(p, e) => write!(f, "tw({p},{e})"),
        }
    }
}

/// A generated straight-line DFT program of fixed size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseCase {
    size: usize,
    stages: Vec<Vec<BaseOp>>,
    swaps: Vec<(usize, usize)>,
}

/// How a base case obtains `ω^t`.
pub(crate) enum BaseTwiddles<'a, E> {
    /// `table[t] = ω^t`.
    Table(&'a [E]),
    /// `ω = ρ^shift` for the field's cheap root `ρ` of order `order`.
    Cheap { shift: usize, order: usize },
}

impl BaseCase {
    /// The program for `size`-point DFTs; `size` must be a power of two ≥ 2.
    pub fn new(size: usize) -> Result<Self> {
        if size < 2 || !size.is_power_of_two() {
            return Err(Error::UnsupportedSize(format!("base case of size {size}")));
        }
        let (stages, out) = generate(size, 1);
        Ok(BaseCase { size, stages, swaps: swaps_for(&out) })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn stages(&self) -> &[Vec<BaseOp>] {
        &self.stages
    }

    pub fn swaps(&self) -> &[(usize, usize)] {
        &self.swaps
    }

    /// Human-readable listing, one stage per line, swaps last.
    pub fn transcript(&self) -> Vec<String> {
        let mut lines: Vec<String> = self
            .stages
            .iter()
            .map(|s| s.iter().map(|op| op.to_string()).collect::<Vec<_>>().join(" "))
            .collect();
        if !self.swaps.is_empty() {
            lines.push(self.swaps.iter().map(|(a, b)| format!("swap({a},{b})")).collect::<Vec<_>>().join(" "));
        }
        lines
    }

    pub(crate) fn run<F: FftField>(&self, field: &F, v: &mut [F::Elem], tw: &BaseTwiddles<'_, F::Elem>) {
        debug_assert_eq!(v.len(), self.size);
        for stage in &self.stages {
            for op in stage {
                match *op {
                    BaseOp::Dft2(a, b) => {
                        let (s, d) = dft2(field, &v[a], &v[b]);
                        v[a] = s;
                        v[b] = d;
                    }
                    BaseOp::Twiddle(p, t) => {
                        v[p] = match tw {
                            BaseTwiddles::Table(table) => field.mul(&v[p], &table[t]),
                            BaseTwiddles::Cheap { shift, order } => field.mul_cheap(&v[p], t * shift % order),
                        };
                    }
                }
            }
        }
        for &(a, b) in &self.swaps {
            v.swap(a, b);
        }
    }
}

/// `(a + b, a - b)`.
pub fn dft2<F: FftField>(field: &F, a: &F::Elem, b: &F::Elem) -> (F::Elem, F::Elem) {
    (field.add(a, b), field.sub(a, b))
}

/// Returns the stages and `out`, where logical output `t` ends up at
/// position `out[t]`. Twiddle exponents are in units of the size-`n`
/// root raised to `scale`.
fn generate(n: usize, scale: usize) -> (Vec<Vec<BaseOp>>, Vec<usize>) {
    if n == 2 {
        return (vec![vec![BaseOp::Dft2(0, 1)]], vec![0, 1]);
    }
    let h = n / 2;
    // L_2^n: logical (block i, offset j) lives at 2j + i
    let mut loc = vec![0; n];
    for i in 0..2 {
        for j in 0..h {
            loc[i * h + j] = j * 2 + i;
        }
    }
    let (sub, subperm) = generate(h, scale * 2);
    let mut stages = Vec::with_capacity(sub.len() + 2);
    for st in &sub {
        let mut ops = Vec::with_capacity(2 * st.len());
        for b in 0..2 {
            for op in st {
                ops.push(match *op {
                    BaseOp::Dft2(x, y) => BaseOp::Dft2(loc[b * h + x], loc[b * h + y]),
                    BaseOp::Twiddle(x, t) => BaseOp::Twiddle(loc[b * h + x], t),
                });
            }
        }
        stages.push(ops);
    }
    let mut loc2 = vec![0; n];
    for b in 0..2 {
        for p in 0..h {
            loc2[b * h + p] = loc[b * h + subperm[p]];
        }
    }
    // D_{2,h}: second block scaled by ω^j
    stages.push((1..h).map(|j| BaseOp::Twiddle(loc2[h + j], j * scale)).collect());
    // L_h^n, then I_h ⊗ DFT_2
    let mut loc3 = vec![0; n];
    for i in 0..h {
        for j in 0..2 {
            loc3[i * 2 + j] = loc2[j * h + i];
        }
    }
    stages.push((0..h).map(|i| BaseOp::Dft2(loc3[2 * i], loc3[2 * i + 1])).collect());
    // final L_2^n
    let mut out = vec![0; n];
    for i in 0..2 {
        for j in 0..h {
            out[i * h + j] = loc3[j * 2 + i];
        }
    }
    (stages, out)
}

/// Swaps realizing `new[t] = old[out[t]]`, one cycle at a time.
fn swaps_for(out: &[usize]) -> Vec<(usize, usize)> {
    let mut seen = vec![false; out.len()];
    let mut swaps = Vec::new();
    for s in 0..out.len() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut t = s;
        loop {
            let src = out[t];
            if src == s {
                break;
            }
            swaps.push((t.min(src), t.max(src)));
            seen[src] = true;
            t = src;
        }
    }
    swaps
}
