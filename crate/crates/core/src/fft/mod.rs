//! DFT on `K^e` points over any field implementing [`FftField`].
//!
//! [`dft_general`] runs the six-step recursion: a cascade of stride
//! permutations, one pass of `K`-point base cases, then per level a twiddle
//! pass, a permutation, another base-case pass and a closing permutation.
//! Base cases are straight-line programs from [`BaseCase`].
//!
//! Fields with a cheap root `ρ` (multiplication by `ρ^s` costs `O(size)`,
//! e.g. `r` in GF(r^k + 1)) get a split twiddle: the factor `ω^E` is written
//! as `ω_base^a · ω^b` with `b < N/K`, the first part applied as a cheap
//! multiplication and the second from a short table.

mod base;
mod fields;
mod permute;

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{Duration, Instant};

use rand::Rng;

use crate::error::{Error, Result};
use crate::par;

pub use base::{dft2, BaseCase, BaseOp};
pub(crate) use base::BaseTwiddles;
pub use fields::{GfpBackend, GfpField};
pub use permute::{stride_permutation, stride_permutation_with, DEFAULT_BLOCK};

/// Base-case sizes with generated kernels.
pub const SUPPORTED_BASE_SIZES: [usize; 4] = [8, 16, 32, 64];

/// The operations the transforms need from a field.
pub trait FftField: Send + Sync {
    type Elem: Clone + Default + PartialEq + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_u64(&self, v: u64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem>;
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;

    /// A primitive `n`-th root of unity, `n` a power of two.
    fn root_of_unity(&self, n: u64, seed: u64) -> Result<Self::Elem>;

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        self.sub(&self.zero(), a)
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut acc = self.one();
        let mut b = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            e >>= 1;
            if e > 0 {
                b = self.mul(&b, &b);
            }
        }
        acc
    }

    /// A root `ρ` and its order, if multiplying by powers of `ρ` is cheap.
    fn cheap_root(&self) -> Option<(Self::Elem, usize)> {
        None
    }

    /// `x·ρ^s` for the root of [`FftField::cheap_root`].
    fn mul_cheap(&self, x: &Self::Elem, s: usize) -> Self::Elem {
        let (rho, _) = self.cheap_root().expect("field has no cheap root");
        self.mul(x, &self.pow(&rho, s as u64))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct CheapShift {
    /// `ω_base = ρ^shift`
    shift: usize,
    order: usize,
}

/// Precomputed data for one transform size and root.
#[derive(Debug, Clone)]
pub struct FftPlan<E> {
    k: usize,
    e: u32,
    n: usize,
    omega: E,
    omega_base: E,
    base: BaseCase,
    /// `ω_base^t`, `t < K`
    base_pows: Vec<E>,
    /// `ω^j` for `j < N/K` (cheap fields) or `j < N`
    twiddle_table: Vec<E>,
    cheap: Option<CheapShift>,
    n_inv: E,
}

impl<E: Clone + PartialEq + fmt::Debug> FftPlan<E> {
    /// Plan for `K^e` points at root `omega`, which must have order exactly
    /// `K^e`.
    pub fn new<F: FftField<Elem = E>>(field: &F, k: usize, e: u32, omega: E) -> Result<Self> {
        if !SUPPORTED_BASE_SIZES.contains(&k) {
            return Err(Error::UnsupportedSize(format!("base case K = {k}; expected one of {SUPPORTED_BASE_SIZES:?}")));
        }
        if e == 0 {
            return Err(Error::UnsupportedSize("exponent e must be at least 1".into()));
        }
        let n = k
            .checked_pow(e)
            .ok_or_else(|| Error::UnsupportedSize(format!("{k}^{e} overflows")))?;
        if field.pow(&omega, n as u64) != field.one() || field.pow(&omega, n as u64 / 2) != field.neg(&field.one()) {
            return Err(Error::NotPrimitive(format!("root is not a primitive {n}-th root of unity")));
        }
        let omega_base = field.pow(&omega, (n / k) as u64);
        let cheap = match field.cheap_root() {
            None => None,
            Some((_, order)) => {
                let mut acc = field.one();
                let mut shift = None;
                for s in 0..order {
                    if acc == omega_base {
                        shift = Some(s);
                        break;
                    }
                    acc = field.mul_cheap(&acc, 1);
                }
                match shift {
                    Some(shift) => Some(CheapShift { shift, order }),
                    None => {
                        return Err(Error::Incompatible(format!(
                            "base root is not a power of the field's cheap root (order {order}); K = {k}"
                        )))
                    }
                }
            }
        };
        let table_len = if cheap.is_some() { n / k } else { n };
        let twiddle_table = powers(field, &omega, table_len);
        let base_pows = powers(field, &omega_base, k);
        let n_inv = field.inv(&field.from_u64(n as u64))?;
        Ok(FftPlan { k, e, n, omega, omega_base, base: BaseCase::new(k)?, base_pows, twiddle_table, cheap, n_inv })
    }

    /// Plan with a root found by [`FftField::root_of_unity`].
    pub fn with_seed<F: FftField<Elem = E>>(field: &F, k: usize, e: u32, seed: u64) -> Result<Self> {
        let n = (k as u64)
            .checked_pow(e)
            .ok_or_else(|| Error::UnsupportedSize(format!("{k}^{e} overflows")))?;
        let omega = field.root_of_unity(n, seed)?;
        Self::new(field, k, e, omega)
    }

    /// The plan for `ω^{-1}`, used by [`dft_inverse`].
    pub fn inverse<F: FftField<Elem = E>>(&self, field: &F) -> Result<Self> {
        Self::new(field, self.k, self.e, field.inv(&self.omega)?)
    }

    pub fn base_size(&self) -> usize {
        self.k
    }

    pub fn exponent(&self) -> u32 {
        self.e
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn omega(&self) -> &E {
        &self.omega
    }

    pub fn omega_base(&self) -> &E {
        &self.omega_base
    }

    pub fn twiddle_table(&self) -> &[E] {
        &self.twiddle_table
    }

    /// `Some(s)` when `ω_base = ρ^s` for the field's cheap root.
    pub fn cheap_shift(&self) -> Option<usize> {
        self.cheap.map(|c| c.shift)
    }

    fn base_twiddles(&self) -> BaseTwiddles<'_, E> {
        match self.cheap {
            Some(CheapShift { shift, order }) => BaseTwiddles::Cheap { shift, order },
            None => BaseTwiddles::Table(&self.base_pows),
        }
    }

    /// `x·ω^exp`, `exp < N`, through the split cheap path when available.
    pub fn mul_omega_power<F: FftField<Elem = E>>(&self, field: &F, x: &E, exp: usize) -> E {
        let exp = exp % self.n;
        match self.cheap {
            Some(CheapShift { shift, order }) => {
                let block = self.n / self.k;
                let (a, b) = (exp / block, exp % block);
                let mut y = if a != 0 { field.mul_cheap(x, a * shift % order) } else { x.clone() };
                if b != 0 {
                    y = field.mul(&y, &self.twiddle_table[b]);
                }
                y
            }
            None if exp == 0 => x.clone(),
            None => field.mul(x, &self.twiddle_table[exp]),
        }
    }

    /// `v[j·m + i] *= (ω^stride)^{i·j}` for `i < m`, `j < n`.
    pub fn twiddle_apply<F: FftField<Elem = E>>(&self, field: &F, v: &mut [E], m: usize, n: usize, stride: usize) -> Result<()> {
        if v.len() != m * n {
            return Err(Error::LengthMismatch { expected: m * n, actual: v.len() });
        }
        for j in 1..n {
            let inc = j * stride % self.n;
            let mut exp = inc;
            for i in 1..m {
                if exp != 0 {
                    let slot = &mut v[j * m + i];
                    *slot = self.mul_omega_power(field, slot, exp);
                }
                exp += inc;
                if exp >= self.n {
                    exp -= self.n;
                }
            }
        }
        Ok(())
    }
}

fn powers<F: FftField>(field: &F, w: &F::Elem, len: usize) -> Vec<F::Elem> {
    let mut out = Vec::with_capacity(len);
    let mut acc = field.one();
    for _ in 0..len {
        out.push(acc.clone());
        acc = field.mul(&acc, w);
    }
    out
}

/// Twiddle pass with general multiplications only: `ω_i^{i·j}` built by
/// repeated multiplication, no tables, no cheap path.
pub fn twiddle_apply_general<F: FftField>(field: &F, v: &mut [F::Elem], m: usize, n: usize, omega_i: &F::Elem) -> Result<()> {
    if v.len() != m * n {
        return Err(Error::LengthMismatch { expected: m * n, actual: v.len() });
    }
    let mut row = field.one();
    for j in 0..n {
        let mut w = field.one();
        for i in 0..m {
            let slot = &mut v[j * m + i];
            *slot = field.mul(slot, &w);
            w = field.mul(&w, &row);
        }
        row = field.mul(&row, omega_i);
    }
    Ok(())
}

/// One `K`-point DFT at `omega_base` (order `K`), `K ∈ {8, 16, 32, 64}`.
pub fn dft_base<F: FftField>(field: &F, v: &mut [F::Elem], omega_base: &F::Elem) -> Result<()> {
    let k = v.len();
    if !SUPPORTED_BASE_SIZES.contains(&k) {
        return Err(Error::UnsupportedSize(format!("base case K = {k}; expected one of {SUPPORTED_BASE_SIZES:?}")));
    }
    let base = BaseCase::new(k)?;
    let pows = powers(field, omega_base, k);
    base.run(field, v, &BaseTwiddles::Table(&pows));
    Ok(())
}

/// Wall-clock split of one transform.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PhaseTimes {
    pub permutation: Duration,
    pub base_case: Duration,
    pub twiddle: Duration,
}

impl PhaseTimes {
    pub fn total(&self) -> Duration {
        self.permutation + self.base_case + self.twiddle
    }
}

impl std::ops::AddAssign for PhaseTimes {
    fn add_assign(&mut self, o: Self) {
        self.permutation += o.permutation;
        self.base_case += o.base_case;
        self.twiddle += o.twiddle;
    }
}

/// In-place `DFT_N(v)` at the plan's root.
pub fn dft_general<F: FftField>(field: &F, plan: &FftPlan<F::Elem>, v: &mut [F::Elem]) -> Result<()> {
    run(field, plan, v, &mut None)
}

/// [`dft_general`] with per-phase timings.
pub fn dft_general_profiled<F: FftField>(field: &F, plan: &FftPlan<F::Elem>, v: &mut [F::Elem]) -> Result<PhaseTimes> {
    let mut t = Some(PhaseTimes::default());
    run(field, plan, v, &mut t)?;
    Ok(t.unwrap_or_default())
}

/// In-place inverse: `dft_general` with the inverse plan, then scale by
/// `1/N`. `inverse_plan` must come from [`FftPlan::inverse`].
pub fn dft_inverse<F: FftField>(field: &F, inverse_plan: &FftPlan<F::Elem>, v: &mut [F::Elem]) -> Result<()> {
    dft_general(field, inverse_plan, v)?;
    let n_inv = &inverse_plan.n_inv;
    par::for_each_chunk_init(v, 1, || (), |_, _, c| c[0] = field.mul(&c[0], n_inv));
    Ok(())
}

fn timed<R>(slot: Option<&mut Duration>, f: impl FnOnce() -> R) -> R {
    match slot {
        Some(d) => {
            let start = Instant::now();
            let r = f();
            *d += start.elapsed();
            r
        }
        None => f(),
    }
}

fn run<F: FftField>(field: &F, plan: &FftPlan<F::Elem>, v: &mut [F::Elem], times: &mut Option<PhaseTimes>) -> Result<()> {
    if v.len() != plan.n {
        return Err(Error::LengthMismatch { expected: plan.n, actual: v.len() });
    }
    let k = plan.k;
    let e = plan.e as usize;
    let tw = plan.base_twiddles();
    let base_pass = |v: &mut [F::Elem]| {
        par::for_each_chunk_init(v, k, || (), |_, _, c| plan.base.run(field, c, &tw));
    };
    let perm_pass = |v: &mut [F::Elem], chunk: usize, m: usize, n: usize| {
        par::for_each_chunk_init(v, chunk, Vec::new, |s, _, c| permute::permute_in_place(c, m, n, s));
    };

    // step 1: permutation cascade
    for i in 0..e.saturating_sub(1) {
        let chunk = k.pow((e - i) as u32);
        let m = k.pow((e - i - 1) as u32);
        timed(times.as_mut().map(|t| &mut t.permutation), || perm_pass(v, chunk, k, m));
    }
    // step 2: base cases
    timed(times.as_mut().map(|t| &mut t.base_case), || base_pass(v));
    // steps 3-6, innermost level first
    for i in (0..e.saturating_sub(1)).rev() {
        let chunk = k.pow((e - i) as u32);
        let m = k.pow((e - i - 1) as u32);
        let stride = k.pow(i as u32);
        timed(times.as_mut().map(|t| &mut t.twiddle), || {
            par::for_each_chunk_init(v, chunk, || (), |_, _, c| {
                plan.twiddle_apply(field, c, m, k, stride).expect("chunk length is m·K")
            })
        });
        timed(times.as_mut().map(|t| &mut t.permutation), || perm_pass(v, chunk, m, k));
        timed(times.as_mut().map(|t| &mut t.base_case), || base_pass(v));
        timed(times.as_mut().map(|t| &mut t.permutation), || perm_pass(v, chunk, k, m));
    }
    Ok(())
}

/// Wraps a field and counts general and cheap multiplications.
#[derive(Debug)]
pub struct CountingField<F> {
    inner: F,
    muls: AtomicU64,
    cheap: AtomicU64,
}

impl<F> CountingField<F> {
    pub fn new(inner: F) -> Self {
        CountingField { inner, muls: AtomicU64::new(0), cheap: AtomicU64::new(0) }
    }

    pub fn inner(&self) -> &F {
        &self.inner
    }

    /// `(general, cheap)` multiplications since the last reset.
    pub fn counts(&self) -> (u64, u64) {
        (self.muls.load(Ordering::Relaxed), self.cheap.load(Ordering::Relaxed))
    }

    pub fn reset(&self) {
        self.muls.store(0, Ordering::Relaxed);
        self.cheap.store(0, Ordering::Relaxed);
    }
}

impl<F: FftField> FftField for CountingField<F> {
    type Elem = F::Elem;

    fn zero(&self) -> F::Elem {
        self.inner.zero()
    }
    fn one(&self) -> F::Elem {
        self.inner.one()
    }
    fn from_u64(&self, v: u64) -> F::Elem {
        self.inner.from_u64(v)
    }
    fn add(&self, a: &F::Elem, b: &F::Elem) -> F::Elem {
        self.inner.add(a, b)
    }
    fn sub(&self, a: &F::Elem, b: &F::Elem) -> F::Elem {
        self.inner.sub(a, b)
    }
    fn mul(&self, a: &F::Elem, b: &F::Elem) -> F::Elem {
        self.muls.fetch_add(1, Ordering::Relaxed);
        self.inner.mul(a, b)
    }
    fn inv(&self, a: &F::Elem) -> Result<F::Elem> {
        self.inner.inv(a)
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> F::Elem {
        self.inner.random(rng)
    }
    fn root_of_unity(&self, n: u64, seed: u64) -> Result<F::Elem> {
        self.inner.root_of_unity(n, seed)
    }
    fn neg(&self, a: &F::Elem) -> F::Elem {
        self.inner.neg(a)
    }
    fn cheap_root(&self) -> Option<(F::Elem, usize)> {
        self.inner.cheap_root()
    }
    fn mul_cheap(&self, x: &F::Elem, s: usize) -> F::Elem {
        self.cheap.fetch_add(1, Ordering::Relaxed);
        self.inner.mul_cheap(x, s)
    }
}
