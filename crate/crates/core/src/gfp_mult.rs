//! Multiplication of arbitrary elements of GF(r^k + 1).
//!
//! The fast path treats both operands as polynomials in `r` and computes
//! their product modulo `R^k + 1` exactly over the integers: two negacyclic
//! convolutions modulo word primes `p1`, `p2`, a CRT lift of each coefficient
//! into `(-p1·p2/2, p1·p2/2)`, and a split of each coefficient into
//! `l + h·r + c·r²`. The three digit vectors are then recombined with
//! field additions and two cyclic shifts. This needs `k·r² ≤ (p1·p2 - 1)/2`
//! (see [`check_prime_compat`]).
//!
//! [`BigintMultiplier`] is the straightforward alternative: evaluate at `r`,
//! multiply big integers, reduce, re-encode.

use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::fft::{BaseCase, BaseTwiddles};
use crate::gfp_field::{
    gfp_encode_uint, reduce_signed_digits, GfpElement, GfpMul,
    GfpParams,
};
use crate::word_field::{wide_mul, wide_mul_hi128, MontResidue, WidePair, WordPrime, P1, P2};

/// Seed for the roots picked by the convolution plans.
const PLAN_SEED: u64 = 0x0c0f_fee5;

// ---- CRT ----

/// The two convolution primes with everything the CRT lift needs.
#[derive(Debug, Clone)]
pub struct CrtParams {
    p1: WordPrime,
    p2: WordPrime,
    m1: i128,
    m2: i128,
    /// `m1 mod p2`
    m1_mod_p2: u64,
    /// `m2 mod p1`
    m2_mod_p1: u64,
    /// `floor(2^128 / p1)`
    p1_recip: WidePair,
    p2_recip: WidePair,
    p1p2: WidePair,
    half_range: WidePair,
}

impl CrtParams {
    pub fn new(p1: u64, p2: u64) -> Result<Self> {
        let (w1, w2) = (WordPrime::new(p1)?, WordPrime::new(p2)?);
        if p1 == p2 {
            return Err(Error::InvalidParams("CRT primes must differ".into()));
        }
        let (g, m1, m2) = ext_gcd(p1 as i128, p2 as i128);
        if g != 1 || p1 as i128 * m1 + p2 as i128 * m2 != 1 {
            return Err(Error::InvalidParams(format!("no Bézout pair for {p1}, {p2}")));
        }
        let p1p2 = p1 as u128 * p2 as u128;
        Ok(CrtParams {
            p1: w1,
            p2: w2,
            m1,
            m2,
            m1_mod_p2: m1.rem_euclid(p2 as i128) as u64,
            m2_mod_p1: m2.rem_euclid(p1 as i128) as u64,
            // odd p never divides 2^128, so this equals floor(2^128 / p)
            p1_recip: WidePair::from_u128(u128::MAX / p1 as u128),
            p2_recip: WidePair::from_u128(u128::MAX / p2 as u128),
            p1p2: WidePair::from_u128(p1p2),
            half_range: WidePair::from_u128((p1p2 - 1) / 2),
        })
    }

    pub fn p1(&self) -> &WordPrime {
        &self.p1
    }

    pub fn p2(&self) -> &WordPrime {
        &self.p2
    }

    /// Bézout coefficients with `p1·m1 + p2·m2 = 1`.
    pub fn bezout(&self) -> (i128, i128) {
        (self.m1, self.m2)
    }

    pub fn modulus(&self) -> WidePair {
        self.p1p2
    }

    /// `(p1·p2 - 1) / 2`
    pub fn half_range(&self) -> WidePair {
        self.half_range
    }
}

impl Default for CrtParams {
    fn default() -> Self {
        CrtParams::new(P1, P2).expect("default primes are valid")
    }
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    (r0, s0, t0)
}

/// A two-word magnitude with a sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SignedDoubleWord {
    pub magnitude: WidePair,
    pub negative: bool,
}

impl SignedDoubleWord {
    /// Exact value; magnitudes produced by [`crt_combine`] stay below 2^127.
    pub fn to_i128(self) -> i128 {
        let m = self.magnitude.to_u128() as i128;
        if self.negative {
            -m
        } else {
            m
        }
    }
}

/// `a·b mod q` with a quotient estimate from the precomputed reciprocal.
#[inline]
fn mul_mod_recip(a: u64, b: u64, q: u64, recip: WidePair) -> u64 {
    let t = wide_mul(a, b);
    let est = wide_mul_hi128(t, recip);
    let (mut rem, _) = t.overflowing_sub(wide_mul(est, q));
    let qw = WidePair::new(q, 0);
    while rem >= qw {
        rem = rem.overflowing_sub(qw).0;
    }
    rem.lo
}

/// The unique `v` in the symmetric range with `v ≡ a1 (mod p1)` and
/// `v ≡ a2 (mod p2)`, as `((a2·m1) mod p2)·p1 + ((a1·m2) mod p1)·p2`
/// reduced once.
pub fn crt_combine(a1: u64, a2: u64, crt: &CrtParams) -> Result<SignedDoubleWord> {
    let (p1, p2) = (crt.p1.modulus(), crt.p2.modulus());
    if a1 >= p1 || a2 >= p2 {
        return Err(Error::OutOfRange(format!("residues ({a1}, {a2}) not reduced mod ({p1}, {p2})")));
    }
    Ok(crt_combine_unchecked(a1, a2, crt))
}

#[inline]
fn crt_combine_unchecked(a1: u64, a2: u64, crt: &CrtParams) -> SignedDoubleWord {
    let (p1, p2) = (crt.p1.modulus(), crt.p2.modulus());
    let t1 = mul_mod_recip(a1, crt.m2_mod_p1, p1, crt.p1_recip);
    let t2 = mul_mod_recip(a2, crt.m1_mod_p2, p2, crt.p2_recip);
    let (mut v, _) = wide_mul(t2, p1).overflowing_add(wide_mul(t1, p2));
    if v >= crt.p1p2 {
        v = v.overflowing_sub(crt.p1p2).0;
    }
    if v > crt.half_range {
        SignedDoubleWord { magnitude: crt.p1p2.overflowing_sub(v).0, negative: true }
    } else {
        SignedDoubleWord { magnitude: v, negative: false }
    }
}

// ---- division by r and (l, h, c) ----

/// Division by a fixed radix through its 128-bit reciprocal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RadixDivisor {
    r: u64,
    /// `floor((2^128 - 1) / r)`
    recip: WidePair,
    /// `2^64 = q2·r + m2`
    q2: u64,
    m2: u64,
}

impl RadixDivisor {
    pub fn new(r: u64) -> Result<Self> {
        if r < 2 {
            return Err(Error::InvalidParams(format!("radix {r} must be at least 2")));
        }
        let recip = WidePair::from_u128(u128::MAX / r as u128);
        let mut d = RadixDivisor { r, recip, q2: 0, m2: 0 };
        let (q2, m2) = d.div(WidePair::new(0, 1))?;
        d.q2 = q2;
        d.m2 = m2;
        Ok(d)
    }

    pub fn radix(&self) -> u64 {
        self.r
    }

    /// `(q, m)` with `x = q·r + m`, `m < r`; fails when `q` needs two words.
    #[inline]
    pub fn div(&self, x: WidePair) -> Result<(u64, u64)> {
        if x.hi >= self.r {
            return Err(Error::OutOfRange(format!("quotient of {x} by {} exceeds one word", self.r)));
        }
        Ok(self.div_unchecked(x))
    }

    #[inline]
    fn div_unchecked(&self, x: WidePair) -> (u64, u64) {
        let mut q = wide_mul_hi128(x, self.recip);
        let mut rem = x.to_u128() - q as u128 * self.r as u128;
        while rem >= self.r as u128 {
            rem -= self.r as u128;
            q += 1;
        }
        (q, rem as u64)
    }

    /// Two-word quotient for any 128-bit input.
    #[inline]
    fn div_wide(&self, x: u128) -> (u128, u64) {
        let x = WidePair::from_u128(x);
        if x.hi < self.r {
            let (q, m) = self.div_unchecked(x);
            return (q as u128, m);
        }
        let (qa, ma) = self.div_unchecked(WidePair::new(x.hi, 0));
        let (qb, m) = self.div_unchecked(WidePair::new(x.lo, ma));
        (((qa as u128) << 64) + qb as u128, m)
    }
}

/// `(q, m)` with `x = q·r + m`.
pub fn div_by_const_r(x: WidePair, r: u64) -> Result<(u64, u64)> {
    RadixDivisor::new(r)?.div(x)
}

/// `s = l + h·r + c·r²` with `l, h < r`; `negative` carries the sign of the
/// coefficient the triple was taken from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LhcTriple {
    pub l: u64,
    pub h: u64,
    pub c: u64,
    pub negative: bool,
}

impl LhcTriple {
    /// `l + h·r + c·r²` as an unsigned big integer.
    pub fn recompose(&self, r: u64) -> BigUint {
        let r = BigUint::from(r);
        BigUint::from(self.l) + BigUint::from(self.h) * &r + BigUint::from(self.c) * &r * &r
    }
}

/// Splits `s = s1·2^64 + s0` by dividing `s0`, `s1` and `2^64` by `r` and
/// cross-multiplying the parts.
pub fn lhc_decompose(s: WidePair, div: &RadixDivisor) -> Result<LhcTriple> {
    let r = div.r as u128;
    let (q0, m0) = div.div_unchecked(WidePair::new(s.lo, 0));
    let (q1, m1) = div.div_wide(s.hi as u128);
    let (q2, m2) = (div.q2 as u128, div.m2 as u128);
    // s = (q1·r + m1)(q2·r + m2) + q0·r + m0
    let l0 = m0 as u128 + m1 as u128 * m2;
    let h0 = q0 as u128 + m1 as u128 * q2 + m2 * q1;
    let c0 = q1 * q2;
    let (carry_l, l) = div.div_wide(l0);
    let (carry_h, h) = div.div_wide(h0 + carry_l);
    let c = c0 + carry_h;
    debug_assert!(l < div.r && (h as u128) < r);
    let c = u64::try_from(c).map_err(|_| Error::OutOfRange(format!("{s} is too large to split by radix {r}")))?;
    Ok(LhcTriple { l, h, c, negative: false })
}

// ---- convolutions ----

/// Plan for length-`n` transforms over one word prime: the unrolled base
/// case when `n ∈ {8, 16, 32, 64}`, a quadratic DFT otherwise.
#[derive(Debug, Clone)]
struct WordDft {
    n: usize,
    base: Option<BaseCase>,
    /// `ω^j`, `j < n`
    pows: Vec<MontResidue>,
    inv_pows: Vec<MontResidue>,
}

impl WordDft {
    fn new(q: &WordPrime, n: usize, omega: MontResidue) -> Result<Self> {
        let base = if crate::fft::SUPPORTED_BASE_SIZES.contains(&n) { Some(BaseCase::new(n)?) } else { None };
        let omega_inv = q.inv(omega)?;
        let pows = word_powers(q, omega, n);
        let inv_pows = word_powers(q, omega_inv, n);
        Ok(WordDft { n, base, pows, inv_pows })
    }

    fn transform(&self, q: &WordPrime, v: &mut [MontResidue], inverse: bool, scratch: &mut Vec<MontResidue>) {
        let pows = if inverse { &self.inv_pows } else { &self.pows };
        match &self.base {
            Some(b) => b.run(q, v, &BaseTwiddles::Table(pows)),
            None => {
                scratch.clear();
                scratch.extend_from_slice(v);
                for (i, out) in v.iter_mut().enumerate() {
                    let mut acc = q.zero();
                    for (j, x) in scratch.iter().enumerate() {
                        acc = q.add(acc, q.mont_mul(*x, pows[i * j % self.n]));
                    }
                    *out = acc;
                }
            }
        }
    }
}

fn word_powers(q: &WordPrime, w: MontResidue, n: usize) -> Vec<MontResidue> {
    let mut out = Vec::with_capacity(n);
    let mut acc = q.one();
    for _ in 0..n {
        out.push(acc);
        acc = q.mont_mul(acc, w);
    }
    out
}

/// Product modulo `R^k + 1` over one word prime, weighted by powers of a
/// primitive `2k`-th root `θ` so that a cyclic transform of length `k`
/// (at `ω = θ²`) does the job.
#[derive(Debug, Clone)]
pub struct NegacyclicPlan {
    q: WordPrime,
    k: usize,
    dft: WordDft,
    /// `θ^i`
    weights: Vec<MontResidue>,
    /// `θ^{-i} / k`
    unweights: Vec<MontResidue>,
}

impl NegacyclicPlan {
    pub fn new(q: WordPrime, k: usize) -> Result<Self> {
        if k == 0 || !k.is_power_of_two() || (q.modulus() - 1) % (2 * k as u64) != 0 {
            return Err(Error::UnsupportedSize(format!("2k = {} must divide {} - 1", 2 * k, q.modulus())));
        }
        let theta = q.primitive_root(2 * k as u64, PLAN_SEED)?;
        let omega = q.mont_mul(theta, theta);
        let k_inv = q.inv(q.convert_in(k as u64))?;
        let theta_inv = q.inv(theta)?;
        let weights = word_powers(&q, theta, k);
        let unweights = word_powers(&q, theta_inv, k).into_iter().map(|w| q.mont_mul(w, k_inv)).collect();
        Ok(NegacyclicPlan { q, k, dft: WordDft::new(&q, k, omega)?, weights, unweights })
    }

    pub fn prime(&self) -> &WordPrime {
        &self.q
    }

    pub fn len(&self) -> usize {
        self.k
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `x := x·y mod (R^k + 1)`, everything in Montgomery form.
    pub fn convolve_mont(&self, x: &mut [MontResidue], y: &mut [MontResidue], scratch: &mut Vec<MontResidue>) {
        let q = &self.q;
        for (v, w) in x.iter_mut().zip(&self.weights) {
            *v = q.mont_mul(*v, *w);
        }
        for (v, w) in y.iter_mut().zip(&self.weights) {
            *v = q.mont_mul(*v, *w);
        }
        self.dft.transform(q, x, false, scratch);
        self.dft.transform(q, y, false, scratch);
        for (a, b) in x.iter_mut().zip(y.iter()) {
            *a = q.mont_mul(*a, *b);
        }
        self.dft.transform(q, x, true, scratch);
        for (v, w) in x.iter_mut().zip(&self.unweights) {
            *v = q.mont_mul(*v, *w);
        }
    }

    /// Standard-form wrapper around [`NegacyclicPlan::convolve_mont`].
    pub fn convolve(&self, x: &[u64], y: &[u64]) -> Result<Vec<u64>> {
        check_len(self.k, x.len())?;
        check_len(self.k, y.len())?;
        let mut a: Vec<_> = x.iter().map(|&v| self.q.convert_in(v)).collect();
        let mut b: Vec<_> = y.iter().map(|&v| self.q.convert_in(v)).collect();
        self.convolve_mont(&mut a, &mut b, &mut Vec::new());
        Ok(a.into_iter().map(|v| self.q.convert_out(v)).collect())
    }
}

fn check_len(expected: usize, actual: usize) -> Result<()> {
    if expected != actual {
        return Err(Error::LengthMismatch { expected, actual });
    }
    Ok(())
}

/// Product modulo `x^n - 1` over one word prime.
#[derive(Debug, Clone)]
pub struct CyclicPlan {
    q: WordPrime,
    n: usize,
    dft: WordDft,
    n_inv: MontResidue,
}

impl CyclicPlan {
    pub fn new(q: WordPrime, n: usize) -> Result<Self> {
        if n == 0 || !n.is_power_of_two() || (q.modulus() - 1) % n as u64 != 0 {
            return Err(Error::UnsupportedSize(format!("n = {n} must be a power of two dividing {} - 1", q.modulus())));
        }
        let omega = q.primitive_root(n as u64, PLAN_SEED)?;
        let n_inv = q.inv(q.convert_in(n as u64))?;
        Ok(CyclicPlan { q, n, dft: WordDft::new(&q, n, omega)?, n_inv })
    }

    pub fn convolve(&self, f: &[u64], g: &[u64]) -> Result<Vec<u64>> {
        check_len(self.n, f.len())?;
        check_len(self.n, g.len())?;
        let q = &self.q;
        let mut a: Vec<_> = f.iter().map(|&v| q.convert_in(v)).collect();
        let mut b: Vec<_> = g.iter().map(|&v| q.convert_in(v)).collect();
        let mut scratch = Vec::new();
        self.dft.transform(q, &mut a, false, &mut scratch);
        self.dft.transform(q, &mut b, false, &mut scratch);
        for (x, y) in a.iter_mut().zip(&b) {
            *x = q.mont_mul(*x, *y);
        }
        self.dft.transform(q, &mut a, true, &mut scratch);
        Ok(a.into_iter().map(|v| q.convert_out(q.mont_mul(v, self.n_inv))).collect())
    }
}

/// `x·y mod (R^k + 1)` over `q`, standard form in and out.
pub fn negacyclic_convolution(x: &[u64], y: &[u64], q: &WordPrime) -> Result<Vec<u64>> {
    NegacyclicPlan::new(*q, x.len())?.convolve(x, y)
}

/// `f·g mod (x^n - 1)` over `q`, standard form in and out.
pub fn cyclic_convolution(f: &[u64], g: &[u64], q: &WordPrime) -> Result<Vec<u64>> {
    CyclicPlan::new(*q, f.len())?.convolve(f, g)
}

// ---- compatibility ----

/// Outcome of [`check_prime_compat`].
#[derive(Debug, Clone, PartialEq)]
pub struct CompatReport {
    /// `k·r² ≤ (p1·p2 - 1)/2`
    pub bound_ok: bool,
    /// `2k | p1 - 1` and `2k | p2 - 1`
    pub divisibility_ok: bool,
    /// `log2((p1·p2 - 1)/2) - log2(k·r²)`; negative when the bound fails.
    pub slack_bits: f64,
}

impl CompatReport {
    pub fn passes(&self) -> bool {
        self.bound_ok && self.divisibility_ok
    }
}

/// Can the convolution path represent every product coefficient for these
/// parameters?
pub fn check_prime_compat(params: &GfpParams, crt: &CrtParams) -> CompatReport {
    let k = params.k() as u128;
    let r = params.r() as u128;
    let half = crt.half_range.to_u128();
    let bound = (r * r).checked_mul(k);
    let bound_ok = bound.is_some_and(|b| b <= half);
    let two_k = 2 * params.k() as u64;
    let divisibility_ok = (crt.p1.modulus() - 1) % two_k == 0 && (crt.p2.modulus() - 1) % two_k == 0;
    let log_bound = (k as f64).log2() + 2.0 * (r as f64).log2();
    CompatReport { bound_ok, divisibility_ok, slack_bits: (half as f64).log2() - log_bound }
}

// ---- multipliers ----

/// Time spent in each stage of [`FftMultiplier::mul_profiled`].
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct StepTimes {
    pub convert_in: Duration,
    pub convolution: Duration,
    pub convert_out: Duration,
    pub crt: Duration,
    pub lhc: Duration,
    pub final_step: Duration,
}

impl StepTimes {
    pub fn total(&self) -> Duration {
        self.convert_in + self.convolution + self.convert_out + self.crt + self.lhc + self.final_step
    }

    /// The six stages in pipeline order, with names.
    pub fn named(&self) -> [(&'static str, Duration); 6] {
        [
            ("ConvertIn", self.convert_in),
            ("Convolution", self.convolution),
            ("ConvertOut", self.convert_out),
            ("CRT", self.crt),
            ("LHC", self.lhc),
            ("FinalStep", self.final_step),
        ]
    }
}

impl std::ops::AddAssign for StepTimes {
    fn add_assign(&mut self, o: Self) {
        self.convert_in += o.convert_in;
        self.convolution += o.convolution;
        self.convert_out += o.convert_out;
        self.crt += o.crt;
        self.lhc += o.lhc;
        self.final_step += o.final_step;
    }
}

/// Convolution + CRT + (l, h, c) multiplier.
#[derive(Debug, Clone)]
pub struct FftMultiplier {
    params: GfpParams,
    crt: CrtParams,
    conv1: NegacyclicPlan,
    conv2: NegacyclicPlan,
    div: RadixDivisor,
    /// `k·r²`, the largest coefficient magnitude the product can have
    coeff_bound: u128,
}

impl FftMultiplier {
    /// With the default primes.
    pub fn new(params: &GfpParams) -> Result<Self> {
        Self::with_crt(params, CrtParams::default())
    }

    pub fn with_crt(params: &GfpParams, crt: CrtParams) -> Result<Self> {
        let report = check_prime_compat(params, &crt);
        if !report.passes() {
            return Err(Error::Incompatible(format!(
                "k = {}, r = {}: coefficient bound {} (slack {:.2} bits), 2k | p-1: {}",
                params.k(),
                params.r(),
                if report.bound_ok { "ok" } else { "exceeded" },
                report.slack_bits,
                report.divisibility_ok
            )));
        }
        let k = params.k();
        let r = params.r() as u128;
        Ok(FftMultiplier {
            params: params.clone(),
            conv1: NegacyclicPlan::new(*crt.p1(), k)?,
            conv2: NegacyclicPlan::new(*crt.p2(), k)?,
            crt,
            div: RadixDivisor::new(params.r())?,
            coeff_bound: r * r * k as u128,
        })
    }

    pub fn crt(&self) -> &CrtParams {
        &self.crt
    }

    /// Checks both inputs before multiplying.
    pub fn try_mul(&self, x: &GfpElement, y: &GfpElement) -> Result<GfpElement> {
        self.params.check(x)?;
        self.params.check(y)?;
        Ok(self.run(x, y, None))
    }

    pub fn mul_profiled(&self, x: &GfpElement, y: &GfpElement, times: &mut StepTimes) -> GfpElement {
        self.run(x, y, Some(times))
    }

    fn run(&self, x: &GfpElement, y: &GfpElement, mut times: Option<&mut StepTimes>) -> GfpElement {
        let params = &self.params;
        let k = params.k();
        let (q1, q2) = (self.conv1.prime(), self.conv2.prime());
        let mut clock = times.as_ref().map(|_| Instant::now());
        let mut lap = |slot: fn(&mut StepTimes) -> &mut Duration, times: &mut Option<&mut StepTimes>| {
            if let (Some(t), Some(c)) = (times.as_deref_mut(), clock.as_mut()) {
                let now = Instant::now();
                *slot(t) += now - *c;
                *c = now;
            }
        };

        let (xd, yd) = (x.digits(), y.digits());
        let mut x1: Vec<_> = xd.iter().map(|&d| q1.convert_in(d)).collect();
        let mut y1: Vec<_> = yd.iter().map(|&d| q1.convert_in(d)).collect();
        let mut x2: Vec<_> = xd.iter().map(|&d| q2.convert_in(d)).collect();
        let mut y2: Vec<_> = yd.iter().map(|&d| q2.convert_in(d)).collect();
        lap(|t| &mut t.convert_in, &mut times);

        let mut scratch = Vec::new();
        self.conv1.convolve_mont(&mut x1, &mut y1, &mut scratch);
        self.conv2.convolve_mont(&mut x2, &mut y2, &mut scratch);
        lap(|t| &mut t.convolution, &mut times);

        let a1: Vec<u64> = x1.iter().map(|&v| q1.convert_out(v)).collect();
        let a2: Vec<u64> = x2.iter().map(|&v| q2.convert_out(v)).collect();
        lap(|t| &mut t.convert_out, &mut times);

        let u: Vec<SignedDoubleWord> = a1.iter().zip(&a2).map(|(&a, &b)| crt_combine_unchecked(a, b, &self.crt)).collect();
        for v in &u {
            assert!(v.magnitude.to_u128() <= self.coeff_bound, "product coefficient exceeds k·r²");
        }
        lap(|t| &mut t.crt, &mut times);

        let triples: Vec<LhcTriple> = u
            .iter()
            .map(|v| {
                let mut t = lhc_decompose(v.magnitude, &self.div).expect("coefficient below k·r²");
                t.negative = v.negative;
                t
            })
            .collect();
        lap(|t| &mut t.lhc, &mut times);

        // l at i, h at i+1, c at i+2; each wrap past r^k flips the sign
        let mut acc = vec![0i128; k];
        for (i, t) in triples.iter().enumerate() {
            let sign: i128 = if t.negative { -1 } else { 1 };
            for (j, d) in [(i, t.l), (i + 1, t.h), (i + 2, t.c)] {
                let wrapped = (j / k) % 2 == 1;
                acc[j % k] += if wrapped { -sign } else { sign } * d as i128;
            }
        }
        let z = reduce_signed_digits(params, &acc);
        lap(|t| &mut t.final_step, &mut times);
        z
    }
}

impl GfpMul for FftMultiplier {
    fn params(&self) -> &GfpParams {
        &self.params
    }

    fn mul(&self, x: &GfpElement, y: &GfpElement) -> GfpElement {
        self.run(x, y, None)
    }
}

/// Evaluate at `r`, multiply as integers, reduce mod `p`, re-encode.
#[derive(Debug, Clone)]
pub struct BigintMultiplier {
    params: GfpParams,
    modulus: BigUint,
}

impl BigintMultiplier {
    pub fn new(params: &GfpParams) -> Self {
        BigintMultiplier { params: params.clone(), modulus: params.modulus() }
    }

    fn horner(&self, x: &GfpElement) -> BigUint {
        let r = self.params.r();
        x.digits().iter().rev().fold(BigUint::zero(), |acc, &d| acc * r + d)
    }
}

impl GfpMul for BigintMultiplier {
    fn params(&self) -> &GfpParams {
        &self.params
    }

    fn mul(&self, x: &GfpElement, y: &GfpElement) -> GfpElement {
        let prod = self.horner(x) * self.horner(y) % &self.modulus;
        gfp_encode_uint(&self.params, &prod)
    }
}

/// One-off convolution-path product; builds the plans on every call.
pub fn gfp_mul_fft(params: &GfpParams, crt: &CrtParams, x: &GfpElement, y: &GfpElement) -> Result<GfpElement> {
    FftMultiplier::with_crt(params, crt.clone())?.try_mul(x, y)
}

/// One-off big-integer product.
pub fn gfp_mul_bigint(params: &GfpParams, x: &GfpElement, y: &GfpElement) -> Result<GfpElement> {
    params.check(x)?;
    params.check(y)?;
    Ok(BigintMultiplier::new(params).mul(x, y))
}
