//! Word-size prime fields in Montgomery form, together with the double-word
//! helpers (128-bit products, high halves of 256-bit products, reciprocal
//! remainders) that the CRT and (l, h, c) stages are built from.
//!
//! The Montgomery radix is fixed at `R = 2^64`. Moduli are restricted to odd
//! primes below `2^63` so the REDC accumulator `a·b + q·m` always fits in 128
//! bits.

use std::cmp::Ordering;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// First default convolution prime, `29·2^57 + 1`.
pub const P1: u64 = 4179340454199820289;
/// Second default convolution prime, `69·2^55 + 1`.
pub const P2: u64 = 2485986994308513793;

/// An unsigned double word `hi·2^64 + lo`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct WidePair {
    pub lo: u64,
    pub hi: u64,
}

impl WidePair {
    pub const ZERO: WidePair = WidePair { lo: 0, hi: 0 };

    pub const fn new(lo: u64, hi: u64) -> Self {
        WidePair { lo, hi }
    }

    pub const fn from_u128(v: u128) -> Self {
        WidePair { lo: v as u64, hi: (v >> 64) as u64 }
    }

    pub const fn to_u128(self) -> u128 {
        ((self.hi as u128) << 64) | self.lo as u128
    }

    /// Two-word add with carry; the returned flag is the carry out of bit 127.
    pub fn overflowing_add(self, rhs: WidePair) -> (WidePair, bool) {
        let (lo, c0) = self.lo.overflowing_add(rhs.lo);
        let (hi, c1) = self.hi.overflowing_add(rhs.hi);
        let (hi, c2) = hi.overflowing_add(c0 as u64);
        (WidePair { lo, hi }, c1 | c2)
    }

    /// Two-word subtract with borrow; the returned flag is the borrow out.
    pub fn overflowing_sub(self, rhs: WidePair) -> (WidePair, bool) {
        let (lo, b0) = self.lo.overflowing_sub(rhs.lo);
        let (hi, b1) = self.hi.overflowing_sub(rhs.hi);
        let (hi, b2) = hi.overflowing_sub(b0 as u64);
        (WidePair { lo, hi }, b1 | b2)
    }
}

impl Ord for WidePair {
    fn cmp(&self, other: &Self) -> Ordering {
        self.hi.cmp(&other.hi).then(self.lo.cmp(&other.lo))
    }
}

impl PartialOrd for WidePair {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for WidePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_u128())
    }
}

/// Full 64×64→128 product.
#[inline(always)]
pub fn wide_mul(a: u64, b: u64) -> WidePair {
    WidePair::from_u128(a as u128 * b as u128)
}

/// `floor(x·y / 2^128)` truncated to one word.
///
/// Follows the three-cross-product dataflow: the high half of `x0·y0`, both
/// middle products split into halves, and `x1·y1` wrapping into the result.
/// Exact whenever the true 256-bit product is below `2^192`.
#[inline]
pub fn wide_mul_hi128(x: WidePair, y: WidePair) -> u64 {
    let s0 = wide_mul(x.lo, y.lo).hi;
    let m1 = wide_mul(x.hi, y.lo);
    let m2 = wide_mul(x.lo, y.hi);
    let low_sum = s0 as u128 + m1.lo as u128 + m2.lo as u128;
    m1.hi
        .wrapping_add(m2.hi)
        .wrapping_add(x.hi.wrapping_mul(y.hi))
        .wrapping_add((low_sum >> 64) as u64)
}

/// `a mod n` through a floating-point reciprocal.
///
/// The float quotient can be off by far more than one when `n` is small
/// relative to `a`, so the residual is refined once more with the same
/// reciprocal before the final conditional correction.
pub fn word_mod_reciprocal(a: u64, n: u64) -> u64 {
    assert!(n != 0, "modulus must be nonzero");
    let ninv = 1.0 / n as f64;
    let n_wide = n as i128;
    let q = (a as f64 * ninv) as u64;
    let mut rem = a as i128 - q as i128 * n_wide;
    let q2 = (rem as f64 * ninv) as i128;
    rem -= q2 * n_wide;
    while rem < 0 {
        rem += n_wide;
    }
    while rem >= n_wide {
        rem -= n_wide;
    }
    rem as u64
}

fn pow_mod_u64(base: u64, mut e: u64, m: u64) -> u64 {
    let m = m as u128;
    let mut acc = 1u128 % m;
    let mut b = base as u128 % m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc as u64
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &WITNESSES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = (x as u128 * x as u128 % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A residue in Montgomery form: the stored word `v` stands for `v·2^-64 mod q`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct MontResidue(u64);

impl MontResidue {
    /// The raw Montgomery word, always below the modulus it was produced for.
    pub fn value(self) -> u64 {
        self.0
    }
}

/// A word-size prime with its Montgomery constants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WordPrime {
    q: u64,
    /// `-q^{-1} mod 2^64`
    q_neg_inv: u64,
    /// `2^128 mod q`
    r2: u64,
    /// `2^64 mod q`
    one_mont: u64,
}

impl WordPrime {
    pub fn new(q: u64) -> Result<Self> {
        if q < 3 || q & 1 == 0 {
            return Err(Error::InvalidParams(format!("modulus {q} must be an odd prime")));
        }
        if q >= 1 << 63 {
            return Err(Error::InvalidParams(format!("modulus {q} must be below 2^63")));
        }
        if !is_prime_u64(q) {
            return Err(Error::InvalidParams(format!("modulus {q} is not prime")));
        }
        // Newton iteration doubles the number of correct low bits each round.
        let mut inv = q;
        for _ in 0..5 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(q.wrapping_mul(inv)));
        }
        let q_neg_inv = inv.wrapping_neg();
        assert_eq!(q.wrapping_mul(q_neg_inv), u64::MAX, "q·q' must be -1 mod 2^64");
        let one_mont = ((1u128 << 64) % q as u128) as u64;
        let r2 = (one_mont as u128 * one_mont as u128 % q as u128) as u64;
        Ok(WordPrime { q, q_neg_inv, r2, one_mont })
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    pub fn q_neg_inv(&self) -> u64 {
        self.q_neg_inv
    }

    pub fn r2(&self) -> u64 {
        self.r2
    }

    /// Largest `t` with `2^t | q - 1`.
    pub fn two_adicity(&self) -> u32 {
        (self.q - 1).trailing_zeros()
    }

    /// REDC: `a·b·2^-64 mod q`.
    #[inline(always)]
    pub fn mont_mul(&self, a: MontResidue, b: MontResidue) -> MontResidue {
        let c = a.0 as u128 * b.0 as u128;
        let d = (c as u64).wrapping_mul(self.q_neg_inv);
        let c = c + d as u128 * self.q as u128;
        let mut c = (c >> 64) as u64;
        if c >= self.q {
            c -= self.q;
        }
        MontResidue(c)
    }

    /// Converts a standard residue into Montgomery form. Inputs at or above
    /// `q` are reduced first.
    #[inline]
    pub fn convert_in(&self, a: u64) -> MontResidue {
        let a = if a >= self.q { a % self.q } else { a };
        self.mont_mul(MontResidue(a), MontResidue(self.r2))
    }

    #[inline]
    pub fn convert_out(&self, a: MontResidue) -> u64 {
        self.mont_mul(a, MontResidue(1)).0
    }

    /// Wraps a word that is already in Montgomery form.
    pub fn from_mont_raw(&self, v: u64) -> Result<MontResidue> {
        if v >= self.q {
            return Err(Error::OutOfRange(format!("{v} is not reduced mod {}", self.q)));
        }
        Ok(MontResidue(v))
    }

    pub fn zero(&self) -> MontResidue {
        MontResidue(0)
    }

    pub fn one(&self) -> MontResidue {
        MontResidue(self.one_mont)
    }

    #[inline(always)]
    pub fn add(&self, a: MontResidue, b: MontResidue) -> MontResidue {
        let s = a.0 + b.0;
        MontResidue(if s >= self.q { s - self.q } else { s })
    }

    #[inline(always)]
    pub fn sub(&self, a: MontResidue, b: MontResidue) -> MontResidue {
        let (d, borrow) = a.0.overflowing_sub(b.0);
        MontResidue(if borrow { d.wrapping_add(self.q) } else { d })
    }

    pub fn neg(&self, a: MontResidue) -> MontResidue {
        self.sub(MontResidue(0), a)
    }

    /// Square-and-multiply.
    pub fn pow(&self, a: MontResidue, mut e: u64) -> MontResidue {
        let mut acc = self.one();
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mont_mul(acc, base);
            }
            base = self.mont_mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Inverse through `a^(q-2)`.
    pub fn inv(&self, a: MontResidue) -> Result<MontResidue> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, self.q - 2))
    }

    /// A primitive `n`-th root of unity for `n` a power of two dividing
    /// `q - 1`, found by raising seeded random candidates to `(q-1)/n`.
    pub fn primitive_root(&self, n: u64, seed: u64) -> Result<MontResidue> {
        if n == 0 || !n.is_power_of_two() || (self.q - 1) % n != 0 {
            return Err(Error::OutOfRange(format!(
                "{n} is not a power of two dividing {} - 1",
                self.q
            )));
        }
        if n == 1 {
            return Ok(self.one());
        }
        let minus_one = self.neg(self.one());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        loop {
            let c = self.convert_in(rng.gen_range(1..self.q));
            let g = self.pow(c, (self.q - 1) / n);
            if self.pow(g, n / 2) == minus_one {
                return Ok(g);
            }
        }
    }
}
