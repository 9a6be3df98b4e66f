//! Slow reference implementations. Nothing here is on a fast path; every
//! routine is a textbook algorithm chosen so that it cannot share a bug with
//! the code it checks.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fft::FftField;

// ---- limb arithmetic (little-endian u64 limbs) ----

fn limb_mul(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        let mut carry = 0u128;
        for (j, &y) in b.iter().enumerate() {
            let t = out[i + j] as u128 + x as u128 * y as u128 + carry;
            out[i + j] = t as u64;
            carry = t >> 64;
        }
        out[i + b.len()] = carry as u64;
    }
    out
}

fn limb_bit(a: &[u64], i: usize) -> bool {
    (a[i / 64] >> (i % 64)) & 1 == 1
}

fn limb_geq(a: &[u64], b: &[u64]) -> bool {
    for i in (0..a.len()).rev() {
        if a[i] != b[i] {
            return a[i] > b[i];
        }
    }
    true
}

fn limb_sub_assign(a: &mut [u64], b: &[u64]) {
    let mut borrow = false;
    for i in 0..a.len() {
        let (d, b1) = a[i].overflowing_sub(b[i]);
        let (d, b2) = d.overflowing_sub(borrow as u64);
        a[i] = d;
        borrow = b1 || b2;
    }
}

fn limb_shl1_in(a: &mut [u64], bit: bool) {
    let mut carry = bit as u64;
    for w in a.iter_mut() {
        let next = *w >> 63;
        *w = (*w << 1) | carry;
        carry = next;
    }
}

/// Bit-serial long division remainder.
fn limb_rem(n: &[u64], d: &[u64]) -> Vec<u64> {
    let width = d.len() + 1;
    let mut dd = d.to_vec();
    dd.push(0);
    let mut rem = vec![0u64; width];
    for i in (0..n.len() * 64).rev() {
        limb_shl1_in(&mut rem, limb_bit(n, i));
        if limb_geq(&rem, &dd) {
            limb_sub_assign(&mut rem, &dd);
        }
    }
    rem
}

/// `x·y mod p` by schoolbook multiplication and shift-subtract division on
/// raw limbs.
pub fn oracle_mod_mul(p: &BigUint, x: &BigUint, y: &BigUint) -> BigUint {
    assert!(!p.is_zero(), "modulus must be nonzero");
    let prod = limb_mul(&x.to_u64_digits(), &y.to_u64_digits());
    let rem = limb_rem(&prod, &p.to_u64_digits());
    let words: Vec<u32> = rem.iter().flat_map(|&w| [w as u32, (w >> 32) as u32]).collect();
    BigUint::new(words)
}

/// Positional value `Σ digits[i]·r^i`, with no canonical-form checks.
pub fn oracle_decode(r: u64, digits: &[u64]) -> BigUint {
    let mut acc = BigUint::zero();
    let mut power = BigUint::one();
    for &d in digits {
        acc += &power * d;
        power *= r;
    }
    acc
}

/// Miller–Rabin with `rounds` witnesses drawn from a fixed-seed generator.
pub fn oracle_is_probable_prime(n: &BigUint, rounds: u32) -> bool {
    let two = BigUint::from(2u32);
    if *n < two {
        return false;
    }
    for small in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let s = BigUint::from(small);
        if *n == s {
            return true;
        }
        if (n % &s).is_zero() {
            return false;
        }
    }
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0f_9a1e);
    let span = n - 3u32;
    'witness: for _ in 0..rounds {
        let a = random_below(&mut rng, &span) + &two;
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = &x * &x % n;
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn random_below<R: Rng>(rng: &mut R, bound: &BigUint) -> BigUint {
    let bits = bound.bits();
    loop {
        let words = bits.div_ceil(32) as usize;
        let mut v: Vec<u32> = (0..words).map(|_| rng.gen()).collect();
        let extra = words as u64 * 32 - bits;
        if let Some(top) = v.last_mut() {
            *top >>= extra;
        }
        let c = BigUint::new(v);
        if c < *bound {
            return c;
        }
    }
}

/// `out[i] = Σ_j v[j]·ω^{ij}`, quadratic.
pub fn oracle_naive_dft<F: FftField>(field: &F, v: &[F::Elem], omega: &F::Elem) -> Vec<F::Elem> {
    let n = v.len();
    let mut out = Vec::with_capacity(n);
    let mut row_root = field.one();
    for _ in 0..n {
        let mut acc = field.zero();
        let mut w = field.one();
        for x in v {
            acc = field.add(&acc, &field.mul(x, &w));
            w = field.mul(&w, &row_root);
        }
        out.push(acc);
        row_root = field.mul(&row_root, omega);
    }
    out
}

/// Schoolbook product mod `(R^k + 1, q)`.
pub fn oracle_negacyclic(x: &[u64], y: &[u64], q: u64) -> Vec<u64> {
    let k = x.len();
    assert_eq!(k, y.len());
    let q = q as u128;
    let mut acc = vec![0u128; k];
    for i in 0..k {
        for j in 0..k {
            let t = (x[i] as u128 % q) * (y[j] as u128 % q) % q;
            let idx = i + j;
            if idx < k {
                acc[idx] = (acc[idx] + t) % q;
            } else {
                acc[idx - k] = (acc[idx - k] + q - t) % q;
            }
        }
    }
    acc.into_iter().map(|v| v as u64).collect()
}

/// Schoolbook product mod `(x^n - 1, q)`.
pub fn oracle_cyclic(x: &[u64], y: &[u64], q: u64) -> Vec<u64> {
    let n = x.len();
    assert_eq!(n, y.len());
    let q = q as u128;
    let mut acc = vec![0u128; n];
    for i in 0..n {
        for j in 0..n {
            let t = (x[i] as u128 % q) * (y[j] as u128 % q) % q;
            acc[(i + j) % n] = (acc[(i + j) % n] + t) % q;
        }
    }
    acc.into_iter().map(|v| v as u64).collect()
}

/// CRT in exact arithmetic, normalized into the symmetric range.
pub fn oracle_crt(a1: u64, a2: u64, p1: u64, p2: u64) -> i128 {
    let (p1b, p2b) = (BigInt::from(p1), BigInt::from(p2));
    let m = &p1b * &p2b;
    // brute: v = a1 + p1·t with t ≡ (a2 - a1)·p1^{-1} (mod p2)
    let inv = BigInt::from(p1).modpow(&(BigInt::from(p2) - 2), &p2b);
    let t = ((BigInt::from(a2) - BigInt::from(a1)) * inv).mod_floor(&p2b);
    let mut v = BigInt::from(a1) + &p1b * t;
    if v.clone() * 2 > m {
        v -= m;
    }
    i128::try_from(v).expect("fits in 128 bits")
}

/// Radix-r addition by the division form: sum digitwise, then reduce
/// carries with `/` and `%`, then fold the overflow through `r^k ≡ -1`.
pub fn oracle_add_by_division(r: u64, x: &[u64], y: &[u64]) -> BigUint {
    let k = x.len();
    let p = BigUint::from(r).pow(k as u32) + 1u32;
    let mut digits = vec![0u128; k];
    let mut carry = 0u128;
    for i in 0..k {
        let s = x[i] as u128 + y[i] as u128 + carry;
        digits[i] = s % r as u128;
        carry = s / r as u128;
    }
    let low = oracle_decode(r, &digits.iter().map(|&d| d as u64).collect::<Vec<_>>());
    let c = BigUint::from(carry);
    (low + &p - c % &p) % p
}

/// Arithmetic modulo an arbitrary integer, on `BigUint` residues.
#[derive(Debug, Clone)]
pub struct OracleField {
    p: BigUint,
}

impl OracleField {
    pub fn new(p: BigUint) -> Result<Self> {
        if p < BigUint::from(2u32) {
            return Err(Error::InvalidParams(format!("modulus {p} too small")));
        }
        Ok(OracleField { p })
    }

    pub fn modulus(&self) -> &BigUint {
        &self.p
    }
}

impl FftField for OracleField {
    type Elem = BigUint;

    fn zero(&self) -> BigUint {
        BigUint::zero()
    }

    fn one(&self) -> BigUint {
        BigUint::one()
    }

    fn from_u64(&self, v: u64) -> BigUint {
        BigUint::from(v) % &self.p
    }

    fn add(&self, a: &BigUint, b: &BigUint) -> BigUint {
        (a + b) % &self.p
    }

    fn sub(&self, a: &BigUint, b: &BigUint) -> BigUint {
        (a + &self.p - b) % &self.p
    }

    fn mul(&self, a: &BigUint, b: &BigUint) -> BigUint {
        a * b % &self.p
    }

    fn inv(&self, a: &BigUint) -> Result<BigUint> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(a.modpow(&(&self.p - 2u32), &self.p))
    }

    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> BigUint {
        let mut seeded = ChaCha8Rng::seed_from_u64(rng.gen());
        random_below(&mut seeded, &self.p)
    }

    fn root_of_unity(&self, n: u64, seed: u64) -> Result<BigUint> {
        let pm1 = &self.p - 1u32;
        if n == 0 || !(&pm1 % n).is_zero() {
            return Err(Error::OutOfRange(format!("{n} does not divide p - 1")));
        }
        if n == 1 {
            return Ok(BigUint::one());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cofactor = &pm1 / n;
        loop {
            let c = random_below(&mut rng, &self.p);
            if c.is_zero() {
                continue;
            }
            let g = c.modpow(&cofactor, &self.p);
            // power-of-two order only
            if g.modpow(&BigUint::from(n / 2), &self.p) == pm1 {
                return Ok(g);
            }
        }
    }
}

/// Arithmetic modulo a word prime with plain `%` on 128-bit products.
#[derive(Debug, Clone, Copy)]
pub struct PlainWordField {
    q: u64,
}

impl PlainWordField {
    pub fn new(q: u64) -> Self {
        PlainWordField { q }
    }
}

impl FftField for PlainWordField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1 % self.q
    }

    fn from_u64(&self, v: u64) -> u64 {
        v % self.q
    }

    fn add(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + *b as u128) % self.q as u128) as u64
    }

    fn sub(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + self.q as u128 - *b as u128) % self.q as u128) as u64
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        (*a as u128 * *b as u128 % self.q as u128) as u64
    }

    fn inv(&self, a: &u64) -> Result<u64> {
        if *a == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, self.q - 2))
    }

    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.q)
    }

    fn root_of_unity(&self, n: u64, seed: u64) -> Result<u64> {
        if n == 0 || (self.q - 1) % n != 0 {
            return Err(Error::OutOfRange(format!("{n} does not divide q - 1")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        loop {
            let g = self.pow(&rng.gen_range(1..self.q), (self.q - 1) / n);
            if n == 1 || self.pow(&g, n / 2) == self.q - 1 {
                return Ok(g);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mod_mul_small_cases() {
        let p = BigUint::from(257u32);
        assert_eq!(oracle_mod_mul(&p, &BigUint::one(), &BigUint::from(77u32)), BigUint::from(77u32));
        let pm1 = BigUint::from(256u32);
        assert_eq!(oracle_mod_mul(&p, &pm1, &pm1), BigUint::one());
        for a in 0u32..257 {
            let got = oracle_mod_mul(&p, &BigUint::from(a), &BigUint::from(200u32));
            assert_eq!(got, BigUint::from(a * 200 % 257));
        }
    }

    #[test]
    fn mod_mul_multi_limb() {
        let p = (BigUint::one() << 200u32) - 75u32;
        let x = (BigUint::one() << 199u32) + 12345u32;
        let y = (BigUint::one() << 150u32) + 3u32;
        assert_eq!(oracle_mod_mul(&p, &x, &y), (&x * &y) % &p);
    }

    #[test]
    fn primality_basics() {
        assert!(oracle_is_probable_prime(&BigUint::from(257u32), 8));
        assert!(!oracle_is_probable_prime(&(BigUint::one() << 64u32), 8));
        assert!(!oracle_is_probable_prime(&BigUint::from(561u32), 8));
        assert!(oracle_is_probable_prime(&BigUint::from(crate::word_field::P1), 8));
    }

    #[test]
    fn negacyclic_wraps_with_sign() {
        let q = 257;
        let mut x = vec![0; 4];
        let mut y = vec![0; 4];
        x[1] = 1;
        y[3] = 1;
        assert_eq!(oracle_negacyclic(&x, &y, q), vec![256, 0, 0, 0]);
        assert_eq!(oracle_cyclic(&x, &y, q), vec![1, 0, 0, 0]);
    }

    #[test]
    fn crt_small() {
        assert_eq!(oracle_crt(5, 5, 7, 11), 5);
        assert_eq!(oracle_crt(4, 8, 7, 11), -3);
    }

    #[test]
    fn add_by_division_matches_integers() {
        let r = 10;
        let x = [9, 9, 9, 9];
        let got = oracle_add_by_division(r, &x, &[1, 0, 0, 0]);
        assert_eq!(got, BigUint::from(10000u32));
    }

    #[test]
    fn naive_dft_of_delta_is_ones() {
        let f = PlainWordField::new(257);
        let w = 4u64; // order 8
        let mut v = vec![0u64; 8];
        v[0] = 1;
        assert_eq!(oracle_naive_dft(&f, &v, &w), vec![1; 8]);
    }
}
