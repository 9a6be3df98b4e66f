//! GF(p) for a generalized Fermat prime `p = r^k + 1`, with elements kept as
//! `k` radix-r digits.
//!
//! Digits are stored little-endian: `digits[i]` is the coefficient of `r^i`.
//! Two shapes are canonical:
//!
//! - every digit in `[0, r)`, covering `0 ..= p - 2`;
//! - top digit equal to `r` and all others zero, the unique encoding of
//!   `p - 1 = r^k`.
//!
//! Addition, subtraction and multiplication by `r^i` run in `O(k)` word
//! operations and never divide. General multiplication lives in
//! [`crate::gfp_mult`]; anything here that needs it takes a [`GfpMul`].

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::oracle::oracle_is_probable_prime;

/// Field parameters `(r, k)`; `p = r^k + 1` is implied.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GfpParams {
    r: u64,
    k: usize,
}

impl GfpParams {
    /// Builds parameters without checking that `r^k + 1` is prime.
    pub fn new(r: u64, k: usize) -> Result<Self> {
        if k == 0 || !k.is_power_of_two() {
            return Err(Error::InvalidParams(format!("k = {k} must be a power of two")));
        }
        if r < 2 {
            return Err(Error::InvalidParams(format!("radix r = {r} must be at least 2")));
        }
        Ok(GfpParams { r, k })
    }

    /// Like [`GfpParams::new`] but also runs a Miller–Rabin check on `p`.
    pub fn new_verified(r: u64, k: usize, rounds: u32) -> Result<Self> {
        let params = Self::new(r, k)?;
        if !oracle_is_probable_prime(&params.modulus(), rounds) {
            return Err(Error::InvalidParams(format!("({r})^{k} + 1 is not prime")));
        }
        Ok(params)
    }

    pub fn r(&self) -> u64 {
        self.r
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Order of `r` in the multiplicative group, `2k`.
    pub fn radix_order(&self) -> usize {
        2 * self.k
    }

    /// `p = r^k + 1` as an arbitrary-precision integer.
    pub fn modulus(&self) -> BigUint {
        BigUint::from(self.r).pow(self.k as u32) + 1u32
    }

    pub fn zero(&self) -> GfpElement {
        GfpElement { digits: vec![0; self.k] }
    }

    pub fn one(&self) -> GfpElement {
        let mut digits = vec![0; self.k];
        digits[0] = 1;
        GfpElement { digits }
    }

    /// The element `p - 1`, i.e. form B.
    pub fn minus_one(&self) -> GfpElement {
        let mut digits = vec![0; self.k];
        digits[self.k - 1] = self.r;
        GfpElement { digits }
    }

    /// The element `r` (the field's `2k`-th primitive root of unity).
    pub fn radix_element(&self) -> GfpElement {
        if self.k == 1 {
            // r = p - 1 when k = 1.
            return self.minus_one();
        }
        let mut digits = vec![0; self.k];
        digits[1] = 1;
        GfpElement { digits }
    }

    /// Uniformly random canonical element (never form B) from a caller RNG.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> GfpElement {
        GfpElement { digits: (0..self.k).map(|_| rng.gen_range(0..self.r)).collect() }
    }

    pub fn is_canonical(&self, x: &GfpElement) -> bool {
        let d = &x.digits;
        if d.len() != self.k {
            return false;
        }
        if d[..self.k - 1].iter().all(|&v| v < self.r) && d[self.k - 1] < self.r {
            return true;
        }
        d[self.k - 1] == self.r && d[..self.k - 1].iter().all(|&v| v == 0)
    }

    pub fn check(&self, x: &GfpElement) -> Result<()> {
        if x.digits.len() != self.k {
            return Err(Error::LengthMismatch { expected: self.k, actual: x.digits.len() });
        }
        if !self.is_canonical(x) {
            return Err(Error::NonCanonical(x.to_string()));
        }
        Ok(())
    }

    /// Wraps a digit vector, rejecting non-canonical input.
    pub fn element(&self, digits: Vec<u64>) -> Result<GfpElement> {
        let x = GfpElement { digits };
        self.check(&x)?;
        Ok(x)
    }

    /// Parses the text form: `k` hex words, little-endian, comma-separated.
    pub fn parse_element(&self, s: &str) -> Result<GfpElement> {
        let digits = s
            .split(',')
            .map(|w| {
                let w = w.trim();
                let w = w.strip_prefix("0x").unwrap_or(w);
                u64::from_str_radix(w, 16)
                    .map_err(|e| Error::InvalidParams(format!("bad hex word {w:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        self.element(digits)
    }
}

/// A field element as `k` little-endian radix-r digits.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct GfpElement {
    digits: Vec<u64>,
}

impl GfpElement {
    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    pub fn into_digits(self) -> Vec<u64> {
        self.digits
    }

    pub fn is_zero(&self) -> bool {
        self.digits.iter().all(|&d| d == 0)
    }
}

impl fmt::Display for GfpElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.digits.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{d:x}")?;
        }
        Ok(())
    }
}

/// A multiplication backend for arbitrary elements of one field.
pub trait GfpMul {
    fn params(&self) -> &GfpParams;
    fn mul(&self, x: &GfpElement, y: &GfpElement) -> GfpElement;
}

/// `Σ digits[i]·r^i`, exactly.
pub fn gfp_decode(params: &GfpParams, x: &GfpElement) -> Result<BigUint> {
    params.check(x)?;
    let r = BigUint::from(params.r);
    let mut acc = BigUint::zero();
    for &d in x.digits.iter().rev() {
        acc = acc * &r + d;
    }
    Ok(acc)
}

/// The canonical element congruent to `n` mod `p`; `n` may be negative or
/// exceed `p`.
pub fn gfp_encode(params: &GfpParams, n: &BigInt) -> GfpElement {
    let p = BigInt::from_biguint(Sign::Plus, params.modulus());
    let reduced = n.mod_floor(&p).to_biguint().expect("mod_floor is non-negative");
    encode_reduced(params, &reduced)
}

/// Encodes `n` with `0 <= n < p`.
pub fn gfp_encode_uint(params: &GfpParams, n: &BigUint) -> GfpElement {
    let p = params.modulus();
    if n >= &p {
        return encode_reduced(params, &(n % &p));
    }
    encode_reduced(params, n)
}

fn encode_reduced(params: &GfpParams, n: &BigUint) -> GfpElement {
    let p_minus_1 = params.modulus() - 1u32;
    if *n == p_minus_1 {
        return params.minus_one();
    }
    let r = BigUint::from(params.r);
    let mut rest = n.clone();
    let mut digits = Vec::with_capacity(params.k);
    for _ in 0..params.k {
        let (q, m) = rest.div_rem(&r);
        digits.push(m.iter_u64_digits().next().unwrap_or(0));
        rest = q;
    }
    debug_assert!(rest.is_zero());
    GfpElement { digits }
}

/// Digitwise addition with conditional-subtract carries.
///
/// A carry out of the top digit stands for `r^k ≡ -1`, so it is paid back by
/// decrementing the lowest nonzero digit (and filling the digits below it
/// with `r - 1`). When every digit is zero the sum is exactly `r^k` and the
/// result is form B.
pub fn gfp_add(params: &GfpParams, x: &GfpElement, y: &GfpElement) -> GfpElement {
    let (r, k) = (params.r as u128, params.k);
    debug_assert!(params.is_canonical(x) && params.is_canonical(y));
    let mut z = vec![0u64; k];
    let mut carry = 0u128;
    for i in 0..k {
        let sum = x.digits[i] as u128 + y.digits[i] as u128 + carry;
        if sum >= r {
            z[i] = (sum - r) as u64;
            carry = 1;
        } else {
            z[i] = sum as u64;
            carry = 0;
        }
    }
    if carry != 0 {
        match z.iter().position(|&d| d != 0) {
            Some(i0) => {
                z[i0] -= 1;
                for d in &mut z[..i0] {
                    *d = params.r - 1;
                }
            }
            None => z[k - 1] = params.r,
        }
    }
    GfpElement { digits: z }
}

/// Digitwise subtraction with borrows. A borrow out of the top digit means
/// the digits hold `x - y + r^k`, which is one less than the answer.
pub fn gfp_sub(params: &GfpParams, x: &GfpElement, y: &GfpElement) -> GfpElement {
    let (r, k) = (params.r as i128, params.k);
    debug_assert!(params.is_canonical(x) && params.is_canonical(y));
    let mut z = vec![0u64; k];
    let mut borrow = 0i128;
    for i in 0..k {
        let d = x.digits[i] as i128 - y.digits[i] as i128 - borrow;
        if d < 0 {
            z[i] = (d + r) as u64;
            borrow = 1;
        } else {
            z[i] = d as u64;
            borrow = 0;
        }
    }
    if borrow != 0 {
        increment(params, &mut z);
    }
    GfpElement { digits: z }
}

/// Adds one to a form-A digit vector, producing form B on overflow.
fn increment(params: &GfpParams, z: &mut [u64]) {
    for d in z.iter_mut() {
        if *d + 1 < params.r {
            *d += 1;
            return;
        }
        *d = 0;
    }
    z[params.k - 1] = params.r;
}

pub fn gfp_neg(params: &GfpParams, x: &GfpElement) -> GfpElement {
    gfp_sub(params, &params.zero(), x)
}

/// `x·r^i` for `0 <= i <= 2k` by cyclic shift.
///
/// For `0 < i < k` the digits that slide past `r^{k-1}` wrap around with a
/// sign flip (`r^k ≡ -1`), so the product is `b - a` where `b` holds the low
/// digits shifted up and `a` the high digits shifted down. A form-B input
/// puts its `r` into `a` as `r·r^{i-1} = r^i`.
pub fn gfp_mul_pow_r(params: &GfpParams, x: &GfpElement, i: usize) -> Result<GfpElement> {
    let k = params.k;
    if i > 2 * k {
        return Err(Error::OutOfRange(format!("shift {i} exceeds 2k = {}", 2 * k)));
    }
    Ok(mul_pow_r_unchecked(params, x, i))
}

pub(crate) fn mul_pow_r_unchecked(params: &GfpParams, x: &GfpElement, i: usize) -> GfpElement {
    let k = params.k;
    let mut s = i % (2 * k);
    if s == 0 {
        return x.clone();
    }
    let negated;
    let x = if s >= k {
        s -= k;
        negated = gfp_neg(params, x);
        if s == 0 {
            return negated;
        }
        &negated
    } else {
        x
    };
    let mut b = vec![0u64; k];
    let mut a = vec![0u64; k];
    b[s..].copy_from_slice(&x.digits[..k - s]);
    a[..s].copy_from_slice(&x.digits[k - s..]);
    if x.digits[k - 1] == params.r {
        a[s - 1] = 0;
        a[s] = 1;
    }
    gfp_sub(params, &GfpElement { digits: b }, &GfpElement { digits: a })
}

/// Canonical element of `Σ acc[i]·r^i mod p` for signed digits. One carry
/// pass; a carry out of the top folds back to the bottom with its sign
/// flipped (`r^k ≡ -1`).
pub(crate) fn reduce_signed_digits(params: &GfpParams, acc: &[i128]) -> GfpElement {
    let (r, k) = (params.r as i128, params.k);
    debug_assert_eq!(acc.len(), k);
    let mut t = acc.to_vec();
    loop {
        let mut carry = 0i128;
        for d in t.iter_mut() {
            let v = *d + carry;
            *d = v.rem_euclid(r);
            carry = v.div_euclid(r);
        }
        if carry == 0 {
            break;
        }
        if carry == 1 && t.iter().all(|&d| d == 0) {
            return params.minus_one();
        }
        t[0] -= carry;
    }
    GfpElement { digits: t.into_iter().map(|d| d as u64).collect() }
}

/// `x^e` by left-to-right square-and-multiply.
pub fn gfp_pow<M: GfpMul + ?Sized>(params: &GfpParams, x: &GfpElement, e: &BigUint, mul: &M) -> GfpElement {
    let mut acc = params.one();
    let bits = e.bits();
    for b in (0..bits).rev() {
        acc = mul.mul(&acc, &acc);
        if e.bit(b) {
            acc = mul.mul(&acc, x);
        }
    }
    acc
}

fn require_power_of_two_dividing(params: &GfpParams, n: u64) -> Result<()> {
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::OutOfRange(format!("N = {n} must be a power of two")));
    }
    let p_minus_1 = params.modulus() - 1u32;
    if !(p_minus_1 % n).is_zero() {
        return Err(Error::OutOfRange(format!("N = {n} does not divide p - 1")));
    }
    Ok(())
}

/// A primitive `N`-th root of unity: seeded random candidates `c`, raised to
/// `(p-1)/N`, kept once `g^{N/2} = -1`.
pub fn gfp_find_nth_root<M: GfpMul + ?Sized>(
    params: &GfpParams,
    n: u64,
    seed: u64,
    mul: &M,
) -> Result<GfpElement> {
    require_power_of_two_dividing(params, n)?;
    if n == 1 {
        return Ok(params.one());
    }
    if n == 2 {
        return Ok(params.minus_one());
    }
    let cofactor = (params.modulus() - 1u32) / n;
    let half = BigUint::from(n / 2);
    let minus_one = params.minus_one();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let c = params.random_element(&mut rng);
        if c.is_zero() {
            continue;
        }
        let g = gfp_pow(params, &c, &cofactor, mul);
        if gfp_pow(params, &g, &half, mul) == minus_one {
            return Ok(g);
        }
    }
}

/// From a primitive `N`-th root `g`, the power `ω = g^j` with
/// `ω^{N/2k} = r`, found by walking the powers of `g^{N/2k}` until one hits
/// `r`. The result is checked against `ω^N = 1` and `ω^{N/2} = -1` before it
/// is returned.
pub fn gfp_primitive_root<M: GfpMul + ?Sized>(
    params: &GfpParams,
    n: u64,
    g: &GfpElement,
    mul: &M,
) -> Result<GfpElement> {
    require_power_of_two_dividing(params, n)?;
    params.check(g)?;
    let two_k = params.radix_order() as u64;
    if n % two_k != 0 {
        return Err(Error::OutOfRange(format!("N = {n} must be a multiple of 2k = {two_k}")));
    }
    let r = params.radix_element();
    let a = gfp_pow(params, g, &BigUint::from(n / two_k), mul);
    let mut b = a.clone();
    let mut j = 1u64;
    while b != r {
        if j >= two_k {
            return Err(Error::NotPrimitive(format!("no power of g^(N/2k) equals r within {two_k} steps")));
        }
        b = mul.mul(&a, &b);
        j += 1;
    }
    let omega = gfp_pow(params, g, &BigUint::from(j), mul);
    let one = params.one();
    if gfp_pow(params, &omega, &BigUint::from(n), mul) != one
        || gfp_pow(params, &omega, &BigUint::from(n / 2), mul) != params.minus_one()
    {
        return Err(Error::NotPrimitive(format!("g^{j} is not a primitive {n}-th root")));
    }
    debug_assert_eq!(gfp_pow(params, &omega, &BigUint::from(n / two_k), mul), r);
    Ok(omega)
}

/// `BigUint` exponent helper for callers holding small exponents.
pub fn exponent(e: u64) -> BigUint {
    if e == 1 {
        BigUint::one()
    } else {
        BigUint::from(e)
    }
}
