use std::sync::Arc;

use num_bigint::BigInt;
use rand::Rng;

use crate::error::{Error, Result};
use crate::gfp_field::{
    gfp_add, gfp_encode, gfp_find_nth_root, gfp_neg, gfp_pow, gfp_primitive_root, gfp_sub, mul_pow_r_unchecked,
    GfpElement, GfpMul, GfpParams,
};
use crate::gfp_mult::{BigintMultiplier, FftMultiplier};
use crate::word_field::{MontResidue, WordPrime};

use super::FftField;

impl FftField for WordPrime {
    type Elem = MontResidue;

    fn zero(&self) -> MontResidue {
        WordPrime::zero(self)
    }

    fn one(&self) -> MontResidue {
        WordPrime::one(self)
    }

    fn from_u64(&self, v: u64) -> MontResidue {
        self.convert_in(v)
    }

    #[inline]
    fn add(&self, a: &MontResidue, b: &MontResidue) -> MontResidue {
        WordPrime::add(self, *a, *b)
    }

    #[inline]
    fn sub(&self, a: &MontResidue, b: &MontResidue) -> MontResidue {
        WordPrime::sub(self, *a, *b)
    }

    #[inline]
    fn mul(&self, a: &MontResidue, b: &MontResidue) -> MontResidue {
        self.mont_mul(*a, *b)
    }

    fn inv(&self, a: &MontResidue) -> Result<MontResidue> {
        WordPrime::inv(self, *a)
    }

    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> MontResidue {
        self.convert_in(rng.gen_range(0..self.modulus()))
    }

    fn root_of_unity(&self, n: u64, seed: u64) -> Result<MontResidue> {
        self.primitive_root(n, seed)
    }

    fn neg(&self, a: &MontResidue) -> MontResidue {
        WordPrime::neg(self, *a)
    }

    fn pow(&self, a: &MontResidue, e: u64) -> MontResidue {
        WordPrime::pow(self, *a, e)
    }
}

/// Which multiplier a [`GfpField`] uses for general products.
#[derive(Debug, Clone)]
pub enum GfpBackend {
    Fft(Arc<FftMultiplier>),
    Bigint(BigintMultiplier),
}

/// GF(r^k + 1) as an FFT field; the cheap root is `r`, of order `2k`.
#[derive(Debug, Clone)]
pub struct GfpField {
    params: GfpParams,
    backend: GfpBackend,
}

impl GfpField {
    pub fn new(backend: GfpBackend) -> Self {
        let params = match &backend {
            GfpBackend::Fft(m) => m.params().clone(),
            GfpBackend::Bigint(m) => m.params().clone(),
        };
        GfpField { params, backend }
    }

    /// Field using the convolution multiplier with the default word primes.
    pub fn with_fft(params: &GfpParams) -> Result<Self> {
        Ok(Self::new(GfpBackend::Fft(Arc::new(FftMultiplier::new(params)?))))
    }

    pub fn with_bigint(params: &GfpParams) -> Self {
        Self::new(GfpBackend::Bigint(BigintMultiplier::new(params)))
    }

    pub fn params(&self) -> &GfpParams {
        &self.params
    }

    pub fn backend(&self) -> &GfpBackend {
        &self.backend
    }

    fn multiplier(&self) -> &dyn GfpMul {
        match &self.backend {
            GfpBackend::Fft(m) => m.as_ref(),
            GfpBackend::Bigint(m) => m,
        }
    }
}

impl FftField for GfpField {
    type Elem = GfpElement;

    fn zero(&self) -> GfpElement {
        self.params.zero()
    }

    fn one(&self) -> GfpElement {
        self.params.one()
    }

    fn from_u64(&self, v: u64) -> GfpElement {
        gfp_encode(&self.params, &BigInt::from(v))
    }

    fn add(&self, a: &GfpElement, b: &GfpElement) -> GfpElement {
        gfp_add(&self.params, a, b)
    }

    fn sub(&self, a: &GfpElement, b: &GfpElement) -> GfpElement {
        gfp_sub(&self.params, a, b)
    }

    fn mul(&self, a: &GfpElement, b: &GfpElement) -> GfpElement {
        self.multiplier().mul(a, b)
    }

    fn inv(&self, a: &GfpElement) -> Result<GfpElement> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let e = self.params.modulus() - 2u32;
        Ok(gfp_pow(&self.params, a, &e, self.multiplier()))
    }

    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> GfpElement {
        self.params.random_element(rng)
    }

    /// For `2k | n` the root satisfies `ω^{n/2k} = r`, so plans built on it
    /// always take the cheap twiddle path.
    fn root_of_unity(&self, n: u64, seed: u64) -> Result<GfpElement> {
        let g = gfp_find_nth_root(&self.params, n, seed, self.multiplier())?;
        let two_k = self.params.radix_order() as u64;
        if n % two_k == 0 {
            gfp_primitive_root(&self.params, n, &g, self.multiplier())
        } else if two_k % n == 0 {
            Ok(mul_pow_r_unchecked(&self.params, &self.params.one(), (two_k / n) as usize))
        } else {
            Ok(g)
        }
    }

    fn neg(&self, a: &GfpElement) -> GfpElement {
        gfp_neg(&self.params, a)
    }

    fn cheap_root(&self) -> Option<(GfpElement, usize)> {
        Some((self.params.radix_element(), self.params.radix_order()))
    }

    fn mul_cheap(&self, x: &GfpElement, s: usize) -> GfpElement {
        mul_pow_r_unchecked(&self.params, x, s)
    }
}
