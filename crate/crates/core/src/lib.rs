//! Arithmetic over generalized Fermat prime fields GF(r^k + 1) in radix-r
//! digit form, FFT-based multiplication of arbitrary field elements, and a
//! six-step FFT that runs over word-size prime fields and generalized Fermat
//! fields alike.
//!
//! Module map:
//!
//! - [`gfp_field`]: the radix-r representation with linear-time add, sub,
//!   multiply-by-`r^i`, exponentiation and root-of-unity search.
//! - [`word_field`]: Montgomery arithmetic modulo a word-size prime, plus the
//!   double-word multiply and reciprocal-division helpers.
//! - [`gfp_mult`]: multiplication of arbitrary elements, either through two
//!   negacyclic convolutions + CRT + (l, h, c) decomposition, or through
//!   arbitrary-precision integers.
//! - [`fft`]: the generic DFT on `K^e` points with unrolled base cases.
//! - [`oracle`]: slow, independent reference implementations used by tests.

pub mod error;
pub mod fft;
pub mod gfp_field;
pub mod gfp_mult;
pub mod oracle;
pub mod par;
pub mod word_field;

pub use error::{Error, Result};
pub use fft::{FftField, FftPlan, GfpBackend, GfpField};
pub use gfp_field::{GfpElement, GfpMul, GfpParams};
pub use gfp_mult::{BigintMultiplier, CrtParams, FftMultiplier, LhcTriple, SignedDoubleWord, StepTimes};
pub use word_field::{MontResidue, WidePair, WordPrime, P1, P2};
