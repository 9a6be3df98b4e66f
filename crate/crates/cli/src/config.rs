use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{CliError, Result};

/// Multiplication backend under test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Backend {
    /// Radix-r field with the convolution multiplier.
    GfpFft,
    /// Radix-r field with the big-integer multiplier.
    GfpBigint,
    /// Plain big integers modulo p, no radix representation.
    OracleBigint,
}

impl Backend {
    pub const ALL: [Backend; 3] = [Backend::GfpFft, Backend::GfpBigint, Backend::OracleBigint];

    pub fn name(self) -> &'static str {
        match self {
            Backend::GfpFft => "gfp-fft",
            Backend::GfpBigint => "gfp-bigint",
            Backend::OracleBigint => "oracle-bigint",
        }
    }

    pub fn is_gfp(self) -> bool {
        self != Backend::OracleBigint
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Backend {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        Backend::ALL
            .into_iter()
            .find(|b| b.name() == s)
            .ok_or_else(|| CliError::Config(format!("unknown backend {s:?}; expected gfp-fft, gfp-bigint or oracle-bigint")))
    }
}

/// Parses a radix: decimal, `0x` hex, `2^a`, or `2^a ± 2^b`.
pub fn parse_radix(s: &str) -> Result<u64> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || CliError::Config(format!("cannot parse radix {s:?}"));
    let value: u128 = if let Some(hex) = s.strip_prefix("0x") {
        u128::from_str_radix(hex, 16).map_err(|_| bad())?
    } else if s.starts_with("2^") {
        let split = s[2..].find(['+', '-']).map(|i| i + 2);
        let (head, tail) = match split {
            Some(i) => (&s[..i], Some(&s[i..])),
            None => (&s[..], None),
        };
        let pow = |t: &str| -> Result<u128> {
            let e: u32 = t.strip_prefix("2^").ok_or_else(bad)?.parse().map_err(|_| bad())?;
            if e > 64 {
                return Err(bad());
            }
            Ok(1u128 << e)
        };
        let a = pow(head)?;
        match tail {
            None => a,
            Some(t) if t.starts_with('+') => a + pow(&t[1..])?,
            Some(t) => a.checked_sub(pow(&t[1..])?).ok_or_else(bad)?,
        }
    } else {
        s.parse().map_err(|_| bad())?
    };
    let r = u64::try_from(value).map_err(|_| CliError::Config(format!("radix {s} does not fit in 64 bits")))?;
    if r < 2 {
        return Err(CliError::Config(format!("radix {s} must be at least 2")));
    }
    Ok(r)
}

/// Settings shared by all subcommands.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    /// `None` runs every backend.
    pub backend: Option<Backend>,
    /// `None` runs the default row set.
    pub k: Option<usize>,
    pub r: Option<u64>,
    pub big_k: Option<usize>,
    pub e: u32,
    pub trials: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig { backend: None, k: None, r: None, big_k: None, e: 2, trials: 50, seed: 0, out: None }
    }
}

/// `(k, r)` rows: the standard base-case primes plus a k = 64 prime that fits
/// the two default convolution primes.
pub const DEFAULT_ROWS: [(usize, u64); 4] = [
    (8, (1 << 59) + (1 << 16)),
    (16, (1 << 58) + (1 << 10)),
    (32, (1 << 56) + (1 << 21)),
    (64, (1 << 55) - (1 << 6)),
];

impl BenchConfig {
    pub fn validate(&self) -> Result<()> {
        if let Some(k) = self.k {
            if k == 0 || !k.is_power_of_two() {
                return Err(CliError::Config(format!("k = {k} must be a power of two")));
            }
        }
        if self.k.is_some_and(|k| self.radix_for(k).is_none()) {
            return Err(CliError::Config("--k needs --r unless k is one of 8, 16, 32, 64".into()));
        }
        if self.trials == 0 {
            return Err(CliError::Config("--trials must be at least 1".into()));
        }
        if self.e == 0 {
            return Err(CliError::Config("--e must be at least 1".into()));
        }
        if let (Some(big_k), Some(k)) = (self.big_k, self.k) {
            if self.backend.is_none_or(Backend::is_gfp) && big_k != 2 * k {
                return Err(CliError::Config(format!("K = {big_k} must equal 2k = {} for the radix-r field", 2 * k)));
            }
        }
        Ok(())
    }

    fn radix_for(&self, k: usize) -> Option<u64> {
        self.r.or_else(|| DEFAULT_ROWS.iter().find(|(kk, _)| *kk == k).map(|(_, r)| *r))
    }

    /// Rows to run: the configured `(k, r)` or the default set.
    pub fn rows(&self) -> Vec<(usize, u64)> {
        match self.k {
            Some(k) => vec![(k, self.radix_for(k).expect("validated"))],
            None => match self.r {
                Some(r) => vec![(8, r)],
                None => DEFAULT_ROWS.to_vec(),
            },
        }
    }

    /// `(K, k, r)` for the transform benches: K from `--K`, or `2k`, or 16.
    pub fn fft_field(&self) -> Result<(usize, usize, u64)> {
        let k = match (self.k, self.big_k) {
            (Some(k), _) => k,
            (None, Some(big_k)) => big_k / 2,
            (None, None) => 8,
        };
        let r = self
            .radix_for(k)
            .ok_or_else(|| CliError::Config(format!("no default radix for k = {k}; pass --r")))?;
        Ok((self.big_k.unwrap_or(2 * k), k, r))
    }

    pub fn backends(&self) -> Vec<Backend> {
        match self.backend {
            Some(b) => vec![b],
            None => Backend::ALL.to_vec(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radix_syntax() {
        assert_eq!(parse_radix("2^59+2^16").unwrap(), (1 << 59) + (1 << 16));
        assert_eq!(parse_radix("2^64-2^50").unwrap(), u64::MAX - (1 << 50) + 1);
        assert_eq!(parse_radix("2^62").unwrap(), 1 << 62);
        assert_eq!(parse_radix("12345").unwrap(), 12345);
        assert_eq!(parse_radix("0x10").unwrap(), 16);
        assert!(parse_radix("2^64+2^1").is_err());
        assert!(parse_radix("2^65").is_err());
        assert!(parse_radix("1").is_err());
        assert!(parse_radix("two").is_err());
    }

    #[test]
    fn base_size_must_match_k() {
        let c = BenchConfig { k: Some(8), big_k: Some(32), ..Default::default() };
        assert!(c.validate().is_err());
        let c = BenchConfig { k: Some(8), big_k: Some(16), ..Default::default() };
        assert!(c.validate().is_ok());
        let c = BenchConfig { k: Some(8), big_k: Some(32), backend: Some(Backend::OracleBigint), ..Default::default() };
        assert!(c.validate().is_ok());
    }

    #[test]
    fn rows_and_backends() {
        assert_eq!(BenchConfig::default().rows().len(), 4);
        let c = BenchConfig { k: Some(16), ..Default::default() };
        assert_eq!(c.rows(), vec![(16, (1 << 58) + (1 << 10))]);
        assert!("gmp".parse::<Backend>().is_err());
        assert_eq!("gfp-fft".parse::<Backend>().unwrap(), Backend::GfpFft);
    }
}
