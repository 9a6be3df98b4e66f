//! `verify`: property sweeps over every module at the configured sizes.
//! Reports contain no timings, so the same seed gives byte-identical output.

use std::fmt;

use gfp_fft::fft::{dft_general, dft_inverse, FftField, FftPlan, SUPPORTED_BASE_SIZES};
use gfp_fft::gfp_field::{gfp_add, gfp_decode, GfpElement, gfp_find_nth_root, gfp_mul_pow_r, gfp_pow, gfp_primitive_root, gfp_sub};
use gfp_fft::gfp_mult::{check_prime_compat, crt_combine, lhc_decompose, NegacyclicPlan, RadixDivisor};
use gfp_fft::oracle::{
    oracle_crt, oracle_is_probable_prime, oracle_mod_mul, oracle_naive_dft, oracle_negacyclic, OracleField,
};
use gfp_fft::{BigintMultiplier, CrtParams, FftMultiplier, GfpField, GfpMul, GfpParams, WidePair, WordPrime};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::BenchConfig;
use crate::error::{CliError, Result};

/// Largest transforms checked against the quadratic oracle.
const MAX_WORD_ORACLE_DFT: usize = 4096;
const MAX_GFP_ORACLE_DFT: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub name: String,
    pub samples: usize,
    pub counterexample: Option<String>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed()).count()
    }

    pub fn first_counterexample(&self) -> Option<&CheckResult> {
        self.checks.iter().find(|c| !c.passed())
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            match &c.counterexample {
                None => writeln!(f, "PASS  {}  ({} samples)", c.name, c.samples)?,
                Some(ce) => writeln!(f, "FAIL  {}  ({} samples)  counterexample: {}", c.name, c.samples, ce)?,
            }
        }
        writeln!(f, "{} checks, {} failed", self.checks.len(), self.failures())
    }
}

/// Runs `f` on `0..samples`, stopping at the first counterexample. Errors
/// from the code under test count as failures.
fn check(name: impl Into<String>, samples: usize, mut f: impl FnMut(usize) -> Outcome) -> CheckResult {
    let mut counterexample = None;
    for i in 0..samples {
        if let Err(ce) = f(i) {
            counterexample = Some(format!("sample {i}: {ce}"));
            break;
        }
    }
    CheckResult { name: name.into(), samples, counterexample }
}

type Outcome = std::result::Result<(), String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: gfp_fft::Error) -> String {
    format!("error: {e}")
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn cmd_verify(config: &BenchConfig) -> Result<VerifyReport> {
    config.validate()?;
    let crt = CrtParams::default();
    let rows = config.rows();
    for &(k, r) in &rows {
        let params = GfpParams::new(r, k)?;
        let rep = check_prime_compat(&params, &crt);
        if !rep.passes() {
            return Err(CliError::Config(format!(
                "k = {k}, r = {r} is incompatible with the convolution primes (bound ok: {}, 2k | p-1: {}, slack {:.2} bits)",
                rep.bound_ok, rep.divisibility_ok, rep.slack_bits
            )));
        }
    }
    let cheap = config.trials * 20;
    let mut report = VerifyReport::default();
    let seed = config.seed;

    for (q, stream) in [(crt.p1().modulus(), 1), (crt.p2().modulus(), 2)] {
        let f = WordPrime::new(q)?;
        let mut rng = rng_for(seed, stream);
        report.checks.push(check(format!("montgomery mul mod {q}"), cheap, |_| {
            let (a, b) = (rng.gen_range(0..q), rng.gen_range(0..q));
            let got = f.convert_out(f.mont_mul(f.convert_in(a), f.convert_in(b)));
            let want = (a as u128 * b as u128 % q as u128) as u64;
            ensure(got == want, || format!("a={a} b={b} got={got} want={want}"))
        }));
        report.checks.push(check(format!("montgomery inverse mod {q}"), config.trials, |_| {
            let a = f.convert_in(rng.gen_range(1..q));
            let inv = f.inv(a).map_err(err)?;
            ensure(f.mont_mul(a, inv) == f.one(), || format!("a={}", f.convert_out(a)))
        }));
    }

    let mut rng = rng_for(seed, 3);
    report.checks.push(check("crt combine", cheap, |_| {
        let (a1, a2) = (rng.gen_range(0..crt.p1().modulus()), rng.gen_range(0..crt.p2().modulus()));
        let got = crt_combine(a1, a2, &crt).map_err(err)?.to_i128();
        let want = oracle_crt(a1, a2, crt.p1().modulus(), crt.p2().modulus());
        ensure(got == want, || format!("a1={a1} a2={a2} got={got} want={want}"))
    }));

    for &(k, r) in &rows {
        let params = GfpParams::new(r, k)?;
        let div = RadixDivisor::new(r)?;
        let bound = k as u128 * r as u128 * r as u128;
        let mut rng = rng_for(seed, 10 + k as u64);
        report.checks.push(check(format!("lhc split r={r}"), cheap, |_| {
            let s = WidePair::from_u128(rng.gen_range(0..=bound));
            let t = lhc_decompose(s, &div).map_err(err)?;
            ensure(t.l < r && t.h < r && t.recompose(r) == BigUint::from(s.to_u128()), || format!("s={s} got={t:?}"))
        }));

        for q in [crt.p1(), crt.p2()] {
            let plan = NegacyclicPlan::new(*q, k)?;
            let m = q.modulus();
            report.checks.push(check(format!("negacyclic k={k} mod {m}"), config.trials, |_| {
                let x: Vec<u64> = (0..k).map(|_| rng.gen_range(0..m)).collect();
                let y: Vec<u64> = (0..k).map(|_| rng.gen_range(0..m)).collect();
                let got = plan.convolve(&x, &y).map_err(err)?;
                ensure(got == oracle_negacyclic(&x, &y, m), || format!("x={x:?} y={y:?}"))
            }));
        }

        report.checks.push(check(format!("({r})^{k}+1 is prime"), 1, |_| {
            ensure(oracle_is_probable_prime(&params.modulus(), 8), || "composite".into())
        }));

        let p = params.modulus();
        let dec = |x: &GfpElement| gfp_decode(&params, x).map_err(err);
        report.checks.push(check(format!("add/sub k={k}"), cheap, |i| {
            let x = if i == 0 { params.minus_one() } else { params.random_element(&mut rng) };
            let y = if i < 2 { params.minus_one() } else { params.random_element(&mut rng) };
            let (a, b) = (dec(&x)?, dec(&y)?);
            let s = dec(&gfp_add(&params, &x, &y))?;
            let d = dec(&gfp_sub(&params, &x, &y))?;
            ensure(s == (&a + &b) % &p && d == (&a + &p - &b) % &p, || format!("x={x} y={y}"))
        }));
        report.checks.push(check(format!("mul by r^i k={k}"), cheap, |_| {
            let x = params.random_element(&mut rng);
            let i = rng.gen_range(0..=2 * k);
            let got = dec(&gfp_mul_pow_r(&params, &x, i).map_err(err)?)?;
            let ri = BigUint::from(r).modpow(&BigUint::from(i), &p);
            ensure(got == oracle_mod_mul(&p, &dec(&x)?, &ri), || format!("x={x} i={i}"))
        }));

        let fm = FftMultiplier::new(&params)?;
        let bm = BigintMultiplier::new(&params);
        report.checks.push(check(format!("multiply k={k}"), config.trials, |i| {
            let x = if i == 0 { params.minus_one() } else { params.random_element(&mut rng) };
            let y = params.random_element(&mut rng);
            let (zf, zb) = (fm.try_mul(&x, &y).map_err(err)?, bm.mul(&x, &y));
            let want = oracle_mod_mul(&p, &dec(&x)?, &dec(&y)?);
            ensure(zf == zb && dec(&zf)? == want, || format!("x={x} y={y} fft={zf} bigint={zb}"))
        }));

        let n = (4 * k) as u64;
        report.checks.push(check(format!("root search N={n} k={k}"), 1, |_| {
            let g = gfp_find_nth_root(&params, n, seed, &fm).map_err(err)?;
            let w = gfp_primitive_root(&params, n, &g, &fm).map_err(err)?;
            let w2 = gfp_pow(&params, &w, &BigUint::from(n / (2 * k as u64)), &fm);
            ensure(w2 == params.radix_element(), || format!("g={g} w={w}"))
        }));

        // The radix has order 2k; cap the base size at the largest supported one.
        let big_k = (2 * k).min(64);
        let field = GfpField::with_fft(&params)?;
        let e = largest_e(big_k, config.e, MAX_GFP_ORACLE_DFT);
        report.checks.extend(dft_checks(&field, big_k, e, seed, config.trials.min(10), &p, |x| {
            gfp_decode(&params, x).expect("canonical")
        })?);
    }

    let word_k = config.big_k.filter(|k| SUPPORTED_BASE_SIZES.contains(k)).unwrap_or(16);
    let e = largest_e(word_k, config.e, MAX_WORD_ORACLE_DFT);
    for q in [crt.p1(), crt.p2()] {
        let p = BigUint::from(q.modulus());
        report.checks.extend(dft_checks(q, word_k, e, seed, config.trials.min(10), &p, |x| {
            BigUint::from(q.convert_out(*x))
        })?);
    }
    Ok(report)
}

fn largest_e(k: usize, want: u32, max_len: usize) -> u32 {
    let mut e = want.max(1);
    while e > 1 && k.pow(e) > max_len {
        e -= 1;
    }
    e
}

/// Transform vs quadratic oracle, and inverse round trip.
fn dft_checks<F: FftField>(
    field: &F,
    k: usize,
    e: u32,
    seed: u64,
    samples: usize,
    p: &BigUint,
    decode: impl Fn(&F::Elem) -> BigUint,
) -> Result<Vec<CheckResult>> {
    let plan = FftPlan::with_seed(field, k, e, seed)?;
    let inv = plan.inverse(field)?;
    let oracle = OracleField::new(p.clone())?;
    let w = decode(plan.omega());
    let mut rng = rng_for(seed, 100 + k as u64);
    let n = plan.len();
    let over = if p.bits() <= 64 { format!("mod {p}") } else { format!("over {}-bit field", p.bits()) };
    let mut inputs = Vec::new();
    let forward = check(format!("dft K={k} e={e} {over}"), samples, |_| {
        let v: Vec<F::Elem> = (0..n).map(|_| field.random(&mut rng)).collect();
        let want = oracle_naive_dft(&oracle, &v.iter().map(&decode).collect::<Vec<_>>(), &w);
        let mut got = v.clone();
        dft_general(field, &plan, &mut got).map_err(err)?;
        inputs.push(v);
        let got: Vec<BigUint> = got.iter().map(&decode).collect();
        match got.iter().zip(&want).position(|(a, b)| a != b) {
            Some(i) => Err(format!("index {i}: got {} want {}", got[i], want[i])),
            None => Ok(()),
        }
    });
    let roundtrip = check(format!("inverse dft K={k} e={e} {over}"), inputs.len(), |i| {
        let mut v = inputs[i].clone();
        dft_general(field, &plan, &mut v).map_err(err)?;
        dft_inverse(field, &inv, &mut v).map_err(err)?;
        ensure(v == inputs[i], || "round trip differs".into())
    });
    Ok(vec![forward, roundtrip])
}
