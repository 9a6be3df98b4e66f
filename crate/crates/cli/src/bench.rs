//! `bench-mul`, `bench-fft` and `profile-mul`. Every timed run is preceded by
//! a cross-check of the backends' outputs; a disagreement aborts the run.

use std::fs::File;
use std::io::BufWriter;
use std::path::Path;
use std::time::{Duration, Instant};

use gfp_fft::fft::{dft_general, dft_general_profiled, CountingField, FftField, FftPlan, PhaseTimes};
use gfp_fft::gfp_field::{gfp_decode, GfpElement};
use gfp_fft::oracle::{oracle_mod_mul, OracleField};
use gfp_fft::{BigintMultiplier, FftMultiplier, GfpField, GfpMul, GfpParams, StepTimes};
use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::{Backend, BenchConfig, DEFAULT_ROWS};
use crate::error::{CliError, Result};
use crate::vecfile::write_vectors;

/// Mean and median of a set of samples.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Stat {
    pub mean: f64,
    pub median: f64,
}

impl Stat {
    pub fn of(samples: &mut [f64]) -> Stat {
        if samples.is_empty() {
            return Stat::default();
        }
        samples.sort_by(f64::total_cmp);
        let n = samples.len();
        let median = if n % 2 == 1 { samples[n / 2] } else { (samples[n / 2 - 1] + samples[n / 2]) / 2.0 };
        Stat { mean: samples.iter().sum::<f64>() / n as f64, median }
    }
}

/// Rows that can be written as CSV.
pub trait CsvRow {
    fn header() -> Vec<&'static str>;
    fn record(&self) -> Vec<String>;
}

pub fn write_csv<T: CsvRow>(rows: &[T], out: Option<&Path>) -> Result<()> {
    let sink: Box<dyn std::io::Write> = match out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(std::io::stdout().lock()),
    };
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(T::header())?;
    for r in rows {
        w.write_record(r.record())?;
    }
    w.flush()?;
    Ok(())
}

fn rng(seed: u64, salt: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(salt);
    rng
}

fn nanos(d: Duration) -> f64 {
    d.as_secs_f64() * 1e9
}

// ---- bench-mul ----

#[derive(Debug, Clone, PartialEq)]
pub struct MulRow {
    pub k: usize,
    pub r: u64,
    pub fft_ns: Stat,
    pub bigint_ns: Stat,
    pub oracle_ns: Stat,
    pub pairs: usize,
}

impl MulRow {
    pub fn speedup(&self) -> f64 {
        self.bigint_ns.mean / self.fft_ns.mean
    }
}

impl CsvRow for MulRow {
    fn header() -> Vec<&'static str> {
        vec![
            "k",
            "r",
            "fft_based_ns",
            "bigint_based_ns",
            "oracle_ns",
            "fft_based_median_ns",
            "bigint_based_median_ns",
            "oracle_median_ns",
            "pairs",
        ]
    }

    fn record(&self) -> Vec<String> {
        vec![
            self.k.to_string(),
            self.r.to_string(),
            format!("{:.1}", self.fft_ns.mean),
            format!("{:.1}", self.bigint_ns.mean),
            format!("{:.1}", self.oracle_ns.mean),
            format!("{:.1}", self.fft_ns.median),
            format!("{:.1}", self.bigint_ns.median),
            format!("{:.1}", self.oracle_ns.median),
            self.pairs.to_string(),
        ]
    }
}

/// Times one pair `reps` times and returns ns per call.
fn time_per_call<T>(reps: usize, mut f: impl FnMut() -> T) -> f64 {
    let start = Instant::now();
    for _ in 0..reps {
        std::hint::black_box(f());
    }
    nanos(start.elapsed()) / reps as f64
}

/// Untimed calls so caches, allocator and branch predictors settle.
fn warm_up<T>(pairs: &[(GfpElement, GfpElement)], mut f: impl FnMut(&GfpElement, &GfpElement) -> T) {
    for i in 0..WARM_UP_CALLS {
        let (x, y) = &pairs[i % pairs.len()];
        std::hint::black_box(f(x, y));
    }
}

const WARM_UP_CALLS: usize = 64;

/// `trials` random pairs per row. `vectors_dir` saves each row's inputs as
/// `mul_k{k}.gfpv` (x0, y0, x1, y1, ...).
pub fn cmd_bench_mul(config: &BenchConfig, vectors_dir: Option<&Path>) -> Result<Vec<MulRow>> {
    config.validate()?;
    let mut rows = Vec::new();
    for (k, r) in config.rows() {
        let params = GfpParams::new(r, k)?;
        let fm = FftMultiplier::new(&params)?;
        let bm = BigintMultiplier::new(&params);
        let p = params.modulus();
        let mut rng = rng(config.seed, k as u64);
        let pairs: Vec<(GfpElement, GfpElement)> = (0..config.trials)
            .map(|_| (params.random_element(&mut rng), params.random_element(&mut rng)))
            .collect();
        let decoded: Vec<(BigUint, BigUint)> = pairs
            .iter()
            .map(|(x, y)| Ok((gfp_decode(&params, x)?, gfp_decode(&params, y)?)))
            .collect::<gfp_fft::Result<_>>()?;

        for ((x, y), (a, b)) in pairs.iter().zip(&decoded) {
            let (zf, zb) = (fm.mul(x, y), bm.mul(x, y));
            let zo = oracle_mod_mul(&p, a, b);
            if zf != zb || gfp_decode(&params, &zf)? != zo {
                return Err(CliError::Mismatch(format!("k = {k}, x = {x}, y = {y}: fft {zf}, bigint {zb}, oracle {zo:x}")));
            }
        }
        if let Some(dir) = vectors_dir {
            let flat: Vec<GfpElement> = pairs.iter().flat_map(|(x, y)| [x.clone(), y.clone()]).collect();
            write_vectors(BufWriter::new(File::create(dir.join(format!("mul_k{k}.gfpv")))?), &params, &flat)?;
        }

        let reps = 16;
        warm_up(&pairs, |x, y| fm.mul(x, y));
        warm_up(&pairs, |x, y| bm.mul(x, y));
        let mut fft: Vec<f64> = pairs.iter().map(|(x, y)| time_per_call(reps, || fm.mul(x, y))).collect();
        let mut big: Vec<f64> = pairs.iter().map(|(x, y)| time_per_call(reps, || bm.mul(x, y))).collect();
        let mut ora: Vec<f64> = decoded.iter().map(|(a, b)| time_per_call(reps, || oracle_mod_mul(&p, a, b))).collect();
        rows.push(MulRow {
            k,
            r,
            fft_ns: Stat::of(&mut fft),
            bigint_ns: Stat::of(&mut big),
            oracle_ns: Stat::of(&mut ora),
            pairs: pairs.len(),
        });
    }
    Ok(rows)
}

// ---- bench-fft ----

#[derive(Debug, Clone, PartialEq)]
pub struct FftRow {
    pub big_k: usize,
    pub e: u32,
    pub backend: Backend,
    pub seconds: Stat,
    /// Mean per-phase split.
    pub phases: PhaseTimes,
    pub general_mults: u64,
    pub cheap_mults: u64,
    pub avg_mul_ns: f64,
}

impl CsvRow for FftRow {
    fn header() -> Vec<&'static str> {
        vec![
            "K",
            "e",
            "backend",
            "total_seconds",
            "median_seconds",
            "permutation_seconds",
            "base_case_seconds",
            "twiddle_seconds",
            "general_mults",
            "cheap_mults",
            "avg_mul_ns",
        ]
    }

    fn record(&self) -> Vec<String> {
        vec![
            self.big_k.to_string(),
            self.e.to_string(),
            self.backend.to_string(),
            format!("{:.6}", self.seconds.mean),
            format!("{:.6}", self.seconds.median),
            format!("{:.6}", self.phases.permutation.as_secs_f64()),
            format!("{:.6}", self.phases.base_case.as_secs_f64()),
            format!("{:.6}", self.phases.twiddle.as_secs_f64()),
            self.general_mults.to_string(),
            self.cheap_mults.to_string(),
            format!("{:.1}", self.avg_mul_ns),
        ]
    }
}

/// `(K, e)` pairs run by `--grid`.
pub const FFT_GRID: [(usize, u32); 6] = [(16, 2), (16, 3), (32, 2), (32, 3), (64, 2), (64, 3)];

fn radix_for_k(k: usize, config: &BenchConfig) -> Result<u64> {
    config
        .r
        .filter(|_| config.k == Some(k) || config.k.is_none())
        .or_else(|| DEFAULT_ROWS.iter().find(|(kk, _)| *kk == k).map(|(_, r)| *r))
        .ok_or_else(|| CliError::Config(format!("no radix for k = {k}; pass --r")))
}

pub fn cmd_bench_fft(config: &BenchConfig, grid: bool) -> Result<Vec<FftRow>> {
    config.validate()?;
    let sizes: Vec<(usize, u32)> = if grid {
        FFT_GRID.to_vec()
    } else {
        let (big_k, _, _) = config.fft_field()?;
        vec![(big_k, config.e)]
    };
    let mut rows = Vec::new();
    for (big_k, e) in sizes {
        if big_k % 2 != 0 {
            return Err(CliError::Config(format!("K = {big_k} must be even")));
        }
        let k = big_k / 2;
        let params = GfpParams::new(radix_for_k(k, config)?, k)?;
        rows.extend(bench_fft_one(config, &params, big_k, e)?);
    }
    Ok(rows)
}

fn bench_fft_one(config: &BenchConfig, params: &GfpParams, big_k: usize, e: u32) -> Result<Vec<FftRow>> {
    let fft_field = GfpField::with_fft(params)?;
    let big_field = GfpField::with_bigint(params);
    let plan = FftPlan::with_seed(&fft_field, big_k, e, config.seed)?;
    let big_plan = FftPlan::new(&big_field, big_k, e, plan.omega().clone())?;
    let oracle = OracleField::new(params.modulus())?;
    let oracle_plan = FftPlan::new(&oracle, big_k, e, gfp_decode(params, plan.omega())?)?;

    let mut rng = rng(config.seed, 1000 + big_k as u64 * 8 + e as u64);
    let input: Vec<GfpElement> = (0..plan.len()).map(|_| params.random_element(&mut rng)).collect();
    let oracle_input: Vec<BigUint> = input.iter().map(|x| gfp_decode(params, x)).collect::<gfp_fft::Result<_>>()?;

    let mut a = input.clone();
    dft_general(&fft_field, &plan, &mut a)?;
    let mut b = input.clone();
    dft_general(&big_field, &big_plan, &mut b)?;
    let mut c = oracle_input.clone();
    dft_general(&oracle, &oracle_plan, &mut c)?;
    for i in 0..a.len() {
        if a[i] != b[i] || gfp_decode(params, &a[i])? != c[i] {
            return Err(CliError::Mismatch(format!("K = {big_k}, e = {e}, index {i}: gfp-fft {}, gfp-bigint {}, oracle {:x}", a[i], b[i], c[i])));
        }
    }

    let mut rows = Vec::new();
    for backend in config.backends() {
        let row = match backend {
            Backend::GfpFft => time_fft(config, &fft_field, &plan, &input, backend, GfpField::with_fft(params)?)?,
            Backend::GfpBigint => time_fft(config, &big_field, &big_plan, &input, backend, GfpField::with_bigint(params))?,
            Backend::OracleBigint => time_fft(config, &oracle, &oracle_plan, &oracle_input, backend, oracle.clone())?,
        };
        rows.push(row);
    }
    Ok(rows)
}

fn time_fft<F: FftField>(
    config: &BenchConfig,
    field: &F,
    plan: &FftPlan<F::Elem>,
    input: &[F::Elem],
    backend: Backend,
    count_copy: F,
) -> Result<FftRow> {
    let counting = CountingField::new(count_copy);
    let mut v = input.to_vec();
    dft_general(&counting, plan, &mut v)?;
    let (general_mults, cheap_mults) = counting.counts();

    let mut secs = Vec::with_capacity(config.trials);
    let mut phases = PhaseTimes::default();
    for _ in 0..config.trials {
        let mut v = input.to_vec();
        let start = Instant::now();
        phases += dft_general_profiled(field, plan, &mut v)?;
        secs.push(start.elapsed().as_secs_f64());
        std::hint::black_box(&v);
    }
    let n = config.trials as u32;
    let phases = PhaseTimes { permutation: phases.permutation / n, base_case: phases.base_case / n, twiddle: phases.twiddle / n };

    // Per-multiplication cost of this field, on the transform's own inputs.
    let reps = input.len().min(4096);
    let start = Instant::now();
    for i in 0..reps {
        std::hint::black_box(field.mul(&input[i], &input[(i * 7 + 1) % input.len()]));
    }
    let avg_mul_ns = nanos(start.elapsed()) / reps as f64;

    Ok(FftRow {
        big_k: plan.base_size(),
        e: plan.exponent(),
        backend,
        seconds: Stat::of(&mut secs),
        phases,
        general_mults,
        cheap_mults,
        avg_mul_ns,
    })
}

// ---- profile-mul ----

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileRow {
    pub k: usize,
    pub r: u64,
    /// Per-call median of each stage across trials.
    pub times: StepTimes,
    pub calls: usize,
}

impl ProfileRow {
    /// Share of total time per stage, in percent.
    pub fn percentages(&self) -> [(&'static str, f64); 6] {
        let total = self.times.total().as_secs_f64().max(f64::MIN_POSITIVE);
        self.times.named().map(|(n, d)| (n, 100.0 * d.as_secs_f64() / total))
    }

    /// Stage with the largest share.
    pub fn dominant(&self) -> &'static str {
        self.percentages().into_iter().max_by(|a, b| a.1.total_cmp(&b.1)).map(|(n, _)| n).unwrap_or("")
    }
}

impl CsvRow for ProfileRow {
    fn header() -> Vec<&'static str> {
        vec!["k", "r", "ConvertIn", "Convolution", "ConvertOut", "CRT", "LHC", "FinalStep", "total_ns"]
    }

    fn record(&self) -> Vec<String> {
        let mut v = vec![self.k.to_string(), self.r.to_string()];
        v.extend(self.percentages().iter().map(|(_, p)| format!("{p:.2}")));
        v.push(format!("{:.1}", nanos(self.times.total())));
        v
    }
}

pub fn cmd_profile_mul(config: &BenchConfig) -> Result<Vec<ProfileRow>> {
    config.validate()?;
    let mut rows = Vec::new();
    for (k, r) in config.rows() {
        let params = GfpParams::new(r, k)?;
        let fm = FftMultiplier::new(&params)?;
        let bm = BigintMultiplier::new(&params);
        let mut rng = rng(config.seed, 500 + k as u64);
        let mut per_trial = Vec::with_capacity(config.trials);
        let reps = 8;
        let (wx, wy) = (params.random_element(&mut rng), params.random_element(&mut rng));
        warm_up(&[(wx, wy)], |x, y| fm.mul_profiled(x, y, &mut StepTimes::default()));
        for _ in 0..config.trials {
            let (x, y) = (params.random_element(&mut rng), params.random_element(&mut rng));
            let want = bm.mul(&x, &y);
            let mut scratch = StepTimes::default();
            if fm.mul_profiled(&x, &y, &mut scratch) != want {
                return Err(CliError::Mismatch(format!("k = {k}, x = {x}, y = {y}")));
            }
            let mut times = StepTimes::default();
            for _ in 0..reps {
                std::hint::black_box(fm.mul_profiled(&x, &y, &mut times));
            }
            per_trial.push(times);
        }
        rows.push(ProfileRow { k, r, times: median_steps(&per_trial, reps as u32), calls: config.trials * reps });
    }
    Ok(rows)
}

/// Stage-wise median over trials, scaled to one call. Medians keep a stray
/// preemption in one trial from skewing the split.
fn median_steps(per_trial: &[StepTimes], reps: u32) -> StepTimes {
    let med = |f: fn(&StepTimes) -> Duration| {
        let mut v: Vec<f64> = per_trial.iter().map(|t| f(t).as_secs_f64()).collect();
        Duration::from_secs_f64(Stat::of(&mut v).median / reps as f64)
    };
    StepTimes {
        convert_in: med(|t| t.convert_in),
        convolution: med(|t| t.convolution),
        convert_out: med(|t| t.convert_out),
        crt: med(|t| t.crt),
        lhc: med(|t| t.lhc),
        final_step: med(|t| t.final_step),
    }
}
