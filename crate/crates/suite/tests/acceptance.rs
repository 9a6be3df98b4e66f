//! Acceptance suite: one PASS/FAIL line per criterion, with detail lines
//! underneath. Runs without the libtest harness so the lines always show.
//! Criterion 8 is report-only and never fails the run.

use std::time::Instant;

use gfp_bench::{cmd_bench_fft, cmd_profile_mul, Backend, BenchConfig};
use gfp_fft::fft::{
    dft_general, dft_inverse, stride_permutation, twiddle_apply_general, BaseCase, BaseOp, FftField, FftPlan,
};
use gfp_fft::gfp_field::{gfp_decode, gfp_mul_pow_r};
use gfp_fft::gfp_mult::{
    check_prime_compat, crt_combine, gfp_mul_bigint, gfp_mul_fft, lhc_decompose, NegacyclicPlan, RadixDivisor,
};
use gfp_fft::oracle::{
    oracle_is_probable_prime, oracle_mod_mul, oracle_naive_dft, oracle_negacyclic, OracleField, PlainWordField,
};
use gfp_fft::{BigintMultiplier, CrtParams, FftMultiplier, GfpField, GfpMul, GfpParams, WidePair, WordPrime, P1, P2};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Sparse-radix generalized Fermat primes `r^k + 1`, one per k.
const SPARSE_PRIMES: [(usize, u64); 7] = [
    (2, (1 << 63) + (1 << 53)),
    (4, u64::MAX - (1 << 50) + 1),
    (8, (1 << 63) + (1 << 34)),
    (16, (1 << 62) + (1 << 36)),
    (32, (1 << 62) + (1 << 56)),
    (64, (1 << 63) - (1 << 40)),
    (128, u64::MAX - (1 << 28) + 1),
];

/// Primes that fit the convolution multiplier, per base case.
const MUL_PRIMES: [(usize, u64); 3] = [(8, (1 << 59) + (1 << 16)), (16, (1 << 58) + (1 << 10)), (32, (1 << 56) + (1 << 21))];

struct Criterion {
    id: u32,
    title: &'static str,
    details: Vec<(bool, String)>,
    soft: bool,
}

impl Criterion {
    fn new(id: u32, title: &'static str) -> Self {
        Criterion { id, title, details: Vec::new(), soft: false }
    }

    fn record(&mut self, ok: bool, detail: impl Into<String>) {
        self.details.push((ok, detail.into()));
    }

    fn passed(&self) -> bool {
        self.details.iter().all(|(ok, _)| *ok)
    }

    fn print(&self, secs: f64) {
        let status = match (self.passed(), self.soft) {
            (true, _) => "PASS",
            (false, false) => "FAIL",
            (false, true) => "FLAG",
        };
        println!("criterion {}: {status}  {}  ({secs:.1} s)", self.id, self.title);
        for (ok, d) in &self.details {
            println!("    {} {d}", if *ok { "ok  " } else { "FAIL" });
        }
    }
}

fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// ---- 1 ----

fn multiplication(c: &mut Criterion) {
    const PAIRS: usize = 10_000;
    let crt = CrtParams::default();
    for (k, r) in MUL_PRIMES.into_iter().chain([SPARSE_PRIMES[2]]) {
        let params = GfpParams::new(r, k).unwrap();
        let p = params.modulus();
        let bm = BigintMultiplier::new(&params);
        let fm = FftMultiplier::new(&params);
        let mut rng = seeded(1000 + k as u64 + r % 97);
        let mut bad_fft = 0usize;
        let mut bad_bigint = 0usize;
        let mut first = None;
        for i in 0..PAIRS {
            let x = if i == 0 { params.minus_one() } else { params.random_element(&mut rng) };
            let y = if i == 1 { params.minus_one() } else { params.random_element(&mut rng) };
            let want = oracle_mod_mul(&p, &gfp_decode(&params, &x).unwrap(), &gfp_decode(&params, &y).unwrap());
            let zb = if i < 4 { gfp_mul_bigint(&params, &x, &y).unwrap() } else { bm.mul(&x, &y) };
            if gfp_decode(&params, &zb).unwrap() != want {
                bad_bigint += 1;
            }
            // the free function on a few pairs, the prebuilt plans on the rest
            let zf = match (&fm, i < 4) {
                (_, true) => gfp_mul_fft(&params, &crt, &x, &y),
                (Ok(fm), false) => Ok(fm.mul(&x, &y)),
                (Err(e), false) => Err(e.clone()),
            };
            match zf {
                Ok(z) if z == zb && gfp_decode(&params, &z).unwrap() == want => {}
                Ok(z) => {
                    bad_fft += 1;
                    first.get_or_insert_with(|| format!("x={x} y={y} fft={z}"));
                }
                Err(e) => {
                    bad_fft += 1;
                    first.get_or_insert_with(|| format!("gfp_mul_fft: {e}"));
                }
            }
        }
        let mut line = format!(
            "k={k} r={r}: {PAIRS} pairs, fft mismatches {bad_fft}, bigint mismatches {bad_bigint}"
        );
        if let Some(f) = first {
            line += &format!("; first: {f}");
        }
        if bad_fft > 0 {
            let rep = check_prime_compat(&params, &crt);
            line += &format!(
                "; k*r^2 vs (p1*p2-1)/2 slack {:.2} bits (bound {}), no pair of word primes < 2^63 can hold it",
                rep.slack_bits,
                if rep.bound_ok { "ok" } else { "exceeded" }
            );
        }
        c.record(bad_fft == 0 && bad_bigint == 0, line);
    }
}

// ---- 2, 3 ----

fn word_transform(c2: &mut Criterion, c3: &mut Criterion, q: u64, k: usize, e: u32) {
    let field = WordPrime::new(q).unwrap();
    let plan = FftPlan::with_seed(&field, k, e, 7).unwrap();
    let inv = plan.inverse(&field).unwrap();
    let plain = PlainWordField::new(q);
    let w = field.convert_out(*plan.omega());
    let n = plan.len();
    let mut rng = seeded(q ^ (k as u64 * 31 + e as u64));
    let mut inputs: Vec<Vec<_>> = vec![(0..n).map(|i| field.from_u64((i == 0) as u64)).collect()];
    inputs.extend((0..2).map(|_| (0..n).map(|_| FftField::random(&field, &mut rng)).collect::<Vec<_>>()));
    let mut ok = true;
    for v in &inputs {
        let want = oracle_naive_dft(&plain, &v.iter().map(|&x| field.convert_out(x)).collect::<Vec<_>>(), &w);
        let mut got = v.clone();
        dft_general(&field, &plan, &mut got).unwrap();
        ok &= got.iter().map(|&x| field.convert_out(x)).collect::<Vec<_>>() == want;
    }
    c2.record(ok, format!("GF({q}) K={k} e={e} N={n}: {} vectors vs naive DFT", inputs.len()));
    let mut fails = 0;
    for _ in 0..100 {
        let v: Vec<_> = (0..n).map(|_| FftField::random(&field, &mut rng)).collect();
        let mut w = v.clone();
        dft_general(&field, &plan, &mut w).unwrap();
        dft_inverse(&field, &inv, &mut w).unwrap();
        fails += (w != v) as usize;
    }
    c3.record(fails == 0, format!("GF({q}) K={k} e={e}: 100 round trips, {fails} differ"));
}

fn gfp_transform(c2: &mut Criterion, c3: &mut Criterion, k: usize, r: u64, big_k: usize, e: u32) {
    let params = GfpParams::new(r, k).unwrap();
    let field = GfpField::with_fft(&params).unwrap();
    let plan = FftPlan::with_seed(&field, big_k, e, 7).unwrap();
    let inv = plan.inverse(&field).unwrap();
    let oracle = OracleField::new(params.modulus()).unwrap();
    let dec = |x: &gfp_fft::GfpElement| gfp_decode(&params, x).unwrap();
    let w = dec(plan.omega());
    let n = plan.len();
    let mut rng = seeded(r);
    let mut ok = true;
    for _ in 0..2 {
        let v: Vec<_> = (0..n).map(|_| field.random(&mut rng)).collect();
        let want = oracle_naive_dft(&oracle, &v.iter().map(dec).collect::<Vec<BigUint>>(), &w);
        let mut got = v.clone();
        dft_general(&field, &plan, &mut got).unwrap();
        ok &= got.iter().map(dec).collect::<Vec<_>>() == want;
    }
    c2.record(ok, format!("GF(({r})^{k}+1) K={big_k} e={e} N={n}: 2 vectors vs naive DFT"));
    let mut fails = 0;
    for _ in 0..100 {
        let v: Vec<_> = (0..n).map(|_| field.random(&mut rng)).collect();
        let mut w = v.clone();
        dft_general(&field, &plan, &mut w).unwrap();
        dft_inverse(&field, &inv, &mut w).unwrap();
        fails += (w != v) as usize;
    }
    c3.record(fails == 0, format!("GF(({r})^{k}+1) K={big_k} e={e}: 100 round trips, {fails} differ"));
}

// ---- 4 ----

fn convolution_crt_lhc(c: &mut Criterion) {
    let crt = CrtParams::default();
    for q in [crt.p1(), crt.p2()] {
        let m = q.modulus();
        for k in (0..=6).map(|i| 1usize << i) {
            let plan = NegacyclicPlan::new(*q, k).unwrap();
            let mut rng = seeded(m ^ k as u64);
            let mut bad = 0;
            for _ in 0..10_000 {
                let x: Vec<u64> = (0..k).map(|_| rng.gen_range(0..m)).collect();
                let y: Vec<u64> = (0..k).map(|_| rng.gen_range(0..m)).collect();
                bad += (plan.convolve(&x, &y).unwrap() != oracle_negacyclic(&x, &y, m)) as usize;
            }
            c.record(bad == 0, format!("negacyclic k={k} mod {m}: 10000 pairs, {bad} mismatches"));
        }
    }

    let (p1, p2) = (crt.p1().modulus() as i128, crt.p2().modulus() as i128);
    let half = crt.half_range().to_u128() as i128;
    let mut rng = seeded(44);
    let mut bad = 0;
    for i in 0..1_000_000u64 {
        let (a1, a2) = match i {
            0 => (0, 0),
            1 => (p1 as u64 - 1, p2 as u64 - 1),
            2 => (p1 as u64 - 1, 0),
            _ => (rng.gen_range(0..p1 as u64), rng.gen_range(0..p2 as u64)),
        };
        let v = crt_combine(a1, a2, &crt).unwrap().to_i128();
        let ok = v.rem_euclid(p1) == a1 as i128 && v.rem_euclid(p2) == a2 as i128 && -half <= v && v <= half;
        bad += (!ok) as usize;
    }
    c.record(bad == 0, format!("crt_combine: 1000000 pairs, congruence and |v| <= (p1*p2-1)/2, {bad} violations"));

    for (k, r) in MUL_PRIMES.into_iter().chain([(64, (1u64 << 55) - (1 << 6))]) {
        let div = RadixDivisor::new(r).unwrap();
        let (r128, bound) = (r as u128, k as u128 * r as u128 * r as u128);
        let edges = [0, 1, r128 - 1, r128, r128 * r128 - 1, r128 * r128, bound - 1, bound];
        let mut rng = seeded(r);
        let mut bad = 0;
        for i in 0..1_000_000usize {
            let s = edges.get(i).copied().unwrap_or_else(|| rng.gen_range(0..=bound));
            let t = lhc_decompose(WidePair::from_u128(s), &div).unwrap();
            let back = t.l as u128 + t.h as u128 * r128 + t.c as u128 * r128 * r128;
            bad += (t.l >= r || t.h >= r || back != s) as usize;
        }
        c.record(bad == 0, format!("lhc_decompose r={r}: 1000000 values in [0, {k}*r^2], {bad} violations"));
    }
}

// ---- 5 ----

fn montgomery(c: &mut Criterion) {
    for q in [P1, P2] {
        let f = WordPrime::new(q).unwrap();
        let mut rng = seeded(q);
        let mut bad = 0;
        for i in 0..1_000_000u64 {
            let (a, b) = if i < 3 { (q - 1 - i, q - 1) } else { (rng.gen_range(0..q), rng.gen_range(0..q)) };
            let got = f.convert_out(f.mont_mul(f.convert_in(a), f.convert_in(b)));
            bad += (got as u128 != a as u128 * b as u128 % q as u128) as usize;
        }
        c.record(bad == 0, format!("mont_mul mod {q}: 1000000 pairs, {bad} mismatches"));
        let mut bad = 0;
        for _ in 0..10_000 {
            let a = f.convert_in(rng.gen_range(1..q));
            bad += (f.mont_mul(a, f.inv(a).unwrap()) != f.one()) as usize;
        }
        c.record(bad == 0, format!("inverse mod {q}: 10000 samples, {bad} mismatches"));
    }
}

// ---- 6 ----

fn structure(c: &mut Criterion) {
    let mut v: Vec<u32> = (0..8).collect();
    stride_permutation(&mut v, 2, 4).unwrap();
    c.record(v == [0, 2, 4, 6, 1, 3, 5, 7], format!("L(2,4) on [0..7] = {v:?}"));

    let mut ok = true;
    for (m, n) in [(2, 4), (3, 5), (16, 16), (64, 8), (8, 64), (17, 33), (1, 9)] {
        let orig: Vec<u64> = (0..(m * n) as u64).collect();
        let mut w = orig.clone();
        stride_permutation(&mut w, m, n).unwrap();
        stride_permutation(&mut w, n, m).unwrap();
        ok &= w == orig;
    }
    c.record(ok, "L(n,m) after L(m,n) is the identity for 7 shapes");

    for (k, r) in MUL_PRIMES {
        let params = GfpParams::new(r, k).unwrap();
        let field = GfpField::with_fft(&params).unwrap();
        let plan = FftPlan::with_seed(&field, 2 * k, 2, 3).unwrap();
        let (n, big_k) = (plan.len(), plan.base_size());
        let mut rng = seeded(r ^ 6);
        let mut ok = plan.cheap_shift() == Some(1);
        for _ in 0..20 {
            let x = field.random(&mut rng);
            let i = rng.gen_range(0..big_k);
            let j = rng.gen_range(0..n / big_k);
            let cheap = field.mul(&gfp_mul_pow_r(&params, &x, i).unwrap(), &field.pow(plan.omega(), j as u64));
            ok &= cheap == field.mul(&x, &field.pow(plan.omega(), (i * n / big_k + j) as u64));
        }
        c.record(ok, format!("(x*r^i)*w^j = x*w^(iN/K+j), k={k} K={big_k} N={n}, 20 samples"));
    }

    // unrolled DFT8: the second twiddle layer is w, w^2, w^3 on a5, a3, a7
    use BaseOp::{Dft2 as D, Twiddle as T};
    let want = vec![
        vec![D(0, 4), D(2, 6), D(1, 5), D(3, 7)],
        vec![T(6, 2), T(7, 2)],
        vec![D(0, 2), D(4, 6), D(1, 3), D(5, 7)],
        vec![T(5, 1), T(3, 2), T(7, 3)],
        vec![D(0, 1), D(4, 5), D(2, 3), D(6, 7)],
    ];
    let b = BaseCase::new(8).unwrap();
    c.record(
        b.stages() == want.as_slice() && b.swaps() == [(1, 4), (3, 6)],
        "DFT8 transcript: 3 butterfly layers, twiddles w^2,w^2 then w,w^2,w^3, output swaps (1,4),(3,6)",
    );

    let (k, r) = SPARSE_PRIMES[1];
    let params = GfpParams::new(r, k).unwrap();
    let field = GfpField::with_bigint(&params);
    let rpow = |i| gfp_mul_pow_r(&params, &params.one(), i).unwrap();
    let mut ones = vec![params.one(); 8];
    twiddle_apply_general(&field, &mut ones, 4, 2, &rpow(1)).unwrap();
    let want: Vec<_> = [0, 0, 0, 0, 0, 1, 2, 3].iter().map(|&i| rpow(i)).collect();
    c.record(ones == want, "D_{2,4} = (1,1,1,1,1,r,r^2,r^3) for p = r^4+1");
}

// ---- 7 ----

fn parameters(c: &mut Criterion) {
    for (k, r) in SPARSE_PRIMES {
        let p = GfpParams::new(r, k).unwrap().modulus();
        let rounds = 16;
        let start = Instant::now();
        let ok = oracle_is_probable_prime(&p, rounds);
        c.record(
            ok,
            format!("({r})^{k}+1 ({} bits): probable prime, {rounds} Miller-Rabin rounds, {:.1} s", p.bits(), start.elapsed().as_secs_f64()),
        );
    }
    let crt = CrtParams::default();
    for (k, r) in MUL_PRIMES {
        let rep = check_prime_compat(&GfpParams::new(r, k).unwrap(), &crt);
        c.record(rep.passes(), format!("check_prime_compat k={k} r={r}: passes, slack {:.2} bits", rep.slack_bits));
    }
    let rep = check_prime_compat(&GfpParams::new(1 << 62, 8).unwrap(), &crt);
    c.record(!rep.passes(), format!("check_prime_compat k=8 r=2^62: rejected, slack {:.2} bits", rep.slack_bits));
}

// ---- 8 ----

fn performance(c: &mut Criterion) {
    c.soft = true;
    let config = BenchConfig { big_k: Some(16), e: 3, trials: 5, ..Default::default() };
    let rows = cmd_bench_fft(&config, false).unwrap();
    let t = |b| rows.iter().find(|r| r.backend == b).unwrap().seconds.median;
    let (fft, big) = (t(Backend::GfpFft), t(Backend::GfpBigint));
    c.record(
        fft <= big,
        format!("bench-fft K=16 e=3: gfp-fft {fft:.4} s, gfp-bigint {big:.4} s, ratio {:.2} (expected > 1)", big / fft),
    );
    let rows = cmd_profile_mul(&BenchConfig { trials: 50, ..Default::default() }).unwrap();
    let conv: Vec<f64> = rows.iter().map(|r| r.percentages()[1].1).collect();
    let k64 = rows.iter().find(|r| r.k == 64).unwrap();
    c.record(
        k64.dominant() == "Convolution",
        format!("profile-mul k=64: dominant step {} ({:.1}%)", k64.dominant(), conv[3]),
    );
    let shares: Vec<String> = rows.iter().zip(&conv).map(|(r, p)| format!("k={} {p:.1}%", r.k)).collect();
    c.record(conv.windows(2).all(|w| w[0] <= w[1]), format!("convolution share by k: {}", shares.join(", ")));
}

fn run(id: u32, title: &'static str, f: impl FnOnce(&mut Criterion)) -> Criterion {
    let mut c = Criterion::new(id, title);
    let start = Instant::now();
    f(&mut c);
    c.print(start.elapsed().as_secs_f64());
    c
}

fn main() {
    let mut all = vec![run(1, "multiplication: gfp_mul_fft = gfp_mul_bigint = oracle_mod_mul", multiplication)];

    // 2 and 3 share their configurations
    let mut c3 = Criterion::new(3, "inverse round trip: dft_inverse after dft_general is the identity");
    let start = Instant::now();
    all.push(run(2, "transform: dft_general = oracle_naive_dft (time includes the round trips)", |c2| {
        for q in [P1, P2] {
            for k in [8, 16, 32, 64] {
                word_transform(c2, &mut c3, q, k, 2);
            }
        }
        gfp_transform(c2, &mut c3, 8, MUL_PRIMES[0].1, 16, 2);
        word_transform(c2, &mut c3, P1, 16, 3);
    }));
    c3.print(start.elapsed().as_secs_f64());
    all.push(c3);

    all.push(run(4, "negacyclic convolution, CRT and (l, h, c) split", convolution_crt_lhc));
    all.push(run(5, "Montgomery arithmetic", montgomery));
    all.push(run(6, "structural checks", structure));
    all.push(run(7, "parameter validation", parameters));
    all.push(run(8, "directional performance (report only)", performance));

    let failed: Vec<u32> = all.iter().filter(|c| !c.passed() && !c.soft).map(|c| c.id).collect();
    println!("acceptance: {} of {} criteria pass", all.len() - failed.len(), all.len());
    if !failed.is_empty() {
        println!("failing: {failed:?}");
        std::process::exit(1);
    }
}
