use std::io::Cursor;
use std::process::Command;

use gfp_bench::bench::CsvRow;
use gfp_bench::vecfile::{read_vectors, write_vectors, MAGIC};
use gfp_bench::{cmd_bench_fft, cmd_bench_mul, cmd_profile_mul, cmd_verify, Backend, BenchConfig, CliError, FftRow};
use gfp_fft::GfpParams;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn sample_file(count: usize) -> (GfpParams, Vec<u8>, Vec<gfp_fft::GfpElement>) {
    let params = GfpParams::new((1 << 59) + (1 << 16), 8).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut elems: Vec<_> = (0..count).map(|_| params.random_element(&mut rng)).collect();
    if count > 0 {
        elems[0] = params.minus_one();
    }
    let mut buf = Vec::new();
    write_vectors(&mut buf, &params, &elems).unwrap();
    (params, buf, elems)
}

#[test]
fn vector_file_round_trip_is_byte_exact() {
    let (params, buf, elems) = sample_file(7);
    assert_eq!(buf.len(), 4 + 4 + 8 * 3 + 7 * 8 * 8);
    let f = read_vectors(Cursor::new(&buf)).unwrap();
    assert_eq!(f.params, params);
    assert_eq!(f.elements, elems);
    let mut again = Vec::new();
    write_vectors(&mut again, &f.params, &f.elements).unwrap();
    assert_eq!(again, buf);
}

#[test]
fn vector_file_zero_count() {
    let (params, buf, _) = sample_file(0);
    let f = read_vectors(Cursor::new(&buf)).unwrap();
    assert_eq!(f.params, params);
    assert!(f.elements.is_empty());
}

#[test]
fn vector_file_rejects_corruption() {
    let (_, buf, _) = sample_file(3);
    let mut bad = buf.clone();
    bad[0] = b'X';
    assert!(matches!(read_vectors(Cursor::new(&bad)), Err(CliError::Format(_))));
    let mut bad = buf.clone();
    bad[4] = 2;
    assert!(matches!(read_vectors(Cursor::new(&bad)), Err(CliError::Format(_))));
    for cut in [2, 10, 30, buf.len() - 1] {
        assert!(matches!(read_vectors(Cursor::new(&buf[..cut])), Err(CliError::Format(_))), "cut at {cut}");
    }
    let mut long = buf.clone();
    long.push(0);
    assert!(matches!(read_vectors(Cursor::new(&long)), Err(CliError::Format(_))));
    // digit above r
    let mut bad = buf.clone();
    let at = MAGIC.len() + 4 + 24 + 8;
    bad[at..at + 8].copy_from_slice(&u64::MAX.to_le_bytes());
    assert!(matches!(read_vectors(Cursor::new(&bad)), Err(CliError::Format(_))));
}

#[test]
fn verify_passes_and_is_deterministic() {
    let config = BenchConfig { k: Some(8), trials: 3, seed: 42, ..Default::default() };
    let a = cmd_verify(&config).unwrap();
    assert!(a.passed(), "{a}");
    let b = cmd_verify(&config).unwrap();
    assert_eq!(a.to_string(), b.to_string());
    let c = cmd_verify(&BenchConfig { seed: 43, ..config }).unwrap();
    assert!(c.passed());
}

#[test]
fn verify_rejects_oversized_radix() {
    let config = BenchConfig { k: Some(8), r: Some(1 << 62), trials: 1, ..Default::default() };
    match cmd_verify(&config) {
        Err(CliError::Config(msg)) => assert!(msg.contains("incompatible"), "{msg}"),
        other => panic!("expected a configuration error, got {other:?}"),
    }
}

#[test]
fn bench_mul_smoke() {
    let dir = tempfile::tempdir().unwrap();
    let config = BenchConfig { trials: 1, ..Default::default() };
    let rows = cmd_bench_mul(&config, Some(dir.path())).unwrap();
    assert_eq!(rows.iter().map(|r| r.k).collect::<Vec<_>>(), [8, 16, 32, 64]);
    for r in &rows {
        assert!(r.fft_ns.mean > 0.0 && r.bigint_ns.mean > 0.0 && r.oracle_ns.mean > 0.0);
        let f = read_vectors(std::fs::File::open(dir.path().join(format!("mul_k{}.gfpv", r.k))).unwrap()).unwrap();
        assert_eq!(f.elements.len(), 2);
    }
}

#[test]
fn bench_fft_phases_account_for_total() {
    let config = BenchConfig { big_k: Some(16), e: 2, trials: 3, ..Default::default() };
    let rows = cmd_bench_fft(&config, false).unwrap();
    assert_eq!(rows.iter().map(|r| r.backend).collect::<Vec<_>>(), Backend::ALL);
    for r in &rows {
        let phases = r.phases.total().as_secs_f64();
        assert!(phases <= r.seconds.mean * 1.05, "{r:?}");
        assert_eq!(r.record().len(), FftRow::header().len());
    }
    // the radix root makes most base-case twiddles shifts
    assert!(rows[0].cheap_mults > 0);
    assert_eq!(rows[2].cheap_mults, 0);
}

#[test]
fn bench_fft_single_level_is_base_case_only() {
    let config = BenchConfig { big_k: Some(16), e: 1, trials: 2, backend: Some(Backend::GfpFft), ..Default::default() };
    let rows = cmd_bench_fft(&config, false).unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0].phases.twiddle.as_nanos(), 0);
}

#[test]
fn profile_percentages_sum_to_100() {
    let rows = cmd_profile_mul(&BenchConfig { k: Some(8), trials: 5, ..Default::default() }).unwrap();
    assert_eq!(rows[0].k, 8);
    let sum: f64 = rows[0].percentages().iter().map(|(_, p)| p).sum();
    assert!((sum - 100.0).abs() <= 1.0, "{sum}");
}

#[test]
fn binary_reports_and_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_gfp-bench");
    let ok = Command::new(bin).args(["verify", "--k", "8", "--trials", "2", "--seed", "42"]).output().unwrap();
    assert!(ok.status.success());
    let again = Command::new(bin).args(["verify", "--k", "8", "--trials", "2", "--seed", "42"]).output().unwrap();
    assert_eq!(ok.stdout, again.stdout);
    assert!(String::from_utf8_lossy(&ok.stdout).lines().all(|l| !l.starts_with("FAIL")));

    let bad = Command::new(bin).args(["verify", "--k", "8", "--r", "2^62"]).output().unwrap();
    assert!(!bad.status.success());
    assert!(String::from_utf8_lossy(&bad.stderr).contains("configuration error"));

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("mul.csv");
    let st = Command::new(bin)
        .args(["bench-mul", "--k", "16", "--trials", "1", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(st.success());
    let csv = std::fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with("k,r,fft_based_ns,bigint_based_ns,oracle_ns"));
    assert_eq!(csv.lines().count(), 2);

    let bad = Command::new(bin).args(["bench-fft", "--k", "8", "--K", "32"]).output().unwrap();
    assert!(!bad.status.success());
}
