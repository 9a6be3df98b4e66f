use gfp_fft::fft::{
    dft_base, dft_general, dft_inverse, stride_permutation, twiddle_apply_general, BaseCase, BaseOp, FftField, FftPlan,
};
use gfp_fft::gfp_field::{gfp_decode, gfp_encode_uint, gfp_mul_pow_r, GfpParams};
use gfp_fft::oracle::{oracle_naive_dft, OracleField, PlainWordField};
use gfp_fft::{GfpField, WordPrime, P1, P2};
use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn word_case(q: u64, k: usize, e: u32, seed: u64) {
    let field = WordPrime::new(q).unwrap();
    let plan = FftPlan::with_seed(&field, k, e, seed).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v: Vec<_> = (0..plan.len()).map(|_| field.random(&mut rng)).collect();
    let plain = PlainWordField::new(q);
    let std: Vec<u64> = v.iter().map(|&x| field.convert_out(x)).collect();
    let want = oracle_naive_dft(&plain, &std, &field.convert_out(*plan.omega()));
    let mut got = v.clone();
    dft_general(&field, &plan, &mut got).unwrap();
    let got: Vec<u64> = got.iter().map(|&x| field.convert_out(x)).collect();
    assert_eq!(got, want, "q = {q}, K = {k}, e = {e}");

    let inv = plan.inverse(&field).unwrap();
    let mut back = v.clone();
    dft_general(&field, &plan, &mut back).unwrap();
    dft_inverse(&field, &inv, &mut back).unwrap();
    assert_eq!(back, v);
}

#[test]
fn word_fields_match_naive_dft() {
    for q in [P1, P2] {
        for k in [8, 16, 32, 64] {
            word_case(q, k, 2, k as u64);
        }
        word_case(q, 16, 1, 3);
    }
    word_case(P1, 16, 3, 99);
    word_case(P1, 8, 3, 7);
}

fn gfp_case(r: u64, k: usize, e: u32, seed: u64) {
    let params = GfpParams::new(r, k).unwrap();
    let field = GfpField::with_fft(&params).unwrap();
    let plan = FftPlan::with_seed(&field, 2 * k, e, seed).unwrap();
    assert_eq!(plan.cheap_shift(), Some(1));
    let oracle = OracleField::new(params.modulus()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v: Vec<_> = (0..plan.len()).map(|_| field.random(&mut rng)).collect();
    let dec = |x: &_| gfp_decode(&params, x).unwrap();
    let want = oracle_naive_dft(&oracle, &v.iter().map(dec).collect::<Vec<_>>(), &dec(plan.omega()));
    let mut got = v.clone();
    dft_general(&field, &plan, &mut got).unwrap();
    assert_eq!(got.iter().map(dec).collect::<Vec<_>>(), want);

    let inv = plan.inverse(&field).unwrap();
    assert_eq!(inv.cheap_shift(), Some(2 * k - 1));
    dft_inverse(&field, &inv, &mut got).unwrap();
    assert_eq!(got, v);
}

#[test]
fn gfp_field_matches_naive_dft() {
    gfp_case((1 << 59) + (1 << 16), 8, 2, 5);
    gfp_case((1 << 59) + (1 << 16), 8, 1, 6);
    gfp_case((1 << 58) + (1 << 10), 16, 2, 7);
}

#[test]
fn base_case_over_gf257() {
    let field = WordPrime::new(257).unwrap();
    let w = field.convert_in(4);
    assert_eq!(field.pow(w, 4), field.neg(field.one()));
    let plain = PlainWordField::new(257);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..20 {
        let v: Vec<_> = (0..8).map(|_| FftField::random(&field, &mut rng)).collect();
        let want = oracle_naive_dft(&plain, &v.iter().map(|&x| field.convert_out(x)).collect::<Vec<_>>(), &4);
        let mut got = v.clone();
        dft_base(&field, &mut got, &w).unwrap();
        assert_eq!(got.iter().map(|&x| field.convert_out(x)).collect::<Vec<_>>(), want);
    }
}

#[test]
fn base_case_trivial_inputs() {
    let field = WordPrime::new(P1).unwrap();
    for k in [8usize, 16, 32, 64] {
        let w = field.primitive_root(k as u64, 0).unwrap();
        let mut delta = vec![field.zero(); k];
        delta[0] = field.one();
        dft_base(&field, &mut delta, &w).unwrap();
        assert!(delta.iter().all(|&x| x == field.one()));
        let c = field.convert_in(12345);
        let mut constant = vec![c; k];
        dft_base(&field, &mut constant, &w).unwrap();
        assert_eq!(constant[0], field.convert_in(12345 * k as u64));
        assert!(constant[1..].iter().all(|&x| x == field.zero()));
    }
    let mut v = vec![field.zero(); 12];
    assert!(dft_base(&field, &mut v, &field.one()).is_err());
}

#[test]
fn dft8_program_follows_the_unrolled_listing() {
    use BaseOp::{Dft2 as D, Twiddle as T};
    let b = BaseCase::new(8).unwrap();
    let want = vec![
        vec![D(0, 4), D(2, 6), D(1, 5), D(3, 7)],
        vec![T(6, 2), T(7, 2)],
        vec![D(0, 2), D(4, 6), D(1, 3), D(5, 7)],
        vec![T(5, 1), T(3, 2), T(7, 3)],
        vec![D(0, 1), D(4, 5), D(2, 3), D(6, 7)],
    ];
    assert_eq!(b.stages(), want.as_slice());
    assert_eq!(b.swaps(), &[(1, 4), (3, 6)]);
}

#[test]
fn twiddle_diagonals_for_r4_field() {
    let r = u64::MAX - (1 << 50) + 1; // 2^64 - 2^50
    let params = GfpParams::new(r, 4).unwrap();
    let field = GfpField::with_bigint(&params);
    let rpow = |i| gfp_mul_pow_r(&params, &params.one(), i).unwrap();
    let mut ones = vec![params.one(); 8];
    twiddle_apply_general(&field, &mut ones, 4, 2, &rpow(1)).unwrap();
    let want: Vec<_> = [0, 0, 0, 0, 0, 1, 2, 3].iter().map(|&i| rpow(i)).collect();
    assert_eq!(ones, want);
    let mut ones = vec![params.one(); 4];
    twiddle_apply_general(&field, &mut ones, 2, 2, &rpow(2)).unwrap();
    assert_eq!(ones, vec![rpow(0), rpow(0), rpow(0), rpow(2)]);
}

#[test]
fn twiddle_matches_explicit_diagonal() {
    let field = WordPrime::new(P1).unwrap();
    let plan = FftPlan::with_seed(&field, 8, 2, 3).unwrap();
    let w = *plan.omega();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let v: Vec<_> = (0..64).map(|_| FftField::random(&field, &mut rng)).collect();
    let mut fast = v.clone();
    plan.twiddle_apply(&field, &mut fast, 8, 8, 1).unwrap();
    for j in 0..8 {
        for i in 0..8 {
            let want = field.mont_mul(v[j * 8 + i], field.pow(w, (i * j) as u64));
            assert_eq!(fast[j * 8 + i], want);
        }
    }
    let mut general = v.clone();
    twiddle_apply_general(&field, &mut general, 8, 8, &w).unwrap();
    assert_eq!(general, fast);
}

#[test]
fn cheap_twiddle_identity() {
    let params = GfpParams::new((1 << 59) + (1 << 16), 8).unwrap();
    let field = GfpField::with_fft(&params).unwrap();
    let plan = FftPlan::with_seed(&field, 16, 2, 8).unwrap();
    let n = plan.len();
    let big_k = plan.base_size();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..50 {
        let x = field.random(&mut rng);
        let i = rand::Rng::gen_range(&mut rng, 0..big_k);
        let j = rand::Rng::gen_range(&mut rng, 0..n / big_k);
        // (x·r^i)·ω^j against x·ω^{i·N/K + j} by general multiplication
        let cheap = field.mul(&gfp_mul_pow_r(&params, &x, i).unwrap(), &field.pow(plan.omega(), j as u64));
        let general = field.mul(&x, &field.pow(plan.omega(), (i * n / big_k + j) as u64));
        assert_eq!(cheap, general);
        assert_eq!(plan.mul_omega_power(&field, &x, i * n / big_k + j), general);
    }
    let mut v: Vec<_> = (0..n).map(|_| field.random(&mut rng)).collect();
    let mut general = v.clone();
    plan.twiddle_apply(&field, &mut v, 16, 16, 1).unwrap();
    twiddle_apply_general(&field, &mut general, 16, 16, plan.omega()).unwrap();
    assert_eq!(v, general);
}

#[test]
fn inverse_special_vectors() {
    let field = WordPrime::new(P2).unwrap();
    let plan = FftPlan::with_seed(&field, 16, 2, 1).unwrap();
    let inv = plan.inverse(&field).unwrap();
    let mut zero = vec![field.zero(); 256];
    dft_inverse(&field, &inv, &mut zero).unwrap();
    assert!(zero.iter().all(|&x| x == field.zero()));
    let mut ones = vec![field.one(); 256];
    dft_inverse(&field, &inv, &mut ones).unwrap();
    assert_eq!(ones[0], field.one());
    assert!(ones[1..].iter().all(|&x| x == field.zero()));
}

#[test]
fn linearity_and_convolution_theorem() {
    let field = WordPrime::new(P1).unwrap();
    let plan = FftPlan::with_seed(&field, 8, 2, 11).unwrap();
    let inv = plan.inverse(&field).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let f: Vec<_> = (0..64).map(|_| FftField::random(&field, &mut rng)).collect();
    let g: Vec<_> = (0..64).map(|_| FftField::random(&field, &mut rng)).collect();
    let (a, b) = (field.convert_in(3), field.convert_in(7));
    let mut lhs: Vec<_> = f.iter().zip(&g).map(|(&x, &y)| field.add(field.mont_mul(a, x), field.mont_mul(b, y))).collect();
    dft_general(&field, &plan, &mut lhs).unwrap();
    let (mut ff, mut gg) = (f.clone(), g.clone());
    dft_general(&field, &plan, &mut ff).unwrap();
    dft_general(&field, &plan, &mut gg).unwrap();
    let rhs: Vec<_> = ff.iter().zip(&gg).map(|(&x, &y)| field.add(field.mont_mul(a, x), field.mont_mul(b, y))).collect();
    assert_eq!(lhs, rhs);

    let mut prod: Vec<_> = ff.iter().zip(&gg).map(|(&x, &y)| field.mont_mul(x, y)).collect();
    dft_inverse(&field, &inv, &mut prod).unwrap();
    let fs: Vec<u64> = f.iter().map(|&x| field.convert_out(x)).collect();
    let gs: Vec<u64> = g.iter().map(|&x| field.convert_out(x)).collect();
    let want = gfp_fft::gfp_mult::cyclic_convolution(&fs, &gs, &field).unwrap();
    assert_eq!(prod.iter().map(|&x| field.convert_out(x)).collect::<Vec<_>>(), want);
    assert_eq!(want, gfp_fft::oracle::oracle_cyclic(&fs, &gs, P1));
}

#[test]
fn stride_permutation_pairs() {
    let mut v: Vec<u32> = (0..8).collect();
    stride_permutation(&mut v, 2, 4).unwrap();
    assert_eq!(v, [0, 2, 4, 6, 1, 3, 5, 7]);
    for (m, n) in [(3, 5), (16, 16), (64, 8), (1, 9), (17, 33)] {
        let orig: Vec<u64> = (0..(m * n) as u64).collect();
        let mut w = orig.clone();
        stride_permutation(&mut w, m, n).unwrap();
        stride_permutation(&mut w, n, m).unwrap();
        assert_eq!(w, orig, "({m}, {n})");
    }
}

#[test]
fn plan_rejects_bad_roots() {
    let field = WordPrime::new(P1).unwrap();
    assert!(FftPlan::new(&field, 8, 2, field.one()).is_err());
    let w = field.primitive_root(32, 0).unwrap();
    assert!(FftPlan::new(&field, 8, 2, w).is_err());
    assert!(FftPlan::with_seed(&field, 4, 2, 0).is_err());
    let plan = FftPlan::with_seed(&field, 8, 2, 0).unwrap();
    let mut short = vec![field.zero(); 63];
    assert!(dft_general(&field, &plan, &mut short).is_err());
}

#[test]
fn gfp_plan_rejects_oversized_base() {
    // K = 32 > 2k: the base root is not a power of r
    let params = GfpParams::new((1 << 59) + (1 << 16), 8).unwrap();
    let field = GfpField::with_fft(&params).unwrap();
    assert!(FftPlan::with_seed(&field, 32, 1, 0).is_err());
    let x = gfp_encode_uint(&params, &BigUint::from(5u32));
    assert_eq!(gfp_decode(&params, &x).unwrap(), BigUint::from(5u32));
}
