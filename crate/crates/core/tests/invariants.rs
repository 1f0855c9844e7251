use std::sync::OnceLock;

use etascan_core::chebyshev::{build_delta, build_psi, build_theta, eval_step, StepFunction};
use etascan_core::closedform::{e_closed, e_derivs_closed, neg_log_deriv, prime_log_sum_p};
use etascan_core::mellin::{e_n_integrals, step_moment};
use etascan_core::primes::{mangoldt_jumps, sieve_primes, MangoldtJumps, PrimeTable};
use etascan_core::theorem::{h_coefficient, scan_convergence, target_term, validate_disk, Route, ScanOptions};
use etascan_core::zeta::{lemma1_lhs, zeta, MIN_RE};
use etascan_core::{c64, ComplexScalar, Error, Precision};
use proptest::prelude::*;

const LIMIT: u64 = 200_000;

struct Fixture {
    table: PrimeTable,
    mangoldt: MangoldtJumps,
    theta: StepFunction,
    psi: StepFunction,
    delta: StepFunction,
}

fn fixture() -> &'static Fixture {
    static F: OnceLock<Fixture> = OnceLock::new();
    F.get_or_init(|| {
        let table = sieve_primes(LIMIT).unwrap();
        let mangoldt = mangoldt_jumps(&table).unwrap();
        let theta = build_theta(&table);
        let psi = build_psi(&mangoldt);
        let delta = build_delta(&psi, &theta).unwrap();
        Fixture {
            table,
            mangoldt,
            theta,
            psi,
            delta,
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sieve_is_prefix_closed(a in 2u64..50_000, extra in 1u64..50_000) {
        let small = sieve_primes(a).unwrap();
        let big = sieve_primes(a + extra).unwrap();
        prop_assert_eq!(small.primes(), &big.primes()[..small.len()]);
        prop_assert!(big.primes().get(small.len()).is_none_or(|&p| p > a));
    }

    #[test]
    fn mangoldt_weights_sum_to_psi(x in 1u64..LIMIT) {
        let f = fixture();
        let direct: f64 = f.mangoldt.entries.iter().take_while(|e| e.0 <= x).map(|e| e.1).sum();
        let psi = eval_step(&f.psi, x as f64).unwrap();
        prop_assert!((direct - psi).abs() <= 1e-9 * psi.max(1.0));
    }

    #[test]
    fn moments_are_linear_in_the_integrand(x in 2.0f64..LIMIT as f64, n in 0u32..6,
                                           re in 1.1f64..3.0, im in -4.0f64..4.0) {
        let f = fixture();
        let s = c64(re, im);
        let psi = step_moment(&f.psi, n, s, x).unwrap().value;
        let split = step_moment(&f.theta, n, s, x).unwrap().value + step_moment(&f.delta, n, s, x).unwrap().value;
        prop_assert!((psi - split).norm() <= 1e-12 * psi.norm().max(1e-300));
    }

    #[test]
    fn crude_tails_bound_later_changes(x1 in 10.0f64..50_000.0, factor in 1.0f64..4.0, n in 0u32..5,
                                       re in 1.2f64..3.0, im in -4.0f64..4.0) {
        let f = fixture();
        let s = c64(re, im);
        let x2 = x1 * factor;
        for g in [&f.psi, &f.delta] {
            let a = step_moment(g, n, s, x1).unwrap();
            let b = step_moment(g, n, s, x2).unwrap();
            prop_assert!(b.tail_crude <= a.tail_crude);
            prop_assert!((b.value - a.value).norm() <= a.tail_crude);
        }
    }

    #[test]
    fn e_closed_conjugate_symmetric(re in 0.55f64..5.0, im in -7.5f64..7.5) {
        let s = c64(re, im);
        if (s - 1.0).norm() > 1e-6 {
            let a = e_closed(s).unwrap();
            let b = e_closed(s.conj()).unwrap();
            prop_assert!((a.conj() - b).norm() <= 1e-12 * a.norm().max(1.0));
        }
    }

    #[test]
    fn lemma1_lhs_finite_across_validated_disks(re in 1.01f64..4.0, im in -3.0f64..3.0,
                                               u in 0.0f64..1.0, rho in 0.0f64..1.0, phi in 0.0f64..std::f64::consts::TAU) {
        let s0 = c64(re, im);
        let lo = (s0 - 0.5).norm();
        let hi = (re - 1.0 / 3.0).min(7.0 - im.abs());
        prop_assume!(lo < hi);
        let h = lo + (hi - lo) * (0.001 + 0.998 * u);
        let disk = validate_disk(s0, h).unwrap();
        let s = disk.s0() + ComplexScalar::from_polar(rho * disk.h(), phi);
        match lemma1_lhs(s) {
            Ok(v) => prop_assert!(v.re.is_finite() && v.im.is_finite()),
            Err(Error::Domain(_)) => prop_assert!(s.re <= MIN_RE),
            Err(e) => prop_assert!(false, "unexpected error at {}: {}", s, e),
        }
    }

    #[test]
    fn scan_rows_follow_their_definitions(re in 1.2f64..4.0, im in -2.0f64..2.0, nmax in 0usize..12) {
        let s0 = c64(re, im);
        let d = (s0 - 0.5).norm();
        let hi = (re - 1.0 / 3.0).min(7.0 - im.abs());
        prop_assume!(d < hi);
        let disk = validate_disk(s0, 0.5 * (d + hi)).unwrap();
        let radius = 0.8 * d.min(re - 0.5).min(8.0 - im.abs());
        let opts = ScanOptions { nmax, radius, samples: 64, precision: Precision::Double };
        let rep = scan_convergence(&disk, Route::Closed, &opts).unwrap();
        prop_assert_eq!(rep.rows.len(), nmax + 1);
        for (n, row) in rep.rows.iter().enumerate() {
            prop_assert_eq!(row.n, n);
            prop_assert_eq!(row.target, target_term(n, s0));
            prop_assert_eq!(row.ratio, row.e / row.target);
            prop_assert_eq!(row.lambda, (row.ratio - 1.0).norm());
            let h = h_coefficient(n, row.e, s0).norm();
            let scale = d.powi(-(n as i32) - 1);
            prop_assert!((h - row.lambda * scale).abs() <= 1e-12 * scale * (1.0 + row.lambda));
        }
    }
}

#[test]
fn delta_growth_is_square_root_sized() {
    let f = fixture();
    for j in f.delta.jumps().iter().filter(|j| j.at >= 100) {
        let x = j.at as f64;
        assert!(j.cumulative <= 3.0 * x.sqrt() * x.ln(), "delta({x}) = {}", j.cumulative);
    }
}

#[test]
fn zeta_matches_partial_sums_right_of_two() {
    let n = 20_000u32;
    for s in [c64(2.0, 0.0), c64(2.0, 7.5), c64(3.3, -4.0), c64(5.0, 1.0)] {
        let head: ComplexScalar = (1..=n).map(|k| (-s * f64::from(k).ln()).exp()).sum();
        let big = f64::from(n);
        // tail by the integral plus its first end correction
        let tail = (-(s - 1.0) * big.ln()).exp() / (s - 1.0) - (-s * big.ln()).exp() * 0.5;
        let bound = (s * (s + 1.0)).norm() / 12.0 * big.powf(-s.re - 1.0);
        let z = zeta(s).unwrap();
        assert!((z - head - tail).norm() <= 1e-10 * z.norm() + bound, "s = {s}");
    }
}

#[test]
fn dilated_prime_sums_carry_the_double_pole() {
    // F(2s)/s − P(2s)/s = (1/s) Σ_p log p · p^(−4s) / (1 − p^(−2s))
    let f = fixture();
    let s = c64(1.5, 0.0);
    let w = s * 2.0;
    let lhs = (neg_log_deriv(w).unwrap() - prime_log_sum_p(w).unwrap()) / s;
    let remainder: ComplexScalar = f
        .table
        .primes()
        .iter()
        .map(|&p| {
            let l = (p as f64).ln();
            let q = (-w * l).exp();
            q * q * l / (1.0 - q)
        })
        .sum::<ComplexScalar>()
        / s;
    assert!((lhs - remainder).norm() < 1e-8);
}

#[test]
fn routes_agree_within_reported_errors() {
    let f = fixture();
    for (s0, r) in [(2.0, 1.3), (3.0, 2.2)] {
        let s0 = c64(s0, 0.0);
        let closed = e_derivs_closed(s0, 10, r, 256, Precision::Double).unwrap();
        let integral = e_n_integrals(&f.theta, 10, s0, LIMIT as f64).unwrap();
        for (n, m) in integral.iter().enumerate() {
            let gap = (closed.derivatives[n] - m.value).norm();
            let allowed = m.tail_empirical + closed.noise_floor[n];
            assert!(gap <= allowed, "s0 = {s0}, n = {n}: gap {gap:e} > {allowed:e}");
        }
    }
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let f = fixture();
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            let e = e_n_integrals(&f.theta, 6, c64(2.5, 0.5), LIMIT as f64).unwrap();
            let d = e_derivs_closed(c64(3.0, 0.0), 20, 2.2, 128, Precision::Double).unwrap();
            (e.iter().map(|m| m.value).collect::<Vec<_>>(), d.derivatives)
        })
    };
    assert_eq!(run(1), run(4));
}

#[test]
fn disk_family_near_one() {
    validate_disk(c64(1.01, 0.0), 0.52).unwrap();
    for k in 1..20 {
        let q = 0.001 * f64::from(k);
        validate_disk(c64(1.0 + q, 0.0), 0.5 + 2.0 * q).unwrap();
    }
}
