use std::collections::BTreeMap;

use hmlab::character::DirichletCharacter;
use hmlab::evaluator::dirichlet_poly;
use hmlab::evaluator::{eval_hm, eval_hm_series, eval_hm_with, terms_for_tolerance, EvalOptions};
use hmlab::lfunction::{CustomMeta, SelbergLFunction};
use hmlab::polynomial::Polynomial;
use hmlab::primes::factorize;
use hmlab::random::{sample_phases, PhaseAssignment};
use hmlab::region::{CompactSetContext, CompactShape};
use hmlab::sampling::{energy_distance, sample_q, Provenance, SampleParams, SampleSet};
use hmlab::shifts::{admissible_shifts, excluded_measure, IntervalSet};
use hmlab::smoothing::smoothed_split;
use hmlab::witness::{witness_search, WitnessOptions};
use hmlab::zeros::ZeroSet;
use num_complex::Complex64;
use proptest::prelude::*;

fn chi4() -> SelbergLFunction {
    SelbergLFunction::dirichlet("chi4", DirichletCharacter::kronecker(-4).unwrap()).unwrap()
}

fn custom() -> SelbergLFunction {
    let mut map = BTreeMap::new();
    for &p in &[2u64, 3, 5, 7, 11, 13] {
        map.insert((p, 1), Complex64::new(0.5, 0.25 * (p as f64).sin()));
        map.insert((p, 2), Complex64::new(-0.125, 0.0));
    }
    SelbergLFunction::custom("toy", map, CustomMeta::default()).unwrap()
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn disk() -> CompactSetContext {
    CompactSetContext::new(CompactShape::disk(0.85, 0.0, 0.02), 0.5).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn coefficients_are_multiplicative(m in 1u64..100, n in 1u64..100) {
        prop_assume!(gcd(m, n) == 1);
        for l in [chi4(), custom()] {
            let lhs = l.dirichlet_coefficient(m * n);
            let rhs = l.dirichlet_coefficient(m) * l.dirichlet_coefficient(n);
            prop_assert!((lhs - rhs).norm() <= 1e-14 * (1.0 + rhs.norm()));
        }
    }

    #[test]
    fn zeta_von_mangoldt_is_classical(n in 1u64..100_000) {
        let f = factorize(n);
        let want = if f.len() == 1 { (f[0].0 as f64).ln() } else { 0.0 };
        let got = SelbergLFunction::zeta().von_mangoldt(n);
        prop_assert!((got.re - want).abs() < 1e-12 && got.im == 0.0);
    }

    #[test]
    fn interval_set_is_disjoint_and_additive(raw in prop::collection::vec((0.0f64..100.0, 0.0f64..5.0), 0..30)) {
        let s = IntervalSet::from_raw(raw.iter().map(|&(a, w)| (a, a + w)).collect());
        for w in s.intervals.windows(2) {
            prop_assert!(w[0].1 < w[1].0);
        }
        let sum: f64 = s.intervals.iter().map(|(a, b)| b - a).sum();
        prop_assert!((sum - s.total_measure).abs() < 1e-12);
    }

    #[test]
    fn admissible_measure_identity(
        zeros in prop::collection::btree_map(0u32..100_000, 0.55f64..0.99, 0..12),
        delta in 0.1f64..20.0,
        pole in any::<bool>(),
    ) {
        let t = 1000.0;
        let entries: Vec<(f64, f64)> = zeros.into_iter().map(|(g, b)| (b, 500.0 + g as f64 * 0.03)).collect();
        let z = ZeroSet::from_entries(entries, "synthetic").unwrap();
        let k = disk();
        let s = admissible_shifts(&z, &k, t, delta, pole).unwrap();
        let removed = excluded_measure(&z, &k, t, delta, pole);
        prop_assert!((t - s.measure() - removed).abs() < 1e-12 * t);
    }

    #[test]
    fn polynomial_text_round_trip(c in prop::collection::vec((-10.0f64..10.0, -10.0f64..10.0), 1..5), re in -3.0f64..3.0) {
        let p = Polynomial::new(Complex64::new(re, 0.5), c.iter().map(|&(a, b)| Complex64::new(a, b)).collect());
        let q: Polynomial = p.to_string().parse().unwrap();
        prop_assert_eq!(p, q);
    }

    #[test]
    fn phase_text_round_trip(seed in any::<u64>()) {
        let w = sample_phases(seed, 200).unwrap();
        let back = PhaseAssignment::from_text(&w.to_text()).unwrap();
        prop_assert_eq!(w, back);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn real_axis_values_are_positive(sigma in 1.1f64..4.0, m in 0u32..4) {
        let v = eval_hm(&SelbergLFunction::zeta(), m, Complex64::new(sigma, 0.0)).unwrap();
        prop_assert!(v.value.im.abs() <= v.err_bound + 1e-15);
        prop_assert!(v.value.re > 0.0);
    }

    #[test]
    fn derivative_chain(sigma in 1.2f64..2.9, t in -30.0f64..30.0, m in 1u32..4) {
        let z = SelbergLFunction::zeta();
        let h = 1e-4;
        let up = eval_hm(&z, m, Complex64::new(sigma + h, t)).unwrap().value;
        let down = eval_hm(&z, m, Complex64::new(sigma - h, t)).unwrap().value;
        let lower = eval_hm(&z, m - 1, Complex64::new(sigma, t)).unwrap().value;
        let fd = (up - down) / (2.0 * h);
        prop_assert!((fd + lower).norm() <= 1e-5 * lower.norm(), "{fd} vs {lower}");
    }

    #[test]
    fn series_and_integral_agree(sigma in 1.1f64..3.0, t in -100.0f64..100.0, m in 0u32..3) {
        let z = SelbergLFunction::zeta();
        let s = Complex64::new(sigma, t);
        let a = eval_hm(&z, m, s).unwrap();
        let n = terms_for_tolerance(&z, m, sigma, 1e-7, 1 << 22);
        let b = eval_hm_series(&z, m, s, n).unwrap();
        prop_assert!(a.agrees_with(&b), "{a:?} vs {b:?}");
    }

    #[test]
    fn smoothing_sandwich(x in 5.0f64..400.0, t in -50.0f64..50.0) {
        let z = SelbergLFunction::zeta();
        let s = Complex64::new(0.8, t);
        let (main, _) = smoothed_split(&z, 1, s, x);
        prop_assert_eq!(main, dirichlet_poly(&z, 1, s, x));
    }

    #[test]
    fn energy_distance_symmetric_nonnegative(seed in any::<u64>()) {
        let z = SelbergLFunction::zeta();
        let pts = [Complex64::new(0.9, 0.0)];
        let a = sample_q(&z, 0, &pts, 30, seed, 200, 6).unwrap();
        let b = sample_q(&z, 1, &pts, 40, seed ^ 1, 200, 6).unwrap();
        let b = SampleSet { provenance: Provenance::ShiftQt, params: SampleParams { requested: 0, ..b.params }, ..b };
        let ab = energy_distance(&a, &b).unwrap();
        let ba = energy_distance(&b, &a).unwrap();
        prop_assert!(ab >= 0.0);
        prop_assert!((ab - ba).abs() < 1e-12);
    }
}

#[test]
fn dirichlet_series_matches_log_derivative_of_euler_product() {
    for l in [SelbergLFunction::zeta(), chi4()] {
        let s = Complex64::new(3.0, 1.7);
        let n = 100_000u64;
        let series: Complex64 = (2..=n).map(|k| l.von_mangoldt(k) * (-s * (k as f64).ln()).exp()).sum();
        // -d/ds log prod_p (sum_k a(p^k) p^{-ks}) via central differences of the truncated product
        let log_product = |s: Complex64| -> Complex64 {
            hmlab::primes::cached_primes(n)
                .up_to(n)
                .iter()
                .map(|&p| {
                    let a = l.local_coefficients(p, 40);
                    let x = (-s * (p as f64).ln()).exp();
                    let mut acc = Complex64::new(0.0, 0.0);
                    for c in a.iter().rev() {
                        acc = acc * x + c;
                    }
                    acc.ln()
                })
                .sum()
        };
        let h = 1e-5;
        let d = -(log_product(s + h) - log_product(s - h)) / (2.0 * h);
        assert!((d - series).norm() < 1e-8, "{}: {d} vs {series}", l.name);
    }
}

#[test]
fn witness_hits_are_nested() {
    let z = SelbergLFunction::zeta();
    let target = Polynomial::constant(Complex64::new(0.2, 0.0));
    let shifts = IntervalSet::span(1000.0, 1040.0);
    let mut prev: Option<Vec<f64>> = None;
    for eps in [0.15, 0.3, 0.45] {
        let o = WitnessOptions {
            eps,
            ..WitnessOptions::default()
        };
        let r = witness_search(&z, 0, &target, &disk(), &shifts, &o).unwrap();
        let taus: Vec<f64> = r.hits.iter().map(|h| h.tau).collect();
        if let Some(p) = &prev {
            assert!(p.iter().all(|t| taus.contains(t)), "eps {eps}");
        }
        prev = Some(taus);
    }
    assert!(!prev.unwrap().is_empty());
}

#[test]
fn confirmed_hits_survive_tighter_quadrature() {
    let z = SelbergLFunction::zeta();
    let target = Polynomial::constant(Complex64::new(0.1, 0.0));
    let o = WitnessOptions {
        max_hits: Some(10),
        ..WitnessOptions::default()
    };
    let k = CompactSetContext::new(CompactShape::disk(0.8, 0.0, 0.02), 0.5).unwrap();
    let r = witness_search(&z, 1, &target, &k, &IntervalSet::span(200.0, 400.0), &o).unwrap();
    assert!(!r.hits.is_empty());
    let tight = EvalOptions {
        quad_tol: 0.5 * o.eval.quad_tol,
        ..o.eval
    };
    for h in &r.hits {
        let sup = k
            .grid(o.grid)
            .iter()
            .map(|&s| {
                let v = eval_hm_with(&z, 1, s + Complex64::new(0.0, h.tau), &tight).unwrap();
                (v.value - target.eval(s)).norm() - v.err_bound
            })
            .fold(0.0, f64::max);
        assert!(sup < o.eps + h.err_bound, "tau {}", h.tau);
    }
}

#[test]
fn monte_carlo_is_independent_of_thread_count() {
    let z = SelbergLFunction::zeta();
    let pts = [Complex64::new(0.8, 0.0), Complex64::new(0.85, 0.5)];
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| sample_q(&z, 0, &pts, 64, 9, 2000, 8).unwrap())
    };
    assert_eq!(run(1), run(4));
}
