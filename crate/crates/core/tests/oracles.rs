//! Reference values computed independently at 30 digits (tools/oracles.py).

#![allow(clippy::excessive_precision)]

use hmlab::character::DirichletCharacter;
use hmlab::evaluator::{eval_hm, log_l_tracked};
use hmlab::lfunction::SelbergLFunction;
use hmlab::random::analytic_second_moment;
use num_complex::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn check(got: Complex64, want: Complex64, err: f64, tol: f64) {
    let d = (got - want).norm();
    assert!(d < tol, "got {got}, want {want}, diff {d:e}");
    assert!(
        d <= err.max(1e-14) * 10.0 + 1e-13,
        "diff {d:e} exceeds reported bound {err:e}"
    );
}

#[test]
fn log_zeta_branch_values() {
    let z = SelbergLFunction::zeta();
    let cases = [
        (c(0.8, 5.0), c(-0.26886094443124793, 0.26285216890773572)),
        (c(0.75, 100.0), c(0.69501063259678816, -0.027148739168029055)),
        (c(0.9, 1000.0), c(-0.078333271071353991, 0.12804534311659963)),
        (c(1.2, 3.0), c(-0.39153216507361746, -0.16943411513035235)),
        (c(0.6, 20.0), c(0.085335816720949509, -1.0965641063860783)),
    ];
    for (s, want) in cases {
        let v = eval_hm(&z, 0, s).unwrap();
        check(v.value, want, v.err_bound, 1e-10);
    }
}

#[test]
fn iterated_integrals() {
    let z = SelbergLFunction::zeta();
    let cases = [
        (1, c(0.8, 5.0), c(-0.51528111109151009, 0.37323114287086803)),
        (1, c(0.75, 100.0), c(0.71291131298441744, -0.13060610773473316)),
        (1, c(2.0, 10.0), c(0.27646872369126851, -0.13502985228297592)),
        (2, c(0.8, 5.0), c(-0.87700699525883982, 0.51029354544622793)),
        (2, c(0.75, 100.0), c(0.98551283280312951, -0.23713831100739974)),
        (2, c(2.0, 10.0), c(0.40755211203356772, -0.23521119272018269)),
    ];
    for (m, s, want) in cases {
        let v = eval_hm(&z, m, s).unwrap();
        check(v.value, want, v.err_bound, 1e-8);
    }
}

#[test]
fn dirichlet_chi4_log() {
    let l = SelbergLFunction::dirichlet("chi4", DirichletCharacter::kronecker(-4).unwrap()).unwrap();
    let v = log_l_tracked(&l, 0.8, 50.0, 3.0).unwrap();
    check(
        v.value,
        c(-0.10661293488090126, 0.20228086733650595),
        v.err_bound,
        1e-10,
    );
}

#[test]
fn random_model_second_moments() {
    let z = SelbergLFunction::zeta();
    let cases = [
        (0, 0.75, 0.90043080841774361),
        (0, 0.8, 0.77731729329903758),
        (0, 0.9, 0.59830079927341122),
        (1, 0.75, 0.98007890111457431),
        (1, 0.8, 0.89954954814550414),
        (1, 0.9, 0.76088224288259428),
    ];
    for (m, sigma, want) in cases {
        let v = analytic_second_moment(&z, m, sigma).unwrap();
        let d = (v.value.re - want).abs();
        assert!(
            d <= v.err_bound + 1e-12,
            "m={m} sigma={sigma}: {} vs {want}, bound {:e}",
            v.value,
            v.err_bound
        );
        assert!(d / want < 1e-3, "m={m} sigma={sigma}: {} vs {want}", v.value);
    }
}
