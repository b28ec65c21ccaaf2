//! Property checks shared by the `properties` suite and the `acceptance`
//! runner. Each check returns the number of cases it examined, or a message
//! naming the first counterexample.

#![allow(dead_code)]

use num_complex::Complex64;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

use polarizability_core::census::enumerate_valid;
use polarizability_core::cmquartic::{cm_data, cm_data_with_root, prime_survey, CmData};
use polarizability_core::criteria::{main_criterion, prime_powers_up_to, trace_zero_criterion};
use polarizability_core::intkernel::{factorize, is_prime, kronecker_symbol, PrimePower};
use polarizability_core::quadring::{
    rational_prime_splitting, relative_prime_splitting, QuadField,
};
use polarizability_core::weilpoly::{
    newton_type, on_circle_valid, trace_zero_class, NewtonType, SurfaceClass,
};

pub type Check = Result<usize, String>;

pub const RANDOM_CASES: u32 = 2000;

fn runner() -> TestRunner {
    TestRunner::new(Config {
        cases: RANDOM_CASES,
        failure_persistence: None,
        ..Config::default()
    })
}

fn run<S: Strategy>(strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Check {
    runner()
        .run(&strategy, test)
        .map(|()| RANDOM_CASES as usize)
        .map_err(|e| e.to_string())
}

pub fn factorization_round_trip() -> Check {
    let n = prop_oneof![
        -1_000_000i128..1_000_000,
        -(1i128 << 62)..(1i128 << 62),
        // Products of two primes near 2^31 exercise the rho stage.
        (1i128 << 30..1i128 << 31, 1i128 << 30..1i128 << 31).prop_map(|(a, b)| a * b),
    ];
    run(n, |n| {
        prop_assume!(n != 0);
        let f = factorize(n).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert_eq!(f.value(), n);
        let mut last = 1;
        for &(p, e) in f.factors() {
            prop_assert!(is_prime(p), "{} is not prime", p);
            prop_assert!(
                e >= 1 && p > last,
                "factors of {} not sorted and distinct",
                n
            );
            last = p;
        }
        Ok(())
    })
}

pub fn kronecker_multiplicativity() -> Check {
    let small = -5000i128..5000;
    run((small.clone(), small.clone(), small), |(a, b, n)| {
        let k = |x, y| kronecker_symbol(x, y).ok();
        // Multiplicative in the top argument for every n != 0.
        if n != 0 {
            prop_assert_eq!(k(a * b, n), Some(k(a, n).unwrap() * k(b, n).unwrap()));
        }
        // And in the bottom argument away from the (0 | 0) corner.
        if a != 0 && b != 0 && n != 0 {
            prop_assert_eq!(k(a, b * n), Some(k(a, b).unwrap() * k(a, n).unwrap()));
        }
        Ok(())
    })
}

/// Roots of the quartic via `t^2 + a t + (b - 2q)` and `x^2 - t x + q`, in
/// complex floating point. `t^2` is expanded so that boundary classes with
/// integral discriminants lose nothing to rounding.
fn float_roots(q: i128, a: i128, b: i128) -> [Complex64; 4] {
    let (qf, af) = (q as f64, a as f64);
    let d = (a * a - 4 * (b - 2 * q)) as f64;
    let sd = Complex64::new(d, 0.0).sqrt();
    let mut out = [Complex64::new(0.0, 0.0); 4];
    for (k, sign) in [1.0, -1.0].into_iter().enumerate() {
        let t = (-af + sign * sd) / 2.0;
        let t2 = (af * af + d - 2.0 * sign * af * sd) / 4.0;
        let s = (t2 - 4.0 * qf).sqrt();
        out[2 * k] = (t + s) / 2.0;
        out[2 * k + 1] = (t - s) / 2.0;
    }
    out
}

fn float_valid(q: i128, a: i128, b: i128) -> bool {
    let r = (q as f64).sqrt();
    float_roots(q, a, b)
        .iter()
        .all(|z| (z.norm() - r).abs() < 1e-9 * r)
}

/// Exhaustive over every prime power `q <= 200` on a box containing all
/// valid classes (`|a| <= 4 sqrt q`, `|b| <= 6q`) plus a margin.
pub fn validity_vs_float_oracle() -> Check {
    let mut cases = 0;
    for qp in prime_powers_up_to(200) {
        let q = qp.q();
        let a_max = (4.0 * (q as f64).sqrt()) as i128 + 2;
        for a in -a_max..=a_max {
            for b in -6 * q - 2..=6 * q + 2 {
                cases += 1;
                let exact = on_circle_valid(&SurfaceClass::new(qp, a, b));
                if exact != float_valid(q, a, b) {
                    return Err(format!(
                        "q={q} a={a} b={b}: exact {exact}, float oracle disagrees"
                    ));
                }
            }
        }
    }
    Ok(cases)
}

fn squarefree(n: i128) -> bool {
    factorize(n).is_ok_and(|f| f.factors().iter().all(|&(_, e)| e == 1))
}

/// `relative_prime_splitting(P, delta) = relative_prime_splitting(P, delta x^2)`.
pub fn square_class_invariance() -> Check {
    let ells = prop::sample::select(vec![2i128, 3, 5, 7, 11, 13, 17, 19, 23]);
    let d0s: Vec<i128> = (2..200).filter(|&d| squarefree(d)).collect();
    let coords = (-300i128..300, -300i128..300, -30i128..30, -30i128..30);
    let strat = (
        prop::sample::select(d0s),
        ells,
        coords,
        any::<prop::sample::Index>(),
    );
    run(strat, |(d0, ell, (u, v, x, y), pick)| {
        let field = QuadField::real(d0).unwrap();
        let delta = field.from_basis(u, v);
        let x = field.from_basis(x, y);
        prop_assume!(!delta.is_zero() && !x.is_zero());
        let primes = rational_prime_splitting(field, ell).unwrap();
        let p = pick.get(&primes);
        let before = relative_prime_splitting(p, &delta).ok();
        let after = relative_prime_splitting(p, &(delta * x * x)).ok();
        prop_assert_eq!(
            before,
            after,
            "{} at {} scaled by {:?}",
            delta.to_string(),
            p.to_string(),
            x
        );
        Ok(())
    })
}

fn irreducible_cm(s: &SurfaceClass) -> Option<CmData> {
    cm_data(s).ok().filter(|c| c.irreducible)
}

pub fn delta_totally_negative() -> Check {
    let mut cases = 0;
    for qp in prime_powers_up_to(200) {
        for s in enumerate_valid(qp) {
            if let Some(c) = irreducible_cm(&s) {
                cases += 1;
                if !c.totally_negative_delta() {
                    return Err(format!("{s}: delta is not totally negative"));
                }
            }
        }
    }
    Ok(cases)
}

/// Survey of `delta` up to Galois conjugation: sorted `(ell, kind, v)`.
fn survey_signature(c: &CmData) -> Vec<(i128, &'static str, u32)> {
    let mut sig: Vec<_> = prime_survey(c)
        .unwrap()
        .entries
        .iter()
        .map(|(p, kind, v)| (p.ell(), kind.as_str(), *v))
        .collect();
    sig.sort();
    sig
}

/// Swapping `beta` for its conjugate changes no CM output.
pub fn beta_conjugate_invariance() -> Check {
    let qs: Vec<PrimePower> = prime_powers_up_to(1000);
    let strat = (prop::sample::select(qs), any::<prop::sample::Index>());
    run(strat, |(qp, pick)| {
        let classes = enumerate_valid(qp);
        let s = *pick.get(&classes);
        let (plus, minus) = (
            cm_data_with_root(&s, 1).unwrap(),
            cm_data_with_root(&s, -1).unwrap(),
        );
        prop_assert_eq!(plus.irreducible, minus.irreducible);
        prop_assert_eq!(plus.d, minus.d);
        let (Some(cp), Some(cm)) = (plus.cm, minus.cm) else {
            return Ok(());
        };
        prop_assert_eq!(cp.beta.conj(), cm.beta);
        prop_assert_eq!(cp.delta.conj(), cm.delta);
        prop_assert_eq!(
            plus.totally_negative_delta(),
            minus.totally_negative_delta()
        );
        prop_assert_eq!(survey_signature(&plus), survey_signature(&minus));
        let (sp, sm) = (prime_survey(&plus).unwrap(), prime_survey(&minus).unwrap());
        prop_assert_eq!(sp.split_hypothesis(), sm.split_hypothesis());
        prop_assert_eq!(sp.ramified().len(), sm.ramified().len());
        prop_assert_eq!(sp.inert_divisors().len(), sm.inert_divisors().len());
        Ok(())
    })
}

/// Exhaustive for `q <= 500` over classes whose Newton polygon is that of
/// an abelian surface; the remaining on-circle quartics have no Newton type
/// to compare.
pub fn mixed_iff_divisibility() -> Check {
    let mut cases = 0;
    for qp in prime_powers_up_to(500) {
        let p = qp.p();
        for s in enumerate_valid(qp) {
            let n = newton_type(&s).unwrap();
            if n == NewtonType::NonSymmetric {
                continue;
            }
            cases += 1;
            let predicted = s.a() % p != 0 && s.b() % p == 0;
            if (n == NewtonType::Mixed) != predicted {
                return Err(format!(
                    "{s}: newton {} but p | b, p !| a is {predicted}",
                    n.as_str()
                ));
            }
        }
    }
    Ok(cases)
}

/// Exhaustive for `q <= 500` and every `a_e` with `a_e^2 <= 4q`.
pub fn trace_zero_consistency() -> Check {
    let mut cases = 0;
    for qp in prime_powers_up_to(500) {
        let q = qp.q();
        let bound = (2.0 * (q as f64).sqrt()) as i128 + 1;
        for a_e in -bound..=bound {
            if a_e * a_e > 4 * q {
                continue;
            }
            cases += 1;
            let direct = trace_zero_criterion(a_e, qp).unwrap();
            let via = main_criterion(&trace_zero_class(a_e, qp).unwrap()).unwrap();
            if direct != via {
                return Err(format!("a_e={a_e} q={q}: {direct} vs {via}"));
            }
        }
    }
    Ok(cases)
}

pub type NamedCheck = (&'static str, fn() -> Check);

pub const ALL: [NamedCheck; 8] = [
    ("factorization round-trip", factorization_round_trip),
    ("Kronecker multiplicativity", kronecker_multiplicativity),
    (
        "validity vs floating-root oracle, q <= 200",
        validity_vs_float_oracle,
    ),
    (
        "square-class invariance of relative splitting",
        square_class_invariance,
    ),
    ("delta totally negative, q <= 200", delta_totally_negative),
    (
        "beta-conjugate invariance of CM outputs",
        beta_conjugate_invariance,
    ),
    (
        "mixed iff p !| a and p | b, q <= 500",
        mixed_iff_divisibility,
    ),
    (
        "trace-zero criterion consistency, q <= 500",
        trace_zero_consistency,
    ),
];
