//! One PASS/FAIL line per acceptance criterion; exits nonzero if any fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use polarizability_core::census::census_report;
use polarizability_core::criteria::{
    artin_decision, cross_check, decide, family_reason, prime_powers_up_to, FAMILY_ROWS,
};
use polarizability_core::intkernel::PrimePower;
use polarizability_core::quadring::PrimeKind;
use polarizability_core::tzmodel::tz_summary;
use polarizability_core::weilpoly::SurfaceClass;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || {
        format!("took {elapsed:.2?}, limit {limit:?}")
    })
}

fn qp(q: i128) -> PrimePower {
    PrimePower::new(q).unwrap()
}

/// `(0, -q)` is not PP wherever rows 1-2 instantiate it; every other listed
/// family is PP.
fn minus_q_family() -> Outcome {
    let start = Instant::now();
    let (mut not_pp, mut pp) = (0, 0);
    for qp in prime_powers_up_to(10_000) {
        let (p, square) = (qp.p(), qp.is_square());
        let expect_row = (p % 3 == 1 && !square) || (p % 12 == 7 && square);
        let minus_q = SurfaceClass::new(qp, 0, -qp.q());
        let listed = FAMILY_ROWS[..2]
            .iter()
            .any(|r| r.instances(qp).contains(&minus_q));
        ensure(listed == expect_row, || {
            format!("q={}: rows 1-2 listing is {listed}", qp.q())
        })?;
        for row in FAMILY_ROWS {
            let expect_pp = row.printed_reason().is_some();
            for s in row.instances(qp) {
                let got = decide(&s).principally_polarizable;
                ensure(got == Some(expect_pp), || {
                    format!("{s}: decide gave {got:?}")
                })?;
                if expect_pp {
                    pp += 1;
                } else {
                    not_pp += 1;
                }
            }
        }
    }
    within(start.elapsed(), Duration::from_secs(30))?;
    Ok(format!(
        "{not_pp} not-PP (0,-q) classes, {pp} PP family classes, q <= 10^4, {:.2?}",
        start.elapsed()
    ))
}

fn family_reasons() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    for row in &FAMILY_ROWS[2..] {
        let mut instances = 0;
        for qp in prime_powers_up_to(10_000) {
            if instances == 3 {
                break;
            }
            if !row.admits(qp) {
                continue;
            }
            instances += 1;
            for s in row.instances(qp) {
                let got = family_reason(&s).map_err(|e| e.to_string())?;
                let want = row.printed_reason();
                ensure(got == want, || {
                    format!("row {}: {s} gives {got:?}, table {want:?}", row.number())
                })?;
                checked += 1;
            }
        }
        ensure(instances == 3, || {
            format!("row {} has only {instances} instances", row.number())
        })?;
    }
    within(start.elapsed(), Duration::from_secs(5))?;
    Ok(format!(
        "{checked} classes over the three smallest q of rows 3-8"
    ))
}

fn artin_pipeline() -> Outcome {
    let o = artin_decision(&SurfaceClass::new(qp(7), 0, -7)).map_err(|e| e.to_string())?;
    ensure(o.field.d0() == 21, || format!("K+ = {}", o.field))?;
    ensure(
        o.ideal.ell() == 3 && o.ideal.kind() == PrimeKind::Ramified,
        || format!("ideal {}", o.ideal),
    )?;
    ensure(o.delta == o.field.from_int(-7), || {
        format!("delta = {}", o.delta)
    })?;
    ensure(o.splitting == PrimeKind::Inert, || {
        format!("splitting {:?}", o.splitting)
    })?;
    ensure(o.psi == -1 && !o.principally_polarizable, || {
        format!("psi {}", o.psi)
    })?;
    let o49 = artin_decision(&SurfaceClass::new(qp(49), 0, -49)).map_err(|e| e.to_string())?;
    ensure(o49.psi == -1 && !o49.principally_polarizable, || {
        format!("q=49: psi {}", o49.psi)
    })?;
    Ok(format!(
        "q=7: K+ = {}, A = {}, inert, psi = -1; q=49: psi = -1",
        o.field, o.ideal
    ))
}

fn tz_model() -> Outcome {
    let start = Instant::now();
    let s = tz_summary(7).map_err(|e| e.to_string())?;
    ensure(s.all_pass(), || format!("{s:?}"))?;
    ensure(
        s.commutant_rank == 4 && s.polarization_degree == 9 && s.kernel.order == 9,
        || format!("{s:?}"),
    )?;
    within(start.elapsed(), Duration::from_secs(1))?;
    Ok("zeta identities, commutant rank 4 = S[omega], degree 9, kernel O/A with A^2 = 3O".into())
}

fn census_counts() -> Outcome {
    let expected: [(i128, Vec<(i128, i128)>); 3] = [
        (7, vec![(0, -7)]),
        (11, vec![(-2, -7), (2, -7)]),
        (13, vec![(0, -13)]),
    ];
    for (q, want) in expected {
        let got = census_report(qp(q)).non_pp_pairs();
        ensure(got == want, || format!("q={q}: non-PP {got:?}"))?;
    }
    Ok("q=7: (0,-7); q=11: (+-2,-7); q=13: (0,-13)".into())
}

fn property_suites() -> Outcome {
    let mut lines = Vec::new();
    for (name, check) in common::ALL {
        let cases = check().map_err(|e| format!("{name}: {e}"))?;
        lines.push(format!("{name} ({cases})"));
    }
    Ok(lines.join("; "))
}

fn crosscheck_1000() -> Outcome {
    let start = Instant::now();
    let r = cross_check(1000, 4).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(r.disagreements.is_empty(), || {
        format!("disagreements: {:?}", r.disagreements)
    })?;
    within(elapsed, Duration::from_secs(60))?;
    Ok(format!(
        "{} classes over {} prime powers, 0 disagreements, {elapsed:.2?}",
        r.classes, r.prime_powers
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        (
            "(0,-q) family and listed supersingular families",
            minus_q_family,
        ),
        ("family reason column", family_reasons),
        ("Artin pipeline for q = 7 and 49", artin_pipeline),
        ("trace-zero polarization model", tz_model),
        ("census counts", census_counts),
        ("property suites", property_suites),
        ("cross-check up to 1000", crosscheck_1000),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
