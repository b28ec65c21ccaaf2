//! Enumeration of every valid `(a, b)` for a given `q` and the census report
//! built from the per-class decisions.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::criteria::{decide, DecisionRecord};
use crate::intkernel::{integer_sqrt_ceil, integer_sqrt_floor, PrimePower};
use crate::weilpoly::{on_circle_valid, SurfaceClass};

/// Bumped whenever a field of [`CensusReport`] or the record schema changes.
pub const SCHEMA_VERSION: u32 = 1;
pub const GENERATOR: &str = "polarizability";
pub const GENERATOR_VERSION: &str = env!("CARGO_PKG_VERSION");

/// All valid classes over `F_q`, `a` ascending then `b` ascending.
///
/// The box `a^2 <= 16q`, `ceil(2|a| sqrt q) - 2q <= b <= floor((a^2 + 8q)/4)`
/// is scanned with exact integer bounds and filtered by [`on_circle_valid`].
pub fn enumerate_valid(qp: PrimePower) -> Vec<SurfaceClass> {
    let q = qp.q();
    let a_max = integer_sqrt_floor(16 * q).expect("nonnegative").root;
    let mut out = Vec::new();
    for a in -a_max..=a_max {
        let lo = integer_sqrt_ceil(4 * a * a * q) - 2 * q;
        let hi = (a * a + 8 * q).div_euclid(4);
        out.extend(
            (lo..=hi)
                .map(|b| SurfaceClass::new(qp, a, b))
                .filter(on_circle_valid),
        );
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Generator {
    pub name: String,
    pub version: String,
    /// Left empty by the library so reports are reproducible; the CLI stamps it.
    pub generated_at: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusCounts {
    pub newton: BTreeMap<String, usize>,
    pub shape: BTreeMap<String, usize>,
    pub admissibility: BTreeMap<String, usize>,
    pub principally_polarizable: usize,
    pub not_principally_polarizable: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusReport {
    pub schema_version: u32,
    pub generator: Generator,
    pub q: i128,
    pub p: i128,
    pub m: u32,
    pub total_valid: usize,
    pub counts: CensusCounts,
    pub non_pp: Vec<DecisionRecord>,
}

impl CensusReport {
    pub fn non_pp_pairs(&self) -> Vec<(i128, i128)> {
        self.non_pp.iter().map(|r| (r.cls.a(), r.cls.b())).collect()
    }
}

/// [`decide`] on every valid class, in enumeration order.
pub fn census_records(qp: PrimePower) -> Vec<DecisionRecord> {
    enumerate_valid(qp).par_iter().map(decide).collect()
}

/// Census built from the records of [`census_records`].
pub fn census_report(qp: PrimePower) -> CensusReport {
    report_from_records(qp, census_records(qp))
}

pub fn report_from_records(qp: PrimePower, records: Vec<DecisionRecord>) -> CensusReport {
    let mut newton = BTreeMap::new();
    let mut shape = BTreeMap::new();
    let mut admissibility = BTreeMap::new();
    for r in &records {
        let label = |x: Option<&'static str>| x.unwrap_or("unknown").to_string();
        *newton
            .entry(label(r.newton.map(|n| n.as_str())))
            .or_insert(0) += 1;
        *shape.entry(label(r.shape.map(|s| s.as_str()))).or_insert(0) += 1;
        *admissibility
            .entry(label(r.admissibility.map(|a| a.as_str())))
            .or_insert(0) += 1;
    }
    let pp = records
        .iter()
        .filter(|r| r.principally_polarizable == Some(true))
        .count();
    let non_pp: Vec<DecisionRecord> = records
        .iter()
        .filter(|r| r.principally_polarizable == Some(false))
        .cloned()
        .collect();
    CensusReport {
        schema_version: SCHEMA_VERSION,
        generator: Generator {
            name: GENERATOR.into(),
            version: GENERATOR_VERSION.into(),
            generated_at: None,
        },
        q: qp.q(),
        p: qp.p(),
        m: qp.m(),
        total_valid: records.len(),
        counts: CensusCounts {
            newton,
            shape,
            admissibility,
            principally_polarizable: pp,
            not_principally_polarizable: non_pp.len(),
        },
        non_pp,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qp(q: i128) -> PrimePower {
        PrimePower::new(q).unwrap()
    }

    /// Brute-force scan of a generous box with the validity test.
    fn scan(q: i128) -> Vec<(i128, i128)> {
        let mut out = Vec::new();
        for a in -4 * q..=4 * q {
            for b in -4 * q..=8 * q {
                if on_circle_valid(&SurfaceClass::new(qp(q), a, b)) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    #[test]
    fn enumeration_matches_scan() {
        for q in [2, 3, 4, 5, 7, 8, 9, 11, 16, 25, 27] {
            let got: Vec<_> = enumerate_valid(qp(q))
                .iter()
                .map(|s| (s.a(), s.b()))
                .collect();
            assert_eq!(got, scan(q), "q = {q}");
        }
    }

    #[test]
    fn enumeration_examples() {
        let has = |q, a, b| {
            enumerate_valid(qp(q))
                .iter()
                .any(|s| (s.a(), s.b()) == (a, b))
        };
        assert!(has(2, 2, 2) && has(2, -2, 2) && has(2, 0, -4));
        assert!(has(7, 0, -7));
        for q in [2, 3, 4, 7, 9, 13, 32] {
            assert!(has(q, 0, -2 * q));
        }
    }

    #[test]
    fn census_examples() {
        assert_eq!(census_report(qp(7)).non_pp_pairs(), vec![(0, -7)]);
        assert_eq!(
            census_report(qp(11)).non_pp_pairs(),
            vec![(-2, -7), (2, -7)]
        );
        assert_eq!(census_report(qp(13)).non_pp_pairs(), vec![(0, -13)]);
    }

    #[test]
    fn counts_are_consistent() {
        let r = census_report(qp(9));
        let total = r.total_valid;
        assert_eq!(r.counts.newton.values().sum::<usize>(), total);
        assert_eq!(r.counts.shape.values().sum::<usize>(), total);
        assert_eq!(r.counts.admissibility.values().sum::<usize>(), total);
        assert_eq!(
            r.counts.principally_polarizable + r.counts.not_principally_polarizable,
            total
        );
        assert_eq!(census_report(qp(9)), r);
    }
}
