//! Decision procedures: the closed-form criterion, its trace-zero restatement,
//! the table of irreducible supersingular families, the Artin-symbol test and
//! the cross-check that runs them against each other.
//!
//! [`main_criterion`] is the verdict for every class. The CM routes
//! (ramification, inert divisors of `pi - conj(pi)`, Artin symbol), the
//! mixed-class rule and the quadratic restriction-of-scalars rule only supply
//! evidence; any disagreement with the verdict is reported, never resolved.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::census::enumerate_valid;
use crate::cmquartic::{
    cm_data, cm_field_unchecked, decision_from_survey, prime_survey, survey_of, CmDecision,
    PrimeSurvey,
};
use crate::error::{domain, Error, Result};
use crate::intkernel::{factorize, PrimePower};
use crate::quadring::{artin_symbol, rational_prime_splitting, relative_prime_splitting};
use crate::quadring::{PrimeIdeal, PrimeKind, QuadElement, QuadField};
use crate::weilpoly::{
    elliptic_split, elliptic_split_unchecked, elliptic_trace_admissible, newton_type_unchecked,
    on_circle_valid, shape_from_split, trace_zero_class, NewtonType, Shape, SurfaceClass,
};

/// `true` when the class is principally polarizable: it fails unless
/// `a^2 - b = q`, `b < 0` and every prime dividing `b` is `1 mod 3`.
///
/// For `b = -1` the last condition holds vacuously.
pub fn main_criterion(s: &SurfaceClass) -> Result<bool> {
    if !on_circle_valid(s) {
        return Err(domain(format!("{s} is not a valid Weil polynomial")));
    }
    main_criterion_unchecked(s)
}

fn main_criterion_unchecked(s: &SurfaceClass) -> Result<bool> {
    let (a, b, q) = (s.a(), s.b(), s.q());
    if a * a - b != q || b >= 0 {
        return Ok(true);
    }
    let all_one_mod_three = factorize(b)?.primes().all(|p| p % 3 == 1);
    Ok(!all_one_mod_three)
}

/// The criterion for the trace-zero surface of an elliptic curve with trace
/// `a_e`: not principally polarizable exactly when `a_e^2 < q` and every
/// prime dividing `q - a_e^2` is `1 mod 3`.
pub fn trace_zero_criterion(a_e: i128, qp: PrimePower) -> Result<bool> {
    // Rejects a_e^2 > 4q.
    trace_zero_class(a_e, qp)?;
    let q = qp.q();
    if a_e * a_e >= q {
        return Ok(true);
    }
    Ok(!factorize(q - a_e * a_e)?.primes().all(|p| p % 3 == 1))
}

/// Rows of the table of irreducible supersingular Weil polynomials that stay
/// simple over `F_{q^2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum FamilyRow {
    /// `(0, -q)`, `p = 1 mod 3`, `q` nonsquare.
    MinusQNonsquare,
    /// `(0, -q)`, `p = 7 mod 12`, `q` square.
    MinusQSquare,
    /// `(0, 0)`, `p = 1 mod 4`, `q` nonsquare.
    ZeroNonsquare,
    /// `(0, 0)`, `p = 5 mod 8`, `q` square.
    ZeroSquare,
    /// `(0, q)`, `p = 1 mod 3`, `q` nonsquare.
    PlusQ,
    /// `(+-sqrt q, q)`, `p != 1 mod 5`, `q` square.
    SqrtQ,
    /// `(+-sqrt(5q), 3q)`, `p = 5`, `q` nonsquare.
    Sqrt5Q,
    /// `(+-sqrt(2q), q)`, `p = 2`, `q` nonsquare.
    Sqrt2Q,
}

pub const FAMILY_ROWS: [FamilyRow; 8] = [
    FamilyRow::MinusQNonsquare,
    FamilyRow::MinusQSquare,
    FamilyRow::ZeroNonsquare,
    FamilyRow::ZeroSquare,
    FamilyRow::PlusQ,
    FamilyRow::SqrtQ,
    FamilyRow::Sqrt5Q,
    FamilyRow::Sqrt2Q,
];

impl FamilyRow {
    pub fn number(self) -> usize {
        FAMILY_ROWS.iter().position(|&r| r == self).unwrap() + 1
    }

    pub fn shape_label(self) -> &'static str {
        match self {
            FamilyRow::MinusQNonsquare | FamilyRow::MinusQSquare => "(0,-q)",
            FamilyRow::ZeroNonsquare | FamilyRow::ZeroSquare => "(0,0)",
            FamilyRow::PlusQ => "(0,q)",
            FamilyRow::SqrtQ => "(+-sqrt(q),q)",
            FamilyRow::Sqrt5Q => "(+-sqrt(5q),3q)",
            FamilyRow::Sqrt2Q => "(+-sqrt(2q),q)",
        }
    }

    pub fn conditions(self) -> &'static str {
        match self {
            FamilyRow::MinusQNonsquare => "p = 1 mod 3, q nonsquare",
            FamilyRow::MinusQSquare => "p = 7 mod 12, q square",
            FamilyRow::ZeroNonsquare => "p = 1 mod 4, q nonsquare",
            FamilyRow::ZeroSquare => "p = 5 mod 8, q square",
            FamilyRow::PlusQ => "p = 1 mod 3, q nonsquare",
            FamilyRow::SqrtQ => "p != 1 mod 5, q square",
            FamilyRow::Sqrt5Q => "p = 5, q nonsquare",
            FamilyRow::Sqrt2Q => "p = 2, q nonsquare",
        }
    }

    /// Whether the row's conditions on `p` and `q` hold.
    pub fn admits(self, qp: PrimePower) -> bool {
        let (p, sq) = (qp.p(), qp.is_square());
        match self {
            FamilyRow::MinusQNonsquare => p % 3 == 1 && !sq,
            FamilyRow::MinusQSquare => p % 12 == 7 && sq,
            FamilyRow::ZeroNonsquare => p % 4 == 1 && !sq,
            FamilyRow::ZeroSquare => p % 8 == 5 && sq,
            FamilyRow::PlusQ => p % 3 == 1 && !sq,
            FamilyRow::SqrtQ => p % 5 != 1 && sq,
            FamilyRow::Sqrt5Q => p == 5 && !sq,
            FamilyRow::Sqrt2Q => p == 2 && !sq,
        }
    }

    /// The classes of this row over `F_q`, empty unless [`Self::admits`].
    pub fn instances(self, qp: PrimePower) -> Vec<SurfaceClass> {
        if !self.admits(qp) {
            return Vec::new();
        }
        let q = qp.q();
        let signed =
            |a: i128, b: i128| vec![SurfaceClass::new(qp, -a, b), SurfaceClass::new(qp, a, b)];
        match self {
            FamilyRow::MinusQNonsquare | FamilyRow::MinusQSquare => {
                vec![SurfaceClass::new(qp, 0, -q)]
            }
            FamilyRow::ZeroNonsquare | FamilyRow::ZeroSquare => vec![SurfaceClass::new(qp, 0, 0)],
            FamilyRow::PlusQ => vec![SurfaceClass::new(qp, 0, q)],
            FamilyRow::SqrtQ => signed(qp.sqrt().unwrap(), q),
            FamilyRow::Sqrt5Q => signed(qp.p().pow(qp.m().div_ceil(2)), 3 * q),
            FamilyRow::Sqrt2Q => signed(qp.p().pow(qp.m().div_ceil(2)), q),
        }
    }

    /// The printed reason for principal polarizability (`None` for "---").
    pub fn printed_reason(self) -> Option<Reason> {
        match self {
            FamilyRow::MinusQNonsquare | FamilyRow::MinusQSquare => None,
            FamilyRow::ZeroNonsquare | FamilyRow::ZeroSquare => Some(Reason::RamifiedOver(vec![2])),
            FamilyRow::PlusQ => Some(Reason::RamifiedOver(vec![3])),
            FamilyRow::SqrtQ | FamilyRow::Sqrt5Q => Some(Reason::RamifiedOver(vec![5])),
            FamilyRow::Sqrt2Q => Some(Reason::InertDivisorOver(vec![2])),
        }
    }
}

/// Reason a CM class is principally polarizable, by rational primes below.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub enum Reason {
    RamifiedOver(Vec<i128>),
    InertDivisorOver(Vec<i128>),
}

fn join(ells: &[i128]) -> String {
    ells.iter()
        .map(|l| l.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Reason::RamifiedOver(l) => write!(f, "ramified over {}", join(l)),
            Reason::InertDivisorOver(l) => {
                write!(f, "inert prime over {} divides pi - conj(pi)", join(l))
            }
        }
    }
}

fn reason_from_survey(survey: &PrimeSurvey) -> Option<Reason> {
    let ells = |ps: Vec<PrimeIdeal>| {
        let mut v: Vec<i128> = ps.iter().map(|p| p.ell()).collect();
        v.dedup();
        v
    };
    let ramified = survey.ramified();
    if !ramified.is_empty() {
        return Some(Reason::RamifiedOver(ells(ramified)));
    }
    let inert = survey.inert_divisors();
    (!inert.is_empty()).then(|| Reason::InertDivisorOver(ells(inert)))
}

/// The family row a class belongs to, with the row's conditions satisfied.
pub fn family_row(s: &SurfaceClass) -> Option<FamilyRow> {
    let (qp, a, b, q) = (s.qp(), s.a(), s.b(), s.q());
    // Every family has b in {-q, 0, q, 3q}; skip the rest without building
    // instances.
    if !(b == -q || b == 0 || b == q || b == 3 * q) || !on_circle_valid(s) {
        return None;
    }
    FAMILY_ROWS
        .iter()
        .copied()
        .find(|row| row.admits(qp) && row.instances(qp).iter().any(|c| c.a() == a && c.b() == b))
}

/// Recomputes the reason column for a listed family from the CM data.
/// Returns `None` where no sufficient condition applies.
pub fn family_reason(s: &SurfaceClass) -> Result<Option<Reason>> {
    if family_row(s).is_none() {
        return Err(Error::NotInTable(s.to_string()));
    }
    let c = cm_data(s)?;
    Ok(reason_from_survey(&prime_survey(&c)?))
}

/// `(0, -q)` with `q` square and `p = 1 mod 12` is not the Weil polynomial
/// of any abelian surface.
pub fn is_nonexistent_square_family(s: &SurfaceClass) -> bool {
    let qp = s.qp();
    s.a() == 0 && s.b() == -s.q() && qp.is_square() && qp.p() % 12 == 1
}

/// The Artin-symbol test for `(0, -q)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArtinOutcome {
    pub cls: SurfaceClass,
    pub field: QuadField,
    pub delta: QuadElement,
    /// The prime of `K+` above 3: the ideal attached to the degree-9
    /// polarization of the trace-zero surface.
    pub ideal: PrimeIdeal,
    pub splitting: PrimeKind,
    pub psi: i8,
    pub principally_polarizable: bool,
}

/// Decides `(0, -q)` through the Artin symbol of the polarization ideal.
///
/// Requires `p = 1 mod 3` (and `p = 3 mod 4` when `q` is a square), so that
/// the supersingular curve with Weil polynomial `x^2 + q` exists, plus the
/// unramified/split hypotheses on `K/K+`.
pub fn artin_decision(s: &SurfaceClass) -> Result<ArtinOutcome> {
    let (qp, q) = (s.qp(), s.q());
    let inapplicable = |why: String| Err(Error::Inapplicable(format!("{s}: {why}")));
    if s.a() != 0 || s.b() != -q {
        return inapplicable("only the family (0, -q) carries a known polarization ideal".into());
    }
    if !on_circle_valid(s) {
        return inapplicable("invalid class".into());
    }
    if qp.p() % 3 != 1 || (qp.is_square() && qp.p() % 4 != 3) {
        return inapplicable(format!(
            "needs p = 1 mod 3, and p = 3 mod 4 for square q (p = {})",
            qp.p()
        ));
    }
    let c = cm_data(s)?;
    let Some(cm) = c.cm else {
        return inapplicable("reducible Weil polynomial".into());
    };
    if !prime_survey(&c)?.split_hypothesis() {
        return inapplicable("K/K+ is ramified or an inert prime divides pi - conj(pi)".into());
    }
    let over3 = rational_prime_splitting(cm.field, 3)?;
    let [ideal] = over3.as_slice() else {
        return inapplicable("3 is split in K+".into());
    };
    let splitting = relative_prime_splitting(ideal, &cm.delta)?;
    let psi = artin_symbol(&[(*ideal, 1)], &cm.delta)?;
    Ok(ArtinOutcome {
        cls: *s,
        field: cm.field,
        delta: cm.delta,
        ideal: *ideal,
        splitting,
        psi,
        principally_polarizable: psi == 1,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Admissibility {
    /// A family whose existence as an isogeny class is known.
    Certified,
    Unchecked,
    /// Known not to be the Weil polynomial of an abelian surface.
    Excluded,
}

impl Admissibility {
    pub fn as_str(self) -> &'static str {
        match self {
            Admissibility::Certified => "certified",
            Admissibility::Unchecked => "unchecked",
            Admissibility::Excluded => "excluded",
        }
    }
}

pub fn admissibility(s: &SurfaceClass) -> Result<Admissibility> {
    if !on_circle_valid(s) {
        return Err(domain(format!("{s} is not a valid Weil polynomial")));
    }
    Ok(admissibility_with(
        s,
        elliptic_split(s)?,
        family_row(s),
        restriction_route(s),
    ))
}

fn admissibility_with(
    s: &SurfaceClass,
    split: Option<(i128, i128)>,
    family: Option<FamilyRow>,
    restriction: bool,
) -> Admissibility {
    if is_nonexistent_square_family(s) {
        return Admissibility::Excluded;
    }
    let qp = s.qp();
    let certified = family.is_some()
        || split.is_some_and(|(s1, s2)| {
            elliptic_trace_admissible(s1, qp) && elliptic_trace_admissible(s2, qp)
        })
        || restriction
        || (s.a() * s.a() - s.b() == s.q() && elliptic_trace_admissible(s.a(), qp));
    if certified {
        Admissibility::Certified
    } else {
        Admissibility::Unchecked
    }
}

/// `(0, b)` is the restriction of scalars of an elliptic curve over
/// `F_{q^2}` with trace `-b`, which is principally polarized.
fn restriction_route(s: &SurfaceClass) -> bool {
    s.a() == 0 && elliptic_trace_admissible(-s.b(), s.qp().power(2))
}

/// Everything computed about one class; [`DecisionRecord`] is its public face.
#[derive(Debug, Clone)]
struct Assessment {
    newton: NewtonType,
    shape: Shape,
    admissibility: Admissibility,
    pp: bool,
    split: Option<(i128, i128)>,
    restriction: bool,
    cm: Option<CmDecision>,
    survey: Option<PrimeSurvey>,
    family: Option<(FamilyRow, Option<Reason>)>,
    artin: Option<ArtinOutcome>,
}

fn assess(s: &SurfaceClass) -> Result<Assessment> {
    if !on_circle_valid(s) {
        return Err(domain(format!("{s} is not a valid Weil polynomial")));
    }
    let newton = newton_type_unchecked(s);
    let split = elliptic_split_unchecked(s);
    let shape = shape_from_split(s, split);
    let restriction = restriction_route(s);
    let row = family_row(s);
    let admissibility = admissibility_with(s, split, row, restriction);
    let pp = main_criterion_unchecked(s)?;

    let (mut cm, mut survey) = (None, None);
    match shape {
        Shape::Irreducible => {
            let sv = survey_of(&cm_field_unchecked(s, 1)?)?;
            cm = Some(decision_from_survey(&sv));
            survey = Some(sv);
        }
        Shape::Square => cm = Some(crate::cmquartic::cm_decision(s)?),
        Shape::SplitPair => {}
    }

    let family = row.map(|row| (row, survey.as_ref().and_then(reason_from_survey)));
    let artin = if shape == Shape::Irreducible && s.a() == 0 && s.b() == -s.q() {
        match artin_decision(s) {
            Ok(o) => Some(o),
            Err(Error::Inapplicable(_)) => None,
            Err(e) => return Err(e),
        }
    } else {
        None
    };

    Ok(Assessment {
        newton,
        shape,
        admissibility,
        pp,
        split,
        restriction,
        cm,
        survey,
        family,
        artin,
    })
}

impl Assessment {
    /// Every way the evidence contradicts the verdict.
    fn conflicts(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.newton == NewtonType::Mixed && !self.pp {
            out.push("mixed class reported not principally polarizable".into());
        }
        if self.restriction && !self.pp {
            out.push("restriction of scalars is principally polarized".into());
        }
        if let Some(d) = self.cm {
            if d.proves_pp() && !self.pp {
                out.push(format!(
                    "CM condition {} proves principal polarizability",
                    d.as_str()
                ));
            }
        }
        if let Some(a) = &self.artin {
            if a.principally_polarizable != self.pp {
                out.push(format!("Artin symbol {} disagrees with the verdict", a.psi));
            }
        }
        if let Some((row, computed)) = &self.family {
            let printed = row.printed_reason();
            if *computed != printed {
                out.push(format!(
                    "row {}: computed reason {:?} differs from printed {:?}",
                    row.number(),
                    computed.as_ref().map(|r| r.to_string()),
                    printed.as_ref().map(|r| r.to_string())
                ));
            }
            match printed {
                Some(_) if !self.pp => out.push(format!(
                    "row {} has a reason but verdict is not PP",
                    row.number()
                )),
                None if self.pp => out.push(format!(
                    "row {} has no reason but verdict is PP",
                    row.number()
                )),
                None if self.artin.is_none() => {
                    out.push(format!("row {}: Artin test unavailable", row.number()))
                }
                _ => {}
            }
        }
        out
    }

    fn path(&self) -> Vec<String> {
        let mut path = vec![
            "on_circle:valid".to_string(),
            format!("newton:{}", self.newton.as_str()),
            format!("shape:{}", self.shape.as_str()),
            format!("main_criterion:{}", if self.pp { "pp" } else { "not_pp" }),
        ];
        if self.newton == NewtonType::Mixed {
            path.push("mixed:pp".into());
        }
        if let Some((s1, s2)) = self.split {
            path.push(format!("elliptic_split:({s1},{s2})"));
        }
        if self.restriction {
            path.push("restriction_of_scalars:pp".into());
        }
        if let Some(d) = self.cm {
            path.push(format!("cm:{}", d.as_str()));
        }
        if let Some((row, computed)) = &self.family {
            let r = computed
                .as_ref()
                .map_or("---".to_string(), |r| r.to_string());
            path.push(format!("table1:row{}:{}", row.number(), r));
        }
        if let Some(a) = &self.artin {
            path.push(format!("artin:psi={}", a.psi));
        }
        path
    }
}

/// Evidence attached to a [`DecisionRecord`].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Evidence {
    pub cm_decision: Option<CmDecision>,
    pub reason: Option<String>,
    pub ramified_primes: Vec<PrimeIdeal>,
    pub inert_divisor_primes: Vec<PrimeIdeal>,
    pub artin_symbol: Option<i8>,
    pub family_row: Option<FamilyRow>,
}

/// The per-class verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecisionRecord {
    pub cls: SurfaceClass,
    pub valid: bool,
    pub admissibility: Option<Admissibility>,
    pub newton: Option<NewtonType>,
    pub shape: Option<Shape>,
    /// `None` only for invalid classes.
    pub principally_polarizable: Option<bool>,
    pub path: Vec<String>,
    pub evidence: Evidence,
    /// Contradictions between the verdict and the evidence; always empty
    /// unless something is wrong.
    pub conflicts: Vec<String>,
}

/// Full decision for one class: verdict from [`main_criterion`] plus every
/// piece of independent evidence whose hypotheses hold.
pub fn decide(s: &SurfaceClass) -> DecisionRecord {
    if !on_circle_valid(s) {
        return DecisionRecord {
            cls: *s,
            valid: false,
            admissibility: None,
            newton: None,
            shape: None,
            principally_polarizable: None,
            path: vec!["on_circle:invalid".into()],
            evidence: Evidence::default(),
            conflicts: Vec::new(),
        };
    }
    let a = assess(s).expect("assessment of a valid class");
    let reason = match (&a.family, &a.survey) {
        (Some((_, r)), _) => r.as_ref().map(|r| r.to_string()),
        (None, Some(sv)) => reason_from_survey(sv).map(|r| r.to_string()),
        (None, None) => {
            a.cm.filter(|d| d.proves_pp())
                .map(|d| d.as_str().to_string())
        }
    };
    let evidence = Evidence {
        cm_decision: a.cm,
        reason,
        ramified_primes: a.survey.as_ref().map(|s| s.ramified()).unwrap_or_default(),
        inert_divisor_primes: a
            .survey
            .as_ref()
            .map(|s| s.inert_divisors())
            .unwrap_or_default(),
        artin_symbol: a.artin.as_ref().map(|o| o.psi),
        family_row: a.family.as_ref().map(|f| f.0),
    };
    DecisionRecord {
        cls: *s,
        valid: true,
        admissibility: Some(a.admissibility),
        newton: Some(a.newton),
        shape: Some(a.shape),
        principally_polarizable: Some(a.pp),
        path: a.path(),
        evidence,
        conflicts: a.conflicts(),
    }
}

#[derive(Serialize)]
struct PrimeJson {
    ell: i128,
    kind: PrimeKind,
    root: Option<i128>,
}

impl From<&PrimeIdeal> for PrimeJson {
    fn from(p: &PrimeIdeal) -> Self {
        Self {
            ell: p.ell(),
            kind: p.kind(),
            root: p.root(),
        }
    }
}

#[derive(Serialize)]
struct EvidenceJson {
    reason: Option<String>,
    ramified_primes: Vec<PrimeJson>,
    inert_divisor_primes: Vec<PrimeJson>,
    artin_symbol: Option<i8>,
}

#[derive(Serialize)]
struct RecordJson<'a> {
    q: i128,
    p: i128,
    m: u32,
    a: i128,
    b: i128,
    valid: bool,
    admissibility: Option<Admissibility>,
    newton: Option<NewtonType>,
    shape: Option<Shape>,
    principally_polarizable: Option<bool>,
    path: &'a [String],
    evidence: EvidenceJson,
}

impl Serialize for DecisionRecord {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let qp = self.cls.qp();
        let e = &self.evidence;
        RecordJson {
            q: qp.q(),
            p: qp.p(),
            m: qp.m(),
            a: self.cls.a(),
            b: self.cls.b(),
            valid: self.valid,
            admissibility: self.admissibility,
            newton: self.newton,
            shape: self.shape,
            principally_polarizable: self.principally_polarizable,
            path: &self.path,
            evidence: EvidenceJson {
                reason: e.reason.clone(),
                ramified_primes: e.ramified_primes.iter().map(PrimeJson::from).collect(),
                inert_divisor_primes: e.inert_divisor_primes.iter().map(PrimeJson::from).collect(),
                artin_symbol: e.artin_symbol,
            },
        }
        .serialize(ser)
    }
}

/// Column names of the flat CSV form of a [`DecisionRecord`].
pub const CSV_HEADER: [&str; 15] = [
    "q",
    "p",
    "m",
    "a",
    "b",
    "valid",
    "admissibility",
    "newton",
    "shape",
    "principally_polarizable",
    "path",
    "reason",
    "ramified_primes",
    "inert_divisor_primes",
    "artin_symbol",
];

fn prime_list(ps: &[PrimeIdeal]) -> String {
    ps.iter()
        .map(|p| match p.root() {
            Some(r) => format!("{}:{}:{}", p.ell(), p.kind().as_str(), r),
            None => format!("{}:{}", p.ell(), p.kind().as_str()),
        })
        .collect::<Vec<_>>()
        .join(";")
}

impl DecisionRecord {
    /// One CSV row in [`CSV_HEADER`] order; lists are `;`-separated and
    /// absent values are empty.
    pub fn csv_row(&self) -> Vec<String> {
        let qp = self.cls.qp();
        let opt = |x: Option<&str>| x.unwrap_or("").to_string();
        let e = &self.evidence;
        vec![
            qp.q().to_string(),
            qp.p().to_string(),
            qp.m().to_string(),
            self.cls.a().to_string(),
            self.cls.b().to_string(),
            self.valid.to_string(),
            opt(self.admissibility.map(|a| a.as_str())),
            opt(self.newton.map(|n| n.as_str())),
            opt(self.shape.map(|s| s.as_str())),
            self.principally_polarizable
                .map_or("unknown".into(), |b| b.to_string()),
            self.path.join(";"),
            e.reason.clone().unwrap_or_default(),
            prime_list(&e.ramified_primes),
            prime_list(&e.inert_divisor_primes),
            e.artin_symbol.map_or(String::new(), |x| x.to_string()),
        ]
    }
}

/// One contradiction found by [`cross_check`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Disagreement {
    pub q: i128,
    pub a: i128,
    pub b: i128,
    pub detail: String,
}

/// Tallies from a cross-check run.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CrossCheckReport {
    pub q_max: i128,
    pub prime_powers: usize,
    pub classes: u64,
    pub not_pp: u64,
    /// Classes where a CM sufficient condition proved principal polarizability.
    pub cm_pp_evidence: u64,
    pub artin_evidence: u64,
    pub mixed_evidence: u64,
    pub restriction_evidence: u64,
    pub family_instances: u64,
    pub disagreements: Vec<Disagreement>,
}

impl CrossCheckReport {
    fn merge(mut self, other: CrossCheckReport) -> Self {
        self.prime_powers += other.prime_powers;
        self.classes += other.classes;
        self.not_pp += other.not_pp;
        self.cm_pp_evidence += other.cm_pp_evidence;
        self.artin_evidence += other.artin_evidence;
        self.mixed_evidence += other.mixed_evidence;
        self.restriction_evidence += other.restriction_evidence;
        self.family_instances += other.family_instances;
        self.disagreements.extend(other.disagreements);
        self
    }

    pub fn is_clean(&self) -> bool {
        self.disagreements.is_empty()
    }
}

/// Cross-checks one `q`: every valid class, plus each family instance.
pub fn cross_check_q(qp: PrimePower) -> CrossCheckReport {
    let mut rep = CrossCheckReport {
        prime_powers: 1,
        ..Default::default()
    };
    let q = qp.q();
    let mut record = |s: &SurfaceClass, detail: String| {
        rep_push(&mut rep.disagreements, q, s, detail);
    };
    let mut tallies = CrossCheckReport::default();
    for s in enumerate_valid(qp) {
        let a = match assess(&s) {
            Ok(a) => a,
            Err(e) => {
                record(&s, format!("assessment failed: {e}"));
                continue;
            }
        };
        tallies.classes += 1;
        tallies.not_pp += u64::from(!a.pp);
        tallies.cm_pp_evidence += u64::from(a.cm.is_some_and(|d| d.proves_pp()));
        tallies.artin_evidence += u64::from(a.artin.is_some());
        tallies.mixed_evidence += u64::from(a.newton == NewtonType::Mixed);
        tallies.restriction_evidence += u64::from(a.restriction);
        if a.family.is_some() {
            tallies.family_instances += 1;
            if a.newton != NewtonType::Supersingular {
                record(&s, "listed family is not supersingular".into());
            }
        }
        for c in a.conflicts() {
            record(&s, c);
        }
    }
    // Every family instance must have been met by the enumeration.
    let expected: u64 = FAMILY_ROWS
        .iter()
        .map(|r| r.instances(qp).len() as u64)
        .sum();
    if expected != tallies.family_instances {
        record(
            &SurfaceClass::new(qp, 0, 0),
            format!(
                "expected {expected} family instances, enumerated {}",
                tallies.family_instances
            ),
        );
    }
    let disagreements = std::mem::take(&mut rep.disagreements);
    let mut out = rep.merge(tallies);
    out.disagreements = disagreements;
    out
}

fn rep_push(list: &mut Vec<Disagreement>, q: i128, s: &SurfaceClass, detail: String) {
    list.push(Disagreement {
        q,
        a: s.a(),
        b: s.b(),
        detail,
    });
}

/// Prime powers `2 <= q <= q_max`, ascending.
pub fn prime_powers_up_to(q_max: i128) -> Vec<PrimePower> {
    (2..=q_max)
        .filter_map(|q| PrimePower::new(q).ok())
        .collect()
}

/// Runs [`cross_check_q`] for every prime power up to `q_max` on `jobs`
/// worker threads and merges the results in ascending order of `q`.
pub fn cross_check(q_max: i128, jobs: usize) -> Result<CrossCheckReport> {
    if q_max < 2 {
        return Err(domain(format!("q_max must be at least 2, got {q_max}")));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| domain(format!("thread pool: {e}")))?;
    let qs = prime_powers_up_to(q_max);
    let parts: Vec<CrossCheckReport> =
        pool.install(|| qs.par_iter().map(|&qp| cross_check_q(qp)).collect());
    let base = CrossCheckReport {
        q_max,
        ..Default::default()
    };
    Ok(parts.into_iter().fold(base, CrossCheckReport::merge))
}
