//! CM-field data attached to an irreducible Weil quartic and the sufficient
//! conditions for principal polarizability that can be read off it.
//!
//! For `f = x^4 + a x^3 + b x^2 + a q x + q^2` with Frobenius root `pi`, the
//! real subfield is `K+ = Q(beta)` with `beta = pi + conj(pi)` a root of
//! `t^2 + a t + (b - 2q)`, and `K = K+(sqrt(delta))` with
//! `delta = (pi - conj(pi))^2 = beta^2 - 4q`. Neither `pi` nor the
//! Frobenius/Verschiebung endomorphisms are materialized: everything below
//! is phrased in terms of `beta`, `q` and `delta`.
//!
//! A prime `P` of `K+` that is unramified in `K` divides `pi - conj(pi)`
//! exactly when `v_P(delta) >= 2`: above an inert `P` the valuation of
//! `pi - conj(pi)` is `v_P(delta) / 2`. Only primes dividing
//! `2 * Norm(delta)` can ramify, since the relative discriminant divides
//! `4 delta`.

use serde::Serialize;

use crate::error::{domain, Result};
use crate::intkernel::{factorize, squarefree_decompose};
use crate::quadring::{
    ideal_valuation, push_primes_containing, relative_splitting_at, PrimeIdeal, PrimeKind,
    QuadElement, QuadField,
};
use crate::weilpoly::{factor_shape, on_circle_valid, real_weil, Shape, SurfaceClass};

/// Field-theoretic part of [`CmData`], present only for irreducible quartics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CmField {
    pub d0: i128,
    pub field: QuadField,
    /// Root of `t^2 + a t + (b - 2q)`.
    pub beta: QuadElement,
    /// `beta^2 - 4q`.
    pub delta: QuadElement,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CmData {
    pub cls: SurfaceClass,
    /// Discriminant `a^2 - 4b + 8q` of the real Weil polynomial.
    pub d: i128,
    pub irreducible: bool,
    pub cm: Option<CmField>,
}

impl CmData {
    pub fn totally_negative_delta(&self) -> bool {
        self.cm.is_some_and(|c| c.delta.is_totally_negative())
    }

    fn field(&self) -> Result<&CmField> {
        self.cm
            .as_ref()
            .ok_or_else(|| domain(format!("{} has a reducible Weil polynomial", self.cls)))
    }
}

/// CM data with `beta` taken as the root whose `sqrt(d0)` coefficient is
/// positive.
pub fn cm_data(s: &SurfaceClass) -> Result<CmData> {
    cm_data_with_root(s, 1)
}

/// CM data with the root `beta = (-a + sign * c sqrt(d0)) / 2`.
pub fn cm_data_with_root(s: &SurfaceClass, sign: i128) -> Result<CmData> {
    if !on_circle_valid(s) {
        return Err(domain(format!("{s} is not a valid Weil polynomial")));
    }
    let rw = real_weil(s);
    let irreducible = factor_shape(s)? == Shape::Irreducible && !has_rational_root(s);
    let cm = if irreducible {
        Some(cm_field_unchecked(s, sign)?)
    } else {
        None
    };
    Ok(CmData {
        cls: *s,
        d: rw.d,
        irreducible,
        cm,
    })
}

/// The CM field of a class already known to be valid and irreducible.
pub(crate) fn cm_field_unchecked(s: &SurfaceClass, sign: i128) -> Result<CmField> {
    let rw = real_weil(s);
    let (d0, c) = squarefree_decompose(rw.d)?;
    let field = QuadField::from_squarefree(d0);
    let beta = field.element(-rw.a, sign.signum() * c)?;
    let delta = beta * beta - field.from_int(4 * s.q());
    debug_assert!(beta * beta + beta.scale(rw.a) + field.from_int(rw.c) == field.from_int(0));
    Ok(CmField {
        d0,
        field,
        beta,
        delta,
    })
}

/// A rational root of a Weil quartic has absolute value `sqrt(q)`.
fn has_rational_root(s: &SurfaceClass) -> bool {
    s.qp()
        .sqrt()
        .is_some_and(|r| s.eval(r) == 0 || s.eval(-r) == 0)
}

/// Primes of `K+` over the rational primes dividing `2 Norm(delta)`. Odd
/// split primes not containing `delta` may be left out.
fn candidate_primes(cm: &CmField) -> Result<Vec<PrimeIdeal>> {
    let norm = cm.delta.norm();
    let mut out = Vec::with_capacity(8);
    for ell in factorize(2 * norm)?.primes() {
        push_primes_containing(cm.field, ell, &cm.delta, &mut out)?;
    }
    Ok(out)
}

/// Relative behaviour and `delta`-valuation of every prime of `K+` that
/// divides `2 delta`, computed once. Other primes are unramified in `K` and
/// do not divide `pi - conj(pi)`, so no condition looks at them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeSurvey {
    pub entries: Vec<(PrimeIdeal, PrimeKind, u32)>,
}

impl PrimeSurvey {
    pub fn ramified(&self) -> Vec<PrimeIdeal> {
        self.entries
            .iter()
            .filter(|e| e.1 == PrimeKind::Ramified)
            .map(|e| e.0)
            .collect()
    }

    pub fn inert_divisors(&self) -> Vec<PrimeIdeal> {
        self.entries
            .iter()
            .filter(|e| e.1 == PrimeKind::Inert && e.2 >= 2)
            .map(|e| e.0)
            .collect()
    }

    pub fn split_hypothesis(&self) -> bool {
        self.entries
            .iter()
            .all(|&(_, kind, v)| kind != PrimeKind::Ramified && (v < 2 || kind == PrimeKind::Split))
    }
}

/// Relative behaviour and `delta`-valuation of every prime dividing `2 delta`.
pub fn prime_survey(c: &CmData) -> Result<PrimeSurvey> {
    survey_of(c.field()?)
}

pub(crate) fn survey_of(cm: &CmField) -> Result<PrimeSurvey> {
    let mut entries = Vec::new();
    for p in candidate_primes(cm)? {
        let v = ideal_valuation(&p, &cm.delta)?;
        if v == 0 && p.ell() != 2 {
            continue;
        }
        entries.push((p, relative_splitting_at(&p, &cm.delta, v), v));
    }
    Ok(PrimeSurvey { entries })
}

/// Primes of `K+` that ramify in `K/K+`.
pub fn finite_ramified_primes(c: &CmData) -> Result<Vec<PrimeIdeal>> {
    Ok(prime_survey(c)?.ramified())
}

/// Primes of `K+` inert in `K/K+` that divide `pi - conj(pi)`.
pub fn inert_divisors_of_pi_minus_pibar(c: &CmData) -> Result<Vec<PrimeIdeal>> {
    Ok(prime_survey(c)?.inert_divisors())
}

/// No prime of `K+` ramifies in `K`, and every prime dividing
/// `pi - conj(pi)` splits. These are the hypotheses of the Artin-symbol test.
pub fn split_hypothesis_check(c: &CmData) -> Result<bool> {
    Ok(prime_survey(c)?.split_hypothesis())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CmDecision {
    PpByTotalReality,
    PpByRamification,
    PpByInertDivisor,
    Inconclusive,
    /// The class is not simple (two distinct elliptic factors).
    NotApplicable,
}

impl CmDecision {
    pub fn as_str(self) -> &'static str {
        match self {
            CmDecision::PpByTotalReality => "pp_by_total_reality",
            CmDecision::PpByRamification => "pp_by_ramification",
            CmDecision::PpByInertDivisor => "pp_by_inert_divisor",
            CmDecision::Inconclusive => "inconclusive",
            CmDecision::NotApplicable => "not_applicable",
        }
    }

    pub fn proves_pp(self) -> bool {
        matches!(
            self,
            CmDecision::PpByTotalReality
                | CmDecision::PpByRamification
                | CmDecision::PpByInertDivisor
        )
    }
}

/// The three sufficient conditions for principal polarizability: `K` totally
/// real, a finite prime ramified in `K/K+`, or an inert prime dividing
/// `pi - conj(pi)`.
///
/// For a square `g^2` the field is `K = Q(root of g)`: totally real when the
/// root is real, otherwise imaginary quadratic and hence ramified at a finite
/// prime. Products of two distinct elliptic factors are not simple and get
/// [`CmDecision::NotApplicable`].
pub fn cm_decision(s: &SurfaceClass) -> Result<CmDecision> {
    let c = cm_data(s)?;
    if c.irreducible {
        return Ok(decision_from_survey(&prime_survey(&c)?));
    }
    Ok(match crate::weilpoly::elliptic_split(s)? {
        Some((s1, s2)) if s1 == s2 => {
            if s1 * s1 == 4 * s.q() {
                CmDecision::PpByTotalReality
            } else {
                CmDecision::PpByRamification
            }
        }
        Some(_) => CmDecision::NotApplicable,
        // (x^2 - q)^2 with q a nonsquare: K = Q(sqrt q).
        None => CmDecision::PpByTotalReality,
    })
}

pub(crate) fn decision_from_survey(survey: &PrimeSurvey) -> CmDecision {
    if survey.entries.iter().any(|e| e.1 == PrimeKind::Ramified) {
        CmDecision::PpByRamification
    } else if survey
        .entries
        .iter()
        .any(|e| e.1 == PrimeKind::Inert && e.2 >= 2)
    {
        CmDecision::PpByInertDivisor
    } else {
        CmDecision::Inconclusive
    }
}
