//! Candidate Weil polynomials `x^4 + a x^3 + b x^2 + a q x + q^2` of abelian
//! surfaces: root-circle validity, Newton polygons, elliptic factorizations
//! and the trace-zero / quadratic restriction-of-scalars coefficient maps.

use std::fmt;

use serde::Serialize;

use crate::error::{domain, Result};
use crate::intkernel::{exact_sqrt, valuation, PrimePower};

/// The isogeny-class candidate `(q, a, b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SurfaceClass {
    qp: PrimePower,
    a: i128,
    b: i128,
}

impl SurfaceClass {
    pub fn new(qp: PrimePower, a: i128, b: i128) -> Self {
        Self { qp, a, b }
    }

    /// Builds a class from a raw `q`, failing when `q` is not a prime power.
    pub fn from_q(q: i128, a: i128, b: i128) -> Result<Self> {
        Ok(Self::new(PrimePower::new(q)?, a, b))
    }

    pub fn qp(&self) -> PrimePower {
        self.qp
    }

    pub fn q(&self) -> i128 {
        self.qp.q()
    }

    pub fn p(&self) -> i128 {
        self.qp.p()
    }

    pub fn a(&self) -> i128 {
        self.a
    }

    pub fn b(&self) -> i128 {
        self.b
    }

    /// Coefficients from the constant term up: `[q^2, a q, b, a, 1]`.
    pub fn coefficients(&self) -> [i128; 5] {
        let q = self.q();
        [q * q, self.a * q, self.b, self.a, 1]
    }

    pub fn eval(&self, x: i128) -> i128 {
        self.coefficients()
            .iter()
            .rev()
            .fold(0, |acc, &c| acc * x + c)
    }
}

impl fmt::Display for SurfaceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(a={}, b={}) over F_{}", self.a, self.b, self.q())
    }
}

/// True iff every complex root of the quartic has absolute value `sqrt(q)`.
///
/// Equivalent to both roots of `t^2 + a t + (b - 2q)` being real and lying
/// in `[-2 sqrt(q), 2 sqrt(q)]`, which is decided with integer inequalities.
pub fn on_circle_valid(s: &SurfaceClass) -> bool {
    let (q, a, b) = (s.q(), s.a, s.b);
    let bq = b + 2 * q;
    a * a <= 16 * q && a * a - 4 * b + 8 * q >= 0 && bq >= 0 && bq * bq >= 4 * a * a * q
}

/// The real Weil polynomial `t^2 + a t + c` with `c = b - 2q` and its
/// discriminant `d = a^2 - 4c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RealWeil {
    pub a: i128,
    pub c: i128,
    pub d: i128,
}

pub fn real_weil(s: &SurfaceClass) -> RealWeil {
    let c = s.b - 2 * s.q();
    RealWeil {
        a: s.a,
        c,
        d: s.a * s.a - 4 * c,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NewtonType {
    Ordinary,
    Mixed,
    Supersingular,
    /// Any slope sequence other than the three above. Such polygons cannot
    /// come from an abelian surface.
    NonSymmetric,
}

impl NewtonType {
    pub fn as_str(self) -> &'static str {
        match self {
            NewtonType::Ordinary => "ordinary",
            NewtonType::Mixed => "mixed",
            NewtonType::Supersingular => "supersingular",
            NewtonType::NonSymmetric => "non_symmetric",
        }
    }
}

/// Lower convex hull of the `p`-adic valuation points, returned as the four
/// slopes (drop per unit step, as `(drop, run)` pairs) from left to right.
fn newton_slopes(s: &SurfaceClass) -> [(i128, i128); 4] {
    let (p, m) = (s.p(), s.qp.m() as i128);
    let v = |c: i128| (c != 0).then(|| valuation(c, p) as i128);
    let (va, vb) = (v(s.a), v(s.b));
    let points = [
        Some((0, 2 * m)),
        va.map(|va| (1, va + m)),
        vb.map(|vb| (2, vb)),
        va.map(|va| (3, va)),
        Some((4, 0)),
    ];

    let mut hull = [(0i128, 0i128); 5];
    let mut len = 0;
    for pt in points.into_iter().flatten() {
        while len >= 2 {
            let (o, a) = (hull[len - 2], hull[len - 1]);
            let cross = (a.0 - o.0) * (pt.1 - o.1) - (a.1 - o.1) * (pt.0 - o.0);
            if cross <= 0 {
                len -= 1;
            } else {
                break;
            }
        }
        hull[len] = pt;
        len += 1;
    }

    let mut slopes = [(0, 1); 4];
    let mut k = 0;
    for w in hull[..len].windows(2) {
        let (run, drop) = (w[1].0 - w[0].0, w[0].1 - w[1].1);
        for _ in 0..run {
            slopes[k] = (drop, run);
            k += 1;
        }
    }
    slopes
}

/// Classifies the Newton polygon of a valid class.
pub fn newton_type(s: &SurfaceClass) -> Result<NewtonType> {
    if !on_circle_valid(s) {
        return Err(domain(format!(
            "Newton type requested for invalid class {s}"
        )));
    }
    Ok(newton_type_unchecked(s))
}

pub(crate) fn newton_type_unchecked(s: &SurfaceClass) -> NewtonType {
    let m = s.qp.m() as i128;
    let slopes = newton_slopes(s);
    // Targets as rationals num/den in units of v_p.
    let matches = |targets: [(i128, i128); 4]| {
        slopes
            .iter()
            .zip(targets.iter())
            .all(|(&(drop, run), &(num, den))| drop * den == num * run)
    };
    let (full, half, zero) = ((m, 1), (m, 2), (0, 1));
    if matches([full, full, zero, zero]) {
        NewtonType::Ordinary
    } else if matches([half; 4]) {
        NewtonType::Supersingular
    } else if matches([full, half, half, zero]) {
        NewtonType::Mixed
    } else {
        NewtonType::NonSymmetric
    }
}

/// Integer roots `s1 <= s2` of the real Weil polynomial, i.e. the traces of
/// a factorization `(x^2 - s1 x + q)(x^2 - s2 x + q)`.
pub fn elliptic_split(s: &SurfaceClass) -> Result<Option<(i128, i128)>> {
    if !on_circle_valid(s) {
        return Err(domain(format!(
            "elliptic split requested for invalid class {s}"
        )));
    }
    Ok(elliptic_split_unchecked(s))
}

pub(crate) fn elliptic_split_unchecked(s: &SurfaceClass) -> Option<(i128, i128)> {
    let rw = real_weil(s);
    exact_sqrt(rw.d).and_then(|root| {
        let (lo, hi) = (-rw.a - root, -rw.a + root);
        (lo % 2 == 0).then_some((lo / 2, hi / 2))
    })
}

/// How the quartic factors over the rationals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Shape {
    Irreducible,
    /// Product of two distinct quadratics `x^2 - s x + q`.
    SplitPair,
    /// Square of a quadratic.
    Square,
}

impl Shape {
    pub fn as_str(self) -> &'static str {
        match self {
            Shape::Irreducible => "irreducible",
            Shape::SplitPair => "split_pair",
            Shape::Square => "square",
        }
    }
}

/// Rational factorization shape of a valid class.
///
/// A Weil quartic is reducible exactly when its real Weil polynomial has
/// integer roots, or when it equals `(x^2 - q)^2` for nonsquare `q`.
pub fn factor_shape(s: &SurfaceClass) -> Result<Shape> {
    Ok(shape_from_split(s, elliptic_split(s)?))
}

/// [`factor_shape`] given the result of [`elliptic_split`].
pub(crate) fn shape_from_split(s: &SurfaceClass, split: Option<(i128, i128)>) -> Shape {
    match split {
        Some((s1, s2)) if s1 == s2 => Shape::Square,
        Some(_) => Shape::SplitPair,
        None if s.a == 0 && s.b == -2 * s.q() => Shape::Square,
        None => Shape::Irreducible,
    }
}

/// Whether `t` is the trace of Frobenius of some elliptic curve over `F_q`
/// (Waterhouse's classification).
pub fn elliptic_trace_admissible(t: i128, qp: PrimePower) -> bool {
    let (p, m, q) = (qp.p(), qp.m(), qp.q());
    if t * t > 4 * q {
        return false;
    }
    if t % p != 0 {
        return true;
    }
    let even = m % 2 == 0;
    let root = qp.sqrt();
    if even && root.is_some_and(|r| t.abs() == 2 * r) {
        return true;
    }
    if even && p % 3 != 1 && root.is_some_and(|r| t.abs() == r) {
        return true;
    }
    if !even && (p == 2 || p == 3) && t.abs() == p.pow(m.div_ceil(2)) {
        return true;
    }
    t == 0 && (!even || p % 4 != 1)
}

/// The class `A_(aE, aE^2 - q)` of the trace-zero surface of an elliptic
/// curve with trace `aE`.
pub fn trace_zero_class(a_e: i128, qp: PrimePower) -> Result<SurfaceClass> {
    if a_e * a_e > 4 * qp.q() {
        return Err(domain(format!(
            "elliptic trace {a_e} violates the Weil bound over F_{}",
            qp.q()
        )));
    }
    Ok(SurfaceClass::new(qp, a_e, a_e * a_e - qp.q()))
}

/// The class `A_(0, bE)` attached to the restriction of scalars from
/// `F_{q^2}` of an elliptic curve with trace `bE` over `F_{q^2}`.
pub fn res_quadratic_class(b_e: i128, qp: PrimePower) -> Result<SurfaceClass> {
    let q = qp.q();
    if b_e * b_e > 4 * q * q {
        return Err(domain(format!(
            "elliptic trace {b_e} violates the Weil bound over F_{}",
            q * q
        )));
    }
    Ok(SurfaceClass::new(qp, 0, b_e))
}
