//! The maximal order of a quadratic field `Q(sqrt(d0))` and the behaviour of
//! its primes in a relative quadratic extension `K = K+(sqrt(delta))`.
//!
//! Elements are stored as `(x + y sqrt(d0)) / 2` with the parity condition
//! that keeps them integral. Valuations at a prime `P` over `ell` are read off
//! norms (inert and ramified primes) or from an `ell`-adic embedding of the
//! order (split primes), so no ideal factorization machinery is needed.
//!
//! Splitting of `P` in `K+(sqrt(delta))` only depends on the square class of
//! `delta` in the completion at `P`. For odd `ell` this is a residue-field
//! quadratic character; above 2 it is decided by exhaustive search for square
//! roots modulo `P^(2e+1)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::intkernel::{
    exact_sqrt, inv_mod, is_prime, kronecker_symbol, legendre, mul_mod, sqrt_mod_prime,
    squarefree_decompose, valuation,
};

/// `Q(sqrt(d0))` for a squarefree `d0 != 0, 1`, identified with its maximal
/// order. Real fields have `d0 > 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadField {
    d0: i128,
    disc: i128,
}

impl QuadField {
    pub fn new(d0: i128) -> Result<Self> {
        if d0 == 0 || d0 == 1 || squarefree_decompose(d0)? != (d0, 1) {
            return Err(domain(format!(
                "{d0} is not a squarefree integer other than 0, 1"
            )));
        }
        let disc = if d0.rem_euclid(4) == 1 { d0 } else { 4 * d0 };
        Ok(Self { d0, disc })
    }

    /// `d0` already known to be squarefree and other than 0, 1.
    pub(crate) fn from_squarefree(d0: i128) -> Self {
        debug_assert!(d0 != 0 && d0 != 1);
        let disc = if d0.rem_euclid(4) == 1 { d0 } else { 4 * d0 };
        Self { d0, disc }
    }

    /// A real quadratic field; `d0 > 1` is required.
    pub fn real(d0: i128) -> Result<Self> {
        if d0 <= 1 {
            return Err(domain(format!(
                "real quadratic field needs d0 > 1, got {d0}"
            )));
        }
        Self::new(d0)
    }

    pub fn d0(&self) -> i128 {
        self.d0
    }

    pub fn disc(&self) -> i128 {
        self.disc
    }

    pub fn is_real(&self) -> bool {
        self.d0 > 1
    }

    fn half_basis(&self) -> bool {
        self.d0.rem_euclid(4) == 1
    }

    /// `(c1, c0)` with `omega^2 + c1 omega + c0 = 0`, where `omega` is the
    /// second element of the integral basis `{1, omega}`.
    pub fn omega_min_poly(&self) -> (i128, i128) {
        if self.half_basis() {
            (-1, -(self.d0 - 1) / 4)
        } else {
            (0, -self.d0)
        }
    }

    /// `(x + y sqrt(d0)) / 2`, rejected when not integral.
    pub fn element(&self, x: i128, y: i128) -> Result<QuadElement> {
        let ok = if self.half_basis() {
            (x - y).rem_euclid(2) == 0
        } else {
            x % 2 == 0 && y % 2 == 0
        };
        if !ok {
            return Err(domain(format!(
                "({x} + {y} sqrt({}))/2 is not in the maximal order",
                self.d0
            )));
        }
        Ok(QuadElement { field: *self, x, y })
    }

    pub fn from_int(&self, n: i128) -> QuadElement {
        QuadElement {
            field: *self,
            x: 2 * n,
            y: 0,
        }
    }

    /// `u + v sqrt(d0)`.
    pub fn from_sqrt_coords(&self, u: i128, v: i128) -> QuadElement {
        QuadElement {
            field: *self,
            x: 2 * u,
            y: 2 * v,
        }
    }

    /// `u + v omega` in the integral basis.
    pub fn from_basis(&self, u: i128, v: i128) -> QuadElement {
        if self.half_basis() {
            QuadElement {
                field: *self,
                x: 2 * u + v,
                y: v,
            }
        } else {
            QuadElement {
                field: *self,
                x: 2 * u,
                y: 2 * v,
            }
        }
    }

    /// `sqrt(d0)`.
    pub fn sqrt_d0(&self) -> QuadElement {
        QuadElement {
            field: *self,
            x: 0,
            y: 2,
        }
    }
}

impl fmt::Display for QuadField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(sqrt({}))", self.d0)
    }
}

/// An element `(x + y sqrt(d0)) / 2` of the maximal order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadElement {
    field: QuadField,
    x: i128,
    y: i128,
}

impl QuadElement {
    pub fn field(&self) -> QuadField {
        self.field
    }

    pub fn x(&self) -> i128 {
        self.x
    }

    pub fn y(&self) -> i128 {
        self.y
    }

    pub fn is_zero(&self) -> bool {
        self.x == 0 && self.y == 0
    }

    pub fn is_rational(&self) -> bool {
        self.y == 0
    }

    pub fn trace(&self) -> i128 {
        self.x
    }

    pub fn norm(&self) -> i128 {
        (self.x * self.x - self.field.d0 * self.y * self.y) / 4
    }

    pub fn conj(&self) -> Self {
        Self {
            y: -self.y,
            ..*self
        }
    }

    pub fn scale(&self, k: i128) -> Self {
        Self {
            x: self.x * k,
            y: self.y * k,
            ..*self
        }
    }

    /// Coordinates `(u, v)` with `self = u + v omega`.
    pub fn basis(&self) -> (i128, i128) {
        if self.field.half_basis() {
            ((self.x - self.y) / 2, self.y)
        } else {
            (self.x / 2, self.y / 2)
        }
    }

    /// `self / k` when the quotient stays in the order.
    pub fn div_exact(&self, k: i128) -> Option<Self> {
        let (u, v) = self.basis();
        (u % k == 0 && v % k == 0).then(|| self.field.from_basis(u / k, v / k))
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut acc = self.field.from_int(1);
        let mut base = *self;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// Both real embeddings negative (real fields only).
    pub fn is_totally_negative(&self) -> bool {
        self.field.is_real() && self.x < 0 && self.x * self.x > self.field.d0 * self.y * self.y
    }

    /// A square root inside the order, when one exists.
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(*self);
        }
        let n = exact_sqrt(self.norm())?;
        let d0 = self.field.d0;
        for eps in [1, -1] {
            let Some(s) = exact_sqrt(self.x + 2 * eps * n) else {
                continue;
            };
            let t = if s != 0 {
                if self.y % s != 0 {
                    continue;
                }
                self.y / s
            } else {
                if (2 * self.x) % d0 != 0 {
                    continue;
                }
                match exact_sqrt(2 * self.x / d0) {
                    Some(t) => t,
                    None => continue,
                }
            };
            for t in [t, -t] {
                if let Ok(z) = self.field.element(s, t) {
                    if z * z == *self {
                        return Some(z);
                    }
                }
            }
        }
        None
    }
}

impl Add for QuadElement {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        debug_assert_eq!(self.field, o.field);
        Self {
            x: self.x + o.x,
            y: self.y + o.y,
            ..self
        }
    }
}

impl Sub for QuadElement {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        debug_assert_eq!(self.field, o.field);
        Self {
            x: self.x - o.x,
            y: self.y - o.y,
            ..self
        }
    }
}

impl Neg for QuadElement {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            x: -self.x,
            y: -self.y,
            ..self
        }
    }
}

impl Mul for QuadElement {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        debug_assert_eq!(self.field, o.field);
        let d0 = self.field.d0;
        Self {
            x: (self.x * o.x + d0 * self.y * o.y) / 2,
            y: (self.x * o.y + self.y * o.x) / 2,
            ..self
        }
    }
}

impl fmt::Display for QuadElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.x % 2 == 0 && self.y % 2 == 0, self.y) {
            (true, 0) => write!(f, "{}", self.x / 2),
            (true, _) => write!(f, "{} + {}*sqrt({})", self.x / 2, self.y / 2, self.field.d0),
            (false, _) => write!(f, "({} + {}*sqrt({}))/2", self.x, self.y, self.field.d0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PrimeKind {
    Split,
    Inert,
    Ramified,
}

impl PrimeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PrimeKind::Split => "split",
            PrimeKind::Inert => "inert",
            PrimeKind::Ramified => "ramified",
        }
    }
}

/// A prime of the order above the rational prime `ell`.
///
/// For split and ramified primes `root` is the residue `r` of `omega`, so
/// that `P = (ell, omega - r)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeIdeal {
    field: QuadField,
    ell: i128,
    kind: PrimeKind,
    root: Option<i128>,
}

impl PrimeIdeal {
    pub fn field(&self) -> QuadField {
        self.field
    }

    pub fn ell(&self) -> i128 {
        self.ell
    }

    pub fn kind(&self) -> PrimeKind {
        self.kind
    }

    pub fn root(&self) -> Option<i128> {
        self.root
    }

    pub fn residue_degree(&self) -> u32 {
        if self.kind == PrimeKind::Inert {
            2
        } else {
            1
        }
    }

    pub fn ramification_index(&self) -> u32 {
        if self.kind == PrimeKind::Ramified {
            2
        } else {
            1
        }
    }

    /// The `ell`-adic root of the minimal polynomial of `omega` lifted to
    /// precision `ell^prec` (split primes only).
    fn lifted_root(&self, prec: u32) -> i128 {
        let r0 = self.root.expect("split prime carries a root");
        let modulus = self.ell.pow(prec);
        let (c1, c0) = self.field.omega_min_poly();
        let g =
            |t: i128| (mul_mod(t, t, modulus) + mul_mod(c1, t, modulus) + c0).rem_euclid(modulus);
        let mut r = r0.rem_euclid(modulus);
        let mut correct = 1;
        while correct < prec {
            let deriv = (2 * r + c1).rem_euclid(modulus);
            let inv = inv_mod(deriv, modulus).expect("simple root");
            r = (r - mul_mod(g(r), inv, modulus)).rem_euclid(modulus);
            correct *= 2;
        }
        debug_assert_eq!(g(r), 0);
        r
    }

    /// Image of `x` in the residue field `Z/ell` of a degree-one prime.
    fn reduce(&self, x: &QuadElement) -> i128 {
        let (u, v) = x.basis();
        let r = self.root.expect("degree-one prime carries a root");
        (u + mul_mod(v, r, self.ell)).rem_euclid(self.ell)
    }

    /// Image of `x` in `Z/ell^prec` under the embedding attached to a split
    /// prime, or to its conjugate when `conjugate` is set.
    fn embed(&self, x: &QuadElement, prec: u32, conjugate: bool) -> i128 {
        let modulus = self.ell.pow(prec);
        let mut r = self.lifted_root(prec);
        if conjugate {
            // The two roots of omega's minimal polynomial sum to -c1.
            r = (-self.field.omega_min_poly().0 - r).rem_euclid(modulus);
        }
        let (u, v) = x.basis();
        (u + mul_mod(v, r, modulus)).rem_euclid(modulus)
    }

    /// An element of valuation exactly 1 at a ramified prime.
    fn ramified_uniformizer(&self) -> QuadElement {
        let f = self.field;
        let s = f.sqrt_d0();
        if valuation(s.norm(), self.ell) == 1 {
            s
        } else {
            f.from_int(1) + s
        }
    }
}

impl fmt::Display for PrimeIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.root {
            Some(r) if self.kind == PrimeKind::Split => {
                write!(f, "({}, omega - {}) [split]", self.ell, r)
            }
            _ => write!(f, "P{} [{}]", self.ell, self.kind.as_str()),
        }
    }
}

/// The primes of `field` above the rational prime `ell`.
pub fn rational_prime_splitting(field: QuadField, ell: i128) -> Result<Vec<PrimeIdeal>> {
    if !is_prime(ell) {
        return Err(domain(format!("{ell} is not prime")));
    }
    let (c1, c0) = field.omega_min_poly();
    let make = |kind, root| PrimeIdeal {
        field,
        ell,
        kind,
        root,
    };
    Ok(match kronecker_symbol(field.disc, ell)? {
        0 => {
            let r = if ell == 2 {
                field.d0.rem_euclid(2)
            } else {
                mul_mod(-c1, inv_mod(2, ell).unwrap(), ell)
            };
            vec![make(PrimeKind::Ramified, Some(r))]
        }
        -1 => vec![make(PrimeKind::Inert, None)],
        _ => {
            let (r1, r2) = if ell == 2 {
                (0, 1)
            } else {
                let s = sqrt_mod_prime(c1 * c1 - 4 * c0, ell).expect("split prime");
                let half = inv_mod(2, ell).unwrap();
                let r1 = mul_mod(-c1 + s, half, ell);
                let r2 = mul_mod(-c1 - s, half, ell);
                (r1.min(r2), r1.max(r2))
            };
            vec![
                make(PrimeKind::Split, Some(r1)),
                make(PrimeKind::Split, Some(r2)),
            ]
        }
    })
}

/// Primes over `ell` that may contain `x`, appended to `out`. When `ell` is
/// odd, split, divides `Norm(x)` and not the content of `x`, exactly one prime
/// contains `x` and its root `-u/v` is read off `x = u + v omega`; this skips
/// the square root mod `ell`.
pub(crate) fn push_primes_containing(
    field: QuadField,
    ell: i128,
    x: &QuadElement,
    out: &mut Vec<PrimeIdeal>,
) -> Result<()> {
    if ell != 2 && kronecker_symbol(field.disc, ell)? == 1 {
        let (u, v) = x.basis();
        if v.rem_euclid(ell) != 0 && x.norm().rem_euclid(ell) == 0 {
            let r = mul_mod(-u, inv_mod(v, ell).expect("v prime to ell"), ell);
            out.push(PrimeIdeal {
                field,
                ell,
                kind: PrimeKind::Split,
                root: Some(r),
            });
            return Ok(());
        }
    }
    out.extend(rational_prime_splitting(field, ell)?);
    Ok(())
}

/// Exact `P`-adic valuation of a nonzero element.
pub fn ideal_valuation(p: &PrimeIdeal, x: &QuadElement) -> Result<u32> {
    if x.is_zero() {
        return Err(domain("valuation of 0"));
    }
    debug_assert_eq!(p.field, x.field);
    let ell = p.ell;
    Ok(match p.kind {
        PrimeKind::Inert => {
            let (u, v) = x.basis();
            let g = crate::intkernel::gcd(u, v);
            valuation(g, ell)
        }
        PrimeKind::Ramified => valuation(x.norm(), ell),
        PrimeKind::Split => {
            let (c, prim) = strip_content(x, ell);
            if p.reduce(&prim) == 0 {
                c + valuation(prim.norm(), ell)
            } else {
                c
            }
        }
    })
}

/// `x = ell^c * prim` with `prim` not divisible by `ell`. A primitive element
/// lies in at most one of the two primes above a split `ell`.
fn strip_content(x: &QuadElement, ell: i128) -> (u32, QuadElement) {
    let (u, v) = x.basis();
    let c = valuation(crate::intkernel::gcd(u, v), ell);
    let k = ell.pow(c);
    (c, x.field.from_basis(u / k, v / k))
}

/// Unit part of `delta` at `p`, reduced modulo `ell^prec`, as basis
/// coordinates `(u, v)`. Defined up to squares of `P`-units; requires an
/// even valuation `v`.
fn unit_part(p: &PrimeIdeal, delta: &QuadElement, v: u32, prec: u32) -> (i128, i128) {
    let ell = p.ell;
    let modulus = ell.pow(prec);
    match p.kind {
        PrimeKind::Split => {
            // delta = ell^c * prim with prim in P^k and prime to conj(P), so
            // prim / ell^k = (Norm(prim) / ell^k) / conj-image(prim).
            let (c, prim) = strip_content(delta, ell);
            let k = v - c;
            if k == 0 {
                (p.embed(&prim, prec, false), 0)
            } else {
                let n = (prim.norm() / ell.pow(k)).rem_euclid(modulus);
                let other = p.embed(&prim, prec, true);
                let inv = inv_mod(other, modulus).expect("unit at the conjugate prime");
                (mul_mod(n, inv, modulus), 0)
            }
        }
        PrimeKind::Inert => {
            let u = delta
                .div_exact(ell.pow(v))
                .expect("inert prime divides exactly");
            let (a, b) = u.basis();
            (a.rem_euclid(modulus), b.rem_euclid(modulus))
        }
        PrimeKind::Ramified => {
            // delta / pi^v  ~  (delta / ell^w) * (conj(pi)^2 / ell)^w, since
            // pi * conj(pi) = ell * (unit) and the unit enters squared.
            let w = v / 2;
            let head = delta.div_exact(ell.pow(w)).expect("P^(2w) = (ell^w)");
            let pi = p.ramified_uniformizer();
            let rho = (pi.conj() * pi.conj()).div_exact(ell).expect("P^2 = (ell)");
            let ring = ModOrder::new(p.field, modulus);
            let r = ring.pow(rho.basis(), w);
            ring.mul(head.basis(), r)
        }
    }
}

/// Arithmetic on basis coordinates modulo an integer.
struct ModOrder {
    c1: i128,
    c0: i128,
    modulus: i128,
}

impl ModOrder {
    fn new(field: QuadField, modulus: i128) -> Self {
        let (c1, c0) = field.omega_min_poly();
        Self { c1, c0, modulus }
    }

    fn mul(&self, a: (i128, i128), b: (i128, i128)) -> (i128, i128) {
        let m = self.modulus;
        let vv = mul_mod(a.1, b.1, m);
        let u = mul_mod(a.0, b.0, m) - mul_mod(self.c0, vv, m);
        let v = mul_mod(a.0, b.1, m) + mul_mod(a.1, b.0, m) - mul_mod(self.c1, vv, m);
        (u.rem_euclid(m), v.rem_euclid(m))
    }

    fn pow(&self, mut base: (i128, i128), mut e: u32) -> (i128, i128) {
        let mut acc = (1 % self.modulus, 0);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }
}

/// Quadratic character of a `P`-unit given in basis coordinates, odd `ell`.
fn residue_character(p: &PrimeIdeal, unit: (i128, i128)) -> bool {
    let ell = p.ell;
    match p.kind {
        PrimeKind::Split | PrimeKind::Ramified => {
            let r = p.root.expect("degree-one prime carries a root");
            let res = (unit.0 + mul_mod(unit.1, r, ell)).rem_euclid(ell);
            legendre(res, ell) == 1
        }
        PrimeKind::Inert => {
            // z is a square in F_{ell^2} iff z^((ell^2 - 1)/2) = 1.
            let ring = ModOrder::new(p.field, ell);
            let e = (ell * ell - 1) / 2;
            let mut acc = (1, 0);
            let mut base = (unit.0.rem_euclid(ell), unit.1.rem_euclid(ell));
            let mut k = e as u128;
            while k > 0 {
                if k & 1 == 1 {
                    acc = ring.mul(acc, base);
                }
                base = ring.mul(base, base);
                k >>= 1;
            }
            acc == (1, 0)
        }
    }
}

/// Whether the `P`-unit `u` reduces to a square in the residue field of an
/// odd prime `P`.
pub fn residue_is_square(p: &PrimeIdeal, u: &QuadElement) -> Result<bool> {
    if p.ell == 2 {
        return Err(domain(
            "residue_is_square needs an odd prime; use local_square_class_over_2",
        ));
    }
    if u.is_zero() || ideal_valuation(p, u)? != 0 {
        return Err(domain(format!("{u} is not a unit at {p}")));
    }
    Ok(residue_character(p, u.basis()))
}

/// Square class of a `P`-unit for `P` above 2: `(unramified, square)`, where
/// `unramified` means `K+_P(sqrt(u))` is unramified and `square` means `u`
/// is a square in the completion.
pub fn local_square_class_over_2(p: &PrimeIdeal, u: &QuadElement) -> Result<(bool, bool)> {
    if p.ell != 2 {
        return Err(domain("local_square_class_over_2 needs a prime above 2"));
    }
    if u.is_zero() || ideal_valuation(p, u)? != 0 {
        return Err(domain(format!("{u} is not a unit at {p}")));
    }
    Ok(square_class_over_2(p, u.basis()))
}

fn square_class_over_2(p: &PrimeIdeal, unit: (i128, i128)) -> (bool, bool) {
    if p.kind == PrimeKind::Split {
        // The completion is Q_2: units are squares iff 1 mod 8 and give an
        // unramified extension iff 1 mod 4.
        debug_assert_eq!(unit.1, 0);
        let u = unit.0.rem_euclid(8);
        return (u % 4 == 1, u == 1);
    }
    let e = p.ramification_index();
    let (need_unram, need_square) = (2 * e, 2 * e + 1);
    let (c1, c0) = p.field.omega_min_poly();
    let (c1, c0) = (c1 as i64, c0 as i64);
    let (u0, u1) = (unit.0.rem_euclid(8) as i64, unit.1.rem_euclid(8) as i64);
    // Depth of z = a + b omega below P, capped at 6: 8 O = P^(3e) and
    // need_square < 3e, so a representative modulo 8 decides it.
    let depth = |a: i64, b: i64| -> u32 {
        let (a, b) = (a.rem_euclid(8), b.rem_euclid(8));
        if a == 0 && b == 0 {
            return 6;
        }
        if e == 1 {
            (a | b).trailing_zeros().min(3)
        } else {
            (a * a - c1 * a * b + c0 * b * b).trailing_zeros()
        }
    };
    let mut unramified = false;
    // (x + 4y)^2 = x^2 mod 8, so x modulo 4 suffices.
    for x0 in 0..4i64 {
        for x1 in 0..4i64 {
            // x^2 = x0^2 - c0 x1^2 + (2 x0 x1 - c1 x1^2) omega.
            let a = x0 * x0 - c0 * x1 * x1 - u0;
            let b = 2 * x0 * x1 - c1 * x1 * x1 - u1;
            let d = depth(a, b);
            unramified |= d >= need_unram;
            if d >= need_square {
                return (true, true);
            }
        }
    }
    (unramified, false)
}

/// Behaviour of `P` in `K+(sqrt(delta))`.
pub fn relative_prime_splitting(p: &PrimeIdeal, delta: &QuadElement) -> Result<PrimeKind> {
    if delta.is_zero() {
        return Err(Error::Degenerate("delta = 0".into()));
    }
    if delta.sqrt().is_some() {
        return Err(Error::Degenerate(format!(
            "{delta} is a square in {}",
            delta.field
        )));
    }
    Ok(relative_splitting_unchecked(p, delta))
}

/// [`relative_prime_splitting`] without the degeneracy checks.
pub(crate) fn relative_splitting_unchecked(p: &PrimeIdeal, delta: &QuadElement) -> PrimeKind {
    let v = ideal_valuation(p, delta).expect("nonzero delta");
    relative_splitting_at(p, delta, v)
}

/// As [`relative_splitting_unchecked`] with `v = v_P(delta)` already known.
pub(crate) fn relative_splitting_at(p: &PrimeIdeal, delta: &QuadElement, v: u32) -> PrimeKind {
    if v % 2 == 1 {
        return PrimeKind::Ramified;
    }
    if p.ell == 2 {
        let unit = unit_part(p, delta, v, 3);
        match square_class_over_2(p, unit) {
            (false, _) => PrimeKind::Ramified,
            (true, true) => PrimeKind::Split,
            (true, false) => PrimeKind::Inert,
        }
    } else {
        let unit = unit_part(p, delta, v, 1);
        if residue_character(p, unit) {
            PrimeKind::Split
        } else {
            PrimeKind::Inert
        }
    }
}

/// Artin symbol of the ideal `prod P_i^e_i` in `Gal(K/K+) = {+1, -1}`:
/// split primes map to `+1`, inert primes to `-1`.
pub fn artin_symbol(ideal: &[(PrimeIdeal, u32)], delta: &QuadElement) -> Result<i8> {
    let mut value = 1i8;
    for (p, e) in ideal {
        match relative_prime_splitting(p, delta)? {
            PrimeKind::Ramified => {
                return Err(domain(format!(
                    "Artin symbol undefined at ramified prime {p}"
                )))
            }
            PrimeKind::Inert if e % 2 == 1 => value = -value,
            _ => {}
        }
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(d0: i128) -> QuadField {
        QuadField::real(d0).unwrap()
    }

    fn only(f: QuadField, ell: i128) -> PrimeIdeal {
        let ps = rational_prime_splitting(f, ell).unwrap();
        assert_eq!(ps.len(), 1);
        ps[0]
    }

    #[test]
    fn containing_prime_read_off_element() {
        // In Q(sqrt(5)) with omega = (1 + sqrt 5)/2, 11 splits and 3 + omega
        // has norm 11.
        let f = field(5);
        let x = f.from_basis(3, 1);
        assert_eq!(x.norm(), 11);
        let mut got = Vec::new();
        push_primes_containing(f, 11, &x, &mut got).unwrap();
        let [p] = got.as_slice() else {
            panic!("{got:?}")
        };
        assert_eq!(ideal_valuation(p, &x).unwrap(), 1);
        assert!(rational_prime_splitting(f, 11).unwrap().contains(p));
        // With 11 dividing the content both primes come back.
        got.clear();
        push_primes_containing(f, 11, &x.scale(11), &mut got).unwrap();
        assert_eq!(got.len(), 2);
    }

    #[test]
    fn splitting_examples() {
        let p = only(field(21), 3);
        assert_eq!(p.kind(), PrimeKind::Ramified);
        assert_eq!((p.ramification_index(), p.residue_degree()), (2, 1));
        assert_eq!(only(field(21), 2).kind(), PrimeKind::Inert);
        let split = rational_prime_splitting(field(5), 11).unwrap();
        assert_eq!(split.len(), 2);
        assert!(split.iter().all(|p| p.kind() == PrimeKind::Split));
        assert_ne!(split[0], split[1]);
        assert!(rational_prime_splitting(field(5), 9).is_err());
    }

    #[test]
    fn valuation_examples() {
        let f21 = field(21);
        let p3 = only(f21, 3);
        assert_eq!(ideal_valuation(&p3, &f21.from_int(3)).unwrap(), 2);
        assert_eq!(ideal_valuation(&p3, &f21.from_int(-7)).unwrap(), 0);
        let f3 = field(3);
        let p2 = only(f3, 2);
        assert_eq!(p2.kind(), PrimeKind::Ramified);
        let x = f3.from_sqrt_coords(1, 1);
        assert_eq!(ideal_valuation(&p2, &x).unwrap(), 1);
        assert!(ideal_valuation(&p2, &f3.from_int(0)).is_err());
    }

    #[test]
    fn split_valuations_separate_conjugates() {
        // In Q(sqrt(5)), 11 = (4 + sqrt 5)(4 - sqrt 5).
        let f5 = field(5);
        let x = f5.from_sqrt_coords(4, 1);
        let ps = rational_prime_splitting(f5, 11).unwrap();
        let vals: Vec<u32> = ps.iter().map(|p| ideal_valuation(p, &x).unwrap()).collect();
        let conj: Vec<u32> = ps
            .iter()
            .map(|p| ideal_valuation(p, &x.conj()).unwrap())
            .collect();
        assert_eq!(vals.iter().sum::<u32>(), 1);
        assert_eq!(conj.iter().sum::<u32>(), 1);
        assert_ne!(vals, conj);
        let cube = x.pow(3) * f5.from_int(11);
        let v3: Vec<u32> = ps
            .iter()
            .map(|p| ideal_valuation(p, &cube).unwrap())
            .collect();
        assert_eq!(v3, vals.iter().map(|v| 3 * v + 1).collect::<Vec<_>>());
    }

    #[test]
    fn residue_examples() {
        let f21 = field(21);
        let p3 = only(f21, 3);
        assert!(!residue_is_square(&p3, &f21.from_int(-7)).unwrap());
        assert!(residue_is_square(&p3, &f21.from_int(1)).unwrap());
        let f3 = field(3);
        let p5 = only(f3, 5);
        assert_eq!(p5.kind(), PrimeKind::Inert);
        assert!(residue_is_square(&p5, &f3.from_int(2)).unwrap());
        assert!(residue_is_square(&only(f3, 2), &f3.from_int(1)).is_err());
        assert!(residue_is_square(&p3, &f21.from_int(3)).is_err());
    }

    #[test]
    fn inert_residue_squares_by_enumeration() {
        // F_25 = F_5[sqrt 3]: exactly half of the nonzero elements are squares.
        let f3 = field(3);
        let p5 = only(f3, 5);
        let mut squares = std::collections::HashSet::new();
        for a in 0..5 {
            for b in 0..5 {
                if (a, b) != (0, 0) {
                    let z = f3.from_basis(a, b);
                    let (u, v) = (z * z).basis();
                    squares.insert((u.rem_euclid(5), v.rem_euclid(5)));
                }
            }
        }
        assert_eq!(squares.len(), 12);
        for a in 0..5 {
            for b in 0..5 {
                if (a, b) != (0, 0) {
                    let z = f3.from_basis(a, b);
                    assert_eq!(
                        residue_is_square(&p5, &z).unwrap(),
                        squares.contains(&(a, b))
                    );
                }
            }
        }
    }

    #[test]
    fn relative_examples() {
        let f21 = field(21);
        let p3 = only(f21, 3);
        assert_eq!(
            relative_prime_splitting(&p3, &f21.from_int(-7)).unwrap(),
            PrimeKind::Inert
        );
        let p7 = only(f21, 7);
        assert_eq!(
            relative_prime_splitting(&p7, &f21.from_int(-7)).unwrap(),
            PrimeKind::Split
        );
        let f7 = field(7);
        for p in rational_prime_splitting(f7, 3).unwrap() {
            assert_eq!(
                relative_prime_splitting(&p, &f7.from_int(-21)).unwrap(),
                PrimeKind::Ramified
            );
        }
    }

    #[test]
    fn relative_over_two() {
        // Q(sqrt 3, i) = Q(zeta_12): the prime above 2 is inert.
        let f3 = field(3);
        let p2 = only(f3, 2);
        assert_eq!(
            relative_prime_splitting(&p2, &f3.from_int(-1)).unwrap(),
            PrimeKind::Inert
        );
        // delta = -4 - 2 sqrt 3 = -1 * (1 + sqrt 3)^2.
        let delta = f3.from_sqrt_coords(-4, -2);
        assert_eq!(
            relative_prime_splitting(&p2, &delta).unwrap(),
            PrimeKind::Inert
        );
        // Q(sqrt 3, sqrt -3) = Q(i, sqrt 3) as well.
        assert_eq!(
            relative_prime_splitting(&p2, &f3.from_int(-3)).unwrap(),
            PrimeKind::Inert
        );
        // Q(sqrt 2, i) = Q(zeta_8): totally ramified at 2.
        let f2 = field(2);
        assert_eq!(
            relative_prime_splitting(&only(f2, 2), &f2.from_int(-1)).unwrap(),
            PrimeKind::Ramified
        );
        // Q(sqrt 17): 2 splits; sqrt(-7) generates an unramified extension at 2
        // (-7 = 1 mod 8 is a 2-adic square).
        let f17 = field(17);
        for p in rational_prime_splitting(f17, 2).unwrap() {
            assert_eq!(
                relative_prime_splitting(&p, &f17.from_int(-7)).unwrap(),
                PrimeKind::Split
            );
            assert_eq!(
                relative_prime_splitting(&p, &f17.from_int(-3)).unwrap(),
                PrimeKind::Inert
            );
            assert_eq!(
                relative_prime_splitting(&p, &f17.from_int(-1)).unwrap(),
                PrimeKind::Ramified
            );
        }
        // Inert 2 in Q(sqrt 5): the completion is Q_2(sqrt -3), so -3 is a
        // square there, i generates a ramified extension, and 1 + 4 omega
        // (omega of residue trace 1) the unramified one.
        let f5 = field(5);
        let p = only(f5, 2);
        assert_eq!(
            relative_prime_splitting(&p, &f5.from_int(-1)).unwrap(),
            PrimeKind::Ramified
        );
        assert_eq!(
            relative_prime_splitting(&p, &f5.from_int(-3)).unwrap(),
            PrimeKind::Split
        );
        assert_eq!(
            relative_prime_splitting(&p, &f5.from_basis(1, 4)).unwrap(),
            PrimeKind::Inert
        );
    }

    #[test]
    fn degenerate_delta() {
        let f3 = field(3);
        let p = only(f3, 2);
        assert!(matches!(
            relative_prime_splitting(&p, &f3.from_int(0)),
            Err(Error::Degenerate(_))
        ));
        let sq = f3.from_sqrt_coords(2, 1);
        assert!(matches!(
            relative_prime_splitting(&p, &(sq * sq)),
            Err(Error::Degenerate(_))
        ));
        assert!(matches!(
            relative_prime_splitting(&p, &f3.from_int(3)),
            Err(Error::Degenerate(_))
        ));
        assert!(relative_prime_splitting(&p, &f3.from_int(2)).is_ok());
    }

    #[test]
    fn artin_examples() {
        let f21 = field(21);
        let p3 = only(f21, 3);
        let delta = f21.from_int(-7);
        assert_eq!(artin_symbol(&[], &delta).unwrap(), 1);
        assert_eq!(artin_symbol(&[(p3, 1)], &delta).unwrap(), -1);
        assert_eq!(artin_symbol(&[(p3, 2)], &delta).unwrap(), 1);
        let f7 = field(7);
        let ps = rational_prime_splitting(f7, 3).unwrap();
        assert!(artin_symbol(&[(ps[0], 1)], &f7.from_int(-21)).is_err());
    }

    #[test]
    fn square_roots_in_order() {
        let f5 = field(5);
        let phi = f5.element(1, 1).unwrap();
        assert_eq!((phi * phi).sqrt().map(|z| z * z), Some(phi * phi));
        assert_eq!(f5.from_int(5).sqrt().map(|z| z * z), Some(f5.from_int(5)));
        assert!(f5.from_int(2).sqrt().is_none());
        assert!(f5.from_int(-1).sqrt().is_none());
        assert!(QuadField::real(4).is_err());
        assert!(QuadField::real(-3).is_err());
        assert!(f5.element(1, 0).is_err());
    }
}
