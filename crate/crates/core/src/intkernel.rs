//! Exact integer primitives: factorization, prime powers, Kronecker symbols,
//! integer square roots and squarefree parts.
//!
//! Everything works on `i128`. Factorization uses trial division by the
//! primes below 10^6 and falls back to Brent's variant of Pollard rho with a
//! Miller-Rabin test that is deterministic below 3.3 * 10^24.

use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{domain, Error, Result};

const TRIAL_BOUND: u32 = 1_000_000;

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let n = TRIAL_BOUND as usize;
        let mut composite = vec![false; n + 1];
        let mut out = Vec::with_capacity(80_000);
        for i in 2..=n {
            if !composite[i] {
                out.push(i as u32);
                let mut j = i * i;
                while j <= n {
                    composite[j] = true;
                    j += i;
                }
            }
        }
        out
    })
}

/// A nonzero integer written as `unit * prod p_i^e_i` with strictly
/// increasing primes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Factorization {
    unit: i8,
    factors: Vec<(i128, u32)>,
}

impl Factorization {
    pub fn unit(&self) -> i8 {
        self.unit
    }

    pub fn factors(&self) -> &[(i128, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = i128> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    /// Multiplies the factorization back out.
    pub fn value(&self) -> i128 {
        self.factors
            .iter()
            .fold(self.unit as i128, |acc, &(p, e)| acc * p.pow(e))
    }
}

/// Factors a nonzero integer. Zero is rejected.
pub fn factorize(n: i128) -> Result<Factorization> {
    if n == 0 {
        return Err(domain("cannot factor 0"));
    }
    let unit = if n < 0 { -1 } else { 1 };
    let mut m = n.unsigned_abs();
    let mut factors: Vec<(u128, u32)> = Vec::new();

    if m <= u64::MAX as u128 {
        let mut m64 = m as u64;
        for &p in small_primes() {
            let p = p as u64;
            if p * p > m64 {
                break;
            }
            if m64.is_multiple_of(p) {
                let mut e = 0;
                while m64.is_multiple_of(p) {
                    m64 /= p;
                    e += 1;
                }
                factors.push((p as u128, e));
            }
        }
        m = m64 as u128;
    } else {
        for &p in small_primes() {
            let p = p as u128;
            if p * p > m {
                break;
            }
            if m.is_multiple_of(p) {
                let mut e = 0;
                while m.is_multiple_of(p) {
                    m /= p;
                    e += 1;
                }
                factors.push((p, e));
            }
        }
    }

    if m > 1 {
        let bound = TRIAL_BOUND as u128;
        if m < bound * bound || is_prime_u128(m) {
            factors.push((m, 1));
        } else {
            let mut large = Vec::new();
            split_large(m, &mut large);
            large.sort_unstable();
            for p in large {
                match factors.last_mut() {
                    Some((q, e)) if *q == p => *e += 1,
                    _ => factors.push((p, 1)),
                }
            }
        }
    }

    Ok(Factorization {
        unit,
        factors: factors.into_iter().map(|(p, e)| (p as i128, e)).collect(),
    })
}

fn split_large(n: u128, out: &mut Vec<u128>) {
    if n == 1 {
        return;
    }
    if is_prime_u128(n) {
        out.push(n);
        return;
    }
    let mut c = 1;
    loop {
        if let Some(d) = pollard_brent(n, c) {
            split_large(d, out);
            split_large(n / d, out);
            return;
        }
        c += 1;
    }
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn pollard_brent(n: u128, c: u128) -> Option<u128> {
    if n.is_multiple_of(2) {
        return Some(2);
    }
    let f = |x: u128| (mul_mod_u128(x, x, n) + c) % n;
    let (mut y, mut r, mut g, mut q) = (2u128, 1u64, 1u128, 1u128);
    let mut x = y;
    let mut ys = y;
    const BLOCK: u64 = 128;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..BLOCK.min(r - k) {
                y = f(y);
                q = mul_mod_u128(q, x.abs_diff(y), n);
            }
            g = gcd_u128(q, n);
            k += BLOCK;
        }
        r *= 2;
    }
    if g == n {
        loop {
            ys = f(ys);
            g = gcd_u128(x.abs_diff(ys), n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

fn mul_mod_u128(a: u128, b: u128, m: u128) -> u128 {
    if m <= u32::MAX as u128 {
        let m64 = m as u64;
        return ((a % m) as u64 * (b % m) as u64 % m64) as u128;
    }
    if m <= u64::MAX as u128 {
        return (a % m) * (b % m) % m;
    }
    let (mut a, mut b) = (a % m, b % m);
    let mut acc = 0u128;
    while b > 0 {
        if b & 1 == 1 {
            acc = add_mod_u128(acc, a, m);
        }
        a = add_mod_u128(a, a, m);
        b >>= 1;
    }
    acc
}

fn add_mod_u128(a: u128, b: u128, m: u128) -> u128 {
    let (s, overflow) = a.overflowing_add(b);
    if overflow || s >= m {
        s.wrapping_sub(m)
    } else {
        s
    }
}

fn pow_mod_u128(mut base: u128, mut exp: u128, m: u128) -> u128 {
    if let Ok(m) = u32::try_from(m) {
        let m = u64::from(m);
        let mut b = (base % u128::from(m)) as u64;
        let mut acc = 1 % m;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * b % m;
            }
            b = b * b % m;
            exp >>= 1;
        }
        return u128::from(acc);
    }
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u128(acc, base, m);
        }
        base = mul_mod_u128(base, base, m);
        exp >>= 1;
    }
    acc
}

fn is_prime_u128(n: u128) -> bool {
    const BASES: [u128; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod_u128(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u128(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primality of a (possibly negative) integer; negative values are never prime.
pub fn is_prime(n: i128) -> bool {
    if n < 2 {
        return false;
    }
    if n <= TRIAL_BOUND as i128 {
        return small_primes().binary_search(&(n as u32)).is_ok();
    }
    is_prime_u128(n as u128)
}

/// `(a * b) mod m` for `m > 0`, result in `[0, m)`.
pub fn mul_mod(a: i128, b: i128, m: i128) -> i128 {
    debug_assert!(m > 0);
    if let (Ok(a), Ok(b), Ok(m)) = (i64::try_from(a), i64::try_from(b), u32::try_from(m)) {
        let m = m as i64;
        return (a.rem_euclid(m) * b.rem_euclid(m) % m) as i128;
    }
    let (a, b) = (a.rem_euclid(m) as u128, b.rem_euclid(m) as u128);
    mul_mod_u128(a, b, m as u128) as i128
}

/// `base^exp mod m` for `m > 0`.
pub fn pow_mod(base: i128, exp: u128, m: i128) -> i128 {
    debug_assert!(m > 0);
    pow_mod_u128(base.rem_euclid(m) as u128, exp, m as u128) as i128
}

/// Inverse of `a` modulo `m`, when it exists.
pub fn inv_mod(a: i128, m: i128) -> Option<i128> {
    if let (Ok(a), Ok(m)) = (i64::try_from(a), i64::try_from(m)) {
        return inv_mod_i64(a, m).map(i128::from);
    }
    let (mut r0, mut r1) = (a.rem_euclid(m), m);
    let (mut s0, mut s1) = (1i128, 0i128);
    while r1 != 0 {
        let t = r0 / r1;
        (r0, r1) = (r1, r0 - t * r1);
        (s0, s1) = (s1, s0 - t * s1);
    }
    (r0 == 1).then(|| s0.rem_euclid(m))
}

fn inv_mod_i64(a: i64, m: i64) -> Option<i64> {
    let (mut r0, mut r1) = (a.rem_euclid(m), m);
    let (mut s0, mut s1) = (1i64, 0i64);
    while r1 != 0 {
        let t = r0 / r1;
        (r0, r1) = (r1, r0 - t * r1);
        (s0, s1) = (s1, s0 - t * s1);
    }
    (r0 == 1).then(|| s0.rem_euclid(m))
}

pub fn gcd(a: i128, b: i128) -> i128 {
    let (a, b) = (a.unsigned_abs(), b.unsigned_abs());
    if let (Ok(mut a), Ok(mut b)) = (u64::try_from(a), u64::try_from(b)) {
        while b != 0 {
            (a, b) = (b, a % b);
        }
        return a as i128;
    }
    gcd_u128(a, b) as i128
}

/// Exponent of the prime `p` in the nonzero integer `n`.
pub fn valuation(mut n: i128, p: i128) -> u32 {
    debug_assert!(n != 0 && p >= 2);
    if let (Ok(mut n), Ok(p)) = (i64::try_from(n), i64::try_from(p)) {
        let mut v = 0;
        while n % p == 0 {
            n /= p;
            v += 1;
        }
        return v;
    }
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// `q = p^m` with `p` prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct PrimePower {
    p: i128,
    m: u32,
    q: i128,
}

impl PrimePower {
    pub fn new(q: i128) -> Result<Self> {
        prime_power_decompose(q)
    }

    pub fn p(&self) -> i128 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn q(&self) -> i128 {
        self.q
    }

    pub fn is_square(&self) -> bool {
        self.m.is_multiple_of(2)
    }

    /// `q^k` as a prime power.
    pub fn power(&self, k: u32) -> PrimePower {
        debug_assert!(k >= 1);
        PrimePower {
            p: self.p,
            m: self.m * k,
            q: self.q.pow(k),
        }
    }

    /// `sqrt(q)` when `q` is a square.
    pub fn sqrt(&self) -> Option<i128> {
        self.is_square().then(|| self.p.pow(self.m / 2))
    }
}

/// Writes `q >= 2` as `p^m`, or fails with [`Error::NotPrimePower`].
pub fn prime_power_decompose(q: i128) -> Result<PrimePower> {
    if q < 2 {
        return Err(domain(format!("prime power must be at least 2, got {q}")));
    }
    match factorize(q)?.factors() {
        [(p, m)] => Ok(PrimePower { p: *p, m: *m, q }),
        _ => Err(Error::NotPrimePower(q)),
    }
}

/// Legendre symbol `(a | p)` for an odd prime `p`.
pub fn legendre(a: i128, p: i128) -> i8 {
    debug_assert!(p > 2);
    jacobi(a, p)
}

/// A square root of `a` modulo the odd prime `p` (Tonelli-Shanks), if any.
pub fn sqrt_mod_prime(a: i128, p: i128) -> Option<i128> {
    debug_assert!(p > 2);
    let a = a.rem_euclid(p);
    match legendre(a, p) {
        0 => return Some(0),
        -1 => return None,
        _ => {}
    }
    if p % 4 == 3 {
        return Some(pow_mod(a, ((p + 1) / 4) as u128, p));
    }
    let s = (p - 1).trailing_zeros();
    let odd = (p - 1) >> s;
    let mut z = 2;
    while legendre(z, p) != -1 {
        z += 1;
    }
    let mut c = pow_mod(z, odd as u128, p);
    let mut x = pow_mod(a, ((odd + 1) / 2) as u128, p);
    let mut t = pow_mod(a, odd as u128, p);
    let mut m = s;
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1u128 << (m - i - 1), p);
        x = mul_mod(x, b, p);
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        m = i;
    }
    Some(x)
}

/// Kronecker symbol `(a | n)` for arbitrary integers; `(0 | 0)` is an error.
pub fn kronecker_symbol(a: i128, n: i128) -> Result<i8> {
    if n == 0 {
        return match a {
            0 => Err(domain("Kronecker symbol (0|0) is undefined")),
            1 | -1 => Ok(1),
            _ => Ok(0),
        };
    }
    let mut sign: i8 = 1;
    let mut n = n;
    if n < 0 {
        n = -n;
        if a < 0 {
            sign = -sign;
        }
    }
    let twos = n.trailing_zeros();
    if twos > 0 {
        if a % 2 == 0 {
            return Ok(0);
        }
        n >>= twos;
        if twos % 2 == 1 && matches!(a.rem_euclid(8), 3 | 5) {
            sign = -sign;
        }
    }
    Ok(sign * jacobi(a.rem_euclid(n), n))
}

/// Jacobi symbol for odd positive `n`.
fn jacobi(a: i128, n: i128) -> i8 {
    debug_assert!(n > 0 && n % 2 == 1);
    if let (Ok(a), Ok(n)) = (i64::try_from(a), i64::try_from(n)) {
        return jacobi_i64(a, n);
    }
    jacobi_i128(a, n)
}

fn jacobi_i64(mut a: i64, mut n: i64) -> i8 {
    let mut t = 1;
    a = a.rem_euclid(n);
    while a != 0 {
        let z = a.trailing_zeros();
        a >>= z;
        if z % 2 == 1 && matches!(n % 8, 3 | 5) {
            t = -t;
        }
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        (a, n) = (n % a, a);
    }
    if n == 1 {
        t
    } else {
        0
    }
}

fn jacobi_i128(mut a: i128, mut n: i128) -> i8 {
    let mut t = 1;
    a = a.rem_euclid(n);
    while a != 0 {
        let z = a.trailing_zeros();
        a >>= z;
        if z % 2 == 1 && matches!(n % 8, 3 | 5) {
            t = -t;
        }
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        (a, n) = (n % a, a);
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// Floor square root of a nonnegative integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntSqrt {
    pub root: i128,
    pub is_perfect_square: bool,
}

pub fn integer_sqrt_floor(n: i128) -> Result<IntSqrt> {
    if n < 0 {
        return Err(domain(format!("square root of negative integer {n}")));
    }
    let root = n.isqrt();
    Ok(IntSqrt {
        root,
        is_perfect_square: root * root == n,
    })
}

/// Exact square root when `n` is a perfect square.
pub fn exact_sqrt(n: i128) -> Option<i128> {
    integer_sqrt_floor(n)
        .ok()
        .filter(|s| s.is_perfect_square)
        .map(|s| s.root)
}

/// Smallest `s` with `s^2 >= n`, for `n >= 0`.
pub fn integer_sqrt_ceil(n: i128) -> i128 {
    let s = n.isqrt();
    if s * s == n {
        s
    } else {
        s + 1
    }
}

/// Writes `n = d0 * c^2` with `d0` squarefree (carrying the sign of `n`)
/// and `c > 0`.
pub fn squarefree_decompose(n: i128) -> Result<(i128, i128)> {
    let f = factorize(n)?;
    let (mut d0, mut c) = (f.unit() as i128, 1i128);
    for &(p, e) in f.factors() {
        if e % 2 == 1 {
            d0 *= p;
        }
        c *= p.pow(e / 2);
    }
    Ok((d0, c))
}
