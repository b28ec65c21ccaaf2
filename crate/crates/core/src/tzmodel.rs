//! Finite model of the degree-9 polarization on the twist of `E x E`.
//!
//! `E` is a supersingular curve over `F_q` with endomorphism ring containing
//! the maximal order `S` of `L = Q(sqrt(-q))`. Endomorphisms of `E x E` are
//! `2 x 2` matrices over `S`; the twist by the cocycle
//! `zeta = [[-1, -1], [1, 0]]` has endomorphism ring the commutant of `zeta`,
//! which is `O = S[omega]` with `omega = zeta`. The polarization is
//! `b = [[2, 1], [1, 2]]` times the product polarization.
//!
//! Degrees are computed from the action on `S^2` viewed as `Z^4`, and
//! kernels inside the `ell`-torsion model `(S / ell S)^2`. Nothing here
//! constructs `E`.

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::intkernel::{gcd, inv_mod, is_prime, squarefree_decompose, PrimePower};
use crate::quadring::{QuadElement, QuadField};

pub const ZETA: [[i128; 2]; 2] = [[-1, -1], [1, 0]];
pub const POLARIZATION: [[i128; 2]; 2] = [[2, 1], [1, 2]];

/// The maximal order `S` of `Q(sqrt(-q))` under the congruence assumptions
/// `p = 1 mod 3`, and `p = 3 mod 4` when `q` is a square.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TwistSetting {
    pub qp: PrimePower,
    pub s: QuadField,
}

impl TwistSetting {
    pub fn new(q: i128) -> Result<Self> {
        let qp = PrimePower::new(q)?;
        let p = qp.p();
        if p % 3 != 1 {
            return Err(domain(format!("needs p = 1 mod 3, got p = {p}")));
        }
        if qp.is_square() && p % 4 != 3 {
            return Err(domain(format!(
                "needs p = 3 mod 4 for square q, got p = {p}"
            )));
        }
        let (d0, _) = squarefree_decompose(-q)?;
        Ok(Self {
            qp,
            s: QuadField::new(d0)?,
        })
    }

    pub fn matrix(&self, m: [[i128; 2]; 2]) -> Mat2 {
        Mat2::from_ints(self.s, m)
    }

    pub fn identity(&self) -> Mat2 {
        self.matrix([[1, 0], [0, 1]])
    }

    pub fn zeta(&self) -> Mat2 {
        self.matrix(ZETA)
    }

    pub fn polarization(&self) -> Mat2 {
        self.matrix(POLARIZATION)
    }

    /// `theta * I`, with `theta` the second integral basis element of `S`.
    pub fn theta(&self) -> Mat2 {
        let t = self.s.from_basis(0, 1);
        let z = self.s.from_int(0);
        Mat2 {
            e: [[t, z], [z, t]],
        }
    }
}

/// A `2 x 2` matrix over the maximal order of an imaginary quadratic field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mat2 {
    pub e: [[QuadElement; 2]; 2],
}

impl Mat2 {
    pub fn from_ints(s: QuadField, m: [[i128; 2]; 2]) -> Self {
        Self {
            e: m.map(|row| row.map(|x| s.from_int(x))),
        }
    }

    pub fn field(&self) -> QuadField {
        self.e[0][0].field()
    }

    pub fn is_zero(&self) -> bool {
        self.e.iter().flatten().all(|x| x.is_zero())
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut e = self.e;
        for (i, row) in e.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = *x + o.e[i][j];
            }
        }
        Self { e }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(-1))
    }

    pub fn scale(&self, k: i128) -> Self {
        Self {
            e: self.e.map(|row| row.map(|x| x.scale(k))),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut e = self.e;
        for (i, row) in e.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = self.e[i][0] * o.e[0][j] + self.e[i][1] * o.e[1][j];
            }
        }
        Self { e }
    }

    /// Conjugate transpose, the Rosati involution for the product polarization.
    pub fn dagger(&self) -> Self {
        let e = &self.e;
        Self {
            e: [
                [e[0][0].conj(), e[1][0].conj()],
                [e[0][1].conj(), e[1][1].conj()],
            ],
        }
    }

    /// Coordinates in `Z^8`: entry `(i, j)` contributes its two basis
    /// coordinates at positions `4i + 2j` and `4i + 2j + 1`.
    pub fn coords(&self) -> Vec<i128> {
        self.e
            .iter()
            .flatten()
            .flat_map(|x| {
                let (u, v) = x.basis();
                [u, v]
            })
            .collect()
    }

    pub fn from_coords(s: QuadField, c: &[i128]) -> Self {
        let x = |k: usize| s.from_basis(c[2 * k], c[2 * k + 1]);
        Self {
            e: [[x(0), x(1)], [x(2), x(3)]],
        }
    }

    /// The `4 x 4` integer matrix of the action on `S^2 = Z^4`.
    pub fn action(&self) -> [[i128; 4]; 4] {
        let s = self.field();
        let mut out = [[0; 4]; 4];
        for col in 0..4 {
            let mut v = [s.from_int(0); 2];
            v[col / 2] = s.from_basis(i128::from(col % 2 == 0), i128::from(col % 2 == 1));
            for i in 0..2 {
                let (u, w) = (self.e[i][0] * v[0] + self.e[i][1] * v[1]).basis();
                out[2 * i][col] = u;
                out[2 * i + 1][col] = w;
            }
        }
        out
    }
}

/// `zeta^3 = I` and `zeta^2 + zeta + I = 0` in `M_2(S)`.
pub fn zeta_identity_checks(q: i128) -> Result<bool> {
    let t = TwistSetting::new(q)?;
    let (z, i) = (t.zeta(), t.identity());
    let cube = z.mul(&z).mul(&z) == i;
    let cyclotomic = z.mul(&z).add(&z).add(&i).is_zero();
    Ok(cube && cyclotomic)
}

/// Z-basis of the commutant of an integer matrix in `M_2(Z)`.
pub fn integer_commutant(m: [[i128; 2]; 2]) -> Vec<[[i128; 2]; 2]> {
    // Column k of the system is the image of the k-th unit matrix.
    let unit = |k: usize| {
        let mut x = [[0i128; 2]; 2];
        x[k / 2][k % 2] = 1;
        x
    };
    let cols: Vec<Vec<i128>> = (0..4)
        .map(|k| {
            let x = unit(k);
            let (xm, mx) = (mul_int(x, m), mul_int(m, x));
            (0..4)
                .map(|r| xm[r / 2][r % 2] - mx[r / 2][r % 2])
                .collect()
        })
        .collect();
    integer_kernel(&cols)
        .into_iter()
        .map(|v| [[v[0], v[1]], [v[2], v[3]]])
        .collect()
}

fn mul_int(a: [[i128; 2]; 2], b: [[i128; 2]; 2]) -> [[i128; 2]; 2] {
    let mut c = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

/// The commutant of `zeta` in `M_2(S)` and the checks run on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Commutant {
    /// `{I, theta I, zeta, theta zeta}`.
    pub basis: Vec<Mat2>,
    /// Rank of the solution lattice of `X zeta = zeta X`.
    pub rank: usize,
    /// The basis spans the whole solution lattice.
    pub spans_solutions: bool,
    /// `omega^2 + omega + 1 = 0`, `omega theta = theta omega`,
    /// `theta` satisfies its minimal polynomial, and products of basis
    /// elements stay in the lattice.
    pub structure_constants: bool,
}

pub fn commutant_basis(q: i128) -> Result<Commutant> {
    let t = TwistSetting::new(q)?;
    let (z, th, i) = (t.zeta(), t.theta(), t.identity());

    let cols: Vec<Vec<i128>> = (0..8)
        .map(|k| {
            let mut c = vec![0; 8];
            c[k] = 1;
            let x = Mat2::from_coords(t.s, &c);
            x.mul(&z).sub(&z.mul(&x)).coords()
        })
        .collect();
    let solutions = integer_kernel(&cols);

    let basis = vec![i, th, z, th.mul(&z)];
    let rows: Vec<Vec<i128>> = basis.iter().map(Mat2::coords).collect();
    let spans_solutions = hermite(rows.clone()) == hermite(solutions.clone());

    let (c1, c0) = t.s.omega_min_poly();
    let mut structure = z.mul(&z).add(&z).add(&i).is_zero()
        && th.mul(&z) == z.mul(&th)
        && th.mul(&th).add(&th.scale(c1)).add(&i.scale(c0)).is_zero();
    let lattice = hermite(rows.clone());
    for x in &basis {
        for y in &basis {
            let mut with = rows.clone();
            with.push(x.mul(y).coords());
            structure &= hermite(with) == lattice;
        }
    }
    Ok(Commutant {
        basis,
        rank: solutions.len(),
        spans_solutions,
        structure_constants: structure,
    })
}

/// Degree of `m` as an isogeny of `E x E`: `|det|` of its action on `Z^4`.
pub fn polarization_degree(m: &Mat2) -> Result<i128> {
    if m.is_zero() {
        return Err(domain("the zero matrix is not an isogeny"));
    }
    let a = m.action();
    Ok(det(a.iter().map(|r| r.to_vec()).collect()).abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct KernelStructure {
    pub order: i128,
    pub cyclic_over_o: bool,
    pub annihilator_square_is_ell_o: bool,
    /// `omega` fixes every point of the kernel.
    pub omega_acts_trivially: bool,
}

/// The kernel of `m` in `(S / ell S)^2` as a module over `O = S[omega]`.
///
/// Requires `ell` prime to `q` and `deg m` equal to the size of that
/// kernel, so the whole kernel of the isogeny is killed by `ell`.
pub fn kernel_structure(m: &Mat2, ell: i128, q: i128) -> Result<KernelStructure> {
    let t = TwistSetting::new(q)?;
    if m.field() != t.s {
        return Err(domain("matrix entries are not in the order for this q"));
    }
    if !is_prime(ell) || gcd(ell, q) != 1 {
        return Err(domain(format!(
            "ell = {ell} must be a prime not dividing q"
        )));
    }
    let deg = polarization_degree(m)?;
    let act = m.action();
    let kernel = nullspace_mod(&act.iter().map(|r| r.to_vec()).collect::<Vec<_>>(), 4, ell);
    let order = ell.pow(kernel.len() as u32);
    if order != deg {
        return Err(domain(format!(
            "degree {deg} is not the order {order} of the {ell}-torsion kernel"
        )));
    }

    let o = OAction::new(t);
    let in_kernel = |v: &[i128; 4]| apply(&act, v, ell).iter().all(|&x| x == 0);
    let stable = kernel.iter().all(|k| {
        let k = to4(k);
        in_kernel(&o.apply([0, 1, 0, 0], &k, ell)) && in_kernel(&o.apply([0, 0, 1, 0], &k, ell))
    });
    if !stable {
        return Err(Error::Degenerate("kernel is not an O-submodule".into()));
    }
    let omega_acts_trivially = kernel.iter().all(|k| {
        let k = to4(k);
        o.apply([0, 0, 1, 0], &k, ell) == k
    });

    let dim = kernel.len();
    let cyclic_over_o = dim == 0
        || span_mod(&kernel, ell).into_iter().any(|v| {
            let orbit: Vec<Vec<i128>> = (0..4)
                .map(|j| {
                    let mut x = [0; 4];
                    x[j] = 1;
                    o.apply(x, &v, ell).to_vec()
                })
                .collect();
            rank_mod(&orbit, 4, ell) == dim
        });

    // Ann / ell O: the x in F_ell^4 acting as zero on every kernel vector.
    let equations: Vec<Vec<i128>> = kernel
        .iter()
        .flat_map(|k| {
            let k = to4(k);
            (0..4).map(move |r| (r, k))
        })
        .map(|(r, k)| {
            (0..4)
                .map(|j| {
                    let mut x = [0; 4];
                    x[j] = 1;
                    o.apply(x, &k, ell)[r]
                })
                .collect()
        })
        .collect();
    let mut ann_gens = nullspace_mod(&equations, 4, ell);
    for j in 0..4 {
        let mut e = vec![0; 4];
        e[j] = ell;
        ann_gens.push(e);
    }
    let ann = hermite(ann_gens);
    let products: Vec<Vec<i128>> = ann
        .iter()
        .flat_map(|x| ann.iter().map(move |y| o.mul(to4(x), to4(y)).to_vec()))
        .collect();
    let ell_o: Vec<Vec<i128>> = (0..4)
        .map(|j| {
            let mut e = vec![0; 4];
            e[j] = ell;
            e
        })
        .collect();
    let annihilator_square_is_ell_o = hermite(products) == hermite(ell_o);

    Ok(KernelStructure {
        order,
        cyclic_over_o,
        annihilator_square_is_ell_o,
        omega_acts_trivially,
    })
}

fn to4(v: &[i128]) -> [i128; 4] {
    [v[0], v[1], v[2], v[3]]
}

fn apply(a: &[[i128; 4]; 4], v: &[i128; 4], ell: i128) -> [i128; 4] {
    let mut out = [0; 4];
    for (o, row) in out.iter_mut().zip(a) {
        *o = row
            .iter()
            .zip(v)
            .map(|(x, y)| x * y)
            .sum::<i128>()
            .rem_euclid(ell);
    }
    out
}

/// `O = S[omega]` in coordinates `x0 + x1 theta + (x2 + x3 theta) omega`.
#[derive(Clone, Copy)]
struct OAction {
    s: QuadField,
    zeta: [[i128; 4]; 4],
}

impl OAction {
    fn new(t: TwistSetting) -> Self {
        Self {
            s: t.s,
            zeta: t.zeta().action(),
        }
    }

    fn parts(&self, x: [i128; 4]) -> (QuadElement, QuadElement) {
        (self.s.from_basis(x[0], x[1]), self.s.from_basis(x[2], x[3]))
    }

    fn mul(&self, x: [i128; 4], y: [i128; 4]) -> [i128; 4] {
        // omega^2 = -1 - omega.
        let ((s0, s1), (t0, t1)) = (self.parts(x), self.parts(y));
        let c0 = s0 * t0 - s1 * t1;
        let c1 = s0 * t1 + s1 * t0 - s1 * t1;
        let ((a, b), (c, d)) = (c0.basis(), c1.basis());
        [a, b, c, d]
    }

    /// `x . v` for `v` in `(S / ell S)^2`.
    fn apply(&self, x: [i128; 4], v: &[i128; 4], ell: i128) -> [i128; 4] {
        let (s0, s1) = self.parts(x);
        let zv = apply(&self.zeta, v, ell);
        let s = self.s;
        let mut out = [0; 4];
        for i in 0..2 {
            let a = s.from_basis(v[2 * i], v[2 * i + 1]);
            let b = s.from_basis(zv[2 * i], zv[2 * i + 1]);
            let (u, w) = (s0 * a + s1 * b).basis();
            out[2 * i] = u.rem_euclid(ell);
            out[2 * i + 1] = w.rem_euclid(ell);
        }
        out
    }
}

/// Unimodular row reduction on the first `pivot_cols` columns.
fn echelon(rows: &mut [Vec<i128>], pivot_cols: usize) -> usize {
    let mut r = 0;
    for c in 0..pivot_cols {
        if r == rows.len() {
            break;
        }
        loop {
            let best = (r..rows.len())
                .filter(|&i| rows[i][c] != 0)
                .min_by_key(|&i| rows[i][c].abs());
            let Some(best) = best else { break };
            rows.swap(r, best);
            let mut done = true;
            for i in r + 1..rows.len() {
                let f = rows[i][c] / rows[r][c];
                if f != 0 {
                    let pivot = rows[r].clone();
                    for (x, y) in rows[i].iter_mut().zip(&pivot) {
                        *x -= f * y;
                    }
                }
                done &= rows[i][c] == 0;
            }
            if done {
                break;
            }
        }
        if rows[r][c] != 0 {
            if rows[r][c] < 0 {
                rows[r].iter_mut().for_each(|x| *x = -*x);
            }
            r += 1;
        }
    }
    r
}

/// Hermite normal form of the row lattice, zero rows dropped.
fn hermite(mut rows: Vec<Vec<i128>>) -> Vec<Vec<i128>> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let rank = echelon(&mut rows, ncols);
    rows.truncate(rank);
    for r in 0..rank {
        let c = rows[r].iter().position(|&x| x != 0).unwrap();
        let pivot = rows[r].clone();
        for above in rows.iter_mut().take(r) {
            let f = above[c].div_euclid(pivot[c]);
            for (x, y) in above.iter_mut().zip(&pivot) {
                *x -= f * y;
            }
        }
    }
    rows
}

/// Z-basis of `{x : sum_k x_k cols[k] = 0}`.
fn integer_kernel(cols: &[Vec<i128>]) -> Vec<Vec<i128>> {
    let n = cols.len();
    let neq = cols.first().map_or(0, |c| c.len());
    let mut rows: Vec<Vec<i128>> = cols
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let mut r = c.clone();
            r.extend((0..n).map(|j| i128::from(j == k)));
            r
        })
        .collect();
    let rank = echelon(&mut rows, neq);
    rows[rank..].iter().map(|r| r[neq..].to_vec()).collect()
}

/// Reduced row echelon form mod a prime; returns the pivot columns.
fn rref_mod(rows: &mut [Vec<i128>], ncols: usize, ell: i128) -> Vec<usize> {
    for row in rows.iter_mut() {
        row.iter_mut().for_each(|x| *x = x.rem_euclid(ell));
    }
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(i) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, i);
        let inv = inv_mod(rows[r][c], ell).unwrap();
        rows[r]
            .iter_mut()
            .for_each(|x| *x = (*x * inv).rem_euclid(ell));
        let pivot = rows[r].clone();
        for (k, row) in rows.iter_mut().enumerate() {
            if k != r && row[c] != 0 {
                let f = row[c];
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x = (*x - f * y).rem_euclid(ell);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

fn rank_mod(rows: &[Vec<i128>], ncols: usize, ell: i128) -> usize {
    rref_mod(&mut rows.to_vec(), ncols, ell).len()
}

/// Basis of the solutions of `rows . x = 0` over `F_ell`.
fn nullspace_mod(rows: &[Vec<i128>], ncols: usize, ell: i128) -> Vec<Vec<i128>> {
    let mut m = rows.to_vec();
    let pivots = rref_mod(&mut m, ncols, ell);
    (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![0; ncols];
            v[free] = 1;
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = (-m[r][free]).rem_euclid(ell);
            }
            v
        })
        .collect()
}

/// Every vector of the `F_ell`-span of `basis`.
fn span_mod(basis: &[Vec<i128>], ell: i128) -> Vec<[i128; 4]> {
    let mut out = vec![[0i128; 4]];
    for b in basis {
        out = out
            .iter()
            .flat_map(|v| {
                (0..ell).map(move |k| {
                    let mut w = *v;
                    for (x, y) in w.iter_mut().zip(b) {
                        *x = (*x + k * y).rem_euclid(ell);
                    }
                    w
                })
            })
            .collect();
    }
    out
}

/// Fraction-free (Bareiss) determinant.
fn det(mut a: Vec<Vec<i128>>) -> i128 {
    let n = a.len();
    let mut sign = 1;
    let mut prev = 1;
    for k in 0..n {
        if a[k][k] == 0 {
            let Some(i) = (k + 1..n).find(|&i| a[i][k] != 0) else {
                return 0;
            };
            a.swap(k, i);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// Everything the `tzmodel` command reports for one `q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TzSummary {
    pub q: i128,
    pub s_d0: i128,
    pub zeta_cubed_is_identity: bool,
    pub zeta_cyclotomic: bool,
    pub integer_commutant_rank: usize,
    pub commutant_rank: usize,
    pub commutant_is_s_omega: bool,
    pub structure_constants: bool,
    pub polarization_dagger_fixed: bool,
    pub polarization_positive: bool,
    pub polarization_degree: i128,
    pub kernel: KernelStructure,
}

impl TzSummary {
    /// All identities hold with degree 9 and kernel `O / A` for `A^2 = 3 O`.
    pub fn all_pass(&self) -> bool {
        self.zeta_cubed_is_identity
            && self.zeta_cyclotomic
            && self.integer_commutant_rank == 2
            && self.commutant_rank == 4
            && self.commutant_is_s_omega
            && self.structure_constants
            && self.polarization_dagger_fixed
            && self.polarization_positive
            && self.polarization_degree == 9
            && self.kernel.order == 9
            && self.kernel.cyclic_over_o
            && self.kernel.annihilator_square_is_ell_o
    }
}

pub fn tz_summary(q: i128) -> Result<TzSummary> {
    let t = TwistSetting::new(q)?;
    let (z, i, b) = (t.zeta(), t.identity(), t.polarization());
    let com = commutant_basis(q)?;
    let pb = POLARIZATION;
    Ok(TzSummary {
        q,
        s_d0: t.s.d0(),
        zeta_cubed_is_identity: z.mul(&z).mul(&z) == i,
        zeta_cyclotomic: z.mul(&z).add(&z).add(&i).is_zero(),
        integer_commutant_rank: integer_commutant(ZETA).len(),
        commutant_rank: com.rank,
        commutant_is_s_omega: com.spans_solutions,
        structure_constants: com.structure_constants,
        polarization_dagger_fixed: b.dagger() == b,
        polarization_positive: pb[0][0] > 0 && pb[0][0] * pb[1][1] - pb[0][1] * pb[1][0] > 0,
        polarization_degree: polarization_degree(&b)?,
        kernel: kernel_structure(&b, 3, q)?,
    })
}
