//! Dense 2×2 / 4×4 complex and 3×3 real matrices, plus the small spectral
//! routines the rest of the crate is built on: a cyclic Jacobi eigensolver
//! for 4×4 Hermitian matrices, a one-sided Jacobi SVD for 3×3 real
//! matrices, unitary diagonalization in dimension two and the SO(3) → SU(2)
//! lift.

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Complex = Complex64;

/// Default tolerance used throughout the crate.
pub const DEFAULT_TOL: f64 = 1e-9;

const JACOBI_SWEEPS: usize = 64;
const JACOBI_THRESHOLD: f64 = 1e-14;

pub(crate) const ZERO: Complex = Complex::new(0.0, 0.0);
pub(crate) const ONE: Complex = Complex::new(1.0, 0.0);
pub(crate) const I_UNIT: Complex = Complex::new(0.0, 1.0);

pub(crate) fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

fn finite(z: Complex) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

macro_rules! square_matrix {
    ($name:ident, $n:expr) => {
        #[derive(Clone, Copy, Debug, PartialEq)]
        pub struct $name(pub [[Complex; $n]; $n]);

        impl $name {
            pub const DIM: usize = $n;

            pub fn zeros() -> Self {
                $name([[ZERO; $n]; $n])
            }

            pub fn identity() -> Self {
                let mut m = Self::zeros();
                for i in 0..$n {
                    m.0[i][i] = ONE;
                }
                m
            }

            pub fn from_fn(mut f: impl FnMut(usize, usize) -> Complex) -> Self {
                let mut m = Self::zeros();
                for i in 0..$n {
                    for j in 0..$n {
                        m.0[i][j] = f(i, j);
                    }
                }
                m
            }

            pub fn diag(d: [Complex; $n]) -> Self {
                let mut m = Self::zeros();
                for i in 0..$n {
                    m.0[i][i] = d[i];
                }
                m
            }

            /// Conjugate transpose.
            pub fn adjoint(&self) -> Self {
                Self::from_fn(|i, j| self.0[j][i].conj())
            }

            pub fn transpose(&self) -> Self {
                Self::from_fn(|i, j| self.0[j][i])
            }

            pub fn conj(&self) -> Self {
                Self::from_fn(|i, j| self.0[i][j].conj())
            }

            pub fn trace(&self) -> Complex {
                (0..$n).map(|i| self.0[i][i]).sum()
            }

            pub fn scale(&self, s: Complex) -> Self {
                Self::from_fn(|i, j| self.0[i][j] * s)
            }

            pub fn scale_re(&self, s: f64) -> Self {
                Self::from_fn(|i, j| self.0[i][j] * s)
            }

            pub fn frobenius_norm(&self) -> f64 {
                self.0
                    .iter()
                    .flatten()
                    .map(|z| z.norm_sqr())
                    .sum::<f64>()
                    .sqrt()
            }

            /// Largest entrywise modulus.
            pub fn max_abs(&self) -> f64 {
                self.0.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
            }

            pub fn is_finite(&self) -> bool {
                self.0.iter().flatten().all(|z| finite(*z))
            }

            /// ‖self − other‖_F
            pub fn distance(&self, other: &Self) -> f64 {
                (*self - *other).frobenius_norm()
            }

            pub fn hermitian_defect(&self) -> f64 {
                self.distance(&self.adjoint())
            }

            pub fn is_hermitian(&self, tol: f64) -> bool {
                self.hermitian_defect() <= tol * self.frobenius_norm().max(1.0)
            }

            /// ‖U*U − I‖_F
            pub fn unitarity_defect(&self) -> f64 {
                (self.adjoint() * *self).distance(&Self::identity())
            }

            pub fn is_unitary(&self, tol: f64) -> bool {
                self.unitarity_defect() <= tol
            }

            /// Hilbert–Schmidt inner product tr(self* other).
            pub fn inner(&self, other: &Self) -> Complex {
                let mut acc = ZERO;
                for i in 0..$n {
                    for j in 0..$n {
                        acc += self.0[i][j].conj() * other.0[i][j];
                    }
                }
                acc
            }
        }

        impl Default for $name {
            fn default() -> Self {
                Self::zeros()
            }
        }

        impl Index<(usize, usize)> for $name {
            type Output = Complex;
            fn index(&self, (i, j): (usize, usize)) -> &Complex {
                &self.0[i][j]
            }
        }

        impl IndexMut<(usize, usize)> for $name {
            fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex {
                &mut self.0[i][j]
            }
        }

        impl Add for $name {
            type Output = Self;
            fn add(self, rhs: Self) -> Self {
                Self::from_fn(|i, j| self.0[i][j] + rhs.0[i][j])
            }
        }

        impl Sub for $name {
            type Output = Self;
            fn sub(self, rhs: Self) -> Self {
                Self::from_fn(|i, j| self.0[i][j] - rhs.0[i][j])
            }
        }

        impl Neg for $name {
            type Output = Self;
            fn neg(self) -> Self {
                Self::from_fn(|i, j| -self.0[i][j])
            }
        }

        impl Mul for $name {
            type Output = Self;
            fn mul(self, rhs: Self) -> Self {
                Self::from_fn(|i, j| (0..$n).map(|k| self.0[i][k] * rhs.0[k][j]).sum())
            }
        }

        impl Mul<Complex> for $name {
            type Output = Self;
            fn mul(self, rhs: Complex) -> Self {
                self.scale(rhs)
            }
        }

        impl Mul<f64> for $name {
            type Output = Self;
            fn mul(self, rhs: f64) -> Self {
                self.scale_re(rhs)
            }
        }

        impl std::iter::Sum for $name {
            fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
                iter.fold(Self::zeros(), |a, b| a + b)
            }
        }
    };
}

square_matrix!(ComplexMatrix2, 2);
square_matrix!(ComplexMatrix4, 4);

impl ComplexMatrix2 {
    pub fn new(a: Complex, b: Complex, c: Complex, d: Complex) -> Self {
        ComplexMatrix2([[a, b], [c, d]])
    }

    pub fn real(rows: [[f64; 2]; 2]) -> Self {
        Self::from_fn(|i, j| c(rows[i][j], 0.0))
    }

    pub fn det(&self) -> Complex {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    /// Matrix unit E_ij.
    pub fn unit(i: usize, j: usize) -> Self {
        let mut m = Self::zeros();
        m.0[i][j] = ONE;
        m
    }

    /// Stacks the columns: (m00, m10, m01, m11).
    pub fn vec_columns(&self) -> [Complex; 4] {
        [self.0[0][0], self.0[1][0], self.0[0][1], self.0[1][1]]
    }

    /// `self · a · self*`
    pub fn conjugate(&self, a: &ComplexMatrix2) -> ComplexMatrix2 {
        *self * *a * self.adjoint()
    }
}

impl ComplexMatrix4 {
    /// Outer product v v*.
    pub fn outer(v: &[Complex; 4]) -> Self {
        Self::from_fn(|i, j| v[i] * v[j].conj())
    }

    /// 2×2 block (bi, bj) of the block matrix.
    pub fn block(&self, bi: usize, bj: usize) -> ComplexMatrix2 {
        ComplexMatrix2::from_fn(|i, j| self.0[2 * bi + i][2 * bj + j])
    }

    pub fn column(&self, j: usize) -> [Complex; 4] {
        [self.0[0][j], self.0[1][j], self.0[2][j], self.0[3][j]]
    }
}

/// The identity and the three Pauli matrices, in the order (I, X, Y, Z).
pub fn pauli_basis() -> [ComplexMatrix2; 4] {
    [
        ComplexMatrix2::identity(),
        ComplexMatrix2::new(ZERO, ONE, ONE, ZERO),
        ComplexMatrix2::new(ZERO, -I_UNIT, I_UNIT, ZERO),
        ComplexMatrix2::new(ONE, ZERO, ZERO, -ONE),
    ]
}

/// Kronecker product; entry (i, j) of `a` scales block (i, j).
pub fn kron(a: &ComplexMatrix2, b: &ComplexMatrix2) -> ComplexMatrix4 {
    ComplexMatrix4::from_fn(|r, s| a.0[r / 2][s / 2] * b.0[r % 2][s % 2])
}

/// Real 3×3 matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct RealMatrix3(pub [[f64; 3]; 3]);

impl RealMatrix3 {
    pub fn zeros() -> Self {
        RealMatrix3([[0.0; 3]; 3])
    }

    pub fn identity() -> Self {
        Self::diag([1.0, 1.0, 1.0])
    }

    pub fn diag(d: [f64; 3]) -> Self {
        Self::from_fn(|i, j| if i == j { d[i] } else { 0.0 })
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros();
        for i in 0..3 {
            for j in 0..3 {
                m.0[i][j] = f(i, j);
            }
        }
        m
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(|i, j| self.0[j][i])
    }

    pub fn det(&self) -> f64 {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().flatten().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn distance(&self, other: &Self) -> f64 {
        Self::from_fn(|i, j| self.0[i][j] - other.0[i][j]).frobenius_norm()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|x| x.is_finite())
    }

    pub fn column(&self, j: usize) -> [f64; 3] {
        [self.0[0][j], self.0[1][j], self.0[2][j]]
    }

    pub fn set_column(&mut self, j: usize, v: [f64; 3]) {
        for (i, x) in v.into_iter().enumerate() {
            self.0[i][j] = x;
        }
    }

    pub fn is_rotation(&self, tol: f64) -> bool {
        (self.transpose() * *self).distance(&Self::identity()) <= tol
            && (self.det() - 1.0).abs() <= tol
    }
}

impl Index<(usize, usize)> for RealMatrix3 {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.0[i][j]
    }
}

impl IndexMut<(usize, usize)> for RealMatrix3 {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.0[i][j]
    }
}

impl Mul for RealMatrix3 {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| (0..3).map(|k| self.0[i][k] * rhs.0[k][j]).sum())
    }
}

/// Eigendecomposition of a 4×4 Hermitian matrix.
#[derive(Clone, Copy, Debug)]
pub struct HermitianEigen4 {
    /// Descending.
    pub eigenvalues: [f64; 4],
    /// Column `k` is the eigenvector for `eigenvalues[k]`.
    pub eigenvectors: ComplexMatrix4,
}

impl HermitianEigen4 {
    pub fn eigenvector(&self, k: usize) -> [Complex; 4] {
        self.eigenvectors.column(k)
    }

    /// Q Λ Q*
    pub fn reconstruct(&self) -> ComplexMatrix4 {
        let lam = self.eigenvalues.map(|x| c(x, 0.0));
        self.eigenvectors * ComplexMatrix4::diag(lam) * self.eigenvectors.adjoint()
    }
}

/// Cyclic complex Jacobi on a 4×4 Hermitian matrix.
pub fn hermitian_eigen4(a: &ComplexMatrix4, tol: f64) -> Result<HermitianEigen4> {
    if !a.is_finite() {
        return Err(Error::NonFinite("matrix passed to eigensolver".into()));
    }
    let norm = a.frobenius_norm();
    let defect = a.hermitian_defect();
    if defect > tol * norm {
        return Err(Error::NotHermitian { defect });
    }
    // symmetrize so the rotations act on an exactly Hermitian matrix
    let mut m = (*a + a.adjoint()).scale_re(0.5);
    let mut q = ComplexMatrix4::identity();
    let threshold = JACOBI_THRESHOLD * norm;

    let off = |m: &ComplexMatrix4| -> f64 {
        let mut s = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    s += m.0[i][j].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut converged = off(&m) <= threshold;
    let mut sweep = 0;
    while !converged && sweep < JACOBI_SWEEPS {
        for p in 0..3 {
            for r in (p + 1)..4 {
                let apr = m.0[p][r];
                let mag = apr.norm();
                if mag <= f64::MIN_POSITIVE {
                    continue;
                }
                let phase = apr / mag;
                let app = m.0[p][p].re;
                let arr = m.0[r][r].re;
                let tau = (arr - app) / (2.0 * mag);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let t = if tau == 0.0 { 1.0 } else { t };
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = t * cs;
                // J = D·R with D = diag(1, conj(phase)) on (p, r)
                let mut j = ComplexMatrix4::identity();
                j.0[p][p] = c(cs, 0.0);
                j.0[p][r] = c(sn, 0.0);
                j.0[r][p] = phase.conj() * (-sn);
                j.0[r][r] = phase.conj() * cs;
                m = j.adjoint() * m * j;
                q = q * j;
            }
        }
        sweep += 1;
        converged = off(&m) <= threshold;
    }
    if !converged {
        return Err(Error::NoConvergence { sweeps: sweep });
    }

    let mut order = [0usize, 1, 2, 3];
    let diag = [m.0[0][0].re, m.0[1][1].re, m.0[2][2].re, m.0[3][3].re];
    order.sort_by(|&x, &y| diag[y].total_cmp(&diag[x]));
    let eigenvalues = order.map(|k| diag[k]);
    let eigenvectors = ComplexMatrix4::from_fn(|i, k| q.0[i][order[k]]);
    Ok(HermitianEigen4 {
        eigenvalues,
        eigenvectors,
    })
}

/// Factorization `u = phase · w · diag(1, e^{iθ}) · w*`.
#[derive(Clone, Copy, Debug)]
pub struct UnitaryDiagonalization {
    pub phase: Complex,
    pub w: ComplexMatrix2,
    pub theta: f64,
}

impl UnitaryDiagonalization {
    pub fn reconstruct(&self) -> ComplexMatrix2 {
        let d = ComplexMatrix2::diag([ONE, Complex::from_polar(1.0, self.theta)]);
        (self.w * d * self.w.adjoint()).scale(self.phase)
    }
}

fn wrap_angle(x: f64) -> f64 {
    let t = x.rem_euclid(std::f64::consts::TAU);
    if t >= std::f64::consts::TAU {
        0.0
    } else {
        t
    }
}

/// Unit eigenvector of the Hermitian matrix a·σ for eigenvalue +|a|.
fn bloch_eigenvector(a: [f64; 3]) -> [Complex; 2] {
    let n = (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt();
    let v = if a[2] >= 0.0 {
        [c(n + a[2], 0.0), c(a[0], a[1])]
    } else {
        [c(a[0], -a[1]), c(n - a[2], 0.0)]
    };
    let len = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    [v[0] / len, v[1] / len]
}

/// Spectral factorization of a 2×2 unitary.
pub fn diagonalize_unitary2(u: &ComplexMatrix2, tol: f64) -> Result<UnitaryDiagonalization> {
    if !u.is_finite() {
        return Err(Error::NonFinite("unitary".into()));
    }
    let defect = u.unitarity_defect();
    if defect > tol {
        return Err(Error::NotUnitary { defect });
    }
    let off = u.0[0][1].norm() + u.0[1][0].norm();
    let w = if off <= 1e-15 {
        ComplexMatrix2::identity()
    } else {
        // u / sqrt(det u) = a0 I + i (a·σ); the eigenvectors of u are those of a·σ
        let s = u.det().sqrt();
        let su = u.scale(s.inv());
        let g = (su - su.adjoint()).scale(c(0.0, -0.5));
        let a = [g.0[1][0].re, g.0[1][0].im, g.0[0][0].re];
        if a.iter().all(|x| x.abs() <= 1e-300) {
            ComplexMatrix2::identity()
        } else {
            let v = bloch_eigenvector(a);
            ComplexMatrix2::new(v[0], -v[1].conj(), v[1], v[0].conj())
        }
    };
    let d = w.adjoint() * *u * w;
    let phase = d.0[0][0] / d.0[0][0].norm();
    let second = d.0[1][1] / phase;
    let theta = wrap_angle(second.arg());
    Ok(UnitaryDiagonalization { phase, w, theta })
}

/// Adjoint action of a 2×2 unitary on the Bloch vectors, in row convention:
/// entry (i, j) is tr(σ_j u σ_i u*)/2, so the Bloch row vector `b` is sent to
/// `b · R`.
pub fn adjoint_action(u: &ComplexMatrix2) -> RealMatrix3 {
    let p = pauli_basis();
    RealMatrix3::from_fn(|i, j| (p[j + 1] * u.conjugate(&p[i + 1])).trace().re / 2.0)
}

/// Lift a rotation `r` to `u ∈ SU(2)` with `adjoint_action(u) = r`; the sign of
/// `u` is not fixed.
pub fn su2_from_so3(r: &RealMatrix3, tol: f64) -> Result<ComplexMatrix2> {
    if !r.is_finite() {
        return Err(Error::NonFinite("rotation".into()));
    }
    if !r.is_rotation(tol) {
        return Err(Error::NotRotation {
            orthogonality_defect: (r.transpose() * *r).distance(&RealMatrix3::identity()),
            det: r.det(),
        });
    }
    // Column-convention rotation matrix of the quaternion.
    let m = r.transpose().0;
    let tr = m[0][0] + m[1][1] + m[2][2];
    let candidates = [tr, m[0][0], m[1][1], m[2][2]];
    let largest = (0..4)
        .max_by(|&a, &b| candidates[a].total_cmp(&candidates[b]))
        .unwrap_or(0);
    let (w, x, y, z) = match largest {
        0 => {
            let s = (1.0 + tr).sqrt() * 2.0;
            (
                0.25 * s,
                (m[2][1] - m[1][2]) / s,
                (m[0][2] - m[2][0]) / s,
                (m[1][0] - m[0][1]) / s,
            )
        }
        1 => {
            let s = (1.0 + m[0][0] - m[1][1] - m[2][2]).sqrt() * 2.0;
            (
                (m[2][1] - m[1][2]) / s,
                0.25 * s,
                (m[0][1] + m[1][0]) / s,
                (m[0][2] + m[2][0]) / s,
            )
        }
        2 => {
            let s = (1.0 - m[0][0] + m[1][1] - m[2][2]).sqrt() * 2.0;
            (
                (m[0][2] - m[2][0]) / s,
                (m[0][1] + m[1][0]) / s,
                0.25 * s,
                (m[1][2] + m[2][1]) / s,
            )
        }
        _ => {
            let s = (1.0 - m[0][0] - m[1][1] + m[2][2]).sqrt() * 2.0;
            (
                (m[1][0] - m[0][1]) / s,
                (m[0][2] + m[2][0]) / s,
                (m[1][2] + m[2][1]) / s,
                0.25 * s,
            )
        }
    };
    let n = (w * w + x * x + y * y + z * z).sqrt();
    let (w, x, y, z) = (w / n, x / n, y / n, z / n);
    // u = w I − i (x X + y Y + z Z)
    Ok(ComplexMatrix2::new(
        c(w, -z),
        c(-y, -x),
        c(y, -x),
        c(w, z),
    ))
}

/// Singular value decomposition `t = left · diag(values) · right^t` with
/// orthogonal `left`, `right` and `values` non-negative, descending.
#[derive(Clone, Copy, Debug)]
pub struct Svd3 {
    pub left: RealMatrix3,
    pub values: [f64; 3],
    pub right: RealMatrix3,
}

fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn norm3(a: [f64; 3]) -> f64 {
    dot3(a, a).sqrt()
}

/// One-sided (Hestenes) Jacobi SVD. Ties keep the original axis order.
pub fn svd3(t: &RealMatrix3) -> Svd3 {
    let mut b = *t;
    let mut v = RealMatrix3::identity();
    let scale = t.frobenius_norm();
    if scale > 0.0 {
        for _ in 0..JACOBI_SWEEPS {
            let mut rotated = false;
            for p in 0..2 {
                for q in (p + 1)..3 {
                    let bp = b.column(p);
                    let bq = b.column(q);
                    let alpha = dot3(bp, bp);
                    let beta = dot3(bq, bq);
                    let gamma = dot3(bp, bq);
                    if gamma.abs() <= 1e-15 * (alpha * beta).sqrt() || gamma == 0.0 {
                        continue;
                    }
                    rotated = true;
                    let zeta = (beta - alpha) / (2.0 * gamma);
                    let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                    let t = if zeta == 0.0 { 1.0 } else { t };
                    let cs = 1.0 / (1.0 + t * t).sqrt();
                    let sn = cs * t;
                    for m in [&mut b, &mut v] {
                        for i in 0..3 {
                            let xp = m.0[i][p];
                            let xq = m.0[i][q];
                            m.0[i][p] = cs * xp - sn * xq;
                            m.0[i][q] = sn * xp + cs * xq;
                        }
                    }
                }
            }
            if !rotated {
                break;
            }
        }
    }

    let norms = [0, 1, 2].map(|k| norm3(b.column(k)));
    let mut order = [0usize, 1, 2];
    order.sort_by(|&x, &y| norms[y].total_cmp(&norms[x]));
    let values = order.map(|k| norms[k]);
    let mut right = RealMatrix3::zeros();
    let mut left = RealMatrix3::zeros();
    let cutoff = 1e-14 * scale.max(f64::MIN_POSITIVE);
    let mut have: Vec<[f64; 3]> = Vec::new();
    for (slot, &k) in order.iter().enumerate() {
        right.set_column(slot, v.column(k));
        let col = b.column(k);
        let u = if values[slot] > cutoff {
            let mut u = col.map(|x| x / values[slot]);
            for h in &have {
                let d = dot3(u, *h);
                for i in 0..3 {
                    u[i] -= d * h[i];
                }
            }
            let n = norm3(u);
            if n > 0.5 {
                Some(u.map(|x| x / n))
            } else {
                None
            }
        } else {
            None
        };
        let u = u.unwrap_or_else(|| complete_basis(&have, slot));
        have.push(u);
        left.set_column(slot, u);
    }
    Svd3 {
        left,
        values,
        right,
    }
}

/// Next orthonormal vector given the ones already chosen, preferring the
/// standard axis with the same index.
fn complete_basis(have: &[[f64; 3]], slot: usize) -> [f64; 3] {
    if have.len() == 2 {
        let u = cross3(have[0], have[1]);
        let n = norm3(u);
        return u.map(|x| x / n);
    }
    for axis in (0..3).map(|k| (k + slot) % 3) {
        let mut u = [0.0; 3];
        u[axis] = 1.0;
        for h in have {
            let d = dot3(u, *h);
            for i in 0..3 {
                u[i] -= d * h[i];
            }
        }
        let n = norm3(u);
        if n > 0.5 {
            return u.map(|x| x / n);
        }
    }
    unreachable!("three axes cannot all lie in a span of dimension < 2")
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    #[test]
    fn pauli_matrices_match_the_standard_form() {
        let [id, x, y, z] = pauli_basis();
        assert_eq!(x, ComplexMatrix2::real([[0.0, 1.0], [1.0, 0.0]]));
        assert_eq!(y, ComplexMatrix2::new(ZERO, c(0.0, -1.0), c(0.0, 1.0), ZERO));
        assert_eq!(z * z, id);
        assert_eq!(x * y, y * x * c(-1.0, 0.0));
        assert_eq!(x * y, z * I_UNIT);
    }

    #[test]
    fn eigen_of_scalar_matrix() {
        let a = ComplexMatrix4::identity().scale_re(0.5);
        let e = hermitian_eigen4(&a, DEFAULT_TOL).unwrap();
        assert_eq!(e.eigenvalues, [0.5; 4]);
    }

    #[test]
    fn eigen_of_the_non_cp_choi_matrix() {
        // ½ [[1,0,0,2],[0,1,0,0],[0,0,1,0],[2,0,0,1]]: the map with Bloch
        // scaling (1, 1, 0). Blocks {0,3} and {1,2} decouple.
        let h = 0.5;
        let mut a = ComplexMatrix4::zeros();
        a[(0, 0)] = c(h, 0.0);
        a[(3, 3)] = c(h, 0.0);
        a[(1, 1)] = c(h, 0.0);
        a[(2, 2)] = c(h, 0.0);
        a[(0, 3)] = c(1.0, 0.0);
        a[(3, 0)] = c(1.0, 0.0);
        let e = hermitian_eigen4(&a, DEFAULT_TOL).unwrap();
        let want = [1.5, 0.5, 0.5, -0.5];
        for (g, w) in e.eigenvalues.iter().zip(want) {
            assert!((g - w).abs() < 1e-14, "{:?}", e.eigenvalues);
        }
    }

    #[test]
    fn eigen_rejects_non_hermitian() {
        let mut a = ComplexMatrix4::identity();
        a[(0, 1)] = c(1.0, 0.0);
        assert!(matches!(
            hermitian_eigen4(&a, DEFAULT_TOL),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn diagonalize_identity_and_z() {
        let d = diagonalize_unitary2(&ComplexMatrix2::identity(), DEFAULT_TOL).unwrap();
        assert_eq!(d.phase, ONE);
        assert_eq!(d.w, ComplexMatrix2::identity());
        assert_eq!(d.theta, 0.0);

        let z = pauli_basis()[3];
        let d = diagonalize_unitary2(&z, DEFAULT_TOL).unwrap();
        assert_eq!(d.phase, ONE);
        assert_eq!(d.w, ComplexMatrix2::identity());
        assert!((d.theta - PI).abs() < 1e-15);
    }

    #[test]
    fn diagonalize_x_reconstructs() {
        let x = pauli_basis()[1];
        let d = diagonalize_unitary2(&x, DEFAULT_TOL).unwrap();
        assert!(d.reconstruct().distance(&x) < 1e-14);
        assert!((d.phase.norm() - 1.0).abs() < 1e-15);
        assert!(d.w.is_unitary(1e-14));
        assert!((d.theta - PI).abs() < 1e-14);
        // eigenvectors are the Hadamard-like basis
        assert!((d.w[(0, 0)].norm() - FRAC_1_SQRT_2).abs() < 1e-14);
    }

    #[test]
    fn diagonalize_rejects_non_unitary() {
        let m = ComplexMatrix2::real([[1.0, 1.0], [0.0, 1.0]]);
        assert!(matches!(
            diagonalize_unitary2(&m, DEFAULT_TOL),
            Err(Error::NotUnitary { .. })
        ));
    }

    #[test]
    fn su2_lift_of_identity_and_z_rotation() {
        let u = su2_from_so3(&RealMatrix3::identity(), DEFAULT_TOL).unwrap();
        assert!(u.distance(&ComplexMatrix2::identity()) < 1e-15 || (u + ComplexMatrix2::identity()).frobenius_norm() < 1e-15);

        let r = RealMatrix3::diag([-1.0, -1.0, 1.0]);
        let u = su2_from_so3(&r, DEFAULT_TOL).unwrap();
        let z = pauli_basis()[3];
        // ±Z up to a global phase
        assert!((u.inner(&z).norm() - 2.0).abs() < 1e-14);
        assert!(adjoint_action(&u).distance(&r) < 1e-14);
    }

    #[test]
    fn su2_lift_rejects_reflection() {
        let r = RealMatrix3::diag([1.0, 1.0, -1.0]);
        assert!(matches!(
            su2_from_so3(&r, DEFAULT_TOL),
            Err(Error::NotRotation { .. })
        ));
    }

    #[test]
    fn kron_examples() {
        let id = ComplexMatrix2::identity();
        assert_eq!(kron(&id, &id), ComplexMatrix4::identity());
        let e11 = ComplexMatrix2::unit(0, 0);
        let z = pauli_basis()[3];
        let k = kron(&e11, &z);
        assert_eq!(
            k,
            ComplexMatrix4::diag([ONE, -ONE, ZERO, ZERO])
        );
    }

    #[test]
    fn svd_of_signed_diagonal() {
        let t = RealMatrix3::diag([0.2, -0.7, 0.5]);
        let s = svd3(&t);
        assert_eq!(s.values, [0.7, 0.5, 0.2]);
        let back = s.left * RealMatrix3::diag(s.values) * s.right.transpose();
        assert!(back.distance(&t) < 1e-15);
    }

    #[test]
    fn svd_of_zero_is_identity_frames() {
        let s = svd3(&RealMatrix3::zeros());
        assert_eq!(s.values, [0.0; 3]);
        assert_eq!(s.left, RealMatrix3::identity());
        assert_eq!(s.right, RealMatrix3::identity());
    }

    #[test]
    fn svd_of_rank_one() {
        let t = RealMatrix3::from_fn(|i, j| [1.0, 2.0, -1.0][i] * [0.5, 0.0, 0.3][j]);
        let s = svd3(&t);
        assert!(s.values[1].abs() < 1e-15 && s.values[2].abs() < 1e-15);
        let back = s.left * RealMatrix3::diag(s.values) * s.right.transpose();
        assert!(back.distance(&t) < 1e-14);
        assert!((s.left.transpose() * s.left).distance(&RealMatrix3::identity()) < 1e-14);
    }
}
