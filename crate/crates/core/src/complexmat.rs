//! Dense 4×4 complex matrices.
//!
//! Indexing is `(row, column)`, zero based, everywhere in the crate. The two
//! eigenvalue routines are deliberately unrelated: the general one runs a
//! shifted QR iteration on the Hessenberg form, the Hermitian one runs Jacobi
//! rotations on the real 8×8 embedding. Tests use each as a check on the other.

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use thiserror::Error;

use crate::tol;

pub use num_complex::Complex64 as Complex;

/// Matrix dimension. The two-atom state space is exactly four dimensional.
pub const DIM: usize = 4;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("eigenvalue iteration did not converge (‖m‖ = {norm:.3e}, worst residual {residual:.3e})")]
    NoConvergence { norm: f64, residual: f64 },
    #[error("matrix is not Hermitian (‖m - m†‖∞ = {defect:.3e})")]
    NotHermitian { defect: f64 },
    #[error("matrix has non-finite entries")]
    NonFinite,
}

#[derive(Clone, Copy, PartialEq, Default)]
pub struct ComplexMatrix4 {
    entries: [[Complex; DIM]; DIM],
}

impl fmt::Debug for ComplexMatrix4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix4 [")?;
        for row in &self.entries {
            write!(f, "  ")?;
            for z in row {
                write!(f, "{:>+.6e}{:+.6e}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl ComplexMatrix4 {
    pub const fn from_rows(entries: [[Complex; DIM]; DIM]) -> Self {
        Self { entries }
    }

    pub fn from_real_rows(rows: [[f64; DIM]; DIM]) -> Self {
        Self::from_fn(|i, j| Complex::new(rows[i][j], 0.0))
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> Complex) -> Self {
        let mut entries = [[Complex::new(0.0, 0.0); DIM]; DIM];
        for (i, row) in entries.iter_mut().enumerate() {
            for (j, z) in row.iter_mut().enumerate() {
                *z = f(i, j);
            }
        }
        Self { entries }
    }

    pub fn zeros() -> Self {
        Self::default()
    }

    pub fn identity() -> Self {
        Self::diag_real([1.0; DIM])
    }

    pub fn diag(d: [Complex; DIM]) -> Self {
        Self::from_fn(|i, j| if i == j { d[i] } else { Complex::new(0.0, 0.0) })
    }

    pub fn diag_real(d: [f64; DIM]) -> Self {
        Self::diag(d.map(|x| Complex::new(x, 0.0)))
    }

    /// `|v⟩⟨v|`, not normalised.
    pub fn projector(v: &[Complex; DIM]) -> Self {
        Self::from_fn(|i, j| v[i] * v[j].conj())
    }

    /// Single matrix unit `|i⟩⟨j|`.
    pub fn unit(i: usize, j: usize) -> Self {
        let mut m = Self::zeros();
        m[(i, j)] = Complex::new(1.0, 0.0);
        m
    }

    pub fn rows(&self) -> &[[Complex; DIM]; DIM] {
        &self.entries
    }

    pub fn hermitian_conjugate(&self) -> Self {
        Self::from_fn(|i, j| self.entries[j][i].conj())
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(|i, j| self.entries[j][i])
    }

    pub fn map(&self, mut f: impl FnMut(Complex) -> Complex) -> Self {
        Self::from_fn(|i, j| f(self.entries[i][j]))
    }

    pub fn trace(&self) -> Complex {
        (0..DIM).map(|i| self.entries[i][i]).sum()
    }

    pub fn matmul(&self, other: &Self) -> Self {
        let mut out = Self::zeros();
        for i in 0..DIM {
            for k in 0..DIM {
                let a = self.entries[i][k];
                if a == Complex::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..DIM {
                    out.entries[i][j] += a * other.entries[k][j];
                }
            }
        }
        out
    }

    /// `self · other · self†`.
    pub fn conjugate_by(&self, other: &Self) -> Self {
        self.matmul(other).matmul(&self.hermitian_conjugate())
    }

    pub fn scale(&self, s: Complex) -> Self {
        self.map(|z| z * s)
    }

    /// Determinant by LU decomposition with partial pivoting.
    pub fn det(&self) -> Complex {
        let mut a = self.entries;
        let mut det = Complex::new(1.0, 0.0);
        for k in 0..DIM {
            let pivot = (k..DIM)
                .max_by(|&p, &q| a[p][k].norm().total_cmp(&a[q][k].norm()))
                .unwrap_or(k);
            if a[pivot][k].norm() == 0.0 {
                return Complex::new(0.0, 0.0);
            }
            if pivot != k {
                a.swap(pivot, k);
                det = -det;
            }
            det *= a[k][k];
            for i in k + 1..DIM {
                let f = a[i][k] / a[k][k];
                for j in k..DIM {
                    let t = a[k][j];
                    a[i][j] -= f * t;
                }
            }
        }
        det
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.iter().map(|(_, _, z)| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.iter().map(|(_, _, z)| z.norm()).fold(0.0, f64::max)
    }

    /// `‖m - m†‖∞`, entrywise.
    pub fn hermiticity_defect(&self) -> f64 {
        (*self - self.hermitian_conjugate()).max_abs()
    }

    pub fn is_finite(&self) -> bool {
        self.iter().all(|(_, _, z)| z.re.is_finite() && z.im.is_finite())
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, Complex)> + '_ {
        (0..DIM).flat_map(move |i| (0..DIM).map(move |j| (i, j, self.entries[i][j])))
    }

    /// Row-major flattening; the inverse of [`ComplexMatrix4::from_flat`].
    pub fn to_flat(&self) -> [Complex; DIM * DIM] {
        let mut out = [Complex::new(0.0, 0.0); DIM * DIM];
        for (i, j, z) in self.iter() {
            out[i * DIM + j] = z;
        }
        out
    }

    pub fn from_flat(v: &[Complex; DIM * DIM]) -> Self {
        Self::from_fn(|i, j| v[i * DIM + j])
    }
}

impl Index<(usize, usize)> for ComplexMatrix4 {
    type Output = Complex;
    fn index(&self, (i, j): (usize, usize)) -> &Complex {
        &self.entries[i][j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix4 {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex {
        &mut self.entries[i][j]
    }
}

impl Add for ComplexMatrix4 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.entries[i][j] + rhs.entries[i][j])
    }
}

impl AddAssign for ComplexMatrix4 {
    fn add_assign(&mut self, rhs: Self) {
        for i in 0..DIM {
            for j in 0..DIM {
                self.entries[i][j] += rhs.entries[i][j];
            }
        }
    }
}

impl Sub for ComplexMatrix4 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.entries[i][j] - rhs.entries[i][j])
    }
}

impl Neg for ComplexMatrix4 {
    type Output = Self;
    fn neg(self) -> Self {
        self.map(|z| -z)
    }
}

impl Mul for ComplexMatrix4 {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.matmul(&rhs)
    }
}

impl Mul<f64> for ComplexMatrix4 {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        self.map(|z| z * rhs)
    }
}

impl Mul<Complex> for ComplexMatrix4 {
    type Output = Self;
    fn mul(self, rhs: Complex) -> Self {
        self.scale(rhs)
    }
}

/// Free-function form of [`ComplexMatrix4::hermitian_conjugate`].
pub fn hermitian_conjugate(m: &ComplexMatrix4) -> ComplexMatrix4 {
    m.hermitian_conjugate()
}

/// Free-function form of [`ComplexMatrix4::matmul`].
pub fn matmul(a: &ComplexMatrix4, b: &ComplexMatrix4) -> ComplexMatrix4 {
    a.matmul(b)
}

/// `|det(m - λI)|`, the residual used to accept an eigenvalue.
pub fn characteristic_residual(m: &ComplexMatrix4, lambda: Complex) -> f64 {
    (*m - ComplexMatrix4::identity().scale(lambda)).det().norm()
}

const MAX_QR_SWEEPS: usize = 40 * DIM;

/// The four eigenvalues of a general complex matrix, unordered.
///
/// Every returned root satisfies `|det(m - λI)| <= 1e-9 · ‖m‖_F⁴`; a run that
/// fails the bound, or exhausts the iteration budget, is an error.
pub fn eigenvalues_general(m: &ComplexMatrix4) -> Result<[Complex; DIM], LinalgError> {
    if !m.is_finite() {
        return Err(LinalgError::NonFinite);
    }
    let norm = m.frobenius_norm();
    let mut h = hessenberg(m);
    let mut eig = [Complex::new(0.0, 0.0); DIM];

    let mut hi = DIM - 1;
    let mut iter_since_deflation = 0;
    let mut total = 0;
    while hi > 0 {
        // lowest row of the active unreduced block
        let mut lo = hi;
        while lo > 0 {
            let scale = match h[lo][lo].norm() + h[lo - 1][lo - 1].norm() {
                s if s == 0.0 => norm,
                s => s,
            };
            if h[lo][lo - 1].norm() <= f64::EPSILON * scale {
                h[lo][lo - 1] = Complex::new(0.0, 0.0);
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            eig[hi] = h[hi][hi];
            hi -= 1;
            iter_since_deflation = 0;
            continue;
        }

        total += 1;
        iter_since_deflation += 1;
        if total > MAX_QR_SWEEPS {
            let residual = eig
                .iter()
                .map(|&l| characteristic_residual(m, l))
                .fold(0.0, f64::max);
            return Err(LinalgError::NoConvergence { norm, residual });
        }

        let shift = if iter_since_deflation % 11 == 10 {
            // exceptional shift to break cycles
            h[hi][hi] + Complex::new(0.75 * h[hi][hi - 1].norm(), 0.0)
        } else {
            wilkinson_shift(h[hi - 1][hi - 1], h[hi - 1][hi], h[hi][hi - 1], h[hi][hi])
        };
        qr_sweep(&mut h, lo, hi, shift);
    }
    eig[0] = h[0][0];

    let bound = tol::EIG_RESIDUAL * norm.powi(4);
    let residual = eig
        .iter()
        .map(|&l| characteristic_residual(m, l))
        .fold(0.0, f64::max);
    if residual > bound {
        return Err(LinalgError::NoConvergence { norm, residual });
    }
    Ok(eig)
}

fn wilkinson_shift(a: Complex, b: Complex, c: Complex, d: Complex) -> Complex {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mid = (a + d) * 0.5;
    let (l1, l2) = (mid + disc, mid - disc);
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Householder reduction to upper Hessenberg form (similarity transform).
fn hessenberg(m: &ComplexMatrix4) -> [[Complex; DIM]; DIM] {
    let mut a = *m.rows();
    for k in 0..DIM - 2 {
        let x: Vec<Complex> = (k + 1..DIM).map(|i| a[i][k]).collect();
        let xnorm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if xnorm == 0.0 || x[1..].iter().all(|z| z.norm() == 0.0) {
            continue;
        }
        let phase = if x[0].norm() == 0.0 {
            Complex::new(1.0, 0.0)
        } else {
            x[0] / x[0].norm()
        };
        let mut v = x.clone();
        v[0] += phase * xnorm;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in &mut v {
            *z /= vnorm;
        }
        // A <- (I - 2vv†) A
        for j in 0..DIM {
            let dot: Complex = (0..v.len()).map(|r| v[r].conj() * a[k + 1 + r][j]).sum();
            for r in 0..v.len() {
                a[k + 1 + r][j] -= v[r] * dot * 2.0;
            }
        }
        // A <- A (I - 2vv†)
        for row in a.iter_mut() {
            let dot: Complex = (0..v.len()).map(|r| row[k + 1 + r] * v[r]).sum();
            for r in 0..v.len() {
                row[k + 1 + r] -= dot * v[r].conj() * 2.0;
            }
        }
    }
    a
}

/// Complex Givens rotation `[[c, s], [-s̄, c]]` mapping `(x, y)` to `(r, 0)`.
fn givens(x: Complex, y: Complex) -> (f64, Complex) {
    let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
    if r == 0.0 {
        return (1.0, Complex::new(0.0, 0.0));
    }
    if x.norm() == 0.0 {
        return (0.0, y.conj() / y.norm());
    }
    let c = x.norm() / r;
    let s = (x / x.norm()) * y.conj() / r;
    (c, s)
}

/// One explicitly shifted QR step `H - μI = QR, H <- RQ + μI` on rows/columns `lo..=hi`.
fn qr_sweep(h: &mut [[Complex; DIM]; DIM], lo: usize, hi: usize, shift: Complex) {
    for k in lo..=hi {
        h[k][k] -= shift;
    }
    let mut rotations = Vec::with_capacity(hi - lo);
    for k in lo..hi {
        let (c, s) = givens(h[k][k], h[k + 1][k]);
        for j in k..=hi {
            let (x, y) = (h[k][j], h[k + 1][j]);
            h[k][j] = x * c + s * y;
            h[k + 1][j] = -s.conj() * x + y * c;
        }
        rotations.push((c, s));
    }
    for (offset, &(c, s)) in rotations.iter().enumerate() {
        let k = lo + offset;
        for row in h.iter_mut().take((k + 2).min(hi) + 1).skip(lo) {
            let (x, y) = (row[k], row[k + 1]);
            row[k] = x * c + y * s.conj();
            row[k + 1] = -x * s + y * c;
        }
    }
    for k in lo..=hi {
        h[k][k] += shift;
    }
}

const JACOBI_SWEEPS: usize = 64;

/// Real eigenvalues of a Hermitian matrix, sorted in descending order.
///
/// Works on the real symmetric embedding `[[A, -B], [B, A]]` of `A + iB`,
/// whose spectrum is that of the input with every eigenvalue doubled.
pub fn eigenvalues_hermitian(m: &ComplexMatrix4) -> Result<[f64; DIM], LinalgError> {
    if !m.is_finite() {
        return Err(LinalgError::NonFinite);
    }
    let defect = m.hermiticity_defect();
    if defect >= tol::HERMITIAN_INPUT {
        return Err(LinalgError::NotHermitian { defect });
    }
    const N: usize = 2 * DIM;
    let mut a = [[0.0f64; N]; N];
    for i in 0..DIM {
        for j in 0..DIM {
            // symmetrise so the embedding is exactly symmetric
            let z = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
            a[i][j] = z.re;
            a[i + DIM][j + DIM] = z.re;
            a[i][j + DIM] = -z.im;
            a[i + DIM][j] = z.im;
        }
    }

    let scale: f64 = a.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
    for _ in 0..JACOBI_SWEEPS {
        let off: f64 = (0..N)
            .flat_map(|p| (p + 1..N).map(move |q| (p, q)))
            .map(|(p, q)| a[p][q] * a[p][q])
            .sum();
        if off.sqrt() <= f64::EPSILON * scale * 1e-2 || off == 0.0 {
            break;
        }
        for p in 0..N {
            for q in p + 1..N {
                if a[p][q] == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for row in a.iter_mut() {
                    let (x, y) = (row[p], row[q]);
                    row[p] = c * x - s * y;
                    row[q] = s * x + c * y;
                }
                for k in 0..N {
                    let (x, y) = (a[p][k], a[q][k]);
                    a[p][k] = c * x - s * y;
                    a[q][k] = s * x + c * y;
                }
            }
        }
    }

    let mut doubled: Vec<f64> = (0..N).map(|i| a[i][i]).collect();
    doubled.sort_by(|x, y| y.total_cmp(x));
    Ok([doubled[0], doubled[2], doubled[4], doubled[6]])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn sorted_by_re(mut v: [Complex; DIM]) -> [Complex; DIM] {
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    #[test]
    fn hermitian_conjugate_cases() {
        let id = ComplexMatrix4::identity();
        assert_eq!(id.hermitian_conjugate(), id);
        let m = ComplexMatrix4::diag([c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        let expected = ComplexMatrix4::diag([c(0.0, -1.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(m.hermitian_conjugate(), expected);
        let g = ComplexMatrix4::from_fn(|i, j| c(i as f64 - 0.3 * j as f64, (i * j) as f64 + 0.7));
        assert_eq!(g.hermitian_conjugate().hermitian_conjugate(), g);
        assert_eq!(g.hermitian_conjugate()[(1, 3)], g[(3, 1)].conj());
    }

    #[test]
    fn swap_permutation_is_involution() {
        let p = ComplexMatrix4::from_real_rows([
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ]);
        assert_eq!(p * p, ComplexMatrix4::identity());
        let g = ComplexMatrix4::from_fn(|i, j| c(i as f64, j as f64));
        assert_eq!(g * ComplexMatrix4::identity(), g);
    }

    #[test]
    fn determinant_of_triangular() {
        let mut m = ComplexMatrix4::diag([c(2.0, 0.0), c(0.0, 1.0), c(3.0, 0.0), c(1.0, 1.0)]);
        m[(0, 3)] = c(5.0, -2.0);
        m[(1, 2)] = c(-1.0, 4.0);
        let expected = c(2.0, 0.0) * c(0.0, 1.0) * c(3.0, 0.0) * c(1.0, 1.0);
        assert!((m.det() - expected).norm() < 1e-14);
    }

    #[test]
    fn diagonal_spectrum() {
        let m = ComplexMatrix4::diag_real([1.0, 2.0, 3.0, 4.0]);
        let e = sorted_by_re(eigenvalues_general(&m).unwrap());
        for (k, z) in e.iter().enumerate() {
            assert!((z - c(k as f64 + 1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn nilpotent_jordan_block() {
        let mut m = ComplexMatrix4::zeros();
        for k in 0..3 {
            m[(k, k + 1)] = c(1.0, 0.0);
        }
        let e = eigenvalues_general(&m).unwrap();
        for z in e {
            assert!(z.norm() < 1e-12, "{z}");
        }
    }

    #[test]
    fn zero_matrix_spectrum() {
        let e = eigenvalues_general(&ComplexMatrix4::zeros()).unwrap();
        assert!(e.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn rotation_generator_has_imaginary_pair() {
        // block diag of [[0,-1],[1,0]] and diag(2, 5)
        let m = ComplexMatrix4::from_real_rows([
            [0.0, -1.0, 0.0, 0.0],
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 2.0, 0.0],
            [0.0, 0.0, 0.0, 5.0],
        ]);
        let e = sorted_by_re(eigenvalues_general(&m).unwrap());
        assert!((e[0] - c(0.0, -1.0)).norm() < 1e-12);
        assert!((e[1] - c(0.0, 1.0)).norm() < 1e-12);
        assert!((e[2] - c(2.0, 0.0)).norm() < 1e-12);
        assert!((e[3] - c(5.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn non_finite_rejected() {
        let mut m = ComplexMatrix4::identity();
        m[(2, 1)] = c(f64::NAN, 0.0);
        assert_eq!(eigenvalues_general(&m), Err(LinalgError::NonFinite));
    }

    #[test]
    fn hermitian_examples() {
        let e = eigenvalues_hermitian(&ComplexMatrix4::diag_real([0.5, 0.3, 0.2, 0.0])).unwrap();
        for (a, b) in e.iter().zip([0.5, 0.3, 0.2, 0.0]) {
            assert!((a - b).abs() < 1e-14);
        }
        let e = eigenvalues_hermitian(&(ComplexMatrix4::identity() * 0.25)).unwrap();
        assert!(e.iter().all(|x| (x - 0.25).abs() < 1e-14));
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let p = ComplexMatrix4::projector(&[c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(s, 0.0)]);
        let e = eigenvalues_hermitian(&p).unwrap();
        for (a, b) in e.iter().zip([1.0, 0.0, 0.0, 0.0]) {
            assert!((a - b).abs() < 1e-14, "{e:?}");
        }
    }

    #[test]
    fn hermitian_rejects_non_hermitian() {
        let mut m = ComplexMatrix4::identity();
        m[(0, 1)] = c(1e-3, 0.0);
        assert!(matches!(eigenvalues_hermitian(&m), Err(LinalgError::NotHermitian { .. })));
    }
}
