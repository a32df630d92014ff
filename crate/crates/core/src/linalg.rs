//! Small dense linear algebra: complex LU, symmetric eigenvalues, integer
//! matrices for the symplectic group.

use alloc::vec;
use alloc::vec::Vec;
// unused when std is in the dependency graph (inherent float methods win)
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result, C64};

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &z) in row.iter().enumerate() {
                m[(i, j)] = z;
            }
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn to_rows(&self) -> Vec<Vec<C64>> {
        (0..self.rows)
            .map(|i| self.data[i * self.cols..(i + 1) * self.cols].to_vec())
            .collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn map(&self, mut f: impl FnMut(C64) -> C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn re(&self) -> Vec<Vec<f64>> {
        self.to_rows().iter().map(|r| r.iter().map(|z| z.re).collect()).collect()
    }

    pub fn im(&self) -> Vec<Vec<f64>> {
        self.to_rows().iter().map(|r| r.iter().map(|z| z.im).collect()).collect()
    }

    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn add(&self, other: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    /// Entrywise max norm `max |a_ij|`.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// Induced 1-norm (max column sum).
    pub fn norm1(&self) -> f64 {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// `‖A − Aᵀ‖_max`.
    pub fn symmetry_defect(&self) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                d = d.max((self[(i, j)] - self[(j, i)]).norm());
            }
        }
        d
    }

    pub fn lu(&self) -> Result<Lu> {
        Lu::factor(self)
    }

    pub fn inverse(&self) -> Result<CMatrix> {
        let lu = self.lu()?;
        Ok(lu.inverse())
    }

    /// 1-norm condition number `‖A‖₁‖A⁻¹‖₁`; infinite when singular.
    pub fn condition(&self) -> f64 {
        match self.inverse() {
            Ok(inv) => self.norm1() * inv.norm1(),
            Err(_) => f64::INFINITY,
        }
    }
}

impl core::ops::Index<(usize, usize)> for CMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl core::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

/// LU factorisation with partial pivoting, `PA = LU`.
#[derive(Debug, Clone)]
pub struct Lu {
    n: usize,
    lu: Vec<C64>,
    perm: Vec<usize>,
}

impl Lu {
    pub fn factor(a: &CMatrix) -> Result<Self> {
        assert_eq!(a.rows, a.cols, "LU needs a square matrix");
        let n = a.rows;
        let mut lu = a.data.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let scale = a.max_abs();
        for k in 0..n {
            let (p, pivot) = (k..n)
                .map(|i| (i, lu[i * n + k].norm()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if !(pivot > 1e-300_f64.max(scale * 1e-15 * f64::EPSILON)) {
                return Err(Error::SingularSystem {
                    condition: f64::INFINITY,
                });
            }
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let d = lu[k * n + k];
            for i in k + 1..n {
                let l = lu[i * n + k] / d;
                lu[i * n + k] = l;
                for j in k + 1..n {
                    let u = lu[k * n + j];
                    lu[i * n + j] -= l * u;
                }
            }
        }
        Ok(Self { n, lu, perm })
    }

    pub fn solve(&self, b: &[C64]) -> Vec<C64> {
        let n = self.n;
        let mut x: Vec<C64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                let l = self.lu[i * n + j];
                x[i] = x[i] - l * x[j];
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let u = self.lu[i * n + j];
                x[i] = x[i] - u * x[j];
            }
            x[i] /= self.lu[i * n + i];
        }
        x
    }

    pub fn inverse(&self) -> CMatrix {
        let n = self.n;
        let mut inv = CMatrix::zeros(n, n);
        let mut e = vec![C64::new(0.0, 0.0); n];
        for j in 0..n {
            e.iter_mut().for_each(|z| *z = C64::new(0.0, 0.0));
            e[j] = C64::new(1.0, 0.0);
            let col = self.solve(&e);
            for i in 0..n {
                inv[(i, j)] = col[i];
            }
        }
        inv
    }
}

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations, ascending.
pub fn symmetric_eigenvalues(a: &[Vec<f64>]) -> Vec<f64> {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a.to_vec();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[i][j] * m[i][j])
            .sum();
        let diag: f64 = (0..n).map(|i| m[i][i] * m[i][i]).sum();
        if off <= 1e-30 * diag.max(1e-300) {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if m[p][q] == 0.0 {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (mkp, mkq) = (m[k][p], m[k][q]);
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let (mpk, mqk) = (m[p][k], m[q][k]);
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| m[i][i]).collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap_or(core::cmp::Ordering::Equal));
    ev
}

/// Smallest eigenvalue of a real symmetric matrix; closed form up to 2×2.
pub fn min_symmetric_eigenvalue(a: &[Vec<f64>]) -> f64 {
    match a.len() {
        0 => f64::INFINITY,
        1 => a[0][0],
        2 => {
            let (p, q, r) = (a[0][0], 0.5 * (a[0][1] + a[1][0]), a[1][1]);
            let mean = 0.5 * (p + r);
            let rad = (0.25 * (p - r) * (p - r) + q * q).sqrt();
            mean - rad
        }
        _ => symmetric_eigenvalues(a)[0],
    }
}

/// Square integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IMatrix {
    n: usize,
    data: Vec<i64>,
}

impl IMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    /// The standard symplectic form `J = [[0, I], [−I, 0]]` of size `2g`.
    pub fn standard_symplectic(g: usize) -> Self {
        let mut j = Self::zeros(2 * g);
        for k in 0..g {
            j[(k, g + k)] = 1;
            j[(g + k, k)] = -1;
        }
        j
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let n = rows.len();
        let mut m = Self::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n, "square matrix expected");
            for (j, &x) in row.iter().enumerate() {
                m[(i, j)] = x;
            }
        }
        m
    }

    /// Assemble `[[A, B], [C, D]]` from `g×g` blocks.
    pub fn from_blocks(a: &IMatrix, b: &IMatrix, c: &IMatrix, d: &IMatrix) -> Self {
        let g = a.n;
        let mut m = Self::zeros(2 * g);
        for i in 0..g {
            for j in 0..g {
                m[(i, j)] = a[(i, j)];
                m[(i, g + j)] = b[(i, j)];
                m[(g + i, j)] = c[(i, j)];
                m[(g + i, g + j)] = d[(i, j)];
            }
        }
        m
    }

    /// The block `(bi, bj)` of size `n/2`.
    pub fn block(&self, bi: usize, bj: usize) -> IMatrix {
        let g = self.n / 2;
        let mut m = Self::zeros(g);
        for i in 0..g {
            for j in 0..g {
                m[(i, j)] = self[(bi * g + i, bj * g + j)];
            }
        }
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.n)
            .map(|i| self.data[i * self.n..(i + 1) * self.n].to_vec())
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t[(i, j)] = self[(j, i)];
            }
        }
        t
    }

    pub fn mul(&self, other: &IMatrix) -> IMatrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn to_complex(&self) -> CMatrix {
        CMatrix::from_fn(self.n, self.n, |i, j| C64::new(self[(i, j)] as f64, 0.0))
    }

    /// `MᵀJM = J`.
    pub fn is_symplectic(&self) -> bool {
        if !self.n.is_multiple_of(2) {
            return false;
        }
        let j = Self::standard_symplectic(self.n / 2);
        self.transpose().mul(&j).mul(self) == j
    }

    /// Inverse of a symplectic matrix, `−J Mᵀ J`.
    pub fn symplectic_inverse(&self) -> IMatrix {
        let j = Self::standard_symplectic(self.n / 2);
        let mut inv = j.mul(&self.transpose()).mul(&j);
        inv.data.iter_mut().for_each(|x| *x = -*x);
        inv
    }

    pub fn swap_rows(&mut self, i: usize, j: usize) {
        for c in 0..self.n {
            self.data.swap(i * self.n + c, j * self.n + c);
        }
    }

    /// Row `dst` += `k` · row `src`.
    pub fn add_row(&mut self, dst: usize, src: usize, k: i64) {
        for c in 0..self.n {
            let v = self.data[src * self.n + c];
            self.data[dst * self.n + c] += k * v;
        }
    }

    pub fn negate_row(&mut self, i: usize) {
        for c in 0..self.n {
            self.data[i * self.n + c] = -self.data[i * self.n + c];
        }
    }

    /// Determinant by fraction-free elimination (Bareiss).
    pub fn determinant(&self) -> i64 {
        let n = self.n;
        if n == 0 {
            return 1;
        }
        let mut m: Vec<Vec<i128>> = self.to_rows().iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if m[k][k] == 0 {
                match (k + 1..n).find(|&i| m[i][k] != 0) {
                    Some(p) => {
                        m.swap(k, p);
                        sign = -sign;
                    }
                    None => return 0,
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
                }
            }
            prev = m[k][k];
        }
        (sign * m[n - 1][n - 1]) as i64
    }
}

impl core::ops::Index<(usize, usize)> for IMatrix {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.n + j]
    }
}

impl core::ops::IndexMut<(usize, usize)> for IMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.n + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn lu_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..7 {
            let a = CMatrix::zeros(n, n).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
            let inv = a.inverse().unwrap();
            let id = a.mul(&inv);
            assert!(id.sub(&CMatrix::identity(n)).max_abs() < 1e-10);
            let b: Vec<C64> = (0..n).map(|i| c(i as f64, 1.0)).collect();
            let x = a.lu().unwrap().solve(&b);
            for i in 0..n {
                let ax: C64 = (0..n).map(|j| a[(i, j)] * x[j]).sum();
                assert!((ax - b[i]).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn lu_detects_singularity() {
        let a = CMatrix::from_rows(&[vec![c(1.0, 0.0), c(2.0, 0.0)], vec![c(2.0, 0.0), c(4.0, 0.0)]]);
        assert!(matches!(a.lu(), Err(Error::SingularSystem { .. })));
        assert!(a.condition().is_infinite());
        assert!((CMatrix::identity(3).condition() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn jacobi_eigenvalues() {
        let a = vec![vec![2.0, -1.0, 0.0], vec![-1.0, 2.0, -1.0], vec![0.0, -1.0, 2.0]];
        let ev = symmetric_eigenvalues(&a);
        let s = 2.0f64.sqrt();
        let expect = [2.0 - s, 2.0, 2.0 + s];
        for (x, y) in ev.iter().zip(expect) {
            assert!((x - y).abs() < 1e-12);
        }
        assert!((min_symmetric_eigenvalue(&a) - (2.0 - s)).abs() < 1e-12);
        let b = vec![vec![5.0, -4.0], vec![-4.0, 5.0]];
        assert!((min_symmetric_eigenvalue(&b) - 1.0).abs() < 1e-14);
        assert!((symmetric_eigenvalues(&b)[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn symplectic_helpers() {
        let j = IMatrix::standard_symplectic(2);
        assert!(j.is_symplectic());
        assert_eq!(j.determinant(), 1);
        let m = IMatrix::from_rows(&[
            vec![1, 0, 1, 0],
            vec![0, 1, 0, 0],
            vec![0, 0, 1, 0],
            vec![0, 0, 0, 1],
        ]);
        assert!(m.is_symplectic());
        assert_eq!(m.mul(&m.symplectic_inverse()), IMatrix::identity(4));
        let bad = IMatrix::from_rows(&[
            vec![1, 1, 0, 0],
            vec![0, 1, 0, 0],
            vec![0, 0, 1, 0],
            vec![0, 0, 0, 1],
        ]);
        assert!(!bad.is_symplectic());
        assert_eq!(IMatrix::from_rows(&[vec![2, 1], vec![7, 4]]).determinant(), 1);
        assert_eq!(IMatrix::from_rows(&[vec![0, 1, 2], vec![1, 0, 3], vec![4, -3, 8]]).determinant(), -2);
    }
}
