//! Reduction of period matrices into the Siegel fundamental domain.
//!
//! `Sp(2g, ℤ)` acts by `M·Ω = (AΩ + B)(CΩ + D)⁻¹`. The reduction loop
//! alternates Minkowski reduction of `Im Ω`, integer translation of `Re Ω`
//! and inversion generators that strictly increase `det Im Ω`. Points on
//! the boundary of the domain are then resolved by exploring the boundary
//! moves and keeping the smallest point under a fixed order.

use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::{min_symmetric_eigenvalue, CMatrix, IMatrix};
use crate::{Error, Result, C64};

// unused when std is in the dependency graph (inherent float methods win)
#[allow(unused_imports)]
use num_traits::Float;

/// Cap on reduction rounds.
pub const MAX_ITERATIONS: usize = 1000;

/// Relative tolerance for deciding that a point sits on a boundary wall.
pub const BOUNDARY_TOLERANCE: f64 = 1e-7;

const STRICT: f64 = 1e-10;
const MAX_CANDIDATES: usize = 256;

/// Result of [`siegel_reduce`].
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedMatrix {
    pub omega: CMatrix,
    /// Symplectic `M` with `M·sym(Ω) = omega`.
    pub transform: IMatrix,
    pub iterations: usize,
    /// `‖Ω − Ωᵀ‖∞` of the input before symmetrization.
    pub symmetry_defect: f64,
    /// False for genus above 2 or when the iteration cap was hit.
    pub canonical: bool,
}

/// Applies `M = [[A, B], [C, D]]` to `Ω`.
pub fn act(m: &IMatrix, omega: &CMatrix) -> Result<CMatrix> {
    let g = omega.rows();
    if m.size() != 2 * g || omega.cols() != g {
        return Err(Error::LengthMismatch {
            expected: 2 * g,
            found: m.size(),
        });
    }
    let a = m.block(0, 0).to_complex();
    let b = m.block(0, 1).to_complex();
    let c = m.block(1, 0).to_complex();
    let d = m.block(1, 1).to_complex();
    let num = a.mul(omega).add(&b);
    let den = c.mul(omega).add(&d);
    Ok(num.mul(&den.inverse()?))
}

fn det(m: &CMatrix) -> C64 {
    let n = m.rows();
    let mut a = m.to_rows();
    let mut det = C64::new(1.0, 0.0);
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| a[i][k].norm().total_cmp(&a[j][k].norm()))
            .unwrap();
        if a[p][k].norm() == 0.0 {
            return C64::new(0.0, 0.0);
        }
        if p != k {
            a.swap(p, k);
            det = -det;
        }
        det *= a[k][k];
        for i in k + 1..n {
            let f = a[i][k] / a[k][k];
            for j in k..n {
                let t = a[k][j];
                a[i][j] -= f * t;
            }
        }
    }
    det
}

/// `|det(CΩ + D)|`.
fn automorphy(m: &IMatrix, omega: &CMatrix) -> f64 {
    let c = m.block(1, 0).to_complex();
    let d = m.block(1, 1).to_complex();
    det(&c.mul(omega).add(&d)).norm()
}

#[derive(Debug, Clone)]
struct State {
    omega: CMatrix,
    m: IMatrix,
}

impl State {
    fn g(&self) -> usize {
        self.omega.rows()
    }

    fn y(&self, i: usize, j: usize) -> f64 {
        self.omega[(i, j)].im
    }

    fn scale(&self) -> f64 {
        self.omega.max_abs().max(1.0)
    }

    fn swap(&mut self, i: usize, j: usize) {
        let g = self.g();
        for k in 0..g {
            let t = self.omega[(i, k)];
            self.omega[(i, k)] = self.omega[(j, k)];
            self.omega[(j, k)] = t;
        }
        for k in 0..g {
            let t = self.omega[(k, i)];
            self.omega[(k, i)] = self.omega[(k, j)];
            self.omega[(k, j)] = t;
        }
        self.m.swap_rows(i, j);
        self.m.swap_rows(g + i, g + j);
    }

    /// Row and column `j` += `k` times row and column `i`.
    fn add(&mut self, j: usize, i: usize, k: i64) {
        let g = self.g();
        let kf = k as f64;
        for c in 0..g {
            let t = self.omega[(i, c)];
            self.omega[(j, c)] += t * kf;
        }
        for r in 0..g {
            let t = self.omega[(r, i)];
            self.omega[(r, j)] += t * kf;
        }
        self.m.add_row(j, i, k);
        self.m.add_row(g + i, g + j, -k);
    }

    fn negate(&mut self, i: usize) {
        let g = self.g();
        for c in 0..g {
            self.omega[(i, c)] = -self.omega[(i, c)];
            self.omega[(c, i)] = -self.omega[(c, i)];
        }
        self.m.negate_row(i);
        self.m.negate_row(g + i);
    }

    fn translate(&mut self, b: &[Vec<i64>]) {
        let g = self.g();
        for i in 0..g {
            for j in 0..g {
                if b[i][j] != 0 {
                    self.omega[(i, j)] += C64::new(b[i][j] as f64, 0.0);
                    self.m.add_row(i, g + j, b[i][j]);
                }
            }
        }
    }

    fn apply(&mut self, t: &IMatrix) -> Result<()> {
        self.omega = act(t, &self.omega)?;
        symmetrize(&mut self.omega);
        self.m = t.mul(&self.m);
        Ok(())
    }

    /// Pairwise size reduction of `Im Ω` with sorted diagonal; Minkowski for `g ≤ 2`.
    fn reduce_im(&mut self) {
        let g = self.g();
        let tol = STRICT * self.scale();
        for _ in 0..MAX_ITERATIONS {
            let mut changed = false;
            for i in 0..g.saturating_sub(1) {
                if self.y(i + 1, i + 1) < self.y(i, i) - tol {
                    self.swap(i, i + 1);
                    changed = true;
                }
            }
            for i in 0..g {
                for j in 0..g {
                    if i == j || self.y(i, i) > self.y(j, j) + tol {
                        continue;
                    }
                    let (yij, yii) = (self.y(i, j), self.y(i, i));
                    if 2.0 * yij.abs() > yii + tol {
                        let k = (yij / yii).round() as i64;
                        self.add(j, i, -k);
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        for j in 1..g {
            if self.y(j - 1, j) < -tol {
                self.negate(j);
            }
        }
    }

    /// Integer translation putting every `Re Ω_ij` in `(−½, ½]`.
    fn reduce_re(&mut self) {
        let g = self.g();
        let mut b = vec![vec![0i64; g]; g];
        for i in 0..g {
            for j in i..g {
                let x = self.omega[(i, j)].re;
                let n = (x - 0.5 - STRICT).ceil() as i64;
                b[i][j] = -n;
                b[j][i] = -n;
            }
        }
        self.translate(&b);
    }

    fn is_reduced(&self, generators: &[IMatrix], tol: f64) -> bool {
        let g = self.g();
        let s = tol * self.scale();
        for i in 0..g {
            for j in 0..g {
                if self.omega[(i, j)].re.abs() > 0.5 + s {
                    return false;
                }
                if i != j && self.y(i, i) <= self.y(j, j) + s && 2.0 * self.y(i, j).abs() > self.y(i, i) + s
                {
                    return false;
                }
            }
            if i + 1 < g && self.y(i + 1, i + 1) < self.y(i, i) - s {
                return false;
            }
            if i >= 1 && self.y(i - 1, i) < -s {
                return false;
            }
        }
        generators
            .iter()
            .all(|t| automorphy(t, &self.omega) >= 1.0 - tol)
    }
}

fn symmetrize(omega: &mut CMatrix) -> f64 {
    let defect = omega.symmetry_defect();
    let n = omega.rows();
    for i in 0..n {
        for j in i + 1..n {
            let avg = (omega[(i, j)] + omega[(j, i)]) * 0.5;
            omega[(i, j)] = avg;
            omega[(j, i)] = avg;
        }
    }
    defect
}

/// `[[U, 0], [0, U⁻ᵀ]]` for the unimodular `U` whose first row is `v`.
fn embedding_with_first_row(g: usize, v: &[i64]) -> IMatrix {
    let mut s = State {
        omega: CMatrix::zeros(g, g),
        m: IMatrix::identity(2 * g),
    };
    let i = v.iter().position(|&x| x != 0).unwrap();
    if i != 0 {
        s.swap(0, i);
    }
    if v[i] < 0 {
        s.negate(0);
    }
    for (j, &x) in v.iter().enumerate().skip(i + 1) {
        if x != 0 {
            // row j of U currently equals e_j
            s.add(0, j, x * v[i]);
        }
    }
    s.m
}

/// Inversion moves tested by the reduction loop.
pub fn inversion_generators(g: usize) -> Vec<IMatrix> {
    let mut vectors: Vec<Vec<i64>> = Vec::new();
    for i in 0..g {
        let mut v = vec![0; g];
        v[i] = 1;
        vectors.push(v);
    }
    for i in 0..g {
        for j in i + 1..g {
            for s in [1, -1] {
                let mut v = vec![0; g];
                v[i] = 1;
                v[j] = s;
                vectors.push(v);
            }
        }
    }
    let mut out = Vec::new();
    for v in &vectors {
        let t = embedding_with_first_row(g, v);
        let t_inv = t.symplectic_inverse();
        for e in [-1, 0, 1] {
            let mut q = IMatrix::identity(2 * g);
            q[(0, 0)] = 0;
            q[(0, g)] = -1;
            q[(g, 0)] = 1;
            q[(g, g)] = e;
            out.push(t_inv.mul(&q).mul(&t));
        }
    }
    if g == 2 {
        for s00 in [-1, 0, 1] {
            for s01 in [-1, 0, 1] {
                for s11 in [-1, 0, 1] {
                    let z = IMatrix::zeros(2);
                    let mut neg = IMatrix::identity(2);
                    neg[(0, 0)] = -1;
                    neg[(1, 1)] = -1;
                    let d = IMatrix::from_rows(&[vec![s00, s01], vec![s01, s11]]);
                    out.push(IMatrix::from_blocks(&z, &neg, &IMatrix::identity(2), &d));
                }
            }
        }
    }
    out
}

/// Unimodular `U` (entries in {−1, 0, 1}) fixing `Im Ω`, as symplectic embeddings.
fn im_stabilizer(s: &State, tol: f64) -> Vec<IMatrix> {
    let mut out = Vec::new();
    if s.g() != 2 {
        return out;
    }
    let y = [[s.y(0, 0), s.y(0, 1)], [s.y(1, 0), s.y(1, 1)]];
    let range = [-1i64, 0, 1];
    for &a in &range {
        for &b in &range {
            for &c in &range {
                for &d in &range {
                    let det = a * d - b * c;
                    if det.abs() != 1 || (a, b, c, d) == (1, 0, 0, 1) {
                        continue;
                    }
                    let u = [[a as f64, b as f64], [c as f64, d as f64]];
                    let mut ok = true;
                    for i in 0..2 {
                        for j in 0..2 {
                            let mut v = 0.0;
                            for k in 0..2 {
                                for l in 0..2 {
                                    v += u[i][k] * y[k][l] * u[j][l];
                                }
                            }
                            ok &= (v - y[i][j]).abs() <= tol;
                        }
                    }
                    if ok {
                        let um = IMatrix::from_rows(&[vec![a, b], vec![c, d]]);
                        // U⁻ᵀ = adj(U)ᵀ / det
                        let uit = IMatrix::from_rows(&[vec![d * det, -c * det], vec![-b * det, a * det]]);
                        let z = IMatrix::zeros(2);
                        out.push(IMatrix::from_blocks(&um, &z, &z, &uit));
                    }
                }
            }
        }
    }
    out
}

/// Order key: `Im` upper triangle ascending, then `Re` upper triangle descending.
fn key(omega: &CMatrix) -> Vec<f64> {
    let g = omega.rows();
    let mut k = Vec::new();
    for i in 0..g {
        for j in i..g {
            k.push(omega[(i, j)].im);
        }
    }
    for i in 0..g {
        for j in i..g {
            k.push(-omega[(i, j)].re);
        }
    }
    k
}

fn precedes(a: &CMatrix, b: &CMatrix, tol: f64) -> bool {
    for (x, y) in key(a).iter().zip(key(b)) {
        if (x - y).abs() > tol {
            return *x < y;
        }
    }
    false
}

fn run_loop(s: &mut State, generators: &[IMatrix]) -> Result<(usize, bool)> {
    for it in 0..MAX_ITERATIONS {
        s.reduce_im();
        s.reduce_re();
        let best = generators
            .iter()
            .map(|t| (automorphy(t, &s.omega), t))
            .min_by(|a, b| a.0.total_cmp(&b.0));
        match best {
            Some((d, t)) if d < 1.0 - STRICT => s.apply(t)?,
            _ => return Ok((it, true)),
        }
    }
    Ok((MAX_ITERATIONS, false))
}

/// Explores boundary moves from a reduced point and keeps the first point in key order.
fn canonicalize(start: State, generators: &[IMatrix]) -> Result<State> {
    let tol = BOUNDARY_TOLERANCE * start.scale();
    let mut seen = vec![start];
    let mut next = 0;
    while next < seen.len() && seen.len() < MAX_CANDIDATES {
        let s = seen[next].clone();
        next += 1;
        let mut moves = im_stabilizer(&s, tol);
        moves.extend(
            generators
                .iter()
                .filter(|t| automorphy(t, &s.omega) <= 1.0 + BOUNDARY_TOLERANCE)
                .cloned(),
        );
        for t in &moves {
            let mut c = s.clone();
            c.apply(t)?;
            c.reduce_im();
            c.reduce_re();
            if !c.is_reduced(generators, BOUNDARY_TOLERANCE) {
                continue;
            }
            if seen.iter().all(|o| o.omega.sub(&c.omega).max_abs() > tol) {
                seen.push(c);
            }
        }
    }
    let mut best = 0;
    for i in 1..seen.len() {
        if precedes(&seen[i].omega, &seen[best].omega, tol) {
            best = i;
        }
    }
    Ok(seen.swap_remove(best))
}

/// Reduces a symmetric matrix with positive definite imaginary part.
pub fn siegel_reduce(omega: &CMatrix) -> Result<ReducedMatrix> {
    let g = omega.rows();
    if g == 0 || omega.cols() != g {
        return Err(Error::LengthMismatch {
            expected: g,
            found: omega.cols(),
        });
    }
    let mut start = omega.clone();
    let symmetry_defect = symmetrize(&mut start);
    if !(min_symmetric_eigenvalue(&start.im()) > 0.0) {
        return Err(Error::NotPositiveDefinite);
    }
    let generators = inversion_generators(g);
    let mut s = State {
        omega: start,
        m: IMatrix::identity(2 * g),
    };
    let (iterations, converged) = run_loop(&mut s, &generators)?;
    if converged && g <= 2 {
        s = canonicalize(s, &generators)?;
    }
    Ok(ReducedMatrix {
        omega: s.omega,
        transform: s.m,
        iterations,
        symmetry_defect,
        canonical: converged && g <= 2,
    })
}

/// Relative slack on boundary walls used by [`compare`].
pub const COMPARE_SLACK: f64 = 0.25;

/// Sp images of a reduced point reachable through walls that are within
/// `slack` of being boundary walls.
fn near_images(start: &ReducedMatrix, generators: &[IMatrix], slack: f64) -> Result<Vec<CMatrix>> {
    let first = State {
        omega: start.omega.clone(),
        m: IMatrix::identity(2 * start.omega.rows()),
    };
    let tol = BOUNDARY_TOLERANCE * first.scale();
    let mut seen = vec![first];
    let mut next = 0;
    while next < seen.len() && seen.len() < MAX_CANDIDATES {
        let s = seen[next].clone();
        next += 1;
        let mut moves = im_stabilizer(&s, slack * s.scale());
        moves.extend(
            generators
                .iter()
                .filter(|t| automorphy(t, &s.omega) <= 1.0 + slack)
                .cloned(),
        );
        for t in &moves {
            let mut c = s.clone();
            c.apply(t)?;
            c.reduce_re();
            if seen.iter().all(|o| o.omega.sub(&c.omega).max_abs() > tol) {
                seen.push(c);
            }
        }
    }
    Ok(seen.into_iter().map(|s| s.omega).collect())
}

/// Distance between the Sp orbits of `a` and `b` near the fundamental domain.
///
/// Both inputs are reduced; the result is the smallest `‖x − y‖∞` with `x`
/// the reduced `a` and `y` ranging over images of the reduced `b` across
/// nearly-boundary walls (and symmetrically). It never exceeds
/// `‖reduce(a) − reduce(b)‖∞` and is stable when a point sits close to a
/// wall, where the canonical representative jumps.
pub fn compare(a: &CMatrix, b: &CMatrix) -> Result<f64> {
    if a.rows() != b.rows() {
        return Err(Error::GenusMismatch {
            left: a.rows(),
            right: b.rows(),
        });
    }
    let ra = siegel_reduce(a)?;
    let rb = siegel_reduce(b)?;
    let mut best = ra.omega.sub(&rb.omega).max_abs();
    if a.rows() > 2 {
        return Ok(best);
    }
    let generators = inversion_generators(a.rows());
    for (x, y) in [(&ra, &rb), (&rb, &ra)] {
        for img in near_images(y, &generators, COMPARE_SLACK)? {
            best = best.min(x.omega.sub(&img).max_abs());
        }
    }
    Ok(best)
}
