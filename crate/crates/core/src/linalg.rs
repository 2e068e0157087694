//! Dense complex linear algebra with explicit tolerances.
//!
//! Everything downstream works with small (rank ≤ ~30) complex matrices, so the
//! routines here favour robustness over speed: Jacobi SVD null spaces and least
//! squares, Schur-based eigenvalues, and seeded simultaneous diagonalization.

use nalgebra::{Complex, DMatrix, DVector, Schur, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Number of successive seeds tried by [`common_eigenbasis`] before giving up.
pub const MAX_RESEED: usize = 8;

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

#[inline]
pub fn re(x: f64) -> C64 {
    Complex::new(x, 0.0)
}

/// Comparison thresholds shared by every numerical routine.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Maximum distance to an integer accepted by [`snap_integer`]; also the
    /// eigenvalue clustering radius.
    pub snap_tol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { abs_tol: 1e-9, rel_tol: 1e-9, snap_tol: 1e-6 }
    }
}

impl Tolerance {
    pub fn new(abs_tol: f64, rel_tol: f64, snap_tol: f64) -> Result<Self> {
        for (name, v) in [("abs_tol", abs_tol), ("rel_tol", rel_tol), ("snap_tol", snap_tol)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::Parse(format!("{name} must be a non-negative number, got {v}")));
            }
        }
        Ok(Tolerance { abs_tol, rel_tol, snap_tol })
    }

    pub fn with_abs(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }

    /// `|a-b| <= abs_tol + rel_tol * max(|a|,|b|)`.
    pub fn close(&self, a: f64, b: f64) -> bool {
        (a - b).abs() <= self.abs_tol + self.rel_tol * a.abs().max(b.abs())
    }

    pub fn close_c(&self, a: C64, b: C64) -> bool {
        (a - b).norm() <= self.abs_tol + self.rel_tol * a.norm().max(b.norm())
    }

    /// Residual bound for a quantity of magnitude `scale`.
    pub fn bound(&self, scale: f64) -> f64 {
        self.abs_tol + self.rel_tol * scale
    }

    fn cluster_radius(&self, scale: f64) -> f64 {
        self.snap_tol * scale.max(1.0)
    }
}

/// Largest entry modulus.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn max_abs_vec(v: &CVector) -> f64 {
    v.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn is_hermitian(m: &CMatrix, tol: &Tolerance) -> bool {
    m.is_square() && max_abs(&(m - m.adjoint())) <= tol.bound(max_abs(m))
}

/// Columns of `vectors` gathered into one matrix.
pub fn columns(vectors: &[CVector], len: usize) -> CMatrix {
    let mut m = CMatrix::zeros(len, vectors.len());
    for (j, v) in vectors.iter().enumerate() {
        m.set_column(j, v);
    }
    m
}

/// Multiplies `v` by the phase that makes its first largest-modulus entry real
/// and positive, and scales it to unit length.
pub fn normalize_phase(v: &CVector) -> CVector {
    let n = v.norm();
    if n == 0.0 {
        return v.clone();
    }
    let mut best = 0;
    for (i, z) in v.iter().enumerate() {
        if z.norm() > v[best].norm() * (1.0 + 1e-9) {
            best = i;
        }
    }
    let phase = v[best].conj() / v[best].norm();
    v.map(|z| z * phase / n)
}

/// Thin singular value decomposition `a v = u diag(s)` from one-sided Jacobi
/// rotations. `v` is square and unitary; column `j` of `u` is zero when
/// `s[j] == 0`.
struct Svd {
    u: CMatrix,
    s: Vec<f64>,
    v: CMatrix,
}

const JACOBI_SWEEPS: usize = 80;

fn jacobi_svd(a: &CMatrix) -> Svd {
    let (rows, cols) = a.shape();
    let mut w = a.clone();
    let mut v = CMatrix::identity(cols, cols);
    for _ in 0..JACOBI_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let alpha = w.column(p).norm_squared();
                let beta = w.column(q).norm_squared();
                let gamma = w.column(p).dotc(&w.column(q));
                let g = gamma.norm();
                if g <= f64::EPSILON * (alpha * beta).sqrt() || g < f64::MIN_POSITIVE {
                    continue;
                }
                rotated = true;
                let phase = gamma.conj() / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                for m in [&mut w, &mut v] {
                    for r in 0..m.nrows() {
                        let x = m[(r, p)];
                        let y = m[(r, q)] * phase;
                        m[(r, p)] = x * cs - y * sn;
                        m[(r, q)] = x * sn + y * cs;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let s: Vec<f64> = (0..cols).map(|j| w.column(j).norm()).collect();
    let mut u = CMatrix::zeros(rows, cols);
    for j in 0..cols {
        if s[j] > 0.0 {
            u.set_column(j, &(w.column(j) / re(s[j])));
        }
    }
    Svd { u, s, v }
}

/// Singular values of `a`, in no particular order.
pub fn singular_values(a: &CMatrix) -> Vec<f64> {
    jacobi_svd(a).s
}

/// Orthonormal basis (as columns) of the null space of `a`, using singular
/// values at or below `threshold`.
pub fn null_space(a: &CMatrix, threshold: f64) -> CMatrix {
    let cols = a.ncols();
    if cols == 0 {
        return CMatrix::zeros(0, 0);
    }
    let svd = jacobi_svd(a);
    let kept: Vec<CVector> =
        (0..cols).filter(|&j| svd.s[j] <= threshold).map(|j| svd.v.column(j).into_owned()).collect();
    columns(&kept, cols)
}

/// Orthonormal basis of the column span of `a`, keeping singular values above
/// `threshold`.
pub fn range_basis(a: &CMatrix, threshold: f64) -> CMatrix {
    let (rows, cols) = a.shape();
    if cols == 0 || rows == 0 {
        return CMatrix::zeros(rows, 0);
    }
    let svd = jacobi_svd(a);
    let mut idx: Vec<usize> = (0..cols).filter(|&j| svd.s[j] > threshold).collect();
    idx.sort_by(|&a, &b| svd.s[b].total_cmp(&svd.s[a]));
    let kept: Vec<CVector> = idx.iter().map(|&j| svd.u.column(j).into_owned()).collect();
    columns(&kept, rows)
}

/// Numerical rank relative to the largest singular value.
pub fn rank(vectors: &[CVector], len: usize, tol: &Tolerance) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let sv = singular_values(&columns(vectors, len));
    let top = sv.iter().cloned().fold(0.0, f64::max);
    sv.iter().filter(|s| **s > tol.snap_tol * top.max(1.0)).count()
}

/// Solves `a x = b`, in the least-squares sense when overdetermined.
pub fn solve_linear(a: &CMatrix, b: &CVector, tol: &Tolerance) -> Result<CVector> {
    if a.nrows() != b.len() {
        return Err(Error::DimensionMismatch(format!(
            "matrix has {} rows but right-hand side has length {}",
            a.nrows(),
            b.len()
        )));
    }
    if a.ncols() == 0 {
        let residual = max_abs_vec(b);
        return if residual <= tol.bound(0.0) {
            Ok(CVector::zeros(0))
        } else {
            Err(Error::Inconsistent { residual })
        };
    }
    let svd = jacobi_svd(a);
    let top = svd.s.iter().cloned().fold(0.0, f64::max);
    let eps = (top * 1e-12).max(1e-300);
    let mut x = CVector::zeros(a.ncols());
    for j in 0..a.ncols() {
        if svd.s[j] > eps {
            x += svd.v.column(j) * (svd.u.column(j).dotc(b) / re(svd.s[j]));
        }
    }
    let residual = max_abs_vec(&(a * &x - b));
    let scale = max_abs(a) * max_abs_vec(&x) + max_abs_vec(b);
    if residual > tol.bound(scale) * 10.0 {
        return Err(Error::Inconsistent { residual });
    }
    Ok(x)
}

/// An eigenvalue together with an orthonormal basis of its eigenspace.
#[derive(Clone, Debug)]
pub struct Eigenspace {
    pub value: C64,
    pub basis: CMatrix,
}

fn sort_key_desc(a: &C64, b: &C64) -> std::cmp::Ordering {
    b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im))
}

/// Groups eigenvalues (already sorted) into clusters of nearby values.
fn cluster(values: &[C64], radius: f64) -> Vec<Vec<usize>> {
    let mut clusters: Vec<(C64, Vec<usize>)> = Vec::new();
    for (i, v) in values.iter().enumerate() {
        match clusters.iter_mut().find(|(centre, _)| (centre - v).norm() <= radius) {
            Some((centre, members)) => {
                members.push(i);
                let k = members.len() as f64;
                *centre = members.iter().map(|&m| values[m]).sum::<C64>() / re(k);
            }
            None => clusters.push((*v, vec![i])),
        }
    }
    clusters.into_iter().map(|(_, m)| m).collect()
}

/// Eigenspaces of a square matrix, ordered by descending real part and then
/// descending imaginary part of the eigenvalue.
pub fn eigenspaces(a: &CMatrix, tol: &Tolerance) -> Result<Vec<Eigenspace>> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!("eigen needs a square matrix, got {:?}", a.shape())));
    }
    let n = a.nrows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let scale = max_abs(a).max(1.0);
    let radius = tol.cluster_radius(scale);
    let mut spaces = Vec::new();
    if is_hermitian(a, tol) {
        let h = (a + a.adjoint()) * re(0.5);
        let eig = SymmetricEigen::new(h);
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
        let values: Vec<C64> = order.iter().map(|&i| re(eig.eigenvalues[i])).collect();
        for members in cluster(&values, radius) {
            let vecs: Vec<CVector> =
                members.iter().map(|&m| eig.eigenvectors.column(order[m]).into_owned()).collect();
            let value = members.iter().map(|&m| values[m]).sum::<C64>() / re(members.len() as f64);
            spaces.push(Eigenspace { value, basis: columns(&vecs, n) });
        }
    } else {
        let (_, t) = Schur::new(a.clone()).unpack();
        let mut values: Vec<C64> = t.diagonal().iter().cloned().collect();
        values.sort_by(sort_key_desc);
        for members in cluster(&values, radius) {
            let value = members.iter().map(|&m| values[m]).sum::<C64>() / re(members.len() as f64);
            let shifted = a - CMatrix::identity(n, n) * value;
            let basis = null_space(&shifted, radius);
            if basis.ncols() != members.len() {
                return Err(Error::NotDiagonalizable);
            }
            spaces.push(Eigenspace { value, basis });
        }
    }
    spaces.sort_by(|x, y| sort_key_desc(&x.value, &y.value));
    let total: usize = spaces.iter().map(|s| s.basis.ncols()).sum();
    if total != n {
        return Err(Error::NotDiagonalizable);
    }
    Ok(spaces)
}

/// Eigenpairs of a diagonalizable matrix, ordered by descending real part and
/// then descending imaginary part.
pub fn eigen(a: &CMatrix, tol: &Tolerance) -> Result<Vec<(C64, CVector)>> {
    let scale = max_abs(a).max(1.0);
    let mut out = Vec::with_capacity(a.nrows());
    for space in eigenspaces(a, tol)? {
        for v in space.basis.column_iter() {
            let v = v.into_owned();
            let lambda = v.dotc(&(a * &v)) / v.dotc(&v);
            if max_abs_vec(&(a * &v - &v * lambda)) > tol.cluster_radius(scale) {
                return Err(Error::NotDiagonalizable);
            }
            out.push((lambda, v));
        }
    }
    Ok(out)
}

/// `‖Mv - (v*Mv / v*v) v‖∞`.
pub fn eigen_residual(m: &CMatrix, v: &CVector) -> f64 {
    let mv = m * v;
    let lambda = v.dotc(&mv) / v.dotc(v);
    max_abs_vec(&(mv - v * lambda))
}

/// A basis of common eigenvectors for a commuting family of diagonalizable
/// matrices.
///
/// A seeded random real combination is eigendecomposed; each eigenspace of
/// dimension > 1 is restricted and split again by a fresh combination until
/// every input acts as a scalar on it.
pub fn common_eigenbasis(mats: &[CMatrix], seed: u64, tol: &Tolerance) -> Result<Vec<CVector>> {
    let Some(first) = mats.first() else {
        return Ok(Vec::new());
    };
    let n = first.nrows();
    for m in mats {
        if m.shape() != (n, n) {
            return Err(Error::DimensionMismatch(format!(
                "common_eigenbasis expects {n}x{n} matrices, got {:?}",
                m.shape()
            )));
        }
    }
    for (i, a) in mats.iter().enumerate() {
        for b in &mats[i + 1..] {
            let comm = max_abs(&(a * b - b * a));
            if comm > tol.bound(max_abs(a) * max_abs(b)) * 10.0 {
                return Err(Error::NotCommuting { residual: comm });
            }
        }
    }
    let scale = mats.iter().map(max_abs).fold(1.0, f64::max);
    for attempt in 0..MAX_RESEED {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt as u64));
        let mut out = Vec::with_capacity(n);
        if split(&CMatrix::identity(n, n), mats, &mut rng, tol, &mut out).is_err() {
            continue;
        }
        let ok = out.iter().all(|v| {
            mats.iter().all(|m| eigen_residual(m, v) <= tol.bound(scale) * 10.0)
        });
        if ok && out.len() == n {
            return Ok(out.iter().map(normalize_phase).collect());
        }
    }
    Err(Error::DegenerateSeed { seed, attempts: MAX_RESEED })
}

fn split(
    basis: &CMatrix,
    mats: &[CMatrix],
    rng: &mut ChaCha8Rng,
    tol: &Tolerance,
    out: &mut Vec<CVector>,
) -> Result<()> {
    let k = basis.ncols();
    if k == 1 {
        out.push(basis.column(0).into_owned());
        return Ok(());
    }
    let restricted: Vec<CMatrix> = mats.iter().map(|m| basis.adjoint() * m * basis).collect();
    let all_scalar = restricted.iter().all(|m| {
        let mean = m.trace() / re(k as f64);
        max_abs(&(m - CMatrix::identity(k, k) * mean)) <= tol.bound(max_abs(m)) * 10.0
    });
    if all_scalar {
        out.extend(basis.column_iter().map(|c| c.into_owned()));
        return Ok(());
    }
    for _ in 0..4 {
        let mut combo = CMatrix::zeros(k, k);
        for m in &restricted {
            combo += m * re(rng.gen_range(-1.0..1.0));
        }
        let spaces = eigenspaces(&combo, tol)?;
        if spaces.len() < 2 {
            continue;
        }
        for space in spaces {
            split(&(basis * &space.basis), mats, rng, tol, out)?;
        }
        return Ok(());
    }
    Err(Error::DegenerateSeed { seed: 0, attempts: 4 })
}

/// Orthonormal basis of `span(b1) ∩ span(b2)`.
pub fn subspace_intersection(b1: &[CVector], b2: &[CVector], tol: &Tolerance) -> Result<Vec<CVector>> {
    let len = match (b1.first(), b2.first()) {
        (Some(v), _) | (None, Some(v)) => v.len(),
        (None, None) => return Ok(Vec::new()),
    };
    if b1.iter().chain(b2).any(|v| v.len() != len) {
        return Err(Error::DimensionMismatch("subspace_intersection needs equal-length vectors".into()));
    }
    let q1 = orthonormal(b1, len, tol);
    let q2 = orthonormal(b2, len, tol);
    if q1.ncols() == 0 || q2.ncols() == 0 {
        return Ok(Vec::new());
    }
    let overlap = q1.adjoint() * &q2;
    // Right singular vectors of Q2^† Q1 with singular value one are the
    // coordinates (in q1) of the common directions.
    let svd = jacobi_svd(&overlap.adjoint());
    let found = (0..q1.ncols())
        .filter(|&j| svd.s[j] >= 1.0 - tol.snap_tol)
        .map(|j| &q1 * svd.v.column(j))
        .collect();
    Ok(found)
}

fn orthonormal(vectors: &[CVector], len: usize, tol: &Tolerance) -> CMatrix {
    if vectors.is_empty() {
        return CMatrix::zeros(len, 0);
    }
    let m = columns(vectors, len);
    let top = singular_values(&m).iter().cloned().fold(0.0, f64::max);
    range_basis(&m, tol.snap_tol * top.max(1.0))
}

/// Distance from `v` to the span of `basis` (∞-norm of the residual after
/// orthogonal projection).
pub fn distance_to_span(v: &CVector, basis: &[CVector], tol: &Tolerance) -> f64 {
    let q = orthonormal(basis, v.len(), tol);
    let proj = &q * (q.adjoint() * v);
    max_abs_vec(&(v - proj))
}

/// Rounds `x` to the nearest integer if it lies within `snap_tol` of one.
pub fn snap_integer(x: C64, tol: &Tolerance) -> Result<i64> {
    let rounded = x.re.round();
    if (x.re - rounded).abs() <= tol.snap_tol && x.im.abs() <= tol.snap_tol {
        Ok(rounded as i64)
    } else {
        Err(Error::NotNearInteger { value: format!("{x}") })
    }
}

pub fn snap_real(x: f64, tol: &Tolerance) -> Result<i64> {
    snap_integer(re(x), tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[f64]]) -> CMatrix {
        let n = rows.len();
        let m = rows[0].len();
        CMatrix::from_fn(n, m, |i, j| re(rows[i][j]))
    }

    fn vecr(xs: &[f64]) -> CVector {
        CVector::from_iterator(xs.len(), xs.iter().map(|&x| re(x)))
    }

    #[test]
    fn tolerance_close_is_symmetric() {
        let t = Tolerance::default();
        assert!(t.close(1.0, 1.0 + 1e-10));
        assert!(t.close(1.0 + 1e-10, 1.0));
        assert!(!t.close(1.0, 1.0 + 1e-6));
        assert!(Tolerance::new(-1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn solve_identity() {
        let x = solve_linear(&CMatrix::identity(2, 2), &vecr(&[1.0, 2.0]), &Tolerance::default()).unwrap();
        assert!(max_abs_vec(&(x - vecr(&[1.0, 2.0]))) < 1e-12);
    }

    #[test]
    fn solve_inconsistent() {
        let a = mat(&[&[1.0, 1.0], &[0.0, 0.0]]);
        let err = solve_linear(&a, &vecr(&[1.0, 1.0]), &Tolerance::default()).unwrap_err();
        assert!(matches!(err, Error::Inconsistent { .. }));
    }

    #[test]
    fn solve_overdetermined_consistent() {
        let a = mat(&[&[1.0, 0.0], &[0.0, 1.0], &[1.0, 1.0]]);
        let x = solve_linear(&a, &vecr(&[1.0, 2.0, 3.0]), &Tolerance::default()).unwrap();
        assert!(max_abs_vec(&(x - vecr(&[1.0, 2.0]))) < 1e-12);
    }

    #[test]
    fn solve_perron_equation_rep_s3() {
        // Fusion matrix of rho in Rep(S3): rho*1 = rho, rho*sgn = rho, rho*rho = 1+sgn+rho.
        // Column j holds the decomposition of rho ⊗ V_j.
        let rho = mat(&[&[0.0, 0.0, 1.0], &[0.0, 0.0, 1.0], &[1.0, 1.0, 1.0]]);
        let d = vecr(&[1.0, 1.0, 2.0]);
        // By hand: rho^T d = (2, 2, 4) = 2 d.
        let rhs = rho.transpose() * &d;
        assert!(max_abs_vec(&(&rhs - &d * re(2.0))) < 1e-15);
        let x = solve_linear(&rho.transpose(), &(&d * re(2.0)), &Tolerance::default()).unwrap();
        assert!(max_abs_vec(&(rho.transpose() * x - d * re(2.0))) < 1e-12);
    }

    #[test]
    fn eigen_diagonal() {
        let pairs = eigen(&mat(&[&[3.0, 0.0], &[0.0, 1.0]]), &Tolerance::default()).unwrap();
        assert!((pairs[0].0 - re(3.0)).norm() < 1e-12);
        assert!((pairs[1].0 - re(1.0)).norm() < 1e-12);
        assert!((pairs[0].1[0].norm() - 1.0).abs() < 1e-12);
        assert!((pairs[1].1[1].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eigen_swap() {
        let pairs = eigen(&mat(&[&[0.0, 1.0], &[1.0, 0.0]]), &Tolerance::default()).unwrap();
        let vals: Vec<f64> = pairs.iter().map(|p| p.0.re).collect();
        assert!((vals[0] - 1.0).abs() < 1e-12 && (vals[1] + 1.0).abs() < 1e-12);
    }

    /// Class multiplication constants of S3 over classes (e, transpositions,
    /// 3-cycles): row a, column b holds the coefficient of K_b in K_c K_a.
    fn s3_class_matrices() -> Vec<CMatrix> {
        let identity = CMatrix::identity(3, 3);
        // K_t K_e = K_t; K_t K_t = 3e + 3K_r; K_t K_r = 2K_t.
        let trans = mat(&[&[0.0, 1.0, 0.0], &[3.0, 0.0, 3.0], &[0.0, 2.0, 0.0]]);
        // K_r K_e = K_r; K_r K_t = 2K_t; K_r K_r = 2e + K_r.
        let rot = mat(&[&[0.0, 0.0, 1.0], &[0.0, 2.0, 0.0], &[2.0, 0.0, 1.0]]);
        vec![identity, trans, rot]
    }

    #[test]
    fn eigen_transposition_class_matrix() {
        let m = &s3_class_matrices()[1];
        let vals: Vec<f64> = eigen(m, &Tolerance::default()).unwrap().iter().map(|p| p.0.re).collect();
        assert_eq!(vals.len(), 3);
        for (got, want) in vals.iter().zip([3.0, 0.0, -3.0]) {
            assert!((got - want).abs() < 1e-9, "{vals:?}");
        }
    }

    #[test]
    fn eigen_defective_rejected() {
        let jordan = mat(&[&[1.0, 1.0], &[0.0, 1.0]]);
        assert!(matches!(eigen(&jordan, &Tolerance::default()), Err(Error::NotDiagonalizable)));
    }

    #[test]
    fn common_eigenbasis_identity() {
        let basis = common_eigenbasis(&[CMatrix::identity(3, 3)], 0, &Tolerance::default()).unwrap();
        assert_eq!(basis.len(), 3);
        for (i, v) in basis.iter().enumerate() {
            assert!((v[i] - re(1.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn common_eigenbasis_s3_gives_character_table_columns() {
        let tol = Tolerance::default();
        let mats = s3_class_matrices();
        let basis = common_eigenbasis(&mats, 0, &tol).unwrap();
        assert_eq!(basis.len(), 3);
        // Central characters w_c = |K_c| chi(c) / chi(1).
        let expected = [[1.0, 3.0, 2.0], [1.0, -3.0, 2.0], [1.0, 0.0, -1.0]];
        for v in &basis {
            let w: Vec<C64> = v.iter().map(|z| z / v[0]).collect();
            let hit = expected
                .iter()
                .any(|e| e.iter().zip(&w).all(|(a, b)| (re(*a) - b).norm() < 1e-9));
            assert!(hit, "unexpected eigenvector {w:?}");
            for m in &mats {
                assert!(eigen_residual(m, v) <= 10.0 * tol.abs_tol);
            }
        }
    }

    #[test]
    fn common_eigenbasis_rejects_noncommuting() {
        let a = mat(&[&[1.0, 0.0], &[0.0, 2.0]]);
        let b = mat(&[&[0.0, 1.0], &[1.0, 0.0]]);
        assert!(matches!(
            common_eigenbasis(&[a, b], 0, &Tolerance::default()),
            Err(Error::NotCommuting { .. })
        ));
    }

    #[test]
    fn intersections() {
        let t = Tolerance::default();
        let e1 = vecr(&[1.0, 0.0]);
        let e2 = vecr(&[0.0, 1.0]);
        assert_eq!(subspace_intersection(std::slice::from_ref(&e1), std::slice::from_ref(&e1), &t).unwrap().len(), 1);
        assert_eq!(subspace_intersection(&[e1], &[e2], &t).unwrap().len(), 0);
    }

    #[test]
    fn intersection_of_class_sum_spans() {
        // CE(Rep S3) in E-coordinates (E_1, E_sgn, E_rho); class sums are
        // w_c = |K_c| chi(c)/chi(1) per irreducible.
        let t = Tolerance::default();
        let k_e = vecr(&[1.0, 1.0, 1.0]);
        let k_t = vecr(&[3.0, -3.0, 0.0]);
        let k_r = vecr(&[2.0, 2.0, -1.0]);
        let a3 = [k_e.clone(), k_r.clone()];
        let s3 = [k_e, k_t, k_r];
        assert_eq!(subspace_intersection(&a3, &s3, &t).unwrap().len(), 2);
    }

    #[test]
    fn snapping() {
        let t = Tolerance::default();
        assert_eq!(snap_integer(re(2.0000000001), &t).unwrap(), 2);
        assert_eq!(snap_integer(re(1.9999999), &t).unwrap(), 2);
        assert!(matches!(snap_integer(re(0.5), &t), Err(Error::NotNearInteger { .. })));
        assert!(snap_integer(c(1.0, 0.1), &t).is_err());
    }

    #[test]
    fn svd_handles_repeated_singular_values() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let n = 6;
        let mut random_unitary = || {
            CMatrix::from_fn(n, n, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).qr().q()
        };
        let (q, w) = (random_unitary(), random_unitary());
        let d = CMatrix::from_diagonal(&CVector::from_fn(n, |i, _| re(if i % 3 == 0 { 2.0 } else { 3.0 })));
        let a = &q * d * &w;
        let svd = jacobi_svd(&a);
        let rebuilt = &svd.u * CMatrix::from_diagonal(&CVector::from_iterator(n, svd.s.iter().map(|x| re(*x))))
            * svd.v.adjoint();
        assert!(max_abs(&(rebuilt - &a)) < 1e-12);
        let mut s = svd.s.clone();
        s.sort_by(f64::total_cmp);
        for (got, want) in s.iter().zip([2.0, 2.0, 3.0, 3.0, 3.0, 3.0]) {
            assert!((got - want).abs() < 1e-12);
        }
        let b = CVector::from_fn(n, |i, _| re(i as f64));
        let x = solve_linear(&a, &b, &Tolerance::default()).unwrap();
        assert!(max_abs_vec(&(&a * x - b)) < 1e-12);
    }

    #[test]
    fn null_space_of_wide_matrix() {
        let a = CMatrix::from_row_slice(1, 3, &[re(1.0), re(1.0), re(1.0)]);
        let k = null_space(&a, 1e-9);
        assert_eq!(k.ncols(), 2);
        assert!(max_abs(&(&a * &k)) < 1e-12);
    }
}
