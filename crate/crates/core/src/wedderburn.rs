//! Wedderburn decomposition of the class function algebra.
//!
//! `CF(C)` is a finite-dimensional C*-algebra (the characters are orthonormal
//! for `⟨f, g⟩ = τ(f* ⋆ g)`), so it splits as a sum of full matrix algebras.
//! Central idempotents come from simultaneously diagonalizing the regular
//! representation of the center; matrix units inside a block come from the
//! spectral projections of a seeded random self-adjoint element.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::char_theory::{
    cf_inner, cf_multiply, cf_star, cointegral, fourier_inverse, integral, left_multiplication, pairing,
    right_multiplication, tau, unit_class_function, CentralElement, ClassFunction,
};
use crate::error::{Error, Result};
use crate::fusion_ring::FusionRingData;
use crate::linalg::{
    c, columns, common_eigenbasis, eigen, eigenspaces, is_hermitian, max_abs, null_space, range_basis, re,
    snap_integer, solve_linear, CMatrix, CVector, Tolerance, C64, MAX_RESEED,
};

/// Bound for every algebraic identity residual.
pub const IDENTITY_RESIDUAL: f64 = 1e-8;
/// Eigenvalues of an idempotent must lie this close to 0 or 1.
pub const IDEMPOTENT_BAND: f64 = 1e-6;

/// One simple summand `M_m(k)` of `CF(C)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Block {
    pub multiplicity: usize,
    /// `n_j = 1 / τ(F^j_ss)`.
    pub scale: f64,
    /// `dim(C) / n_j`.
    pub summand_dim: f64,
    pub central_idempotent: ClassFunction,
    /// Matrix units `F^j_st`.
    pub units: Vec<Vec<ClassFunction>>,
    /// Conjugacy class sums `C^j_st = F⁻¹(F^j_st)`.
    pub class_sums: Vec<Vec<CentralElement>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlockStructure {
    pub blocks: Vec<Block>,
    pub global_dim: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BlockSummary {
    pub m: usize,
    pub n: f64,
    pub summand_dim: f64,
}

impl BlockStructure {
    pub fn rank(&self) -> usize {
        self.blocks.iter().map(|b| b.multiplicity * b.multiplicity).sum()
    }

    pub fn summaries(&self) -> Vec<BlockSummary> {
        self.blocks
            .iter()
            .map(|b| BlockSummary { m: b.multiplicity, n: b.scale, summand_dim: b.summand_dim })
            .collect()
    }

    /// All `(j, s, t)` in block-major, row-major order.
    pub fn unit_indices(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::with_capacity(self.rank());
        for (j, b) in self.blocks.iter().enumerate() {
            for s in 0..b.multiplicity {
                for t in 0..b.multiplicity {
                    out.push((j, s, t));
                }
            }
        }
        out
    }

    pub fn unit(&self, j: usize, s: usize, t: usize) -> &ClassFunction {
        &self.blocks[j].units[s][t]
    }

    pub fn class_sum(&self, j: usize, s: usize, t: usize) -> &CentralElement {
        &self.blocks[j].class_sums[s][t]
    }

    /// Matrix whose columns are the matrix units, in [`Self::unit_indices`] order.
    pub fn unit_matrix(&self) -> CMatrix {
        let r = self.rank();
        let cols: Vec<CVector> =
            self.unit_indices().iter().map(|&(j, s, t)| self.unit(j, s, t).coeffs.clone()).collect();
        columns(&cols, r)
    }

    pub fn class_sum_matrix(&self) -> CMatrix {
        let r = self.rank();
        let cols: Vec<CVector> =
            self.unit_indices().iter().map(|&(j, s, t)| self.class_sum(j, s, t).coeffs.clone()).collect();
        columns(&cols, r)
    }

    /// `Σ α^j_st F^j_st`.
    pub fn assemble(&self, coeffs: &[CMatrix]) -> ClassFunction {
        let mut out = ClassFunction::zero(self.rank());
        for (j, b) in self.blocks.iter().enumerate() {
            for s in 0..b.multiplicity {
                for t in 0..b.multiplicity {
                    out = &out + &b.units[s][t].scale(coeffs[j][(s, t)]);
                }
            }
        }
        out
    }
}

/// Splits `CF(C)` into matrix blocks with matrix units and class sums.
pub fn compute_blocks(ring: &FusionRingData, seed: u64, tol: &Tolerance) -> Result<BlockStructure> {
    let r = ring.rank();
    let dim = ring.global_dim();

    // Center: f with χ_i ⋆ f = f ⋆ χ_i for every i.
    let mut stacked = CMatrix::zeros(r * r, r);
    for i in 0..r {
        let chi = ClassFunction::basis(r, i);
        let comm = left_multiplication(ring, &chi) - right_multiplication(ring, &chi);
        stacked.view_mut((i * r, 0), (r, r)).copy_from(&comm);
    }
    let center = null_space(&stacked, tol.snap_tol * max_abs(&stacked).max(1.0));
    let c_dim = center.ncols();
    if c_dim == 0 {
        return Err(Error::NotSemisimple("empty center".into()));
    }

    // Regular representation of the center on itself.
    let reps: Vec<CMatrix> = center
        .column_iter()
        .map(|z| center.adjoint() * left_multiplication(ring, &ClassFunction::new(z.into_owned())) * &center)
        .collect();
    let eigvecs = common_eigenbasis(&reps, seed, tol)?;
    let unit = unit_class_function(ring);
    let mut idempotents = Vec::with_capacity(c_dim);
    for w in eigvecs {
        let e = ClassFunction::new(&center * w);
        let sq = cf_multiply(ring, &e, &e);
        let mu = cf_inner(&e, &sq) / cf_inner(&e, &e);
        if mu.norm() < tol.snap_tol {
            return Err(Error::NotSemisimple("nilpotent central element".into()));
        }
        let f = e.scale(re(1.0) / mu);
        if cf_multiply(ring, &f, &f).dist(&f) > IDENTITY_RESIDUAL {
            return Err(Error::NotSemisimple("central eigenvector is not a multiple of an idempotent".into()));
        }
        idempotents.push(f);
    }
    let total = idempotents.iter().fold(ClassFunction::zero(r), |acc, f| &acc + f);
    if total.dist(&unit) > IDENTITY_RESIDUAL {
        return Err(Error::NotSemisimple(format!(
            "{} central idempotents do not sum to the unit (residual {:.3e})",
            idempotents.len(),
            total.dist(&unit)
        )));
    }

    let mut blocks = Vec::with_capacity(c_dim);
    for (pos, f) in idempotents.into_iter().enumerate() {
        let proj = left_multiplication(ring, &f);
        let sq = snap_integer(proj.trace(), tol).map_err(|_| Error::NotSemisimple("block dimension".into()))?;
        let m = (sq as f64).sqrt().round() as usize;
        if m * m != sq as usize || m == 0 {
            return Err(Error::NotSemisimple(format!("block of dimension {sq} is not a full matrix algebra")));
        }
        let units = if m == 1 {
            vec![vec![f.clone()]]
        } else {
            split_block(ring, &f, &proj, m, seed, pos, tol)?
        };
        let t0 = tau(&units[0][0]);
        let scale = 1.0 / t0.re;
        blocks.push(Block {
            multiplicity: m,
            scale,
            summand_dim: dim / scale,
            class_sums: class_sums(ring, &units),
            central_idempotent: f,
            units,
        });
    }

    let lambda = cointegral(ring);
    let zero_pos = blocks
        .iter()
        .position(|b| b.central_idempotent.dist(&lambda) <= IDENTITY_RESIDUAL)
        .ok_or_else(|| Error::NotSemisimple("cointegral is not a central primitive idempotent".into()))?;
    let first = blocks.remove(zero_pos);
    blocks.sort_by_key(block_key);
    blocks.insert(0, first);
    Ok(BlockStructure { blocks, global_dim: dim })
}

fn block_key(b: &Block) -> (usize, i64, Vec<(i64, i64)>) {
    let sig = b
        .central_idempotent
        .coeffs
        .iter()
        .map(|z| ((z.re * 1e6).round() as i64, (z.im * 1e6).round() as i64))
        .collect();
    (b.multiplicity, (b.scale * 1e6).round() as i64, sig)
}

fn class_sums(ring: &FusionRingData, units: &[Vec<ClassFunction>]) -> Vec<Vec<CentralElement>> {
    units.iter().map(|row| row.iter().map(|u| fourier_inverse(ring, u)).collect()).collect()
}

/// Matrix units for the block cut out by the central idempotent `f`.
fn split_block(
    ring: &FusionRingData,
    f: &ClassFunction,
    proj: &CMatrix,
    m: usize,
    seed: u64,
    pos: usize,
    tol: &Tolerance,
) -> Result<Vec<Vec<ClassFunction>>> {
    let basis = range_basis(proj, 0.5);
    if basis.ncols() != m * m {
        return Err(Error::SplitFailure(format!("block projection has rank {}, expected {}", basis.ncols(), m * m)));
    }
    for attempt in 0..MAX_RESEED {
        let stream = seed.wrapping_mul(0x9e37_79b9).wrapping_add((pos * MAX_RESEED + attempt) as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(stream);
        if let Some(units) = try_split(ring, f, &basis, m, &mut rng, tol) {
            return Ok(units);
        }
    }
    Err(Error::SplitFailure(format!("no splitting element found for block of size {m}")))
}

fn try_split(
    ring: &FusionRingData,
    f: &ClassFunction,
    basis: &CMatrix,
    m: usize,
    rng: &mut ChaCha8Rng,
    tol: &Tolerance,
) -> Option<Vec<Vec<ClassFunction>>> {
    // Complex coordinates: a real basis of a quaternionic block spans only
    // scalar self-adjoint elements.
    let coords = CVector::from_fn(basis.ncols(), |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let y = ClassFunction::new(basis * coords);
    let x = (&y + &cf_star(ring, &y)).scale(re(0.5));
    let restricted = basis.adjoint() * left_multiplication(ring, &x) * basis;
    let mut spaces = eigenspaces(&restricted, tol).ok()?;
    if spaces.len() != m || spaces.iter().any(|s| s.basis.ncols() != m) {
        return None;
    }
    spaces.reverse();

    // Spectral projections of x are the components of F in each eigenspace.
    let f_coords = basis.adjoint() * &f.coeffs;
    let diag: Vec<ClassFunction> = spaces
        .iter()
        .map(|s| ClassFunction::new(basis * (&s.basis * (s.basis.adjoint() * &f_coords))))
        .collect();

    let e0 = &diag[0];
    let mut first_row = vec![e0.clone()];
    for et in &diag[1..] {
        let mut best: Option<ClassFunction> = None;
        for b in basis.column_iter() {
            let g = cf_multiply(ring, &cf_multiply(ring, e0, &ClassFunction::new(b.into_owned())), et);
            if best.as_ref().is_none_or(|cur| g.norm_inf() > cur.norm_inf()) {
                best = Some(g);
            }
        }
        let g = phase_fixed(&best?);
        let gg = cf_multiply(ring, &g, &cf_star(ring, &g));
        let c = cf_inner(e0, &gg) / cf_inner(e0, e0);
        if c.re <= tol.snap_tol {
            return None;
        }
        first_row.push(g.scale(re(1.0 / c.re.sqrt())));
    }
    let first_col: Vec<ClassFunction> = first_row.iter().map(|u| cf_star(ring, u)).collect();
    let mut units = vec![vec![ClassFunction::zero(ring.rank()); m]; m];
    for s in 0..m {
        for t in 0..m {
            units[s][t] = if s == 0 {
                first_row[t].clone()
            } else if t == 0 {
                first_col[s].clone()
            } else {
                cf_multiply(ring, &first_col[s], &first_row[t])
            };
        }
    }
    let residual = unit_relation_residual(ring, &units);
    let sum = (0..m).fold(ClassFunction::zero(ring.rank()), |acc, s| &acc + &units[s][s]);
    if residual > IDENTITY_RESIDUAL || sum.dist(f) > IDENTITY_RESIDUAL {
        return None;
    }
    Some(units)
}

fn phase_fixed(g: &ClassFunction) -> ClassFunction {
    let mut best = 0;
    for (i, z) in g.coeffs.iter().enumerate() {
        if z.norm() > g.coeffs[best].norm() * (1.0 + 1e-9) {
            best = i;
        }
    }
    let z = g.coeffs[best];
    if z.norm() == 0.0 {
        return g.clone();
    }
    g.scale(z.conj() / z.norm())
}

fn unit_relation_residual(ring: &FusionRingData, units: &[Vec<ClassFunction>]) -> f64 {
    let m = units.len();
    let mut worst: f64 = 0.0;
    for s in 0..m {
        for t in 0..m {
            for u in 0..m {
                for v in 0..m {
                    let prod = cf_multiply(ring, &units[s][t], &units[u][v]);
                    let want = if t == u { units[s][v].clone() } else { ClassFunction::zero(ring.rank()) };
                    worst = worst.max(prod.dist(&want));
                }
            }
        }
    }
    worst
}

/// Coefficients `α^j_st` with `f = Σ α^j_st F^j_st`, one `m_j × m_j` matrix per block.
pub fn expand_in_units(f: &ClassFunction, blocks: &BlockStructure, tol: &Tolerance) -> Result<Vec<CMatrix>> {
    let x = solve_linear(&blocks.unit_matrix(), &f.coeffs, tol)?;
    Ok(reshape(blocks, &x))
}

/// Coefficients of a central element in the class-sum basis `C^j_st`.
pub fn expand_in_class_sums(z: &CentralElement, blocks: &BlockStructure, tol: &Tolerance) -> Result<Vec<CMatrix>> {
    let x = solve_linear(&blocks.class_sum_matrix(), &z.coeffs, tol)?;
    Ok(reshape(blocks, &x))
}

fn reshape(blocks: &BlockStructure, x: &CVector) -> Vec<CMatrix> {
    let mut out = Vec::with_capacity(blocks.blocks.len());
    let mut k = 0;
    for b in &blocks.blocks {
        let m = b.multiplicity;
        let mut a = CMatrix::zeros(m, m);
        for s in 0..m {
            for t in 0..m {
                a[(s, t)] = x[k];
                k += 1;
            }
        }
        out.push(a);
    }
    out
}

/// Re-bases every block so that the component of the idempotent `p` there is
/// `diag(1, …, 1, 0, …, 0)`.
pub fn adapt_to_idempotent(
    ring: &FusionRingData,
    blocks: &BlockStructure,
    p: &ClassFunction,
    tol: &Tolerance,
) -> Result<BlockStructure> {
    let coeffs = expand_in_units(p, blocks, tol)?;
    let mut out = blocks.clone();
    let mut changed = false;
    for (j, alpha) in coeffs.iter().enumerate() {
        let m = alpha.nrows();
        let near_band = |z: C64| (z - re(1.0)).norm() <= IDEMPOTENT_BAND || z.norm() <= IDEMPOTENT_BAND;
        let off_diag = (0..m).flat_map(|s| (0..m).map(move |t| (s, t))).filter(|(s, t)| s != t);
        let is_diagonal = off_diag.clone().all(|(s, t)| alpha[(s, t)].norm() <= IDENTITY_RESIDUAL);

        let change = if is_diagonal {
            if let Some(s) = (0..m).find(|&s| !near_band(alpha[(s, s)])) {
                return Err(Error::NotIdempotent(format!("{}", alpha[(s, s)])));
            }
            let mut order: Vec<usize> = (0..m).collect();
            order.sort_by_key(|&s| (alpha[(s, s)] - re(1.0)).norm() > IDEMPOTENT_BAND);
            if order.iter().enumerate().all(|(a, &b)| a == b) {
                continue;
            }
            let mut perm = CMatrix::zeros(m, m);
            for (new, &old) in order.iter().enumerate() {
                perm[(old, new)] = re(1.0);
            }
            let inv = perm.transpose();
            (perm, inv)
        } else {
            let pairs = eigen(alpha, tol).map_err(|_| Error::NotIdempotent("non-diagonalizable block".into()))?;
            if let Some((v, _)) = pairs.iter().find(|(v, _)| !near_band(*v)) {
                return Err(Error::NotIdempotent(format!("{v}")));
            }
            let vecs: Vec<CVector> = pairs.into_iter().map(|(_, v)| v).collect();
            let change = columns(&vecs, m);
            let inv = if is_hermitian(alpha, tol) {
                change.adjoint()
            } else {
                change.clone().try_inverse().ok_or(Error::NotDiagonalizable)?
            };
            (change, inv)
        };
        changed = true;
        let (pm, pinv) = change;
        let old = &blocks.blocks[j].units;
        let mut units = vec![vec![ClassFunction::zero(ring.rank()); m]; m];
        for s in 0..m {
            for t in 0..m {
                let mut acc = ClassFunction::zero(ring.rank());
                for a in 0..m {
                    for b in 0..m {
                        let w = pm[(a, s)] * pinv[(t, b)];
                        if w.norm() > 0.0 {
                            acc = &acc + &old[a][b].scale(w);
                        }
                    }
                }
                units[s][t] = acc;
            }
        }
        out.blocks[j].class_sums = class_sums(ring, &units);
        out.blocks[j].units = units;
    }
    if changed {
        let report = check_blocks(ring, &out);
        if report.max_residual() > IDENTITY_RESIDUAL {
            return Err(Error::SplitFailure(format!("adapted basis broke block invariants: {report:?}")));
        }
    }
    Ok(out)
}

/// Residuals of the structural invariants of a [`BlockStructure`].
#[derive(Clone, Debug, Default, Serialize)]
pub struct BlockCheck {
    /// `F^j_st F^j'_s't' = δ_jj' δ_ts' F^j_st'`.
    pub matrix_units: f64,
    /// `Σ_j Σ_s F^j_ss = ε_1`.
    pub unit_sum: f64,
    /// `τ(F^j_ss) = 1/n_j`.
    pub tau_diagonal: f64,
    /// `summand_dim(j) = dim(C)/n_j` and `Σ_j m_j summand_dim(j) = dim(C)`.
    pub summand_dims: f64,
    /// `C^j_st = F⁻¹(F^j_st)`.
    pub class_sums: f64,
    /// Block 0 is `λ_C` with `m_0 = 1` and summand dimension 1.
    pub first_block: f64,
    pub rank_matches: bool,
}

impl BlockCheck {
    pub fn max_residual(&self) -> f64 {
        let r = [self.matrix_units, self.unit_sum, self.tau_diagonal, self.summand_dims, self.class_sums, self.first_block]
            .into_iter()
            .fold(0.0, f64::max);
        if self.rank_matches {
            r
        } else {
            f64::INFINITY
        }
    }
}

pub fn check_blocks(ring: &FusionRingData, blocks: &BlockStructure) -> BlockCheck {
    let r = ring.rank();
    let dim = ring.global_dim();
    let idx = blocks.unit_indices();
    let mut check = BlockCheck { rank_matches: blocks.rank() == r, ..Default::default() };
    for &(j, s, t) in &idx {
        for &(j2, s2, t2) in &idx {
            let prod = cf_multiply(ring, blocks.unit(j, s, t), blocks.unit(j2, s2, t2));
            let want = if j == j2 && t == s2 { blocks.unit(j, s, t2).clone() } else { ClassFunction::zero(r) };
            check.matrix_units = check.matrix_units.max(prod.dist(&want));
        }
        let cs = fourier_inverse(ring, blocks.unit(j, s, t));
        check.class_sums = check.class_sums.max(cs.dist(blocks.class_sum(j, s, t)));
    }
    let mut sum = ClassFunction::zero(r);
    let mut total_dim = 0.0;
    for b in &blocks.blocks {
        for s in 0..b.multiplicity {
            sum = &sum + &b.units[s][s];
            check.tau_diagonal = check.tau_diagonal.max((tau(&b.units[s][s]) - re(1.0 / b.scale)).norm());
        }
        check.summand_dims = check.summand_dims.max((b.summand_dim - dim / b.scale).abs());
        total_dim += b.multiplicity as f64 * b.summand_dim;
    }
    check.summand_dims = check.summand_dims.max((total_dim - dim).abs());
    check.unit_sum = sum.dist(&unit_class_function(ring));
    check.first_block = match blocks.blocks.first() {
        Some(b) if b.multiplicity == 1 => {
            b.central_idempotent.dist(&cointegral(ring)).max((b.summand_dim - 1.0).abs())
        }
        _ => f64::INFINITY,
    };
    check
}

/// Maximum deviation of `⟨F^j_st, C^i_uv⟩ = δ_ij δ_vs δ_ut dim(C_s^(j))` and
/// `⟨ε_1, C^j_st⟩ = δ_st dim(C_s^(j))`.
pub fn verify_class_sum_pairings(ring: &FusionRingData, blocks: &BlockStructure) -> f64 {
    let idx = blocks.unit_indices();
    let eps1 = unit_class_function(ring);
    let mut worst: f64 = 0.0;
    for &(j, s, t) in &idx {
        let dj = blocks.blocks[j].summand_dim;
        for &(i, u, v) in &idx {
            let got = pairing(ring, blocks.unit(j, s, t), blocks.class_sum(i, u, v));
            let want = if i == j && v == s && u == t { dj } else { 0.0 };
            worst = worst.max((got - re(want)).norm());
        }
        let got = pairing(ring, &eps1, blocks.class_sum(j, s, t));
        let want = if s == t { dj } else { 0.0 };
        worst = worst.max((got - re(want)).norm());
    }
    worst
}

/// `Σ_j Σ_st n_j F^j_st ⊗ F^j_ts` against `Σ_i χ_i ⊗ χ_{i*}`, entrywise.
pub fn verify_dual_bases(ring: &FusionRingData, blocks: &BlockStructure) -> f64 {
    let r = ring.rank();
    let mut lhs = CMatrix::zeros(r, r);
    for &(j, s, t) in &blocks.unit_indices() {
        let n = blocks.blocks[j].scale;
        let a = &blocks.unit(j, s, t).coeffs;
        let b = &blocks.unit(j, t, s).coeffs;
        lhs += a * b.transpose() * re(n);
    }
    let mut rhs = CMatrix::zeros(r, r);
    for i in 0..r {
        rhs[(i, ring.dual(i))] = re(1.0);
    }
    max_abs(&(lhs - rhs))
}

/// `‖dim(C) Λ − Σ_j Σ_s C^j_ss‖∞`.
pub fn verify_integral_classsum(ring: &FusionRingData, blocks: &BlockStructure) -> f64 {
    let mut sum = CentralElement::zero(ring.rank());
    for b in &blocks.blocks {
        for s in 0..b.multiplicity {
            sum = &sum + &b.class_sums[s][s];
        }
    }
    integral(ring).scale(re(ring.global_dim())).dist(&sum)
}
