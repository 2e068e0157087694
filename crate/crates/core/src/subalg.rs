//! Unitary subalgebras of the adjoint algebra and their fusion subcategories.
//!
//! A subalgebra `L` is recorded by the block rows it selects in a matrix basis
//! adapted to its idempotent `ε_L`. Subalgebras are reached from fusion
//! subcategories `D` by adapting to `λ_D`; the way back reads off the simples
//! whose characters restrict to `d_i ε_L`.

use serde::Serialize;

use crate::char_theory::{
    ce_multiply, ce_unit, chi, integral, pairing, subcategory_cointegral, CentralElement, ClassFunction,
};
use crate::error::{Error, Result};
use crate::fusion_ring::{FusionRingData, FusionSubcategory};
use crate::linalg::{distance_to_span, re, subspace_intersection, CVector, Tolerance};
use crate::wedderburn::{
    adapt_to_idempotent, compute_blocks, expand_in_class_sums, expand_in_units, BlockStructure, IDEMPOTENT_BAND,
    IDENTITY_RESIDUAL,
};

/// Entrywise tolerance when comparing normalized restrictions `Res(χ_i)/d_i`.
pub const PARTITION_TOL: f64 = 1e-7;
/// Tolerance on `dim(L)·FPdim(S_L) = dim(C)`.
pub const DIMENSION_TOL: f64 = 1e-6;

/// A fusion ring together with its base block decomposition.
#[derive(Clone, Debug)]
pub struct Category {
    pub ring: FusionRingData,
    pub blocks: BlockStructure,
    pub tol: Tolerance,
    pub seed: u64,
}

impl Category {
    pub fn new(ring: FusionRingData, seed: u64, tol: Tolerance) -> Result<Self> {
        let blocks = compute_blocks(&ring, seed, &tol)?;
        Ok(Category { ring, blocks, tol, seed })
    }

    pub fn rank(&self) -> usize {
        self.ring.rank()
    }
}

/// `L = ⊕_{j} ⊕_{s∈L_j} C_s^(j)` relative to an adapted basis.
#[derive(Clone, Debug)]
pub struct SubalgebraIndex {
    pub basis: BlockStructure,
    /// Selected rows `L_j` of every block (empty when `j ∉ J_L`).
    pub rows: Vec<Vec<usize>>,
    pub dim_l: f64,
    pub ce_dim: usize,
}

impl SubalgebraIndex {
    pub fn contains(&self, j: usize, s: usize) -> bool {
        self.rows[j].contains(&s)
    }

    /// The pairs `(j, s)` making up `J̃_L`.
    pub fn block_rows(&self) -> Vec<(usize, usize)> {
        self.rows.iter().enumerate().flat_map(|(j, r)| r.iter().map(move |&s| (j, s))).collect()
    }
}

pub fn subalgebra_from_subcategory(cat: &Category, d: &FusionSubcategory) -> Result<SubalgebraIndex> {
    let lambda = subcategory_cointegral(&cat.ring, d);
    let basis = adapt_to_idempotent(&cat.ring, &cat.blocks, &lambda, &cat.tol)?;
    let coeffs = expand_in_units(&lambda, &basis, &cat.tol)?;
    let mut rows = Vec::with_capacity(basis.blocks.len());
    let mut dim_l = 0.0;
    let mut ce_dim = 0;
    for (j, alpha) in coeffs.iter().enumerate() {
        let b = &basis.blocks[j];
        let selected: Vec<usize> =
            (0..b.multiplicity).filter(|&s| (alpha[(s, s)] - re(1.0)).norm() <= IDEMPOTENT_BAND).collect();
        dim_l += selected.len() as f64 * b.summand_dim;
        ce_dim += selected.len() * b.multiplicity;
        rows.push(selected);
    }
    if !rows.first().is_some_and(|r| r.contains(&0)) {
        return Err(Error::NotIdempotent("unit summand missing from subalgebra".into()));
    }
    Ok(SubalgebraIndex { basis, rows, dim_l, ce_dim })
}

/// `ε_L = Σ_{(j,t)∈J̃_L} F^j_tt`.
pub fn epsilon_l(l: &SubalgebraIndex) -> ClassFunction {
    let mut out = ClassFunction::zero(l.basis.rank());
    for (j, t) in l.block_rows() {
        out = &out + l.basis.unit(j, t, t);
    }
    out
}

/// Keeps the matrix-unit coefficients of `f` whose column lies in `J̃_L`.
pub fn restrict(cat: &Category, f: &ClassFunction, l: &SubalgebraIndex) -> Result<ClassFunction> {
    let mut coeffs = expand_in_units(f, &l.basis, &cat.tol)?;
    for (j, alpha) in coeffs.iter_mut().enumerate() {
        for t in 0..alpha.ncols() {
            if !l.contains(j, t) {
                alpha.column_mut(t).fill(re(0.0));
            }
        }
    }
    Ok(l.basis.assemble(&coeffs))
}

fn normalized_restrictions(cat: &Category, l: &SubalgebraIndex) -> Result<Vec<ClassFunction>> {
    (0..cat.rank())
        .map(|i| Ok(restrict(cat, &chi(&cat.ring, i), l)?.scale(re(1.0 / cat.ring.dim(i)))))
        .collect()
}

/// `S_L = {i : Res(χ_i) = d_i ε_L}`.
pub fn subcategory_from_subalgebra(cat: &Category, l: &SubalgebraIndex) -> Result<FusionSubcategory> {
    let eps = epsilon_l(l);
    let indices: Vec<usize> = normalized_restrictions(cat, l)?
        .iter()
        .enumerate()
        .filter(|(_, r)| r.dist(&eps) <= PARTITION_TOL)
        .map(|(i, _)| i)
        .collect();
    if !cat.ring.is_subcategory(&indices) {
        return Err(Error::ClosureViolation(indices));
    }
    let fpdim = indices.iter().map(|&i| cat.ring.dim(i).powi(2)).sum();
    Ok(FusionSubcategory { indices, fpdim })
}

/// Classes of simples with equal normalized restriction, and the idempotents
/// `ℓ_s = Σ_{i∈B_s} E_i` they induce in `CE(L)`.
#[derive(Clone, Debug, Serialize)]
pub struct Partition {
    pub classes: Vec<Vec<usize>>,
    pub idempotents: Vec<CentralElement>,
}

pub fn block_partition(cat: &Category, l: &SubalgebraIndex) -> Result<Partition> {
    let restricted = normalized_restrictions(cat, l)?;
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (i, v) in restricted.iter().enumerate() {
        match classes.iter_mut().find(|c| restricted[c[0]].dist(v) <= PARTITION_TOL) {
            Some(c) => c.push(i),
            None => classes.push(vec![i]),
        }
    }
    let r = cat.rank();
    let idempotents: Vec<CentralElement> = classes
        .iter()
        .map(|c| {
            let mut v = CVector::zeros(r);
            for &i in c {
                v[i] = re(1.0);
            }
            CentralElement::new(v)
        })
        .collect();
    if classes.len() != l.ce_dim {
        return Err(Error::PartitionMismatch(format!(
            "{} classes but CE(L) has dimension {}",
            classes.len(),
            l.ce_dim
        )));
    }
    let span: Vec<CVector> = ce_basis_unchecked(l).into_iter().map(|c| c.coeffs).collect();
    for (c, e) in classes.iter().zip(&idempotents) {
        let dist = distance_to_span(&e.coeffs, &span, &cat.tol);
        if dist > IDENTITY_RESIDUAL * cat.ring.global_dim().max(1.0) {
            return Err(Error::PartitionMismatch(format!("idempotent of class {c:?} lies {dist:.3e} away from CE(L)")));
        }
    }
    Ok(Partition { classes, idempotents })
}

fn ce_basis_unchecked(l: &SubalgebraIndex) -> Vec<CentralElement> {
    let mut out = Vec::with_capacity(l.ce_dim);
    for (j, s) in l.block_rows() {
        for t in 0..l.basis.blocks[j].multiplicity {
            out.push(l.basis.class_sum(j, s, t).clone());
        }
    }
    out
}

/// Class sums `C^j_st` with `(j, s) ∈ J̃_L`, spanning `CE(L)`.
pub fn ce_basis(cat: &Category, l: &SubalgebraIndex) -> Result<Vec<CentralElement>> {
    let basis = ce_basis_unchecked(l);
    let span: Vec<CVector> = basis.iter().map(|c| c.coeffs.clone()).collect();
    let scale = cat.ring.global_dim().powi(2).max(1.0);
    let mut worst = distance_to_span(&ce_unit(&cat.ring).coeffs, &span, &cat.tol);
    for (a, x) in basis.iter().enumerate() {
        for y in &basis[a..] {
            worst = worst.max(distance_to_span(&ce_multiply(x, y).coeffs, &span, &cat.tol));
        }
    }
    if worst > IDENTITY_RESIDUAL * scale {
        return Err(Error::ClosureFailure(worst));
    }
    Ok(basis)
}

/// Projection of `CE(C)` onto `CE(L)` along the remaining class sums.
pub fn pi_down(cat: &Category, z: &CentralElement, l: &SubalgebraIndex) -> Result<CentralElement> {
    let mut coeffs = expand_in_class_sums(z, &l.basis, &cat.tol)?;
    for (j, alpha) in coeffs.iter_mut().enumerate() {
        for s in 0..alpha.nrows() {
            if !l.contains(j, s) {
                alpha.row_mut(s).fill(re(0.0));
            }
        }
    }
    let mut out = CentralElement::zero(cat.rank());
    for (j, s, t) in l.basis.unit_indices() {
        out = &out + &l.basis.class_sum(j, s, t).scale(coeffs[j][(s, t)]);
    }
    Ok(out)
}

/// `LM`, the subalgebra of `S_L ∩ S_M`.
pub fn product_subalgebra(cat: &Category, l: &SubalgebraIndex, m: &SubalgebraIndex) -> Result<SubalgebraIndex> {
    let sl = subcategory_from_subalgebra(cat, l)?;
    let sm = subcategory_from_subalgebra(cat, m)?;
    subalgebra_from_subcategory(cat, &cat.ring.subcategory_meet(&sl, &sm))
}

/// `L ∩ M`, the subalgebra of `S_L ∨ S_M`, checked against the intersection
/// of the `CE` subspaces.
pub fn intersect_subalgebra(cat: &Category, l: &SubalgebraIndex, m: &SubalgebraIndex) -> Result<SubalgebraIndex> {
    let sl = subcategory_from_subalgebra(cat, l)?;
    let sm = subcategory_from_subalgebra(cat, m)?;
    let joined = subalgebra_from_subcategory(cat, &cat.ring.subcategory_join(&sl, &sm))?;
    let found = ce_intersection_dim(cat, l, m)?;
    if found != joined.ce_dim {
        return Err(Error::CeIntersectionMismatch { expected: joined.ce_dim, found });
    }
    Ok(joined)
}

fn ce_vectors(cat: &Category, l: &SubalgebraIndex) -> Result<Vec<CVector>> {
    Ok(ce_basis(cat, l)?.into_iter().map(|c| c.coeffs).collect())
}

fn ce_intersection_dim(cat: &Category, l: &SubalgebraIndex, m: &SubalgebraIndex) -> Result<usize> {
    Ok(subspace_intersection(&ce_vectors(cat, l)?, &ce_vectors(cat, m)?, &cat.tol)?.len())
}

#[derive(Clone, Debug, Serialize)]
pub struct DimInequality {
    /// `dim(LM)`.
    pub lhs: f64,
    /// `dim(L) dim(M) / dim(L ∩ M)`.
    pub rhs: f64,
    /// Whether `S_L S_M` and `S_M S_L` coincide as sets of simples.
    pub equal: bool,
}

/// `dim(LM) ≤ dim(L) dim(M) / dim(L ∩ M)`, with equality demanded when the
/// fusion ring is commutative.
pub fn verify_dim_inequality(cat: &Category, l: &SubalgebraIndex, m: &SubalgebraIndex) -> Result<DimInequality> {
    let lm = product_subalgebra(cat, l, m)?;
    let cap = intersect_subalgebra(cat, l, m)?;
    let lhs = lm.dim_l;
    let rhs = l.dim_l * m.dim_l / cap.dim_l;
    let sl = subcategory_from_subalgebra(cat, l)?;
    let sm = subcategory_from_subalgebra(cat, m)?;
    let equal = cat.ring.subcategory_product(&sl, &sm).0 == cat.ring.subcategory_product(&sm, &sl).0;
    let slack = IDENTITY_RESIDUAL * rhs.max(1.0);
    if lhs > rhs + slack || (cat.ring.is_commutative() && (lhs - rhs).abs() > slack) {
        return Err(Error::InequalityViolation { lhs, rhs });
    }
    Ok(DimInequality { lhs, rhs, equal })
}

/// Residuals for the trace identity `dim(C)/dim(D) = Σ β^j_ss dim(C_s^(j))`
/// and for the off-diagonal vanishing of `λ_D` in its adapted basis.
#[derive(Clone, Debug, Serialize)]
pub struct CointegralTrace {
    pub trace_residual: f64,
    pub off_diagonal: f64,
    /// Largest distance of an adapted diagonal coefficient from `{0, 1}`.
    pub diagonal_pattern: f64,
}

pub fn verify_cointegral_trace(cat: &Category, d: &FusionSubcategory) -> Result<CointegralTrace> {
    let lambda = subcategory_cointegral(&cat.ring, d);
    let coeffs = expand_in_units(&lambda, &cat.blocks, &cat.tol)?;
    let weighted: f64 = coeffs
        .iter()
        .zip(&cat.blocks.blocks)
        .map(|(a, b)| a.trace().re * b.summand_dim)
        .sum();
    let trace_residual = (weighted - cat.ring.global_dim() / d.fpdim).abs();

    let adapted = adapt_to_idempotent(&cat.ring, &cat.blocks, &lambda, &cat.tol)?;
    let coeffs = expand_in_units(&lambda, &adapted, &cat.tol)?;
    let mut off_diagonal: f64 = 0.0;
    let mut diagonal_pattern: f64 = 0.0;
    for a in &coeffs {
        for s in 0..a.nrows() {
            for t in 0..a.ncols() {
                if s == t {
                    let z = a[(s, t)];
                    diagonal_pattern = diagonal_pattern.max(z.norm().min((z - re(1.0)).norm()));
                } else {
                    off_diagonal = off_diagonal.max(a[(s, t)].norm());
                }
            }
        }
    }
    Ok(CointegralTrace { trace_residual, off_diagonal, diagonal_pattern })
}

/// `‖ℓ_0 − (FPdim(S_L)/dim C) Σ_{(j,s)∈J̃_L} C^j_ss‖∞`.
pub fn verify_ell_zero(cat: &Category, l: &SubalgebraIndex, partition: &Partition) -> Result<f64> {
    let sl = subcategory_from_subalgebra(cat, l)?;
    let mut sum = CentralElement::zero(cat.rank());
    for (j, s) in l.block_rows() {
        sum = &sum + l.basis.class_sum(j, s, s);
    }
    Ok(partition.idempotents[0].dist(&sum.scale(re(sl.fpdim / cat.ring.global_dim()))))
}

/// `|π↓(Λ) − ℓ_0 / FPdim(S_L)|`.
pub fn verify_pi_down_integral(cat: &Category, l: &SubalgebraIndex, partition: &Partition) -> Result<f64> {
    let sl = subcategory_from_subalgebra(cat, l)?;
    let down = pi_down(cat, &integral(&cat.ring), l)?;
    Ok(down.dist(&partition.idempotents[0].scale(re(1.0 / sl.fpdim))))
}

/// `|⟨ε_L, ℓ_0⟩ − 1|`.
pub fn verify_unit_normalization(cat: &Category, l: &SubalgebraIndex, partition: &Partition) -> f64 {
    (pairing(&cat.ring, &epsilon_l(l), &partition.idempotents[0]) - re(1.0)).norm()
}

/// Max over simples `χ_i` and class sums `z ∈ CE(L)` of
/// `|⟨Res(χ_i), z⟩ − ⟨χ_i, z⟩|`.
pub fn verify_restriction_pairing(cat: &Category, l: &SubalgebraIndex) -> Result<f64> {
    let basis = ce_basis(cat, l)?;
    let mut worst: f64 = 0.0;
    for i in 0..cat.rank() {
        let c = chi(&cat.ring, i);
        let res = restrict(cat, &c, l)?;
        for z in &basis {
            worst = worst.max((pairing(&cat.ring, &res, z) - pairing(&cat.ring, &c, z)).norm());
        }
    }
    Ok(worst)
}

/// Max over pairs in the same (different) partition class of the failure of
/// `Res(χ_i)/d_i = Res(χ_j)/d_j` (resp. its negation).
pub fn verify_partition_classes(cat: &Category, l: &SubalgebraIndex, partition: &Partition) -> Result<bool> {
    let restricted = normalized_restrictions(cat, l)?;
    let class_of = |i: usize| partition.classes.iter().position(|c| c.contains(&i)).unwrap();
    for i in 0..cat.rank() {
        for j in 0..cat.rank() {
            let same = restricted[i].dist(&restricted[j]) <= PARTITION_TOL;
            if same != (class_of(i) == class_of(j)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Debug)]
pub struct LatticeEntry {
    pub subcategory: FusionSubcategory,
    pub subalgebra: SubalgebraIndex,
    pub partition: Partition,
}

/// Subcategories, their subalgebras, and covering relations `(smaller, larger)`
/// among the subcategories.
#[derive(Clone, Debug)]
pub struct Lattice {
    pub entries: Vec<LatticeEntry>,
    pub hasse: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LatticeRow {
    pub subcategory_indices: Vec<usize>,
    pub subcategory_fpdim: f64,
    pub subalgebra_dim: f64,
    pub ce_dim: usize,
    pub block_rows: Vec<(usize, usize)>,
    pub partition: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LatticeReport {
    pub entries: Vec<LatticeRow>,
    pub hasse: Vec<(usize, usize)>,
}

impl Lattice {
    pub fn report(&self) -> LatticeReport {
        LatticeReport {
            entries: self
                .entries
                .iter()
                .map(|e| LatticeRow {
                    subcategory_indices: e.subcategory.indices.clone(),
                    subcategory_fpdim: e.subcategory.fpdim,
                    subalgebra_dim: e.subalgebra.dim_l,
                    ce_dim: e.subalgebra.ce_dim,
                    block_rows: e.subalgebra.block_rows(),
                    partition: e.partition.classes.clone(),
                })
                .collect(),
            hasse: self.hasse.clone(),
        }
    }
}

/// Builds the subcategory/subalgebra correspondence and checks the round
/// trip, injectivity on `CE(L)` and order reversal.
pub fn build_lattice(cat: &Category) -> Result<Lattice> {
    let subs = cat.ring.enumerate_subcategories()?;
    let mut entries = Vec::with_capacity(subs.len());
    for d in subs {
        let l = subalgebra_from_subcategory(cat, &d)?;
        let back = subcategory_from_subalgebra(cat, &l)?;
        if back.indices != d.indices {
            return Err(Error::RoundTripFailure(d.indices));
        }
        let partition = block_partition(cat, &l)?;
        entries.push(LatticeEntry { subcategory: d, subalgebra: l, partition });
    }

    let spans: Vec<Vec<CVector>> =
        entries.iter().map(|e| ce_vectors(cat, &e.subalgebra)).collect::<Result<_>>()?;
    for a in 0..entries.len() {
        for b in a + 1..entries.len() {
            let common = subspace_intersection(&spans[a], &spans[b], &cat.tol)?.len();
            let (da, db) = (spans[a].len(), spans[b].len());
            if common == da && common == db {
                return Err(Error::RoundTripFailure(entries[b].subcategory.indices.clone()));
            }
            for (small, large, d_large) in [(a, b, db), (b, a, da)] {
                if entries[small].subcategory.is_subset_of(&entries[large].subcategory) && common != d_large {
                    return Err(Error::MonotonicityFailure(format!(
                        "{:?} ⊆ {:?} but CE spans are not reversed",
                        entries[small].subcategory.indices, entries[large].subcategory.indices
                    )));
                }
            }
        }
    }

    let n = entries.len();
    let below = |a: usize, b: usize| {
        a != b && entries[a].subcategory.is_subset_of(&entries[b].subcategory)
    };
    let mut hasse = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if below(a, b) && !(0..n).any(|c| below(a, c) && below(c, b)) {
                hasse.push((a, b));
            }
        }
    }
    Ok(Lattice { entries, hasse })
}
