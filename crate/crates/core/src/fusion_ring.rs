//! Fusion ring data: fusion coefficients, duality, Frobenius-Perron dimensions,
//! and fusion subcategories as closed sets of simple objects.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{eigen, re, CMatrix, Tolerance};

/// Closure calls allowed during subcategory enumeration.
pub const MAX_CLOSURE_CALLS: usize = 1_000_000;

/// The on-disk form of a fusion ring; dimensions are never read from input.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RawFusionRing {
    pub labels: Vec<String>,
    pub dual: Vec<usize>,
    #[serde(rename = "N")]
    pub n: Vec<Vec<Vec<u32>>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Axiom {
    Shape,
    Unit,
    Duality,
    Involution,
    Associativity,
    FrobeniusReciprocity,
    Perron,
    DimensionHomomorphism,
    Sphericality,
    GlobalDimension,
}

/// A failed ring axiom together with the indices where it fails.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub axiom: Axiom,
    pub indices: Vec<usize>,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} at {:?}: {}", self.axiom, self.indices, self.detail)
    }
}

fn violation(axiom: Axiom, indices: &[usize], detail: impl Into<String>) -> Violation {
    Violation { axiom, indices: indices.to_vec(), detail: detail.into() }
}

/// A validated fusion ring with its Frobenius-Perron dimensions.
#[derive(Clone, Debug, PartialEq)]
pub struct FusionRingData {
    labels: Vec<String>,
    dual: Vec<usize>,
    coeffs: Vec<u32>,
    dims: Vec<f64>,
    global_dim: f64,
}

impl FusionRingData {
    pub fn from_raw(raw: RawFusionRing, tol: &Tolerance) -> Result<Self> {
        let violations = validate(&raw, tol);
        if !violations.is_empty() {
            return Err(Error::InvalidRing(violations));
        }
        let rank = raw.labels.len();
        let coeffs = flatten(&raw.n);
        let (dims, global_dim) = fp_dims(rank, &coeffs, tol)?;
        Ok(FusionRingData { labels: raw.labels, dual: raw.dual, coeffs, dims, global_dim })
    }

    pub fn from_json(text: &str, tol: &Tolerance) -> Result<Self> {
        let raw: RawFusionRing = serde_json::from_str(text)?;
        Self::from_raw(raw, tol)
    }

    pub fn to_raw(&self) -> RawFusionRing {
        let r = self.rank();
        let n = (0..r)
            .map(|i| (0..r).map(|j| (0..r).map(|k| self.n(i, j, k)).collect()).collect())
            .collect();
        RawFusionRing { labels: self.labels.clone(), dual: self.dual.clone(), n }
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Multiplicity of `V_k` in `V_i ⊗ V_j`.
    #[inline]
    pub fn n(&self, i: usize, j: usize, k: usize) -> u32 {
        let r = self.rank();
        self.coeffs[(i * r + j) * r + k]
    }

    pub fn dual(&self, i: usize) -> usize {
        self.dual[i]
    }

    pub fn duals(&self) -> &[usize] {
        &self.dual
    }

    pub fn dim(&self, i: usize) -> f64 {
        self.dims[i]
    }

    pub fn dims(&self) -> &[f64] {
        &self.dims
    }

    pub fn global_dim(&self) -> f64 {
        self.global_dim
    }

    pub fn is_commutative(&self) -> bool {
        let r = self.rank();
        (0..r).all(|i| (0..r).all(|j| (0..r).all(|k| self.n(i, j, k) == self.n(j, i, k))))
    }

    /// Fusion matrix of left multiplication by `V_i`: entry `(k, j)` is `N_ij^k`.
    pub fn fusion_matrix(&self, i: usize) -> CMatrix {
        let r = self.rank();
        CMatrix::from_fn(r, r, |k, j| re(self.n(i, j, k) as f64))
    }

    fn subcategory(&self, indices: BTreeSet<usize>) -> FusionSubcategory {
        let indices: Vec<usize> = indices.into_iter().collect();
        let fpdim = indices.iter().map(|&i| self.dims[i] * self.dims[i]).sum();
        FusionSubcategory { indices, fpdim }
    }

    /// Smallest fusion subcategory containing `seeds`.
    pub fn subcategory_closure(&self, seeds: &[usize]) -> FusionSubcategory {
        let set = self.close(seeds.iter().copied().chain([0]).collect());
        self.subcategory(set)
    }

    fn close(&self, mut set: BTreeSet<usize>) -> BTreeSet<usize> {
        let r = self.rank();
        loop {
            let mut next = set.clone();
            for &i in &set {
                next.insert(self.dual[i]);
                for &j in &set {
                    next.extend((0..r).filter(|&k| self.n(i, j, k) > 0));
                }
            }
            if next.len() == set.len() {
                return set;
            }
            set = next;
        }
    }

    pub fn is_subcategory(&self, indices: &[usize]) -> bool {
        let set: BTreeSet<usize> = indices.iter().copied().collect();
        set.contains(&0) && self.close(set.clone()) == set
    }

    /// Every fusion subcategory, by breadth-first extension from `{0}`,
    /// sorted by Frobenius-Perron dimension and then index set.
    pub fn enumerate_subcategories(&self) -> Result<Vec<FusionSubcategory>> {
        let r = self.rank();
        let start = self.close(BTreeSet::from([0]));
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        seen.insert(start.iter().copied().collect());
        let mut queue = VecDeque::from([start]);
        let mut calls = 0usize;
        while let Some(current) = queue.pop_front() {
            for s in 0..r {
                if current.contains(&s) {
                    continue;
                }
                calls += 1;
                if calls > MAX_CLOSURE_CALLS {
                    return Err(Error::EnumerationBound(MAX_CLOSURE_CALLS));
                }
                let mut grown = current.clone();
                grown.insert(s);
                let closed = self.close(grown);
                if seen.insert(closed.iter().copied().collect()) {
                    queue.push_back(closed);
                }
            }
        }
        let mut subs: Vec<FusionSubcategory> =
            seen.into_iter().map(|v| self.subcategory(v.into_iter().collect())).collect();
        subs.sort_by_key(|a| a.sort_key());
        Ok(subs)
    }

    pub fn subcategory_meet(&self, a: &FusionSubcategory, b: &FusionSubcategory) -> FusionSubcategory {
        let set: BTreeSet<usize> = a.indices.iter().filter(|i| b.contains(**i)).copied().collect();
        self.subcategory(set)
    }

    pub fn subcategory_join(&self, a: &FusionSubcategory, b: &FusionSubcategory) -> FusionSubcategory {
        let seeds: Vec<usize> = a.indices.iter().chain(&b.indices).copied().collect();
        self.subcategory_closure(&seeds)
    }

    /// The simples occurring in `X ⊗ Y` for `X ∈ a`, `Y ∈ b`, and whether that
    /// set is itself a fusion subcategory.
    pub fn subcategory_product(&self, a: &FusionSubcategory, b: &FusionSubcategory) -> (Vec<usize>, bool) {
        let r = self.rank();
        let mut set = BTreeSet::new();
        for &i in &a.indices {
            for &j in &b.indices {
                set.extend((0..r).filter(|&k| self.n(i, j, k) > 0));
            }
        }
        let v: Vec<usize> = set.into_iter().collect();
        let closed = self.is_subcategory(&v);
        (v, closed)
    }
}

fn flatten(n: &[Vec<Vec<u32>>]) -> Vec<u32> {
    n.iter().flat_map(|a| a.iter().flat_map(|b| b.iter().copied())).collect()
}

/// A fusion subcategory, recorded by its sorted set of simple indices.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FusionSubcategory {
    pub indices: Vec<usize>,
    pub fpdim: f64,
}

impl FusionSubcategory {
    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    pub fn is_subset_of(&self, other: &FusionSubcategory) -> bool {
        self.indices.iter().all(|&i| other.contains(i))
    }

    fn sort_key(&self) -> (i64, Vec<usize>) {
        ((self.fpdim * 1e6).round() as i64, self.indices.clone())
    }
}

/// Checks every ring axiom; an empty result means the data is a valid
/// pseudo-unitary fusion ring.
pub fn validate(raw: &RawFusionRing, tol: &Tolerance) -> Vec<Violation> {
    use Axiom::*;
    let r = raw.labels.len();
    let mut out = Vec::new();
    if r == 0 {
        out.push(violation(Shape, &[], "rank must be positive"));
        return out;
    }
    if raw.dual.len() != r {
        out.push(violation(Shape, &[], format!("dual has length {}, expected {r}", raw.dual.len())));
    }
    if raw.n.len() != r || raw.n.iter().any(|a| a.len() != r || a.iter().any(|b| b.len() != r)) {
        out.push(violation(Shape, &[], format!("N must be {r}x{r}x{r}")));
    }
    if let Some(i) = raw.dual.iter().position(|&d| d >= r) {
        out.push(violation(Shape, &[i], "dual index out of range"));
    }
    if !out.is_empty() {
        return out;
    }
    let n = |i: usize, j: usize, k: usize| raw.n[i][j][k];
    let d = &raw.dual;

    for j in 0..r {
        for k in 0..r {
            let want = u32::from(j == k);
            if n(0, j, k) != want {
                out.push(violation(Unit, &[0, j, k], format!("N[0][{j}][{k}] = {}, expected {want}", n(0, j, k))));
            }
            if n(j, 0, k) != want {
                out.push(violation(Unit, &[j, 0, k], format!("N[{j}][0][{k}] = {}, expected {want}", n(j, 0, k))));
            }
        }
    }
    if d[0] != 0 {
        out.push(violation(Involution, &[0], "dual of the unit must be the unit"));
    }
    for i in 0..r {
        if d[d[i]] != i {
            out.push(violation(Involution, &[i], format!("dual(dual({i})) = {}", d[d[i]])));
        }
        for j in 0..r {
            let want = u32::from(j == d[i]);
            if n(i, j, 0) != want {
                out.push(violation(Duality, &[i, j], format!("N[{i}][{j}][0] = {}, expected {want}", n(i, j, 0))));
            }
        }
    }
    for i in 0..r {
        for j in 0..r {
            for l in 0..r {
                for p in 0..r {
                    let left: u64 = (0..r).map(|k| n(i, j, k) as u64 * n(k, l, p) as u64).sum();
                    let right: u64 = (0..r).map(|k| n(j, l, k) as u64 * n(i, k, p) as u64).sum();
                    if left != right {
                        out.push(violation(
                            Associativity,
                            &[i, j, l, p],
                            format!("(ij)l has {left} copies of {p}, i(jl) has {right}"),
                        ));
                    }
                }
            }
        }
    }
    if !out.iter().any(|v| v.axiom == Involution) {
        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    if n(i, j, k) != n(d[i], k, j) {
                        out.push(violation(
                            FrobeniusReciprocity,
                            &[i, j, k],
                            format!("N[{i}][{j}][{k}] != N[{}][{k}][{j}]", d[i]),
                        ));
                    }
                }
            }
        }
    }
    if !out.is_empty() {
        return out;
    }

    let coeffs = flatten(&raw.n);
    let (dims, global) = match fp_dims(r, &coeffs, tol) {
        Ok(x) => x,
        Err(e) => {
            out.push(violation(Perron, &[], e.to_string()));
            return out;
        }
    };
    for i in 0..r {
        if dims[i] < 1.0 - 1e-9 {
            out.push(violation(Perron, &[i], format!("d_{i} = {} < 1", dims[i])));
        }
        for j in 0..r {
            let lhs = dims[i] * dims[j];
            let rhs: f64 = (0..r).map(|k| n(i, j, k) as f64 * dims[k]).sum();
            if !close_loose(lhs, rhs, tol) {
                out.push(violation(DimensionHomomorphism, &[i, j], format!("d_i d_j = {lhs}, Σ N d = {rhs}")));
            }
        }
        if !close_loose(dims[i], dims[d[i]], tol) {
            out.push(violation(Sphericality, &[i], format!("d_{i} = {} but its dual has {}", dims[i], dims[d[i]])));
        }
    }
    let sum_sq: f64 = dims.iter().map(|x| x * x).sum();
    if !close_loose(global, sum_sq, tol) {
        out.push(violation(GlobalDimension, &[], format!("{global} != {sum_sq}")));
    }
    out
}

fn close_loose(a: f64, b: f64, tol: &Tolerance) -> bool {
    (a - b).abs() <= 1e3 * tol.bound(a.abs().max(b.abs()))
}

/// Frobenius-Perron dimensions: the Perron eigenvector of `Σ_i N_i^T`,
/// normalized so that `d_0 = 1`, and `dim = Σ d_i²`.
pub fn fp_dims(rank: usize, coeffs: &[u32], tol: &Tolerance) -> Result<(Vec<f64>, f64)> {
    let r = rank;
    let at = |i: usize, j: usize, k: usize| coeffs[(i * r + j) * r + k] as f64;
    // d_i d_j = Σ_k N_ij^k d_k summed over i: (Σ d_i) d_j = Σ_k S[j][k] d_k.
    let s = CMatrix::from_fn(r, r, |j, k| re((0..r).map(|i| at(i, j, k)).sum()));
    let pairs = eigen(&s, tol).map_err(|e| Error::PerronFailure(e.to_string()))?;
    let (_, v) = pairs
        .into_iter()
        .max_by(|a, b| a.0.re.total_cmp(&b.0.re))
        .ok_or_else(|| Error::PerronFailure("empty ring".into()))?;
    if v[0].norm() == 0.0 {
        return Err(Error::PerronFailure("Perron vector vanishes on the unit".into()));
    }
    let scaled: Vec<_> = v.iter().map(|z| z / v[0]).collect();
    if scaled.iter().any(|z| z.im.abs() > 1e-8 || z.re <= 0.0) {
        return Err(Error::PerronFailure(format!("Perron vector has non-positive entries: {scaled:?}")));
    }
    let dims: Vec<f64> = scaled.iter().map(|z| z.re).collect();
    for i in 0..r {
        for j in 0..r {
            let rhs: f64 = (0..r).map(|k| at(i, j, k) * dims[k]).sum();
            let lhs = dims[i] * dims[j];
            if (lhs - rhs).abs() > 1e3 * tol.bound(lhs.abs()) {
                return Err(Error::PerronFailure(format!(
                    "d_{i} d_{j} = {lhs} but Σ_k N d_k = {rhs}"
                )));
            }
        }
    }
    let global = dims.iter().map(|x| x * x).sum();
    Ok((dims, global))
}
