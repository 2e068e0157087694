//! Finite groups as an independent oracle: `Rep(G)` and `Vec_G` fusion rings,
//! character tables, subgroup lattices and the cross-checks tying normal
//! subgroups to subalgebras.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fusion_ring::{FusionRingData, FusionSubcategory, RawFusionRing};
use crate::linalg::{common_eigenbasis, distance_to_span, max_abs_vec, rank, re, snap_real, CMatrix, CVector, C64, Tolerance};
use crate::subalg::{
    block_partition, ce_basis, subalgebra_from_subcategory, subcategory_from_subalgebra, Category, DIMENSION_TOL,
    PARTITION_TOL,
};
use crate::wedderburn::IDENTITY_RESIDUAL;

/// Largest order accepted by the `symmetric` and `alternating` builtins.
pub const MAX_PERMUTATION_DEGREE: usize = 5;
/// Tolerance for both orthogonality relations of a character table.
pub const ORTHOGONALITY_TOL: f64 = 1e-7;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupFile {
    pub elements: Vec<String>,
    pub table: Vec<Vec<usize>>,
}

#[derive(Clone, Debug)]
pub struct FiniteGroup {
    names: Vec<String>,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
}

impl FiniteGroup {
    /// Validates a multiplication table with `table[i][j]` the index of `g_i g_j`.
    pub fn from_table(names: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::BadTable("empty group".into()));
        }
        if table.len() != n || table.iter().any(|row| row.len() != n) {
            return Err(Error::BadTable(format!("table must be {n}x{n}")));
        }
        if let Some(bad) = table.iter().flatten().find(|&&x| x >= n) {
            return Err(Error::BadTable(format!("entry {bad} out of range")));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| table[e][g] == g && table[g][e] == g))
            .ok_or_else(|| Error::BadTable("no identity element".into()))?;
        let mut inverse = Vec::with_capacity(n);
        for g in 0..n {
            let h = (0..n)
                .find(|&h| table[g][h] == identity && table[h][g] == identity)
                .ok_or_else(|| Error::BadTable(format!("{} has no inverse", names[g])))?;
            inverse.push(h);
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::BadTable(format!(
                            "({0}{1}){2} != {0}({1}{2})",
                            names[a], names[b], names[c]
                        )));
                    }
                }
            }
        }
        let mut class_of = vec![usize::MAX; n];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for x in std::iter::once(identity).chain(0..n) {
            if class_of[x] != usize::MAX {
                continue;
            }
            let class: BTreeSet<usize> = (0..n).map(|g| table[table[g][x]][inverse[g]]).collect();
            for &y in &class {
                class_of[y] = classes.len();
            }
            classes.push(class.into_iter().collect());
        }
        Ok(FiniteGroup { names, table, identity, inverse, classes, class_of })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: GroupFile = serde_json::from_str(text)?;
        Self::from_table(file.elements, file.table)
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn inverse(&self, g: usize) -> usize {
        self.inverse[g]
    }

    /// Conjugacy classes: the identity first, then by smallest element index.
    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_of(&self, g: usize) -> usize {
        self.class_of[g]
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.table[a][b] == self.table[b][a]))
    }

    pub fn to_file(&self) -> GroupFile {
        GroupFile { elements: self.names.clone(), table: self.table.clone() }
    }

    fn closure(&self, seeds: impl IntoIterator<Item = usize>) -> BTreeSet<usize> {
        let mut set: BTreeSet<usize> = seeds.into_iter().chain([self.identity]).collect();
        loop {
            let next: BTreeSet<usize> =
                set.iter().flat_map(|&a| set.iter().map(move |&b| (a, b))).map(|(a, b)| self.table[a][b]).collect();
            let grown: BTreeSet<usize> = set.union(&next).copied().collect();
            if grown.len() == set.len() {
                return set;
            }
            set = grown;
        }
    }

    pub fn is_normal(&self, h: &[usize]) -> bool {
        let set: BTreeSet<usize> = h.iter().copied().collect();
        (0..self.order()).all(|g| h.iter().all(|&x| set.contains(&self.table[self.table[g][x]][self.inverse[g]])))
    }
}

/// Parses a builtin group name, or reads a JSON group file when `source` is
/// not one.
pub fn parse_group(source: &str) -> Result<FiniteGroup> {
    match builtin(source) {
        Err(Error::UnknownBuiltin(_)) if std::path::Path::new(source).is_file() => {
            FiniteGroup::from_json(&std::fs::read_to_string(source)?)
        }
        other => other,
    }
}

/// Builtins: `cyclic:n`, `dihedral:2n`, `symmetric:n`, `alternating:n`
/// (`n ≤ 5`), `quaternion:8` and `product:A×B` (also `*` or `x`).
pub fn builtin(name: &str) -> Result<FiniteGroup> {
    let unknown = || Error::UnknownBuiltin(name.to_string());
    let (kind, arg) = name.split_once(':').ok_or_else(unknown)?;
    if kind == "product" {
        let (pos, sep) = ['×', '*', 'x'].iter().filter_map(|s| arg.find(*s).map(|p| (p, *s))).min().ok_or_else(unknown)?;
        let (left, right) = (&arg[..pos], &arg[pos + sep.len_utf8()..]);
        let a = builtin(left)?;
        let b = if !right.starts_with("product:") && right.contains(['×', '*', 'x']) {
            builtin(&format!("product:{right}"))?
        } else {
            builtin(right)?
        };
        return direct_product(&a, &b);
    }
    let n: usize = arg.trim().parse().map_err(|_| unknown())?;
    match kind {
        "cyclic" if n >= 1 => cyclic(n),
        "dihedral" if n >= 2 && n.is_multiple_of(2) => dihedral(n / 2),
        "symmetric" if (1..=MAX_PERMUTATION_DEGREE).contains(&n) => permutation_group(n, false),
        "alternating" if (1..=MAX_PERMUTATION_DEGREE).contains(&n) => permutation_group(n, true),
        "quaternion" if n == 8 => quaternion(),
        _ => Err(unknown()),
    }
}

fn power_name(base: &str, k: usize) -> String {
    match k {
        0 => String::new(),
        1 => base.to_string(),
        _ => format!("{base}^{k}"),
    }
}

fn cyclic(n: usize) -> Result<FiniteGroup> {
    let names = (0..n).map(|k| if k == 0 { "e".into() } else { power_name("a", k) }).collect();
    let table = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
    FiniteGroup::from_table(names, table)
}

/// Dihedral group of order `2n`, elements `r^k s^f` at index `k + n f`.
fn dihedral(n: usize) -> Result<FiniteGroup> {
    let names = (0..2 * n)
        .map(|x| {
            let (k, f) = (x % n, x / n);
            let s = format!("{}{}", power_name("r", k), if f == 1 { "s" } else { "" });
            if s.is_empty() {
                "e".into()
            } else {
                s
            }
        })
        .collect();
    let table = (0..2 * n)
        .map(|x| {
            (0..2 * n)
                .map(|y| {
                    let (a, e) = (x % n, x / n);
                    let (b, f) = (y % n, y / n);
                    let k = if e == 0 { (a + b) % n } else { (a + n - b) % n };
                    k + n * ((e + f) % 2)
                })
                .collect()
        })
        .collect();
    FiniteGroup::from_table(names, table)
}

fn quaternion() -> Result<FiniteGroup> {
    // Units 1, i, j, k as (sign, unit) with unit products from Hamilton's rules.
    const UNIT: [[(i8, usize); 4]; 4] = [
        [(1, 0), (1, 1), (1, 2), (1, 3)],
        [(1, 1), (-1, 0), (1, 3), (-1, 2)],
        [(1, 2), (-1, 3), (-1, 0), (1, 1)],
        [(1, 3), (1, 2), (-1, 1), (-1, 0)],
    ];
    let names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"].map(String::from).to_vec();
    let decode = |x: usize| (if x.is_multiple_of(2) { 1i8 } else { -1 }, x / 2);
    let table = (0..8)
        .map(|x| {
            (0..8)
                .map(|y| {
                    let (sx, ux) = decode(x);
                    let (sy, uy) = decode(y);
                    let (s, u) = UNIT[ux][uy];
                    2 * u + usize::from(sx * sy * s < 0)
                })
                .collect()
        })
        .collect();
    FiniteGroup::from_table(names, table)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 0..n {
        for rest in permutations(n - 1) {
            let mut p = vec![first];
            p.extend(rest.into_iter().map(|x| if x >= first { x + 1 } else { x }));
            out.push(p);
        }
    }
    out
}

fn is_even(p: &[usize]) -> bool {
    let inversions = (0..p.len()).flat_map(|i| (i + 1..p.len()).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]);
    inversions.count() % 2 == 0
}

fn cycle_notation(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        out.push('(');
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            out.push_str(&(x + 1).to_string());
            x = p[x];
        }
        out.push(')');
    }
    if out.is_empty() {
        "e".into()
    } else {
        out
    }
}

/// Permutations of `{1..n}` in lexicographic order of their image lists,
/// composed as `(ab)(x) = a(b(x))`.
fn permutation_group(n: usize, even_only: bool) -> Result<FiniteGroup> {
    let perms: Vec<Vec<usize>> = permutations(n).into_iter().filter(|p| !even_only || is_even(p)).collect();
    let index = |p: &[usize]| perms.iter().position(|q| q == p).expect("closed under composition");
    let table = perms
        .iter()
        .map(|a| perms.iter().map(|b| index(&b.iter().map(|&x| a[x]).collect::<Vec<_>>())).collect())
        .collect();
    FiniteGroup::from_table(perms.iter().map(|p| cycle_notation(p)).collect(), table)
}

/// `A × B` with `(a, b)` at index `a·|B| + b`.
pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Result<FiniteGroup> {
    let (na, nb) = (a.order(), b.order());
    let names = (0..na * nb).map(|x| format!("({},{})", a.names[x / nb], b.names[x % nb])).collect();
    let table = (0..na * nb)
        .map(|x| (0..na * nb).map(|y| a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb)).collect())
        .collect();
    FiniteGroup::from_table(names, table)
}

/// Irreducible characters as rows over conjugacy classes.
#[derive(Clone, Debug)]
pub struct CharacterTable {
    pub rows: Vec<CVector>,
    pub degrees: Vec<u32>,
    pub class_sizes: Vec<usize>,
}

impl CharacterTable {
    pub fn order(&self) -> usize {
        self.class_sizes.iter().sum()
    }

    pub fn value(&self, i: usize, c: usize) -> C64 {
        self.rows[i][c]
    }

    /// Largest deviation of `Σ_c |c| χ(c) conj(ψ(c))` from `|G| δ_χψ`.
    pub fn row_orthogonality(&self) -> f64 {
        let g = self.order() as f64;
        let mut worst = 0.0f64;
        for (a, x) in self.rows.iter().enumerate() {
            for (b, y) in self.rows.iter().enumerate() {
                let s: C64 = (0..x.len()).map(|c| re(self.class_sizes[c] as f64) * x[c] * y[c].conj()).sum();
                let want = if a == b { g } else { 0.0 };
                worst = worst.max((s - re(want)).norm() / g);
            }
        }
        worst
    }

    /// Largest deviation of `Σ_χ χ(c) conj(χ(c'))` from `δ_cc' |G|/|c|`.
    pub fn column_orthogonality(&self) -> f64 {
        let g = self.order() as f64;
        let k = self.class_sizes.len();
        let mut worst = 0.0f64;
        for c in 0..k {
            for d in 0..k {
                let s: C64 = self.rows.iter().map(|x| x[c] * x[d].conj()).sum();
                let want = if c == d { g / self.class_sizes[c] as f64 } else { 0.0 };
                worst = worst.max((s - re(want)).norm() / g);
            }
        }
        worst
    }

    pub fn degree_square_sum(&self) -> u64 {
        self.degrees.iter().map(|&d| u64::from(d) * u64::from(d)).sum()
    }

    /// Index of the row equal to the complex conjugate of row `i`.
    fn conjugate_row(&self, i: usize) -> Option<usize> {
        let target = self.rows[i].map(|z| z.conj());
        (0..self.rows.len()).find(|&j| max_abs_vec(&(&self.rows[j] - &target)) <= ORTHOGONALITY_TOL)
    }
}

/// Burnside's method: common eigenvectors of the class-multiplication
/// matrices are the central characters `ω(K_c) = |K_c| χ(g_c)/χ(1)`.
pub fn character_table(g: &FiniteGroup, seed: u64, tol: &Tolerance) -> Result<CharacterTable> {
    let k = g.classes.len();
    let order = g.order() as f64;
    let sizes = g.class_sizes();
    let mats: Vec<CMatrix> = (0..k)
        .map(|c| {
            let mut m = CMatrix::zeros(k, k);
            for (b, class_b) in g.classes.iter().enumerate() {
                let z = class_b[0];
                for &x in &g.classes[c] {
                    let y = g.mul(g.inverse(x), z);
                    m[(g.class_of(y), b)] += re(1.0);
                }
            }
            m
        })
        .collect();
    let vectors =
        common_eigenbasis(&mats, seed, tol).map_err(|e| Error::DegenerationFailure(e.to_string()))?;
    if vectors.len() != k {
        return Err(Error::DegenerationFailure(format!("{} eigenvectors for {k} classes", vectors.len())));
    }
    let mut rows = Vec::with_capacity(k);
    let mut degrees = Vec::with_capacity(k);
    for v in vectors {
        if v[0].norm() <= tol.snap_tol {
            return Err(Error::DegenerationFailure("eigenvector vanishes on the identity class".into()));
        }
        let w = &v / v[0];
        let norm: f64 = (0..k).map(|c| w[c].norm_sqr() / sizes[c] as f64).sum();
        let d = (order / norm).sqrt();
        let snapped = snap_real(d, tol).map_err(|_| Error::SnapFailure(format!("degree {d} is not an integer")))?;
        let snapped = u32::try_from(snapped).map_err(|_| Error::SnapFailure(format!("degree {d}")))?;
        degrees.push(snapped);
        rows.push(CVector::from_fn(k, |c, _| w[c] * re(f64::from(snapped) / sizes[c] as f64)));
    }
    let mut order_idx: Vec<usize> = (0..k).collect();
    let key = |i: usize| -> (u32, Vec<(i64, i64)>) {
        let vals = rows[i].iter().map(|z| (-(z.re * 1e6).round() as i64, -(z.im * 1e6).round() as i64)).collect();
        (degrees[i], vals)
    };
    order_idx.sort_by_key(|&i| key(i));
    let table = CharacterTable {
        rows: order_idx.iter().map(|&i| rows[i].clone()).collect(),
        degrees: order_idx.iter().map(|&i| degrees[i]).collect(),
        class_sizes: sizes,
    };
    let (r, c) = (table.row_orthogonality(), table.column_orthogonality());
    if r > ORTHOGONALITY_TOL || c > ORTHOGONALITY_TOL {
        return Err(Error::DegenerationFailure(format!("orthogonality residuals {r:.3e}, {c:.3e}")));
    }
    if table.degree_square_sum() != g.order() as u64 {
        return Err(Error::SnapFailure(format!("squared degrees sum to {}", table.degree_square_sum())));
    }
    Ok(table)
}

/// `Rep(G)` with simples ordered as the rows of `table` and labelled `χ0, χ1, …`.
pub fn rep_fusion_ring(table: &CharacterTable, tol: &Tolerance) -> Result<FusionRingData> {
    let k = table.rows.len();
    let order = table.order() as f64;
    let mut n = vec![vec![vec![0u32; k]; k]; k];
    for i in 0..k {
        for j in 0..k {
            for (l, slot) in n[i][j].iter_mut().enumerate() {
                let s: C64 = (0..k)
                    .map(|c| re(table.class_sizes[c] as f64) * table.rows[i][c] * table.rows[j][c] * table.rows[l][c].conj())
                    .sum::<C64>()
                    / re(order);
                let v = crate::linalg::snap_integer(s, tol)
                    .map_err(|_| Error::SnapFailure(format!("multiplicity N[{i}][{j}][{l}] = {s}")))?;
                *slot = u32::try_from(v).map_err(|_| Error::SnapFailure(format!("negative multiplicity {v}")))?;
            }
        }
    }
    let dual = (0..k)
        .map(|i| table.conjugate_row(i).ok_or_else(|| Error::SnapFailure(format!("no conjugate of row {i}"))))
        .collect::<Result<Vec<_>>>()?;
    let labels = (0..k).map(|i| format!("χ{i}")).collect();
    FusionRingData::from_raw(RawFusionRing { labels, dual, n }, tol)
}

/// `Vec_G`: simples are group elements and fusion is multiplication.
pub fn vec_fusion_ring(g: &FiniteGroup, tol: &Tolerance) -> Result<FusionRingData> {
    let order = g.order();
    let mut n = vec![vec![vec![0u32; order]; order]; order];
    for (a, row) in n.iter_mut().enumerate() {
        for (b, slot) in row.iter_mut().enumerate() {
            slot[g.mul(a, b)] = 1;
        }
    }
    // Simple 0 must be the unit object.
    let perm: Vec<usize> = std::iter::once(g.identity()).chain((0..order).filter(|&x| x != g.identity())).collect();
    let pos: Vec<usize> = {
        let mut p = vec![0; order];
        for (i, &x) in perm.iter().enumerate() {
            p[x] = i;
        }
        p
    };
    let n = perm
        .iter()
        .map(|&a| perm.iter().map(|&b| perm.iter().map(|&c| n[a][b][c]).collect()).collect())
        .collect();
    let dual = perm.iter().map(|&a| pos[g.inverse(a)]).collect();
    let labels = perm.iter().map(|&a| g.names[a].clone()).collect();
    FusionRingData::from_raw(RawFusionRing { labels, dual, n }, tol)
}

/// Simple index of each group element in [`vec_fusion_ring`].
pub fn vec_simple_index(g: &FiniteGroup, x: usize) -> usize {
    match x.cmp(&g.identity()) {
        std::cmp::Ordering::Equal => 0,
        std::cmp::Ordering::Less => x + 1,
        std::cmp::Ordering::Greater => x,
    }
}

/// Every subgroup as a sorted index set, ordered by size then indices.
pub fn subgroups(g: &FiniteGroup) -> Vec<Vec<usize>> {
    let mut found: BTreeSet<Vec<usize>> = (0..g.order()).map(|x| g.closure([x]).into_iter().collect()).collect();
    loop {
        let current: Vec<Vec<usize>> = found.iter().cloned().collect();
        let mut grew = false;
        for (i, a) in current.iter().enumerate() {
            for b in &current[i + 1..] {
                let join: Vec<usize> = g.closure(a.iter().chain(b).copied()).into_iter().collect();
                grew |= found.insert(join);
            }
        }
        if !grew {
            break;
        }
    }
    let mut out: Vec<Vec<usize>> = found.into_iter().collect();
    out.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    out
}

pub fn normal_subgroups(g: &FiniteGroup) -> Vec<Vec<usize>> {
    subgroups(g).into_iter().filter(|h| g.is_normal(h)).collect()
}

/// Simples of `Rep(G)` on which `N` acts trivially.
pub fn trivial_action_subcategory(
    g: &FiniteGroup,
    table: &CharacterTable,
    normal: &[usize],
) -> Result<FusionSubcategory> {
    if !g.is_normal(normal) || g.closure(normal.iter().copied()).len() != normal.len() {
        return Err(Error::NotNormal);
    }
    let size = normal.len() as f64;
    let indices: Vec<usize> = (0..table.rows.len())
        .filter(|&i| {
            let avg: C64 = normal.iter().map(|&x| table.rows[i][g.class_of(x)]).sum::<C64>() / re(size);
            (avg - re(f64::from(table.degrees[i]))).norm() <= PARTITION_TOL
        })
        .collect();
    let fpdim = indices.iter().map(|&i| f64::from(table.degrees[i]).powi(2)).sum();
    Ok(FusionSubcategory { indices, fpdim })
}

/// Class sum of conjugacy class `c` in the `E_i` coordinates of `CE(Rep G)`.
pub fn class_sum_in_e(table: &CharacterTable, c: usize) -> CVector {
    let size = table.class_sizes[c] as f64;
    CVector::from_fn(table.rows.len(), |i, _| table.rows[i][c] * re(size / f64::from(table.degrees[i])))
}

#[derive(Clone, Debug, Serialize)]
pub struct CrosscheckRow {
    pub subgroup: Vec<usize>,
    pub subcategory: Vec<usize>,
    pub subalgebra_dim: f64,
    pub expected_dim: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CrosscheckReport {
    pub order: usize,
    pub subgroup_count: usize,
    pub subcategory_count: usize,
    pub rows: Vec<CrosscheckRow>,
}

fn finish(report: CrosscheckReport, mismatches: Vec<String>) -> Result<CrosscheckReport> {
    if mismatches.is_empty() {
        Ok(report)
    } else {
        Err(Error::OracleMismatch(mismatches))
    }
}

fn sorted_multiset(values: impl IntoIterator<Item = f64>, tol: &Tolerance) -> Option<Vec<i64>> {
    let mut out = values.into_iter().map(|v| snap_real(v, tol).ok()).collect::<Option<Vec<_>>>()?;
    out.sort_unstable();
    Some(out)
}

/// Compares `Rep(G)` against the normal subgroups of `G`.
pub fn crosscheck_rep(g: &FiniteGroup, seed: u64, tol: &Tolerance) -> Result<CrosscheckReport> {
    let table = character_table(g, seed, tol)?;
    let cat = Category::new(rep_fusion_ring(&table, tol)?, seed, *tol)?;
    let order = g.order() as f64;
    let mut mismatches = Vec::new();

    let blocks = cat.blocks.summaries();
    let got_n = sorted_multiset(blocks.iter().map(|b| b.n), tol);
    let want_n = sorted_multiset(g.class_sizes().iter().map(|&s| order / s as f64), tol);
    if blocks.iter().any(|b| b.m != 1) || got_n != want_n {
        mismatches.push(format!("block constants {got_n:?} differ from |G|/|class| {want_n:?}"));
    }
    let got_dims = sorted_multiset(blocks.iter().map(|b| b.summand_dim), tol);
    let want_dims = sorted_multiset(g.class_sizes().iter().map(|&s| s as f64), tol);
    if got_dims != want_dims {
        mismatches.push(format!("summand dimensions {got_dims:?} differ from class sizes {want_dims:?}"));
    }

    let subcats = cat.ring.enumerate_subcategories()?;
    let normals = normal_subgroups(g);
    if subcats.len() != normals.len() {
        mismatches.push(format!("{} subcategories but {} normal subgroups", subcats.len(), normals.len()));
    }
    let mut rows = Vec::new();
    let mut matched: BTreeSet<Vec<usize>> = BTreeSet::new();
    for nsub in &normals {
        let d = trivial_action_subcategory(g, &table, nsub)?;
        if !subcats.iter().any(|s| s.indices == d.indices) {
            mismatches.push(format!("trivial-action set {:?} of N={nsub:?} is not a subcategory", d.indices));
            continue;
        }
        if !matched.insert(d.indices.clone()) {
            mismatches.push(format!("subcategory {:?} reached by two normal subgroups", d.indices));
        }
        let l = subalgebra_from_subcategory(&cat, &d)?;
        let expected = nsub.len() as f64;
        if (l.dim_l - expected).abs() > DIMENSION_TOL * order {
            mismatches.push(format!("dim L for N={nsub:?} is {} not {expected}", l.dim_l));
        }
        let back = subcategory_from_subalgebra(&cat, &l)?;
        if back.indices != d.indices {
            mismatches.push(format!("S_L {:?} differs from trivial-action set {:?}", back.indices, d.indices));
        }
        let partition = block_partition(&cat, &l)?;
        match partition.classes.iter().find(|c| c.contains(&0)) {
            Some(b0) if *b0 == d.indices => {}
            other => mismatches.push(format!("partition class of the unit {other:?} differs from {:?}", d.indices)),
        }
        let ce: Vec<CVector> = ce_basis(&cat, &l)?.into_iter().map(|z| z.coeffs).collect();
        let inside: Vec<CVector> = (0..g.classes.len())
            .filter(|&c| nsub.contains(&g.classes[c][0]))
            .map(|c| class_sum_in_e(&table, c))
            .collect();
        let k = cat.rank();
        let worst = inside.iter().map(|v| distance_to_span(v, &ce, tol)).fold(0.0, f64::max);
        if inside.len() != ce.len() || rank(&ce, k, tol) != ce.len() || worst > IDENTITY_RESIDUAL * order * order {
            mismatches.push(format!(
                "CE(L) for N={nsub:?} has dimension {} but N holds {} classes (distance {worst:.3e})",
                ce.len(),
                inside.len()
            ));
        }
        rows.push(CrosscheckRow {
            subgroup: nsub.clone(),
            subcategory: d.indices.clone(),
            subalgebra_dim: l.dim_l,
            expected_dim: expected,
        });
    }
    let report =
        CrosscheckReport { order: g.order(), subgroup_count: normals.len(), subcategory_count: subcats.len(), rows };
    finish(report, mismatches)
}

/// Compares `Vec_G` against all subgroups of `G`.
pub fn crosscheck_vec(g: &FiniteGroup, seed: u64, tol: &Tolerance) -> Result<CrosscheckReport> {
    let table = character_table(g, seed, tol)?;
    let cat = Category::new(vec_fusion_ring(g, tol)?, seed, *tol)?;
    let order = g.order() as f64;
    let mut mismatches = Vec::new();

    let blocks = cat.blocks.summaries();
    let got_m: Vec<i64> = {
        let mut v: Vec<i64> = blocks.iter().map(|b| b.m as i64).collect();
        v.sort_unstable();
        v
    };
    let got_dims = sorted_multiset(blocks.iter().map(|b| b.summand_dim), tol);
    let want = sorted_multiset(table.degrees.iter().map(|&d| f64::from(d)), tol);
    if Some(got_m.clone()) != want || got_dims != want {
        mismatches.push(format!("block sizes {got_m:?} and summands {got_dims:?} differ from degrees {want:?}"));
    }

    let subcats = cat.ring.enumerate_subcategories()?;
    let subs = subgroups(g);
    if subcats.len() != subs.len() {
        mismatches.push(format!("{} subcategories but {} subgroups", subcats.len(), subs.len()));
    }
    let mut rows = Vec::new();
    for h in &subs {
        let mut indices: Vec<usize> = h.iter().map(|&x| vec_simple_index(g, x)).collect();
        indices.sort_unstable();
        let Some(d) = subcats.iter().find(|s| s.indices == indices) else {
            mismatches.push(format!("subgroup {h:?} is not a subcategory"));
            continue;
        };
        let l = subalgebra_from_subcategory(&cat, d)?;
        let expected = order / h.len() as f64;
        if (l.dim_l - expected).abs() > DIMENSION_TOL * order {
            mismatches.push(format!("dim L for H={h:?} is {} not {expected}", l.dim_l));
        }
        rows.push(CrosscheckRow { subgroup: h.clone(), subcategory: indices, subalgebra_dim: l.dim_l, expected_dim: expected });
    }
    let report = CrosscheckReport { order: g.order(), subgroup_count: subs.len(), subcategory_count: subcats.len(), rows };
    finish(report, mismatches)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn table_of(name: &str) -> (FiniteGroup, CharacterTable) {
        let g = builtin(name).unwrap();
        let t = character_table(&g, 7, &tol()).unwrap();
        (g, t)
    }

    // Element orders, computed by repeated multiplication.
    fn element_orders(g: &FiniteGroup) -> Vec<usize> {
        (0..g.order())
            .map(|x| {
                let mut y = x;
                let mut k = 1;
                while y != g.identity() {
                    y = g.mul(y, x);
                    k += 1;
                }
                k
            })
            .collect()
    }

    #[test]
    fn builtin_orders_and_classes() {
        let cases = [
            ("cyclic:2", 2, 2),
            ("cyclic:6", 6, 6),
            ("dihedral:8", 8, 5),
            ("dihedral:10", 10, 4),
            ("symmetric:3", 6, 3),
            ("symmetric:4", 24, 5),
            ("alternating:4", 12, 4),
            ("quaternion:8", 8, 5),
            ("product:cyclic:2×cyclic:2", 4, 4),
            ("product:cyclic:2*cyclic:3", 6, 6),
            ("product:cyclic:2xcyclic:2xcyclic:2", 8, 8),
        ];
        for (name, order, classes) in cases {
            let g = builtin(name).unwrap();
            assert_eq!((g.order(), g.classes().len()), (order, classes), "{name}");
        }
        assert_eq!(builtin("symmetric:3").unwrap().class_sizes(), vec![1, 3, 2]);
    }

    #[test]
    fn unknown_builtins_are_rejected() {
        for name in ["cyclic:0", "dihedral:7", "symmetric:6", "quaternion:16", "klein:4", "cyclic"] {
            assert!(matches!(builtin(name), Err(Error::UnknownBuiltin(_))), "{name}");
        }
    }

    #[test]
    fn quaternion_has_one_involution() {
        let g = builtin("quaternion:8").unwrap();
        let orders = element_orders(&g);
        assert_eq!(orders.iter().filter(|&&o| o == 2).count(), 1);
        assert_eq!(orders.iter().filter(|&&o| o == 4).count(), 6);
        assert!(!g.is_abelian());
    }

    #[test]
    fn non_associative_table_is_rejected() {
        let mut file = builtin("cyclic:3").unwrap().to_file();
        file.table[1][1] = 0;
        file.table[1][2] = 2;
        let err = FiniteGroup::from_table(file.elements, file.table).unwrap_err();
        assert!(matches!(err, Error::BadTable(_)));
    }

    #[test]
    fn group_json_round_trip() {
        let g = builtin("dihedral:8").unwrap();
        let text = serde_json::to_string(&g.to_file()).unwrap();
        let h = FiniteGroup::from_json(&text).unwrap();
        assert_eq!(h.class_sizes(), g.class_sizes());
    }

    #[test]
    fn c2_and_s3_tables() {
        let (_, t) = table_of("cyclic:2");
        let want = [[1.0, 1.0], [1.0, -1.0]];
        for (row, w) in t.rows.iter().zip(want) {
            assert!(max_abs_vec(&(row - CVector::from_iterator(2, w.map(re)))) < 1e-9);
        }
        let (_, t) = table_of("symmetric:3");
        let want = [[1.0, 1.0, 1.0], [1.0, -1.0, 1.0], [2.0, 0.0, -1.0]];
        for (row, w) in t.rows.iter().zip(want) {
            assert!(max_abs_vec(&(row - CVector::from_iterator(3, w.map(re)))) < 1e-9);
        }
    }

    #[test]
    fn degrees_of_small_groups() {
        assert_eq!(table_of("quaternion:8").1.degrees, vec![1, 1, 1, 1, 2]);
        assert_eq!(table_of("dihedral:8").1.degrees, vec![1, 1, 1, 1, 2]);
        assert_eq!(table_of("alternating:4").1.degrees, vec![1, 1, 1, 3]);
        assert_eq!(table_of("symmetric:4").1.degrees, vec![1, 1, 2, 3, 3]);
        assert_eq!(table_of("dihedral:10").1.degrees, vec![1, 1, 2, 2]);
    }

    #[test]
    fn cyclic_characters_are_roots_of_unity() {
        let (g, t) = table_of("cyclic:5");
        for row in &t.rows {
            // A linear character is determined by its value on the generator.
            let z = row[g.class_of(1)];
            for x in 0..5 {
                assert!((row[g.class_of(x)] - z.powu(x as u32)).norm() < 1e-9);
            }
        }
        let g5 = (2.0 * std::f64::consts::PI / 5.0).cos();
        let (g, t) = table_of("dihedral:10");
        let r = g.class_of(1);
        let vals: Vec<f64> = t.rows[2..].iter().map(|row| row[r].re).collect();
        assert!(vals.iter().any(|v| (v - 2.0 * g5).abs() < 1e-9));
    }

    #[test]
    fn orthogonality_holds() {
        for name in ["cyclic:4", "product:cyclic:2×cyclic:2", "dihedral:8", "quaternion:8", "alternating:4"] {
            let (g, t) = table_of(name);
            assert!(t.row_orthogonality() < 1e-9 && t.column_orthogonality() < 1e-9, "{name}");
            assert_eq!(t.degree_square_sum(), g.order() as u64);
        }
    }

    #[test]
    fn rep_rings() {
        let (_, t) = table_of("symmetric:3");
        let r = rep_fusion_ring(&t, &tol()).unwrap();
        assert_eq!((0..3).map(|k| r.n(2, 2, k)).collect::<Vec<_>>(), vec![1, 1, 1]);
        assert_eq!(r.dims().iter().map(|d| d.round() as u32).collect::<Vec<_>>(), t.degrees);
        let (_, t) = table_of("cyclic:3");
        let r = rep_fusion_ring(&t, &tol()).unwrap();
        assert_eq!(r.duals(), &[0, 2, 1]);
        assert!(r.is_commutative());
    }

    #[test]
    fn vec_rings() {
        let g = builtin("symmetric:3").unwrap();
        let r = vec_fusion_ring(&g, &tol()).unwrap();
        assert_eq!(r.rank(), 6);
        assert!((r.global_dim() - 6.0).abs() < 1e-9);
        assert!(!r.is_commutative());
        let c2 = builtin("cyclic:2").unwrap();
        let a = vec_fusion_ring(&c2, &tol()).unwrap().to_raw();
        let b = rep_fusion_ring(&character_table(&c2, 1, &tol()).unwrap(), &tol()).unwrap().to_raw();
        assert_eq!((a.n, a.dual), (b.n, b.dual));
    }

    #[test]
    fn vec_ring_moves_identity_first() {
        let mut file = builtin("cyclic:3").unwrap().to_file();
        // Relabel so that the identity sits at index 2.
        let swap = |x: usize| [2, 1, 0][x];
        let table: Vec<Vec<usize>> =
            (0..3).map(|i| (0..3).map(|j| swap(file.table[swap(i)][swap(j)])).collect()).collect();
        file.elements.swap(0, 2);
        let g = FiniteGroup::from_table(file.elements, table).unwrap();
        assert_eq!(g.identity(), 2);
        let r = vec_fusion_ring(&g, &tol()).unwrap();
        assert_eq!(r.labels()[0], "e");
        assert_eq!(vec_simple_index(&g, 2), 0);
        assert_eq!(g.classes()[0], vec![2]);
    }

    #[test]
    fn subgroup_counts() {
        let count = |name: &str| {
            let g = builtin(name).unwrap();
            (subgroups(&g).len(), normal_subgroups(&g).len())
        };
        assert_eq!(count("symmetric:3"), (6, 3));
        assert_eq!(count("quaternion:8"), (6, 6));
        assert_eq!(count("cyclic:4"), (3, 3));
        assert_eq!(count("dihedral:8"), (10, 6));
        assert_eq!(count("alternating:4"), (10, 3));
        assert_eq!(count("symmetric:4"), (30, 4));
    }

    #[test]
    fn trivial_action_sets() {
        let (g, t) = table_of("symmetric:3");
        let all: Vec<usize> = (0..6).collect();
        assert_eq!(trivial_action_subcategory(&g, &t, &[0]).unwrap().indices, vec![0, 1, 2]);
        assert_eq!(trivial_action_subcategory(&g, &t, &all).unwrap().indices, vec![0]);
        let a3: Vec<usize> = (0..6).filter(|&x| g.class_of(x) != 1).collect();
        let d = trivial_action_subcategory(&g, &t, &a3).unwrap();
        assert_eq!(d.indices, vec![0, 1]);
        assert!((d.fpdim - 2.0).abs() < 1e-12);
        let transposition = (0..6).find(|&x| g.class_of(x) == 1).unwrap();
        assert!(matches!(trivial_action_subcategory(&g, &t, &[0, transposition]), Err(Error::NotNormal)));
    }

    #[test]
    fn class_sums_in_e_coordinates() {
        let (_, t) = table_of("symmetric:3");
        let k = class_sum_in_e(&t, 1);
        let want = [c(3.0, 0.0), c(-3.0, 0.0), c(0.0, 0.0)];
        assert!(max_abs_vec(&(k - CVector::from_iterator(3, want))) < 1e-9);
    }

    #[test]
    fn s3_crosschecks() {
        let g = builtin("symmetric:3").unwrap();
        let rep = crosscheck_rep(&g, 3, &tol()).unwrap();
        assert_eq!((rep.subgroup_count, rep.subcategory_count), (3, 3));
        let mut dims: Vec<i64> = rep.rows.iter().map(|r| r.subalgebra_dim.round() as i64).collect();
        dims.sort_unstable();
        assert_eq!(dims, vec![1, 3, 6]);
        let vec = crosscheck_vec(&g, 3, &tol()).unwrap();
        assert_eq!((vec.subgroup_count, vec.subcategory_count), (6, 6));
        let mut dims: Vec<i64> = vec.rows.iter().map(|r| r.subalgebra_dim.round() as i64).collect();
        dims.sort_unstable_by(|a, b| b.cmp(a));
        assert_eq!(dims, vec![6, 3, 3, 3, 2, 1]);
    }

    #[test]
    fn c2_crosscheck() {
        let g = builtin("cyclic:2").unwrap();
        let rep = crosscheck_rep(&g, 0, &tol()).unwrap();
        assert_eq!((rep.subgroup_count, rep.subcategory_count), (2, 2));
    }
}
