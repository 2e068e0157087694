//! The identity suite: every checked relation reported as a named maximum
//! residual against its threshold.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::char_theory::{
    antipodal, ce_multiply, ce_unit, chi, cointegral, fourier_forward, fourier_inverse, idempotent_e, integral,
    pairing, pairing_identity_residual, unit_class_function, CentralElement, ClassFunction,
};
use crate::error::{Error, Result};
use crate::fusion_ring::FusionRingData;
use crate::groups::{character_table, crosscheck_rep, crosscheck_vec, parse_group, rep_fusion_ring, vec_fusion_ring, FiniteGroup, ORTHOGONALITY_TOL};
use crate::linalg::{distance_to_span, re, subspace_intersection, CVector, Tolerance};
use crate::subalg::{
    build_lattice, ce_basis, subcategory_from_subalgebra, verify_cointegral_trace, verify_dim_inequality,
    verify_ell_zero, verify_partition_classes, verify_pi_down_integral, verify_restriction_pairing,
    verify_unit_normalization, Category, Lattice, DIMENSION_TOL,
};
use crate::wedderburn::{
    check_blocks, verify_class_sum_pairings, verify_dual_bases, verify_integral_classsum, IDENTITY_RESIDUAL,
};

/// Groups of the default battery, each analysed through `Rep(G)` and `Vec_G`.
pub const BATTERY: [(&str, &str); 11] = [
    ("C2", "cyclic:2"),
    ("C3", "cyclic:3"),
    ("C4", "cyclic:4"),
    ("C2xC2", "product:cyclic:2×cyclic:2"),
    ("C5", "cyclic:5"),
    ("C6", "cyclic:6"),
    ("S3", "symmetric:3"),
    ("D4", "dihedral:8"),
    ("Q8", "quaternion:8"),
    ("D5", "dihedral:10"),
    ("A4", "alternating:4"),
];

pub const LARGE_BATTERY: [(&str, &str); 1] = [("S4", "symmetric:4")];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupKind {
    Rep,
    Vec,
}

/// Where a fusion ring comes from: `rep:<group>`, `vec:<group>` or `ring:<file>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Source {
    Group(GroupKind, String),
    Ring(String),
}

impl std::str::FromStr for Source {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.split_once(':') {
            Some(("rep", g)) => Ok(Source::Group(GroupKind::Rep, g.to_string())),
            Some(("vec", g)) => Ok(Source::Group(GroupKind::Vec, g.to_string())),
            Some(("ring", f)) => Ok(Source::Ring(f.to_string())),
            _ => Err(Error::Parse(format!("source must be rep:<group>, vec:<group> or ring:<file>, got {s:?}"))),
        }
    }
}

impl std::fmt::Display for Source {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Source::Group(GroupKind::Rep, g) => write!(f, "rep:{g}"),
            Source::Group(GroupKind::Vec, g) => write!(f, "vec:{g}"),
            Source::Ring(p) => write!(f, "ring:{p}"),
        }
    }
}

/// A fusion ring together with the group it was built from, if any.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub ring: FusionRingData,
    pub group: Option<(GroupKind, FiniteGroup)>,
}

impl Source {
    pub fn load(&self, seed: u64, tol: &Tolerance) -> Result<Loaded> {
        match self {
            Source::Group(kind, name) => {
                let g = parse_group(name)?;
                let ring = match kind {
                    GroupKind::Rep => rep_fusion_ring(&character_table(&g, seed, tol)?, tol)?,
                    GroupKind::Vec => vec_fusion_ring(&g, tol)?,
                };
                Ok(Loaded { ring, group: Some((*kind, g)) })
            }
            Source::Ring(path) => {
                let text = std::fs::read_to_string(path)?;
                Ok(Loaded { ring: FusionRingData::from_json(&text, tol)?, group: None })
            }
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub threshold: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    fn residual(name: &str, residual: f64, threshold: f64) -> Self {
        Check { name: name.into(), residual, threshold, passed: residual <= threshold, detail: None }
    }

    fn failures(name: &str, failed: &[String]) -> Self {
        Check {
            name: name.into(),
            residual: failed.len() as f64,
            threshold: 0.0,
            passed: failed.is_empty(),
            detail: (!failed.is_empty()).then(|| failed.join("; ")),
        }
    }

    fn error(name: &str, err: &Error) -> Self {
        Check { name: name.into(), residual: f64::INFINITY, threshold: 0.0, passed: false, detail: Some(err.to_string()) }
    }

    fn from_result(name: &str, result: Result<f64>, threshold: f64) -> Self {
        match result {
            Ok(r) => Self::residual(name, r, threshold),
            Err(e) => Self::error(name, &e),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CategoryReport {
    pub source: String,
    pub rank: usize,
    pub global_dim: f64,
    pub subcategories: usize,
    pub checks: Vec<Check>,
}

impl CategoryReport {
    /// A report for a source whose analysis could not be completed.
    pub fn failed(source: &str, err: &Error) -> Self {
        CategoryReport {
            source: source.to_string(),
            rank: 0,
            global_dim: 0.0,
            subcategories: 0,
            checks: vec![Check::error("construction", err)],
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub categories: Vec<CategoryReport>,
    pub passed: bool,
}

impl VerifyReport {
    pub fn new(seed: u64, categories: Vec<CategoryReport>) -> Self {
        let passed = categories.iter().all(CategoryReport::passed);
        VerifyReport { seed, categories, passed }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for cat in &self.categories {
            out.push_str(&format!(
                "== {} (rank {}, dim {:.6}, {} subcategories)\n",
                cat.source, cat.rank, cat.global_dim, cat.subcategories
            ));
            for c in &cat.checks {
                let status = if c.passed { "ok" } else { "FAIL" };
                out.push_str(&format!("  {:<4} {:<44} residual {:.3e} <= {:.0e}", status, c.name, c.residual, c.threshold));
                if let Some(d) = &c.detail {
                    out.push_str(&format!("  [{d}]"));
                }
                out.push('\n');
            }
        }
        let failed = self.categories.iter().flat_map(|c| &c.checks).filter(|c| !c.passed).count();
        out.push_str(&format!("{} categories, {failed} failed checks\n", self.categories.len()));
        out
    }
}

/// Runs every check on one source.
pub fn verify_source(source: &Source, seed: u64, tol: &Tolerance) -> Result<CategoryReport> {
    let loaded = source.load(seed, tol)?;
    let cat = Category::new(loaded.ring, seed, *tol)?;
    Ok(verify_category(&source.to_string(), &cat, loaded.group.as_ref().map(|(k, g)| (*k, g))))
}

/// The battery, one thread per entry, reported in battery order.
pub fn verify_battery(large: bool, seed: u64, tol: &Tolerance) -> Vec<CategoryReport> {
    let sources: Vec<Source> = BATTERY
        .iter()
        .chain(if large { &LARGE_BATTERY[..] } else { &[] })
        .flat_map(|(_, g)| [GroupKind::Rep, GroupKind::Vec].map(|k| Source::Group(k, g.to_string())))
        .collect();
    std::thread::scope(|scope| {
        let handles: Vec<_> =
            sources.iter().map(|s| scope.spawn(move || verify_source(s, seed, tol))).collect();
        sources
            .iter()
            .zip(handles)
            .map(|(s, h)| {
                h.join()
                    .expect("verification thread panicked")
                    .unwrap_or_else(|e| CategoryReport::failed(&s.to_string(), &e))
            })
            .collect()
    })
}

pub fn verify_category(label: &str, cat: &Category, group: Option<(GroupKind, &FiniteGroup)>) -> CategoryReport {
    let mut checks = Vec::new();
    basis_checks(cat, &mut checks);
    block_checks(cat, &mut checks);
    let lattice = build_lattice(cat);
    let subcategories = lattice.as_ref().map_or(0, |l| l.entries.len());
    match &lattice {
        Ok(lat) => {
            checks.push(Check::residual("subcategory lattice correspondence", 0.0, 0.0));
            subalgebra_checks(cat, lat, &mut checks);
            pair_checks(cat, lat, &mut checks);
        }
        Err(e) => checks.push(Check::error("subcategory lattice correspondence", e)),
    }
    if let Some((kind, g)) = group {
        group_checks(cat, kind, g, &mut checks);
    }
    CategoryReport {
        source: label.to_string(),
        rank: cat.rank(),
        global_dim: cat.ring.global_dim(),
        subcategories,
        checks,
    }
}

fn basis_checks(cat: &Category, checks: &mut Vec<Check>) {
    let ring = &cat.ring;
    let r = ring.rank();
    let dim = ring.global_dim();
    let chis: Vec<ClassFunction> = (0..r).map(|i| chi(ring, i)).collect();
    let es: Vec<CentralElement> = (0..r).map(|i| idempotent_e(ring, i)).collect();

    let mut round = 0.0f64;
    for i in 0..r {
        round = round.max(fourier_forward(ring, &fourier_inverse(ring, &chis[i])).dist(&chis[i]));
        round = round.max(fourier_inverse(ring, &fourier_forward(ring, &es[i])).dist(&es[i]));
    }
    checks.push(Check::residual("fourier round trip", round, IDENTITY_RESIDUAL));

    let mut identity = 0.0f64;
    let mut basis_pairing = 0.0f64;
    for i in 0..r {
        for j in 0..r {
            identity = identity.max(pairing_identity_residual(ring, &chis[i], &chis[j]));
            let want = if i == j { ring.dim(i) } else { 0.0 };
            basis_pairing = basis_pairing.max((pairing(ring, &chis[i], &es[j]) - re(want)).norm());
        }
    }
    checks.push(Check::residual("pairing trace identity", identity, IDENTITY_RESIDUAL));
    checks.push(Check::residual("character idempotent pairing", basis_pairing, IDENTITY_RESIDUAL));

    let cointegral_image = fourier_inverse(ring, &cointegral(ring)).dist(&ce_unit(ring));
    let integral_image = fourier_forward(ring, &integral(ring)).dist(&unit_class_function(ring).scale(re(1.0 / dim)));
    checks.push(Check::residual("cointegral and integral transforms", cointegral_image.max(integral_image), IDENTITY_RESIDUAL));

    let mut antipode = 0.0f64;
    for i in 0..r {
        antipode = antipode.max(antipodal(ring, &es[i]).dist(&es[ring.dual(i)]));
        antipode = antipode.max(antipodal(ring, &antipodal(ring, &es[i])).dist(&es[i]));
    }
    let lam = integral(ring);
    let idem = ce_multiply(&lam, &lam).dist(&lam).max(antipodal(ring, &lam).dist(&lam));
    checks.push(Check::residual("antipode on idempotents", antipode, IDENTITY_RESIDUAL));
    checks.push(Check::residual("integral idempotent", idem, IDENTITY_RESIDUAL));

    let sum_sq: f64 = ring.dims().iter().map(|d| d * d).sum();
    checks.push(Check::residual("adjoint algebra dimension", (sum_sq - dim).abs(), IDENTITY_RESIDUAL * dim));
}

fn block_checks(cat: &Category, checks: &mut Vec<Check>) {
    let (ring, blocks) = (&cat.ring, &cat.blocks);
    let b = check_blocks(ring, blocks);
    checks.push(Check::residual("matrix unit relations", b.matrix_units, IDENTITY_RESIDUAL));
    checks.push(Check::residual("matrix unit sum", b.unit_sum, IDENTITY_RESIDUAL));
    let rank_gap = blocks.rank().abs_diff(ring.rank()) as f64;
    checks.push(Check::residual("block sizes sum to rank", rank_gap, 0.0));
    checks.push(Check::residual("unit trace constants", b.tau_diagonal, IDENTITY_RESIDUAL));
    checks.push(Check::residual("summand dimensions", b.summand_dims, IDENTITY_RESIDUAL));
    checks.push(Check::residual("class sums as transforms", b.class_sums, IDENTITY_RESIDUAL));
    checks.push(Check::residual("cointegral block", b.first_block, IDENTITY_RESIDUAL));
    checks.push(Check::residual("dual bases", verify_dual_bases(ring, blocks), IDENTITY_RESIDUAL));
    checks.push(Check::residual("class sum pairings", verify_class_sum_pairings(ring, blocks), IDENTITY_RESIDUAL));
    checks.push(Check::residual("integral as class sums", verify_integral_classsum(ring, blocks), IDENTITY_RESIDUAL));
}

fn max_over<T>(items: &[T], f: impl Fn(&T) -> Result<f64>) -> Result<f64> {
    items.iter().try_fold(0.0f64, |acc, x| Ok(acc.max(f(x)?)))
}

fn subalgebra_checks(cat: &Category, lat: &Lattice, checks: &mut Vec<Check>) {
    let dim = cat.ring.global_dim();
    let entries = &lat.entries;
    let dim_identity = entries
        .iter()
        .map(|e| (e.subalgebra.dim_l * e.subcategory.fpdim - dim).abs())
        .fold(0.0, f64::max);
    checks.push(Check::residual("subalgebra dimension identity", dim_identity, DIMENSION_TOL));

    let traces = entries.iter().map(|e| verify_cointegral_trace(cat, &e.subcategory)).collect::<Result<Vec<_>>>();
    match traces {
        Ok(t) => {
            let worst = |f: fn(&crate::subalg::CointegralTrace) -> f64| t.iter().map(f).fold(0.0, f64::max);
            checks.push(Check::residual("cointegral trace identity", worst(|x| x.trace_residual), IDENTITY_RESIDUAL));
            checks.push(Check::residual("adapted cointegral off-diagonal", worst(|x| x.off_diagonal), IDENTITY_RESIDUAL));
            checks.push(Check::residual("adapted cointegral diagonal", worst(|x| x.diagonal_pattern), IDENTITY_RESIDUAL));
        }
        Err(e) => checks.push(Check::error("cointegral trace identity", &e)),
    }

    checks.push(Check::from_result(
        "unit class idempotent",
        max_over(entries, |e| verify_ell_zero(cat, &e.subalgebra, &e.partition)),
        IDENTITY_RESIDUAL,
    ));
    checks.push(Check::from_result(
        "projected integral",
        max_over(entries, |e| verify_pi_down_integral(cat, &e.subalgebra, &e.partition)),
        IDENTITY_RESIDUAL,
    ));
    let unit = entries.iter().map(|e| verify_unit_normalization(cat, &e.subalgebra, &e.partition)).fold(0.0, f64::max);
    checks.push(Check::residual("subalgebra unit normalization", unit, IDENTITY_RESIDUAL));
    checks.push(Check::from_result(
        "restriction pairing",
        max_over(entries, |e| verify_restriction_pairing(cat, &e.subalgebra)),
        IDENTITY_RESIDUAL,
    ));
    let mut bad = Vec::new();
    for e in entries {
        match verify_partition_classes(cat, &e.subalgebra, &e.partition) {
            Ok(true) => {}
            Ok(false) => bad.push(format!("{:?}", e.subcategory.indices)),
            Err(err) => bad.push(format!("{:?}: {err}", e.subcategory.indices)),
        }
    }
    checks.push(Check::failures("restriction partition", &bad));
}

fn pair_checks(cat: &Category, lat: &Lattice, checks: &mut Vec<Check>) {
    let ring = &cat.ring;
    let entries = &lat.entries;
    let by_indices: BTreeMap<&[usize], usize> =
        entries.iter().enumerate().map(|(i, e)| (e.subcategory.indices.as_slice(), i)).collect();
    let spans: Result<Vec<Vec<CVector>>> = entries
        .iter()
        .map(|e| Ok(ce_basis(cat, &e.subalgebra)?.into_iter().map(|z| z.coeffs).collect()))
        .collect();
    let spans = match spans {
        Ok(s) => s,
        Err(e) => {
            checks.push(Check::error("product and intersection correspondence", &e));
            return;
        }
    };
    let mut corr = Vec::new();
    let mut containment = 0.0f64;
    let mut excess = 0.0f64;
    let mut gap = 0.0f64;
    let mut strict = 0usize;
    for a in 0..entries.len() {
        for b in a..entries.len() {
            let (sl, sm) = (&entries[a].subcategory, &entries[b].subcategory);
            let meet = ring.subcategory_meet(sl, sm);
            let join = ring.subcategory_join(sl, sm);
            let (Some(&p), Some(&q)) = (by_indices.get(meet.indices.as_slice()), by_indices.get(join.indices.as_slice()))
            else {
                corr.push(format!("meet or join of {:?}, {:?} missing", sl.indices, sm.indices));
                continue;
            };
            // LM contains L and M; L ∩ M has CE(L) ∩ CE(M) as its central part.
            for v in spans[a].iter().chain(&spans[b]) {
                containment = containment.max(distance_to_span(v, &spans[p], &cat.tol));
            }
            match subspace_intersection(&spans[a], &spans[b], &cat.tol) {
                Ok(common) if common.len() == spans[q].len() => {
                    for v in &spans[q] {
                        containment = containment.max(distance_to_span(v, &common, &cat.tol));
                    }
                }
                Ok(common) => corr.push(format!(
                    "CE intersection of {:?}, {:?} has dimension {} not {}",
                    sl.indices,
                    sm.indices,
                    common.len(),
                    spans[q].len()
                )),
                Err(e) => corr.push(e.to_string()),
            }
            for (idx, want) in [(p, &meet), (q, &join)] {
                match subcategory_from_subalgebra(cat, &entries[idx].subalgebra) {
                    Ok(s) if s.indices == want.indices => {}
                    Ok(s) => corr.push(format!("{:?} recovered as {:?}", want.indices, s.indices)),
                    Err(e) => corr.push(e.to_string()),
                }
            }
            match verify_dim_inequality(cat, &entries[a].subalgebra, &entries[b].subalgebra) {
                Ok(d) => {
                    if d.rhs - d.lhs > IDENTITY_RESIDUAL * d.rhs.max(1.0) {
                        strict += 1;
                    }
                    gap = gap.max((d.lhs - d.rhs).abs());
                }
                Err(Error::InequalityViolation { lhs, rhs }) => {
                    excess = excess.max(lhs - rhs);
                    gap = gap.max((lhs - rhs).abs());
                }
                Err(e) => corr.push(e.to_string()),
            }
        }
    }
    let scale = ring.global_dim().max(1.0);
    checks.push(Check::failures("product and intersection correspondence", &corr));
    checks.push(Check::residual("central parts of products and intersections", containment, IDENTITY_RESIDUAL * scale));
    checks.push(Check::residual("product dimension inequality", excess.max(0.0), IDENTITY_RESIDUAL * scale));
    if ring.is_commutative() {
        checks.push(Check::residual("product dimension equality", gap, IDENTITY_RESIDUAL * scale));
    } else {
        let mut c = Check::residual("strict product inequalities", 0.0, 0.0);
        c.detail = Some(format!("{strict} strict pairs"));
        checks.push(c);
    }
}

fn group_checks(cat: &Category, kind: GroupKind, g: &FiniteGroup, checks: &mut Vec<Check>) {
    match character_table(g, cat.seed, &cat.tol) {
        Ok(t) => {
            checks.push(Check::residual("character row orthogonality", t.row_orthogonality(), ORTHOGONALITY_TOL));
            checks.push(Check::residual("character column orthogonality", t.column_orthogonality(), ORTHOGONALITY_TOL));
            let gap = (t.degree_square_sum() as f64 - g.order() as f64).abs();
            checks.push(Check::residual("squared degrees sum to order", gap, 0.0));
        }
        Err(e) => checks.push(Check::error("character row orthogonality", &e)),
    }
    let (name, result) = match kind {
        GroupKind::Rep => ("normal subgroup correspondence", crosscheck_rep(g, cat.seed, &cat.tol)),
        GroupKind::Vec => ("subgroup correspondence", crosscheck_vec(g, cat.seed, &cat.tol)),
    };
    match result {
        Ok(_) => checks.push(Check::failures(name, &[])),
        Err(Error::OracleMismatch(diff)) => checks.push(Check::failures(name, &diff)),
        Err(e) => checks.push(Check::error(name, &e)),
    }
}
