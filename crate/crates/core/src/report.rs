//! Serializable summaries of a category and their text and DOT renderings.

use std::fmt::Write as _;

use serde::Serialize;

use crate::char_theory::{chi, cointegral, fourier_inverse};
use crate::error::Result;
use crate::subalg::{Category, LatticeReport};

/// Pairs `[re, im]`, rounded so that reports do not depend on the last bits.
type Complex = [f64; 2];

fn rounded(x: f64) -> f64 {
    let r = (x * 1e12).round() / 1e12;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

fn pair(z: crate::linalg::C64) -> Complex {
    [rounded(z.re), rounded(z.im)]
}

#[derive(Clone, Debug, Serialize)]
pub struct BlockRow {
    pub j: usize,
    pub m: usize,
    pub n: f64,
    pub summand_dim: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalyzeReport {
    pub source: String,
    pub rank: usize,
    pub labels: Vec<String>,
    pub dual: Vec<usize>,
    pub dims: Vec<f64>,
    pub global_dim: f64,
    pub commutative: bool,
    pub blocks: Vec<BlockRow>,
    pub cointegral: Vec<Complex>,
    /// `F⁻¹(χ_i)` in the `E` basis, one row per simple.
    pub fourier_images: Vec<Vec<Complex>>,
}

pub fn analyze(source: &str, cat: &Category) -> AnalyzeReport {
    let ring = &cat.ring;
    let r = ring.rank();
    AnalyzeReport {
        source: source.to_string(),
        rank: r,
        labels: ring.labels().to_vec(),
        dual: ring.duals().to_vec(),
        dims: ring.dims().iter().map(|&d| rounded(d)).collect(),
        global_dim: rounded(ring.global_dim()),
        commutative: ring.is_commutative(),
        blocks: cat
            .blocks
            .summaries()
            .into_iter()
            .enumerate()
            .map(|(j, b)| BlockRow { j, m: b.m, n: rounded(b.n), summand_dim: rounded(b.summand_dim) })
            .collect(),
        cointegral: cointegral(ring).coeffs.iter().map(|&z| pair(z)).collect(),
        fourier_images: (0..r).map(|i| fourier_inverse(ring, &chi(ring, i)).coeffs.iter().map(|&z| pair(z)).collect()).collect(),
    }
}

fn complex_text(z: &Complex) -> String {
    if z[1] == 0.0 {
        format!("{:.6}", z[0])
    } else {
        format!("{:.6}{:+.6}i", z[0], z[1])
    }
}

impl AnalyzeReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "source      {}", self.source);
        let _ = writeln!(out, "rank        {}", self.rank);
        let _ = writeln!(out, "dim         {:.6}", self.global_dim);
        let _ = writeln!(out, "commutative {}", self.commutative);
        let _ = writeln!(out, "\n{:<4} {:<12} {:<6} {:>10}", "i", "label", "dual", "d_i");
        for i in 0..self.rank {
            let _ = writeln!(out, "{:<4} {:<12} {:<6} {:>10.6}", i, self.labels[i], self.dual[i], self.dims[i]);
        }
        let _ = writeln!(out, "\n{:<4} {:>4} {:>12} {:>12}", "j", "m_j", "n_j", "summand");
        for b in &self.blocks {
            let _ = writeln!(out, "{:<4} {:>4} {:>12.6} {:>12.6}", b.j, b.m, b.n, b.summand_dim);
        }
        let coeffs: Vec<String> = self.cointegral.iter().map(complex_text).collect();
        let _ = writeln!(out, "\ncointegral  [{}]", coeffs.join(", "));
        let _ = writeln!(out, "\nfourier images of characters");
        for (i, row) in self.fourier_images.iter().enumerate() {
            let coeffs: Vec<String> = row.iter().map(complex_text).collect();
            let _ = writeln!(out, "  {:<12} [{}]", self.labels[i], coeffs.join(", "));
        }
        out
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SubcategoryRow {
    pub indices: Vec<usize>,
    pub labels: Vec<String>,
    pub fpdim: f64,
}

pub fn subcategories(cat: &Category) -> Result<Vec<SubcategoryRow>> {
    let labels = cat.ring.labels();
    Ok(cat
        .ring
        .enumerate_subcategories()?
        .into_iter()
        .map(|d| SubcategoryRow {
            labels: d.indices.iter().map(|&i| labels[i].clone()).collect(),
            indices: d.indices,
            fpdim: rounded(d.fpdim),
        })
        .collect())
}

pub fn subcategories_text(rows: &[SubcategoryRow]) -> String {
    let mut out = format!("{} subcategories\n", rows.len());
    for (k, row) in rows.iter().enumerate() {
        let _ = writeln!(out, "{k:<4} fpdim {:>10.6}  {{{}}}", row.fpdim, row.labels.join(", "));
    }
    out
}

/// Rounds the floating fields of a lattice report for stable output.
pub fn rounded_lattice(mut report: LatticeReport) -> LatticeReport {
    for e in &mut report.entries {
        e.subcategory_fpdim = rounded(e.subcategory_fpdim);
        e.subalgebra_dim = rounded(e.subalgebra_dim);
    }
    report
}

pub fn lattice_text(report: &LatticeReport, labels: &[String]) -> String {
    let mut out = format!("{:<4} {:>10} {:>10} {:>6}  subcategory\n", "#", "FPdim(D)", "dim(L)", "CE");
    for (k, e) in report.entries.iter().enumerate() {
        let names: Vec<&str> = e.subcategory_indices.iter().map(|&i| labels[i].as_str()).collect();
        let _ = writeln!(
            out,
            "{k:<4} {:>10.6} {:>10.6} {:>6}  {{{}}}",
            e.subcategory_fpdim,
            e.subalgebra_dim,
            e.ce_dim,
            names.join(", ")
        );
    }
    let edges: Vec<String> = report.hasse.iter().map(|(a, b)| format!("{a}<{b}")).collect();
    let _ = writeln!(out, "covering relations: {}", edges.join(" "));
    out
}

fn trim(x: f64) -> String {
    let s = format!("{x:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    s.to_string()
}

/// Hasse diagram of the subcategory lattice, one node per subcategory.
pub fn lattice_dot(report: &LatticeReport) -> String {
    let mut out = String::from("digraph lattice {\n  rankdir=BT;\n  node [shape=box];\n");
    for (k, e) in report.entries.iter().enumerate() {
        let _ = writeln!(
            out,
            "  n{k} [label=\"D: {} | L: {}\"];",
            trim(e.subcategory_fpdim),
            trim(e.subalgebra_dim)
        );
    }
    for (a, b) in &report.hasse {
        let _ = writeln!(out, "  n{a} -> n{b};");
    }
    out.push_str("}\n");
    out
}
