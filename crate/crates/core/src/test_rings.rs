//! Hand-written fusion rings used by the unit tests, built without the
//! `groups` module so they stay independent of it.

use crate::fusion_ring::RawFusionRing;

pub const S3_ELEMENTS: [&str; 6] = ["e", "(12)", "(13)", "(23)", "(123)", "(132)"];

// Images of (1,2,3) under each element, in the order of S3_ELEMENTS.
const S3_PERMS: [[usize; 3]; 6] = [[1, 2, 3], [2, 1, 3], [3, 2, 1], [1, 3, 2], [2, 3, 1], [3, 1, 2]];

pub fn s3_index(name: &str) -> usize {
    S3_ELEMENTS.iter().position(|e| *e == name).expect("S3 element name")
}

/// `a·b` in S3, acting on the left: `(ab)(x) = a(b(x))`.
pub fn s3_mul(a: usize, b: usize) -> usize {
    let pa = S3_PERMS[a];
    let pb = S3_PERMS[b];
    let composed = [pa[pb[0] - 1], pa[pb[1] - 1], pa[pb[2] - 1]];
    S3_PERMS.iter().position(|p| *p == composed).unwrap()
}

pub fn raw_trivial() -> RawFusionRing {
    RawFusionRing { labels: vec!["1".into()], dual: vec![0], n: vec![vec![vec![1]]] }
}

pub fn raw_rep_c2() -> RawFusionRing {
    RawFusionRing {
        labels: vec!["1".into(), "s".into()],
        dual: vec![0, 1],
        n: vec![vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1], vec![1, 0]]],
    }
}

/// Rep(S3) with simples (1, sgn, rho).
pub fn raw_rep_s3() -> RawFusionRing {
    let one = [1, 0, 0];
    let sgn = [0, 1, 0];
    let rho = [0, 0, 1];
    let rho_rho = [1, 1, 1];
    let table = [[one, sgn, rho], [sgn, one, rho], [rho, rho, rho_rho]];
    RawFusionRing {
        labels: vec!["1".into(), "sgn".into(), "rho".into()],
        dual: vec![0, 1, 2],
        n: table.iter().map(|row| row.iter().map(|v| v.to_vec()).collect()).collect(),
    }
}

/// Vec_S3: simples are group elements, fusion is multiplication.
pub fn raw_vec_s3() -> RawFusionRing {
    let n = (0..6)
        .map(|i| (0..6).map(|j| (0..6).map(|k| u32::from(s3_mul(i, j) == k)).collect()).collect())
        .collect();
    let dual = (0..6).map(|i| (0..6).find(|&j| s3_mul(i, j) == 0).unwrap()).collect();
    RawFusionRing { labels: S3_ELEMENTS.iter().map(|s| s.to_string()).collect(), dual, n }
}
