//! Class functions and central elements in their canonical bases.
//!
//! `CF(C)` is coordinatized by the characters `χ_i` and multiplies like the
//! complexified fusion ring; `CE(C)` is coordinatized by the orthogonal
//! idempotents `E_i`. The two are paired by `⟨χ_i, E_j⟩ = d_i δ_ij` and
//! exchanged by the Fourier transform.

use std::ops::{Add, Mul, Sub};

use serde::{Serialize, Serializer};

use crate::fusion_ring::{FusionRingData, FusionSubcategory};
use crate::linalg::{max_abs_vec, re, CMatrix, CVector, C64};

macro_rules! coordinate_vector {
    ($name:ident) => {
        #[derive(Clone, Debug, PartialEq)]
        pub struct $name {
            pub coeffs: CVector,
        }

        impl $name {
            pub fn new(coeffs: CVector) -> Self {
                $name { coeffs }
            }

            pub fn from_slice(xs: &[C64]) -> Self {
                $name { coeffs: CVector::from_column_slice(xs) }
            }

            pub fn from_reals(xs: &[f64]) -> Self {
                $name { coeffs: CVector::from_iterator(xs.len(), xs.iter().map(|&x| re(x))) }
            }

            pub fn zero(rank: usize) -> Self {
                $name { coeffs: CVector::zeros(rank) }
            }

            pub fn basis(rank: usize, i: usize) -> Self {
                let mut v = CVector::zeros(rank);
                v[i] = re(1.0);
                $name { coeffs: v }
            }

            pub fn len(&self) -> usize {
                self.coeffs.len()
            }

            pub fn is_empty(&self) -> bool {
                self.coeffs.is_empty()
            }

            pub fn scale(&self, s: C64) -> Self {
                $name { coeffs: &self.coeffs * s }
            }

            /// `‖self − other‖∞`.
            pub fn dist(&self, other: &Self) -> f64 {
                max_abs_vec(&(&self.coeffs - &other.coeffs))
            }

            pub fn norm_inf(&self) -> f64 {
                max_abs_vec(&self.coeffs)
            }
        }

        impl Add for &$name {
            type Output = $name;
            fn add(self, rhs: &$name) -> $name {
                $name { coeffs: &self.coeffs + &rhs.coeffs }
            }
        }

        impl Sub for &$name {
            type Output = $name;
            fn sub(self, rhs: &$name) -> $name {
                $name { coeffs: &self.coeffs - &rhs.coeffs }
            }
        }

        impl Mul<C64> for &$name {
            type Output = $name;
            fn mul(self, rhs: C64) -> $name {
                self.scale(rhs)
            }
        }

        impl Serialize for $name {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                let pairs: Vec<[f64; 2]> = self.coeffs.iter().map(|z| [z.re, z.im]).collect();
                pairs.serialize(s)
            }
        }
    };
}

coordinate_vector!(ClassFunction);
coordinate_vector!(CentralElement);

/// Bilinear extension of `χ_i ⋆ χ_j = Σ_k N_ij^k χ_k`.
pub fn cf_multiply(ring: &FusionRingData, f: &ClassFunction, g: &ClassFunction) -> ClassFunction {
    let r = ring.rank();
    let mut out = CVector::zeros(r);
    for i in 0..r {
        if f.coeffs[i] == C64::default() {
            continue;
        }
        for j in 0..r {
            let fg = f.coeffs[i] * g.coeffs[j];
            if fg == C64::default() {
                continue;
            }
            for k in 0..r {
                let n = ring.n(i, j, k);
                if n != 0 {
                    out[k] += fg * n as f64;
                }
            }
        }
    }
    ClassFunction::new(out)
}

/// Matrix of `g ↦ f ⋆ g` in the character basis.
pub fn left_multiplication(ring: &FusionRingData, f: &ClassFunction) -> CMatrix {
    let r = ring.rank();
    let mut m = CMatrix::zeros(r, r);
    for j in 0..r {
        m.set_column(j, &cf_multiply(ring, f, &ClassFunction::basis(r, j)).coeffs);
    }
    m
}

/// Matrix of `g ↦ g ⋆ f` in the character basis.
pub fn right_multiplication(ring: &FusionRingData, f: &ClassFunction) -> CMatrix {
    let r = ring.rank();
    let mut m = CMatrix::zeros(r, r);
    for j in 0..r {
        m.set_column(j, &cf_multiply(ring, &ClassFunction::basis(r, j), f).coeffs);
    }
    m
}

/// The antilinear involution `χ_i ↦ χ_{i*}`.
pub fn cf_star(ring: &FusionRingData, f: &ClassFunction) -> ClassFunction {
    let r = ring.rank();
    let mut out = CVector::zeros(r);
    for i in 0..r {
        out[ring.dual(i)] = f.coeffs[i].conj();
    }
    ClassFunction::new(out)
}

/// Inner product `τ(f* ⋆ g)`; the characters form an orthonormal basis.
pub fn cf_inner(f: &ClassFunction, g: &ClassFunction) -> C64 {
    f.coeffs.dotc(&g.coeffs)
}

pub fn unit_class_function(ring: &FusionRingData) -> ClassFunction {
    ClassFunction::basis(ring.rank(), 0)
}

/// Character of a simple object.
pub fn chi(ring: &FusionRingData, i: usize) -> ClassFunction {
    ClassFunction::basis(ring.rank(), i)
}

pub fn idempotent_e(ring: &FusionRingData, i: usize) -> CentralElement {
    CentralElement::basis(ring.rank(), i)
}

/// Coordinatewise product in the `E` basis.
pub fn ce_multiply(a: &CentralElement, b: &CentralElement) -> CentralElement {
    CentralElement::new(a.coeffs.component_mul(&b.coeffs))
}

/// `u = Σ_i E_i`.
pub fn ce_unit(ring: &FusionRingData) -> CentralElement {
    CentralElement::new(CVector::from_element(ring.rank(), re(1.0)))
}

/// `⟨χ_i, E_j⟩ = d_i δ_ij`, extended bilinearly.
pub fn pairing(ring: &FusionRingData, f: &ClassFunction, a: &CentralElement) -> C64 {
    (0..ring.rank()).map(|i| f.coeffs[i] * a.coeffs[i] * ring.dim(i)).sum()
}

/// The idempotent integral `Λ = E_0`.
pub fn integral(ring: &FusionRingData) -> CentralElement {
    CentralElement::basis(ring.rank(), 0)
}

/// `λ_C = (1/dim C) Σ_i d_{i*} χ_i`.
pub fn cointegral(ring: &FusionRingData) -> ClassFunction {
    let dim = ring.global_dim();
    ClassFunction::new(CVector::from_iterator(
        ring.rank(),
        (0..ring.rank()).map(|i| re(ring.dim(ring.dual(i)) / dim)),
    ))
}

/// `S(E_i) = E_{i*}`.
pub fn antipodal(ring: &FusionRingData, a: &CentralElement) -> CentralElement {
    let mut out = CVector::zeros(ring.rank());
    for i in 0..ring.rank() {
        out[ring.dual(i)] += a.coeffs[i];
    }
    CentralElement::new(out)
}

/// `χ_i ↦ (dim C / d_i) E_{i*}`.
pub fn fourier_inverse(ring: &FusionRingData, f: &ClassFunction) -> CentralElement {
    let dim = ring.global_dim();
    let mut out = CVector::zeros(ring.rank());
    for i in 0..ring.rank() {
        out[ring.dual(i)] += f.coeffs[i] * (dim / ring.dim(i));
    }
    CentralElement::new(out)
}

/// `E_i ↦ (d_i / dim C) χ_{i*}`, the inverse of [`fourier_inverse`].
pub fn fourier_forward(ring: &FusionRingData, a: &CentralElement) -> ClassFunction {
    let dim = ring.global_dim();
    let mut out = CVector::zeros(ring.rank());
    for i in 0..ring.rank() {
        out[ring.dual(i)] += a.coeffs[i] * (ring.dim(i) / dim);
    }
    ClassFunction::new(out)
}

/// `f ← b`; diagonal in matched bases, `χ_i ← E_j = δ_ij χ_i`.
pub fn cf_right_action(f: &ClassFunction, b: &CentralElement) -> ClassFunction {
    ClassFunction::new(f.coeffs.component_mul(&b.coeffs))
}

/// `τ(f)`, the multiplicity of the unit: the `χ_0` coordinate.
pub fn tau(f: &ClassFunction) -> C64 {
    f.coeffs[0]
}

/// `β_τ(f, g) = τ(f ⋆ g)`.
pub fn beta_tau(ring: &FusionRingData, f: &ClassFunction, g: &ClassFunction) -> C64 {
    tau(&cf_multiply(ring, f, g))
}

/// `|⟨f, F⁻¹(g)⟩ − dim(C) τ(f ⋆ g)|`.
pub fn pairing_identity_residual(ring: &FusionRingData, f: &ClassFunction, g: &ClassFunction) -> f64 {
    let lhs = pairing(ring, f, &fourier_inverse(ring, g));
    let rhs = beta_tau(ring, f, g) * ring.global_dim();
    (lhs - rhs).norm()
}

/// `λ_D = (1/dim D) Σ_{i∈D} d_{i*} χ_i`, embedded in `CF(C)`.
pub fn subcategory_cointegral(ring: &FusionRingData, d: &FusionSubcategory) -> ClassFunction {
    let mut out = CVector::zeros(ring.rank());
    for &i in &d.indices {
        out[i] = re(ring.dim(ring.dual(i)) / d.fpdim);
    }
    ClassFunction::new(out)
}

/// `ℓ_D = F⁻¹(λ_D)`, which equals `(dim C / dim D) Σ_{i∈D} E_i`.
pub fn ell_d(ring: &FusionRingData, d: &FusionSubcategory) -> CentralElement {
    fourier_inverse(ring, &subcategory_cointegral(ring, d))
}
