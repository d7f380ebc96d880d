use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::dercx::{
    augmentation_between, dual_frame, restriction_between, ComplexSlice, DerComplex, Derivation,
    Scope,
};
use crate::error::{Error, Result};
use crate::galgebra::Gens;
use crate::model::{RelativeModel, SullivanModel};
use crate::qlinalg::{homology, RatMatrix, SparseVec, Subspace};

/// Derivation homology `H_n` with cycle representatives.
#[derive(Debug, Clone)]
pub struct DerHomology {
    pub degree: u32,
    pub dim: usize,
    pub representatives: Vec<Derivation>,
    /// Basis labels of the slice, for rendering representatives.
    pub slice: ComplexSlice,
}

impl DerHomology {
    /// Representatives written as sums of `(w,m)` pairs.
    pub fn render(&self) -> Vec<String> {
        let labels = self.slice.labels();
        self.representatives
            .iter()
            .map(|theta| {
                let v = self.slice.coords(theta).expect("representative in slice");
                render_combination(&labels, &v)
            })
            .collect()
    }
}

pub(crate) fn render_combination(labels: &[String], v: &SparseVec) -> String {
    use num_traits::{One, Signed};
    let mut s = String::new();
    for (k, (j, c)) in v.iter().enumerate() {
        let neg = c.is_negative();
        let abs = c.abs();
        if k == 0 {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        if !abs.is_one() {
            s.push_str(&format!("{abs}*"));
        }
        s.push_str(&labels[*j]);
    }
    s
}

/// `H_n` of the derivation complex of the given scope, `n ≥ 1`.
pub fn der_homology<'a>(
    m: impl Into<crate::dercx::ModelRef<'a>>,
    n: u32,
    scope: Scope,
) -> Result<DerHomology> {
    if n == 0 {
        return Err(Error::Input(
            "derivation homology is defined for n >= 1".into(),
        ));
    }
    let cx = DerComplex::new(m, scope)?;
    let slice = cx.slice(n)?;
    let d_out = cx.boundary_between(&slice, &cx.slice(n - 1)?)?;
    let d_in = cx.boundary_between(&cx.slice(n + 1)?, &slice)?;
    let h = homology(&d_in, &d_out)?;
    Ok(DerHomology {
        degree: n,
        dim: h.dim,
        representatives: h
            .representatives
            .iter()
            .map(|v| slice.derivation(v))
            .collect(),
        slice,
    })
}

/// Where a Gottlieb subspace came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    Absolute,
    Fibration(String),
}

/// A graded subspace of `Hom(W, Q)` stored jointly over the dual frame.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GottliebResult {
    pub subspace: Subspace,
    pub provenance: Provenance,
}

impl GottliebResult {
    pub fn gens_degrees(&self) -> Vec<u32> {
        let mut d = self.subspace.frame().degrees();
        d.sort_unstable();
        d.dedup();
        d
    }

    /// Basis of the degree-`n` piece, rendered over `w*` labels.
    pub fn basis_in(&self, n: u32) -> Vec<String> {
        self.subspace
            .piece(n)
            .iter()
            .map(|v| self.subspace.render_vector(v))
            .collect()
    }

    pub fn dim_in(&self, n: u32) -> usize {
        self.subspace.piece(n).len()
    }

    pub fn dim(&self) -> usize {
        self.subspace.dim()
    }

    /// Basis per generator degree, including empty degrees.
    pub fn by_degree(&self) -> BTreeMap<u32, Vec<String>> {
        self.gens_degrees()
            .into_iter()
            .map(|n| (n, self.basis_in(n)))
            .collect()
    }

    /// Whole basis, e.g. `["w2*", "w4*"]`.
    pub fn basis(&self) -> Vec<String> {
        self.subspace.render_basis()
    }
}

fn distinct_degrees(gens: &Gens) -> Vec<u32> {
    let mut d: Vec<u32> = gens.iter().map(|g| g.degree).collect();
    d.sort_unstable();
    d.dedup();
    d
}

/// Maps degree-`n` row coordinates of an augmentation matrix into the
/// full dual frame.
fn lift_rows(gens: &Gens, n: u32, v: SparseVec) -> SparseVec {
    let rows: Vec<usize> = (0..gens.len()).filter(|&i| gens.degree(i) == n).collect();
    v.into_iter().map(|(r, c)| (rows[r], c)).collect()
}

fn guard(product: &RatMatrix, what: &str, n: u32) -> Result<()> {
    if product.is_zero() {
        Ok(())
    } else {
        Err(Error::Invariant(format!(
            "{what} does not annihilate boundaries in degree {n}; the fiber model must be minimal"
        )))
    }
}

fn images(map: &RatMatrix, cycles: &[SparseVec]) -> Vec<SparseVec> {
    cycles
        .iter()
        .map(|z| map.apply(z))
        .filter(|v| !v.is_empty())
        .collect()
}

/// `G_*(X)_Q` as the image of `ε` on cycles of `Der(ΛW, d)`.
pub fn gottlieb(m: &SullivanModel) -> Result<GottliebResult> {
    let gens = m.gens();
    let cx = DerComplex::new(m, Scope::Absolute)?;
    let pieces = distinct_degrees(gens)
        .into_par_iter()
        .map(|n| -> Result<Vec<SparseVec>> {
            let slice = cx.slice(n)?;
            let d_out = cx.boundary_between(&slice, &cx.slice(n - 1)?)?;
            let d_in = cx.boundary_between(&cx.slice(n + 1)?, &slice)?;
            let eps = augmentation_between(gens, &slice);
            guard(&eps.mul(&d_in)?, "augmentation", n)?;
            let cycles = d_out.kernel_vectors();
            Ok(images(&eps, &cycles)
                .into_iter()
                .map(|v| lift_rows(gens, n, v))
                .collect())
        })
        .collect::<Result<Vec<_>>>()?;
    let frame = dual_frame(gens);
    let vectors: Vec<SparseVec> = pieces.into_iter().flatten().collect();
    Ok(GottliebResult {
        subspace: Subspace::span(&frame, &vectors),
        provenance: Provenance::Absolute,
    })
}

/// `G^ξ_*(X)_Q` as the image of `ε∘res` on relative cycles.
pub fn fibre_gottlieb(f: &RelativeModel) -> Result<GottliebResult> {
    let fiber = f.fiber();
    let gens = fiber.gens();
    let rel = DerComplex::new(f, Scope::Relative)?;
    let abs = DerComplex::new(f, Scope::Absolute)?;
    let pieces = distinct_degrees(gens)
        .into_par_iter()
        .map(|n| -> Result<Vec<SparseVec>> {
            let slice = rel.slice(n)?;
            let d_out = rel.boundary_between(&slice, &rel.slice(n - 1)?)?;
            let d_in = rel.boundary_between(&rel.slice(n + 1)?, &slice)?;
            let abs_slice = abs.slice(n)?;
            let map = augmentation_between(gens, &abs_slice)
                .mul(&restriction_between(f, &slice, &abs_slice))?;
            guard(&map.mul(&d_in)?, "augmentation after restriction", n)?;
            let cycles = d_out.kernel_vectors();
            Ok(images(&map, &cycles)
                .into_iter()
                .map(|v| lift_rows(gens, n, v))
                .collect())
        })
        .collect::<Result<Vec<_>>>()?;
    let frame = dual_frame(gens);
    let vectors: Vec<SparseVec> = pieces.into_iter().flatten().collect();
    Ok(GottliebResult {
        subspace: Subspace::span(&frame, &vectors),
        provenance: Provenance::Fibration(f.name().to_string()),
    })
}

/// Dual of the linear base part `W^n → V^{n+1}` of `D`, as a subspace of
/// `Hom(W^n, Q)` over the full dual frame.
pub fn connecting_image(f: &RelativeModel, n: u32) -> Subspace {
    let fiber_gens = f.fiber().gens();
    let total = f.total().gens();
    let offset = f.fiber_offset();
    let mut rows: BTreeMap<usize, SparseVec> = BTreeMap::new();
    for w in (0..fiber_gens.len()).filter(|&w| fiber_gens.degree(w) == n) {
        for (m, c) in f.total_d(w).terms() {
            let factors: Vec<(usize, u32)> = m.factors().collect();
            if let [(v, 1)] = factors[..] {
                if v < offset && total.degree(v) == n + 1 {
                    rows.entry(v).or_default().push((w, c.clone()));
                }
            }
        }
    }
    let vectors: Vec<SparseVec> = rows.into_values().collect();
    Subspace::span(&dual_frame(fiber_gens), &vectors)
}

/// Sum of [`connecting_image`] over all fiber degrees.
pub fn connecting_images(f: &RelativeModel) -> Result<Subspace> {
    let gens = f.fiber().gens();
    let mut acc = Subspace::zero(&dual_frame(gens));
    for n in distinct_degrees(gens) {
        acc = acc.sum(&connecting_image(f, n))?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{parse_fibration, parse_model};

    const SU5: &str = "gen v1 3\ngen v2 5\ngen v3 7\ngen v4 9\n";
    const SU5_REL: &str = "[fibration su5]\n[base]\ngen t1 4\ngen t2 6\n[fiber]\ngen v1 3\ngen v2 5\ngen v3 7\ngen v4 9\n[total]\nD v1 = t1\nD v2 = t2\n";

    #[test]
    fn exterior_derivation_homology() {
        let m = parse_model(SU5).unwrap();
        let dims: Vec<usize> = (1..=9)
            .map(|n| der_homology(&m, n, Scope::Absolute).unwrap().dim)
            .collect();
        assert_eq!(dims, [1, 3, 1, 2, 1, 1, 1, 0, 1]);
        assert_eq!(
            der_homology(&m, 1, Scope::Absolute).unwrap().render(),
            ["(v4,v1*v2)"]
        );
        assert!(der_homology(&m, 0, Scope::Absolute).is_err());
    }

    #[test]
    fn two_sphere_has_only_odd_gottlieb() {
        let s2 = parse_model("gen x 2\ngen y 3\nd y = x^2\n").unwrap();
        let g = gottlieb(&s2).unwrap();
        assert_eq!(g.basis(), ["y*"]);
        assert_eq!(g.by_degree()[&2], Vec::<String>::new());
        assert_eq!(g.provenance, Provenance::Absolute);
    }

    #[test]
    fn relative_homology_and_connecting_image() {
        let f = parse_fibration(SU5_REL).unwrap();
        let dims: Vec<usize> = (1..=9)
            .map(|n| der_homology(&f, n, Scope::Relative).unwrap().dim)
            .collect();
        assert_eq!(dims, [0, 1, 1, 0, 1, 0, 1, 0, 1]);
        let g = fibre_gottlieb(&f).unwrap();
        assert_eq!(g.basis(), ["v1*", "v2*", "v3*", "v4*"]);
        assert_eq!(g.provenance, Provenance::Fibration("su5".into()));
        assert_eq!(connecting_image(&f, 3).render_basis(), ["v1*"]);
        assert!(connecting_image(&f, 7).is_zero());
        assert_eq!(
            connecting_images(&f).unwrap().render_basis(),
            ["v1*", "v2*"]
        );
    }

    #[test]
    fn twisting_cuts_down_the_restricted_group() {
        let f = parse_fibration("[fibration f]\n[base]\ngen t 2\n[fiber]\ngen w1 3\ngen w2 5\ngen w3 9\n[total]\nD w3 = w1*w2*t + t^5\n").unwrap();
        assert_eq!(gottlieb(f.fiber()).unwrap().basis(), ["w1*", "w2*", "w3*"]);
        assert_eq!(fibre_gottlieb(&f).unwrap().basis(), ["w3*"]);
    }
}
