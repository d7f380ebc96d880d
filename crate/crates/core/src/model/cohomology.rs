use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use super::SullivanModel;
use crate::error::{Error, Result};
use crate::galgebra::{basis_in_degree, AlgElement, Gens, Monomial, Terms};
use crate::qlinalg::{homology, RatMatrix, SparseVec};

/// Width of the vanishing window above the formal dimension estimate.
pub const DEFAULT_WINDOW: u32 = 6;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomologyDegree {
    pub degree: u32,
    pub dim: usize,
    /// Cocycles whose classes form a basis of `H^degree`.
    pub representatives: Vec<AlgElement>,
}

/// Monomial basis of one degree with a reverse index.
#[derive(Debug, Clone)]
pub(crate) struct GradedBasis {
    pub monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl GradedBasis {
    pub fn new(monomials: Vec<Monomial>) -> Self {
        let index = monomials
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, m)| (m, i))
            .collect();
        GradedBasis { monomials, index }
    }

    pub fn in_degree(gens: &Gens, n: u32) -> Self {
        GradedBasis::new(basis_in_degree(gens, n))
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn position(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Coordinates of `terms`; panics if a monomial lies outside the basis.
    pub fn coords(&self, terms: &Terms) -> SparseVec {
        let mut v: SparseVec = terms
            .iter()
            .map(|(m, c)| (self.position(m).expect("monomial outside basis"), c.clone()))
            .collect();
        v.sort_by_key(|(i, _)| *i);
        v
    }

    pub fn element(&self, gens: &Gens, v: &SparseVec) -> AlgElement {
        let terms: Terms = v
            .iter()
            .map(|(i, c)| (self.monomials[*i].clone(), c.clone()))
            .collect();
        AlgElement::from_terms(gens, terms)
    }
}

/// Matrix of `d: A^n → A^{n+1}` in monomial bases.
pub(crate) fn d_matrix(m: &SullivanModel, source: &GradedBasis, target: &GradedBasis) -> RatMatrix {
    let columns: Vec<SparseVec> = source
        .monomials
        .iter()
        .map(|mono| {
            let mut t = Terms::new();
            t.insert(mono.clone(), crate::galgebra::rat(1));
            target.coords(&m.apply_d_terms(&t))
        })
        .collect();
    RatMatrix::from_columns(target.len(), &columns)
}

/// `H^n(A, d)` for `0 ≤ n ≤ max_degree`.
pub fn cohomology(m: &SullivanModel, max_degree: u32) -> Result<Vec<CohomologyDegree>> {
    m.check_bound(max_degree)?;
    let gens = m.gens();
    let bases: Vec<GradedBasis> = (0..=max_degree + 1)
        .into_par_iter()
        .map(|n| GradedBasis::in_degree(gens, n))
        .collect();
    let empty = GradedBasis::new(Vec::new());
    // d_mats[k] : A^k → A^{k+1}
    let d_mats: Vec<RatMatrix> = (0..=max_degree as usize)
        .into_par_iter()
        .map(|k| d_matrix(m, &bases[k], &bases[k + 1]))
        .collect();
    (0..=max_degree as usize)
        .into_par_iter()
        .map(|k| {
            let d_in = if k == 0 {
                RatMatrix::zeros(bases[0].len(), empty.len())
            } else {
                d_mats[k - 1].clone()
            };
            let h = homology(&d_in, &d_mats[k])?;
            Ok(CohomologyDegree {
                degree: k as u32,
                dim: h.dim,
                representatives: h
                    .representatives
                    .iter()
                    .map(|v| bases[k].element(gens, v))
                    .collect(),
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassificationReport {
    pub chi_pi: i64,
    /// `Σ|odd| − Σ(|even| − 1)`, unknown when `χ_π > 0` or the sum is negative.
    pub formal_dimension: Option<u32>,
    pub pure: bool,
    pub elliptic_at_bound: bool,
    pub f0_candidate: bool,
    pub cohomology_dims: BTreeMap<u32, usize>,
    pub bound: u32,
    pub window: u32,
}

pub fn chi_pi(m: &SullivanModel) -> i64 {
    m.gens()
        .iter()
        .map(|g| if g.is_odd() { -1 } else { 1 })
        .sum()
}

pub fn formal_dimension_estimate(m: &SullivanModel) -> Option<u32> {
    if chi_pi(m) > 0 {
        return None;
    }
    let est: i64 = m
        .gens()
        .iter()
        .map(|g| {
            if g.is_odd() {
                g.degree as i64
            } else {
                1 - g.degree as i64
            }
        })
        .sum();
    u32::try_from(est).ok()
}

pub fn is_pure(m: &SullivanModel) -> bool {
    let gens = m.gens();
    (0..gens.len()).all(|i| {
        let dw = m.d(i);
        if gens.is_odd(i) {
            dw.terms()
                .all(|(mono, _)| !mono.contains_any(|g| gens.is_odd(g)))
        } else {
            dw.is_zero()
        }
    })
}

/// Ellipticity, purity and the F₀ test, with cohomology computed through
/// `max(bound, fd + window)`.
pub fn classify(m: &SullivanModel, bound: u32, window: u32) -> Result<ClassificationReport> {
    let fd = formal_dimension_estimate(m);
    if let Some(fd) = fd {
        if bound < fd {
            return Err(Error::BoundExceeded { needed: fd, bound });
        }
    }
    let top = fd.map_or(bound, |fd| bound.max(fd + window));
    let h = cohomology(m, top)?;
    let cohomology_dims: BTreeMap<u32, usize> = h.iter().map(|c| (c.degree, c.dim)).collect();
    let elliptic_at_bound = match fd {
        Some(fd) => ((fd + 1)..=(fd + window)).all(|n| cohomology_dims[&n] == 0),
        None => false,
    };
    let chi = chi_pi(m);
    let pure = is_pure(m);
    Ok(ClassificationReport {
        chi_pi: chi,
        formal_dimension: fd,
        pure,
        elliptic_at_bound,
        f0_candidate: pure && chi == 0 && elliptic_at_bound,
        cohomology_dims,
        bound: top,
        window,
    })
}
