//! Sullivan models `(ΛW, d)` and relative models `ΛV → ΛV⊗ΛW → ΛW`.

mod cohomology;
mod parse;

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::galgebra::{leibniz, AlgElement, Gens, Homogeneity, Monomial, Terms};

pub use cohomology::{
    chi_pi, classify, cohomology, formal_dimension_estimate, is_pure, ClassificationReport,
    CohomologyDegree, DEFAULT_WINDOW,
};
pub use parse::{parse_document, parse_fibration, parse_model, Document, Item};

/// Free graded-commutative algebra with a differential, given on generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SullivanModel {
    name: String,
    gens: Gens,
    diff: Vec<AlgElement>,
    validity_bound: Option<u32>,
}

impl SullivanModel {
    /// Validates degrees and `d∘d = 0` on generators. Generators missing from
    /// `diff` get `d = 0`.
    pub fn new(
        name: impl Into<String>,
        gens: Gens,
        diff: Vec<(usize, AlgElement)>,
        validity_bound: Option<u32>,
    ) -> Result<Self> {
        let model = Self::assemble(name.into(), gens, diff, validity_bound)?;
        model.check_closed()?;
        Ok(model)
    }

    /// Degree checks only; `d∘d = 0` is left to the caller.
    fn assemble(
        name: String,
        gens: Gens,
        diff: Vec<(usize, AlgElement)>,
        validity_bound: Option<u32>,
    ) -> Result<Self> {
        let mut d: Vec<AlgElement> = (0..gens.len()).map(|_| AlgElement::zero(&gens)).collect();
        for (idx, value) in diff {
            if !value.gens().same_as(&gens) {
                return Err(Error::GeneratorSetMismatch);
            }
            let g = gens
                .get(idx)
                .ok_or_else(|| Error::UnknownGenerator(format!("#{idx}")))?;
            let expected = g.degree + 1;
            match value.homogeneity() {
                Homogeneity::Zero => {}
                Homogeneity::Degree(k) if k == expected => {}
                Homogeneity::Degree(k) => {
                    return Err(Error::DegreeMismatch {
                        name: g.name.clone(),
                        expected,
                        found: k.to_string(),
                    })
                }
                Homogeneity::Mixed => {
                    return Err(Error::DegreeMismatch {
                        name: g.name.clone(),
                        expected,
                        found: "mixed".into(),
                    })
                }
            }
            d[idx] = value;
        }
        Ok(SullivanModel {
            name,
            gens,
            diff: d,
            validity_bound,
        })
    }

    fn check_closed(&self) -> Result<()> {
        for (i, dw) in self.diff.iter().enumerate() {
            if !self.apply_d(dw).is_zero() {
                return Err(Error::NotClosed(self.gens.name(i).to_string()));
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn gens(&self) -> &Gens {
        &self.gens
    }

    pub fn validity_bound(&self) -> Option<u32> {
        self.validity_bound
    }

    /// `d` of generator `idx`.
    pub fn d(&self, idx: usize) -> &AlgElement {
        &self.diff[idx]
    }

    pub fn d_by_name(&self, name: &str) -> Result<&AlgElement> {
        Ok(self.d(self.gens.lookup(name)?))
    }

    pub(crate) fn diff_terms(&self, idx: usize) -> &Terms {
        self.diff[idx].term_map()
    }

    /// Extends `d` to an arbitrary element by the Leibniz rule.
    pub fn apply_d(&self, a: &AlgElement) -> AlgElement {
        AlgElement::from_terms(&self.gens, self.apply_d_terms(a.term_map()))
    }

    pub(crate) fn apply_d_terms(&self, a: &Terms) -> Terms {
        leibniz(&self.gens, true, |g| Some(self.diff_terms(g)), a)
    }

    /// `d(w)` has no linear part for every generator.
    pub fn is_minimal(&self) -> bool {
        self.diff
            .iter()
            .all(|dw| dw.terms().all(|(m, _)| m.length() >= 2))
    }

    pub fn is_zero_differential(&self) -> bool {
        self.diff.iter().all(AlgElement::is_zero)
    }

    /// Fails with `BoundExceeded` when `needed` is past the validity bound.
    pub fn check_bound(&self, needed: u32) -> Result<()> {
        match self.validity_bound {
            Some(bound) if needed > bound => Err(Error::BoundExceeded { needed, bound }),
            _ => Ok(()),
        }
    }

    /// Number of generators in each degree, i.e. `dim Hom(W^n, Q)`.
    pub fn homotopy_dims(&self) -> Vec<(u32, usize)> {
        let mut out: Vec<(u32, usize)> = Vec::new();
        let mut degs: Vec<u32> = self.gens.iter().map(|g| g.degree).collect();
        degs.sort_unstable();
        for d in degs {
            match out.last_mut() {
                Some((k, c)) if *k == d => *c += 1,
                _ => out.push((d, 1)),
            }
        }
        out
    }

    /// Model-file text; `parse_model(to_text())` reproduces the model.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "[space {}]", self.name).unwrap();
        write_section(&mut s, self, "d");
        if let Some(b) = self.validity_bound {
            writeln!(s, "bound {b}").unwrap();
        }
        s
    }
}

fn write_section(s: &mut String, m: &SullivanModel, d_keyword: &str) {
    for g in m.gens.iter() {
        writeln!(s, "gen {} {}", g.name, g.degree).unwrap();
    }
    for (i, dw) in m.diff.iter().enumerate() {
        if !dw.is_zero() {
            writeln!(s, "{d_keyword} {} = {}", m.gens.name(i), dw).unwrap();
        }
    }
}

/// Relative Sullivan model of a fibration `X → E → Y`: base `(ΛV, d)`,
/// fiber generators `W` and a total differential `D` on `ΛV⊗ΛW` that
/// restricts to the base differential.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelativeModel {
    name: String,
    base: SullivanModel,
    total: SullivanModel,
    fiber: SullivanModel,
}

impl RelativeModel {
    /// `total_diff` lists `D(w)` over the union generator set (base first)
    /// for fiber generators, indexed within the fiber. Fiber generators not
    /// listed take `D(w) = declared_fiber_diff(w)`, or 0.
    ///
    /// When `declared_fiber_diff` is given it must agree with the projection
    /// of `D` that kills base generators.
    pub fn new(
        name: impl Into<String>,
        base: SullivanModel,
        fiber_gens: Gens,
        total_diff: Vec<(usize, AlgElement)>,
        declared_fiber_diff: Option<Vec<(usize, AlgElement)>>,
    ) -> Result<Self> {
        let name = name.into();
        let total_gens = base.gens().union(&fiber_gens)?;
        let offset = base.gens().len();
        let lift = |e: &AlgElement| {
            let shift = |m: &Monomial| Some(m.reindex(|i| i + offset));
            e.transport(&total_gens, shift)
        };

        let mut diffs: Vec<(usize, AlgElement)> = (0..offset)
            .map(|i| (i, lift_base(base.d(i), &total_gens)))
            .collect();
        let mut given = vec![false; fiber_gens.len()];
        for (i, e) in &total_diff {
            let e = if e.gens().same_as(&total_gens) {
                e.clone()
            } else {
                return Err(Error::GeneratorSetMismatch);
            };
            given[*i] = true;
            diffs.push((offset + i, e));
        }
        if let Some(declared) = &declared_fiber_diff {
            for (i, e) in declared {
                if !given[*i] {
                    diffs.push((offset + i, lift(e)));
                }
            }
        }

        let total = SullivanModel::assemble(
            name.clone(),
            total_gens.clone(),
            diffs,
            base.validity_bound(),
        )?;
        let fiber_diff: Vec<(usize, AlgElement)> = (0..fiber_gens.len())
            .map(|i| {
                (
                    i,
                    project_to_fiber(total.d(offset + i), &fiber_gens, offset),
                )
            })
            .collect();
        if let Some(declared) = &declared_fiber_diff {
            for (i, e) in declared {
                let projected = &fiber_diff[*i].1;
                if projected != e {
                    return Err(Error::ProjectionMismatch {
                        name: fiber_gens.name(*i).to_string(),
                        projected: projected.to_string(),
                        declared: e.to_string(),
                    });
                }
            }
        }
        let fiber = SullivanModel::assemble(
            format!("{name}/fiber"),
            fiber_gens.clone(),
            fiber_diff,
            None,
        )?;
        for (i, dw) in fiber.diff.iter().enumerate() {
            if !fiber.apply_d(dw).is_zero() {
                return Err(Error::BaseDiffViolated(fiber_gens.name(i).to_string()));
            }
        }
        total.check_closed()?;
        let base = base.with_name(format!("{name}/base"));
        Ok(RelativeModel {
            name,
            base,
            total,
            fiber,
        })
    }

    /// Product fibration `E = Y × X`: `D = d_V + d_W`.
    pub fn trivial(
        name: impl Into<String>,
        base: SullivanModel,
        fiber: &SullivanModel,
    ) -> Result<Self> {
        let declared = (0..fiber.gens().len())
            .map(|i| (i, fiber.d(i).clone()))
            .collect();
        RelativeModel::new(name, base, fiber.gens().clone(), Vec::new(), Some(declared))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self.total.name = self.name.clone();
        self.base.name = format!("{}/base", self.name);
        self.fiber.name = format!("{}/fiber", self.name);
        self
    }

    pub fn base(&self) -> &SullivanModel {
        &self.base
    }

    /// `(ΛW, d_W)` obtained by killing base generators in `D`.
    pub fn fiber(&self) -> &SullivanModel {
        &self.fiber
    }

    /// `(ΛV⊗ΛW, D)` as an absolute (generally non-minimal) model.
    pub fn total(&self) -> &SullivanModel {
        &self.total
    }

    /// Index of the first fiber generator in the total generator set.
    pub fn fiber_offset(&self) -> usize {
        self.base.gens().len()
    }

    pub fn is_base_index(&self, total_idx: usize) -> bool {
        total_idx < self.fiber_offset()
    }

    /// `D(w)` for the fiber generator with fiber index `i`.
    pub fn total_d(&self, i: usize) -> &AlgElement {
        self.total.d(self.fiber_offset() + i)
    }

    /// Kills every monomial containing a base generator.
    pub fn project(&self, e: &AlgElement) -> AlgElement {
        project_to_fiber(e, self.fiber.gens(), self.fiber_offset())
    }

    /// `D = d_W` with no base terms at all.
    pub fn is_fibre_trivial(&self) -> bool {
        (0..self.fiber.gens().len()).all(|i| {
            self.total_d(i)
                .terms()
                .all(|(m, _)| !m.contains_any(|g| self.is_base_index(g)))
        })
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "[fibration {}]", self.name).unwrap();
        if let Some(b) = self.base.validity_bound() {
            writeln!(s, "bound {b}").unwrap();
        }
        s.push_str("[base]\n");
        write_section(&mut s, &self.base, "d");
        s.push_str("[fiber]\n");
        write_section(&mut s, &self.fiber, "d");
        s.push_str("[total]\n");
        for i in 0..self.fiber.gens().len() {
            let dw = self.total_d(i);
            if !dw.is_zero() {
                writeln!(s, "D {} = {}", self.fiber.gens().name(i), dw).unwrap();
            }
        }
        s
    }
}

fn lift_base(e: &AlgElement, total: &Gens) -> AlgElement {
    e.transport(total, |m| Some(m.clone()))
}

fn project_to_fiber(e: &AlgElement, fiber: &Gens, offset: usize) -> AlgElement {
    e.transport(fiber, |m| {
        if m.contains_any(|g| g < offset) {
            None
        } else {
            Some(m.reindex(|g| g - offset))
        }
    })
}
