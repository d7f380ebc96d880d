//! Derivation complexes.
//!
//! A derivation `θ` of shift `n` lowers degree by `n` and satisfies
//! `θ(xy) = θ(x)y + (−1)^{n|x|} xθ(y)`. The chain space `Der_n` has basis
//! pairs `(w, m)`: the derivation sending the generator `w` to the monomial
//! `m` (with `|w| − |m| = n`) and every other generator to zero. The
//! boundary is `δθ = d∘θ − (−1)^n θ∘d`.
//!
//! Three complexes are built over a model:
//!
//! * [`Scope::Absolute`]: `Der(ΛW, d)`;
//! * [`Scope::Relative`]: derivations of `ΛV⊗ΛW` vanishing on `ΛV`,
//!   with values anywhere in `ΛV⊗ΛW`;
//! * [`Scope::IdealValued`]: the relative derivations whose values lie in
//!   the ideal generated by `V`.
//!
//! ```
//! use rht_core::dercx::{der_basis, Scope};
//! use rht_core::model::parse_model;
//!
//! let su5 = parse_model("gen v1 3\ngen v2 5\ngen v3 7\ngen v4 9\n").unwrap();
//! let slice = der_basis(&su5, 2, Scope::Absolute).unwrap();
//! assert_eq!(slice.labels(), ["(v2,v1)", "(v3,v2)", "(v4,v3)"]);
//! ```

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::galgebra::{basis_in_degree, leibniz, rat, AlgElement, Gens, Monomial, Terms};
use crate::model::{RelativeModel, SullivanModel};
use crate::qlinalg::{Frame, Label, RatMatrix, SparseVec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scope {
    Absolute,
    Relative,
    IdealValued,
}

/// A model a derivation complex can be built on.
#[derive(Debug, Clone, Copy)]
pub enum ModelRef<'a> {
    Absolute(&'a SullivanModel),
    Relative(&'a RelativeModel),
}

impl<'a> From<&'a SullivanModel> for ModelRef<'a> {
    fn from(m: &'a SullivanModel) -> Self {
        ModelRef::Absolute(m)
    }
}

impl<'a> From<&'a RelativeModel> for ModelRef<'a> {
    fn from(f: &'a RelativeModel) -> Self {
        ModelRef::Relative(f)
    }
}

/// The data a scope needs: the value algebra with its differential, the
/// input generators, and the number of leading base generators.
#[derive(Debug, Clone)]
pub struct DerComplex<'a> {
    algebra: &'a SullivanModel,
    base_len: usize,
    scope: Scope,
}

impl<'a> DerComplex<'a> {
    /// `Absolute` on a fibration means the complex of its fiber `(ΛW, d_W)`.
    pub fn new(m: impl Into<ModelRef<'a>>, scope: Scope) -> Result<Self> {
        match (m.into(), scope) {
            (ModelRef::Absolute(m), Scope::Absolute) => Ok(DerComplex {
                algebra: m,
                base_len: 0,
                scope,
            }),
            (ModelRef::Relative(f), Scope::Absolute) => Ok(DerComplex {
                algebra: f.fiber(),
                base_len: 0,
                scope,
            }),
            (ModelRef::Relative(f), _) => Ok(DerComplex {
                algebra: f.total(),
                base_len: f.fiber_offset(),
                scope,
            }),
            (ModelRef::Absolute(_), _) => Err(Error::Input(format!(
                "{scope:?} derivations need a fibration model"
            ))),
        }
    }

    pub fn scope(&self) -> Scope {
        self.scope
    }

    pub fn algebra(&self) -> &SullivanModel {
        self.algebra
    }

    fn gens(&self) -> &Gens {
        self.algebra.gens()
    }

    fn inputs(&self) -> std::ops::Range<usize> {
        self.base_len..self.gens().len()
    }

    fn allows(&self, m: &Monomial) -> bool {
        self.scope != Scope::IdealValued || m.contains_any(|g| g < self.base_len)
    }

    /// Every boundary needs the value algebra through `max |w| + 1`.
    fn check_bound(&self, n: u32) -> Result<()> {
        let top = self
            .inputs()
            .map(|i| self.gens().degree(i))
            .filter(|&d| d >= n)
            .max();
        match top {
            Some(d) => self.algebra.check_bound(d + 1),
            None => Ok(()),
        }
    }

    /// Basis of `Der_n`. `n = 0` is the target slice of the boundary at 1.
    pub fn slice(&self, n: u32) -> Result<ComplexSlice> {
        self.check_bound(n)?;
        let gens = self.gens();
        let mut by_degree: HashMap<u32, Vec<Monomial>> = HashMap::new();
        let mut pairs = Vec::new();
        for w in self.inputs() {
            let dw = gens.degree(w);
            if dw < n {
                continue;
            }
            let monos = by_degree.entry(dw - n).or_insert_with(|| {
                basis_in_degree(gens, dw - n)
                    .into_iter()
                    .filter(|m| self.allows(m))
                    .collect()
            });
            pairs.extend(monos.iter().map(|m| (w, m.clone())));
        }
        Ok(ComplexSlice::new(n, self.scope, gens.clone(), pairs))
    }

    /// `δθ` for `θ` of shift `n ≥ 1`; the result has shift `n − 1`.
    pub fn boundary(&self, theta: &Derivation) -> Derivation {
        assert!(theta.shift >= 1, "boundary needs a positive shift");
        let n = theta.shift;
        let gens = self.gens();
        let mut values = BTreeMap::new();
        for z in self.inputs() {
            let mut acc = Terms::new();
            if let Some(v) = theta.values.get(&z) {
                acc = self.algebra.apply_d_terms(v.term_map());
            }
            let pulled = leibniz(
                gens,
                n % 2 == 1,
                |g| theta.values.get(&g).map(AlgElement::term_map),
                self.algebra.diff_terms(z),
            );
            let sign = if n % 2 == 1 { rat(1) } else { rat(-1) };
            for (m, c) in pulled {
                crate::galgebra::add_term(&mut acc, m, &sign * c);
            }
            if !acc.is_empty() {
                values.insert(z, AlgElement::from_terms(gens, acc));
            }
        }
        Derivation {
            shift: n - 1,
            scope: self.scope,
            gens: gens.clone(),
            values,
        }
    }

    /// Matrix of `δ: Der_n → Der_{n−1}` in slice coordinates, `n ≥ 1`.
    pub fn boundary_matrix(&self, n: u32) -> Result<RatMatrix> {
        let source = self.slice(n)?;
        let target = self.slice(n - 1)?;
        self.boundary_between(&source, &target)
    }

    pub(crate) fn boundary_between(
        &self,
        source: &ComplexSlice,
        target: &ComplexSlice,
    ) -> Result<RatMatrix> {
        let columns = (0..source.len())
            .map(|j| target.coords(&self.boundary(&source.derivation_of(j))))
            .collect::<Result<Vec<_>>>()?;
        Ok(RatMatrix::from_columns(target.len(), &columns))
    }
}

/// Ordered basis of `Der_n` for one scope.
#[derive(Debug, Clone)]
pub struct ComplexSlice {
    degree: u32,
    scope: Scope,
    gens: Gens,
    pairs: Vec<(usize, Monomial)>,
    index: HashMap<(usize, Monomial), usize>,
}

impl ComplexSlice {
    fn new(degree: u32, scope: Scope, gens: Gens, pairs: Vec<(usize, Monomial)>) -> Self {
        let index = pairs
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, p)| (p, i))
            .collect();
        ComplexSlice {
            degree,
            scope,
            gens,
            pairs,
            index,
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn scope(&self) -> Scope {
        self.scope
    }

    pub fn gens(&self) -> &Gens {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// `(generator index, value monomial)` pairs in basis order.
    pub fn pairs(&self) -> &[(usize, Monomial)] {
        &self.pairs
    }

    pub fn position(&self, generator: usize, m: &Monomial) -> Option<usize> {
        self.index.get(&(generator, m.clone())).copied()
    }

    /// Labels `(w,m)` with `1` for the unit monomial.
    pub fn labels(&self) -> Vec<String> {
        self.pairs
            .iter()
            .map(|(w, m)| format!("({},{})", self.gens.name(*w), m.display(&self.gens)))
            .collect()
    }

    /// The basis derivation `(w, m)`.
    pub fn derivation_of(&self, j: usize) -> Derivation {
        let (w, m) = &self.pairs[j];
        let mut values = BTreeMap::new();
        values.insert(*w, AlgElement::monomial(&self.gens, m.clone(), rat(1)));
        Derivation {
            shift: self.degree,
            scope: self.scope,
            gens: self.gens.clone(),
            values,
        }
    }

    /// Derivation with coordinates `v`.
    pub fn derivation(&self, v: &SparseVec) -> Derivation {
        let mut terms: BTreeMap<usize, Terms> = BTreeMap::new();
        for (j, c) in v {
            let (w, m) = &self.pairs[*j];
            terms.entry(*w).or_default().insert(m.clone(), c.clone());
        }
        Derivation {
            shift: self.degree,
            scope: self.scope,
            gens: self.gens.clone(),
            values: terms
                .into_iter()
                .map(|(w, t)| (w, AlgElement::from_terms(&self.gens, t)))
                .collect(),
        }
    }

    /// Coordinates of `θ`; fails if `θ` has a value outside this slice.
    pub fn coords(&self, theta: &Derivation) -> Result<SparseVec> {
        if theta.shift != self.degree {
            return Err(Error::DimensionMismatch(format!(
                "derivation of shift {} in slice {}",
                theta.shift, self.degree
            )));
        }
        let mut v = SparseVec::new();
        for (w, val) in &theta.values {
            for (m, c) in val.terms() {
                let j = self.position(*w, m).ok_or_else(|| {
                    Error::Invariant(format!(
                        "({},{}) is not in the degree-{} slice",
                        self.gens.name(*w),
                        m.display(&self.gens),
                        self.degree
                    ))
                })?;
                v.push((j, c.clone()));
            }
        }
        v.sort_by_key(|(j, _)| *j);
        Ok(v)
    }
}

/// Finitely supported derivation given by its generator values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub shift: u32,
    pub scope: Scope,
    gens: Gens,
    values: BTreeMap<usize, AlgElement>,
}

impl Derivation {
    /// Values must be homogeneous of degree `|w| − shift`.
    pub fn new(
        gens: &Gens,
        shift: u32,
        scope: Scope,
        values: Vec<(usize, AlgElement)>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (w, v) in values {
            if !v.gens().same_as(gens) {
                return Err(Error::GeneratorSetMismatch);
            }
            let g = gens
                .get(w)
                .ok_or_else(|| Error::UnknownGenerator(format!("#{w}")))?;
            match v.homogeneity() {
                crate::galgebra::Homogeneity::Zero => continue,
                crate::galgebra::Homogeneity::Degree(k) if k + shift == g.degree => {}
                _ => return Err(Error::NotHomogeneous),
            }
            map.insert(w, v);
        }
        Ok(Derivation {
            shift,
            scope,
            gens: gens.clone(),
            values: map,
        })
    }

    pub fn value(&self, generator: usize) -> Option<&AlgElement> {
        self.values.get(&generator)
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// Leibniz extension of the generator values to `a`.
    pub fn apply(&self, a: &AlgElement) -> Result<AlgElement> {
        if !a.gens().same_as(&self.gens) {
            return Err(Error::GeneratorSetMismatch);
        }
        let terms = leibniz(
            &self.gens,
            self.shift % 2 == 1,
            |g| self.values.get(&g).map(AlgElement::term_map),
            a.term_map(),
        );
        Ok(AlgElement::from_terms(&self.gens, terms))
    }
}

/// Basis of `Der_n` (see [`DerComplex::slice`]).
pub fn der_basis<'a>(m: impl Into<ModelRef<'a>>, n: u32, scope: Scope) -> Result<ComplexSlice> {
    DerComplex::new(m, scope)?.slice(n)
}

/// `δ: Der_n → Der_{n−1}` for `n ≥ 1`.
pub fn boundary_matrix<'a>(m: impl Into<ModelRef<'a>>, n: u32, scope: Scope) -> Result<RatMatrix> {
    if n == 0 {
        return Err(Error::Input("boundary needs n >= 1".into()));
    }
    DerComplex::new(m, scope)?.boundary_matrix(n)
}

/// `σ ↦ p_V∘σ` from the relative slice to the fiber's absolute slice.
pub fn restriction_matrix(f: &RelativeModel, n: u32) -> Result<RatMatrix> {
    let rel = der_basis(f, n, Scope::Relative)?;
    let abs = der_basis(f, n, Scope::Absolute)?;
    Ok(restriction_between(f, &rel, &abs))
}

pub(crate) fn restriction_between(
    f: &RelativeModel,
    rel: &ComplexSlice,
    abs: &ComplexSlice,
) -> RatMatrix {
    let offset = f.fiber_offset();
    let columns: Vec<SparseVec> = rel
        .pairs()
        .iter()
        .map(|(w, m)| {
            if m.contains_any(|g| g < offset) {
                return SparseVec::new();
            }
            let local = m.reindex(|g| g - offset);
            let j = abs
                .position(w - offset, &local)
                .expect("fiber pair present in absolute slice");
            vec![(j, rat(1))]
        })
        .collect();
    RatMatrix::from_columns(abs.len(), &columns)
}

/// Inclusion of the ideal-valued slice into the relative slice.
pub fn inclusion_matrix(f: &RelativeModel, n: u32) -> Result<RatMatrix> {
    let ideal = der_basis(f, n, Scope::IdealValued)?;
    let rel = der_basis(f, n, Scope::Relative)?;
    Ok(inclusion_between(&ideal, &rel))
}

pub(crate) fn inclusion_between(ideal: &ComplexSlice, rel: &ComplexSlice) -> RatMatrix {
    let columns: Vec<SparseVec> = ideal
        .pairs()
        .iter()
        .map(|(w, m)| vec![(rel.position(*w, m).expect("ideal pair is relative"), rat(1))])
        .collect();
    RatMatrix::from_columns(rel.len(), &columns)
}

/// Frame of `Hom(W, Q)` with labels `w*`, in generator order.
pub fn dual_frame(gens: &Gens) -> Frame {
    Frame::new(
        gens.iter()
            .map(|g| Label {
                name: format!("{}*", g.name),
                degree: g.degree,
            })
            .collect(),
    )
}

/// `ε: Der_n → Hom(W^n, Q)`, `(w, 1) ↦ w*` for `|w| = n`. Rows follow the
/// degree-`n` generators in declaration order.
pub fn augmentation_matrix(m: &SullivanModel, n: u32) -> Result<RatMatrix> {
    let slice = der_basis(m, n, Scope::Absolute)?;
    Ok(augmentation_between(m.gens(), &slice))
}

pub(crate) fn augmentation_between(gens: &Gens, slice: &ComplexSlice) -> RatMatrix {
    let n = slice.degree();
    let rows: Vec<usize> = (0..gens.len()).filter(|&i| gens.degree(i) == n).collect();
    let columns: Vec<SparseVec> = slice
        .pairs()
        .iter()
        .map(|(w, m)| {
            if m.is_one() && gens.degree(*w) == n {
                let r = rows
                    .iter()
                    .position(|x| x == w)
                    .expect("degree-n generator");
                vec![(r, rat(1))]
            } else {
                SparseVec::new()
            }
        })
        .collect();
    RatMatrix::from_columns(rows.len(), &columns)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{parse_fibration, parse_model};

    const SU5: &str = "gen v1 3\ngen v2 5\ngen v3 7\ngen v4 9\n";
    const SU5_REL: &str = "[fibration su5]\n[base]\ngen t1 4\ngen t2 6\n[fiber]\ngen v1 3\ngen v2 5\ngen v3 7\ngen v4 9\n[total]\nD v1 = t1\nD v2 = t2\n";
    const S3S3S4: &str = "gen w1 3\ngen w2 3\ngen w3 4\ngen w4 7\nd w4 = w3^2\n";

    #[test]
    fn absolute_slices() {
        let m = parse_model(SU5).unwrap();
        assert!(der_basis(&m, 8, Scope::Absolute).unwrap().is_empty());
        assert_eq!(
            der_basis(&m, 1, Scope::Absolute).unwrap().labels(),
            ["(v4,v1*v2)"]
        );
    }

    #[test]
    fn relative_slice() {
        let f = parse_fibration(SU5_REL).unwrap();
        let s = der_basis(&f, 2, Scope::Relative).unwrap();
        assert_eq!(s.labels(), ["(v2,v1)", "(v3,v2)", "(v4,t1*v1)", "(v4,v3)"]);
        let i = der_basis(&f, 2, Scope::IdealValued).unwrap();
        assert_eq!(i.labels(), ["(v4,t1*v1)"]);
    }

    #[test]
    fn relative_boundary() {
        let f = parse_fibration(SU5_REL).unwrap();
        let cx = DerComplex::new(&f, Scope::Relative).unwrap();
        let s2 = cx.slice(2).unwrap();
        let s1 = cx.slice(1).unwrap();
        let images: Vec<String> = (0..s2.len())
            .map(|j| {
                let b = cx.boundary(&s2.derivation_of(j));
                let v = s1.coords(&b).unwrap();
                v.iter()
                    .map(|(k, c)| format!("{c}{}", s1.labels()[*k]))
                    .collect::<Vec<_>>()
                    .join("+")
            })
            .collect();
        assert_eq!(images, ["1(v2,t1)", "1(v3,t2)", "1(v4,t1^2)", ""]);
    }

    #[test]
    fn degree_one_reaches_degree_zero() {
        let f = parse_fibration(SU5_REL).unwrap();
        let cx = DerComplex::new(&f, Scope::Relative).unwrap();
        let s1 = cx.slice(1).unwrap();
        let j = s1.labels().iter().position(|l| l == "(v4,v1*v2)").unwrap();
        assert!(!cx.boundary(&s1.derivation_of(j)).is_zero());
    }

    #[test]
    fn apply_examples() {
        let m = parse_model(SU5).unwrap();
        let g = m.gens();
        let theta = der_basis(&m, 3, Scope::Absolute).unwrap().derivation_of(0);
        assert_eq!(theta.value(0).unwrap().to_string(), "1");
        let v1v2 = AlgElement::parse("v1*v2", g).unwrap();
        assert_eq!(theta.apply(&v1v2).unwrap().to_string(), "v2");

        let ex = parse_model(S3S3S4).unwrap();
        let f = parse_fibration(
            "[fibration s2]\n[base]\ngen v1 2\ngen v2 3\nd v2 = v1^2\n[fiber]\ngen w1 3\ngen w2 3\ngen w3 4\ngen w4 7\n[total]\nD w4 = w1*w2*v1 + w3^2\n",
        )
        .unwrap();
        let tg = f.total().gens();
        let theta =
            Derivation::new(tg, 3, Scope::Relative, vec![(2, AlgElement::one(tg))]).unwrap();
        let x = AlgElement::parse("w1*w2*v1", tg).unwrap();
        assert_eq!(theta.apply(&x).unwrap().to_string(), "v1*w2");
        let theta = Derivation::new(
            ex.gens(),
            7,
            Scope::Absolute,
            vec![(3, AlgElement::one(ex.gens()))],
        )
        .unwrap();
        assert!(theta.apply(ex.d(3)).unwrap().is_zero());
    }

    #[test]
    fn restriction_example() {
        let f = parse_fibration(SU5_REL).unwrap();
        let rel = der_basis(&f, 3, Scope::Relative).unwrap();
        let abs = der_basis(&f, 3, Scope::Absolute).unwrap();
        let r = restriction_matrix(&f, 3).unwrap();
        for (j, label) in rel.labels().iter().enumerate() {
            let col: Vec<_> = (0..abs.len()).filter(|&i| r.get(i, j) != rat(0)).collect();
            match label.as_str() {
                "(v1,1)" => assert_eq!(abs.labels()[col[0]], "(v1,1)"),
                "(v3,t1)" | "(v4,t2)" => assert!(col.is_empty()),
                _ => {}
            }
        }
    }

    #[test]
    fn augmentation_example() {
        let m = parse_model(SU5).unwrap();
        let e = augmentation_matrix(&m, 3).unwrap();
        assert_eq!((e.rows(), e.get(0, 0).clone()), (1, rat(1)));
        let e8 = augmentation_matrix(&m, 8).unwrap();
        assert_eq!(e8.rows(), 0);
    }

    #[test]
    fn delta_squared_vanishes() {
        let f = parse_fibration(SU5_REL).unwrap();
        for scope in [Scope::Absolute, Scope::Relative, Scope::IdealValued] {
            let cx = DerComplex::new(&f, scope).unwrap();
            for n in 1..10 {
                let a = cx.boundary_matrix(n).unwrap();
                let b = cx.boundary_matrix(n + 1).unwrap();
                assert!(a.mul(&b).unwrap().is_zero(), "{scope:?} n={n}");
            }
        }
    }
}
