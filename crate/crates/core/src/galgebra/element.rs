use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use super::{Gens, Monomial, Rational, Sign};
use crate::error::{Error, Result};

pub(crate) type Terms = BTreeMap<Monomial, Rational>;

/// Degree information of an element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Homogeneity {
    Zero,
    Degree(u32),
    Mixed,
}

/// Sparse rational combination of normal-form monomials.
#[derive(Clone, PartialEq, Eq)]
pub struct AlgElement {
    gens: Gens,
    terms: Terms,
}

pub(crate) fn add_term(terms: &mut Terms, m: Monomial, c: Rational) {
    if c.is_zero() {
        return;
    }
    match terms.entry(m) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

pub(crate) fn signed(c: &Rational, s: Sign) -> Rational {
    if s.is_minus() {
        -c.clone()
    } else {
        c.clone()
    }
}

pub(crate) fn mul_terms(gens: &Gens, a: &Terms, b: &Terms) -> Terms {
    let mut out = Terms::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            if let Some((s, m)) = ma.mul(mb, gens) {
                add_term(&mut out, m, signed(&(ca * cb), s));
            }
        }
    }
    out
}

/// Applies the derivation of parity `odd` with generator values `value_of`
/// to `a`, by the graded Leibniz rule with Koszul sign `(-1)^{|θ||x|}` for
/// every factor `x` the derivation passes.
pub(crate) fn leibniz<'v>(
    gens: &Gens,
    odd: bool,
    value_of: impl Fn(usize) -> Option<&'v Terms>,
    a: &Terms,
) -> Terms {
    let mut out = Terms::new();
    for (m, c) in a {
        leibniz_monomial(gens, odd, &value_of, m, c, &mut out);
    }
    out
}

fn leibniz_monomial<'v>(
    gens: &Gens,
    odd: bool,
    value_of: &impl Fn(usize) -> Option<&'v Terms>,
    m: &Monomial,
    c: &Rational,
    out: &mut Terms,
) {
    let factors: Vec<(usize, u32)> = m.factors().collect();
    let mut prefix_degree = 0u32;
    for (k, &(g, e)) in factors.iter().enumerate() {
        if let Some(val) = value_of(g).filter(|v| !v.is_empty()) {
            let mut left: Vec<(u32, u32)> =
                factors[..k].iter().map(|&(i, x)| (i as u32, x)).collect();
            if e > 1 {
                left.push((g as u32, e - 1));
            }
            let left = Monomial::from_sorted(left);
            let right = Monomial::from_sorted(
                factors[k + 1..]
                    .iter()
                    .map(|&(i, x)| (i as u32, x))
                    .collect(),
            );
            let pass = Sign::from_parity(odd && prefix_degree % 2 == 1);
            let scale = c * Rational::from_integer(e.into());
            for (mv, cv) in val {
                let Some((s1, lm)) = left.mul(mv, gens) else {
                    continue;
                };
                let Some((s2, res)) = lm.mul(&right, gens) else {
                    continue;
                };
                add_term(out, res, signed(&(&scale * cv), pass * s1 * s2));
            }
        }
        prefix_degree += e * gens.degree(g);
    }
}

impl AlgElement {
    pub fn zero(gens: &Gens) -> Self {
        AlgElement {
            gens: gens.clone(),
            terms: Terms::new(),
        }
    }

    pub fn one(gens: &Gens) -> Self {
        Self::monomial(gens, Monomial::one(), Rational::one())
    }

    pub fn generator(gens: &Gens, idx: usize) -> Self {
        Self::monomial(gens, Monomial::generator(idx), Rational::one())
    }

    pub fn monomial(gens: &Gens, m: Monomial, c: Rational) -> Self {
        let mut terms = Terms::new();
        add_term(&mut terms, m, c);
        AlgElement {
            gens: gens.clone(),
            terms,
        }
    }

    pub(crate) fn from_terms(gens: &Gens, terms: Terms) -> Self {
        debug_assert!(terms.values().all(|c| !c.is_zero()));
        AlgElement {
            gens: gens.clone(),
            terms,
        }
    }

    /// Builds from arbitrary `(coefficient, factors)` terms, normalizing each.
    pub fn from_products(gens: &Gens, products: &[(Rational, Vec<(usize, u32)>)]) -> Result<Self> {
        let mut terms = Terms::new();
        for (c, factors) in products {
            if let Some((s, m)) = super::normalize_product(gens, factors)? {
                add_term(&mut terms, m, signed(c, s));
            }
        }
        Ok(AlgElement {
            gens: gens.clone(),
            terms,
        })
    }

    pub fn gens(&self) -> &Gens {
        &self.gens
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub(crate) fn term_map(&self) -> &Terms {
        &self.terms
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn homogeneity(&self) -> Homogeneity {
        let mut degs = self.terms.keys().map(|m| m.degree(&self.gens));
        match degs.next() {
            None => Homogeneity::Zero,
            Some(d) => {
                if degs.all(|e| e == d) {
                    Homogeneity::Degree(d)
                } else {
                    Homogeneity::Mixed
                }
            }
        }
    }

    /// Coefficient of the unit monomial.
    pub fn augment(&self) -> Rational {
        self.coefficient(&Monomial::one())
    }

    pub fn multiply(&self, other: &AlgElement) -> Result<AlgElement> {
        if !self.gens.same_as(&other.gens) {
            return Err(Error::GeneratorSetMismatch);
        }
        Ok(AlgElement {
            gens: self.gens.clone(),
            terms: mul_terms(&self.gens, &self.terms, &other.terms),
        })
    }

    pub fn checked_add(&self, other: &AlgElement) -> Result<AlgElement> {
        if !self.gens.same_as(&other.gens) {
            return Err(Error::GeneratorSetMismatch);
        }
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            add_term(&mut terms, m.clone(), c.clone());
        }
        Ok(AlgElement {
            gens: self.gens.clone(),
            terms,
        })
    }

    pub fn scale(&self, c: &Rational) -> AlgElement {
        if c.is_zero() {
            return AlgElement::zero(&self.gens);
        }
        AlgElement {
            gens: self.gens.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    /// Keeps only the terms whose monomial satisfies `keep`.
    pub fn filter_terms(&self, keep: impl Fn(&Monomial) -> bool) -> AlgElement {
        AlgElement {
            gens: self.gens.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Rewrites the element over another generator set through an index map.
    /// Terms whose monomial maps to `None` are dropped.
    pub fn transport(
        &self,
        target: &Gens,
        map: impl Fn(&Monomial) -> Option<Monomial>,
    ) -> AlgElement {
        let mut terms = Terms::new();
        for (m, c) in &self.terms {
            if let Some(n) = map(m) {
                add_term(&mut terms, n, c.clone());
            }
        }
        AlgElement {
            gens: target.clone(),
            terms,
        }
    }
}

impl std::ops::Add for &AlgElement {
    type Output = AlgElement;
    /// Panics when the generator sets differ; use [`AlgElement::checked_add`]
    /// to get an error instead.
    fn add(self, rhs: &AlgElement) -> AlgElement {
        self.checked_add(rhs)
            .expect("adding elements of different algebras")
    }
}

impl std::ops::Sub for &AlgElement {
    type Output = AlgElement;
    fn sub(self, rhs: &AlgElement) -> AlgElement {
        self + &(-rhs)
    }
}

impl std::ops::Neg for &AlgElement {
    type Output = AlgElement;
    fn neg(self) -> AlgElement {
        AlgElement {
            gens: self.gens.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

impl std::ops::Mul for &AlgElement {
    type Output = AlgElement;
    fn mul(self, rhs: &AlgElement) -> AlgElement {
        self.multiply(rhs)
            .expect("multiplying elements of different algebras")
    }
}

/// Renders in the model-file expression syntax, e.g. `w1*w2*t^3 - 1/2*t^9`.
impl fmt::Display for AlgElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let mono = m.display(&self.gens);
            match (abs.is_one(), m.is_one()) {
                (true, _) => write!(f, "{mono}")?,
                (false, true) => write!(f, "{abs}")?,
                (false, false) => write!(f, "{abs}*{mono}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for AlgElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AlgElement({self})")
    }
}
