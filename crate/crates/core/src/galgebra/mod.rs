//! Free graded-commutative algebras over Q.
//!
//! An algebra is determined by an ordered set of generators, each with a
//! degree. Even generators are polynomial, odd generators are exterior, and
//! every product is kept in a normal form sorted by declaration index with
//! the Koszul sign `xy = (-1)^{|x||y|} yx` accumulated along the way.

mod element;
mod monomial;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

pub(crate) use element::{add_term, leibniz, Terms};
pub use element::{AlgElement, Homogeneity};
pub use monomial::{basis_in_degree, basis_in_degree_where, normalize_product, Monomial, Sign};

/// Exact rational scalar.
pub type Rational = num_rational::BigRational;

/// Integer literal as a [`Rational`].
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub degree: u32,
}

impl Generator {
    pub fn is_odd(&self) -> bool {
        self.degree % 2 == 1
    }
}

#[derive(Debug, PartialEq, Eq)]
struct GenSetInner {
    gens: Vec<Generator>,
    by_name: HashMap<String, usize>,
}

/// Ordered generator set. Cheap to clone; the declaration index of a
/// generator is its position and fixes the canonical order.
#[derive(Clone)]
pub struct Gens(Arc<GenSetInner>);

impl Gens {
    /// Builds a generator set, rejecting duplicates and degrees below 2.
    pub fn new<I, S>(gens: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, u32)>,
        S: Into<String>,
    {
        let mut list = Vec::new();
        let mut by_name = HashMap::new();
        for (name, degree) in gens {
            let name = name.into();
            if degree < 2 {
                return Err(Error::NotSimplyConnected { name, degree });
            }
            if by_name.insert(name.clone(), list.len()).is_some() {
                return Err(Error::DuplicateGenerator(name));
            }
            list.push(Generator { name, degree });
        }
        Ok(Gens(Arc::new(GenSetInner {
            gens: list,
            by_name,
        })))
    }

    pub fn empty() -> Self {
        Gens::new(Vec::<(String, u32)>::new()).expect("empty set is valid")
    }

    /// Concatenation `self ++ other`, used for the total algebra of a fibration.
    pub fn union(&self, other: &Gens) -> Result<Self> {
        Gens::new(
            self.iter()
                .chain(other.iter())
                .map(|g| (g.name.clone(), g.degree)),
        )
    }

    pub fn len(&self) -> usize {
        self.0.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.gens.is_empty()
    }

    pub fn get(&self, idx: usize) -> Option<&Generator> {
        self.0.gens.get(idx)
    }

    pub fn degree(&self, idx: usize) -> u32 {
        self.0.gens[idx].degree
    }

    pub fn is_odd(&self, idx: usize) -> bool {
        self.0.gens[idx].is_odd()
    }

    pub fn name(&self, idx: usize) -> &str {
        &self.0.gens[idx].name
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.by_name.get(name).copied()
    }

    pub fn lookup(&self, name: &str) -> Result<usize> {
        self.index_of(name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    pub fn iter(&self) -> impl Iterator<Item = &Generator> {
        self.0.gens.iter()
    }

    pub fn max_degree(&self) -> u32 {
        self.iter().map(|g| g.degree).max().unwrap_or(0)
    }

    /// Same names and degrees in the same order.
    pub fn same_as(&self, other: &Gens) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.gens == other.0.gens
    }
}

impl PartialEq for Gens {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

impl Eq for Gens {}

impl fmt::Debug for Gens {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.iter().map(|g| format!("{}:{}", g.name, g.degree)))
            .finish()
    }
}
