use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::matrix::{RatMatrix, SparseVec};
use crate::error::{Error, Result};
use crate::galgebra::Rational;

/// Coordinate label: a dual generator `w*` together with its degree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Label {
    pub name: String,
    pub degree: u32,
}

/// Labeled coordinate frame of an ambient space `Q^n`.
#[derive(Clone, PartialEq, Eq)]
pub struct Frame(Arc<Vec<Label>>);

impl Frame {
    pub fn new(labels: Vec<Label>) -> Self {
        Frame(Arc::new(labels))
    }

    /// Unlabeled frame `e0, e1, ...` in degree 0.
    pub fn anonymous(n: usize) -> Self {
        Frame::new(
            (0..n)
                .map(|i| Label {
                    name: format!("e{i}"),
                    degree: 0,
                })
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn labels(&self) -> &[Label] {
        &self.0
    }

    /// Coordinates whose label has degree `n`.
    pub fn indices_in_degree(&self, n: u32) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, l)| l.degree == n)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn degrees(&self) -> Vec<u32> {
        let mut d: Vec<u32> = self.0.iter().map(|l| l.degree).collect();
        d.sort_unstable();
        d.dedup();
        d
    }
}

impl fmt::Debug for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.0.iter().map(|l| &l.name))
            .finish()
    }
}

/// Subspace of a framed coordinate space, stored as its reduced row-echelon
/// basis. Two subspaces of the same frame are equal iff their bases are
/// identical.
#[derive(Clone, PartialEq, Eq)]
pub struct Subspace {
    frame: Frame,
    basis: RatMatrix,
}

impl Subspace {
    pub fn zero(frame: &Frame) -> Self {
        Subspace {
            frame: frame.clone(),
            basis: RatMatrix::zeros(0, frame.dim()),
        }
    }

    pub fn full(frame: &Frame) -> Self {
        Subspace {
            frame: frame.clone(),
            basis: RatMatrix::identity(frame.dim()),
        }
    }

    /// Span of the given vectors.
    pub fn span(frame: &Frame, vectors: &[SparseVec]) -> Self {
        let m = RatMatrix::from_rows(frame.dim(), vectors);
        Subspace {
            frame: frame.clone(),
            basis: m.rref().matrix,
        }
    }

    /// Span of the coordinate axes at `indices`.
    pub fn coordinate(frame: &Frame, indices: &[usize]) -> Self {
        let vecs: Vec<SparseVec> = indices
            .iter()
            .map(|&i| vec![(i, Rational::one())])
            .collect();
        Self::span(frame, &vecs)
    }

    /// Span of the axes with the given label names.
    pub fn coordinate_by_name(frame: &Frame, names: &[&str]) -> Result<Self> {
        let idx = names
            .iter()
            .map(|n| {
                frame
                    .labels()
                    .iter()
                    .position(|l| l.name == *n)
                    .ok_or_else(|| Error::UnknownGenerator(n.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::coordinate(frame, &idx))
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn basis(&self) -> &RatMatrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<SparseVec> {
        self.basis.row_vectors()
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    fn check_frame(&self, other: &Subspace) -> Result<()> {
        if self.frame == other.frame {
            Ok(())
        } else {
            Err(Error::AmbientMismatch)
        }
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_frame(other)?;
        Ok(Subspace {
            frame: self.frame.clone(),
            basis: self.basis.vstack(&other.basis)?.rref().matrix,
        })
    }

    /// Intersection, computed from the kernel of `[A^T | -B^T]`.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_frame(other)?;
        let (k, l) = (self.dim(), other.dim());
        let n = self.frame.dim();
        // columns: coefficients alpha (k) then beta (l); rows: coordinates
        let mut m = RatMatrix::zeros(n, k + l);
        for i in 0..k {
            for (j, v) in self.basis.row(i) {
                m.set(j, i, v);
            }
        }
        for i in 0..l {
            for (j, v) in other.basis.row(i) {
                m.set(j, k + i, -v);
            }
        }
        let combos: Vec<SparseVec> = m
            .kernel_vectors()
            .into_iter()
            .map(|kv| {
                let alpha: SparseVec = kv.into_iter().filter(|(i, _)| *i < k).collect();
                let mut acc = vec![Rational::zero(); n];
                for (i, a) in alpha {
                    for (j, v) in self.basis.row(i) {
                        acc[j] += &a * v;
                    }
                }
                acc.into_iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .collect()
            })
            .collect();
        Ok(Subspace::span(&self.frame, &combos))
    }

    /// `other ⊆ self`.
    pub fn includes(&self, other: &Subspace) -> Result<bool> {
        self.check_frame(other)?;
        if other.dim() > self.dim() {
            return Ok(false);
        }
        Ok(self.basis.vstack(&other.basis)?.rank() == self.dim())
    }

    pub fn equals(&self, other: &Subspace) -> Result<bool> {
        self.check_frame(other)?;
        Ok(self.basis == other.basis)
    }

    pub fn contains_vector(&self, v: &SparseVec) -> bool {
        let row = RatMatrix::from_rows(self.frame.dim(), std::slice::from_ref(v));
        self.basis.vstack(&row).expect("same width").rank() == self.dim()
    }

    /// The part of the subspace lying in the coordinates of degree `n`.
    /// For block-graded subspaces this is the degree-`n` piece.
    pub fn piece(&self, n: u32) -> Vec<SparseVec> {
        let idx = self.frame.indices_in_degree(n);
        self.basis_vectors()
            .into_iter()
            .filter(|v| !v.is_empty() && v.iter().all(|(j, _)| idx.contains(j)))
            .collect()
    }

    /// True when every basis vector is supported in a single degree.
    pub fn is_block_graded(&self) -> bool {
        let labels = self.frame.labels();
        self.basis_vectors().iter().all(|v| {
            v.first().is_none_or(|(j0, _)| {
                v.iter()
                    .all(|(j, _)| labels[*j].degree == labels[*j0].degree)
            })
        })
    }

    /// Renders a basis vector: unit vectors as `w*`, otherwise `w1* + 2*w2*`.
    pub fn render_vector(&self, v: &SparseVec) -> String {
        let labels = self.frame.labels();
        if v.len() == 1 && v[0].1.is_one() {
            return labels[v[0].0].name.clone();
        }
        v.iter()
            .map(|(j, c)| {
                if c.is_one() {
                    labels[*j].name.clone()
                } else {
                    format!("{}*{}", c, labels[*j].name)
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    pub fn render_basis(&self) -> Vec<String> {
        self.basis_vectors()
            .iter()
            .map(|v| self.render_vector(v))
            .collect()
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q({})", self.render_basis().join(", "))
    }
}

/// Echelon basis that grows one vector at a time.
#[derive(Debug, Clone, Default)]
pub struct IncrementalBasis {
    rows: Vec<(usize, SparseVec)>,
}

impl IncrementalBasis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut cur = v.clone();
        for (p, row) in &self.rows {
            if let Ok(k) = cur.binary_search_by_key(p, |e| e.0) {
                let a = cur[k].1.clone();
                cur = axpy(&cur, &-a, row);
            }
        }
        cur
    }

    /// Adds `v` when independent of the current span; reports whether it did.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        let r = self.reduce(v);
        let Some((p, lead)) = r.first().cloned() else {
            return false;
        };
        let inv = Rational::one() / lead;
        let r: SparseVec = r.into_iter().map(|(j, x)| (j, x * &inv)).collect();
        self.rows.push((p, r));
        true
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_empty()
    }
}

/// `x + a * y`.
fn axpy(x: &SparseVec, a: &Rational, y: &SparseVec) -> SparseVec {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        match (x.get(i), y.get(j)) {
            (Some(p), Some(q)) if p.0 == q.0 => {
                let v = &p.1 + a * &q.1;
                if !v.is_zero() {
                    out.push((p.0, v));
                }
                i += 1;
                j += 1;
            }
            (Some(p), Some(q)) if p.0 < q.0 => {
                out.push(p.clone());
                i += 1;
            }
            (Some(p), None) => {
                out.push(p.clone());
                i += 1;
            }
            (_, Some(q)) => {
                out.push((q.0, a * &q.1));
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

/// Kernel of `m` as a subspace of its column space frame.
pub fn kernel(m: &RatMatrix) -> Subspace {
    Subspace::span(&Frame::anonymous(m.cols()), &m.kernel_vectors())
}

/// Column space of `m` as a subspace of its row frame.
pub fn image(m: &RatMatrix) -> Subspace {
    Subspace {
        frame: Frame::anonymous(m.rows()),
        basis: m.transpose().rref().matrix,
    }
}

/// Homology `ker(d_out) / im(d_in)` at the middle space of `d_in`, `d_out`.
#[derive(Debug, Clone)]
pub struct Homology {
    pub dim: usize,
    /// Cycles whose classes form a basis of the homology.
    pub representatives: Vec<SparseVec>,
    /// A basis of the cycle space.
    pub cycles: Vec<SparseVec>,
    pub boundary_rank: usize,
}

pub fn homology(d_in: &RatMatrix, d_out: &RatMatrix) -> Result<Homology> {
    if d_in.rows() != d_out.cols() {
        return Err(Error::DimensionMismatch(format!(
            "d_in has {} rows, d_out has {} columns",
            d_in.rows(),
            d_out.cols()
        )));
    }
    if !d_out.mul(d_in)?.is_zero() {
        return Err(Error::NotAComplex);
    }
    let boundaries = d_in.transpose().rref();
    let cycles = d_out.kernel_vectors();
    let mut span = IncrementalBasis::new();
    for b in boundaries.matrix.row_vectors() {
        span.insert(&b);
    }
    let mut reps = Vec::new();
    for z in &cycles {
        if span.insert(z) {
            reps.push(z.clone());
        }
    }
    Ok(Homology {
        dim: cycles.len() - boundaries.rank,
        representatives: reps,
        cycles,
        boundary_rank: boundaries.rank,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galgebra::rat;

    fn frame3() -> Frame {
        Frame::new(
            ["a", "b", "c"]
                .iter()
                .map(|n| Label {
                    name: n.to_string(),
                    degree: 3,
                })
                .collect(),
        )
    }

    #[test]
    fn homology_with_zero_maps() {
        let h = homology(&RatMatrix::zeros(3, 0), &RatMatrix::zeros(0, 3)).unwrap();
        assert_eq!(h.dim, 3);
    }

    #[test]
    fn exact_spot_has_no_homology() {
        // d_in = [1;0], d_out = [0 1]
        let d_in = RatMatrix::from_i64(&[&[1], &[0]]);
        let d_out = RatMatrix::from_i64(&[&[0, 1]]);
        let h = homology(&d_in, &d_out).unwrap();
        assert_eq!(h.dim, 0);
    }

    #[test]
    fn non_complex_rejected() {
        let d = RatMatrix::identity(2);
        assert!(matches!(homology(&d, &d), Err(Error::NotAComplex)));
    }

    #[test]
    fn sum_contains_summands() {
        let f = frame3();
        let a = Subspace::coordinate(&f, &[0]);
        let b = Subspace::span(&f, &[vec![(1, rat(1)), (2, rat(2))]]);
        let s = a.sum(&b).unwrap();
        assert!(s.includes(&a).unwrap());
        assert!(s.includes(&b).unwrap());
        assert_eq!(s.dim(), 2);
    }

    #[test]
    fn intersect_with_full() {
        let f = frame3();
        let a = Subspace::span(&f, &[vec![(0, rat(1)), (2, rat(-1))]]);
        assert_eq!(a.intersect(&Subspace::full(&f)).unwrap(), a);
    }

    #[test]
    fn ambient_mismatch() {
        let a = Subspace::zero(&frame3());
        let b = Subspace::zero(&Frame::anonymous(3));
        assert_eq!(a.sum(&b), Err(Error::AmbientMismatch));
    }

    #[test]
    fn render_coordinate_basis() {
        let f = frame3();
        let s = Subspace::coordinate_by_name(&f, &["c", "a"]).unwrap();
        assert_eq!(s.render_basis(), ["a", "c"]);
    }
}
