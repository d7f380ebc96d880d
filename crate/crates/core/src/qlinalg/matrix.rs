use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::galgebra::Rational;

/// Sparse vector: sorted `(index, value)` pairs with no stored zeros.
pub type SparseVec = Vec<(usize, Rational)>;

/// Sparse exact rational matrix stored by rows.
#[derive(Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BTreeMap<usize, Rational>>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![BTreeMap::new(); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged matrix literal");
            for (j, &v) in r.iter().enumerate() {
                m.set(i, j, Rational::from_integer(v.into()));
            }
        }
        m
    }

    /// Builds a `rows x columns.len()` matrix from sparse columns.
    pub fn from_columns(rows: usize, columns: &[SparseVec]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            for (i, v) in col {
                m.set(*i, j, v.clone());
            }
        }
        m
    }

    pub fn from_rows(cols: usize, rows: &[SparseVec]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            for (j, v) in row {
                m.set(i, *j, v.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Rational {
        self.data[i].get(&j).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        assert!(i < self.rows && j < self.cols, "index out of range");
        if v.is_zero() {
            self.data[i].remove(&j);
        } else {
            self.data[i].insert(j, v);
        }
    }

    pub fn row(&self, i: usize) -> SparseVec {
        self.data[i].iter().map(|(j, v)| (*j, v.clone())).collect()
    }

    pub fn row_vectors(&self) -> Vec<SparseVec> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|r| r.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.is_empty())
    }

    pub fn transpose(&self) -> RatMatrix {
        let mut t = RatMatrix::zeros(self.cols, self.rows);
        for (i, row) in self.data.iter().enumerate() {
            for (j, v) in row {
                t.data[*j].insert(i, v.clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &RatMatrix) -> Result<RatMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = RatMatrix::zeros(self.rows, other.cols);
        for (i, row) in self.data.iter().enumerate() {
            let acc = &mut out.data[i];
            for (k, a) in row {
                for (j, b) in &other.data[*k] {
                    let e = acc.entry(*j).or_insert_with(Rational::zero);
                    *e += a * b;
                }
            }
            acc.retain(|_, v| !v.is_zero());
        }
        Ok(out)
    }

    /// `self * v` for a sparse column vector.
    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let dense: BTreeMap<usize, &Rational> = v.iter().map(|(i, x)| (*i, x)).collect();
        let mut out = Vec::new();
        for (i, row) in self.data.iter().enumerate() {
            let mut s = Rational::zero();
            for (j, a) in row {
                if let Some(x) = dense.get(j) {
                    s += a * *x;
                }
            }
            if !s.is_zero() {
                out.push((i, s));
            }
        }
        out
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &RatMatrix) -> Result<RatMatrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch("vstack".into()));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(RatMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn select_rows(&self, rows: &[usize]) -> RatMatrix {
        RatMatrix {
            rows: rows.len(),
            cols: self.cols,
            data: rows.iter().map(|&i| self.data[i].clone()).collect(),
        }
    }

    /// Reduced row-echelon form.
    pub fn rref(&self) -> Rref {
        let rows: Vec<IntRow> = self.data.iter().filter_map(IntRow::from_rational).collect();
        let (reduced, pivots) = gauss_jordan(rows);
        let mut m = RatMatrix::zeros(reduced.len(), self.cols);
        for (i, (row, &p)) in reduced.iter().zip(&pivots).enumerate() {
            let lead = row.get(p).expect("pivot present").clone();
            for (j, v) in &row.0 {
                m.data[i].insert(*j, Rational::new(v.clone(), lead.clone()));
            }
        }
        Rref {
            rank: pivots.len(),
            matrix: m,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        let rows: Vec<IntRow> = self.data.iter().filter_map(IntRow::from_rational).collect();
        gauss_jordan(rows).1.len()
    }

    /// Basis of `{x : self * x = 0}` as sparse vectors of length `cols`.
    pub fn kernel_vectors(&self) -> Vec<SparseVec> {
        let r = self.rref();
        let pivot_set: std::collections::HashSet<usize> = r.pivots.iter().copied().collect();
        let mut out = Vec::new();
        for f in (0..self.cols).filter(|c| !pivot_set.contains(c)) {
            let mut v: SparseVec = Vec::new();
            for (i, &p) in r.pivots.iter().enumerate() {
                let a = r.matrix.get(i, f);
                if !a.is_zero() {
                    v.push((p, -a));
                }
            }
            v.push((f, Rational::one()));
            v.sort_by_key(|e| e.0);
            out.push(v);
        }
        out
    }
}

/// Result of [`RatMatrix::rref`]: nonzero rows only, leading entries 1.
#[derive(Debug, Clone)]
pub struct Rref {
    pub matrix: RatMatrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RatMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Primitive integer row: entries share no common factor and the leading
/// entry is positive.
#[derive(Clone)]
struct IntRow(Vec<(usize, BigInt)>);

impl IntRow {
    fn from_rational(row: &BTreeMap<usize, Rational>) -> Option<IntRow> {
        if row.is_empty() {
            return None;
        }
        let lcm = row
            .values()
            .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let entries = row
            .iter()
            .map(|(j, v)| (*j, v.numer() * (&lcm / v.denom())))
            .collect();
        let mut r = IntRow(entries);
        r.normalize();
        Some(r)
    }

    fn get(&self, col: usize) -> Option<&BigInt> {
        self.0
            .binary_search_by_key(&col, |e| e.0)
            .ok()
            .map(|k| &self.0[k].1)
    }

    fn normalize(&mut self) {
        let mut g = BigInt::zero();
        for (_, v) in &self.0 {
            g = g.gcd(v);
            if g.is_one() {
                break;
            }
        }
        if self.0.first().is_some_and(|(_, v)| v.is_negative()) {
            g = -g;
        }
        if !g.is_one() {
            for (_, v) in &mut self.0 {
                *v = &*v / &g;
            }
        }
    }

    /// `p * self - a * other`, made primitive.
    fn combine(&self, p: &BigInt, a: &BigInt, other: &IntRow) -> Option<IntRow> {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < other.0.len() {
            let ci = self.0.get(i).map(|e| e.0);
            let cj = other.0.get(j).map(|e| e.0);
            match (ci, cj) {
                (Some(x), Some(y)) if x == y => {
                    let v = p * &self.0[i].1 - a * &other.0[j].1;
                    if !v.is_zero() {
                        out.push((x, v));
                    }
                    i += 1;
                    j += 1;
                }
                (Some(x), Some(y)) if x < y => {
                    out.push((x, p * &self.0[i].1));
                    i += 1;
                }
                (Some(x), None) => {
                    out.push((x, p * &self.0[i].1));
                    i += 1;
                }
                (_, Some(y)) => {
                    out.push((y, -(a * &other.0[j].1)));
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        if out.is_empty() {
            return None;
        }
        let mut r = IntRow(out);
        r.normalize();
        Some(r)
    }
}

fn gauss_jordan(mut rows: Vec<IntRow>) -> (Vec<IntRow>, Vec<usize>) {
    let mut pivots: Vec<usize> = Vec::new();
    let mut done: Vec<IntRow> = Vec::new();
    // next pivot column: smallest leading column among remaining rows
    while let Some(col) = rows.iter().map(|r| r.0[0].0).min() {
        let pick = rows
            .iter()
            .enumerate()
            .filter(|(_, r)| r.0[0].0 == col)
            .min_by_key(|(_, r)| (r.0.len(), r.0[0].1.bits()))
            .map(|(k, _)| k)
            .expect("pivot exists");
        let pivot = rows.swap_remove(pick);
        let p = pivot.0[0].1.clone();
        let mut next = Vec::with_capacity(rows.len());
        for r in rows.drain(..) {
            if r.0[0].0 == col {
                let a = r.0[0].1.clone();
                if let Some(c) = r.combine(&p, &a, &pivot) {
                    next.push(c);
                }
            } else {
                next.push(r);
            }
        }
        rows = next;
        for d in done.iter_mut() {
            if let Some(a) = d.get(col).cloned() {
                *d = d.combine(&p, &a, &pivot).expect("pivot row cannot vanish");
            }
        }
        done.push(pivot);
        pivots.push(col);
    }
    (done, pivots)
}
