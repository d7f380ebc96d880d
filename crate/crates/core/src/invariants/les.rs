//! The short exact sequence of derivation complexes
//! `0 → Der(ideal) → Der_rel → Der(ΛW) → 0` and its homology sequence.

use std::fmt;

use crate::dercx::{inclusion_between, restriction_between, ComplexSlice, DerComplex, Scope};
use crate::error::{Error, Result};
use crate::galgebra::Rational;
use crate::model::RelativeModel;
use crate::qlinalg::{IncrementalBasis, RatMatrix, SparseVec};

/// One term `H_n(C)` of the long exact sequence with the ranks of the maps
/// entering and leaving it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LesNode {
    pub label: String,
    pub degree: u32,
    pub dim: usize,
    pub rank_in: usize,
    pub rank_out: usize,
    /// Composite of the incoming and outgoing maps vanishes on homology.
    pub composite_zero: bool,
}

impl LesNode {
    pub fn is_exact(&self) -> bool {
        self.composite_zero && self.dim == self.rank_in + self.rank_out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LesReport {
    pub nodes: Vec<LesNode>,
}

impl LesReport {
    pub fn is_exact(&self) -> bool {
        self.nodes.iter().all(LesNode::is_exact)
    }
}

impl fmt::Display for LesReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for n in &self.nodes {
            writeln!(
                f,
                "{:<10} dim {:>3}  in {:>3}  out {:>3}  {}",
                n.label,
                n.dim,
                n.rank_in,
                n.rank_out,
                if n.is_exact() { "exact" } else { "NOT EXACT" }
            )?;
        }
        Ok(())
    }
}

/// Cycles, boundaries and slice of one complex in one degree. Degree 0
/// closes the complex: everything is a cycle.
struct Level {
    slice: ComplexSlice,
    cycles: Vec<SparseVec>,
    boundaries: IncrementalBasis,
    boundary_rank: usize,
    d_out: Option<RatMatrix>,
}

impl Level {
    fn build(cx: &DerComplex<'_>, n: u32) -> Result<Level> {
        let slice = cx.slice(n)?;
        let d_in = cx.boundary_between(&cx.slice(n + 1)?, &slice)?;
        let (cycles, d_out) = if n == 0 {
            (
                (0..slice.len())
                    .map(|j| vec![(j, Rational::from_integer(1.into()))])
                    .collect(),
                None,
            )
        } else {
            let d = cx.boundary_between(&slice, &cx.slice(n - 1)?)?;
            (d.kernel_vectors(), Some(d))
        };
        let mut boundaries = IncrementalBasis::new();
        for col in d_in.transpose().row_vectors() {
            boundaries.insert(&col);
        }
        let boundary_rank = boundaries.len();
        Ok(Level {
            slice,
            cycles,
            boundaries,
            boundary_rank,
            d_out,
        })
    }

    fn dim(&self) -> usize {
        self.cycles.len() - self.boundary_rank
    }

    /// Rank in homology of the span of `vectors` (all cycles here).
    fn rank_of(&self, vectors: &[SparseVec]) -> usize {
        let mut span = self.boundaries.clone();
        vectors.iter().filter(|v| span.insert(v)).count()
    }

    fn all_boundaries(&self, vectors: &[SparseVec]) -> bool {
        vectors
            .iter()
            .all(|v| v.is_empty() || self.boundaries.contains(v))
    }
}

struct Degree {
    ideal: Level,
    rel: Level,
    abs: Level,
    incl: RatMatrix,
    res: RatMatrix,
}

fn degree_data(f: &RelativeModel, cxs: &[DerComplex<'_>; 3], n: u32) -> Result<Degree> {
    let ideal = Level::build(&cxs[0], n)?;
    let rel = Level::build(&cxs[1], n)?;
    let abs = Level::build(&cxs[2], n)?;
    let incl = inclusion_between(&ideal.slice, &rel.slice);
    let res = restriction_between(f, &rel.slice, &abs.slice);
    Ok(Degree {
        ideal,
        rel,
        abs,
        incl,
        res,
    })
}

/// Section of the restriction: a fiber pair lifts to the same relative pair.
fn lift(f: &RelativeModel, abs: &ComplexSlice, rel: &ComplexSlice, v: &SparseVec) -> SparseVec {
    let offset = f.fiber_offset();
    let mut out: SparseVec = v
        .iter()
        .map(|(j, c)| {
            let (w, m) = &abs.pairs()[*j];
            let lifted = m.reindex(|g| g + offset);
            (
                rel.position(w + offset, &lifted).expect("lift exists"),
                c.clone(),
            )
        })
        .collect();
    out.sort_by_key(|(j, _)| *j);
    out
}

/// Connecting map `H_n(abs) → H_{n−1}(ideal)` applied to absolute cycles.
fn connecting(
    f: &RelativeModel,
    hi: &Degree,
    lo: &Degree,
    cycles: &[SparseVec],
) -> Result<Vec<SparseVec>> {
    let d_rel = hi.rel.d_out.as_ref().expect("n >= 1");
    cycles
        .iter()
        .map(|z| {
            let image = d_rel.apply(&lift(f, &hi.abs.slice, &hi.rel.slice, z));
            let mut out = SparseVec::new();
            for (j, c) in image {
                let (w, m) = &lo.rel.slice.pairs()[j];
                let k = lo.ideal.slice.position(*w, m).ok_or_else(|| {
                    Error::Invariant("connecting image is not ideal-valued".into())
                })?;
                out.push((k, c));
            }
            out.sort_by_key(|(k, _)| *k);
            Ok(out)
        })
        .collect()
}

/// Ranks of the homology long exact sequence for `n` in `degrees`.
///
/// For every `n` the nodes `H_n(rel)`, `H_n(abs)` and `H_{n−1}(ideal)` are
/// checked: the incoming and outgoing maps compose to zero and the ranks
/// add up to the dimension.
pub fn les_check(f: &RelativeModel, degrees: std::ops::RangeInclusive<u32>) -> Result<LesReport> {
    let (lo_n, hi_n) = (*degrees.start(), *degrees.end());
    if lo_n == 0 || lo_n > hi_n {
        return Err(Error::Input(format!("invalid degree range {lo_n}..{hi_n}")));
    }
    let cxs = [
        DerComplex::new(f, Scope::IdealValued)?,
        DerComplex::new(f, Scope::Relative)?,
        DerComplex::new(f, Scope::Absolute)?,
    ];
    let data: Vec<Degree> = ((lo_n - 1)..=hi_n)
        .map(|n| degree_data(f, &cxs, n))
        .collect::<Result<_>>()?;
    let at = |n: u32| &data[(n - (lo_n - 1)) as usize];

    let incl_img =
        |d: &Degree| -> Vec<SparseVec> { d.ideal.cycles.iter().map(|z| d.incl.apply(z)).collect() };
    let res_img =
        |d: &Degree| -> Vec<SparseVec> { d.rel.cycles.iter().map(|z| d.res.apply(z)).collect() };

    let mut nodes = Vec::new();
    for n in (lo_n..=hi_n).rev() {
        let (hi, lo) = (at(n), at(n - 1));
        let conn = connecting(f, hi, lo, &hi.abs.cycles)?;
        let rank_i = hi.rel.rank_of(&incl_img(hi));
        let rank_r = hi.abs.rank_of(&res_img(hi));
        let rank_c = lo.ideal.rank_of(&conn);
        let rank_i_lo = lo.rel.rank_of(&incl_img(lo));

        // res∘incl = 0 on chains
        let ri = hi.res.mul(&hi.incl)?.is_zero();
        nodes.push(LesNode {
            label: format!("H{n}(rel)"),
            degree: n,
            dim: hi.rel.dim(),
            rank_in: rank_i,
            rank_out: rank_r,
            composite_zero: ri,
        });
        let res_then_conn = connecting(f, hi, lo, &res_img(hi))?;
        nodes.push(LesNode {
            label: format!("H{n}(abs)"),
            degree: n,
            dim: hi.abs.dim(),
            rank_in: rank_r,
            rank_out: rank_c,
            composite_zero: lo.ideal.all_boundaries(&res_then_conn),
        });
        let conn_then_incl: Vec<SparseVec> = conn.iter().map(|v| lo.incl.apply(v)).collect();
        nodes.push(LesNode {
            label: format!("H{}(ideal)", n - 1),
            degree: n - 1,
            dim: lo.ideal.dim(),
            rank_in: rank_c,
            rank_out: rank_i_lo,
            composite_zero: lo.rel.all_boundaries(&conn_then_incl),
        });
    }
    Ok(LesReport { nodes })
}
