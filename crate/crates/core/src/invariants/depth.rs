use rayon::prelude::*;

use super::gottlieb::fibre_gottlieb;
use crate::error::{Error, Result};
use crate::model::{cohomology, formal_dimension_estimate, RelativeModel, SullivanModel};
use crate::qlinalg::Subspace;

/// Longest strict chain of realized subspaces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DepthResult {
    /// Number of strict steps; −1 when nothing is realized.
    pub depth: i64,
    /// Witness ids from the largest subspace down.
    pub witness: Vec<String>,
    pub chain: Vec<Subspace>,
}

/// Vanishing-window test for the total space: `H^k = 0` for
/// `fd < k ≤ fd + window`. Unknown formal dimension fails the test.
pub fn finiteness_gate(f: &RelativeModel, window: u32) -> Result<bool> {
    let total = f.total();
    let Some(fd) = formal_dimension_estimate(total) else {
        return Ok(false);
    };
    let h = cohomology(total, fd + window)?;
    Ok(h[(fd as usize + 1)..].iter().all(|c| c.dim == 0))
}

/// Same generators (names, degrees, order) and same differential.
pub fn same_fiber(a: &SullivanModel, b: &SullivanModel) -> bool {
    a.gens().same_as(b.gens()) && (0..a.gens().len()).all(|i| a.d(i) == b.d(i))
}

/// Distinct subspaces with the smallest id realizing each, ordered by
/// decreasing dimension, then by rendered basis.
pub fn distinct_subspaces(items: &[(String, Subspace)]) -> Result<Vec<(Vec<String>, Subspace)>> {
    let mut nodes: Vec<(Vec<String>, Subspace)> = Vec::new();
    for (id, s) in items {
        let mut found = false;
        for (ids, t) in nodes.iter_mut() {
            if t.equals(s)? {
                ids.push(id.clone());
                found = true;
                break;
            }
        }
        if !found {
            nodes.push((vec![id.clone()], s.clone()));
        }
    }
    for (ids, _) in nodes.iter_mut() {
        ids.sort();
    }
    nodes.sort_by(|(_, a), (_, b)| {
        b.dim()
            .cmp(&a.dim())
            .then_with(|| a.render_basis().cmp(&b.render_basis()))
    });
    Ok(nodes)
}

/// Depth of a family of realized subspaces.
pub fn depth_of_subspaces(items: &[(String, Subspace)]) -> Result<DepthResult> {
    let nodes = distinct_subspaces(items)?;
    if nodes.is_empty() {
        return Ok(DepthResult {
            depth: -1,
            witness: Vec::new(),
            chain: Vec::new(),
        });
    }
    // nodes are sorted by decreasing dimension, so strict supersets come first
    let k = nodes.len();
    let mut best = vec![0i64; k];
    let mut prev: Vec<Option<usize>> = vec![None; k];
    for i in 0..k {
        for j in 0..i {
            if nodes[j].1.dim() > nodes[i].1.dim()
                && nodes[j].1.includes(&nodes[i].1)?
                && best[j] + 1 > best[i]
            {
                best[i] = best[j] + 1;
                prev[i] = Some(j);
            }
        }
    }
    let (mut end, depth) =
        (0..k)
            .map(|i| (i, best[i]))
            .fold((0, -1), |acc, x| if x.1 > acc.1 { x } else { acc });
    let mut path = vec![end];
    while let Some(p) = prev[end] {
        path.push(p);
        end = p;
    }
    path.reverse();
    Ok(DepthResult {
        depth,
        witness: path.iter().map(|&i| nodes[i].0[0].clone()).collect(),
        chain: path.iter().map(|&i| nodes[i].1.clone()).collect(),
    })
}

/// Fibre-restricted Gottlieb subspaces of every catalog entry after the
/// fiber check and, when `window` is given, the finiteness gate.
pub fn realized_subspaces(
    fiber: &SullivanModel,
    catalog: &[(String, RelativeModel)],
    window: Option<u32>,
) -> Result<Vec<(String, Subspace)>> {
    for (id, f) in catalog {
        if !same_fiber(fiber, f.fiber()) {
            return Err(Error::FiberMismatch(id.clone()));
        }
    }
    if let Some(w) = window {
        let gates = catalog
            .par_iter()
            .map(|(id, f)| finiteness_gate(f, w).map(|ok| (id.clone(), ok)))
            .collect::<Result<Vec<_>>>()?;
        let failing: Vec<String> = gates
            .into_iter()
            .filter(|(_, ok)| !ok)
            .map(|(id, _)| id)
            .collect();
        if !failing.is_empty() {
            return Err(Error::NotFiniteAtBound(failing));
        }
    }
    catalog
        .par_iter()
        .map(|(id, f)| fibre_gottlieb(f).map(|g| (id.clone(), g.subspace)))
        .collect()
}

/// `depth_Y(X)` over a catalog of fibrations with fiber `X`.
pub fn depth_over_catalog(
    fiber: &SullivanModel,
    catalog: &[(String, RelativeModel)],
    window: Option<u32>,
) -> Result<DepthResult> {
    depth_of_subspaces(&realized_subspaces(fiber, catalog, window)?)
}
