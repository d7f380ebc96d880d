use super::Catalog;
use crate::error::Result;
use crate::invariants::{distinct_subspaces, realized_subspaces};
use crate::qlinalg::Subspace;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PosetNode {
    pub subspace: Subspace,
    /// Catalog ids realizing the subspace, sorted.
    pub witnesses: Vec<String>,
}

/// Inclusion order on distinct realized subspaces. Edges are covering
/// relations and point from the larger to the smaller subspace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poset {
    pub nodes: Vec<PosetNode>,
    pub edges: Vec<(usize, usize)>,
}

impl Poset {
    pub fn from_subspaces(items: &[(String, Subspace)]) -> Result<Self> {
        let nodes: Vec<PosetNode> = distinct_subspaces(items)?
            .into_iter()
            .map(|(witnesses, subspace)| PosetNode {
                subspace,
                witnesses,
            })
            .collect();
        let k = nodes.len();
        // below[i][j]: node j is strictly contained in node i
        let mut below = vec![vec![false; k]; k];
        for i in 0..k {
            for j in 0..k {
                let (a, b) = (&nodes[i].subspace, &nodes[j].subspace);
                below[i][j] = a.dim() > b.dim() && a.includes(b)?;
            }
        }
        let mut edges = Vec::new();
        for i in 0..k {
            for j in 0..k {
                if below[i][j] && !(0..k).any(|m| below[i][m] && below[m][j]) {
                    edges.push((i, j));
                }
            }
        }
        Ok(Poset { nodes, edges })
    }

    /// Number of edges on the longest path; −1 for the empty poset.
    pub fn depth(&self) -> i64 {
        if self.nodes.is_empty() {
            return -1;
        }
        // nodes are sorted by decreasing dimension, so edges go forward
        let mut longest = vec![0i64; self.nodes.len()];
        for i in 0..self.nodes.len() {
            for &(a, b) in &self.edges {
                if b == i {
                    longest[i] = longest[i].max(longest[a] + 1);
                }
            }
        }
        longest.into_iter().max().unwrap_or(0)
    }

    /// Reachability through edges, including the trivial path.
    pub fn reachability(&self) -> Vec<Vec<bool>> {
        let k = self.nodes.len();
        let mut r = vec![vec![false; k]; k];
        for (i, row) in r.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in &self.edges {
            r[a][b] = true;
        }
        for m in 0..k {
            let row_m = r[m].clone();
            for row in r.iter_mut().filter(|row| row[m]) {
                for (cell, &reach) in row.iter_mut().zip(&row_m) {
                    *cell |= reach;
                }
            }
        }
        r
    }
}

/// Poset of the fibre-restricted Gottlieb subspaces of a catalog. With a
/// window every entry must pass the finiteness gate.
pub fn build_poset(c: &Catalog, window: Option<u32>) -> Result<Poset> {
    Poset::from_subspaces(&realized_subspaces(&c.fiber, &c.entries, window)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlinalg::Frame;

    fn items(sets: &[&[usize]]) -> Vec<(String, Subspace)> {
        let frame = Frame::anonymous(3);
        sets.iter()
            .enumerate()
            .map(|(i, s)| (format!("f{i}"), Subspace::coordinate(&frame, s)))
            .collect()
    }

    #[test]
    fn singleton_has_no_edges() {
        let p = Poset::from_subspaces(&items(&[&[0, 1]])).unwrap();
        assert_eq!(p.nodes.len(), 1);
        assert!(p.edges.is_empty());
        assert_eq!(p.depth(), 0);
    }

    #[test]
    fn diamond_keeps_only_covers() {
        let p = Poset::from_subspaces(&items(&[&[2], &[0, 1, 2], &[0, 2], &[1, 2]])).unwrap();
        let dims: Vec<usize> = p.nodes.iter().map(|n| n.subspace.dim()).collect();
        assert_eq!(dims, [3, 2, 2, 1]);
        assert_eq!(p.edges, [(0, 1), (0, 2), (1, 3), (2, 3)]);
        assert_eq!(p.depth(), 2);
        assert!(p.reachability()[0][3]);
    }

    #[test]
    fn empty_poset_depth() {
        assert_eq!(Poset::from_subspaces(&[]).unwrap().depth(), -1);
    }
}
