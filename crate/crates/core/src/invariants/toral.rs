use std::fmt;

use crate::error::{Error, Result};
use crate::model::{cohomology, formal_dimension_estimate, RelativeModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// Total cohomology vanishes on the whole window: `r_0 ≥ r`.
    Certified,
    /// The top of the window still carries a class in the base ideal.
    RefutedAtBound,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Certified => "certified",
            Verdict::RefutedAtBound => "refuted-at-bound",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToralCertificate {
    /// Number of degree-2 base generators.
    pub r: usize,
    pub formal_dimension: Option<u32>,
    /// Top degree of the window that was examined.
    pub finite_through: u32,
    pub verdict: Verdict,
}

/// Bounded test of `dim H^*(Q[t_1..t_r] ⊗ ΛW, D) < ∞` on the window
/// `(fd, fd + window]`, `fd` the formal dimension estimate of the total.
pub fn toral_certificate(f: &RelativeModel, window: u32) -> Result<ToralCertificate> {
    let base = f.base().gens();
    if let Some(g) = base.iter().find(|g| g.degree != 2) {
        return Err(Error::BaseNotDegreeTwo(g.name.clone()));
    }
    let total = f.total();
    let r = base.len();
    let Some(fd) = formal_dimension_estimate(total) else {
        return Ok(ToralCertificate {
            r,
            formal_dimension: None,
            finite_through: 0,
            verdict: Verdict::Inconclusive,
        });
    };
    let top = fd + window;
    let h = cohomology(total, top)?;
    let window_dims = &h[(fd as usize + 1)..];
    let verdict = if window_dims.iter().all(|c| c.dim == 0) {
        Verdict::Certified
    } else {
        let last = h.last().expect("nonempty");
        let in_ideal = last.representatives.iter().any(|rep| {
            rep.terms()
                .all(|(m, _)| m.contains_any(|g| f.is_base_index(g)))
        });
        if last.dim > 0 && in_ideal {
            Verdict::RefutedAtBound
        } else {
            Verdict::Inconclusive
        }
    };
    Ok(ToralCertificate {
        r,
        formal_dimension: Some(fd),
        finite_through: top,
        verdict,
    })
}
