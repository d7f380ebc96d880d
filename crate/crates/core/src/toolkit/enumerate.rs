use rayon::prelude::*;

use super::Catalog;
use crate::error::{Error, Result};
use crate::galgebra::{basis_in_degree, rat, AlgElement, Monomial, Rational};
use crate::invariants::finiteness_gate;
use crate::model::{RelativeModel, SullivanModel};

#[derive(Debug, Clone)]
pub struct EnumerateOptions {
    /// Coefficients tried for every admissible monomial.
    pub coeffs: Vec<Rational>,
    /// Keep only entries passing the finiteness gate with this window.
    pub require_finite: Option<u32>,
    pub cap: u128,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        EnumerateOptions {
            coeffs: vec![rat(0), rat(1)],
            require_finite: None,
            cap: 1_000_000,
        }
    }
}

/// Monomials of degree `|w| + 1` in `ΛV⊗ΛW` containing a base generator,
/// one list per fiber generator.
pub fn admissible_monomials(
    fiber: &SullivanModel,
    base: &SullivanModel,
) -> Result<Vec<Vec<Monomial>>> {
    let total = base.gens().union(fiber.gens())?;
    let offset = base.gens().len();
    Ok(fiber
        .gens()
        .iter()
        .map(|g| {
            basis_in_degree(&total, g.degree + 1)
                .into_iter()
                .filter(|m| m.contains_any(|i| i < offset))
                .collect()
        })
        .collect())
}

/// Every `D(w) = d(w) + Σ c_m m` over admissible monomials with `c_m` in
/// the coefficient set, keeping those with `D∘D = 0`.
pub fn enumerate_fibrations(
    fiber: &SullivanModel,
    base: &SullivanModel,
    opts: &EnumerateOptions,
) -> Result<Catalog> {
    let slots: Vec<(usize, Monomial)> = admissible_monomials(fiber, base)?
        .into_iter()
        .enumerate()
        .flat_map(|(w, ms)| ms.into_iter().map(move |m| (w, m)))
        .collect();
    let k = opts.coeffs.len() as u128;
    if k == 0 {
        return Err(Error::Input("empty coefficient set".into()));
    }
    let count = (0..slots.len())
        .try_fold(1u128, |acc, _| acc.checked_mul(k))
        .unwrap_or(u128::MAX);
    if count > opts.cap {
        return Err(Error::CombinatorialBlowup {
            count,
            cap: opts.cap,
        });
    }
    let total = base.gens().union(fiber.gens())?;
    let offset = base.gens().len();
    let width = count.saturating_sub(1).to_string().len();
    let prefix = format!("{}-over-{}", fiber.name(), base.name());
    let lifted: Vec<AlgElement> = (0..fiber.gens().len())
        .map(|i| {
            fiber
                .d(i)
                .transport(&total, |m| Some(m.reindex(|g| g + offset)))
        })
        .collect();
    let declared: Vec<(usize, AlgElement)> = (0..fiber.gens().len())
        .map(|i| (i, fiber.d(i).clone()))
        .collect();

    let candidates: Vec<Option<(String, RelativeModel)>> = (0..count)
        .into_par_iter()
        .map(|idx| -> Result<Option<(String, RelativeModel)>> {
            let mut diffs = lifted.clone();
            let mut rest = idx;
            for (w, m) in &slots {
                let c = &opts.coeffs[(rest % k) as usize];
                rest /= k;
                diffs[*w] = &diffs[*w] + &AlgElement::monomial(&total, m.clone(), c.clone());
            }
            let id = format!("{prefix}-{idx:0width$}");
            let total_diff = diffs.into_iter().enumerate().collect();
            match RelativeModel::new(
                id.clone(),
                base.clone(),
                fiber.gens().clone(),
                total_diff,
                Some(declared.clone()),
            ) {
                Ok(f) => Ok(Some((id, f))),
                Err(Error::NotClosed(_)) => Ok(None),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<_>>()?;
    let mut entries: Vec<(String, RelativeModel)> = candidates.into_iter().flatten().collect();
    if let Some(window) = opts.require_finite {
        let keep = entries
            .par_iter()
            .map(|(_, f)| finiteness_gate(f, window))
            .collect::<Result<Vec<bool>>>()?;
        entries = entries
            .into_iter()
            .zip(keep)
            .filter(|(_, k)| *k)
            .map(|(e, _)| e)
            .collect();
    }
    Catalog::new(Some(fiber.clone()), entries)
}
