use std::cmp::Ordering;

use super::Gens;
use crate::error::{Error, Result};

/// Sign picked up while reordering factors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_parity(odd: bool) -> Self {
        if odd {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn is_minus(self) -> bool {
        self == Sign::Minus
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        Sign::from_parity(self.is_minus() != rhs.is_minus())
    }
}

/// Normal-form monomial: `(index, exponent)` pairs sorted by index, no zero
/// exponents, odd generators with exponent 1.
///
/// The order is lexicographic on the dense exponent vector with larger
/// exponents first, so `t1^2 < v1*v2` when `t1` is declared before `v1`.
/// Bases returned by [`basis_in_degree`] are sorted in this order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    exps: Vec<(u32, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { exps: Vec::new() }
    }

    pub fn generator(idx: usize) -> Self {
        Monomial {
            exps: vec![(idx as u32, 1)],
        }
    }

    /// Builds from pairs already in normal form. Caller guarantees sorting
    /// and the odd-exponent rule.
    pub(crate) fn from_sorted(exps: Vec<(u32, u32)>) -> Self {
        debug_assert!(exps.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(exps.iter().all(|&(_, e)| e > 0));
        Monomial { exps }
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    /// `(generator index, exponent)` pairs in index order.
    pub fn factors(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.exps.iter().map(|&(i, e)| (i as usize, e))
    }

    pub fn exponent(&self, idx: usize) -> u32 {
        self.exps
            .iter()
            .find(|&&(i, _)| i as usize == idx)
            .map_or(0, |&(_, e)| e)
    }

    pub fn degree(&self, gens: &Gens) -> u32 {
        self.factors().map(|(i, e)| e * gens.degree(i)).sum()
    }

    /// Number of generator factors counted with multiplicity.
    pub fn length(&self) -> u32 {
        self.exps.iter().map(|&(_, e)| e).sum()
    }

    pub fn contains_any(&self, pred: impl Fn(usize) -> bool) -> bool {
        self.factors().any(|(i, _)| pred(i))
    }

    /// Product in normal form with the Koszul sign, or `None` when an odd
    /// generator would appear twice.
    pub fn mul(&self, other: &Monomial, gens: &Gens) -> Option<(Sign, Monomial)> {
        let mut out = Vec::with_capacity(self.exps.len() + other.exps.len());
        let (mut i, mut j) = (0, 0);
        // odd factors of `self` not yet passed by the merge; every odd factor
        // of `other` placed now moves left past all of them
        let mut odd_left: usize = self
            .exps
            .iter()
            .filter(|&&(g, _)| gens.is_odd(g as usize))
            .count();
        let mut swaps = 0usize;
        while i < self.exps.len() || j < other.exps.len() {
            let take_left = match (self.exps.get(i), other.exps.get(j)) {
                (Some(a), Some(b)) => match a.0.cmp(&b.0) {
                    Ordering::Less => true,
                    Ordering::Greater => false,
                    Ordering::Equal => {
                        if gens.is_odd(a.0 as usize) {
                            return None;
                        }
                        out.push((a.0, a.1 + b.1));
                        i += 1;
                        j += 1;
                        continue;
                    }
                },
                (Some(_), None) => true,
                (None, _) => false,
            };
            if take_left {
                let a = self.exps[i];
                if gens.is_odd(a.0 as usize) {
                    odd_left -= 1;
                }
                out.push(a);
                i += 1;
            } else {
                let b = other.exps[j];
                if gens.is_odd(b.0 as usize) {
                    swaps += odd_left;
                }
                out.push(b);
                j += 1;
            }
        }
        Some((Sign::from_parity(swaps % 2 == 1), Monomial { exps: out }))
    }

    /// Relabels generator indices through `map`, which must be strictly
    /// increasing on the support so the normal form is preserved.
    pub(crate) fn reindex(&self, map: impl Fn(usize) -> usize) -> Monomial {
        let exps: Vec<_> = self
            .exps
            .iter()
            .map(|&(g, e)| (map(g as usize) as u32, e))
            .collect();
        Monomial::from_sorted(exps)
    }

    pub fn display(&self, gens: &Gens) -> String {
        if self.is_one() {
            return "1".to_string();
        }
        self.factors()
            .map(|(i, e)| {
                if e == 1 {
                    gens.name(i).to_string()
                } else {
                    format!("{}^{}", gens.name(i), e)
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let (mut i, mut j) = (0, 0);
        loop {
            match (self.exps.get(i), other.exps.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Less,
                (None, Some(_)) => return Ordering::Greater,
                (Some(a), Some(b)) => match a.0.cmp(&b.0) {
                    Ordering::Less => return Ordering::Less,
                    Ordering::Greater => return Ordering::Greater,
                    Ordering::Equal => match b.1.cmp(&a.1) {
                        Ordering::Equal => {
                            i += 1;
                            j += 1;
                        }
                        ord => return ord,
                    },
                },
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Normal form of an ordered product `x_1^{e_1} ... x_k^{e_k}`.
///
/// Returns `Ok(None)` when the product vanishes because an odd generator
/// occurs with total exponent at least 2.
pub fn normalize_product(
    gens: &Gens,
    factors: &[(usize, u32)],
) -> Result<Option<(Sign, Monomial)>> {
    let mut odd_seq: Vec<usize> = Vec::new();
    let mut exps: Vec<u32> = vec![0; gens.len()];
    for &(g, e) in factors {
        if g >= gens.len() {
            return Err(Error::UnknownGenerator(format!("#{g}")));
        }
        if e == 0 {
            continue;
        }
        if gens.is_odd(g) {
            if e > 1 || exps[g] > 0 {
                return Ok(None);
            }
            odd_seq.push(g);
        }
        exps[g] += e;
    }
    let mut inversions = 0usize;
    for (k, &a) in odd_seq.iter().enumerate() {
        inversions += odd_seq[k + 1..].iter().filter(|&&b| b < a).count();
    }
    let sorted = exps
        .iter()
        .enumerate()
        .filter(|&(_, &e)| e > 0)
        .map(|(g, &e)| (g as u32, e))
        .collect();
    Ok(Some((
        Sign::from_parity(inversions % 2 == 1),
        Monomial::from_sorted(sorted),
    )))
}

/// All normal-form monomials of total degree `n`, sorted.
pub fn basis_in_degree(gens: &Gens, n: u32) -> Vec<Monomial> {
    basis_in_degree_where(gens, n, |_| true)
}

/// Monomials of degree `n` using only generators accepted by `allow`.
pub fn basis_in_degree_where(gens: &Gens, n: u32, allow: impl Fn(usize) -> bool) -> Vec<Monomial> {
    let allowed: Vec<usize> = (0..gens.len()).filter(|&g| allow(g)).collect();
    let mut out = Vec::new();
    let mut current = Vec::new();
    fill(gens, &allowed, 0, n, &mut current, &mut out);
    out.sort();
    out
}

fn fill(
    gens: &Gens,
    allowed: &[usize],
    pos: usize,
    remaining: u32,
    current: &mut Vec<(u32, u32)>,
    out: &mut Vec<Monomial>,
) {
    if remaining == 0 {
        out.push(Monomial::from_sorted(current.clone()));
        return;
    }
    if pos == allowed.len() {
        return;
    }
    let g = allowed[pos];
    let d = gens.degree(g);
    let max_e = if gens.is_odd(g) {
        1.min(remaining / d)
    } else {
        remaining / d
    };
    for e in (0..=max_e).rev() {
        if e > 0 {
            current.push((g as u32, e));
        }
        fill(gens, allowed, pos + 1, remaining - e * d, current, out);
        if e > 0 {
            current.pop();
        }
    }
}
