use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{random_base, random_element, random_fibration, random_model};
use rht_core::dercx::{
    augmentation_matrix, boundary_matrix, der_basis, inclusion_matrix, restriction_matrix,
    DerComplex, Derivation, Scope,
};
use rht_core::galgebra::{rat, AlgElement, Gens};
use rht_core::invariants::{connecting_images, fibre_gottlieb, gottlieb};
use rht_core::model::{
    classify, formal_dimension_estimate, RelativeModel, SullivanModel, DEFAULT_WINDOW,
};
use rht_core::qlinalg::{RatMatrix, SparseVec};

pub type Check = Result<(), String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn mul(a: &RatMatrix, b: &RatMatrix) -> RatMatrix {
    a.mul(b).expect("composable")
}

fn top(gens: &Gens) -> u32 {
    gens.max_degree() + 1
}

/// `Σ_j ± x_1 … φ(x_j) … x_k` over the factors of every monomial, the sign
/// being `(−1)^{shift·(|x_1| + … + |x_{j−1}|)}`.
pub fn dense_leibniz(
    value: &dyn Fn(usize) -> Option<AlgElement>,
    shift: u32,
    gens: &Gens,
    a: &AlgElement,
) -> AlgElement {
    let mut out = AlgElement::zero(gens);
    for (m, c) in a.terms() {
        let word: Vec<usize> = m
            .factors()
            .flat_map(|(g, e)| std::iter::repeat_n(g, e as usize))
            .collect();
        let mut passed = 0u32;
        for (j, &g) in word.iter().enumerate() {
            if let Some(v) = value(g) {
                let mut term = AlgElement::one(gens);
                for &h in &word[..j] {
                    term = &term * &AlgElement::generator(gens, h);
                }
                term = &term * &v;
                for &h in &word[j + 1..] {
                    term = &term * &AlgElement::generator(gens, h);
                }
                let sign = if shift % 2 == 1 && passed % 2 == 1 {
                    -1
                } else {
                    1
                };
                out = &out + &term.scale(&(c * rat(sign)));
            }
            passed += gens.degree(g);
        }
    }
    out
}

pub fn dense_apply(theta: &Derivation, gens: &Gens, a: &AlgElement) -> AlgElement {
    dense_leibniz(&|g| theta.value(g).cloned(), theta.shift, gens, a)
}

/// `δ∘δ = 0` and, for minimal models, `ε∘δ = 0`.
pub fn absolute_complex(m: &SullivanModel) -> Check {
    for n in 2..=top(m.gens()) {
        let hi = boundary_matrix(m, n, Scope::Absolute).unwrap();
        let lo = boundary_matrix(m, n - 1, Scope::Absolute).unwrap();
        ensure(mul(&lo, &hi).is_zero(), || {
            format!("{}: delta^2 != 0 at {n}", m.name())
        })?;
    }
    if !m.is_minimal() {
        return Ok(());
    }
    for n in 1..=m.gens().max_degree() {
        let eps = augmentation_matrix(m, n).unwrap();
        let d = boundary_matrix(m, n + 1, Scope::Absolute).unwrap();
        ensure(mul(&eps, &d).is_zero(), || {
            format!("{}: epsilon meets a boundary at {n}", m.name())
        })?;
    }
    Ok(())
}

/// `δ∘δ = 0` in every scope, restriction and inclusion are chain maps and
/// `ε∘res` kills relative boundaries.
pub fn relative_complex(f: &RelativeModel) -> Check {
    for scope in [Scope::Relative, Scope::IdealValued, Scope::Absolute] {
        for n in 2..=top(f.fiber().gens()) {
            let hi = boundary_matrix(f, n, scope).unwrap();
            let lo = boundary_matrix(f, n - 1, scope).unwrap();
            ensure(mul(&lo, &hi).is_zero(), || {
                format!("{}: delta^2 != 0 at {n} ({scope:?})", f.name())
            })?;
        }
    }
    for n in 1..=top(f.fiber().gens()) {
        let rel = boundary_matrix(f, n, Scope::Relative).unwrap();
        let abs = boundary_matrix(f, n, Scope::Absolute).unwrap();
        let ideal = boundary_matrix(f, n, Scope::IdealValued).unwrap();
        let (res_hi, res_lo) = (
            restriction_matrix(f, n).unwrap(),
            restriction_matrix(f, n - 1).unwrap(),
        );
        ensure(mul(&res_lo, &rel) == mul(&abs, &res_hi), || {
            format!("{}: restriction not a chain map at {n}", f.name())
        })?;
        let (inc_hi, inc_lo) = (
            inclusion_matrix(f, n).unwrap(),
            inclusion_matrix(f, n - 1).unwrap(),
        );
        ensure(mul(&rel, &inc_hi) == mul(&inc_lo, &ideal), || {
            format!("{}: inclusion not a chain map at {n}", f.name())
        })?;
        if n <= f.fiber().gens().max_degree() {
            let eps = augmentation_matrix(f.fiber(), n).unwrap();
            let d = boundary_matrix(f, n + 1, Scope::Relative).unwrap();
            ensure(mul(&mul(&eps, &res_hi), &d).is_zero(), || {
                format!("{}: epsilon meets a relative boundary at {n}", f.name())
            })?;
        }
    }
    Ok(())
}

fn random_coords(r: &mut ChaCha8Rng, len: usize) -> SparseVec {
    (0..len)
        .filter_map(|j| {
            let c = r.gen_range(-2i64..=2);
            (c != 0).then(|| (j, rat(c)))
        })
        .collect()
}

/// `apply` against the dense expansion and the product rule, on a random
/// relative or ideal-valued derivation of a random fibration.
pub fn leibniz(r: &mut ChaCha8Rng) -> Check {
    let f = random_fibration(r, 4);
    let scope = [Scope::Relative, Scope::IdealValued][r.gen_range(0..2)];
    let gens = f.total().gens().clone();
    let n = r.gen_range(1..=f.fiber().gens().max_degree());
    let slice = der_basis(&f, n, scope).unwrap();
    let theta = slice.derivation(&random_coords(r, slice.len()));
    let (k, l) = (r.gen_range(2..10), r.gen_range(2..8));
    let a = random_element(r, &gens, k);
    let b = random_element(r, &gens, l);
    let da = theta.apply(&a).unwrap();
    ensure(da == dense_apply(&theta, &gens, &a), || {
        format!("apply differs from dense expansion on {a}")
    })?;
    let db = theta.apply(&b).unwrap();
    let sign = if n * k % 2 == 1 { rat(-1) } else { rat(1) };
    let rule = &(&da * &b) + &(&a * &db).scale(&sign);
    ensure(theta.apply(&(&a * &b)).unwrap() == rule, || {
        format!("product rule fails on {a} and {b}")
    })
}

/// Boundary matrix columns against `δθ = d∘θ − (−1)^n θ∘d` evaluated with
/// the dense Leibniz expansion.
pub fn boundary_formula(cx: &DerComplex, d: &dyn Fn(usize) -> AlgElement, n: u32) -> Check {
    let gens = cx.algebra().gens().clone();
    let hi = cx.slice(n).unwrap();
    let lo = cx.slice(n - 1).unwrap();
    let columns = cx.boundary_matrix(n).unwrap().transpose();
    let dv = |g: usize| Some(d(g));
    let sign = if n % 2 == 1 { rat(-1) } else { rat(1) };
    for j in 0..hi.len() {
        let theta = hi.derivation_of(j);
        let image = lo.derivation(&columns.row(j));
        for (w, _) in hi.pairs() {
            let tw = theta
                .value(*w)
                .cloned()
                .unwrap_or_else(|| AlgElement::zero(&gens));
            let expected = &dense_leibniz(&dv, 1, &gens, &tw)
                - &dense_apply(&theta, &gens, &d(*w)).scale(&sign);
            let got = image
                .value(*w)
                .cloned()
                .unwrap_or_else(|| AlgElement::zero(&gens));
            ensure(got == expected, || {
                format!("boundary column {j} at generator {w} in degree {n}")
            })?;
        }
    }
    Ok(())
}

/// `connecting image ⊆ G^ξ ⊆ G`.
pub fn inclusions(f: &RelativeModel) -> Check {
    let conn = connecting_images(f).unwrap();
    let fib = fibre_gottlieb(f).unwrap().subspace;
    let abs = gottlieb(f.fiber()).unwrap().subspace;
    ensure(fib.includes(&conn).unwrap(), || {
        format!("{}: connecting image not in G^xi", f.name())
    })?;
    ensure(abs.includes(&fib).unwrap(), || {
        format!("{}: G^xi not in G", f.name())
    })
}

/// A product fibration restricts nothing and has no connecting image.
pub fn trivial_product(r: &mut ChaCha8Rng) -> Check {
    let fiber = random_model(r, 4);
    let base = random_base(r);
    let f = RelativeModel::trivial("product", base, &fiber).unwrap();
    ensure(f.is_fibre_trivial(), || {
        "product not recognised as trivial".into()
    })?;
    let fib = fibre_gottlieb(&f).unwrap().subspace;
    ensure(
        fib.equals(&gottlieb(&fiber).unwrap().subspace).unwrap(),
        || format!("G^xi != G on\n{}", f.to_text()),
    )?;
    ensure(connecting_images(&f).unwrap().is_zero(), || {
        "product with connecting image".into()
    })
}

pub fn is_elliptic(m: &SullivanModel) -> bool {
    match formal_dimension_estimate(m) {
        Some(fd) if m.validity_bound().is_none() => {
            classify(m, fd, DEFAULT_WINDOW).unwrap().elliptic_at_bound
        }
        _ => false,
    }
}

/// In the top homotopy degree of an elliptic minimal fiber both groups are
/// all of `Hom(W^N, Q)`.
pub fn top_degree(f: &RelativeModel) -> Check {
    let fiber = f.fiber();
    let n = fiber.gens().max_degree();
    let rank = fiber.gens().iter().filter(|g| g.degree == n).count();
    ensure(fibre_gottlieb(f).unwrap().dim_in(n) == rank, || {
        format!("{}: G^xi_{n} is not everything", f.name())
    })?;
    ensure(gottlieb(fiber).unwrap().dim_in(n) == rank, || {
        format!("{}: G_{n} is not everything", f.name())
    })
}

pub fn even_vanish(m: &SullivanModel) -> Check {
    let g = gottlieb(m).unwrap();
    for n in g.gens_degrees().into_iter().filter(|n| n % 2 == 0) {
        ensure(g.dim_in(n) == 0, || format!("{}: G_{n} != 0", m.name()))?;
    }
    Ok(())
}
