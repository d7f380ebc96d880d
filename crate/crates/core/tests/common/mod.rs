#![allow(dead_code)]

pub mod checks;

use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rht_core::galgebra::{basis_in_degree, rat, AlgElement, Gens};
use rht_core::model::{parse_document, Item, RelativeModel, SullivanModel};

pub const RANDOM_MODELS: u64 = 100;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

pub fn fixture_text(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).expect("fixture readable")
}

pub fn fixture_items(name: &str) -> Vec<Item> {
    parse_document(&fixture_text(name))
        .expect("fixture parses")
        .items
}

pub fn space(name: &str) -> SullivanModel {
    match fixture_items(name).remove(0) {
        Item::Space(m) => m,
        Item::Fibration(_) => panic!("{name} is a fibration"),
    }
}

pub fn fibration(name: &str) -> RelativeModel {
    match fixture_items(name).remove(0) {
        Item::Fibration(f) => f,
        Item::Space(_) => panic!("{name} is a space"),
    }
}

pub fn fixture_names() -> Vec<String> {
    let mut names: Vec<String> = std::fs::read_dir(fixture_path(""))
        .unwrap()
        .filter_map(|e| e.ok())
        .map(|e| e.file_name().to_string_lossy().into_owned())
        .filter(|n| n.ends_with(".smf") && n != "bad-degree.smf")
        .collect();
    names.sort();
    names
}

/// Every space of every fixture, fibers and totals of fibrations included.
pub fn fixture_spaces() -> Vec<SullivanModel> {
    let mut out = Vec::new();
    for n in fixture_names() {
        for item in fixture_items(&n) {
            match item {
                Item::Space(m) => out.push(m),
                Item::Fibration(f) => {
                    out.push(f.fiber().clone());
                    out.push(f.total().clone());
                }
            }
        }
    }
    out
}

pub fn fixture_fibrations() -> Vec<RelativeModel> {
    fixture_names()
        .iter()
        .flat_map(|n| fixture_items(n))
        .filter_map(|i| match i {
            Item::Fibration(f) => Some(f),
            Item::Space(_) => None,
        })
        .collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random combination of degree-`n` monomials of length at least two.
fn random_decomposable(
    rng: &mut ChaCha8Rng,
    gens: &Gens,
    n: u32,
    allow: impl Fn(usize) -> bool,
) -> AlgElement {
    let mut e = AlgElement::zero(gens);
    for m in basis_in_degree(gens, n) {
        if m.length() < 2 || !m.factors().all(|(i, _)| allow(i)) {
            continue;
        }
        if rng.gen_bool(0.5) {
            let c = *[-2i64, -1, 1, 2, 3].choose(rng).unwrap();
            e = &e + &AlgElement::monomial(gens, m, rat(c));
        }
    }
    e
}

/// Random minimal model with up to `max_gens` generators of degree 2..=9.
/// Each differential is drawn among decomposables in earlier generators and
/// dropped if it breaks `d∘d = 0`.
pub fn random_model(rng: &mut ChaCha8Rng, max_gens: usize) -> SullivanModel {
    let k = rng.gen_range(1..=max_gens);
    let mut degrees: Vec<u32> = (0..k).map(|_| rng.gen_range(2..=9)).collect();
    degrees.sort_unstable();
    let gens = Gens::new(
        degrees
            .iter()
            .enumerate()
            .map(|(i, &d)| (format!("x{}", i + 1), d)),
    )
    .unwrap();
    let mut diff = Vec::new();
    for (i, &degree) in degrees.iter().enumerate() {
        let dx = random_decomposable(rng, &gens, degree + 1, |j| j < i);
        let mut trial = diff.clone();
        trial.push((i, dx));
        if SullivanModel::new("random", gens.clone(), trial.clone(), None).is_ok() {
            diff = trial;
        }
    }
    SullivanModel::new("random", gens, diff, None).unwrap()
}

/// Random base with one or two generators of degree 2..=4 and zero
/// differential.
pub fn random_base(rng: &mut ChaCha8Rng) -> SullivanModel {
    let k = rng.gen_range(1..=2);
    let gens = Gens::new((0..k).map(|i| (format!("t{}", i + 1), rng.gen_range(2..=4)))).unwrap();
    SullivanModel::new("base", gens, Vec::new(), None).unwrap()
}

/// Random relative model: `D(w) = d(w) + twist` with the twist a random
/// combination of monomials containing a base generator. Twists breaking
/// `D∘D = 0` are dropped one generator at a time.
pub fn random_fibration(rng: &mut ChaCha8Rng, max_fiber_gens: usize) -> RelativeModel {
    let base = random_base(rng);
    let fiber = random_model(rng, max_fiber_gens);
    let total = base.gens().union(fiber.gens()).unwrap();
    let offset = base.gens().len();
    let declared: Vec<_> = (0..fiber.gens().len())
        .map(|i| (i, fiber.d(i).clone()))
        .collect();
    let lift = |i: usize| shift(fiber.d(i), &total, offset);
    let mut diff: Vec<(usize, AlgElement)> =
        (0..fiber.gens().len()).map(|i| (i, lift(i))).collect();
    for i in 0..fiber.gens().len() {
        let mut twist = AlgElement::zero(&total);
        for m in basis_in_degree(&total, fiber.gens().degree(i) + 1) {
            let uses_base = m.factors().any(|(g, _)| g < offset);
            let earlier = m.factors().all(|(g, _)| g < offset + i);
            if uses_base && earlier && rng.gen_bool(0.4) {
                twist = &twist
                    + &AlgElement::monomial(&total, m, rat(*[-1i64, 1, 2].choose(rng).unwrap()));
            }
        }
        let mut trial = diff.clone();
        trial[i].1 = &trial[i].1 + &twist;
        if RelativeModel::new(
            "random",
            base.clone(),
            fiber.gens().clone(),
            trial.clone(),
            Some(declared.clone()),
        )
        .is_ok()
        {
            diff = trial;
        }
    }
    RelativeModel::new("random", base, fiber.gens().clone(), diff, Some(declared)).unwrap()
}

/// Copy of `e` over `target` with every generator index moved by `offset`.
pub fn shift(e: &AlgElement, target: &Gens, offset: usize) -> AlgElement {
    let products: Vec<_> = e
        .terms()
        .map(|(m, c)| {
            (
                c.clone(),
                m.factors().map(|(g, k)| (g + offset, k)).collect(),
            )
        })
        .collect();
    AlgElement::from_products(target, &products).unwrap()
}

/// Random combination of degree-`n` monomials with small coefficients.
pub fn random_element(rng: &mut ChaCha8Rng, gens: &Gens, n: u32) -> AlgElement {
    let mut e = AlgElement::zero(gens);
    for m in basis_in_degree(gens, n) {
        if rng.gen_bool(0.6) {
            let c = rng.gen_range(-3i64..=3);
            e = &e + &AlgElement::monomial(gens, m, rat(c));
        }
    }
    e
}

/// Random generator set with `1..=max` generators of degree `2..=max_degree`.
pub fn random_gens(rng: &mut ChaCha8Rng, max: usize, max_degree: u32) -> Gens {
    let k = rng.gen_range(1..=max);
    Gens::new((0..k).map(|i| (format!("g{}", i + 1), rng.gen_range(2..=max_degree)))).unwrap()
}
