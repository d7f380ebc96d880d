mod common;

use common::checks::{absolute_complex, boundary_formula, leibniz, relative_complex};
use common::{
    fixture_fibrations, fixture_spaces, random_fibration, random_model, rng, RANDOM_MODELS,
};
use rht_core::dercx::{DerComplex, Scope};

#[test]
fn fixtures_form_complexes() {
    for m in fixture_spaces() {
        if m.validity_bound().is_none() {
            absolute_complex(&m).unwrap();
        }
    }
    for f in fixture_fibrations() {
        if f.total().validity_bound().is_none() {
            relative_complex(&f).unwrap();
        }
    }
}

#[test]
fn random_models_form_complexes() {
    for seed in 0..RANDOM_MODELS {
        let mut r = rng(seed);
        absolute_complex(&random_model(&mut r, 5)).unwrap();
        relative_complex(&random_fibration(&mut r, 4)).unwrap();
    }
}

#[test]
fn apply_matches_dense_leibniz() {
    for seed in 0..RANDOM_MODELS {
        if let Err(e) = leibniz(&mut rng(1000 + seed)) {
            panic!("seed {seed}: {e}");
        }
    }
}

#[test]
fn boundary_matches_formula() {
    for seed in 0..20 {
        let mut r = rng(2000 + seed);
        let m = random_model(&mut r, 4);
        let cx = DerComplex::new(&m, Scope::Absolute).unwrap();
        for n in 1..=m.gens().max_degree() + 1 {
            boundary_formula(&cx, &|g| m.d(g).clone(), n).unwrap();
        }
        let f = random_fibration(&mut r, 3);
        let cx = DerComplex::new(&f, Scope::Relative).unwrap();
        for n in 1..=f.fiber().gens().max_degree() + 1 {
            boundary_formula(&cx, &|g| f.total().d(g).clone(), n).unwrap();
        }
    }
}
