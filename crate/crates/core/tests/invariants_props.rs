mod common;

use common::checks::{even_vanish, inclusions, is_elliptic, top_degree, trivial_product};
use common::{fibration, fixture_fibrations, fixture_spaces, random_fibration, rng, RANDOM_MODELS};
use rht_core::invariants::les_check;

#[test]
fn inclusion_chain_on_fixtures() {
    for f in fixture_fibrations() {
        inclusions(&f).unwrap();
    }
}

#[test]
fn inclusion_chain_on_random_fibrations() {
    for seed in 0..RANDOM_MODELS {
        inclusions(&random_fibration(&mut rng(3000 + seed), 4)).unwrap();
    }
}

#[test]
fn trivial_fibrations_restrict_nothing() {
    for seed in 0..RANDOM_MODELS {
        if let Err(e) = trivial_product(&mut rng(4000 + seed)) {
            panic!("seed {seed}: {e}");
        }
    }
}

#[test]
fn top_degree_is_everything() {
    for f in fixture_fibrations() {
        if f.fiber().is_minimal() && is_elliptic(f.fiber()) {
            top_degree(&f).unwrap();
        }
    }
}

#[test]
fn even_gottlieb_groups_vanish_for_elliptic_spaces() {
    let mut checked = 0;
    for m in fixture_spaces() {
        if m.is_minimal() && is_elliptic(&m) {
            even_vanish(&m).unwrap();
            checked += 1;
        }
    }
    assert!(checked >= 5);
}

#[test]
fn long_exact_sequence_on_fixtures() {
    let su5 = les_check(&fibration("su5-rel.smf"), 1..=9).unwrap();
    assert!(su5.is_exact(), "{su5}");
    let s2 = les_check(&fibration("s3s3s4-over-s2.smf"), 1..=7).unwrap();
    assert!(s2.is_exact(), "{s2}");
}

#[test]
fn long_exact_sequence_on_random_fibrations() {
    for seed in 0..RANDOM_MODELS / 4 {
        let f = random_fibration(&mut rng(5000 + seed), 3);
        let report = les_check(&f, 1..=f.fiber().gens().max_degree()).unwrap();
        assert!(report.is_exact(), "seed {seed}\n{report}");
    }
}
