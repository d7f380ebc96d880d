mod common;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use common::{fixture_path, fixture_text, rng};
use rht_core::galgebra::rat;
use rht_core::invariants::{depth_of_subspaces, depth_over_catalog};
use rht_core::model::{parse_fibration, parse_model};
use rht_core::qlinalg::{Frame, SparseVec, Subspace};
use rht_core::toolkit::{
    build_poset, enumerate_fibrations, render, Catalog, EnumerateOptions, Format, Poset,
};

/// Random catalog of subspaces of `Q^n`, mostly coordinate subspaces so
/// that inclusions and repeats are common.
fn random_items(r: &mut ChaCha8Rng) -> Vec<(String, Subspace)> {
    let n = r.gen_range(1..6);
    let frame = Frame::anonymous(n);
    (0..r.gen_range(1..9))
        .map(|i| {
            let s = if r.gen_bool(0.8) {
                let idx: Vec<usize> = (0..n).filter(|_| r.gen_bool(0.5)).collect();
                Subspace::coordinate(&frame, &idx)
            } else {
                let mut v = SparseVec::new();
                for j in 0..n {
                    if r.gen_bool(0.6) {
                        v.push((j, rat(r.gen_range(1..3))));
                    }
                }
                Subspace::span(&frame, &[v])
            };
            (format!("f{i:02}"), s)
        })
        .collect()
}

fn longest_path(p: &Poset) -> i64 {
    fn from(p: &Poset, i: usize, memo: &mut Vec<Option<i64>>) -> i64 {
        if let Some(v) = memo[i] {
            return v;
        }
        let v = p
            .edges
            .iter()
            .filter(|e| e.0 == i)
            .map(|e| 1 + from(p, e.1, memo))
            .max()
            .unwrap_or(0);
        memo[i] = Some(v);
        v
    }
    let mut memo = vec![None; p.nodes.len()];
    (0..p.nodes.len())
        .map(|i| from(p, i, &mut memo))
        .max()
        .unwrap_or(-1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn poset_ignores_catalog_order(seed in any::<u64>()) {
        let mut r = rng(seed);
        let items = random_items(&mut r);
        let mut shuffled = items.clone();
        shuffled.shuffle(&mut r);
        let (a, b) = (Poset::from_subspaces(&items).unwrap(), Poset::from_subspaces(&shuffled).unwrap());
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(render(&a, Format::Dot), render(&b, Format::Dot));
    }

    #[test]
    fn reachability_is_inclusion(seed in any::<u64>()) {
        let p = Poset::from_subspaces(&random_items(&mut rng(seed))).unwrap();
        let reach = p.reachability();
        for (i, a) in p.nodes.iter().enumerate() {
            for (j, b) in p.nodes.iter().enumerate() {
                prop_assert_eq!(reach[i][j], a.subspace.includes(&b.subspace).unwrap(), "{} {}", i, j);
                if i != j {
                    prop_assert!(!a.subspace.equals(&b.subspace).unwrap());
                }
            }
        }
        for &(a, b) in &p.edges {
            prop_assert!(a < b);
            let skip = p.edges.iter().any(|&(x, m)| x == a && m != b && reach[m][b]);
            prop_assert!(!skip, "edge {} -> {} is not a cover", a, b);
        }
    }

    #[test]
    fn depth_is_longest_path(seed in any::<u64>()) {
        let items = random_items(&mut rng(seed));
        let p = Poset::from_subspaces(&items).unwrap();
        let d = depth_of_subspaces(&items).unwrap();
        prop_assert_eq!(d.depth, longest_path(&p));
        prop_assert_eq!(p.depth(), longest_path(&p));
        prop_assert_eq!(d.chain.len() as i64, d.depth + 1);
        for w in d.chain.windows(2) {
            prop_assert!(w[0].includes(&w[1]).unwrap() && w[0].dim() > w[1].dim());
        }
    }
}

fn odd_fiber() -> (
    rht_core::model::SullivanModel,
    rht_core::model::SullivanModel,
) {
    let fiber = parse_model("[space x]\ngen w1 3\ngen w2 5\ngen w3 7\ngen w4 9\n").unwrap();
    let base = parse_model("[space cp]\ngen t 2\n").unwrap();
    (fiber, base)
}

#[test]
fn enumeration_is_deterministic_and_round_trips() {
    let (fiber, base) = odd_fiber();
    let opts = EnumerateOptions {
        require_finite: Some(6),
        ..Default::default()
    };
    let a = enumerate_fibrations(&fiber, &base, &opts).unwrap();
    let b = enumerate_fibrations(&fiber, &base, &opts).unwrap();
    assert_eq!(a.to_text(), b.to_text());
    assert_eq!(a.len(), 18);
    for (id, f) in &a.entries {
        assert!(id.starts_with("x-over-cp-"));
        assert_eq!(&parse_fibration(&f.to_text()).unwrap(), f);
    }
    let again = Catalog::new(Some(fiber.clone()), a.entries.clone()).unwrap();
    assert_eq!(again.to_text(), a.to_text());
}

#[test]
fn enumeration_depth_matches_poset() {
    let (fiber, base) = odd_fiber();
    let c = enumerate_fibrations(&fiber, &base, &EnumerateOptions::default()).unwrap();
    let p = build_poset(&c, None).unwrap();
    let d = depth_over_catalog(&c.fiber, &c.entries, None).unwrap();
    assert_eq!(d.depth, p.depth());
    assert_eq!(d.depth, longest_path(&p));
}

#[test]
fn catalog_order_does_not_change_fixture_poset() {
    let c = Catalog::load(&[fixture_path("odd-3-5-9-17.smf")]).unwrap();
    let mut entries = c.entries.clone();
    entries.reverse();
    let reversed = Catalog::new(None, entries).unwrap();
    assert_eq!(
        build_poset(&c, Some(6)).unwrap(),
        build_poset(&reversed, Some(6)).unwrap()
    );
}

#[test]
fn mixed_fibers_are_rejected() {
    let a = parse_fibration(&fixture_text("cp5-a.smf")).unwrap();
    let b = parse_fibration(&fixture_text("su5-rel.smf")).unwrap();
    let err = Catalog::new(None, vec![("a".into(), a), ("b".into(), b)]).unwrap_err();
    assert_eq!(err, rht_core::Error::FiberMismatch("b".into()));
}
