mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use verlinde_core::cluster::*;
use verlinde_core::data::cluster_table_for;
use verlinde_core::{CartanDatum, Error};

fn datum(s: &str) -> Arc<CartanDatum> {
    Arc::new(CartanDatum::build(s.parse().unwrap()).unwrap())
}

fn enumerate(ty: &str, ell: i64, reverse: bool) -> (Enumeration, QDatumGrid) {
    let d = datum(ty);
    let (seed, grid, reg) = build_initial_seed(&d, ell, &HeightChoice::Default).unwrap();
    let mut e = enumerate_finite(&seed, reg, Limits { reverse_order: reverse, ..Limits::default() }).unwrap();
    assign_labels(&d, &grid, &mut e.registry);
    (e, grid)
}

#[test]
fn initial_quiver_a3() {
    common::quivers::compare(&common::quivers::a3()).unwrap();
}

#[test]
fn initial_quiver_b3() {
    common::quivers::compare(&common::quivers::b3()).unwrap();
}

#[test]
fn finite_type_counts() {
    // (type, variables, exchangeable, clusters)
    for (ty, vars, exch, clusters) in [("A3", 12, 9, 14), ("D4", 20, 16, 50), ("D5", 30, 25, 182), ("E6", 48, 42, 833)] {
        let (e, _) = enumerate(ty, 1, false);
        assert_eq!((e.registry.len(), e.n_exchangeable(), e.clusters.len()), (vars, exch, clusters), "{ty}");
        assert!(e.registry.variables().iter().all(|v| v.laurent.has_nonnegative_coefficients()));
        assert!(e.registry.variables().iter().all(|v| v.label.is_some()));
    }
}

/// Catalan numbers: clusters of `A_n` at level 2 (exchangeable part of type `A_n`).
#[test]
fn type_a_cluster_count_is_catalan() {
    let catalan = |n: u64| (1..=n).fold(1u64, |c, i| c * (2 * (2 * i - 1)) / (i + 1));
    for n in 1..=5usize {
        let (e, _) = enumerate(&format!("A{n}"), 1, false);
        assert_eq!(e.clusters.len() as u64, catalan(n as u64 + 1), "A{n}");
    }
}

#[test]
fn every_relation_holds_exactly() {
    for ty in ["A3", "D4", "E6"] {
        let (e, _) = enumerate(ty, 1, false);
        for r in &e.relations {
            assert!(r.holds(&e.registry).unwrap(), "{ty}: {r:?}");
        }
        assert!(e.registry.check_fingerprints());
    }
}

#[test]
fn e6_relation_in_table_numbering() {
    let (e, _) = enumerate("E6", 1, false);
    let table = cluster_table_for("E6").unwrap().unwrap();
    let id = |index: usize| {
        let m = &table.row(index).unwrap().monomial;
        (0..e.registry.len()).find(|&i| e.registry.get(i).label.as_ref() == Some(m)).unwrap()
    };
    let want = ExchangeRelation::canonical(id(1), id(34), vec![id(2), id(3)], vec![id(4)]);
    assert!(e.relations.contains(&want));
}

/// Same variables, clusters and relations whichever order the mutations are tried in.
#[test]
fn enumeration_order_does_not_matter() {
    for ty in ["D4", "E6"] {
        let (a, _) = enumerate(ty, 1, false);
        let (b, _) = enumerate(ty, 1, true);
        let key = |e: &Enumeration, id: usize| e.registry.get(id).laurent.to_text();
        let canon = |e: &Enumeration| {
            let clusters: BTreeSet<BTreeSet<String>> =
                e.clusters.iter().map(|c| c.iter().map(|&i| key(e, i)).collect()).collect();
            let rels: BTreeSet<(BTreeSet<String>, BTreeSet<Vec<String>>)> = e
                .relations
                .iter()
                .map(|r| {
                    let left = [key(e, r.left.0), key(e, r.left.1)].into_iter().collect();
                    let right = r.right.iter().map(|m| {
                        let mut v: Vec<String> = m.iter().map(|&i| key(e, i)).collect();
                        v.sort();
                        v
                    });
                    (left, right.collect())
                })
                .collect();
            (clusters, rels)
        };
        assert_eq!(canon(&a), canon(&b), "{ty}");
    }
}

#[test]
fn markov_quiver_is_rejected() {
    let m = ExchangeMatrix::from_rows(&[vec![0, 2, -2], vec![-2, 0, 2], vec![2, -2, 0]], vec![false; 3]).unwrap();
    assert!(!classify_finite(&m));
    let reg = VariableRegistry::new(&[false; 3], vec![None; 3]);
    let seed = Seed { matrix: m, vars: vec![0, 1, 2] };
    let r = enumerate_finite(&seed, reg, Limits::default());
    assert!(matches!(r, Err(Error::InfiniteType { product: 4, .. })));
}

/// The oriented 3-cycle is mutation equivalent to `A_3` though its counterpart is affine.
#[test]
fn oriented_triangle_is_finite() {
    let m = ExchangeMatrix::from_rows(&[vec![0, 1, -1], vec![-1, 0, 1], vec![1, -1, 0]], vec![false; 3]).unwrap();
    assert!(!classify_finite(&m));
    let reg = VariableRegistry::new(&[false; 3], vec![None; 3]);
    let seed = Seed { matrix: m, vars: vec![0, 1, 2] };
    let e = enumerate_finite(&seed, reg, Limits::default()).unwrap();
    assert_eq!((e.registry.len(), e.clusters.len()), (9, 14));
}

/// An affine quiver (Kronecker-free but infinite) fails within the variable bound.
#[test]
fn affine_quiver_hits_a_limit() {
    let m = ExchangeMatrix::from_rows(
        &[vec![0, 1, 0, -1], vec![-1, 0, 1, 0], vec![0, -1, 0, -1], vec![1, 0, 1, 0]],
        vec![false; 4],
    )
    .unwrap();
    let reg = VariableRegistry::new(&[false; 4], vec![None; 4]);
    let seed = Seed { matrix: m, vars: vec![0, 1, 2, 3] };
    let r = enumerate_finite(&seed, reg, Limits { max_seeds: 10_000, max_vars: 60, reverse_order: false });
    assert!(matches!(r, Err(Error::LimitExceeded { .. }) | Err(Error::InfiniteType { .. })));
}

#[test]
fn finite_type_is_recognised() {
    for (ty, names) in [("A3", vec!["A3"]), ("D4", vec!["D4"]), ("E6", vec!["E6"])] {
        let d = datum(ty);
        let (seed, _, _) = build_initial_seed(&d, 1, &HeightChoice::Default).unwrap();
        assert!(classify_finite(&seed.matrix));
        assert_eq!(principal_components(&seed.matrix).unwrap(), names);
    }
}

#[test]
fn exports_round_trip() {
    let (e, grid) = enumerate("D4", 1, false);
    let json = registry_to_json(&e.registry);
    let back = import_registry(&json).unwrap();
    assert_eq!(registry_to_json(&back), json);
    let text = relations_to_text(&e.relations);
    assert_eq!(import_relations(&text).unwrap(), e.relations);
    let dot = quiver_to_dot(&e.initial.matrix, &grid.vertex_names());
    assert_eq!(dot.matches("shape=box").count(), e.n_frozen());
}

/// Random walks in the (infinite) mutation class of `B_3` at `l = 2`.
#[test]
fn b3_mutations_stay_laurent_and_positive() {
    let d = datum("B3");
    let (seed, _, mut reg) = build_initial_seed(&d, 2, &HeightChoice::Explicit(vec![-2, 0, 1, 2, 4])).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let exch = seed.matrix.exchangeable();
    for _ in 0..40 {
        let mut s = seed.clone();
        for _ in 0..5 {
            let k = exch[rng.gen_range(0..exch.len())];
            let (next, rel) = mutate(&s, k, &mut reg).unwrap();
            assert!(rel.holds(&reg).unwrap());
            s = next;
        }
    }
    assert!(reg.variables().iter().all(|v| v.laurent.has_nonnegative_coefficients()));
    assert!(reg.check_fingerprints());
}

fn skew_matrix() -> impl Strategy<Value = (Vec<Vec<i32>>, Vec<bool>)> {
    (prop::collection::vec(-2i32..=2, 15), prop::collection::vec(any::<bool>(), 6)).prop_map(|(upper, frozen)| {
        let mut m = vec![vec![0; 6]; 6];
        let mut it = upper.into_iter();
        for i in 0..6 {
            for j in i + 1..6 {
                let v = it.next().unwrap();
                m[i][j] = v;
                m[j][i] = -v;
            }
        }
        (m, frozen)
    })
}

proptest! {
    #[test]
    fn matrix_mutation_is_an_involution((rows, frozen) in skew_matrix(), k in 0usize..6) {
        let m = ExchangeMatrix::from_rows(&rows, frozen.clone()).unwrap();
        if !frozen[k] {
            prop_assert_eq!(m.mutate(k).unwrap().mutate(k).unwrap(), m);
        } else {
            prop_assert!(m.mutate(k).is_err());
        }
    }

    #[test]
    fn seed_mutation_is_an_involution(path in prop::collection::vec(0usize..9, 0..6), k in 0usize..9) {
        let d = datum("E6");
        let (seed, _, mut reg) = build_initial_seed(&d, 1, &HeightChoice::Default).unwrap();
        let exch = seed.matrix.exchangeable();
        let mut s = seed;
        for p in path {
            s = mutate(&s, exch[p % exch.len()], &mut reg).unwrap().0;
        }
        let k = exch[k % exch.len()];
        let (t, r1) = mutate(&s, k, &mut reg).unwrap();
        let (u, r2) = mutate(&t, k, &mut reg).unwrap();
        prop_assert_eq!(&u, &s);
        prop_assert_eq!(r1, r2);
    }

    #[test]
    fn laurent_division_is_exact(a in prop::collection::btree_map(prop::collection::vec(-2i32..3, 3), -4i128..5, 1..5),
                                  b in prop::collection::btree_map(prop::collection::vec(-2i32..3, 3), 1i128..4, 1..4)) {
        let a = LaurentPoly { nvars: 3, terms: a.into_iter().filter(|(_, c)| *c != 0).collect::<BTreeMap<_, _>>() };
        let b = LaurentPoly { nvars: 3, terms: b };
        let p = a.mul(&b).unwrap();
        prop_assert_eq!(p.div_exact(&b).unwrap(), a);
    }
}
