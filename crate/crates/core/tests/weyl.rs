use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use verlinde_core::fusion::qdim_finite;
use verlinde_core::weyl::{alcove_project, alcove_project_with, enumerate_pk_plus, AlcoveResult, ReflectionPolicy};
use verlinde_core::CartanDatum;

fn datum(s: &str) -> CartanDatum {
    CartanDatum::build(s.parse().unwrap()).unwrap()
}

fn binom(n: i64, k: i64) -> i64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Both reflection orders give the same answer, and the quantum dimension (anti-invariant
/// under the shifted affine Weyl group) agrees with the signed projection.
#[test]
fn projection_is_policy_independent_on_random_weights() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for ty in ["A1", "A2", "A3", "B2", "B3", "C3", "D4", "G2", "F4", "E6"] {
        let d = datum(ty);
        for _ in 0..10_000 {
            let k = rng.gen_range(1..=6);
            let w: Vec<i64> = (0..d.rank()).map(|_| rng.gen_range(0..=12)).collect();
            let a = alcove_project_with(&d, &w, k, ReflectionPolicy::MinIndex).unwrap();
            let b = alcove_project_with(&d, &w, k, ReflectionPolicy::MaxIndex).unwrap();
            assert_eq!(a, b, "{ty} {w:?} k={k}");
            let q = qdim_finite(&d, k, &w);
            match a {
                AlcoveResult::Null => assert!(q.abs() < 1e-6, "{ty} {w:?} k={k}: qdim {q}"),
                AlcoveResult::Signed { sign, weight } => {
                    assert_eq!(d.level(&weight), k);
                    assert!(weight.iter().all(|&c| c >= 0));
                    let back = sign as f64 * qdim_finite(&d, k, &weight[1..]);
                    assert!((q - back).abs() < 1e-6 * q.abs().max(1.0), "{ty} {w:?} k={k}");
                }
            }
        }
    }
}

/// `|P_k^+(A_n)| = binom(n + k, n)`.
#[test]
fn pk_plus_size_type_a() {
    for n in 1..=5 {
        for k in 0..=6 {
            assert_eq!(enumerate_pk_plus(&datum(&format!("A{n}")), k).len() as i64, binom(n as i64 + k, n as i64));
        }
    }
}

#[test]
fn pk_plus_is_sorted_descending() {
    for ty in ["B3", "G2", "E7"] {
        let pk = enumerate_pk_plus(&datum(ty), 3);
        assert!(pk.windows(2).all(|w| w[0] > w[1]), "{ty}");
    }
}

#[test]
fn worked_projections() {
    let a2 = datum("A2");
    assert_eq!(alcove_project(&a2, &[4, 4], 6).unwrap(), AlcoveResult::Signed { sign: -1, weight: vec![0, 3, 3] });
    assert_eq!(alcove_project(&a2, &[5, 2], 6).unwrap(), AlcoveResult::Null);
    let b3 = datum("B3");
    assert_eq!(alcove_project(&b3, &[1, 2, 1], 3).unwrap(), AlcoveResult::Signed { sign: -1, weight: vec![1, 1, 0, 1] });
}

#[test]
fn bad_input_is_rejected() {
    let a2 = datum("A2");
    assert!(alcove_project(&a2, &[1, 2, 3], 2).is_err());
    assert!(alcove_project(&a2, &[1, 2], 0).is_err());
}

proptest! {
    #[test]
    fn projection_is_idempotent(w in prop::collection::vec(0i64..20, 3), k in 1i64..6) {
        let d = datum("B3");
        if let AlcoveResult::Signed { weight, .. } = alcove_project(&d, &w, k).unwrap() {
            let again = alcove_project(&d, &weight[1..], k).unwrap();
            prop_assert_eq!(again, AlcoveResult::Signed { sign: 1, weight });
        }
    }
}
