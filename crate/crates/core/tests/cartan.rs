use verlinde_core::cartan::catalog;
use verlinde_core::fusion::determinant;
use verlinde_core::{CartanDatum, CartanType, Family};

/// `(type, |Delta^+|, h, h^vee, det A, |W|)` from the standard tables.
const TABLE: &[(&str, usize, i64, i64, i64, u128)] = &[
    ("A1", 1, 2, 2, 2, 2),
    ("A4", 10, 5, 5, 5, 120),
    ("B3", 9, 6, 5, 2, 48),
    ("C3", 9, 6, 4, 2, 48),
    ("B5", 25, 10, 9, 2, 3840),
    ("C4", 16, 8, 5, 2, 384),
    ("D4", 12, 6, 6, 4, 192),
    ("D6", 30, 10, 10, 4, 23040),
    ("E6", 36, 12, 12, 3, 51840),
    ("E7", 63, 18, 18, 2, 2903040),
    ("E8", 120, 30, 30, 1, 696729600),
    ("F4", 24, 12, 9, 1, 1152),
    ("G2", 6, 6, 4, 1, 12),
];

#[test]
fn standard_invariants() {
    for &(ty, npos, h, hv, det, w) in TABLE {
        let d = CartanDatum::build(ty.parse().unwrap()).unwrap();
        assert_eq!(d.positive_roots.len(), npos, "{ty}");
        assert_eq!(d.coxeter_h, h, "{ty}");
        assert_eq!(d.dual_coxeter_hvee, hv, "{ty}");
        assert_eq!(determinant(&d.cartan), det.into(), "{ty}");
        assert_eq!(d.weyl_order(), w, "{ty}");
        assert_eq!(d.marks.iter().sum::<i64>(), h, "{ty}");
        assert_eq!(d.comarks.iter().sum::<i64>(), hv, "{ty}");
        assert_eq!(2 * npos, d.rank() * h as usize, "{ty}");
    }
}

#[test]
fn highest_root_has_norm_two() {
    for ty in catalog(6) {
        let d = CartanDatum::build(ty).unwrap();
        let theta = d.root_to_weight(d.theta());
        assert_eq!(d.bilinear(&theta, &theta), 2.into(), "{ty}");
        assert!(d.check_invariants().is_ok(), "{ty}");
    }
}

#[test]
fn long_and_short_nodes() {
    let b3 = CartanDatum::build(CartanType::new(Family::B, 3).unwrap()).unwrap();
    assert_eq!(b3.t, vec![1, 1, 2]);
    let c3 = CartanDatum::build(CartanType::new(Family::C, 3).unwrap()).unwrap();
    assert_eq!(c3.t, vec![2, 2, 1]);
    let g2 = CartanDatum::build(CartanType::new(Family::G, 2).unwrap()).unwrap();
    // alpha_1 is the short root
    assert_eq!(g2.t, vec![3, 1]);
    assert_eq!(g2.d, 3);
}

#[test]
fn type_names_parse_and_reject() {
    for s in ["A1", "B2", "C2", "D4", "E6", "E8", "F4", "G2"] {
        let t: CartanType = s.parse().unwrap();
        assert_eq!(t.to_string(), s);
    }
    for s in ["A0", "B1", "D3", "E9", "F3", "G1", "X2", ""] {
        assert!(s.parse::<CartanType>().is_err(), "{s}");
    }
}
