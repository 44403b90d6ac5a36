//! Initial quivers of `C_2` drawn for `A_3` and `B_3`, transcribed arrow by arrow.
//! Vertices are `(node of the unfolded diagram, p)`; arrows between frozen vertices are not drawn.

pub type V = (usize, i64);

pub struct QuiverFixture {
    pub type_label: &'static str,
    pub height: Vec<i64>,
    pub vertices: Vec<V>,
    pub frozen: Vec<V>,
    pub arrows: Vec<(V, V)>,
}

pub fn a3() -> QuiverFixture {
    QuiverFixture {
        type_label: "A3",
        height: vec![-1, 0, 1],
        vertices: vec![(1, -1), (1, -3), (1, -5), (2, 0), (2, -2), (2, -4), (3, 1), (3, -1), (3, -3)],
        frozen: vec![(1, -5), (2, -4), (3, -3)],
        arrows: vec![
            ((3, 1), (2, 0)),
            ((2, 0), (1, -1)),
            ((2, 0), (3, -1)),
            ((1, -1), (2, -2)),
            ((3, -1), (2, -2)),
            ((3, -1), (3, 1)),
            ((2, -2), (1, -3)),
            ((2, -2), (3, -3)),
            ((2, -2), (2, 0)),
            ((1, -3), (1, -1)),
            ((1, -3), (2, -4)),
            ((3, -3), (3, -1)),
            ((2, -4), (2, -2)),
            ((1, -5), (1, -3)),
        ],
    }
}

pub fn b3() -> QuiverFixture {
    QuiverFixture {
        type_label: "B3",
        height: vec![-2, 0, 1, 2, 4],
        vertices: vec![
            (1, -2), (1, -6), (1, -10),
            (2, 0), (2, -4), (2, -8),
            (3, 1), (3, -1), (3, -3), (3, -5), (3, -7), (3, -9),
            (4, 2), (4, -2), (4, -6),
            (5, 4), (5, 0), (5, -4),
        ],
        frozen: vec![(1, -10), (2, -8), (3, -9), (4, -6), (5, -4)],
        arrows: vec![
            ((5, 4), (4, 2)),
            ((4, 2), (3, -1)),
            ((4, 2), (5, 0)),
            ((3, 1), (2, 0)),
            ((2, 0), (1, -2)),
            ((2, 0), (3, -3)),
            ((5, 0), (4, -2)),
            ((5, 0), (5, 4)),
            ((3, -1), (4, -2)),
            ((3, -1), (3, 1)),
            ((1, -2), (2, -4)),
            ((4, -2), (3, -5)),
            ((4, -2), (5, -4)),
            ((4, -2), (4, 2)),
            ((3, -3), (2, -4)),
            ((3, -3), (3, -1)),
            ((2, -4), (2, 0)),
            ((2, -4), (1, -6)),
            ((2, -4), (3, -7)),
            ((5, -4), (5, 0)),
            ((3, -5), (4, -6)),
            ((3, -5), (3, -3)),
            ((1, -6), (1, -2)),
            ((1, -6), (2, -8)),
            ((4, -6), (4, -2)),
            ((3, -7), (2, -8)),
            ((3, -7), (3, -5)),
            ((2, -8), (2, -4)),
            ((3, -9), (3, -7)),
            ((1, -10), (1, -6)),
        ],
    }
}

/// Compare the constructed initial seed with a fixture; `Err` names the first difference.
pub fn compare(fx: &QuiverFixture) -> Result<(), String> {
    use std::collections::BTreeSet;
    use verlinde_core::cluster::{build_initial_seed, HeightChoice};
    use verlinde_core::CartanDatum;

    let d = CartanDatum::build(fx.type_label.parse().unwrap()).unwrap();
    let (seed, grid, _) = build_initial_seed(&d, 2, &HeightChoice::Explicit(fx.height.clone())).map_err(|e| e.to_string())?;
    let verts: BTreeSet<V> = grid.points.iter().copied().collect();
    let want: BTreeSet<V> = fx.vertices.iter().copied().collect();
    if verts != want || grid.points.len() != fx.vertices.len() {
        return Err(format!("vertices differ: {verts:?}"));
    }
    let frozen: BTreeSet<V> = grid.points.iter().zip(&grid.frozen).filter(|(_, f)| **f).map(|(p, _)| *p).collect();
    if frozen != fx.frozen.iter().copied().collect() {
        return Err(format!("frozen vertices differ: {frozen:?}"));
    }
    let mut got = BTreeSet::new();
    for (a, b, m) in seed.matrix.arrows(false) {
        if m != 1 {
            return Err(format!("multiple arrow {:?} -> {:?}", grid.points[a], grid.points[b]));
        }
        got.insert((grid.points[a], grid.points[b]));
    }
    let want: BTreeSet<(V, V)> = fx.arrows.iter().copied().collect();
    if got != want {
        let extra: Vec<_> = got.difference(&want).collect();
        let missing: Vec<_> = want.difference(&got).collect();
        return Err(format!("arrows differ: extra {extra:?}, missing {missing:?}"));
    }
    Ok(())
}
