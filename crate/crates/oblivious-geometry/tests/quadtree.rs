use std::collections::HashSet;

use oblivious_geometry::hull::GridPoint;
use oblivious_geometry::oracle::quadtree_oracle;
use oblivious_geometry::quadtree::build_compressed_quadtree;
use oblivious_geometry::{TracedArray, Tracer};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn distinct(raw: Vec<(i64, i64)>) -> Vec<GridPoint> {
    let mut seen = HashSet::new();
    raw.into_iter().filter(|p| seen.insert(*p)).enumerate().map(|(i, (x, y))| GridPoint::new(x, y, i)).collect()
}

fn check(pts: &[GridPoint], bits: u32) {
    let t = Tracer::counting();
    let q = build_compressed_quadtree(&TracedArray::from_vec(&t, pts.to_vec()), bits).unwrap();
    let got = q.node_list();
    assert_eq!(got, quadtree_oracle(pts, bits), "points {pts:?}");
    assert!(got.iter().filter(|n| n.point.is_none()).count() < pts.len());
}

#[test]
fn random_sets() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for round in 0..400 {
        let bits = [2, 4, 10, 20][round % 4];
        let n = rng.gen_range(1..=200);
        let raw = (0..n).map(|_| (rng.gen_range(0..1 << bits), rng.gen_range(0..1 << bits))).collect();
        check(&distinct(raw), bits);
    }
}

#[test]
fn clustered_points_compress() {
    let pts = distinct(vec![(0, 0), (1, 0), (0, 1), (1000, 1000), (1001, 1000)]);
    check(&pts, 10);
}

proptest! {
    #[test]
    fn matches_oracle(raw in proptest::collection::vec((0i64..16, 0i64..16), 1..60)) {
        check(&distinct(raw), 4);
    }
}
