use std::collections::HashSet;

use oblivious_geometry::hull::GridPoint;
use oblivious_geometry::oracle::{closest_pair_oracle, nn_oracle};
use oblivious_geometry::primitives::Padded;
use oblivious_geometry::proximity::{
    all_nearest_neighbors, closest_pair, dist_sq, neighbor_candidates, wedge_prune, CandidatePair, WEDGES,
};
use oblivious_geometry::wspd::Separation;
use oblivious_geometry::{TracedArray, Tracer};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn distinct(raw: Vec<(i64, i64)>) -> Vec<GridPoint> {
    let mut seen = HashSet::new();
    raw.into_iter().filter(|p| seen.insert(*p)).enumerate().map(|(i, (x, y))| GridPoint::new(x, y, i)).collect()
}

fn check(pts: &[GridPoint]) {
    let t = Tracer::counting();
    let arr = TracedArray::from_vec(&t, pts.to_vec());
    let nn = all_nearest_neighbors(&arr).unwrap();
    let got: Vec<_> = nn.neighbor_list().iter().map(|x| Some((x.neighbor, x.dist_sq))).collect();
    assert_eq!(got, nn_oracle(pts), "neighbors of {pts:?}");
    let cp = closest_pair(&arr).unwrap();
    let want = closest_pair_oracle(pts).unwrap();
    assert_eq!((cp.a, cp.b, cp.dist_sq), want, "closest pair of {pts:?}");
    assert_eq!(cp.dist_sq, nn.neighbor_list().iter().map(|x| x.dist_sq).min().unwrap());
}

#[test]
fn unit_square_with_near_point() {
    // corners of a 10 x 10 square and a point next to (10, 0)
    let pts = distinct(vec![(0, 0), (10, 0), (0, 10), (10, 10), (11, 0)]);
    let cp = closest_pair(&TracedArray::from_vec(&Tracer::counting(), pts.clone())).unwrap();
    assert_eq!((cp.a, cp.b, cp.dist_sq), (1, 4, 1));
    check(&pts);
}

#[test]
fn all_small_configurations_in_a_3x3_grid() {
    let cells: Vec<(i64, i64)> = (0..9).map(|i| (i % 3, i / 3)).collect();
    for mask in 0u32..1 << 9 {
        if mask.count_ones() >= 2 {
            let raw = (0..9).filter(|i| mask >> i & 1 == 1).map(|i| cells[i]).collect();
            check(&distinct(raw));
        }
    }
}

#[test]
fn random_sets() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for round in 0..80 {
        let bits = [3, 5, 10, 20][round % 4];
        let n = rng.gen_range(2..=200);
        let raw = (0..n).map(|_| (rng.gen_range(0..1 << bits), rng.gen_range(0..1 << bits))).collect();
        let pts = distinct(raw);
        if pts.len() >= 2 {
            check(&pts);
        }
    }
}

#[test]
fn push_down_keeps_true_neighbors() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for round in 0..60 {
        let bits = [4, 8, 16][round % 3];
        let n = rng.gen_range(2..=150);
        let pts = distinct((0..n).map(|_| (rng.gen_range(0..1 << bits), rng.gen_range(0..1 << bits))).collect());
        if pts.len() < 2 {
            continue;
        }
        let lists = neighbor_candidates(&TracedArray::from_vec(&Tracer::counting(), pts.clone()), &Separation::default_2_1()).unwrap();
        let by_point: std::collections::HashMap<usize, &Vec<usize>> = lists.lists.iter().map(|(b, l)| (*b, l)).collect();
        for (a, nn) in nn_oracle(&pts).iter().enumerate() {
            let (b, _) = nn.unwrap();
            assert!(by_point[&b].contains(&a), "{a} missing from N'({b}) in {pts:?}");
        }
    }
}

#[test]
fn wedge_pruning_keeps_points_whose_neighbor_is_in_the_box() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let s = Separation::default_2_1();
    for _ in 0..300 {
        // box [64, 80) x [64, 80), ball radius 8 * sqrt(2) around (72, 72)
        let inside: Vec<(i64, i64)> = (0..rng.gen_range(1..10)).map(|_| (rng.gen_range(64..80), rng.gen_range(64..80))).collect();
        let mut cands = Vec::new();
        while cands.len() < 40 {
            let (x, y): (i64, i64) = (rng.gen_range(0..160), rng.gen_range(0..160));
            let d2 = ((2 * x - 144).pow(2) + (2 * y - 144).pow(2)) as u64;
            // separated: dist >= (s + 2) * r on doubled coordinates
            if s.den * s.den * d2 >= (s.num + 2 * s.den).pow(2) * 2 * 16 * 16 {
                cands.push(CandidatePair { a: cands.len(), x, y, node: 0 });
            }
        }
        let arr = TracedArray::from_vec(&Tracer::counting(), cands.iter().copied().map(Padded::Item).collect());
        let out = wedge_prune(&arr, (144, 144), WEDGES);
        let kept: Vec<&CandidatePair> = out.contents().iter().filter_map(|c| c.item()).collect();
        assert!(kept.len() <= WEDGES);
        for c in &cands {
            if kept.iter().any(|k| k.a == c.a) {
                continue;
            }
            let to_box = inside.iter().map(|&(x, y)| dist_sq(c.x, c.y, x, y)).min().unwrap();
            let to_others = cands.iter().filter(|o| o.a != c.a).map(|o| dist_sq(c.x, c.y, o.x, o.y)).min().unwrap();
            assert!(to_others < to_box, "pruned {c:?} has its nearest neighbor in the box");
        }
    }
}

#[test]
fn traces_depend_on_size_only() {
    let trace_of = |pts: Vec<GridPoint>| {
        let t = Tracer::recording();
        all_nearest_neighbors(&TracedArray::from_vec(&t, pts)).unwrap();
        t.events()
    };
    let a = trace_of(distinct((0..24).map(|i| (i, 2 * i)).collect()));
    let b = trace_of(distinct((0..24).map(|i| ((i * 71) % 500, (i * i * 13) % 500)).collect()));
    assert_eq!(a, b);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]
    #[test]
    fn matches_quadratic_oracle(raw in proptest::collection::vec((0i64..64, 0i64..64), 2..40)) {
        let pts = distinct(raw);
        prop_assume!(pts.len() >= 2);
        check(&pts);
    }
}
