//! Well-separated pairs of a random point set, verified by the all-pairs checker.

use oblivious_geometry::cli::workload::random_points;
use oblivious_geometry::oracle::wspd_checker;
use oblivious_geometry::quadtree::build_compressed_quadtree;
use oblivious_geometry::wspd::{wspd, Separation};
use oblivious_geometry::{SeededRng, TracedArray, Tracer};

fn main() {
    let (n, bits) = (200, 16);
    let mut rng = SeededRng::new(3);
    let points = random_points(n, bits, &mut rng).expect("room on the grid");
    let pts = TracedArray::from_vec(&Tracer::counting(), points);
    let tree = build_compressed_quadtree(&pts, bits).expect("distinct points");
    let s = Separation::default_2_1();
    let w = wspd(&pts, &tree, &s, &mut rng).expect("within capacity");
    let pairs = w.pair_list();
    let check = wspd_checker(&tree.node_list(), n, bits, &pairs, s.num, s.den);
    println!("{} pairs for {n} points ({:.1} per point)", pairs.len(), pairs.len() as f64 / n as f64);
    println!("checker: {check:?}");
}
