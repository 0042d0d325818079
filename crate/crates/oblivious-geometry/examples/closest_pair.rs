//! Closest pair on a random point set against the quadratic oracle.

use oblivious_geometry::cli::workload::random_points;
use oblivious_geometry::oracle::closest_pair_oracle;
use oblivious_geometry::proximity::closest_pair;
use oblivious_geometry::{SeededRng, TracedArray, Tracer};

fn main() {
    let points = random_points(300, 12, &mut SeededRng::new(11)).expect("room on the grid");
    let tracer = Tracer::counting();
    let cp = closest_pair(&TracedArray::from_vec(&tracer, points.clone())).expect("at least two points");
    println!("closest pair: {} and {}, squared distance {}", cp.a, cp.b, cp.dist_sq);
    println!("oracle: {:?}", closest_pair_oracle(&points));
    println!("events: {}", tracer.len());
}
