//! All nearest neighbors, compared point by point with the quadratic oracle.

use oblivious_geometry::cli::workload::random_points;
use oblivious_geometry::oracle::nn_oracle;
use oblivious_geometry::proximity::all_nearest_neighbors;
use oblivious_geometry::{SeededRng, TracedArray, Tracer};

fn main() {
    let points = random_points(256, 10, &mut SeededRng::new(5)).expect("room on the grid");
    let res = all_nearest_neighbors(&TracedArray::from_vec(&Tracer::counting(), points.clone())).expect("at least two points");
    let expected = nn_oracle(&points);
    let agree = res
        .neighbor_list()
        .iter()
        .zip(&expected)
        .filter(|(got, want)| **want == Some((got.neighbor, got.dist_sq)))
        .count();
    for nb in res.neighbor_list().iter().take(5) {
        println!("point {} -> {} (squared distance {})", nb.id, nb.neighbor, nb.dist_sq);
    }
    println!("{agree} of {} agree with the oracle, {} list entries cut", points.len(), res.truncated);
}
