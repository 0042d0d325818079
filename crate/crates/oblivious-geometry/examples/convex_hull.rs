//! Convex hull of a small point set, checked against the sequential oracle.

use oblivious_geometry::hull::{convex_hull, GridPoint};
use oblivious_geometry::oracle::hull_oracle;
use oblivious_geometry::{TracedArray, Tracer};

fn main() {
    let coords = [(0, 0), (6, 1), (3, 2), (7, 5), (2, 6), (4, 4), (0, 3)];
    let points: Vec<GridPoint> = coords.iter().enumerate().map(|(id, &(x, y))| GridPoint::new(x, y, id)).collect();
    let tracer = Tracer::counting();
    let hull = convex_hull(&TracedArray::from_vec(&tracer, points.clone())).expect("distinct points");
    let ids = hull.vertex_ids();
    println!("hull vertices: {:?}", ids.iter().map(|&i| coords[i]).collect::<Vec<_>>());
    println!("matches oracle: {}", ids == hull_oracle(&points).vertices);
    println!("events: {}", tracer.len());
}
