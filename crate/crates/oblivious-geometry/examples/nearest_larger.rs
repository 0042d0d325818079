//! All nearest larger values, and merging two sorted runs with them.

use oblivious_geometry::combinatorics::{anlv, merge_via_anlv};
use oblivious_geometry::{TracedArray, Tracer};

fn main() {
    let tracer = Tracer::counting();
    let values = vec![3, 1, 4, 1, 5, 9, 2, 6];
    let near = anlv(&TracedArray::from_vec(&tracer, values.clone()));
    for (i, nb) in near.contents().iter().enumerate() {
        println!("{:>2}: larger to the left at {:?}, to the right at {:?}", values[i], nb.left, nb.right);
    }
    let c = TracedArray::from_vec(&tracer, vec![1, 4, 9, 16]);
    let d = TracedArray::from_vec(&tracer, vec![2, 3, 10]);
    println!("merged: {:?}", merge_via_anlv(&c, &d).into_vec());
    println!("events: {}", tracer.len());
}
