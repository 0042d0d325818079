//! Sorting two different arrays leaves the same memory trace.

use oblivious_geometry::primitives::oblivious_sort;
use oblivious_geometry::trace::trace_equal;
use oblivious_geometry::{TracedArray, Tracer};

fn sorted_with_trace(keys: Vec<u32>) -> (Vec<u32>, Tracer) {
    let tracer = Tracer::recording();
    let mut a = TracedArray::from_vec(&tracer, keys);
    oblivious_sort(&mut a);
    (a.into_vec(), tracer)
}

fn main() {
    let (a, ta) = sorted_with_trace(vec![5, 3, 9, 1, 7, 2]);
    let (b, tb) = sorted_with_trace(vec![1, 2, 3, 4, 5, 6]);
    println!("sorted: {a:?} and {b:?}");
    println!("trace lengths: {} and {}", ta.len(), tb.len());
    println!("traces equal: {}", trace_equal(&ta.events(), &tb.events()));
}
