//! Ranks a linked list stored in scrambled order.

use oblivious_geometry::combinatorics::{list_rank, LinkedNode};
use oblivious_geometry::{SeededRng, TracedArray, Tracer};

fn main() {
    // chain 2 -> 0 -> 3 -> 1
    let nodes = vec![LinkedNode::new(0, Some(3)), LinkedNode::new(1, None), LinkedNode::new(2, Some(0)), LinkedNode::new(3, Some(1))];
    let tracer = Tracer::counting();
    let ranking = list_rank(&TracedArray::from_vec(&tracer, nodes), &SeededRng::new(7)).expect("well-formed chain");
    println!("nodes after each id: {:?}", ranking.ranks.contents());
    println!("restarts: {}, events: {}", ranking.restarts, tracer.len());
}
