//! Builds a compressed quadtree and prints it as an indented outline.

use oblivious_geometry::hull::GridPoint;
use oblivious_geometry::quadtree::{build_compressed_quadtree, QuadNode};
use oblivious_geometry::{TracedArray, Tracer};

fn show(nodes: &[QuadNode], id: usize, indent: usize, bits: u32) {
    let q = &nodes[id];
    let (x, y) = q.cell.corner(bits);
    let what = q.point.map_or(String::from("internal"), |p| format!("point {p}"));
    println!("{:indent$}box at ({x}, {y}) side {}: {what}", "", q.cell.side(bits));
    for c in q.children.iter().flatten() {
        show(nodes, *c, indent + 2, bits);
    }
}

fn main() {
    let bits = 4;
    let coords = [(1, 1), (2, 1), (14, 3), (9, 12), (10, 13), (3, 9)];
    let points: Vec<GridPoint> = coords.iter().enumerate().map(|(id, &(x, y))| GridPoint::new(x, y, id)).collect();
    let tree = build_compressed_quadtree(&TracedArray::from_vec(&Tracer::counting(), points), bits).expect("points on the grid");
    show(&tree.node_list(), 0, 0, bits);
}
