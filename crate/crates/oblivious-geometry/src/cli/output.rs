//! JSON result shapes and SVG drawings.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::Serialize;

use crate::hull::{GridPoint, HullRepresentation};
use crate::proximity::Neighbor;
use crate::quadtree::QuadNode;

/// Top-level JSON object of every subcommand.
#[derive(Debug, Serialize)]
pub struct Envelope<R: Serialize> {
    pub algorithm: &'static str,
    pub n: usize,
    pub parameters: Parameters,
    pub result: R,
}

#[derive(Debug, Serialize)]
pub struct Parameters {
    pub seed: u64,
    pub separation: String,
    pub grid_bits: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub schedule: Option<Vec<usize>>,
}

/// Input point after normalization.
#[derive(Debug, Serialize)]
pub struct PointOut {
    pub id: usize,
    pub x: i64,
    pub y: i64,
}

impl PointOut {
    pub fn all(points: &[GridPoint]) -> Vec<PointOut> {
        points.iter().map(|p| PointOut { id: p.id, x: p.x, y: p.y }).collect()
    }
}

#[derive(Debug, Serialize)]
pub struct HullOut {
    /// In `(x, y, id)` order.
    pub vertices: Vec<usize>,
    /// Per input point: `[left, right]` endpoints of its upper hull edge.
    pub upper: Vec<(usize, Option<usize>)>,
    pub lower: Vec<(usize, Option<usize>)>,
    pub points: Vec<PointOut>,
}

impl HullOut {
    pub fn new(points: &[GridPoint], hull: &HullRepresentation) -> Self {
        let edges = |a: &crate::TracedArray<crate::hull::EdgeRef>| a.contents().iter().map(|e| (e.left, e.right)).collect();
        HullOut { vertices: hull.vertex_ids(), upper: edges(&hull.upper), lower: edges(&hull.lower), points: PointOut::all(points) }
    }
}

#[derive(Debug, Serialize)]
pub struct NodeOut {
    pub id: usize,
    pub depth: u32,
    /// Interleaved row/column bits of the box, hex.
    pub prefix: String,
    pub parent: Option<usize>,
    pub children: [Option<usize>; 4],
    pub point: Option<usize>,
}

impl NodeOut {
    pub fn all(nodes: &[QuadNode]) -> Vec<NodeOut> {
        nodes
            .iter()
            .map(|q| {
                let width = (2 * q.cell.depth as usize).div_ceil(4).max(1);
                NodeOut {
                    id: q.id,
                    depth: q.cell.depth,
                    prefix: format!("{:0width$x}", q.cell.prefix),
                    parent: q.parent,
                    children: q.children,
                    point: q.point,
                }
            })
            .collect()
    }
}

#[derive(Debug, Serialize)]
pub struct QuadtreeOut {
    pub node_count: usize,
    pub internal_count: usize,
    pub nodes: Vec<NodeOut>,
    pub points: Vec<PointOut>,
}

#[derive(Debug, Serialize)]
pub struct WspdOut {
    pub pair_count: usize,
    /// Quadtree node ids.
    pub pairs: Vec<(usize, usize)>,
    pub nodes: Vec<NodeOut>,
    pub points: Vec<PointOut>,
}

#[derive(Debug, Serialize)]
pub struct ClosestPairOut {
    pub a: usize,
    pub b: usize,
    /// Squared distance on the grid.
    pub dist_sq: u64,
    /// Distance in input units.
    pub distance: f64,
}

#[derive(Debug, Serialize)]
pub struct NeighborOut {
    pub id: usize,
    pub neighbor: usize,
    pub dist_sq: u64,
    pub distance: f64,
}

#[derive(Debug, Serialize)]
pub struct AnnOut {
    pub neighbors: Vec<NeighborOut>,
    pub truncated: usize,
}

/// Affine map from the `2^bits` grid square onto the 1024 px viewport.
struct Canvas {
    scale: f64,
    body: String,
}

const SIZE: f64 = 1024.0;
const MARGIN: f64 = SIZE * 0.05;

impl Canvas {
    fn new(bits: u32) -> Self {
        let side = ((1u64 << bits) - 1).max(1) as f64;
        Canvas { scale: (SIZE - 2.0 * MARGIN) / side, body: String::new() }
    }

    fn px(&self, x: f64, y: f64) -> (f64, f64) {
        (MARGIN + x * self.scale, SIZE - MARGIN - y * self.scale)
    }

    fn line(&mut self, a: &GridPoint, b: &GridPoint, class: &str) {
        let (x1, y1) = self.px(a.x as f64, a.y as f64);
        let (x2, y2) = self.px(b.x as f64, b.y as f64);
        let _ = writeln!(self.body, r#"<line class="{class}" x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}"/>"#);
    }

    fn rect(&mut self, corner: (u64, u64), side: u64) {
        let (x, y) = self.px(corner.0 as f64, (corner.1 + side) as f64);
        let w = side as f64 * self.scale;
        let _ = writeln!(self.body, r#"<rect class="box" x="{x:.2}" y="{y:.2}" width="{w:.2}" height="{w:.2}"/>"#);
    }

    fn points(&mut self, points: &[GridPoint], marked: &BTreeSet<usize>) {
        for p in points {
            let (x, y) = self.px(p.x as f64, p.y as f64);
            let class = if marked.contains(&p.id) { "point mark" } else { "point" };
            let _ = writeln!(self.body, r#"<circle class="{class}" cx="{x:.2}" cy="{y:.2}" r="3"/>"#);
        }
    }

    fn finish(self) -> String {
        format!(
            concat!(
                r#"<svg xmlns="http://www.w3.org/2000/svg" width="1024" height="1024" viewBox="0 0 1024 1024">"#,
                "\n<style>",
                ".point{{fill:#222}} .mark{{fill:#c22}} .hull{{stroke:#c22;stroke-width:2}} ",
                ".nn{{stroke:#26a;stroke-width:1}} .box{{fill:none;stroke:#999;stroke-width:0.5}}",
                "</style>\n",
                r#"<rect width="1024" height="1024" fill="white"/>"#,
                "\n{}</svg>\n"
            ),
            self.body
        )
    }
}

pub fn hull_svg(points: &[GridPoint], hull: &HullRepresentation, bits: u32) -> String {
    let mut c = Canvas::new(bits);
    let mut edges = BTreeSet::new();
    for e in hull.upper.contents().iter().chain(hull.lower.contents()) {
        if let Some(r) = e.right {
            edges.insert((e.left.min(r), e.left.max(r)));
        }
    }
    let vertices: BTreeSet<usize> = hull.vertex_ids().into_iter().collect();
    // vertical sides at the extreme columns
    for col in [points.iter().map(|p| p.x).min(), points.iter().map(|p| p.x).max()].into_iter().flatten() {
        let in_col = points.iter().filter(|p| p.x == col);
        let lo = in_col.clone().min_by_key(|p| p.y);
        let hi = in_col.max_by_key(|p| p.y);
        if let (Some(lo), Some(hi)) = (lo, hi) {
            if lo.id != hi.id {
                edges.insert((lo.id.min(hi.id), lo.id.max(hi.id)));
            }
        }
    }
    for (a, b) in edges {
        c.line(&points[a], &points[b], "hull");
    }
    c.points(points, &vertices);
    c.finish()
}

pub fn quadtree_svg(points: &[GridPoint], nodes: &[QuadNode], bits: u32) -> String {
    let mut c = Canvas::new(bits);
    for q in nodes.iter().filter(|q| q.point.is_none()) {
        c.rect(q.cell.corner(bits), q.cell.side(bits));
    }
    c.points(points, &BTreeSet::new());
    c.finish()
}

pub fn ann_svg(points: &[GridPoint], neighbors: &[Neighbor], bits: u32) -> String {
    let mut c = Canvas::new(bits);
    for nb in neighbors {
        c.line(&points[nb.id], &points[nb.neighbor], "nn");
    }
    c.points(points, &BTreeSet::new());
    c.finish()
}
