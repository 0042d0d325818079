//! Exact sign tests on hull vertices whose x-coordinate carries an
//! infinitesimal offset `delta * t`, where `t` is the vertex's index inside
//! its column of equal x. Every quantity is a polynomial in `delta` with
//! integer coefficients; its sign is the sign of the lowest nonzero term.

use std::cmp::Ordering;
use std::ops::{Add, Mul, Neg, Sub};

/// Largest magnitude allowed for input coordinates, exclusive.
pub const COORD_LIMIT: i64 = 1 << 24;

const DEG: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Poly([i128; DEG]);

impl Poly {
    pub const ZERO: Poly = Poly([0; DEG]);

    pub fn constant(c: i128) -> Self {
        let mut p = [0; DEG];
        p[0] = c;
        Poly(p)
    }

    pub fn linear(c: i128, d: i128) -> Self {
        let mut p = [0; DEG];
        p[0] = c;
        p[1] = d;
        Poly(p)
    }

    pub fn sign(&self) -> Ordering {
        self.0.iter().find(|&&c| c != 0).map(|c| c.cmp(&0)).unwrap_or(Ordering::Equal)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, o: Poly) -> Poly {
        let mut p = self.0;
        for (a, b) in p.iter_mut().zip(o.0) {
            *a += b;
        }
        Poly(p)
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, o: Poly) -> Poly {
        self + (-o)
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly(self.0.map(|c| -c))
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, o: Poly) -> Poly {
        let mut p = [0i128; DEG];
        for i in 0..DEG {
            if self.0[i] == 0 {
                continue;
            }
            for j in 0..DEG - i {
                p[i + j] += self.0[i] * o.0[j];
            }
            debug_assert!((DEG - i..DEG).all(|j| o.0[j] == 0), "degree overflow");
        }
        Poly(p)
    }
}

fn sign_mul(a: Ordering, b: Ordering) -> Ordering {
    match (a, b) {
        (Ordering::Equal, _) | (_, Ordering::Equal) => Ordering::Equal,
        (x, y) if x == y => Ordering::Greater,
        _ => Ordering::Less,
    }
}

/// A point of a half-hull computation. `pos` is its index in the sorted
/// order and `id` its index in the caller's input.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HullVertex {
    pub x: i64,
    pub y: i64,
    pub t: u32,
    pub pos: u32,
    pub id: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Vec2 {
    pub x: Poly,
    pub y: Poly,
}

impl HullVertex {
    pub fn at(&self) -> Vec2 {
        Vec2 { x: Poly::linear(self.x as i128, self.t as i128), y: Poly::constant(self.y as i128) }
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2 { x: self.x - o.x, y: self.y - o.y }
    }
}

pub fn cross(u: Vec2, v: Vec2) -> Poly {
    u.x * v.y - u.y * v.x
}

/// An upper-hull edge, or a vertical dummy edge at an extreme vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HullEdge {
    /// Points up from the leftmost vertex; slope `+inf`.
    LeftDummy(HullVertex),
    Segment(HullVertex, HullVertex),
    /// Points down from the rightmost vertex; slope `-inf`.
    RightDummy(HullVertex),
}

impl HullEdge {
    pub fn origin(&self) -> Vec2 {
        match self {
            HullEdge::LeftDummy(v) | HullEdge::RightDummy(v) | HullEdge::Segment(v, _) => v.at(),
        }
    }

    pub fn direction(&self) -> Vec2 {
        match self {
            HullEdge::LeftDummy(_) => Vec2 { x: Poly::ZERO, y: Poly::constant(1) },
            HullEdge::RightDummy(_) => Vec2 { x: Poly::ZERO, y: Poly::constant(-1) },
            HullEdge::Segment(a, b) => b.at() - a.at(),
        }
    }

    pub fn left_end(&self) -> HullVertex {
        match self {
            HullEdge::LeftDummy(v) | HullEdge::RightDummy(v) | HullEdge::Segment(v, _) => *v,
        }
    }

    pub fn right_end(&self) -> HullVertex {
        match self {
            HullEdge::LeftDummy(v) | HullEdge::RightDummy(v) | HullEdge::Segment(_, v) => *v,
        }
    }

    pub fn is_dummy(&self) -> bool {
        !matches!(self, HullEdge::Segment(..))
    }

    fn slope_class(&self) -> i8 {
        match self {
            HullEdge::LeftDummy(_) => 1,
            HullEdge::Segment(..) => 0,
            HullEdge::RightDummy(_) => -1,
        }
    }
}

/// Compares slopes, dummies being `+inf` / `-inf`.
pub fn slope_cmp(a: &HullEdge, b: &HullEdge) -> Ordering {
    match (a, b) {
        (HullEdge::Segment(..), HullEdge::Segment(..)) => cross(b.direction(), a.direction()).sign(),
        _ => a.slope_class().cmp(&b.slope_class()),
    }
}

/// Strictly above the line through a non-vertical edge.
pub fn strictly_above(p: &HullVertex, e: &HullEdge) -> bool {
    cross(e.direction(), p.at() - e.origin()).sign() == Ordering::Greater
}

/// Separating vertical line, stored doubled: `2V = 2x + delta (2t - 1)` for
/// the first vertex `(x, t)` of the right-hand set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Separator {
    pub twice: Poly,
}

impl Separator {
    pub fn before(first_right: &HullVertex) -> Self {
        Separator { twice: Poly::linear(2 * first_right.x as i128, 2 * first_right.t as i128 - 1) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeLabel {
    L,
    R,
    X,
}

/// Which hull an edge belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

/// Positions of `a = l(e) ∩ l(d)` and `b = l(e) ∩ l(f)` relative to the
/// separator (`Left` is strictly left, anything else counts as right).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IntersectionCase {
    BothLeft,
    BothRight,
    ALeftBRight,
    ARightBLeft,
    /// `a` or `b` does not exist because the lines are parallel.
    Parallel,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Classification {
    pub label: EdgeLabel,
    /// Set with `X`: `d` is known to be `L` and `f` to be `R`.
    pub forced: bool,
    pub case: IntersectionCase,
}

fn intersection_left_of(e: &HullEdge, g: &HullEdge, sep: &Separator) -> Option<bool> {
    let ue = e.direction();
    let ug = g.direction();
    let den = cross(ue, ug);
    if den.is_zero() {
        return None;
    }
    let e0 = e.origin();
    let num = cross(g.origin() - e0, ug);
    // 2(a.x - V) * den = (2 e0.x - 2V) den + 2 num ue.x
    let two = Poly::constant(2);
    let s = (two * e0.x - sep.twice) * den + two * num * ue.x;
    Some(sign_mul(s.sign(), den.sign()) == Ordering::Less)
}

fn apex_strictly_above(e: &HullEdge, d: &HullEdge, f: &HullEdge) -> bool {
    let (ue, ud, uf) = (e.direction(), d.direction(), f.direction());
    let den = cross(ud, uf);
    if den.is_zero() {
        // both dummies: the chain between them is a single vertex or unknown
        let (dv, fv) = (d.right_end(), f.left_end());
        return if dv.pos == fv.pos { strictly_above(&dv, e) } else { true };
    }
    let (e0, d0, f0) = (e.origin(), d.origin(), f.origin());
    let s = cross(ue, d0 - e0) * den + cross(f0 - d0, uf) * cross(ue, ud);
    sign_mul(s.sign(), den.sign()) == Ordering::Greater
}

/// Labels a non-vertical edge `e` of one hull from the two sample edges of
/// the other hull that bracket its slope: `d` is the least steep sample
/// edge steeper than `e` and `f` the steepest one not steeper (slope ties
/// count the left hull's edge as steeper).
pub fn classify_edge(e: &HullEdge, side: Side, d: &HullEdge, f: &HullEdge, sep: &Separator) -> Classification {
    assert!(!e.is_dummy(), "classify_edge needs a non-vertical edge");
    let a_left = intersection_left_of(e, d, sep);
    let b_left = intersection_left_of(e, f, sep);
    let case = match (a_left, b_left) {
        (Some(true), Some(true)) => IntersectionCase::BothLeft,
        (Some(false), Some(false)) => IntersectionCase::BothRight,
        (Some(true), Some(false)) => IntersectionCase::ALeftBRight,
        (Some(false), Some(true)) => IntersectionCase::ARightBLeft,
        _ => IntersectionCase::Parallel,
    };
    let (own, other) = match side {
        Side::Left => (EdgeLabel::L, EdgeLabel::R),
        Side::Right => (EdgeLabel::R, EdgeLabel::L),
    };
    let label = if !apex_strictly_above(e, d, f) {
        own
    } else if strictly_above(&d.right_end(), e) || strictly_above(&f.left_end(), e) {
        other
    } else {
        EdgeLabel::X
    };
    Classification { label, forced: label == EdgeLabel::X, case }
}

/// Label of `e` once the other hull's tangent vertex `v` is known.
pub fn classify_against_vertex(e: &HullEdge, side: Side, v: &HullVertex) -> EdgeLabel {
    match side {
        Side::Left if strictly_above(v, e) => EdgeLabel::R,
        Side::Left => EdgeLabel::L,
        Side::Right if strictly_above(v, e) => EdgeLabel::L,
        Side::Right => EdgeLabel::R,
    }
}

/// Upper-hull orientation: `Less` when `p` is strictly below the chord
/// from `a` to `b`.
pub fn side_of_chord(a: &HullVertex, b: &HullVertex, p: &HullVertex) -> Ordering {
    cross(b.at() - a.at(), p.at() - a.at()).sign()
}
