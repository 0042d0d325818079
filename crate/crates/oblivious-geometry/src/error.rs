use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoreError {
    #[error("compaction overflow: {flagged} kept items exceed capacity {capacity}")]
    CompactionOverflow { flagged: usize, capacity: usize },
    #[error("requested capacity {requested} exceeds array length {available}")]
    CapacityTooLarge { requested: usize, available: usize },
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ListError {
    #[error("malformed chain: {0}")]
    MalformedChain(String),
    #[error("halving schedule failed on all {attempts} attempts")]
    RestartLimit { attempts: u32 },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("malformed tree: {0}")]
    MalformedTree(String),
    #[error(transparent)]
    List(#[from] ListError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HullError {
    #[error("empty point set")]
    Empty,
    #[error("point {id} ({x}, {y}) exceeds the coordinate limit {limit}")]
    CoordinateOutOfRange { id: usize, x: i64, y: i64, limit: i64 },
    #[error("points {first} and {second} coincide at ({x}, {y})")]
    DuplicatePoint { first: usize, second: usize, x: i64, y: i64 },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuadtreeError {
    #[error("empty point set")]
    Empty,
    #[error("grid bits {bits} outside 1..=31")]
    GridBits { bits: u32 },
    #[error("point {id} ({x}, {y}) lies outside the 2^{bits} grid")]
    OutOfGrid { id: usize, x: i64, y: i64, bits: u32 },
    #[error("points {first} and {second} coincide at ({x}, {y})")]
    DuplicatePoint { first: usize, second: usize, x: i64, y: i64 },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WspdError {
    #[error("separation {num}/{den} must exceed 2 with terms at most 2^20")]
    Separation { num: u64, den: u64 },
    #[error("{pairs} pairs exceed the capacity {capacity}")]
    Overflow { pairs: usize, capacity: usize },
    #[error(transparent)]
    Quadtree(#[from] QuadtreeError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProximityError {
    #[error("need at least 2 points, got {0}")]
    TooFewPoints(usize),
    #[error("{candidates} candidates exceed the capacity {capacity}")]
    Overflow { candidates: usize, capacity: usize },
    #[error(transparent)]
    Quadtree(#[from] QuadtreeError),
    #[error(transparent)]
    Wspd(#[from] WspdError),
    #[error("no neighbor reached point {id} ({truncated} list entries were cut)")]
    LostNeighbor { id: usize, truncated: usize },
}
