//! Data-oblivious algorithms for planar computational geometry.
//!
//! Every algorithm reads and writes [`trace::TracedArray`]s, and the sequence
//! of `(array, index, read/write)` events depends only on the input size (and
//! the random seed, where one is taken).

pub mod cli;
pub mod combinatorics;
pub mod error;
pub mod hull;
pub mod oracle;
pub mod primitives;
pub mod proximity;
pub mod quadtree;
pub mod rng;
pub mod trace;
pub mod wspd;

pub use error::CoreError;
pub use primitives::Padded;
pub use rng::SeededRng;
pub use trace::{TraceEvent, TracedArray, Tracer};

