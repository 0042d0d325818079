//! Straightforward reference implementations used by the tests, the
//! acceptance harness and `obgeo audit`.

use std::fmt::Debug;

use serde::Serialize;

mod anlv;
mod hull;
mod proximity;
mod quadtree;
mod wspd;

pub use anlv::{anlv_oracle, merge_oracle};
pub use hull::{hull_oracle, tangent_oracle, HullAnswer};
pub use proximity::{closest_pair_oracle, nn_oracle};
pub use quadtree::quadtree_oracle;
pub use wspd::{wspd_checker, WspdCheck};

/// One comparison of an algorithm's output with its reference.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    pub case: String,
    pub expected: String,
    pub actual: String,
    pub verdict: bool,
}

impl OracleReport {
    pub fn compare<T: Debug + PartialEq>(case: impl Into<String>, expected: &T, actual: &T) -> Self {
        OracleReport {
            case: case.into(),
            expected: format!("{expected:?}"),
            actual: format!("{actual:?}"),
            verdict: expected == actual,
        }
    }
}
