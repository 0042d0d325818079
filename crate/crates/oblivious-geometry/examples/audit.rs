//! Audits every algorithm: one reference trace against random same-size inputs.

use oblivious_geometry::cli::audit::{audit, data_rng};
use oblivious_geometry::cli::{Algorithm, RunParams};

fn main() {
    let params = RunParams::default();
    for alg in Algorithm::ALL {
        let base = alg.random_workload(64, params.grid_bits, &mut data_rng(params.seed, 0)).expect("input fits");
        let (report, _) = audit(alg, &base, 5, &params, false).expect("algorithm runs");
        println!("{:<14} n = {}  trace length {:>10}  verdict {}", alg.name(), report.n, report.trace_length, report.verdict);
    }
}
