//! The 4-cycle is not an interval graph but is the intersection graph of
//! rectangles.

use gridsat::encode::{decode_boxicity, encode_boxicity, EncodeOptions};
use gridsat::graph::generators::cycle;
use gridsat::sat::{solve, SolverConfig};
use gridsat::verify::{oracle_boxicity_d, verify_boxicity, OracleLimits};

fn main() {
    let c4 = cycle(4);
    for d in [1, 2] {
        let enc = encode_boxicity(&c4, d, 4, &EncodeOptions::default()).unwrap();
        let result = solve(&enc.formula, &SolverConfig::default());
        let oracle = oracle_boxicity_d(&c4, d, 4, &OracleLimits::default()).unwrap();
        println!("d={d}, side 4: solver {}, exhaustive search {}", result.status, if oracle.is_some() { "SAT" } else { "UNSAT" });
        if let Some(model) = result.assignment {
            let layout = decode_boxicity(&enc, &model).unwrap();
            verify_boxicity(&c4, &layout).expect("intersection graph matches");
            for (v, bx) in layout.boxes.iter().enumerate() {
                println!("  vertex {v}: {bx:?}");
            }
        }
    }
}
