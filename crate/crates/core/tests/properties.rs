mod common;

use std::process::Command;
use std::time::Duration;

use gridsat::cnf::{CardinalityEncoding, CnfFormula, EncoderConfig, Lit};
use gridsat::encode::{EncodeOptions, Problem};
use gridsat::graph::generators::random_connected;
use gridsat::graph::Graph;
use gridsat::layout::{Layout1D, Orientation, Solution, VBar};
use gridsat::sat::{solve, Backend, ExternalSolver, SolveStatus, SolverConfig};
use gridsat::search::{decide, Decision, Query};
use gridsat::verify::{
    oracle_bandwidth, oracle_boxicity_d, oracle_pathwidth, oracle_st_levels, verify_bandwidth,
    verify_bar_visibility, verify_boxicity, verify_pathwidth, verify_st_orientation, OracleLimits,
};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{edge_set, intersection_edges};

fn graph(n: usize, extra: f64, seed: u64) -> Graph {
    random_connected(n, extra, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn graphs(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n, 0.0f64..0.7, any::<u64>()).prop_map(|(n, extra, seed)| graph(n, extra, seed))
}

fn at(query: &Query, g: &Graph, value: usize) -> Decision {
    decide(query, g, value, &Backend::default(), None).expect("decision")
}

fn sat(d: &Decision) -> bool {
    d.record.status == SolveStatus::Sat
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn pathwidth_decisions_match_oracle(g in graphs(6)) {
        let opt = oracle_pathwidth(&g, &OracleLimits::default()).unwrap();
        let query = Query::new(Problem::Pathwidth);
        for p in 1..g.n() {
            let d = at(&query, &g, p);
            prop_assert_eq!(sat(&d), opt <= p, "p = {}", p);
            if let Some(Solution::Intervals(layout)) = &d.solution {
                prop_assert!(verify_pathwidth(&g, layout, p).is_ok());
                if p == opt && p > 0 {
                    prop_assert!(verify_pathwidth(&g, layout, p - 1).is_err());
                }
            }
        }
    }

    #[test]
    fn bandwidth_decisions_match_oracle(g in graphs(6)) {
        let opt = oracle_bandwidth(&g, &OracleLimits::default()).unwrap();
        let query = Query::new(Problem::Bandwidth);
        for k in 1..g.n() {
            let d = at(&query, &g, k);
            prop_assert_eq!(sat(&d), opt <= k, "k = {}", k);
            if let Some(Solution::Intervals(layout)) = &d.solution {
                let positions = layout.positions();
                prop_assert!(verify_bandwidth(&g, &positions, k).is_ok());
                let mut clash = positions.clone();
                clash[0] = clash[1];
                prop_assert!(verify_bandwidth(&g, &clash, k).is_err());
            }
        }
    }

    #[test]
    fn st_decisions_match_oracle(g in graphs(6), pick in any::<u64>()) {
        prop_assume!(g.n() >= 3 && g.is_biconnected());
        let mut rng = ChaCha8Rng::seed_from_u64(pick);
        let st: Vec<usize> = (0..g.n()).collect::<Vec<_>>().choose_multiple(&mut rng, 2).copied().collect();
        let (s, t) = (st[0], st[1]);
        let g = if g.has_edge(s, t) { g } else { g.with_edge(s, t).unwrap() };
        let opt = oracle_st_levels(&g, s, t, &OracleLimits::default()).unwrap().unwrap();
        let query = Query::new(Problem::StOrientation).with_terminals(s, t);
        for k in 2..=g.n() {
            let d = at(&query, &g, k);
            prop_assert_eq!(sat(&d), opt <= k, "k = {}", k);
            if let Some(Solution::Orientation(o)) = &d.solution {
                prop_assert!(verify_st_orientation(&g, o, s, t, k).is_ok());
                let reversed = Orientation {
                    arcs: o.arcs.iter().map(|&(a, b)| (b, a)).collect(),
                    levels: o.levels.clone(),
                };
                prop_assert!(verify_st_orientation(&g, &reversed, s, t, k).is_err());
            }
        }
    }

    #[test]
    fn bar_layouts_verify_and_width_is_monotone(g in graphs(5)) {
        let query = Query::new(Problem::BarVisibility);
        let mut was_sat = false;
        for w in 1..=g.n() + 1 {
            let d = decide(&query, &g, w, &Backend::default(), Some(Duration::from_secs(20))).unwrap();
            prop_assume!(d.record.status != SolveStatus::Timeout);
            prop_assert!(!was_sat || sat(&d), "SAT at width {} but not at {}", w - 1, w);
            was_sat = sat(&d);
            if let Some(Solution::Bars(layout)) = &d.solution {
                prop_assert!(verify_bar_visibility(&g, layout, 0).is_ok());
                prop_assert!(verify_bar_visibility(&g, layout, 1).is_ok());
                let mut outside = layout.clone();
                outside.edge_bars[0] = VBar { col: layout.width + 1, ..layout.edge_bars[0] };
                prop_assert!(verify_bar_visibility(&g, &outside, 0).is_err());
                let mut short = layout.clone();
                let (u, v) = g.edges()[0];
                let row = layout.vertex_bars[u].row;
                short.edge_bars[0].rows = (row, row);
                prop_assert!(layout.vertex_bars[v].row == row || verify_bar_visibility(&g, &short, 0).is_err());
                let mut stacked = layout.clone();
                stacked.vertex_bars[1] = layout.vertex_bars[0];
                prop_assert!(verify_bar_visibility(&g, &stacked, 0).is_err());
            }
        }
    }

    #[test]
    fn bar_k_layouts_verify(g in graphs(5), k in 1usize..=2) {
        let mut query = Query::new(Problem::BarKVisibility);
        query.crossings = k;
        let d = decide(&query, &g, g.n() + 1, &Backend::default(), Some(Duration::from_secs(20))).unwrap();
        if let Some(Solution::Bars(layout)) = &d.solution {
            prop_assert!(verify_bar_visibility(&g, layout, k).is_ok());
        }
    }

    #[test]
    fn boxicity_matches_oracle(g in graphs(4), d in 1usize..=2, side in 2u32..=3) {
        let mut query = Query::new(Problem::Boxicity);
        query.dim = d;
        let decision = at(&query, &g, side as usize);
        let oracle = oracle_boxicity_d(&g, d, side, &OracleLimits::default()).unwrap();
        prop_assert_eq!(sat(&decision), oracle.is_some());
        if let Some(Solution::Boxes(layout)) = &decision.solution {
            prop_assert!(verify_boxicity(&g, layout).is_ok());
            prop_assert_eq!(intersection_edges(&layout.boxes), edge_set(&g));
            let universal = (0..g.n()).all(|v| v == 0 || g.has_edge(0, v));
            let mut grown = layout.clone();
            grown.boxes[0] = vec![(1, side); d];
            prop_assert!(universal || verify_boxicity(&g, &grown).is_err());
        }
    }

    #[test]
    fn cardinality_encodings_agree(g in graphs(6), p in 1usize..=3) {
        let mut query = Query::new(Problem::Pathwidth);
        let binomial = at(&query, &g, p);
        query.options = EncodeOptions {
            config: EncoderConfig { cardinality: CardinalityEncoding::SequentialCounter, ..Default::default() },
            ..Default::default()
        };
        let sequential = at(&query, &g, p);
        prop_assert_eq!(binomial.record.status, sequential.record.status);
        if let Some(Solution::Intervals(layout)) = &sequential.solution {
            prop_assert!(verify_pathwidth(&g, layout, p).is_ok());
        }
    }
}

#[test]
fn pathwidth_verifier_rejects_mutations() {
    let g = Graph::new(3, [(0, 1), (1, 2)]).unwrap();
    let good = Layout1D { intervals: vec![(1, 1), (1, 2), (2, 2)] };
    assert!(verify_pathwidth(&g, &good, 1).is_ok());
    assert!(verify_pathwidth(&g, &good, 0).is_err());
    let apart = Layout1D { intervals: vec![(1, 1), (2, 2), (3, 3)] };
    assert!(verify_pathwidth(&g, &apart, 2).is_err());
    let malformed = Layout1D { intervals: vec![(0, 1), (1, 2), (2, 2)] };
    assert!(verify_pathwidth(&g, &malformed, 2).is_err());
}

fn random_3cnf(vars: usize, clauses: usize, seed: u64) -> CnfFormula {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut f = CnfFormula::with_vars(vars);
    for _ in 0..clauses {
        let lits: Vec<Lit> = (0..3)
            .map(|_| {
                let v = rng.gen_range(1..=vars as i32);
                Lit::from_dimacs(if rng.gen() { v } else { -v })
            })
            .collect();
        f.add_clause(&lits);
    }
    f
}

fn pysat_available() -> bool {
    Command::new("python3")
        .args(["-c", "import pysat.solvers"])
        .output()
        .is_ok_and(|o| o.status.success())
}

#[test]
fn agrees_with_pysat() {
    if !pysat_available() {
        eprintln!("skipping: python3 with pysat not found");
        return;
    }
    let script = format!("{}/tests/fixtures/pysat_solver.py", env!("CARGO_MANIFEST_DIR"));
    let pysat = Backend::External(ExternalSolver::new("python3", vec![script]));
    let (mut sat, mut unsat) = (0, 0);
    for seed in 0..40 {
        // near the 3-SAT threshold, so both answers occur
        let f = random_3cnf(40, 170, seed);
        let ours = solve(&f, &SolverConfig::default());
        let theirs = pysat.solve(&f, Some(Duration::from_secs(60))).unwrap();
        assert_eq!(ours.status, theirs.status, "seed {seed}");
        match ours.status {
            SolveStatus::Sat => sat += 1,
            _ => unsat += 1,
        }
    }
    assert!(sat > 0 && unsat > 0, "{sat} SAT, {unsat} UNSAT");
}
