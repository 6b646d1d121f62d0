//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails. Criterion 8 (the Rome smoke run) is not part of this
//! target; see the `benchmark` example and the `bench` subcommand.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use gridsat::boxmodel::{
    assign_box, decode_box, encode_box, normalize_boxes, GridDims, RealBox, RealInterval,
};
use gridsat::cnf::{binomial, Assignment, CnfBuilder, EncoderConfig, Lit, ObjectId, VarName};
use gridsat::encode::{encode_boxicity, EncodeOptions, Problem};
use gridsat::graph::generators::{complete, cycle};
use gridsat::graph::Graph;
use gridsat::layout::Solution;
use gridsat::sat::{solve, Backend, SolveStatus, SolverConfig};
use gridsat::search::{
    decide, default_bounds, run_benchmark, solve_min_parameter, BenchConfig, BenchInstance, Query, SearchStatus,
};
use gridsat::verify::{
    oracle_bandwidth, oracle_boxicity_d, oracle_pathwidth, oracle_st_levels, verify_bar_visibility, verify_boxicity,
    OracleLimits,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{all_models, corpus, edge_set, intersection_edges};

const CORPUS_SEED: u64 = 20_240_917;

type Outcome = Result<String, String>;

fn check(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn within(started: Instant, limit: Duration) -> Result<(), String> {
    check(started.elapsed() < limit, || {
        format!("took {:.1}s, limit {}s", started.elapsed().as_secs_f64(), limit.as_secs())
    })
}

fn vars(b: &mut CnfBuilder, k: usize) -> Vec<Lit> {
    (0..k)
        .map(|i| b.new_var(VarName::Cell { object: ObjectId::Vertex(i as u32), cell: 0 }).unwrap().positive())
        .collect()
}

/// Clause `i` as (positive mask, negative mask) over variables `0..k+1`.
fn masks(b: &CnfBuilder) -> Vec<(u32, u32)> {
    b.formula
        .clauses()
        .map(|c| {
            c.iter().fold((0, 0), |(p, n), l| {
                let bit = 1 << l.var().index();
                if l.is_positive() {
                    (p | bit, n)
                } else {
                    (p, n | bit)
                }
            })
        })
        .collect()
}

fn satisfied(clauses: &[(u32, u32)], a: u32) -> bool {
    clauses.iter().all(|&(p, n)| a & p != 0 || !a & n != 0)
}

fn criterion_1() -> Outcome {
    let started = Instant::now();
    let mut constraints = 0;
    for k in 1..=12usize {
        let all = 1u32 << k;
        for c in 0..k {
            // activated: y_1 + … + y_k >= z, z is variable k
            let mut b = CnfBuilder::new(EncoderConfig::default());
            let y = vars(&mut b, k + 1);
            assert_eq!(b.at_least_activated(&y[..k], y[k], "activated").unwrap(), 1);
            let m = masks(&b);
            for a in 0..all << 1 {
                let sum = (a & (all - 1)).count_ones();
                let z = a >> k & 1;
                check(satisfied(&m, a) == (sum >= z), || format!("activated at-least, k={k}, assignment {a:b}"))?;
            }

            let kinds: [(&str, fn(u32, usize) -> bool, u128); 3] = [
                ("at-most", |s, c| s as usize <= c, binomial(k, c + 1)),
                ("at-least", |s, c| s as usize >= c, binomial(k, k - c + 1)),
                ("exactly", |s, c| s as usize == c, binomial(k, c + 1) + binomial(k, k - c + 1)),
            ];
            for (name, intended, expected) in kinds {
                let mut b = CnfBuilder::new(EncoderConfig::default());
                let y = vars(&mut b, k);
                let emitted = match name {
                    "at-most" => b.at_most(&y, c, "t"),
                    "at-least" => b.at_least(&y, c, "t"),
                    _ => b.exactly(&y, c, "t"),
                }
                .unwrap();
                check(emitted as u128 == expected && b.formula.num_clauses() as u128 == expected, || {
                    format!("{name}, k={k}, c={c}: {emitted} clauses, expected {expected}")
                })?;
                let m = masks(&b);
                for a in 0..all {
                    check(satisfied(&m, a) == intended(a.count_ones(), c), || {
                        format!("{name}, k={k}, c={c}, assignment {a:b}")
                    })?;
                }
                constraints += 1;
            }
        }
    }
    within(started, Duration::from_secs(10))?;
    Ok(format!("{constraints} constraints, k <= 12, exhaustive"))
}

fn all_boxes(dims: &GridDims) -> BTreeSet<Vec<(u32, u32)>> {
    let mut boxes = vec![Vec::new()];
    for k in 0..dims.dim() {
        let size = dims.size(k);
        boxes = boxes
            .into_iter()
            .flat_map(|prefix: Vec<(u32, u32)>| {
                (1..=size).flat_map(move |s| {
                    let prefix = prefix.clone();
                    (s..=size).map(move |t| {
                        let mut next = prefix.clone();
                        next.push((s, t));
                        next
                    })
                })
            })
            .collect();
    }
    boxes.into_iter().collect()
}

fn grid_shapes() -> Vec<Vec<u32>> {
    let mut shapes = Vec::new();
    for a in 1..=12u32 {
        shapes.push(vec![a]);
        for b in 1..=12 / a {
            shapes.push(vec![a, b]);
            for c in 1..=12 / (a * b) {
                shapes.push(vec![a, b, c]);
            }
        }
    }
    shapes
}

fn criterion_2() -> Outcome {
    let started = Instant::now();
    let shapes = grid_shapes();
    let mut total = 0;
    for sizes in &shapes {
        let dims = GridDims::new(sizes.clone()).unwrap();
        let mut b = CnfBuilder::new(EncoderConfig::default());
        let vars = encode_box(&mut b, &dims, ObjectId::Vertex(0)).unwrap();
        // begin/end indicators first, then cells
        let n = b.formula.num_vars();
        let cells: BTreeSet<usize> = vars.cell_vars().lits().iter().map(|l| l.var().index()).collect();
        let order: Vec<usize> = (0..n).filter(|v| !cells.contains(v)).chain(cells.iter().copied()).collect();
        let models = all_models(&b.formula, Some(&order));
        let mut decoded = BTreeSet::new();
        for values in &models {
            let model = Assignment::new(values.clone());
            let bx = decode_box(&vars, &dims, &model).map_err(|e| format!("grid {sizes:?}: {e}"))?;
            let mut canonical = Assignment::all_false(n);
            assign_box(&vars, &dims, &bx, &mut canonical);
            check(canonical == model, || format!("grid {sizes:?}: model is not the canonical one of {bx:?}"))?;
            decoded.insert(bx.bounds);
        }
        let expected = all_boxes(&dims);
        check(decoded.len() == models.len() && decoded == expected, || {
            format!("grid {sizes:?}: {} models, {} distinct boxes, {} grid boxes", models.len(), decoded.len(), expected.len())
        })?;
        total += models.len();
    }
    within(started, Duration::from_secs(60))?;
    Ok(format!("{} grids with <= 12 points, d in 1..=3, {total} models", shapes.len()))
}

fn random_interval(rng: &mut ChaCha8Rng) -> RealInterval {
    // coarse half-unit values so that shared endpoints are common
    let lo = f64::from(rng.gen_range(0..8)) / 2.0;
    let hi = lo + f64::from(rng.gen_range(0..6)) / 2.0;
    let (lc, hc) = if lo == hi { (true, true) } else { (rng.gen(), rng.gen()) };
    RealInterval::new(lo, lc, hi, hc).unwrap()
}

fn real_meet(a: &RealInterval, b: &RealInterval) -> bool {
    let (lo, lo_closed) = if a.lo.value > b.lo.value {
        (a.lo.value, a.lo.closed)
    } else if b.lo.value > a.lo.value {
        (b.lo.value, b.lo.closed)
    } else {
        (a.lo.value, a.lo.closed && b.lo.closed)
    };
    let (hi, hi_closed) = if a.hi.value < b.hi.value {
        (a.hi.value, a.hi.closed)
    } else if b.hi.value < a.hi.value {
        (b.hi.value, b.hi.closed)
    } else {
        (a.hi.value, a.hi.closed && b.hi.closed)
    };
    lo < hi || (lo == hi && lo_closed && hi_closed)
}

fn criterion_3() -> Outcome {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED);
    let instances = 2000;
    for i in 0..instances {
        let n = rng.gen_range(1..=8);
        let d = rng.gen_range(1..=3);
        let boxes: Vec<RealBox> = (0..n)
            .map(|_| RealBox { intervals: (0..d).map(|_| random_interval(&mut rng)).collect() })
            .collect();
        let grid = normalize_boxes(&boxes);
        check(grid.len() == n, || format!("instance {i}: {} boxes out", grid.len()))?;
        for (j, g) in grid.iter().enumerate() {
            check(g.bounds.iter().all(|&(s, t)| 1 <= s && s <= t && t as usize <= n), || {
                format!("instance {i}: box {j} = {:?} outside [1,{n}]", g.bounds)
            })?;
        }
        for a in 0..n {
            for b in a + 1..n {
                let real = boxes[a].intervals.iter().zip(&boxes[b].intervals).all(|(x, y)| real_meet(x, y));
                check(real == grid[a].intersects(&grid[b]), || {
                    format!("instance {i}: boxes {a},{b} real {real}, grid {:?} {:?}", grid[a].bounds, grid[b].bounds)
                })?;
            }
        }
    }
    within(started, Duration::from_secs(10))?;
    Ok(format!("{instances} instances, n <= 8, d <= 3"))
}

fn optimum(query: &Query, g: &Graph) -> Result<usize, String> {
    let outcome = solve_min_parameter(query, g, default_bounds(query, g), None, &Backend::default())
        .map_err(|e| format!("{}: {e}", g.name().unwrap_or("?")))?;
    match (outcome.status, outcome.optimum) {
        (SearchStatus::Optimal, Some(v)) => Ok(v),
        (status, _) => Err(format!("{}: search ended {}", g.name().unwrap_or("?"), status.as_str())),
    }
}

fn st_levels(g: &Graph, s: usize, t: usize) -> Result<usize, String> {
    optimum(&Query::new(Problem::StOrientation).with_terminals(s, t), g)
}

fn criterion_4() -> Outcome {
    let started = Instant::now();
    let limits = OracleLimits { orientation_edges: 21, ..Default::default() };
    let pw = Query::new(Problem::Pathwidth);
    let bw = Query::new(Problem::Bandwidth);

    let anchors = [
        ("pw(K4)", optimum(&pw, &complete(4))?, 3),
        ("pw(C5)", optimum(&pw, &cycle(5))?, 2),
        ("bw(K5)", optimum(&bw, &complete(5))?, 4),
        ("bw(C6)", optimum(&bw, &cycle(6))?, 2),
        ("st(K4)", st_levels(&complete(4), 0, 1)?, 4),
    ];
    for (name, got, want) in anchors {
        check(got == want, || format!("{name} = {got}, expected {want}"))?;
    }

    let graphs = corpus(220, 7, CORPUS_SEED);
    let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED + 1);
    let mut st_checked = 0;
    for g in &graphs {
        let name = g.name().unwrap();
        let got = optimum(&pw, g)?;
        let want = oracle_pathwidth(g, &limits).unwrap();
        check(got == want, || format!("{name}: pathwidth {got}, oracle {want}"))?;
        let got = optimum(&bw, g)?;
        let want = oracle_bandwidth(g, &limits).unwrap();
        check(got == want, || format!("{name}: bandwidth {got}, oracle {want}"))?;
        if g.n() >= 3 && g.is_biconnected() {
            let picked: Vec<usize> = (0..g.n()).collect::<Vec<_>>().choose_multiple(&mut rng, 2).copied().collect();
            let (s, t) = (picked[0], picked[1]);
            let h = if g.has_edge(s, t) { g.clone() } else { g.with_edge(s, t).unwrap().with_name(name) };
            let got = st_levels(&h, s, t)?;
            let want = oracle_st_levels(&h, s, t, &limits).unwrap().expect("biconnected with st edge");
            check(got == want, || format!("{name} (s={s}, t={t}): levels {got}, oracle {want}"))?;
            st_checked += 1;
        }
    }
    within(started, Duration::from_secs(600))?;
    Ok(format!("5 anchors, {} graphs (n <= 7), {st_checked} st instances", graphs.len()))
}

fn criterion_5() -> Outcome {
    let started = Instant::now();
    let budget = Some(Duration::from_secs(20));
    let graphs = corpus(220, 7, CORPUS_SEED);
    let (mut sat, mut timeouts, mut unsat) = (0, 0, 0);
    for (problem, k, max_n) in [(Problem::BarVisibility, 0, 6), (Problem::BarKVisibility, 1, 5)] {
        let mut query = Query::new(problem);
        query.crossings = k;
        for g in graphs.iter().filter(|g| g.n() <= max_n) {
            let name = g.name().unwrap();
            let outcome = solve_min_parameter(&query, g, default_bounds(&query, g), budget, &Backend::default())
                .map_err(|e| format!("{name}: {e}"))?;
            match outcome.solution {
                Some(Solution::Bars(layout)) => {
                    verify_bar_visibility(g, &layout, k).map_err(|v| format!("{name}, k={k}: {v}"))?;
                    if k == 0 {
                        verify_bar_visibility(g, &layout, 1).map_err(|v| format!("{name} at k=1: {v}"))?;
                    }
                    sat += 1;
                }
                Some(other) => return Err(format!("{name}: unexpected solution {other:?}")),
                None if outcome.status == SearchStatus::Timeout => timeouts += 1,
                None => unsat += 1,
            }
        }
    }

    let k5 = complete(5);
    let mut query = Query::new(Problem::BarVisibility);
    query.height = Some(5);
    let decision = decide(&query, &k5, 6, &Backend::default(), Some(Duration::from_secs(540)))
        .map_err(|e| format!("K5: {e}"))?;
    check(decision.record.status == SolveStatus::Unsat, || {
        format!("K5 at 5x6 is {}", decision.record.status)
    })?;
    within(started, Duration::from_secs(600))?;
    Ok(format!(
        "{sat} layouts verified ({unsat} infeasible in range, {timeouts} timeouts), K5 UNSAT at 5x6 in {:.1}s",
        decision.record.seconds
    ))
}

fn criterion_6() -> Outcome {
    let started = Instant::now();
    let c4 = cycle(4);
    let limits = OracleLimits::default();
    let oracle_d1 = oracle_boxicity_d(&c4, 1, 4, &limits).unwrap();
    let d1 = encode_boxicity(&c4, 1, 4, &EncodeOptions::default()).unwrap();
    let r1 = solve(&d1.formula, &SolverConfig::default());
    check(r1.status == SolveStatus::Unsat && oracle_d1.is_none(), || {
        format!("C4, d=1: solver {}, oracle {:?}", r1.status, oracle_d1)
    })?;

    let mut query = Query::new(Problem::Boxicity);
    query.dim = 2;
    let decision = decide(&query, &c4, 4, &Backend::default(), None).map_err(|e| e.to_string())?;
    let Some(Solution::Boxes(layout)) = decision.solution else {
        return Err(format!("C4, d=2, side 4: {}", decision.record.status));
    };
    verify_boxicity(&c4, &layout).map_err(|v| format!("C4, d=2: {v}"))?;

    let graphs = corpus(220, 7, CORPUS_SEED);
    let mut checked = 0;
    for g in graphs.iter().filter(|g| g.n() <= 6) {
        let name = g.name().unwrap();
        let outcome = solve_min_parameter(&query, g, default_bounds(&query, g), Some(Duration::from_secs(20)), &Backend::default())
            .map_err(|e| format!("{name}: {e}"))?;
        if let Some(Solution::Boxes(layout)) = outcome.solution {
            let got = intersection_edges(&layout.boxes);
            check(got == edge_set(g) && layout.boxes.len() == g.n(), || {
                format!("{name}: intersection graph {got:?} differs from {:?}", edge_set(g))
            })?;
            checked += 1;
        }
    }
    check(checked > 0, || "no corpus graph had a d=2 layout".into())?;
    Ok(format!(
        "C4 UNSAT at d=1 (oracle agrees), SAT at d=2 side 4, {checked} corpus layouts exact, {:.1}s",
        started.elapsed().as_secs_f64()
    ))
}

fn criterion_7() -> Outcome {
    let backend = Backend::default();
    let mut instances: Vec<BenchInstance> = corpus(40, 7, CORPUS_SEED + 7)
        .into_iter()
        .map(|g| BenchInstance::new(g.name().unwrap().to_string(), g))
        .collect();
    instances.reverse();
    let config = BenchConfig {
        query: Query::new(Problem::Pathwidth),
        timeout: Duration::from_secs(30),
        early_stop: 400,
        workers: 3,
        seed: 1,
        backend: backend.clone(),
    };
    let report = run_benchmark(instances.clone(), &config);
    let sizes: Vec<usize> = report.rows.iter().map(|r| r.n + r.m).collect();
    check(sizes.windows(2).all(|w| w[0] <= w[1]), || format!("rows not ascending in n+m: {sizes:?}"))?;
    check(report.rows.len() == instances.len() && !report.stopped_early, || "rows missing".into())?;

    // spot checks: v SAT and v-1 UNSAT
    let mut spot = 0;
    for row in report.rows.iter().step_by(4) {
        check(row.status == "OPTIMAL", || format!("{}: {}", row.graph_id, row.status))?;
        let v = row.optimum.unwrap();
        let g = &instances.iter().find(|i| i.id == row.graph_id).unwrap().graph;
        let at = |value| decide(&config.query, g, value, &backend, None).map(|d| d.record.status);
        check(at(v).ok() == Some(SolveStatus::Sat), || format!("{}: {v} not SAT", row.graph_id))?;
        if v > 0 {
            check(at(v - 1).ok() == Some(SolveStatus::Unsat), || format!("{}: {} not UNSAT", row.graph_id, v - 1))?;
        }
        spot += 1;
    }

    // per-instance timeout on an instance that cannot finish in time
    let k5 = BenchInstance::new("k5", complete(5));
    let mut bar = config.clone();
    bar.query = Query::new(Problem::BarVisibility);
    bar.query.height = Some(5);
    bar.timeout = Duration::from_millis(300);
    let slow = run_benchmark(vec![k5], &bar);
    let row = &slow.rows[0];
    check(row.status == "TIMEOUT" && row.total_seconds < 1.5, || {
        format!("timeout row {} after {:.2}s", row.status, row.total_seconds)
    })?;

    // early stop after more than 400 consecutive timeouts
    let many: Vec<BenchInstance> = (0..450).map(|i| BenchInstance::new(format!("k{i}"), complete(4))).collect();
    let mut zero = config.clone();
    zero.timeout = Duration::ZERO;
    zero.workers = 4;
    let stopped = run_benchmark(many, &zero);
    check(stopped.stopped_early && stopped.rows.len() == 401, || {
        format!("early stop: {} rows, stopped {}", stopped.rows.len(), stopped.stopped_early)
    })?;
    check(stopped.rows.iter().all(|r| r.status == "TIMEOUT"), || "early-stop rows not all TIMEOUT".into())?;
    Ok(format!(
        "{} rows ascending, {spot} spot checks, timeout honored, early stop after 401 timeouts",
        report.rows.len()
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("cardinality encodings", criterion_1),
        ("box model bijection", criterion_2),
        ("box normalization", criterion_3),
        ("oracle equivalence", criterion_4),
        ("visibility soundness", criterion_5),
        ("boxicity", criterion_6),
        ("benchmark protocol", criterion_7),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let outcome = run();
        let secs = started.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name} ({secs:.1}s): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name} ({secs:.1}s): {why}", i + 1);
            }
        }
    }
    println!("criterion 8: not run here (optional smoke run)");
    if failed > 0 {
        std::process::exit(1);
    }
}
