#![allow(dead_code)]

use std::collections::BTreeSet;

use gridsat::cnf::CnfFormula;
use gridsat::graph::generators::random_connected;
use gridsat::graph::Graph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seeded connected graphs with 2 to `max_n` vertices, named `c0`, `c1`, …
pub fn corpus(count: usize, max_n: usize, seed: u64) -> Vec<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let n = rng.gen_range(2..=max_n);
            let extra = rng.gen_range(0.0..0.6);
            random_connected(n, extra, &mut rng).with_name(format!("c{i}"))
        })
        .collect()
}

pub fn edge_set(g: &Graph) -> BTreeSet<(usize, usize)> {
    g.edges().iter().map(|&(u, v)| (u.min(v), u.max(v))).collect()
}

/// Pairs of boxes that share a grid point.
pub fn intersection_edges(boxes: &[Vec<(u32, u32)>]) -> BTreeSet<(usize, usize)> {
    let mut out = BTreeSet::new();
    for i in 0..boxes.len() {
        for j in i + 1..boxes.len() {
            let meet = boxes[i].iter().zip(&boxes[j]).all(|(a, b)| a.0.max(b.0) <= a.1.min(b.1));
            if meet {
                out.insert((i, j));
            }
        }
    }
    out
}

/// Every satisfying assignment, by backtracking over the variables in
/// `order` (all variables when `None`) and checking each clause as soon as
/// its last variable is set.
pub fn all_models(f: &CnfFormula, order: Option<&[usize]>) -> Vec<Vec<bool>> {
    let n = f.num_vars();
    let order: Vec<usize> = order.map_or_else(|| (0..n).collect(), <[usize]>::to_vec);
    assert_eq!(order.len(), n);
    let mut rank = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        rank[v] = i;
    }
    let mut due: Vec<Vec<Vec<(usize, bool)>>> = vec![Vec::new(); n];
    for clause in f.clauses() {
        let lits: Vec<(usize, bool)> = clause.iter().map(|l| (l.var().index(), l.is_positive())).collect();
        let last = lits.iter().map(|&(v, _)| rank[v]).max().expect("no empty clauses");
        due[last].push(lits);
    }
    let mut values = vec![false; n];
    let mut out = Vec::new();
    fn go(
        depth: usize,
        order: &[usize],
        due: &[Vec<Vec<(usize, bool)>>],
        values: &mut Vec<bool>,
        out: &mut Vec<Vec<bool>>,
    ) {
        if depth == order.len() {
            out.push(values.clone());
            return;
        }
        for value in [false, true] {
            values[order[depth]] = value;
            let ok = due[depth].iter().all(|c| c.iter().any(|&(v, pos)| values[v] == pos));
            if ok {
                go(depth + 1, order, due, values, out);
            }
        }
    }
    go(0, &order, &due, &mut values, &mut out);
    out
}
