use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("{what} = {size} exceeds the oracle limit of {limit}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    #[error("invalid oracle input: {0}")]
    Invalid(String),
}

/// Size caps for the exhaustive searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimits {
    pub permutation_vertices: usize,
    pub orientation_edges: usize,
    pub box_vertices: usize,
    pub box_side: u32,
    pub box_dim: usize,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            permutation_vertices: 9,
            orientation_edges: 16,
            box_vertices: 4,
            box_side: 4,
            box_dim: 2,
        }
    }
}

fn cap(what: &'static str, size: usize, limit: usize) -> Result<(), OracleError> {
    if size > limit {
        return Err(OracleError::TooLarge { what, size, limit });
    }
    Ok(())
}

/// Calls `visit` with every permutation of `0..n` (Heap's algorithm).
fn for_each_permutation(n: usize, mut visit: impl FnMut(&[usize])) {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    visit(&perm);
    let mut i = 1;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            visit(&perm);
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// Pathwidth as vertex separation number: the minimum over vertex orders of
/// the largest number of placed vertices that still have an unplaced
/// neighbour.
pub fn oracle_pathwidth(g: &Graph, limits: &OracleLimits) -> Result<usize, OracleError> {
    let n = g.n();
    cap("vertices", n, limits.permutation_vertices)?;
    let mut best = usize::MAX;
    let mut position = vec![0usize; n];
    for_each_permutation(n, |perm| {
        for (i, &v) in perm.iter().enumerate() {
            position[v] = i;
        }
        let mut width = 0;
        for i in 0..n {
            let open = perm[..=i]
                .iter()
                .filter(|&&v| g.neighbors(v).iter().any(|&w| position[w] > i))
                .count();
            width = width.max(open);
            if width >= best {
                break;
            }
        }
        best = best.min(width);
    });
    Ok(if n == 0 { 0 } else { best })
}

/// Minimum over vertex orders of the longest edge.
pub fn oracle_bandwidth(g: &Graph, limits: &OracleLimits) -> Result<usize, OracleError> {
    let n = g.n();
    cap("vertices", n, limits.permutation_vertices)?;
    let mut best = usize::MAX;
    for_each_permutation(n, |perm| {
        let stretch = g
            .edges()
            .iter()
            .map(|&(u, v)| perm[u].abs_diff(perm[v]))
            .max()
            .unwrap_or(0);
        best = best.min(stretch);
    });
    Ok(if n == 0 { 0 } else { best })
}

/// Minimum number of levels (vertices on a longest directed path) over all
/// st-orientations, or `None` if the graph has none.
pub fn oracle_st_levels(g: &Graph, s: usize, t: usize, limits: &OracleLimits) -> Result<Option<usize>, OracleError> {
    let (n, m) = (g.n(), g.m());
    cap("edges", m, limits.orientation_edges)?;
    if s >= n || t >= n || s == t {
        return Err(OracleError::Invalid(format!("terminals {s}, {t} on {n} vertices")));
    }
    let mut best: Option<usize> = None;
    let mut out = vec![Vec::new(); n];
    let mut indeg = vec![0usize; n];
    for mask in 0u32..1 << m {
        for list in &mut out {
            list.clear();
        }
        indeg.iter_mut().for_each(|d| *d = 0);
        for (i, &(u, v)) in g.edges().iter().enumerate() {
            let (a, b) = if mask >> i & 1 == 0 { (u, v) } else { (v, u) };
            out[a].push(b);
            indeg[b] += 1;
        }
        let unique_source = (0..n).all(|v| (indeg[v] == 0) == (v == s));
        let unique_sink = (0..n).all(|v| out[v].is_empty() == (v == t));
        if !unique_source || !unique_sink {
            continue;
        }
        if let Some(levels) = longest_path_vertices(&out, &indeg) {
            best = Some(best.map_or(levels, |b| b.min(levels)));
        }
    }
    Ok(best)
}

/// Vertices on a longest path of a DAG; `None` if there is a cycle.
fn longest_path_vertices(out: &[Vec<usize>], indeg: &[usize]) -> Option<usize> {
    let n = out.len();
    let mut remaining = indeg.to_vec();
    let mut depth = vec![1usize; n];
    let mut stack: Vec<usize> = (0..n).filter(|&v| remaining[v] == 0).collect();
    let mut seen = 0;
    while let Some(v) = stack.pop() {
        seen += 1;
        for &w in &out[v] {
            depth[w] = depth[w].max(depth[v] + 1);
            remaining[w] -= 1;
            if remaining[w] == 0 {
                stack.push(w);
            }
        }
    }
    (seen == n).then(|| depth.into_iter().max().unwrap_or(0))
}

/// Searches all assignments of boxes in `[1,side]^d` for one whose
/// intersection graph is `g`. Returns a witness when there is one.
pub fn oracle_boxicity_d(
    g: &Graph,
    d: usize,
    side: u32,
    limits: &OracleLimits,
) -> Result<Option<Vec<Vec<(u32, u32)>>>, OracleError> {
    cap("vertices", g.n(), limits.box_vertices)?;
    cap("side", side as usize, limits.box_side as usize)?;
    cap("dimension", d, limits.box_dim)?;
    if d == 0 || side == 0 {
        return Err(OracleError::Invalid(format!("d = {d}, side = {side}")));
    }
    let intervals: Vec<(u32, u32)> = (1..=side)
        .flat_map(|s| (s..=side).map(move |t| (s, t)))
        .collect();
    let mut candidates: Vec<Vec<(u32, u32)>> = vec![Vec::new()];
    for _ in 0..d {
        candidates = candidates
            .into_iter()
            .flat_map(|prefix| {
                intervals.iter().map(move |&iv| {
                    let mut next = prefix.clone();
                    next.push(iv);
                    next
                })
            })
            .collect();
    }
    let mut chosen = Vec::with_capacity(g.n());
    Ok(place(g, &candidates, &mut chosen).then_some(chosen))
}

fn meets(a: &[(u32, u32)], b: &[(u32, u32)]) -> bool {
    a.iter().zip(b).all(|(x, y)| x.0 <= y.1 && y.0 <= x.1)
}

fn place(g: &Graph, candidates: &[Vec<(u32, u32)>], chosen: &mut Vec<Vec<(u32, u32)>>) -> bool {
    let v = chosen.len();
    if v == g.n() {
        return true;
    }
    for bx in candidates {
        // prune: the new box must agree with every earlier vertex
        if (0..v).all(|u| meets(&chosen[u], bx) == g.has_edge(u, v)) {
            chosen.push(bx.clone());
            if place(g, candidates, chosen) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}
