//! Undirected simple graphs, their text formats, and block decomposition.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("edge endpoint {endpoint} out of range for {n} vertices")]
    OutOfRange { endpoint: usize, n: usize },
    #[error("edge references unknown node id {0}")]
    DanglingEndpoint(i64),
}

/// An undirected simple graph on the vertex set `0..n`.
///
/// Edges are stored once each as `(u, v)` with `u < v`, sorted. Optional
/// labels keep the identifiers a vertex had in its source file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
    name: Option<String>,
    labels: Option<Vec<String>>,
}

impl Graph {
    /// Builds a graph, collapsing duplicate edges.
    pub fn new<I>(n: usize, edges: I) -> Result<Graph, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            for endpoint in [u, v] {
                if endpoint >= n {
                    return Err(GraphError::OutOfRange { endpoint, n });
                }
            }
            set.insert((u.min(v), u.max(v)));
        }
        let edges: Vec<_> = set.into_iter().collect();
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(Graph {
            n,
            edges,
            adjacency,
            name: None,
            labels: None,
        })
    }

    pub fn empty(n: usize) -> Graph {
        Graph::new(n, []).expect("edgeless graph is valid")
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Graph {
        self.name = Some(name.into());
        self
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Graph {
        assert_eq!(labels.len(), self.n, "one label per vertex");
        self.labels = Some(labels);
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// Original label of `v`, falling back to its dense id.
    pub fn label(&self, v: usize) -> String {
        match &self.labels {
            Some(labels) => labels[v].clone(),
            None => v.to_string(),
        }
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order. Edge ids used
    /// throughout the crate are indices into this slice.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Index of edge `{u, v}` in [`Graph::edges`].
    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        self.edges.binary_search(&(u.min(v), u.max(v))).ok()
    }

    /// Ids of the edges incident to `v`.
    pub fn incident_edges(&self, v: usize) -> Vec<usize> {
        self.adjacency[v]
            .iter()
            .map(|&w| self.edge_index(v, w).expect("adjacency is consistent"))
            .collect()
    }

    /// Returns a copy with edge `{u, v}` added (no-op if present).
    pub fn with_edge(&self, u: usize, v: usize) -> Result<Graph, GraphError> {
        let mut g = Graph::new(self.n, self.edges.iter().copied().chain([(u, v)]))?;
        g.name = self.name.clone();
        g.labels = self.labels.clone();
        Ok(g)
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in &self.adjacency[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.n
    }

    /// Biconnected for the purposes of st-orientations: connected, at least
    /// two vertices, and a single block.
    pub fn is_biconnected(&self) -> bool {
        self.n >= 2 && self.is_connected() && biconnected_components(self).len() == 1
    }
}

/// Parses whitespace-separated `u v` lines. Blank lines and `#` comments are
/// skipped; an optional `n <count>` line fixes the vertex count.
pub fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
    let mut declared = None;
    let mut edges = Vec::new();
    let mut max_id = None::<usize>;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let number = |tok: &str| {
            tok.parse::<usize>().map_err(|_| GraphError::Parse {
                line: line_no,
                message: format!("expected a non-negative integer, found `{tok}`"),
            })
        };
        match tokens.as_slice() {
            ["n", count] => declared = Some(number(count)?),
            [a, b] => {
                let (u, v) = (number(a)?, number(b)?);
                if u == v {
                    return Err(GraphError::SelfLoop(u));
                }
                max_id = Some(max_id.map_or(u.max(v), |m| m.max(u).max(v)));
                edges.push((u, v));
            }
            _ => {
                return Err(GraphError::Parse {
                    line: line_no,
                    message: format!("expected `u v`, found `{line}`"),
                })
            }
        }
    }
    let n = declared.unwrap_or_else(|| max_id.map_or(0, |m| m + 1));
    Graph::new(n, edges)
}

/// Serializes in the dialect read by [`parse_edge_list`], always with an
/// `n` header so isolated vertices survive.
pub fn to_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    if let Some(name) = g.name() {
        let _ = writeln!(out, "# {name}");
    }
    let _ = writeln!(out, "n {}", g.n());
    for &(u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
enum GmlToken {
    Open,
    Close,
    Key(String),
    Int(i64),
    Real,
    Str(String),
}

fn tokenize_gml(text: &str) -> Result<Vec<(GmlToken, usize)>, GraphError> {
    let mut tokens = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let mut chars = line.char_indices().peekable();
        while let Some(&(start, c)) = chars.peek() {
            if c.is_whitespace() {
                chars.next();
            } else if c == '#' {
                break;
            } else if c == '[' {
                chars.next();
                tokens.push((GmlToken::Open, line_no));
            } else if c == ']' {
                chars.next();
                tokens.push((GmlToken::Close, line_no));
            } else if c == '"' {
                chars.next();
                let mut s = String::new();
                let mut closed = false;
                for (_, ch) in chars.by_ref() {
                    if ch == '"' {
                        closed = true;
                        break;
                    }
                    s.push(ch);
                }
                if !closed {
                    return Err(GraphError::Parse {
                        line: line_no,
                        message: "unterminated string".into(),
                    });
                }
                tokens.push((GmlToken::Str(s), line_no));
            } else {
                let mut end = start;
                while let Some(&(i, ch)) = chars.peek() {
                    if ch.is_whitespace() || ch == '[' || ch == ']' || ch == '"' {
                        break;
                    }
                    end = i + ch.len_utf8();
                    chars.next();
                }
                let word = &line[start..end];
                let token = if let Ok(v) = word.parse::<i64>() {
                    GmlToken::Int(v)
                } else if word.parse::<f64>().is_ok() {
                    GmlToken::Real
                } else {
                    GmlToken::Key(word.to_string())
                };
                tokens.push((token, line_no));
            }
        }
    }
    Ok(tokens)
}

#[derive(Default)]
struct GmlRecord {
    fields: HashMap<String, GmlToken>,
}

/// Reads the `graph [ node [ id N ] edge [ source A target B ] ]` subset of
/// GML. Unknown keys and nested lists are skipped. Node ids are remapped to
/// `0..n` in file order.
pub fn parse_gml(text: &str) -> Result<Graph, GraphError> {
    let tokens = tokenize_gml(text)?;
    let mut pos = 0;
    let err = |line: usize, message: &str| GraphError::Parse {
        line,
        message: message.to_string(),
    };

    // skip to `graph [`
    loop {
        match tokens.get(pos) {
            Some((GmlToken::Key(k), _)) if k == "graph" => break,
            Some(_) => pos += 1,
            None => return Err(err(0, "missing `graph [` block")),
        }
    }
    pos += 1;
    match tokens.get(pos) {
        Some((GmlToken::Open, _)) => pos += 1,
        Some((_, line)) => return Err(err(*line, "expected `[` after `graph`")),
        None => return Err(err(0, "unexpected end of input")),
    }

    fn skip_list(tokens: &[(GmlToken, usize)], mut pos: usize) -> Result<usize, GraphError> {
        let mut depth = 1;
        while depth > 0 {
            match tokens.get(pos) {
                Some((GmlToken::Open, _)) => depth += 1,
                Some((GmlToken::Close, _)) => depth -= 1,
                Some(_) => {}
                None => {
                    return Err(GraphError::Parse {
                        line: 0,
                        message: "unbalanced brackets".into(),
                    })
                }
            }
            pos += 1;
        }
        Ok(pos)
    }

    fn read_record(
        tokens: &[(GmlToken, usize)],
        mut pos: usize,
    ) -> Result<(GmlRecord, usize), GraphError> {
        let mut record = GmlRecord::default();
        loop {
            match tokens.get(pos) {
                Some((GmlToken::Close, _)) => return Ok((record, pos + 1)),
                Some((GmlToken::Key(key), line)) => match tokens.get(pos + 1) {
                    Some((GmlToken::Open, _)) => pos = skip_list(tokens, pos + 2)?,
                    Some((value @ (GmlToken::Int(_) | GmlToken::Real | GmlToken::Str(_)), _)) => {
                        record.fields.insert(key.clone(), value.clone());
                        pos += 2;
                    }
                    _ => {
                        return Err(GraphError::Parse {
                            line: *line,
                            message: format!("missing value for `{key}`"),
                        })
                    }
                },
                Some((_, line)) => {
                    return Err(GraphError::Parse {
                        line: *line,
                        message: "expected a key".into(),
                    })
                }
                None => {
                    return Err(GraphError::Parse {
                        line: 0,
                        message: "unexpected end of input".into(),
                    })
                }
            }
        }
    }

    let mut node_ids: Vec<i64> = Vec::new();
    let mut node_labels: Vec<Option<String>> = Vec::new();
    let mut raw_edges: Vec<(i64, i64, usize)> = Vec::new();
    let mut name = None;
    loop {
        match tokens.get(pos) {
            Some((GmlToken::Close, _)) => break,
            Some((GmlToken::Key(key), line)) => {
                let line = *line;
                match tokens.get(pos + 1) {
                    Some((GmlToken::Open, _)) => {
                        if key == "node" || key == "edge" {
                            let (record, next) = read_record(&tokens, pos + 2)?;
                            pos = next;
                            let int_field = |f: &str| match record.fields.get(f) {
                                Some(GmlToken::Int(v)) => Ok(*v),
                                _ => Err(GraphError::Parse {
                                    line,
                                    message: format!("{key} without integer `{f}`"),
                                }),
                            };
                            if key == "node" {
                                node_ids.push(int_field("id")?);
                                node_labels.push(match record.fields.get("label") {
                                    Some(GmlToken::Str(s)) => Some(s.clone()),
                                    _ => None,
                                });
                            } else {
                                raw_edges.push((int_field("source")?, int_field("target")?, line));
                            }
                        } else {
                            pos = skip_list(&tokens, pos + 2)?;
                        }
                    }
                    Some((value, _)) => {
                        if let (true, GmlToken::Str(s)) = (key == "label" || key == "name", value) {
                            name = Some(s.clone());
                        }
                        pos += 2;
                    }
                    None => return Err(err(line, "unexpected end of input")),
                }
            }
            Some((_, line)) => return Err(err(*line, "expected a key inside `graph`")),
            None => return Err(err(0, "unterminated `graph` block")),
        }
    }

    let mut index = HashMap::new();
    for (i, &id) in node_ids.iter().enumerate() {
        if index.insert(id, i).is_some() {
            return Err(err(0, &format!("duplicate node id {id}")));
        }
    }
    let mut edges = Vec::with_capacity(raw_edges.len());
    for (a, b, _) in raw_edges {
        let u = *index.get(&a).ok_or(GraphError::DanglingEndpoint(a))?;
        let v = *index.get(&b).ok_or(GraphError::DanglingEndpoint(b))?;
        edges.push((u, v));
    }
    let mut g = Graph::new(node_ids.len(), edges)?;
    let labels = node_ids
        .iter()
        .zip(node_labels)
        .map(|(id, label)| label.unwrap_or_else(|| id.to_string()))
        .collect();
    g = g.with_labels(labels);
    if let Some(name) = name {
        g = g.with_name(name);
    }
    Ok(g)
}

/// Serializes to the GML subset read by [`parse_gml`] using dense ids.
pub fn to_gml(g: &Graph) -> String {
    let mut out = String::from("graph [\n");
    if let Some(name) = g.name() {
        let _ = writeln!(out, "  label \"{}\"", name.replace('"', "'"));
    }
    for v in 0..g.n() {
        let _ = writeln!(out, "  node [ id {v} ]");
    }
    for &(u, v) in g.edges() {
        let _ = writeln!(out, "  edge [ source {u} target {v} ]");
    }
    out.push_str("]\n");
    out
}

/// One biconnected block: the subgraph plus the original id of each of its
/// vertices.
#[derive(Debug, Clone)]
pub struct Block {
    pub graph: Graph,
    pub vertices: Vec<usize>,
}

/// Block decomposition. Cut vertices appear in every block they belong to;
/// every edge lands in exactly one block. Isolated vertices yield no block.
pub fn biconnected_components(g: &Graph) -> Vec<Block> {
    let n = g.n();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut timer = 0;
    let mut edge_stack: Vec<(usize, usize)> = Vec::new();
    let mut blocks = Vec::new();

    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = timer;
        low[root] = timer;
        timer += 1;
        // frame: (vertex, parent, next neighbor index)
        let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
        while let Some(&mut (v, parent, ref mut next)) = stack.last_mut() {
            if let Some(&w) = g.neighbors(v).get(*next) {
                *next += 1;
                if disc[w] == usize::MAX {
                    edge_stack.push((v, w));
                    disc[w] = timer;
                    low[w] = timer;
                    timer += 1;
                    stack.push((w, v, 0));
                } else if w != parent && disc[w] < disc[v] {
                    edge_stack.push((v, w));
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if let Some(&(u, _, _)) = stack.last() {
                    low[u] = low[u].min(low[v]);
                    if low[v] >= disc[u] {
                        let mut block_edges = Vec::new();
                        while let Some(e) = edge_stack.pop() {
                            block_edges.push(e);
                            if e == (u, v) {
                                break;
                            }
                        }
                        blocks.push(make_block(&block_edges));
                    }
                }
            }
        }
    }
    blocks
}

fn make_block(edges: &[(usize, usize)]) -> Block {
    let mut vertices: Vec<usize> = edges.iter().flat_map(|&(a, b)| [a, b]).collect();
    vertices.sort_unstable();
    vertices.dedup();
    let local = |v: usize| vertices.binary_search(&v).expect("vertex in block");
    let graph = Graph::new(
        vertices.len(),
        edges.iter().map(|&(a, b)| (local(a), local(b))),
    )
    .expect("block edges are simple");
    let labels = vertices.iter().map(|v| v.to_string()).collect();
    Block {
        graph: graph.with_labels(labels),
        vertices,
    }
}

/// Small named graph families and a seeded random generator.
pub mod generators {
    use rand::Rng;

    use super::Graph;

    pub fn path(n: usize) -> Graph {
        Graph::new(n, (1..n).map(|i| (i - 1, i)))
            .unwrap()
            .with_name(format!("P{n}"))
    }

    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3);
        Graph::new(n, (0..n).map(|i| (i, (i + 1) % n)))
            .unwrap()
            .with_name(format!("C{n}"))
    }

    pub fn complete(n: usize) -> Graph {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Graph::new(n, edges).unwrap().with_name(format!("K{n}"))
    }

    pub fn star(leaves: usize) -> Graph {
        Graph::new(leaves + 1, (1..=leaves).map(|v| (0, v)))
            .unwrap()
            .with_name(format!("S{leaves}"))
    }

    /// Random connected graph: a random spanning tree plus each remaining
    /// pair independently with probability `extra`.
    pub fn random_connected<R: Rng>(n: usize, extra: f64, rng: &mut R) -> Graph {
        let mut edges = Vec::new();
        for v in 1..n {
            edges.push((rng.gen_range(0..v), v));
        }
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(extra) {
                    edges.push((u, v));
                }
            }
        }
        // shuffle labels so the tree is not always rooted at 0
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            perm.swap(i, rng.gen_range(0..=i));
        }
        Graph::new(n, edges.into_iter().map(|(u, v)| (perm[u], perm[v]))).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::generators::*;
    use super::*;

    #[test]
    fn edge_list_basic() {
        let g = parse_edge_list("0 1\n1 2").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
    }

    #[test]
    fn edge_list_self_loop() {
        assert_eq!(parse_edge_list("0 0"), Err(GraphError::SelfLoop(0)));
    }

    #[test]
    fn edge_list_header_and_comments() {
        let g = parse_edge_list("# comment\n\nn 5\n0 4\n4 0\n").unwrap();
        assert_eq!(g.n(), 5);
        assert_eq!(g.edges(), &[(0, 4)]);
        assert_eq!(g.degree(2), 0);
    }

    #[test]
    fn edge_list_bad_token_reports_line() {
        match parse_edge_list("0 1\n1 x\n") {
            Err(GraphError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_edge_list("0 1 2").is_err());
        assert!(parse_edge_list("n 2\n0 3").is_err());
    }

    #[test]
    fn gml_minimal() {
        let g = parse_gml("graph [ node [ id 0 ] node [ id 1 ] edge [ source 0 target 1 ] ]").unwrap();
        assert_eq!(g.n(), 2);
        assert_eq!(g.edges(), &[(0, 1)]);
    }

    #[test]
    fn gml_duplicates_and_remap() {
        let text = r#"Creator "test"
graph [
  directed 0
  node [ id 7 label "seven" graphics [ x 1.5 y 2.0 ] ]
  node [ id 9 ]
  edge [ source 7 target 9 ]
  edge [ source 9 target 7 ]
]"#;
        let g = parse_gml(text).unwrap();
        assert_eq!(g.n(), 2);
        assert_eq!(g.m(), 1);
        assert_eq!(g.label(0), "seven");
        assert_eq!(g.label(1), "9");
    }

    #[test]
    fn gml_errors() {
        assert!(matches!(
            parse_gml("graph [ node [ id 0 ] edge [ source 0 target 3 ] ]"),
            Err(GraphError::DanglingEndpoint(3))
        ));
        assert!(parse_gml("graph [ node [ label \"x\" ] ]").is_err());
        assert!(parse_gml("graph [ node [ id 0 ] node [ id 1 ] edge [ source 0 ] ]").is_err());
    }

    #[test]
    fn round_trips() {
        let g = Graph::new(5, [(0, 1), (1, 2), (3, 1)]).unwrap();
        let a = parse_edge_list(&to_edge_list(&g)).unwrap();
        assert_eq!(a.edges(), g.edges());
        assert_eq!(a.n(), 5);
        let b = parse_gml(&to_gml(&g)).unwrap();
        assert_eq!(b.edges(), g.edges());
        assert_eq!(b.n(), 5);
    }

    fn block_sizes(g: &Graph) -> Vec<(usize, usize)> {
        let mut sizes: Vec<_> = biconnected_components(g)
            .iter()
            .map(|b| (b.graph.n(), b.graph.m()))
            .collect();
        sizes.sort();
        sizes
    }

    #[test]
    fn blocks_bowtie() {
        let g = Graph::new(5, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)]).unwrap();
        assert_eq!(block_sizes(&g), vec![(3, 3), (3, 3)]);
    }

    #[test]
    fn blocks_tree_and_cycle() {
        let tree = Graph::new(5, [(0, 1), (0, 2), (2, 3), (2, 4)]).unwrap();
        assert_eq!(block_sizes(&tree), vec![(2, 1); 4]);
        assert_eq!(block_sizes(&cycle(5)), vec![(5, 5)]);
        assert!(cycle(5).is_biconnected());
        assert!(!tree.is_biconnected());
    }

    #[test]
    fn blocks_partition_edges() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let g = random_connected(9, 0.15, &mut rng);
            let mut seen = Vec::new();
            for block in biconnected_components(&g) {
                for &(a, b) in block.graph.edges() {
                    let (u, v) = (block.vertices[a], block.vertices[b]);
                    seen.push((u.min(v), u.max(v)));
                }
            }
            seen.sort();
            assert_eq!(seen, g.edges());
        }
    }
}
