//! Simple undirected graphs with nonnegative integer vertex weights, plus the
//! line-based text format used by the CLI.

use std::fmt::Write as _;

use thiserror::Error;

/// Sorted set of vertex ids. The backing vector is strictly increasing.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    pub const fn new() -> Self {
        VertexSet(Vec::new())
    }

    pub fn singleton(v: usize) -> Self {
        VertexSet(vec![v])
    }

    /// Builds a set from an arbitrary iterator; duplicates collapse.
    pub fn from_unsorted(mut ids: Vec<usize>) -> Self {
        ids.sort_unstable();
        ids.dedup();
        VertexSet(ids)
    }

    /// Wraps a vector that is already strictly increasing.
    pub fn from_sorted(ids: Vec<usize>) -> Self {
        debug_assert!(ids.windows(2).all(|w| w[0] < w[1]), "ids not strictly increasing");
        VertexSet(ids)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn min_id(&self) -> Option<usize> {
        self.0.first().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn insert(&mut self, v: usize) {
        if let Err(pos) = self.0.binary_search(&v) {
            self.0.insert(pos, v);
        }
    }

    pub fn remove(&mut self, v: usize) {
        if let Ok(pos) = self.0.binary_search(&v) {
            self.0.remove(pos);
        }
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => {
                    out.push(self.0[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(other.0[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push(self.0[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        VertexSet(out)
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.iter().filter(|&v| other.contains(v)).collect())
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.iter().filter(|&v| !other.contains(v)).collect())
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.intersection(other).is_empty()
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.iter().all(|v| other.contains(v))
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        VertexSet::from_unsorted(iter.into_iter().collect())
    }
}

impl From<&[usize]> for VertexSet {
    fn from(ids: &[usize]) -> Self {
        VertexSet::from_unsorted(ids.to_vec())
    }
}

impl<const N: usize> From<[usize; N]> for VertexSet {
    fn from(ids: [usize; N]) -> Self {
        VertexSet::from_unsorted(ids.to_vec())
    }
}

/// Ordered sequence of distinct vertex ids; candidate induced path.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PathSeq(Vec<usize>);

impl PathSeq {
    pub fn new(verts: Vec<usize>) -> Self {
        PathSeq(verts)
    }

    pub fn empty() -> Self {
        PathSeq(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<usize> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<usize> {
        self.0.last().copied()
    }

    pub fn verts(&self) -> &[usize] {
        &self.0
    }

    pub fn push(&mut self, v: usize) {
        self.0.push(v);
    }

    pub fn pop(&mut self) -> Option<usize> {
        self.0.pop()
    }

    /// The path's vertices as a set.
    pub fn to_set(&self) -> VertexSet {
        VertexSet::from_unsorted(self.0.clone())
    }
}

impl From<Vec<usize>> for PathSeq {
    fn from(verts: Vec<usize>) -> Self {
        PathSeq(verts)
    }
}

/// Graph text format parse failure, with the 1-based offending line.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphParseError {
    #[error("line {line}: syntax error: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: vertex id {id} out of range (n = {n})")]
    IdOutOfRange { line: usize, id: usize, n: usize },
    #[error("line {line}: duplicate edge {u}-{v}")]
    DuplicateEdge { line: usize, u: usize, v: usize },
    #[error("line {line}: negative weight for vertex {v}")]
    NegativeWeight { line: usize, v: usize },
    #[error("missing header line \"p <n>\"")]
    MissingHeader,
}

/// Immutable simple undirected graph with u64 vertex weights.
///
/// Vertices are dense ids `0..n`. Adjacency lists are sorted; construction
/// enforces symmetry and irreflexivity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    weights: Vec<u64>,
}

impl Graph {
    /// Graph on `n` isolated unit-weight vertices.
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            weights: vec![1; n],
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    /// Path 0-1-...-(n-1).
    pub fn path(n: usize) -> Self {
        Graph::from_edges(n, &(1..n).map(|i| (i - 1, i)).collect::<Vec<_>>())
    }

    /// Cycle on n >= 3 vertices.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3);
        let mut edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        edges.push((n - 1, 0));
        Graph::from_edges(n, &edges)
    }

    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Graph::from_edges(n, &edges)
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u < self.n() && v < self.n() && u != v, "bad edge ({u},{v})");
        if let Err(pos) = self.adj[u].binary_search(&v) {
            self.adj[u].insert(pos, v);
            let pos = self.adj[v].binary_search(&u).unwrap_err();
            self.adj[v].insert(pos, u);
        }
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Degree of `v` counting only neighbors inside `keep`.
    pub fn degree_in(&self, v: usize, keep: &VertexSet) -> usize {
        self.adj[v].iter().filter(|&&u| keep.contains(u)).count()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n() {
            for &v in &self.adj[u] {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.len()).sum::<usize>() / 2
    }

    pub fn set_weight(&mut self, v: usize, w: u64) {
        self.weights[v] = w;
    }

    pub fn weight(&self, v: usize) -> u64 {
        self.weights[v]
    }

    pub fn total_weight(&self) -> u64 {
        self.weights.iter().sum()
    }

    pub fn set_weight_of(&self, s: &VertexSet) -> u64 {
        s.iter().map(|v| self.weights[v]).sum()
    }

    /// All vertices of the graph as a set.
    pub fn vertex_set(&self) -> VertexSet {
        VertexSet::from_sorted((0..self.n()).collect())
    }

    /// Closed neighborhood N[S] = S together with every neighbor of S.
    pub fn closed_neighborhood(&self, s: &VertexSet) -> VertexSet {
        let mut mark = vec![false; self.n()];
        for v in s.iter() {
            assert!(v < self.n(), "vertex id {v} out of range");
            mark[v] = true;
            for &u in &self.adj[v] {
                mark[u] = true;
            }
        }
        VertexSet::from_sorted((0..self.n()).filter(|&v| mark[v]).collect())
    }

    /// Open neighborhood N(S) = N[S] minus S.
    pub fn open_neighborhood(&self, s: &VertexSet) -> VertexSet {
        self.closed_neighborhood(s).difference(s)
    }

    /// Connected components of the induced subgraph G[keep], ordered by their
    /// minimum vertex id.
    pub fn components(&self, keep: &VertexSet) -> Vec<VertexSet> {
        let mut in_keep = vec![false; self.n()];
        for v in keep.iter() {
            assert!(v < self.n(), "vertex id {v} out of range");
            in_keep[v] = true;
        }
        let mut seen = vec![false; self.n()];
        let mut out = Vec::new();
        for start in keep.iter() {
            if seen[start] {
                continue;
            }
            let mut comp = Vec::new();
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(v) = stack.pop() {
                comp.push(v);
                for &u in &self.adj[v] {
                    if in_keep[u] && !seen[u] {
                        seen[u] = true;
                        stack.push(u);
                    }
                }
            }
            out.push(VertexSet::from_unsorted(comp));
        }
        out
    }

    /// True iff `q` lists distinct vertices, consecutive ones adjacent, and
    /// non-consecutive ones non-adjacent.
    pub fn is_induced_path(&self, q: &PathSeq) -> bool {
        let vs = q.verts();
        for &v in vs {
            if v >= self.n() {
                return false;
            }
        }
        let set = q.to_set();
        if set.len() != vs.len() {
            return false;
        }
        for i in 0..vs.len() {
            for j in i + 1..vs.len() {
                let adjacent = self.has_edge(vs[i], vs[j]);
                if j == i + 1 && !adjacent {
                    return false;
                }
                if j > i + 1 && adjacent {
                    return false;
                }
            }
        }
        true
    }

    /// Parses the line-based graph text format.
    pub fn parse(text: &str) -> Result<Graph, GraphParseError> {
        let mut n: Option<usize> = None;
        let mut g: Option<Graph> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let mut parts = trimmed.split_whitespace();
            let tag = parts.next().unwrap();
            let rest: Vec<&str> = parts.collect();
            match tag {
                "p" => {
                    if n.is_some() {
                        return Err(GraphParseError::Syntax {
                            line,
                            msg: "duplicate header".into(),
                        });
                    }
                    if rest.len() != 1 {
                        return Err(GraphParseError::Syntax {
                            line,
                            msg: "expected \"p <n>\"".into(),
                        });
                    }
                    let count: usize = rest[0].parse().map_err(|_| GraphParseError::Syntax {
                        line,
                        msg: format!("bad vertex count {:?}", rest[0]),
                    })?;
                    n = Some(count);
                    g = Some(Graph::empty(count));
                }
                "w" => {
                    let g = g.as_mut().ok_or(GraphParseError::MissingHeader)?;
                    if rest.len() != 2 {
                        return Err(GraphParseError::Syntax {
                            line,
                            msg: "expected \"w <v> <weight>\"".into(),
                        });
                    }
                    let v: usize = rest[0].parse().map_err(|_| GraphParseError::Syntax {
                        line,
                        msg: format!("bad vertex id {:?}", rest[0]),
                    })?;
                    if v >= g.n() {
                        return Err(GraphParseError::IdOutOfRange { line, id: v, n: g.n() });
                    }
                    let w: i64 = rest[1].parse().map_err(|_| GraphParseError::Syntax {
                        line,
                        msg: format!("bad weight {:?}", rest[1]),
                    })?;
                    if w < 0 {
                        return Err(GraphParseError::NegativeWeight { line, v });
                    }
                    g.set_weight(v, w as u64);
                }
                "e" => {
                    let g = g.as_mut().ok_or(GraphParseError::MissingHeader)?;
                    if rest.len() != 2 {
                        return Err(GraphParseError::Syntax {
                            line,
                            msg: "expected \"e <u> <v>\"".into(),
                        });
                    }
                    let u: usize = rest[0].parse().map_err(|_| GraphParseError::Syntax {
                        line,
                        msg: format!("bad vertex id {:?}", rest[0]),
                    })?;
                    let v: usize = rest[1].parse().map_err(|_| GraphParseError::Syntax {
                        line,
                        msg: format!("bad vertex id {:?}", rest[1]),
                    })?;
                    if u >= g.n() {
                        return Err(GraphParseError::IdOutOfRange { line, id: u, n: g.n() });
                    }
                    if v >= g.n() {
                        return Err(GraphParseError::IdOutOfRange { line, id: v, n: g.n() });
                    }
                    if u == v {
                        return Err(GraphParseError::Syntax {
                            line,
                            msg: format!("self-loop at {u}"),
                        });
                    }
                    if g.has_edge(u, v) {
                        return Err(GraphParseError::DuplicateEdge {
                            line,
                            u: u.min(v),
                            v: u.max(v),
                        });
                    }
                    g.add_edge(u, v);
                }
                _ => {
                    return Err(GraphParseError::Syntax {
                        line,
                        msg: format!("unknown line tag {tag:?}"),
                    });
                }
            }
        }
        g.ok_or(GraphParseError::MissingHeader)
    }

    /// Renders to the text format: header, non-unit weights in ascending id
    /// order, edges in lexicographic order.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "p {}", self.n());
        for v in 0..self.n() {
            if self.weights[v] != 1 {
                let _ = writeln!(out, "w {} {}", v, self.weights[v]);
            }
        }
        for (u, v) in self.edges() {
            let _ = writeln!(out, "e {u} {v}");
        }
        out
    }
}

/// 2*weight <= total, the integer form of "weight at most half the total".
pub fn is_half_bounded(weight: u64, total: u64) -> bool {
    2u128 * weight as u128 <= total as u128
}
