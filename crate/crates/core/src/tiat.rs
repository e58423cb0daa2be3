//! Three-in-a-tree contract: given terminals Z in an induced subgraph, report
//! either an induced tree containing three of them or a rigid decomposition
//! with the terminals peripheral. Backends are desk-scale stand-ins for the
//! published algorithm; every answer is re-verified before it is trusted.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::esd::{is_rigid, validate_esd_within, EdgeSets, Esd, HostEdge, HostGraph};
use crate::graph::{Graph, GraphParseError, VertexSet};

/// Root-graph certificate: the host graph whose line graph equals G, with the
/// edge-to-vertex bijection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineGraphCert {
    pub root: Graph,
    /// Root edge (u, v) with u < v, mapped G vertex.
    pub edge_map: BTreeMap<(usize, usize), usize>,
}

#[derive(Debug, Error)]
pub enum TiatError {
    #[error("terminal {0} cannot be peripheral: its root edge has no degree-one endpoint")]
    NotPeripheral(usize),
    #[error("bad line-graph certificate: {0}")]
    BadCertificate(String),
    #[error("oracle decomposition rejected: {0}")]
    BadOracle(String),
    #[error("certificate parse error: {0}")]
    Parse(#[from] GraphParseError),
    #[error("certificate mapping line {line}: {msg}")]
    BadMapLine { line: usize, msg: String },
}

impl LineGraphCert {
    /// Checks the bijection against `g`: every root edge maps to exactly one
    /// vertex, every vertex is hit, and adjacency in `g` equals the
    /// shared-endpoint relation of the mapped root edges.
    pub fn verify_against(&self, g: &Graph) -> Result<(), TiatError> {
        let root_edges = self.root.edges();
        if self.edge_map.len() != root_edges.len() {
            return Err(TiatError::BadCertificate(format!(
                "{} root edges but {} mapping entries",
                root_edges.len(),
                self.edge_map.len()
            )));
        }
        for e in &root_edges {
            if !self.edge_map.contains_key(e) {
                return Err(TiatError::BadCertificate(format!("root edge {e:?} unmapped")));
            }
        }
        let mut hit = vec![false; g.n()];
        for (&e, &v) in &self.edge_map {
            if v >= g.n() {
                return Err(TiatError::BadCertificate(format!("mapped vertex {v} out of range")));
            }
            if hit[v] {
                return Err(TiatError::BadCertificate(format!("vertex {v} mapped twice")));
            }
            hit[v] = true;
            let _ = e;
        }
        if hit.iter().any(|h| !h) {
            return Err(TiatError::BadCertificate("some vertex has no root edge".into()));
        }
        let entries: Vec<(&(usize, usize), &usize)> = self.edge_map.iter().collect();
        for (i, (&ea, &va)) in entries.iter().enumerate() {
            for (&eb, &vb) in entries[i + 1..].iter() {
                let share = ea.0 == eb.0 || ea.0 == eb.1 || ea.1 == eb.0 || ea.1 == eb.1;
                if share != g.has_edge(va, vb) {
                    return Err(TiatError::BadCertificate(format!(
                        "adjacency mismatch between vertices {va} and {vb}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Certificate file: the root graph in the graph text format followed by
    /// `m <rootU> <rootV> <gVertex>` lines.
    pub fn parse(text: &str) -> Result<LineGraphCert, TiatError> {
        let mut graph_lines = String::new();
        let mut map_lines = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let trimmed = line.trim();
            if trimmed.starts_with("m ") || trimmed == "m" {
                map_lines.push((idx + 1, trimmed.to_string()));
            } else {
                graph_lines.push_str(line);
                graph_lines.push('\n');
            }
        }
        let root = Graph::parse(&graph_lines)?;
        let mut edge_map = BTreeMap::new();
        for (line, text) in map_lines {
            let parts: Vec<&str> = text.split_whitespace().collect();
            if parts.len() != 4 {
                return Err(TiatError::BadMapLine {
                    line,
                    msg: "expected \"m <rootU> <rootV> <gVertex>\"".into(),
                });
            }
            let nums: Result<Vec<usize>, _> = parts[1..].iter().map(|p| p.parse()).collect();
            let nums = nums.map_err(|_| TiatError::BadMapLine {
                line,
                msg: "bad integer".into(),
            })?;
            let (u, v, gv) = (nums[0], nums[1], nums[2]);
            if !root.has_edge(u, v) {
                return Err(TiatError::BadMapLine {
                    line,
                    msg: format!("{u}-{v} is not a root edge"),
                });
            }
            if edge_map.insert((u.min(v), u.max(v)), gv).is_some() {
                return Err(TiatError::BadMapLine {
                    line,
                    msg: format!("root edge {u}-{v} mapped twice"),
                });
            }
        }
        Ok(LineGraphCert { root, edge_map })
    }

    pub fn render(&self) -> String {
        let mut out = self.root.render();
        for (&(u, v), &gv) in &self.edge_map {
            let _ = writeln!(out, "m {u} {v} {gv}");
        }
        out
    }
}

/// The canonical decomposition of a line graph: host is the restricted root
/// minus isolated vertices; each kept vertex sits alone on its root edge with
/// both interfaces equal to it.
pub fn line_graph_esd(
    cert: &LineGraphCert,
    g: &Graph,
    keep: &VertexSet,
    z: &VertexSet,
) -> Result<Esd, TiatError> {
    // G[keep] must be the line graph of the root restricted to kept edges.
    let mut kept_edges: Vec<((usize, usize), usize)> = Vec::new();
    let mut vertex_edge: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    for (&e, &v) in &cert.edge_map {
        if keep.contains(v) {
            kept_edges.push((e, v));
            vertex_edge.insert(v, e);
        }
    }
    for v in keep.iter() {
        if !vertex_edge.contains_key(&v) {
            return Err(TiatError::BadCertificate(format!("kept vertex {v} has no root edge")));
        }
    }
    for (i, &(ea, va)) in kept_edges.iter().enumerate() {
        for &(eb, vb) in &kept_edges[i + 1..] {
            let share = ea.0 == eb.0 || ea.0 == eb.1 || ea.1 == eb.0 || ea.1 == eb.1;
            if share != g.has_edge(va, vb) {
                return Err(TiatError::BadCertificate(format!(
                    "adjacency mismatch between vertices {va} and {vb} under restriction"
                )));
            }
        }
    }
    // A terminal is peripheral exactly when its root edge keeps a degree-one
    // endpoint after the restriction (line-graph degree <= 1 is the special
    // case where this is automatic).
    let mut root_degree: BTreeMap<usize, usize> = BTreeMap::new();
    for &((a, b), _) in &kept_edges {
        *root_degree.entry(a).or_insert(0) += 1;
        *root_degree.entry(b).or_insert(0) += 1;
    }
    for zv in z.iter() {
        let (a, b) = vertex_edge[&zv];
        if root_degree[&a] != 1 && root_degree[&b] != 1 {
            return Err(TiatError::NotPeripheral(zv));
        }
    }

    let mut host_vertices = Vec::new();
    let mut host_edges = Vec::new();
    for &(e, _) in &kept_edges {
        host_vertices.push(e.0);
        host_vertices.push(e.1);
        host_edges.push(e);
    }
    let mut d = Esd::new(HostGraph::new(host_vertices, host_edges));
    for &((a, b), v) in &kept_edges {
        d.set_edge_sets(
            HostEdge::new(a, b),
            EdgeSets {
                all: VertexSet::singleton(v),
                at_lo: VertexSet::singleton(v),
                at_hi: VertexSet::singleton(v),
            },
        );
    }
    for zv in z.iter() {
        debug_assert!(
            d.peripheral_vertices().contains(zv),
            "terminal {zv} must be peripheral by the root-degree check"
        );
    }
    Ok(d)
}

/// Answer of the three-in-a-tree query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TiatAnswer {
    /// Vertex set inducing a tree that contains at least three terminals.
    Tree(VertexSet),
    /// Rigid decomposition of (G[keep], Z) with every terminal peripheral.
    Decomposition(Esd),
    /// The configured backend could not certify either side.
    Inconclusive(String),
}

/// How answers are produced. Answers are re-verified regardless of backend.
#[derive(Clone, Debug)]
pub enum TiatBackend<'a> {
    /// Canonical decomposition from a line-graph root certificate.
    LineGraph(&'a LineGraphCert),
    /// Caller-supplied decomposition for fixtures; rejected unless it checks out.
    Oracle(&'a Esd),
    /// Complete enumeration of induced subtrees up to `budget` vertices.
    Exhaustive { budget: usize },
}

/// Result of the exhaustive induced-subtree enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TreeSearch {
    Tree(VertexSet),
    /// Search space exhausted: no induced tree contains three terminals.
    NoTreeProven,
    BudgetExceeded,
}

/// True iff `set` is nonempty, connected, and acyclic in G[keep-restricted].
pub fn is_induced_tree(g: &Graph, set: &VertexSet) -> bool {
    if set.is_empty() {
        return false;
    }
    let comps = g.components(set);
    if comps.len() != 1 {
        return false;
    }
    let mut edges = 0;
    for u in set.iter() {
        edges += g.neighbors(u).iter().filter(|&&v| set.contains(v)).count();
    }
    edges / 2 == set.len() - 1
}

/// Enumerates connected acyclic induced subgraphs of G[keep] of size at most
/// `budget`, stopping at the first one containing three or more terminals.
/// Duplicate-free: sets are rooted at their minimum vertex and extensions are
/// consumed in increasing order.
pub fn exhaustive_tree_search(g: &Graph, keep: &VertexSet, z: &VertexSet, budget: usize) -> TreeSearch {
    let kept: Vec<usize> = keep.iter().collect();
    let k = kept.len();
    if z.intersection(keep).len() < 3 {
        return TreeSearch::NoTreeProven;
    }
    if k > 128 {
        return TreeSearch::BudgetExceeded;
    }
    let index: BTreeMap<usize, usize> = kept.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let adj: Vec<u128> = kept
        .iter()
        .map(|&v| {
            let mut mask = 0u128;
            for &u in g.neighbors(v) {
                if let Some(&i) = index.get(&u) {
                    mask |= 1 << i;
                }
            }
            mask
        })
        .collect();
    let zmask: u128 = z
        .iter()
        .filter_map(|v| index.get(&v))
        .fold(0u128, |m, &i| m | (1 << i));

    fn bits(mut mask: u128) -> impl Iterator<Item = usize> {
        std::iter::from_fn(move || {
            if mask == 0 {
                None
            } else {
                let i = mask.trailing_zeros() as usize;
                mask &= mask - 1;
                Some(i)
            }
        })
    }

    struct Search<'a> {
        adj: &'a [u128],
        zmask: u128,
        budget: usize,
    }

    impl Search<'_> {
        fn run(&self, s: u128, size: usize, allowed: u128, nbh: u128) -> Option<u128> {
            if (s & self.zmask).count_ones() >= 3 {
                return Some(s);
            }
            if size == self.budget {
                return None;
            }
            let mut local = allowed;
            let ext = nbh & allowed;
            for i in bits(ext) {
                local &= !(1u128 << i);
                // Tree prune: a vertex with two neighbors inside closes a cycle,
                // now and in every superset.
                if (self.adj[i] & s).count_ones() == 1 {
                    let found = self.run(s | (1 << i), size + 1, local, nbh | self.adj[i]);
                    if found.is_some() {
                        return found;
                    }
                }
            }
            None
        }
    }

    let all_k = if k >= 128 { !0u128 } else { (1u128 << k) - 1 };
    let search = Search { adj: &adj, zmask, budget };
    if budget >= 1 {
        for root in 0..k {
            // Sets are rooted at their minimum member: only larger ids extend.
            let allowed = if root + 1 >= 128 { 0 } else { (!0u128 << (root + 1)) & all_k };
            if let Some(found) = search.run(1 << root, 1, allowed, adj[root]) {
                let verts: VertexSet = bits(found).map(|i| kept[i]).collect();
                debug_assert!(is_induced_tree(g, &verts));
                return TreeSearch::Tree(verts);
            }
        }
    }
    if budget >= k {
        TreeSearch::NoTreeProven
    } else {
        TreeSearch::BudgetExceeded
    }
}

/// Runs the configured backend on (G[keep], Z) and re-verifies its answer.
pub fn three_in_a_tree(
    g: &Graph,
    keep: &VertexSet,
    z: &VertexSet,
    backend: &TiatBackend<'_>,
) -> Result<TiatAnswer, TiatError> {
    assert!(z.len() >= 2, "three-in-a-tree needs at least two terminals");
    assert!(z.is_subset(keep), "terminals must lie in the queried subgraph");
    match backend {
        TiatBackend::LineGraph(cert) => {
            let d = line_graph_esd(cert, g, keep, z)?;
            verify_decomposition(g, keep, z, &d).map_err(TiatError::BadCertificate)?;
            Ok(TiatAnswer::Decomposition(d))
        }
        TiatBackend::Oracle(esd) => {
            verify_decomposition(g, keep, z, esd).map_err(TiatError::BadOracle)?;
            Ok(TiatAnswer::Decomposition((*esd).clone()))
        }
        TiatBackend::Exhaustive { budget } => match exhaustive_tree_search(g, keep, z, *budget) {
            TreeSearch::Tree(set) => {
                assert!(is_induced_tree(g, &set), "search returned a non-tree");
                assert!(set.intersection(z).len() >= 3, "search returned too few terminals");
                Ok(TiatAnswer::Tree(set))
            }
            TreeSearch::NoTreeProven => Ok(TiatAnswer::Inconclusive(
                "no induced tree contains three terminals and no decomposition backend is configured".into(),
            )),
            TreeSearch::BudgetExceeded => Ok(TiatAnswer::Inconclusive("tree search budget exhausted".into())),
        },
    }
}

/// Certifying check shared by the decomposition-producing backends.
pub fn verify_decomposition(g: &Graph, keep: &VertexSet, z: &VertexSet, d: &Esd) -> Result<(), String> {
    let report = validate_esd_within(g, keep, d);
    if !report.ok() {
        return Err(format!("invalid decomposition: {}", report.summary()));
    }
    let rigid = is_rigid(d);
    if !rigid.ok() {
        return Err(format!("decomposition not rigid: {}", rigid.summary()));
    }
    let peripheral = d.peripheral_vertices();
    for zv in z.iter() {
        if !peripheral.contains(zv) {
            return Err(format!("terminal {zv} is not peripheral"));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Root path on 4 vertices; its line graph is P3.
    fn p4_cert() -> (Graph, LineGraphCert) {
        let root = Graph::path(4);
        let g = Graph::path(3);
        let edge_map = [((0, 1), 0), ((1, 2), 1), ((2, 3), 2)].into_iter().collect();
        (g, LineGraphCert { root, edge_map })
    }

    /// Root claw; its line graph is K3.
    fn claw_cert() -> (Graph, LineGraphCert) {
        let root = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]);
        let g = Graph::complete(3);
        let edge_map = [((0, 1), 0), ((0, 2), 1), ((0, 3), 2)].into_iter().collect();
        (g, LineGraphCert { root, edge_map })
    }

    #[test]
    fn cert_verifies() {
        let (g, cert) = p4_cert();
        cert.verify_against(&g).unwrap();
        let (g, cert) = claw_cert();
        cert.verify_against(&g).unwrap();
    }

    #[test]
    fn cert_rejects_wrong_graph() {
        let (_, cert) = p4_cert();
        let wrong = Graph::complete(3);
        assert!(cert.verify_against(&wrong).is_err());
    }

    #[test]
    fn cert_round_trip() {
        let (_, cert) = claw_cert();
        let back = LineGraphCert::parse(&cert.render()).unwrap();
        assert_eq!(back, cert);
    }

    #[test]
    fn canonical_esd_of_path_root() {
        let (g, cert) = p4_cert();
        let z = VertexSet::from([0, 2]);
        let d = line_graph_esd(&cert, &g, &g.vertex_set(), &z).unwrap();
        assert!(validate_esd_within(&g, &g.vertex_set(), &d).ok());
        assert!(is_rigid(&d).ok());
        // The two end edges' vertices are peripheral.
        assert_eq!(d.peripheral_vertices(), VertexSet::from([0, 2]));
    }

    #[test]
    fn canonical_esd_of_claw_root() {
        let (g, cert) = claw_cert();
        let z = VertexSet::from([0, 1, 2]);
        let d = line_graph_esd(&cert, &g, &g.vertex_set(), &z).unwrap();
        assert!(verify_decomposition(&g, &g.vertex_set(), &z, &d).is_ok());
        assert_eq!(d.peripheral_vertices(), VertexSet::from([0, 1, 2]));
    }

    #[test]
    fn triangle_root_has_no_peripheral_vertices() {
        // Root triangle: every line-graph vertex has degree 2.
        let root = Graph::cycle(3);
        let g = Graph::complete(3);
        let cert = LineGraphCert {
            root,
            edge_map: [((0, 1), 0), ((0, 2), 1), ((1, 2), 2)].into_iter().collect(),
        };
        cert.verify_against(&g).unwrap();
        let err = line_graph_esd(&cert, &g, &g.vertex_set(), &VertexSet::singleton(0));
        assert!(matches!(err, Err(TiatError::NotPeripheral(0))));
    }

    #[test]
    fn tree_search_p3_all_terminals() {
        let g = Graph::path(3);
        let z = VertexSet::from([0, 1, 2]);
        match exhaustive_tree_search(&g, &g.vertex_set(), &z, g.n()) {
            TreeSearch::Tree(set) => assert_eq!(set, VertexSet::from([0, 1, 2])),
            other => panic!("expected tree, got {other:?}"),
        }
    }

    #[test]
    fn tree_search_k3_proves_absence() {
        let g = Graph::complete(3);
        let z = VertexSet::from([0, 1, 2]);
        assert_eq!(exhaustive_tree_search(&g, &g.vertex_set(), &z, 3), TreeSearch::NoTreeProven);
    }

    #[test]
    fn tree_search_budget_semantics() {
        // Star with subdivided rays: a tree with 3 terminals needs 7 vertices.
        let g = Graph::from_edges(7, &[(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)]);
        let z = VertexSet::from([2, 4, 6]);
        assert_eq!(exhaustive_tree_search(&g, &g.vertex_set(), &z, 4), TreeSearch::BudgetExceeded);
        assert!(matches!(
            exhaustive_tree_search(&g, &g.vertex_set(), &z, 7),
            TreeSearch::Tree(_)
        ));
    }

    #[test]
    fn tree_search_finds_claw_in_claw() {
        let g = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]);
        let z = VertexSet::from([1, 2, 3]);
        match exhaustive_tree_search(&g, &g.vertex_set(), &z, g.n()) {
            TreeSearch::Tree(set) => {
                assert!(is_induced_tree(&g, &set));
                assert!(set.intersection(&z).len() >= 3);
            }
            other => panic!("expected tree, got {other:?}"),
        }
    }

    #[test]
    fn three_in_a_tree_dispatch() {
        // Exhaustive on P3.
        let g = Graph::path(3);
        let z = VertexSet::from([0, 1, 2]);
        let ans = three_in_a_tree(&g, &g.vertex_set(), &z, &TiatBackend::Exhaustive { budget: 3 }).unwrap();
        assert!(matches!(ans, TiatAnswer::Tree(_)));

        // Oracle on K3 with the claw-host decomposition.
        let g = Graph::complete(3);
        let (g2, cert) = claw_cert();
        assert_eq!(g, g2);
        let d = line_graph_esd(&cert, &g, &g.vertex_set(), &z).unwrap();
        let ans = three_in_a_tree(&g, &g.vertex_set(), &z, &TiatBackend::Oracle(&d)).unwrap();
        assert!(matches!(ans, TiatAnswer::Decomposition(_)));

        // Exhaustive on K3 cannot certify the decomposition side.
        let ans = three_in_a_tree(&g, &g.vertex_set(), &z, &TiatBackend::Exhaustive { budget: 3 }).unwrap();
        assert!(matches!(ans, TiatAnswer::Inconclusive(_)));
    }

    #[test]
    fn three_isolated_terminals_on_disjoint_edges() {
        // Three isolated vertices, each alone on its own host edge with both
        // interfaces: all peripheral.
        let g = Graph::empty(3);
        let z = VertexSet::from([0, 1, 2]);
        let mut d = Esd::new(HostGraph::new(0..6, [(0, 1), (2, 3), (4, 5)]));
        for v in 0..3 {
            let e = HostEdge::new(2 * v, 2 * v + 1);
            d.set_edge_sets(
                e,
                EdgeSets {
                    all: VertexSet::singleton(v),
                    at_lo: VertexSet::singleton(v),
                    at_hi: VertexSet::singleton(v),
                },
            );
        }
        let ans = three_in_a_tree(&g, &g.vertex_set(), &z, &TiatBackend::Oracle(&d)).unwrap();
        assert!(matches!(ans, TiatAnswer::Decomposition(_)));
    }

    #[test]
    fn oracle_rejects_corrupt_decomposition() {
        let g = Graph::complete(3);
        let z = VertexSet::from([0, 1, 2]);
        let d = crate::esd::trivial_esd(&g); // valid but nobody is peripheral
        assert!(matches!(
            three_in_a_tree(&g, &g.vertex_set(), &z, &TiatBackend::Oracle(&d)),
            Err(TiatError::BadOracle(_))
        ));
    }
}
