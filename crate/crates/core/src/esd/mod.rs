//! Extended strip decompositions: the (H, eta) data model, the
//! definition-level validator, particles, restriction, peripheral vertices,
//! interface dominators, and the rigidification procedure.

pub mod io;
pub mod rigidify;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::graph::{Graph, VertexSet};

/// Host edge with endpoints stored in increasing order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HostEdge(usize, usize);

impl HostEdge {
    pub fn new(p: usize, q: usize) -> Self {
        assert_ne!(p, q, "host edge endpoints must differ");
        HostEdge(p.min(q), p.max(q))
    }

    pub fn lo(&self) -> usize {
        self.0
    }

    pub fn hi(&self) -> usize {
        self.1
    }

    pub fn ends(&self) -> [usize; 2] {
        [self.0, self.1]
    }

    pub fn has_end(&self, x: usize) -> bool {
        self.0 == x || self.1 == x
    }

    /// The endpoint other than `x`.
    pub fn other(&self, x: usize) -> usize {
        debug_assert!(self.has_end(x));
        if self.0 == x {
            self.1
        } else {
            self.0
        }
    }
}

impl std::fmt::Display for HostEdge {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}-{}", self.0, self.1)
    }
}

/// Three distinct host vertices stored in increasing order. Keys both host
/// triangles and the relaxed procedure's arbitrary triples.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HostTriple(usize, usize, usize);

impl HostTriple {
    pub fn new(a: usize, b: usize, c: usize) -> Self {
        let mut v = [a, b, c];
        v.sort_unstable();
        assert!(v[0] < v[1] && v[1] < v[2], "triple vertices must be distinct");
        HostTriple(v[0], v[1], v[2])
    }

    pub fn verts(&self) -> [usize; 3] {
        [self.0, self.1, self.2]
    }

    pub fn contains(&self, x: usize) -> bool {
        self.0 == x || self.1 == x || self.2 == x
    }

    pub fn contains_edge(&self, e: HostEdge) -> bool {
        self.contains(e.lo()) && self.contains(e.hi())
    }

    /// The three vertex pairs of the triple.
    pub fn pairs(&self) -> [HostEdge; 3] {
        [
            HostEdge::new(self.0, self.1),
            HostEdge::new(self.0, self.2),
            HostEdge::new(self.1, self.2),
        ]
    }

    /// The vertex not on the given pair.
    pub fn opposite(&self, e: HostEdge) -> usize {
        debug_assert!(self.contains_edge(e));
        self.verts().into_iter().find(|&x| !e.has_end(x)).unwrap()
    }
}

impl std::fmt::Display for HostTriple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}-{}-{}", self.0, self.1, self.2)
    }
}

/// The host graph H; simple, with arbitrary (not necessarily dense) ids.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HostGraph {
    vertices: Vec<usize>,        // sorted
    edges: Vec<HostEdge>,        // sorted
}

impl HostGraph {
    pub fn new(vertices: impl IntoIterator<Item = usize>, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut vs: Vec<usize> = vertices.into_iter().collect();
        vs.sort_unstable();
        vs.dedup();
        let mut es: Vec<HostEdge> = edges.into_iter().map(|(p, q)| HostEdge::new(p, q)).collect();
        es.sort_unstable();
        es.dedup();
        let h = HostGraph { vertices: vs, edges: es };
        for e in &h.edges {
            assert!(
                h.has_vertex(e.lo()) && h.has_vertex(e.hi()),
                "host edge {e} references missing vertex"
            );
        }
        h
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn edges(&self) -> &[HostEdge] {
        &self.edges
    }

    pub fn has_vertex(&self, x: usize) -> bool {
        self.vertices.binary_search(&x).is_ok()
    }

    pub fn has_edge(&self, e: HostEdge) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    pub fn degree(&self, x: usize) -> usize {
        self.edges.iter().filter(|e| e.has_end(x)).count()
    }

    pub fn neighbors(&self, x: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter(|e| e.has_end(x))
            .map(|e| e.other(x))
            .collect();
        out.sort_unstable();
        out
    }

    pub fn edges_at(&self, x: usize) -> Vec<HostEdge> {
        self.edges.iter().copied().filter(|e| e.has_end(x)).collect()
    }

    pub fn is_isolated(&self, x: usize) -> bool {
        self.degree(x) == 0
    }

    /// Derived triangle set T(H), in increasing order.
    pub fn triangles(&self) -> Vec<HostTriple> {
        let mut out = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            for f in &self.edges[i + 1..] {
                if f.lo() != e.lo() {
                    break;
                }
                // e = (a,b), f = (a,c) with b < c; triangle iff bc is an edge.
                if self.has_edge(HostEdge::new(e.hi(), f.hi())) {
                    out.push(HostTriple::new(e.lo(), e.hi(), f.hi()));
                }
            }
        }
        out
    }

    pub fn is_triangle(&self, t: HostTriple) -> bool {
        t.pairs().into_iter().all(|e| self.has_edge(e))
    }

    pub fn add_vertex(&mut self, x: usize) {
        if let Err(pos) = self.vertices.binary_search(&x) {
            self.vertices.insert(pos, x);
        }
    }

    pub fn remove_vertex(&mut self, x: usize) {
        assert!(self.is_isolated(x), "cannot remove non-isolated host vertex {x}");
        if let Ok(pos) = self.vertices.binary_search(&x) {
            self.vertices.remove(pos);
        }
    }

    pub fn add_edge(&mut self, e: HostEdge) {
        self.add_vertex(e.lo());
        self.add_vertex(e.hi());
        if let Err(pos) = self.edges.binary_search(&e) {
            self.edges.insert(pos, e);
        }
    }

    pub fn remove_edge(&mut self, e: HostEdge) {
        if let Ok(pos) = self.edges.binary_search(&e) {
            self.edges.remove(pos);
        }
    }

    /// Smallest id not used by any host vertex.
    pub fn fresh_id(&self) -> usize {
        self.vertices.last().map_or(0, |&m| m + 1)
    }
}

/// The eta sets attached to one host edge: the full set and its two
/// interfaces, keyed by the edge's smaller/larger endpoint.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EdgeSets {
    pub all: VertexSet,
    pub at_lo: VertexSet,
    pub at_hi: VertexSet,
}

impl EdgeSets {
    pub fn is_empty(&self) -> bool {
        self.all.is_empty() && self.at_lo.is_empty() && self.at_hi.is_empty()
    }

    /// Interface at endpoint `x` of the owning edge.
    pub fn at(&self, e: HostEdge, x: usize) -> &VertexSet {
        if x == e.lo() {
            &self.at_lo
        } else {
            debug_assert_eq!(x, e.hi());
            &self.at_hi
        }
    }

    pub fn at_mut(&mut self, e: HostEdge, x: usize) -> &mut VertexSet {
        if x == e.lo() {
            &mut self.at_lo
        } else {
            debug_assert_eq!(x, e.hi());
            &mut self.at_hi
        }
    }

    /// Interior: all minus both interfaces.
    pub fn interior(&self) -> VertexSet {
        self.all.difference(&self.at_lo).difference(&self.at_hi)
    }
}

/// Which eta set owns a vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum EtaKey {
    Vertex(usize),
    Edge(HostEdge),
    Triangle(HostTriple),
}

impl std::fmt::Display for EtaKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EtaKey::Vertex(x) => write!(f, "eta({x})"),
            EtaKey::Edge(e) => write!(f, "eta({e})"),
            EtaKey::Triangle(t) => write!(f, "eta({t})"),
        }
    }
}

/// An extended strip decomposition (H, eta).
///
/// Maps are sparse: a missing key stands for the empty set. Mutators drop
/// entries that become empty so that structural equality is meaningful.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Esd {
    host: HostGraph,
    eta_vertex: BTreeMap<usize, VertexSet>,
    eta_edge: BTreeMap<HostEdge, EdgeSets>,
    eta_triangle: BTreeMap<HostTriple, VertexSet>,
}

static EMPTY_SET: VertexSet = VertexSet::new();

impl Esd {
    pub fn new(host: HostGraph) -> Self {
        Esd {
            host,
            eta_vertex: BTreeMap::new(),
            eta_edge: BTreeMap::new(),
            eta_triangle: BTreeMap::new(),
        }
    }

    pub fn host(&self) -> &HostGraph {
        &self.host
    }

    pub fn host_mut(&mut self) -> &mut HostGraph {
        &mut self.host
    }

    pub fn eta_vertex(&self, x: usize) -> &VertexSet {
        self.eta_vertex.get(&x).unwrap_or(&EMPTY_SET)
    }

    pub fn eta_edge(&self, e: HostEdge) -> &VertexSet {
        self.eta_edge.get(&e).map_or(&EMPTY_SET, |s| &s.all)
    }

    pub fn edge_sets(&self, e: HostEdge) -> Option<&EdgeSets> {
        self.eta_edge.get(&e)
    }

    /// Interface eta(e, x).
    pub fn interface(&self, e: HostEdge, x: usize) -> &VertexSet {
        self.eta_edge.get(&e).map_or(&EMPTY_SET, |s| s.at(e, x))
    }

    pub fn eta_triangle(&self, t: HostTriple) -> &VertexSet {
        self.eta_triangle.get(&t).unwrap_or(&EMPTY_SET)
    }

    pub fn set_eta_vertex(&mut self, x: usize, s: VertexSet) {
        if s.is_empty() {
            self.eta_vertex.remove(&x);
        } else {
            self.eta_vertex.insert(x, s);
        }
    }

    pub fn set_edge_sets(&mut self, e: HostEdge, sets: EdgeSets) {
        if sets.is_empty() {
            self.eta_edge.remove(&e);
        } else {
            self.eta_edge.insert(e, sets);
        }
    }

    pub fn set_eta_triangle(&mut self, t: HostTriple, s: VertexSet) {
        if s.is_empty() {
            self.eta_triangle.remove(&t);
        } else {
            self.eta_triangle.insert(t, s);
        }
    }

    pub fn vertex_entries(&self) -> impl Iterator<Item = (usize, &VertexSet)> {
        self.eta_vertex.iter().map(|(&x, s)| (x, s))
    }

    pub fn edge_entries(&self) -> impl Iterator<Item = (HostEdge, &EdgeSets)> {
        self.eta_edge.iter().map(|(&e, s)| (e, s))
    }

    pub fn triangle_entries(&self) -> impl Iterator<Item = (HostTriple, &VertexSet)> {
        self.eta_triangle.iter().map(|(&t, s)| (t, s))
    }

    /// Every vertex mentioned by any eta set.
    pub fn covered_vertices(&self) -> VertexSet {
        let mut out = Vec::new();
        for (_, s) in self.vertex_entries() {
            out.extend(s.iter());
        }
        for (_, s) in self.edge_entries() {
            out.extend(s.all.iter());
        }
        for (_, s) in self.triangle_entries() {
            out.extend(s.iter());
        }
        VertexSet::from_unsorted(out)
    }

    /// Vertices that sit in a singleton interface at a degree-one host vertex.
    pub fn peripheral_vertices(&self) -> VertexSet {
        let mut out = Vec::new();
        for x in self.host.vertices() {
            let at_x = self.host.edges_at(*x);
            if at_x.len() != 1 {
                continue;
            }
            let e = at_x[0];
            let interface = self.interface(e, *x);
            if interface.len() == 1 {
                out.push(interface.min_id().unwrap());
            }
        }
        VertexSet::from_unsorted(out)
    }

    /// Intersects every eta set with `keep`; the host is unchanged.
    pub fn restrict(&self, keep: &VertexSet) -> Esd {
        let mut out = Esd::new(self.host.clone());
        for (x, s) in self.vertex_entries() {
            out.set_eta_vertex(x, s.intersection(keep));
        }
        for (e, s) in self.edge_entries() {
            out.set_edge_sets(
                e,
                EdgeSets {
                    all: s.all.intersection(keep),
                    at_lo: s.at_lo.intersection(keep),
                    at_hi: s.at_hi.intersection(keep),
                },
            );
        }
        for (t, s) in self.triangle_entries() {
            out.set_eta_triangle(t, s.intersection(keep));
        }
        out
    }
}

/// Validation rule identifiers, following the definition's numbering.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rule {
    /// Property 1: the eta sets partition V(G).
    Partition,
    /// Property 2: interfaces at a common host vertex are complete to each other.
    Completeness,
    /// Property 3: every G-edge lies in a set or matches an allowed pattern.
    EdgePattern,
    /// Interfaces must be subsets of their edge set.
    Subset,
    /// Malformed host references (unknown edge/triangle keys, bad ids).
    Structure,
    /// Rigidity: nonempty interfaces and nonempty isolated vertex sets.
    Rigidity,
}

/// One violation with a concrete witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// A vertex of the graph covered by no eta set.
    Uncovered { v: usize },
    /// A vertex covered by two different eta sets.
    DoublyCovered { v: usize, first: EtaKey, second: EtaKey },
    /// An eta set mentions a vertex outside the validated vertex range.
    ForeignVertex { key: EtaKey, v: usize },
    /// An interface member missing from its edge set.
    InterfaceNotSubset { e: HostEdge, end: usize, v: usize },
    /// eta(xy,x) and eta(xz,x) must be complete; this pair is non-adjacent.
    MissingCompletenessEdge { x: usize, u: usize, v: usize },
    /// A G-edge matching no allowed pattern.
    ForbiddenEdge { u: usize, v: usize },
    /// An eta key referencing a host object that does not exist.
    UnknownHostObject { key: EtaKey },
    /// Rigidity: eta(e, end) is empty.
    EmptyInterface { e: HostEdge, end: usize },
    /// Rigidity: an isolated host vertex with an empty set.
    EmptyIsolatedVertex { x: usize },
}

impl Violation {
    pub fn rule(&self) -> Rule {
        match self {
            Violation::Uncovered { .. } | Violation::DoublyCovered { .. } | Violation::ForeignVertex { .. } => {
                Rule::Partition
            }
            Violation::InterfaceNotSubset { .. } => Rule::Subset,
            Violation::MissingCompletenessEdge { .. } => Rule::Completeness,
            Violation::ForbiddenEdge { .. } => Rule::EdgePattern,
            Violation::UnknownHostObject { .. } => Rule::Structure,
            Violation::EmptyInterface { .. } | Violation::EmptyIsolatedVertex { .. } => Rule::Rigidity,
        }
    }
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::Uncovered { v } => write!(f, "vertex {v} not covered by any eta set"),
            Violation::DoublyCovered { v, first, second } => {
                write!(f, "vertex {v} covered by both {first} and {second}")
            }
            Violation::ForeignVertex { key, v } => write!(f, "{key} mentions out-of-scope vertex {v}"),
            Violation::InterfaceNotSubset { e, end, v } => {
                write!(f, "eta({e},{end}) member {v} missing from eta({e})")
            }
            Violation::MissingCompletenessEdge { x, u, v } => {
                write!(f, "interfaces at host vertex {x}: {u} and {v} must be adjacent")
            }
            Violation::ForbiddenEdge { u, v } => write!(f, "edge {u}-{v} matches no allowed pattern"),
            Violation::UnknownHostObject { key } => write!(f, "{key} references a missing host object"),
            Violation::EmptyInterface { e, end } => write!(f, "eta({e},{end}) is empty"),
            Violation::EmptyIsolatedVertex { x } => write!(f, "isolated host vertex {x} has empty eta"),
        }
    }
}

/// Outcome of a validation pass; `ok()` iff no violations.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn summary(&self) -> String {
        if self.ok() {
            "ok".to_string()
        } else {
            self.violations
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join("; ")
        }
    }
}

#[derive(Debug, Error)]
pub enum EsdError {
    #[error("decomposition is not valid: {0}")]
    Invalid(String),
    #[error("decomposition is not rigid: {0}")]
    NotRigid(String),
}

/// Validates `d` against the whole of `g`.
pub fn validate_esd(g: &Graph, d: &Esd) -> ValidationReport {
    validate_esd_within(g, &g.vertex_set(), d)
}

/// Validates `d` against the induced subgraph G[keep]; eta sets live in the
/// ids of `g`.
pub fn validate_esd_within(g: &Graph, keep: &VertexSet, d: &Esd) -> ValidationReport {
    let mut violations = Vec::new();
    let host = d.host();
    let triangles = host.triangles();

    // Structure: eta keys must reference real host objects.
    for (x, _) in d.vertex_entries() {
        if !host.has_vertex(x) {
            violations.push(Violation::UnknownHostObject { key: EtaKey::Vertex(x) });
        }
    }
    for (e, _) in d.edge_entries() {
        if !host.has_edge(e) {
            violations.push(Violation::UnknownHostObject { key: EtaKey::Edge(e) });
        }
    }
    for (t, _) in d.triangle_entries() {
        if !host.is_triangle(t) {
            violations.push(Violation::UnknownHostObject { key: EtaKey::Triangle(t) });
        }
    }

    // Subset rule: interfaces inside their edge set.
    for (e, sets) in d.edge_entries() {
        for end in e.ends() {
            for v in sets.at(e, end).iter() {
                if !sets.all.contains(v) {
                    violations.push(Violation::InterfaceNotSubset { e, end, v });
                }
            }
        }
    }

    // Property 1: partition of keep. Build the owner map as we go.
    let mut owner: BTreeMap<usize, EtaKey> = BTreeMap::new();
    let mut claim = |key: EtaKey, s: &VertexSet, violations: &mut Vec<Violation>| {
        for v in s.iter() {
            if v >= g.n() || !keep.contains(v) {
                violations.push(Violation::ForeignVertex { key, v });
                continue;
            }
            if let Some(&first) = owner.get(&v) {
                violations.push(Violation::DoublyCovered { v, first, second: key });
            } else {
                owner.insert(v, key);
            }
        }
    };
    for (x, s) in d.vertex_entries() {
        claim(EtaKey::Vertex(x), s, &mut violations);
    }
    for (e, sets) in d.edge_entries() {
        claim(EtaKey::Edge(e), &sets.all, &mut violations);
    }
    for (t, s) in d.triangle_entries() {
        claim(EtaKey::Triangle(t), s, &mut violations);
    }
    for v in keep.iter() {
        if !owner.contains_key(&v) {
            violations.push(Violation::Uncovered { v });
        }
    }

    // Property 2: for every host vertex x and distinct neighbors y, z, the
    // interface eta(xy,x) is complete to eta(xz,x).
    for &x in host.vertices() {
        let incident = host.edges_at(x);
        for (i, &e) in incident.iter().enumerate() {
            for &f in &incident[i + 1..] {
                for u in d.interface(e, x).iter() {
                    for v in d.interface(f, x).iter() {
                        if u != v && !g.has_edge(u, v) {
                            violations.push(Violation::MissingCompletenessEdge { x, u, v });
                        }
                    }
                }
            }
        }
    }

    // Property 3: every G[keep]-edge is inside one set or matches one of the
    // allowed cross patterns.
    let in_interface_at = |v: usize, x: usize| -> Vec<HostEdge> {
        host.edges_at(x)
            .into_iter()
            .filter(|&e| d.interface(e, x).contains(v))
            .collect()
    };
    for (u, v) in g.edges() {
        if !keep.contains(u) || !keep.contains(v) {
            continue;
        }
        let (Some(&ou), Some(&ov)) = (owner.get(&u), owner.get(&v)) else {
            continue; // already reported as a partition violation
        };
        if ou == ov {
            continue;
        }
        let mut allowed = false;
        // Pattern: u in eta(xy,x), v in eta(xz,x) for a shared host vertex x.
        'outer: for &x in host.vertices() {
            let eu = in_interface_at(u, x);
            let ev = in_interface_at(v, x);
            for e in &eu {
                for f in &ev {
                    if e != f {
                        allowed = true;
                        break 'outer;
                    }
                }
            }
        }
        // Pattern: u in eta(xy,x), v in eta(x).
        if !allowed {
            for (a, b) in [(u, v), (v, u)] {
                if let EtaKey::Vertex(x) = owner[&b] {
                    if !in_interface_at(a, x).is_empty() {
                        allowed = true;
                    }
                }
            }
        }
        // Pattern: u in eta(xyz), v in eta(xy,x) and eta(xy,y) both.
        if !allowed {
            for (a, b) in [(u, v), (v, u)] {
                if let EtaKey::Triangle(t) = owner[&a] {
                    if triangles.contains(&t) {
                        for e in t.pairs() {
                            if d.interface(e, e.lo()).contains(b) && d.interface(e, e.hi()).contains(b) {
                                allowed = true;
                            }
                        }
                    }
                }
            }
        }
        if !allowed {
            violations.push(Violation::ForbiddenEdge { u: u.min(v), v: u.max(v) });
        }
    }

    ValidationReport { violations }
}

/// Checks the two rigidity conditions: every host edge has both interfaces
/// nonempty, and every isolated host vertex carries a nonempty set.
pub fn is_rigid(d: &Esd) -> ValidationReport {
    let mut violations = Vec::new();
    for &e in d.host().edges() {
        for end in e.ends() {
            if d.interface(e, end).is_empty() {
                violations.push(Violation::EmptyInterface { e, end });
            }
        }
    }
    for &x in d.host().vertices() {
        if d.host().is_isolated(x) && d.eta_vertex(x).is_empty() {
            violations.push(Violation::EmptyIsolatedVertex { x });
        }
    }
    ValidationReport { violations }
}

/// Particle taxonomy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ParticleId {
    Vertex(usize),
    EdgeInterior(HostEdge),
    HalfEdge(HostEdge, usize),
    FullEdge(HostEdge),
    Triangle(HostTriple),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParticleKind {
    Vertex,
    EdgeInterior,
    HalfEdge,
    FullEdge,
    Triangle,
}

impl ParticleId {
    pub fn kind(&self) -> ParticleKind {
        match self {
            ParticleId::Vertex(_) => ParticleKind::Vertex,
            ParticleId::EdgeInterior(_) => ParticleKind::EdgeInterior,
            ParticleId::HalfEdge(..) => ParticleKind::HalfEdge,
            ParticleId::FullEdge(_) => ParticleKind::FullEdge,
            ParticleId::Triangle(_) => ParticleKind::Triangle,
        }
    }
}

impl std::fmt::Display for ParticleId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ParticleId::Vertex(x) => write!(f, "A({x})"),
            ParticleId::EdgeInterior(e) => write!(f, "A_int({e})"),
            ParticleId::HalfEdge(e, x) => write!(f, "A_half({e};{x})"),
            ParticleId::FullEdge(e) => write!(f, "A_full({e})"),
            ParticleId::Triangle(t) => write!(f, "A({t})"),
        }
    }
}

/// One particle: its identity, member vertices, and total weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Particle {
    pub id: ParticleId,
    pub members: VertexSet,
    pub weight: u64,
}

impl Esd {
    /// The full-edge particle of `e`: eta(x), eta(y), eta(xy), and all
    /// triangle sets on xy.
    pub fn full_edge_members(&self, e: HostEdge) -> VertexSet {
        let mut m = self.eta_vertex(e.lo()).union(self.eta_vertex(e.hi())).union(self.eta_edge(e));
        for (t, s) in self.triangle_entries() {
            if t.contains_edge(e) {
                m = m.union(s);
            }
        }
        m
    }

    /// Emits all five particle kinds for every host vertex, edge, and
    /// triangle of H, with weights from `g`.
    pub fn particles(&self, g: &Graph) -> Vec<Particle> {
        let mut out = Vec::new();
        let mut push = |id: ParticleId, members: VertexSet| {
            let weight = g.set_weight_of(&members);
            out.push(Particle { id, members, weight });
        };
        for &x in self.host.vertices() {
            push(ParticleId::Vertex(x), self.eta_vertex(x).clone());
        }
        for &e in self.host.edges() {
            let sets = self.edge_sets(e).cloned().unwrap_or_default();
            push(ParticleId::EdgeInterior(e), sets.interior());
            for end in e.ends() {
                let other = sets.at(e, e.other(end)).clone();
                let members = self.eta_vertex(end).union(&sets.all.difference(&other));
                push(ParticleId::HalfEdge(e, end), members);
            }
            push(ParticleId::FullEdge(e), self.full_edge_members(e));
        }
        for t in self.host.triangles() {
            push(ParticleId::Triangle(t), self.eta_triangle(t).clone());
        }
        out
    }
}

/// Validating wrapper around [`Esd::particles`].
pub fn particles(g: &Graph, d: &Esd) -> Result<Vec<Particle>, EsdError> {
    let report = validate_esd(g, d);
    if !report.ok() {
        return Err(EsdError::Invalid(report.summary()));
    }
    Ok(d.particles(g))
}

/// Validating wrapper around [`Esd::peripheral_vertices`].
pub fn peripheral_vertices(g: &Graph, d: &Esd) -> Result<VertexSet, EsdError> {
    let report = validate_esd(g, d);
    if !report.ok() {
        return Err(EsdError::Invalid(report.summary()));
    }
    Ok(d.peripheral_vertices())
}

/// Trivial decomposition of G[keep]: one isolated host vertex per connected
/// component, each carrying that component.
pub fn trivial_esd_within(g: &Graph, keep: &VertexSet) -> Esd {
    let comps = g.components(keep);
    let mut d = Esd::new(HostGraph::new(0..comps.len(), std::iter::empty()));
    for (i, c) in comps.into_iter().enumerate() {
        d.set_eta_vertex(i, c);
    }
    d
}

/// Trivial decomposition of the whole graph.
pub fn trivial_esd(g: &Graph) -> Esd {
    trivial_esd_within(g, &g.vertex_set())
}

/// One vertex from each interface of `e` (minimum ids); their joint
/// neighborhood dominates the neighborhood of the full-edge particle of `e`.
pub fn interface_dominators(d: &Esd, e: HostEdge) -> Result<VertexSet, EsdError> {
    let mut out = VertexSet::new();
    for end in e.ends() {
        match d.interface(e, end).min_id() {
            Some(v) => out.insert(v),
            None => {
                return Err(EsdError::NotRigid(format!("eta({e},{end}) is empty")));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests;
