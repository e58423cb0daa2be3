//! Rewrites a decomposition into a rigid one without letting any particle
//! grow past the weight bound, or produces a two-vertex set whose closed
//! neighborhood removal leaves only bounded components.

use std::collections::BTreeMap;

use thiserror::Error;

use super::{EdgeSets, Esd, HostEdge, HostGraph, HostTriple};
use crate::graph::{Graph, VertexSet};

/// Decomposition variant carrying eta sets on arbitrary host-vertex triples
/// instead of only triangles. Intermediate state of [`make_rigid`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RelaxedEsd {
    pub host: HostGraph,
    pub eta_vertex: BTreeMap<usize, VertexSet>,
    pub eta_edge: BTreeMap<HostEdge, EdgeSets>,
    /// Sparse: only nonempty triple sets are stored.
    pub eta_triple: BTreeMap<HostTriple, VertexSet>,
}

impl RelaxedEsd {
    pub fn from_esd(d: &Esd) -> Self {
        RelaxedEsd {
            host: d.host().clone(),
            eta_vertex: d.vertex_entries().map(|(x, s)| (x, s.clone())).collect(),
            eta_edge: d.edge_entries().map(|(e, s)| (e, s.clone())).collect(),
            eta_triple: d
                .triangle_entries()
                .filter(|(_, s)| !s.is_empty())
                .map(|(t, s)| (t, s.clone()))
                .collect(),
        }
    }

    /// Converts back; every remaining nonempty triple must be a triangle.
    pub fn into_esd(self) -> Esd {
        let mut d = Esd::new(self.host);
        for (x, s) in self.eta_vertex {
            d.set_eta_vertex(x, s);
        }
        for (e, s) in self.eta_edge {
            d.set_edge_sets(e, s);
        }
        for (t, s) in self.eta_triple {
            assert!(d.host().is_triangle(t), "leftover non-triangle triple {t}");
            d.set_eta_triangle(t, s);
        }
        d
    }

    fn eta_vertex(&self, x: usize) -> &VertexSet {
        static EMPTY: VertexSet = VertexSet::new();
        self.eta_vertex.get(&x).unwrap_or(&EMPTY)
    }

    fn eta_edge_all(&self, e: HostEdge) -> &VertexSet {
        static EMPTY: VertexSet = VertexSet::new();
        self.eta_edge.get(&e).map_or(&EMPTY, |s| &s.all)
    }

    /// Full-edge particle of the relaxed decomposition: eta(x), eta(y),
    /// eta(xy), and every triple set containing both endpoints.
    pub fn full_edge_members(&self, e: HostEdge) -> VertexSet {
        let mut m = self
            .eta_vertex(e.lo())
            .union(self.eta_vertex(e.hi()))
            .union(self.eta_edge_all(e));
        for (t, s) in &self.eta_triple {
            if t.contains_edge(e) {
                m = m.union(s);
            }
        }
        m
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MakeRigidOutcome {
    /// Rigid decomposition with all particles within the bound.
    Rigid(Esd),
    /// At most two vertices; removing their closed neighborhood leaves only
    /// components within the bound.
    Separator(VertexSet),
}

#[derive(Clone, Debug)]
pub struct MakeRigidResult {
    pub outcome: MakeRigidOutcome,
    /// Elementary rewrites performed.
    pub steps: usize,
    /// Defensive cap the run stayed under.
    pub step_cap: usize,
}

#[derive(Debug, Error)]
pub enum RigidifyError {
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("step budget exceeded ({steps} > {cap}); this indicates a bug")]
    StepBudgetExceeded { steps: usize, cap: usize },
}

/// True iff there is a G-edge between `a` and `b`.
fn sets_touch_by_edge(g: &Graph, a: &VertexSet, b: &VertexSet) -> bool {
    a.iter().any(|u| g.neighbors(u).iter().any(|&v| b.contains(v)))
}

/// Rigidifies `d` (a valid decomposition of G[keep] whose particles all weigh
/// at most `w`), or returns a separator set of size at most 2.
pub fn make_rigid(g: &Graph, keep: &VertexSet, d: &Esd, w: u64) -> Result<MakeRigidResult, RigidifyError> {
    let total = g.set_weight_of(keep);
    if 2u128 * w as u128 + 1 < total as u128 {
        return Err(RigidifyError::PreconditionViolated(format!(
            "bound w = {w} is below half of the total weight {total}"
        )));
    }
    for p in d.particles(g) {
        if p.weight > w {
            return Err(RigidifyError::PreconditionViolated(format!(
                "input particle {} already weighs {} > {w}",
                p.id, p.weight
            )));
        }
    }

    let mut r = RelaxedEsd::from_esd(d);
    let cap = {
        let m = r.host.vertices().len() + r.host.edges().len() + keep.len();
        8usize.saturating_mul(m.saturating_mul(m).saturating_mul(m))
    };
    let mut steps = 0usize;
    let bump = |steps: &mut usize| -> Result<(), RigidifyError> {
        *steps += 1;
        if *steps > cap {
            Err(RigidifyError::StepBudgetExceeded { steps: *steps, cap })
        } else {
            Ok(())
        }
    };

    // Phase (a): eliminate edges with an empty interface.
    loop {
        let empty_count = |r: &RelaxedEsd| {
            r.host
                .edges()
                .iter()
                .filter(|e| {
                    let sets = r.eta_edge.get(e);
                    sets.map_or(true, |s| s.at_lo.is_empty() || s.at_hi.is_empty())
                })
                .count()
        };
        let before = empty_count(&r);
        let Some(e) = r.host.edges().iter().copied().find(|e| {
            let sets = r.eta_edge.get(e);
            sets.map_or(true, |s| s.at_lo.is_empty() || s.at_hi.is_empty())
        }) else {
            break;
        };
        bump(&mut steps)?;
        let sets = r.eta_edge.remove(&e).unwrap_or_default();
        r.host.remove_edge(e);
        if sets.at_lo.is_empty() && sets.at_hi.is_empty() {
            // Detach onto a fresh isolated vertex.
            let v = r.host.fresh_id();
            r.host.add_vertex(v);
            if !sets.all.is_empty() {
                r.eta_vertex.insert(v, sets.all);
            }
        } else {
            // Re-hang the strip on a fresh pendant neighbor of the side that
            // still has an interface.
            let (kept_end, kept_interface) = if sets.at_lo.is_empty() {
                (e.hi(), sets.at_hi)
            } else {
                (e.lo(), sets.at_lo)
            };
            let z = r.host.fresh_id();
            let ne = HostEdge::new(z, kept_end);
            r.host.add_edge(ne);
            let mut nsets = EdgeSets {
                all: sets.all.clone(),
                at_lo: VertexSet::new(),
                at_hi: VertexSet::new(),
            };
            *nsets.at_mut(ne, z) = sets.all;
            *nsets.at_mut(ne, kept_end) = kept_interface;
            r.eta_edge.insert(ne, nsets);
        }
        assert!(empty_count(&r) < before, "phase (a) did not make progress");
    }

    // Phase (b): flush triples that contain an isolated host vertex.
    loop {
        let count = |r: &RelaxedEsd| {
            r.eta_triple
                .keys()
                .filter(|t| t.verts().into_iter().any(|x| r.host.is_isolated(x)))
                .count()
        };
        let before = count(&r);
        let Some((t, iso)) = r.eta_triple.keys().find_map(|t| {
            t.verts()
                .into_iter()
                .find(|&x| r.host.is_isolated(x))
                .map(|x| (*t, x))
        }) else {
            break;
        };
        bump(&mut steps)?;
        let set = r.eta_triple.remove(&t).unwrap();
        let others: Vec<usize> = t.verts().into_iter().filter(|&x| x != iso).collect();
        let pair = HostEdge::new(others[0], others[1]);
        if r.host.has_edge(pair) {
            let entry = r.eta_edge.entry(pair).or_default();
            entry.all = entry.all.union(&set);
        } else {
            let v = r.host.fresh_id();
            r.host.add_vertex(v);
            r.eta_vertex.insert(v, set);
        }
        assert!(count(&r) < before, "phase (b) did not make progress");
    }

    // Phase (c): drop isolated host vertices carrying nothing.
    let removable: Vec<usize> = r
        .host
        .vertices()
        .iter()
        .copied()
        .filter(|&x| r.host.is_isolated(x) && r.eta_vertex(x).is_empty())
        .collect();
    for x in removable {
        bump(&mut steps)?;
        assert!(
            r.eta_triple.keys().all(|t| !t.contains(x)),
            "dropping host vertex {x} would lose a triple set"
        );
        r.eta_vertex.remove(&x);
        r.host.remove_vertex(x);
    }

    // Phase (d): eliminate nonempty non-triangle triples, following the
    // proof's three cases in order.
    loop {
        let count = |r: &RelaxedEsd| r.eta_triple.keys().filter(|t| !r.host.is_triangle(**t)).count();
        let before = count(&r);
        let Some(t) = r
            .eta_triple
            .keys()
            .copied()
            .find(|t| !r.host.is_triangle(*t))
        else {
            break;
        };
        bump(&mut steps)?;
        let set = r.eta_triple.get(&t).unwrap().clone();
        let pair_edges: Vec<HostEdge> = t.pairs().into_iter().filter(|e| r.host.has_edge(*e)).collect();
        let adjacent: Vec<HostEdge> = pair_edges
            .iter()
            .copied()
            .filter(|e| sets_touch_by_edge(g, &set, r.eta_edge_all(*e)))
            .collect();

        if adjacent.is_empty() {
            // Case 1: the set must be disconnected from everything else.
            let rest = keep.difference(&set);
            assert!(
                !sets_touch_by_edge(g, &set, &rest),
                "triple {t} touches the rest of the graph outside its pair edges"
            );
            r.eta_triple.remove(&t);
            let v = r.host.fresh_id();
            r.host.add_vertex(v);
            r.eta_vertex.insert(v, set);
        } else if adjacent.len() == 1 {
            // Case 2: absorb into the unique adjacent edge set; interfaces
            // stay, so no particle grows.
            r.eta_triple.remove(&t);
            let entry = r.eta_edge.entry(adjacent[0]).or_default();
            entry.all = entry.all.union(&set);
        } else {
            // Case 3: exactly two of the pairs are edges; absorb into their
            // shared vertex. Full-edge particles on other edges at that
            // vertex may grow past w; if so, stop and emit the dominator
            // pair of the offending pre-modification particle.
            assert_eq!(pair_edges.len(), 2, "triple {t} adjacent to more sets than its pair edges");
            let [a, b] = [pair_edges[0], pair_edges[1]];
            let shared = a
                .ends()
                .into_iter()
                .find(|&x| b.has_end(x))
                .expect("two pairs of a triple always share a vertex");
            let extra = g.set_weight_of(&set);
            let growing: Vec<HostEdge> = r
                .host
                .edges_at(shared)
                .into_iter()
                .filter(|e| {
                    let third = e.other(shared);
                    !t.contains(third)
                })
                .collect();
            let mut offender: Option<HostEdge> = None;
            for e in growing {
                let current = g.set_weight_of(&r.full_edge_members(e));
                if current + extra > w {
                    offender = Some(e);
                    break;
                }
            }
            if let Some(e) = offender {
                let mut x_set = VertexSet::new();
                for end in e.ends() {
                    let interface = r
                        .eta_edge
                        .get(&e)
                        .map(|s| s.at(e, end))
                        .filter(|s| !s.is_empty())
                        .expect("phase (a) guarantees nonempty interfaces");
                    x_set.insert(interface.min_id().unwrap());
                }
                debug_assert!(x_set.len() <= 2);
                return Ok(MakeRigidResult {
                    outcome: MakeRigidOutcome::Separator(x_set),
                    steps,
                    step_cap: cap,
                });
            }
            r.eta_triple.remove(&t);
            let entry = r.eta_vertex.entry(shared).or_default();
            *entry = entry.union(&set);
        }
        assert!(count(&r) < before, "phase (d) did not make progress");
    }

    let out = r.into_esd();
    debug_assert!(super::is_rigid(&out).ok(), "rigidify produced a non-rigid result");
    debug_assert!(
        super::validate_esd_within(g, keep, &out).ok(),
        "rigidify produced an invalid result"
    );
    for p in out.particles(g) {
        assert!(
            p.weight <= w,
            "rigidify let particle {} grow to {} > {w}",
            p.id,
            p.weight
        );
    }
    Ok(MakeRigidResult {
        outcome: MakeRigidOutcome::Rigid(out),
        steps,
        step_cap: cap,
    })
}

