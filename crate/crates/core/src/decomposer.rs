//! Driver tying the pieces together: mark anchor vertices on a minimal
//! balanced-separator path, prune the graph, query three-in-a-tree, and turn
//! the answer into either a verified spider or a bounded separator with a
//! rigid refined decomposition of what remains.

use thiserror::Error;

use crate::esd::rigidify::{make_rigid, MakeRigidOutcome, RigidifyError};
use crate::esd::{
    interface_dominators, is_rigid, trivial_esd_within, validate_esd_within, Esd, HostEdge,
    ParticleId,
};
use crate::graph::{is_half_bounded, Graph, PathSeq, VertexSet};
use crate::gyarfas::gyarfas_path;
use crate::sttt::{extract_sttt, verify_sttt, StttCopy};
use crate::tiat::{three_in_a_tree, LineGraphCert, TiatAnswer, TiatBackend, TiatError};

/// Marked structure on a long path Q: terminals x, y, z, the protected
/// segments, and the pruning set Y.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Anchors {
    pub x: usize,
    pub y: usize,
    pub z: usize,
    pub z_prime: usize,
    pub ell: usize,
    /// Subpath from x to y.
    pub q1: PathSeq,
    /// Subpath of the last t+2 vertices, from z to ell.
    pub q2: PathSeq,
    /// x and its first t successors.
    pub qx: VertexSet,
    /// y and its first t predecessors.
    pub qy: VertexSet,
    /// z and its first t successors.
    pub qz: VertexSet,
    /// Y = Qx + Qy + Qz; |Y| = 3t+3.
    pub marked: VertexSet,
    pub t: usize,
}

impl Anchors {
    /// The original path: Q1, then z', then Q2.
    pub fn full_path(&self) -> PathSeq {
        let mut verts = self.q1.verts().to_vec();
        verts.push(self.z_prime);
        verts.extend_from_slice(self.q2.verts());
        PathSeq::new(verts)
    }
}

/// Driver outcome; both variants are re-verified before being returned.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// An induced spider with arms of length exactly t.
    Sttt(StttCopy),
    /// At most 3t+11 vertices, plus a rigid decomposition of G - N[S] whose
    /// particles all weigh at most half the total.
    Separator { s: VertexSet, esd: Esd },
}

#[derive(Debug, Error)]
pub enum DriverError {
    #[error("path of length {len} is too short for anchor marking (need > {need})")]
    TooShort { len: usize, need: usize },
    #[error("assertion failed: {0}")]
    AssertionFailed(String),
    #[error("contract violation: {0}")]
    ContractViolation(String),
    #[error("certification failed ({claim}): {detail}")]
    CertificationFailed { claim: String, detail: String },
    #[error("inconclusive: {0}")]
    Inconclusive(String),
}

fn certification(claim: &str, detail: impl Into<String>) -> DriverError {
    DriverError::CertificationFailed {
        claim: claim.to_string(),
        detail: detail.into(),
    }
}

/// Which machinery answers the three-in-a-tree query inside [`decompose`].
#[derive(Clone, Debug, Default)]
pub struct BackendConfig {
    /// Root certificate for line graphs; enables the structural backend.
    pub line_graph_cert: Option<LineGraphCert>,
    /// Pre-built decomposition of the pruned graph, for fixtures.
    pub oracle_esd: Option<Esd>,
    /// Max subset size for the exhaustive tree search (None: the whole
    /// pruned graph, i.e. a complete search).
    pub tree_budget: Option<usize>,
}

/// Marks anchors on an induced path with more than 3t+11 vertices.
pub fn mark_anchors(q: &PathSeq, t: usize) -> Result<Anchors, DriverError> {
    assert!(t >= 1);
    let m = q.len();
    let need = 3 * t + 11;
    if m <= need {
        return Err(DriverError::TooShort { len: m, need });
    }
    let v = q.verts();
    let z_index = m - t - 2;
    let anchors = Anchors {
        x: v[0],
        y: v[z_index - 2],
        z: v[z_index],
        z_prime: v[z_index - 1],
        ell: v[m - 1],
        q1: PathSeq::new(v[..=z_index - 2].to_vec()),
        q2: PathSeq::new(v[z_index..].to_vec()),
        qx: v[..=t].iter().copied().collect(),
        qy: v[z_index - 2 - t..=z_index - 2].iter().copied().collect(),
        qz: v[z_index..=z_index + t].iter().copied().collect(),
        marked: VertexSet::new(),
        t,
    };
    let marked = anchors.qx.union(&anchors.qy).union(&anchors.qz);
    assert_eq!(anchors.qx.len(), t + 1);
    assert_eq!(anchors.qy.len(), t + 1);
    assert_eq!(anchors.qz.len(), t + 1);
    assert_eq!(marked.len(), 3 * t + 3, "marked segments must be disjoint");
    assert_eq!(anchors.q2.len(), t + 2);
    Ok(Anchors { marked, ..anchors })
}

/// Vertex set of the pruned graph G' = G - (N(Y) - V(Q1) - V(Q2)). Checks
/// that only z' leaves the path and that the three terminals end up with
/// degree exactly one.
pub fn build_gprime(g: &Graph, a: &Anchors) -> Result<VertexSet, DriverError> {
    let q1_set = a.q1.to_set();
    let q2_set = a.q2.to_set();
    let removed = g
        .open_neighborhood(&a.marked)
        .difference(&q1_set)
        .difference(&q2_set);
    let keep = g.vertex_set().difference(&removed);

    let q_set = a.full_path().to_set();
    let expected_gone = VertexSet::singleton(a.z_prime);
    let gone_on_path = q_set.difference(&keep);
    if gone_on_path != expected_gone {
        return Err(DriverError::AssertionFailed(format!(
            "pruning removed path vertices {:?}, expected exactly z' = {}",
            gone_on_path, a.z_prime
        )));
    }
    for term in [a.x, a.y, a.z] {
        let deg = g.degree_in(term, &keep);
        if deg != 1 {
            return Err(DriverError::AssertionFailed(format!(
                "terminal {term} has degree {deg} in the pruned graph, expected 1"
            )));
        }
    }
    Ok(keep)
}

/// Splits every isolated host vertex whose set induces several components
/// into one isolated host vertex per component; empty ones are dropped.
pub fn normalize_isolated(g: &Graph, keep: &VertexSet, d: &Esd) -> Result<Esd, DriverError> {
    let report = validate_esd_within(g, keep, d);
    if !report.ok() {
        return Err(DriverError::ContractViolation(format!(
            "normalize_isolated on invalid decomposition: {}",
            report.summary()
        )));
    }
    let mut out = d.clone();
    let isolated: Vec<usize> = d
        .host()
        .vertices()
        .iter()
        .copied()
        .filter(|&p| d.host().is_isolated(p))
        .collect();
    for p in isolated {
        let comps = g.components(out.eta_vertex(p));
        match comps.len() {
            0 => {
                out.set_eta_vertex(p, VertexSet::new());
                out.host_mut().remove_vertex(p);
            }
            1 => {}
            _ => {
                out.set_eta_vertex(p, comps[0].clone());
                for c in comps.into_iter().skip(1) {
                    let fresh = out.host().fresh_id();
                    out.host_mut().add_vertex(fresh);
                    out.set_eta_vertex(fresh, c);
                }
            }
        }
    }
    debug_assert!(validate_esd_within(g, keep, &out).ok());
    Ok(out)
}

/// Finds a host edge whose full-edge particle is heavier than half the total;
/// None when the decomposition is refined. Isolated-vertex particles cannot
/// legally be heavy here.
pub fn find_big_particle(g: &Graph, d: &Esd, total: u64) -> Result<Option<HostEdge>, DriverError> {
    let particles = d.particles(g);
    let biggest = particles
        .iter()
        .filter(|p| !is_half_bounded(p.weight, total))
        .max_by(|a, b| a.weight.cmp(&b.weight).then_with(|| b.id.cmp(&a.id)));
    let Some(biggest) = biggest else {
        return Ok(None);
    };
    let candidates: Vec<HostEdge> = match biggest.id {
        ParticleId::Vertex(x) => {
            if d.host().is_isolated(x) {
                return Err(DriverError::ContractViolation(format!(
                    "isolated vertex particle at host {x} weighs {} > half of {total}",
                    biggest.weight
                )));
            }
            d.host().edges_at(x)
        }
        ParticleId::EdgeInterior(e) | ParticleId::HalfEdge(e, _) | ParticleId::FullEdge(e) => vec![e],
        ParticleId::Triangle(t) => t.pairs().to_vec(),
    };
    let edge = candidates
        .into_iter()
        .filter(|&e| d.host().has_edge(e) && biggest.members.is_subset(&d.full_edge_members(e)))
        .min()
        .expect("every non-trivial particle sits inside a full-edge particle");
    debug_assert!(!is_half_bounded(g.set_weight_of(&d.full_edge_members(edge)), total));
    Ok(Some(edge))
}

/// Breakdown of the big-particle separator: the full set S plus the pieces
/// the size argument counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparatorParts {
    pub s: VertexSet,
    /// X = N_{G'}[A] intersected with Q1; at most 4.
    pub x_set: VertexSet,
    /// One vertex per interface of the heavy edge; at most 2.
    pub dominators: VertexSet,
}

/// The big-particle branch: certifies the claims along the way and returns
/// S = Y + X + X_A + {ell, z'}.
pub fn big_particle_separator(
    g: &Graph,
    keep_gprime: &VertexSet,
    a: &Anchors,
    d: &Esd,
    pq: HostEdge,
) -> Result<SeparatorParts, DriverError> {
    let q1_set = a.q1.to_set();
    let full = d.full_edge_members(pq);
    let total = g.total_weight();

    if !is_half_bounded(g.set_weight_of(&full), total) {
        // expected: pq was selected as the big particle's edge
    } else {
        return Err(DriverError::ContractViolation(format!(
            "full-edge particle of {pq} is not heavy"
        )));
    }

    let strip = d.eta_edge(pq);
    let touched = q1_set.intersection(strip);
    if !touched.is_empty() {
        return Err(certification(
            "claim 1",
            format!("Q1 intersects eta({pq}) at {touched:?}"),
        ));
    }
    let inside = q1_set.intersection(&full);
    if !inside.is_empty() {
        return Err(certification(
            "claim 1",
            format!("Q1 intersects the full-edge particle at {inside:?}"),
        ));
    }

    // X = N_{G'}[A] with Q1; at most one vertex per neighboring interface,
    // at most two interfaces per end.
    let x_set = g
        .closed_neighborhood(&full)
        .intersection(keep_gprime)
        .intersection(&q1_set);
    if x_set.len() > 4 {
        return Err(certification(
            "|X| <= 4",
            format!("Q1 meets the particle neighborhood at {} vertices: {x_set:?}", x_set.len()),
        ));
    }

    let dominators = interface_dominators(d, pq)
        .map_err(|e| certification("interface dominators", e.to_string()))?;
    debug_assert!(dominators.len() <= 2);

    let s = a
        .marked
        .union(&x_set)
        .union(&dominators)
        .union(&VertexSet::from([a.ell, a.z_prime]));
    let bound = 3 * a.t + 11;
    if s.len() > bound {
        return Err(certification(
            "|S| <= 3t+11",
            format!("separator has {} vertices", s.len()),
        ));
    }

    // Claim 2 by brute-force component scan.
    let keep_after = g.vertex_set().difference(&g.closed_neighborhood(&s));
    for c in g.components(&keep_after) {
        let w = g.set_weight_of(&c);
        if !is_half_bounded(w, total) {
            return Err(certification(
                "claim 2",
                format!("component of weight {w} survives removal of N[S]"),
            ));
        }
    }
    Ok(SeparatorParts {
        s,
        x_set,
        dominators,
    })
}

/// Independent re-check of a finished outcome; never trusts intermediate
/// code.
pub fn verify_outcome(g: &Graph, t: usize, outcome: &Outcome) -> Result<(), DriverError> {
    let total = g.total_weight();
    match outcome {
        Outcome::Sttt(copy) => {
            if copy.t != t {
                return Err(certification("sttt arms", format!("arm length {} != {t}", copy.t)));
            }
            if !verify_sttt(g, copy) {
                return Err(certification("sttt verification", "claimed copy is not induced"));
            }
        }
        Outcome::Separator { s, esd } => {
            if s.len() > 3 * t + 11 {
                return Err(certification(
                    "|S| <= 3t+11",
                    format!("separator has {} vertices", s.len()),
                ));
            }
            let keep = g.vertex_set().difference(&g.closed_neighborhood(s));
            let report = validate_esd_within(g, &keep, esd);
            if !report.ok() {
                return Err(certification("esd validity", report.summary()));
            }
            let rigid = is_rigid(esd);
            if !rigid.ok() {
                return Err(certification("esd rigidity", rigid.summary()));
            }
            for p in esd.particles(g) {
                if !is_half_bounded(p.weight, total) {
                    return Err(certification(
                        "refined particles",
                        format!("particle {} weighs {}", p.id, p.weight),
                    ));
                }
            }
        }
    }
    Ok(())
}

fn tiat_error_to_driver(e: TiatError) -> DriverError {
    match e {
        TiatError::NotPeripheral(v) => certification("terminal peripherality", format!("terminal {v}")),
        other => certification("backend answer", other.to_string()),
    }
}

/// The full pipeline. Every returned outcome has been re-verified.
pub fn decompose(g: &Graph, t: usize, config: &BackendConfig) -> Result<Outcome, DriverError> {
    assert!(t >= 1, "t must be at least 1");
    let total = g.total_weight();
    let gy = gyarfas_path(g);
    let q = gy.path;

    if q.len() <= 3 * t + 11 {
        let s = q.to_set();
        let keep = g.vertex_set().difference(&g.closed_neighborhood(&s));
        let outcome = Outcome::Separator {
            s,
            esd: trivial_esd_within(g, &keep),
        };
        verify_outcome(g, t, &outcome)?;
        return Ok(outcome);
    }

    let anchors = mark_anchors(&q, t)?;
    let keep = build_gprime(g, &anchors)?;
    let z_set = VertexSet::from([anchors.x, anchors.y, anchors.z]);

    let budget = config.tree_budget.unwrap_or(keep.len());
    let answer = if let Some(esd) = &config.oracle_esd {
        three_in_a_tree(g, &keep, &z_set, &TiatBackend::Oracle(esd))
    } else if let Some(cert) = &config.line_graph_cert {
        cert.verify_against(g).map_err(tiat_error_to_driver)?;
        three_in_a_tree(g, &keep, &z_set, &TiatBackend::LineGraph(cert))
    } else {
        three_in_a_tree(g, &keep, &z_set, &TiatBackend::Exhaustive { budget })
    }
    .map_err(tiat_error_to_driver)?;

    let outcome = match answer {
        TiatAnswer::Inconclusive(reason) => return Err(DriverError::Inconclusive(reason)),
        TiatAnswer::Tree(tree) => {
            let copy = extract_sttt(g, &tree, [anchors.x, anchors.y, anchors.z], t)
                .map_err(|e| certification("tree implies spider", e.to_string()))?;
            Outcome::Sttt(copy)
        }
        TiatAnswer::Decomposition(d) => {
            let d = normalize_isolated(g, &keep, &d)?;
            match find_big_particle(g, &d, total)? {
                None => {
                    // All particles small: restrict to G - N[Y] and rigidify.
                    let keep2 = g
                        .vertex_set()
                        .difference(&g.closed_neighborhood(&anchors.marked));
                    let restricted = d.restrict(&keep2);
                    let w = total / 2;
                    let result = make_rigid(g, &keep2, &restricted, w).map_err(|e| match e {
                        RigidifyError::PreconditionViolated(msg) => {
                            DriverError::ContractViolation(msg)
                        }
                        RigidifyError::StepBudgetExceeded { steps, cap } => {
                            DriverError::AssertionFailed(format!(
                                "rigidify step budget exceeded ({steps} > {cap})"
                            ))
                        }
                    })?;
                    match result.outcome {
                        MakeRigidOutcome::Rigid(esd) => Outcome::Separator {
                            s: anchors.marked.clone(),
                            esd,
                        },
                        MakeRigidOutcome::Separator(x) => {
                            let s = anchors.marked.union(&x);
                            let keep3 = g.vertex_set().difference(&g.closed_neighborhood(&s));
                            Outcome::Separator {
                                s,
                                esd: trivial_esd_within(g, &keep3),
                            }
                        }
                    }
                }
                Some(pq) => {
                    let parts = big_particle_separator(g, &keep, &anchors, &d, pq)?;
                    let keep3 = g.vertex_set().difference(&g.closed_neighborhood(&parts.s));
                    Outcome::Separator {
                        s: parts.s,
                        esd: trivial_esd_within(g, &keep3),
                    }
                }
            }
        }
    };
    verify_outcome(g, t, &outcome)?;
    Ok(outcome)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::esd::{validate_esd, EdgeSets, HostGraph};

    fn synthetic_path(m: usize) -> PathSeq {
        PathSeq::new((0..m).collect())
    }

    #[test]
    fn anchors_t1_on_q20() {
        let a = mark_anchors(&synthetic_path(20), 1).unwrap();
        assert_eq!(a.ell, 19);
        assert_eq!(a.q2.verts(), &[17, 18, 19]);
        assert_eq!(a.z, 17);
        assert_eq!(a.z_prime, 16);
        assert_eq!(a.y, 15);
        assert_eq!(a.x, 0);
        assert_eq!(a.qx, VertexSet::from([0, 1]));
        assert_eq!(a.qy, VertexSet::from([14, 15]));
        assert_eq!(a.qz, VertexSet::from([17, 18]));
        assert_eq!(a.marked.len(), 6);
        assert_eq!(a.q1.verts(), (0..=15).collect::<Vec<_>>().as_slice());
        assert_eq!(a.full_path().verts(), (0..20).collect::<Vec<_>>().as_slice());
    }

    #[test]
    fn anchors_t2_on_q20() {
        let a = mark_anchors(&synthetic_path(20), 2).unwrap();
        assert_eq!(a.z, 16);
        assert_eq!(a.z_prime, 15);
        assert_eq!(a.y, 14);
        assert_eq!(a.qx, VertexSet::from([0, 1, 2]));
        assert_eq!(a.qy, VertexSet::from([12, 13, 14]));
        assert_eq!(a.qz, VertexSet::from([16, 17, 18]));
        assert_eq!(a.marked.len(), 9);
    }

    #[test]
    fn anchors_reject_short_paths() {
        for t in 1..=5 {
            let m = 3 * t + 11;
            assert!(matches!(
                mark_anchors(&synthetic_path(m), t),
                Err(DriverError::TooShort { .. })
            ));
            assert!(mark_anchors(&synthetic_path(m + 1), t).is_ok());
        }
    }

    #[test]
    fn worst_case_size_accounting() {
        // |Y| + |X| + |X_A| + |{ell, z'}| = (3t+3) + 4 + 2 + 2 = 3t + 11.
        for t in 1..=5 {
            assert_eq!((3 * t + 3) + 4 + 2 + 2, 3 * t + 11);
            let a = mark_anchors(&synthetic_path(3 * t + 12), t).unwrap();
            assert_eq!(a.marked.len(), 3 * t + 3);
        }
    }

    #[test]
    fn gprime_on_bare_path() {
        let g = Graph::path(20);
        let a = mark_anchors(&synthetic_path(20), 1).unwrap();
        let keep = build_gprime(&g, &a).unwrap();
        // Only z' = 16 goes away.
        assert_eq!(g.vertex_set().difference(&keep), VertexSet::singleton(16));
        for term in [a.x, a.y, a.z] {
            assert_eq!(g.degree_in(term, &keep), 1);
        }
    }

    #[test]
    fn gprime_removes_pendants_on_marked_vertices() {
        let mut g = Graph::path(21);
        // Rewire vertex 20 as a pendant on q1 (inside Qx).
        let a = mark_anchors(&synthetic_path(20), 1).unwrap();
        g.add_edge(20, 1);
        let keep = build_gprime(&g, &a).unwrap();
        assert_eq!(g.vertex_set().difference(&keep), VertexSet::from([16, 20]));
    }

    #[test]
    fn gprime_rejects_chorded_path() {
        let mut g = Graph::path(20);
        g.add_edge(0, 5);
        let a = mark_anchors(&synthetic_path(20), 1).unwrap();
        assert!(matches!(build_gprime(&g, &a), Err(DriverError::AssertionFailed(_))));
    }

    #[test]
    fn normalize_isolated_splits_components() {
        // Isolated host vertex carrying two components.
        let g = Graph::from_edges(4, &[(0, 1), (2, 3)]);
        let mut d = Esd::new(HostGraph::new([5], std::iter::empty::<(usize, usize)>()));
        d.set_eta_vertex(5, g.vertex_set());
        let out = normalize_isolated(&g, &g.vertex_set(), &d).unwrap();
        assert_eq!(out.host().vertices().len(), 2);
        assert_eq!(out.eta_vertex(5), &VertexSet::from([0, 1]));
        assert_eq!(out.eta_vertex(6), &VertexSet::from([2, 3]));
        assert!(validate_esd(&g, &out).ok());

        // Connected set: unchanged. Empty set: dropped.
        let g2 = Graph::path(2);
        let mut d2 = Esd::new(HostGraph::new([0, 9], std::iter::empty::<(usize, usize)>()));
        d2.set_eta_vertex(0, g2.vertex_set());
        let out2 = normalize_isolated(&g2, &g2.vertex_set(), &d2).unwrap();
        assert_eq!(out2.host().vertices(), &[0]);
    }

    #[test]
    fn find_big_particle_cases() {
        // Singleton strips, balanced weights: nothing is big.
        let g = Graph::path(3);
        let mut d = Esd::new(HostGraph::new(0..4, [(0, 1), (1, 2), (2, 3)]));
        for v in 0..3 {
            let e = HostEdge::new(v, v + 1);
            d.set_edge_sets(
                e,
                EdgeSets {
                    all: VertexSet::singleton(v),
                    at_lo: VertexSet::singleton(v),
                    at_hi: VertexSet::singleton(v),
                },
            );
        }
        assert!(validate_esd(&g, &d).ok());
        assert_eq!(find_big_particle(&g, &d, g.total_weight()).unwrap(), None);

        // One strip carrying most of the weight.
        let mut heavy = Graph::path(3);
        heavy.set_weight(1, 10);
        assert_eq!(
            find_big_particle(&heavy, &d, heavy.total_weight()).unwrap(),
            Some(HostEdge::new(1, 2))
        );

        // A heavy triangle set reports a containing full edge.
        let g3 = Graph::empty(2);
        let mut d3 = Esd::new(HostGraph::new(0..3, [(0, 1), (0, 2), (1, 2)]));
        d3.set_eta_triangle(crate::esd::HostTriple::new(0, 1, 2), VertexSet::singleton(0));
        d3.set_eta_vertex(0, VertexSet::singleton(1));
        let mut g3 = g3;
        g3.set_weight(0, 5);
        assert!(validate_esd(&g3, &d3).ok());
        assert_eq!(
            find_big_particle(&g3, &d3, g3.total_weight()).unwrap(),
            Some(HostEdge::new(0, 1))
        );

        // Big trivial particle: contract violation.
        let g4 = Graph::empty(1);
        let mut d4 = Esd::new(HostGraph::new([0], std::iter::empty::<(usize, usize)>()));
        d4.set_eta_vertex(0, VertexSet::singleton(0));
        assert!(matches!(
            find_big_particle(&g4, &d4, 1),
            Err(DriverError::ContractViolation(_))
        ));
    }

    #[test]
    fn decompose_c5_short_branch() {
        let g = Graph::cycle(5);
        let outcome = decompose(&g, 1, &BackendConfig::default()).unwrap();
        let Outcome::Separator { s, esd } = outcome else {
            panic!("expected separator")
        };
        assert_eq!(s, VertexSet::singleton(0));
        // Remainder is the path 2-3 with weight 2; one trivial particle.
        let ps = esd.particles(&g);
        assert_eq!(ps.len(), 1);
        assert_eq!(ps[0].members, VertexSet::from([2, 3]));
    }

    #[test]
    fn decompose_empty_and_zero_weight() {
        let g = Graph::empty(0);
        let out = decompose(&g, 1, &BackendConfig::default()).unwrap();
        assert!(matches!(out, Outcome::Separator { ref s, .. } if s.is_empty()));

        let mut g = Graph::cycle(6);
        for v in 0..6 {
            g.set_weight(v, 0);
        }
        let out = decompose(&g, 1, &BackendConfig::default()).unwrap();
        let Outcome::Separator { s, esd } = out else { panic!() };
        assert!(s.is_empty());
        assert_eq!(esd.particles(&g).len(), 1);
    }
}
