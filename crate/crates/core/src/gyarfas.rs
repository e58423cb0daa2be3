//! Balanced-separator path construction: an induced path Q such that every
//! component of G - N[V(Q)] carries at most half of the total weight, minimal
//! in the sense that dropping the last vertex re-creates a heavy component.

use thiserror::Error;

use crate::graph::{is_half_bounded, Graph, PathSeq, VertexSet};

/// One extension step: the appended vertex and the size (vertex count) of the
/// heavy component that forced the extension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub extension: usize,
    pub big_component_size: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GyarfasResult {
    pub path: PathSeq,
    pub trace: Vec<TraceStep>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GyarfasError {
    #[error("input path does not satisfy the half-weight property")]
    PropertyViolated,
}

/// The unique component of G[keep] heavier than half the total, if any. Two
/// such components cannot coexist.
fn big_component(g: &Graph, keep: &VertexSet, total: u64) -> Option<VertexSet> {
    let mut found: Option<VertexSet> = None;
    for c in g.components(keep) {
        if !is_half_bounded(g.set_weight_of(&c), total) {
            assert!(found.is_none(), "two components each above half the total weight");
            found = Some(c);
        }
    }
    found
}

fn remainder(g: &Graph, path: &[usize]) -> VertexSet {
    let closed = g.closed_neighborhood(&VertexSet::from_unsorted(path.to_vec()));
    g.vertex_set().difference(&closed)
}

/// True iff every component of G - N[path] is within half the total weight.
pub fn path_is_small(g: &Graph, path: &[usize]) -> bool {
    let total = g.total_weight();
    big_component(g, &remainder(g, path), total).is_none()
}

/// Builds the path by the classical extension argument: start at the minimum
/// vertex of the unique heavy component and repeatedly step toward the
/// shrinking heavy region, then trim.
pub fn gyarfas_path(g: &Graph) -> GyarfasResult {
    let total = g.total_weight();
    let mut trace = Vec::new();

    let Some(mut region) = big_component(g, &g.vertex_set(), total) else {
        return GyarfasResult { path: PathSeq::empty(), trace };
    };

    let mut path = vec![region.min_id().expect("heavy component is nonempty")];
    loop {
        assert!(path.len() <= g.n(), "extension count exceeded n");
        let Some(big) = big_component(g, &remainder(g, &path), total) else {
            break;
        };
        assert!(
            big.is_subset(&region),
            "heavy component escaped the tracked region"
        );
        assert!(big.len() < region.len(), "heavy region failed to shrink");
        // Candidate extensions: neighbors of the heavy component inside the
        // previous region; all of them are adjacent to the path's last
        // vertex, which keeps the extension induced.
        let last = *path.last().unwrap();
        let candidates = g.open_neighborhood(&big).intersection(&region);
        assert!(
            !candidates.is_empty(),
            "heavy component has no neighbor in the tracked region"
        );
        for u in candidates.iter() {
            assert!(
                g.has_edge(u, last),
                "extension candidate {u} is not adjacent to the path end"
            );
        }
        let u = candidates.min_id().unwrap();
        trace.push(TraceStep {
            extension: u,
            big_component_size: big.len(),
        });
        path.push(u);
        region = big;
    }

    let q = trim_minimal(g, PathSeq::new(path)).expect("constructed path satisfies the property");
    let result = GyarfasResult { path: q, trace };
    debug_assert!(g.is_induced_path(&result.path));
    debug_assert!(result
        .trace
        .windows(2)
        .all(|w| w[1].big_component_size < w[0].big_component_size));
    result
}

/// Drops trailing vertices while the prefix still satisfies the half-weight
/// property.
pub fn trim_minimal(g: &Graph, q: PathSeq) -> Result<PathSeq, GyarfasError> {
    assert!(g.is_induced_path(&q), "trim_minimal expects an induced path");
    if !path_is_small(g, q.verts()) {
        return Err(GyarfasError::PropertyViolated);
    }
    let mut verts = q.verts().to_vec();
    while !verts.is_empty() && path_is_small(g, &verts[..verts.len() - 1]) {
        verts.pop();
    }
    Ok(PathSeq::new(verts))
}
