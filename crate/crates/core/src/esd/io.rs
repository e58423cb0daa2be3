//! JSON reader/writer for extended strip decompositions.
//!
//! Document shape: `{"host": {"vertices": [...], "edges": [[p,q],...]},
//! "eta": {"vertex": {"<p>": [...]}, "edge": {"<p>-<q>": {"all": [...],
//! "at_p": [...], "at_q": [...]}}, "triangle": {"<p>-<q>-<r>": [...]}}}`.
//! Keys use `p<q<r`; empty sets are omitted on write; unknown keys are
//! rejected on read.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{EdgeSets, Esd, HostEdge, HostGraph, HostTriple};
use crate::graph::VertexSet;

#[derive(Debug, Error)]
pub enum EsdIoError {
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("bad key {key:?}: {msg}")]
    BadKey { key: String, msg: String },
    #[error("duplicate vertex {v} in set for key {key:?}")]
    DuplicateVertex { key: String, v: usize },
    #[error("host edge [{p}, {q}] is malformed")]
    BadHostEdge { p: usize, q: usize },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EsdDoc {
    host: HostDoc,
    eta: EtaDoc,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HostDoc {
    vertices: Vec<usize>,
    edges: Vec<(usize, usize)>,
}

#[derive(Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct EtaDoc {
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    vertex: BTreeMap<String, Vec<usize>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    edge: BTreeMap<String, EdgeEtaDoc>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    triangle: BTreeMap<String, Vec<usize>>,
}

#[derive(Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct EdgeEtaDoc {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    all: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    at_p: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    at_q: Vec<usize>,
}

fn parse_ids(key: &str, expected: usize) -> Result<Vec<usize>, EsdIoError> {
    let parts: Vec<&str> = key.split('-').collect();
    if parts.len() != expected {
        return Err(EsdIoError::BadKey {
            key: key.to_string(),
            msg: format!("expected {expected} dash-separated ids"),
        });
    }
    let mut ids = Vec::with_capacity(expected);
    for p in parts {
        let id: usize = p.parse().map_err(|_| EsdIoError::BadKey {
            key: key.to_string(),
            msg: format!("bad id {p:?}"),
        })?;
        ids.push(id);
    }
    if ids.windows(2).any(|w| w[0] >= w[1]) {
        return Err(EsdIoError::BadKey {
            key: key.to_string(),
            msg: "ids must be strictly increasing".to_string(),
        });
    }
    Ok(ids)
}

fn to_set(key: &str, ids: Vec<usize>) -> Result<VertexSet, EsdIoError> {
    let set = VertexSet::from_unsorted(ids.clone());
    if set.len() != ids.len() {
        let mut sorted = ids;
        sorted.sort_unstable();
        let dup = sorted.windows(2).find(|w| w[0] == w[1]).unwrap()[0];
        return Err(EsdIoError::DuplicateVertex { key: key.to_string(), v: dup });
    }
    Ok(set)
}

impl Esd {
    pub fn to_json(&self) -> String {
        let doc = EsdDoc {
            host: HostDoc {
                vertices: self.host().vertices().to_vec(),
                edges: self.host().edges().iter().map(|e| (e.lo(), e.hi())).collect(),
            },
            eta: EtaDoc {
                vertex: self
                    .vertex_entries()
                    .map(|(x, s)| (x.to_string(), s.iter().collect()))
                    .collect(),
                edge: self
                    .edge_entries()
                    .map(|(e, s)| {
                        (
                            e.to_string(),
                            EdgeEtaDoc {
                                all: s.all.iter().collect(),
                                at_p: s.at_lo.iter().collect(),
                                at_q: s.at_hi.iter().collect(),
                            },
                        )
                    })
                    .collect(),
                triangle: self
                    .triangle_entries()
                    .map(|(t, s)| (t.to_string(), s.iter().collect()))
                    .collect(),
            },
        };
        serde_json::to_string_pretty(&doc).expect("esd serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Esd, EsdIoError> {
        let doc: EsdDoc = serde_json::from_str(text)?;
        for &(p, q) in &doc.host.edges {
            if p >= q {
                return Err(EsdIoError::BadHostEdge { p, q });
            }
        }
        let host = HostGraph::new(doc.host.vertices, doc.host.edges);
        let mut d = Esd::new(host);
        for (key, ids) in doc.eta.vertex {
            let x = parse_ids(&key, 1)?[0];
            let set = to_set(&key, ids)?;
            d.set_eta_vertex(x, set);
        }
        for (key, sets) in doc.eta.edge {
            let ids = parse_ids(&key, 2)?;
            let e = HostEdge::new(ids[0], ids[1]);
            d.set_edge_sets(
                e,
                EdgeSets {
                    all: to_set(&key, sets.all)?,
                    at_lo: to_set(&key, sets.at_p)?,
                    at_hi: to_set(&key, sets.at_q)?,
                },
            );
        }
        for (key, ids) in doc.eta.triangle {
            let vs = parse_ids(&key, 3)?;
            let t = HostTriple::new(vs[0], vs[1], vs[2]);
            let set = to_set(&key, ids)?;
            d.set_eta_triangle(t, set);
        }
        Ok(d)
    }
}
