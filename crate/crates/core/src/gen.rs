//! Reproducible instance generators and brute-force oracles for the test
//! suites and the CLI.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::esd::{is_rigid, validate_esd, EdgeSets, Esd, HostGraph};
use crate::graph::{is_half_bounded, Graph, VertexSet};
use crate::sttt::{verify_sttt, StttCopy};
use crate::tiat::LineGraphCert;

/// Instance families the generator knows how to plant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    PlantedEsd,
    LineGraph,
    PlantedSttt,
    Random,
}

impl std::str::FromStr for Family {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "planted-esd" => Ok(Family::PlantedEsd),
            "line-graph" => Ok(Family::LineGraph),
            "planted-sttt" => Ok(Family::PlantedSttt),
            "random" => Ok(Family::Random),
            other => Err(format!("unknown family {other:?}")),
        }
    }
}

/// Generation knobs; identical (params, seed) gives identical instances.
#[derive(Clone, Debug)]
pub struct GenParams {
    pub family: Family,
    /// Primary size: host core vertices, root vertices, or n.
    pub size: usize,
    /// Arm length for planted spiders.
    pub t: usize,
    /// Edge/noise density in [0, 1].
    pub density: f64,
    /// Weights are drawn uniformly from 0..=weight_max (0 means unweighted 1).
    pub weight_max: u64,
    pub seed: u64,
}

impl GenParams {
    pub fn new(family: Family, size: usize, seed: u64) -> Self {
        GenParams {
            family,
            size,
            t: 1,
            density: 0.3,
            weight_max: 10,
            seed,
        }
    }
}

/// Ground truth recorded alongside a generated graph.
#[derive(Clone, Debug)]
pub enum Truth {
    Esd { esd: Esd, peripherals: (usize, usize) },
    LineGraph(LineGraphCert),
    Sttt(StttCopy),
    None,
}

#[derive(Clone, Debug)]
pub struct PlantedInstance {
    pub graph: Graph,
    pub truth: Truth,
}

pub fn generate(params: &GenParams) -> PlantedInstance {
    match params.family {
        Family::PlantedEsd => gen_planted_esd(params),
        Family::LineGraph => gen_line_graph(params),
        Family::PlantedSttt => gen_planted_sttt(params),
        Family::Random => gen_random(params),
    }
}

fn draw_weights(g: &mut Graph, rng: &mut ChaCha8Rng, weight_max: u64) {
    for v in 0..g.n() {
        let w = if weight_max == 0 { 1 } else { rng.gen_range(0..=weight_max) };
        g.set_weight(v, w);
    }
}

/// Random host with two pendants carrying planted peripheral vertices; eta
/// sets populated under the subset rules; G gets every mandatory completeness
/// edge plus noise only in the allowed patterns.
pub fn gen_planted_esd(params: &GenParams) -> PlantedInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let core = params.size.clamp(1, 6);

    // Connected core plus up to two extra edges (these produce triangles),
    // then two pendant host vertices. Sizes are capped so n stays small.
    let mut host_edges: Vec<(usize, usize)> = Vec::new();
    for i in 1..core {
        host_edges.push((rng.gen_range(0..i), i));
    }
    let mut extras = 0;
    for u in 0..core {
        for v in u + 1..core {
            if extras < 2
                && !host_edges.contains(&(u, v))
                && !host_edges.contains(&(v, u))
                && rng.gen_bool(params.density)
            {
                host_edges.push((u, v));
                extras += 1;
            }
        }
    }
    let pend = [core, core + 1];
    let attach = [rng.gen_range(0..core), rng.gen_range(0..core)];
    host_edges.push((attach[0], pend[0]));
    host_edges.push((attach[1], pend[1]));
    let host = HostGraph::new(0..core + 2, host_edges);

    // Sizes per eta object, then consecutive ids in deterministic order.
    let mut next_id = 0usize;
    let take = |k: usize, next_id: &mut usize| -> VertexSet {
        let set: VertexSet = (*next_id..*next_id + k).collect();
        *next_id += k;
        set
    };

    let mut d = Esd::new(host.clone());
    for &x in host.vertices() {
        if pend.contains(&x) {
            continue;
        }
        let k = [0, 0, 1, 1, 2][rng.gen_range(0..5)];
        d.set_eta_vertex(x, take(k, &mut next_id));
    }
    let mut planted = Vec::new();
    for &e in host.edges() {
        let pendant_end = e.ends().into_iter().find(|end| pend.contains(end));
        let k = if pendant_end.is_some() {
            rng.gen_range(1..=3)
        } else {
            rng.gen_range(1..=4)
        };
        let all = take(k, &mut next_id);
        let members: Vec<usize> = all.iter().collect();
        let pick_interface = |rng: &mut ChaCha8Rng| -> VertexSet {
            let mut s: VertexSet = members.iter().copied().filter(|_| rng.gen_bool(0.4)).collect();
            if s.is_empty() {
                s.insert(members[rng.gen_range(0..members.len())]);
            }
            s
        };
        let sets = if let Some(p) = pendant_end {
            // Singleton interface at the pendant: the planted peripheral.
            let peripheral = members[0];
            planted.push(peripheral);
            let other = pick_interface(&mut rng);
            let mut sets = EdgeSets {
                all,
                at_lo: VertexSet::new(),
                at_hi: VertexSet::new(),
            };
            *sets.at_mut(e, p) = VertexSet::singleton(peripheral);
            *sets.at_mut(e, e.other(p)) = other;
            sets
        } else {
            EdgeSets {
                at_lo: pick_interface(&mut rng),
                at_hi: pick_interface(&mut rng),
                all,
            }
        };
        d.set_edge_sets(e, sets);
    }
    for t in host.triangles().into_iter().take(4) {
        if rng.gen_bool(0.5) {
            let k = rng.gen_range(1..=2);
            d.set_eta_triangle(t, take(k, &mut next_id));
        }
    }

    let mut g = Graph::empty(next_id);

    // Spine inside every strip so paths can traverse it.
    for &e in host.edges() {
        let sets = d.edge_sets(e).unwrap().clone();
        let mut order: Vec<usize> = sets.all.iter().collect();
        let first = sets.at_lo.min_id().unwrap();
        order.retain(|&v| v != first);
        order.insert(0, first);
        if let Some(last) = sets.at_hi.iter().find(|&v| v != first) {
            order.retain(|&v| v != last);
            order.push(last);
        }
        for w in order.windows(2) {
            g.add_edge(w[0], w[1]);
        }
    }

    // Mandatory completeness edges.
    for &x in host.vertices() {
        let incident = host.edges_at(x);
        for (i, &e) in incident.iter().enumerate() {
            for &f in &incident[i + 1..] {
                for u in d.interface(e, x).iter() {
                    for v in d.interface(f, x).iter() {
                        if u != v {
                            g.add_edge(u, v);
                        }
                    }
                }
            }
        }
    }

    // Noise, only in allowed patterns.
    let set_keys: Vec<VertexSet> = d
        .vertex_entries()
        .map(|(_, s)| s.clone())
        .chain(d.edge_entries().map(|(_, s)| s.all.clone()))
        .chain(d.triangle_entries().map(|(_, s)| s.clone()))
        .collect();
    for s in &set_keys {
        let members: Vec<usize> = s.iter().collect();
        for (i, &u) in members.iter().enumerate() {
            for &v in &members[i + 1..] {
                if rng.gen_bool(params.density * 0.5) {
                    g.add_edge(u, v);
                }
            }
        }
    }
    for &e in host.edges() {
        for end in e.ends() {
            for u in d.interface(e, end).iter() {
                for v in d.eta_vertex(end).iter() {
                    if rng.gen_bool(params.density) {
                        g.add_edge(u, v);
                    }
                }
            }
        }
    }
    for (tri, s) in d.triangle_entries() {
        for e in tri.pairs() {
            let doubles: Vec<usize> = d
                .interface(e, e.lo())
                .intersection(d.interface(e, e.hi()))
                .iter()
                .collect();
            for u in s.iter() {
                for &v in &doubles {
                    if rng.gen_bool(params.density) {
                        g.add_edge(u, v);
                    }
                }
            }
        }
    }

    draw_weights(&mut g, &mut rng, params.weight_max);

    debug_assert!(validate_esd(&g, &d).ok(), "generator produced an invalid truth");
    debug_assert!(is_rigid(&d).ok(), "generator produced a non-rigid truth");
    PlantedInstance {
        graph: g,
        truth: Truth::Esd {
            esd: d,
            peripherals: (planted[0], planted[1]),
        },
    }
}

/// Random connected root; G is its line graph with the bijection recorded.
pub fn gen_line_graph(params: &GenParams) -> PlantedInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let r = params.size.max(2);
    let mut root = Graph::empty(r);
    for i in 1..r {
        root.add_edge(rng.gen_range(0..i), i);
    }
    for u in 0..r {
        for v in u + 1..r {
            if !root.has_edge(u, v) && rng.gen_bool(params.density * 0.3) {
                root.add_edge(u, v);
            }
        }
    }
    let edges = root.edges();
    let mut g = Graph::empty(edges.len());
    for (i, &(a, b)) in edges.iter().enumerate() {
        for (j, &(c, e)) in edges.iter().enumerate().skip(i + 1) {
            if a == c || a == e || b == c || b == e {
                g.add_edge(i, j);
            }
        }
    }
    draw_weights(&mut g, &mut rng, params.weight_max);
    let cert = LineGraphCert {
        root,
        edge_map: edges.into_iter().enumerate().map(|(i, e)| (e, i)).collect(),
    };
    debug_assert!(cert.verify_against(&g).is_ok());
    PlantedInstance {
        graph: g,
        truth: Truth::LineGraph(cert),
    }
}

/// Spider planted as an induced subgraph: noise edges never join two planted
/// vertices, so the copy stays induced.
pub fn gen_planted_sttt(params: &GenParams) -> PlantedInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let t = params.t.max(1);
    let n = params.size.max(3 * t + 2);
    let mut ids: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        ids.swap(i, j);
    }
    let center = ids[0];
    let arms: [Vec<usize>; 3] = [
        ids[1..1 + t].to_vec(),
        ids[1 + t..1 + 2 * t].to_vec(),
        ids[1 + 2 * t..1 + 3 * t].to_vec(),
    ];
    let planted: VertexSet = ids[..3 * t + 1].iter().copied().collect();

    let mut g = Graph::empty(n);
    for arm in &arms {
        g.add_edge(center, arm[0]);
        for w in arm.windows(2) {
            g.add_edge(w[0], w[1]);
        }
    }
    for u in 0..n {
        for v in u + 1..n {
            if planted.contains(u) && planted.contains(v) {
                continue;
            }
            if rng.gen_bool(params.density) {
                g.add_edge(u, v);
            }
        }
    }
    draw_weights(&mut g, &mut rng, params.weight_max);
    let copy = StttCopy { center, arms, t };
    debug_assert!(verify_sttt(&g, &copy));
    PlantedInstance {
        graph: g,
        truth: Truth::Sttt(copy),
    }
}

/// Random connected weighted graph.
pub fn gen_random(params: &GenParams) -> PlantedInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let n = params.size.max(1);
    let mut g = Graph::empty(n);
    for i in 1..n {
        g.add_edge(rng.gen_range(0..i), i);
    }
    for u in 0..n {
        for v in u + 1..n {
            if !g.has_edge(u, v) && rng.gen_bool(params.density) {
                g.add_edge(u, v);
            }
        }
    }
    draw_weights(&mut g, &mut rng, params.weight_max);
    PlantedInstance {
        graph: g,
        truth: Truth::None,
    }
}

/// Brute-force separator oracle: every component of G - N[S] is within half
/// the total weight.
pub fn check_separator(g: &Graph, s: &VertexSet) -> bool {
    let total = g.total_weight();
    let keep = g.vertex_set().difference(&g.closed_neighborhood(s));
    g.components(&keep)
        .iter()
        .all(|c| is_half_bounded(g.set_weight_of(c), total))
}
