//! Acceptance suites: batch property runs over generated instances, shared by
//! the `acceptance` test target and the CLI `selftest` command.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::decomposer::{
    big_particle_separator, build_gprime, decompose, mark_anchors, Anchors, BackendConfig,
    DriverError, Outcome,
};
use crate::esd::rigidify::{make_rigid, MakeRigidOutcome};
use crate::esd::{
    is_rigid, validate_esd, validate_esd_within, EdgeSets, Esd, HostEdge, HostGraph, Violation,
};
use crate::gen::{check_separator, gen_line_graph, gen_planted_esd, gen_planted_sttt, gen_random, Family, GenParams, Truth};
use crate::graph::{is_half_bounded, Graph, PathSeq, VertexSet};
use crate::gyarfas::{gyarfas_path, path_is_small};
use crate::sttt::verify_sttt;

/// One acceptance criterion's verdict.
#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub id: usize,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl CriterionResult {
    fn pass(id: usize, name: &'static str, detail: String) -> Self {
        CriterionResult { id, name, pass: true, detail }
    }

    fn fail(id: usize, name: &'static str, detail: String) -> Self {
        CriterionResult { id, name, pass: false, detail }
    }
}

pub const SUITES: &[&str] = &[
    "esd-validator",
    "make-rigid",
    "gyarfas",
    "path-lemmas",
    "separator-e2e",
    "sttt-e2e",
    "big-particle",
    "bounds",
    "terminal-degree",
];

/// Runs one named suite, or all of them for "all".
pub fn run_suite(name: &str) -> Result<Vec<CriterionResult>, String> {
    match name {
        "esd-validator" => Ok(vec![criterion1()]),
        "make-rigid" => Ok(vec![criterion2()]),
        "gyarfas" => Ok(vec![criterion3()]),
        "path-lemmas" => Ok(vec![criterion4()]),
        "separator-e2e" => Ok(vec![criterion5()]),
        "sttt-e2e" => Ok(vec![criterion6()]),
        "big-particle" => Ok(vec![criterion7()]),
        "bounds" => Ok(vec![criterion8()]),
        "terminal-degree" => Ok(vec![criterion9()]),
        "all" => Ok(vec![
            criterion1(),
            criterion2(),
            criterion3(),
            criterion4(),
            criterion5(),
            criterion6(),
            criterion7(),
            criterion8(),
            criterion9(),
        ]),
        other => Err(format!("unknown suite {other:?}; known: {SUITES:?} or \"all\"")),
    }
}

fn esd_params(seed: u64) -> GenParams {
    let mut p = GenParams::new(Family::PlantedEsd, 2 + (seed as usize % 5), seed);
    p.density = 0.25 + 0.1 * ((seed % 3) as f64);
    p
}

/// A targeted mutation of a valid (graph, esd) pair that provably breaks
/// validity, together with the vertices a correct witness must mention.
enum Mutation {
    /// Move `v` from its strip into the vertex set of host `w`; the surviving
    /// completeness edge (u, v) becomes pattern-free.
    MoveVertex { v: usize, u: usize, e: HostEdge, w: usize },
    /// Delete `v` from the interface of `e` at `x`; the edge (u, v) loses its
    /// only pattern.
    DropInterfaceMember { v: usize, u: usize, e: HostEdge, x: usize },
    /// Delete the mandatory completeness edge (u, v) at host vertex `x`.
    DeleteCompletenessEdge { u: usize, v: usize },
}

/// Hosts with two or more incident edges give completeness pairs: a vertex in
/// one interface and a vertex in another.
fn completeness_pairs(d: &Esd) -> Vec<(usize, HostEdge, HostEdge, usize, usize)> {
    let mut out = Vec::new();
    for &x in d.host().vertices() {
        let incident = d.host().edges_at(x);
        for (i, &e) in incident.iter().enumerate() {
            for &f in &incident[i + 1..] {
                for v in d.interface(e, x).iter() {
                    for u in d.interface(f, x).iter() {
                        if u != v {
                            out.push((x, e, f, v, u));
                        }
                    }
                }
            }
        }
    }
    out
}

fn pick_mutation(d: &Esd, rng: &mut ChaCha8Rng, kind: usize) -> Option<Mutation> {
    let pairs = completeness_pairs(d);
    if pairs.is_empty() {
        return None;
    }
    match kind % 3 {
        0 => {
            // Target vertex-set hosts w such that u sits in no interface at w.
            for _ in 0..40 {
                let &(_, e, _, v, u) = &pairs[rng.gen_range(0..pairs.len())];
                let candidate = d.host().vertices().iter().copied().find(|&w| {
                    !e.has_end(w)
                        && d.host()
                            .edges_at(w)
                            .iter()
                            .all(|&we| !d.interface(we, w).contains(u))
                });
                if let Some(w) = candidate {
                    return Some(Mutation::MoveVertex { v, u, e, w });
                }
            }
            None
        }
        1 => {
            let &(x, e, _, v, u) = &pairs[rng.gen_range(0..pairs.len())];
            Some(Mutation::DropInterfaceMember { v, u, e, x })
        }
        _ => {
            let &(_, _, _, v, u) = &pairs[rng.gen_range(0..pairs.len())];
            Some(Mutation::DeleteCompletenessEdge { u, v })
        }
    }
}

fn apply_mutation(g: &Graph, d: &Esd, m: &Mutation) -> (Graph, Esd) {
    let mut g2 = g.clone();
    let mut d2 = d.clone();
    match m {
        Mutation::MoveVertex { v, e, w, .. } => {
            let mut sets = d2.edge_sets(*e).cloned().unwrap_or_default();
            sets.all.remove(*v);
            sets.at_lo.remove(*v);
            sets.at_hi.remove(*v);
            d2.set_edge_sets(*e, sets);
            let mut vs = d2.eta_vertex(*w).clone();
            vs.insert(*v);
            d2.set_eta_vertex(*w, vs);
        }
        Mutation::DropInterfaceMember { v, e, x, .. } => {
            let mut sets = d2.edge_sets(*e).cloned().unwrap_or_default();
            sets.at_mut(*e, *x).remove(*v);
            d2.set_edge_sets(*e, sets);
        }
        Mutation::DeleteCompletenessEdge { u, v } => {
            // Rebuild without the edge; Graph has no removal on purpose.
            let mut g3 = Graph::empty(g.n());
            for (a, b) in g.edges() {
                if (a, b) != (*u.min(v), *u.max(v)) {
                    g3.add_edge(a, b);
                }
            }
            for x in 0..g.n() {
                g3.set_weight(x, g.weight(x));
            }
            g2 = g3;
        }
    }
    (g2, d2)
}

/// True iff the report rejects the mutation with a witness naming the
/// mutated pair.
fn witness_matches(report: &crate::esd::ValidationReport, m: &Mutation) -> bool {
    if report.ok() {
        return false;
    }
    match m {
        Mutation::MoveVertex { v, u, .. } | Mutation::DropInterfaceMember { v, u, .. } => {
            let (lo, hi) = (*u.min(v), *u.max(v));
            report.violations.iter().any(|viol| match viol {
                Violation::ForbiddenEdge { u: a, v: b } => (*a, *b) == (lo, hi),
                _ => false,
            })
        }
        Mutation::DeleteCompletenessEdge { u, v } => report.violations.iter().any(|viol| match viol {
            Violation::MissingCompletenessEdge { u: a, v: b, .. } => {
                (a == u && b == v) || (a == v && b == u)
            }
            _ => false,
        }),
    }
}

/// Criterion 1: planted decompositions validate; targeted mutations are
/// rejected with correct witnesses.
pub fn criterion1() -> CriterionResult {
    const INSTANCES: u64 = 200;
    const MUTATIONS: usize = 20;
    let name = "esd validator soundness on planted instances and mutations";
    let mut mutations_run = 0usize;
    for seed in 0..INSTANCES {
        let inst = gen_planted_esd(&esd_params(seed));
        let Truth::Esd { esd, .. } = &inst.truth else { unreachable!() };
        if inst.graph.n() > 80 {
            return CriterionResult::fail(1, name, format!("seed {seed}: n = {} > 80", inst.graph.n()));
        }
        let report = validate_esd(&inst.graph, esd);
        if !report.ok() {
            return CriterionResult::fail(
                1,
                name,
                format!("seed {seed}: planted truth rejected: {}", report.summary()),
            );
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xA5A5_5A5A);
        let mut applied = 0;
        let mut kind = 0;
        while applied < MUTATIONS {
            let Some(m) = pick_mutation(esd, &mut rng, kind) else {
                kind += 1;
                continue;
            };
            kind += 1;
            let (g2, d2) = apply_mutation(&inst.graph, esd, &m);
            let report = validate_esd(&g2, &d2);
            if !witness_matches(&report, &m) {
                return CriterionResult::fail(
                    1,
                    name,
                    format!(
                        "seed {seed}: mutation {applied} not rejected with a matching witness: {}",
                        report.summary()
                    ),
                );
            }
            applied += 1;
            mutations_run += 1;
        }
    }
    CriterionResult::pass(
        1,
        name,
        format!("{INSTANCES} instances validated, {mutations_run} mutations rejected"),
    )
}

/// Criterion 2: rigidify contract on degraded planted decompositions.
pub fn criterion2() -> CriterionResult {
    const WANTED: usize = 100;
    let name = "make_rigid contract on degraded instances";
    let mut done = 0usize;
    let mut separators = 0usize;
    let mut rigids = 0usize;
    let mut seed = 0u64;
    while done < WANTED {
        seed += 1;
        if seed > 10_000 {
            return CriterionResult::fail(2, name, "could not assemble 100 degraded instances".into());
        }
        let inst = gen_planted_esd(&esd_params(seed));
        let Truth::Esd { esd, .. } = &inst.truth else { unreachable!() };
        let g = &inst.graph;

        // Degrade: empty out whole interfaces by restricting them away,
        // preferring edges that sit on host triangles so dangling triples
        // appear downstream.
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5151_1515);
        let mut drop = VertexSet::new();
        let mut edges: Vec<HostEdge> = esd.host().edges().to_vec();
        edges.sort_by_key(|e| {
            let on_triangle = esd
                .host()
                .triangles()
                .iter()
                .any(|t| t.contains_edge(*e) && !esd.eta_triangle(*t).is_empty());
            if on_triangle {
                0
            } else {
                1
            }
        });
        let count = 1 + rng.gen_range(0..edges.len().min(3));
        for e in edges.into_iter().take(count) {
            let end = if rng.gen_bool(0.5) { e.lo() } else { e.hi() };
            drop = drop.union(esd.interface(e, end));
        }
        if drop.is_empty() {
            continue;
        }
        let keep = g.vertex_set().difference(&drop);
        let restricted = esd.restrict(&keep);
        let total: u64 = g.set_weight_of(&keep);
        let w = total.div_ceil(2);
        if restricted.particles(g).iter().any(|p| p.weight > w) {
            continue; // precondition would fail; not a usable input
        }
        let result = match make_rigid(g, &keep, &restricted, w) {
            Ok(r) => r,
            Err(e) => {
                return CriterionResult::fail(2, name, format!("seed {seed}: {e}"));
            }
        };
        if result.steps > result.step_cap {
            return CriterionResult::fail(2, name, format!("seed {seed}: step cap exceeded"));
        }
        match result.outcome {
            MakeRigidOutcome::Rigid(out) => {
                rigids += 1;
                let v = validate_esd_within(g, &keep, &out);
                if !v.ok() {
                    return CriterionResult::fail(2, name, format!("seed {seed}: invalid output: {}", v.summary()));
                }
                if !is_rigid(&out).ok() {
                    return CriterionResult::fail(2, name, format!("seed {seed}: output not rigid"));
                }
                if let Some(p) = out.particles(g).iter().find(|p| 2 * p.weight > 2 * w) {
                    return CriterionResult::fail(
                        2,
                        name,
                        format!("seed {seed}: particle {} weighs {} > w = {w}", p.id, p.weight),
                    );
                }
            }
            MakeRigidOutcome::Separator(x) => {
                separators += 1;
                if x.len() > 2 {
                    return CriterionResult::fail(2, name, format!("seed {seed}: |X| = {} > 2", x.len()));
                }
                let after = keep.difference(&g.closed_neighborhood(&x));
                for c in g.components(&after) {
                    if g.set_weight_of(&c) > w {
                        return CriterionResult::fail(
                            2,
                            name,
                            format!("seed {seed}: component above w after removing N[X]"),
                        );
                    }
                }
            }
        }
        done += 1;
    }
    CriterionResult::pass(
        2,
        name,
        format!("{done} degraded instances ({rigids} rigid, {separators} separator)"),
    )
}

/// Criterion 3: balanced-separator path postconditions on random connected
/// weighted graphs.
pub fn criterion3() -> CriterionResult {
    const INSTANCES: u64 = 300;
    let name = "gyarfas path suite on random graphs";
    let densities = [0.05, 0.1, 0.3];
    for seed in 0..INSTANCES {
        let mut params = GenParams::new(Family::Random, 0, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x77);
        params.size = rng.gen_range(2..=200);
        params.density = densities[(seed % 3) as usize];
        params.weight_max = 10;
        let g = gen_random(&params).graph;
        let res = gyarfas_path(&g);
        if !g.is_induced_path(&res.path) {
            return CriterionResult::fail(3, name, format!("seed {seed}: path not induced"));
        }
        if !path_is_small(&g, res.path.verts()) {
            return CriterionResult::fail(3, name, format!("seed {seed}: smallness violated"));
        }
        if !res.path.is_empty() {
            let prefix = &res.path.verts()[..res.path.len() - 1];
            if path_is_small(&g, prefix) {
                return CriterionResult::fail(3, name, format!("seed {seed}: prefix-minimality violated"));
            }
        }
        if res.trace.len() > g.n() {
            return CriterionResult::fail(3, name, format!("seed {seed}: too many extensions"));
        }
        if !res.trace.windows(2).all(|w| w[1].big_component_size < w[0].big_component_size) {
            return CriterionResult::fail(3, name, format!("seed {seed}: trace not strictly decreasing"));
        }
    }
    CriterionResult::pass(3, name, format!("{INSTANCES} random graphs checked"))
}

/// All induced paths between two vertices (for small n), or a sample of
/// random induced paths from randomized DFS.
fn sample_induced_paths(g: &Graph, from: usize, to: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if g.n() <= 14 {
        // Exhaustive DFS over induced paths.
        let mut stack = vec![vec![from]];
        while let Some(path) = stack.pop() {
            let last = *path.last().unwrap();
            if last == to {
                out.push(path);
                continue;
            }
            for &next in g.neighbors(last) {
                if path.contains(&next) {
                    continue;
                }
                if path[..path.len() - 1].iter().any(|&p| g.has_edge(p, next)) {
                    continue;
                }
                let mut longer = path.clone();
                longer.push(next);
                stack.push(longer);
            }
        }
    } else {
        for _ in 0..200 {
            let mut path = vec![from];
            loop {
                let last = *path.last().unwrap();
                if last == to {
                    out.push(path);
                    break;
                }
                let candidates: Vec<usize> = g
                    .neighbors(last)
                    .iter()
                    .copied()
                    .filter(|&next| {
                        !path.contains(&next)
                            && !path[..path.len() - 1].iter().any(|&p| g.has_edge(p, next))
                    })
                    .collect();
                if candidates.is_empty() {
                    break;
                }
                path.push(candidates[rng.gen_range(0..candidates.len())]);
            }
        }
        out.sort();
        out.dedup();
    }
    out
}

/// Path-structure invariants of one induced peripheral-to-peripheral path
/// against the decomposition. Returns an error string on the first failure.
fn check_path_invariants(g: &Graph, d: &Esd, path: &[usize]) -> Result<(), String> {
    // (i) at most one path vertex per interface.
    for (e, sets) in d.edge_entries() {
        for end in e.ends() {
            let hits = path.iter().filter(|&&v| sets.at(e, end).contains(v)).count();
            if hits > 1 {
                return Err(format!("{hits} path vertices in eta({e},{end})"));
            }
        }
    }
    // (ii) the path lives inside edge sets.
    for &v in path {
        let in_edge = d.edge_entries().any(|(_, sets)| sets.all.contains(v));
        if !in_edge {
            return Err(format!("path vertex {v} outside all edge sets"));
        }
    }
    // (iii) the intersection with each strip is a contiguous subpath with
    // interface endpoints and interior inside the strip interior.
    for (e, sets) in d.edge_entries() {
        let hits: Vec<usize> = (0..path.len()).filter(|&i| sets.all.contains(path[i])).collect();
        if hits.is_empty() {
            continue;
        }
        if hits.windows(2).any(|w| w[1] != w[0] + 1) {
            return Err(format!("path meets eta({e}) non-contiguously"));
        }
        let first = path[hits[0]];
        let last = path[*hits.last().unwrap()];
        if hits.len() == 1 {
            if !(sets.at_lo.contains(first) && sets.at_hi.contains(first)) {
                return Err(format!("single crossing vertex {first} not in both interfaces of {e}"));
            }
        } else {
            let fwd = sets.at_lo.contains(first) && sets.at_hi.contains(last);
            let back = sets.at_hi.contains(first) && sets.at_lo.contains(last);
            if !fwd && !back {
                return Err(format!("crossing of eta({e}) does not join its interfaces"));
            }
            for &i in &hits[1..hits.len() - 1] {
                let v = path[i];
                if sets.at_lo.contains(v) || sets.at_hi.contains(v) {
                    return Err(format!("interior crossing vertex {v} sits in an interface of {e}"));
                }
            }
        }
    }
    // (iv) entering the neighborhood of a full-edge particle from a
    // peripheral start outside it forces a foreign interface visit.
    let start = path[0];
    for &pq in d.host().edges() {
        if d.eta_edge(pq).contains(start) {
            continue;
        }
        let full = d.full_edge_members(pq);
        let nbh = g.closed_neighborhood(&full);
        if !path.iter().any(|&v| nbh.contains(v)) {
            continue;
        }
        let mut found = false;
        'search: for &f in d.host().edges() {
            if f == pq {
                continue;
            }
            for r in pq.ends() {
                if f.has_end(r) && path.iter().any(|&v| d.interface(f, r).contains(v)) {
                    found = true;
                    break 'search;
                }
            }
        }
        if !found {
            return Err(format!("path touches N[A({pq})] without visiting a foreign interface"));
        }
    }
    Ok(())
}

/// Criterion 4: path-structure lemmas on planted decompositions.
pub fn criterion4() -> CriterionResult {
    const INSTANCES: u64 = 100;
    let name = "induced-path lemmas on planted decompositions";
    let mut paths_checked = 0usize;
    for seed in 0..INSTANCES {
        let inst = gen_planted_esd(&esd_params(seed + 1000));
        let Truth::Esd { esd, peripherals } = &inst.truth else { unreachable!() };
        let (u, v) = *peripherals;
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x1234);
        for path in sample_induced_paths(&inst.graph, u, v, &mut rng) {
            debug_assert!(inst.graph.is_induced_path(&PathSeq::new(path.clone())));
            if let Err(msg) = check_path_invariants(&inst.graph, esd, &path) {
                return CriterionResult::fail(4, name, format!("seed {seed}: {msg}"));
            }
            // The lemmas are symmetric in the endpoints.
            let reversed: Vec<usize> = path.iter().rev().copied().collect();
            if let Err(msg) = check_path_invariants(&inst.graph, esd, &reversed) {
                return CriterionResult::fail(4, name, format!("seed {seed} (reversed): {msg}"));
            }
            paths_checked += 1;
        }
    }
    CriterionResult::pass(4, name, format!("{INSTANCES} instances, {paths_checked} induced paths checked"))
}

/// Shared checks for a separator outcome, against the independent oracles.
fn check_separator_outcome(g: &Graph, t: usize, s: &VertexSet, esd: &Esd) -> Result<(), String> {
    if s.len() > 3 * t + 11 {
        return Err(format!("|S| = {} > 3t+11 = {}", s.len(), 3 * t + 11));
    }
    let keep = g.vertex_set().difference(&g.closed_neighborhood(s));
    let report = validate_esd_within(g, &keep, esd);
    if !report.ok() {
        return Err(format!("esd invalid: {}", report.summary()));
    }
    if !is_rigid(esd).ok() {
        return Err("esd not rigid".into());
    }
    let total = g.total_weight();
    for p in esd.particles(g) {
        if !is_half_bounded(p.weight, total) {
            return Err(format!("particle {} weighs {}", p.id, p.weight));
        }
    }
    Ok(())
}

/// Criterion 5: end-to-end separator branch on line graphs with the
/// certificate backend.
pub fn criterion5() -> CriterionResult {
    const INSTANCES: u64 = 200;
    let name = "end-to-end separator branch on line graphs";
    for seed in 0..INSTANCES {
        let t = 1 + (seed as usize % 3);
        let mut params = GenParams::new(Family::LineGraph, 0, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xBEEF);
        params.size = rng.gen_range(6..=60);
        params.density = 0.15;
        params.weight_max = 10;
        let inst = gen_line_graph(&params);
        let Truth::LineGraph(cert) = inst.truth else { unreachable!() };
        let config = BackendConfig {
            line_graph_cert: Some(cert),
            ..Default::default()
        };
        match decompose(&inst.graph, t, &config) {
            Ok(Outcome::Separator { s, esd }) => {
                if let Err(msg) = check_separator_outcome(&inst.graph, t, &s, &esd) {
                    return CriterionResult::fail(5, name, format!("seed {seed} t {t}: {msg}"));
                }
            }
            Ok(Outcome::Sttt(_)) => {
                return CriterionResult::fail(
                    5,
                    name,
                    format!("seed {seed}: spider reported in a claw-free graph"),
                );
            }
            Err(DriverError::Inconclusive(msg)) => {
                return CriterionResult::fail(
                    5,
                    name,
                    format!("seed {seed}: inconclusive with certificate backend: {msg}"),
                );
            }
            Err(e) => {
                return CriterionResult::fail(5, name, format!("seed {seed}: {e}"));
            }
        }
    }
    CriterionResult::pass(5, name, format!("{INSTANCES} line-graph instances, all separators verified"))
}

/// Criterion 6: end-to-end spider branch on planted instances with the
/// exhaustive backend. The theorem is a disjunction, so separator outcomes
/// are verified too.
pub fn criterion6() -> CriterionResult {
    const INSTANCES: u64 = 100;
    let name = "end-to-end spider branch on planted instances";
    let mut spiders = 0usize;
    let mut separators = 0usize;
    let mut inconclusive = 0usize;
    for seed in 0..INSTANCES {
        let t = 1 + (seed as usize % 2);
        let mut params = GenParams::new(Family::PlantedSttt, 0, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xF00D);
        params.size = rng.gen_range(3 * t + 2..=22);
        params.t = t;
        params.density = [0.1, 0.2, 0.3][(seed % 3) as usize];
        params.weight_max = 5;
        let inst = gen_planted_sttt(&params);
        match decompose(&inst.graph, t, &BackendConfig::default()) {
            Ok(Outcome::Sttt(copy)) => {
                if copy.t != t || !verify_sttt(&inst.graph, &copy) {
                    return CriterionResult::fail(6, name, format!("seed {seed}: bad spider"));
                }
                spiders += 1;
            }
            Ok(Outcome::Separator { s, esd }) => {
                if let Err(msg) = check_separator_outcome(&inst.graph, t, &s, &esd) {
                    return CriterionResult::fail(6, name, format!("seed {seed}: {msg}"));
                }
                separators += 1;
            }
            Err(DriverError::Inconclusive(_)) => {
                // The exhaustive backend cannot build the decomposition side;
                // allowed by the disjunction, counted for visibility.
                inconclusive += 1;
            }
            Err(e) => {
                return CriterionResult::fail(6, name, format!("seed {seed}: {e}"));
            }
        }
    }
    // Deterministic long-walk instances guarantee the spider branch runs.
    for t in 1..=2 {
        let g = spider_branch_fixture(t);
        match decompose(&g, t, &BackendConfig::default()) {
            Ok(Outcome::Sttt(copy)) => {
                if copy.t != t || !verify_sttt(&g, &copy) || copy.arms.iter().any(|a| a.len() != t) {
                    return CriterionResult::fail(6, name, format!("spider fixture t={t}: bad copy"));
                }
                spiders += 1;
            }
            other => {
                return CriterionResult::fail(6, name, format!("spider fixture t={t}: expected a spider, got {other:?}"));
            }
        }
    }
    if spiders == 0 {
        return CriterionResult::fail(6, name, "no run exercised the spider branch".into());
    }
    CriterionResult::pass(
        6,
        name,
        format!("{INSTANCES} planted instances + 2 fixtures: {spiders} spiders, {separators} separators, {inconclusive} inconclusive"),
    )
}

/// Hand-built strip fixture for the big-particle branch.
///
/// Host chain x_h - a - p - c - d - q - b - y_h carrying Q1; a heavy strip on
/// (p, q) whose interfaces touch Q1 at four vertices; Q2 on its own pendant
/// strip. Exercises |X| = 4 and the exact bound |S| = 3t+11.
pub struct BigParticleFixture {
    pub graph: Graph,
    pub anchors: Anchors,
    pub keep: VertexSet,
    pub esd: Esd,
    pub heavy_edge: HostEdge,
    pub expected_x: VertexSet,
}

/// Builds the |X| = 4 fixture for a given arm length; `wide_interfaces` puts
/// two vertices in the heavy strip's interfaces to exercise the min-id rule.
pub fn big_particle_fixture(t: usize, wide_interfaces: bool) -> BigParticleFixture {
    // Q1 ids: x, strip(a,p) of t+3, strips (p,c), (c,d), (d,q) of 2 each,
    // strip (q,b) of t+3, y. Then z', Q2 (t+2), then the blob.
    let u1 = t + 3;
    let u2 = t + 4;
    let u3 = t + 9;
    let u4 = t + 10;
    let y = 2 * t + 13;
    let z_prime = 2 * t + 14;
    let z = 2 * t + 15;
    let ell = 3 * t + 16;
    let v_p = 3 * t + 17;
    let w1 = 3 * t + 18;
    let w2 = 3 * t + 19;
    let v_q = 3 * t + 20;
    let n = 3 * t + 21;

    let mut g = Graph::empty(n);
    for i in 0..ell {
        g.add_edge(i, i + 1); // the path Q
    }
    for (a, b) in [(v_p, w1), (w1, w2), (w2, v_q)] {
        g.add_edge(a, b); // blob spine
    }
    for u in [u1, u2] {
        g.add_edge(u, v_p);
        if wide_interfaces {
            g.add_edge(u, w1);
        }
    }
    for u in [u3, u4] {
        g.add_edge(u, v_q);
    }
    let heavy = (2 * t + 9) as u64; // 2H > 3t+15 keeps the particle heavy
    g.set_weight(v_p, heavy);
    g.set_weight(v_q, heavy);

    let q = PathSeq::new((0..=ell).collect());
    assert!(g.is_induced_path(&q));
    let anchors = mark_anchors(&q, t).unwrap();
    assert_eq!(anchors.y, y);
    assert_eq!(anchors.z_prime, z_prime);
    assert_eq!(anchors.z, z);
    assert_eq!(anchors.ell, ell);
    let keep = build_gprime(&g, &anchors).unwrap();

    // Host: 0..=7 is the chain x_h..y_h, (2,5) is the heavy edge, 8-9 the
    // pendant Q2 strip.
    let host = HostGraph::new(
        0..10,
        [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (2, 5), (8, 9)],
    );
    let mut d = Esd::new(host);
    let strip = |all: Vec<usize>, lo: Vec<usize>, hi: Vec<usize>| EdgeSets {
        all: VertexSet::from_unsorted(all),
        at_lo: VertexSet::from_unsorted(lo),
        at_hi: VertexSet::from_unsorted(hi),
    };
    d.set_edge_sets(HostEdge::new(0, 1), strip(vec![0], vec![0], vec![0]));
    d.set_edge_sets(
        HostEdge::new(1, 2),
        strip((1..=u1).collect(), vec![1], vec![u1]),
    );
    d.set_edge_sets(
        HostEdge::new(2, 3),
        strip(vec![u2, t + 5], vec![u2], vec![t + 5]),
    );
    d.set_edge_sets(
        HostEdge::new(3, 4),
        strip(vec![t + 6, t + 7], vec![t + 6], vec![t + 7]),
    );
    d.set_edge_sets(
        HostEdge::new(4, 5),
        strip(vec![t + 8, u3], vec![t + 8], vec![u3]),
    );
    d.set_edge_sets(
        HostEdge::new(5, 6),
        strip((u4..=2 * t + 12).collect(), vec![u4], vec![2 * t + 12]),
    );
    d.set_edge_sets(HostEdge::new(6, 7), strip(vec![y], vec![y], vec![y]));
    let p_interface = if wide_interfaces { vec![v_p, w1] } else { vec![v_p] };
    d.set_edge_sets(
        HostEdge::new(2, 5),
        strip(vec![v_p, w1, w2, v_q], p_interface, vec![v_q]),
    );
    d.set_edge_sets(
        HostEdge::new(8, 9),
        strip((z..=ell).collect(), vec![z], vec![ell]),
    );

    BigParticleFixture {
        graph: g,
        anchors,
        keep,
        esd: d,
        heavy_edge: HostEdge::new(2, 5),
        expected_x: VertexSet::from([u1, u2, u3, u4]),
    }
}

/// Full-pipeline fixture: heavy strip carries Q2 and a weighted tail so the
/// balanced-separator walk traverses the whole path; the oracle backend
/// supplies the decomposition and the driver lands in the big-particle
/// branch with |X| = 2.
pub fn pipeline_big_particle_fixture(t: usize) -> (Graph, Esd, BackendConfig) {
    // Q1: x=0, strip(a,p) ids 1..=t+4 (u1 = t+4), strip(p,b) ids
    // t+5..=2t+8 (u2 = t+5), y = 2t+9. Then z' = 2t+10, Q2 = 2t+11..=3t+12.
    // Blob: beta, h1, h2.
    let u1 = t + 4;
    let u2 = t + 5;
    let y = 2 * t + 9;
    let z = 2 * t + 11;
    let ell = 3 * t + 12;
    let beta = ell + 1;
    let h1 = ell + 2;
    let h2 = ell + 3;
    let n = ell + 4;

    let mut g = Graph::empty(n);
    for i in 0..ell {
        g.add_edge(i, i + 1);
    }
    g.add_edge(beta, h1);
    g.add_edge(h1, h2);
    g.add_edge(h2, ell);
    g.add_edge(u1, beta);
    g.add_edge(u2, beta);
    // The tail pair {h1, h2} must stay above half the total weight right up
    // until the walk takes the last path vertex: 2 * heavy > 3t + 14.
    let heavy = ((3 * t + 14).div_ceil(2) + 1) as u64;
    g.set_weight(h1, heavy);
    g.set_weight(h2, heavy);

    // Host chain 0-1-2-3-4 for Q1, pendant 5 at 2 for the heavy strip.
    let host = HostGraph::new(0..6, [(0, 1), (1, 2), (2, 3), (3, 4), (2, 5)]);
    let mut d = Esd::new(host);
    let strip = |all: Vec<usize>, lo: Vec<usize>, hi: Vec<usize>| EdgeSets {
        all: VertexSet::from_unsorted(all),
        at_lo: VertexSet::from_unsorted(lo),
        at_hi: VertexSet::from_unsorted(hi),
    };
    d.set_edge_sets(HostEdge::new(0, 1), strip(vec![0], vec![0], vec![0]));
    d.set_edge_sets(HostEdge::new(1, 2), strip((1..=u1).collect(), vec![1], vec![u1]));
    d.set_edge_sets(
        HostEdge::new(2, 3),
        strip((u2..=2 * t + 8).collect(), vec![u2], vec![2 * t + 8]),
    );
    d.set_edge_sets(HostEdge::new(3, 4), strip(vec![y], vec![y], vec![y]));
    d.set_edge_sets(
        HostEdge::new(2, 5),
        strip((z..=ell).chain([beta, h1, h2]).collect(), vec![beta], vec![z]),
    );

    let config = BackendConfig {
        oracle_esd: Some(d.clone()),
        ..Default::default()
    };
    (g, d, config)
}

/// Deterministic instance that drives the spider branch: the heavy-tailed
/// path forces the full-length walk, and the pruned graph is itself a tree
/// (beta hangs on a single Q1 vertex), so the exhaustive backend must find an
/// induced tree through the terminals and the driver must extract a spider.
pub fn spider_branch_fixture(t: usize) -> Graph {
    let u1 = t + 4;
    let ell = 3 * t + 12;
    let beta = ell + 1;
    let h1 = ell + 2;
    let h2 = ell + 3;
    let mut g = Graph::empty(ell + 4);
    for i in 0..ell {
        g.add_edge(i, i + 1);
    }
    g.add_edge(beta, h1);
    g.add_edge(h1, h2);
    g.add_edge(h2, ell);
    g.add_edge(u1, beta);
    let heavy = ((3 * t + 14).div_ceil(2) + 1) as u64;
    g.set_weight(h1, heavy);
    g.set_weight(h2, heavy);
    g
}

/// Criterion 7: big-particle branch fixtures.
pub fn criterion7() -> CriterionResult {
    let name = "big-particle branch fixtures";
    let mut fixtures = 0usize;

    // Direct-call fixtures with |X| = 4 and the exact 3t+11 bound.
    for (t, wide) in [(1, false), (1, true), (2, false), (3, false)] {
        let f = big_particle_fixture(t, wide);
        let report = validate_esd_within(&f.graph, &f.keep, &f.esd);
        if !report.ok() {
            return CriterionResult::fail(7, name, format!("t={t} wide={wide}: fixture invalid: {}", report.summary()));
        }
        if !is_rigid(&f.esd).ok() {
            return CriterionResult::fail(7, name, format!("t={t} wide={wide}: fixture not rigid"));
        }
        let parts = match big_particle_separator(&f.graph, &f.keep, &f.anchors, &f.esd, f.heavy_edge) {
            Ok(p) => p,
            Err(e) => {
                return CriterionResult::fail(7, name, format!("t={t} wide={wide}: {e}"));
            }
        };
        if parts.x_set != f.expected_x {
            return CriterionResult::fail(
                7,
                name,
                format!("t={t} wide={wide}: X = {:?}, expected {:?}", parts.x_set, f.expected_x),
            );
        }
        if parts.x_set.len() > 4 || parts.dominators.len() > 2 {
            return CriterionResult::fail(7, name, format!("t={t} wide={wide}: piece bounds violated"));
        }
        if parts.s.len() != 3 * t + 11 {
            return CriterionResult::fail(
                7,
                name,
                format!("t={t} wide={wide}: |S| = {}, expected the exact bound {}", parts.s.len(), 3 * t + 11),
            );
        }
        if !check_separator(&f.graph, &parts.s) {
            return CriterionResult::fail(7, name, format!("t={t} wide={wide}: claim 2 oracle failed"));
        }
        fixtures += 1;
    }

    // Full-pipeline fixtures through the oracle backend.
    for t in 1..=3 {
        let (g, _, config) = pipeline_big_particle_fixture(t);
        match decompose(&g, t, &config) {
            Ok(Outcome::Separator { s, esd }) => {
                if let Err(msg) = check_separator_outcome(&g, t, &s, &esd) {
                    return CriterionResult::fail(7, name, format!("pipeline t={t}: {msg}"));
                }
                if !check_separator(&g, &s) {
                    return CriterionResult::fail(7, name, format!("pipeline t={t}: claim 2 oracle failed"));
                }
            }
            other => {
                return CriterionResult::fail(7, name, format!("pipeline t={t}: unexpected outcome {other:?}"));
            }
        }
        fixtures += 1;
    }

    // Corrupted decomposition: a Q1 vertex inside the heavy strip must be
    // caught as a claim-1 failure.
    let f = big_particle_fixture(1, false);
    let mut bad = f.esd.clone();
    let mut sets = bad.edge_sets(f.heavy_edge).unwrap().clone();
    sets.all.insert(2); // vertex 2 lies on Q1
    bad.set_edge_sets(f.heavy_edge, sets);
    match big_particle_separator(&f.graph, &f.keep, &f.anchors, &bad, f.heavy_edge) {
        Err(DriverError::CertificationFailed { claim, .. }) if claim == "claim 1" => {
            fixtures += 1;
        }
        other => {
            return CriterionResult::fail(7, name, format!("corrupted fixture: expected claim-1 failure, got {other:?}"));
        }
    }

    CriterionResult::pass(7, name, format!("{fixtures} fixtures exercised"))
}

/// Criterion 8: worst-case size accounting and anchor arithmetic.
pub fn criterion8() -> CriterionResult {
    let name = "size accounting and anchor arithmetic";
    for t in 1..=5 {
        if (3 * t + 3) + 4 + 2 + 2 != 3 * t + 11 {
            return CriterionResult::fail(8, name, format!("t={t}: accounting broken"));
        }
        for m in [20, 40] {
            if m <= 3 * t + 11 {
                continue;
            }
            let q = PathSeq::new((0..m).collect());
            let a = match mark_anchors(&q, t) {
                Ok(a) => a,
                Err(e) => return CriterionResult::fail(8, name, format!("t={t} m={m}: {e}")),
            };
            if a.marked.len() != 3 * t + 3 {
                return CriterionResult::fail(
                    8,
                    name,
                    format!("t={t} m={m}: |Y| = {}, expected {}", a.marked.len(), 3 * t + 3),
                );
            }
        }
    }
    CriterionResult::pass(8, name, "t in 1..=5 verified on paths of length 20 and 40".into())
}

/// Criterion 9: terminal degrees in the pruned graph are exactly one on
/// every long-branch run.
pub fn criterion9() -> CriterionResult {
    let name = "terminal degree invariant across end-to-end runs";
    let mut long_runs = 0usize;
    for seed in 0..50u64 {
        // Line-graph instances.
        let t = 1 + (seed as usize % 3);
        let mut params = GenParams::new(Family::LineGraph, 0, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xBEEF);
        params.size = rng.gen_range(6..=60);
        params.density = 0.15;
        let inst = gen_line_graph(&params);
        match long_branch_degree_check(&inst.graph, t) {
            Err(err) => return CriterionResult::fail(9, name, format!("line-graph seed {seed}: {err}")),
            Ok(long) => long_runs += long as usize,
        }

        // Planted spiders.
        let t = 1 + (seed as usize % 2);
        let mut params = GenParams::new(Family::PlantedSttt, 0, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xF00D);
        params.size = rng.gen_range(3 * t + 2..=22);
        params.t = t;
        params.density = 0.2;
        let inst = gen_planted_sttt(&params);
        match long_branch_degree_check(&inst.graph, t) {
            Err(err) => return CriterionResult::fail(9, name, format!("planted seed {seed}: {err}")),
            Ok(long) => long_runs += long as usize,
        }
    }
    CriterionResult::pass(9, name, format!("{long_runs} long-branch runs, all terminal degrees exactly 1"))
}

/// Ok(true) when the instance takes the long branch and all three terminals
/// have degree exactly 1 in the pruned graph.
fn long_branch_degree_check(g: &Graph, t: usize) -> Result<bool, String> {
    let q = gyarfas_path(g).path;
    if q.len() <= 3 * t + 11 {
        return Ok(false);
    }
    let anchors = mark_anchors(&q, t).map_err(|e| e.to_string())?;
    let keep = build_gprime(g, &anchors).map_err(|e| e.to_string())?;
    for term in [anchors.x, anchors.y, anchors.z] {
        if g.degree_in(term, &keep) != 1 {
            return Err(format!("terminal {term} has degree != 1"));
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pipeline_fixture_is_sound() {
        for t in 1..=2 {
            let (g, d, _) = pipeline_big_particle_fixture(t);
            // The oracle decomposition matches the pruned graph.
            let q = gyarfas_path(&g).path;
            assert!(q.len() > 3 * t + 11, "walk must produce the full path");
            let anchors = mark_anchors(&q, t).unwrap();
            let keep = build_gprime(&g, &anchors).unwrap();
            assert!(validate_esd_within(&g, &keep, &d).ok());
        }
    }

    #[test]
    fn mutation_kinds_available() {
        let inst = gen_planted_esd(&esd_params(3));
        let Truth::Esd { esd, .. } = &inst.truth else { panic!() };
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for kind in 0..3 {
            assert!(pick_mutation(esd, &mut rng, kind).is_some());
        }
    }
}
