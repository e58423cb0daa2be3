//! End-to-end driver runs on concrete instances.

use sttt_core::decomposer::{decompose, BackendConfig, Outcome};
use sttt_core::esd::{is_rigid, validate_esd_within};
use sttt_core::gen::{check_separator, gen_planted_sttt, Family, GenParams, Truth};
use sttt_core::graph::{Graph, VertexSet};
use sttt_core::sttt::verify_sttt;
use sttt_core::tiat::LineGraphCert;

fn verify_separator(g: &Graph, t: usize, s: &VertexSet, esd: &sttt_core::esd::Esd) {
    assert!(s.len() <= 3 * t + 11);
    let keep = g.vertex_set().difference(&g.closed_neighborhood(s));
    assert!(validate_esd_within(g, &keep, esd).ok());
    assert!(is_rigid(esd).ok());
    let total = g.total_weight();
    for p in esd.particles(g) {
        assert!(2 * p.weight <= total, "particle {} too heavy", p.id);
    }
    // Component smallness is the particle bound only when the host is
    // edgeless; a non-trivial decomposition may split a heavy component.
    if esd.host().edges().is_empty() {
        assert!(check_separator(g, s));
    }
}

#[test]
fn c5_takes_the_short_branch() {
    let g = Graph::cycle(5);
    match decompose(&g, 1, &BackendConfig::default()).unwrap() {
        Outcome::Separator { s, esd } => {
            assert_eq!(s, VertexSet::singleton(0));
            verify_separator(&g, 1, &s, &esd);
        }
        other => panic!("unexpected outcome {other:?}"),
    }
}

/// C60 is the line graph of C60; with the certificate backend the driver
/// walks the long branch and lands on a separator.
#[test]
fn c60_long_branch_with_certificate() {
    let n = 60;
    let g = Graph::cycle(n);
    let root = Graph::cycle(n);
    // Root edge (i, i+1) carries vertex i; the closing edge (0, n-1)
    // carries n-1.
    let edge_map = root
        .edges()
        .into_iter()
        .map(|(u, v)| ((u, v), if (u, v) == (0, n - 1) { n - 1 } else { u }))
        .collect();
    let cert = LineGraphCert { root, edge_map };
    cert.verify_against(&g).expect("cycle is its own line graph");

    let config = BackendConfig {
        line_graph_cert: Some(cert),
        ..Default::default()
    };
    for t in 1..=3 {
        match decompose(&g, t, &config).unwrap() {
            Outcome::Separator { s, esd } => {
                assert!(!s.is_empty());
                verify_separator(&g, t, &s, &esd);
            }
            other => panic!("t={t}: unexpected outcome {other:?}"),
        }
    }
}

#[test]
fn random_planted_instances_give_verified_outcomes() {
    for seed in [2u64, 11, 23, 41] {
        let mut params = GenParams::new(Family::PlantedSttt, 20, seed);
        params.t = 1;
        params.density = 0.25;
        let inst = gen_planted_sttt(&params);
        let Truth::Sttt(_) = &inst.truth else { panic!() };
        match decompose(&inst.graph, 1, &BackendConfig::default()) {
            Ok(Outcome::Sttt(copy)) => {
                assert_eq!(copy.t, 1);
                assert!(verify_sttt(&inst.graph, &copy));
            }
            Ok(Outcome::Separator { s, esd }) => {
                verify_separator(&inst.graph, 1, &s, &esd);
            }
            Err(e) => panic!("seed {seed}: {e}"),
        }
    }
}

/// A heavy-tailed path whose pruned graph is a tree must land in the spider
/// branch with arms of length exactly t.
#[test]
fn spider_branch_fixture_yields_copies() {
    for t in 1..=3 {
        let g = sttt_core::selftest::spider_branch_fixture(t);
        match decompose(&g, t, &BackendConfig::default()).unwrap() {
            Outcome::Sttt(copy) => {
                assert_eq!(copy.t, t);
                assert!(verify_sttt(&g, &copy));
                assert!(copy.arms.iter().all(|a| a.len() == t));
            }
            other => panic!("t={t}: expected spider, got {other:?}"),
        }
    }
}

/// The mixed case: a line graph too small for the long branch still yields a
/// verified separator without any backend.
#[test]
fn small_graphs_need_no_backend() {
    for n in 1..=12 {
        let g = Graph::path(n);
        match decompose(&g, 1, &BackendConfig::default()).unwrap() {
            Outcome::Separator { s, esd } => verify_separator(&g, 1, &s, &esd),
            other => panic!("unexpected outcome {other:?}"),
        }
    }
}
