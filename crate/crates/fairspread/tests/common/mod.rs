//! Shared fixtures for the integration suites.

use fairspread::graph::{Group, NodeId, SocialGraph};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Two-block graph with separate within-block densities, for homophily
/// scenarios where one community is denser than the other. Group 1 holds
/// nodes 0..n1.
pub fn two_block_graph(
    n1: usize,
    n2: usize,
    p_in1: f64,
    p_in2: f64,
    p_cross: f64,
    seed: u64,
) -> SocialGraph {
    let n = n1 + n2;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            let p = match (u < n1, v < n1) {
                (true, true) => p_in1,
                (false, false) => p_in2,
                _ => p_cross,
            };
            if rng.gen::<f64>() < p {
                edges.push((u as NodeId, v as NodeId));
            }
        }
    }
    let groups = (0..n)
        .map(|i| if i < n1 { Group::One } else { Group::Two })
        .collect();
    SocialGraph::new(groups, &edges).expect("generated edges are clean")
}

/// Uniformly random connected-ish sparse graph with both groups nonempty
/// and at most `max_edges` edges (for live-edge enumeration).
pub fn small_random_graph(
    nodes: usize,
    max_edges: usize,
    seed: u64,
) -> SocialGraph {
    assert!(nodes >= 2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs: Vec<(NodeId, NodeId)> = (0..nodes as NodeId)
        .flat_map(|u| ((u + 1)..nodes as NodeId).map(move |v| (u, v)))
        .collect();
    // Fisher-Yates, then take a prefix
    for i in (1..pairs.len()).rev() {
        let j = rng.gen_range(0..=i);
        pairs.swap(i, j);
    }
    let edge_count = rng.gen_range(nodes.saturating_sub(1).max(1)..=max_edges.min(pairs.len()));
    let edges = &pairs[..edge_count];
    let split = rng.gen_range(1..nodes);
    let groups = (0..nodes)
        .map(|i| if i < split { Group::One } else { Group::Two })
        .collect();
    SocialGraph::new(groups, edges).expect("generated edges are clean")
}
