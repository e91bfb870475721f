//! Group-labeled undirected social networks.
//!
//! Nodes carry a binary community label and are addressed by dense integer
//! ids `0..node_count`. External string ids from data files are remapped on
//! load and kept around so seedsets can be reported in the original labels.

use std::collections::HashMap;
use std::collections::VecDeque;
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub type NodeId = u32;

/// Community label. Exactly two groups, as in the two-community setting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Group {
    One,
    Two,
}

impl Group {
    pub fn index(self) -> usize {
        match self {
            Group::One => 0,
            Group::Two => 1,
        }
    }

    pub fn other(self) -> Group {
        match self {
            Group::One => Group::Two,
            Group::Two => Group::One,
        }
    }

    pub fn parse(token: &str) -> Option<Group> {
        match token.trim() {
            "1" => Some(Group::One),
            "2" => Some(Group::Two),
            _ => None,
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index() + 1)
    }
}

/// Immutable undirected graph with a group label per node.
///
/// Adjacency is CSR with neighbor lists sorted ascending; `edge_ids` gives
/// the undirected edge index of each adjacency slot, so both directions of
/// an edge share one id (the cascade model flips one coin per edge).
#[derive(Debug, Clone)]
pub struct SocialGraph {
    offsets: Vec<usize>,
    neighbors: Vec<NodeId>,
    edge_ids: Vec<u32>,
    groups: Vec<Group>,
    group_sizes: [usize; 2],
    /// Canonical edge list, u < v, sorted.
    edges: Vec<(NodeId, NodeId)>,
    external_ids: Vec<String>,
}

impl SocialGraph {
    /// Build a graph from a clean edge list.
    ///
    /// Rejects self-loops, duplicate edges and out-of-range endpoints;
    /// callers ingesting untrusted files should clean first (`load_graph`
    /// does). External ids default to the stringified node index.
    pub fn new(groups: Vec<Group>, edges: &[(NodeId, NodeId)]) -> Result<Self> {
        let external = (0..groups.len()).map(|i| i.to_string()).collect();
        Self::with_external_ids(groups, edges, external)
    }

    pub fn with_external_ids(
        groups: Vec<Group>,
        edges: &[(NodeId, NodeId)],
        external_ids: Vec<String>,
    ) -> Result<Self> {
        let n = groups.len();
        if n == 0 {
            return Err(Error::Config("graph must have at least one node".into()));
        }
        if external_ids.len() != n {
            return Err(Error::Config(
                "external id list length must match node count".into(),
            ));
        }
        let mut canonical: Vec<(NodeId, NodeId)> = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u as usize >= n || v as usize >= n {
                return Err(Error::SeedOutOfRange {
                    id: u.max(v),
                    node_count: n,
                });
            }
            if u == v {
                return Err(Error::Config(format!("self-loop at node {u}")));
            }
            canonical.push((u.min(v), u.max(v)));
        }
        canonical.sort_unstable();
        if canonical.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Config("duplicate edge in edge list".into()));
        }

        let mut degree = vec![0usize; n];
        for &(u, v) in &canonical {
            degree[u as usize] += 1;
            degree[v as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0usize);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let total = *offsets.last().unwrap();
        let mut neighbors = vec![0 as NodeId; total];
        let mut edge_ids = vec![0u32; total];
        let mut cursor = offsets[..n].to_vec();
        for (eid, &(u, v)) in canonical.iter().enumerate() {
            neighbors[cursor[u as usize]] = v;
            edge_ids[cursor[u as usize]] = eid as u32;
            cursor[u as usize] += 1;
            neighbors[cursor[v as usize]] = u;
            edge_ids[cursor[v as usize]] = eid as u32;
            cursor[v as usize] += 1;
        }
        // canonical order already leaves each neighbor list sorted for the
        // lower endpoint; sort per node to make it true for both.
        for v in 0..n {
            let range = offsets[v]..offsets[v + 1];
            let mut pairs: Vec<(NodeId, u32)> = neighbors[range.clone()]
                .iter()
                .copied()
                .zip(edge_ids[range.clone()].iter().copied())
                .collect();
            pairs.sort_unstable();
            for (slot, (nb, eid)) in range.clone().zip(pairs) {
                neighbors[slot] = nb;
                edge_ids[slot] = eid;
            }
        }

        let mut group_sizes = [0usize; 2];
        for g in &groups {
            group_sizes[g.index()] += 1;
        }

        Ok(SocialGraph {
            offsets,
            neighbors,
            edge_ids,
            groups,
            group_sizes,
            edges: canonical,
            external_ids,
        })
    }

    pub fn node_count(&self) -> usize {
        self.groups.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.node_count() as NodeId).into_iter()
    }

    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        let v = v as usize;
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    /// Neighbor slots of `v` paired with their undirected edge ids.
    pub fn incident(&self, v: NodeId) -> impl Iterator<Item = (NodeId, u32)> + '_ {
        let v = v as usize;
        let range = self.offsets[v]..self.offsets[v + 1];
        self.neighbors[range.clone()]
            .iter()
            .copied()
            .zip(self.edge_ids[range].iter().copied())
    }

    pub fn degree(&self, v: NodeId) -> usize {
        let v = v as usize;
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn group(&self, v: NodeId) -> Group {
        self.groups[v as usize]
    }

    pub fn group_size(&self, g: Group) -> usize {
        self.group_sizes[g.index()]
    }

    /// Nodes of one group, ascending.
    pub fn members(&self, g: Group) -> Vec<NodeId> {
        self.nodes().filter(|&v| self.group(v) == g).collect()
    }

    pub fn edges(&self) -> &[(NodeId, NodeId)] {
        &self.edges
    }

    pub fn external_id(&self, v: NodeId) -> &str {
        &self.external_ids[v as usize]
    }

    pub fn contains(&self, v: NodeId) -> bool {
        (v as usize) < self.node_count()
    }

    /// Errors unless both groups are inhabited. Metric operations divide by
    /// group sizes and must call this first.
    pub fn require_both_groups(&self) -> Result<()> {
        for g in [Group::One, Group::Two] {
            if self.group_size(g) == 0 {
                return Err(Error::EmptyGroup {
                    group: g.index() as u8 + 1,
                });
            }
        }
        Ok(())
    }

    /// Subgraph induced on `nodes`; returns the graph and the mapping from
    /// new ids to the original ones.
    pub fn induced_subgraph(&self, nodes: &[NodeId]) -> Result<(SocialGraph, Vec<NodeId>)> {
        let mut index: HashMap<NodeId, NodeId> = HashMap::with_capacity(nodes.len());
        for (i, &v) in nodes.iter().enumerate() {
            if !self.contains(v) {
                return Err(Error::SeedOutOfRange {
                    id: v,
                    node_count: self.node_count(),
                });
            }
            if index.insert(v, i as NodeId).is_some() {
                return Err(Error::DuplicateSeed { id: v });
            }
        }
        let groups = nodes.iter().map(|&v| self.group(v)).collect();
        let external = nodes
            .iter()
            .map(|&v| self.external_id(v).to_string())
            .collect();
        let mut edges = Vec::new();
        for &(u, v) in &self.edges {
            if let (Some(&nu), Some(&nv)) = (index.get(&u), index.get(&v)) {
                edges.push((nu, nv));
            }
        }
        let sub = SocialGraph::with_external_ids(groups, &edges, external)?;
        Ok((sub, nodes.to_vec()))
    }

    /// BFS distances from `source`; unreachable nodes get `usize::MAX`.
    pub fn bfs_distances(&self, source: NodeId) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.node_count()];
        let mut queue = VecDeque::new();
        dist[source as usize] = 0;
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let du = dist[u as usize];
            for &v in self.neighbors(u) {
                if dist[v as usize] == usize::MAX {
                    dist[v as usize] = du + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Connected components as (component id per node, component count).
    pub fn components(&self) -> (Vec<usize>, usize) {
        let n = self.node_count();
        let mut comp = vec![usize::MAX; n];
        let mut count = 0;
        for start in 0..n as NodeId {
            if comp[start as usize] != usize::MAX {
                continue;
            }
            let mut queue = VecDeque::new();
            comp[start as usize] = count;
            queue.push_back(start);
            while let Some(u) = queue.pop_front() {
                for &v in self.neighbors(u) {
                    if comp[v as usize] == usize::MAX {
                        comp[v as usize] = count;
                        queue.push_back(v);
                    }
                }
            }
            count += 1;
        }
        (comp, count)
    }

    /// Max over connected components of the component diameter.
    pub fn max_component_diameter(&self) -> usize {
        let mut best = 0usize;
        for v in self.nodes() {
            let ecc = self
                .bfs_distances(v)
                .into_iter()
                .filter(|&d| d != usize::MAX)
                .max()
                .unwrap_or(0);
            best = best.max(ecc);
        }
        best
    }
}

/// Structural summary of a graph, one row of the dataset table.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupCensus {
    pub node_count: usize,
    pub edge_count: usize,
    pub size_g1: usize,
    pub size_g2: usize,
    pub cross_edge_fraction: f64,
    pub avg_degree: f64,
    /// Max over connected components of the component diameter.
    pub diameter: usize,
    /// Diameter of the largest component alone; some published tables use
    /// this convention instead, so both are reported.
    pub largest_component_diameter: usize,
}

/// Exact structural counts; diameters by BFS from every node.
pub fn census(g: &SocialGraph) -> GroupCensus {
    let n = g.node_count();
    let m = g.edge_count();
    let cross = g
        .edges()
        .iter()
        .filter(|&&(u, v)| g.group(u) != g.group(v))
        .count();
    let (comp, count) = g.components();
    let mut comp_sizes = vec![0usize; count];
    for &c in &comp {
        comp_sizes[c] += 1;
    }
    let largest = comp_sizes
        .iter()
        .enumerate()
        .max_by_key(|&(i, &s)| (s, std::cmp::Reverse(i)))
        .map(|(i, _)| i)
        .unwrap_or(0);

    let mut diameter = 0usize;
    let mut largest_diameter = 0usize;
    for v in g.nodes() {
        let ecc = g
            .bfs_distances(v)
            .into_iter()
            .filter(|&d| d != usize::MAX)
            .max()
            .unwrap_or(0);
        diameter = diameter.max(ecc);
        if comp[v as usize] == largest {
            largest_diameter = largest_diameter.max(ecc);
        }
    }

    GroupCensus {
        node_count: n,
        edge_count: m,
        size_g1: g.group_size(Group::One),
        size_g2: g.group_size(Group::Two),
        cross_edge_fraction: if m == 0 { 0.0 } else { cross as f64 / m as f64 },
        avg_degree: 2.0 * m as f64 / n as f64,
        diameter,
        largest_component_diameter: largest_diameter,
    }
}

/// Ingestion report: how much cleanup the input needed.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LoadReport {
    pub self_loops_dropped: usize,
    pub duplicate_edges_dropped: usize,
}

/// Load a graph from an edge file and a node-attribute file.
///
/// Edge file: one edge per line, two whitespace-separated tokens, `#`
/// comment lines ignored. Attribute file: `node,group` rows with group in
/// {1, 2}; an optional `node,group` header is skipped. The attribute file
/// defines the node universe (isolated nodes are allowed); every edge
/// endpoint must have an attribute row.
pub fn load_graph(edge_file: &Path, attribute_file: &Path) -> Result<(SocialGraph, LoadReport)> {
    let attr_path = attribute_file.display().to_string();
    let mut ids: Vec<String> = Vec::new();
    let mut groups: Vec<Group> = Vec::new();
    let mut index: HashMap<String, NodeId> = HashMap::new();

    let reader = BufReader::new(File::open(attribute_file)?);
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut parts = trimmed.splitn(2, ',');
        let id = parts.next().unwrap_or("").trim().to_string();
        let group_tok = parts.next().map(str::trim).ok_or_else(|| Error::Parse {
            path: attr_path.clone(),
            line: lineno + 1,
            message: "expected 'node,group'".into(),
        })?;
        let group = match Group::parse(group_tok) {
            Some(gr) => gr,
            None => {
                // tolerate a single header row
                if lineno == 0 && id.eq_ignore_ascii_case("node") {
                    continue;
                }
                return Err(Error::InvalidGroup {
                    id,
                    value: group_tok.to_string(),
                });
            }
        };
        if index.contains_key(&id) {
            return Err(Error::Parse {
                path: attr_path.clone(),
                line: lineno + 1,
                message: format!("duplicate attribute row for node '{id}'"),
            });
        }
        index.insert(id.clone(), ids.len() as NodeId);
        ids.push(id);
        groups.push(group);
    }
    if ids.is_empty() {
        return Err(Error::Parse {
            path: attr_path,
            line: 0,
            message: "attribute file defines no nodes".into(),
        });
    }

    let edge_path = edge_file.display().to_string();
    let mut report = LoadReport::default();
    let mut seen: HashMap<(NodeId, NodeId), ()> = HashMap::new();
    let mut edges: Vec<(NodeId, NodeId)> = Vec::new();
    let reader = BufReader::new(File::open(edge_file)?);
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut toks = trimmed.split_whitespace();
        let (a, b) = match (toks.next(), toks.next(), toks.next()) {
            (Some(a), Some(b), None) => (a, b),
            _ => {
                return Err(Error::Parse {
                    path: edge_path.clone(),
                    line: lineno + 1,
                    message: "expected 'u v'".into(),
                })
            }
        };
        let u = *index.get(a).ok_or_else(|| Error::MissingAttribute {
            id: a.to_string(),
        })?;
        let v = *index.get(b).ok_or_else(|| Error::MissingAttribute {
            id: b.to_string(),
        })?;
        if u == v {
            report.self_loops_dropped += 1;
            continue;
        }
        let key = (u.min(v), u.max(v));
        if seen.insert(key, ()).is_some() {
            report.duplicate_edges_dropped += 1;
            continue;
        }
        edges.push(key);
    }

    let graph = SocialGraph::with_external_ids(groups, &edges, ids)?;
    Ok((graph, report))
}

/// Write a graph back out in the load format (original external ids).
pub fn save_graph(g: &SocialGraph, edge_file: &Path, attribute_file: &Path) -> Result<()> {
    let mut ef = BufWriter::new(File::create(edge_file)?);
    for &(u, v) in g.edges() {
        writeln!(ef, "{} {}", g.external_id(u), g.external_id(v))?;
    }
    ef.flush()?;
    let mut af = BufWriter::new(File::create(attribute_file)?);
    writeln!(af, "node,group")?;
    for v in g.nodes() {
        writeln!(af, "{},{}", g.external_id(v), g.group(v))?;
    }
    af.flush()?;
    Ok(())
}

/// Two-block stochastic block model: group 1 holds nodes `0..n1`, group 2
/// the rest; each within-block pair is an edge with probability `p_in`,
/// each cross-block pair with probability `p_out`. Deterministic in
/// `rng_seed`.
pub fn generate_sbm(
    n1: usize,
    n2: usize,
    p_in: f64,
    p_out: f64,
    rng_seed: u64,
) -> Result<SocialGraph> {
    for p in [p_in, p_out] {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidProbability(p));
        }
    }
    let n = n1 + n2;
    if n == 0 {
        return Err(Error::Config("SBM needs at least one node".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            let p = if (u < n1) == (v < n1) { p_in } else { p_out };
            if rng.gen::<f64>() < p {
                edges.push((u as NodeId, v as NodeId));
            }
        }
    }
    let groups = (0..n)
        .map(|i| if i < n1 { Group::One } else { Group::Two })
        .collect();
    SocialGraph::new(groups, &edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write_tmp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    fn triangle() -> SocialGraph {
        SocialGraph::new(
            vec![Group::One, Group::One, Group::Two],
            &[(0, 1), (1, 2), (0, 2)],
        )
        .unwrap()
    }

    #[test]
    fn triangle_census() {
        let c = census(&triangle());
        assert_eq!(c.node_count, 3);
        assert_eq!(c.edge_count, 3);
        assert_eq!(c.size_g1, 2);
        assert_eq!(c.size_g2, 1);
        assert!((c.cross_edge_fraction - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(c.diameter, 1);
    }

    #[test]
    fn load_drops_self_loops_and_duplicates() {
        let edges = write_tmp("a b\nb c\na c\na a\nb a\n# comment\n");
        let attrs = write_tmp("a,1\nb,1\nc,2\n");
        let (g, report) = load_graph(edges.path(), attrs.path()).unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge_count(), 3);
        assert_eq!(report.self_loops_dropped, 1);
        assert_eq!(report.duplicate_edges_dropped, 1);
        let c = census(&g);
        assert!((c.cross_edge_fraction - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn load_rejects_missing_attribute() {
        let edges = write_tmp("a b\nb d\n");
        let attrs = write_tmp("a,1\nb,2\n");
        match load_graph(edges.path(), attrs.path()) {
            Err(Error::MissingAttribute { id }) => assert_eq!(id, "d"),
            other => panic!("expected MissingAttribute, got {other:?}"),
        }
    }

    #[test]
    fn load_rejects_bad_group() {
        let edges = write_tmp("a b\n");
        let attrs = write_tmp("a,1\nb,3\n");
        match load_graph(edges.path(), attrs.path()) {
            Err(Error::InvalidGroup { id, value }) => {
                assert_eq!(id, "b");
                assert_eq!(value, "3");
            }
            other => panic!("expected InvalidGroup, got {other:?}"),
        }
    }

    #[test]
    fn load_accepts_header_row() {
        let edges = write_tmp("x y\n");
        let attrs = write_tmp("node,group\nx,1\ny,2\n");
        let (g, _) = load_graph(edges.path(), attrs.path()).unwrap();
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.external_id(0), "x");
    }

    #[test]
    fn single_cross_edge_census() {
        let g = SocialGraph::new(vec![Group::One, Group::Two], &[(0, 1)]).unwrap();
        let c = census(&g);
        assert_eq!(c.cross_edge_fraction, 1.0);
        assert_eq!(c.diameter, 1);
    }

    #[test]
    fn path_graph_census() {
        let g = SocialGraph::new(vec![Group::One; 3], &[(0, 1), (1, 2)]).unwrap();
        let c = census(&g);
        assert_eq!(c.diameter, 2);
        assert_eq!(c.size_g2, 0);
    }

    #[test]
    fn disconnected_diameter_is_component_max() {
        // path of 4 (diameter 3) plus an isolated edge
        let g = SocialGraph::new(
            vec![Group::One; 6],
            &[(0, 1), (1, 2), (2, 3), (4, 5)],
        )
        .unwrap();
        let c = census(&g);
        assert_eq!(c.diameter, 3);
        assert_eq!(c.largest_component_diameter, 3);
    }

    /// A 90-node, 238-edge instance shaped like the village dataset row:
    /// average degree 5.29, diameter 13. A 14-node path fixes the diameter;
    /// a dense hub cluster glued to its midpoint supplies the rest.
    #[test]
    fn village_shaped_census() {
        let mut edges: Vec<(NodeId, NodeId)> = (0..13).map(|i| (i, i + 1)).collect();
        edges.push((7, 14)); // attach the cluster hub to the path midpoint
        for v in 15..90 {
            edges.push((14, v)); // spokes
        }
        for i in 15..89 {
            edges.push((i, i + 1));
        }
        for i in 15..88 {
            edges.push((i, i + 2));
        }
        edges.push((15, 18));
        edges.push((16, 19));
        let groups: Vec<Group> = (0..90)
            .map(|v| if v % 4 == 0 { Group::Two } else { Group::One })
            .collect();
        let g = SocialGraph::new(groups, &edges).unwrap();
        let c = census(&g);
        assert_eq!(c.node_count, 90);
        assert_eq!(c.edge_count, 238);
        assert!((c.avg_degree - 5.29).abs() < 0.01, "avg degree {}", c.avg_degree);
        assert_eq!(c.diameter, 13);
        assert_eq!(c.largest_component_diameter, 13);
    }

    /// Diameter against an independent Floyd–Warshall oracle.
    #[test]
    fn census_diameter_matches_apsp_oracle() {
        let g = generate_sbm(12, 8, 0.25, 0.05, 9).unwrap();
        let n = g.node_count();
        let inf = usize::MAX / 4;
        let mut dist = vec![vec![inf; n]; n];
        for v in 0..n {
            dist[v][v] = 0;
        }
        for &(u, v) in g.edges() {
            dist[u as usize][v as usize] = 1;
            dist[v as usize][u as usize] = 1;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let via = dist[i][k] + dist[k][j];
                    if via < dist[i][j] {
                        dist[i][j] = via;
                    }
                }
            }
        }
        let oracle = dist
            .iter()
            .flatten()
            .filter(|&&d| d < inf)
            .max()
            .copied()
            .unwrap();
        assert_eq!(census(&g).diameter, oracle);
    }

    #[test]
    fn sbm_extremes() {
        let g = generate_sbm(4, 3, 1.0, 0.0, 1).unwrap();
        let c = census(&g);
        assert_eq!(c.edge_count, 4 * 3 / 2 + 3 * 2 / 2);
        assert_eq!(c.cross_edge_fraction, 0.0);

        let g = generate_sbm(4, 3, 0.0, 1.0, 1).unwrap();
        let c = census(&g);
        assert_eq!(c.edge_count, 12);
        assert_eq!(c.cross_edge_fraction, 1.0);
    }

    #[test]
    fn sbm_cross_edges_match_binomial_mean() {
        // n1=n2=50, p_out=0.02: expected cross edges = 50*50*0.02 = 50.
        let mut total = 0usize;
        let runs = 100;
        for seed in 0..runs {
            let g = generate_sbm(50, 50, 0.1, 0.02, seed).unwrap();
            total += g
                .edges()
                .iter()
                .filter(|&&(u, v)| g.group(u) != g.group(v))
                .count();
        }
        let mean = total as f64 / runs as f64;
        let sigma = (2500.0 * 0.02 * 0.98 / runs as f64).sqrt();
        assert!(
            (mean - 50.0).abs() <= 3.0 * sigma,
            "mean {mean} outside 3 sigma of 50"
        );
    }

    #[test]
    fn sbm_is_reproducible() {
        let a = generate_sbm(20, 20, 0.2, 0.05, 77).unwrap();
        let b = generate_sbm(20, 20, 0.2, 0.05, 77).unwrap();
        assert_eq!(a.edges(), b.edges());
    }

    #[test]
    fn save_load_round_trip_preserves_census() {
        let g = generate_sbm(15, 10, 0.3, 0.1, 5).unwrap();
        let ef = tempfile::NamedTempFile::new().unwrap();
        let af = tempfile::NamedTempFile::new().unwrap();
        save_graph(&g, ef.path(), af.path()).unwrap();
        let (g2, report) = load_graph(ef.path(), af.path()).unwrap();
        assert_eq!(report, LoadReport::default());
        assert_eq!(census(&g), census(&g2));
    }

    #[test]
    fn cross_edge_fraction_invariant_under_relabeling() {
        let g = generate_sbm(10, 10, 0.3, 0.1, 3).unwrap();
        let n = g.node_count();
        // reverse node order
        let perm: Vec<NodeId> = (0..n as NodeId).rev().collect();
        let groups: Vec<Group> = (0..n).map(|i| g.group(perm[i])).collect();
        let edges: Vec<(NodeId, NodeId)> = g
            .edges()
            .iter()
            .map(|&(u, v)| {
                let pu = perm.iter().position(|&x| x == u).unwrap() as NodeId;
                let pv = perm.iter().position(|&x| x == v).unwrap() as NodeId;
                (pu, pv)
            })
            .collect();
        let h = SocialGraph::new(groups, &edges).unwrap();
        let (cg, ch) = (census(&g), census(&h));
        assert_eq!(cg.cross_edge_fraction, ch.cross_edge_fraction);
        assert_eq!(cg.diameter, ch.diameter);
    }

    #[test]
    fn induced_subgraph_keeps_internal_edges() {
        let g = triangle();
        let (sub, map) = g.induced_subgraph(&[0, 1]).unwrap();
        assert_eq!(sub.node_count(), 2);
        assert_eq!(sub.edge_count(), 1);
        assert_eq!(map, vec![0, 1]);
    }
}
