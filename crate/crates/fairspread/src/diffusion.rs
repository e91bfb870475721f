//! Independent cascade simulation and outreach estimation.
//!
//! One cascade activates the seeds, then runs synchronous rounds: every
//! node activated in the previous round gets one Bernoulli(p) attempt per
//! still-inactive neighbor. Because an undirected edge is attempted at most
//! once per realization, drawing the coin per (realization, edge) pair via
//! a hash reproduces the classical live-edge coupling while keeping the
//! simulation order-independent — realizations can run on any number of
//! workers and aggregate to bit-identical results.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Group, NodeId, SocialGraph};
use crate::metrics::DiscreteDistribution2D;
use crate::rng::{edge_coin, stream, tag};

/// Histogram grid resolution per axis.
pub const HIST_BINS: usize = 100;

/// Per-group activated fractions of one realization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FinalConfiguration {
    pub x1: f64,
    pub x2: f64,
}

impl FinalConfiguration {
    pub fn as_point(self) -> (f64, f64) {
        (self.x1, self.x2)
    }
}

/// Empirical joint outreach distribution: N equally weighted samples.
#[derive(Debug, Clone, PartialEq)]
pub struct OutreachDistribution {
    samples: Vec<FinalConfiguration>,
}

impl OutreachDistribution {
    pub fn from_samples(samples: Vec<FinalConfiguration>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::ZeroRealizations);
        }
        Ok(OutreachDistribution { samples })
    }

    pub fn samples(&self) -> &[FinalConfiguration] {
        &self.samples
    }

    pub fn realization_count(&self) -> usize {
        self.samples.len()
    }

    pub fn mean_x1(&self) -> f64 {
        self.samples.iter().map(|s| s.x1).sum::<f64>() / self.samples.len() as f64
    }

    pub fn mean_x2(&self) -> f64 {
        self.samples.iter().map(|s| s.x2).sum::<f64>() / self.samples.len() as f64
    }

    /// Bin the samples onto the fixed grid over the unit square.
    pub fn histogram(&self) -> Histogram2D {
        let w = 1.0 / self.samples.len() as f64;
        let mut hist = Histogram2D::zero();
        for s in &self.samples {
            let (i, j) = (bin_of(s.x1), bin_of(s.x2));
            hist.mass[i * HIST_BINS + j] += w;
        }
        hist
    }

    /// CSV with header `x1,x2,weight`, one row per sample.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "x1,x2,weight")?;
        let w = 1.0 / self.samples.len() as f64;
        for s in &self.samples {
            writeln!(out, "{},{},{}", s.x1, s.x2, w)?;
        }
        Ok(())
    }
}

/// Parse an `x1,x2,weight` CSV back into a weighted distribution.
pub fn read_outreach_csv<R: BufRead>(input: R) -> Result<DiscreteDistribution2D> {
    let mut points = Vec::new();
    let mut weights = Vec::new();
    for (lineno, line) in input.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || (lineno == 0 && trimmed.starts_with("x1")) {
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').collect();
        if fields.len() != 3 {
            return Err(Error::Parse {
                path: "<outreach csv>".into(),
                line: lineno + 1,
                message: "expected 'x1,x2,weight'".into(),
            });
        }
        let parse = |s: &str| -> Result<f64> {
            s.trim().parse().map_err(|_| Error::Parse {
                path: "<outreach csv>".into(),
                line: lineno + 1,
                message: format!("bad number '{s}'"),
            })
        };
        points.push((parse(fields[0])?, parse(fields[1])?));
        weights.push(parse(fields[2])?);
    }
    DiscreteDistribution2D::new(points, weights)
}

/// Fixed-grid joint histogram over the unit square.
///
/// Bins are left-closed, right-open; the point 1.0 joins the last bin.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram2D {
    mass: Vec<f64>,
}

#[inline]
pub fn bin_of(x: f64) -> usize {
    ((x * HIST_BINS as f64) as usize).min(HIST_BINS - 1)
}

impl Histogram2D {
    fn zero() -> Self {
        Histogram2D {
            mass: vec![0.0; HIST_BINS * HIST_BINS],
        }
    }

    pub fn mass(&self, i: usize, j: usize) -> f64 {
        self.mass[i * HIST_BINS + j]
    }

    pub fn total(&self) -> f64 {
        self.mass.iter().sum()
    }

    /// Nonzero bins as (i, j, mass), row-major order.
    pub fn nonzero_bins(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.mass.iter().enumerate().filter_map(|(idx, &m)| {
            (m > 0.0).then(|| (idx / HIST_BINS, idx % HIST_BINS, m))
        })
    }

    /// CSV with header `i,j,mass`, nonzero bins only.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "i,j,mass")?;
        for (i, j, m) in self.nonzero_bins() {
            writeln!(out, "{i},{j},{m}")?;
        }
        Ok(())
    }
}

/// Per-node activation counts over R realizations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReachFrequency {
    counts: Vec<u32>,
    realizations: u32,
}

impl ReachFrequency {
    pub fn count(&self, v: NodeId) -> u32 {
        self.counts[v as usize]
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn realizations(&self) -> u32 {
        self.realizations
    }

    /// CSV with header `node,count,R`; nodes with zero count are skipped.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "node,count,R")?;
        for (v, &c) in self.counts.iter().enumerate() {
            if c > 0 {
                writeln!(out, "{v},{c},{}", self.realizations)?;
            }
        }
        Ok(())
    }
}

fn validate_seeds(g: &SocialGraph, seeds: &[NodeId]) -> Result<()> {
    for &s in seeds {
        if !g.contains(s) {
            return Err(Error::SeedOutOfRange {
                id: s,
                node_count: g.node_count(),
            });
        }
    }
    Ok(())
}

fn validate_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return Err(Error::InvalidProbability(p));
    }
    Ok(())
}

/// BFS cascade skeleton; `transmit` decides each edge attempt.
fn cascade_with(
    g: &SocialGraph,
    seeds: &[NodeId],
    horizon: Option<u32>,
    mut transmit: impl FnMut(u32) -> bool,
) -> Vec<NodeId> {
    let mut active = vec![false; g.node_count()];
    let mut reached = Vec::with_capacity(seeds.len());
    for &s in seeds {
        if !active[s as usize] {
            active[s as usize] = true;
            reached.push(s);
        }
    }
    let mut frontier: Vec<NodeId> = reached.clone();
    let mut round = 0u32;
    while !frontier.is_empty() && horizon.map_or(true, |h| round < h) {
        let mut next = Vec::new();
        for &u in &frontier {
            for (v, eid) in g.incident(u) {
                if !active[v as usize] && transmit(eid) {
                    active[v as usize] = true;
                    next.push(v);
                    reached.push(v);
                }
            }
        }
        frontier = next;
        round += 1;
    }
    reached
}

/// One independent cascade drawing coins from `rng` in attempt order.
///
/// `horizon = None` runs to quiescence. Returns every activated node,
/// seeds included.
pub fn independent_cascade<R: Rng>(
    g: &SocialGraph,
    seedset: &[NodeId],
    p: f64,
    horizon: Option<u32>,
    rng: &mut R,
) -> Result<Vec<NodeId>> {
    validate_seeds(g, seedset)?;
    validate_probability(p)?;
    Ok(cascade_with(g, seedset, horizon, |_| rng.gen::<f64>() < p))
}

/// One cascade in a fixed live-edge world (hashed per-edge coins).
pub(crate) fn cascade_in_world(
    g: &SocialGraph,
    seeds: &[NodeId],
    p: f64,
    horizon: Option<u32>,
    world: u64,
) -> Vec<NodeId> {
    cascade_with(g, seeds, horizon, |eid| edge_coin(world, eid, p))
}

/// Per-group activated fractions of an explicit activated set.
pub fn final_configuration(g: &SocialGraph, activated: &[NodeId]) -> Result<FinalConfiguration> {
    g.require_both_groups()?;
    validate_seeds(g, activated)?;
    let counts = group_counts(g, activated);
    Ok(FinalConfiguration {
        x1: counts[0] as f64 / g.group_size(Group::One) as f64,
        x2: counts[1] as f64 / g.group_size(Group::Two) as f64,
    })
}

fn group_counts(g: &SocialGraph, activated: &[NodeId]) -> [usize; 2] {
    let mut counts = [0usize; 2];
    for &v in activated {
        counts[g.group(v).index()] += 1;
    }
    counts
}

/// Monte-Carlo estimate of the joint outreach distribution: R unbounded
/// cascades, one sample each. Deterministic in `master_seed` regardless of
/// worker count.
pub fn sample_outreach(
    g: &SocialGraph,
    seedset: &[NodeId],
    p: f64,
    realizations: u32,
    master_seed: u64,
) -> Result<OutreachDistribution> {
    validate_seeds(g, seedset)?;
    validate_probability(p)?;
    g.require_both_groups()?;
    if realizations == 0 {
        return Err(Error::ZeroRealizations);
    }
    let size1 = g.group_size(Group::One) as f64;
    let size2 = g.group_size(Group::Two) as f64;
    let samples: Vec<FinalConfiguration> = (0..realizations)
        .into_par_iter()
        .map(|r| {
            let world = stream(master_seed, tag::OUTREACH, u64::from(r));
            let reached = cascade_in_world(g, seedset, p, None, world);
            let counts = group_counts(g, &reached);
            FinalConfiguration {
                x1: counts[0] as f64 / size1,
                x2: counts[1] as f64 / size2,
            }
        })
        .collect();
    OutreachDistribution::from_samples(samples)
}

/// Activation frequency of every node over R bounded-horizon cascades.
pub fn seedset_reach(
    g: &SocialGraph,
    seedset: &[NodeId],
    p: f64,
    horizon: Option<u32>,
    realizations: u32,
    master_seed: u64,
) -> Result<ReachFrequency> {
    validate_seeds(g, seedset)?;
    validate_probability(p)?;
    if realizations == 0 {
        return Err(Error::ZeroRealizations);
    }
    let n = g.node_count();
    let counts = (0..realizations)
        .into_par_iter()
        .fold(
            || vec![0u32; n],
            |mut acc, r| {
                let world = stream(master_seed, tag::REACH, u64::from(r));
                for v in cascade_in_world(g, seedset, p, horizon, world) {
                    acc[v as usize] += 1;
                }
                acc
            },
        )
        .reduce(
            || vec![0u32; n],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    Ok(ReachFrequency {
        counts,
        realizations,
    })
}

const MAX_ENUM_EDGES: usize = 20;

/// Exact joint outreach distribution by live-edge enumeration.
///
/// Every subset of edges is taken live with weight p^live (1-p)^dead; the
/// activated set of a world is the union of live-edge components containing
/// seeds. Exponential in the edge count, hence the hard cap — this is the
/// brute-force cross-check for the Monte-Carlo path.
pub fn exact_outreach(
    g: &SocialGraph,
    seedset: &[NodeId],
    p: f64,
) -> Result<DiscreteDistribution2D> {
    validate_seeds(g, seedset)?;
    validate_probability(p)?;
    g.require_both_groups()?;
    let m = g.edge_count();
    if m > MAX_ENUM_EDGES {
        return Err(Error::EnumerationTooLarge {
            edges: m,
            max: MAX_ENUM_EDGES,
        });
    }

    let n = g.node_count();
    let edges = g.edges();
    let mut seed_flag = vec![false; n];
    for &s in seedset {
        seed_flag[s as usize] = true;
    }

    // Worlds with the same live count share a weight, so tally integer
    // world counts per (configuration, live count) and weight at the end;
    // this keeps the total mass exact to ~1e-13 even at 2^20 worlds.
    let mut tallies: BTreeMap<(usize, usize), Vec<u64>> = BTreeMap::new();
    let mut parent: Vec<u32> = (0..n as u32).collect();

    fn find(parent: &mut [u32], x: u32) -> u32 {
        let mut root = x;
        while parent[root as usize] != root {
            root = parent[root as usize];
        }
        let mut cur = x;
        while parent[cur as usize] != root {
            let next = parent[cur as usize];
            parent[cur as usize] = root;
            cur = next;
        }
        root
    }

    for mask in 0u64..(1u64 << m) {
        for (v, p) in parent.iter_mut().enumerate() {
            *p = v as u32;
        }
        for (e, &(u, v)) in edges.iter().enumerate() {
            if mask >> e & 1 == 1 {
                let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
                if ru != rv {
                    parent[ru as usize] = rv;
                }
            }
        }
        let mut root_seeded = vec![false; n];
        for s in seedset {
            let r = find(&mut parent, *s);
            root_seeded[r as usize] = true;
        }
        let mut counts = [0usize; 2];
        for v in 0..n as u32 {
            let r = find(&mut parent, v);
            if root_seeded[r as usize] {
                counts[g.group(v).index()] += 1;
            }
        }
        let live = mask.count_ones() as usize;
        tallies
            .entry((counts[0], counts[1]))
            .or_insert_with(|| vec![0u64; m + 1])[live] += 1;
    }

    let mut live_weight = vec![0.0f64; m + 1];
    for (k, w) in live_weight.iter_mut().enumerate() {
        *w = p.powi(k as i32) * (1.0 - p).powi((m - k) as i32);
    }

    let size1 = g.group_size(Group::One) as f64;
    let size2 = g.group_size(Group::Two) as f64;
    let mut points = Vec::with_capacity(tallies.len());
    let mut weights = Vec::with_capacity(tallies.len());
    for ((c1, c2), per_live) in tallies {
        let mass: f64 = per_live
            .iter()
            .enumerate()
            .map(|(k, &cnt)| cnt as f64 * live_weight[k])
            .sum();
        if mass > 0.0 {
            points.push((c1 as f64 / size1, c2 as f64 / size2));
            weights.push(mass);
        }
    }
    DiscreteDistribution2D::new(points, weights)
}
