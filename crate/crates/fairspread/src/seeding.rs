//! Seed-selection strategies.
//!
//! Baselines (degree, greedy), group-proportional fair heuristics, and the
//! stochastic seedset descent: a Metropolis-sampled local search over
//! seedsets scored by negative beta-fairness. Candidate seedsets are grown
//! by sampling nodes in proportion to how often cascades from the current
//! seedset reach them, discounting each picked node's own shallow reach so
//! the candidates cover non-overlapping regions.

use std::collections::HashMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::diffusion::{sample_outreach, seedset_reach};
use crate::error::{Error, Result};
use crate::graph::{Group, NodeId, SocialGraph};
use crate::metrics::{beta_fairness, efficiency, mutual_fairness, DiscreteDistribution2D};
use crate::rng::{stream, stream_rng, tag};

/// Ordered set of distinct seed nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Seedset {
    nodes: Vec<NodeId>,
}

impl Seedset {
    pub fn new(nodes: Vec<NodeId>, g: &SocialGraph) -> Result<Self> {
        let mut seen = vec![false; g.node_count()];
        for &v in &nodes {
            if !g.contains(v) {
                return Err(Error::SeedOutOfRange {
                    id: v,
                    node_count: g.node_count(),
                });
            }
            if seen[v as usize] {
                return Err(Error::DuplicateSeed { id: v });
            }
            seen[v as usize] = true;
        }
        Ok(Seedset { nodes })
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn k(&self) -> usize {
        self.nodes.len()
    }

    /// Canonical key for memoization: the same set in any order maps to the
    /// same entry.
    pub fn sorted_nodes(&self) -> Vec<NodeId> {
        let mut v = self.nodes.clone();
        v.sort_unstable();
        v
    }

    pub fn external_ids(&self, g: &SocialGraph) -> Vec<String> {
        self.nodes
            .iter()
            .map(|&v| g.external_id(v).to_string())
            .collect()
    }
}

/// Tunables of the stochastic descent. Defaults follow the published
/// constants: exploit_to_explore 1.3, retention 0.95, shallow horizon 4.
#[derive(Debug, Clone)]
pub struct S3DParams {
    /// Fairness weight of the score being maximized.
    pub beta: f64,
    /// Number of descent steps.
    pub iterations: usize,
    /// Cascade realizations per reach estimate.
    pub realizations: u32,
    /// Multiplier on the energy difference inside the acceptance exponent.
    pub exploit_to_explore: f64,
    /// Probability of keeping the current seedset after a rejection; the
    /// complement restarts from a uniformly random seedset.
    pub retention_prob: f64,
    /// Horizon for discounting an accepted candidate's own reach.
    pub shallow_horizon: u32,
    /// Cascade realizations per beta-fairness evaluation.
    pub evaluation_realizations: u32,
    pub master_seed: u64,
}

impl S3DParams {
    pub fn new(beta: f64, master_seed: u64) -> Result<Self> {
        let params = S3DParams {
            beta,
            iterations: 500,
            realizations: 1000,
            exploit_to_explore: 1.3,
            retention_prob: 0.95,
            shallow_horizon: 4,
            evaluation_realizations: 1000,
            master_seed,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.beta) || self.beta.is_nan() {
            return Err(Error::InvalidBeta(self.beta));
        }
        if !(0.0..=1.0).contains(&self.retention_prob) {
            return Err(Error::Config(format!(
                "retention_prob {} outside [0, 1]",
                self.retention_prob
            )));
        }
        if self.iterations == 0 {
            return Err(Error::Config("iterations must be at least 1".into()));
        }
        if self.realizations == 0 || self.evaluation_realizations == 0 {
            return Err(Error::ZeroRealizations);
        }
        Ok(())
    }
}

/// The three scores of one seedset, all from the same outreach sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeedsetScores {
    pub beta_fairness: f64,
    pub mutual_fairness: f64,
    pub efficiency: f64,
}

/// Score a seedset by sampling its outreach once.
pub fn evaluate_seedset(
    g: &SocialGraph,
    seedset: &Seedset,
    p: f64,
    beta: f64,
    realizations: u32,
    master_seed: u64,
) -> Result<SeedsetScores> {
    let outreach = sample_outreach(g, seedset.nodes(), p, realizations, master_seed)?;
    let dist = DiscreteDistribution2D::from_outreach(&outreach);
    Ok(SeedsetScores {
        beta_fairness: beta_fairness(&dist, beta)?,
        mutual_fairness: mutual_fairness(&dist),
        efficiency: efficiency(&dist),
    })
}

/// Memoized seedset scoring under fixed (p, beta, R, master_seed).
///
/// All seedsets are scored with common random numbers, so comparisons
/// between memo entries are exact rather than noisy.
pub struct ScoreMemo {
    p: f64,
    beta: f64,
    realizations: u32,
    master_seed: u64,
    table: HashMap<Vec<NodeId>, SeedsetScores>,
}

impl ScoreMemo {
    pub fn new(p: f64, beta: f64, realizations: u32, master_seed: u64) -> Self {
        ScoreMemo {
            p,
            beta,
            realizations,
            master_seed,
            table: HashMap::new(),
        }
    }

    pub fn scores(&mut self, g: &SocialGraph, s: &Seedset) -> Result<SeedsetScores> {
        let key = s.sorted_nodes();
        if let Some(hit) = self.table.get(&key) {
            return Ok(*hit);
        }
        let scores = evaluate_seedset(g, s, self.p, self.beta, self.realizations, self.master_seed)?;
        self.table.insert(key, scores);
        Ok(scores)
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }
}

fn validate_k(g: &SocialGraph, k: usize) -> Result<()> {
    if k > g.node_count() {
        return Err(Error::SeedBudgetTooLarge {
            k,
            node_count: g.node_count(),
        });
    }
    Ok(())
}

/// Top-k nodes by degree, ties broken by ascending id.
pub fn select_degree(g: &SocialGraph, k: usize) -> Result<Seedset> {
    validate_k(g, k)?;
    let mut order: Vec<NodeId> = g.nodes().collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    Seedset::new(order[..k].to_vec(), g)
}

/// Total activated nodes over R realizations of cascades from `seeds`,
/// using the shared world streams indexed by (round, realization).
fn total_reach(g: &SocialGraph, seeds: &[NodeId], p: f64, realizations: u32, round: usize, master_seed: u64) -> u64 {
    use rayon::prelude::*;
    (0..realizations)
        .into_par_iter()
        .map(|r| {
            let idx = ((round as u64) << 32) | u64::from(r);
            let world = stream(master_seed, tag::GREEDY, idx);
            crate::diffusion::cascade_in_world(g, seeds, p, None, world) .len() as u64
        })
        .sum()
}

fn greedy_with_filter(
    g: &SocialGraph,
    k: usize,
    p: f64,
    realizations: u32,
    master_seed: u64,
    mut allowed: impl FnMut(&[NodeId], NodeId) -> bool,
) -> Result<Seedset> {
    use rayon::prelude::*;
    validate_k(g, k)?;
    if realizations == 0 {
        return Err(Error::ZeroRealizations);
    }
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return Err(Error::InvalidProbability(p));
    }
    let mut chosen: Vec<NodeId> = Vec::with_capacity(k);
    for round in 0..k {
        let candidates: Vec<NodeId> = g
            .nodes()
            .filter(|&v| !chosen.contains(&v) && allowed(&chosen, v))
            .collect();
        if candidates.is_empty() {
            return Err(Error::Config(
                "greedy ran out of eligible candidates before reaching k".into(),
            ));
        }
        // common random numbers within the round: every candidate is scored
        // on the same cascade worlds, so ties are exact integer ties
        let totals: Vec<u64> = candidates
            .par_iter()
            .map(|&v| {
                let mut trial = chosen.clone();
                trial.push(v);
                total_reach(g, &trial, p, realizations, round, master_seed)
            })
            .collect();
        let mut best = 0usize;
        for i in 1..candidates.len() {
            if totals[i] > totals[best] {
                best = i;
            }
        }
        chosen.push(candidates[best]);
    }
    Seedset::new(chosen, g)
}

/// Greedy marginal-gain selection by Monte-Carlo outreach estimates.
pub fn select_greedy(
    g: &SocialGraph,
    k: usize,
    p: f64,
    realizations: u32,
    master_seed: u64,
) -> Result<Seedset> {
    greedy_with_filter(g, k, p, realizations, master_seed, |_, _| true)
}

/// Group seed budgets: proportional quotas rounded by largest remainder so
/// they sum to exactly k. Ties go to the larger group, then to group 1.
pub fn proportional_budgets(g: &SocialGraph, k: usize) -> Result<[usize; 2]> {
    validate_k(g, k)?;
    let n = g.node_count();
    let sizes = [g.group_size(Group::One), g.group_size(Group::Two)];
    let mut budgets = [k * sizes[0] / n, k * sizes[1] / n];
    let remainders = [(k * sizes[0]) % n, (k * sizes[1]) % n];
    let assigned: usize = budgets.iter().sum();
    if assigned < k {
        debug_assert_eq!(assigned + 1, k);
        let favored = match remainders[0].cmp(&remainders[1]) {
            std::cmp::Ordering::Greater => 0,
            std::cmp::Ordering::Less => 1,
            std::cmp::Ordering::Equal => usize::from(sizes[1] > sizes[0]),
        };
        budgets[favored] += 1;
    }
    for (i, (&b, &s)) in budgets.iter().zip(&sizes).enumerate() {
        if b > s {
            return Err(Error::GroupBudgetTooLarge {
                group: i as u8 + 1,
                budget: b,
                group_size: s,
            });
        }
    }
    Ok(budgets)
}

/// Degree-central fair heuristic: top nodes by degree within each group,
/// group budgets proportional to group size.
pub fn select_fair_degree(g: &SocialGraph, k: usize) -> Result<Seedset> {
    let budgets = proportional_budgets(g, k)?;
    let mut nodes = Vec::with_capacity(k);
    for group in [Group::One, Group::Two] {
        let mut members = g.members(group);
        members.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
        nodes.extend_from_slice(&members[..budgets[group.index()]]);
    }
    Seedset::new(nodes, g)
}

/// Greedy fair heuristic: marginal-gain greedy constrained to respect the
/// proportional group budgets.
pub fn select_fair_greedy(
    g: &SocialGraph,
    k: usize,
    p: f64,
    realizations: u32,
    master_seed: u64,
) -> Result<Seedset> {
    let budgets = proportional_budgets(g, k)?;
    greedy_with_filter(g, k, p, realizations, master_seed, |chosen, v| {
        let group = g.group(v);
        let used = chosen.iter().filter(|&&c| g.group(c) == group).count();
        used < budgets[group.index()]
    })
}

/// Which branch a descent step took.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepOutcome {
    /// The candidate seedset was accepted.
    Accepted,
    /// The candidate was rejected; the current seedset is retained.
    Retained,
    /// The candidate was rejected and a uniformly random seedset drawn.
    Restarted,
}

/// Metropolis acceptance probability for energies E = -beta_fairness.
/// A candidate at least as good as the current set is always accepted.
pub fn metropolis_accept_prob(
    energy_current: f64,
    energy_candidate: f64,
    exploit_to_explore: f64,
) -> f64 {
    (exploit_to_explore * (energy_current - energy_candidate))
        .exp()
        .min(1.0)
}

fn sample_weighted(pool: &[u64], rng: &mut ChaCha8Rng) -> Option<NodeId> {
    let total: u64 = pool.iter().sum();
    if total == 0 {
        return None;
    }
    let mut t = rng.gen_range(0..total);
    for (v, &w) in pool.iter().enumerate() {
        if t < w {
            return Some(v as NodeId);
        }
        t -= w;
    }
    unreachable!("weights changed during sampling")
}

fn push_random_unused(nodes: &mut Vec<NodeId>, n: usize, rng: &mut ChaCha8Rng) {
    loop {
        let v = rng.gen_range(0..n as NodeId);
        if !nodes.contains(&v) {
            nodes.push(v);
            return;
        }
    }
}

fn random_seedset(g: &SocialGraph, k: usize, rng: &mut ChaCha8Rng) -> Result<Seedset> {
    let mut nodes = Vec::with_capacity(k);
    while nodes.len() < k {
        push_random_unused(&mut nodes, g.node_count(), rng);
    }
    Seedset::new(nodes, g)
}

/// One descent step: propose a candidate seedset from the current one's
/// stochastic reach, then Metropolis-accept on the beta-fairness energies.
///
/// `max_horizon` caps the reach cascades (the graph diameter in the full
/// iteration). An exhausted sampling pool is refilled with uniformly random
/// unused nodes, mirroring the fit-to-size repair of degenerate inputs.
pub fn s3d_step(
    g: &SocialGraph,
    current: &Seedset,
    p: f64,
    params: &S3DParams,
    max_horizon: u32,
    memo: &mut ScoreMemo,
    rng: &mut ChaCha8Rng,
) -> Result<(Seedset, StepOutcome)> {
    params.validate()?;
    let k = current.k();
    if k == 0 {
        return Err(Error::Config("cannot step an empty seedset".into()));
    }

    // dedupe + fit to size with random nodes; Seedset is distinct by
    // construction so this only repairs degenerate manual inputs
    let mut nodes: Vec<NodeId> = Vec::with_capacity(k);
    for &v in current.nodes() {
        if !nodes.contains(&v) {
            nodes.push(v);
        }
    }
    while nodes.len() < k {
        push_random_unused(&mut nodes, g.node_count(), rng);
    }
    let current = Seedset::new(nodes, g)?;

    let reach_seed = rng.gen::<u64>();
    let reach = seedset_reach(
        g,
        current.nodes(),
        p,
        Some(max_horizon),
        params.realizations,
        reach_seed,
    )?;
    let mut pool: Vec<u64> = reach.counts().iter().map(|&c| u64::from(c)).collect();

    let mut candidates: Vec<NodeId> = Vec::with_capacity(k);
    match sample_weighted(&pool, rng) {
        Some(v) => candidates.push(v),
        None => push_random_unused(&mut candidates, g.node_count(), rng),
    }
    while candidates.len() < k {
        // discount the last pick's own shallow reach; this zeroes the pick
        // itself (a seed is always reached), so candidates stay distinct
        let last = *candidates.last().unwrap();
        let shallow_seed = rng.gen::<u64>();
        let shallow = seedset_reach(
            g,
            &[last],
            p,
            Some(params.shallow_horizon),
            params.realizations,
            shallow_seed,
        )?;
        for (pw, &sc) in pool.iter_mut().zip(shallow.counts()) {
            *pw = pw.saturating_sub(u64::from(sc));
        }
        match sample_weighted(&pool, rng) {
            Some(v) => candidates.push(v),
            None => push_random_unused(&mut candidates, g.node_count(), rng),
        }
    }
    let candidate = Seedset::new(candidates, g)?;

    let energy_current = -memo.scores(g, &current)?.beta_fairness;
    let energy_candidate = -memo.scores(g, &candidate)?.beta_fairness;
    let accept_prob =
        metropolis_accept_prob(energy_current, energy_candidate, params.exploit_to_explore);

    if rng.gen::<f64>() < accept_prob {
        Ok((candidate, StepOutcome::Accepted))
    } else if rng.gen::<f64>() < params.retention_prob {
        Ok((current, StepOutcome::Retained))
    } else {
        Ok((random_seedset(g, k, rng)?, StepOutcome::Restarted))
    }
}

/// Result of a full descent.
#[derive(Debug, Clone)]
pub struct S3dRun {
    pub seedset: Seedset,
    pub scores: SeedsetScores,
    /// Number of seedsets visited (including the initial one).
    pub visited: usize,
}

/// Run the descent for `params.iterations` steps and return the best
/// seedset visited, judged by memoized beta-fairness.
///
/// The initial seedset is part of the candidate pool, so the returned
/// memoized score never falls below the initial one.
pub fn s3d_iterate(
    g: &SocialGraph,
    initial: &Seedset,
    p: f64,
    params: &S3DParams,
) -> Result<S3dRun> {
    params.validate()?;
    g.require_both_groups()?;
    let max_horizon = g.max_component_diameter() as u32;
    let mut memo = ScoreMemo::new(
        p,
        params.beta,
        params.evaluation_realizations,
        params.master_seed,
    );
    let mut rng = stream_rng(params.master_seed, tag::S3D_STEPS, 0);

    let mut visited: Vec<Seedset> = Vec::with_capacity(params.iterations + 1);
    visited.push(initial.clone());
    let mut current = initial.clone();
    for _ in 0..params.iterations {
        let (next, _) = s3d_step(g, &current, p, params, max_horizon, &mut memo, &mut rng)?;
        visited.push(next.clone());
        current = next;
    }

    let mut best = 0usize;
    let mut best_score = memo.scores(g, &visited[0])?.beta_fairness;
    for (i, s) in visited.iter().enumerate().skip(1) {
        let score = memo.scores(g, s)?.beta_fairness;
        if score > best_score {
            best_score = score;
            best = i;
        }
    }
    let seedset = visited[best].clone();
    let scores = memo.scores(g, &seedset)?;
    Ok(S3dRun {
        seedset,
        scores,
        visited: visited.len(),
    })
}
