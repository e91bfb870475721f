//! Fairness and efficiency metrics over joint outreach distributions.
//!
//! The central objects are discrete probability distributions on the unit
//! square: a point (x1, x2) is a final configuration, its weight the
//! probability of observing it. Fairness is the optimal-transport distance
//! to the ideal distribution concentrated on the diagonal; because the
//! ideal target is a Dirac, the transport problem collapses to a closed
//! form, which is what the metric functions evaluate. `ot_exact` solves the
//! general problem and exists to cross-validate the closed forms and to
//! compare arbitrary distribution pairs.

mod transport;

use std::f64::consts::FRAC_1_SQRT_2;

use serde::Serialize;

use crate::diffusion::OutreachDistribution;
use crate::error::{Error, Result};
use crate::graph::{Group, NodeId, SocialGraph};
use crate::rng::{stream, tag};

/// Weighted point set on the unit square; weights sum to one.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteDistribution2D {
    points: Vec<(f64, f64)>,
    weights: Vec<f64>,
}

impl DiscreteDistribution2D {
    pub fn new(points: Vec<(f64, f64)>, weights: Vec<f64>) -> Result<Self> {
        if points.is_empty() || points.len() != weights.len() {
            return Err(Error::InvalidDistribution(
                "need equally many points and weights, at least one".into(),
            ));
        }
        for &(x, y) in &points {
            if !(-1e-12..=1.0 + 1e-12).contains(&x) || !(-1e-12..=1.0 + 1e-12).contains(&y) {
                return Err(Error::InvalidDistribution(format!(
                    "point ({x}, {y}) outside the unit square"
                )));
            }
        }
        let mut weights = weights;
        for w in &mut weights {
            if *w < -1e-12 {
                return Err(Error::InvalidDistribution(format!("negative weight {w}")));
            }
            *w = w.max(0.0);
        }
        // Kahan sum: the tolerance must hold even for 1e5 tiny weights
        let (mut sum, mut carry) = (0.0f64, 0.0f64);
        for &w in &weights {
            let y = w - carry;
            let t = sum + y;
            carry = (t - sum) - y;
            sum = t;
        }
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidDistribution(format!(
                "weights sum to {sum}, expected 1"
            )));
        }
        Ok(DiscreteDistribution2D { points, weights })
    }

    /// Point mass at one configuration.
    pub fn dirac(x1: f64, x2: f64) -> Self {
        DiscreteDistribution2D {
            points: vec![(x1, x2)],
            weights: vec![1.0],
        }
    }

    /// Equal-weight view of an empirical outreach distribution.
    pub fn from_outreach(d: &OutreachDistribution) -> Self {
        let n = d.realization_count();
        DiscreteDistribution2D {
            points: d.samples().iter().map(|s| s.as_point()).collect(),
            weights: vec![1.0 / n as f64; n],
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: usize) -> (f64, f64) {
        self.points[i]
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn iter(&self) -> impl Iterator<Item = ((f64, f64), f64)> + '_ {
        self.points.iter().copied().zip(self.weights.iter().copied())
    }

    /// Expectation of a pointwise statistic under the distribution.
    pub fn expect(&self, f: impl Fn(f64, f64) -> f64) -> f64 {
        self.iter().map(|((x1, x2), w)| w * f(x1, x2)).sum()
    }

    pub fn mean_x1(&self) -> f64 {
        self.expect(|x1, _| x1)
    }

    pub fn mean_x2(&self) -> f64 {
        self.expect(|_, x2| x2)
    }
}

impl From<&OutreachDistribution> for DiscreteDistribution2D {
    fn from(d: &OutreachDistribution) -> Self {
        DiscreteDistribution2D::from_outreach(d)
    }
}

/// Coupling between two discrete distributions.
#[derive(Debug, Clone)]
pub struct TransportPlan {
    pub source: DiscreteDistribution2D,
    pub target: DiscreteDistribution2D,
    mass: Vec<f64>,
}

impl TransportPlan {
    pub fn mass(&self, i: usize, j: usize) -> f64 {
        self.mass[i * self.target.len() + j]
    }

    pub fn row_sums(&self) -> Vec<f64> {
        let n = self.target.len();
        (0..self.source.len())
            .map(|i| self.mass[i * n..(i + 1) * n].iter().sum())
            .collect()
    }

    pub fn col_sums(&self) -> Vec<f64> {
        let n = self.target.len();
        (0..n)
            .map(|j| (0..self.source.len()).map(|i| self.mass[i * n + j]).sum())
            .collect()
    }
}

/// Fairness transportation cost between two configurations: the change in
/// the off-diagonal component (x2 - x1). Moving along the diagonal is free.
///
/// This is the printed closed-form normalization; multiply by sqrt(2)/2 for
/// the Euclidean length of the same displacement (`fairness_cost_euclidean`).
pub fn fairness_cost(a: (f64, f64), b: (f64, f64)) -> f64 {
    ((a.1 - a.0) - (b.1 - b.0)).abs()
}

/// Euclidean length of the orthogonal-to-diagonal displacement.
pub fn fairness_cost_euclidean(a: (f64, f64), b: (f64, f64)) -> f64 {
    fairness_cost(a, b) * FRAC_1_SQRT_2
}

/// Along-diagonal component: the change in total outreach x1 + x2.
pub fn efficiency_cost(a: (f64, f64), b: (f64, f64)) -> f64 {
    ((a.0 + a.1) - (b.0 + b.1)).abs()
}

/// Weighted blend of the fairness and efficiency components.
pub fn beta_cost(beta: f64) -> impl Fn((f64, f64), (f64, f64)) -> f64 {
    move |a, b| beta * fairness_cost(a, b) + (1.0 - beta) * efficiency_cost(a, b)
}

/// Exact optimal transport between two discrete distributions under an
/// arbitrary cost. Returns the optimum and an optimal plan.
pub fn ot_exact(
    src: &DiscreteDistribution2D,
    dst: &DiscreteDistribution2D,
    cost: impl Fn((f64, f64), (f64, f64)) -> f64,
) -> Result<(f64, TransportPlan)> {
    let (m, n) = (src.len(), dst.len());
    if m + n > 10_000 {
        return Err(Error::InvalidDistribution(format!(
            "combined support {} exceeds the exact-solver bound of 10000",
            m + n
        )));
    }
    let mut matrix = vec![0.0; m * n];
    for i in 0..m {
        for j in 0..n {
            matrix[i * n + j] = cost(src.point(i), dst.point(j));
        }
    }
    let (value, flow) = transport::solve_transport(src.weights(), dst.weights(), &matrix)?;
    Ok((
        value,
        TransportPlan {
            source: src.clone(),
            target: dst.clone(),
            mass: flow,
        },
    ))
}

/// Mutual fairness: one minus the expected per-realization outreach gap.
///
/// Equals `1 - ot_exact(dist, dirac(1,1), fairness_cost)` — the transport
/// problem to a Dirac target has only one coupling.
pub fn mutual_fairness(dist: &DiscreteDistribution2D) -> f64 {
    1.0 - dist.expect(|x1, x2| (x1 - x2).abs())
}

/// Fairness-efficiency blend, normalized to [0, 1]. `beta = 1` recovers
/// mutual fairness; `beta = 0` the efficiency metric.
pub fn beta_fairness(dist: &DiscreteDistribution2D, beta: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&beta) || beta.is_nan() {
        return Err(Error::InvalidBeta(beta));
    }
    Ok(dist.expect(|x1, x2| {
        let fair = (x1 - x2).abs();
        let eff = (x1 + x2 - 2.0).abs();
        1.0 - (beta * fair + (1.0 - beta) * eff) / (2.0 - beta)
    }))
}

/// Expected fraction of the network reached, averaged over the two groups.
pub fn efficiency(dist: &DiscreteDistribution2D) -> f64 {
    dist.expect(|x1, x2| 1.0 - (x1 + x2 - 2.0).abs() / 2.0)
}

/// Gap between the expected per-group outreach ratios.
pub fn equity_gap(dist: &DiscreteDistribution2D) -> f64 {
    (dist.mean_x1() - dist.mean_x2()).abs()
}

pub fn equity_score(dist: &DiscreteDistribution2D) -> f64 {
    1.0 - equity_gap(dist)
}

/// Gap between the per-group proportions of the seedset itself.
pub fn equality_gap(g: &SocialGraph, seedset: &[NodeId]) -> Result<f64> {
    g.require_both_groups()?;
    let mut counts = [0usize; 2];
    for &s in seedset {
        counts[g.group(s).index()] += 1;
    }
    Ok((counts[0] as f64 / g.group_size(Group::One) as f64
        - counts[1] as f64 / g.group_size(Group::Two) as f64)
        .abs())
}

/// Minimum over groups of the expected outreach ratio.
pub fn maxmin_value(dist: &DiscreteDistribution2D) -> f64 {
    dist.mean_x1().min(dist.mean_x2())
}

/// Outcome of the diversity check for one group.
#[derive(Debug, Clone, Serialize)]
pub struct DiversityGroupReport {
    pub group: u8,
    pub budget: usize,
    /// Expected outreach ratio the seedset under evaluation achieves.
    pub achieved: f64,
    /// Best internal spread with the proportional budget.
    pub baseline: f64,
    pub passed: bool,
    /// Whether the baseline is an exhaustive optimum or a greedy surrogate.
    pub baseline_exhaustive: bool,
}

/// Largest group size for which the diversity baseline is exhaustive.
const EXHAUSTIVE_DIVERSITY_LIMIT: usize = 12;

/// Check that each group's outreach at least matches what it could achieve
/// by spending its proportional seed budget internally.
///
/// The baseline seeds each group's induced subgraph with budget
/// ceil(k |C_i| / |V|); the internal optimum is exhaustive for groups of at
/// most 12 nodes and a greedy surrogate beyond that.
pub fn diversity_check(
    g: &SocialGraph,
    dist: &DiscreteDistribution2D,
    k: usize,
    p: f64,
    realizations: u32,
    master_seed: u64,
) -> Result<[DiversityGroupReport; 2]> {
    g.require_both_groups()?;
    if k == 0 {
        return Err(Error::Config("diversity check needs k >= 1".into()));
    }
    let n = g.node_count();
    let achieved = [dist.mean_x1(), dist.mean_x2()];
    let mut reports = Vec::with_capacity(2);
    for group in [Group::One, Group::Two] {
        let size = g.group_size(group);
        let budget = (k * size + n - 1) / n; // ceil
        if budget > size {
            return Err(Error::GroupBudgetTooLarge {
                group: group.index() as u8 + 1,
                budget,
                group_size: size,
            });
        }
        let members = g.members(group);
        let (sub, _) = g.induced_subgraph(&members)?;
        let seed = stream(master_seed, tag::EVAL, group.index() as u64);
        let exhaustive = size <= EXHAUSTIVE_DIVERSITY_LIMIT;
        let baseline = if exhaustive {
            let mut best = 0.0f64;
            for_each_combination(size, budget, |combo| {
                let seeds: Vec<NodeId> = combo.iter().map(|&i| i as NodeId).collect();
                let score = expected_outreach_fraction(&sub, &seeds, p, realizations, seed)
                    .expect("subgraph seeds are valid by construction");
                if score > best {
                    best = score;
                }
            });
            best
        } else {
            let seeds = crate::seeding::select_greedy(&sub, budget, p, realizations, seed)?;
            expected_outreach_fraction(&sub, seeds.nodes(), p, realizations, seed)?
        };
        reports.push(DiversityGroupReport {
            group: group.index() as u8 + 1,
            budget,
            achieved: achieved[group.index()],
            baseline,
            passed: achieved[group.index()] + 1e-12 >= baseline,
            baseline_exhaustive: exhaustive,
        });
    }
    Ok([reports.remove(0), reports.remove(0)])
}

/// Mean fraction of `g` reached from `seeds` over R cascades.
fn expected_outreach_fraction(
    g: &SocialGraph,
    seeds: &[NodeId],
    p: f64,
    realizations: u32,
    master_seed: u64,
) -> Result<f64> {
    let reach = crate::diffusion::seedset_reach(g, seeds, p, None, realizations, master_seed)?;
    let total: u64 = reach.counts().iter().map(|&c| u64::from(c)).sum();
    Ok(total as f64 / (f64::from(realizations) * g.node_count() as f64))
}

fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    let mut combo: Vec<usize> = (0..k).collect();
    if k == 0 || k > n {
        return;
    }
    loop {
        f(&combo);
        // advance to the next k-combination of 0..n
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if combo[i] != i + n - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        combo[i] += 1;
        for j in i + 1..k {
            combo[j] = combo[j - 1] + 1;
        }
    }
}

/// One metric value with the provenance needed to reproduce it.
#[derive(Debug, Clone, Serialize)]
pub struct MetricReport {
    pub metric_name: String,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub realization_count: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rng_seed: Option<u64>,
}
