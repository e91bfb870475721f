//! Exact solver for the discrete transportation problem.
//!
//! Plain transportation simplex (MODI): northwest-corner start, dual
//! computation over the basis tree, steepest entering cell, pivot around
//! the unique basis cycle. Supports here are small (metric evaluations use
//! at most a few thousand atoms), so no spanning-tree incrementalism is
//! attempted; adjacency is rebuilt per pivot.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
struct Cell {
    row: usize,
    col: usize,
    flow: f64,
}

/// Minimize sum(flow * cost) subject to row sums = supply, column sums =
/// demand, flow >= 0. `cost` is row-major m*n. Returns the optimum and the
/// flow matrix.
pub(crate) fn solve_transport(
    supply: &[f64],
    demand: &[f64],
    cost: &[f64],
) -> Result<(f64, Vec<f64>)> {
    let m = supply.len();
    let n = demand.len();
    assert_eq!(cost.len(), m * n);

    let total_supply: f64 = supply.iter().sum();
    let total_demand: f64 = demand.iter().sum();
    if (total_supply - total_demand).abs() > 1e-9 {
        return Err(Error::InvalidDistribution(format!(
            "unbalanced marginals: supply {total_supply} vs demand {total_demand}"
        )));
    }
    // absorb the residual imbalance (~1 ulp) on the demand side
    let scale = total_supply / total_demand;
    let demand: Vec<f64> = demand.iter().map(|d| d * scale).collect();

    let mut basis = northwest_corner(supply, &demand);
    let mut in_basis = vec![usize::MAX; m * n];
    for (idx, c) in basis.iter().enumerate() {
        in_basis[c.row * n + c.col] = idx;
    }

    let tol = 1e-11;
    let max_pivots = 2000 + 64 * (m + n);
    let mut done = false;
    for pivot in 0..max_pivots {
        let (u, v) = duals(&basis, m, n, cost);

        // entering cell: most negative reduced cost (Dantzig); switch to
        // Bland's first-negative rule late to rule out degenerate cycling
        let bland = pivot > max_pivots / 2;
        let mut enter: Option<(usize, usize, f64)> = None;
        'scan: for i in 0..m {
            for j in 0..n {
                if in_basis[i * n + j] != usize::MAX {
                    continue;
                }
                let red = cost[i * n + j] - u[i] - v[j];
                if red < -tol {
                    match enter {
                        Some((_, _, best)) if red >= best => {}
                        _ => enter = Some((i, j, red)),
                    }
                    if bland {
                        break 'scan;
                    }
                }
            }
        }
        let (ei, ej) = match enter {
            Some((i, j, _)) => (i, j),
            None => {
                done = true;
                break;
            }
        };

        // unique cycle: entering cell plus the tree path from col ej back
        // to row ei; odd path positions give up flow
        let path = tree_path(&basis, m, n, ei, m + ej);
        let mut theta = f64::INFINITY;
        let mut leave_pos = usize::MAX;
        for (t, &bidx) in path.iter().enumerate() {
            if t % 2 == 0 {
                let f = basis[bidx].flow;
                if f < theta || (f == theta && bidx < leave_pos) {
                    theta = f;
                    leave_pos = bidx;
                }
            }
        }
        debug_assert!(leave_pos != usize::MAX, "cycle without a donor cell");

        for (t, &bidx) in path.iter().enumerate() {
            if t % 2 == 0 {
                basis[bidx].flow = (basis[bidx].flow - theta).max(0.0);
            } else {
                basis[bidx].flow += theta;
            }
        }
        let leaving = basis[leave_pos];
        in_basis[leaving.row * n + leaving.col] = usize::MAX;
        basis[leave_pos] = Cell {
            row: ei,
            col: ej,
            flow: theta,
        };
        in_basis[ei * n + ej] = leave_pos;
    }
    if !done {
        return Err(Error::TransportNoConvergence);
    }

    let mut flow = vec![0.0; m * n];
    let mut value = 0.0;
    for c in &basis {
        flow[c.row * n + c.col] = c.flow;
        value += c.flow * cost[c.row * n + c.col];
    }
    Ok((value, flow))
}

/// Staircase initial basis with exactly m+n-1 cells (degenerate zeros kept).
fn northwest_corner(supply: &[f64], demand: &[f64]) -> Vec<Cell> {
    let m = supply.len();
    let n = demand.len();
    let mut a = supply.to_vec();
    let mut b = demand.to_vec();
    let mut cells = Vec::with_capacity(m + n - 1);
    let (mut i, mut j) = (0, 0);
    loop {
        let q = a[i].min(b[j]);
        cells.push(Cell {
            row: i,
            col: j,
            flow: q,
        });
        a[i] -= q;
        b[j] -= q;
        if i == m - 1 && j == n - 1 {
            break;
        }
        if a[i] <= 0.0 && i < m - 1 {
            i += 1;
        } else if j < n - 1 {
            j += 1;
        } else {
            i += 1;
        }
    }
    debug_assert_eq!(cells.len(), m + n - 1);
    cells
}

/// Dual potentials from the basis tree, rooted at row 0 with u[0] = 0.
fn duals(basis: &[Cell], m: usize, n: usize, cost: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let adj = adjacency(basis, m, n);
    let mut u = vec![0.0; m];
    let mut v = vec![0.0; n];
    let mut seen = vec![false; m + n];
    let mut stack = vec![0usize];
    seen[0] = true;
    while let Some(node) = stack.pop() {
        for &(other, bidx) in &adj[node] {
            if seen[other] {
                continue;
            }
            seen[other] = true;
            let c = basis[bidx];
            let cij = cost[c.row * n + c.col];
            if other >= m {
                v[other - m] = cij - u[c.row];
            } else {
                u[other] = cij - v[node - m];
            }
            stack.push(other);
        }
    }
    debug_assert!(seen.iter().all(|&s| s), "basis does not span all nodes");
    (u, v)
}

fn adjacency(basis: &[Cell], m: usize, n: usize) -> Vec<Vec<(usize, usize)>> {
    let mut adj = vec![Vec::new(); m + n];
    for (idx, c) in basis.iter().enumerate() {
        adj[c.row].push((m + c.col, idx));
        adj[m + c.col].push((c.row, idx));
    }
    adj
}

/// Basis cells along the tree path from `to` back to `from`, in walk order
/// starting at `to`'s side (the cell adjacent to `to` comes first).
fn tree_path(basis: &[Cell], m: usize, n: usize, from: usize, to: usize) -> Vec<usize> {
    let adj = adjacency(basis, m, n);
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; m + n];
    let mut seen = vec![false; m + n];
    let mut queue = std::collections::VecDeque::new();
    seen[from] = true;
    queue.push_back(from);
    while let Some(node) = queue.pop_front() {
        if node == to {
            break;
        }
        for &(other, bidx) in &adj[node] {
            if !seen[other] {
                seen[other] = true;
                parent[other] = Some((node, bidx));
                queue.push_back(other);
            }
        }
    }
    let mut path = Vec::new();
    let mut cur = to;
    while let Some((prev, bidx)) = parent[cur] {
        path.push(bidx);
        cur = prev;
    }
    debug_assert_eq!(cur, from, "entering cell endpoints not connected in basis");
    path
}
