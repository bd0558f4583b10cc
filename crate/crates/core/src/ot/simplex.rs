//! Primal network simplex for uncapacitated bipartite transportation problems.
//!
//! The basis is a spanning tree over the source and sink nodes plus an
//! artificial root. Tree arcs are kept strongly feasible (every zero-flow arc
//! points away from the root) and the leaving arc is the last blocking arc met
//! when traversing the pivot cycle from its apex, which rules out cycling.
//! Pricing uses block search over the arc list.

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub(crate) struct FlowSolution {
    /// Flow on each input arc.
    pub flow: Vec<f64>,
    /// Column potentials `v` of an optimal dual `(u, v)`: `u_i + v_j ≤ c_ij`
    /// with equality on arcs carrying flow.
    pub col_potential: Vec<f64>,
    /// `Σ flow · cost` over the input arcs.
    pub cost: f64,
}

struct Tree {
    parent: Vec<usize>,
    parent_arc: Vec<usize>,
    depth: Vec<usize>,
    potential: Vec<f64>,
    adjacency: Vec<Vec<usize>>,
}

const NONE: usize = usize::MAX;

/// Solves `min Σ c_a x_a` over flows from rows (supplies `a`) to columns
/// (demands `b`) along the given arcs `(row, col, cost)`.
pub(crate) fn solve_transport(
    a: &[f64],
    b: &[f64],
    arcs: &[(usize, usize, f64)],
) -> Result<FlowSolution> {
    let m = a.len();
    let n = b.len();
    let nodes = m + n;
    let root = nodes;
    let real = arcs.len();

    let max_cost = arcs.iter().fold(0.0f64, |acc, a| acc.max(a.2.abs()));
    let art_cost = (max_cost + 1.0) * (nodes as f64 + 1.0);

    // Arc endpoints over node ids: rows 0..m, columns m..m+n, root last.
    let mut src = Vec::with_capacity(real + nodes);
    let mut dst = Vec::with_capacity(real + nodes);
    let mut cost = Vec::with_capacity(real + nodes);
    for &(i, j, c) in arcs {
        debug_assert!(i < m && j < n);
        src.push(i);
        dst.push(m + j);
        cost.push(c);
    }
    let mut flow = vec![0.0; real + nodes];
    let mut tree = Tree {
        parent: vec![NONE; nodes + 1],
        parent_arc: vec![NONE; nodes + 1],
        depth: vec![0; nodes + 1],
        potential: vec![0.0; nodes + 1],
        adjacency: vec![Vec::new(); nodes + 1],
    };
    let mut in_tree = vec![false; real + nodes];
    for v in 0..nodes {
        let supply = if v < m { a[v] } else { -b[v - m] };
        let e = real + v;
        if supply > 0.0 {
            src.push(v);
            dst.push(root);
            flow[e] = supply;
        } else {
            src.push(root);
            dst.push(v);
            flow[e] = -supply;
        }
        cost.push(art_cost);
        in_tree[e] = true;
        tree.adjacency[v].push(e);
        tree.adjacency[root].push(e);
    }
    tree.rebuild(root, &src, &dst, &cost);

    let total = src.len();
    let tol = 1e-12 * (max_cost + 1.0);
    let block = ((total as f64).sqrt().ceil() as usize).max(16).min(total);
    let max_pivots = 50 * total.max(1000) + 100 * nodes * nodes;
    let mut next = 0usize;
    let mut pivots = 0usize;

    loop {
        // Block pricing.
        let mut entering = NONE;
        let mut best = -tol;
        let mut scanned = 0;
        while scanned < total {
            let end = (scanned + block).min(total);
            for _ in scanned..end {
                let e = next;
                next += 1;
                if next == total {
                    next = 0;
                }
                if in_tree[e] {
                    continue;
                }
                let rc = cost[e] + tree.potential[src[e]] - tree.potential[dst[e]];
                if rc < best {
                    best = rc;
                    entering = e;
                }
            }
            scanned = end;
            if entering != NONE {
                break;
            }
        }
        if entering == NONE {
            break;
        }
        pivots += 1;
        if pivots > max_pivots {
            return Err(Error::SolverStalled(pivots));
        }
        let leaving = tree.pivot(entering, &src, &dst, &mut flow);
        in_tree[entering] = true;
        in_tree[leaving] = false;
        let (ls, ld) = (src[leaving], dst[leaving]);
        tree.adjacency[ls].retain(|&x| x != leaving);
        tree.adjacency[ld].retain(|&x| x != leaving);
        tree.adjacency[src[entering]].push(entering);
        tree.adjacency[dst[entering]].push(entering);
        tree.rebuild(root, &src, &dst, &cost);
    }

    let residual: f64 = flow[real..].iter().sum();
    let mass: f64 = a.iter().sum::<f64>().max(b.iter().sum());
    if residual > 1e-9 * mass.max(1.0) {
        return Err(Error::LpFailure(format!(
            "infeasible transport problem (unrouted mass {residual:e})"
        )));
    }

    flow.truncate(real);
    let total_cost = flow.iter().zip(arcs).map(|(f, a)| f * a.2).sum();
    let col_potential = (0..n).map(|j| tree.potential[m + j]).collect();
    Ok(FlowSolution {
        flow,
        col_potential,
        cost: total_cost,
    })
}

impl Tree {
    fn rebuild(&mut self, root: usize, src: &[usize], dst: &[usize], cost: &[f64]) {
        self.parent[root] = NONE;
        self.parent_arc[root] = NONE;
        self.depth[root] = 0;
        self.potential[root] = 0.0;
        let mut stack = vec![root];
        while let Some(u) = stack.pop() {
            for k in 0..self.adjacency[u].len() {
                let e = self.adjacency[u][k];
                if e == self.parent_arc[u] {
                    continue;
                }
                let (v, pot) = if src[e] == u {
                    (dst[e], self.potential[u] + cost[e])
                } else {
                    (src[e], self.potential[u] - cost[e])
                };
                self.parent[v] = u;
                self.parent_arc[v] = e;
                self.depth[v] = self.depth[u] + 1;
                self.potential[v] = pot;
                stack.push(v);
            }
        }
    }

    /// Pushes flow around the cycle closed by `entering` and returns the arc
    /// that leaves the basis.
    fn pivot(&self, entering: usize, src: &[usize], dst: &[usize], flow: &mut [f64]) -> usize {
        let (s, t) = (src[entering], dst[entering]);
        // Apex of the cycle.
        let (mut x, mut y) = (s, t);
        while self.depth[x] > self.depth[y] {
            x = self.parent[x];
        }
        while self.depth[y] > self.depth[x] {
            y = self.parent[y];
        }
        while x != y {
            x = self.parent[x];
            y = self.parent[y];
        }
        let apex = x;

        // Flow runs apex → s (down), across `entering`, then t → apex (up).
        let mut delta = f64::INFINITY;
        let mut leaving = entering;
        let mut u = s;
        while u != apex {
            let e = self.parent_arc[u];
            // Downward flow decreases arcs oriented child → parent.
            if src[e] == u && flow[e] < delta {
                delta = flow[e];
                leaving = e;
            }
            u = self.parent[u];
        }
        let mut u = t;
        while u != apex {
            let e = self.parent_arc[u];
            // Upward flow decreases arcs oriented parent → child.
            if dst[e] == u && flow[e] <= delta {
                delta = flow[e];
                leaving = e;
            }
            u = self.parent[u];
        }
        debug_assert!(delta.is_finite());

        if delta > 0.0 {
            flow[entering] += delta;
            let mut u = s;
            while u != apex {
                let e = self.parent_arc[u];
                if src[e] == u {
                    flow[e] -= delta;
                } else {
                    flow[e] += delta;
                }
                u = self.parent[u];
            }
            let mut u = t;
            while u != apex {
                let e = self.parent_arc[u];
                if dst[e] == u {
                    flow[e] -= delta;
                } else {
                    flow[e] += delta;
                }
                u = self.parent[u];
            }
        }
        flow[leaving] = 0.0;
        leaving
    }
}

/// Dense transport problem: every row can ship to every column.
pub(crate) fn solve_dense(a: &[f64], b: &[f64], cost: &[f64]) -> Result<FlowSolution> {
    let n = b.len();
    let arcs: Vec<(usize, usize, f64)> = cost
        .iter()
        .enumerate()
        .map(|(k, &c)| (k / n, k % n, c))
        .collect();
    solve_transport(a, b, &arcs)
}
