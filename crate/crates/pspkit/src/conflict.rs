//! Conflict-graph view of an instance and the exact branch-and-bound oracle.
//!
//! Every other solver in the crate is tested against [`solve_bruteforce`],
//! so this module stays deliberately simple: an obviously-correct search
//! with deterministic output.

use std::collections::BTreeSet;

use crate::error::PspError;
use crate::instance::{PspInstance, Solution};
use crate::path::paths_edge_disjoint;

/// Default cap on `|P|` for the exponential oracle.
pub const DEFAULT_BRUTEFORCE_BUDGET: usize = 30;

/// One vertex per path, an edge whenever two paths share a graph edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConflictGraph {
    vertex_count: usize,
    adjacency: Vec<BTreeSet<usize>>,
}

impl ConflictGraph {
    pub fn new(vertex_count: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut adjacency = vec![BTreeSet::new(); vertex_count];
        for (i, j) in edges {
            assert!(i != j && i < vertex_count && j < vertex_count);
            adjacency[i].insert(j);
            adjacency[j].insert(i);
        }
        ConflictGraph { vertex_count, adjacency }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(|s| s.len()).sum::<usize>() / 2
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adjacency[i].contains(&j)
    }

    pub fn neighbors(&self, i: usize) -> &BTreeSet<usize> {
        &self.adjacency[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adjacency[i].len()
    }

    /// Edges as ordered pairs (i < j), ascending.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.vertex_count {
            for &j in self.adjacency[i].range((i + 1)..) {
                out.push((i, j));
            }
        }
        out
    }
}

/// Adjacency is exactly pairwise edge intersection of the path collection.
pub fn build_conflict_graph(instance: &PspInstance) -> ConflictGraph {
    let paths = instance.paths();
    let mut edges = Vec::new();
    for i in 0..paths.len() {
        for j in (i + 1)..paths.len() {
            if !paths_edge_disjoint(&paths[i], &paths[j]) {
                edges.push((i, j));
            }
        }
    }
    ConflictGraph::new(paths.len(), edges)
}

/// DIMACS-like text export: `p edge <n> <m>` then 1-based `e i j` lines.
pub fn conflict_dimacs(cg: &ConflictGraph) -> String {
    let mut out = format!("p edge {} {}", cg.vertex_count(), cg.edge_count());
    for (i, j) in cg.edges() {
        out.push_str(&format!("\ne {} {}", i + 1, j + 1));
    }
    out
}

/// Maximum independent set, deterministic: among all maximum sets the one
/// whose sorted index sequence is lexicographically smallest.
pub fn maximum_independent_set(cg: &ConflictGraph) -> BTreeSet<usize> {
    let all: Vec<usize> = (0..cg.vertex_count()).collect();
    let best = mis_size(cg, &all, usize::MAX);

    let mut chosen: BTreeSet<usize> = BTreeSet::new();
    let mut pool = all;
    while chosen.len() < best {
        let need = best - chosen.len();
        let mut fixed = None;
        for (pos, &v) in pool.iter().enumerate() {
            let rest: Vec<usize> = pool[pos + 1..]
                .iter()
                .copied()
                .filter(|&u| !cg.has_edge(u, v))
                .collect();
            if 1 + mis_size(cg, &rest, need - 1) == need {
                fixed = Some((v, rest));
                break;
            }
        }
        let (v, rest) = fixed.expect("a maximum set extends the prefix");
        chosen.insert(v);
        pool = rest;
    }
    chosen
}

/// Branch-and-bound independent set size over `pool`, capped at `target`:
/// the search stops early once `target` is reached, so a return value of
/// `target` means "at least target". Pass `usize::MAX` to maximize fully.
fn mis_size(cg: &ConflictGraph, pool: &[usize], target: usize) -> usize {
    // greedy min-degree incumbent
    let mut best = greedy_independent(cg, pool);
    if best >= target {
        return target;
    }
    fn branch(cg: &ConflictGraph, pool: Vec<usize>, have: usize, best: &mut usize, target: usize) {
        if *best >= target {
            return;
        }
        if have + pool.len() <= *best {
            return; // cannot beat the incumbent
        }
        if pool.is_empty() {
            *best = (*best).max(have);
            return;
        }
        // no conflicts left: take everything
        let isolated = pool
            .iter()
            .all(|&v| pool.iter().all(|&u| u == v || !cg.has_edge(u, v)));
        if isolated {
            *best = (*best).max(have + pool.len());
            return;
        }
        // branch on a maximum-degree vertex within the pool
        let v = *pool
            .iter()
            .max_by_key(|&&v| {
                let d = pool.iter().filter(|&&u| u != v && cg.has_edge(u, v)).count();
                (d, std::cmp::Reverse(v))
            })
            .unwrap();
        // include v
        let without_nv: Vec<usize> = pool
            .iter()
            .copied()
            .filter(|&u| u != v && !cg.has_edge(u, v))
            .collect();
        branch(cg, without_nv, have + 1, best, target);
        // exclude v
        let without_v: Vec<usize> = pool.iter().copied().filter(|&u| u != v).collect();
        branch(cg, without_v, have, best, target);
    }
    branch(cg, pool.to_vec(), 0, &mut best, target);
    best.min(target)
}

fn greedy_independent(cg: &ConflictGraph, pool: &[usize]) -> usize {
    let mut remaining: Vec<usize> = pool.to_vec();
    let mut count = 0;
    while !remaining.is_empty() {
        let v = *remaining
            .iter()
            .min_by_key(|&&v| {
                let d = remaining.iter().filter(|&&u| u != v && cg.has_edge(u, v)).count();
                (d, v)
            })
            .unwrap();
        count += 1;
        remaining.retain(|&u| u != v && !cg.has_edge(u, v));
    }
    count
}

/// Exact oracle with the default path budget.
pub fn solve_bruteforce(instance: &PspInstance) -> Result<Solution, PspError> {
    solve_bruteforce_with_budget(instance, DEFAULT_BRUTEFORCE_BUDGET)
}

/// Exact maximum packing by maximum independent set on the conflict graph.
pub fn solve_bruteforce_with_budget(
    instance: &PspInstance,
    budget: usize,
) -> Result<Solution, PspError> {
    if instance.path_count() > budget {
        return Err(PspError::Budget {
            what: "bruteforce path count",
            limit: budget,
            actual: instance.path_count(),
        });
    }
    let cg = build_conflict_graph(instance);
    Ok(Solution::new(maximum_independent_set(&cg)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::instance::{verify_solution, PspInstance};
    use crate::path::SimplePath;

    fn path(vs: &[usize]) -> SimplePath {
        SimplePath::new(vs.to_vec()).unwrap()
    }

    fn instance(n: usize, edges: &[(usize, usize)], paths: &[&[usize]], k: usize) -> PspInstance {
        let g = Graph::new(n, edges.to_vec()).unwrap();
        let ps = paths.iter().map(|vs| path(vs)).collect();
        PspInstance::new(g, ps, k).unwrap()
    }

    #[test]
    fn conflict_edges_follow_shared_edges() {
        let inst = instance(4, &[(0, 1), (1, 2), (2, 3)], &[&[0, 1, 2], &[1, 2, 3]], 1);
        let cg = build_conflict_graph(&inst);
        assert_eq!(cg.edges(), vec![(0, 1)]);
    }

    #[test]
    fn disjoint_paths_make_edgeless_conflict_graph() {
        let inst = instance(4, &[(0, 1), (2, 3)], &[&[0, 1], &[2, 3]], 2);
        let cg = build_conflict_graph(&inst);
        assert_eq!(cg.edge_count(), 0);
        let sol = solve_bruteforce(&inst).unwrap();
        assert_eq!(sol.len(), 2);
    }

    #[test]
    fn three_paths_through_one_edge_form_a_triangle() {
        let inst = instance(
            3,
            &[(0, 1), (1, 2)],
            &[&[0, 1], &[0, 1, 2], &[1, 0]],
            1,
        );
        let cg = build_conflict_graph(&inst);
        assert_eq!(cg.edge_count(), 3);
        assert_eq!(solve_bruteforce(&inst).unwrap().len(), 1);
    }

    #[test]
    fn star_instance_packs_one() {
        // enumeration over all 8 subsets gives optimum 1
        let inst = instance(
            4,
            &[(0, 1), (0, 2), (0, 3)],
            &[&[1, 0, 2], &[2, 0, 3], &[1, 0, 3]],
            1,
        );
        assert_eq!(solve_bruteforce(&inst).unwrap().len(), 1);
    }

    #[test]
    fn oracle_output_is_always_valid() {
        let inst = instance(
            5,
            &[(0, 1), (1, 2), (2, 3), (3, 4)],
            &[&[0, 1, 2], &[2, 3, 4], &[1, 2, 3]],
            2,
        );
        let sol = solve_bruteforce(&inst).unwrap();
        assert!(verify_solution(&inst, &sol).valid);
        assert_eq!(sol.len(), 2);
    }

    #[test]
    fn budget_guard_trips() {
        let inst = instance(2, &[(0, 1)], &[&[0, 1], &[1, 0]], 1);
        match solve_bruteforce_with_budget(&inst, 1) {
            Err(PspError::Budget { .. }) => {}
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn lexicographically_smallest_maximum_is_returned() {
        // vertices 0-1 conflict; {0,2} and {1,2} are both maximum; expect {0,2}
        let cg = ConflictGraph::new(3, vec![(0, 1)]);
        let mis = maximum_independent_set(&cg);
        assert_eq!(mis.into_iter().collect::<Vec<_>>(), vec![0, 2]);
    }

    #[test]
    fn dimacs_export_shape() {
        let cg = ConflictGraph::new(3, vec![(0, 1), (1, 2)]);
        assert_eq!(conflict_dimacs(&cg), "p edge 3 2\ne 1 2\ne 2 3");
    }
}
