use std::collections::BTreeSet;

use crate::error::PspError;

/// An undirected edge stored canonically with the smaller endpoint first.
///
/// Membership queries through [`Edge::new`] are therefore insensitive to
/// the orientation callers use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge(usize, usize);

impl Edge {
    /// Canonicalizes `(u, v)`. Panics on a self-loop; loops are rejected by
    /// every public construction path before edges are formed.
    pub fn new(u: usize, v: usize) -> Self {
        assert!(u != v, "self-loop edge ({u},{v})");
        if u < v {
            Edge(u, v)
        } else {
            Edge(v, u)
        }
    }

    pub fn u(&self) -> usize {
        self.0
    }

    pub fn v(&self) -> usize {
        self.1
    }

    pub fn endpoints(&self) -> (usize, usize) {
        (self.0, self.1)
    }

    /// The endpoint different from `x`; panics if `x` is not an endpoint.
    pub fn other(&self, x: usize) -> usize {
        if x == self.0 {
            self.1
        } else {
            assert_eq!(x, self.1, "vertex {x} not on edge {self:?}");
            self.0
        }
    }

    pub fn touches(&self, x: usize) -> bool {
        self.0 == x || self.1 == x
    }
}

impl std::fmt::Display for Edge {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{{},{}}}", self.0, self.1)
    }
}

/// A finite simple undirected graph over dense 0-based vertex ids.
#[derive(Debug, Clone)]
pub struct Graph {
    vertex_count: usize,
    edges: BTreeSet<Edge>,
    adjacency: Vec<Vec<usize>>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.vertex_count == other.vertex_count && self.edges == other.edges
    }
}

impl Eq for Graph {}

impl Graph {
    /// Builds a graph from an edge list. Rejects self-loops, duplicate edges
    /// and endpoints outside `0..vertex_count`.
    pub fn new(
        vertex_count: usize,
        edge_list: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, PspError> {
        let mut edges = BTreeSet::new();
        for (u, v) in edge_list {
            if u == v {
                return Err(PspError::invalid("graph", format!("self-loop at vertex {u}")));
            }
            if u >= vertex_count || v >= vertex_count {
                return Err(PspError::invalid(
                    "graph",
                    format!("edge ({u},{v}) out of range for {vertex_count} vertices"),
                ));
            }
            if !edges.insert(Edge::new(u, v)) {
                return Err(PspError::invalid("graph", format!("duplicate edge ({u},{v})")));
            }
        }
        Ok(Self::from_edge_set(vertex_count, edges))
    }

    pub(crate) fn from_edge_set(vertex_count: usize, edges: BTreeSet<Edge>) -> Self {
        let mut adjacency = vec![Vec::new(); vertex_count];
        for e in &edges {
            adjacency[e.u()].push(e.v());
            adjacency[e.v()].push(e.u());
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Graph {
            vertex_count,
            edges,
            adjacency,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_set(&self) -> &BTreeSet<Edge> {
        &self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v && self.edges.contains(&Edge::new(u, v))
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.vertex_count).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Connected components as sorted vertex lists, ordered by smallest member.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.vertex_count];
        let mut components = Vec::new();
        for start in 0..self.vertex_count {
            if seen[start] {
                continue;
            }
            let mut stack = vec![start];
            let mut comp = Vec::new();
            seen[start] = true;
            while let Some(v) = stack.pop() {
                comp.push(v);
                for &w in self.neighbors(v) {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            components.push(comp);
        }
        components
    }

    /// Feedback edge number: |E| - |V| + number of components.
    pub fn feedback_edge_number(&self) -> usize {
        let c = self.connected_components().len();
        (self.edge_count() + c).saturating_sub(self.vertex_count)
    }

    pub fn is_forest(&self) -> bool {
        self.feedback_edge_number() == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_edge_storage() {
        let e = Edge::new(5, 2);
        assert_eq!(e.endpoints(), (2, 5));
        assert_eq!(Edge::new(2, 5), e);
    }

    #[test]
    fn rejects_self_loops_and_duplicates() {
        assert!(Graph::new(3, vec![(0, 0)]).is_err());
        assert!(Graph::new(3, vec![(0, 1), (1, 0)]).is_err());
        assert!(Graph::new(2, vec![(0, 2)]).is_err());
    }

    #[test]
    fn feedback_edge_number_counts_independent_cycles() {
        // triangle plus isolated vertex: lambda = 3 - 4 + 2 = 1
        let g = Graph::new(4, vec![(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(g.feedback_edge_number(), 1);
        assert!(!g.is_forest());

        let tree = Graph::new(4, vec![(0, 1), (1, 2), (1, 3)]).unwrap();
        assert_eq!(tree.feedback_edge_number(), 0);
        assert!(tree.is_forest());
    }

    #[test]
    fn components_are_sorted() {
        let g = Graph::new(5, vec![(3, 4), (0, 1)]).unwrap();
        assert_eq!(g.connected_components(), vec![vec![0, 1], vec![2], vec![3, 4]]);
    }
}
