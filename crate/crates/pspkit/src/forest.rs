//! Maximum edge-disjoint path packing on forests.
//!
//! Paths are settled bottom-up at their topmost vertex: two still-live paths
//! rooted at the same vertex conflict somewhere below iff they enter through
//! a common child edge, so picking a maximum set at each vertex reduces to a
//! maximum matching over that vertex's child edges.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::PspError;
use crate::graph::{Edge, Graph};
use crate::instance::Solution;
use crate::matching::lex_min_maximum_labeled_matching;
use crate::path::SimplePath;

/// A subgraph of a host graph, named by its vertex and edge subsets.
/// Residual queries are expressed by dropping edges.
#[derive(Debug, Clone)]
pub struct SubgraphRef<'g> {
    graph: &'g Graph,
    vertices: BTreeSet<usize>,
    edges: BTreeSet<Edge>,
}

impl<'g> SubgraphRef<'g> {
    pub fn new(
        graph: &'g Graph,
        vertices: impl IntoIterator<Item = usize>,
        edges: impl IntoIterator<Item = Edge>,
    ) -> Result<Self, PspError> {
        let vertices: BTreeSet<usize> = vertices.into_iter().collect();
        let edges: BTreeSet<Edge> = edges.into_iter().collect();
        for e in &edges {
            if !graph.edge_set().contains(e) {
                return Err(PspError::invalid("subgraph", format!("edge {e} not in host graph")));
            }
            if !vertices.contains(&e.u()) || !vertices.contains(&e.v()) {
                return Err(PspError::invalid(
                    "subgraph",
                    format!("edge {e} has an endpoint outside the vertex set"),
                ));
            }
        }
        if let Some(&v) = vertices.iter().next_back() {
            if v >= graph.vertex_count() {
                return Err(PspError::invalid("subgraph", format!("vertex {v} not in host graph")));
            }
        }
        Ok(SubgraphRef { graph, vertices, edges })
    }

    /// The whole host graph as a subgraph.
    pub fn full(graph: &'g Graph) -> Self {
        SubgraphRef {
            graph,
            vertices: (0..graph.vertex_count()).collect(),
            edges: graph.edge_set().clone(),
        }
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn vertices(&self) -> &BTreeSet<usize> {
        &self.vertices
    }

    pub fn edges(&self) -> &BTreeSet<Edge> {
        &self.edges
    }

    pub fn contains_edge(&self, e: Edge) -> bool {
        self.edges.contains(&e)
    }

    /// Residual subgraph with `removed` edges dropped; vertices are kept.
    pub fn without_edges(&self, removed: impl IntoIterator<Item = Edge>) -> SubgraphRef<'g> {
        let removed: BTreeSet<Edge> = removed.into_iter().collect();
        SubgraphRef {
            graph: self.graph,
            vertices: self.vertices.clone(),
            edges: self.edges.difference(&removed).copied().collect(),
        }
    }

    /// True when the edge subset is acyclic.
    pub fn is_forest(&self) -> bool {
        let ids: Vec<usize> = self.vertices.iter().copied().collect();
        let index: HashMap<usize, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut dsu: Vec<usize> = (0..ids.len()).collect();
        fn find(dsu: &mut Vec<usize>, mut x: usize) -> usize {
            while dsu[x] != x {
                dsu[x] = dsu[dsu[x]];
                x = dsu[x];
            }
            x
        }
        for e in &self.edges {
            let (a, b) = (index[&e.u()], index[&e.v()]);
            let (ra, rb) = (find(&mut dsu, a), find(&mut dsu, b));
            if ra == rb {
                return false;
            }
            dsu[ra] = rb;
        }
        true
    }
}

/// Indices of the paths whose edge set lies entirely inside `h`.
pub fn internal_paths(h: &SubgraphRef<'_>, paths: &[SimplePath]) -> Vec<usize> {
    paths
        .iter()
        .enumerate()
        .filter(|(_, p)| p.edges().iter().all(|e| h.contains_edge(*e)))
        .map(|(i, _)| i)
        .collect()
}

/// Maximum edge-disjoint subset of the paths internal to the forest `h`.
/// Rejects cyclic subgraphs. Ties are broken toward the smallest path
/// indices so results are reproducible.
pub fn solve_forest(h: &SubgraphRef<'_>, paths: &[SimplePath]) -> Result<Solution, PspError> {
    if !h.is_forest() {
        return Err(PspError::NotAForest);
    }
    let candidates = internal_paths(h, paths);
    if candidates.is_empty() {
        return Ok(Solution::empty());
    }

    // root every tree at its smallest vertex, record parent/depth
    let mut adjacency: HashMap<usize, Vec<usize>> = HashMap::new();
    for e in h.edges() {
        adjacency.entry(e.u()).or_default().push(e.v());
        adjacency.entry(e.v()).or_default().push(e.u());
    }
    let mut depth: HashMap<usize, usize> = HashMap::new();
    let mut order: Vec<usize> = Vec::new();
    for &root in h.vertices() {
        if depth.contains_key(&root) {
            continue;
        }
        depth.insert(root, 0);
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            order.push(v);
            let d = depth[&v];
            if let Some(ns) = adjacency.get(&v) {
                for &w in ns {
                    if !depth.contains_key(&w) {
                        depth.insert(w, d + 1);
                        stack.push(w);
                    }
                }
            }
        }
    }

    // anchor each candidate at its topmost vertex with its 1-2 entry edges
    let mut by_anchor: BTreeMap<usize, Vec<(usize, Vec<Edge>)>> = BTreeMap::new();
    for &pi in &candidates {
        let vs = paths[pi].vertices();
        let (pos, _) = vs
            .iter()
            .enumerate()
            .min_by_key(|(_, v)| depth[v])
            .expect("path is nonempty");
        let anchor = vs[pos];
        let mut entry_edges = Vec::new();
        if pos > 0 {
            entry_edges.push(Edge::new(anchor, vs[pos - 1]));
        }
        if pos + 1 < vs.len() {
            entry_edges.push(Edge::new(anchor, vs[pos + 1]));
        }
        by_anchor.entry(anchor).or_default().push((pi, entry_edges));
    }

    // settle anchors bottom-up
    let mut vertices_by_depth: Vec<usize> = by_anchor.keys().copied().collect();
    vertices_by_depth.sort_by_key(|v| (std::cmp::Reverse(depth[v]), *v));

    let mut used_edges: BTreeSet<Edge> = BTreeSet::new();
    let mut picked = Solution::empty();

    for v in vertices_by_depth {
        let mut node_ids: BTreeMap<Edge, usize> = BTreeMap::new();
        let mut next_node = 0usize;
        let mut candidates_here: Vec<(usize, usize, usize)> = Vec::new();
        let entries = &by_anchor[&v];
        let mut dummy_base = entries
            .iter()
            .flat_map(|(_, es)| es.iter())
            .collect::<BTreeSet<_>>()
            .len();
        for (pi, entry_edges) in entries {
            if paths[*pi].edges().iter().any(|e| used_edges.contains(e)) {
                continue; // dead: an edge was consumed deeper down
            }
            let mut ids = Vec::new();
            for e in entry_edges {
                let id = *node_ids.entry(*e).or_insert_with(|| {
                    let id = next_node;
                    next_node += 1;
                    id
                });
                ids.push(id);
            }
            let (a, b) = match ids.as_slice() {
                [a] => {
                    let d = dummy_base;
                    dummy_base += 1;
                    (*a, d)
                }
                [a, b] => (*a, *b),
                _ => unreachable!("a path enters its anchor by 1 or 2 edges"),
            };
            candidates_here.push((*pi, a, b));
        }
        if candidates_here.is_empty() {
            continue;
        }
        let chosen = lex_min_maximum_labeled_matching(dummy_base, &candidates_here);
        for pi in chosen {
            used_edges.extend(paths[pi].edges().iter().copied());
            picked.insert(pi);
        }
    }

    Ok(picked)
}
