//! Tree decompositions, the lift from a graph decomposition to its conflict
//! graph, and a maximum-independent-set DP over nice decompositions.

use std::collections::{BTreeSet, HashMap};

use crate::conflict::{build_conflict_graph, ConflictGraph};
use crate::error::PspError;
use crate::graph::Graph;
use crate::instance::{PspInstance, Solution};

/// Default cap on the width of the decomposition the DP runs on.
pub const DEFAULT_WIDTH_BUDGET: usize = 22;

/// Bags over a tree skeleton. Bag ids are dense 0-based; the skeleton must
/// be a tree on the bags (a path shape is the special case used by path
/// decompositions).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub bags: Vec<BTreeSet<usize>>,
    pub skeleton: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    /// Width: largest bag size minus one (0 for empty decompositions).
    pub fn width(&self) -> usize {
        self.bags.iter().map(|b| b.len()).max().unwrap_or(0).saturating_sub(1)
    }

    pub fn bag_count(&self) -> usize {
        self.bags.len()
    }

    fn skeleton_adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.bags.len()];
        for &(a, b) in &self.skeleton {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }
}

/// Checks the three decomposition properties against `graph`, plus that the
/// skeleton really is a tree over the bags.
pub fn validate_decomposition(graph: &Graph, dec: &TreeDecomposition) -> bool {
    decomposition_violations(graph, dec).is_empty()
}

/// Reasons a decomposition fails to cover `graph`; empty when it is valid.
pub fn decomposition_violations(graph: &Graph, dec: &TreeDecomposition) -> Vec<String> {
    let mut reasons = Vec::new();
    let bag_count = dec.bags.len();
    if bag_count == 0 {
        if graph.vertex_count() != 0 {
            reasons.push("no bags for a nonempty graph".to_string());
        }
        return reasons;
    }
    for &(a, b) in &dec.skeleton {
        if a >= bag_count || b >= bag_count || a == b {
            reasons.push(format!("skeleton edge ({a},{b}) is malformed"));
            return reasons;
        }
    }
    // skeleton is a tree: n-1 edges and connected
    if dec.skeleton.len() + 1 != bag_count {
        reasons.push(format!(
            "skeleton has {} edges for {} bags, not a tree",
            dec.skeleton.len(),
            bag_count
        ));
        return reasons;
    }
    let adj = dec.skeleton_adjacency();
    {
        let mut seen = vec![false; bag_count];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut visited = 0;
        while let Some(v) = stack.pop() {
            visited += 1;
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        if visited != bag_count {
            reasons.push("skeleton is disconnected".to_string());
            return reasons;
        }
    }
    // every vertex in some bag
    let mut covered = vec![false; graph.vertex_count()];
    for bag in &dec.bags {
        for &v in bag {
            if v >= graph.vertex_count() {
                reasons.push(format!("bag vertex {v} is not a graph vertex"));
                return reasons;
            }
            covered[v] = true;
        }
    }
    for (v, c) in covered.iter().enumerate() {
        if !c {
            reasons.push(format!("vertex {v} is in no bag"));
        }
    }
    // every edge inside some bag
    for e in graph.edges() {
        if !dec
            .bags
            .iter()
            .any(|bag| bag.contains(&e.u()) && bag.contains(&e.v()))
        {
            reasons.push(format!("edge {e} is covered by no bag"));
        }
    }
    if !reasons.is_empty() {
        return reasons;
    }
    // the bags holding each vertex form a connected subtree
    for v in 0..graph.vertex_count() {
        let holder: Vec<usize> = (0..bag_count).filter(|&b| dec.bags[b].contains(&v)).collect();
        let inside: BTreeSet<usize> = holder.iter().copied().collect();
        let mut seen = BTreeSet::new();
        let mut stack = vec![holder[0]];
        seen.insert(holder[0]);
        while let Some(b) = stack.pop() {
            for &w in &adj[b] {
                if inside.contains(&w) && seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        if seen.len() != holder.len() {
            reasons.push(format!("bags holding vertex {v} are not connected"));
        }
    }
    reasons
}

/// Min-fill elimination heuristic. Produces a valid decomposition whose
/// width depends on the ordering quality; validity never does.
pub fn heuristic_tree_decomposition(graph: &Graph) -> TreeDecomposition {
    let n = graph.vertex_count();
    if n == 0 {
        return TreeDecomposition {
            bags: vec![BTreeSet::new()],
            skeleton: vec![],
        };
    }

    // working fill graph
    let mut adj: Vec<BTreeSet<usize>> = (0..n)
        .map(|v| graph.neighbors(v).iter().copied().collect())
        .collect();
    let mut alive: BTreeSet<usize> = (0..n).collect();
    let mut elim_order: Vec<usize> = Vec::with_capacity(n);
    let mut bags: Vec<BTreeSet<usize>> = Vec::with_capacity(n);

    while !alive.is_empty() {
        // vertex whose neighborhood needs the fewest fill edges
        let v = *alive
            .iter()
            .min_by_key(|&&v| {
                let ns: Vec<usize> = adj[v].iter().copied().collect();
                let mut fill = 0usize;
                for (i, &a) in ns.iter().enumerate() {
                    for &b in ns.iter().skip(i + 1) {
                        if !adj[a].contains(&b) {
                            fill += 1;
                        }
                    }
                }
                (fill, v)
            })
            .unwrap();

        let neighbors: Vec<usize> = adj[v].iter().copied().collect();
        let mut bag: BTreeSet<usize> = neighbors.iter().copied().collect();
        bag.insert(v);
        bags.push(bag);
        elim_order.push(v);

        for (i, &a) in neighbors.iter().enumerate() {
            for &b in neighbors.iter().skip(i + 1) {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        for &a in &neighbors {
            adj[a].remove(&v);
        }
        adj[v].clear();
        alive.remove(&v);
    }

    // bag of v connects to the bag of its earliest-eliminated neighbor
    let position: HashMap<usize, usize> =
        elim_order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut skeleton = Vec::new();
    let mut roots = Vec::new();
    for (i, &v) in elim_order.iter().enumerate() {
        let parent = bags[i]
            .iter()
            .filter(|&&u| u != v)
            .map(|&u| position[&u])
            .min();
        match parent {
            Some(p) => skeleton.push((i, p)),
            None => roots.push(i),
        }
    }
    // chain component roots so the skeleton is a single tree
    for w in roots.windows(2) {
        skeleton.push((w[0], w[1]));
    }

    TreeDecomposition { bags, skeleton }
}

/// The `(width+1) * Δ^r` cap on lifted bag sizes, saturating.
pub fn lifted_bag_bound(width: usize, max_degree: usize, max_path_len: usize) -> u128 {
    let mut pow: u128 = 1;
    for _ in 0..max_path_len {
        pow = pow.saturating_mul(max_degree as u128);
    }
    (width as u128 + 1).saturating_mul(pow)
}

/// Lifts a decomposition of the instance graph to one of the conflict
/// graph: same skeleton, bag of paths touching the original bag.
pub fn lift_to_conflict(dec: &TreeDecomposition, instance: &PspInstance) -> TreeDecomposition {
    let bags = dec
        .bags
        .iter()
        .map(|bag| {
            instance
                .paths()
                .iter()
                .enumerate()
                .filter(|(_, p)| p.vertices().iter().any(|v| bag.contains(v)))
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    TreeDecomposition {
        bags,
        skeleton: dec.skeleton.clone(),
    }
}

// ---------------------------------------------------------------------------
// nice decomposition + independent set DP
// ---------------------------------------------------------------------------

enum NiceNode {
    Leaf,
    Introduce { vertex: usize, child: usize },
    Forget { vertex: usize, child: usize },
    Join { left: usize, right: usize },
}

struct NiceDecomposition {
    nodes: Vec<(NiceNode, Vec<usize>)>, // node, sorted bag
    root: usize,
}

fn build_nice(dec: &TreeDecomposition) -> NiceDecomposition {
    let mut nodes: Vec<(NiceNode, Vec<usize>)> = Vec::new();

    fn leaf_chain(nodes: &mut Vec<(NiceNode, Vec<usize>)>, target: &[usize]) -> usize {
        nodes.push((NiceNode::Leaf, Vec::new()));
        let mut cur = nodes.len() - 1;
        let mut bag: Vec<usize> = Vec::new();
        for &v in target {
            bag.push(v);
            bag.sort_unstable();
            nodes.push((NiceNode::Introduce { vertex: v, child: cur }, bag.clone()));
            cur = nodes.len() - 1;
        }
        cur
    }

    /// forgets then introduces to morph the chain ending at `cur` (with bag
    /// `from`) into one ending with bag `to`
    fn morph(
        nodes: &mut Vec<(NiceNode, Vec<usize>)>,
        mut cur: usize,
        from: &[usize],
        to: &[usize],
    ) -> usize {
        let to_set: BTreeSet<usize> = to.iter().copied().collect();
        let from_set: BTreeSet<usize> = from.iter().copied().collect();
        let mut bag: Vec<usize> = from.to_vec();
        for &v in from {
            if !to_set.contains(&v) {
                bag.retain(|&x| x != v);
                nodes.push((NiceNode::Forget { vertex: v, child: cur }, bag.clone()));
                cur = nodes.len() - 1;
            }
        }
        for &v in to {
            if !from_set.contains(&v) {
                bag.push(v);
                bag.sort_unstable();
                nodes.push((NiceNode::Introduce { vertex: v, child: cur }, bag.clone()));
                cur = nodes.len() - 1;
            }
        }
        cur
    }

    fn build(
        dec: &TreeDecomposition,
        adj: &[Vec<usize>],
        nodes: &mut Vec<(NiceNode, Vec<usize>)>,
        bag_id: usize,
        parent: Option<usize>,
    ) -> usize {
        let bag: Vec<usize> = dec.bags[bag_id].iter().copied().collect();
        let children: Vec<usize> = adj[bag_id]
            .iter()
            .copied()
            .filter(|&c| Some(c) != parent)
            .collect();
        if children.is_empty() {
            return leaf_chain(nodes, &bag);
        }
        let mut chains = Vec::new();
        for c in children {
            let sub = build(dec, adj, nodes, c, Some(bag_id));
            let child_bag: Vec<usize> = dec.bags[c].iter().copied().collect();
            chains.push(morph(nodes, sub, &child_bag, &bag));
        }
        let mut cur = chains[0];
        for &other in &chains[1..] {
            nodes.push((NiceNode::Join { left: cur, right: other }, bag.clone()));
            cur = nodes.len() - 1;
        }
        cur
    }

    if dec.bags.is_empty() {
        nodes.push((NiceNode::Leaf, Vec::new()));
        return NiceDecomposition { nodes, root: 0 };
    }

    let adj = dec.skeleton_adjacency();
    let top = build(dec, &adj, &mut nodes, 0, None);
    // forget the root bag down to the empty set
    let root_bag: Vec<usize> = dec.bags[0].iter().copied().collect();
    let empty: Vec<usize> = Vec::new();
    let root = morph(&mut nodes, top, &root_bag, &empty);
    NiceDecomposition { nodes, root }
}

/// Maximum independent set by DP over a nice version of `dec`, which must
/// be a valid decomposition of `conflict`. The width guard bounds the
/// 2^(width+1) table size.
pub fn mis_treewidth(
    conflict: &ConflictGraph,
    dec: &TreeDecomposition,
    width_budget: usize,
) -> Result<BTreeSet<usize>, PspError> {
    if dec.width() > width_budget {
        return Err(PspError::Budget {
            what: "decomposition width",
            limit: width_budget,
            actual: dec.width(),
        });
    }
    debug_assert!(
        {
            let host = Graph::new(
                conflict.vertex_count(),
                conflict.edges(),
            )
            .expect("conflict graph is simple");
            validate_decomposition(&host, dec)
        },
        "decomposition does not cover the conflict graph"
    );

    let nice = build_nice(dec);
    let node_count = nice.nodes.len();
    let mut tables: Vec<HashMap<u64, usize>> = Vec::with_capacity(node_count);

    let independent = |bag: &[usize], mask: u64| -> bool {
        let members: Vec<usize> = bag
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &v)| v)
            .collect();
        for (i, &a) in members.iter().enumerate() {
            for &b in members.iter().skip(i + 1) {
                if conflict.has_edge(a, b) {
                    return false;
                }
            }
        }
        true
    };

    for (node, bag) in &nice.nodes {
        let table: HashMap<u64, usize> = match node {
            NiceNode::Leaf => [(0u64, 0usize)].into_iter().collect(),
            NiceNode::Introduce { vertex, child } => {
                let pos = bag.binary_search(vertex).expect("introduced vertex is in the bag");
                let child_table = &tables[*child];
                let mut table = HashMap::with_capacity(child_table.len() * 2);
                for (&cmask, &val) in child_table {
                    // re-space the child mask around the new position
                    let low = cmask & ((1u64 << pos) - 1);
                    let high = (cmask >> pos) << (pos + 1);
                    let without = low | high;
                    table.insert(without, val);
                    let with = without | 1 << pos;
                    if independent(bag, with) {
                        table.insert(with, val + 1);
                    }
                }
                table
            }
            NiceNode::Forget { vertex, child } => {
                let child_bag = &nice.nodes[*child].1;
                let pos = child_bag
                    .binary_search(vertex)
                    .expect("forgotten vertex is in the child bag");
                let mut table: HashMap<u64, usize> = HashMap::new();
                for (&cmask, &val) in &tables[*child] {
                    let low = cmask & ((1u64 << pos) - 1);
                    let high = (cmask >> (pos + 1)) << pos;
                    let mask = low | high;
                    let entry = table.entry(mask).or_insert(0);
                    *entry = (*entry).max(val);
                }
                table
            }
            NiceNode::Join { left, right } => {
                let lt = &tables[*left];
                let rt = &tables[*right];
                let mut table = HashMap::new();
                for (&mask, &lv) in lt {
                    if let Some(&rv) = rt.get(&mask) {
                        let overlap = (mask.count_ones()) as usize;
                        table.insert(mask, lv + rv - overlap);
                    }
                }
                table
            }
        };
        tables.push(table);
    }

    // reconstruct downward from the empty root mask
    let mut chosen: BTreeSet<usize> = BTreeSet::new();
    let mut stack: Vec<(usize, u64)> = vec![(nice.root, 0)];
    while let Some((id, mask)) = stack.pop() {
        match &nice.nodes[id].0 {
            NiceNode::Leaf => {}
            NiceNode::Introduce { vertex, child } => {
                let bag = &nice.nodes[id].1;
                let pos = bag.binary_search(vertex).unwrap();
                if mask >> pos & 1 == 1 {
                    chosen.insert(*vertex);
                }
                let low = mask & ((1u64 << pos) - 1);
                let high = (mask >> (pos + 1)) << pos;
                stack.push((*child, low | high));
            }
            NiceNode::Forget { vertex, child } => {
                let child_bag = &nice.nodes[*child].1;
                let pos = child_bag.binary_search(vertex).unwrap();
                let low = mask & ((1u64 << pos) - 1);
                let high = (mask >> pos) << (pos + 1);
                let without = low | high;
                let with = without | 1 << pos;
                let val = tables[id][&mask];
                let child_table = &tables[*child];
                // prefer leaving the vertex out on ties
                if child_table.get(&without) == Some(&val) {
                    stack.push((*child, without));
                } else {
                    debug_assert_eq!(child_table.get(&with), Some(&val));
                    stack.push((*child, with));
                }
            }
            NiceNode::Join { left, right } => {
                stack.push((*left, mask));
                stack.push((*right, mask));
            }
        }
    }
    Ok(chosen)
}

/// Full pipeline: conflict graph, decomposition of the instance graph
/// (supplied or min-fill), lift, DP.
pub fn solve_tw(instance: &PspInstance) -> Result<Solution, PspError> {
    solve_tw_with(instance, None, DEFAULT_WIDTH_BUDGET)
}

pub fn solve_tw_with(
    instance: &PspInstance,
    decomposition: Option<&TreeDecomposition>,
    width_budget: usize,
) -> Result<Solution, PspError> {
    let dec_graph = match decomposition {
        Some(d) => {
            if !validate_decomposition(instance.graph(), d) {
                return Err(PspError::invalid(
                    "tree decomposition",
                    "does not cover the instance graph",
                ));
            }
            d.clone()
        }
        None => heuristic_tree_decomposition(instance.graph()),
    };
    let conflict = build_conflict_graph(instance);
    let lifted = lift_to_conflict(&dec_graph, instance);
    let chosen = mis_treewidth(&conflict, &lifted, width_budget)?;
    Ok(Solution::new(chosen))
}

// ---------------------------------------------------------------------------
// PACE-style text format
//
//   s td <#bags> <width+1> <n>
//   b <id> <v...>          (bag ids 1-based, vertex ids 0-based)
//   <id> <id>              (skeleton edges, 1-based bag ids)
//
// 'c' lines are comments.
// ---------------------------------------------------------------------------

pub fn serialize_tree_decomposition(dec: &TreeDecomposition, vertex_count: usize) -> String {
    let mut out = format!(
        "s td {} {} {}",
        dec.bags.len(),
        dec.width() + 1,
        vertex_count
    );
    for (i, bag) in dec.bags.iter().enumerate() {
        out.push_str(&format!("\nb {}", i + 1));
        for v in bag {
            out.push_str(&format!(" {v}"));
        }
    }
    let mut skeleton = dec.skeleton.clone();
    skeleton.sort_unstable();
    for (a, b) in skeleton {
        out.push_str(&format!("\n{} {}", a + 1, b + 1));
    }
    out
}

pub fn parse_tree_decomposition(text: &str) -> Result<TreeDecomposition, PspError> {
    let mut bags: Vec<BTreeSet<usize>> = Vec::new();
    let mut skeleton = Vec::new();
    let mut declared: Option<usize> = None;

    for (idx, raw) in text.lines().enumerate() {
        let ln = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') && line.split_whitespace().next() == Some("c") {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens[0] {
            "s" => {
                if tokens.len() != 5 || tokens[1] != "td" {
                    return Err(PspError::parse(ln, "expected 's td <bags> <width+1> <n>'"));
                }
                let count: usize = tokens[2]
                    .parse()
                    .map_err(|_| PspError::parse(ln, "bad bag count"))?;
                declared = Some(count);
                bags = vec![BTreeSet::new(); count];
            }
            "b" => {
                if declared.is_none() {
                    return Err(PspError::parse(ln, "bag line before 's td' header"));
                }
                if tokens.len() < 2 {
                    return Err(PspError::parse(ln, "bag line needs an id"));
                }
                let id: usize = tokens[1]
                    .parse()
                    .map_err(|_| PspError::parse(ln, "bad bag id"))?;
                if id == 0 || id > bags.len() {
                    return Err(PspError::parse(ln, format!("bag id {id} out of range")));
                }
                for tok in &tokens[2..] {
                    let v: usize = tok
                        .parse()
                        .map_err(|_| PspError::parse(ln, "bad vertex id"))?;
                    bags[id - 1].insert(v);
                }
            }
            _ => {
                if tokens.len() != 2 {
                    return Err(PspError::parse(ln, "expected '<id> <id>' skeleton edge"));
                }
                let a: usize = tokens[0]
                    .parse()
                    .map_err(|_| PspError::parse(ln, "bad bag id"))?;
                let b: usize = tokens[1]
                    .parse()
                    .map_err(|_| PspError::parse(ln, "bad bag id"))?;
                if a == 0 || b == 0 || a > bags.len() || b > bags.len() {
                    return Err(PspError::parse(ln, "skeleton edge out of range"));
                }
                skeleton.push((a - 1, b - 1));
            }
        }
    }
    if declared.is_none() {
        return Err(PspError::parse(0, "missing 's td' header"));
    }
    Ok(TreeDecomposition { bags, skeleton })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conflict::maximum_independent_set;
    use crate::path::SimplePath;

    fn graph(n: usize, edges: &[(usize, usize)]) -> Graph {
        Graph::new(n, edges.to_vec()).unwrap()
    }

    fn path(vs: &[usize]) -> SimplePath {
        SimplePath::new(vs.to_vec()).unwrap()
    }

    #[test]
    fn min_fill_widths_on_known_shapes() {
        let tree = graph(5, &[(0, 1), (1, 2), (2, 3), (2, 4)]);
        let dec = heuristic_tree_decomposition(&tree);
        assert!(validate_decomposition(&tree, &dec));
        assert_eq!(dec.width(), 1);

        let cycle = graph(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
        let dec = heuristic_tree_decomposition(&cycle);
        assert!(validate_decomposition(&cycle, &dec));
        assert_eq!(dec.width(), 2);

        let clique = graph(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        let dec = heuristic_tree_decomposition(&clique);
        assert!(validate_decomposition(&clique, &dec));
        assert_eq!(dec.width(), 3);
    }

    #[test]
    fn validation_catches_broken_decompositions() {
        let g = graph(3, &[(0, 1), (1, 2)]);
        let good = heuristic_tree_decomposition(&g);
        assert!(validate_decomposition(&g, &good));

        // drop the only bag holding vertex 2
        let mut missing_vertex = good.clone();
        for bag in &mut missing_vertex.bags {
            bag.remove(&2);
        }
        assert!(!validate_decomposition(&g, &missing_vertex));

        // split a vertex trace into two fragments
        let dec = TreeDecomposition {
            bags: vec![
                [0, 1].into_iter().collect(),
                [1].into_iter().collect(),
                [1, 2].into_iter().collect(),
            ],
            skeleton: vec![(0, 1), (1, 2)],
        };
        assert!(validate_decomposition(&g, &dec));
        let broken = TreeDecomposition {
            bags: vec![
                [0, 1].into_iter().collect(),
                BTreeSet::new(),
                [1, 2].into_iter().collect(),
            ],
            skeleton: vec![(0, 1), (1, 2)],
        };
        assert!(!validate_decomposition(&g, &broken));
    }

    #[test]
    fn lift_follows_bag_membership() {
        let g = graph(4, &[(0, 1), (1, 2), (2, 3)]);
        let dec = TreeDecomposition {
            bags: vec![
                [0, 1].into_iter().collect(),
                [1, 2].into_iter().collect(),
                [2, 3].into_iter().collect(),
            ],
            skeleton: vec![(0, 1), (1, 2)],
        };
        assert!(validate_decomposition(&g, &dec));

        // a path joins every bag that holds one of its vertices
        let inst = PspInstance::new(g.clone(), vec![path(&[0, 1]), path(&[2, 3])], 1).unwrap();
        let lifted = lift_to_conflict(&dec, &inst);
        assert_eq!(lifted.bags[0], [0].into_iter().collect());
        assert_eq!(lifted.bags[1], [0, 1].into_iter().collect());
        assert_eq!(lifted.bags[2], [1].into_iter().collect());

        // overlapping paths land in every touched bag, and the lift stays
        // a valid decomposition of the conflict graph
        let inst = PspInstance::new(g, vec![path(&[0, 1, 2]), path(&[1, 2, 3])], 1).unwrap();
        let lifted = lift_to_conflict(&dec, &inst);
        assert_eq!(lifted.bags[0], [0, 1].into_iter().collect());
        let conflict_host = Graph::new(2, build_conflict_graph(&inst).edges()).unwrap();
        assert!(validate_decomposition(&conflict_host, &lifted));

        // a single path covering the whole graph lifts into every bag
        let g2 = graph(3, &[(0, 1), (1, 2)]);
        let inst = PspInstance::new(g2, vec![path(&[0, 1, 2])], 1).unwrap();
        let dec2 = TreeDecomposition {
            bags: vec![[0, 1].into_iter().collect(), [1, 2].into_iter().collect()],
            skeleton: vec![(0, 1)],
        };
        let lifted = lift_to_conflict(&dec2, &inst);
        assert!(lifted.bags.iter().all(|b| b == &[0].into_iter().collect()));
    }

    #[test]
    fn lift_with_no_paths_gives_empty_bags() {
        let g = graph(2, &[(0, 1)]);
        let inst = PspInstance::new(g, vec![], 0).unwrap();
        let dec = heuristic_tree_decomposition(inst.graph());
        let lifted = lift_to_conflict(&dec, &inst);
        assert!(lifted.bags.iter().all(|b| b.is_empty()));
    }

    /// Exhaustive independent-set maximum by iterating all vertex subsets.
    fn exhaustive_mis(cg: &ConflictGraph) -> usize {
        let n = cg.vertex_count();
        assert!(n <= 20);
        let mut best = 0;
        'mask: for mask in 0u32..(1 << n) {
            let members: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
            for (i, &a) in members.iter().enumerate() {
                for &b in members.iter().skip(i + 1) {
                    if cg.has_edge(a, b) {
                        continue 'mask;
                    }
                }
            }
            best = best.max(members.len());
        }
        best
    }

    #[test]
    fn dp_matches_exhaustive_mis() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..120 {
            let n = rng.gen_range(1..9);
            let mut edges = Vec::new();
            for a in 0..n {
                for b in (a + 1)..n {
                    if rng.gen_bool(0.35) {
                        edges.push((a, b));
                    }
                }
            }
            let host = Graph::new(n, edges.clone()).unwrap();
            let cg = ConflictGraph::new(n, edges);
            let dec = heuristic_tree_decomposition(&host);
            let via_dp = mis_treewidth(&cg, &dec, DEFAULT_WIDTH_BUDGET).unwrap();
            // the DP result must be independent and of exhaustive-optimal size
            let vs: Vec<usize> = via_dp.iter().copied().collect();
            for (i, &a) in vs.iter().enumerate() {
                for &b in vs.iter().skip(i + 1) {
                    assert!(!cg.has_edge(a, b));
                }
            }
            assert_eq!(via_dp.len(), exhaustive_mis(&cg));
            // and the branch-and-bound oracle agrees too
            assert_eq!(maximum_independent_set(&cg).len(), via_dp.len());
        }
    }

    #[test]
    fn width_budget_guard() {
        let cg = ConflictGraph::new(3, vec![]);
        let dec = TreeDecomposition {
            bags: vec![[0, 1, 2].into_iter().collect()],
            skeleton: vec![],
        };
        match mis_treewidth(&cg, &dec, 1) {
            Err(PspError::Budget { what, .. }) => assert_eq!(what, "decomposition width"),
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn pace_round_trip() {
        let dec = TreeDecomposition {
            bags: vec![
                [0, 1].into_iter().collect(),
                [1, 2].into_iter().collect(),
            ],
            skeleton: vec![(0, 1)],
        };
        let text = serialize_tree_decomposition(&dec, 3);
        assert_eq!(text, "s td 2 2 3\nb 1 0 1\nb 2 1 2\n1 2");
        assert_eq!(parse_tree_decomposition(&text).unwrap(), dec);
    }
}
