//! Maximum cardinality matching in general graphs via blossom contraction.
//!
//! The auxiliary graphs this crate builds are tiny (nodes are the child
//! edges of a single tree vertex), so the plain O(V^3) augmenting search is
//! more than enough.

use std::collections::VecDeque;

/// Computes a maximum matching. `adjacency[v]` lists the neighbors of `v`;
/// returns `mate` with `mate[v] = Some(u)` when `v` is matched to `u`.
pub fn maximum_matching(n: usize, adjacency: &[Vec<usize>]) -> Vec<Option<usize>> {
    let mut mate: Vec<Option<usize>> = vec![None; n];
    for root in 0..n {
        if mate[root].is_none() {
            augment(n, adjacency, &mut mate, root);
        }
    }
    mate
}

/// Number of edges in a maximum matching.
pub fn maximum_matching_size(n: usize, adjacency: &[Vec<usize>]) -> usize {
    maximum_matching(n, adjacency).iter().flatten().count() / 2
}

fn augment(n: usize, adjacency: &[Vec<usize>], mate: &mut [Option<usize>], root: usize) -> bool {
    let mut parent: Vec<Option<usize>> = vec![None; n];
    let mut base: Vec<usize> = (0..n).collect();
    let mut used = vec![false; n];
    used[root] = true;

    let mut queue = VecDeque::new();
    queue.push_back(root);

    while let Some(v) = queue.pop_front() {
        for &to in &adjacency[v] {
            if base[v] == base[to] || mate[v] == Some(to) {
                continue;
            }
            if to == root || mate[to].map_or(false, |m| parent[m].is_some()) {
                // odd cycle: contract the blossom around the common base
                let cur_base = lowest_common_base(&base, &parent, mate, v, to);
                let mut blossom = vec![false; n];
                mark_path(&mut blossom, &base, &mut parent, mate, v, cur_base, to);
                mark_path(&mut blossom, &base, &mut parent, mate, to, cur_base, v);
                for i in 0..n {
                    if blossom[base[i]] {
                        base[i] = cur_base;
                        if !used[i] {
                            used[i] = true;
                            queue.push_back(i);
                        }
                    }
                }
            } else if parent[to].is_none() {
                parent[to] = Some(v);
                match mate[to] {
                    None => {
                        // augmenting path found: flip matched edges back to root
                        flip(mate, &parent, to);
                        return true;
                    }
                    Some(m) => {
                        used[m] = true;
                        queue.push_back(m);
                    }
                }
            }
        }
    }
    false
}

fn lowest_common_base(
    base: &[usize],
    parent: &[Option<usize>],
    mate: &[Option<usize>],
    mut a: usize,
    mut b: usize,
) -> usize {
    let mut marked = vec![false; base.len()];
    loop {
        a = base[a];
        marked[a] = true;
        match mate[a] {
            Some(m) => match parent[m] {
                Some(p) => a = p,
                None => break,
            },
            None => break,
        }
    }
    loop {
        b = base[b];
        if marked[b] {
            return b;
        }
        b = parent[mate[b].expect("alternating chain is matched")].expect("chain has parent");
    }
}

fn mark_path(
    blossom: &mut [bool],
    base: &[usize],
    parent: &mut [Option<usize>],
    mate: &[Option<usize>],
    mut v: usize,
    cur_base: usize,
    mut child: usize,
) {
    while base[v] != cur_base {
        blossom[base[v]] = true;
        let m = mate[v].expect("interior blossom vertex is matched");
        blossom[base[m]] = true;
        parent[v] = Some(child);
        child = m;
        v = parent[m].expect("interior blossom vertex has a parent");
    }
}

fn flip(mate: &mut [Option<usize>], parent: &[Option<usize>], mut v: usize) {
    loop {
        let pv = parent[v].expect("augmenting path reaches the root");
        let ppv = mate[pv];
        mate[v] = Some(pv);
        mate[pv] = Some(v);
        match ppv {
            Some(next) => v = next,
            None => break,
        }
    }
}

/// Lexicographically smallest (by ascending label set) maximum "matching"
/// over labeled candidate edges: each candidate `(label, a, b)` may be chosen
/// only if no earlier choice uses node `a` or `b`. Labels must be distinct.
pub fn lex_min_maximum_labeled_matching(
    node_count: usize,
    candidates: &[(usize, usize, usize)],
) -> Vec<usize> {
    let mut sorted: Vec<(usize, usize, usize)> = candidates.to_vec();
    sorted.sort_unstable();

    let size_with = |forced_nodes: &[bool], min_idx: usize| -> usize {
        let mut adj = vec![Vec::new(); node_count];
        for &(_, a, b) in sorted.iter().skip(min_idx) {
            if !forced_nodes[a] && !forced_nodes[b] {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        maximum_matching_size(node_count, &adj)
    };

    let mut blocked = vec![false; node_count];
    let target = size_with(&blocked, 0);
    let mut chosen = Vec::new();

    for idx in 0..sorted.len() {
        if chosen.len() == target {
            break;
        }
        let (label, a, b) = sorted[idx];
        if blocked[a] || blocked[b] || a == b {
            continue;
        }
        blocked[a] = true;
        blocked[b] = true;
        if chosen.len() + 1 + size_with(&blocked, idx + 1) == target {
            chosen.push(label);
        } else {
            blocked[a] = false;
            blocked[b] = false;
        }
    }
    debug_assert_eq!(chosen.len(), target);
    chosen
}

#[cfg(test)]
mod tests {
    use super::*;

    fn adj_from_edges(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    /// Exhaustive maximum matching size by recursion over the edge list.
    fn brute_matching(n: usize, edges: &[(usize, usize)]) -> usize {
        fn rec(edges: &[(usize, usize)], used: &mut [bool], i: usize) -> usize {
            if i == edges.len() {
                return 0;
            }
            let skip = rec(edges, used, i + 1);
            let (a, b) = edges[i];
            if !used[a] && !used[b] {
                used[a] = true;
                used[b] = true;
                let take = 1 + rec(edges, used, i + 1);
                used[a] = false;
                used[b] = false;
                skip.max(take)
            } else {
                skip
            }
        }
        let mut used = vec![false; n];
        rec(edges, &mut used, 0)
    }

    #[test]
    fn odd_cycle_needs_blossom() {
        // C5 has maximum matching 2
        let edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)];
        assert_eq!(maximum_matching_size(5, &adj_from_edges(5, &edges)), 2);
    }

    #[test]
    fn petersen_graph_has_perfect_matching() {
        let edges = [
            (0, 1), (1, 2), (2, 3), (3, 4), (4, 0),
            (0, 5), (1, 6), (2, 7), (3, 8), (4, 9),
            (5, 7), (7, 9), (9, 6), (6, 8), (8, 5),
        ];
        assert_eq!(maximum_matching_size(10, &adj_from_edges(10, &edges)), 5);
    }

    #[test]
    fn matches_bruteforce_on_random_graphs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let n = rng.gen_range(2..10);
            let mut edges = Vec::new();
            for a in 0..n {
                for b in (a + 1)..n {
                    if rng.gen_bool(0.4) {
                        edges.push((a, b));
                    }
                }
            }
            let fast = maximum_matching_size(n, &adj_from_edges(n, &edges));
            let slow = brute_matching(n, &edges);
            assert_eq!(fast, slow, "n={n} edges={edges:?}");
        }
    }

    #[test]
    fn lex_min_selection_prefers_small_labels() {
        // labels 0 and 1 fight over node 0; picking 0 still allows a
        // maximum of 2 via label 2.
        let candidates = [(0, 0, 1), (1, 0, 2), (2, 2, 3)];
        assert_eq!(lex_min_maximum_labeled_matching(4, &candidates), vec![0, 2]);

        // here greedily taking label 0 would block both others
        let candidates = [(0, 0, 1), (1, 0, 2), (2, 1, 3)];
        assert_eq!(lex_min_maximum_labeled_matching(4, &candidates), vec![1, 2]);
    }
}
