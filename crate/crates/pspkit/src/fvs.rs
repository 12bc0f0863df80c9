//! Exact solver parameterized by feedback edge number times maximum degree.
//!
//! The input graph is augmented with a 4-clique so the degree-3 core is never
//! empty, then peeled into pendant trees `T`, degree-2 chain vertices `S` and
//! the core hub `X`. Everything outside the core edge set `E_X` is a tree, so
//! after guessing which core edges the crossing paths of an optimal packing
//! use (a labeled partition of `E_X`) and how much slack each 2-external
//! component gives up, the remaining work is polynomial: screen the guess,
//! chain its blocks into type sequences, and search each sequence for a
//! compatible tuple of crossing paths via a layered cycle search.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::rc::Rc;

use crate::error::PspError;
use crate::forest::{solve_forest, SubgraphRef};
use crate::graph::{Edge, Graph};
use crate::instance::{PspInstance, Solution};
use crate::path::{paths_edge_disjoint, SimplePath};

/// Default cap on `|E_X|` per connected component.
pub const DEFAULT_CORE_EDGE_BUDGET: usize = 14;

/// Adds three new vertices forming a clique with the anchor vertex (the
/// smallest-id vertex of maximum degree). No path can use the six new edges,
/// so packings are preserved, and the anchor's component now has a vertex of
/// core degree at least three.
pub fn augment_clique(graph: &Graph) -> (Graph, [usize; 3]) {
    let n = graph.vertex_count();
    assert!(n > 0, "cannot augment an empty graph");
    let anchor = (0..n).max_by_key(|&v| (graph.degree(v), std::cmp::Reverse(v))).unwrap();
    let added = [n, n + 1, n + 2];
    let mut edges: Vec<(usize, usize)> = graph.edges().map(|e| e.endpoints()).collect();
    edges.push((added[0], added[1]));
    edges.push((added[0], added[2]));
    edges.push((added[1], added[2]));
    for z in added {
        edges.push((anchor, z));
    }
    let augmented = Graph::new(n + 3, edges).expect("augmentation preserves validity");
    (augmented, added)
}

/// One connected piece of `G[S ∪ T]`: a tree hanging off the core by one
/// (`𝒯`) or two (`𝒟`) external edges.
#[derive(Debug, Clone)]
pub struct PeeledComponent {
    pub vertices: BTreeSet<usize>,
    pub internal_edges: BTreeSet<Edge>,
    pub external_edges: Vec<Edge>,
}

impl PeeledComponent {
    pub fn subgraph<'g>(&self, graph: &'g Graph) -> SubgraphRef<'g> {
        SubgraphRef::new(graph, self.vertices.iter().copied(), self.internal_edges.iter().copied())
            .expect("component is part of the host graph")
    }
}

/// Result of peeling a graph: pendant forest `T`, chain vertices `S`, hub
/// `X`, the core edges `E_X`, and the classified components of `G[S ∪ T]`.
#[derive(Debug, Clone)]
pub struct StructureDecomposition {
    pub t_vertices: BTreeSet<usize>,
    pub s_vertices: BTreeSet<usize>,
    pub x_vertices: BTreeSet<usize>,
    pub core_edges: BTreeSet<Edge>,
    pub d_components: Vec<PeeledComponent>,
    pub t_components: Vec<PeeledComponent>,
    /// Feedback edge number of `G[V \ T]`.
    pub lambda_core: usize,
}

impl StructureDecomposition {
    pub fn component(&self, id: usize) -> &PeeledComponent {
        if id < self.d_components.len() {
            &self.d_components[id]
        } else {
            &self.t_components[id - self.d_components.len()]
        }
    }

    pub fn component_count(&self) -> usize {
        self.d_components.len() + self.t_components.len()
    }

    pub fn is_d_component(&self, id: usize) -> bool {
        id < self.d_components.len()
    }
}

/// Peels pendant vertices into `T`, splits the remainder into `X` (degree at
/// least 3) and `S`, and classifies the components of `G[S ∪ T]`. Expects a
/// graph whose components each contain a core vertex (guaranteed after
/// [`augment_clique`]); anything else fails the external-edge invariant.
pub fn decompose_structure(graph: &Graph) -> Result<StructureDecomposition, PspError> {
    let n = graph.vertex_count();
    let mut degree: Vec<usize> = (0..n).map(|v| graph.degree(v)).collect();
    let mut in_t = vec![false; n];
    let mut queue: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    while let Some(v) = queue.pop() {
        if in_t[v] || degree[v] != 1 {
            continue;
        }
        in_t[v] = true;
        for &w in graph.neighbors(v) {
            if !in_t[w] {
                degree[w] -= 1;
                if degree[w] == 1 {
                    queue.push(w);
                }
            }
        }
        degree[v] = 0;
    }

    let mut t_vertices = BTreeSet::new();
    let mut s_vertices = BTreeSet::new();
    let mut x_vertices = BTreeSet::new();
    for v in 0..n {
        if in_t[v] {
            t_vertices.insert(v);
        } else if degree[v] >= 3 {
            x_vertices.insert(v);
        } else {
            s_vertices.insert(v);
        }
    }

    let core_edges: BTreeSet<Edge> = graph
        .edges()
        .filter(|e| x_vertices.contains(&e.u()) || x_vertices.contains(&e.v()))
        .collect();

    // components of G[S ∪ T]
    let in_core_hub = |v: usize| x_vertices.contains(&v);
    let mut seen = vec![false; n];
    let mut d_components = Vec::new();
    let mut t_components = Vec::new();
    for start in 0..n {
        if seen[start] || in_core_hub(start) {
            continue;
        }
        seen[start] = true;
        let mut stack = vec![start];
        let mut vertices = BTreeSet::new();
        while let Some(v) = stack.pop() {
            vertices.insert(v);
            for &w in graph.neighbors(v) {
                if !in_core_hub(w) && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        let mut internal_edges = BTreeSet::new();
        let mut external_edges = Vec::new();
        for &v in &vertices {
            for &w in graph.neighbors(v) {
                if vertices.contains(&w) {
                    internal_edges.insert(Edge::new(v, w));
                } else {
                    external_edges.push(Edge::new(v, w));
                }
            }
        }
        external_edges.sort_unstable();
        external_edges.dedup();
        let has_s = vertices.iter().any(|v| s_vertices.contains(v));
        let comp = PeeledComponent {
            vertices,
            internal_edges,
            external_edges,
        };
        if has_s {
            if comp.external_edges.len() != 2 {
                return Err(PspError::invalid(
                    "structure decomposition",
                    format!(
                        "2-external component {:?} has {} external edges",
                        comp.vertices,
                        comp.external_edges.len()
                    ),
                ));
            }
            d_components.push(comp);
        } else {
            if comp.external_edges.len() != 1 {
                return Err(PspError::invalid(
                    "structure decomposition",
                    format!(
                        "1-external component {:?} has {} external edges",
                        comp.vertices,
                        comp.external_edges.len()
                    ),
                ));
            }
            t_components.push(comp);
        }
    }

    // feedback edge number of the core graph G[V \ T]
    let core_vertex_count = n - t_vertices.len();
    let core_edge_count = graph
        .edges()
        .filter(|e| !in_t[e.u()] && !in_t[e.v()])
        .count();
    let core_component_count = {
        let mut seen = vec![false; n];
        let mut count = 0;
        for start in 0..n {
            if in_t[start] || seen[start] {
                continue;
            }
            count += 1;
            seen[start] = true;
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for &w in graph.neighbors(v) {
                    if !in_t[w] && !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        count
    };
    let lambda_core = (core_edge_count + core_component_count).saturating_sub(core_vertex_count);

    Ok(StructureDecomposition {
        t_vertices,
        s_vertices,
        x_vertices,
        core_edges,
        d_components,
        t_components,
        lambda_core,
    })
}

/// `E(p) ∩ E_X`: the core edges a path occupies.
pub fn path_type(path: &SimplePath, decomp: &StructureDecomposition) -> BTreeSet<Edge> {
    path.edges()
        .iter()
        .copied()
        .filter(|e| decomp.core_edges.contains(e))
        .collect()
}

/// A guess: per-`𝒟`-component slack bits plus a labeled partition of a
/// subset of the core edges. Unlabeled edges (`E_0`) carry no solution path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Guess {
    pub blocks: Vec<BTreeSet<Edge>>,
    pub f_d: Vec<bool>,
}

impl Guess {
    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_of(&self, e: Edge) -> Option<usize> {
        self.blocks.iter().position(|b| b.contains(&e))
    }

    /// Index of the block equal to `ty`, if any.
    pub fn block_matching(&self, ty: &BTreeSet<Edge>) -> Option<usize> {
        if ty.is_empty() {
            return None;
        }
        self.blocks.iter().position(|b| b == ty)
    }

    pub fn slack(&self, d_index: usize) -> usize {
        usize::from(self.f_d[d_index])
    }
}

/// Streams every guess exactly once up to block relabeling: canonical
/// restricted-growth labelings of the core edges (with a distinguished
/// zero label for unused edges) crossed with all slack-bit vectors.
pub fn enumerate_guesses(decomp: &StructureDecomposition) -> GuessIter {
    GuessIter {
        edges: decomp.core_edges.iter().copied().collect(),
        labels: vec![0; decomp.core_edges.len()],
        d_count: decomp.d_components.len(),
        fd_mask: 0,
        done: false,
    }
}

pub struct GuessIter {
    edges: Vec<Edge>,
    labels: Vec<usize>,
    d_count: usize,
    fd_mask: u64,
    done: bool,
}

impl GuessIter {
    fn current(&self) -> Guess {
        let block_count = self.labels.iter().copied().max().unwrap_or(0);
        let mut blocks = vec![BTreeSet::new(); block_count];
        for (i, &label) in self.labels.iter().enumerate() {
            if label > 0 {
                blocks[label - 1].insert(self.edges[i]);
            }
        }
        let f_d = (0..self.d_count).map(|i| self.fd_mask >> i & 1 == 1).collect();
        Guess { blocks, f_d }
    }

    fn advance_labels(&mut self) -> bool {
        // next restricted-growth string in lexicographic order
        let len = self.labels.len();
        let mut i = len;
        while i > 0 {
            i -= 1;
            let prefix_max = self.labels[..i].iter().copied().max().unwrap_or(0);
            if self.labels[i] <= prefix_max {
                self.labels[i] += 1;
                for l in self.labels[i + 1..].iter_mut() {
                    *l = 0;
                }
                return true;
            }
        }
        false
    }
}

impl Iterator for GuessIter {
    type Item = Guess;

    fn next(&mut self) -> Option<Guess> {
        if self.done {
            return None;
        }
        let guess = self.current();
        self.fd_mask += 1;
        if self.fd_mask == 1 << self.d_count {
            self.fd_mask = 0;
            if !self.advance_labels() {
                self.done = true;
            }
        }
        Some(guess)
    }
}

/// One component of the auxiliary block multigraph, flattened to the order
/// in which candidate paths must chain up.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeSequence {
    pub blocks: Vec<usize>,
    pub cyclic: bool,
}

/// One crossing path per position of a type sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateSequence {
    pub paths: Vec<usize>,
}

impl CandidateSequence {
    pub fn path_set(&self) -> BTreeSet<usize> {
        self.paths.iter().copied().collect()
    }
}

#[derive(Debug)]
struct PathEffect {
    /// `(component id, base OPT - residual OPT)` for every touched component.
    deficits: Vec<(usize, usize)>,
}

#[derive(Debug)]
struct PairEffect {
    disjoint: bool,
    deficits: Vec<(usize, usize)>,
}

/// Bound evaluation state for one (instance, decomposition) pair: component
/// baselines, path types, and memoized single/pair residual effects.
pub struct FvsContext<'a> {
    instance: &'a PspInstance,
    decomp: &'a StructureDecomposition,
    base_opt: Vec<usize>,
    base_packing: Vec<Vec<usize>>,
    path_types: Vec<BTreeSet<Edge>>,
    edge_component: HashMap<Edge, usize>,
    distinct_types: Vec<BTreeSet<Edge>>,
    paths_of_type: Vec<Vec<usize>>,
    singles: RefCell<HashMap<usize, Rc<PathEffect>>>,
    pairs: RefCell<HashMap<(usize, usize), Rc<PairEffect>>>,
}

impl<'a> FvsContext<'a> {
    pub fn new(instance: &'a PspInstance, decomp: &'a StructureDecomposition) -> Self {
        let graph = instance.graph();
        let comp_count = decomp.component_count();
        let mut base_opt = Vec::with_capacity(comp_count);
        let mut base_packing = Vec::with_capacity(comp_count);
        let mut edge_component = HashMap::new();
        for id in 0..comp_count {
            let comp = decomp.component(id);
            for &e in &comp.internal_edges {
                edge_component.insert(e, id);
            }
            let packing = solve_forest(&comp.subgraph(graph), instance.paths())
                .expect("peeled components are trees");
            base_opt.push(packing.len());
            base_packing.push(packing.iter().collect());
        }

        let path_types: Vec<BTreeSet<Edge>> = instance
            .paths()
            .iter()
            .map(|p| path_type(p, decomp))
            .collect();
        let mut distinct_types: Vec<BTreeSet<Edge>> = Vec::new();
        let mut paths_of_type: Vec<Vec<usize>> = Vec::new();
        for (i, ty) in path_types.iter().enumerate() {
            if ty.is_empty() {
                continue;
            }
            match distinct_types.iter().position(|t| t == ty) {
                Some(pos) => paths_of_type[pos].push(i),
                None => {
                    distinct_types.push(ty.clone());
                    paths_of_type.push(vec![i]);
                }
            }
        }
        // canonical order keeps guess streams reproducible
        let mut order: Vec<usize> = (0..distinct_types.len()).collect();
        order.sort_by(|&a, &b| {
            (distinct_types[a].len(), &distinct_types[a]).cmp(&(distinct_types[b].len(), &distinct_types[b]))
        });
        let distinct_types: Vec<BTreeSet<Edge>> = order.iter().map(|&i| distinct_types[i].clone()).collect();
        let paths_of_type: Vec<Vec<usize>> = order.iter().map(|&i| paths_of_type[i].clone()).collect();

        FvsContext {
            instance,
            decomp,
            base_opt,
            base_packing,
            path_types,
            edge_component,
            distinct_types,
            paths_of_type,
            singles: RefCell::new(HashMap::new()),
            pairs: RefCell::new(HashMap::new()),
        }
    }

    pub fn decomposition(&self) -> &StructureDecomposition {
        self.decomp
    }

    pub fn path_types(&self) -> &[BTreeSet<Edge>] {
        &self.path_types
    }

    /// Baseline OPT of a peeled component.
    pub fn component_opt(&self, id: usize) -> usize {
        self.base_opt[id]
    }

    fn residual_opt(&self, id: usize, removed: &BTreeSet<Edge>) -> usize {
        let comp = self.decomp.component(id);
        let sub = comp.subgraph(self.instance.graph()).without_edges(removed.iter().copied());
        solve_forest(&sub, self.instance.paths())
            .expect("residual of a tree is a forest")
            .len()
    }

    fn deficits_for_edges(&self, edges: impl Iterator<Item = Edge>) -> Vec<(usize, usize)> {
        let mut removed_by_comp: BTreeMap<usize, BTreeSet<Edge>> = BTreeMap::new();
        for e in edges {
            if let Some(&id) = self.edge_component.get(&e) {
                removed_by_comp.entry(id).or_default().insert(e);
            }
        }
        removed_by_comp
            .into_iter()
            .map(|(id, removed)| (id, self.base_opt[id] - self.residual_opt(id, &removed)))
            .collect()
    }

    fn single_effect(&self, p: usize) -> Rc<PathEffect> {
        if let Some(e) = self.singles.borrow().get(&p) {
            return Rc::clone(e);
        }
        let effect = Rc::new(PathEffect {
            deficits: self.deficits_for_edges(self.instance.paths()[p].edges().iter().copied()),
        });
        self.singles.borrow_mut().insert(p, Rc::clone(&effect));
        effect
    }

    fn pair_effect(&self, p: usize, q: usize) -> Rc<PairEffect> {
        let key = (p.min(q), p.max(q));
        if let Some(e) = self.pairs.borrow().get(&key) {
            return Rc::clone(e);
        }
        let paths = self.instance.paths();
        let disjoint = paths_edge_disjoint(&paths[key.0], &paths[key.1]);
        let deficits = if disjoint {
            self.deficits_for_edges(
                paths[key.0]
                    .edges()
                    .iter()
                    .chain(paths[key.1].edges().iter())
                    .copied(),
            )
        } else {
            Vec::new()
        };
        let effect = Rc::new(PairEffect { disjoint, deficits });
        self.pairs.borrow_mut().insert(key, Rc::clone(&effect));
        effect
    }

    fn deficits_ok(&self, deficits: &[(usize, usize)], guess: &Guess) -> bool {
        deficits.iter().all(|&(id, deficit)| {
            if self.decomp.is_d_component(id) {
                deficit <= guess.slack(id)
            } else {
                deficit == 0
            }
        })
    }

    fn single_ok(&self, p: usize, guess: &Guess) -> bool {
        guess.block_matching(&self.path_types[p]).is_some()
            && self.deficits_ok(&self.single_effect(p).deficits, guess)
    }

    fn pair_ok(&self, p: usize, q: usize, guess: &Guess) -> bool {
        if !self.single_ok(p, guess) || !self.single_ok(q, guess) {
            return false;
        }
        let effect = self.pair_effect(p, q);
        effect.disjoint && self.deficits_ok(&effect.deficits, guess)
    }

    /// Full compatibility test: pairwise disjoint, every path typed by a
    /// block, and every component keeps enough of its internal optimum.
    pub fn is_compatible(&self, paths: &BTreeSet<usize>, guess: &Guess) -> bool {
        let ids: Vec<usize> = paths.iter().copied().collect();
        for &p in &ids {
            if guess.block_matching(&self.path_types[p]).is_none() {
                return false;
            }
        }
        for (a, &p) in ids.iter().enumerate() {
            for &q in ids.iter().skip(a + 1) {
                if !paths_edge_disjoint(&self.instance.paths()[p], &self.instance.paths()[q]) {
                    return false;
                }
            }
        }
        let deficits = self.deficits_for_edges(
            ids.iter()
                .flat_map(|&p| self.instance.paths()[p].edges().iter().copied()),
        );
        self.deficits_ok(&deficits, guess)
    }

    /// Cheap infeasibility screens: a block holding exactly one external
    /// edge of three or more components can never be a path type, and a
    /// block no singleton-compatible path realizes kills the guess too.
    pub fn screen_guess(&self, guess: &Guess) -> bool {
        for block in &guess.blocks {
            let mut lone_external = 0;
            for id in 0..self.decomp.component_count() {
                let hits = self
                    .decomp
                    .component(id)
                    .external_edges
                    .iter()
                    .filter(|e| block.contains(e))
                    .count();
                if hits == 1 {
                    lone_external += 1;
                }
            }
            if lone_external >= 3 {
                return false;
            }
        }
        for block in &guess.blocks {
            let realized = match self.distinct_types.iter().position(|t| t == block) {
                Some(ti) => self.paths_of_type[ti].iter().any(|&p| self.single_ok(p, guess)),
                None => false,
            };
            if !realized {
                return false;
            }
        }
        true
    }

    /// Builds the block multigraph (blocks adjacent through `𝒟` components
    /// with one external edge in each) and flattens its paths and cycles.
    /// Must be called on screened guesses; the degree bound is asserted.
    pub fn build_type_sequences(&self, guess: &Guess) -> Vec<TypeSequence> {
        let l = guess.block_count();
        let mut h_edges: Vec<(usize, usize)> = Vec::new();
        for comp in &self.decomp.d_components {
            let blocks: Vec<Option<usize>> =
                comp.external_edges.iter().map(|&e| guess.block_of(e)).collect();
            if let [Some(a), Some(b)] = blocks.as_slice() {
                if a != b {
                    h_edges.push((*a.min(b), *a.max(b)));
                }
            }
        }
        let mut incidence: Vec<Vec<usize>> = vec![Vec::new(); l];
        for (idx, &(a, b)) in h_edges.iter().enumerate() {
            incidence[a].push(idx);
            incidence[b].push(idx);
        }
        for (block, inc) in incidence.iter().enumerate() {
            assert!(
                inc.len() <= 2,
                "block {block} has multigraph degree {} after screening",
                inc.len()
            );
        }

        let mut edge_used = vec![false; h_edges.len()];
        let mut in_sequence = vec![false; l];
        let mut sequences = Vec::new();

        let walk = |start: usize,
                        edge_used: &mut Vec<bool>,
                        in_sequence: &mut Vec<bool>|
         -> (Vec<usize>, bool) {
            let mut order = vec![start];
            in_sequence[start] = true;
            let mut current = start;
            loop {
                // unused incident edge toward the smallest neighbor
                let step = incidence[current]
                    .iter()
                    .copied()
                    .filter(|&e| !edge_used[e])
                    .map(|e| {
                        let (a, b) = h_edges[e];
                        (if a == current { b } else { a }, e)
                    })
                    .min();
                match step {
                    Some((next, e)) => {
                        edge_used[e] = true;
                        if next == start {
                            return (order, true); // closed a cycle
                        }
                        in_sequence[next] = true;
                        order.push(next);
                        current = next;
                    }
                    None => return (order, false),
                }
            }
        };

        // path components first, entered at their smallest endpoint
        for block in 0..l {
            if !in_sequence[block] && incidence[block].len() <= 1 {
                let (blocks, cyclic) = walk(block, &mut edge_used, &mut in_sequence);
                sequences.push(TypeSequence { blocks, cyclic });
            }
        }
        // remaining components are cycles
        for block in 0..l {
            if !in_sequence[block] {
                let (blocks, cyclic) = walk(block, &mut edge_used, &mut in_sequence);
                debug_assert!(cyclic);
                sequences.push(TypeSequence { blocks, cyclic });
            }
        }
        sequences
    }

    /// Searches one type sequence for a compatible candidate tuple. Layered
    /// search: position `j` holds singleton-compatible paths of type
    /// `π[j]`, arcs join consecutive (cyclically) compatible pairs, and a
    /// candidate is a cycle through one vertex per layer.
    pub fn find_candidate(&self, sequence: &TypeSequence, guess: &Guess) -> Option<CandidateSequence> {
        let m = sequence.blocks.len();
        let layer: Vec<Vec<usize>> = sequence
            .blocks
            .iter()
            .map(|&b| {
                let block = &guess.blocks[b];
                match self.distinct_types.iter().position(|t| t == block) {
                    Some(ti) => self.paths_of_type[ti]
                        .iter()
                        .copied()
                        .filter(|&p| self.single_ok(p, guess))
                        .collect(),
                    None => Vec::new(),
                }
            })
            .collect();
        if layer.iter().any(|v| v.is_empty()) {
            return None;
        }

        let candidate = match m {
            1 => Some(CandidateSequence {
                paths: vec![layer[0][0]],
            }),
            2 => {
                let mut found = None;
                'outer: for &p in &layer[0] {
                    for &q in &layer[1] {
                        if self.pair_ok(p, q, guess) {
                            found = Some(CandidateSequence { paths: vec![p, q] });
                            break 'outer;
                        }
                    }
                }
                found
            }
            _ => self.search_layered_cycle(&layer, guess),
        };

        if let Some(c) = &candidate {
            assert!(
                self.is_compatible(&c.path_set(), guess),
                "candidate tuple failed the direct compatibility check"
            );
        }
        candidate
    }

    fn search_layered_cycle(&self, layer: &[Vec<usize>], guess: &Guess) -> Option<CandidateSequence> {
        let m = layer.len();
        // arcs from layer j to layer (j+1) mod m between compatible pairs
        let mut arcs: HashMap<usize, Vec<usize>> = HashMap::new();
        for j in 0..m {
            let jn = (j + 1) % m;
            for &p in &layer[j] {
                let outs: Vec<usize> = layer[jn]
                    .iter()
                    .copied()
                    .filter(|&q| self.pair_ok(p, q, guess))
                    .collect();
                arcs.insert(p, outs);
            }
        }
        for &u in &layer[0] {
            for &v in &arcs[&u] {
                // shortest way back to u must touch each remaining layer once
                let mut parent: HashMap<usize, usize> = HashMap::new();
                let mut dist: HashMap<usize, usize> = HashMap::new();
                dist.insert(v, 0);
                let mut queue = std::collections::VecDeque::new();
                queue.push_back(v);
                while let Some(x) = queue.pop_front() {
                    if x == u {
                        break;
                    }
                    let d = dist[&x];
                    for &y in &arcs[&x] {
                        if !dist.contains_key(&y) {
                            dist.insert(y, d + 1);
                            parent.insert(y, x);
                            queue.push_back(y);
                        }
                    }
                }
                if dist.get(&u) == Some(&(m - 1)) {
                    let mut chain = vec![u];
                    let mut cur = u;
                    while cur != v {
                        cur = parent[&cur];
                        chain.push(cur);
                    }
                    chain.reverse(); // v .. u, positions 1..m with u at 0
                    let mut paths = vec![u];
                    paths.extend(chain[..m - 1].iter().copied());
                    return Some(CandidateSequence { paths });
                }
            }
        }
        None
    }

    /// Verifies the guess end to end and assembles a full packing for it:
    /// the candidate tuple of every type sequence plus a maximum internal
    /// packing of every component's residual forest.
    pub fn evaluate_guess(&self, guess: &Guess) -> Option<(usize, Solution)> {
        if !self.screen_guess(guess) {
            return None;
        }
        let sequences = self.build_type_sequences(guess);
        let mut crossing: BTreeSet<usize> = BTreeSet::new();
        for sequence in &sequences {
            let candidate = self.find_candidate(sequence, guess)?;
            crossing.extend(candidate.paths.iter().copied());
        }
        debug_assert_eq!(crossing.len(), guess.block_count());
        assert!(
            self.is_compatible(&crossing, guess),
            "union of per-sequence candidates must stay compatible"
        );

        let mut removed_by_comp: BTreeMap<usize, BTreeSet<Edge>> = BTreeMap::new();
        for &p in &crossing {
            for &e in self.instance.paths()[p].edges() {
                if let Some(&id) = self.edge_component.get(&e) {
                    removed_by_comp.entry(id).or_default().insert(e);
                }
            }
        }

        let mut solution = Solution::new(crossing.iter().copied());
        for id in 0..self.decomp.component_count() {
            match removed_by_comp.get(&id) {
                None => solution.extend(self.base_packing[id].iter().copied()),
                Some(removed) => {
                    let comp = self.decomp.component(id);
                    let sub = comp
                        .subgraph(self.instance.graph())
                        .without_edges(removed.iter().copied());
                    let packing = solve_forest(&sub, self.instance.paths())
                        .expect("residual of a tree is a forest");
                    solution.extend(packing.iter());
                }
            }
        }

        let size = solution.len();
        let promised: usize = (0..self.decomp.component_count())
            .map(|id| {
                if self.decomp.is_d_component(id) {
                    // a slack bit on a component with OPT 0 promises nothing
                    self.base_opt[id].saturating_sub(guess.slack(id))
                } else {
                    self.base_opt[id]
                }
            })
            .sum::<usize>()
            + guess.block_count();
        assert!(
            size >= promised,
            "assembled packing ({size}) fell short of the guess value ({promised})"
        );
        Some((size, solution))
    }

    /// The guesses the solver actually evaluates: every family of pairwise
    /// disjoint blocks drawn from realized path types, crossed with all
    /// slack vectors. Exactly the guesses of [`enumerate_guesses`] that
    /// survive the realizability half of [`Self::screen_guess`].
    pub fn realizable_guesses(&self) -> Vec<Guess> {
        let mut families: Vec<Vec<usize>> = Vec::new();
        let mut stack: Vec<usize> = Vec::new();
        fn rec(
            types: &[BTreeSet<Edge>],
            from: usize,
            stack: &mut Vec<usize>,
            out: &mut Vec<Vec<usize>>,
        ) {
            out.push(stack.clone());
            for next in from..types.len() {
                let disjoint = stack
                    .iter()
                    .all(|&chosen| types[chosen].is_disjoint(&types[next]));
                if disjoint {
                    stack.push(next);
                    rec(types, next + 1, stack, out);
                    stack.pop();
                }
            }
        }
        rec(&self.distinct_types, 0, &mut stack, &mut families);

        let d_count = self.decomp.d_components.len();
        let mut guesses = Vec::new();
        for family in families {
            let blocks: Vec<BTreeSet<Edge>> =
                family.iter().map(|&t| self.distinct_types[t].clone()).collect();
            for fd_mask in 0u64..(1 << d_count) {
                guesses.push(Guess {
                    blocks: blocks.clone(),
                    f_d: (0..d_count).map(|i| fd_mask >> i & 1 == 1).collect(),
                });
            }
        }
        guesses
    }

    /// Best packing over all guesses for this (augmented) component.
    pub fn best_over_guesses(&self) -> (usize, Solution) {
        let mut best: Option<(usize, Solution)> = None;
        for guess in self.realizable_guesses() {
            if let Some((size, solution)) = self.evaluate_guess(&guess) {
                let better = match &best {
                    None => true,
                    Some((best_size, _)) => size > *best_size,
                };
                if better {
                    best = Some((size, solution));
                }
            }
        }
        best.expect("the empty guess always evaluates")
    }
}

/// Exact solver with the default core-edge budget.
pub fn solve_fvs_delta(instance: &PspInstance) -> Result<Solution, PspError> {
    solve_fvs_delta_with_budget(instance, DEFAULT_CORE_EDGE_BUDGET)
}

/// Largest `|E_X|` any connected component would need, i.e. the budget a
/// [`solve_fvs_delta_with_budget`] call must grant to run on this instance.
pub fn core_edge_requirement(instance: &PspInstance) -> Result<usize, PspError> {
    let graph = instance.graph();
    let mut worst = 0;
    for component in graph.connected_components() {
        if component.len() < 2 {
            continue;
        }
        let local_of: HashMap<usize, usize> =
            component.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let local_edges: Vec<(usize, usize)> = graph
            .edges()
            .filter(|e| local_of.contains_key(&e.u()) && local_of.contains_key(&e.v()))
            .map(|e| (local_of[&e.u()], local_of[&e.v()]))
            .collect();
        let local_graph =
            Graph::new(component.len(), local_edges).expect("component subgraph is valid");
        let (augmented, _) = augment_clique(&local_graph);
        let decomp = decompose_structure(&augmented)?;
        worst = worst.max(decomp.core_edges.len());
    }
    Ok(worst)
}

/// Exact maximum packing: per connected component, augment, peel, and take
/// the best assembled packing over all guesses. Component results combine
/// by union since no path crosses components.
pub fn solve_fvs_delta_with_budget(
    instance: &PspInstance,
    core_edge_budget: usize,
) -> Result<Solution, PspError> {
    let graph = instance.graph();
    let mut result = Solution::empty();

    for component in graph.connected_components() {
        if component.len() < 2 {
            continue; // no edges, no paths
        }
        let local_of: HashMap<usize, usize> =
            component.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let local_edges: Vec<(usize, usize)> = graph
            .edges()
            .filter(|e| local_of.contains_key(&e.u()) && local_of.contains_key(&e.v()))
            .map(|e| (local_of[&e.u()], local_of[&e.v()]))
            .collect();
        let local_graph =
            Graph::new(component.len(), local_edges).expect("component subgraph is valid");

        let mut global_ids = Vec::new();
        let mut local_paths = Vec::new();
        for (i, p) in instance.paths().iter().enumerate() {
            if local_of.contains_key(&p.vertices()[0]) {
                let vs: Vec<usize> = p.vertices().iter().map(|v| local_of[v]).collect();
                local_paths.push(SimplePath::new(vs).expect("re-indexing keeps paths simple"));
                global_ids.push(i);
            }
        }

        let (augmented, _) = augment_clique(&local_graph);
        let local_instance = PspInstance::new(augmented, local_paths, 0)
            .expect("augmentation preserves path validity");
        let decomp = decompose_structure(local_instance.graph())?;
        if decomp.core_edges.len() > core_edge_budget {
            return Err(PspError::Budget {
                what: "core edge count",
                limit: core_edge_budget,
                actual: decomp.core_edges.len(),
            });
        }

        let context = FvsContext::new(&local_instance, &decomp);
        let (_, local_solution) = context.best_over_guesses();
        result.extend(local_solution.iter().map(|i| global_ids[i]));
    }

    Ok(result)
}
