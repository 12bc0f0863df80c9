//! Instance generators: two reductions from multicolored clique, the
//! path-decomposition witness for the second one, a brute-force clique
//! solver for cross-checks, and a seeded random instance generator.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::PspError;
use crate::graph::{Edge, Graph};
use crate::instance::PspInstance;
use crate::path::SimplePath;
use crate::treewidth::TreeDecomposition;

/// Default cap on the `n^k` tuple space of the clique brute force.
pub const DEFAULT_MCC_BUDGET: usize = 10_000_000;

/// A multicolored clique instance: `k` groups of `n` vertices each, with
/// vertex `(group g, position p)` stored as id `g*n + p`. Edges never join
/// two vertices of the same group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MccInstance {
    k: usize,
    n: usize,
    edges: BTreeSet<Edge>,
}

impl MccInstance {
    pub fn new(
        k: usize,
        n: usize,
        edge_list: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, PspError> {
        let mut edges = BTreeSet::new();
        for (u, v) in edge_list {
            if u >= k * n || v >= k * n {
                return Err(PspError::invalid(
                    "mcc",
                    format!("edge ({u},{v}) out of range for {k} groups of {n}"),
                ));
            }
            if u == v || u / n == v / n {
                return Err(PspError::invalid(
                    "mcc",
                    format!("edge ({u},{v}) joins vertices of group {}", u / n),
                ));
            }
            if !edges.insert(Edge::new(u, v)) {
                return Err(PspError::invalid("mcc", format!("duplicate edge ({u},{v})")));
            }
        }
        Ok(MccInstance { k, n, edges })
    }

    pub fn group_count(&self) -> usize {
        self.k
    }

    pub fn group_size(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v && self.edges.contains(&Edge::new(u, v))
    }

    pub fn vertex_id(&self, group: usize, position: usize) -> usize {
        group * self.n + position
    }

    pub fn group_of(&self, vertex: usize) -> usize {
        vertex / self.n
    }

    /// Every cross-group vertex pair, ascending; useful for enumerating
    /// edge subsets in tests.
    pub fn all_cross_pairs(k: usize, n: usize) -> Vec<(usize, usize)> {
        let mut pairs = Vec::new();
        for u in 0..k * n {
            for v in (u + 1)..k * n {
                if u / n != v / n {
                    pairs.push((u, v));
                }
            }
        }
        pairs
    }
}

// ---------------------------------------------------------------------------
// MCC file format:  mcc 1 / <k> <n> <m> / m edge lines
// ---------------------------------------------------------------------------

pub fn parse_mcc(text: &str) -> Result<MccInstance, PspError> {
    let mut meaningful = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (ln, magic) = meaningful.next().ok_or_else(|| PspError::parse(0, "empty input"))?;
    if magic.split_whitespace().collect::<Vec<_>>() != ["mcc", "1"] {
        return Err(PspError::parse(ln, format!("expected header 'mcc 1', got '{magic}'")));
    }
    let (ln, header) = meaningful
        .next()
        .ok_or_else(|| PspError::parse(ln, "missing size header"))?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.len() != 3 {
        return Err(PspError::parse(ln, format!("expected '<k> <n> <m>', got '{header}'")));
    }
    let parse = |tok: &str, what: &str| -> Result<usize, PspError> {
        tok.parse::<usize>()
            .map_err(|_| PspError::parse(ln, format!("expected {what}, got '{tok}'")))
    };
    let k = parse(tokens[0], "group count")?;
    let n = parse(tokens[1], "group size")?;
    let m = parse(tokens[2], "edge count")?;

    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let (ln, line) = meaningful
            .next()
            .ok_or_else(|| PspError::parse(ln, "missing edge line"))?;
        let tk: Vec<&str> = line.split_whitespace().collect();
        if tk.len() != 2 {
            return Err(PspError::parse(ln, format!("expected '<u> <v>', got '{line}'")));
        }
        let u: usize = tk[0]
            .parse()
            .map_err(|_| PspError::parse(ln, "bad vertex id"))?;
        let v: usize = tk[1]
            .parse()
            .map_err(|_| PspError::parse(ln, "bad vertex id"))?;
        edges.push((u, v));
    }
    if let Some((ln, line)) = meaningful.next() {
        return Err(PspError::parse(ln, format!("unexpected trailing content '{line}'")));
    }
    MccInstance::new(k, n, edges).map_err(|e| PspError::parse(0, e.to_string()))
}

pub fn serialize_mcc(mcc: &MccInstance) -> String {
    let mut out = format!("mcc 1\n{} {} {}", mcc.k, mcc.n, mcc.edges.len());
    for e in &mcc.edges {
        out.push_str(&format!("\n{} {}", e.u(), e.v()));
    }
    out
}

/// Exhaustive multicolored clique search over the `n^k` one-per-group
/// tuples, lexicographically smallest witness first.
pub fn solve_mcc_bruteforce(mcc: &MccInstance) -> Result<Option<Vec<usize>>, PspError> {
    solve_mcc_bruteforce_with_budget(mcc, DEFAULT_MCC_BUDGET)
}

pub fn solve_mcc_bruteforce_with_budget(
    mcc: &MccInstance,
    budget: usize,
) -> Result<Option<Vec<usize>>, PspError> {
    let tuples = (mcc.n as u128).checked_pow(mcc.k as u32).unwrap_or(u128::MAX);
    if tuples > budget as u128 {
        return Err(PspError::Budget {
            what: "mcc tuple count",
            limit: budget,
            actual: usize::MAX,
        });
    }
    let mut choice = vec![0usize; mcc.k];
    loop {
        let clique: Vec<usize> = choice
            .iter()
            .enumerate()
            .map(|(g, &p)| mcc.vertex_id(g, p))
            .collect();
        let mut ok = true;
        'pairs: for i in 0..mcc.k {
            for j in (i + 1)..mcc.k {
                if !mcc.has_edge(clique[i], clique[j]) {
                    ok = false;
                    break 'pairs;
                }
            }
        }
        if ok {
            return Ok(Some(clique));
        }
        // next tuple
        let mut pos = mcc.k;
        loop {
            if pos == 0 {
                return Ok(None);
            }
            pos -= 1;
            choice[pos] += 1;
            if choice[pos] < mcc.n {
                break;
            }
            choice[pos] = 0;
        }
    }
}

/// A generated instance together with its decision target and name tables
/// for the gadget vertices and paths.
#[derive(Debug, Clone)]
pub struct ReductionOutput {
    pub instance: PspInstance,
    pub target: usize,
    pub vertex_map: BTreeMap<String, usize>,
    pub path_map: BTreeMap<String, usize>,
}

fn check_reduction_params(mcc: &MccInstance) -> Result<(), PspError> {
    if mcc.k < 2 || mcc.n < 2 {
        return Err(PspError::invalid(
            "reduction",
            format!("needs k >= 2 and n >= 2, got k={} n={}", mcc.k, mcc.n),
        ));
    }
    Ok(())
}

/// Reduction targeting vertex cover + path length: one selection gadget per
/// group (hub row `C_i`, starters `X_i`, and a `V_{i,j}` row per vertex),
/// long paths that sweep a gadget and short paths over the inter-gadget
/// edges. The output packs `k(n-1) + C(k,2)` paths iff the clique exists,
/// and that value is installed as the instance threshold.
pub fn reduce_mcc_vc(mcc: &MccInstance) -> Result<ReductionOutput, PspError> {
    check_reduction_params(mcc)?;
    let (k, n) = (mcc.k, mcc.n);
    let gadget_size = k + (n - 1) + n * k;
    let mut vertex_map = BTreeMap::new();

    let c = |gi: usize, l: usize| gi * gadget_size + l;
    let x = |gi: usize, t: usize| gi * gadget_size + k + t;
    let v = |gi: usize, j: usize, l: usize| gi * gadget_size + k + (n - 1) + j * k + l;

    for gi in 0..k {
        for l in 0..k {
            vertex_map.insert(format!("c_{}_{}", gi + 1, l + 1), c(gi, l));
        }
        for t in 0..n - 1 {
            vertex_map.insert(format!("x_{}_{}", gi + 1, t + 1), x(gi, t));
        }
        for j in 0..n {
            for l in 0..k {
                vertex_map.insert(format!("v_{}_{}_{}", gi + 1, j + 1, l + 1), v(gi, j, l));
            }
        }
    }

    let mut edges = Vec::new();
    for gi in 0..k {
        for t in 0..n - 1 {
            edges.push((x(gi, t), c(gi, 0)));
        }
        for j in 0..n {
            for l in 0..k {
                edges.push((v(gi, j, l), c(gi, l)));
                if l + 1 < k {
                    edges.push((v(gi, j, l), c(gi, l + 1)));
                }
            }
        }
    }
    for gi in 0..k {
        for gj in (gi + 1)..k {
            edges.push((c(gi, gj), c(gj, gi)));
        }
    }
    let graph = Graph::new(k * gadget_size, edges).expect("gadget wiring is simple");

    let mut paths = Vec::new();
    let mut path_map = BTreeMap::new();
    for gi in 0..k {
        for t in 0..n - 1 {
            for j in 0..n {
                let mut vs = vec![x(gi, t)];
                for l in 0..k {
                    vs.push(c(gi, l));
                    vs.push(v(gi, j, l));
                }
                path_map.insert(
                    format!("long_{}_{}_{}", gi + 1, t + 1, j + 1),
                    paths.len(),
                );
                paths.push(SimplePath::new(vs).expect("long path is simple"));
            }
        }
    }
    for e in mcc.edges() {
        let (a, b) = e.endpoints();
        let (gi, pi) = (mcc.group_of(a), a % n);
        let (gj, pj) = (mcc.group_of(b), b % n);
        let vs = vec![v(gi, pi, gj), c(gi, gj), c(gj, gi), v(gj, pj, gi)];
        path_map.insert(
            format!("short_{}_{}_{}_{}", gi + 1, pi + 1, gj + 1, pj + 1),
            paths.len(),
        );
        paths.push(SimplePath::new(vs).expect("short path is simple"));
    }

    let target = k * (n - 1) + k * (k - 1) / 2;
    let instance = PspInstance::new(graph, paths, target)
        .expect("reduction output validates");
    Ok(ReductionOutput {
        instance,
        target,
        vertex_map,
        path_map,
    })
}

/// Reduction targeting pathwidth + degree + solution size: per group a
/// selection path `P_i` chained from n+1 sub-paths, a bypass row `W_i`, and
/// k verification paths ending at the hub vertices `c_{i,j}`. Long paths
/// detour around one sub-path, short paths verify one input edge. Target:
/// `k + C(k,2)` disjoint paths iff the clique exists.
pub fn reduce_mcc_pw(mcc: &MccInstance) -> Result<ReductionOutput, PspError> {
    check_reduction_params(mcc)?;
    let (k, n) = (mcc.k, mcc.n);
    let p_len = 2 * k * (n + 1);
    let gadget_size = p_len + n + n * k + k;
    let mut vertex_map = BTreeMap::new();

    let pv = |gi: usize, sp: usize, l: usize| gi * gadget_size + sp * 2 * k + 2 * l;
    let pu = |gi: usize, sp: usize, l: usize| gi * gadget_size + sp * 2 * k + 2 * l + 1;
    let w = |gi: usize, sp: usize| gi * gadget_size + p_len + sp;
    let xv = |gi: usize, sp: usize, j: usize| gi * gadget_size + p_len + n + j * n + sp;
    let c = |gi: usize, j: usize| gi * gadget_size + p_len + n + n * k + j;

    for gi in 0..k {
        for sp in 0..=n {
            for l in 0..k {
                vertex_map.insert(format!("v_{}_{}_{}", gi + 1, sp + 1, l + 1), pv(gi, sp, l));
                vertex_map.insert(format!("u_{}_{}_{}", gi + 1, sp + 1, l + 1), pu(gi, sp, l));
            }
        }
        for sp in 0..n {
            vertex_map.insert(format!("w_{}_{}", gi + 1, sp + 1), w(gi, sp));
            for j in 0..k {
                vertex_map.insert(format!("x_{}_{}_{}", gi + 1, sp + 1, j + 1), xv(gi, sp, j));
            }
        }
        for j in 0..k {
            vertex_map.insert(format!("c_{}_{}", gi + 1, j + 1), c(gi, j));
        }
    }

    let mut edges = Vec::new();
    for gi in 0..k {
        // the selection path: sub-paths of alternating v/u, chained
        for sp in 0..=n {
            for l in 0..k {
                edges.push((pv(gi, sp, l), pu(gi, sp, l)));
                if l + 1 < k {
                    edges.push((pu(gi, sp, l), pv(gi, sp, l + 1)));
                }
            }
            if sp < n {
                edges.push((pu(gi, sp, k - 1), pv(gi, sp + 1, 0)));
            }
        }
        // bypass vertices
        for sp in 0..n {
            edges.push((w(gi, sp), pv(gi, sp, 0)));
            edges.push((w(gi, sp), pv(gi, sp + 1, 0)));
        }
        // verification paths and their wiring into the selection path
        for j in 0..k {
            for sp in 0..n {
                if sp + 1 < n {
                    edges.push((xv(gi, sp, j), xv(gi, sp + 1, j)));
                }
                edges.push((pu(gi, sp, j), xv(gi, sp, j)));
            }
            edges.push((xv(gi, n - 1, j), c(gi, j)));
        }
    }
    for gi in 0..k {
        for gj in (gi + 1)..k {
            edges.push((c(gi, gj), c(gj, gi)));
        }
    }
    let graph = Graph::new(k * gadget_size, edges).expect("gadget wiring is simple");

    let mut paths = Vec::new();
    let mut path_map = BTreeMap::new();
    for gi in 0..k {
        for sp in 0..n {
            // all of P_i except sub-path sp and its outgoing connector,
            // detouring through w(sp)
            let mut vs = Vec::new();
            for s in 0..sp {
                for l in 0..k {
                    vs.push(pv(gi, s, l));
                    vs.push(pu(gi, s, l));
                }
            }
            vs.push(pv(gi, sp, 0));
            vs.push(w(gi, sp));
            for s in (sp + 1)..=n {
                for l in 0..k {
                    vs.push(pv(gi, s, l));
                    vs.push(pu(gi, s, l));
                }
            }
            path_map.insert(format!("long_{}_{}", gi + 1, sp + 1), paths.len());
            paths.push(SimplePath::new(vs).expect("long path is simple"));
        }
    }
    for e in mcc.edges() {
        let (a, b) = e.endpoints();
        let (gi, pi) = (mcc.group_of(a), a % n);
        let (gj, pj) = (mcc.group_of(b), b % n);
        let mut vs = vec![pv(gi, pi, gj), pu(gi, pi, gj)];
        for sp in pi..n {
            vs.push(xv(gi, sp, gj));
        }
        vs.push(c(gi, gj));
        vs.push(c(gj, gi));
        for sp in (pj..n).rev() {
            vs.push(xv(gj, sp, gi));
        }
        vs.push(pu(gj, pj, gi));
        vs.push(pv(gj, pj, gi));
        path_map.insert(
            format!("short_{}_{}_{}_{}", gi + 1, pi + 1, gj + 1, pj + 1),
            paths.len(),
        );
        paths.push(SimplePath::new(vs).expect("short path is simple"));
    }

    let target = k + k * (k - 1) / 2;
    let instance = PspInstance::new(graph, paths, target)
        .expect("reduction output validates");
    Ok(ReductionOutput {
        instance,
        target,
        vertex_map,
        path_map,
    })
}

/// Path decomposition of the [`reduce_mcc_pw`] graph: one bag per selection
/// path edge, x/w vertices riding along with their sub-path, and every hub
/// vertex in every bag. Width is O(k^2) by construction.
pub fn pw_witness(mcc: &MccInstance) -> Result<TreeDecomposition, PspError> {
    check_reduction_params(mcc)?;
    let (k, n) = (mcc.k, mcc.n);
    let p_len = 2 * k * (n + 1);
    let gadget_size = p_len + n + n * k + k;

    let pvertex = |gi: usize, pos: usize| gi * gadget_size + pos;
    let w = |gi: usize, sp: usize| gi * gadget_size + p_len + sp;
    let xv = |gi: usize, sp: usize, j: usize| gi * gadget_size + p_len + n + j * n + sp;
    let c = |gi: usize, j: usize| gi * gadget_size + p_len + n + n * k + j;

    let mut all_hubs = BTreeSet::new();
    for gi in 0..k {
        for j in 0..k {
            all_hubs.insert(c(gi, j));
        }
    }

    let mut bags: Vec<BTreeSet<usize>> = Vec::new();
    for gi in 0..k {
        for q in 0..(p_len - 1) {
            // endpoints of the q-th selection path edge
            let mut bag: BTreeSet<usize> = [pvertex(gi, q), pvertex(gi, q + 1)].into_iter().collect();
            // sub-paths the two endpoints belong to
            let sub_lo = q / (2 * k);
            let sub_hi = (q + 1) / (2 * k);
            for sp in sub_lo..=sub_hi {
                if sp < n {
                    for j in 0..k {
                        bag.insert(xv(gi, sp, j));
                    }
                    bag.insert(w(gi, sp));
                }
            }
            bag.extend(all_hubs.iter().copied());
            bags.push(bag);
        }
    }
    let skeleton = (1..bags.len()).map(|i| (i - 1, i)).collect();
    Ok(TreeDecomposition { bags, skeleton })
}

/// Parameters for [`gen_random`]: a random spanning tree on `n` vertices
/// plus `extra_edges` chords (so lambda equals `extra_edges`), and
/// `path_count` self-avoiding random walks of at most `max_len` edges.
#[derive(Debug, Clone, Copy)]
pub struct RandomInstanceParams {
    pub n: usize,
    pub extra_edges: usize,
    pub path_count: usize,
    pub max_len: usize,
    pub seed: u64,
}

pub fn gen_random(params: &RandomInstanceParams) -> PspInstance {
    assert!(params.n >= 2, "need at least 2 vertices");
    assert!(params.max_len >= 1, "paths need at least one edge");
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);

    let mut edge_set: BTreeSet<Edge> = BTreeSet::new();
    for v in 1..params.n {
        let parent = rng.gen_range(0..v);
        edge_set.insert(Edge::new(parent, v));
    }
    let mut added = 0;
    let mut attempts = 0;
    while added < params.extra_edges && attempts < 100 * (params.extra_edges + 1) {
        attempts += 1;
        let u = rng.gen_range(0..params.n);
        let v = rng.gen_range(0..params.n);
        if u != v && edge_set.insert(Edge::new(u, v)) {
            added += 1;
        }
    }
    let graph = Graph::new(params.n, edge_set.iter().map(|e| e.endpoints()))
        .expect("generated edges are simple");

    let mut paths = Vec::new();
    while paths.len() < params.path_count {
        let target_len = rng.gen_range(1..=params.max_len);
        let start = rng.gen_range(0..params.n);
        let mut vs = vec![start];
        let mut visited: BTreeSet<usize> = [start].into_iter().collect();
        while vs.len() <= target_len {
            let current = *vs.last().unwrap();
            let options: Vec<usize> = graph
                .neighbors(current)
                .iter()
                .copied()
                .filter(|v| !visited.contains(v))
                .collect();
            if options.is_empty() {
                break;
            }
            let next = options[rng.gen_range(0..options.len())];
            visited.insert(next);
            vs.push(next);
        }
        if vs.len() >= 2 {
            paths.push(SimplePath::new(vs).expect("walk is self-avoiding"));
        }
    }

    let k = usize::from(params.path_count > 0);
    PspInstance::new(graph, paths, k).expect("generated instance validates")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::validate_psp;
    use crate::treewidth::validate_decomposition;

    #[test]
    fn mcc_round_trip_and_validation() {
        let text = "mcc 1\n2 2 1\n0 2";
        let mcc = parse_mcc(text).unwrap();
        assert_eq!(mcc.group_count(), 2);
        assert_eq!(mcc.group_size(), 2);
        assert_eq!(mcc.edge_count(), 1);
        assert_eq!(serialize_mcc(&mcc), text);

        // intra-group edge rejected
        assert!(parse_mcc("mcc 1\n2 2 1\n0 1").is_err());
    }

    #[test]
    fn clique_bruteforce_examples() {
        let single = MccInstance::new(2, 2, vec![(0, 2)]).unwrap();
        assert_eq!(solve_mcc_bruteforce(&single).unwrap(), Some(vec![0, 2]));

        let none = MccInstance::new(2, 2, vec![]).unwrap();
        assert_eq!(solve_mcc_bruteforce(&none).unwrap(), None);

        let full = MccInstance::new(3, 2, MccInstance::all_cross_pairs(3, 2)).unwrap();
        let clique = solve_mcc_bruteforce(&full).unwrap().unwrap();
        assert_eq!(clique, vec![0, 2, 4]);
    }

    #[test]
    fn vc_reduction_counts() {
        let mcc = MccInstance::new(2, 2, vec![(0, 2), (1, 3)]).unwrap();
        let out = reduce_mcc_vc(&mcc).unwrap();
        let (k, n) = (2, 2);
        assert_eq!(out.target, k * (n - 1) + k * (k - 1) / 2);
        assert_eq!(out.instance.k(), out.target);
        assert_eq!(out.instance.path_count(), mcc.edge_count() + k * n * (n - 1));
        assert!(validate_psp(&out.instance).is_empty());

        // every long path visits 2k+1 vertices (2k edges)
        for (name, &idx) in &out.path_map {
            if name.starts_with("long") {
                assert_eq!(out.instance.paths()[idx].vertices().len(), 2 * k + 1);
                assert_eq!(out.instance.paths()[idx].edge_count(), 2 * k);
            }
        }
    }

    #[test]
    fn vc_reduction_hub_is_a_vertex_cover() {
        let mcc = MccInstance::new(3, 2, MccInstance::all_cross_pairs(3, 2)).unwrap();
        let out = reduce_mcc_vc(&mcc).unwrap();
        let hubs: BTreeSet<usize> = out
            .vertex_map
            .iter()
            .filter(|(name, _)| name.starts_with("c_"))
            .map(|(_, &v)| v)
            .collect();
        assert_eq!(hubs.len(), 9); // k^2
        for e in out.instance.graph().edges() {
            assert!(hubs.contains(&e.u()) || hubs.contains(&e.v()));
        }
    }

    #[test]
    fn pw_reduction_counts() {
        let mcc = MccInstance::new(2, 2, vec![(0, 2), (0, 3), (1, 2)]).unwrap();
        let out = reduce_mcc_pw(&mcc).unwrap();
        let (k, n) = (2, 2);
        assert_eq!(out.target, k + k * (k - 1) / 2);
        assert_eq!(out.instance.path_count(), n * k + mcc.edge_count());
        assert!(validate_psp(&out.instance).is_empty());
    }

    #[test]
    fn pw_long_paths_detour_and_collide() {
        let mcc = MccInstance::new(2, 2, vec![(0, 2)]).unwrap();
        let out = reduce_mcc_pw(&mcc).unwrap();
        let (k, n) = (2usize, 2usize);
        let gadget_size = 2 * k * (n + 1) + n + n * k + k;

        // within one gadget, every pair of long paths shares the first edge
        // of the final sub-path
        let last_sub_edge = Edge::new(n * 2 * k, n * 2 * k + 1);
        for sp in 0..n {
            let idx = out.path_map[&format!("long_1_{}", sp + 1)];
            assert!(out.instance.paths()[idx].uses_edge(last_sub_edge));
        }

        // the detour omits the sub-path edges plus its outgoing connector
        // and adds the two bypass edges
        let full_p: Vec<usize> = (0..2 * k * (n + 1)).collect();
        let all_edges: BTreeSet<Edge> =
            full_p.windows(2).map(|w| Edge::new(w[0], w[1])).collect();
        let idx = out.path_map["long_1_1"];
        let long_edges: BTreeSet<Edge> =
            out.instance.paths()[idx].edges().iter().copied().collect();
        let omitted: BTreeSet<Edge> = all_edges.difference(&long_edges).copied().collect();
        // sub-path 0 runs over positions 0..2k-1, connector joins 2k-1 to 2k
        let expected_omitted: BTreeSet<Edge> =
            (0..2 * k).map(|i| Edge::new(i, i + 1)).collect();
        assert_eq!(omitted, expected_omitted);
        let w0 = 2 * k * (n + 1);
        let added: BTreeSet<Edge> = long_edges.difference(&all_edges).copied().collect();
        assert_eq!(
            added,
            [Edge::new(0, w0), Edge::new(w0, 2 * k)].into_iter().collect()
        );

        // every short path has exactly one inter-gadget edge
        let inter = Edge::new(
            2 * k * (n + 1) + n + n * k + 1,           // c_{1,2}
            gadget_size + 2 * k * (n + 1) + n + n * k, // c_{2,1}
        );
        for (name, &idx) in &out.path_map {
            if name.starts_with("short") {
                let hits = out.instance.paths()[idx]
                    .edges()
                    .iter()
                    .filter(|&&e| e == inter)
                    .count();
                assert_eq!(hits, 1);
            }
        }
    }

    #[test]
    fn witness_is_a_valid_path_decomposition() {
        for (k, n) in [(2, 2), (2, 3), (3, 2)] {
            let mcc = MccInstance::new(k, n, MccInstance::all_cross_pairs(k, n)).unwrap();
            let out = reduce_mcc_pw(&mcc).unwrap();
            let dec = pw_witness(&mcc).unwrap();
            assert!(validate_decomposition(out.instance.graph(), &dec));
            assert_eq!(dec.bag_count(), k * (2 * k * (n + 1) - 1));
            // the skeleton is a path
            let mut degree = vec![0usize; dec.bag_count()];
            for &(a, b) in &dec.skeleton {
                degree[a] += 1;
                degree[b] += 1;
            }
            assert!(degree.iter().all(|&d| d <= 2));
            // bag bound: k^2 hubs + 2k x's + 2 w's + 2 path vertices
            let max_bag = dec.bags.iter().map(|b| b.len()).max().unwrap();
            assert!(max_bag <= k * k + 2 * k + 4);
        }
    }

    #[test]
    fn random_generator_is_deterministic() {
        let params = RandomInstanceParams {
            n: 12,
            extra_edges: 2,
            path_count: 8,
            max_len: 5,
            seed: 99,
        };
        let a = gen_random(&params);
        let b = gen_random(&params);
        assert_eq!(a, b);
        assert_eq!(a.graph().feedback_edge_number(), 2);
        assert!(validate_psp(&a).is_empty());

        let forest = gen_random(&RandomInstanceParams {
            extra_edges: 0,
            ..params
        });
        assert!(forest.graph().is_forest());
    }
}
