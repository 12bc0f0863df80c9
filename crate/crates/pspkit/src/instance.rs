use std::collections::BTreeSet;

use crate::error::{Diagnostic, PspError};
use crate::graph::{Edge, Graph};
use crate::path::{paths_edge_disjoint, SimplePath};

/// A full problem instance: host graph, ordered path collection, threshold k.
///
/// Instances are immutable once built and every constructor validates the
/// paths against the graph, so solvers can assume well-formed input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PspInstance {
    graph: Graph,
    paths: Vec<SimplePath>,
    k: usize,
}

impl PspInstance {
    pub fn new(graph: Graph, paths: Vec<SimplePath>, k: usize) -> Result<Self, Vec<Diagnostic>> {
        let diags = diagnose_paths(&graph, &paths);
        if diags.is_empty() {
            Ok(PspInstance { graph, paths, k })
        } else {
            Err(diags)
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn paths(&self) -> &[SimplePath] {
        &self.paths
    }

    pub fn path_count(&self) -> usize {
        self.paths.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Same instance with a different decision threshold.
    pub fn with_k(&self, k: usize) -> Self {
        PspInstance {
            graph: self.graph.clone(),
            paths: self.paths.clone(),
            k,
        }
    }

    /// Maximum edge-length over the collection (`r` in parameter readouts).
    pub fn max_path_len(&self) -> usize {
        self.paths.iter().map(|p| p.edge_count()).max().unwrap_or(0)
    }
}

/// A selection of paths by index into the instance's collection.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Solution {
    indices: BTreeSet<usize>,
}

impl Solution {
    pub fn new(indices: impl IntoIterator<Item = usize>) -> Self {
        Solution {
            indices: indices.into_iter().collect(),
        }
    }

    pub fn empty() -> Self {
        Solution::default()
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.contains(&i)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.indices.iter().copied()
    }

    pub fn insert(&mut self, i: usize) {
        self.indices.insert(i);
    }

    pub fn extend(&mut self, other: impl IntoIterator<Item = usize>) {
        self.indices.extend(other);
    }
}

impl FromIterator<usize> for Solution {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        Solution::new(iter)
    }
}

/// Outcome of checking a solution against an instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Verdict {
    pub valid: bool,
    pub size: usize,
    pub meets_k: bool,
}

/// Validates the path collection against the graph; one entry per violation.
pub fn diagnose_paths(graph: &Graph, paths: &[SimplePath]) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    for (i, p) in paths.iter().enumerate() {
        for &v in p.vertices() {
            if v >= graph.vertex_count() {
                diags.push(Diagnostic::for_path(i, format!("vertex {v} out of range")));
            }
        }
        for w in p.vertices().windows(2) {
            if w[0] != w[1]
                && w[0] < graph.vertex_count()
                && w[1] < graph.vertex_count()
                && !graph.has_edge(w[0], w[1])
            {
                diags.push(Diagnostic::for_path(
                    i,
                    format!("step ({},{}) is not an edge of the graph", w[0], w[1]),
                ));
            }
        }
    }
    diags
}

/// Diagnostics over raw vertex sequences, used by the parser and by callers
/// holding unvalidated data. Covers shape violations the typed API rejects
/// at construction.
pub fn diagnose_raw(graph: &Graph, raw_paths: &[Vec<usize>]) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    for (i, vs) in raw_paths.iter().enumerate() {
        if vs.len() < 2 {
            diags.push(Diagnostic::for_path(i, "path has fewer than 2 vertices"));
            continue;
        }
        let mut self_loop = false;
        for w in vs.windows(2) {
            if w[0] == w[1] {
                diags.push(Diagnostic::for_path(i, format!("self-loop step at vertex {}", w[0])));
                self_loop = true;
            }
        }
        let mut sorted = vs.clone();
        sorted.sort_unstable();
        for w in sorted.windows(2) {
            if w[0] == w[1] && !self_loop {
                diags.push(Diagnostic::for_path(i, format!("vertex {} repeated", w[0])));
                break;
            }
        }
        for &v in vs {
            if v >= graph.vertex_count() {
                diags.push(Diagnostic::for_path(i, format!("vertex {v} out of range")));
            }
        }
        for w in vs.windows(2) {
            if w[0] != w[1]
                && w[0] < graph.vertex_count()
                && w[1] < graph.vertex_count()
                && !graph.has_edge(w[0], w[1])
            {
                diags.push(Diagnostic::for_path(
                    i,
                    format!("step ({},{}) is not an edge of the graph", w[0], w[1]),
                ));
            }
        }
    }
    diags
}

/// Re-checks an already constructed instance. Empty output means every
/// invariant holds (always the case for instances built through the API).
pub fn validate_psp(instance: &PspInstance) -> Vec<Diagnostic> {
    let raw: Vec<Vec<usize>> = instance.paths.iter().map(|p| p.vertices().to_vec()).collect();
    diagnose_raw(&instance.graph, &raw)
}

/// Messages explaining why a solution is invalid; empty when it is valid.
pub fn solution_violations(instance: &PspInstance, solution: &Solution) -> Vec<String> {
    let mut reasons = Vec::new();
    let indices: Vec<usize> = solution.iter().collect();
    for &i in &indices {
        if i >= instance.path_count() {
            reasons.push(format!("index {i} out of range (instance has {} paths)", instance.path_count()));
        }
    }
    for (a, &i) in indices.iter().enumerate() {
        if i >= instance.path_count() {
            continue;
        }
        for &j in indices.iter().skip(a + 1) {
            if j >= instance.path_count() {
                continue;
            }
            let (p, q) = (&instance.paths[i], &instance.paths[j]);
            if !paths_edge_disjoint(p, q) {
                let shared: Vec<Edge> = p
                    .edges()
                    .iter()
                    .copied()
                    .filter(|e| q.uses_edge(*e))
                    .collect();
                reasons.push(format!(
                    "paths {i} and {j} share edge {}",
                    shared
                        .iter()
                        .map(|e| e.to_string())
                        .collect::<Vec<_>>()
                        .join(", ")
                ));
            }
        }
    }
    reasons
}

/// Checks index range and pairwise edge-disjointness of a selection.
pub fn verify_solution(instance: &PspInstance, solution: &Solution) -> Verdict {
    let valid = solution_violations(instance, solution).is_empty();
    let size = solution.len();
    Verdict {
        valid,
        size,
        meets_k: valid && size >= instance.k(),
    }
}

// ---------------------------------------------------------------------------
// PSP file format
//
//   psp 1
//   <n> <m> <p> <k>
//   m lines: <u> <v>
//   p lines: <t> <v0> ... <vt>
//
// Lines whose first non-blank character is '#' are comments.
// ---------------------------------------------------------------------------

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines {
            inner: text.lines().enumerate(),
        }
    }

    /// Next meaningful line as (1-based line number, content).
    fn next_content(&mut self) -> Option<(usize, &'a str)> {
        for (idx, line) in self.inner.by_ref() {
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            return Some((idx + 1, trimmed));
        }
        None
    }
}

fn parse_usize(token: &str, line: usize, what: &str) -> Result<usize, PspError> {
    token
        .parse::<usize>()
        .map_err(|_| PspError::parse(line, format!("expected {what}, got '{token}'")))
}

/// Parses the PSP text format. Errors carry the offending line number.
pub fn parse_psp(text: &str) -> Result<PspInstance, PspError> {
    let mut lines = Lines::new(text);

    let (ln, magic) = lines
        .next_content()
        .ok_or_else(|| PspError::parse(0, "empty input"))?;
    if magic.split_whitespace().collect::<Vec<_>>() != ["psp", "1"] {
        return Err(PspError::parse(ln, format!("expected header 'psp 1', got '{magic}'")));
    }

    let (ln, header) = lines
        .next_content()
        .ok_or_else(|| PspError::parse(ln, "missing size header"))?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.len() != 4 {
        return Err(PspError::parse(ln, format!("expected '<n> <m> <p> <k>', got '{header}'")));
    }
    let n = parse_usize(tokens[0], ln, "vertex count")?;
    let m = parse_usize(tokens[1], ln, "edge count")?;
    let p = parse_usize(tokens[2], ln, "path count")?;
    let k = parse_usize(tokens[3], ln, "threshold k")?;

    let mut edge_list = Vec::with_capacity(m);
    let mut last_ln = ln;
    for _ in 0..m {
        let (ln, line) = lines
            .next_content()
            .ok_or_else(|| PspError::parse(last_ln, "missing edge line"))?;
        last_ln = ln;
        let tk: Vec<&str> = line.split_whitespace().collect();
        if tk.len() != 2 {
            return Err(PspError::parse(ln, format!("expected '<u> <v>', got '{line}'")));
        }
        let u = parse_usize(tk[0], ln, "vertex id")?;
        let v = parse_usize(tk[1], ln, "vertex id")?;
        if u == v {
            return Err(PspError::parse(ln, format!("self-loop edge ({u},{u})")));
        }
        if u >= n || v >= n {
            return Err(PspError::parse(ln, format!("edge ({u},{v}) out of range for {n} vertices")));
        }
        if edge_list.iter().any(|&(a, b)| Edge::new(a, b) == Edge::new(u, v)) {
            return Err(PspError::parse(ln, format!("duplicate edge ({u},{v})")));
        }
        edge_list.push((u, v));
    }
    let graph = Graph::new(n, edge_list).expect("edge list pre-checked");

    let mut paths = Vec::with_capacity(p);
    for _ in 0..p {
        let (ln, line) = lines
            .next_content()
            .ok_or_else(|| PspError::parse(last_ln, "missing path line"))?;
        last_ln = ln;
        let tk: Vec<&str> = line.split_whitespace().collect();
        if tk.is_empty() {
            return Err(PspError::parse(ln, "empty path line"));
        }
        let t = parse_usize(tk[0], ln, "path edge count")?;
        if t < 1 {
            return Err(PspError::parse(ln, "path must have at least 1 edge"));
        }
        if tk.len() != t + 2 {
            return Err(PspError::parse(
                ln,
                format!("path of {t} edges needs {} vertices, got {}", t + 1, tk.len() - 1),
            ));
        }
        let mut vs = Vec::with_capacity(t + 1);
        for tok in &tk[1..] {
            vs.push(parse_usize(tok, ln, "vertex id")?);
        }
        for w in vs.windows(2) {
            if w[0] == w[1] {
                return Err(PspError::parse(ln, format!("self-loop step at vertex {}", w[0])));
            }
        }
        {
            let mut sorted = vs.clone();
            sorted.sort_unstable();
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return Err(PspError::parse(ln, "repeated vertex in path"));
            }
        }
        for &v in &vs {
            if v >= n {
                return Err(PspError::parse(ln, format!("vertex {v} out of range")));
            }
        }
        for w in vs.windows(2) {
            if !graph.has_edge(w[0], w[1]) {
                return Err(PspError::parse(
                    ln,
                    format!("step ({},{}) is not an edge of the graph", w[0], w[1]),
                ));
            }
        }
        paths.push(SimplePath::new(vs).expect("path pre-checked"));
    }

    if let Some((ln, line)) = lines.next_content() {
        return Err(PspError::parse(ln, format!("unexpected trailing content '{line}'")));
    }

    PspInstance::new(graph, paths, k).map_err(|d| {
        PspError::parse(
            last_ln,
            format!("instance invalid after parse: {}", d.first().map(|x| x.to_string()).unwrap_or_default()),
        )
    })
}

/// Canonical serialization; equal instances produce identical bytes and the
/// output re-parses to an equal instance.
pub fn serialize_psp(instance: &PspInstance) -> String {
    let mut out = String::from("psp 1\n");
    let g = instance.graph();
    out.push_str(&format!(
        "{} {} {} {}",
        g.vertex_count(),
        g.edge_count(),
        instance.path_count(),
        instance.k()
    ));
    for e in g.edges() {
        out.push_str(&format!("\n{} {}", e.u(), e.v()));
    }
    for p in instance.paths() {
        out.push('\n');
        out.push_str(&p.edge_count().to_string());
        for v in p.vertices() {
            out.push_str(&format!(" {v}"));
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Solution file format
//
//   solution <count>
//   <count> path indices, 0-based, ascending
// ---------------------------------------------------------------------------

pub fn parse_solution(text: &str) -> Result<Solution, PspError> {
    let mut lines = Lines::new(text);
    let (ln, header) = lines
        .next_content()
        .ok_or_else(|| PspError::parse(0, "empty solution file"))?;
    let tk: Vec<&str> = header.split_whitespace().collect();
    if tk.len() != 2 || tk[0] != "solution" {
        return Err(PspError::parse(ln, format!("expected 'solution <count>', got '{header}'")));
    }
    let count = parse_usize(tk[1], ln, "solution size")?;

    let mut indices = Vec::new();
    let mut last_ln = ln;
    while let Some((ln, line)) = lines.next_content() {
        last_ln = ln;
        for tok in line.split_whitespace() {
            indices.push(parse_usize(tok, ln, "path index")?);
        }
    }
    if indices.len() != count {
        return Err(PspError::parse(
            last_ln,
            format!("expected {count} indices, found {}", indices.len()),
        ));
    }
    if indices.windows(2).any(|w| w[0] >= w[1]) {
        return Err(PspError::parse(last_ln, "indices must be strictly ascending"));
    }
    Ok(Solution::new(indices))
}

pub fn serialize_solution(solution: &Solution) -> String {
    let mut out = format!("solution {}", solution.len());
    if !solution.is_empty() {
        out.push('\n');
        out.push_str(
            &solution
                .iter()
                .map(|i| i.to_string())
                .collect::<Vec<_>>()
                .join(" "),
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "psp 1\n2 1 1 1\n0 1\n1 0 1";

    fn minimal() -> PspInstance {
        parse_psp(MINIMAL).unwrap()
    }

    #[test]
    fn parses_minimal_instance() {
        let inst = minimal();
        assert_eq!(inst.graph().vertex_count(), 2);
        assert_eq!(inst.graph().edge_count(), 1);
        assert_eq!(inst.path_count(), 1);
        assert_eq!(inst.k(), 1);
        assert_eq!(inst.paths()[0].vertices(), &[0, 1]);
    }

    #[test]
    fn serializes_minimal_instance_byte_exact() {
        assert_eq!(serialize_psp(&minimal()), MINIMAL);
    }

    #[test]
    fn self_loop_step_is_reported_with_line_number() {
        let text = "psp 1\n2 1 1 1\n0 1\n1 0 0";
        match parse_psp(text) {
            Err(PspError::Parse { line, message }) => {
                assert_eq!(line, 4);
                assert!(message.contains("self-loop"), "{message}");
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn non_edge_step_is_reported() {
        let text = "psp 1\n3 1 1 1\n0 1\n2 0 1 2";
        match parse_psp(text) {
            Err(PspError::Parse { line, message }) => {
                assert_eq!(line, 4);
                assert!(message.contains("not an edge"), "{message}");
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn repeated_vertex_is_reported() {
        let text = "psp 1\n3 2 1 1\n0 1\n1 2\n3 0 1 2 1";
        match parse_psp(text) {
            Err(PspError::Parse { line, .. }) => assert_eq!(line, 5),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn comments_and_blank_lines_are_skipped() {
        let text = "# comment\npsp 1\n\n2 1 1 1\n# edge\n0 1\n1 0 1";
        assert_eq!(parse_psp(text).unwrap(), minimal());
    }

    #[test]
    fn zero_path_instance_has_no_path_lines() {
        let g = Graph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        let inst = PspInstance::new(g, vec![], 0).unwrap();
        assert_eq!(serialize_psp(&inst), "psp 1\n3 2 0 0\n0 1\n1 2");
        assert_eq!(parse_psp(&serialize_psp(&inst)).unwrap(), inst);
    }

    #[test]
    fn validate_reports_raw_violations() {
        let g = Graph::new(3, vec![(0, 1)]).unwrap();
        let diags = diagnose_raw(&g, &[vec![0, 1, 0], vec![1, 2]]);
        assert!(diags.iter().any(|d| d.path == Some(0)));
        assert!(diags.iter().any(|d| d.path == Some(1) && d.message.contains("not an edge")));
    }

    #[test]
    fn validate_accepts_constructed_instances() {
        assert!(validate_psp(&minimal()).is_empty());
    }

    #[test]
    fn verify_solution_verdicts() {
        let inst = minimal();
        let v = verify_solution(&inst, &Solution::new([0]));
        assert_eq!((v.valid, v.size, v.meets_k), (true, 1, true));

        let empty = verify_solution(&inst.with_k(0), &Solution::empty());
        assert_eq!((empty.valid, empty.size, empty.meets_k), (true, 0, true));

        // duplicate path copies conflict with each other
        let g = Graph::new(2, vec![(0, 1)]).unwrap();
        let p = SimplePath::new(vec![0, 1]).unwrap();
        let dup = PspInstance::new(g, vec![p.clone(), p], 2).unwrap();
        let v = verify_solution(&dup, &Solution::new([0, 1]));
        assert!(!v.valid);
        assert!(!v.meets_k);
    }

    #[test]
    fn solution_round_trip() {
        let s = Solution::new([0, 3, 7]);
        let text = serialize_solution(&s);
        assert_eq!(text, "solution 3\n0 3 7");
        assert_eq!(parse_solution(&text).unwrap(), s);
        assert_eq!(parse_solution("solution 0").unwrap(), Solution::empty());
    }
}
