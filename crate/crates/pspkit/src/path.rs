use crate::error::PspError;
use crate::graph::{Edge, Graph};

/// A simple path given as its vertex sequence. Shape invariants (at least
/// one edge, no repeated vertex) are enforced at construction; whether each
/// step is an actual edge of a host graph is checked at the instance level.
#[derive(Debug, Clone)]
pub struct SimplePath {
    vertices: Vec<usize>,
    edges: Vec<Edge>, // sorted, derived from the vertex sequence
}

impl PartialEq for SimplePath {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices
    }
}

impl Eq for SimplePath {}

impl SimplePath {
    pub fn new(vertices: Vec<usize>) -> Result<Self, PspError> {
        if vertices.len() < 2 {
            return Err(PspError::invalid(
                "path",
                format!("needs at least 2 vertices, got {}", vertices.len()),
            ));
        }
        for pair in vertices.windows(2) {
            if pair[0] == pair[1] {
                return Err(PspError::invalid("path", format!("self-loop step at vertex {}", pair[0])));
            }
        }
        let mut sorted = vertices.clone();
        sorted.sort_unstable();
        for pair in sorted.windows(2) {
            if pair[0] == pair[1] {
                return Err(PspError::invalid("path", format!("repeated vertex {}", pair[0])));
            }
        }
        let mut edges: Vec<Edge> = vertices.windows(2).map(|w| Edge::new(w[0], w[1])).collect();
        edges.sort_unstable();
        Ok(SimplePath { vertices, edges })
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    /// Edge set of the path, sorted canonically.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn uses_edge(&self, e: Edge) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    /// True when every step of the path is an edge of `graph`.
    pub fn valid_in(&self, graph: &Graph) -> bool {
        self.vertices.iter().all(|&v| v < graph.vertex_count())
            && self.edges.iter().all(|e| graph.edge_set().contains(e))
    }
}

/// True iff the two paths share no edge. Orientation never matters because
/// edge sets are canonical.
pub fn paths_edge_disjoint(p: &SimplePath, q: &SimplePath) -> bool {
    // merge scan over the two sorted edge arrays
    let (a, b) = (p.edges(), q.edges());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return false,
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(vs: &[usize]) -> SimplePath {
        SimplePath::new(vs.to_vec()).unwrap()
    }

    #[test]
    fn shape_validation() {
        assert!(SimplePath::new(vec![0]).is_err());
        assert!(SimplePath::new(vec![1, 1]).is_err());
        assert!(SimplePath::new(vec![0, 1, 0]).is_err());
        assert!(SimplePath::new(vec![0, 1, 2]).is_ok());
    }

    #[test]
    fn disjointness_matches_edge_intersection() {
        assert!(!paths_edge_disjoint(&path(&[0, 1, 2]), &path(&[1, 2, 3])));
        assert!(paths_edge_disjoint(&path(&[0, 1]), &path(&[2, 3])));
        // identical edge sets traversed in opposite directions
        assert!(!paths_edge_disjoint(&path(&[0, 1, 2]), &path(&[2, 1, 0])));
    }

    #[test]
    fn never_disjoint_from_itself() {
        let p = path(&[4, 2, 7]);
        assert!(!paths_edge_disjoint(&p, &p));
    }
}
