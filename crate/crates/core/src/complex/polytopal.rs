use std::collections::HashMap;

use serde::Serialize;

use super::VertexId;

/// Vertices, edges and polygonal 2-faces of a polytope boundary, optionally
/// with its 3-cells given as lists of 2-face indices.
#[derive(Debug, Clone, Serialize)]
pub struct PolytopalComplex {
    pub n_vertices: usize,
    /// Sorted pairs `(a, b)` with `a < b`, sorted.
    pub edges: Vec<(VertexId, VertexId)>,
    /// Each polygon as a cyclic vertex sequence starting at its least vertex.
    pub faces2: Vec<Vec<VertexId>>,
    pub cells3: Option<Vec<Vec<usize>>>,
}

impl PolytopalComplex {
    pub fn new(
        n_vertices: usize,
        mut edges: Vec<(VertexId, VertexId)>,
        faces2: Vec<Vec<VertexId>>,
        cells3: Option<Vec<Vec<usize>>>,
    ) -> Self {
        for e in &mut edges {
            if e.0 > e.1 {
                *e = (e.1, e.0);
            }
        }
        edges.sort_unstable();
        edges.dedup();
        let faces2 = faces2.into_iter().map(normalize_cycle).collect();
        PolytopalComplex { n_vertices, edges, faces2, cells3 }
    }

    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = vec![self.n_vertices, self.edges.len(), self.faces2.len()];
        if let Some(c) = &self.cells3 {
            f.push(c.len());
        }
        f
    }

    pub fn edge_index(&self, a: VertexId, b: VertexId) -> Option<usize> {
        let key = if a < b { (a, b) } else { (b, a) };
        self.edges.binary_search(&key).ok()
    }

    /// Edge indices along the boundary of a polygon, in cyclic order.
    pub fn face_edges(&self, f: usize) -> Vec<usize> {
        let p = &self.faces2[f];
        (0..p.len())
            .map(|i| self.edge_index(p[i], p[(i + 1) % p.len()]).expect("polygon side is an edge"))
            .collect()
    }

    /// For every edge, the 2-faces containing it (ascending).
    pub fn faces_of_edges(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.edges.len()];
        for f in 0..self.faces2.len() {
            for e in self.face_edges(f) {
                out[e].push(f);
            }
        }
        out
    }

    /// For every vertex, the 2-faces containing it (ascending).
    pub fn faces_of_vertices(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.n_vertices];
        for (f, p) in self.faces2.iter().enumerate() {
            for &v in p {
                out[v as usize].push(f);
            }
        }
        out
    }

    pub fn adjacency(&self) -> Vec<Vec<VertexId>> {
        let mut adj = vec![Vec::new(); self.n_vertices];
        for &(a, b) in &self.edges {
            adj[a as usize].push(b);
            adj[b as usize].push(a);
        }
        adj
    }

    /// The two neighbours of `v` along polygon `f`.
    pub fn face_neighbors(&self, f: usize, v: VertexId) -> (VertexId, VertexId) {
        let p = &self.faces2[f];
        let i = p.iter().position(|&w| w == v).expect("vertex on polygon");
        (p[(i + p.len() - 1) % p.len()], p[(i + 1) % p.len()])
    }

    /// Structural checks: polygon sides are edges, polygons have at least three
    /// distinct vertices, and with 3-cells every 2-face lies in exactly two cells
    /// and every edge's ring of faces and cells closes up into one cycle.
    pub fn validate(&self) -> Result<(), String> {
        for (i, p) in self.faces2.iter().enumerate() {
            let mut s = p.clone();
            s.sort_unstable();
            s.dedup();
            if s.len() < 3 || s.len() != p.len() {
                return Err(format!("2-face {i} is degenerate"));
            }
            for j in 0..p.len() {
                if self.edge_index(p[j], p[(j + 1) % p.len()]).is_none() {
                    return Err(format!("2-face {i} has a side that is not an edge"));
                }
            }
        }
        let Some(cells) = &self.cells3 else { return Ok(()) };
        let mut face_cells = vec![Vec::new(); self.faces2.len()];
        for (c, fs) in cells.iter().enumerate() {
            for &f in fs {
                face_cells[f].push(c);
            }
        }
        if let Some(f) = face_cells.iter().position(|c| c.len() != 2) {
            return Err(format!("2-face {f} lies in {} cells", face_cells[f].len()));
        }
        for (e, fs) in self.faces_of_edges().iter().enumerate() {
            // faces around the edge linked through shared cells form one cycle
            let mut adj: HashMap<usize, Vec<usize>> = HashMap::new();
            for (i, &f) in fs.iter().enumerate() {
                for &g in &fs[i + 1..] {
                    if face_cells[f].iter().any(|c| face_cells[g].contains(c)) {
                        adj.entry(f).or_default().push(g);
                        adj.entry(g).or_default().push(f);
                    }
                }
            }
            if fs.len() < 3 || fs.iter().any(|f| adj.get(f).map_or(0, |v| v.len()) != 2) {
                return Err(format!("edge {e} ring is not a cycle"));
            }
            let mut seen = vec![fs[0]];
            let mut stack = vec![fs[0]];
            while let Some(f) = stack.pop() {
                for &g in &adj[&f] {
                    if !seen.contains(&g) {
                        seen.push(g);
                        stack.push(g);
                    }
                }
            }
            if seen.len() != fs.len() {
                return Err(format!("edge {e} ring splits"));
            }
        }
        Ok(())
    }
}

/// Rotates a cycle to start at its least vertex, direction towards the smaller neighbour.
fn normalize_cycle(p: Vec<VertexId>) -> Vec<VertexId> {
    let n = p.len();
    let (i, _) = p.iter().enumerate().min_by_key(|(_, &v)| v).expect("nonempty polygon");
    let fwd: Vec<VertexId> = (0..n).map(|k| p[(i + k) % n]).collect();
    let bwd: Vec<VertexId> = (0..n).map(|k| p[(i + n - k) % n]).collect();
    if n > 1 && bwd[1] < fwd[1] {
        bwd
    } else {
        fwd
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycles_are_normalized() {
        assert_eq!(normalize_cycle(vec![3, 1, 4, 2]), vec![1, 3, 2, 4]);
        assert_eq!(normalize_cycle(vec![5, 2, 7]), vec![2, 5, 7]);
    }

    #[test]
    fn square_pyramid_has_no_cells_check() {
        let p = PolytopalComplex::new(
            5,
            vec![(0, 1), (1, 2), (2, 3), (0, 3), (0, 4), (1, 4), (2, 4), (3, 4)],
            vec![vec![0, 1, 2, 3], vec![0, 1, 4], vec![1, 2, 4], vec![2, 3, 4], vec![0, 3, 4]],
            None,
        );
        assert!(p.validate().is_ok());
        assert_eq!(p.f_vector(), vec![5, 8, 5]);
        assert_eq!(p.faces_of_edges()[p.edge_index(0, 1).unwrap()], vec![0, 1]);
    }
}
