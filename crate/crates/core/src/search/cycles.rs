//! Hamiltonian cycles of small graphs, optionally up to a symmetry group.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::complex::VertexId;
use crate::perm::PermGroup;

#[derive(Debug, Clone, Serialize)]
pub struct CycleCatalog {
    pub n_vertices: usize,
    /// Undirected Hamiltonian cycles, before any symmetry reduction.
    pub total: usize,
    /// One representative per class, as a vertex sequence starting at 0.
    pub representatives: Vec<Vec<VertexId>>,
}

impl CycleCatalog {
    pub fn count(&self) -> usize {
        self.representatives.len()
    }
}

/// Every Hamiltonian cycle of the graph, each listed once (starting at 0,
/// second vertex smaller than the last).
pub fn all_hamiltonian_cycles(adj: &[Vec<VertexId>]) -> Vec<Vec<VertexId>> {
    let n = adj.len();
    let mut out = Vec::new();
    if n < 3 {
        return out;
    }
    let mut path = vec![0 as VertexId];
    let mut used = vec![false; n];
    used[0] = true;
    extend(adj, &mut path, &mut used, &mut out);
    out
}

fn extend(adj: &[Vec<VertexId>], path: &mut Vec<VertexId>, used: &mut [bool], out: &mut Vec<Vec<VertexId>>) {
    let last = *path.last().expect("nonempty");
    if path.len() == adj.len() {
        if adj[last as usize].contains(&0) && path[1] < last {
            out.push(path.clone());
        }
        return;
    }
    for &w in &adj[last as usize] {
        if !used[w as usize] {
            used[w as usize] = true;
            path.push(w);
            extend(adj, path, used, out);
            path.pop();
            used[w as usize] = false;
        }
    }
}

fn edge_set(cycle: &[VertexId], images: &[VertexId]) -> Vec<(VertexId, VertexId)> {
    let n = cycle.len();
    let mut e: Vec<(VertexId, VertexId)> = (0..n)
        .map(|i| {
            let (a, b) = (images[cycle[i] as usize], images[cycle[(i + 1) % n] as usize]);
            (a.min(b), a.max(b))
        })
        .collect();
    e.sort_unstable();
    e
}

/// Hamiltonian cycles up to the action of `group` (and rotation/reflection).
pub fn hamiltonian_cycles(adj: &[Vec<VertexId>], group: Option<&PermGroup>) -> CycleCatalog {
    let cycles = all_hamiltonian_cycles(adj);
    let identity: Vec<VertexId> = (0..adj.len() as VertexId).collect();
    let elements: Vec<Vec<VertexId>> = match group {
        Some(g) => g.elements().into_iter().map(|p| p.images().to_vec()).collect(),
        None => vec![identity.clone()],
    };
    let mut seen: BTreeSet<Vec<(VertexId, VertexId)>> = BTreeSet::new();
    let mut representatives = Vec::new();
    for c in &cycles {
        if seen.contains(&edge_set(c, &identity)) {
            continue;
        }
        for g in &elements {
            seen.insert(edge_set(c, g));
        }
        representatives.push(c.clone());
    }
    CycleCatalog { n_vertices: adj.len(), total: cycles.len(), representatives }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::automorphism_group_of_polytope;
    use crate::polytope::{edge_graph, Platonic};

    #[test]
    fn platonic_census() {
        let want = [1, 1, 2, 1, 17];
        for (p, w) in Platonic::ALL.into_iter().zip(want) {
            let c = p.complex();
            let g = automorphism_group_of_polytope(&c);
            let cat = hamiltonian_cycles(&edge_graph(&c), Some(&g));
            assert_eq!(cat.count(), w, "{p}");
            assert!(cat.representatives.iter().all(|r| r.len() == c.n_vertices));
        }
    }

    #[test]
    fn raw_counts() {
        // K4 has three Hamiltonian cycles, the cube six
        let cube = Platonic::Cube.complex();
        assert_eq!(all_hamiltonian_cycles(&edge_graph(&Platonic::Tetrahedron.complex())).len(), 3);
        assert_eq!(all_hamiltonian_cycles(&edge_graph(&cube)).len(), 6);
        assert_eq!(hamiltonian_cycles(&edge_graph(&cube), None).count(), 6);
        assert_eq!(all_hamiltonian_cycles(&edge_graph(&Platonic::Dodecahedron.complex())).len(), 30);
    }
}
