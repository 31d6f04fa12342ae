use std::collections::HashMap;

use num_rational::Ratio;
use serde::Serialize;

use super::{ComplexError, Simplex, SimplicialComplex, UnionFind, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientability {
    Yes,
    No,
    Undetermined,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PinchVertex {
    pub vertex: VertexId,
    pub label: u32,
    pub link_cycles: usize,
}

/// Topological summary of a closed (possibly pinched) triangulated surface.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurfaceProfile {
    pub euler_char: i64,
    /// Euler characteristic after splitting every pinch vertex into one copy per link cycle.
    pub normalized_euler_char: i64,
    pub orientable: Orientability,
    pub pinch_vertices: Vec<PinchVertex>,
    /// Sum over components of `(2 - χ)/2`; non-orientable components count ½ per cross-cap.
    pub normalized_genus: Ratio<i64>,
    /// Components of the normalized surface (= strong components of the complex).
    pub components: usize,
}

impl SurfaceProfile {
    pub fn is_surface(&self) -> bool {
        self.pinch_vertices.is_empty()
    }

    pub fn pinch_count(&self) -> usize {
        self.pinch_vertices.len()
    }

    pub fn strongly_connected(&self) -> bool {
        self.components == 1
    }
}

/// Classifies a pure 2-complex in which every edge lies in two triangles and
/// every vertex link is a disjoint union of cycles.
pub fn classify_closed(k: &SimplicialComplex) -> Result<SurfaceProfile, ComplexError> {
    if k.dim() != 2 || !k.is_pure() {
        return Err(ComplexError::NotASurface("not a pure 2-complex".into()));
    }
    let tris = k.facets();
    let mut edge_tris: HashMap<(VertexId, VertexId), Vec<usize>> = HashMap::new();
    for (t, f) in tris.iter().enumerate() {
        let v = f.vertices();
        for (a, b) in [(v[0], v[1]), (v[0], v[2]), (v[1], v[2])] {
            edge_tris.entry((a, b)).or_default().push(t);
        }
    }
    if let Some(((a, b), ts)) = edge_tris.iter().find(|(_, ts)| ts.len() != 2) {
        return Err(ComplexError::NotASurface(format!(
            "edge {}-{} lies in {} triangles",
            k.label(*a),
            k.label(*b),
            ts.len()
        )));
    }

    let strong = k.strong_components();
    let n_comp = strong.iter().copied().max().map_or(0, |m| m + 1);

    // Link cycles: at vertex v, triangles t1, t2 are linked when they share an edge through v.
    let mut vertex_tris: Vec<Vec<usize>> = vec![Vec::new(); k.n_vertices()];
    for (t, f) in tris.iter().enumerate() {
        for &v in f.vertices() {
            vertex_tris[v as usize].push(t);
        }
    }
    let mut pinch = Vec::new();
    // (component, count) of split vertex copies
    let mut comp_vertices = vec![0i64; n_comp];
    for v in 0..k.n_vertices() {
        let ts = &vertex_tris[v];
        let local: HashMap<usize, usize> = ts.iter().enumerate().map(|(i, &t)| (t, i)).collect();
        let mut uf = UnionFind::new(ts.len());
        for &t in ts {
            for &w in tris[t].vertices() {
                if w as usize == v {
                    continue;
                }
                let key = (w.min(v as VertexId), w.max(v as VertexId));
                for &s in &edge_tris[&key] {
                    uf.union(local[&t], local[&s]);
                }
            }
        }
        let mut roots: Vec<usize> = (0..ts.len()).map(|i| uf.find(i)).collect();
        roots.sort_unstable();
        roots.dedup();
        for &r in &roots {
            comp_vertices[strong[ts[r]]] += 1;
        }
        if roots.len() > 1 {
            pinch.push(PinchVertex { vertex: v as VertexId, label: k.label(v as VertexId), link_cycles: roots.len() });
        }
    }

    let mut comp_edges = vec![0i64; n_comp];
    for ts in edge_tris.values() {
        comp_edges[strong[ts[0]]] += 1;
    }
    let mut comp_tris = vec![0i64; n_comp];
    for &c in &strong {
        comp_tris[c] += 1;
    }
    let euler_char = k.euler_characteristic();
    let normalized_euler_char = euler_char + pinch.iter().map(|p| p.link_cycles as i64 - 1).sum::<i64>();
    let mut genus = Ratio::from_integer(0);
    for c in 0..n_comp {
        let chi = comp_vertices[c] - comp_edges[c] + comp_tris[c];
        genus += Ratio::new(2 - chi, 2);
    }
    let orientable = match coherent_orientation(k) {
        Some(_) => Orientability::Yes,
        None => Orientability::No,
    };
    Ok(SurfaceProfile {
        euler_char,
        normalized_euler_char,
        orientable,
        pinch_vertices: pinch,
        normalized_genus: genus,
        components: n_comp,
    })
}

/// Coherent ±1 orientation of the facets of a pure complex whose ridges lie in
/// at most two facets, relative to the sorted vertex order, propagated per
/// strong component from its least facet (+1). `None` on a sign conflict.
pub(crate) fn coherent_orientation(k: &SimplicialComplex) -> Option<Vec<i8>> {
    let facets = k.facets();
    let mut by_ridge: HashMap<Simplex, Vec<(usize, usize)>> = HashMap::new();
    for (t, f) in facets.iter().enumerate() {
        for i in 0..f.len() {
            by_ridge.entry(f.without_index(i)).or_default().push((t, i));
        }
    }
    let mut adj: Vec<Vec<(usize, i8)>> = vec![Vec::new(); facets.len()];
    for occ in by_ridge.values() {
        if occ.len() > 2 {
            return None;
        }
        if let [(t1, i1), (t2, i2)] = occ[..] {
            // s1 (-1)^i1 = - s2 (-1)^i2  =>  s2 = -(-1)^(i1+i2) s1
            let rel: i8 = if (i1 + i2) % 2 == 0 { -1 } else { 1 };
            adj[t1].push((t2, rel));
            adj[t2].push((t1, rel));
        }
    }
    let mut sign = vec![0i8; facets.len()];
    for start in 0..facets.len() {
        if sign[start] != 0 {
            continue;
        }
        sign[start] = 1;
        let mut stack = vec![start];
        while let Some(t) = stack.pop() {
            for &(u, rel) in &adj[t] {
                let want = sign[t] * rel;
                if sign[u] == 0 {
                    sign[u] = want;
                    stack.push(u);
                } else if sign[u] != want {
                    return None;
                }
            }
        }
    }
    Some(sign)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::complex_from_lists;
    use crate::polytope::simplex_boundary;

    fn mobius() -> SimplicialComplex {
        // 5-vertex Möbius strip
        complex_from_lists(5, &[&[0, 1, 2], &[1, 2, 3], &[2, 3, 4], &[3, 4, 0], &[4, 0, 1]])
    }

    fn rp2() -> SimplicialComplex {
        complex_from_lists(
            6,
            &[
                &[0, 1, 2], &[0, 2, 3], &[0, 3, 4], &[0, 4, 5], &[0, 5, 1],
                &[1, 2, 4], &[2, 3, 5], &[3, 4, 1], &[4, 5, 2], &[5, 1, 3],
            ],
        )
    }

    #[test]
    fn tetrahedron_boundary_is_sphere() {
        let p = classify_closed(&simplex_boundary(3)).unwrap();
        assert_eq!(p.euler_char, 2);
        assert_eq!(p.normalized_genus, Ratio::from_integer(0));
        assert!(p.is_surface());
        assert_eq!(p.orientable, Orientability::Yes);
    }

    #[test]
    fn projective_plane_gets_half_genus() {
        let p = classify_closed(&rp2()).unwrap();
        assert_eq!(p.euler_char, 1);
        assert_eq!(p.orientable, Orientability::No);
        assert_eq!(p.normalized_genus, Ratio::new(1, 2));
    }

    #[test]
    fn mobius_strip_is_not_closed_but_non_orientable() {
        assert!(classify_closed(&mobius()).is_err());
        assert!(coherent_orientation(&mobius()).is_none());
        assert!(coherent_orientation(&simplex_boundary(4)).is_some());
    }

    #[test]
    fn pinched_sphere_pair() {
        // two tetrahedron boundaries glued at vertex 0
        let k = complex_from_lists(
            7,
            &[&[0, 1, 2], &[0, 1, 3], &[0, 2, 3], &[1, 2, 3], &[0, 4, 5], &[0, 4, 6], &[0, 5, 6], &[4, 5, 6]],
        );
        let p = classify_closed(&k).unwrap();
        assert_eq!(p.euler_char, 3);
        assert_eq!(p.normalized_euler_char, 4);
        assert_eq!(p.pinch_count(), 1);
        assert_eq!(p.components, 2);
        assert!(!p.strongly_connected());
    }
}
