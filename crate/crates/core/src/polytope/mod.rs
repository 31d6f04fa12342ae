//! Boundary complexes of regular polytopes.

mod quad;
mod regular4;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use serde::Serialize;

use crate::complex::{PolytopalComplex, Simplex, SimplicialComplex, VertexId};

pub use quad::{affine_dim, rank, QuadField};
pub use regular4::{build_regular_4_polytope, polytope_symmetry_group, PolytopeError, PolytopeModel, Regular4};

/// ∂Δ^d: all d-subsets of d+1 vertices.
pub fn simplex_boundary(d: usize) -> SimplicialComplex {
    assert!(d >= 1);
    let facets = (0..=d as VertexId)
        .combinations(d)
        .map(|c| Simplex::new(c).expect("distinct"))
        .collect();
    SimplicialComplex::from_facets(d + 1, facets)
}

/// ∂β^d with antipodal pairs `(2i, 2i+1)`, returned as the diagonal matching.
pub fn cross_polytope(d: usize) -> (SimplicialComplex, Vec<(VertexId, VertexId)>) {
    assert!(d >= 1);
    let facets = (0..1u64 << d)
        .map(|mask| Simplex::new((0..d).map(|i| (2 * i) as VertexId + ((mask >> i) & 1) as VertexId).collect()).expect("distinct"))
        .collect();
    let matching = (0..d as VertexId).map(|i| (2 * i, 2 * i + 1)).collect();
    (SimplicialComplex::from_facets(2 * d, facets), matching)
}

/// Vertices, edges and triangles of a pure 2-complex.
pub fn triangles_to_polytopal(k: &SimplicialComplex) -> PolytopalComplex {
    let edges = k.faces(1).iter().map(|e| (e.vertices()[0], e.vertices()[1])).collect();
    let tris = k.faces(2).iter().map(|t| t.vertices().to_vec()).collect();
    PolytopalComplex::new(k.n_vertices(), edges, tris, None)
}

/// Dual of a polyhedral 2-sphere: one vertex per face, one face per vertex.
pub fn dual_sphere(p: &PolytopalComplex) -> PolytopalComplex {
    let fe = p.faces_of_edges();
    let edges: Vec<(VertexId, VertexId)> = fe
        .iter()
        .map(|fs| {
            assert_eq!(fs.len(), 2, "every edge of a 2-sphere lies in two faces");
            (fs[0] as VertexId, fs[1] as VertexId)
        })
        .collect();
    let fv = p.faces_of_vertices();
    let mut faces = Vec::with_capacity(p.n_vertices);
    for (v, fs) in fv.iter().enumerate() {
        // walk around v: consecutive faces share an edge through v
        let mut cyc = vec![fs[0]];
        let mut prev = usize::MAX;
        loop {
            let cur = *cyc.last().expect("nonempty");
            let next = fs
                .iter()
                .copied()
                .find(|&g| g != cur && g != prev && shares_edge_at(p, cur, g, v as VertexId))
                .expect("faces around a vertex form a cycle");
            if next == cyc[0] {
                break;
            }
            prev = cur;
            cyc.push(next);
        }
        assert_eq!(cyc.len(), fs.len());
        faces.push(cyc.into_iter().map(|f| f as VertexId).collect());
    }
    PolytopalComplex::new(p.faces2.len(), edges, faces, None)
}

fn shares_edge_at(p: &PolytopalComplex, f: usize, g: usize, v: VertexId) -> bool {
    let (a, b) = p.face_neighbors(f, v);
    let (c, d) = p.face_neighbors(g, v);
    a == c || a == d || b == c || b == d
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Platonic {
    Tetrahedron,
    Cube,
    Octahedron,
    Dodecahedron,
    Icosahedron,
}

impl Platonic {
    pub const ALL: [Platonic; 5] =
        [Platonic::Tetrahedron, Platonic::Cube, Platonic::Octahedron, Platonic::Dodecahedron, Platonic::Icosahedron];

    pub fn complex(self) -> PolytopalComplex {
        match self {
            Platonic::Tetrahedron => triangles_to_polytopal(&simplex_boundary(3)),
            Platonic::Octahedron => triangles_to_polytopal(&cross_polytope(3).0),
            Platonic::Cube => dual_sphere(&Platonic::Octahedron.complex()),
            Platonic::Icosahedron => triangles_to_polytopal(&icosahedron()),
            Platonic::Dodecahedron => dual_sphere(&Platonic::Icosahedron.complex()),
        }
    }
}

impl fmt::Display for Platonic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Platonic::Tetrahedron => "tetrahedron",
            Platonic::Cube => "cube",
            Platonic::Octahedron => "octahedron",
            Platonic::Dodecahedron => "dodecahedron",
            Platonic::Icosahedron => "icosahedron",
        };
        f.write_str(s)
    }
}

impl FromStr for Platonic {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Platonic::ALL.into_iter().find(|p| p.to_string() == s).ok_or_else(|| format!("unknown solid {s:?}"))
    }
}

/// Apex 0, upper ring 1..=5, lower ring 6..=10 (lower i between upper i and i+1), apex 11.
fn icosahedron() -> SimplicialComplex {
    let mut tris: BTreeSet<Simplex> = BTreeSet::new();
    let u = |i: usize| (1 + i % 5) as VertexId;
    let l = |i: usize| (6 + i % 5) as VertexId;
    for i in 0..5 {
        for t in [[0, u(i), u(i + 1)], [u(i), u(i + 1), l(i)], [u(i + 1), l(i), l(i + 1)], [11, l(i), l(i + 1)]] {
            tris.insert(Simplex::new(t.to_vec()).expect("distinct"));
        }
    }
    SimplicialComplex::from_facets(12, tris.into_iter().collect())
}

/// Graph of a polytopal complex as adjacency lists.
pub fn edge_graph(p: &PolytopalComplex) -> Vec<Vec<VertexId>> {
    let mut adj = p.adjacency();
    for a in &mut adj {
        a.sort_unstable();
    }
    adj
}

/// Degree histogram, for quick structural assertions.
pub fn degree_profile(p: &PolytopalComplex) -> HashMap<usize, usize> {
    let mut h = HashMap::new();
    for a in p.adjacency() {
        *h.entry(a.len()).or_insert(0) += 1;
    }
    h
}
