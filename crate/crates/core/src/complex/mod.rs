//! Abstract simplicial complexes and polygonal 2-complexes.
//!
//! A [`SimplicialComplex`] stores its facets over dense vertex ids `0..n` and
//! keeps a label map back to the external (usually 1-based) vertex names, so
//! fixtures read from text keep their original labels on output.

mod io;
mod iso;
mod polytopal;
mod simplex;
mod surface;

use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::OnceLock;

use itertools::Itertools;
use thiserror::Error;

pub use io::{format_facet_list, parse_facet_list, ParseError};
pub use iso::are_isomorphic;
pub(crate) use iso::{Hypergraph, MatchSearch};
pub use polytopal::PolytopalComplex;
pub use simplex::{Simplex, VertexId};
pub(crate) use surface::coherent_orientation;
pub use surface::{classify_closed, Orientability, PinchVertex, SurfaceProfile};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ComplexError {
    #[error("simplex {0:?} is not a face of the complex")]
    NotAFace(Simplex),
    #[error("not a closed surface: {0}")]
    NotASurface(String),
    #[error("facet {0:?} has a repeated vertex")]
    RepeatedVertex(Vec<u32>),
}

/// Immutable simplicial complex given by its inclusion-maximal faces.
#[derive(Debug)]
pub struct SimplicialComplex {
    n_vertices: usize,
    facets: Vec<Simplex>,
    labels: Vec<u32>,
    faces: OnceLock<Vec<Vec<Simplex>>>,
}

impl Clone for SimplicialComplex {
    fn clone(&self) -> Self {
        SimplicialComplex {
            n_vertices: self.n_vertices,
            facets: self.facets.clone(),
            labels: self.labels.clone(),
            faces: OnceLock::new(),
        }
    }
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.facets == other.facets && self.labels == other.labels
    }
}

impl Eq for SimplicialComplex {}

impl SimplicialComplex {
    /// Builds a complex from facets over arbitrary vertex labels. The labels
    /// are ranked to dense ids in increasing order and remembered.
    pub fn from_labeled_facets<I, F>(facets: I) -> Result<Self, ComplexError>
    where
        I: IntoIterator<Item = F>,
        F: AsRef<[u32]>,
    {
        let raw: Vec<Vec<u32>> = facets.into_iter().map(|f| f.as_ref().to_vec()).collect();
        let labels: Vec<u32> = raw
            .iter()
            .flatten()
            .copied()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let index: HashMap<u32, VertexId> =
            labels.iter().enumerate().map(|(i, &l)| (l, i as VertexId)).collect();
        let mut dense = Vec::with_capacity(raw.len());
        for f in raw {
            let s = Simplex::new(f.iter().map(|l| index[l]).collect())
                .ok_or(ComplexError::RepeatedVertex(f))?;
            dense.push(s);
        }
        Ok(Self::build(labels.len(), dense, labels))
    }

    /// Builds a complex over dense ids `0..n_vertices` with labels `1..=n`.
    /// Vertices not covered by any facet are dropped and the rest re-densified.
    pub fn from_facets(n_vertices: usize, facets: Vec<Simplex>) -> Self {
        let labels = (1..=n_vertices as u32).collect();
        Self::with_labels(facets, labels)
    }

    /// Builds a complex whose dense vertex `v` carries `labels[v]`. Unused
    /// vertices are dropped (their labels with them).
    pub fn with_labels(facets: Vec<Simplex>, labels: Vec<u32>) -> Self {
        let mut used = vec![false; labels.len()];
        for f in &facets {
            for &v in f.vertices() {
                used[v as usize] = true;
            }
        }
        if used.iter().all(|&u| u) {
            return Self::build(labels.len(), facets, labels);
        }
        let mut remap = vec![u32::MAX; labels.len()];
        let mut new_labels = Vec::new();
        for (v, &u) in used.iter().enumerate() {
            if u {
                remap[v] = new_labels.len() as u32;
                new_labels.push(labels[v]);
            }
        }
        let facets = facets.iter().map(|f| f.map(&remap)).collect();
        Self::build(new_labels.len(), facets, new_labels)
    }

    fn build(n_vertices: usize, facets: Vec<Simplex>, labels: Vec<u32>) -> Self {
        let facets = maximalize(facets);
        SimplicialComplex { n_vertices, facets, labels, faces: OnceLock::new() }
    }

    /// The complex with no faces at all.
    pub fn empty() -> Self {
        SimplicialComplex { n_vertices: 0, facets: Vec::new(), labels: Vec::new(), faces: OnceLock::new() }
    }

    /// The complex `{∅}` (the (-1)-sphere).
    pub fn void() -> Self {
        SimplicialComplex {
            n_vertices: 0,
            facets: vec![Simplex::empty()],
            labels: Vec::new(),
            faces: OnceLock::new(),
        }
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn facets(&self) -> &[Simplex] {
        &self.facets
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn label(&self, v: VertexId) -> u32 {
        self.labels[v as usize]
    }

    /// Dense id of an external label.
    pub fn vertex_of_label(&self, label: u32) -> Option<VertexId> {
        self.labels.iter().position(|&l| l == label).map(|i| i as VertexId)
    }

    /// Converts a simplex written in external labels into dense ids.
    pub fn simplex_from_labels(&self, labels: &[u32]) -> Option<Simplex> {
        let ids: Option<Vec<VertexId>> = labels.iter().map(|&l| self.vertex_of_label(l)).collect();
        Simplex::new(ids?)
    }

    pub fn labels_of(&self, s: &Simplex) -> Vec<u32> {
        s.vertices().iter().map(|&v| self.label(v)).collect()
    }

    /// Facets in external labels.
    pub fn labeled_facets(&self) -> Vec<Vec<u32>> {
        self.facets.iter().map(|f| self.labels_of(f)).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.facets.is_empty()
    }

    /// Dimension; -1 for `{∅}` and for the empty complex.
    pub fn dim(&self) -> isize {
        self.facets.iter().map(|f| f.dim()).max().unwrap_or(-1)
    }

    pub fn is_pure(&self) -> bool {
        let d = self.dim();
        self.facets.iter().all(|f| f.dim() == d)
    }

    /// Faces grouped by dimension: `faces_by_dim()[i]` holds the sorted i-faces.
    pub fn faces_by_dim(&self) -> &[Vec<Simplex>] {
        self.faces.get_or_init(|| {
            let d = self.dim();
            if d < 0 {
                return Vec::new();
            }
            let mut sets: Vec<HashSet<Simplex>> = vec![HashSet::new(); d as usize + 1];
            for f in &self.facets {
                for k in 1..=f.len() {
                    for s in f.subfaces(k) {
                        sets[k - 1].insert(s);
                    }
                }
            }
            sets.into_iter()
                .map(|s| {
                    let mut v: Vec<Simplex> = s.into_iter().collect();
                    v.sort_unstable();
                    v
                })
                .collect()
        })
    }

    pub fn faces(&self, dim: usize) -> &[Simplex] {
        self.faces_by_dim().get(dim).map(|v| v.as_slice()).unwrap_or(&[])
    }

    /// Index of a face within `faces(dim)`.
    pub fn face_index(&self, s: &Simplex) -> Option<usize> {
        if s.is_empty() {
            return None;
        }
        self.faces(s.len() - 1).binary_search(s).ok()
    }

    pub fn contains_face(&self, s: &Simplex) -> bool {
        if s.is_empty() {
            return !self.facets.is_empty();
        }
        self.face_index(s).is_some()
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.faces_by_dim().iter().map(|v| v.len()).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector()
            .iter()
            .enumerate()
            .map(|(i, &f)| if i % 2 == 0 { f as i64 } else { -(f as i64) })
            .sum()
    }

    /// Adjacency lists of the 1-skeleton.
    pub fn edge_graph(&self) -> Vec<Vec<VertexId>> {
        let mut adj = vec![Vec::new(); self.n_vertices];
        for e in self.faces(1) {
            let (a, b) = (e.vertices()[0], e.vertices()[1]);
            adj[a as usize].push(b);
            adj[b as usize].push(a);
        }
        for l in &mut adj {
            l.sort_unstable();
        }
        adj
    }

    /// Link of `face` with dense ambient ids of the link's vertices.
    pub fn link_with_map(&self, face: &Simplex) -> Result<(SimplicialComplex, Vec<VertexId>), ComplexError> {
        if !self.contains_face(face) {
            return Err(ComplexError::NotAFace(face.clone()));
        }
        let rest: Vec<Simplex> = self
            .facets
            .iter()
            .filter(|f| face.is_face_of(f))
            .map(|f| f.minus(face))
            .collect();
        Ok(reindex(rest, &self.labels))
    }

    /// Link `{g : g ∩ f = ∅, g ∪ f ∈ K}`, relabeled densely; labels are the ambient labels.
    pub fn link(&self, face: &Simplex) -> Result<SimplicialComplex, ComplexError> {
        self.link_with_map(face).map(|(k, _)| k)
    }

    /// Facets containing `face`.
    pub fn star_facets(&self, face: &Simplex) -> Vec<&Simplex> {
        self.facets.iter().filter(|f| face.is_face_of(f)).collect()
    }

    /// Pure, and every ridge lies in exactly two facets.
    pub fn is_pseudomanifold(&self) -> bool {
        if self.facets.is_empty() || !self.is_pure() {
            return false;
        }
        let mut count: HashMap<Simplex, u32> = HashMap::new();
        for f in &self.facets {
            for i in 0..f.len() {
                *count.entry(f.without_index(i)).or_insert(0) += 1;
            }
        }
        count.values().all(|&c| c == 2)
    }

    /// The dual graph on facets (adjacent through a common ridge) is connected.
    pub fn is_strongly_connected(&self) -> bool {
        if self.facets.is_empty() {
            return false;
        }
        let comps = self.strong_components();
        comps.iter().all(|&c| c == 0)
    }

    /// Component index of each facet in the facet-ridge graph.
    pub fn strong_components(&self) -> Vec<usize> {
        let mut by_ridge: HashMap<Simplex, Vec<usize>> = HashMap::new();
        for (i, f) in self.facets.iter().enumerate() {
            for j in 0..f.len() {
                by_ridge.entry(f.without_index(j)).or_default().push(i);
            }
        }
        let mut uf = UnionFind::new(self.facets.len());
        for fs in by_ridge.values() {
            for w in fs.windows(2) {
                uf.union(w[0], w[1]);
            }
        }
        let mut ids = HashMap::new();
        (0..self.facets.len())
            .map(|i| {
                let r = uf.find(i);
                let next = ids.len();
                *ids.entry(r).or_insert(next)
            })
            .collect()
    }

    /// Number of connected components of the underlying space.
    pub fn connected_components(&self) -> usize {
        let mut uf = UnionFind::new(self.n_vertices);
        for f in &self.facets {
            for w in f.vertices().windows(2) {
                uf.union(w[0] as usize, w[1] as usize);
            }
        }
        (0..self.n_vertices).filter(|&v| uf.find(v) == v).count()
    }

    /// All faces of `K` whose vertices lie in `w` (dense ids), relabeled densely.
    pub fn spanned_subcomplex(&self, w: &[VertexId]) -> SimplicialComplex {
        self.spanned_with_map(w).0
    }

    pub fn spanned_with_map(&self, w: &[VertexId]) -> (SimplicialComplex, Vec<VertexId>) {
        let mut inside = vec![false; self.n_vertices];
        for &v in w {
            inside[v as usize] = true;
        }
        let parts: Vec<Simplex> = self
            .facets
            .iter()
            .map(|f| Simplex::from_sorted(f.vertices().iter().copied().filter(|&v| inside[v as usize]).collect()))
            .filter(|s| !s.is_empty())
            .collect();
        reindex(parts, &self.labels)
    }

    /// Applies a vertex permutation (dense ids). Labels stay attached to positions.
    pub fn permuted(&self, images: &[VertexId]) -> SimplicialComplex {
        let facets = self.facets.iter().map(|f| f.map(images)).collect();
        Self::build(self.n_vertices, facets, self.labels.clone())
    }

    /// Same facets, labels reset to `1..=n`.
    pub fn with_default_labels(&self) -> SimplicialComplex {
        Self::build(self.n_vertices, self.facets.clone(), (1..=self.n_vertices as u32).collect())
    }

    /// Whether `images` maps the facet set onto itself.
    pub fn is_automorphism(&self, images: &[VertexId]) -> bool {
        if images.len() != self.n_vertices {
            return false;
        }
        let mut mapped: Vec<Simplex> = self.facets.iter().map(|f| f.map(images)).collect();
        mapped.sort_unstable();
        mapped == self.facets
    }

    /// `faces(k)` where the complex has dimension below `k` yields nothing; this
    /// returns the boundary complex of a pure complex (ridges in exactly one facet).
    pub fn boundary(&self) -> SimplicialComplex {
        let mut count: HashMap<Simplex, u32> = HashMap::new();
        for f in &self.facets {
            for i in 0..f.len() {
                *count.entry(f.without_index(i)).or_insert(0) += 1;
            }
        }
        let ridges: Vec<Simplex> = count.into_iter().filter(|(_, c)| *c == 1).map(|(s, _)| s).collect();
        let (k, _) = reindex(ridges, &self.labels);
        k
    }
}

/// Staircase triangulation of `a × b`: vertex `(u, v)` becomes `u·n_b + v`,
/// and each product of facets is cut along monotone lattice paths.
pub fn product(a: &SimplicialComplex, b: &SimplicialComplex) -> SimplicialComplex {
    let nb = b.n_vertices() as VertexId;
    let mut facets = Vec::new();
    for f in a.facets() {
        for g in b.facets() {
            let (p, q) = (f.len() - 1, g.len() - 1);
            // choose which of the p+q steps advance in the first factor
            for steps in (0..p + q).combinations(p) {
                let (mut i, mut j) = (0, 0);
                let mut verts = vec![f.vertices()[0] * nb + g.vertices()[0]];
                for t in 0..p + q {
                    if steps.contains(&t) {
                        i += 1;
                    } else {
                        j += 1;
                    }
                    verts.push(f.vertices()[i] * nb + g.vertices()[j]);
                }
                facets.push(Simplex::new(verts).expect("a lattice path visits distinct points"));
            }
        }
    }
    SimplicialComplex::from_facets(a.n_vertices() * b.n_vertices(), facets)
}

/// Densifies a facet list that lives over a subset of `labels`' vertices.
fn reindex(facets: Vec<Simplex>, labels: &[u32]) -> (SimplicialComplex, Vec<VertexId>) {
    let used: BTreeSet<VertexId> = facets.iter().flat_map(|f| f.vertices().iter().copied()).collect();
    let map: Vec<VertexId> = used.into_iter().collect();
    let mut inv = HashMap::new();
    for (i, &v) in map.iter().enumerate() {
        inv.insert(v, i as VertexId);
    }
    let facets: Vec<Simplex> = facets
        .into_iter()
        .map(|f| Simplex::from_sorted(f.vertices().iter().map(|v| inv[v]).collect()))
        .collect();
    let new_labels = map.iter().map(|&v| labels[v as usize]).collect();
    (SimplicialComplex::build(map.len(), facets, new_labels), map)
}

/// Sorts, dedups and drops facets contained in other facets.
fn maximalize(mut facets: Vec<Simplex>) -> Vec<Simplex> {
    facets.sort_unstable();
    facets.dedup();
    let max_len = facets.iter().map(|f| f.len()).max().unwrap_or(0);
    if facets.iter().all(|f| f.len() == max_len) {
        return facets;
    }
    let mut by_size: Vec<&Simplex> = facets.iter().collect();
    by_size.sort_by(|a, b| b.len().cmp(&a.len()));
    let mut kept: Vec<Simplex> = Vec::new();
    for f in by_size {
        if !kept.iter().any(|g| g.len() > f.len() && f.is_face_of(g)) {
            kept.push(f.clone());
        }
    }
    kept.sort_unstable();
    kept
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

/// Complex on `0..n` whose facets are given as plain vertex lists.
pub fn complex_from_lists(n: usize, facets: &[&[VertexId]]) -> SimplicialComplex {
    SimplicialComplex::from_facets(n, facets.iter().map(|f| Simplex::new(f.to_vec()).expect("distinct vertices")).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::{cross_polytope, simplex_boundary};

    #[test]
    fn triangle_boundary_f_vector() {
        let k = complex_from_lists(3, &[&[0, 1], &[1, 2], &[0, 2]]);
        assert_eq!(k.f_vector(), vec![3, 3]);
        assert_eq!(k.euler_characteristic(), 0);
    }

    #[test]
    fn maximalizes_input() {
        let k = complex_from_lists(3, &[&[0, 1, 2], &[0, 1], &[2]]);
        assert_eq!(k.facets().len(), 1);
        assert_eq!(k.f_vector(), vec![3, 3, 1]);
    }

    #[test]
    fn link_in_cross_polytope_is_octahedron() {
        let (b4, _) = cross_polytope(4);
        let l = b4.link(&Simplex::new(vec![0]).unwrap()).unwrap();
        assert_eq!(l.f_vector(), vec![6, 12, 8]);
        let (b3, _) = cross_polytope(3);
        assert!(are_isomorphic(&l, &b3).is_some());
    }

    #[test]
    fn link_of_edge_in_simplex_boundary() {
        let k = simplex_boundary(4);
        let l = k.link(&Simplex::new(vec![1, 3]).unwrap()).unwrap();
        assert_eq!(l.f_vector(), vec![3, 3]);
        assert_eq!(l.labels(), &[1, 3, 5]);
    }

    #[test]
    fn link_of_non_face_errors() {
        let k = complex_from_lists(3, &[&[0, 1], &[1, 2]]);
        assert_eq!(
            k.link(&Simplex::new(vec![0, 2]).unwrap()).unwrap_err(),
            ComplexError::NotAFace(Simplex::new(vec![0, 2]).unwrap())
        );
    }

    #[test]
    fn pseudomanifold_and_strong_connectivity() {
        let two = complex_from_lists(6, &[&[0, 1, 2], &[3, 4, 5]]);
        // single triangles have ridges in one facet only
        assert!(!two.is_pseudomanifold());
        let two_spheres = SimplicialComplex::from_facets(
            8,
            simplex_boundary(3)
                .facets()
                .iter()
                .cloned()
                .chain(simplex_boundary(3).facets().iter().map(|f| f.map(&[4, 5, 6, 7])))
                .collect(),
        );
        assert!(two_spheres.is_pseudomanifold());
        assert!(!two_spheres.is_strongly_connected());
        let fan = complex_from_lists(5, &[&[0, 1, 2], &[0, 1, 3], &[0, 1, 4]]);
        assert!(!fan.is_pseudomanifold());
        assert!(simplex_boundary(4).is_pseudomanifold());
        assert!(simplex_boundary(4).is_strongly_connected());
    }

    #[test]
    fn spanned_subcomplex_edge_cases() {
        let (k, _) = cross_polytope(3);
        let all: Vec<VertexId> = (0..6).collect();
        assert_eq!(k.spanned_subcomplex(&all), k);
        assert!(k.spanned_subcomplex(&[]).is_empty());
        // two antipodal vertices span two isolated points
        let s = k.spanned_subcomplex(&[0, 1]);
        assert_eq!(s.f_vector(), vec![2]);
    }

    #[test]
    fn labels_survive_relabeling() {
        let k = SimplicialComplex::from_labeled_facets([[10u32, 20, 30], [20, 30, 40]]).unwrap();
        assert_eq!(k.labels(), &[10, 20, 30, 40]);
        assert_eq!(k.labeled_facets(), vec![vec![10, 20, 30], vec![20, 30, 40]]);
        assert!(SimplicialComplex::from_labeled_facets([[1u32, 1, 2]]).is_err());
    }

    #[test]
    fn boundary_of_solid_simplex() {
        let k = complex_from_lists(4, &[&[0, 1, 2, 3]]);
        assert_eq!(k.boundary().f_vector(), vec![4, 6, 4]);
    }
}
