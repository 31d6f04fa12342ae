//! The 24-cell, 600-cell and 120-cell from exact coordinates.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use itertools::Itertools;
use log::debug;
use serde::Serialize;
use thiserror::Error;

use super::quad::{affine_dim, QuadField};
use crate::complex::{PolytopalComplex, VertexId};
use crate::perm::{automorphism_group_of_polytope, PermGroup};

type Point = [QuadField; 4];

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolytopeError {
    #[error("unknown polytope {0:?} (expected cell24, cell120 or cell600)")]
    UnknownName(String),
    #[error("construction failed: {0}")]
    ConstructionFailed(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Regular4 {
    Cell24,
    Cell120,
    Cell600,
}

impl Regular4 {
    pub fn f_vector(self) -> [usize; 4] {
        match self {
            Regular4::Cell24 => [24, 96, 96, 24],
            Regular4::Cell120 => [600, 1200, 720, 120],
            Regular4::Cell600 => [120, 720, 1200, 600],
        }
    }

    pub fn symmetry_order(self) -> u128 {
        match self {
            Regular4::Cell24 => 1152,
            Regular4::Cell120 | Regular4::Cell600 => 14400,
        }
    }
}

impl fmt::Display for Regular4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regular4::Cell24 => "cell24",
            Regular4::Cell120 => "cell120",
            Regular4::Cell600 => "cell600",
        })
    }
}

impl FromStr for Regular4 {
    type Err = PolytopeError;
    fn from_str(s: &str) -> Result<Self, PolytopeError> {
        match s {
            "cell24" | "24-cell" => Ok(Regular4::Cell24),
            "cell120" | "120-cell" => Ok(Regular4::Cell120),
            "cell600" | "600-cell" => Ok(Regular4::Cell600),
            _ => Err(PolytopeError::UnknownName(s.into())),
        }
    }
}

/// Exact coordinates plus the face lattice up to the 3-cells.
#[derive(Debug)]
pub struct PolytopeModel {
    pub name: Regular4,
    /// Sorted lexicographically; vertex `v` sits at `coords[v]`.
    pub coords: Vec<Point>,
    pub complex: PolytopalComplex,
    /// Vertex sets of the 3-cells, aligned with `complex.cells3`.
    pub facets: Vec<Vec<VertexId>>,
    symmetry: OnceLock<PermGroup>,
}

impl PolytopeModel {
    pub fn symmetry_group(&self) -> &PermGroup {
        self.symmetry.get_or_init(|| automorphism_group_of_polytope(&self.complex))
    }
}

pub fn polytope_symmetry_group(model: &PolytopeModel) -> &PermGroup {
    model.symmetry_group()
}

pub fn build_regular_4_polytope(name: Regular4) -> Result<PolytopeModel, PolytopeError> {
    let model = match name {
        Regular4::Cell24 => {
            let normals = cell24_dual_directions();
            assemble(name, cell24_vertices(), &normals)?
        }
        Regular4::Cell600 => {
            let verts = cell600_vertices();
            let normals = tetrahedron_centers(&verts);
            assemble(name, verts, &normals)?
        }
        Regular4::Cell120 => {
            let dual = build_regular_4_polytope(Regular4::Cell600)?;
            let centers = dual
                .facets
                .iter()
                .map(|f| sum(f.iter().map(|&v| dual.coords[v as usize])))
                .collect();
            assemble(name, centers, &dual.coords)?
        }
    };
    let f = model.complex.f_vector();
    if f != name.f_vector() {
        return Err(PolytopeError::ConstructionFailed(format!("{name}: f-vector {f:?}")));
    }
    Ok(model)
}

fn q(p: i64, d: i64) -> QuadField {
    QuadField::rational(p, d)
}

fn sum(it: impl Iterator<Item = Point>) -> Point {
    it.fold([QuadField::zero(); 4], |acc, p| [acc[0] + p[0], acc[1] + p[1], acc[2] + p[2], acc[3] + p[3]])
}

fn dot(a: &Point, b: &Point) -> QuadField {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]
}

fn sign_variants(base: Point) -> Vec<Point> {
    let mut out = BTreeSet::new();
    for mask in 0..16u8 {
        let mut p = base;
        for (i, x) in p.iter_mut().enumerate() {
            if mask >> i & 1 == 1 {
                *x = -*x;
            }
        }
        out.insert(p);
    }
    out.into_iter().collect()
}

fn permutations(base: Point, even_only: bool) -> Vec<Point> {
    let mut out = BTreeSet::new();
    for perm in (0..4).permutations(4) {
        let inversions = (0..4).flat_map(|i| (i + 1..4).map(move |j| (i, j))).filter(|&(i, j)| perm[i] > perm[j]).count();
        if even_only && inversions % 2 == 1 {
            continue;
        }
        out.insert([base[perm[0]], base[perm[1]], base[perm[2]], base[perm[3]]]);
    }
    out.into_iter().collect()
}

/// All permutations of (±1, ±1, 0, 0).
fn cell24_vertices() -> Vec<Point> {
    let one = QuadField::one();
    let zero = QuadField::zero();
    permutations([one, one, zero, zero], false).into_iter().flat_map(sign_variants).collect()
}

/// Vertices of the dual 24-cell: permutations of (±2, 0, 0, 0) and (±1, ±1, ±1, ±1).
fn cell24_dual_directions() -> Vec<Point> {
    let zero = QuadField::zero();
    let mut out: Vec<Point> = permutations([QuadField::int(2), zero, zero, zero], false)
        .into_iter()
        .flat_map(sign_variants)
        .collect();
    out.extend(sign_variants([QuadField::one(); 4]));
    out
}

/// (±½,±½,±½,±½), permutations of (±1,0,0,0), and even permutations of ½(±φ, ±1, ±1/φ, 0).
fn cell600_vertices() -> Vec<Point> {
    let zero = QuadField::zero();
    let half = q(1, 2);
    let mut out = sign_variants([half; 4]);
    out.extend(permutations([QuadField::one(), zero, zero, zero], false).into_iter().flat_map(sign_variants));
    let phi = QuadField::phi();
    let base = [phi * half, half, phi.recip() * half, zero];
    out.extend(permutations(base, true).into_iter().flat_map(sign_variants));
    out
}

fn squared_distance(a: &Point, b: &Point) -> QuadField {
    let d = [a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]];
    dot(&d, &d)
}

/// Pairs of points at minimal distance.
fn nearest_pairs(pts: &[Point]) -> Vec<(VertexId, VertexId)> {
    let mut best: Option<QuadField> = None;
    let mut pairs = Vec::new();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let d = squared_distance(&pts[i], &pts[j]);
            match best.map(|b| d.cmp(&b)) {
                Some(std::cmp::Ordering::Greater) => {}
                Some(std::cmp::Ordering::Equal) => pairs.push((i as VertexId, j as VertexId)),
                _ => {
                    best = Some(d);
                    pairs.clear();
                    pairs.push((i as VertexId, j as VertexId));
                }
            }
        }
    }
    pairs
}

/// Sums of the 4-cliques of the nearest-neighbour graph (directions of tetrahedral cells).
fn tetrahedron_centers(pts: &[Point]) -> Vec<Point> {
    let edges = nearest_pairs(pts);
    let mut adj = vec![BTreeSet::new(); pts.len()];
    for &(a, b) in &edges {
        adj[a as usize].insert(b);
        adj[b as usize].insert(a);
    }
    let mut out = Vec::new();
    for &(a, b) in &edges {
        let common: Vec<VertexId> = adj[a as usize].intersection(&adj[b as usize]).copied().filter(|&c| c > b).collect();
        for (i, &c) in common.iter().enumerate() {
            for &d in &common[i + 1..] {
                if adj[c as usize].contains(&d) {
                    out.push(sum([a, b, c, d].into_iter().map(|v| pts[v as usize])));
                }
            }
        }
    }
    out
}

fn sorted_intersection(a: &[VertexId], b: &[VertexId]) -> Vec<VertexId> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

fn assemble(name: Regular4, mut coords: Vec<Point>, normals: &[Point]) -> Result<PolytopeModel, PolytopeError> {
    coords.sort();
    coords.dedup();
    let n = coords.len();
    let edges = nearest_pairs(&coords);

    // facets: the vertex sets attaining the maximum of each candidate normal
    let mut facet_set: BTreeSet<Vec<VertexId>> = BTreeSet::new();
    for nrm in normals {
        let vals: Vec<QuadField> = coords.iter().map(|c| dot(nrm, c)).collect();
        let max = *vals.iter().max().expect("nonempty");
        let attain: Vec<VertexId> = (0..n).filter(|&i| vals[i] == max).map(|i| i as VertexId).collect();
        let pts: Vec<&[QuadField]> = attain.iter().map(|&v| coords[v as usize].as_slice()).collect();
        if affine_dim(&pts) != 3 {
            return Err(PolytopeError::ConstructionFailed(format!(
                "{name}: normal {nrm:?} supports {} vertices spanning dimension {}",
                attain.len(),
                affine_dim(&pts)
            )));
        }
        facet_set.insert(attain);
    }
    let facets: Vec<Vec<VertexId>> = facet_set.into_iter().collect();

    // 2-faces: intersections of facets with 2-dimensional affine hull
    let mut by_vertex = vec![Vec::new(); n];
    for (i, f) in facets.iter().enumerate() {
        for &v in f {
            by_vertex[v as usize].push(i);
        }
    }
    let mut face_sets: BTreeSet<Vec<VertexId>> = BTreeSet::new();
    for fs in &by_vertex {
        for (x, &i) in fs.iter().enumerate() {
            for &j in &fs[x + 1..] {
                let inter = sorted_intersection(&facets[i], &facets[j]);
                if inter.len() >= 3 {
                    let pts: Vec<&[QuadField]> = inter.iter().map(|&v| coords[v as usize].as_slice()).collect();
                    if affine_dim(&pts) == 2 {
                        face_sets.insert(inter);
                    }
                }
            }
        }
    }
    let edge_set: BTreeSet<(VertexId, VertexId)> = edges.iter().copied().collect();
    let mut polygons = Vec::with_capacity(face_sets.len());
    for s in &face_sets {
        polygons.push(order_polygon(s, &edge_set).ok_or_else(|| {
            PolytopeError::ConstructionFailed(format!("{name}: 2-face {s:?} is not a polygon of edges"))
        })?);
    }
    let face_list: Vec<&Vec<VertexId>> = face_sets.iter().collect();
    let cells3: Vec<Vec<usize>> = facets
        .iter()
        .map(|f| {
            face_list
                .iter()
                .enumerate()
                .filter(|(_, s)| sorted_intersection(f, s).len() == s.len())
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    let complex = PolytopalComplex::new(n, edges, polygons, Some(cells3));
    complex.validate().map_err(|e| PolytopeError::ConstructionFailed(format!("{name}: {e}")))?;
    debug!("{name}: f-vector {:?}", complex.f_vector());
    Ok(PolytopeModel { name, coords, complex, facets, symmetry: OnceLock::new() })
}

/// Cyclic order of a vertex set whose induced edges form a single cycle.
fn order_polygon(s: &[VertexId], edges: &BTreeSet<(VertexId, VertexId)>) -> Option<Vec<VertexId>> {
    let mut nbrs: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
    for (i, &a) in s.iter().enumerate() {
        for &b in &s[i + 1..] {
            if edges.contains(&(a, b)) {
                nbrs.entry(a).or_default().push(b);
                nbrs.entry(b).or_default().push(a);
            }
        }
    }
    if s.iter().any(|v| nbrs.get(v).map_or(0, |x| x.len()) != 2) {
        return None;
    }
    let mut cyc = vec![s[0]];
    let mut prev = s[0];
    let mut cur = nbrs[&s[0]][0];
    while cur != s[0] {
        cyc.push(cur);
        let nx = nbrs[&cur].iter().copied().find(|&w| w != prev)?;
        prev = cur;
        cur = nx;
    }
    (cyc.len() == s.len()).then_some(cyc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn link_graph_sizes(p: &PolytopalComplex, v: VertexId) -> (usize, usize) {
        let fv = p.faces_of_vertices();
        let deg = p.adjacency()[v as usize].len();
        (deg, fv[v as usize].len())
    }

    #[test]
    fn cell24_structure() {
        let m = build_regular_4_polytope(Regular4::Cell24).unwrap();
        assert_eq!(m.complex.f_vector(), vec![24, 96, 96, 24]);
        // vertex figure is a cube: 8 neighbours, 12 triangles
        for v in 0..24 {
            assert_eq!(link_graph_sizes(&m.complex, v), (8, 12));
        }
        assert!(m.facets.iter().all(|f| f.len() == 6));
    }

    #[test]
    fn cell600_structure() {
        let m = build_regular_4_polytope(Regular4::Cell600).unwrap();
        assert_eq!(m.complex.f_vector(), vec![120, 720, 1200, 600]);
        // vertex figure is an icosahedron: 12 neighbours, 30 triangles
        assert_eq!(link_graph_sizes(&m.complex, 0), (12, 30));
    }

    #[test]
    fn cell120_structure() {
        let m = build_regular_4_polytope(Regular4::Cell120).unwrap();
        assert_eq!(m.complex.f_vector(), vec![600, 1200, 720, 120]);
        assert!(m.complex.faces2.iter().all(|p| p.len() == 5));
        // vertex figure is a tetrahedron
        assert_eq!(link_graph_sizes(&m.complex, 0), (4, 6));
        // dual consistency
        assert_eq!(m.facets.len(), build_regular_4_polytope(Regular4::Cell600).unwrap().coords.len());
    }

    #[test]
    fn symmetry_orders() {
        for name in [Regular4::Cell24, Regular4::Cell600, Regular4::Cell120] {
            let m = build_regular_4_polytope(name).unwrap();
            let g = m.symmetry_group();
            assert_eq!(g.order(), name.symmetry_order(), "{name}");
            assert!(g.is_transitive());
        }
    }

    #[test]
    fn unknown_name() {
        assert!(matches!("cell5".parse::<Regular4>(), Err(PolytopeError::UnknownName(_))));
    }
}
