//! k-Hamiltonicity checks and exhaustive search for Hamiltonian surfaces in
//! polytope 2-skeletons.

mod csp;
mod cycles;

use std::collections::{BTreeSet, HashMap};
use std::path::PathBuf;
use std::time::Instant;

use itertools::Itertools;
use num_rational::Ratio;
use serde::Serialize;
use thiserror::Error;

use crate::complex::{are_isomorphic, classify_closed, Hypergraph, PolytopalComplex, Simplex, SimplicialComplex, SurfaceProfile, VertexId};
use crate::perm::{automorphism_group, PermGroup};

pub use csp::{Budget, SearchMode, SearchStatus};
pub use cycles::{all_hamiltonian_cycles, hamiltonian_cycles, CycleCatalog};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("missing edges do not form a perfect matching: {0}")]
    NotAMatching(String),
    #[error("edge {0:?} lies in fewer than two faces")]
    ThinEdge((VertexId, VertexId)),
    #[error("faces are not all of the same size")]
    MixedFaces,
    #[error("vertex {0} lies in more than 64 faces")]
    VertexDegree(VertexId),
}

/// The ambient polytope against which k-Hamiltonicity is measured.
#[derive(Debug, Clone, Copy)]
pub enum Ambient<'a> {
    /// Every k-face of this complex (matched by label).
    Complex(&'a SimplicialComplex),
    /// ∂β^d on the vertices of the subcomplex, diagonals inferred from its missing edges.
    CrossPolytope,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HamiltonianReport {
    pub k: usize,
    pub hamiltonian: bool,
    /// Inferred diagonals as label pairs (cross-polytope ambient only).
    pub matching: Option<Vec<(u32, u32)>>,
    /// First ambient k-face missing from the subcomplex, as labels.
    pub witness: Option<Vec<u32>>,
}

/// Decides whether `k` contains the full k-skeleton of the ambient polytope.
pub fn is_k_hamiltonian(k: &SimplicialComplex, ambient: Ambient, kdim: usize) -> Result<HamiltonianReport, SearchError> {
    let present = |labels: &[u32]| k.simplex_from_labels(labels).is_some_and(|s| k.contains_face(&s));
    match ambient {
        Ambient::Complex(a) => {
            let witness = a
                .faces(kdim)
                .iter()
                .map(|f| a.labels_of(f))
                .find(|l| !present(l));
            Ok(HamiltonianReport { k: kdim, hamiltonian: witness.is_none(), matching: None, witness })
        }
        Ambient::CrossPolytope => {
            let n = k.n_vertices();
            let adj = k.edge_graph();
            let mut partner: Vec<Option<VertexId>> = vec![None; n];
            for v in 0..n {
                let missing: Vec<VertexId> =
                    (0..n as VertexId).filter(|&w| w as usize != v && !adj[v].contains(&w)).collect();
                if missing.len() != 1 {
                    return Err(SearchError::NotAMatching(format!(
                        "vertex {} misses {} edges",
                        k.label(v as VertexId),
                        missing.len()
                    )));
                }
                partner[v] = Some(missing[0]);
            }
            let partner: Vec<VertexId> = partner.into_iter().map(|p| p.expect("set above")).collect();
            let mut matching: Vec<(u32, u32)> = (0..n as VertexId)
                .filter(|&v| v < partner[v as usize])
                .map(|v| (k.label(v), k.label(partner[v as usize])))
                .collect();
            matching.sort_unstable();
            let witness = (0..n as VertexId)
                .combinations(kdim + 1)
                .filter(|c| c.iter().all(|&v| !c.contains(&partner[v as usize])))
                .map(|c| Simplex::new(c).expect("distinct"))
                .find(|s| !k.contains_face(s))
                .map(|s| k.labels_of(&s));
            Ok(HamiltonianReport { k: kdim, hamiltonian: witness.is_none(), matching: Some(matching), witness })
        }
    }
}

/// Face counts forced on any 1-Hamiltonian surface in a 2-skeleton with
/// uniform m-gonal faces: all vertices and edges, each edge in two faces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurfaceCensus {
    pub f0: usize,
    pub f1: usize,
    pub f2: usize,
    pub face_size: usize,
    pub euler_char: i64,
    /// Orientable genus `(2 − χ)/2`.
    pub genus: Ratio<i64>,
}

pub fn expected_surface_census(p: &PolytopalComplex) -> Result<SurfaceCensus, SearchError> {
    let m = p.faces2.first().map_or(3, |f| f.len());
    if p.faces2.iter().any(|f| f.len() != m) {
        return Err(SearchError::MixedFaces);
    }
    let (f0, f1) = (p.n_vertices, p.edges.len());
    let f2 = 2 * f1 / m;
    let euler_char = f0 as i64 - f1 as i64 + f2 as i64;
    Ok(SurfaceCensus { f0, f1, f2, face_size: m, euler_char, genus: Ratio::new(2 - euler_char, 2) })
}

#[derive(Debug, Clone)]
pub struct SearchProblem {
    pub substrate: PolytopalComplex,
    pub mode: SearchMode,
    /// Symmetries of the substrate used to prune the first branching level.
    pub symmetry: Option<PermGroup>,
    pub budget: Budget,
    /// Progress file; completed subtrees are skipped on a rerun.
    pub checkpoint: Option<PathBuf>,
}

impl SearchProblem {
    pub fn new(substrate: PolytopalComplex, mode: SearchMode) -> Self {
        SearchProblem { substrate, mode, symmetry: None, budget: Budget::default(), checkpoint: None }
    }
}

/// One isomorphism class of solutions.
#[derive(Debug, Clone, Serialize)]
pub struct SolutionClass {
    /// Substrate face indices of the first solution found in this class.
    pub faces: Vec<usize>,
    /// Triangulated representative (non-triangular faces are coned off).
    #[serde(serialize_with = "serialize_facets")]
    pub representative: SimplicialComplex,
    pub profile: SurfaceProfile,
    pub automorphism_order: u128,
    /// Number of solutions (within the pruned search) in this class.
    pub multiplicity: usize,
}

fn serialize_facets<S: serde::Serializer>(k: &SimplicialComplex, s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(k.labeled_facets())
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchOutcome {
    pub mode: SearchMode,
    pub status: SearchStatus,
    pub solutions: Vec<Vec<usize>>,
    /// Strongly connected solutions up to isomorphism.
    pub classes: Vec<SolutionClass>,
    /// Solutions that fall apart into several strong components.
    pub disconnected: Vec<SolutionClass>,
    pub nodes: u64,
    pub wall_secs: f64,
    pub subtrees_total: usize,
    pub subtrees_completed: usize,
}

impl SearchOutcome {
    pub fn exhausted(&self) -> bool {
        self.status == SearchStatus::Exhausted
    }
}

/// Exhaustive backtracking for 1-Hamiltonian (pinched) surfaces in `p.substrate`.
pub fn search_hamiltonian_surfaces(p: &SearchProblem) -> Result<SearchOutcome, SearchError> {
    let sub = &p.substrate;
    let counts = sub.faces_of_edges();
    if let Some(e) = counts.iter().position(|fs| fs.len() < 2) {
        return Err(SearchError::ThinEdge(sub.edges[e]));
    }
    if let Some(v) = sub.faces_of_vertices().iter().position(|fs| fs.len() > 64) {
        return Err(SearchError::VertexDegree(v as VertexId));
    }
    let start = Instant::now();
    let engine = csp::Engine::new(sub, p.mode);
    let fingerprint = format!(
        "{:?}:{:?}:{}:{}",
        p.mode,
        sub.f_vector(),
        p.symmetry.as_ref().map_or(1, |g| g.order()),
        engine.domain_sizes().iter().join(",")
    );
    let raw = engine.run(p.symmetry.as_ref(), &p.budget, p.checkpoint.as_ref(), &fingerprint);
    let (classes, disconnected) = classify_solutions(sub, &raw.solutions);
    Ok(SearchOutcome {
        mode: p.mode,
        status: raw.status,
        solutions: raw.solutions,
        classes,
        disconnected,
        nodes: raw.nodes,
        wall_secs: start.elapsed().as_secs_f64(),
        subtrees_total: raw.tasks_total,
        subtrees_completed: raw.tasks_completed,
    })
}

/// The chosen faces as a simplicial complex; polygons with more than three
/// vertices are coned from a new vertex.
pub fn solution_complex(p: &PolytopalComplex, faces: &[usize]) -> SimplicialComplex {
    let mut facets = Vec::new();
    let mut next = p.n_vertices as VertexId;
    for &f in faces {
        let poly = &p.faces2[f];
        if poly.len() == 3 {
            facets.push(Simplex::new(poly.clone()).expect("distinct"));
        } else {
            for i in 0..poly.len() {
                facets.push(Simplex::new(vec![poly[i], poly[(i + 1) % poly.len()], next]).expect("distinct"));
            }
            next += 1;
        }
    }
    let labels = (1..=next).collect();
    SimplicialComplex::with_labels(facets, labels)
}

fn classify_solutions(p: &PolytopalComplex, solutions: &[Vec<usize>]) -> (Vec<SolutionClass>, Vec<SolutionClass>) {
    type Key = (Vec<usize>, Vec<usize>, (Vec<u64>, Vec<usize>));
    let mut buckets: HashMap<Key, Vec<usize>> = HashMap::new();
    let mut classes: Vec<SolutionClass> = Vec::new();
    for faces in solutions {
        let k = solution_complex(p, faces);
        let profile = classify_closed(&k).expect("search solutions are closed pinched surfaces");
        let pinches: Vec<usize> = profile.pinch_vertices.iter().map(|v| v.link_cycles).sorted().collect();
        let key = (k.f_vector(), pinches, Hypergraph::from_complex(&k).fingerprint());
        let bucket = buckets.entry(key).or_default();
        if let Some(&c) = bucket.iter().find(|&&c| are_isomorphic(&classes[c].representative, &k).is_some()) {
            classes[c].multiplicity += 1;
            continue;
        }
        bucket.push(classes.len());
        let automorphism_order = automorphism_group(&k).order();
        classes.push(SolutionClass { faces: faces.clone(), representative: k, profile, automorphism_order, multiplicity: 1 });
    }
    let (mut conn, mut disc): (Vec<_>, Vec<_>) = classes.into_iter().partition(|c| c.profile.strongly_connected());
    let order = |c: &SolutionClass| (std::cmp::Reverse(c.profile.pinch_count()), c.profile.normalized_genus, c.faces.clone());
    conn.sort_by_key(order);
    disc.sort_by_key(order);
    (conn, disc)
}

/// Diagonal pairs used by the halfspace tightness sweep, in dense ids.
pub fn cross_polytope_diagonals(k: &SimplicialComplex) -> Result<Vec<(VertexId, VertexId)>, SearchError> {
    let r = is_k_hamiltonian(k, Ambient::CrossPolytope, 1)?;
    let pairs = r.matching.expect("cross-polytope mode");
    let pairs: BTreeSet<(VertexId, VertexId)> = pairs
        .into_iter()
        .map(|(a, b)| (k.vertex_of_label(a).expect("label"), k.vertex_of_label(b).expect("label")))
        .collect();
    Ok(pairs.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::complex_from_lists;
    use crate::polytope::{build_regular_4_polytope, cross_polytope, simplex_boundary, Regular4};

    #[test]
    fn hamiltonicity_of_boundaries() {
        let b = simplex_boundary(4);
        let full = complex_from_lists(5, &[&[0, 1, 2, 3, 4]]);
        let r = is_k_hamiltonian(&b, Ambient::Complex(&full), 3).unwrap();
        assert!(r.hamiltonian);
        assert!(!is_k_hamiltonian(&b, Ambient::Complex(&full), 4).unwrap().hamiltonian);
        let (oct, _) = cross_polytope(3);
        let r = is_k_hamiltonian(&oct, Ambient::CrossPolytope, 2).unwrap();
        assert!(r.hamiltonian);
        assert_eq!(r.matching.unwrap(), vec![(1, 2), (3, 4), (5, 6)]);
    }

    #[test]
    fn matching_must_be_perfect() {
        let b = simplex_boundary(3);
        assert!(matches!(is_k_hamiltonian(&b, Ambient::CrossPolytope, 1), Err(SearchError::NotAMatching(_))));
    }

    #[test]
    fn census() {
        let c = |r| expected_surface_census(&build_regular_4_polytope(r).unwrap().complex).unwrap();
        let s = c(Regular4::Cell600);
        assert_eq!((s.f0, s.f1, s.f2, s.euler_char), (120, 720, 480, -120));
        assert_eq!(s.genus, Ratio::from_integer(61));
        let s = c(Regular4::Cell24);
        assert_eq!((s.f2, s.euler_char), (64, -8));
        let s = c(Regular4::Cell120);
        assert_eq!((s.f0, s.f1, s.f2, s.face_size, s.euler_char), (600, 1200, 480, 5, -120));
    }

    #[test]
    fn cell24_pinched_types() {
        let m = build_regular_4_polytope(Regular4::Cell24).unwrap();
        let mut p = SearchProblem::new(m.complex.clone(), SearchMode::Pinched);
        p.symmetry = Some(m.symmetry_group().clone());
        let out = search_hamiltonian_surfaces(&p).unwrap();
        assert!(out.exhausted());
        let pinches: Vec<usize> = out.classes.iter().map(|c| c.profile.pinch_count()).collect();
        assert_eq!(pinches, vec![10, 10, 8, 8, 6, 4]);
        let mut genera: Vec<_> = out.classes.iter().map(|c| *c.profile.normalized_genus.numer()).collect();
        genera.sort();
        assert_eq!(genera, vec![0, 0, 1, 1, 2, 3]);
        let mut orders: Vec<u128> = out.classes.iter().map(|c| c.automorphism_order).collect();
        orders.sort();
        assert_eq!(orders, vec![4, 6, 8, 8, 16, 64]);
        for s in &out.solutions {
            assert_eq!(s.len(), 64);
        }
    }

    #[test]
    fn cell24_has_no_surface() {
        let m = build_regular_4_polytope(Regular4::Cell24).unwrap();
        let mut p = SearchProblem::new(m.complex.clone(), SearchMode::Surface);
        p.symmetry = Some(m.symmetry_group().clone());
        let out = search_hamiltonian_surfaces(&p).unwrap();
        assert!(out.exhausted());
        assert!(out.solutions.is_empty());
    }

    #[test]
    fn cell120_has_nothing() {
        let m = build_regular_4_polytope(Regular4::Cell120).unwrap();
        for mode in [SearchMode::Surface, SearchMode::Pinched] {
            let out = search_hamiltonian_surfaces(&SearchProblem::new(m.complex.clone(), mode)).unwrap();
            assert!(out.exhausted());
            assert!(out.solutions.is_empty());
        }
    }

    #[test]
    fn budget_is_reported() {
        let m = build_regular_4_polytope(Regular4::Cell24).unwrap();
        let mut p = SearchProblem::new(m.complex.clone(), SearchMode::Pinched);
        p.budget.max_nodes = Some(5);
        let out = search_hamiltonian_surfaces(&p).unwrap();
        assert_eq!(out.status, SearchStatus::BudgetExceeded);
    }
}
