//! Bistellar flips and heuristic sphere recognition.
//!
//! A move replaces `A * ∂B` by `∂A * B`, where the link of the face `A` is the
//! boundary of the simplex `B` and `B` is not yet a face. Moves are numbered
//! by `dim B`: a 0-move subdivides a facet, a `d`-move removes a vertex.

use std::collections::{BTreeMap, BTreeSet};

use num_integer::binomial;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::complex::{Simplex, SimplicialComplex, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FlipError {
    #[error("invalid bistellar move {0:?}")]
    InvalidMove(FlipMove),
    #[error("complex is not a closed pseudomanifold")]
    NotClosedPseudomanifold,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FlipMove {
    pub face: Vec<VertexId>,
    pub coface: Vec<VertexId>,
}

impl FlipMove {
    pub fn inverse(&self) -> FlipMove {
        FlipMove { face: self.coface.clone(), coface: self.face.clone() }
    }

    /// `dim` of the introduced simplex.
    pub fn kind(&self) -> usize {
        self.coface.len() - 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FlipConfig {
    pub max_moves: usize,
    pub plateau: usize,
    pub seed: u64,
}

impl Default for FlipConfig {
    fn default() -> Self {
        FlipConfig { max_moves: 100_000, plateau: 30, seed: 0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReductionStatus {
    ReducedToSimplexBoundary,
    BudgetExceeded,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReductionReport {
    pub status: ReductionStatus,
    pub seed: u64,
    pub rounds: usize,
    pub moves: Vec<FlipMove>,
    /// f-vector before the first move and after each move.
    pub f_trace: Vec<Vec<usize>>,
    /// Facets reached, in working vertex ids.
    pub final_facets: Vec<Vec<VertexId>>,
}

impl ReductionReport {
    pub fn reduced(&self) -> bool {
        self.status == ReductionStatus::ReducedToSimplexBoundary
    }

    /// Reapplies the recorded moves to `k`; returns the facets reached.
    pub fn replay(&self, k: &SimplicialComplex) -> Result<Vec<Vec<VertexId>>, FlipError> {
        let mut w = Working::new(k);
        for m in &self.moves {
            if !w.is_valid(m) {
                return Err(FlipError::InvalidMove(m.clone()));
            }
            w.apply(m);
        }
        Ok(w.facet_lists())
    }
}

/// Mutable facet set over working vertex ids. Removed vertices keep their ids
/// unused; inserted vertices get fresh ids, so move lists replay exactly.
#[derive(Debug, Clone)]
struct Working {
    dim: usize,
    facets: BTreeSet<Simplex>,
    star: BTreeMap<VertexId, BTreeSet<Simplex>>,
    next: VertexId,
    f: Vec<usize>,
}

impl Working {
    fn new(k: &SimplicialComplex) -> Self {
        let dim = k.dim().max(0) as usize;
        let mut w = Working {
            dim,
            facets: BTreeSet::new(),
            star: BTreeMap::new(),
            next: k.n_vertices() as VertexId,
            f: k.f_vector(),
        };
        for f in k.facets() {
            w.add(f.clone());
        }
        w
    }

    fn add(&mut self, f: Simplex) {
        for &v in f.vertices() {
            self.star.entry(v).or_default().insert(f.clone());
        }
        self.facets.insert(f);
    }

    fn remove(&mut self, f: &Simplex) {
        for v in f.vertices() {
            let s = self.star.get_mut(v).expect("vertex star");
            s.remove(f);
            if s.is_empty() {
                self.star.remove(v);
            }
        }
        self.facets.remove(f);
    }

    fn star_of(&self, a: &[VertexId]) -> Vec<&Simplex> {
        let Some(smallest) = a.iter().filter_map(|v| self.star.get(v)).min_by_key(|s| s.len()) else {
            return Vec::new();
        };
        if a.iter().any(|v| !self.star.contains_key(v)) {
            return Vec::new();
        }
        smallest.iter().filter(|f| a.iter().all(|v| f.contains(*v))).collect()
    }

    fn is_face(&self, b: &[VertexId]) -> bool {
        !self.star_of(b).is_empty()
    }

    /// The move at face `a`, if one exists.
    fn move_at(&self, a: &Simplex) -> Option<FlipMove> {
        let d = self.dim;
        let need = d + 2 - a.len();
        if a.len() == d + 1 {
            return self.facets.contains(a).then(|| FlipMove { face: a.vertices().to_vec(), coface: vec![self.next] });
        }
        let star = self.star_of(a.vertices());
        if star.len() != need {
            return None;
        }
        let b: BTreeSet<VertexId> = star.iter().flat_map(|f| f.vertices().iter().copied()).filter(|v| !a.contains(*v)).collect();
        if b.len() != need {
            return None;
        }
        let b: Vec<VertexId> = b.into_iter().collect();
        (!self.is_face(&b)).then(|| FlipMove { face: a.vertices().to_vec(), coface: b })
    }

    fn is_valid(&self, m: &FlipMove) -> bool {
        let Some(a) = Simplex::new(m.face.clone()) else { return false };
        match self.move_at(&a) {
            Some(found) if found.coface.len() == 1 => m.coface.len() == 1 && !self.star.contains_key(&m.coface[0]),
            Some(found) => found == *m,
            None => false,
        }
    }

    fn moves(&self) -> Vec<FlipMove> {
        let mut faces: BTreeSet<Simplex> = BTreeSet::new();
        for f in &self.facets {
            for k in 1..=f.len() {
                faces.extend(f.subfaces(k));
            }
        }
        faces.iter().filter_map(|a| self.move_at(a)).collect()
    }

    /// f-vector after applying `m`: faces containing `A` inside `A * ∂B` leave,
    /// faces containing `B` inside `∂A * B` arrive.
    fn f_after(&self, m: &FlipMove) -> Vec<usize> {
        let (a, b) = (m.face.len(), m.coface.len());
        let mut f: Vec<i64> = self.f.iter().map(|&x| x as i64).collect();
        for j in 0..b {
            f[a + j - 1] -= binomial(b, j) as i64;
        }
        for j in 0..a {
            f[b + j - 1] += binomial(a, j) as i64;
        }
        debug_assert_eq!(
            f.iter().enumerate().map(|(i, x)| if i % 2 == 0 { *x } else { -x }).sum::<i64>(),
            self.f.iter().enumerate().map(|(i, &x)| if i % 2 == 0 { x as i64 } else { -(x as i64) }).sum::<i64>(),
            "bistellar moves preserve χ"
        );
        f.into_iter().map(|x| x as usize).collect()
    }

    fn apply(&mut self, m: &FlipMove) {
        let a = Simplex::new(m.face.clone()).expect("distinct");
        let b = Simplex::new(m.coface.clone()).expect("distinct");
        self.f = self.f_after(m);
        for i in 0..b.len() {
            self.remove(&a.union(&b.without_index(i)));
        }
        for i in 0..a.len() {
            self.add(b.union(&a.without_index(i)));
        }
        if m.coface.len() == 1 {
            self.next = self.next.max(m.coface[0] + 1);
        }
        debug_assert!(self.closed_pseudomanifold(), "moves preserve closed pseudomanifolds");
    }

    fn closed_pseudomanifold(&self) -> bool {
        let mut ridges: BTreeMap<Simplex, u32> = BTreeMap::new();
        for f in &self.facets {
            for i in 0..f.len() {
                *ridges.entry(f.without_index(i)).or_insert(0) += 1;
            }
        }
        ridges.values().all(|&c| c == 2)
    }

    fn is_simplex_boundary(&self) -> bool {
        self.facets.len() == self.dim + 2 && self.star.len() == self.dim + 2
    }

    fn facet_lists(&self) -> Vec<Vec<VertexId>> {
        self.facets.iter().map(|f| f.vertices().to_vec()).collect()
    }
}

/// Compares f-vectors from the top dimension down.
fn top_down(f: &[usize]) -> Vec<usize> {
    f.iter().rev().copied().collect()
}

fn check_closed(k: &SimplicialComplex) -> Result<(), FlipError> {
    if k.dim() < 0 || !k.is_pure() || !Working::new(k).closed_pseudomanifold() {
        return Err(FlipError::NotClosedPseudomanifold);
    }
    Ok(())
}

/// Every admissible move. A 0-move introduces the vertex id `n_vertices`.
pub fn valid_flips(k: &SimplicialComplex) -> Result<Vec<FlipMove>, FlipError> {
    check_closed(k)?;
    Ok(Working::new(k).moves())
}

/// Applies one move; the result is re-densified with labels carried along
/// (an inserted vertex gets the next unused label).
pub fn apply_flip(k: &SimplicialComplex, m: &FlipMove) -> Result<SimplicialComplex, FlipError> {
    check_closed(k)?;
    let mut w = Working::new(k);
    if !w.is_valid(m) || (m.coface.len() == 1 && m.coface[0] as usize != k.n_vertices()) {
        return Err(FlipError::InvalidMove(m.clone()));
    }
    w.apply(m);
    let mut labels = k.labels().to_vec();
    if m.coface.len() == 1 {
        labels.push(labels.iter().copied().max().unwrap_or(0) + 1);
    }
    Ok(SimplicialComplex::with_labels(w.facets.into_iter().collect(), labels))
}

/// Heuristic reduction towards `∂Δ^{d+1}`: greedy top-down f-vector descent,
/// with random excursions of bounded length on plateaus. A budget overrun is
/// inconclusive, never a disproof.
pub fn recognize_sphere(k: &SimplicialComplex, config: &FlipConfig) -> Result<ReductionReport, FlipError> {
    check_closed(k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut w = Working::new(k);
    let mut moves = Vec::new();
    let mut f_trace = vec![w.f.clone()];
    let mut rounds = 0;
    let mut excursion = 0usize;
    while !w.is_simplex_boundary() && moves.len() < config.max_moves {
        rounds += 1;
        let all = w.moves();
        let current = top_down(&w.f);
        let scored: Vec<(Vec<usize>, &FlipMove)> = all.iter().map(|m| (top_down(&w.f_after(m)), m)).collect();
        let best = scored.iter().map(|(s, _)| s).min().expect("a closed pseudomanifold admits a 0-move");
        let chosen = if *best < current && excursion == 0 {
            let ties: Vec<&FlipMove> = scored.iter().filter(|(s, _)| s == best).map(|(_, m)| *m).collect();
            (*ties.choose(&mut rng).expect("nonempty")).clone()
        } else {
            // plateau: take the cheapest move that does not add a vertex, avoiding the last one's inverse
            if excursion == 0 {
                excursion = config.plateau.max(1);
            }
            excursion -= 1;
            let last_inv = moves.last().map(FlipMove::inverse);
            let pool: Vec<&FlipMove> = all
                .iter()
                .filter(|m| m.coface.len() > 1 && Some(*m) != last_inv.as_ref())
                .collect();
            let pool = if pool.is_empty() { all.iter().collect() } else { pool };
            let growth = |m: &FlipMove| m.face.len() as i64 - m.coface.len() as i64;
            let least = pool.iter().map(|m| growth(m)).min().expect("nonempty");
            let cheapest: Vec<&FlipMove> = pool.into_iter().filter(|m| growth(m) == least).collect();
            let m = (*cheapest.choose(&mut rng).expect("nonempty")).clone();
            if excursion > 0 && top_down(&w.f_after(&m)) < current {
                excursion = 0;
            }
            m
        };
        w.apply(&chosen);
        f_trace.push(w.f.clone());
        moves.push(chosen);
    }
    let status =
        if w.is_simplex_boundary() { ReductionStatus::ReducedToSimplexBoundary } else { ReductionStatus::BudgetExceeded };
    Ok(ReductionReport { status, seed: config.seed, rounds, moves, f_trace, final_facets: w.facet_lists() })
}

/// Exact sphere recognition in dimensions ≤ 2; `None` above.
pub fn exact_sphere(k: &SimplicialComplex) -> Option<bool> {
    let d = k.dim();
    if d > 2 {
        return None;
    }
    if !k.is_pure() {
        return Some(false);
    }
    Some(match d {
        -1 => k.facets().len() == 1,
        0 => k.n_vertices() == 2,
        1 => k.connected_components() == 1 && k.edge_graph().iter().all(|a| a.len() == 2),
        _ => {
            k.connected_components() == 1
                && k.euler_characteristic() == 2
                && k.faces(0).iter().all(|v| k.link(v).map(|l| exact_sphere(&l) == Some(true)).unwrap_or(false))
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LinkStatus {
    /// Decided by exact classification (dimension ≤ 2).
    Exact,
    /// Reduced to a simplex boundary by bistellar moves.
    Reduced,
    NotASphere,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct LinkCertificate {
    /// Vertex labels of the face.
    pub face: Vec<u32>,
    pub link_f_vector: Vec<usize>,
    pub status: LinkStatus,
    pub moves: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ManifoldReport {
    pub dim: isize,
    pub certified: bool,
    pub faces_checked: usize,
    /// One entry per vertex.
    pub vertex_links: Vec<LinkCertificate>,
    /// Faces of any dimension whose link is not certified.
    pub failures: Vec<LinkCertificate>,
}

fn certify_link(k: &SimplicialComplex, face: &Simplex, config: &FlipConfig) -> LinkCertificate {
    let link = k.link(face).expect("face of the complex");
    let (status, moves) = match exact_sphere(&link) {
        Some(true) => (LinkStatus::Exact, 0),
        Some(false) => (LinkStatus::NotASphere, 0),
        None => match recognize_sphere(&link, config) {
            Ok(r) if r.reduced() => (LinkStatus::Reduced, r.moves.len()),
            Ok(r) => (LinkStatus::Inconclusive, r.moves.len()),
            Err(_) => (LinkStatus::NotASphere, 0),
        },
    };
    LinkCertificate { face: k.labels_of(face), link_f_vector: link.f_vector(), status, moves }
}

/// Certifies every face link as a sphere: exactly up to dimension 2,
/// heuristically above. Links of vertices are reported individually.
pub fn certify_combinatorial_manifold(k: &SimplicialComplex, config: &FlipConfig) -> ManifoldReport {
    let d = k.dim();
    let faces: Vec<Simplex> = (0..d.max(0) as usize).flat_map(|i| k.faces(i).iter().cloned()).collect();
    let certs: Vec<LinkCertificate> = faces.par_iter().map(|f| certify_link(k, f, config)).collect();
    let n = k.faces(0).len();
    let ok = |c: &LinkCertificate| matches!(c.status, LinkStatus::Exact | LinkStatus::Reduced);
    let failures: Vec<LinkCertificate> = certs.iter().filter(|c| !ok(c)).cloned().collect();
    let pseudo = d >= 0 && check_closed(k).is_ok();
    ManifoldReport {
        dim: d,
        certified: pseudo && failures.is_empty(),
        faces_checked: certs.len(),
        vertex_links: certs.into_iter().take(n).collect(),
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{complex_from_lists, parse_facet_list};
    use crate::homology::{homology, Coefficients};
    use crate::polytope::{cross_polytope, simplex_boundary};
    use rand::Rng;

    fn bipyramid() -> SimplicialComplex {
        // triangle 0 1 2 with apexes 3 and 4
        complex_from_lists(5, &[&[0, 1, 3], &[1, 2, 3], &[0, 2, 3], &[0, 1, 4], &[1, 2, 4], &[0, 2, 4]])
    }

    #[test]
    fn tetrahedron_boundary_moves() {
        let k = simplex_boundary(3);
        let moves = valid_flips(&k).unwrap();
        // four facet subdivisions; edge flips would recreate an existing edge,
        // vertex removals an existing triangle
        assert_eq!(moves.len(), 4);
        assert!(moves.iter().all(|m| m.kind() == 0));
        let k2 = apply_flip(&k, &moves[0]).unwrap();
        assert_eq!(k2.f_vector(), vec![5, 9, 6]);
    }

    #[test]
    fn bipyramid_edge_flip() {
        let k = bipyramid();
        let moves = valid_flips(&k).unwrap();
        let flip = FlipMove { face: vec![0, 1], coface: vec![3, 4] };
        assert!(moves.contains(&flip));
        let k2 = apply_flip(&k, &flip).unwrap();
        assert!(k2.contains_face(&Simplex::new(vec![3, 4]).unwrap()));
        assert!(!k2.contains_face(&Simplex::new(vec![0, 1]).unwrap()));
        assert_eq!(apply_flip(&k2, &flip.inverse()).unwrap(), k);
        assert!(matches!(apply_flip(&k, &flip.inverse()), Err(FlipError::InvalidMove(_))));
    }

    #[test]
    fn random_moves_are_reversible_and_keep_homology() {
        let (k0, _) = cross_polytope(4);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut k = k0.clone();
        for _ in 0..25 {
            let moves = valid_flips(&k).unwrap();
            let m = moves[rng.gen_range(0..moves.len())].clone();
            let next = apply_flip(&k, &m).unwrap();
            if m.coface.len() > 1 && m.face.len() > 1 {
                assert_eq!(apply_flip(&next, &m.inverse()).unwrap(), k);
            }
            assert_eq!(next.euler_characteristic(), k.euler_characteristic());
            k = next;
        }
        assert_eq!(homology(&k, Coefficients::Z), homology(&k0, Coefficients::Z));
    }

    #[test]
    fn cross_polytope_reduces() {
        let (k, _) = cross_polytope(4);
        let r = recognize_sphere(&k, &FlipConfig::default()).unwrap();
        assert!(r.reduced());
        assert_eq!(r.f_trace[0][3], 16);
        assert_eq!(r.f_trace.last().unwrap()[3], 5);
        assert_eq!(r.replay(&k).unwrap(), r.final_facets);
    }

    #[test]
    fn link_of_sixteen_reduces() {
        let (k, _) = parse_facet_list(include_str!("../../fixtures/theorem2_link16.txt")).unwrap();
        assert_eq!(k.f_vector()[3], 70);
        assert!(!valid_flips(&k).unwrap().is_empty());
        let r = recognize_sphere(&k, &FlipConfig::default()).unwrap();
        assert!(r.reduced(), "{:?}", r.f_trace.last());
        assert_eq!(r.replay(&k).unwrap(), r.final_facets);
    }

    #[test]
    fn exact_low_dimensions() {
        assert_eq!(exact_sphere(&simplex_boundary(2)), Some(true));
        assert_eq!(exact_sphere(&bipyramid()), Some(true));
        let two_circles = complex_from_lists(6, &[&[0, 1], &[1, 2], &[0, 2], &[3, 4], &[4, 5], &[3, 5]]);
        assert_eq!(exact_sphere(&two_circles), Some(false));
        let torus = crate::complex::product(&simplex_boundary(2), &simplex_boundary(2));
        assert_eq!(exact_sphere(&torus), Some(false));
        assert_eq!(exact_sphere(&simplex_boundary(4)), None);
    }

    #[test]
    fn cross_polytopes_are_manifolds() {
        for d in 2..=6 {
            let r = certify_combinatorial_manifold(&cross_polytope(d).0, &FlipConfig::default());
            assert!(r.certified, "∂β^{d}: {:?}", r.failures);
            assert_eq!(r.vertex_links.len(), 2 * d);
        }
    }

    #[test]
    fn suspension_point_fails() {
        // two tetrahedron boundaries glued at a vertex: that vertex's link is two circles
        let k = complex_from_lists(
            7,
            &[&[0, 1, 2], &[0, 1, 3], &[0, 2, 3], &[1, 2, 3], &[0, 4, 5], &[0, 4, 6], &[0, 5, 6], &[4, 5, 6]],
        );
        let r = certify_combinatorial_manifold(&k, &FlipConfig::default());
        assert!(!r.certified);
        assert_eq!(r.failures[0].face, vec![1]);
    }
}
