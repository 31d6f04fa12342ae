//! Automorphism groups by backtracking along a chain of point stabilizers.

use std::collections::HashMap;

use log::debug;

use super::{PermError, PermGroup, Permutation};
use crate::complex::{Hypergraph, MatchSearch, PolytopalComplex, SimplicialComplex, VertexId};

/// All vertex permutations mapping facets onto facets.
pub fn automorphism_group(k: &SimplicialComplex) -> PermGroup {
    automorphisms_of(&Hypergraph::from_complex(k))
}

/// Vertex permutations preserving both the edge set and the 2-face set.
pub fn automorphism_group_of_polytope(p: &PolytopalComplex) -> PermGroup {
    let mut blocks: Vec<Vec<VertexId>> = p.edges.iter().map(|&(a, b)| vec![a, b]).collect();
    blocks.extend(p.faces2.iter().cloned());
    let adj = p.adjacency();
    let color = adj.iter().map(|a| a.len() as u64).collect();
    automorphisms_of(&Hypergraph::new(p.n_vertices, blocks, adj, color))
}

/// Generators for the full automorphism group of `h`.
///
/// Base points are added in ascending order until every vertex is singled out
/// by its colour and its distances to the base (then only the identity fixes
/// the base). At each level, a candidate image is searched for only if it is
/// not already in the orbit of the generators found so far that fix the
/// preceding base points.
pub(crate) fn automorphisms_of(h: &Hypergraph) -> PermGroup {
    let n = h.n;
    let mut gens: Vec<(usize, Permutation)> = Vec::new();
    let mut base: Vec<VertexId> = Vec::new();
    let mut search = MatchSearch::new(h, h);
    let mut orbit_product: u128 = 1;
    loop {
        let cells = profile_cells(h, &base);
        let Some(b) = (0..n as VertexId).find(|&v| cells[&profile(h, &base, v)].len() > 1) else { break };
        let level = base.len();
        let prefix: Vec<(VertexId, VertexId)> = base.iter().map(|&x| (x, x)).collect();
        let candidates = cells[&profile(h, &base, b)].clone();
        let mut in_orbit = vec![false; n];
        let mut orbit = vec![b];
        in_orbit[b as usize] = true;
        for y in candidates {
            if in_orbit[y as usize] {
                continue;
            }
            let mut pre = prefix.clone();
            pre.push((b, y));
            if let Some(images) = search.find(&pre) {
                let g = Permutation::from_images(images).expect("search yields a bijection");
                debug_assert!(h.preserves(g.images()));
                gens.push((level, g));
                // close the orbit under all generators at this level or deeper
                let level_gens: Vec<&Permutation> = gens.iter().filter(|(l, _)| *l >= level).map(|(_, g)| g).collect();
                let mut k = 0;
                while k < orbit.len() {
                    let p = orbit[k];
                    for g in &level_gens {
                        let q = g.apply(p);
                        if !in_orbit[q as usize] {
                            in_orbit[q as usize] = true;
                            orbit.push(q);
                        }
                    }
                    k += 1;
                }
            }
        }
        orbit_product *= orbit.len() as u128;
        base.push(b);
    }
    debug!("automorphism search: base {:?}, {} nodes, {} generators", base, search.nodes, gens.len());
    let group = PermGroup::new(n, gens.into_iter().map(|(_, g)| g).collect()).expect("degrees agree");
    // Orbits were closed under deeper generators only, so the level products
    // must equal the Schreier–Sims order.
    assert_eq!(group.order(), orbit_product, "stabilizer-chain order mismatch");
    group
}

fn profile(h: &Hypergraph, base: &[VertexId], v: VertexId) -> (u64, Vec<u16>) {
    (h.color[v as usize], base.iter().map(|&b| h.dist(v, b)).collect())
}

fn profile_cells(h: &Hypergraph, base: &[VertexId]) -> HashMap<(u64, Vec<u16>), Vec<VertexId>> {
    let mut cells: HashMap<_, Vec<VertexId>> = HashMap::new();
    for v in 0..h.n as VertexId {
        cells.entry(profile(h, base, v)).or_default().push(v);
    }
    cells
}

/// Whether an automorphism fixes no face of `k` setwise (in particular no vertex).
pub fn is_fixed_point_free(p: &Permutation, k: &SimplicialComplex) -> Result<bool, PermError> {
    if p.degree() != k.n_vertices() {
        return Err(PermError::DegreeMismatch(p.degree(), k.n_vertices()));
    }
    if !k.is_automorphism(p.images()) {
        return Err(PermError::NotAnAutomorphism);
    }
    if k.is_empty() {
        return Ok(true);
    }
    Ok(k.faces_by_dim().iter().flatten().all(|f| f.map(p.images()) != *f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::{cross_polytope, simplex_boundary};

    #[test]
    fn simplex_boundary_has_symmetric_group() {
        for d in 1..=5 {
            let g = automorphism_group(&simplex_boundary(d));
            assert_eq!(g.order(), (1..=(d as u128 + 1)).product::<u128>());
        }
    }

    #[test]
    fn cross_polytope_is_hyperoctahedral() {
        for d in 2..=5u32 {
            let (k, _) = cross_polytope(d as usize);
            let g = automorphism_group(&k);
            assert_eq!(g.order(), 2u128.pow(d) * (1..=d as u128).product::<u128>());
            assert!(g.generators().iter().all(|p| k.is_automorphism(p.images())));
        }
    }

    #[test]
    fn antipodal_map_is_fixed_point_free() {
        let (k, m) = cross_polytope(3);
        let mut images = vec![0; 6];
        for &(a, b) in &m {
            images[a as usize] = b;
            images[b as usize] = a;
        }
        let p = Permutation::from_images(images).unwrap();
        assert_eq!(is_fixed_point_free(&p, &k), Ok(true));
        assert_eq!(is_fixed_point_free(&Permutation::identity(6), &k), Ok(false));
        let swap = Permutation::parse_cycles("(1 3)", 6).unwrap();
        let q = p.then(&swap);
        if !k.is_automorphism(q.images()) {
            assert_eq!(is_fixed_point_free(&q, &k), Err(PermError::NotAnAutomorphism));
        }
    }
}
