use std::collections::{BTreeSet, HashSet};
use std::sync::OnceLock;

use serde::Serialize;

use super::{PermError, Permutation, StabChain};
use crate::complex::{Simplex, SimplicialComplex, VertexId};

pub const DEFAULT_DEGREE_BOUND: usize = 1000;

/// A permutation group given by generators; the stabilizer chain is built lazily.
#[derive(Debug, Clone)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    chain: OnceLock<StabChain>,
}

/// Union of the orbits of some seed simplices.
#[derive(Debug, Clone, Serialize)]
pub struct OrbitComplex {
    #[serde(skip)]
    pub complex: SimplicialComplex,
    /// One entry per seed, in seed order.
    pub orbit_lengths: Vec<usize>,
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self, PermError> {
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return Err(PermError::DegreeMismatch(g.degree(), degree));
        }
        Ok(PermGroup { degree, generators, chain: OnceLock::new() })
    }

    pub fn trivial(degree: usize) -> Self {
        PermGroup { degree, generators: Vec::new(), chain: OnceLock::new() }
    }

    /// Generators in 1-based cycle notation.
    pub fn from_cycles(degree: usize, generators: &[&str]) -> Result<Self, PermError> {
        let gens = generators.iter().map(|s| Permutation::parse_cycles(s, degree)).collect::<Result<_, _>>()?;
        PermGroup::new(degree, gens)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn chain(&self) -> &StabChain {
        self.chain.get_or_init(|| StabChain::new(self.degree, &self.generators))
    }

    pub fn order(&self) -> u128 {
        self.chain().order()
    }

    /// Order with the degree guard applied.
    pub fn group_order(&self, degree_bound: usize) -> Result<u128, PermError> {
        if self.degree > degree_bound {
            return Err(PermError::DegreeTooLarge { degree: self.degree, bound: degree_bound });
        }
        Ok(self.order())
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        self.chain().contains(g)
    }

    pub fn elements(&self) -> Vec<Permutation> {
        self.chain().elements()
    }

    /// Order by breadth-first closure over generator products; `None` past `limit` elements.
    pub fn closure_order(&self, limit: usize) -> Option<u128> {
        let id = Permutation::identity(self.degree);
        let mut seen: HashSet<Permutation> = HashSet::from([id.clone()]);
        let mut frontier = vec![id];
        while let Some(h) = frontier.pop() {
            for g in &self.generators {
                let x = h.then(g);
                if seen.insert(x.clone()) {
                    if seen.len() > limit {
                        return None;
                    }
                    frontier.push(x);
                }
            }
        }
        Some(seen.len() as u128)
    }

    pub fn orbit(&self, point: VertexId) -> Vec<VertexId> {
        let mut seen = vec![false; self.degree];
        seen[point as usize] = true;
        let mut orbit = vec![point];
        let mut k = 0;
        while k < orbit.len() {
            let p = orbit[k];
            for g in &self.generators {
                let q = g.apply(p);
                if !seen[q as usize] {
                    seen[q as usize] = true;
                    orbit.push(q);
                }
            }
            k += 1;
        }
        orbit.sort_unstable();
        orbit
    }

    pub fn is_transitive(&self) -> bool {
        self.degree == 0 || self.orbit(0).len() == self.degree
    }

    /// Orbit of a simplex under the pointwise action, sorted.
    pub fn simplex_orbit(&self, seed: &Simplex) -> Vec<Simplex> {
        let mut seen: BTreeSet<Simplex> = BTreeSet::from([seed.clone()]);
        let mut frontier = vec![seed.clone()];
        while let Some(s) = frontier.pop() {
            for g in &self.generators {
                let t = s.map(g.images());
                if seen.insert(t.clone()) {
                    frontier.push(t);
                }
            }
        }
        seen.into_iter().collect()
    }

    /// Complex generated by the orbits of `seeds`; every orbit length is
    /// checked to divide the group order.
    pub fn orbit_complex(&self, seeds: &[Simplex]) -> OrbitComplex {
        let order = self.order();
        let mut facets = BTreeSet::new();
        let mut orbit_lengths = Vec::with_capacity(seeds.len());
        for s in seeds {
            let orbit = self.simplex_orbit(s);
            assert_eq!(order % orbit.len() as u128, 0, "orbit length {} does not divide {}", orbit.len(), order);
            orbit_lengths.push(orbit.len());
            facets.extend(orbit);
        }
        OrbitComplex { complex: SimplicialComplex::from_facets(self.degree, facets.into_iter().collect()), orbit_lengths }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_group_has_order_one() {
        assert_eq!(PermGroup::trivial(5).order(), 1);
        assert_eq!(PermGroup::trivial(5).closure_order(10), Some(1));
    }

    #[test]
    fn degree_guard() {
        let g = PermGroup::trivial(1200);
        assert_eq!(g.group_order(DEFAULT_DEGREE_BOUND), Err(PermError::DegreeTooLarge { degree: 1200, bound: 1000 }));
    }

    #[test]
    fn chain_and_closure_agree() {
        let g = PermGroup::from_cycles(8, &["(1 2 3 4 5 6 7 8)", "(2 8)(3 7)(4 6)", "(1 5)"]).unwrap();
        assert_eq!(Some(g.order()), g.closure_order(10_000));
    }

    #[test]
    fn cyclic_orbit_of_consecutive_simplex() {
        // Z_8 orbit of <0 1 2 3>
        let g = PermGroup::from_cycles(8, &["(1 2 3 4 5 6 7 8)"]).unwrap();
        let oc = g.orbit_complex(&[Simplex::new(vec![0, 1, 2, 3]).unwrap()]);
        assert_eq!(oc.orbit_lengths, vec![8]);
        assert_eq!(oc.complex.facets().len(), 8);
    }
}
